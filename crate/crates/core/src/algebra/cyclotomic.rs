//! Cyclotomic factors and root-of-unity zeros of rational polynomials.
//!
//! Roots of unity are never represented numerically; a zero of order `n`
//! stands for the whole Galois orbit of primitive `n`-th roots, i.e. the
//! factor `Phi_n`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::rational::{q, Rational};

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: usize) -> Poly {
    assert!(n >= 1);
    thread_local! {
        static CACHE: RefCell<HashMap<usize, Poly>> = RefCell::new(HashMap::new());
    }
    if let Some(p) = CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    let mut p = &Poly::monomial(q(1), n) - &Poly::one();
    for d in (1..n).filter(|d| n % d == 0) {
        p = p.exact_div(&cyclotomic(d)).expect("cyclotomic divisor");
    }
    CACHE.with(|c| c.borrow_mut().insert(n, p.clone()));
    p
}

/// `prod (1 - w*eta)` over the primitive `n`-th roots `eta`; constant term 1.
pub fn reversed_cyclotomic(n: usize) -> Poly {
    if n == 1 {
        Poly::from_ints(&[1, -1])
    } else {
        // Phi_n is palindromic for n >= 2
        cyclotomic(n)
    }
}

pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Least `M >= 1` with `k^M = 1 (mod n)`, if `gcd(n, k) = 1`.
pub fn multiplicative_order(k: usize, n: usize) -> Option<usize> {
    if n == 1 {
        return Some(1);
    }
    if k.gcd(&n) != 1 {
        return None;
    }
    let mut x = k % n;
    for m in 1..=n {
        if x == 1 {
            return Some(m);
        }
        x = x * k % n;
    }
    None
}

/// Splits off every power of `factor` dividing `p`; returns the multiplicity
/// and the cofactor.
pub fn strip_factor(p: &Poly, factor: &Poly) -> (usize, Poly) {
    let mut count = 0;
    let mut rest = p.clone();
    if p.is_zero() || factor.is_constant() {
        return (0, rest);
    }
    loop {
        match rest.divrem(factor) {
            Ok((quot, rem)) if rem.is_zero() => {
                rest = quot;
                count += 1;
            }
            _ => return (count, rest),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicProfile {
    /// Multiplicity of the root 0.
    pub z_power: usize,
    /// `(order n, multiplicity e)` in increasing order of `n`.
    pub cyclo: Vec<(usize, usize)>,
    /// Monic cofactor with no zero at 0 and no root-of-unity zero.
    pub remainder: Poly,
    #[serde(with = "super::rational::serde_rational")]
    pub unit: Rational,
}

impl CyclotomicProfile {
    pub fn reconstruct(&self) -> Poly {
        let mut p = Poly::monomial(self.unit.clone(), self.z_power);
        for &(n, e) in &self.cyclo {
            p = &p * &cyclotomic(n).pow(e);
        }
        &p * &self.remainder
    }

    /// Multiplicity of `Phi_n` (zero for absent orders).
    pub fn multiplicity(&self, n: usize) -> usize {
        self.cyclo
            .iter()
            .find(|(m, _)| *m == n)
            .map_or(0, |&(_, e)| e)
    }

    /// True when every zero is 0 or a root of unity.
    pub fn only_unity_zeros(&self) -> bool {
        self.remainder.is_constant()
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime `l = 1 (mod n)` and an element of exact order `n` modulo `l`.
fn root_of_unity_mod_prime(n: u64) -> (u64, u64) {
    let l = (1..)
        .map(|t| t * n + 1)
        .find(|&l| l > 1000 && is_prime(l))
        .expect("primes in progressions");
    let factors = prime_factors(n);
    let w = (2..l)
        .map(|g| pow_mod(g, (l - 1) / n, l))
        .find(|&w| factors.iter().all(|&f| pow_mod(w, n / f, l) != 1))
        .expect("the multiplicative group is cyclic");
    (l, w)
}

/// False when `Phi_n` certainly does not divide the integer polynomial.
///
/// If `Phi_n | p` over Q then, by Gauss's lemma, `p = Phi_n s` with `s`
/// integral, so `p(w) = 0 mod l` at every `w` of exact order `n` mod `l`.
fn may_vanish_at_unity(ints: &[BigInt], n: usize) -> bool {
    let n = n as u64;
    if n.checked_mul(n).is_none_or(|x| x > u64::MAX / 4) {
        return true;
    }
    let (l, w) = root_of_unity_mod_prime(n);
    let lb = BigInt::from(l);
    let value = ints.iter().rev().fold(0u64, |acc, c| {
        let c = c.mod_floor(&lb).to_u64().expect("reduced below l");
        ((acc as u128 * w as u128 + c as u128) % l as u128) as u64
    });
    value == 0
}

/// Profiles the zero set of a nonzero polynomial.
///
/// Candidate orders are all `n <= 2 deg^2` with `phi(n) <= deg`; this is
/// complete because `phi(n) >= sqrt(n/2)`.
pub fn cyclotomic_profile(p: &Poly) -> CyclotomicProfile {
    assert!(!p.is_zero(), "profile of the zero polynomial");
    let z_power = p.valuation().unwrap_or(0);
    let mut rest = p.unshift(z_power);
    let deg = rest.deg0();
    let mut cyclo = Vec::new();
    let mut ints = rest.integer_form().0;
    for n in 1..=(2 * deg * deg).max(1) {
        if rest.is_constant() {
            break;
        }
        if euler_phi(n) > rest.deg0() || !may_vanish_at_unity(&ints, n) {
            continue;
        }
        let (e, cof) = strip_factor(&rest, &cyclotomic(n));
        if e > 0 {
            cyclo.push((n, e));
            rest = cof;
            ints = rest.integer_form().0;
        }
    }
    let unit = rest.leading();
    CyclotomicProfile {
        z_power,
        cyclo,
        remainder: rest.monic(),
        unit,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedOrder {
    pub order: usize,
    pub multiplicity: usize,
    /// Least `M >= 1` with `k^M = 1 (mod order)`, so `zeta^(k^M) = zeta`.
    pub period: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnityClassification {
    /// Orders coprime to `k`: roots fixed by some iterate of `z -> z^k`.
    pub fixed_type: Vec<FixedOrder>,
    /// Orders sharing a factor with `k` (the set `A`), with multiplicities.
    pub set_a: Vec<(usize, usize)>,
}

pub fn classify_unity_zeros(profile: &CyclotomicProfile, k: usize) -> UnityClassification {
    let mut fixed_type = Vec::new();
    let mut set_a = Vec::new();
    for &(n, e) in &profile.cyclo {
        match multiplicative_order(k, n) {
            Some(period) => fixed_type.push(FixedOrder {
                order: n,
                multiplicity: e,
                period,
            }),
            None => set_a.push((n, e)),
        }
    }
    UnityClassification { fixed_type, set_a }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(3), p(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn profile_of_one_minus_z() {
        let prof = cyclotomic_profile(&p(&[1, -1]));
        assert_eq!(prof.z_power, 0);
        assert_eq!(prof.cyclo, vec![(1, 1)]);
        assert!(prof.remainder.is_one());
        assert_eq!(prof.reconstruct(), p(&[1, -1]));
    }

    #[test]
    fn profile_of_constructed_product() {
        let poly = &(&Poly::monomial(q(1), 3) * &p(&[1, 1]).pow(2)) * &p(&[1, 1, 1]);
        let prof = cyclotomic_profile(&poly);
        assert_eq!(prof.z_power, 3);
        assert_eq!(prof.cyclo, vec![(2, 2), (3, 1)]);
        assert!(prof.remainder.is_one());
    }

    #[test]
    fn golden_ratio_polynomial_has_no_unity_zero() {
        let prof = cyclotomic_profile(&p(&[-1, -1, 1]));
        assert!(prof.cyclo.is_empty());
        assert_eq!(prof.remainder, p(&[-1, -1, 1]));
    }

    #[test]
    fn classification_examples() {
        let c = classify_unity_zeros(&cyclotomic_profile(&p(&[1, -1])), 2);
        assert_eq!(
            c.fixed_type,
            vec![FixedOrder {
                order: 1,
                multiplicity: 1,
                period: 1
            }]
        );
        assert!(c.set_a.is_empty());

        let c = classify_unity_zeros(&cyclotomic_profile(&p(&[1, 1])), 2);
        assert_eq!(c.set_a, vec![(2, 1)]);

        let c = classify_unity_zeros(&cyclotomic_profile(&p(&[1, 1, 1])), 2);
        assert_eq!(
            c.fixed_type,
            vec![FixedOrder {
                order: 3,
                multiplicity: 1,
                period: 2
            }]
        );
    }

    /// Brute force: does some iterate of `e -> k e mod n` return to 1?
    fn returns_to_one(n: usize, k: usize) -> bool {
        let mut e = 1 % n;
        for _ in 0..n {
            e = e * k % n;
            if e == 1 % n {
                return true;
            }
        }
        false
    }

    proptest! {
        #[test]
        fn set_a_iff_not_coprime(n in 1usize..40, k in 2usize..7) {
            let prof = CyclotomicProfile {
                z_power: 0,
                cyclo: vec![(n, 1)],
                remainder: Poly::one(),
                unit: q(1),
            };
            let c = classify_unity_zeros(&prof, k);
            prop_assert_eq!(!c.set_a.is_empty(), n.gcd(&k) > 1);
            prop_assert_eq!(c.set_a.is_empty(), returns_to_one(n, k));
        }

        #[test]
        fn profile_reconstructs(
            zp in 0usize..3,
            orders in proptest::collection::vec((1usize..=12, 1usize..=2), 0..3),
            quad in proptest::option::of((-2i64..=2, 2i64..=4)),
            scale in 1i64..5,
        ) {
            let mut poly = Poly::monomial(q(scale), zp);
            for &(n, e) in &orders {
                poly = &poly * &cyclotomic(n).pow(e);
            }
            if let Some((b, c)) = quad {
                // |b| <= 2 rules out the roots 1 and -1; complex roots have modulus sqrt(c) > 1
                poly = &poly * &p(&[c, b, 1]);
            }
            let prof = cyclotomic_profile(&poly);
            prop_assert_eq!(prof.reconstruct(), poly);
            prop_assert_eq!(prof.z_power, zp);
            for &(n, _) in &orders {
                prop_assert!(prof.multiplicity(n) >= 1);
            }
            prop_assert_eq!(prof.only_unity_zeros(), quad.is_none());
        }
    
        /// Substituting `z -> z^{k^m}` keeps every zero at 0 or at a root of
        /// unity of order sharing a factor with `k`.
        #[test]
        fn substitution_keeps_orders_non_coprime(
            k in 2usize..=3,
            zp in 0usize..2,
            picks in proptest::collection::vec(0usize..4, 1..=2),
            m in 1u32..=3,
        ) {
            let orders: Vec<usize> = (2..=8).filter(|n| n.gcd(&k) > 1).collect();
            let mut poly = Poly::monomial(q(1), zp);
            for &i in &picks {
                poly = &poly * &cyclotomic(orders[i % orders.len()]);
            }
            let prof = cyclotomic_profile(&poly.substitute_power(k.pow(m)));
            prop_assert!(prof.only_unity_zeros());
            prop_assert!(prof.cyclo.iter().all(|&(n, _)| n.gcd(&k) > 1));
            prop_assert!(classify_unity_zeros(&prof, k).fixed_type.is_empty());
        }
    }
}
