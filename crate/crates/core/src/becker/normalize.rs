//! Moving the root-of-unity zeros of non-coprime order out of `a_0`.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::cyclotomic::{
    classify_unity_zeros, cyclotomic_profile, euler_phi, reversed_cyclotomic, FixedOrder,
};
use crate::algebra::{Poly, Rational};
use crate::error::{Error, Result};
use crate::mahler::{verify, MahlerEquation, Verification};
use crate::series::LaurentSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeckerNormalization {
    pub k: usize,
    /// `(order n, multiplicity e)` for the zeros of `a_0` whose order shares
    /// a factor with `k`.
    pub set_a: Vec<(usize, usize)>,
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma: usize,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub c: Rational,
    #[serde(rename = "Q")]
    pub q: Poly,
    #[serde(rename = "P")]
    pub p: Poly,
    pub h: Poly,
    pub a: Poly,
    /// Zeros of `a_0` of order coprime to `k`. They stay in `q_0`; when the
    /// equation is primitive and minimal they rule out regularity.
    pub fixed_unity_zeros: Vec<FixedOrder>,
    pub new_eq: MahlerEquation,
}

fn pow_mod(base: usize, exp: usize, m: usize) -> usize {
    let mut result = 1u128 % m as u128;
    let mut b = base as u128 % m as u128;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    result as usize
}

/// Least `M >= 1` with `k^{2M} = k^M (mod n)`.
pub fn stabilization_index(k: usize, n: usize) -> usize {
    (1..=n.max(1))
        .find(|&m| pow_mod(k, 2 * m, n) == pow_mod(k, m, n))
        .expect("k^i mod n is eventually periodic with preperiod and period at most n")
}

/// `prod_{j < N} (1 - z^{k^j} w)^e` over the orbit of primitive `n`-th roots
/// `zeta`, with `w = conj(zeta)^{k^N}`.
///
/// `w` runs over the primitive roots of order `n / gcd(n, k^N)`, each hit
/// `phi(n) / phi(n')` times, so the orbit product is a power of a reversed
/// cyclotomic polynomial.
pub fn orbit_factor(k: usize, n: usize, e: usize, big_n: usize) -> Poly {
    let g = n.gcd(&pow_mod(k, big_n, n));
    let reduced = n / g;
    let base = reversed_cyclotomic(reduced).pow(e * euler_phi(n) / euler_phi(reduced));
    (0..big_n).fold(Poly::one(), |acc, j| &acc * &base.substitute_power(k.pow(j as u32)))
}

/// Computes `Q`, `P`, `h`, `gamma`, `c`, `a` and the equation for
/// `G = F / (z^gamma Q)`.
///
/// `N` is the lcm of the stabilization indices, or 1 when `A` is empty.
pub fn normalize(eq: &MahlerEquation) -> Result<BeckerNormalization> {
    let k = eq.k();
    let a0 = eq.a(0);
    let profile = cyclotomic_profile(a0);
    let classes = classify_unity_zeros(&profile, k);
    let set_a = classes.set_a;
    let big_n = set_a
        .iter()
        .fold(1usize, |acc, &(n, _)| acc.lcm(&stabilization_index(k, n)));
    let q = set_a
        .iter()
        .fold(Poly::one(), |acc, &(n, e)| &acc * &orbit_factor(k, n, e, big_n));
    let p = set_a
        .iter()
        .fold(Poly::one(), |acc, &(n, e)| &acc * &reversed_cyclotomic(n).pow(e));
    let inexact = |what: &str| Error::Invariant(format!("normalization: {what} is not exact"));
    let h = q
        .substitute_power(k)
        .exact_div(&(&q * &p))
        .map_err(|_| inexact("Q(z^k) / (Q P)"))?;

    let gamma = a0.valuation().expect("a_0 is nonzero");
    let shifted = a0.unshift(gamma);
    let c = shifted.coeff(0);
    let a = shifted
        .scale(&c.recip())
        .exact_div(&p)
        .map_err(|_| inexact("a_0 / (c z^gamma P)"))?;

    let mut coeffs = vec![a.scale(&c)];
    // running product of P(z^{k^{j-1}}) h(z^{k^{j-1}}) for j = 2..=i
    let mut carried = Poly::one();
    for i in 1..=eq.degree() {
        if i >= 2 {
            let s = k.pow(i as u32 - 1);
            carried = &carried * &(&p.substitute_power(s) * &h.substitute_power(s));
        }
        let lift = gamma * (k.pow(i as u32) - 2);
        coeffs.push(&(&eq.a(i).shift(lift) * &h) * &carried);
    }
    let new_eq = MahlerEquation::new(k, coeffs)?;
    Ok(BeckerNormalization {
        k,
        set_a,
        n: big_n,
        gamma,
        c,
        q,
        p,
        h,
        a,
        fixed_unity_zeros: classes.fixed_type,
        new_eq,
    })
}

/// `G = F / (z^gamma Q)` from a prefix of `F`.
pub fn g_series(norm: &BeckerNormalization, f: &LaurentSeries) -> Result<LaurentSeries> {
    let order = f.order() - norm.gamma as i64;
    let inv_q = LaurentSeries::from_poly(&norm.q, order.max(0)).invert()?;
    Ok(f.shift(-(norm.gamma as i64)).mul(&inv_q))
}

/// Checks the equation for `G` on the prefix that `F` determines.
pub fn verify_normalization(norm: &BeckerNormalization, f: &LaurentSeries) -> Result<Verification> {
    Ok(verify(&norm.new_eq, &g_series(norm, f)?))
}

/// The identities every normalization satisfies, as error messages.
pub fn normalization_violations(norm: &BeckerNormalization) -> Vec<String> {
    let mut out = Vec::new();
    if norm.q.coeff(0) != Rational::one() {
        out.push("Q(0) != 1".to_string());
    }
    if norm.p.coeff(0) != Rational::one() {
        out.push("P(0) != 1".to_string());
    }
    if norm.c.is_zero() || norm.new_eq.a(0).coeff(0) != norm.c {
        out.push("q_0(0) != c".to_string());
    }
    if norm.q.substitute_power(norm.k) != &(&norm.q * &norm.p) * &norm.h {
        out.push("Q(z^k) != Q P h".to_string());
    }
    let q0 = classify_unity_zeros(&cyclotomic_profile(norm.new_eq.a(0)), norm.k);
    if !q0.set_a.is_empty() {
        out.push("q_0 keeps a zero of order not coprime to k".to_string());
    }
    out
}
