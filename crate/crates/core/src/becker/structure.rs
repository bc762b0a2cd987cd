//! Equations with regular-friendly `a_0`, the product structure of Mahler
//! functions, and representations of reciprocals.

use serde::{Deserialize, Serialize};

use super::certify::{certify_regular, Verdict};
use super::normalize::BeckerNormalization;
use crate::algebra::cyclotomic::cyclotomic_profile;
use crate::algebra::{Poly, Rational};
use crate::error::{Error, Result};
use crate::mahler::MahlerEquation;
use crate::regular::{closure_rep, ClosureCaps, ClosureOutcome, LinearRepresentation};
use crate::series::LaurentSeries;

/// Clears the denominators of the equation with `a_0 = 1` for
/// `G = F / (z^gamma Q)`, giving an equation for `F` whose `a_0` is
/// `z^{gamma (k^D - 1)} Q(z^k) ... Q(z^{k^D})`.
pub fn witness_display(norm: &BeckerNormalization, becker_eq: &MahlerEquation) -> Result<MahlerEquation> {
    if !becker_eq.a(0).is_one() {
        return Err(Error::InvalidArgument("the equation for G must have a_0 = 1".into()));
    }
    if becker_eq.k() != norm.k {
        return Err(Error::InvalidArgument("k differs between normalization and equation".into()));
    }
    let k = norm.k;
    let depth = becker_eq.degree();
    let kd = k.pow(depth as u32);
    let qs: Vec<Poly> = (0..=depth).map(|j| norm.q.substitute_power(k.pow(j as u32))).collect();
    let all_but = |i: usize| {
        qs.iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Poly::one(), |acc, (_, p)| &acc * p)
    };
    let coeffs = (0..=depth)
        .map(|i| {
            let lift = norm.gamma * (kd - k.pow(i as u32));
            &becker_eq.a(i).shift(lift) * &all_but(i)
        })
        .collect();
    MahlerEquation::new(k, coeffs)
}

/// [`witness_display`] with the common factor of its coefficients removed,
/// checked to pass [`certify_regular`].
///
/// The display itself can fail that test: `Q` may have zeros of order
/// coprime to `k` (for `a_0 = 1 + z`, `k = 2` one gets `Q = 1 - z`), and
/// they reach `a_0` through `Q(z^k)`. In the cases seen they cancel
/// against the other coefficients.
pub fn witness_equation(norm: &BeckerNormalization, becker_eq: &MahlerEquation) -> Result<MahlerEquation> {
    let eq = witness_display(norm, becker_eq)?.normalized();
    let cert = certify_regular(&eq);
    if cert.verdict != Verdict::Regular {
        return Err(Error::Invariant(format!(
            "witness equation {eq} is not certified regular: {}",
            cert.trace.join("; ")
        )));
    }
    Ok(eq)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDecomposition {
    /// `F * prod_{j < factors} Gamma(z^{k^j})`.
    #[serde(rename = "J")]
    pub j: LaurentSeries,
    /// `a_0 = rho z^delta Gamma(z)` with `Gamma(0) = 1`.
    #[serde(rename = "Gamma")]
    pub gamma: Poly,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub rho: Rational,
    pub delta: usize,
    /// Number of factors of the product used; the rest are 1 to the order of `F`.
    pub factors: usize,
}

/// `prod_{j < count} p(z^{k^j})` to relative order `order`.
fn truncated_product(p: &Poly, k: usize, count: usize, order: i64) -> LaurentSeries {
    (0..count).fold(LaurentSeries::from_poly(&Poly::one(), order), |acc, j| {
        acc.mul(&LaurentSeries::from_poly(&p.substitute_power(k.pow(j as u32)), order))
    })
}

/// Least `J` with `k^J >= span`.
fn factor_count(k: usize, span: i64) -> usize {
    let mut count = 0;
    let mut power = 1i64;
    while power < span {
        power = power.saturating_mul(k as i64);
        count += 1;
    }
    count
}

/// `F = J / prod_j Gamma(z^{k^j})` with `a_0 = rho z^delta Gamma`.
pub fn structure_decompose(eq: &MahlerEquation, f: &LaurentSeries) -> StructureDecomposition {
    let k = eq.k();
    let a0 = eq.a(0);
    let delta = a0.valuation().expect("a_0 is nonzero");
    let shifted = a0.unshift(delta);
    let rho = shifted.coeff(0);
    let gamma = shifted.scale(&rho.recip());
    // Gamma(z^{k^j}) = 1 mod z^{k^j}, so factors with k^j >= span change nothing
    let span = f.order() - f.valuation().min(f.order()).min(0);
    let factors = factor_count(k, span);
    let product = truncated_product(&gamma, k, factors, span.max(0));
    StructureDecomposition {
        j: f.mul(&product),
        gamma,
        rho,
        delta,
        factors,
    }
}

/// `J / prod_{j < factors} Gamma(z^{k^j})`, which recovers `F`.
pub fn recompose(dec: &StructureDecomposition, k: usize) -> Result<LaurentSeries> {
    let span = dec.j.order() - dec.j.valuation().min(dec.j.order()).min(0);
    let product = truncated_product(&dec.gamma, k, dec.factors, span.max(0));
    Ok(dec.j.mul(&product.invert()?))
}

const RECIPROCAL_TERMS: i64 = 256;

fn closure_of(eq: &MahlerEquation, f: &LaurentSeries, caps: ClosureCaps) -> Result<LinearRepresentation> {
    match closure_rep(eq, f, caps)? {
        ClosureOutcome::Found { rep, .. } => Ok(rep),
        ClosureOutcome::Inconclusive { reason, .. } => Err(Error::Invariant(format!(
            "closure of a provably regular series did not stabilize: {reason}"
        ))),
    }
}

/// Linear representation of `1 / Q`.
///
/// `R = 1/Q` solves `Q(z) R(z) - Q(z^k) R(z^k) = 0`, and the closure of
/// that equation is finite because the poles of `R` are roots of unity.
pub fn reciprocal_rep(q: &Poly, k: usize, caps: ClosureCaps) -> Result<LinearRepresentation> {
    if q.coeff(0) != Rational::from_integer(1.into()) {
        return Err(Error::InvalidArgument("Q(0) must be 1".into()));
    }
    if !cyclotomic_profile(q).only_unity_zeros() {
        return Err(Error::InvalidArgument(
            "1/Q is regular only when every zero of Q is a root of unity".into(),
        ));
    }
    let eq = MahlerEquation::new(k, vec![q.clone(), -&q.substitute_power(k)])?;
    let r = LaurentSeries::from_poly(q, RECIPROCAL_TERMS).invert()?;
    closure_of(&eq, &r, caps)
}

/// Linear representation of `prod_{j >= 0} Gamma(z^{k^j})^{-1}`, the
/// solution of `Gamma(z) H(z) - H(z^k) = 0` with `H(0) = 1`.
pub fn product_reciprocal_rep(gamma: &Poly, k: usize, caps: ClosureCaps) -> Result<LinearRepresentation> {
    if gamma.coeff(0) != Rational::from_integer(1.into()) {
        return Err(Error::InvalidArgument("Gamma(0) must be 1".into()));
    }
    let eq = MahlerEquation::new(k, vec![gamma.clone(), -&Poly::one()])?;
    if certify_regular(&eq).verdict != Verdict::Regular {
        return Err(Error::InvalidArgument(
            "the product is certified regular only when the zeros of Gamma have orders sharing a factor with k".into(),
        ));
    }
    let count = factor_count(k, RECIPROCAL_TERMS);
    let h = truncated_product(gamma, k, count, RECIPROCAL_TERMS).invert()?;
    closure_of(&eq, &h, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::becker::normalize;
    use crate::regular::series_of_rep;
    use crate::series::oracle;

    fn norm_of(a0: &[i64]) -> BeckerNormalization {
        normalize(&MahlerEquation::from_ints(2, &[a0, &[-1]])).unwrap()
    }

    #[test]
    fn witness_of_the_worked_example() {
        let norm = norm_of(&[1, 1]);
        let becker = MahlerEquation::from_ints(2, &[&[1], &[-1]]);
        let raw = witness_display(&norm, &becker).unwrap();
        assert_eq!(raw, MahlerEquation::from_ints(2, &[&[1, 0, -1], &[-1, 1]]));
        assert_eq!(certify_regular(&raw).verdict, Verdict::Inconclusive);
        let eq = witness_equation(&norm, &becker).unwrap();
        assert_eq!(eq, MahlerEquation::from_ints(2, &[&[1, 1], &[-1]]));
    }

    #[test]
    fn witness_with_a_shift() {
        for k in 2..=3 {
            let mut norm = normalize(&MahlerEquation::from_ints(k, &[&[1], &[-1]])).unwrap();
            norm.gamma = 1;
            let becker = MahlerEquation::from_ints(k, &[&[1], &[-1]]);
            let mut a0 = vec![0i64; k];
            a0[k - 1] = 1;
            let expected = MahlerEquation::from_ints(k, &[&a0, &[-1]]);
            assert_eq!(witness_display(&norm, &becker).unwrap(), expected);
        }
    }

    #[test]
    fn witness_without_q_is_the_input() {
        let norm = norm_of(&[1]);
        let becker = MahlerEquation::from_ints(2, &[&[1], &[0, 1], &[-1, 0, 1]]);
        assert_eq!(witness_display(&norm, &becker).unwrap(), becker);
    }

    #[test]
    fn partitions_decompose_to_one() {
        let eq = MahlerEquation::from_ints(2, &[&[1, -1], &[-1]]);
        let dec = structure_decompose(&eq, &oracle::binary_partitions(16));
        assert_eq!(dec.gamma, Poly::from_ints(&[1, -1]));
        assert_eq!(dec.factors, 4);
        assert_eq!(dec.j, LaurentSeries::with_order(0, vec![q(1)], 16));
        assert_eq!(recompose(&dec, 2).unwrap(), oracle::binary_partitions(16));
    }

    #[test]
    fn decomposition_of_a_polynomial_solution() {
        let eq = MahlerEquation::from_ints(2, &[&[1, 1], &[-1]]);
        let f = LaurentSeries::with_order(0, vec![q(1), q(-1)], 16);
        let dec = structure_decompose(&eq, &f);
        assert_eq!(dec.gamma, Poly::from_ints(&[1, 1]));
        assert_eq!(dec.j, LaurentSeries::with_order(0, vec![q(1)], 16));
        let t = MahlerEquation::from_ints(2, &[&[1], &[-1, 1]]);
        let dec = structure_decompose(&t, &oracle::thue_morse(32));
        assert!(dec.gamma.is_one());
        assert_eq!(dec.j, oracle::thue_morse(32));
    }

    #[test]
    fn reciprocals() {
        let caps = ClosureCaps::default();
        let ones = reciprocal_rep(&Poly::from_ints(&[1, -1]), 2, caps).unwrap();
        assert_eq!(ones.dim, 1);
        assert_eq!(series_of_rep(&ones, 64), LaurentSeries::with_order(0, vec![q(1); 64], 64));
        for k in 2..=4 {
            let delta = reciprocal_rep(&Poly::one(), k, caps).unwrap();
            assert_eq!(series_of_rep(&delta, 32), LaurentSeries::with_order(0, vec![q(1)], 32));
        }
        let alt = reciprocal_rep(&Poly::from_ints(&[1, 0, -1]), 2, caps).unwrap();
        let expected: Vec<Rational> = (0..64).map(|n| q(((n + 1) % 2) as i64)).collect();
        assert_eq!(series_of_rep(&alt, 64), LaurentSeries::with_order(0, expected, 64));
        assert!(reciprocal_rep(&Poly::from_ints(&[1, -3]), 2, caps).is_err());
    }

    #[test]
    fn product_reciprocal() {
        let caps = ClosureCaps::default();
        let rep = product_reciprocal_rep(&Poly::from_ints(&[1, 1]), 2, caps).unwrap();
        // prod (1 + z^{2^j}) = 1 / (1 - z)
        assert_eq!(series_of_rep(&rep, 32), LaurentSeries::with_order(0, vec![q(1), q(-1)], 32));
        assert!(product_reciprocal_rep(&Poly::from_ints(&[1, -1]), 2, caps).is_err());
    }
}
