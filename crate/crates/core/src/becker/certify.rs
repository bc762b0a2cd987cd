//! Regularity certificates read off `a_0`.

use serde::{Deserialize, Serialize};

use crate::algebra::cyclotomic::{classify_unity_zeros, cyclotomic_profile};
use crate::algebra::Poly;
use crate::algebra::q;
use crate::error::Result;
use crate::mahler::{as_base_equation, follows_from, guess, implied_by, GuessOptions, MahlerEquation};
use crate::series::LaurentSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Regular,
    NotRegular,
    Inconclusive,
}

/// Which test decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Every zero of `a_0` is 0 or a root of unity of order sharing a
    /// factor with `k`; sufficient for regularity.
    UnityZerosNotCoprime,
    /// A primitive minimal `k^M`-equation has `a_0(xi) = 0` with
    /// `xi^{k^M} = xi != 0`; rules out regularity.
    FixedUnityZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Minimality {
    /// Degree 1 and `F != 0`.
    Unconditional,
    /// No smaller degree was found by exhaustive guessing within the bounds.
    UpToSearchBounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub criterion: Option<Criterion>,
    /// Exponent `M` of the base `k^M` the deciding equation uses.
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Order of the root of unity that decided the verdict.
    pub order: Option<usize>,
    pub equation: Option<MahlerEquation>,
    pub minimality: Option<Minimality>,
    pub trace: Vec<String>,
}

impl Certificate {
    fn inconclusive(trace: Vec<String>) -> Self {
        Certificate {
            verdict: Verdict::Inconclusive,
            criterion: None,
            m: None,
            order: None,
            equation: None,
            minimality: None,
            trace,
        }
    }
}

/// REGULAR when every zero of `a_0` is 0 or a root of unity whose order
/// shares a factor with `k`. Otherwise this test alone says nothing.
pub fn certify_regular(eq: &MahlerEquation) -> Certificate {
    let k = eq.k();
    let profile = cyclotomic_profile(eq.a(0));
    let classes = classify_unity_zeros(&profile, k);
    let mut trace = vec![format!(
        "a_0: zero at 0 of multiplicity {}, root-of-unity orders {:?}",
        profile.z_power, profile.cyclo
    )];
    let coprime: Vec<usize> = classes.fixed_type.iter().map(|f| f.order).collect();
    if !profile.only_unity_zeros() {
        trace.push(format!("a_0 has zeros that are not roots of unity: {}", profile.remainder));
    }
    if !coprime.is_empty() {
        trace.push(format!("orders coprime to {k}: {coprime:?}"));
    }
    if profile.only_unity_zeros() && coprime.is_empty() {
        trace.push(format!("every nonzero zero has order sharing a factor with {k}"));
        return Certificate {
            verdict: Verdict::Regular,
            criterion: Some(Criterion::UnityZerosNotCoprime),
            m: Some(1),
            order: None,
            equation: Some(eq.clone()),
            minimality: None,
            trace,
        };
    }
    Certificate::inconclusive(trace)
}

fn coefficient_bound(eq: &MahlerEquation) -> usize {
    eq.coeffs().iter().map(Poly::deg0).max().unwrap_or(0)
}

/// Smallest order of a root of unity `xi` with `xi^{k^M} = xi` and
/// `a_0(xi) = 0`.
fn fixed_zero(a0: &Poly, km: usize) -> Option<usize> {
    let fixed = &Poly::monomial(q(1), km - 1) - &Poly::one();
    let g = a0.gcd(&fixed);
    if g.is_constant() {
        return None;
    }
    cyclotomic_profile(&g).cyclo.first().map(|&(n, _)| n)
}

/// A `k^M`-equation for `F` that is proved from `eq`, primitive, with its
/// minimality status; `None` with a trace line otherwise.
fn equation_for_power(
    eq: &MahlerEquation,
    f: &LaurentSeries,
    m: usize,
    trace: &mut Vec<String>,
) -> Option<(MahlerEquation, Minimality)> {
    let k = eq.k();
    let km = k.pow(m as u32);
    let b = coefficient_bound(eq);
    let mut cand = if m == 1 {
        eq.normalized()
    } else {
        match guess(f, km, GuessOptions::new(eq.degree(), b)) {
            Ok(Some(found)) if follows_from(eq, &as_base_equation(&found, k, m), f) => found,
            Ok(Some(found)) => {
                trace.push(format!("M = {m}: guessed {found} but could not prove it"));
                return None;
            }
            Ok(None) => {
                trace.push(format!("M = {m}: no equation of degree <= {} and coefficient degree <= {b}", eq.degree()));
                return None;
            }
            Err(e) => {
                trace.push(format!("M = {m}: {e}"));
                return None;
            }
        }
    };
    if m > 1 {
        // guessing tries degrees in increasing order
        let minimality = if cand.degree() == 1 {
            Minimality::Unconditional
        } else {
            Minimality::UpToSearchBounds
        };
        return Some((cand.normalized(), minimality));
    }
    while cand.degree() > 1 {
        match guess(f, km, GuessOptions::new(cand.degree() - 1, b)) {
            Ok(None) => return Some((cand, Minimality::UpToSearchBounds)),
            Ok(Some(lower)) if implied_by(&cand, &lower, f) => {
                trace.push(format!("M = 1: replaced by the smaller equation {lower}"));
                cand = lower.normalized();
            }
            Ok(Some(lower)) => {
                trace.push(format!("M = 1: {lower} fits the prefix; minimality not established"));
                return None;
            }
            Err(e) => {
                trace.push(format!("M = 1: minimality check failed: {e}"));
                return None;
            }
        }
    }
    Some((cand, Minimality::Unconditional))
}

/// NOT_REGULAR when, for some `M <= m_max`, a primitive `k^M`-equation of
/// minimal degree for `F` has `a_0(xi) = 0` with `xi^{k^M} = xi != 0`.
///
/// For `M > 1` the equation is guessed from the prefix with the degree
/// bounds of `eq` and accepted only if it provably follows from `eq`.
pub fn certify_irregular(eq: &MahlerEquation, f: &LaurentSeries, m_max: usize) -> Result<Certificate> {
    let mut trace = Vec::new();
    if f.is_zero() {
        trace.push("the prefix is zero; nothing can be concluded".to_string());
        return Ok(Certificate::inconclusive(trace));
    }
    if f.valuation() < 0 {
        trace.push("F is not a power series".to_string());
        return Ok(Certificate::inconclusive(trace));
    }
    if !crate::mahler::verify(eq, f).holds() {
        return Err(crate::error::Error::InvalidArgument(
            "the prefix does not satisfy the equation".into(),
        ));
    }
    for m in 1..=m_max {
        let Some((cand, minimality)) = equation_for_power(eq, f, m, &mut trace) else {
            continue;
        };
        let km = eq.k().pow(m as u32);
        match fixed_zero(cand.a(0), km) {
            Some(order) => {
                trace.push(format!(
                    "M = {m}: a_0 of {cand} vanishes at a root of unity of order {order}, fixed by z -> z^{km}"
                ));
                return Ok(Certificate {
                    verdict: Verdict::NotRegular,
                    criterion: Some(Criterion::FixedUnityZero),
                    m: Some(m),
                    order: Some(order),
                    equation: Some(cand),
                    minimality: Some(minimality),
                    trace,
                });
            }
            None => trace.push(format!("M = {m}: a_0 of {cand} has no zero fixed by z -> z^{km}")),
        }
    }
    Ok(Certificate::inconclusive(trace))
}
