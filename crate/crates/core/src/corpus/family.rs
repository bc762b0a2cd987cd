//! A regular power series with no Becker multiple by a rational function,
//! although `F(z)/z` is Becker as a Laurent series.

use serde::{Deserialize, Serialize};

use crate::algebra::{q, Poly};
use crate::becker::{becker_form_search, BeckerSearch, SearchBounds};
use crate::error::{Error, Result};
use crate::mahler::{guess, GuessOptions, MahlerEquation};
use crate::series::LaurentSeries;

/// `1 - z + z^{k-1}`.
fn b1(k: usize) -> Poly {
    &(&Poly::one() - &Poly::z()) + &Poly::monomial(q(1), k - 1)
}

/// `-z^{k^2-k} (1 - z)`.
fn b2(k: usize) -> Poly {
    -&Poly::from_ints(&[1, -1]).shift(k * k - k)
}

/// `A(z) = (1 - z + z^{k-1}) A(z^k) - z^{k^2-k} (1 - z) A(z^{k^2})`, solved
/// by `H` and by `1/z`.
pub fn family_h_equation(k: usize) -> MahlerEquation {
    MahlerEquation::new(k, vec![Poly::one(), -&b1(k), -&b2(k)]).expect("nonzero ends")
}

/// The equation of `A` with `A = F/z` substituted, multiplied by `z^{k^2}`.
pub fn family_f_equation(k: usize) -> MahlerEquation {
    let s = k * k - k;
    MahlerEquation::new(
        k,
        vec![
            Poly::monomial(q(1), k * k - 1),
            (-&b1(k)).shift(s),
            -&b2(k),
        ],
    )
    .expect("nonzero ends")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub k: usize,
    /// Rows of the 2x2 matrix whose products along `z -> z^k` define `H`.
    #[serde(rename = "M")]
    pub m: Vec<Vec<Poly>>,
    /// Number of matrix factors used.
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "H")]
    pub h: LaurentSeries,
    #[serde(rename = "F0")]
    pub f0: LaurentSeries,
    #[serde(rename = "F")]
    pub f: LaurentSeries,
}

/// `[1,0] M(z) M(z^k) ... M(z^{k^{J-1}}) [1,0]^T mod z^order`.
pub fn matrix_product_h(k: usize, order: usize, factors: usize) -> Poly {
    let (m11, m12) = (b1(k), b2(k));
    let mut v = (Poly::one(), Poly::zero());
    for j in (0..factors).rev() {
        let p = k.pow(j as u32);
        let top = &(&m11.substitute_power(p) * &v.0) + &(&m12.substitute_power(p) * &v.1);
        v = (top.truncate(order), v.0);
    }
    v.0
}

/// `H`, `F_0 = H + 1/z` and `F = 1 + z H`, with `H` known mod `z^order`.
///
/// Consecutive products differ by `O(z^{k^{n-1}})`, so `J` factors with
/// `k^{J-1} >= order` fix `H` to the requested order.
pub fn paradox_family(k: usize, order: usize) -> Result<Family> {
    if k < 2 || order < 4 {
        return Err(Error::InvalidArgument(format!(
            "family needs k >= 2 and order >= 4, got k = {k}, order = {order}"
        )));
    }
    let mut j = 1;
    while k.pow(j as u32 - 1) < order {
        j += 1;
    }
    let h_poly = matrix_product_h(k, order, j);
    let h = LaurentSeries::from_poly(&h_poly, order as i64);
    if h.coeff(0) != q(1) {
        return Err(Error::Invariant("H(0) must be 1".into()));
    }
    let f0 = h.add(&LaurentSeries::with_order(-1, vec![q(1)], order as i64));
    let f = h.shift(1).add(&LaurentSeries::with_order(0, vec![q(1)], order as i64 + 1));
    Ok(Family {
        k,
        m: vec![vec![b1(k), b2(k)], vec![Poly::one(), Poly::zero()]],
        j,
        h,
        f0,
        f,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceBounds {
    pub deg_max: usize,
    pub terms: usize,
}

impl Default for IndependenceBounds {
    fn default() -> Self {
        IndependenceBounds {
            deg_max: 12,
            terms: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub k: usize,
    pub bounds: IndependenceBounds,
    /// No first-order relation was found. Evidence, not a proof.
    pub passed: bool,
    pub relation: Option<MahlerEquation>,
}

/// A relation `b_0(z) G(z) + b_1(z) G(z^k) = 0` with `deg b_i <= deg_max`.
pub fn first_order_relation(g: &LaurentSeries, k: usize, deg_max: usize) -> Result<Option<MahlerEquation>> {
    guess(g, k, GuessOptions::new(1, deg_max))
}

/// Passes when no first-order relation ties `F_0(z)` to `F_0(z^k)`.
pub fn independence_check(k: usize, bounds: IndependenceBounds) -> Result<IndependenceReport> {
    let fam = paradox_family(k, bounds.terms)?;
    let relation = first_order_relation(&fam.f0, k, bounds.deg_max)?;
    Ok(IndependenceReport {
        k,
        bounds,
        passed: relation.is_none(),
        relation,
    })
}

/// `1, 1 + z, 1 - z, 1 + z + z^2, 1 + z^2`.
pub fn default_r_list() -> Vec<Poly> {
    [&[1][..], &[1, 1], &[1, -1], &[1, 1, 1], &[1, 0, 1]]
        .iter()
        .map(|c| Poly::from_ints(c))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeItem {
    #[serde(rename = "R")]
    pub r: Poly,
    pub found: bool,
    pub outcome: BeckerSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub k: usize,
    pub bounds: SearchBounds,
    pub terms: usize,
    pub items: Vec<ProbeItem>,
    /// The same search on the Laurent series `F(z)/z`, which does succeed.
    pub control: BeckerSearch,
}

/// Runs the bounded Becker search on `R F` for each `R`. A finite spot
/// check: "not found" only covers the given bounds.
pub fn no_becker_multiple_probe(k: usize, r_list: &[Poly], bounds: SearchBounds) -> Result<ProbeReport> {
    let terms = bounds.required_terms().max(256);
    let fam = paradox_family(k, terms)?;
    let mut items = Vec::with_capacity(r_list.len());
    for r in r_list {
        if r.is_zero() {
            return Err(Error::InvalidArgument("R must be nonzero".into()));
        }
        let outcome = becker_form_search(&fam.f.mul_poly(r), k, bounds)?;
        items.push(ProbeItem {
            r: r.clone(),
            found: matches!(outcome, BeckerSearch::Found { .. }),
            outcome,
        });
    }
    let control = becker_form_search(&fam.f0, k, bounds)?;
    Ok(ProbeReport {
        k,
        bounds,
        terms,
        items,
        control,
    })
}
