//! Cartier operators acting on `sum_i h_i(z) F(z^{k^{i-1}})`.

use serde::{Deserialize, Serialize};

use super::MahlerEquation;
use crate::algebra::RationalFunction;
use crate::series::LaurentSeries;

/// Coordinates `h_1..h_d` of `sum_i h_i(z) F(z^{k^{i-1}})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoordinateVector {
    pub entries: Vec<RationalFunction>,
}

impl CoordinateVector {
    /// `e_i` (0-based index).
    pub fn unit(d: usize, i: usize) -> Self {
        let mut entries = vec![RationalFunction::zero(); d];
        entries[i] = RationalFunction::one();
        CoordinateVector { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RationalFunction::is_zero)
    }
}

/// `Lambda_r` of the function with coordinates `v`, in the same basis.
///
/// The `F(z)` term is first rewritten through the equation, leaving only
/// terms `g_i(z) F(z^{k^i})` with `i >= 1`; then
/// `Lambda_r(g_i F(z^{k^i})) = Lambda_r(g_i) F(z^{k^{i-1}})`.
pub fn cartier_coordinates(
    eq: &MahlerEquation,
    v: &CoordinateVector,
    r: usize,
) -> CoordinateVector {
    let d = eq.degree();
    assert_eq!(
        v.entries.len(),
        d,
        "coordinate vector length must equal the degree"
    );
    let k = eq.k();
    let h1 = &v.entries[0];
    let a0 = eq.a(0);
    let entries = (1..=d)
        .map(|i| {
            let mut g = if h1.is_zero() {
                RationalFunction::zero()
            } else {
                h1.mul(&RationalFunction::new(-eq.a(i), a0.clone()).expect("a_0 is nonzero"))
            };
            if i < d {
                g = g.add(&v.entries[i]);
            }
            g.cartier(k, r)
        })
        .collect();
    CoordinateVector { entries }
}

/// Expansion of `sum_i h_i(z) F(z^{k^{i-1}})` from a prefix of `F`, with the
/// order that prefix determines.
pub fn coords_to_series(v: &CoordinateVector, k: usize, f: &LaurentSeries) -> LaurentSeries {
    let mut acc: Option<LaurentSeries> = None;
    for (i, h) in v.entries.iter().enumerate() {
        let fi = f.compose_power(k.pow(i as u32));
        let term = match h.valuation_at_zero() {
            None => LaurentSeries::zero(fi.order()),
            Some(vh) => {
                let oh = fi.order() + vh - fi.valuation().min(fi.order());
                LaurentSeries::from_ratfunc(h, oh).mul(&fi)
            }
        };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc.expect("nonempty coordinate vector")
}
