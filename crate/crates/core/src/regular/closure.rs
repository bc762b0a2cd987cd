//! Building a linear representation by closing `F` under the Cartier operators.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{series_of_rep, LinearRepresentation};
use crate::algebra::linalg::express_in_span;
use crate::algebra::{Poly, Rational};
use crate::error::{Error, Result};
use crate::mahler::{
    cartier_coordinates, coords_to_series, verify, CoordinateVector, MahlerEquation,
};
use crate::series::LaurentSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureCaps {
    pub max_dim: usize,
    pub max_depth: usize,
}

impl Default for ClosureCaps {
    fn default() -> Self {
        ClosureCaps {
            max_dim: 32,
            max_depth: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClosureOutcome {
    Found {
        rep: LinearRepresentation,
        basis: Vec<CoordinateVector>,
    },
    /// A cap was hit. This says nothing about regularity.
    Inconclusive {
        reason: String,
        dim: usize,
        depth: usize,
    },
}

impl ClosureOutcome {
    pub fn rep(&self) -> Option<&LinearRepresentation> {
        match self {
            ClosureOutcome::Found { rep, .. } => Some(rep),
            ClosureOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Clears all denominators with one common multiple and lists the
/// polynomial coefficients entry by entry, so that Q-linear relations
/// between coordinate vectors become relations between flat vectors.
fn flatten(vectors: &[&CoordinateVector]) -> Vec<Vec<Rational>> {
    let d = vectors[0].entries.len();
    let common = vectors
        .iter()
        .flat_map(|v| v.entries.iter())
        .fold(Poly::one(), |acc, e| acc.lcm(e.den()));
    let cleared: Vec<Vec<Poly>> = vectors
        .iter()
        .map(|v| {
            v.entries
                .iter()
                .map(|e| e.num() * &common.exact_div(e.den()).expect("lcm is a multiple"))
                .collect()
        })
        .collect();
    let widths: Vec<usize> = (0..d)
        .map(|i| {
            cleared
                .iter()
                .map(|v| v[i].coeffs().len())
                .max()
                .unwrap_or(0)
        })
        .collect();
    cleared
        .iter()
        .map(|v| {
            v.iter()
                .zip(&widths)
                .flat_map(|(p, &w)| (0..w).map(move |j| p.coeff(j)))
                .collect()
        })
        .collect()
}

fn coordinates_in(basis: &[CoordinateVector], w: &CoordinateVector) -> Option<Vec<Rational>> {
    if w.is_zero() {
        return Some(vec![Rational::zero(); basis.len()]);
    }
    let mut all: Vec<&CoordinateVector> = basis.iter().collect();
    all.push(w);
    let mut flat = flatten(&all);
    let target = flat.pop().expect("target present");
    express_in_span(&flat, &target)
}

/// Cartier closure of `F` inside the coordinate space of `eq`.
///
/// Starts from `F` itself and applies every `Lambda_r` to each new basis
/// vector until the span stops growing. The representation uses the found
/// basis: `A_r[l][j]` is the coefficient of basis vector `l` in
/// `Lambda_r` of basis vector `j`, the row holds the constant terms of the
/// basis functions, and the column selects `F`.
pub fn closure_rep(
    eq: &MahlerEquation,
    f: &LaurentSeries,
    caps: ClosureCaps,
) -> Result<ClosureOutcome> {
    if f.valuation() < 0 {
        return Err(Error::InvalidArgument(
            "closure needs a power series, not a Laurent series".into(),
        ));
    }
    if !verify(eq, f).holds() {
        return Err(Error::InvalidArgument(
            "the prefix does not satisfy the equation".into(),
        ));
    }
    let k = eq.k();
    let d = eq.degree();
    let mut basis = vec![CoordinateVector::unit(d, 0)];
    let mut depth = vec![0usize];
    // columns[r][j]: coordinates of Lambda_r(b_j), as long as the basis was then
    let mut columns: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); k];
    let mut j = 0;
    while j < basis.len() {
        for (r, col) in columns.iter_mut().enumerate() {
            let w = cartier_coordinates(eq, &basis[j], r);
            let coords = match coordinates_in(&basis, &w) {
                Some(c) => c,
                None => {
                    if depth[j] + 1 > caps.max_depth || basis.len() >= caps.max_dim {
                        return Ok(ClosureOutcome::Inconclusive {
                            reason: format!(
                                "closure still growing at dimension {} and depth {}",
                                basis.len(),
                                depth[j] + 1
                            ),
                            dim: basis.len(),
                            depth: depth[j] + 1,
                        });
                    }
                    basis.push(w);
                    depth.push(depth[j] + 1);
                    let mut c = vec![Rational::zero(); basis.len()];
                    c[basis.len() - 1] = Rational::from_integer(1.into());
                    c
                }
            };
            col.push(coords);
        }
        j += 1;
    }

    let dim = basis.len();
    let matrices = columns
        .iter()
        .map(|cols| {
            (0..dim)
                .map(|l| {
                    (0..dim)
                        .map(|jj| cols[jj].get(l).cloned().unwrap_or_else(Rational::zero))
                        .collect()
                })
                .collect()
        })
        .collect();
    let row = basis
        .iter()
        .map(|b| {
            coords_to_series(b, k, f).get(0).ok_or_else(|| {
                Error::InsufficientData("prefix too short to read a basis constant term".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut col = vec![Rational::zero(); dim];
    col[0] = Rational::from_integer(1.into());
    let rep = LinearRepresentation::new(k, row, matrices, col)?;
    let check = f.order().min(256).max(0) as usize;
    if !series_of_rep(&rep, check).agrees_with(f) {
        return Err(Error::Invariant(
            "closure representation disagrees with the prefix".into(),
        ));
    }
    Ok(ClosureOutcome::Found { rep, basis })
}
