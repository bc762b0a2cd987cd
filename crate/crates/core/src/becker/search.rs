//! Bounded search for an equation with `a_0 = 1`.

use serde::{Deserialize, Serialize};

use crate::algebra::linalg::solve;
use crate::algebra::{Poly, Rational};
use crate::error::{Error, Result};
use crate::mahler::guess::{polys_from_vector, relation_rows, row_exponents};
use crate::mahler::{verify, MahlerEquation};
use crate::series::LaurentSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub depth_max: usize,
    pub deg_max: usize,
}

impl SearchBounds {
    pub fn new(depth_max: usize, deg_max: usize) -> Self {
        SearchBounds { depth_max, deg_max }
    }

    /// Coefficients of `G` the search needs.
    pub fn required_terms(&self) -> usize {
        (self.depth_max + 1) * (self.deg_max + 1) + 16
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BeckerSearch {
    Found {
        equation: MahlerEquation,
        depth: usize,
        degree: usize,
        verified_order: i64,
    },
    /// Nothing within the bounds. Not a proof that no such equation exists.
    Inconclusive { reason: String },
}

impl BeckerSearch {
    pub fn equation(&self) -> Option<&MahlerEquation> {
        match self {
            BeckerSearch::Found { equation, .. } => Some(equation),
            BeckerSearch::Inconclusive { .. } => None,
        }
    }
}

/// Looks for `G = sum_{j=1}^{D} b_j(z) G(z^{k^j})` with `D <= depth_max`
/// and `deg b_j <= deg_max`, smallest `D` first, then smallest degree.
///
/// The `b_j` solve the coefficient equations that the prefix determines;
/// the resulting equation is then checked to the full available order.
pub fn becker_form_search(g: &LaurentSeries, k: usize, bounds: SearchBounds) -> Result<BeckerSearch> {
    if k < 2 || bounds.depth_max < 1 {
        return Err(Error::InvalidArgument("search needs k >= 2 and depth_max >= 1".into()));
    }
    let known = (g.order() - g.valuation().min(g.order())).max(0) as usize;
    let needed = bounds.required_terms();
    if known < needed {
        return Err(Error::InsufficientData(format!(
            "{known} coefficients known, {needed} required"
        )));
    }
    for depth in 1..=bounds.depth_max {
        let rhs: Vec<Rational> = row_exponents(g, k, depth)
            .map(|e| g.get(e).expect("row exponents are below the order"))
            .collect();
        for degree in 0..=bounds.deg_max {
            let rows = relation_rows(g, k, depth, degree, true);
            let cols = depth * (degree + 1);
            let Some(x) = solve(&rows, &rhs, cols) else {
                continue;
            };
            let mut coeffs = vec![Poly::one()];
            coeffs.extend(polys_from_vector(&x, depth, degree).iter().map(|b| -b));
            let Some(eq) = MahlerEquation::from_raw_trimmed(k, coeffs) else {
                continue;
            };
            let check = verify(&eq, g);
            if check.holds() {
                return Ok(BeckerSearch::Found {
                    equation: eq,
                    depth,
                    degree,
                    verified_order: check.known_order,
                });
            }
        }
    }
    Ok(BeckerSearch::Inconclusive {
        reason: format!(
            "no relation with a_0 = 1 at depth <= {} and degree <= {}",
            bounds.depth_max, bounds.deg_max
        ),
    })
}
