//! Linear representations of k-regular sequences.

mod closure;
mod to_equation;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use closure::{closure_rep, ClosureCaps, ClosureOutcome};
pub use to_equation::rep_to_equation;

use crate::algebra::linalg::Matrix;
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// `f(n) = row . A_{i_s} ... A_{i_0} . col` over the base-`k` digits
/// `i_s ... i_0` of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRepresentation")]
pub struct LinearRepresentation {
    pub k: usize,
    pub dim: usize,
    #[serde(with = "crate::algebra::rational::serde_rational_vec")]
    pub row: Vec<Rational>,
    #[serde(with = "crate::algebra::rational::serde_rational_mat_vec")]
    pub matrices: Vec<Matrix<Rational>>,
    #[serde(with = "crate::algebra::rational::serde_rational_vec")]
    pub col: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawRepresentation {
    k: usize,
    dim: usize,
    #[serde(with = "crate::algebra::rational::serde_rational_vec")]
    row: Vec<Rational>,
    #[serde(with = "crate::algebra::rational::serde_rational_mat_vec")]
    matrices: Vec<Matrix<Rational>>,
    #[serde(with = "crate::algebra::rational::serde_rational_vec")]
    col: Vec<Rational>,
}

impl TryFrom<RawRepresentation> for LinearRepresentation {
    type Error = Error;
    fn try_from(r: RawRepresentation) -> Result<Self> {
        if r.dim != r.row.len() {
            return Err(Error::InvalidArgument(format!(
                "representation: dim {} but row has {} entries",
                r.dim,
                r.row.len()
            )));
        }
        LinearRepresentation::new(r.k, r.row, r.matrices, r.col)
    }
}

impl LinearRepresentation {
    pub fn new(
        k: usize,
        row: Vec<Rational>,
        matrices: Vec<Matrix<Rational>>,
        col: Vec<Rational>,
    ) -> Result<Self> {
        let dim = row.len();
        let bad = |m: &str| Err(Error::InvalidArgument(format!("representation: {m}")));
        if k < 2 {
            return bad("k must be at least 2");
        }
        if dim == 0 {
            return bad("dimension must be positive");
        }
        if col.len() != dim {
            return bad("column length differs from row length");
        }
        if matrices.len() != k {
            return bad("expected one matrix per digit");
        }
        if matrices
            .iter()
            .any(|m| m.len() != dim || m.iter().any(|r| r.len() != dim))
        {
            return bad("matrix shape differs from the dimension");
        }
        Ok(LinearRepresentation {
            k,
            dim,
            row,
            matrices,
            col,
        })
    }

    pub fn from_ints(k: usize, row: &[i64], matrices: &[&[&[i64]]], col: &[i64]) -> Self {
        let v = |x: &[i64]| {
            x.iter()
                .map(|&a| Rational::from_integer(a.into()))
                .collect()
        };
        Self::new(
            k,
            v(row),
            matrices
                .iter()
                .map(|m| m.iter().map(|r| v(r)).collect())
                .collect(),
            v(col),
        )
        .expect("well-formed representation")
    }

    /// The constant sequence 1.
    pub fn constant_one(k: usize) -> Self {
        Self::from_ints(k, &[1], &vec![&[&[1i64][..]][..]; k], &[1])
    }

    fn row_times(&self, v: &[Rational], digit: usize) -> Vec<Rational> {
        let a = &self.matrices[digit];
        (0..self.dim)
            .map(|j| {
                v.iter()
                    .zip(a)
                    .filter(|(x, _)| !x.is_zero())
                    .map(|(x, r)| x * &r[j])
                    .sum()
            })
            .collect()
    }

    fn dot_col(&self, v: &[Rational]) -> Rational {
        v.iter().zip(&self.col).map(|(a, b)| a * b).sum()
    }
}

/// `f(n)`; the leftmost factor belongs to the most significant digit and
/// `n = 0` uses the empty product.
pub fn eval_rep(rep: &LinearRepresentation, n: u64) -> Rational {
    let mut digits = Vec::new();
    let mut m = n;
    while m > 0 {
        digits.push((m % rep.k as u64) as usize);
        m /= rep.k as u64;
    }
    // row . A_{i_s} ... A_{i_0}: fold from the most significant digit
    let mut v = rep.row.clone();
    for &d in digits.iter().rev() {
        v = rep.row_times(&v, d);
    }
    rep.dot_col(&v)
}

/// `sum_{n < order} f(n) z^n`, sharing prefixes of the row products.
pub fn series_of_rep(rep: &LinearRepresentation, order: usize) -> LaurentSeries {
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(order);
    let mut coeffs = Vec::with_capacity(order);
    for n in 0..order {
        let v = if n == 0 {
            rep.row.clone()
        } else {
            rep.row_times(&rows[n / rep.k], n % rep.k)
        };
        coeffs.push(rep.dot_col(&v));
        rows.push(v);
    }
    LaurentSeries::with_order(0, coeffs, order as i64)
}

/// Same values for `n < count`.
pub fn same_sequence(a: &LinearRepresentation, b: &LinearRepresentation, count: usize) -> bool {
    series_of_rep(a, count) == series_of_rep(b, count)
}
