//! Mahler equations `a_0(z) F(z) + a_1(z) F(z^k) + ... + a_d(z) F(z^{k^d}) = 0`.

mod coords;
pub(crate) mod guess;
pub(crate) mod matrix;
mod operator;
mod solve;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use coords::{cartier_coordinates, coords_to_series, CoordinateVector};
pub use guess::{guess, GuessOptions};
pub use matrix::{b_product, companion, pole_profile};
pub use operator::{as_base_equation, follows_from, implied_by, reduce_degree};
pub use solve::{solve_series, verify, Verification};

use crate::algebra::{Poly, Rational};
use crate::error::{Error, Result};
use crate::series::ceil_div;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEquation")]
pub struct MahlerEquation {
    k: usize,
    coeffs: Vec<Poly>,
}

#[derive(Deserialize)]
struct RawEquation {
    k: usize,
    coeffs: Vec<Poly>,
}

impl TryFrom<RawEquation> for MahlerEquation {
    type Error = Error;
    fn try_from(raw: RawEquation) -> Result<Self> {
        MahlerEquation::new(raw.k, raw.coeffs)
    }
}

impl MahlerEquation {
    pub fn new(k: usize, coeffs: Vec<Poly>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "k = {k} must be at least 2"
            )));
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidArgument(
                "an equation needs a_0 and a_d with d >= 1".into(),
            ));
        }
        if coeffs[0].is_zero() || coeffs.last().unwrap().is_zero() {
            return Err(Error::InvalidArgument("a_0 and a_d must be nonzero".into()));
        }
        Ok(MahlerEquation { k, coeffs })
    }

    /// Shorthand for tests and examples: integer coefficient lists.
    pub fn from_ints(k: usize, coeffs: &[&[i64]]) -> Self {
        Self::new(k, coeffs.iter().map(|c| Poly::from_ints(c)).collect())
            .expect("well-formed equation")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn a(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    /// `k^i`.
    pub fn power(&self, i: usize) -> usize {
        self.k.pow(i as u32)
    }

    /// `sum_i a_i(z) F(z^{k^i})` with its propagated order.
    pub fn apply(&self, f: &crate::series::LaurentSeries) -> crate::series::LaurentSeries {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| f.compose_power(self.power(i)).mul_poly(a))
            .reduce(|x, y| x.add(&y))
            .expect("a_0 is nonzero")
    }

    /// Divides out the gcd of the coefficients and scales so that the lowest
    /// nonzero coefficient of `a_0` is 1.
    pub fn normalized(&self) -> Self {
        let g = Poly::content(&self.coeffs);
        let divided: Vec<Poly> = self
            .coeffs
            .iter()
            .map(|a| a.exact_div(&g).expect("content divides"))
            .collect();
        let unit = divided[0].trailing().recip();
        MahlerEquation {
            k: self.k,
            coeffs: divided.iter().map(|a| a.scale(&unit)).collect(),
        }
    }

    /// Same equation up to a nonzero rational-function factor.
    pub fn is_associate(&self, other: &Self) -> bool {
        self.k == other.k && self.normalized() == other.normalized()
    }

    /// True when `gcd(a_0, ..., a_d) = 1`.
    pub fn is_primitive(&self) -> bool {
        Poly::content(&self.coeffs).is_one()
    }

    /// Drops trailing zero coefficients (keeps `d >= 1` by construction).
    pub(crate) fn from_raw_trimmed(k: usize, mut coeffs: Vec<Poly>) -> Option<Self> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        Self::new(k, coeffs).ok()
    }
}

/// `ceil(max{ v(a_d)/k^d, (v(a_d) - v(a_0))/(k^d - 1) })`: every Laurent
/// solution lies in `z^{-nu} Q[[z]]`.
pub fn valuation_bound(eq: &MahlerEquation) -> i64 {
    let d = eq.degree();
    let kd = eq.power(d) as i64;
    let vd = eq.a(d).valuation().unwrap_or(0) as i64;
    let v0 = eq.a(0).valuation().unwrap_or(0) as i64;
    ceil_div(vd, kd).max(ceil_div(vd - v0, kd - 1))
}

impl fmt::Display for MahlerEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let arg = if i == 0 {
                "F(z)".to_string()
            } else {
                format!("F(z^{})", self.power(i))
            };
            let body = if a.is_one() {
                arg
            } else if (-a).is_one() {
                format!("-{arg}")
            } else if a.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
                format!("{a}*{arg}")
            } else {
                format!("({a})*{arg}")
            };
            if first {
                f.write_str(&body)?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
            first = false;
        }
        f.write_str(" = 0")
    }
}

impl fmt::Debug for MahlerEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MahlerEquation(k={}, {self})", self.k)
    }
}

/// Lexicographic key over all coefficients, used for deterministic ties.
pub(crate) fn lex_key(eq: &MahlerEquation) -> Vec<Rational> {
    eq.coeffs
        .iter()
        .flat_map(|a| {
            let mut c = a.coeffs().to_vec();
            c.push(Rational::zero());
            c
        })
        .collect()
}
