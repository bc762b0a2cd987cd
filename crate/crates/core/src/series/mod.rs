//! Truncated Laurent series with explicit truncation order, and the Cartier
//! section operators.
//!
//! A value stands for `sum_{n >= v} c_n z^n + O(z^order)`. Every operation
//! returns the order that its inputs actually determine.

pub mod oracle;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{format_rational, parse_rational, q};
use crate::algebra::{Poly, Rational, RationalFunction};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    valuation: i64,
    coeffs: Vec<Rational>,
    order: i64,
}

impl LaurentSeries {
    /// Series with coefficients for exponents `start, start+1, ...`, known
    /// modulo `z^order`. Coefficients at or past `order` are dropped; missing
    /// ones below `order` are zero.
    pub fn with_order(start: i64, coeffs: Vec<Rational>, order: i64) -> Self {
        let len = (order - start).max(0) as usize;
        let mut c = coeffs;
        c.resize(len, Rational::zero());
        Self::normalized(start.min(order), c, order)
    }

    /// Series whose order is the end of the coefficient list.
    pub fn new(start: i64, coeffs: Vec<Rational>) -> Self {
        let order = start + coeffs.len() as i64;
        Self::normalized(start, coeffs, order)
    }

    pub fn from_ints(start: i64, coeffs: &[i64]) -> Self {
        Self::new(start, coeffs.iter().map(|&c| q(c)).collect())
    }

    fn normalized(start: i64, coeffs: Vec<Rational>, order: i64) -> Self {
        let skip = coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(coeffs.len());
        LaurentSeries {
            valuation: start + skip as i64,
            coeffs: coeffs.into_iter().skip(skip).collect(),
            order,
        }
    }

    pub fn zero(order: i64) -> Self {
        LaurentSeries {
            valuation: order,
            coeffs: Vec::new(),
            order,
        }
    }

    pub fn from_poly(p: &Poly, order: i64) -> Self {
        Self::with_order(0, p.coeffs().to_vec(), order)
    }

    /// Laurent expansion of a rational function at 0.
    pub fn from_ratfunc(r: &RationalFunction, order: i64) -> Self {
        if r.is_zero() {
            return Self::zero(order);
        }
        let s = r.den().valuation().unwrap_or(0) as i64;
        let d0 = r.den().unshift(s as usize);
        // num / d0 as a power series to order + s, then shift by -s
        let needed = order + s;
        let inv = Self::from_poly(&d0, needed.max(1))
            .invert()
            .expect("d0(0) != 0");
        let num = Self::from_poly(r.num(), needed.max(1));
        num.mul(&inv).shift(-s).truncate(order)
    }

    /// Index of the first nonzero coefficient (equals `order` for a series
    /// that vanishes to its known order).
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficients for exponents `valuation..order`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^n`; `None` when `n` is past the known order.
    pub fn get(&self, n: i64) -> Option<Rational> {
        if n >= self.order {
            None
        } else if n < self.valuation {
            Some(Rational::zero())
        } else {
            Some(self.coeffs[(n - self.valuation) as usize].clone())
        }
    }

    /// Coefficient of `z^n`, panicking past the known order.
    pub fn coeff(&self, n: i64) -> Rational {
        self.get(n)
            .unwrap_or_else(|| panic!("coefficient {n} beyond order {}", self.order))
    }

    /// Coefficients for exponents `from..to` (all below the order).
    pub fn coeff_range(&self, from: i64, to: i64) -> Vec<Rational> {
        (from..to).map(|n| self.coeff(n)).collect()
    }

    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let start = self.valuation.min(order);
        let coeffs = (start..order).map(|n| self.coeff(n)).collect();
        Self::normalized(start, coeffs, order)
    }

    /// Multiplies by `z^n` (any sign).
    pub fn shift(&self, n: i64) -> Self {
        LaurentSeries {
            valuation: self.valuation + n,
            coeffs: self.coeffs.clone(),
            order: self.order + n,
        }
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let start = self.valuation.min(other.valuation).min(order);
        let coeffs = (start..order)
            .map(|n| self.coeff(n) + other.coeff(n))
            .collect();
        Self::normalized(start, coeffs, order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.valuation).min(other.order + self.valuation);
        if self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        let start = self.valuation + other.valuation;
        let len = (order - start).max(0) as usize;
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::normalized(start.min(order), out, order)
    }

    /// Product with an exact polynomial.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        let Some(vp) = p.valuation() else {
            return Self::zero(i64::MAX / 4);
        };
        let exact = Self::from_poly(
            p,
            p.deg0() as i64 + 1 + (self.order - self.valuation).max(0),
        );
        let order = self.order + vp as i64;
        self.mul(&exact).truncate(order)
    }

    /// Reciprocal; input `v, O` gives output `-v, O - 2v`.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let v = self.valuation;
        let n = (self.order - v) as usize;
        let a0_inv = self.coeffs[0].recip();
        let mut inv: Vec<Rational> = Vec::with_capacity(n);
        for m in 0..n {
            if m == 0 {
                inv.push(a0_inv.clone());
                continue;
            }
            let mut s = Rational::zero();
            for j in 1..=m.min(self.coeffs.len() - 1) {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &inv[m - j];
                }
            }
            inv.push(-(s * &a0_inv));
        }
        Ok(Self::normalized(-v, inv, self.order - 2 * v))
    }

    /// `F(z^m)`.
    pub fn compose_power(&self, m: usize) -> Self {
        assert!(m >= 1, "compose_power requires m >= 1");
        let m = m as i64;
        let start = self.valuation * m;
        let order = self.order * m;
        let mut coeffs = vec![Rational::zero(); (order - start).max(0) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m as usize] = c.clone();
        }
        Self::normalized(start, coeffs, order)
    }

    /// The Cartier operator: `sum_n c(kn + i) z^n` over all integers `n`
    /// with `kn + i >= v`.
    pub fn cartier(&self, k: usize, i: usize) -> Self {
        assert!(k >= 2 && i < k, "cartier needs k >= 2 and i < k");
        let (k, i) = (k as i64, i as i64);
        let start = ceil_div(self.valuation - i, k);
        let order = ceil_div(self.order - i, k);
        let coeffs = (start..order).map(|n| self.coeff(k * n + i)).collect();
        Self::normalized(start.min(order), coeffs, order)
    }

    /// `sum_i z^i Lambda_i(F)(z^k)`.
    pub fn sections_recompose(&self, k: usize) -> Self {
        (0..k)
            .map(|i| self.cartier(k, i).compose_power(k).shift(i as i64))
            .reduce(|a, b| a.add(&b))
            .expect("k >= 2")
    }

    /// True when both agree on every exponent below the smaller order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let order = self.order.min(other.order);
        let start = self.valuation.min(other.valuation);
        (start..order).all(|n| self.coeff(n) == other.coeff(n))
    }

    /// First exponent with a nonzero coefficient, if any below the order.
    pub fn first_nonzero(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.valuation)
    }
}

pub fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.valuation + i as i64;
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}*z^{}", format_rational(c), e)?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order)
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    valuation: i64,
    order: i64,
    coeffs: Vec<String>,
}

impl Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSeries {
            valuation: self.valuation,
            order: self.order,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSeries::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if raw.valuation + coeffs.len() as i64 != raw.order {
            return Err(serde::de::Error::custom(format!(
                "series length {} does not match order {} - valuation {}",
                coeffs.len(),
                raw.order,
                raw.valuation
            )));
        }
        Ok(LaurentSeries::with_order(raw.valuation, coeffs, raw.order))
    }
}
