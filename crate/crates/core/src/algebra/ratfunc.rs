//! Reduced rational functions over Q and their Cartier sections.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cyclotomic::strip_factor;
use super::norm::norm_over_kth_roots;
use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRationalFunction")]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

#[derive(Deserialize)]
struct RawRationalFunction {
    num: Poly,
    den: Poly,
}

impl TryFrom<RawRationalFunction> for RationalFunction {
    type Error = Error;
    fn try_from(raw: RawRationalFunction) -> Result<Self> {
        RationalFunction::new(raw.num, raw.den)
    }
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.leading().recip();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduced(&self.num + &o.num, self.den.clone());
        }
        Self::reduced(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::reduced(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        Self::reduced(&self.num * p, self.den.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// `c(z^m)`.
    pub fn substitute_power(&self, m: usize) -> Self {
        RationalFunction {
            num: self.num.substitute_power(m),
            den: self.den.substitute_power(m),
        }
    }

    /// Order at `z = 0`: positive for zeros, negative for poles.
    pub fn valuation_at_zero(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        Some(vn - self.den.valuation().unwrap_or(0) as i64)
    }

    /// Multiplicity of an irreducible `factor` in the numerator minus its
    /// multiplicity in the denominator. `None` for the zero function.
    pub fn order_at_factor(&self, factor: &Poly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let (a, _) = strip_factor(&self.num, factor);
        let (b, _) = strip_factor(&self.den, factor);
        Some(a as i64 - b as i64)
    }

    /// The section `sum_n c(kn + r) z^n` of the Laurent expansion at 0.
    ///
    /// Writing `c = P(z) / D(z^k)` (clear the denominator by its norm down
    /// to Q(z^k)), the section is `section_r(P) / D(z)`.
    pub fn cartier(&self, k: usize, r: usize) -> Self {
        assert!(k >= 2 && r < k);
        if self.is_zero() {
            return Self::zero();
        }
        let s = self.den.valuation().unwrap_or(0);
        let d0 = self.den.unshift(s);
        let norm = norm_over_kth_roots(&d0, k);
        let cof = norm
            .substitute_power(k)
            .exact_div(&d0)
            .expect("norm is divisible by its factor");
        let s_up = s.div_ceil(k);
        let p = (&self.num * &cof).shift(s_up * k - s);
        let d = norm.shift(s_up);
        let section = Poly::new(p.coeffs().iter().skip(r).step_by(k).cloned().collect());
        Self::reduced(section, d)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl super::linalg::Field for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RationalFunction::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RationalFunction::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFunction::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        RationalFunction::div(self, o).expect("division by zero rational function")
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}
