//! Recovering a Mahler equation from a series prefix.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{lex_key, verify, MahlerEquation};
use crate::algebra::linalg::{nullspace, Matrix};
use crate::algebra::{Poly, Rational};
use crate::error::{Error, Result};
use crate::series::LaurentSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessOptions {
    pub d_max: usize,
    pub b_max: usize,
    /// Equations required beyond the number of unknowns.
    pub margin: usize,
}

impl GuessOptions {
    pub fn new(d_max: usize, b_max: usize) -> Self {
        GuessOptions {
            d_max,
            b_max,
            margin: 16,
        }
    }
}

/// Exponents whose coefficient in a depth-`d` relation the prefix determines.
pub(crate) fn row_exponents(f: &LaurentSeries, k: usize, d: usize) -> std::ops::Range<i64> {
    let v = f.valuation().min(f.order());
    let kd = k.pow(d as u32) as i64;
    let e_lo = if v < 0 { v * kd } else { v };
    e_lo..f.order()
}

/// Coefficient rows of `sum_{i <= d, j <= b} a_{i,j} z^j F(z^{k^i})` for
/// every exponent that the prefix determines. Column `i * (b + 1) + j`
/// holds the unknown `a_{i,j}`; `skip_first` drops the columns of `a_0`.
pub(crate) fn relation_rows(
    f: &LaurentSeries,
    k: usize,
    d: usize,
    b: usize,
    skip_first: bool,
) -> Matrix<Rational> {
    let first = usize::from(skip_first);
    row_exponents(f, k, d)
        .map(|e| {
            let mut row = Vec::with_capacity((d + 1 - first) * (b + 1));
            for i in first..=d {
                let p = k.pow(i as u32) as i64;
                for j in 0..=b as i64 {
                    let t = e - j;
                    row.push(if t.rem_euclid(p) == 0 {
                        f.get(t / p).unwrap_or_else(Rational::zero)
                    } else {
                        Rational::zero()
                    });
                }
            }
            row
        })
        .collect()
}

pub(crate) fn polys_from_vector(v: &[Rational], parts: usize, b: usize) -> Vec<Poly> {
    (0..parts)
        .map(|i| Poly::new(v[i * (b + 1)..(i + 1) * (b + 1)].to_vec()))
        .collect()
}

/// Smallest Mahler equation (by degree, then coefficient degree, then
/// lexicographic normal form) annihilating the prefix.
///
/// Every determined coefficient equation is used, and at least
/// `margin` more equations than unknowns are required, so a hit is
/// overdetermined by the margin.
pub fn guess(f: &LaurentSeries, k: usize, opts: GuessOptions) -> Result<Option<MahlerEquation>> {
    if k < 2 || opts.d_max < 1 {
        return Err(Error::InvalidArgument(
            "guess needs k >= 2 and d_max >= 1".into(),
        ));
    }
    let needed = (opts.d_max + 1) * (opts.b_max + 1) + opts.margin;
    let available = relation_rows(f, k, opts.d_max, 0, false).len();
    if available < needed {
        return Err(Error::InsufficientData(format!(
            "{available} coefficient equations available, {needed} required"
        )));
    }
    if f.is_zero() {
        return Ok(None);
    }
    for d in 1..=opts.d_max {
        for b in 0..=opts.b_max {
            let rows = relation_rows(f, k, d, b, false);
            let cols = (d + 1) * (b + 1);
            let kernel = nullspace(&rows, cols);
            let best = kernel
                .iter()
                .filter_map(|v| MahlerEquation::from_raw_trimmed(k, polys_from_vector(v, d + 1, b)))
                .filter(|eq| eq.degree() == d)
                .map(|eq| eq.normalized())
                .filter(|eq| verify(eq, f).holds())
                .min_by_key(lex_key);
            if best.is_some() {
                return Ok(best);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::series::oracle;

    #[test]
    fn recovers_stern() {
        let eq = guess(&oracle::stern(64), 2, GuessOptions::new(2, 3))
            .unwrap()
            .unwrap();
        assert_eq!(eq, MahlerEquation::from_ints(2, &[&[1], &[-1, -1, -1]]));
    }

    #[test]
    fn recovers_thue_morse() {
        let eq = guess(&oracle::thue_morse(64), 2, GuessOptions::new(2, 3))
            .unwrap()
            .unwrap();
        assert_eq!(eq, MahlerEquation::from_ints(2, &[&[1], &[-1, 1]]));
    }

    #[test]
    fn factorial_prefix_has_no_equation() {
        let mut c = Vec::new();
        let mut fact = q(1);
        for n in 0..24 {
            if n > 0 {
                fact *= q(n);
            }
            c.push(fact.clone());
        }
        let f = LaurentSeries::new(0, c);
        assert_eq!(guess(&f, 2, GuessOptions::new(1, 2)).unwrap(), None);
    }

    #[test]
    fn short_prefix_is_rejected() {
        let r = guess(&oracle::stern(10), 2, GuessOptions::new(2, 3));
        assert!(matches!(r, Err(Error::InsufficientData(_))));
    }

    #[test]
    fn laurent_prefix() {
        // 1/z satisfies z F(z) - z^2 F(z^2) = 0, i.e. F - z F(z^2) after content removal
        let f = LaurentSeries::with_order(-1, vec![q(1)], 40);
        let eq = guess(&f, 2, GuessOptions::new(1, 2)).unwrap().unwrap();
        assert!(verify(&eq, &f).holds());
        assert_eq!(eq, MahlerEquation::from_ints(2, &[&[1], &[0, -1]]));
    }
}
