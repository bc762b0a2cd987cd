//! Mahler equations as operators `sum_i p_i(z) S^i` with `S F(z) = F(z^k)`,
//! so that `S a(z) = a(z^k) S`.

use super::{guess, GuessOptions, MahlerEquation};
use crate::algebra::RationalFunction;
use crate::series::LaurentSeries;

type Operator = Vec<RationalFunction>;

fn to_operator(eq: &MahlerEquation) -> Operator {
    eq.coeffs()
        .iter()
        .cloned()
        .map(RationalFunction::from)
        .collect()
}

/// `l = q * m + r` with `deg r < deg m`; returns `q` when `r = 0`.
pub(crate) fn right_divide(l: &MahlerEquation, m: &MahlerEquation) -> Option<Operator> {
    let k = l.k();
    let mut rem = to_operator(l);
    let mo = to_operator(m);
    let s = m.degree();
    if rem.len() <= s {
        return None;
    }
    let mut quot = vec![RationalFunction::zero(); rem.len() - s];
    for t in (0..quot.len()).rev() {
        let top = &rem[t + s];
        if top.is_zero() {
            continue;
        }
        let c = top
            .div(&mo[s].substitute_power(k.pow(t as u32)))
            .expect("leading coefficient is nonzero");
        for (j, mj) in mo.iter().enumerate() {
            let term = c.mul(&mj.substitute_power(k.pow(t as u32)));
            rem[t + j] = rem[t + j].sub(&term);
        }
        quot[t] = c;
    }
    rem.iter().all(RationalFunction::is_zero).then_some(quot)
}

/// True when `m F = 0` follows exactly from `l F = 0` and the prefix.
///
/// With `l = q m`, the series `G = m F` solves `q G = 0`. A nonzero power
/// series solution of `q` has valuation at most
/// `max_i (v(q_0) - v(q_i)) / (k^i - 1)`, because otherwise the `q_0` term
/// would be the only one of lowest order. So `G = 0` once it vanishes past
/// that bound.
pub fn implied_by(l: &MahlerEquation, m: &MahlerEquation, f: &LaurentSeries) -> bool {
    if f.valuation() < 0 || l.k() != m.k() {
        return false;
    }
    let Some(quot) = right_divide(l, m) else {
        return false;
    };
    let Some(v0) = quot[0].valuation_at_zero() else {
        return false;
    };
    let k = l.k() as i64;
    let mut bound = 0i64;
    for (i, qi) in quot.iter().enumerate().skip(1) {
        if let Some(vi) = qi.valuation_at_zero() {
            let span = k.pow(i as u32) - 1;
            bound = bound.max((v0 - vi).div_euclid(span) + 1);
        }
    }
    let g = m.apply(f);
    g.is_zero() && g.order() >= bound
}

/// The `k^m`-equation `eq` read as a `k`-equation in `S^m`.
pub fn as_base_equation(eq: &MahlerEquation, k: usize, m: usize) -> MahlerEquation {
    let mut coeffs = vec![crate::algebra::Poly::zero(); eq.degree() * m + 1];
    for (i, a) in eq.coeffs().iter().enumerate() {
        coeffs[i * m] = a.clone();
    }
    MahlerEquation::new(k, coeffs).expect("end coefficients stay nonzero")
}

/// True when `candidate F = 0` is proved from `known F = 0` and the prefix:
/// either `candidate` is a left multiple of `known`, or [`implied_by`]
/// applies.
pub fn follows_from(known: &MahlerEquation, candidate: &MahlerEquation, f: &LaurentSeries) -> bool {
    right_divide(candidate, known).is_some() || implied_by(known, candidate, f)
}

/// Looks for an equation of smaller degree that `eq` forces on `F`.
///
/// Candidates come from guessing on the prefix; each is accepted only if
/// [`implied_by`] proves it. Returns `eq` itself when nothing smaller is
/// found.
pub fn reduce_degree(eq: &MahlerEquation, f: &LaurentSeries) -> MahlerEquation {
    let b_max = eq.coeffs().iter().map(|p| p.deg0()).max().unwrap_or(0);
    for d in 1..eq.degree() {
        let opts = GuessOptions::new(d, b_max);
        let Ok(Some(m)) = guess(f, eq.k(), opts) else {
            continue;
        };
        if implied_by(eq, &m, f) {
            return m;
        }
    }
    eq.clone()
}
