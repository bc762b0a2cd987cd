//! From a linear representation back to a Mahler equation.

use num_traits::Zero;

use super::{series_of_rep, LinearRepresentation};
use crate::algebra::linalg::{nullspace, Matrix};
use crate::algebra::{Poly, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::mahler::matrix::{matmul, substitute};
use crate::mahler::{reduce_degree, verify, MahlerEquation};

type RfMatrix = Matrix<RationalFunction>;

fn constant(x: &Rational) -> RationalFunction {
    RationalFunction::constant(x.clone())
}

/// `A(z) = sum_r z^r A_r` and the column, so that the row series
/// `H(z) = sum_n row A_w z^n` obeys `H(z) = H(z^k) A(z)` and `F = H c`.
///
/// In general `H(z) = H(z^k) A(z) + (row - row A_0)`; when the last term is
/// nonzero it is absorbed by an extra constant coordinate.
fn transfer(rep: &LinearRepresentation) -> (RfMatrix, Vec<RationalFunction>) {
    let dim = rep.dim;
    let defect: Vec<Rational> = (0..dim)
        .map(|j| {
            let image: Rational = (0..dim).map(|l| &rep.row[l] * &rep.matrices[0][l][j]).sum();
            &rep.row[j] - image
        })
        .collect();
    let extra = defect.iter().any(|x| !x.is_zero());
    let size = dim + usize::from(extra);
    let mut a = vec![vec![RationalFunction::zero(); size]; size];
    for (l, row) in a.iter_mut().enumerate().take(dim) {
        for (j, entry) in row.iter_mut().enumerate().take(dim) {
            let coeffs = rep.matrices.iter().map(|m| m[l][j].clone()).collect();
            *entry = RationalFunction::from_poly(Poly::new(coeffs));
        }
    }
    let mut col: Vec<RationalFunction> = rep.col.iter().map(constant).collect();
    if extra {
        for (j, x) in defect.iter().enumerate() {
            a[dim][j] = constant(x);
        }
        a[dim][dim] = RationalFunction::one();
        col.push(RationalFunction::zero());
    }
    (a, col)
}

/// `u_0, ..., u_r` with `F(z^{k^i}) = H(z^{k^r}) u_i`.
fn u_vectors(
    a: &RfMatrix,
    col: &[RationalFunction],
    k: usize,
    r: usize,
) -> Vec<Vec<RationalFunction>> {
    let size = col.len();
    let mut prod: RfMatrix = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        RationalFunction::one()
                    } else {
                        RationalFunction::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut out = vec![col.to_vec()];
    for i in (0..r).rev() {
        prod = matmul(&prod, &substitute(a, k.pow(i as u32)));
        let u = prod
            .iter()
            .map(|row| {
                row.iter()
                    .zip(col)
                    .fold(RationalFunction::zero(), |acc, (x, c)| acc.add(&x.mul(c)))
            })
            .collect();
        out.push(u);
    }
    out.reverse();
    out
}

fn clear_denominators(v: &[RationalFunction]) -> Vec<Poly> {
    let common = v.iter().fold(Poly::one(), |acc, x| acc.lcm(x.den()));
    v.iter()
        .map(|x| x.num() * &common.exact_div(x.den()).expect("lcm is a multiple"))
        .collect()
}

fn section(p: &Poly, k: usize, r: usize) -> Poly {
    Poly::new(p.coeffs().iter().skip(r).step_by(k).cloned().collect())
}

/// Rewrites `sum_{i >= i0} p_i F(z^{k^i}) = 0` with `i0 >= 1` as a relation
/// starting one index lower: the part of each `p_i` supported on exponents
/// `r mod k` gives its own relation in `z^k`.
fn lower_index(mut p: Vec<Poly>, k: usize) -> Vec<Poly> {
    while let Some(i0) = p.iter().position(|x| !x.is_zero()).filter(|&i| i > 0) {
        let r = (0..k)
            .find(|&r| !section(&p[i0], k, r).is_zero())
            .expect("nonzero polynomial has a nonzero section");
        let mut next = vec![Poly::zero(); i0 - 1];
        next.extend(p[i0..].iter().map(|x| section(x, k, r)));
        p = next;
    }
    p
}

/// A Mahler equation for the sequence of `rep`.
///
/// The relation found from the transfer matrix has degree at most the
/// dimension; a smaller one is then looked for and kept only when it is
/// proved to follow. Fails when the sequence is zero, which has no equation
/// with `a_0` and `a_d` both nonzero in this setting.
pub fn rep_to_equation(rep: &LinearRepresentation) -> Result<MahlerEquation> {
    let k = rep.k;
    let (a, col) = transfer(rep);
    let mut relation = None;
    for r in 1..=col.len() {
        let u = u_vectors(&a, &col, k, r);
        let m: RfMatrix = (0..col.len())
            .map(|row| u.iter().map(|ui| ui[row].clone()).collect())
            .collect();
        if let Some(v) = nullspace(&m, r + 1).into_iter().next() {
            relation = Some(clear_denominators(&v));
            break;
        }
    }
    let p = lower_index(relation.expect("dim + 1 vectors are dependent"), k);
    let eq = MahlerEquation::from_raw_trimmed(k, p)
        .ok_or_else(|| Error::InvalidArgument("the sequence is identically zero".into()))?
        .normalized();

    let b = eq.coeffs().iter().map(Poly::deg0).max().unwrap_or(0);
    let terms = 256.max(2 * (eq.degree() + 1) * (b + 1) + 64);
    let f = series_of_rep(rep, terms);
    if !verify(&eq, &f).holds() {
        return Err(Error::Invariant(
            "equation from the representation fails on its series".into(),
        ));
    }
    Ok(reduce_degree(&eq, &f).normalized())
}
