//! Companion matrices and their products along `z -> z^k`.

use super::MahlerEquation;
use crate::algebra::cyclotomic;
use crate::algebra::linalg::Matrix;
use crate::algebra::RationalFunction;

type RfMatrix = Matrix<RationalFunction>;

/// `A(z)`: first row `-a_i / a_0`, shifted identity below.
pub fn companion(eq: &MahlerEquation) -> RfMatrix {
    let d = eq.degree();
    let a0 = eq.a(0);
    let mut m = vec![vec![RationalFunction::zero(); d]; d];
    for i in 1..=d {
        m[0][i - 1] = RationalFunction::new(-eq.a(i), a0.clone()).expect("a_0 is nonzero");
    }
    for (r, row) in m.iter_mut().enumerate().skip(1) {
        row[r - 1] = RationalFunction::one();
    }
    m
}

pub(crate) fn substitute(m: &RfMatrix, p: usize) -> RfMatrix {
    m.iter()
        .map(|row| row.iter().map(|x| x.substitute_power(p)).collect())
        .collect()
}

pub(crate) fn matmul(a: &RfMatrix, b: &RfMatrix) -> RfMatrix {
    let n = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&l| !a[i][l].is_zero() && !b[l][j].is_zero())
                        .fold(RationalFunction::zero(), |acc, l| {
                            acc.add(&a[i][l].mul(&b[l][j]))
                        })
                })
                .collect()
        })
        .collect()
}

/// `B_1, ..., B_n` where `B_n = A(z) A(z^k) ... A(z^{k^{n-1}})`.
pub fn b_products(eq: &MahlerEquation, n: usize) -> Vec<RfMatrix> {
    let a = companion(eq);
    let mut out: Vec<RfMatrix> = Vec::with_capacity(n);
    for step in 0..n {
        let next = match out.last() {
            None => a.clone(),
            Some(prev) => matmul(prev, &substitute(&a, eq.power(step))),
        };
        out.push(next);
    }
    out
}

/// `B_n(z)`.
pub fn b_product(eq: &MahlerEquation, n: usize) -> RfMatrix {
    assert!(n >= 1, "b_product needs n >= 1");
    b_products(eq, n).pop().expect("n >= 1")
}

/// For `n = 1..=n_max`, the largest pole order of an entry of `B_n` along
/// `Phi_{order}`.
pub fn pole_profile(eq: &MahlerEquation, order: usize, n_max: usize) -> Vec<usize> {
    let phi = cyclotomic(order);
    b_products(eq, n_max)
        .iter()
        .map(|b| {
            b.iter()
                .flatten()
                .filter_map(|x| x.order_at_factor(&phi))
                .map(|v| (-v).max(0) as usize)
                .max()
                .unwrap_or(0)
        })
        .collect()
}
