//! Norms from Q(z) down to Q(z^k).

use num_traits::Zero;

use super::linalg::{det, Matrix};
use super::poly::Poly;
use super::rational::{q, Rational};

/// Returns `N` with `N(z^k) = prod_{w^k = 1} q(w z)`.
///
/// The product is the determinant of multiplication by `q` on Q[z] viewed
/// as a free Q[y]-module (`y = z^k`) with basis `1, z, ..., z^{k-1}`. That
/// determinant has degree `deg q` in `y`; it is evaluated at `deg q + 1`
/// rational points and interpolated.
pub fn norm_over_kth_roots(p: &Poly, k: usize) -> Poly {
    assert!(k >= 1, "k must be positive");
    if p.is_zero() {
        return Poly::zero();
    }
    if k == 1 {
        return p.clone();
    }
    let deg = p.deg0();
    let points: Vec<(Rational, Rational)> = (0..=deg as i64)
        .map(|t| {
            let y = q(t);
            (y.clone(), det(&multiplication_matrix(p, k, &y)))
        })
        .collect();
    interpolate(&points)
}

/// Matrix of `u -> p * u` in the basis `z^0..z^{k-1}` with `z^k = y`.
fn multiplication_matrix(p: &Poly, k: usize, y: &Rational) -> Matrix<Rational> {
    let mut ypow = vec![q(1)];
    let top = (p.deg0() + k) / k + 1;
    for i in 1..=top {
        let next = &ypow[i - 1] * y;
        ypow.push(next);
    }
    let mut m = vec![vec![Rational::zero(); k]; k];
    for j in 0..k {
        for (e, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let total = e + j;
            m[total % k][j] += c * &ypow[total / k];
        }
    }
    m
}

/// Lagrange interpolation through distinct nodes via Newton's divided differences.
pub fn interpolate(points: &[(Rational, Rational)]) -> Poly {
    let n = points.len();
    let xs: Vec<Rational> = points.iter().map(|(x, _)| x.clone()).collect();
    let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut result = Poly::zero();
    for i in (0..n).rev() {
        // result = result * (z - x_i) + dd[i]
        let lin = Poly::new(vec![-xs[i].clone(), q(1)]);
        result = &(&result * &lin) + &Poly::constant(dd[i].clone());
    }
    result
}
