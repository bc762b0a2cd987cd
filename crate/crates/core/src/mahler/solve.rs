//! Truncated Laurent solutions by coefficient comparison.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{valuation_bound, MahlerEquation};
use crate::algebra::linalg::nullspace;
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// Affine-free linear form in the free parameters: `param index -> coeff`.
type Form = BTreeMap<usize, Rational>;

fn add_scaled(acc: &mut Form, form: &Form, c: &Rational) {
    for (p, v) in form {
        let e = acc.entry(*p).or_insert_with(Rational::zero);
        *e += v * c;
        if e.is_zero() {
            acc.remove(p);
        }
    }
}

/// Basis of the solutions `F in z^{-nu} Q[[z]]` known modulo `z^order`.
///
/// Coefficient equations are processed by increasing exponent. Each one
/// either determines a new unknown (the highest-index one it mentions) or
/// becomes a constraint on the free parameters; the constraints are solved
/// at the end. Only exponents fully determined by the window are used, so
/// each returned series verifies to its propagated order.
pub fn solve_series(eq: &MahlerEquation, order: i64) -> Result<Vec<LaurentSeries>> {
    let nu = valuation_bound(eq);
    if order <= -nu {
        return Err(Error::InvalidArgument(format!(
            "order {order} must exceed the valuation bound -{nu}"
        )));
    }
    let low = -nu;
    let terms: Vec<(i64, Vec<(i64, Rational)>)> = eq
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let nz = a
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as i64, c.clone()))
                .collect();
            (eq.power(i) as i64, nz)
        })
        .collect();
    let e_min = terms
        .iter()
        .filter_map(|(p, nz)| nz.first().map(|(j, _)| j + low * p))
        .min()
        .unwrap();
    let e_end = terms
        .iter()
        .filter_map(|(p, nz)| nz.first().map(|(j, _)| j + order * p))
        .min()
        .unwrap();

    let mut value: HashMap<i64, Form> = HashMap::new();
    let mut params = 0usize;
    let mut constraints: Vec<Form> = Vec::new();
    for e in e_min..e_end {
        let mut mentioned: BTreeMap<i64, Rational> = BTreeMap::new();
        for (p, nz) in &terms {
            for (j, c) in nz {
                let t = e - j;
                if t.rem_euclid(*p) != 0 {
                    continue;
                }
                let m = t / p;
                if m < low || m >= order {
                    continue;
                }
                *mentioned.entry(m).or_insert_with(Rational::zero) += c;
            }
        }
        mentioned.retain(|_, c| !c.is_zero());
        let fresh: Vec<i64> = mentioned
            .keys()
            .copied()
            .filter(|m| !value.contains_key(m))
            .collect();
        if let Some((&pivot, others)) = fresh.split_last() {
            for &m in others {
                value.insert(m, Form::from([(params, Rational::from_integer(1.into()))]));
                params += 1;
            }
            let mut rest = Form::new();
            for (m, c) in &mentioned {
                if *m != pivot {
                    add_scaled(&mut rest, &value[m], c);
                }
            }
            let scale = -mentioned[&pivot].recip();
            let mut solved = Form::new();
            add_scaled(&mut solved, &rest, &scale);
            value.insert(pivot, solved);
        } else {
            let mut row = Form::new();
            for (m, c) in &mentioned {
                add_scaled(&mut row, &value[m], c);
            }
            if !row.is_empty() {
                constraints.push(row);
            }
        }
    }
    for m in low..order {
        value.entry(m).or_insert_with(|| {
            params += 1;
            Form::from([(params - 1, Rational::from_integer(1.into()))])
        });
    }

    // Columns run over parameters in reverse creation order, so that the
    // free directions of the constraint system are the earliest parameters,
    // which belong to the lowest exponents.
    let col = |p: usize| params - 1 - p;
    let matrix: Vec<Vec<Rational>> = constraints
        .iter()
        .map(|row| {
            let mut r = vec![Rational::zero(); params];
            for (p, v) in row {
                r[col(*p)] = v.clone();
            }
            r
        })
        .collect();
    let kernel = if params == 0 {
        Vec::new()
    } else if matrix.is_empty() {
        (0..params)
            .map(|c| {
                let mut v = vec![Rational::zero(); params];
                v[c] = Rational::from_integer(1.into());
                v
            })
            .collect()
    } else {
        nullspace(&matrix, params)
    };

    let mut basis = Vec::new();
    for kv in kernel {
        let coeffs: Vec<Rational> = (low..order)
            .map(|m| {
                value[&m]
                    .iter()
                    .fold(Rational::zero(), |acc, (p, v)| acc + v * &kv[col(*p)])
            })
            .collect();
        let f = LaurentSeries::with_order(low, coeffs, order);
        let check = verify(eq, &f);
        if !check.holds() {
            return Err(Error::Invariant(format!(
                "solution fails its equation at exponent {}",
                check.residual_order
            )));
        }
        basis.push(f);
    }
    // lowest-valuation element first, then by first coefficients
    basis.sort_by(|a, b| {
        a.valuation()
            .cmp(&b.valuation())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    if basis.is_empty() {
        return Err(Error::NoSolution(format!(
            "no nonzero solution with valuation >= {low} modulo z^{order}"
        )));
    }
    Ok(basis)
}

/// Result of substituting a truncated series into an equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    /// Largest `O` with the residual `= 0 mod z^O`.
    pub residual_order: i64,
    /// Order to which the residual is determined by the input's truncation.
    pub known_order: i64,
}

impl Verification {
    /// The residual vanishes on everything the input determines.
    pub fn holds(&self) -> bool {
        self.residual_order >= self.known_order
    }
}

pub fn verify(eq: &MahlerEquation, f: &LaurentSeries) -> Verification {
    let r = eq.apply(f);
    Verification {
        residual_order: r.first_nonzero().unwrap_or(r.order()),
        known_order: r.order(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::algebra::Poly;
    use crate::series::oracle;
    use proptest::prelude::*;

    fn thue_morse_eq() -> MahlerEquation {
        MahlerEquation::from_ints(2, &[&[1], &[-1, 1]])
    }

    #[test]
    fn thue_morse_prefix() {
        let b = solve_series(&thue_morse_eq(), 8).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(
            b[0].coeff_range(0, 8),
            [1, -1, -1, 1, -1, 1, 1, -1].map(q).to_vec()
        );
        assert!(b[0].agrees_with(&oracle::thue_morse(8)));
    }

    #[test]
    fn binary_partitions_prefix() {
        let eq = MahlerEquation::from_ints(2, &[&[1, -1], &[-1]]);
        let b = solve_series(&eq, 8).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(
            b[0].coeff_range(0, 8),
            [1, 1, 2, 2, 4, 4, 6, 6].map(q).to_vec()
        );
    }

    #[test]
    fn two_dimensional_solution_space() {
        let eq = MahlerEquation::from_ints(2, &[&[1], &[-1], &[0, 0, 1, -1]]);
        let b = solve_series(&eq, 7).unwrap();
        assert_eq!(b.len(), 2);
        let inv_z = LaurentSeries::with_order(-1, vec![q(1)], 7);
        let h = LaurentSeries::with_order(0, [1, 0, -1, 1, -1, 0, 1].map(q).to_vec(), 7);
        assert!(b.contains(&inv_z), "{b:?}");
        assert!(b.contains(&h), "{b:?}");
    }

    #[test]
    fn leading_z_power_in_a0() {
        // z F(z) = F(z^2) has the solution F = z
        let eq = MahlerEquation::from_ints(2, &[&[0, 1], &[-1]]);
        let b = solve_series(&eq, 10).unwrap();
        assert_eq!(b, vec![LaurentSeries::with_order(1, vec![q(1)], 10)]);
    }

    #[test]
    fn verify_reports() {
        let eq = thue_morse_eq();
        let v = verify(&eq, &oracle::thue_morse(64));
        assert!(v.holds());
        assert!(v.residual_order >= 64);
        let v = verify(&eq, &oracle::stern(64));
        assert!(!v.holds());
        assert!(v.residual_order < 8);
        assert!(verify(&eq, &LaurentSeries::zero(32)).holds());
    }

    #[test]
    fn no_solution_is_an_error() {
        // F(z) = 2 F(z^2) forces f(0) = 2 f(0) and nothing else survives
        let eq = MahlerEquation::from_ints(2, &[&[1], &[-2]]);
        assert!(matches!(solve_series(&eq, 8), Err(Error::NoSolution(_))));
    }

    fn equation_strategy() -> impl Strategy<Value = Option<MahlerEquation>> {
        (
            2usize..=3,
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, 1..4), 2..4),
        )
            .prop_map(|(k, cs)| {
                MahlerEquation::new(k, cs.iter().map(|c| Poly::from_ints(c)).collect()).ok()
            })
    }

    proptest! {
        #[test]
        fn solutions_verify_or_none_exist(eq in equation_strategy(), order in 4i64..24) {
            let Some(eq) = eq else { return Ok(()) };
            match solve_series(&eq, order) {
                Ok(basis) => {
                    prop_assert!(!basis.is_empty());
                    for f in &basis {
                        prop_assert!(!f.is_zero());
                        prop_assert!(verify(&eq, f).holds());
                        prop_assert!(f.valuation() >= -valuation_bound(&eq));
                    }
                }
                Err(e) => prop_assert!(matches!(e, Error::NoSolution(_)), "{e}"),
            }
        }
    }
}
