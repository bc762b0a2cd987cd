//! Reference prefixes computed by brute force, independent of any functional
//! equation.

use num_traits::Zero;

use super::LaurentSeries;
use crate::algebra::rational::q;
use crate::algebra::Rational;

/// Expands `prod_{j : base^j < order} factor(z^{base^j})` modulo `z^order`.
fn truncated_product(order: usize, base: usize, factor: &[i64]) -> LaurentSeries {
    let mut acc = vec![Rational::zero(); order];
    if order > 0 {
        acc[0] = q(1);
    }
    let mut step = 1usize;
    while step < order {
        let mut next = vec![Rational::zero(); order];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &f) in factor.iter().enumerate() {
                let e = i + j * step;
                if e < order && f != 0 {
                    next[e] += a * q(f);
                }
            }
        }
        acc = next;
        step *= base;
    }
    LaurentSeries::with_order(0, acc, order as i64)
}

/// `prod_j (1 - z^{2^j})`: the signed Thue-Morse sequence.
pub fn thue_morse(order: usize) -> LaurentSeries {
    truncated_product(order, 2, &[1, -1])
}

/// `prod_j (1 + z^{2^j} + z^{2^{j+1}})`: Stern's diatomic sequence shifted by one.
pub fn stern(order: usize) -> LaurentSeries {
    truncated_product(order, 2, &[1, 1, 1])
}

/// Number of ways to write `n` as a sum of powers of two, order ignored.
pub fn binary_partition_count(n: usize) -> u64 {
    fn count(n: usize, max_part: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        let mut total = 0;
        let mut part = 1;
        while part <= max_part && part <= n {
            total += count(n - part, part);
            part *= 2;
        }
        total
    }
    count(n, usize::MAX)
}

/// Binary partition counts as a series, with a memo table so that long
/// prefixes stay cheap.
pub fn binary_partitions(order: usize) -> LaurentSeries {
    // table[n][j] = partitions of n into powers of two with largest part <= 2^j
    let levels = usize::BITS as usize - order.leading_zeros() as usize + 1;
    let mut table = vec![vec![0u128; levels]; order];
    for n in 0..order {
        for j in 0..levels {
            table[n][j] = if n == 0 || j == 0 {
                1
            } else {
                let part = 1usize << j;
                table[n][j - 1] + if part <= n { table[n - part][j] } else { 0 }
            };
        }
    }
    let coeffs = table
        .iter()
        .map(|row| Rational::from_integer((*row.last().unwrap()).into()))
        .collect();
    LaurentSeries::with_order(0, coeffs, order as i64)
}

/// Bits of `n` in base 2, used by the sequence-level oracles below.
fn popcount(n: usize) -> u32 {
    n.count_ones()
}

/// `(-1)^{s_2(n)}` directly from the binary digit sum.
pub fn thue_morse_term(n: usize) -> i64 {
    if popcount(n) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Stern's sequence by its defining recursion `s(2n) = s(n)`,
/// `s(2n+1) = s(n) + s(n+1)`.
pub fn stern_term(n: usize) -> u64 {
    match n {
        0 => 0,
        1 => 1,
        _ if n % 2 == 0 => stern_term(n / 2),
        _ => stern_term(n / 2) + stern_term(n / 2 + 1),
    }
}
