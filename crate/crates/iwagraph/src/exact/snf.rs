//! Exact Smith normal form over the integers.
//!
//! Classic elimination with a global minimum-magnitude pivot and immediate
//! row/column reduction. The divisors come out nonnegative in a divisibility
//! chain, with zeros (free rank) at the end.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact::matrix::IntMatrix;

/// Result of a Smith normal form computation: the ordered elementary
/// divisors `d1 | d2 | ... | dr` (zeros last, meaning free rank), plus the
/// rank over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryDivisors {
    pub divisors: Vec<BigInt>,
    pub rank: usize,
}

impl ElementaryDivisors {
    /// Sum of `p`-adic valuations of the nonzero divisors, i.e. the
    /// valuation of the torsion order when there is no free rank.
    pub fn vp(&self, p: u64) -> u64 {
        let p = BigInt::from(p);
        self.divisors
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| {
                let mut d = d.clone();
                let mut v = 0u64;
                loop {
                    let (q, r) = num_integer::Integer::div_rem(&d, &p);
                    if r.is_zero() {
                        d = q;
                        v += 1;
                    } else {
                        break v;
                    }
                }
            })
            .sum()
    }
}

/// Exact elementary divisors of an integer matrix.
pub fn snf_divisors(m: &IntMatrix) -> ElementaryDivisors {
    let rows = m.rows();
    let cols = m.cols();
    let slots = rows.min(cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| m[(i, j)].clone()).collect())
        .collect();

    let mut divisors: Vec<BigInt> = Vec::with_capacity(slots);
    for t in 0..slots {
        loop {
            // Global pivot: smallest nonzero magnitude in the remaining
            // block, ties by position. Keeps intermediate entries small.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => a[i][j].abs() < a[pi][pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                // Remaining block is zero: the rest of the chain is zeros.
                divisors.resize(slots, BigInt::zero());
                let rank = divisors.iter().filter(|d| !d.is_zero()).count();
                return ElementaryDivisors { divisors, rank };
            };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
            }

            // One reduction sweep of row t and column t against the pivot.
            let mut dirty = false;
            let (head, tail) = a.split_at_mut(t + 1);
            let pivot_row = &head[t];
            for row in tail.iter_mut() {
                if row[t].is_zero() {
                    continue;
                }
                let q = &row[t] / &pivot_row[t];
                if !q.is_zero() {
                    for (entry, piv) in row[t..].iter_mut().zip(&pivot_row[t..]) {
                        *entry -= &q * piv;
                    }
                }
                if !row[t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for row in a[t..].iter_mut() {
                        let sub = &q * &row[t];
                        row[j] -= sub;
                    }
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }

            // Row and column are clear. Enforce the divisibility chain: any
            // remaining entry not divisible by the pivot is pulled into row
            // t and the elimination repeats.
            let piv = a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&a[i][j] % &piv).is_zero())
            });
            match offender {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (dst, add) in head[t][t..].iter_mut().zip(&tail[0][t..]) {
                        *dst += add;
                    }
                }
                None => break,
            }
        }
        divisors.push(a[t][t].abs());
    }
    let rank = divisors.iter().filter(|d| !d.is_zero()).count();
    ElementaryDivisors { divisors, rank }
}
