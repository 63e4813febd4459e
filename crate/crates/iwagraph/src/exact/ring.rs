//! Determinants over exact commutative rings.
//!
//! Two engines share one entry point: fraction-free (Bareiss) elimination
//! where the ring supports exact division, and Laplace expansion with
//! subset memoization everywhere else. Both are exact; the acceptance
//! properties require them to agree wherever both run.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::exact::matrix::IntMatrix;

/// The minimum a ring must offer for exact determinant work.
pub trait Ring: Clone + PartialEq {
    /// When true, Bareiss elimination is used (divisions are exact by
    /// construction); otherwise minor expansion.
    const FRACTION_FREE: bool;

    fn ring_zero(&self) -> Self;
    fn ring_one(&self) -> Self;
    fn ring_add(&self, rhs: &Self) -> Self;
    fn ring_sub(&self, rhs: &Self) -> Self;
    fn ring_mul(&self, rhs: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_is_zero(&self) -> bool;

    /// Exact quotient `self / rhs`; only called on divisions that are exact
    /// by the Bareiss identity, so a failure is a logic error.
    fn ring_exact_div(&self, rhs: &Self) -> Self {
        let _ = rhs;
        unreachable!("ring without exact division used in fraction-free path")
    }
}

impl Ring for BigInt {
    const FRACTION_FREE: bool = true;

    fn ring_zero(&self) -> Self {
        BigInt::zero()
    }
    fn ring_one(&self) -> Self {
        BigInt::one()
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_exact_div(&self, rhs: &Self) -> Self {
        let (q, r) = self.div_rem(rhs);
        debug_assert!(r.is_zero(), "inexact division in Bareiss elimination");
        q
    }
}

/// Determinant of a square matrix given row major, over any [`Ring`].
/// Dispatches on the ring's preferred engine.
pub fn det_ring<R: Ring>(n: usize, entries: &[R]) -> R {
    assert_eq!(entries.len(), n * n, "det_ring shape mismatch");
    if n == 0 {
        // An empty product: the determinant of the 0x0 matrix is one. We
        // still need a value of type R to call methods on, so special-case
        // upstream; callers with n == 0 use det_ring_empty.
        unreachable!("use det_ring_with_one for possibly-empty matrices");
    }
    if R::FRACTION_FREE {
        det_bareiss(n, entries.to_vec())
    } else {
        det_minor_expansion(n, entries)
    }
}

/// Like [`det_ring`] but accepts `n == 0`, for which it returns the supplied
/// multiplicative unit.
pub fn det_ring_with_one<R: Ring>(n: usize, entries: &[R], one: R) -> R {
    if n == 0 {
        one
    } else {
        det_ring(n, entries)
    }
}

/// Fraction-free (Bareiss) elimination with row pivoting. Every division is
/// by the previous pivot and is exact; intermediate entries are minors of
/// the input, which keeps growth polynomial.
fn det_bareiss<R: Ring>(n: usize, mut m: Vec<R>) -> R {
    let mut sign_flip = false;
    let mut prev = m[0].ring_one();
    for k in 0..n - 1 {
        if m[k * n + k].ring_is_zero() {
            match (k + 1..n).find(|&i| !m[i * n + k].ring_is_zero()) {
                Some(i) => {
                    for j in 0..n {
                        m.swap(k * n + j, i * n + j);
                    }
                    sign_flip = !sign_flip;
                }
                None => return m[0].ring_zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i * n + j]
                    .ring_mul(&m[k * n + k])
                    .ring_sub(&m[i * n + k].ring_mul(&m[k * n + j]));
                m[i * n + j] = t.ring_exact_div(&prev);
            }
            m[i * n + k] = m[0].ring_zero();
        }
        prev = m[k * n + k].clone();
    }
    let det = m[(n - 1) * n + (n - 1)].clone();
    if sign_flip {
        det.ring_neg()
    } else {
        det
    }
}

/// Laplace expansion along rows with memoization over column subsets:
/// O(2^n * n) ring multiplications and no divisions. Fine for the small
/// matrices that arise from base graphs; guarded against misuse on covers.
fn det_minor_expansion<R: Ring>(n: usize, entries: &[R]) -> R {
    assert!(n <= 24, "minor expansion determinant limited to 24x24");
    let zero = entries[0].ring_zero();
    // dp[mask] = det of the submatrix on rows 0..popcount(mask) and the
    // column set `mask`.
    let mut dp: Vec<Option<R>> = vec![None; 1 << n];
    dp[0] = Some(entries[0].ring_one());
    for mask in 1usize..1 << n {
        let r = (mask.count_ones() - 1) as usize;
        let mut acc = zero.clone();
        let mut seen = 0u32;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let entry = &entries[r * n + j];
            if !entry.ring_is_zero() {
                let sub = dp[mask & !(1 << j)]
                    .as_ref()
                    .expect("subset dp filled in order")
                    .clone();
                let term = entry.ring_mul(&sub);
                // Sign of placing column j as the image of row r, where j is
                // the `seen`-th smallest column in the subset.
                if (r as u32 + seen).is_multiple_of(2) {
                    acc = acc.ring_add(&term);
                } else {
                    acc = acc.ring_sub(&term);
                }
            }
            seen += 1;
        }
        dp[mask] = Some(acc);
    }
    dp[(1 << n) - 1].take().expect("full mask computed")
}

/// Exact determinant of an integer matrix by fraction-free elimination.
pub fn det_fraction_free(m: &IntMatrix) -> Result<BigInt> {
    m.require_square()?;
    Ok(det_ring_with_one(
        m.rows(),
        m.entries(),
        BigInt::one(),
    ))
}

/// Cofactor-expansion determinant, the naive reference used to pin down the
/// faster engines in tests.
pub fn det_cofactor_reference(m: &IntMatrix) -> Result<BigInt> {
    m.require_square()?;
    fn go(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let term = &m[(0, j)] * go(&m.minor(0, j));
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    Ok(go(m))
}

/// Absolute value helper used by spanning-tree counting.
pub fn bigint_abs(x: &BigInt) -> BigInt {
    x.abs()
}
