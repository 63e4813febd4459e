//! p-local and modular linear algebra on sparse integer matrices.
//!
//! Two workhorses live here:
//!
//! * elimination over `Z/p^K` with unit pivots and p-division rounds, which
//!   extracts the p-valuations of elementary divisors without ever leaving
//!   word arithmetic (valuations at or above K are flagged saturated, never
//!   guessed), and
//! * exact determinants of large sparse integer matrices by Chinese
//!   remaindering word-sized prime determinants under a Hadamard bound.
//!
//! Both pick pivots by a deterministic minimum-fill rule, so results are
//! reproducible run to run.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::matrix::IntMatrix;

/// One elementary-divisor valuation from a mod-p^K elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PValuation {
    Exact(u32),
    /// The divisor is divisible by p^K; its true valuation was not resolved.
    Saturated { at_least: u32 },
}

/// Valuations of the elementary divisors of a matrix over Z/p^K, ascending,
/// saturated entries last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDivisors {
    pub valuations: Vec<PValuation>,
    pub p: u64,
    pub k: u32,
}

impl LocalDivisors {
    pub fn saturated(&self) -> bool {
        self.valuations
            .iter()
            .any(|v| matches!(v, PValuation::Saturated { .. }))
    }

    /// Total p-valuation (sum over divisors); `None` while saturated.
    pub fn total_vp(&self) -> Option<u64> {
        let mut sum = 0u64;
        for v in &self.valuations {
            match v {
                PValuation::Exact(e) => sum += u64::from(*e),
                PValuation::Saturated { .. } => return None,
            }
        }
        Some(sum)
    }

    pub fn exact_valuations(&self) -> Option<Vec<u32>> {
        self.valuations
            .iter()
            .map(|v| match v {
                PValuation::Exact(e) => Some(*e),
                PValuation::Saturated { .. } => None,
            })
            .collect()
    }
}

/// Sparse rows: sorted (column, value) pairs with signed integer entries.
pub type SparseRows = Vec<Vec<(u32, i64)>>;

/// One sparse row of ring residues, again as sorted (column, value) pairs.
type ResidueRow<E> = Vec<(u32, E)>;

/// Residue arithmetic for Z/p^k. The word variant covers every realistic
/// run; the big variant lets saturation escalation pass 63-bit moduli
/// without a separate algorithm.
trait LocalRing {
    type E: Clone + PartialEq;
    fn reduce_i64(&self, x: i64) -> Self::E;
    fn reduce_big(&self, x: &BigInt) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    fn divisible_by_p(&self, x: &Self::E) -> bool;
    fn inv_unit(&self, x: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// a - f*b in the residue ring.
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn exact_div_p(&self, x: &Self::E) -> Self::E;
    /// Lower the modulus from p^k to p^{k-1} after a division round.
    fn shrink_modulus(&mut self);
}

struct WordRing {
    p: u64,
    modulus: u64,
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub(crate) fn inv_mod_u64(a: u64, m: u64) -> u64 {
    // Extended Euclid over i128; a must be a unit mod m.
    let (mut r0, mut r1) = (i128::from(m), i128::from(a));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inverse of non-unit");
    t0.rem_euclid(i128::from(m)) as u64
}

impl LocalRing for WordRing {
    type E = u64;
    fn reduce_i64(&self, x: i64) -> u64 {
        i128::from(x).rem_euclid(i128::from(self.modulus)) as u64
    }
    fn reduce_big(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("residue fits u64")
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn divisible_by_p(&self, x: &u64) -> bool {
        (*x).is_multiple_of(self.p)
    }
    fn inv_unit(&self, x: &u64) -> u64 {
        inv_mod_u64(*x, self.modulus)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod_u64(*a, *b, self.modulus)
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        let fb = mul_mod_u64(*f, *b, self.modulus);
        if *a >= fb {
            a - fb
        } else {
            a + self.modulus - fb
        }
    }
    fn exact_div_p(&self, x: &u64) -> u64 {
        debug_assert_eq!(*x % self.p, 0);
        *x / self.p
    }
    fn shrink_modulus(&mut self) {
        self.modulus /= self.p;
    }
}

struct BigRing {
    p: BigInt,
    modulus: BigInt,
}

impl LocalRing for BigRing {
    type E = BigInt;
    fn reduce_i64(&self, x: i64) -> BigInt {
        BigInt::from(x).mod_floor(&self.modulus)
    }
    fn reduce_big(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }
    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }
    fn divisible_by_p(&self, x: &BigInt) -> bool {
        x.mod_floor(&self.p).is_zero()
    }
    fn inv_unit(&self, x: &BigInt) -> BigInt {
        let e = x.extended_gcd(&self.modulus);
        debug_assert!(e.gcd.is_one());
        e.x.mod_floor(&self.modulus)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.modulus)
    }
    fn sub_mul(&self, a: &BigInt, f: &BigInt, b: &BigInt) -> BigInt {
        (a - f * b).mod_floor(&self.modulus)
    }
    fn exact_div_p(&self, x: &BigInt) -> BigInt {
        let (q, r) = x.div_rem(&self.p);
        debug_assert!(r.is_zero());
        q
    }
    fn shrink_modulus(&mut self) {
        self.modulus = &self.modulus / &self.p;
    }
}

/// rvec - f * pivot_row in the ring, dropping the pivot column and zeros.
fn merge_sub<L: LocalRing>(
    ring: &L,
    rvec: &[(u32, L::E)],
    pivot_row: &[(u32, L::E)],
    f: &L::E,
    pivot_col: u32,
) -> ResidueRow<L::E> {
    let mut out = Vec::with_capacity(rvec.len() + pivot_row.len());
    let (mut a, mut b) = (0usize, 0usize);
    let zero = ring.reduce_i64(0);
    while a < rvec.len() || b < pivot_row.len() {
        match (rvec.get(a), pivot_row.get(b)) {
            (Some(&(x, _)), Some(&(y, _))) if x == y => {
                if x != pivot_col {
                    let v = ring.sub_mul(&rvec[a].1, f, &pivot_row[b].1);
                    if !ring.is_zero(&v) {
                        out.push((x, v));
                    }
                }
                a += 1;
                b += 1;
            }
            (Some(&(x, _)), Some(&(y, _))) if x < y => {
                out.push(rvec[a].clone());
                a += 1;
            }
            (_, Some(&(y, _))) => {
                if y != pivot_col {
                    let v = ring.sub_mul(&zero, f, &pivot_row[b].1);
                    if !ring.is_zero(&v) {
                        out.push((y, v));
                    }
                }
                b += 1;
            }
            (Some(_), None) => {
                out.push(rvec[a].clone());
                a += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Core local elimination. Unit pivots contribute divisors at the current
/// round count; when no unit remains anywhere, every entry is divisible by p
/// and a division round raises the count. Exactly the divisors with
/// valuation below K are resolved; the rest saturate.
fn local_eliminate<L: LocalRing>(
    mut ring: L,
    raw: Vec<ResidueRow<L::E>>,
    ncols: usize,
    k: u32,
    p: u64,
) -> LocalDivisors {
    let nrows = raw.len();
    let mut rows: Vec<Option<ResidueRow<L::E>>> = raw
        .into_iter()
        .map(|r| Some(r.into_iter().filter(|(_, v)| !ring.is_zero(v)).collect()))
        .collect();

    let mut col_nnz = vec![0u32; ncols];
    for row in rows.iter().flatten() {
        for &(c, _) in row {
            col_nnz[c as usize] += 1;
        }
    }

    let mut rounds = 0u32;
    let mut pivots: Vec<u32> = Vec::new();
    let slots = nrows.min(ncols);

    while pivots.len() < slots && rounds < k {
        // Find the unit entry minimizing the fill estimate
        // (row_nnz - 1) * (col_nnz - 1); ties broken by (column, row).
        let mut best: Option<(u64, u32, usize)> = None;
        let mut any_entry = false;
        for (i, row) in rows.iter().enumerate() {
            let Some(row) = row else { continue };
            if !row.is_empty() {
                any_entry = true;
            }
            let rn = row.len() as u64;
            for (c, v) in row {
                if ring.divisible_by_p(v) {
                    continue;
                }
                let score = (rn - 1) * u64::from(col_nnz[*c as usize].saturating_sub(1));
                let cand = (score, *c, i);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }

        match best {
            Some((_, c, r)) => {
                let pivot_row = rows[r].take().expect("active row");
                for &(cc, _) in &pivot_row {
                    col_nnz[cc as usize] -= 1;
                }
                let pivot_val = pivot_row
                    .iter()
                    .find(|(cc, _)| *cc == c)
                    .map(|(_, v)| v.clone())
                    .expect("pivot entry present");
                let inv = ring.inv_unit(&pivot_val);
                for row in rows.iter_mut() {
                    let Some(rvec) = row else { continue };
                    let Ok(pos) = rvec.binary_search_by_key(&c, |e| e.0) else {
                        continue;
                    };
                    let f = ring.mul(&rvec[pos].1, &inv);
                    let merged = merge_sub(&ring, rvec, &pivot_row, &f, c);
                    for &(cc, _) in rvec.iter() {
                        col_nnz[cc as usize] -= 1;
                    }
                    for &(cc, _) in &merged {
                        col_nnz[cc as usize] += 1;
                    }
                    *row = Some(merged);
                }
                pivots.push(rounds);
            }
            None => {
                if !any_entry {
                    break;
                }
                for row in rows.iter_mut() {
                    let Some(rvec) = row else { continue };
                    let mut next = Vec::with_capacity(rvec.len());
                    for (c, v) in rvec.iter() {
                        let q = ring.exact_div_p(v);
                        if ring.is_zero(&q) {
                            col_nnz[*c as usize] -= 1;
                        } else {
                            next.push((*c, q));
                        }
                    }
                    *row = Some(next);
                }
                ring.shrink_modulus();
                rounds += 1;
            }
        }
    }

    let mut valuations: Vec<PValuation> = pivots.into_iter().map(PValuation::Exact).collect();
    while valuations.len() < slots {
        valuations.push(PValuation::Saturated { at_least: k });
    }
    LocalDivisors { valuations, p, k }
}

/// Largest k with p^k < 2^63, the handoff point to big-integer residues.
pub(crate) fn word_k_limit(p: u64) -> u32 {
    let mut k = 0u32;
    let mut acc: u128 = 1;
    while acc * u128::from(p) < (1u128 << 63) {
        acc *= u128::from(p);
        k += 1;
    }
    k
}

/// Valuations of elementary divisors over Z/p^k for a sparse integer matrix.
pub fn local_divisors(rows: &SparseRows, ncols: usize, p: u64, k: u32) -> LocalDivisors {
    assert!(k >= 1);
    if k <= word_k_limit(p) {
        let modulus = (0..k).fold(1u64, |acc, _| acc * p);
        let ring = WordRing { p, modulus };
        let prepared = rows
            .iter()
            .map(|r| r.iter().map(|&(c, v)| (c, ring.reduce_i64(v))).collect())
            .collect();
        local_eliminate(ring, prepared, ncols, k, p)
    } else {
        let ring = BigRing {
            p: BigInt::from(p),
            modulus: BigInt::from(p).pow(k),
        };
        let prepared = rows
            .iter()
            .map(|r| r.iter().map(|&(c, v)| (c, ring.reduce_i64(v))).collect())
            .collect();
        local_eliminate(ring, prepared, ncols, k, p)
    }
}

/// Sparse rows with arbitrary-precision entries, for presentations that
/// carry p^e factors past the word range.
pub type BigSparseRows = Vec<Vec<(u32, BigInt)>>;

/// Valuations of elementary divisors over Z/p^k for sparse big-integer rows.
pub fn local_divisors_big(rows: &BigSparseRows, ncols: usize, p: u64, k: u32) -> LocalDivisors {
    assert!(k >= 1);
    if k <= word_k_limit(p) {
        let modulus = (0..k).fold(1u64, |acc, _| acc * p);
        let ring = WordRing { p, modulus };
        let prepared = rows
            .iter()
            .map(|r| r.iter().map(|(c, v)| (*c, ring.reduce_big(v))).collect())
            .collect();
        local_eliminate(ring, prepared, ncols, k, p)
    } else {
        let ring = BigRing {
            p: BigInt::from(p),
            modulus: BigInt::from(p).pow(k),
        };
        let prepared = rows
            .iter()
            .map(|r| r.iter().map(|(c, v)| (*c, ring.reduce_big(v))).collect())
            .collect();
        local_eliminate(ring, prepared, ncols, k, p)
    }
}

/// Dense-matrix front end for [`local_divisors`].
pub fn snf_divisors_mod_pk(m: &IntMatrix, p: u64, k: u32) -> LocalDivisors {
    if k <= word_k_limit(p) {
        let modulus = (0..k).fold(1u64, |acc, _| acc * p);
        let ring = WordRing { p, modulus };
        let prepared = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| (j as u32, ring.reduce_big(&m[(i, j)]))).collect())
            .collect();
        local_eliminate(ring, prepared, m.cols(), k, p)
    } else {
        let ring = BigRing {
            p: BigInt::from(p),
            modulus: BigInt::from(p).pow(k),
        };
        let prepared = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| (j as u32, ring.reduce_big(&m[(i, j)]))).collect())
            .collect();
        local_eliminate(ring, prepared, m.cols(), k, p)
    }
}

/// Run [`local_divisors`] with K doubling from `k0` until no valuation
/// saturates; geometric growth keeps the total cost within a constant
/// factor of the final run. `k_cap` guards the (impossible for finite
/// cokernels) runaway case.
pub fn local_divisors_adaptive(
    rows: &SparseRows,
    ncols: usize,
    p: u64,
    k0: u32,
    k_cap: u32,
) -> Result<(LocalDivisors, u32)> {
    let mut k = k0.max(1);
    loop {
        let out = local_divisors(rows, ncols, p, k);
        if !out.saturated() {
            return Ok((out, k));
        }
        if k >= k_cap {
            return Err(Error::InfiniteQuotient);
        }
        k = (k * 2).min(k_cap);
    }
}

// ---------------------------------------------------------------------------
// Exact determinants via Chinese remaindering.
// ---------------------------------------------------------------------------

/// Deterministic Miller-Rabin, valid for all 64-bit inputs with this base set.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// The fixed CRT prime sequence: consecutive primes descending from 2^62.
pub(crate) fn crt_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut candidate = (1u64 << 62) - 1;
    while primes.len() < count {
        if is_prime_u64(candidate) {
            primes.push(candidate);
        }
        candidate -= 2;
    }
    primes
}

/// Determinant of a sparse matrix modulo a word prime, by elimination with
/// minimum-fill pivoting. Returns a residue in [0, q).
fn det_mod_q(raw: &SparseRows, n: usize, q: u64) -> u64 {
    let mut rows: Vec<Option<Vec<(u32, u64)>>> = raw
        .iter()
        .map(|r| {
            Some(
                r.iter()
                    .map(|&(c, v)| (c, i128::from(v).rem_euclid(i128::from(q)) as u64))
                    .filter(|&(_, v)| v != 0)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let mut col_nnz = vec![0u32; n];
    for row in rows.iter().flatten() {
        for &(c, _) in row {
            col_nnz[c as usize] += 1;
        }
    }
    let mut det = 1u64;
    let mut pivot_of_col: Vec<Option<u32>> = vec![None; n];
    let mut pivot_count = 0usize;
    while pivot_count < n {
        let mut best: Option<(u64, u32, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            let Some(row) = row else { continue };
            let rn = row.len() as u64;
            for &(c, _) in row {
                let score = (rn - 1) * u64::from(col_nnz[c as usize].saturating_sub(1));
                let cand = (score, c, i);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let Some((_, c, r)) = best else {
            return 0; // entries exhausted with columns unpivoted: singular
        };
        let pivot_row = rows[r].take().expect("active row");
        for &(cc, _) in &pivot_row {
            col_nnz[cc as usize] -= 1;
        }
        let pivot_val = pivot_row
            .iter()
            .find(|(cc, _)| *cc == c)
            .map(|(_, v)| *v)
            .expect("pivot entry");
        let inv = inv_mod_u64(pivot_val, q);
        det = mul_mod_u64(det, pivot_val, q);
        pivot_of_col[c as usize] = Some(r as u32);
        pivot_count += 1;
        for row in rows.iter_mut() {
            let Some(rvec) = row else { continue };
            let Ok(pos) = rvec.binary_search_by_key(&c, |e| e.0) else {
                continue;
            };
            let f = mul_mod_u64(rvec[pos].1, inv, q);
            let mut merged = Vec::with_capacity(rvec.len() + pivot_row.len());
            let (mut a, mut b) = (0usize, 0usize);
            while a < rvec.len() || b < pivot_row.len() {
                match (rvec.get(a), pivot_row.get(b)) {
                    (Some(&(x, va)), Some(&(y, vb))) if x == y => {
                        if x != c {
                            let v = sub_mul_mod(va, f, vb, q);
                            if v != 0 {
                                merged.push((x, v));
                            }
                        }
                        a += 1;
                        b += 1;
                    }
                    (Some(&(x, va)), Some(&(y, _))) if x < y => {
                        merged.push((x, va));
                        a += 1;
                    }
                    (_, Some(&(y, vb))) => {
                        if y != c {
                            let v = sub_mul_mod(0, f, vb, q);
                            if v != 0 {
                                merged.push((y, v));
                            }
                        }
                        b += 1;
                    }
                    (Some(&(x, va)), None) => {
                        merged.push((x, va));
                        a += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            for &(cc, _) in rvec.iter() {
                col_nnz[cc as usize] -= 1;
            }
            for &(cc, _) in &merged {
                col_nnz[cc as usize] += 1;
            }
            *row = Some(merged);
        }
    }
    let perm: Vec<u32> = pivot_of_col
        .into_iter()
        .map(|x| x.expect("full pivot set"))
        .collect();
    if permutation_sign(&perm) < 0 {
        det = (q - det % q) % q;
    }
    det % q
}

fn sub_mul_mod(a: u64, f: u64, b: u64, q: u64) -> u64 {
    let fb = mul_mod_u64(f, b, q);
    if a >= fb {
        a - fb
    } else {
        a + q - fb
    }
}

fn permutation_sign(perm: &[u32]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i32;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        if len.is_multiple_of(2) {
            sign = -sign;
        }
    }
    sign
}

/// Exact determinant of a sparse integer matrix: word-prime determinants
/// recombined by CRT under a Hadamard bound. The prime sequence is fixed, so
/// the result is deterministic; primes run in parallel.
pub fn det_exact_crt(rows: &SparseRows, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    assert_eq!(rows.len(), n, "square matrix expected");
    let mut bound_bits = 2u64;
    for row in rows {
        let norm2: u128 = row
            .iter()
            .map(|&(_, v)| (i128::from(v) * i128::from(v)) as u128)
            .sum();
        if norm2 == 0 {
            return BigInt::zero();
        }
        // ceil(log2 sqrt(norm2)) = ceil(bits(norm2) / 2)
        bound_bits += u64::from((u128::BITS - norm2.leading_zeros()).div_ceil(2));
    }
    let nprimes = (bound_bits / 61 + 2) as usize;
    let primes = crt_primes(nprimes);
    let residues: Vec<u64> = primes
        .par_iter()
        .map(|&q| det_mod_q(rows, n, q))
        .collect();

    let mut x = BigInt::from(residues[0]);
    let mut modulus = BigInt::from(primes[0]);
    for (&q, &r) in primes.iter().zip(residues.iter()).skip(1) {
        let qb = BigInt::from(q);
        let m_mod_q = modulus.mod_floor(&qb).to_u64().unwrap();
        let x_mod_q = x.mod_floor(&qb).to_u64().unwrap();
        let diff = if r >= x_mod_q {
            r - x_mod_q
        } else {
            r + q - x_mod_q
        };
        let t = mul_mod_u64(diff, inv_mod_u64(m_mod_q, q), q);
        x += &modulus * BigInt::from(t);
        modulus *= qb;
    }
    if &x * 2 > modulus {
        x -= &modulus;
    }
    x
}

/// Sparse rows of a dense integer matrix whose entries fit i64 (asserted).
pub fn sparse_rows_of(m: &IntMatrix) -> SparseRows {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .filter_map(|j| {
                    if m[(i, j)].is_zero() {
                        None
                    } else {
                        Some((j as u32, m[(i, j)].to_i64().expect("entry fits i64")))
                    }
                })
                .collect()
        })
        .collect()
}
