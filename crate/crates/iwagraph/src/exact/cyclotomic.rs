//! Exact arithmetic in Z[ζ] for ζ a primitive p^k-th root of unity, and the
//! π-adic valuation that powers the analytic route.
//!
//! Elements are stored on the power basis 1, ζ, ..., ζ^{φ-1} with
//! φ = φ(p^k) = (p-1)p^{k-1}; the single reduction rule comes from
//! ζ^φ = -(1 + ζ^{p^{k-1}} + ... + ζ^{(p-2)p^{k-1}}).
//!
//! Valuations are taken for the unique prime π = ζ - 1 above p, normalized so
//! v_π(p) = φ (equivalently v_p(π) = 1/φ). Rewriting an element on the
//! π-power basis via the binomial transform a_i = Σ_j b_j C(j,i) makes the
//! valuation a strict minimum of φ·v_p(a_i) + i over nonzero coordinates —
//! strict because the candidates are pairwise distinct mod φ — so the answer
//! is exact, never an upper bound. A word-sized mod-p^s variant of the same
//! transform handles large conductors; whenever it sees any nonzero residue
//! its minimum is provably the true one, and it escalates precision (and
//! finally falls back to big integers) otherwise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::laurent::LaurentPoly;
use crate::exact::modp::{crt_primes, inv_mod_u64, mul_mod_u64, word_k_limit};

/// φ(p^k) = (p-1) p^{k-1} for k >= 1.
pub fn phi_pk(p: u64, k: u32) -> u64 {
    assert!(k >= 1);
    (p - 1) * p.pow(k - 1)
}

/// An element of Z[ζ_{p^k}] on the power basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicElem {
    p: u64,
    k: u32,
    coeffs: Vec<BigInt>,
}

impl CyclotomicElem {
    pub fn zero(p: u64, k: u32) -> Self {
        let phi = phi_pk(p, k) as usize;
        CyclotomicElem {
            p,
            k,
            coeffs: vec![BigInt::zero(); phi],
        }
    }

    pub fn from_int(p: u64, k: u32, n: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(p, k);
        out.coeffs[0] = n.into();
        out
    }

    pub fn one(p: u64, k: u32) -> Self {
        Self::from_int(p, k, 1)
    }

    /// ζ^e, reduced onto the power basis.
    pub fn root_power(p: u64, k: u32, e: u64) -> Self {
        let mut out = Self::zero(p, k);
        out.add_monomial(e, &BigInt::one());
        out
    }

    fn add_monomial(&mut self, e: u64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let pk = self.p.pow(self.k);
        let phi = self.coeffs.len() as u64;
        let e = e % pk;
        if e < phi {
            self.coeffs[e as usize] += c;
        } else {
            // ζ^e = -Σ_{j<p-1} ζ^{j p^{k-1} + r} with r = e - φ < p^{k-1}.
            let r = e - phi;
            let step = self.p.pow(self.k - 1);
            for j in 0..self.p - 1 {
                self.coeffs[(j * step + r) as usize] -= c;
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn conductor_exponent(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn assert_same_field(&self, other: &Self) {
        assert!(
            self.p == other.p && self.k == other.k,
            "mixed cyclotomic fields: ({},{}) vs ({},{})",
            self.p,
            self.k,
            other.p,
            other.k
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicElem {
            p: self.p,
            k: self.k,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicElem {
            p: self.p,
            k: self.k,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul_scalar(&self, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        CyclotomicElem {
            p: self.p,
            k: self.k,
            coeffs: self.coeffs.iter().map(|a| a * &c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let phi = self.coeffs.len();
        let mut wide = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let mut out = Self::zero(self.p, self.k);
        // High-degree slots feed only lower ones, so one descending pass
        // (through add_monomial's reduction) settles everything.
        for e in (0..wide.len()).rev() {
            if !wide[e].is_zero() {
                let c = std::mem::take(&mut wide[e]);
                if e < phi {
                    out.coeffs[e] += c;
                } else {
                    out.add_monomial(e as u64, &c);
                }
            }
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p, self.k);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Reinterpret in the bigger field Q(ζ_{p^K}), K >= k, via
    /// ζ_{p^k} = ζ_{p^K}^{p^{K-k}}.
    pub fn lift_to_conductor(&self, cap_k: u32) -> Self {
        assert!(cap_k >= self.k);
        if cap_k == self.k {
            return self.clone();
        }
        let stretch = self.p.pow(cap_k - self.k);
        let mut out = Self::zero(self.p, cap_k);
        for (j, c) in self.coeffs.iter().enumerate() {
            out.add_monomial(j as u64 * stretch, c);
        }
        out
    }

    /// Field automorphism ζ -> ζ^u for u coprime to p.
    pub fn galois_apply(&self, u: u64) -> Self {
        assert_ne!(u % self.p, 0, "exponent must be coprime to p");
        let mut out = Self::zero(self.p, self.k);
        for (j, c) in self.coeffs.iter().enumerate() {
            out.add_monomial(j as u64 * u, c);
        }
        out
    }
}

/// Evaluate a Laurent polynomial at the root tuple (ζ^{e_1}, ..., ζ^{e_l})
/// with ζ of order p^k. Negative Laurent exponents wrap mod p^k.
pub fn laurent_eval_at_roots(
    poly: &LaurentPoly,
    p: u64,
    k: u32,
    root_exponents: &[u64],
) -> CyclotomicElem {
    assert_eq!(poly.vars(), root_exponents.len());
    let pk = p.pow(k);
    let mut out = CyclotomicElem::zero(p, k);
    for (exps, coeff) in poly.terms() {
        let mut e: u64 = 0;
        for (x, r) in exps.iter().zip(root_exponents) {
            let xm = x.rem_euclid(pk as i64) as u64;
            e = (e + ((u128::from(xm) * u128::from(*r)) % u128::from(pk)) as u64) % pk;
        }
        out.add_monomial(e, coeff);
    }
    out
}

fn vp_u64(p: u64, mut n: u64) -> (u32, u64) {
    debug_assert!(n > 0);
    let mut v = 0u32;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    (v, n)
}

fn vp_big(p: u64, n: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0u64;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exact π-basis transform over Z: a_i = Σ_j b_j C(j,i), minimum over
/// nonzero coordinates of φ v_p(a_i) + i.
fn v_pi_exact(p: u64, coeffs: &[BigInt]) -> u64 {
    let phi = coeffs.len();
    let mut acc = vec![BigInt::zero(); phi];
    let mut row: Vec<BigInt> = Vec::with_capacity(phi); // Pascal row C(j, ·)
    for (j, b) in coeffs.iter().enumerate() {
        if j == 0 {
            row.push(BigInt::one());
        } else {
            row.push(BigInt::one());
            for i in (1..j).rev() {
                let lower = row[i - 1].clone();
                row[i] += lower;
            }
        }
        if !b.is_zero() {
            for i in 0..=j {
                acc[i] += b * &row[i];
            }
        }
    }
    let phi_u = phi as u64;
    acc.iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| phi_u * vp_big(p, a) + i as u64)
        .min()
        .expect("nonzero element")
}

/// Same transform with residues mod p^s and valuation-tracked binomial rows.
/// Returns `None` when every a_i vanished mod p^s (precision too low).
fn v_pi_mod_ps(p: u64, s: u32, coeffs: &[i64]) -> Option<u64> {
    let modulus = p.pow(s);
    let phi = coeffs.len();
    let mut acc = vec![0u64; phi];
    for (j, &b) in coeffs.iter().enumerate() {
        if b == 0 {
            continue;
        }
        let b_res = i128::from(b).rem_euclid(i128::from(modulus)) as u64;
        if b_res == 0 {
            // b is a small exact integer, so b ≡ 0 mod p^s means b = n·p^s
            // with |n| small; its contributions all vanish mod p^s.
            continue;
        }
        // Walk C(j, i) along i as p^v · u with u a unit mod p^s.
        let mut v: i64 = 0;
        let mut u: u64 = 1;
        for (i, slot) in acc.iter_mut().enumerate().take(j + 1) {
            if i > 0 {
                let (vn, un) = vp_u64(p, (j - i + 1) as u64);
                let (vd, ud) = vp_u64(p, i as u64);
                v += i64::from(vn) - i64::from(vd);
                u = mul_mod_u64(u, un % modulus, modulus);
                u = mul_mod_u64(u, inv_mod_u64(ud % modulus, modulus), modulus);
            }
            debug_assert!(v >= 0, "binomial coefficient with negative valuation");
            if (v as u32) < s {
                let pv = p.pow(v as u32);
                let contrib = mul_mod_u64(b_res, mul_mod_u64(pv, u, modulus), modulus);
                *slot = (*slot + contrib) % modulus;
            }
        }
    }
    let phi_u = phi as u64;
    acc.iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| {
            let (va, _) = vp_u64(p, a);
            phi_u * u64::from(va) + i as u64
        })
        .min()
}

/// v_π of a nonzero element (π = ζ - 1, v_π(p) = φ); `None` for zero.
///
/// Small conductors go straight to the exact transform; large ones run the
/// word-sized modular transform, doubling precision while inconclusive, and
/// only fall back to exact big-integer arithmetic as a last resort.
pub fn cyclo_v_pi(x: &CyclotomicElem) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let phi = x.coeffs.len();
    if phi <= 64 {
        return Some(v_pi_exact(x.p, &x.coeffs));
    }
    let small: Option<Vec<i64>> = x.coeffs.iter().map(|c| c.to_i64()).collect();
    if let Some(small) = small {
        let s_max = word_k_limit(x.p).saturating_sub(1).max(1);
        let mut s = 8.min(s_max);
        loop {
            if let Some(v) = v_pi_mod_ps(x.p, s, &small) {
                return Some(v);
            }
            if s == s_max {
                break;
            }
            s = (s * 2).min(s_max);
        }
    }
    Some(v_pi_exact(x.p, &x.coeffs))
}

/// v_p of a nonzero element as an exact fraction (v_π, φ); `None` for zero.
pub fn cyclo_vp_num_den(x: &CyclotomicElem) -> Option<(u64, u64)> {
    cyclo_v_pi(x).map(|v| (v, x.coeffs.len() as u64))
}

// ---------------------------------------------------------------------------
// Field norms via resultants.
// ---------------------------------------------------------------------------

fn cyclotomic_poly_mod(p: u64, k: u32, q: u64) -> Vec<u64> {
    // Φ_{p^k}(x) = Σ_{j<p} x^{j p^{k-1}}, coefficients 0/1.
    let phi = phi_pk(p, k) as usize;
    let step = p.pow(k - 1) as usize;
    let mut f = vec![0u64; phi + 1];
    for j in 0..p as usize {
        f[j * step] = 1 % q;
    }
    f
}

fn strip_zeros(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Resultant of a (monic, as used here) and b over F_q by Euclidean descent.
fn resultant_mod_q(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> u64 {
    strip_zeros(&mut a);
    strip_zeros(&mut b);
    let mut res = 1u64;
    loop {
        if b.is_empty() {
            return 0;
        }
        if b.len() == 1 {
            // Res(a, const) = const^{deg a}.
            let mut acc = res;
            let c = b[0];
            for _ in 0..a.len() - 1 {
                acc = mul_mod_u64(acc, c, q);
            }
            return acc;
        }
        if a.len() < b.len() {
            // Res(a,b) = (-1)^{deg a * deg b} Res(b,a).
            if (a.len() - 1) * (b.len() - 1) % 2 == 1 {
                res = (q - res) % q;
            }
            std::mem::swap(&mut a, &mut b);
        }
        // r = a mod b; Res(a,b) = (-1)^{da db} lc(b)^{da - dr} Res(b,r).
        let da = a.len() - 1;
        let db = b.len() - 1;
        let lc_b = *b.last().unwrap();
        let inv_lc = inv_mod_u64(lc_b, q);
        let mut r = a.clone();
        for d in (db..=da).rev() {
            let f = mul_mod_u64(r[d], inv_lc, q);
            if f == 0 {
                continue;
            }
            for (i, &bc) in b.iter().enumerate() {
                let idx = d - db + i;
                let sub = mul_mod_u64(f, bc, q);
                r[idx] = (r[idx] + q - sub) % q;
            }
        }
        r.truncate(db);
        strip_zeros(&mut r);
        let dr = if r.is_empty() { 0 } else { r.len() - 1 };
        if da * db % 2 == 1 {
            res = (q - res) % q;
        }
        for _ in 0..da - dr {
            res = mul_mod_u64(res, lc_b, q);
        }
        if r.is_empty() {
            return 0;
        }
        a = b;
        b = r;
    }
}

fn ceil_half_bits(n: &BigInt) -> u64 {
    // ceil(log2 sqrt(n)) for n >= 1.
    n.bits().div_ceil(2)
}

/// Field norm N(x) = Π_σ σ(x) over Gal(Q(ζ)/Q), computed as Res(Φ_{p^k}, x̃)
/// by Chinese remaindering word-prime resultants under a Hadamard bound.
/// Φ is monic, so reduction mod q commutes with the resultant.
pub fn cyclo_norm(x: &CyclotomicElem) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let phi = x.coeffs.len() as u64;
    let mut g = x.coeffs.clone();
    while g.last().map(Zero::is_zero) == Some(true) {
        g.pop();
    }
    let deg_g = (g.len() - 1) as u64;
    let norm_sq: BigInt = g.iter().map(|c| c * c).sum();
    // |Res(Φ, g)| <= ||Φ||^{deg g} ||g||^{deg Φ}, ||Φ||² = p.
    let bound_bits = deg_g * ceil_half_bits(&BigInt::from(x.p)) + phi * ceil_half_bits(&norm_sq) + 2;
    let nprimes = (bound_bits / 61 + 2) as usize;
    let primes = crt_primes(nprimes);

    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for &q in &primes {
        let f = cyclotomic_poly_mod(x.p, x.k, q);
        let gq: Vec<u64> = g
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(q)).to_u64().unwrap())
            .collect();
        let r = resultant_mod_q(f, gq, q);
        // Incremental CRT.
        let qb = BigInt::from(q);
        if modulus.is_one() {
            acc = BigInt::from(r);
        } else {
            let m_mod_q = modulus.mod_floor(&qb).to_u64().unwrap();
            let x_mod_q = acc.mod_floor(&qb).to_u64().unwrap();
            let diff = if r >= x_mod_q {
                r - x_mod_q
            } else {
                r + q - x_mod_q
            };
            let t = mul_mod_u64(diff, inv_mod_u64(m_mod_q, q), q);
            acc += &modulus * BigInt::from(t);
        }
        modulus *= qb;
    }
    if &acc * 2 > modulus {
        acc -= &modulus;
    }
    acc
}
