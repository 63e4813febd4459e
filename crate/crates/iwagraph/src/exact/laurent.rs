//! Multivariate Laurent polynomials over Z with exact arithmetic.
//!
//! Entries of voltage Laplacians live in Z[t_1^{±1}, ..., t_l^{±1}]; their
//! determinants are defined only up to a unit ±t^a, so the canonical-form
//! machinery here (shift exponents to the nonnegative orthant, fix the sign
//! of the lexicographically first coefficient) is what makes "equal up to
//! associate" a plain equality test.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial in `vars` variables: exponent vector -> coefficient,
/// zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(vars);
        let c = c.into();
        if !c.is_zero() {
            out.terms.insert(vec![0; vars], c);
        }
        out
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, 1)
    }

    pub fn monomial(vars: usize, exponents: &[i64], coeff: impl Into<BigInt>) -> Self {
        assert_eq!(exponents.len(), vars);
        let mut out = Self::zero(vars);
        let c = coeff.into();
        if !c.is_zero() {
            out.terms.insert(exponents.to_vec(), c);
        }
        out
    }

    /// The generator t_i.
    pub fn variable(vars: usize, i: usize) -> Self {
        assert!(i < vars);
        let mut e = vec![0i64; vars];
        e[i] = 1;
        Self::monomial(vars, &e, 1)
    }

    /// t^e for a (possibly negative) exponent vector.
    pub fn unit_monomial(vars: usize, exponents: &[i64]) -> Self {
        Self::monomial(vars, exponents, 1)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exponents: &[i64]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    fn insert_add(&mut self, e: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_add(e, ca * cb);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * &c)).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.vars);
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

    /// Sum of coefficients = evaluation at t_1 = ... = t_l = 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Minimum exponent appearing in each variable (None when zero).
    fn min_exponents(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |mut acc, e| {
            for (a, b) in acc.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
            acc
        }))
    }

    /// Canonical representative of the associate class under units ±t^a:
    /// shift so every variable's minimum exponent is zero, then negate if
    /// the lexicographically first coefficient is negative.
    pub fn canonical(&self) -> Self {
        let Some(mins) = self.min_exponents() else {
            return self.clone();
        };
        let mut shifted: BTreeMap<Vec<i64>, BigInt> = self
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    e.iter().zip(&mins).map(|(x, m)| x - m).collect(),
                    c.clone(),
                )
            })
            .collect();
        let negate = shifted
            .iter()
            .next()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        if negate {
            for c in shifted.values_mut() {
                *c = -&*c;
            }
        }
        LaurentPoly {
            vars: self.vars,
            terms: shifted,
        }
    }

    /// Equality in the associate class (up to multiplication by ±t^a).
    pub fn eq_up_to_unit(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Minimum p-valuation over all coefficients; `None` for the zero
    /// polynomial. This is invariant under unit multiples.
    pub fn content_vp(&self, p: u64) -> Option<u64> {
        let p = BigInt::from(p);
        self.terms
            .values()
            .map(|c| {
                let mut c = c.abs();
                let mut v = 0u64;
                while (&c % &p).is_zero() {
                    c /= &p;
                    v += 1;
                }
                v
            })
            .min()
    }

    /// Divide every coefficient by p^v exactly.
    pub fn div_coeffs_pow(&self, p: u64, v: u64) -> Self {
        if v == 0 {
            return self.clone();
        }
        let d = BigInt::from(p).pow(u32::try_from(v).expect("valuation fits u32"));
        LaurentPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (q, r) = c.div_rem(&d);
                    assert!(r.is_zero(), "coefficient not divisible by p^{v}");
                    (e.clone(), q)
                })
                .collect(),
        }
    }

    /// Coefficients reduced into [0, p); terms vanishing mod p dropped.
    pub fn reduce_coeffs_mod_p(&self, p: u64) -> Self {
        let p = BigInt::from(p);
        LaurentPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter_map(|(e, c)| {
                    let r = c.mod_floor(&p);
                    if r.is_zero() {
                        None
                    } else {
                        Some((e.clone(), r))
                    }
                })
                .collect(),
        }
    }

    /// Apply an integer-linear change of exponents (monomial substitution
    /// t^e -> t^{f(e)}). Collisions accumulate, so any f is safe; for f in
    /// GL_l(Z) this is a ring automorphism.
    pub fn map_exponents(&self, f: impl Fn(&[i64]) -> Vec<i64>) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            let fe = f(e);
            assert_eq!(fe.len(), self.vars);
            out.insert_add(fe, c.clone());
        }
        out
    }

    /// Exact division, `None` when not divisible. Both operands are shifted
    /// to the nonnegative orthant first; the unit shift difference carries
    /// to the quotient, so this is division in the full Laurent ring.
    pub fn exact_div(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.vars, other.vars);
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(self.vars));
        }
        let amin = self.min_exponents().expect("nonzero");
        let bmin = other.min_exponents().expect("nonzero");
        let a_shift: Vec<i64> = amin.iter().map(|x| -x).collect();
        let b_shift: Vec<i64> = bmin.iter().map(|x| -x).collect();
        let mut rem = shift_terms(&self.terms, &a_shift);
        let div = shift_terms(&other.terms, &b_shift);

        // Lex order is multiplicative, so the leading term of the remaining
        // quotient is always LT(rem)/LT(div); peel it until rem vanishes.
        let (lt_e, lt_c) = div.last_key_value().expect("nonzero divisor");
        let mut quot: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        while let Some((re, rc)) = rem.last_key_value() {
            let qe: Vec<i64> = re.iter().zip(lt_e).map(|(x, y)| x - y).collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let (qc, r) = rc.div_rem(lt_c);
            if !r.is_zero() || qc.is_zero() {
                return None;
            }
            // rem -= qc * t^qe * div
            for (de, dc) in &div {
                let e: Vec<i64> = de.iter().zip(&qe).map(|(x, y)| x + y).collect();
                let delta = &qc * dc;
                match rem.get_mut(&e) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            rem.remove(&e);
                        }
                    }
                    None => {
                        rem.insert(e, -delta);
                    }
                }
            }
            quot.insert(qe, qc);
        }

        // Undo the shifts: self = t^{-a_shift} rem_0, other = t^{-b_shift} div_0.
        let unshift: Vec<i64> = a_shift.iter().zip(&b_shift).map(|(a, b)| b - a).collect();
        Some(LaurentPoly {
            vars: self.vars,
            terms: shift_terms(&quot, &unshift),
        })
    }

    /// Substitute t_i = u_i + 1 for every variable. Requires nonnegative
    /// exponents (canonicalize first).
    pub fn shift_vars_plus_one(&self) -> Self {
        self.compose_vars_shift(1)
    }

    /// Inverse of [`shift_vars_plus_one`](Self::shift_vars_plus_one):
    /// substitute t_i = u_i - 1.
    pub fn shift_vars_minus_one(&self) -> Self {
        self.compose_vars_shift(-1)
    }

    fn compose_vars_shift(&self, delta: i64) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            assert!(
                e.iter().all(|&x| x >= 0),
                "shift requires nonnegative exponents"
            );
            let mut term = Self::constant(self.vars, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                let base = Self::variable(self.vars, i).add(&Self::constant(self.vars, delta));
                term = term.mul(&base.pow(u32::try_from(exp).expect("small exponent")));
            }
            out = out.add(&term);
        }
        out
    }

    /// Max over terms of the exponent sum. Requires nonnegative exponents.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| {
                assert!(e.iter().all(|&x| x >= 0), "degree requires nonneg exponents");
                e.iter().sum::<i64>()
            })
            .max()
            .unwrap_or(0)
    }

    /// Degree in variable i (max exponent). Requires nonnegative exponents.
    pub fn degree_in(&self, i: usize) -> i64 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Dense univariate coefficients c_0..c_deg; requires vars == 1 and
    /// nonnegative exponents.
    pub fn univariate_coeffs(&self) -> Vec<BigInt> {
        assert_eq!(self.vars, 1, "univariate view of multivariate polynomial");
        let deg = self.degree_in(0);
        let mut out = vec![BigInt::zero(); usize::try_from(deg).unwrap() + 1];
        for (e, c) in &self.terms {
            assert!(e[0] >= 0, "univariate view requires nonneg exponents");
            out[e[0] as usize] = c.clone();
        }
        out
    }

    /// Render with the given variable names, highest lex term first.
    pub fn display_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.vars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                if exp == 1 {
                    mono.push_str(names[i]);
                } else {
                    mono.push_str(&format!("{}^{}", names[i], exp));
                }
            }
            let piece = if mono.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            parts.push(piece);
        }
        let mut out = parts[0].clone();
        for piece in &parts[1..] {
            if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(piece);
            }
        }
        out
    }
}

fn shift_terms(terms: &BTreeMap<Vec<i64>, BigInt>, shift: &[i64]) -> BTreeMap<Vec<i64>, BigInt> {
    terms
        .iter()
        .map(|(e, c)| {
            (
                e.iter().zip(shift).map(|(x, s)| x + s).collect(),
                c.clone(),
            )
        })
        .collect()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = match self.vars {
            1 => vec!["T".into()],
            2 => vec!["T".into(), "S".into()],
            n => (0..n).map(|i| format!("t{i}")).collect(),
        };
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.display_with(&refs))
    }
}

/// Laurent polynomials over Z form an integral domain, so Bareiss
/// intermediate divisions (which equal minors by the Sylvester identity) are
/// exact and fraction-free elimination applies.
impl crate::exact::ring::Ring for LaurentPoly {
    const FRACTION_FREE: bool = true;

    fn ring_zero(&self) -> Self {
        LaurentPoly::zero(self.vars)
    }
    fn ring_one(&self) -> Self {
        LaurentPoly::one(self.vars)
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_exact_div(&self, rhs: &Self) -> Self {
        self.exact_div(rhs)
            .expect("inexact Laurent division in Bareiss elimination")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> LaurentPoly {
        LaurentPoly::variable(1, 0)
    }

    #[test]
    fn ring_basics() {
        let a = t().add(&LaurentPoly::one(1)); // t + 1
        let b = t().sub(&LaurentPoly::one(1)); // t - 1
        let prod = a.mul(&b);
        // t^2 - 1
        assert_eq!(prod.coeff(&[2]), BigInt::from(1));
        assert_eq!(prod.coeff(&[0]), BigInt::from(-1));
        assert_eq!(prod.coeff(&[1]), BigInt::zero());
        assert_eq!(prod.num_terms(), 2);
        assert_eq!(prod.eval_at_one(), BigInt::zero());
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.pow(0), LaurentPoly::one(1));
        assert_eq!(a.pow(3).coeff(&[1]), BigInt::from(3));
    }

    #[test]
    fn negative_exponents_and_canonical_form() {
        // 2 - t - t^{-1}, the classic cycle determinant shape.
        let p = LaurentPoly::constant(1, 2)
            .sub(&t())
            .sub(&LaurentPoly::unit_monomial(1, &[-1]));
        let c = p.canonical();
        // Shifted by t: -1 + 2t - t^2, then sign-fixed to 1 - 2t + t^2.
        assert_eq!(c.coeff(&[0]), BigInt::from(1));
        assert_eq!(c.coeff(&[1]), BigInt::from(-2));
        assert_eq!(c.coeff(&[2]), BigInt::from(1));
        // (t-1)^2 is in the same associate class.
        let square = t().sub(&LaurentPoly::one(1)).pow(2);
        assert!(p.eq_up_to_unit(&square));
        assert!(!p.eq_up_to_unit(&t()));
    }

    #[test]
    fn canonical_is_idempotent_and_unit_invariant() {
        let p = t().sub(&LaurentPoly::one(1)); // t - 1
        let c = p.canonical();
        assert_eq!(c.canonical(), c);
        // 1 - t (the negation) canonicalizes identically.
        assert_eq!(p.neg().canonical(), c);
        // Multiplying by -t^{-3} lands in the same class.
        let unit = LaurentPoly::monomial(1, &[-3], -1);
        assert_eq!(p.mul(&unit).canonical(), c);
    }

    #[test]
    fn exact_division_round_trips() {
        let a = t().sub(&LaurentPoly::one(1)).pow(2).mul_scalar(3);
        let b = t().sub(&LaurentPoly::one(1));
        let q = a.exact_div(&b).unwrap();
        assert_eq!(q.mul(&b), a);
        // Non-divisible cases are rejected, not mangled.
        assert!(b.exact_div(&a).is_none());
        assert!(t()
            .add(&LaurentPoly::one(1))
            .exact_div(&LaurentPoly::constant(1, 2))
            .is_none());
        // Laurent shift: dividing by t^{-2} multiplies by t^2.
        let shifted = a.exact_div(&LaurentPoly::unit_monomial(1, &[-2])).unwrap();
        assert_eq!(shifted.coeff(&[4]), BigInt::from(3));
    }

    #[test]
    fn bivariate_division_and_degree() {
        let s = LaurentPoly::variable(2, 1);
        let t2 = LaurentPoly::variable(2, 0);
        let f = t2.add(&s).pow(2).mul(&t2.sub(&s)); // (T+S)^2 (T-S)
        let q = f.exact_div(&t2.add(&s)).unwrap();
        assert_eq!(q, t2.add(&s).mul(&t2.sub(&s)));
        assert_eq!(f.total_degree(), 3);
        assert_eq!(f.degree_in(0), 3);
        assert_eq!(f.degree_in(1), 3);
    }

    #[test]
    fn content_and_mod_p() {
        let p = t().mul_scalar(12).add(&LaurentPoly::constant(1, 18));
        assert_eq!(p.content_vp(2), Some(1));
        assert_eq!(p.content_vp(3), Some(1));
        assert_eq!(p.content_vp(5), Some(0));
        assert_eq!(LaurentPoly::zero(1).content_vp(7), None);
        let reduced = p.reduce_coeffs_mod_p(5);
        assert_eq!(reduced.coeff(&[1]), BigInt::from(2));
        assert_eq!(reduced.coeff(&[0]), BigInt::from(3));
        let halved = p.div_coeffs_pow(2, 1);
        assert_eq!(halved.coeff(&[1]), BigInt::from(6));
        // Coefficients divisible by 6 vanish entirely mod 2 and mod 3.
        assert!(p.mul_scalar(0).is_zero());
    }

    #[test]
    fn shift_vars_expands_binomially() {
        // t^2 at t = u + 1 gives u^2 + 2u + 1.
        let sq = t().pow(2).shift_vars_plus_one();
        assert_eq!(sq.coeff(&[2]), BigInt::from(1));
        assert_eq!(sq.coeff(&[1]), BigInt::from(2));
        assert_eq!(sq.coeff(&[0]), BigInt::from(1));
        // (t - 1)^2 at t = u + 1 is exactly u^2.
        let m = t().sub(&LaurentPoly::one(1)).pow(2).shift_vars_plus_one();
        assert_eq!(m, LaurentPoly::monomial(1, &[2], 1));
    }

    #[test]
    fn exponent_maps_compose() {
        // (a b; c d) = (1 1; 0 1): t^i s^j -> t^i s^{i+j}.
        let s = LaurentPoly::variable(2, 1);
        let t2 = LaurentPoly::variable(2, 0);
        let f = t2.mul(&s.pow(2)); // T S^2
        let g = f.map_exponents(|e| vec![e[0], e[0] + e[1]]);
        assert_eq!(g.coeff(&[1, 3]), BigInt::from(1));
        // A collapsing (non-invertible) map accumulates coefficients.
        let h = t2.add(&s).map_exponents(|e| vec![e[0] + e[1], 0]);
        assert_eq!(h.coeff(&[1, 0]), BigInt::from(2));
    }

    #[test]
    fn display_reads_naturally() {
        let p = t()
            .pow(2)
            .add(&t().mul_scalar(5))
            .sub(&LaurentPoly::one(1));
        assert_eq!(p.to_string(), "T^2 + 5*T - 1");
        assert_eq!(LaurentPoly::zero(1).to_string(), "0");
        let bi = LaurentPoly::variable(2, 0)
            .mul(&LaurentPoly::variable(2, 1))
            .mul_scalar(2);
        assert_eq!(bi.to_string(), "2*T*S");
    }

    #[test]
    fn univariate_coefficients_are_dense() {
        let p = t().pow(3).sub(&t()); // T^3 - T
        let cs = p.univariate_coeffs();
        assert_eq!(
            cs,
            vec![
                BigInt::zero(),
                BigInt::from(-1),
                BigInt::zero(),
                BigInt::from(1)
            ]
        );
    }
}
