//! Characteristic series of towers and everything downstream of them:
//! analytic p-parts, growth invariants, and exact growth-formula fits.
//!
//! The voltage Laplacian Δ∞ of a base graph is its Laplacian with each edge
//! weighted by the group monomial of its voltage; it is a matrix over the
//! Laurent polynomial ring in the l deck generators. Its determinant is the
//! object everything else reads from:
//!
//! * specializing the generators to p-power roots of unity and multiplying
//!   over all nontrivial characters recovers (up to the explicit p^{ml}
//!   factor) the spanning-tree count of the level-m cover — so π-adic
//!   valuations of those specializations give the p-part of every Jacobian
//!   in the tower without ever unrolling a cover;
//! * for l = 1, dividing by (τ - 1) and rewriting in T = τ - 1 gives the
//!   characteristic polynomial whose content and lowest unit coefficient
//!   are μ and λ;
//! * for l = 2, the content m₀ and the translate-prime multiplicities l₀ of
//!   the mod-p reduction control the leading growth terms.
//!
//! Growth tables take valuations from either engine (Smith normal form on
//! the unrolled cover, or the analytic product); exact rational fits against
//! the expected growth shapes extract ν and the two-variable coefficients,
//! demanding zero residuals instead of minimizing them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{
    cyclo_norm, cyclo_v_pi, det_ring, laurent_eval_at_roots, prime_multiplicity_mod_p,
    LaurentPoly,
};
use crate::jacobian::{jacobian_of_cover, ComputeBudget};
use crate::multigraph::Multigraph;
use crate::voltage::{derived_graph, require_connected_tower, VoltageAssignment};

/// The voltage Laplacian Δ∞ = (D - A_α)^t as a row-major n×n matrix of
/// Laurent polynomials in the l deck generators. Loop edges contribute
/// x^α + x^{-α} to their diagonal entry and 2 to the degree term, so they
/// cancel exactly when α is trivial and twist otherwise.
pub fn voltage_laplacian(
    base: &Multigraph,
    assignment: &VoltageAssignment,
) -> Result<Vec<LaurentPoly>> {
    assignment.check_graph(base)?;
    let n = base.vertex_count();
    let l = assignment.rank();
    let mut adj = vec![LaurentPoly::zero(l); n * n];
    for (e, &(t, h)) in base.edges().iter().enumerate() {
        let alpha = assignment.voltage(e);
        let inverse: Vec<i64> = alpha.iter().map(|&x| -x).collect();
        adj[t * n + h] = adj[t * n + h].add(&LaurentPoly::unit_monomial(l, alpha));
        adj[h * n + t] = adj[h * n + t].add(&LaurentPoly::unit_monomial(l, &inverse));
    }
    let mut out = vec![LaurentPoly::zero(l); n * n];
    for i in 0..n {
        for j in 0..n {
            // Transposed: entry (i, j) of Δ∞ comes from (j, i) of D - A_α.
            let mut entry = adj[j * n + i].neg();
            if i == j {
                entry = entry.add(&LaurentPoly::constant(l, base.degree(i) as i64));
            }
            out[i * n + j] = entry;
        }
    }
    Ok(out)
}

/// det Δ∞ in canonical form (exponents shifted nonnegative, leading sign
/// normalized). The determinant of any voltage Laplacian vanishes at the
/// trivial character; that is asserted here and surfaced as
/// [`Error::NonzeroAtOne`] if violated.
pub fn char_det(base: &Multigraph, assignment: &VoltageAssignment) -> Result<LaurentPoly> {
    let n = base.vertex_count();
    let entries = voltage_laplacian(base, assignment)?;
    let det = det_ring(n, &entries);
    if !det.eval_at_one().is_zero() {
        return Err(Error::NonzeroAtOne);
    }
    Ok(det.canonical())
}

/// The characteristic polynomial of a Z_p-tower (l = 1): canonical det Δ∞
/// divided by its forced (τ - 1) factor, rewritten in T = τ - 1.
pub fn char_t_polynomial(
    base: &Multigraph,
    assignment: &VoltageAssignment,
) -> Result<LaurentPoly> {
    if assignment.rank() != 1 {
        return Err(Error::WrongArity {
            expected: 1,
            got: assignment.rank(),
        });
    }
    let det = char_det(base, assignment)?;
    let tau_minus_one = LaurentPoly::variable(1, 0).sub(&LaurentPoly::one(1));
    let quotient = det.exact_div(&tau_minus_one).ok_or(Error::NotDivisibleByT)?;
    // det is canonical (lowest exponent 0, positive leading term), and τ - 1
    // is monic with constant term at exponent 0, so the quotient already has
    // nonnegative exponents and a positive leading coefficient.
    Ok(quotient.shift_vars_plus_one())
}

/// μ and λ read off a characteristic polynomial in the T basis: μ is the
/// minimum coefficient valuation, λ the first T-power achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantsL1 {
    pub mu: u64,
    pub lambda: u64,
    /// The characteristic polynomial in T = τ - 1.
    pub char_t: LaurentPoly,
}

pub fn invariants_l1(base: &Multigraph, assignment: &VoltageAssignment) -> Result<InvariantsL1> {
    let char_t = char_t_polynomial(base, assignment)?;
    let p = assignment.p();
    let mu = char_t.content_vp(p).ok_or(Error::ZeroModP { p })?;
    let coeffs = char_t.univariate_coeffs();
    let lambda = coeffs
        .iter()
        .position(|c| !c.is_zero() && vp_of_big(c, p) == mu)
        .expect("content valuation is attained") as u64;
    Ok(InvariantsL1 { mu, lambda, char_t })
}

/// m₀ (content valuation of det Δ∞) and l₀ (total multiplicity of translate
/// primes in the distinguished mod-p part) for a Z_p^2-tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantsL2 {
    pub m0: u64,
    pub l0: u64,
    /// (det Δ∞ / p^{m0}) mod p, written in the shifted variables (so its
    /// display uses T = τ - 1 and S = σ - 1).
    pub distinguished_mod_p: LaurentPoly,
}

pub fn invariants_l2(base: &Multigraph, assignment: &VoltageAssignment) -> Result<InvariantsL2> {
    if assignment.rank() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            got: assignment.rank(),
        });
    }
    let p = assignment.p();
    let det = char_det(base, assignment)?;
    let m0 = det.content_vp(p).ok_or(Error::ZeroModP { p })?;
    let unit_part = det.div_coeffs_pow(p, m0);
    let gbar = unit_part.reduce_coeffs_mod_p(p).canonical();
    if gbar.is_zero() {
        return Err(Error::ZeroModP { p });
    }

    // Translate primes ξ = σ^a τ^b - 1 dividing a Laurent polynomial have
    // primitive integer direction, and Bezout on the curve σ^a τ^b = 1 (or
    // σ^a = τ^{|b|}) bounds |a| + |b| by twice the total degree. Enumerate
    // one representative per ± pair.
    let bound = 2 * gbar.total_degree();
    let mut l0 = 0u64;
    let mut directions = vec![(1i64, 0i64)];
    for b in 1..=bound {
        for a in -bound..=bound {
            if a.abs() + b <= bound && num_integer::gcd(a, b) == 1 {
                directions.push((a, b));
            }
        }
    }
    for (a, b) in directions {
        l0 += prime_multiplicity_mod_p(&unit_part, (a, b), p)?;
    }

    Ok(InvariantsL2 {
        m0,
        l0,
        distinguished_mod_p: gbar.shift_vars_plus_one().reduce_coeffs_mod_p(p),
    })
}

// ---------------------------------------------------------------------------
// Analytic valuations from the determinant at roots of unity.
// ---------------------------------------------------------------------------

/// Orbit representatives for the Galois action on primitive characters of
/// (Z/p^j)^l: the first coordinate that is a unit is normalized to 1,
/// earlier coordinates run over multiples of p, later ones are free. Every
/// orbit has size φ(p^j) and appears exactly once.
fn primitive_orbit_reps(p: u64, j: u32, l: usize) -> Vec<Vec<u64>> {
    assert!(j >= 1);
    let pj = p.pow(j);
    let mut reps = Vec::new();
    for unit_at in 0..l {
        // Mixed-radix odometer over the non-normalized coordinates.
        let radices: Vec<u64> = (0..l)
            .filter(|&i| i != unit_at)
            .map(|i| if i < unit_at { pj / p } else { pj })
            .collect();
        let mut digits = vec![0u64; radices.len()];
        loop {
            let mut rep = Vec::with_capacity(l);
            let mut d = 0;
            for i in 0..l {
                if i == unit_at {
                    rep.push(1);
                } else if i < unit_at {
                    rep.push(digits[d] * p);
                    d += 1;
                } else {
                    rep.push(digits[d]);
                    d += 1;
                }
            }
            reps.push(rep);
            let mut carry = 0;
            while carry < digits.len() {
                digits[carry] += 1;
                if digits[carry] < radices[carry] {
                    break;
                }
                digits[carry] = 0;
                carry += 1;
            }
            if carry == digits.len() {
                break;
            }
        }
    }
    reps
}

/// Analytic p-part engine: evaluates det Δ∞ at one Galois orbit
/// representative per conductor and caches the per-conductor valuation sums
/// S_j, so towers are walked level by level at the cost of the new levels
/// only.
pub struct AnalyticVp {
    det: LaurentPoly,
    p: u64,
    l: usize,
    base_vp: u64,
    conductor_sums: Vec<u64>,
}

/// v_p of a positive big integer.
fn vp_of_big(x: &BigInt, p: u64) -> u64 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, &p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

impl AnalyticVp {
    /// Requires a connected tower: a vanishing determinant at some character
    /// would make the product meaningless (and the covers disconnected).
    pub fn new(base: &Multigraph, assignment: &VoltageAssignment) -> Result<Self> {
        require_connected_tower(base, assignment)?;
        let det = char_det(base, assignment)?;
        let kappa0 = base.spanning_tree_count();
        Ok(AnalyticVp {
            det,
            p: assignment.p(),
            l: assignment.rank(),
            base_vp: vp_of_big(&kappa0, assignment.p()),
            conductor_sums: Vec::new(),
        })
    }

    pub fn base_vp(&self) -> u64 {
        self.base_vp
    }

    /// π-adic valuations of det Δ∞ at each orbit representative of
    /// conductor p^j. One entry per Galois orbit; the sum over the whole
    /// orbit of p-valuations equals the listed v_π.
    pub fn orbit_valuations(&self, j: u32) -> Result<Vec<(Vec<u64>, u64)>> {
        let reps = primitive_orbit_reps(self.p, j, self.l);
        reps.into_par_iter()
            .map(|rep| {
                let value = laurent_eval_at_roots(&self.det, self.p, j, &rep);
                match cyclo_v_pi(&value) {
                    Some(v) => Ok((rep, v)),
                    None => Err(Error::ZeroDetAtRoot { level: j }),
                }
            })
            .collect()
    }

    fn conductor_sum(&mut self, j: u32) -> Result<u64> {
        while self.conductor_sums.len() < j as usize {
            let next = self.conductor_sums.len() as u32 + 1;
            let total = self
                .orbit_valuations(next)?
                .into_iter()
                .map(|(_, v)| v)
                .sum();
            self.conductor_sums.push(total);
        }
        Ok(self.conductor_sums[j as usize - 1])
    }

    /// v_p of the Jacobian order of the level-m cover, computed without
    /// building the cover.
    pub fn vp_at_level(&mut self, m: u32) -> Result<u64> {
        let mut total = self.base_vp as i128;
        for j in 1..=m {
            total += self.conductor_sum(j)? as i128;
        }
        total -= m as i128 * self.l as i128;
        u64::try_from(total).map_err(|_| Error::SelfCheck {
            message: format!("analytic valuation at level {m} came out negative ({total})"),
        })
    }
}

/// One-shot convenience for [`AnalyticVp`].
pub fn analytic_vp_level(
    base: &Multigraph,
    assignment: &VoltageAssignment,
    m: u32,
) -> Result<u64> {
    AnalyticVp::new(base, assignment)?.vp_at_level(m)
}

/// Exact integer check of the tree-number identity at level m:
/// p^{ml} κ(X_m) = κ(X_0) · Π_{ζ ≠ 1} det Δ∞(ζ), the product running over
/// all nontrivial characters of (Z/p^m)^l and computed as a product of
/// cyclotomic norms (one per Galois orbit).
pub fn tree_identity_check(
    base: &Multigraph,
    assignment: &VoltageAssignment,
    m: u32,
    max_vertices: usize,
) -> Result<()> {
    // The raw determinant, not the canonical associate: canonicalizing
    // multiplies by a unit ±σ^aτ^b whose evaluations at roots of unity are
    // not 1, which would scramble the signs of the exact product below.
    // (Valuations are unit-invariant, so AnalyticVp may canonicalize; this
    // integer identity may not.)
    let entries = voltage_laplacian(base, assignment)?;
    let det = det_ring(base.vertex_count(), &entries);
    if !det.eval_at_one().is_zero() {
        return Err(Error::NonzeroAtOne);
    }
    let p = assignment.p();
    let l = assignment.rank();
    let cover = derived_graph(base, assignment, m, max_vertices)?;
    let kappa_m = cover.graph().spanning_tree_count();
    let kappa_0 = base.spanning_tree_count();

    let mut rhs = kappa_0;
    for j in 1..=m {
        let norms: Vec<BigInt> = primitive_orbit_reps(p, j, l)
            .into_par_iter()
            .map(|rep| cyclo_norm(&laurent_eval_at_roots(&det, p, j, &rep)))
            .collect();
        for n in norms {
            rhs *= n;
        }
    }
    let lhs = BigInt::from(p).pow(m * l as u32) * &kappa_m;
    if lhs != rhs {
        return Err(Error::SelfCheck {
            message: format!(
                "tree-number identity fails at level {m}: p^(ml)·κ_m = {lhs} but κ_0·Πdet = {rhs}"
            ),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Growth tables and exact fits.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthMethod {
    Snf,
    Analytic,
    Both,
}

/// One level of a growth table. A requested-but-unaffordable Smith normal
/// form is marked skipped, never guessed.
#[derive(Debug, Clone)]
pub struct GrowthRow {
    pub level: u32,
    pub vertices: u128,
    pub snf_vp: Option<u64>,
    pub analytic_vp: Option<u64>,
    pub snf_skipped: Option<String>,
}

/// v_p(|J|) for levels 0..=m_max by the requested engine(s).
pub fn growth_table(
    base: &Multigraph,
    assignment: &VoltageAssignment,
    m_max: u32,
    method: GrowthMethod,
    budget: &ComputeBudget,
) -> Result<Vec<GrowthRow>> {
    require_connected_tower(base, assignment)?;
    let want_snf = matches!(method, GrowthMethod::Snf | GrowthMethod::Both);
    let want_analytic = matches!(method, GrowthMethod::Analytic | GrowthMethod::Both);
    let mut analytic = if want_analytic {
        Some(AnalyticVp::new(base, assignment)?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max {
        let vertices = (base.vertex_count() as u128)
            * (assignment.p() as u128)
                .checked_pow(m * assignment.rank() as u32)
                .unwrap_or(u128::MAX);
        let mut row = GrowthRow {
            level: m,
            vertices,
            snf_vp: None,
            analytic_vp: None,
            snf_skipped: None,
        };
        if want_snf {
            if vertices > budget.max_vertices_modp as u128 {
                row.snf_skipped = Some(format!(
                    "cover needs {vertices} vertices, over the {} budget",
                    budget.max_vertices_modp
                ));
            } else {
                row.snf_vp = Some(jacobian_of_cover(base, assignment, m, budget)?.vp);
            }
        }
        if let Some(engine) = analytic.as_mut() {
            row.analytic_vp = Some(engine.vp_at_level(m)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// ν and the stabilization level for an l = 1 tower, given μ and λ: the
/// earliest window (of at least two rows) on which v_p(m) - μp^m - λm is
/// constant, checked to the end of the table.
pub fn nu_from_growth(
    rows: &[(u32, u64)],
    p: u64,
    mu: u64,
    lambda: u64,
) -> Result<(i64, u32)> {
    if rows.len() < 2 {
        return Err(Error::NotEnoughRows {
            rows: rows.len(),
            needed: 2,
        });
    }
    let deviation: Vec<i128> = rows
        .iter()
        .map(|&(m, v)| {
            v as i128 - mu as i128 * (p as i128).pow(m) - lambda as i128 * m as i128
        })
        .collect();
    for start in 0..=rows.len() - 2 {
        if deviation[start..].windows(2).all(|w| w[0] == w[1]) {
            let nu = i64::try_from(deviation[start]).expect("ν fits a machine integer");
            return Ok((nu, rows[start].0));
        }
    }
    Err(Error::FitFailed {
        residuals: deviation.iter().map(|d| d.to_string()).collect(),
    })
}

/// Exact growth-formula fit. The model is a rational linear combination of
/// the basis returned by [`growth_basis_labels`]; `zero_constraints` pins
/// chosen coefficients to zero before solving.
#[derive(Debug, Clone)]
pub struct GrowthFit {
    /// One coefficient per basis function, constrained entries included.
    pub coefficients: Vec<BigRational>,
    /// First level of the window that fits exactly through the last row.
    pub m_stable: u32,
}

pub fn growth_basis_labels(l: usize) -> Result<&'static [&'static str]> {
    match l {
        1 => Ok(&["p^m", "m", "1"]),
        2 => Ok(&["p^(2m)", "m*p^m", "p^m", "m", "1"]),
        _ => Err(Error::WrongArity {
            expected: 2,
            got: l,
        }),
    }
}

fn growth_basis_values(p: u64, l: usize, m: u32) -> Vec<BigInt> {
    let pm = BigInt::from(p).pow(m);
    match l {
        1 => vec![pm, BigInt::from(m), BigInt::one()],
        2 => vec![
            &pm * &pm,
            &pm * m,
            pm,
            BigInt::from(m),
            BigInt::one(),
        ],
        _ => unreachable!("guarded by growth_basis_labels"),
    }
}

/// Find the earliest window [s..] of the table on which the constrained
/// model fits every row exactly (at least one more row than unknowns).
/// Solves over the rationals; residuals are exact, and anything nonzero
/// rejects the window.
pub fn greenberg_fit(
    rows: &[(u32, u64)],
    p: u64,
    l: usize,
    zero_constraints: &[usize],
) -> Result<GrowthFit> {
    let labels = growth_basis_labels(l)?;
    let width = labels.len();
    let free: Vec<usize> = (0..width)
        .filter(|i| !zero_constraints.contains(i))
        .collect();
    let unknowns = free.len();
    if rows.len() < unknowns + 1 {
        return Err(Error::NotEnoughRows {
            rows: rows.len(),
            needed: unknowns + 1,
        });
    }

    let mut last_residuals = Vec::new();
    for start in 0..=rows.len() - (unknowns + 1) {
        let window = &rows[start..];
        let system: Vec<(Vec<BigRational>, BigRational)> = window
            .iter()
            .map(|&(m, v)| {
                let basis = growth_basis_values(p, l, m);
                let coeffs = free
                    .iter()
                    .map(|&i| BigRational::from_integer(basis[i].clone()))
                    .collect();
                (coeffs, BigRational::from_integer(BigInt::from(v)))
            })
            .collect();
        match solve_exact(system, unknowns) {
            Ok(solution) => {
                let mut coefficients = vec![BigRational::zero(); width];
                for (slot, value) in free.iter().zip(solution) {
                    coefficients[*slot] = value;
                }
                return Ok(GrowthFit {
                    coefficients,
                    m_stable: window[0].0,
                });
            }
            Err(residuals) => last_residuals = residuals,
        }
    }
    Err(Error::FitFailed {
        residuals: last_residuals.iter().map(|r| r.to_string()).collect(),
    })
}

/// Gaussian elimination over Q for a (possibly overdetermined) system;
/// returns the unique exact solution or the list of inconsistency residuals.
fn solve_exact(
    mut system: Vec<(Vec<BigRational>, BigRational)>,
    unknowns: usize,
) -> std::result::Result<Vec<BigRational>, Vec<BigRational>> {
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..unknowns {
        let Some(row) = (pivots.len()..system.len())
            .find(|&r| !system[r].0[col].is_zero())
        else {
            continue;
        };
        system.swap(pivots.len(), row);
        let pivot_row = pivots.len();
        let scale = system[pivot_row].0[col].clone();
        for x in system[pivot_row].0.iter_mut() {
            *x /= scale.clone();
        }
        system[pivot_row].1 /= scale;
        for r in 0..system.len() {
            if r == pivot_row || system[r].0[col].is_zero() {
                continue;
            }
            let factor = system[r].0[col].clone();
            let (head, tail) = system.split_at_mut(pivot_row.max(r));
            let (a, b) = if r < pivot_row {
                (&mut head[r], &tail[0])
            } else {
                (&mut tail[0], &head[pivot_row])
            };
            for (x, y) in a.0.iter_mut().zip(&b.0) {
                *x -= &factor * y;
            }
            a.1 -= &factor * &b.1;
        }
        pivots.push(col);
    }
    let residuals: Vec<BigRational> = system[pivots.len()..]
        .iter()
        .filter(|(_, b)| !b.is_zero())
        .map(|(_, b)| b.clone())
        .collect();
    if !residuals.is_empty() {
        return Err(residuals);
    }
    // The growth bases are exponential polynomials: on enough distinct
    // levels the system has full column rank, so reaching here means a
    // unique solution.
    assert_eq!(pivots.len(), unknowns, "degenerate growth-fit system");
    let mut solution = vec![BigRational::zero(); unknowns];
    for (row, &col) in pivots.iter().enumerate() {
        solution[col] = system[row].1.clone();
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::ComputeBudget;

    fn triangle() -> Multigraph {
        Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn tau_on_first_edge(p: u64, edges: usize) -> VoltageAssignment {
        let mut voltages = vec![vec![0i64]; edges];
        voltages[0] = vec![1];
        VoltageAssignment::new(p, 1, voltages).unwrap()
    }

    /// Build a polynomial already written in shifted variables (T = τ-1,
    /// S = σ-1) and map it back to the group variables for comparison.
    fn from_shifted(vars: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(vars);
        for &(e, c) in terms {
            out = out.add(&LaurentPoly::monomial(vars, e, c));
        }
        out.shift_vars_minus_one()
    }

    #[test]
    fn twisted_triangle_determinant_is_t_squared() {
        let det = char_det(&triangle(), &tau_on_first_edge(5, 3)).unwrap();
        // 2 - τ - τ^{-1} up to a unit: canonical form (τ-1)^2.
        let expected = from_shifted(1, &[(&[2], 1)]).canonical();
        assert_eq!(det, expected);
        assert_eq!(format!("{}", det.shift_vars_plus_one()), "T^2");
        assert!(det.eval_at_one().is_zero());
    }

    #[test]
    fn characteristic_polynomial_and_l1_invariants() {
        // Triangle with one doubled edge, voltages {τ, 1}: det ≅ 3T² (the
        // vertex count), so the characteristic polynomial is 3T. Division of
        // the Jacobian by p = 3 shows up as μ = 1; at p = 5 it is a unit.
        let base = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        let volts = vec![vec![1], vec![0], vec![0], vec![0]];
        let a = VoltageAssignment::new(3, 1, volts.clone()).unwrap();
        let inv = invariants_l1(&base, &a).unwrap();
        assert_eq!(format!("{}", inv.char_t), "3*T");
        assert_eq!((inv.mu, inv.lambda), (1, 1));

        let a5 = VoltageAssignment::new(5, 1, volts).unwrap();
        let inv = invariants_l1(&base, &a5).unwrap();
        assert_eq!((inv.mu, inv.lambda), (0, 1));

        // Five-cycle with one doubled edge at p = 5: char poly 5T, μ = λ = 1.
        let five = Multigraph::new(5, vec![(0, 1), (0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let a = VoltageAssignment::new(
            5,
            1,
            vec![vec![1], vec![0], vec![0], vec![0], vec![0], vec![0]],
        )
        .unwrap();
        let inv = invariants_l1(&five, &a).unwrap();
        assert_eq!(format!("{}", inv.char_t), "5*T");
        assert_eq!((inv.mu, inv.lambda), (1, 1));

        let plain = invariants_l1(&triangle(), &tau_on_first_edge(3, 3)).unwrap();
        assert_eq!(format!("{}", plain.char_t), "T");
        assert_eq!((plain.mu, plain.lambda), (0, 1));
    }

    #[test]
    fn analytic_engine_matches_snf_on_twisted_triangle() {
        let base = triangle();
        for p in [2u64, 3, 5] {
            let a = tau_on_first_edge(p, 3);
            let mut engine = AnalyticVp::new(&base, &a).unwrap();
            let budget = ComputeBudget::default();
            for m in 0..=3u32 {
                let analytic = engine.vp_at_level(m).unwrap();
                let snf = jacobian_of_cover(&base, &a, m, &budget).unwrap().vp;
                assert_eq!(analytic, snf, "p={p} m={m}");
                if p == 2 {
                    assert_eq!(analytic, m as u64, "κ(C_{{3·2^m}}) = 3·2^m");
                }
            }
        }
    }

    #[test]
    fn analytic_engine_handles_rank_two() {
        // Doubled edge with independent voltages: the standard two-variable
        // tower over three vertices.
        let base = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        let a = VoltageAssignment::new(
            3,
            2,
            vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![0, 0]],
        )
        .unwrap();
        let mut engine = AnalyticVp::new(&base, &a).unwrap();
        let budget = ComputeBudget::default();
        for m in 0..=2u32 {
            let analytic = engine.vp_at_level(m).unwrap();
            let snf = jacobian_of_cover(&base, &a, m, &budget).unwrap().vp;
            assert_eq!(analytic, snf, "m={m}");
        }
    }

    #[test]
    fn orbit_reps_partition_primitive_characters() {
        for (p, j, l) in [(2u64, 1u32, 1usize), (2, 3, 2), (3, 2, 2), (5, 1, 2), (3, 1, 3)] {
            let reps = primitive_orbit_reps(p, j, l);
            let pj = p.pow(j);
            let phi = pj - pj / p;
            // Count: primitive tuples / orbit size.
            let total = pj.pow(l as u32) - (pj / p).pow(l as u32);
            assert_eq!(reps.len() as u64 * phi, total, "p={p} j={j} l={l}");
            // Each rep primitive, i.e. some coordinate is a unit.
            for rep in &reps {
                assert!(rep.iter().any(|&c| c % p != 0));
                assert!(rep.iter().all(|&c| c < pj));
            }
            // Orbits are disjoint: expanding every rep by all units hits
            // distinct tuples.
            let mut seen = std::collections::HashSet::new();
            for rep in &reps {
                for u in 1..pj {
                    if u % p == 0 {
                        continue;
                    }
                    let tuple: Vec<u64> = rep.iter().map(|&c| c * u % pj).collect();
                    assert!(seen.insert(tuple), "orbit collision at p={p} j={j} l={l}");
                }
            }
        }
    }

    #[test]
    fn tree_identity_holds_on_small_towers() {
        let base = triangle();
        for p in [2u64, 3] {
            let a = tau_on_first_edge(p, 3);
            for m in 0..=2 {
                tree_identity_check(&base, &a, m, 10_000).unwrap();
            }
        }
        let doubled = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        let a = VoltageAssignment::new(
            2,
            2,
            vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![0, 0]],
        )
        .unwrap();
        for m in 0..=2 {
            tree_identity_check(&doubled, &a, m, 10_000).unwrap();
        }
    }

    #[test]
    fn growth_table_reports_both_engines_and_skips() {
        let base = triangle();
        let a = tau_on_first_edge(2, 3);
        let tight = ComputeBudget {
            max_vertices_modp: 10,
            ..ComputeBudget::default()
        };
        let rows = growth_table(&base, &a, 3, GrowthMethod::Both, &tight).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert_eq!(row.analytic_vp, Some(row.level as u64));
            if row.vertices <= 10 {
                assert_eq!(row.snf_vp, Some(row.level as u64));
                assert!(row.snf_skipped.is_none());
            } else {
                assert!(row.snf_vp.is_none());
                assert!(row.snf_skipped.is_some());
            }
        }

        let disconnected = VoltageAssignment::trivial(2, 1, 3).unwrap();
        assert!(matches!(
            growth_table(&base, &disconnected, 1, GrowthMethod::Snf, &tight),
            Err(Error::DisconnectedTower { .. })
        ));
    }

    #[test]
    fn nu_fit_finds_the_constant_tail() {
        // v(m) = 2^m + m + 3 exactly from m = 1 on; the m = 0 row is off.
        let rows = [(0u32, 9u64), (1, 6), (2, 9), (3, 14)];
        let (nu, m_stable) = nu_from_growth(&rows, 2, 1, 1).unwrap();
        assert_eq!(nu, 3);
        assert_eq!(m_stable, 1);

        assert!(matches!(
            nu_from_growth(&rows[..1], 2, 1, 1),
            Err(Error::NotEnoughRows { rows: 1, needed: 2 })
        ));
        let noisy = [(0u32, 0u64), (1, 5), (2, 6), (3, 20)];
        assert!(matches!(
            nu_from_growth(&noisy, 2, 1, 1),
            Err(Error::FitFailed { .. })
        ));
    }

    #[test]
    fn exact_fit_recovers_planted_coefficients() {
        // Plant v(m) = 2·m·3^m + 3^m + m + 5 (a valid l = 2 shape with the
        // p^{2m} coefficient constrained to zero) and recover it.
        let rows: Vec<(u32, u64)> = (0..=5)
            .map(|m| {
                let pm = 3u64.pow(m);
                (m, 2 * m as u64 * pm + pm + m as u64 + 5)
            })
            .collect();
        let fit = greenberg_fit(&rows, 3, 2, &[0]).unwrap();
        assert_eq!(fit.m_stable, 0);
        let expect: Vec<BigRational> = [0, 2, 1, 1, 5]
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        assert_eq!(fit.coefficients, expect);

        // A corrupted early row pushes the stable window later.
        let mut shifted = rows.clone();
        shifted[0].1 += 7;
        let fit = greenberg_fit(&shifted, 3, 2, &[0]).unwrap();
        assert_eq!(fit.m_stable, 1);
        assert_eq!(fit.coefficients, expect);

        // Data off the model entirely: every window fails.
        let junk: Vec<(u32, u64)> = (0..=6).map(|m| (m, (m as u64).pow(3))).collect();
        assert!(matches!(
            greenberg_fit(&junk, 3, 2, &[0]),
            Err(Error::FitFailed { .. })
        ));
    }

    #[test]
    fn l1_fit_matches_an_actual_tower() {
        // Triangle, τ on one edge, p = 2: v(m) = m exactly (μ = 0, λ = 1,
        // ν = 0 from level 0).
        let base = triangle();
        let a = tau_on_first_edge(2, 3);
        let rows: Vec<(u32, u64)> = growth_table(
            &base,
            &a,
            4,
            GrowthMethod::Analytic,
            &ComputeBudget::default(),
        )
        .unwrap()
        .into_iter()
        .map(|r| (r.level, r.analytic_vp.unwrap()))
        .collect();
        let inv = invariants_l1(&base, &a).unwrap();
        let (nu, m_stable) = nu_from_growth(&rows, 2, inv.mu, inv.lambda).unwrap();
        assert_eq!((inv.mu, inv.lambda, nu, m_stable), (0, 1, 0, 0));

        let fit = greenberg_fit(&rows, 2, 1, &[]).unwrap();
        let as_ints: Vec<String> = fit.coefficients.iter().map(|c| c.to_string()).collect();
        assert_eq!(as_ints, ["0", "1", "0"]);
    }
}
