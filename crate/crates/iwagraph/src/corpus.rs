//! A reusable family of towers: the n-cycle with one thickened edge.
//!
//! The base graph has n vertices arranged in a cycle, except that the edge
//! between the first two vertices is replaced by a − 1 parallel edges — so
//! those two vertices have valency a and every other vertex has valency 2.
//! All the named voltage patterns live on the parallel edges; the rest of
//! the cycle is untwisted. The family is small enough to admit a closed-form
//! determinant (eliminating the untwisted path is a Schur complement against
//! a tridiagonal block) yet rich enough to realize positive μ, positive λ,
//! rank-two towers with nonzero l₀, and arbitrary twisted/untwisted mixes.
//!
//! [`corpus`] enumerates the fixed grid of these towers that every
//! cross-engine check in the test suite runs over.

use crate::error::Result;
use crate::exact::LaurentPoly;
use crate::multigraph::Multigraph;
use crate::voltage::VoltageAssignment;

/// The n-cycle whose first edge is thickened to a − 1 parallel edges. Edges
/// come in a fixed order: the parallel block first (all oriented first
/// vertex → second vertex), then the untwisted path closing the cycle.
pub fn cycle_with_multiedge(n: usize, a: usize) -> Multigraph {
    assert!(n >= 3, "the thickened cycle needs at least 3 vertices");
    assert!(a >= 2, "valency a must be at least 2");
    let mut edges = vec![(0, 1); a - 1];
    for i in 1..n {
        edges.push((i, (i + 1) % n));
    }
    Multigraph::new(n, edges).expect("endpoints in range by construction")
}

/// Named voltage patterns on the parallel edges of [`cycle_with_multiedge`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleVoltages {
    /// The first `twisted` parallel edges carry the deck generator τ; the
    /// remaining parallel edges (and the whole path) are untwisted.
    Twists { twisted: usize },
    /// Two parallel edges carrying τ and τ² (needs a = 3).
    TwistAndSquare,
    /// Two parallel edges carrying independent generators τ and σ of a
    /// rank-two deck group (needs a = 3).
    TwoIndependent,
}

impl CycleVoltages {
    pub fn rank(&self) -> usize {
        match self {
            CycleVoltages::TwoIndependent => 2,
            _ => 1,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CycleVoltages::Twists { twisted } => format!("{twisted} generator edge(s)"),
            CycleVoltages::TwistAndSquare => "generator and square".into(),
            CycleVoltages::TwoIndependent => "two independent generators".into(),
        }
    }

    /// The voltage vectors for a thickened cycle with parameters (n, a), in
    /// the edge order of [`cycle_with_multiedge`].
    pub fn assignment(&self, p: u64, n: usize, a: usize) -> Result<VoltageAssignment> {
        let l = self.rank();
        let mut voltages: Vec<Vec<i64>> = Vec::with_capacity(n + a - 2);
        match self {
            CycleVoltages::Twists { twisted } => {
                assert!(
                    (1..=a - 1).contains(twisted),
                    "need between 1 and a-1 twisted edges"
                );
                for e in 0..a - 1 {
                    voltages.push(vec![i64::from(e < *twisted)]);
                }
            }
            CycleVoltages::TwistAndSquare => {
                assert_eq!(a, 3, "generator-and-square pattern needs exactly 2 parallel edges");
                voltages.push(vec![1]);
                voltages.push(vec![2]);
            }
            CycleVoltages::TwoIndependent => {
                assert_eq!(a, 3, "independent-pair pattern needs exactly 2 parallel edges");
                voltages.push(vec![1, 0]);
                voltages.push(vec![0, 1]);
            }
        }
        voltages.extend(vec![vec![0; l]; n - 1]);
        VoltageAssignment::new(p, l, voltages)
    }

    /// The (μ, λ) pair a rank-one tower with this pattern must produce, or
    /// `None` for the rank-two pattern. Follows from the characteristic
    /// shape: a T² determinant has linear characteristic polynomial c·T, so
    /// μ = v_p(c) and λ = 1; the generator-and-square shape divides to
    /// T² + (n+4)T + (n+4), so μ = 0 and λ jumps to 3 exactly when
    /// p | n + 4.
    pub fn expected_l1_invariants(&self, n: usize, a: usize, p: u64) -> Option<(u64, u64)> {
        match self {
            CycleVoltages::Twists { .. } => {
                Some((self.expected_char_form(n, a).content_vp(p)?, 1))
            }
            CycleVoltages::TwistAndSquare => {
                Some((0, if (n as u64 + 4).is_multiple_of(p) { 3 } else { 1 }))
            }
            CycleVoltages::TwoIndependent => None,
        }
    }

    /// The characteristic shape of det Δ∞ for this pattern, written in the
    /// shifted variables T = τ − 1 (and S = σ − 1): the canonical associate
    /// of the determinant equals the canonical associate of this polynomial
    /// mapped back to τ, σ.
    pub fn expected_char_form(&self, n: usize, a: usize) -> LaurentPoly {
        let nn = n as i64;
        match self {
            CycleVoltages::Twists { twisted } => {
                let b = *twisted as i64;
                let coeff = b * ((nn - 1) * (a as i64 - 1 - b) + 1);
                LaurentPoly::monomial(1, &[2], coeff)
            }
            CycleVoltages::TwistAndSquare => LaurentPoly::monomial(1, &[4], 1)
                .add(&LaurentPoly::monomial(1, &[3], nn + 4))
                .add(&LaurentPoly::monomial(1, &[2], nn + 4)),
            CycleVoltages::TwoIndependent => LaurentPoly::monomial(2, &[2, 0], nn)
                .add(&LaurentPoly::monomial(2, &[0, 2], nn))
                .add(&LaurentPoly::monomial(2, &[1, 1], 2 - 2 * nn))
                .add(&LaurentPoly::monomial(2, &[2, 1], 1))
                .add(&LaurentPoly::monomial(2, &[1, 2], 1)),
        }
    }
}

/// Minus the sum of voltage monomials over the parallel edges, and the same
/// for the reversed orientation: the two off-diagonal corner entries of the
/// voltage Laplacian that the closed form is written in.
pub fn multiedge_voltage_sums(
    assignment: &VoltageAssignment,
    a: usize,
) -> (LaurentPoly, LaurentPoly) {
    let vars = assignment.rank();
    let mut x = LaurentPoly::zero(vars);
    let mut y = LaurentPoly::zero(vars);
    for e in 0..a - 1 {
        let alpha = assignment.voltage(e);
        let inverse: Vec<i64> = alpha.iter().map(|&v| -v).collect();
        x = x.sub(&LaurentPoly::unit_monomial(vars, alpha));
        y = y.sub(&LaurentPoly::unit_monomial(vars, &inverse));
    }
    (x, y)
}

/// Closed form for det Δ∞ on the thickened cycle: with x and y the corner
/// sums of [`multiedge_voltage_sums`], eliminating the untwisted path gives
///
/// det Δ∞ = −(n−1)·x·y + x + y + (n−1)a² − 2a(n−2) + n − 3.
///
/// (The path's interior is a tridiagonal block with determinant n − 1 and
/// corner inverse entries (n−2)/(n−1) and 1/(n−1); the formula is the 2×2
/// Schur-complement determinant times n − 1.) Exact equality with the
/// general determinant, not just equality of associates.
pub fn closed_form_cycle_det(n: usize, a: usize, x: &LaurentPoly, y: &LaurentPoly) -> LaurentPoly {
    assert!(n >= 3 && a >= 2);
    assert_eq!(x.vars(), y.vars());
    let vars = x.vars();
    let (nn, aa) = (n as i64, a as i64);
    let constant = (nn - 1) * aa * aa - 2 * aa * (nn - 2) + nn - 3;
    let scale = |c: i64| LaurentPoly::monomial(vars, &vec![0; vars], c);
    x.mul(y)
        .mul(&scale(1 - nn))
        .add(x)
        .add(y)
        .add(&scale(constant))
}

/// One tower of the fixed verification grid.
#[derive(Debug, Clone)]
pub struct CorpusTower {
    pub label: String,
    pub n: usize,
    pub a: usize,
    pub p: u64,
    pub family: CycleVoltages,
    pub graph: Multigraph,
    pub assignment: VoltageAssignment,
    /// Largest level whose cover stays within [`CORPUS_VERTEX_CAP`].
    pub max_level: u32,
}

/// Covers beyond this many vertices are outside the verification grid.
pub const CORPUS_VERTEX_CAP: u128 = 2000;

/// Largest m with n·p^{lm} ≤ [`CORPUS_VERTEX_CAP`].
pub fn corpus_max_level(n: usize, p: u64, l: usize) -> u32 {
    let mut m = 0u32;
    loop {
        let next = (n as u128) * u128::from(p).pow((m + 1) * l as u32);
        if next > CORPUS_VERTEX_CAP {
            return m;
        }
        m += 1;
    }
}

/// The verification grid: thickened cycles with n ∈ {3,4,5}, a ∈ {2,3,4},
/// p ∈ {2,3,5}, every named voltage pattern valid at each a, and all levels
/// within the vertex cap. Deterministic order: n, then a, then pattern,
/// then p.
pub fn corpus() -> Vec<CorpusTower> {
    let mut out = Vec::new();
    for n in [3usize, 4, 5] {
        for a in [2usize, 3, 4] {
            for family in families_at(a) {
                for p in [2u64, 3, 5] {
                    let graph = cycle_with_multiedge(n, a);
                    let assignment = family
                        .assignment(p, n, a)
                        .expect("grid parameters are valid");
                    let max_level = corpus_max_level(n, p, family.rank());
                    out.push(CorpusTower {
                        label: format!("n={n} a={a} p={p} {}", family.describe()),
                        n,
                        a,
                        p,
                        family,
                        graph,
                        assignment,
                        max_level,
                    });
                }
            }
        }
    }
    out
}

/// Every named voltage pattern valid at valency a, in grid order.
pub fn families_at(a: usize) -> Vec<CycleVoltages> {
    match a {
        2 => vec![CycleVoltages::Twists { twisted: 1 }],
        3 => vec![
            CycleVoltages::Twists { twisted: 1 },
            CycleVoltages::Twists { twisted: 2 },
            CycleVoltages::TwistAndSquare,
            CycleVoltages::TwoIndependent,
        ],
        _ => (1..a)
            .map(|twisted| CycleVoltages::Twists { twisted })
            .collect(),
    }
}

/// The p-content (μ for rank one) a [`CycleVoltages::Twists`] tower is
/// expected to have: v_p of the T² coefficient. Exposed so growth tests can
/// plant towers with prescribed content, e.g. n = p^r making μ = r.
pub fn twists_content(n: usize, a: usize, twisted: usize, p: u64) -> u64 {
    CycleVoltages::Twists { twisted }
        .expected_char_form(n, a)
        .content_vp(p)
        .expect("quadratic coefficient is nonzero")
}

/// One line of the golden verification table.
#[derive(Debug, Clone)]
pub struct GoldenRow {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl GoldenRow {
    fn ok(name: String, detail: String) -> Self {
        GoldenRow {
            name,
            pass: true,
            detail,
        }
    }

    fn fail(name: String, detail: String) -> Self {
        GoldenRow {
            name,
            pass: false,
            detail,
        }
    }
}

/// The full golden table: every determinant shape, a brute-force/analytic
/// agreement row per grid tower (levels 0 and 1), and the invariants every
/// tower is pinned to. Deterministic order and content across runs.
pub fn golden_suite() -> Vec<GoldenRow> {
    use rayon::prelude::*;

    use crate::iwasawa::{analytic_vp_level, char_det, invariants_l1, invariants_l2};
    use crate::jacobian::{jacobian_of_cover, ComputeBudget};

    let mut rows = Vec::new();

    // Determinant shapes, independent of p.
    for n in [3usize, 4, 5] {
        for a in [2usize, 3, 4] {
            for family in families_at(a) {
                let name = format!("det shape n={n} a={a} {}", family.describe());
                let graph = cycle_with_multiedge(n, a);
                let assignment = family.assignment(2, n, a).expect("grid is valid");
                let shape = family.expected_char_form(n, a);
                let expected = shape.shift_vars_minus_one().canonical();
                match char_det(&graph, &assignment) {
                    Ok(det) if det == expected => {
                        rows.push(GoldenRow::ok(name, format!("det = {shape}")));
                    }
                    Ok(det) => rows.push(GoldenRow::fail(
                        name,
                        format!("got {}, expected {shape}", det.shift_vars_plus_one()),
                    )),
                    Err(e) => rows.push(GoldenRow::fail(name, e.to_string())),
                }
            }
        }
    }

    let towers = corpus();
    let budget = ComputeBudget::default();

    // Brute force versus analytic at the first two levels of every tower.
    let engine_rows: Vec<GoldenRow> = towers
        .par_iter()
        .map(|t| {
            let name = format!("engines agree (m = 0, 1) {}", t.label);
            let mut seen = Vec::new();
            for m in 0..=1u32.min(t.max_level) {
                let oracle = match jacobian_of_cover(&t.graph, &t.assignment, m, &budget) {
                    Ok(j) => j.vp,
                    Err(e) => return GoldenRow::fail(name, e.to_string()),
                };
                let analytic = match analytic_vp_level(&t.graph, &t.assignment, m) {
                    Ok(v) => v,
                    Err(e) => return GoldenRow::fail(name, e.to_string()),
                };
                if oracle != analytic {
                    return GoldenRow::fail(
                        name,
                        format!("m={m}: brute force {oracle}, analytic {analytic}"),
                    );
                }
                seen.push(oracle);
            }
            GoldenRow::ok(name, format!("v_p = {seen:?}"))
        })
        .collect();
    rows.extend(engine_rows);

    // Invariants per tower.
    for t in &towers {
        let name = format!("invariants {}", t.label);
        if t.family.rank() == 1 {
            let (want_mu, want_lambda) = t
                .family
                .expected_l1_invariants(t.n, t.a, t.p)
                .expect("rank-one pattern");
            match invariants_l1(&t.graph, &t.assignment) {
                Ok(inv) if (inv.mu, inv.lambda) == (want_mu, want_lambda) => {
                    rows.push(GoldenRow::ok(
                        name,
                        format!("μ={want_mu} λ={want_lambda} char = {}", inv.char_t),
                    ));
                }
                Ok(inv) => rows.push(GoldenRow::fail(
                    name,
                    format!(
                        "got μ={} λ={}, expected μ={want_mu} λ={want_lambda}",
                        inv.mu, inv.lambda
                    ),
                )),
                Err(e) => rows.push(GoldenRow::fail(name, e.to_string())),
            }
        } else {
            // m₀ = 0 for every rank-two grid tower (the determinant has
            // unit coefficients); for odd p dividing n the reduction is
            // S·T·(2 + S + T), so l₀ = 2.
            let want_l0 = (t.p % 2 == 1 && (t.n as u64).is_multiple_of(t.p)).then_some(2u64);
            match invariants_l2(&t.graph, &t.assignment) {
                Ok(inv) => {
                    let l0_ok = want_l0.is_none_or(|want| inv.l0 == want);
                    let dist_ok = want_l0.is_none() || {
                        let st_form = LaurentPoly::monomial(2, &[1, 1], 2)
                            .add(&LaurentPoly::monomial(2, &[2, 1], 1))
                            .add(&LaurentPoly::monomial(2, &[1, 2], 1));
                        inv.distinguished_mod_p == st_form
                    };
                    if inv.m0 == 0 && l0_ok && dist_ok {
                        rows.push(GoldenRow::ok(
                            name,
                            format!("m₀=0 l₀={} mod-p part = {}", inv.l0, inv.distinguished_mod_p),
                        ));
                    } else {
                        rows.push(GoldenRow::fail(
                            name,
                            format!(
                                "got m₀={} l₀={} mod-p part = {}, expected m₀=0{}",
                                inv.m0,
                                inv.l0,
                                inv.distinguished_mod_p,
                                want_l0.map_or(String::new(), |w| format!(" l₀={w} = S·T·(2+S+T)")),
                            ),
                        ));
                    }
                }
                Err(e) => rows.push(GoldenRow::fail(name, e.to_string())),
            }
        }
    }

    rows
}
