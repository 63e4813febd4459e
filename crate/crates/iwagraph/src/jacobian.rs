//! Jacobians of covers and their quotients by ideals of the deck-group
//! algebra.
//!
//! The Jacobian (sandpile group, critical group) of a connected multigraph
//! is the torsion cokernel of its Laplacian; deleting one row and column
//! presents it as Z^{N-1} / im(reduced Laplacian), and its order is the
//! spanning-tree count. Two engines compute it here:
//!
//! * exact Smith normal form giving the full invariant-factor chain, and
//! * elimination over Z/p^K giving the p-valuation alone, which scales to
//!   covers far past where the exact form is affordable. The precision K is
//!   escalated automatically until every divisor resolves, so the reported
//!   valuation is exact, never a truncation.
//!
//! For towers, the deck group acts on each Jacobian, and quotients like
//! J / (p^e, f(τ)) J ("ideal ranks") drive the stabilization searches used
//! to detect eventually-constant behavior along the tower.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{
    local_divisors_adaptive, local_divisors_big, snf_divisors, BigSparseRows, LaurentPoly,
    SparseRows,
};
use crate::multigraph::Multigraph;
use crate::voltage::{derived_graph, DerivedGraph, VoltageAssignment};

/// Size limits for the two Jacobian engines. Covers stay within
/// `max_vertices_modp`; the exact-SNF engine additionally requires at most
/// `min(exact_snf_threshold, max_vertices_exact)` vertices.
#[derive(Debug, Clone)]
pub struct ComputeBudget {
    pub max_vertices_exact: usize,
    pub max_vertices_modp: usize,
    /// Crossover below which the exact invariant-factor chain is computed;
    /// above it only the p-valuation is.
    pub exact_snf_threshold: usize,
}

impl Default for ComputeBudget {
    fn default() -> Self {
        ComputeBudget {
            max_vertices_exact: 5000,
            max_vertices_modp: 50_000,
            // Measured crossover: dense exact SNF costs ~0.16 s at 320
            // vertices, ~14 s at 1280, while local elimination stays in
            // milliseconds and already certifies the valuation. 400 keeps
            // full invariant-factor chains cheap and everything else fast;
            // raise it explicitly when the chain itself is wanted on a big
            // cover.
            exact_snf_threshold: 400,
        }
    }
}

/// Which engine produced a [`JacobianData`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianMethod {
    ExactSnf,
    /// Local elimination; `k` is the precision at which every divisor
    /// resolved.
    LocalPk { k: u32 },
}

/// The p-part data of one cover's Jacobian.
#[derive(Debug, Clone)]
pub struct JacobianData {
    pub level: u32,
    pub vertex_count: usize,
    /// Full invariant-factor chain of the reduced Laplacian (exact engine
    /// only).
    pub invariant_factors: Option<Vec<BigInt>>,
    /// |J|, the spanning-tree count (exact engine only).
    pub order: Option<BigInt>,
    /// v_p(|J|); exact in both engines.
    pub vp: u64,
    pub method: JacobianMethod,
}

/// Sparse reduced Laplacian (row and column of `base` deleted), rows indexed
/// by the remaining vertices in order.
fn reduced_laplacian_rows(graph: &Multigraph, base: usize) -> SparseRows {
    let n = graph.vertex_count();
    let mut dense: Vec<std::collections::BTreeMap<u32, i64>> = vec![Default::default(); n];
    for &(a, b) in graph.edges() {
        if a == b {
            continue;
        }
        *dense[a].entry(a as u32).or_insert(0) += 1;
        *dense[b].entry(b as u32).or_insert(0) += 1;
        *dense[a].entry(b as u32).or_insert(0) -= 1;
        *dense[b].entry(a as u32).or_insert(0) -= 1;
    }
    let col_of = |c: u32| -> Option<u32> {
        match (c as usize).cmp(&base) {
            std::cmp::Ordering::Less => Some(c),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(c - 1),
        }
    };
    (0..n)
        .filter(|&v| v != base)
        .map(|v| {
            dense[v]
                .iter()
                .filter(|&(_, &x)| x != 0)
                .filter_map(|(&c, &x)| col_of(c).map(|c| (c, x)))
                .collect()
        })
        .collect()
}

/// Generous ceiling on v_p(|J|), used as the escalation cap: the tree count
/// is at most the product of the vertex degrees.
fn vp_cap(graph: &Multigraph, p: u64) -> u32 {
    let log_p = (p as f64).ln();
    let bits: f64 = (0..graph.vertex_count())
        .map(|v| ((graph.degree(v).max(2)) as f64).ln() / log_p)
        .sum();
    bits.ceil() as u32 + 32
}

fn jacobian_core(
    graph: &Multigraph,
    p: u64,
    level: u32,
    budget: &ComputeBudget,
) -> Result<JacobianData> {
    let n = graph.vertex_count();
    if n > budget.max_vertices_modp {
        return Err(Error::BudgetExceeded {
            got: n,
            limit: budget.max_vertices_modp,
            context: "jacobian",
        });
    }
    graph.spanning_tree()?; // connectedness; Jacobians of disconnected graphs are infinite

    if n <= budget.exact_snf_threshold && n <= budget.max_vertices_exact {
        let ed = snf_divisors(&graph.reduced_laplacian(0));
        let order = ed.divisors.iter().product::<BigInt>();
        let vp = ed.vp(p);
        return Ok(JacobianData {
            level,
            vertex_count: n,
            invariant_factors: Some(ed.divisors),
            order: Some(order),
            vp,
            method: JacobianMethod::ExactSnf,
        });
    }

    let rows = reduced_laplacian_rows(graph, 0);
    let (out, k) = local_divisors_adaptive(&rows, n - 1, p, 16, vp_cap(graph, p))?;
    Ok(JacobianData {
        level,
        vertex_count: n,
        invariant_factors: None,
        order: None,
        vp: out.total_vp().expect("adaptive run leaves no saturation"),
        method: JacobianMethod::LocalPk { k },
    })
}

/// p-part of the Jacobian of the level-`level` cover.
pub fn jacobian_of_cover(
    base: &Multigraph,
    assignment: &VoltageAssignment,
    level: u32,
    budget: &ComputeBudget,
) -> Result<JacobianData> {
    let cover = derived_graph(base, assignment, level, budget.max_vertices_modp)?;
    jacobian_core(cover.graph(), assignment.p(), level, budget)
}

/// An ideal (p^e, f_1(τ), ..., f_r(τ)) of the deck-group algebra, with the
/// f_j given as Laurent polynomials in the l group variables.
#[derive(Debug, Clone)]
pub struct RankIdealSpec {
    pub p_power: u32,
    pub polys: Vec<LaurentPoly>,
}

impl RankIdealSpec {
    pub fn new(p_power: u32, polys: Vec<LaurentPoly>) -> Self {
        RankIdealSpec { p_power, polys }
    }

    fn check_rank(&self, rank: usize) -> Result<()> {
        for f in &self.polys {
            if f.vars() != rank {
                return Err(Error::WrongArity {
                    expected: rank,
                    got: f.vars(),
                });
            }
        }
        Ok(())
    }
}

/// Matrix of the deck translation by `shift` acting on the divisor-class
/// lattice based at vertex 0, as sparse columns: column v holds the image of
/// the basis divisor (v) - (0).
fn action_columns(cover: &DerivedGraph, shift: &[u64]) -> Vec<Vec<(usize, i64)>> {
    let n = cover.graph().vertex_count();
    let image_of_base = cover.translate(0, shift);
    (1..n)
        .map(|v| {
            let mut col = Vec::with_capacity(2);
            let w = cover.translate(v, shift);
            if w != 0 {
                col.push((w - 1, 1));
            }
            if image_of_base != 0 {
                col.push((image_of_base - 1, -1));
            }
            col
        })
        .collect()
}

/// v_p of |J(X_m) / I·J(X_m)| for I = (p^e, f_1, ..., f_r).
///
/// The quotient is presented by the reduced Laplacian alongside p^e times
/// the identity and the f_j applied to the deck action; p^e kills it, so
/// elimination at precision e+2 resolves every divisor.
pub fn rank_ideal(
    base: &Multigraph,
    assignment: &VoltageAssignment,
    level: u32,
    ideal: &RankIdealSpec,
    budget: &ComputeBudget,
) -> Result<u64> {
    ideal.check_rank(assignment.rank())?;
    let cover = derived_graph(base, assignment, level, budget.max_vertices_modp)?;
    let graph = cover.graph();
    graph.spanning_tree()?;
    let n = graph.vertex_count();
    let p = assignment.p();
    if n == 1 {
        return Ok(0);
    }

    let mut rows: BigSparseRows = reduced_laplacian_rows(graph, 0)
        .into_iter()
        .map(|r| r.into_iter().map(|(c, x)| (c, BigInt::from(x))).collect())
        .collect();
    let mut col_offset = (n - 1) as u32;

    let p_power = BigInt::from(p).pow(ideal.p_power);
    for (i, row) in rows.iter_mut().enumerate() {
        row.push((col_offset + i as u32, p_power.clone()));
    }
    col_offset += (n - 1) as u32;

    for f in &ideal.polys {
        let mut block: Vec<std::collections::BTreeMap<u32, BigInt>> =
            vec![Default::default(); n - 1];
        for (exponents, coeff) in f.terms() {
            let shift: Vec<u64> = exponents
                .iter()
                .map(|&e| e.rem_euclid(cover.modulus() as i64) as u64)
                .collect();
            for (v, col) in action_columns(&cover, &shift).into_iter().enumerate() {
                for (row, sign) in col {
                    let slot = block[row].entry(col_offset + v as u32).or_default();
                    *slot += coeff * sign;
                }
            }
        }
        for (row, extra) in rows.iter_mut().zip(block) {
            row.extend(extra.into_iter().filter(|(_, x)| !num_traits::Zero::is_zero(x)));
        }
        col_offset += (n - 1) as u32;
    }

    for row in rows.iter_mut() {
        row.sort_by_key(|&(c, _)| c);
    }

    let out = local_divisors_big(&rows, col_offset as usize, p, ideal.p_power + 2);
    out.total_vp().ok_or(Error::InfiniteQuotient)
}

/// Ideal ranks at levels 0..=m_max, in order.
pub fn rank_sequence(
    base: &Multigraph,
    assignment: &VoltageAssignment,
    ideal: &RankIdealSpec,
    m_max: u32,
    budget: &ComputeBudget,
) -> Result<Vec<u64>> {
    (0..=m_max)
        .map(|m| rank_ideal(base, assignment, m, ideal, budget))
        .collect()
}

/// First level whose ideal rank repeats at the next level, with that rank —
/// the stabilization point of the sequence — or `None` if no adjacent pair
/// within 0..=m_max agrees.
pub fn fukuda_stabilize(
    base: &Multigraph,
    assignment: &VoltageAssignment,
    ideal: &RankIdealSpec,
    m_max: u32,
    budget: &ComputeBudget,
) -> Result<Option<(u32, u64)>> {
    let ranks = rank_sequence(base, assignment, ideal, m_max, budget)?;
    for m in 0..ranks.len().saturating_sub(1) {
        if ranks[m] == ranks[m + 1] {
            return Ok(Some((m as u32, ranks[m])));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::LaurentPoly;
    use num_bigint::BigInt;

    fn triangle() -> Multigraph {
        Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn tau_on_first_edge(p: u64, edges: usize) -> VoltageAssignment {
        let mut voltages = vec![vec![0i64]; edges];
        voltages[0] = vec![1];
        VoltageAssignment::new(p, 1, voltages).unwrap()
    }

    /// T = τ - 1 in one group variable.
    fn t_poly() -> LaurentPoly {
        LaurentPoly::variable(1, 0).sub(&LaurentPoly::one(1))
    }

    #[test]
    fn hexagon_cover_has_cyclic_jacobian_of_order_six() {
        let data = jacobian_of_cover(
            &triangle(),
            &tau_on_first_edge(2, 3),
            1,
            &ComputeBudget::default(),
        )
        .unwrap();
        assert_eq!(data.vertex_count, 6);
        assert_eq!(
            data.invariant_factors.as_deref(),
            Some(&[1.into(), 1.into(), 1.into(), 1.into(), 6.into()][..])
        );
        assert_eq!(data.order, Some(BigInt::from(6)));
        assert_eq!(data.vp, 1);
        assert_eq!(data.method, JacobianMethod::ExactSnf);
    }

    #[test]
    fn base_level_orders_and_valuations() {
        // Triangle: |J| = 3, so v_2 = 0 while v_3 = 1.
        let data = jacobian_of_cover(
            &triangle(),
            &tau_on_first_edge(2, 3),
            0,
            &ComputeBudget::default(),
        )
        .unwrap();
        assert_eq!(data.order, Some(BigInt::from(3)));
        assert_eq!(data.vp, 0);

        let data = jacobian_of_cover(
            &triangle(),
            &tau_on_first_edge(3, 3),
            0,
            &ComputeBudget::default(),
        )
        .unwrap();
        assert_eq!(data.vp, 1);

        // Triangle with the (0,1) edge doubled: 5 spanning trees.
        let base = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        let a = VoltageAssignment::new(5, 1, vec![vec![1], vec![0], vec![0], vec![0]]).unwrap();
        let data = jacobian_of_cover(&base, &a, 0, &ComputeBudget::default()).unwrap();
        assert_eq!(data.order, Some(BigInt::from(5)));
        assert_eq!(data.vp, 1);
    }

    #[test]
    fn engines_agree_and_match_tree_counts() {
        let mut seed = 0x853c49e6748fea9bu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        let exact_only = ComputeBudget::default();
        let local_only = ComputeBudget {
            exact_snf_threshold: 0,
            ..ComputeBudget::default()
        };
        for p in [2u64, 3, 5] {
            for _ in 0..8 {
                // Connected-ish random base: a cycle plus chords.
                let n = 3 + (next() % 3) as usize;
                let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
                for _ in 0..(next() % 3) {
                    edges.push(((next() as usize) % n, (next() as usize) % n));
                }
                let base = match Multigraph::new(n, edges) {
                    Ok(g) => g,
                    Err(_) => continue,
                };
                let voltages: Vec<Vec<i64>> = (0..base.edge_count())
                    .map(|_| vec![(next() % p) as i64])
                    .collect();
                let a = VoltageAssignment::new(p, 1, voltages).unwrap();
                for m in 0..=2u32 {
                    let exact = jacobian_of_cover(&base, &a, m, &exact_only);
                    let local = jacobian_of_cover(&base, &a, m, &local_only);
                    match (exact, local) {
                        (Ok(e), Ok(l)) => {
                            assert_eq!(e.vp, l.vp, "p={p} m={m}");
                            assert!(matches!(l.method, JacobianMethod::LocalPk { .. }));
                            let cover = derived_graph(&base, &a, m, 10_000).unwrap();
                            assert_eq!(
                                e.order.unwrap(),
                                cover.graph().spanning_tree_count(),
                                "p={p} m={m}"
                            );
                        }
                        // Disconnected covers are rejected by both engines.
                        (Err(Error::Disconnected { .. }), Err(Error::Disconnected { .. })) => {}
                        (e, l) => panic!("engines disagree: {e:?} vs {l:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let tight = ComputeBudget {
            max_vertices_modp: 10,
            ..ComputeBudget::default()
        };
        assert!(matches!(
            jacobian_of_cover(&triangle(), &tau_on_first_edge(5, 3), 2, &tight),
            Err(Error::BudgetExceeded { limit: 10, .. })
        ));
    }

    #[test]
    fn ideal_rank_examples() {
        // Cyclic 3-towers over the twisted triangle: J/(3, τ-1)J has order 3
        // at levels 0 and 1.
        let base = triangle();
        let a = tau_on_first_edge(3, 3);
        let ideal = RankIdealSpec::new(1, vec![t_poly()]);
        let budget = ComputeBudget::default();
        assert_eq!(rank_ideal(&base, &a, 0, &ideal, &budget).unwrap(), 1);
        assert_eq!(rank_ideal(&base, &a, 1, &ideal, &budget).unwrap(), 1);

        // (p) alone, with |J| coprime to p: the quotient dies.
        let coprime = RankIdealSpec::new(1, vec![]);
        let a5 = tau_on_first_edge(5, 3);
        assert_eq!(rank_ideal(&base, &a5, 0, &coprime, &budget).unwrap(), 0);

        // (p^E) alone with E past v_p(|J|) recovers the full valuation.
        for m in 0..=2u32 {
            let huge = RankIdealSpec::new(9, vec![]);
            let full = jacobian_of_cover(&base, &a, m, &budget).unwrap().vp;
            assert!(full < 9);
            assert_eq!(rank_ideal(&base, &a, m, &huge, &budget).unwrap(), full);
        }

        // Wrong number of variables in a generator is rejected.
        let bad = RankIdealSpec::new(1, vec![LaurentPoly::variable(2, 0)]);
        assert!(matches!(
            rank_ideal(&base, &a, 0, &bad, &budget),
            Err(Error::WrongArity {
                expected: 1,
                got: 2
            })
        ));
    }

    #[test]
    fn stabilization_search() {
        let base = triangle();
        let a = tau_on_first_edge(3, 3);
        let budget = ComputeBudget::default();

        let ideal = RankIdealSpec::new(1, vec![t_poly()]);
        let ranks = rank_sequence(&base, &a, &ideal, 3, &budget).unwrap();
        assert_eq!(ranks, vec![1, 1, 1, 1]);
        assert_eq!(
            fukuda_stabilize(&base, &a, &ideal, 3, &budget).unwrap(),
            Some((0, 1))
        );

        // With (3^8, τ-1) the rank keeps climbing with the tower, so no
        // stabilization is visible below level 2.
        let deep = RankIdealSpec::new(8, vec![t_poly()]);
        assert_eq!(rank_sequence(&base, &a, &deep, 2, &budget).unwrap(), vec![
            1, 2, 3
        ]);
        assert_eq!(fukuda_stabilize(&base, &a, &deep, 2, &budget).unwrap(), None);
    }

    #[test]
    #[ignore = "timing probe for the exact-SNF crossover; run with --ignored --nocapture"]
    fn exact_snf_timing_probe() {
        // Cycle of length 5 with the first edge tripled, τ on one extra
        // copy: levels of the 2-adic tower reach 1280 vertices by m = 8.
        let base = Multigraph::new(
            5,
            vec![(0, 1), (0, 1), (0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
        )
        .unwrap();
        let mut voltages = vec![vec![0i64]; 7];
        voltages[1] = vec![1];
        let a = VoltageAssignment::new(2, 1, voltages).unwrap();
        for m in [6u32, 7, 8] {
            let cover = derived_graph(&base, &a, m, 100_000).unwrap();
            let n = cover.graph().vertex_count();
            let start = std::time::Instant::now();
            let ed = snf_divisors(&cover.graph().reduced_laplacian(0));
            let exact_elapsed = start.elapsed();
            let start = std::time::Instant::now();
            let rows = reduced_laplacian_rows(cover.graph(), 0);
            let (out, k) = local_divisors_adaptive(&rows, n - 1, 2, 16, 4096).unwrap();
            let local_elapsed = start.elapsed();
            println!(
                "n={n}: exact {exact_elapsed:?} (vp={}), local {local_elapsed:?} (vp={:?}, k={k})",
                ed.vp(2),
                out.total_vp()
            );
        }
    }
}
