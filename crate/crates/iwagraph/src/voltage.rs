//! Voltage assignments and the derived graphs they generate.
//!
//! A voltage assignment labels every edge of a base graph with an element of
//! Z^l. Reducing the labels mod p^m and unrolling produces the level-m
//! derived graph: vertices are pairs (base vertex, group element), and an
//! edge e = (t, h) with voltage α connects (t, g) to (h, g + α) for every g.
//! The translation action of (Z/p^m)^l on the second coordinate is the deck
//! group of the cover, and the whole stack of levels forms a tower over the
//! base.
//!
//! Whether every level is connected is decided once and for all on the base
//! graph: the cover at level m is connected exactly when the voltages of the
//! fundamental cycles generate (Z/p^m)^l, and by Nakayama that holds for all
//! m at once exactly when it holds mod p. [`tower_connectivity`] returns a
//! certificate either way: a set of cycles whose voltages generate, or a
//! nonzero character that kills every cycle voltage.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::is_prime_u64;
use crate::multigraph::Multigraph;

/// Edge labels in Z^l for a fixed prime p, stored per edge in the order the
/// base graph lists its edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageAssignment {
    p: u64,
    rank: usize,
    voltages: Vec<Vec<i64>>,
}

impl VoltageAssignment {
    pub fn new(p: u64, rank: usize, voltages: Vec<Vec<i64>>) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime { value: p });
        }
        assert!(rank >= 1, "voltage rank must be at least 1");
        for (edge_index, v) in voltages.iter().enumerate() {
            if v.len() != rank {
                return Err(Error::VoltageLength {
                    edge_index,
                    got: v.len(),
                    expected: rank,
                });
            }
        }
        Ok(VoltageAssignment { p, rank, voltages })
    }

    /// The all-zero assignment on `edge_count` edges; every level of its
    /// tower is a disjoint stack of copies of the base.
    pub fn trivial(p: u64, rank: usize, edge_count: usize) -> Result<Self> {
        Self::new(p, rank, vec![vec![0; rank]; edge_count])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of Z_p factors (the `l` in Z_p^l).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn voltages(&self) -> &[Vec<i64>] {
        &self.voltages
    }

    pub fn voltage(&self, edge: usize) -> &[i64] {
        &self.voltages[edge]
    }

    /// The assignment only makes sense on a graph with matching edge count.
    pub fn check_graph(&self, graph: &Multigraph) -> Result<()> {
        if self.voltages.len() != graph.edge_count() {
            return Err(Error::VoltageCount {
                got: self.voltages.len(),
                expected: graph.edge_count(),
            });
        }
        Ok(())
    }
}

/// A level of the tower: the unrolled cover together with enough bookkeeping
/// to translate between (base vertex, group element) pairs and flat indices.
///
/// Vertex indices are base-vertex-major: vertex (v, g) sits at
/// `v * fiber_size + enc(g)` where `enc` writes g in little-endian base p^m
/// digits. Edge indices are base-edge-major: the copies of base edge e
/// occupy the block `e * fiber_size ..`, ordered by the group element of
/// their tail fiber point.
#[derive(Debug, Clone)]
pub struct DerivedGraph {
    graph: Multigraph,
    level: u32,
    p: u64,
    rank: usize,
    base_vertices: usize,
    base_edges: usize,
    modulus: u64,
    fiber: usize,
}

impl DerivedGraph {
    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base_vertices(&self) -> usize {
        self.base_vertices
    }

    pub fn base_edges(&self) -> usize {
        self.base_edges
    }

    /// p^m, the modulus of one coordinate of the deck group.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// p^{ml}, the size of every vertex fiber and of the deck group.
    pub fn fiber_size(&self) -> usize {
        self.fiber
    }

    fn encode(&self, g: &[u64]) -> usize {
        debug_assert_eq!(g.len(), self.rank);
        let mut idx = 0u64;
        for &c in g.iter().rev() {
            debug_assert!(c < self.modulus);
            idx = idx * self.modulus + c;
        }
        idx as usize
    }

    fn decode(&self, mut h: usize) -> Vec<u64> {
        let mut g = Vec::with_capacity(self.rank);
        for _ in 0..self.rank {
            g.push((h as u64) % self.modulus);
            h /= self.modulus as usize;
        }
        g
    }

    /// Flat index of the vertex (v, g).
    pub fn vertex_index(&self, v: usize, g: &[u64]) -> usize {
        assert!(v < self.base_vertices);
        v * self.fiber + self.encode(g)
    }

    /// Inverse of [`vertex_index`](Self::vertex_index).
    pub fn vertex_label(&self, index: usize) -> (usize, Vec<u64>) {
        (index / self.fiber, self.decode(index % self.fiber))
    }

    /// Index of the vertex reached from `index` by translating its group
    /// element by `shift`.
    pub fn translate(&self, index: usize, shift: &[u64]) -> usize {
        let (v, mut g) = self.vertex_label(index);
        for (c, &s) in g.iter_mut().zip(shift) {
            *c = (*c + s % self.modulus) % self.modulus;
        }
        self.vertex_index(v, &g)
    }

    /// The deck transformation translating by the i-th standard generator,
    /// as a permutation of vertex indices.
    pub fn generator_permutation(&self, i: usize) -> Vec<usize> {
        assert!(i < self.rank);
        let mut shift = vec![0u64; self.rank];
        shift[i] = 1 % self.modulus;
        (0..self.graph.vertex_count())
            .map(|x| self.translate(x, &shift))
            .collect()
    }

    /// Where a vertex lands one level down the tower (group element reduced
    /// mod p^{m-1}).
    pub fn project_vertex(&self, coarser: &DerivedGraph, index: usize) -> usize {
        assert_eq!(coarser.level + 1, self.level);
        let (v, g) = self.vertex_label(index);
        let reduced: Vec<u64> = g.iter().map(|&c| c % coarser.modulus).collect();
        coarser.vertex_index(v, &reduced)
    }
}

/// Unroll the level-`level` cover of `base` determined by `assignment`.
/// Level 0 returns the base graph itself. Fails fast with
/// [`Error::BudgetExceeded`] before allocating anything oversized.
pub fn derived_graph(
    base: &Multigraph,
    assignment: &VoltageAssignment,
    level: u32,
    max_vertices: usize,
) -> Result<DerivedGraph> {
    assignment.check_graph(base)?;
    let p = assignment.p();
    let l = assignment.rank();
    let modulus_wide = (p as u128).checked_pow(level);
    let fiber_wide = modulus_wide.and_then(|m| m.checked_pow(l as u32));
    let vertices_wide = fiber_wide.map(|f| f.saturating_mul(base.vertex_count() as u128));
    let vertices_wide = vertices_wide.unwrap_or(u128::MAX);
    if vertices_wide > max_vertices as u128 {
        return Err(Error::BudgetExceeded {
            got: vertices_wide.min(usize::MAX as u128) as usize,
            limit: max_vertices,
            context: "derived graph vertices",
        });
    }
    let modulus = modulus_wide.expect("bounded above") as u64;
    let fiber = fiber_wide.expect("bounded above") as usize;
    let n = base.vertex_count() * fiber;

    let mut scaffold = DerivedGraph {
        graph: Multigraph::new(1, Vec::new())?,
        level,
        p,
        rank: l,
        base_vertices: base.vertex_count(),
        base_edges: base.edge_count(),
        modulus,
        fiber,
    };

    let mut edges = Vec::with_capacity(base.edge_count() * fiber);
    for (e, &(t, h)) in base.edges().iter().enumerate() {
        let alpha: Vec<u64> = assignment
            .voltage(e)
            .iter()
            .map(|&a| a.rem_euclid(modulus as i64) as u64)
            .collect();
        for point in 0..fiber {
            let g = scaffold.decode(point);
            let shifted: Vec<u64> = g
                .iter()
                .zip(&alpha)
                .map(|(&c, &a)| (c + a) % modulus)
                .collect();
            edges.push((
                scaffold.vertex_index(t, &g),
                scaffold.vertex_index(h, &shifted),
            ));
        }
    }
    scaffold.graph = Multigraph::new(n, edges)?;
    Ok(scaffold)
}

/// Outcome of the tower connectivity test, with a checkable certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerConnectivity {
    /// Indices of non-tree edges whose fundamental-cycle voltages generate
    /// (Z/p)^l, hence (Z/p^m)^l for every m.
    Connected { generating_cycles: Vec<usize> },
    /// A nonzero character of (Z/p)^l vanishing on every cycle voltage; it
    /// cuts every level above the base into p pieces or more.
    Disconnected { witness: Vec<u64> },
}

/// Voltages of all fundamental cycles, one row per non-tree edge, as
/// elements of Z^l. Row order matches `tree.non_tree_edges`.
///
/// The potential of a vertex is the voltage sum along its tree path from the
/// root; the cycle through non-tree edge e = (t, h) has voltage
/// pot(t) + α(e) - pot(h).
pub fn cycle_voltages(
    base: &Multigraph,
    assignment: &VoltageAssignment,
) -> Result<(Vec<usize>, Vec<Vec<i64>>)> {
    assignment.check_graph(base)?;
    let tree = base.spanning_tree()?;
    let l = assignment.rank();
    let mut potential: Vec<Vec<i64>> = vec![vec![0; l]; base.vertex_count()];
    for &v in &tree.order {
        if let Some((e, forward)) = tree.parent_edge[v] {
            let (t, h) = base.edges()[e];
            let parent = if forward { t } else { h };
            let alpha = assignment.voltage(e);
            potential[v] = potential[parent]
                .iter()
                .zip(alpha)
                .map(|(&pp, &a)| if forward { pp + a } else { pp - a })
                .collect();
        }
    }
    let rows = tree
        .non_tree_edges
        .iter()
        .map(|&e| {
            let (t, h) = base.edges()[e];
            (0..l)
                .map(|i| potential[t][i] + assignment.voltage(e)[i] - potential[h][i])
                .collect()
        })
        .collect();
    Ok((tree.non_tree_edges, rows))
}

/// Decide connectivity of every level of the tower at once.
///
/// Requires the base graph itself to be connected (that failure is reported
/// as [`Error::Disconnected`], not as a certificate).
pub fn tower_connectivity(
    base: &Multigraph,
    assignment: &VoltageAssignment,
) -> Result<TowerConnectivity> {
    let p = assignment.p();
    let l = assignment.rank();
    let (cycle_edges, rows) = cycle_voltages(base, assignment)?;

    // Gaussian elimination mod p on the rows; remember which cycle produced
    // each pivot.
    let reduce = |x: i64| x.rem_euclid(p as i64) as u64;
    let mut basis: Vec<(usize, Vec<u64>, usize)> = Vec::new(); // (pivot col, row, cycle edge)
    for (row_idx, row) in rows.iter().enumerate() {
        let mut r: Vec<u64> = row.iter().map(|&x| reduce(x)).collect();
        for (pc, prow, _) in &basis {
            if r[*pc] != 0 {
                let factor = r[*pc] * crate::exact::inv_mod_u64(prow[*pc], p) % p;
                for (x, &b) in r.iter_mut().zip(prow) {
                    *x = (*x + (p - factor * b % p)) % p;
                }
            }
        }
        if let Some(pc) = r.iter().position(|&x| x != 0) {
            basis.push((pc, r, cycle_edges[row_idx]));
            if basis.len() == l {
                break;
            }
        }
    }
    if basis.len() == l {
        return Ok(TowerConnectivity::Connected {
            generating_cycles: basis.into_iter().map(|(_, _, e)| e).collect(),
        });
    }

    // Rank-deficient: produce a character orthogonal to the whole row space.
    // Re-eliminate into row echelon form, then back-substitute for a vector
    // with a 1 in some non-pivot coordinate.
    let pivot_cols: Vec<usize> = basis.iter().map(|&(pc, _, _)| pc).collect();
    let free_col = (0..l)
        .find(|c| !pivot_cols.contains(c))
        .expect("rank < l leaves a free column");
    let mut witness = vec![0u64; l];
    witness[free_col] = 1;
    // Solve pivot entries so that every basis row is orthogonal to witness,
    // working from the last pivot upward (echelon rows have zeros before
    // their pivot after full reduction, but later rows may touch earlier
    // pivot columns; iterate until fixed).
    for _ in 0..l {
        for (pc, row, _) in basis.iter().rev() {
            let dot: u64 = row
                .iter()
                .zip(&witness)
                .fold(0u64, |acc, (&a, &b)| (acc + a * b) % p);
            if dot != 0 {
                let fix = dot * crate::exact::inv_mod_u64(row[*pc], p) % p;
                witness[*pc] = (witness[*pc] + p - fix) % p;
            }
        }
    }
    debug_assert!(rows.iter().all(|row| {
        row.iter()
            .zip(&witness)
            .fold(0u64, |acc, (&a, &b)| (acc + reduce(a) * b) % p)
            == 0
    }));
    Ok(TowerConnectivity::Disconnected { witness })
}

pub fn tower_is_connected(base: &Multigraph, assignment: &VoltageAssignment) -> Result<bool> {
    Ok(matches!(
        tower_connectivity(base, assignment)?,
        TowerConnectivity::Connected { .. }
    ))
}

/// Like [`tower_is_connected`] but promotes a disconnection certificate into
/// the error channel, for pipelines that need every level connected.
pub fn require_connected_tower(base: &Multigraph, assignment: &VoltageAssignment) -> Result<()> {
    match tower_connectivity(base, assignment)? {
        TowerConnectivity::Connected { .. } => Ok(()),
        TowerConnectivity::Disconnected { witness } => Err(Error::DisconnectedTower { witness }),
    }
}

fn edge_multiset(graph: &Multigraph) -> HashMap<(usize, usize), usize> {
    let mut mult = HashMap::new();
    for &(a, b) in graph.edges() {
        *mult.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    mult
}

/// Sanity-check the deck action at one level: every generator translation
/// must be a graph automorphism, the generators must commute, and collapsing
/// fibers must return the base graph with every edge multiplied by the fiber
/// size. Violations are reported as [`Error::SelfCheck`].
pub fn galois_orbit_check(
    base: &Multigraph,
    assignment: &VoltageAssignment,
    level: u32,
    max_vertices: usize,
) -> Result<()> {
    let cover = derived_graph(base, assignment, level, max_vertices)?;
    let n = cover.graph().vertex_count();
    let edges = edge_multiset(cover.graph());
    let perms: Vec<Vec<usize>> = (0..cover.rank())
        .map(|i| cover.generator_permutation(i))
        .collect();

    for (i, perm) in perms.iter().enumerate() {
        let mut mapped = HashMap::new();
        for &(a, b) in cover.graph().edges() {
            let (x, y) = (perm[a], perm[b]);
            *mapped.entry((x.min(y), x.max(y))).or_insert(0) += 1;
        }
        if mapped != edges {
            return Err(Error::SelfCheck {
                message: format!("deck generator {i} is not a graph automorphism"),
            });
        }
    }

    for i in 0..perms.len() {
        for j in i + 1..perms.len() {
            let ij: Vec<usize> = (0..n).map(|x| perms[i][perms[j][x]]).collect();
            let ji: Vec<usize> = (0..n).map(|x| perms[j][perms[i][x]]).collect();
            if ij != ji {
                return Err(Error::SelfCheck {
                    message: format!("deck generators {i} and {j} do not commute"),
                });
            }
        }
    }

    // Free and transitive on fibers: translating a fiber-base point by every
    // group element must enumerate its fiber without repetition.
    for v in 0..cover.base_vertices() {
        let anchor = cover.vertex_index(v, &vec![0; cover.rank()]);
        let mut seen = vec![false; cover.fiber_size()];
        for point in 0..cover.fiber_size() {
            let shift = cover.decode(point);
            let image = cover.translate(anchor, &shift);
            if image / cover.fiber_size() != v || seen[image % cover.fiber_size()] {
                return Err(Error::SelfCheck {
                    message: format!("deck action is not free and transitive on fiber {v}"),
                });
            }
            seen[image % cover.fiber_size()] = true;
        }
    }

    // Quotient by the action: every base edge must reappear fiber-size times.
    let mut collapsed = HashMap::new();
    for &(a, b) in cover.graph().edges() {
        let (x, y) = (a / cover.fiber_size(), b / cover.fiber_size());
        *collapsed.entry((x.min(y), x.max(y))).or_insert(0) += 1;
    }
    let mut expected = edge_multiset(base);
    for count in expected.values_mut() {
        *count *= cover.fiber_size();
    }
    if collapsed != expected {
        return Err(Error::SelfCheck {
            message: "collapsing fibers does not recover the base graph".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Multigraph {
        Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    /// Voltage τ (one unit of the single Z_p factor) on the first edge only.
    fn tau_on_first_edge(p: u64, edges: usize) -> VoltageAssignment {
        let mut voltages = vec![vec![0i64]; edges];
        voltages[0] = vec![1];
        VoltageAssignment::new(p, 1, voltages).unwrap()
    }

    #[test]
    fn validation() {
        assert!(matches!(
            VoltageAssignment::new(6, 1, vec![vec![1]]),
            Err(Error::NotPrime { value: 6 })
        ));
        assert!(matches!(
            VoltageAssignment::new(5, 2, vec![vec![1, 0], vec![3]]),
            Err(Error::VoltageLength {
                edge_index: 1,
                got: 1,
                expected: 2
            })
        ));
        let a = VoltageAssignment::new(5, 1, vec![vec![1], vec![0]]).unwrap();
        assert!(matches!(
            a.check_graph(&triangle()),
            Err(Error::VoltageCount {
                got: 2,
                expected: 3
            })
        ));
    }

    #[test]
    fn level_zero_is_the_base() {
        let base = triangle();
        let a = tau_on_first_edge(7, 3);
        let cover = derived_graph(&base, &a, 0, 100).unwrap();
        assert_eq!(cover.graph().vertex_count(), 3);
        assert_eq!(cover.graph().edges(), base.edges());
        assert_eq!(cover.fiber_size(), 1);
    }

    #[test]
    fn budget_failure_is_early_and_sized() {
        let base = triangle();
        let a = tau_on_first_edge(5, 3);
        match derived_graph(&base, &a, 3, 100) {
            Err(Error::BudgetExceeded { got, limit, .. }) => {
                assert_eq!(got, 375);
                assert_eq!(limit, 100);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn double_cover_of_twisted_triangle_is_a_hexagon() {
        // One voltage τ on one edge of a triangle, p = 2, level 1: the cover
        // is connected and 2-regular on 6 vertices, i.e. the hexagon, whose
        // spanning-tree count is 6.
        let base = triangle();
        let a = tau_on_first_edge(2, 3);
        let cover = derived_graph(&base, &a, 1, 100).unwrap();
        let g = cover.graph();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert!((0..6).all(|v| g.degree(v) == 2));
        assert!(g.is_connected());
        assert_eq!(g.spanning_tree_count(), 6.into());
    }

    #[test]
    fn trivial_voltages_stack_disjoint_copies() {
        let base = triangle();
        let a = VoltageAssignment::trivial(3, 1, 3).unwrap();
        let cover = derived_graph(&base, &a, 1, 100).unwrap();
        let g = cover.graph();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.component_count(), 3);
        assert_eq!(g.spanning_tree_count(), 0.into());
        assert!((0..9).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn indexing_round_trips_and_translation_acts() {
        let base = Multigraph::new(2, vec![(0, 1), (0, 1), (0, 0)]).unwrap();
        let a =
            VoltageAssignment::new(3, 2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let cover = derived_graph(&base, &a, 2, 1000).unwrap();
        assert_eq!(cover.fiber_size(), 81);
        assert_eq!(cover.modulus(), 9);
        for idx in 0..cover.graph().vertex_count() {
            let (v, g) = cover.vertex_label(idx);
            assert_eq!(cover.vertex_index(v, &g), idx);
        }
        // Translation by (1,0) then (0,1) equals translation by (1,1).
        let one_zero = cover.generator_permutation(0);
        let zero_one = cover.generator_permutation(1);
        for idx in 0..cover.graph().vertex_count() {
            assert_eq!(
                one_zero[zero_one[idx]],
                cover.translate(idx, &[1, 1])
            );
        }
    }

    #[test]
    fn scaling_laws_degrees_and_projection() {
        let base = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
        for (p, voltages) in [
            (2u64, vec![vec![1], vec![0], vec![0], vec![1]]),
            (3, vec![vec![2], vec![1], vec![0], vec![0]]),
            (5, vec![vec![1], vec![3], vec![4], vec![2]]),
        ] {
            let a = VoltageAssignment::new(p, 1, voltages).unwrap();
            let mut previous: Option<DerivedGraph> = None;
            for m in 0..=2u32 {
                let cover = derived_graph(&base, &a, m, 10_000).unwrap();
                let fiber = (p as usize).pow(m);
                assert_eq!(cover.graph().vertex_count(), 3 * fiber);
                assert_eq!(cover.graph().edge_count(), 4 * fiber);
                for idx in 0..cover.graph().vertex_count() {
                    let (v, _) = cover.vertex_label(idx);
                    assert_eq!(cover.graph().degree(idx), base.degree(v));
                }
                if let Some(coarser) = &previous {
                    // Both endpoints of every unrolled edge project onto the
                    // matching unrolled edge one level down.
                    for (e, &(x, y)) in cover.graph().edges().iter().enumerate() {
                        let (base_edge, point) =
                            (e / cover.fiber_size(), e % cover.fiber_size());
                        let down = base_edge * coarser.fiber_size()
                            + point % coarser.fiber_size();
                        let (dx, dy) = coarser.graph().edges()[down];
                        assert_eq!(cover.project_vertex(coarser, x), dx);
                        assert_eq!(cover.project_vertex(coarser, y), dy);
                    }
                }
                previous = Some(cover);
            }
        }
    }

    #[test]
    fn connectivity_criterion_matches_unrolled_search() {
        // Exhaustive small sweep: the mod-p cycle-voltage rank must predict
        // actual connectivity of levels 1 and 2.
        let base = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for p in [2u64, 3] {
            for l in [1usize, 2] {
                for _ in 0..40 {
                    let voltages: Vec<Vec<i64>> = (0..4)
                        .map(|_| (0..l).map(|_| (next() % (2 * p)) as i64 - p as i64).collect())
                        .collect();
                    let a = VoltageAssignment::new(p, l, voltages).unwrap();
                    let connected = tower_is_connected(&base, &a).unwrap();
                    for m in [1u32, 2] {
                        let cover = derived_graph(&base, &a, m, 10_000).unwrap();
                        assert_eq!(
                            cover.graph().is_connected(),
                            connected,
                            "p={p} l={l} m={m} voltages={:?}",
                            a.voltages()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn certificates_are_checkable() {
        let base = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        // Two independent parallel-edge voltages: connected, and the
        // generating cycles must themselves have independent voltages.
        let a = VoltageAssignment::new(
            5,
            2,
            vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![0, 0]],
        )
        .unwrap();
        match tower_connectivity(&base, &a).unwrap() {
            TowerConnectivity::Connected { generating_cycles } => {
                assert_eq!(generating_cycles.len(), 2);
                let (cycles, rows) = cycle_voltages(&base, &a).unwrap();
                for e in &generating_cycles {
                    assert!(cycles.contains(e));
                }
                // The two certified cycle voltages span (Z/5)^2.
                let picked: Vec<&Vec<i64>> = generating_cycles
                    .iter()
                    .map(|e| &rows[cycles.iter().position(|c| c == e).unwrap()])
                    .collect();
                let det = picked[0][0] * picked[1][1] - picked[0][1] * picked[1][0];
                assert_ne!(det.rem_euclid(5), 0);
            }
            other => panic!("expected connected, got {other:?}"),
        }

        // A triangle has one independent cycle: rank 1 < 2, so the l = 2
        // tower falls apart, with a checkable orthogonal witness.
        let base = triangle();
        let a = VoltageAssignment::new(
            5,
            2,
            vec![vec![1, 0], vec![0, 1], vec![0, 0]],
        )
        .unwrap();
        match tower_connectivity(&base, &a).unwrap() {
            TowerConnectivity::Disconnected { witness } => {
                assert!(witness.iter().any(|&c| c != 0));
                assert!(witness.iter().all(|&c| c < 5));
                let (_, rows) = cycle_voltages(&base, &a).unwrap();
                for row in rows {
                    let dot: i64 = row.iter().zip(&witness).map(|(&r, &w)| r * w as i64).sum();
                    assert_eq!(dot.rem_euclid(5), 0);
                }
            }
            other => panic!("expected disconnected, got {other:?}"),
        }

        assert!(matches!(
            require_connected_tower(&base, &a),
            Err(Error::DisconnectedTower { .. })
        ));

        // All-trivial voltages: every character is a witness.
        let a = VoltageAssignment::trivial(3, 1, 3).unwrap();
        assert!(!tower_is_connected(&base, &a).unwrap());
    }

    #[test]
    fn deck_action_self_checks_pass() {
        let base = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        let a = VoltageAssignment::new(
            3,
            2,
            vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![0, 0]],
        )
        .unwrap();
        for m in 0..=2 {
            galois_orbit_check(&base, &a, m, 100_000).unwrap();
        }
        let loops = Multigraph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        let a = VoltageAssignment::new(2, 1, vec![vec![1], vec![0]]).unwrap();
        for m in 0..=3 {
            galois_orbit_check(&loops, &a, m, 100_000).unwrap();
        }
    }
}
