//! Proptest strategies shared by the property suite and the acceptance
//! harness. Each harness uses a subset, hence the blanket allow.
#![allow(dead_code)]

use iwagraph::exact::{phi_pk, CyclotomicElem};
use iwagraph::{LaurentPoly, Multigraph, VoltageAssignment};
use proptest::prelude::*;
use proptest::sample::Index;

/// Σ c_i ζ^i in Z[ζ_{p^k}], coefficients over the power basis.
pub fn build_cyclo(p: u64, k: u32, coeffs: &[i64]) -> CyclotomicElem {
    coeffs
        .iter()
        .enumerate()
        .fold(CyclotomicElem::zero(p, k), |acc, (i, &c)| {
            acc.add(&CyclotomicElem::root_power(p, k, i as u64).mul_scalar(c))
        })
}

/// (p, k) with the cyclotomic degree φ(p^k) kept small.
pub fn arb_cyclo_params() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![
        (Just(2u64), 1..=3u32),
        (Just(3u64), 1..=2u32),
        (Just(5u64), 1..=2u32),
    ]
}

fn arb_cyclo_in(p: u64, k: u32) -> impl Strategy<Value = CyclotomicElem> {
    let dim = phi_pk(p, k) as usize;
    prop::collection::vec(-5i64..=5, dim).prop_map(move |c| build_cyclo(p, k, &c))
}

/// Two elements of the same cyclotomic ring.
pub fn arb_cyclo_pair() -> impl Strategy<Value = (CyclotomicElem, CyclotomicElem)> {
    arb_cyclo_params().prop_flat_map(|(p, k)| (arb_cyclo_in(p, k), arb_cyclo_in(p, k)))
}

/// Square integer matrix as (n, row-major entries), n ≤ 5.
pub fn arb_square_matrix() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1..=5usize).prop_flat_map(|n| (Just(n), prop::collection::vec(-9i64..=9, n * n)))
}

/// Connected multigraph: a random spanning tree plus a few extra edges
/// (parallel edges and loops both allowed).
pub fn arb_connected_graph() -> impl Strategy<Value = Multigraph> {
    (2..=6usize).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(any::<Index>(), n - 1),
            prop::collection::vec((any::<Index>(), any::<Index>()), 0..=3),
        )
            .prop_map(|(n, parents, extras)| {
                let mut edges: Vec<(usize, usize)> = parents
                    .iter()
                    .enumerate()
                    .map(|(i, idx)| (idx.index(i + 1), i + 1))
                    .collect();
                for (a, b) in extras {
                    edges.push((a.index(n), b.index(n)));
                }
                Multigraph::new(n, edges).expect("endpoints are in range")
            })
    })
}

/// Connected base graph with a rank-1 voltage assignment at p ∈ {2, 3}.
/// The tower above it may or may not be connected; filter with
/// `tower_is_connected` where that matters.
pub fn arb_rank1_tower() -> impl Strategy<Value = (Multigraph, VoltageAssignment)> {
    (arb_connected_graph(), prop_oneof![Just(2u64), Just(3u64)])
        .prop_flat_map(|(graph, p)| {
            let span = p as i64;
            let volts = prop::collection::vec(-span..=span, graph.edge_count());
            (Just(graph), Just(p), volts)
        })
        .prop_map(|(graph, p, volts)| {
            let assignment =
                VoltageAssignment::new(p, 1, volts.into_iter().map(|v| vec![v]).collect())
                    .expect("one voltage per edge");
            (graph, assignment)
        })
}

/// Laurent polynomial with up to `max_terms` terms and exponents in the
/// given range (use 0.. to stay polynomial).
pub fn arb_laurent(
    vars: usize,
    exponents: std::ops::RangeInclusive<i64>,
    max_terms: usize,
) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(
        (prop::collection::vec(exponents, vars), -9i64..=9),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        terms
            .into_iter()
            .fold(LaurentPoly::zero(vars), |acc, (e, c)| {
                acc.add(&LaurentPoly::monomial(vars, &e, c))
            })
    })
}

/// A unit ±t^a of the Laurent ring.
pub fn arb_laurent_unit(vars: usize) -> impl Strategy<Value = LaurentPoly> {
    (
        any::<bool>(),
        prop::collection::vec(-3i64..=3, vars),
    )
        .prop_map(move |(negate, exps)| {
            LaurentPoly::monomial(vars, &exps, if negate { -1 } else { 1 })
        })
}
