//! Exact arithmetic for Jacobian growth along p-power voltage covers of
//! multigraphs.
//!
//! A voltage assignment labels each oriented edge of a finite multigraph with
//! an element of `Z_p^l`; truncating the voltages mod `p^m` yields a tower of
//! Galois covers with groups `(Z/p^m)^l`. This crate computes, entirely over
//! exact integers,
//!
//! * the covers themselves ([`voltage::derived_graph`]),
//! * their Jacobians / sandpile groups by Smith normal form
//!   ([`jacobian::jacobian_of_cover`]),
//! * the p-part of the Jacobian orders analytically, as valuations of the
//!   voltage Laplacian determinant at p-power roots of unity
//!   ([`iwasawa::analytic_vp_level`]),
//! * the resulting growth invariants: `mu`, `lambda`, `nu` for one-variable
//!   towers, `m0`, `l0` and an exactly fitted growth polynomial for
//!   two-variable towers ([`iwasawa::invariants_l1`],
//!   [`iwasawa::invariants_l2`], [`iwasawa::greenberg_fit`]),
//! * zeta-function style determinant identities twisted by characters
//!   ([`ihara::interpolation_check`]), and
//! * stabilization of Iwasawa-module ranks along the tower
//!   ([`jacobian::fukuda_stabilize`]).
//!
//! The two routes to the p-part — brute-force Smith normal form of the cover
//! Laplacian versus the product of determinant valuations over orbits of
//! roots of unity — must agree on every instance; `verify` modes and the
//! acceptance test suite check this equality with no tolerances.
//!
//! # Where to start
//!
//! The `examples/` directory is the primary interface; each example is a
//! runnable tour of one capability:
//!
//! ```text
//! examples/
//!   towers_and_covers.rs       building towers, expanding covers, tree counts
//!   jacobians.rs               invariant factors and p-parts level by level
//!   determinants.rs            voltage Laplacian determinants, closed forms
//!   growth_invariants.rs       mu/lambda/nu extraction and growth tables
//!   two_variable_towers.rs     m0, l0 and exact growth-polynomial fits
//!   zeta_interpolation.rs      character-twisted zeta determinant identities
//!   rank_stabilization.rs      quotient ranks J/(I J) stabilizing up a tower
//! ```
//!
//! Run one with `cargo run --release --example determinants`.
//!
//! A thin command-line binary (`iwagraph`) exposes the same operations over
//! JSON tower files; see the README for the file format and subcommands.
//!
//! # Module map
//!
//! * [`multigraph`] — multigraphs, Laplacians, spanning-tree counts, cycle
//!   bases,
//! * [`exact`] — big-integer matrices, Smith normal form (exact and mod
//!   `p^K`), fraction-free determinants, Laurent polynomials, cyclotomic
//!   integers and their valuations,
//! * [`voltage`] — voltage assignments, derived graphs, tower connectivity,
//! * [`jacobian`] — Jacobian computations and ideal-quotient ranks,
//! * [`iwasawa`] — voltage Laplacians, characteristic series, analytic
//!   p-parts, growth invariants,
//! * [`ihara`] — characters, twisted adjacency, zeta determinant
//!   interpolation,
//! * [`tower`] — the JSON tower-file format,
//! * [`corpus`] — built-in example towers (cycles with a multi-edge) and the
//!   golden verification suite.

pub mod error;
pub mod exact;
pub mod ihara;
pub mod cli;
pub mod corpus;
pub mod iwasawa;
pub mod tower;
pub mod jacobian;
pub mod multigraph;
pub mod voltage;

pub use error::{Error, Result};
pub use exact::{ElementaryDivisors, IntMatrix, LaurentPoly};
pub use corpus::{
    closed_form_cycle_det, corpus, corpus_max_level, cycle_with_multiedge, families_at,
    golden_suite, multiedge_voltage_sums, twists_content, CorpusTower, CycleVoltages, GoldenRow,
    CORPUS_VERTEX_CAP,
};
pub use ihara::{
    characters, ihara_poly, ihara_poly_eval, interpolation_check, twisted_adjacency,
    CharacterCheck, CharacterPsi, InterpolationReport,
};
pub use iwasawa::{
    analytic_vp_level, char_det, char_t_polynomial, greenberg_fit, growth_table, invariants_l1,
    invariants_l2, nu_from_growth, tree_identity_check, voltage_laplacian, AnalyticVp, GrowthFit,
    GrowthMethod, GrowthRow, InvariantsL1, InvariantsL2,
};
pub use tower::{parse_tower_file, parse_tower_file_relaxed, parse_tower_str, TowerSpec};
pub use jacobian::{jacobian_of_cover, ComputeBudget, JacobianData, RankIdealSpec};
pub use multigraph::Multigraph;
pub use voltage::{derived_graph, DerivedGraph, TowerConnectivity, VoltageAssignment};
