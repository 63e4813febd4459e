use thiserror::Error;

/// Everything that can go wrong while building towers or running the exact
/// linear algebra. Variants carry enough context to print a useful one-line
/// diagnostic; the CLI maps them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("edge {edge_index} endpoint {vertex} out of range 1..={vertex_count}")]
    VertexOutOfRange {
        edge_index: usize,
        vertex: usize,
        vertex_count: usize,
    },

    #[error("graph is disconnected (vertex {unreached} unreachable from vertex 1)")]
    Disconnected { unreached: usize },

    #[error("tower is disconnected: character {witness:?} (mod p) kills every cycle voltage")]
    DisconnectedTower { witness: Vec<u64> },

    #[error("{value} is not prime")]
    NotPrime { value: u64 },

    #[error("voltage on edge {edge_index} has {got} components, expected {expected}")]
    VoltageLength {
        edge_index: usize,
        got: usize,
        expected: usize,
    },

    #[error("assignment has {got} voltage vectors but the graph has {expected} edges")]
    VoltageCount { got: usize, expected: usize },

    #[error("consistency check failed: {message}")]
    SelfCheck { message: String },

    #[error("operation needs {got} vertices but the budget allows {limit} ({context})")]
    BudgetExceeded {
        got: usize,
        limit: usize,
        context: &'static str,
    },

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("cyclotomic operands mix primes {left} and {right}")]
    MixedPrimes { left: u64, right: u64 },

    #[error("element is zero; valuation undefined")]
    ZeroValuation,

    #[error("voltage Laplacian determinant vanishes at a nontrivial character of level {level}; cover is disconnected")]
    ZeroDetAtRoot { level: u32 },

    #[error("determinant does not vanish at the trivial character; expected an augmentation zero")]
    NonzeroAtOne,

    #[error("determinant is not divisible by T = t-1; cannot form the characteristic series")]
    NotDivisibleByT,

    #[error("reduction mod {p} is zero; no distinguished part to factor")]
    ZeroModP { p: u64 },

    #[error("direction ({a}, {b}) is not primitive")]
    NotPrimitive { a: i64, b: i64 },

    #[error("quotient by the ideal has free rank; the group is infinite")]
    InfiniteQuotient,

    #[error("invariants are defined for l = {expected} but the tower has l = {got}")]
    WrongArity { expected: usize, got: usize },

    #[error("growth table has {rows} usable rows but the fit needs at least {needed}")]
    NotEnoughRows { rows: usize, needed: usize },

    #[error("no tail of the growth table fits the model exactly; residuals of the last window: {residuals:?}")]
    FitFailed { residuals: Vec<String> },

    #[error("vertex {vertex} has valency 1; the zeta identity needs minimum valency 2")]
    ValencyOne { vertex: usize },

    #[error("tower file field `{field}`: {message}")]
    TowerField { field: String, message: String },

    #[error("tower file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
