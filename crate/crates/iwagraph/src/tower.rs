//! The tower file format: a UTF-8 JSON document describing a base graph and
//! its voltage assignment,
//!
//! ```json
//! {
//!   "p": 5,
//!   "l": 2,
//!   "vertices": 3,
//!   "edges": [
//!     [1, 2, [1, 0]],
//!     [1, 2, [0, 1]],
//!     [2, 3, [0, 0]],
//!     [3, 1, [0, 0]]
//!   ],
//!   "label": "two independent twists"
//! }
//! ```
//!
//! Vertices are 1-indexed; each edge is `[tail, head, voltage]` with the
//! voltage vector read on the tail→head orientation. The canonical
//! serialization produced by [`TowerSpec::canonical_string`] is
//! byte-deterministic (fixed key order, fixed indentation, one edge per
//! line), so files written in canonical form re-serialize bit-identically —
//! which keeps them diffable and lets round-trip checks be plain string
//! equality.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact::is_prime_u64;
use crate::multigraph::Multigraph;
use crate::voltage::{require_connected_tower, VoltageAssignment};

/// A parsed and validated tower description: the prime, the rank l of the
/// deck group Z_p^l, the base multigraph, and the voltage on every edge.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    graph: Multigraph,
    assignment: VoltageAssignment,
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTower {
    p: u64,
    l: usize,
    vertices: usize,
    edges: Vec<(usize, usize, Vec<i64>)>,
    #[serde(default)]
    label: Option<String>,
}

impl TowerSpec {
    /// Assemble a spec from already-built parts, re-checking that they fit
    /// together. The tower's connectivity is not checked here; parsing
    /// entry points decide that per their own policy.
    pub fn new(
        graph: Multigraph,
        assignment: VoltageAssignment,
        label: Option<String>,
    ) -> Result<Self> {
        assignment.check_graph(&graph)?;
        Ok(TowerSpec {
            graph,
            assignment,
            label,
        })
    }

    pub fn p(&self) -> u64 {
        self.assignment.p()
    }

    pub fn l(&self) -> usize {
        self.assignment.rank()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn assignment(&self) -> &VoltageAssignment {
        &self.assignment
    }

    /// The canonical byte-exact serialization: keys in the order p, l,
    /// vertices, edges, label; two-space indentation; one edge per line;
    /// the label line omitted entirely when there is none.
    pub fn canonical_string(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"p\": {},", self.p());
        let _ = writeln!(out, "  \"l\": {},", self.l());
        let _ = writeln!(out, "  \"vertices\": {},", self.graph.vertex_count());
        out.push_str("  \"edges\": [\n");
        let edge_count = self.graph.edge_count();
        for (e, &(t, h)) in self.graph.edges().iter().enumerate() {
            let volts: Vec<String> = self
                .assignment
                .voltage(e)
                .iter()
                .map(|v| v.to_string())
                .collect();
            let comma = if e + 1 < edge_count { "," } else { "" };
            let _ = writeln!(
                out,
                "    [{}, {}, [{}]]{}",
                t + 1,
                h + 1,
                volts.join(", "),
                comma
            );
        }
        let closing_comma = if self.label.is_some() { "," } else { "" };
        let _ = writeln!(out, "  ]{closing_comma}");
        if let Some(label) = &self.label {
            let quoted = serde_json::to_string(label).expect("strings always serialize");
            let _ = writeln!(out, "  \"label\": {quoted}");
        }
        out.push_str("}\n");
        out
    }
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::TowerField {
        field: field.into(),
        message: message.into(),
    }
}

/// Parse a tower document from text. Validates everything except tower
/// connectivity: the raw JSON shape (unknown keys rejected, with line and
/// column), the prime, the rank, the 1-indexed endpoints, and one voltage
/// vector of length l per edge — each failure is a distinct per-field
/// diagnostic.
pub fn parse_tower_str(text: &str) -> Result<TowerSpec> {
    let raw: RawTower = serde_json::from_str(text)?;
    if !is_prime_u64(raw.p) {
        return Err(field_err("p", format!("{} — p must be prime", raw.p)));
    }
    if raw.l == 0 {
        return Err(field_err("l", "the deck group needs rank at least 1"));
    }
    if raw.vertices == 0 {
        return Err(field_err("vertices", "a graph needs at least one vertex"));
    }
    let mut edges = Vec::with_capacity(raw.edges.len());
    let mut voltages = Vec::with_capacity(raw.edges.len());
    for (e, (tail, head, volts)) in raw.edges.into_iter().enumerate() {
        for endpoint in [tail, head] {
            if endpoint == 0 || endpoint > raw.vertices {
                return Err(field_err(
                    format!("edges[{e}]"),
                    format!(
                        "vertex index out of range: {endpoint} not in 1..={}",
                        raw.vertices
                    ),
                ));
            }
        }
        if volts.len() != raw.l {
            return Err(field_err(
                format!("edges[{e}]"),
                format!(
                    "voltage vector has {} components, expected l = {}",
                    volts.len(),
                    raw.l
                ),
            ));
        }
        edges.push((tail - 1, head - 1));
        voltages.push(volts);
    }
    let graph = Multigraph::new(raw.vertices, edges)?;
    let assignment = VoltageAssignment::new(raw.p, raw.l, voltages)?;
    TowerSpec::new(graph, assignment, raw.label)
}

/// Read and validate a tower file, requiring the tower to be connected
/// (every finite cover in one piece). Use [`parse_tower_file_relaxed`] to
/// admit disconnected towers, e.g. re-imported cover exports.
pub fn parse_tower_file(path: impl AsRef<Path>) -> Result<TowerSpec> {
    let spec = parse_tower_file_relaxed(path)?;
    require_connected_tower(&spec.graph, &spec.assignment)?;
    Ok(spec)
}

/// Read and validate a tower file without the tower-connectivity check.
pub fn parse_tower_file_relaxed(path: impl AsRef<Path>) -> Result<TowerSpec> {
    parse_tower_str(&std::fs::read_to_string(path)?)
}
