//! Finite multigraphs: parallel edges and loops allowed, vertices indexed
//! from 0, each edge carrying a fixed orientation (tail, head). The
//! orientation is bookkeeping for voltages and cycle signs; degrees,
//! Laplacians and tree counts are those of the underlying undirected graph.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::matrix::IntMatrix;
use crate::exact::modp::{det_exact_crt, sparse_rows_of};
use crate::exact::ring::det_fraction_free;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

/// A rooted spanning tree plus the leftover edges, in deterministic BFS
/// order (edges scanned by index). The fundamental cycles are one per
/// non-tree edge: follow tree paths to the root and close up through the
/// edge.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    /// Vertices in the order BFS reached them; starts with the root 0.
    pub order: Vec<usize>,
    /// For each vertex: the edge that discovered it and whether it was
    /// traversed tail->head. `None` exactly for the root.
    pub parent_edge: Vec<Option<(usize, bool)>>,
    /// Edges outside the tree (loops included), by index.
    pub non_tree_edges: Vec<usize>,
}

/// Past this order, spanning-tree counts switch from fraction-free
/// elimination to Chinese-remainder determinants; both are exact, the
/// latter stays fast when covers grow into the thousands of vertices.
const DENSE_DET_MAX_VERTICES: usize = 64;

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        for (i, &(a, b)) in edges.iter().enumerate() {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        edge_index: i,
                        vertex: v + 1,
                        vertex_count,
                    });
                }
            }
        }
        Ok(Multigraph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree in the undirected sense; a loop contributes 2.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.vertex_count)
            .map(|v| self.degree(v))
            .min()
            .unwrap_or(0)
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v && b == v).count()
    }

    /// Number of edges between two distinct vertices.
    pub fn multiplicity(&self, v: usize, w: usize) -> usize {
        assert_ne!(v, w, "use loops_at for loop counts");
        self.edges
            .iter()
            .filter(|&&(a, b)| (a, b) == (v, w) || (a, b) == (w, v))
            .count()
    }

    /// Graph Laplacian D - A. Loops add 2 to both the degree and the
    /// adjacency diagonal, so they cancel; every row sums to zero.
    pub fn laplacian(&self) -> IntMatrix {
        let n = self.vertex_count;
        let mut m = IntMatrix::zeros(n, n);
        for &(a, b) in &self.edges {
            if a == b {
                continue;
            }
            m[(a, a)] += BigInt::one();
            m[(b, b)] += BigInt::one();
            m[(a, b)] -= BigInt::one();
            m[(b, a)] -= BigInt::one();
        }
        m
    }

    /// Laplacian with the row and column of `base` removed. Its Smith
    /// normal form presents the Jacobian; its determinant counts spanning
    /// trees.
    pub fn reduced_laplacian(&self, base: usize) -> IntMatrix {
        assert!(base < self.vertex_count);
        self.laplacian().minor(base, base)
    }

    /// Number of spanning trees, exactly (0 when disconnected, 1 for the
    /// one-vertex graph).
    pub fn spanning_tree_count(&self) -> BigInt {
        let reduced = self.reduced_laplacian(0);
        if reduced.rows() <= DENSE_DET_MAX_VERTICES {
            det_fraction_free(&reduced).expect("square by construction")
        } else {
            det_exact_crt(&sparse_rows_of(&reduced), reduced.rows())
        }
    }

    /// Breadth-first spanning tree from vertex 0, failing with the first
    /// unreachable vertex when the graph is disconnected.
    pub fn spanning_tree(&self) -> Result<SpanningTree> {
        let n = self.vertex_count;
        let mut parent_edge: Vec<Option<(usize, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut tree_edges = vec![false; self.edges.len()];
        seen[0] = true;
        order.push(0);
        let mut head = 0usize;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for (i, &(a, b)) in self.edges.iter().enumerate() {
                let (next, forward) = if a == v {
                    (b, true)
                } else if b == v {
                    (a, false)
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    parent_edge[next] = Some((i, forward));
                    tree_edges[i] = true;
                    order.push(next);
                }
            }
        }
        if order.len() < n {
            let unreached = seen.iter().position(|&s| !s).expect("missing vertex");
            return Err(Error::Disconnected {
                unreached: unreached + 1,
            });
        }
        let non_tree_edges = (0..self.edges.len())
            .filter(|&i| !tree_edges[i])
            .collect();
        Ok(SpanningTree {
            order,
            parent_edge,
            non_tree_edges,
        })
    }

    pub fn is_connected(&self) -> bool {
        self.spanning_tree().is_ok()
    }

    /// Connected-component label per vertex, numbered 0.. in order of first
    /// appearance.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertex_count;
        let mut label = vec![usize::MAX; n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut next_label = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next_label;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next_label;
                        queue.push(w);
                    }
                }
            }
            next_label += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().max().map_or(0, |m| m + 1)
    }

    /// Delete an edge (for deletion-contraction style recursions).
    pub fn delete_edge(&self, e: usize) -> Multigraph {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Multigraph {
            vertex_count: self.vertex_count,
            edges,
        }
    }

    /// Contract a non-loop edge: its endpoints merge, parallel copies
    /// become loops. Vertex numbering is re-packed.
    pub fn contract_edge(&self, e: usize) -> Multigraph {
        let (a, b) = self.edges[e];
        assert_ne!(a, b, "cannot contract a loop");
        let (keep, gone) = (a.min(b), a.max(b));
        let relabel = |v: usize| {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &(x, y))| (relabel(x), relabel(y)))
            .collect();
        Multigraph {
            vertex_count: self.vertex_count - 1,
            edges,
        }
    }
}
