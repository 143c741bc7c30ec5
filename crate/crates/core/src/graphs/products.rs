use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Classes of the remaining vertices relative to a chosen edge `(i₀, j₀)`.
///
/// `v0`: adjacent to neither endpoint; `v1`: to `j₀` only; `v2`: to both;
/// `v3`: to `i₀` only. Vertex ids refer to the parent graph.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InducedPartition {
    pub v0: Vec<usize>,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
}

impl InducedPartition {
    /// Class index 0..=3 of `v`, if `v` is not an endpoint.
    pub fn class_of(&self, v: usize) -> Option<usize> {
        [&self.v0, &self.v1, &self.v2, &self.v3]
            .iter()
            .position(|c| c.contains(&v))
    }
}

/// Pauli-`(i₀, j₀)`-induced subgraph.
///
/// Returns the subgraph on every vertex except `i₀, j₀` (in increasing
/// order, listed in the third component as parent ids) and the partition.
/// Adjacency is flipped exactly between distinct classes among `v1..v3`.
pub fn pauli_induced_subgraph(
    g: &Graph,
    edge: (usize, usize),
) -> Result<(Graph, InducedPartition, Vec<usize>)> {
    let (i0, j0) = edge;
    if i0 >= g.n() || j0 >= g.n() || i0 == j0 || !g.has_edge(i0, j0) {
        return Err(Error::NotAnEdge(i0, j0));
    }
    let mut part = InducedPartition::default();
    let mut class = vec![usize::MAX; g.n()];
    let rest: Vec<usize> = (0..g.n()).filter(|&v| v != i0 && v != j0).collect();
    for &v in &rest {
        let k = match (g.has_edge(v, i0), g.has_edge(v, j0)) {
            (false, false) => 0,
            (false, true) => 1,
            (true, true) => 2,
            (true, false) => 3,
        };
        class[v] = k;
        [&mut part.v0, &mut part.v1, &mut part.v2, &mut part.v3][k].push(v);
    }
    let mut sub = g.induced_subgraph(&rest);
    for (a, &u) in rest.iter().enumerate() {
        for (b, &v) in rest.iter().enumerate().skip(a + 1) {
            let (ku, kv) = (class[u], class[v]);
            if ku != 0 && kv != 0 && ku != kv {
                sub.set_edge(a, b, !g.has_edge(u, v));
            }
        }
    }
    Ok((sub, part, rest))
}
