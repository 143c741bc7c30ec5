//! Undirected simple graphs with optional vertex weights.
//!
//! Vertices are 0-based. Adjacency rows are packed bitsets, so products and
//! induced subgraphs stay cheap for the few-dozen-vertex graphs used here.

mod independence;
mod products;

pub use independence::{independence_number, weighted_independence, EXACT_SOLVER_LIMIT};
pub use products::{pauli_induced_subgraph, InducedPartition};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    rows: Vec<Vec<u64>>,
    weights: Vec<f64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices with unit weights.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            rows: vec![vec![0; n.div_ceil(WORD)]; n],
            weights: vec![1.0; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("edge ({i}, {j}) out of range for {n} vertices")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            if g.has_edge(i, j) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({i}, {j})")));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    /// Cycle `C_m`; `m = 1` is a single vertex and `m = 2` a single edge.
    pub fn cycle(m: usize) -> Self {
        let mut g = Graph::empty(m);
        if m == 2 {
            g.set_edge(0, 1, true);
        } else if m >= 3 {
            for i in 0..m {
                g.set_edge(i, (i + 1) % m, true);
            }
        }
        g
    }

    pub fn complete(m: usize) -> Self {
        Graph::empty(m).complement()
    }

    pub fn path(m: usize) -> Self {
        let mut g = Graph::empty(m);
        for i in 1..m {
            g.set_edge(i - 1, i, true);
        }
        g
    }

    /// Same graph with the given weights; every weight must be finite and ≥ 0.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        check_weights(self.n, &weights)?;
        self.weights = weights;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (self.rows[i][j / WORD] >> (j % WORD)) & 1 == 1
    }

    pub(crate) fn set_edge(&mut self, i: usize, j: usize, on: bool) {
        debug_assert!(i != j);
        for (a, b) in [(i, j), (j, i)] {
            if on {
                self.rows[a][b / WORD] |= 1 << (b % WORD);
            } else {
                self.rows[a][b / WORD] &= !(1 << (b % WORD));
            }
        }
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(i, j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.rows[i].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges `(i, j)` with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// Adjacency row of `i` as a mask; requires `n ≤ 64`.
    pub(crate) fn row_mask(&self, i: usize) -> u64 {
        debug_assert!(self.n <= WORD);
        self.rows[i].first().copied().unwrap_or(0)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        g.weights = self.weights.clone();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    g.set_edge(i, j, true);
                }
            }
        }
        g
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        g.weights = vertices.iter().map(|&v| self.weights[v]).collect();
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(a, b, true);
                }
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Vertex order around the cycle if the graph is a single cycle of length ≥ 3.
    pub fn cycle_order(&self) -> Option<Vec<usize>> {
        if self.n < 3 || (0..self.n).any(|i| self.degree(i) != 2) || !self.is_connected() {
            return None;
        }
        let mut order = vec![0];
        let mut prev = usize::MAX;
        let mut cur = 0;
        loop {
            let next = self.neighbors(cur).find(|&v| v != prev)?;
            if next == 0 {
                break;
            }
            order.push(next);
            prev = cur;
            cur = next;
        }
        (order.len() == self.n).then_some(order)
    }

    /// Whether `perm[i]` maps this graph's adjacency onto `other`'s.
    pub fn is_isomorphic_under(&self, other: &Graph, perm: &[usize]) -> bool {
        self.n == other.n
            && perm.len() == self.n
            && (0..self.n).all(|i| (i + 1..self.n).all(|j| self.has_edge(i, j) == other.has_edge(perm[i], perm[j])))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: GraphJson = serde_json::from_str(text)?;
        g.try_into()
    }
}

fn check_weights(n: usize, w: &[f64]) -> Result<()> {
    if w.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: w.len(),
        });
    }
    for (index, &value) in w.iter().enumerate() {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    Ok(())
}

/// Serialized form: `{"n": .., "edges": [[i, j], ..], "weights": [..]?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            weights: (!g.is_unit_weighted()).then(|| g.weights.clone()),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edges(j.n, &edges)?;
        match j.weights {
            Some(w) => g.with_weights(w),
            None => Ok(g),
        }
    }
}

/// `G₁ + G₂` with every cross pair adjacent.
pub fn join(g1: &Graph, g2: &Graph) -> Graph {
    let mut g = disjoint_union(g1, g2);
    for i in 0..g1.n {
        for j in 0..g2.n {
            g.set_edge(i, g1.n + j, true);
        }
    }
    g
}

pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
    let mut g = Graph::empty(g1.n + g2.n);
    for (i, j) in g1.edges() {
        g.set_edge(i, j, true);
    }
    for (i, j) in g2.edges() {
        g.set_edge(g1.n + i, g1.n + j, true);
    }
    g.weights = g1.weights.iter().chain(&g2.weights).copied().collect();
    g
}

/// `G₁[G₂]`: `(i₁,j₁) ∼ (i₂,j₂)` iff `i₁ ∼ i₂`, or `i₁ = i₂` and `j₁ ∼ j₂`.
/// Vertex `(i, j)` has index `i·|G₂| + j`; weights multiply.
pub fn lexicographic(g1: &Graph, g2: &Graph) -> Graph {
    let m = g2.n;
    let mut g = Graph::empty(g1.n * m);
    for a in 0..g.n {
        for b in a + 1..g.n {
            let (i1, j1, i2, j2) = (a / m, a % m, b / m, b % m);
            if g1.has_edge(i1, i2) || (i1 == i2 && g2.has_edge(j1, j2)) {
                g.set_edge(a, b, true);
            }
        }
    }
    g.weights = (0..g.n).map(|a| g1.weights[a / m] * g2.weights[a % m]).collect();
    g
}

/// XOR product: adjacent iff exactly one coordinate pair is adjacent.
pub fn xor_product(g1: &Graph, g2: &Graph) -> Graph {
    let m = g2.n;
    let mut g = Graph::empty(g1.n * m);
    for a in 0..g.n {
        for b in a + 1..g.n {
            let (i1, j1, i2, j2) = (a / m, a % m, b / m, b % m);
            let e1 = i1 != i2 && g1.has_edge(i1, i2);
            let e2 = j1 != j2 && g2.has_edge(j1, j2);
            if e1 != e2 {
                g.set_edge(a, b, true);
            }
        }
    }
    g.weights = (0..g.n).map(|a| g1.weights[a / m] * g2.weights[a % m]).collect();
    g
}
