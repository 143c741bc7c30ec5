//! Operator representations of graphs: frustration graphs, the standard,
//! edge and complete SAURs, SAURAs from orthogonal representations,
//! independent-set witness states and the `Z(w)` scaling gadget.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{pauli_induced_subgraph, Graph};
use crate::numerics::{c, kron, rng_from_seed, DensityState, OperatorMatrix, PureState, C64};
use rand::Rng as _;
use crate::pauli::{anticommuting_family, PauliString, PauliSumOperator, DENSE_GUARD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepresentationKind {
    /// Hermitian unitaries; anticommute on edges, commute on non-edges.
    Saur,
    /// Hermitian unitaries; anticommute on edges.
    Saura,
    /// Hermitian contractions; anticommute on edges.
    Sara,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl RepresentationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        RepresentationReport {
            pass: violations.is_empty(),
            violations,
        }
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// A list of Pauli strings claimed to represent `graph`.
#[derive(Debug, Clone)]
pub struct Representation {
    pub strings: Vec<PauliString>,
    pub graph: Graph,
    pub kind: RepresentationKind,
}

impl Representation {
    pub fn verify(&self) -> Result<RepresentationReport> {
        verify_strings(&self.strings, &self.graph, self.kind)
    }
}

fn check_uniform(strings: &[PauliString]) -> Result<usize> {
    let n = strings.first().map_or(0, PauliString::n_qubits);
    for s in strings {
        if s.n_qubits() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: s.n_qubits(),
            });
        }
    }
    Ok(n)
}

/// Anticommutation graph of `strings`.
pub fn frustration_graph(strings: &[PauliString]) -> Result<Graph> {
    check_uniform(strings)?;
    let mut g = Graph::empty(strings.len());
    for i in 0..strings.len() {
        for j in i + 1..strings.len() {
            if !strings[i].commutes_unchecked(&strings[j]) {
                g.set_edge(i, j, true);
            }
        }
    }
    Ok(g)
}

/// Standard SAUR of `g`.
///
/// Edges in `edge_sequence` use the vertex labels of `g`; each one is taken
/// as `(i₀, j₀)` at its recursion step. Once the sequence runs out the
/// lexicographically smallest remaining edge is used.
pub fn standard_saur(g: &Graph, edge_sequence: Option<&[(usize, usize)]>) -> Result<Vec<PauliString>> {
    let labels: Vec<usize> = (0..g.n()).collect();
    let seq = edge_sequence.unwrap_or(&[]);
    let mut pos = 0;
    let mut choose = |sub: &Graph, labels: &[usize]| -> Result<(usize, usize)> {
        match seq.get(pos) {
            Some(&(a, b)) => {
                pos += 1;
                let local = |v: usize| labels.iter().position(|&l| l == v);
                match (local(a), local(b)) {
                    (Some(i), Some(j)) if i != j && sub.has_edge(i, j) => Ok((i, j)),
                    _ => Err(Error::NotAnEdge(a, b)),
                }
            }
            None => Ok(sub.edges()[0]),
        }
    };
    let out = saur_rec(g, &labels, &mut choose)?;
    if pos < seq.len() {
        return Err(Error::InvalidArgument(format!(
            "edge sequence has {} unused edge(s) after the graph became edgeless",
            seq.len() - pos
        )));
    }
    Ok(out)
}

/// Standard SAUR with the edge and its orientation drawn uniformly at each
/// recursion step. Different seeds can give different qubit counts.
pub fn random_standard_saur(g: &Graph, seed: u64) -> Result<Vec<PauliString>> {
    let mut rng = rng_from_seed(seed);
    let labels: Vec<usize> = (0..g.n()).collect();
    let mut choose = |sub: &Graph, _: &[usize]| -> Result<(usize, usize)> {
        let edges = sub.edges();
        let (i, j) = edges[rng.random_range(0..edges.len())];
        Ok(if rng.random_bool(0.5) { (i, j) } else { (j, i) })
    };
    saur_rec(g, &labels, &mut choose)
}

type EdgeChooser<'a> = dyn FnMut(&Graph, &[usize]) -> Result<(usize, usize)> + 'a;

fn saur_rec(g: &Graph, labels: &[usize], choose: &mut EdgeChooser<'_>) -> Result<Vec<PauliString>> {
    if g.edge_count() == 0 {
        return Ok(vec![PauliString::identity(0); g.n()]);
    }
    let (i0, j0) = choose(g, labels)?;
    let (sub, _, verts) = pauli_induced_subgraph(g, (i0, j0))?;
    let sub_labels: Vec<usize> = verts.iter().map(|&v| labels[v]).collect();
    let inner = saur_rec(&sub, &sub_labels, choose)?;
    let m = inner.first().map_or(0, PauliString::n_qubits);
    let head = |ch: char| PauliString::single(1, 0, ch).expect("valid factor");
    let mut out = vec![PauliString::identity(m + 1); g.n()];
    out[i0] = head('X').tensor(&PauliString::identity(m));
    out[j0] = head('Z').tensor(&PauliString::identity(m));
    for (k, &v) in verts.iter().enumerate() {
        let sigma = match (g.has_edge(v, i0), g.has_edge(v, j0)) {
            (false, false) => 'I',
            (false, true) => 'X',
            (true, true) => 'Y',
            (true, false) => 'Z',
        };
        out[v] = head(sigma).tensor(&inner[k]);
    }
    Ok(out)
}

/// Edge SAUR: one qubit per edge in sorted order.
///
/// `orientation` lists every edge exactly once as `(tail, head)`; the tail
/// vertex gets X and the head gets Z on that edge's qubit. Default is `i → j`
/// for `i < j`.
pub fn edge_saur(g: &Graph, orientation: Option<&[(usize, usize)]>) -> Result<Vec<PauliString>> {
    let edges = g.edges();
    let oriented: Vec<(usize, usize)> = match orientation {
        None => edges.clone(),
        Some(list) => {
            if list.len() != edges.len() {
                return Err(Error::InvalidArgument(format!(
                    "orientation lists {} edges, graph has {}",
                    list.len(),
                    edges.len()
                )));
            }
            let mut used = vec![false; edges.len()];
            let mut out = vec![(0, 0); edges.len()];
            for &(a, b) in list {
                let key = (a.min(b), a.max(b));
                let k = edges.binary_search(&key).map_err(|_| Error::NotAnEdge(a, b))?;
                if used[k] {
                    return Err(Error::InvalidArgument(format!("edge ({a}, {b}) oriented twice")));
                }
                used[k] = true;
                out[k] = (a, b);
            }
            out
        }
    };
    let m = edges.len();
    let mut out = vec![PauliString::identity(m); g.n()];
    for (q, &(tail, head)) in oriented.iter().enumerate() {
        out[tail].set_factor(q, 'X')?;
        out[head].set_factor(q, 'Z')?;
    }
    Ok(out)
}

/// Standard SAUR tensored with `Z` on auxiliary qubit `i` for vertex `i`.
pub fn complete_saur(g: &Graph) -> Result<Vec<PauliString>> {
    let base = standard_saur(g, None)?;
    let n = g.n();
    Ok(base
        .iter()
        .enumerate()
        .map(|(i, s)| s.tensor(&PauliString::single(n, i, 'Z').expect("index in range")))
        .collect())
}

fn violation(i: usize, j: usize, expected: &str, found: &str) -> Violation {
    Violation {
        i,
        j,
        expected: expected.into(),
        found: found.into(),
    }
}

/// Checks the (anti)commutation pattern of Pauli strings against `g`.
pub fn verify_strings(strings: &[PauliString], g: &Graph, kind: RepresentationKind) -> Result<RepresentationReport> {
    check_uniform(strings)?;
    if strings.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: strings.len(),
        });
    }
    let mut v = Vec::new();
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            let anti = !strings[i].commutes_unchecked(&strings[j]);
            if g.has_edge(i, j) && !anti {
                v.push(violation(i, j, "anticommute", "commute"));
            } else if !g.has_edge(i, j) && anti && kind == RepresentationKind::Saur {
                v.push(violation(i, j, "commute", "anticommute"));
            }
        }
    }
    Ok(RepresentationReport::from_violations(v))
}

/// Dense check of Hermiticity, unitarity (or contraction for SARA) and the
/// (anti)commutation pattern, all to `tol`.
pub fn verify_matrices(
    ops: &[OperatorMatrix],
    g: &Graph,
    kind: RepresentationKind,
    tol: f64,
) -> Result<RepresentationReport> {
    if ops.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: ops.len(),
        });
    }
    let dim = ops.first().map_or(0, |m| m.nrows());
    for m in ops {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: m.nrows(),
            });
        }
    }
    let id = OperatorMatrix::identity(dim, dim);
    let mut v = Vec::new();
    for (i, m) in ops.iter().enumerate() {
        if (m - m.adjoint()).norm() > tol {
            v.push(violation(i, i, "hermitian", "not hermitian"));
            continue;
        }
        match kind {
            RepresentationKind::Sara => {
                if crate::numerics::spectral_norm(m)? > 1.0 + tol {
                    v.push(violation(i, i, "contraction", "norm above 1"));
                }
            }
            _ => {
                if (m * m - &id).norm() > tol {
                    v.push(violation(i, i, "unitary", "not unitary"));
                }
            }
        }
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let ab = &ops[i] * &ops[j];
            let ba = &ops[j] * &ops[i];
            let anti = (&ab + &ba).norm() <= tol;
            let comm = (&ab - &ba).norm() <= tol;
            let found = match (anti, comm) {
                (true, true) => "both",
                (true, false) => "anticommute",
                (false, true) => "commute",
                (false, false) => "neither",
            };
            if g.has_edge(i, j) {
                if !anti {
                    v.push(violation(i, j, "anticommute", found));
                }
            } else if kind == RepresentationKind::Saur && !comm {
                v.push(violation(i, j, "commute", found));
            }
        }
    }
    Ok(RepresentationReport::from_violations(v))
}

/// Real unit vectors `vᵢ` with a handle `u`, orthogonal on the edges of some graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalRepresentation {
    pub vectors: Vec<Vec<f64>>,
    pub handle: Vec<f64>,
}

const UNIT_TOL: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl OrthogonalRepresentation {
    pub fn new(vectors: Vec<Vec<f64>>, handle: Vec<f64>) -> Result<Self> {
        let d = handle.len();
        if d == 0 {
            return Err(Error::InvalidArgument("vector dimension must be at least 1".into()));
        }
        for (index, v) in vectors.iter().chain(std::iter::once(&handle)).enumerate() {
            if v.len() != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
            let norm = dot(v, v).sqrt();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::NotNormalized { index, norm });
            }
        }
        Ok(OrthogonalRepresentation { vectors, handle })
    }

    /// The umbrella representation of the pentagon, adjacent when `|i − j| ≡ 2 (mod 5)`.
    pub fn pentagon() -> Self {
        let tau = 0.2f64.powf(0.25);
        let tau_p = (1.0 - tau * tau).sqrt();
        let vectors = (0..5)
            .map(|i| {
                let phi = 2.0 * std::f64::consts::PI * i as f64 / 5.0;
                vec![tau, tau_p * phi.cos(), tau_p * phi.sin()]
            })
            .collect();
        OrthogonalRepresentation {
            vectors,
            handle: vec![1.0, 0.0, 0.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.handle.len()
    }

    /// Whether `⟨vᵢ|vⱼ⟩ = 0` on every edge of `g`.
    pub fn is_orthogonal_for(&self, g: &Graph, tol: f64) -> bool {
        g.n() == self.vectors.len()
            && g.edges().iter().all(|&(i, j)| dot(&self.vectors[i], &self.vectors[j]).abs() <= tol)
    }

    /// `Σ wᵢ ⟨u|vᵢ⟩²`, the value this representation certifies for `ϑ(G, w)`.
    pub fn handle_value(&self, w: &[f64]) -> f64 {
        self.vectors
            .iter()
            .zip(w)
            .map(|(v, wi)| wi * dot(&self.handle, v).powi(2))
            .sum()
    }
}

/// Graph on which the pentagon representation is orthogonal.
pub fn pentagon_graph() -> Graph {
    Graph::from_edges(5, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]).expect("valid edges")
}

/// `Sᵢ = Σ_k v_{ik} A_k` with `{A_k}` the anticommuting family of size `d`.
pub fn saura_from_or(or: &OrthogonalRepresentation) -> Result<Vec<OperatorMatrix>> {
    let or = OrthogonalRepresentation::new(or.vectors.clone(), or.handle.clone())?;
    let family: Vec<OperatorMatrix> = anticommuting_family(or.dim())
        .iter()
        .map(PauliString::to_matrix)
        .collect::<Result<_>>()?;
    let dim = family[0].nrows();
    Ok(or
        .vectors
        .iter()
        .map(|v| {
            v.iter()
                .zip(&family)
                .fold(OperatorMatrix::zeros(dim, dim), |acc, (&x, a)| acc + a * c(x))
        })
        .collect())
}

/// Common eigenstate of the pairwise-commuting strings indexed by `set`.
///
/// Starting from `|0…0⟩`, each string's `+1` projector is applied, falling
/// back to `−1` when the projection vanishes. Every listed string has
/// `⟨Sᵢ⟩ = ±1` on the result.
pub fn independent_set_state(strings: &[PauliString], set: &[usize]) -> Result<PureState> {
    let n = check_uniform(strings)?;
    for &i in set {
        if i >= strings.len() {
            return Err(Error::InvalidArgument(format!("index {i} out of range")));
        }
    }
    for (a, &i) in set.iter().enumerate() {
        for &j in &set[a + 1..] {
            if !strings[i].commutes_unchecked(&strings[j]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let dim = 1usize << n;
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[0] = c(1.0);
    for &i in set {
        let op = PauliSumOperator::new(vec![(1.0, strings[i].clone())])?;
        let sv = op.matvec(&v)?;
        let plus: Vec<C64> = v.iter().zip(&sv).map(|(a, b)| (a + b) * 0.5).collect();
        let norm: f64 = plus.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v = if norm > 1e-8 {
            plus
        } else {
            v.iter().zip(&sv).map(|(a, b)| (a - b) * 0.5).collect()
        };
    }
    PureState::normalized(DVector::from_vec(v))
}

/// `Z(w) = wX + √(1−w²)Z`.
pub fn z_gadget(w: f64) -> OperatorMatrix {
    let s = (1.0 - w * w).max(0.0).sqrt();
    OperatorMatrix::from_row_slice(2, 2, &[c(s), c(w), c(w), c(-s)])
}

/// Rescales expectations by `wᵢ`: returns `Pᵢ = Sᵢ ⊗ Z(wᵢ)` (on auxiliary
/// qubit `i`) and `τ = ρ ⊗ |+⟩⟨+|^⊗n`, so that `⟨Pᵢ⟩_τ = wᵢ⟨Sᵢ⟩_ρ`.
pub fn scale_gadget(
    strings: &[PauliString],
    w: &[f64],
    rho: &DensityState,
) -> Result<(Vec<OperatorMatrix>, DensityState)> {
    let n_sys = check_uniform(strings)?;
    let n = strings.len();
    if w.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: w.len(),
        });
    }
    for (index, &value) in w.iter().enumerate() {
        if !(value.abs() <= 1.0) {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    if rho.dim() != 1 << n_sys {
        return Err(Error::LengthMismatch {
            expected: 1 << n_sys,
            found: rho.dim(),
        });
    }
    if n_sys + n > DENSE_GUARD {
        return Err(Error::GuardExceeded {
            what: "qubits for the scaling gadget",
            value: n_sys + n,
            limit: DENSE_GUARD,
        });
    }
    let id2 = OperatorMatrix::identity(2, 2);
    let ops = strings
        .iter()
        .zip(w)
        .enumerate()
        .map(|(i, (s, &wi))| {
            let mut m = s.to_matrix()?;
            let zw = z_gadget(wi);
            for k in 0..n {
                m = kron(&m, if k == i { &zw } else { &id2 });
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let plus = OperatorMatrix::from_element(2, 2, c(0.5));
    let mut tau = rho.matrix().clone();
    for _ in 0..n {
        tau = kron(&tau, &plus);
    }
    Ok((ops, DensityState::new(tau)?))
}
