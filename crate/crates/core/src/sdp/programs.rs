use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{embed_entries, solve_sdp, SdpConstraint, SdpEntry, SdpOptions, SdpProblem, SdpSolution, SdpStatus};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numerics::{c, kron, OperatorMatrix, C64};
use crate::pauli::parse_pauli;
use crate::seesaw::Operators;

/// Largest graph accepted by [`lovasz_theta`].
pub const THETA_GUARD: usize = 64;

/// Largest number of free real parameters in the two-copy programs; the
/// Schur complement is a dense square matrix of this order.
pub const PPT_PARAMETER_GUARD: usize = 4096;

const PPT_DIM_GUARD: usize = 16;
const THREEHALF_DIM_GUARD: usize = 6;

#[derive(Debug, Clone)]
pub struct ThetaResult {
    /// `max(primal, dual)`, an upper bound on `ϑ(G, w)` up to solver tolerance.
    pub value: f64,
    pub primal: f64,
    pub dual: f64,
    /// Optimal `X` of the trace-normalized program.
    pub certificate: DMatrix<f64>,
    pub status: SdpStatus,
    pub iterations: usize,
}

/// Weighted Lovász number:
/// `max Σᵢⱼ √(wᵢwⱼ) Xᵢⱼ s.t. tr X = 1, Xᵢⱼ = 0 (i ∼ j), X ⪰ 0`.
pub fn lovasz_theta(g: &Graph, w: &[f64], opts: &SdpOptions) -> Result<ThetaResult> {
    let n = g.n();
    if n > THETA_GUARD {
        return Err(Error::GuardExceeded {
            what: "vertices for the theta program",
            value: n,
            limit: THETA_GUARD,
        });
    }
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
    if n == 0 {
        return Ok(ThetaResult {
            value: 0.0,
            primal: 0.0,
            dual: 0.0,
            certificate: DMatrix::zeros(0, 0),
            status: SdpStatus::Optimal,
            iterations: 0,
        });
    }
    let e = |i, j, value| SdpEntry { block: 0, i, j, value };
    let mut objective = Vec::new();
    for i in 0..n {
        for j in i..n {
            let v = (w[i] * w[j]).sqrt();
            if v != 0.0 {
                objective.push(e(i, j, v));
            }
        }
    }
    let mut constraints = vec![SdpConstraint {
        entries: (0..n).map(|i| e(i, i, 1.0)).collect(),
        rhs: 1.0,
    }];
    for (i, j) in g.edges() {
        constraints.push(SdpConstraint {
            entries: vec![e(i, j, 0.5)],
            rhs: 0.0,
        });
    }
    let problem = SdpProblem {
        blocks: vec![n],
        objective,
        constraints,
    };
    let s = solve_sdp(&problem, opts)?;
    Ok(ThetaResult {
        value: s.primal_value.max(s.dual_value),
        primal: s.primal_value,
        dual: s.dual_value,
        certificate: s.x[0].clone(),
        status: s.status,
        iterations: s.iterations,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QUpperResult {
    /// Upper bound on `Q`: the relaxation optimum bounded through the primal
    /// multipliers, taking the larger side when the solver stops early.
    pub value: f64,
    /// Objective at the dual iterate, a feasible point of the relaxation.
    pub relaxation_point: f64,
    pub status: SdpStatus,
    pub iterations: usize,
    pub gap: f64,
    /// Dimension of the symmetric subspace carrying the variable.
    pub variable_dim: usize,
}

/// Orthonormal basis of the symmetric subspace of `(Cᵈ)^{⊗k}` as sparse
/// columns `(index, amplitude)`, ordered by sorted multi-index.
fn symmetric_basis(d: usize, k: usize) -> Vec<Vec<(usize, f64)>> {
    fn multisets(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..d {
            cur.push(a);
            multisets(d, k, a, cur, out);
            cur.pop();
        }
    }
    fn perms(v: &[usize]) -> Vec<Vec<usize>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            if v[..i].contains(&v[i]) {
                continue;
            }
            let mut rest = v.to_vec();
            let head = rest.remove(i);
            for mut p in perms(&rest) {
                p.insert(0, head);
                out.push(p);
            }
        }
        out
    }
    let mut sets = Vec::new();
    multisets(d, k, 0, &mut Vec::new(), &mut sets);
    sets.iter()
        .map(|m| {
            let ps = perms(m);
            let amp = 1.0 / (ps.len() as f64).sqrt();
            ps.iter()
                .map(|p| (p.iter().fold(0, |acc, &a| acc * d + a), amp))
                .collect()
        })
        .collect()
}

/// Two-copy image `tr_{rest}(|l_a⟩⟨l_b|)` on `d² × d²`, as sparse entries.
fn two_copy_image(lift: &[Vec<(usize, f64)>], d: usize, k: usize, a: usize, b: usize) -> Vec<(usize, usize, f64)> {
    let tail = d.pow(k as u32 - 2);
    let mut out = Vec::new();
    for &(ia, va) in &lift[a] {
        for &(ib, vb) in &lift[b] {
            if ia % tail == ib % tail {
                out.push((ia / tail, ib / tail, va * vb));
            }
        }
    }
    out
}

fn partial_transpose_index(r: usize, s: usize, d: usize) -> (usize, usize) {
    let (i1, i2, j1, j2) = (r / d, r % d, s / d, s % d);
    (i1 * d + j2, j1 * d + i2)
}

/// Data of a Hermitian linear matrix inequality over operators `V` on the
/// symmetric subspace with `tr V = 1`.
struct TwoCopyLmi {
    d: usize,
    k: usize,
    lift: Vec<Vec<(usize, f64)>>,
    /// `Ω` with objective `tr(ΩV)`.
    omega: OperatorMatrix,
    cuts: Vec<OperatorMatrix>,
}

impl TwoCopyLmi {
    /// `L† (A ⊗ 𝟙) L` for an operator `A` on two copies.
    fn pull_back(&self, a: &OperatorMatrix) -> OperatorMatrix {
        let dim = self.lift.len();
        let mut out = OperatorMatrix::zeros(dim, dim);
        for x in 0..dim {
            for y in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for (r, s, v) in two_copy_image(&self.lift, self.d, self.k, x, y) {
                    acc += a[(s, r)] * v;
                }
                // tr(A |l_x⟩⟨l_y|) is the coefficient of V_{xy}
                out[(y, x)] = acc;
            }
        }
        out
    }

    /// Images of `E_ab` in every block, keyed by block.
    fn unit_images(&self, cut_omegas: &[OperatorMatrix], a: usize, b: usize) -> Vec<Vec<(usize, usize, C64)>> {
        let d2 = self.d * self.d;
        let mut blocks = vec![vec![(a, b, c(1.0))]];
        let ppt: Vec<(usize, usize, C64)> = two_copy_image(&self.lift, self.d, self.k, a, b)
            .into_iter()
            .map(|(r, s, v)| {
                let (r2, s2) = partial_transpose_index(r, s, self.d);
                debug_assert!(r2 < d2 && s2 < d2);
                (r2, s2, c(v))
            })
            .collect();
        blocks.push(ppt);
        for om in cut_omegas {
            blocks.push(vec![(0, 0, om[(b, a)])]);
        }
        blocks
    }

    fn solve(&self, opts: &SdpOptions) -> Result<QUpperResult> {
        let dim = self.lift.len();
        let d2 = self.d * self.d;
        let params = dim * dim - 1;
        if params > PPT_PARAMETER_GUARD {
            return Err(Error::GuardExceeded {
                what: "free parameters of the two-copy program",
                value: params,
                limit: PPT_PARAMETER_GUARD,
            });
        }
        let cut_omegas: Vec<OperatorMatrix> = self.cuts.iter().map(|a| self.pull_back(a)).collect();
        let sizes: Vec<usize> = std::iter::once(dim)
            .chain(std::iter::once(d2))
            .chain(cut_omegas.iter().map(|_| 1))
            .collect();

        // basis of traceless Hermitian operators plus the offset E₀₀
        let mut basis: Vec<Vec<(usize, usize, C64)>> = Vec::with_capacity(params);
        for x in 0..dim {
            for y in x + 1..dim {
                basis.push(vec![(x, y, c(1.0)), (y, x, c(1.0))]);
                basis.push(vec![(x, y, C64::new(0.0, 1.0)), (y, x, C64::new(0.0, -1.0))]);
            }
        }
        for x in 1..dim {
            basis.push(vec![(x, x, c(1.0)), (0, 0, c(-1.0))]);
        }
        let offset = vec![(0usize, 0usize, c(1.0))];

        let image = |combo: &[(usize, usize, C64)]| -> Vec<Vec<SdpEntry>> {
            let mut acc: Vec<HashMap<(usize, usize), C64>> = vec![HashMap::new(); sizes.len()];
            for &(a, b, coef) in combo {
                for (blk, list) in self.unit_images(&cut_omegas, a, b).into_iter().enumerate() {
                    for (i, j, v) in list {
                        *acc[blk].entry((i, j)).or_insert(C64::new(0.0, 0.0)) += coef * v;
                    }
                }
            }
            acc.into_iter()
                .enumerate()
                .map(|(blk, map)| {
                    let mut entries: Vec<(usize, usize, C64)> = map
                        .into_iter()
                        .filter(|(_, v)| v.norm() > 1e-15)
                        .map(|((i, j), v)| (i, j, v))
                        .collect();
                    entries.sort_by_key(|e| (e.0, e.1));
                    embed_entries(blk, sizes[blk], &entries, 1.0)
                })
                .collect()
        };
        let objective_of = |combo: &[(usize, usize, C64)]| -> f64 {
            combo.iter().map(|&(a, b, coef)| (coef * self.omega[(b, a)]).re).sum()
        };

        let constant = objective_of(&offset);
        let objective: Vec<SdpEntry> = image(&offset)
            .into_iter()
            .flatten()
            .map(|e| SdpEntry { value: -e.value, ..e })
            .collect();
        let constraints: Vec<SdpConstraint> = basis
            .iter()
            .map(|combo| SdpConstraint {
                entries: image(combo).into_iter().flatten().collect(),
                rhs: -objective_of(combo),
            })
            .collect();
        let problem = SdpProblem {
            blocks: sizes.iter().map(|n| 2 * n).collect(),
            objective,
            constraints,
        };
        let s: SdpSolution = solve_sdp(&problem, opts)?;
        let upper = constant - s.primal_value;
        let point = constant - s.dual_value;
        Ok(QUpperResult {
            value: upper.max(point),
            relaxation_point: point,
            status: s.status,
            iterations: s.iterations,
            gap: s.gap,
            variable_dim: dim,
        })
    }
}

fn operator_data(ops: &Operators, w: &[f64]) -> Result<(usize, Vec<OperatorMatrix>)> {
    if w.len() != ops.len() {
        return Err(Error::LengthMismatch {
            expected: ops.len(),
            found: w.len(),
        });
    }
    for (index, &value) in w.iter().enumerate() {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    let mats: Vec<OperatorMatrix> = match ops {
        Operators::Pauli(s) => {
            if let Some(n) = s.iter().map(|p| p.n_qubits()).max() {
                if n > 4 {
                    return Err(Error::GuardExceeded {
                        what: "operator dimension for two-copy programs",
                        value: 1 << n,
                        limit: PPT_DIM_GUARD,
                    });
                }
            }
            s.iter().map(|p| p.to_matrix()).collect::<Result<_>>()?
        }
        Operators::Dense(m) => m.clone(),
    };
    let d = mats.first().map(|m| m.nrows()).ok_or_else(|| Error::InvalidArgument("no observables".into()))?;
    if mats.iter().any(|m| m.nrows() != d || m.ncols() != d) {
        return Err(Error::InvalidArgument("observables must share one square dimension".into()));
    }
    Ok((d, mats))
}

fn two_copy_objective(mats: &[OperatorMatrix], w: &[f64], d: usize) -> OperatorMatrix {
    mats.iter()
        .zip(w)
        .fold(OperatorMatrix::zeros(d * d, d * d), |acc, (s, &wi)| acc + kron(s, s) * c(wi))
}

/// PPT relaxation: `max tr(γ Σ wᵢ Sᵢ⊗Sᵢ)` over swap-symmetric `γ ⪰ 0` with
/// `tr γ = 1` and `γ^{T₂} ⪰ 0`, plus optional cuts `tr(Aγ) ≥ 0`.
pub fn q_upper_ppt(ops: &Operators, w: &[f64], cuts: &[OperatorMatrix], opts: &SdpOptions) -> Result<QUpperResult> {
    let (d, mats) = operator_data(ops, w)?;
    if d > PPT_DIM_GUARD {
        return Err(Error::GuardExceeded {
            what: "operator dimension for the PPT program",
            value: d,
            limit: PPT_DIM_GUARD,
        });
    }
    for a in cuts {
        if a.nrows() != d * d || a.ncols() != d * d {
            return Err(Error::LengthMismatch {
                expected: d * d,
                found: a.nrows(),
            });
        }
    }
    let lift = symmetric_basis(d, 2);
    let mut lmi = TwoCopyLmi {
        d,
        k: 2,
        lift,
        omega: OperatorMatrix::zeros(0, 0),
        cuts: cuts.to_vec(),
    };
    lmi.omega = lmi.pull_back(&two_copy_objective(&mats, w, d));
    lmi.solve(opts)
}

/// Three-copy tightening: `γ = tr₃ τ` with `τ` on the symmetric subspace of
/// three copies, `τ ⪰ 0`, `tr τ = 1`, `γ^{T₂} ⪰ 0`.
pub fn q_upper_threehalf(ops: &Operators, w: &[f64], opts: &SdpOptions) -> Result<QUpperResult> {
    let (d, mats) = operator_data(ops, w)?;
    if d > THREEHALF_DIM_GUARD {
        return Err(Error::GuardExceeded {
            what: "operator dimension for the three-copy program",
            value: d,
            limit: THREEHALF_DIM_GUARD,
        });
    }
    let lift = symmetric_basis(d, 3);
    let mut lmi = TwoCopyLmi {
        d,
        k: 3,
        lift,
        omega: OperatorMatrix::zeros(0, 0),
        cuts: Vec::new(),
    };
    lmi.omega = lmi.pull_back(&two_copy_objective(&mats, w, d));
    lmi.solve(opts)
}

/// `max tr(γW)` with `tr γ = 1`, `γ ⪰ 0`, `tr(Aᵢγ) ≥ 0` for the three ladder
/// cuts, where `W = 𝟙Y𝟙Y + XXXX + ZZZZ − YYYY`.
pub fn ladder_sdp(opts: &SdpOptions) -> Result<SdpSolution> {
    let m = |s: &str| parse_pauli(s).and_then(|p| p.to_matrix());
    let w = m("IYIY")? + m("XXXX")? + m("ZZZZ")? - m("YYYY")?;
    let cuts = [m("XZXZ")?, m("YIYI")?, m("ZXZX")?];
    let n = 16;
    let entries = |a: &OperatorMatrix, block: usize| -> Vec<SdpEntry> {
        let list: Vec<(usize, usize, C64)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| a[(i, j)].norm() > 0.0)
            .map(|(i, j)| (i, j, a[(i, j)]))
            .collect();
        embed_entries(block, n, &list, 0.5)
    };
    let id = OperatorMatrix::identity(n, n);
    let mut constraints = vec![SdpConstraint {
        entries: entries(&id, 0),
        rhs: 1.0,
    }];
    for (k, a) in cuts.iter().enumerate() {
        let mut e = entries(a, 0);
        e.push(SdpEntry {
            block: k + 1,
            i: 0,
            j: 0,
            value: -1.0,
        });
        constraints.push(SdpConstraint { entries: e, rhs: 0.0 });
    }
    let problem = SdpProblem {
        blocks: vec![2 * n, 1, 1, 1],
        objective: entries(&w, 0),
        constraints,
    };
    solve_sdp(&problem, opts)
}
