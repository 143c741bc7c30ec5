//! Infeasible-start primal-dual interior-point method (HKM direction,
//! Mehrotra predictor-corrector) for block-diagonal real symmetric SDPs.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, LU};
use serde::{Deserialize, Serialize};

use super::{SdpEntry, SdpProblem};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Sum of block dimensions accepted by [`solve_sdp`].
pub const SDP_DIM_GUARD: usize = 512;

const REFINEMENT_STEPS: usize = 2;
/// Iterations without a new best residual before the solver gives up.
const STALL_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdpOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub exec: Execution,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            tol: 1e-9,
            max_iter: 100,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdpStatus {
    Optimal,
    MaxIterations,
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// `⟨C, X⟩` at the returned primal iterate.
    pub primal_value: f64,
    /// `bᵀy` at the returned dual iterate.
    pub dual_value: f64,
    pub x: Vec<DMatrix<f64>>,
    pub y: Vec<f64>,
    /// Dual slack `Σ yₖAₖ − C`.
    pub z: Vec<DMatrix<f64>>,
    pub iterations: usize,
    /// `|primal − dual| / (1 + |primal| + |dual|)`.
    pub gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
}

/// Constraint in full (both triangles) coordinate form.
struct Sparse {
    entries: Vec<(usize, usize, usize, f64)>,
}

impl Sparse {
    fn expand(list: &[SdpEntry]) -> Sparse {
        let mut entries = Vec::with_capacity(2 * list.len());
        for e in list {
            entries.push((e.block, e.i, e.j, e.value));
            if e.i != e.j {
                entries.push((e.block, e.j, e.i, e.value));
            }
        }
        Sparse { entries }
    }

    fn dot(&self, x: &[DMatrix<f64>]) -> f64 {
        self.entries.iter().map(|&(b, i, j, v)| v * x[b][(i, j)]).sum()
    }

    fn add_to(&self, out: &mut [DMatrix<f64>], scale: f64) {
        for &(b, i, j, v) in &self.entries {
            out[b][(i, j)] += scale * v;
        }
    }

    fn block_norms(&self, nblocks: usize) -> Vec<f64> {
        let mut n = vec![0.0; nblocks];
        for &(b, _, _, v) in &self.entries {
            n[b] += v * v;
        }
        n.iter().map(|x: &f64| x.sqrt()).collect()
    }
}

type Blocks = Vec<DMatrix<f64>>;

fn inner(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn fro(a: &[DMatrix<f64>]) -> f64 {
    inner(a, a).sqrt()
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn inverse_spd(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    Cholesky::new(m.clone()).map(|c| c.inverse())
}

/// Largest `α ≤ α_cap` keeping `X + αΔX ⪰ 0`, computed blockwise.
fn max_step(x: &[DMatrix<f64>], dx: &[DMatrix<f64>]) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.iter().zip(dx) {
        let chol = Cholesky::new(xb.clone())?;
        let l = chol.l();
        let li = l.clone().try_inverse()?;
        let w = &li * db * li.transpose();
        let w = sym(&w);
        let lmin = w.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    Some(alpha)
}

#[derive(Clone)]
struct State {
    x: Blocks,
    y: DVector<f64>,
    z: Blocks,
}

struct Problem {
    dims: Vec<usize>,
    c: Blocks,
    a: Vec<Sparse>,
    b: DVector<f64>,
}

impl Problem {
    fn op(&self, x: &[DMatrix<f64>]) -> DVector<f64> {
        DVector::from_iterator(self.a.len(), self.a.iter().map(|ak| ak.dot(x)))
    }

    fn adjoint(&self, y: &DVector<f64>) -> Blocks {
        let mut out = self.zeros();
        for (ak, &yk) in self.a.iter().zip(y.iter()) {
            ak.add_to(&mut out, yk);
        }
        out
    }

    fn zeros(&self) -> Blocks {
        self.dims.iter().map(|&n| DMatrix::zeros(n, n)).collect()
    }

    /// `M_kl = tr(A_k X A_l Z⁻¹)`.
    fn schur(&self, x: &[DMatrix<f64>], zi: &[DMatrix<f64>], exec: Execution) -> DMatrix<f64> {
        let m = self.a.len();
        let cols = par::map_range(exec, m, |l| {
            let mut g: Vec<Option<DMatrix<f64>>> = vec![None; self.dims.len()];
            for &(b, p, q, u) in &self.a[l].entries {
                let n = self.dims[b];
                let gb = g[b].get_or_insert_with(|| DMatrix::zeros(n, n));
                let xp = x[b].column(p);
                let zq = zi[b].row(q);
                gb.ger(u, &xp, &zq.transpose(), 1.0);
            }
            let mut col = vec![0.0; m];
            for (k, ak) in self.a.iter().enumerate() {
                let mut s = 0.0;
                for &(b, i, j, v) in &ak.entries {
                    if let Some(gb) = &g[b] {
                        s += v * gb[(j, i)];
                    }
                }
                col[k] = s;
            }
            col
        });
        let mut mat = DMatrix::zeros(m, m);
        for (l, col) in cols.into_iter().enumerate() {
            for (k, v) in col.into_iter().enumerate() {
                mat[(k, l)] = v;
            }
        }
        sym(&mat)
    }
}

enum Factorization {
    Chol(Cholesky<f64, Dyn>),
    Lu(LU<f64, Dyn, Dyn>),
}

/// Factorized Schur matrix; solves are refined against the unregularized matrix.
struct Factor {
    m: DMatrix<f64>,
    f: Factorization,
}

impl Factor {
    fn new(m: DMatrix<f64>) -> Option<Factor> {
        if let Some(c) = Cholesky::new(m.clone()) {
            return Some(Factor { m, f: Factorization::Chol(c) });
        }
        let scale = m.diagonal().amax().max(1e-300);
        let mut reg = m.clone();
        for i in 0..reg.nrows() {
            reg[(i, i)] += 1e-12 * scale;
        }
        if let Some(c) = Cholesky::new(reg) {
            return Some(Factor { m, f: Factorization::Chol(c) });
        }
        let lu = m.clone().lu();
        lu.is_invertible().then_some(Factor { m, f: Factorization::Lu(lu) })
    }

    fn raw_solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        match &self.f {
            Factorization::Chol(c) => Some(c.solve(rhs)),
            Factorization::Lu(l) => l.solve(rhs),
        }
    }

    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let mut x = self.raw_solve(rhs)?;
        for _ in 0..REFINEMENT_STEPS {
            let r = rhs - &self.m * &x;
            x += self.raw_solve(&r)?;
        }
        Some(x)
    }
}

/// Solves `max ⟨C, X⟩ s.t. ⟨Aₖ, X⟩ = bₖ, X ⪰ 0`; the dual is
/// `min bᵀy s.t. Σ yₖAₖ − C ⪰ 0`.
pub fn solve_sdp(problem: &SdpProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    problem.validate()?;
    let total: usize = problem.blocks.iter().sum();
    if total > SDP_DIM_GUARD {
        return Err(Error::GuardExceeded {
            what: "total SDP block dimension",
            value: total,
            limit: SDP_DIM_GUARD,
        });
    }
    if problem.constraints.is_empty() {
        return Err(Error::InvalidArgument("an SDP needs at least one constraint".into()));
    }
    let dims = problem.blocks.clone();
    let nb = dims.len();
    // internal form: min ⟨-C, X⟩, dual max bᵀy with Aᵀy + Z = -C
    let mut c: Blocks = dims.iter().map(|&n| DMatrix::zeros(n, n)).collect();
    Sparse::expand(&problem.objective).add_to(&mut c, -1.0);
    let a: Vec<Sparse> = problem.constraints.iter().map(|k| Sparse::expand(&k.entries)).collect();
    let b = DVector::from_iterator(a.len(), problem.constraints.iter().map(|k| k.rhs));
    let p = Problem { dims, c, a, b };
    let n_total = total as f64;

    let norm_b = p.b.norm();
    let norm_c = fro(&p.c);
    let a_norms: Vec<Vec<f64>> = p.a.iter().map(|ak| ak.block_norms(nb)).collect();
    let mut st = State {
        x: Vec::new(),
        y: DVector::zeros(p.a.len()),
        z: Vec::new(),
    };
    for (blk, &n) in p.dims.iter().enumerate() {
        let nf = n as f64;
        let mut xi = 10f64.max(nf.sqrt());
        let mut eta = 10f64.max(nf.sqrt()).max(p.c[blk].norm());
        for (k, norms) in a_norms.iter().enumerate() {
            xi = xi.max(nf * (1.0 + p.b[k].abs()) / (1.0 + norms[blk]));
            eta = eta.max(norms[blk]);
        }
        st.x.push(DMatrix::identity(n, n) * xi);
        st.z.push(DMatrix::identity(n, n) * eta);
    }

    let report = |st: &State, status: SdpStatus, iterations: usize| -> SdpSolution {
        let rp = &p.b - p.op(&st.x);
        let aty = p.adjoint(&st.y);
        let rd: Blocks = (0..nb).map(|k| &p.c[k] - &st.z[k] - &aty[k]).collect();
        let pobj = -inner(&p.c, &st.x);
        let dobj = -p.b.dot(&st.y);
        SdpSolution {
            status,
            primal_value: pobj,
            dual_value: dobj,
            x: st.x.clone(),
            y: st.y.iter().map(|v| -v).collect(),
            z: st.z.clone(),
            iterations,
            gap: (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs()),
            primal_infeasibility: rp.norm() / (1.0 + norm_b),
            dual_infeasibility: fro(&rd) / (1.0 + norm_c),
        }
    };

    let mut best: Option<(f64, State, usize)> = None;
    // on failure the best iterate seen is returned, not the last one
    let finish = |st: State, best: Option<(f64, State, usize)>, status: SdpStatus, iter: usize| -> SdpSolution {
        match best {
            Some((_, b, at)) if status != SdpStatus::Optimal => report(&b, status, at),
            _ => report(&st, status, iter),
        }
    };

    for iter in 0..opts.max_iter {
        let rp = &p.b - p.op(&st.x);
        let aty = p.adjoint(&st.y);
        let rd: Blocks = (0..nb).map(|k| &p.c[k] - &st.z[k] - &aty[k]).collect();
        let pobj = inner(&p.c, &st.x);
        let dobj = p.b.dot(&st.y);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let pinf = rp.norm() / (1.0 + norm_b);
        let dinf = fro(&rd) / (1.0 + norm_c);
        if gap < opts.tol && pinf < opts.tol && dinf < opts.tol {
            return Ok(report(&st, SdpStatus::Optimal, iter));
        }
        let err = gap.max(pinf).max(dinf);
        match &best {
            Some((e, _, at)) if err >= *e => {
                if iter - at >= STALL_LIMIT {
                    return Ok(finish(st, best, SdpStatus::NumericalFailure, iter));
                }
            }
            _ => best = Some((err, st.clone(), iter)),
        }
        let mu = inner(&st.x, &st.z) / n_total;

        let Some(zi) = st.z.iter().map(inverse_spd).collect::<Option<Blocks>>() else {
            return Ok(finish(st, best, SdpStatus::NumericalFailure, iter));
        };
        let schur = p.schur(&st.x, &zi, opts.exec);
        let Some(factor) = Factor::new(schur) else {
            return Ok(finish(st, best, SdpStatus::NumericalFailure, iter));
        };
        let x_rd_zi: Blocks = (0..nb).map(|k| &st.x[k] * &rd[k] * &zi[k]).collect();

        let direction = |rc: &Blocks| -> Option<(Blocks, DVector<f64>, Blocks)> {
            let t: Blocks = (0..nb).map(|k| &rc[k] - &x_rd_zi[k]).collect();
            let rhs = &rp - p.op(&t);
            let dy = factor.solve(&rhs)?;
            let atdy = p.adjoint(&dy);
            let dz: Blocks = (0..nb).map(|k| &rd[k] - &atdy[k]).collect();
            let dx: Blocks = (0..nb).map(|k| sym(&(&rc[k] - &st.x[k] * &dz[k] * &zi[k]))).collect();
            Some((dx, dy, dz))
        };

        // predictor
        let rc_aff: Blocks = st.x.iter().map(|x| -x).collect();
        let Some((dxa, _, dza)) = direction(&rc_aff) else {
            return Ok(finish(st, best, SdpStatus::NumericalFailure, iter));
        };
        let (Some(ap), Some(ad)) = (max_step(&st.x, &dxa), max_step(&st.z, &dza)) else {
            return Ok(finish(st, best, SdpStatus::NumericalFailure, iter));
        };
        let ap = ap.min(1.0);
        let ad = ad.min(1.0);
        let xa: Blocks = (0..nb).map(|k| &st.x[k] + &dxa[k] * ap).collect();
        let za: Blocks = (0..nb).map(|k| &st.z[k] + &dza[k] * ad).collect();
        let mu_aff = inner(&xa, &za) / n_total;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let rc: Blocks = (0..nb)
            .map(|k| &zi[k] * (sigma * mu) - &st.x[k] - &dxa[k] * &dza[k] * &zi[k])
            .collect();
        let Some((dx, dy, dz)) = direction(&rc) else {
            return Ok(finish(st, best, SdpStatus::NumericalFailure, iter));
        };
        let (Some(ap), Some(ad)) = (max_step(&st.x, &dx), max_step(&st.z, &dz)) else {
            return Ok(finish(st, best, SdpStatus::NumericalFailure, iter));
        };
        let ap = (0.95 * ap).min(1.0);
        let ad = (0.95 * ad).min(1.0);
        let next = State {
            x: (0..nb).map(|k| sym(&(&st.x[k] + &dx[k] * ap))).collect(),
            y: &st.y + dy * ad,
            z: (0..nb).map(|k| sym(&(&st.z[k] + &dz[k] * ad))).collect(),
        };
        if next.x.iter().chain(&next.z).any(|m| m.iter().any(|v| !v.is_finite())) {
            return Ok(finish(st, best, SdpStatus::NumericalFailure, iter));
        }
        st = next;
    }
    Ok(finish(st, best, SdpStatus::MaxIterations, opts.max_iter))
}
