use serde::{Deserialize, Serialize};

use super::{certified_upper, UpperProvenance};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numerics::{c, eigh, min_eigenvalue, trace_product, DensityState, OperatorMatrix};
use crate::pauli::PauliString;
use crate::represent::{frustration_graph, verify_matrices, RepresentationKind};
use crate::sdp::{lovasz_theta, SdpOptions};

const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    /// `λ_min(Σ Aᵢ²) − ϑ(G, λ)`: a lower bound on `Σ Δ²(Aᵢ)`.
    pub bound: f64,
    pub lambda_min: f64,
    pub lambda: Vec<f64>,
    pub theta: f64,
    /// `λ_min − U(G, λ)` when a graph rule beats `ϑ` and the family also
    /// commutes on non-edges.
    pub beta_bound: Option<f64>,
    pub beta_provenance: Option<UpperProvenance>,
}

fn finish(
    g: &Graph,
    lambda: Vec<f64>,
    lambda_min: f64,
    commuting_on_non_edges: bool,
    sdp: &SdpOptions,
) -> Result<UncertaintyReport> {
    let theta = lovasz_theta(g, &lambda, sdp)?.value;
    let (mut beta_bound, mut beta_provenance) = (None, None);
    if commuting_on_non_edges {
        let up = certified_upper(g, &lambda, sdp)?;
        if up.provenance != UpperProvenance::Theta {
            beta_bound = Some(lambda_min - up.value);
            beta_provenance = Some(up.provenance);
        }
    }
    Ok(UncertaintyReport {
        bound: lambda_min - theta,
        lambda_min,
        lambda,
        theta,
        beta_bound,
        beta_provenance,
    })
}

/// Sum-uncertainty bound for observables that anticommute on the edges of `g`.
/// Each `Aᵢ` is rescaled by its largest `|eigenvalue|` before the SARA check.
pub fn uncertainty_bound(obs: &[OperatorMatrix], g: &Graph, sdp: &SdpOptions) -> Result<UncertaintyReport> {
    if obs.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: obs.len(),
        });
    }
    let mut scales = Vec::with_capacity(obs.len());
    for m in obs {
        let e = eigh(m)?;
        scales.push(e.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs())));
    }
    let scaled: Vec<OperatorMatrix> = obs
        .iter()
        .zip(&scales)
        .map(|(m, &s)| if s > 0.0 { m * c(1.0 / s) } else { m.clone() })
        .collect();
    let report = verify_matrices(&scaled, g, RepresentationKind::Sara, CHECK_TOL)?;
    if let Some(v) = report.first_violation() {
        return Err(Error::Representation(format!(
            "pair ({}, {}): expected {}, found {}",
            v.i, v.j, v.expected, v.found
        )));
    }
    let dim = obs.first().map_or(0, |m| m.nrows());
    let sum_sq = obs.iter().fold(OperatorMatrix::zeros(dim, dim), |acc, m| acc + m * m);
    let lambda_min = if dim == 0 { 0.0 } else { min_eigenvalue(&sum_sq)? };
    let commuting = (0..g.n()).all(|i| {
        (i + 1..g.n()).all(|j| g.has_edge(i, j) || (&obs[i] * &obs[j] - &obs[j] * &obs[i]).norm() <= CHECK_TOL)
    });
    let lambda = scales.iter().map(|s| s * s).collect();
    finish(g, lambda, lambda_min, commuting, sdp)
}

/// Dichotomic case `Aᵢ = aᵢ Sᵢ` with Pauli strings: `λ_min = Σ aᵢ²` and the
/// graph is the frustration graph.
pub fn uncertainty_bound_paulis(strings: &[PauliString], a: &[f64], sdp: &SdpOptions) -> Result<UncertaintyReport> {
    if a.len() != strings.len() {
        return Err(Error::LengthMismatch {
            expected: strings.len(),
            found: a.len(),
        });
    }
    let g = frustration_graph(strings)?;
    let lambda: Vec<f64> = a.iter().map(|x| x * x).collect();
    let lambda_min = lambda.iter().sum();
    finish(&g, lambda, lambda_min, true, sdp)
}

/// `min{(d·p − 1)·ϑ(G), ϑ(G)}` for states of purity `p = tr ρ²`.
pub fn purity_bound(g: &Graph, d: usize, purity: f64, sdp: &SdpOptions) -> Result<f64> {
    check_purity(d, purity)?;
    let theta = lovasz_theta(g, &vec![1.0; g.n()], sdp)?.value;
    Ok(purity_factor(d, purity).min(1.0) * theta)
}

fn purity_factor(d: usize, purity: f64) -> f64 {
    (d as f64 * purity - 1.0).max(0.0)
}

fn check_purity(d: usize, purity: f64) -> Result<()> {
    let lo = 1.0 / d as f64;
    if d == 0 || !(purity >= lo - 1e-12 && purity <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "purity {purity} outside [{lo}, 1] for dimension {d}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PurityFamily {
    /// Hermitian unitaries anticommuting on the edges.
    Saura,
    /// `⟨Sᵢ|Sᵢ⟩ = d` and `⟨Sᵢ|Sⱼ⟩ = 0` on the edges.
    TraceOrthogonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityReport {
    pub family: PurityFamily,
    /// `Σ ⟨Sᵢ⟩²_ρ`.
    pub value: f64,
    pub purity: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Evaluates both sides of the purity bound on a concrete family of
/// traceless observables and a state.
pub fn purity_check(ops: &[OperatorMatrix], g: &Graph, rho: &DensityState, sdp: &SdpOptions) -> Result<PurityReport> {
    if ops.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: ops.len(),
        });
    }
    let d = rho.dim();
    if ops.iter().any(|m| m.nrows() != d || m.ncols() != d) {
        return Err(Error::LengthMismatch {
            expected: d,
            found: ops.first().map_or(0, |m| m.nrows()),
        });
    }
    let purity = rho.purity();
    check_purity(d, purity)?;
    let theta = lovasz_theta(g, &vec![1.0; g.n()], sdp)?.value;
    let tol = CHECK_TOL * d as f64;
    if ops.iter().any(|m| m.trace().norm() > tol) {
        return Err(Error::Representation("purity bounds need traceless operators".into()));
    }
    let saura = verify_matrices(ops, g, RepresentationKind::Saura, CHECK_TOL)?.pass;
    let (family, bound) = if saura {
        (PurityFamily::Saura, purity_factor(d, purity).min(1.0) * theta)
    } else {
        let hermitian = ops.iter().all(|m| (m - m.adjoint()).norm() <= tol);
        let normalized = ops.iter().all(|m| (trace_product(m, m).re - d as f64).abs() <= tol);
        let orthogonal = g
            .edges()
            .iter()
            .all(|&(i, j)| trace_product(&ops[i], &ops[j]).norm() <= tol);
        if !(hermitian && normalized && orthogonal) {
            return Err(Error::Representation(
                "family is neither a SAURA nor trace-orthogonal on the edges".into(),
            ));
        }
        (PurityFamily::TraceOrthogonal, purity_factor(d, purity) * theta)
    };
    let value: f64 = ops.iter().map(|m| rho.expectation(m).powi(2)).sum();
    Ok(PurityReport {
        family,
        value,
        purity,
        bound,
        holds: value <= bound + 1e-9,
    })
}
