use serde::{Deserialize, Serialize};

use super::{certified_upper, UpperProvenance};
use crate::error::{Error, Result};
use crate::graphs::{Graph, GraphJson};
use crate::pauli::{parse_pauli, PauliString};
use crate::represent::{frustration_graph, standard_saur};
use crate::sdp::SdpOptions;
use crate::seesaw::{q_lower, SeeSawConfig};

#[derive(Debug, Clone, Copy)]
pub struct GseConfig {
    pub sdp: SdpOptions,
    pub seesaw: SeeSawConfig,
    /// Coordinate-descent steps for the optimized weight row; 0 skips it.
    pub refine_iterations: usize,
    /// Also compute the non-certified see-saw reference value.
    pub reference: bool,
}

impl Default for GseConfig {
    fn default() -> Self {
        GseConfig {
            sdp: SdpOptions::default(),
            seesaw: SeeSawConfig::default(),
            refine_iterations: 200,
            reference: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GseRow {
    /// `t=0`, `t=1`, `t=2` or `optimized`.
    pub label: String,
    pub weights: Vec<f64>,
    pub q_upper: f64,
    pub upper_provenance: UpperProvenance,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GseBoundReport {
    pub rows: Vec<GseRow>,
    /// Index of the smallest row.
    pub best: usize,
    /// Certified bound on `|Σ aᵢ⟨Aᵢ⟩|` over all states.
    pub bound: f64,
    /// `√((Σ aᵢ²/wᵢ)·β_lower)` at the best row's weights; not a certificate.
    pub reference: Option<f64>,
    pub graph: GraphJson,
}

/// Reads lines `coefficient pauli-word`; blank lines and `#` comments are skipped.
pub fn parse_hamiltonian(text: &str) -> Result<Vec<(f64, PauliString)>> {
    let mut out: Vec<(f64, PauliString)> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            position: 0,
            message: format!("line {}: {message}", line_no + 1),
        };
        let mut parts = t.split_whitespace();
        let (Some(a), Some(word), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err("expected `coefficient pauli-word`".into()));
        };
        let a: f64 = a.parse().map_err(|_| err(format!("bad coefficient {a:?}")))?;
        if !a.is_finite() {
            return Err(err("coefficient is not finite".into()));
        }
        let p = parse_pauli(word).map_err(|e| err(e.to_string()))?;
        if let Some((_, first)) = out.first() {
            if first.n_qubits() != p.n_qubits() {
                return Err(err(format!("word length {} differs from {}", p.n_qubits(), first.n_qubits())));
            }
        }
        out.push((a, p));
    }
    Ok(out)
}

struct Evaluator<'a> {
    graph: &'a Graph,
    a: &'a [f64],
    sdp: &'a SdpOptions,
}

impl Evaluator<'_> {
    /// Bound for weights `w`; vertices with `wᵢ = 0` must have `aᵢ = 0` and
    /// are removed.
    fn row(&self, label: &str, w: Vec<f64>) -> Result<GseRow> {
        let keep: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
        let sub = self.graph.induced_subgraph(&keep);
        let ws: Vec<f64> = keep.iter().map(|&i| w[i]).collect();
        let up = certified_upper(&sub, &ws, self.sdp)?;
        let s: f64 = keep.iter().map(|&i| self.a[i] * self.a[i] / w[i]).sum();
        Ok(GseRow {
            label: label.into(),
            weights: w,
            q_upper: up.value,
            upper_provenance: up.provenance,
            bound: (s * up.value).max(0.0).sqrt(),
        })
    }
}

/// Certified bounds on the extreme energies of `Σ aᵢ Aᵢ` through
/// `(Σ aᵢ⟨Aᵢ⟩)² ≤ (Σ aᵢ²/wᵢ)·U(w)` with `U` a certified upper bound on
/// `β(G, w)` of the frustration graph.
pub fn gse_bound(terms: &[(f64, PauliString)], cfg: &GseConfig) -> Result<GseBoundReport> {
    if terms.is_empty() || terms.iter().all(|(a, _)| *a == 0.0) {
        return Err(Error::InvalidArgument("Hamiltonian has no nonzero coefficient".into()));
    }
    let strings: Vec<PauliString> = terms.iter().map(|(_, p)| p.clone()).collect();
    let graph = frustration_graph(&strings)?;
    let a: Vec<f64> = terms.iter().map(|(a, _)| *a).collect();
    let eval = Evaluator {
        graph: &graph,
        a: &a,
        sdp: &cfg.sdp,
    };
    let mut rows = Vec::new();
    for t in 0..3 {
        let w: Vec<f64> = a.iter().map(|x| if t == 0 { 1.0 } else { x.abs().powi(t) }).collect();
        rows.push(eval.row(&format!("t={t}"), w)?);
    }
    if cfg.refine_iterations > 0 {
        rows.push(refine(&eval, &rows, cfg.refine_iterations)?);
    }
    let best = (0..rows.len())
        .min_by(|&i, &j| rows[i].bound.total_cmp(&rows[j].bound))
        .expect("rows present");
    let reference = if cfg.reference {
        let w = &rows[best].weights;
        let keep: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
        let sub = graph.induced_subgraph(&keep);
        let ws: Vec<f64> = keep.iter().map(|&i| w[i]).collect();
        let low = q_lower(&standard_saur(&sub, None)?, &ws, &cfg.seesaw)?;
        let s: f64 = keep.iter().map(|&i| a[i] * a[i] / w[i]).sum();
        Some((s * low.value).sqrt())
    } else {
        None
    };
    Ok(GseBoundReport {
        bound: rows[best].bound,
        rows,
        best,
        reference,
        graph: GraphJson::from(&graph),
    })
}

/// Log-space coordinate descent on the weights of the nonzero terms,
/// starting from the best fixed-exponent row.
fn refine(eval: &Evaluator, rows: &[GseRow], iterations: usize) -> Result<GseRow> {
    let start = rows
        .iter()
        .min_by(|x, y| x.bound.total_cmp(&y.bound))
        .expect("rows present");
    let active: Vec<usize> = (0..eval.a.len()).filter(|&i| eval.a[i] != 0.0).collect();
    let mut w: Vec<f64> = start.weights.clone();
    for (i, x) in w.iter_mut().enumerate() {
        if eval.a[i] == 0.0 {
            *x = 0.0;
        }
    }
    let mut best = eval.row("optimized", w.clone())?;
    let mut step = 0.5f64;
    let mut improved_in_sweep = false;
    for it in 0..iterations {
        let k = active[it % active.len()];
        for dir in [1.0, -1.0] {
            let mut trial = best.weights.clone();
            trial[k] *= (dir * step).exp();
            let row = eval.row("optimized", trial)?;
            if row.bound < best.bound * (1.0 - 1e-12) {
                best = row;
                improved_in_sweep = true;
                break;
            }
        }
        if (it + 1) % active.len() == 0 {
            if !improved_in_sweep {
                step *= 0.5;
                if step < 1e-6 {
                    break;
                }
            }
            improved_in_sweep = false;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eigh;
    use crate::pauli::PauliSumOperator;

    fn quick() -> GseConfig {
        GseConfig {
            refine_iterations: 40,
            seesaw: SeeSawConfig {
                restarts: 4,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    #[test]
    fn hamiltonian_text_format() {
        let h = parse_hamiltonian("# demo\n1.5 XZ\n-0.25  -YY\n\n2e-1 II\n").unwrap();
        assert_eq!(h.len(), 3);
        assert_eq!(h[1].0, -0.25);
        assert!(h[1].1.is_negative());
        assert!(parse_hamiltonian("1.0 XZ\n0.5 X\n").is_err());
        assert!(parse_hamiltonian("abc XZ\n").is_err());
        assert!(parse_hamiltonian("1.0\n").is_err());
    }

    #[test]
    fn single_dominant_term() {
        // a₁ = 1 and the rest 0 on a pentagon of strings
        let strings = crate::represent::standard_saur(&Graph::cycle(5), None).unwrap();
        let terms: Vec<(f64, PauliString)> = strings
            .iter()
            .enumerate()
            .map(|(i, s)| (if i == 0 { 1.0 } else { 0.0 }, s.clone()))
            .collect();
        let r = gse_bound(&terms, &quick()).unwrap();
        assert!((r.rows[1].bound - 1.0).abs() < 1e-7);
        assert!(r.rows[0].bound >= 1.0);
        assert!((r.rows[0].q_upper - 2.0).abs() < 1e-9);
        assert!((r.bound - 1.0).abs() < 1e-7);
    }

    #[test]
    fn bound_dominates_spectrum() {
        let terms = parse_hamiltonian("1.0 XXI\n0.7 ZIZ\n-0.4 YYZ\n0.2 IZX\n").unwrap();
        let r = gse_bound(&terms, &quick()).unwrap();
        let h = PauliSumOperator::new(terms).unwrap().to_matrix().unwrap();
        let e = eigh(&h).unwrap();
        let top = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(top <= r.bound + 1e-8);
        assert!(r.reference.unwrap() <= r.bound + 1e-8);
        let optimized = r.rows.iter().find(|row| row.label == "optimized").unwrap();
        assert!(r.rows.iter().all(|row| optimized.bound <= row.bound + 1e-12));
    }

    #[test]
    fn zero_hamiltonian_is_rejected() {
        let terms = vec![(0.0, parse_pauli("XZ").unwrap())];
        assert!(gse_bound(&terms, &quick()).is_err());
        assert!(gse_bound(&[], &quick()).is_err());
    }
}
