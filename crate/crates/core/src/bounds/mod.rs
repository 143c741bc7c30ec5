//! Certified intervals for `β(G, w)`, ground-state energy and uncertainty
//! bounds, purity bounds and the ladder certificate.

mod gse;
mod ladder;
mod uncertainty;

pub use gse::{gse_bound, parse_hamiltonian, GseBoundReport, GseConfig, GseRow};
pub use ladder::{
    five_operator_sum, ladder_dual_check, ladder_operator, ladder_value, ladder_value_scan, LadderDual, LadderScan,
};
pub use uncertainty::{
    purity_bound, purity_check, uncertainty_bound, uncertainty_bound_paulis, PurityFamily, PurityReport,
    UncertaintyReport,
};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::graphs::{lexicographic, weighted_independence, Graph, GraphJson, EXACT_SOLVER_LIMIT};
use crate::represent::standard_saur;
use crate::sdp::{lovasz_theta, SdpOptions};
use crate::seesaw::{q_lower, LowerProvenance, SeeSawConfig};

/// `ϑ` and `α` closer than this are taken as equal by the `α = ϑ` rule.
const ALPHA_THETA_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperProvenance {
    Theta,
    JoinRule,
    UnionRule,
    LexicographicRule,
    CycleRule,
    AlphaEqualsTheta,
    SubgraphOfProduct,
}

/// A user claim that `G` sits inside `outer[inner]`: vertex `v` of `G` is
/// product vertex `map[v] = i·|inner| + j`. Checked before use.
#[derive(Debug, Clone, PartialEq)]
pub struct DeclaredProduct {
    pub outer: Graph,
    pub inner: Graph,
    pub map: Vec<usize>,
}

impl DeclaredProduct {
    /// Identity embedding of `G = outer[inner]`.
    pub fn lexicographic(outer: Graph, inner: Graph) -> Self {
        let map = (0..outer.n() * inner.n()).collect();
        DeclaredProduct { outer, inner, map }
    }

    /// Checks adjacency and `w_v ≤ w_outer(i)·w_inner(j)`; returns whether the
    /// embedding covers the whole product.
    pub fn verify(&self, g: &Graph, w: &[f64]) -> Result<bool> {
        let total = self.outer.n() * self.inner.n();
        if self.map.len() != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                found: self.map.len(),
            });
        }
        let mut used = vec![false; total];
        for &p in &self.map {
            if p >= total || std::mem::replace(&mut used[p], true) {
                return Err(Error::InvalidArgument(format!("declared map is not injective into {total} vertices")));
            }
        }
        let product = lexicographic(&self.outer, &self.inner);
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if g.has_edge(u, v) != product.has_edge(self.map[u], self.map[v]) {
                    return Err(Error::InvalidArgument(format!(
                        "declared product disagrees with the graph on pair ({u}, {v})"
                    )));
                }
            }
            let cap = product.weights()[self.map[u]];
            if w[u] > cap * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "weight {} of vertex {u} exceeds the product weight {cap}",
                    w[u]
                )));
            }
        }
        Ok(g.n() == total)
    }
}

#[derive(Debug, Clone, Default)]
pub struct BetaConfig {
    pub seesaw: SeeSawConfig,
    pub sdp: SdpOptions,
    pub declared: Option<DeclaredProduct>,
}

#[derive(Debug, Clone)]
pub struct BetaEstimate {
    pub lower: f64,
    pub upper: f64,
    pub lower_provenance: LowerProvenance,
    pub upper_provenance: UpperProvenance,
    /// Decomposition behind the upper bound.
    pub witness: String,
    pub theta: f64,
    /// Weighted independence number when the exact solver applies.
    pub alpha: Option<f64>,
    pub graph: Graph,
    pub weights: Vec<f64>,
}

impl BetaEstimate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "lower": self.lower,
            "upper": self.upper,
            "lower_provenance": self.lower_provenance,
            "upper_provenance": self.upper_provenance,
            "witness": self.witness,
            "theta": self.theta,
            "alpha": self.alpha,
            "graph": GraphJson::from(&self.graph),
            "weights": self.weights,
        })
    }
}

/// Rule-certified upper bound on `β(G, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedUpper {
    pub value: f64,
    pub provenance: UpperProvenance,
    pub witness: String,
    pub theta: f64,
    pub alpha: Option<f64>,
}

pub(crate) fn check_weights(n: usize, w: &[f64]) -> Result<()> {
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

/// Smallest upper bound among `ϑ(G, w)` and the graph rules that apply,
/// with parts bounded recursively. Only solver-certified quantities enter.
pub fn certified_upper(g: &Graph, w: &[f64], sdp: &SdpOptions) -> Result<CertifiedUpper> {
    check_weights(g.n(), w)?;
    let theta = lovasz_theta(g, w, sdp)?.value;
    let mut best = CertifiedUpper {
        value: theta,
        provenance: UpperProvenance::Theta,
        witness: "lovasz theta".into(),
        theta,
        alpha: None,
    };
    if g.n() == 0 {
        best.alpha = Some(0.0);
        return Ok(best);
    }
    let mut consider = |value: f64, provenance, witness: String| {
        if value < best.value {
            best.value = value;
            best.provenance = provenance;
            best.witness = witness;
        }
    };
    let parts = |groups: &[Vec<usize>]| -> Result<Vec<f64>> {
        groups
            .iter()
            .map(|vs| {
                let sub = g.induced_subgraph(vs);
                let ws: Vec<f64> = vs.iter().map(|&v| w[v]).collect();
                certified_upper(&sub, &ws, sdp).map(|u| u.value)
            })
            .collect()
    };

    let components = g.components();
    if components.len() > 1 {
        let sum = parts(&components)?.iter().sum();
        consider(sum, UpperProvenance::UnionRule, format!("components {components:?}"));
    }
    let co = g.complement().components();
    if co.len() > 1 {
        let max = parts(&co)?.into_iter().fold(0.0, f64::max);
        consider(max, UpperProvenance::JoinRule, format!("join of {co:?}"));
    }
    if let Some(order) = g.cycle_order() {
        if w.iter().all(|&x| x == w[0]) {
            consider(
                w[0] * (g.n() / 2) as f64,
                UpperProvenance::CycleRule,
                format!("cycle {order:?}"),
            );
        }
    }
    let mut alpha = None;
    if g.n() <= EXACT_SOLVER_LIMIT {
        let (a, set) = weighted_independence(g, w)?;
        alpha = Some(a);
        if theta - a <= ALPHA_THETA_TOL * a.max(1.0) {
            consider(a, UpperProvenance::AlphaEqualsTheta, format!("independent set {set:?}"));
        }
    }
    best.alpha = alpha;
    Ok(best)
}

/// Interval for `β(G, w)`: the see-saw/witness lower bound on the standard
/// SAUR and the smallest certified upper bound.
pub fn beta_estimate(g: &Graph, w: &[f64], cfg: &BetaConfig) -> Result<BetaEstimate> {
    let mut up = certified_upper(g, w, &cfg.sdp)?;
    if let Some(decl) = &cfg.declared {
        let whole = decl.verify(g, w)?;
        let outer = certified_upper(&decl.outer, decl.outer.weights(), &cfg.sdp)?;
        let inner = certified_upper(&decl.inner, decl.inner.weights(), &cfg.sdp)?;
        let value = outer.value * inner.value;
        if value < up.value {
            up.value = value;
            up.provenance = if whole {
                UpperProvenance::LexicographicRule
            } else {
                UpperProvenance::SubgraphOfProduct
            };
            up.witness = format!(
                "outer {} ({:?}) times inner {} ({:?}) via map {:?}",
                outer.value, outer.provenance, inner.value, inner.provenance, decl.map
            );
        }
    }
    let strings = standard_saur(g, None)?;
    let low = q_lower(&strings, w, &cfg.seesaw)?;
    // the see-saw value is attained by a state, so any excess is rounding
    let lower = if low.value > up.value && low.value - up.value <= 1e-9 * up.value.max(1.0) {
        up.value
    } else {
        low.value
    };
    Ok(BetaEstimate {
        lower,
        upper: up.value,
        lower_provenance: low.provenance,
        upper_provenance: up.provenance,
        witness: up.witness,
        theta: up.theta,
        alpha: up.alpha,
        graph: g.clone(),
        weights: w.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::disjoint_union;

    fn unit(g: &Graph) -> Vec<f64> {
        vec![1.0; g.n()]
    }

    fn quick() -> BetaConfig {
        BetaConfig {
            seesaw: SeeSawConfig {
                restarts: 4,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    #[test]
    fn pentagon_is_pinned_by_the_cycle_rule() {
        let g = Graph::cycle(5);
        let b = beta_estimate(&g, &unit(&g), &quick()).unwrap();
        assert_eq!(b.upper, 2.0);
        assert_eq!(b.upper_provenance, UpperProvenance::CycleRule);
        assert!((b.lower - 2.0).abs() < 1e-8);
        assert!((b.theta - 5f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn anticycle_seven_interval() {
        let g = Graph::cycle(7).complement();
        let b = beta_estimate(&g, &unit(&g), &quick()).unwrap();
        let exact = (9.0 + 4.0 * 2f64.sqrt()) / 7.0;
        assert!(b.lower >= exact - 1e-6);
        assert_eq!(b.upper_provenance, UpperProvenance::Theta);
        assert!((b.upper - 2.109916).abs() < 1e-5);
        assert!(b.upper - b.lower < 0.017);
        assert!(b.lower_provenance.is_seesaw());
    }

    #[test]
    fn union_rule_adds_parts() {
        let c = Graph::cycle(7).complement();
        let g = disjoint_union(&c, &c);
        let b = beta_estimate(&g, &unit(&g), &quick()).unwrap();
        let single = 1.0 + 1.0 / (std::f64::consts::PI / 7.0).cos();
        assert!((b.upper - 2.0 * single).abs() < 1e-5);
        let exact = (9.0 + 4.0 * 2f64.sqrt()) / 7.0;
        assert!(b.lower >= 2.0 * exact - 1e-6, "{}", b.lower);
    }

    #[test]
    fn join_and_alpha_theta_rules() {
        let k3 = Graph::complete(3);
        let u = certified_upper(&k3, &[0.5, 2.0, 1.0], &SdpOptions::default()).unwrap();
        assert_eq!(u.value, 2.0);
        assert!(matches!(
            u.provenance,
            UpperProvenance::JoinRule | UpperProvenance::AlphaEqualsTheta
        ));
        let e = Graph::empty(4);
        let u = certified_upper(&e, &[1.0, 2.0, 0.0, 1.5], &SdpOptions::default()).unwrap();
        assert_eq!(u.value, 4.5);
    }

    #[test]
    fn declared_lexicographic_factorization() {
        let c = Graph::cycle(7).complement();
        let g = lexicographic(&c, &Graph::complete(2));
        let cfg = BetaConfig {
            declared: Some(DeclaredProduct::lexicographic(c.clone(), Graph::complete(2))),
            ..quick()
        };
        let b = beta_estimate(&g, &unit(&g), &cfg).unwrap();
        let inner = certified_upper(&c, &unit(&c), &cfg.sdp).unwrap().value;
        assert!((b.upper - inner).abs() < 1e-9);
        assert!(b.upper <= b.theta + 1e-6);

        let mut wrong = DeclaredProduct::lexicographic(c.clone(), Graph::empty(2));
        assert!(wrong.verify(&g, &unit(&g)).is_err());
        wrong.map.pop();
        assert!(wrong.verify(&g, &unit(&g)).is_err());
    }

    #[test]
    fn declared_subgraph_of_product() {
        let c5 = Graph::cycle(5);
        let product = lexicographic(&c5, &Graph::complete(2));
        let keep: Vec<usize> = (0..7).collect();
        let g = product.induced_subgraph(&keep);
        let cfg = BetaConfig {
            declared: Some(DeclaredProduct {
                outer: c5,
                inner: Graph::complete(2),
                map: keep,
            }),
            ..quick()
        };
        let b = beta_estimate(&g, &unit(&g), &cfg).unwrap();
        assert!(b.upper <= 2.0 + 1e-12);
        assert!(b.lower <= 2.0 + 1e-6);
    }

    #[test]
    fn json_report_carries_tags() {
        let g = Graph::cycle(5);
        let b = beta_estimate(&g, &unit(&g), &quick()).unwrap();
        let v = b.to_json();
        assert_eq!(v["upper_provenance"], "cycle-rule");
        assert_eq!(v["graph"]["n"], 5);
    }
}
