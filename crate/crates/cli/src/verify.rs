use betagraph::bounds::{
    certified_upper, gse_bound, ladder_dual_check, ladder_value, ladder_value_scan, parse_hamiltonian, GseConfig,
};
use betagraph::numerics::{c, eigh, extreme_eigs, LanczosConfig, OperatorMatrix, PureState, Which};
use betagraph::pauli::{parse_pauli_list, PauliString, PauliSumOperator};
use betagraph::represent::{frustration_graph, saura_from_or, standard_saur, OrthogonalRepresentation};
use betagraph::sdp::{ladder_sdp, lovasz_theta};
use betagraph::seesaw::{q_lower, quadratic_value, Operators, SeeSawConfig};
use betagraph::{Error, Graph};
use clap::ValueEnum;
use nalgebra::DVector;
use serde::Serialize;
use serde_json::json;

use crate::{Report, Settings};

const C7BAR_STRINGS: &str = include_str!("../../../data/c7bar.txt");
const H14: &str = include_str!("../../../data/h14.txt");
const H27: &str = include_str!("../../../data/h27.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    C7bar,
    C5,
    Pentagon,
    Ladder,
    H14,
    C9bar,
    AnticycleScan,
}

#[derive(Serialize)]
struct Check {
    name: String,
    value: f64,
    expected: String,
    pass: bool,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn near(&mut self, name: &str, value: f64, expected: f64, tol: f64) {
        self.0.push(Check {
            name: name.into(),
            value,
            expected: format!("{expected} ± {tol:e}"),
            pass: (value - expected).abs() <= tol,
        });
    }

    fn at_least(&mut self, name: &str, value: f64, bound: f64) {
        self.0.push(Check {
            name: name.into(),
            value,
            expected: format!(">= {bound}"),
            pass: value >= bound,
        });
    }

    fn at_most(&mut self, name: &str, value: f64, bound: f64) {
        self.0.push(Check {
            name: name.into(),
            value,
            expected: format!("<= {bound}"),
            pass: value <= bound,
        });
    }

    fn holds(&mut self, name: &str, ok: bool) {
        self.0.push(Check {
            name: name.into(),
            value: f64::from(u8::from(ok)),
            expected: "1".into(),
            pass: ok,
        });
    }

    fn report(self, case: Case) -> Report {
        let pass = self.0.iter().all(|c| c.pass);
        let mut text = String::new();
        for c in &self.0 {
            let tag = if c.pass { "ok" } else { "MISMATCH" };
            text += &format!("{:<44} {:<22.12} expected {:<26} {tag}\n", c.name, c.value, c.expected);
        }
        text += if pass { "PASS\n" } else { "FAIL\n" };
        Report {
            json: json!({ "case": format!("{case:?}").to_lowercase(), "pass": pass, "checks": self.0 }),
            text,
            mismatch: !pass,
        }
    }
}

fn seesaw(settings: &Settings, restarts_cap: usize) -> SeeSawConfig {
    SeeSawConfig {
        restarts: settings.seesaw.restarts.min(restarts_cap),
        ..settings.seesaw
    }
}

fn anticycle(m: usize) -> Graph {
    Graph::cycle(m).complement()
}

fn is_anticycle(g: &Graph, m: usize) -> bool {
    g.n() == m && g.complement().cycle_order().is_some()
}

pub fn run(case: Case, s: &Settings) -> Result<Report, Error> {
    let mut k = Checks::default();
    match case {
        Case::C7bar => {
            let g = anticycle(7);
            let exact = (9.0 + 4.0 * 2f64.sqrt()) / 7.0;
            let low = q_lower(&standard_saur(&g, None)?, &[1.0; 7], &seesaw(s, usize::MAX))?;
            k.at_least("see-saw lower bound", low.value, exact - 1e-6);
            k.at_least("exceeds alpha = 2 by", low.value - 2.0, 1e-3);
            let strings = parse_pauli_list(C7BAR_STRINGS)?;
            k.holds("listed strings realize the anti-heptagon", is_anticycle(&frustration_graph(&strings)?, 7));
            let h = PauliSumOperator::from_strings(&strings)?.to_matrix()?;
            let e = eigh(&h)?;
            let last = e.values.len() - 1;
            let dominant = if e.values[0].abs() > e.values[last].abs() { 0 } else { last };
            k.near("dominant eigenvalue of the sum, magnitude", e.values[dominant].abs(), 1.0 + 2.0 * 2f64.sqrt(), 1e-9);
            let top = PureState::normalized(e.vectors.column(dominant).into_owned())?;
            let q = quadratic_value(&Operators::Pauli(strings), &[1.0; 7], &top)?;
            k.near("value at dominant eigenvector of the sum", q, exact, 1e-9);
            let theta = lovasz_theta(&g, &[1.0; 7], &s.sdp)?.value;
            k.near("theta", theta, 1.0 + 1.0 / (std::f64::consts::PI / 7.0).cos(), 1e-5);
        }
        Case::C5 => {
            let g = Graph::cycle(5);
            let low = q_lower(&standard_saur(&g, None)?, &[1.0; 5], &seesaw(s, usize::MAX))?;
            k.near("see-saw lower bound", low.value, 2.0, 1e-8);
            let up = certified_upper(&g, &[1.0; 5], &s.sdp)?;
            k.near("rule-certified upper bound", up.value, 2.0, 0.0);
            k.near("theta", up.theta, 5f64.sqrt(), 1e-6);
            let c7 = Graph::cycle(7);
            let low7 = q_lower(&standard_saur(&c7, None)?, &[1.0; 7], &seesaw(s, usize::MAX))?;
            k.near("see-saw lower bound, heptagon", low7.value, 3.0, 1e-8);
            k.near("rule-certified upper, heptagon", certified_upper(&c7, &[1.0; 7], &s.sdp)?.value, 3.0, 0.0);
        }
        Case::Pentagon => {
            let ops = saura_from_or(&OrthogonalRepresentation::pentagon())?;
            let rho = (OperatorMatrix::identity(2, 2) + PauliString::single(1, 0, 'X')?.to_matrix()?) * c(0.5);
            let value: f64 = ops.iter().map(|a| (rho.clone() * a).trace().re.powi(2)).sum();
            k.near("sum of squared expectations", value, 5f64.sqrt(), 1e-10);
            let theta = lovasz_theta(&Graph::cycle(5), &[1.0; 5], &s.sdp)?.value;
            k.near("theta of the pentagon", theta, 5f64.sqrt(), 1e-6);
        }
        Case::Ladder => {
            let dual = ladder_dual_check()?;
            k.at_least("dual certificate min eigenvalue", dual.min_eigenvalue, -1e-9);
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let bell = PureState::new(DVector::from_vec(vec![c(h), c(0.0), c(0.0), c(h)]))?;
            k.near("Bell state value", ladder_value(&bell)?, 1.0, 1e-12);
            let scan = ladder_value_scan(10_000, s.seed)?;
            k.at_most("largest sampled value", scan.max, 1.0 + 1e-9);
            let sdp = ladder_sdp(&s.sdp)?;
            k.near("relaxation value", sdp.primal_value, 1.0, 1e-6);
        }
        Case::H14 => {
            let terms = parse_hamiltonian(H14)?;
            let strings: Vec<PauliString> = terms.iter().map(|t| t.1.clone()).collect();
            k.holds("frustration graph is the anti-heptagon", is_anticycle(&frustration_graph(&strings)?, 7));
            let h = PauliSumOperator::new(terms.clone())?;
            let cfg = LanczosConfig {
                tol: 1e-10,
                max_iter: 1000,
                seed: s.seed,
                ..Default::default()
            };
            let e = extreme_eigs(&h, Which::Both, &cfg)?;
            let (lo, hi) = (e.min.expect("requested").value, e.max.expect("requested").value);
            let target = 1.0 + 2.0 * 2f64.sqrt();
            k.near("largest eigenvalue", hi, target, 1e-5);
            k.near("smallest eigenvalue", lo, -target, 1e-5);
            let low = q_lower(&standard_saur(&anticycle(7), None)?, &[1.0; 7], &seesaw(s, usize::MAX))?;
            k.near("sqrt(7 beta_lower)", (7.0 * low.value).sqrt(), hi, 1e-5);
            let gse = gse_bound(
                &terms,
                &GseConfig {
                    sdp: s.sdp,
                    seesaw: seesaw(s, usize::MAX),
                    refine_iterations: 0,
                    reference: false,
                },
            )?;
            k.at_least("certified energy bound minus eigenvalue", gse.bound - hi, -1e-8);
        }
        Case::C9bar => {
            let g = anticycle(9);
            let strings = standard_saur(&g, None)?;
            let cfg = SeeSawConfig {
                max_iters: 500,
                ..seesaw(s, 64)
            };
            let low = q_lower(&strings, &[1.0; 9], &cfg)?;
            k.near("see-saw, standard SAUR", low.value, 2.057505, 1e-4);
            let padded: Vec<PauliString> = strings.iter().map(|p| p.tensor(&PauliString::identity(1))).collect();
            let low16 = q_lower(&padded, &[1.0; 9], &cfg)?;
            k.near("see-saw, 16-dimensional SAUR", low16.value, 2.057505, 1e-4);
            let theta = lovasz_theta(&g, &[1.0; 9], &s.sdp)?.value;
            k.at_least("sqrt(9 theta)", (9.0 * theta).sqrt(), 4.303201);
            let terms = parse_hamiltonian(H27)?;
            let h27: Vec<PauliString> = terms.iter().map(|t| t.1.clone()).collect();
            k.holds("27-qubit strings realize the anti-enneagon", is_anticycle(&frustration_graph(&h27)?, 9));
            let gse = gse_bound(
                &terms,
                &GseConfig {
                    sdp: s.sdp,
                    seesaw: cfg,
                    refine_iterations: 0,
                    reference: true,
                },
            )?;
            k.at_least("certified energy bound", gse.bound, 4.303201);
            k.near("reference sqrt(9 beta_lower)", gse.reference.unwrap_or(f64::NAN), 4.303201, 1e-4);
        }
        Case::AnticycleScan => return anticycle_scan(s),
    }
    Ok(k.report(case))
}

fn anticycle_scan(s: &Settings) -> Result<Report, Error> {
    let mut csv = String::from("n,beta_lower,theta\n");
    let mut rows = Vec::new();
    let mut consistent = true;
    for n in 2..=10usize {
        let m = 2 * n + 1;
        let g = anticycle(m);
        let w = vec![1.0; m];
        let low = q_lower(&standard_saur(&g, None)?, &w, &s.seesaw)?;
        let theta = lovasz_theta(&g, &w, &s.sdp)?.value;
        consistent &= low.value >= 2.0 - 1e-9 && low.value <= theta + 1e-6;
        csv += &format!("{n},{:.8},{:.8}\n", low.value, theta);
        rows.push(json!({ "n": n, "beta_lower": low.value, "theta": theta }));
    }
    Ok(Report {
        json: json!({ "case": "anticycle-scan", "pass": consistent, "rows": rows }),
        text: csv,
        mismatch: !consistent,
    })
}
