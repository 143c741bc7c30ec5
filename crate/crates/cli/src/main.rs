use std::path::{Path, PathBuf};
use std::process::ExitCode;

use betagraph::bounds::{beta_estimate, gse_bound, parse_hamiltonian, BetaConfig, DeclaredProduct, GseConfig};
use betagraph::graphs::{independence_number, weighted_independence};
use betagraph::numerics::{extreme_eigs, LanczosConfig, Which};
use betagraph::pauli::{format_pauli_list, parse_pauli_list, PauliSumOperator};
use betagraph::represent::{complete_saur, edge_saur, frustration_graph, standard_saur};
use betagraph::sdp::{lovasz_theta, q_upper_ppt, q_upper_threehalf, SdpOptions};
use betagraph::seesaw::{Operators, SeeSawConfig};
use betagraph::{Error, Graph};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod verify;

const EXTREMAL_QUBIT_LIMIT: usize = 24;

#[derive(Parser)]
#[command(name = "betagraph", version, about = "Bounds on sums of squared expectations of anticommuting observables")]
struct Cli {
    /// Seed for see-saw restarts and random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// See-saw restarts.
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
    /// See-saw iterations per restart.
    #[arg(long, global = true, default_value_t = 500)]
    max_iters: usize,
    /// SDP tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Ppt,
    #[value(name = "3half")]
    ThreeHalf,
}

#[derive(Subcommand)]
enum Command {
    /// Frustration graph of a Pauli list.
    Frustration { paulis: PathBuf },
    /// Weighted independence number and a maximum independent set.
    Alpha {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Weighted Lovász number and its certificate matrix.
    Theta {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Certified interval for β(G, w).
    Beta {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Declares the graph as outer[inner]; both factors are checked.
        #[arg(long, num_args = 2, value_names = ["OUTER", "INNER"])]
        declare_lex: Option<Vec<PathBuf>>,
    },
    /// Standard SAUR as a Pauli list.
    StandardSaur {
        graph: PathBuf,
        /// Edges taken at successive recursion steps, as `i-j,k-l`.
        #[arg(long, value_delimiter = ',')]
        edge_sequence: Option<Vec<String>>,
    },
    /// Edge SAUR as a Pauli list.
    EdgeSaur { graph: PathBuf },
    /// Complete SAUR as a Pauli list.
    CompleteSaur { graph: PathBuf },
    /// Ground-state energy bound table for a Hamiltonian file.
    GseBound {
        hamiltonian: PathBuf,
        /// Coordinate-descent steps for the optimized weight row.
        #[arg(long, default_value_t = 200)]
        refine: usize,
    },
    /// Smallest and largest eigenvalue of a Hamiltonian file.
    ExtremalEnergy { hamiltonian: PathBuf },
    /// SDP upper bound on the sum of squared expectations of a Pauli list.
    QUpper {
        paulis: PathBuf,
        #[arg(long, value_enum, default_value_t = Level::Ppt)]
        level: Level,
        /// Required for the three-copy level.
        #[arg(long)]
        experimental: bool,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Reproduce a stored case and compare with the expected values.
    Verify {
        #[arg(value_enum)]
        case: verify::Case,
    },
}

pub struct Settings {
    pub seed: u64,
    pub seesaw: SeeSawConfig,
    pub sdp: SdpOptions,
}

pub struct Report {
    pub json: Value,
    pub text: String,
    pub mismatch: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            mismatch: false,
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Error> {
    Graph::from_json(&read(path)?)
}

fn weights_for(g: &Graph, given: Option<Vec<f64>>) -> Vec<f64> {
    given.unwrap_or_else(|| g.weights().to_vec())
}

fn parse_edge(text: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::InvalidArgument(format!("edge {text:?} is not of the form i-j"));
    let (a, b) = text.split_once('-').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn pauli_report(strings: &[betagraph::PauliString]) -> Report {
    let words: Vec<String> = strings.iter().map(|s| s.to_string()).collect();
    Report::ok(json!({ "strings": words }), format_pauli_list(strings))
}

fn run(cli: Cli) -> Result<Report, Error> {
    let settings = Settings {
        seed: cli.seed,
        seesaw: SeeSawConfig {
            restarts: cli.restarts,
            max_iters: cli.max_iters,
            seed: cli.seed,
            ..Default::default()
        },
        sdp: SdpOptions {
            tol: cli.tol,
            ..Default::default()
        },
    };
    match cli.command {
        Command::Frustration { paulis } => {
            let g = frustration_graph(&parse_pauli_list(&read(&paulis)?)?)?;
            let text = g.to_json();
            Ok(Report::ok(serde_json::from_str(&text)?, text))
        }
        Command::Alpha { graph, weights } => {
            let g = read_graph(&graph)?;
            let (value, set) = match weights {
                None if g.is_unit_weighted() => {
                    let (a, set) = independence_number(&g)?;
                    (a as f64, set)
                }
                w => weighted_independence(&g, &weights_for(&g, w))?,
            };
            Ok(Report::ok(
                json!({ "alpha": value, "independent_set": set }),
                format!("alpha = {value}\nindependent set = {set:?}"),
            ))
        }
        Command::Theta { graph, weights } => {
            let g = read_graph(&graph)?;
            let r = lovasz_theta(&g, &weights_for(&g, weights), &settings.sdp)?;
            let cert: Vec<Vec<f64>> = r.certificate.row_iter().map(|row| row.iter().copied().collect()).collect();
            Ok(Report::ok(
                json!({
                    "theta": r.value,
                    "primal": r.primal,
                    "dual": r.dual,
                    "status": r.status,
                    "iterations": r.iterations,
                    "certificate": cert,
                }),
                format!("theta = {:.10}\nstatus = {:?}", r.value, r.status),
            ))
        }
        Command::Beta {
            graph,
            weights,
            declare_lex,
        } => {
            let g = read_graph(&graph)?;
            let w = weights_for(&g, weights);
            let declared = match declare_lex.as_deref() {
                Some([outer, inner]) => Some(DeclaredProduct::lexicographic(read_graph(outer)?, read_graph(inner)?)),
                _ => None,
            };
            let cfg = BetaConfig {
                seesaw: settings.seesaw,
                sdp: settings.sdp,
                declared,
            };
            let b = beta_estimate(&g, &w, &cfg)?;
            let text = format!(
                "beta in [{:.10}, {:.10}]\nlower: {:?}\nupper: {:?} ({})\ntheta = {:.10}",
                b.lower, b.upper, b.lower_provenance, b.upper_provenance, b.witness, b.theta
            );
            Ok(Report::ok(b.to_json(), text))
        }
        Command::StandardSaur { graph, edge_sequence } => {
            let g = read_graph(&graph)?;
            let seq = edge_sequence
                .map(|v| v.iter().map(|e| parse_edge(e)).collect::<Result<Vec<_>, _>>())
                .transpose()?;
            Ok(pauli_report(&standard_saur(&g, seq.as_deref())?))
        }
        Command::EdgeSaur { graph } => Ok(pauli_report(&edge_saur(&read_graph(&graph)?, None)?)),
        Command::CompleteSaur { graph } => Ok(pauli_report(&complete_saur(&read_graph(&graph)?)?)),
        Command::GseBound { hamiltonian, refine } => {
            let terms = parse_hamiltonian(&read(&hamiltonian)?)?;
            let cfg = GseConfig {
                sdp: settings.sdp,
                seesaw: settings.seesaw,
                refine_iterations: refine,
                reference: true,
            };
            let r = gse_bound(&terms, &cfg)?;
            let mut text = String::from("row        bound         q_upper       provenance\n");
            for (i, row) in r.rows.iter().enumerate() {
                let mark = if i == r.best { " *" } else { "" };
                text += &format!(
                    "{:<10} {:<13.8} {:<13.8} {:?}{mark}\n",
                    row.label, row.bound, row.q_upper, row.upper_provenance
                );
            }
            if let Some(reference) = r.reference {
                text += &format!("reference (see-saw, not certified) = {reference:.8}\n");
            }
            Ok(Report::ok(serde_json::to_value(&r)?, text))
        }
        Command::ExtremalEnergy { hamiltonian } => {
            let terms = parse_hamiltonian(&read(&hamiltonian)?)?;
            let h = PauliSumOperator::new(terms)?;
            if h.n_qubits() > EXTREMAL_QUBIT_LIMIT {
                return Err(Error::GuardExceeded {
                    what: "qubits for extremal-energy",
                    value: h.n_qubits(),
                    limit: EXTREMAL_QUBIT_LIMIT,
                });
            }
            let cfg = LanczosConfig {
                tol: 1e-10,
                max_iter: 1000,
                seed: settings.seed,
                ..Default::default()
            };
            let e = extreme_eigs(&h, Which::Both, &cfg)?;
            let (lo, hi) = (e.min.expect("requested").value, e.max.expect("requested").value);
            Ok(Report::ok(
                json!({ "min": lo, "max": hi, "qubits": h.n_qubits() }),
                format!("min = {lo:.10}\nmax = {hi:.10}"),
            ))
        }
        Command::QUpper {
            paulis,
            level,
            experimental,
            weights,
        } => {
            let strings = parse_pauli_list(&read(&paulis)?)?;
            let w = weights.unwrap_or_else(|| vec![1.0; strings.len()]);
            let ops = Operators::Pauli(strings);
            let r = match level {
                Level::Ppt => q_upper_ppt(&ops, &w, &[], &settings.sdp)?,
                Level::ThreeHalf if experimental => q_upper_threehalf(&ops, &w, &settings.sdp)?,
                Level::ThreeHalf => {
                    return Err(Error::InvalidArgument("--level 3half needs --experimental".into()));
                }
            };
            let text = format!("upper = {:.10}\nstatus = {:?}", r.value, r.status);
            Ok(Report::ok(serde_json::to_value(&r)?, text))
        }
        Command::Verify { case } => verify::run(case, &settings),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::LengthMismatch { .. }
        | Error::GuardExceeded { .. }
        | Error::ExactSolverLimit { .. }
        | Error::InvalidGraph(_)
        | Error::NotAnEdge(..)
        | Error::InvalidWeight { .. }
        | Error::InvalidArgument(_)
        | Error::Io(_) => 2,
        Error::NonCommuting(..)
        | Error::NotNormalized { .. }
        | Error::NotHermitian(_)
        | Error::NoConvergence { .. }
        | Error::Representation(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("json value")),
                Format::Text => print!("{}", report.text.trim_end().to_string() + "\n"),
            }
            if report.mismatch {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
