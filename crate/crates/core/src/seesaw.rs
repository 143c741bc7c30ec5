//! See-saw lower bounds on `Q({Sᵢ}, w) = max_ρ Σ wᵢ ⟨Sᵢ⟩²_ρ`.
//!
//! Both methods alternate between two convex subproblems whose optimum is an
//! extreme eigenvector, so each round is one eigen solve. Restarts are
//! independent and run through [`crate::par`].

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{weighted_independence, EXACT_SOLVER_LIMIT};
use crate::numerics::{
    c, eigh, hermiticity_deviation, lanczos_dominant_from, rng_from_seed, LanczosConfig, OperatorMatrix, PureState,
    C64, HERMITIAN_TOL,
};
use crate::par::{self, Execution};
use crate::pauli::{PauliString, PauliSumOperator};
use crate::represent::{frustration_graph, independent_set_state};

/// Pauli inputs up to this dimension are solved with dense matrices.
const DENSE_DIM: usize = 64;
const JITTER: f64 = 1e-3;
const JITTER_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub rel_tol: f64,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        SeeSawConfig {
            restarts: 32,
            max_iters: 500,
            rel_tol: 1e-12,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

impl SeeSawConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument("restarts and max_iters must be at least 1".into()));
        }
        if !(self.rel_tol >= 0.0) {
            return Err(Error::InvalidArgument("rel_tol must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeeSawMethod {
    Bilinear,
    Coefficient,
}

#[derive(Debug, Clone)]
pub struct SeeSawResult {
    pub method: SeeSawMethod,
    /// `Σ wᵢ ⟨Sᵢ⟩²` on `state`.
    pub value: f64,
    /// Final value of the alternating objective.
    pub objective: f64,
    pub state: PureState,
    /// The other state of the bilinear pair.
    pub partner: Option<PureState>,
    /// Final unit vector `c` of the coefficient method.
    pub coefficients: Option<Vec<f64>>,
    pub iterations: usize,
    /// Winning restart; index 0 is the independent-set start when present.
    pub restart: usize,
    /// Objective after every round of the winning restart.
    pub history: Vec<f64>,
}

/// Observables given either as Pauli strings or dense Hermitian matrices.
#[derive(Debug, Clone)]
pub enum Operators {
    Pauli(Vec<PauliString>),
    Dense(Vec<OperatorMatrix>),
}

impl From<Vec<PauliString>> for Operators {
    fn from(v: Vec<PauliString>) -> Self {
        Operators::Pauli(v)
    }
}

impl From<Vec<OperatorMatrix>> for Operators {
    fn from(v: Vec<OperatorMatrix>) -> Self {
        Operators::Dense(v)
    }
}

impl Operators {
    pub fn len(&self) -> usize {
        match self {
            Operators::Pauli(v) => v.len(),
            Operators::Dense(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

enum Backend {
    Dense(Vec<OperatorMatrix>),
    /// Strings and a fixed perturbation mixed into every Lanczos start.
    Sparse(Vec<PauliString>, DVector<C64>),
}

struct Engine {
    backend: Backend,
    dim: usize,
    w: Vec<f64>,
    sqrt_w: Vec<f64>,
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

impl Engine {
    fn new(ops: &Operators, w: &[f64]) -> Result<Engine> {
        if ops.is_empty() {
            return Err(Error::InvalidArgument("at least one observable is required".into()));
        }
        check_weights(ops.len(), w)?;
        let (backend, dim) = match ops {
            Operators::Pauli(strings) => {
                let n = strings[0].n_qubits();
                if let Some(s) = strings.iter().find(|s| s.n_qubits() != n) {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: s.n_qubits(),
                    });
                }
                let dim = 1usize << n;
                if dim <= DENSE_DIM {
                    let mats = strings.iter().map(PauliString::to_matrix).collect::<Result<_>>()?;
                    (Backend::Dense(mats), dim)
                } else {
                    let jitter = PureState::random(dim, &mut rng_from_seed(JITTER_SEED)).into_vector() * c(JITTER);
                    (Backend::Sparse(strings.clone(), jitter), dim)
                }
            }
            Operators::Dense(mats) => {
                let dim = mats[0].nrows();
                for m in mats {
                    if m.nrows() != dim || m.ncols() != dim {
                        return Err(Error::LengthMismatch {
                            expected: dim,
                            found: m.nrows(),
                        });
                    }
                    let dev = hermiticity_deviation(m);
                    if dev > HERMITIAN_TOL {
                        return Err(Error::NotHermitian(dev));
                    }
                }
                (Backend::Dense(mats.clone()), dim)
            }
        };
        Ok(Engine {
            backend,
            dim,
            w: w.to_vec(),
            sqrt_w: w.iter().map(|x| x.sqrt()).collect(),
        })
    }

    fn expectations(&self, psi: &PureState) -> Vec<f64> {
        match &self.backend {
            Backend::Dense(m) => m.iter().map(|a| psi.expectation(a)).collect(),
            Backend::Sparse(s, _) => s
                .iter()
                .map(|p| p.expectation(psi.vector().as_slice()).expect("dimension checked"))
                .collect(),
        }
    }

    fn q(&self, e: &[f64]) -> f64 {
        self.w.iter().zip(e).map(|(w, x)| w * x * x).sum()
    }

    /// Eigenpair of `Σ coeffᵢ Sᵢ` with the largest `|λ|`; ties go to the positive end.
    /// The sparse backend starts its Krylov space near `hint`.
    fn top_abs(&self, coeff: &[f64], hint: &PureState) -> Result<(f64, PureState)> {
        match &self.backend {
            Backend::Dense(mats) => {
                let sum = mats
                    .iter()
                    .zip(coeff)
                    .fold(OperatorMatrix::zeros(self.dim, self.dim), |acc, (m, &a)| acc + m * c(a));
                let e = eigh(&sum)?;
                let (lo, hi) = (e.min(), e.max());
                let (target, pick_low) = if -lo > hi { (lo, true) } else { (hi, false) };
                let tol = 1e-12 * target.abs().max(1.0);
                let k = if pick_low {
                    0
                } else {
                    e.values.iter().position(|&v| (v - target).abs() <= tol).expect("max present")
                };
                let v = DVector::from_iterator(self.dim, e.vectors.column(k).iter().copied());
                Ok((target, PureState::normalized(v)?))
            }
            Backend::Sparse(strings, jitter) => {
                let terms = strings.iter().zip(coeff).map(|(s, &a)| (a, s.clone())).collect();
                let h = PauliSumOperator::new(terms)?;
                let cfg = LanczosConfig {
                    tol: 1e-11,
                    max_iter: self.dim,
                    seed: JITTER_SEED,
                    exec: Execution::Sequential,
                };
                let start = PureState::normalized(hint.vector() + jitter)?;
                let apply = |v: &[C64]| h.matvec_with(v, Execution::Sequential).expect("dimension checked");
                let e = lanczos_dominant_from(self.dim, apply, &start, &cfg)?;
                Ok((e.value, e.vector))
            }
        }
    }

    fn start_state(&self, restart: usize, seed: u64) -> PureState {
        let mixed = seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        PureState::random(self.dim, &mut rng_from_seed(mixed))
    }

    fn bilinear(&self, start: PureState, cfg: &SeeSawConfig) -> Result<SeeSawResult> {
        let mut cur = start;
        let mut e_cur = self.expectations(&cur);
        let mut partner = cur.clone();
        let mut history = Vec::new();
        let mut prev = f64::NEG_INFINITY;
        let mut iterations = 0;
        for it in 1..=cfg.max_iters {
            let mut coeff: Vec<f64> = self.w.iter().zip(&e_cur).map(|(w, e)| w * e).collect();
            if coeff.iter().all(|&x| x.abs() < 1e-300) {
                coeff = self.w.clone();
            }
            let (lam, next) = self.top_abs(&coeff, &cur)?;
            let obj = lam.abs();
            history.push(obj);
            iterations = it;
            partner = cur;
            e_cur = self.expectations(&next);
            cur = next;
            if it > 1 && obj - prev <= cfg.rel_tol * obj.abs() {
                break;
            }
            prev = obj;
        }
        let q_cur = self.q(&e_cur);
        let q_partner = self.q(&self.expectations(&partner));
        let (state, other, value) = if q_partner > q_cur {
            (partner, cur, q_partner)
        } else {
            (cur, partner, q_cur)
        };
        Ok(SeeSawResult {
            method: SeeSawMethod::Bilinear,
            value,
            objective: *history.last().unwrap_or(&0.0),
            state,
            partner: Some(other),
            coefficients: None,
            iterations,
            restart: 0,
            history,
        })
    }

    fn coefficients(&self, e: &[f64]) -> Vec<f64> {
        let mut v: Vec<f64> = self.sqrt_w.iter().zip(e).map(|(s, x)| s * x).collect();
        let mut norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            v = self.sqrt_w.clone();
            norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        }
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    fn coefficient(&self, start: PureState, cfg: &SeeSawConfig) -> Result<SeeSawResult> {
        let mut state = start;
        let mut e = self.expectations(&state);
        let mut coeff = self.coefficients(&e);
        let mut history = Vec::new();
        let mut prev = f64::NEG_INFINITY;
        let mut iterations = 0;
        for it in 1..=cfg.max_iters {
            let weighted: Vec<f64> = coeff.iter().zip(&self.sqrt_w).map(|(c, s)| c * s).collect();
            let (lam, next) = self.top_abs(&weighted, &state)?;
            let obj = lam * lam;
            history.push(obj);
            iterations = it;
            state = next;
            e = self.expectations(&state);
            coeff = self.coefficients(&e);
            if it > 1 && obj - prev <= cfg.rel_tol * obj {
                break;
            }
            prev = obj;
        }
        Ok(SeeSawResult {
            method: SeeSawMethod::Coefficient,
            value: self.q(&e),
            objective: *history.last().unwrap_or(&0.0),
            state,
            partner: None,
            coefficients: Some(coeff),
            iterations,
            restart: 0,
            history,
        })
    }
}

/// Independent-set witness state for Pauli inputs whose graph is small enough.
fn witness(ops: &Operators, w: &[f64]) -> Result<Option<(PureState, Vec<usize>)>> {
    let Operators::Pauli(strings) = ops else {
        return Ok(None);
    };
    if strings.len() > EXACT_SOLVER_LIMIT {
        return Ok(None);
    }
    let g = frustration_graph(strings)?;
    let (_, set) = weighted_independence(&g, w)?;
    Ok(Some((independent_set_state(strings, &set)?, set)))
}

fn run(ops: &Operators, w: &[f64], cfg: &SeeSawConfig, method: SeeSawMethod) -> Result<SeeSawResult> {
    cfg.validate()?;
    let engine = Engine::new(ops, w)?;
    let start0 = witness(ops, w)?.map(|(s, _)| s);
    let offset = usize::from(start0.is_some());
    let total = cfg.restarts + offset;
    let results = par::map_range(cfg.exec, total, |r| -> Result<SeeSawResult> {
        let start = match (&start0, r) {
            (Some(s), 0) => s.clone(),
            _ => engine.start_state(r - offset, cfg.seed),
        };
        let mut res = match method {
            SeeSawMethod::Bilinear => engine.bilinear(start, cfg),
            SeeSawMethod::Coefficient => engine.coefficient(start, cfg),
        }?;
        res.restart = r;
        Ok(res)
    });
    let mut best: Option<SeeSawResult> = None;
    for res in results {
        let res = res?;
        if best.as_ref().is_none_or(|b| res.value > b.value) {
            best = Some(res);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Method 1: alternate `ψ₂ ←` top-|λ| eigenvector of `Σ wᵢ⟨Sᵢ⟩_{ψ₁} Sᵢ`.
pub fn seesaw_bilinear(ops: &Operators, w: &[f64], cfg: &SeeSawConfig) -> Result<SeeSawResult> {
    run(ops, w, cfg, SeeSawMethod::Bilinear)
}

/// Method 2: alternate `c ∝ (√wᵢ⟨Sᵢ⟩)` and `ψ ←` top-|λ| eigenvector of `Σ cᵢ√wᵢ Sᵢ`.
pub fn seesaw_coefficient(ops: &Operators, w: &[f64], cfg: &SeeSawConfig) -> Result<SeeSawResult> {
    run(ops, w, cfg, SeeSawMethod::Coefficient)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerProvenance {
    SeeSawBilinear,
    SeeSawCoefficient,
    IndependentSet,
}

impl LowerProvenance {
    pub fn is_seesaw(self) -> bool {
        self != LowerProvenance::IndependentSet
    }
}

#[derive(Debug, Clone)]
pub struct LowerBound {
    pub value: f64,
    pub provenance: LowerProvenance,
    /// State attaining `value`.
    pub state: PureState,
    pub bilinear: f64,
    pub coefficient: f64,
    /// `Σ wᵢ ⟨Sᵢ⟩²` on the independent-set witness state, if one was built.
    pub independent_set_value: Option<f64>,
    pub independent_set: Vec<usize>,
}

/// Best of both see-saw methods and the independent-set witness.
///
/// The witness wins ties unless a see-saw value exceeds it by more than 1e-12.
pub fn q_lower(strings: &[PauliString], w: &[f64], cfg: &SeeSawConfig) -> Result<LowerBound> {
    let ops = Operators::Pauli(strings.to_vec());
    let m1 = seesaw_bilinear(&ops, w, cfg)?;
    let m2 = seesaw_coefficient(&ops, w, cfg)?;
    let (mut value, mut provenance, mut state) = if m2.value > m1.value {
        (m2.value, LowerProvenance::SeeSawCoefficient, m2.state.clone())
    } else {
        (m1.value, LowerProvenance::SeeSawBilinear, m1.state.clone())
    };
    let mut independent_set = Vec::new();
    let mut independent_set_value = None;
    if let Some((psi, set)) = witness(&ops, w)? {
        let engine = Engine::new(&ops, w)?;
        let q = engine.q(&engine.expectations(&psi));
        if value <= q + 1e-12 {
            value = q;
            provenance = LowerProvenance::IndependentSet;
            state = psi;
        }
        independent_set = set;
        independent_set_value = Some(q);
    }
    Ok(LowerBound {
        value,
        provenance,
        state,
        bilinear: m1.value,
        coefficient: m2.value,
        independent_set_value,
        independent_set,
    })
}

/// `Σ wᵢ ⟨Sᵢ⟩²` of `state`.
pub fn quadratic_value(ops: &Operators, w: &[f64], state: &PureState) -> Result<f64> {
    let engine = Engine::new(ops, w)?;
    if state.dim() != engine.dim {
        return Err(Error::LengthMismatch {
            expected: engine.dim,
            found: state.dim(),
        });
    }
    Ok(engine.q(&engine.expectations(state)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;
    use crate::pauli::parse_pauli;
    use crate::represent::standard_saur;

    fn strings(words: &[&str]) -> Operators {
        Operators::Pauli(words.iter().map(|w| parse_pauli(w).unwrap()).collect())
    }

    fn small() -> SeeSawConfig {
        SeeSawConfig {
            restarts: 4,
            max_iters: 200,
            ..Default::default()
        }
    }

    #[test]
    fn trivial_values() {
        let x = strings(&["X"]);
        assert!((seesaw_bilinear(&x, &[1.0], &small()).unwrap().value - 1.0).abs() < 1e-12);
        let xyz = strings(&["X", "Y", "Z"]);
        for r in [
            seesaw_bilinear(&xyz, &[1.0; 3], &small()).unwrap(),
            seesaw_coefficient(&xyz, &[1.0; 3], &small()).unwrap(),
        ] {
            assert!((r.value - 1.0).abs() < 1e-10);
        }
        assert_eq!(seesaw_coefficient(&xyz, &[0.0; 3], &small()).unwrap().value, 0.0);
    }

    #[test]
    fn pentagon_reaches_two() {
        let s = standard_saur(&Graph::cycle(5), None).unwrap();
        let ops = Operators::Pauli(s);
        let r = seesaw_coefficient(&ops, &[1.0; 5], &small()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
        assert!(r.value <= 5f64.sqrt() + 1e-6);
    }

    #[test]
    fn histories_are_monotone_and_values_recompute() {
        let s = standard_saur(&Graph::cycle(7).complement(), None).unwrap();
        let ops = Operators::Pauli(s);
        let w = [1.0, 0.5, 2.0, 1.0, 0.3, 1.0, 0.8];
        for method in [seesaw_bilinear, seesaw_coefficient] {
            for seed in 0..3 {
                let cfg = SeeSawConfig { seed, ..small() };
                let r = method(&ops, &w, &cfg).unwrap();
                for pair in r.history.windows(2) {
                    assert!(pair[1] >= pair[0] - 1e-12, "{:?}", r.history);
                }
                let q = quadratic_value(&ops, &w, &r.state).unwrap();
                assert!((q - r.value).abs() < 1e-10);
                assert!(r.value + 1e-10 >= r.objective);
            }
        }
    }

    #[test]
    fn bilinear_fixpoint_is_symmetric() {
        let s = standard_saur(&Graph::cycle(5), None).unwrap();
        let r = seesaw_bilinear(&Operators::Pauli(s), &[1.0; 5], &small()).unwrap();
        assert!((r.state.overlap(r.partner.as_ref().unwrap()) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let s = standard_saur(&Graph::cycle(7).complement(), None).unwrap();
        let ops = Operators::Pauli(s);
        let a = seesaw_coefficient(&ops, &[1.0; 7], &SeeSawConfig { exec: Execution::Sequential, ..small() }).unwrap();
        let b = seesaw_coefficient(&ops, &[1.0; 7], &SeeSawConfig { exec: Execution::Parallel, ..small() }).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.restart, b.restart);
    }

    #[test]
    fn sparse_backend_matches_dense() {
        // 6 qubits goes through Lanczos, the 5-qubit half through dense matrices
        let s = standard_saur(&Graph::cycle(13), None).unwrap();
        assert_eq!(s[0].n_qubits(), 6);
        let r = seesaw_coefficient(&Operators::Pauli(s), &[1.0; 13], &small()).unwrap();
        assert!((r.value - 6.0).abs() < 1e-8);
        let s = standard_saur(&Graph::cycle(11), None).unwrap();
        let r = seesaw_coefficient(&Operators::Pauli(s), &[1.0; 11], &small()).unwrap();
        assert!((r.value - 5.0).abs() < 1e-8);
    }

    #[test]
    fn q_lower_provenance() {
        let scalars = Operators::Pauli(vec![PauliString::identity(0); 4]);
        let Operators::Pauli(v) = &scalars else { unreachable!() };
        let lb = q_lower(v, &[1.0; 4], &small()).unwrap();
        assert_eq!(lb.value, 4.0);
        assert_eq!(lb.provenance, LowerProvenance::IndependentSet);

        let c7 = standard_saur(&Graph::cycle(7), None).unwrap();
        let lb = q_lower(&c7, &[1.0; 7], &small()).unwrap();
        assert!((lb.value - 3.0).abs() < 1e-9);
        assert_eq!(lb.provenance, LowerProvenance::IndependentSet);
    }

    #[test]
    fn dense_input_and_errors() {
        let ops: Operators = vec![parse_pauli("X").unwrap().to_matrix().unwrap()].into();
        assert!((seesaw_bilinear(&ops, &[2.0], &small()).unwrap().value - 2.0).abs() < 1e-12);
        assert!(matches!(
            seesaw_bilinear(&ops, &[-1.0], &small()),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(seesaw_bilinear(&strings(&["X", "ZZ"]), &[1.0; 2], &small()).is_err());
        let cfg = SeeSawConfig { restarts: 0, ..small() };
        assert!(seesaw_bilinear(&ops, &[1.0], &cfg).is_err());
    }
}
