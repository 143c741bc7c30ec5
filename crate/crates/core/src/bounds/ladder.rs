use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c, min_eigenvalue, rng_from_seed, OperatorMatrix, PureState};
use crate::pauli::parse_pauli;

const LADDER_TERMS: [(&str, f64); 4] = [("IY", 1.0), ("XX", 1.0), ("ZZ", 1.0), ("YY", -1.0)];
const LADDER_CUTS: [&str; 3] = ["XZXZ", "YIYI", "ZXZX"];
const FIVE_TERMS: [&str; 5] = ["IX", "IZ", "XY", "YY", "ZY"];
const OPTIMIZED_STARTS: usize = 16;
const OPTIMIZED_STEPS: usize = 200;

fn matrix(word: &str) -> OperatorMatrix {
    parse_pauli(word)
        .and_then(|p| p.to_matrix())
        .expect("fixed Pauli word")
}

/// `W = 𝟙Y𝟙Y + XXXX + ZZZZ − YYYY` on two copies of two qubits.
pub fn ladder_operator() -> OperatorMatrix {
    LADDER_TERMS
        .iter()
        .fold(OperatorMatrix::zeros(16, 16), |acc, &(w, s)| {
            let m = matrix(w);
            acc + crate::numerics::kron(&m, &m) * c(s)
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderDual {
    /// Smallest eigenvalue of `𝟙 − XZXZ − Y𝟙Y𝟙 − ZXZX − W`.
    pub min_eigenvalue: f64,
    pub pass: bool,
}

/// Checks that `𝟙 − XZXZ − Y𝟙Y𝟙 − ZXZX − W ⪰ 0`, which certifies
/// `⟨𝟙Y⟩² + ⟨XX⟩² + ⟨ZZ⟩² − ⟨YY⟩² ≤ 1`.
pub fn ladder_dual_check() -> Result<LadderDual> {
    let mut m = OperatorMatrix::identity(16, 16) - ladder_operator();
    for cut in LADDER_CUTS {
        m -= matrix(cut);
    }
    let min_eigenvalue = min_eigenvalue(&m)?;
    Ok(LadderDual {
        min_eigenvalue,
        pass: min_eigenvalue >= -1e-9,
    })
}

fn check_two_qubits(psi: &PureState) -> Result<()> {
    if psi.dim() != 4 {
        return Err(Error::LengthMismatch {
            expected: 4,
            found: psi.dim(),
        });
    }
    Ok(())
}

/// `⟨𝟙Y⟩² + ⟨XX⟩² + ⟨ZZ⟩² − ⟨YY⟩²` on a two-qubit state.
pub fn ladder_value(psi: &PureState) -> Result<f64> {
    check_two_qubits(psi)?;
    Ok(LADDER_TERMS
        .iter()
        .map(|&(w, s)| s * psi.expectation(&matrix(w)).powi(2))
        .sum())
}

/// `⟨𝟙X⟩² + ⟨𝟙Z⟩² + ⟨XY⟩² + ⟨YY⟩² + ⟨ZY⟩²` on a two-qubit state.
pub fn five_operator_sum(psi: &PureState) -> Result<f64> {
    check_two_qubits(psi)?;
    Ok(FIVE_TERMS.iter().map(|w| psi.expectation(&matrix(w)).powi(2)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderScan {
    pub samples: usize,
    pub max_random: f64,
    pub max_optimized: f64,
    pub max: f64,
}

/// Largest ladder value found over `samples` random pure states and over
/// locally optimized states.
pub fn ladder_value_scan(samples: usize, seed: u64) -> Result<LadderScan> {
    let mut rng = rng_from_seed(seed);
    let mut max_random = f64::NEG_INFINITY;
    for _ in 0..samples {
        max_random = max_random.max(ladder_value(&PureState::random(4, &mut rng))?);
    }
    let terms: Vec<(OperatorMatrix, f64)> = LADDER_TERMS.iter().map(|&(w, s)| (matrix(w), s)).collect();
    let mut max_optimized = f64::NEG_INFINITY;
    for _ in 0..OPTIMIZED_STARTS {
        let mut psi = PureState::random(4, &mut rng);
        let mut value = ladder_value(&psi)?;
        let mut step = 1.0;
        for _ in 0..OPTIMIZED_STEPS {
            // projected gradient of Σ sₖ⟨Aₖ⟩² is (L − ⟨L⟩)ψ with L = Σ sₖ⟨Aₖ⟩Aₖ
            let lin = terms
                .iter()
                .fold(OperatorMatrix::zeros(4, 4), |acc, (a, s)| acc + a * c(s * psi.expectation(a)));
            let v = psi.vector();
            let grad = &lin * v - v * c(psi.expectation(&lin));
            if grad.norm() < 1e-13 {
                break;
            }
            step = (step * 2.0f64).min(1.0);
            loop {
                let trial = PureState::normalized(v + &grad * c(step))?;
                let t = ladder_value(&trial)?;
                if t > value {
                    psi = trial;
                    value = t;
                    break;
                }
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
            }
            if step < 1e-12 {
                break;
            }
        }
        max_optimized = max_optimized.max(value);
    }
    Ok(LadderScan {
        samples,
        max_random,
        max_optimized,
        max: max_random.max(max_optimized),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn bell() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(DVector::from_vec(vec![c(h), c(0.0), c(0.0), c(h)])).unwrap()
    }

    #[test]
    fn dual_certificate_is_psd() {
        let d = ladder_dual_check().unwrap();
        assert!(d.pass);
        assert!(d.min_eigenvalue.abs() < 1e-9);
    }

    #[test]
    fn bell_state_attains_one() {
        assert!((ladder_value(&bell()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scan_stays_below_one() {
        let s = ladder_value_scan(2000, 7).unwrap();
        assert!(s.max <= 1.0 + 1e-9);
        assert!(s.max_optimized > 1.0 - 1e-6, "{}", s.max_optimized);
    }

    #[test]
    fn five_operator_identity() {
        for seed in 0..20 {
            let psi = crate::numerics::random_pure_state(4, seed);
            assert!((five_operator_sum(&psi).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(ladder_value(&PureState::basis(2, 0)).is_err());
    }
}
