//! Matrix-free Lanczos for extreme eigenvalues of Pauli sums.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::pauli::PauliSumOperator;

use super::{c, rng_from_seed, PureState, C64};

/// Vector-memory guard for [`extreme_eigs`].
pub const LANCZOS_QUBIT_GUARD: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Min,
    Max,
    Both,
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig {
            tol: 1e-8,
            max_iter: 500,
            seed: 0x5eed,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtremeEig {
    pub value: f64,
    pub vector: PureState,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct ExtremeEigs {
    pub min: Option<ExtremeEig>,
    pub max: Option<ExtremeEig>,
}

/// Extreme eigenvalues of `h`; the minimum is the negated maximum of `-h`.
pub fn extreme_eigs(h: &PauliSumOperator, which: Which, cfg: &LanczosConfig) -> Result<ExtremeEigs> {
    if h.n_qubits() > LANCZOS_QUBIT_GUARD {
        return Err(Error::GuardExceeded {
            what: "qubits for Lanczos",
            value: h.n_qubits(),
            limit: LANCZOS_QUBIT_GUARD,
        });
    }
    let dim = h.dim();
    let run = |sign: f64| -> Result<ExtremeEig> {
        let apply = |v: &[C64]| -> Vec<C64> {
            let mut w = h.matvec_with(v, cfg.exec).expect("dimension checked");
            if sign < 0.0 {
                w.iter_mut().for_each(|z| *z = -*z);
            }
            w
        };
        let mut e = lanczos_largest(dim, apply, cfg)?;
        e.value *= sign;
        Ok(e)
    };
    let max = matches!(which, Which::Max | Which::Both).then(|| run(1.0)).transpose()?;
    let min = matches!(which, Which::Min | Which::Both).then(|| run(-1.0)).transpose()?;
    Ok(ExtremeEigs { min, max })
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Relative change of the extreme Ritz value below which the Ritz vector is formed.
const SETTLED: f64 = 1e-14;

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest eigenvalue of the Hermitian operator behind `apply`.
///
/// Full reorthogonalization; the Ritz pair is accepted once its residual
/// `β_k |y_k|` drops below `tol · max(1, |θ|)`.
pub fn lanczos_largest<F>(dim: usize, apply: F, cfg: &LanczosConfig) -> Result<ExtremeEig>
where
    F: Fn(&[C64]) -> Vec<C64>,
{
    let start = PureState::random(dim, &mut rng_from_seed(cfg.seed));
    lanczos_largest_from(dim, apply, &start, cfg)
}

/// [`lanczos_largest`] started from `start` instead of a seeded random vector.
pub fn lanczos_largest_from<F>(dim: usize, apply: F, start: &PureState, cfg: &LanczosConfig) -> Result<ExtremeEig>
where
    F: Fn(&[C64]) -> Vec<C64>,
{
    lanczos(dim, apply, start, cfg, Target::Largest)
}

/// Eigenpair with the largest `|λ|`, ties going to the positive end.
///
/// Only the dominant Ritz pair is tested for convergence, so a start close to
/// the answer finishes in a few steps.
pub fn lanczos_dominant_from<F>(dim: usize, apply: F, start: &PureState, cfg: &LanczosConfig) -> Result<ExtremeEig>
where
    F: Fn(&[C64]) -> Vec<C64>,
{
    lanczos(dim, apply, start, cfg, Target::Dominant)
}

#[derive(Clone, Copy)]
enum Target {
    Largest,
    Dominant,
}

fn lanczos<F>(dim: usize, apply: F, start: &PureState, cfg: &LanczosConfig, target: Target) -> Result<ExtremeEig>
where
    F: Fn(&[C64]) -> Vec<C64>,
{
    if start.dim() != dim {
        return Err(Error::LengthMismatch {
            expected: dim,
            found: start.dim(),
        });
    }
    let mut basis: Vec<Vec<C64>> = vec![start.vector().as_slice().to_vec()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let limit = cfg.max_iter.min(dim).max(1);
    let mut best = f64::NEG_INFINITY;
    let mut prev = f64::NAN;
    let (mut next_confirm, mut forced) = (1, 8);

    for j in 0..limit {
        let q = &basis[j];
        let mut w = apply(q);
        let a = dot(q, &w).re;
        alpha.push(a);
        for _ in 0..2 {
            for qi in &basis {
                let proj = dot(qi, &w);
                w.iter_mut().zip(qi).for_each(|(wk, qk)| *wk -= proj * qk);
            }
        }
        let b = norm(&w);
        let k = j + 1;
        let theta = extreme_ritz_value(&alpha, &beta, target);
        best = theta;
        let settled = (theta - prev).abs() <= SETTLED * theta.abs().max(1.0);
        prev = theta;
        let last = b < 1e-12 || k == limit;
        if last || (k >= next_confirm && (settled || k >= forced)) {
            let (theta, y) = ritz(&alpha, &beta, target);
            let residual = b * y[k - 1].abs();
            if residual < cfg.tol * theta.abs().max(1.0) || b < 1e-12 || k == dim {
                let mut x = vec![C64::new(0.0, 0.0); dim];
                for (i, qi) in basis.iter().enumerate() {
                    let yi = c(y[i]);
                    x.iter_mut().zip(qi).for_each(|(xk, qk)| *xk += yi * qk);
                }
                let vector = PureState::normalized(DVector::from_vec(x))?;
                return Ok(ExtremeEig {
                    value: theta,
                    vector,
                    residual,
                    iterations: k,
                });
            }
            next_confirm = k + (k / 8).max(2);
            forced = k + (k / 2).max(8);
        }
        if last {
            break;
        }
        beta.push(b);
        let inv = 1.0 / b;
        basis.push(w.into_iter().map(|z| z * inv).collect());
    }
    Err(Error::NoConvergence {
        iterations: limit,
        estimate: best,
    })
}

/// Number of eigenvalues of the tridiagonal `(alpha, beta)` below `x`.
fn sturm_count(alpha: &[f64], beta: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (i, &a) in alpha.iter().enumerate() {
        let off = if i == 0 { 0.0 } else { beta[i - 1] * beta[i - 1] / d };
        d = a - x - off;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Extreme eigenvalue of the tridiagonal by bisection on Sturm counts.
fn extreme_ritz_value(alpha: &[f64], beta: &[f64], target: Target) -> f64 {
    let k = alpha.len();
    let radius = |i: usize| {
        let left = if i > 0 { beta[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < k { beta[i].abs() } else { 0.0 };
        left + right
    };
    let lo = (0..k).map(|i| alpha[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let hi = (0..k).map(|i| alpha[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(scale * scale * 1e-300);
    let bisect = |want_all_below: bool| {
        let (mut a, mut b) = (lo, hi);
        while b - a > 2.0 * f64::EPSILON * a.abs().max(b.abs()) + pivmin {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let n = sturm_count(alpha, beta, mid, pivmin);
            let go_left = if want_all_below { n == k } else { n > 0 };
            if go_left {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    };
    let top = bisect(true);
    match target {
        Target::Largest => top,
        Target::Dominant => {
            let bottom = bisect(false);
            if -bottom > top {
                bottom
            } else {
                top
            }
        }
    }
}

fn ritz(alpha: &[f64], beta: &[f64], target: Target) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    let values = &eig.eigenvalues;
    let hi = (0..k).max_by(|&a, &b| values[a].total_cmp(&values[b])).expect("non-empty");
    let idx = match target {
        Target::Largest => hi,
        Target::Dominant => {
            let lo = (0..k).min_by(|&a, &b| values[a].total_cmp(&values[b])).expect("non-empty");
            if -values[lo] > values[hi] {
                lo
            } else {
                hi
            }
        }
    };
    (values[idx], eig.eigenvectors.column(idx).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigh, random_pure_state};
    use crate::pauli::{parse_pauli, PauliString};
    use rand::Rng;

    #[test]
    fn all_z_string() {
        let h = PauliSumOperator::new(vec![(1.0, parse_pauli("ZZZZZ").unwrap())]).unwrap();
        let e = extreme_eigs(&h, Which::Both, &LanczosConfig::default()).unwrap();
        assert!((e.max.unwrap().value - 1.0).abs() < 1e-10);
        assert!((e.min.unwrap().value + 1.0).abs() < 1e-10);
    }

    #[test]
    fn random_pauli_sums_match_dense() {
        let mut rng = rng_from_seed(7);
        for trial in 0..10 {
            let terms: Vec<(f64, PauliString)> = (0..5)
                .map(|_| {
                    let word: String = (0..6).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect();
                    (rng.random_range(-1.0..1.0), parse_pauli(&word).unwrap())
                })
                .collect();
            let h = PauliSumOperator::new(terms).unwrap();
            let dense = eigh(&h.to_matrix().unwrap()).unwrap();
            let cfg = LanczosConfig { seed: trial, ..Default::default() };
            let e = extreme_eigs(&h, Which::Both, &cfg).unwrap();
            let (lo, hi) = (e.min.unwrap(), e.max.unwrap());
            assert!((hi.value - dense.max()).abs() < 1e-8, "trial {trial}");
            assert!((lo.value - dense.min()).abs() < 1e-8, "trial {trial}");
            assert!(hi.value <= dense.max() + 1e-8);
        }
    }

    #[test]
    fn warm_start_at_an_eigenvector_stops_immediately() {
        let h = PauliSumOperator::new(vec![(1.0, parse_pauli("ZI").unwrap()), (0.5, parse_pauli("IZ").unwrap())]).unwrap();
        let apply = |v: &[C64]| h.matvec(v).unwrap();
        let e = lanczos_largest_from(4, apply, &PureState::basis(4, 0), &LanczosConfig::default()).unwrap();
        assert_eq!(e.iterations, 1);
        assert!((e.value - 1.5).abs() < 1e-14);
    }

    #[test]
    fn dominant_picks_largest_magnitude() {
        let h = PauliSumOperator::new(vec![
            (-2.0, parse_pauli("ZI").unwrap()),
            (0.5, parse_pauli("IX").unwrap()),
            (-0.3, parse_pauli("II").unwrap()),
        ])
        .unwrap();
        let apply = |v: &[C64]| h.matvec(v).unwrap();
        let start = random_pure_state(4, 1);
        let e = lanczos_dominant_from(4, apply, &start, &LanczosConfig::default()).unwrap();
        assert!((e.value + 2.8).abs() < 1e-10);
        let hv = h.matvec(e.vector.vector().as_slice()).unwrap();
        let r: f64 = hv.iter().zip(e.vector.vector().iter()).map(|(a, b)| (a - b * e.value).norm_sqr()).sum();
        assert!(r.sqrt() < 1e-8);
    }

    #[test]
    fn guard() {
        let h = PauliSumOperator::new(vec![(1.0, PauliString::identity(25))]).unwrap();
        assert!(matches!(
            extreme_eigs(&h, Which::Max, &LanczosConfig::default()),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
