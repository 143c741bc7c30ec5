use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{c, DensityState, OperatorMatrix, PureState, C64};

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

impl PureState {
    /// Haar-random state drawn from `rng`.
    pub fn random(dim: usize, rng: &mut Rng) -> PureState {
        loop {
            let v = DVector::from_fn(dim, |_, _| gaussian(rng));
            if let Ok(s) = PureState::normalized(v) {
                return s;
            }
        }
    }
}

pub fn random_pure_state(dim: usize, seed: u64) -> PureState {
    PureState::random(dim, &mut rng_from_seed(seed))
}

/// Normalized complex Wishart matrix `GG†/tr(GG†)` with `G` of shape `dim × rank`.
pub fn random_density(dim: usize, seed: u64, rank: usize) -> DensityState {
    assert!(rank >= 1 && rank <= dim, "rank must lie in 1..=dim");
    let mut rng = rng_from_seed(seed);
    let g = OperatorMatrix::from_fn(dim, rank, |_, _| gaussian(&mut rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityState(m / c(tr))
}

/// GUE-like random Hermitian matrix.
pub fn random_hermitian(dim: usize, seed: u64) -> OperatorMatrix {
    let mut rng = rng_from_seed(seed);
    let g = OperatorMatrix::from_fn(dim, dim, |_, _| gaussian(&mut rng));
    (&g + g.adjoint()) * c(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::min_eigenvalue;

    #[test]
    fn scalar_state() {
        let s = random_pure_state(1, 3);
        assert!((s.vector()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn seeded_determinism() {
        assert_eq!(random_pure_state(8, 42), random_pure_state(8, 42));
        assert_ne!(random_pure_state(8, 42), random_pure_state(8, 43));
        assert_eq!(random_density(4, 5, 2), random_density(4, 5, 2));
    }

    #[test]
    fn densities_are_valid() {
        for seed in 0..20 {
            for rank in 1..=4 {
                let rho = random_density(4, seed, rank);
                assert!(min_eigenvalue(rho.matrix()).unwrap() >= -1e-10);
                assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mean_purity_matches_wishart() {
        // E[tr ρ²] = (d + k) / (d k + 1) for the induced (Wishart) measure
        let (d, k) = (4usize, 4usize);
        let samples = 1000;
        let mean: f64 = (0..samples)
            .map(|s| random_density(d, s as u64, k).purity())
            .sum::<f64>()
            / samples as f64;
        let expected = (d + k) as f64 / (d * k + 1) as f64;
        assert!((mean - expected).abs() < 0.1 * expected, "{mean} vs {expected}");
    }
}
