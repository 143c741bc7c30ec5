//! Dense and matrix-free linear algebra on complex Hermitian operators.

mod eigh;
mod lanczos;
mod random;

pub use eigh::{eigh, Eigh};
pub use lanczos::{extreme_eigs, lanczos_dominant_from, lanczos_largest, lanczos_largest_from, ExtremeEig, ExtremeEigs, LanczosConfig, Which};
pub use random::{random_density, random_hermitian, random_pure_state, rng_from_seed, Rng};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex square matrix.
pub type OperatorMatrix = DMatrix<C64>;

/// Tolerance for Hermiticity checks relative to the matrix scale.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Unit complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(DVector<C64>);

impl PureState {
    /// Accepts `v` if it has unit norm to 1e-12.
    pub fn new(v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { index: 0, norm });
        }
        Ok(PureState(v))
    }

    /// Normalizes `v`; fails on the zero vector.
    pub fn normalized(v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { index: 0, norm });
        }
        Ok(PureState(v / c(norm)))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = c(1.0);
        PureState(v)
    }

    pub fn vector(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `Re ⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, a: &OperatorMatrix) -> f64 {
        self.0.dotc(&(a * &self.0)).re
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState(self.0.kronecker(&other.0))
    }

    pub fn density(&self) -> DensityState {
        DensityState(&self.0 * self.0.adjoint())
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.0.dotc(&other.0).norm()
    }
}

/// Positive semidefinite unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState(OperatorMatrix);

impl DensityState {
    /// Validates Hermiticity, positivity and unit trace (1e-10).
    pub fn new(m: OperatorMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidArgument("density matrix must be square".into()));
        }
        let dev = hermiticity_deviation(&m);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("trace {tr} is not 1")));
        }
        if !is_psd(&m, 1e-10)? {
            return Err(Error::InvalidArgument("density matrix is not PSD".into()));
        }
        Ok(DensityState(m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityState(OperatorMatrix::identity(dim, dim) / c(dim as f64))
    }

    pub fn matrix(&self) -> &OperatorMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Re tr(ρA)`.
    pub fn expectation(&self, a: &OperatorMatrix) -> f64 {
        trace_product(&self.0, a).re
    }

    pub fn tensor(&self, other: &DensityState) -> DensityState {
        DensityState(self.0.kronecker(&other.0))
    }
}

/// `tr(AB)` without forming the product.
pub fn trace_product(a: &OperatorMatrix, b: &OperatorMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `max |M - M†|` entrywise.
pub fn hermiticity_deviation(m: &OperatorMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    a.kronecker(b)
}

/// `AB + BA`.
pub fn anticommutator(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    a * b + b * a
}

/// `AB - BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    a * b - b * a
}

/// Whether the smallest eigenvalue of a Hermitian matrix is at least `-tol`.
pub fn is_psd(m: &OperatorMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -tol)
}

pub fn min_eigenvalue(m: &OperatorMatrix) -> Result<f64> {
    Ok(eigh(m)?.values[0])
}

/// Largest `|λ|` of a Hermitian matrix.
pub fn spectral_norm(m: &OperatorMatrix) -> Result<f64> {
    let e = eigh(m)?;
    Ok(e.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
}

/// Transposes the second tensor factor of an operator on `C^{dA} ⊗ C^{dB}`.
pub fn partial_transpose(m: &OperatorMatrix, dims: (usize, usize)) -> Result<OperatorMatrix> {
    let (da, db) = dims;
    if m.nrows() != da * db || m.ncols() != da * db {
        return Err(Error::LengthMismatch {
            expected: da * db,
            found: m.nrows(),
        });
    }
    let mut out = OperatorMatrix::zeros(da * db, da * db);
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    out[(a * db + b2, a2 * db + b)] = m[(a * db + b, a2 * db + b2)];
                }
            }
        }
    }
    Ok(out)
}

/// `F = Σ |ij⟩⟨ji|` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> OperatorMatrix {
    let mut f = OperatorMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = c(1.0);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_pauli;

    fn pm(s: &str) -> OperatorMatrix {
        parse_pauli(s).unwrap().to_matrix().unwrap()
    }

    #[test]
    fn bell_state_is_not_ppt() {
        let s = 1.0 / 2f64.sqrt();
        let psi = PureState::new(DVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)])).unwrap();
        let pt = partial_transpose(psi.density().matrix(), (2, 2)).unwrap();
        let lmin = min_eigenvalue(&pt).unwrap();
        assert!((lmin + 0.5).abs() < 1e-12);
        assert!(!is_psd(&pt, 1e-9).unwrap());
    }

    #[test]
    fn swap_squares_to_identity() {
        let f = swap_operator(2);
        assert_eq!(&f * &f, OperatorMatrix::identity(4, 4));
        let f3 = swap_operator(3);
        assert_eq!(&f3 * &f3, OperatorMatrix::identity(9, 9));
    }

    #[test]
    fn ladder_certificate_is_psd() {
        let w = pm("IYIY") + pm("XXXX") + pm("ZZZZ") - pm("YYYY");
        let m = OperatorMatrix::identity(16, 16) - pm("XZXZ") - pm("YIYI") - pm("ZXZX") - w;
        assert!(is_psd(&m, 1e-9).unwrap());
    }

    #[test]
    fn partial_transpose_properties() {
        let rho = random_density(6, 11, 3);
        let m = rho.matrix();
        let pt = partial_transpose(m, (2, 3)).unwrap();
        let back = partial_transpose(&pt, (2, 3)).unwrap();
        assert_eq!(&back, m);
        assert!((pt.trace() - m.trace()).norm() < 1e-15);
        assert!(hermiticity_deviation(&pt) < 1e-15);
        assert!(partial_transpose(m, (2, 2)).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityState::new(OperatorMatrix::identity(2, 2)).is_err());
        assert!(DensityState::new(pm("Z")).is_err());
        let mixed = DensityState::maximally_mixed(4);
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
        assert!(DensityState::new(mixed.matrix().clone()).is_ok());
    }
}
