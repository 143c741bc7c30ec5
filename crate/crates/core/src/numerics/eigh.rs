//! Dense Hermitian eigendecomposition.

use crate::error::{Error, Result};

use super::{hermiticity_deviation, OperatorMatrix, C64, HERMITIAN_TOL};

#[cfg(test)]
const MAX_SWEEPS: usize = 60;

/// Spectral decomposition with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: OperatorMatrix,
}

impl Eigh {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eigh(m: &OperatorMatrix) -> Result<Eigh> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidArgument("eigh needs a square matrix".into()));
    }
    let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let dev = hermiticity_deviation(m);
    if dev > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let sym = OperatorMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let se = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = OperatorMatrix::from_fn(n, n, |r, col| se.eigenvectors[(r, order[col])]);
    Ok(Eigh { values, vectors })
}

#[cfg(test)]
fn jacobi(a: &mut [C64], v: &mut [C64], n: usize) {
    let frob: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if frob == 0.0 {
        return;
    }
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * frob {
            return;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                if r < 1e-18 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    continue;
                }
                // phase d makes the (p,q) entry real, then a real rotation zeroes it
                let d = apq.conj() / r;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let sd = d * sn;
                let cd = d * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * cs - sd * akq;
                    a[k * n + q] = akp * sn + cd * akq;
                }
                let sdc = sd.conj();
                let cdc = cd.conj();
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * cs - sdc * aqk;
                    a[q * n + k] = apk * sn + cdc * aqk;
                }
                a[p * n + p] = C64::new(app - t * r, 0.0);
                a[q * n + q] = C64::new(aqq + t * r, 0.0);
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * cs - sd * vkq;
                    v[k * n + q] = vkp * sn + cd * vkq;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, random_hermitian};
    use crate::pauli::parse_pauli;

    fn residual(m: &OperatorMatrix, e: &Eigh) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, &lam) in e.values.iter().enumerate() {
            let col = e.vectors.column(k);
            worst = worst.max((m * col - col * c(lam)).norm());
        }
        worst
    }

    #[test]
    fn pauli_z() {
        let z = parse_pauli("Z").unwrap().to_matrix().unwrap();
        let e = eigh(&z).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn pauli_y_is_complex() {
        let y = parse_pauli("Y").unwrap().to_matrix().unwrap();
        let e = eigh(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        assert!(residual(&y, &e) < 1e-14);
    }

    #[test]
    fn random_reconstruction() {
        for seed in 0..5 {
            let m = random_hermitian(16, seed);
            let e = eigh(&m).unwrap();
            let d = OperatorMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                16,
                e.values.iter().map(|&x| c(x)),
            ));
            let rebuilt = &e.vectors * d * e.vectors.adjoint();
            assert!((rebuilt - &m).norm() < 1e-9);
            let gram = e.vectors.adjoint() * &e.vectors;
            assert!((gram - OperatorMatrix::identity(16, 16)).norm() < 1e-10);
            let norm = m.norm();
            assert!(residual(&m, &e) < 1e-10 * norm);
            let tr: f64 = e.values.iter().sum();
            assert!((tr - m.trace().re).abs() < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn agrees_with_jacobi_sweeps() {
        let n = 24;
        let m = random_hermitian(n, 99);
        let mut a: Vec<C64> = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
        let mut v = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i * n + i] = C64::new(1.0, 0.0);
        }
        jacobi(&mut a, &mut v, n);
        let mut theirs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
        theirs.sort_by(f64::total_cmp);
        let ours = eigh(&m).unwrap();
        for (a, b) in ours.values.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn anti_heptagon_sum_has_simple_dominant_end() {
        let words = ["ZZI", "ZII", "IXI", "XII", "XZX", "YZZ", "YYY"];
        let ops: Vec<OperatorMatrix> = words.iter().map(|w| parse_pauli(w).unwrap().to_matrix().unwrap()).collect();
        let sum = ops.iter().fold(OperatorMatrix::zeros(8, 8), |acc, m| acc + m);
        let e = eigh(&sum).unwrap();
        let rt2 = 2f64.sqrt();
        assert!((e.values[0] + 1.0 + 2.0 * rt2).abs() < 1e-12);
        assert!(e.values[1] - e.values[0] > 1.0);
        assert!((e.values[7] - e.values[6]).abs() < 1e-12);
        let v = e.vectors.column(0);
        let q: f64 = ops.iter().map(|m| (v.adjoint() * m * v)[(0, 0)].re.powi(2)).sum();
        assert!((q - (9.0 + 4.0 * rt2) / 7.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_zero() {
        let e = eigh(&OperatorMatrix::identity(5, 5)).unwrap();
        assert!(e.values.iter().all(|&x| x == 1.0));
        let e = eigh(&OperatorMatrix::zeros(3, 3)).unwrap();
        assert!(e.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = OperatorMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian(_))));
    }
}
