//! Pauli strings in symplectic (x, z) form.
//!
//! A string on `n` qubits is stored as two bit vectors packed into `u64`
//! words plus a sign. Its matrix is `sign · i^{|x∧z|} · ⊗_k X^{x_k} Z^{z_k}`,
//! which is Hermitian for every bit pattern (so `Y = iXZ`). Qubit 0 is the
//! leftmost character and the most significant tensor factor.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::OperatorMatrix;
use crate::par::{self, Execution};

/// Largest qubit count for which dense matrices are built.
pub const DENSE_GUARD: usize = 12;

/// Largest qubit count supported by the matrix-free action.
pub const MATVEC_GUARD: usize = 30;

const WORD: usize = 64;

/// Global phase `i^k`, `k` mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Hermitian Pauli word with a ±1 sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    negative: bool,
}

fn words(n: usize) -> usize {
    n.div_ceil(WORD)
}

fn get_bit(v: &[u64], k: usize) -> bool {
    (v[k / WORD] >> (k % WORD)) & 1 == 1
}

fn set_bit(v: &mut [u64], k: usize, on: bool) {
    if on {
        v[k / WORD] |= 1 << (k % WORD);
    } else {
        v[k / WORD] &= !(1 << (k % WORD));
    }
}

fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

impl PauliString {
    /// The identity string on `n` qubits. `n = 0` is the scalar 1.
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            negative: false,
        }
    }

    /// Builds a string from explicit bit slices.
    pub fn from_bits(x: &[bool], z: &[bool], negative: bool) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        let mut p = PauliString::identity(x.len());
        for k in 0..x.len() {
            set_bit(&mut p.x, k, x[k]);
            set_bit(&mut p.z, k, z[k]);
        }
        p.negative = negative;
        Ok(p)
    }

    /// A single non-trivial factor `c ∈ {I,X,Y,Z}` at qubit `k` of `n`.
    pub fn single(n: usize, k: usize, c: char) -> Result<Self> {
        let mut p = PauliString::identity(n);
        if k >= n {
            return Err(Error::InvalidArgument(format!("qubit {k} out of range for {n} qubits")));
        }
        p.set_factor(k, c)?;
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bit(&self, k: usize) -> bool {
        get_bit(&self.x, k)
    }

    pub fn z_bit(&self, k: usize) -> bool {
        get_bit(&self.z, k)
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negative = !p.negative;
        p
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Character at qubit `k`.
    pub fn factor(&self, k: usize) -> char {
        match (self.x_bit(k), self.z_bit(k)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn set_factor(&mut self, k: usize, c: char) -> Result<()> {
        let (xb, zb) = match c {
            'I' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            _ => {
                return Err(Error::Parse {
                    position: k,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        set_bit(&mut self.x, k, xb);
        set_bit(&mut self.z, k, zb);
        Ok(())
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Whether the symplectic product with `other` vanishes.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        (popcount_and(&self.x, &other.z) + popcount_and(&self.z, &other.x)) % 2 == 0
    }

    /// Matrix product `self · other = phase · result`, with `result` carrying sign +1.
    pub fn multiply(&self, other: &PauliString) -> Result<(PauliString, Phase)> {
        self.check_len(other)?;
        let x: Vec<u64> = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        let a_p = popcount_and(&self.x, &self.z) as i64;
        let a_q = popcount_and(&other.x, &other.z) as i64;
        let a_r = popcount_and(&x, &z) as i64;
        // Z^{z_p} X^{x_q} = (-1)^{|z_p ∧ x_q|} X^{x_q} Z^{z_p}
        let swap = popcount_and(&self.z, &other.x) as i64;
        let mut e = a_p + a_q + 2 * swap - a_r;
        if self.negative != other.negative {
            e += 2;
        }
        let result = PauliString {
            n: self.n,
            x,
            z,
            negative: false,
        };
        Ok((result, Phase::from_exponent(e)))
    }

    /// `self ⊗ other`, with `self` on the leftmost qubits.
    pub fn tensor(&self, other: &PauliString) -> PauliString {
        let n = self.n + other.n;
        let mut p = PauliString::identity(n);
        for k in 0..self.n {
            set_bit(&mut p.x, k, self.x_bit(k));
            set_bit(&mut p.z, k, self.z_bit(k));
        }
        for k in 0..other.n {
            set_bit(&mut p.x, self.n + k, other.x_bit(k));
            set_bit(&mut p.z, self.n + k, other.z_bit(k));
        }
        p.negative = self.negative != other.negative;
        p
    }

    /// Bit masks over basis-state indices (qubit `k` ↔ bit `n-1-k`).
    pub(crate) fn index_masks(&self) -> (u64, u64) {
        debug_assert!(self.n <= 64);
        let mut xm = 0u64;
        let mut zm = 0u64;
        for k in 0..self.n {
            let bit = 1u64 << (self.n - 1 - k);
            if self.x_bit(k) {
                xm |= bit;
            }
            if self.z_bit(k) {
                zm |= bit;
            }
        }
        (xm, zm)
    }

    /// `sign · i^{|x∧z|}` as a complex number.
    pub(crate) fn prefactor(&self) -> Complex64 {
        let a = popcount_and(&self.x, &self.z) as i64 + if self.negative { 2 } else { 0 };
        Phase::from_exponent(a).to_complex()
    }

    /// `⟨v|S|v⟩` for a state vector of length `2ⁿ`, without building a matrix.
    pub fn expectation(&self, v: &[Complex64]) -> Result<f64> {
        if self.n > MATVEC_GUARD || v.len() != 1usize << self.n {
            return Err(Error::LengthMismatch {
                expected: 1usize << self.n.min(MATVEC_GUARD),
                found: v.len(),
            });
        }
        let (xm, zm) = self.index_masks();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate() {
            let t = v[(i as u64 ^ xm) as usize].conj() * vi;
            if (zm & i as u64).count_ones() % 2 == 1 {
                acc -= t;
            } else {
                acc += t;
            }
        }
        Ok((acc * self.prefactor()).re)
    }

    /// Dense `2ⁿ × 2ⁿ` matrix.
    pub fn to_matrix(&self) -> Result<OperatorMatrix> {
        if self.n > DENSE_GUARD {
            return Err(Error::GuardExceeded {
                what: "qubits for dense matrix",
                value: self.n,
                limit: DENSE_GUARD,
            });
        }
        let dim = 1usize << self.n;
        let (xm, zm) = self.index_masks();
        let pre = self.prefactor();
        let mut m = OperatorMatrix::zeros(dim, dim);
        for i in 0..dim {
            let s = if (zm & i as u64).count_ones() % 2 == 1 { -pre } else { pre };
            m[((i as u64 ^ xm) as usize, i)] = s;
        }
        Ok(m)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for k in 0..self.n {
            write!(f, "{}", self.factor(k))?;
        }
        Ok(())
    }
}

/// Parses `[+|-]` followed by characters from `IXYZ`.
pub fn parse_pauli(text: &str) -> Result<PauliString> {
    let text = text.trim();
    let (negative, body, offset) = match text.chars().next() {
        Some('-') => (true, &text[1..], 1),
        Some('+') => (false, &text[1..], 1),
        _ => (false, text, 0),
    };
    if body.is_empty() {
        return Err(Error::Parse {
            position: offset,
            message: "empty Pauli word".into(),
        });
    }
    let n = body.chars().count();
    let mut p = PauliString::identity(n);
    for (k, c) in body.chars().enumerate() {
        p.set_factor(k, c).map_err(|_| Error::Parse {
            position: k + offset,
            message: format!("unexpected character {c:?}"),
        })?;
    }
    p.negative = negative;
    Ok(p)
}

/// Reads one string per line; blank lines and lines starting with `#` are
/// skipped. All strings must have the same length.
pub fn parse_pauli_list(text: &str) -> Result<Vec<PauliString>> {
    let mut out: Vec<PauliString> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let p = parse_pauli(t).map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse {
                position,
                message: format!("line {}: {message}", line_no + 1),
            },
            other => other,
        })?;
        if let Some(first) = out.first() {
            if first.n_qubits() != p.n_qubits() {
                return Err(Error::Parse {
                    position: 0,
                    message: format!(
                        "line {}: length {} differs from {}",
                        line_no + 1,
                        p.n_qubits(),
                        first.n_qubits()
                    ),
                });
            }
        }
        out.push(p);
    }
    Ok(out)
}

pub fn format_pauli_list(strings: &[PauliString]) -> String {
    strings.iter().map(|s| format!("{s}\n")).collect()
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_pauli(s)
    }
}

pub fn commutes(p: &PauliString, q: &PauliString) -> Result<bool> {
    p.commutes(q)
}

pub fn multiply(p: &PauliString, q: &PauliString) -> Result<(PauliString, Phase)> {
    p.multiply(q)
}

/// `r` pairwise anticommuting strings on `max(1, ⌈(r-1)/2⌉)` qubits.
///
/// Ordered as `X₀, Y₀, X₁, Y₁, …` where the `k`-th pair carries `Z` on every
/// qubit before `k`; odd `r ≥ 3` ends with the all-`Z` string.
pub fn anticommuting_family(r: usize) -> Vec<PauliString> {
    let m = r.saturating_sub(1).div_ceil(2).max(1);
    let chain_len = if r % 2 == 1 && r > 1 { r - 1 } else { r };
    let mut out = Vec::with_capacity(r);
    'chain: for k in 0..m {
        for c in ['X', 'Y'] {
            if out.len() == chain_len {
                break 'chain;
            }
            let mut p = PauliString::identity(m);
            for j in 0..k {
                set_bit(&mut p.z, j, true);
            }
            p.set_factor(k, c).expect("valid factor");
            out.push(p);
        }
    }
    if out.len() < r {
        let mut cap = PauliString::identity(m);
        for j in 0..m {
            set_bit(&mut cap.z, j, true);
        }
        out.push(cap);
    }
    out
}

/// Weighted sum of Pauli strings acting matrix-free on state vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSumOperator {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSumOperator {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let n_qubits = terms.first().map(|t| t.1.n_qubits()).unwrap_or(0);
        for (_, p) in &terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::LengthMismatch {
                    expected: n_qubits,
                    found: p.n_qubits(),
                });
            }
        }
        Ok(PauliSumOperator { n_qubits, terms })
    }

    /// Unit-coefficient sum of the given strings.
    pub fn from_strings(strings: &[PauliString]) -> Result<Self> {
        Self::new(strings.iter().map(|s| (1.0, s.clone())).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    fn compiled(&self) -> Vec<(u64, u64, Complex64)> {
        self.terms
            .iter()
            .map(|(a, p)| {
                let (xm, zm) = p.index_masks();
                (xm, zm, p.prefactor() * *a)
            })
            .collect()
    }

    /// `Σ aᵢ Sᵢ v` without building the matrix.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.matvec_with(v, Execution::default())
    }

    pub fn matvec_with(&self, v: &[Complex64], exec: Execution) -> Result<Vec<Complex64>> {
        if self.n_qubits > MATVEC_GUARD {
            return Err(Error::GuardExceeded {
                what: "qubits for matrix-free action",
                value: self.n_qubits,
                limit: MATVEC_GUARD,
            });
        }
        if v.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        let terms = self.compiled();
        par::for_each_chunk_mut(exec, &mut out, 4096, |offset, chunk| {
            for (local, o) in chunk.iter_mut().enumerate() {
                let j = (offset + local) as u64;
                let mut acc = Complex64::new(0.0, 0.0);
                for &(xm, zm, c) in &terms {
                    let i = j ^ xm;
                    let val = v[i as usize];
                    if (zm & i).count_ones() % 2 == 1 {
                        acc -= c * val;
                    } else {
                        acc += c * val;
                    }
                }
                *o = acc;
            }
        });
        Ok(out)
    }

    pub fn to_matrix(&self) -> Result<OperatorMatrix> {
        let dim = self.dim();
        let mut m = OperatorMatrix::zeros(dim, dim);
        for (a, p) in &self.terms {
            m += p.to_matrix()? * Complex64::new(*a, 0.0);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        parse_pauli(s).unwrap()
    }

    #[test]
    fn pauli_list_format() {
        let text = "# C5\nXI\n\n-IY\n  ZX  \n";
        let list = parse_pauli_list(text).unwrap();
        assert_eq!(list.len(), 3);
        assert!(list[1].is_negative());
        assert_eq!(parse_pauli_list(&format_pauli_list(&list)).unwrap(), list);
        let err = parse_pauli_list("XI\nXYZ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        match parse_pauli_list("XI\nXQ\n").unwrap_err() {
            Error::Parse { position, message } => {
                assert_eq!(position, 1);
                assert!(message.contains("line 2"));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn parses_bits_and_sign() {
        let a = p("XZI");
        assert_eq!(a.n_qubits(), 3);
        assert_eq!((0..3).map(|k| a.x_bit(k)).collect::<Vec<_>>(), [true, false, false]);
        assert_eq!((0..3).map(|k| a.z_bit(k)).collect::<Vec<_>>(), [false, true, false]);
        assert!(!a.is_negative());

        let b = p("-YZZ");
        assert_eq!((0..3).map(|k| b.x_bit(k)).collect::<Vec<_>>(), [true, false, false]);
        assert_eq!((0..3).map(|k| b.z_bit(k)).collect::<Vec<_>>(), [true, true, true]);
        assert!(b.is_negative());

        assert!(p("III").is_identity());
        assert_eq!(p("+XY").to_string(), "XY");
    }

    #[test]
    fn parse_errors_name_position() {
        assert_eq!(
            parse_pauli("XQZ").unwrap_err(),
            Error::Parse {
                position: 1,
                message: "unexpected character 'Q'".into()
            }
        );
        match parse_pauli("-XXA").unwrap_err() {
            Error::Parse { position, .. } => assert_eq!(position, 3),
            e => panic!("{e}"),
        }
        assert!(parse_pauli("").is_err());
        assert!(parse_pauli("-").is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(p("XY").commutes(&p("ZZ")).unwrap());
        assert!(!p("ZY").commutes(&p("XY")).unwrap());
        assert!(p("XYZ").commutes(&p("XYZ")).unwrap());
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn multiply_examples() {
        let (r, ph) = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(r, p("Y"));
        assert_eq!(ph, Phase::MINUS_I);

        let a = p("-YZX");
        let (r, ph) = a.multiply(&a).unwrap();
        assert!(r.is_identity());
        assert_eq!(ph, Phase::ONE);

        let (r, ph) = p("XZ").multiply(&p("ZX")).unwrap();
        assert_eq!(r, p("YY"));
        let dense = p("XZ").to_matrix().unwrap() * p("ZX").to_matrix().unwrap();
        let rebuilt = r.to_matrix().unwrap() * ph.to_complex();
        assert!((dense - rebuilt).norm() < 1e-14);
    }

    #[test]
    fn matrix_examples() {
        let x = p("X").to_matrix().unwrap();
        assert_eq!(x[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(x[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(x[(0, 0)], Complex64::new(0.0, 0.0));

        let zz = p("ZZ").to_matrix().unwrap();
        let diag: Vec<f64> = (0..4).map(|i| zz[(i, i)].re).collect();
        assert_eq!(diag, [1.0, -1.0, -1.0, 1.0]);

        let y = p("Y").to_matrix().unwrap();
        assert_eq!(y[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], Complex64::new(0.0, 1.0));

        // leftmost character is the most significant factor
        let xi = p("XI").to_matrix().unwrap();
        assert_eq!(xi[(2, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn dense_guard() {
        let big = PauliString::identity(DENSE_GUARD + 1);
        assert!(matches!(big.to_matrix(), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn anticommuting_family_examples() {
        assert_eq!(anticommuting_family(1), vec![p("X")]);
        assert_eq!(anticommuting_family(2), vec![p("X"), p("Y")]);
        assert_eq!(anticommuting_family(3), vec![p("X"), p("Y"), p("Z")]);
        assert_eq!(anticommuting_family(4), vec![p("XI"), p("YI"), p("ZX"), p("ZY")]);
        let five = anticommuting_family(5);
        assert_eq!(five.len(), 5);
        assert!(five.iter().all(|s| s.n_qubits() == 2));
        for r in 1..=12 {
            let fam = anticommuting_family(r);
            assert_eq!(fam.len(), r, "r = {r}");
            assert_eq!(fam[0].n_qubits(), (r.saturating_sub(1)).div_ceil(2).max(1));
            for i in 0..r {
                for j in i + 1..r {
                    assert!(!fam[i].commutes(&fam[j]).unwrap(), "r={r} pair ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn identity_sum_scales() {
        let h = PauliSumOperator::new(vec![(2.0, PauliString::identity(3))]).unwrap();
        let v: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let out = h.matvec(&v).unwrap();
        for (a, b) in out.iter().zip(&v) {
            assert_eq!(*a, b * 2.0);
        }
        assert!(h.matvec(&v[..4]).is_err());
    }

    #[test]
    fn mixed_lengths_rejected() {
        assert!(PauliSumOperator::new(vec![(1.0, p("XX")), (1.0, p("X"))]).is_err());
    }
}
