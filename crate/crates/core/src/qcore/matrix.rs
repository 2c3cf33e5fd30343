use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qcore::eig::eigenvalues_herm;

/// Entrywise Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of a density matrix.
pub const PSD_TOL: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense square complex matrix stored row-major.
///
/// Only the 2×2 (one qubit) and 4×4 (two qubit) cases are used by the
/// library, but the arithmetic is written for any square size.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries for dim {dim}", dim * dim),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Self {
        Self { dim: N, entries: rows.iter().flatten().copied().collect() }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("vectors of length {}", u.len()),
                found: format!("length {}", v.len()),
            });
        }
        let dim = u.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in u {
            for b in v {
                entries.push(a * b.conj());
            }
        }
        Ok(Self { dim, entries })
    }

    /// Projector `|ψ⟩⟨ψ|` (not normalized).
    pub fn projector_onto(psi: &[Complex64]) -> Self {
        Self::outer(psi, psi).expect("same vector")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.entries[i * n + k] * other.entries[k * n + i];
            }
        }
        acc
    }

    /// Real part of `tr(ρ·O)`; the expectation value of a Hermitian observable.
    pub fn expectation(&self, observable: &Self) -> f64 {
        self.trace_product(observable).re
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// Purity `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.trace_product(self).re
    }

    /// Checks Hermiticity, unit trace and positivity with the given tolerance.
    pub fn validate_density_with(&self, tol: f64) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation, tolerance: tol });
        }
        let trace = self.trace();
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(Error::TraceNotOne { trace: trace.re, tolerance: tol });
        }
        let spectrum = eigenvalues_herm(self)?;
        let min_eigenvalue = *spectrum.last().expect("non-empty spectrum");
        if min_eigenvalue < -tol {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(())
    }

    pub fn validate_density(&self) -> Result<()> {
        self.validate_density_with(HERMITIAN_TOL.max(TRACE_TOL).max(PSD_TOL))
    }

    pub fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{dim}x{dim}"),
                found: format!("{0}x{0}", self.dim),
            });
        }
        Ok(())
    }
}

/// Kronecker product `a ⊗ b` of two single-qubit operators, Alice factor first.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_dim(2)?;
    b.require_dim(2)?;
    Ok(kron(a, b))
}

pub(crate) fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for ia in 0..na {
        for ja in 0..na {
            let x = a.get(ia, ja);
            for ib in 0..nb {
                for jb in 0..nb {
                    out.entries[(ia * nb + ib) * n + ja * nb + jb] = x * b.get(ib, jb);
                }
            }
        }
    }
    out
}

/// Bob's reduced state `tr_A[ρ_AB]` of a validated two-qubit density matrix.
pub fn partial_trace_alice(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    rho.require_dim(4)?;
    rho.validate_density()?;
    Ok(trace_out_alice(rho))
}

/// Partial trace over the first qubit of any 4×4 operator (no validation).
pub(crate) fn trace_out_alice(op: &ComplexMatrix) -> ComplexMatrix {
    debug_assert_eq!(op.dim, 4);
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            out.entries[i * 2 + j] = op.get(i, j) + op.get(2 + i, 2 + j);
        }
    }
    out
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]])
}

/// `v·σ⃗` for a real 3-vector.
pub fn pauli_dot(v: [f64; 3]) -> ComplexMatrix {
    let [x, y, z] = v;
    ComplexMatrix::from_rows([
        [Complex64::new(z, 0.0), Complex64::new(x, -y)],
        [Complex64::new(x, y), Complex64::new(-z, 0.0)],
    ])
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.entries[i * n + k];
                if x == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += x * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({0}x{0}) [", self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr { dim: self.dim, entries: self.entries.iter().map(|z| [z.re, z.im]).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let entries = repr.entries.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::new(repr.dim, entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(tensor(&id, &id).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn tensor_zz_is_diagonal() {
        let zz = tensor(&pauli_z(), &pauli_z()).unwrap();
        assert_eq!(zz, ComplexMatrix::from_diagonal(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn tensor_rejects_non_qubit_operands() {
        let err = tensor(&ComplexMatrix::identity(4), &pauli_x()).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn alice_factor_is_outer_index() {
        // |1⟩⟨0| ⊗ 𝟙 moves |00⟩ to |10⟩, i.e. row 2 column 0.
        let lowering = ComplexMatrix::from_rows([[ZERO, ZERO], [ONE, ZERO]]);
        let op = tensor(&lowering, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(op.get(2, 0), ONE);
        assert_eq!(op.get(1, 0), ZERO);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let plus = [c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0)];
        let rho_b = ComplexMatrix::projector_onto(&plus);
        let rho_a = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let rho = tensor(&rho_a, &rho_b).unwrap();
        assert!(partial_trace_alice(&rho).unwrap().approx_eq(&rho_b, 1e-15));
    }

    #[test]
    fn partial_trace_rejects_non_density() {
        let err = partial_trace_alice(&ComplexMatrix::identity(4)).unwrap_err();
        assert!(matches!(err, Error::TraceNotOne { .. }));
        let mut bad = ComplexMatrix::identity(4).scale(0.25);
        bad.set(0, 1, c(0.3, 0.0));
        assert!(matches!(partial_trace_alice(&bad).unwrap_err(), Error::NotHermitian { .. }));
    }

    #[test]
    fn validate_density_reports_negative_eigenvalue() {
        let m = ComplexMatrix::from_diagonal(&[1.2, -0.2]);
        match m.validate_density() {
            Err(Error::NotPositive { min_eigenvalue }) => assert!((min_eigenvalue + 0.2).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pauli_algebra() {
        let xy = &pauli_x() * &pauli_y();
        assert!(xy.approx_eq(&pauli_z().scale_complex(I), 1e-15));
        let v = [0.3, -0.4, 0.5];
        let dot = pauli_dot(v);
        let manual = &(&pauli_x().scale(0.3) + &pauli_y().scale(-0.4)) + &pauli_z().scale(0.5);
        assert!(dot.approx_eq(&manual, 1e-15));
    }

    #[test]
    fn json_round_trip() {
        let m = pauli_y();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"dim":2,"entries":[[0.0,0.0],[-0.0,-1.0],[0.0,1.0],[0.0,0.0]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"dim":2,"entries":[[1,0]]}"#).is_err());
    }
}
