//! Spectra of small Hermitian matrices.
//!
//! 2×2 matrices use the closed-form trace/discriminant solution. Larger
//! matrices are diagonalized with cyclic complex Jacobi rotations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::matrix::{ComplexMatrix, ONE, ZERO};

/// Hermiticity tolerance accepted by the eigensolvers.
pub const EIG_HERMITIAN_TOL: f64 = 1e-8;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this.
pub const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition with eigenvalues sorted in descending order.
/// `vectors[i]` is the unit eigenvector belonging to `values[i]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let deviation = h.hermitian_deviation();
    if deviation > EIG_HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation, tolerance: EIG_HERMITIAN_TOL });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigenvalues_herm(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    if h.dim() == 2 {
        let (hi, lo) = eig2_values(h);
        return Ok(vec![hi, lo]);
    }
    Ok(jacobi(h, false).values)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix, descending.
pub fn eig_herm(h: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    if h.dim() == 2 {
        return Ok(eig2(h));
    }
    Ok(jacobi(h, true))
}

/// Top eigenvalue of a 2×2 Hermitian matrix, no validation.
#[inline]
pub(crate) fn top_eigenvalue2(h: &ComplexMatrix) -> f64 {
    eig2_values(h).0
}

#[inline]
fn eig2_values(h: &ComplexMatrix) -> (f64, f64) {
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let b = h.get(0, 1);
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    (mean + radius, mean - radius)
}

fn eig2(h: &ComplexMatrix) -> HermitianEigen {
    let (hi, lo) = eig2_values(h);
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let b = h.get(0, 1);
    let vectors = if hi - lo <= f64::EPSILON * (1.0 + hi.abs()) {
        vec![vec![ONE, ZERO], vec![ZERO, ONE]]
    } else {
        [hi, lo]
            .iter()
            .map(|&lambda| {
                // (H − λ)v = 0; pick the better conditioned of the two rows.
                let v = if (lambda - d).abs() >= (lambda - a).abs() {
                    [Complex64::new(lambda - d, 0.0), b.conj()]
                } else {
                    [b, Complex64::new(lambda - a, 0.0)]
                };
                let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                vec![v[0] / norm, v[1] / norm]
            })
            .collect()
    };
    HermitianEigen { values: vec![hi, lo], vectors }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += a.get(r, c).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> HermitianEigen {
    let n = h.dim();
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= JACOBI_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = 0.5 * (2.0 * r).atan2(app - aqq);
                let (s, c) = theta.sin_cos();

                // U acts on the (p, q) plane: columns (c, e^{-iφ}s) and (−s, e^{-iφ}c).
                let up = phase.conj();
                let mut u = ComplexMatrix::identity(n);
                u.set(p, p, Complex64::new(c, 0.0));
                u.set(p, q, Complex64::new(-s, 0.0));
                u.set(q, p, up * s);
                u.set(q, q, up * c);

                a = &(&u.adjoint() * &a) * &u;
                // Clean the annihilated pair and keep the diagonal real.
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                for i in [p, q] {
                    let d = a.get(i, i).re;
                    a.set(i, i, Complex64::new(d, 0.0));
                }
                if want_vectors {
                    v = &v * &u;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.total_cmp(&a.get(i, i).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = if want_vectors {
        order.iter().map(|&i| (0..n).map(|r| v.get(r, i)).collect()).collect()
    } else {
        Vec::new()
    };
    HermitianEigen { values, vectors }
}
