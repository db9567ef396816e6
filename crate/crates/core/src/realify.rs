//! Similarity transforms that carry an `A`-symmetric matrix to a real one,
//! and the characteristic polynomial used to check the secular determinant.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antiunitary::AdaptedBasis;
use crate::error::{Error, Result};
use crate::oscillator::OperatorMatrix;

/// Default reality tolerance, relative to the largest entry.
pub const DEFAULT_REALITY_TOL: f64 = 1e-10;
/// Largest dimension accepted by [`char_poly`].
pub const CHAR_POLY_MAX_N: usize = 16;

/// A real matrix obtained by discarding the (checked) imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    pub entries: Array2<f64>,
    pub imag_residual: f64,
    pub source_label: String,
}

#[derive(Serialize, Deserialize)]
struct RealMatrixRecord {
    n: usize,
    entries: Vec<Vec<f64>>,
    imag_residual: f64,
    source_label: String,
}

impl RealMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn to_json(&self) -> String {
        let record = RealMatrixRecord {
            n: self.n(),
            entries: self.entries.rows().into_iter().map(|r| r.to_vec()).collect(),
            imag_residual: self.imag_residual,
            source_label: self.source_label.clone(),
        };
        serde_json::to_string(&record).expect("real matrix serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: RealMatrixRecord = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let entries = crate::oscillator::dense_from_rows(&record.entries, record.n)?;
        Ok(Self {
            entries,
            imag_residual: record.imag_residual,
            source_label: record.source_label,
        })
    }
}

/// Diagonal of `U = Σ |2n⟩⟨2n| + i|2n+1⟩⟨2n+1|`.
pub fn phase_unitary(n_basis: usize) -> Result<Vec<Complex64>> {
    if n_basis < 2 {
        return Err(Error::BasisTooSmall(n_basis));
    }
    Ok((0..n_basis)
        .map(|n| {
            if n % 2 == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 1.0)
            }
        })
        .collect())
}

/// The change of basis used by [`realify`].
#[derive(Debug, Clone, Copy)]
pub enum Transform<'a> {
    /// Diagonal unitary `U`; computes `U H U†`.
    Phase(&'a [Complex64]),
    /// Adapted basis `V`; computes `V† H V`.
    Adapted(&'a AdaptedBasis),
}

/// Transforms `h` and returns the real part, failing if the largest
/// discarded imaginary part exceeds `tol · max|entry|`.
pub fn realify(h: &OperatorMatrix, transform: Transform<'_>, tol: f64) -> Result<RealMatrix> {
    let n = h.n_basis();
    let transformed = match transform {
        Transform::Phase(u) => {
            if u.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: u.len(),
                });
            }
            Array2::from_shape_fn((n, n), |(m, k)| u[m] * h.entries[[m, k]] * u[k].conj())
        }
        Transform::Adapted(basis) => {
            if basis.n_basis() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: basis.n_basis(),
                });
            }
            if !basis.is_complete() {
                return Err(Error::IncompleteBasis {
                    rank: basis.rank,
                    n,
                    dropped: basis.dropped,
                });
            }
            let v = &basis.columns;
            v.t().mapv(|z| z.conj()).dot(&h.entries).dot(v)
        }
    };
    let scale = transformed.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let imag_residual = transformed.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let limit = tol * scale;
    if imag_residual > limit {
        return Err(Error::RealityViolation {
            residual: imag_residual,
            tol: limit,
        });
    }
    Ok(RealMatrix {
        entries: transformed.mapv(|z| z.re),
        imag_residual,
        source_label: h.label.clone(),
    })
}

/// Monic coefficients of `det(λI − M)` in descending powers of `λ`
/// (`[1, c₁, …, c_N]`), by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &Array2<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    if n > CHAR_POLY_MAX_N {
        return Err(Error::CharPolyTooLarge { n });
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    // M_k = A·M_{k-1} + c_{k-1} I,  c_k = -tr(A·M_k)/k
    let mut mk = Array2::<Complex64>::zeros((n, n));
    for k in 1..=n {
        let mut next = m.dot(&mk);
        let c_prev = coeffs[k - 1];
        for i in 0..n {
            next[[i, i]] += c_prev;
        }
        mk = next;
        let trace: Complex64 = m.dot(&mk).diag().sum();
        coeffs.push(-trace / k as f64);
    }
    Ok(coeffs)
}

/// [`char_poly`] for a real matrix.
pub fn char_poly_real(m: &Array2<f64>) -> Result<Vec<f64>> {
    let c = char_poly(&m.mapv(|v| Complex64::new(v, 0.0)))?;
    Ok(c.into_iter().map(|z| z.re).collect())
}
