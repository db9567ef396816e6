//! Truncated matrix representations in the eigenbasis of `H₀ = p² + x²`.
//!
//! The basis functions are real with parity `(-1)^n` and `H₀|n⟩ = (2n+1)|n⟩`,
//! so `x = (a + a†)/√2` has `⟨n-1|x|n⟩ = √(n/2)`.
//!
//! Powers `x^k` are formed in a padded space of dimension `N + k` and then
//! truncated, which makes every retained `⟨m|x^k|n⟩` exact: a path of `k`
//! ladder steps starting below `N` never leaves the first `N + k` states.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{PotentialSpec, MAX_DEGREE};

/// Hard cap on any matrix dimension built here, padding included.
pub const MAX_DIMENSION: usize = 4096;

/// Basis a matrix is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisTag {
    /// Harmonic-oscillator eigenbasis.
    Ho,
    /// Anything else (user-supplied matrices).
    Raw,
}

/// A dense complex `N × N` operator matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: Array2<Complex64>,
    pub basis: BasisTag,
    pub label: String,
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    n: usize,
    basis: BasisTag,
    entries_re: Vec<Vec<f64>>,
    entries_im: Vec<Vec<f64>>,
}

impl OperatorMatrix {
    pub fn new(entries: Array2<Complex64>, basis: BasisTag, label: impl Into<String>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: cols,
            });
        }
        if rows < 2 {
            return Err(Error::BasisTooSmall(rows));
        }
        Ok(Self {
            entries,
            basis,
            label: label.into(),
        })
    }

    pub fn n_basis(&self) -> usize {
        self.entries.nrows()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest deviation from the parity block pattern: real on
    /// even–even / odd–odd blocks, imaginary on mixed blocks.
    pub fn block_structure_violation(&self) -> f64 {
        self.entries
            .indexed_iter()
            .map(|((m, n), z)| if (m + n) % 2 == 0 { z.im.abs() } else { z.re.abs() })
            .fold(0.0, f64::max)
    }

    /// JSON export: `{"n", "basis", "entries_re", "entries_im"}`, row-major.
    pub fn to_json(&self) -> String {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            self.entries
                .rows()
                .into_iter()
                .map(|r| r.iter().map(f).collect())
                .collect()
        };
        let record = MatrixRecord {
            n: self.n_basis(),
            basis: self.basis,
            entries_re: rows(|z| z.re),
            entries_im: rows(|z| z.im),
        };
        serde_json::to_string(&record).expect("matrix serialization is infallible")
    }

    pub fn from_json(text: &str, label: impl Into<String>) -> Result<Self> {
        let record: MatrixRecord = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let n = record.n;
        let re = dense_from_rows(&record.entries_re, n)?;
        let im = dense_from_rows(&record.entries_im, n)?;
        let entries = Array2::from_shape_fn((n, n), |(i, j)| Complex64::new(re[[i, j]], im[[i, j]]));
        Self::new(entries, record.basis, label)
    }
}

/// Reads an `n × n` row list, checking shape and finiteness.
pub(crate) fn dense_from_rows(rows: &[Vec<f64>], n: usize) -> Result<Array2<f64>> {
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rows.len(),
        });
    }
    let mut out = Array2::zeros((n, n));
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Malformed(format!("non-finite entry at ({i}, {j})")));
            }
            out[[i, j]] = v;
        }
    }
    Ok(out)
}

fn check_basis(n_basis: usize) -> Result<()> {
    if n_basis < 2 {
        return Err(Error::BasisTooSmall(n_basis));
    }
    Ok(())
}

/// Tridiagonal `⟨m|x|n⟩` in dimension `n_basis + pad`.
pub fn position_matrix(n_basis: usize, pad: usize) -> Result<Array2<f64>> {
    check_basis(n_basis)?;
    let dim = n_basis
        .checked_add(pad)
        .filter(|&d| d <= MAX_DIMENSION)
        .ok_or(Error::SizeOverflow(n_basis.saturating_add(pad)))?;
    let mut x = Array2::zeros((dim, dim));
    for n in 1..dim {
        let v = (n as f64 / 2.0).sqrt();
        x[[n - 1, n]] = v;
        x[[n, n - 1]] = v;
    }
    Ok(x)
}

/// `⟨m|p²|n⟩` from the ladder form `p² = -(a - a†)²/2`.
pub fn momentum_squared_matrix(n_basis: usize) -> Result<Array2<f64>> {
    check_basis(n_basis)?;
    if n_basis > MAX_DIMENSION {
        return Err(Error::SizeOverflow(n_basis));
    }
    let mut p2 = Array2::zeros((n_basis, n_basis));
    for n in 0..n_basis {
        p2[[n, n]] = n as f64 + 0.5;
        if n + 2 < n_basis {
            let v = -(((n + 1) * (n + 2)) as f64).sqrt() / 2.0;
            p2[[n, n + 2]] = v;
            p2[[n + 2, n]] = v;
        }
    }
    Ok(p2)
}

/// Exact `⟨m|x^k|n⟩` for `m, n < n_basis`.
pub fn monomial_matrix(k: u32, n_basis: usize) -> Result<Array2<f64>> {
    check_basis(n_basis)?;
    if k > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(k));
    }
    let x = position_matrix(n_basis, k as usize)?;
    let dim = x.nrows();
    let mut acc = Array2::<f64>::eye(dim);
    for _ in 0..k {
        acc = times_tridiagonal(&acc, &x);
    }
    Ok(acc.slice(ndarray::s![..n_basis, ..n_basis]).to_owned())
}

// Dense product `a · t` for tridiagonal `t`; the skipped terms are exact zeros.
fn times_tridiagonal(a: &Array2<f64>, t: &Array2<f64>) -> Array2<f64> {
    let dim = a.nrows();
    Array2::from_shape_fn((dim, dim), |(m, n)| {
        let mut s = 0.0;
        if n > 0 {
            s += a[[m, n - 1]] * t[[n - 1, n]];
        }
        s += a[[m, n]] * t[[n, n]];
        if n + 1 < dim {
            s += a[[m, n + 1]] * t[[n + 1, n]];
        }
        s
    })
}

/// `H = p² + V(x)` in the oscillator basis.
pub fn hamiltonian_matrix(p: &PotentialSpec, n_basis: usize) -> Result<OperatorMatrix> {
    let p2 = momentum_squared_matrix(n_basis)?;
    let mut h = p2.mapv(|v| Complex64::new(v, 0.0));
    for term in p.terms() {
        let xk = monomial_matrix(term.power, n_basis)?;
        h.zip_mut_with(&xk, |hz, &v| *hz += term.coeff * v);
    }
    OperatorMatrix::new(h, BasisTag::Ho, format!("H(n={n_basis})"))
}
