//! Antiunitary involutions `A = W ∘ conj` and bases of `A`-fixed vectors.
//!
//! Every antilinear operator is a unitary followed by complex conjugation,
//! so an antiunitary is stored as its unitary part `W` with action
//! `A(v) = W · conj(v)`. The condition `A² = 1` reads `W · conj(W) = I`.

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::{dense_from_rows, OperatorMatrix};

/// Tolerance for the unitarity and involution checks on `W`.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Vectors with 2-norm below this are treated as annihilated.
pub const ZERO_VECTOR_TOL: f64 = 1e-10;
/// Residual `‖A(v) − v‖₂` allowed for an adapted column.
pub const FIXED_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntiunitaryTag {
    /// Parity-time in the oscillator basis, `W = diag((-1)^n)`.
    PtHo,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntiunitaryRep {
    unitary: Array2<Complex64>,
    tag: AntiunitaryTag,
}

#[derive(Serialize, Deserialize)]
struct AntiunitaryRecord {
    n: usize,
    w_re: Vec<Vec<f64>>,
    w_im: Vec<Vec<f64>>,
}

impl AntiunitaryRep {
    /// `PT` for the oscillator basis: `A|n⟩ = (-1)^n |n⟩`.
    pub fn pt_ho(n_basis: usize) -> Result<Self> {
        if n_basis < 2 {
            return Err(Error::BasisTooSmall(n_basis));
        }
        let w = Array2::from_shape_fn((n_basis, n_basis), |(i, j)| match (i == j, i % 2) {
            (true, 0) => ONE,
            (true, _) => -ONE,
            _ => ZERO,
        });
        Ok(Self {
            unitary: w,
            tag: AntiunitaryTag::PtHo,
        })
    }

    /// Wraps a user-supplied `W`, checking unitarity and `W·conj(W) = I`.
    pub fn custom(w: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = w.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: cols,
            });
        }
        if rows < 2 {
            return Err(Error::BasisTooSmall(rows));
        }
        let id = Array2::<Complex64>::eye(rows);
        let wh = w.t().mapv(|z| z.conj());
        let unitary_dev = max_abs_diff(&wh.dot(&w), &id);
        if unitary_dev > STRUCTURE_TOL {
            return Err(Error::NotUnitary(unitary_dev));
        }
        let invol_dev = max_abs_diff(&w.dot(&w.mapv(|z| z.conj())), &id);
        if invol_dev > STRUCTURE_TOL {
            return Err(Error::NotInvolution(invol_dev));
        }
        Ok(Self {
            unitary: w,
            tag: AntiunitaryTag::Custom,
        })
    }

    /// Loads `{"n": N, "w_re": [[...]], "w_im": [[...]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let record: AntiunitaryRecord = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let re = dense_from_rows(&record.w_re, record.n)?;
        let im = dense_from_rows(&record.w_im, record.n)?;
        let w = Array2::from_shape_fn(re.dim(), |ij| Complex64::new(re[ij], im[ij]));
        Self::custom(w)
    }

    pub fn to_json(&self) -> String {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            self.unitary
                .rows()
                .into_iter()
                .map(|r| r.iter().map(f).collect())
                .collect()
        };
        let record = AntiunitaryRecord {
            n: self.n_basis(),
            w_re: rows(|z| z.re),
            w_im: rows(|z| z.im),
        };
        serde_json::to_string(&record).expect("antiunitary serialization is infallible")
    }

    pub fn n_basis(&self) -> usize {
        self.unitary.nrows()
    }

    pub fn tag(&self) -> AntiunitaryTag {
        self.tag
    }

    pub fn unitary_part(&self) -> &Array2<Complex64> {
        &self.unitary
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n_basis() {
            return Err(Error::DimensionMismatch {
                expected: self.n_basis(),
                got,
            });
        }
        Ok(())
    }

    /// `A(v) = W · conj(v)`.
    pub fn apply(&self, v: ArrayView1<Complex64>) -> Result<Array1<Complex64>> {
        self.check_dim(v.len())?;
        Ok(self.unitary.dot(&v.mapv(|z| z.conj())))
    }

    /// `Q_σ v = (v + σ A(v)) / 2`.
    pub fn projector(&self, sigma: Sign, v: ArrayView1<Complex64>) -> Result<Array1<Complex64>> {
        let av = self.apply(v)?;
        let s = sigma.value();
        Ok(Array1::from_shape_fn(v.len(), |i| (v[i] + s * av[i]) * 0.5))
    }

    /// `‖W·conj(H)·W† − H‖_max`, i.e. the deviation of `A H A⁻¹` from `H`.
    pub fn check_a_symmetry(&self, h: &OperatorMatrix) -> Result<f64> {
        self.check_dim(h.n_basis())?;
        let h = &h.entries;
        if self.tag == AntiunitaryTag::PtHo {
            let viol = h
                .indexed_iter()
                .map(|((m, n), z)| {
                    let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
                    (z.conj() * sign - z).norm()
                })
                .fold(0.0, f64::max);
            return Ok(viol);
        }
        let wh = self.unitary.t().mapv(|z| z.conj());
        let transformed = self.unitary.dot(&h.mapv(|z| z.conj())).dot(&wh);
        Ok(max_abs_diff(&transformed, h))
    }

    /// Builds an `A`-adapted basis from `seed` (identity when `None`).
    pub fn adapted_basis(&self, recipe: Recipe, seed: Option<&Array2<Complex64>>) -> Result<AdaptedBasis> {
        let n = self.n_basis();
        let identity;
        let seed = match seed {
            Some(s) => {
                if s.dim() != (n, n) {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: s.nrows(),
                    });
                }
                let dev = max_abs_diff(&s.t().mapv(|z| z.conj()).dot(s), &Array2::eye(n));
                if dev > STRUCTURE_TOL {
                    return Err(Error::NotUnitary(dev));
                }
                s
            }
            None => {
                identity = Array2::<Complex64>::eye(n);
                &identity
            }
        };

        let basis = match recipe {
            Recipe::Bender => {
                let mut columns = Array2::zeros((n, n));
                for (j, s) in seed.columns().into_iter().enumerate() {
                    columns.column_mut(j).assign(&(&s + &self.apply(s)?));
                }
                let rank = complex_rank(&columns);
                AdaptedBasis::finish(columns, recipe, rank, n - rank)
            }
            Recipe::ProjectorPhase => {
                let mut candidates = Vec::with_capacity(2 * n);
                for s in seed.columns() {
                    candidates.push(self.projector(Sign::Plus, s)?);
                    candidates.push(self.projector(Sign::Minus, s)?.mapv(|z| z * I));
                }
                let columns = orthonormalize_fixed(candidates, n)?;
                AdaptedBasis::finish(columns, recipe, n, 0)
            }
            Recipe::PhasePower => {
                if self.tag != AntiunitaryTag::PtHo {
                    return Err(Error::RecipeNeedsPtHo { recipe: recipe.name() });
                }
                let phases = [ONE, I, -ONE, -I];
                let columns = Array2::from_shape_fn((n, n), |(i, j)| if i == j { phases[j % 4] } else { ZERO });
                AdaptedBasis::finish(columns, recipe, n, 0)
            }
            Recipe::Porter(a) => {
                let candidates = seed
                    .columns()
                    .into_iter()
                    .map(|s| Ok(s.mapv(|z| z * a) + self.apply(s)?.mapv(|z| z * a.conj())))
                    .collect::<Result<Vec<_>>>()?;
                let columns = orthonormalize_fixed(candidates, n)?;
                AdaptedBasis::finish(columns, recipe, n, 0)
            }
        };

        debug_assert!(basis
            .columns
            .columns()
            .into_iter()
            .all(|c| fixed_residual(self, c) <= FIXED_TOL));
        Ok(basis)
    }
}

/// `‖A(v) − v‖₂`.
pub fn fixed_residual(a: &AntiunitaryRep, v: ArrayView1<Complex64>) -> f64 {
    let av = a.apply(v).expect("dimension checked by caller");
    av.iter()
        .zip(v.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// How adapted basis vectors are generated from a seed basis `{|n⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Recipe {
    /// `|n⟩ + A|n⟩`, kept as-is; annihilated columns are only counted.
    Bender,
    /// `Q₊|n⟩` and `i·Q₋|n⟩`, then orthonormalized.
    ProjectorPhase,
    /// `iⁿ |n⟩`; oscillator PT only.
    PhasePower,
    /// `a|n⟩ + a* A|n⟩` with a single constant `a`, then orthonormalized.
    Porter(Complex64),
}

impl Recipe {
    pub fn name(&self) -> &'static str {
        match self {
            Recipe::Bender => "bender",
            Recipe::ProjectorPhase => "projector_phase",
            Recipe::PhasePower => "phase_power",
            Recipe::Porter(_) => "porter",
        }
    }

    /// The Porter coefficient used when none is given.
    pub fn porter_default() -> Self {
        Recipe::Porter(Complex64::new(0.5, 0.5))
    }
}

/// Columns of `A`-fixed vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedBasis {
    pub columns: Array2<Complex64>,
    pub recipe: Recipe,
    pub rank: usize,
    pub dropped: usize,
    /// `max |(V†V − I)_{mn}|`.
    pub ortho_residual: f64,
}

impl AdaptedBasis {
    fn finish(columns: Array2<Complex64>, recipe: Recipe, rank: usize, dropped: usize) -> Self {
        let n = columns.ncols();
        let gram = columns.t().mapv(|z| z.conj()).dot(&columns);
        let ortho_residual = max_abs_diff(&gram, &Array2::eye(n));
        Self {
            columns,
            recipe,
            rank,
            dropped,
            ortho_residual,
        }
    }

    pub fn n_basis(&self) -> usize {
        self.columns.nrows()
    }

    pub fn is_complete(&self) -> bool {
        self.rank == self.n_basis()
    }
}

/// Modified Gram–Schmidt with a second re-orthogonalization pass over
/// `A`-fixed candidates. Overlaps between fixed vectors are real, so only the
/// real part of each projection coefficient is used; that keeps every output
/// column exactly in the real span of fixed vectors.
fn orthonormalize_fixed(candidates: Vec<Array1<Complex64>>, n: usize) -> Result<Array2<Complex64>> {
    let mut kept: Vec<Array1<Complex64>> = Vec::with_capacity(n);
    for mut v in candidates {
        if kept.len() == n {
            break;
        }
        let initial = norm(v.view());
        if initial < ZERO_VECTOR_TOL {
            continue;
        }
        v.mapv_inplace(|z| z / initial);
        for _pass in 0..2 {
            for u in &kept {
                let overlap = inner(u.view(), v.view()).re;
                v.zip_mut_with(u, |x, &y| *x -= y * overlap);
            }
        }
        let remaining = norm(v.view());
        if remaining < ZERO_VECTOR_TOL {
            continue;
        }
        v.mapv_inplace(|z| z / remaining);
        kept.push(v);
    }
    if kept.len() < n {
        return Err(Error::IncompleteBasis {
            rank: kept.len(),
            n,
            dropped: n - kept.len(),
        });
    }
    let mut out = Array2::zeros((n, n));
    for (j, v) in kept.iter().enumerate() {
        out.column_mut(j).assign(v);
    }
    Ok(out)
}

/// Number of linearly independent columns (over ℂ), by modified
/// Gram–Schmidt.
fn complex_rank(columns: &Array2<Complex64>) -> usize {
    let mut kept: Vec<Array1<Complex64>> = Vec::new();
    for col in columns.columns() {
        let initial = norm(col);
        if initial < ZERO_VECTOR_TOL {
            continue;
        }
        let mut v = col.mapv(|z| z / initial);
        for _pass in 0..2 {
            for u in &kept {
                let overlap = inner(u.view(), v.view());
                v.zip_mut_with(u, |x, &y| *x -= y * overlap);
            }
        }
        let remaining = norm(v.view());
        if remaining >= ZERO_VECTOR_TOL {
            kept.push(v.mapv(|z| z / remaining));
        }
    }
    kept.len()
}

/// `⟨u|v⟩ = Σ conj(u_i) v_i`.
pub fn inner(u: ArrayView1<Complex64>, v: ArrayView1<Complex64>) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: ArrayView1<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
