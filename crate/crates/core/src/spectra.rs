//! Dense real eigensolver and spectrum classification.
//!
//! Only real matrices are handled here. An `A`-symmetric complex matrix goes
//! through [`realify`](crate::realify::realify) first, after which the real
//! Schur form delivers real eigenvalues and exact conjugate pairs.

use std::cmp::Ordering;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::hamiltonian_matrix;
use crate::potential::PotentialSpec;
use crate::realify::{phase_unitary, realify, Transform, DEFAULT_REALITY_TOL};

/// Relative deflation threshold for subdiagonal entries.
pub const DEFLATION_EPS: f64 = 1e-14;
/// Largest matrix accepted by the eigensolver.
pub const MAX_EIGEN_N: usize = 1024;
/// Default classification tolerance.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

const ITERATIONS_PER_ROW: usize = 40;
const EXCEPTIONAL_EVERY: usize = 10;

/// Householder reduction `M = Q·H·Qᵀ` with `H` upper Hessenberg.
/// Returns `(H, Q)`.
pub fn hessenberg(m: &Array2<f64>) -> Result<(Array2<f64>, Array2<f64>)> {
    check_square(m)?;
    let n = m.nrows();
    let mut h = m.clone();
    let mut q = Array2::<f64>::eye(n);
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = (k + 1..n).map(|i| h[[i, k]] * h[[i, k]]).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let alpha = -alpha_norm.copysign(h[[k + 1, k]]);
        let mut v: Vec<f64> = (k + 1..n).map(|i| h[[i, k]]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // H ← P·H
        for j in 0..n {
            let s: f64 = v.iter().enumerate().map(|(a, va)| va * h[[k + 1 + a, j]]).sum();
            for (a, va) in v.iter().enumerate() {
                h[[k + 1 + a, j]] -= beta * s * va;
            }
        }
        // H ← H·P, Q ← Q·P
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let s: f64 = v.iter().enumerate().map(|(a, va)| va * mat[[i, k + 1 + a]]).sum();
                for (a, va) in v.iter().enumerate() {
                    mat[[i, k + 1 + a]] -= beta * s * va;
                }
            }
        }
        h[[k + 1, k]] = alpha;
        for i in k + 2..n {
            h[[i, k]] = 0.0;
        }
    }
    Ok((h, q))
}

/// Real Schur factorization `M = Z·T·Zᵀ` with quasi-triangular `T`.
#[derive(Debug, Clone)]
pub struct RealSchur {
    pub t: Array2<f64>,
    pub z: Array2<f64>,
    /// Eigenvalues read off the diagonal blocks, in block order.
    pub eigenvalues: Vec<Complex64>,
    pub iterations: usize,
}

impl RealSchur {
    pub fn compute(m: &Array2<f64>) -> Result<Self> {
        check_square(m)?;
        let n = m.nrows();
        if n > MAX_EIGEN_N {
            return Err(Error::InvalidArgument(format!(
                "matrix dimension {n} exceeds eigensolver limit {MAX_EIGEN_N}"
            )));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        if n == 0 {
            return Ok(Self {
                t: m.clone(),
                z: m.clone(),
                eigenvalues: Vec::new(),
                iterations: 0,
            });
        }
        let (mut t, mut z) = hessenberg(m)?;
        let (eigenvalues, iterations) = francis_qr(&mut t, &mut z)?;
        Ok(Self {
            t,
            z,
            eigenvalues,
            iterations,
        })
    }

    /// `‖Z·T·Zᵀ − M‖_max`.
    pub fn residual(&self, m: &Array2<f64>) -> f64 {
        let rebuilt = self.z.dot(&self.t).dot(&self.z.t());
        rebuilt
            .iter()
            .zip(m.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_square(m: &Array2<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    Ok(())
}

// Implicit double-shift QR on an upper Hessenberg `t`, accumulating into `z`.
fn francis_qr(t: &mut Array2<f64>, z: &mut Array2<f64>) -> Result<(Vec<Complex64>, usize)> {
    let n = t.nrows();
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let norm = t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let max_iter = ITERATIONS_PER_ROW * n;
    let mut total = 0;
    let mut stalled = 0;
    let mut hi = n - 1;

    loop {
        // Locate the top of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let mut s = t[[lo - 1, lo - 1]].abs() + t[[lo, lo]].abs();
            if s == 0.0 {
                s = norm;
            }
            if t[[lo, lo - 1]].abs() <= DEFLATION_EPS * s {
                t[[lo, lo - 1]] = 0.0;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eig[hi] = Complex64::new(t[[hi, hi]], 0.0);
            stalled = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if lo + 1 == hi {
            let (e1, e2) = eig2x2(t[[lo, lo]], t[[lo, hi]], t[[hi, lo]], t[[hi, hi]]);
            eig[lo] = e1;
            eig[hi] = e2;
            stalled = 0;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            continue;
        }

        total += 1;
        stalled += 1;
        if total > max_iter {
            return Err(Error::NoConvergence {
                iterations: total - 1,
                block: hi,
            });
        }

        let (shift_sum, shift_prod) = if stalled % EXCEPTIONAL_EVERY == 0 {
            let w = t[[hi, hi - 1]].abs() + t[[hi - 1, hi - 2]].abs();
            let h11 = 0.75 * w + t[[hi, hi]];
            (2.0 * h11, h11 * h11 + 0.4375 * w * w)
        } else {
            let (a, b, c, d) = (t[[hi - 1, hi - 1]], t[[hi - 1, hi]], t[[hi, hi - 1]], t[[hi, hi]]);
            (a + d, a * d - b * c)
        };
        francis_step(t, z, lo, hi, shift_sum, shift_prod);
    }
    Ok((eig, total))
}

fn francis_step(t: &mut Array2<f64>, z: &mut Array2<f64>, lo: usize, hi: usize, s: f64, p: f64) {
    let n = t.nrows();
    let mut x = t[[lo, lo]] * t[[lo, lo]] + t[[lo, lo + 1]] * t[[lo + 1, lo]] - s * t[[lo, lo]] + p;
    let mut y = t[[lo + 1, lo]] * (t[[lo, lo]] + t[[lo + 1, lo + 1]] - s);
    let mut w = t[[lo + 1, lo]] * t[[lo + 2, lo + 1]];

    for k in lo..hi - 1 {
        if let Some((v, beta)) = reflector(&[x, y, w]) {
            let col_start = if k > lo { k - 1 } else { lo };
            for j in col_start..n {
                let s = beta * (v[0] * t[[k, j]] + v[1] * t[[k + 1, j]] + v[2] * t[[k + 2, j]]);
                for a in 0..3 {
                    t[[k + a, j]] -= s * v[a];
                }
            }
            let row_end = (k + 3).min(hi);
            for i in 0..=row_end {
                let s = beta * (v[0] * t[[i, k]] + v[1] * t[[i, k + 1]] + v[2] * t[[i, k + 2]]);
                for a in 0..3 {
                    t[[i, k + a]] -= s * v[a];
                }
            }
            for i in 0..n {
                let s = beta * (v[0] * z[[i, k]] + v[1] * z[[i, k + 1]] + v[2] * z[[i, k + 2]]);
                for a in 0..3 {
                    z[[i, k + a]] -= s * v[a];
                }
            }
            if k > lo {
                t[[k + 1, k - 1]] = 0.0;
                t[[k + 2, k - 1]] = 0.0;
            }
        }
        x = t[[k + 1, k]];
        y = t[[k + 2, k]];
        if k + 3 <= hi {
            w = t[[k + 3, k]];
        }
    }

    if let Some((v, beta)) = reflector(&[x, y]) {
        let k = hi - 1;
        for j in (k - 1)..n {
            let s = beta * (v[0] * t[[k, j]] + v[1] * t[[k + 1, j]]);
            t[[k, j]] -= s * v[0];
            t[[k + 1, j]] -= s * v[1];
        }
        for i in 0..=hi {
            let s = beta * (v[0] * t[[i, k]] + v[1] * t[[i, k + 1]]);
            t[[i, k]] -= s * v[0];
            t[[i, k + 1]] -= s * v[1];
        }
        for i in 0..n {
            let s = beta * (v[0] * z[[i, k]] + v[1] * z[[i, k + 1]]);
            z[[i, k]] -= s * v[0];
            z[[i, k + 1]] -= s * v[1];
        }
        t[[hi, hi - 2]] = 0.0;
    }
}

/// Householder vector `v` and `β` with `(I − β v vᵀ) a = ∓‖a‖ e₁`.
fn reflector<const K: usize>(a: &[f64; K]) -> Option<([f64; K], f64)> {
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let mut v = *a;
    v[0] += norm.copysign(a[0]);
    let vv: f64 = v.iter().map(|x| x * x).sum();
    Some((v, 2.0 / vv))
}

/// Eigenvalues of `[[a, b], [c, d]]`; complex results are exact conjugates.
fn eig2x2(a: f64, b: f64, c: f64, d: f64) -> (Complex64, Complex64) {
    let p = 0.5 * (a - d);
    let bc = b * c;
    let disc = p * p + bc;
    if disc >= 0.0 {
        let zz = p + disc.sqrt().copysign(p);
        if zz == 0.0 {
            return (Complex64::new(d, 0.0), Complex64::new(d, 0.0));
        }
        (Complex64::new(d + zz, 0.0), Complex64::new(d - bc / zz, 0.0))
    } else {
        let mid = 0.5 * (a + d);
        let im = (-disc).sqrt();
        (Complex64::new(mid, im), Complex64::new(mid, -im))
    }
}

/// Ascending by real part, ties by imaginary part.
pub fn eigen_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalues of a real matrix together with the Schur backward error.
#[derive(Debug, Clone, PartialEq)]
pub struct RealEigenvalues {
    pub values: Vec<Complex64>,
    pub backward_error: f64,
}

/// All eigenvalues of a real square matrix, sorted by [`eigen_order`].
pub fn eigenvalues_real(m: &Array2<f64>) -> Result<RealEigenvalues> {
    let schur = RealSchur::compute(m)?;
    let backward_error = schur.residual(m);
    let mut values = schur.eigenvalues;
    values.sort_by(eigen_order);
    Ok(RealEigenvalues { values, backward_error })
}

/// Eigenvalues split into real values and conjugate pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub real_set: Vec<f64>,
    /// `(z, w)` with `w ≈ conj(z)` and `Im z > 0`.
    pub pairs: Vec<(Complex64, Complex64)>,
    pub tol_classify: f64,
    pub backward_error: f64,
    pub n_basis: usize,
}

#[derive(Serialize, Deserialize)]
struct ComplexRecord {
    re: f64,
    im: f64,
}

impl From<&Complex64> for ComplexRecord {
    fn from(z: &Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumRecord {
    n: usize,
    eigenvalues: Vec<ComplexRecord>,
    real_set: Vec<f64>,
    pairs: Vec<[ComplexRecord; 2]>,
    tol_classify: f64,
    backward_error: f64,
}

impl SpectrumReport {
    pub fn to_json(&self) -> String {
        let record = SpectrumRecord {
            n: self.n_basis,
            eigenvalues: self.eigenvalues.iter().map(Into::into).collect(),
            real_set: self.real_set.clone(),
            pairs: self.pairs.iter().map(|(a, b)| [a.into(), b.into()]).collect(),
            tol_classify: self.tol_classify,
            backward_error: self.backward_error,
        };
        serde_json::to_string(&record).expect("spectrum serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: SpectrumRecord = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let c = |z: &ComplexRecord| Complex64::new(z.re, z.im);
        Ok(Self {
            eigenvalues: r.eigenvalues.iter().map(c).collect(),
            real_set: r.real_set,
            pairs: r.pairs.iter().map(|[a, b]| (c(a), c(b))).collect(),
            tol_classify: r.tol_classify,
            backward_error: r.backward_error,
            n_basis: r.n,
        })
    }

    /// `max(1, max|λ|)`, the scale the classification tolerance is relative to.
    pub fn scale(&self) -> f64 {
        spectral_scale(&self.eigenvalues)
    }
}

fn spectral_scale(eigs: &[Complex64]) -> f64 {
    eigs.iter().fold(1.0f64, |m, z| m.max(z.norm()))
}

/// Splits `eigs` into real values (`|Im| ≤ tol·scale`) and greedily matched
/// conjugate pairs. Leftover unmatched values are an error.
pub fn classify_spectrum(eigs: &[Complex64], tol_classify: f64) -> Result<SpectrumReport> {
    if tol_classify.is_nan() || tol_classify <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "classification tolerance must be positive, got {tol_classify}"
        )));
    }
    let mut eigenvalues = eigs.to_vec();
    eigenvalues.sort_by(eigen_order);
    let limit = tol_classify * spectral_scale(&eigenvalues);

    let mut real_set = Vec::new();
    let mut complex = Vec::new();
    for z in &eigenvalues {
        if z.im.abs() <= limit {
            real_set.push(z.re);
        } else {
            complex.push(*z);
        }
    }

    let mut matched = vec![false; complex.len()];
    let mut pairs = Vec::new();
    for i in 0..complex.len() {
        if matched[i] {
            continue;
        }
        matched[i] = true;
        let zi = complex[i];
        let partner = (0..complex.len())
            .filter(|&j| !matched[j])
            .map(|j| (j, (zi - complex[j].conj()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, dist)) if dist <= limit => {
                matched[j] = true;
                let zj = complex[j];
                pairs.push(if zi.im > 0.0 { (zi, zj) } else { (zj, zi) });
            }
            _ => return Err(Error::ClosureViolation { re: zi.re, im: zi.im }),
        }
    }
    pairs.sort_by(|a, b| eigen_order(&a.0, &b.0));

    Ok(SpectrumReport {
        n_basis: eigenvalues.len(),
        eigenvalues,
        real_set,
        pairs,
        tol_classify,
        backward_error: 0.0,
    })
}

/// Eigenvalues and classification of a real matrix in one step.
pub fn spectrum_report(m: &Array2<f64>, tol_classify: f64) -> Result<SpectrumReport> {
    let eig = eigenvalues_real(m)?;
    let mut report = classify_spectrum(&eig.values, tol_classify)?;
    report.backward_error = eig.backward_error;
    Ok(report)
}

/// Realified oscillator-basis spectrum of `p² + V(x)` at truncation `n_basis`.
pub fn potential_spectrum(
    p: &PotentialSpec,
    n_basis: usize,
    tol_reality: f64,
    tol_classify: f64,
) -> Result<SpectrumReport> {
    let h = hamiltonian_matrix(p, n_basis)?;
    let u = phase_unitary(n_basis)?;
    let real = realify(&h, Transform::Phase(&u), tol_reality)?;
    spectrum_report(&real.entries, tol_classify)
}

/// Members of `eigs` with a counterpart in `reference` within
/// `rel_tol · max(1, |z|)`, ascending by real part.
///
/// Rayleigh–Ritz eigenvalues that have not converged move substantially
/// between truncations; comparing against a larger truncation separates
/// them from the physical levels.
pub fn stable_levels(eigs: &[Complex64], reference: &[Complex64], rel_tol: f64) -> Vec<Complex64> {
    let mut stable: Vec<Complex64> = eigs
        .iter()
        .copied()
        .filter(|z| {
            let limit = rel_tol * z.norm().max(1.0);
            reference.iter().any(|r| (r - z).norm() <= limit)
        })
        .collect();
    stable.sort_by(eigen_order);
    stable
}

/// Ordering used by [`convergence_sweep`]: ascending `|Re|`, ties by `Im`.
fn abs_real_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.abs().total_cmp(&b.re.abs()).then(a.im.total_cmp(&b.im))
}

/// One tracked level at one truncation size.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n_basis: usize,
    pub level: usize,
    pub value: Complex64,
    /// `|E(N) − E(N_prev)|`; absent for the first truncation.
    pub cauchy_diff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub const CSV_HEADER: &'static str = "N,level,re,im,cauchy_diff";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let diff = r.cauchy_diff.map(|d| format!("{d:?}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:?},{:?},{}\n",
                r.n_basis, r.level, r.value.re, r.value.im, diff
            ));
        }
        out
    }

    /// Rows for truncation size `n`.
    pub fn at(&self, n: usize) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.n_basis == n)
    }
}

/// The `m_track` eigenvalues of smallest `|Re|` of the realified
/// Hamiltonian for each truncation in `n_list`, with Cauchy differences
/// between consecutive truncations.
pub fn convergence_sweep(p: &PotentialSpec, n_list: &[usize], m_track: usize) -> Result<SweepTable> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("empty truncation list".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "truncation list must be strictly ascending: {n_list:?}"
        )));
    }
    if m_track == 0 || m_track > n_list[0] {
        return Err(Error::InvalidArgument(format!(
            "m_track must be in 1..={}, got {m_track}",
            n_list[0]
        )));
    }

    let levels: Vec<Vec<Complex64>> = n_list
        .par_iter()
        .map(|&n| {
            let h = hamiltonian_matrix(p, n)?;
            let u = phase_unitary(n)?;
            let real = realify(&h, Transform::Phase(&u), DEFAULT_REALITY_TOL)?;
            let mut values = eigenvalues_real(&real.entries)?.values;
            values.sort_by(abs_real_order);
            values.truncate(m_track);
            Ok(values)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(n_list.len() * m_track);
    for (idx, (&n, values)) in n_list.iter().zip(&levels).enumerate() {
        for (level, &value) in values.iter().enumerate() {
            let cauchy_diff = idx.checked_sub(1).map(|prev| (value - levels[prev][level]).norm());
            rows.push(SweepRow {
                n_basis: n,
                level,
                value,
                cauchy_diff,
            });
        }
    }
    Ok(SweepTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Term;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs(m: &Array2<f64>) -> f64 {
        m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    #[test]
    fn hessenberg_leaves_small_matrices_alone() {
        let m = array![[1.0, 2.0], [3.0, 4.0]];
        let (h, q) = hessenberg(&m).unwrap();
        assert_eq!(h, m);
        assert_eq!(q, Array2::<f64>::eye(2));
        let d = Array2::from_diag(&array![1.0, 3.0, 5.0]);
        assert_eq!(hessenberg(&d).unwrap().0, d);
    }

    #[test]
    fn hessenberg_reconstructs_random_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Array2::from_shape_fn((8, 8), |_| rng.gen_range(-1.0..1.0));
        let (h, q) = hessenberg(&m).unwrap();
        for i in 0..8usize {
            for j in 0..i.saturating_sub(1) {
                assert_eq!(h[[i, j]], 0.0);
            }
        }
        let rebuilt = q.dot(&h).dot(&q.t());
        assert!(max_abs(&(&rebuilt - &m)) <= 1e-12 * max_abs(&m));
    }

    #[test]
    fn small_eigenvalue_examples() {
        let rot = eigenvalues_real(&array![[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        assert_eq!(rot.values, vec![c(0.0, -1.0), c(0.0, 1.0)]);

        let companion = eigenvalues_real(&array![[3.0, -2.0], [1.0, 0.0]]).unwrap();
        assert!((companion.values[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((companion.values[1] - c(2.0, 0.0)).norm() < 1e-14);

        let broken = eigenvalues_real(&array![[0.5, -1.0], [1.0, -0.5]]).unwrap();
        let w = 3f64.sqrt() / 2.0;
        assert!((broken.values[0] - c(0.0, -w)).norm() < 1e-15);
        assert!((broken.values[1] - c(0.0, w)).norm() < 1e-15);
    }

    #[test]
    fn companion_of_known_roots() {
        // (λ-1)(λ-2)(λ-3)(λ²+1)(λ-0.5)
        let roots = [
            c(1.0, 0.0),
            c(2.0, 0.0),
            c(3.0, 0.0),
            c(0.0, 1.0),
            c(0.0, -1.0),
            c(0.5, 0.0),
        ];
        let mut poly = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![c(0.0, 0.0); poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i] += a;
                next[i + 1] -= a * r;
            }
            poly = next;
        }
        let n = roots.len();
        let mut m = Array2::zeros((n, n));
        for j in 0..n {
            m[[0, j]] = -poly[j + 1].re;
        }
        for i in 1..n {
            m[[i, i - 1]] = 1.0;
        }
        let eig = eigenvalues_real(&m).unwrap();
        let mut expected = roots.to_vec();
        expected.sort_by(eigen_order);
        for (a, b) in eig.values.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn backward_error_is_small_for_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3, 5, 17, 64, 128] {
            let m = Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0));
            let eig = eigenvalues_real(&m).unwrap();
            assert_eq!(eig.values.len(), n);
            assert!(
                eig.backward_error <= 1e-10 * max_abs(&m),
                "n={n}: {}",
                eig.backward_error
            );
            // trace check
            let trace: f64 = m.diag().sum();
            let sum: Complex64 = eig.values.iter().sum();
            assert!((sum.re - trace).abs() < 1e-9 * n as f64);
            assert!(sum.im.abs() < 1e-12 * n as f64);
        }
    }

    #[test]
    fn handles_zero_and_already_triangular_matrices() {
        let z = eigenvalues_real(&Array2::zeros((4, 4))).unwrap();
        assert!(z.values.iter().all(|v| *v == c(0.0, 0.0)));
        let t = array![[1.0, 5.0, 2.0], [0.0, -2.0, 7.0], [0.0, 0.0, 4.0]];
        let e = eigenvalues_real(&t).unwrap();
        assert_eq!(e.values, vec![c(-2.0, 0.0), c(1.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(e.backward_error, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(eigenvalues_real(&Array2::zeros((2, 3))).is_err());
        let mut m = Array2::zeros((3, 3));
        m[[1, 1]] = f64::NAN;
        assert!(matches!(eigenvalues_real(&m), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn classify_examples() {
        let r = classify_spectrum(&[c(4.0, 0.0), c(2.0, 0.0)], 1e-8).unwrap();
        assert_eq!(r.real_set, vec![2.0, 4.0]);
        assert!(r.pairs.is_empty());

        let r = classify_spectrum(&[c(1.0, 1e-12)], 1e-8).unwrap();
        assert_eq!(r.real_set, vec![1.0]);

        let r = classify_spectrum(&[c(0.0, 0.866), c(0.0, -0.866), c(3.0, 0.0)], 1e-8).unwrap();
        assert_eq!(r.real_set, vec![3.0]);
        assert_eq!(r.pairs, vec![(c(0.0, 0.866), c(0.0, -0.866))]);
    }

    #[test]
    fn classify_detects_missing_partner() {
        let err = classify_spectrum(&[c(1.0, 0.5), c(2.0, 0.0)], 1e-8).unwrap_err();
        assert!(matches!(err, Error::ClosureViolation { .. }));
        let err = classify_spectrum(&[c(1.0, 0.5), c(1.0, -0.6)], 1e-8).unwrap_err();
        assert!(matches!(err, Error::ClosureViolation { .. }));
        assert!(classify_spectrum(&[c(1.0, 0.0)], 0.0).is_err());
    }

    #[test]
    fn spectrum_json_round_trip() {
        let mut r = classify_spectrum(&[c(0.0, 0.5), c(0.0, -0.5), c(3.0, 0.0)], 1e-8).unwrap();
        r.backward_error = 1.5e-16;
        let back = SpectrumReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn sweep_on_free_oscillator() {
        let p = PotentialSpec::new([Term::new(2, 1.0, 0.0)]).unwrap();
        let table = convergence_sweep(&p, &[8, 16], 3).unwrap();
        assert_eq!(table.rows.len(), 6);
        for row in &table.rows {
            assert!((row.value - c((2 * row.level + 1) as f64, 0.0)).norm() < 1e-12);
            if row.n_basis == 16 {
                assert!(row.cauchy_diff.unwrap() < 1e-12);
            } else {
                assert!(row.cauchy_diff.is_none());
            }
        }
        let csv = table.to_csv();
        assert!(csv.starts_with("N,level,re,im,cauchy_diff\n8,0,"));
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn stable_levels_drop_moving_eigenvalues() {
        let small = [c(1.0, 0.0), c(2.0, 50.0), c(2.0, -50.0), c(3.0, 0.0)];
        let large = [c(1.0 + 1e-9, 0.0), c(5.0, 80.0), c(5.0, -80.0), c(3.001, 0.0)];
        assert_eq!(stable_levels(&small, &large, 1e-2), vec![c(1.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(stable_levels(&small, &large, 1e-6), vec![c(1.0, 0.0)]);
    }

    #[test]
    fn sweep_orders_by_absolute_real_part() {
        // -x² is accepted (with a warning) and has negative eigenvalues.
        let p = PotentialSpec::new([Term::new(2, -1.0, 0.0), Term::new(4, 1.0, 0.0)]).unwrap();
        let table = convergence_sweep(&p, &[24], 3).unwrap();
        let abs: Vec<f64> = table.rows.iter().map(|r| r.value.re.abs()).collect();
        assert!(abs.windows(2).all(|w| w[0] <= w[1]), "{abs:?}");
    }

    #[test]
    fn sweep_rejects_bad_lists() {
        let p = PotentialSpec::new([Term::new(2, 1.0, 0.0)]).unwrap();
        assert!(convergence_sweep(&p, &[16, 8], 1).is_err());
        assert!(convergence_sweep(&p, &[8, 8], 1).is_err());
        assert!(convergence_sweep(&p, &[], 1).is_err());
        assert!(convergence_sweep(&p, &[4, 8], 5).is_err());
        assert!(convergence_sweep(&p, &[4, 8], 0).is_err());
    }
}
