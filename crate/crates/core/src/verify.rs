//! Invariant suite run by `ptreal verify`.
//!
//! Each group is a list of named checks; a group stops at its first failing
//! check. Random inputs come from a fixed-seed ChaCha stream so runs are
//! reproducible.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::antiunitary::{fixed_residual, inner, AntiunitaryRep, Recipe, Sign};
use crate::error::Result;
use crate::oscillator::{hamiltonian_matrix, monomial_matrix, BasisTag, OperatorMatrix};
use crate::potential::{PotentialSpec, Term};
use crate::realify::{char_poly, char_poly_real, realify, Transform, DEFAULT_REALITY_TOL};
use crate::roots::durand_kerner;
use crate::spectra::{classify_spectrum, eigenvalues_real, DEFAULT_CLASSIFY_TOL};

/// Group names in execution order.
pub const GROUPS: &[&str] = &[
    "projectors",
    "involution",
    "unitary",
    "real_gram",
    "recipes",
    "parity",
    "char_poly",
    "oracle",
    "closure",
];

const ALGEBRA_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-8;
const CHAR_POLY_TOL: f64 = 1e-9;
const RANDOM_VECTORS: usize = 100;
const ORACLE_MATRICES: usize = 50;

/// Constructor for the diagonal of the realifying phase unitary.
pub type PhaseUnitaryFn = fn(usize) -> Result<Vec<Complex64>>;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub phase_unitary: PhaseUnitaryFn,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            phase_unitary: crate::realify::phase_unitary,
            seed: 0x5eed,
        }
    }
}

/// The first failing check of a group.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub group: &'static str,
    pub check: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} ({})", self.group, self.check, self.detail)
    }
}

type CheckResult = std::result::Result<(), (&'static str, String)>;

fn ensure(ok: bool, check: &'static str, detail: impl FnOnce() -> String) -> CheckResult {
    if ok {
        Ok(())
    } else {
        Err((check, detail()))
    }
}

fn lift<T>(r: Result<T>, check: &'static str) -> std::result::Result<T, (&'static str, String)> {
    r.map_err(|e| (check, e.to_string()))
}

/// Runs one group; `None` for an unknown name.
pub fn run_group(name: &str, opts: &VerifyOptions) -> Option<std::result::Result<(), Failure>> {
    let group = *GROUPS.iter().find(|g| **g == name)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let outcome = match group {
        "projectors" => check_projectors(&mut rng),
        "involution" => check_involution(&mut rng),
        "unitary" => check_unitary(opts),
        "real_gram" => check_real_gram(&mut rng),
        "recipes" => check_recipes(opts),
        "parity" => check_parity(),
        "char_poly" => check_char_poly(opts),
        "oracle" => check_oracle(opts, &mut rng),
        "closure" => check_closure(opts, &mut rng),
        _ => unreachable!("group list and dispatch out of sync"),
    };
    Some(outcome.map_err(|(check, detail)| Failure { group, check, detail }))
}

/// Runs every group in order, returning `(group, outcome)` pairs.
pub fn run_all(opts: &VerifyOptions) -> Vec<(&'static str, std::result::Result<(), Failure>)> {
    GROUPS
        .iter()
        .map(|g| (*g, run_group(g, opts).expect("known group")))
        .collect()
}

/// The potentials used throughout the suite.
pub fn reference_potentials() -> Vec<(&'static str, PotentialSpec)> {
    let make = |terms: Vec<Term>| PotentialSpec::new(terms).expect("reference potential is valid");
    vec![
        ("x^2+2ix", make(vec![Term::new(2, 1.0, 0.0), Term::new(1, 0.0, 2.0)])),
        ("ix^3", make(vec![Term::new(3, 0.0, 1.0)])),
        (
            "x^2+0.5ix^3",
            make(vec![Term::new(2, 1.0, 0.0), Term::new(3, 0.0, 0.5)]),
        ),
    ]
}

pub fn random_complex_vector(n: usize, rng: &mut impl Rng) -> Array1<Complex64> {
    Array1::from_shape_fn(n, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_complex_matrix(n: usize, rng: &mut impl Rng) -> Array2<Complex64> {
    Array2::from_shape_fn((n, n), |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Random unitary from Gram–Schmidt on a random complex matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> Array2<Complex64> {
    let mut q = random_complex_matrix(n, rng);
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let overlap = inner(q.column(k), q.column(j));
                let qk = q.column(k).to_owned();
                q.column_mut(j).zip_mut_with(&qk, |x, &y| *x -= y * overlap);
            }
        }
        let norm = crate::antiunitary::norm(q.column(j));
        q.column_mut(j).mapv_inplace(|z| z / norm);
    }
    q
}

/// A random antiunitary involution `A = U K U†`, i.e. `W = U Uᵀ`.
pub fn random_antiunitary(n: usize, rng: &mut impl Rng) -> AntiunitaryRep {
    let u = random_unitary(n, rng);
    AntiunitaryRep::custom(u.dot(&u.t())).expect("U Uᵀ is a unitary involution")
}

/// `(G + P·conj(G)·P)/2` for a random complex `G`: symmetric under
/// oscillator PT, `(−1)^{m+n} conj(H_mn) = H_mn`.
pub fn random_a_symmetric(n: usize, rng: &mut impl Rng) -> OperatorMatrix {
    let g = random_complex_matrix(n, rng);
    let h = Array2::from_shape_fn((n, n), |(m, k)| {
        let sign = if (m + k) % 2 == 0 { 1.0 } else { -1.0 };
        (g[[m, k]] + g[[m, k]].conj() * sign) * 0.5
    });
    OperatorMatrix::new(h, BasisTag::Ho, format!("random A-symmetric n={n}")).expect("n >= 2")
}

fn max_dist(a: &Array1<Complex64>, b: &Array1<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn check_projectors(rng: &mut ChaCha8Rng) -> CheckResult {
    let reps = [
        lift(AntiunitaryRep::pt_ho(8), "Q construction")?,
        random_antiunitary(6, rng),
    ];
    for a in &reps {
        let n = a.n_basis();
        for _ in 0..RANDOM_VECTORS {
            let v = random_complex_vector(n, rng);
            let qp = lift(a.projector(Sign::Plus, v.view()), "Q+ + Q- = 1")?;
            let qm = lift(a.projector(Sign::Minus, v.view()), "Q+ + Q- = 1")?;
            let d = max_dist(&(&qp + &qm), &v);
            ensure(d <= ALGEBRA_TOL, "Q+ + Q- = 1", || format!("deviation {d:e}"))?;
            for (sigma, q) in [(Sign::Plus, &qp), (Sign::Minus, &qm)] {
                let qq = lift(a.projector(sigma, q.view()), "Q idempotent")?;
                let d = max_dist(&qq, q);
                ensure(d <= ALGEBRA_TOL, "Q idempotent", || format!("deviation {d:e}"))?;
                let aq = lift(a.apply(q.view()), "A Q = sigma Q")?;
                let d = max_dist(&aq, &q.mapv(|z| z * sigma.value()));
                ensure(d <= ALGEBRA_TOL, "A Q = sigma Q", || format!("deviation {d:e}"))?;
            }
        }
    }
    Ok(())
}

fn check_involution(rng: &mut ChaCha8Rng) -> CheckResult {
    let reps = [lift(AntiunitaryRep::pt_ho(7), "A^2 = 1")?, random_antiunitary(5, rng)];
    for a in &reps {
        for _ in 0..RANDOM_VECTORS {
            let v = random_complex_vector(a.n_basis(), rng);
            let av = lift(a.apply(v.view()), "A^2 = 1")?;
            let aav = lift(a.apply(av.view()), "A^2 = 1")?;
            let d = max_dist(&aav, &v);
            ensure(d <= ALGEBRA_TOL, "A^2 = 1", || format!("deviation {d:e}"))?;

            let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let acv = lift(a.apply(v.mapv(|z| z * c).view()), "antilinearity")?;
            let d = max_dist(&acv, &av.mapv(|z| z * c.conj()));
            ensure(d <= ALGEBRA_TOL, "antilinearity", || format!("deviation {d:e}"))?;
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let squares_to_minus_one = ndarray::array![[zero, one], [-one, zero]];
    ensure(
        AntiunitaryRep::custom(squares_to_minus_one).is_err(),
        "involution validated on load",
        || "W with W·conj(W) = -I accepted".into(),
    )
}

fn check_unitary(opts: &VerifyOptions) -> CheckResult {
    for n in 2..=64 {
        let u = lift((opts.phase_unitary)(n), "U construction")?;
        ensure(u.len() == n, "U construction", || {
            format!("length {} for n={n}", u.len())
        })?;
        // Diagonal U: U† = U* holds by construction; unitarity needs |u|=1.
        let d = u.iter().map(|z| (z * z.conj() - 1.0).norm()).fold(0.0, f64::max);
        ensure(d <= ALGEBRA_TOL, "U† = U*", || {
            format!("U·U* deviates by {d:e} at n={n}")
        })?;
        let d = u
            .iter()
            .enumerate()
            .map(|(k, z)| (z * z - if k % 2 == 0 { 1.0 } else { -1.0 }).norm())
            .fold(0.0, f64::max);
        ensure(d <= ALGEBRA_TOL, "U²=P", || format!("deviation {d:e} at n={n}"))?;
    }
    Ok(())
}

fn check_real_gram(rng: &mut ChaCha8Rng) -> CheckResult {
    let reps = [lift(AntiunitaryRep::pt_ho(9), "real Gram")?, random_antiunitary(6, rng)];
    for a in &reps {
        let n = a.n_basis();
        for _ in 0..RANDOM_VECTORS {
            let u = lift(
                a.projector(Sign::Plus, random_complex_vector(n, rng).view()),
                "real Gram",
            )?;
            let v = lift(
                a.projector(Sign::Plus, random_complex_vector(n, rng).view()),
                "real Gram",
            )?;
            let g = inner(u.view(), v.view());
            ensure(g.im.abs() <= ALGEBRA_TOL, "real Gram", || {
                format!("Im<u|v> = {:e}", g.im)
            })?;
        }
        let seed = random_unitary(n, rng);
        let basis = lift(
            a.adapted_basis(Recipe::ProjectorPhase, Some(&seed)),
            "Gram-Schmidt keeps A-fixed",
        )?;
        ensure(basis.ortho_residual <= ALGEBRA_TOL, "Gram-Schmidt orthonormal", || {
            format!("residual {:e}", basis.ortho_residual)
        })?;
        let worst = basis
            .columns
            .columns()
            .into_iter()
            .map(|c| fixed_residual(a, c))
            .fold(0.0, f64::max);
        ensure(
            worst <= crate::antiunitary::FIXED_TOL,
            "Gram-Schmidt keeps A-fixed",
            || format!("residual {worst:e}"),
        )?;
    }
    Ok(())
}

/// Max deviation `|D·a·D − b|` for the sign vector `D` found by matching
/// each column against the strongest coupling to an earlier column.
pub fn sign_similarity_deviation(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    let n = a.nrows();
    let mut d = vec![1.0; n];
    for j in 1..n {
        let best = (0..j)
            .map(|i| (i, a[[i, j]].abs() + a[[j, i]].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1));
        if let Some((i, w)) = best {
            if w > 0.0 {
                let (ai, bi) = if a[[i, j]].abs() >= a[[j, i]].abs() {
                    (a[[i, j]], b[[i, j]])
                } else {
                    (a[[j, i]], b[[j, i]])
                };
                d[j] = if bi * ai * d[i] >= 0.0 { 1.0 } else { -1.0 };
            }
        }
    }
    a.indexed_iter()
        .map(|((i, j), v)| (d[i] * v * d[j] - b[[i, j]]).abs())
        .fold(0.0, f64::max)
}

/// Realified Hamiltonians via phase unitary, `phase_power` and Porter.
pub fn realify_three_ways(h: &OperatorMatrix, phase: PhaseUnitaryFn) -> Result<[crate::realify::RealMatrix; 3]> {
    let n = h.n_basis();
    let a = AntiunitaryRep::pt_ho(n)?;
    let u = phase(n)?;
    let by_phase = realify(h, Transform::Phase(&u), DEFAULT_REALITY_TOL)?;
    let pp = a.adapted_basis(Recipe::PhasePower, None)?;
    let by_power = realify(h, Transform::Adapted(&pp), DEFAULT_REALITY_TOL)?;
    let porter = a.adapted_basis(Recipe::porter_default(), None)?;
    let by_porter = realify(h, Transform::Adapted(&porter), DEFAULT_REALITY_TOL)?;
    Ok([by_phase, by_power, by_porter])
}

fn check_recipes(opts: &VerifyOptions) -> CheckResult {
    for n in 2..=64 {
        let a = lift(AntiunitaryRep::pt_ho(n), "bender rank")?;
        let b = lift(a.adapted_basis(Recipe::Bender, None), "bender rank")?;
        let expected = n.div_ceil(2);
        ensure(b.rank == expected && b.dropped == n - expected, "bender rank", || {
            format!("n={n}: rank {} dropped {}", b.rank, b.dropped)
        })?;
    }
    for (name, p) in reference_potentials() {
        let h = lift(hamiltonian_matrix(&p, 32), "recipe agreement")?;
        let [m1, m2, m3] = lift(realify_three_ways(&h, opts.phase_unitary), "recipe agreement")?;
        for (x, y) in [(&m1, &m2), (&m1, &m3), (&m2, &m3)] {
            let d = sign_similarity_deviation(&x.entries, &y.entries);
            ensure(d <= ALGEBRA_TOL, "recipe agreement", || {
                format!("{name}: deviation {d:e}")
            })?;
        }
    }
    Ok(())
}

fn check_parity() -> CheckResult {
    for k in 0..=16u32 {
        let xk = lift(monomial_matrix(k, 12), "parity selection")?;
        for ((m, n), v) in xk.indexed_iter() {
            if (m + n + k as usize) % 2 == 1 {
                ensure(*v == 0.0, "parity selection", || format!("<{m}|x^{k}|{n}> = {v:e}"))?;
            }
        }
        let bigger = lift(monomial_matrix(k, 20), "padding exactness")?;
        let scale = xk.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let d = xk
            .indexed_iter()
            .map(|((i, j), v)| (v - bigger[[i, j]]).abs())
            .fold(0.0, f64::max);
        ensure(d <= 1e-13 * scale, "padding exactness", || {
            format!("k={k}: deviation {d:e}")
        })?;
    }
    Ok(())
}

fn check_char_poly(opts: &VerifyOptions) -> CheckResult {
    let cubic = PotentialSpec::new([Term::new(3, 0.0, 1.0)]).expect("valid");
    for n in [4, 8, 12] {
        let h = lift(hamiltonian_matrix(&cubic, n), "char poly reality")?;
        let coeffs = lift(char_poly(&h.entries), "char poly reality")?;
        let scale = coeffs.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let worst = coeffs.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        ensure(worst <= CHAR_POLY_TOL * scale, "char poly reality", || {
            format!("n={n}: max |Im c| = {worst:e}, scale {scale:e}")
        })?;
        let u = lift((opts.phase_unitary)(n), "char poly similarity")?;
        let real = lift(
            realify(&h, Transform::Phase(&u), DEFAULT_REALITY_TOL),
            "char poly similarity",
        )?;
        let real_coeffs = lift(char_poly_real(&real.entries), "char poly similarity")?;
        for (k, (a, b)) in coeffs.iter().zip(&real_coeffs).enumerate() {
            let d = (a.re - b).abs();
            ensure(d <= CHAR_POLY_TOL * a.norm().max(1.0), "char poly similarity", || {
                format!("n={n}, coefficient {k}: {} vs {b}", a.re)
            })?;
        }
    }
    Ok(())
}

/// Largest distance between `eigs` and `roots` under greedy nearest matching.
pub fn greedy_match_distance(eigs: &[Complex64], roots: &[Complex64]) -> f64 {
    if eigs.len() != roots.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; roots.len()];
    let mut worst = 0.0f64;
    for e in eigs {
        let best = roots
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, r)| (j, (r - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, d)) => {
                used[j] = true;
                worst = worst.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

/// Real-Schur eigenvalues of the realified matrix against Durand–Kerner
/// roots of the complex characteristic polynomial.
pub fn oracle_distance(h: &OperatorMatrix, phase: PhaseUnitaryFn) -> Result<f64> {
    let u = phase(h.n_basis())?;
    let real = realify(h, Transform::Phase(&u), DEFAULT_REALITY_TOL)?;
    let eigs = eigenvalues_real(&real.entries)?;
    let roots = durand_kerner(&char_poly(&h.entries)?)?;
    Ok(greedy_match_distance(&eigs.values, &roots))
}

fn check_oracle(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> CheckResult {
    for trial in 0..ORACLE_MATRICES {
        let n = rng.gen_range(2..=12);
        let h = random_a_symmetric(n, rng);
        let d = lift(oracle_distance(&h, opts.phase_unitary), "eigen oracle")?;
        ensure(d <= ORACLE_TOL, "eigen oracle", || {
            format!("trial {trial} (n={n}): distance {d:e}")
        })?;
    }
    for (name, p) in reference_potentials() {
        let h = lift(hamiltonian_matrix(&p, 10), "eigen oracle")?;
        let d = lift(oracle_distance(&h, opts.phase_unitary), "eigen oracle")?;
        ensure(d <= ORACLE_TOL, "eigen oracle", || format!("{name}: distance {d:e}"))?;
    }
    Ok(())
}

fn check_closure(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> CheckResult {
    let mut matrices = Vec::new();
    for (_, p) in reference_potentials() {
        for n in [16, 32, 64] {
            matrices.push(lift(hamiltonian_matrix(&p, n), "conjugation closure")?);
        }
    }
    for _ in 0..20 {
        let n = rng.gen_range(2..=40);
        matrices.push(random_a_symmetric(n, rng));
    }
    for h in &matrices {
        let u = lift((opts.phase_unitary)(h.n_basis()), "conjugation closure")?;
        let real = lift(
            realify(h, Transform::Phase(&u), DEFAULT_REALITY_TOL),
            "conjugation closure",
        )?;
        let eigs = lift(eigenvalues_real(&real.entries), "conjugation closure")?;
        let report = classify_spectrum(&eigs.values, DEFAULT_CLASSIFY_TOL);
        ensure(report.is_ok(), "conjugation closure", || {
            format!("{}: {}", h.label, report.unwrap_err())
        })?;
    }
    Ok(())
}
