use num_complex::Complex64;

use ptreal_core::realify::char_poly_real;
use ptreal_core::roots::durand_kerner;
use ptreal_core::spectra::{convergence_sweep, potential_spectrum, stable_levels};
use ptreal_core::verify::greedy_match_distance;
use ptreal_core::{char_poly, hamiltonian_matrix, phase_unitary, realify, PotentialSpec, Term, Transform};

// Lowest levels of p² + ix³ from high-order converged diagonalization.
const CUBIC_LEVELS: [f64; 3] = [1.156_267_071_988, 4.109_228_752_810, 7.562_273_854_979];

fn cubic() -> PotentialSpec {
    PotentialSpec::new([Term::new(3, 0.0, 1.0)]).unwrap()
}

fn shifted() -> PotentialSpec {
    PotentialSpec::new([Term::new(1, 0.0, 2.0), Term::new(2, 1.0, 0.0)]).unwrap()
}

#[test]
fn harmonic_levels_are_odd_integers() {
    let p = PotentialSpec::new([Term::new(2, 1.0, 0.0)]).unwrap();
    let report = potential_spectrum(&p, 16, 1e-10, 1e-8).unwrap();
    assert!(report.pairs.is_empty());
    assert_eq!(report.real_set.len(), 16);
    for (k, e) in report.real_set.iter().enumerate() {
        assert!((e - (2 * k + 1) as f64).abs() < 1e-10, "level {k}: {e}");
    }
}

// x² + 2ix = (x + i)² + 1, so the levels are those of p² + x² shifted by one.
#[test]
fn shifted_oscillator_levels() {
    let report = potential_spectrum(&shifted(), 40, 1e-10, 1e-8).unwrap();
    let mut real = report.real_set.clone();
    real.sort_by(f64::total_cmp);
    for (k, e) in real.iter().take(5).enumerate() {
        let exact = (2 * k + 2) as f64;
        assert!((e - exact).abs() < 1e-6, "level {k}: {e}");
    }
}

#[test]
fn cubic_ground_state_converges() {
    let e64 = potential_spectrum(&cubic(), 64, 1e-10, 1e-8).unwrap();
    let e128 = potential_spectrum(&cubic(), 128, 1e-10, 1e-8).unwrap();
    let g64 = e64.real_set.iter().copied().fold(f64::INFINITY, f64::min);
    let g128 = e128.real_set.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((g64 - g128).abs() < 1e-5);
    assert!((g128 - CUBIC_LEVELS[0]).abs() < 1e-10, "{g128}");
    assert!((g64 - 1.156267).abs() < 1e-5);
}

#[test]
fn cubic_low_levels_are_real_and_stable() {
    let e64 = potential_spectrum(&cubic(), 64, 1e-10, 1e-8).unwrap();
    let e128 = potential_spectrum(&cubic(), 128, 1e-10, 1e-8).unwrap();
    let stable = stable_levels(&e64.eigenvalues, &e128.eigenvalues, 1e-2);
    assert!(stable.len() >= 8, "only {} stable levels", stable.len());
    for z in &stable[..8] {
        assert!(
            e64.real_set.iter().any(|r| (r - z.re).abs() <= 1e-12 * z.re.abs()),
            "{z} not classified real"
        );
    }
    for (z, want) in stable.iter().zip(CUBIC_LEVELS) {
        assert!((z.re - want).abs() < 1e-6, "{z} vs {want}");
    }
}

#[test]
fn cubic_sweep_cauchy_differences() {
    let table = convergence_sweep(&cubic(), &[16, 32, 64], 1).unwrap();
    assert_eq!(table.rows.len(), 3);
    assert_eq!(table.rows[0].cauchy_diff, None);
    let d64 = table.rows[2].cauchy_diff.unwrap();
    // Truncation error at N = 32 is still a few parts in 10⁷.
    assert!((1e-7..1e-6).contains(&d64), "{d64:e}");

    let table = convergence_sweep(&cubic(), &[64, 128], 1).unwrap();
    let d128 = table.rows[1].cauchy_diff.unwrap();
    assert!(d128 <= 1e-8, "{d128:e}");
}

#[test]
fn harmonic_sweep_is_exact() {
    let p = PotentialSpec::new([Term::new(2, 1.0, 0.0)]).unwrap();
    let table = convergence_sweep(&p, &[4, 9, 20], 3).unwrap();
    assert_eq!(table.rows.len(), 9);
    for row in table.rows.iter().filter(|r| r.n_basis > 4) {
        assert_eq!(row.cauchy_diff, Some(0.0));
    }
    let csv = table.to_csv();
    assert!(csv.starts_with("N,level,re,im,cauchy_diff\n4,0,1.0,0.0,\n"));
    assert_eq!(csv, convergence_sweep(&p, &[4, 9, 20], 3).unwrap().to_csv());
}

#[test]
fn sweep_rejects_bad_lists() {
    assert!(convergence_sweep(&cubic(), &[32, 16], 1).is_err());
    assert!(convergence_sweep(&cubic(), &[16, 16], 1).is_err());
    assert!(convergence_sweep(&cubic(), &[], 1).is_err());
    assert!(convergence_sweep(&cubic(), &[4, 8], 5).is_err());
    assert!(convergence_sweep(&cubic(), &[4, 8], 0).is_err());
}

#[test]
fn secular_polynomial_is_real_for_cubic() {
    for n in [4, 8, 12] {
        let h = hamiltonian_matrix(&cubic(), n).unwrap();
        let complex = char_poly(&h.entries).unwrap();
        let scale = complex.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let imag = complex.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
        assert!(imag <= 1e-9 * scale, "n={n}: {imag:e}");

        let u = phase_unitary(n).unwrap();
        let real = realify(&h, Transform::Phase(&u), 1e-10).unwrap();
        let from_real = char_poly_real(&real.entries).unwrap();
        for (c, r) in complex.iter().zip(&from_real) {
            assert!((c.re - r).abs() <= 1e-9 * scale, "n={n}: {c} vs {r}");
        }
    }
}

#[test]
fn eigenvalues_match_polynomial_roots() {
    for (p, n) in [(cubic(), 12), (shifted(), 10)] {
        let h = hamiltonian_matrix(&p, n).unwrap();
        let u = phase_unitary(n).unwrap();
        let real = realify(&h, Transform::Phase(&u), 1e-10).unwrap();
        let eigs = ptreal_core::eigenvalues_real(&real.entries).unwrap();
        let roots: Vec<Complex64> = durand_kerner(&char_poly(&h.entries).unwrap()).unwrap();
        let dist = greedy_match_distance(&eigs.values, &roots);
        assert!(dist < 1e-8, "n={n}: {dist:e}");
    }
}
