use ndarray::{s, Array1};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ptreal_core::oscillator::monomial_matrix;
use ptreal_core::spectra::spectrum_report;
use ptreal_core::verify::{random_antiunitary, random_complex_vector};
use ptreal_core::{
    hamiltonian_matrix, phase_unitary, realify, AntiunitaryRep, OperatorMatrix, PotentialSpec, RealMatrix, Sign, Term,
    Transform,
};

fn potential() -> impl Strategy<Value = PotentialSpec> {
    prop::collection::btree_map(1u32..=8, -3.0f64..3.0, 1..4).prop_map(|coeffs| {
        let terms = coeffs.into_iter().map(|(power, c)| {
            if power % 2 == 0 {
                Term::new(power, c, 0.0)
            } else {
                Term::new(power, 0.0, c)
            }
        });
        PotentialSpec::new(terms).expect("strategy yields PT-valid terms")
    })
}

fn max_dist(a: &Array1<Complex64>, b: &Array1<Complex64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potential_is_pt_symmetric_on_the_real_line(p in potential(), x in -4.0f64..4.0) {
        let z = Complex64::new(x, 0.0);
        let scale: f64 = p.terms().iter().map(|t| t.coeff.norm() * x.abs().powi(t.power as i32)).sum();
        let diff = (p.evaluate(-z) - p.evaluate(z).conj()).norm();
        prop_assert!(diff <= 1e-13 * scale.max(1.0), "diff {diff:e}");
    }

    #[test]
    fn potential_json_round_trips(p in potential()) {
        prop_assert_eq!(PotentialSpec::parse(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn matrix_json_round_trips(p in potential(), n in 2usize..12) {
        let h = hamiltonian_matrix(&p, n).unwrap();
        let back = OperatorMatrix::from_json(&h.to_json(), h.label.clone()).unwrap();
        prop_assert_eq!(&back, &h);
        let u = phase_unitary(n).unwrap();
        let real = realify(&h, Transform::Phase(&u), 1e-10).unwrap();
        prop_assert_eq!(RealMatrix::from_json(&real.to_json()).unwrap(), real);
    }

    #[test]
    fn decompose_recombine_is_identity(p in potential()) {
        let (even, odd) = p.decompose();
        prop_assert!(even.terms().iter().all(|t| t.power % 2 == 0 && t.coeff.im == 0.0));
        prop_assert!(odd.terms().iter().all(|t| t.power % 2 == 1 && t.coeff.re == 0.0));
        prop_assert_eq!(PotentialSpec::recombine(&even, &odd), p);
    }

    #[test]
    fn hamiltonian_is_pt_ho_symmetric(p in potential(), n in 2usize..40) {
        let h = hamiltonian_matrix(&p, n).unwrap();
        let viol = AntiunitaryRep::pt_ho(n).unwrap().check_a_symmetry(&h).unwrap();
        prop_assert!(viol <= 1e-12 * h.max_abs().max(1.0), "violation {viol:e}");
        prop_assert_eq!(h.block_structure_violation(), 0.0);
    }

    #[test]
    fn padded_powers_are_exact(k in 1u32..=16, n in 2usize..30, extra in 1usize..10) {
        let small = monomial_matrix(k, n).unwrap();
        let large = monomial_matrix(k, n + extra).unwrap();
        prop_assert_eq!(large.slice(s![..n, ..n]).to_owned(), small);
    }

    #[test]
    fn phase_realify_is_real(p in potential(), n in 2usize..=128) {
        let h = hamiltonian_matrix(&p, n).unwrap();
        let u = phase_unitary(n).unwrap();
        let real = realify(&h, Transform::Phase(&u), 1e-12).unwrap();
        prop_assert!(real.imag_residual <= 1e-12 * h.max_abs());
    }

    #[test]
    fn projector_algebra(seed in any::<u64>(), n in 2usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_antiunitary(n, &mut rng);
        let v = random_complex_vector(n, &mut rng);
        let plus = a.projector(Sign::Plus, v.view()).unwrap();
        let minus = a.projector(Sign::Minus, v.view()).unwrap();
        prop_assert!(max_dist(&(&plus + &minus), &v) <= 1e-12);
        prop_assert!(max_dist(&a.projector(Sign::Plus, plus.view()).unwrap(), &plus) <= 1e-12);
        prop_assert!(max_dist(&a.projector(Sign::Minus, minus.view()).unwrap(), &minus) <= 1e-12);
        prop_assert!(max_dist(&a.apply(plus.view()).unwrap(), &plus) <= 1e-12);
        prop_assert!(max_dist(&a.apply(minus.view()).unwrap(), &minus.mapv(|z| -z)) <= 1e-12);
    }

    #[test]
    fn spectra_of_real_matrices_are_conjugation_closed(
        entries in prop::collection::vec(-5.0f64..5.0, 4..=400),
    ) {
        let n = (entries.len() as f64).sqrt() as usize;
        let m = ndarray::Array2::from_shape_vec((n, n), entries[..n * n].to_vec()).unwrap();
        let report = spectrum_report(&m, 1e-8).unwrap();
        prop_assert_eq!(report.real_set.len() + 2 * report.pairs.len(), n);
        let scale = m.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        prop_assert!(report.backward_error <= 1e-10 * scale * n as f64);
    }
}
