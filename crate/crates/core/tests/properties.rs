use poalg::literal::{format_complex, parse_complex};
use poalg::random::{haar_unitary, random_basis, random_distribution, random_hermitian, random_pseudo, random_psd, rng, unit_vector};
use poalg::*;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative_and_distributive(seed in any::<u64>(), d in 1usize..=12) {
        let mut r = rng(seed);
        let (p, q, s) = (random_pseudo(&mut r, d), random_pseudo(&mut r, d), random_pseudo(&mut r, d));
        let scale = norm(&p) * norm(&q) * norm(&s);
        let left = p.mul(&q).unwrap().mul(&s).unwrap();
        let right = p.mul(&q.mul(&s).unwrap()).unwrap();
        prop_assert!(left.distance(&right).unwrap() <= 1e-12 * scale);
        let dist = p.mul(&q.add(&s).unwrap()).unwrap();
        let split = p.mul(&q).unwrap().add(&p.mul(&s).unwrap()).unwrap();
        prop_assert!(dist.distance(&split).unwrap() <= 1e-12 * norm(&p) * (norm(&q) + norm(&s)));
    }

    #[test]
    fn dagger_is_an_anti_automorphism(seed in any::<u64>(), d in 1usize..=12) {
        let mut r = rng(seed);
        let (p, q) = (random_pseudo(&mut r, d), random_pseudo(&mut r, d));
        prop_assert_eq!(p.dagger().dagger(), p.clone());
        let lhs = p.mul(&q).unwrap().dagger();
        let rhs = q.dagger().mul(&p.dagger()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-12 * norm(&p) * norm(&q));
    }

    #[test]
    fn real_imag_parts_recombine(seed in any::<u64>(), d in 1usize..=10) {
        let mut r = rng(seed);
        let z = random_pseudo(&mut r, d);
        let (re, im) = z.real_imag_parts();
        prop_assert!(re.as_pseudo().hermitian_deviation() == 0.0);
        prop_assert!(im.as_pseudo().hermitian_deviation() == 0.0);
        let back = re.as_pseudo().add(&im.as_pseudo().scale(Complex64::new(0.0, 1.0))).unwrap();
        prop_assert!(back.components().iter().zip(z.components().iter()).all(|(a, b)| (a - b).norm() <= 1e-14));
    }

    #[test]
    fn trace_rules(seed in any::<u64>(), d in 1usize..=16) {
        let mut r = rng(seed);
        let (p, q) = (random_pseudo(&mut r, d), random_pseudo(&mut r, d));
        let gamma = Complex64::new(0.4, -2.0);
        let scale = norm(&p) * norm(&q);
        prop_assert!((trace(&p.mul(&q).unwrap()) - trace(&q.mul(&p).unwrap())).norm() <= 1e-10 * scale);
        prop_assert!(trace(&p.commutator(&q).unwrap()).norm() <= 1e-11 * scale.max(1.0));
        prop_assert!((trace(&p.dagger()) - trace(&p).conj()).norm() == 0.0);
        let lin = trace(&p.add(&q.scale(gamma)).unwrap()) - trace(&p) - gamma * trace(&q);
        prop_assert!(lin.norm() <= 1e-12 * (norm(&p) + norm(&q)));
        let psd = random_psd(&mut r, d);
        prop_assert!(trace(psd.as_pseudo()).re >= 0.0);
    }

    #[test]
    fn trace_is_basis_independent(seed in any::<u64>(), d in 1usize..=10) {
        let mut r = rng(seed);
        let p = random_pseudo(&mut r, d);
        let a = DyadBasis::new(random_basis(&mut r, d));
        let b = DyadBasis::new(random_basis(&mut r, d));
        let sum = |basis: &DyadBasis| (0..d).map(|j| component(&p, j, j, basis).unwrap()).sum::<Complex64>();
        prop_assert!((sum(&a) - sum(&b)).norm() <= 1e-10 * norm(&p).max(1.0));
        prop_assert!((sum(&a) - trace(&p)).norm() <= 1e-10 * norm(&p).max(1.0));
    }

    #[test]
    fn inner_product_axioms(seed in any::<u64>(), d in 1usize..=10, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let mut r = rng(seed);
        let (x, y, w) = (random_pseudo(&mut r, d), random_pseudo(&mut r, d), random_pseudo(&mut r, d));
        let a = Complex64::new(re, im);
        let eps = 1e-10 * (1.0 + norm(&x) * norm(&y) * norm(&w));
        prop_assert!((inner(&x.scale(a), &y).unwrap() - a.conj() * inner(&x, &y).unwrap()).norm() <= eps * (1.0 + a.norm()));
        prop_assert!((inner(&x, &y.add(&w.scale(a)).unwrap()).unwrap() - inner(&x, &y).unwrap() - a * inner(&x, &w).unwrap()).norm() <= eps * (1.0 + a.norm()));
        prop_assert!((inner(&x, &y).unwrap() - inner(&y, &x).unwrap().conj()).norm() <= eps);
        let xx = inner(&x, &x).unwrap();
        prop_assert!(xx.re > 0.0 && xx.im.abs() <= eps);
        prop_assert!((inner(&x, &y).unwrap() - inner(&y.dagger(), &x.dagger()).unwrap()).norm() <= eps);
        prop_assert!((inner(&x, &y.mul(&w).unwrap()).unwrap() - inner(&y.dagger().mul(&x).unwrap(), &w).unwrap()).norm() <= eps);
        prop_assert!(inner(&x, &y).unwrap().norm() <= norm(&x) * norm(&y) + 1e-12);
    }

    #[test]
    fn spectral_reconstruction(seed in any::<u64>(), d in 1usize..=16) {
        let mut r = rng(seed);
        let o = random_hermitian(&mut r, d);
        let s = decompose(&o, &tol()).unwrap();
        prop_assert!(s.reconstruct().distance(o.as_pseudo()).unwrap() <= 1e-9);
        prop_assert_eq!(s.distinct.iter().map(|&(_, m)| m).sum::<usize>(), d);
        let vectors = s.basis.vectors();
        for j in 0..d {
            for k in 0..d {
                if (s.coefficients[j] - s.coefficients[k]).abs() > 1e-6 {
                    prop_assert!(vectors[j].dotc(&vectors[k]).norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn degenerate_spectra_are_grouped(seed in any::<u64>(), d in 2usize..=9, split in 1usize..=8) {
        let split = split.min(d - 1);
        let mut r = rng(seed);
        let u = haar_unitary(&mut r, d);
        let diag: Vec<f64> = (0..d).map(|j| if j < split { 2.0 } else { -0.5 }).collect();
        let o = Observable::new(u.mul(&PseudoObservable::real_diagonal(&diag).unwrap()).unwrap().mul(&u.dagger()).unwrap()).unwrap();
        let s = decompose(&o, &tol()).unwrap();
        prop_assert_eq!(s.distinct.len(), 2);
        prop_assert_eq!(s.distinct[0].1, split);
        let space = s.bilateral_eigenspace(2.0, -0.5).unwrap();
        prop_assert_eq!(space.dimension, split * (d - split));
    }

    #[test]
    fn state_vector_sets(seed in any::<u64>(), d in 1usize..=8, k0 in 0usize..8) {
        let k0 = k0 % d;
        let mut r = rng(seed);
        let basis = DyadBasis::new(random_basis(&mut r, d));
        let set = make_state_vectors(&basis, k0, &haar_unitary(&mut r, d), &tol()).unwrap();
        prop_assert!(set.characterization_deviation() <= 1e-9);
        prop_assert!(set.orthonormality_deviation() <= 1e-9);
        let found = verify_characterization(&set.members(), &basis, &tol()).unwrap();
        prop_assert!(found.holds);
        let (k0b, k) = found.factorization.unwrap();
        let again = make_state_vectors(&basis, k0b, &k, &tol()).unwrap();
        for (a, b) in again.members().iter().zip(set.members()) {
            prop_assert!(a.distance(&b).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn normalized_superpositions_have_unit_wave_functions(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let basis = DyadBasis::new(random_basis(&mut r, d));
        let set = make_state_vectors(&basis, 0, &haar_unitary(&mut r, d), &tol()).unwrap();
        let phi = set.combine(&unit_vector(&mut r, d).iter().copied().collect::<Vec<_>>()).unwrap();
        let labels: Vec<Vec<f64>> = (0..d).map(|j| vec![j as f64]).collect();
        let w = wave_function(&phi, &set, &labels, &tol()).unwrap();
        prop_assert!((w.probabilities().iter().sum::<f64>() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn measurement_consistency(seed in any::<u64>(), d in 1usize..=12) {
        let mut r = rng(seed);
        let density = make_density(&random_basis(&mut r, d), &random_distribution(&mut r, d), &tol()).unwrap();
        let b = random_hermitian(&mut r, d);
        let bb = decompose(&b, &tol()).unwrap().basis;
        let routes = conditional_expectation_routes(&b, &density, &bb).unwrap();
        prop_assert!(routes.max_discrepancy() <= 1e-10);
        let t = transition_matrix(density.basis(), &bb).unwrap();
        prop_assert!(t.stochastic_deviation() <= 1e-10);
        let projected = project_density(&density, &bb, &tol()).unwrap();
        let twice = project_density(&projected, &bb, &tol()).unwrap();
        for (x, y) in projected.probabilities().iter().zip(twice.probabilities()) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn uncertainty_relation(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let density = make_density(&random_basis(&mut r, d), &random_distribution(&mut r, d), &tol()).unwrap();
        let check = uncertainty_check(&random_hermitian(&mut r, d), &random_hermitian(&mut r, d), &density, 1e-10).unwrap();
        prop_assert!(check.holds, "{:?}", check);
    }

    #[test]
    fn order_preservation(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let density = make_density(&random_basis(&mut r, d), &random_distribution(&mut r, d), &tol()).unwrap();
        let o = random_hermitian(&mut r, d);
        let q = random_psd(&mut r, d);
        let raised = o.add(&q).unwrap();
        prop_assert!(is_leq(&o, &raised, &tol()).unwrap());
        prop_assert!(expectation_real(&o, &density).unwrap() <= expectation_real(&raised, &density).unwrap() + 1e-12);
    }

    #[test]
    fn complex_literals_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = Complex64::new(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    #[test]
    fn distributions_validate(seed in any::<u64>(), d in 1usize..=12) {
        let mut r = rng(seed);
        let p = random_distribution(&mut r, d);
        prop_assert!(make_density(&ProjectorBasis::computational(d), &p, &tol()).is_ok());
    }
}

#[test]
fn null_expectation_forces_zero() {
    let mut r = rng(99);
    for d in [1, 3, 6] {
        let o = random_hermitian(&mut r, d);
        let s = decompose(&o, &tol()).unwrap();
        let recovered: Vec<f64> = (0..d)
            .map(|j| expectation_real(&o, &DensityObservable::pure(&s.basis, j).unwrap()).unwrap())
            .collect();
        for (a, b) in recovered.iter().zip(&s.coefficients) {
            assert!((a - b).abs() <= 1e-12);
        }
        let zero = Observable::zeros(d);
        let mut all_zero = true;
        for _ in 0..50 {
            let basis = random_basis(&mut r, d);
            for j in 0..d {
                all_zero &= expectation_real(&zero, &DensityObservable::pure(&basis, j).unwrap()).unwrap().abs() <= 1e-10;
            }
        }
        assert!(all_zero);
        assert!(zero.as_pseudo().max_abs() <= 1e-8);
    }
}
