//! Randomized property sweeps over every module.
//!
//! Each property maps a seeded stream and a dimension to an observed error.
//! Trial `t` of property `p` uses the stream `derive_seed(derive_seed(seed,
//! p), t)` and the dimension `lo + t mod (hi - lo + 1)`, capped per
//! property. Trials run in parallel and are collected in trial order.

use std::ops::RangeInclusive;

use poalg::random::{
    derive_seed, haar_unitary, random_basis, random_commuting_family, random_distribution, random_hermitian, random_phases, random_pseudo,
    random_psd, unit_vector,
};
use poalg::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

const MAX_OFFENDERS: usize = 10;

type Eval = fn(&mut ChaCha8Rng, usize) -> Result<f64>;

struct Property {
    name: &'static str,
    module: &'static str,
    tolerance: f64,
    max_dim: usize,
    eval: Eval,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub dims: RangeInclusive<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            dims: 2..=12,
            trials: 1000,
            seed: 0,
            tol_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Offender {
    pub seed: u64,
    pub dim: usize,
    /// `null` when the trial raised an error.
    pub error: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    pub module: String,
    pub trials: usize,
    pub tolerance: f64,
    /// `null` when some trial raised an error.
    pub worst_error: Option<f64>,
    pub passed: bool,
    pub failures: usize,
    pub offending_seeds: Vec<Offender>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerificationReport {
    pub seed: u64,
    pub dims: [usize; 2],
    pub trials: usize,
    pub tol_scale: f64,
    pub passed: bool,
    pub failed_properties: usize,
    pub properties: Vec<PropertyResult>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn property_names() -> Vec<(&'static str, &'static str)> {
    properties().iter().map(|p| (p.module, p.name)).collect()
}

/// Runs every property. Panics if `dims` is empty or starts at zero.
pub fn verify(options: &VerifyOptions) -> VerificationReport {
    let (lo, hi) = (*options.dims.start(), *options.dims.end());
    assert!(lo >= 1 && lo <= hi, "dimension range must be non-empty and positive");
    let span = hi - lo + 1;
    let results: Vec<PropertyResult> = properties()
        .iter()
        .enumerate()
        .map(|(index, property)| {
            let root = derive_seed(options.seed, index as u64);
            let tolerance = property.tolerance * options.tol_scale;
            let outcomes: Vec<(u64, usize, Option<f64>)> = (0..options.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = derive_seed(root, t as u64);
                    let dim = (lo + t % span).min(property.max_dim);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let error = (property.eval)(&mut rng, dim).ok().filter(|e| !e.is_nan());
                    (seed, dim, error)
                })
                .collect();
            let failing: Vec<&(u64, usize, Option<f64>)> = outcomes
                .iter()
                .filter(|(_, _, e)| !matches!(e, Some(x) if *x <= tolerance))
                .collect();
            let worst_error = outcomes
                .iter()
                .try_fold(0.0f64, |acc, (_, _, e)| e.map(|x| acc.max(x)));
            PropertyResult {
                name: property.name.into(),
                module: property.module.into(),
                trials: options.trials,
                tolerance,
                worst_error: worst_error.filter(|x| x.is_finite()),
                passed: failing.is_empty(),
                failures: failing.len(),
                offending_seeds: failing
                    .iter()
                    .take(MAX_OFFENDERS)
                    .map(|&&(seed, dim, error)| Offender {
                        seed,
                        dim,
                        error: error.filter(|x| x.is_finite()),
                    })
                    .collect(),
            }
        })
        .collect();
    let failed_properties = results.iter().filter(|r| !r.passed).count();
    VerificationReport {
        seed: options.seed,
        dims: [lo, hi],
        trials: options.trials,
        tol_scale: options.tol_scale,
        passed: failed_properties == 0,
        failed_properties,
        properties: results,
    }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn rel(error: f64, scale: f64) -> f64 {
    error / scale.max(1.0)
}

fn dist(a: &PseudoObservable, b: &PseudoObservable) -> Result<f64> {
    a.distance(b)
}

fn density<R: rand::Rng>(rng: &mut R, d: usize) -> Result<DensityObservable> {
    make_density(&random_basis(rng, d), &random_distribution(rng, d), &tol())
}

fn random_set<R: rand::Rng>(rng: &mut R, d: usize) -> Result<StateVectorSet> {
    let basis = DyadBasis::new(random_basis(rng, d));
    let k0 = rng.random_range(0..d);
    make_state_vectors(&basis, k0, &haar_unitary(rng, d), &tol())
}

fn unit_coefficients<R: rand::Rng>(rng: &mut R, d: usize) -> Vec<Complex64> {
    unit_vector(rng, d).iter().copied().collect()
}

fn properties() -> Vec<Property> {
    const ALL: usize = usize::MAX;
    let p = |module, name, tolerance, max_dim, eval| Property {
        name,
        module,
        tolerance,
        max_dim,
        eval,
    };
    vec![
        p("algebra-core", "product_associativity", 1e-12, ALL, product_associativity),
        p("algebra-core", "product_distributivity", 1e-12, ALL, product_distributivity),
        p("algebra-core", "dagger_anti_automorphism", 1e-12, ALL, dagger_anti_automorphism),
        p("algebra-core", "real_imag_recombination", 1e-14, ALL, real_imag_recombination),
        p("algebra-core", "commutator_trace", 1e-11, ALL, commutator_trace),
        p("algebra-core", "component_reconstruction", 1e-10, ALL, component_reconstruction),
        p("bases", "projector_exclusivity_closure", 1e-10, ALL, projector_exclusivity_closure),
        p("bases", "dyad_products", 1e-10, 8, dyad_products),
        p("bases", "conjugation_closure", 1e-10, ALL, conjugation_closure),
        p("bases", "basis_change_composition", 1e-10, ALL, basis_change_composition),
        p("bases", "compatible_family_reconstruction", 1e-8, ALL, compatible_family_reconstruction),
        p("spectral", "trace_linearity", 1e-10, ALL, trace_linearity),
        p("spectral", "trace_cyclicity", 1e-10, ALL, trace_cyclicity),
        p("spectral", "trace_dagger_conjugate", 1e-10, ALL, trace_dagger_conjugate),
        p("spectral", "trace_basis_independence", 1e-10, ALL, trace_basis_independence),
        p("spectral", "inner_product_axioms", 1e-10, ALL, inner_product_axioms),
        p("spectral", "inner_positive_definite", 1e-9, ALL, inner_positive_definite),
        p("spectral", "dyad_orthonormality", 1e-10, 8, dyad_orthonormality),
        p("spectral", "cauchy_schwarz", 1e-12, ALL, cauchy_schwarz),
        p("spectral", "spectral_reconstruction", 1e-9, ALL, spectral_reconstruction),
        p("spectral", "dyad_eigenvector_equations", 1e-9, ALL, dyad_eigenvector_equations),
        p("spectral", "spectrum_conjugation_invariance", 1e-8, ALL, spectrum_conjugation_invariance),
        p("spectral", "eigenvector_orthogonality", 1e-10, ALL, eigenvector_orthogonality),
        p("spectral", "bilateral_eigenspace_dimension", 0.0, ALL, bilateral_eigenspace_dimension),
        p("spectral", "function_eigenvalues", 1e-9, ALL, function_eigenvalues),
        p("states", "state_vector_invariants", 1e-9, ALL, state_vector_invariants),
        p("states", "state_vector_projectors", 1e-10, ALL, state_vector_projectors),
        p("states", "characterization_round_trip", 1e-9, ALL, characterization_round_trip),
        p("states", "k0_irrelevance", 1e-9, ALL, k0_irrelevance),
        p("states", "equivalence_closure", 1e-10, ALL, equivalence_closure),
        p("states", "left_action_expansion", 1e-10, ALL, left_action_expansion),
        p("states", "orthonormal_family_realization", 1e-9, ALL, orthonormal_family_realization),
        p("states", "superposition_theorem", 1e-9, ALL, superposition_theorem),
        p("states", "simultaneous_eigenstates", 1e-9, ALL, simultaneous_eigenstates),
        p("states", "wave_function_parseval", 1e-10, ALL, wave_function_parseval),
        p("states", "lemma_implication", 1e-8, ALL, lemma_implication),
        p("measurement", "consistency_identity", 1e-10, ALL, consistency_identity),
        p("measurement", "transition_doubly_stochastic", 1e-10, ALL, transition_doubly_stochastic),
        p("measurement", "transition_transpose_symmetry", 1e-12, ALL, transition_transpose_symmetry),
        p("measurement", "project_density_idempotent", 1e-10, ALL, project_density_idempotent),
        p("measurement", "expectation_linearity", 1e-12, ALL, expectation_linearity),
        p("measurement", "expectation_conjugation", 1e-12, ALL, expectation_conjugation),
        p("measurement", "order_preservation", 1e-12, ALL, order_preservation),
        p("measurement", "null_expectation_eigenbasis", 1e-10, ALL, null_expectation_eigenbasis),
        p("measurement", "deviation_mean_zero", 1e-10, ALL, deviation_mean_zero),
        p("measurement", "deviation_commutator", 1e-10, ALL, deviation_commutator),
        p("measurement", "uncertainty_relation", 1e-10, 8, uncertainty_relation),
        p("measurement", "matrix_element_component", 1e-10, ALL, matrix_element_component),
        p("measurement", "pure_state_expectation", 1e-10, ALL, pure_state_expectation),
        p("measurement", "born_normalization", 1e-10, ALL, born_normalization),
    ]
}

fn product_associativity(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let (p, q, s) = (random_pseudo(r, d), random_pseudo(r, d), random_pseudo(r, d));
    let e = dist(&p.mul(&q)?.mul(&s)?, &p.mul(&q.mul(&s)?)?)?;
    Ok(rel(e, norm(&p) * norm(&q) * norm(&s)))
}

fn product_distributivity(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let (p, q, s) = (random_pseudo(r, d), random_pseudo(r, d), random_pseudo(r, d));
    let left = dist(&p.mul(&q.add(&s)?)?, &p.mul(&q)?.add(&p.mul(&s)?)?)?;
    let right = dist(&q.add(&s)?.mul(&p)?, &q.mul(&p)?.add(&s.mul(&p)?)?)?;
    Ok(rel(left.max(right), norm(&p) * (norm(&q) + norm(&s))))
}

fn dagger_anti_automorphism(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let (p, q) = (random_pseudo(r, d), random_pseudo(r, d));
    let involution = dist(&p.dagger().dagger(), &p)?;
    let anti = dist(&p.mul(&q)?.dagger(), &q.dagger().mul(&p.dagger())?)?;
    Ok(involution.max(rel(anti, norm(&p) * norm(&q))))
}

fn real_imag_recombination(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let z = random_pseudo(r, d);
    let (re, im) = z.real_imag_parts();
    let back = re.as_pseudo().add(&im.as_pseudo().scale(Complex64::new(0.0, 1.0)))?;
    let worst = back.sub(&z)?.max_abs();
    Ok(worst.max(re.as_pseudo().hermitian_deviation()).max(im.as_pseudo().hermitian_deviation()))
}

fn commutator_trace(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let (x, y) = (random_pseudo(r, d), random_pseudo(r, d));
    Ok(rel(trace(&x.commutator(&y)?).norm(), norm(&x) * norm(&y)))
}

fn component_reconstruction(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let p = random_pseudo(r, d);
    let basis = DyadBasis::new(random_basis(r, d));
    let back = reconstruct(&components_in(&p, &basis)?, &basis)?;
    Ok(rel(dist(&back, &p)?, norm(&p)))
}

fn projector_exclusivity_closure(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let basis = random_basis(r, d);
    let ps = basis.projectors();
    let mut worst = 0.0f64;
    let mut sum = PseudoObservable::zeros(d);
    for (j, pj) in ps.iter().enumerate() {
        sum = sum.add(pj.as_pseudo())?;
        worst = worst.max((pj.trace() - 1.0).abs());
        for (k, pk) in ps.iter().enumerate() {
            let target = if j == k { pj.as_pseudo().clone() } else { PseudoObservable::zeros(d) };
            worst = worst.max(dist(&pj.as_pseudo().mul(pk.as_pseudo())?, &target)?);
        }
    }
    Ok(worst.max(dist(&sum, &PseudoObservable::identity(d))?))
}

fn dyad_products(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let basis = DyadBasis::new(random_basis(r, d));
    let dyads: Vec<Vec<PseudoObservable>> = (0..d)
        .map(|j| (0..d).map(|k| basis.dyad(j, k)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let zero = PseudoObservable::zeros(d);
    let mut worst = 0.0f64;
    for j in 0..d {
        for k in 0..d {
            for k2 in 0..d {
                for l in 0..d {
                    let target = if k == k2 { &dyads[j][l] } else { &zero };
                    worst = worst.max(dist(&dyads[j][k].mul(&dyads[k2][l])?, target)?);
                }
            }
        }
    }
    Ok(worst)
}

fn conjugation_closure(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let basis = random_basis(r, d);
    let image = basis.conjugated(&haar_unitary(r, d), tol().unit)?;
    make_basis(&image.vectors(), 1e-10)?;
    Ok(image.orthonormality_deviation().max(image.closure_deviation()))
}

fn basis_change_composition(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let a = DyadBasis::new(random_basis(r, d));
    let b = DyadBasis::new(random_basis(r, d));
    let c3 = DyadBasis::new(random_basis(r, d));
    let composed = basis_change(&a, &b)?.then(&basis_change(&b, &c3)?)?;
    let direct = basis_change(&a, &c3)?;
    Ok(dist(composed.omega(), direct.omega())?
        .max(composed.omega().unitary_deviation())
        .max(composed.dyad_deviation()))
}

fn compatible_family_reconstruction(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let n = r.random_range(1..=3);
    let (family, _) = random_commuting_family(r, d, n);
    let compat = complete_compatible_basis(&family, &tol())?;
    let projectors = compat.basis.projectors();
    let mut worst = 0.0f64;
    for (a, o) in family.iter().enumerate() {
        let mut rec = PseudoObservable::zeros(d);
        for (j, p) in projectors.iter().enumerate() {
            rec = rec.add(&p.as_pseudo().scale(c(compat.labels[j][a])))?;
        }
        worst = worst.max(dist(&rec, o.as_pseudo())?);
    }
    Ok(worst)
}

fn trace_linearity(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let (p, q) = (random_pseudo(r, d), random_pseudo(r, d));
    let g = Complex64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
    let e = (trace(&p.add(&q.scale(g))?) - trace(&p) - g * trace(&q)).norm();
    Ok(rel(e, norm(&p) + norm(&q)))
}

fn trace_cyclicity(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let (p, q) = (random_pseudo(r, d), random_pseudo(r, d));
    Ok(rel((trace(&p.mul(&q)?) - trace(&q.mul(&p)?)).norm(), norm(&p) * norm(&q)))
}

fn trace_dagger_conjugate(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let z = random_pseudo(r, d);
    Ok((trace(&z.dagger()) - trace(&z).conj()).norm())
}

fn trace_basis_independence(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let p = random_pseudo(r, d);
    let a = DyadBasis::new(random_basis(r, d));
    let b = DyadBasis::new(random_basis(r, d));
    let mut sa = Complex64::new(0.0, 0.0);
    let mut sb = Complex64::new(0.0, 0.0);
    for j in 0..d {
        sa += component(&p, j, j, &a)?;
        sb += component(&p, j, j, &b)?;
    }
    Ok(rel((sa - sb).norm().max((sa - trace(&p)).norm()), norm(&p)))
}

fn inner_product_axioms(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let (x, y, w) = (random_pseudo(r, d), random_pseudo(r, d), random_pseudo(r, d));
    let a = Complex64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
    let xy = inner(&x, &y)?;
    let antilinear = (inner(&x.scale(a), &y)? - a.conj() * xy).norm();
    let linear = (inner(&x, &y.add(&w.scale(a))?)? - xy - a * inner(&x, &w)?).norm();
    let symmetric = (xy - inner(&y, &x)?.conj()).norm();
    let xx = inner(&x, &x)?;
    let positive = xx.im.abs() + (-xx.re).max(0.0) + (xx.re.sqrt() - norm(&x)).abs();
    let transposed = (xy - inner(&y.dagger(), &x.dagger())?).norm();
    let adjoint = (inner(&x, &y.mul(&w)?)? - inner(&y.dagger().mul(&x)?, &w)?).norm();
    let scale = (1.0 + a.norm()) * norm(&x) * (norm(&y) + norm(&w)) * (1.0 + norm(&w));
    Ok(rel(antilinear.max(linear).max(symmetric).max(positive).max(transposed).max(adjoint), scale))
}

fn inner_positive_definite(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let p = random_pseudo(r, d);
    let x = if r.random_bool(0.5) { p.sub(&p)? } else { p };
    let n = norm(&x);
    Ok(if n == 0.0 { x.max_abs() } else { (n * n - inner(&x, &x)?.re).abs() / (n * n) })
}

fn dyad_orthonormality(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let basis = DyadBasis::new(random_basis(r, d));
    let dyads: Vec<PseudoObservable> = (0..d * d).map(|i| basis.dyad(i / d, i % d)).collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (a, ga) in dyads.iter().enumerate() {
        for (b, gb) in dyads.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((inner(ga, gb)? - c(target)).norm());
        }
    }
    Ok(worst)
}

fn cauchy_schwarz(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let (x, y) = (random_pseudo(r, d), random_pseudo(r, d));
    let y = if r.random_bool(0.25) { x.scale(Complex64::new(0.3, -1.1)) } else { y };
    let bound = norm(&x) * norm(&y);
    Ok(rel((inner(&x, &y)?.norm() - bound).max(0.0), bound))
}

fn spectral_reconstruction(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let o = random_hermitian(r, d);
    dist(&decompose(&o, &tol())?.reconstruct(), o.as_pseudo())
}

fn dyad_eigenvector_equations(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let o = random_hermitian(r, d);
    let s = decompose(&o, &tol())?;
    let basis = DyadBasis::new(s.basis.clone());
    let mut worst = 0.0f64;
    for j in 0..d {
        for k in 0..d {
            let g = basis.dyad(j, k)?;
            worst = worst.max(dist(&o.as_pseudo().mul(&g)?, &g.scale(c(s.coefficients[j])))?);
            worst = worst.max(dist(&g.mul(o.as_pseudo())?, &g.scale(c(s.coefficients[k])))?);
        }
    }
    Ok(worst)
}

fn spectrum_conjugation_invariance(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let o = random_hermitian(r, d);
    let u = haar_unitary(r, d);
    let rotated = Observable::new(u.mul(o.as_pseudo())?.mul(&u.dagger())?)?;
    let a = decompose(&o, &tol())?.coefficients;
    let b = decompose(&rotated, &tol())?.coefficients;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

fn eigenvector_orthogonality(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let o = random_hermitian(r, d);
    let s = decompose(&o, &tol())?;
    let basis = DyadBasis::new(s.basis.clone());
    let mut worst = 0.0f64;
    for j in 0..d {
        for k in 0..d {
            if (s.coefficients[j] - s.coefficients[k]).abs() > tol().deg {
                worst = worst.max(inner(&basis.dyad(j, 0)?, &basis.dyad(k, 0)?)?.norm());
            }
        }
    }
    Ok(worst)
}

fn bilateral_eigenspace_dimension(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let levels = r.random_range(1..=d.min(4));
    let values: Vec<f64> = (0..d).map(|_| r.random_range(0..levels) as f64 * 1.5 - 2.0).collect();
    let u = haar_unitary(r, d);
    let o = Observable::new(u.mul(&PseudoObservable::real_diagonal(&values)?)?.mul(&u.dagger())?)?;
    let s = decompose(&o, &tol())?;
    let mut worst = 0.0f64;
    for &(v1, m1) in &s.distinct {
        let truth1 = values.iter().filter(|&&x| (x - v1).abs() < 1e-6).count();
        for &(v2, m2) in &s.distinct {
            let space = s.bilateral_eigenspace(v1, v2)?;
            let truth2 = values.iter().filter(|&&x| (x - v2).abs() < 1e-6).count();
            let gaps = [space.dimension.abs_diff(m1 * m2), m1.abs_diff(truth1), m2.abs_diff(truth2), space.dyad_indices.len().abs_diff(space.dimension)];
            worst = worst.max(*gaps.iter().max().unwrap() as f64);
        }
    }
    Ok(worst)
}

fn function_eigenvalues(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let o = random_hermitian(r, d);
    let f = |x: f64| Complex64::new(x.cos(), x * x);
    let fo = poalg::apply_function(&o, f, &tol())?;
    let s = decompose(&o, &tol())?;
    let basis = DyadBasis::new(s.basis.clone());
    let mut worst = 0.0f64;
    for j in 0..d {
        let psi = basis.dyad(j, 0)?;
        worst = worst.max(dist(&fo.mul(&psi)?, &psi.scale(f(s.coefficients[j])))?);
    }
    Ok(rel(worst, norm(&fo)))
}

fn state_vector_invariants(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    Ok(set
        .characterization_deviation()
        .max(set.orthonormality_deviation())
        .max(set.factor().unitary_deviation()))
}

fn state_vector_projectors(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let j0 = set.right_projector(0)?;
    let mut worst = (j0.trace() - 1.0).abs();
    for j in 0..d {
        let psi = set.member(j)?;
        let jj = set.right_projector(j)?;
        worst = worst.max(dist(jj.as_pseudo(), j0.as_pseudo())?);
        worst = worst.max(dist(&psi.mul(jj.as_pseudo())?, &psi)?);
        worst = worst.max(dist(&set.basis().projector(j)?.as_pseudo().mul(&psi)?, &psi)?);
    }
    Ok(worst)
}

fn characterization_round_trip(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let phase = Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU));
    let family: Vec<PseudoObservable> = set.members().iter().map(|p| p.scale(phase)).collect();
    let found = verify_characterization(&family, set.basis(), &tol())?;
    let Some((k0, k)) = found.factorization.filter(|_| found.holds) else {
        return Ok(f64::INFINITY);
    };
    let rebuilt = make_state_vectors(set.basis(), k0, &k, &tol())?;
    let mut worst = found.deviation;
    for (a, b) in rebuilt.members().iter().zip(&family) {
        worst = worst.max(dist(a, b)?);
    }
    let mut broken = family.clone();
    broken[0] = broken[0].scale(c(2.0));
    if verify_characterization(&broken, set.basis(), &tol())?.holds {
        return Ok(f64::INFINITY);
    }
    Ok(worst)
}

fn k0_irrelevance(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let k1 = r.random_range(0..d);
    let k0 = set.k0();
    let basis = set.basis();
    let mut swap = PseudoObservable::zeros(d);
    for l in 0..d {
        let target = if l == k0 { k1 } else if l == k1 { k0 } else { l };
        swap = swap.add(&basis.dyad(target, l)?)?;
    }
    let moved = make_state_vectors(basis, k1, &swap.mul(set.factor())?, &tol())?;
    let mut worst = 0.0f64;
    for (a, b) in moved.members().iter().zip(set.members()) {
        worst = worst.max(dist(a, &b)?);
    }
    Ok(worst)
}

fn equivalence_closure(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let (t1, t2) = (random_phases(r, d), random_phases(r, d));
    let (y1, y2) = (haar_unitary(r, d), haar_unitary(r, d));
    let once = equivalent_set(&set, &t1, &y1, &tol())?;
    let twice = equivalent_set(&once, &t2, &y2, &tol())?;
    let summed: Vec<f64> = t1.iter().zip(&t2).map(|(a, b)| a + b).collect();
    let direct = equivalent_set(&set, &summed, &y1.mul(&y2)?, &tol())?;
    let inverse: Vec<f64> = t1.iter().map(|t| -t).collect();
    let back = equivalent_set(&once, &inverse, &y1.dagger(), &tol())?;
    let mut worst = twice.characterization_deviation().max(once.orthonormality_deviation());
    for (j, &theta) in t1.iter().enumerate() {
        worst = worst.max(dist(&twice.member(j)?, &direct.member(j)?)?);
        worst = worst.max(dist(&back.member(j)?, &set.member(j)?)?);
        let expected = set.member(j)?.scale(Complex64::from_polar(1.0, theta)).mul(&y1)?;
        worst = worst.max(dist(&once.member(j)?, &expected)?);
    }
    Ok(worst)
}

fn left_action_expansion(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let p = random_pseudo(r, d);
    let j = r.random_range(0..d);
    let coefficients = left_action(&p, &set, j)?;
    Ok(rel(dist(&set.combine(&coefficients)?, &p.mul(&set.member(j)?)?)?, norm(&p)))
}

fn orthonormal_family_realization(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let u = haar_unitary(r, d);
    let phis: Vec<PseudoObservable> = (0..d)
        .map(|j| set.combine(&u.components().column(j).iter().copied().collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let (realized, change) = orthonormal_basis_to_eigenstate_set(&phis, &set, &tol())?;
    let omega = change.omega();
    let mut worst = omega.unitary_deviation().max(realized.characterization_deviation());
    for j in 0..d {
        worst = worst.max(dist(&realized.member(j)?, &phis[j])?);
        for k in 0..d {
            let lhs = phis[j].mul(&phis[k].dagger())?;
            worst = worst.max(dist(&lhs, &change.transform(&set.basis().dyad(j, k)?)?)?);
        }
    }
    Ok(worst)
}

fn superposition_theorem(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let phi = set.combine(&unit_coefficients(r, d))?;
    let (family, realized, change) = eigenstate_set_through(&phi, &set, &tol())?;
    let check = verify_characterization(&family, realized.basis(), &tol())?;
    if !check.holds || check.factorization.is_none() {
        return Ok(f64::INFINITY);
    }
    Ok(check.deviation.max(dist(&family[0], &phi)?).max(change.omega().unitary_deviation()))
}

fn simultaneous_eigenstates(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let n = r.random_range(1..=3);
    let (family, _) = random_commuting_family(r, d, n);
    let compat = complete_compatible_basis(&family, &tol())?;
    let set = make_state_vectors(&DyadBasis::new(compat.basis.clone()), 0, &haar_unitary(r, d), &tol())?;
    let mut worst = 0.0f64;
    for (j, psi) in set.members().iter().enumerate() {
        for (a, o) in family.iter().enumerate() {
            worst = worst.max(dist(&o.as_pseudo().mul(psi)?, &psi.scale(c(compat.labels[j][a])))?);
        }
    }
    Ok(worst)
}

fn wave_function_parseval(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let labels: Vec<Vec<f64>> = (0..d).map(|j| vec![j as f64]).collect();
    let a = set.combine(&unit_coefficients(r, d))?;
    let b = set.combine(&unit_coefficients(r, d))?;
    let wa = wave_function(&a, &set, &labels, &tol())?;
    let wb = wave_function(&b, &set, &labels, &tol())?;
    let parseval = (wa.inner(&wb)? - inner(&a, &b)?).norm();
    let normalization = (wa.probabilities().iter().sum::<f64>() - 1.0).abs();
    Ok(parseval.max(normalization).max((wa.norm() - norm(&a)).abs()))
}

fn lemma_implication(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let u = unit_vector(r, d);
    let i = Projector::from_vector(&u)?;
    let j = match r.random_range(0..4) {
        0 => i.clone(),
        1 => Projector::from_vector(&(&u * Complex64::from_polar(1.0, r.random_range(0.0..6.0))))?,
        _ => Projector::from_vector(&unit_vector(r, d))?,
    };
    if lemma_elementary_equality_with(&i, &j, tol().trace, tol().lemma, f64::INFINITY)? {
        dist(i.as_pseudo(), j.as_pseudo())
    } else {
        Ok(0.0)
    }
}

fn consistency_identity(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let dens = density(r, d)?;
    let b = random_hermitian(r, d);
    let bb = if r.random_bool(0.5) { decompose(&b, &tol())?.basis } else { random_basis(r, d) };
    let routes = conditional_expectation_routes(&b, &dens, &bb)?;
    let spectral_basis = decompose(&b, &tol())?.basis;
    let own = conditional_expectation_routes(&b, &dens, &spectral_basis)?;
    Ok(rel(own.max_discrepancy().max((routes.projected_observable - routes.direct).abs()), norm(b.as_pseudo())))
}

fn transition_doubly_stochastic(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let t = transition_matrix(&random_basis(r, d), &random_basis(r, d))?;
    let range = t
        .rows()
        .iter()
        .flatten()
        .map(|&p| (-p).max(p - 1.0).max(0.0))
        .fold(0.0, f64::max);
    Ok(t.stochastic_deviation().max(range))
}

fn transition_transpose_symmetry(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let (a, b) = (random_basis(r, d), random_basis(r, d));
    let ab = transition_matrix(&a, &b)?;
    let ba = transition_matrix(&b, &a)?;
    let mut worst = 0.0f64;
    for j in 0..d {
        for k in 0..d {
            worst = worst.max((ab.entry(j, k) - ba.entry(k, j)).abs());
        }
    }
    Ok(worst)
}

fn project_density_idempotent(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let dens = density(r, d)?;
    let target = random_basis(r, d);
    let once = project_density(&dens, &target, &tol())?;
    let twice = project_density(&once, &target, &tol())?;
    make_density(&target, once.probabilities(), &tol())?;
    Ok(once
        .probabilities()
        .iter()
        .zip(twice.probabilities())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

fn expectation_linearity(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let dens = density(r, d)?;
    let (z1, z2) = (random_pseudo(r, d), random_pseudo(r, d));
    let g = Complex64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
    let lhs = expectation(&z1.add(&z2.scale(g))?, &dens)?;
    let rhs = expectation(&z1, &dens)? + g * expectation(&z2, &dens)?;
    let constant = (expectation(&PseudoObservable::constant(d, g), &dens)? - g).norm();
    Ok(rel((lhs - rhs).norm(), norm(&z1) + g.norm() * norm(&z2)).max(constant))
}

fn expectation_conjugation(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let dens = density(r, d)?;
    let z = random_pseudo(r, d);
    Ok(rel((expectation(&z.dagger(), &dens)? - expectation(&z, &dens)?.conj()).norm(), norm(&z)))
}

fn order_preservation(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let dens = density(r, d)?;
    let o = random_hermitian(r, d);
    let raised = o.add(&random_psd(r, d))?;
    if !is_leq(&o, &raised, &tol())? {
        return Ok(f64::INFINITY);
    }
    Ok((expectation_real(&o, &dens)? - expectation_real(&raised, &dens)?).max(0.0))
}

fn null_expectation_eigenbasis(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let o = random_hermitian(r, d);
    let s = decompose(&o, &tol())?;
    let mut worst = 0.0f64;
    for (j, &oj) in s.coefficients.iter().enumerate() {
        let pure = DensityObservable::pure(&s.basis, j)?;
        worst = worst.max((expectation_real(&o, &pure)? - oj).abs());
    }
    Ok(worst)
}

fn deviation_mean_zero(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let dens = density(r, d)?;
    let a = random_hermitian(r, d);
    let disp = deviation_variance(&a, &dens)?;
    let direct: f64 = {
        let e2 = expectation(&a.as_pseudo().mul(a.as_pseudo())?, &dens)?.re;
        e2 - disp.mean * disp.mean
    };
    Ok(expectation_real(&disp.deviation, &dens)?.abs().max(rel((disp.variance - direct.max(0.0)).abs(), direct.abs())))
}

fn deviation_commutator(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let dens = density(r, d)?;
    let (a, b) = (random_hermitian(r, d), random_hermitian(r, d));
    let check = uncertainty_check(&a, &b, &dens, 1e-10)?;
    Ok(rel(check.commutator_residual, norm(a.as_pseudo()) * norm(b.as_pseudo())))
}

fn uncertainty_relation(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let dens = density(r, d)?;
    let check = uncertainty_check(&random_hermitian(r, d), &random_hermitian(r, d), &dens, 1e-10)?;
    Ok((check.rhs - check.lhs).max(0.0))
}

fn matrix_element_component(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let p = random_pseudo(r, d);
    let mut worst = 0.0f64;
    for j in 0..d {
        for k in 0..d {
            worst = worst.max((matrix_element(&p, &set, j, k)? - component(&p, j, k, set.basis())?).norm());
        }
    }
    Ok(rel(worst, norm(&p)))
}

fn pure_state_expectation(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let set = random_set(r, d)?;
    let probabilities = random_distribution(r, d);
    let dens = make_density(set.basis().source(), &probabilities, &tol())?;
    let o = random_hermitian(r, d);
    let mut via_states = 0.0;
    for (j, p) in probabilities.iter().enumerate() {
        via_states += p * matrix_element(o.as_pseudo(), &set, j, j)?.re;
    }
    Ok(rel((via_states - expectation_real(&o, &dens)?).abs(), norm(o.as_pseudo())))
}

fn born_normalization(r: &mut ChaCha8Rng, d: usize) -> Result<f64> {
    let n = r.random_range(1..=2);
    let (family, _) = random_commuting_family(r, d, n);
    let compat = complete_compatible_basis(&family, &tol())?;
    let set = make_state_vectors(&DyadBasis::new(compat.basis), 0, &haar_unitary(r, d), &tol())?;
    let labeled = LabeledEigenstates::new(set.clone(), family.clone(), &tol())?;
    let phi = set.combine(&unit_coefficients(r, d))?;
    let dist_r = outcome_distribution(&phi, &labeled, &family[0], &tol())?;
    let mut worst = (dist_r.iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs();
    for j in 0..d {
        let outcome = labeled.labels()[j][0];
        let grouped: f64 = set
            .members()
            .iter()
            .enumerate()
            .filter(|(k, _)| (labeled.labels()[*k][0] - outcome).abs() <= 1e-8 * outcome.abs().max(1.0))
            .map(|(_, p)| inner(&phi, p).map(|z| z.norm_sqr()))
            .sum::<Result<f64>>()?;
        worst = worst.max((born_rule(&phi, &labeled, &family[0], outcome, &tol())? - grouped).abs());
    }
    Ok(worst)
}
