//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use poalg::random::{
    derive_seed, haar_unitary, random_basis, random_distribution, random_hermitian, random_phases, random_pseudo,
    rng, unit_vector,
};
use poalg::*;
use poalg_cli::report::{render, section};
use poalg_cli::run::run_scenario;
use poalg_cli::scenario::{Initial, InitialBasis, Scenario, Step};
use rand::Rng;

const ROOT: u64 = 20240611;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn crate_dir() -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn spectral_suite() -> Outcome {
    let start = Instant::now();
    let mut worst_rec = 0.0f64;
    let mut worst_eq = 0.0f64;
    for (di, d) in [2usize, 4, 8, 16].into_iter().enumerate() {
        let mut r = rng(derive_seed(ROOT, 100 + di as u64));
        for _ in 0..500 {
            let o = random_hermitian(&mut r, d);
            let s = decompose(&o, &tol()).unwrap();
            let mut rec = PseudoObservable::zeros(d);
            for (j, p) in s.basis.projectors().iter().enumerate() {
                rec = rec.add(&p.as_pseudo().scale(c(s.coefficients[j], 0.0))).unwrap();
            }
            worst_rec = worst_rec.max(rec.distance(o.as_pseudo()).unwrap());
            let dyads = DyadBasis::new(s.basis.clone());
            for j in 0..d {
                for k in 0..d {
                    let g = dyads.dyad(j, k).unwrap();
                    let right = o.as_pseudo().mul(&g).unwrap().distance(&g.scale(c(s.coefficients[j], 0.0))).unwrap();
                    let left = g.mul(o.as_pseudo()).unwrap().distance(&g.scale(c(s.coefficients[k], 0.0))).unwrap();
                    worst_eq = worst_eq.max(right).max(left);
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_rec <= 1e-9 && worst_eq <= 1e-9 && secs <= 60.0,
        format!("2000 matrices, reconstruction {worst_rec:.2e}, dyad eigen equations {worst_eq:.2e}, {secs:.1} s"),
    )
}

fn trace_suite() -> Outcome {
    let mut r = rng(derive_seed(ROOT, 2));
    let mut worst = [0.0f64; 5];
    for t in 0..1000 {
        let d = 2 + t % 11;
        let (p, q) = (random_pseudo(&mut r, d), random_pseudo(&mut r, d));
        let g = c(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let scale = (norm(&p) * norm(&q)).max(norm(&p) + norm(&q)).max(1.0);
        let errors = [
            (trace(&p.add(&q.scale(g)).unwrap()) - trace(&p) - g * trace(&q)).norm() / scale,
            (trace(&p.mul(&q).unwrap()) - trace(&q.mul(&p).unwrap())).norm() / scale,
            trace(&p.commutator(&q).unwrap()).norm() / scale,
            (trace(&p.dagger()) - trace(&p).conj()).norm(),
            {
                let basis = DyadBasis::new(random_basis(&mut r, d));
                let sum: Complex64 = (0..d).map(|j| component(&p, j, j, &basis).unwrap()).sum();
                (sum - trace(&p)).norm() / norm(&p).max(1.0)
            },
        ];
        for (w, e) in worst.iter_mut().zip(errors) {
            *w = w.max(e);
        }
    }
    let max = worst.iter().cloned().fold(0.0, f64::max);
    outcome(
        max <= 1e-10,
        format!(
            "1000 instances, linearity {:.2e}, cyclicity {:.2e}, commutator {:.2e}, dagger {:.2e}, basis change {:.2e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn inner_product_suite() -> Outcome {
    let mut r = rng(derive_seed(ROOT, 3));
    let mut worst = 0.0f64;
    let mut worst_dyad = 0.0f64;
    let mut worst_null = 0.0f64;
    for t in 0..1000 {
        let d = 2 + t % 11;
        let (x, y, w) = (random_pseudo(&mut r, d), random_pseudo(&mut r, d), random_pseudo(&mut r, d));
        let a = c(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let xy = inner(&x, &y).unwrap();
        let xx = inner(&x, &x).unwrap();
        let errors = [
            (inner(&x.scale(a), &y).unwrap() - a.conj() * xy).norm(),
            (inner(&x, &y.add(&w.scale(a)).unwrap()).unwrap() - xy - a * inner(&x, &w).unwrap()).norm(),
            (xy - inner(&y, &x).unwrap().conj()).norm(),
            xx.im.abs() + (-xx.re).max(0.0),
            (xy - inner(&y.dagger(), &x.dagger()).unwrap()).norm(),
            (inner(&x, &y.mul(&w).unwrap()).unwrap() - inner(&y.dagger().mul(&x).unwrap(), &w).unwrap()).norm(),
        ];
        let scale = (1.0 + a.norm()) * norm(&x) * (norm(&y) + norm(&w)) * (1.0 + norm(&w));
        worst = worst.max(errors.iter().cloned().fold(0.0, f64::max) / scale.max(1.0));

        let zero = if t % 2 == 0 { x.sub(&x).unwrap() } else { PseudoObservable::zeros(d).scale(a) };
        if norm(&zero) == 0.0 {
            worst_null = worst_null.max(zero.max_abs());
        } else {
            worst_null = f64::INFINITY;
        }
        if norm(&x) == 0.0 {
            worst_null = worst_null.max(x.max_abs());
        }

        if d <= 6 {
            let basis = DyadBasis::new(random_basis(&mut r, d));
            let dyads: Vec<PseudoObservable> = (0..d * d).map(|i| basis.dyad(i / d, i % d).unwrap()).collect();
            for (i, gi) in dyads.iter().enumerate() {
                for (j, gj) in dyads.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst_dyad = worst_dyad.max((inner(gi, gj).unwrap() - c(target, 0.0)).norm());
                }
            }
        }
    }
    outcome(
        worst <= 1e-10 && worst_dyad <= 1e-10 && worst_null <= 1e-9,
        format!("1000 instances, axioms/transposition/adjoint {worst:.2e}, dyad orthonormality {worst_dyad:.2e}, null norm max entry {worst_null:.2e}"),
    )
}

fn state_vector_suite() -> Outcome {
    let mut r = rng(derive_seed(ROOT, 4));
    let mut worst_inv = 0.0f64;
    let mut worst_round = 0.0f64;
    let mut worst_k0 = 0.0f64;
    let mut worst_eq = 0.0f64;
    let mut round_trips = 0;
    for t in 0..200 {
        let d = 2 + t % 7;
        let basis = DyadBasis::new(random_basis(&mut r, d));
        let k0 = r.random_range(0..d);
        let k = haar_unitary(&mut r, d);
        let set = make_state_vectors(&basis, k0, &k, &tol()).unwrap();
        worst_inv = worst_inv
            .max(set.characterization_deviation())
            .max(set.orthonormality_deviation())
            .max(set.factor().unitary_deviation());
        for j in 0..d {
            let jp = set.right_projector(j).unwrap();
            worst_inv = worst_inv
                .max((jp.trace() - 1.0).abs())
                .max(jp.as_pseudo().distance(set.right_projector(0).unwrap().as_pseudo()).unwrap());
        }

        let found = verify_characterization(&set.members(), &basis, &tol()).unwrap();
        if let (true, Some((k0r, kr))) = (found.holds, found.factorization) {
            let rebuilt = make_state_vectors(&basis, k0r, &kr, &tol()).unwrap();
            for (a, b) in rebuilt.members().iter().zip(set.members()) {
                worst_round = worst_round.max(a.distance(&b).unwrap());
            }
            round_trips += 1;
        }

        let k1 = r.random_range(0..d);
        let mut swap = PseudoObservable::zeros(d);
        for l in 0..d {
            let target = if l == k0 { k1 } else if l == k1 { k0 } else { l };
            swap = swap.add(&basis.dyad(target, l).unwrap()).unwrap();
        }
        let moved = make_state_vectors(&basis, k1, &swap.mul(&k).unwrap(), &tol()).unwrap();
        for (a, b) in moved.members().iter().zip(set.members()) {
            worst_k0 = worst_k0.max(a.distance(&b).unwrap());
        }

        let (t1, t2) = (random_phases(&mut r, d), random_phases(&mut r, d));
        let (y1, y2) = (haar_unitary(&mut r, d), haar_unitary(&mut r, d));
        let once = equivalent_set(&set, &t1, &y1, &tol()).unwrap();
        let twice = equivalent_set(&once, &t2, &y2, &tol()).unwrap();
        let summed: Vec<f64> = t1.iter().zip(&t2).map(|(a, b)| a + b).collect();
        let direct = equivalent_set(&set, &summed, &y1.mul(&y2).unwrap(), &tol()).unwrap();
        worst_eq = worst_eq.max(twice.characterization_deviation());
        for (a, b) in twice.members().iter().zip(direct.members()) {
            worst_eq = worst_eq.max(a.distance(&b).unwrap());
        }
    }
    let worst = worst_inv.max(worst_round).max(worst_k0).max(worst_eq);
    outcome(
        worst <= 1e-9 && round_trips == 200,
        format!(
            "200 sets, invariants {worst_inv:.2e}, round trips {round_trips}/200 ({worst_round:.2e}), k0 irrelevance {worst_k0:.2e}, equivalence closure {worst_eq:.2e}"
        ),
    )
}

fn eigenstate_space_suite() -> Outcome {
    let mut r = rng(derive_seed(ROOT, 5));
    let mut worst_omega = 0.0f64;
    let mut worst_rel = 0.0f64;
    let mut worst_sup = 0.0f64;
    for t in 0..200 {
        let d = 2 + t % 7;
        let basis = DyadBasis::new(random_basis(&mut r, d));
        let set = make_state_vectors(&basis, r.random_range(0..d), &haar_unitary(&mut r, d), &tol()).unwrap();

        let u = haar_unitary(&mut r, d);
        let phis: Vec<PseudoObservable> = (0..d)
            .map(|j| set.combine(&u.components().column(j).iter().copied().collect::<Vec<_>>()).unwrap())
            .collect();
        let (realized, change) = orthonormal_basis_to_eigenstate_set(&phis, &set, &tol()).unwrap();
        worst_omega = worst_omega.max(change.omega().unitary_deviation());
        for j in 0..d {
            worst_rel = worst_rel.max(realized.member(j).unwrap().distance(&phis[j]).unwrap());
            for k in 0..d {
                let lhs = phis[j].mul(&phis[k].dagger()).unwrap();
                let rhs = change.transform(&basis.dyad(j, k).unwrap()).unwrap();
                worst_rel = worst_rel.max(lhs.distance(&rhs).unwrap());
            }
        }

        let coefficients: Vec<Complex64> = unit_vector(&mut r, d).iter().copied().collect();
        let phi = set.combine(&coefficients).unwrap();
        let (family, through, sup_change) = eigenstate_set_through(&phi, &set, &tol()).unwrap();
        let check = verify_characterization(&family, through.basis(), &tol()).unwrap();
        worst_sup = worst_sup
            .max(if check.holds { check.deviation } else { f64::INFINITY })
            .max(through.member(0).unwrap().distance(&phi).unwrap())
            .max(sup_change.omega().unitary_deviation());
    }
    outcome(
        worst_omega <= 1e-9 && worst_rel <= 1e-9 && worst_sup <= 1e-9,
        format!("200 families, Omega unitarity {worst_omega:.2e}, dyad relation {worst_rel:.2e}, superposition {worst_sup:.2e}"),
    )
}

fn measurement_suite() -> Outcome {
    let mut r = rng(derive_seed(ROOT, 6));
    let mut worst_cons = 0.0f64;
    let mut worst_stoch = 0.0f64;
    for t in 0..1000 {
        let d = 2 + t % 11;
        let dens = make_density(&random_basis(&mut r, d), &random_distribution(&mut r, d), &tol()).unwrap();
        let b = random_hermitian(&mut r, d);
        let b_basis = decompose(&b, &tol()).unwrap().basis;
        let routes = conditional_expectation_routes(&b, &dens, &b_basis).unwrap();
        worst_cons = worst_cons.max(routes.max_discrepancy() / norm(b.as_pseudo()).max(1.0));
        worst_stoch = worst_stoch.max(transition_matrix(dens.basis(), &b_basis).unwrap().stochastic_deviation());
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = ProjectorBasis::from_unitary(&PseudoObservable::from_real_rows(&[&[s, s], &[s, -s]]).unwrap(), 1e-12).unwrap();
    let t = transition_matrix(&ProjectorBasis::computational(2), &hadamard).unwrap();
    let worst_h = t.rows().iter().flatten().map(|p| (p - 0.5).abs()).fold(0.0, f64::max);
    outcome(
        worst_cons <= 1e-10 && worst_stoch <= 1e-10 && worst_h <= 1e-12,
        format!("1000 triples, consistency {worst_cons:.2e}, doubly stochastic {worst_stoch:.2e}, Hadamard entries {worst_h:.2e}"),
    )
}

fn uncertainty_suite() -> Outcome {
    let mut r = rng(derive_seed(ROOT, 7));
    let mut worst = 0.0f64;
    let mut violations = 0;
    for t in 0..10_000 {
        let d = 2 + t % 7;
        let dens = make_density(&random_basis(&mut r, d), &random_distribution(&mut r, d), &tol()).unwrap();
        let check = uncertainty_check(&random_hermitian(&mut r, d), &random_hermitian(&mut r, d), &dens, 1e-10).unwrap();
        worst = worst.max(check.rhs - check.lhs);
        if !check.holds || check.lhs < check.rhs - 1e-10 {
            violations += 1;
        }
    }
    let x = Observable::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    let y = Observable::new(PseudoObservable::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap()).unwrap();
    let z = Observable::real_diagonal(&[1.0, -1.0]).unwrap();
    let up = DensityObservable::pure(&ProjectorBasis::computational(2), 0).unwrap();
    let zx = uncertainty_check(&z, &x, &up, 1e-10).unwrap();
    let xy = uncertainty_check(&x, &y, &up, 1e-10).unwrap();
    let equal = zx.sigma_a.abs() <= 1e-12 && (zx.lhs - zx.rhs).abs() <= 1e-12 && (xy.lhs - xy.rhs).abs() <= 1e-12 && (xy.lhs - 1.0).abs() <= 1e-12;
    outcome(
        violations == 0 && equal,
        format!(
            "10000 triples, violations {violations}, worst rhs - lhs {worst:.2e}; Pauli Z,X: sigma_Z {:.1e}, {:.3} = {:.3}; Pauli X,Y: {:.3} = {:.3}",
            zx.sigma_a, zx.lhs, zx.rhs, xy.lhs, xy.rhs
        ),
    )
}

/// Completes a unit vector to an orthonormal list starting with it.
fn complete_from(w: &CVector, fill: &PseudoObservable) -> Vec<CVector> {
    let mut out = vec![w.clone()];
    for j in 0..w.len() {
        let mut v: CVector = fill.components().column(j).into_owned();
        for q in &out {
            let proj = q.dotc(&v);
            v -= q * proj;
        }
        if v.norm() > 1e-6 && out.len() < w.len() {
            let n = v.norm();
            out.push(v / c(n, 0.0));
        }
    }
    out
}

fn born_rule_suite() -> Outcome {
    let samples = 100_000u64;
    let mut worst_se = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut failures = 0;
    for t in 0..20u64 {
        let mut r = rng(derive_seed(ROOT, 800 + t));
        let d = if t % 2 == 0 { 2 } else { 3 };
        let u = haar_unitary(&mut r, d);
        let mut values: Vec<f64> = (0..d).map(|_| r.random_range(-2.0..2.0)).collect();
        if d == 3 && t % 4 == 1 {
            values[2] = values[0];
        }
        let conj = |diag: &[f64]| {
            Observable::new(u.mul(&PseudoObservable::real_diagonal(diag).unwrap()).unwrap().mul(&u.dagger()).unwrap()).unwrap()
        };
        let o_r = conj(&values);
        let o_s = conj(&(0..d).map(|j| j as f64).collect::<Vec<_>>());
        let family = vec![o_r.clone(), o_s.clone()];
        let compat = complete_compatible_basis(&family, &tol()).unwrap();
        let set = make_state_vectors(&DyadBasis::new(compat.basis.clone()), 0, &PseudoObservable::identity(d), &tol()).unwrap();
        let labeled = LabeledEigenstates::new(set, family.clone(), &tol()).unwrap();

        let w = unit_vector(&mut r, d);
        let v0 = compat.basis.vector(0).unwrap();
        let phi = PseudoObservable::outer(&w, &v0).unwrap();
        let analytic = outcome_distribution(&phi, &labeled, &o_r, &tol()).unwrap();
        let total: f64 = analytic.iter().map(|(_, p)| p).sum();
        worst_sum = worst_sum.max((total - 1.0).abs());

        let scenario = Scenario {
            dim: d,
            observables: BTreeMap::from([("R".to_string(), o_r.clone()), ("S".to_string(), o_s)]),
            initial: Initial {
                basis: InitialBasis::Vectors(complete_from(&w, &haar_unitary(&mut r, d))),
                probabilities: (0..d).map(|j| if j == 0 { 1.0 } else { 0.0 }).collect(),
            },
            steps: vec![Step {
                measure: vec!["R".into(), "S".into()],
            }],
            samples,
            seed: derive_seed(ROOT, 900 + t),
        };
        let report = run_scenario(&scenario).unwrap();
        let step = &report.steps[0];
        for &(value, p) in &analytic {
            let born = born_rule(&phi, &labeled, &o_r, value, &tol()).unwrap();
            let count: u64 = step
                .labels
                .iter()
                .zip(&step.empirical)
                .filter(|(l, _)| (l[0] - value).abs() <= 1e-8)
                .map(|(_, e)| e.count)
                .sum();
            let freq = count as f64 / samples as f64;
            let se = (born * (1.0 - born) / samples as f64).sqrt();
            let z = if se > 0.0 { (freq - born).abs() / se } else if (freq - born).abs() <= 1e-12 { 0.0 } else { f64::INFINITY };
            worst_se = worst_se.max(z);
            if z > 4.0 || (born - p).abs() > 1e-12 {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && worst_sum <= 1e-10,
        format!("20 scenarios at 100000 samples, worst deviation {worst_se:.2} SE, worst |sum - 1| {worst_sum:.2e}, failures {failures}"),
    )
}

fn lemma_fuzz() -> Outcome {
    let mut r = rng(derive_seed(ROOT, 9));
    let mut triggered = 0;
    let mut constructed = 0;
    let mut violations = 0;
    for t in 0..10_000 {
        let d = 2 + t % 7;
        let u = unit_vector(&mut r, d);
        let i = Projector::from_vector(&u).unwrap();
        let equal = t % 10 == 0;
        let j = if equal {
            constructed += 1;
            Projector::from_vector(&(&u * Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU)))).unwrap()
        } else {
            Projector::from_vector(&unit_vector(&mut r, d)).unwrap()
        };
        match lemma_elementary_equality_with(&i, &j, tol().trace, 1e-9, 1e-8) {
            Ok(true) => triggered += 1,
            Ok(false) => {}
            Err(_) => violations += 1,
        }
    }
    outcome(
        violations == 0,
        format!("10000 pairs, premise held on {triggered} ({constructed} constructed equal), violations {violations}"),
    )
}

fn cli_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_poalg");
    let verify = || Command::new(exe).args(["verify", "--seed", "42"]).output().expect("poalg runs");
    let (a, b) = (verify(), verify());
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let qubit = crate_dir().join("scenarios/qubit.toml");
    let run = Command::new(exe).arg("run").arg(&qubit).output().expect("poalg runs");
    let text = String::from_utf8_lossy(&run.stdout).into_owned();
    let expected = vec![
        "[step 1.analytic]",
        "index  probability        label",
        "0      0.500000000000     (1.000000000000)",
        "1      0.500000000000     (-1.000000000000)",
    ];
    let table_ok = section(&text, "[step 1.analytic]") == Some(expected);
    let in_process = {
        let scenario = poalg_cli::scenario::load_scenario(&qubit).unwrap();
        render(&run_scenario(&scenario).unwrap()) == text
    };
    outcome(
        identical && a.status.success() && run.status.success() && table_ok && in_process,
        format!(
            "verify --seed 42 byte-identical: {identical} ({} bytes, exit {}); qubit Hadamard table exact: {table_ok}",
            a.stdout.len(),
            a.status.code().unwrap_or(-1)
        ),
    )
}

fn main() {
    let criteria: Vec<(usize, fn() -> Outcome)> = vec![
        (1, spectral_suite),
        (2, trace_suite),
        (3, inner_product_suite),
        (4, state_vector_suite),
        (5, eigenstate_space_suite),
        (6, measurement_suite),
        (7, uncertainty_suite),
        (8, born_rule_suite),
        (9, lemma_fuzz),
        (10, cli_determinism),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let result = run();
        let status = if result.passed { "PASS" } else { "FAIL" };
        println!("criterion {n}: {status} {}", result.detail);
        if !result.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
