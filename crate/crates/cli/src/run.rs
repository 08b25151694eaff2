//! Sequential measurement of a scenario: chained density projections,
//! per-step statistics and Monte Carlo trajectory sampling.

use poalg::random::derive_seed;
use poalg::{
    deviation_variance, make_density, project_density, transition_matrix, uncertainty_check, DensityObservable, ProjectorBasis, Tolerances,
    TransitionMatrix, UncertaintyCheck,
};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::scenario::{family_basis, initial_basis, Scenario, ScenarioError};

/// Tolerance for the uncertainty relation check.
pub const UNCERTAINTY_EPS: f64 = 1e-10;
const TRIALS_PER_CHUNK: u64 = 4096;

/// Densities held by one observer, one per completed step.
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverRecord {
    pub history: Vec<(usize, ProjectorBasis, DensityObservable)>,
}

impl ObserverRecord {
    pub fn new(initial: DensityObservable) -> Self {
        Self {
            history: vec![(0, initial.basis().clone(), initial)],
        }
    }

    pub fn current(&self) -> &DensityObservable {
        &self.history.last().expect("history is never empty").2
    }

    pub fn record(&mut self, step: usize, density: DensityObservable) {
        self.history.push((step, density.basis().clone(), density));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableStats {
    pub name: String,
    pub mean: f64,
    pub variance: f64,
    pub std_dev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCheck {
    pub first: String,
    pub second: String,
    pub check: UncertaintyCheck,
}

/// Agreement of an empirical frequency with its analytic probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    /// Within 3 standard errors.
    Pass,
    /// Between 3 and 4 standard errors.
    Flag,
    /// Beyond 4 standard errors.
    Fail,
}

impl Agreement {
    pub fn as_str(self) -> &'static str {
        match self {
            Agreement::Pass => "pass",
            Agreement::Flag => "flag",
            Agreement::Fail => "fail",
        }
    }

    fn classify(frequency: f64, probability: f64, std_error: f64) -> Self {
        let gap = (frequency - probability).abs();
        if std_error == 0.0 {
            return if gap <= 1e-12 { Agreement::Pass } else { Agreement::Fail };
        }
        let z = gap / std_error;
        if z <= 3.0 {
            Agreement::Pass
        } else if z <= 4.0 {
            Agreement::Flag
        } else {
            Agreement::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Empirical {
    pub count: u64,
    pub frequency: f64,
    pub std_error: f64,
    pub agreement: Agreement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub index: usize,
    pub measure: Vec<String>,
    /// Whether every joint eigenprojector of the family is elementary.
    pub complete: bool,
    pub basis: ProjectorBasis,
    /// Eigenvalue tuple of each basis element.
    pub labels: Vec<Vec<f64>>,
    pub transitions: TransitionMatrix,
    pub probabilities: Vec<f64>,
    pub clamped: bool,
    pub stats: Vec<ObservableStats>,
    pub uncertainty: Vec<PairCheck>,
    pub empirical: Vec<Empirical>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    pub initial_basis: ProjectorBasis,
    pub initial_probabilities: Vec<f64>,
    pub observer: ObserverRecord,
    pub steps: Vec<StepReport>,
}

impl Report {
    /// Worst agreement over every empirical cell.
    pub fn worst_agreement(&self) -> Agreement {
        let cells = self.steps.iter().flat_map(|s| s.empirical.iter().map(|e| e.agreement));
        if cells.clone().any(|a| a == Agreement::Fail) {
            Agreement::Fail
        } else if cells.clone().any(|a| a == Agreement::Flag) {
            Agreement::Flag
        } else {
            Agreement::Pass
        }
    }

    pub fn uncertainty_holds(&self) -> bool {
        self.steps.iter().all(|s| s.uncertainty.iter().all(|p| p.check.holds))
    }
}

fn algebra(e: poalg::AlgebraError) -> ScenarioError {
    ScenarioError::Validation(e.to_string())
}

/// Runs every step analytically, then samples `scenario.samples`
/// trajectories.
pub fn run_scenario(scenario: &Scenario) -> Result<Report, ScenarioError> {
    let tol = Tolerances::default();
    let basis = initial_basis(scenario)?;
    let initial = make_density(&basis, &scenario.initial.probabilities, &tol).map_err(algebra)?;
    let mut observer = ObserverRecord::new(initial.clone());
    let names: Vec<&String> = scenario.observables.keys().collect();
    let mut steps = Vec::with_capacity(scenario.steps.len());

    for (i, step) in scenario.steps.iter().enumerate() {
        let compat = family_basis(scenario, &step.measure)?;
        let prior = observer.current().clone();
        let transitions = transition_matrix(prior.basis(), &compat.basis).map_err(algebra)?;
        let density = project_density(&prior, &compat.basis, &tol).map_err(algebra)?;

        let stats = names
            .iter()
            .map(|&name| {
                let d = deviation_variance(&scenario.observables[name], &density).map_err(algebra)?;
                Ok(ObservableStats {
                    name: name.clone(),
                    mean: d.mean,
                    variance: d.variance,
                    std_dev: d.std_dev,
                })
            })
            .collect::<Result<Vec<_>, ScenarioError>>()?;
        let mut uncertainty = Vec::new();
        for (a, &first) in names.iter().enumerate() {
            for &second in &names[a + 1..] {
                let check = uncertainty_check(&scenario.observables[first], &scenario.observables[second], &density, UNCERTAINTY_EPS)
                    .map_err(algebra)?;
                uncertainty.push(PairCheck {
                    first: first.clone(),
                    second: second.clone(),
                    check,
                });
            }
        }

        steps.push(StepReport {
            index: i + 1,
            measure: step.measure.clone(),
            complete: compat.is_complete(tol.deg),
            basis: compat.basis.clone(),
            labels: compat.labels.clone(),
            transitions,
            probabilities: density.probabilities().to_vec(),
            clamped: density.was_clamped(),
            stats,
            uncertainty,
            empirical: Vec::new(),
        });
        observer.record(i + 1, density);
    }

    let counts = sample_trajectories(&initial, &steps, scenario.samples, scenario.seed)?;
    let n = scenario.samples;
    for (step, counts) in steps.iter_mut().zip(counts) {
        step.empirical = counts
            .into_iter()
            .zip(&step.probabilities)
            .map(|(count, &p)| {
                let frequency = if n == 0 { 0.0 } else { count as f64 / n as f64 };
                let std_error = if n == 0 { 0.0 } else { (p * (1.0 - p) / n as f64).max(0.0).sqrt() };
                let agreement = if n == 0 { Agreement::Pass } else { Agreement::classify(frequency, p, std_error) };
                Empirical {
                    count,
                    frequency,
                    std_error,
                    agreement,
                }
            })
            .collect();
    }

    Ok(Report {
        dim: scenario.dim,
        samples: scenario.samples,
        seed: scenario.seed,
        initial_basis: basis,
        initial_probabilities: initial.probabilities().to_vec(),
        observer,
        steps,
    })
}

fn weighted(weights: &[f64]) -> Result<WeightedIndex<f64>, ScenarioError> {
    WeightedIndex::new(weights.iter().map(|&w| w.max(0.0))).map_err(|e| ScenarioError::Validation(format!("sampling weights: {e}")))
}

/// Outcome counts per step and basis index. Trial `t` draws from its own
/// stream seeded with `derive_seed(seed, t)`: the initial index from the
/// initial distribution, then each step's index from the transition row of
/// the previous realized index.
fn sample_trajectories(initial: &DensityObservable, steps: &[StepReport], samples: u64, seed: u64) -> Result<Vec<Vec<u64>>, ScenarioError> {
    let d = initial.dim();
    let start = weighted(initial.probabilities())?;
    let rows = steps
        .iter()
        .map(|s| s.transitions.rows().iter().map(|r| weighted(r)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let chunks = samples.div_ceil(TRIALS_PER_CHUNK);
    let zero = || vec![vec![0u64; d]; steps.len()];
    let merge = |mut a: Vec<Vec<u64>>, b: Vec<Vec<u64>>| {
        for (ra, rb) in a.iter_mut().zip(b) {
            for (x, y) in ra.iter_mut().zip(rb) {
                *x += y;
            }
        }
        a
    };
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut counts = zero();
            let end = ((c + 1) * TRIALS_PER_CHUNK).min(samples);
            for t in c * TRIALS_PER_CHUNK..end {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t));
                let mut j = start.sample(&mut rng);
                for (s, step_rows) in rows.iter().enumerate() {
                    j = step_rows[j].sample(&mut rng);
                    counts[s][j] += 1;
                }
            }
            counts
        })
        .reduce(zero, merge))
}
