//! Expectation values, density observables, projections onto complete
//! spaces, transition probabilities, dispersion and the Born rule.

use num_complex::Complex64;

use crate::algebra::{CMatrix, Observable, PseudoObservable, I};
use crate::bases::ProjectorBasis;
use crate::error::{AlgebraError, Result};
use crate::spectral::{decompose, inner, norm, trace};
use crate::states::{wave_function, LabeledEigenstates, StateVectorSet};
use crate::tolerance::Tolerances;

/// `D = Σ_j p_j I_j`: a probability distribution over a projector basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityObservable {
    basis: ProjectorBasis,
    probabilities: Vec<f64>,
    clamped: bool,
}

/// Validates `probabilities` as a distribution over `basis`.
///
/// Entries in `[-ε_prob, 0)` are clamped to zero and the distribution is
/// renormalized; [`DensityObservable::was_clamped`] reports it.
pub fn make_density(basis: &ProjectorBasis, probabilities: &[f64], tol: &Tolerances) -> Result<DensityObservable> {
    let d = basis.dim();
    if probabilities.len() != d {
        return Err(AlgebraError::InvalidDistribution(format!(
            "expected {d} probabilities, got {}",
            probabilities.len()
        )));
    }
    let mut clamped = false;
    let mut p = Vec::with_capacity(d);
    for (j, &x) in probabilities.iter().enumerate() {
        if !x.is_finite() {
            return Err(AlgebraError::InvalidDistribution(format!("p[{j}] is not finite")));
        }
        if x < -tol.prob {
            return Err(AlgebraError::InvalidDistribution(format!("p[{j}] = {x} is negative")));
        }
        if x > 1.0 + tol.prob {
            return Err(AlgebraError::InvalidDistribution(format!("p[{j}] = {x} exceeds 1")));
        }
        if x < 0.0 {
            clamped = true;
            p.push(0.0);
        } else {
            p.push(x);
        }
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol.prob {
        return Err(AlgebraError::InvalidDistribution(format!("probabilities sum to {total}")));
    }
    if clamped {
        p.iter_mut().for_each(|x| *x /= total);
    }
    Ok(DensityObservable {
        basis: basis.clone(),
        probabilities: p,
        clamped,
    })
}

impl DensityObservable {
    /// The pure state `p_j = δ_{j, index}`.
    pub fn pure(basis: &ProjectorBasis, index: usize) -> Result<Self> {
        crate::algebra::check_index(index, basis.dim())?;
        let mut p = vec![0.0; basis.dim()];
        p[index] = 1.0;
        Ok(Self {
            basis: basis.clone(),
            probabilities: p,
            clamped: false,
        })
    }

    /// `½·1`-style maximally mixed density over `basis`.
    pub fn maximally_mixed(basis: &ProjectorBasis) -> Self {
        let d = basis.dim();
        Self {
            basis: basis.clone(),
            probabilities: vec![1.0 / d as f64; d],
            clamped: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &ProjectorBasis {
        &self.basis
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn was_clamped(&self) -> bool {
        self.clamped
    }

    /// `Σ_j p_j I_j` as an observable.
    pub fn observable(&self) -> Observable {
        let cols = self.basis.unitary().into_matrix();
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.probabilities.iter().map(|&p| Complex64::new(p, 0.0)),
        ));
        Observable::from_hermitian_unchecked(PseudoObservable::from_matrix_unchecked(&cols * diag * cols.adjoint()))
    }

    /// Index `j'` when `p_j = δ_{j j'}` within `eps`.
    pub fn pure_index(&self, eps: f64) -> Option<usize> {
        let (j, &max) = self
            .probabilities
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        ((1.0 - max).abs() <= eps).then_some(j)
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(AlgebraError::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// `⟨Z⟩ = tr(D Z)`.
pub fn expectation(z: &PseudoObservable, density: &DensityObservable) -> Result<Complex64> {
    same_dim(density.dim(), z.dim())?;
    Ok(trace(&density.observable().as_pseudo().mul(z)?))
}

/// Real expectation of an observable.
pub fn expectation_real(o: &Observable, density: &DensityObservable) -> Result<f64> {
    Ok(expectation(o.as_pseudo(), density)?.re)
}

/// `B_𝔄 = Σ_j I_{𝔄,j} B I_{𝔄,j}`.
pub fn project_observable(b: &Observable, onto: &ProjectorBasis) -> Result<Observable> {
    same_dim(onto.dim(), b.dim())?;
    let d = b.dim();
    let mut acc = CMatrix::zeros(d, d);
    for projector in onto.projectors() {
        let ij = projector.components();
        acc += ij * b.components() * ij;
    }
    Ok(Observable::from_hermitian_unchecked(PseudoObservable::from_matrix(acc)?))
}

/// The three evaluations of a conditioned expectation value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalRoutes {
    /// `tr(D_𝔄 B_𝔄)`.
    pub projected_observable: f64,
    /// `tr(D_{𝔄,𝔅} B)`.
    pub projected_density: f64,
    /// `tr(D_𝔄 B)`.
    pub direct: f64,
}

impl ConditionalRoutes {
    pub fn max_discrepancy(&self) -> f64 {
        let a = (self.projected_observable - self.projected_density).abs();
        let b = (self.projected_observable - self.direct).abs();
        let c = (self.projected_density - self.direct).abs();
        a.max(b).max(c)
    }
}

/// Evaluates `⟨B⟩_𝔄` three ways, with `𝔄` the basis of `density` and `𝔅`
/// a basis compatible with `B`.
pub fn conditional_expectation_routes(b: &Observable, density: &DensityObservable, b_basis: &ProjectorBasis) -> Result<ConditionalRoutes> {
    same_dim(density.dim(), b.dim())?;
    same_dim(b_basis.dim(), b.dim())?;
    let d_a = density.observable();
    let b_a = project_observable(b, density.basis())?;
    let d_ab = project_density(density, b_basis, &Tolerances::default())?.observable();
    Ok(ConditionalRoutes {
        projected_observable: trace(&d_a.as_pseudo().mul(b_a.as_pseudo())?).re,
        projected_density: trace(&d_ab.as_pseudo().mul(b.as_pseudo())?).re,
        direct: trace(&d_a.as_pseudo().mul(b.as_pseudo())?).re,
    })
}

/// `⟨B⟩_𝔄 = tr(D_𝔄 B_𝔄)`, with `B`'s own eigenbasis used for the
/// projected-density cross-check.
pub fn conditional_expectation(b: &Observable, density: &DensityObservable, tol: &Tolerances) -> Result<f64> {
    let spectral = decompose(b, tol)?;
    let routes = conditional_expectation_routes(b, density, &spectral.basis)?;
    Ok(routes.projected_observable)
}

/// Entries `p_{𝔅j,k} = tr(I_{𝔄,j} I_{𝔅,k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub from: ProjectorBasis,
    pub to: ProjectorBasis,
    entries: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn entry(&self, j: usize, k: usize) -> f64 {
        self.entries[j][k]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|k| self.entries.iter().map(|r| r[k]).sum())
            .collect()
    }

    /// Largest departure from double stochasticity (row and column sums).
    pub fn stochastic_deviation(&self) -> f64 {
        self.row_sums()
            .into_iter()
            .chain(self.column_sums())
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Pushes a distribution over `from` forward to `to`:
    /// `p_k = Σ_j p_j p_{𝔅j,k}`.
    pub fn push_forward(&self, probabilities: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|k| {
                probabilities
                    .iter()
                    .zip(&self.entries)
                    .map(|(p, row)| p * row[k])
                    .sum()
            })
            .collect()
    }
}

pub fn transition_matrix(from: &ProjectorBasis, to: &ProjectorBasis) -> Result<TransitionMatrix> {
    same_dim(from.dim(), to.dim())?;
    let a = from.projectors();
    let b = to.projectors();
    let entries = a
        .iter()
        .map(|ia| {
            b.iter()
                .map(|ib| trace(&ia.as_pseudo().mul(ib.as_pseudo()).expect("same dim")).re)
                .collect()
        })
        .collect();
    Ok(TransitionMatrix {
        from: from.clone(),
        to: to.clone(),
        entries,
    })
}

/// `D_{𝔄,𝔅} = Σ_k I_{𝔅,k} D I_{𝔅,k}`, a density over `onto` with
/// `p_{𝔄𝔅,k} = Σ_j p_{𝔄,j} p_{𝔅j,k}`.
pub fn project_density(density: &DensityObservable, onto: &ProjectorBasis, tol: &Tolerances) -> Result<DensityObservable> {
    same_dim(density.dim(), onto.dim())?;
    let transitions = transition_matrix(density.basis(), onto)?;
    let p = transitions.push_forward(density.probabilities());
    make_density(onto, &p, tol)
}

/// Deviation `ΔA = A - ⟨A⟩`, variance `⟨(ΔA)²⟩` and standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispersion {
    pub deviation: Observable,
    pub mean: f64,
    pub variance: f64,
    pub std_dev: f64,
}

pub fn deviation_variance(a: &Observable, density: &DensityObservable) -> Result<Dispersion> {
    let mean = expectation_real(a, density)?;
    let delta = a.sub(&Observable::constant(a.dim(), mean))?;
    let squared = delta.as_pseudo().mul(delta.as_pseudo())?;
    let variance = expectation(&squared, density)?.re.max(0.0);
    Ok(Dispersion {
        deviation: delta,
        mean,
        variance,
        std_dev: variance.sqrt(),
    })
}

/// `σ_A σ_B ≥ ½ |⟨i[A, B]⟩|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyCheck {
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `||[ΔA, ΔB] - [A, B]||`.
    pub commutator_residual: f64,
}

pub fn uncertainty_check(a: &Observable, b: &Observable, density: &DensityObservable, eps_unc: f64) -> Result<UncertaintyCheck> {
    same_dim(a.dim(), b.dim())?;
    let da = deviation_variance(a, density)?;
    let db = deviation_variance(b, density)?;
    let commutator = a.as_pseudo().commutator(b.as_pseudo())?;
    let deviations = da.deviation.as_pseudo().commutator(db.deviation.as_pseudo())?;
    let rhs = 0.5 * expectation(&commutator.scale(I), density)?.norm();
    let lhs = da.std_dev * db.std_dev;
    Ok(UncertaintyCheck {
        sigma_a: da.std_dev,
        sigma_b: db.std_dev,
        lhs,
        rhs,
        holds: lhs >= rhs - eps_unc,
        commutator_residual: deviations.distance(&commutator)?,
    })
}

/// `O_1 ≤ O_2` iff `O_2 - O_1` is positive semidefinite within `eps`.
pub fn is_leq(o1: &Observable, o2: &Observable, tol: &Tolerances) -> Result<bool> {
    let diff = o2.sub(o1)?;
    let spectral = decompose(&diff, tol)?;
    let min = spectral.coefficients.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min >= -Tolerances::scaled(tol.herm, norm(diff.as_pseudo())))
}

/// `ϖ_jk = ⟨Ψ_j, P Ψ_k⟩`.
pub fn matrix_element(p: &PseudoObservable, set: &StateVectorSet, j: usize, k: usize) -> Result<Complex64> {
    same_dim(set.dim(), p.dim())?;
    let psi_j = set.member(j)?;
    let psi_k = set.member(k)?;
    inner(&psi_j, &p.mul(&psi_k)?)
}

/// `p(O_r = o) = Σ_𝐨 |φ(𝐨)|² δ_{o_r, o}` for a normalized `Φ ∈ 𝔙`.
pub fn born_rule(phi: &PseudoObservable, family: &LabeledEigenstates, o_r: &Observable, outcome: f64, tol: &Tolerances) -> Result<f64> {
    let r = family.position(o_r, tol.herm).ok_or(AlgebraError::NotInFamily)?;
    let distribution = outcome_distribution_at(phi, family, r, tol)?;
    let band = Tolerances::scaled(tol.deg, outcome.abs());
    distribution
        .iter()
        .find(|(value, _)| (value - outcome).abs() <= band)
        .map(|&(_, p)| p)
        .ok_or(AlgebraError::NotInSpectrum { value: outcome })
}

/// Distinct outcomes of `O_r` (descending) with their Born probabilities.
pub fn outcome_distribution(phi: &PseudoObservable, family: &LabeledEigenstates, o_r: &Observable, tol: &Tolerances) -> Result<Vec<(f64, f64)>> {
    let r = family.position(o_r, tol.herm).ok_or(AlgebraError::NotInFamily)?;
    outcome_distribution_at(phi, family, r, tol)
}

fn outcome_distribution_at(phi: &PseudoObservable, family: &LabeledEigenstates, r: usize, tol: &Tolerances) -> Result<Vec<(f64, f64)>> {
    let n = norm(phi);
    if (n - 1.0).abs() > tol.norm {
        return Err(AlgebraError::NotNormalized { norm: n });
    }
    let wave = wave_function(phi, family.set(), family.labels(), tol)?;
    let values: Vec<f64> = wave.labels.iter().map(|l| l[r]).collect();
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let band = Tolerances::scaled(tol.deg, hi - lo);
    let probabilities = wave.probabilities();
    Ok(crate::bases::group_descending(&values, band)
        .into_iter()
        .map(|g| {
            let value = g.iter().map(|&i| values[i]).sum::<f64>() / g.len() as f64;
            let p = g.iter().map(|&i| probabilities[i]).sum();
            (value, p)
        })
        .collect())
}
