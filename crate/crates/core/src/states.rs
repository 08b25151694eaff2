//! State-vector sets and the eigenstate space they span.
//!
//! A state-vector set over a dyad basis `{Γ_jk}` is a family `{Ψ_j}` with
//! `Ψ_j Ψ_k† = Γ_jk`. Every such family has the form `Ψ_j = Γ_{j k0} K` for an
//! index `k0` and a unitary `K`. Elements of the eigenstate space
//! `𝔙 = span{Ψ_j}` are plain [`PseudoObservable`]s.

use num_complex::Complex64;

use crate::algebra::{check_index, CMatrix, CVector, Observable, Projector, PseudoObservable, ONE, ZERO};
use crate::bases::{basis_change, make_basis, BasisChange, DyadBasis};
use crate::error::{AlgebraError, Result};
use crate::spectral::{inner, norm};
use crate::tolerance::Tolerances;

/// The family `Ψ_j = Γ_{j k0} K`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVectorSet {
    basis: DyadBasis,
    k0: usize,
    k: PseudoObservable,
}

/// Builds `{Ψ_j = Γ_{j k0} K}`; `K` must be unitary.
pub fn make_state_vectors(basis: &DyadBasis, k0: usize, k: &PseudoObservable, tol: &Tolerances) -> Result<StateVectorSet> {
    check_index(k0, basis.dim())?;
    if k.dim() != basis.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: basis.dim(),
            found: k.dim(),
        });
    }
    k.require_unitary(tol.unit)?;
    Ok(StateVectorSet {
        basis: basis.clone(),
        k0,
        k: k.clone(),
    })
}

impl StateVectorSet {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &DyadBasis {
        &self.basis
    }

    pub fn k0(&self) -> usize {
        self.k0
    }

    /// The unitary factor `K`.
    pub fn factor(&self) -> &PseudoObservable {
        &self.k
    }

    /// `Ψ_j`.
    pub fn member(&self, j: usize) -> Result<PseudoObservable> {
        self.basis.dyad(j, self.k0)?.mul(&self.k)
    }

    pub fn members(&self) -> Vec<PseudoObservable> {
        (0..self.dim())
            .map(|j| self.member(j).expect("index in range"))
            .collect()
    }

    /// `J_j = Ψ_j† Ψ_j`, the same elementary projector for every `j`.
    pub fn right_projector(&self, j: usize) -> Result<Projector> {
        let psi = self.member(j)?;
        Ok(Projector::from_projector_unchecked(psi.dagger().mul(&psi)?))
    }

    /// `⟨Ψ_j, Φ⟩` for every `j`.
    pub fn expand(&self, phi: &PseudoObservable) -> Result<Vec<Complex64>> {
        self.members().iter().map(|psi| inner(psi, phi)).collect()
    }

    /// `Σ_j c_j Ψ_j`.
    pub fn combine(&self, coefficients: &[Complex64]) -> Result<PseudoObservable> {
        if coefficients.len() != self.dim() {
            return Err(AlgebraError::FamilySize {
                expected: self.dim(),
                found: coefficients.len(),
            });
        }
        let d = self.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (psi, c) in self.members().iter().zip(coefficients) {
            acc += psi.components() * *c;
        }
        PseudoObservable::from_matrix(acc)
    }

    /// `||Φ - Σ_j ⟨Ψ_j, Φ⟩ Ψ_j||`, zero iff `Φ ∈ 𝔙`.
    pub fn span_residual(&self, phi: &PseudoObservable) -> Result<f64> {
        let projected = self.combine(&self.expand(phi)?)?;
        phi.distance(&projected)
    }

    fn require_in_span(&self, phi: &PseudoObservable, index: usize, tol: &Tolerances) -> Result<()> {
        let residual = self.span_residual(phi)?;
        if residual > Tolerances::scaled(tol.lin, norm(phi)) {
            return Err(AlgebraError::NotInSpan { index, residual });
        }
        Ok(())
    }

    /// max over (j, k) of ||Ψ_j Ψ_k† - Γ_jk||.
    pub fn characterization_deviation(&self) -> f64 {
        characterization_deviation(&self.members(), &self.basis)
    }

    /// max over (j, k) of |⟨Ψ_j, Ψ_k⟩ - δ_jk|.
    pub fn orthonormality_deviation(&self) -> f64 {
        gram_deviation(&self.members())
    }
}

fn characterization_deviation(family: &[PseudoObservable], basis: &DyadBasis) -> f64 {
    let mut worst = 0.0f64;
    for (j, pj) in family.iter().enumerate() {
        for (k, pk) in family.iter().enumerate() {
            let product = pj.mul(&pk.dagger()).expect("same dim");
            let gamma = basis.dyad(j, k).expect("in range");
            worst = worst.max(product.distance(&gamma).expect("same dim"));
        }
    }
    worst
}

fn gram_deviation(family: &[PseudoObservable]) -> f64 {
    let mut worst = 0.0f64;
    for (j, a) in family.iter().enumerate() {
        for (k, b) in family.iter().enumerate() {
            let target = if j == k { ONE } else { ZERO };
            worst = worst.max((inner(a, b).expect("same dim") - target).norm());
        }
    }
    worst
}

/// Outcome of testing a family against `Ψ_j Ψ_k† = Γ_jk`.
#[derive(Debug, Clone, PartialEq)]
pub struct Characterization {
    pub holds: bool,
    /// max over (j, k) of ||Ψ_j Ψ_k† - Γ_jk||.
    pub deviation: f64,
    /// A recovered `(k0, K)` with `Ψ_j = Γ_{j k0} K`, verified by re-expansion.
    pub factorization: Option<(usize, PseudoObservable)>,
}

/// Decides whether `family` is a state-vector set over `basis` and, if so,
/// recovers a factorization `Ψ_j = Γ_{j k0} K` with `k0 = 0`.
///
/// Only the row `υ† = v_{k0}† Ψ_{k0}` of `K` is fixed by the family. The
/// rest of `K` is completed by Gram-Schmidt of the basis vectors against
/// `υ`, which leaves the anchored entries `⟨v_l, K v_l⟩ (l ≠ k0)` real and
/// nonnegative.
pub fn verify_characterization(family: &[PseudoObservable], basis: &DyadBasis, tol: &Tolerances) -> Result<Characterization> {
    let d = basis.dim();
    if family.len() != d {
        return Err(AlgebraError::FamilySize {
            expected: d,
            found: family.len(),
        });
    }
    for p in family {
        if p.dim() != d {
            return Err(AlgebraError::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
    }
    let deviation = characterization_deviation(family, basis);
    if deviation > tol.sv {
        return Ok(Characterization {
            holds: false,
            deviation,
            factorization: None,
        });
    }

    let k0 = 0;
    let v = basis.source().vectors();
    // Ψ_{k0} = v_{k0} υ†, so υ = Ψ_{k0}† v_{k0}.
    let upsilon: CVector = family[k0].components().adjoint() * &v[k0];
    let mut candidates: Vec<CVector> = (0..d).filter(|&l| l != k0).map(|l| v[l].clone()).collect();
    candidates.extend((0..d).map(|i| {
        let mut e = CVector::zeros(d);
        e[i] = ONE;
        e
    }));
    let completion = orthonormal_completion(&upsilon, &candidates, d);
    let mut w = Vec::with_capacity(d);
    let mut rest = completion.into_iter();
    for l in 0..d {
        if l == k0 {
            w.push(upsilon.clone());
        } else {
            w.push(rest.next().expect("completion has d - 1 vectors"));
        }
    }
    let mut k = CMatrix::zeros(d, d);
    for l in 0..d {
        k += &v[l] * w[l].adjoint();
    }
    let k = PseudoObservable::from_matrix(k)?;
    let mut expansion = 0.0f64;
    for (j, psi) in family.iter().enumerate() {
        let rebuilt = basis.dyad(j, k0)?.mul(&k)?;
        expansion = expansion.max(rebuilt.distance(psi)?);
    }
    let factorization = (k.is_unitary(tol.unit) && expansion <= tol.sv).then_some((k0, k));
    Ok(Characterization {
        holds: true,
        deviation,
        factorization,
    })
}

/// Orthonormal vectors completing `{first}` to a basis of `C^d`, drawn from
/// `candidates` in order.
fn orthonormal_completion(first: &CVector, candidates: &[CVector], d: usize) -> Vec<CVector> {
    let mut accepted: Vec<CVector> = vec![first.normalize()];
    let mut out = Vec::with_capacity(d - 1);
    for c in candidates {
        if out.len() == d - 1 {
            break;
        }
        let mut r = c.clone();
        for _ in 0..2 {
            for a in &accepted {
                let proj = a.dotc(&r);
                r -= a * proj;
            }
        }
        let n = r.norm();
        if n > 1e-6 {
            let u = r / Complex64::new(n, 0.0);
            accepted.push(u.clone());
            out.push(u);
        }
    }
    out
}

/// `Ψ̃_j = e^{iϑ_j} Ψ_j Y`, a set over the rephased dyad basis
/// `Γ̃_jk = e^{i(ϑ_j - ϑ_k)} Γ_jk` (same projectors `I_j`).
pub fn equivalent_set(set: &StateVectorSet, phases: &[f64], y: &PseudoObservable, tol: &Tolerances) -> Result<StateVectorSet> {
    if y.dim() != set.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: set.dim(),
            found: y.dim(),
        });
    }
    y.require_unitary(tol.unit)?;
    let source = set.basis.source().rephased(phases)?;
    let anchor = Complex64::from_polar(1.0, phases[set.k0]);
    let k = set.k.mul(y)?.scale(anchor);
    make_state_vectors(&DyadBasis::new(source), set.k0, &k, tol)
}

/// Coefficients `ϖ_{j'j}` with `P Ψ_j = Σ_{j'} ϖ_{j'j} Ψ_{j'}`.
pub fn left_action(p: &PseudoObservable, set: &StateVectorSet, j: usize) -> Result<Vec<Complex64>> {
    if p.dim() != set.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: set.dim(),
            found: p.dim(),
        });
    }
    let image = p.mul(&set.member(j)?)?;
    set.expand(&image)
}

/// Gram-Schmidt orthonormalization in the inner product `tr(X† Y)`.
///
/// The first output is the first input divided by its norm. Each projection
/// pass runs twice to keep orthogonality at machine precision.
pub fn gram_schmidt(vectors: &[PseudoObservable], tol: &Tolerances) -> Result<Vec<PseudoObservable>> {
    let mut out: Vec<PseudoObservable> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        let residual = orthogonalize(v, &out)?;
        let n = norm(&residual);
        if n <= Tolerances::scaled(tol.lin, norm(v)) {
            return Err(AlgebraError::LinearlyDependent { index });
        }
        out.push(residual.scale(Complex64::new(1.0 / n, 0.0)));
    }
    Ok(out)
}

fn orthogonalize(v: &PseudoObservable, against: &[PseudoObservable]) -> Result<PseudoObservable> {
    let mut r = v.clone();
    for _ in 0..2 {
        for q in against {
            let c = inner(q, &r)?;
            r = r.sub(&q.scale(c))?;
        }
    }
    Ok(r)
}

/// Realizes an orthonormal basis `{Φ_j}` of `𝔙` as an eigenstate set.
///
/// With `φ_kj = ⟨Ψ_k, Φ_j⟩` the change is `Ω = Σ φ_kk' Γ_kk'`, so that
/// `Φ_j = Ω Ψ_j` and `Φ_j Φ_j'† = Ω Γ_jj' Ω†`. The returned set lives on the
/// dyad basis `{Ω v_j}` with factor `Ω K`.
pub fn orthonormal_basis_to_eigenstate_set(
    phis: &[PseudoObservable],
    set: &StateVectorSet,
    tol: &Tolerances,
) -> Result<(StateVectorSet, BasisChange)> {
    let d = set.dim();
    if phis.len() != d {
        return Err(AlgebraError::FamilySize {
            expected: d,
            found: phis.len(),
        });
    }
    for (index, phi) in phis.iter().enumerate() {
        if phi.dim() != d {
            return Err(AlgebraError::DimensionMismatch {
                expected: d,
                found: phi.dim(),
            });
        }
        set.require_in_span(phi, index, tol)?;
    }
    let deviation = gram_deviation(phis);
    if deviation > tol.sv {
        return Err(AlgebraError::NotOrthonormal { deviation });
    }

    let mut omega = CMatrix::zeros(d, d);
    for (kp, phi) in phis.iter().enumerate() {
        for (k, c) in set.expand(phi)?.into_iter().enumerate() {
            omega += set.basis.dyad(k, kp)?.components() * c;
        }
    }
    let omega = PseudoObservable::from_matrix(omega)?;
    omega.require_unitary(tol.unit)?;

    let vectors: Vec<CVector> = set
        .basis
        .source()
        .vectors()
        .iter()
        .map(|v| omega.components() * v)
        .collect();
    let target = DyadBasis::new(make_basis(&vectors, tol.orth)?);
    let realized = make_state_vectors(&target, set.k0, &omega.mul(&set.k)?, tol)?;
    let change = basis_change(&set.basis, &target)?;
    Ok((realized, change))
}

/// Extends a non-null `Φ ∈ 𝔙` to an orthonormal basis of `𝔙` whose first
/// element is `Φ / ||Φ||`, and realizes it as an eigenstate set.
///
/// Members of the original set are taken greedily by largest residual, so
/// the completion stays well conditioned.
pub fn eigenstate_set_through(
    phi: &PseudoObservable,
    set: &StateVectorSet,
    tol: &Tolerances,
) -> Result<(Vec<PseudoObservable>, StateVectorSet, BasisChange)> {
    let n = norm(phi);
    if n == 0.0 {
        return Err(AlgebraError::ZeroInput);
    }
    set.require_in_span(phi, 0, tol)?;
    let mut basis = vec![phi.scale(Complex64::new(1.0 / n, 0.0))];
    let mut pool = set.members();
    while basis.len() < set.dim() {
        let residuals: Vec<PseudoObservable> = pool
            .iter()
            .map(|p| orthogonalize(p, &basis))
            .collect::<Result<_>>()?;
        let (best, r) = residuals
            .into_iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| norm(a).total_cmp(&norm(b)))
            .expect("pool is non-empty");
        let rn = norm(&r);
        basis.push(r.scale(Complex64::new(1.0 / rn, 0.0)));
        pool.remove(best);
    }
    let (realized, change) = orthonormal_basis_to_eigenstate_set(&basis, set, tol)?;
    Ok((basis, realized, change))
}

/// A state-vector set whose members are labelled by the eigenvalue tuples
/// `𝐨_j` of a compatible family: `O_a Ψ_j = o_{a,j} Ψ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledEigenstates {
    set: StateVectorSet,
    observables: Vec<Observable>,
    labels: Vec<Vec<f64>>,
}

impl LabeledEigenstates {
    /// Labels every member; fails if some observable is not diagonal on the set.
    pub fn new(set: StateVectorSet, observables: Vec<Observable>, tol: &Tolerances) -> Result<Self> {
        let members = set.members();
        let mut labels = vec![Vec::with_capacity(observables.len()); set.dim()];
        for (a, o) in observables.iter().enumerate() {
            if o.dim() != set.dim() {
                return Err(AlgebraError::DimensionMismatch {
                    expected: set.dim(),
                    found: o.dim(),
                });
            }
            let scale = o.as_pseudo().frobenius_norm().max(1.0);
            for (j, psi) in members.iter().enumerate() {
                let image = o.as_pseudo().mul(psi)?;
                let value = inner(psi, &image)?.re;
                let residual = image.distance(&psi.scale(Complex64::new(value, 0.0)))?;
                if residual > tol.eig * scale {
                    return Err(AlgebraError::NotCompatible { index: a, residual });
                }
                labels[j].push(value);
            }
        }
        Ok(Self {
            set,
            observables,
            labels,
        })
    }

    pub fn set(&self) -> &StateVectorSet {
        &self.set
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn labels(&self) -> &[Vec<f64>] {
        &self.labels
    }

    /// Index of `o` within the family, matched componentwise.
    pub fn position(&self, o: &Observable, eps: f64) -> Option<usize> {
        self.observables.iter().position(|x| {
            x.as_pseudo()
                .distance(o.as_pseudo())
                .map(|dist| dist <= Tolerances::scaled(eps, norm(o.as_pseudo())))
                .unwrap_or(false)
        })
    }
}

/// Amplitudes `φ(𝐨) = ⟨Ψ_𝐨, Φ⟩` of an element of `𝔙` over labelled eigenstates.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub labels: Vec<Vec<f64>>,
    pub amplitudes: Vec<Complex64>,
}

impl WaveFunction {
    /// `(Σ |φ(𝐨)|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|φ(𝐨)|²` per label.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `Σ φ_1*(𝐨) φ_2(𝐨)`.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Wave function of `Φ` relative to `set`, tagged with `labels` (one tuple per
/// member).
pub fn wave_function(phi: &PseudoObservable, set: &StateVectorSet, labels: &[Vec<f64>], tol: &Tolerances) -> Result<WaveFunction> {
    if labels.len() != set.dim() {
        return Err(AlgebraError::FamilySize {
            expected: set.dim(),
            found: labels.len(),
        });
    }
    if phi.dim() != set.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: set.dim(),
            found: phi.dim(),
        });
    }
    set.require_in_span(phi, 0, tol)?;
    Ok(WaveFunction {
        labels: labels.to_vec(),
        amplitudes: set.expand(phi)?,
    })
}

/// Checks the implication `IJI = I ⇒ I = J` for elementary projectors.
///
/// Returns whether the premise holds within `premise_eps`. When it does and
/// `||I - J||` exceeds `conclusion_eps`, the implication is reported as
/// violated. Note that for rank-one projectors `||IJI - I|| = 1 - c²` while
/// `||I - J|| = sqrt(2 (1 - c²))`, `c = |⟨u, v⟩|`.
pub fn lemma_elementary_equality_with(i: &Projector, j: &Projector, eps_tr: f64, premise_eps: f64, conclusion_eps: f64) -> Result<bool> {
    if i.dim() != j.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: i.dim(),
            found: j.dim(),
        });
    }
    for p in [i, j] {
        if !p.is_elementary(eps_tr) {
            return Err(AlgebraError::NotElementary { trace: p.trace() });
        }
    }
    let ip = i.as_pseudo();
    let premise = ip.mul(j.as_pseudo())?.mul(ip)?.distance(ip)?;
    if premise > premise_eps {
        return Ok(false);
    }
    let conclusion = ip.distance(j.as_pseudo())?;
    if conclusion > conclusion_eps {
        return Err(AlgebraError::LemmaViolated { premise, conclusion });
    }
    Ok(true)
}

/// [`lemma_elementary_equality_with`] using `tol.lemma` for the premise and
/// `10 · tol.lemma` for the conclusion.
pub fn lemma_elementary_equality(i: &Projector, j: &Projector, tol: &Tolerances) -> Result<bool> {
    lemma_elementary_equality_with(i, j, tol.trace, tol.lemma, 10.0 * tol.lemma)
}
