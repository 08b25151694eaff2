//! Elementary projector bases, dyad bases and unitary changes between them.

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;

use crate::algebra::{check_index, CMatrix, CVector, Observable, Projector, PseudoObservable, ONE, ZERO};
use crate::error::{AlgebraError, Result};
use crate::tolerance::Tolerances;

/// An ordered family of `d` orthonormal vectors, each generating the
/// elementary projector `I_j = v_j v_j†`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorBasis {
    /// Columns are the basis vectors.
    columns: CMatrix,
}

impl ProjectorBasis {
    /// Validates a square orthonormal system against the default band.
    pub fn new(vectors: &[CVector]) -> Result<Self> {
        make_basis(vectors, Tolerances::default().orth)
    }

    /// The standard basis `e_0, …, e_{d-1}`.
    pub fn computational(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            columns: CMatrix::identity(dim, dim),
        }
    }

    /// Basis whose vectors are the columns of `unitary`.
    pub fn from_unitary(unitary: &PseudoObservable, eps_orth: f64) -> Result<Self> {
        let vectors: Vec<CVector> = unitary
            .components()
            .column_iter()
            .map(|c| c.into_owned())
            .collect();
        make_basis(&vectors, eps_orth)
    }

    pub(crate) fn from_columns_unchecked(columns: CMatrix) -> Self {
        Self { columns }
    }

    pub fn dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn vector(&self, j: usize) -> Result<CVector> {
        check_index(j, self.dim())?;
        Ok(self.columns.column(j).into_owned())
    }

    pub fn vectors(&self) -> Vec<CVector> {
        self.columns.column_iter().map(|c| c.into_owned()).collect()
    }

    /// The unitary whose columns are the basis vectors.
    pub fn unitary(&self) -> PseudoObservable {
        PseudoObservable::from_matrix_unchecked(self.columns.clone())
    }

    pub(crate) fn columns(&self) -> &CMatrix {
        &self.columns
    }

    /// Elementary projector `I_j`.
    pub fn projector(&self, j: usize) -> Result<Projector> {
        let v = self.vector(j)?;
        Ok(Projector::from_projector_unchecked(
            PseudoObservable::from_matrix_unchecked(&v * v.adjoint()),
        ))
    }

    pub fn projectors(&self) -> Vec<Projector> {
        (0..self.dim())
            .map(|j| self.projector(j).expect("index in range"))
            .collect()
    }

    /// `{U v_j}`, the image under a unitary.
    pub fn conjugated(&self, unitary: &PseudoObservable, eps_unit: f64) -> Result<Self> {
        if unitary.dim() != self.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                found: unitary.dim(),
            });
        }
        unitary.require_unitary(eps_unit)?;
        Ok(Self {
            columns: unitary.components() * &self.columns,
        })
    }

    /// `{e^{iϑ_j} v_j}`: same projectors, rephased dyads.
    pub fn rephased(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.dim() {
            return Err(AlgebraError::FamilySize {
                expected: self.dim(),
                found: phases.len(),
            });
        }
        let mut columns = self.columns.clone();
        for (j, &theta) in phases.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, theta);
            for r in 0..self.dim() {
                columns[(r, j)] *= phase;
            }
        }
        Ok(Self { columns })
    }

    /// max |⟨v_j, v_k⟩ - δ_jk|.
    pub fn orthonormality_deviation(&self) -> f64 {
        gram_deviation(&self.columns)
    }

    /// ||Σ_j I_j - 1||.
    pub fn closure_deviation(&self) -> f64 {
        let d = self.dim();
        let sum = &self.columns * self.columns.adjoint();
        frob(&(sum - CMatrix::identity(d, d)))
    }
}

/// Validates `vectors` as an orthonormal, complete system.
pub fn make_basis(vectors: &[CVector], eps_orth: f64) -> Result<ProjectorBasis> {
    let d = vectors.len();
    if d == 0 {
        return Err(AlgebraError::EmptyDimension);
    }
    for v in vectors {
        if v.len() != d {
            return Err(AlgebraError::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(AlgebraError::NotOrthonormal {
                deviation: f64::INFINITY,
            });
        }
    }
    let columns = CMatrix::from_columns(vectors);
    let deviation = gram_deviation(&columns);
    if deviation > eps_orth {
        return Err(AlgebraError::NotOrthonormal { deviation });
    }
    let basis = ProjectorBasis { columns };
    let closure = basis.closure_deviation();
    if closure > eps_orth {
        return Err(AlgebraError::NotOrthonormal { deviation: closure });
    }
    Ok(basis)
}

/// The dyads `Γ_jk = v_j v_k†` generated by a projector basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadBasis {
    source: ProjectorBasis,
}

impl DyadBasis {
    pub fn new(source: ProjectorBasis) -> Self {
        Self { source }
    }

    pub fn computational(dim: usize) -> Self {
        Self::new(ProjectorBasis::computational(dim))
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn source(&self) -> &ProjectorBasis {
        &self.source
    }

    pub fn dyad(&self, j: usize, k: usize) -> Result<PseudoObservable> {
        let vj = self.source.vector(j)?;
        let vk = self.source.vector(k)?;
        Ok(PseudoObservable::from_matrix_unchecked(vj * vk.adjoint()))
    }

    /// `Γ_jj = I_j`.
    pub fn projector(&self, j: usize) -> Result<Projector> {
        self.source.projector(j)
    }
}

impl From<ProjectorBasis> for DyadBasis {
    fn from(source: ProjectorBasis) -> Self {
        Self::new(source)
    }
}

/// The unitary `Ω` carrying one dyad basis onto another:
/// `Γ̃_jk = Ω Γ_jk Ω†`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisChange {
    omega: PseudoObservable,
    from: DyadBasis,
    to: DyadBasis,
}

impl BasisChange {
    pub fn omega(&self) -> &PseudoObservable {
        &self.omega
    }

    pub fn from_basis(&self) -> &DyadBasis {
        &self.from
    }

    pub fn to_basis(&self) -> &DyadBasis {
        &self.to
    }

    /// `Ω P Ω†`.
    pub fn transform(&self, p: &PseudoObservable) -> Result<PseudoObservable> {
        self.omega.mul(p)?.mul(&self.omega.dagger())
    }

    /// Follows this change (A → B) with `next` (B → C), giving A → C.
    pub fn then(&self, next: &BasisChange) -> Result<BasisChange> {
        if self.to.dim() != next.from.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.to.dim(),
                found: next.from.dim(),
            });
        }
        Ok(BasisChange {
            omega: next.omega.mul(&self.omega)?,
            from: self.from.clone(),
            to: next.to.clone(),
        })
    }

    /// max over (j, k) of ||Γ̃_jk - Ω Γ_jk Ω†||.
    pub fn dyad_deviation(&self) -> f64 {
        let d = self.from.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            for k in 0..d {
                let mapped = self
                    .transform(&self.from.dyad(j, k).expect("in range"))
                    .expect("same dim");
                let target = self.to.dyad(j, k).expect("in range");
                worst = worst.max(mapped.distance(&target).expect("same dim"));
            }
        }
        worst
    }
}

/// `Ω = Σ_k w_k u_k†` where `u_k`, `w_k` are the vectors of `from` and `to`.
pub fn basis_change(from: &DyadBasis, to: &DyadBasis) -> Result<BasisChange> {
    if from.dim() != to.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: from.dim(),
            found: to.dim(),
        });
    }
    let omega = to.source().columns() * from.source().columns().adjoint();
    Ok(BasisChange {
        omega: PseudoObservable::from_matrix_unchecked(omega),
        from: from.clone(),
        to: to.clone(),
    })
}

/// A basis diagonalizing a commuting family, with the eigenvalue tuple
/// `𝐨_j = (o_{0,j}, o_{1,j}, …)` of every basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatibleBasis {
    pub basis: ProjectorBasis,
    /// `labels[j][a]` is the spectral coefficient of observable `a` on `I_j`.
    pub labels: Vec<Vec<f64>>,
}

impl CompatibleBasis {
    /// Spectral coefficients `o_{a,j}` of observable `a`, indexed by `j`.
    pub fn coefficients(&self, a: usize) -> Vec<f64> {
        self.labels.iter().map(|t| t[a]).collect()
    }

    /// Whether every joint eigenprojector is elementary (pairwise distinct
    /// label tuples).
    pub fn is_complete(&self, eps_deg: f64) -> bool {
        let n = self.labels.len();
        for j in 0..n {
            for k in (j + 1)..n {
                let same = self.labels[j]
                    .iter()
                    .zip(&self.labels[k])
                    .all(|(a, b)| (a - b).abs() <= eps_deg * a.abs().max(b.abs()).max(1.0));
                if same {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds a basis that simultaneously diagonalizes every observable of a
/// commuting family.
///
/// Joint eigenspaces are found by successive refinement: each observable is
/// diagonalized inside every current block and blocks are split wherever
/// eigenvalues differ by more than the grouping band. Blocks come out in
/// descending lexicographic order of their eigenvalue tuples. Each vector's
/// first largest-magnitude entry is made real and positive.
pub fn complete_compatible_basis(observables: &[Observable], tol: &Tolerances) -> Result<CompatibleBasis> {
    let first = observables.first().ok_or(AlgebraError::EmptyDimension)?;
    let d = first.dim();
    for o in observables {
        if o.dim() != d {
            return Err(AlgebraError::DimensionMismatch {
                expected: d,
                found: o.dim(),
            });
        }
        let deviation = o.as_pseudo().hermitian_deviation();
        if deviation > Tolerances::scaled(tol.herm, o.as_pseudo().frobenius_norm()) {
            return Err(AlgebraError::NotHermitian { deviation });
        }
    }
    for a in 0..observables.len() {
        for b in (a + 1)..observables.len() {
            let pa = observables[a].as_pseudo();
            let pb = observables[b].as_pseudo();
            let deviation = pa.commutator(pb)?.frobenius_norm();
            let scale = pa.frobenius_norm() * pb.frobenius_norm();
            if deviation > Tolerances::scaled(tol.comm, scale) {
                return Err(AlgebraError::NotCommuting {
                    first: a,
                    second: b,
                    deviation,
                });
            }
        }
    }

    let mut blocks: Vec<CMatrix> = vec![CMatrix::identity(d, d)];
    for o in observables {
        let m = o.components();
        let eigs: Vec<(Vec<f64>, CMatrix)> = blocks
            .iter()
            .map(|v| {
                let h = v.adjoint() * m * v;
                let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
                let eig = SymmetricEigen::new(h);
                (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
            })
            .collect();
        let (lo, hi) = eigs
            .iter()
            .flat_map(|(vals, _)| vals.iter().copied())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        let band = Tolerances::scaled(tol.deg, hi - lo);

        let mut refined = Vec::with_capacity(d);
        for (v, (vals, vecs)) in blocks.iter().zip(eigs) {
            for group in group_descending(&vals, band) {
                let sub = CMatrix::from_columns(
                    &group.iter().map(|&i| vecs.column(i).into_owned()).collect::<Vec<_>>(),
                );
                refined.push(v * sub);
            }
        }
        blocks = refined;
    }

    let mut columns = CMatrix::zeros(d, d);
    let mut next = 0;
    for block in &blocks {
        for c in block.column_iter() {
            let mut v = c.into_owned();
            fix_phase(&mut v);
            columns.set_column(next, &v);
            next += 1;
        }
    }
    let basis = ProjectorBasis { columns };
    let labels = (0..d)
        .map(|j| {
            let v = basis.columns.column(j);
            observables
                .iter()
                .map(|o| (v.adjoint() * o.components() * v)[(0, 0)].re)
                .collect()
        })
        .collect();
    Ok(CompatibleBasis { basis, labels })
}

/// Groups eigenvalue indices, sorted in descending order, into runs whose
/// consecutive gaps stay within `band`.
pub(crate) fn group_descending(values: &[f64], band: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if values[*g.last().unwrap()] - values[i] <= band => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// Rotates `v` so that its first largest-magnitude entry is real positive.
pub(crate) fn fix_phase(v: &mut CVector) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let anchor = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-9))
        .expect("max attained");
    let z = v[anchor];
    let phase = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x *= phase;
    }
    v[anchor] = Complex64::new(v[anchor].re, 0.0);
}

fn gram_deviation(columns: &CMatrix) -> f64 {
    let d = columns.ncols();
    let gram = columns.adjoint() * columns;
    let mut worst = 0.0f64;
    for j in 0..d {
        for k in 0..d {
            let target = if j == k { ONE } else { ZERO };
            worst = worst.max((gram[(j, k)] - target).norm());
        }
    }
    worst
}

pub(crate) fn frob(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
