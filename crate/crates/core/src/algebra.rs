//! The carrier algebra of pseudo-observables.
//!
//! A [`PseudoObservable`] is stored as its component matrix relative to the
//! computational dyad basis `Γ_jk = e_j e_k†`. Any other basis is data (a
//! [`DyadBasis`]) and components relative to it are obtained with
//! [`component`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::bases::DyadBasis;
use crate::error::{AlgebraError, Result};
use crate::tolerance::Tolerances;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// A general element of the algebra: a `d × d` complex component matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoObservable {
    components: CMatrix,
}

impl PseudoObservable {
    /// Wraps a square, finite, non-empty component matrix.
    pub fn from_matrix(components: CMatrix) -> Result<Self> {
        let (rows, cols) = components.shape();
        if rows == 0 || cols == 0 {
            return Err(AlgebraError::EmptyDimension);
        }
        if rows != cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: rows,
                found: cols,
            });
        }
        for c in 0..cols {
            for r in 0..rows {
                let z = components[(r, c)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(AlgebraError::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self { components })
    }

    pub(crate) fn from_matrix_unchecked(components: CMatrix) -> Self {
        debug_assert!(components.is_square() && components.nrows() > 0);
        Self { components }
    }

    /// Builds from row-major rows; every row must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(AlgebraError::EmptyDimension);
        }
        for row in rows {
            if row.len() != d {
                return Err(AlgebraError::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
        }
        Self::from_matrix(DMatrix::from_fn(d, d, |r, c| rows[r][c]))
    }

    /// Builds from real row-major rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self::from_matrix_unchecked(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self::from_matrix_unchecked(DMatrix::identity(dim, dim))
    }

    /// The constant `c · 1`.
    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::identity(dim).scale(c)
    }

    /// Diagonal element `Σ_j c_j Γ_jj` of the computational basis.
    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        if entries.is_empty() {
            return Err(AlgebraError::EmptyDimension);
        }
        Self::from_matrix(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn real_diagonal(entries: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diagonal(&entries)
    }

    /// Computational dyad `Γ_jk = e_j e_k†`.
    pub fn dyad(dim: usize, j: usize, k: usize) -> Result<Self> {
        check_index(j, dim)?;
        check_index(k, dim)?;
        let mut m = DMatrix::zeros(dim, dim);
        m[(j, k)] = ONE;
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Outer product `u v†`.
    pub fn outer(u: &CVector, v: &CVector) -> Result<Self> {
        if u.len() != v.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        Self::from_matrix(u * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.components.nrows()
    }

    pub fn components(&self) -> &CMatrix {
        &self.components
    }

    pub fn into_matrix(self) -> CMatrix {
        self.components
    }

    pub fn entry(&self, j: usize, k: usize) -> Result<Complex64> {
        check_index(j, self.dim())?;
        check_index(k, self.dim())?;
        Ok(self.components[(j, k)])
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self::from_matrix_unchecked(&self.components + &other.components))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self::from_matrix_unchecked(&self.components - &other.components))
    }

    /// Product in the algebra: `ζ_jk = Σ_l ϖ_jl θ_lk`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self::from_matrix_unchecked(&self.components * &other.components))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_matrix_unchecked(&self.components * c)
    }

    /// Transposition `Z†` (conjugate transpose of the components).
    pub fn dagger(&self) -> Self {
        Self::from_matrix_unchecked(self.components.adjoint())
    }

    /// `XY - YX`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let xy = &self.components * &other.components;
        let yx = &other.components * &self.components;
        Ok(Self::from_matrix_unchecked(xy - yx))
    }

    /// Splits `Z = Z_R + i Z_I` with `Z_R = (Z + Z†)/2` and `Z_I = (Z - Z†)/(2i)`.
    /// Both parts are Hermitian by construction.
    pub fn real_imag_parts(&self) -> (Observable, Observable) {
        let adj = self.components.adjoint();
        let re = (&self.components + &adj) * Complex64::new(0.5, 0.0);
        let im = (&self.components - &adj) * Complex64::new(0.0, -0.5);
        (
            Observable::from_hermitian_unchecked(Self::from_matrix_unchecked(re)),
            Observable::from_hermitian_unchecked(Self::from_matrix_unchecked(im)),
        )
    }

    /// Largest component magnitude.
    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of the component matrix (the inner-product norm).
    pub fn frobenius_norm(&self) -> f64 {
        self.components.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||self - other||` in the inner-product norm.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// max |z_jk - conj(z_kj)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            for k in j..d {
                let dev = (self.components[(j, k)] - self.components[(k, j)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.hermitian_deviation() <= Tolerances::scaled(eps, self.frobenius_norm())
    }

    /// `||Z Z† - 1||`.
    pub fn unitary_deviation(&self) -> f64 {
        let d = self.dim();
        let prod = &self.components * self.components.adjoint();
        (prod - CMatrix::identity(d, d))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_unitary(&self, eps: f64) -> bool {
        self.unitary_deviation() <= eps
    }

    pub(crate) fn require_unitary(&self, eps: f64) -> Result<()> {
        let deviation = self.unitary_deviation();
        if deviation > eps {
            return Err(AlgebraError::NotUnitary { deviation });
        }
        Ok(())
    }
}

/// A Hermitian pseudo-observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable(PseudoObservable);

impl Observable {
    /// Validates Hermiticity against the default band.
    pub fn new(p: PseudoObservable) -> Result<Self> {
        Self::with_tolerance(p, Tolerances::default().herm)
    }

    pub fn with_tolerance(p: PseudoObservable, eps_herm: f64) -> Result<Self> {
        let deviation = p.hermitian_deviation();
        if deviation > Tolerances::scaled(eps_herm, p.frobenius_norm()) {
            return Err(AlgebraError::NotHermitian { deviation });
        }
        Ok(Self(p))
    }

    pub(crate) fn from_hermitian_unchecked(p: PseudoObservable) -> Self {
        Self(p)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(PseudoObservable::from_real_rows(rows)?)
    }

    pub fn real_diagonal(entries: &[f64]) -> Result<Self> {
        Ok(Self(PseudoObservable::real_diagonal(entries)?))
    }

    pub fn identity(dim: usize) -> Self {
        Self(PseudoObservable::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(PseudoObservable::zeros(dim))
    }

    /// The real constant `c · 1`.
    pub fn constant(dim: usize, c: f64) -> Self {
        Self(PseudoObservable::constant(dim, Complex64::new(c, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_pseudo(&self) -> &PseudoObservable {
        &self.0
    }

    pub fn into_pseudo(self) -> PseudoObservable {
        self.0
    }

    pub fn components(&self) -> &CMatrix {
        self.0.components()
    }

    /// Real linear combination, which stays Hermitian.
    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.sub(&other.0)?))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self(self.0.scale(Complex64::new(c, 0.0)))
    }
}

impl AsRef<PseudoObservable> for Observable {
    fn as_ref(&self) -> &PseudoObservable {
        &self.0
    }
}

/// A Hermitian idempotent pseudo-observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector(Observable);

impl Projector {
    pub fn new(o: Observable) -> Result<Self> {
        Self::with_tolerance(o, Tolerances::default().idem)
    }

    pub fn with_tolerance(o: Observable, eps_idem: f64) -> Result<Self> {
        let m = o.components();
        let deviation = (m * m - m).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if deviation > Tolerances::scaled(eps_idem, o.as_pseudo().frobenius_norm()) {
            return Err(AlgebraError::NotIdempotent { deviation });
        }
        Ok(Self(o))
    }

    /// Rank-one projector `v v† / ||v||²`.
    pub fn from_vector(v: &CVector) -> Result<Self> {
        let n2 = v.norm_squared();
        if n2 == 0.0 {
            return Err(AlgebraError::ZeroInput);
        }
        let p = PseudoObservable::from_matrix(v * v.adjoint() / Complex64::new(n2, 0.0))?;
        Ok(Self(Observable(p)))
    }

    pub(crate) fn from_projector_unchecked(p: PseudoObservable) -> Self {
        Self(Observable(p))
    }

    pub fn trace(&self) -> f64 {
        self.0.components().trace().re
    }

    /// Elementary iff the trace is one.
    pub fn is_elementary(&self, eps_tr: f64) -> bool {
        (self.trace() - 1.0).abs() <= eps_tr
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_observable(&self) -> &Observable {
        &self.0
    }

    pub fn as_pseudo(&self) -> &PseudoObservable {
        self.0.as_pseudo()
    }

    pub fn components(&self) -> &CMatrix {
        self.0.components()
    }
}

impl AsRef<PseudoObservable> for Projector {
    fn as_ref(&self) -> &PseudoObservable {
        self.0.as_pseudo()
    }
}

pub(crate) fn check_index(index: usize, dim: usize) -> Result<()> {
    if index >= dim {
        return Err(AlgebraError::IndexOutOfRange { index, dim });
    }
    Ok(())
}

/// Component `ϖ_jk = ⟨Γ_jk, P⟩ = tr(Γ_kj P)` of `P` relative to `basis`.
pub fn component(p: &PseudoObservable, j: usize, k: usize, basis: &DyadBasis) -> Result<Complex64> {
    if p.dim() != basis.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: basis.dim(),
            found: p.dim(),
        });
    }
    let gamma_kj = basis.dyad(k, j)?;
    Ok(crate::spectral::trace(&gamma_kj.mul(p)?))
}

/// All components of `p` relative to `basis`, as a matrix indexed `(j, k)`.
pub fn components_in(p: &PseudoObservable, basis: &DyadBasis) -> Result<CMatrix> {
    let d = basis.dim();
    let mut out = CMatrix::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            out[(j, k)] = component(p, j, k, basis)?;
        }
    }
    Ok(out)
}

/// Inverse of [`components_in`]: `Σ_jk ϖ_jk Γ_jk`.
pub fn reconstruct(components: &CMatrix, basis: &DyadBasis) -> Result<PseudoObservable> {
    let d = basis.dim();
    if components.nrows() != d || components.ncols() != d {
        return Err(AlgebraError::DimensionMismatch {
            expected: d,
            found: components.nrows(),
        });
    }
    let mut acc = CMatrix::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            acc += basis.dyad(j, k)?.components() * components[(j, k)];
        }
    }
    PseudoObservable::from_matrix(acc)
}
