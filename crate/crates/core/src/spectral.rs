//! Trace and inner-product functionals, spectral decomposition of
//! observables and eigenvector checks.

use num_complex::Complex64;

use crate::algebra::{CMatrix, Observable, PseudoObservable};
use crate::bases::{complete_compatible_basis, group_descending, ProjectorBasis};
use crate::error::{AlgebraError, Result};
use crate::tolerance::Tolerances;

/// Sum of the diagonal components.
pub fn trace(z: &PseudoObservable) -> Complex64 {
    z.components().trace()
}

/// `⟨X, Y⟩ = tr(X† Y)`, anti-linear in the left argument.
pub fn inner(x: &PseudoObservable, y: &PseudoObservable) -> Result<Complex64> {
    if x.dim() != y.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(x.components()
        .iter()
        .zip(y.components().iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// `sqrt(⟨X, X⟩)`.
pub fn norm(x: &PseudoObservable) -> f64 {
    x.frobenius_norm()
}

/// `O = Σ_j o_j I_j` together with its distinct spectrum and multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub basis: ProjectorBasis,
    /// Spectral coefficients in basis order (descending).
    pub coefficients: Vec<f64>,
    /// Distinct values with multiplicity, descending.
    pub distinct: Vec<(f64, usize)>,
    band: f64,
}

impl SpectralDecomposition {
    /// `Σ_j o_j I_j`.
    pub fn reconstruct(&self) -> PseudoObservable {
        let cols = self.basis.columns();
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.coefficients.len(),
            self.coefficients.iter().map(|&o| Complex64::new(o, 0.0)),
        ));
        PseudoObservable::from_matrix_unchecked(cols * diag * cols.adjoint())
    }

    /// Multiplicity of `value`, or `None` if it is not in the spectrum.
    pub fn multiplicity(&self, value: f64) -> Option<usize> {
        self.locate(value).map(|i| self.distinct[i].1)
    }

    fn locate(&self, value: f64) -> Option<usize> {
        self.distinct
            .iter()
            .position(|&(o, _)| (o - value).abs() <= self.band)
    }

    /// Basis indices `j` whose coefficient matches `value`.
    pub fn indices_of(&self, value: f64) -> Vec<usize> {
        match self.locate(value) {
            Some(i) => {
                let target = self.distinct[i].0;
                self.coefficients
                    .iter()
                    .enumerate()
                    .filter(|(_, &o)| (o - target).abs() <= self.band)
                    .map(|(j, _)| j)
                    .collect()
            }
            None => Vec::new(),
        }
    }

    /// The distinct spectral value matching `value` within the grouping band.
    pub fn snap(&self, value: f64) -> Option<f64> {
        self.locate(value).map(|i| self.distinct[i].0)
    }

    /// Bilateral eigenspace `𝔄(o', o'')`: dyads `Γ_jk` with `o_j = o'`, `o_k = o''`.
    pub fn bilateral_eigenspace(&self, left: f64, right: f64) -> Result<BilateralEigenspace> {
        let rows = self.indices_of(left);
        if rows.is_empty() {
            return Err(AlgebraError::NotInSpectrum { value: left });
        }
        let cols = self.indices_of(right);
        if cols.is_empty() {
            return Err(AlgebraError::NotInSpectrum { value: right });
        }
        let dyad_indices: Vec<(usize, usize)> = rows
            .iter()
            .flat_map(|&j| cols.iter().map(move |&k| (j, k)))
            .collect();
        Ok(BilateralEigenspace {
            pair: (left, right),
            dimension: dyad_indices.len(),
            dyad_indices,
        })
    }
}

/// The span of dyads that are right eigenvectors for `o'` and left
/// eigenvectors for `o''`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilateralEigenspace {
    pub pair: (f64, f64),
    pub dyad_indices: Vec<(usize, usize)>,
    pub dimension: usize,
}

/// Spectral decomposition of an observable, coefficients in descending order.
pub fn decompose(o: &Observable, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let compatible = complete_compatible_basis(std::slice::from_ref(o), tol)?;
    let coefficients = compatible.coefficients(0);
    let (lo, hi) = coefficients
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let band = Tolerances::scaled(tol.deg, hi - lo);
    let distinct = group_descending(&coefficients, band)
        .into_iter()
        .map(|g| {
            let mean = g.iter().map(|&i| coefficients[i]).sum::<f64>() / g.len() as f64;
            (mean, g.len())
        })
        .collect();
    Ok(SpectralDecomposition {
        basis: compatible.basis,
        coefficients,
        distinct,
        band,
    })
}

/// `dim 𝔄(o', o'') = m_{o'} m_{o''}`.
pub fn bilateral_eigenspace(o: &Observable, left: f64, right: f64, tol: &Tolerances) -> Result<BilateralEigenspace> {
    decompose(o, tol)?.bilateral_eigenspace(left, right)
}

#[derive(Clone, Copy)]
enum Side {
    Right,
    Left,
}

fn check_eigenvector(o: &Observable, phi: &PseudoObservable, side: Side, tol: &Tolerances) -> Result<Option<f64>> {
    if o.dim() != phi.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: o.dim(),
            found: phi.dim(),
        });
    }
    let phi_norm = norm(phi);
    if phi_norm == 0.0 {
        return Err(AlgebraError::ZeroInput);
    }
    let image = match side {
        Side::Right => o.as_pseudo().mul(phi)?,
        Side::Left => phi.mul(o.as_pseudo())?,
    };
    let omega = inner(phi, &image)?.re / (phi_norm * phi_norm);
    let residual = image.sub(&phi.scale(Complex64::new(omega, 0.0)))?;
    let scale = o.as_pseudo().frobenius_norm().max(1.0);
    if norm(&residual) > tol.eig * scale * phi_norm {
        return Ok(None);
    }
    Ok(decompose(o, tol)?.snap(omega))
}

/// The right eigenvalue `ω` with `OΦ = ωΦ`, if `Φ` is a right eigenvector.
pub fn check_right_eigenvector(o: &Observable, phi: &PseudoObservable, tol: &Tolerances) -> Result<Option<f64>> {
    check_eigenvector(o, phi, Side::Right, tol)
}

/// The left eigenvalue `ω` with `ΦO = ωΦ`, if `Φ` is a left eigenvector.
pub fn check_left_eigenvector(o: &Observable, phi: &PseudoObservable, tol: &Tolerances) -> Result<Option<f64>> {
    check_eigenvector(o, phi, Side::Left, tol)
}

/// `φ(O) = Σ_j φ(o_j) I_j`. `f` is only ever evaluated on the spectrum.
pub fn apply_function<F>(o: &Observable, f: F, tol: &Tolerances) -> Result<PseudoObservable>
where
    F: Fn(f64) -> Complex64,
{
    let spectral = decompose(o, tol)?;
    let cols = spectral.basis.columns();
    let values = nalgebra::DVector::from_iterator(
        spectral.coefficients.len(),
        spectral.coefficients.iter().map(|&x| f(spectral.snap(x).unwrap_or(x))),
    );
    PseudoObservable::from_matrix(cols * CMatrix::from_diagonal(&values) * cols.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::DyadBasis;
    use crate::random::{haar_unitary, random_basis, random_hermitian, random_pseudo, rng};

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn x() -> Observable {
        Observable::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn z() -> Observable {
        Observable::real_diagonal(&[1.0, -1.0]).unwrap()
    }

    fn hadamard_columns() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(S, 0.0), c(S, 0.0), c(S, 0.0), c(-S, 0.0)])
    }

    #[test]
    fn decompose_examples() {
        let tol = Tolerances::default();
        let id = decompose(&Observable::identity(3), &tol).unwrap();
        assert_eq!(id.distinct, vec![(1.0, 3)]);
        let dz = decompose(&z(), &tol).unwrap();
        assert_eq!(dz.distinct, vec![(1.0, 1), (-1.0, 1)]);
        assert_eq!(dz.basis, ProjectorBasis::computational(2));
        let dx = decompose(&x(), &tol).unwrap();
        assert_eq!(dx.distinct.len(), 2);
        assert!((dx.distinct[0].0 - 1.0).abs() < 1e-15 && (dx.distinct[1].0 + 1.0).abs() < 1e-15);
        assert!(crate::bases::frob(&(dx.basis.columns() - hadamard_columns())) <= 1e-15);
        let skew = Observable::from_hermitian_unchecked(PseudoObservable::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap());
        assert!(matches!(decompose(&skew, &tol), Err(AlgebraError::NotHermitian { .. })));
    }

    #[test]
    fn reconstruction_and_dyad_eigenvectors() {
        let tol = Tolerances::default();
        let mut r = rng(1);
        for d in [1, 2, 4, 8, 16] {
            let o = random_hermitian(&mut r, d);
            let spectral = decompose(&o, &tol).unwrap();
            assert!(spectral.reconstruct().distance(o.as_pseudo()).unwrap() <= 1e-9);
            assert_eq!(spectral.distinct.iter().map(|&(_, m)| m).sum::<usize>(), d);
            for w in spectral.distinct.windows(2) {
                assert!(w[0].0 - w[1].0 > tol.deg);
            }
            let dyads = DyadBasis::new(spectral.basis.clone());
            for j in 0..d {
                for k in 0..d {
                    let g = dyads.dyad(j, k).unwrap();
                    let right = o.as_pseudo().mul(&g).unwrap();
                    let left = g.mul(o.as_pseudo()).unwrap();
                    let oj = c(spectral.coefficients[j], 0.0);
                    let ok = c(spectral.coefficients[k], 0.0);
                    assert!(right.distance(&g.scale(oj)).unwrap() <= 1e-9);
                    assert!(left.distance(&g.scale(ok)).unwrap() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn spectrum_is_conjugation_invariant() {
        let tol = Tolerances::default();
        let mut r = rng(2);
        for d in [2, 5, 9] {
            let o = random_hermitian(&mut r, d);
            let u = haar_unitary(&mut r, d);
            let rotated = Observable::new(u.mul(o.as_pseudo()).unwrap().mul(&u.dagger()).unwrap()).unwrap();
            let a = decompose(&o, &tol).unwrap().coefficients;
            let b = decompose(&rotated, &tol).unwrap().coefficients;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn bilateral_eigenspace_examples() {
        let tol = Tolerances::default();
        let id = bilateral_eigenspace(&Observable::identity(2), 1.0, 1.0, &tol).unwrap();
        assert_eq!(id.dimension, 4);
        let z = bilateral_eigenspace(&z(), 1.0, -1.0, &tol).unwrap();
        assert_eq!((z.dimension, z.dyad_indices), (1, vec![(0, 1)]));
        let diag = Observable::real_diagonal(&[5.0, 5.0, 2.0]).unwrap();
        let space = bilateral_eigenspace(&diag, 5.0, 2.0, &tol).unwrap();
        assert_eq!(space.dimension, 2);
        assert_eq!(bilateral_eigenspace(&diag, 5.0, 5.0, &tol).unwrap().dimension, 4);
        assert_eq!(
            bilateral_eigenspace(&diag, 3.0, 2.0, &tol),
            Err(AlgebraError::NotInSpectrum { value: 3.0 })
        );
    }

    #[test]
    fn eigenvector_checks() {
        let tol = Tolerances::default();
        let g01 = PseudoObservable::dyad(2, 0, 1).unwrap();
        assert_eq!(check_right_eigenvector(&z(), &g01, &tol).unwrap(), Some(1.0));
        assert_eq!(check_left_eigenvector(&z(), &g01, &tol).unwrap(), Some(-1.0));
        let mixed = PseudoObservable::dyad(2, 0, 0).unwrap().add(&PseudoObservable::dyad(2, 1, 0).unwrap()).unwrap();
        assert_eq!(check_right_eigenvector(&z(), &mixed, &tol).unwrap(), None);
        let plus = PseudoObservable::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let omega = check_right_eigenvector(&x(), &plus, &tol).unwrap().unwrap();
        assert!((omega - 1.0).abs() <= 1e-15);
        assert_eq!(check_right_eigenvector(&x(), &PseudoObservable::zeros(2), &tol), Err(AlgebraError::ZeroInput));
    }

    #[test]
    fn apply_function_examples() {
        let tol = Tolerances::default();
        let mut r = rng(3);
        let o = random_hermitian(&mut r, 4);
        let same = apply_function(&o, |v| c(v, 0.0), &tol).unwrap();
        assert!(same.distance(o.as_pseudo()).unwrap() <= 1e-12);
        let squared = apply_function(&z(), |v| c(v * v, 0.0), &tol).unwrap();
        assert_eq!(squared, PseudoObservable::identity(2));
        let phase = apply_function(&Observable::real_diagonal(&[0.0, std::f64::consts::PI]).unwrap(), |v| Complex64::from_polar(1.0, v), &tol).unwrap();
        assert!(phase.distance(&PseudoObservable::real_diagonal(&[1.0, -1.0]).unwrap()).unwrap() <= 1e-15);
        let spectral = decompose(&o, &tol).unwrap();
        let cubed = apply_function(&o, |v| c(v * v * v, v), &tol).unwrap();
        for (j, &oj) in spectral.coefficients.iter().enumerate() {
            let psi = DyadBasis::new(spectral.basis.clone()).dyad(j, 0).unwrap();
            let expected = psi.scale(c(oj * oj * oj, oj));
            assert!(cubed.mul(&psi).unwrap().distance(&expected).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn trace_examples() {
        for (j, k) in [(0, 0), (0, 1), (2, 2)] {
            let expected = if j == k { 1.0 } else { 0.0 };
            assert_eq!(trace(&PseudoObservable::dyad(3, j, k).unwrap()), c(expected, 0.0));
        }
        let mut r = rng(4);
        let basis = random_basis(&mut r, 5);
        assert!((trace(basis.projector(3).unwrap().as_pseudo()) - c(1.0, 0.0)).norm() <= 1e-12);
        let mut sum = PseudoObservable::zeros(5);
        for j in 0..3 {
            sum = sum.add(basis.projector(j).unwrap().as_pseudo()).unwrap();
        }
        assert!((trace(&sum) - c(3.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn inner_and_norm_examples() {
        let tol = Tolerances::default();
        let plus = decompose(&x(), &tol).unwrap().basis.projector(0).unwrap();
        let i0 = ProjectorBasis::computational(2).projector(0).unwrap();
        assert!((inner(i0.as_pseudo(), plus.as_pseudo()).unwrap() - c(0.5, 0.0)).norm() <= 1e-15);
        assert_eq!(inner(&PseudoObservable::zeros(3), &PseudoObservable::zeros(3)).unwrap(), c(0.0, 0.0));
        assert_eq!(norm(&PseudoObservable::dyad(4, 1, 3).unwrap()), 1.0);
        assert!((norm(&PseudoObservable::identity(7)) - 7f64.sqrt()).abs() < 1e-15);
        assert_eq!(norm(&PseudoObservable::zeros(2)), 0.0);
        assert!(matches!(
            inner(&PseudoObservable::zeros(2), &PseudoObservable::zeros(3)),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inner_product_identities() {
        let mut r = rng(5);
        for d in [2, 4, 6] {
            let (x, y, w) = (random_pseudo(&mut r, d), random_pseudo(&mut r, d), random_pseudo(&mut r, d));
            let lhs = inner(&x, &y.mul(&w).unwrap()).unwrap();
            let rhs = inner(&y.dagger().mul(&x).unwrap(), &w).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10);
            let swapped = inner(&y.dagger(), &x.dagger()).unwrap();
            assert!((inner(&x, &y).unwrap() - swapped).norm() <= 1e-10);
            assert!((inner(&x, &y).unwrap() - inner(&y, &x).unwrap().conj()).norm() <= 1e-12);
            assert!(inner(&x, &y).unwrap().norm() <= norm(&x) * norm(&y) + 1e-12);
        }
    }
}
