//! Seeded random generators for test and verification sweeps.
//!
//! All streams are `ChaCha8Rng`. Independent per-task streams come from
//! [`derive_seed`], so parallel sweeps reduce to the same result as
//! sequential ones.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{CMatrix, CVector, Observable, PseudoObservable};
use crate::bases::ProjectorBasis;

pub type StdRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StdRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 mix of `root` and `index`.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector {
    DVector::from_fn(d, |_, _| complex_gaussian(rng))
}

/// Unit vector, uniform on the complex sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector {
    loop {
        let v = gaussian_vector(rng, d);
        let n = v.norm();
        if n > 1e-6 {
            return v / Complex64::new(n, 0.0);
        }
    }
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> PseudoObservable {
    let qr = gaussian_matrix(rng, d).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    PseudoObservable::from_matrix_unchecked(q)
}

pub fn random_pseudo<R: Rng + ?Sized>(rng: &mut R, d: usize) -> PseudoObservable {
    PseudoObservable::from_matrix_unchecked(gaussian_matrix(rng, d))
}

/// `(G + G†)/2` for a Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Observable {
    let g = gaussian_matrix(rng, d);
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    Observable::from_hermitian_unchecked(PseudoObservable::from_matrix_unchecked(h))
}

/// `G G†`, positive semidefinite.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Observable {
    let g = gaussian_matrix(rng, d);
    let h = &g * g.adjoint();
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    Observable::from_hermitian_unchecked(PseudoObservable::from_matrix_unchecked(h))
}

pub fn random_basis<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ProjectorBasis {
    ProjectorBasis::from_columns_unchecked(haar_unitary(rng, d).into_matrix())
}

/// Uniform on the probability simplex.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// `n` observables `U diag(λ_r) U†` sharing one Haar `U`.
pub fn random_commuting_family<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> (Vec<Observable>, PseudoObservable) {
    let u = haar_unitary(rng, d);
    let family = (0..n)
        .map(|_| {
            let diag = CMatrix::from_diagonal(&DVector::from_fn(d, |_, _| {
                Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0)
            }));
            let m = u.components() * diag * u.components().adjoint();
            let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
            Observable::from_hermitian_unchecked(PseudoObservable::from_matrix_unchecked(m))
        })
        .collect();
    (family, u)
}

/// Random real phases in `[0, 2π)`.
pub fn random_phases<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d)
        .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
        .collect()
}
