//! Numerical tolerance bands.
//!
//! Every check in the crate compares a residual against one of these bands.
//! Matrix residuals are compared against `band * max(1, ||X||)` where `X` is
//! the quantity being checked, see [`Tolerances::scaled`].

/// Tolerance bands used by validation and property checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity: max |z_jk - conj(z_kj)|.
    pub herm: f64,
    /// Idempotency: ||J^2 - J||.
    pub idem: f64,
    /// Trace of an elementary projector versus 1.
    pub trace: f64,
    /// Orthonormality and closure of bases, orthonormality of dyads.
    pub orth: f64,
    /// Unitarity of basis changes and state-vector factors.
    pub unit: f64,
    /// Eigenvalue grouping band.
    pub deg: f64,
    /// Right/left eigenvector residual.
    pub eig: f64,
    /// Commutation of observable families.
    pub comm: f64,
    /// State-vector set identities.
    pub sv: f64,
    /// Conclusion band of the elementary-projector lemma.
    pub lemma: f64,
    /// Span membership and linear independence.
    pub lin: f64,
    /// Probability distribution validation.
    pub prob: f64,
    /// Normalization of eigenstate-space elements.
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-9,
            idem: 1e-9,
            trace: 1e-9,
            orth: 1e-9,
            unit: 1e-9,
            deg: 1e-8,
            eig: 1e-8,
            comm: 1e-9,
            sv: 1e-9,
            lemma: 1e-9,
            lin: 1e-10,
            prob: 1e-9,
            norm: 1e-9,
        }
    }
}

impl Tolerances {
    /// Every band multiplied by `factor`.
    pub fn scaled_by(&self, factor: f64) -> Self {
        Self {
            herm: self.herm * factor,
            idem: self.idem * factor,
            trace: self.trace * factor,
            orth: self.orth * factor,
            unit: self.unit * factor,
            deg: self.deg * factor,
            eig: self.eig * factor,
            comm: self.comm * factor,
            sv: self.sv * factor,
            lemma: self.lemma * factor,
            lin: self.lin * factor,
            prob: self.prob * factor,
            norm: self.norm * factor,
        }
    }

    /// Band `eps` widened for quantities of magnitude above one.
    pub fn scaled(eps: f64, magnitude: f64) -> f64 {
        eps * magnitude.max(1.0)
    }
}
