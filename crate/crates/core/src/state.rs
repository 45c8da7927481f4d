//! Validated two-qubit pure states and density matrices.

use crate::error::StateError;
use crate::linalg::{hermitian_eig, Ket4, Mat4, C64};

/// Tolerance on `Σ|aᵢ|² = 1`.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on hermiticity and unit trace of a density matrix.
pub const DENSITY_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a density matrix.
pub const DENSITY_EIG_TOL: f64 = 1e-10;

/// Normalized two-qubit state vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState(Ket4);

impl PureState {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self, StateError> {
        Self::from_ket(Ket4::new(amplitudes))
    }

    pub fn from_ket(ket: Ket4) -> Result<Self, StateError> {
        let norm_sqr = ket.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL || !norm_sqr.is_finite() {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        Ok(PureState(ket))
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(ket: Ket4) -> Result<Self, StateError> {
        let norm_sqr = ket.norm_sqr();
        if !(norm_sqr > 0.0 && norm_sqr.is_finite()) {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        Ok(PureState(ket.scale(C64::new(1.0 / libm::sqrt(norm_sqr), 0.0))))
    }

    pub fn ket(&self) -> &Ket4 {
        &self.0
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix(self.0.outer())
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap_sqr(&self, other: &PureState) -> f64 {
        self.0.inner(&other.0).norm_sqr()
    }
}

/// Hermitian, unit-trace, positive semidefinite 4×4 operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    /// Validates hermiticity, trace and positivity.
    pub fn new(m: Mat4) -> Result<Self, StateError> {
        let herm = m.hermiticity_residual();
        if !herm.is_finite() || herm > DENSITY_TOL {
            return Err(StateError::Linalg(crate::error::LinalgError::NotHermitian { residual: herm }));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(StateError::BadTrace { trace: trace.re });
        }
        let eig = hermitian_eig(&m)?;
        if eig.values[0] < -DENSITY_EIG_TOL {
            return Err(StateError::Linalg(crate::error::LinalgError::NotPositiveSemidefinite {
                min_eigenvalue: eig.values[0],
            }));
        }
        Ok(DensityMatrix(m))
    }

    /// Wraps an operator produced by a trace-preserving map of a valid state.
    pub(crate) fn new_unchecked(m: Mat4) -> Self {
        DensityMatrix(m)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Mat4::identity() * 0.25)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).re
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &PureState) -> f64 {
        self.0.expectation(psi.ket()).re
    }

    /// `UρU†`.
    pub fn evolve(&self, u: &Mat4) -> Self {
        DensityMatrix(u.conjugate(&self.0))
    }
}

impl From<PureState> for DensityMatrix {
    fn from(psi: PureState) -> Self {
        psi.to_density()
    }
}
