//! Noise models: the symmetric two-qubit depolarizing channel and coherent
//! controlled-phase over-rotations.

use rand_core::RngCore;
use rand_distr::{Distribution, StandardNormal};

use crate::decomposition::{DecompositionKind, ErrorAngle};
use crate::error::{NoiseError, StateError};
use crate::gates::{cp, cz, embed, hadamard, pauli, r_z, Pauli, Qubit};
use crate::linalg::{kron, Mat4, C64, ZERO};
use crate::state::DensityMatrix;

/// Name of the Gaussian sampler, recorded in run metadata.
pub const GAUSSIAN_SAMPLER: &str = "rand_distr::StandardNormal (ziggurat)";

/// A Pauli string `P₁⊗P₂` scaled by a weight, stored as a monomial matrix:
/// row `r` has its only nonzero entry `coeff[r]` in column `col[r]`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Monomial {
    col: [usize; 4],
    coeff: [C64; 4],
}

impl Monomial {
    fn from_matrix(m: &Mat4) -> Self {
        let mut col = [0; 4];
        let mut coeff = [ZERO; 4];
        for r in 0..4 {
            for k in 0..4 {
                if m[(r, k)] != ZERO {
                    col[r] = k;
                    coeff[r] = m[(r, k)];
                }
            }
        }
        Monomial { col, coeff }
    }

    /// Adds `K·ρ·K†` into `out`.
    fn accumulate(&self, rho: &Mat4, out: &mut Mat4) {
        for r in 0..4 {
            let a = self.coeff[r];
            if a == ZERO {
                continue;
            }
            for k in 0..4 {
                out[(r, k)] += a * rho[(self.col[r], self.col[k])] * self.coeff[k].conj();
            }
        }
    }
}

/// `ℰ(ρ) = Σᵢ (mᵢKᵢ) ρ (mᵢKᵢ)†` with `Kᵢ = ω_{⌊i/4⌋} ⊗ ω_{i mod 4}`,
/// `ω = (I, X, Y, Z)`, `m₀ = √(1 − 15p/16)` and `mᵢ = √(p/16)` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct DepolarizingChannel {
    p: f64,
    weights: [f64; 16],
    ops: [Mat4; 16],
    sparse: [Monomial; 16],
}

/// The unweighted Pauli string for Kraus index `i`.
pub fn pauli_kraus(i: usize) -> Mat4 {
    kron(&pauli(Pauli::ALL[i / 4]), &pauli(Pauli::ALL[i % 4]))
}

pub fn make_depolarizing(p: f64) -> Result<DepolarizingChannel, NoiseError> {
    DepolarizingChannel::new(p)
}

impl DepolarizingChannel {
    pub fn new(p: f64) -> Result<Self, NoiseError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(NoiseError::ProbabilityOutOfRange(p));
        }
        let rest = libm::sqrt(p / 16.0);
        let mut weights = [rest; 16];
        weights[0] = libm::sqrt(1.0 - 15.0 * p / 16.0);
        Ok(Self::from_weights(p, weights))
    }

    /// Builds the channel from explicit Kraus weights without checking
    /// completeness. `p` is kept only as the nominal parameter.
    pub fn from_weights(p: f64, weights: [f64; 16]) -> Self {
        let ops: [Mat4; 16] = core::array::from_fn(|i| pauli_kraus(i) * weights[i]);
        let sparse = core::array::from_fn(|i| Monomial::from_matrix(&ops[i]));
        DepolarizingChannel { p, weights, ops, sparse }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> &[f64; 16] {
        &self.weights
    }

    /// The weighted Kraus operators `mᵢKᵢ`.
    pub fn kraus_ops(&self) -> &[Mat4; 16] {
        &self.ops
    }

    /// `max|Σ (mᵢKᵢ)†(mᵢKᵢ) − I|`.
    pub fn completeness_residual(&self) -> f64 {
        let sum = self.ops.iter().fold(Mat4::zeros(), |acc, k| acc + k.adjoint() * *k);
        sum.max_abs_diff(&Mat4::identity())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.apply_raw(rho.matrix()))
    }

    /// Validates `rho` as a density matrix, then applies the channel.
    pub fn apply_matrix(&self, rho: &Mat4) -> Result<DensityMatrix, StateError> {
        Ok(self.apply(&DensityMatrix::new(*rho)?))
    }

    /// Kraus sum on a raw operator, exploiting that every `Kᵢ` is monomial.
    pub(crate) fn apply_raw(&self, rho: &Mat4) -> Mat4 {
        let mut out = Mat4::zeros();
        for op in &self.sparse {
            op.accumulate(rho, &mut out);
        }
        out
    }

    /// `(1 − p)ρ + p·I/4`, the convex-combination form of the same map.
    pub fn closed_form(&self, rho: &Mat4) -> Mat4 {
        *rho * (1.0 - self.p) + Mat4::identity() * (self.p / 4.0)
    }
}

/// Standard deviations (radians) of the Gaussian over-rotations and the
/// depolarizing probability per native two-qubit gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    sigma_theta: f64,
    sigma_zeta: f64,
    p: f64,
}

impl NoiseModel {
    pub fn new(sigma_theta: f64, sigma_zeta: f64, p: f64) -> Result<Self, NoiseError> {
        for s in [sigma_theta, sigma_zeta] {
            if !(s.is_finite() && s >= 0.0) {
                return Err(NoiseError::InvalidSigma(s));
            }
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(NoiseError::ProbabilityOutOfRange(p));
        }
        Ok(NoiseModel { sigma_theta, sigma_zeta, p })
    }

    pub const fn noiseless() -> Self {
        NoiseModel { sigma_theta: 0.0, sigma_zeta: 0.0, p: 0.0 }
    }

    pub fn depolarizing_only(p: f64) -> Result<Self, NoiseError> {
        Self::new(0.0, 0.0, p)
    }

    pub fn sigma_theta(&self) -> f64 {
        self.sigma_theta
    }

    pub fn sigma_zeta(&self) -> f64 {
        self.sigma_zeta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// True when a realization needs an over-rotation draw.
    pub fn is_coherent(&self) -> bool {
        self.sigma_theta > 0.0 || self.sigma_zeta > 0.0
    }
}

/// One realization of the over-rotation angles, in radians.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CoherentErrorDraw {
    pub theta: f64,
    pub zeta: f64,
}

impl CoherentErrorDraw {
    pub const ZERO: CoherentErrorDraw = CoherentErrorDraw { theta: 0.0, zeta: 0.0 };

    pub fn new(theta: f64, zeta: f64) -> Self {
        CoherentErrorDraw { theta, zeta }
    }

    pub fn angle(&self, which: ErrorAngle) -> f64 {
        match which {
            ErrorAngle::Theta => self.theta,
            ErrorAngle::Zeta => self.zeta,
        }
    }

    /// Drops the angles a decomposition has no slot for (ζ for CP).
    pub fn for_kind(self, kind: DecompositionKind) -> Self {
        match kind {
            DecompositionKind::Cp => CoherentErrorDraw { theta: self.theta, zeta: 0.0 },
            DecompositionKind::Cz | DecompositionKind::ISwap => self,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.theta == 0.0 && self.zeta == 0.0
    }
}

/// Draws θ ~ N(0, σθ²) then ζ ~ N(0, σζ²). Both normals are always consumed
/// so the stream position does not depend on the model.
pub fn sample_coherent_draw<R: RngCore + ?Sized>(model: &NoiseModel, rng: &mut R) -> CoherentErrorDraw {
    let t: f64 = StandardNormal.sample(rng);
    let z: f64 = StandardNormal.sample(rng);
    CoherentErrorDraw { theta: model.sigma_theta * t, zeta: model.sigma_zeta * z }
}

/// `R_{Z₂}(γ)·R_{Z₁}(γ)·CP(−2γ + θ)`.
pub fn coherent_error_unitary_cp(gamma: f64, theta: f64) -> Mat4 {
    let rz = r_z(gamma);
    embed(&rz, Qubit::Q1) * embed(&rz, Qubit::Q0) * cp(-2.0 * gamma + theta)
}

/// `H₂·CZ·CP(θ)·H₂·R_{Z₂}(γ)·H₂·CZ·CP(ζ)·H₂`, rightmost factor applied first.
pub fn coherent_error_unitary_cz(gamma: f64, theta: f64, zeta: f64) -> Mat4 {
    let h2 = embed(&hadamard(), Qubit::Q1);
    let rz2 = embed(&r_z(gamma), Qubit::Q1);
    h2 * cz() * cp(theta) * h2 * rz2 * h2 * cz() * cp(zeta) * h2
}
