//! Closed-form fidelity laws used as oracles for the numeric engine.
//!
//! The small-angle CZ expansions carry coefficients rounded to two decimals;
//! they are approximations, the numeric engine is authoritative.

use crate::decomposition::DecompositionKind;

/// Gate fidelity of the CP compilation under a fixed over-rotation θ:
/// `(25 + 7 cos θ) / 32`, independent of γ.
pub fn cp_coherent(theta: f64) -> f64 {
    (25.0 + 7.0 * libm::cos(theta)) / 32.0
}

/// The three per-probe fidelity values of the CP compilation with their
/// multiplicities: `1` (×8), `(2 + 2cos θ)/4` (×4), `(10 + 6cos θ)/16` (×4).
pub fn cp_coherent_state_classes(theta: f64) -> [(f64, usize); 3] {
    let ct = libm::cos(theta);
    [(1.0, 8), ((2.0 + 2.0 * ct) / 4.0, 4), ((10.0 + 6.0 * ct) / 16.0, 4)]
}

/// `E[(25 + 7 cos θ)/32]` for `θ ~ N(0, σ²)`, using `E[cos θ] = e^{−σ²/2}`.
pub fn cp_coherent_gaussian_mean(sigma: f64) -> f64 {
    (25.0 + 7.0 * libm::exp(-0.5 * sigma * sigma)) / 32.0
}

/// Second-order small-angle expansion of the CZ compilation's coherent
/// fidelity, as printed (two-decimal coefficients). Valid for `|θ|, |ζ| ≲ 0.1π`.
pub fn cz_coherent_small_angle(gamma: f64, theta: f64, zeta: f64) -> f64 {
    let (s, c) = (libm::sin(gamma), libm::cos(gamma));
    1.0 - 0.12 * theta * theta
        - 0.13 * zeta * zeta
        - 0.05 * theta * zeta
        - 0.02 * theta * zeta * s
        - 0.19 * theta * zeta * c
        - 0.02 * zeta * zeta * s
        + 0.02 * zeta * zeta * c
}

/// Coefficients `(c₀, c₁, c₂)` of the locked-angle (`ζ = θ`) form
/// `1 − θ²(c₀ + c₁ sin γ + c₂ cos γ)`.
pub const CZ_LOCKED_COEFFICIENTS: [f64; 3] = [0.3, 0.04, 0.17];

/// Printed coefficients of [`cz_coherent_small_angle`] in the order
/// `θ², ζ², θζ, θζ·sinγ, θζ·cosγ, ζ²·sinγ, ζ²·cosγ` (fidelity sign convention).
pub const CZ_SMALL_ANGLE_COEFFICIENTS: [f64; 7] = [-0.12, -0.13, -0.05, -0.02, -0.19, -0.02, 0.02];

/// `1 − θ²(0.3 + 0.04 sin γ + 0.17 cos γ)`.
pub fn cz_coherent_locked(gamma: f64, theta: f64) -> f64 {
    let [c0, c1, c2] = CZ_LOCKED_COEFFICIENTS;
    1.0 - theta * theta * (c0 + c1 * libm::sin(gamma) + c2 * libm::cos(gamma))
}

/// Depolarizing-only fidelity laws as quoted: `1 − 0.8p` for CP and
/// `1 − 1.5p + 0.75p²` for the two-gate compilations.
///
/// The CP law does not follow from the channel `(1 − p)ρ + p·I/4`; see
/// [`depolarizing_channel_law`] for the law the channel implies.
pub fn analytic_depolarizing(kind: DecompositionKind, p: f64) -> f64 {
    match kind {
        DecompositionKind::Cp => 1.0 - 0.8 * p,
        DecompositionKind::Cz | DecompositionKind::ISwap => 1.0 - 1.5 * p + 0.75 * p * p,
    }
}

/// Fidelity implied by `n` applications of `(1 − p)ρ + p·I/4` to a pure
/// probe: `1/4 + (3/4)(1 − p)ⁿ`. This gives `1 − 0.75p` for CP and
/// `1 − 1.5p + 0.75p²` for CZ.
pub fn depolarizing_channel_law(kind: DecompositionKind, p: f64) -> f64 {
    0.25 + 0.75 * libm::pow(1.0 - p, kind.native_gate_count() as f64)
}

/// The `p` at which [`analytic_depolarizing`] reaches `target`.
pub fn analytic_depolarizing_crossing(kind: DecompositionKind, target: f64) -> f64 {
    let loss = 1.0 - target;
    match kind {
        DecompositionKind::Cp => loss / 0.8,
        // 0.75p² − 1.5p + loss = 0, smaller root
        DecompositionKind::Cz | DecompositionKind::ISwap => 1.0 - libm::sqrt(1.0 - loss / 0.75),
    }
}

/// The `p` at which [`depolarizing_channel_law`] reaches `target`.
pub fn channel_law_crossing(kind: DecompositionKind, target: f64) -> f64 {
    let n = kind.native_gate_count() as f64;
    1.0 - libm::pow((4.0 * target - 1.0) / 3.0, 1.0 / n)
}
