//! Average gate fidelity over the 16 product probe states.
//!
//! The probe set is `|ψ_a⟩⊗|ψ_b⟩` with `|ψ₁⟩ = |0⟩`, `|ψ₂⟩ = |1⟩`,
//! `|ψ₃⟩ = (|0⟩ + i|1⟩)/√2`, `|ψ₄⟩ = (|0⟩ + |1⟩)/√2`, ordered `j = 4(a−1) + b`.
//! The gate fidelity is `(1/16) Σⱼ ⟨ψⱼ|U†ρ′ⱼU|ψⱼ⟩` where `ρ′ⱼ` is the probe after
//! the noisy circuit and `U = R_ZZ(γ)`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use crate::channel::{CoherentErrorDraw, DepolarizingChannel, NoiseModel};
use crate::decomposition::{Decomposition, DecompositionKind, Segment};
use crate::error::FidelityError;
use crate::linalg::{c, hermitian_eig, kron_ket, Ket2, Ket4, Matrix, ONE, ZERO};
use crate::state::{DensityMatrix, PureState};

/// Excursions above 1 (or below 0) up to this size are treated as rounding.
pub const FIDELITY_TOL: f64 = 1e-12;

/// Eigenvalues below this are dropped when taking square roots inside
/// [`state_fidelity`]; `√x` amplifies rounding noise near zero.
const SQRT_FLOOR: f64 = 1e-14;

pub const PROBE_COUNT: usize = 16;

/// A fidelity checked to lie in `[0, 1]` up to [`FIDELITY_TOL`] and then
/// clamped.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Fidelity(f64);

impl Fidelity {
    pub fn from_raw(x: f64) -> Result<Self, FidelityError> {
        if !(-FIDELITY_TOL..=1.0 + FIDELITY_TOL).contains(&x) {
            return Err(FidelityError::OutOfRange(x));
        }
        Ok(Fidelity(x.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn infidelity(self) -> f64 {
        1.0 - self.0
    }
}

/// Single-qubit probe `|ψ_k⟩`, `k ∈ 1..=4`.
pub fn single_qubit_probe(k: usize) -> Ket2 {
    let h = FRAC_1_SQRT_2;
    match k {
        1 => Ket2::new([ONE, ZERO]),
        2 => Ket2::new([ZERO, ONE]),
        3 => Ket2::new([c(h, 0.0), c(0.0, h)]),
        4 => Ket2::new([c(h, 0.0), c(h, 0.0)]),
        _ => panic!("single-qubit probe index {k} is outside 1..=4"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputStateSet([PureState; PROBE_COUNT]);

impl InputStateSet {
    pub fn standard() -> Self {
        InputStateSet(core::array::from_fn(|j| {
            let (a, b) = (j / 4 + 1, j % 4 + 1);
            PureState::from_ket(kron_ket(&single_qubit_probe(a), &single_qubit_probe(b)))
                .expect("probe states are normalized")
        }))
    }

    pub fn states(&self) -> &[PureState; PROBE_COUNT] {
        &self.0
    }

    /// Probe `j` in one-based numbering.
    pub fn get(&self, j: usize) -> &PureState {
        &self.0[j - 1]
    }
}

impl Default for InputStateSet {
    fn default() -> Self {
        Self::standard()
    }
}

/// `F(ρ, σ) = (Tr √(√ρ σ √ρ))²`.
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, FidelityError> {
    let sqrt_rho = floored_sqrt(rho.matrix())?;
    let inner = sqrt_rho * *sigma.matrix() * sqrt_rho;
    // restore exact hermiticity lost to rounding before the eigensolve
    let inner = (inner + inner.adjoint()) * 0.5;
    let eig = hermitian_eig(&inner)?;
    let root_trace: f64 = eig.values.iter().map(|&x| if x > SQRT_FLOOR { libm::sqrt(x) } else { 0.0 }).sum();
    let f = root_trace * root_trace;
    if !(f.is_finite() && (-1e-10..=1.0 + 1e-10).contains(&f)) {
        return Err(FidelityError::OutOfRange(f));
    }
    Ok(f.clamp(0.0, 1.0))
}

fn floored_sqrt<const N: usize>(m: &Matrix<N>) -> Result<Matrix<N>, FidelityError> {
    let eig = hermitian_eig(m)?;
    Ok(eig.map_spectrum(|x| if x > SQRT_FLOOR { libm::sqrt(x) } else { 0.0 }))
}

/// Reusable evaluator for one decomposition and one depolarizing strength.
///
/// All probes are carried as density matrices: each unitary block between
/// native gates is applied by conjugation, and the depolarizing channel acts
/// after every native two-qubit gate.
#[derive(Clone, Debug)]
pub struct NoisyGateEvaluator {
    decomposition: Decomposition,
    channel: Option<DepolarizingChannel>,
    probes: InputStateSet,
    ideal_outputs: [Ket4; PROBE_COUNT],
}

impl NoisyGateEvaluator {
    pub fn new(decomposition: Decomposition, p: f64) -> Result<Self, FidelityError> {
        let channel = DepolarizingChannel::new(p)?;
        let channel = (p > 0.0).then_some(channel);
        Ok(Self::with_channel(decomposition, channel))
    }

    /// Uses an arbitrary (possibly non-standard) channel at every native gate.
    pub fn with_channel(decomposition: Decomposition, channel: Option<DepolarizingChannel>) -> Self {
        let probes = InputStateSet::standard();
        let target = decomposition.target();
        let ideal_outputs = probes.states().map(|s| target.apply(s.ket()));
        NoisyGateEvaluator { decomposition, channel, probes, ideal_outputs }
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    fn check_draw(&self, draw: Option<&CoherentErrorDraw>) -> Result<(), FidelityError> {
        if let Some(d) = draw {
            if !(d.theta.is_finite() && d.zeta.is_finite()) {
                return Err(FidelityError::DrawMismatch {
                    kind: self.decomposition.kind().name(),
                    reason: "over-rotation angles must be finite",
                });
            }
            if self.decomposition.kind() == DecompositionKind::Cp && d.zeta != 0.0 {
                return Err(FidelityError::DrawMismatch {
                    kind: "cp",
                    reason: "a CP decomposition has one error slot, but ζ is nonzero",
                });
            }
        }
        Ok(())
    }

    /// `⟨ψⱼ|U†ρ′ⱼU|ψⱼ⟩` for every probe, without clamping.
    pub fn per_state(&self, draw: Option<&CoherentErrorDraw>) -> Result<[f64; PROBE_COUNT], FidelityError> {
        self.check_draw(draw)?;
        let segments: Vec<Segment> = self.decomposition.segments(draw);
        let mut out = [0.0; PROBE_COUNT];
        for (j, probe) in self.probes.states().iter().enumerate() {
            let mut rho = probe.ket().outer();
            for seg in &segments {
                rho = seg.unitary.conjugate(&rho);
                if seg.noisy {
                    if let Some(ch) = &self.channel {
                        rho = ch.apply_raw(&rho);
                    }
                }
            }
            out[j] = rho.expectation(&self.ideal_outputs[j]).re;
        }
        Ok(out)
    }

    pub fn fidelity(&self, draw: Option<&CoherentErrorDraw>) -> Result<Fidelity, FidelityError> {
        let per_state = self.per_state(draw)?;
        Fidelity::from_raw(per_state.iter().sum::<f64>() / PROBE_COUNT as f64)
    }
}

/// Gate fidelity of one noise realization.
///
/// `draw` must be supplied whenever the model has a coherent component; the
/// model's standard deviations are otherwise unused here.
pub fn gate_fidelity_numeric(
    decomposition: &Decomposition,
    noise: &NoiseModel,
    draw: Option<&CoherentErrorDraw>,
) -> Result<Fidelity, FidelityError> {
    if noise.is_coherent() && draw.is_none() {
        return Err(FidelityError::MissingDraw);
    }
    NoisyGateEvaluator::new(decomposition.clone(), noise.p())?.fidelity(draw)
}

/// `|⟨ψⱼ|U†U^co|ψⱼ⟩|²` per probe; pure-state shortcut valid only without
/// depolarizing noise.
pub fn coherent_overlap_per_state(decomposition: &Decomposition, draw: &CoherentErrorDraw) -> [f64; PROBE_COUNT] {
    let v = decomposition.target().adjoint() * decomposition.product_with_errors(draw);
    InputStateSet::standard().states().map(|s| v.expectation(s.ket()).norm_sqr())
}

pub fn gate_fidelity_coherent_overlap(
    decomposition: &Decomposition,
    draw: &CoherentErrorDraw,
) -> Result<Fidelity, FidelityError> {
    let per_state = coherent_overlap_per_state(decomposition, draw);
    Fidelity::from_raw(per_state.iter().sum::<f64>() / PROBE_COUNT as f64)
}

/// Mean of `F(ρⱼ, ρ′ⱼ)` using the general mixed-state formula for every probe.
/// Slow; exists to cross-check the pure-output shortcut.
pub fn gate_fidelity_general(
    decomposition: &Decomposition,
    channel: Option<&DepolarizingChannel>,
    draw: Option<&CoherentErrorDraw>,
) -> Result<f64, FidelityError> {
    let target = decomposition.target();
    let segments = decomposition.segments(draw);
    let mut total = 0.0;
    for probe in InputStateSet::standard().states() {
        let ideal = DensityMatrix::new(target.apply(probe.ket()).outer())?;
        let mut rho = probe.to_density();
        for seg in &segments {
            rho = rho.evolve(&seg.unitary);
            if seg.noisy {
                if let Some(ch) = channel {
                    rho = ch.apply(&rho);
                }
            }
        }
        total += state_fidelity(&ideal, &rho)?;
    }
    Ok(total / PROBE_COUNT as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::build_cp_decomposition;
    use core::f64::consts::PI;

    #[test]
    fn probe_ordering() {
        let set = InputStateSet::standard();
        // j = 4(a−1)+b: j=1 is |0⟩|0⟩, j=2 is |0⟩|1⟩, j=5 is |1⟩|0⟩
        assert_eq!(*set.get(1).ket(), Ket4::basis(0));
        assert_eq!(*set.get(2).ket(), Ket4::basis(1));
        assert_eq!(*set.get(5).ket(), Ket4::basis(2));
        assert_eq!(*set.get(6).ket(), Ket4::basis(3));
        for s in set.states() {
            assert!((s.ket().norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fidelity_clamp() {
        assert_eq!(Fidelity::from_raw(1.0 + 5e-13).unwrap().value(), 1.0);
        assert!(Fidelity::from_raw(1.0 + 1e-9).is_err());
        assert!(Fidelity::from_raw(-1e-9).is_err());
        assert_eq!(Fidelity::from_raw(-1e-13).unwrap().value(), 0.0);
        assert!(Fidelity::from_raw(f64::NAN).is_err());
    }

    #[test]
    fn self_fidelity_is_one() {
        let rho = InputStateSet::standard().get(11).to_density();
        assert!((state_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed();
        assert!((state_fidelity(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_versus_maximally_mixed() {
        let rho = PureState::from_ket(Ket4::basis(0)).unwrap().to_density();
        let f = state_fidelity(&rho, &DensityMatrix::maximally_mixed()).unwrap();
        assert!((f - 0.25).abs() < 1e-12, "{f}");
        let g = state_fidelity(&DensityMatrix::maximally_mixed(), &rho).unwrap();
        assert!((g - 0.25).abs() < 1e-12, "{g}");
    }

    #[test]
    fn zero_noise_gives_unit_fidelity() {
        for kind in DecompositionKind::ALL {
            for g in [-2.0, 0.0, 0.4, 3.0] {
                let d = Decomposition::build(kind, g);
                let f = gate_fidelity_numeric(&d, &NoiseModel::noiseless(), None).unwrap();
                assert!((f.value() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cp_quarter_turn_over_rotation() {
        let d = build_cp_decomposition(0.7);
        let model = NoiseModel::new(0.1, 0.0, 0.0).unwrap();
        let f = gate_fidelity_numeric(&d, &model, Some(&CoherentErrorDraw::new(PI / 2.0, 0.0))).unwrap();
        assert!((f.value() - 0.78125).abs() < 1e-12);
    }

    #[test]
    fn cz_depolarizing_point() {
        let d = Decomposition::build(DecompositionKind::Cz, 0.4);
        let model = NoiseModel::depolarizing_only(0.01).unwrap();
        let f = gate_fidelity_numeric(&d, &model, None).unwrap();
        assert!((f.value() - 0.985075).abs() < 1e-12);
    }

    #[test]
    fn missing_draw_is_rejected() {
        let d = build_cp_decomposition(0.1);
        let model = NoiseModel::new(0.05, 0.0, 0.0).unwrap();
        assert_eq!(gate_fidelity_numeric(&d, &model, None), Err(FidelityError::MissingDraw));
    }

    #[test]
    fn cp_with_zeta_is_a_shape_mismatch() {
        let d = build_cp_decomposition(0.1);
        let err = gate_fidelity_numeric(&d, &NoiseModel::noiseless(), Some(&CoherentErrorDraw::new(0.1, 0.2)));
        assert!(matches!(err, Err(FidelityError::DrawMismatch { .. })));
    }

    #[test]
    fn overlap_route_zero_angles() {
        for kind in DecompositionKind::ALL {
            let d = Decomposition::build(kind, 1.3);
            let f = gate_fidelity_coherent_overlap(&d, &CoherentErrorDraw::ZERO).unwrap();
            assert!((f.value() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn general_route_matches_engine_with_depolarizing_and_coherent_noise() {
        let d = Decomposition::build(DecompositionKind::Cz, 0.9);
        let p = 0.03;
        let draw = CoherentErrorDraw::new(0.2, -0.15);
        let ch = DepolarizingChannel::new(p).unwrap();
        let general = gate_fidelity_general(&d, Some(&ch), Some(&draw)).unwrap();
        let engine = NoisyGateEvaluator::new(d, p).unwrap().fidelity(Some(&draw)).unwrap().value();
        assert!((general - engine).abs() < 1e-10, "{general} vs {engine}");
    }

    #[test]
    fn evaluator_rejects_bad_probability() {
        let d = build_cp_decomposition(0.0);
        assert!(NoisyGateEvaluator::new(d.clone(), 1.5).is_err());
        assert!(NoisyGateEvaluator::new(d, -0.5).is_err());
    }

    #[test]
    fn identity_channel_is_noiseless() {
        let d = build_cp_decomposition(0.3);
        let ev = NoisyGateEvaluator::with_channel(d, Some(DepolarizingChannel::new(0.0).unwrap()));
        assert!((ev.fidelity(None).unwrap().value() - 1.0).abs() < 1e-12);
    }
}
