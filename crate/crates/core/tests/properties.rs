use std::f64::consts::PI;

use proptest::prelude::*;
use zzgate_core::channel::DepolarizingChannel;
use zzgate_core::decomposition::{Decomposition, DecompositionKind};
use zzgate_core::fidelity::{state_fidelity, NoisyGateEvaluator};
use zzgate_core::gates::r_zz;
use zzgate_core::linalg::{equal_up_to_global_phase, hermitian_eig, kron, phase, psd_sqrt, Mat2, Mat4, C64};
use zzgate_core::state::{DensityMatrix, PureState};
use zzgate_core::{experiment, CoherentErrorDraw, Ket4, NoiseModel};

fn mat4() -> impl Strategy<Value = Mat4> {
    prop::collection::vec(-1.0f64..1.0, 32).prop_map(|v| {
        let mut m = Mat4::zeros();
        for i in 0..16 {
            m[(i / 4, i % 4)] = C64::new(v[2 * i], v[2 * i + 1]);
        }
        m
    })
}

fn mat2() -> impl Strategy<Value = Mat2> {
    prop::collection::vec(-1.0f64..1.0, 8).prop_map(|v| {
        let mut m = Mat2::zeros();
        for i in 0..4 {
            m[(i / 2, i % 2)] = C64::new(v[2 * i], v[2 * i + 1]);
        }
        m
    })
}

fn density() -> impl Strategy<Value = DensityMatrix> {
    mat4().prop_filter_map("degenerate", |a| {
        let m = a * a.adjoint();
        let tr = m.trace().re;
        (tr > 1e-6).then(|| DensityMatrix::new(m * (1.0 / tr)).unwrap())
    })
}

fn pure() -> impl Strategy<Value = PureState> {
    prop::collection::vec(-1.0f64..1.0, 8).prop_filter_map("zero vector", |v| {
        let ket = Ket4::new([0, 1, 2, 3].map(|i| C64::new(v[2 * i], v[2 * i + 1])));
        PureState::normalized(ket).ok()
    })
}

fn kind() -> impl Strategy<Value = DecompositionKind> {
    prop::sample::select(DecompositionKind::ALL.to_vec())
}

proptest! {
    #[test]
    fn every_step_is_unitary(k in kind(), gamma in -4.0 * PI..4.0 * PI, t in -1.0f64..1.0, z in -1.0f64..1.0) {
        let d = Decomposition::build(k, gamma);
        for s in d.steps() {
            prop_assert!(s.unitary.unitarity_residual() < 1e-12);
        }
        prop_assert!(d.product_with_errors(&CoherentErrorDraw::new(t, z).for_kind(k)).unitarity_residual() < 1e-12);
    }

    #[test]
    fn decompositions_match_target(gamma in -4.0 * PI..4.0 * PI) {
        for k in [DecompositionKind::Cp, DecompositionKind::Cz] {
            prop_assert!(Decomposition::build(k, gamma).product().max_abs_diff(&r_zz(gamma)) < 1e-12);
        }
        let iswap = Decomposition::build(DecompositionKind::ISwap, gamma).product();
        prop_assert!(equal_up_to_global_phase(&iswap, &r_zz(gamma), 1e-12));
    }

    #[test]
    fn r_zz_is_additive(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        prop_assert!((r_zz(a) * r_zz(b)).max_abs_diff(&r_zz(a + b)) < 1e-12);
    }

    #[test]
    fn kron_is_bilinear(a in mat2(), b in mat2(), c in mat2(), s in -2.0f64..2.0) {
        let lhs = kron(&(a + b * s), &c);
        let rhs = kron(&a, &c) + kron(&b, &c) * s;
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        // mixed product
        prop_assert!((kron(&a, &b) * kron(&c, &a)).max_abs_diff(&kron(&(a * c), &(b * a))) < 1e-12);
    }

    #[test]
    fn global_phase_is_detected(m in mat4(), phi in -PI..PI) {
        prop_assume!(m.max_abs() > 1e-3);
        prop_assert!(equal_up_to_global_phase(&m, &(m * phase(phi)), 1e-12));
    }

    #[test]
    fn eigendecomposition_round_trips(a in mat4()) {
        let h = (a + a.adjoint()) * 0.5;
        let e = hermitian_eig(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((e.vectors[i].inner(&e.vectors[j]) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn psd_sqrt_squares_back(a in mat4()) {
        let m = a * a.adjoint();
        let r = psd_sqrt(&m).unwrap();
        prop_assert!((r * r).max_abs_diff(&m) < 1e-11);
        prop_assert!(r.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn channel_matches_closed_form(p in 0.0f64..=1.0, rho in density()) {
        let ch = DepolarizingChannel::new(p).unwrap();
        let closed = *rho.matrix() * (1.0 - p) + Mat4::identity() * (p / 4.0);
        prop_assert!(ch.apply(&rho).matrix().max_abs_diff(&closed) < 1e-12);
        prop_assert!(ch.completeness_residual() < 1e-12);
    }

    #[test]
    fn channel_preserves_trace_and_lowers_purity(p in 0.0f64..=1.0, rho in density()) {
        let out = DepolarizingChannel::new(p).unwrap().apply(&rho);
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(out.purity() <= rho.purity() + 1e-12);
        prop_assert!(DensityMatrix::new(*out.matrix()).is_ok());
    }

    #[test]
    fn pure_state_fidelity_is_overlap(a in pure(), b in pure()) {
        let f = state_fidelity(&a.to_density(), &b.to_density()).unwrap();
        prop_assert!((f - a.overlap_sqr(&b)).abs() < 1e-9);
    }

    #[test]
    fn state_fidelity_is_symmetric_and_bounded(a in density(), b in density()) {
        let f = state_fidelity(&a, &b).unwrap();
        let g = state_fidelity(&b, &a).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((f - g).abs() < 1e-8);
    }

    // Depolarizing noise commutes with unitaries, so each native gate scales
    // the non-identity part of the state by (1 − p).
    #[test]
    fn depolarizing_scales_coherent_fidelity(k in kind(), gamma in -PI..PI, t in -0.5f64..0.5, z in -0.5f64..0.5, p in 0.0f64..=1.0) {
        let d = Decomposition::build(k, gamma);
        let draw = CoherentErrorDraw::new(t, z).for_kind(k);
        let coherent = NoisyGateEvaluator::new(d.clone(), 0.0).unwrap().fidelity(Some(&draw)).unwrap().value();
        let noisy = NoisyGateEvaluator::new(d, p).unwrap().fidelity(Some(&draw)).unwrap().value();
        let n = k.native_gate_count() as i32;
        prop_assert!((noisy - (0.25 + (1.0 - p).powi(n) * (coherent - 0.25))).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_is_seed_deterministic(k in kind(), seed in any::<u64>(), sigma in 0.0f64..0.3) {
        let model = NoiseModel::new(sigma, sigma, 0.001).unwrap();
        let a = experiment::mc_average(k, 0.4, &model, 8, seed).unwrap();
        let b = experiment::mc_average(k, 0.4, &model, 8, seed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.mean <= 1.0 && a.mean >= 0.0);
    }
}

fn swap_qubits() -> Mat4 {
    let mut s = Mat4::zeros();
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        s[(i, j)] = C64::new(1.0, 0.0);
    }
    s
}

proptest! {
    #[test]
    fn cp_compilation_is_exchange_symmetric(gamma in -PI..PI, t in -1.0f64..1.0) {
        let u = Decomposition::build(DecompositionKind::Cp, gamma).product_with_errors(&CoherentErrorDraw::new(t, 0.0));
        let s = swap_qubits();
        prop_assert!((s * u * s).max_abs_diff(&u) < 1e-12);
    }

    #[test]
    fn depolarizing_only_is_state_independent(k in kind(), gamma in -PI..PI, p in 0.0f64..=1.0) {
        let per_state = NoisyGateEvaluator::new(Decomposition::build(k, gamma), p).unwrap().per_state(None).unwrap();
        for f in per_state {
            prop_assert!((f - per_state[0]).abs() < 1e-12);
        }
    }
}
