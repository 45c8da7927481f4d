use std::f64::consts::PI;

use zzgate::runner::run_sweep;
use zzgate_core::experiment::{Grid, SweepConfig, ZetaGrid};
use zzgate_core::DecompositionKind;

fn config(kinds: Vec<DecompositionKind>, gamma: Grid, sigma: f64, p: Grid) -> SweepConfig {
    SweepConfig {
        kinds,
        gamma,
        sigma_theta: Grid::point(sigma),
        sigma_zeta: ZetaGrid::LockedToTheta,
        p,
        reps: 400,
        seed: 0,
    }
}

#[test]
fn fidelity_does_not_increase_with_p() {
    let cfg = config(DecompositionKind::ALL.to_vec(), Grid::point(0.4), 0.03 * PI, Grid::new(0.0, 0.01, 6));
    let recs = run_sweep(&cfg, None).unwrap();
    for w in recs.chunks(6).flat_map(|c| c.windows(2)) {
        let slack = 3.0 * (w[0].fidelity_std_error.powi(2) + w[1].fidelity_std_error.powi(2)).sqrt();
        assert!(w[1].fidelity_mean <= w[0].fidelity_mean + slack, "{:?} -> {:?}", w[0], w[1]);
    }
}

// Each γ point draws its own over-rotations, so the CP profile scatters by
// sampling noise only: every point stays within 3 std_errors of the profile
// mean. The per-point std_error of a heavy-tailed θ² average is itself noisy,
// so the profile's mean std_error is used.
#[test]
fn cp_profile_is_flat_in_gamma() {
    let cfg = config(vec![DecompositionKind::Cp], Grid::new(0.0, 2.0 * PI, 50), 0.05 * PI, Grid::point(0.0));
    let recs = run_sweep(&cfg, None).unwrap();
    let mean = recs.iter().map(|r| r.fidelity_mean).sum::<f64>() / recs.len() as f64;
    let se = recs.iter().map(|r| r.fidelity_std_error).sum::<f64>() / recs.len() as f64;
    for r in &recs {
        assert!((r.fidelity_mean - mean).abs() < 3.0 * se, "γ={}: {} vs {mean} ± {se}", r.gamma, r.fidelity_mean);
    }
}

#[test]
fn cz_profile_depends_on_gamma() {
    let cfg = config(vec![DecompositionKind::Cz], Grid::new(0.0, 2.0 * PI, 25), 0.05 * PI, Grid::point(0.0));
    let recs = run_sweep(&cfg, None).unwrap();
    let hi = recs.iter().map(|r| r.fidelity_mean).fold(f64::MIN, f64::max);
    let lo = recs.iter().map(|r| r.fidelity_mean).fold(f64::MAX, f64::min);
    let se = recs.iter().map(|r| r.fidelity_std_error).fold(0.0, f64::max);
    assert!(hi - lo > 5.0 * se, "spread {} vs se {se}", hi - lo);
}
