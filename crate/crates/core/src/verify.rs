//! Self-checks of the compiled model against its closed forms.
//!
//! Each check reports its worst residual. Fatal checks decide the overall
//! verdict; informational ones (the iSWAP phase equivalence and the quoted
//! laws that the channel does not reproduce) are reported but never fail a run.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::analytic::{
    analytic_depolarizing, cp_coherent, cp_coherent_state_classes, depolarizing_channel_law, CZ_LOCKED_COEFFICIENTS,
};
use crate::channel::{coherent_error_unitary_cp, coherent_error_unitary_cz, CoherentErrorDraw, DepolarizingChannel};
use crate::decomposition::{Decomposition, DecompositionKind};
use crate::error::{FidelityError, NoiseError};
use crate::fidelity::{coherent_overlap_per_state, NoisyGateEvaluator, PROBE_COUNT};
use crate::fit::fit_cz_locked_coefficients;
use crate::gates::r_zz;
use crate::linalg::{global_phase_alignment, Mat4, C64};
use crate::state::DensityMatrix;

pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance on the fitted small-angle coefficients.
pub const COEFFICIENT_TOL: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Random γ values for the equivalence checks.
    pub gamma_samples: usize,
    /// Random `(p, ρ)` pairs for the channel check.
    pub channel_samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { gamma_samples: 100, channel_samples: 1000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub fatal: bool,
    pub note: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.passed(), self.fatal) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "NOTE",
        };
        write!(f, "{status} {:<40} residual {:.3e} (tol {:.0e})", self.name, self.residual, self.tolerance)?;
        if let Some(note) = &self.note {
            write!(f, "  {note}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed() || !c.fatal)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.fatal && !c.passed())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, residual: f64, tolerance: f64, fatal: bool) {
        // NaN must not pass
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        self.checks.push(Check { name, residual, tolerance, fatal, note: None });
    }

    fn note(&mut self, note: String) {
        if let Some(last) = self.checks.last_mut() {
            last.note = Some(note);
        }
    }
}

pub type ChannelFactory<'a> = &'a dyn Fn(f64) -> Result<DepolarizingChannel, NoiseError>;

pub fn run(options: &VerifyOptions) -> Result<VerifyReport, FidelityError> {
    run_with(options, &DepolarizingChannel::new)
}

/// Runs every check, building channels through `make_channel` so that a
/// faulty channel construction can be exercised.
pub fn run_with(options: &VerifyOptions, make_channel: ChannelFactory<'_>) -> Result<VerifyReport, FidelityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut report = VerifyReport::default();
    let gamma_dist = Uniform::new_inclusive(-2.0 * PI, 2.0 * PI).expect("finite bounds");
    let gammas: Vec<f64> = (0..options.gamma_samples).map(|_| gamma_dist.sample(&mut rng)).collect();

    decomposition_checks(&mut report, &gammas);
    channel_checks(&mut report, options.channel_samples, &mut rng, make_channel)?;
    cp_coherent_checks(&mut report, &gammas)?;
    cz_coherent_checks(&mut report, &gammas, &mut rng)?;
    depolarizing_checks(&mut report, make_channel)?;
    Ok(report)
}

fn max_over<T>(items: impl IntoIterator<Item = T>, f: impl FnMut(T) -> f64) -> f64 {
    items.into_iter().map(f).fold(0.0, |a, b| if b.is_nan() || b > a { b } else { a })
}

fn decomposition_checks(report: &mut VerifyReport, gammas: &[f64]) {
    for (kind, name) in
        [(DecompositionKind::Cp, "cp decomposition = R_ZZ"), (DecompositionKind::Cz, "cz decomposition = R_ZZ")]
    {
        let r = max_over(gammas, |&g| Decomposition::build(kind, g).product().max_abs_diff(&r_zz(g)));
        report.push(name, r, EXACT_TOL, true);
    }
    let mut worst_phase = 0.0f64;
    let r = max_over(gammas, |&g| {
        let (factor, residual) =
            global_phase_alignment(&r_zz(g), &Decomposition::build(DecompositionKind::ISwap, g).product());
        worst_phase = worst_phase.max((factor - C64::new(1.0, 0.0)).norm());
        residual
    });
    report.push("iswap decomposition ~ R_ZZ (phase)", r, EXACT_TOL, false);
    report.note(alloc::format!("max |phase − 1| = {worst_phase:.1e}"));

    let r = max_over(gammas, |&g| {
        max_over(DecompositionKind::ALL, |k| {
            max_over(Decomposition::build(k, g).steps(), |s| s.unitary.unitarity_residual())
        })
    });
    report.push("gate unitarity", r, EXACT_TOL, true);
}

fn random_density(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut a = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            a[(i, j)] = C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
        }
    }
    let m = a * a.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m * (1.0 / tr)).expect("A·A†/Tr is a density matrix")
}

fn channel_checks(
    report: &mut VerifyReport,
    samples: usize,
    rng: &mut ChaCha8Rng,
    make_channel: ChannelFactory<'_>,
) -> Result<(), FidelityError> {
    let unit = Uniform::new_inclusive(0.0, 1.0).expect("finite bounds");
    let mut kraus = 0.0f64;
    let mut completeness = 0.0f64;
    for _ in 0..samples {
        let p = unit.sample(rng);
        let rho = random_density(rng);
        let ch = make_channel(p)?;
        let closed = *rho.matrix() * (1.0 - p) + Mat4::identity() * (p / 4.0);
        kraus = kraus.max(ch.apply(&rho).matrix().max_abs_diff(&closed));
        completeness = completeness.max(ch.completeness_residual());
    }
    for p in [0.0, 0.5, 1.0] {
        completeness = completeness.max(make_channel(p)?.completeness_residual());
    }
    report.push("kraus sum = (1−p)ρ + pI/4", kraus, EXACT_TOL, true);
    report.push("kraus completeness Σ K†K = I", completeness, EXACT_TOL, true);
    Ok(())
}

fn theta_grid() -> impl Iterator<Item = f64> {
    (0..100).map(|i| PI * i as f64 / 99.0)
}

fn cp_coherent_checks(report: &mut VerifyReport, gammas: &[f64]) -> Result<(), FidelityError> {
    let mut law = 0.0f64;
    let mut classes = 0.0f64;
    for theta in theta_grid() {
        let draw = CoherentErrorDraw::new(theta, 0.0);
        let ev = NoisyGateEvaluator::new(Decomposition::build(DecompositionKind::Cp, 0.3), 0.0)?;
        let per_state = ev.per_state(Some(&draw))?;
        let f = per_state.iter().sum::<f64>() / PROBE_COUNT as f64;
        law = law.max((f - cp_coherent(theta)).abs());
        classes = classes.max(multiset_residual(&per_state, &cp_coherent_state_classes(theta)));
    }
    report.push("cp coherent law (25+7cosθ)/32", law, EXACT_TOL, true);
    report.push("cp per-state fidelity classes", classes, EXACT_TOL, true);

    let mut spread = 0.0f64;
    for theta in [0.1, 0.7, 2.0] {
        let draw = CoherentErrorDraw::new(theta, 0.0);
        let fs: Vec<f64> = gammas
            .iter()
            .map(|&g| {
                NoisyGateEvaluator::new(Decomposition::build(DecompositionKind::Cp, g), 0.0)?
                    .fidelity(Some(&draw))
                    .map(|f| f.value())
            })
            .collect::<Result<_, _>>()?;
        let lo = fs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = fs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !fs.is_empty() {
            spread = spread.max(hi - lo);
        }
    }
    report.push("cp coherent fidelity independent of γ", spread, EXACT_TOL, true);

    let r = max_over(gammas, |&g| {
        max_over(theta_grid().step_by(11), |t| {
            let draw = CoherentErrorDraw::new(t, 0.0);
            Decomposition::build(DecompositionKind::Cp, g)
                .product_with_errors(&draw)
                .max_abs_diff(&coherent_error_unitary_cp(g, t))
        })
    });
    report.push("cp coherent unitary closed form", r, EXACT_TOL, true);
    Ok(())
}

/// Max deviation between sorted per-state values and the expanded multiset.
pub fn multiset_residual(values: &[f64; PROBE_COUNT], classes: &[(f64, usize)]) -> f64 {
    let mut expected: Vec<f64> = classes.iter().flat_map(|&(v, n)| core::iter::repeat(v).take(n)).collect();
    if expected.len() != PROBE_COUNT {
        return f64::INFINITY;
    }
    let mut got = *values;
    got.sort_by(f64::total_cmp);
    expected.sort_by(f64::total_cmp);
    max_over(got.iter().zip(&expected), |(a, b)| (a - b).abs())
}

fn cz_coherent_checks(report: &mut VerifyReport, gammas: &[f64], rng: &mut ChaCha8Rng) -> Result<(), FidelityError> {
    let angle = Uniform::new_inclusive(-0.3, 0.3).expect("finite bounds");
    let mut unitary = 0.0f64;
    let mut engines = 0.0f64;
    for &g in gammas {
        let draw = CoherentErrorDraw::new(angle.sample(rng), angle.sample(rng));
        let d = Decomposition::build(DecompositionKind::Cz, g);
        unitary = unitary
            .max(d.product_with_errors(&draw).max_abs_diff(&coherent_error_unitary_cz(g, draw.theta, draw.zeta)));
        let overlap = coherent_overlap_per_state(&d, &draw);
        let density = NoisyGateEvaluator::new(d, 0.0)?.per_state(Some(&draw))?;
        engines = engines.max(max_over(overlap.iter().zip(&density), |(a, b)| (a - b).abs()));
    }
    report.push("cz coherent unitary closed form", unitary, EXACT_TOL, true);
    report.push("density path = pure overlap", engines, EXACT_TOL, true);

    let fit = fit_cz_locked_coefficients(0.02 * PI, 8, 24)?;
    let r = max_over(fit.iter().zip(CZ_LOCKED_COEFFICIENTS), |(a, b)| (a - b).abs());
    report.push("cz small-angle coefficients (quoted)", r, COEFFICIENT_TOL, false);
    report.note(alloc::format!("fitted c0={:.4} c1={:.4} c2={:.4}", fit[0], fit[1], fit[2]));
    Ok(())
}

fn depolarizing_checks(report: &mut VerifyReport, make_channel: ChannelFactory<'_>) -> Result<(), FidelityError> {
    let ps: Vec<f64> = (0..=40).map(|i| 0.02 * i as f64 / 40.0).collect();
    let mut derived = [0.0f64; 3];
    let mut quoted = [0.0f64; 3];
    for (slot, kind) in DecompositionKind::ALL.into_iter().enumerate() {
        for &p in &ps {
            let ch = make_channel(p)?;
            let f = NoisyGateEvaluator::with_channel(Decomposition::build(kind, 0.9), Some(ch)).fidelity(None)?.value();
            derived[slot] = derived[slot].max((f - depolarizing_channel_law(kind, p)).abs());
            quoted[slot] = quoted[slot].max((f - analytic_depolarizing(kind, p)).abs());
        }
    }
    report.push("cp depolarizing 1/4+3/4(1−p)", derived[0], EXACT_TOL, true);
    report.push("cz depolarizing 1−1.5p+0.75p²", derived[1], EXACT_TOL, true);
    report.push("iswap depolarizing 1−1.5p+0.75p²", derived[2], EXACT_TOL, true);
    report.push("cz depolarizing (quoted form)", quoted[1], EXACT_TOL, true);
    report.push("cp depolarizing 1−0.8p (quoted)", quoted[0], EXACT_TOL, false);
    report.note(String::from("the channel implies 1 − 0.75p for a single application"));
    Ok(())
}
