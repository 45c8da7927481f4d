//! Monte Carlo averaging over Gaussian over-rotations and grid sweeps.
//!
//! Every grid point owns a ChaCha8 stream selected by `(global seed, stream
//! index)`, where the index is the point's position in the kind-major grid
//! order. Results therefore do not depend on how points are scheduled.
//! Within a point, repetitions consume the stream sequentially, two normals
//! per repetition (θ then ζ).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use crate::channel::{sample_coherent_draw, CoherentErrorDraw, NoiseModel};
use crate::decomposition::{Decomposition, DecompositionKind};
use crate::error::{ConfigError, FidelityError, NoiseError};
use crate::fidelity::{NoisyGateEvaluator, PROBE_COUNT};

/// Name of the uniform generator, recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha), seed_from_u64 + set_stream per grid point";

pub const DEFAULT_REPETITIONS: usize = 1000;
pub const DEFAULT_INDIFFERENCE_THRESHOLD: f64 = 0.0005;

/// Generator for one grid point.
pub fn point_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Running mean and variance (Welford). Identical samples give exactly zero
/// variance.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunningStats {
    n: usize,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample standard deviation (n − 1 denominator); 0 for fewer than two samples.
    pub fn std_dev(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            libm::sqrt((self.m2 / (self.n - 1) as f64).max(0.0))
        }
    }

    pub fn estimate(&self) -> McEstimate {
        McEstimate {
            mean: self.mean,
            std_error: if self.n == 0 { 0.0 } else { self.std_dev() / libm::sqrt(self.n as f64) },
            n_samples: self.n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

fn check_reps(reps: usize) -> Result<(), FidelityError> {
    if reps == 0 {
        Err(FidelityError::NoSamples)
    } else {
        Ok(())
    }
}

/// Mean gate fidelity over `reps` independent over-rotation draws, on stream
/// 0 of `seed`.
pub fn mc_average(
    kind: DecompositionKind,
    gamma: f64,
    model: &NoiseModel,
    reps: usize,
    seed: u64,
) -> Result<McEstimate, FidelityError> {
    mc_average_with_rng(kind, gamma, model, reps, &mut point_rng(seed, 0))
}

pub fn mc_average_with_rng<R: RngCore + ?Sized>(
    kind: DecompositionKind,
    gamma: f64,
    model: &NoiseModel,
    reps: usize,
    rng: &mut R,
) -> Result<McEstimate, FidelityError> {
    Ok(mc_per_state_with_rng(kind, gamma, model, reps, rng)?.gate)
}

/// Gate and per-probe Monte Carlo estimates from the same draws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerStateEstimate {
    pub gate: McEstimate,
    pub states: [McEstimate; PROBE_COUNT],
}

pub fn mc_per_state_with_rng<R: RngCore + ?Sized>(
    kind: DecompositionKind,
    gamma: f64,
    model: &NoiseModel,
    reps: usize,
    rng: &mut R,
) -> Result<PerStateEstimate, FidelityError> {
    check_reps(reps)?;
    let evaluator = NoisyGateEvaluator::new(Decomposition::build(kind, gamma), model.p())?;
    let mut gate = RunningStats::default();
    let mut states = [RunningStats::default(); PROBE_COUNT];
    for _ in 0..reps {
        let draw = sample_coherent_draw(model, rng).for_kind(kind);
        let draw = (!draw.is_zero()).then_some(draw);
        let per_state = evaluator.per_state(draw.as_ref())?;
        let f = crate::fidelity::Fidelity::from_raw(per_state.iter().sum::<f64>() / PROBE_COUNT as f64)?;
        gate.push(f.value());
        for (acc, x) in states.iter_mut().zip(per_state) {
            acc.push(x);
        }
    }
    Ok(PerStateEstimate { gate: gate.estimate(), states: states.map(|s| s.estimate()) })
}

/// CP and CZ evaluated on the same draws, with the paired difference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub cp: McEstimate,
    pub cz: McEstimate,
    /// `F_cp − F_cz`, estimated from per-draw differences.
    pub delta: McEstimate,
}

pub fn mc_compare_with_rng<R: RngCore + ?Sized>(
    gamma: f64,
    model: &NoiseModel,
    reps: usize,
    rng: &mut R,
) -> Result<Comparison, FidelityError> {
    check_reps(reps)?;
    let cp_eval = NoisyGateEvaluator::new(Decomposition::build(DecompositionKind::Cp, gamma), model.p())?;
    let cz_eval = NoisyGateEvaluator::new(Decomposition::build(DecompositionKind::Cz, gamma), model.p())?;
    let (mut cp, mut cz, mut delta) = (RunningStats::default(), RunningStats::default(), RunningStats::default());
    for _ in 0..reps {
        let draw = sample_coherent_draw(model, rng);
        let cp_draw = draw.for_kind(DecompositionKind::Cp);
        let f_cp = cp_eval.fidelity((!cp_draw.is_zero()).then_some(&cp_draw))?.value();
        let f_cz = cz_eval.fidelity((!draw.is_zero()).then_some(&draw))?.value();
        cp.push(f_cp);
        cz.push(f_cz);
        delta.push(f_cp - f_cz);
    }
    Ok(Comparison { cp: cp.estimate(), cz: cz.estimate(), delta: delta.estimate() })
}

/// Inclusive linear grid. A single-point grid sits at `start`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        Grid { start, stop, count }
    }

    pub fn point(value: f64) -> Self {
        Grid { start: value, stop: value, count: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return alloc::vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 }).collect()
    }

    pub fn validate(&self, name: &'static str) -> Result<(), ConfigError> {
        if self.count == 0 {
            return Err(ConfigError::InvalidGrid { name, reason: "count must be at least 1" });
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(ConfigError::InvalidGrid { name, reason: "bounds must be finite" });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZetaGrid {
    /// σζ = σθ at every point.
    LockedToTheta,
    Grid(Grid),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub kinds: Vec<DecompositionKind>,
    pub gamma: Grid,
    pub sigma_theta: Grid,
    pub sigma_zeta: ZetaGrid,
    pub p: Grid,
    pub reps: usize,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.kinds.is_empty() {
            return Err(ConfigError::NoKinds);
        }
        if self.reps == 0 {
            return Err(ConfigError::ZeroRepetitions);
        }
        self.gamma.validate("gamma")?;
        self.sigma_theta.validate("sigma_theta")?;
        self.p.validate("p")?;
        if let ZetaGrid::Grid(g) = &self.sigma_zeta {
            g.validate("sigma_zeta")?;
        }
        for s in self.sigma_theta.values().into_iter().chain(self.zeta_values().unwrap_or_default()) {
            if s < 0.0 {
                return Err(NoiseError::InvalidSigma(s).into());
            }
        }
        for p in self.p.values() {
            if !(0.0..=1.0).contains(&p) {
                return Err(NoiseError::ProbabilityOutOfRange(p).into());
            }
        }
        Ok(())
    }

    fn zeta_values(&self) -> Option<Vec<f64>> {
        match &self.sigma_zeta {
            ZetaGrid::LockedToTheta => None,
            ZetaGrid::Grid(g) => Some(g.values()),
        }
    }

    /// `(σθ, σζ)` pairs in row-major order.
    fn sigma_pairs(&self) -> Vec<(f64, f64)> {
        let thetas = self.sigma_theta.values();
        match self.zeta_values() {
            None => thetas.iter().map(|&t| (t, t)).collect(),
            Some(zetas) => thetas.iter().flat_map(|&t| zetas.iter().map(move |&z| (t, z))).collect(),
        }
    }

    /// Noise-parameter points (γ, σθ, σζ, p) in row-major order.
    pub fn parameter_points(&self) -> Vec<ParameterPoint> {
        let pairs = self.sigma_pairs();
        let ps = self.p.values();
        let mut out = Vec::with_capacity(self.gamma.count * pairs.len() * ps.len());
        for gamma in self.gamma.values() {
            for &(sigma_theta, sigma_zeta) in &pairs {
                for &p in &ps {
                    out.push(ParameterPoint { gamma, sigma_theta, sigma_zeta, p });
                }
            }
        }
        out
    }

    /// All sweep points, kind-major, each with its stream index.
    pub fn points(&self) -> Vec<SweepPoint> {
        let params = self.parameter_points();
        let mut out = Vec::with_capacity(self.kinds.len() * params.len());
        for &kind in &self.kinds {
            for &param in &params {
                out.push(SweepPoint { kind, param, stream: out.len() as u64 });
            }
        }
        out
    }

    pub fn evaluate_point(&self, point: &SweepPoint) -> Result<SweepRecord, FidelityError> {
        let model = point.param.noise_model()?;
        let mut rng = point_rng(self.seed, point.stream);
        let est = mc_average_with_rng(point.kind, point.param.gamma, &model, self.reps, &mut rng)?;
        Ok(SweepRecord::new(Series::Gate(point.kind), &point.param, est, self.seed))
    }

    /// Paired CP/CZ comparison at one parameter point. Streams are indexed
    /// by parameter position only, so both kinds see the same draws.
    pub fn evaluate_difference(&self, index: usize, param: &ParameterPoint) -> Result<DifferenceRecord, FidelityError> {
        let model = param.noise_model()?;
        let mut rng = point_rng(self.seed, index as u64);
        let comparison = mc_compare_with_rng(param.gamma, &model, self.reps, &mut rng)?;
        Ok(DifferenceRecord { param: *param, comparison, seed: self.seed })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParameterPoint {
    pub gamma: f64,
    pub sigma_theta: f64,
    pub sigma_zeta: f64,
    pub p: f64,
}

impl ParameterPoint {
    pub fn noise_model(&self) -> Result<NoiseModel, NoiseError> {
        NoiseModel::new(self.sigma_theta, self.sigma_zeta, self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub kind: DecompositionKind,
    pub param: ParameterPoint,
    pub stream: u64,
}

/// What a result row describes; rendered into the `kind` column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    /// Gate fidelity of one compilation.
    Gate(DecompositionKind),
    /// Fidelity of one probe state (one-based index).
    State(DecompositionKind, u8),
    /// `F_cp − F_cz` on common draws.
    CpMinusCz,
    /// The locked-angle small-angle expansion for CZ, evaluated directly.
    CzLockedExpansion,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Series::Gate(k) => write!(f, "{k}"),
            Series::State(k, j) => write!(f, "{k}/state{j:02}"),
            Series::CpMinusCz => f.write_str("cp-cz"),
            Series::CzLockedExpansion => f.write_str("cz-small-angle"),
        }
    }
}

/// One output row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord {
    pub series: Series,
    pub gamma: f64,
    pub sigma_theta: f64,
    pub sigma_zeta: f64,
    pub p: f64,
    pub fidelity_mean: f64,
    pub fidelity_std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl SweepRecord {
    pub fn new(series: Series, param: &ParameterPoint, est: McEstimate, seed: u64) -> Self {
        SweepRecord {
            series,
            gamma: param.gamma,
            sigma_theta: param.sigma_theta,
            sigma_zeta: param.sigma_zeta,
            p: param.p,
            fidelity_mean: est.mean,
            fidelity_std_error: est.std_error,
            n_samples: est.n_samples,
            seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DifferenceRecord {
    pub param: ParameterPoint,
    pub comparison: Comparison,
    pub seed: u64,
}

impl DifferenceRecord {
    pub fn delta(&self) -> f64 {
        self.comparison.delta.mean
    }

    pub fn rows(&self) -> [SweepRecord; 3] {
        [
            SweepRecord::new(Series::Gate(DecompositionKind::Cp), &self.param, self.comparison.cp, self.seed),
            SweepRecord::new(Series::Gate(DecompositionKind::Cz), &self.param, self.comparison.cz, self.seed),
            SweepRecord::new(Series::CpMinusCz, &self.param, self.comparison.delta, self.seed),
        ]
    }
}

/// Sequential sweep over the full grid, records in grid order.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>, SweepError> {
    config.validate()?;
    config.points().iter().map(|pt| config.evaluate_point(pt).map_err(SweepError::from)).collect()
}

/// Sequential CP − CZ map over the parameter grid; `config.kinds` is ignored.
pub fn fidelity_difference_map(config: &SweepConfig) -> Result<Vec<DifferenceRecord>, SweepError> {
    let mut cfg = config.clone();
    cfg.kinds = alloc::vec![DecompositionKind::Cp, DecompositionKind::Cz];
    cfg.validate()?;
    cfg.parameter_points()
        .iter()
        .enumerate()
        .map(|(i, param)| cfg.evaluate_difference(i, param).map_err(SweepError::from))
        .collect()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recommendation {
    pub chosen: DecompositionKind,
    /// `F_cp − F_cz`.
    pub delta_f: f64,
    pub delta_std_error: f64,
    pub f_cp: McEstimate,
    pub f_cz: McEstimate,
    pub rationale: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecommendOptions {
    pub reps: usize,
    pub seed: u64,
    /// ΔF below this counts as a tie, which goes to CZ.
    pub indifference_threshold: f64,
}

impl Default for RecommendOptions {
    fn default() -> Self {
        RecommendOptions { reps: DEFAULT_REPETITIONS, seed: 0, indifference_threshold: DEFAULT_INDIFFERENCE_THRESHOLD }
    }
}

/// Small-error regime in which both compilations perform alike.
const SMALL_SIGMA: f64 = 0.016 * PI;
const SMALL_P: f64 = 0.0003;

/// Chooses between the CP and CZ compilations for a noise model.
pub fn recommend(model: &NoiseModel, gamma: f64, options: &RecommendOptions) -> Result<Recommendation, FidelityError> {
    let mut rng = point_rng(options.seed, 0);
    let cmp = mc_compare_with_rng(gamma, model, options.reps, &mut rng)?;
    let delta = cmp.delta.mean;
    let chosen = if delta < options.indifference_threshold {
        DecompositionKind::Cz
    } else if cmp.cp.mean >= cmp.cz.mean {
        DecompositionKind::Cp
    } else {
        DecompositionKind::Cz
    };
    let small = model.sigma_theta() < SMALL_SIGMA && model.sigma_zeta() < SMALL_SIGMA && model.p() < SMALL_P;
    let regime = if small {
        "small-error regime (σ < 0.016π, p < 0.03 %): both compilations are comparable"
    } else {
        "large-error regime: the single parametric CP gate accumulates less error than two CZ gates"
    };
    let verdict = if delta < options.indifference_threshold {
        format!(
            "ΔF = {:.3e} ± {:.1e} is below the indifference threshold {:.1e}; prefer CZ with virtual Z gates (no per-angle calibration)",
            delta, cmp.delta.std_error, options.indifference_threshold
        )
    } else {
        format!(
            "ΔF = {:.3e} ± {:.1e} exceeds the indifference threshold {:.1e}; prefer {}",
            delta,
            cmp.delta.std_error,
            options.indifference_threshold,
            chosen.name().to_ascii_uppercase()
        )
    };
    let rationale = format!(
        "F_cp = {:.6} ± {:.1e}, F_cz = {:.6} ± {:.1e}; {verdict}; {regime}",
        cmp.cp.mean, cmp.cp.std_error, cmp.cz.mean, cmp.cz.std_error
    );
    Ok(Recommendation {
        chosen,
        delta_f: delta,
        delta_std_error: cmp.delta.std_error,
        f_cp: cmp.cp,
        f_cz: cmp.cz,
        rationale,
    })
}

/// Draws for one point; exposed so callers can replay a point's realizations.
pub fn point_draws(model: &NoiseModel, seed: u64, stream: u64, reps: usize) -> Vec<CoherentErrorDraw> {
    let mut rng = point_rng(seed, stream);
    (0..reps).map(|_| sample_coherent_draw(model, &mut rng)).collect()
}
