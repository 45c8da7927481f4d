//! Preset grids for the four reference datasets.
//!
//! 1. CP compilation, coherent errors only: gate and per-probe fidelity
//!    against σθ ∈ [0, 0.06π].
//! 2. CZ compilation, coherent errors only: γ ∈ [0, 2π] × 50 against
//!    σθ = σζ ∈ [0, 0.06π] × 30.
//! 3. The locked small-angle expansion of the CZ fidelity over
//!    θ ∈ [−0.1π, 0.1π] and γ ∈ [−1.5π, 1.5π], evaluated directly (no sampling).
//! 4. CP − CZ on common draws at γ = 0.01π over σ ∈ [0, 0.06π] and
//!    p ∈ [0, 0.1 %].

use std::f64::consts::PI;
use std::fmt;

use serde_json::{json, Value};
use zzgate_core::analytic::{cz_coherent_locked, CZ_LOCKED_COEFFICIENTS};
use zzgate_core::experiment::{
    Grid, McEstimate, ParameterPoint, Series, SweepConfig, SweepRecord, ZetaGrid, DEFAULT_REPETITIONS,
};
use zzgate_core::DecompositionKind;

use crate::output::{grid_json, sweep_metadata, ARTIFACT_VERSION};
use crate::runner::{pi_grid, run_difference_map, run_per_state, run_sweep};
use crate::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    CpPerState = 1,
    CzHeatmap = 2,
    CzExpansion = 3,
    DifferenceMap = 4,
}

impl TryFrom<u8> for Figure {
    type Error = u8;

    fn try_from(id: u8) -> Result<Self, u8> {
        match id {
            1 => Ok(Figure::CpPerState),
            2 => Ok(Figure::CzHeatmap),
            3 => Ok(Figure::CzExpansion),
            4 => Ok(Figure::DifferenceMap),
            other => Err(other),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "figure {}", *self as u8)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureOptions {
    pub reps: usize,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions { reps: DEFAULT_REPETITIONS, seed: 0, jobs: None }
    }
}

pub struct FigureRun {
    pub records: Vec<SweepRecord>,
    pub metadata: Value,
}

pub const EXPANSION_THETA: (f64, f64, usize) = (-0.1, 0.1, 41);
pub const EXPANSION_GAMMA: (f64, f64, usize) = (-1.5, 1.5, 121);
pub const DIFFERENCE_GAMMA: f64 = 0.01;

/// The sweep behind a Monte Carlo figure; `None` for the analytic one.
pub fn preset(figure: Figure, opts: &FigureOptions) -> Option<SweepConfig> {
    let base = |kinds, gamma, sigma, p| SweepConfig {
        kinds,
        gamma,
        sigma_theta: sigma,
        sigma_zeta: ZetaGrid::LockedToTheta,
        p,
        reps: opts.reps,
        seed: opts.seed,
    };
    match figure {
        Figure::CpPerState => {
            Some(base(vec![DecompositionKind::Cp], Grid::point(0.0), pi_grid(0.0, 0.06, 31), Grid::point(0.0)))
        }
        Figure::CzHeatmap => {
            Some(base(vec![DecompositionKind::Cz], pi_grid(0.0, 2.0, 50), pi_grid(0.0, 0.06, 30), Grid::point(0.0)))
        }
        Figure::CzExpansion => None,
        Figure::DifferenceMap => Some(base(
            vec![DecompositionKind::Cp, DecompositionKind::Cz],
            Grid::point(DIFFERENCE_GAMMA * PI),
            pi_grid(0.0, 0.06, 25),
            Grid::new(0.0, 0.001, 21),
        )),
    }
}

pub fn run(figure: Figure, opts: &FigureOptions) -> Result<FigureRun, RunError> {
    let desc = match figure {
        Figure::CpPerState => {
            "CP compilation, coherent over-rotation: gate and per-probe fidelity (probe j = 4(a-1)+b)"
        }
        Figure::CzHeatmap => {
            "CZ compilation, coherent over-rotation with sigma_zeta = sigma_theta, no depolarizing noise"
        }
        Figure::CzExpansion => {
            "locked small-angle expansion 1 - theta^2 (c0 + c1 sin gamma + c2 cos gamma), evaluated directly"
        }
        Figure::DifferenceMap => "F_cp - F_cz on common draws at gamma = 0.01 pi; rows cp, cz, cp-cz per point",
    };
    let extra = json!({ "figure": figure as u8 });
    match (figure, preset(figure, opts)) {
        (Figure::CpPerState, Some(cfg)) => Ok(FigureRun {
            records: run_per_state(DecompositionKind::Cp, &cfg, opts.jobs)?,
            metadata: sweep_metadata(desc, &cfg, extra),
        }),
        (Figure::CzHeatmap, Some(cfg)) => {
            Ok(FigureRun { records: run_sweep(&cfg, opts.jobs)?, metadata: sweep_metadata(desc, &cfg, extra) })
        }
        (Figure::DifferenceMap, Some(cfg)) => {
            let map = run_difference_map(&cfg, opts.jobs)?;
            Ok(FigureRun {
                records: map.iter().flat_map(|d| d.rows()).collect(),
                metadata: sweep_metadata(desc, &cfg, extra),
            })
        }
        _ => Ok(expansion_surface(desc, opts.seed)),
    }
}

fn expansion_surface(desc: &str, seed: u64) -> FigureRun {
    let thetas = pi_grid(EXPANSION_THETA.0, EXPANSION_THETA.1, EXPANSION_THETA.2);
    let gammas = pi_grid(EXPANSION_GAMMA.0, EXPANSION_GAMMA.1, EXPANSION_GAMMA.2);
    let mut records = Vec::with_capacity(thetas.count * gammas.count);
    for gamma in gammas.values() {
        for theta in thetas.values() {
            let param = ParameterPoint { gamma, sigma_theta: theta, sigma_zeta: theta, p: 0.0 };
            let est = McEstimate { mean: cz_coherent_locked(gamma, theta), std_error: 0.0, n_samples: 0 };
            records.push(SweepRecord::new(Series::CzLockedExpansion, &param, est, seed));
        }
    }
    let metadata = json!({
        "artifact_version": ARTIFACT_VERSION,
        "description": desc,
        "figure": 3,
        "angle_unit": "radians",
        "seed": seed,
        "coefficients": CZ_LOCKED_COEFFICIENTS,
        "columns": "sigma_theta and sigma_zeta hold the fixed over-rotation theta; n_samples = 0 marks direct evaluation",
        "grids": { "gamma": grid_json(&gammas), "theta": grid_json(&thetas) },
        "grid_order": "gamma, then theta",
    });
    FigureRun { records, metadata }
}
