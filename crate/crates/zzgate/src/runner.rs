//! Evaluates grid points on a rayon pool. Each point seeds its own stream,
//! and results are collected in grid order, so output does not depend on the
//! number of workers.

use rayon::prelude::*;
use zzgate_core::experiment::{
    mc_per_state_with_rng, point_rng, DifferenceRecord, Grid, ParameterPoint, Series, SweepConfig, SweepRecord,
};
use zzgate_core::fidelity::PROBE_COUNT;
use zzgate_core::DecompositionKind;

use crate::RunError;

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, RunError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    Ok(builder.build()?)
}

/// Full Cartesian sweep; `jobs = None` uses one worker per core.
pub fn run_sweep(config: &SweepConfig, jobs: Option<usize>) -> Result<Vec<SweepRecord>, RunError> {
    config.validate().map_err(zzgate_core::experiment::SweepError::from)?;
    let points = config.points();
    let records =
        pool(jobs)?.install(|| points.par_iter().map(|pt| config.evaluate_point(pt)).collect::<Result<Vec<_>, _>>())?;
    Ok(records)
}

/// CP − CZ on common draws over the parameter grid (`config.kinds` ignored).
pub fn run_difference_map(config: &SweepConfig, jobs: Option<usize>) -> Result<Vec<DifferenceRecord>, RunError> {
    let mut cfg = config.clone();
    cfg.kinds = vec![DecompositionKind::Cp, DecompositionKind::Cz];
    cfg.validate().map_err(zzgate_core::experiment::SweepError::from)?;
    let params = cfg.parameter_points();
    let records = pool(jobs)?.install(|| {
        params.par_iter().enumerate().map(|(i, param)| cfg.evaluate_difference(i, param)).collect::<Result<Vec<_>, _>>()
    })?;
    Ok(records)
}

/// Gate row followed by one row per probe state, for every parameter point of
/// a single-kind sweep. Probe rows come from the same draws as the gate row.
pub fn run_per_state(
    kind: DecompositionKind,
    config: &SweepConfig,
    jobs: Option<usize>,
) -> Result<Vec<SweepRecord>, RunError> {
    let mut cfg = config.clone();
    cfg.kinds = vec![kind];
    cfg.validate().map_err(zzgate_core::experiment::SweepError::from)?;
    let params = cfg.parameter_points();
    let blocks = pool(jobs)?.install(|| {
        params
            .par_iter()
            .enumerate()
            .map(|(i, param)| per_state_block(kind, &cfg, i as u64, param))
            .collect::<Result<Vec<_>, RunError>>()
    })?;
    Ok(blocks.into_iter().flatten().collect())
}

fn per_state_block(
    kind: DecompositionKind,
    cfg: &SweepConfig,
    stream: u64,
    param: &ParameterPoint,
) -> Result<Vec<SweepRecord>, RunError> {
    let model = param.noise_model().map_err(zzgate_core::FidelityError::from)?;
    let est = mc_per_state_with_rng(kind, param.gamma, &model, cfg.reps, &mut point_rng(cfg.seed, stream))?;
    let mut rows = Vec::with_capacity(PROBE_COUNT + 1);
    rows.push(SweepRecord::new(Series::Gate(kind), param, est.gate, cfg.seed));
    for (j, s) in est.states.iter().enumerate() {
        rows.push(SweepRecord::new(Series::State(kind, (j + 1) as u8), param, *s, cfg.seed));
    }
    Ok(rows)
}

/// Inclusive grid helper for presets given in units of π.
pub fn pi_grid(start: f64, stop: f64, count: usize) -> Grid {
    Grid::new(start * std::f64::consts::PI, stop * std::f64::consts::PI, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use zzgate_core::experiment::{sweep, ZetaGrid};

    fn small() -> SweepConfig {
        SweepConfig {
            kinds: vec![DecompositionKind::Cp, DecompositionKind::Cz],
            gamma: Grid::new(0.0, 3.0, 3),
            sigma_theta: Grid::new(0.0, 0.2, 2),
            sigma_zeta: ZetaGrid::LockedToTheta,
            p: Grid::new(0.0, 0.01, 2),
            reps: 20,
            seed: 9,
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let cfg = small();
        let seq = sweep(&cfg).unwrap();
        assert_eq!(run_sweep(&cfg, Some(1)).unwrap(), seq);
        assert_eq!(run_sweep(&cfg, Some(4)).unwrap(), seq);
    }

    #[test]
    fn difference_map_matches_sequential() {
        let cfg = small();
        let seq = zzgate_core::experiment::fidelity_difference_map(&cfg).unwrap();
        assert_eq!(run_difference_map(&cfg, Some(3)).unwrap(), seq);
    }

    #[test]
    fn per_state_rows() {
        let mut cfg = small();
        cfg.gamma = Grid::point(0.0);
        let rows = run_per_state(DecompositionKind::Cp, &cfg, Some(2)).unwrap();
        assert_eq!(rows.len(), 4 * (PROBE_COUNT + 1));
        assert_eq!(rows[0].series, Series::Gate(DecompositionKind::Cp));
        assert_eq!(rows[16].series, Series::State(DecompositionKind::Cp, 16));
        let mean: f64 = rows[1..17].iter().map(|r| r.fidelity_mean).sum::<f64>() / 16.0;
        assert!((mean - rows[0].fidelity_mean).abs() < 1e-12);
    }
}
