//! CSV results and the JSON metadata sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use zzgate_core::channel::GAUSSIAN_SAMPLER;
use zzgate_core::experiment::{Grid, SweepConfig, SweepRecord, ZetaGrid, RNG_ALGORITHM};

use crate::RunError;

pub const HEADER: [&str; 9] =
    ["kind", "gamma", "sigma_theta", "sigma_zeta", "p", "fidelity_mean", "fidelity_std_error", "n_samples", "seed"];

/// Bumped whenever the CSV layout or the sampling scheme changes.
pub const ARTIFACT_VERSION: &str = concat!("zzgate-", env!("CARGO_PKG_VERSION"), "/csv-1");

/// 17 significant digits, enough to round-trip an f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.series.to_string(),
            format_float(r.gamma),
            format_float(r.sigma_theta),
            format_float(r.sigma_zeta),
            format_float(r.p),
            format_float(r.fidelity_mean),
            format_float(r.fidelity_std_error),
            r.n_samples.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[SweepRecord]) -> Result<String, RunError> {
    let mut buf = Vec::new();
    write_csv(&mut buf, records)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

/// `results.csv` → `results.meta.json`.
pub fn metadata_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

pub fn grid_json(g: &Grid) -> Value {
    json!({ "start": g.start, "stop": g.stop, "count": g.count })
}

/// Metadata for a sweep-shaped run. `extra` is merged in at top level.
pub fn sweep_metadata(description: &str, config: &SweepConfig, extra: Value) -> Value {
    let zeta = match &config.sigma_zeta {
        ZetaGrid::LockedToTheta => json!("locked to sigma_theta"),
        ZetaGrid::Grid(g) => grid_json(g),
    };
    let mut meta = json!({
        "artifact_version": ARTIFACT_VERSION,
        "description": description,
        "angle_unit": "radians",
        "seed": config.seed,
        "repetitions": config.reps,
        "kinds": config.kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
        "grids": {
            "gamma": grid_json(&config.gamma),
            "sigma_theta": grid_json(&config.sigma_theta),
            "sigma_zeta": zeta,
            "p": grid_json(&config.p),
        },
        "grid_order": "kind-major, then gamma, sigma_theta, sigma_zeta, p",
        "rng": RNG_ALGORITHM,
        "gaussian_sampler": GAUSSIAN_SAMPLER,
    });
    if let (Some(m), Value::Object(e)) = (meta.as_object_mut(), extra) {
        m.extend(e);
    }
    meta
}

/// Writes the CSV and its sidecar next to it.
pub fn write_outputs(csv_path: &Path, records: &[SweepRecord], metadata: &Value) -> Result<(), RunError> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file = std::io::BufWriter::new(std::fs::File::create(csv_path)?);
    write_csv(file, records)?;
    let mut text = serde_json::to_string_pretty(metadata)?;
    text.push('\n');
    std::fs::write(metadata_path(csv_path), text)?;
    Ok(())
}
