//! Linear least squares for the small-angle coefficient fits.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::channel::CoherentErrorDraw;
use crate::decomposition::{Decomposition, DecompositionKind};
use crate::error::FidelityError;
use crate::fidelity::gate_fidelity_coherent_overlap;

/// Solves `min ‖Xβ − y‖²` through the normal equations with partial
/// pivoting. Returns `None` when the design is rank deficient.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let k = rows.first()?.len();
    assert_eq!(rows.len(), y.len(), "design and response lengths differ");
    // augmented [XᵀX | Xᵀy]
    let mut a = vec![vec![0.0; k + 1]; k];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..k {
            for j in 0..k {
                a[i][j] += row[i] * row[j];
            }
            a[i][k] += row[i] * yi;
        }
    }
    let scale = (0..k).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    for col in 0..k {
        let pivot = (col..k).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[pivot][col].abs() <= 1e-13 * scale {
            return None;
        }
        a.swap(col, pivot);
        for r in 0..k {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                        *x -= f * p;
                    }
                }
            }
        }
    }
    Some((0..k).map(|i| a[i][k] / a[i][i]).collect())
}

/// Fits `1 − F = θ²(c₀ + c₁ sin γ + c₂ cos γ)` to the numeric coherent
/// fidelity of the CZ compilation with `ζ = θ`, on a `n_theta × n_gamma`
/// grid with `θ ∈ (0, theta_max]` and `γ ∈ [0, 2π)`.
pub fn fit_cz_locked_coefficients(theta_max: f64, n_theta: usize, n_gamma: usize) -> Result<[f64; 3], FidelityError> {
    let mut rows = Vec::with_capacity(n_theta * n_gamma);
    let mut y = Vec::with_capacity(n_theta * n_gamma);
    for gi in 0..n_gamma {
        let gamma = 2.0 * PI * gi as f64 / n_gamma as f64;
        let d = Decomposition::build(DecompositionKind::Cz, gamma);
        let (s, c) = (libm::sin(gamma), libm::cos(gamma));
        for ti in 1..=n_theta {
            let theta = theta_max * ti as f64 / n_theta as f64;
            let f = gate_fidelity_coherent_overlap(&d, &CoherentErrorDraw::new(theta, theta))?.value();
            let t2 = theta * theta;
            rows.push(vec![t2, t2 * s, t2 * c]);
            y.push(1.0 - f);
        }
    }
    let beta = least_squares(&rows, &y).ok_or(FidelityError::SingularFit)?;
    Ok([beta[0], beta[1], beta[2]])
}
