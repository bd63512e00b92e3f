//! Discrete Hoelder-norm diagnostics for mean-field paths and density
//! trajectories.
//!
//! These are grid analogues of the continuum seminorms (a grid seminorm
//! is a lower bound for the continuum one); path seminorms use exhaustive
//! pair enumeration, the space-time seminorm subsamples nodes with a
//! deterministic stride so the pair count stays bounded.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::field::DensityTrajectory;
use crate::path::MeanFieldPath;

/// Pair-count budget for the space-time seminorm.
const MAX_PARABOLIC_PAIRS: usize = 1_000_000;

/// Sup norm, Hoelder seminorm, and their sum for one path at one exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub sup_norm: f64,
    pub holder_seminorm: f64,
    pub total: f64,
    pub gamma: f64,
}

/// Max over time nodes of |beta_k|.
pub fn sup_norm(path: &MeanFieldPath) -> f64 {
    path.values().iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Discrete Hoelder seminorm `max_{k != l} |b_k - b_l| / |t_k - t_l|^gamma`
/// by exhaustive enumeration of node pairs.
pub fn holder_seminorm(path: &MeanFieldPath, gamma: f64) -> f64 {
    assert!(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
    assert!(path.len() >= 2, "seminorm needs at least two nodes");
    let tgrid = path.time_grid();
    let values = path.values();
    let row_max = |k: usize| -> f64 {
        let (bk, tk) = (values[k], tgrid.time(k));
        let mut best = 0.0f64;
        for l in k + 1..values.len() {
            let q = (values[l] - bk).abs() / (tgrid.time(l) - tk).powf(gamma);
            best = best.max(q);
        }
        best
    };
    #[cfg(feature = "parallel")]
    {
        (0..values.len() - 1)
            .into_par_iter()
            .map(row_max)
            .reduce(|| 0.0, f64::max)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..values.len() - 1).map(row_max).fold(0.0, f64::max)
    }
}

/// Sup norm and seminorm bundled for reporting.
pub fn norm_report(path: &MeanFieldPath, gamma: f64) -> NormReport {
    let sup = sup_norm(path);
    let semi = holder_seminorm(path, gamma);
    NormReport {
        sup_norm: sup,
        holder_seminorm: semi,
        total: sup + semi,
        gamma,
    }
}

/// Discrete parabolic seminorm of a space-time field:
/// `max |u(z1) - u(z2)| / rho(z1, z2)^gamma` with
/// `rho = |x1 - x2| + |t1 - t2|^(1/2)`, over node pairs subsampled with a
/// deterministic stride keeping the pair count at or below 10^6.
pub fn parabolic_seminorm(traj: &DensityTrajectory, gamma: f64) -> f64 {
    assert!(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
    let grid = traj.space_grid();
    let tgrid = traj.time_grid();
    let nodes = grid.node_count() * tgrid.node_count();

    // largest sample count whose pair count fits the budget
    let max_samples = ((2.0 * MAX_PARABOLIC_PAIRS as f64).sqrt() as usize).max(2);
    let stride = nodes.div_ceil(max_samples);
    let samples: Vec<(f64, f64, f64)> = (0..nodes)
        .step_by(stride)
        .map(|flat| {
            let k = flat / grid.node_count();
            let j = flat % grid.node_count();
            (grid.node(j), tgrid.time(k), traj.snapshot(k).values()[j])
        })
        .collect();

    let row_max = |i: usize| -> f64 {
        let (xi, ti, ui) = samples[i];
        let mut best = 0.0f64;
        for &(xj, tj, uj) in &samples[i + 1..] {
            let rho = (xi - xj).abs() + (ti - tj).abs().sqrt();
            let q = (ui - uj).abs() / rho.powf(gamma);
            best = best.max(q);
        }
        best
    };
    #[cfg(feature = "parallel")]
    {
        (0..samples.len().saturating_sub(1))
            .into_par_iter()
            .map(row_max)
            .reduce(|| 0.0, f64::max)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..samples.len().saturating_sub(1))
            .map(row_max)
            .fold(0.0, f64::max)
    }
}
