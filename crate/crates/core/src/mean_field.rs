//! The moment map, the composed mean-field map, and the damped Picard
//! iteration for its fixed point.
//!
//! One iteration freezes the current path, solves the linear equation for
//! its density trajectory, and projects the trajectory back to a moment
//! path. A fixed point of that composition is a mean-field path whose
//! density solves the nonlinear equation. The iteration is damped because
//! the map is not a contraction in general; non-convergence within the
//! iteration budget is a reported outcome, not an error, since uniqueness
//! of the fixed point is an open question.

use crate::drift::DriftSpec;
use crate::error::{Error, Result};
use crate::field::{DensityField, DensityTrajectory};
use crate::fpk::solve_linear_fpk;
use crate::grid::TimeGrid;
use crate::holder;
use crate::path::MeanFieldPath;

/// Default damping factor for the Picard update.
pub const DEFAULT_DAMPING: f64 = 0.5;
/// Default sup-norm residual tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Default iteration budget.
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

/// Parameters of the fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig {
    /// Moment order p of the mean-field term.
    pub moment_order: u32,
    /// Damping theta in (0, 1]: the update is
    /// `(1 - theta) * beta + theta * map(beta)`.
    pub damping: f64,
    /// Sup-norm residual below which the iteration stops.
    pub tolerance: f64,
    /// Maximum number of map evaluations.
    pub max_iterations: usize,
}

impl FixedPointConfig {
    pub fn new(moment_order: u32) -> Self {
        Self {
            moment_order,
            damping: DEFAULT_DAMPING,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.moment_order == 0 {
            return Err(Error::Config("moment_order must be at least 1".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Config(format!(
                "fixed_point.theta = {} must lie in (0, 1]",
                self.damping
            )));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::Config(format!(
                "fixed_point.epsilon = {} must be positive",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config(
                "fixed_point.max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of one fixed-point solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Number of map evaluations performed.
    pub iteration_count: usize,
    /// Sup-norm residual of each evaluation, in order.
    pub residual_history: Vec<f64>,
    /// Last entry of the residual history.
    pub final_residual: f64,
    pub converged: bool,
    /// Sup norm of the returned path.
    pub beta_sup_norm: f64,
    /// Discrete Hoelder-1/2 seminorm of the returned path.
    pub beta_holder_half: f64,
    /// Number of path values that had to be clamped into [-1, 1] before a
    /// drift evaluation. Zero in every normal run: exact moment paths are
    /// bounded by the mass.
    pub clamp_events: usize,
}

/// The moment map: `beta_k = int x^p m_k(x) dx` at every time node.
pub fn compute_beta(traj: &DensityTrajectory, moment_order: u32) -> MeanFieldPath {
    let values = traj
        .snapshots()
        .iter()
        .map(|s| s.moment(moment_order))
        .collect();
    MeanFieldPath::new(traj.time_grid(), values).expect("trajectory and path share the time grid")
}

/// Sup-norm distance between two paths on the same time grid.
pub fn residual_norm(a: &MeanFieldPath, b: &MeanFieldPath) -> Result<f64> {
    if a.time_grid() != b.time_grid() {
        return Err(Error::Config(
            "residual of mean-field paths on different time grids".into(),
        ));
    }
    Ok(a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

fn solve_and_project(
    beta: &MeanFieldPath,
    m0: &DensityField,
    spec: &DriftSpec,
    moment_order: u32,
) -> Result<(DensityTrajectory, MeanFieldPath, usize)> {
    let (clamped, clamp_events) = beta.clamped_to_unit();
    let traj = solve_linear_fpk(m0, &clamped, spec)?;
    let projected = compute_beta(&traj, moment_order);
    Ok((traj, projected, clamp_events))
}

/// One application of the composed map: solve the linear equation under
/// the given path, then take the p-th moment path of the solution.
pub fn apply_map(
    beta: &MeanFieldPath,
    m0: &DensityField,
    spec: &DriftSpec,
    moment_order: u32,
) -> Result<MeanFieldPath> {
    solve_and_project(beta, m0, spec, moment_order).map(|(_, path, _)| path)
}

/// Damped Picard iteration for a fixed point of the composed map.
///
/// Starts from the constant path holding the initial moment
/// `int x^p m_0 dx` and stops when the sup-norm residual of a map
/// evaluation drops below the tolerance or the budget is exhausted. The
/// returned trajectory is always the solve for the returned path, so a
/// converged result satisfies `|apply_map(beta) - beta| <= epsilon` as
/// stated.
pub fn solve_fixed_point(
    m0: &DensityField,
    spec: &DriftSpec,
    tgrid: TimeGrid,
    cfg: &FixedPointConfig,
) -> Result<(DensityTrajectory, MeanFieldPath, SolveReport)> {
    cfg.validate()?;
    let mut beta = MeanFieldPath::constant(tgrid, m0.moment(cfg.moment_order))?;
    let mut residual_history = Vec::new();
    let mut clamp_events = 0usize;

    for iteration in 1..=cfg.max_iterations {
        let (traj, projected, clamps) =
            solve_and_project(&beta, m0, spec, cfg.moment_order)?;
        clamp_events += clamps;
        let residual = residual_norm(&projected, &beta)?;
        residual_history.push(residual);
        let converged = residual <= cfg.tolerance;
        if converged || iteration == cfg.max_iterations {
            let report = SolveReport {
                iteration_count: iteration,
                final_residual: residual,
                converged,
                beta_sup_norm: holder::sup_norm(&beta),
                beta_holder_half: holder::holder_seminorm(&beta, 0.5),
                clamp_events,
                residual_history,
            };
            return Ok((traj, beta, report));
        }
        beta = beta.damped_toward(&projected, cfg.damping)?;
    }
    unreachable!("the iteration returns at or before max_iterations")
}
