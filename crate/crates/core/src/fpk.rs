//! Implicit flux-form solver for the linear Fokker-Planck equation with a
//! prescribed mean-field path.
//!
//! The equation `d_t m = 1/2 d_xx m - d_x(b(x, beta_t) m)` with zero
//! Dirichlet data is discretized in conservative flux form
//! `d_t m = -d_x F`, `F = b m - 1/2 d_x m`, with upwinded advective flux
//! and central diffusive flux at the cell faces, stepped by backward
//! Euler. The resulting tridiagonal matrix has positive diagonal,
//! nonpositive off-diagonals, and unit column sums in the interior
//! (above 1 in the wall-adjacent columns), i.e. it is an M-matrix: the
//! step preserves nonnegativity exactly and only removes mass, through
//! the wall faces. Coefficients are frozen at the new time level, so the
//! step from t_k to t_{k+1} evaluates beta at k+1.

use crate::error::{Error, Result};
use crate::field::{DensityField, DensityTrajectory, MASS_MONOTONE_SLACK};
use crate::path::MeanFieldPath;
use crate::drift::DriftSpec;

/// Tridiagonal system for the interior unknowns of one implicit step.
///
/// `lower[0]` and `upper[n-1]` are unused and kept at zero. Validity of a
/// step requires the M-matrix structure: positive diagonal, nonpositive
/// off-diagonals, positive column-dominance margin.
#[derive(Debug, Clone)]
pub struct StepSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl StepSystem {
    /// Minimum over columns of `diag_j + lower_{j+1} + upper_{j-1}`.
    ///
    /// With nonpositive off-diagonals this is the column diagonal-dominance
    /// margin; for the implicit flux step it equals 1 in the interior and
    /// exceeds 1 next to the walls, which is exactly the mass accounting
    /// of the scheme.
    pub fn dominance_margin(&self) -> f64 {
        let n = self.diag.len();
        let mut margin = f64::INFINITY;
        for j in 0..n {
            let below = if j + 1 < n { self.lower[j + 1] } else { 0.0 };
            let above = if j > 0 { self.upper[j - 1] } else { 0.0 };
            margin = margin.min(self.diag[j] + below + above);
        }
        margin
    }

    fn structure_violation(&self) -> Option<String> {
        let n = self.diag.len();
        for j in 0..n {
            if !(self.diag[j] > 0.0) {
                return Some(format!("nonpositive diagonal {} at row {j}", self.diag[j]));
            }
            if j > 0 && self.lower[j] > 0.0 {
                return Some(format!("positive sub-diagonal {} at row {j}", self.lower[j]));
            }
            if j + 1 < n && self.upper[j] > 0.0 {
                return Some(format!("positive super-diagonal {} at row {j}", self.upper[j]));
            }
        }
        let margin = self.dominance_margin();
        if !(margin > 0.0) {
            return Some(format!("nonpositive dominance margin {margin}"));
        }
        None
    }

    /// Thomas elimination. Fails if the M-matrix structure is violated or
    /// an elimination pivot degenerates; never clamps the solution.
    pub fn solve(mut self) -> Result<Vec<f64>> {
        if let Some(msg) = self.structure_violation() {
            return Err(Error::Numerical(format!(
                "tridiagonal system lost M-matrix structure: {msg}"
            )));
        }
        let n = self.diag.len();
        for j in 1..n {
            let w = self.lower[j] / self.diag[j - 1];
            self.diag[j] -= w * self.upper[j - 1];
            self.rhs[j] -= w * self.rhs[j - 1];
            if !(self.diag[j] > 0.0) || !self.diag[j].is_finite() {
                return Err(Error::Numerical(format!(
                    "tridiagonal elimination pivot {} degenerated at row {j}",
                    self.diag[j]
                )));
            }
        }
        let mut x = vec![0.0; n];
        x[n - 1] = self.rhs[n - 1] / self.diag[n - 1];
        for j in (0..n - 1).rev() {
            x[j] = (self.rhs[j] - self.upper[j] * x[j + 1]) / self.diag[j];
        }
        Ok(x)
    }
}

/// Assembles the backward-Euler flux system for one step. `beta` is the
/// mean-field value at the *new* time level.
fn assemble(m_k: &DensityField, beta: f64, spec: &DriftSpec, dt: f64) -> StepSystem {
    let grid = m_k.grid();
    let m = grid.interior_count();
    let h = grid.spacing();
    let r = dt / h;
    let half_inv_h = 0.5 / h;

    // drift at the cell faces x_{j+1/2}, j = 0..=M (0 is the left wall face)
    let face_drift: Vec<f64> = (0..=m).map(|f| spec.eval(grid.face(f), beta)).collect();

    let mut sys = StepSystem {
        lower: vec![0.0; m],
        diag: vec![0.0; m],
        upper: vec![0.0; m],
        rhs: m_k.values()[1..=m].to_vec(),
    };
    for j in 1..=m {
        let idx = j - 1;
        let b_left = face_drift[j - 1];
        let b_right = face_drift[j];
        let up_right = b_right.max(0.0); // upwind weights
        let down_right = b_right.min(0.0);
        let up_left = b_left.max(0.0);
        let down_left = b_left.min(0.0);
        sys.diag[idx] = 1.0 + r * (up_right - down_left + 1.0 / h);
        if idx > 0 {
            sys.lower[idx] = r * (-up_left - half_inv_h);
        }
        if idx + 1 < m {
            sys.upper[idx] = r * (down_right - half_inv_h);
        }
    }
    sys
}

/// One backward-Euler step of the killed Fokker-Planck equation.
///
/// Returns a valid density field with boundary values exactly zero and
/// mass no larger than the input's.
pub fn step(m_k: &DensityField, beta: f64, spec: &DriftSpec, dt: f64) -> Result<DensityField> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Config(format!("time step dt = {dt} must be positive")));
    }
    if !(beta.abs() <= 1.0) {
        return Err(Error::Config(format!(
            "mean-field value beta = {beta} is outside [-1, 1]; clamp before stepping"
        )));
    }
    let grid = m_k.grid();
    let sys = assemble(m_k, beta, spec, dt);
    let interior = sys.solve().map_err(|e| match e {
        Error::Numerical(msg) => Error::Numerical(format!(
            "{msg} (h = {:.6e}, dt = {:.6e})",
            grid.spacing(),
            dt
        )),
        other => other,
    })?;
    let mut values = vec![0.0; grid.node_count()];
    values[1..=grid.interior_count()].copy_from_slice(&interior);
    DensityField::from_step_values(grid, values)
}

/// Solves the linear Fokker-Planck equation over the path's time grid:
/// the map from a frozen mean-field path to its density trajectory.
pub fn solve_linear_fpk(
    m0: &DensityField,
    beta: &MeanFieldPath,
    spec: &DriftSpec,
) -> Result<DensityTrajectory> {
    if let Some((k, &v)) = beta
        .values()
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.abs() <= 1.0))
    {
        return Err(Error::Config(format!(
            "mean-field path value {v} at time index {k} is outside [-1, 1]"
        )));
    }
    let tgrid = beta.time_grid();
    let dt = tgrid.dt();
    let mut snapshots = Vec::with_capacity(tgrid.node_count());
    snapshots.push(m0.clone());
    let mut mass = m0.mass();
    for k in 0..tgrid.step_count() {
        let next = step(snapshots.last().unwrap(), beta.value(k + 1), spec, dt)
            .map_err(|e| match e {
                Error::Numerical(msg) => {
                    Error::Numerical(format!("{msg} at time step {}", k + 1))
                }
                other => other,
            })?;
        let next_mass = next.mass();
        if next_mass > mass + MASS_MONOTONE_SLACK {
            return Err(Error::Numerical(format!(
                "mass increased from {mass} to {next_mass} at time step {}",
                k + 1
            )));
        }
        mass = next_mass;
        snapshots.push(next);
    }
    DensityTrajectory::new(tgrid, snapshots)
}

/// Quadrature mass at each time node of a trajectory.
pub fn mass_history(traj: &DensityTrajectory) -> Vec<f64> {
    traj.mass_history()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::bump_initial_density;
    use crate::grid::{SpaceGrid, TimeGrid};
    use std::f64::consts::PI;

    fn grid(m: usize) -> SpaceGrid {
        SpaceGrid::new(m).unwrap()
    }

    /// Discrete eigenvalue of -1/2 d_xx with Dirichlet data on the grid.
    fn discrete_decay_rate(n: usize, h: f64) -> f64 {
        let s = (n as f64 * PI * h / 4.0).sin();
        2.0 / (h * h) * s * s
    }

    #[test]
    fn zero_field_is_a_fixed_point_of_the_step() {
        let g = grid(64);
        let m = DensityField::zero(g);
        let spec = DriftSpec::power(1.0, 2).unwrap();
        let next = step(&m, 0.5, &spec, 1e-3).unwrap();
        assert!(next.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_drift_step_decays_the_ground_mode_by_the_backward_euler_factor() {
        let g = grid(200);
        let h = g.spacing();
        let raw = DensityField::from_fn(g, |x| (PI * (x + 1.0) / 2.0).sin()).unwrap();
        let scale = 1.0 / raw.mass();
        let eta1 = DensityField::from_fn(g, |x| scale * (PI * (x + 1.0) / 2.0).sin()).unwrap();
        let dt = 1e-3;
        let next = step(&eta1, 0.0, &DriftSpec::zero(), dt).unwrap();
        let factor = 1.0 / (1.0 + dt * discrete_decay_rate(1, h));
        for j in 1..=g.interior_count() {
            let ratio = next.values()[j] / eta1.values()[j];
            assert!(
                (ratio - factor).abs() < 1e-12,
                "node {j}: ratio {ratio} vs {factor}"
            );
        }
        // the continuum rate pi^2/8 is the h -> 0 limit of the discrete one
        assert!((discrete_decay_rate(1, h) - PI * PI / 8.0).abs() < 1e-3);
    }

    #[test]
    fn zero_drift_step_preserves_parity() {
        let g = grid(101);
        let m0 = bump_initial_density(g);
        let next = step(&m0, 0.0, &DriftSpec::zero(), 5e-4).unwrap();
        let v = next.values();
        let n = v.len();
        for j in 0..n {
            assert!(
                (v[j] - v[n - 1 - j]).abs() <= 1e-13,
                "asymmetry at node {j}: {} vs {}",
                v[j],
                v[n - 1 - j]
            );
        }
    }

    #[test]
    fn step_rejects_out_of_range_beta_and_dt() {
        let g = grid(16);
        let m0 = bump_initial_density(g);
        assert!(matches!(
            step(&m0, 1.5, &DriftSpec::zero(), 1e-3),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            step(&m0, 0.0, &DriftSpec::zero(), 0.0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            step(&m0, f64::NAN, &DriftSpec::zero(), 1e-3),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn malformed_system_is_reported_not_clamped() {
        let sys = StepSystem {
            lower: vec![0.0, -2.0],
            diag: vec![1.0, 1.0],
            upper: vec![-2.0, 0.0],
            rhs: vec![1.0, 1.0],
        };
        // columns sum to -1: dominance lost
        let err = sys.solve().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("dominance margin"), "{msg}");

        let sys = StepSystem {
            lower: vec![0.0, 0.5],
            diag: vec![1.0, 1.0],
            upper: vec![0.0, 0.0],
            rhs: vec![1.0, 1.0],
        };
        let err = sys.solve().unwrap_err();
        assert!(err.to_string().contains("positive sub-diagonal"));
    }

    #[test]
    fn thomas_reproduces_a_known_solution() {
        // A x = rhs with A = tridiag(-1, 3, -1), x = (1, 2, 3)
        let sys = StepSystem {
            lower: vec![0.0, -1.0, -1.0],
            diag: vec![3.0, 3.0, 3.0],
            upper: vec![-1.0, -1.0, 0.0],
            rhs: vec![1.0, 3.0, 7.0],
        };
        let x = sys.solve().unwrap();
        for (got, want) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn mass_is_nonincreasing_and_density_stays_nonnegative() {
        let g = grid(150);
        let m0 = bump_initial_density(g);
        let tgrid = TimeGrid::new(0.2, 400).unwrap();
        let spec = DriftSpec::affine(0.3, 0.5).unwrap();
        let beta = MeanFieldPath::constant(tgrid, 0.8).unwrap();
        let traj = solve_linear_fpk(&m0, &beta, &spec).unwrap();
        let masses = traj.mass_history();
        for w in masses.windows(2) {
            assert!(w[1] <= w[0] + MASS_MONOTONE_SLACK);
        }
        assert!(traj.min_value() >= -1e-12);
        assert!(masses[0] <= 1.0 + 1e-10);
        for s in traj.snapshots() {
            let v = s.values();
            assert_eq!(v[0], 0.0);
            assert_eq!(v[v.len() - 1], 0.0);
        }
        // strong drift toward the right wall actually kills mass
        assert!(masses[masses.len() - 1] < 0.9 * masses[0]);
    }

    #[test]
    fn discrete_comparison_principle() {
        // if m <= m' nodewise then the step preserves the ordering
        let g = grid(80);
        let lower = DensityField::from_fn(g, |x| 0.4 * (1.0 - x * x)).unwrap();
        let upper = DensityField::from_fn(g, |x| 0.4 * (1.0 - x * x) + 0.3 * (1.0 - x * x).powi(2))
            .unwrap();
        let spec = DriftSpec::affine(-0.5, 0.7).unwrap();
        let a = step(&lower, 0.6, &spec, 2e-3).unwrap();
        let b = step(&upper, 0.6, &spec, 2e-3).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!(x <= &(y + 1e-14));
        }
    }

    #[test]
    fn power_drift_with_zero_path_equals_pure_heat() {
        let g = grid(100);
        let m0 = bump_initial_density(g);
        let tgrid = TimeGrid::new(0.1, 100).unwrap();
        let beta = MeanFieldPath::zero(tgrid);
        let with_drift =
            solve_linear_fpk(&m0, &beta, &DriftSpec::power(1.0, 2).unwrap()).unwrap();
        let heat = solve_linear_fpk(&m0, &beta, &DriftSpec::zero()).unwrap();
        assert_eq!(with_drift.max_abs_diff(&heat).unwrap(), 0.0);
    }

    #[test]
    fn solver_attaches_time_index_to_failures() {
        let g = grid(16);
        let m0 = bump_initial_density(g);
        let tgrid = TimeGrid::new(1.0, 4).unwrap();
        let mut values = vec![0.0; tgrid.node_count()];
        values[2] = 2.0; // out of range at index 2
        let beta = MeanFieldPath::new(tgrid, values).unwrap();
        let err = solve_linear_fpk(&m0, &beta, &DriftSpec::zero()).unwrap_err();
        assert!(err.to_string().contains("index 2"), "{err}");
    }
}
