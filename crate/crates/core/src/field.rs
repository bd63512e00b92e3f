//! Density fields on the space grid and their time trajectories.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::grid::{SpaceGrid, TimeGrid};
use crate::quad::adaptive_simpson;

/// Roundoff slack below zero tolerated in a density value.
pub const NEGATIVITY_SLACK: f64 = 1e-12;
/// Per-step slack for the mass-monotonicity invariant.
pub const MASS_MONOTONE_SLACK: f64 = 1e-12;

/// Grid values of a density m(.) with zero Dirichlet boundary data.
///
/// The boundary nodes are identically zero (absorption at the walls) and
/// interior values are nonnegative up to [`NEGATIVITY_SLACK`]. The total
/// quadrature mass of a killed density never exceeds 1 in the continuum;
/// on coarse grids the trapezoid mass of the initial datum can overshoot
/// 1 by its quadrature error, so the mass cap is asserted by the solver
/// tests on the grids where it is meaningful rather than enforced here.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    grid: SpaceGrid,
    values: Vec<f64>,
}

fn validate_values(grid: SpaceGrid, values: &[f64]) -> std::result::Result<(), String> {
    if values.len() != grid.node_count() {
        return Err(format!(
            "density has {} values but the grid has {} nodes",
            values.len(),
            grid.node_count()
        ));
    }
    let last = values.len() - 1;
    if values[0] != 0.0 || values[last] != 0.0 {
        return Err(format!(
            "boundary values must be exactly 0, got ({}, {})",
            values[0], values[last]
        ));
    }
    for (j, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(format!("non-finite density value {v} at node {j}"));
        }
        if v < -NEGATIVITY_SLACK {
            return Err(format!("negative density value {v} at node {j}"));
        }
    }
    Ok(())
}

impl DensityField {
    /// Builds a field from raw node values, validating the Dirichlet and
    /// positivity invariants.
    pub fn from_values(grid: SpaceGrid, values: Vec<f64>) -> Result<Self> {
        validate_values(grid, &values).map_err(Error::Config)?;
        Ok(Self { grid, values })
    }

    /// Same validation, reported as a numerical failure. Used by the
    /// solver, where an invalid field means the scheme broke down rather
    /// than that the caller misconfigured anything.
    pub(crate) fn from_step_values(grid: SpaceGrid, values: Vec<f64>) -> Result<Self> {
        validate_values(grid, &values).map_err(Error::Numerical)?;
        Ok(Self { grid, values })
    }

    /// Samples `f` at the interior nodes; boundary nodes are set to 0.
    pub fn from_fn(grid: SpaceGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = grid.node_count();
        let mut values = vec![0.0; n];
        for j in 1..n - 1 {
            values[j] = f(grid.node(j));
        }
        Self::from_values(grid, values)
    }

    pub fn zero(grid: SpaceGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.node_count()],
        }
    }

    pub fn grid(&self) -> SpaceGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Composite-trapezoid approximation of the weighted integral
    /// `int x^p m(x) dx` over (-1, 1); `p = 0` gives the mass.
    ///
    /// Terms are accumulated in symmetric pairs (j, M+1-j). Together with
    /// the exact grid symmetry this makes odd moments of even fields
    /// cancel exactly instead of to rounding.
    pub fn moment(&self, p: u32) -> f64 {
        let m = self.grid.interior_count();
        let h = self.grid.spacing();
        let pw = p as i32;
        let mut sum = 0.0;
        let (mut lo, mut hi) = (1usize, m);
        while lo < hi {
            sum += self.grid.node(lo).powi(pw) * self.values[lo]
                + self.grid.node(hi).powi(pw) * self.values[hi];
            lo += 1;
            hi -= 1;
        }
        if lo == hi {
            sum += self.grid.node(lo).powi(pw) * self.values[lo];
        }
        h * sum
    }

    pub fn mass(&self) -> f64 {
        self.moment(0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Max-norm distance to another field on the same grid.
    pub fn max_abs_diff(&self, other: &DensityField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Config(
                "cannot compare densities on different grids".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Unnormalized bump profile `exp(1/(x^2 - 1))` on (-1, 1), zero outside.
fn bump_unnormalized(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 / (x * x - 1.0)).exp()
    }
}

static BUMP_NORMALIZATION: OnceLock<f64> = OnceLock::new();

/// Normalization constant of the bump density, computed once by adaptive
/// quadrature to 1e-12 so the initial density is grid-independent.
pub fn bump_normalization() -> f64 {
    *BUMP_NORMALIZATION
        .get_or_init(|| 1.0 / adaptive_simpson(bump_unnormalized, -1.0, 1.0, 1e-12))
}

/// The normalized continuum bump density `kappa * exp(1/(x^2-1))`.
pub fn bump_density(x: f64) -> f64 {
    bump_normalization() * bump_unnormalized(x)
}

/// The smooth, even, compactly supported initial density sampled on the
/// grid. Its continuum integral is exactly 1 by construction of the
/// normalization constant; the grid mass then differs from 1 only by
/// trapezoid error.
pub fn bump_initial_density(grid: SpaceGrid) -> DensityField {
    DensityField::from_fn(grid, bump_density).expect("bump density is a valid field")
}

/// One density field per time node.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTrajectory {
    tgrid: TimeGrid,
    snapshots: Vec<DensityField>,
}

impl DensityTrajectory {
    pub fn new(tgrid: TimeGrid, snapshots: Vec<DensityField>) -> Result<Self> {
        if snapshots.len() != tgrid.node_count() {
            return Err(Error::Config(format!(
                "trajectory has {} snapshots but the time grid has {} nodes",
                snapshots.len(),
                tgrid.node_count()
            )));
        }
        let grid = snapshots[0].grid();
        if snapshots.iter().any(|s| s.grid() != grid) {
            return Err(Error::Config(
                "trajectory snapshots live on different space grids".into(),
            ));
        }
        let mut prev = f64::INFINITY;
        for (k, s) in snapshots.iter().enumerate() {
            let mass = s.mass();
            if mass > prev + MASS_MONOTONE_SLACK {
                return Err(Error::Config(format!(
                    "mass increases at time index {k}: {prev} -> {mass}"
                )));
            }
            prev = mass;
        }
        Ok(Self { tgrid, snapshots })
    }

    pub fn time_grid(&self) -> TimeGrid {
        self.tgrid
    }

    pub fn space_grid(&self) -> SpaceGrid {
        self.snapshots[0].grid()
    }

    pub fn snapshot(&self, k: usize) -> &DensityField {
        &self.snapshots[k]
    }

    pub fn snapshots(&self) -> &[DensityField] {
        &self.snapshots
    }

    /// Quadrature mass at each time node.
    pub fn mass_history(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.mass()).collect()
    }

    /// Smallest node value over the whole trajectory.
    pub fn min_value(&self) -> f64 {
        self.snapshots
            .iter()
            .map(|s| s.min_value())
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest nodewise difference to another trajectory on the same grids.
    pub fn max_abs_diff(&self, other: &DensityTrajectory) -> Result<f64> {
        if self.tgrid != other.tgrid {
            return Err(Error::Config(
                "cannot compare trajectories on different time grids".into(),
            ));
        }
        let mut worst = 0.0f64;
        for (a, b) in self.snapshots.iter().zip(&other.snapshots) {
            worst = worst.max(a.max_abs_diff(b)?);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(m: usize) -> SpaceGrid {
        SpaceGrid::new(m).unwrap()
    }

    #[test]
    fn bump_normalization_matches_independent_quadrature() {
        // 1 / 0.44399381616807944, computed independently to 20 digits.
        assert!((bump_normalization() - 2.252_283_621_043_581).abs() < 1e-10);
    }

    #[test]
    fn bump_center_value_is_kappa_over_e() {
        let g = grid(399); // odd M puts a node exactly at x = 0
        let field = bump_initial_density(g);
        let center = field.values()[200];
        assert!((center - bump_normalization() / std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn bump_is_even_on_the_grid() {
        let g = grid(400);
        let f = bump_initial_density(g);
        let v = f.values();
        for j in 0..v.len() {
            assert_eq!(v[j], v[v.len() - 1 - j], "node {j}");
        }
    }

    #[test]
    fn bump_grid_mass_is_close_to_one() {
        // Trapezoid on this flat-endpoint profile converges much faster
        // than O(h^2); at M = 400 the mass is 1 to machine precision.
        let f = bump_initial_density(grid(400));
        assert!((f.mass() - 1.0).abs() < 1e-12);
        let coarse = bump_initial_density(grid(100));
        assert!((coarse.mass() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn zero_field_has_zero_moments() {
        let f = DensityField::zero(grid(31));
        for p in 0..6 {
            assert_eq!(f.moment(p), 0.0);
        }
    }

    #[test]
    fn even_field_odd_moment_cancels_exactly() {
        let f = bump_initial_density(grid(250));
        assert_eq!(f.moment(1), 0.0);
        assert_eq!(f.moment(3), 0.0);
        assert_eq!(f.moment(5), 0.0);
    }

    #[test]
    fn parabolic_second_moment_matches_closed_form() {
        // m(x) = (3/4)(1 - x^2): int x^2 m dx = 1/5 exactly in the continuum.
        let g = grid(400);
        let f = DensityField::from_fn(g, |x| 0.75 * (1.0 - x * x)).unwrap();
        let h = g.spacing();
        assert!((f.moment(2) - 0.2).abs() < h * h, "err {}", f.moment(2) - 0.2);
        // mass of the same profile is 1 up to O(h^2)
        assert!((f.mass() - 1.0).abs() < h * h);
    }

    #[test]
    fn invalid_fields_are_rejected() {
        let g = grid(3);
        assert!(DensityField::from_values(g, vec![0.0; 4]).is_err());
        assert!(DensityField::from_values(g, vec![0.1, 1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(DensityField::from_values(g, vec![0.0, 1.0, -1e-3, 1.0, 0.0]).is_err());
        assert!(DensityField::from_values(g, vec![0.0, f64::NAN, 0.0, 0.0, 0.0]).is_err());
        // slightly negative interior values are accepted as roundoff
        assert!(DensityField::from_values(g, vec![0.0, 1.0, -1e-13, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn trajectory_rejects_mass_growth() {
        let g = grid(50);
        let tg = TimeGrid::new(1.0, 1).unwrap();
        let low = DensityField::from_fn(g, |x| 0.5 * (1.0 - x * x)).unwrap();
        let high = DensityField::from_fn(g, |x| 0.75 * (1.0 - x * x)).unwrap();
        assert!(DensityTrajectory::new(tg, vec![high.clone(), low.clone()]).is_ok());
        let err = DensityTrajectory::new(tg, vec![low, high]).unwrap_err();
        assert!(err.to_string().contains("mass increases"));
    }
}
