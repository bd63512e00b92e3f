//! Uniform discretizations of the interval (-1, 1) and the time horizon.

use crate::error::{Error, Result};

/// Minimum number of interior nodes for a [`SpaceGrid`].
pub const MIN_INTERIOR_NODES: usize = 3;

/// Uniform grid on [-1, 1] with `M` interior nodes.
///
/// Nodes are `x_j = (2j - (M+1)) / (M+1)` for `j = 0..=M+1`, so
/// `x_0 = -1` and `x_{M+1} = +1` are exact and the grid is exactly
/// symmetric: `x_j + x_{M+1-j} = 0` in floating point, not just up to
/// rounding. Exact symmetry is what makes odd moments of even fields
/// cancel pairwise in quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceGrid {
    interior_count: usize,
}

impl SpaceGrid {
    pub fn new(interior_count: usize) -> Result<Self> {
        if interior_count < MIN_INTERIOR_NODES {
            return Err(Error::Config(format!(
                "grid.M = {interior_count} is below the minimum of {MIN_INTERIOR_NODES} interior nodes"
            )));
        }
        Ok(Self { interior_count })
    }

    /// Number of interior nodes M.
    pub fn interior_count(&self) -> usize {
        self.interior_count
    }

    /// Total number of nodes including both boundary nodes, M + 2.
    pub fn node_count(&self) -> usize {
        self.interior_count + 2
    }

    /// Grid spacing h = 2 / (M + 1).
    pub fn spacing(&self) -> f64 {
        2.0 / (self.interior_count as f64 + 1.0)
    }

    /// Node position x_j for j = 0..=M+1.
    pub fn node(&self, j: usize) -> f64 {
        debug_assert!(j < self.node_count());
        let denom = self.interior_count as f64 + 1.0;
        (2.0 * j as f64 - denom) / denom
    }

    /// Midpoint between nodes j and j+1 (cell face position).
    pub fn face(&self, j: usize) -> f64 {
        debug_assert!(j + 1 < self.node_count());
        0.5 * (self.node(j) + self.node(j + 1))
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.node_count()).map(|j| self.node(j))
    }
}

/// Uniform time grid on [0, T] with `n_t` steps of size `dt = T / n_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    step_count: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, step_count: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::Config(format!(
                "grid.T = {horizon} must be a positive finite horizon"
            )));
        }
        if step_count == 0 {
            return Err(Error::Config("grid.n_t must be at least 1".into()));
        }
        Ok(Self {
            horizon,
            step_count,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of time steps n_t (there are n_t + 1 time nodes).
    pub fn step_count(&self) -> usize {
        self.step_count
    }

    pub fn node_count(&self) -> usize {
        self.step_count + 1
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.step_count as f64
    }

    /// Time node t_k; the endpoints t_0 = 0 and t_{n_t} = T are exact.
    pub fn time(&self, k: usize) -> f64 {
        debug_assert!(k <= self.step_count);
        if k == self.step_count {
            self.horizon
        } else {
            k as f64 * self.horizon / self.step_count as f64
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.node_count()).map(|k| self.time(k))
    }

    /// Index of the time node closest to `t`.
    pub fn nearest_node(&self, t: f64) -> usize {
        let k = (t / self.dt()).round();
        (k.max(0.0) as usize).min(self.step_count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_node_grid_is_exact() {
        let g = SpaceGrid::new(3).unwrap();
        assert_eq!(g.spacing(), 0.5);
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn midpoint_node_is_zero_for_odd_m() {
        let g = SpaceGrid::new(399).unwrap();
        assert_eq!(g.spacing(), 0.005);
        assert_eq!(g.node(200), 0.0);
    }

    #[test]
    fn too_few_interior_nodes_is_a_config_error() {
        let err = SpaceGrid::new(2).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("minimum of 3"));
    }

    #[test]
    fn grid_symmetry_is_exact() {
        for m in [3usize, 10, 99, 400, 1001] {
            let g = SpaceGrid::new(m).unwrap();
            for j in 0..g.node_count() {
                let mirrored = g.node(g.node_count() - 1 - j);
                assert_eq!(g.node(j) + mirrored, 0.0, "M={m} j={j}");
            }
            assert_eq!(g.node(0), -1.0);
            assert_eq!(g.node(g.node_count() - 1), 1.0);
        }
    }

    #[test]
    fn nodes_uniformly_spaced_to_machine_precision() {
        let g = SpaceGrid::new(400).unwrap();
        let h = g.spacing();
        for j in 0..g.node_count() - 1 {
            let gap = g.node(j + 1) - g.node(j);
            assert!((gap - h).abs() < 1e-15, "j={j} gap={gap}");
        }
    }

    #[test]
    fn time_grid_endpoints_exact() {
        let t = TimeGrid::new(0.25, 2500).unwrap();
        assert_eq!(t.time(0), 0.0);
        assert_eq!(t.time(2500), 0.25);
        assert_eq!(t.dt(), 1e-4);
    }

    #[test]
    fn time_grid_rejects_degenerate_input() {
        assert!(TimeGrid::new(0.0, 10).is_err());
        assert!(TimeGrid::new(-1.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
        assert!(TimeGrid::new(f64::NAN, 10).is_err());
    }
}
