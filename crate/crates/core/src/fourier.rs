//! Eigenfunction-series reference solution of the zero-drift absorbed
//! problem, used as ground truth for solver acceptance.
//!
//! The half-Laplacian on (-1, 1) with Dirichlet walls has eigenfunctions
//! `eta_n(x) = sin(n pi (x+1)/2)` with decay rates `n^2 pi^2 / 8`. The
//! basis is already orthonormal in L^2(-1, 1) (each `eta_n` has unit
//! norm), so the projection coefficients are plain inner products. The
//! truncated series is a reliable reference for `t >=`
//! [`ORACLE_TIME_CUTOFF`]; closer to t = 0 the series converges too
//! slowly for acceptance use and only the tail bound is meaningful.

use std::f64::consts::PI;

use crate::error::Result;
use crate::field::{bump_density, bump_initial_density, DensityField};
use crate::grid::SpaceGrid;
use crate::quad::adaptive_simpson;

/// Default number of series modes.
pub const DEFAULT_MODE_COUNT: usize = 50;

/// The oracle is not used for acceptance below this time; series
/// truncation for rough data converges slowly near t = 0.
pub const ORACLE_TIME_CUTOFF: f64 = 0.01;

/// Dirichlet eigenfunction `eta_n(x) = sin(n pi (x+1)/2)`.
///
/// The walls are exact zeros of the eigenfunction; they are returned as
/// exact zeros rather than `sin(n pi)` rounding residue.
pub fn eigenfunction(n: usize, x: f64) -> f64 {
    debug_assert!(n >= 1);
    if x <= -1.0 || x >= 1.0 {
        return 0.0;
    }
    (n as f64 * PI * (x + 1.0) / 2.0).sin()
}

/// Series decay rate `lambda_n = n^2 pi^2 / 8`.
pub fn decay_rate(n: usize) -> f64 {
    let np = n as f64 * PI;
    np * np / 8.0
}

/// Integral of `eta_n` over (-1, 1): `4 / (n pi)` for odd n, 0 for even n.
fn eigenfunction_integral(n: usize) -> f64 {
    if n % 2 == 0 {
        0.0
    } else {
        4.0 / (n as f64 * PI)
    }
}

/// Truncated eigenfunction expansion of an initial density.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSolution {
    coefficients: Vec<f64>,
    coefficient_bound: f64,
}

impl FourierSolution {
    /// Builds a solution from explicit coefficients `c_n`, n = 1..=len.
    /// `coefficient_bound` bounds every |c_n| including the truncated
    /// modes; for a probability density the mass is such a bound.
    pub fn from_coefficients(coefficients: Vec<f64>, coefficient_bound: f64) -> Self {
        Self {
            coefficients,
            coefficient_bound,
        }
    }

    /// Projects an initial density onto the first `n_modes` eigenfunctions.
    ///
    /// When the field is exactly the sampled bump density the projection
    /// integrates the continuum bump formula by adaptive quadrature, so the
    /// oracle is independent of the grid; any other field is projected with
    /// the grid trapezoid rule.
    pub fn project_initial(m0: &DensityField, n_modes: usize) -> Self {
        assert!(n_modes >= 1, "need at least one mode");
        if is_sampled_bump(m0) {
            return Self::project_bump(n_modes);
        }
        let grid = m0.grid();
        let h = grid.spacing();
        let coefficients = (1..=n_modes)
            .map(|n| {
                let sum: f64 = (1..=grid.interior_count())
                    .map(|j| m0.values()[j] * eigenfunction(n, grid.node(j)))
                    .sum();
                h * sum
            })
            .collect();
        Self {
            coefficients,
            coefficient_bound: m0.mass(),
        }
    }

    /// Projection of the continuum bump density by adaptive quadrature.
    pub fn project_bump(n_modes: usize) -> Self {
        assert!(n_modes >= 1, "need at least one mode");
        let coefficients = (1..=n_modes)
            .map(|n| adaptive_simpson(|x| bump_density(x) * eigenfunction(n, x), -1.0, 1.0, 1e-12))
            .collect();
        Self {
            coefficients,
            coefficient_bound: 1.0,
        }
    }

    pub fn mode_count(&self) -> usize {
        self.coefficients.len()
    }

    /// Projection coefficient c_n (1-based mode index).
    pub fn coefficient(&self, n: usize) -> f64 {
        self.coefficients[n - 1]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Truncated series value at (x, t).
    pub fn evaluate(&self, x: f64, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (-decay_rate(i + 1) * t).exp() * eigenfunction(i + 1, x))
            .sum()
    }

    /// Upper bound on the truncation error of [`Self::evaluate`] at time t:
    /// `sum_{n > N} |c_n| e^{-lambda_n t}` with |c_n| replaced by the stored
    /// coefficient bound. Infinite at t = 0, negligible for t >= 0.01.
    pub fn tail_bound(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::INFINITY;
        }
        let n = self.mode_count();
        let a = PI * PI * t / 8.0;
        // n^2 grows by at least 2N+3 per mode past the truncation, so the
        // tail is dominated by a geometric series.
        let first = (-(((n + 1) * (n + 1)) as f64) * a).exp();
        let ratio = (-((2 * n + 3) as f64) * a).exp();
        self.coefficient_bound * first / (1.0 - ratio)
    }

    /// Series mass `int m(x, t) dx`, integrated term by term.
    pub fn mass(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (-decay_rate(i + 1) * t).exp() * eigenfunction_integral(i + 1))
            .sum()
    }

    /// Series values at every node of a space grid (walls exactly zero).
    pub fn evaluate_on_grid(&self, grid: SpaceGrid, t: f64) -> Vec<f64> {
        // cache the eigenfunction table; the decay factors are shared
        let decays: Vec<f64> = (1..=self.mode_count())
            .map(|n| (-decay_rate(n) * t).exp())
            .collect();
        (0..grid.node_count())
            .map(|j| {
                let x = grid.node(j);
                self.coefficients
                    .iter()
                    .zip(&decays)
                    .enumerate()
                    .map(|(i, (&c, &d))| c * d * eigenfunction(i + 1, x))
                    .sum()
            })
            .collect()
    }
}

/// Whether a field is bit-for-bit the sampled bump density on its grid.
fn is_sampled_bump(field: &DensityField) -> bool {
    let reference = bump_initial_density(field.grid());
    field.values() == reference.values()
}

/// Startup self-check used by tests: the basis really is orthonormal,
/// `int eta_n^2 dx = 1`.
pub fn eigenfunction_norm_squared(n: usize) -> Result<f64> {
    Ok(adaptive_simpson(
        |x| eigenfunction(n, x).powi(2),
        -1.0,
        1.0,
        1e-12,
    ))
}
