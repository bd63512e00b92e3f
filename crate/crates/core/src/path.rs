//! Scalar mean-field paths on the time grid.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// The scalar path `beta_k` on a time grid, one value per time node.
///
/// When produced as a moment of a valid density trajectory the values are
/// bounded by the mass, hence by 1; transient fixed-point iterates are
/// clamped back into [-1, 1] before they reach a drift evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldPath {
    tgrid: TimeGrid,
    values: Vec<f64>,
}

impl MeanFieldPath {
    pub fn new(tgrid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != tgrid.node_count() {
            return Err(Error::Config(format!(
                "mean-field path has {} values but the time grid has {} nodes",
                values.len(),
                tgrid.node_count()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("non-finite path value {v}")));
        }
        Ok(Self { tgrid, values })
    }

    /// Path holding the same value at every time node.
    pub fn constant(tgrid: TimeGrid, value: f64) -> Result<Self> {
        Self::new(tgrid, vec![value; tgrid.node_count()])
    }

    pub fn zero(tgrid: TimeGrid) -> Self {
        Self {
            tgrid,
            values: vec![0.0; tgrid.node_count()],
        }
    }

    pub fn time_grid(&self) -> TimeGrid {
        self.tgrid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Clamps every value into [-1, 1], returning the clamped path and the
    /// number of nodes that were actually out of range.
    pub fn clamped_to_unit(&self) -> (Self, usize) {
        let mut events = 0usize;
        let values = self
            .values
            .iter()
            .map(|&v| {
                if v.abs() > 1.0 {
                    events += 1;
                    v.clamp(-1.0, 1.0)
                } else {
                    v
                }
            })
            .collect();
        (
            Self {
                tgrid: self.tgrid,
                values,
            },
            events,
        )
    }

    /// Damped update `(1 - theta) * self + theta * other`.
    pub fn damped_toward(&self, other: &MeanFieldPath, theta: f64) -> Result<Self> {
        if self.tgrid != other.tgrid {
            return Err(Error::Config(
                "cannot combine mean-field paths on different time grids".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (1.0 - theta) * a + theta * b)
            .collect();
        Ok(Self {
            tgrid: self.tgrid,
            values,
        })
    }
}
