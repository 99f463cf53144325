use crate::error::{Error, Result};

/// Uniform grid of interior nodes with Dirichlet endpoints excluded.
///
/// Node `i` (zero based) sits at `x_min + (i + 1) h` with
/// `h = (x_max - x_min) / (n_points + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 interior nodes, got {n_points}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidGrid(format!(
                "need finite x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Grid {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points + 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.node(i))
    }

    /// Midpoint between node `i - 1` and node `i`; `i = 0` gives the point
    /// half a step to the right of `x_min`.
    pub fn left_midpoint(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.spacing()
    }
}

/// A function sampled on the interior nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Sampled {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::InvalidGrid(format!(
                "{} samples on a grid of {} nodes",
                values.len(),
                grid.n_points
            )));
        }
        Ok(Sampled { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Sampled { grid, values }
    }

    /// L2 norm by the trapezoid rule; the Dirichlet endpoints contribute zero.
    pub fn l2_norm(&self) -> f64 {
        l2_norm(&self.values, self.grid.spacing())
    }
}

pub(crate) fn l2_norm(values: &[f64], h: f64) -> f64 {
    (h * values.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Central first derivative with zero boundary values outside the grid.
pub(crate) fn central_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            let left = if i == 0 { 0.0 } else { values[i - 1] };
            let right = if i + 1 == n { 0.0 } else { values[i + 1] };
            (right - left) / (2.0 * h)
        })
        .collect()
}

/// Sign changes of a sampled function, ignoring samples below `1e-10` of
/// the peak magnitude (exponential tails and roundoff near the boundary).
pub fn sign_changes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = 1e-10 * peak;
    let mut last = 0.0_f64;
    let mut count = 0;
    for &v in values.iter().filter(|v| v.abs() > floor) {
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}
