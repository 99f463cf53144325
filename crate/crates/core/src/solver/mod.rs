//! Finite-difference route to the spectra.
//!
//! The Sturm-Liouville problem from [`crate::models::effective_problem`] is
//! discretized with the 3-point stencil and Dirichlet ends, then the lowest
//! eigenpairs come from [`tridiag`].

pub mod tridiag;

pub use tridiag::{eigen_lowest, EigenResult, TridiagonalOperator};

use crate::analytic::{analytic_e2, Level, Source, SpectrumTable};
use crate::error::{Error, Result};
use crate::grid::{l2_norm, Grid, Sampled};
use crate::models::{
    apply_pair_raising, effective_problem, pair_recover_psi2, LineDomain, ModelSpec, RadialProblem,
};

pub const DEFAULT_GRID_POINTS: usize = 4000;

/// Stop searching for the outer turning region beyond this point.
const MAX_DOMAIN: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub n_points: usize,
    /// Overrides the automatic outer boundary.
    pub x_max: Option<f64>,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            n_points: DEFAULT_GRID_POINTS,
            x_max: None,
        }
    }
}

const TAIL_DECADES: f64 = 25.0;

/// Pick a grid on which the `k` lowest states are well inside the box:
/// `V(x_max) >= max(3 lambda, lambda + 2 T a)` for the top requested level,
/// so the Gaussian tail has decayed by about `e^-T` at the outer wall.
/// `x_min = -x_max` on the full line and `x_min = 0` on the half-line.
pub fn choose_domain(problem: &RadialProblem, k: usize, opts: GridOptions) -> Result<Grid> {
    if k == 0 {
        return Err(Error::Domain("at least one level is required".into()));
    }
    let x_max = match opts.x_max {
        Some(x) => x,
        None => {
            let top = problem.eigenvalue_estimate(k - 1);
            let tail = 2.0 * TAIL_DECADES * problem.potential.confinement;
            let bound = (3.0 * top).max(top + tail);
            outer_crossing(problem, bound)?
        }
    };
    let x_min = match problem.domain {
        LineDomain::FullLine => -x_max,
        LineDomain::HalfLine => 0.0,
    };
    Grid::new(x_min, x_max, opts.n_points)
}

fn outer_crossing(problem: &RadialProblem, bound: f64) -> Result<f64> {
    let v = |x: f64| problem.potential.value(x);
    let not_reached = Error::DomainBoundNotReached { bound };
    if !(bound.is_finite() && bound > 0.0) {
        return Err(not_reached);
    }
    // Start right of the minimum of a^2 x^2 + g / x^2, where V is increasing.
    let a2 = problem.potential.confinement.powi(2);
    let g = problem.potential.centrifugal;
    let mut lo = if g > 0.0 && a2 > 0.0 {
        (g / a2).powf(0.25)
    } else {
        1e-3
    };
    if v(lo) >= bound {
        return Ok(lo);
    }
    let mut hi = lo;
    while v(hi) < bound {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_DOMAIN {
            return Err(not_reached);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if v(mid) >= bound {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(hi)
}

/// 3-point stencil: `diag_j = 2/h^2 + V(x_j)`, `offdiag = -1/h^2`.
pub fn discretize(problem: &RadialProblem, grid: &Grid) -> Result<TridiagonalOperator> {
    if problem.domain == LineDomain::HalfLine && grid.x_min < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "half-line problem on a grid starting at {}",
            grid.x_min
        )));
    }
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let diag = grid
        .nodes()
        .enumerate()
        .map(|(node, x)| {
            let v = problem.potential.value(x);
            if v.is_finite() {
                Ok(2.0 * inv_h2 + v)
            } else {
                Err(Error::NonFinitePotential { node, x })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    TridiagonalOperator::new(diag, vec![-inv_h2; grid.n_points - 1], h)
}

/// Everything produced by one numeric solve.
#[derive(Debug, Clone)]
pub struct NumericSolution {
    pub problem: RadialProblem,
    pub grid: Grid,
    pub states: Vec<EigenResult>,
    pub table: SpectrumTable,
}

pub fn numeric_solve(spec: &ModelSpec, k: usize, opts: GridOptions) -> Result<NumericSolution> {
    let problem = effective_problem(spec)?;
    let grid = choose_domain(&problem, k, opts)?;
    let op = discretize(&problem, &grid)?;
    let states = eigen_lowest(&op, k)?;
    let mc2 = spec.mc2();
    let levels = states
        .iter()
        .enumerate()
        .map(|(n, s)| {
            let e2 = problem.lambda_to_e2.apply(s.lambda);
            if e2 < 0.0 {
                return Err(Error::NegativeEnergySquared { n, e2 });
            }
            Ok(Level {
                n,
                e2,
                e: e2.sqrt(),
                eps: (e2 - mc2 * mc2) / (2.0 * mc2),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NumericSolution {
        problem,
        grid,
        states,
        table: SpectrumTable {
            spec: *spec,
            levels,
            source: Source::Numeric,
        },
    })
}

pub fn numeric_spectrum(spec: &ModelSpec, k: usize, opts: GridOptions) -> Result<SpectrumTable> {
    Ok(numeric_solve(spec, k, opts)?.table)
}

/// Relative residual of the first-order pair,
/// `|| c (p + iW) psi_2 - (E - mc^2) psi_1 || / || psi_1 ||`, with `psi_2`
/// rebuilt from `psi_1` by [`pair_recover_psi2`].
pub fn residual_pair_check(
    spec: &ModelSpec,
    level: &Level,
    psi1: &EigenResult,
    grid: &Grid,
) -> Result<f64> {
    let upper = Sampled::new(*grid, psi1.vector.clone())?;
    let norm = upper.l2_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let lower = pair_recover_psi2(spec, level.e, &upper)?;
    let back = apply_pair_raising(spec, &lower);
    let shift = level.e - spec.mc2();
    let diff: Vec<f64> = back
        .values
        .iter()
        .zip(&upper.values)
        .map(|(b, u)| b - shift * u)
        .collect();
    Ok(l2_norm(&diff, grid.spacing()) / norm)
}

/// Asymptotic order of the three-point eigenvalue error. Smooth problems
/// give 2; a weak wall `g / x^2` with `0 < g < 3/4` leaves `u ~ x^s`,
/// `1 < s < 3/2`, and the order drops to `2s - 1`.
pub fn expected_order(problem: &RadialProblem) -> f64 {
    match problem.origin_exponent() {
        Some(s) if problem.potential.centrifugal != 0.0 => (2.0 * s - 1.0).min(2.0),
        _ => 2.0,
    }
}

/// Observed order `log2(err_N / err_2N)` of the error in `E_n^2`, keeping
/// the outer boundary fixed while the grid is refined.
pub fn convergence_order(spec: &ModelSpec, n: usize, opts: GridOptions) -> Result<f64> {
    let (coarse, fine) = refinement_errors(spec, n, opts)?;
    Ok((coarse / fine).log2())
}

/// `|E_n^2 numeric - E_n^2 analytic|` at `N` and `2N` points.
pub fn refinement_errors(spec: &ModelSpec, n: usize, opts: GridOptions) -> Result<(f64, f64)> {
    let exact = analytic_e2(spec, n)?;
    let k = (n + 1).max(5);
    let coarse = numeric_solve(spec, k, opts)?;
    let fine_opts = GridOptions {
        n_points: 2 * opts.n_points,
        x_max: Some(coarse.grid.x_max),
    };
    let fine = numeric_spectrum(spec, k, fine_opts)?;
    Ok((
        (coarse.table.levels[n].e2 - exact).abs(),
        (fine.levels[n].e2 - exact).abs(),
    ))
}
