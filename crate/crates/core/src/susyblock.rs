//! Discretized supercharges and the 2x2-block Dirac Hamiltonian.
//!
//! The first-order operator `D = d/dx + W` is sampled on a staggered grid:
//! the upper component lives on the nodes `x_j`, the lower component on the
//! midpoints `x_j - h/2`, and row `r` of `D` is
//!
//! ```text
//! (D v)_r = (v_r - v_{r-1}) / h + W(x_r - h/2) (v_r + v_{r-1}) / 2,   v_{-1} = 0.
//! ```
//!
//! `D` is square and lower bidiagonal. The edge beyond the last node is
//! dropped, which only touches the exponentially small tail at `x_max`.
//! After the gauge change `psi_2 -> -i psi_2` the Dirac Hamiltonian
//! `[[mc^2, c D^T], [c D, -mc^2]]` is real symmetric; ordered along the
//! staggered grid it is tridiagonal. With `A = D / sqrt(delta)` this is the
//! anti-Jaynes-Cummings form `g (s- A + s+ A^T) + s_z mc^2`, `g = c sqrt(delta)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::models::{Family, FirstOrderSuperpotential, ModelSpec};
use crate::solver::TridiagonalOperator;

/// Square lower-bidiagonal matrix: `diag[r]` multiplies `v_r`, `sub[r - 1]`
/// multiplies `v_{r-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBidiagonal {
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
}

impl LowerBidiagonal {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.size())
            .map(|r| {
                let mut s = self.diag[r] * v[r];
                if r > 0 {
                    s += self.sub[r - 1] * v[r - 1];
                }
                s
            })
            .collect()
    }

    pub fn apply_transpose(&self, u: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|j| {
                let mut s = self.diag[j] * u[j];
                if j + 1 < n {
                    s += self.sub[j] * u[j + 1];
                }
                s
            })
            .collect()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.size();
        let mut m = vec![0.0; n * n];
        for r in 0..n {
            m[r * n + r] = self.diag[r];
            if r > 0 {
                m[r * n + r - 1] = self.sub[r - 1];
            }
        }
        m
    }

    /// Row-major dense copy of the transpose, built from the bands directly.
    pub fn transpose_dense(&self) -> Vec<f64> {
        let n = self.size();
        let mut m = vec![0.0; n * n];
        for j in 0..n {
            m[j * n + j] = self.diag[j];
            if j + 1 < n {
                m[j * n + j + 1] = self.sub[j];
            }
        }
        m
    }

    /// `D^T D`, tridiagonal.
    pub fn gram(&self, spacing: f64) -> Result<TridiagonalOperator> {
        let n = self.size();
        let p = &self.diag;
        let q = &self.sub;
        let diag = (0..n)
            .map(|j| p[j] * p[j] + if j + 1 < n { q[j] * q[j] } else { 0.0 })
            .collect();
        let off = (0..n - 1).map(|j| q[j] * p[j + 1]).collect();
        TridiagonalOperator::new(diag, off, spacing)
    }

    /// `D D^T`, tridiagonal.
    pub fn cogram(&self, spacing: f64) -> Result<TridiagonalOperator> {
        let n = self.size();
        let p = &self.diag;
        let q = &self.sub;
        let diag = (0..n)
            .map(|r| p[r] * p[r] + if r > 0 { q[r - 1] * q[r - 1] } else { 0.0 })
            .collect();
        let off = (0..n - 1).map(|r| p[r] * q[r]).collect();
        TridiagonalOperator::new(diag, off, spacing)
    }
}

/// Number of eigenvalues below `tau` of `L L^T`, `L` lower bidiagonal with
/// diagonal `p` and subdiagonal `q`.
///
/// Uses the differential form of the Sturm recurrence, which works on the
/// factor rather than on the assembled tridiagonal matrix, so small
/// eigenvalues come out with high relative accuracy.
fn factored_count(p: &[f64], q: &[f64], tau: f64) -> usize {
    let mut count = 0;
    let mut s = -tau;
    for r in 0..p.len() {
        let mut u = s + p[r] * p[r];
        if u == 0.0 {
            u = -f64::MIN_POSITIVE;
        }
        if u < 0.0 {
            count += 1;
        }
        if r + 1 < p.len() {
            s = -tau + q[r] * q[r] * (s / u);
        }
    }
    count
}

fn factored_lowest(p: &[f64], q: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = p.len();
    if k > n {
        return Err(Error::TooManyLevels {
            requested: k,
            size: n,
        });
    }
    let pmax = p.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let qmax = q.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let upper = 1.01 * (pmax + qmax).powi(2);
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let (mut lo, mut hi) = (out.last().copied().unwrap_or(0.0), upper);
        while hi > f64::MIN_POSITIVE {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if factored_count(p, q, mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

impl LowerBidiagonal {
    /// `k` lowest eigenvalues of `D^T D`, to high relative accuracy.
    pub fn gram_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        // Reversing the index order turns D^T into a lower-bidiagonal factor.
        let p: Vec<f64> = self.diag.iter().rev().copied().collect();
        let q: Vec<f64> = self.sub.iter().rev().copied().collect();
        factored_lowest(&p, &q, k)
    }

    /// `k` lowest eigenvalues of `D D^T`, to high relative accuracy.
    pub fn cogram_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        factored_lowest(&self.diag, &self.sub, k)
    }
}

/// Discretized supercharge pair `A = D / sqrt(delta)`, `A^dagger = D^T / sqrt(delta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupersymmetricPair {
    pub d: LowerBidiagonal,
    pub spacing: f64,
    pub delta: f64,
    pub c: f64,
    /// Spin-supercharge coupling `c sqrt(delta)`.
    pub g: f64,
}

impl SupersymmetricPair {
    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::Domain(format!("delta must be > 0, got {delta}")));
        }
        self.delta = delta;
        self.g = self.c * delta.sqrt();
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.d.size()
    }

    /// Lowest `k` eigenvalues of `A^dagger A = D^T D / delta`.
    pub fn number_spectrum(&self, k: usize) -> Result<Vec<f64>> {
        let vals = self.d.gram(self.spacing)?.lowest_eigenvalues(k, 0.0)?;
        Ok(vals.into_iter().map(|v| v / self.delta).collect())
    }
}

/// Default scale `4 m omega` (harmonic) or `4 m a` (isotonic).
pub fn default_delta(spec: &ModelSpec) -> f64 {
    4.0 * spec.params.m
        * if spec.family.is_harmonic() {
            spec.params.omega
        } else {
            spec.params.a
        }
}

fn supercharge_from(w: FirstOrderSuperpotential, grid: &Grid) -> Result<LowerBidiagonal> {
    let h = grid.spacing();
    let n = grid.n_points;
    let mut diag = Vec::with_capacity(n);
    let mut sub = Vec::with_capacity(n - 1);
    for r in 0..n {
        let x = grid.left_midpoint(r);
        let half_w = 0.5 * w.value(x);
        if !half_w.is_finite() {
            return Err(Error::NonFinitePotential { node: r, x });
        }
        diag.push(1.0 / h + half_w);
        if r > 0 {
            sub.push(-1.0 / h + half_w);
        }
    }
    Ok(LowerBidiagonal { diag, sub })
}

fn check_grid(spec: &ModelSpec, grid: &Grid) -> Result<()> {
    if spec.family != Family::Dirac1DHarmonic && grid.x_min < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "{} lives on the half-line, grid starts at {}",
            spec.family, grid.x_min
        )));
    }
    Ok(())
}

pub fn discretize_supercharge(spec: &ModelSpec, grid: &Grid) -> Result<SupersymmetricPair> {
    spec.validate()?;
    check_grid(spec, grid)?;
    let d = supercharge_from(FirstOrderSuperpotential::for_spec(spec), grid)?;
    let delta = default_delta(spec);
    Ok(SupersymmetricPair {
        d,
        spacing: grid.spacing(),
        delta,
        c: spec.params.c,
        g: spec.params.c * delta.sqrt(),
    })
}

/// `<f, [A, A^dagger] f> / <f, f>` for a test function sampled on `grid`.
///
/// In 1D both products act on the same line. In 2D `A^dagger A` acts on
/// sector `ml` while `A A^dagger` on that sector goes through `ml - 1`, so
/// the second term uses the supercharge of sector `ml - 1`.
pub fn commutator_expectation(
    spec: &ModelSpec,
    grid: &Grid,
    delta: f64,
    test: &[f64],
) -> Result<f64> {
    spec.validate()?;
    check_grid(spec, grid)?;
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be > 0, got {delta}")));
    }
    if test.len() != grid.n_points {
        return Err(Error::InvalidGrid(format!(
            "{} samples on a grid of {} nodes",
            test.len(),
            grid.n_points
        )));
    }
    let here = supercharge_from(FirstOrderSuperpotential::for_spec(spec), grid)?;
    let lowered = if spec.family.is_2d() {
        let mut w = FirstOrderSuperpotential::for_spec(spec);
        // W~ = w(r) - (ml + 1/2) / r, evaluated for ml - 1
        w.inverse += 1.0;
        supercharge_from(w, grid)?
    } else {
        here.clone()
    };
    let sq = |v: Vec<f64>| v.iter().map(|x| x * x).sum::<f64>();
    let norm = sq(test.to_vec());
    let raise_lower = sq(lowered.apply_transpose(test));
    let lower_raise = sq(here.apply(test));
    Ok((raise_lower - lower_raise) / (delta * norm))
}

/// Real symmetric `2N x 2N` Dirac Hamiltonian stored as a tridiagonal
/// matrix along the staggered grid (`psi_2` at even, `psi_1` at odd slots).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockHamiltonian {
    pub size: usize,
    pub mass_term: f64,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    /// `c D`, the lower-left block.
    pub coupling: LowerBidiagonal,
    pub spacing: f64,
}

pub fn build_block_hamiltonian(pair: &SupersymmetricPair, mc2: f64) -> Result<BlockHamiltonian> {
    if !(mc2.is_finite() && mc2 > 0.0) {
        return Err(Error::Domain(format!("mc^2 must be > 0, got {mc2}")));
    }
    let n = pair.size();
    let coupling = LowerBidiagonal {
        diag: pair.d.diag.iter().map(|x| pair.c * x).collect(),
        sub: pair.d.sub.iter().map(|x| pair.c * x).collect(),
    };
    let diag = (0..2 * n)
        .map(|i| if i % 2 == 0 { -mc2 } else { mc2 })
        .collect();
    let mut offdiag = Vec::with_capacity(2 * n - 1);
    for r in 0..n {
        offdiag.push(coupling.diag[r]);
        if r + 1 < n {
            offdiag.push(coupling.sub[r]);
        }
    }
    Ok(BlockHamiltonian {
        size: 2 * n,
        mass_term: mc2,
        diag,
        offdiag,
        coupling,
        spacing: pair.spacing,
    })
}

impl BlockHamiltonian {
    /// Row-major dense matrix in block order `(psi_1, psi_2)`:
    /// `[[mc^2 I, c D^T], [c D, -mc^2 I]]`.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.size / 2;
        let s = self.size;
        let mut m = vec![0.0; s * s];
        for i in 0..n {
            m[i * s + i] = self.mass_term;
            m[(n + i) * s + n + i] = -self.mass_term;
        }
        for r in 0..n {
            let mut put = |row: usize, col: usize, v: f64| {
                m[(n + row) * s + col] = v;
                m[col * s + n + row] = v;
            };
            put(r, r, self.coupling.diag[r]);
            if r > 0 {
                put(r, r - 1, self.coupling.sub[r - 1]);
            }
        }
        m
    }

    pub fn as_tridiagonal(&self) -> Result<TridiagonalOperator> {
        TridiagonalOperator::new(self.diag.clone(), self.offdiag.clone(), 1.0)
    }
}

/// `2k` energies `+-sqrt((mc^2)^2 + lambda_i)` from the `k` lowest
/// eigenvalues `lambda_i` of `(c D)^T (c D)`, ascending.
pub fn block_spectrum(h: &BlockHamiltonian, k: usize) -> Result<Vec<f64>> {
    let lambdas = h.coupling.gram(h.spacing)?.lowest_eigenvalues(k, 0.0)?;
    let m2 = h.mass_term * h.mass_term;
    let positive: Vec<f64> = lambdas.iter().map(|l| (m2 + l.max(0.0)).sqrt()).collect();
    let mut out: Vec<f64> = positive.iter().rev().map(|e| -e).collect();
    out.extend(positive);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsospectralityReport {
    /// Matched nonzero eigenvalues of `D^T D` and `D D^T`.
    pub pairs: Vec<(f64, f64)>,
    /// Number of eigenvalues of `D^T D` at zero to working precision.
    pub kernel_dim: usize,
    pub max_rel_diff: f64,
}

/// Relative size below which an eigenvalue of `D^T D` counts as zero.
pub const KERNEL_TOL: f64 = 1e-10;

pub fn susy_isospectrality_check(
    pair: &SupersymmetricPair,
    k: usize,
) -> Result<IsospectralityReport> {
    let n = pair.size();
    if k + 1 > n {
        return Err(Error::TooManyLevels {
            requested: k,
            size: n.saturating_sub(1),
        });
    }
    let tol = KERNEL_TOL * pair.d.gram(pair.spacing)?.inf_norm();
    let a = pair.d.gram_eigenvalues(k)?;
    let b = pair.d.cogram_eigenvalues(k)?;
    let kernel_dim = a.iter().filter(|v| v.abs() <= tol).count();
    let nz_a = a.into_iter().filter(|v| v.abs() > tol);
    let nz_b = b.into_iter().filter(|v| v.abs() > tol);
    let pairs: Vec<(f64, f64)> = nz_a.zip(nz_b).collect();
    let max_rel_diff = pairs
        .iter()
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()))
        .fold(0.0, f64::max);
    Ok(IsospectralityReport {
        pairs,
        kernel_dim,
        max_rel_diff,
    })
}
