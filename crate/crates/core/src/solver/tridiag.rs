//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
//! eigenvalues, inverse iteration for the eigenvectors.

use crate::error::{Error, Result};
use crate::grid::{l2_norm, sign_changes};

const MAX_INVERSE_ITERATIONS: usize = 50;
const INVERSE_ITERATION_TOL: f64 = 1e-12;
const RESIDUAL_FLOOR: f64 = 1e-8;

/// Real symmetric tridiagonal matrix together with the grid spacing used
/// for L2 normalization of its eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub lambda: f64,
    /// Node values with unit trapezoid L2 norm; the first significant lobe
    /// is positive.
    pub vector: Vec<f64>,
    /// L2 norm of `(T - lambda) v`.
    pub residual: f64,
    pub nodes: usize,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>, spacing: f64) -> Result<Self> {
        if diag.len() < 3 {
            return Err(Error::InvalidGrid(format!(
                "tridiagonal operator needs at least 3 rows, got {}",
                diag.len()
            )));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidGrid(format!(
                "{} off-diagonal entries for {} rows",
                offdiag.len(),
                diag.len()
            )));
        }
        if !(spacing > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be > 0, got {spacing}"
            )));
        }
        Ok(TridiagonalOperator {
            diag,
            offdiag,
            spacing,
        })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn inf_norm(&self) -> f64 {
        let n = self.size();
        (0..n)
            .map(|i| {
                let left = if i > 0 {
                    self.offdiag[i - 1].abs()
                } else {
                    0.0
                };
                let right = if i + 1 < n {
                    self.offdiag[i].abs()
                } else {
                    0.0
                };
                left + self.diag[i].abs() + right
            })
            .fold(0.0, f64::max)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.size();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`, from the signs of the
    /// `LDL^T` pivots of `T - x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let guard = f64::MIN_POSITIVE.sqrt() * self.inf_norm().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.size() {
            if i > 0 {
                let e = self.offdiag[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q == 0.0 {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// The `k` smallest eigenvalues, ascending.
    ///
    /// Bisection runs until the bracket is no wider than `abs_tol` or cannot
    /// be split further in floating point; `abs_tol = 0` asks for the latter.
    pub fn lowest_eigenvalues(&self, k: usize, abs_tol: f64) -> Result<Vec<f64>> {
        if k > self.size() {
            return Err(Error::TooManyLevels {
                requested: k,
                size: self.size(),
            });
        }
        let (glo, ghi) = self.gershgorin();
        let pad = 1e-12 * self.inf_norm().max(1.0);
        let (glo, ghi) = (glo - pad, ghi + pad);
        let mut out = Vec::with_capacity(k);
        for index in 0..k {
            // lambda_{index - 1} <= lambda_index, so the previous root is a
            // valid lower bracket.
            let mut lo = out.last().copied().map_or(glo, |prev: f64| prev.min(ghi));
            if self.sturm_count(lo) > index {
                lo = glo;
            }
            let mut hi = ghi;
            loop {
                let mid = 0.5 * (lo + hi);
                if hi - lo <= abs_tol || mid <= lo || mid >= hi {
                    break;
                }
                if self.sturm_count(mid) > index {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        Ok(out)
    }

    /// Eigenvector for `lambda` by inverse iteration, normalized to unit
    /// trapezoid L2 norm with the first significant lobe positive.
    pub fn eigenvector(&self, lambda: f64, index: usize) -> Result<Vec<f64>> {
        let n = self.size();
        let lu = ShiftedLu::factor(self, lambda);
        let mut v: Vec<f64> = (0..n)
            .map(|j| 1.0 + 0.5 * (0.7 * j as f64 + 0.3).sin())
            .collect();
        normalize_euclid(&mut v);
        let mut converged = false;
        let mut prev_diff = f64::INFINITY;
        let floor =
            (RESIDUAL_FLOOR * lambda.abs().max(1.0)).max(64.0 * f64::EPSILON * self.inf_norm());
        for iter in 0..MAX_INVERSE_ITERATIONS {
            let mut y = v.clone();
            lu.solve(&mut y);
            normalize_euclid(&mut y);
            let dot: f64 = y.iter().zip(&v).map(|(a, b)| a * b).sum();
            if dot < 0.0 {
                y.iter_mut().for_each(|x| *x = -*x);
            }
            let diff = y
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            v = y;
            if diff <= INVERSE_ITERATION_TOL {
                converged = true;
                break;
            }
            // Rounding in the near-singular solve caps how far iterates can
            // agree on fine grids; once they stop improving, accept on residual.
            if iter >= 2 && diff > 0.5 * prev_diff && self.euclid_residual(lambda, &v) <= floor {
                converged = true;
                break;
            }
            prev_diff = diff;
        }
        if !converged {
            return Err(Error::NoConvergence { index });
        }
        let norm = l2_norm(&v, self.spacing);
        let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let first_lobe = v
            .iter()
            .copied()
            .find(|x| x.abs() > 1e-3 * peak)
            .unwrap_or(1.0);
        let scale = first_lobe.signum() / norm;
        v.iter_mut().for_each(|x| *x *= scale);
        Ok(v)
    }

    fn euclid_residual(&self, lambda: f64, v: &[f64]) -> f64 {
        self.apply(v)
            .iter()
            .zip(v)
            .map(|(tv, x)| (tv - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let r: Vec<f64> = self
            .apply(v)
            .iter()
            .zip(v)
            .map(|(tv, x)| tv - lambda * x)
            .collect();
        l2_norm(&r, self.spacing)
    }
}

/// The `k` lowest eigenpairs of `t`, sorted by eigenvalue and then by node
/// count.
pub fn eigen_lowest(t: &TridiagonalOperator, k: usize) -> Result<Vec<EigenResult>> {
    let values = t.lowest_eigenvalues(k, 0.0)?;
    let mut out = values
        .into_iter()
        .enumerate()
        .map(|(index, lambda)| {
            let vector = t.eigenvector(lambda, index)?;
            let residual = t.residual(lambda, &vector);
            let nodes = sign_changes(&vector);
            Ok(EigenResult {
                lambda,
                vector,
                residual,
                nodes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.nodes.cmp(&b.nodes)));
    Ok(out)
}

fn normalize_euclid(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// LU factorization of `T - shift` with partial pivoting, laid out as in
/// LAPACK's `dgttrf`.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &TridiagonalOperator, shift: f64) -> Self {
        let n = t.size();
        let mut dl = t.offdiag.clone();
        let mut du = t.offdiag.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        let tiny = f64::EPSILON * t.inf_norm().max(f64::MIN_POSITIVE);
        for x in d.iter_mut() {
            if x.abs() < tiny {
                *x = if *x < 0.0 { -tiny } else { tiny };
            }
        }
        ShiftedLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn laplacian(n: usize) -> TridiagonalOperator {
        TridiagonalOperator::new(vec![2.0; n], vec![-1.0; n - 1], 1.0).unwrap()
    }

    #[test]
    fn three_by_three_closed_form() {
        let t = laplacian(3);
        let r = eigen_lowest(&t, 3).unwrap();
        let s2 = 2.0f64.sqrt();
        let want = [2.0 - s2, 2.0, 2.0 + s2];
        for (got, want) in r.iter().zip(want) {
            assert!((got.lambda - want).abs() < 1e-14);
            assert!(got.residual < 1e-12);
        }
        assert_eq!(eigen_lowest(&t, 1).unwrap().len(), 1);
        assert!((r[0].lambda - (2.0 - s2)).abs() < 1e-14);
    }

    #[test]
    fn rejects_more_levels_than_rows() {
        assert!(matches!(
            eigen_lowest(&laplacian(3), 4),
            Err(Error::TooManyLevels { .. })
        ));
    }

    #[test]
    fn eigenvector_sign_and_norm_convention() {
        let t = laplacian(50);
        for r in eigen_lowest(&t, 5).unwrap() {
            let first = r.vector.iter().find(|x| x.abs() > 1e-6).unwrap();
            assert!(*first > 0.0);
            assert!((l2_norm(&r.vector, 1.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lowest_eigenvalues_of_free_laplacian() {
        // eigenvalues 2 - 2 cos(j pi / (n + 1))
        let n = 200;
        let t = laplacian(n);
        let vals = t.lowest_eigenvalues(6, 0.0).unwrap();
        for (j, v) in vals.iter().enumerate() {
            let want = 2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - want).abs() < 1e-13, "{j}: {v} vs {want}");
        }
    }

    #[test]
    fn lu_solve_matches_dense_solution() {
        let t = TridiagonalOperator::new(
            vec![0.1, 4.0, -2.0, 1.0, 3.0],
            vec![2.0, 1.5, -0.5, 0.7],
            1.0,
        )
        .unwrap();
        let lu = ShiftedLu::factor(&t, 0.3);
        let x_true = vec![1.0, -2.0, 0.5, 3.0, -1.0];
        let shifted = TridiagonalOperator {
            diag: t.diag.iter().map(|d| d - 0.3).collect(),
            ..t.clone()
        };
        let mut b = shifted.apply(&x_true);
        lu.solve(&mut b);
        for (a, b) in b.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn sturm_count_is_monotone(
            diag in proptest::collection::vec(-5.0f64..5.0, 8),
            off in proptest::collection::vec(-2.0f64..2.0, 7),
            x in -10.0f64..10.0,
            dx in 0.0f64..3.0,
        ) {
            let t = TridiagonalOperator::new(diag, off, 1.0).unwrap();
            prop_assert!(t.sturm_count(x) <= t.sturm_count(x + dx));
        }

        #[test]
        fn eigenpairs_have_small_residuals(
            diag in proptest::collection::vec(-5.0f64..5.0, 12),
            off in proptest::collection::vec(0.1f64..2.0, 11),
        ) {
            let t = TridiagonalOperator::new(diag, off, 1.0).unwrap();
            let r = eigen_lowest(&t, 4).unwrap();
            for w in r.windows(2) {
                prop_assert!(w[0].lambda <= w[1].lambda);
            }
            for e in &r {
                prop_assert!(e.residual <= 1e-8 * e.lambda.abs().max(1.0));
            }
        }
    }
}
