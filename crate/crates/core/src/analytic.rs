//! Closed-form spectra and wavefunctions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Family, ModelSpec};
use crate::specfun::{hermite, kummer_terminating};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub e2: f64,
    /// Particle branch `+sqrt(E^2)`.
    pub e: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub spec: ModelSpec,
    pub levels: Vec<Level>,
    pub source: Source,
}

/// `E_n^2 - (mc^2)^2`, evaluated from the closed forms without forming
/// `E^2` first.
pub fn analytic_shift(spec: &ModelSpec, n: usize) -> Result<f64> {
    spec.validate()?;
    let p = &spec.params;
    let c2 = p.c * p.c;
    let n = n as f64;
    Ok(match spec.family {
        Family::Dirac1DHarmonic => 2.0 * (p.m * p.omega) * c2 * n,
        Family::Dirac1DIsotonic => {
            let radical = (1.0 + 4.0 * p.b * (p.b + 1.0)).sqrt();
            p.a * c2 * (4.0 * n + 2.0 * p.b + 1.0 + radical)
        }
        Family::Dirac2DHarmonic => {
            let ml = spec.ml.unwrap_or(0) as f64;
            2.0 * (p.m * p.omega) * c2 * (2.0 * n + (ml.abs() - ml))
        }
        Family::Dirac2DIsotonic => {
            let shifted = spec.effective_ml();
            2.0 * p.a * c2 * (2.0 * n + (shifted.abs() - shifted))
        }
    })
}

pub fn analytic_e2(spec: &ModelSpec, n: usize) -> Result<f64> {
    let mc2 = spec.mc2();
    Ok(mc2 * mc2 + analytic_shift(spec, n)?)
}

/// Non-relativistic energy `(E_n^2 - (mc^2)^2) / (2 mc^2)`.
pub fn analytic_nonrel_eps(spec: &ModelSpec, n: usize) -> Result<f64> {
    Ok(analytic_shift(spec, n)? / (2.0 * spec.mc2()))
}

/// Power `nu = (sqrt(1 + 4b(b+1)) + 1) / 2` of the 1D isotonic ground state.
pub fn isotonic_nu(b: f64) -> f64 {
    0.5 * ((1.0 + 4.0 * b * (b + 1.0)).sqrt() + 1.0)
}

/// Unnormalized upper-component profile of level `n`.
///
/// 1D families return `psi_1(x)`; 2D families return the `chi_n(r)` form
/// (divide by `sqrt(r)` for `phi`).
pub fn analytic_wavefunction(spec: &ModelSpec, n: usize, x: f64) -> Result<f64> {
    spec.validate()?;
    let p = &spec.params;
    if spec.family != Family::Dirac1DHarmonic && x < 0.0 {
        return Err(Error::Domain(format!(
            "{} lives on the half-line, got x = {x}",
            spec.family
        )));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {x}")));
    }
    match spec.family {
        Family::Dirac1DHarmonic => {
            let s = p.m * p.omega;
            Ok((-s * x * x / 2.0).exp() * hermite(n, s.sqrt() * x))
        }
        Family::Dirac1DIsotonic => {
            let nu = isotonic_nu(p.b);
            let z = p.a * x * x;
            Ok(x.powf(nu) * (-z / 2.0).exp() * kummer_terminating(n, nu + 0.5, z)?)
        }
        Family::Dirac2DHarmonic | Family::Dirac2DIsotonic => {
            let nu = spec.effective_ml().abs();
            let a = spec.linear_strength();
            let z = a * x * x;
            Ok(x.powf(nu + 0.5) * (-z / 2.0).exp() * kummer_terminating(n, nu + 1.0, z)?)
        }
    }
}

pub fn build_spectrum_table(spec: &ModelSpec, k: usize) -> Result<SpectrumTable> {
    if k == 0 {
        return Err(Error::Domain("at least one level is required".into()));
    }
    let levels = (0..k)
        .map(|n| {
            let e2 = analytic_e2(spec, n)?;
            Ok(Level {
                n,
                e2,
                e: e2.sqrt(),
                eps: analytic_nonrel_eps(spec, n)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable {
        spec: *spec,
        levels,
        source: Source::Analytic,
    })
}

/// Constant spacing of consecutive `E^2` levels.
pub fn e2_gap(spec: &ModelSpec) -> f64 {
    let p = &spec.params;
    let c2 = p.c * p.c;
    match spec.family {
        Family::Dirac1DHarmonic => 2.0 * p.m * c2 * p.omega,
        Family::Dirac2DHarmonic => 4.0 * p.m * c2 * p.omega,
        Family::Dirac1DIsotonic | Family::Dirac2DIsotonic => 4.0 * p.a * c2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::sign_changes;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 8.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0)
    }

    fn parameter_sets() -> Vec<ModelSpec> {
        vec![
            ModelSpec::harmonic_1d(1.0, 1.0, 1.0).unwrap(),
            ModelSpec::harmonic_1d(2.0, 1.0, 0.5).unwrap(),
            ModelSpec::harmonic_1d(1.0, 3.0, 2.0).unwrap(),
            ModelSpec::isotonic_1d(1.0, 1.0, 1.0, 1.0).unwrap(),
            ModelSpec::isotonic_1d(1.0, 2.0, 0.5, 0.5).unwrap(),
            ModelSpec::isotonic_1d(2.0, 1.0, 1.5, 2.0).unwrap(),
            ModelSpec::harmonic_2d(1.0, 1.0, 1.0, 1).unwrap(),
            ModelSpec::harmonic_2d(1.0, 1.0, 1.0, -1).unwrap(),
            ModelSpec::harmonic_2d(0.5, 2.0, 2.0, 2).unwrap(),
            ModelSpec::isotonic_2d(1.0, 1.0, 1.0, 0.25, 1).unwrap(),
            ModelSpec::isotonic_2d(1.0, 1.0, 1.0, 1.5, 1).unwrap(),
            ModelSpec::isotonic_2d(2.0, 1.0, 0.5, -0.5, -2).unwrap(),
        ]
    }

    #[test]
    fn e2_examples() {
        let ho = ModelSpec::harmonic_1d(1.0, 1.0, 1.0).unwrap();
        assert_eq!(analytic_e2(&ho, 0).unwrap(), 1.0);
        let iso = ModelSpec::isotonic_1d(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(analytic_e2(&iso, 0).unwrap(), 7.0);
        let ho2 = ModelSpec::harmonic_2d(1.0, 1.0, 1.0, -1).unwrap();
        assert_eq!(analytic_e2(&ho2, 0).unwrap(), 5.0);
        let iso2 = ModelSpec::isotonic_2d(1.0, 1.0, 1.0, 0.25, 1).unwrap();
        assert_eq!(analytic_e2(&iso2, 2).unwrap(), 9.0);
    }

    #[test]
    fn nonrel_examples() {
        let ho = ModelSpec::harmonic_1d(1.0, 1.0, 1.0).unwrap();
        assert_eq!(analytic_nonrel_eps(&ho, 3).unwrap(), 3.0);
        // omega (2n + |ml| - ml) at n = 1, ml = -2
        let ho2 = ModelSpec::harmonic_2d(1.0, 1.0, 1.0, -2).unwrap();
        assert_eq!(analytic_nonrel_eps(&ho2, 1).unwrap(), 6.0);
        let iso2 = ModelSpec::isotonic_2d(1.0, 1.0, 1.0, 0.25, 1).unwrap();
        assert_eq!(analytic_nonrel_eps(&iso2, 0).unwrap(), 0.0);
    }

    #[test]
    fn nonrel_limit_of_isotonic_matches_shifted_schrodinger_spectrum() {
        // (a / 2m)(4n + 2b + 3) from the isotonic well plus the a(2b - 1)/(2m) shift
        for spec in parameter_sets()
            .into_iter()
            .filter(|s| s.family == Family::Dirac1DIsotonic)
        {
            let p = spec.params;
            for n in 0..5 {
                let nf = n as f64;
                let want = p.a / (2.0 * p.m) * (4.0 * nf + 2.0 * p.b + 3.0)
                    + p.a * (2.0 * p.b - 1.0) / (2.0 * p.m);
                let got = analytic_nonrel_eps(&spec, n).unwrap();
                assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn table_examples() {
        let ho = ModelSpec::harmonic_1d(1.0, 1.0, 1.0).unwrap();
        let t = build_spectrum_table(&ho, 3).unwrap();
        let e2: Vec<f64> = t.levels.iter().map(|l| l.e2).collect();
        assert_eq!(e2, vec![1.0, 3.0, 5.0]);
        assert_eq!(t.source, Source::Analytic);
        assert_eq!(build_spectrum_table(&ho, 1).unwrap().levels.len(), 1);
        assert!(build_spectrum_table(&ho, 0).is_err());
        let iso = ModelSpec::isotonic_1d(1.0, 1.0, 1.0, 1.0).unwrap();
        let e2: Vec<f64> = build_spectrum_table(&iso, 2)
            .unwrap()
            .levels
            .iter()
            .map(|l| l.e2)
            .collect();
        assert_eq!(e2, vec![7.0, 11.0]);
    }

    #[test]
    fn levels_are_sorted_and_above_rest_mass() {
        for spec in parameter_sets() {
            let t = build_spectrum_table(&spec, 6).unwrap();
            let mc2 = spec.mc2();
            for (i, l) in t.levels.iter().enumerate() {
                assert_eq!(l.n, i);
                assert!(l.e2 >= mc2 * mc2);
                assert_eq!(l.e, l.e2.sqrt());
            }
            assert!(t.levels.windows(2).all(|w| w[0].e2 < w[1].e2));
        }
    }

    #[test]
    fn e2_is_equispaced() {
        for spec in parameter_sets() {
            let gap = e2_gap(&spec);
            for n in 0..10 {
                let d = analytic_e2(&spec, n + 1).unwrap() - analytic_e2(&spec, n).unwrap();
                assert!(
                    (d - gap).abs() <= 16.0 * f64::EPSILON * analytic_e2(&spec, n + 1).unwrap(),
                    "{:?} n={n}: {d} vs {gap}",
                    spec.family
                );
            }
        }
    }

    #[test]
    fn isotonic_embeds_odd_harmonic_levels_as_b_vanishes() {
        for &(m, c, w) in &[(1.0, 1.0, 1.0), (2.0, 0.5, 1.5)] {
            let iso = ModelSpec::isotonic_1d(m, c, m * w, 1e-12).unwrap();
            let ho = ModelSpec::harmonic_1d(m, c, w).unwrap();
            for n in 0..6 {
                let a = analytic_e2(&iso, n).unwrap();
                let b = analytic_e2(&ho, 2 * n + 1).unwrap();
                assert!((a - b).abs() <= 1e-8 * b);
            }
        }
    }

    #[test]
    fn planar_spectra_do_not_depend_on_ml_above_threshold() {
        let base_ho = analytic_e2(&ModelSpec::harmonic_2d(1.0, 1.0, 1.0, 1).unwrap(), 0).unwrap();
        for ml in 1..=5 {
            for n in 0..5 {
                let ho = ModelSpec::harmonic_2d(1.0, 1.0, 1.0, ml).unwrap();
                let iso = ModelSpec::isotonic_2d(1.0, 1.0, 1.0, 0.25, ml).unwrap();
                let ho1 = ModelSpec::harmonic_2d(1.0, 1.0, 1.0, 1).unwrap();
                let iso1 = ModelSpec::isotonic_2d(1.0, 1.0, 1.0, 0.25, 1).unwrap();
                assert_eq!(analytic_e2(&ho, n).unwrap(), analytic_e2(&ho1, n).unwrap());
                assert_eq!(
                    analytic_e2(&iso, n).unwrap(),
                    analytic_e2(&iso1, n).unwrap()
                );
            }
        }
        assert_eq!(base_ho, 1.0);
    }

    #[test]
    fn planar_isotonic_reduces_to_harmonic() {
        for &(m, c, w) in &[(1.0, 1.0, 1.0), (0.5, 2.0, 3.0)] {
            for ml in [-4, -1, 1, 3] {
                let iso = ModelSpec::isotonic_2d(m, c, m * w, 0.0, ml).unwrap();
                let ho = ModelSpec::harmonic_2d(m, c, w, ml).unwrap();
                for n in 0..6 {
                    assert!(close(
                        analytic_e2(&iso, n).unwrap(),
                        analytic_e2(&ho, n).unwrap()
                    ));
                }
            }
        }
    }

    #[test]
    fn isotonic_nu_radical_matches_simplified_form() {
        assert_eq!(isotonic_nu(1.0), 2.0);
        for &b in &[0.1, 0.5, 1.0, 2.0, 7.3] {
            assert!(close(isotonic_nu(b), b + 1.0));
        }
    }

    #[test]
    fn wavefunction_boundary_values() {
        for spec in parameter_sets() {
            if spec.family != Family::Dirac1DHarmonic {
                assert_eq!(analytic_wavefunction(&spec, 0, 0.0).unwrap(), 0.0);
                assert!(analytic_wavefunction(&spec, 0, -0.5).is_err());
            }
        }
        let ho = ModelSpec::harmonic_1d(1.0, 1.0, 1.0).unwrap();
        assert_eq!(analytic_wavefunction(&ho, 1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn wavefunction_node_count_equals_level() {
        for spec in parameter_sets() {
            let (lo, hi) = if spec.family == Family::Dirac1DHarmonic {
                (-12.0, 12.0)
            } else {
                (0.0, 12.0)
            };
            for n in 0..8 {
                let samples: Vec<f64> = (1..10_000)
                    .map(|i| {
                        let x = lo + (hi - lo) * i as f64 / 10_000.0;
                        analytic_wavefunction(&spec, n, x).unwrap()
                    })
                    .collect();
                assert_eq!(sign_changes(&samples), n, "{:?} n={n}", spec.family);
            }
        }
    }
}
