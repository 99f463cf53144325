//! The four oscillator families and their reduction to a single
//! Sturm-Liouville problem `-u'' + V(x) u = lambda u`.
//!
//! Units have `hbar = 1`. The upper spinor component solves the
//! Klein-Gordon-like equation `c^2 (-d^2 + W^2 - W') psi_1 = (E^2 - (mc^2)^2) psi_1`;
//! constant terms of `W^2 - W'` are kept out of `V` and folded into the
//! affine map from `lambda` to `E^2`. The (2+1)-dimensional families are
//! always handled in the `chi = sqrt(r) phi` form with flat radial measure.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{central_derivative, Sampled};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "1d-ho")]
    Dirac1DHarmonic,
    #[serde(rename = "1d-iso")]
    Dirac1DIsotonic,
    #[serde(rename = "2d-ho")]
    Dirac2DHarmonic,
    #[serde(rename = "2d-iso")]
    Dirac2DIsotonic,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Dirac1DHarmonic,
        Family::Dirac1DIsotonic,
        Family::Dirac2DHarmonic,
        Family::Dirac2DIsotonic,
    ];

    pub fn is_2d(self) -> bool {
        matches!(self, Family::Dirac2DHarmonic | Family::Dirac2DIsotonic)
    }

    pub fn is_harmonic(self) -> bool {
        matches!(self, Family::Dirac1DHarmonic | Family::Dirac2DHarmonic)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Dirac1DHarmonic => "1d-ho",
            Family::Dirac1DIsotonic => "1d-iso",
            Family::Dirac2DHarmonic => "2d-ho",
            Family::Dirac2DIsotonic => "2d-iso",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "unknown family {s:?}; expected one of 1d-ho, 1d-iso, 2d-ho, 2d-iso"
                ))
            })
    }
}

/// Physical constants of a model. Harmonic families read `omega`; isotonic
/// families read `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
    pub c: f64,
    pub omega: f64,
    pub a: f64,
    pub b: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            m: 1.0,
            c: 1.0,
            omega: 1.0,
            a: 1.0,
            b: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    pub params: PhysicalParams,
    /// Angular quantum number; present exactly for the 2D families.
    pub ml: Option<i32>,
}

impl ModelSpec {
    pub fn new(family: Family, params: PhysicalParams, ml: Option<i32>) -> Result<Self> {
        let spec = ModelSpec { family, params, ml };
        spec.validate()?;
        Ok(spec)
    }

    pub fn harmonic_1d(m: f64, c: f64, omega: f64) -> Result<Self> {
        let params = PhysicalParams {
            m,
            c,
            omega,
            ..Default::default()
        };
        Self::new(Family::Dirac1DHarmonic, params, None)
    }

    pub fn isotonic_1d(m: f64, c: f64, a: f64, b: f64) -> Result<Self> {
        let params = PhysicalParams {
            m,
            c,
            a,
            b,
            ..Default::default()
        };
        Self::new(Family::Dirac1DIsotonic, params, None)
    }

    pub fn harmonic_2d(m: f64, c: f64, omega: f64, ml: i32) -> Result<Self> {
        let params = PhysicalParams {
            m,
            c,
            omega,
            ..Default::default()
        };
        Self::new(Family::Dirac2DHarmonic, params, Some(ml))
    }

    pub fn isotonic_2d(m: f64, c: f64, a: f64, b: f64, ml: i32) -> Result<Self> {
        let params = PhysicalParams {
            m,
            c,
            a,
            b,
            ..Default::default()
        };
        Self::new(Family::Dirac2DIsotonic, params, Some(ml))
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be > 0, got {v}")))
            }
        };
        positive("m", p.m)?;
        positive("c", p.c)?;
        match self.family {
            Family::Dirac1DHarmonic | Family::Dirac2DHarmonic => positive("omega", p.omega)?,
            Family::Dirac1DIsotonic => {
                positive("a", p.a)?;
                positive("b", p.b)?;
            }
            Family::Dirac2DIsotonic => {
                positive("a", p.a)?;
                if !p.b.is_finite() {
                    return Err(Error::InvalidSpec(format!("b must be finite, got {}", p.b)));
                }
            }
        }
        match (self.family.is_2d(), self.ml) {
            (true, None) => {
                return Err(Error::InvalidSpec(format!(
                    "family {} needs an angular quantum number ml",
                    self.family
                )))
            }
            (false, Some(ml)) => {
                return Err(Error::InvalidSpec(format!(
                    "family {} takes no angular quantum number, got ml = {ml}",
                    self.family
                )))
            }
            _ => {}
        }
        if let Some(ml) = self.ml {
            let shifted = self.effective_ml();
            if shifted * shifted < 0.25 {
                return Err(Error::InvalidSpec(match self.family {
                    Family::Dirac2DHarmonic => {
                        format!("closed form requires ml^2 >= 1/4, got ml = {ml}")
                    }
                    _ => format!(
                        "closed form requires (ml - b)^2 >= 1/4, got ml = {ml}, b = {}",
                        p.b
                    ),
                }));
            }
        }
        Ok(())
    }

    pub fn mc2(&self) -> f64 {
        self.params.m * self.params.c * self.params.c
    }

    /// Strength `a` of the linear part of the superpotential (`m omega` for
    /// the harmonic families).
    pub fn linear_strength(&self) -> f64 {
        if self.family.is_harmonic() {
            self.params.m * self.params.omega
        } else {
            self.params.a
        }
    }

    /// `ml - b` for the 2D isotonic family, `ml` for the 2D harmonic family
    /// and zero in 1D.
    pub fn effective_ml(&self) -> f64 {
        let ml = self.ml.unwrap_or(0) as f64;
        match self.family {
            Family::Dirac2DIsotonic => ml - self.params.b,
            Family::Dirac2DHarmonic => ml,
            _ => 0.0,
        }
    }

    pub fn with_c(&self, c: f64) -> Result<Self> {
        let mut s = *self;
        s.params.c = c;
        s.validate()?;
        Ok(s)
    }

    pub fn with_ml(&self, ml: i32) -> Result<Self> {
        let mut s = *self;
        s.ml = Some(ml);
        s.validate()?;
        Ok(s)
    }
}

/// `W(x) = m omega x` or `W(x) = a x + b / x` for the 1D families.
pub fn superpotential_1d(spec: &ModelSpec, x: f64) -> Result<f64> {
    match spec.family {
        Family::Dirac1DHarmonic => Ok(spec.params.m * spec.params.omega * x),
        Family::Dirac1DIsotonic => {
            if !(x > 0.0) {
                return Err(Error::Domain(format!(
                    "isotonic superpotential is defined for x > 0, got x = {x}"
                )));
            }
            Ok(spec.params.a * x + spec.params.b / x)
        }
        f => Err(Error::InvalidSpec(format!(
            "superpotential_1d called for 2D family {f}"
        ))),
    }
}

/// Radial profile `w(r)` of the planar superpotential `W = w(r) r_hat`.
pub fn superpotential_2d(spec: &ModelSpec, r: f64) -> Result<f64> {
    if !spec.family.is_2d() {
        return Err(Error::InvalidSpec(format!(
            "superpotential_2d called for 1D family {}",
            spec.family
        )));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "planar superpotential is defined for r > 0, got r = {r}"
        )));
    }
    Ok(match spec.family {
        Family::Dirac2DHarmonic => spec.params.m * spec.params.omega * r,
        _ => spec.params.a * r + spec.params.b / r,
    })
}

/// A superpotential of the form `linear * x + inverse / x`.
///
/// This is the function entering the first-order operator `d/dx + W` that
/// maps the upper spinor component to the lower one. In 2D it acts on the
/// `chi` form of angular sector `ml` and includes the `-(ml + 1/2) / r`
/// term produced by `P = p_x + i p_y` and the square-root substitution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderSuperpotential {
    pub linear: f64,
    pub inverse: f64,
}

impl FirstOrderSuperpotential {
    pub fn for_spec(spec: &ModelSpec) -> Self {
        let ml = spec.ml.unwrap_or(0) as f64;
        let (linear, inverse) = match spec.family {
            Family::Dirac1DHarmonic => (spec.linear_strength(), 0.0),
            Family::Dirac1DIsotonic => (spec.params.a, spec.params.b),
            Family::Dirac2DHarmonic => (spec.linear_strength(), -(ml + 0.5)),
            Family::Dirac2DIsotonic => (spec.params.a, spec.params.b - (ml + 0.5)),
        };
        FirstOrderSuperpotential { linear, inverse }
    }

    pub fn value(&self, x: f64) -> f64 {
        if self.inverse == 0.0 {
            self.linear * x
        } else {
            self.linear * x + self.inverse / x
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineDomain {
    FullLine,
    HalfLine,
}

/// `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub slope: f64,
    pub intercept: f64,
}

impl Affine {
    pub fn apply(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    pub fn invert(&self, y: f64) -> f64 {
        (y - self.intercept) / self.slope
    }
}

/// `V(x) = confinement^2 x^2 + centrifugal / x^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential {
    pub confinement: f64,
    pub centrifugal: f64,
}

impl Potential {
    pub fn value(&self, x: f64) -> f64 {
        let quad = self.confinement * self.confinement * x * x;
        if self.centrifugal == 0.0 {
            quad
        } else {
            quad + self.centrifugal / (x * x)
        }
    }
}

/// One-dimensional eigenproblem `-u'' + V u = lambda u` plus the maps that
/// turn its eigenvalues into physical energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    pub domain: LineDomain,
    pub potential: Potential,
    /// `lambda -> E^2`; the slope is always `c^2`.
    pub lambda_to_e2: Affine,
    /// `lambda -> epsilon` through `E^2 - (mc^2)^2 ~ 2 mc^2 epsilon`.
    pub lambda_to_eps: Affine,
    pub singular_at_zero: bool,
    pub mc2: f64,
}

impl RadialProblem {
    /// Exact eigenvalue `n` of the continuum problem: `a (2n + 1)` on the
    /// full line, `a (4n + 2l + 3)` on the half-line with
    /// `l (l + 1) = centrifugal`.
    pub fn eigenvalue_estimate(&self, n: usize) -> f64 {
        let a = self.potential.confinement.abs();
        let n = n as f64;
        match self.domain {
            LineDomain::FullLine => a * (2.0 * n + 1.0),
            LineDomain::HalfLine => {
                let l_half = (self.potential.centrifugal + 0.25).max(0.0).sqrt();
                a * (4.0 * n + 2.0 * l_half + 2.0)
            }
        }
    }

    /// Leading power `s` of the regular solution `u ~ x^s` at a half-line
    /// origin, from `s (s - 1) = centrifugal`.
    pub fn origin_exponent(&self) -> Option<f64> {
        match self.domain {
            LineDomain::FullLine => None,
            LineDomain::HalfLine => Some(0.5 + (self.potential.centrifugal + 0.25).max(0.0).sqrt()),
        }
    }
}

/// Reduce a model to its Sturm-Liouville problem.
pub fn effective_problem(spec: &ModelSpec) -> Result<RadialProblem> {
    spec.validate()?;
    let p = &spec.params;
    let c2 = p.c * p.c;
    let mc2 = spec.mc2();
    let (domain, potential, intercept) = match spec.family {
        Family::Dirac1DHarmonic => {
            let mw = p.m * p.omega;
            (
                LineDomain::FullLine,
                Potential {
                    confinement: mw,
                    centrifugal: 0.0,
                },
                mc2 * mc2 - c2 * mw,
            )
        }
        Family::Dirac1DIsotonic => (
            LineDomain::HalfLine,
            Potential {
                confinement: p.a,
                centrifugal: p.b * (p.b + 1.0),
            },
            mc2 * mc2 - p.a * c2 * (1.0 - 2.0 * p.b),
        ),
        Family::Dirac2DHarmonic => {
            let mw = p.m * p.omega;
            let ml = spec.ml.unwrap_or(0) as f64;
            (
                LineDomain::HalfLine,
                Potential {
                    confinement: mw,
                    centrifugal: ml * ml - 0.25,
                },
                mc2 * mc2 - 2.0 * mc2 * p.omega * (1.0 + ml),
            )
        }
        Family::Dirac2DIsotonic => {
            let ml = spec.ml.unwrap_or(0) as f64;
            let shifted = ml - p.b;
            (
                LineDomain::HalfLine,
                Potential {
                    confinement: p.a,
                    centrifugal: shifted * shifted - 0.25,
                },
                mc2 * mc2 - 2.0 * p.a * c2 * ml + 2.0 * p.a * c2 * (p.b - 1.0),
            )
        }
    };
    let lambda_to_e2 = Affine {
        slope: c2,
        intercept,
    };
    let lambda_to_eps = Affine {
        slope: c2 / (2.0 * mc2),
        intercept: (intercept - mc2 * mc2) / (2.0 * mc2),
    };
    Ok(RadialProblem {
        domain,
        potential,
        lambda_to_e2,
        lambda_to_eps,
        singular_at_zero: potential.centrifugal != 0.0,
        mc2,
    })
}

/// Recover the lower spinor component from the upper one,
/// `psi_2 = c (p - i W) psi_1 / (E + mc^2)`.
///
/// The derivative is a central difference with the Dirichlet zeros outside
/// the grid. The result is returned in the real gauge `psi_2 = -i * chi_2`,
/// so the returned samples are `c (psi_1' + W psi_1) / (E + mc^2)`. For the
/// 2D families the input is the `chi` form of sector `ml` and the output is
/// the `chi` form of sector `ml + 1`.
pub fn pair_recover_psi2(spec: &ModelSpec, energy: f64, psi1: &Sampled) -> Result<Sampled> {
    let mc2 = spec.mc2();
    let denom = energy + mc2;
    if denom.abs() < 1e-12 * mc2 {
        return Err(Error::DegenerateEnergy(denom.abs()));
    }
    let w = FirstOrderSuperpotential::for_spec(spec);
    let h = psi1.grid.spacing();
    let deriv = central_derivative(&psi1.values, h);
    let c = spec.params.c;
    let values = psi1
        .grid
        .nodes()
        .zip(psi1.values.iter().zip(&deriv))
        .map(|(x, (&v, &dv))| c * (dv + w.value(x) * v) / denom)
        .collect();
    Ok(Sampled {
        grid: psi1.grid,
        values,
    })
}

/// `c (p + i W) psi_2` in the same real gauge as [`pair_recover_psi2`],
/// i.e. `c (-chi_2' + W chi_2)`.
pub fn apply_pair_raising(spec: &ModelSpec, psi2: &Sampled) -> Sampled {
    let w = FirstOrderSuperpotential::for_spec(spec);
    let h = psi2.grid.spacing();
    let deriv = central_derivative(&psi2.values, h);
    let c = spec.params.c;
    let values = psi2
        .grid
        .nodes()
        .zip(psi2.values.iter().zip(&deriv))
        .map(|(x, (&v, &dv))| c * (-dv + w.value(x) * v))
        .collect();
    Sampled {
        grid: psi2.grid,
        values,
    }
}
