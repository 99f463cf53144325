//! Property suites behind `relqosc verify`.
//!
//! Every suite runs over the same fixed parameter matrix ([`matrix`]), three
//! sets per family, using the grid size, level count and tolerance from the
//! run configuration. Checks are reported in a fixed order.
//!
//! Two checks are reported as `SKIP` where they cannot hold:
//!
//! * `nonrel/ratio` when `eps/mc^2 > 1/6` at the smallest `c`. The ratio of
//!   successive differences is `4 (1 - 3x/4 + ...)` with `x = eps/mc^2`, so
//!   such levels sit outside the `1/c^2` regime.
//! * `pair/*` for the 1D isotonic oscillator with non-integer `b < 3/2`. The
//!   lower component behaves like `x^b` near the origin and the discrete
//!   residual only decays like `h^(b - 1/2)`.

use std::io::Write;

use relqosc_core::analytic::{analytic_shift, e2_gap};
use relqosc_core::solver::refinement_errors;
use relqosc_core::{
    analytic_e2, analytic_nonrel_eps, block_spectrum, build_block_hamiltonian,
    build_spectrum_table, choose_domain, commutator_expectation, discretize_supercharge,
    effective_problem, expected_order, numeric_solve, numeric_spectrum, residual_pair_check,
    susy_isospectrality_check, Family, GridOptions, ModelSpec,
};
use serde::Serialize;

use crate::args::Suite;
use crate::commands::{nonrel_ratio_ok, nonrel_rows};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::ParamsOut;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub check: &'static str,
    pub subject: String,
    pub value: f64,
    pub limit: String,
    pub passed: bool,
    /// Why the check does not apply to this subject.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl Check {
    fn new(
        suite: &'static str,
        check: &'static str,
        subject: String,
        value: f64,
        limit: String,
        passed: bool,
    ) -> Self {
        Check {
            suite,
            check,
            subject,
            value,
            limit,
            passed,
            skipped: None,
        }
    }

    fn skip(suite: &'static str, check: &'static str, subject: String, reason: String) -> Self {
        Check {
            suite,
            check,
            subject,
            value: f64::NAN,
            limit: String::new(),
            passed: true,
            skipped: Some(reason),
        }
    }

    pub fn line(&self) -> String {
        if let Some(reason) = &self.skipped {
            return format!(
                "SKIP {}/{} [{}] {}",
                self.suite, self.check, self.subject, reason
            );
        }
        format!(
            "{} {}/{} [{}] value={:.6e} limit: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.check,
            self.subject,
            self.value,
            self.limit
        )
    }
}

/// The fixed parameter matrix: three sets per family.
pub fn matrix() -> Vec<ModelSpec> {
    let sets = [
        ModelSpec::harmonic_1d(1.0, 1.0, 1.0),
        ModelSpec::harmonic_1d(2.0, 0.5, 1.5),
        ModelSpec::harmonic_1d(0.7, 1.3, 0.4),
        ModelSpec::isotonic_1d(1.0, 1.0, 1.0, 1.0),
        ModelSpec::isotonic_1d(2.0, 0.5, 0.7, 0.3),
        ModelSpec::isotonic_1d(0.5, 2.0, 1.5, 2.0),
        ModelSpec::harmonic_2d(1.0, 1.0, 1.0, 1),
        ModelSpec::harmonic_2d(1.5, 0.8, 0.6, -2),
        ModelSpec::harmonic_2d(0.8, 1.2, 1.3, 3),
        ModelSpec::isotonic_2d(1.0, 1.0, 1.0, 0.25, 1),
        ModelSpec::isotonic_2d(1.5, 0.8, 0.6, 0.75, -1),
        ModelSpec::isotonic_2d(0.8, 1.2, 1.3, 1.6, 3),
    ];
    sets.into_iter()
        .map(|s| s.expect("matrix entries are valid"))
        .collect()
}

pub fn label(spec: &ModelSpec) -> String {
    format!("{} {}", spec.family, ParamsOut::of(spec).describe())
}

fn max_rel(pairs: impl Iterator<Item = (f64, f64)>) -> f64 {
    pairs
        .map(|(got, want)| (got - want).abs() / want.abs())
        .fold(0.0, f64::max)
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    Ok(match suite {
        Suite::Spectrum => spectrum_suite(cfg)?,
        Suite::Susy => susy_suite(cfg)?,
        Suite::Nonrel => nonrel_suite(cfg)?,
        Suite::Pair => pair_suite(cfg)?,
        Suite::All => {
            let mut all = spectrum_suite(cfg)?;
            all.extend(susy_suite(cfg)?);
            all.extend(nonrel_suite(cfg)?);
            all.extend(pair_suite(cfg)?);
            all
        }
    })
}

/// Print one line per check and a JSON list of failures; `true` if all passed.
pub fn report(
    checks: &[Check],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, CliError> {
    for c in checks {
        writeln!(out, "{}", c.line())?;
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let skipped = checks.iter().filter(|c| c.skipped.is_some()).count();
    writeln!(
        out,
        "{} checks, {} passed, {} failed, {} skipped",
        checks.len(),
        checks.len() - failed.len() - skipped,
        failed.len(),
        skipped
    )?;
    if !failed.is_empty() {
        serde_json::to_writer_pretty(&mut *err, &failed)?;
        writeln!(err)?;
    }
    Ok(failed.is_empty())
}

fn spectrum_suite(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "spectrum";
    let k = cfg.levels;
    let opts = cfg.grid_options();
    let mut out = Vec::new();
    for spec in matrix() {
        let subject = label(&spec);
        let exact = build_spectrum_table(&spec, k.max(2))?;
        let gap = e2_gap(&spec);
        let spacing = exact
            .levels
            .windows(2)
            .map(|w| ((w[1].e2 - w[0].e2) - gap).abs() / gap)
            .fold(0.0, f64::max);
        out.push(Check::new(
            S,
            "closed-form-spacing",
            subject.clone(),
            spacing,
            "<= 1e-12".into(),
            spacing <= 1e-12,
        ));

        let numeric = numeric_spectrum(&spec, k, opts)?;
        let rel = max_rel(
            numeric
                .levels
                .iter()
                .zip(&exact.levels)
                .map(|(a, b)| (a.e2, b.e2)),
        );
        out.push(Check::new(
            S,
            "oracle",
            subject.clone(),
            rel,
            format!("<= {:e}", cfg.tolerance),
            rel <= cfg.tolerance,
        ));

        if k >= 3 {
            let gaps: Vec<f64> = numeric
                .levels
                .windows(2)
                .map(|w| w[1].e2 - w[0].e2)
                .collect();
            let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
            let sd =
                (gaps.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / gaps.len() as f64).sqrt();
            out.push(Check::new(
                S,
                "numeric-spacing",
                subject.clone(),
                sd / mean,
                "<= 1e-3 of mean gap".into(),
                sd <= 1e-3 * mean,
            ));
        }

        let want = expected_order(&effective_problem(&spec)?);
        for n in 0..k.min(3) {
            let (coarse, fine) = refinement_errors(&spec, n, opts)?;
            let p = (coarse / fine).log2();
            let (ok, limit) = if want < 2.0 {
                (
                    p >= 1.5,
                    format!(">= 1.5 (weak origin wall, predicted {want:.3})"),
                )
            } else {
                ((p - 2.0).abs() <= 0.3, "2.0 +- 0.3".into())
            };
            out.push(Check::new(
                S,
                "order",
                format!("{subject} n={n}"),
                p,
                limit,
                ok,
            ));
        }

        if let Some(ml) = spec.ml {
            let degenerate = match spec.family {
                Family::Dirac2DHarmonic => ml >= 1,
                _ => spec.effective_ml() >= 0.5,
            };
            if degenerate {
                let mut analytic_same = true;
                let mut rel = 0.0_f64;
                for shift in 1..3 {
                    let other = spec.with_ml(ml + shift)?;
                    let t = numeric_spectrum(&other, k, opts)?;
                    rel = rel.max(max_rel(
                        t.levels
                            .iter()
                            .zip(&numeric.levels)
                            .map(|(a, b)| (a.e2, b.e2)),
                    ));
                    for n in 0..k {
                        analytic_same &= analytic_e2(&other, n)? == analytic_e2(&spec, n)?;
                    }
                }
                out.push(Check::new(
                    S,
                    "sector-degeneracy-analytic",
                    subject.clone(),
                    if analytic_same { 0.0 } else { 1.0 },
                    "exact".into(),
                    analytic_same,
                ));
                out.push(Check::new(
                    S,
                    "sector-degeneracy-numeric",
                    subject.clone(),
                    rel,
                    format!("<= {:e}", cfg.tolerance),
                    rel <= cfg.tolerance,
                ));
            }
        }
    }

    let iso = ModelSpec::isotonic_1d(1.0, 1.0, 1.0, 1e-12)?;
    let ho = ModelSpec::harmonic_1d(1.0, 1.0, 1.0)?;
    let mut worst = 0.0_f64;
    for n in 0..k {
        let want = analytic_e2(&ho, 2 * n + 1)?;
        worst = worst.max((analytic_e2(&iso, n)? - want).abs() / want);
    }
    out.push(Check::new(
        S,
        "limit-b-to-zero",
        "1d-iso b=1e-12 vs odd 1d-ho levels".into(),
        worst,
        "<= 1e-8".into(),
        worst <= 1e-8,
    ));

    let mut same = true;
    for ml in [-2, -1, 1, 2, 3] {
        let ho = ModelSpec::harmonic_2d(1.5, 0.8, 0.6, ml)?;
        let iso = ModelSpec::isotonic_2d(1.5, 0.8, 1.5 * 0.6, 0.0, ml)?;
        for n in 0..k {
            same &= analytic_e2(&iso, n)? == analytic_e2(&ho, n)?;
        }
    }
    out.push(Check::new(
        S,
        "limit-isotonic-to-harmonic",
        "2d-iso a=m omega, b=0".into(),
        if same { 0.0 } else { 1.0 },
        "exact".into(),
        same,
    ));
    Ok(out)
}

fn gaussian(center: f64, width: f64) -> impl Fn(f64) -> f64 {
    move |x| (-((x - center) / width).powi(2)).exp()
}

fn susy_suite(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "susy";
    let k = cfg.levels;
    let opts = cfg.grid_options();
    let mut out = Vec::new();
    for spec in matrix() {
        let subject = label(&spec);
        let grid = choose_domain(&effective_problem(&spec)?, k, opts)?;
        let pair = discretize_supercharge(&spec, &grid)?;

        let report = susy_isospectrality_check(&pair, 8.min(pair.size() - 1))?;
        out.push(Check::new(
            S,
            "partner-isospectral",
            subject.clone(),
            report.max_rel_diff,
            "<= 1e-10".into(),
            report.max_rel_diff <= 1e-10,
        ));
        let kernel = usize::from(analytic_shift(&spec, 0)? == 0.0);
        out.push(Check::new(
            S,
            "kernel",
            subject.clone(),
            report.kernel_dim as f64,
            format!("== {kernel}"),
            report.kernel_dim == kernel,
        ));

        let h = build_block_hamiltonian(&pair, spec.mc2())?;
        let low = k.min(4);
        let e = block_spectrum(&h, low)?;
        let positive = &e[low..];
        let rel = max_rel(
            positive
                .iter()
                .enumerate()
                .map(|(n, e)| Ok((*e, analytic_e2(&spec, n)?.sqrt())))
                .collect::<Result<Vec<_>, CliError>>()?
                .into_iter(),
        );
        out.push(Check::new(
            S,
            "block-energies",
            subject.clone(),
            rel,
            "<= 1e-2".into(),
            rel <= 1e-2,
        ));

        // Both +E and -E must be eigenvalues of the assembled 2N matrix.
        let tri = h.as_tridiagonal()?;
        let mut paired = true;
        for &en in positive {
            let t = 1e-8 * en.abs().max(1.0);
            for x in [en, -en] {
                paired &= tri.sturm_count(x + t) > tri.sturm_count(x - t);
            }
        }
        out.push(Check::new(
            S,
            "plus-minus-pairing",
            subject.clone(),
            if paired { 0.0 } else { 1.0 },
            "every +-E in the block spectrum".into(),
            paired,
        ));

        let c2 = spec.params.c.powi(2);
        let ata = pair.number_spectrum(low)?;
        let mut ladder = 0.0_f64;
        for (n, v) in ata.iter().enumerate() {
            let want = analytic_shift(&spec, n)? / (c2 * pair.delta);
            ladder = ladder.max((v - want).abs() / want.max(1.0));
        }
        out.push(Check::new(
            S,
            "number-operator",
            subject.clone(),
            ladder,
            "<= 1e-2".into(),
            ladder <= 1e-2,
        ));

        if spec.family.is_harmonic() {
            let len = 1.0 / spec.linear_strength().sqrt();
            let (delta, tests) = if spec.family.is_2d() {
                (
                    4.0 * spec.linear_strength(),
                    vec![
                        gaussian(2.0 * len, 0.5 * len),
                        gaussian(3.0 * len, 0.8 * len),
                        gaussian(1.5 * len, 0.3 * len),
                    ],
                )
            } else {
                (
                    2.0 * spec.linear_strength(),
                    vec![
                        gaussian(0.0, len),
                        gaussian(0.5 * len, 0.7 * len),
                        gaussian(-len, 1.3 * len),
                    ],
                )
            };
            let mut worst = 0.0_f64;
            for f in tests {
                let samples: Vec<f64> = grid.nodes().map(&f).collect();
                let v = commutator_expectation(&spec, &grid, delta, &samples)?;
                worst = worst.max((v - 1.0).abs());
            }
            out.push(Check::new(
                S,
                "commutator",
                subject.clone(),
                worst,
                "|<[A,A+]> - 1| <= 5e-2".into(),
                worst <= 5e-2,
            ));
        }

        let small = choose_domain(
            &effective_problem(&spec)?,
            k,
            GridOptions {
                n_points: 200,
                x_max: None,
            },
        )?;
        let hs = build_block_hamiltonian(&discretize_supercharge(&spec, &small)?, spec.mc2())?;
        let direct = hs.as_tridiagonal()?.lowest_eigenvalues(hs.size, 0.0)?;
        let via = block_spectrum(&hs, hs.size / 2)?;
        let scale = direct.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let diff = direct
            .iter()
            .zip(&via)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / scale;
        out.push(Check::new(
            S,
            "route-equivalence",
            format!("{subject} N=200"),
            diff,
            "<= 1e-8 of spectral radius".into(),
            diff <= 1e-8,
        ));
    }
    Ok(out)
}

fn nonrel_suite(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "nonrel";
    let levels = cfg.levels.min(4);
    let c0 = cfg.c_list[0];
    let mut out = Vec::new();
    for spec in matrix() {
        let rows = nonrel_rows(&spec, levels, &cfg.c_list)?;
        for n in 0..levels {
            let subject = format!("{} n={n}", label(&spec));
            // The ratio is 4 (1 - 3x/4 + ...) with x = eps / mc^2 at the smaller c.
            let slow = spec.with_c(c0)?;
            let x = analytic_nonrel_eps(&slow, n)? / slow.mc2();
            if x > 1.0 / 6.0 {
                out.push(Check::skip(S, "ratio", subject, format!(
                    "eps/mc^2 = {x:.3} at c = {c0}: outside the 1/c^2 regime, first-order deviation 3x/4 exceeds the window"
                )));
                continue;
            }
            let mine: Vec<_> = rows.iter().filter(|r| r.n == n).collect();
            let ok = mine.iter().all(|r| nonrel_ratio_ok(r));
            let worst = mine
                .iter()
                .filter_map(|r| Some((r.ratio? / r.expected_ratio? - 1.0).abs()))
                .fold(0.0, f64::max);
            out.push(Check::new(
                S,
                "ratio",
                subject,
                worst,
                "diff shrinks by (c'/c)^2 within 12.5%".into(),
                ok,
            ));
        }
    }
    Ok(out)
}

fn pair_suite(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "pair";
    let k = cfg.levels.max(4);
    let mut out = Vec::new();
    for spec in matrix().into_iter().filter(|s| !s.family.is_2d()) {
        let b = spec.params.b;
        if spec.family == Family::Dirac1DIsotonic && b.fract() != 0.0 && b < 1.5 {
            out.push(Check::skip(S, "residual", label(&spec), format!(
                "lower component ~ x^{b} has an unbounded derivative at the origin; the residual scales like h^{:.2}",
                b - 0.5
            )));
            continue;
        }
        let coarse = numeric_solve(&spec, k, cfg.grid_options())?;
        let fine = numeric_solve(
            &spec,
            k,
            GridOptions {
                n_points: 2 * cfg.grid_n,
                x_max: Some(coarse.grid.x_max),
            },
        )?;
        for n in 0..4 {
            let subject = format!("{} n={n}", label(&spec));
            let r = residual_pair_check(
                &spec,
                &coarse.table.levels[n],
                &coarse.states[n],
                &coarse.grid,
            )?;
            let r2 =
                residual_pair_check(&spec, &fine.table.levels[n], &fine.states[n], &fine.grid)?;
            out.push(Check::new(
                S,
                "residual",
                subject.clone(),
                r,
                "<= 5e-3".into(),
                r <= 5e-3,
            ));
            out.push(Check::new(
                S,
                "refinement",
                subject,
                r / r2,
                ">= 2 (halves or better)".into(),
                r / r2 >= 2.0,
            ));
        }
    }
    Ok(out)
}
