use std::io::Write;

use relqosc_core::analytic::analytic_shift;
use relqosc_core::{
    analytic_e2, analytic_nonrel_eps, analytic_wavefunction, block_spectrum,
    build_block_hamiltonian, build_spectrum_table, choose_domain, discretize_supercharge,
    effective_problem, numeric_solve, numeric_spectrum, pair_recover_psi2, ModelSpec, Sampled,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{
    emit, sig12, sig12_opt, AjcDoc, AjcRow, NonrelDoc, NonrelRow, ParamsOut, SpectrumDoc,
    SpectrumRow, WaveDoc, WaveRow,
};

pub fn spectrum_doc(cfg: &RunConfig) -> Result<SpectrumDoc, CliError> {
    let spec = cfg.spec()?;
    let k = cfg.levels;
    let analytic = if cfg.method.analytic() {
        Some(build_spectrum_table(&spec, k)?)
    } else {
        None
    };
    let numeric = if cfg.method.numeric() {
        Some(numeric_spectrum(&spec, k, cfg.grid_options())?)
    } else {
        None
    };
    let levels = (0..k)
        .map(|n| {
            let a = analytic.as_ref().map(|t| t.levels[n]);
            let b = numeric.as_ref().map(|t| t.levels[n]);
            let shown = a.or(b).expect("at least one method");
            let rel_err = match (a, b) {
                (Some(a), Some(b)) => Some((b.e2 - a.e2).abs() / a.e2),
                _ => None,
            };
            SpectrumRow {
                n,
                e2_analytic: sig12_opt(a.map(|l| l.e2)),
                e2_numeric: sig12_opt(b.map(|l| l.e2)),
                e: sig12(shown.e),
                eps: sig12(shown.eps),
                rel_err: sig12_opt(rel_err),
            }
        })
        .collect();
    Ok(SpectrumDoc {
        family: spec.family,
        params: ParamsOut::of(&spec),
        levels,
    })
}

pub fn spectrum(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = spectrum_doc(cfg)?;
    emit(out, cfg.format, &doc, None, &doc.levels)
}

pub fn wavefunction_doc(cfg: &RunConfig, n: usize) -> Result<WaveDoc, CliError> {
    if n >= cfg.levels {
        return Err(CliError::Usage(format!(
            "level {n} is outside the {} requested levels; raise --levels",
            cfg.levels
        )));
    }
    let spec = cfg.spec()?;
    let sol = numeric_solve(&spec, cfg.levels, cfg.grid_options())?;
    let grid = sol.grid;
    let psi1 = Sampled::new(grid, sol.states[n].vector.clone())?;
    let level = sol.table.levels[n];
    let psi2 = pair_recover_psi2(&spec, level.e, &psi1)?;
    let exact = Sampled::new(
        grid,
        grid.nodes()
            .map(|x| analytic_wavefunction(&spec, n, x))
            .collect::<Result<Vec<_>, _>>()?,
    )?;
    let overlap: f64 = exact
        .values
        .iter()
        .zip(&psi1.values)
        .map(|(a, b)| a * b)
        .sum();
    let scale = overlap.signum() / exact.l2_norm();
    let points = grid
        .nodes()
        .enumerate()
        .map(|(i, x)| WaveRow {
            x: sig12(x),
            psi1_analytic_normalized: sig12(scale * exact.values[i]),
            psi1_numeric: sig12(psi1.values[i]),
            psi2_numeric: sig12(psi2.values[i]),
        })
        .collect();
    Ok(WaveDoc {
        family: spec.family,
        params: ParamsOut::of(&spec),
        n,
        e2: sig12(level.e2),
        points,
    })
}

pub fn wavefunction(cfg: &RunConfig, n: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = wavefunction_doc(cfg, n)?;
    let comment = format!(
        "family={} {} n={} e2={}",
        doc.family,
        doc.params.describe(),
        doc.n,
        doc.e2
    );
    emit(out, cfg.format, &doc, Some(&comment), &doc.points)
}

/// `|(E_n - mc^2) - eps_n|` over a sweep of `c`, from the closed forms.
pub fn nonrel_rows(
    spec: &ModelSpec,
    levels: usize,
    c_list: &[f64],
) -> Result<Vec<NonrelRow>, CliError> {
    let mut rows = Vec::new();
    for n in 0..levels {
        let mut prev: Option<(f64, f64)> = None;
        for &c in c_list {
            let s = spec.with_c(c)?;
            let mc2 = s.mc2();
            let e = analytic_e2(&s, n)?.sqrt();
            let kinetic = analytic_shift(&s, n)? / (e + mc2);
            let eps = analytic_nonrel_eps(&s, n)?;
            let diff = (kinetic - eps).abs();
            // Levels pinned at E = mc^2 have no correction at any c.
            let (ratio, expected_ratio) = match prev {
                Some((c0, d0)) if d0 != 0.0 || diff != 0.0 => {
                    (Some(d0 / diff), Some((c / c0).powi(2)))
                }
                _ => (None, None),
            };
            rows.push(NonrelRow {
                n,
                c,
                e_minus_mc2: kinetic,
                eps,
                diff,
                ratio,
                expected_ratio,
            });
            prev = Some((c, diff));
        }
    }
    Ok(rows)
}

/// Relative slack allowed on each ratio: 4.0 +- 0.5 when `c` doubles.
pub const NONREL_RATIO_SLACK: f64 = 0.125;

pub fn nonrel_ratio_ok(row: &NonrelRow) -> bool {
    match (row.ratio, row.expected_ratio) {
        (Some(r), Some(want)) => (r / want - 1.0).abs() <= NONREL_RATIO_SLACK,
        _ => true,
    }
}

/// Prints the sweep table; the returned rows failed the ratio check.
pub fn nonrel(cfg: &RunConfig, out: &mut dyn Write) -> Result<Vec<NonrelRow>, CliError> {
    let spec = cfg.spec()?;
    let rows = nonrel_rows(&spec, cfg.levels, &cfg.c_list)?;
    let failed = rows
        .iter()
        .filter(|r| !nonrel_ratio_ok(r))
        .cloned()
        .collect();
    let shown: Vec<NonrelRow> = rows
        .into_iter()
        .map(|r| NonrelRow {
            n: r.n,
            c: sig12(r.c),
            e_minus_mc2: sig12(r.e_minus_mc2),
            eps: sig12(r.eps),
            diff: sig12(r.diff),
            ratio: sig12_opt(r.ratio),
            expected_ratio: sig12_opt(r.expected_ratio),
        })
        .collect();
    let doc = NonrelDoc {
        family: spec.family,
        params: ParamsOut::of(&spec),
        levels: shown,
    };
    emit(out, cfg.format, &doc, None, &doc.levels)?;
    Ok(failed)
}

pub fn ajc_doc(cfg: &RunConfig) -> Result<AjcDoc, CliError> {
    let spec = cfg.spec()?;
    let k = cfg.levels;
    let grid = choose_domain(&effective_problem(&spec)?, k, cfg.grid_options())?;
    let mut pair = discretize_supercharge(&spec, &grid)?;
    if let Some(d) = cfg.delta {
        pair = pair.with_delta(d)?;
    }
    let h = build_block_hamiltonian(&pair, spec.mc2())?;
    let energies = block_spectrum(&h, k)?;
    let ata = pair.number_spectrum(k)?;
    let levels = (0..k)
        .map(|n| {
            let e2 = analytic_e2(&spec, n)?;
            let e_plus = energies[k + n];
            Ok(AjcRow {
                n,
                ata: sig12(ata[n]),
                e_minus: sig12(energies[k - 1 - n]),
                e_plus: sig12(e_plus),
                e2_analytic: sig12(e2),
                rel_err: sig12((e_plus * e_plus - e2).abs() / e2),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(AjcDoc {
        family: spec.family,
        params: ParamsOut::of(&spec),
        g: sig12(pair.g),
        delta: sig12(pair.delta),
        levels,
    })
}

pub fn ajc(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = ajc_doc(cfg)?;
    let comment = format!(
        "family={} {} g={} delta={}",
        doc.family,
        doc.params.describe(),
        doc.g,
        doc.delta
    );
    emit(out, cfg.format, &doc, Some(&comment), &doc.levels)
}
