//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use relqosc::args::CommonArgs;
use relqosc::commands::{nonrel_ratio_ok, nonrel_rows};
use relqosc::config::{ConfigFile, RunConfig};
use relqosc::verify::{label, matrix};
use relqosc_core::solver::refinement_errors;
use relqosc_core::{
    analytic_e2, block_spectrum, build_block_hamiltonian, build_spectrum_table, choose_domain,
    discretize_supercharge, effective_problem, expected_order, numeric_solve, numeric_spectrum,
    residual_pair_check, susy_isospectrality_check, Family, GridOptions, ModelSpec,
};

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

const N4000: GridOptions = GridOptions {
    n_points: 4000,
    x_max: None,
};

fn family_default(family: Family) -> ModelSpec {
    let args = CommonArgs {
        family: Some(family),
        ..Default::default()
    };
    RunConfig::resolve(&args, &ConfigFile::default(), None)
        .and_then(|c| c.spec())
        .expect("family defaults are valid")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn stated_gap(spec: &ModelSpec) -> f64 {
    let p = &spec.params;
    let c2 = p.c * p.c;
    match spec.family {
        Family::Dirac1DHarmonic => 2.0 * p.m * c2 * p.omega,
        Family::Dirac1DIsotonic => 4.0 * p.a * c2,
        Family::Dirac2DHarmonic => 4.0 * p.m * c2 * p.omega,
        Family::Dirac2DIsotonic => 4.0 * p.a * c2,
    }
}

fn closed_form_spacing() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for spec in matrix() {
        let gap = stated_gap(&spec);
        let table = build_spectrum_table(&spec, 12)?;
        for w in table.levels.windows(2) {
            worst = worst.max(rel(w[1].e2 - w[0].e2, gap));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst <= 1e-12 && secs < 1.0,
        format!("12 sets, max rel gap deviation {worst:.2e} (<= 1e-12), {secs:.3} s (< 1 s)"),
    ))
}

fn numeric_agreement() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for spec in matrix() {
        let table = numeric_spectrum(&spec, 5, N4000)?;
        for (n, level) in table.levels.iter().enumerate() {
            worst = worst.max(rel(level.e2, analytic_e2(&spec, n)?));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst <= 1e-4 && secs < 30.0,
        format!(
            "12 sets x 5 levels at N=4000, max rel err {worst:.2e} (<= 1e-4), {secs:.2} s (< 30 s)"
        ),
    ))
}

fn convergence_order() -> Outcome {
    let mut specs = matrix();
    specs.push(ModelSpec::isotonic_2d(1.0, 1.0, 1.0, 0.5, 1)?);
    specs.push(ModelSpec::isotonic_2d(1.0, 1.0, 1.0, 1.5, 1)?);
    let (mut regular, mut weak) = (Vec::new(), Vec::new());
    let mut failed = Vec::new();
    for spec in &specs {
        let singular = expected_order(&effective_problem(spec)?) < 2.0;
        for n in 0..3 {
            let (coarse, fine) = refinement_errors(spec, n, N4000)?;
            let p = (coarse / fine).log2();
            let ok = if singular {
                p >= 1.5
            } else {
                (p - 2.0).abs() <= 0.3
            };
            if !ok {
                failed.push(format!("{} n={n} p={p:.3}", label(spec)));
            }
            if singular {
                weak.push(p)
            } else {
                regular.push(p)
            }
        }
    }
    let span = |v: &[f64]| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        format!("[{lo:.3}, {hi:.3}]")
    };
    Ok((
        failed.is_empty(),
        format!(
            "regular sectors {} (2.0 +- 0.3), weak origin walls {} (>= 1.5){}",
            span(&regular),
            span(&weak),
            if failed.is_empty() {
                String::new()
            } else {
                format!("; failed: {}", failed.join(", "))
            }
        ),
    ))
}

fn limits() -> Outcome {
    let iso = ModelSpec::isotonic_1d(1.0, 1.0, 1.0, 1e-12)?;
    let ho = ModelSpec::harmonic_1d(1.0, 1.0, 1.0)?;
    let mut embed = 0.0_f64;
    for n in 0..10 {
        embed = embed.max(rel(analytic_e2(&iso, n)?, analytic_e2(&ho, 2 * n + 1)?));
    }

    let mut exact = true;
    for (m, c, omega) in [(1.0, 1.0, 1.0), (1.5, 0.8, 0.6), (0.8, 1.2, 1.3)] {
        for ml in [-3, -2, -1, 1, 2, 3] {
            let ho = ModelSpec::harmonic_2d(m, c, omega, ml)?;
            let iso = ModelSpec::isotonic_2d(m, c, m * omega, 0.0, ml)?;
            for n in 0..10 {
                exact &= analytic_e2(&iso, n)? == analytic_e2(&ho, n)?;
            }
        }
    }

    let mut ratios = true;
    let mut spread = (f64::INFINITY, f64::NEG_INFINITY);
    for family in Family::ALL {
        for r in nonrel_rows(&family_default(family), 4, &[10.0, 20.0, 40.0])? {
            ratios &= nonrel_ratio_ok(&r);
            if let Some(x) = r.ratio {
                spread = (spread.0.min(x), spread.1.max(x));
            }
        }
    }
    Ok((
        embed <= 1e-8 && exact && ratios,
        format!(
            "(a) b=1e-12 max rel {embed:.2e} (<= 1e-8); (b) a=m omega, b=0 exact: {exact}; (c) ratios in [{:.4}, {:.4}] (4.0 +- 0.5)",
            spread.0, spread.1
        ),
    ))
}

fn pair_closure() -> Outcome {
    let mut worst = 0.0_f64;
    let mut min_gain = f64::INFINITY;
    let mut sets = 0;
    for spec in matrix().into_iter().filter(|s| !s.family.is_2d()) {
        let b = spec.params.b;
        // The lower component of these sets is x^b near the origin.
        if spec.family == Family::Dirac1DIsotonic && b.fract() != 0.0 && b < 1.5 {
            continue;
        }
        sets += 1;
        let coarse = numeric_solve(&spec, 5, N4000)?;
        let fine = numeric_solve(
            &spec,
            5,
            GridOptions {
                n_points: 8000,
                x_max: Some(coarse.grid.x_max),
            },
        )?;
        for n in 0..4 {
            let r = residual_pair_check(
                &spec,
                &coarse.table.levels[n],
                &coarse.states[n],
                &coarse.grid,
            )?;
            let r2 =
                residual_pair_check(&spec, &fine.table.levels[n], &fine.states[n], &fine.grid)?;
            worst = worst.max(r);
            min_gain = min_gain.min(r / r2);
        }
    }
    Ok((
        worst <= 5e-3 && min_gain >= 2.0,
        format!("{sets} sets, n <= 3: max residual {worst:.2e} (<= 5e-3), min N->2N gain {min_gain:.2} (>= 2)"),
    ))
}

fn susy_block() -> Outcome {
    let mut iso = 0.0_f64;
    let mut paired = true;
    let mut energies = 0.0_f64;
    let mut dense = 0.0_f64;
    for spec in matrix() {
        let grid = choose_domain(&effective_problem(&spec)?, 5, N4000)?;
        let pair = discretize_supercharge(&spec, &grid)?;
        iso = iso.max(susy_isospectrality_check(&pair, 8)?.max_rel_diff);

        let h = build_block_hamiltonian(&pair, spec.mc2())?;
        let e = block_spectrum(&h, 4)?;
        let tri = h.as_tridiagonal()?;
        for n in 0..4 {
            let (lo, hi) = (e[3 - n], e[4 + n]);
            paired &= lo == -hi;
            let t = 1e-8 * hi.abs().max(1.0);
            for x in [lo, hi] {
                paired &= tri.sturm_count(x + t) > tri.sturm_count(x - t);
            }
            energies = energies.max(rel(hi, analytic_e2(&spec, n)?.sqrt()));
        }

        let small = choose_domain(
            &effective_problem(&spec)?,
            5,
            GridOptions {
                n_points: 200,
                x_max: None,
            },
        )?;
        let hs = build_block_hamiltonian(&discretize_supercharge(&spec, &small)?, spec.mc2())?;
        let size = hs.size;
        let full = DMatrix::from_row_slice(size, size, &hs.to_dense());
        let mut brute: Vec<f64> = SymmetricEigen::new(full)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        brute.sort_by(f64::total_cmp);
        let via = block_spectrum(&hs, hs.size / 2)?;
        let scale = brute.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for (a, b) in brute.iter().zip(&via) {
            dense = dense.max((a - b).abs() / scale);
        }
    }
    Ok((
        iso <= 1e-10 && paired && energies <= 1e-2 && dense <= 1e-8,
        format!(
            "isospectral {iso:.2e} (<= 1e-10); +-E pairing: {paired}; block E_n, n <= 3, {energies:.2e} (<= 1e-2); dense 2N at N=200 {dense:.2e} (<= 1e-8)"
        ),
    ))
}

fn ajc_normalization() -> Outcome {
    let mut worst = 0.0_f64;
    for spec in matrix()
        .into_iter()
        .filter(|s| s.family == Family::Dirac2DHarmonic)
    {
        let grid = choose_domain(&effective_problem(&spec)?, 5, N4000)?;
        let delta = 4.0 * spec.params.m * spec.params.omega;
        let pair = discretize_supercharge(&spec, &grid)?.with_delta(delta)?;
        let ml = spec.ml.expect("2D sets carry ml");
        // Sectors with ml < 0 start the ladder at |ml|.
        let offset = ((ml.abs() - ml) / 2) as f64;
        for (n, v) in pair.number_spectrum(5)?.iter().enumerate() {
            worst = worst.max((v - (n as f64 + offset)).abs());
        }
    }
    Ok((
        worst <= 1e-2,
        format!("2d-ho, 3 sets, 5 levels, delta = 4 m omega: max |ata - (n + (|ml| - ml)/2)| {worst:.2e} (<= 1e-2)"),
    ))
}

fn degeneracy() -> Outcome {
    let mut exact = true;
    let mut worst = 0.0_f64;
    for spec in matrix().into_iter().filter(|s| s.family.is_2d()) {
        let ml = spec.ml.expect("2D sets carry ml");
        let base = match spec.family {
            Family::Dirac2DHarmonic => 1,
            _ => (spec.params.b + 0.5).ceil() as i32,
        };
        let lowest = ml.max(base);
        let reference = spec.with_ml(lowest)?;
        let want = numeric_spectrum(&reference, 5, N4000)?;
        for shift in 1..3 {
            let other = spec.with_ml(lowest + shift)?;
            for n in 0..5 {
                exact &= analytic_e2(&other, n)? == analytic_e2(&reference, n)?;
            }
            let got = numeric_spectrum(&other, 5, N4000)?;
            for (a, b) in got.levels.iter().zip(&want.levels) {
                worst = worst.max(rel(a.e2, b.e2));
            }
        }
    }
    Ok((
        exact && worst <= 1e-4,
        format!("6 sets, 3 sectors each: analytic exact: {exact}; numeric max rel {worst:.2e} (<= 1e-4)"),
    ))
}

fn cli_verify() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_relqosc");
    let first = Command::new(bin)
        .args(["verify", "--suite", "all"])
        .output()?;
    let second = Command::new(bin)
        .args(["verify", "--suite", "all"])
        .output()?;
    let code = first.status.code();
    let same = first.stdout == second.stdout && first.stderr == second.stderr;
    let summary = String::from_utf8_lossy(&first.stdout)
        .lines()
        .last()
        .unwrap_or_default()
        .to_string();
    Ok((
        code == Some(0) && same,
        format!("exit {code:?} (0); byte-identical runs: {same}; {summary}"),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("closed-form equispacing", closed_form_spacing),
        ("numeric vs analytic", numeric_agreement),
        ("convergence order", convergence_order),
        ("limits", limits),
        ("spinor-pair closure", pair_closure),
        ("supersymmetric block", susy_block),
        ("anti-JC normalization", ajc_normalization),
        ("sector degeneracy", degeneracy),
        ("verify suite and determinism", cli_verify),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        println!(
            "{} {}. {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    if !all {
        std::process::exit(1);
    }
}
