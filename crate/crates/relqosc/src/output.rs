use std::io::Write;

use relqosc_core::{Family, ModelSpec};
use serde::{Deserialize, Serialize};

use crate::args::Format;
use crate::error::CliError;

/// Round to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn sig12_opt(x: Option<f64>) -> Option<f64> {
    x.map(sig12)
}

/// Model parameters relevant to one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsOut {
    pub m: f64,
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ml: Option<i32>,
}

impl ParamsOut {
    pub fn of(spec: &ModelSpec) -> Self {
        let p = &spec.params;
        let harmonic = spec.family.is_harmonic();
        ParamsOut {
            m: sig12(p.m),
            c: sig12(p.c),
            omega: harmonic.then(|| sig12(p.omega)),
            a: (!harmonic).then(|| sig12(p.a)),
            b: (!harmonic).then(|| sig12(p.b)),
            ml: spec.ml,
        }
    }

    /// `key=value` pairs for comment lines.
    pub fn describe(&self) -> String {
        let mut parts = vec![format!("m={}", self.m), format!("c={}", self.c)];
        for (k, v) in [("omega", self.omega), ("a", self.a), ("b", self.b)] {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        }
        if let Some(ml) = self.ml {
            parts.push(format!("ml={ml}"));
        }
        parts.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub e2_analytic: Option<f64>,
    pub e2_numeric: Option<f64>,
    pub e: f64,
    pub eps: f64,
    pub rel_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDoc {
    pub family: Family,
    pub params: ParamsOut,
    pub levels: Vec<SpectrumRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AjcRow {
    pub n: usize,
    /// Eigenvalue of `A^dagger A`.
    pub ata: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub e2_analytic: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AjcDoc {
    pub family: Family,
    pub params: ParamsOut,
    pub g: f64,
    pub delta: f64,
    pub levels: Vec<AjcRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonrelRow {
    pub n: usize,
    pub c: f64,
    /// Kinetic energy `E - mc^2`.
    pub e_minus_mc2: f64,
    pub eps: f64,
    pub diff: f64,
    /// `diff` at the previous `c` divided by `diff` here.
    pub ratio: Option<f64>,
    /// Ratio expected from the `1/c^2` correction.
    pub expected_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonrelDoc {
    pub family: Family,
    pub params: ParamsOut,
    pub levels: Vec<NonrelRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveRow {
    pub x: f64,
    pub psi1_analytic_normalized: f64,
    pub psi1_numeric: f64,
    pub psi2_numeric: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveDoc {
    pub family: Family,
    pub params: ParamsOut,
    pub n: usize,
    pub e2: f64,
    pub points: Vec<WaveRow>,
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, doc: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// A table: JSON document, or CSV rows after an optional `#` comment line.
pub fn emit<T: Serialize, R: Serialize>(
    out: &mut dyn Write,
    format: Format,
    doc: &T,
    comment: Option<&str>,
    rows: &[R],
) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(out, doc),
        Format::Csv => {
            if let Some(c) = comment {
                writeln!(out, "# {c}")?;
            }
            write_csv(out, rows)
        }
    }
}
