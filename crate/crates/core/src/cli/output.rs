//! Result files. Every run writes into its own directory
//! `<out>/<command>-<unix seconds>`; file names inside are fixed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::{Command, OutputFormat};
use crate::error::{Error, Result};
use crate::maglap::Spectrum;

/// One eigenvalue. Header: `domain,method,B,n,lambda,residual,resolution`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub domain: String,
    pub method: String,
    #[serde(rename = "B")]
    pub field: f64,
    pub n: usize,
    pub lambda: f64,
    pub residual: f64,
    pub resolution: usize,
}

impl SpectrumRow {
    pub fn from_spectrum(s: &Spectrum) -> Vec<Self> {
        s.eigenvalues
            .iter()
            .zip(&s.residuals)
            .enumerate()
            .map(|(k, (&lambda, &residual))| Self {
                domain: s.domain.clone(),
                method: s.method.to_string(),
                field: s.field,
                n: k + 1,
                lambda,
                residual,
                resolution: s.resolution,
            })
            .collect()
    }
}

/// Plot data. Header: `domain,n,B,ln_lambda`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub domain: String,
    pub n: usize,
    #[serde(rename = "B")]
    pub field: f64,
    pub ln_lambda: f64,
}

/// Header: `domain,method,resolution,phi_max,x_max,y_max,residual,closed_form`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionRow {
    pub domain: String,
    pub method: String,
    pub resolution: usize,
    pub phi_max: f64,
    pub x_max: f64,
    pub y_max: f64,
    pub residual: f64,
    pub closed_form: Option<f64>,
}

/// Header: `domain,resolution,alpha,center_x,center_y,symmetric_difference`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymmetryRow {
    pub domain: String,
    pub resolution: usize,
    pub alpha: f64,
    pub center_x: f64,
    pub center_y: f64,
    pub symmetric_difference: f64,
}

/// Header: `domain,B,K,n,upper,lower`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiracRow {
    pub domain: String,
    #[serde(rename = "B")]
    pub field: f64,
    #[serde(rename = "K")]
    pub basis_degree: usize,
    pub n: usize,
    pub upper: f64,
    pub lower: Option<f64>,
}

/// Header: `name,status,lhs,rhs,margin,tolerance,domain,B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub status: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub domain: String,
    #[serde(rename = "B")]
    pub field: Option<f64>,
}

/// The directory a run writes into, and the files written so far.
#[derive(Debug)]
pub struct RunDirectory {
    pub path: PathBuf,
    pub stamp: u64,
    pub files: Vec<PathBuf>,
}

impl RunDirectory {
    /// Creates `<root>/<command>-<seconds>`, adding a counter if it exists.
    pub fn create(root: &Path, command: Command) -> Result<Self> {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        fs::create_dir_all(root)?;
        let base = format!("{}-{stamp}", command.name());
        let mut path = root.join(&base);
        let mut k = 1;
        while path.exists() {
            path = root.join(format!("{base}-{k}"));
            k += 1;
        }
        fs::create_dir(&path)?;
        Ok(Self {
            path,
            stamp,
            files: Vec::new(),
        })
    }

    fn record(&mut self, name: &str) -> PathBuf {
        let p = self.path.join(name);
        self.files.push(p.clone());
        p
    }

    /// Writes `text` verbatim.
    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        let p = self.record(name);
        fs::write(&p, text)?;
        Ok(p)
    }

    /// Writes any serializable value as pretty JSON.
    pub fn write_json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let p = self.record(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&p, text)?;
        Ok(p)
    }
}

/// Writes `records` to `<stem>.csv` or `<stem>.json` in `dir`. CSV headers
/// follow the field order of the record type.
pub fn write_results<T: Serialize>(
    dir: &mut RunDirectory,
    stem: &str,
    records: &[T],
    format: OutputFormat,
) -> Result<PathBuf> {
    if records.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no {stem} records to write"
        )));
    }
    match format {
        OutputFormat::Json => dir.write_json(&format!("{stem}.json"), records),
        OutputFormat::Csv => {
            let p = dir.record(&format!("{stem}.csv"));
            let mut w = csv::Writer::from_path(&p)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(p)
        }
    }
}

/// `ln λ` against `B`, one row per positive eigenvalue.
pub fn decay_rows(spectra: &[SpectrumRow]) -> Vec<DecayRow> {
    spectra
        .iter()
        .filter(|r| r.lambda > 0.0)
        .map(|r| DecayRow {
            domain: r.domain.clone(),
            n: r.n,
            field: r.field,
            ln_lambda: r.lambda.ln(),
        })
        .collect()
}

/// Gnuplot script plotting `ln λ` against `B` from `data` (a `decay.csv`),
/// one curve per `(domain, n)`.
pub fn gnuplot_script(data: &str, rows: &[DecayRow]) -> String {
    let mut curves: Vec<(&str, usize)> = rows.iter().map(|r| (r.domain.as_str(), r.n)).collect();
    curves.sort();
    curves.dedup();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set xlabel 'B'\nset ylabel 'ln lambda'\nset key outside right\n");
    s.push_str("set terminal pngcairo size 900,600\nset output 'decay.png'\n");
    s.push_str("plot \\\n");
    for (k, (domain, n)) in curves.iter().enumerate() {
        let sep = if k + 1 == curves.len() {
            "\n"
        } else {
            ", \\\n"
        };
        let _ = write!(
            s,
            "  '{data}' skip 1 using 3:((strcol(1) eq \"{domain}\" && $2 == {n}) ? $4 : 1/0) with linespoints title '{domain} n={n}'{sep}"
        );
    }
    s
}
