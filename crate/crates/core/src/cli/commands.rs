use std::path::PathBuf;

use log::info;
use rayon::prelude::*;
use serde::Serialize;

use super::output::{
    decay_rows, gnuplot_script, write_results, AsymmetryRow, CheckRow, DiracRow, RunDirectory,
    SpectrumRow, TorsionRow,
};
use super::{Command, EigMethod, OutputFormat, RunConfig};
use crate::dirac::dirac_bounds;
use crate::error::{Error, Result};
use crate::geometry::{mask_asymmetry, rasterize, DomainKind, DomainSpec};
use crate::maglap::{disk_eigs_default, Gauge, Spectrum};
use crate::torsion::{solve_torsion_fd, torsion_closed_form};
use crate::verify::{acceptance_sweep, CheckStatus, Workbench};

/// Files written by a run and the number of failed checks.
#[derive(Debug)]
pub struct Outcome {
    pub directory: PathBuf,
    pub files: Vec<PathBuf>,
    pub failed_checks: usize,
}

/// Disk, square, the 2 × ½ rectangle and the ellipse with axis ratio 2, all
/// of unit area.
pub fn default_domains() -> Vec<DomainSpec> {
    vec![
        DomainSpec::disk(1.0).expect("valid"),
        DomainSpec::rectangle(1.0).expect("valid"),
        DomainSpec::rectangle(2.0).expect("valid"),
        DomainSpec::ellipse(2.0).expect("valid"),
    ]
}

fn fields_or(config: &RunConfig, default: &[f64]) -> Vec<f64> {
    if config.fields.is_empty() {
        default.to_vec()
    } else {
        config.fields.clone()
    }
}

fn domains_or_default(domains: &[DomainSpec]) -> Vec<DomainSpec> {
    if domains.is_empty() {
        default_domains()
    } else {
        domains.to_vec()
    }
}

/// Runs `config` on `domains`, inside a pool of `config.jobs` threads when set.
pub fn execute(config: &RunConfig, domains: &[DomainSpec]) -> Result<Outcome> {
    match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start {jobs} workers: {e}")))?
            .install(|| dispatch(config, domains)),
        None => dispatch(config, domains),
    }
}

fn dispatch(config: &RunConfig, domains: &[DomainSpec]) -> Result<Outcome> {
    let mut dir = RunDirectory::create(&config.out, config.command)?;
    info!("{} -> {}", config.command, dir.path.display());
    let failed_checks = match config.command {
        Command::Torsion => torsion(config, domains, &mut dir)?,
        Command::Eigs => eigs(config, domains, &mut dir)?,
        Command::Dirac => dirac(config, domains, &mut dir)?,
        Command::Asymmetry => asymmetry(config, domains, &mut dir)?,
        Command::Verify => verify(config, domains, &mut dir)?,
        Command::Sweep => sweep(config, domains, &mut dir)?,
    };
    Ok(Outcome {
        directory: dir.path.clone(),
        files: dir.files,
        failed_checks,
    })
}

fn torsion(config: &RunConfig, domains: &[DomainSpec], dir: &mut RunDirectory) -> Result<usize> {
    let rows: Vec<TorsionRow> = domains
        .par_iter()
        .map(|spec| {
            let d = rasterize(spec, config.resolution)?;
            let tf = solve_torsion_fd(&d)?;
            let closed_form = torsion_closed_form(&d).ok().map(|c| c.max_value);
            Ok(TorsionRow {
                domain: spec.tag(),
                method: "fd".into(),
                resolution: config.resolution,
                phi_max: tf.max_value,
                x_max: tf.max_location[0],
                y_max: tf.max_location[1],
                residual: tf.residual,
                closed_form,
            })
        })
        .collect::<Result<_>>()?;
    write_results(dir, "torsion", &rows, config.format)?;
    Ok(0)
}

fn spectra(
    config: &RunConfig,
    wb: &Workbench,
    domains: &[DomainSpec],
    fields: &[f64],
) -> Result<Vec<SpectrumRow>> {
    let jobs: Vec<(&DomainSpec, f64)> = domains
        .iter()
        .flat_map(|d| fields.iter().map(move |&b| (d, b)))
        .collect();
    let results: Vec<Vec<SpectrumRow>> = jobs
        .into_par_iter()
        .map(|(spec, field)| {
            let s: Spectrum = match config.method {
                EigMethod::Radial => match spec.kind {
                    DomainKind::Disk { area } => {
                        let mut s = disk_eigs_default(area, field, config.n)?;
                        s.domain = spec.tag();
                        s
                    }
                    _ => {
                        return Err(Error::Unsupported(format!(
                            "the radial solver needs a disk, got {spec}"
                        )))
                    }
                },
                EigMethod::Landau => {
                    (*wb.spectrum(spec, config.resolution, field, config.n, Gauge::Landau)?).clone()
                }
                EigMethod::TorsionGauge => {
                    (*wb.spectrum(spec, config.resolution, field, config.n, Gauge::Torsion)?)
                        .clone()
                }
            };
            let mut rows = SpectrumRow::from_spectrum(&s);
            rows.truncate(config.n);
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<SpectrumRow> = results.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.domain
            .cmp(&b.domain)
            .then(a.field.total_cmp(&b.field))
            .then(a.n.cmp(&b.n))
    });
    Ok(rows)
}

fn write_spectra(config: &RunConfig, rows: &[SpectrumRow], dir: &mut RunDirectory) -> Result<()> {
    write_results(dir, "spectra", rows, config.format)?;
    let decay = decay_rows(rows);
    if !decay.is_empty() {
        write_results(dir, "decay", &decay, OutputFormat::Csv)?;
        dir.write_text("decay.gp", &gnuplot_script("decay.csv", &decay))?;
    }
    Ok(())
}

fn eigs(config: &RunConfig, domains: &[DomainSpec], dir: &mut RunDirectory) -> Result<usize> {
    let wb = Workbench::new(config.resolution)?;
    let rows = spectra(config, &wb, domains, &fields_or(config, &[0.0]))?;
    write_spectra(config, &rows, dir)?;
    Ok(0)
}

fn dirac(config: &RunConfig, domains: &[DomainSpec], dir: &mut RunDirectory) -> Result<usize> {
    let fields = fields_or(config, &[0.0, 10.0, 20.0, 30.0]);
    let n = config.n.min(config.basis_degree + 1);
    let per_domain: Vec<Vec<DiracRow>> = domains
        .par_iter()
        .map(|spec| {
            let d = rasterize(spec, config.resolution)?;
            let tf = solve_torsion_fd(&d)?;
            let mut rows = Vec::new();
            for &b in &fields {
                for r in dirac_bounds(&d, &tf, b, config.basis_degree, n)? {
                    rows.push(DiracRow {
                        domain: r.domain,
                        field: r.field,
                        basis_degree: r.basis_degree,
                        n: r.n,
                        upper: r.upper,
                        lower: r.lower,
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<DiracRow> = per_domain.into_iter().flatten().collect();
    write_results(dir, "dirac_bounds", &rows, config.format)?;
    Ok(0)
}

fn asymmetry(config: &RunConfig, domains: &[DomainSpec], dir: &mut RunDirectory) -> Result<usize> {
    let rows: Vec<AsymmetryRow> = domains
        .par_iter()
        .map(|spec| {
            let d = rasterize(spec, config.resolution)?;
            let a = mask_asymmetry(&d.mask, d.area());
            Ok(AsymmetryRow {
                domain: spec.tag(),
                resolution: config.resolution,
                alpha: a.alpha,
                center_x: a.center[0],
                center_y: a.center[1],
                symmetric_difference: a.symmetric_difference,
            })
        })
        .collect::<Result<_>>()?;
    write_results(dir, "asymmetry", &rows, config.format)?;
    Ok(0)
}

fn verify(config: &RunConfig, domains: &[DomainSpec], dir: &mut RunDirectory) -> Result<usize> {
    let wb = Workbench::new(config.resolution)?;
    let domains = domains_or_default(domains);
    let fields = (!config.fields.is_empty()).then_some(config.fields.as_slice());
    let reports = acceptance_sweep(&wb, &domains, fields)?;
    dir.write_json("report.json", &reports)?;
    if config.format == OutputFormat::Csv {
        let rows: Vec<CheckRow> = reports
            .iter()
            .map(|r| CheckRow {
                name: r.name.clone(),
                status: r.status.to_string(),
                lhs: r.lhs,
                rhs: r.rhs,
                margin: r.margin,
                tolerance: r.tolerance,
                domain: r.provenance[0].domain.clone(),
                field: r.provenance[0].field,
            })
            .collect();
        write_results(dir, "checks", &rows, OutputFormat::Csv)?;
    }
    for r in &reports {
        println!(
            "{:8} {:34} margin {:+.3e} (tol {:.1e}) {}",
            r.status, r.name, r.margin, r.tolerance, r.provenance[0].domain
        );
    }
    Ok(reports
        .iter()
        .filter(|r| r.status == CheckStatus::Fail)
        .count())
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    created: u64,
    config: &'a RunConfig,
    domains: Vec<String>,
    #[serde(rename = "B")]
    fields: &'a [f64],
    files: Vec<String>,
}

fn sweep(config: &RunConfig, domains: &[DomainSpec], dir: &mut RunDirectory) -> Result<usize> {
    let wb = Workbench::new(config.resolution)?;
    let domains = domains_or_default(domains);
    let fields = fields_or(
        config,
        &[0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0],
    );
    let rows = spectra(config, &wb, &domains, &fields)?;
    write_spectra(config, &rows, dir)?;
    let files = dir
        .files
        .iter()
        .filter_map(|p| p.file_name())
        .map(|f| f.to_string_lossy().into_owned())
        .collect();
    let manifest = Manifest {
        command: config.command.name(),
        created: dir.stamp,
        config,
        domains: domains.iter().map(DomainSpec::tag).collect(),
        fields: &fields,
        files,
    };
    let stamp = dir.stamp;
    dir.write_json(&format!("manifest-{stamp}.json"), &manifest)?;
    Ok(0)
}
