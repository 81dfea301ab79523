//! Report and snapshot files: `report.csv`, `summary.txt`, residual tables
//! and field dumps.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use velgauge::fields::FieldConfiguration;
use velgauge::noether::{current_j1, current_j2, strength_f2};
use velgauge::report::SuiteReport;

use crate::error::CliError;

/// Write `report.csv` and `summary.txt` into `outdir`; returns their paths.
pub fn write_report(
    outdir: &Path,
    report: &SuiteReport,
    header: &str,
) -> Result<(PathBuf, PathBuf), CliError> {
    fs::create_dir_all(outdir)?;
    let csv_path = outdir.join("report.csv");
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    fs::write(&csv_path, csv)?;

    let summary_path = outdir.join("summary.txt");
    let mut summary = Vec::new();
    report.write_summary(&mut summary, header)?;
    fs::write(&summary_path, summary)?;
    Ok((csv_path, summary_path))
}

/// Dump the main derived fields of a configuration as CSV snapshots.
pub fn dump_fields(outdir: &Path, cfg: &FieldConfiguration<f64>) -> Result<(), CliError> {
    fs::create_dir_all(outdir)?;
    let write = |name: &str, field: &velgauge::lattice::LatticeField<f64>| -> Result<(), CliError> {
        let mut buf = Vec::new();
        field.write_csv(&mut buf)?;
        fs::write(outdir.join(name), buf)?;
        Ok(())
    };
    write("matter.csv", cfg.matter().samples())?;
    write("gauge.csv", cfg.gauge().samples())?;
    write("lambda.csv", cfg.lambda().field())?;
    write("connection.csv", cfg.connection())?;
    let f2 = strength_f2(cfg).map_err(CliError::from)?;
    write("f2.csv", f2.field())?;
    let j1 = current_j1(cfg).map_err(CliError::from)?;
    write("j1.csv", j1.eq9.field())?;
    let j2 = current_j2(cfg).map_err(CliError::from)?;
    write("j2.csv", j2.canonical.field())?;
    Ok(())
}

/// Render the report header recorded atop `summary.txt`.
#[allow(clippy::too_many_arguments)]
pub fn summary_header(command: &str, algebra: &str, extents: [usize; 4], spacing: f64, coupling: f64, mass: f64, epsilon: f64, seed: u64) -> String {
    format!(
        "velgauge {command} — algebra {algebra}, lattice {}x{}x{}x{} h={spacing}, g={coupling}, m={mass}, eps={epsilon}, seed={seed}",
        extents[0], extents[1], extents[2], extents[3]
    )
}

/// Write a plain text file.
pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
