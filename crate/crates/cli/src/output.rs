//! Result emission.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use credpool::theoremlab::CertificationReport;
use serde::Serialize;

use crate::input::ProfileFile;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn csv_bytes(f: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    f(&mut w).map_err(|e| CliError::Output(e.to_string()))?;
    w.into_inner().map_err(|e| CliError::Output(e.to_string()))
}

/// One row per agent: name, weight, then one column per proposition.
pub fn render_profile(file: &ProfileFile, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => json(file),
        Format::Csv => csv_bytes(|w| {
            let mut header = vec!["name".to_string(), "weight".to_string()];
            header.extend(file.agenda.propositions.iter().map(|p| p.name.clone()));
            w.write_record(&header)?;
            for a in &file.agents {
                let mut row = vec![a.name.clone(), a.weight.to_string()];
                row.extend(a.credences.iter().map(f64::to_string));
                w.write_record(&row)?;
            }
            Ok(())
        }),
    }
}

/// One row per check.
pub fn render_report(report: &CertificationReport, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => json(report),
        Format::Csv => csv_bytes(|w| {
            w.write_record(["claim", "check", "expect", "tolerance", "value", "cases", "excluded", "pass"])?;
            for claim in &report.claims {
                for c in &claim.checks {
                    let expect = match c.expect {
                        credpool::theoremlab::Expect::AtMost => "at_most",
                        credpool::theoremlab::Expect::Above => "above",
                    };
                    w.write_record([
                        claim.id.clone(),
                        c.label.clone(),
                        expect.to_string(),
                        c.tolerance.to_string(),
                        c.value.to_string(),
                        c.cases.to_string(),
                        c.excluded.to_string(),
                        c.pass.to_string(),
                    ])?;
                }
            }
            Ok(())
        }),
    }
}

pub fn write(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().lock().write_all(bytes).map_err(|e| CliError::Output(e.to_string())),
    }
}
