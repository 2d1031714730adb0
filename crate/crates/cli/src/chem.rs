use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use nature_seqkit::metrics::{validity_uniqueness, GenerationReport, UniquenessKey, REPORT_SCHEMA};
use nature_seqkit::molgraph::{
    canonical_form, descriptors as describe, parse_smiles, Descriptors, Failure,
};
use nature_seqkit::ValidityReport;
use serde::Serialize;

use crate::{io, Outcome};

#[derive(Debug, Args)]
pub struct InputArg {
    /// Input file, one SMILES per line; standard input if absent.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub input: Option<PathBuf>,
    /// Exit with status 1 if any SMILES is invalid.
    #[arg(long)]
    pub strict: bool,
    /// Count uniqueness over input strings instead of canonical forms.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Serialize)]
pub struct InvalidLine {
    pub line: usize,
    pub smiles: String,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Serialize)]
pub struct ValidationSummary {
    pub schema: u32,
    #[serde(flatten)]
    pub report: GenerationReport,
    pub invalid: Vec<InvalidLine>,
}

pub fn validate(a: ValidateArgs) -> Result<Outcome> {
    let mut smiles = Vec::new();
    let mut invalid = Vec::new();
    for r in io::records(a.input.as_deref())? {
        let (n, line) = r?;
        let s = line.trim().to_string();
        let v = ValidityReport::of_smiles(&s);
        if !v.valid {
            invalid.push(InvalidLine {
                line: n,
                smiles: s.clone(),
                failures: v.failures,
            });
        }
        smiles.push(s);
    }
    let key = if a.raw {
        UniquenessKey::Raw
    } else {
        UniquenessKey::Canonical
    };
    let report = if smiles.is_empty() {
        GenerationReport::from_counts(0, 0, 0)
    } else {
        validity_uniqueness(&smiles, key)?
    };
    let failed = !invalid.is_empty();
    let mut out = io::stdout();
    io::write_json(
        &mut out,
        &ValidationSummary {
            schema: REPORT_SCHEMA,
            report,
            invalid,
        },
    )?;
    out.flush()?;
    Ok(if a.strict && failed {
        Outcome::Invalid
    } else {
        Outcome::Ok
    })
}

/// One output line per input line; lines that do not parse print empty
/// and are reported on standard error.
pub fn canon(a: InputArg) -> Result<Outcome> {
    let mut out = io::stdout();
    let mut outcome = Outcome::Ok;
    for r in io::lines(a.input.as_deref())? {
        let (n, line) = r?;
        match parse_smiles(line.trim()) {
            Ok(g) => writeln!(out, "{}", canonical_form(&g))?,
            Err(e) => {
                eprintln!("line {n}: {e}");
                writeln!(out)?;
                outcome = Outcome::Invalid;
            }
        }
    }
    out.flush()?;
    Ok(outcome)
}

#[derive(Debug, Serialize)]
pub struct DescriptorLine {
    pub smiles: String,
    #[serde(flatten)]
    pub descriptors: Descriptors,
}

pub fn descriptors(a: InputArg) -> Result<Outcome> {
    let mut out = io::stdout();
    let mut outcome = Outcome::Ok;
    for r in io::records(a.input.as_deref())? {
        let (n, line) = r?;
        let s = line.trim();
        match parse_smiles(s) {
            Ok(g) => io::write_json(
                &mut out,
                &DescriptorLine {
                    smiles: s.to_string(),
                    descriptors: describe(&g),
                },
            )?,
            Err(e) => {
                eprintln!("line {n}: {e}");
                outcome = Outcome::Invalid;
            }
        }
    }
    out.flush()?;
    Ok(outcome)
}
