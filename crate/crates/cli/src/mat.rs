use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Subcommand;
use nature_seqkit::matcodec::{
    decode_composition, decode_structure, encode_composition, encode_structure, parse_poscar,
    smact_valid, SmactVerdict,
};
use nature_seqkit::{Composition, CrystalStructure, SpecialToken, Tables};
use serde::{Deserialize, Serialize};

use crate::{io, Outcome};

pub const TABLES_ENV: &str = "NATURE_SEQKIT_TABLES";

#[derive(Debug, Subcommand)]
pub enum MatCommand {
    /// Encode JSON structures or {"formula", "space_group"} records as
    /// token lines.
    Encode { input: Option<PathBuf> },
    /// Decode token lines to JSON.
    Decode { input: Option<PathBuf> },
    /// Read a Direct-mode POSCAR and print the structure as JSON.
    Poscar {
        /// POSCAR file, or `-` for standard input.
        file: PathBuf,
        /// Space group number; POSCAR files carry none.
        #[arg(long)]
        sg: u32,
    },
    /// Oxidation-state screening of formulas, one per line.
    Smact {
        input: Option<PathBuf>,
        /// Directory with oxidation_states.tsv and electronegativity.tsv.
        #[arg(long, env = TABLES_ENV)]
        tables: Option<PathBuf>,
        /// Exit with status 1 if any formula fails.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FormulaRecord {
    pub formula: String,
    pub space_group: u32,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum EncodeInput {
    Structure(CrystalStructure),
    Formula(FormulaRecord),
}

#[derive(Debug, Serialize)]
pub struct SmactLine {
    pub formula: String,
    #[serde(flatten)]
    pub verdict: SmactVerdict,
}

/// Re-checks a deserialized structure's invariants.
fn checked(s: CrystalStructure) -> Result<CrystalStructure> {
    Ok(CrystalStructure::new(
        s.composition().clone(),
        s.space_group() as u32,
        *s.lattice(),
        s.frac_coords().to_vec(),
    )?)
}

pub fn encode_line(line: &str) -> Result<Vec<String>> {
    match serde_json::from_str::<EncodeInput>(line)
        .context("expected a structure or formula record")?
    {
        EncodeInput::Structure(s) => Ok(encode_structure(&checked(s)?)),
        EncodeInput::Formula(f) => {
            let c = Composition::parse_formula(&f.formula)?;
            Ok(encode_composition(&c, f.space_group)?)
        }
    }
}

pub fn run(c: MatCommand) -> Result<Outcome> {
    let mut out = io::stdout();
    let mut outcome = Outcome::Ok;
    match c {
        MatCommand::Encode { input } => {
            for r in io::records(input.as_deref())? {
                let (n, line) = r?;
                let tokens = encode_line(&line).with_context(|| format!("line {n}"))?;
                writeln!(out, "{}", tokens.join(" "))?;
            }
        }
        MatCommand::Decode { input } => {
            let coord = SpecialToken::Coord.render();
            for r in io::records(input.as_deref())? {
                let (n, line) = r?;
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.contains(&coord.as_str()) {
                    let s = decode_structure(&tokens).with_context(|| format!("line {n}"))?;
                    io::write_json(&mut out, &s)?;
                } else {
                    let (c, sg) =
                        decode_composition(&tokens).with_context(|| format!("line {n}"))?;
                    io::write_json(
                        &mut out,
                        &FormulaRecord {
                            formula: c.to_string(),
                            space_group: sg as u32,
                        },
                    )?;
                }
            }
        }
        MatCommand::Poscar { file, sg } => {
            let text = io::read_all(Some(&file))?;
            let p = parse_poscar(&text, sg).with_context(|| file.display().to_string())?;
            io::write_json(&mut out, &p.structure)?;
        }
        MatCommand::Smact {
            input,
            tables,
            strict,
        } => {
            let t = match &tables {
                Some(dir) => {
                    Tables::from_dir(dir).with_context(|| format!("tables in {}", dir.display()))?
                }
                None => Tables::embedded(),
            };
            for r in io::records(input.as_deref())? {
                let (n, line) = r?;
                let formula = line.trim().to_string();
                let c =
                    Composition::parse_formula(&formula).with_context(|| format!("line {n}"))?;
                let verdict = smact_valid(&c, &t).with_context(|| format!("line {n}"))?;
                if strict && !verdict.valid {
                    outcome = Outcome::Invalid;
                }
                io::write_json(&mut out, &SmactLine { formula, verdict })?;
            }
        }
    }
    out.flush()?;
    Ok(outcome)
}
