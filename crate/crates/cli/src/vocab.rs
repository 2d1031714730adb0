use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use nature_seqkit::vocab::{
    build_vocab, byte_base_tokens, default_vocab, standard_alphabets, AlphabetTargets,
    FreezePartition,
};
use nature_seqkit::{Domain, Vocabulary};
use serde::Serialize;

use crate::{io, Outcome};

#[derive(Debug, Subcommand)]
pub enum VocabCommand {
    /// Build a vocabulary and write it in the vocabulary file format.
    Build(BuildArgs),
    /// Summarize a vocabulary file as JSON.
    Inspect {
        /// Vocabulary file; the built-in vocabulary if absent.
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Base text tokens, one per line; byte-level base if absent.
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Output file; standard output if absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = AlphabetTargets::default().mol)]
    pub mol: usize,
    #[arg(long, default_value_t = AlphabetTargets::default().protein)]
    pub protein: usize,
    #[arg(long, default_value_t = AlphabetTargets::default().material)]
    pub material: usize,
    #[arg(long, default_value_t = AlphabetTargets::default().dna)]
    pub dna: usize,
    #[arg(long, default_value_t = AlphabetTargets::default().rna)]
    pub rna: usize,
}

/// The vocabulary in `path`, or the built-in one.
pub fn load(path: Option<&Path>) -> Result<Vocabulary> {
    match path {
        None => Ok(default_vocab()),
        Some(p) => {
            let f = File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
            Vocabulary::load(BufReader::new(f)).with_context(|| format!("reading {}", p.display()))
        }
    }
}

#[derive(Serialize)]
pub struct Summary {
    pub size: usize,
    pub base_size: usize,
    pub domain_counts: BTreeMap<Domain, usize>,
    pub freeze: FreezePartition,
}

pub fn summary(v: &Vocabulary) -> Summary {
    Summary {
        size: v.len(),
        base_size: v.base_size(),
        domain_counts: v.domain_counts().clone(),
        freeze: v.freeze_partition(),
    }
}

pub fn run(c: VocabCommand) -> Result<Outcome> {
    match c {
        VocabCommand::Build(a) => {
            let base = match &a.base {
                None => byte_base_tokens(),
                Some(p) => io::read_all(Some(p))?
                    .lines()
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect(),
            };
            let targets = AlphabetTargets {
                mol: a.mol,
                protein: a.protein,
                material: a.material,
                dna: a.dna,
                rna: a.rna,
            };
            let v = build_vocab(&base, &standard_alphabets(&targets)?)?;
            match &a.out {
                Some(p) => {
                    let mut w = io::create(p)?;
                    v.save(&mut w)?;
                    w.flush()?;
                }
                None => {
                    let mut w = io::stdout();
                    v.save(&mut w)?;
                    w.flush()?;
                }
            }
        }
        VocabCommand::Inspect { file } => {
            let v = load(file.as_deref())?;
            let mut w = io::stdout();
            io::write_json(&mut w, &summary(&v))?;
            w.flush()?;
        }
    }
    Ok(Outcome::Ok)
}
