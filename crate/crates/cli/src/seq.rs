use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use nature_seqkit::bioseq::{
    link_dna_protein, parse_fasta, reverse_complement, transcribe, translate, validate_crrna,
    CrRnaVerdict, LinkedRecord,
};
use nature_seqkit::tok::detokenize;
use nature_seqkit::{NucleotideSeq, SeqKind, Strand};
use serde::{Deserialize, Serialize};

use crate::{io, Outcome};

#[derive(Debug, Subcommand)]
pub enum DnaCommand {
    /// Reverse complement.
    Revcomp(SeqArgs),
    /// DNA to RNA.
    Transcribe(SeqArgs),
    /// Translate with the standard code.
    Translate {
        #[command(flatten)]
        seq: SeqArgs,
        /// Reading frame offset: 0, 1 or 2.
        #[arg(long, default_value_t = 0)]
        frame: usize,
    },
    /// Check crRNA guides against targets.
    Crrna(CrrnaArgs),
    /// Replace a coding region with its protein, emitting tagged text.
    Link(LinkArgs),
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    /// One sequence per line, or FASTA; standard input if absent.
    pub input: Option<PathBuf>,
    /// Input is RNA.
    #[arg(long)]
    pub rna: bool,
}

#[derive(Debug, Args)]
pub struct CrrnaArgs {
    /// JSON lines with `target` and `guide`; ignored with --target.
    pub input: Option<PathBuf>,
    #[arg(long, requires = "guide")]
    pub target: Option<String>,
    #[arg(long, requires = "target")]
    pub guide: Option<String>,
    /// Exit with status 1 if any guide is invalid.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    /// One DNA sequence per line, or FASTA.
    pub input: Option<PathBuf>,
    /// Start of the coding region, 0-based.
    #[arg(long)]
    pub start: usize,
    /// End of the coding region, exclusive.
    #[arg(long)]
    pub end: usize,
    #[arg(long, default_value = "+")]
    pub strand: Strand,
}

/// Input sequences with optional FASTA headers.
fn sequences(input: &Option<PathBuf>) -> Result<Vec<(Option<String>, String)>> {
    let text = io::read_all(input.as_deref())?;
    if text.trim_start().starts_with('>') {
        Ok(parse_fasta(&text)?
            .into_iter()
            .map(|r| (Some(r.header), r.sequence))
            .collect())
    } else {
        Ok(text
            .lines()
            .map(|l| l.trim())
            .filter(|l| !l.is_empty())
            .map(|l| (None, l.to_string()))
            .collect())
    }
}

fn emit<W: Write>(w: &mut W, header: &Option<String>, body: &str) -> Result<()> {
    if let Some(h) = header {
        writeln!(w, ">{h}")?;
    }
    writeln!(w, "{body}")?;
    Ok(())
}

fn kind(rna: bool) -> SeqKind {
    if rna {
        SeqKind::Rna
    } else {
        SeqKind::Dna
    }
}

#[derive(Debug, Deserialize)]
struct CrrnaInput {
    target: String,
    guide: String,
}

fn check_guide(target: &str, guide: &str) -> Result<CrRnaVerdict> {
    let t = NucleotideSeq::dna(target).context("target")?;
    let kind = if guide.contains(['U', 'u']) {
        SeqKind::Rna
    } else {
        SeqKind::Dna
    };
    let g = NucleotideSeq::new(guide, kind).context("guide")?;
    Ok(validate_crrna(&t, &g)?)
}

#[derive(Debug, Serialize)]
pub struct LinkLine {
    #[serde(flatten)]
    pub record: LinkedRecord,
    pub tagged: String,
}

pub fn run(c: DnaCommand) -> Result<Outcome> {
    let mut out = io::stdout();
    let mut outcome = Outcome::Ok;
    match c {
        DnaCommand::Revcomp(a) => {
            for (h, s) in sequences(&a.input)? {
                let n = NucleotideSeq::new(&s, kind(a.rna))?;
                emit(&mut out, &h, reverse_complement(&n).as_str())?;
            }
        }
        DnaCommand::Transcribe(a) => {
            for (h, s) in sequences(&a.input)? {
                let n = NucleotideSeq::new(&s, kind(a.rna))?;
                emit(&mut out, &h, transcribe(&n)?.as_str())?;
            }
        }
        DnaCommand::Translate { seq, frame } => {
            for (h, s) in sequences(&seq.input)? {
                let n = NucleotideSeq::new(&s, kind(seq.rna))?;
                emit(&mut out, &h, &translate(&n, frame)?)?;
            }
        }
        DnaCommand::Crrna(a) => {
            let pairs = match (a.target, a.guide) {
                (Some(target), Some(guide)) => vec![CrrnaInput { target, guide }],
                _ => io::json_records(a.input.as_deref())?,
            };
            for (i, p) in pairs.iter().enumerate() {
                let v = check_guide(&p.target, &p.guide)
                    .with_context(|| format!("record {}", i + 1))?;
                if !v.valid && a.strict {
                    outcome = Outcome::Invalid;
                }
                io::write_json(&mut out, &v)?;
            }
        }
        DnaCommand::Link(a) => {
            for (h, s) in sequences(&a.input)? {
                let n = NucleotideSeq::dna(&s)?;
                let record = link_dna_protein(&n, a.start, a.end, a.strand)
                    .with_context(|| h.clone().unwrap_or_else(|| s.clone()))?;
                let tagged = detokenize(&record.to_tagged())?;
                io::write_json(&mut out, &LinkLine { record, tagged })?;
            }
        }
    }
    out.flush()?;
    Ok(outcome)
}
