use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use nature_seqkit::tok::{decode, detokenize as detok, encode};
use nature_seqkit::{Entity, TaggedSequence, Token, Tokenizer};

use crate::{io, vocab, Outcome};

#[derive(Debug, Args)]
pub struct TokenizeArgs {
    /// Input file, one record per line; standard input if absent.
    pub input: Option<PathBuf>,
    /// Treat each line as the payload of this entity (mol, protein, dna,
    /// rna, material, ...) instead of tagged text.
    #[arg(long)]
    pub entity: Option<Entity>,
    /// Print vocabulary ids instead of tokens.
    #[arg(long)]
    pub ids: bool,
    /// Print token strings only, without domains.
    #[arg(long, conflicts_with = "ids")]
    pub strings: bool,
    /// Vocabulary file; the built-in vocabulary if absent.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetokenizeArgs {
    /// Input file of JSON token arrays, one per line.
    pub input: Option<PathBuf>,
    /// Lines are id arrays rather than token objects.
    #[arg(long)]
    pub ids: bool,
    #[arg(long)]
    pub vocab: Option<PathBuf>,
}

pub fn tokenize(a: TokenizeArgs) -> Result<Outcome> {
    let v = vocab::load(a.vocab.as_deref())?;
    let tk = Tokenizer::new(&v);
    let mut out = io::stdout();
    for r in io::lines(a.input.as_deref())? {
        let (n, line) = r?;
        let ts = match a.entity {
            Some(e) => tk.entity(e, &line),
            None => tk.tokenize_tagged(&line),
        }
        .with_context(|| format!("line {n}"))?;
        if a.ids {
            io::write_json(
                &mut out,
                &encode(&v, &ts).with_context(|| format!("line {n}"))?,
            )?;
        } else if a.strings {
            io::write_json(&mut out, &ts.strings())?;
        } else {
            io::write_json(&mut out, &ts.tokens())?;
        }
    }
    out.flush()?;
    Ok(Outcome::Ok)
}

pub fn detokenize(a: DetokenizeArgs) -> Result<Outcome> {
    let v = vocab::load(a.vocab.as_deref())?;
    let mut out = io::stdout();
    for r in io::records(a.input.as_deref())? {
        let (n, line) = r?;
        let ts = if a.ids {
            let ids: Vec<u32> = serde_json::from_str(&line).with_context(|| format!("line {n}"))?;
            decode(&v, &ids).with_context(|| format!("line {n}"))?
        } else {
            let tokens: Vec<Token> =
                serde_json::from_str(&line).with_context(|| format!("line {n}"))?;
            TaggedSequence::from_tokens(tokens).with_context(|| format!("line {n}"))?
        };
        writeln!(out, "{}", detok(&ts).with_context(|| format!("line {n}"))?)?;
    }
    out.flush()?;
    Ok(Outcome::Ok)
}
