use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use nature_seqkit::corpus::{
    build_interleaved, interleave_text, map_sharded, pack_posttrain, pack_pretrain,
    render_instruction, write_packed, InterleavedRecord,
};
use nature_seqkit::tok::encode;
use nature_seqkit::{InstructionRecord, PreferenceRecord, SpecialToken, Tokenizer, Vocabulary};
use serde::{Deserialize, Serialize};

use crate::{io, vocab, Outcome};

/// Lines processed per parallel batch.
const BATCH: usize = 8192;

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Insert wrapped entities after their mentions.
    Interleave {
        #[command(flatten)]
        common: Common,
        /// Print token arrays instead of text.
        #[arg(long)]
        tokens: bool,
    },
    /// Render instruction records with their loss masks.
    Render {
        #[command(flatten)]
        common: Common,
    },
    /// Pack documents or instruction records into fixed-length rows.
    Pack(PackArgs),
    /// Validate preference records and re-emit them.
    Prefs { input: Option<PathBuf> },
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON lines input; standard input if absent.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    /// Number of parallel shards; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PackMode {
    /// `{"text": …}` documents, greedily concatenated.
    Pretrain,
    /// Instruction records, one per row.
    Posttrain,
}

#[derive(Debug, Args)]
pub struct PackArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub mode: PackMode,
    /// Row length in tokens.
    #[arg(long, default_value_t = 8192)]
    pub length: usize,
    /// Output prefix; writes PREFIX.bin and PREFIX.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct RenderLine {
    pub text: String,
    pub tokens: Vec<String>,
    pub ids: Vec<u32>,
    pub mask: Vec<u8>,
}

#[derive(Debug, Deserialize)]
struct Document {
    text: String,
}

#[derive(Debug, Serialize)]
struct PackSummary {
    rows: usize,
    row_length: usize,
    tokens: usize,
    bin: String,
    manifest: String,
}

/// Parses and maps non-blank JSON lines in batches, writing results in
/// input order.
fn batched<T, R, F, W>(
    common: &Common,
    out: &mut W,
    f: F,
    mut emit: impl FnMut(&mut W, R) -> Result<()>,
) -> Result<()>
where
    T: for<'de> Deserialize<'de> + Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync,
{
    let mut lines = io::records(common.input.as_deref())?;
    loop {
        let mut batch = Vec::with_capacity(BATCH);
        for r in lines.by_ref().take(BATCH) {
            let (n, l) = r?;
            let rec: T =
                serde_json::from_str(&l).with_context(|| format!("line {n}: invalid record"))?;
            batch.push((n, rec));
        }
        if batch.is_empty() {
            return Ok(());
        }
        let results = map_sharded(&batch, common.shards, |(n, rec)| {
            f(rec).with_context(|| format!("line {n}"))
        })?;
        for r in results {
            emit(out, r)?;
        }
    }
}

fn suffixed(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn render_line(tk: &Tokenizer, v: &Vocabulary, r: &InstructionRecord) -> Result<RenderLine> {
    let rendered = render_instruction(tk, r)?;
    Ok(RenderLine {
        ids: encode(v, &rendered.tokens)?,
        tokens: rendered
            .tokens
            .strings()
            .into_iter()
            .map(String::from)
            .collect(),
        mask: rendered.mask.iter().map(|m| u8::from(*m)).collect(),
        text: rendered.text,
    })
}

pub fn run(c: CorpusCommand) -> Result<Outcome> {
    let mut out = io::stdout();
    match c {
        CorpusCommand::Interleave { common, tokens } => {
            let v = vocab::load(common.vocab.as_deref())?;
            let tk = Tokenizer::new(&v);
            batched(
                &common,
                &mut out,
                |r: &InterleavedRecord| -> Result<String> {
                    if tokens {
                        let ts = build_interleaved(&tk, &r.text, &r.spans)?;
                        Ok(serde_json::to_string(ts.tokens())?)
                    } else {
                        #[derive(Serialize)]
                        struct Line {
                            text: String,
                        }
                        let text = interleave_text(&r.text, &r.spans)?;
                        Ok(serde_json::to_string(&Line { text })?)
                    }
                },
                |w, line| Ok(writeln!(w, "{line}")?),
            )?;
        }
        CorpusCommand::Render { common } => {
            let v = vocab::load(common.vocab.as_deref())?;
            let tk = Tokenizer::new(&v);
            batched(
                &common,
                &mut out,
                |r: &InstructionRecord| render_line(&tk, &v, r),
                |w, line| io::write_json(w, &line),
            )?;
        }
        CorpusCommand::Pack(a) => {
            let v = vocab::load(a.common.vocab.as_deref())?;
            let tk = Tokenizer::new(&v);
            let pad = v
                .special_id(SpecialToken::Pad)
                .ok_or_else(|| anyhow!("vocabulary has no <pad> token"))?;
            let rows = match a.mode {
                PackMode::Pretrain => {
                    let mut docs = Vec::new();
                    batched(
                        &a.common,
                        &mut docs,
                        |d: &Document| Ok(encode(&v, &tk.tokenize_tagged(&d.text)?)?),
                        |docs, ids| {
                            docs.push(ids);
                            Ok(())
                        },
                    )?;
                    pack_pretrain(&docs, a.length, pad)?
                }
                PackMode::Posttrain => {
                    let mut recs = Vec::new();
                    batched(
                        &a.common,
                        &mut recs,
                        |r: &InstructionRecord| {
                            let rendered = render_instruction(&tk, r)?;
                            Ok((encode(&v, &rendered.tokens)?, rendered.mask))
                        },
                        |recs, rec| {
                            recs.push(rec);
                            Ok(())
                        },
                    )?;
                    pack_posttrain(&recs, a.length, pad)?
                }
            };
            let bin = suffixed(&a.out, "bin");
            let manifest_path = suffixed(&a.out, "json");
            let mut w = io::create(&bin)?;
            let manifest = write_packed(&mut w, &rows, a.length, pad)?;
            w.flush()?;
            let mut m = io::create(&manifest_path)?;
            serde_json::to_writer_pretty(&mut m, &manifest)?;
            m.write_all(b"\n")?;
            m.flush()?;
            io::write_json(
                &mut out,
                &PackSummary {
                    rows: rows.len(),
                    row_length: a.length,
                    tokens: rows.iter().map(|r| r.occupied()).sum(),
                    bin: bin.display().to_string(),
                    manifest: manifest_path.display().to_string(),
                },
            )?;
        }
        CorpusCommand::Prefs { input } => {
            let mut outcome = Outcome::Ok;
            for r in io::records(input.as_deref())? {
                let (n, l) = r?;
                let p: PreferenceRecord = serde_json::from_str(&l)
                    .with_context(|| format!("line {n}: invalid record"))?;
                match p.check() {
                    Ok(()) => writeln!(out, "{}", p.to_json_line())?,
                    Err(e) => {
                        eprintln!("line {n}: {e}");
                        outcome = Outcome::Invalid;
                    }
                }
            }
            out.flush()?;
            return Ok(outcome);
        }
    }
    out.flush()?;
    Ok(Outcome::Ok)
}
