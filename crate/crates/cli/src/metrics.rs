use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use nature_seqkit::bioseq::parse_fasta;
use nature_seqkit::matcodec::{composition_precision, decode_composition, material_key};
use nature_seqkit::metrics::{
    aar, identity_cluster_diversity, novelty, property_correct_ratio, spearman, stability_rate,
    success_within, topk_reactant_accuracy, valid_canonical, validity_uniqueness, IdentityMode,
    Property, UniquenessKey, DEFAULT_IDENTITY_THRESHOLD, REPORT_SCHEMA, STABILITY_THRESHOLD,
    SUCCESS_REL_TOL,
};
use nature_seqkit::{Composition, GenerationReport};
use serde::{Deserialize, Serialize};

use crate::{io, Outcome};

#[derive(Debug, Subcommand)]
pub enum MetricsCommand {
    /// Validity and uniqueness of generated SMILES, one per line.
    Validity {
        input: Option<PathBuf>,
        /// Count uniqueness over input strings instead of canonical forms.
        #[arg(long)]
        raw: bool,
    },
    /// Mean amino-acid recovery over `{"reference", "generated"}` lines.
    Aar { input: Option<PathBuf> },
    /// Spearman correlation over `{"x", "y"}` lines.
    Spearman { input: Option<PathBuf> },
    /// Top-k reactant-set accuracy over `{"reference", "candidates"}` lines.
    Topk {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Share of distinct generated items absent from a reference set.
    Novelty(NoveltyArgs),
    /// Identity-cluster count over sequence count, for lines or FASTA.
    Diversity {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_IDENTITY_THRESHOLD)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = IdentityArg::AlignmentLength)]
        identity: IdentityArg,
    },
    /// Share of energies above hull (eV/atom, one per line) below a threshold.
    Stability {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = STABILITY_THRESHOLD)]
        threshold: f64,
    },
    /// Share of `{"value", "target"}` lines within a relative tolerance.
    Success {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = SUCCESS_REL_TOL)]
        rel_tol: f64,
    },
    /// Share of `{"value", "target"}` lines within a property's tolerance.
    Property {
        input: Option<PathBuf>,
        /// hba, hbd, rotbonds, qed, fsp3 or tpsa.
        #[arg(long, value_parser = parse_property)]
        property: Property,
        /// Overrides the property's default tolerance.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Element precision over `{"prompt": [...], "generated": "formula"}` lines.
    Precision { input: Option<PathBuf> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    AlignmentLength,
    MinLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KeyKind {
    /// Lines compared as given.
    Raw,
    /// Canonical SMILES; invalid lines are dropped.
    Smiles,
    /// Composition and space group, as tokens or `Formula N`.
    Material,
}

#[derive(Debug, Args)]
pub struct NoveltyArgs {
    pub input: Option<PathBuf>,
    /// Reference items, one per line.
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long, value_enum, default_value_t = KeyKind::Raw)]
    pub kind: KeyKind,
}

fn parse_property(s: &str) -> Result<Property, String> {
    Property::from_name(s).ok_or_else(|| format!("unknown property {s:?}"))
}

#[derive(Debug, Serialize)]
pub struct MetricReport {
    pub schema: u32,
    pub metric: &'static str,
    pub count: usize,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct ValidityLine {
    pub schema: u32,
    pub metric: &'static str,
    #[serde(flatten)]
    pub report: GenerationReport,
}

#[derive(Deserialize)]
struct AarRecord {
    reference: String,
    generated: String,
}

#[derive(Deserialize)]
struct Pair {
    x: f64,
    y: f64,
}

#[derive(Deserialize)]
struct TopkRecord {
    reference: String,
    candidates: Vec<String>,
}

#[derive(Deserialize)]
struct Target {
    value: f64,
    target: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Elements {
    Formula(String),
    Set(BTreeSet<String>),
}

#[derive(Deserialize)]
struct PrecisionRecord {
    prompt: BTreeSet<String>,
    generated: Elements,
}

/// Normalized key for novelty, or `None` for an unusable item.
pub fn item_key(kind: KeyKind, line: &str) -> Result<Option<String>> {
    let line = line.trim();
    Ok(match kind {
        KeyKind::Raw => Some(line.to_string()),
        KeyKind::Smiles => valid_canonical(line),
        KeyKind::Material => {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if line.contains('<') {
                let (c, sg) = decode_composition(&tokens)?;
                Some(material_key(&c, sg))
            } else {
                let [formula, sg] = tokens[..] else {
                    bail!("expected `Formula N`, found {line:?}");
                };
                let sg: u8 = sg
                    .parse()
                    .with_context(|| format!("bad space group {sg:?}"))?;
                Some(material_key(&Composition::parse_formula(formula)?, sg))
            }
        }
    })
}

fn keys(kind: KeyKind, input: Option<&std::path::Path>) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for r in io::records(input)? {
        let (n, l) = r?;
        if let Some(k) = item_key(kind, &l).with_context(|| format!("line {n}"))? {
            out.push(k);
        }
    }
    Ok(out)
}

fn numbers(input: Option<&std::path::Path>) -> Result<Vec<f64>> {
    io::records(input)?
        .map(|r| {
            let (n, l) = r?;
            l.trim()
                .parse::<f64>()
                .with_context(|| format!("line {n}: not a number"))
        })
        .collect()
}

fn report(metric: &'static str, count: usize, value: f64) -> MetricReport {
    MetricReport {
        schema: REPORT_SCHEMA,
        metric,
        count,
        value,
    }
}

/// The JSON report line for a metrics command.
pub fn compute(c: MetricsCommand) -> Result<String> {
    let r = match c {
        MetricsCommand::Validity { input, raw } => {
            let smiles: Vec<String> = io::records(input.as_deref())?
                .map(|r| r.map(|(_, l)| l.trim().to_string()))
                .collect::<Result<_>>()?;
            let key = if raw {
                UniquenessKey::Raw
            } else {
                UniquenessKey::Canonical
            };
            return Ok(serde_json::to_string(&ValidityLine {
                schema: REPORT_SCHEMA,
                metric: "validity",
                report: validity_uniqueness(&smiles, key)?,
            })?);
        }
        MetricsCommand::Aar { input } => {
            let recs: Vec<AarRecord> = io::json_records(input.as_deref())?;
            if recs.is_empty() {
                bail!("no records");
            }
            let mut total = 0.0;
            for (i, r) in recs.iter().enumerate() {
                total +=
                    aar(&r.reference, &r.generated).with_context(|| format!("record {}", i + 1))?;
            }
            report("aar", recs.len(), total / recs.len() as f64)
        }
        MetricsCommand::Spearman { input } => {
            let pairs: Vec<Pair> = io::json_records(input.as_deref())?;
            let xs: Vec<f64> = pairs.iter().map(|p| p.x).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.y).collect();
            report("spearman", pairs.len(), spearman(&xs, &ys)?)
        }
        MetricsCommand::Topk { input, k } => {
            let recs: Vec<TopkRecord> = io::json_records(input.as_deref())?;
            let refs: Vec<&str> = recs.iter().map(|r| r.reference.as_str()).collect();
            let cands: Vec<Vec<&str>> = recs
                .iter()
                .map(|r| r.candidates.iter().map(String::as_str).collect())
                .collect();
            report(
                "topk",
                recs.len(),
                topk_reactant_accuracy(&refs, &cands, k)?,
            )
        }
        MetricsCommand::Novelty(a) => {
            let generated = keys(a.kind, a.input.as_deref())?;
            let reference: HashSet<String> =
                keys(a.kind, Some(&a.reference))?.into_iter().collect();
            report("novelty", generated.len(), novelty(&generated, &reference)?)
        }
        MetricsCommand::Diversity {
            input,
            threshold,
            identity,
        } => {
            let text = io::read_all(input.as_deref())?;
            let seqs: Vec<String> = if text.trim_start().starts_with('>') {
                parse_fasta(&text)?
                    .into_iter()
                    .map(|r| r.sequence)
                    .collect()
            } else {
                text.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect()
            };
            let mode = match identity {
                IdentityArg::AlignmentLength => IdentityMode::AlignmentLength,
                IdentityArg::MinLength => IdentityMode::MinLength,
            };
            report(
                "diversity",
                seqs.len(),
                identity_cluster_diversity(&seqs, threshold, mode)?,
            )
        }
        MetricsCommand::Stability { input, threshold } => {
            let e = numbers(input.as_deref())?;
            report("stability", e.len(), stability_rate(&e, threshold)?)
        }
        MetricsCommand::Success { input, rel_tol } => {
            let recs: Vec<Target> = io::json_records(input.as_deref())?;
            let v: Vec<f64> = recs.iter().map(|r| r.value).collect();
            let t: Vec<f64> = recs.iter().map(|r| r.target).collect();
            report("success", recs.len(), success_within(&v, &t, rel_tol)?)
        }
        MetricsCommand::Property {
            input,
            property,
            delta,
        } => {
            let recs: Vec<Target> = io::json_records(input.as_deref())?;
            let v: Vec<f64> = recs.iter().map(|r| r.value).collect();
            let t: Vec<f64> = recs.iter().map(|r| r.target).collect();
            let d = delta.unwrap_or(property.default_delta());
            report("property", recs.len(), property_correct_ratio(&v, &t, d)?)
        }
        MetricsCommand::Precision { input } => {
            let recs: Vec<PrecisionRecord> = io::json_records(input.as_deref())?;
            let prompts: Vec<BTreeSet<String>> = recs.iter().map(|r| r.prompt.clone()).collect();
            let generated = recs
                .iter()
                .map(|r| match &r.generated {
                    Elements::Set(s) => Ok(s.clone()),
                    Elements::Formula(f) => Ok(Composition::parse_formula(f)?.element_set()),
                })
                .collect::<Result<Vec<_>>>()?;
            if recs.is_empty() {
                return Err(anyhow!("no records"));
            }
            report(
                "precision",
                recs.len(),
                composition_precision(&prompts, &generated)?,
            )
        }
    };
    Ok(serde_json::to_string(&r)?)
}

pub fn run(c: MetricsCommand) -> Result<Outcome> {
    let line = compute(c)?;
    let mut out = io::stdout();
    writeln!(out, "{line}")?;
    out.flush()?;
    Ok(Outcome::Ok)
}
