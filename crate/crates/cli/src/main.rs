mod chem;
mod corpus;
mod io;
mod mat;
mod metrics;
mod seq;
mod tokens;
mod vocab;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Tokenizers, validators, codecs and metrics for scientific sequences.
#[derive(Debug, Parser)]
#[command(name = "nature-seqkit", version, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tokenize one record per line and print its tokens as JSON.
    Tokenize(tokens::TokenizeArgs),
    /// Rebuild text from token or id arrays, one per line.
    Detokenize(tokens::DetokenizeArgs),
    /// Check SMILES, one per line, and print a validity report.
    ValidateSmiles(chem::ValidateArgs),
    /// Print the canonical form of each SMILES.
    Canon(chem::InputArg),
    /// Print graph descriptors of each SMILES as JSON.
    Descriptors(chem::InputArg),
    /// Nucleotide operations.
    #[command(subcommand)]
    Dna(seq::DnaCommand),
    /// Crystal composition and structure codec.
    #[command(subcommand)]
    Mat(mat::MatCommand),
    /// Corpus construction.
    #[command(subcommand)]
    Corpus(corpus::CorpusCommand),
    /// Evaluation metrics.
    #[command(subcommand)]
    Metrics(metrics::MetricsCommand),
    /// Vocabulary files.
    #[command(subcommand)]
    Vocab(vocab::VocabCommand),
}

/// Exit status of a command whose input was processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// Some records failed validation; details were reported as data.
    Invalid,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Tokenize(a) => tokens::tokenize(a),
        Command::Detokenize(a) => tokens::detokenize(a),
        Command::ValidateSmiles(a) => chem::validate(a),
        Command::Canon(a) => chem::canon(a),
        Command::Descriptors(a) => chem::descriptors(a),
        Command::Dna(c) => seq::run(c),
        Command::Mat(c) => mat::run(c),
        Command::Corpus(c) => corpus::run(c),
        Command::Metrics(c) => metrics::run(c),
        Command::Vocab(c) => vocab::run(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Invalid) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
