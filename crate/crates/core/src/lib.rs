//! Representation layer for multi-domain scientific language models:
//! vocabulary and tokenizers for text, molecules, proteins, nucleic acids
//! and crystals, a SMILES toolkit, central-dogma helpers, a crystal codec,
//! corpus construction and evaluation metrics.

pub mod bioseq;
pub mod corpus;
pub mod elements;
pub mod matcodec;
pub mod metrics;
pub mod molgraph;
pub mod tok;
pub mod vocab;

pub use bioseq::{BioError, NucleotideSeq, SeqKind, Strand};
pub use corpus::{CorpusError, EntitySpan, InstructionRecord, PackedSequence, PreferenceRecord};
pub use matcodec::{Composition, CrystalStructure, MatError, Tables};
pub use metrics::{GenerationReport, MetricsError};
pub use molgraph::{MolecularGraph, ParseError, ValidityReport};
pub use tok::{StructureError, TaggedSequence, Token, TokenizeError, Tokenizer};
pub use vocab::{Domain, Entity, SpecialToken, VocabError, Vocabulary};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Vocab(#[from] VocabError),
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Smiles(#[from] ParseError),
    #[error(transparent)]
    Bio(#[from] BioError),
    #[error(transparent)]
    Material(#[from] MatError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl Error {
    /// Stable machine-readable name of the error family.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Vocab(_) => "vocab",
            Error::Tokenize(_) => "tokenize",
            Error::Structure(_) => "structure",
            Error::Smiles(_) => "smiles",
            Error::Bio(_) => "bioseq",
            Error::Material(_) => "matcodec",
            Error::Corpus(_) => "corpus",
            Error::Metrics(_) => "metrics",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Library version, shared by every front end.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
