//! Nucleotide sequences, the standard genetic code, CRISPR crRNA checks and
//! DNA–protein linking.

mod crrna;
mod fasta;
mod link;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use crrna::{validate_crrna, CrRnaFailure, CrRnaVerdict, GUIDE_LENGTHS, MIN_TARGET_LEN};
pub use fasta::{parse_fasta, read_fasta, FastaRecord};
pub use link::{link_dna_protein, LinkedRecord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BioError {
    #[error("empty sequence")]
    EmptySequence,
    #[error("invalid {kind} base {found:?} at position {position}")]
    InvalidBase {
        kind: SeqKind,
        position: usize,
        found: char,
    },
    #[error("expected a {expected} sequence")]
    WrongKind { expected: SeqKind },
    #[error("reading frame must be 0, 1 or 2, got {0}")]
    BadFrame(usize),
    #[error("ambiguous codon at position {position}")]
    AmbiguousCodon { position: usize },
    #[error("coding region {start}..{end} outside sequence of length {len}")]
    OutOfBounds {
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("coding region length {len} is not a multiple of three")]
    NotCodonAligned { len: usize },
    #[error("stop codon inside coding region at codon {codon}")]
    InternalStop { codon: usize },
    #[error("target must be at least {min} nt, got {len}")]
    TargetTooShort { len: usize, min: usize },
    #[error("FASTA line {line}: {message}")]
    Fasta { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqKind {
    Dna,
    Rna,
}

impl SeqKind {
    pub fn alphabet(self) -> &'static str {
        match self {
            SeqKind::Dna => "ACGTN",
            SeqKind::Rna => "ACGUN",
        }
    }
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeqKind::Dna => "dna",
            SeqKind::Rna => "rna",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strand {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strand::Plus => "+",
            Strand::Minus => "-",
        })
    }
}

impl std::str::FromStr for Strand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" | "plus" => Ok(Strand::Plus),
            "-" | "minus" => Ok(Strand::Minus),
            _ => Err(format!("unknown strand {s:?}")),
        }
    }
}

/// DNA or RNA bases, upper case, `N` allowed as the ambiguity code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NucleotideSeq {
    bases: String,
    kind: SeqKind,
}

impl NucleotideSeq {
    /// Checks the alphabet after upper-casing. The empty sequence is
    /// allowed; operations that need bases report `EmptySequence`.
    pub fn new(bases: &str, kind: SeqKind) -> Result<Self, BioError> {
        let bases = bases.to_ascii_uppercase();
        if let Some((position, found)) = bases
            .char_indices()
            .find(|(_, c)| !kind.alphabet().contains(*c))
        {
            return Err(BioError::InvalidBase {
                kind,
                position,
                found,
            });
        }
        Ok(NucleotideSeq { bases, kind })
    }

    pub fn dna(bases: &str) -> Result<Self, BioError> {
        Self::new(bases, SeqKind::Dna)
    }

    pub fn rna(bases: &str) -> Result<Self, BioError> {
        Self::new(bases, SeqKind::Rna)
    }

    pub fn as_str(&self) -> &str {
        &self.bases
    }

    pub fn kind(&self) -> SeqKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// The same bases as DNA (`U` read as `T`).
    pub fn to_dna(&self) -> NucleotideSeq {
        NucleotideSeq {
            bases: self.bases.replace('U', "T"),
            kind: SeqKind::Dna,
        }
    }

    pub fn gc_count(&self) -> usize {
        self.bases
            .bytes()
            .filter(|b| matches!(b, b'G' | b'C'))
            .count()
    }
}

impl fmt::Display for NucleotideSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bases)
    }
}

fn complement(b: u8, kind: SeqKind) -> u8 {
    match (b, kind) {
        (b'A', SeqKind::Dna) => b'T',
        (b'A', SeqKind::Rna) => b'U',
        (b'T' | b'U', _) => b'A',
        (b'C', _) => b'G',
        (b'G', _) => b'C',
        _ => b'N',
    }
}

/// Reverse complement; `N` stays `N`. RNA input complements `A` to `U`.
pub fn reverse_complement(s: &NucleotideSeq) -> NucleotideSeq {
    let bases = s
        .bases
        .bytes()
        .rev()
        .map(|b| complement(b, s.kind) as char)
        .collect();
    NucleotideSeq {
        bases,
        kind: s.kind,
    }
}

pub fn transcribe(d: &NucleotideSeq) -> Result<NucleotideSeq, BioError> {
    if d.kind != SeqKind::Dna {
        return Err(BioError::WrongKind {
            expected: SeqKind::Dna,
        });
    }
    if d.is_empty() {
        return Err(BioError::EmptySequence);
    }
    Ok(NucleotideSeq {
        bases: d.bases.replace('T', "U"),
        kind: SeqKind::Rna,
    })
}

/// Standard genetic code in TCAG order; `*` marks stop codons.
const CODE: &[u8; 64] = b"FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";

fn base_index(b: u8) -> Option<usize> {
    match b {
        b'T' | b'U' => Some(0),
        b'C' => Some(1),
        b'A' => Some(2),
        b'G' => Some(3),
        _ => None,
    }
}

/// Amino acid for one codon, `*` for stop, `None` if it contains `N`.
pub fn codon_to_amino(codon: &[u8]) -> Option<char> {
    match codon {
        [a, b, c] => {
            let i = base_index(*a)? * 16 + base_index(*b)? * 4 + base_index(*c)?;
            Some(CODE[i] as char)
        }
        _ => None,
    }
}

/// Translates from `frame` until the first stop codon, which is not
/// emitted. A trailing partial codon is ignored.
pub fn translate(n: &NucleotideSeq, frame: usize) -> Result<String, BioError> {
    if frame > 2 {
        return Err(BioError::BadFrame(frame));
    }
    if n.len() < frame + 3 {
        return Err(BioError::EmptySequence);
    }
    let mut out = String::new();
    for (k, codon) in n.bases.as_bytes()[frame..].chunks_exact(3).enumerate() {
        match codon_to_amino(codon) {
            Some('*') => break,
            Some(aa) => out.push(aa),
            None => {
                return Err(BioError::AmbiguousCodon {
                    position: frame + 3 * k,
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dna(s: &str) -> NucleotideSeq {
        NucleotideSeq::dna(s).unwrap()
    }

    #[test]
    fn revcomp() {
        assert_eq!(reverse_complement(&dna("ATGC")).as_str(), "GCAT");
        assert_eq!(reverse_complement(&dna("AAA")).as_str(), "TTT");
        assert_eq!(reverse_complement(&dna("ACNG")).as_str(), "CNGT");
        let r = NucleotideSeq::rna("AUGC").unwrap();
        assert_eq!(reverse_complement(&r).as_str(), "GCAU");
    }

    #[test]
    fn transcription() {
        assert_eq!(transcribe(&dna("ATT")).unwrap().as_str(), "AUU");
        assert_eq!(transcribe(&dna("")), Err(BioError::EmptySequence));
        let r = NucleotideSeq::rna("AUU").unwrap();
        assert!(matches!(transcribe(&r), Err(BioError::WrongKind { .. })));
        assert_eq!(transcribe(&r.to_dna()).unwrap(), r);
    }

    #[test]
    fn alphabet_checks() {
        assert!(matches!(
            NucleotideSeq::dna("ACGU"),
            Err(BioError::InvalidBase { position: 3, .. })
        ));
        assert!(NucleotideSeq::rna("ACGT").is_err());
        assert_eq!(dna("acgt").as_str(), "ACGT");
    }

    #[test]
    fn translation() {
        assert_eq!(translate(&dna("ATGAAATAA"), 0).unwrap(), "MK");
        assert_eq!(translate(&dna("ATGAAA"), 1).unwrap(), "");
        assert_eq!(translate(&dna("ATGAAAT"), 0).unwrap(), "MK");
        let d = dna("ATGGCCTTTTGGTAG");
        assert_eq!(
            translate(&transcribe(&d).unwrap(), 0).unwrap(),
            translate(&d, 0).unwrap()
        );
        assert_eq!(translate(&d, 3), Err(BioError::BadFrame(3)));
        assert_eq!(translate(&dna("AT"), 0), Err(BioError::EmptySequence));
        assert_eq!(translate(&dna("ATGA"), 2), Err(BioError::EmptySequence));
        assert_eq!(
            translate(&dna("ATGNAA"), 0),
            Err(BioError::AmbiguousCodon { position: 3 })
        );
    }

    #[test]
    fn genetic_code_spot_checks() {
        for (codon, aa) in [
            ("ATG", 'M'),
            ("TGG", 'W'),
            ("TAA", '*'),
            ("TAG", '*'),
            ("TGA", '*'),
            ("GCT", 'A'),
            ("CGA", 'R'),
            ("AGG", 'R'),
            ("TTA", 'L'),
            ("ATA", 'I'),
            ("GGG", 'G'),
        ] {
            assert_eq!(codon_to_amino(codon.as_bytes()), Some(aa), "{codon}");
        }
        let aas: std::collections::BTreeSet<u8> =
            CODE.iter().copied().filter(|&c| c != b'*').collect();
        assert_eq!(aas.len(), 20);
    }
}
