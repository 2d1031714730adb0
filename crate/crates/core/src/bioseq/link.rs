use serde::{Deserialize, Serialize};

use super::{codon_to_amino, reverse_complement, BioError, NucleotideSeq, SeqKind, Strand};
use crate::tok::{wrap, TaggedSequence};
use crate::vocab::Entity;

/// A DNA sequence with its coding region replaced by the protein it
/// encodes. Flanks are given in the orientation of the coding strand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkedRecord {
    pub five_prime: String,
    pub protein: String,
    pub three_prime: String,
}

impl LinkedRecord {
    /// `<dna>5′ flank</dna><protein>…</protein><dna>3′ flank</dna>`, with
    /// empty flanks left out.
    pub fn to_tagged(&self) -> TaggedSequence {
        let mut ts = TaggedSequence::new();
        let residues = |s: &str| s.chars().map(String::from).collect::<Vec<_>>();
        if !self.five_prime.is_empty() {
            ts.extend(wrap(Entity::Dna, residues(&self.five_prime)));
        }
        ts.extend(wrap(Entity::Protein, residues(&self.protein)));
        if !self.three_prime.is_empty() {
            ts.extend(wrap(Entity::Dna, residues(&self.three_prime)));
        }
        ts
    }
}

/// Translates the coding region `start..end` of `d` on `strand`.
///
/// The region must be a whole number of codons. A single stop codon at the
/// end is dropped; a stop anywhere else is an error.
pub fn link_dna_protein(
    d: &NucleotideSeq,
    start: usize,
    end: usize,
    strand: Strand,
) -> Result<LinkedRecord, BioError> {
    if d.kind() != SeqKind::Dna {
        return Err(BioError::WrongKind {
            expected: SeqKind::Dna,
        });
    }
    if start > end || end > d.len() {
        return Err(BioError::OutOfBounds {
            start,
            end,
            len: d.len(),
        });
    }
    let len = end - start;
    if len == 0 {
        return Err(BioError::EmptySequence);
    }
    if !len.is_multiple_of(3) {
        return Err(BioError::NotCodonAligned { len });
    }
    let s = d.as_str();
    let part = |a: usize, b: usize| NucleotideSeq::dna(&s[a..b]).expect("slice of valid DNA");
    let (five, cds, three) = match strand {
        Strand::Plus => (part(0, start), part(start, end), part(end, d.len())),
        Strand::Minus => (
            reverse_complement(&part(end, d.len())),
            reverse_complement(&part(start, end)),
            reverse_complement(&part(0, start)),
        ),
    };
    let codons: Vec<&[u8]> = cds.as_str().as_bytes().chunks_exact(3).collect();
    let mut protein = String::with_capacity(codons.len());
    for (k, codon) in codons.iter().enumerate() {
        match codon_to_amino(codon) {
            Some('*') if k + 1 == codons.len() => {}
            Some('*') => return Err(BioError::InternalStop { codon: k }),
            Some(aa) => protein.push(aa),
            None => return Err(BioError::AmbiguousCodon { position: 3 * k }),
        }
    }
    Ok(LinkedRecord {
        five_prime: five.as_str().to_string(),
        protein,
        three_prime: three.as_str().to_string(),
    })
}
