use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::{reverse_complement, BioError, NucleotideSeq, SeqKind, Strand};

pub const GUIDE_LENGTHS: RangeInclusive<usize> = 17..=24;
pub const MIN_TARGET_LEN: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrRnaFailure {
    LengthOutOfRange,
    NoTargetMatch,
    #[serde(rename = "NoPAM")]
    NoPam,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrRnaVerdict {
    pub valid: bool,
    pub failures: Vec<CrRnaFailure>,
    /// Top-strand offset of the protospacer's leftmost base.
    pub match_position: Option<usize>,
    pub strand: Option<Strand>,
}

/// Protospacer must match base for base; `N` in the target matches nothing.
fn matches_at(hay: &[u8], at: usize, needle: &[u8]) -> bool {
    hay[at..at + needle.len()]
        .iter()
        .zip(needle)
        .all(|(&h, &n)| h != b'N' && h == n)
}

fn pam_at(hay: &[u8], at: usize) -> bool {
    matches!(hay.get(at..at + 3), Some([_, b'G', b'G']))
}

/// Checks a crRNA against a DNA target: length 17 to 24, a protospacer
/// match on either strand, and `NGG` immediately 3′ of the match on that
/// strand. Plus-strand hits are reported before minus-strand hits, each
/// in order of position.
pub fn validate_crrna(
    target: &NucleotideSeq,
    guide: &NucleotideSeq,
) -> Result<CrRnaVerdict, BioError> {
    if target.kind() != SeqKind::Dna {
        return Err(BioError::WrongKind {
            expected: SeqKind::Dna,
        });
    }
    if target.len() < MIN_TARGET_LEN {
        return Err(BioError::TargetTooShort {
            len: target.len(),
            min: MIN_TARGET_LEN,
        });
    }
    let g = guide.to_dna();
    let g = g.as_str().as_bytes();
    let n = target.len();
    let mut failures = Vec::new();
    if !GUIDE_LENGTHS.contains(&g.len()) {
        failures.push(CrRnaFailure::LengthOutOfRange);
    }

    let mut matched = false;
    let mut hit = None;
    if !g.is_empty() && g.len() <= n {
        let top = target.as_str().as_bytes();
        let rc = reverse_complement(target);
        let bottom = rc.as_str().as_bytes();
        let len = g.len();
        // Minus-strand offsets are scanned so the top-strand coordinate
        // n - p - len ascends.
        let plus = (0..=n - len).map(|p| (Strand::Plus, p, top));
        let minus = (0..=n - len).rev().map(|p| (Strand::Minus, p, bottom));
        for (strand, p, hay) in plus.chain(minus) {
            if !matches_at(hay, p, g) {
                continue;
            }
            matched = true;
            if pam_at(hay, p + len) {
                let position = match strand {
                    Strand::Plus => p,
                    Strand::Minus => n - p - len,
                };
                hit = Some((position, strand));
                break;
            }
        }
    }
    if !matched {
        failures.push(CrRnaFailure::NoTargetMatch);
    } else if hit.is_none() {
        failures.push(CrRnaFailure::NoPam);
    }

    let valid = failures.is_empty();
    let (match_position, strand) = match hit {
        Some((p, s)) if valid => (Some(p), Some(s)),
        _ => (None, None),
    };
    Ok(CrRnaVerdict {
        valid,
        failures,
        match_position,
        strand,
    })
}
