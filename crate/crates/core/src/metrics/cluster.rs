use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MetricsError;

/// Denominator used when turning an alignment into an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityMode {
    /// Matches over alignment columns.
    #[default]
    AlignmentLength,
    /// Matches over the length of the shorter sequence.
    MinLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alignment {
    pub matches: usize,
    /// Columns, counting gaps.
    pub length: usize,
}

/// Global alignment scoring 1 per match, 0 per mismatch and 0 per gap.
/// Among alignments with the most matches, the one with the fewest
/// columns is taken.
pub fn align(a: &[u8], b: &[u8]) -> Alignment {
    // Each cell holds (matches, aligned pairs), maximized lexicographically.
    let mut prev = vec![(0usize, 0usize); b.len() + 1];
    let mut cur = prev.clone();
    for &x in a {
        cur[0] = (0, 0);
        for (j, &y) in b.iter().enumerate() {
            let d = prev[j];
            let diag = (d.0 + usize::from(x == y), d.1 + 1);
            cur[j + 1] = diag.max(prev[j + 1]).max(cur[j]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let (matches, pairs) = prev[b.len()];
    Alignment {
        matches,
        length: a.len() + b.len() - pairs,
    }
}

pub fn alignment_identity(a: &str, b: &str, mode: IdentityMode) -> f64 {
    let al = align(a.as_bytes(), b.as_bytes());
    let denom = match mode {
        IdentityMode::AlignmentLength => al.length,
        IdentityMode::MinLength => a.len().min(b.len()),
    };
    if denom == 0 {
        return if a == b { 1.0 } else { 0.0 };
    }
    al.matches as f64 / denom as f64
}

/// Greedy leader clustering in input order: each sequence joins the first
/// cluster whose leader it matches with identity at least `threshold`,
/// otherwise it leads a new cluster. Returns the cluster index of every
/// sequence.
pub fn identity_clusters<S: AsRef<str> + Sync>(
    seqs: &[S],
    threshold: f64,
    mode: IdentityMode,
) -> Result<Vec<usize>, MetricsError> {
    if seqs.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(MetricsError::BadThreshold(threshold));
    }
    let mut leaders: Vec<usize> = Vec::new();
    let mut assignment = Vec::with_capacity(seqs.len());
    for (i, s) in seqs.iter().enumerate() {
        let s = s.as_ref();
        let hit = leaders
            .par_iter()
            .position_first(|&l| alignment_identity(seqs[l].as_ref(), s, mode) >= threshold);
        match hit {
            Some(c) => assignment.push(c),
            None => {
                assignment.push(leaders.len());
                leaders.push(i);
            }
        }
    }
    Ok(assignment)
}

/// Number of identity clusters over the number of sequences.
pub fn identity_cluster_diversity<S: AsRef<str> + Sync>(
    seqs: &[S],
    threshold: f64,
    mode: IdentityMode,
) -> Result<f64, MetricsError> {
    let a = identity_clusters(seqs, threshold, mode)?;
    let clusters = a.iter().max().map_or(0, |m| m + 1);
    Ok(clusters as f64 / seqs.len() as f64)
}

pub const DEFAULT_IDENTITY_THRESHOLD: f64 = 0.5;
