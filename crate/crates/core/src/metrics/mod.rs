//! Evaluation metrics over generated molecules, sequences and materials.

mod cluster;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

pub use cluster::{
    align, alignment_identity, identity_cluster_diversity, identity_clusters, Alignment,
    IdentityMode, DEFAULT_IDENTITY_THRESHOLD,
};

use crate::molgraph::{canonical_form, parse_smiles, validate};

/// Version of the JSON report layout written by the command-line tool.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("input is empty")]
    EmptyInput,
    #[error("reference sequence is empty")]
    EmptyReference,
    #[error("lengths differ: {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("input is constant, rank correlation undefined")]
    DegenerateConstantInput,
    #[error("target {index} is zero")]
    ZeroTarget { index: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("reference {index} is not a parseable SMILES: {smiles}")]
    InvalidReference { index: usize, smiles: String },
    #[error("tolerance must be a non-negative number, got {0}")]
    BadTolerance(f64),
    #[error("threshold must lie in [0, 1], got {0}")]
    BadThreshold(f64),
}

fn same_len(a: usize, b: usize) -> Result<(), MetricsError> {
    if a == b {
        Ok(())
    } else {
        Err(MetricsError::LengthMismatch { left: a, right: b })
    }
}

/// How generated SMILES are compared for uniqueness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UniquenessKey {
    /// Distinct canonical forms.
    #[default]
    Canonical,
    /// Distinct input strings.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationReport {
    #[serde(rename = "total")]
    pub n_total: usize,
    #[serde(rename = "valid")]
    pub n_valid: usize,
    #[serde(rename = "unique_valid")]
    pub n_unique_valid: usize,
    pub validity: f64,
    pub uniqueness: f64,
}

impl GenerationReport {
    pub fn from_counts(n_total: usize, n_valid: usize, n_unique_valid: usize) -> Self {
        GenerationReport {
            n_total,
            n_valid,
            n_unique_valid,
            validity: if n_total == 0 {
                0.0
            } else {
                n_valid as f64 / n_total as f64
            },
            uniqueness: n_unique_valid as f64 / n_valid.max(1) as f64,
        }
    }
}

/// Canonical form of a SMILES that parses and passes validation.
pub fn valid_canonical(smiles: &str) -> Option<String> {
    let g = parse_smiles(smiles).ok()?;
    validate(&g).valid.then(|| canonical_form(&g))
}

/// Validity is the fraction that parse and validate; uniqueness is the
/// number of distinct valid molecules over the number of valid ones.
pub fn validity_uniqueness<S: AsRef<str>>(
    smiles: &[S],
    key: UniquenessKey,
) -> Result<GenerationReport, MetricsError> {
    if smiles.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut n_valid = 0;
    let mut seen = HashSet::new();
    for s in smiles {
        if let Some(c) = valid_canonical(s.as_ref()) {
            n_valid += 1;
            seen.insert(match key {
                UniquenessKey::Canonical => c,
                UniquenessKey::Raw => s.as_ref().to_string(),
            });
        }
    }
    Ok(GenerationReport::from_counts(
        smiles.len(),
        n_valid,
        seen.len(),
    ))
}

/// Amino-acid recovery: the fraction of reference positions matched by the
/// generated sequence at the same position. Positions past the end of the
/// generated sequence count as misses; anything past the reference is
/// ignored.
pub fn aar(reference: &str, generated: &str) -> Result<f64, MetricsError> {
    let r = reference.as_bytes();
    if r.is_empty() {
        return Err(MetricsError::EmptyReference);
    }
    let hits = r
        .iter()
        .zip(generated.as_bytes())
        .filter(|(a, b)| a == b)
        .count();
    Ok(hits as f64 / r.len() as f64)
}

/// Ranks starting at 1, ties given the mean of the ranks they span.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && xs[order[j]] == xs[order[i]] {
            j += 1;
        }
        // Positions i..j hold ranks i+1..=j.
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman rank correlation: Pearson correlation of average ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64, MetricsError> {
    same_len(xs.len(), ys.len())?;
    if xs.len() < 2 {
        return Err(MetricsError::TooFewPoints(xs.len()));
    }
    if xs.iter().chain(ys).any(|v| v.is_nan()) {
        return Err(MetricsError::DegenerateConstantInput);
    }
    pearson(&average_ranks(xs), &average_ranks(ys)).ok_or(MetricsError::DegenerateConstantInput)
}

/// Order-insensitive key for a set of reactants: the canonical form of the
/// whole dot-separated graph, whose components are written in sorted order.
pub fn reactant_key(smiles: &str) -> Option<String> {
    parse_smiles(smiles).ok().map(|g| canonical_form(&g))
}

/// Fraction of references matched by one of their first `k` candidates.
/// A candidate matches when its multiset of canonical components equals
/// the reference's. Unparseable candidates never match.
pub fn topk_reactant_accuracy<R: AsRef<str>, C: AsRef<str>>(
    refs: &[R],
    candidates: &[Vec<C>],
    k: usize,
) -> Result<f64, MetricsError> {
    if k == 0 {
        return Err(MetricsError::ZeroK);
    }
    same_len(refs.len(), candidates.len())?;
    if refs.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut hits = 0;
    for (i, (r, cands)) in refs.iter().zip(candidates).enumerate() {
        let key = reactant_key(r.as_ref()).ok_or_else(|| MetricsError::InvalidReference {
            index: i,
            smiles: r.as_ref().to_string(),
        })?;
        if cands
            .iter()
            .take(k)
            .any(|c| reactant_key(c.as_ref()).as_deref() == Some(key.as_str()))
        {
            hits += 1;
        }
    }
    Ok(hits as f64 / refs.len() as f64)
}

/// Fraction of distinct generated keys absent from the reference set.
/// Generated items are deduplicated first.
pub fn novelty<S: AsRef<str>>(
    generated: &[S],
    reference: &HashSet<String>,
) -> Result<f64, MetricsError> {
    let unique: HashSet<&str> = generated.iter().map(|s| s.as_ref()).collect();
    if unique.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let novel = unique.iter().filter(|g| !reference.contains(**g)).count();
    Ok(novel as f64 / unique.len() as f64)
}

pub const STABILITY_THRESHOLD: f64 = 0.1;

/// Fraction of energies above hull strictly below `threshold` (eV/atom).
pub fn stability_rate(ehulls: &[f64], threshold: f64) -> Result<f64, MetricsError> {
    if ehulls.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    Ok(ehulls.iter().filter(|e| **e < threshold).count() as f64 / ehulls.len() as f64)
}

pub const SUCCESS_REL_TOL: f64 = 0.10;

/// Fraction of values strictly within `rel_tol` of their target, relative
/// to the target's magnitude. A value exactly `rel_tol` away fails.
pub fn success_within(values: &[f64], targets: &[f64], rel_tol: f64) -> Result<f64, MetricsError> {
    same_len(values.len(), targets.len())?;
    if values.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    if rel_tol.is_nan() || rel_tol < 0.0 {
        return Err(MetricsError::BadTolerance(rel_tol));
    }
    let mut hits = 0;
    for (i, (v, t)) in values.iter().zip(targets).enumerate() {
        if *t == 0.0 {
            return Err(MetricsError::ZeroTarget { index: i });
        }
        if (v - t).abs() < rel_tol * t.abs() {
            hits += 1;
        }
    }
    Ok(hits as f64 / values.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Hba,
    Hbd,
    #[serde(rename = "rotbonds")]
    RotBonds,
    Qed,
    Fsp3,
    Tpsa,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Hba,
        Property::Hbd,
        Property::RotBonds,
        Property::Qed,
        Property::Fsp3,
        Property::Tpsa,
    ];

    pub fn default_delta(self) -> f64 {
        match self {
            Property::Hba | Property::Hbd | Property::RotBonds => 0.0,
            Property::Qed | Property::Fsp3 => 0.05,
            Property::Tpsa => 5.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Property::Hba => "hba",
            Property::Hbd => "hbd",
            Property::RotBonds => "rotbonds",
            Property::Qed => "qed",
            Property::Fsp3 => "fsp3",
            Property::Tpsa => "tpsa",
        }
    }

    pub fn from_name(s: &str) -> Option<Property> {
        Property::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
    }
}

/// Default tolerance for each property.
pub fn default_deltas() -> BTreeMap<Property, f64> {
    Property::ALL
        .into_iter()
        .map(|p| (p, p.default_delta()))
        .collect()
}

/// Fraction of values within the absolute tolerance `delta` of their
/// target.
pub fn property_correct_ratio(
    values: &[f64],
    targets: &[f64],
    delta: f64,
) -> Result<f64, MetricsError> {
    same_len(values.len(), targets.len())?;
    if values.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    if delta.is_nan() || delta < 0.0 {
        return Err(MetricsError::BadTolerance(delta));
    }
    let hits = values
        .iter()
        .zip(targets)
        .filter(|(v, t)| (*v - *t).abs() <= delta)
        .count();
    Ok(hits as f64 / values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_report() {
        let r = validity_uniqueness(&["CCO", "OCC", "C1CC"], UniquenessKey::Canonical).unwrap();
        assert_eq!((r.n_total, r.n_valid, r.n_unique_valid), (3, 2, 1));
        assert_eq!(r.validity, 2.0 / 3.0);
        assert_eq!(r.uniqueness, 0.5);
        let r = validity_uniqueness(&["CCO", "OCC"], UniquenessKey::Raw).unwrap();
        assert_eq!(r.uniqueness, 1.0);
        let r = validity_uniqueness(&["CCO"; 4], UniquenessKey::Canonical).unwrap();
        assert_eq!(r.uniqueness, 0.25);
        let r = validity_uniqueness(&["C1CC", "[OH3]"], UniquenessKey::Canonical).unwrap();
        assert_eq!((r.validity, r.uniqueness), (0.0, 0.0));
        assert!(validity_uniqueness::<&str>(&[], UniquenessKey::Raw).is_err());
    }

    #[test]
    fn amino_acid_recovery() {
        assert_eq!(aar("QQYSNYPWT", "QQYSNYPWT").unwrap(), 1.0);
        assert_eq!(aar("QQYSNYPWT", "QQYSNY").unwrap(), 6.0 / 9.0);
        assert_eq!(aar("QQYSNYPWT", "QQYSNYPWTAAAA").unwrap(), 1.0);
        assert_eq!(aar("QQYSNYPWT", "").unwrap(), 0.0);
        assert_eq!(aar("", "A"), Err(MetricsError::EmptyReference));
    }

    #[test]
    fn rank_correlation() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(average_ranks(&[1.0, 2.0, 2.0, 3.0]), [1.0, 2.5, 2.5, 4.0]);
        // Ranks (1, 2.5, 2.5, 4) against (1, 3, 2, 4): covariance 4.5 over
        // sqrt(4.5 * 5).
        let want = 4.5 / (4.5f64 * 5.0).sqrt();
        let got = spearman(&[1.0, 2.0, 2.0, 3.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((got - want).abs() < 1e-12);
        assert_eq!(spearman(&[1.0], &[1.0]), Err(MetricsError::TooFewPoints(1)));
        assert_eq!(
            spearman(&[1.0, 1.0], &[1.0, 2.0]),
            Err(MetricsError::DegenerateConstantInput)
        );
        assert!(matches!(
            spearman(&[1.0, 2.0], &[1.0]),
            Err(MetricsError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn reactant_accuracy() {
        let refs = ["CCO.CC(=O)O"];
        assert_eq!(
            topk_reactant_accuracy(&refs, &[vec!["CC(O)=O.OCC"]], 1).unwrap(),
            1.0
        );
        assert_eq!(
            topk_reactant_accuracy(&refs, &[vec!["CCN.CC(=O)O"]], 1).unwrap(),
            0.0
        );
        let cands = vec![vec!["C", "(", "OCC.OC(C)=O"]];
        assert_eq!(topk_reactant_accuracy(&refs, &cands, 2).unwrap(), 0.0);
        assert_eq!(topk_reactant_accuracy(&refs, &cands, 3).unwrap(), 1.0);
        assert_eq!(topk_reactant_accuracy(&refs, &cands, 50).unwrap(), 1.0);
        // A duplicated component is part of the multiset.
        assert_eq!(
            topk_reactant_accuracy(&["CC.CC"], &[vec!["CC"]], 1).unwrap(),
            0.0
        );
        assert_eq!(
            topk_reactant_accuracy(&refs, &cands, 0),
            Err(MetricsError::ZeroK)
        );
        assert!(topk_reactant_accuracy(&["C("], &[vec!["C"]], 1).is_err());
    }

    #[test]
    fn novelty_counts_unique_items() {
        let reference: HashSet<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        assert_eq!(novelty(&["c", "d"], &reference).unwrap(), 1.0);
        assert_eq!(novelty(&["a", "b", "a"], &reference).unwrap(), 0.0);
        assert_eq!(
            novelty(&["a", "b", "c", "d", "c"], &reference).unwrap(),
            0.5
        );
        assert!(novelty::<&str>(&[], &reference).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(
            stability_rate(&[0.05, 0.2], STABILITY_THRESHOLD).unwrap(),
            0.5
        );
        assert_eq!(stability_rate(&[0.1], STABILITY_THRESHOLD).unwrap(), 0.0);
        assert_eq!(
            stability_rate(&[], STABILITY_THRESHOLD),
            Err(MetricsError::EmptyInput)
        );
        assert_eq!(
            success_within(&[390.0, 394.0], &[400.0, 400.0], SUCCESS_REL_TOL).unwrap(),
            1.0
        );
        assert_eq!(
            success_within(&[360.0], &[400.0], SUCCESS_REL_TOL).unwrap(),
            0.0
        );
        assert_eq!(
            success_within(&[5.0], &[5.0], SUCCESS_REL_TOL).unwrap(),
            1.0
        );
        assert_eq!(
            success_within(&[1.0], &[0.0], SUCCESS_REL_TOL),
            Err(MetricsError::ZeroTarget { index: 0 })
        );
    }

    #[test]
    fn property_tolerances() {
        let d = default_deltas();
        assert_eq!(
            property_correct_ratio(&[4.0], &[4.0], d[&Property::Hbd]).unwrap(),
            1.0
        );
        assert_eq!(
            property_correct_ratio(&[5.0], &[4.0], d[&Property::Hbd]).unwrap(),
            0.0
        );
        assert_eq!(
            property_correct_ratio(&[44.0], &[40.0], d[&Property::Tpsa]).unwrap(),
            1.0
        );
        assert_eq!(
            property_correct_ratio(&[0.56], &[0.50], d[&Property::Qed]).unwrap(),
            0.0
        );
        assert_eq!(Property::from_name("RotBonds"), Some(Property::RotBonds));
        assert!(property_correct_ratio(&[1.0], &[1.0], -1.0).is_err());
    }
}
