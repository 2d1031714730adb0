use serde::{Deserialize, Serialize};

use super::{parse_smiles, valence, MolecularGraph, ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailureCode {
    Syntax,
    UnclosedRing,
    UnbalancedBranch,
    ValenceExceeded,
    BadAromaticRing,
}

impl From<ParseErrorKind> for FailureCode {
    fn from(k: ParseErrorKind) -> Self {
        match k {
            ParseErrorKind::Syntax => FailureCode::Syntax,
            ParseErrorKind::UnclosedRing => FailureCode::UnclosedRing,
            ParseErrorKind::UnbalancedBranch => FailureCode::UnbalancedBranch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub code: FailureCode,
    /// Offending atom for graph-level failures.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atom: Option<usize>,
    /// Byte offset for parse failures.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub failures: Vec<Failure>,
}

impl ValidityReport {
    fn from_failures(failures: Vec<Failure>) -> Self {
        ValidityReport {
            valid: failures.is_empty(),
            failures,
        }
    }

    pub fn from_parse_error(e: &ParseError) -> Self {
        Self::from_failures(vec![Failure {
            code: e.kind.into(),
            atom: None,
            offset: Some(e.offset),
        }])
    }

    /// Parses and validates a SMILES string; parse errors become failures.
    pub fn of_smiles(s: &str) -> Self {
        match parse_smiles(s) {
            Ok(g) => validate(&g),
            Err(e) => Self::from_parse_error(&e),
        }
    }
}

/// Checks valences against the allowed-valence table and requires every
/// aromatic atom to lie on a ring. Failures are listed in atom order.
pub fn validate(g: &MolecularGraph) -> ValidityReport {
    let ring = g.ring_atoms();
    let mut failures = Vec::new();
    for (i, a) in g.atoms().iter().enumerate() {
        if a.aromatic && !ring[i] {
            failures.push(Failure {
                code: FailureCode::BadAromaticRing,
                atom: Some(i),
                offset: None,
            });
        }
        if let Some(allowed) = valence::allowed_valences(a.element, a.charge) {
            let max = *allowed.iter().max().expect("tables are non-empty") as u32;
            if valence::effective_valence(g, i) > max {
                failures.push(Failure {
                    code: FailureCode::ValenceExceeded,
                    atom: Some(i),
                    offset: None,
                });
            }
        }
    }
    ValidityReport::from_failures(failures)
}
