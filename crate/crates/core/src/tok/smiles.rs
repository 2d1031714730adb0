use std::sync::OnceLock;

use regex::Regex;

use super::TokenizeError;
use crate::vocab::Domain;

/// Atom-wise SMILES pattern. One match per token; alternatives are tried
/// left to right:
///
/// ```text
/// (\[[^\]]+]|Br?|Cl?|N|O|S|P|F|I|b|c|n|o|s|p|\(|\)|\.|=|#|-|\+|\\|\/|:|~|@|\?|>|\*|\$|\%[0-9]{2}|[0-9])
/// ```
///
/// `%NN` ring-closure labels are a single token.
pub const SMILES_PATTERN: &str = r"(\[[^\]]+]|Br?|Cl?|N|O|S|P|F|I|b|c|n|o|s|p|\(|\)|\.|=|#|-|\+|\\|/|:|~|@|\?|>|\*|\$|%[0-9]{2}|[0-9])";

fn pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(SMILES_PATTERN).expect("SMILES pattern compiles"))
}

/// Splits a SMILES string into atom-level tokens. Any byte the pattern does
/// not consume is an error; there is no character-level fallback.
pub fn tokenize_smiles(s: &str) -> Result<Vec<String>, TokenizeError> {
    if s.is_empty() {
        return Err(TokenizeError::Empty);
    }
    let mut out = Vec::new();
    let mut pos = 0;
    for m in pattern().find_iter(s) {
        if m.start() != pos {
            return Err(invalid(s, pos));
        }
        out.push(m.as_str().to_string());
        pos = m.end();
    }
    if pos != s.len() {
        return Err(invalid(s, pos));
    }
    Ok(out)
}

fn invalid(s: &str, pos: usize) -> TokenizeError {
    TokenizeError::Invalid {
        domain: Domain::Mol,
        position: pos,
        found: s[pos..].chars().next().unwrap_or('\0'),
    }
}
