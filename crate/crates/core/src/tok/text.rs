use std::collections::HashSet;

use crate::vocab::{byte_token, parse_byte_token, Domain, Vocabulary};

/// Greedy longest-match tokenizer over the text tokens of a vocabulary.
///
/// Characters with no matching token fall back to their UTF-8 bytes as
/// `<0xNN>` tokens. Byte tokens are never produced by matching, which keeps
/// the fallback unambiguous on decode.
#[derive(Debug, Clone)]
pub struct TextTokenizer {
    mode: Mode,
}

#[derive(Debug, Clone)]
enum Mode {
    Chars,
    Vocab {
        tokens: HashSet<String>,
        max_chars: usize,
    },
}

impl TextTokenizer {
    /// One token per character, no vocabulary.
    pub fn chars() -> Self {
        TextTokenizer { mode: Mode::Chars }
    }

    pub fn from_vocab(v: &Vocabulary) -> Self {
        let tokens: HashSet<String> = v.entries()[..v.base_size()]
            .iter()
            .filter(|e| e.domain == Domain::Text && parse_byte_token(&e.token).is_none())
            .filter(|e| !e.token.is_empty())
            .map(|e| e.token.clone())
            .collect();
        let max_chars = tokens.iter().map(|t| t.chars().count()).max().unwrap_or(1);
        TextTokenizer {
            mode: Mode::Vocab { tokens, max_chars },
        }
    }

    pub fn tokenize(&self, s: &str) -> Vec<String> {
        match &self.mode {
            Mode::Chars => s.chars().map(String::from).collect(),
            Mode::Vocab { tokens, max_chars } => {
                let bounds: Vec<usize> = s
                    .char_indices()
                    .map(|(i, _)| i)
                    .chain(std::iter::once(s.len()))
                    .collect();
                let mut out = Vec::new();
                let mut i = 0;
                while i + 1 < bounds.len() {
                    let longest = (*max_chars).min(bounds.len() - 1 - i);
                    let hit = (1..=longest)
                        .rev()
                        .find(|&k| tokens.contains(&s[bounds[i]..bounds[i + k]]));
                    match hit {
                        Some(k) => {
                            out.push(s[bounds[i]..bounds[i + k]].to_string());
                            i += k;
                        }
                        None => {
                            out.extend(s[bounds[i]..bounds[i + 1]].bytes().map(byte_token));
                            i += 1;
                        }
                    }
                }
                out
            }
        }
    }
}

/// Joins text tokens, decoding runs of `<0xNN>` byte tokens.
pub(crate) fn join_text<S: AsRef<str>>(tokens: &[S]) -> Result<String, std::string::FromUtf8Error> {
    let mut bytes = Vec::new();
    for t in tokens {
        let t = t.as_ref();
        match parse_byte_token(t) {
            Some(b) => bytes.push(b),
            None => bytes.extend_from_slice(t.as_bytes()),
        }
    }
    String::from_utf8(bytes)
}
