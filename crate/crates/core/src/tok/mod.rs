//! Domain tokenizers and the tagged token sequence they produce.
//!
//! Every token carries a domain tag. Scientific entities sit between an
//! open/close boundary pair (`<mol>`..`</mol>` and so on); entities never
//! nest.

pub(crate) mod material;
mod smiles;
mod text;

use serde::{Deserialize, Serialize};

pub use material::{render_material, tokenize_material, tokenize_number, FRACTION_DIGITS};
pub use smiles::{tokenize_smiles, SMILES_PATTERN};
pub use text::TextTokenizer;

use crate::vocab::{Domain, Entity, SpecialToken, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TokenizeError {
    #[error("empty input")]
    Empty,
    #[error("{domain}: unexpected {found:?} at offset {position}")]
    Invalid {
        domain: Domain,
        position: usize,
        found: char,
    },
    #[error("number {0:?} is not a signed decimal with 4 fraction digits")]
    Precision(String),
    #[error("domain {0} has no tokenizer for entity payloads")]
    UnsupportedDomain(Domain),
    #[error("token {token:?} not in {domain} vocabulary")]
    UnknownToken { domain: Domain, token: String },
    #[error("id {0} not in vocabulary")]
    UnknownId(u32),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("{entity} opened at token {index} is never closed")]
    Unclosed { entity: Entity, index: usize },
    #[error("close of {entity} at token {index} without a matching open")]
    UnexpectedClose { entity: Entity, index: usize },
    #[error("entity opened at token {index} inside another entity")]
    Nested { index: usize },
    #[error("text tokens do not decode to UTF-8")]
    InvalidUtf8,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub domain: Domain,
}

impl Token {
    pub fn new(text: impl Into<String>, domain: Domain) -> Self {
        Token {
            text: text.into(),
            domain,
        }
    }

    pub fn special(s: SpecialToken) -> Self {
        let domain = if s.is_material_marker() {
            Domain::Material
        } else {
            Domain::Special
        };
        Token::new(s.render(), domain)
    }

    fn boundary(&self) -> Option<SpecialToken> {
        if self.domain != Domain::Special {
            return None;
        }
        SpecialToken::parse(&self.text)
    }
}

/// Token range `[start, end)` of one entity, boundary tokens included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub entity: Entity,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedSequence {
    tokens: Vec<Token>,
    spans: Vec<Span>,
}

impl TaggedSequence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a sequence from raw tokens, recovering the entity spans.
    pub fn from_tokens(tokens: Vec<Token>) -> Result<Self, StructureError> {
        let spans = find_spans(&tokens)?;
        Ok(TaggedSequence { tokens, spans })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn into_tokens(self) -> Vec<Token> {
        self.tokens
    }

    pub fn push_text<I: IntoIterator<Item = String>>(&mut self, tokens: I) {
        self.tokens
            .extend(tokens.into_iter().map(|t| Token::new(t, Domain::Text)));
    }

    pub fn push_special(&mut self, s: SpecialToken) {
        self.tokens.push(Token::special(s));
    }

    /// Appends `other`, shifting its spans.
    pub fn extend(&mut self, other: TaggedSequence) {
        let offset = self.tokens.len();
        self.tokens.extend(other.tokens);
        self.spans.extend(other.spans.into_iter().map(|s| Span {
            entity: s.entity,
            start: s.start + offset,
            end: s.end + offset,
        }));
    }

    pub fn strings(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }
}

fn find_spans(tokens: &[Token]) -> Result<Vec<Span>, StructureError> {
    let mut spans = Vec::new();
    let mut open: Option<(Entity, usize)> = None;
    for (i, t) in tokens.iter().enumerate() {
        match (t.boundary(), open) {
            (Some(SpecialToken::Open(_)), Some(_)) => {
                return Err(StructureError::Nested { index: i })
            }
            (Some(SpecialToken::Open(e)), None) => open = Some((e, i)),
            (Some(SpecialToken::Close(e)), Some((o, start))) if o == e => {
                spans.push(Span {
                    entity: e,
                    start,
                    end: i + 1,
                });
                open = None;
            }
            (Some(SpecialToken::Close(e)), _) => {
                return Err(StructureError::UnexpectedClose {
                    entity: e,
                    index: i,
                })
            }
            _ => {}
        }
    }
    if let Some((entity, index)) = open {
        return Err(StructureError::Unclosed { entity, index });
    }
    Ok(spans)
}

/// Tokenizes one residue per character, checking the domain alphabet:
/// protein `A`..`Z`, DNA `ACGTN`, RNA `ACGUN`.
pub fn tokenize_residues(s: &str, domain: Domain) -> Result<Vec<String>, TokenizeError> {
    if s.is_empty() {
        return Err(TokenizeError::Empty);
    }
    let allowed: fn(char) -> bool = match domain {
        Domain::Protein => |c| c.is_ascii_uppercase(),
        Domain::Dna => |c| "ACGTN".contains(c),
        Domain::Rna => |c| "ACGUN".contains(c),
        other => return Err(TokenizeError::UnsupportedDomain(other)),
    };
    s.char_indices()
        .map(|(i, c)| {
            if allowed(c) {
                Ok(c.to_string())
            } else {
                Err(TokenizeError::Invalid {
                    domain,
                    position: i,
                    found: c,
                })
            }
        })
        .collect()
}

/// Offsets of protein residues outside the 20 standard amino acids.
pub fn nonstandard_residues(s: &str) -> Vec<usize> {
    const STANDARD: &str = "ACDEFGHIKLMNPQRSTVWY";
    s.char_indices()
        .filter(|(_, c)| !STANDARD.contains(*c))
        .map(|(i, _)| i)
        .collect()
}

/// Tokenizes an entity payload with the tokenizer of `domain`.
pub fn tokenize_domain(domain: Domain, s: &str) -> Result<Vec<String>, TokenizeError> {
    match domain {
        Domain::Mol => tokenize_smiles(s),
        Domain::Protein | Domain::Dna | Domain::Rna => tokenize_residues(s, domain),
        Domain::Material => tokenize_material(s),
        Domain::Text => Ok(TextTokenizer::chars().tokenize(s)),
        Domain::Special => Err(TokenizeError::UnsupportedDomain(domain)),
    }
}

/// Encloses entity tokens in their boundary pair.
pub fn wrap<S: Into<String>>(
    entity: Entity,
    tokens: impl IntoIterator<Item = S>,
) -> TaggedSequence {
    let domain = entity.content_domain();
    let mut out = Vec::new();
    out.push(Token::special(SpecialToken::Open(entity)));
    out.extend(tokens.into_iter().map(|t| {
        let t: String = t.into();
        match SpecialToken::parse(&t) {
            Some(s) if domain == Domain::Material && s.is_material_marker() => Token::special(s),
            _ => Token::new(t, domain),
        }
    }));
    out.push(Token::special(SpecialToken::Close(entity)));
    let end = out.len();
    TaggedSequence {
        tokens: out,
        spans: vec![Span {
            entity,
            start: 0,
            end,
        }],
    }
}

/// Renders a tagged sequence back to text. Boundary structure is checked
/// from the tokens themselves, not from the cached spans.
pub fn detokenize(ts: &TaggedSequence) -> Result<String, StructureError> {
    detokenize_tokens(&ts.tokens)
}

pub fn detokenize_tokens(tokens: &[Token]) -> Result<String, StructureError> {
    find_spans(tokens)?;
    let mut out = String::new();
    let mut i = 0;
    while i < tokens.len() {
        let domain = tokens[i].domain;
        let mut j = i;
        while j < tokens.len() && tokens[j].domain == domain {
            j += 1;
        }
        let run: Vec<&str> = tokens[i..j].iter().map(|t| t.text.as_str()).collect();
        match domain {
            Domain::Text => {
                out.push_str(&text::join_text(&run).map_err(|_| StructureError::InvalidUtf8)?)
            }
            Domain::Material => out.push_str(&render_material(&run)),
            _ => out.push_str(&run.concat()),
        }
        i = j;
    }
    Ok(out)
}

/// Tokenizer for mixed text carrying boundary-delimited entities.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    text: TextTokenizer,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer::chars()
    }
}

impl Tokenizer {
    pub fn new(vocab: &Vocabulary) -> Self {
        Tokenizer {
            text: TextTokenizer::from_vocab(vocab),
        }
    }

    /// Character-level text tokenization, no vocabulary.
    pub fn chars() -> Self {
        Tokenizer {
            text: TextTokenizer::chars(),
        }
    }

    pub fn tokenize_text(&self, s: &str) -> Vec<String> {
        self.text.tokenize(s)
    }

    pub fn text_sequence(&self, s: &str) -> TaggedSequence {
        let mut t = TaggedSequence::new();
        t.push_text(self.text.tokenize(s));
        t
    }

    pub fn entity(&self, entity: Entity, payload: &str) -> Result<TaggedSequence, TokenizeError> {
        let tokens = if payload.is_empty() {
            Vec::new()
        } else {
            tokenize_domain(entity.content_domain(), payload)?
        };
        Ok(wrap(entity, tokens))
    }

    /// Tokenizes text where entities appear as `<tag>payload</tag>`.
    /// Anything not forming a boundary pair is plain text.
    pub fn tokenize_tagged(&self, s: &str) -> Result<TaggedSequence, TokenizeError> {
        let mut out = TaggedSequence::new();
        let mut text_start = 0;
        let mut i = 0;
        while let Some(rel) = s[i..].find('<') {
            let at = i + rel;
            let rest = &s[at..];
            if let Some(entity) = Entity::ALL
                .into_iter()
                .find(|e| rest.starts_with(&e.open()))
            {
                let open = entity.open();
                let close = entity.close();
                let body_start = at + open.len();
                let Some(body_len) = s[body_start..].find(&close) else {
                    let index = out.len() + self.text.tokenize(&s[text_start..at]).len();
                    return Err(StructureError::Unclosed { entity, index }.into());
                };
                out.push_text(self.text.tokenize(&s[text_start..at]));
                let body = &s[body_start..body_start + body_len];
                let ent = self
                    .entity(entity, body)
                    .map_err(|e| shift(e, body_start))?;
                out.extend(ent);
                i = body_start + body_len + close.len();
                text_start = i;
            } else if let Some(entity) = Entity::ALL
                .into_iter()
                .find(|e| rest.starts_with(&e.close()))
            {
                let index = out.len() + self.text.tokenize(&s[text_start..at]).len();
                return Err(StructureError::UnexpectedClose { entity, index }.into());
            } else {
                i = at + 1;
            }
        }
        out.push_text(self.text.tokenize(&s[text_start..]));
        Ok(out)
    }
}

fn shift(e: TokenizeError, by: usize) -> TokenizeError {
    match e {
        TokenizeError::Invalid {
            domain,
            position,
            found,
        } => TokenizeError::Invalid {
            domain,
            position: position + by,
            found,
        },
        other => other,
    }
}

/// Maps tokens to vocabulary ids.
pub fn encode(vocab: &Vocabulary, ts: &TaggedSequence) -> Result<Vec<u32>, TokenizeError> {
    ts.tokens
        .iter()
        .map(|t| {
            vocab
                .id(t.domain, &t.text)
                .ok_or_else(|| TokenizeError::UnknownToken {
                    domain: t.domain,
                    token: t.text.clone(),
                })
        })
        .collect()
}

pub fn decode(vocab: &Vocabulary, ids: &[u32]) -> Result<TaggedSequence, TokenizeError> {
    let tokens = ids
        .iter()
        .map(|&id| {
            vocab
                .entry(id)
                .map(|e| Token::new(e.token.clone(), e.domain))
                .ok_or(TokenizeError::UnknownId(id))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TaggedSequence::from_tokens(tokens)?)
}
