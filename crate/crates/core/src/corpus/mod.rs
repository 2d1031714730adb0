//! Training-corpus construction: interleaved text with inline entities,
//! instruction rendering with response-only loss masks, fixed-length
//! packing, and preference records.

mod pack;

use std::io::BufRead;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use pack::{
    pack_posttrain, pack_pretrain, read_packed, unpack, write_packed, DocSegment, PackManifest,
    PackedSequence, PACK_FORMAT, PACK_VERSION,
};

use crate::tok::{TaggedSequence, TokenizeError, Tokenizer};
use crate::vocab::{Entity, SpecialToken};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("spans {first} and {second} overlap")]
    OverlappingSpans { first: usize, second: usize },
    #[error("span {index} ({start}..{end}) outside text of {len} characters")]
    SpanOutOfBounds {
        index: usize,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("{0} must not be empty")]
    EmptyField(&'static str),
    #[error("instruction contains the response delimiter")]
    TemplateCollision,
    #[error("record {index} has {len} tokens, row length is {max}")]
    RecordTooLong {
        index: usize,
        len: usize,
        max: usize,
    },
    #[error("row length must be at least 2, got {0}")]
    RowLength(usize),
    #[error("accepted and rejected responses are identical")]
    DuplicateResponses,
    #[error("ids and mask differ in length for record {0}")]
    MaskLength(usize),
    #[error("packed data: {0}")]
    Format(String),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An entity mention: character offsets into the source text and the
/// entity string to insert after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    #[serde(rename = "domain")]
    pub entity: Entity,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterleavedRecord {
    pub text: String,
    #[serde(default)]
    pub spans: Vec<EntitySpan>,
}

/// Sorts spans by start and checks bounds and overlap. Offsets are in
/// characters; the result carries byte offsets.
fn checked_spans(
    text: &str,
    spans: &[EntitySpan],
) -> Result<Vec<(usize, usize, usize)>, CorpusError> {
    let bytes: Vec<usize> = text
        .char_indices()
        .map(|(b, _)| b)
        .chain(std::iter::once(text.len()))
        .collect();
    let chars = bytes.len() - 1;
    let mut order: Vec<usize> = (0..spans.len()).collect();
    order.sort_by_key(|&i| (spans[i].start, spans[i].end));
    let mut out = Vec::with_capacity(spans.len());
    let mut prev: Option<usize> = None;
    for i in order {
        let s = &spans[i];
        if s.start >= s.end || s.end > chars {
            return Err(CorpusError::SpanOutOfBounds {
                index: i,
                start: s.start,
                end: s.end,
                len: chars,
            });
        }
        if let Some(p) = prev {
            if spans[p].end > s.start {
                return Err(CorpusError::OverlappingSpans {
                    first: p.min(i),
                    second: p.max(i),
                });
            }
        }
        out.push((i, bytes[s.start], bytes[s.end]));
        prev = Some(i);
    }
    Ok(out)
}

/// Text form of an interleaved record: each mention is kept and followed by
/// a space and its wrapped entity.
pub fn interleave_text(text: &str, spans: &[EntitySpan]) -> Result<String, CorpusError> {
    let mut out = String::with_capacity(text.len());
    let mut at = 0;
    for (i, _, end) in checked_spans(text, spans)? {
        let s = &spans[i];
        out.push_str(&text[at..end]);
        out.push(' ');
        out.push_str(&s.entity.open());
        out.push_str(&s.payload);
        out.push_str(&s.entity.close());
        at = end;
    }
    out.push_str(&text[at..]);
    Ok(out)
}

/// Tokenized form of `interleave_text`.
pub fn build_interleaved(
    tokenizer: &Tokenizer,
    text: &str,
    spans: &[EntitySpan],
) -> Result<TaggedSequence, CorpusError> {
    let mut out = TaggedSequence::new();
    let mut at = 0;
    for (i, _, end) in checked_spans(text, spans)? {
        let s = &spans[i];
        let mut mention = text[at..end].to_string();
        mention.push(' ');
        out.extend(tokenizer.text_sequence(&mention));
        out.extend(tokenizer.entity(s.entity, &s.payload)?);
        at = end;
    }
    if at < text.len() {
        out.extend(tokenizer.text_sequence(&text[at..]));
    }
    Ok(out)
}

pub const INSTRUCTION_PREFIX: &str = "Instruction: ";
pub const RESPONSE_DELIMITER: &str = "\n\n\nResponse: ";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionRecord {
    pub instruction: String,
    pub response: String,
    #[serde(default, rename = "task", skip_serializing_if = "Option::is_none")]
    pub task: Option<String>,
}

impl InstructionRecord {
    pub fn new(instruction: &str, response: &str) -> Result<Self, CorpusError> {
        let r = InstructionRecord {
            instruction: instruction.to_string(),
            response: response.to_string(),
            task: None,
        };
        r.check()?;
        Ok(r)
    }

    pub fn check(&self) -> Result<(), CorpusError> {
        if self.instruction.is_empty() {
            return Err(CorpusError::EmptyField("instruction"));
        }
        if self.response.is_empty() {
            return Err(CorpusError::EmptyField("response"));
        }
        if self.instruction.contains(RESPONSE_DELIMITER) {
            return Err(CorpusError::TemplateCollision);
        }
        Ok(())
    }
}

/// A rendered instruction record. `tokens` ends with `<eod>`; `mask` marks
/// the response tokens and that final `<eod>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub text: String,
    pub tokens: TaggedSequence,
    pub mask: Vec<bool>,
}

impl Rendered {
    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }
}

/// Renders `Instruction: {instruction}\n\n\nResponse: {response}`. The
/// prompt part and the response are tokenized separately, so no token
/// straddles the boundary.
pub fn render_instruction(
    tokenizer: &Tokenizer,
    r: &InstructionRecord,
) -> Result<Rendered, CorpusError> {
    r.check()?;
    let prompt = format!("{INSTRUCTION_PREFIX}{}{RESPONSE_DELIMITER}", r.instruction);
    let mut tokens = tokenizer.tokenize_tagged(&prompt)?;
    let prompt_len = tokens.len();
    tokens.extend(tokenizer.tokenize_tagged(&r.response)?);
    tokens.push_special(SpecialToken::Eod);
    let mut mask = vec![false; prompt_len];
    mask.resize(tokens.len(), true);
    Ok(Rendered {
        text: prompt + &r.response,
        tokens,
        mask,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferenceRecord {
    pub prompt: String,
    pub accepted: String,
    pub rejected: String,
}

impl PreferenceRecord {
    pub fn new(prompt: &str, accepted: &str, rejected: &str) -> Result<Self, CorpusError> {
        let r = PreferenceRecord {
            prompt: prompt.to_string(),
            accepted: accepted.to_string(),
            rejected: rejected.to_string(),
        };
        r.check()?;
        Ok(r)
    }

    pub fn check(&self) -> Result<(), CorpusError> {
        if self.prompt.is_empty() {
            return Err(CorpusError::EmptyField("prompt"));
        }
        if self.accepted == self.rejected {
            return Err(CorpusError::DuplicateResponses);
        }
        Ok(())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain strings serialize")
    }
}

/// Reads one JSON value per non-blank line.
pub fn read_jsonl<T: DeserializeOwned, R: BufRead>(r: R) -> Result<Vec<T>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|source| CorpusError::Json {
                line: i + 1,
                source,
            })?,
        );
    }
    Ok(out)
}

/// Applies `f` to contiguous shards of `items` in parallel and
/// concatenates the results in shard order, so the output does not depend
/// on the shard count.
pub fn map_sharded<T, R, E, F>(items: &[T], shards: usize, f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync,
{
    let shards = shards.max(1);
    let chunk = items.len().div_ceil(shards).max(1);
    let parts: Vec<Result<Vec<R>, E>> = items
        .par_chunks(chunk)
        .map(|c| c.iter().map(&f).collect())
        .collect();
    let mut out = Vec::with_capacity(items.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}
