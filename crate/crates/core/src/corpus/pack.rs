use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// A run of one document inside a row: row positions `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocSegment {
    pub doc: usize,
    pub start: usize,
    pub end: usize,
}

/// One fixed-length training row. Segments are in row order and cover the
/// occupied prefix; the rest is padding with mask 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedSequence {
    pub ids: Vec<u32>,
    pub mask: Vec<bool>,
    pub segments: Vec<DocSegment>,
}

impl PackedSequence {
    pub fn occupied(&self) -> usize {
        self.segments.last().map_or(0, |s| s.end)
    }
}

/// Greedy fill: documents are concatenated without separators and cut at
/// row boundaries. Every token is trained on. Empty documents occupy no
/// space and leave no segment.
pub fn pack_pretrain(
    docs: &[Vec<u32>],
    row_length: usize,
    pad_id: u32,
) -> Result<Vec<PackedSequence>, CorpusError> {
    if row_length < 2 {
        return Err(CorpusError::RowLength(row_length));
    }
    let mut rows = Vec::new();
    let mut cur = PackedSequence {
        ids: Vec::with_capacity(row_length),
        mask: Vec::with_capacity(row_length),
        segments: Vec::new(),
    };
    for (doc, tokens) in docs.iter().enumerate() {
        let mut rest = tokens.as_slice();
        while !rest.is_empty() {
            let take = rest.len().min(row_length - cur.ids.len());
            let start = cur.ids.len();
            cur.ids.extend_from_slice(&rest[..take]);
            cur.mask.resize(start + take, true);
            cur.segments.push(DocSegment {
                doc,
                start,
                end: start + take,
            });
            rest = &rest[take..];
            if cur.ids.len() == row_length {
                rows.push(std::mem::replace(
                    &mut cur,
                    PackedSequence {
                        ids: Vec::with_capacity(row_length),
                        mask: Vec::with_capacity(row_length),
                        segments: Vec::new(),
                    },
                ));
            }
        }
    }
    if !cur.ids.is_empty() {
        cur.ids.resize(row_length, pad_id);
        cur.mask.resize(row_length, false);
        rows.push(cur);
    }
    Ok(rows)
}

/// One record per row, right-padded. Each record is its token ids and
/// loss mask.
pub fn pack_posttrain(
    records: &[(Vec<u32>, Vec<bool>)],
    row_length: usize,
    pad_id: u32,
) -> Result<Vec<PackedSequence>, CorpusError> {
    if row_length < 2 {
        return Err(CorpusError::RowLength(row_length));
    }
    records
        .iter()
        .enumerate()
        .map(|(i, (ids, mask))| {
            if ids.len() != mask.len() {
                return Err(CorpusError::MaskLength(i));
            }
            if ids.len() > row_length {
                return Err(CorpusError::RecordTooLong {
                    index: i,
                    len: ids.len(),
                    max: row_length,
                });
            }
            let mut row_ids = ids.clone();
            row_ids.resize(row_length, pad_id);
            let mut row_mask = mask.clone();
            row_mask.resize(row_length, false);
            let segments = if ids.is_empty() {
                Vec::new()
            } else {
                vec![DocSegment {
                    doc: i,
                    start: 0,
                    end: ids.len(),
                }]
            };
            Ok(PackedSequence {
                ids: row_ids,
                mask: row_mask,
                segments,
            })
        })
        .collect()
}

/// Rebuilds the documents from their segments. Documents that never
/// appear (empty ones) come back empty, up to the highest doc id seen.
pub fn unpack(rows: &[PackedSequence]) -> Vec<Vec<u32>> {
    let mut docs: Vec<Vec<u32>> = Vec::new();
    for row in rows {
        for s in &row.segments {
            if docs.len() <= s.doc {
                docs.resize_with(s.doc + 1, Vec::new);
            }
            docs[s.doc].extend_from_slice(&row.ids[s.start..s.end]);
        }
    }
    docs
}

pub const PACK_FORMAT: &str = "nature-seqkit-packed";
pub const PACK_VERSION: u32 = 1;

/// Sidecar describing a packed binary file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackManifest {
    pub format: String,
    pub version: u32,
    pub row_length: usize,
    pub rows: usize,
    pub pad_id: u32,
    pub mask_bytes_per_row: usize,
    pub row_bytes: usize,
    /// Per row, `[doc, start, end]` triples.
    pub segments: Vec<Vec<[usize; 3]>>,
}

impl PackManifest {
    fn for_rows(row_length: usize, pad_id: u32, rows: &[PackedSequence]) -> Self {
        let mask_bytes = row_length.div_ceil(8);
        PackManifest {
            format: PACK_FORMAT.into(),
            version: PACK_VERSION,
            row_length,
            rows: rows.len(),
            pad_id,
            mask_bytes_per_row: mask_bytes,
            row_bytes: 4 * row_length + mask_bytes,
            segments: rows
                .iter()
                .map(|r| r.segments.iter().map(|s| [s.doc, s.start, s.end]).collect())
                .collect(),
        }
    }
}

/// Writes rows as `row_length` little-endian u32 ids followed by the mask,
/// one bit per position, least significant bit first. Returns the manifest
/// to store alongside.
pub fn write_packed<W: Write>(
    mut w: W,
    rows: &[PackedSequence],
    row_length: usize,
    pad_id: u32,
) -> Result<PackManifest, CorpusError> {
    let manifest = PackManifest::for_rows(row_length, pad_id, rows);
    let mut buf = Vec::with_capacity(manifest.row_bytes);
    for (i, row) in rows.iter().enumerate() {
        if row.ids.len() != row_length || row.mask.len() != row_length {
            return Err(CorpusError::Format(format!(
                "row {i} is not {row_length} tokens long"
            )));
        }
        buf.clear();
        for id in &row.ids {
            buf.extend_from_slice(&id.to_le_bytes());
        }
        let mut bits = vec![0u8; manifest.mask_bytes_per_row];
        for (j, m) in row.mask.iter().enumerate() {
            if *m {
                bits[j / 8] |= 1 << (j % 8);
            }
        }
        buf.extend_from_slice(&bits);
        w.write_all(&buf)?;
    }
    Ok(manifest)
}

pub fn read_packed<R: Read>(
    mut r: R,
    manifest: &PackManifest,
) -> Result<Vec<PackedSequence>, CorpusError> {
    if manifest.format != PACK_FORMAT || manifest.version != PACK_VERSION {
        return Err(CorpusError::Format(format!(
            "unsupported format {} v{}",
            manifest.format, manifest.version
        )));
    }
    let l = manifest.row_length;
    let expect = PackManifest::for_rows(l, manifest.pad_id, &[]);
    if manifest.mask_bytes_per_row != expect.mask_bytes_per_row
        || manifest.row_bytes != expect.row_bytes
        || manifest.segments.len() != manifest.rows
    {
        return Err(CorpusError::Format("inconsistent manifest".into()));
    }
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    if data.len() != manifest.rows * manifest.row_bytes {
        return Err(CorpusError::Format(format!(
            "expected {} bytes, found {}",
            manifest.rows * manifest.row_bytes,
            data.len()
        )));
    }
    let mut rows = Vec::with_capacity(manifest.rows);
    for (chunk, segs) in data
        .chunks_exact(manifest.row_bytes.max(1))
        .zip(&manifest.segments)
    {
        let (id_bytes, bits) = chunk.split_at(4 * l);
        let ids = id_bytes
            .chunks_exact(4)
            .map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
            .collect();
        let mask = (0..l).map(|j| bits[j / 8] >> (j % 8) & 1 == 1).collect();
        let mut segments = Vec::with_capacity(segs.len());
        let mut at = 0;
        for &[doc, start, end] in segs {
            if start != at || end <= start || end > l {
                return Err(CorpusError::Format(
                    "segments do not partition the row prefix".into(),
                ));
            }
            at = end;
            segments.push(DocSegment { doc, start, end });
        }
        rows.push(PackedSequence {
            ids,
            mask,
            segments,
        });
    }
    Ok(rows)
}
