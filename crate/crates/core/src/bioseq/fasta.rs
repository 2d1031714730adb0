use std::io::BufRead;

use super::BioError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    /// Header text after `>`, including any description.
    pub header: String,
    /// Concatenated sequence lines with whitespace removed.
    pub sequence: String,
}

impl FastaRecord {
    /// First word of the header.
    pub fn id(&self) -> &str {
        self.header.split_whitespace().next().unwrap_or("")
    }
}

/// Reads multi-record FASTA. Blank lines and `;` comments are skipped;
/// sequence before the first header is an error.
pub fn read_fasta<R: BufRead>(r: R) -> Result<Vec<FastaRecord>, BioError> {
    let mut out: Vec<FastaRecord> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| BioError::Fasta {
            line: i + 1,
            message: e.to_string(),
        })?;
        let line = line.trim_end();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(h) = line.strip_prefix('>') {
            out.push(FastaRecord {
                header: h.trim().to_string(),
                sequence: String::new(),
            });
        } else {
            let Some(rec) = out.last_mut() else {
                return Err(BioError::Fasta {
                    line: i + 1,
                    message: "sequence data before the first header".into(),
                });
            };
            rec.sequence
                .extend(line.chars().filter(|c| !c.is_whitespace()));
        }
    }
    Ok(out)
}

pub fn parse_fasta(s: &str) -> Result<Vec<FastaRecord>, BioError> {
    read_fasta(s.as_bytes())
}
