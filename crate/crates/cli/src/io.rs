use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Reads from the file, or standard input when absent or `-`.
pub fn open(path: Option<&Path>) -> Result<Box<dyn BufRead>> {
    match path {
        None => Ok(Box::new(BufReader::new(io::stdin().lock()))),
        Some(p) if p == Path::new("-") => Ok(Box::new(BufReader::new(io::stdin().lock()))),
        Some(p) => {
            let f = File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
            Ok(Box::new(BufReader::new(f)))
        }
    }
}

pub fn read_all(path: Option<&Path>) -> Result<String> {
    let mut s = String::new();
    open(path)?.read_to_string(&mut s)?;
    Ok(s)
}

/// Input lines with trailing `\r` removed. Blank lines are kept so output
/// lines stay aligned with input lines.
pub fn lines(path: Option<&Path>) -> Result<impl Iterator<Item = Result<(usize, String)>>> {
    let r = open(path)?;
    Ok(r.lines().enumerate().map(|(i, l)| {
        let mut l = l.with_context(|| format!("reading line {}", i + 1))?;
        if l.ends_with('\r') {
            l.pop();
        }
        Ok((i + 1, l))
    }))
}

/// Non-blank input lines.
pub fn records(path: Option<&Path>) -> Result<impl Iterator<Item = Result<(usize, String)>>> {
    Ok(lines(path)?.filter(|r| !matches!(r, Ok((_, l)) if l.trim().is_empty())))
}

/// Non-blank lines parsed as JSON values.
pub fn json_records<T: DeserializeOwned>(path: Option<&Path>) -> Result<Vec<T>> {
    records(path)?
        .map(|r| {
            let (n, l) = r?;
            serde_json::from_str(&l).with_context(|| format!("line {n}: invalid record"))
        })
        .collect()
}

pub fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

pub fn write_json<W: Write, T: Serialize>(w: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}
