use std::collections::HashMap;
use std::path::Path;

use super::MatError;
use crate::elements;

pub const OXIDATION_FILE: &str = "oxidation_states.tsv";
pub const ELECTRONEGATIVITY_FILE: &str = "electronegativity.tsv";

const EMBEDDED_OXIDATION: &str = include_str!("../../data/oxidation_states.tsv");
const EMBEDDED_ELECTRONEGATIVITY: &str = include_str!("../../data/electronegativity.tsv");

/// Per-element common oxidation states and Pauling electronegativities.
#[derive(Debug, Clone, PartialEq)]
pub struct Tables {
    oxidation: HashMap<String, Vec<i8>>,
    electronegativity: HashMap<String, f64>,
}

impl Default for Tables {
    fn default() -> Self {
        Self::embedded()
    }
}

fn rows<'a>(
    file: &'a str,
    text: &'a str,
) -> impl Iterator<Item = Result<(usize, &'a str, &'a str), MatError>> + 'a {
    text.lines().enumerate().filter_map(move |(i, line)| {
        if line.trim().is_empty() || line.starts_with('#') {
            return None;
        }
        let Some((sym, rest)) = line.split_once('\t') else {
            return Some(Err(MatError::Table {
                file: file.to_string(),
                line: i + 1,
                message: "expected symbol<TAB>value".into(),
            }));
        };
        if !elements::is_element(sym) {
            return Some(Err(MatError::Table {
                file: file.to_string(),
                line: i + 1,
                message: format!("unknown element {sym:?}"),
            }));
        }
        Some(Ok((i + 1, sym, rest.trim())))
    })
}

impl Tables {
    /// Tables compiled into the library.
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED_OXIDATION, EMBEDDED_ELECTRONEGATIVITY).expect("embedded tables parse")
    }

    /// Reads `oxidation_states.tsv` and `electronegativity.tsv` from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, MatError> {
        let ox = std::fs::read_to_string(dir.join(OXIDATION_FILE))?;
        let en = std::fs::read_to_string(dir.join(ELECTRONEGATIVITY_FILE))?;
        Self::parse(&ox, &en)
    }

    pub fn parse(oxidation: &str, electronegativity: &str) -> Result<Self, MatError> {
        let mut ox = HashMap::new();
        for row in rows(OXIDATION_FILE, oxidation) {
            let (line, sym, rest) = row?;
            let states = if rest.is_empty() {
                Vec::new()
            } else {
                rest.split(',')
                    .map(|v| v.trim().parse::<i8>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| MatError::Table {
                        file: OXIDATION_FILE.into(),
                        line,
                        message: e.to_string(),
                    })?
            };
            ox.insert(sym.to_string(), states);
        }
        let mut en = HashMap::new();
        for row in rows(ELECTRONEGATIVITY_FILE, electronegativity) {
            let (line, sym, rest) = row?;
            if rest.is_empty() {
                continue;
            }
            let v: f64 = rest
                .parse()
                .map_err(|e: std::num::ParseFloatError| MatError::Table {
                    file: ELECTRONEGATIVITY_FILE.into(),
                    line,
                    message: e.to_string(),
                })?;
            en.insert(sym.to_string(), v);
        }
        Ok(Tables {
            oxidation: ox,
            electronegativity: en,
        })
    }

    /// `None` when the element has no row; an empty slice when it has no
    /// common states.
    pub fn oxidation_states(&self, symbol: &str) -> Option<&[i8]> {
        self.oxidation.get(symbol).map(Vec::as_slice)
    }

    pub fn electronegativity(&self, symbol: &str) -> Option<f64> {
        self.electronegativity.get(symbol).copied()
    }
}
