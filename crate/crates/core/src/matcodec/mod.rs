//! Crystal compositions and structures as flat token sequences, POSCAR
//! input, and oxidation-state screening.
//!
//! Composition form: each element repeated by its count, then `<sgN>`.
//! Structure form: elements, `<sg>`, `<sgN>`, `<coord>`, the nine lattice
//! numbers row by row, then three fractional coordinates per atom. Every
//! number carries four fraction digits and is split into one token per
//! character.

mod poscar;
mod smact;
mod tables;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use poscar::{parse_poscar, Poscar};
pub use smact::{smact_valid, NearestMiss, SmactVerdict};
pub use tables::{Tables, ELECTRONEGATIVITY_FILE, OXIDATION_FILE};

use crate::elements;
use crate::tok::material::{is_number_char, FRACTION_DIGITS};
use crate::vocab::SpecialToken;

#[derive(Debug, thiserror::Error)]
pub enum MatError {
    #[error("space group {0} outside 1..=230")]
    BadSpaceGroup(u32),
    #[error("no space group token")]
    NoSpaceGroup,
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("element {0} listed twice")]
    DuplicateElement(String),
    #[error("element counts must be positive ({0})")]
    ZeroCount(String),
    #[error("composition has no elements")]
    EmptyComposition,
    #[error("expected {expected} numbers, found {found}")]
    WrongNumberCount { expected: usize, found: usize },
    #[error("malformed number {0:?}")]
    Precision(String),
    #[error("unexpected token {token:?} at {position}")]
    UnexpectedToken { position: usize, token: String },
    #[error("{atoms} atoms but {coords} coordinate triples")]
    AtomCountMismatch { atoms: usize, coords: usize },
    #[error("fractional coordinate {0} outside [0, 1)")]
    CoordinateRange(f64),
    #[error("non-finite lattice value")]
    NonFinite,
    #[error("bad formula {0:?}")]
    Formula(String),
    #[error("POSCAR line {line}: {message}")]
    Poscar { line: usize, message: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{left} prompts but {right} generations")]
    LengthMismatch { left: usize, right: usize },
    #[error("prompt {0} has an empty element set")]
    EmptyPrompt(usize),
    #[error("table {file} line {line}: {message}")]
    Table {
        file: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Element symbols with positive counts, in the order given.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Composition {
    counts: Vec<(String, u32)>,
}

impl Composition {
    /// Symbols must be elements, listed once, with counts of at least one.
    pub fn new<S: AsRef<str>>(
        counts: impl IntoIterator<Item = (S, u32)>,
    ) -> Result<Self, MatError> {
        let c = Self::new_unchecked(counts)?;
        if let Some((s, _)) = c.counts.iter().find(|(s, _)| !elements::is_element(s)) {
            return Err(MatError::UnknownElement(s.clone()));
        }
        Ok(c)
    }

    /// Like `new` but any symbol is accepted, so placeholder compositions
    /// such as `A2B3` can be encoded.
    pub fn new_unchecked<S: AsRef<str>>(
        counts: impl IntoIterator<Item = (S, u32)>,
    ) -> Result<Self, MatError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (s, n) in counts {
            let s = s.as_ref().to_string();
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(MatError::UnknownElement(s));
            }
            if n == 0 {
                return Err(MatError::ZeroCount(s));
            }
            if !seen.insert(s.clone()) {
                return Err(MatError::DuplicateElement(s));
            }
            out.push((s, n));
        }
        if out.is_empty() {
            return Err(MatError::EmptyComposition);
        }
        Ok(Composition { counts: out })
    }

    /// Parses a formula such as `Li4Ti3Mn2Fe3O14`. Repeated elements are
    /// merged at their first position.
    pub fn parse_formula(s: &str) -> Result<Self, MatError> {
        let bad = || MatError::Formula(s.to_string());
        let mut merged: Vec<(String, u32)> = Vec::new();
        let b = s.as_bytes();
        let mut i = 0;
        while i < b.len() {
            if !b[i].is_ascii_uppercase() {
                return Err(bad());
            }
            let mut j = i + 1;
            while j < b.len() && b[j].is_ascii_lowercase() {
                j += 1;
            }
            let sym = &s[i..j];
            let mut k = j;
            while k < b.len() && b[k].is_ascii_digit() {
                k += 1;
            }
            let n: u32 = if k == j {
                1
            } else {
                s[j..k].parse().map_err(|_| bad())?
            };
            match merged.iter_mut().find(|(e, _)| e == sym) {
                Some(e) => e.1 += n,
                None => merged.push((sym.to_string(), n)),
            }
            i = k;
        }
        Self::new(merged)
    }

    pub fn counts(&self) -> &[(String, u32)] {
        &self.counts
    }

    pub fn atom_count(&self) -> usize {
        self.counts.iter().map(|(_, n)| *n as usize).sum()
    }

    pub fn element_set(&self) -> BTreeSet<String> {
        self.counts.iter().map(|(s, _)| s.clone()).collect()
    }

    /// One symbol per atom, in order.
    pub fn flattened(&self) -> Vec<&str> {
        self.counts
            .iter()
            .flat_map(|(s, n)| std::iter::repeat_n(s.as_str(), *n as usize))
            .collect()
    }

    /// Order-independent key: symbols sorted, each followed by its count.
    pub fn canonical_key(&self) -> String {
        let sorted: BTreeMap<&str, u32> =
            self.counts.iter().map(|(s, n)| (s.as_str(), *n)).collect();
        sorted
            .iter()
            .map(|(s, n)| format!("{s}{n}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, n) in &self.counts {
            if *n == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}{n}")?;
            }
        }
        Ok(())
    }
}

/// Key for deduplication and novelty: canonical composition plus space group.
pub fn material_key(c: &Composition, space_group: u8) -> String {
    format!("{} sg{space_group}", c.canonical_key())
}

fn check_space_group(sg: u32) -> Result<u8, MatError> {
    if (1..=230).contains(&sg) {
        Ok(sg as u8)
    } else {
        Err(MatError::BadSpaceGroup(sg))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrystalStructure {
    composition: Composition,
    space_group: u8,
    /// Row-major lattice vectors in Å.
    lattice: [f64; 9],
    /// Fractional coordinates in [0, 1), one triple per flattened atom.
    frac_coords: Vec<[f64; 3]>,
}

impl CrystalStructure {
    pub fn new(
        composition: Composition,
        space_group: u32,
        lattice: [f64; 9],
        frac_coords: Vec<[f64; 3]>,
    ) -> Result<Self, MatError> {
        let space_group = check_space_group(space_group)?;
        if composition.atom_count() != frac_coords.len() {
            return Err(MatError::AtomCountMismatch {
                atoms: composition.atom_count(),
                coords: frac_coords.len(),
            });
        }
        if lattice.iter().any(|x| !x.is_finite()) {
            return Err(MatError::NonFinite);
        }
        for &x in frac_coords.iter().flatten() {
            if !(0.0..1.0).contains(&x) {
                return Err(MatError::CoordinateRange(x));
            }
        }
        Ok(CrystalStructure {
            composition,
            space_group,
            lattice,
            frac_coords,
        })
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn space_group(&self) -> u8 {
        self.space_group
    }

    pub fn lattice(&self) -> &[f64; 9] {
        &self.lattice
    }

    pub fn frac_coords(&self) -> &[[f64; 3]] {
        &self.frac_coords
    }

    /// Every real value replaced by its four-decimal rendering, with
    /// coordinates wrapped as they are on encode.
    pub fn quantized(&self) -> CrystalStructure {
        let q = |x: f64| quantize(x) as f64 / SCALE as f64;
        let w = |x: f64| wrap_coordinate(quantize(x)) as f64 / SCALE as f64;
        CrystalStructure {
            composition: self.composition.clone(),
            space_group: self.space_group,
            lattice: self.lattice.map(q),
            frac_coords: self.frac_coords.iter().map(|c| c.map(w)).collect(),
        }
    }
}

const SCALE: i64 = 10_000;

/// `x` in units of 1e-4, rounded half away from zero.
fn quantize(x: f64) -> i64 {
    (x * SCALE as f64).round() as i64
}

fn wrap_coordinate(q: i64) -> i64 {
    q.rem_euclid(SCALE)
}

fn render_fixed(q: i64) -> String {
    let sign = if q < 0 { "-" } else { "" };
    let a = q.unsigned_abs();
    format!(
        "{sign}{}.{:0width$}",
        a / SCALE as u64,
        a % SCALE as u64,
        width = FRACTION_DIGITS
    )
}

/// Renders a real value with four fraction digits, rounding half away
/// from zero. Zero is never written with a sign.
pub fn format_number(x: f64) -> String {
    render_fixed(quantize(x))
}

/// Like `format_number`, after wrapping into [0, 1).
pub fn format_coordinate(x: f64) -> String {
    render_fixed(wrap_coordinate(quantize(x)))
}

fn push_chars(out: &mut Vec<String>, s: &str) {
    out.extend(s.chars().map(String::from));
}

pub fn encode_composition(c: &Composition, space_group: u32) -> Result<Vec<String>, MatError> {
    let sg = check_space_group(space_group)?;
    let mut out: Vec<String> = c.flattened().into_iter().map(String::from).collect();
    out.push(SpecialToken::SpaceGroup(sg).render());
    Ok(out)
}

fn space_group_token(t: &str) -> Option<u8> {
    match SpecialToken::parse(t) {
        Some(SpecialToken::SpaceGroup(n)) => Some(n),
        _ => None,
    }
}

/// Counts element tokens in order of first appearance; they need not be
/// contiguous. The space-group token must come last, optionally preceded
/// by `<sg>`.
pub fn decode_composition<S: AsRef<str>>(tokens: &[S]) -> Result<(Composition, u8), MatError> {
    let Some(sg_pos) = tokens
        .iter()
        .position(|t| space_group_token(t.as_ref()).is_some())
    else {
        return Err(MatError::NoSpaceGroup);
    };
    if let Some(extra) = tokens.get(sg_pos + 1) {
        return Err(MatError::UnexpectedToken {
            position: sg_pos + 1,
            token: extra.as_ref().to_string(),
        });
    }
    let sg = space_group_token(tokens[sg_pos].as_ref()).expect("found above");
    let mut elems = &tokens[..sg_pos];
    if elems
        .last()
        .is_some_and(|t| t.as_ref() == SpecialToken::Sg.render())
    {
        elems = &elems[..elems.len() - 1];
    }
    let mut counts: Vec<(String, u32)> = Vec::new();
    for t in elems {
        let t = t.as_ref();
        if !elements::is_element(t) {
            return Err(MatError::UnknownElement(t.to_string()));
        }
        match counts.iter_mut().find(|(s, _)| s == t) {
            Some(e) => e.1 += 1,
            None => counts.push((t.to_string(), 1)),
        }
    }
    Ok((Composition::new(counts)?, sg))
}

pub fn encode_structure(s: &CrystalStructure) -> Vec<String> {
    let mut out: Vec<String> = s
        .composition
        .flattened()
        .into_iter()
        .map(String::from)
        .collect();
    out.push(SpecialToken::Sg.render());
    out.push(SpecialToken::SpaceGroup(s.space_group).render());
    out.push(SpecialToken::Coord.render());
    for &x in &s.lattice {
        push_chars(&mut out, &format_number(x));
    }
    for &x in s.frac_coords.iter().flatten() {
        push_chars(&mut out, &format_coordinate(x));
    }
    out
}

/// Groups number-character tokens into numbers of the form
/// `-?digits.dddd`.
fn read_numbers<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<f64>, MatError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let start = i;
        let mut text = String::new();
        let t = |k: usize| tokens.get(k).map(|t| t.as_ref());
        if t(i) == Some("-") {
            text.push('-');
            i += 1;
        }
        let int_start = i;
        while let Some(d) = t(i).filter(|d| d.len() == 1 && d.as_bytes()[0].is_ascii_digit()) {
            text.push_str(d);
            i += 1;
        }
        match t(i) {
            _ if i == int_start && i < tokens.len() => {
                return Err(MatError::Precision(
                    tokens[start..=i].iter().map(|t| t.as_ref()).collect(),
                ))
            }
            Some(".") => {
                text.push('.');
                i += 1;
            }
            None => {
                return Err(MatError::WrongNumberCount {
                    expected: out.len() + 1,
                    found: out.len(),
                })
            }
            Some(_) => return Err(MatError::Precision(text)),
        }
        for _ in 0..FRACTION_DIGITS {
            match t(i) {
                Some(d) if d.len() == 1 && d.as_bytes()[0].is_ascii_digit() => {
                    text.push_str(d);
                    i += 1;
                }
                None => {
                    return Err(MatError::WrongNumberCount {
                        expected: out.len() + 1,
                        found: out.len(),
                    })
                }
                Some(_) => return Err(MatError::Precision(text)),
            }
        }
        out.push(
            text.parse::<f64>()
                .map_err(|_| MatError::Precision(text.clone()))?,
        );
    }
    Ok(out)
}

pub fn decode_structure<S: AsRef<str>>(tokens: &[S]) -> Result<CrystalStructure, MatError> {
    let sg_marker = SpecialToken::Sg.render();
    let coord = SpecialToken::Coord.render();
    let Some(mark) = tokens.iter().position(|t| t.as_ref() == sg_marker) else {
        return Err(MatError::NoSpaceGroup);
    };
    let sg = tokens
        .get(mark + 1)
        .and_then(|t| space_group_token(t.as_ref()))
        .ok_or(MatError::NoSpaceGroup)?;
    match tokens.get(mark + 2) {
        Some(t) if t.as_ref() == coord => {}
        other => {
            return Err(MatError::UnexpectedToken {
                position: mark + 2,
                token: other.map_or(String::new(), |t| t.as_ref().to_string()),
            })
        }
    }
    let mut counts: Vec<(String, u32)> = Vec::new();
    for t in &tokens[..mark] {
        let t = t.as_ref();
        if !elements::is_element(t) {
            return Err(MatError::UnknownElement(t.to_string()));
        }
        match counts.iter_mut().find(|(s, _)| s == t) {
            Some(e) => e.1 += 1,
            None => counts.push((t.to_string(), 1)),
        }
    }
    let composition = Composition::new(counts)?;
    let body = &tokens[mark + 3..];
    if let Some((k, t)) = body
        .iter()
        .enumerate()
        .find(|(_, t)| !is_number_char(t.as_ref()))
    {
        return Err(MatError::UnexpectedToken {
            position: mark + 3 + k,
            token: t.as_ref().to_string(),
        });
    }
    let numbers = read_numbers(body)?;
    let n = composition.atom_count();
    if numbers.len() != 9 + 3 * n {
        return Err(MatError::WrongNumberCount {
            expected: 9 + 3 * n,
            found: numbers.len(),
        });
    }
    let mut lattice = [0.0; 9];
    lattice.copy_from_slice(&numbers[..9]);
    let coords = numbers[9..]
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    CrystalStructure::new(composition, sg as u32, lattice, coords)
}

/// Mean over records of the share of prompt elements present in the
/// generated element set.
pub fn composition_precision(
    prompts: &[BTreeSet<String>],
    generated: &[BTreeSet<String>],
) -> Result<f64, MatError> {
    if prompts.len() != generated.len() {
        return Err(MatError::LengthMismatch {
            left: prompts.len(),
            right: generated.len(),
        });
    }
    if prompts.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (i, (p, g)) in prompts.iter().zip(generated).enumerate() {
        if p.is_empty() {
            return Err(MatError::EmptyPrompt(i));
        }
        total += p.intersection(g).count() as f64 / p.len() as f64;
    }
    Ok(total / prompts.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tok::{render_material, tokenize_material};

    fn comp(pairs: &[(&str, u32)]) -> Composition {
        Composition::new(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn placeholder_composition_form() {
        let c = Composition::new_unchecked([("A", 2), ("B", 3)]).unwrap();
        assert_eq!(
            encode_composition(&c, 123).unwrap().join(" "),
            "A A B B B <sg123>"
        );
        assert!(Composition::new([("A", 2)]).is_err());
        assert!(matches!(
            encode_composition(&c, 231),
            Err(MatError::BadSpaceGroup(231))
        ));
    }

    #[test]
    fn composition_round_trip() {
        let c = comp(&[("Li", 4), ("Ti", 3), ("Mn", 2), ("Fe", 3), ("O", 14)]);
        let t = encode_composition(&c, 8).unwrap();
        assert_eq!(t.len(), 27);
        assert_eq!(&t[..5], ["Li", "Li", "Li", "Li", "Ti"]);
        assert_eq!(t[26], "<sg8>");
        assert_eq!(decode_composition(&t).unwrap(), (c, 8));
    }

    #[test]
    fn decode_counts_non_contiguous() {
        let (c, sg) = decode_composition(&["Se", "Se", "Pd", "Sc", "<sg164>"]).unwrap();
        assert_eq!(c, comp(&[("Se", 2), ("Pd", 1), ("Sc", 1)]));
        assert_eq!(sg, 164);
        let (c, _) = decode_composition(&["O", "Fe", "O", "<sg>", "<sg2>"]).unwrap();
        assert_eq!(c, comp(&[("O", 2), ("Fe", 1)]));
        assert!(matches!(
            decode_composition(&["A", "A"]),
            Err(MatError::NoSpaceGroup)
        ));
        assert!(matches!(
            decode_composition(&["Xx", "<sg2>"]),
            Err(MatError::UnknownElement(_))
        ));
        assert!(decode_composition(&["O", "<sg2>", "O"]).is_err());
    }

    #[test]
    fn number_rendering() {
        assert_eq!(format_number(7.183_124_756_103_359), "7.1831");
        assert_eq!(format_number(-1.4245311887791383), "-1.4245");
        assert_eq!(format_number(-0.00004), "0.0000");
        assert_eq!(format_number(0.00005), "0.0001");
        assert_eq!(format_number(-0.00005), "-0.0001");
        assert_eq!(format_number(2.5), "2.5000");
        assert_eq!(format_coordinate(0.99996), "0.0000");
        assert_eq!(format_coordinate(-0.25), "0.7500");
        assert_eq!(format_coordinate(0.6666666666666643), "0.6667");
    }

    #[test]
    fn unit_cell_structure() {
        let s = CrystalStructure::new(
            comp(&[("Po", 1)]),
            221,
            [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            vec![[0.0; 3]],
        )
        .unwrap();
        let t = encode_structure(&s);
        assert_eq!(
            render_material(&t),
            "Po <sg> <sg221> <coord> 1.0000 0.0000 0.0000 0.0000 1.0000 0.0000 0.0000 0.0000 1.0000 \
             0.0000 0.0000 0.0000"
        );
        assert_eq!(decode_structure(&t).unwrap(), s);
        let again = tokenize_material(&render_material(&t)).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn structure_decode_errors() {
        let s = CrystalStructure::new(comp(&[("Po", 1)]), 1, [1.0; 9], vec![[0.5; 3]]).unwrap();
        let t = encode_structure(&s);
        assert!(matches!(
            decode_structure(&t[..t.len() - 2]),
            Err(MatError::WrongNumberCount { .. })
        ));
        assert!(matches!(
            decode_structure(&t[..t.len() - 6]),
            Err(MatError::WrongNumberCount {
                expected: 12,
                found: 11
            })
        ));
        let mut bad = t.clone();
        let dot = bad.iter().rposition(|x| x == ".").unwrap();
        bad[dot] = "5".into();
        assert!(decode_structure(&bad).is_err());
        assert!(matches!(
            decode_structure(&t[..3]),
            Err(MatError::UnexpectedToken { .. })
        ));
    }

    #[test]
    fn structure_invariants() {
        assert!(matches!(
            CrystalStructure::new(comp(&[("Po", 2)]), 1, [1.0; 9], vec![[0.0; 3]]),
            Err(MatError::AtomCountMismatch {
                atoms: 2,
                coords: 1
            })
        ));
        assert!(CrystalStructure::new(comp(&[("Po", 1)]), 0, [1.0; 9], vec![[0.0; 3]]).is_err());
        assert!(
            CrystalStructure::new(comp(&[("Po", 1)]), 1, [1.0; 9], vec![[1.0, 0.0, 0.0]]).is_err()
        );
    }

    #[test]
    fn formulas_and_keys() {
        let c = Composition::parse_formula("Li4Ti3Mn2Fe3O14").unwrap();
        assert_eq!(c.atom_count(), 26);
        assert_eq!(c.to_string(), "Li4Ti3Mn2Fe3O14");
        let d = Composition::parse_formula("O14Fe3Mn2Ti3Li4").unwrap();
        assert_eq!(c.canonical_key(), d.canonical_key());
        assert_eq!(material_key(&c, 8), "Fe3 Li4 Mn2 O14 Ti3 sg8");
        assert_eq!(Composition::parse_formula("NaCl").unwrap().atom_count(), 2);
        assert!(Composition::parse_formula("na").is_err());
        assert!(Composition::parse_formula("Qq2").is_err());
    }

    #[test]
    fn precision_metric() {
        let set = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<BTreeSet<_>>();
        let p = set(&["Li", "Ti", "Mn", "Fe", "O"]);
        assert_eq!(
            composition_precision(std::slice::from_ref(&p), std::slice::from_ref(&p)).unwrap(),
            1.0
        );
        let v = composition_precision(std::slice::from_ref(&p), &[set(&["Li", "O"])]).unwrap();
        assert!((v - 0.4).abs() < 1e-12);
        assert_eq!(
            composition_precision(std::slice::from_ref(&p), &[set(&[])]).unwrap(),
            0.0
        );
        assert!(composition_precision(&[p], &[]).is_err());
    }
}
