use std::collections::{BTreeMap, HashSet};
use std::fmt;

use super::{valence, Atom, Bond, BondOrder, Element, MolecularGraph};
use crate::elements;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ParseErrorKind {
    Syntax,
    UnclosedRing,
    UnbalancedBranch,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at offset {}: {}",
            self.kind, self.offset, self.message
        )
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        offset,
        message: message.into(),
    }
}

#[derive(Clone, Copy)]
struct PendingBond {
    order: BondOrder,
    direction: Option<char>,
}

struct OpenRing {
    atom: usize,
    bond: Option<PendingBond>,
    offset: usize,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    bonded: HashSet<(usize, usize)>,
    prev: Option<usize>,
    pending: Option<(PendingBond, usize)>,
    branches: Vec<(Option<usize>, usize, bool)>,
    rings: BTreeMap<u16, OpenRing>,
}

/// Parses SMILES into a molecular graph. Hydrogen counts of atoms written
/// without brackets come from the valence model.
pub fn parse_smiles(s: &str) -> Result<MolecularGraph, ParseError> {
    if s.is_empty() {
        return Err(syntax(0, "empty SMILES"));
    }
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        bonds: Vec::new(),
        bonded: HashSet::new(),
        prev: None,
        pending: None,
        branches: Vec::new(),
        rings: BTreeMap::new(),
    };
    p.run()?;
    let mut g = MolecularGraph::from_parts(p.atoms, p.bonds);
    let mut maps = HashSet::new();
    for ap in g.attachment_points() {
        if !maps.insert(ap.map_number) {
            return Err(syntax(
                0,
                format!("attachment map number {} repeated", ap.map_number),
            ));
        }
    }
    for i in 0..g.atom_count() {
        if !g.atoms[i].bracket {
            g.atoms[i].hydrogens = valence::implicit_hydrogens(&g, i);
        }
    }
    Ok(g)
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn run(&mut self) -> Result<(), ParseError> {
        while let Some(c) = self.peek() {
            let at = self.pos;
            match c {
                b'[' => {
                    let atom = self.bracket_atom()?;
                    self.add_atom(atom, at)?;
                }
                b'*' | b'A'..=b'Z' | b'a'..=b'z' => {
                    let atom = self.organic_atom()?;
                    self.add_atom(atom, at)?;
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                    if self.pending.is_some() {
                        return Err(syntax(at, "two bond symbols in a row"));
                    }
                    if self.prev.is_none() {
                        return Err(syntax(at, "bond symbol without a preceding atom"));
                    }
                    let (order, direction) = match c {
                        b'-' => (BondOrder::Single, None),
                        b'=' => (BondOrder::Double, None),
                        b'#' => (BondOrder::Triple, None),
                        b':' => (BondOrder::Aromatic, None),
                        d => (BondOrder::Single, Some(d as char)),
                    };
                    self.pending = Some((PendingBond { order, direction }, at));
                    self.pos += 1;
                }
                b'$' | b'~' => return Err(syntax(at, "unsupported bond symbol")),
                b'(' => {
                    if self.pending.is_some() {
                        return Err(syntax(at, "bond symbol before branch"));
                    }
                    if self.prev.is_none() {
                        return Err(syntax(at, "branch without a preceding atom"));
                    }
                    self.branches.push((self.prev, at, false));
                    self.pos += 1;
                }
                b')' => {
                    if let Some((_, off)) = self.pending {
                        return Err(syntax(off, "dangling bond symbol"));
                    }
                    let Some((prev, _, had_atom)) = self.branches.pop() else {
                        return Err(ParseError {
                            kind: ParseErrorKind::UnbalancedBranch,
                            offset: at,
                            message: "unmatched ')'".into(),
                        });
                    };
                    if !had_atom {
                        return Err(syntax(at, "empty branch"));
                    }
                    self.prev = prev;
                    self.pos += 1;
                }
                b'0'..=b'9' | b'%' => {
                    let label = self.ring_label()?;
                    self.ring_bond(label, at)?;
                }
                b'.' => {
                    if let Some((_, off)) = self.pending {
                        return Err(syntax(off, "dangling bond symbol"));
                    }
                    if self.prev.is_none() {
                        return Err(syntax(at, "'.' without a preceding atom"));
                    }
                    self.prev = None;
                    self.pos += 1;
                }
                _ => return Err(syntax(at, format!("unexpected character {:?}", c as char))),
            }
        }
        if let Some((_, off)) = self.pending {
            return Err(syntax(off, "dangling bond symbol"));
        }
        if let Some(&(_, off, _)) = self.branches.first() {
            return Err(ParseError {
                kind: ParseErrorKind::UnbalancedBranch,
                offset: off,
                message: "unclosed '('".into(),
            });
        }
        if let Some(r) = self.rings.values().min_by_key(|r| r.offset) {
            return Err(ParseError {
                kind: ParseErrorKind::UnclosedRing,
                offset: r.offset,
                message: "ring bond never closed".into(),
            });
        }
        if self.atoms.is_empty() {
            return Err(syntax(0, "no atoms"));
        }
        Ok(())
    }

    fn add_atom(&mut self, atom: Atom, at: usize) -> Result<(), ParseError> {
        let idx = self.atoms.len();
        self.atoms.push(atom);
        if let Some(prev) = self.prev {
            let pending = self.pending.take().map(|(b, _)| b);
            self.push_bond(prev, idx, pending, at)?;
        } else if let Some((_, off)) = self.pending {
            return Err(syntax(off, "bond symbol without a preceding atom"));
        }
        if let Some(top) = self.branches.last_mut() {
            top.2 = true;
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn push_bond(
        &mut self,
        a: usize,
        b: usize,
        explicit: Option<PendingBond>,
        at: usize,
    ) -> Result<(), ParseError> {
        if a == b {
            return Err(syntax(at, "atom bonded to itself"));
        }
        let key = (a.min(b), a.max(b));
        if !self.bonded.insert(key) {
            return Err(syntax(at, "duplicate bond between the same atoms"));
        }
        let (order, direction) = match explicit {
            Some(p) => (p.order, p.direction),
            None if self.atoms[a].aromatic && self.atoms[b].aromatic => (BondOrder::Aromatic, None),
            None => (BondOrder::Single, None),
        };
        self.bonds.push(Bond {
            a,
            b,
            order,
            direction,
        });
        Ok(())
    }

    fn ring_label(&mut self) -> Result<u16, ParseError> {
        let at = self.pos;
        if self.peek() == Some(b'%') {
            let d = self
                .s
                .get(at + 1..at + 3)
                .filter(|d| d.iter().all(u8::is_ascii_digit));
            let Some(d) = d else {
                return Err(syntax(at, "'%' must be followed by two digits"));
            };
            self.pos += 3;
            Ok(((d[0] - b'0') * 10 + (d[1] - b'0')) as u16)
        } else {
            self.pos += 1;
            Ok((self.s[at] - b'0') as u16)
        }
    }

    fn ring_bond(&mut self, label: u16, at: usize) -> Result<(), ParseError> {
        let Some(prev) = self.prev else {
            return Err(syntax(at, "ring bond without a preceding atom"));
        };
        let pending = self.pending.take().map(|(b, _)| b);
        match self.rings.remove(&label) {
            Some(open) => {
                let bond = match (open.bond, pending) {
                    (Some(x), Some(y)) if x.order != y.order => {
                        return Err(syntax(at, "ring bond symbols disagree"))
                    }
                    (Some(x), _) => Some(x),
                    (None, y) => y,
                };
                self.push_bond(open.atom, prev, bond, at)
            }
            None => {
                self.rings.insert(
                    label,
                    OpenRing {
                        atom: prev,
                        bond: pending,
                        offset: at,
                    },
                );
                Ok(())
            }
        }
    }

    fn organic_atom(&mut self) -> Result<Atom, ParseError> {
        let at = self.pos;
        let rest = &self.s[at..];
        let (sym, aromatic, len): (&str, bool, usize) = match rest {
            [b'C', b'l', ..] => ("Cl", false, 2),
            [b'B', b'r', ..] => ("Br", false, 2),
            [b'*', ..] => ("*", false, 1),
            [c @ (b'B' | b'C' | b'N' | b'O' | b'P' | b'S' | b'F' | b'I'), ..] => {
                (organic_symbol(*c), false, 1)
            }
            [c @ (b'b' | b'c' | b'n' | b'o' | b'p' | b's'), ..] => {
                (organic_symbol(c.to_ascii_uppercase()), true, 1)
            }
            _ => {
                return Err(syntax(
                    at,
                    format!("{:?} is not an organic-subset atom", rest[0] as char),
                ))
            }
        };
        self.pos += len;
        Ok(Atom {
            element: Element::from_symbol(sym).expect("organic subset symbols are elements"),
            aromatic,
            charge: 0,
            hydrogens: 0,
            isotope: None,
            class: None,
            chirality: None,
            bracket: false,
        })
    }

    fn digits(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn bracket_atom(&mut self) -> Result<Atom, ParseError> {
        let open = self.pos;
        self.pos += 1;
        let isotope = match self.digits() {
            Some(n) if n > u16::MAX as u32 => return Err(syntax(open, "isotope out of range")),
            other => other.map(|n| n as u16),
        };
        let sym_at = self.pos;
        let rest = &self.s[sym_at..];
        let (element, aromatic, len) = match rest {
            [b'*', ..] => (Element::Wildcard, false, 1),
            [a @ b'a'..=b'z', b @ b'a'..=b'z', ..]
                if matches!(&[*a, *b], b"se" | b"as" | b"te") =>
            {
                let sym = format!("{}{}", a.to_ascii_uppercase() as char, *b as char);
                (
                    Element::from_symbol(&sym).expect("aromatic symbols are elements"),
                    true,
                    2,
                )
            }
            [a @ (b'b' | b'c' | b'n' | b'o' | b'p' | b's'), ..] => {
                let sym = (a.to_ascii_uppercase() as char).to_string();
                (
                    Element::from_symbol(&sym).expect("aromatic symbols are elements"),
                    true,
                    1,
                )
            }
            [a @ b'A'..=b'Z', b @ b'a'..=b'z', ..]
                if elements::is_element(&format!("{}{}", *a as char, *b as char)) =>
            {
                let sym = format!("{}{}", *a as char, *b as char);
                (Element::from_symbol(&sym).expect("checked"), false, 2)
            }
            [a @ b'A'..=b'Z', ..] if elements::is_element(&(*a as char).to_string()) => (
                Element::from_symbol(&(*a as char).to_string()).expect("checked"),
                false,
                1,
            ),
            _ => return Err(syntax(sym_at, "bad element symbol in bracket atom")),
        };
        self.pos += len;

        let mut chirality = None;
        if self.peek() == Some(b'@') {
            let start = self.pos;
            self.pos += 1;
            if self.peek() == Some(b'@') {
                self.pos += 1;
            } else if let Some(tag) = self.s.get(self.pos..self.pos + 2) {
                if matches!(tag, b"TH" | b"AL" | b"SP" | b"TB" | b"OH") {
                    self.pos += 2;
                    if self.digits().is_none() {
                        return Err(syntax(start, "chirality class needs a number"));
                    }
                }
            }
            chirality = Some(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned());
        }

        let mut hydrogens = 0u8;
        if self.peek() == Some(b'H') {
            self.pos += 1;
            hydrogens = match self.digits() {
                Some(n) if n > 9 => return Err(syntax(self.pos, "hydrogen count too large")),
                Some(n) => n as u8,
                None => 1,
            };
        }

        let mut charge: i32 = 0;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            let unit = if sign == b'+' { 1 } else { -1 };
            self.pos += 1;
            if let Some(n) = self.digits() {
                charge = unit * n as i32;
            } else {
                charge = unit;
                while self.peek() == Some(sign) {
                    self.pos += 1;
                    charge += unit;
                }
            }
            if charge.abs() > 15 {
                return Err(syntax(open, "charge out of range"));
            }
        }

        let mut class = None;
        if self.peek() == Some(b':') {
            self.pos += 1;
            match self.digits() {
                Some(n) if n <= u16::MAX as u32 => class = Some(n as u16),
                _ => return Err(syntax(self.pos, "atom class must be a number")),
            }
        }

        if self.peek() != Some(b']') {
            return Err(syntax(
                self.pos.min(self.s.len()),
                "unterminated bracket atom",
            ));
        }
        self.pos += 1;
        Ok(Atom {
            element,
            aromatic,
            charge: charge as i8,
            hydrogens,
            isotope,
            class,
            chirality,
            bracket: true,
        })
    }
}

fn organic_symbol(c: u8) -> &'static str {
    match c {
        b'B' => "B",
        b'C' => "C",
        b'N' => "N",
        b'O' => "O",
        b'P' => "P",
        b'S' => "S",
        b'F' => "F",
        b'I' => "I",
        _ => unreachable!("caller matched the organic subset"),
    }
}
