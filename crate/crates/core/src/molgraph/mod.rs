//! SMILES parsing, validity checking, canonical SMILES and graph-derived
//! descriptors.
//!
//! Aromaticity is taken from the input: lowercase atoms are aromatic and
//! must lie on a ring. There is no kekulization or aromaticity perception.
//! Stereo markers are parsed and kept on the graph but play no part in
//! canonicalization.

mod canon;
mod descriptors;
mod parse;
mod rings;
mod valence;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use canon::canonical_form;
pub use descriptors::{descriptors, Descriptors};
pub use parse::{parse_smiles, ParseError, ParseErrorKind};
pub use valence::{allowed_valences, implicit_hydrogens};
pub use validate::{validate, Failure, FailureCode, ValidityReport};

use crate::elements;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    /// `*`
    Wildcard,
    /// Atomic number.
    Atomic(u8),
}

impl Element {
    pub fn from_symbol(s: &str) -> Option<Element> {
        if s == "*" {
            return Some(Element::Wildcard);
        }
        elements::atomic_number(s).map(Element::Atomic)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Element::Wildcard => "*",
            Element::Atomic(z) => elements::symbol(z).unwrap_or("?"),
        }
    }

    pub fn atomic_number(self) -> u8 {
        match self {
            Element::Wildcard => 0,
            Element::Atomic(z) => z,
        }
    }

    pub fn is(self, z: u8) -> bool {
        self == Element::Atomic(z)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

pub(crate) const H: u8 = 1;
pub(crate) const B: u8 = 5;
pub(crate) const C: u8 = 6;
pub(crate) const N: u8 = 7;
pub(crate) const O: u8 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub element: Element,
    pub aromatic: bool,
    pub charge: i8,
    /// Attached hydrogens not present as graph atoms: the bracket count, or
    /// the valence-model count for atoms written without brackets.
    pub hydrogens: u8,
    pub isotope: Option<u16>,
    /// Atom class (`:n` inside brackets).
    pub class: Option<u16>,
    /// Chirality marker as written (`@`, `@@`, `@TH1`, ...).
    pub chirality: Option<String>,
    /// Whether the atom was written in brackets.
    pub bracket: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Valence contribution with aromatic bonds counted as one.
    pub fn valence(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    /// `/` or `\` when written with a directional single bond.
    pub direction: Option<char>,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

/// `[*:n]` attachment point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachmentPoint {
    pub atom: usize,
    pub map_number: u16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolecularGraph {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    /// Per atom: (neighbor, bond index).
    adjacency: Vec<Vec<(usize, usize)>>,
    attachment_points: Vec<AttachmentPoint>,
}

impl MolecularGraph {
    pub(crate) fn from_parts(atoms: Vec<Atom>, bonds: Vec<Bond>) -> MolecularGraph {
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (i, b) in bonds.iter().enumerate() {
            adjacency[b.a].push((b.b, i));
            adjacency[b.b].push((b.a, i));
        }
        let attachment_points = atoms
            .iter()
            .enumerate()
            .filter_map(|(i, a)| match (a.element, a.class) {
                (Element::Wildcard, Some(n)) => Some(AttachmentPoint {
                    atom: i,
                    map_number: n,
                }),
                _ => None,
            })
            .collect();
        MolecularGraph {
            atoms,
            bonds,
            adjacency,
            attachment_points,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    pub fn attachment_points(&self) -> &[AttachmentPoint] {
        &self.attachment_points
    }

    /// (neighbor, bond index) pairs.
    pub fn neighbors(&self, atom: usize) -> &[(usize, usize)] {
        &self.adjacency[atom]
    }

    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<&Bond> {
        self.adjacency[a]
            .iter()
            .find(|(n, _)| *n == b)
            .map(|(_, i)| &self.bonds[*i])
    }

    /// Hydrogens on an atom, counting both the implicit/bracket count and
    /// explicit hydrogen atoms bonded to it.
    pub fn total_hydrogens(&self, atom: usize) -> usize {
        self.atoms[atom].hydrogens as usize
            + self.adjacency[atom]
                .iter()
                .filter(|(n, _)| self.atoms[*n].element.is(H))
                .count()
    }

    /// Bond index → lies on a cycle.
    pub fn ring_bonds(&self) -> Vec<bool> {
        rings::ring_bonds(self)
    }

    /// Atom index → lies on a cycle.
    pub fn ring_atoms(&self) -> Vec<bool> {
        let rb = self.ring_bonds();
        (0..self.atoms.len())
            .map(|i| self.adjacency[i].iter().any(|(_, b)| rb[*b]))
            .collect()
    }

    /// Connected components as atom index lists, each ascending, ordered by
    /// their smallest atom index.
    pub fn component_atoms(&self) -> Vec<Vec<usize>> {
        let n = self.atoms.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &(w, _) in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `atoms`, renumbered in the given order.
    pub fn subgraph(&self, atoms: &[usize]) -> MolecularGraph {
        let mut map = vec![usize::MAX; self.atoms.len()];
        for (new, &old) in atoms.iter().enumerate() {
            map[old] = new;
        }
        let new_atoms = atoms.iter().map(|&i| self.atoms[i].clone()).collect();
        let new_bonds = self
            .bonds
            .iter()
            .filter(|b| map[b.a] != usize::MAX && map[b.b] != usize::MAX)
            .map(|b| Bond {
                a: map[b.a],
                b: map[b.b],
                order: b.order,
                direction: b.direction,
            })
            .collect();
        MolecularGraph::from_parts(new_atoms, new_bonds)
    }

    /// Same graph with atoms renumbered: new atom `i` is old atom
    /// `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> MolecularGraph {
        assert_eq!(order.len(), self.atoms.len(), "order must be a permutation");
        self.subgraph(order)
    }
}

/// Connected components in the order their canonical SMILES appear in the
/// canonical form of the whole graph.
pub fn split_components(g: &MolecularGraph) -> Vec<MolecularGraph> {
    let mut comps: Vec<(String, MolecularGraph)> = g
        .component_atoms()
        .into_iter()
        .map(|atoms| {
            let sub = g.subgraph(&atoms);
            (canonical_form(&sub), sub)
        })
        .collect();
    comps.sort_by(|a, b| canon::writing_order(&a.0, &b.0));
    comps.into_iter().map(|(_, g)| g).collect()
}
