use super::{BondOrder, Element, MolecularGraph, B, C, H, N, O};

const P: u8 = 15;
const S: u8 = 16;
const F: u8 = 9;
const CL: u8 = 17;
const BR: u8 = 35;
const I: u8 = 53;

/// Allowed total valences for an element at a formal charge. `None` means
/// the atom is not checked: wildcards, elements outside the organic subset,
/// and charges of magnitude two or more.
pub fn allowed_valences(element: Element, charge: i8) -> Option<&'static [u8]> {
    let Element::Atomic(z) = element else {
        return None;
    };
    let v: &'static [u8] = match (z, charge) {
        (H, 0) => &[1],
        (H, 1 | -1) => &[0],
        (B, 0) => &[3],
        (B, -1) => &[4],
        (B, 1) => &[2],
        (C, 0) => &[4],
        (C, 1 | -1) => &[3],
        (N | P, 0) => &[3, 5],
        (N | P, 1) => &[4],
        (N | P, -1) => &[2],
        (O, 0) => &[2],
        (O, 1) => &[3],
        (O, -1) => &[1],
        (S, 0) => &[2, 4, 6],
        (S, 1) => &[3, 5],
        (S, -1) => &[1, 3, 5],
        (F | CL | BR, 0) => &[1],
        (I, 0) => &[1, 3, 5],
        (F | CL | BR | I, 1) => &[2],
        (F | CL | BR | I, -1) => &[0],
        _ => return None,
    };
    Some(v)
}

/// Sum of bond valences with aromatic bonds counted as one.
pub(crate) fn bond_sum(g: &MolecularGraph, atom: usize) -> u32 {
    g.neighbors(atom)
        .iter()
        .map(|&(_, b)| g.bonds()[b].order.valence() as u32)
        .sum()
}

/// Whether an aromatic atom carries an implied extra bond into its
/// pi system: true for aromatic carbon with no explicit double or triple
/// bond.
pub(crate) fn aromatic_pi_bond(g: &MolecularGraph, atom: usize) -> bool {
    let a = &g.atoms()[atom];
    a.aromatic
        && a.element.is(C)
        && !g
            .neighbors(atom)
            .iter()
            .any(|&(_, b)| matches!(g.bonds()[b].order, BondOrder::Double | BondOrder::Triple))
}

/// Valence used by the validity check: bonds, all attached hydrogens, and
/// the pi bond of an aromatic carbon.
pub(crate) fn effective_valence(g: &MolecularGraph, atom: usize) -> u32 {
    bond_sum(g, atom) + g.atoms()[atom].hydrogens as u32 + aromatic_pi_bond(g, atom) as u32
}

/// Hydrogens implied for an atom written without brackets.
///
/// Aliphatic atoms take the lowest allowed valence that covers the bond
/// sum. Aromatic carbon fills up to three sigma bonds; other aromatic
/// atoms get none and must be written as `[nH]` and so on.
pub fn implicit_hydrogens(g: &MolecularGraph, atom: usize) -> u8 {
    let a = &g.atoms()[atom];
    let base = bond_sum(g, atom);
    if a.aromatic {
        return if a.element.is(C) {
            3u32.saturating_sub(base) as u8
        } else {
            0
        };
    }
    let Some(allowed) = allowed_valences(a.element, a.charge) else {
        return 0;
    };
    allowed
        .iter()
        .find(|&&v| v as u32 >= base)
        .map_or(0, |&v| (v as u32 - base) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    fn hs(s: &str) -> Vec<u8> {
        parse_smiles(s)
            .unwrap()
            .atoms()
            .iter()
            .map(|a| a.hydrogens)
            .collect()
    }

    #[test]
    fn table_lookups() {
        let el = |s| Element::from_symbol(s).unwrap();
        assert_eq!(allowed_valences(el("N"), 1), Some(&[4u8][..]));
        assert_eq!(allowed_valences(el("S"), 0), Some(&[2u8, 4, 6][..]));
        assert_eq!(allowed_valences(el("Cl"), -1), Some(&[0u8][..]));
        assert_eq!(allowed_valences(el("Fe"), 2), None);
        assert_eq!(allowed_valences(el("O"), -2), None);
        assert_eq!(allowed_valences(Element::Wildcard, 0), None);
    }

    #[test]
    fn implicit_counts() {
        assert_eq!(hs("C"), [4]);
        assert_eq!(hs("C=C"), [2, 2]);
        assert_eq!(hs("C#N"), [1, 0]);
        assert_eq!(hs("CS(=O)(=O)C"), [3, 0, 0, 0, 3]);
        assert_eq!(hs("CP(C)(C)(C)C"), [3, 0, 3, 3, 3, 3]);
        assert_eq!(hs("c1cc2ccccc2cc1")[2], 0);
        assert_eq!(hs("Cc1ccccc1")[1], 0);
        assert_eq!(hs("c1cc[nH]c1")[3], 1);
        // Bond sum beyond the table leaves no hydrogens.
        assert_eq!(hs("C(C)(C)(C)(C)C")[0], 0);
    }
}
