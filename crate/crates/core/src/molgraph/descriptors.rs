use serde::{Deserialize, Serialize};

use super::{BondOrder, Element, MolecularGraph, C, H, N, O};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptors {
    pub hbd: usize,
    pub hba: usize,
    pub rot_bonds: usize,
    pub fsp3: f64,
    pub heavy_atoms: usize,
    pub components: usize,
}

fn is_heavy(e: Element) -> bool {
    !matches!(e, Element::Wildcard) && !e.is(H)
}

fn heavy_degree(g: &MolecularGraph, atom: usize) -> usize {
    g.neighbors(atom)
        .iter()
        .filter(|&&(w, _)| !g.atoms()[w].element.is(H))
        .count()
}

/// Carbonyl carbon: a carbon with a double bond to oxygen.
fn is_carbonyl_carbon(g: &MolecularGraph, atom: usize) -> bool {
    g.atoms()[atom].element.is(C)
        && g.neighbors(atom)
            .iter()
            .any(|&(w, b)| g.atoms()[w].element.is(O) && g.bonds()[b].order == BondOrder::Double)
}

/// Graph-derived descriptors.
///
/// * `hbd`: N and O atoms carrying at least one hydrogen.
/// * `hba`: N and O atoms.
/// * `rot_bonds`: acyclic single bonds between heavy atoms that both have at
///   least two heavy neighbors, not counting amide C–N bonds.
/// * `fsp3`: non-aromatic carbons with four single bonds (hydrogens
///   included) over all carbons; zero when there are no carbons.
pub fn descriptors(g: &MolecularGraph) -> Descriptors {
    let atoms = g.atoms();
    let no = |i: usize| atoms[i].element.is(N) || atoms[i].element.is(O);
    let hbd = (0..atoms.len())
        .filter(|&i| no(i) && g.total_hydrogens(i) > 0)
        .count();
    let hba = (0..atoms.len()).filter(|&i| no(i)).count();

    let ring = g.ring_bonds();
    let rot_bonds = g
        .bonds()
        .iter()
        .enumerate()
        .filter(|&(bi, b)| {
            if b.order != BondOrder::Single || ring[bi] {
                return false;
            }
            if !is_heavy(atoms[b.a].element) || !is_heavy(atoms[b.b].element) {
                return false;
            }
            if heavy_degree(g, b.a) < 2 || heavy_degree(g, b.b) < 2 {
                return false;
            }
            let amide = (is_carbonyl_carbon(g, b.a) && atoms[b.b].element.is(N))
                || (is_carbonyl_carbon(g, b.b) && atoms[b.a].element.is(N));
            !amide
        })
        .count();

    let carbons: Vec<usize> = (0..atoms.len())
        .filter(|&i| atoms[i].element.is(C))
        .collect();
    let sp3 = carbons
        .iter()
        .filter(|&&i| {
            !atoms[i].aromatic
                && g.neighbors(i)
                    .iter()
                    .all(|&(_, b)| g.bonds()[b].order == BondOrder::Single)
                && g.degree(i) + atoms[i].hydrogens as usize == 4
        })
        .count();
    let fsp3 = if carbons.is_empty() {
        0.0
    } else {
        sp3 as f64 / carbons.len() as f64
    };

    Descriptors {
        hbd,
        hba,
        rot_bonds,
        fsp3,
        heavy_atoms: atoms.iter().filter(|a| is_heavy(a.element)).count(),
        components: g.component_atoms().len(),
    }
}
