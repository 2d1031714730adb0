//! Canonical SMILES by partition refinement and individualization.
//!
//! Atoms are first ranked by local invariants, then ranks are refined by
//! neighbor ranks until stable. Remaining ties are broken by trying every
//! tied atom of the first non-singleton cell in turn. Each discrete labeling
//! gives one DFS writing and the least one wins, ordered by length and then
//! lexicographically, which favors fewer branches and ring digits. Two leaves
//! with equal writings reveal an automorphism, which is used to skip tied atoms
//! already known to be equivalent.

use std::cmp::Ordering;

use super::{valence, BondOrder, Element, MolecularGraph};

/// Canonical SMILES of a graph. Components are written separately, sorted,
/// and joined with `.`. Stereo markers are dropped.
pub fn canonical_form(g: &MolecularGraph) -> String {
    let mut parts: Vec<String> = g
        .component_atoms()
        .into_iter()
        .map(|atoms| canonical_component(&g.subgraph(&atoms)))
        .collect();
    parts.sort_by(|a, b| writing_order(a, b));
    parts.join(".")
}

/// Order on SMILES writings: shorter first, then bytewise.
pub(crate) fn writing_order(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn bond_code(o: BondOrder) -> u8 {
    match o {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}

fn dense_ranks<K: Ord>(keys: &[K]) -> (Vec<usize>, usize) {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0; keys.len()];
    let mut r = 0;
    for w in 0..idx.len() {
        if w > 0 && keys[idx[w]] != keys[idx[w - 1]] {
            r += 1;
        }
        ranks[idx[w]] = r;
    }
    (ranks, if keys.is_empty() { 0 } else { r + 1 })
}

fn initial_ranks(g: &MolecularGraph, ring: &[bool]) -> Vec<usize> {
    let keys: Vec<_> = g
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            (
                g.degree(i),
                a.element.atomic_number(),
                a.isotope,
                a.aromatic,
                a.charge,
                a.hydrogens,
                ring[i],
                a.class,
            )
        })
        .collect();
    dense_ranks(&keys).0
}

fn refine(g: &MolecularGraph, mut ranks: Vec<usize>) -> Vec<usize> {
    let mut cells = ranks.iter().max().map_or(0, |m| m + 1);
    loop {
        let keys: Vec<(usize, Vec<(usize, u8)>)> = (0..g.atom_count())
            .map(|i| {
                let mut nb: Vec<(usize, u8)> = g
                    .neighbors(i)
                    .iter()
                    .map(|&(w, b)| (ranks[w], bond_code(g.bonds()[b].order)))
                    .collect();
                nb.sort_unstable();
                (ranks[i], nb)
            })
            .collect();
        let (next, count) = dense_ranks(&keys);
        ranks = next;
        if count == cells {
            return ranks;
        }
        cells = count;
    }
}

fn individualize(ranks: &[usize], v: usize) -> Vec<usize> {
    let keys: Vec<(usize, bool)> = ranks
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, i != v))
        .collect();
    dense_ranks(&keys).0
}

struct Leaf {
    smiles: String,
    /// Atoms in writing order.
    order: Vec<usize>,
}

struct Search<'g> {
    g: &'g MolecularGraph,
    best: Option<Leaf>,
    first: Option<Leaf>,
    /// Automorphisms as atom → atom maps.
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, ranks: Vec<usize>, prefix: &mut Vec<usize>) {
        let ranks = refine(self.g, ranks);
        let n = ranks.len();
        let mut sizes = vec![0usize; n];
        for &r in &ranks {
            sizes[r] += 1;
        }
        let Some(target) = (0..n).find(|&r| sizes[r] > 1) else {
            self.leaf(&ranks);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&i| ranks[i] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.equivalent_to_explored(&cell, &explored, v, prefix) {
                continue;
            }
            prefix.push(v);
            self.run(individualize(&ranks, v), prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    /// Whether `v` shares an orbit with an explored atom under the known
    /// automorphisms that fix `prefix` pointwise.
    fn equivalent_to_explored(
        &self,
        cell: &[usize],
        explored: &[usize],
        v: usize,
        prefix: &[usize],
    ) -> bool {
        let n = self.g.atom_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for a in &self.autos {
            if prefix.iter().any(|&p| a[p] != p) {
                continue;
            }
            for &c in cell {
                let (x, y) = (find(&mut parent, c), find(&mut parent, a[c]));
                if x != y {
                    parent[x] = y;
                }
            }
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }

    fn leaf(&mut self, ranks: &[usize]) {
        let leaf = write_smiles(self.g, ranks);
        for known in [&self.first, &self.best].into_iter().flatten() {
            if known.smiles == leaf.smiles {
                let mut perm = vec![0; ranks.len()];
                for (k, &a) in known.order.iter().enumerate() {
                    perm[a] = leaf.order[k];
                }
                if perm.iter().enumerate().any(|(i, &p)| i != p) {
                    self.autos.push(perm);
                }
            }
        }
        match &self.best {
            None => {
                self.first = Some(Leaf {
                    smiles: leaf.smiles.clone(),
                    order: leaf.order.clone(),
                });
                self.best = Some(leaf);
            }
            Some(b) if writing_order(&leaf.smiles, &b.smiles) == Ordering::Less => {
                self.best = Some(leaf)
            }
            _ => {}
        }
    }
}

fn canonical_component(g: &MolecularGraph) -> String {
    let ring = g.ring_atoms();
    let mut search = Search {
        g,
        best: None,
        first: None,
        autos: Vec::new(),
    };
    search.run(initial_ranks(g, &ring), &mut Vec::new());
    search
        .best
        .expect("a component has at least one atom")
        .smiles
}

fn organic_bare(e: Element, aromatic: bool) -> bool {
    match e.symbol() {
        "B" | "C" | "N" | "O" | "P" | "S" => true,
        "F" | "Cl" | "Br" | "I" | "*" => !aromatic,
        _ => false,
    }
}

pub(crate) fn atom_text(g: &MolecularGraph, i: usize) -> String {
    let a = &g.atoms()[i];
    let sym = if a.aromatic {
        a.element.symbol().to_ascii_lowercase()
    } else {
        a.element.symbol().to_string()
    };
    let bare = organic_bare(a.element, a.aromatic)
        && a.charge == 0
        && a.isotope.is_none()
        && a.class.is_none()
        && a.hydrogens == valence::implicit_hydrogens(g, i);
    if bare {
        return sym;
    }
    let mut s = String::from("[");
    if let Some(iso) = a.isotope {
        s.push_str(&iso.to_string());
    }
    s.push_str(&sym);
    match a.hydrogens {
        0 => {}
        1 => s.push('H'),
        h => s.push_str(&format!("H{h}")),
    }
    match a.charge {
        0 => {}
        1 => s.push('+'),
        -1 => s.push('-'),
        q if q > 0 => s.push_str(&format!("+{q}")),
        q => s.push_str(&format!("-{}", -q)),
    }
    if let Some(c) = a.class {
        s.push_str(&format!(":{c}"));
    }
    s.push(']');
    s
}

fn bond_text(g: &MolecularGraph, bond: usize) -> &'static str {
    let b = &g.bonds()[bond];
    let both_aromatic = g.atoms()[b.a].aromatic && g.atoms()[b.b].aromatic;
    match b.order {
        BondOrder::Single if both_aromatic => "-",
        BondOrder::Single => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
        BondOrder::Aromatic if both_aromatic => "",
        BondOrder::Aromatic => ":",
    }
}

fn ring_label(d: usize) -> String {
    if d < 10 {
        d.to_string()
    } else {
        format!("%{d:02}")
    }
}

/// DFS writing of one connected component under a discrete labeling:
/// start at the lowest rank, visit neighbors in rank order.
fn write_smiles(g: &MolecularGraph, ranks: &[usize]) -> Leaf {
    let n = g.atom_count();
    let root = (0..n)
        .min_by_key(|&i| ranks[i])
        .expect("non-empty component");
    let sorted_nb: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|i| {
            let mut v = g.neighbors(i).to_vec();
            v.sort_by_key(|&(w, _)| ranks[w]);
            v
        })
        .collect();

    // Pass 1: tree children and ring-closure bonds.
    let mut visited = vec![false; n];
    let mut is_closure = vec![false; g.bond_count()];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut tree_bond = vec![false; g.bond_count()];
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    visited[root] = true;
    while let Some(&(u, slot)) = stack.last() {
        if let Some(&(w, b)) = sorted_nb[u].get(slot) {
            stack.last_mut().expect("non-empty").1 += 1;
            if tree_bond[b] || is_closure[b] {
                continue;
            }
            if visited[w] {
                is_closure[b] = true;
            } else {
                visited[w] = true;
                tree_bond[b] = true;
                children[u].push((w, b));
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }

    // Pass 2: emit in preorder, allocating the lowest free ring digit.
    enum Item {
        Atom(usize, Option<usize>),
        Open,
        Close,
    }
    let mut out = String::new();
    let mut order = Vec::with_capacity(n);
    let mut digit_of_bond: Vec<Option<usize>> = vec![None; g.bond_count()];
    let mut in_use = [false; 100];
    let mut items = vec![Item::Atom(root, None)];
    while let Some(item) = items.pop() {
        match item {
            Item::Open => out.push('('),
            Item::Close => out.push(')'),
            Item::Atom(u, via) => {
                if let Some(b) = via {
                    out.push_str(bond_text(g, b));
                }
                out.push_str(&atom_text(g, u));
                order.push(u);
                let mut freed = Vec::new();
                for &(_, b) in &sorted_nb[u] {
                    if !is_closure[b] {
                        continue;
                    }
                    match digit_of_bond[b] {
                        Some(d) => {
                            out.push_str(&ring_label(d));
                            freed.push(d);
                        }
                        None => {
                            let d = (1..100)
                                .find(|&d| !in_use[d])
                                .expect("more than 99 open ring bonds");
                            in_use[d] = true;
                            digit_of_bond[b] = Some(d);
                            out.push_str(bond_text(g, b));
                            out.push_str(&ring_label(d));
                        }
                    }
                }
                for d in freed {
                    in_use[d] = false;
                }
                let ch = &children[u];
                if let Some((&(last, lb), rest)) = ch.split_last() {
                    items.push(Item::Atom(last, Some(lb)));
                    for &(c, cb) in rest.iter().rev() {
                        items.push(Item::Close);
                        items.push(Item::Atom(c, Some(cb)));
                        items.push(Item::Open);
                    }
                }
            }
        }
    }
    Leaf { smiles: out, order }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    fn canon(s: &str) -> String {
        canonical_form(&parse_smiles(s).unwrap())
    }

    #[test]
    fn same_molecule_same_form() {
        assert_eq!(canon("C(O)C"), canon("CCO"));
        assert_eq!(canon("OCC"), canon("CCO"));
        assert_ne!(canon("COC"), canon("CCO"));
        assert_eq!(canon("c1ccccc1O"), canon("Oc1ccccc1"));
        assert_eq!(canon("C1CCCCC1C"), canon("CC1CCCCC1"));
    }

    #[test]
    fn simple_forms() {
        assert_eq!(canon("C"), "C");
        assert_eq!(canon("OCC"), "CCO");
        assert_eq!(canon("c1ccccc1"), "c1ccccc1");
        assert_eq!(canon("[NH4+]"), "[NH4+]");
        assert_eq!(canon("O.C"), "C.O");
        assert_eq!(canon("c1ccccc1-c1ccccc1"), "c1ccc(cc1)-c1ccccc1");
    }

    #[test]
    fn fixed_point() {
        for s in [
            "CC(=O)Nc1ccc(O)cc1",
            "O=c1[nH]cnc2c(O)cc([*:1])c([*:2])c12",
            "C12C3C4C1C5C2C3C45",
            "C1CC2CCC1CC2",
            "[13CH3][N+](C)(C)C.[Cl-]",
            "C1=CC=CC=C1",
            "c1ccc2cc3ccccc3cc2c1",
            "CC(C)(C)c1cc(C(C)(C)C)cc(C(C)(C)C)c1",
            "C1CCCCCCCCCCCC1",
        ] {
            let c = canon(s);
            assert_eq!(canon(&c), c, "{s}");
        }
    }

    #[test]
    fn permutation_invariance() {
        let g = parse_smiles("CC(C)Cc1ccc(cc1)[C@@H](C)C(=O)O").unwrap();
        let c = canonical_form(&g);
        let n = g.atom_count();
        let rev: Vec<usize> = (0..n).rev().collect();
        assert_eq!(canonical_form(&g.permuted(&rev)), c);
        let rot: Vec<usize> = (0..n).map(|i| (i + 5) % n).collect();
        assert_eq!(canonical_form(&g.permuted(&rot)), c);
    }

    #[test]
    fn stereo_dropped() {
        assert_eq!(canon("F/C=C/F"), canon("F/C=C\\F"));
        assert_eq!(canon("N[C@@H](C)C(=O)O"), canon("N[C@H](C)C(=O)O"));
    }

    #[test]
    fn symmetric_cage_is_fast() {
        // Cubane and a decorated ring system exercise the automorphism pruning.
        let t = std::time::Instant::now();
        canon("C12C3C4C1C5C2C3C45");
        canon("CC(C)(C)C(C(C)(C)C)(C(C)(C)C)C(C(C)(C)C)(C(C)(C)C)C(C)(C)C");
        assert!(t.elapsed().as_secs() < 5);
    }
}
