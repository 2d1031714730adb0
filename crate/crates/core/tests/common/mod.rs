//! Independent reference implementations used by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nature_seqkit::bioseq::{CrRnaFailure, CrRnaVerdict};
use nature_seqkit::molgraph::BondOrder;
use nature_seqkit::{MolecularGraph, Strand, Tables};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn corpus_smiles() -> Vec<&'static str> {
    include_str!("../data/smiles.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect()
}

fn atom_smiles(g: &MolecularGraph, i: usize) -> String {
    let a = &g.atoms()[i];
    let sym = if a.aromatic {
        a.element.symbol().to_lowercase()
    } else {
        a.element.symbol().to_string()
    };
    if !a.bracket {
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
        n => s.push_str(&format!("H{n}")),
    }
    match a.charge {
        0 => {}
        1 => s.push('+'),
        -1 => s.push('-'),
        c if c > 0 => s.push_str(&format!("+{c}")),
        c => s.push_str(&format!("-{}", -c)),
    }
    if let Some(c) = a.class {
        s.push_str(&format!(":{c}"));
    }
    s.push(']');
    s
}

fn bond_smiles(g: &MolecularGraph, bond: usize) -> &'static str {
    let b = &g.bonds()[bond];
    let both = g.atoms()[b.a].aromatic && g.atoms()[b.b].aromatic;
    match (b.order, both) {
        (BondOrder::Single, true) => "-",
        (BondOrder::Single, false) => "",
        (BondOrder::Double, _) => "=",
        (BondOrder::Triple, _) => "#",
        (BondOrder::Aromatic, true) => "",
        (BondOrder::Aromatic, false) => ":",
    }
}

struct Writer<'a, R: Rng> {
    g: &'a MolecularGraph,
    rng: &'a mut R,
    visited: Vec<bool>,
    order: Vec<usize>,
    children: Vec<Vec<(usize, usize)>>,
    /// Non-tree bonds at each atom: (other atom, bond).
    rings: Vec<Vec<(usize, usize)>>,
    labels: BTreeMap<usize, usize>,
    free: Vec<bool>,
}

impl<R: Rng> Writer<'_, R> {
    fn explore(&mut self, v: usize, parent_bond: Option<usize>) {
        self.visited[v] = true;
        self.order[v] = self.order.iter().filter(|o| **o != usize::MAX).count();
        let mut nbrs = self.g.neighbors(v).to_vec();
        nbrs.shuffle(self.rng);
        for (u, b) in nbrs {
            if Some(b) == parent_bond {
                continue;
            }
            if self.visited[u] {
                if !self.rings[v].iter().any(|&(_, x)| x == b) {
                    self.rings[v].push((u, b));
                    self.rings[u].push((v, b));
                }
            } else {
                self.children[v].push((u, b));
                self.explore(u, Some(b));
            }
        }
    }

    fn label(&mut self) -> usize {
        let d = (1..)
            .find(|d| !self.free.get(*d).copied().unwrap_or(false))
            .unwrap();
        if self.free.len() <= d {
            self.free.resize(d + 1, false);
        }
        self.free[d] = true;
        d
    }

    fn write(&mut self, v: usize, out: &mut String) {
        out.push_str(&atom_smiles(self.g, v));
        let mut rings = self.rings[v].clone();
        rings.shuffle(self.rng);
        for (u, b) in rings {
            let text = match self.labels.remove(&b) {
                Some(d) => {
                    self.free[d] = false;
                    d
                }
                None => {
                    debug_assert!(self.order[u] > self.order[v]);
                    let d = self.label();
                    self.labels.insert(b, d);
                    out.push_str(bond_smiles(self.g, b));
                    d
                }
            };
            if text < 10 {
                out.push_str(&text.to_string());
            } else {
                out.push_str(&format!("%{text}"));
            }
        }
        let kids = self.children[v].clone();
        for (k, (u, b)) in kids.iter().enumerate() {
            let last = k + 1 == kids.len();
            if !last {
                out.push('(');
            }
            out.push_str(bond_smiles(self.g, *b));
            self.write(*u, out);
            if !last {
                out.push(')');
            }
        }
    }
}

/// A random SMILES for `g`: random component order, random roots and a
/// random neighbour order at every atom. Stereo marks are not written.
pub fn random_smiles<R: Rng>(g: &MolecularGraph, rng: &mut R) -> String {
    let n = g.atom_count();
    let mut w = Writer {
        g,
        rng,
        visited: vec![false; n],
        order: vec![usize::MAX; n],
        children: vec![Vec::new(); n],
        rings: vec![Vec::new(); n],
        labels: BTreeMap::new(),
        free: Vec::new(),
    };
    let mut comps = g.component_atoms();
    comps.shuffle(w.rng);
    let mut parts = Vec::new();
    for comp in comps {
        let root = *comp.choose(w.rng).unwrap();
        w.explore(root, None);
        let mut s = String::new();
        w.write(root, &mut s);
        parts.push(s);
    }
    parts.join(".")
}

fn complement(b: u8) -> u8 {
    match b {
        b'A' => b'T',
        b'T' => b'A',
        b'C' => b'G',
        b'G' => b'C',
        _ => b'N',
    }
}

/// Brute-force crRNA check. Plus-strand windows compare the guide with the
/// top strand and want `GG` two and three bases downstream; minus-strand
/// windows compare the guide's reverse complement with the top strand and
/// want `CC` three and two bases upstream.
pub fn crrna_oracle(target: &str, guide_dna: &str) -> CrRnaVerdict {
    let t = target.as_bytes();
    let g = guide_dna.as_bytes();
    let rc: Vec<u8> = g.iter().rev().map(|&b| complement(b)).collect();
    let len_ok = (17..=24).contains(&g.len());
    let same =
        |at: usize, pat: &[u8]| (0..pat.len()).all(|k| t[at + k] != b'N' && t[at + k] == pat[k]);
    let mut hits = Vec::new();
    if !g.is_empty() && g.len() <= t.len() {
        for p in 0..=t.len() - g.len() {
            if same(p, g) {
                let pam =
                    t.get(p + g.len() + 1) == Some(&b'G') && t.get(p + g.len() + 2) == Some(&b'G');
                hits.push((p, Strand::Plus, pam));
            }
        }
        for q in 0..=t.len() - g.len() {
            if same(q, &rc) {
                let pam = q >= 3 && t[q - 3] == b'C' && t[q - 2] == b'C';
                hits.push((q, Strand::Minus, pam));
            }
        }
    }
    let mut failures = Vec::new();
    if !len_ok {
        failures.push(CrRnaFailure::LengthOutOfRange);
    }
    let with_pam = hits.iter().find(|h| h.2);
    if hits.is_empty() {
        failures.push(CrRnaFailure::NoTargetMatch);
    } else if with_pam.is_none() {
        failures.push(CrRnaFailure::NoPam);
    }
    let valid = failures.is_empty();
    CrRnaVerdict {
        valid,
        failures,
        match_position: with_pam.filter(|_| valid).map(|h| h.0),
        strand: with_pam.filter(|_| valid).map(|h| h.1),
    }
}

/// Every state assignment, by odometer.
fn assignments(states: &[&[i8]]) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; states.len()];
    'outer: loop {
        out.push(idx.iter().zip(states).map(|(&i, s)| s[i]).collect());
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < states[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    out
}

/// Whether an assignment is neutral with every cation strictly less
/// electronegative than every anion. Missing electronegativities skip the
/// ordering test.
pub fn smact_acceptable(pairs: &[(&str, u32, i8)], tables: &Tables) -> bool {
    let charge: i64 = pairs.iter().map(|(_, n, s)| *n as i64 * *s as i64).sum();
    if charge != 0 {
        return false;
    }
    let en: Option<Vec<f64>> = pairs
        .iter()
        .map(|(e, _, _)| tables.electronegativity(e))
        .collect();
    let Some(en) = en else { return true };
    for (i, a) in pairs.iter().enumerate() {
        for (j, b) in pairs.iter().enumerate() {
            if a.2 > 0 && b.2 < 0 && en[i] >= en[j] {
                return false;
            }
        }
    }
    true
}

/// Exhaustive SMACT screen over the cartesian product of common states.
pub fn smact_oracle(comp: &[(&str, u32)], tables: &Tables) -> bool {
    if comp.len() == 1 {
        return true;
    }
    let states: Vec<&[i8]> = comp
        .iter()
        .map(|(e, _)| tables.oxidation_states(e).unwrap())
        .collect();
    if states.iter().any(|s| s.is_empty()) {
        return false;
    }
    assignments(&states).into_iter().any(|a| {
        let pairs: Vec<(&str, u32, i8)> = comp
            .iter()
            .zip(&a)
            .map(|((e, n), s)| (*e, *n, *s))
            .collect();
        smact_acceptable(&pairs, tables)
    })
}

/// Rank of each value: one plus the number strictly smaller, plus half the
/// number of other equal values.
pub fn naive_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|x| {
            let less = xs.iter().filter(|y| *y < x).count() as f64;
            let equal = xs.iter().filter(|y| *y == x).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Pearson correlation from raw sums.
pub fn naive_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

pub fn naive_spearman(x: &[f64], y: &[f64]) -> f64 {
    naive_pearson(&naive_ranks(x), &naive_ranks(y))
}

pub fn naive_aar(reference: &str, generated: &str) -> f64 {
    let r: Vec<char> = reference.chars().collect();
    let g: Vec<char> = generated.chars().collect();
    let mut hits = 0;
    for i in 0..r.len() {
        if i < g.len() && g[i] == r[i] {
            hits += 1;
        }
    }
    hits as f64 / r.len() as f64
}

/// (matches, columns) of the best global alignment by exhaustive recursion:
/// most matches, then fewest columns.
pub fn brute_align(a: &[u8], b: &[u8]) -> (usize, usize) {
    match (a.split_first(), b.split_first()) {
        (None, _) => (0, b.len()),
        (_, None) => (0, a.len()),
        (Some((x, ra)), Some((y, rb))) => {
            let better = |p: (usize, usize), q: (usize, usize)| {
                if (p.0, std::cmp::Reverse(p.1)) >= (q.0, std::cmp::Reverse(q.1)) {
                    p
                } else {
                    q
                }
            };
            let (m, l) = brute_align(ra, rb);
            let diag = (m + usize::from(x == y), l + 1);
            let (m, l) = brute_align(ra, b);
            let up = (m, l + 1);
            let (m, l) = brute_align(a, rb);
            let left = (m, l + 1);
            better(better(diag, up), left)
        }
    }
}

/// Leader clustering with every pair compared directly.
pub fn naive_cluster_count(seqs: &[&str], threshold: f64) -> usize {
    let mut leaders: Vec<&str> = Vec::new();
    for s in seqs {
        let joins = leaders.iter().any(|l| {
            let (m, len) = brute_align(l.as_bytes(), s.as_bytes());
            let id = if len == 0 { 1.0 } else { m as f64 / len as f64 };
            id >= threshold
        });
        if !joins {
            leaders.push(s);
        }
    }
    leaders.len()
}
