//! Deterministic workloads shared by the benchmarks.

use nature_seqkit::tok::encode;
use nature_seqkit::{Tokenizer, Vocabulary};

pub const SMILES: [&str; 12] = [
    "CC(=O)Oc1ccccc1C(=O)O",
    "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "CC1(C)SC2C(NC(=O)Cc3ccccc3)C(=O)N2C1C(=O)O",
    "CN1CCC23C4Oc5c3c(CC1C2C=CC4O)ccc5O",
    "OC[C@H]1O[C@@H](O)[C@H](O)[C@@H](O)[C@@H]1O",
    "CC12CCC3C(CCC4=CC(=O)CCC34C)C1CCC2O",
    "c1cc2ccc3cccc4ccc(c1)c2c34",
    "C12C3C4C1C5C2C3C45",
    "[O-][N+](=O)c1ccccc1",
    "CCCCCCCC/C=C\\CCCCCCCC(=O)O",
    "Nc1ccn(C2OC(CO)C(O)C2O)c(=O)n1",
];

pub const FORMULAS: [&str; 8] = [
    "NaCl",
    "Li4Ti3Mn2Fe3O14",
    "Fe2O3",
    "LiFePO4",
    "Li4O8",
    "CaTiO3",
    "MgAl2O4",
    "Cu2ZnSnS4",
];

const PROTEIN: &str = "MSKGEELFTGVVPILVELDGDVNGHKFSVSGEGEGDATYGKLTLKFICTTGKLPVPWPTLVTTF";
const DNA: &str = "ATGGCCTTTAAAGGGCCCTTTAAAGCGCGCATATATCGCGTAGCTAGCTAGGATCCGAATTC";

/// `n` mixed-domain records in the tagged text form.
pub fn tagged_corpus(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let p = i % (PROTEIN.len() - 20);
            format!(
                "Record {i}: the ligand <mol>{}</mol> binds <protein>{}</protein>, \
                 encoded by <dna>{}</dna>; host lattice <material>{} <sg{}></material>.",
                SMILES[i % SMILES.len()],
                &PROTEIN[p..],
                &DNA[i % 7..],
                "Li Li O",
                i % 230 + 1,
            )
        })
        .collect()
}

/// The tagged corpus as vocabulary ids.
pub fn id_corpus(v: &Vocabulary, n: usize) -> Vec<Vec<u32>> {
    let tk = Tokenizer::new(v);
    tagged_corpus(n)
        .iter()
        .map(|s| {
            encode(v, &tk.tokenize_tagged(s).expect("corpus tokenizes")).expect("in vocabulary")
        })
        .collect()
}

/// Protein-like sequences for clustering: shifted windows of one sequence.
pub fn protein_family(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let k = i % 20;
            let mut s: Vec<u8> = PROTEIN.as_bytes()[k..k + 40].to_vec();
            s[i % 40] = b'W';
            String::from_utf8(s).unwrap()
        })
        .collect()
}
