//! Acceptance gate: one PASS/FAIL line per criterion; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use nature_seqkit::bioseq::{validate_crrna, CrRnaFailure};
use nature_seqkit::corpus::{pack_pretrain, render_instruction, unpack};
use nature_seqkit::matcodec::{
    composition_precision, decode_structure, encode_structure, parse_poscar, smact_valid,
};
use nature_seqkit::metrics::{
    aar, spearman, stability_rate, success_within, STABILITY_THRESHOLD, SUCCESS_REL_TOL,
};
use nature_seqkit::molgraph::{canonical_form, parse_smiles, validate};
use nature_seqkit::tok::{decode, detokenize, encode, tokenize_smiles, wrap};
use nature_seqkit::vocab::default_vocab;
use nature_seqkit::{
    Composition, Entity, InstructionRecord, NucleotideSeq, Tables, Tokenizer, Vocabulary,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const TEMPLATE_LIMIT: Duration = Duration::from_secs(1);
const POSCAR_LIMIT: Duration = Duration::from_secs(1);
const CANON_LIMIT: Duration = Duration::from_secs(30);
const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(60);
const SPEARMAN_TOL: f64 = 1e-12;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    check(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

const GOLDEN_RECORDS: [(&str, &str, &str); 10] = [
    (
        "Generate a molecule with four heavy atoms.",
        "<mol>CC(=O)O</mol>",
        "Instruction: Generate a molecule with four heavy atoms.\n\n\nResponse: <mol>CC(=O)O</mol>",
    ),
    (
        "Translate the DNA sequence to protein: <dna>ATGGCCTAA</dna>",
        "<protein>MA</protein>",
        "Instruction: Translate the DNA sequence to protein: <dna>ATGGCCTAA</dna>\n\n\nResponse: <protein>MA</protein>",
    ),
    (
        "What is the product of <reactant>CCO.CC(=O)O</reactant>?",
        "<product>CCOC(C)=O</product>",
        "Instruction: What is the product of <reactant>CCO.CC(=O)O</reactant>?\n\n\nResponse: <product>CCOC(C)=O</product>",
    ),
    (
        "Propose a material containing Li, Ti and O.",
        "<material>Li Li Ti O O O <sg12></material>",
        "Instruction: Propose a material containing Li, Ti and O.\n\n\nResponse: <material>Li Li Ti O O O <sg12></material>",
    ),
    (
        "Give the complementary RNA.",
        "<rna>AUGGCC</rna>",
        "Instruction: Give the complementary RNA.\n\n\nResponse: <rna>AUGGCC</rna>",
    ),
    (
        "Describe the molecule <mol>c1ccccc1</mol>.",
        "It is benzene, an aromatic ring of six carbons.",
        "Instruction: Describe the molecule <mol>c1ccccc1</mol>.\n\n\nResponse: It is benzene, an aromatic ring of six carbons.",
    ),
    (
        "Multi-line\ninstruction with\ttabs",
        "Line one\nline two\n",
        "Instruction: Multi-line\ninstruction with\ttabs\n\n\nResponse: Line one\nline two\n",
    ),
    (
        "Design an antibody CDR-H3.",
        "<antibody>ARDYW</antibody>",
        "Instruction: Design an antibody CDR-H3.\n\n\nResponse: <antibody>ARDYW</antibody>",
    ),
    (
        "Non-ASCII: température, 温度, 🧪",
        "Réponse: <fragA>C[*:1]</fragA><fragB>[*:1]N</fragB>",
        "Instruction: Non-ASCII: température, 温度, 🧪\n\n\nResponse: Réponse: <fragA>C[*:1]</fragA><fragB>[*:1]N</fragB>",
    ),
    (
        "Generate a soluble protein.",
        "<protein>MSKGEELFTG</protein>",
        "Instruction: Generate a soluble protein.\n\n\nResponse: <protein>MSKGEELFTG</protein>",
    ),
];

fn template_exactness(v: &Vocabulary) -> Outcome {
    let start = Instant::now();
    let tk = Tokenizer::new(v);
    for (i, (instr, resp, want)) in GOLDEN_RECORDS.iter().enumerate() {
        let rec = InstructionRecord::new(instr, resp).map_err(|e| e.to_string())?;
        let r = render_instruction(&tk, &rec).map_err(|e| e.to_string())?;
        check(r.text == *want, || format!("record {i}: text {:?}", r.text))?;
        let response = tk.tokenize_tagged(resp).map_err(|e| e.to_string())?;
        let n = r.tokens.len();
        let tail = response.len() + 1;
        check(r.mask.len() == n, || format!("record {i}: mask length"))?;
        for (k, m) in r.mask.iter().enumerate() {
            check(*m == (k >= n - tail), || format!("record {i}: mask at {k}"))?;
        }
        check(
            r.tokens.tokens()[n - tail..n - 1] == *response.tokens(),
            || format!("record {i}: masked tokens are not the response"),
        )?;
        let prompt = detokenize(
            &nature_seqkit::TaggedSequence::from_tokens(r.tokens.tokens()[..n - tail].to_vec())
                .map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        check(
            prompt == format!("Instruction: {instr}\n\n\nResponse: "),
            || format!("record {i}: unmasked part {prompt:?}"),
        )?;
        check(r.tokens.tokens()[n - 1].text == "<eod>", || {
            format!("record {i}: missing <eod>")
        })?;
    }
    let t = within(start, TEMPLATE_LIMIT)?;
    Ok(format!("10 records, {t:?}"))
}

fn benzene() -> Outcome {
    let toks = tokenize_smiles("c1ccccc1").map_err(|e| e.to_string())?;
    let s = detokenize(&wrap(Entity::Mol, toks)).map_err(|e| e.to_string())?;
    check(s == "<mol>c1ccccc1</mol>", || format!("got {s:?}"))?;
    Ok(s)
}

fn aar_criterion() -> Outcome {
    let same = aar("QQYSNYPWT", "QQYSNYPWT").map_err(|e| e.to_string())?;
    check(same == 1.0, || format!("identical gave {same}"))?;
    let prefix = aar("QQYSNYPWT", "QQYSNY").map_err(|e| e.to_string())?;
    check(prefix == 6.0 / 9.0, || format!("prefix gave {prefix}"))?;
    let mut rng = common::rng(3);
    const AA: &[u8] = b"ACDEFGHIKLMNPQRSTVWY";
    for i in 0..1000 {
        let rl = rng.gen_range(1..40);
        let gl = rng.gen_range(0..45);
        let r: String = (0..rl)
            .map(|_| *AA.choose(&mut rng).unwrap() as char)
            .collect();
        let mut g: Vec<u8> = r.bytes().take(gl).collect();
        while g.len() < gl {
            g.push(*AA.choose(&mut rng).unwrap());
        }
        for b in g.iter_mut() {
            if rng.gen_bool(0.3) {
                *b = *AA.choose(&mut rng).unwrap();
            }
        }
        let g = String::from_utf8(g).unwrap();
        let got = aar(&r, &g).map_err(|e| e.to_string())?;
        let want = common::naive_aar(&r, &g);
        check(got == want, || format!("pair {i}: {got} vs {want}"))?;
    }
    Ok("1.0, 6/9, 1000 random pairs exact".into())
}

fn precision_criterion() -> Outcome {
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let prompt = set(&["Li", "Ti", "Mn", "Fe", "O"]);
    let full = Composition::parse_formula("Li4Ti3Mn2Fe3O14").map_err(|e| e.to_string())?;
    let p1 = composition_precision(std::slice::from_ref(&prompt), &[full.element_set()])
        .map_err(|e| e.to_string())?;
    check(p1 == 1.0, || format!("exact set gave {p1}"))?;
    let p2 = composition_precision(&[prompt], &[set(&["Li", "O"])]).map_err(|e| e.to_string())?;
    check(p2 == 0.4, || format!("{{Li,O}} gave {p2}"))?;
    Ok(format!("{p1}, {p2}"))
}

fn poscar_criterion() -> Outcome {
    let start = Instant::now();
    let files = [
        (include_str!("data/Re3C.poscar"), ["Re", "Re", "Re", "C"]),
        (include_str!("data/Os3Re.poscar"), ["Re", "Os", "Os", "Os"]),
    ];
    for (text, species) in files {
        let lines: Vec<&str> = text.lines().collect();
        let p = parse_poscar(text, 1).map_err(|e| e.to_string())?;
        let raw_lattice: Vec<&str> = lines[2..5]
            .iter()
            .flat_map(|l| l.split_whitespace())
            .collect();
        check(p.raw_lattice == raw_lattice, || {
            format!("lattice strings {:?}", p.raw_lattice)
        })?;
        let lattice: Vec<f64> = raw_lattice.iter().map(|w| w.parse().unwrap()).collect();
        check(p.structure.lattice()[..] == lattice[..], || {
            "lattice values".into()
        })?;
        for (k, line) in lines[8..12].iter().enumerate() {
            let words: Vec<&str> = line.split_whitespace().collect();
            check(
                p.raw_coords[k]
                    .iter()
                    .map(String::as_str)
                    .eq(words[..3].iter().copied()),
                || format!("coordinate strings row {k}"),
            )?;
            let vals: Vec<f64> = words[..3].iter().map(|w| w.parse().unwrap()).collect();
            check(p.structure.frac_coords()[k][..] == vals[..], || {
                format!("coordinate values row {k}")
            })?;
        }
        let flat = p.structure.composition().flattened();
        check(flat == species, || format!("species {flat:?}"))?;

        let tokens = encode_structure(&p.structure);
        let back = decode_structure(&tokens).map_err(|e| e.to_string())?;
        check(back == p.structure.quantized(), || {
            "decode(encode) != quantized".into()
        })?;
        check(encode_structure(&back) == tokens, || {
            "encode is not a fixed point".into()
        })?;
        let again = decode_structure(&encode_structure(&back)).map_err(|e| e.to_string())?;
        check(again == back, || "decode is not a fixed point".into())?;
    }
    let t = within(start, POSCAR_LIMIT)?;
    Ok(format!("Re3C, Os3Re, {t:?}"))
}

fn canon_criterion() -> Outcome {
    let start = Instant::now();
    let corpus = common::corpus_smiles();
    let mut rng = common::rng(6);
    let mut rewrites = 0;
    let mut molecules = BTreeSet::new();
    for s in &corpus {
        let g = parse_smiles(s).map_err(|e| format!("{s}: {e}"))?;
        check(validate(&g).valid, || format!("{s} is not valid"))?;
        let c = canonical_form(&g);
        molecules.insert(c.clone());
        let again = canonical_form(&parse_smiles(&c).map_err(|e| format!("{c}: {e}"))?);
        check(again == c, || format!("{s}: {c} re-parses to {again}"))?;
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..g.atom_count()).collect();
            order.shuffle(&mut rng);
            let r = common::random_smiles(&g.permuted(&order), &mut rng);
            let rc = canonical_form(&parse_smiles(&r).map_err(|e| format!("{r}: {e}"))?);
            check(rc == c, || {
                format!("{s}: rewrite {r} gives {rc}, expected {c}")
            })?;
            rewrites += 1;
        }
    }
    check(corpus.len() >= 100, || "corpus too small".into())?;
    check(rewrites >= 1000, || "too few rewrites".into())?;
    let t = within(start, CANON_LIMIT)?;
    Ok(format!(
        "{rewrites} rewrites of {} SMILES ({} molecules), {t:?}",
        corpus.len(),
        molecules.len()
    ))
}

fn random_payload<R: Rng>(entity: Entity, v: &Vocabulary, rng: &mut R) -> String {
    let n = rng.gen_range(1..30);
    let pick = |alpha: &[u8], rng: &mut R| -> String {
        (0..n)
            .map(|_| *alpha.choose(rng).unwrap() as char)
            .collect()
    };
    match entity {
        Entity::Mol => {
            let mol: Vec<&str> = v
                .entries()
                .iter()
                .filter(|e| e.domain == nature_seqkit::Domain::Mol)
                .map(|e| e.token.as_str())
                .collect();
            (0..n).map(|_| *mol.choose(rng).unwrap()).collect()
        }
        Entity::Protein => pick(b"ACDEFGHIKLMNPQRSTVWYXBZUO", rng),
        Entity::Dna => pick(b"ACGTN", rng),
        Entity::Rna => pick(b"ACGUN", rng),
        Entity::Material => {
            const EL: [&str; 8] = ["Li", "O", "Fe", "Ti", "Re", "C", "Os", "Mn"];
            let mut words: Vec<String> = (0..rng.gen_range(1..8))
                .map(|_| EL.choose(rng).unwrap().to_string())
                .collect();
            words.push(format!("<sg{}>", rng.gen_range(1..=230)));
            if rng.gen_bool(0.5) {
                words.insert(words.len() - 1, "<sg>".into());
                words.push("<coord>".into());
                for _ in 0..rng.gen_range(1..10) {
                    let x: f64 = rng.gen_range(-20.0..20.0);
                    words.push(format!("{x:.4}"));
                }
            }
            words.join(" ")
        }
        _ => unreachable!(),
    }
}

fn random_text<R: Rng>(rng: &mut R) -> String {
    const PIECES: [&str; 14] = [
        "a", "Z", " ", "\n", "\t", "<", ">", "/", "é", "温", "🧪", "mol", "0", "\u{0}",
    ];
    loop {
        let s: String = (0..rng.gen_range(0..40))
            .map(|_| *PIECES.choose(rng).unwrap())
            .collect();
        // Text that spells a boundary tag is not plain text.
        if !Entity::ALL
            .iter()
            .any(|e| s.contains(&e.open()) || s.contains(&e.close()))
        {
            return s;
        }
    }
}

fn round_trip_criterion(v: &Vocabulary) -> Outcome {
    let start = Instant::now();
    let tk = Tokenizer::new(v);
    let mut rng = common::rng(7);
    let check_one = |s: &str| -> Result<(), String> {
        let ts = tk.tokenize_tagged(s).map_err(|e| format!("{s:?}: {e}"))?;
        let back = detokenize(&ts).map_err(|e| format!("{s:?}: {e}"))?;
        check(back == s, || format!("{s:?} came back as {back:?}"))?;
        let ids = encode(v, &ts).map_err(|e| format!("{s:?}: {e}"))?;
        let decoded = decode(v, &ids).map_err(|e| format!("{s:?}: {e}"))?;
        check(decoded.tokens() == ts.tokens(), || {
            format!("{s:?}: id round trip")
        })
    };
    for _ in 0..10_000 {
        check_one(&random_text(&mut rng))?;
    }
    let entities = [
        Entity::Mol,
        Entity::Protein,
        Entity::Dna,
        Entity::Rna,
        Entity::Material,
    ];
    for e in entities {
        for _ in 0..10_000 {
            let payload = random_payload(e, v, &mut rng);
            let s = format!(
                "{}{}{}{}",
                random_text(&mut rng),
                e.open(),
                payload,
                e.close()
            );
            check_one(&s)?;
        }
    }

    let docs: Vec<Vec<u32>> = (0..1000)
        .map(|_| {
            let n = rng.gen_range(0..300);
            (0..n).map(|_| rng.gen_range(0..v.len() as u32)).collect()
        })
        .collect();
    let total: usize = docs.iter().map(Vec::len).sum();
    for l in [2, 64, 1024] {
        let rows = pack_pretrain(&docs, l, 0).map_err(|e| e.to_string())?;
        check(rows.iter().all(|r| r.ids.len() == l), || {
            format!("L={l}: row length")
        })?;
        let packed: usize = rows.iter().map(|r| r.occupied()).sum();
        check(packed == total, || {
            format!("L={l}: {packed} of {total} tokens")
        })?;
        let seen = docs
            .iter()
            .rposition(|d| !d.is_empty())
            .map_or(0, |i| i + 1);
        check(unpack(&rows) == docs[..seen], || {
            format!("L={l}: unpack differs")
        })?;
    }
    let t = within(start, ROUND_TRIP_LIMIT)?;
    Ok(format!("6 x 10000 strings, 1000 docs, {t:?}"))
}

fn random_dna<R: Rng>(n: usize, rng: &mut R) -> String {
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.02) {
                'N'
            } else {
                *b"ACGT".choose(rng).unwrap() as char
            }
        })
        .collect()
}

fn revcomp(s: &str) -> String {
    s.chars()
        .rev()
        .map(|c| match c {
            'A' => 'T',
            'T' => 'A',
            'C' => 'G',
            'G' => 'C',
            _ => 'N',
        })
        .collect()
}

fn crrna(target: &str, guide: &str) -> Result<nature_seqkit::bioseq::CrRnaVerdict, String> {
    validate_crrna(
        &NucleotideSeq::dna(target).map_err(|e| e.to_string())?,
        &NucleotideSeq::dna(guide).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())
}

fn crrna_criterion() -> Outcome {
    let mut rng = common::rng(8);
    let mut valid = 0;
    for i in 0..10_000 {
        let n = rng.gen_range(20..80);
        let mut target = random_dna(n, &mut rng);
        let len = rng.gen_range(14..28).min(n);
        let guide = match rng.gen_range(0..4) {
            0 => random_dna(len, &mut rng).replace('N', "A"),
            k => {
                let at = rng.gen_range(0..=n - len);
                if k == 3 && at + len + 3 <= n {
                    target.replace_range(at + len + 1..at + len + 3, "GG");
                }
                let g = target[at..at + len].replace('N', "A");
                if rng.gen_bool(0.5) {
                    revcomp(&g)
                } else {
                    g
                }
            }
        };
        let got = crrna(&target, &guide)?;
        let want = common::crrna_oracle(&target, &guide);
        check(got == want, || {
            format!("pair {i} {target} {guide}: {got:?} vs {want:?}")
        })?;
        valid += usize::from(got.valid);
    }

    let guide = "GATTACAGATTACAGATTAC";
    let base = format!("TTT{guide}TGGAAA");
    let v = crrna(&base, guide)?;
    check(v.valid, || format!("base case {v:?}"))?;
    let only = |t: &str, g: &str, f: CrRnaFailure| -> Result<(), String> {
        let v = crrna(t, g)?;
        check(!v.valid && v.failures == [f], || {
            format!("{t} {g}: {v:?}, wanted {f:?}")
        })
    };
    only(
        &format!("TTT{}TGGAAA", &guide[..16]),
        &guide[..16],
        CrRnaFailure::LengthOutOfRange,
    )?;
    let long = format!("{guide}ACGTA");
    only(
        &format!("TTT{long}TGGAAA"),
        &long,
        CrRnaFailure::LengthOutOfRange,
    )?;
    only(&base, "GATTACAGATTACAGATTAG", CrRnaFailure::NoTargetMatch)?;
    only(&format!("TTT{guide}TGCAAA"), guide, CrRnaFailure::NoPam)?;
    Ok(format!("10000 pairs ({valid} valid), 4 counterexamples"))
}

const PANEL: [&str; 20] = [
    "H", "Li", "Na", "K", "Mg", "Ca", "Al", "Ti", "Mn", "Fe", "Cu", "Zn", "C", "N", "O", "S", "F",
    "Cl", "Br", "Sn",
];

fn smact_criterion() -> Outcome {
    let tables = Tables::embedded();
    let mut checked = 0usize;
    let mut valid = 0usize;
    let mut sets: Vec<Vec<&str>> = Vec::new();
    for (i, a) in PANEL.iter().enumerate() {
        sets.push(vec![*a]);
        for (j, b) in PANEL.iter().enumerate().skip(i + 1) {
            sets.push(vec![*a, *b]);
            for c in &PANEL[j + 1..] {
                sets.push(vec![*a, *b, *c]);
            }
        }
    }
    for set in &sets {
        let k = set.len() as u32;
        for code in 0..8u32.pow(k) {
            let comp: Vec<(&str, u32)> = set
                .iter()
                .enumerate()
                .map(|(i, e)| (*e, code / 8u32.pow(i as u32) % 8 + 1))
                .collect();
            let c = Composition::new(comp.iter().copied()).map_err(|e| e.to_string())?;
            let got = smact_valid(&c, &tables).map_err(|e| e.to_string())?;
            let want = common::smact_oracle(&comp, &tables);
            check(got.valid == want, || {
                format!("{comp:?}: {} vs {want}", got.valid)
            })?;
            if let Some(w) = &got.witness {
                if comp.len() > 1 {
                    let pairs: Vec<(&str, u32, i8)> = comp
                        .iter()
                        .zip(w)
                        .map(|((e, n), (s, st))| {
                            assert_eq!(e, s);
                            (*e, *n, *st)
                        })
                        .collect();
                    check(common::smact_acceptable(&pairs, &tables), || {
                        format!("{comp:?}: bad witness {w:?}")
                    })?;
                }
            }
            checked += 1;
            valid += usize::from(got.valid);
        }
    }
    let nacl = smact_valid(&Composition::new([("Na", 1), ("Cl", 1)]).unwrap(), &tables)
        .map_err(|e| e.to_string())?;
    let w = nacl.witness.clone().unwrap_or_default();
    check(
        nacl.valid && w == [("Na".to_string(), 1), ("Cl".to_string(), -1)],
        || format!("NaCl {nacl:?}"),
    )?;
    Ok(format!(
        "{checked} compositions ({valid} valid), NaCl {{+1,-1}}"
    ))
}

fn thresholds_criterion() -> Outcome {
    let t = STABILITY_THRESHOLD;
    check(t == 0.1, || format!("threshold {t}"))?;
    let r = stability_rate(&[0.1], t).map_err(|e| e.to_string())?;
    check(r == 0.0, || format!("0.1 counted stable ({r})"))?;
    let r =
        stability_rate(&[0.099_999_999, 0.1, 0.100_000_001, -0.5], t).map_err(|e| e.to_string())?;
    check(r == 0.5, || format!("boundary rate {r}"))?;
    for (value, pass) in [(390.0, true), (394.0, true), (360.0, false)] {
        let s = success_within(&[value], &[400.0], SUCCESS_REL_TOL).map_err(|e| e.to_string())?;
        check((s == 1.0) == pass, || format!("{value} vs 400 gave {s}"))?;
    }
    Ok("stability strict at 0.1; 390, 394 pass; 360 fails".into())
}

fn spearman_criterion() -> Outcome {
    let mut rng = common::rng(11);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 1000 {
        let n = rng.gen_range(2..60);
        let levels = if rng.gen_bool(0.5) {
            rng.gen_range(2..6)
        } else {
            1_000_000
        };
        let gen = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            (0..n)
                .map(|_| rng.gen_range(0..levels) as f64 * 0.37 - 3.0)
                .collect()
        };
        let x = gen(&mut rng);
        let y = gen(&mut rng);
        let want = common::naive_spearman(&x, &y);
        match spearman(&x, &y) {
            Ok(got) => {
                check(want.is_finite(), || {
                    format!("{x:?} {y:?}: oracle undefined, got {got}")
                })?;
                worst = worst.max((got - want).abs());
            }
            Err(_) => {
                let constant = |v: &[f64]| v.iter().all(|a| *a == v[0]);
                check(constant(&x) || constant(&y), || {
                    format!("{x:?} {y:?}: spurious error")
                })?;
                continue;
            }
        }
        done += 1;
    }
    check(worst <= SPEARMAN_TOL, || format!("max error {worst:e}"))?;
    Ok(format!("1000 inputs, max error {worst:e}"))
}

fn main() {
    let v = default_vocab();
    let criteria: Vec<Criterion> = vec![
        (
            "template byte-exactness",
            Box::new(|| template_exactness(&v)),
        ),
        ("benzene golden", Box::new(benzene)),
        ("amino-acid recovery", Box::new(aar_criterion)),
        ("composition precision", Box::new(precision_criterion)),
        ("poscar fidelity", Box::new(poscar_criterion)),
        ("canonicalization invariance", Box::new(canon_criterion)),
        ("round-trip suites", Box::new(|| round_trip_criterion(&v))),
        ("crrna oracle", Box::new(crrna_criterion)),
        ("smact exhaustive", Box::new(smact_criterion)),
        ("metric thresholds", Box::new(thresholds_criterion)),
        ("spearman oracle", Box::new(spearman_criterion)),
    ];
    let mut failed = Vec::new();
    for (name, f) in &criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(*name);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
