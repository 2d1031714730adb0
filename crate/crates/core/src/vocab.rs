//! Multi-domain vocabulary: base text tokens, per-domain scientific alphabets
//! and special boundary tokens, plus the staged-training freeze partition.
//!
//! Token ids are dense and ascending. The base text tokens keep ids
//! `0..base_size`; domain tokens follow in the fixed order mol, protein,
//! material, dna, rna and the boundary specials come last.
//!
//! # File format
//!
//! ```text
//! #naturelm-vocab v1 base=<N>
//! <id>\t<domain>\t<special:0|1>\t<token>
//! ```
//!
//! The token field escapes backslash, tab, newline and carriage return as
//! `\\`, `\t`, `\n` and `\r`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::elements;

#[derive(Debug, thiserror::Error)]
pub enum VocabError {
    #[error("base token list is empty")]
    EmptyBase,
    #[error("duplicate token {token:?} in domain {domain}")]
    DuplicateToken { domain: Domain, token: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("alphabet for {domain} needs {required} tokens but the target is {target}")]
    TargetTooSmall {
        domain: Domain,
        required: usize,
        target: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Domain tag carried by every token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Text,
    Mol,
    Protein,
    Material,
    Dna,
    Rna,
    Special,
}

impl Domain {
    /// Scientific domains in vocabulary order.
    pub const SCIENTIFIC: [Domain; 5] = [
        Domain::Mol,
        Domain::Protein,
        Domain::Material,
        Domain::Dna,
        Domain::Rna,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Text => "text",
            Domain::Mol => "mol",
            Domain::Protein => "protein",
            Domain::Material => "material",
            Domain::Dna => "dna",
            Domain::Rna => "rna",
            Domain::Special => "special",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "text" => Domain::Text,
            "mol" => Domain::Mol,
            "protein" => Domain::Protein,
            "material" => Domain::Material,
            "dna" => Domain::Dna,
            "rna" => Domain::Rna,
            "special" => Domain::Special,
            other => return Err(format!("unknown domain {other:?}")),
        })
    }
}

/// Kinds of entities delimited by an open/close boundary pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Entity {
    #[serde(rename = "mol")]
    Mol,
    #[serde(rename = "protein")]
    Protein,
    #[serde(rename = "material")]
    Material,
    #[serde(rename = "dna")]
    Dna,
    #[serde(rename = "rna")]
    Rna,
    #[serde(rename = "product")]
    Product,
    #[serde(rename = "reactant")]
    Reactant,
    #[serde(rename = "antibody")]
    Antibody,
    #[serde(rename = "fragA")]
    FragA,
    #[serde(rename = "fragB")]
    FragB,
}

impl Entity {
    pub const ALL: [Entity; 10] = [
        Entity::Mol,
        Entity::Protein,
        Entity::Material,
        Entity::Dna,
        Entity::Rna,
        Entity::Product,
        Entity::Reactant,
        Entity::Antibody,
        Entity::FragA,
        Entity::FragB,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Entity::Mol => "mol",
            Entity::Protein => "protein",
            Entity::Material => "material",
            Entity::Dna => "dna",
            Entity::Rna => "rna",
            Entity::Product => "product",
            Entity::Reactant => "reactant",
            Entity::Antibody => "antibody",
            Entity::FragA => "fragA",
            Entity::FragB => "fragB",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Entity> {
        Entity::ALL.into_iter().find(|e| e.tag() == tag)
    }

    /// Domain whose tokenizer handles the entity payload.
    pub fn content_domain(self) -> Domain {
        match self {
            Entity::Mol | Entity::Product | Entity::Reactant | Entity::FragA | Entity::FragB => {
                Domain::Mol
            }
            Entity::Protein | Entity::Antibody => Domain::Protein,
            Entity::Material => Domain::Material,
            Entity::Dna => Domain::Dna,
            Entity::Rna => Domain::Rna,
        }
    }

    pub fn open(self) -> String {
        format!("<{}>", self.tag())
    }

    pub fn close(self) -> String {
        format!("</{}>", self.tag())
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Entity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Entity::from_tag(s).ok_or_else(|| format!("unknown entity {s:?}"))
    }
}

/// Special tokens. Rendered in plain text with ASCII angle brackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialToken {
    Open(Entity),
    Close(Entity),
    /// Space-group marker `<sg>`.
    Sg,
    /// Space group `<sgN>`, `N` in 1..=230.
    SpaceGroup(u8),
    /// Start of the coordinate block.
    Coord,
    Pad,
    /// End of document / end of text.
    Eod,
}

impl SpecialToken {
    pub fn render(self) -> String {
        match self {
            SpecialToken::Open(e) => e.open(),
            SpecialToken::Close(e) => e.close(),
            SpecialToken::Sg => "<sg>".to_string(),
            SpecialToken::SpaceGroup(n) => format!("<sg{n}>"),
            SpecialToken::Coord => "<coord>".to_string(),
            SpecialToken::Pad => "<pad>".to_string(),
            SpecialToken::Eod => "<eod>".to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<SpecialToken> {
        let inner = s.strip_prefix('<')?.strip_suffix('>')?;
        if let Some(tag) = inner.strip_prefix('/') {
            return Entity::from_tag(tag).map(SpecialToken::Close);
        }
        if let Some(e) = Entity::from_tag(inner) {
            return Some(SpecialToken::Open(e));
        }
        match inner {
            "sg" => return Some(SpecialToken::Sg),
            "coord" => return Some(SpecialToken::Coord),
            "pad" => return Some(SpecialToken::Pad),
            "eod" => return Some(SpecialToken::Eod),
            _ => {}
        }
        let digits = inner.strip_prefix("sg")?;
        if digits.is_empty()
            || digits.starts_with('0')
            || !digits.bytes().all(|b| b.is_ascii_digit())
        {
            return None;
        }
        let n: u16 = digits.parse().ok()?;
        (1..=230)
            .contains(&n)
            .then_some(SpecialToken::SpaceGroup(n as u8))
    }

    /// Whether this token lives in the material domain rather than the
    /// special domain.
    pub fn is_material_marker(self) -> bool {
        matches!(
            self,
            SpecialToken::Sg | SpecialToken::SpaceGroup(_) | SpecialToken::Coord
        )
    }

    /// Boundary pairs followed by pad and end-of-document.
    pub fn boundary_set() -> Vec<SpecialToken> {
        let mut out = Vec::with_capacity(Entity::ALL.len() * 2 + 2);
        for e in Entity::ALL {
            out.push(SpecialToken::Open(e));
            out.push(SpecialToken::Close(e));
        }
        out.push(SpecialToken::Pad);
        out.push(SpecialToken::Eod);
        out
    }

    /// `<sg>`, `<sg1>`..`<sg230>`, `<coord>`.
    pub fn material_set() -> Vec<SpecialToken> {
        let mut out = Vec::with_capacity(232);
        out.push(SpecialToken::Sg);
        out.extend((1..=230u8).map(SpecialToken::SpaceGroup));
        out.push(SpecialToken::Coord);
        out
    }
}

impl fmt::Display for SpecialToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabEntry {
    pub token: String,
    pub id: u32,
    pub domain: Domain,
    pub special: bool,
}

/// Input alphabets keyed by domain. Text and special domains are ignored.
pub type DomainAlphabets = BTreeMap<Domain, Vec<String>>;

#[derive(Debug, Clone)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    base_size: usize,
    domain_counts: BTreeMap<Domain, usize>,
    index: HashMap<(Domain, String), u32>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.base_size == other.base_size && self.entries == other.entries
    }
}

impl Eq for Vocabulary {}

/// Ids `[0, base_size)` stay frozen in the first training stage; the
/// newly introduced ids are trainable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreezePartition {
    pub frozen: Range<u32>,
    pub trainable: Range<u32>,
}

impl FreezePartition {
    pub fn is_frozen(&self, id: u32) -> bool {
        self.frozen.contains(&id)
    }
}

/// Builds a vocabulary from base text tokens and per-domain alphabets.
///
/// When a material alphabet is present, any of `<sg>`, `<sg1>`..`<sg230>`
/// and `<coord>` it lacks are appended to it.
pub fn build_vocab(
    base_tokens: &[String],
    domain_alphabets: &DomainAlphabets,
) -> Result<Vocabulary, VocabError> {
    if base_tokens.is_empty() {
        return Err(VocabError::EmptyBase);
    }
    let mut b = Builder::default();
    for t in base_tokens {
        b.push(t.clone(), Domain::Text, false)?;
    }
    let base_size = b.entries.len();
    for domain in Domain::SCIENTIFIC {
        let Some(alphabet) = domain_alphabets.get(&domain) else {
            continue;
        };
        for t in alphabet {
            let special = match SpecialToken::parse(t) {
                Some(s) if domain == Domain::Material && s.is_material_marker() => true,
                Some(_) => {
                    return Err(VocabError::DuplicateToken {
                        domain: Domain::Special,
                        token: t.clone(),
                    })
                }
                None => false,
            };
            b.push(t.clone(), domain, special)?;
        }
        if domain == Domain::Material {
            for s in SpecialToken::material_set() {
                let t = s.render();
                if !b.index.contains_key(&(Domain::Material, t.clone())) {
                    b.push(t, Domain::Material, true)?;
                }
            }
        }
    }
    for s in SpecialToken::boundary_set() {
        b.push(s.render(), Domain::Special, true)?;
    }
    Ok(b.finish(base_size))
}

#[derive(Default)]
struct Builder {
    entries: Vec<VocabEntry>,
    index: HashMap<(Domain, String), u32>,
}

impl Builder {
    fn push(&mut self, token: String, domain: Domain, special: bool) -> Result<(), VocabError> {
        let id = self.entries.len() as u32;
        if self.index.insert((domain, token.clone()), id).is_some() {
            return Err(VocabError::DuplicateToken { domain, token });
        }
        self.entries.push(VocabEntry {
            token,
            id,
            domain,
            special,
        });
        Ok(())
    }

    fn finish(self, base_size: usize) -> Vocabulary {
        let mut domain_counts = BTreeMap::new();
        for e in &self.entries {
            if e.domain != Domain::Text {
                *domain_counts.entry(e.domain).or_insert(0) += 1;
            }
        }
        Vocabulary {
            entries: self.entries,
            base_size,
            domain_counts,
            index: self.index,
        }
    }
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn entry(&self, id: u32) -> Option<&VocabEntry> {
        self.entries.get(id as usize)
    }

    /// Token counts per non-text domain.
    pub fn domain_counts(&self) -> &BTreeMap<Domain, usize> {
        &self.domain_counts
    }

    pub fn domain_count(&self, domain: Domain) -> usize {
        self.domain_counts.get(&domain).copied().unwrap_or(0)
    }

    pub fn id(&self, domain: Domain, token: &str) -> Option<u32> {
        self.index.get(&(domain, token.to_string())).copied()
    }

    pub fn special_id(&self, token: SpecialToken) -> Option<u32> {
        let domain = if token.is_material_marker() {
            Domain::Material
        } else {
            Domain::Special
        };
        self.id(domain, &token.render())
    }

    pub fn freeze_partition(&self) -> FreezePartition {
        freeze_partition(self)
    }

    pub fn save<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "#naturelm-vocab v1 base={}", self.base_size)?;
        for e in &self.entries {
            writeln!(
                w,
                "{}\t{}\t{}\t{}",
                e.id,
                e.domain,
                u8::from(e.special),
                escape(&e.token)
            )?;
        }
        Ok(())
    }

    pub fn to_file_string(&self) -> String {
        let mut buf = Vec::new();
        self.save(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("vocabulary tokens are UTF-8")
    }

    pub fn load<R: BufRead>(r: R) -> Result<Vocabulary, VocabError> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| VocabError::Parse {
            line: 1,
            message: "missing header".into(),
        })??;
        let base_size: usize = header
            .strip_prefix("#naturelm-vocab v1 base=")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| VocabError::Parse {
                line: 1,
                message: format!("bad header {header:?}"),
            })?;
        let mut b = Builder::default();
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let line = line?;
            let perr = |message: String| VocabError::Parse {
                line: lineno,
                message,
            };
            let mut fields = line.splitn(4, '\t');
            let (Some(id), Some(domain), Some(special), Some(token)) =
                (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(perr("expected 4 tab-separated fields".into()));
            };
            let id: u32 = id.parse().map_err(|_| perr(format!("bad id {id:?}")))?;
            if id as usize != b.entries.len() {
                return Err(perr(format!(
                    "id {id} out of sequence (expected {})",
                    b.entries.len()
                )));
            }
            let domain: Domain = domain.parse().map_err(perr)?;
            let special = match special {
                "0" => false,
                "1" => true,
                other => return Err(perr(format!("bad special flag {other:?}"))),
            };
            let token = unescape(token).map_err(perr)?;
            let in_base = (id as usize) < base_size;
            if in_base != (domain == Domain::Text) {
                return Err(perr(format!(
                    "domain {domain} inconsistent with base size {base_size}"
                )));
            }
            b.push(token, domain, special)
                .map_err(|e| perr(e.to_string()))?;
        }
        if b.entries.len() < base_size {
            return Err(VocabError::Parse {
                line: b.entries.len() + 1,
                message: format!("file holds fewer than base={base_size} tokens"),
            });
        }
        Ok(b.finish(base_size))
    }

    pub fn from_file_str(s: &str) -> Result<Vocabulary, VocabError> {
        Vocabulary::load(s.as_bytes())
    }
}

pub fn freeze_partition(v: &Vocabulary) -> FreezePartition {
    let base = v.base_size as u32;
    let total = v.len() as u32;
    FreezePartition {
        frozen: 0..base,
        trainable: base..total,
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => {
                return Err(format!(
                    "bad escape \\{}",
                    other.map(String::from).unwrap_or_default()
                ))
            }
        }
    }
    Ok(out)
}

/// Target alphabet sizes per domain. Defaults to 1401 mol, 26 protein,
/// 396 material, 16 DNA and 16 RNA tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetTargets {
    pub mol: usize,
    pub protein: usize,
    pub material: usize,
    pub dna: usize,
    pub rna: usize,
}

impl Default for AlphabetTargets {
    fn default() -> Self {
        AlphabetTargets {
            mol: 1401,
            protein: 26,
            material: 396,
            dna: 16,
            rna: 16,
        }
    }
}

/// Byte-level base vocabulary: printable ASCII bytes are their own
/// character, every other byte is `<0xNN>`.
pub fn byte_base_tokens() -> Vec<String> {
    (0u8..=255)
        .map(|b| {
            if (0x20..=0x7e).contains(&b) {
                (b as char).to_string()
            } else {
                byte_token(b)
            }
        })
        .collect()
}

pub fn byte_token(b: u8) -> String {
    format!("<0x{b:02X}>")
}

/// Parses a `<0xNN>` byte-fallback token.
pub fn parse_byte_token(s: &str) -> Option<u8> {
    let hex = s.strip_prefix("<0x")?.strip_suffix('>')?;
    if hex.len() != 2 {
        return None;
    }
    u8::from_str_radix(hex, 16).ok()
}

pub const SMILES_PUNCTUATION: [&str; 15] = [
    "(", ")", ".", "=", "#", "-", "+", "\\", "/", ":", "~", "@", "?", ">", "$",
];

pub const SMILES_ORGANIC: [&str; 17] = [
    "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I", "b", "c", "n", "o", "s", "p", "*",
];

/// The standard alphabets padded to `targets`.
///
/// * mol: organic-subset atoms, punctuation, ring-closure labels `0`..`9`
///   and `%10`..`%99`, then bracket atoms enumerated over a fixed list of
///   common aromatic forms and per-element variants until the target is
///   reached.
/// * protein: `A`..`Z`.
/// * material: the 118 element symbols, `<sg>`, `<sg1>`..`<sg230>`,
///   `<coord>`, the number characters `0`..`9 - .`, then reserved fillers.
/// * dna / rna: `A C G T N` / `A C G U N`, then reserved fillers.
pub fn standard_alphabets(targets: &AlphabetTargets) -> Result<DomainAlphabets, VocabError> {
    let mut out = DomainAlphabets::new();

    let mut mol: Vec<String> = SMILES_ORGANIC.iter().map(|s| s.to_string()).collect();
    mol.extend(SMILES_PUNCTUATION.iter().map(|s| s.to_string()));
    mol.extend((0..10).map(|d| d.to_string()));
    mol.extend((10..100).map(|d| format!("%{d}")));
    let required = mol.len();
    if targets.mol < required {
        return Err(VocabError::TargetTooSmall {
            domain: Domain::Mol,
            required,
            target: targets.mol,
        });
    }
    let mut seen: std::collections::HashSet<String> = mol.iter().cloned().collect();
    for t in bracket_atom_candidates() {
        if mol.len() >= targets.mol {
            break;
        }
        if seen.insert(t.clone()) {
            mol.push(t);
        }
    }
    pad_to(&mut mol, targets.mol, "mol");
    out.insert(Domain::Mol, mol);

    let protein: Vec<String> = ('A'..='Z').map(String::from).collect();
    if targets.protein < protein.len() {
        return Err(VocabError::TargetTooSmall {
            domain: Domain::Protein,
            required: protein.len(),
            target: targets.protein,
        });
    }
    let mut protein = protein;
    pad_to(&mut protein, targets.protein, "protein");
    out.insert(Domain::Protein, protein);

    let mut material: Vec<String> = elements::SYMBOLS.iter().map(|s| s.to_string()).collect();
    material.extend(
        SpecialToken::material_set()
            .into_iter()
            .map(SpecialToken::render),
    );
    material.extend(('0'..='9').map(String::from));
    material.push("-".into());
    material.push(".".into());
    if targets.material < material.len() {
        return Err(VocabError::TargetTooSmall {
            domain: Domain::Material,
            required: material.len(),
            target: targets.material,
        });
    }
    pad_to(&mut material, targets.material, "material");
    out.insert(Domain::Material, material);

    for (domain, letters, target) in [
        (Domain::Dna, ["A", "C", "G", "T", "N"], targets.dna),
        (Domain::Rna, ["A", "C", "G", "U", "N"], targets.rna),
    ] {
        if target < letters.len() {
            return Err(VocabError::TargetTooSmall {
                domain,
                required: letters.len(),
                target,
            });
        }
        let mut v: Vec<String> = letters.iter().map(|s| s.to_string()).collect();
        pad_to(&mut v, target, domain.as_str());
        out.insert(domain, v);
    }
    Ok(out)
}

fn pad_to(v: &mut Vec<String>, target: usize, prefix: &str) {
    let mut k = 0;
    while v.len() < target {
        v.push(format!("<{prefix}_reserved_{k}>"));
        k += 1;
    }
}

fn bracket_atom_candidates() -> impl Iterator<Item = String> {
    const AROMATIC: [&str; 24] = [
        "[nH]", "[n+]", "[n-]", "[nH+]", "[o+]", "[s+]", "[se]", "[te]", "[as]", "[cH-]", "[c-]",
        "[c+]", "[b-]", "[p+]", "[pH]", "[sH+]", "[se+]", "[te+]", "[n]", "[c]", "[o]", "[s]",
        "[b]", "[p]",
    ];
    const VARIANTS: [&str; 12] = [
        "", "H", "H2", "H3", "+", "-", "H+", "@H", "@@H", "@", "@@", "+2",
    ];
    let per_element = elements::SYMBOLS
        .iter()
        .flat_map(|sym| VARIANTS.iter().map(move |v| format!("[{sym}{v}]")));
    AROMATIC.iter().map(|s| s.to_string()).chain(per_element)
}

/// Vocabulary with the byte-level base and the standard alphabets at the
/// default targets.
pub fn default_vocab() -> Vocabulary {
    let alphabets =
        standard_alphabets(&AlphabetTargets::default()).expect("default targets are satisfiable");
    build_vocab(&byte_base_tokens(), &alphabets).expect("standard alphabets are duplicate-free")
}
