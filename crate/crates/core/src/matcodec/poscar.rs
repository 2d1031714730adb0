use super::{Composition, CrystalStructure, MatError};

/// A parsed VASP 5 POSCAR. Numbers are also kept as written so they can be
/// reproduced exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Poscar {
    pub comment: String,
    pub scale: f64,
    pub structure: CrystalStructure,
    /// Lattice values as written, before scaling, row-major.
    pub raw_lattice: Vec<String>,
    /// Coordinate values as written, one triple per atom.
    pub raw_coords: Vec<[String; 3]>,
    /// Trailing per-row labels such as `Re1`.
    pub labels: Vec<Option<String>>,
}

fn err(line: usize, message: impl Into<String>) -> MatError {
    MatError::Poscar {
        line,
        message: message.into(),
    }
}

/// Parsed values, the same values as written, and any trailing words.
type Floats = (Vec<f64>, Vec<String>, Vec<String>);

fn floats(line: usize, text: &str, n: usize) -> Result<Floats, MatError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.len() < n {
        return Err(err(
            line,
            format!("expected {n} numbers, found {}", words.len()),
        ));
    }
    let mut vals = Vec::with_capacity(n);
    for w in &words[..n] {
        vals.push(
            w.parse::<f64>()
                .map_err(|_| err(line, format!("bad number {w:?}")))?,
        );
    }
    Ok((
        vals,
        words[..n].iter().map(|w| w.to_string()).collect(),
        words[n..].iter().map(|w| w.to_string()).collect(),
    ))
}

/// Reads a VASP 5 POSCAR in Direct mode. POSCAR carries no symmetry, so
/// the space group is supplied by the caller. Lattice rows are multiplied
/// by the scale factor; coordinates are wrapped into [0, 1).
pub fn parse_poscar(text: &str, space_group: u32) -> Result<Poscar, MatError> {
    let lines: Vec<&str> = text.lines().collect();
    let get = |i: usize| {
        lines
            .get(i)
            .copied()
            .ok_or_else(|| err(i + 1, "unexpected end of file"))
    };

    let comment = get(0)?.trim().to_string();
    let scale_words: Vec<&str> = get(1)?.split_whitespace().collect();
    if scale_words.len() != 1 {
        return Err(MatError::Unsupported("per-axis scale factors".into()));
    }
    let scale: f64 = scale_words[0]
        .parse()
        .map_err(|_| err(2, format!("bad scale factor {:?}", scale_words[0])))?;
    if scale <= 0.0 {
        return Err(MatError::Unsupported("volume scale factor".into()));
    }

    let mut lattice = [0.0; 9];
    let mut raw_lattice = Vec::with_capacity(9);
    for r in 0..3 {
        let (vals, raw, _) = floats(3 + r, get(2 + r)?, 3)?;
        for c in 0..3 {
            lattice[3 * r + c] = vals[c] * scale;
        }
        raw_lattice.extend(raw);
    }

    let symbols: Vec<&str> = get(5)?.split_whitespace().collect();
    if symbols.is_empty() || symbols[0].parse::<f64>().is_ok() {
        return Err(MatError::Unsupported(
            "POSCAR without an element-symbol line".into(),
        ));
    }
    let counts: Vec<u32> = get(6)?
        .split_whitespace()
        .map(|w| {
            w.parse::<u32>()
                .map_err(|_| err(7, format!("bad count {w:?}")))
        })
        .collect::<Result<_, _>>()?;
    if counts.len() != symbols.len() {
        return Err(err(
            7,
            format!("{} counts for {} elements", counts.len(), symbols.len()),
        ));
    }
    let composition = Composition::new(symbols.iter().copied().zip(counts.iter().copied()))
        .map_err(|e| err(6, e.to_string()))?;

    let mut i = 7;
    if get(i)?.trim_start().starts_with(['S', 's']) {
        i += 1;
    }
    let mode = get(i)?.trim_start();
    match mode.chars().next() {
        Some('D' | 'd') => {}
        Some('C' | 'c' | 'K' | 'k') => {
            return Err(MatError::Unsupported("Cartesian coordinates".into()))
        }
        _ => return Err(err(i + 1, format!("unknown coordinate mode {mode:?}"))),
    }
    i += 1;

    let n = composition.atom_count();
    let mut coords = Vec::with_capacity(n);
    let mut raw_coords = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for k in 0..n {
        let line = lines
            .get(i + k)
            .filter(|l| !l.trim().is_empty())
            .ok_or_else(|| {
                err(
                    i + k + 1,
                    format!("expected {n} coordinate rows, found {k}"),
                )
            })?;
        let (vals, raw, rest) = floats(i + k + 1, line, 3)?;
        let wrap = |x: f64| {
            let w = x - x.floor();
            if w >= 1.0 {
                0.0
            } else {
                w
            }
        };
        coords.push([wrap(vals[0]), wrap(vals[1]), wrap(vals[2])]);
        raw_coords.push([raw[0].clone(), raw[1].clone(), raw[2].clone()]);
        labels.push(rest.into_iter().find(|w| !matches!(w.as_str(), "T" | "F")));
    }
    if let Some(extra) = lines.get(i + n).filter(|l| !l.trim().is_empty()) {
        if floats(i + n + 1, extra, 3).is_ok() {
            return Err(err(
                i + n + 1,
                format!("more coordinate rows than the {n} atoms counted"),
            ));
        }
    }

    let structure = CrystalStructure::new(composition, space_group, lattice, coords)?;
    Ok(Poscar {
        comment,
        scale,
        structure,
        raw_lattice,
        raw_coords,
        labels,
    })
}
