use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{Composition, MatError, Tables};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmactVerdict {
    pub valid: bool,
    /// A charge-neutral, electronegativity-ordered assignment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<(String, i8)>>,
    /// For invalid compositions: the assignment with the smallest net
    /// charge, ignoring electronegativity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nearest_miss: Option<NearestMiss>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearestMiss {
    pub assignment: Vec<(String, i8)>,
    pub charge: i64,
    pub electronegativity_ok: bool,
}

struct Problem<'a> {
    symbols: Vec<&'a str>,
    counts: Vec<i64>,
    states: Vec<&'a [i8]>,
    /// Electronegativities, or `None` if any element lacks one, in which
    /// case the ordering test is skipped. `en_ok` also accepts a prefix of
    /// the elements.
    en: Option<Vec<f64>>,
}

impl Problem<'_> {
    fn en_ok(&self, states: &[i8]) -> bool {
        let Some(en) = &self.en else { return true };
        let cation = states
            .iter()
            .zip(en)
            .filter(|(s, _)| **s > 0)
            .map(|(_, e)| *e)
            .fold(f64::NEG_INFINITY, f64::max);
        let anion = states
            .iter()
            .zip(en)
            .filter(|(s, _)| **s < 0)
            .map(|(_, e)| *e)
            .fold(f64::INFINITY, f64::min);
        cation < anion
    }

    fn named(&self, states: &[i8]) -> Vec<(String, i8)> {
        self.symbols
            .iter()
            .zip(states)
            .map(|(s, v)| (s.to_string(), *v))
            .collect()
    }
}

/// Oxidation-state screening: valid iff some choice of one common state
/// per element makes the formula charge-neutral with every cation strictly
/// less electronegative than every anion. A single-element composition is
/// valid with state zero.
pub fn smact_valid(c: &Composition, tables: &Tables) -> Result<SmactVerdict, MatError> {
    let mut symbols = Vec::new();
    let mut counts = Vec::new();
    let mut states = Vec::new();
    for (s, n) in c.counts() {
        let st = tables
            .oxidation_states(s)
            .ok_or_else(|| MatError::UnknownElement(s.clone()))?;
        symbols.push(s.as_str());
        counts.push(*n as i64);
        states.push(st);
    }
    if symbols.len() == 1 {
        return Ok(SmactVerdict {
            valid: true,
            witness: Some(vec![(symbols[0].to_string(), 0)]),
            nearest_miss: None,
        });
    }
    let en = symbols
        .iter()
        .map(|s| tables.electronegativity(s))
        .collect::<Option<Vec<f64>>>();
    let p = Problem {
        symbols,
        counts,
        states,
        en,
    };
    if p.states.iter().any(|s| s.is_empty()) {
        return Ok(SmactVerdict {
            valid: false,
            witness: None,
            nearest_miss: None,
        });
    }

    // reach[i]: net charges attainable by elements i.. .
    let k = p.symbols.len();
    let mut reach: Vec<HashSet<i64>> = vec![HashSet::new(); k + 1];
    reach[k].insert(0);
    for i in (0..k).rev() {
        let next: Vec<i64> = reach[i + 1].iter().copied().collect();
        for &s in p.states[i] {
            for &r in &next {
                reach[i].insert(r + s as i64 * p.counts[i]);
            }
        }
    }

    let mut chosen = Vec::with_capacity(k);
    if search(&p, &reach, 0, 0, &mut chosen) {
        return Ok(SmactVerdict {
            valid: true,
            witness: Some(p.named(&chosen)),
            nearest_miss: None,
        });
    }

    Ok(SmactVerdict {
        valid: false,
        witness: None,
        nearest_miss: Some(nearest(&p)),
    })
}

fn search(p: &Problem, reach: &[HashSet<i64>], i: usize, sum: i64, chosen: &mut Vec<i8>) -> bool {
    if i == p.symbols.len() {
        return sum == 0 && p.en_ok(chosen);
    }
    for &s in p.states[i] {
        let next = sum + s as i64 * p.counts[i];
        if !reach[i + 1].contains(&-next) {
            continue;
        }
        chosen.push(s);
        if p.en_ok(chosen) && search(p, reach, i + 1, next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Smallest |net charge| over all assignments, first in table order on ties.
fn nearest(p: &Problem) -> NearestMiss {
    let mut best: BTreeMap<i64, Vec<i8>> = BTreeMap::new();
    best.insert(0, Vec::new());
    for i in 0..p.symbols.len() {
        let mut next: BTreeMap<i64, Vec<i8>> = BTreeMap::new();
        for (sum, states) in &best {
            for &s in p.states[i] {
                let v = sum + s as i64 * p.counts[i];
                next.entry(v).or_insert_with(|| {
                    let mut st = states.clone();
                    st.push(s);
                    st
                });
            }
        }
        best = next;
    }
    let (charge, states) = best
        .into_iter()
        .min_by_key(|(sum, _)| (sum.abs(), *sum < 0))
        .expect("every element has at least one state");
    NearestMiss {
        assignment: p.named(&states),
        charge,
        electronegativity_ok: p.en_ok(&states),
    }
}
