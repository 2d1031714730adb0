use super::TokenizeError;
use crate::elements;
use crate::vocab::{Domain, SpecialToken};

pub const NUMBER_CHARS: &str = "0123456789-.";

/// Fraction digits every encoded number carries.
pub const FRACTION_DIGITS: usize = 4;

pub(crate) fn is_number(x: &str) -> bool {
    let body = x.strip_prefix('-').unwrap_or(x);
    let Some((int, frac)) = body.split_once('.') else {
        return false;
    };
    !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.len() == FRACTION_DIGITS
        && frac.bytes().all(|b| b.is_ascii_digit())
}

/// Splits a signed decimal with exactly four fraction digits into one token
/// per character.
pub fn tokenize_number(x: &str) -> Result<Vec<String>, TokenizeError> {
    if !is_number(x) {
        return Err(TokenizeError::Precision(x.to_string()));
    }
    Ok(x.chars().map(String::from).collect())
}

pub(crate) fn is_number_char(t: &str) -> bool {
    t.len() == 1 && NUMBER_CHARS.contains(t)
}

/// Tokenizes the whitespace-separated material text form: element symbols,
/// `<sg>`, `<sgN>`, `<coord>`, and numbers, either written whole
/// (`7.1831`) or already split into characters (`7 . 1 8 3 1`).
pub fn tokenize_material(s: &str) -> Result<Vec<String>, TokenizeError> {
    let mut out = Vec::new();
    let base = s.as_ptr() as usize;
    for word in s.split_whitespace() {
        let position = word.as_ptr() as usize - base;
        if elements::is_element(word)
            || is_number_char(word)
            || SpecialToken::parse(word).is_some_and(SpecialToken::is_material_marker)
        {
            out.push(word.to_string());
        } else if is_number(word) {
            out.extend(word.chars().map(String::from));
        } else if word.starts_with(|c: char| c == '-' || c.is_ascii_digit()) {
            return Err(TokenizeError::Precision(word.to_string()));
        } else {
            return Err(TokenizeError::Invalid {
                domain: Domain::Material,
                position,
                found: word.chars().next().unwrap_or('\0'),
            });
        }
    }
    if out.is_empty() {
        return Err(TokenizeError::Empty);
    }
    Ok(out)
}

/// Canonical text form: single spaces between tokens, with the characters
/// of each number written together. A number closes after its fourth
/// fraction digit.
pub fn render_material<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut words: Vec<String> = Vec::new();
    let mut number = String::new();
    let mut frac_digits: Option<usize> = None;
    for t in tokens {
        let t = t.as_ref();
        if is_number_char(t) {
            number.push_str(t);
            match (t, frac_digits) {
                (".", None) => frac_digits = Some(0),
                (d, Some(n)) if d != "." && d != "-" => {
                    frac_digits = Some(n + 1);
                    if n + 1 == FRACTION_DIGITS {
                        words.push(std::mem::take(&mut number));
                        frac_digits = None;
                    }
                }
                _ => {}
            }
        } else {
            if !number.is_empty() {
                words.push(std::mem::take(&mut number));
                frac_digits = None;
            }
            words.push(t.to_string());
        }
    }
    if !number.is_empty() {
        words.push(number);
    }
    words.join(" ")
}
