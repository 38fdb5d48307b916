//! The set-file format: a header `n=<int>`, then either one bitstring per
//! line (character `i` is coordinate `i + 1`, i.e. mask bit `i`) or a single
//! `sphere <n> <k>` / `ball <n> <k>` directive. Blank lines and lines starting
//! with `#` are ignored.

use cube_mu::cube::{SupportSet, MAX_DIMENSION};
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

enum Body {
    Explicit(Vec<u64>),
    Directive(SupportSet),
}

pub fn parse(text: &str) -> Result<SupportSet, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| err(1, "missing header \"n=<int>\""))?;
    let n = header
        .strip_prefix("n")
        .map(str::trim_start)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| err(header_line, format!("expected header \"n=<int>\", found {header:?}")))?
        .trim()
        .parse::<u32>()
        .map_err(|e| err(header_line, format!("bad dimension: {e}")))?;
    if n == 0 || n > MAX_DIMENSION {
        return Err(err(header_line, format!("dimension {n} outside 1..={MAX_DIMENSION}")));
    }

    let mut body: Option<Body> = None;
    let mut seen: HashMap<u64, usize> = HashMap::new();
    for (line, content) in lines {
        let words: Vec<&str> = content.split_whitespace().collect();
        if let Some(&kind @ ("sphere" | "ball")) = words.first() {
            if body.is_some() {
                return Err(err(line, "a directive must be the only body line"));
            }
            let [_, dn, dk] = words[..] else {
                return Err(err(line, format!("expected \"{kind} <n> <k>\"")));
            };
            let dn: u32 = dn.parse().map_err(|e| err(line, format!("bad n: {e}")))?;
            let dk: u32 = dk.parse().map_err(|e| err(line, format!("bad k: {e}")))?;
            if dn != n {
                return Err(err(line, format!("directive dimension {dn} differs from header n={n}")));
            }
            let set = if kind == "sphere" {
                SupportSet::sphere(n, dk)
            } else {
                SupportSet::ball(n, dk)
            }
            .map_err(|e| err(line, e.to_string()))?;
            body = Some(Body::Directive(set));
            continue;
        }
        let masks = match &mut body {
            None => {
                body = Some(Body::Explicit(Vec::new()));
                match &mut body {
                    Some(Body::Explicit(v)) => v,
                    _ => unreachable!(),
                }
            }
            Some(Body::Explicit(v)) => v,
            Some(Body::Directive(_)) => {
                return Err(err(line, "explicit elements cannot follow a directive"));
            }
        };
        if content.len() != n as usize {
            return Err(err(
                line,
                format!("expected {n} characters, found {}", content.chars().count()),
            ));
        }
        let mut mask = 0u64;
        for (i, c) in content.chars().enumerate() {
            match c {
                '0' => {}
                '1' => mask |= 1 << i,
                other => return Err(err(line, format!("unexpected character {other:?}"))),
            }
        }
        if let Some(first) = seen.insert(mask, line) {
            return Err(err(line, format!("duplicate of line {first}")));
        }
        masks.push(mask);
    }
    match body {
        None => Err(err(header_line, "the set has no elements")),
        Some(Body::Directive(set)) => Ok(set),
        Some(Body::Explicit(masks)) => {
            SupportSet::new(n, masks).map_err(|e| err(header_line, e.to_string()))
        }
    }
}

/// Renders a mask as the bitstring used in set files.
pub fn bitstring(n: u32, mask: u64) -> String {
    (0..n).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect()
}
