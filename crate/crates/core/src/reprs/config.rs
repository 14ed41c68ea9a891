//! Text form of a representation:
//!
//! ```text
//! # comment
//! ring: Z x Z
//! full_center: false
//! generators: {
//!   b: {e12: 0, e13: 0, e23: (1,0)},
//! }
//! ```
//!
//! `a1` and `a2` are implied; listing them with their standard values is
//! allowed.

use super::{ReprError, Representation};
use crate::rings::{parse_ring, RingError};
use crate::ut3::{split_top_level, UT3Elem};

fn config_err(line: usize, message: impl Into<String>) -> ReprError {
    ReprError::Config {
        line,
        message: message.into(),
    }
}

/// Reads a key's value: to the end of the line, or across lines up to the
/// brace matching an opening `{`.
fn take_value(lines: &[(usize, String)], pos: &mut usize, first: &str) -> Result<String, ReprError> {
    let start_line = lines[*pos].0;
    let mut text = first.trim().to_string();
    if !text.starts_with('{') {
        *pos += 1;
        return Ok(text);
    }
    loop {
        let depth: i32 = text
            .chars()
            .map(|c| match c {
                '{' => 1,
                '}' => -1,
                _ => 0,
            })
            .sum();
        *pos += 1;
        if depth == 0 {
            return Ok(text);
        }
        if depth < 0 || *pos >= lines.len() {
            return Err(config_err(start_line, "unbalanced braces"));
        }
        text.push(' ');
        text.push_str(lines[*pos].1.trim());
    }
}

pub fn parse_config(text: &str) -> Result<Representation, ReprError> {
    let lines: Vec<(usize, String)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").to_string()))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    let mut ring_src: Option<(usize, String)> = None;
    let mut full_center: Option<bool> = None;
    let mut gens_src: Option<(usize, String)> = None;
    let mut pos = 0;
    while pos < lines.len() {
        let (line, raw) = &lines[pos];
        let line = *line;
        let (key, rest) = raw
            .split_once(':')
            .ok_or_else(|| config_err(line, format!("expected `key: value`, got `{}`", raw.trim())))?;
        let key = key.trim();
        let value = take_value(&lines, &mut pos, rest)?;
        let seen = match key {
            "ring" => ring_src.replace((line, value)).is_some(),
            "full_center" => {
                let b = match value.as_str() {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(config_err(
                            line,
                            format!("full_center must be true or false, got `{other}`"),
                        ))
                    }
                };
                full_center.replace(b).is_some()
            }
            "generators" => gens_src.replace((line, value)).is_some(),
            other => return Err(config_err(line, format!("unknown key `{other}`"))),
        };
        if seen {
            return Err(config_err(line, format!("key `{key}` given twice")));
        }
    }

    let (ring_line, ring_text) = ring_src.ok_or_else(|| config_err(0, "missing `ring`"))?;
    let ring = parse_ring(&ring_text).map_err(|e| config_err(ring_line, e.to_string()))?;
    let mut gens = Vec::new();
    if let Some((line, body)) = gens_src {
        let inner = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| config_err(line, "generators must be a `{ ... }` block"))?;
        for item in split_top_level(inner, ',') {
            if item.trim().is_empty() {
                continue;
            }
            let (name, elem) = item
                .split_once(':')
                .ok_or_else(|| config_err(line, format!("expected `name: {{...}}`, got `{}`", item.trim())))?;
            let g = UT3Elem::parse(&ring, elem.trim()).map_err(|e: RingError| config_err(line, e.to_string()))?;
            gens.push((name.trim().to_string(), g));
        }
    }
    Representation::new(&ring, gens, full_center.unwrap_or(false))
}

/// Canonical text; `parse_config(print_config(r)) == r`.
pub fn print_config(rep: &Representation) -> String {
    let mut out = format!(
        "ring: {}\nfull_center: {}\ngenerators: {{\n",
        rep.ring(),
        rep.full_center()
    );
    let extra: Vec<String> = rep.generators()[2..]
        .iter()
        .map(|(n, g)| format!("  {n}: {g}"))
        .collect();
    if !extra.is_empty() {
        out.push_str(&extra.join(",\n"));
        out.push('\n');
    }
    out.push_str("}\n");
    out
}
