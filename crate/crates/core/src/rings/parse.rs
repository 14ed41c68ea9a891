//! Text forms: ring descriptors (`Z`, `Z^2`, `Z[theta] x Z`) and element
//! literals (`(1,0)`, `(theta, 2)`, `theta^2-1`).

use std::iter::Peekable;
use std::str::CharIndices;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{is_identifier, Ring, RingDesc, RingElem, RingError};

/// Parses a ring descriptor such as `Z[t1,t2] x Z^2`.
pub fn parse_ring(text: &str) -> Result<Ring, RingError> {
    let bad = |why: &str| RingError::BadDescriptor(format!("`{text}`: {why}"));
    let mut chars = text.chars().peekable();
    let mut components = Vec::new();
    loop {
        skip_ws(&mut chars);
        if chars.next() != Some('Z') {
            return Err(bad("expected `Z`"));
        }
        let mut names = Vec::new();
        if chars.peek() == Some(&'[') {
            chars.next();
            let mut inner = String::new();
            loop {
                match chars.next() {
                    Some(']') => break,
                    Some(c) => inner.push(c),
                    None => return Err(bad("unclosed `[`")),
                }
            }
            for name in inner.split(',') {
                let name = name.trim();
                if !is_identifier(name) {
                    return Err(bad(&format!("bad indeterminate `{name}`")));
                }
                names.push(name.to_string());
            }
        }
        let mut copies = 1usize;
        skip_ws(&mut chars);
        if chars.peek() == Some(&'^') {
            chars.next();
            skip_ws(&mut chars);
            let mut digits = String::new();
            while let Some(c) = chars.peek().copied().filter(char::is_ascii_digit) {
                digits.push(c);
                chars.next();
            }
            copies = digits.parse().map_err(|_| bad("expected exponent after `^`"))?;
            if copies == 0 {
                return Err(bad("exponent must be positive"));
            }
        }
        for _ in 0..copies {
            components.push(names.clone());
        }
        skip_ws(&mut chars);
        match chars.next() {
            None => break,
            Some('x') | Some('×') | Some('*') => continue,
            Some(c) => return Err(bad(&format!("unexpected `{c}`"))),
        }
    }
    Ok(Arc::new(RingDesc::new(components)?))
}

fn skip_ws(chars: &mut Peekable<impl Iterator<Item = char>>) {
    while chars.peek().is_some_and(|c| c.is_whitespace()) {
        chars.next();
    }
}

/// Parses an element literal over `ring`.
///
/// A parenthesised, comma-separated tuple gives one polynomial per component.
/// Anything else is a single expression taken in every component; `e<k>`
/// names the k-th idempotent when it is not an indeterminate.
pub fn parse_element(ring: &Ring, text: &str) -> Result<RingElem, RingError> {
    let trimmed = text.trim();
    if let Some(items) = split_tuple(trimmed) {
        if items.len() != ring.num_components() {
            return Err(RingError::BadLiteral {
                text: text.to_string(),
                reason: format!(
                    "tuple has {} entries but {ring} has {} components",
                    items.len(),
                    ring.num_components()
                ),
            });
        }
        let mut parts = Vec::with_capacity(items.len());
        for (c, item) in items.iter().enumerate() {
            let sub: Ring = Arc::new(RingDesc {
                components: vec![ring.components[c].clone()],
            });
            let value = ExprParser::new(&sub, item, false).parse()?;
            parts.push(value.parts[0].clone());
        }
        return RingElem::from_parts(ring, parts);
    }
    ExprParser::new(ring, trimmed, true).parse()
}

/// Splits `(a, b, ...)` at top-level commas; `None` if not a tuple with a comma.
fn split_tuple(s: &str) -> Option<Vec<String>> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    let mut items = Vec::new();
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    // `(a)+(b)` is not a tuple
                    return None;
                }
            }
            ',' if depth == 0 => {
                items.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    items.push(cur);
    (items.len() > 1).then_some(items)
}

struct ExprParser<'a> {
    ring: &'a Ring,
    text: &'a str,
    chars: Peekable<CharIndices<'a>>,
    allow_idempotents: bool,
}

impl<'a> ExprParser<'a> {
    fn new(ring: &'a Ring, text: &'a str, allow_idempotents: bool) -> Self {
        ExprParser {
            ring,
            text,
            chars: text.char_indices().peekable(),
            allow_idempotents,
        }
    }

    fn err(&self, reason: impl Into<String>) -> RingError {
        RingError::BadLiteral {
            text: self.text.to_string(),
            reason: reason.into(),
        }
    }

    fn parse(mut self) -> Result<RingElem, RingError> {
        let v = self.expr()?;
        self.ws();
        if let Some(&(i, c)) = self.chars.peek() {
            return Err(self.err(format!("unexpected `{c}` at offset {i}")));
        }
        Ok(v)
    }

    fn ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn expr(&mut self) -> Result<RingElem, RingError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.chars.next();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.chars.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingElem, RingError> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.chars.next();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RingElem, RingError> {
        match self.peek() {
            Some('-') => {
                self.chars.next();
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.chars.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RingElem, RingError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.chars.next();
            self.ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let e: u32 = digits
                .parse()
                .map_err(|_| self.err("expected a nonnegative exponent after `^`"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.chars.next();
        }
        s
    }

    fn atom(&mut self) -> Result<RingElem, RingError> {
        match self.peek() {
            Some('(') => {
                self.chars.next();
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.chars.next();
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RingElem::from_int(self.ring, n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                self.resolve(&name)
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn resolve(&self, name: &str) -> Result<RingElem, RingError> {
        let present = self
            .ring
            .components
            .iter()
            .filter(|c| c.iter().any(|n| n == name))
            .count();
        if present == self.ring.num_components() {
            return Ok(RingElem::indeterminate(self.ring, name).expect("present"));
        }
        if present > 0 {
            return Err(self.err(format!(
                "`{name}` is not an indeterminate of every component; use a tuple literal"
            )));
        }
        if self.allow_idempotents {
            if let Some(k) = name.strip_prefix('e').and_then(|k| k.parse::<usize>().ok()) {
                if (1..=self.ring.num_components()).contains(&k) {
                    return Ok(RingElem::idempotent(self.ring, k - 1));
                }
            }
        }
        Err(self.err(format!("unknown name `{name}`")))
    }
}
