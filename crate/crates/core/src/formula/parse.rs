use num_bigint::BigInt;

use super::{Formula, FormulaError, Term};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    At(String),
    Int(BigInt),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Star,
    Caret,
    Minus,
    Eq,
    Neq,
    Amp,
    Bar,
    Arrow,
    Tilde,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::At(s) => format!("`@{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBrack => "`[`".into(),
        Tok::RBrack => "`]`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Neq => "`!=`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Tilde => "`~`".into(),
    }
}

/// Tokens paired with their 1-based column.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, message: String| FormulaError::Syntax { column: col, message };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '=' => Some(Tok::Eq),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '~' => Some(Tok::Tilde),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
            continue;
        }
        match c {
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, col));
                i += 2;
            }
            '-' => {
                out.push((Tok::Minus, col));
                i += 1;
            }
            '!' if chars.get(i + 1) == Some(&'=') => {
                out.push((Tok::Neq, col));
                i += 2;
            }
            '@' => {
                let start = i + 1;
                let mut j = start;
                if j < chars.len() && chars[j].is_ascii_alphabetic() {
                    while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                        j += 1;
                    }
                }
                if j == start {
                    return Err(err(col, "expected a constant name after `@`".into()));
                }
                out.push((Tok::At(chars[start..j].iter().collect()), col));
                i = j;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                out.push((Tok::Int(s.parse().expect("digits")), col));
                i = j;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                    j += 1;
                }
                out.push((Tok::Ident(chars[i..j].iter().collect()), col));
                i = j;
            }
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

fn is_quantifier(t: Option<&Tok>) -> bool {
    matches!(t, Some(Tok::Ident(s)) if s == "forall" || s == "exists")
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            column: self.col(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, FormulaError> {
        match self.peek() {
            Some(t) => self.err(format!("expected {wanted}, found {}", describe(t))),
            None => self.err(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), FormulaError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(&describe(&t))
        }
    }

    fn sentence(&mut self) -> Result<Formula, FormulaError> {
        if !is_quantifier(self.peek()) {
            return self.matrix();
        }
        let exists = matches!(self.peek(), Some(Tok::Ident(s)) if s == "exists");
        self.pos += 1;
        let mut vars = vec![self.var_name()?];
        while self.eat(&Tok::Comma) {
            vars.push(self.var_name()?);
        }
        let body = if is_quantifier(self.peek()) {
            self.sentence()?
        } else {
            self.expect(Tok::LParen)?;
            let m = self.matrix()?;
            self.expect(Tok::RParen)?;
            m
        };
        Ok(if exists {
            Formula::Exists(vars, Box::new(body))
        } else {
            Formula::Forall(vars, Box::new(body))
        })
    }

    fn var_name(&mut self) -> Result<String, FormulaError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_reserved(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.err(format!("`{s}` cannot be used as a variable"))
            }
            _ => self.unexpected("a variable name"),
        }
    }

    fn matrix(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disj()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.matrix()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.conj()?;
        while self.eat(&Tok::Bar) {
            acc = acc.or(self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.lit()?;
        while self.eat(&Tok::Amp) {
            acc = acc.and(self.lit()?);
        }
        Ok(acc)
    }

    fn lit(&mut self) -> Result<Formula, FormulaError> {
        if self.eat(&Tok::Tilde) {
            return Ok(self.lit()?.not());
        }
        if self.peek() == Some(&Tok::LParen) && self.paren_holds_formula() {
            self.pos += 1;
            let inner = if is_quantifier(self.peek()) {
                self.sentence()?
            } else {
                self.matrix()?
            };
            self.expect(Tok::RParen)?;
            return Ok(inner);
        }
        self.atom()
    }

    /// Decides whether the `(` at the cursor opens a formula or a term by
    /// scanning to its matching `)`: terms never contain relations or
    /// connectives, so any such token inside means a formula.
    fn paren_holds_formula(&self) -> bool {
        let mut depth = 0usize;
        let mut k = self.pos;
        while let Some((t, _)) = self.toks.get(k) {
            match t {
                Tok::LParen | Tok::LBrack => depth += 1,
                Tok::RParen | Tok::RBrack => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                Tok::Eq | Tok::Neq | Tok::Amp | Tok::Bar | Tok::Arrow | Tok::Tilde => return true,
                Tok::Ident(s) if s == "forall" || s == "exists" => return true,
                _ => {}
            }
            k += 1;
        }
        false
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.term()?;
        if self.eat(&Tok::Eq) {
            Ok(lhs.eq(self.term()?))
        } else if self.eat(&Tok::Neq) {
            Ok(lhs.neq(self.term()?))
        } else {
            self.unexpected("`=` or `!=`")
        }
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        let mut acc = self.factor()?;
        while self.eat(&Tok::Star) {
            acc = acc.mul(self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Term, FormulaError> {
        let mut base = self.base()?;
        while self.peek() == Some(&Tok::Caret) {
            let is_inverse = self.peek_at(1) == Some(&Tok::Minus)
                && matches!(self.peek_at(2), Some(Tok::Int(n)) if *n == BigInt::from(1));
            if is_inverse {
                self.pos += 3;
                base = base.inv();
                continue;
            }
            self.pos += 1;
            let negative = self.eat(&Tok::Minus);
            let n = match self.peek() {
                Some(Tok::Int(n)) => n.clone(),
                _ => return self.unexpected("an integer exponent"),
            };
            self.pos += 1;
            let n = if negative { -n } else { n };
            return Ok(Term::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Term, FormulaError> {
        let t = match self.peek() {
            Some(Tok::Int(n)) if *n == BigInt::from(1) => Term::One,
            Some(Tok::Int(n)) => {
                let n = n.clone();
                return self.err(format!("integer `{n}` is not a term; only `1` is"));
            }
            Some(Tok::Ident(s)) if s == "a1" || s == "a2" => Term::Const(s.clone()),
            Some(Tok::Ident(s)) if s == "forall" || s == "exists" => {
                return self.err(format!("`{s}` is a keyword"));
            }
            Some(Tok::Ident(s)) => Term::Var(s.clone()),
            Some(Tok::At(s)) => Term::Const(s.clone()),
            Some(Tok::LBrack) => {
                self.pos += 1;
                let mut parts = vec![self.term()?];
                self.expect(Tok::Comma)?;
                parts.push(self.term()?);
                while self.eat(&Tok::Comma) {
                    parts.push(self.term()?);
                }
                self.expect(Tok::RBrack)?;
                return Ok(Term::comm_left_normed(parts));
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                return Ok(t);
            }
            _ => return self.unexpected("a term"),
        };
        self.pos += 1;
        Ok(t)
    }

    fn finish(&self) -> Result<(), FormulaError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.err(format!("unexpected {} after the end of the formula", describe(t))),
        }
    }
}

fn is_reserved(s: &str) -> bool {
    matches!(s, "a1" | "a2" | "forall" | "exists")
}

fn parser(text: &str) -> Result<Parser, FormulaError> {
    Ok(Parser {
        toks: lex(text)?,
        pos: 0,
        end_col: text.chars().count() + 1,
    })
}

/// Parses a sentence or quantifier-free formula.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = parser(text)?;
    let f = p.sentence()?;
    p.finish()?;
    Ok(f)
}

/// Parses a single term such as `a1*a2^-1*[a2,a1]^3`.
pub fn parse_term(text: &str) -> Result<Term, FormulaError> {
    let mut p = parser(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centralizer_quasi_identity() {
        let f = parse("forall x,z ( [z,a1]=1 & [a2,z]=1 -> [z,x]=1 )").unwrap();
        let z = Term::var("z");
        let expected = Formula::forall(
            &["x", "z"],
            z.clone()
                .comm(Term::a1())
                .eq(Term::One)
                .and(Term::a2().comm(z.clone()).eq(Term::One))
                .implies(z.comm(Term::var("x")).eq(Term::One)),
        );
        assert_eq!(f, expected);
        assert_eq!(f.to_string(), "forall x,z ([z,a1]=1 & [a2,z]=1 -> [z,x]=1)");
    }

    #[test]
    fn trivial_and_constants() {
        assert_eq!(parse("1=1").unwrap(), Term::One.eq(Term::One));
        let s = parse("exists y ( [a2,y]=1 & [y,a1]=@z )").unwrap();
        assert_eq!(s.to_string(), "exists y ([a2,y]=1 & [y,a1]=@z)");
        assert_eq!(parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn exponents_and_inverses() {
        let t = parse_term("a1*a2^-1*[a2,a1]^3").unwrap();
        assert_eq!(
            t,
            Term::a1().mul(Term::a2().inv()).mul(Term::a2().comm(Term::a1()).pow(3))
        );
        assert_eq!(parse_term("x^-1^-1").unwrap(), Term::var("x").inv().inv());
        assert_eq!(
            parse_term("x^-2").unwrap(),
            Term::Pow(Box::new(Term::var("x")), (-2).into())
        );
        assert_eq!(parse_term("(x*y)^-1").unwrap().to_string(), "(x*y)^-1");
        assert_eq!(
            parse_term("[w1,w2,x]").unwrap(),
            Term::var("w1").comm(Term::var("w2")).comm(Term::var("x"))
        );
    }

    #[test]
    fn parenthesised_terms_and_formulas() {
        let f = parse("(x*y)=1 -> ((x)=y | ~(x=1))").unwrap();
        assert_eq!(f.to_string(), "x*y=1 -> x=y | ~x=1");
        let g = parse("((x=1))").unwrap();
        assert_eq!(g, Term::var("x").eq(Term::One));
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse("forall x (x = )").unwrap_err();
        assert_eq!(
            e,
            FormulaError::Syntax {
                column: 15,
                message: "expected a term, found `)`".into()
            }
        );
        assert!(matches!(
            parse("forall a1 (a1=1)"),
            Err(FormulaError::Syntax { column: 8, .. })
        ));
        assert!(parse("x=1 y=1").is_err());
        assert!(parse("x=2").is_err());
        assert!(parse("x=1 &").is_err());
        assert!(parse("forall x x=1").is_err());
        assert!(parse("@=1").is_err());
        assert!(parse("x^y=1").is_err());
    }
}
