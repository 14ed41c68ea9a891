//! First-order formulas over groups with constants: terms, sentences, their
//! text form, syntactic classes, DNF, evaluation and bounded search.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

mod builtins;
mod eval;
mod normal;
mod parse;

pub use builtins::{builtin, system_s, system_t, Builtin};
pub use eval::{
    ball, eval_qf, eval_term, refute_universal, search_forall_exists, witness_existential, Assignment, GroupEnv,
    SearchOutcome,
};
pub use normal::{classify, equivalent_by_truth_table, to_dnf, FormulaClass};
pub use parse::{parse, parse_term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("free variables in sentence: {}", .0.join(", "))]
    FreeVariables(Vec<String>),
    #[error("unresolved name `{0}`")]
    Unresolved(String),
    #[error("expected {expected} sentence, got {got}")]
    WrongClass { expected: &'static str, got: FormulaClass },
    #[error("quantifier inside a quantifier-free matrix")]
    QuantifierInMatrix,
    #[error("unknown builtin `{0}`")]
    BadBuiltin(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    One,
    Var(String),
    /// `a1`, `a2`, or `@name`.
    Const(String),
    Mul(Box<Term>, Box<Term>),
    Inv(Box<Term>),
    Pow(Box<Term>, BigInt),
    /// `[t,s] = t^-1 s^-1 t s`.
    Comm(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn a1() -> Term {
        Term::constant("a1")
    }

    pub fn a2() -> Term {
        Term::constant("a2")
    }

    pub fn mul(self, other: Term) -> Term {
        Term::Mul(Box::new(self), Box::new(other))
    }

    pub fn inv(self) -> Term {
        Term::Inv(Box::new(self))
    }

    /// `t^n`; exponent -1 is stored as an inverse so printing round-trips.
    pub fn pow(self, n: impl Into<BigInt>) -> Term {
        let n = n.into();
        if n == -BigInt::one() {
            self.inv()
        } else {
            Term::Pow(Box::new(self), n)
        }
    }

    pub fn comm(self, other: Term) -> Term {
        Term::Comm(Box::new(self), Box::new(other))
    }

    /// Left-normed `[t1, t2, ..., tk]`; a single term is returned unchanged.
    pub fn comm_left_normed(terms: Vec<Term>) -> Term {
        let mut it = terms.into_iter();
        let first = it.next().unwrap_or(Term::One);
        it.fold(first, Term::comm)
    }

    pub fn eq(self, other: Term) -> Formula {
        Formula::Eq(self, other)
    }

    pub fn neq(self, other: Term) -> Formula {
        Formula::Neq(self, other)
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::One | Term::Const(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Inv(t) | Term::Pow(t, _) => t.collect_vars(out),
            Term::Mul(a, b) | Term::Comm(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    Neq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn forall(vars: &[&str], body: Formula) -> Formula {
        Formula::Forall(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    pub fn exists(vars: &[&str], body: Formula) -> Formula {
        Formula::Exists(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conj(parts: Vec<Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn disj(parts: Vec<Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Neq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) | Formula::Neq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(f) => f.collect_free(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                let mut inner = BTreeSet::new();
                f.collect_free(&mut inner);
                for v in vs {
                    inner.remove(v);
                }
                out.extend(inner);
            }
        }
    }

    /// Splits off the leading quantifier blocks, merging adjacent blocks of
    /// the same kind.
    pub fn prefix(&self) -> (Vec<(Quantifier, Vec<String>)>, &Formula) {
        let mut blocks: Vec<(Quantifier, Vec<String>)> = Vec::new();
        let mut cur = self;
        loop {
            let (q, vs, body) = match cur {
                Formula::Forall(vs, body) => (Quantifier::Forall, vs, body),
                Formula::Exists(vs, body) => (Quantifier::Exists, vs, body),
                _ => return (blocks, cur),
            };
            match blocks.last_mut() {
                Some((last, names)) if *last == q => names.extend(vs.iter().cloned()),
                _ => blocks.push((q, vs.clone())),
            }
            cur = body;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        })
    }
}

// ---- printing ----

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Mul(a, b) => {
            write_term(a, out);
            out.push('*');
            if matches!(**b, Term::Mul(..)) {
                out.push('(');
                write_term(b, out);
                out.push(')');
            } else {
                write_term(b, out);
            }
        }
        _ => write_factor(t, out),
    }
}

fn write_factor(t: &Term, out: &mut String) {
    match t {
        Term::Pow(b, n) => {
            write_base_operand(b, out);
            out.push('^');
            out.push_str(&n.to_string());
        }
        Term::Inv(b) => {
            write_base_operand(b, out);
            out.push_str("^-1");
        }
        Term::Mul(..) => {
            out.push('(');
            write_term(t, out);
            out.push(')');
        }
        Term::One => out.push('1'),
        Term::Var(v) => out.push_str(v),
        Term::Const(c) if c == "a1" || c == "a2" => out.push_str(c),
        Term::Const(c) => {
            out.push('@');
            out.push_str(c);
        }
        Term::Comm(a, b) => {
            out.push('[');
            write_term(a, out);
            out.push(',');
            write_term(b, out);
            out.push(']');
        }
    }
}

fn write_base_operand(b: &Term, out: &mut String) {
    if matches!(b, Term::Mul(..) | Term::Pow(..)) {
        out.push('(');
        write_term(b, out);
        out.push(')');
    } else {
        write_factor(b, out);
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_term(self, &mut s);
        f.write_str(&s)
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_formula(f: &Formula, ctx: u8, out: &mut String) {
    if matches!(f, Formula::Forall(..) | Formula::Exists(..)) {
        out.push('(');
        write_sentence(f, out);
        out.push(')');
        return;
    }
    let wrap = precedence(f) < ctx;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            write_term(a, out);
            out.push_str(if matches!(f, Formula::Eq(..)) { "=" } else { "!=" });
            write_term(b, out);
        }
        Formula::Not(g) => {
            out.push('~');
            write_formula(g, 4, out);
        }
        Formula::And(a, b) => {
            write_formula(a, 3, out);
            out.push_str(" & ");
            write_formula(b, 4, out);
        }
        Formula::Or(a, b) => {
            write_formula(a, 2, out);
            out.push_str(" | ");
            write_formula(b, 3, out);
        }
        Formula::Implies(a, b) => {
            write_formula(a, 2, out);
            out.push_str(" -> ");
            write_formula(b, 1, out);
        }
        Formula::Forall(..) | Formula::Exists(..) => unreachable!(),
    }
    if wrap {
        out.push(')');
    }
}

fn write_sentence(f: &Formula, out: &mut String) {
    match f {
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            out.push_str(if matches!(f, Formula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            out.push_str(&vs.join(","));
            out.push(' ');
            if matches!(**body, Formula::Forall(..) | Formula::Exists(..)) {
                write_sentence(body, out);
            } else {
                out.push('(');
                write_formula(body, 1, out);
                out.push(')');
            }
        }
        _ => write_formula(f, 1, out),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_sentence(self, &mut s);
        f.write_str(&s)
    }
}
