use std::collections::BTreeMap;
use std::fmt;

use super::{Formula, FormulaError, Quantifier, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaClass {
    Identity,
    QuasiIdentity,
    Universal,
    Existential,
    Primitive,
    ForallExists,
    Other,
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaClass::Identity => "identity",
            FormulaClass::QuasiIdentity => "quasi_identity",
            FormulaClass::Universal => "universal",
            FormulaClass::Existential => "existential",
            FormulaClass::Primitive => "primitive",
            FormulaClass::ForallExists => "forall_exists",
            FormulaClass::Other => "other",
        })
    }
}

fn is_equation(f: &Formula) -> bool {
    matches!(f, Formula::Eq(..))
}

fn is_literal(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) | Formula::Neq(..) => true,
        Formula::Not(g) => matches!(**g, Formula::Eq(..) | Formula::Neq(..)),
        _ => false,
    }
}

fn conjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(a, b) => {
            let mut v = conjuncts(a);
            v.extend(conjuncts(b));
            v
        }
        _ => vec![f],
    }
}

/// The most specific syntactic class of a sentence. Quantifier-free
/// sentences count as universal.
pub fn classify(f: &Formula) -> Result<FormulaClass, FormulaError> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(FormulaError::FreeVariables(free.into_iter().collect()));
    }
    let (blocks, matrix) = f.prefix();
    if !matrix.is_quantifier_free() {
        return Ok(FormulaClass::Other);
    }
    let kinds: Vec<Quantifier> = blocks.iter().map(|(q, _)| *q).collect();
    Ok(match kinds.as_slice() {
        [] | [Quantifier::Forall] => {
            if is_equation(matrix) {
                FormulaClass::Identity
            } else if matches!(matrix, Formula::Implies(h, c)
                if is_equation(c) && conjuncts(h).into_iter().all(is_equation))
            {
                FormulaClass::QuasiIdentity
            } else {
                FormulaClass::Universal
            }
        }
        [Quantifier::Exists] => {
            if conjuncts(matrix).into_iter().all(is_literal) {
                FormulaClass::Primitive
            } else {
                FormulaClass::Existential
            }
        }
        [Quantifier::Forall, Quantifier::Exists] => FormulaClass::ForallExists,
        _ => FormulaClass::Other,
    })
}

/// Negation normal form over the literals `s=t` and `s!=t`.
fn nnf(f: &Formula, negate: bool) -> Result<Formula, FormulaError> {
    Ok(match (f, negate) {
        (Formula::Eq(a, b), false) | (Formula::Neq(a, b), true) => Formula::Eq(a.clone(), b.clone()),
        (Formula::Eq(a, b), true) | (Formula::Neq(a, b), false) => Formula::Neq(a.clone(), b.clone()),
        (Formula::Not(g), _) => nnf(g, !negate)?,
        (Formula::And(a, b), false) | (Formula::Or(a, b), true) => nnf(a, negate)?.and(nnf(b, negate)?),
        (Formula::Or(a, b), false) | (Formula::And(a, b), true) => nnf(a, negate)?.or(nnf(b, negate)?),
        (Formula::Implies(a, b), false) => nnf(a, true)?.or(nnf(b, false)?),
        (Formula::Implies(a, b), true) => nnf(a, false)?.and(nnf(b, true)?),
        (Formula::Forall(..) | Formula::Exists(..), _) => return Err(FormulaError::QuantifierInMatrix),
    })
}

/// Disjuncts as lists of literals.
fn dnf_clauses(f: &Formula) -> Vec<Vec<Formula>> {
    match f {
        Formula::Or(a, b) => {
            let mut v = dnf_clauses(a);
            v.extend(dnf_clauses(b));
            v
        }
        Formula::And(a, b) => {
            let left = dnf_clauses(a);
            let right = dnf_clauses(b);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut clause = l.clone();
                    for lit in r {
                        if !clause.contains(lit) {
                            clause.push(lit.clone());
                        }
                    }
                    out.push(clause);
                }
            }
            out
        }
        lit => vec![vec![lit.clone()]],
    }
}

/// Rewrites a quantifier-free formula as a disjunction of conjunctions of
/// literals. Duplicate literals and duplicate disjuncts are dropped.
pub fn to_dnf(f: &Formula) -> Result<Formula, FormulaError> {
    let n = nnf(f, false)?;
    let mut clauses: Vec<Vec<Formula>> = Vec::new();
    for c in dnf_clauses(&n) {
        if !clauses.contains(&c) {
            clauses.push(c);
        }
    }
    let disjuncts = clauses
        .into_iter()
        .map(|c| Formula::conj(c).expect("nonempty clause"))
        .collect();
    Ok(Formula::disj(disjuncts).expect("nonempty disjunction"))
}

fn collect_atoms(f: &Formula, out: &mut Vec<(Term, Term)>) {
    match f {
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            let key = (a.clone(), b.clone());
            if !out.contains(&key) {
                out.push(key);
            }
        }
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => collect_atoms(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
    }
}

fn truth(f: &Formula, val: &BTreeMap<(Term, Term), bool>) -> bool {
    match f {
        Formula::Eq(a, b) => val[&(a.clone(), b.clone())],
        Formula::Neq(a, b) => !val[&(a.clone(), b.clone())],
        Formula::Not(g) => !truth(g, val),
        Formula::And(a, b) => truth(a, val) && truth(b, val),
        Formula::Or(a, b) => truth(a, val) || truth(b, val),
        Formula::Implies(a, b) => !truth(a, val) || truth(b, val),
        Formula::Forall(..) | Formula::Exists(..) => unreachable!("checked quantifier-free"),
    }
}

/// Propositional equivalence, treating each `s=t` (and its negation `s!=t`)
/// as one propositional atom.
pub fn equivalent_by_truth_table(f: &Formula, g: &Formula) -> Result<bool, FormulaError> {
    if !f.is_quantifier_free() || !g.is_quantifier_free() {
        return Err(FormulaError::QuantifierInMatrix);
    }
    let mut atoms = Vec::new();
    collect_atoms(f, &mut atoms);
    collect_atoms(g, &mut atoms);
    assert!(atoms.len() < 24, "truth table too large");
    for mask in 0u32..(1 << atoms.len()) {
        let val: BTreeMap<(Term, Term), bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), mask >> i & 1 == 1))
            .collect();
        if truth(f, &val) != truth(g, &val) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn classes() {
        let c = |s: &str| classify(&parse(s).unwrap()).unwrap();
        assert_eq!(c("forall x (x*1=x)"), FormulaClass::Identity);
        assert_eq!(c("1=1"), FormulaClass::Identity);
        assert_eq!(
            c("forall x,z ([z,a1]=1 & [a2,z]=1 -> [z,x]=1)"),
            FormulaClass::QuasiIdentity
        );
        assert_eq!(c("forall x (x!=1 | x=x)"), FormulaClass::Universal);
        assert_eq!(c("[a2,a1]!=1"), FormulaClass::Universal);
        assert_eq!(c("exists y ([a2,y]=1 & [y,a1]!=1)"), FormulaClass::Primitive);
        assert_eq!(c("exists y ([a2,y]=1 | [y,a1]=1)"), FormulaClass::Existential);
        assert_eq!(c("forall x exists y ([x,y]=1)"), FormulaClass::ForallExists);
        assert_eq!(c("exists x forall y ([x,y]=1)"), FormulaClass::Other);
        assert!(matches!(
            classify(&parse("x=1").unwrap()),
            Err(FormulaError::FreeVariables(_))
        ));
    }

    #[test]
    fn tau_matrix_has_five_disjuncts() {
        let tau = crate::formula::builtin(crate::formula::Builtin::Tau);
        let m = tau.prefix().1.clone();
        let d = to_dnf(&m).unwrap();
        let mut n = 1;
        let mut f = &d;
        while let Formula::Or(a, b) = f {
            assert!(!matches!(**b, Formula::Or(..)) || !matches!(**a, Formula::Or(..)));
            n += 1;
            f = if matches!(**a, Formula::Or(..)) { a } else { b };
        }
        assert_eq!(n, 5);
        assert!(equivalent_by_truth_table(&m, &d).unwrap());
    }

    #[test]
    fn dnf_distributes() {
        let f = parse("(x=1 | y=1) & z=1").unwrap();
        let d = to_dnf(&f).unwrap();
        assert_eq!(d.to_string(), "x=1 & z=1 | y=1 & z=1");
        assert!(equivalent_by_truth_table(&f, &d).unwrap());

        let atom = parse("x=1").unwrap();
        assert_eq!(to_dnf(&atom).unwrap(), atom);

        let g = parse("~(x=1 -> y!=1)").unwrap();
        assert_eq!(to_dnf(&g).unwrap().to_string(), "x=1 & y=1");
        assert!(to_dnf(&parse("forall x (x=1)").unwrap()).is_err());
    }

    #[test]
    fn truth_table_detects_inequivalence() {
        let f = parse("x=1 -> y=1").unwrap();
        let g = parse("y=1 -> x=1").unwrap();
        assert!(!equivalent_by_truth_table(&f, &g).unwrap());
        assert!(equivalent_by_truth_table(&f, &parse("x!=1 | y=1").unwrap()).unwrap());
    }
}
