use std::fmt;
use std::str::FromStr;

use super::{Formula, FormulaError, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Nzct,
    Ct(u32),
    Tau,
    Sigma,
    CentralizerQi,
    TorsionFreeQi(i64),
    ZeroSqQi,
}

impl FromStr for Builtin {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, FormulaError> {
        let bad = || FormulaError::BadBuiltin(s.to_string());
        let lower = s.trim().to_ascii_lowercase();
        let arg = |prefix: &str| -> Option<&str> { lower.strip_prefix(prefix)?.strip_suffix(')') };
        Ok(match lower.as_str() {
            "nzct" => Builtin::Nzct,
            "ct" => Builtin::Ct(0),
            "tau" => Builtin::Tau,
            "sigma" => Builtin::Sigma,
            "centralizer_qi" => Builtin::CentralizerQi,
            "zero_sq_qi" => Builtin::ZeroSqQi,
            _ => {
                if let Some(n) = arg("ct(") {
                    Builtin::Ct(n.trim().parse().map_err(|_| bad())?)
                } else if let Some(k) = arg("torsion_free_qi(") {
                    let k: i64 = k.trim().parse().map_err(|_| bad())?;
                    if k == 0 {
                        return Err(bad());
                    }
                    Builtin::TorsionFreeQi(k)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Nzct => f.write_str("NZCT"),
            Builtin::Ct(n) => write!(f, "CT({n})"),
            Builtin::Tau => f.write_str("tau"),
            Builtin::Sigma => f.write_str("sigma"),
            Builtin::CentralizerQi => f.write_str("centralizer_qi"),
            Builtin::TorsionFreeQi(k) => write!(f, "torsion_free_qi({k})"),
            Builtin::ZeroSqQi => f.write_str("zero_sq_qi"),
        }
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn is_one(t: Term) -> Formula {
    t.eq(Term::One)
}

/// Commutativity transitive off `Z_n(G)`, with the noncentrality hypothesis
/// written as the left-normed commutator `[w1,...,wn,x2] != 1`.
fn ct(guard: Term, extra: Vec<String>) -> Formula {
    let hyp = guard
        .neq(Term::One)
        .and(is_one(v("x1").comm(v("x2"))))
        .and(is_one(v("x2").comm(v("x3"))));
    let mut vars: Vec<String> = ["x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
    vars.extend(extra);
    Formula::Forall(vars, Box::new(hyp.implies(is_one(v("x1").comm(v("x3"))))))
}

pub fn builtin(b: Builtin) -> Formula {
    match b {
        Builtin::Nzct => ct(v("x2").comm(v("y")), vec!["y".into()]),
        Builtin::Ct(n) => {
            let ws: Vec<String> = (1..=n).map(|i| format!("w{i}")).collect();
            let mut parts: Vec<Term> = ws.iter().map(|w| v(w)).collect();
            parts.push(v("x2"));
            ct(Term::comm_left_normed(parts), ws)
        }
        Builtin::Tau => Formula::forall(
            &["x1", "x2"],
            is_one(v("x2").comm(v("x1")))
                .and(is_one(Term::a2().comm(v("x2"))))
                .and(is_one(v("x1").comm(Term::a1())))
                .implies(is_one(v("x2").comm(Term::a1())).or(is_one(Term::a2().comm(v("x1"))))),
        ),
        Builtin::Sigma => Formula::forall(
            &["x1", "x2"],
            Formula::exists(
                &["y1", "y2"],
                is_one(v("y1").comm(Term::a1()))
                    .and(is_one(Term::a2().comm(v("y2"))))
                    .and(v("x2").comm(v("x1")).eq(v("y2").comm(Term::a1())))
                    .and(v("x2").comm(v("x1")).eq(Term::a2().comm(v("y1")))),
            ),
        ),
        Builtin::CentralizerQi => Formula::forall(
            &["x", "z"],
            is_one(v("z").comm(Term::a1()))
                .and(is_one(Term::a2().comm(v("z"))))
                .implies(is_one(v("z").comm(v("x")))),
        ),
        Builtin::TorsionFreeQi(k) => Formula::forall(&["x"], is_one(v("x").pow(k)).implies(is_one(v("x")))),
        Builtin::ZeroSqQi => builtin(Builtin::TorsionFreeQi(2)),
    }
}

/// `exists y ([a2,y]=1 & [y,a1]=@z)`.
pub fn system_s(z: &str) -> Formula {
    Formula::exists(
        &["y"],
        is_one(Term::a2().comm(v("y"))).and(v("y").comm(Term::a1()).eq(Term::constant(z))),
    )
}

/// `exists x ([x,a1]=1 & [a2,x]=@z)`.
pub fn system_t(z: &str) -> Formula {
    Formula::exists(
        &["x"],
        is_one(v("x").comm(Term::a1())).and(Term::a2().comm(v("x")).eq(Term::constant(z))),
    )
}
