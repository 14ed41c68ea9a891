use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;

use super::{classify, Formula, FormulaClass, FormulaError, Quantifier, Term};
use crate::group::Group;
use crate::rings::RingDesc;
use crate::ut3::{UT3Elem, UT3Group};

pub type Assignment<E> = Vec<(String, E)>;

/// A group together with named constants and the generators whose word
/// balls bound quantifier search.
#[derive(Clone, Debug)]
pub struct GroupEnv<G: Group> {
    pub group: G,
    constants: BTreeMap<String, G::Elem>,
    generators: Vec<G::Elem>,
}

impl<G: Group> GroupEnv<G> {
    /// `a1` and `a2` are always constants; they are also the initial
    /// search generators.
    pub fn new(group: G, a1: G::Elem, a2: G::Elem) -> Self {
        let mut constants = BTreeMap::new();
        constants.insert("a1".to_string(), a1.clone());
        constants.insert("a2".to_string(), a2.clone());
        GroupEnv {
            group,
            constants,
            generators: vec![a1, a2],
        }
    }

    pub fn with_constant(mut self, name: &str, value: G::Elem) -> Self {
        self.set_constant(name, value);
        self
    }

    pub fn set_constant(&mut self, name: &str, value: G::Elem) {
        self.constants.insert(name.to_string(), value);
    }

    pub fn with_generators(mut self, generators: Vec<G::Elem>) -> Self {
        self.generators = generators;
        self
    }

    pub fn constant(&self, name: &str) -> Option<&G::Elem> {
        self.constants.get(name)
    }

    pub fn constants(&self) -> &BTreeMap<String, G::Elem> {
        &self.constants
    }

    pub fn generators(&self) -> &[G::Elem] {
        &self.generators
    }

    pub fn ball(&self, radius: u32) -> Vec<G::Elem> {
        ball(&self.group, &self.generators, radius)
    }
}

impl GroupEnv<UT3Group> {
    /// `H = UT3(Z)` with generators `a1, a2`.
    pub fn heisenberg() -> Self {
        let z = RingDesc::integers();
        GroupEnv::new(UT3Group { ring: z.clone() }, UT3Elem::a1(&z), UT3Elem::a2(&z))
    }
}

/// Elements of word length at most `radius` over `gens` and their inverses,
/// in breadth-first order (each generator before its inverse), without
/// repeats. The identity comes first.
pub fn ball<G: Group>(group: &G, gens: &[G::Elem], radius: u32) -> Vec<G::Elem> {
    let mut letters = Vec::with_capacity(2 * gens.len());
    for g in gens {
        letters.push(g.clone());
        letters.push(group.inv(g));
    }
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut out = vec![group.identity()];
    seen.insert(group.identity());
    let mut frontier = 0..1;
    for _ in 0..radius {
        let start = out.len();
        for i in frontier.clone() {
            for l in &letters {
                let next = group.mul(&out[i], l);
                if seen.insert(next.clone()) {
                    out.push(next);
                }
            }
        }
        frontier = start..out.len();
        if frontier.is_empty() {
            break;
        }
    }
    out
}

pub fn eval_term<G: Group>(
    t: &Term,
    env: &GroupEnv<G>,
    assignment: &BTreeMap<String, G::Elem>,
) -> Result<G::Elem, FormulaError> {
    let g = &env.group;
    Ok(match t {
        Term::One => g.identity(),
        Term::Var(v) => assignment
            .get(v)
            .cloned()
            .ok_or_else(|| FormulaError::Unresolved(v.clone()))?,
        Term::Const(c) => env
            .constant(c)
            .cloned()
            .ok_or_else(|| FormulaError::Unresolved(format!("@{c}")))?,
        Term::Mul(a, b) => g.mul(&eval_term(a, env, assignment)?, &eval_term(b, env, assignment)?),
        Term::Inv(a) => g.inv(&eval_term(a, env, assignment)?),
        Term::Pow(a, n) => g.pow(&eval_term(a, env, assignment)?, n),
        Term::Comm(a, b) => g.commutator(&eval_term(a, env, assignment)?, &eval_term(b, env, assignment)?),
    })
}

/// Truth value of a quantifier-free formula under an assignment.
pub fn eval_qf<G: Group>(
    f: &Formula,
    env: &GroupEnv<G>,
    assignment: &BTreeMap<String, G::Elem>,
) -> Result<bool, FormulaError> {
    Ok(match f {
        Formula::Eq(a, b) => eval_term(a, env, assignment)? == eval_term(b, env, assignment)?,
        Formula::Neq(a, b) => eval_term(a, env, assignment)? != eval_term(b, env, assignment)?,
        Formula::Not(g) => !eval_qf(g, env, assignment)?,
        Formula::And(a, b) => eval_qf(a, env, assignment)? && eval_qf(b, env, assignment)?,
        Formula::Or(a, b) => eval_qf(a, env, assignment)? || eval_qf(b, env, assignment)?,
        Formula::Implies(a, b) => !eval_qf(a, env, assignment)? || eval_qf(b, env, assignment)?,
        Formula::Forall(..) | Formula::Exists(..) => return Err(FormulaError::QuantifierInMatrix),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<E> {
    Found(Assignment<E>),
    NoneWithinBound { bound: u32, ball_size: usize },
}

impl<E> SearchOutcome<E> {
    pub fn found(&self) -> Option<&Assignment<E>> {
        match self {
            SearchOutcome::Found(a) => Some(a),
            SearchOutcome::NoneWithinBound { .. } => None,
        }
    }
}

/// Looks for an assignment from the radius-`bound` ball falsifying a
/// universal sentence. Returns the first one in lexicographic order
/// (variables in quantifier order, elements in ball order). Exhaustion
/// proves nothing about the infinite group.
pub fn refute_universal<G: Group>(
    f: &Formula,
    env: &GroupEnv<G>,
    bound: u32,
) -> Result<SearchOutcome<G::Elem>, FormulaError> {
    let class = classify(f)?;
    if !matches!(
        class,
        FormulaClass::Identity | FormulaClass::QuasiIdentity | FormulaClass::Universal
    ) {
        return Err(FormulaError::WrongClass {
            expected: "universal",
            got: class,
        });
    }
    single_block_search(f, env, bound, false)
}

/// Looks for an assignment from the radius-`bound` ball satisfying the
/// matrix of an existential sentence.
pub fn witness_existential<G: Group>(
    f: &Formula,
    env: &GroupEnv<G>,
    bound: u32,
) -> Result<SearchOutcome<G::Elem>, FormulaError> {
    let class = classify(f)?;
    if !matches!(class, FormulaClass::Existential | FormulaClass::Primitive) {
        return Err(FormulaError::WrongClass {
            expected: "existential",
            got: class,
        });
    }
    single_block_search(f, env, bound, true)
}

fn single_block_search<G: Group>(
    f: &Formula,
    env: &GroupEnv<G>,
    bound: u32,
    want: bool,
) -> Result<SearchOutcome<G::Elem>, FormulaError> {
    let (blocks, matrix) = f.prefix();
    let vars: Vec<String> = blocks.into_iter().flat_map(|(_, vs)| vs).collect();
    let ball = env.ball(bound);
    let mut s = Searcher::new(matrix, &vars, env, &ball)?;
    let mut idx = vec![0; vars.len()];
    Ok(if s.first(0, &mut idx, want) {
        SearchOutcome::Found(s.assignment(&idx))
    } else {
        SearchOutcome::NoneWithinBound {
            bound,
            ball_size: ball.len(),
        }
    })
}

/// Bounded reading of a `forall ... exists ...` sentence: returns the first
/// universal assignment from the ball that has no existential witness in the
/// same ball, or `NoneWithinBound` if every one does. Neither outcome
/// decides the sentence in an infinite group.
pub fn search_forall_exists<G: Group>(
    f: &Formula,
    env: &GroupEnv<G>,
    bound: u32,
) -> Result<SearchOutcome<G::Elem>, FormulaError> {
    let class = classify(f)?;
    if class != FormulaClass::ForallExists {
        return Err(FormulaError::WrongClass {
            expected: "forall_exists",
            got: class,
        });
    }
    let (blocks, matrix) = f.prefix();
    let outer: Vec<String> = blocks
        .iter()
        .filter(|(q, _)| *q == Quantifier::Forall)
        .flat_map(|(_, vs)| vs.clone())
        .collect();
    let mut vars = outer.clone();
    vars.extend(
        blocks
            .iter()
            .filter(|(q, _)| *q == Quantifier::Exists)
            .flat_map(|(_, vs)| vs.clone()),
    );
    let ball = env.ball(bound);
    let mut s = Searcher::new(matrix, &vars, env, &ball)?;
    let mut idx = vec![0; vars.len()];
    let n = ball.len();
    loop {
        if !s.first(outer.len(), &mut idx, true) {
            let mut a = s.assignment(&idx);
            a.truncate(outer.len());
            return Ok(SearchOutcome::Found(a));
        }
        // advance the universal prefix lexicographically
        let mut d = outer.len();
        loop {
            if d == 0 {
                return Ok(SearchOutcome::NoneWithinBound { bound, ball_size: n });
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < n {
                break;
            }
            idx[d] = 0;
        }
        for i in idx.iter_mut().skip(outer.len()) {
            *i = 0;
        }
    }
}

enum CTerm<E> {
    One,
    Var(usize),
    Const(E),
    Mul(Box<CTerm<E>>, Box<CTerm<E>>),
    Inv(Box<CTerm<E>>),
    Pow(Box<CTerm<E>>, BigInt),
    Comm(Box<CTerm<E>>, Box<CTerm<E>>),
}

enum Node {
    Atom(usize, bool),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
}

struct CAtom<E> {
    lhs: CTerm<E>,
    rhs: CTerm<E>,
    vars: Vec<usize>,
    /// Number of leading variables that must be assigned to decide the atom.
    depth: usize,
    memo: HashMap<u128, bool>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tri {
    False,
    True,
    Unknown,
}

impl Tri {
    fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::True => Tri::False,
            Tri::Unknown => Tri::Unknown,
        }
    }

    fn and(self, other: impl FnOnce() -> Tri) -> Tri {
        match self {
            Tri::False => Tri::False,
            Tri::True => other(),
            Tri::Unknown => match other() {
                Tri::False => Tri::False,
                _ => Tri::Unknown,
            },
        }
    }

    fn or(self, other: impl FnOnce() -> Tri) -> Tri {
        self.not().and(|| other().not()).not()
    }
}

/// Atoms of a compiled matrix with per-atom memo tables keyed by the ball
/// indices of the atom's variables.
struct AtomStore<'a, G: Group> {
    env: &'a GroupEnv<G>,
    ball: &'a [G::Elem],
    atoms: Vec<CAtom<G::Elem>>,
}

impl<G: Group> AtomStore<'_, G> {
    fn eval_cterm(&self, t: &CTerm<G::Elem>, idx: &[usize]) -> G::Elem {
        let g = &self.env.group;
        match t {
            CTerm::One => g.identity(),
            CTerm::Var(i) => self.ball[idx[*i]].clone(),
            CTerm::Const(e) => e.clone(),
            CTerm::Mul(a, b) => g.mul(&self.eval_cterm(a, idx), &self.eval_cterm(b, idx)),
            CTerm::Inv(a) => g.inv(&self.eval_cterm(a, idx)),
            CTerm::Pow(a, n) => g.pow(&self.eval_cterm(a, idx), n),
            CTerm::Comm(a, b) => g.commutator(&self.eval_cterm(a, idx), &self.eval_cterm(b, idx)),
        }
    }

    fn atom_value(&mut self, i: usize, idx: &[usize]) -> bool {
        let n = self.ball.len() as u128;
        let atom = &self.atoms[i];
        let key = atom
            .vars
            .iter()
            .try_fold(0u128, |acc, &v| acc.checked_mul(n)?.checked_add(idx[v] as u128));
        if let Some(k) = key {
            if let Some(&b) = atom.memo.get(&k) {
                return b;
            }
        }
        let value = self.eval_cterm(&atom.lhs, idx) == self.eval_cterm(&atom.rhs, idx);
        if let Some(k) = key {
            self.atoms[i].memo.insert(k, value);
        }
        value
    }

    fn kleene(&mut self, node: &Node, assigned: usize, idx: &[usize]) -> Tri {
        match node {
            Node::Atom(i, positive) => {
                if self.atoms[*i].depth > assigned {
                    return Tri::Unknown;
                }
                if self.atom_value(*i, idx) == *positive {
                    Tri::True
                } else {
                    Tri::False
                }
            }
            Node::Not(a) => self.kleene(a, assigned, idx).not(),
            Node::And(a, b) => {
                let l = self.kleene(a, assigned, idx);
                l.and(|| self.kleene(b, assigned, idx))
            }
            Node::Or(a, b) => {
                let l = self.kleene(a, assigned, idx);
                l.or(|| self.kleene(b, assigned, idx))
            }
            Node::Implies(a, b) => {
                let l = self.kleene(a, assigned, idx).not();
                l.or(|| self.kleene(b, assigned, idx))
            }
        }
    }
}

/// Depth-first search over assignments with three-valued pruning: after each
/// variable is fixed, atoms whose variables are all fixed are evaluated and
/// the matrix is evaluated in Kleene logic.
struct Searcher<'a, G: Group> {
    vars: Vec<String>,
    root: Node,
    store: AtomStore<'a, G>,
}

impl<'a, G: Group> Searcher<'a, G> {
    fn new(matrix: &Formula, vars: &[String], env: &'a GroupEnv<G>, ball: &'a [G::Elem]) -> Result<Self, FormulaError> {
        let mut store = AtomStore {
            env,
            ball,
            atoms: Vec::new(),
        };
        let root = compile(matrix, vars, &mut store)?;
        Ok(Searcher {
            vars: vars.to_vec(),
            root,
            store,
        })
    }

    /// Finds the lexicographically first completion of `idx[..fixed]` whose
    /// matrix value is `want`, leaving it in `idx`.
    fn first(&mut self, fixed: usize, idx: &mut [usize], want: bool) -> bool {
        let target = if want { Tri::True } else { Tri::False };
        match self.store.kleene(&self.root, fixed, idx) {
            t if t == target => {
                for i in idx.iter_mut().skip(fixed) {
                    *i = 0;
                }
                return true;
            }
            Tri::Unknown => {}
            _ => return false,
        }
        if fixed == idx.len() {
            return false;
        }
        for i in 0..self.store.ball.len() {
            idx[fixed] = i;
            if self.first(fixed + 1, idx, want) {
                return true;
            }
        }
        false
    }

    fn assignment(&self, idx: &[usize]) -> Assignment<G::Elem> {
        self.vars
            .iter()
            .zip(idx)
            .map(|(v, &i)| (v.clone(), self.store.ball[i].clone()))
            .collect()
    }
}

fn compile<G: Group>(f: &Formula, vars: &[String], store: &mut AtomStore<'_, G>) -> Result<Node, FormulaError> {
    Ok(match f {
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            let lhs = compile_term(a, vars, store.env)?;
            let rhs = compile_term(b, vars, store.env)?;
            let mut used = a.vars();
            used.extend(b.vars());
            let positions: Vec<usize> = used
                .iter()
                .map(|v| vars.iter().position(|w| w == v).expect("compiled"))
                .collect();
            let depth = positions.iter().max().map_or(0, |m| m + 1);
            store.atoms.push(CAtom {
                lhs,
                rhs,
                vars: positions,
                depth,
                memo: HashMap::new(),
            });
            Node::Atom(store.atoms.len() - 1, matches!(f, Formula::Eq(..)))
        }
        Formula::Not(g) => Node::Not(Box::new(compile(g, vars, store)?)),
        Formula::And(a, b) => Node::And(Box::new(compile(a, vars, store)?), Box::new(compile(b, vars, store)?)),
        Formula::Or(a, b) => Node::Or(Box::new(compile(a, vars, store)?), Box::new(compile(b, vars, store)?)),
        Formula::Implies(a, b) => Node::Implies(Box::new(compile(a, vars, store)?), Box::new(compile(b, vars, store)?)),
        Formula::Forall(..) | Formula::Exists(..) => return Err(FormulaError::QuantifierInMatrix),
    })
}

fn compile_term<G: Group>(t: &Term, vars: &[String], env: &GroupEnv<G>) -> Result<CTerm<G::Elem>, FormulaError> {
    let rec = |t: &Term| compile_term(t, vars, env).map(Box::new);
    Ok(match t {
        Term::One => CTerm::One,
        Term::Var(v) => CTerm::Var(
            vars.iter()
                .position(|w| w == v)
                .ok_or_else(|| FormulaError::FreeVariables(vec![v.clone()]))?,
        ),
        Term::Const(c) => CTerm::Const(
            env.constant(c)
                .cloned()
                .ok_or_else(|| FormulaError::Unresolved(format!("@{c}")))?,
        ),
        Term::Mul(a, b) => CTerm::Mul(rec(a)?, rec(b)?),
        Term::Inv(a) => CTerm::Inv(rec(a)?),
        Term::Pow(a, n) => CTerm::Pow(rec(a)?, n.clone()),
        Term::Comm(a, b) => CTerm::Comm(rec(a)?, rec(b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{builtin, parse, system_s, system_t, Builtin};

    fn h() -> GroupEnv<UT3Group> {
        GroupEnv::heisenberg()
    }

    #[test]
    fn ball_sizes_in_h() {
        // word-metric balls of H = <a1, a2>, counted independently by
        // enumerating all words of each length as matrices
        let env = h();
        let mut by_words: HashSet<(i64, i64, i64)> = HashSet::new();
        let letters = [(0i64, 0i64, 1i64), (0, 0, -1), (1, 0, 0), (-1, 0, 0)];
        let mut layer = vec![(0i64, 0i64, 0i64)];
        by_words.insert((0, 0, 0));
        for radius in 1..=4u32 {
            let mut next = Vec::new();
            for &(a, b, c) in &layer {
                for &(x, y, z) in &letters {
                    next.push((a + x, b + y + a * z, c + z));
                }
            }
            by_words.extend(next.iter().copied());
            layer = next;
            assert_eq!(env.ball(radius).len(), by_words.len(), "radius {radius}");
        }
        assert_eq!(env.ball(0), vec![UT3Elem::identity(&RingDesc::integers())]);
    }

    #[test]
    fn qf_evaluation() {
        let env = h();
        let empty = BTreeMap::new();
        assert!(eval_qf(&parse("[a2,a1]!=1").unwrap(), &env, &empty).unwrap());
        let z = RingDesc::integers();
        let mut asg = BTreeMap::new();
        asg.insert("x".to_string(), UT3Elem::from_ints(&z, 3, 1, -2));
        assert!(eval_qf(&parse("x=x").unwrap(), &env, &asg).unwrap());
        let tau = builtin(Builtin::Tau);
        let (_, m) = tau.prefix();
        asg.clear();
        asg.insert("x1".into(), UT3Elem::a1(&z));
        asg.insert("x2".into(), UT3Elem::a2(&z));
        assert!(eval_qf(m, &env, &asg).unwrap());
        assert!(matches!(
            eval_qf(&parse("y=1").unwrap(), &env, &asg),
            Err(FormulaError::Unresolved(_))
        ));
        assert!(eval_qf(&parse("@q=1").unwrap(), &env, &asg).is_err());
    }

    #[test]
    fn trivial_searches() {
        let env = h();
        let f = parse("forall x (x=x)").unwrap();
        assert_eq!(
            refute_universal(&f, &env, 3).unwrap(),
            SearchOutcome::NoneWithinBound {
                bound: 3,
                ball_size: env.ball(3).len()
            }
        );
        let e = parse("exists x (x=1)").unwrap();
        let found = witness_existential(&e, &env, 2).unwrap();
        assert!(found.found().unwrap()[0].1.is_identity());
        assert!(matches!(
            refute_universal(&e, &env, 1),
            Err(FormulaError::WrongClass { .. })
        ));
    }

    #[test]
    fn systems_s_and_t_for_c() {
        let z = RingDesc::integers();
        let c = UT3Elem::from_ints(&z, 0, 1, 0);
        let env = h().with_constant("z", c);
        let s = witness_existential(&system_s("z"), &env, 2).unwrap();
        assert_eq!(s.found().unwrap()[0].1, UT3Elem::a2(&z));
        let t = witness_existential(&system_t("z"), &env, 2).unwrap();
        assert_eq!(t.found().unwrap()[0].1, UT3Elem::a1(&z));
    }

    #[test]
    fn a_false_universal_is_refuted_at_its_first_counterexample() {
        let env = h();
        let f = parse("forall x,y ([x,y]=1)").unwrap();
        let out = refute_universal(&f, &env, 1).unwrap();
        let a = out.found().unwrap();
        let z = RingDesc::integers();
        // ball(1) order: 1, a1, a1^-1, a2, a2^-1
        assert_eq!(a[0].1, UT3Elem::a1(&z));
        assert_eq!(a[1].1, UT3Elem::a2(&z));
    }

    #[test]
    fn forall_exists_bounded() {
        let env = h();
        let f = parse("forall x exists y (x*y=1)").unwrap();
        assert!(matches!(
            search_forall_exists(&f, &env, 2).unwrap(),
            SearchOutcome::NoneWithinBound { .. }
        ));
        let g = parse("forall x exists y (y*y=x)").unwrap();
        let out = search_forall_exists(&g, &env, 1).unwrap();
        assert_eq!(out.found().unwrap()[0].1, UT3Elem::a1(&RingDesc::integers()));
    }
}
