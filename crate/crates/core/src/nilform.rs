//! Free 2-nilpotent groups `F_n(N2)` in Mal'cev normal form
//! `a1^e1 ... an^en * prod_{i<j} [aj,ai]^f_ij`, with `[g,h] = g^-1 h^-1 g h`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::formula::Term;
use crate::group::Group;
use crate::rings::{points_of_norm, RingDesc, RingElem};
use crate::ut3::{UT3Elem, UT3Group};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NilError {
    #[error("generator index {index} out of range for rank {rank}")]
    BadIndex { index: usize, rank: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("expected {expected} generator images, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("the identity cannot be discriminated (target {0})")]
    IdentityTarget(usize),
    #[error("no discriminating retraction with exponents up to {bound}")]
    Exhausted { bound: u64 },
    #[error("to_matrix needs rank 2, got rank {0}")]
    NotRankTwo(usize),
    #[error("bad word: {0}")]
    Word(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NilForm {
    e: Vec<BigInt>,
    /// Upper-triangular exponents, row-major over pairs `i < j`.
    f: Vec<BigInt>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl NilForm {
    pub fn identity(n: usize) -> Self {
        NilForm {
            e: vec![BigInt::zero(); n],
            f: vec![BigInt::zero(); n * n.saturating_sub(1) / 2],
        }
    }

    /// The free generator `a_k`, 1-based.
    pub fn generator(n: usize, k: usize) -> Result<Self, NilError> {
        if k == 0 || k > n {
            return Err(NilError::BadIndex { index: k, rank: n });
        }
        let mut x = NilForm::identity(n);
        x.e[k - 1] = BigInt::one();
        Ok(x)
    }

    /// The basic commutator `[a_j, a_i]` for `i < j`, 1-based.
    pub fn basic_commutator(n: usize, j: usize, i: usize) -> Result<Self, NilError> {
        for k in [i, j] {
            if k == 0 || k > n {
                return Err(NilError::BadIndex { index: k, rank: n });
            }
        }
        let mut x = NilForm::identity(n);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => x.f[pair_index(n, i - 1, j - 1)] = BigInt::one(),
            std::cmp::Ordering::Greater => x.f[pair_index(n, j - 1, i - 1)] = -BigInt::one(),
            std::cmp::Ordering::Equal => {}
        }
        Ok(x)
    }

    pub fn from_exponents(e: Vec<BigInt>, f: Vec<BigInt>) -> Self {
        let n = e.len();
        assert_eq!(f.len(), n * n.saturating_sub(1) / 2, "commutator exponent count");
        NilForm { e, f }
    }

    pub fn rank(&self) -> usize {
        self.e.len()
    }

    pub fn e(&self) -> &[BigInt] {
        &self.e
    }

    /// Exponent of `[a_j, a_i]`, 1-based with `i < j`.
    pub fn f(&self, i: usize, j: usize) -> &BigInt {
        &self.f[pair_index(self.rank(), i - 1, j - 1)]
    }

    pub fn f_all(&self) -> &[BigInt] {
        &self.f
    }

    pub fn is_identity(&self) -> bool {
        self.e.iter().chain(&self.f).all(Zero::is_zero)
    }

    pub fn mul(&self, y: &NilForm) -> Result<NilForm, NilError> {
        if self.rank() != y.rank() {
            return Err(NilError::RankMismatch(self.rank(), y.rank()));
        }
        Ok(self.mul_unchecked(y))
    }

    /// Moving `a_i^{y_i}` left past `a_j^{x_j}` (j > i) costs `[a_j,a_i]^{x_j y_i}`.
    fn mul_unchecked(&self, y: &NilForm) -> NilForm {
        let n = self.rank();
        let e = self.e.iter().zip(&y.e).map(|(a, b)| a + b).collect();
        let mut f: Vec<BigInt> = self.f.iter().zip(&y.f).map(|(a, b)| a + b).collect();
        for i in 0..n {
            if y.e[i].is_zero() {
                continue;
            }
            for j in i + 1..n {
                if !self.e[j].is_zero() {
                    f[pair_index(n, i, j)] += &self.e[j] * &y.e[i];
                }
            }
        }
        NilForm { e, f }
    }

    pub fn inv(&self) -> NilForm {
        let n = self.rank();
        let e: Vec<BigInt> = self.e.iter().map(|a| -a).collect();
        let mut f: Vec<BigInt> = self.f.iter().map(|a| -a).collect();
        for i in 0..n {
            for j in i + 1..n {
                f[pair_index(n, i, j)] += &self.e[j] * &self.e[i];
            }
        }
        NilForm { e, f }
    }

    pub fn commutator(&self, y: &NilForm) -> Result<NilForm, NilError> {
        if self.rank() != y.rank() {
            return Err(NilError::RankMismatch(self.rank(), y.rank()));
        }
        // [x,y] = prod_{i<j} [aj,ai]^(x_j y_i - x_i y_j)
        let n = self.rank();
        let mut out = NilForm::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                out.f[pair_index(n, i, j)] = &self.e[j] * &y.e[i] - &self.e[i] * &y.e[j];
            }
        }
        Ok(out)
    }

    /// `a1^p a2^q [a2,a1]^r -> (u12, u13, u23) = (q, r, p)`.
    pub fn to_matrix(&self) -> Result<UT3Elem, NilError> {
        if self.rank() != 2 {
            return Err(NilError::NotRankTwo(self.rank()));
        }
        let z = RingDesc::integers();
        let entry = |v: &BigInt| RingElem::from_int(&z, v.clone());
        Ok(UT3Elem {
            u12: entry(&self.e[1]),
            u13: entry(&self.f[0]),
            u23: entry(&self.e[0]),
        })
    }

    /// Inverse of [`NilForm::to_matrix`] on integer matrices.
    pub fn from_matrix(g: &UT3Elem) -> Option<NilForm> {
        if g.ring().num_components() != 1 {
            return None;
        }
        let int = |r: &RingElem| r.part(0).as_constant();
        Some(NilForm {
            e: vec![int(&g.u23)?, int(&g.u12)?],
            f: vec![int(&g.u13)?],
        })
    }
}

/// Collects a word of `(generator, exponent)` letters, 1-based generators.
pub fn collect(n: usize, word: &[(usize, i64)]) -> Result<NilForm, NilError> {
    let mut acc = NilForm::identity(n);
    for &(k, s) in word {
        if k == 0 || k > n {
            return Err(NilError::BadIndex { index: k, rank: n });
        }
        let k = k - 1;
        let s = BigInt::from(s);
        // a_j^{e_j} a_k^s = a_k^s a_j^{e_j} [a_j,a_k]^{e_j s} for every j > k
        for j in k + 1..n {
            if !acc.e[j].is_zero() {
                let idx = pair_index(n, k, j);
                acc.f[idx] += &acc.e[j] * &s;
            }
        }
        acc.e[k] += s;
    }
    Ok(acc)
}

/// Parses a word in `a1, ..., an` built from products, powers, inverses
/// and commutators, e.g. `a1*a3^2*[a3,a1]^-1`.
pub fn parse_word(n: usize, text: &str) -> Result<NilForm, NilError> {
    let term = crate::formula::parse_term(text).map_err(|e| NilError::Word(e.to_string()))?;
    word_value(n, &term)
}

fn word_value(n: usize, t: &Term) -> Result<NilForm, NilError> {
    let g = NilGroup { rank: n };
    Ok(match t {
        Term::One => NilForm::identity(n),
        Term::Var(name) | Term::Const(name) => {
            let k: usize = name
                .strip_prefix('a')
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| NilError::Word(format!("unknown letter `{name}`")))?;
            NilForm::generator(n, k)?
        }
        Term::Mul(a, b) => word_value(n, a)?.mul_unchecked(&word_value(n, b)?),
        Term::Inv(a) => word_value(n, a)?.inv(),
        Term::Pow(a, e) => g.pow(&word_value(n, a)?, e),
        Term::Comm(a, b) => g.commutator(&word_value(n, a)?, &word_value(n, b)?),
    })
}

impl fmt::Display for NilForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.rank();
        let mut parts = Vec::new();
        let push = |parts: &mut Vec<String>, base: String, e: &BigInt| {
            if e.is_one() {
                parts.push(base);
            } else if !e.is_zero() {
                parts.push(format!("{base}^{e}"));
            }
        };
        for (k, e) in self.e.iter().enumerate() {
            push(&mut parts, format!("a{}", k + 1), e);
        }
        for i in 0..n {
            for j in i + 1..n {
                push(
                    &mut parts,
                    format!("[a{},a{}]", j + 1, i + 1),
                    &self.f[pair_index(n, i, j)],
                );
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// `F_n(N2)` as a [`Group`].
#[derive(Clone, Copy, Debug)]
pub struct NilGroup {
    pub rank: usize,
}

impl Group for NilGroup {
    type Elem = NilForm;

    fn identity(&self) -> NilForm {
        NilForm::identity(self.rank)
    }

    fn mul(&self, a: &NilForm, b: &NilForm) -> NilForm {
        a.mul_unchecked(b)
    }

    fn inv(&self, a: &NilForm) -> NilForm {
        a.inv()
    }

    fn is_identity(&self, a: &NilForm) -> bool {
        a.is_identity()
    }

    fn commutator(&self, a: &NilForm, b: &NilForm) -> NilForm {
        a.commutator(b).expect("same rank")
    }

    fn pow(&self, a: &NilForm, n: &BigInt) -> NilForm {
        // x^m: e -> m e, f_ij -> m f_ij + C(m,2) e_i e_j
        let choose2: BigInt = n * (n - BigInt::one()) / 2;
        let rank = a.rank();
        let mut out = NilForm {
            e: a.e.iter().map(|x| x * n).collect(),
            f: a.f.iter().map(|x| x * n).collect(),
        };
        for i in 0..rank {
            for j in i + 1..rank {
                out.f[pair_index(rank, i, j)] += &choose2 * &a.e[i] * &a.e[j];
            }
        }
        out
    }

    fn render(&self, a: &NilForm) -> String {
        a.to_string()
    }
}

/// The homomorphism out of `F_n(N2)` determined by generator images.
#[derive(Clone, Debug)]
pub struct NilHom<G: Group> {
    group: G,
    images: Vec<G::Elem>,
}

pub fn hom_on_generators<G: Group>(group: G, images: Vec<G::Elem>) -> NilHom<G> {
    NilHom { group, images }
}

impl<G: Group> NilHom<G> {
    pub fn images(&self) -> &[G::Elem] {
        &self.images
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn apply(&self, x: &NilForm) -> Result<G::Elem, NilError> {
        let n = x.rank();
        if n != self.images.len() {
            return Err(NilError::Arity {
                expected: n,
                got: self.images.len(),
            });
        }
        let g = &self.group;
        let mut acc = g.identity();
        for (img, e) in self.images.iter().zip(&x.e) {
            if !e.is_zero() {
                acc = g.mul(&acc, &g.pow(img, e));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let f = &x.f[pair_index(n, i, j)];
                if !f.is_zero() {
                    let c = g.commutator(&self.images[j], &self.images[i]);
                    acc = g.mul(&acc, &g.pow(&c, f));
                }
            }
        }
        Ok(acc)
    }
}

/// A retraction `F_n(N2) -> H` with the images that certify it.
#[derive(Clone, Debug)]
pub struct Discriminator {
    pub hom: NilHom<UT3Group>,
    /// `(p, q, r)` with `a_k -> a1^p a2^q [a2,a1]^r` for each `k > 2`.
    pub exponents: Vec<[BigInt; 3]>,
    pub certificate: Vec<(NilForm, UT3Elem)>,
}

/// Default cap on the exponent search in [`discriminate_to_h`].
pub const DEFAULT_DISCRIMINATION_CAP: u64 = 8;

/// Finds a retraction fixing `a1, a2` that maps no target to the identity.
///
/// Images `a_k -> a1^p a2^q c^r` (k > 2) are tried by increasing
/// max-norm of all exponents, lexicographic inside a norm shell.
pub fn discriminate_to_h(n: usize, targets: &[NilForm], cap: u64) -> Result<Discriminator, NilError> {
    for (idx, t) in targets.iter().enumerate() {
        if t.rank() != n {
            return Err(NilError::RankMismatch(n, t.rank()));
        }
        if t.is_identity() {
            return Err(NilError::IdentityTarget(idx));
        }
    }
    let z = RingDesc::integers();
    let group = UT3Group { ring: z.clone() };
    let a1 = UT3Elem::a1(&z);
    let a2 = UT3Elem::a2(&z);
    let fixed: Vec<UT3Elem> = [a1, a2].into_iter().take(n).collect();
    let extra = n.saturating_sub(2);
    for norm in 0..=cap {
        for point in points_of_norm(3 * extra, norm) {
            let exponents: Vec<[BigInt; 3]> = point
                .chunks(3)
                .map(|c| [c[0].into(), c[1].into(), c[2].into()])
                .collect();
            let mut images = fixed.clone();
            for [p, q, r] in &exponents {
                images.push(UT3Elem {
                    u12: RingElem::from_int(&z, q.clone()),
                    u13: RingElem::from_int(&z, r.clone()),
                    u23: RingElem::from_int(&z, p.clone()),
                });
            }
            let hom = hom_on_generators(group.clone(), images);
            let mut certificate = Vec::with_capacity(targets.len());
            let mut ok = true;
            for t in targets {
                let img = hom.apply(t)?;
                if img.is_identity() {
                    ok = false;
                    break;
                }
                certificate.push((t.clone(), img));
            }
            if ok {
                return Ok(Discriminator {
                    hom,
                    exponents,
                    certificate,
                });
            }
        }
    }
    Err(NilError::Exhausted { bound: cap })
}

impl Discriminator {
    /// Human-readable images of the free generators.
    pub fn describe(&self) -> Vec<String> {
        self.hom
            .images()
            .iter()
            .enumerate()
            .map(|(k, img)| match NilForm::from_matrix(img) {
                Some(form) => format!("a{} -> {}", k + 1, rename_h(&form)),
                None => format!("a{} -> {}", k + 1, img),
            })
            .collect()
    }
}

/// Prints an element of `F_2(N2)` using the names of `H`.
fn rename_h(form: &NilForm) -> String {
    let s = form.to_string();
    s.replace("[a2,a1]", "c")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, s: &str) -> NilForm {
        parse_word(n, s).unwrap()
    }

    #[test]
    fn normal_form_rules() {
        // a2 a1 = a1 a2 [a2,a1]
        let x = collect(2, &[(2, 1), (1, 1)]).unwrap();
        assert_eq!(x.to_string(), "a1*a2*[a2,a1]");
        assert_eq!(w(2, "a2*a1"), x);
        assert_eq!(w(2, "[a2,a1]"), NilForm::basic_commutator(2, 2, 1).unwrap());
        assert_eq!(w(3, "[a1,a3]").to_string(), "[a3,a1]^-1");
        assert_eq!(w(3, "a3^-2*a3^2"), NilForm::identity(3));
        assert_eq!(NilForm::identity(3).to_string(), "1");
    }

    #[test]
    fn group_laws_on_samples() {
        let words = ["a1*a2^3", "[a2,a1]^2*a3^-1", "a3*a1^2*a2", "a2^-1*a3^4*[a3,a2]", "1"];
        let xs: Vec<NilForm> = words.iter().map(|s| w(3, s)).collect();
        let g = NilGroup { rank: 3 };
        for x in &xs {
            assert!(x.mul(&x.inv()).unwrap().is_identity());
            for y in &xs {
                let c = x.commutator(y).unwrap();
                let naive = x.inv().mul(&y.inv()).unwrap().mul(x).unwrap().mul(y).unwrap();
                assert_eq!(c, naive);
                for z in &xs {
                    let l = x.mul(y).unwrap().mul(z).unwrap();
                    let r = x.mul(&y.mul(z).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
            let mut acc = NilForm::identity(3);
            for m in 0..5 {
                assert_eq!(g.pow(x, &BigInt::from(m)), acc);
                acc = acc.mul(x).unwrap();
            }
            assert_eq!(g.pow(x, &BigInt::from(-3)), g.pow(&x.inv(), &BigInt::from(3)));
        }
    }

    #[test]
    fn matrices_of_rank_two() {
        let x = w(2, "a1^2*a2^-1*[a2,a1]^5");
        let m = x.to_matrix().unwrap();
        assert_eq!(m.to_string(), "{e12: -1, e13: 5, e23: 2}");
        assert_eq!(NilForm::from_matrix(&m).unwrap(), x);
        assert!(matches!(w(3, "a3").to_matrix(), Err(NilError::NotRankTwo(3))));
    }

    #[test]
    fn bad_words() {
        assert!(matches!(
            parse_word(2, "a3"),
            Err(NilError::BadIndex { index: 3, rank: 2 })
        ));
        assert!(matches!(parse_word(2, "b"), Err(NilError::Word(_))));
        assert!(matches!(parse_word(2, "a1*"), Err(NilError::Word(_))));
        assert!(NilForm::generator(2, 0).is_err());
    }

    #[test]
    fn discrimination() {
        let targets = vec![w(3, "a3*a1^-1"), w(3, "[a3,a2]"), w(3, "a3*a2^-1*[a2,a1]^-1")];
        let d = discriminate_to_h(3, &targets, DEFAULT_DISCRIMINATION_CAP).unwrap();
        for (t, img) in &d.certificate {
            assert_eq!(&d.hom.apply(t).unwrap(), img);
            assert!(!img.is_identity());
        }
        // a3 -> a1 would kill the first target
        assert_ne!(d.exponents[0], [BigInt::from(1), BigInt::zero(), BigInt::zero()]);
        assert_eq!(d.describe()[0], "a1 -> a1");
        assert!(matches!(
            discriminate_to_h(3, &[NilForm::identity(3)], 2),
            Err(NilError::IdentityTarget(0))
        ));
        // rank two: the identity retraction
        let d = discriminate_to_h(2, &[w(2, "[a2,a1]")], 0).unwrap();
        assert!(d.exponents.is_empty());
    }
}
