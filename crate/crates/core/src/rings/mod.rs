//! Exact arithmetic in finite products of multivariate integer polynomial
//! rings `Z[t..] x Z[s..] x ...`.
//!
//! Every component is an integral domain, so an element is a zero divisor
//! exactly when it is nonzero and vanishes in some component. Ring
//! homomorphisms onto `Z` are evaluations of a single component at an integer
//! point; see [`Retraction`].

mod parse;
mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use parse::{parse_element, parse_ring};
pub use poly::{Monomial, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("zero has no separating retraction")]
    ZeroHasNoRetraction,
    #[error("element {index} of the list is zero")]
    ZeroInList { index: usize },
    #[error("indeterminate `{0}` already present")]
    NameClash(String),
    #[error("invalid ring descriptor: {0}")]
    BadDescriptor(String),
    #[error("invalid element literal `{text}`: {reason}")]
    BadLiteral { text: String, reason: String },
    #[error("retraction does not fit ring: {0}")]
    BadRetraction(String),
}

/// Shape of a ring: one list of indeterminate names per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingDesc {
    components: Vec<Vec<String>>,
}

pub type Ring = Arc<RingDesc>;

impl RingDesc {
    pub fn new(components: Vec<Vec<String>>) -> Result<Self, RingError> {
        if components.is_empty() {
            return Err(RingError::BadDescriptor("a ring needs at least one component".into()));
        }
        for comp in &components {
            for (i, name) in comp.iter().enumerate() {
                if !is_identifier(name) {
                    return Err(RingError::BadDescriptor(format!("bad indeterminate name `{name}`")));
                }
                if comp[..i].contains(name) {
                    return Err(RingError::BadDescriptor(format!("duplicate indeterminate `{name}`")));
                }
            }
        }
        Ok(RingDesc { components })
    }

    /// `Z`.
    pub fn integers() -> Ring {
        Arc::new(RingDesc {
            components: vec![vec![]],
        })
    }

    /// `Z^k`.
    pub fn integers_pow(k: usize) -> Ring {
        assert!(k >= 1);
        Arc::new(RingDesc {
            components: vec![vec![]; k],
        })
    }

    /// `Z[names...]`.
    pub fn polynomial(names: &[&str]) -> Ring {
        Arc::new(RingDesc::new(vec![names.iter().map(|s| s.to_string()).collect()]).expect("valid indeterminate names"))
    }

    pub fn components(&self) -> &[Vec<String>] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn indeterminates(&self, component: usize) -> &[String] {
        &self.components[component]
    }

    /// Exactly one component means an integral domain.
    pub fn is_domain(&self) -> bool {
        self.components.len() == 1
    }

    pub fn contains_indeterminate(&self, name: &str) -> bool {
        self.components.iter().any(|c| c.iter().any(|n| n == name))
    }

    /// `R -> R[name]`, adding `name` to every component.
    pub fn adjoin_indeterminate(&self, name: &str) -> Result<RingDesc, RingError> {
        if !is_identifier(name) {
            return Err(RingError::BadDescriptor(format!("bad indeterminate name `{name}`")));
        }
        if self.contains_indeterminate(name) {
            return Err(RingError::NameClash(name.to_string()));
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.push(name.to_string());
                c
            })
            .collect();
        Ok(RingDesc { components })
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "Z".to_string()
                } else {
                    format!("Z[{}]", c.join(","))
                }
            })
            .collect();
        f.write_str(&parts.join(" x "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An element of a [`RingDesc`], one canonical polynomial per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    ring: Ring,
    parts: Vec<Poly>,
}

impl RingElem {
    pub fn zero(ring: &Ring) -> Self {
        RingElem {
            parts: ring.components.iter().map(|c| Poly::zero(c.len())).collect(),
            ring: ring.clone(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        RingElem::from_int(ring, 1)
    }

    pub fn from_int(ring: &Ring, n: impl Into<BigInt>) -> Self {
        let n = n.into();
        RingElem {
            parts: ring
                .components
                .iter()
                .map(|c| Poly::constant(c.len(), n.clone()))
                .collect(),
            ring: ring.clone(),
        }
    }

    /// The idempotent with a 1 in `component` and 0 elsewhere.
    pub fn idempotent(ring: &Ring, component: usize) -> Self {
        let mut e = RingElem::zero(ring);
        e.parts[component] = Poly::one(ring.components[component].len());
        e
    }

    /// The indeterminate `name`; components lacking it get zero.
    pub fn indeterminate(ring: &Ring, name: &str) -> Option<Self> {
        if !ring.contains_indeterminate(name) {
            return None;
        }
        let parts = ring
            .components
            .iter()
            .map(|c| match c.iter().position(|n| n == name) {
                Some(i) => Poly::var(c.len(), i),
                None => Poly::zero(c.len()),
            })
            .collect();
        Some(RingElem {
            ring: ring.clone(),
            parts,
        })
    }

    pub fn from_parts(ring: &Ring, parts: Vec<Poly>) -> Result<Self, RingError> {
        if parts.len() != ring.num_components() || parts.iter().zip(&ring.components).any(|(p, c)| p.nvars() != c.len())
        {
            return Err(RingError::BadLiteral {
                text: format!("{parts:?}"),
                reason: format!("parts do not match ring {ring}"),
            });
        }
        Ok(RingElem {
            ring: ring.clone(),
            parts,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn parts(&self) -> &[Poly] {
        &self.parts
    }

    pub fn part(&self, component: usize) -> &Poly {
        &self.parts[component]
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Poly::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.parts.iter().all(|p| p.as_constant().is_some_and(|c| c.is_one()))
    }

    /// Components where this element is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.parts.len()).filter(|&i| !self.parts[i].is_zero()).collect()
    }

    fn same_ring(&self, other: &RingElem) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::Mismatch(self.ring.to_string(), other.ring.to_string()))
        }
    }

    fn zip_with(&self, other: &RingElem, f: impl Fn(&Poly, &Poly) -> Poly) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn checked_add(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.same_ring(other)?;
        Ok(self.zip_with(other, Poly::add))
    }

    pub fn checked_sub(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.same_ring(other)?;
        Ok(self.zip_with(other, Poly::sub))
    }

    pub fn checked_mul(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.same_ring(other)?;
        Ok(self.zip_with(other, Poly::mul))
    }

    pub fn scale(&self, k: &BigInt) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            parts: self.parts.iter().map(|p| p.scale(k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            parts: self.parts.iter().map(|p| p.pow(e)).collect(),
        }
    }

    /// Nonzero and vanishing in some component.
    ///
    /// Each component is a domain, so `r*s = 0` with `s != 0` is possible
    /// exactly when `r` has a zero component (take `s` supported there).
    pub fn is_zero_divisor(&self) -> bool {
        !self.is_zero() && self.parts.iter().any(Poly::is_zero)
    }

    /// A nonzero `s` with `self * s = 0`, if one exists.
    pub fn annihilator(&self) -> Option<RingElem> {
        if !self.is_zero_divisor() {
            return None;
        }
        let c = self.parts.iter().position(Poly::is_zero)?;
        Some(RingElem::idempotent(&self.ring, c))
    }

    /// Embeds into `R[name]` where the new indeterminate was appended last in
    /// every component.
    pub fn embed_adjoined(&self, target: &Ring) -> RingElem {
        RingElem {
            ring: target.clone(),
            parts: self.parts.iter().map(Poly::with_appended_var).collect(),
        }
    }

    /// Substitutes an integer for `name` in every component and drops it,
    /// landing in the ring `target` (which must be this ring without `name`).
    pub fn specialize(&self, name: &str, value: &BigInt, target: &Ring) -> Result<RingElem, RingError> {
        let mut parts = Vec::with_capacity(self.parts.len());
        for (c, p) in self.parts.iter().enumerate() {
            let names = &self.ring.components[c];
            match names.iter().position(|n| n == name) {
                Some(i) => {
                    let q = p.substitute(i, value);
                    parts.push(q.without_var(i).expect("variable eliminated"));
                }
                None => parts.push(p.clone()),
            }
        }
        RingElem::from_parts(target, parts)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self
            .parts
            .iter()
            .zip(&self.ring.components)
            .map(|(p, names)| p.fmt_with(names))
            .collect();
        let scalar = self.parts[0]
            .as_constant()
            .filter(|c| self.parts.iter().all(|p| p.as_constant().as_ref() == Some(c)));
        if shown.len() == 1 {
            f.write_str(&shown[0])
        } else if let Some(c) = scalar {
            write!(f, "{c}")
        } else {
            write!(f, "({})", shown.join(", "))
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            parts: self.parts.iter().map(Poly::neg).collect(),
        }
    }
}

/// Binary arithmetic selector used by [`ring_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
}

/// `add`, `mul` or `neg` with ring checking. `y` is ignored for `Neg`.
pub fn ring_arith(op: ArithOp, x: &RingElem, y: Option<&RingElem>) -> Result<RingElem, RingError> {
    match op {
        ArithOp::Neg => Ok(-x),
        ArithOp::Add | ArithOp::Mul => {
            let y = y.ok_or_else(|| RingError::BadLiteral {
                text: String::new(),
                reason: "binary operation needs two operands".into(),
            })?;
            if op == ArithOp::Add {
                x.checked_add(y)
            } else {
                x.checked_mul(y)
            }
        }
    }
}

/// A ring homomorphism `R -> Z`: evaluate one component at an integer point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Retraction {
    pub component: usize,
    /// One integer per indeterminate of the chosen component, in order.
    pub point: Vec<BigInt>,
}

impl Retraction {
    pub fn new(ring: &RingDesc, component: usize, point: Vec<BigInt>) -> Result<Self, RingError> {
        let r = Retraction { component, point };
        r.check(ring)?;
        Ok(r)
    }

    fn check(&self, ring: &RingDesc) -> Result<(), RingError> {
        if self.component >= ring.num_components() {
            return Err(RingError::BadRetraction(format!(
                "component {} out of range for {ring}",
                self.component
            )));
        }
        if self.point.len() != ring.indeterminates(self.component).len() {
            return Err(RingError::BadRetraction(format!(
                "point has {} coordinates, component has {} indeterminates",
                self.point.len(),
                ring.indeterminates(self.component).len()
            )));
        }
        Ok(())
    }

    pub fn apply(&self, r: &RingElem) -> Result<BigInt, RingError> {
        self.check(r.ring())?;
        Ok(r.part(self.component).eval(&self.point))
    }

    pub fn describe(&self, ring: &RingDesc) -> String {
        let names = ring.indeterminates(self.component);
        let assignment: Vec<String> = names
            .iter()
            .zip(&self.point)
            .map(|(n, v)| format!("{n}->{v}"))
            .collect();
        if assignment.is_empty() {
            format!("component {}", self.component + 1)
        } else {
            format!("component {} at {}", self.component + 1, assignment.join(", "))
        }
    }
}

/// Evaluates `r` under the retraction `rho`.
pub fn retract(rho: &Retraction, r: &RingElem) -> Result<BigInt, RingError> {
    rho.apply(r)
}

/// Key for the tie-break order `0, 1, -1, 2, -2, ...` on integers.
fn zigzag_key(v: i64) -> u64 {
    if v > 0 {
        (2 * v - 1) as u64
    } else {
        (-2 * v) as u64
    }
}

fn from_zigzag(k: u64) -> i64 {
    if k % 2 == 1 {
        k.div_ceil(2) as i64
    } else {
        -((k / 2) as i64)
    }
}

/// All integer points of dimension `dim` with sup-norm exactly `norm`, in
/// lexicographic order where each coordinate runs `0, 1, -1, 2, -2, ...`.
pub fn points_of_norm(dim: usize, norm: u64) -> Vec<Vec<i64>> {
    if dim == 0 {
        return if norm == 0 { vec![vec![]] } else { vec![] };
    }
    let width = 2 * norm + 1;
    let total = width.pow(dim as u32);
    let mut out = Vec::new();
    let mut digits = vec![0u64; dim];
    for _ in 0..total {
        let pt: Vec<i64> = digits.iter().map(|&k| from_zigzag(k)).collect();
        if pt.iter().any(|v| v.unsigned_abs() == norm) {
            out.push(pt);
        }
        for d in (0..dim).rev() {
            digits[d] += 1;
            if digits[d] < width {
                break;
            }
            digits[d] = 0;
        }
    }
    debug_assert!(out.windows(2).all(|w| {
        let a: Vec<u64> = w[0].iter().map(|&v| zigzag_key(v)).collect();
        let b: Vec<u64> = w[1].iter().map(|&v| zigzag_key(v)).collect();
        a < b
    }));
    out
}

/// A retraction that does not annihilate `r`.
///
/// Picks the first component where `r` is nonzero and scans integer points
/// by increasing sup-norm. This terminates because a nonzero integer
/// polynomial cannot vanish on all of `Z^m`.
pub fn separate(r: &RingElem) -> Result<Retraction, RingError> {
    let component = r
        .parts()
        .iter()
        .position(|p| !p.is_zero())
        .ok_or(RingError::ZeroHasNoRetraction)?;
    let poly = r.part(component);
    let dim = poly.nvars();
    for norm in 0u64.. {
        for pt in points_of_norm(dim, norm) {
            let point: Vec<BigInt> = pt.into_iter().map(BigInt::from).collect();
            if !poly.eval(&point).is_zero() {
                return Ok(Retraction { component, point });
            }
        }
    }
    unreachable!("nonzero polynomial vanishes on all integer points")
}

/// Outcome of [`discriminate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Discrimination {
    /// One retraction keeping every listed element nonzero.
    Retraction(Retraction),
    /// No single retraction works; the pair is nonzero with product zero,
    /// so the ring is not an integral domain.
    DomainFailure(RingElem, RingElem),
}

/// Finds one retraction keeping all of `rs` nonzero, via the product trick.
pub fn discriminate(rs: &[RingElem]) -> Result<Discrimination, RingError> {
    let ring = match rs.first() {
        Some(r) => r.ring().clone(),
        None => {
            return Err(RingError::BadLiteral {
                text: "[]".into(),
                reason: "empty list has no ring".into(),
            })
        }
    };
    let mut product = RingElem::one(&ring);
    for (index, r) in rs.iter().enumerate() {
        if r.is_zero() {
            return Err(RingError::ZeroInList { index });
        }
        let next = product.checked_mul(r)?;
        if next.is_zero() {
            // `product` and `r` are both nonzero: a disjoint-support pair.
            return Ok(Discrimination::DomainFailure(product, r.clone()));
        }
        product = next;
    }
    // The product is nonzero exactly in the components where every r is.
    Ok(Discrimination::Retraction(separate(&product)?))
}

pub fn is_zero_divisor(r: &RingElem) -> bool {
    r.is_zero_divisor()
}

pub fn is_domain(ring: &RingDesc) -> bool {
    ring.is_domain()
}

pub fn adjoin_indeterminate(ring: &RingDesc, name: &str) -> Result<RingDesc, RingError> {
    ring.adjoin_indeterminate(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zxz() -> Ring {
        RingDesc::integers_pow(2)
    }

    fn el(ring: &Ring, s: &str) -> RingElem {
        parse_element(ring, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let r = zxz();
        let sum = ring_arith(ArithOp::Add, &el(&r, "(1,0)"), Some(&el(&r, "(0,1)"))).unwrap();
        assert_eq!(sum, el(&r, "(1,1)"));
        let e1 = RingElem::idempotent(&r, 0);
        let e2 = RingElem::idempotent(&r, 1);
        assert!(ring_arith(ArithOp::Mul, &e1, Some(&e2)).unwrap().is_zero());

        let zt = RingDesc::polynomial(&["theta"]);
        let p = ring_arith(ArithOp::Mul, &el(&zt, "theta+1"), Some(&el(&zt, "theta-1"))).unwrap();
        assert_eq!(p, el(&zt, "theta^2-1"));
        assert_eq!(ring_arith(ArithOp::Neg, &p, None).unwrap(), el(&zt, "1-theta^2"));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = RingElem::one(&RingDesc::integers());
        let b = RingElem::one(&zxz());
        assert!(matches!(a.checked_add(&b), Err(RingError::Mismatch(..))));
    }

    #[test]
    fn zero_divisor_examples() {
        let r = zxz();
        assert!(RingElem::idempotent(&r, 0).is_zero_divisor());
        assert!(!RingElem::zero(&r).is_zero_divisor());
        let zt = RingDesc::polynomial(&["theta"]);
        assert!(!el(&zt, "theta").is_zero_divisor());
    }

    #[test]
    fn retract_examples() {
        let r = zxz();
        let proj1 = Retraction::new(&r, 0, vec![]).unwrap();
        assert_eq!(retract(&proj1, &el(&r, "(3,5)")).unwrap(), 3.into());
        let zt = RingDesc::polynomial(&["theta"]);
        let at2 = Retraction::new(&zt, 0, vec![2.into()]).unwrap();
        assert_eq!(retract(&at2, &el(&zt, "theta^2+1")).unwrap(), 5.into());
        assert_eq!(retract(&at2, &RingElem::one(&zt)).unwrap(), 1.into());
        assert!(Retraction::new(&zt, 1, vec![]).is_err());
        assert!(Retraction::new(&zt, 0, vec![]).is_err());
    }

    #[test]
    fn separate_examples() {
        let r = zxz();
        assert_eq!(
            separate(&el(&r, "(0,7)")).unwrap(),
            Retraction {
                component: 1,
                point: vec![]
            }
        );
        let zt = RingDesc::polynomial(&["theta"]);
        assert_eq!(separate(&el(&zt, "theta")).unwrap().point, vec![BigInt::from(1)]);
        let one = separate(&RingElem::one(&zt)).unwrap();
        assert_eq!(one.point, vec![BigInt::from(0)]);
        assert_eq!(separate(&RingElem::zero(&r)), Err(RingError::ZeroHasNoRetraction));
    }

    #[test]
    fn discriminate_examples() {
        let zt = RingDesc::polynomial(&["theta"]);
        let list = [el(&zt, "theta"), el(&zt, "theta-1"), el(&zt, "2")];
        let Discrimination::Retraction(rho) = discriminate(&list).unwrap() else {
            panic!("domain must discriminate");
        };
        for r in &list {
            assert!(!rho.apply(r).unwrap().is_zero());
        }
        // 2t^2 - 2t vanishes at 0 and 1; -1 precedes 2 in the scan order.
        assert_eq!(rho.point, vec![BigInt::from(-1)]);

        let r = zxz();
        let e1 = RingElem::idempotent(&r, 0);
        let e2 = RingElem::idempotent(&r, 1);
        match discriminate(&[e1.clone(), e2.clone()]).unwrap() {
            Discrimination::DomainFailure(a, b) => {
                assert_eq!((a, b.clone()), (e1.clone(), e2.clone()));
                assert!((&e1 * &b).is_zero());
            }
            other => panic!("expected failure, got {other:?}"),
        }

        let z = RingDesc::integers();
        assert_eq!(
            discriminate(&[RingElem::one(&z)]).unwrap(),
            Discrimination::Retraction(Retraction {
                component: 0,
                point: vec![]
            })
        );
        assert_eq!(
            discriminate(&[RingElem::one(&z), RingElem::zero(&z)]),
            Err(RingError::ZeroInList { index: 1 })
        );
    }

    #[test]
    fn domain_and_adjunction() {
        assert!(is_domain(&RingDesc::integers()));
        assert!(!is_domain(&zxz()));
        let zt = adjoin_indeterminate(&RingDesc::integers(), "theta").unwrap();
        assert!(is_domain(&zt));
        assert_eq!(zt.to_string(), "Z[theta]");
        let zt2 = adjoin_indeterminate(&zt, "theta2").unwrap();
        assert_eq!(zt2.to_string(), "Z[theta,theta2]");
        let prod = adjoin_indeterminate(&zxz(), "theta").unwrap();
        assert_eq!(prod.num_components(), 2);
        assert_eq!(prod.to_string(), "Z[theta] x Z[theta]");
        assert_eq!(
            adjoin_indeterminate(&zt, "theta"),
            Err(RingError::NameClash("theta".into()))
        );
    }

    #[test]
    fn embedding_keeps_values() {
        let zt = RingDesc::polynomial(&["theta"]);
        let bigger: Ring = Arc::new(zt.adjoin_indeterminate("s").unwrap());
        let p = el(&zt, "3*theta^2 - 1");
        let q = p.embed_adjoined(&bigger);
        assert_eq!(q, el(&bigger, "3*theta^2 - 1"));
        assert_eq!(q.specialize("s", &5.into(), &zt).unwrap(), p);
    }

    #[test]
    fn zigzag_point_order() {
        assert_eq!(points_of_norm(1, 0), vec![vec![0]]);
        assert_eq!(points_of_norm(1, 1), vec![vec![1], vec![-1]]);
        assert_eq!(points_of_norm(2, 1).len(), 8);
        assert_eq!(points_of_norm(2, 1)[0], vec![0, 1]);
        assert_eq!(points_of_norm(0, 0), vec![Vec::<i64>::new()]);
    }
}
