//! Upper unitriangular 3x3 matrices over a ring, stored by their strict upper
//! entries `(u12, u13, u23)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::group::Group;
use crate::rings::{parse_element, Ring, RingElem, RingError};

/// `I + u12*E12 + u13*E13 + u23*E23`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UT3Elem {
    pub u12: RingElem,
    pub u13: RingElem,
    pub u23: RingElem,
}

impl UT3Elem {
    pub fn new(u12: RingElem, u13: RingElem, u23: RingElem) -> Result<Self, RingError> {
        let ring = u12.ring();
        for other in [&u13, &u23] {
            if other.ring() != ring {
                return Err(RingError::Mismatch(ring.to_string(), other.ring().to_string()));
            }
        }
        Ok(UT3Elem { u12, u13, u23 })
    }

    pub fn from_ints(ring: &Ring, u12: i64, u13: i64, u23: i64) -> Self {
        UT3Elem {
            u12: RingElem::from_int(ring, u12),
            u13: RingElem::from_int(ring, u13),
            u23: RingElem::from_int(ring, u23),
        }
    }

    pub fn identity(ring: &Ring) -> Self {
        UT3Elem::from_ints(ring, 0, 0, 0)
    }

    /// `a1 = I + E23`.
    pub fn a1(ring: &Ring) -> Self {
        UT3Elem::from_ints(ring, 0, 0, 1)
    }

    /// `a2 = I + E12`.
    pub fn a2(ring: &Ring) -> Self {
        UT3Elem::from_ints(ring, 1, 0, 0)
    }

    /// `I + r*E13`.
    pub fn central(r: RingElem) -> Self {
        let zero = RingElem::zero(r.ring());
        UT3Elem {
            u12: zero.clone(),
            u13: r,
            u23: zero,
        }
    }

    pub fn ring(&self) -> &Ring {
        self.u12.ring()
    }

    pub fn is_identity(&self) -> bool {
        self.u12.is_zero() && self.u13.is_zero() && self.u23.is_zero()
    }

    fn check(&self, other: &UT3Elem) -> Result<(), RingError> {
        if self.ring() != other.ring() {
            return Err(RingError::Mismatch(self.ring().to_string(), other.ring().to_string()));
        }
        Ok(())
    }

    pub fn mul(&self, h: &UT3Elem) -> Result<UT3Elem, RingError> {
        self.check(h)?;
        Ok(self.mul_unchecked(h))
    }

    fn mul_unchecked(&self, h: &UT3Elem) -> UT3Elem {
        UT3Elem {
            u12: &self.u12 + &h.u12,
            u13: &(&self.u13 + &h.u13) + &(&self.u12 * &h.u23),
            u23: &self.u23 + &h.u23,
        }
    }

    pub fn inv(&self) -> UT3Elem {
        UT3Elem {
            u12: -&self.u12,
            u13: &(&self.u12 * &self.u23) - &self.u13,
            u23: -&self.u23,
        }
    }

    /// `g^-1 h^-1 g h = I + (g12*h23 - h12*g23)*E13`.
    pub fn commutator(&self, h: &UT3Elem) -> Result<UT3Elem, RingError> {
        self.check(h)?;
        Ok(UT3Elem::central(entry_det(self, h)))
    }

    /// `(n*g12, n*g13 + C(n,2)*g12*g23, n*g23)` for any integer `n`.
    pub fn power(&self, n: &BigInt) -> UT3Elem {
        let choose2: BigInt = n * (n - BigInt::one()) / 2;
        UT3Elem {
            u12: self.u12.scale(n),
            u13: &self.u13.scale(n) + &(&self.u12 * &self.u23).scale(&choose2),
            u23: self.u23.scale(n),
        }
    }

    pub fn is_central(&self) -> bool {
        self.u12.is_zero() && self.u23.is_zero()
    }

    /// Membership in `C(a1)` (`u12 = 0`) or `C(a2)` (`u23 = 0`).
    pub fn in_centralizer_a(&self, which: Generator) -> bool {
        match which {
            Generator::A1 => self.u12.is_zero(),
            Generator::A2 => self.u23.is_zero(),
        }
    }

    /// Applies a ring map entrywise.
    pub fn map_entries(&self, f: impl Fn(&RingElem) -> RingElem) -> UT3Elem {
        UT3Elem {
            u12: f(&self.u12),
            u13: f(&self.u13),
            u23: f(&self.u23),
        }
    }

    /// Parses `{e12: <expr>, e13: <expr>, e23: <expr>}`; omitted entries are 0.
    pub fn parse(ring: &Ring, text: &str) -> Result<UT3Elem, RingError> {
        let bad = |reason: String| RingError::BadLiteral {
            text: text.to_string(),
            reason,
        };
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| bad("matrix literal must be wrapped in braces".into()))?;
        let mut entries: [Option<RingElem>; 3] = [None, None, None];
        for field in split_top_level(inner, ',') {
            if field.trim().is_empty() {
                continue;
            }
            let (key, value) = field
                .split_once(':')
                .ok_or_else(|| bad(format!("expected `key: value`, got `{}`", field.trim())))?;
            let slot = match key.trim() {
                "e12" => 0,
                "e13" => 1,
                "e23" => 2,
                other => return Err(bad(format!("unknown entry `{other}`"))),
            };
            if entries[slot].is_some() {
                return Err(bad(format!("entry `{}` given twice", key.trim())));
            }
            entries[slot] = Some(parse_element(ring, value)?);
        }
        let [u12, u13, u23] = entries.map(|e| e.unwrap_or_else(|| RingElem::zero(ring)));
        Ok(UT3Elem { u12, u13, u23 })
    }
}

/// `g12*h23 - h12*g23`, the (1,3) entry of `[g, h]`.
pub fn entry_det(g: &UT3Elem, h: &UT3Elem) -> RingElem {
    &(&g.u12 * &h.u23) - &(&h.u12 * &g.u23)
}

/// Splits at `sep` outside of parentheses and braces.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

impl fmt::Display for UT3Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{e12: {}, e13: {}, e23: {}}}", self.u12, self.u13, self.u23)
    }
}

/// The two distinguished generators of `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Generator {
    #[serde(rename = "a1")]
    A1,
    #[serde(rename = "a2")]
    A2,
}

impl Generator {
    pub fn element(self, ring: &Ring) -> UT3Elem {
        match self {
            Generator::A1 => UT3Elem::a1(ring),
            Generator::A2 => UT3Elem::a2(ring),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::A1 => "a1",
            Generator::A2 => "a2",
        })
    }
}

impl std::str::FromStr for Generator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "a1" | "1" => Ok(Generator::A1),
            "a2" | "2" => Ok(Generator::A2),
            other => Err(format!("expected a1 or a2, got `{other}`")),
        }
    }
}

/// `UT3(R)` as a [`Group`].
#[derive(Clone, Debug)]
pub struct UT3Group {
    pub ring: Ring,
}

impl Group for UT3Group {
    type Elem = UT3Elem;

    fn identity(&self) -> UT3Elem {
        UT3Elem::identity(&self.ring)
    }

    fn mul(&self, a: &UT3Elem, b: &UT3Elem) -> UT3Elem {
        a.mul_unchecked(b)
    }

    fn inv(&self, a: &UT3Elem) -> UT3Elem {
        a.inv()
    }

    fn is_identity(&self, a: &UT3Elem) -> bool {
        a.is_identity()
    }

    fn commutator(&self, a: &UT3Elem, b: &UT3Elem) -> UT3Elem {
        UT3Elem::central(entry_det(a, b))
    }

    fn pow(&self, a: &UT3Elem, n: &BigInt) -> UT3Elem {
        a.power(n)
    }

    fn render(&self, a: &UT3Elem) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{parse_ring, RingDesc};

    /// Full 3x3 integer matrices, the independent oracle for the closed forms.
    fn matrix(g: &UT3Elem) -> [[i64; 3]; 3] {
        let v = |r: &RingElem| -> i64 {
            use num_traits::ToPrimitive;
            r.part(0).as_constant().unwrap().to_i64().unwrap()
        };
        [[1, v(&g.u12), v(&g.u13)], [0, 1, v(&g.u23)], [0, 0, 1]]
    }

    fn matmul(a: [[i64; 3]; 3], b: [[i64; 3]; 3]) -> [[i64; 3]; 3] {
        let mut c = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    }

    fn z() -> Ring {
        RingDesc::integers()
    }

    #[test]
    fn products_match_matrix_oracle() {
        let r = z();
        let a1 = UT3Elem::a1(&r);
        let a2 = UT3Elem::a2(&r);
        let a1a2 = a1.mul(&a2).unwrap();
        let a2a1 = a2.mul(&a1).unwrap();
        assert_eq!(a1a2, UT3Elem::from_ints(&r, 1, 0, 1));
        assert_eq!(a2a1, UT3Elem::from_ints(&r, 1, 1, 1));
        assert_eq!(matrix(&a1a2), matmul(matrix(&a1), matrix(&a2)));
        assert_eq!(matrix(&a2a1), matmul(matrix(&a2), matrix(&a1)));
        assert_eq!(a1a2.mul(&UT3Elem::identity(&r)).unwrap(), a1a2);
    }

    #[test]
    fn inverse_examples() {
        let r = z();
        assert_eq!(UT3Elem::identity(&r).inv(), UT3Elem::identity(&r));
        assert_eq!(UT3Elem::a1(&r).inv(), UT3Elem::from_ints(&r, 0, 0, -1));
        let g = UT3Elem::from_ints(&r, 1, 0, 1);
        assert_eq!(g.inv(), UT3Elem::from_ints(&r, -1, 1, -1));
        assert!(g.mul(&g.inv()).unwrap().is_identity());
    }

    #[test]
    fn commutator_examples() {
        let r = z();
        let c = UT3Elem::a2(&r).commutator(&UT3Elem::a1(&r)).unwrap();
        assert_eq!(c, UT3Elem::from_ints(&r, 0, 1, 0));
        let zt = RingDesc::polynomial(&["r"]);
        let rr = RingElem::indeterminate(&zt, "r").unwrap();
        let y = UT3Elem::new(rr.clone(), RingElem::zero(&zt), RingElem::zero(&zt)).unwrap();
        assert_eq!(y.commutator(&UT3Elem::a1(&zt)).unwrap(), UT3Elem::central(rr));
        let g = UT3Elem::from_ints(&r, 3, -2, 5);
        assert!(g.commutator(&g).unwrap().is_identity());
    }

    #[test]
    fn power_examples() {
        let r = z();
        let g = UT3Elem::from_ints(&r, 1, 0, 1);
        assert!(g.power(&0.into()).is_identity());
        assert_eq!(g.power(&2.into()), UT3Elem::from_ints(&r, 2, 1, 2));
        assert_eq!(g.power(&(-1).into()), g.inv());
    }

    #[test]
    fn centrality_examples() {
        let r = z();
        assert!(UT3Elem::from_ints(&r, 0, 1, 0).is_central());
        assert!(!UT3Elem::a1(&r).is_central());
        assert!(UT3Elem::identity(&r).is_central());

        let zxz = RingDesc::integers_pow(2);
        let b = UT3Elem::parse(&zxz, "{e23: (1,0)}").unwrap();
        assert!(b.in_centralizer_a(Generator::A1));
        assert!(!UT3Elem::a2(&zxz).in_centralizer_a(Generator::A1));
        let c = UT3Elem::from_ints(&zxz, 0, 7, 0);
        assert!(c.in_centralizer_a(Generator::A1) && c.in_centralizer_a(Generator::A2));
    }

    #[test]
    fn literal_round_trip_and_errors() {
        let ring = parse_ring("Z[theta] x Z").unwrap();
        let g = UT3Elem::parse(&ring, "{e12: (theta, 1), e13: 0, e23: (theta^2 - 1, -3)}").unwrap();
        assert_eq!(UT3Elem::parse(&ring, &g.to_string()).unwrap(), g);
        assert!(UT3Elem::parse(&ring, "{e14: 1}").is_err());
        assert!(UT3Elem::parse(&ring, "e12: 1").is_err());
        assert!(UT3Elem::parse(&ring, "{e12: 1, e12: 2}").is_err());
        let other = UT3Elem::a1(&z());
        assert!(g.mul(&other).is_err());
        assert!(g.commutator(&other).is_err());
    }
}
