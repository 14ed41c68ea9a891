//! Sparse multivariate integer polynomials in a fixed list of indeterminates.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exponent vector; its length equals the number of indeterminates.
pub type Monomial = Vec<u32>;

/// A polynomial with arbitrary-precision integer coefficients.
///
/// Terms live in a `BTreeMap` keyed by exponent vector, so iteration order is
/// lexicographic on exponents and zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, 1)
    }

    /// The indeterminate with index `var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "indeterminate index out of range");
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(exps, BigInt::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Returns the constant if this polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Degree in a single indeterminate.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluates at an integer point (one value per indeterminate).
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars, "evaluation point arity mismatch");
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += term;
        }
        total
    }

    /// Substitutes `value` for indeterminate `var`, keeping the variable slot
    /// (its exponent becomes zero everywhere).
    pub fn substitute(&self, var: usize, value: &BigInt) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = std::mem::replace(&mut m2[var], 0);
            out.add_term(m2, c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    /// Re-embeds into a ring with one more indeterminate appended last.
    pub fn with_appended_var(&self) -> Poly {
        Poly {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2.push(0);
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    /// Drops the indeterminate `var`, which must not occur in any term.
    pub fn without_var(&self, var: usize) -> Option<Poly> {
        let mut out = Poly::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            if m[var] != 0 {
                return None;
            }
            let mut m2 = m.clone();
            m2.remove(var);
            out.add_term(m2, c.clone());
        }
        Some(out)
    }

    /// Human-readable form with the given indeterminate names, highest terms first.
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (name, &e) in names.iter().zip(m) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                let _ = write!(s, "{abs}");
            } else {
                if !abs.is_one() {
                    let _ = write!(s, "{abs}*");
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.fmt_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> Poly {
        Poly::var(1, 0)
    }

    #[test]
    fn schoolbook_product() {
        let one = Poly::one(1);
        let p = theta().add(&one).mul(&theta().sub(&one));
        let expected = Poly::from_terms(1, [(vec![2], 1.into()), (vec![0], (-1).into())]);
        assert_eq!(p, expected);
        assert_eq!(p.fmt_with(&["theta".into()]), "theta^2 - 1");
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = theta().sub(&theta());
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn evaluate_and_substitute() {
        let p = theta().pow(2).add(&Poly::one(1));
        assert_eq!(p.eval(&[2.into()]), 5.into());
        assert_eq!(p.substitute(0, &3.into()), Poly::constant(1, 10));
    }

    #[test]
    fn display_multivariate() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.mul(&y).scale(&2.into()).sub(&y.pow(3)).sub(&Poly::constant(2, 4));
        assert_eq!(p.fmt_with(&["s".into(), "t".into()]), "2*s*t - t^3 - 4");
    }
}
