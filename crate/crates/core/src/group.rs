//! A minimal interface over the concrete groups the evaluator runs in.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub trait Group {
    type Elem: Clone + Eq + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// `a^-1 b^-1 a b`.
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    fn pow(&self, a: &Self::Elem, n: &BigInt) -> Self::Elem {
        let base = if n.is_negative() { self.inv(a) } else { a.clone() };
        let mut e = n.abs();
        let mut acc = self.identity();
        let mut sq = base;
        while !e.is_zero() {
            if e.bit(0) {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if !e.is_zero() {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    fn render(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }
}
