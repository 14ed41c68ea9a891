//! Subgroups `G <= UT3(R)` containing `a1`, `a2`, given by finitely many
//! generators, and exact decision procedures built on their entry lattices.
//!
//! Multiplication adds the `(e12, e23)` entry pairs, so the pairs of all
//! elements of `G` form the additive group generated by the generators'
//! pairs. Everything here is computed on that lattice, coordinatised by the
//! monomials occurring in the generator entries.

mod checks;
mod config;
mod construct;
pub mod fixtures;
mod verdict;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::formula::GroupEnv;
use crate::rings::{is_identifier, Monomial, Poly, Ring, RingElem, RingError};
use crate::ut3::{entry_det, UT3Elem, UT3Group};
use crate::zlattice::{hnf_with_transform, IntVec, Lattice, LatticeError};

pub use checks::{
    appropriateness_check, c_rank, lame_check, lame_check_def1, nzct_check, sigma_check, solve_s, solve_t, tau_check,
    Appropriateness, SystemSolution,
};
pub use config::{parse_config, print_config};
pub use construct::{adjoin_center, adjoin_y, big_powers_retraction, extend_centralizer, BigPowers};
pub use verdict::{Method, Status, Verdict, VerdictRecord, WitnessRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReprError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("generator name `{0}` used twice")]
    DuplicateName(String),
    #[error("bad generator name `{0}`")]
    BadName(String),
    #[error("generator `{0}` must equal its standard value")]
    WrongStandard(String),
    #[error("element {0} is not central")]
    NotCentral(String),
    #[error("name `{0}` already in use")]
    NameClash(String),
    #[error("`{0}` is not an indeterminate of the ring")]
    NotAnIndeterminate(String),
    #[error("target {0} is the identity")]
    IdentityTarget(usize),
    #[error("degree bound must be at least 1")]
    BadDegreeBound,
}

/// The coordinates `(component, monomial)` of a finite part of `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    coords: Vec<(usize, Monomial)>,
}

impl Frame {
    pub fn spanning<'a>(elems: impl IntoIterator<Item = &'a RingElem>) -> Frame {
        let mut set = BTreeSet::new();
        for r in elems {
            for (c, p) in r.parts().iter().enumerate() {
                for (m, _) in p.terms() {
                    set.insert((c, m.clone()));
                }
            }
        }
        Frame {
            coords: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[(usize, Monomial)] {
        &self.coords
    }

    /// Coordinates of `r`, or `None` if it uses a monomial outside the frame.
    pub fn vector(&self, r: &RingElem) -> Option<IntVec> {
        let mut v = vec![BigInt::zero(); self.coords.len()];
        for (c, p) in r.parts().iter().enumerate() {
            for (m, k) in p.terms() {
                let i = self.coords.binary_search(&(c, m.clone())).ok()?;
                v[i] = k.clone();
            }
        }
        Some(v)
    }

    pub fn element(&self, ring: &Ring, v: &[BigInt]) -> RingElem {
        let parts = ring
            .components()
            .iter()
            .enumerate()
            .map(|(c, names)| {
                Poly::from_terms(
                    names.len(),
                    self.coords
                        .iter()
                        .zip(v)
                        .filter(|((cc, _), _)| *cc == c)
                        .map(|((_, m), k)| (m.clone(), k.clone())),
                )
            })
            .collect();
        RingElem::from_parts(ring, parts).expect("frame matches ring")
    }

    /// Frame indices belonging to one component.
    pub fn component_columns(&self, c: usize) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.coords[i].0 == c).collect()
    }
}

/// Lattices attached to a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryLattices {
    /// Entry pairs `(g12, g23)`, the `g12` block first; dimension `2 * frame.len()`.
    pub a: Lattice,
    /// `g23` entries of elements with `g12 = 0`.
    pub a1: Lattice,
    /// `g12` entries of elements with `g23 = 0`.
    pub a2: Lattice,
    /// `(1,3)` entries of commutators of generators, over `det_frame`.
    pub d: Lattice,
    pub det_frame: Frame,
    /// Row `k`: generator exponents producing basis row `k` of `a`.
    transform: Vec<IntVec>,
}

/// `G = <a1, a2, g_3, ...> <= UT3(R)`.
#[derive(Clone, Debug)]
pub struct Representation {
    ring: Ring,
    generators: Vec<(String, UT3Elem)>,
    full_center: bool,
    frame: Frame,
    lattices: OnceLock<EntryLattices>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.generators == other.generators && self.full_center == other.full_center
    }
}

impl Eq for Representation {}

impl Representation {
    /// `a1`, `a2` are added in front when absent; if given they must carry
    /// their standard values.
    pub fn new(ring: &Ring, generators: Vec<(String, UT3Elem)>, full_center: bool) -> Result<Self, ReprError> {
        let mut gens = vec![
            ("a1".to_string(), UT3Elem::a1(ring)),
            ("a2".to_string(), UT3Elem::a2(ring)),
        ];
        for (name, g) in generators {
            if !is_identifier(&name) {
                return Err(ReprError::BadName(name));
            }
            if g.ring() != ring {
                return Err(RingError::Mismatch(ring.to_string(), g.ring().to_string()).into());
            }
            if name == "a1" || name == "a2" {
                let std = if name == "a1" {
                    UT3Elem::a1(ring)
                } else {
                    UT3Elem::a2(ring)
                };
                if g != std {
                    return Err(ReprError::WrongStandard(name));
                }
                continue;
            }
            if gens.iter().any(|(n, _)| *n == name) {
                return Err(ReprError::DuplicateName(name));
            }
            gens.push((name, g));
        }
        let frame = Frame::spanning(gens.iter().flat_map(|(_, g)| [&g.u12, &g.u13, &g.u23]));
        Ok(Representation {
            ring: ring.clone(),
            generators: gens,
            full_center,
            frame,
            lattices: OnceLock::new(),
        })
    }

    /// `H = UT3(Z)` generated by `a1, a2`.
    pub fn heisenberg() -> Self {
        Representation::new(&crate::rings::RingDesc::integers(), vec![], false).expect("valid")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[(String, UT3Elem)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&UT3Elem> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn full_center(&self) -> bool {
        self.full_center
    }

    pub fn monomial_frame(&self) -> &Frame {
        &self.frame
    }

    /// A name not yet used by a generator: `base`, else `base2`, `base3`, ...
    pub fn fresh_name(&self, base: &str) -> String {
        if self.generator(base).is_none() {
            return base.to_string();
        }
        (2..)
            .map(|k| format!("{base}{k}"))
            .find(|n| self.generator(n).is_none())
            .expect("unbounded")
    }

    pub(crate) fn with_generator(&self, name: String, g: UT3Elem) -> Result<Self, ReprError> {
        let mut gens = self.generators.clone();
        gens.push((name, g));
        Representation::new(&self.ring, gens, self.full_center)
    }

    /// The entry pair of `g` in frame coordinates.
    pub fn pair_vector(&self, g: &UT3Elem) -> Option<IntVec> {
        let mut v = self.frame.vector(&g.u12)?;
        v.extend(self.frame.vector(&g.u23)?);
        Some(v)
    }

    pub fn pair_elements(&self, v: &[BigInt]) -> (RingElem, RingElem) {
        let d = self.frame.len();
        (
            self.frame.element(&self.ring, &v[..d]),
            self.frame.element(&self.ring, &v[d..]),
        )
    }

    pub fn lattices(&self) -> &EntryLattices {
        self.lattices.get_or_init(|| self.compute_lattices())
    }

    fn compute_lattices(&self) -> EntryLattices {
        let d = self.frame.len();
        let pairs: Vec<IntVec> = self
            .generators
            .iter()
            .map(|(_, g)| self.pair_vector(g).expect("generators lie in the frame"))
            .collect();
        let dec = hnf_with_transform(2 * d, &pairs).expect("consistent dimensions");
        let a = dec.lattice;
        let g12_block: Vec<usize> = (0..d).collect();
        let g23_block: Vec<usize> = (d..2 * d).collect();
        let a1 = a.intersect_coordinate_zero(&g12_block).expect("in range").project(d, d);
        let a2 = a.intersect_coordinate_zero(&g23_block).expect("in range").project(0, d);

        let mut dets = Vec::new();
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                dets.push(entry_det(&self.generators[i].1, &self.generators[j].1));
            }
        }
        let det_frame = Frame::spanning(&dets);
        let det_vectors: Vec<IntVec> = dets.iter().map(|r| det_frame.vector(r).expect("spanned")).collect();
        let d_lattice = crate::zlattice::hnf(det_frame.len(), &det_vectors).expect("consistent dimensions");
        EntryLattices {
            a,
            a1,
            a2,
            d: d_lattice,
            det_frame,
            transform: dec.transform,
        }
    }

    /// Generator exponents `k` with `prod g_i^k_i` having entry pair `v`,
    /// or `None` when `v` is not in the pair lattice.
    pub fn exponents_for(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let lat = self.lattices();
        let coords = lat.a.coordinates(v).ok()??;
        let mut k = vec![BigInt::zero(); self.generators.len()];
        for (c, row) in coords.iter().zip(&lat.transform) {
            for (ki, ri) in k.iter_mut().zip(row) {
                *ki += c * ri;
            }
        }
        Some(k)
    }

    /// `prod_i g_i^k_i` in generator order.
    pub fn word(&self, exponents: &[BigInt]) -> UT3Elem {
        let mut out = UT3Elem::identity(&self.ring);
        for ((_, g), k) in self.generators.iter().zip(exponents) {
            if !k.is_zero() {
                out = out.mul(&g.power(k)).expect("same ring");
            }
        }
        out
    }

    /// An element of `G` with entry pair `v`, if there is one.
    pub fn element_with_pair(&self, v: &[BigInt]) -> Option<UT3Elem> {
        let k = self.exponents_for(v)?;
        let g = self.word(&k);
        debug_assert_eq!(self.pair_vector(&g).as_deref(), Some(v));
        Some(g)
    }

    /// Whether `g` commutes with every generator (hence lies in `Z(G)`).
    pub fn is_central_in_g(&self, g: &UT3Elem) -> bool {
        self.generators.iter().all(|(_, h)| entry_det(g, h).is_zero())
    }

    /// Search environment: the generators, plus the frame's monomials as
    /// central generators in full-center mode.
    pub fn env(&self) -> GroupEnv<UT3Group> {
        let mut gens: Vec<UT3Elem> = self.generators.iter().map(|(_, g)| g.clone()).collect();
        if self.full_center {
            for i in 0..self.frame.len() {
                let mut v = vec![BigInt::zero(); self.frame.len()];
                v[i] = BigInt::one();
                let z = UT3Elem::central(self.frame.element(&self.ring, &v));
                if !gens.contains(&z) {
                    gens.push(z);
                }
            }
        }
        GroupEnv::new(
            UT3Group {
                ring: self.ring.clone(),
            },
            UT3Elem::a1(&self.ring),
            UT3Elem::a2(&self.ring),
        )
        .with_generators(gens)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_config(self))
    }
}
