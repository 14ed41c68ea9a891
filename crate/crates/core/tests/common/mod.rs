#![allow(dead_code)]

use heislab::reprs::Representation;
use heislab::rings::{Poly, Ring, RingDesc, RingElem};
use heislab::UT3Elem;
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn corpus_rings() -> Vec<Ring> {
    vec![
        RingDesc::integers(),
        RingDesc::integers_pow(2),
        RingDesc::integers_pow(3),
        RingDesc::polynomial(&["theta"]),
    ]
}

/// Coefficients in `[-bound, bound]`; polynomial components get degree <= 2.
pub fn random_elem(rng: &mut ChaCha8Rng, ring: &Ring, bound: i64) -> RingElem {
    let parts = ring
        .components()
        .iter()
        .map(|names| {
            let n = names.len();
            let mut terms = vec![(vec![0u32; n], BigInt::from(rng.gen_range(-bound..=bound)))];
            for v in 0..n {
                for d in 1..=2u32 {
                    if rng.gen_bool(0.4) {
                        let mut m = vec![0u32; n];
                        m[v] = d;
                        terms.push((m, BigInt::from(rng.gen_range(-bound..=bound))));
                    }
                }
            }
            Poly::from_terms(n, terms)
        })
        .collect();
    RingElem::from_parts(ring, parts).unwrap()
}

/// Like `random_elem`, but each component is zero with probability 1/3.
pub fn random_sparse_elem(rng: &mut ChaCha8Rng, ring: &Ring, bound: i64) -> RingElem {
    let full = random_elem(rng, ring, bound);
    let parts = full
        .parts()
        .iter()
        .map(|p| {
            if rng.gen_range(0..3) == 0 {
                Poly::zero(p.nvars())
            } else {
                p.clone()
            }
        })
        .collect();
    RingElem::from_parts(ring, parts).unwrap()
}

/// Up to three extra generators, often inside one of the two centralizers.
pub fn random_rep(rng: &mut ChaCha8Rng, ring: &Ring, bound: i64) -> Representation {
    let extra = rng.gen_range(0..=3);
    let zero = RingElem::zero(ring);
    let gens = (0..extra)
        .map(|k| {
            let e13 = random_elem(rng, ring, bound);
            let (e12, e23) = match rng.gen_range(0..3) {
                0 => (zero.clone(), random_sparse_elem(rng, ring, bound)),
                1 => (random_sparse_elem(rng, ring, bound), zero.clone()),
                _ => (
                    random_sparse_elem(rng, ring, bound),
                    random_sparse_elem(rng, ring, bound),
                ),
            };
            (format!("g{}", k + 3), UT3Elem::new(e12, e13, e23).unwrap())
        })
        .collect();
    Representation::new(ring, gens, false).unwrap()
}

pub fn random_corpus(seed: u64, count: usize) -> Vec<Representation> {
    let mut r = rng(seed);
    let rings = corpus_rings();
    (0..count)
        .map(|i| random_rep(&mut r, &rings[i % rings.len()], 5))
        .collect()
}

/// `UT3(R)` for `R = Z^k`: both slices are all of `R`.
pub fn full_ut3(ring: &Ring) -> Representation {
    let mut gens = Vec::new();
    for c in 0..ring.num_components() {
        let e = RingElem::idempotent(ring, c);
        let zero = RingElem::zero(ring);
        gens.push((
            format!("y{}", c + 1),
            UT3Elem::new(e.clone(), zero.clone(), zero.clone()).unwrap(),
        ));
        gens.push((format!("x{}", c + 1), UT3Elem::new(zero.clone(), zero, e).unwrap()));
    }
    Representation::new(ring, gens, false).unwrap()
}

/// 3x3 integer matrix product, independent of the entry formulas.
pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()))
}

pub type Mat = [[BigInt; 3]; 3];

/// Component `c` of `g` as an integer matrix; the component must have no
/// indeterminates.
pub fn int_matrix(g: &UT3Elem, c: usize) -> Mat {
    let int = |r: &RingElem| r.part(c).as_constant().expect("integer entry");
    let (o, z) = (BigInt::from(1), BigInt::from(0));
    [
        [o.clone(), int(&g.u12), int(&g.u13)],
        [z.clone(), o.clone(), int(&g.u23)],
        [z.clone(), z, o],
    ]
}

pub fn identity_matrix() -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| BigInt::from((i == j) as i32)))
}

/// `(I + N)^-1 = I - N + N^2` for strictly upper triangular `N`.
pub fn mat_inv(a: &Mat) -> Mat {
    let id = identity_matrix();
    let n: Mat = std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] - &id[i][j]));
    let n2 = mat_mul(&n, &n);
    std::array::from_fn(|i| std::array::from_fn(|j| &id[i][j] - &n[i][j] + &n2[i][j]))
}

pub fn mat_comm(a: &Mat, b: &Mat) -> Mat {
    mat_mul(&mat_mul(&mat_inv(a), &mat_inv(b)), &mat_mul(a, b))
}

/// Whether `[g, h] = 1` in every component, by matrix arithmetic.
pub fn commute_by_matrices(g: &UT3Elem, h: &UT3Elem) -> bool {
    (0..g.ring().num_components()).all(|c| mat_comm(&int_matrix(g, c), &int_matrix(h, c)) == identity_matrix())
}
