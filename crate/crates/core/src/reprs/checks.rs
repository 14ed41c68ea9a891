use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Frame, Method, ReprError, Representation, Status, Verdict};
use crate::rings::{points_of_norm, RingElem};
use crate::ut3::{entry_det, UT3Elem};
use crate::zlattice::{hnf, hnf_with_transform, IntVec, Lattice};

/// Pair-lattice columns of component `c` (both blocks).
fn pair_columns(frame: &Frame, c: usize) -> Vec<usize> {
    let d = frame.len();
    let cols = frame.component_columns(c);
    let mut out = cols.clone();
    out.extend(cols.iter().map(|j| j + d));
    out
}

fn embed_pair(v: &[BigInt], block: usize, d: usize) -> IntVec {
    let mut out = vec![BigInt::zero(); 2 * d];
    out[block * d..block * d + d].clone_from_slice(v);
    out
}

fn pair_det(rep: &Representation, p: &[BigInt], q: &[BigInt]) -> RingElem {
    let (p12, p23) = rep.pair_elements(p);
    let (q12, q23) = rep.pair_elements(q);
    &(&p12 * &q23) - &(&q12 * &p23)
}

fn element(rep: &Representation, v: &[BigInt]) -> UT3Elem {
    rep.element_with_pair(v).expect("vector taken from the pair lattice")
}

/// `g` in `C(a1) u C(a2)` whose nonzero off-diagonal entry is a zero divisor.
fn lame_failure(g: &UT3Elem) -> Option<String> {
    if g.u12.is_zero() && g.u23.is_zero_divisor() {
        Some(format!(
            "element of C(a1) outside the center with zero-divisor e23 = {}",
            g.u23
        ))
    } else if g.u23.is_zero() && g.u12.is_zero_divisor() {
        Some(format!(
            "element of C(a2) outside the center with zero-divisor e12 = {}",
            g.u12
        ))
    } else {
        None
    }
}

/// The Lame Property through the two lattice conditions: no nonzero entry
/// of `A1` or `A2` may vanish on a whole component.
pub fn lame_check(rep: &Representation) -> Verdict {
    for (name, g) in rep.generators() {
        if let Some(why) = lame_failure(g) {
            return Verdict::new("lame", Status::Violated, Method::ExactLattice)
                .with_witness(name, g.clone())
                .with_note(why);
        }
    }
    let frame = rep.monomial_frame();
    let d = frame.len();
    let lat = rep.lattices();
    for (slice, block) in [(&lat.a1, 1), (&lat.a2, 0)] {
        for c in 0..rep.ring().num_components() {
            let sub = slice
                .intersect_coordinate_zero(&frame.component_columns(c))
                .expect("frame columns");
            if let Some(v) = sub.basis().first() {
                let g = element(rep, &embed_pair(v, block, d));
                let why = lame_failure(&g).expect("vanishes on a component");
                return Verdict::new("lame", Status::Violated, Method::ExactLattice)
                    .with_witness("g", g)
                    .with_note(why);
            }
        }
    }
    Verdict::new("lame", Status::Holds, Method::ExactLattice)
        .with_note("no nonzero element of A1 or A2 vanishes on a component")
}

/// A nonzero integer vector `k` with `sum k_j rows_j = 0`, by Gaussian
/// elimination over the rationals.
fn rational_relation(rows: &[IntVec]) -> Option<Vec<BigInt>> {
    let r = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    // m[i][j] = rows[j][i]; solve m k = 0
    let mut m: Vec<Vec<BigRational>> = (0..cols)
        .map(|i| (0..r).map(|j| BigRational::from_integer(rows[j][i].clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..cols).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let lead = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = &*x / &lead;
        }
        for i in 0..cols {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..r {
                    let t = &f * &m[row][j];
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free = (0..r).find(|c| !pivots.contains(c))?;
    let mut k = vec![BigRational::zero(); r];
    k[free] = BigRational::one();
    for (i, &p) in pivots.iter().enumerate() {
        k[p] = -m[i][free].clone();
    }
    let denom = k.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    Some(
        k.iter()
            .map(|x| (x * BigRational::from_integer(denom.clone())).to_integer())
            .collect(),
    )
}

/// The Lame Property read off the definition: look for a nonzero entry
/// pair in `C(a1) u C(a2)` with `g12^2 + g23^2` a zero divisor, solving for
/// a rational dependence among the slice's basis restricted to each
/// component.
pub fn lame_check_def1(rep: &Representation) -> Verdict {
    let frame = rep.monomial_frame();
    let d = frame.len();
    let lat = rep.lattices();
    for (slice, block) in [(&lat.a1, 1), (&lat.a2, 0)] {
        for c in 0..rep.ring().num_components() {
            let cols = frame.component_columns(c);
            let restricted: Vec<IntVec> = slice
                .basis()
                .iter()
                .map(|b| cols.iter().map(|&j| b[j].clone()).collect())
                .collect();
            if restricted.is_empty() {
                continue;
            }
            let Some(k) = rational_relation(&restricted) else {
                continue;
            };
            let mut v = vec![BigInt::zero(); d];
            for (kj, b) in k.iter().zip(slice.basis()) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += kj * bi;
                }
            }
            let g = element(rep, &embed_pair(&v, block, d));
            let sum_sq = &(&g.u12 * &g.u12) + &(&g.u23 * &g.u23);
            if sum_sq.is_zero_divisor() {
                return Verdict::new("lame_def1", Status::Violated, Method::ExactLattice)
                    .with_witness("g", g)
                    .with_note(format!("e12^2 + e23^2 = {sum_sq} is a zero divisor"));
            }
        }
    }
    Verdict::new("lame_def1", Status::Holds, Method::ExactLattice)
}

/// Whether `a2`'s slice and `a1`'s slice contain a nonzero pair `u, v` with
/// `uv = 0`; components are domains, so such a pair has disjoint supports.
pub fn tau_check(rep: &Representation) -> Verdict {
    let frame = rep.monomial_frame();
    let d = frame.len();
    let k = rep.ring().num_components();
    let lat = rep.lattices();
    for support in 1u64..(1u64 << k) - 1 {
        let inside = |c: usize| support >> c & 1 == 1;
        let outside_cols: Vec<usize> = (0..k)
            .filter(|&c| !inside(c))
            .flat_map(|c| frame.component_columns(c))
            .collect();
        let inside_cols: Vec<usize> = (0..k)
            .filter(|&c| inside(c))
            .flat_map(|c| frame.component_columns(c))
            .collect();
        let us = lat.a2.intersect_coordinate_zero(&outside_cols).expect("frame columns");
        let vs = lat.a1.intersect_coordinate_zero(&inside_cols).expect("frame columns");
        if let (Some(u), Some(v)) = (us.basis().first(), vs.basis().first()) {
            let y = element(rep, &embed_pair(u, 0, d));
            let x = element(rep, &embed_pair(v, 1, d));
            let note = format!("u = {}, v = {}, uv = 0", y.u12, x.u23);
            return Verdict::new("tau", Status::Violated, Method::ExactLattice)
                .with_witness("x1", x)
                .with_witness("x2", y)
                .with_note(note);
        }
    }
    Verdict::new("tau", Status::Holds, Method::ExactLattice)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemSolution {
    Solvable { witness: UT3Elem, exponents: Vec<BigInt> },
    Unsolvable { reason: String },
}

impl SystemSolution {
    pub fn witness(&self) -> Option<&UT3Elem> {
        match self {
            SystemSolution::Solvable { witness, .. } => Some(witness),
            SystemSolution::Unsolvable { .. } => None,
        }
    }
}

fn solve_system(rep: &Representation, z: &UT3Elem, block: usize, which: &str) -> Result<SystemSolution, ReprError> {
    if z.ring() != rep.ring() {
        return Err(crate::rings::RingError::Mismatch(rep.ring().to_string(), z.ring().to_string()).into());
    }
    if !z.is_central() {
        return Err(ReprError::NotCentral(z.to_string()));
    }
    let frame = rep.monomial_frame();
    let Some(v) = frame.vector(&z.u13) else {
        return Ok(SystemSolution::Unsolvable {
            reason: format!("{which}: e13 = {} leaves the span of the generator entries", z.u13),
        });
    };
    let pair = embed_pair(&v, block, frame.len());
    Ok(match rep.exponents_for(&pair) {
        Some(exponents) => SystemSolution::Solvable {
            witness: rep.word(&exponents),
            exponents,
        },
        None => {
            let shown = if block == 0 {
                format!("({}, 0)", z.u13)
            } else {
                format!("(0, {})", z.u13)
            };
            SystemSolution::Unsolvable {
                reason: format!("{which}: {shown} is not in A"),
            }
        }
    })
}

/// `exists y ([a2,y]=1 & [y,a1]=z)`: solvable iff `(z13, 0)` is in `A`.
pub fn solve_s(rep: &Representation, z: &UT3Elem) -> Result<SystemSolution, ReprError> {
    solve_system(rep, z, 0, "S")
}

/// `exists x ([x,a1]=1 & [a2,x]=z)`: solvable iff `(0, z13)` is in `A`.
pub fn solve_t(rep: &Representation, z: &UT3Elem) -> Result<SystemSolution, ReprError> {
    solve_system(rep, z, 1, "T")
}

/// Both systems for every commutator. The commutator entries are bilinear
/// in the pairs, so checking generator pairs suffices.
pub fn sigma_check(rep: &Representation) -> Verdict {
    let gens = rep.generators();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let (x2, x1) = (&gens[i], &gens[j]);
            let z = x2.1.commutator(&x1.1).expect("same ring");
            for solve in [solve_s, solve_t] {
                if let SystemSolution::Unsolvable { reason } = solve(rep, &z).expect("commutators are central") {
                    return Verdict::new("sigma", Status::Violated, Method::ExactLattice)
                        .with_witness("x1", x1.1.clone())
                        .with_witness("x2", x2.1.clone())
                        .with_note(format!("z = [{}, {}] = {z}", x2.0, x1.0))
                        .with_note(reason);
                }
            }
        }
    }
    Verdict::new("sigma", Status::Holds, Method::ExactLattice)
}

/// A violation of NZCT through `x2 = q`, if the commuting set of `q` is
/// nonabelian.
fn nzct_violation_at(rep: &Representation, q: &IntVec) -> Option<Verdict> {
    let lat = rep.lattices();
    let basis = lat.a.basis();
    let dets: Vec<RingElem> = basis.iter().map(|b| pair_det(rep, b, q)).collect();
    let frame = Frame::spanning(&dets);
    let rows: Vec<IntVec> = dets.iter().map(|r| frame.vector(r).expect("spanned")).collect();
    let kernel = hnf_with_transform(frame.len(), &rows).expect("consistent").kernel;
    let commuting: Vec<IntVec> = kernel
        .iter()
        .map(|c| {
            let mut v = vec![BigInt::zero(); lat.a.ambient_dim()];
            for (cj, b) in c.iter().zip(basis) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += cj * bi;
                }
            }
            v
        })
        .collect();
    let x2 = element(rep, q);
    let (_, y) = rep.generators().iter().find(|(_, g)| !entry_det(&x2, g).is_zero())?;
    for i in 0..commuting.len() {
        for j in i + 1..commuting.len() {
            if !pair_det(rep, &commuting[i], &commuting[j]).is_zero() {
                return Some(
                    Verdict::new("nzct", Status::Violated, Method::ExactLattice)
                        .with_witness("x1", element(rep, &commuting[i]))
                        .with_witness("x2", x2)
                        .with_witness("x3", element(rep, &commuting[j]))
                        .with_witness("y", y.clone())
                        .with_note("x1 and x3 commute with the noncentral x2 but not with each other"),
                );
            }
        }
    }
    None
}

/// NZCT on the pair lattice. Two elements commute iff their pairs have zero
/// determinant; in a component where `x2` is nonzero that forces
/// proportionality, so a violation needs `x2` to vanish on some component
/// `c` and a pair with nonzero `c`-determinant. Components are decided
/// exactly when their slice is central, carries no determinant, or has
/// rank 1; otherwise small slice vectors are searched up to `bound`.
pub fn nzct_check(rep: &Representation, bound: u32) -> Verdict {
    let frame = rep.monomial_frame();
    let lat = rep.lattices();
    let basis = lat.a.basis();
    let k = rep.ring().num_components();
    if k == 1 {
        return Verdict::new("nzct", Status::Holds, Method::ExactLattice)
            .with_note("integral domain: commuting noncentral pairs are proportional");
    }
    let central = |q: &IntVec| rep.is_central_in_g(&element(rep, q));
    let mut open: Vec<Lattice> = Vec::new();
    for c in 0..k {
        let slice = lat
            .a
            .intersect_coordinate_zero(&pair_columns(frame, c))
            .expect("frame columns");
        if slice.basis().iter().all(central) {
            continue;
        }
        let flat = (0..basis.len())
            .all(|i| (i + 1..basis.len()).all(|j| pair_det(rep, &basis[i], &basis[j]).part(c).is_zero()));
        if flat {
            continue;
        }
        if slice.rank() == 1 {
            // K_q only depends on the line through q
            if let Some(v) = nzct_violation_at(rep, &slice.basis()[0]) {
                return v;
            }
            continue;
        }
        open.push(slice);
    }
    if open.is_empty() {
        return Verdict::new("nzct", Status::Holds, Method::ExactLattice);
    }
    for norm in 1..=bound.max(1) as u64 {
        for slice in &open {
            for coeffs in points_of_norm(slice.rank(), norm) {
                let coeffs: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
                let q = slice.combine(&coeffs);
                if central(&q) {
                    continue;
                }
                if let Some(v) = nzct_violation_at(rep, &q) {
                    return v.with_bound(bound);
                }
            }
        }
    }
    Verdict::new("nzct", Status::Inconclusive, Method::ExactLattice)
        .with_bound(bound)
        .with_note(format!(
            "no violation through slice vectors with coefficients up to {bound}"
        ))
}

/// `rank(A1) + rank(A2) - 1`.
pub fn c_rank(rep: &Representation) -> i64 {
    let lat = rep.lattices();
    lat.a1.rank() as i64 + lat.a2.rank() as i64 - 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Appropriateness {
    Confirmed { degree: u32 },
    Refuted { reason: String },
    Inconclusive { reason: String },
}

/// Whether each indeterminate and each component idempotent lies in the
/// subring generated by the generator entries, using products of at most
/// `degree_bound` entries.
pub fn appropriateness_check(rep: &Representation, degree_bound: u32) -> Result<Appropriateness, ReprError> {
    if degree_bound == 0 {
        return Err(ReprError::BadDegreeBound);
    }
    let ring = rep.ring();
    let entries: BTreeSet<RingElem> = rep
        .generators()
        .iter()
        .flat_map(|(_, g)| [g.u12.clone(), g.u13.clone(), g.u23.clone()])
        .filter(|r| !r.is_zero())
        .collect();
    let mut targets: Vec<(String, RingElem)> = Vec::new();
    let mut names: Vec<&String> = ring.components().iter().flatten().collect();
    names.sort();
    names.dedup();
    for name in names {
        let involved = entries.iter().any(|r| {
            r.parts().iter().enumerate().any(|(c, p)| {
                ring.indeterminates(c)
                    .iter()
                    .position(|n| n == name)
                    .is_some_and(|i| p.degree_in(i) > 0)
            })
        });
        if !involved {
            return Ok(Appropriateness::Refuted {
                reason: format!("no entry involves {name}"),
            });
        }
        targets.push((
            name.clone(),
            RingElem::indeterminate(ring, name).expect("ring indeterminate"),
        ));
    }
    if ring.num_components() > 1 {
        let scalar = |r: &RingElem| {
            let first = r.part(0).as_constant();
            first.is_some() && r.parts().iter().all(|p| p.as_constant() == first)
        };
        if entries.iter().all(scalar) {
            return Ok(Appropriateness::Refuted {
                reason: "every entry is an integer, so no idempotent is generated".into(),
            });
        }
        for c in 0..ring.num_components() {
            targets.push((format!("e{}", c + 1), RingElem::idempotent(ring, c)));
        }
    }
    if targets.is_empty() {
        return Ok(Appropriateness::Confirmed { degree: 0 });
    }
    let mut products: BTreeSet<RingElem> = BTreeSet::from([RingElem::one(ring)]);
    let mut layer = products.clone();
    let mut missing: Vec<&str> = Vec::new();
    for degree in 1..=degree_bound {
        let next: BTreeSet<RingElem> = layer
            .iter()
            .flat_map(|p| entries.iter().map(move |e| p * e))
            .filter(|r| !products.contains(r))
            .collect();
        products.extend(next.iter().cloned());
        layer = next;
        let frame = Frame::spanning(&products);
        let vectors: Vec<IntVec> = products.iter().map(|r| frame.vector(r).expect("spanned")).collect();
        let span = hnf(frame.len(), &vectors)?;
        missing = targets
            .iter()
            .filter(|(_, t)| {
                !frame
                    .vector(t)
                    .is_some_and(|v| span.contains(&v).expect("same dimension"))
            })
            .map(|(n, _)| n.as_str())
            .collect();
        if missing.is_empty() {
            return Ok(Appropriateness::Confirmed { degree });
        }
        if layer.is_empty() {
            break;
        }
    }
    Ok(Appropriateness::Inconclusive {
        reason: format!(
            "{} not reached by products of at most {degree_bound} entries",
            missing.join(", ")
        ),
    })
}
