use std::sync::Arc;

use num_bigint::BigInt;

use super::{solve_s, ReprError, Representation, SystemSolution};
use crate::rings::{Ring, RingDesc, RingElem};
use crate::ut3::{Generator, UT3Elem};

/// `G1 = <G, Y>` with `Y = (z13, 0, 0)`, so that `[a2,Y] = 1` and
/// `[Y,a1] = z`. Returns warnings when `z` is trivial or `S` was already
/// solvable.
pub fn adjoin_y(rep: &Representation, z: &UT3Elem) -> Result<(Representation, Vec<String>), ReprError> {
    let mut warnings = Vec::new();
    if let SystemSolution::Solvable { witness, .. } = solve_s(rep, z)? {
        warnings.push(format!("S is already solvable for z, e.g. by y = {witness}"));
    }
    if z.is_identity() {
        warnings.push("z is the identity, so Y is the identity".into());
    }
    let ring = rep.ring();
    let y = UT3Elem::new(z.u13.clone(), RingElem::zero(ring), RingElem::zero(ring))?;
    let name = rep.fresh_name("Y");
    Ok((rep.with_generator(name, y)?, warnings))
}

/// `G` with every central matrix `(0, r, 0)` adjoined.
pub fn adjoin_center(rep: &Representation) -> Representation {
    Representation::new(rep.ring(), rep.generators().to_vec(), true).expect("already valid")
}

/// The free rank-one centralizer extension at `a_i`: `R` becomes `R[name]`
/// and `t = (0,0,name)` (at `a1`) or `(name,0,0)` (at `a2`) is adjoined as
/// generator `t_<name>`.
pub fn extend_centralizer(rep: &Representation, at: Generator, name: &str) -> Result<Representation, ReprError> {
    let ring: Ring = Arc::new(rep.ring().adjoin_indeterminate(name)?);
    let embed = |g: &UT3Elem| g.map_entries(|r| r.embed_adjoined(&ring));
    let mut gens: Vec<(String, UT3Elem)> = rep.generators().iter().map(|(n, g)| (n.clone(), embed(g))).collect();
    let theta = RingElem::indeterminate(&ring, name).expect("just adjoined");
    let zero = RingElem::zero(&ring);
    let t = match at {
        Generator::A1 => UT3Elem::new(zero.clone(), zero, theta)?,
        Generator::A2 => UT3Elem::new(theta, zero.clone(), zero)?,
    };
    let t_name = format!("t_{name}");
    if gens.iter().any(|(n, _)| *n == t_name) {
        return Err(ReprError::NameClash(t_name));
    }
    gens.push((t_name, t));
    Representation::new(&ring, gens, rep.full_center())
}

/// A retraction `name -> n` keeping every target nontrivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigPowers {
    pub n: BigInt,
    /// Each target with its image.
    pub certificate: Vec<(UT3Elem, UT3Elem)>,
}

/// The smallest `n >= 1` such that substituting `n` for `name` sends no
/// target to the identity. Each target has a nonzero entry, which vanishes
/// for only finitely many `n`, so the scan stops.
pub fn big_powers_retraction(rep: &Representation, name: &str, targets: &[UT3Elem]) -> Result<BigPowers, ReprError> {
    let ring = rep.ring();
    if !ring.contains_indeterminate(name) {
        return Err(ReprError::NotAnIndeterminate(name.to_string()));
    }
    for (i, t) in targets.iter().enumerate() {
        if t.ring() != ring {
            return Err(crate::rings::RingError::Mismatch(ring.to_string(), t.ring().to_string()).into());
        }
        if t.is_identity() {
            return Err(ReprError::IdentityTarget(i));
        }
    }
    let smaller: Ring = Arc::new(RingDesc::new(
        ring.components()
            .iter()
            .map(|c| c.iter().filter(|n| *n != name).cloned().collect())
            .collect(),
    )?);
    let mut n = BigInt::from(1);
    loop {
        let mut certificate = Vec::with_capacity(targets.len());
        for t in targets {
            let image = UT3Elem::new(
                t.u12.specialize(name, &n, &smaller)?,
                t.u13.specialize(name, &n, &smaller)?,
                t.u23.specialize(name, &n, &smaller)?,
            )?;
            if image.is_identity() {
                break;
            }
            certificate.push((t.clone(), image));
        }
        if certificate.len() == targets.len() {
            return Ok(BigPowers { n, certificate });
        }
        n += 1;
    }
}
