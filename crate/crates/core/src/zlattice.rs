//! Subgroups of `Z^d` kept in row-style Hermite normal form.
//!
//! Pivots run left to right, are positive, and entries above each pivot are
//! reduced into `[0, pivot)`. The HNF is unique, so two lattices are equal
//! iff their bases are.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub type IntVec = Vec<BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_dim: usize,
    basis: Vec<IntVec>,
    pivots: Vec<usize>,
}

/// HNF together with the unimodular bookkeeping that produced it.
#[derive(Clone, Debug)]
pub struct HnfDecomposition {
    pub lattice: Lattice,
    /// `transform[k]` holds the coefficients of basis row `k` over the inputs.
    pub transform: Vec<IntVec>,
    /// Basis of the integer relations among the inputs (their left kernel).
    pub kernel: Vec<IntVec>,
}

impl Lattice {
    pub fn zero(ambient_dim: usize) -> Self {
        Lattice {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// All of `Z^d`.
    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); ambient_dim];
                v[i] = BigInt::from(1);
                v
            })
            .collect();
        Lattice {
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn check_dim(&self, v: &[BigInt]) -> Result<(), LatticeError> {
        if v.len() != self.ambient_dim {
            return Err(LatticeError::Dimension {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Coefficients of `v` over the basis rows, by back-substitution.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<IntVec>, LatticeError> {
        self.check_dim(v)?;
        let mut rest: IntVec = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        let mut col = 0;
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if rest[col..p].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return Ok(None);
            }
            if !q.is_zero() {
                for (x, b) in rest.iter_mut().zip(row).skip(p) {
                    *x -= &q * b;
                }
            }
            coeffs.push(q);
            col = p + 1;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(coeffs))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LatticeError> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// The integer combination of basis rows with the given coefficients.
    pub fn combine(&self, coeffs: &[BigInt]) -> IntVec {
        assert_eq!(coeffs.len(), self.rank());
        let mut out = vec![BigInt::zero(); self.ambient_dim];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(row) {
                *o += c * b;
            }
        }
        out
    }

    /// `{v in L : v_j = 0 for all j in coords}` (0-based indices).
    ///
    /// Reorders the coordinates so `coords` come first and re-echelonises;
    /// since the basis rows are independent, the rows whose pivot lands past
    /// the moved block span exactly the vectors vanishing on it.
    pub fn intersect_coordinate_zero(&self, coords: &[usize]) -> Result<Lattice, LatticeError> {
        for &c in coords {
            if c >= self.ambient_dim {
                return Err(LatticeError::IndexOutOfRange {
                    index: c,
                    dim: self.ambient_dim,
                });
            }
        }
        let mut order: Vec<usize> = Vec::with_capacity(self.ambient_dim);
        for &c in coords {
            if !order.contains(&c) {
                order.push(c);
            }
        }
        let moved = order.len();
        order.extend((0..self.ambient_dim).filter(|j| !coords.contains(j)));

        let permuted: Vec<IntVec> = self
            .basis
            .iter()
            .map(|row| order.iter().map(|&j| row[j].clone()).collect())
            .collect();
        let echelon = hnf_unchecked(self.ambient_dim, permuted);
        let mut kept = Vec::new();
        for (row, &p) in echelon.basis.iter().zip(&echelon.pivots) {
            if p >= moved {
                let mut back = vec![BigInt::zero(); self.ambient_dim];
                for (k, &j) in order.iter().enumerate() {
                    back[j] = row[k].clone();
                }
                kept.push(back);
            }
        }
        Ok(hnf_unchecked(self.ambient_dim, kept))
    }

    /// Keeps only coordinates `[start, start + len)`; the image lattice.
    pub fn project(&self, start: usize, len: usize) -> Lattice {
        let rows = self.basis.iter().map(|row| row[start..start + len].to_vec()).collect();
        hnf_unchecked(len, rows)
    }

    /// Sum of two lattices in the same ambient space.
    pub fn join(&self, other: &Lattice) -> Result<Lattice, LatticeError> {
        if other.ambient_dim != self.ambient_dim {
            return Err(LatticeError::Dimension {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(hnf_unchecked(self.ambient_dim, rows))
    }
}

/// HNF of the subgroup generated by `vectors` in `Z^dim`.
pub fn hnf(dim: usize, vectors: &[IntVec]) -> Result<Lattice, LatticeError> {
    Ok(hnf_with_transform(dim, vectors)?.lattice)
}

pub fn rank(lattice: &Lattice) -> usize {
    lattice.rank()
}

pub fn member(lattice: &Lattice, v: &[BigInt]) -> Result<bool, LatticeError> {
    lattice.contains(v)
}

pub fn intersect_coordinate_zero(lattice: &Lattice, coords: &[usize]) -> Result<Lattice, LatticeError> {
    lattice.intersect_coordinate_zero(coords)
}

fn hnf_unchecked(dim: usize, vectors: Vec<IntVec>) -> Lattice {
    let n = vectors.len();
    let mut rows = vectors;
    let mut scratch = vec![Vec::new(); n];
    reduce(dim, &mut rows, &mut scratch, false)
}

/// HNF with the transformation tracked: `basis = transform * inputs`.
pub fn hnf_with_transform(dim: usize, vectors: &[IntVec]) -> Result<HnfDecomposition, LatticeError> {
    for v in vectors {
        if v.len() != dim {
            return Err(LatticeError::Dimension {
                expected: dim,
                got: v.len(),
            });
        }
    }
    let n = vectors.len();
    let mut rows = vectors.to_vec();
    let mut transform: Vec<IntVec> = (0..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let lattice = reduce(dim, &mut rows, &mut transform, true);
    let r = lattice.rank();
    let kernel = transform.split_off(r);
    Ok(HnfDecomposition {
        lattice,
        transform,
        kernel,
    })
}

/// Integer row reduction. On return the first `rank` rows of `rows` (and of
/// `track`, when tracking) are the echelon basis; the rest of `rows` is zero.
fn reduce(dim: usize, rows: &mut [IntVec], track: &mut [IntVec], tracking: bool) -> Lattice {
    let n = rows.len();
    let mut top = 0;
    let mut pivots = Vec::new();

    fn axpy(dst: &mut IntVec, q: &BigInt, src: &IntVec) {
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
    }

    for col in 0..dim {
        if top == n {
            break;
        }
        loop {
            // Smallest nonzero entry in this column among unfinished rows.
            let mut best: Option<usize> = None;
            for i in top..n {
                if !rows[i][col].is_zero() && !best.is_some_and(|b| rows[i][col].abs() >= rows[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(top, b);
            if tracking {
                track.swap(top, b);
            }
            let mut done = true;
            for i in top + 1..n {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[top][col]);
                let (head, tail) = rows.split_at_mut(i);
                axpy(&mut tail[0], &q, &head[top]);
                if tracking {
                    let (th, tt) = track.split_at_mut(i);
                    axpy(&mut tt[0], &q, &th[top]);
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[top][col].is_zero() {
            continue;
        }
        if rows[top][col].is_negative() {
            for x in rows[top].iter_mut() {
                *x = -&*x;
            }
            if tracking {
                for x in track[top].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        for i in 0..top {
            let q = rows[i][col].div_floor(&rows[top][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(top);
            axpy(&mut head[i], &q, &tail[0]);
            if tracking {
                let (th, tt) = track.split_at_mut(top);
                axpy(&mut th[i], &q, &tt[0]);
            }
        }
        pivots.push(col);
        top += 1;
    }
    Lattice {
        ambient_dim: dim,
        basis: rows[..top].to_vec(),
        pivots,
    }
}

/// Integer vector from small integers, for tests and fixtures.
pub fn ivec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_examples() {
        let l = hnf(2, &[ivec(&[2, 0]), ivec(&[0, 3])]).unwrap();
        assert_eq!(l.basis(), &[ivec(&[2, 0]), ivec(&[0, 3])]);
        let l = hnf(2, &[ivec(&[1, 1]), ivec(&[1, -1])]).unwrap();
        assert_eq!(l.basis(), &[ivec(&[1, 1]), ivec(&[0, 2])]);
        let l = hnf(2, &[]).unwrap();
        assert_eq!(l.rank(), 0);
        assert!(matches!(
            hnf(2, &[ivec(&[1, 2, 3])]),
            Err(LatticeError::Dimension { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn entries_above_pivots_are_reduced() {
        let l = hnf(2, &[ivec(&[1, 7]), ivec(&[0, 3])]).unwrap();
        assert_eq!(l.basis(), &[ivec(&[1, 1]), ivec(&[0, 3])]);
        let l = hnf(3, &[ivec(&[-2, 4, 1]), ivec(&[3, -6, 0]), ivec(&[0, 0, 5])]).unwrap();
        for (row, &p) in l.basis().iter().zip(l.pivots()) {
            assert!(row[p] > BigInt::zero());
        }
        for (k, &p) in l.pivots().iter().enumerate() {
            for above in &l.basis()[..k] {
                assert!(above[p] >= BigInt::zero() && above[p] < l.basis()[k][p]);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let l = hnf(2, &[ivec(&[1, 1]), ivec(&[0, 2])]).unwrap();
        assert_eq!(l.coordinates(&ivec(&[3, 1])).unwrap(), Some(ivec(&[3, -1])));
        assert!(l.contains(&ivec(&[0, 0])).unwrap());
        let l2 = hnf(2, &[ivec(&[2, 0])]).unwrap();
        assert!(!l2.contains(&ivec(&[1, 0])).unwrap());
        assert!(l2.contains(&ivec(&[1])).is_err());
    }

    #[test]
    fn coordinate_intersections() {
        let l = hnf(2, &[ivec(&[1, 1]), ivec(&[0, 2])]).unwrap();
        assert_eq!(l.intersect_coordinate_zero(&[0]).unwrap().basis(), &[ivec(&[0, 2])]);
        let full = Lattice::full(2);
        assert_eq!(full.intersect_coordinate_zero(&[]).unwrap(), full);
        let diag = hnf(2, &[ivec(&[1, 1])]).unwrap();
        assert!(diag.intersect_coordinate_zero(&[1]).unwrap().is_zero());
        assert!(matches!(
            diag.intersect_coordinate_zero(&[2]),
            Err(LatticeError::IndexOutOfRange { index: 2, dim: 2 })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(hnf(2, &[ivec(&[2, 0]), ivec(&[0, 3])]).unwrap().rank(), 2);
        assert_eq!(hnf(2, &[ivec(&[1, 1]), ivec(&[2, 2])]).unwrap().rank(), 1);
        assert_eq!(Lattice::zero(3).rank(), 0);
    }

    #[test]
    fn transform_and_kernel() {
        let inputs = [ivec(&[1, 1]), ivec(&[2, 2]), ivec(&[1, -1])];
        let d = hnf_with_transform(2, &inputs).unwrap();
        for (row, coeffs) in d.lattice.basis().iter().zip(&d.transform) {
            let mut acc = vec![BigInt::zero(); 2];
            for (c, v) in coeffs.iter().zip(&inputs) {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += c * x;
                }
            }
            assert_eq!(&acc, row);
        }
        assert_eq!(d.kernel.len(), 1);
        let rel = &d.kernel[0];
        let mut acc = vec![BigInt::zero(); 2];
        for (c, v) in rel.iter().zip(&inputs) {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += c * x;
            }
        }
        assert!(acc.iter().all(Zero::is_zero));
    }
}
