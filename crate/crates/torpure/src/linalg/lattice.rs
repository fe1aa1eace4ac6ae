//! Sublattices of an ambient integer lattice, canonically represented.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::{is_zero_vec, IntMatrix};
use super::normal_forms::{hnf, snf};
use super::LinalgError;

/// A finitely generated sublattice of some `Z^m`, stored as a basis matrix in
/// canonical row-style Hermite normal form with positive pivots. Lattice
/// equality is therefore plain matrix equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// Lattice spanned by the rows of `gens`; zero rows are dropped.
    pub fn from_rows(gens: &IntMatrix) -> Lattice {
        let d = hnf(gens);
        let keep: Vec<usize> = (0..d.rank).collect();
        Lattice {
            ambient: gens.cols(),
            basis: d.h.select_rows(&keep),
        }
    }

    pub fn zero(ambient: usize) -> Lattice {
        Lattice {
            ambient,
            basis: IntMatrix::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Lattice {
        Lattice {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// The canonical HNF basis; rows are linearly independent.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `x` in the basis when `x` lies in the lattice.
    ///
    /// Back-substitution down the HNF staircase; the returned coordinates `c`
    /// satisfy `c * basis = x`.
    pub fn membership(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(x.len(), self.ambient, "ambient dimension mismatch");
        let mut res = x.to_vec();
        let mut coords = Vec::with_capacity(self.basis.rows());
        for i in 0..self.basis.rows() {
            let p = (0..self.ambient)
                .find(|&c| !self.basis.at(i, c).is_zero())
                .expect("canonical basis has no zero rows");
            if (&res[p] % self.basis.at(i, p)) != BigInt::zero() {
                return None;
            }
            let q = &res[p] / self.basis.at(i, p);
            for c in 0..self.ambient {
                res[c] = &res[c] - &q * self.basis.at(i, c);
            }
            coords.push(q);
        }
        if is_zero_vec(&res) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.membership(x).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient
            && (0..other.basis.rows()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice, LinalgError> {
        self.check_ambient(other)?;
        Ok(Lattice::from_rows(&self.basis.vstack(&other.basis)))
    }

    /// Exact lattice intersection.
    ///
    /// A vector lies in both lattices iff it is `c1 * B1 = c2 * B2` for
    /// integer coefficient rows, i.e. `(c1, -c2)` is in the integer kernel of
    /// the stacked matrix `[B1^T | -B2^T]`; mapping that kernel back through
    /// `B1` yields the intersection.
    pub fn intersection(&self, other: &Lattice) -> Result<Lattice, LinalgError> {
        self.check_ambient(other)?;
        if self.rank() == 0 || other.rank() == 0 {
            return Ok(Lattice::zero(self.ambient));
        }
        let stacked = self
            .basis
            .transpose()
            .hstack(&other.basis.transpose().neg());
        let kernel = super::solve::integer_kernel(&stacked);
        let k1 = self.rank();
        let coeffs = kernel.basis().select_columns(&(0..k1).collect::<Vec<_>>());
        Ok(Lattice::from_rows(&coeffs.mul(&self.basis)))
    }

    /// Smallest saturated lattice containing this one: the intersection of
    /// the rational span with the ambient lattice.
    pub fn saturation(&self) -> Lattice {
        if self.rank() == 0 {
            return self.clone();
        }
        let ker = super::solve::integer_kernel(&self.basis);
        if ker.rank() == 0 {
            return Lattice::full(self.ambient);
        }
        super::solve::integer_kernel(ker.basis())
    }

    /// A lattice is saturated when the ambient quotient is torsion-free,
    /// i.e. all invariant factors of its basis are 1.
    pub fn is_saturated(&self) -> bool {
        snf(&self.basis)
            .invariant_factors()
            .iter()
            .all(|d| d.is_one())
    }

    fn check_ambient(&self, other: &Lattice) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }
}
