//! Exact rational cone geometry: simplicial coordinates, H-representations
//! and a double-description pass for pairwise cone intersections.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::linalg::matrix::{dot, is_zero_vec, primitive_vector};
use crate::linalg::{integer_kernel, solve_rational, IntMatrix};

/// Coordinates of `p` in the generators of a simplicial cone (columns of
/// `w`, linearly independent); `None` when `p` is outside the linear span.
pub fn simplicial_coordinates(w: &IntMatrix, p: &[BigRational]) -> Option<Vec<BigRational>> {
    if w.cols() == 0 {
        return if p.iter().all(|x| x.is_zero()) {
            Some(vec![])
        } else {
            None
        };
    }
    solve_rational(w, p)
}

/// Is `p` a nonnegative combination of the columns of `w`?
pub fn cone_contains(w: &IntMatrix, p: &[BigRational]) -> bool {
    matches!(simplicial_coordinates(w, p), Some(c) if c.iter().all(|x| !x.is_negative()))
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from(x.clone())).collect()
}

/// Cofactor-expansion adjugate; `adj(m) * m = det(m) * I`.
pub fn adjugate(m: &IntMatrix) -> IntMatrix {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return IntMatrix::identity(0);
    }
    IntMatrix::from_fn(n, n, |i, j| {
        // cofactor C_{j,i}
        let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
        let minor = m.select_rows(&rows).select_columns(&cols).det();
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    })
}

struct DdRay {
    v: Vec<BigInt>,
    zero: u128,
}

struct DoubleDescription {
    constraints: Vec<Vec<BigInt>>,
    rays: Vec<DdRay>,
}

impl DoubleDescription {
    /// Start from the nonnegative orthant in dimension `k`.
    fn orthant(k: usize) -> Self {
        let mut constraints = Vec::with_capacity(k);
        let mut rays = Vec::with_capacity(k);
        for i in 0..k {
            let mut e = vec![BigInt::zero(); k];
            e[i] = BigInt::from(1);
            constraints.push(e);
        }
        for i in 0..k {
            let mut v = vec![BigInt::zero(); k];
            v[i] = BigInt::from(1);
            let mut zero = 0u128;
            for j in 0..k {
                if j != i {
                    zero |= 1 << j;
                }
            }
            rays.push(DdRay { v, zero });
        }
        DoubleDescription { constraints, rays }
    }

    fn recompute_zero(&self, v: &[BigInt]) -> u128 {
        let mut z = 0u128;
        for (j, c) in self.constraints.iter().enumerate() {
            if dot(c, v).is_zero() {
                z |= 1 << j;
            }
        }
        z
    }

    /// Refine the current cone by the halfspace `h . x >= 0`.
    fn cut(&mut self, h: &[BigInt]) {
        let ci = self.constraints.len();
        assert!(ci < 128, "double description constraint budget exceeded");
        self.constraints.push(h.to_vec());
        let vals: Vec<BigInt> = self.rays.iter().map(|r| dot(h, &r.v)).collect();
        let pos: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].is_negative()).collect();

        let mut combined: Vec<DdRay> = Vec::new();
        for &ip in &pos {
            for &im in &neg {
                let shared = self.rays[ip].zero & self.rays[im].zero;
                // combinatorial adjacency: no third extreme ray is tight on
                // every constraint shared by this pair
                let blocked = self
                    .rays
                    .iter()
                    .enumerate()
                    .any(|(t, rt)| t != ip && t != im && (rt.zero & shared) == shared);
                if blocked {
                    continue;
                }
                let a = &vals[ip];
                let b = -&vals[im];
                let v: Vec<BigInt> = self.rays[ip]
                    .v
                    .iter()
                    .zip(&self.rays[im].v)
                    .map(|(x, y)| &b * x + a * y)
                    .collect();
                let v = primitive_vector(&v);
                combined.push(DdRay { zero: 0, v });
            }
        }

        let mut kept: Vec<DdRay> = Vec::new();
        for (i, r) in std::mem::take(&mut self.rays).into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            let zero = if vals[i].is_zero() {
                r.zero | (1 << ci)
            } else {
                r.zero
            };
            kept.push(DdRay { v: r.v, zero });
        }
        for mut r in combined {
            if kept.iter().any(|k| k.v == r.v) {
                continue;
            }
            r.zero = self.recompute_zero(&r.v);
            kept.push(r);
        }
        self.rays = kept;
    }

    fn cut_equation(&mut self, e: &[BigInt]) {
        if is_zero_vec(e) {
            return;
        }
        self.cut(e);
        let neg: Vec<BigInt> = e.iter().map(|x| -x).collect();
        self.cut(&neg);
    }
}

/// Extreme rays of `cone(w1) ∩ cone(w2)` as primitive integer vectors.
///
/// Works in the coordinate space of `w1`: there the first cone is the
/// nonnegative orthant, membership in `span(w2)` contributes linear equations
/// (one per generator of the orthogonal complement) and membership in
/// `cone(w2)` contributes the sign conditions of the `w2`-coordinates, scaled
/// integral through the adjugate of the Gram matrix.
pub fn intersection_extreme_rays(w1: &IntMatrix, w2: &IntMatrix) -> Vec<Vec<BigInt>> {
    let k1 = w1.cols();
    if k1 == 0 || w2.cols() == 0 {
        return vec![];
    }
    let mut dd = DoubleDescription::orthant(k1);

    let complement = integer_kernel(&w2.transpose());
    for i in 0..complement.rank() {
        let row = IntMatrix::from_rows(w1.rows(), vec![complement.basis().row_vec(i)]);
        let eq = row.mul(w1);
        dd.cut_equation(eq.row(0));
    }

    let gram = w2.transpose().mul(w2);
    let scaled_coords = adjugate(&gram).mul(&w2.transpose()).mul(w1);
    for i in 0..scaled_coords.rows() {
        dd.cut(scaled_coords.row(i));
    }

    let mut out: Vec<Vec<BigInt>> = dd
        .rays
        .iter()
        .map(|r| primitive_vector(&w1.mul_vec(&r.v)))
        .filter(|v| !is_zero_vec(v))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_from_i64;

    fn rat(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from(BigInt::from(x)))
            .collect()
    }

    #[test]
    fn quadrant_contains() {
        let w = IntMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        assert!(cone_contains(&w, &rat(&[2, 3])));
        assert!(cone_contains(&w, &rat(&[0, 0])));
        assert!(!cone_contains(&w, &rat(&[-1, 3])));
    }

    #[test]
    fn intersection_of_overlapping_quadrants() {
        // cone((1,0),(1,2)) ∩ cone((1,1),(0,1)) = cone((1,1),(1,2))
        let w1 = IntMatrix::from_i64(&[&[1, 1], &[0, 2]]);
        let w2 = IntMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        let rays = intersection_extreme_rays(&w1, &w2);
        assert_eq!(rays, vec![vec_from_i64(&[1, 1]), vec_from_i64(&[1, 2])]);
    }

    #[test]
    fn intersection_meeting_at_origin() {
        let w1 = IntMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        let w2 = IntMatrix::from_i64(&[&[-1, 0], &[0, -1]]);
        assert!(intersection_extreme_rays(&w1, &w2).is_empty());
    }

    #[test]
    fn intersection_along_shared_ray() {
        let w1 = IntMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        let w2 = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let rays = intersection_extreme_rays(&w1, &w2);
        assert_eq!(rays, vec![vec_from_i64(&[0, 1])]);
    }

    #[test]
    fn adjugate_identity() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let adj = adjugate(&m);
        let prod = adj.mul(&m);
        let det = m.det();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { det.clone() } else { BigInt::zero() };
                assert_eq!(*prod.at(i, j), want);
            }
        }
    }
}
