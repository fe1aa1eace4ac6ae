//! Integer kernels, linear Diophantine solving, minor gcds and exact
//! rational elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::normal_forms::{hnf, snf};

/// The saturated lattice `{x in Z^cols : m * x = 0}`.
///
/// Row-reduce `m^T` with its transform `u * m^T = h`; the transform rows
/// facing the zero rows of `h` are a basis of the kernel, and a kernel of a
/// map into a free group is automatically saturated.
pub fn integer_kernel(m: &IntMatrix) -> Lattice {
    let mt = m.transpose();
    let d = hnf(&mt);
    let rows: Vec<usize> = (d.rank..mt.rows()).collect();
    Lattice::from_rows(&d.u.select_rows(&rows))
}

/// Some integer solution `x` of `a * x = b`, if one exists.
///
/// With `u * a * w = s` diagonal, `a x = b` becomes `s y = u b`, solved entry
/// by entry; divisibility failures or inconsistent zero rows mean there is no
/// integral solution.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let d = snf(a);
    let c = d.u.mul_vec(b);
    let t = a.rows().min(a.cols());
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        if i < t && !d.s.at(i, i).is_zero() {
            if (&c[i] % d.s.at(i, i)) != BigInt::zero() {
                return None;
            }
            y[i] = &c[i] / d.s.at(i, i);
        } else if !c[i].is_zero() {
            return None;
        }
    }
    Some(d.w.mul_vec(&y))
}

/// gcd of all `k x k` minors of `m` (0 when they all vanish, 1 when `k = 0`).
///
/// Equal to the k-th determinantal divisor, i.e. the product of the first
/// `k` diagonal entries of the Smith normal form.
pub fn gcd_maximal_minors(m: &IntMatrix, k: usize) -> BigInt {
    assert!(
        k <= m.rows().min(m.cols()),
        "minor order exceeds matrix dimensions"
    );
    let diag = snf(m).diagonal();
    let mut g = BigInt::from(1);
    for d in diag.iter().take(k) {
        g *= d;
    }
    g.abs()
}

/// Exact solve of `a * x = b` over the rationals for an integer matrix `a`
/// with linearly independent columns. `None` when the system is inconsistent.
pub fn solve_rational(a: &IntMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let rows = a.rows();
    let cols = a.cols();
    let mut work: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            (0..=cols)
                .map(|c| {
                    if c < cols {
                        BigRational::from(a.at(r, c).clone())
                    } else {
                        b[r].clone()
                    }
                })
                .collect()
        })
        .collect();

    let mut pivot_rows = Vec::with_capacity(cols);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !work[i][c].is_zero()) else {
            // columns are independent, so this cannot happen
            panic!("dependent columns passed to solve_rational");
        };
        work.swap(r, p);
        let inv = work[r][c].recip();
        for v in work[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !work[i][c].is_zero() {
                let f = work[i][c].clone();
                for j in 0..=cols {
                    let delta = &f * &work[r][j];
                    work[i][j] -= delta;
                }
            }
        }
        pivot_rows.push(r);
        r += 1;
    }
    // consistency: all remaining rows must have zero rhs
    for row in work.iter().skip(r) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    Some(
        (0..cols)
            .map(|c| work[pivot_rows[c]][cols].clone())
            .collect(),
    )
}
