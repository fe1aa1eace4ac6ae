//! Hermite and Smith normal forms with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form `h = u * m` with `u` unimodular.
///
/// Pivots are positive, entries above a pivot are reduced into `[0, pivot)`,
/// pivot columns strictly increase and zero rows sit at the bottom, so `h` is
/// a canonical representative of the row lattice of `m`.
pub struct HnfDecomposition {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
}

pub fn hnf(m: &IntMatrix) -> HnfDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !h.at(i, c).is_zero()) else {
            continue;
        };
        h.swap_rows(r, p);
        u.swap_rows(r, p);
        // gcd cascade: clear the column below the pivot row
        for i in r + 1..rows {
            while !h.at(i, c).is_zero() {
                let q = h.at(r, c) / h.at(i, c);
                h.row_submul(r, i, &q);
                u.row_submul(r, i, &q);
                h.swap_rows(r, i);
                u.swap_rows(r, i);
            }
        }
        if h.at(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.at(i, c).div_floor(h.at(r, c));
            h.row_submul(i, r, &q);
            u.row_submul(i, r, &q);
        }
        r += 1;
    }
    HnfDecomposition { h, u, rank: r }
}

/// Smith normal form `u * m * w = s` with `u`, `w` unimodular.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub w: IntMatrix,
}

impl SmithDecomposition {
    /// The full diagonal of `s` (length `min(rows, cols)`), including zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.at(i, i).clone())
            .collect()
    }

    /// The nonzero diagonal entries, i.e. the invariant factors of the input.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }
}

/// Computes the Smith normal form of `m`.
///
/// The diagonal is nonnegative and each entry divides the next, which makes
/// the form unique. Both transforms are accumulated from elementary
/// operations so `|det u| = |det w| = 1`.
pub fn snf(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut w = IntMatrix::identity(cols);
    let t = rows.min(cols);

    for p in 0..t {
        loop {
            // smallest-magnitude nonzero entry of the trailing submatrix
            let mut pivot: Option<(usize, usize)> = None;
            for i in p..rows {
                for j in p..cols {
                    if s.at(i, j).is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((bi, bj)) if s.at(bi, bj).abs() <= s.at(i, j).abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(s, u, w);
            };
            s.swap_rows(p, pi);
            u.swap_rows(p, pi);
            s.swap_cols(p, pj);
            w.swap_cols(p, pj);

            let mut dirty = false;
            for i in p + 1..rows {
                if !s.at(i, p).is_zero() {
                    let q = s.at(i, p) / s.at(p, p);
                    s.row_submul(i, p, &q);
                    u.row_submul(i, p, &q);
                    if !s.at(i, p).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in p + 1..cols {
                if !s.at(p, j).is_zero() {
                    let q = s.at(p, j) / s.at(p, p);
                    s.col_submul(j, p, &q);
                    w.col_submul(j, p, &q);
                    if !s.at(p, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing submatrix for the
            // divisibility chain; fold an offending row in and retry
            let offender = (p + 1..rows)
                .find(|&i| (p + 1..cols).any(|j| !s.at(i, j).mod_floor(s.at(p, p)).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    s.row_submul(p, i, &minus_one);
                    u.row_submul(p, i, &minus_one);
                }
                None => break,
            }
        }
    }
    finish(s, u, w)
}

fn finish(mut s: IntMatrix, mut u: IntMatrix, w: IntMatrix) -> SmithDecomposition {
    for p in 0..s.rows().min(s.cols()) {
        if s.at(p, p).is_negative() {
            s.negate_row(p);
            u.negate_row(p);
        }
    }
    SmithDecomposition { u, s, w }
}
