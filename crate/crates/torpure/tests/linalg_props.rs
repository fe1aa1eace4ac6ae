//! Property suites and reference fixtures for the exact linear algebra.

mod common;

use common::*;
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use torpure::linalg::{
    gcd_maximal_minors, hnf, integer_kernel, snf, solve_integer, IntMatrix, Lattice,
};

fn small_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c)
            .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j])))
    })
}

fn fixed_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-bound..=bound, rows * cols)
        .prop_map(move |v| IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(v[i * cols + j])))
}

proptest! {
    #[test]
    fn snf_contract_holds(m in small_matrix(6, 8, 20)) {
        let d = snf(&m);
        prop_assert_eq!(d.u.mul(&m).mul(&d.w), d.s.clone());
        prop_assert_eq!(d.u.det().abs(), BigInt::one());
        prop_assert_eq!(d.w.det().abs(), BigInt::one());
        let diag = d.diagonal();
        for i in 0..diag.len() {
            prop_assert!(!diag[i].is_negative());
            if i + 1 < diag.len() && !diag[i].is_zero() {
                prop_assert!(diag[i + 1].mod_floor(&diag[i]).is_zero());
            }
        }
    }

    #[test]
    fn snf_diagonal_matches_determinantal_divisor_oracle(m in small_matrix(4, 6, 9)) {
        // independent oracle: the k-th determinantal divisor is the gcd of
        // all k x k minors, enumerated directly
        let diag = snf(&m).diagonal();
        let mut previous = BigInt::one();
        for k in 1..=m.rows().min(m.cols()) {
            let mut g = BigInt::zero();
            for rows in (0..m.rows()).combinations(k) {
                for cols in (0..m.cols()).combinations(k) {
                    let det = m.select_rows(&rows).select_columns(&cols).det();
                    g = g.gcd(&det);
                }
            }
            // product of the first k invariant factors equals the divisor
            let product: BigInt = diag.iter().take(k).product();
            prop_assert_eq!(product.abs(), g.clone());
            if !g.is_zero() {
                previous = g;
            }
            let _ = &previous;
        }
    }

    #[test]
    fn hnf_canonical_and_preserves_row_space(m in small_matrix(5, 5, 9)) {
        let d = hnf(&m);
        prop_assert_eq!(d.u.mul(&m), d.h.clone());
        prop_assert_eq!(d.u.det().abs(), BigInt::one());
        // canonical means idempotent
        prop_assert_eq!(hnf(&d.h).h, d.h.clone());
        // row spaces agree: each row of m is in the lattice of h and the
        // nonzero rows of h are integer combinations of rows of m
        let lat_m = Lattice::from_rows(&m);
        let lat_h = Lattice::from_rows(&d.h);
        prop_assert_eq!(lat_m, lat_h);
    }

    #[test]
    fn kernel_annihilates_and_is_saturated(m in small_matrix(4, 6, 9)) {
        let k = integer_kernel(&m);
        prop_assert_eq!(k.rank(), m.cols() - m.rank());
        for i in 0..k.rank() {
            let image = m.mul_vec(k.basis().row(i));
            prop_assert!(image.iter().all(|x| x.is_zero()));
        }
        prop_assert!(k.is_saturated());
    }

    #[test]
    fn intersection_laws(
        a in fixed_matrix(2, 3, 6),
        b in fixed_matrix(2, 3, 6),
        c in fixed_matrix(2, 3, 6),
    ) {
        let la = Lattice::from_rows(&a);
        let lb = Lattice::from_rows(&b);
        let lc = Lattice::from_rows(&c);
        let ab = la.intersection(&lb).unwrap();
        let ba = lb.intersection(&la).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(la.intersection(&la).unwrap(), la.clone());
        let ab_c = ab.intersection(&lc).unwrap();
        let a_bc = la.intersection(&lb.intersection(&lc).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn membership_roundtrip(m in small_matrix(3, 4, 6), coeffs in proptest::collection::vec(-5i64..=5, 3)) {
        let lat = Lattice::from_rows(&m);
        // a known member: coefficient combination of the basis
        let mut x = vec![BigInt::zero(); m.cols()];
        for i in 0..lat.rank() {
            for (j, e) in lat.basis().row(i).iter().enumerate() {
                x[j] += BigInt::from(coeffs[i % coeffs.len()]) * e;
            }
        }
        let coords = lat.membership(&x);
        prop_assert!(coords.is_some());
        let coords = coords.unwrap();
        let mut back = vec![BigInt::zero(); m.cols()];
        for i in 0..lat.rank() {
            for (j, e) in lat.basis().row(i).iter().enumerate() {
                back[j] += &coords[i] * e;
            }
        }
        prop_assert_eq!(back, x);
    }

    #[test]
    fn minor_gcd_matches_enumeration_and_is_unimodular_invariant(m in small_matrix(3, 5, 6)) {
        let k = m.rows().min(m.cols());
        let got = gcd_maximal_minors(&m, k);
        // direct enumeration oracle
        let mut g = BigInt::zero();
        for rows in (0..m.rows()).combinations(k) {
            for cols in (0..m.cols()).combinations(k) {
                g = g.gcd(&m.select_rows(&rows).select_columns(&cols).det());
            }
        }
        prop_assert_eq!(got.clone(), g);
        // invariance under an elementary unimodular row operation
        let mut u = IntMatrix::identity(m.rows());
        if m.rows() > 1 {
            u.set(0, 1, BigInt::from(3));
        }
        prop_assert_eq!(gcd_maximal_minors(&u.mul(&m), k), got);
    }

    #[test]
    fn solve_integer_roundtrip(a in fixed_matrix(3, 4, 6), x in proptest::collection::vec(-6i64..=6, 4)) {
        let xv = bivec(&x);
        let b = a.mul_vec(&xv);
        let got = solve_integer(&a, &b);
        prop_assert!(got.is_some());
        prop_assert_eq!(a.mul_vec(&got.unwrap()), b);
    }
}

#[test]
fn random_rank2_sublattice_intersections_match_box_oracle() {
    // bounded-box membership oracle over Z^3
    let mut rng = torpure::util::SplitMix64::new(99);
    let mut done = 0;
    while done < 12 {
        let a = IntMatrix::from_fn(2, 3, |_, _| BigInt::from(rng.next_i64(-3, 3)));
        let b = IntMatrix::from_fn(2, 3, |_, _| BigInt::from(rng.next_i64(-3, 3)));
        let la = Lattice::from_rows(&a);
        let lb = Lattice::from_rows(&b);
        if la.rank() != 2 || lb.rank() != 2 {
            continue;
        }
        let inter = la.intersection(&lb).unwrap();
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                for z in -6i64..=6 {
                    let p = bivec(&[x, y, z]);
                    let in_both = la.contains(&p) && lb.contains(&p);
                    assert_eq!(inter.contains(&p), in_both, "({x},{y},{z})");
                }
            }
        }
        done += 1;
    }
}

#[test]
fn reference_smith_form_of_twisted_matrix() {
    let d = snf(&v_impuro().as_matrix());
    assert_eq!(d.diagonal(), bivec(&[1, 1, 2]));
    let d = snf(&v_hat().as_matrix());
    assert_eq!(d.diagonal(), bivec(&[1, 1, 1]));
}

#[test]
fn kernel_duality_between_rays_and_weights() {
    // kernel of the covering matrix is the weight row space, and vice versa
    let vhat = v_hat();
    let q = q_reference();
    assert_eq!(integer_kernel(&vhat.as_matrix()), Lattice::from_rows(&q));
    assert_eq!(integer_kernel(&q), Lattice::from_rows(&vhat.as_matrix()));
}

#[test]
fn hnf_membership_preserved() {
    let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3], &[1, 1]]);
    let d = hnf(&m);
    let lat = Lattice::from_rows(&d.h);
    assert!(lat.contains(&bivec(&[1, 1])));
    assert!(lat.contains(&bivec(&[2, 0])));
    assert!(lat.contains(&bivec(&[0, 3])));
    assert_eq!(lat, Lattice::full(2));

    let q = q_reference();
    assert_eq!(Lattice::from_rows(&hnf(&q).h), Lattice::from_rows(&q));
}

#[test]
fn covering_map_solution_is_the_diagonal_twist() {
    // solving covering^T * map^T = twisted^T column by column recovers the
    // diagonal twist exactly
    let vhat_t = v_hat().as_matrix().transpose();
    let v = v_impuro().as_matrix();
    let expected = [[1i64, 0, 0], [0, 1, 0], [0, 0, 2]];
    for i in 0..3 {
        let x = solve_integer(&vhat_t, &v.row_vec(i)).unwrap();
        assert_eq!(x, bivec(&expected[i]));
    }
}

#[test]
fn chained_difference_vector_membership() {
    // the difference vector (20y, -30y, 0, -5y, 0) lies in the row lattice of
    // the twisted matrix exactly when y is even
    let rows = Lattice::from_rows(&v_puro().as_matrix());
    let at = |y: i64| bivec(&[20 * y, -30 * y, 0, -5 * y, 0]);
    let coords = rows.membership(&at(2));
    assert!(coords.is_some());
    assert!(rows.membership(&at(1)).is_none());
    // while (20y, -30y, -3y, 0, 0) lies in it for every y
    let other = |y: i64| bivec(&[20 * y, -30 * y, -3 * y, 0, 0]);
    assert!(rows.contains(&other(1)));
    assert!(rows.contains(&other(2)));
    // zero vector membership with empty coordinates in the zero lattice
    assert_eq!(
        Lattice::zero(5).membership(&bivec(&[0, 0, 0, 0, 0])),
        Some(vec![])
    );
}
