//! Shared fixtures: the reference matrices, fans and expected values used
//! across the integration suites.

#![allow(dead_code)]

use num_bigint::BigInt;
use torpure::fans::{Fan, FanMatrix};
use torpure::linalg::IntMatrix;

/// Fan matrix of the universal covering (5 rays in dimension 3).
pub fn v_hat() -> FanMatrix {
    FanMatrix::from_i64(
        3,
        &[
            &[1, 1, 1],
            &[-1, -1, 1],
            &[2, -1, 1],
            &[-3, 2, 1],
            &[-1, -1, -5],
        ],
    )
}

/// Twisted fan matrix with torsion Z/2 (third coordinate doubled).
pub fn v_impuro() -> FanMatrix {
    FanMatrix::from_i64(
        3,
        &[
            &[1, 1, 2],
            &[-1, -1, 2],
            &[2, -1, 2],
            &[-3, 2, 2],
            &[-1, -1, -10],
        ],
    )
}

/// Twisted fan matrix with torsion Z/2 (second coordinate doubled).
pub fn v_puro() -> FanMatrix {
    FanMatrix::from_i64(
        3,
        &[
            &[1, 2, 1],
            &[-1, -2, 1],
            &[2, -2, 1],
            &[-3, 4, 1],
            &[-1, -2, -5],
        ],
    )
}

/// The reference weight matrix shared by all three fan matrices above.
pub fn q_reference() -> IntMatrix {
    IntMatrix::from_i64(&[&[3, 1, 10, 6, 4], &[3, 2, 0, 0, 1]])
}

/// Torsion matrix adapted to `v_impuro` (residues mod 2).
pub fn gamma_impuro() -> IntMatrix {
    IntMatrix::from_i64(&[&[0, 1, 1, 1, 0]])
}

/// Torsion matrix adapted to `v_puro` (residues mod 2).
pub fn gamma_puro() -> IntMatrix {
    IntMatrix::from_i64(&[&[0, 0, 0, 1, 1]])
}

pub fn sigma_1_cones() -> Vec<Vec<usize>> {
    vec![
        vec![1, 2, 3],
        vec![1, 2, 4],
        vec![2, 4, 5],
        vec![1, 4, 5],
        vec![2, 3, 5],
        vec![1, 3, 5],
    ]
}

pub fn sigma_2_cones() -> Vec<Vec<usize>> {
    vec![
        vec![1, 3, 4],
        vec![2, 3, 4],
        vec![2, 4, 5],
        vec![1, 4, 5],
        vec![2, 3, 5],
        vec![1, 3, 5],
    ]
}

pub fn fan_on(matrix: &FanMatrix, cones: &[Vec<usize>]) -> Fan {
    Fan::from_index_lists(matrix.clone(), cones).expect("valid fan data")
}

/// Displayed Cartier basis for the impure twist with the first fan.
pub fn cartier_rows_impuro() -> IntMatrix {
    IntMatrix::from_i64(&[
        &[40, 0, 0, 0, 0],
        &[0, 60, 0, 0, 0],
        &[0, 0, 3, 0, 0],
        &[-24, -24, 0, 1, 0],
        &[-9, -47, -2, 0, 1],
    ])
}

/// Displayed Cartier basis for the pure twist with the first fan.
pub fn cartier_rows_puro() -> IntMatrix {
    IntMatrix::from_i64(&[
        &[40, 0, 0, 0, 0],
        &[0, 60, 0, 0, 0],
        &[-20, -30, 3, 0, 0],
        &[-8, -48, 0, 2, 0],
        &[15, 37, -2, -1, 1],
    ])
}

/// 4-dimensional fan matrix of the non-completable example (7 rays).
pub fn v_noncompletable() -> FanMatrix {
    FanMatrix::from_i64(
        4,
        &[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[0, -1, -1, -1],
            &[-1, -1, 0, -1],
            &[1, 2, 1, 1],
        ],
    )
}

pub fn sigma_noncompletable_cones() -> Vec<Vec<usize>> {
    vec![vec![2, 3, 4, 6], vec![2, 4, 5, 7], vec![1, 4, 5, 6]]
}

/// Projective plane: three primitive rays in the plane.
pub fn p2_matrix() -> FanMatrix {
    FanMatrix::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]])
}

pub fn p2_fan() -> Fan {
    fan_on(&p2_matrix(), &[vec![1, 2], vec![2, 3], vec![1, 3]])
}

/// Weighted plane with weight vector (1, 2, 1).
pub fn p121_matrix() -> FanMatrix {
    FanMatrix::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -2]])
}

pub fn p121_fan() -> Fan {
    fan_on(&p121_matrix(), &[vec![1, 2], vec![2, 3], vec![1, 3]])
}

pub fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn bivec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}
