//! Three small instances with known planted certificates (5, 10 and 15
//! variables). The multipliers are the integer row sums; the published
//! numerical solutions of these instances agree with them to about 3e-3.

use crate::generator::{multipliers_from_rowsums, Certificate};
use crate::model::{BqpInstance, SignVector};
use crate::numerics::SymMatrix;

fn build(rows: &[&[i32]], c: &[i32], x: &[i8]) -> (BqpInstance, Certificate) {
    let rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as f64).collect())
        .collect();
    let q = SymMatrix::from_rows(&rows).expect("fixture matrix is symmetric");
    let lambda = multipliers_from_rowsums(&q, 0.0);
    let inst = BqpInstance::new(q, c.iter().map(|&v| v as f64).collect())
        .expect("fixture dimensions agree");
    let x = SignVector::new(x.to_vec()).expect("fixture signs are ±1");
    (inst, Certificate { x, lambda })
}

pub fn example1() -> (BqpInstance, Certificate) {
    build(
        &[
            &[-4, -3, 6, -3, -6],
            &[-3, 13, -25, -5, 3],
            &[6, -25, -2, -5, -1],
            &[-3, -5, -5, -8, -7],
            &[-6, 3, -1, -7, -5],
        ],
        &[-18, 92, -62, -10, 0],
        &[-1, 1, -1, -1, -1],
    )
}

pub fn example2() -> (BqpInstance, Certificate) {
    build(
        &[
            &[-6, -9, -7, -3, 2, -2, -12, -11, 8, -6],
            &[-9, 14, -4, 3, -2, -4, 6, 23, 8, 3],
            &[-7, -4, 1, 21, -10, 2, 6, -13, -9, 4],
            &[-3, 3, 21, -18, -2, 7, -2, 16, 1, 3],
            &[2, -2, -10, -2, 10, 8, -11, -3, -2, -2],
            &[-2, -4, 2, 7, 8, 0, -10, -10, -2, -7],
            &[-12, 6, 6, -2, -11, -10, -7, -10, 3, 0],
            &[-11, 23, -13, 16, -3, -10, -10, 6, -8, 10],
            &[8, 8, -9, 1, -2, -2, 3, -8, -10, -5],
            &[-6, 3, 4, 3, -2, -7, 0, 10, -5, -9],
        ],
        &[24, -84, 72, -18, -72, 16, 38, 54, -66, 42],
        &[1, -1, 1, -1, -1, 1, 1, 1, -1, 1],
    )
}

pub fn example3() -> (BqpInstance, Certificate) {
    build(
        &[
            &[11, 2, -10, 15, 21, -7, -8, 6, -3, 11, 2, -1, 3, -2, -1],
            &[2, 6, 7, -5, 10, -14, -1, -8, 3, 6, 6, 0, -7, 1, -2],
            &[-10, 7, 21, 12, 13, -9, -1, 2, -5, 9, 2, -1, -2, 4, 8],
            &[15, -5, 12, 12, -7, 0, -3, -17, -3, 6, -1, -1, -1, 6, -5],
            &[21, 10, 13, -7, 3, 6, 3, -1, -10, 0, -9, -1, -4, -7, -2],
            &[-7, -14, -9, 0, 6, 5, 1, 7, 3, 2, -1, 3, -4, 3, 8],
            &[-8, -1, -1, -3, 3, 1, -5, -5, 3, 6, 17, -13, 6, 14, -10],
            &[6, -8, 2, -17, -1, 7, -5, -2, -6, 1, 12, 0, 5, 5, -4],
            &[-3, 3, -5, -3, -10, 3, 3, -6, -26, 3, -4, 7, 13, -4, -2],
            &[11, 6, 9, 6, 0, 2, 6, 1, 3, 13, -11, 10, -12, -13, -11],
            &[2, 6, 2, -1, -9, -1, 17, 12, -4, -11, -1, 12, -9, 7, 5],
            &[-1, 0, -1, -1, -1, 3, -13, 0, 7, 10, 12, -1, -1, 5, 9],
            &[3, -7, -2, -1, -4, -4, 6, 5, 13, -12, -9, -1, -15, 6, -1],
            &[-2, 1, 4, 6, -7, 3, 14, 5, -4, -13, 7, 5, 6, 15, 10],
            &[-1, -2, 8, -5, -2, 8, -10, -4, -2, -11, 5, 9, -1, 10, 8],
        ],
        &[-140, 86, -118, -114, -134, -72, 92, -100, 120, 98, -80, 70, 90, 120, 78],
        &[-1, 1, -1, -1, -1, -1, 1, -1, 1, 1, -1, 1, 1, 1, 1],
    )
}

/// Published dual solutions, rounded to four decimals.
pub const EXAMPLE1_REPORTED_LAMBDA: [f64; 5] = [21.9996, 48.9999, 39.0000, 27.9996, 21.9998];

pub const EXAMPLE2_REPORTED_LAMBDA: [f64; 10] = [
    66.0010, 75.9997, 76.9970, 76.0010, 51.9993, 51.9988, 66.9988, 109.9979, 55.9985, 48.9995,
];

pub const EXAMPLE3_REPORTED_LAMBDA: [f64; 15] = [
    102.9966, 77.9974, 105.9976, 93.9972, 96.9967, 72.9976, 95.9974, 80.9970, 94.9967, 113.9981,
    98.9980, 64.9976, 88.9972, 101.9973, 85.9979,
];
