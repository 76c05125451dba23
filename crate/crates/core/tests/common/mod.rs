//! Reference computations that share no code with the library.

#![allow(dead_code)]

use bqp_core::BqpInstance;

pub fn dense(inst: &BqpInstance) -> Vec<Vec<f64>> {
    inst.q().rows().map(|r| r.to_vec()).collect()
}

/// Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() < 1e-300 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let m = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= m * a[k][j];
            }
            b[i] -= m * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

pub fn q_lambda(inst: &BqpInstance, lambda: &[f64]) -> Vec<Vec<f64>> {
    let mut a = dense(inst);
    for (i, l) in lambda.iter().enumerate() {
        a[i][i] += l;
    }
    a
}

/// Smallest eigenvalue by cyclic Jacobi rotations.
pub fn jacobi_min_eig(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

/// `f(x)` summed term by term.
pub fn objective(inst: &BqpInstance, x: &[f64]) -> f64 {
    let n = x.len();
    let mut v = 0.0;
    for i in 0..n {
        for j in 0..n {
            v += 0.5 * inst.q().get(i, j) * x[i] * x[j];
        }
        v -= inst.c()[i] * x[i];
    }
    v
}

/// `−½cᵀQ(λ)⁻¹c − ½Σλ`, or `None` when `Q(λ)` is not positive definite.
pub fn dual(inst: &BqpInstance, lambda: &[f64]) -> Option<f64> {
    let a = q_lambda(inst, lambda);
    if jacobi_min_eig(a.clone()) <= 0.0 {
        return None;
    }
    let x = gauss_solve(a, inst.c().to_vec())?;
    let cx: f64 = inst.c().iter().zip(&x).map(|(a, b)| a * b).sum();
    Some(-0.5 * cx - 0.5 * lambda.iter().sum::<f64>())
}

/// Every point of `{−1, 1}ⁿ`, variable 0 varying slowest.
pub fn all_sign_vectors(n: usize) -> impl Iterator<Item = Vec<f64>> {
    (0u64..1 << n).map(move |m| {
        (0..n)
            .map(|j| if m >> (n - 1 - j) & 1 == 1 { 1.0 } else { -1.0 })
            .collect()
    })
}
