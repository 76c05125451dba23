//! Problem data and the closed-form Lagrangian dual.
//!
//! The primal problem is
//!
//! ```text
//! minimize  f(x) = ½ xᵀQx − cᵀx   over x ∈ {−1, 1}ⁿ
//! ```
//!
//! Relaxing each constraint `½(xᵢ² − 1) = 0` with a multiplier `λᵢ` gives
//! `Q(λ) = Q + diag(λ)` and, wherever `Q(λ)` is positive definite, the dual
//! function
//!
//! ```text
//! g(λ) = −½ cᵀQ(λ)⁻¹c − ½ Σᵢ λᵢ
//! ```
//!
//! which is smooth and concave on that open cone. Everything here is
//! evaluated through one Cholesky factorization cached in [`DualState`].

use std::fmt;

use crate::error::{BqpError, Result};
use crate::exec::Execution;
use crate::numerics::{check_len, dot, spd_factorize_with, SpdFactor, SymMatrix};

/// Quadratic term `Q` and linear term `c` of a boolean quadratic program.
#[derive(Debug, Clone, PartialEq)]
pub struct BqpInstance {
    q: SymMatrix,
    c: Vec<f64>,
}

impl BqpInstance {
    pub fn new(q: SymMatrix, c: Vec<f64>) -> Result<Self> {
        check_len(q.n(), c.len())?;
        if let Some(index) = c.iter().position(|v| !v.is_finite()) {
            return Err(BqpError::NonFinite { index });
        }
        Ok(Self { q, c })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn q(&self) -> &SymMatrix {
        &self.q
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Generated instances always have `c ≠ 0`; loaded ones may not.
    pub fn has_zero_linear_term(&self) -> bool {
        self.c.iter().all(|&v| v == 0.0)
    }

    /// `(sQ, sc)`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            q: self.q.scaled(s),
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }
}

/// A point of `{−1, 1}ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(index) = entries.iter().position(|&s| s != 1 && s != -1) {
            return Err(BqpError::NotSign {
                index,
                value: entries[index] as f64,
            });
        }
        Ok(Self(entries))
    }

    /// Accepts only values that are exactly `−1.0` or `1.0`.
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        values
            .iter()
            .enumerate()
            .map(|(index, &v)| {
                if v == 1.0 {
                    Ok(1)
                } else if v == -1.0 {
                    Ok(-1)
                } else {
                    Err(BqpError::NotSign { index, value: v })
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Bit `j` of `mask` set means `xⱼ = +1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self((0..n).map(|j| if mask >> j & 1 == 1 { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&s| s as f64).collect()
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] = -v[i];
        Self(v)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// One multiplier per constraint `½(xᵢ² − 1) = 0`. No sign restriction.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers(Vec<f64>);

impl Multipliers {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(BqpError::NonFinite { index });
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn dist_inf(&self, other: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(other)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()))
    }
}

/// `f(x) = ½xᵀQx − cᵀx`.
pub fn objective_value(inst: &BqpInstance, x: &SignVector) -> Result<f64> {
    check_len(inst.n(), x.len())?;
    let xf = x.to_f64();
    Ok(0.5 * inst.q.quad_form(&xf)? - dot(&inst.c, &xf))
}

/// `Q + diag(λ)`.
pub fn q_of_lambda(q: &SymMatrix, lambda: &Multipliers) -> Result<SymMatrix> {
    q.add_diagonal(lambda.as_slice())
}

/// `L(x, λ) = ½xᵀQ(λ)x − cᵀx − ½λᵀe` for any real `x`.
pub fn lagrangian_value(inst: &BqpInstance, x: &[f64], lambda: &Multipliers) -> Result<f64> {
    check_len(inst.n(), x.len())?;
    check_len(inst.n(), lambda.len())?;
    let ql = q_of_lambda(&inst.q, lambda)?;
    Ok(0.5 * ql.quad_form(x)? - dot(&inst.c, x) - 0.5 * lambda.sum())
}

/// A multiplier vector together with its feasibility verdict and, when
/// feasible, the factorization of `Q(λ)` and the solution of `Q(λ)x = c`.
#[derive(Debug, Clone)]
pub struct DualState {
    lambda: Multipliers,
    factor: Option<SpdFactor>,
    x_of_lambda: Option<Vec<f64>>,
}

impl DualState {
    /// Factorizes `Q(λ)`; infeasibility is recorded, not returned as an error.
    pub fn new(inst: &BqpInstance, lambda: Multipliers) -> Result<Self> {
        Self::new_with(inst, lambda, Execution::default())
    }

    pub fn new_with(inst: &BqpInstance, lambda: Multipliers, exec: Execution) -> Result<Self> {
        check_len(inst.n(), lambda.len())?;
        let ql = q_of_lambda(&inst.q, &lambda)?;
        match spd_factorize_with(&ql, exec) {
            Ok(factor) => {
                let x = factor.solve(&inst.c)?;
                Ok(Self {
                    lambda,
                    factor: Some(factor),
                    x_of_lambda: Some(x),
                })
            }
            Err(BqpError::NotPositiveDefinite { .. }) => Ok(Self {
                lambda,
                factor: None,
                x_of_lambda: None,
            }),
            Err(e) => Err(e),
        }
    }

    pub fn lambda(&self) -> &Multipliers {
        &self.lambda
    }

    pub fn is_feasible(&self) -> bool {
        self.factor.is_some()
    }

    pub fn factor(&self) -> Option<&SpdFactor> {
        self.factor.as_ref()
    }

    /// `Q(λ)⁻¹c`, when `λ` is feasible.
    pub fn x_of_lambda(&self) -> Option<&[f64]> {
        self.x_of_lambda.as_deref()
    }

    fn x(&self) -> Result<&[f64]> {
        self.x_of_lambda().ok_or(BqpError::Infeasible)
    }

    /// `g(λ) = −½cᵀx(λ) − ½Σλ`.
    pub fn dual_value(&self, inst: &BqpInstance) -> Result<f64> {
        let x = self.x()?;
        check_len(inst.n(), x.len())?;
        Ok(-0.5 * dot(&inst.c, x) - 0.5 * self.lambda.sum())
    }

    /// `∂g/∂λᵢ = ½(xᵢ² − 1)`.
    pub fn gradient(&self) -> Result<Vec<f64>> {
        Ok(self.x()?.iter().map(|v| 0.5 * (v * v - 1.0)).collect())
    }

    /// `∂²g/∂λᵢ∂λⱼ = −xᵢ [Q(λ)⁻¹]ᵢⱼ xⱼ`.
    pub fn hessian(&self, exec: Execution) -> Result<SymMatrix> {
        let x = self.x()?;
        let inv = self.factor.as_ref().ok_or(BqpError::Infeasible)?.inverse(exec);
        Ok(SymMatrix::from_lower_fn(x.len(), |i, j| {
            -x[i] * inv.get(i, j) * x[j]
        }))
    }
}

/// Checks `λ ∈ S⁺` by attempting to factorize `Q(λ)`.
pub fn is_dual_feasible(inst: &BqpInstance, lambda: &Multipliers) -> Result<DualState> {
    DualState::new(inst, lambda.clone())
}

pub fn dual_value(state: &DualState, inst: &BqpInstance) -> Result<f64> {
    state.dual_value(inst)
}

pub fn dual_gradient(state: &DualState) -> Result<Vec<f64>> {
    state.gradient()
}

pub fn dual_hessian(state: &DualState) -> Result<SymMatrix> {
    state.hessian(Execution::default())
}
