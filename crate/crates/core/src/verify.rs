//! Independent checks of optimality certificates.
//!
//! A pair `(x, λ)` certifies that `x` globally minimizes the instance when
//! `Q(λ) ≻ 0`, `Q(λ)x = c` and `x ∈ {−1, 1}ⁿ`; the duality gap `f(x) − g(λ)`
//! is then zero.

use crate::error::Result;
use crate::generator::Certificate;
use crate::model::{objective_value, q_of_lambda, BqpInstance, DualState, Multipliers, SignVector};
use crate::numerics::{check_len, eigenvalue_tolerance, inertia, min_eigenvalue, norm_inf, Inertia, SymMatrix};

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    /// `Q(λ)` factorizes.
    pub pd_ok: bool,
    /// `‖Q(λ)x − c‖∞ ≤ tol (1 + ‖c‖∞)`.
    pub stationary_ok: bool,
    pub boolean_ok: bool,
    /// `f(x) − g(λ)`; `None` when `λ` is infeasible.
    pub gap: Option<f64>,
    pub gap_ok: bool,
    pub residual: f64,
    /// Signature of `Q` itself, for information only.
    pub inertia: Inertia,
    pub overall: bool,
}

pub fn verify_certificate(inst: &BqpInstance, cert: &Certificate, tol: f64) -> Result<VerifyReport> {
    check_len(inst.n(), cert.x.len())?;
    check_len(inst.n(), cert.lambda.len())?;
    let x = cert.x.to_f64();
    let state = DualState::new(inst, cert.lambda.clone())?;
    let pd_ok = state.is_feasible();

    let ql = q_of_lambda(inst.q(), &cert.lambda)?;
    let residual = ql
        .mul_vec(&x)?
        .iter()
        .zip(inst.c())
        .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()));
    let stationary_ok = residual <= tol * (1.0 + norm_inf(inst.c()));

    let boolean_ok = x.iter().all(|&v| v == 1.0 || v == -1.0);

    let f = objective_value(inst, &cert.x)?;
    let gap = state.dual_value(inst).ok().map(|g| f - g);
    let gap_ok = gap.is_some_and(|g| g.abs() <= tol * (1.0 + f.abs()));

    Ok(VerifyReport {
        pd_ok,
        stationary_ok,
        boolean_ok,
        gap,
        gap_ok,
        residual,
        inertia: inertia(inst.q()),
        overall: pd_ok && stationary_ok && boolean_ok && gap_ok,
    })
}

/// `f(x) − g(λ)`; fails with `Infeasible` outside the cone.
pub fn duality_gap(inst: &BqpInstance, x: &SignVector, lambda: &Multipliers) -> Result<f64> {
    let state = DualState::new(inst, lambda.clone())?;
    let g = state.dual_value(inst)?;
    Ok(objective_value(inst, x)? - g)
}

/// `[[Q(λ), c], [cᵀ, t]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurBlock {
    pub t: f64,
    pub block: SymMatrix,
}

impl SchurBlock {
    pub fn new(inst: &BqpInstance, lambda: &Multipliers, t: f64) -> Result<Self> {
        let block = q_of_lambda(inst.q(), lambda)?.bordered(inst.c(), t)?;
        Ok(Self { t, block })
    }
}

/// Tests the bordered matrix for positive semidefiniteness through its
/// smallest eigenvalue. For `Q(λ) ≻ 0` this holds exactly when
/// `t ≥ cᵀQ(λ)⁻¹c`.
pub fn schur_block_psd(inst: &BqpInstance, lambda: &Multipliers, t: f64) -> Result<(bool, f64)> {
    let sb = SchurBlock::new(inst, lambda, t)?;
    let e = min_eigenvalue(&sb.block)?;
    Ok((e >= -eigenvalue_tolerance(&sb.block), e))
}

/// Smallest feasible `t` for given `λ`: `cᵀQ(λ)⁻¹c`.
pub fn optimal_schur_t(inst: &BqpInstance, lambda: &Multipliers) -> Result<f64> {
    let state = DualState::new(inst, lambda.clone())?;
    let x = state.x_of_lambda().ok_or(crate::error::BqpError::Infeasible)?;
    Ok(crate::numerics::dot(inst.c(), x))
}
