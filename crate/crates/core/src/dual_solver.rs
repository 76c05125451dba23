//! Damped Newton ascent on the dual function, kept inside the positive
//! definite cone by backtracking, followed by primal recovery and rounding.

use crate::error::{BqpError, Result};
use crate::exec::Execution;
use crate::model::{objective_value, BqpInstance, DualState, Multipliers, SignVector};
use crate::numerics::{dot, norm_inf, spd_factorize_with};

/// Step halvings tried before a search direction is abandoned.
const MAX_BACKTRACKS: u32 = 60;
/// Shift doublings tried when searching for a feasible start.
const MAX_START_DOUBLINGS: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Stop once `‖∇g‖∞` falls to this level.
    pub grad_tol: f64,
    pub max_iter: usize,
    pub backtrack_factor: f64,
    pub armijo_coeff: f64,
    /// Allowed `| |xᵢ| − 1 |` when rounding the recovered primal.
    pub sign_tol: f64,
    /// Policy for the Hessian inverse and large factorizations.
    pub exec: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-8,
            max_iter: 100,
            backtrack_factor: 0.5,
            armijo_coeff: 1e-4,
            sign_tol: 1e-4,
            exec: Execution::default(),
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(BqpError::InvalidConfig(m.into()));
        if !(self.grad_tol > 0.0) {
            return bad("grad_tol must be positive");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive");
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return bad("backtrack_factor must lie in (0, 1)");
        }
        if !(self.armijo_coeff > 0.0 && self.armijo_coeff < 1.0) {
            return bad("armijo_coeff must lie in (0, 1)");
        }
        if !(self.sign_tol > 0.0 && self.sign_tol < 0.5) {
            return bad("sign_tol must lie in (0, 0.5)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Stationary, boolean and with zero duality gap: `x` is the global minimizer.
    Certified,
    /// Stationary but the recovered primal does not round to a certificate.
    StationaryNotBoolean,
    /// Iteration budget exhausted, or no ascent step could be found.
    MaxIterations,
    NoFeasibleStart,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Certified => "Certified",
            SolveStatus::StationaryNotBoolean => "StationaryNotBoolean",
            SolveStatus::MaxIterations => "MaxIterations",
            SolveStatus::NoFeasibleStart => "NoFeasibleStart",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepKind {
    Newton,
    Gradient,
}

/// State at the start of one iteration, plus the step taken from it.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub dual_value: f64,
    pub grad_norm: f64,
    pub step: Option<(StepKind, f64)>,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub lambda: Multipliers,
    /// Rounded primal, when every entry of `x_raw` is within `sign_tol` of ±1.
    pub x: Option<SignVector>,
    /// `Q(λ)⁻¹c` at the final multipliers; empty without a feasible start.
    pub x_raw: Vec<f64>,
    pub primal_value: Option<f64>,
    pub dual_value: Option<f64>,
    pub gap: Option<f64>,
    pub iterations: usize,
    pub status: SolveStatus,
    pub trace: Vec<IterationRecord>,
}

impl SolveReport {
    pub fn is_certified(&self) -> bool {
        self.status == SolveStatus::Certified
    }
}

/// `λ⁰ᵢ = Σⱼ |Qᵢⱼ| + 1`, which is strictly diagonally dominant. The shift is
/// doubled if the factorization still fails.
pub fn initial_point(inst: &BqpInstance) -> Result<DualState> {
    initial_point_with(inst, Execution::default())
}

pub(crate) fn initial_point_with(inst: &BqpInstance, exec: Execution) -> Result<DualState> {
    let sums = inst.q().abs_row_sums();
    let mut shift = 1.0;
    for _ in 0..=MAX_START_DOUBLINGS {
        let lambda = Multipliers::new(sums.iter().map(|s| s + shift).collect())?;
        let state = DualState::new_with(inst, lambda, exec)?;
        if state.is_feasible() {
            return Ok(state);
        }
        shift *= 2.0;
    }
    Err(BqpError::NoFeasibleStart {
        doublings: MAX_START_DOUBLINGS,
    })
}

/// `x = Q(λ)⁻¹c`.
pub fn recover_primal(inst: &BqpInstance, lambda: &Multipliers) -> Result<Vec<f64>> {
    let state = DualState::new(inst, lambda.clone())?;
    state.x_of_lambda().map(<[f64]>::to_vec).ok_or(BqpError::Infeasible)
}

/// Maps each entry to its sign, provided it lies within `sign_tol` of ±1.
/// Entries near zero are never rounded.
pub fn round_to_signs(x_raw: &[f64], sign_tol: f64) -> Result<SignVector> {
    if !(sign_tol > 0.0 && sign_tol < 0.5) {
        return Err(BqpError::InvalidConfig("sign_tol must lie in (0, 0.5)".into()));
    }
    let off: Vec<usize> = x_raw
        .iter()
        .enumerate()
        .filter(|(_, v)| !((v.abs() - 1.0).abs() <= sign_tol))
        .map(|(i, _)| i)
        .collect();
    if !off.is_empty() {
        return Err(BqpError::NotBoolean { indices: off });
    }
    SignVector::new(x_raw.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect())
}

/// Rounding noise in `g(λ) = −½cᵀx − ½Σλ`, from the magnitudes it cancels.
fn value_noise(inst: &BqpInstance, state: &DualState) -> f64 {
    let x = state.x_of_lambda().unwrap_or(&[]);
    let terms: f64 = inst.c().iter().zip(x).map(|(c, x)| (c * x).abs()).sum::<f64>()
        + state.lambda().as_slice().iter().map(|l| l.abs()).sum::<f64>();
    64.0 * f64::EPSILON * terms
}

/// Backtracks along `dir` until the trial point is feasible and satisfies
/// the Armijo condition. Returns the accepted state, its value and the step.
///
/// Once the predicted gain `slope` is below the rounding noise of `g`, the
/// Armijo test can no longer be decided; a feasible step that does not lose
/// more than the noise and shrinks `‖∇g‖∞` is accepted instead.
fn line_search(
    inst: &BqpInstance,
    state: &DualState,
    value: f64,
    grad_norm: f64,
    dir: &[f64],
    slope: f64,
    opts: &SolveOptions,
) -> Result<Option<(DualState, f64, f64)>> {
    let lam = state.lambda().as_slice();
    let noise = value_noise(inst, state);
    let mut t = 1.0;
    for _ in 0..=MAX_BACKTRACKS {
        let trial = Multipliers::new(lam.iter().zip(dir).map(|(l, d)| l + t * d).collect())?;
        let next = DualState::new_with(inst, trial, opts.exec)?;
        if next.is_feasible() {
            let v = next.dual_value(inst)?;
            if v >= value + opts.armijo_coeff * t * slope {
                return Ok(Some((next, v, t)));
            }
            if slope <= noise && v >= value - noise && norm_inf(&next.gradient()?) < grad_norm {
                return Ok(Some((next, v, t)));
            }
        }
        t *= opts.backtrack_factor;
    }
    Ok(None)
}

/// Newton direction from `(−H + εI) d = ∇g`, `ε = 1e-10 (1 + ‖H‖∞)`.
fn newton_direction(state: &DualState, grad: &[f64], exec: Execution) -> Result<Option<Vec<f64>>> {
    let neg_h = state.hessian(exec)?.scaled(-1.0);
    let mut ridge = 1e-10 * (1.0 + neg_h.norm_inf());
    for _ in 0..8 {
        let reg = neg_h.add_diagonal(&vec![ridge; grad.len()])?;
        if let Ok(f) = spd_factorize_with(&reg, exec) {
            return f.solve(grad).map(Some);
        }
        ridge *= 100.0;
    }
    Ok(None)
}

/// Maximizes the dual function from [`initial_point`].
pub fn solve_dual(inst: &BqpInstance, opts: &SolveOptions) -> Result<SolveReport> {
    opts.validate()?;
    let mut state = match initial_point_with(inst, opts.exec) {
        Ok(s) => s,
        Err(BqpError::NoFeasibleStart { .. }) => {
            return Ok(SolveReport {
                lambda: Multipliers::new(inst.q().abs_row_sums())?,
                x: None,
                x_raw: Vec::new(),
                primal_value: None,
                dual_value: None,
                gap: None,
                iterations: 0,
                status: SolveStatus::NoFeasibleStart,
                trace: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let mut value = state.dual_value(inst)?;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut stationary = false;

    loop {
        let grad = state.gradient()?;
        let grad_norm = norm_inf(&grad);
        trace.push(IterationRecord {
            dual_value: value,
            grad_norm,
            step: None,
        });
        if grad_norm <= opts.grad_tol {
            stationary = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }

        let mut accepted = None;
        if let Some(d) = newton_direction(&state, &grad, opts.exec)? {
            let slope = dot(&grad, &d);
            if slope > 0.0 {
                accepted = line_search(inst, &state, value, grad_norm, &d, slope, opts)?
                    .map(|(s, v, t)| (s, v, StepKind::Newton, t));
            }
        }
        if accepted.is_none() {
            let slope = dot(&grad, &grad);
            accepted = line_search(inst, &state, value, grad_norm, &grad, slope, opts)?
                .map(|(s, v, t)| (s, v, StepKind::Gradient, t));
        }
        let Some((next, next_value, kind, t)) = accepted else {
            break;
        };
        trace.last_mut().expect("pushed above").step = Some((kind, t));
        state = next;
        value = next_value;
        iterations += 1;
    }

    let x_raw = state
        .x_of_lambda()
        .expect("every iterate is feasible")
        .to_vec();
    let x = round_to_signs(&x_raw, opts.sign_tol).ok();
    let primal_value = x.as_ref().map(|x| objective_value(inst, x)).transpose()?;
    let gap = primal_value.map(|p| p - value);
    let status = match (stationary, primal_value, gap) {
        (false, _, _) => SolveStatus::MaxIterations,
        (true, Some(p), Some(g)) if g.abs() <= 1e-6 * (1.0 + p.abs()) => SolveStatus::Certified,
        (true, _, _) => SolveStatus::StationaryNotBoolean,
    };
    Ok(SolveReport {
        lambda: state.lambda().clone(),
        x,
        x_raw,
        primal_value,
        dual_value: Some(value),
        gap,
        iterations,
        status,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generator::{generate_instance, GenConfig};
    use crate::numerics::SymMatrix;
    use approx::assert_abs_diff_eq;

    fn one_by_one(q: f64, c: f64) -> BqpInstance {
        BqpInstance::new(SymMatrix::diagonal(&[q]), vec![c]).unwrap()
    }

    #[test]
    fn initial_point_is_strictly_dominant() {
        let (inst, _) = fixtures::example1();
        let st = initial_point(&inst).unwrap();
        assert_eq!(st.lambda().as_slice(), &[23.0, 50.0, 40.0, 29.0, 23.0]);
        assert!(st.is_feasible());

        let inst = BqpInstance::new(SymMatrix::zeros(3), vec![1.0, 0.0, 2.0]).unwrap();
        assert_eq!(initial_point(&inst).unwrap().lambda().as_slice(), &[1.0; 3]);

        let st = initial_point(&one_by_one(-5.0, 1.0)).unwrap();
        assert_eq!(st.lambda().as_slice(), &[6.0]);
        assert_eq!(st.factor().unwrap().lower(0, 0), 1.0);
    }

    #[test]
    fn round_to_signs_cases() {
        assert_eq!(
            round_to_signs(&[0.9999, -1.0001], 1e-3).unwrap().signs(),
            &[1, -1]
        );
        assert_eq!(
            round_to_signs(&[0.5, 1.0], 1e-3),
            Err(BqpError::NotBoolean { indices: vec![0] })
        );
        assert_eq!(
            round_to_signs(&[-1.0, 1.0, -1.0], 1e-4).unwrap().signs(),
            &[-1, 1, -1]
        );
        assert_eq!(
            round_to_signs(&[0.0, 1.0], 0.4),
            Err(BqpError::NotBoolean { indices: vec![0] })
        );
        assert!(round_to_signs(&[1.0], 0.5).is_err());
        assert!(round_to_signs(&[1.0], f64::NAN).is_err());
        assert!(round_to_signs(&[f64::NAN], 0.1).is_err());
    }

    #[test]
    fn options_validation() {
        assert!(SolveOptions::default().validate().is_ok());
        for bad in [
            SolveOptions { grad_tol: 0.0, ..Default::default() },
            SolveOptions { max_iter: 0, ..Default::default() },
            SolveOptions { backtrack_factor: 1.0, ..Default::default() },
            SolveOptions { armijo_coeff: 0.0, ..Default::default() },
            SolveOptions { sign_tol: 0.5, ..Default::default() },
        ] {
            assert!(bad.validate().is_err());
            assert!(solve_dual(&fixtures::example1().0, &bad).is_err());
        }
    }

    #[test]
    fn one_dimensional_closed_form() {
        // g(λ) = −1/(2λ) − λ/2 peaks at λ = 1.
        let inst = one_by_one(0.0, 1.0);
        let r = solve_dual(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Certified);
        assert_abs_diff_eq!(r.lambda.as_slice()[0], 1.0, epsilon = 1e-8);
        assert_eq!(r.x.unwrap().signs(), &[1]);
        assert_abs_diff_eq!(r.primal_value.unwrap(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.dual_value.unwrap(), -1.0, epsilon = 1e-12);

        assert_eq!(recover_primal(&inst, &Multipliers::new(vec![1.0]).unwrap()).unwrap(), vec![1.0]);
        assert_eq!(
            recover_primal(&inst, &Multipliers::new(vec![-1.0]).unwrap()),
            Err(BqpError::Infeasible)
        );
    }

    #[test]
    fn solves_example1() {
        let (inst, cert) = fixtures::example1();
        let r = solve_dual(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Certified);
        assert!(r.lambda.dist_inf(&fixtures::EXAMPLE1_REPORTED_LAMBDA) <= 1e-3);
        assert_eq!(r.x.as_ref(), Some(&cert.x));
        assert_eq!(r.primal_value, Some(-171.0));
        assert!(r.gap.unwrap().abs() <= 1e-6 * 172.0);
        for (xr, s) in r.x_raw.iter().zip(cert.x.signs()) {
            assert_abs_diff_eq!(*xr, *s as f64, epsilon = 1e-3);
        }
    }

    #[test]
    fn ascent_is_monotone_and_iterates_feasible() {
        for seed in 0..10 {
            let (inst, _) = generate_instance(&GenConfig::new(30, seed)).unwrap();
            let r = solve_dual(&inst, &SolveOptions::default()).unwrap();
            assert!(r.is_certified(), "seed {seed}: {:?}", r.status);
            for w in r.trace.windows(2) {
                assert!(w[1].dual_value >= w[0].dual_value - 1e-12 * w[0].dual_value.abs());
            }
            assert_eq!(r.trace.len(), r.iterations + 1);
        }
    }

    #[test]
    fn stops_at_iteration_budget() {
        let (inst, _) = fixtures::example3();
        let opts = SolveOptions { max_iter: 1, ..Default::default() };
        let r = solve_dual(&inst, &opts).unwrap();
        assert_eq!(r.status, SolveStatus::MaxIterations);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn non_boolean_stationary_point_is_not_certified() {
        // Q = 0, c = (2, 0): the second coordinate has xᵢ ≡ 0, so its gradient
        // entry is stuck at −½ and the solver never becomes stationary.
        let inst = BqpInstance::new(SymMatrix::zeros(2), vec![2.0, 0.0]).unwrap();
        let r = solve_dual(&inst, &SolveOptions { max_iter: 20, ..Default::default() }).unwrap();
        assert_ne!(r.status, SolveStatus::Certified);
        assert!(r.x.is_none());
    }

    #[test]
    fn scaling_the_instance_scales_values_not_signs() {
        let (inst, _) = generate_instance(&GenConfig::new(12, 5)).unwrap();
        let base = solve_dual(&inst, &SolveOptions::default()).unwrap();
        for s in [0.25, 3.0, 40.0] {
            let r = solve_dual(&inst.scaled(s), &SolveOptions::default()).unwrap();
            assert!(r.is_certified());
            assert_eq!(r.x, base.x);
            let (p, d) = (r.primal_value.unwrap(), r.dual_value.unwrap());
            assert_abs_diff_eq!(p, s * base.primal_value.unwrap(), epsilon = 1e-9 * (1.0 + p.abs()));
            assert_abs_diff_eq!(d, s * base.dual_value.unwrap(), epsilon = 1e-6 * (1.0 + d.abs()));
        }
    }
}
