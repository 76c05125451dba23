//! Random instances with a planted global minimizer.
//!
//! Pick `Q` at random, choose `λ` so that `Q + diag(λ)` is diagonally
//! dominant, pick a random sign vector `x` and set `c = (Q + diag(λ))x`.
//! Then `λ` is a stationary point of the dual inside the positive definite
//! cone and `x` is the unique global minimizer of the primal.
//!
//! # Random stream
//!
//! Attempt `k` (0-based) draws from `ChaCha20Rng::seed_from_u64(seed)` with
//! its stream set to `k`. Within one attempt the generator consumes, in order:
//! `n·n` standard normals (row-major `G`) from `rand_distr::StandardNormal`
//! (ziggurat method), then `n` fair booleans for the signs of `x`
//! (`true ↦ +1`). Output is reproducible for a fixed seed and crate version.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{BqpError, Result};
use crate::model::{q_of_lambda, BqpInstance, Multipliers, SignVector};
use crate::numerics::{spd_factorize, SymMatrix};

/// Redraws of `Q` tried before falling back to an extra unit of margin.
pub const MAX_REDRAWS: u64 = 100;

/// Identifies the sampling scheme in instance metadata.
pub const GENERATOR_ID: &str = concat!("bqp-core-", env!("CARGO_PKG_VERSION"), "/chacha20-ziggurat");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    /// Scale of the Gaussian entries of `Q`.
    pub base: f64,
    pub seed: u64,
    /// Added to every multiplier, rounded up to an integer.
    pub margin: f64,
}

impl GenConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            base: 10.0,
            seed,
            margin: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(BqpError::InvalidConfig("n must be at least 1".into()));
        }
        if !(self.base > 0.0 && self.base.is_finite()) {
            return Err(BqpError::InvalidConfig("base must be positive".into()));
        }
        if !(self.margin >= 0.0 && self.margin.is_finite()) {
            return Err(BqpError::InvalidConfig("margin must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Witness `(x, λ)` with `Q(λ) ≻ 0` and `Q(λ)x = c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub x: SignVector,
    pub lambda: Multipliers,
}

/// `λᵢ = Σⱼ |Qᵢⱼ| + margin`, diagonal term included.
pub fn multipliers_from_rowsums(q: &SymMatrix, margin: f64) -> Multipliers {
    let sums = q.abs_row_sums().into_iter().map(|s| s + margin).collect();
    Multipliers::new(sums).expect("row sums of a finite matrix are finite")
}

/// `c = (Q + diag(λ)) x`.
pub fn rhs_from_certificate(q: &SymMatrix, lambda: &Multipliers, x: &SignVector) -> Result<Vec<f64>> {
    q_of_lambda(q, lambda)?.mul_vec(&x.to_f64())
}

/// `round((base·G + base·Gᵀ) / 2)` with rounding half away from zero.
fn draw_matrix<R: Rng>(n: usize, base: f64, rng: &mut R) -> SymMatrix {
    let g: Vec<f64> = (0..n * n).map(|_| base * rng.sample::<f64, _>(StandardNormal)).collect();
    SymMatrix::from_lower_fn(n, |i, j| ((g[i * n + j] + g[j * n + i]) / 2.0).round())
}

fn draw_signs<R: Rng>(n: usize, rng: &mut R) -> SignVector {
    SignVector::new((0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect())
        .expect("entries are ±1")
}

fn attempt_rng(seed: u64, attempt: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

/// Draws an instance and its certificate.
///
/// With margin 0 the row-sum multipliers only make `Q(λ)` weakly dominant
/// in rows where `Qᵢᵢ ≤ 0`, which can leave it singular. Such draws are
/// rejected and `Q` is redrawn up to [`MAX_REDRAWS`] times; after that the
/// last draw gets one extra unit of margin, which makes it strictly
/// dominant.
pub fn generate_instance(cfg: &GenConfig) -> Result<(BqpInstance, Certificate)> {
    cfg.validate()?;
    let margin = cfg.margin.ceil();
    for attempt in 0..=MAX_REDRAWS {
        let mut rng = attempt_rng(cfg.seed, attempt);
        let q = draw_matrix(cfg.n, cfg.base, &mut rng);
        let mut lambda = multipliers_from_rowsums(&q, margin);
        if spd_factorize(&q_of_lambda(&q, &lambda)?).is_err() {
            if attempt < MAX_REDRAWS {
                continue;
            }
            lambda = multipliers_from_rowsums(&q, margin + 1.0);
            if spd_factorize(&q_of_lambda(&q, &lambda)?).is_err() {
                return Err(BqpError::GenerationFailed);
            }
        }
        let x = draw_signs(cfg.n, &mut rng);
        let c = rhs_from_certificate(&q, &lambda, &x)?;
        let inst = BqpInstance::new(q, c)?;
        return Ok((inst, Certificate { x, lambda }));
    }
    unreachable!("the final attempt either returns or fails")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{is_dual_feasible, objective_value};

    #[test]
    fn row_sums_reproduce_example1_multipliers() {
        let (inst, cert) = fixtures::example1();
        assert_eq!(multipliers_from_rowsums(inst.q(), 0.0), cert.lambda);
    }

    #[test]
    fn row_sums_trivial_cases() {
        let m = multipliers_from_rowsums(&SymMatrix::zeros(2), 1.0);
        assert_eq!(m.as_slice(), &[1.0, 1.0]);

        // weakly dominant and singular: why generation re-checks definiteness
        let q = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let m = multipliers_from_rowsums(&q, 0.0);
        assert_eq!(m.as_slice(), &[1.0, 1.0]);
        assert!(spd_factorize(&q_of_lambda(&q, &m).unwrap()).is_err());
    }

    #[test]
    fn rhs_reproduces_example_vectors() {
        for (inst, cert) in [fixtures::example1(), fixtures::example2(), fixtures::example3()] {
            let c = rhs_from_certificate(inst.q(), &cert.lambda, &cert.x).unwrap();
            assert_eq!(c, inst.c());
        }
    }

    #[test]
    fn rhs_trivial_cases() {
        let (inst, _) = fixtures::example1();
        let ones = SignVector::new(vec![1; 5]).unwrap();
        let zero = Multipliers::new(vec![0.0; 5]).unwrap();
        let sums: Vec<f64> = inst.q().rows().map(|r| r.iter().sum()).collect();
        assert_eq!(rhs_from_certificate(inst.q(), &zero, &ones).unwrap(), sums);

        let x = SignVector::new(vec![1, -1, -1]).unwrap();
        let one = Multipliers::new(vec![1.0; 3]).unwrap();
        assert_eq!(
            rhs_from_certificate(&SymMatrix::zeros(3), &one, &x).unwrap(),
            x.to_f64()
        );
        assert!(rhs_from_certificate(inst.q(), &one, &x).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(GenConfig::new(0, 1).validate().is_err());
        assert!(GenConfig { base: 0.0, ..GenConfig::new(3, 1) }.validate().is_err());
        assert!(GenConfig { margin: -1.0, ..GenConfig::new(3, 1) }.validate().is_err());
        assert!(generate_instance(&GenConfig::new(0, 1)).is_err());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = GenConfig::new(12, 99);
        assert_eq!(generate_instance(&cfg).unwrap(), generate_instance(&cfg).unwrap());
        let other = generate_instance(&GenConfig::new(12, 100)).unwrap();
        assert_ne!(generate_instance(&cfg).unwrap().0, other.0);
    }

    #[test]
    fn generated_data_is_integral_and_certified() {
        for seed in 0..40 {
            for n in [1, 2, 5, 17] {
                let cfg = GenConfig { margin: if seed % 3 == 0 { 0.5 } else { 0.0 }, ..GenConfig::new(n, seed) };
                let (inst, cert) = generate_instance(&cfg).unwrap();
                let integral = |v: &f64| v.fract() == 0.0;
                assert!(inst.q().as_slice().iter().all(integral));
                assert!(inst.c().iter().all(integral));
                assert!(cert.lambda.as_slice().iter().all(integral));
                assert!(!inst.has_zero_linear_term());

                let st = is_dual_feasible(&inst, &cert.lambda).unwrap();
                assert!(st.is_feasible(), "seed {seed} n {n}");
                for g in st.gradient().unwrap() {
                    assert!(g.abs() <= 1e-10);
                }
                assert_eq!(
                    rhs_from_certificate(inst.q(), &cert.lambda, &cert.x).unwrap(),
                    inst.c()
                );
                assert!(objective_value(&inst, &cert.x).is_ok());
            }
        }
    }

    #[test]
    fn one_by_one_instances_need_positive_shifted_entry() {
        for seed in 0..50 {
            let (inst, cert) = generate_instance(&GenConfig::new(1, seed)).unwrap();
            let q = inst.q().get(0, 0);
            let l = cert.lambda.as_slice()[0];
            assert!(q + l > 0.0);
            assert!(l == q.abs() || l == q.abs() + 1.0);
            assert_eq!(inst.c()[0], (q + l) * cert.x.signs()[0] as f64);
        }
    }

    #[test]
    fn margin_is_rounded_up() {
        let a = generate_instance(&GenConfig { margin: 0.0, ..GenConfig::new(6, 3) }).unwrap();
        let b = generate_instance(&GenConfig { margin: 0.2, ..GenConfig::new(6, 3) }).unwrap();
        if a.0.q() == b.0.q() {
            for (la, lb) in a.1.lambda.as_slice().iter().zip(b.1.lambda.as_slice()) {
                assert_eq!(*lb, la + 1.0);
            }
        }
    }

    #[test]
    fn entry_scale_matches_base() {
        let mut total = 0usize;
        let mut within = 0usize;
        for seed in 0..20 {
            let (inst, _) = generate_instance(&GenConfig::new(60, seed)).unwrap();
            total += inst.q().as_slice().len();
            within += inst.q().as_slice().iter().filter(|v| v.abs() <= 40.0).count();
        }
        assert!(within as f64 >= 0.99 * total as f64);
    }
}
