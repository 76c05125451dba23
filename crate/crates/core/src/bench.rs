//! Size/seed sweeps: generate, solve and time one instance per pair.

use std::time::Instant;

use crate::dual_solver::{solve_dual, SolveOptions};
use crate::error::Result;
use crate::exec::{self, Execution};
use crate::generator::{generate_instance, GenConfig};
use crate::io::BenchRecord;

pub const DEFAULT_SIZES: [usize; 3] = [50, 100, 200];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub sizes: Vec<usize>,
    /// Seeds `1..=seeds` are used for every size.
    pub seeds: u64,
    pub base: f64,
    pub solve: SolveOptions,
}

impl SweepPlan {
    pub fn new(sizes: Vec<usize>, seeds: u64) -> Self {
        Self {
            sizes,
            seeds,
            base: 10.0,
            solve: SolveOptions {
                exec: Execution::Sequential,
                ..SolveOptions::default()
            },
        }
    }

    /// `(n, seed)` pairs in output order.
    pub fn cases(&self) -> Vec<(usize, u64)> {
        self.sizes
            .iter()
            .flat_map(|&n| (1..=self.seeds).map(move |s| (n, s)))
            .collect()
    }
}

/// Generates and solves one instance, timing each phase.
pub fn run_case(n: usize, seed: u64, base: f64, opts: &SolveOptions) -> Result<BenchRecord> {
    let cfg = GenConfig {
        base,
        ..GenConfig::new(n, seed)
    };
    let t0 = Instant::now();
    let (inst, _) = generate_instance(&cfg)?;
    let gen_millis = t0.elapsed().as_secs_f64() * 1e3;
    let t1 = Instant::now();
    let report = solve_dual(&inst, opts)?;
    let solve_millis = t1.elapsed().as_secs_f64() * 1e3;
    Ok(BenchRecord {
        n,
        seed,
        gen_millis,
        solve_millis,
        iterations: report.iterations,
        gap: report.gap.unwrap_or(f64::NAN),
        certified: report.is_certified(),
        primal_value: report.primal_value.unwrap_or(f64::NAN),
    })
}

/// Runs every case of the plan. Cases are distributed across threads under
/// [`Execution::Parallel`]; records come back in plan order either way.
pub fn run_sweep(plan: &SweepPlan, exec: Execution) -> Result<Vec<BenchRecord>> {
    let cases = plan.cases();
    exec::map_range(exec, cases.len(), |k| {
        let (n, seed) = cases[k];
        run_case(n, seed, plan.base, &plan.solve)
    })
    .into_iter()
    .collect()
}
