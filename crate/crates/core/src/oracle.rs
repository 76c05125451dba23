//! Exhaustive minimization over `{−1, 1}ⁿ` for small instances.
//!
//! Points are visited in reflected Gray-code order, so consecutive points
//! differ in one sign and the objective is updated in `O(n)`. The index range
//! is cut into fixed-size chunks; every chunk restarts from a directly
//! evaluated point, which bounds rounding drift and lets the chunks run in
//! parallel. Results do not depend on the execution policy.

use crate::error::{BqpError, Result};
use crate::exec::{self, Execution};
use crate::model::{BqpInstance, SignVector};
use crate::numerics::dot;

pub const DEFAULT_MAX_N: usize = 25;
/// Sign vectors are packed into `u64` masks.
pub const HARD_MAX_N: usize = 63;

const CHUNK_BITS: u32 = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Lexicographically smallest minimizer, ordering −1 before +1.
    pub best_x: SignVector,
    pub best_value: f64,
    /// Points within `1e-9 (1 + |best_value|)` of the minimum.
    pub minimizer_count: u64,
}

/// Walks Gray-code indices `[start, end)` keeping `f` and `Qx` current.
pub(crate) struct GrayWalk<'a> {
    inst: &'a BqpInstance,
    x: Vec<f64>,
    qx: Vec<f64>,
    value: f64,
    mask: u64,
    index: u64,
    end: u64,
}

impl<'a> GrayWalk<'a> {
    pub(crate) fn new(inst: &'a BqpInstance, start: u64, end: u64) -> Self {
        let n = inst.n();
        let mask = start ^ (start >> 1);
        let x: Vec<f64> = (0..n)
            .map(|j| if mask >> j & 1 == 1 { 1.0 } else { -1.0 })
            .collect();
        let qx = inst.q().mul_vec(&x).expect("dimensions agree");
        let value = 0.5 * dot(&x, &qx) - dot(inst.c(), &x);
        Self {
            inst,
            x,
            qx,
            value,
            mask,
            index: start,
            end,
        }
    }

    /// Current `(mask, f)`, then advances. `None` once the range is spent.
    pub(crate) fn next_point(&mut self) -> Option<(u64, f64)> {
        if self.index >= self.end {
            return None;
        }
        let out = (self.mask, self.value);
        self.index += 1;
        if self.index < self.end {
            let i = self.index.trailing_zeros() as usize;
            let q = self.inst.q();
            let xi = self.x[i];
            self.value += 2.0 * (q.get(i, i) - xi * self.qx[i] + self.inst.c()[i] * xi);
            let delta = -2.0 * xi;
            for (g, qji) in self.qx.iter_mut().zip(q.row(i)) {
                *g += delta * qji;
            }
            self.x[i] = -xi;
            self.mask ^= 1 << i;
        }
        Some(out)
    }
}

/// Position of `mask` in the −1 < +1 lexicographic order, variable 0 most
/// significant.
fn lex_key(mask: u64, n: usize) -> u64 {
    mask.reverse_bits() >> (64 - n)
}

fn chunks(n: usize) -> (u64, usize) {
    let total = 1u64 << n;
    let len = total.min(1 << CHUNK_BITS);
    (len, (total / len) as usize)
}

pub fn brute_force_minimize(inst: &BqpInstance, max_n: usize) -> Result<OracleResult> {
    brute_force_minimize_with(inst, max_n, Execution::default())
}

pub fn brute_force_minimize_with(
    inst: &BqpInstance,
    max_n: usize,
    exec: Execution,
) -> Result<OracleResult> {
    let n = inst.n();
    let cap = max_n.min(HARD_MAX_N);
    if n > cap {
        return Err(BqpError::TooLarge { n, cap });
    }
    let (len, count) = chunks(n);
    let walk = |k: usize| GrayWalk::new(inst, k as u64 * len, (k as u64 + 1) * len);

    let best_value = exec::map_range(exec, count, |k| {
        let mut w = walk(k);
        let mut best = f64::INFINITY;
        while let Some((_, v)) = w.next_point() {
            best = best.min(v);
        }
        best
    })
    .into_iter()
    .fold(f64::INFINITY, f64::min);

    let threshold = best_value + 1e-9 * (1.0 + best_value.abs());
    let (minimizer_count, key) = exec::map_range(exec, count, |k| {
        let mut w = walk(k);
        let (mut hits, mut key) = (0u64, u64::MAX);
        while let Some((mask, v)) = w.next_point() {
            if v <= threshold {
                hits += 1;
                key = key.min(lex_key(mask, n));
            }
        }
        (hits, key)
    })
    .into_iter()
    .fold((0, u64::MAX), |(h, k), (h2, k2)| (h + h2, k.min(k2)));

    Ok(OracleResult {
        best_x: SignVector::from_mask(n, lex_key(key, n)),
        best_value,
        minimizer_count,
    })
}
