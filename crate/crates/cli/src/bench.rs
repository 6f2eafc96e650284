//! Size/quality sweeps: for each `ε`, sparsify repeatedly, run greedy on the
//! sparsifier, and compare against greedy on the full function.

use std::time::Instant;

use anyhow::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use submod_core::matroid::DEFAULT_BUDGET;
use submod_core::optimize::greedy_cardinality;
use submod_core::sparsify::{estimate, kappa_unconstrained, sample_sparsifier, PiStrategy, SparsifyConfig};
use submod_core::DecomposableFunction;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub epsilons: Vec<f64>,
    pub trials: usize,
    pub k: usize,
    pub seed: u64,
    pub delta: f64,
    pub pi: PiStrategy,
    /// Record wall-clock times; off gives byte-reproducible output.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub epsilon: f64,
    pub trial: usize,
    pub sparsifier_size: usize,
    pub relative_size: f64,
    /// `F(A')` for the set `A'` greedy picked on the sparsifier.
    pub greedy_value_sparse: f64,
    pub greedy_value_full: f64,
    pub relative_quality: f64,
    pub runtime_sparse_ms: f64,
    pub runtime_full_ms: f64,
}

fn millis(start: Instant, timing: bool) -> f64 {
    if timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    }
}

/// One row per `(ε, trial)`, ordered by the position of `ε` in the config
/// and then by trial. Trial `t` uses seed `seed + t` for every `ε`.
pub fn run_bench(f: &DecomposableFunction, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let p = estimate(f, cfg.pi, None, DEFAULT_BUDGET)?;
    let start = Instant::now();
    let full = greedy_cardinality(f, cfg.k)?;
    let runtime_full_ms = millis(start, cfg.timing);
    let n_components = f.num_components() as f64;

    let mut rows = Vec::with_capacity(cfg.epsilons.len() * cfg.trials);
    for &epsilon in &cfg.epsilons {
        let config = SparsifyConfig { allow_large_epsilon: true, ..SparsifyConfig::new(epsilon, cfg.delta, cfg.seed, cfg.pi) };
        config.validate()?;
        let kappa = kappa_unconstrained(f.n(), epsilon, cfg.delta)?;
        let batch = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| -> Result<BenchRow> {
                let w = sample_sparsifier(&p, kappa, cfg.seed.wrapping_add(trial as u64))?;
                let start = Instant::now();
                let sparse = greedy_cardinality(&f.weighted(&w)?, cfg.k)?;
                let runtime_sparse_ms = millis(start, cfg.timing);
                let value = f.eval_sum(sparse.set())?;
                Ok(BenchRow {
                    epsilon,
                    trial,
                    sparsifier_size: w.size(),
                    relative_size: w.size() as f64 / n_components,
                    greedy_value_sparse: value,
                    greedy_value_full: full.value,
                    relative_quality: if full.value > 0.0 { value / full.value } else { 1.0 },
                    runtime_sparse_ms,
                    runtime_full_ms,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(batch);
    }
    Ok(rows)
}

pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}
