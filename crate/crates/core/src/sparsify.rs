//! Independent per-component sampling: component `i` survives with
//! probability `κ_i = min(1, κ·p̂_i)` and, if kept, gets weight `1/κ_i`, so
//! every weight has expectation one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::importance::{pi_closed, pi_exact, pi_exact_matroid, pi_upper_monotone, ImportanceEstimates};
use crate::matroid::{Matroid, DEFAULT_BUDGET};
use crate::model::{DecomposableFunction, PiMode, SparsifierWeights};

/// Which importance estimator [`sparsify`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PiStrategy {
    Exact,
    /// Exact over independent sets; only valid with a matroid.
    ExactMatroid,
    /// Coverage or facility-location closed form, chosen by family.
    Closed,
    UpperMonotone,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparsifyConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub pi: PiStrategy,
    /// Permit `epsilon > 1`; the resulting weights carry no guarantee.
    pub allow_large_epsilon: bool,
    /// Cap on enumerated independent sets for matroid-exact estimation.
    pub budget: usize,
}

impl SparsifyConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64, pi: PiStrategy) -> Self {
        SparsifyConfig { epsilon, delta, seed, pi, allow_large_epsilon: false, budget: DEFAULT_BUDGET }
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon_delta(self.epsilon, self.delta)?;
        if self.epsilon > 1.0 && !self.allow_large_epsilon {
            return Err(Error::InvalidParameter(format!(
                "epsilon {} > 1 requires allow_large_epsilon",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// Whether the sandwich guarantee applies to this configuration.
    pub fn guaranteed(&self) -> bool {
        self.epsilon <= 1.0
    }
}

fn check_epsilon_delta(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must be positive")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} not in (0, 1)")));
    }
    Ok(())
}

/// `3 ln(2^{n+1} / δ) / ε²`.
pub fn kappa_unconstrained(n: usize, epsilon: f64, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    check_epsilon_delta(epsilon, delta)?;
    let log_term = (n as f64 + 1.0) * std::f64::consts::LN_2 - delta.ln();
    Ok(3.0 * log_term / (epsilon * epsilon))
}

/// `3 ln(2 n^{r+1} / δ) / ε²` for a matroid of rank `r`.
pub fn kappa_matroid(n: usize, rank: usize, epsilon: f64, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if rank == 0 {
        return Err(Error::InvalidParameter("matroid rank must be at least 1".into()));
    }
    check_epsilon_delta(epsilon, delta)?;
    let log_term = std::f64::consts::LN_2 + (rank as f64 + 1.0) * (n as f64).ln() - delta.ln();
    Ok(3.0 * log_term / (epsilon * epsilon))
}

/// Uniform draw in `[0, 1)` for component `index` under `seed`.
///
/// The draw comes from stream `index` of a ChaCha8 generator keyed by
/// `seed`, so each component's coin is fixed regardless of evaluation order.
pub fn component_uniform(seed: u64, index: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng.random::<f64>()
}

/// `min(1, κ·p̂_i)`.
pub fn keep_probabilities(p_hat: &ImportanceEstimates, kappa: f64) -> Vec<f64> {
    p_hat.p_hat().iter().map(|p| (kappa * p).min(1.0)).collect()
}

/// Flips one independent coin per component. Components with `p̂_i = 0`
/// are identically zero and get weight 0 without a draw.
pub fn sample_sparsifier(p_hat: &ImportanceEstimates, kappa: f64, seed: u64) -> Result<SparsifierWeights> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!("kappa {kappa} must be positive")));
    }
    let weights = p_hat
        .p_hat()
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            if p == 0.0 {
                return 0.0;
            }
            let keep = (kappa * p).min(1.0);
            if component_uniform(seed, i) < keep {
                1.0 / keep
            } else {
                0.0
            }
        })
        .collect();
    let mut w = SparsifierWeights::from_weights(weights)?;
    w.seed = seed;
    w.kappa = Some(kappa);
    w.mode = p_hat.mode();
    Ok(w)
}

/// Importance estimates for `config.pi`, optionally restricted to a matroid.
pub fn estimate(
    f: &DecomposableFunction,
    pi: PiStrategy,
    matroid: Option<&dyn Matroid>,
    budget: usize,
) -> Result<ImportanceEstimates> {
    match (pi, matroid) {
        (PiStrategy::Exact, _) => pi_exact(f),
        (PiStrategy::ExactMatroid, Some(m)) => pi_exact_matroid(f, m, budget),
        (PiStrategy::ExactMatroid, None) => Err(Error::IncompatibleMode {
            mode: PiMode::ExactMatroid.as_str().into(),
            reason: "no matroid supplied".into(),
        }),
        (PiStrategy::Closed, _) => pi_closed(f),
        (PiStrategy::UpperMonotone, _) => pi_upper_monotone(f),
    }
}

/// The sampling constant for `f`, unconstrained or for matroid `m`.
pub fn kappa_for(f: &DecomposableFunction, matroid: Option<&dyn Matroid>, epsilon: f64, delta: f64) -> Result<f64> {
    match matroid {
        None => kappa_unconstrained(f.n(), epsilon, delta),
        Some(m) => kappa_matroid(f.n(), m.rank(), epsilon, delta),
    }
}

fn finish(mut w: SparsifierWeights, config: &SparsifyConfig) -> SparsifierWeights {
    w.epsilon = Some(config.epsilon);
    w.delta = Some(config.delta);
    w.guaranteed = config.guaranteed();
    w
}

/// Sparsifier preserving `F` on every subset.
pub fn sparsify(f: &DecomposableFunction, config: &SparsifyConfig) -> Result<SparsifierWeights> {
    config.validate()?;
    let p = estimate(f, config.pi, None, config.budget)?;
    let kappa = kappa_for(f, None, config.epsilon, config.delta)?;
    Ok(finish(sample_sparsifier(&p, kappa, config.seed)?, config))
}

/// Sparsifier preserving `F` on the independent sets of `m`.
pub fn sparsify_matroid(f: &DecomposableFunction, m: &dyn Matroid, config: &SparsifyConfig) -> Result<SparsifierWeights> {
    config.validate()?;
    if m.ground_size() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: m.ground_size() });
    }
    let p = estimate(f, config.pi, Some(m), config.budget)?;
    let kappa = kappa_for(f, Some(m), config.epsilon, config.delta)?;
    Ok(finish(sample_sparsifier(&p, kappa, config.seed)?, config))
}
