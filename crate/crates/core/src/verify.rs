//! Ground-truth checks of `(1−ε)F'(S) ≤ F(S) ≤ (1+ε)F'(S)` and the
//! repeated-trial harness behind the statistical tests.
//!
//! Ratios are reported as `F(S)/F'(S)`. A set with `F'(S) = 0 < F(S)` has
//! ratio `+∞`; a set with `F(S) = F'(S) = 0` satisfies the sandwich and is
//! counted without affecting the extreme ratios.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::importance::EXACT_LIMIT;
use crate::lovasz::{lovasz_eval, ContinuousPoint};
use crate::matroid::{enumerate_independent, Matroid};
use crate::model::{DecomposableFunction, SetFunction, SparsifierWeights};
use crate::sparsify::{estimate, kappa_for, keep_probabilities, sample_sparsifier, SparsifyConfig};
use crate::subset::Subset;

/// Relative slack for the extension check; the telescoping sum may round
/// differently from the per-set values it combines.
pub const LOVASZ_REL_TOL: f64 = 1e-12;

/// Where an extreme ratio was observed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Set(Subset),
    Point(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub epsilon: f64,
    /// Smallest observed `F/F'`; `None` if every checked set had `F = F' = 0`.
    #[serde(serialize_with = "ratio")]
    pub worst_low: Option<f64>,
    #[serde(serialize_with = "ratio")]
    pub worst_high: Option<f64>,
    pub witness_low: Option<Witness>,
    pub witness_high: Option<Witness>,
    pub sets_checked: usize,
}

/// JSON has no infinity; unbounded ratios are written as the string `"inf"`.
fn ratio<S: serde::Serializer>(r: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(v) if v.is_infinite() => s.serialize_str("inf"),
        Some(v) => s.serialize_some(v),
        None => s.serialize_none(),
    }
}

struct Extremes {
    low: Option<(f64, usize)>,
    high: Option<(f64, usize)>,
    fail: bool,
}

/// Scans `(F, F')` pairs; extremes keep the first index on ties.
fn scan(pairs: &[(f64, f64)], epsilon: f64, rel_tol: f64) -> Extremes {
    let mut ex = Extremes { low: None, high: None, fail: false };
    for (idx, &(full, sparse)) in pairs.iter().enumerate() {
        if full == 0.0 && sparse == 0.0 {
            continue;
        }
        let slack = rel_tol * full.abs().max(sparse.abs());
        if full < (1.0 - epsilon) * sparse - slack || full > (1.0 + epsilon) * sparse + slack {
            ex.fail = true;
        }
        let ratio = if sparse == 0.0 { f64::INFINITY } else { full / sparse };
        if ex.low.is_none_or(|(r, _)| ratio < r) {
            ex.low = Some((ratio, idx));
        }
        if ex.high.is_none_or(|(r, _)| ratio > r) {
            ex.high = Some((ratio, idx));
        }
    }
    ex
}

fn report_over_sets(
    f: &DecomposableFunction,
    w: &SparsifierWeights,
    epsilon: f64,
    sets: &[Subset],
) -> Result<VerificationReport> {
    let fw = f.weighted(w)?;
    let pairs: Vec<(f64, f64)> = sets.par_iter().map(|&s| (f.eval(s), fw.eval(s))).collect();
    let ex = scan(&pairs, epsilon, 0.0);
    Ok(VerificationReport {
        pass: !ex.fail,
        epsilon,
        worst_low: ex.low.map(|l| l.0),
        worst_high: ex.high.map(|h| h.0),
        witness_low: ex.low.map(|l| Witness::Set(sets[l.1])),
        witness_high: ex.high.map(|h| Witness::Set(sets[h.1])),
        // the empty set passes trivially and is counted
        sets_checked: sets.len() + 1,
    })
}

/// Checks every nonempty subset (`n ≤ 20`).
pub fn verify_all_subsets(f: &DecomposableFunction, w: &SparsifierWeights, epsilon: f64) -> Result<VerificationReport> {
    let n = f.n();
    if n > EXACT_LIMIT {
        return Err(Error::TooLargeForExhaustive { n, limit: EXACT_LIMIT });
    }
    let sets: Vec<Subset> = Subset::all(n).skip(1).collect();
    report_over_sets(f, w, epsilon, &sets)
}

/// Checks every nonempty independent set of `m`.
pub fn verify_matroid<M: Matroid + ?Sized>(
    f: &DecomposableFunction,
    w: &SparsifierWeights,
    epsilon: f64,
    m: &M,
    budget: usize,
) -> Result<VerificationReport> {
    if m.ground_size() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: m.ground_size() });
    }
    let sets = enumerate_independent(m, budget)?;
    report_over_sets(f, w, epsilon, &sets)
}

/// Checks the extensions at `samples` uniform points of `[0, 1]^n`, plus every
/// cube corner when `n ≤ 10`.
pub fn verify_lovasz(
    f: &DecomposableFunction,
    w: &SparsifierWeights,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let n = f.n();
    let fw = f.weighted(w)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<ContinuousPoint> = (0..samples)
        .map(|_| ContinuousPoint::new((0..n).map(|_| rng.random::<f64>()).collect()))
        .collect::<Result<_>>()?;
    if n <= 10 {
        points.extend(Subset::all(n).skip(1).map(|s| ContinuousPoint::indicator(n, s)));
    }
    let pairs = points
        .par_iter()
        .map(|x| Ok((lovasz_eval(f, x)?, lovasz_eval(&fw, x)?)))
        .collect::<Result<Vec<_>>>()?;
    let ex = scan(&pairs, epsilon, LOVASZ_REL_TOL);
    let witness = |i: usize| Witness::Point(points[i].coords().to_vec());
    Ok(VerificationReport {
        pass: !ex.fail,
        epsilon,
        worst_low: ex.low.map(|l| l.0),
        worst_high: ex.high.map(|h| h.0),
        witness_low: ex.low.map(|l| witness(l.1)),
        witness_high: ex.high.map(|h| witness(h.1)),
        sets_checked: points.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats {
    pub trials: usize,
    pub successes: usize,
    pub mean_size: f64,
    pub size_stderr: f64,
    /// `Σ min(1, κ p̂_i)`, the expected size.
    pub expected_size: f64,
    /// `κ Σ p̂_i`, the unclamped bound on the expected size.
    pub kappa_sum_p: f64,
    pub sizes: Vec<usize>,
}

impl TrialStats {
    pub fn pass_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs `trials` sparsifications with seeds `config.seed + t`, verifying each
/// over all subsets or, with a matroid, over its independent sets.
pub fn trial_stats(
    f: &DecomposableFunction,
    config: &SparsifyConfig,
    trials: usize,
    matroid: Option<&dyn Matroid>,
) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    config.validate()?;
    let p = estimate(f, config.pi, matroid, config.budget)?;
    let kappa = kappa_for(f, matroid, config.epsilon, config.delta)?;
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let w = sample_sparsifier(&p, kappa, config.seed.wrapping_add(t))?;
            let report = match matroid {
                Some(m) => verify_matroid(f, &w, config.epsilon, m, config.budget)?,
                None => verify_all_subsets(f, &w, config.epsilon)?,
            };
            Ok((report.pass, w.size()))
        })
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = outcomes.iter().map(|o| o.1).collect();
    let (mean_size, size_stderr) = mean_stderr(&sizes.iter().map(|s| *s as f64).collect::<Vec<_>>());
    Ok(TrialStats {
        trials,
        successes: outcomes.iter().filter(|o| o.0).count(),
        mean_size,
        size_stderr,
        expected_size: keep_probabilities(&p, kappa).iter().sum(),
        kappa_sum_p: kappa * p.sum_p(),
        sizes,
    })
}
