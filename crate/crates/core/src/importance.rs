//! Importance values `p_i = max_A f_i(A) / F(A)` and upper bounds on them.
//!
//! Sampling only needs `p̂_i ≥ p_i`; tighter estimates give smaller
//! sparsifiers. Exact values come from brute force over subsets (or over the
//! independent sets of a matroid), closed forms exist for coverage and
//! facility location, and [`pi_upper_monotone`] bounds any monotone family
//! with `O(N·n)` oracle calls.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{CoverageInstance, FacilityLocationInstance};
use crate::matroid::{enumerate_independent, Matroid};
use crate::model::{Component, DecomposableFunction, PiMode, SetFunction};
use crate::subset::Subset;

/// Largest ground set [`pi_exact`] will enumerate.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceEstimates {
    p_hat: Vec<f64>,
    mode: PiMode,
    sum_p: f64,
}

impl ImportanceEstimates {
    pub fn new(p_hat: Vec<f64>, mode: PiMode) -> Result<Self> {
        if let Some(v) = p_hat.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::NegativeValue(*v));
        }
        if p_hat.iter().all(|p| *p == 0.0) {
            return Err(Error::AllZero);
        }
        let sum_p = p_hat.iter().sum();
        Ok(ImportanceEstimates { p_hat, mode, sum_p })
    }

    pub fn p_hat(&self) -> &[f64] {
        &self.p_hat
    }

    pub fn mode(&self) -> PiMode {
        self.mode
    }

    pub fn sum_p(&self) -> f64 {
        self.sum_p
    }

    pub fn len(&self) -> usize {
        self.p_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_hat.is_empty()
    }
}

/// Per-component maximum of `f_i(A)/F(A)` over `sets`; sets with `F(A) = 0`
/// contribute nothing (nonnegativity forces `f_i(A) = 0` there).
fn max_ratio_over(f: &DecomposableFunction, sets: &[Subset]) -> Vec<f64> {
    let totals: Vec<f64> = sets.par_iter().map(|&s| f.eval(s)).collect();
    f.components()
        .par_iter()
        .map(|c| {
            sets.iter()
                .zip(&totals)
                .filter(|(_, t)| **t > 0.0)
                .map(|(&s, t)| c.eval(s) / t)
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Exact `p_i` by enumerating every nonempty subset (`n ≤ 20`).
pub fn pi_exact(f: &DecomposableFunction) -> Result<ImportanceEstimates> {
    let n = f.n();
    if n > EXACT_LIMIT {
        return Err(Error::TooLargeForExhaustive { n, limit: EXACT_LIMIT });
    }
    let sets: Vec<Subset> = Subset::all(n).skip(1).collect();
    ImportanceEstimates::new(max_ratio_over(f, &sets), PiMode::Exact)
}

/// Exact `p_i` restricted to the nonempty independent sets of `m`.
pub fn pi_exact_matroid<M: Matroid + ?Sized>(
    f: &DecomposableFunction,
    m: &M,
    budget: usize,
) -> Result<ImportanceEstimates> {
    if m.ground_size() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: m.ground_size() });
    }
    let sets = enumerate_independent(m, budget)?;
    ImportanceEstimates::new(max_ratio_over(f, &sets), PiMode::ExactMatroid)
}

/// `p_i = max_{a : i ∈ S_a} 1/|S_a|`.
pub fn pi_coverage(inst: &CoverageInstance) -> Result<ImportanceEstimates> {
    let sizes = inst.set_sizes();
    let p = inst
        .covers()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.iter()
                .map(|&a| sizes[a])
                .min()
                .map(|s| 1.0 / s as f64)
                .ok_or(Error::Uncovered(i))
        })
        .collect::<Result<Vec<_>>>()?;
    ImportanceEstimates::new(p, PiMode::ClosedCoverage)
}

/// `p_i = max_j c(i, j) / F({j})` over facilities with `F({j}) > 0`.
pub fn pi_facility(inst: &FacilityLocationInstance) -> Result<ImportanceEstimates> {
    let n = inst.n_facilities();
    let mut column = vec![0.0; n];
    for row in inst.rows() {
        for (acc, c) in column.iter_mut().zip(row) {
            *acc += c;
        }
    }
    if column.iter().all(|c| *c == 0.0) {
        return Err(Error::AllColumnsZero);
    }
    let p = inst
        .rows()
        .map(|row| {
            row.iter()
                .zip(&column)
                .filter(|(_, total)| **total > 0.0)
                .map(|(c, total)| c / total)
                .fold(0.0, f64::max)
        })
        .collect();
    ImportanceEstimates::new(p, PiMode::ClosedFacility)
}

/// Dispatches to the closed form matching the function's family.
pub fn pi_closed(f: &DecomposableFunction) -> Result<ImportanceEstimates> {
    let comps = f.components();
    if comps.iter().all(|c| matches!(c, Component::Coverage { .. })) {
        let covers = comps
            .iter()
            .map(|c| match c {
                Component::Coverage { sets } => sets.to_vec(),
                _ => unreachable!(),
            })
            .collect();
        let inst = CoverageInstance::new(f.n(), covers)?;
        if inst.dropped() > 0 {
            return Err(Error::Uncovered(0));
        }
        pi_coverage(&inst)
    } else if comps.iter().all(|c| matches!(c, Component::Facility { .. })) {
        let cost = comps
            .iter()
            .flat_map(|c| match c {
                Component::Facility { costs } => costs.iter().copied(),
                _ => unreachable!(),
            })
            .collect();
        pi_facility(&FacilityLocationInstance::new(f.n(), cost)?)
    } else {
        Err(Error::IncompatibleMode {
            mode: "closed".into(),
            reason: "closed forms exist only for pure coverage or facility-location functions".into(),
        })
    }
}

/// `p̂_i = n · max_e f_i({e}) / F({e})` over singletons with `F({e}) > 0`.
///
/// For monotone subadditive `f_i` and `e*` the best singleton inside `A`,
/// `f_i(A) ≤ |A| f_i({e*})` and `F(A) ≥ F({e*})`, so `p̂_i ≥ p_i`.
pub fn pi_upper_monotone(f: &DecomposableFunction) -> Result<ImportanceEstimates> {
    if let Some(i) = f.components().iter().position(|c| !c.monotone_claim()) {
        return Err(Error::NotMonotone(i));
    }
    let n = f.n();
    let singles: Vec<Subset> = (0..n).map(Subset::singleton).collect();
    let p = max_ratio_over(f, &singles).into_iter().map(|p| n as f64 * p).collect();
    ImportanceEstimates::new(p, PiMode::UpperMonotone)
}
