//! Greedy maximization under a cardinality constraint.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::SetFunction;
use crate::subset::Subset;

/// Cap on the number of subsets [`brute_opt`] examines.
pub const BRUTE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyTrace {
    /// Elements in the order they were picked.
    pub chosen: Vec<usize>,
    pub gains: Vec<f64>,
    pub value: f64,
    /// Set-function evaluations.
    pub evals: usize,
    /// Component oracle calls (`evals` times the function's per-eval cost).
    pub oracle_calls: usize,
}

impl GreedyTrace {
    pub fn set(&self) -> Subset {
        Subset::from_indices(self.chosen.iter().copied()).expect("chosen elements are in range")
    }
}

/// Picks `min(k, n)` elements, each maximizing the marginal gain; ties go to
/// the lowest index. `f(∅) = 0` is assumed and not evaluated.
pub fn greedy_cardinality<F: SetFunction + ?Sized>(f: &F, k: usize) -> Result<GreedyTrace> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = f.ground_size();
    let mut set = Subset::EMPTY;
    let mut value = 0.0;
    let mut trace = GreedyTrace { chosen: vec![], gains: vec![], value, evals: 0, oracle_calls: 0 };
    for _ in 0..k.min(n) {
        let mut best: Option<(usize, f64, f64)> = None;
        for a in Subset::full(n).difference(set) {
            let v = f.eval(set.with(a));
            trace.evals += 1;
            let gain = v - value;
            if best.is_none_or(|(_, g, _)| gain > g) {
                best = Some((a, gain, v));
            }
        }
        let (a, gain, v) = best.expect("an element remains while |A| < n");
        set = set.with(a);
        value = v;
        trace.chosen.push(a);
        trace.gains.push(gain);
    }
    trace.value = value;
    trace.oracle_calls = trace.evals * f.oracle_cost();
    Ok(trace)
}

struct Bound {
    gain: f64,
    element: usize,
    /// `f(A ∪ {element})` at the time `gain` was computed.
    value: f64,
    /// Selection round in which `gain` was computed.
    round: usize,
}

impl PartialEq for Bound {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Bound {}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.element.cmp(&self.element))
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lazy (accelerated) greedy. For monotone submodular `f` stale gains are
/// upper bounds, so it picks the same elements as [`greedy_cardinality`]
/// with no more evaluations.
pub fn lazy_greedy<F: SetFunction + ?Sized>(f: &F, k: usize) -> Result<GreedyTrace> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = f.ground_size();
    let mut trace = GreedyTrace { chosen: vec![], gains: vec![], value: 0.0, evals: 0, oracle_calls: 0 };
    let mut heap: BinaryHeap<Bound> = (0..n)
        .map(|e| {
            trace.evals += 1;
            let v = f.eval(Subset::singleton(e));
            Bound { gain: v, element: e, value: v, round: 0 }
        })
        .collect();
    let mut set = Subset::EMPTY;
    let mut value = 0.0;
    let mut round = 0;
    while round < k.min(n) {
        let top = heap.pop().expect("heap holds every unchosen element");
        if top.round == round {
            set = set.with(top.element);
            value = top.value;
            trace.chosen.push(top.element);
            trace.gains.push(top.gain);
            round += 1;
        } else {
            let v = f.eval(set.with(top.element));
            trace.evals += 1;
            heap.push(Bound { gain: v - value, element: top.element, value: v, round });
        }
    }
    trace.value = value;
    trace.oracle_calls = trace.evals * f.oracle_cost();
    Ok(trace)
}

/// Exact maximum over subsets of size at most `k`; among equal values the
/// lexicographically first sorted index list wins.
pub fn brute_opt<F: SetFunction + ?Sized>(f: &F, k: usize) -> Result<(Subset, f64)> {
    let n = f.ground_size();
    let count: f64 = (0..=k.min(n)).map(|j| binomial(n, j)).sum();
    if count > BRUTE_BUDGET as f64 {
        return Err(Error::BudgetExceeded { budget: BRUTE_BUDGET });
    }
    let mut best = (Subset::EMPTY, 0.0);
    // lexicographic preorder: a set precedes its extensions
    let mut stack = vec![(Subset::EMPTY, 0usize)];
    while let Some((set, next)) = stack.pop() {
        if !set.is_empty() {
            let v = f.eval(set);
            if v > best.1 {
                best = (set, v);
            }
        }
        if set.len() < k {
            for e in (next..n).rev() {
                stack.push((set.with(e), e + 1));
            }
        }
    }
    Ok(best)
}

fn binomial(n: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
