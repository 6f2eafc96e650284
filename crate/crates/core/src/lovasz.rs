//! Lovász extension and base-polytope extreme points.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DecomposableFunction, SetFunction};
use crate::subset::Subset;

/// Largest ground set [`extreme_points`] enumerates permutations of.
pub const EXTREME_LIMIT: usize = 8;

const VERTEX_TOL: f64 = 1e-12;

/// A point of the unit cube `[0, 1]^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuousPoint(Vec<f64>);

impl ContinuousPoint {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::CoordinateOutOfRange { index, value });
        }
        Ok(ContinuousPoint(x))
    }

    /// The indicator vector of `s`.
    pub fn indicator(n: usize, s: Subset) -> Self {
        ContinuousPoint((0..n).map(|j| s.contains(j) as u8 as f64).collect())
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v * c).collect())
    }
}

/// Indices of `x` sorted by descending value, ties by ascending index.
fn descending_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
    order
}

/// `f^L(x) = Σ_j (x_π(j) − x_π(j+1)) f(S_j)` with `S_j` the `j` largest
/// coordinates, `x_π(0) = 1` and `x_π(n+1) = 0`. Uses exactly `n + 1`
/// evaluations of `f`.
pub fn lovasz_eval<F: SetFunction + ?Sized>(f: &F, x: &ContinuousPoint) -> Result<f64> {
    let n = f.ground_size();
    let x = x.coords();
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    let order = descending_order(x);
    let mut prefix = Subset::EMPTY;
    let mut total = (1.0 - x.get(order.first().copied().unwrap_or(0)).copied().unwrap_or(0.0)) * f.eval(prefix);
    for (j, &e) in order.iter().enumerate() {
        prefix = prefix.with(e);
        let next = order.get(j + 1).map_or(0.0, |&i| x[i]);
        total += (x[e] - next) * f.eval(prefix);
    }
    Ok(total)
}

/// The greedy vertex `y_π(j) = f(S_j) − f(S_{j−1})` for ordering `order`.
pub fn greedy_vertex<F: SetFunction + ?Sized>(f: &F, order: &[usize]) -> Vec<f64> {
    let mut y = vec![0.0; f.ground_size()];
    let mut prefix = Subset::EMPTY;
    let mut prev = f.eval(prefix);
    for &e in order {
        prefix = prefix.with(e);
        let cur = f.eval(prefix);
        y[e] = cur - prev;
        prev = cur;
    }
    y
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasePolytopeReport {
    pub component: Option<usize>,
    pub extreme_count: usize,
    pub vertices: Vec<Vec<f64>>,
}

/// Enumerates all `n!` greedy vertices of the base polytope and deduplicates
/// them (coordinates within `1e-12`).
pub fn extreme_points<F: SetFunction + ?Sized>(f: &F) -> Result<BasePolytopeReport> {
    let n = f.ground_size();
    if n > EXTREME_LIMIT {
        return Err(Error::TooLargeForExhaustive { n, limit: EXTREME_LIMIT });
    }
    let mut vertices: Vec<Vec<f64>> = (0..n).permutations(n).map(|p| greedy_vertex(f, &p)).collect();
    vertices.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut unique: Vec<Vec<f64>> = Vec::new();
    for v in vertices {
        let dup = unique
            .iter()
            .rev()
            .take_while(|u| (u[0] - v[0]).abs() <= VERTEX_TOL)
            .any(|u| u.iter().zip(&v).all(|(a, b)| (a - b).abs() <= VERTEX_TOL));
        if !dup {
            unique.push(v);
        }
    }
    Ok(BasePolytopeReport { component: None, extreme_count: unique.len(), vertices: unique })
}

/// Checks `y(S) ≤ f(S)` for all `S` and `y(E) = f(E)`.
pub fn in_base_polytope<F: SetFunction + ?Sized>(f: &F, y: &[f64]) -> bool {
    let n = f.ground_size();
    let sum = |s: Subset| s.iter().map(|j| y[j]).sum::<f64>();
    let tol = |v: f64| VERTEX_TOL * (1.0 + v.abs());
    let full = Subset::full(n);
    (sum(full) - f.eval(full)).abs() <= tol(f.eval(full))
        && Subset::all(n).all(|s| sum(s) <= f.eval(s) + tol(f.eval(s)))
}

/// `B = max_i |extreme points of f_i|`.
pub fn max_extreme_count(f: &DecomposableFunction) -> Result<usize> {
    (0..f.num_components())
        .map(|i| extreme_points(&f.component(i)?).map(|r| r.extreme_count))
        .fold_ok(0, usize::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_coverage, gen_facility, gen_hypergraph, CostLaw};
    use crate::model::FnSetFunction;
    use proptest::prelude::*;

    #[test]
    fn indicator_reproduces_set_values() {
        for f in [
            gen_coverage(1, 7, 40, 0.4).unwrap().to_function().unwrap(),
            gen_hypergraph(2, 8, 30, 4).unwrap().to_function().unwrap(),
            gen_facility(3, 6, 20, CostLaw::Uniform).unwrap().to_function().unwrap(),
        ] {
            for s in Subset::all(f.n()) {
                let v = lovasz_eval(&f, &ContinuousPoint::indicator(f.n(), s)).unwrap();
                assert!((v - f.eval(s)).abs() <= 1e-12 * (1.0 + f.eval(s)));
            }
        }
    }

    #[test]
    fn hand_expansion() {
        let f = FnSetFunction::new(2, |s: Subset| s.len().min(1) as f64);
        let v = lovasz_eval(&f, &ContinuousPoint::new(vec![0.7, 0.3]).unwrap()).unwrap();
        assert!((v - 0.7).abs() < 1e-15);
        let zero = lovasz_eval(&f, &ContinuousPoint::new(vec![0.0, 0.0]).unwrap()).unwrap();
        assert_eq!(zero, 0.0);
        // max over the base polytope's vertices of <y, x>
        let r = extreme_points(&f).unwrap();
        let best = r.vertices.iter().map(|y| y[0] * 0.7 + y[1] * 0.3).fold(f64::MIN, f64::max);
        assert!((best - v).abs() < 1e-15);
    }

    #[test]
    fn uses_n_plus_one_evaluations() {
        let calls = std::sync::atomic::AtomicUsize::new(0);
        let f = FnSetFunction::new(5, |s: Subset| {
            calls.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            s.len() as f64
        });
        lovasz_eval(&f, &ContinuousPoint::new(vec![0.1, 0.9, 0.5, 0.5, 0.0]).unwrap()).unwrap();
        assert_eq!(calls.into_inner(), 6);
    }

    #[test]
    fn rejects_points_outside_cube() {
        assert_eq!(
            ContinuousPoint::new(vec![0.5, 1.2]),
            Err(Error::CoordinateOutOfRange { index: 1, value: 1.2 })
        );
    }

    #[test]
    fn extreme_point_examples() {
        let modular = FnSetFunction::new(4, |s: Subset| s.iter().map(|e| e as f64 + 1.0).sum());
        assert_eq!(extreme_points(&modular).unwrap().extreme_count, 1);

        let f = FnSetFunction::new(2, |s: Subset| s.len().min(1) as f64);
        let r = extreme_points(&f).unwrap();
        assert_eq!(r.vertices, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);

        for size in 1..=4 {
            let sets = Subset::from_indices((0..size).map(|j| j + 1)).unwrap();
            let cov = FnSetFunction::new(6, move |s: Subset| (!s.intersection(sets).is_empty()) as u8 as f64);
            let r = extreme_points(&cov).unwrap();
            assert_eq!(r.extreme_count, size);
            assert!(r.vertices.iter().all(|y| in_base_polytope(&cov, y)));
        }
        let big = FnSetFunction::new(9, |s: Subset| s.len() as f64);
        assert!(extreme_points(&big).is_err());
    }

    #[test]
    fn extension_is_linear_in_components() {
        let f = gen_hypergraph(4, 6, 12, 3).unwrap().to_function().unwrap();
        let w: Vec<f64> = (0..f.num_components()).map(|i| (i % 3) as f64 * 0.75).collect();
        let weighted = crate::model::WeightedSum::new(&f, &w).unwrap();
        let x = ContinuousPoint::new(vec![0.2, 0.9, 0.4, 0.4, 0.05, 1.0]).unwrap();
        let lhs = lovasz_eval(&weighted, &x).unwrap();
        let rhs: f64 = (0..f.num_components())
            .map(|i| w[i] * lovasz_eval(&f.component(i).unwrap(), &x).unwrap())
            .sum();
        assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
    }

    proptest! {
        #[test]
        fn positively_homogeneous(seed in 0u64..1000, x in proptest::collection::vec(0.0f64..=1.0, 7), c in 0.0f64..=1.0) {
            let f = gen_coverage(seed, 7, 30, 0.4).unwrap().to_function().unwrap();
            let p = ContinuousPoint::new(x).unwrap();
            let a = lovasz_eval(&f, &p.scaled(c).unwrap()).unwrap();
            let b = c * lovasz_eval(&f, &p).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}
