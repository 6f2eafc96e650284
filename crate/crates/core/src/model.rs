//! Ground sets, the set-function evaluation contract, and decomposable sums
//! `F = f_1 + .. + f_N` together with their weighted counterparts.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_GROUND};

/// Largest ground set the exhaustive diagnostics accept.
pub const EXHAUSTIVE_LIMIT: usize = 10;

const CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if n > MAX_GROUND {
            return Err(Error::GroundSetTooLarge(n));
        }
        Ok(GroundSet { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut g = GroundSet::new(labels.len())?;
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }
}

/// Anything that can be evaluated on subsets of a ground set.
pub trait SetFunction: Sync {
    fn ground_size(&self) -> usize;

    fn eval(&self, s: Subset) -> f64;

    /// Component oracle calls one [`SetFunction::eval`] costs.
    fn oracle_cost(&self) -> usize {
        1
    }
}

impl<T: SetFunction + ?Sized> SetFunction for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn eval(&self, s: Subset) -> f64 {
        (**self).eval(s)
    }
    fn oracle_cost(&self) -> usize {
        (**self).oracle_cost()
    }
}

/// Wraps a closure as a [`SetFunction`].
pub struct FnSetFunction<F> {
    n: usize,
    f: F,
}

impl<F: Fn(Subset) -> f64 + Sync> FnSetFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnSetFunction { n, f }
    }
}

impl<F: Fn(Subset) -> f64 + Sync> SetFunction for FnSetFunction<F> {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn eval(&self, s: Subset) -> f64 {
        (self.f)(s)
    }
}

/// Splitting penalty applied to a hyperedge `e` given `a = |S ∩ e|` and
/// `b = |e \ S|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Penalty {
    /// 1 iff `S` splits `e`.
    CutIndicator,
    /// `min(a, b)`.
    Linear,
    /// `a * b`.
    Quadratic,
}

impl Penalty {
    pub fn apply(self, inside: usize, outside: usize) -> f64 {
        match self {
            Penalty::CutIndicator => (inside > 0 && outside > 0) as u8 as f64,
            Penalty::Linear => inside.min(outside) as f64,
            Penalty::Quadratic => (inside * outside) as f64,
        }
    }
}

/// One nonnegative, normalized submodular summand.
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    /// Indicator that `S` meets `sets` (a universe element and the sets covering it).
    Coverage { sets: Subset },
    /// `max_{j ∈ S} costs[j]`, zero on the empty set.
    Facility { costs: Arc<[f64]> },
    /// Penalty of the split of `edge` induced by `S ∩ edge`.
    HyperCut { edge: Subset, penalty: Penalty },
    /// Explicit value table indexed by subset bitmask.
    Table { values: Arc<[f64]>, monotone: bool },
    /// `Σ_{j ∈ S} weights[j]`.
    Modular { weights: Arc<[f64]> },
}

impl Component {
    pub fn coverage(sets: Subset) -> Self {
        Component::Coverage { sets }
    }

    pub fn facility(costs: Vec<f64>) -> Result<Self> {
        check_nonnegative(&costs)?;
        Ok(Component::Facility { costs: costs.into() })
    }

    pub fn hyper_cut(edge: Subset, penalty: Penalty) -> Result<Self> {
        if edge.is_empty() {
            return Err(Error::InvalidParameter("hyperedge must be nonempty".into()));
        }
        Ok(Component::HyperCut { edge, penalty })
    }

    /// `values` has `2^n` entries indexed by bitmask; `values[0]` must be 0.
    /// `monotone` is the caller's claim and is not verified here.
    pub fn table(values: Vec<f64>, monotone: bool) -> Result<Self> {
        if values.is_empty() || !values.len().is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "table length {} is not a power of two",
                values.len()
            )));
        }
        if values.len() > 1 << EXHAUSTIVE_LIMIT {
            return Err(Error::TooLargeForExhaustive {
                n: values.len().trailing_zeros() as usize,
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        check_nonnegative(&values)?;
        if values[0] != 0.0 {
            return Err(Error::NotNormalized(values[0]));
        }
        Ok(Component::Table { values: values.into(), monotone })
    }

    pub fn modular(weights: Vec<f64>) -> Result<Self> {
        check_nonnegative(&weights)?;
        Ok(Component::Modular { weights: weights.into() })
    }

    /// Number of ground elements this component needs to exist.
    fn min_ground(&self) -> usize {
        let top = |s: Subset| 64 - s.bits().leading_zeros() as usize;
        match self {
            Component::Coverage { sets } => top(*sets),
            Component::Facility { costs } => costs.len(),
            Component::HyperCut { edge, .. } => top(*edge),
            Component::Table { values, .. } => values.len().trailing_zeros() as usize,
            Component::Modular { weights } => weights.len(),
        }
    }

    pub fn monotone_claim(&self) -> bool {
        match self {
            Component::Coverage { .. } | Component::Facility { .. } | Component::Modular { .. } => {
                true
            }
            Component::HyperCut { .. } => false,
            Component::Table { monotone, .. } => *monotone,
        }
    }

    #[inline]
    pub fn eval(&self, s: Subset) -> f64 {
        match self {
            Component::Coverage { sets } => (!s.intersection(*sets).is_empty()) as u8 as f64,
            Component::Facility { costs } => {
                s.iter().map(|j| costs[j]).fold(0.0, f64::max)
            }
            Component::HyperCut { edge, penalty } => {
                let inside = s.intersection(*edge).len();
                penalty.apply(inside, edge.len() - inside)
            }
            Component::Table { values, .. } => values[s.bits() as usize],
            Component::Modular { weights } => s.iter().map(|j| weights[j]).sum(),
        }
    }
}

fn check_nonnegative(values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        Some(v) => Err(Error::NegativeValue(*v)),
        None => Ok(()),
    }
}

/// `F(S) = Σ_i f_i(S)` over a shared ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposableFunction {
    ground: GroundSet,
    components: Vec<Component>,
}

impl DecomposableFunction {
    pub fn new(ground: GroundSet, components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::NoComponents);
        }
        let n = ground.len();
        for c in &components {
            let need = c.min_ground();
            let fits = match c {
                Component::Facility { .. }
                | Component::Modular { .. }
                | Component::Table { .. } => need == n,
                _ => need <= n,
            };
            if !fits {
                return Err(Error::InvalidParameter(format!(
                    "component expects a ground set of size {need}, got {n}"
                )));
            }
            let empty = c.eval(Subset::EMPTY);
            if empty != 0.0 {
                return Err(Error::NotNormalized(empty));
            }
        }
        Ok(DecomposableFunction { ground, components })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, i: usize) -> Result<ComponentView<'_>> {
        let c = self.components.get(i).ok_or(Error::ComponentOutOfRange {
            index: i,
            len: self.components.len(),
        })?;
        Ok(ComponentView { n: self.n(), component: c })
    }

    pub fn all_monotone(&self) -> bool {
        self.components.iter().all(Component::monotone_claim)
    }

    pub fn eval_component(&self, i: usize, s: Subset) -> Result<f64> {
        s.check_within(self.n())?;
        Ok(self.component(i)?.eval(s))
    }

    pub fn eval_sum(&self, s: Subset) -> Result<f64> {
        s.check_within(self.n())?;
        Ok(self.eval(s))
    }

    /// `Σ_i w_i f_i(S)`, touching only components with nonzero weight.
    pub fn eval_weighted(&self, w: &SparsifierWeights, s: Subset) -> Result<f64> {
        s.check_within(self.n())?;
        Ok(self.weighted(w)?.eval(s))
    }

    pub fn weighted<'a>(&'a self, w: &SparsifierWeights) -> Result<WeightedSum<'a>> {
        WeightedSum::new(self, w.weights())
    }
}

impl SetFunction for DecomposableFunction {
    fn ground_size(&self) -> usize {
        self.n()
    }

    fn eval(&self, s: Subset) -> f64 {
        self.components.iter().map(|c| c.eval(s)).sum()
    }

    fn oracle_cost(&self) -> usize {
        self.components.len()
    }
}

/// A single component bound to its ground set size.
#[derive(Debug, Clone, Copy)]
pub struct ComponentView<'a> {
    n: usize,
    component: &'a Component,
}

impl ComponentView<'_> {
    pub fn monotone_claim(&self) -> bool {
        self.component.monotone_claim()
    }
}

impl SetFunction for ComponentView<'_> {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn eval(&self, s: Subset) -> f64 {
        self.component.eval(s)
    }
}

/// `F'(S) = Σ_i w_i f_i(S)` restricted to the support of `w`.
#[derive(Debug, Clone)]
pub struct WeightedSum<'a> {
    f: &'a DecomposableFunction,
    active: Vec<(usize, f64)>,
}

impl<'a> WeightedSum<'a> {
    pub fn new(f: &'a DecomposableFunction, weights: &[f64]) -> Result<Self> {
        if weights.len() != f.num_components() {
            return Err(Error::LengthMismatch {
                expected: f.num_components(),
                got: weights.len(),
            });
        }
        check_nonnegative(weights)?;
        let active = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, w)| (i, *w))
            .collect();
        Ok(WeightedSum { f, active })
    }

    pub fn support_size(&self) -> usize {
        self.active.len()
    }
}

impl SetFunction for WeightedSum<'_> {
    fn ground_size(&self) -> usize {
        self.f.n()
    }

    fn eval(&self, s: Subset) -> f64 {
        let comps = self.f.components();
        self.active.iter().map(|&(i, w)| w * comps[i].eval(s)).sum()
    }

    fn oracle_cost(&self) -> usize {
        self.active.len()
    }
}

/// Which importance estimator produced a set of weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PiMode {
    Exact,
    ExactMatroid,
    ClosedCoverage,
    ClosedFacility,
    UpperMonotone,
    /// Weights supplied externally rather than sampled.
    External,
}

impl PiMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PiMode::Exact => "exact",
            PiMode::ExactMatroid => "exact-matroid",
            PiMode::ClosedCoverage => "closed-coverage",
            PiMode::ClosedFacility => "closed-facility",
            PiMode::UpperMonotone => "upper-monotone",
            PiMode::External => "external",
        }
    }
}

/// A weight vector `w` over the components of a decomposable function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifierWeights {
    weights: Vec<f64>,
    pub seed: u64,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub kappa: Option<f64>,
    pub mode: PiMode,
    /// False when the run used `epsilon > 1`, where no sandwich guarantee is claimed.
    pub guaranteed: bool,
}

impl SparsifierWeights {
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        check_nonnegative(&weights)?;
        Ok(SparsifierWeights {
            weights,
            seed: 0,
            epsilon: None,
            delta: None,
            kappa: None,
            mode: PiMode::External,
            guaranteed: false,
        })
    }

    pub fn ones(len: usize) -> Self {
        Self::from_weights(vec![1.0; len]).expect("ones are nonnegative")
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_weights(vec![0.0; len]).expect("zeros are nonnegative")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Number of strictly positive entries.
    pub fn size(&self) -> usize {
        self.weights.iter().filter(|w| **w > 0.0).count()
    }

    /// `(component, weight)` for every nonzero entry, ascending by component.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().copied().enumerate().filter(|(_, w)| *w > 0.0)
    }
}

/// `f(A ∪ {a}) - f(A)`.
pub fn marginal_gain<F: SetFunction + ?Sized>(f: &F, a: usize, set: Subset) -> Result<f64> {
    let n = f.ground_size();
    if a >= n {
        return Err(Error::ElementOutOfRange { element: a, n });
    }
    set.check_within(n)?;
    if set.contains(a) {
        return Err(Error::ElementAlreadyPresent(a));
    }
    Ok(f.eval(set.with(a)) - f.eval(set))
}

/// `(S, T, e)` with `S ⊆ T`, `e ∉ T` and `f(S+e) - f(S) < f(T+e) - f(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubmodularViolation {
    pub smaller: Subset,
    pub larger: Subset,
    pub element: usize,
}

/// Exhaustively checks diminishing returns; `Ok(None)` means submodular.
pub fn check_submodular<F: SetFunction + ?Sized>(f: &F) -> Result<Option<SubmodularViolation>> {
    let n = f.ground_size();
    exhaustive_guard(n)?;
    let values: Vec<f64> = Subset::all(n).map(|s| f.eval(s)).collect();
    let val = |s: Subset| values[s.bits() as usize];
    for larger in Subset::all(n) {
        let outside = Subset::full(n).difference(larger);
        // enumerate every submask of `larger`
        let mut sub = larger.bits();
        loop {
            let smaller = Subset::from_bits(sub);
            for e in outside {
                let small_gain = val(smaller.with(e)) - val(smaller);
                let large_gain = val(larger.with(e)) - val(larger);
                if small_gain < large_gain - CHECK_TOL * (1.0 + large_gain.abs()) {
                    return Ok(Some(SubmodularViolation { smaller, larger, element: e }));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & larger.bits();
        }
    }
    Ok(None)
}

/// Exhaustively checks `f(S) <= f(S + e)`; returns the first `(S, e)` violating it.
pub fn check_monotone<F: SetFunction + ?Sized>(f: &F) -> Result<Option<(Subset, usize)>> {
    let n = f.ground_size();
    exhaustive_guard(n)?;
    for s in Subset::all(n) {
        let base = f.eval(s);
        for e in Subset::full(n).difference(s) {
            if f.eval(s.with(e)) < base - CHECK_TOL * (1.0 + base.abs()) {
                return Ok(Some((s, e)));
            }
        }
    }
    Ok(None)
}

fn exhaustive_guard(n: usize) -> Result<()> {
    if n > EXHAUSTIVE_LIMIT {
        Err(Error::TooLargeForExhaustive { n, limit: EXHAUSTIVE_LIMIT })
    } else {
        Ok(())
    }
}
