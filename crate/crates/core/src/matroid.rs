use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::GroundSet;
use crate::subset::Subset;

/// Default cap on the number of independent sets [`enumerate_independent`] yields.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Independence oracle over `{0, .., n-1}`.
pub trait Matroid: Sync {
    fn ground_size(&self) -> usize;

    fn is_independent(&self, s: Subset) -> bool;

    /// Size of the largest independent set.
    fn rank(&self) -> usize;
}

/// Checked independence query.
pub fn is_independent<M: Matroid + ?Sized>(m: &M, s: Subset) -> Result<bool> {
    s.check_within(m.ground_size())?;
    Ok(m.is_independent(s))
}

/// All sets of size at most `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformMatroid {
    n: usize,
    k: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        GroundSet::new(n)?;
        Ok(UniformMatroid { n, k })
    }

    pub fn capacity(&self) -> usize {
        self.k
    }
}

impl Matroid for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn is_independent(&self, s: Subset) -> bool {
        s.len() <= self.k
    }
    fn rank(&self) -> usize {
        self.k.min(self.n)
    }
}

/// JSON shape: `{"blocks": [[0, 1], [2]], "capacities": [1, 1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub blocks: Vec<Vec<usize>>,
    pub capacities: Vec<usize>,
}

/// At most `capacities[b]` elements from each block `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    n: usize,
    blocks: Vec<Subset>,
    capacities: Vec<usize>,
}

impl PartitionMatroid {
    /// Blocks must be disjoint and cover `{0, .., n-1}` for `n = Σ |block|`.
    pub fn new(spec: &PartitionSpec) -> Result<Self> {
        if spec.blocks.len() != spec.capacities.len() {
            return Err(Error::LengthMismatch {
                expected: spec.blocks.len(),
                got: spec.capacities.len(),
            });
        }
        let n: usize = spec.blocks.iter().map(Vec::len).sum();
        GroundSet::new(n)?;
        let mut seen = Subset::EMPTY;
        let mut blocks = Vec::with_capacity(spec.blocks.len());
        for b in &spec.blocks {
            let mask = Subset::from_indices(b.iter().copied())?;
            mask.check_within(n)?;
            if mask.len() != b.len() || !mask.intersection(seen).is_empty() {
                return Err(Error::InvalidParameter("partition blocks overlap".into()));
            }
            seen = seen.union(mask);
            blocks.push(mask);
        }
        Ok(PartitionMatroid { n, blocks, capacities: spec.capacities.clone() })
    }

    pub fn spec(&self) -> PartitionSpec {
        PartitionSpec {
            blocks: self.blocks.iter().map(|b| b.to_vec()).collect(),
            capacities: self.capacities.clone(),
        }
    }
}

impl Matroid for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn is_independent(&self, s: Subset) -> bool {
        self.blocks
            .iter()
            .zip(&self.capacities)
            .all(|(b, &cap)| s.intersection(*b).len() <= cap)
    }
    fn rank(&self) -> usize {
        self.blocks.iter().zip(&self.capacities).map(|(b, &c)| c.min(b.len())).sum()
    }
}

/// Every nonempty independent set, in lexicographic order of the sorted
/// index lists. Fails once more than `budget` sets would be produced.
pub fn enumerate_independent<M: Matroid + ?Sized>(m: &M, budget: usize) -> Result<Vec<Subset>> {
    let n = m.ground_size();
    let mut out = Vec::new();
    // depth-first over increasing extensions; downward closure makes pruning exact
    let mut stack: Vec<(Subset, usize)> = vec![(Subset::EMPTY, 0)];
    while let Some((set, next)) = stack.pop() {
        for e in (next..n).rev() {
            let ext = set.with(e);
            if m.is_independent(ext) {
                stack.push((ext, e + 1));
            }
        }
        if !set.is_empty() {
            if out.len() == budget {
                return Err(Error::BudgetExceeded { budget });
            }
            out.push(set);
        }
    }
    Ok(out)
}

/// Verifies the empty set, downward closure and exchange axioms by
/// brute force. Returns a description of the first failure.
pub fn check_axioms<M: Matroid + ?Sized>(m: &M) -> Result<Option<String>> {
    let n = m.ground_size();
    if n > 12 {
        return Err(Error::TooLargeForExhaustive { n, limit: 12 });
    }
    if !m.is_independent(Subset::EMPTY) {
        return Ok(Some("empty set is dependent".into()));
    }
    let indep: Vec<Subset> = Subset::all(n).filter(|s| m.is_independent(*s)).collect();
    for &s in &indep {
        for e in s {
            if !m.is_independent(s.without(e)) {
                return Ok(Some(format!("{s:?} independent but {:?} is not", s.without(e))));
            }
        }
    }
    for &a in &indep {
        for &b in &indep {
            if a.len() < b.len() && !b.difference(a).iter().any(|e| m.is_independent(a.with(e))) {
                return Ok(Some(format!("exchange fails for {a:?} and {b:?}")));
            }
        }
    }
    let max = indep.iter().map(|s| s.len()).max().unwrap_or(0);
    if max != m.rank() {
        return Ok(Some(format!("rank {} but largest independent set has {max}", m.rank())));
    }
    Ok(None)
}
