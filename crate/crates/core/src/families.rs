//! Concrete submodular families: maximum coverage, facility location,
//! hypergraph cut penalties and explicit tables, plus seeded generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Component, DecomposableFunction, GroundSet, Penalty};
use crate::subset::{Subset, MAX_GROUND};

/// Ground elements are the sets `S_a`; each universe element `i` is a component
/// whose value is 1 iff some chosen set contains it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageInstance {
    n_sets: usize,
    /// `covers[i]`: sorted indices of the sets containing universe element `i`.
    covers: Vec<Vec<usize>>,
    /// Universe elements dropped because no set covered them.
    dropped: usize,
}

impl CoverageInstance {
    /// Builds an instance, dropping universe elements with no covering set.
    pub fn new(n_sets: usize, covers: Vec<Vec<usize>>) -> Result<Self> {
        GroundSet::new(n_sets)?;
        let total = covers.len();
        let mut kept = Vec::with_capacity(total);
        for mut c in covers {
            if let Some(&bad) = c.iter().find(|&&a| a >= n_sets) {
                return Err(Error::ElementOutOfRange { element: bad, n: n_sets });
            }
            if c.is_empty() {
                continue;
            }
            c.sort_unstable();
            c.dedup();
            kept.push(c);
        }
        if kept.is_empty() {
            return Err(Error::AllZero);
        }
        let dropped = total - kept.len();
        Ok(CoverageInstance { n_sets, covers: kept, dropped })
    }

    /// From `(universe element, set)` incidence pairs.
    pub fn from_edges(n_sets: usize, universe_size: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut covers = vec![Vec::new(); universe_size];
        for &(i, a) in edges {
            if i >= universe_size {
                return Err(Error::ElementOutOfRange { element: i, n: universe_size });
            }
            covers[i].push(a);
        }
        Self::new(n_sets, covers)
    }

    pub fn n_sets(&self) -> usize {
        self.n_sets
    }

    pub fn universe_size(&self) -> usize {
        self.covers.len()
    }

    pub fn covers(&self) -> &[Vec<usize>] {
        &self.covers
    }

    pub fn dropped(&self) -> usize {
        self.dropped
    }

    /// `(universe element, set)` pairs in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.covers
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&a| (i, a)))
            .collect()
    }

    /// `|S_a|` for every set `a`.
    pub fn set_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_sets];
        for c in &self.covers {
            for &a in c {
                sizes[a] += 1;
            }
        }
        sizes
    }

    pub fn component_eval(&self, i: usize, chosen: Subset) -> Result<f64> {
        let c = self
            .covers
            .get(i)
            .ok_or(Error::ComponentOutOfRange { index: i, len: self.covers.len() })?;
        chosen.check_within(self.n_sets)?;
        Ok(c.iter().any(|&a| chosen.contains(a)) as u8 as f64)
    }

    pub fn to_function(&self) -> Result<DecomposableFunction> {
        let comps = self
            .covers
            .iter()
            .map(|c| Subset::from_indices(c.iter().copied()).map(Component::coverage))
            .collect::<Result<Vec<_>>>()?;
        DecomposableFunction::new(GroundSet::new(self.n_sets)?, comps)
    }
}

/// `f_i(A) = max_{j ∈ A} cost(i, j)` for each client `i` over facilities `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacilityLocationInstance {
    n_facilities: usize,
    /// Row-major `n_clients × n_facilities`.
    cost: Vec<f64>,
}

impl FacilityLocationInstance {
    pub fn new(n_facilities: usize, cost: Vec<f64>) -> Result<Self> {
        GroundSet::new(n_facilities)?;
        if cost.is_empty() || !cost.len().is_multiple_of(n_facilities) {
            return Err(Error::InvalidParameter(format!(
                "cost matrix of {} entries is not a positive multiple of {n_facilities}",
                cost.len()
            )));
        }
        if let Some(v) = cost.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::NegativeValue(*v));
        }
        Ok(FacilityLocationInstance { n_facilities, cost })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("ragged cost matrix".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn n_facilities(&self) -> usize {
        self.n_facilities
    }

    pub fn n_clients(&self) -> usize {
        self.cost.len() / self.n_facilities
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn row(&self, client: usize) -> &[f64] {
        &self.cost[client * self.n_facilities..(client + 1) * self.n_facilities]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.cost.chunks_exact(self.n_facilities)
    }

    /// A client whose row is all zero contributes nothing.
    pub fn is_inert(&self, client: usize) -> bool {
        self.row(client).iter().all(|c| *c == 0.0)
    }

    pub fn component_eval(&self, client: usize, chosen: Subset) -> Result<f64> {
        if client >= self.n_clients() {
            return Err(Error::ComponentOutOfRange { index: client, len: self.n_clients() });
        }
        chosen.check_within(self.n_facilities)?;
        let row = self.row(client);
        Ok(chosen.iter().map(|j| row[j]).fold(0.0, f64::max))
    }

    pub fn to_function(&self) -> Result<DecomposableFunction> {
        let comps = self
            .rows()
            .map(|r| Component::facility(r.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        DecomposableFunction::new(GroundSet::new(self.n_facilities)?, comps)
    }
}

/// Turns client-to-facility distances into wait-time savings:
/// `cost(v, u) = max_{u'} d(u', v) - d(u, v)`.
pub fn uber_transform(distances: &[Vec<f64>]) -> Result<FacilityLocationInstance> {
    if distances.is_empty() || distances[0].is_empty() {
        return Err(Error::InvalidParameter("empty distance matrix".into()));
    }
    let rows = distances
        .iter()
        .map(|row| {
            if let Some(v) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::NegativeValue(*v));
            }
            let far = row.iter().copied().fold(0.0, f64::max);
            Ok(row.iter().map(|d| far - d).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    FacilityLocationInstance::from_rows(&rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperEdge {
    pub vertices: Vec<usize>,
    pub penalty: Penalty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergraphCutInstance {
    n_vertices: usize,
    edges: Vec<HyperEdge>,
}

impl HypergraphCutInstance {
    pub fn new(n_vertices: usize, edges: Vec<HyperEdge>) -> Result<Self> {
        GroundSet::new(n_vertices)?;
        if edges.is_empty() {
            return Err(Error::NoComponents);
        }
        for e in &edges {
            if e.vertices.is_empty() {
                return Err(Error::InvalidParameter("hyperedge must be nonempty".into()));
            }
            if let Some(&v) = e.vertices.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::ElementOutOfRange { element: v, n: n_vertices });
            }
        }
        Ok(HypergraphCutInstance { n_vertices, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[HyperEdge] {
        &self.edges
    }

    pub fn component_eval(&self, e: usize, s: Subset) -> Result<f64> {
        let edge = self
            .edges
            .get(e)
            .ok_or(Error::ComponentOutOfRange { index: e, len: self.edges.len() })?;
        s.check_within(self.n_vertices)?;
        let mask = Subset::from_indices(edge.vertices.iter().copied())?;
        let inside = s.intersection(mask).len();
        Ok(edge.penalty.apply(inside, mask.len() - inside))
    }

    pub fn to_function(&self) -> Result<DecomposableFunction> {
        let comps = self
            .edges
            .iter()
            .map(|e| Component::hyper_cut(Subset::from_indices(e.vertices.iter().copied())?, e.penalty))
            .collect::<Result<Vec<_>>>()?;
        DecomposableFunction::new(GroundSet::new(self.n_vertices)?, comps)
    }
}

/// A list of explicit value tables over `n ≤ 10` elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableFunction {
    pub n: usize,
    pub values: Vec<Vec<f64>>,
    #[serde(default)]
    pub monotone: bool,
}

impl TableFunction {
    pub fn to_function(&self) -> Result<DecomposableFunction> {
        let comps = self
            .values
            .iter()
            .map(|v| {
                if v.len() != 1usize << self.n.min(MAX_GROUND - 1) {
                    return Err(Error::LengthMismatch { expected: 1 << self.n, got: v.len() });
                }
                Component::table(v.clone(), self.monotone)
            })
            .collect::<Result<Vec<_>>>()?;
        DecomposableFunction::new(GroundSet::new(self.n)?, comps)
    }
}

/// Each universe element joins each set independently with probability
/// `density`; elements left uncovered are redrawn.
pub fn gen_coverage(seed: u64, n_sets: usize, universe_size: usize, density: f64) -> Result<CoverageInstance> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParameter(format!("density {density} not in (0, 1]")));
    }
    if density * (n_sets as f64) < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "density {density} with {n_sets} sets covers fewer than one set per element"
        )));
    }
    if universe_size == 0 {
        return Err(Error::InvalidParameter("universe must be nonempty".into()));
    }
    GroundSet::new(n_sets)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let covers = (0..universe_size)
        .map(|_| loop {
            let c: Vec<usize> = (0..n_sets).filter(|_| rng.random::<f64>() < density).collect();
            if !c.is_empty() {
                break c;
            }
        })
        .collect();
    CoverageInstance::new(n_sets, covers)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostLaw {
    /// i.i.d. uniform(0, 1) costs.
    Uniform,
    /// Clients and facilities scattered around `centers` hidden hubs in the
    /// unit square; costs are Manhattan wait-time savings.
    Clustered { centers: usize },
}

/// Positions in the unit square behind a clustered facility instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacilityLayout {
    pub facilities: Vec<[f64; 2]>,
    pub clients: Vec<[f64; 2]>,
}

impl FacilityLayout {
    /// Client-by-facility Manhattan distances.
    pub fn manhattan_distances(&self) -> Vec<Vec<f64>> {
        self.clients
            .iter()
            .map(|c| {
                self.facilities
                    .iter()
                    .map(|f| (c[0] - f[0]).abs() + (c[1] - f[1]).abs())
                    .collect()
            })
            .collect()
    }

    pub fn to_instance(&self) -> Result<FacilityLocationInstance> {
        uber_transform(&self.manhattan_distances())
    }
}

/// Hub spread of facilities around a center.
pub const FACILITY_SPREAD: f64 = 0.08;
/// Hub spread of clients around a center.
pub const CLIENT_SPREAD: f64 = 0.05;

/// Facility `j` sits near hub `j mod centers`; each client picks a hub
/// uniformly and lands near it. Coordinates are clamped to the unit square.
pub fn gen_clustered_layout(seed: u64, n_facilities: usize, n_clients: usize, centers: usize) -> Result<FacilityLayout> {
    if centers == 0 {
        return Err(Error::InvalidParameter("clustered law needs at least one center".into()));
    }
    GroundSet::new(n_facilities)?;
    if n_clients == 0 {
        return Err(Error::InvalidParameter("need at least one client".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hubs: Vec<[f64; 2]> = (0..centers).map(|_| [rng.random(), rng.random()]).collect();
    let fac_noise = Normal::new(0.0, FACILITY_SPREAD).expect("valid std");
    let cli_noise = Normal::new(0.0, CLIENT_SPREAD).expect("valid std");
    let near = |hub: [f64; 2], noise: &Normal<f64>, rng: &mut ChaCha8Rng| {
        [
            (hub[0] + noise.sample(rng)).clamp(0.0, 1.0),
            (hub[1] + noise.sample(rng)).clamp(0.0, 1.0),
        ]
    };
    let facilities = (0..n_facilities)
        .map(|j| near(hubs[j % centers], &fac_noise, &mut rng))
        .collect();
    let clients = (0..n_clients)
        .map(|_| {
            let h = rng.random_range(0..centers);
            near(hubs[h], &cli_noise, &mut rng)
        })
        .collect();
    Ok(FacilityLayout { facilities, clients })
}

pub fn gen_facility(seed: u64, n_facilities: usize, n_clients: usize, law: CostLaw) -> Result<FacilityLocationInstance> {
    match law {
        CostLaw::Uniform => {
            GroundSet::new(n_facilities)?;
            if n_clients == 0 {
                return Err(Error::InvalidParameter("need at least one client".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cost = (0..n_facilities * n_clients).map(|_| rng.random::<f64>()).collect();
            FacilityLocationInstance::new(n_facilities, cost)
        }
        CostLaw::Clustered { centers } => {
            gen_clustered_layout(seed, n_facilities, n_clients, centers)?.to_instance()
        }
    }
}

/// Random hyperedges of size `2..=max_size` with uniformly chosen penalties.
pub fn gen_hypergraph(seed: u64, n_vertices: usize, n_edges: usize, max_size: usize) -> Result<HypergraphCutInstance> {
    if max_size < 2 || max_size > n_vertices {
        return Err(Error::InvalidParameter(format!(
            "hyperedge size bound {max_size} must lie in [2, {n_vertices}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = [Penalty::CutIndicator, Penalty::Linear, Penalty::Quadratic];
    let edges = (0..n_edges)
        .map(|_| {
            let size = rng.random_range(2..=max_size);
            let mut vertices = rand::seq::index::sample(&mut rng, n_vertices, size).into_vec();
            vertices.sort_unstable();
            HyperEdge { vertices, penalty: kinds[rng.random_range(0..3)] }
        })
        .collect();
    HypergraphCutInstance::new(n_vertices, edges)
}
