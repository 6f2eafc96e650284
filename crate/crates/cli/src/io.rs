//! On-disk formats: JSON instance envelopes, weight CSVs with JSON sidecars,
//! partition-matroid descriptions, and CSV importers for externally
//! prepared data.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use submod_core::families::{
    uber_transform, CoverageInstance, FacilityLocationInstance, HyperEdge, HypergraphCutInstance, TableFunction,
};
use submod_core::matroid::{Matroid, PartitionMatroid, PartitionSpec, UniformMatroid};
use submod_core::{DecomposableFunction, SparsifierWeights};

/// `{"type": "coverage" | "facility" | "hypergraph" | "table", ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum InstanceFile {
    /// `edges` holds `[component_id, ground_id]` pairs: universe element
    /// `component_id` belongs to set `ground_id`.
    Coverage { n_sets: usize, universe_size: usize, edges: Vec<[usize; 2]> },
    /// Dense row-major `n_clients × n_facilities` cost matrix.
    Facility { n_facilities: usize, n_clients: usize, costs: Vec<f64> },
    Hypergraph { n_vertices: usize, edges: Vec<HyperEdge> },
    /// One list of `2^n` values per component.
    Table {
        n: usize,
        #[serde(default)]
        monotone: bool,
        values: Vec<Vec<f64>>,
    },
}

impl InstanceFile {
    pub fn from_coverage(inst: &CoverageInstance) -> Self {
        InstanceFile::Coverage {
            n_sets: inst.n_sets(),
            universe_size: inst.universe_size(),
            edges: inst.edges().into_iter().map(|(i, a)| [i, a]).collect(),
        }
    }

    pub fn from_facility(inst: &FacilityLocationInstance) -> Self {
        InstanceFile::Facility {
            n_facilities: inst.n_facilities(),
            n_clients: inst.n_clients(),
            costs: inst.cost().to_vec(),
        }
    }

    pub fn from_hypergraph(inst: &HypergraphCutInstance) -> Self {
        InstanceFile::Hypergraph { n_vertices: inst.n_vertices(), edges: inst.edges().to_vec() }
    }

    pub fn family(&self) -> &'static str {
        match self {
            InstanceFile::Coverage { .. } => "coverage",
            InstanceFile::Facility { .. } => "facility",
            InstanceFile::Hypergraph { .. } => "hypergraph",
            InstanceFile::Table { .. } => "table",
        }
    }

    pub fn to_function(&self) -> Result<DecomposableFunction> {
        Ok(match self {
            InstanceFile::Coverage { n_sets, universe_size, edges } => {
                let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
                let inst = CoverageInstance::from_edges(*n_sets, *universe_size, &pairs)?;
                if inst.dropped() > 0 {
                    eprintln!("warning: dropped {} uncovered universe elements", inst.dropped());
                }
                inst.to_function()?
            }
            InstanceFile::Facility { n_facilities, n_clients, costs } => {
                if costs.len() != n_facilities * n_clients {
                    bail!("facility cost matrix has {} entries, expected {n_clients} x {n_facilities}", costs.len());
                }
                FacilityLocationInstance::new(*n_facilities, costs.clone())?.to_function()?
            }
            InstanceFile::Hypergraph { n_vertices, edges } => {
                HypergraphCutInstance::new(*n_vertices, edges.clone())?.to_function()?
            }
            InstanceFile::Table { n, monotone, values } => {
                TableFunction { n: *n, values: values.clone(), monotone: *monotone }.to_function()?
            }
        })
    }
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// `component_id,weight` with a header; zero weights are omitted.
pub fn write_weights(path: &Path, w: &SparsifierWeights) -> Result<()> {
    let mut out = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    out.write_record(["component_id", "weight"])?;
    for (i, x) in w.nonzero() {
        out.write_record([i.to_string(), x.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct WeightRow {
    component_id: usize,
    weight: f64,
}

pub fn read_weights(path: &Path, n_components: usize) -> Result<SparsifierWeights> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut weights = vec![0.0; n_components];
    for row in rdr.deserialize() {
        let row: WeightRow = row.with_context(|| format!("parsing {}", path.display()))?;
        if row.component_id >= n_components {
            bail!(submod_core::Error::ComponentOutOfRange { index: row.component_id, len: n_components });
        }
        weights[row.component_id] = row.weight;
    }
    Ok(SparsifierWeights::from_weights(weights)?)
}

/// Sidecar path for a weights file: `w.csv` -> `w.csv.json`.
pub fn sidecar_path(weights: &Path) -> PathBuf {
    let mut s = weights.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub epsilon: f64,
    pub delta: f64,
    pub kappa: f64,
    pub sum_p: f64,
    pub expected_size: f64,
    pub size: usize,
    pub n: usize,
    pub n_components: usize,
    pub mode: String,
    pub seed: u64,
    pub guaranteed: bool,
    pub matroid: Option<String>,
}

/// `uniform:K` or a path to a partition-matroid JSON file.
pub fn parse_matroid(arg: &str, n: usize) -> Result<Box<dyn Matroid>> {
    if let Some(k) = arg.strip_prefix("uniform:") {
        let k: usize = k.parse().with_context(|| format!("bad uniform capacity in {arg:?}"))?;
        return Ok(Box::new(UniformMatroid::new(n, k)?));
    }
    let file = File::open(arg).with_context(|| format!("opening matroid file {arg}"))?;
    let spec: PartitionSpec = serde_json::from_reader(BufReader::new(file))?;
    let m = PartitionMatroid::new(&spec)?;
    if m.ground_size() != n {
        bail!(submod_core::Error::LengthMismatch { expected: n, got: m.ground_size() });
    }
    Ok(Box::new(m))
}

/// Bipartite incidence CSV with header `component_id,ground_id` (e.g. an
/// artist-label list). Ids are compacted to `0..` in order of first
/// appearance.
pub fn import_edges(path: &Path) -> Result<CoverageInstance> {
    #[derive(Deserialize)]
    struct Edge {
        component_id: String,
        ground_id: String,
    }
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut comp_ids = indexmap_like::Interner::default();
    let mut ground_ids = indexmap_like::Interner::default();
    let mut pairs = Vec::new();
    for row in rdr.deserialize() {
        let e: Edge = row?;
        pairs.push((comp_ids.intern(e.component_id), ground_ids.intern(e.ground_id)));
    }
    Ok(CoverageInstance::from_edges(ground_ids.len(), comp_ids.len(), &pairs)?)
}

/// Pickup points and candidate locations as `lat,lon` CSVs. Costs are
/// Manhattan wait-time savings relative to the farthest location.
pub fn import_pickups(pickups: &Path, locations: &Path) -> Result<FacilityLocationInstance> {
    #[derive(Deserialize)]
    struct Point {
        lat: f64,
        lon: f64,
    }
    let read = |p: &Path| -> Result<Vec<Point>> {
        let mut rdr = csv::Reader::from_path(p).with_context(|| format!("opening {}", p.display()))?;
        rdr.deserialize().map(|r| r.map_err(anyhow::Error::from)).collect()
    };
    let clients = read(pickups)?;
    let sites = read(locations)?;
    let distances: Vec<Vec<f64>> = clients
        .iter()
        .map(|c| sites.iter().map(|s| (c.lat - s.lat).abs() + (c.lon - s.lon).abs()).collect())
        .collect();
    Ok(uber_transform(&distances)?)
}

mod indexmap_like {
    use std::collections::HashMap;

    #[derive(Default)]
    pub struct Interner {
        ids: HashMap<String, usize>,
    }

    impl Interner {
        pub fn intern(&mut self, key: String) -> usize {
            let next = self.ids.len();
            *self.ids.entry(key).or_insert(next)
        }

        pub fn len(&self) -> usize {
            self.ids.len()
        }
    }
}
