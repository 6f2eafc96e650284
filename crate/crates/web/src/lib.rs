//! Browser demo bindings. Every export takes plain numbers and returns a
//! JSON string, `{"error": ...}` on bad input, so the page needs no glue
//! beyond `JSON.parse`.

use serde::Serialize;
use submod_core::families::{gen_clustered_layout, gen_coverage, gen_hypergraph};
use submod_core::importance::{pi_closed, pi_exact};
use submod_core::lovasz::{lovasz_eval, ContinuousPoint};
use submod_core::optimize::lazy_greedy;
use submod_core::sparsify::{kappa_unconstrained, sample_sparsifier};
use submod_core::verify::verify_all_subsets;
use submod_core::Result;
use wasm_bindgen::prelude::*;

fn respond<T: Serialize>(result: Result<T>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e.to_string()),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub epsilon: f64,
    pub kappa: f64,
    pub mean_size: f64,
    pub expected_size: f64,
    pub pass_rate: f64,
}

#[derive(Debug, Serialize)]
pub struct Curve {
    pub n_components: usize,
    pub sum_p: f64,
    pub points: Vec<CurvePoint>,
}

/// Sparsifier size and all-subset pass rate across a log-spaced `ε` grid
/// for a random coverage instance.
pub fn size_curve(n_sets: usize, universe: usize, density: f64, seed: u64, trials: usize, steps: usize) -> Result<Curve> {
    let f = gen_coverage(seed, n_sets, universe, density)?.to_function()?;
    let p = pi_exact(&f)?;
    let steps = steps.max(2);
    let trials = trials.max(1);
    let mut points = Vec::with_capacity(steps);
    for s in 0..steps {
        // 0.1 to 4 on a log scale
        let epsilon = 0.1 * 40f64.powf(s as f64 / (steps - 1) as f64);
        let kappa = kappa_unconstrained(f.n(), epsilon, 0.2)?;
        let (mut total, mut passes) = (0usize, 0usize);
        for t in 0..trials as u64 {
            let w = sample_sparsifier(&p, kappa, seed.wrapping_add(t))?;
            total += w.size();
            passes += usize::from(verify_all_subsets(&f, &w, epsilon)?.pass);
        }
        points.push(CurvePoint {
            epsilon,
            kappa,
            mean_size: total as f64 / trials as f64,
            expected_size: p.p_hat().iter().map(|x| (kappa * x).min(1.0)).sum(),
            pass_rate: passes as f64 / trials as f64,
        });
    }
    Ok(Curve { n_components: f.num_components(), sum_p: p.sum_p(), points })
}

#[derive(Debug, Serialize)]
pub struct LovaszGrid {
    pub resolution: usize,
    pub size: usize,
    pub n_components: usize,
    /// Row-major `F^L(x) / F'^L(x)` with `x_0` along columns and `x_1` along
    /// rows; other coordinates fixed at `rest`. `null` where both vanish.
    pub ratios: Vec<Option<f64>>,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Ratio of the continuous extensions of `F` and a sampled `F'` over a
/// two-coordinate slice of the cube, for a random hypergraph cut function.
pub fn lovasz_slice(
    n_vertices: usize,
    n_edges: usize,
    seed: u64,
    epsilon: f64,
    rest: f64,
    resolution: usize,
) -> Result<LovaszGrid> {
    let f = gen_hypergraph(seed, n_vertices, n_edges, n_vertices.min(4))?.to_function()?;
    let p = pi_exact(&f)?;
    let w = sample_sparsifier(&p, kappa_unconstrained(f.n(), epsilon, 0.2)?, seed)?;
    let fw = f.weighted(&w)?;
    let res = resolution.clamp(2, 128);
    let mut ratios = Vec::with_capacity(res * res);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for row in 0..res {
        for col in 0..res {
            let mut x = vec![rest.clamp(0.0, 1.0); f.n()];
            x[0] = col as f64 / (res - 1) as f64;
            if f.n() > 1 {
                x[1] = row as f64 / (res - 1) as f64;
            }
            let x = ContinuousPoint::new(x)?;
            let (a, b) = (lovasz_eval(&f, &x)?, lovasz_eval(&fw, &x)?);
            let r = if b > 0.0 {
                Some(a / b)
            } else if a > 0.0 {
                Some(f64::INFINITY)
            } else {
                None
            };
            if let Some(r) = r {
                lo = lo.min(r);
                hi = hi.max(r);
            }
            // JSON has no infinity; report it as a missing cell
            ratios.push(r.filter(|r| r.is_finite()));
        }
    }
    Ok(LovaszGrid { resolution: res, size: w.size(), n_components: f.num_components(), ratios, min_ratio: lo, max_ratio: hi })
}

#[derive(Debug, Serialize)]
pub struct FacilityMap {
    pub facilities: Vec<[f64; 2]>,
    pub clients: Vec<[f64; 2]>,
    /// Client indices kept by the sparsifier.
    pub kept: Vec<usize>,
    pub chosen_full: Vec<usize>,
    pub chosen_sparse: Vec<usize>,
    pub value_full: f64,
    /// `F` evaluated on the set chosen from the sparsifier.
    pub value_sparse: f64,
    pub oracle_calls_full: usize,
    pub oracle_calls_sparse: usize,
}

/// Greedy facility placement on the full client set and on a sparsified one.
pub fn facility_map(
    facilities: usize,
    clients: usize,
    centers: usize,
    seed: u64,
    epsilon: f64,
    k: usize,
) -> Result<FacilityMap> {
    let layout = gen_clustered_layout(seed, facilities, clients, centers)?;
    let f = layout.to_instance()?.to_function()?;
    let p = pi_closed(&f)?;
    let w = sample_sparsifier(&p, kappa_unconstrained(f.n(), epsilon, 0.2)?, seed)?;
    let full = lazy_greedy(&f, k)?;
    let sparse = lazy_greedy(&f.weighted(&w)?, k)?;
    Ok(FacilityMap {
        kept: w.nonzero().map(|(i, _)| i).collect(),
        value_sparse: f.eval_sum(sparse.set())?,
        value_full: full.value,
        oracle_calls_full: full.oracle_calls,
        oracle_calls_sparse: sparse.oracle_calls,
        chosen_full: full.chosen,
        chosen_sparse: sparse.chosen,
        facilities: layout.facilities,
        clients: layout.clients,
    })
}

#[wasm_bindgen(js_name = sizeCurve)]
pub fn size_curve_json(n_sets: usize, universe: usize, density: f64, seed: u32, trials: usize, steps: usize) -> String {
    respond(size_curve(n_sets, universe, density, seed.into(), trials, steps))
}

#[wasm_bindgen(js_name = lovaszSlice)]
pub fn lovasz_slice_json(n_vertices: usize, n_edges: usize, seed: u32, epsilon: f64, rest: f64, resolution: usize) -> String {
    respond(lovasz_slice(n_vertices, n_edges, seed.into(), epsilon, rest, resolution))
}

#[wasm_bindgen(js_name = facilityMap)]
pub fn facility_map_json(facilities: usize, clients: usize, centers: usize, seed: u32, epsilon: f64, k: usize) -> String {
    respond(facility_map(facilities, clients, centers, seed.into(), epsilon, k))
}
