//! Cross-checks against brute-force oracles written directly over the
//! instance definitions, independent of the library's evaluation paths.

use proptest::prelude::*;
use submod_core::families::{gen_coverage, gen_facility, gen_hypergraph, CostLaw, CoverageInstance, FacilityLocationInstance};
use submod_core::importance::{pi_coverage, pi_exact, pi_facility, pi_upper_monotone};
use submod_core::lovasz::{lovasz_eval, max_extreme_count, ContinuousPoint};
use submod_core::sparsify::{kappa_unconstrained, sample_sparsifier};
use submod_core::verify::{verify_all_subsets, verify_lovasz};
use submod_core::{SetFunction, SparsifierWeights, Subset};

/// Subsets as plain index vectors, enumerated by counting.
fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |m| (0..n).filter(|j| m >> j & 1 == 1).collect())
}

fn coverage_value(inst: &CoverageInstance, i: usize, a: &[usize]) -> f64 {
    if inst.covers()[i].iter().any(|s| a.contains(s)) { 1.0 } else { 0.0 }
}

fn facility_value(inst: &FacilityLocationInstance, i: usize, a: &[usize]) -> f64 {
    a.iter().map(|&j| inst.row(i)[j]).fold(0.0, f64::max)
}

/// `max_A f_i(A) / F(A)` by direct summation.
fn brute_p(n: usize, comps: usize, value: impl Fn(usize, &[usize]) -> f64) -> Vec<f64> {
    let mut p = vec![0.0f64; comps];
    for a in subsets(n) {
        let vals: Vec<f64> = (0..comps).map(|i| value(i, &a)).collect();
        let total: f64 = vals.iter().sum();
        if total > 0.0 {
            for (pi, v) in p.iter_mut().zip(&vals) {
                *pi = pi.max(v / total);
            }
        }
    }
    p
}

#[test]
fn exact_matches_brute_force_on_fixture() {
    let inst = CoverageInstance::new(3, vec![vec![0], vec![0, 1], vec![1, 2]]).unwrap();
    let oracle = brute_p(3, 3, |i, a| coverage_value(&inst, i, a));
    assert_eq!(oracle, vec![0.5, 0.5, 1.0]);
    assert_eq!(pi_exact(&inst.to_function().unwrap()).unwrap().p_hat(), oracle.as_slice());
}

#[test]
fn complete_incidence_gives_uniform_importance() {
    let inst = gen_coverage(4, 6, 50, 1.0).unwrap();
    let p = pi_coverage(&inst).unwrap();
    assert!(p.p_hat().iter().all(|&x| x == 1.0 / 50.0));
}

#[test]
fn facility_closed_form_matches_fixture_oracle() {
    let inst = FacilityLocationInstance::new(2, vec![3.0, 1.0, 0.0, 2.0]).unwrap();
    let oracle = brute_p(2, 2, |i, a| facility_value(&inst, i, a));
    assert_eq!(oracle, vec![1.0, 2.0 / 3.0]);
    let p = pi_facility(&inst).unwrap();
    for (a, b) in p.p_hat().iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn importance_sum_bounded_by_extreme_points_on_hypergraphs() {
    // non-monotone components still satisfy Σ p_i ≤ n·B
    for seed in 0..10 {
        let f = gen_hypergraph(seed, 5, 15, 3).unwrap().to_function().unwrap();
        let p = pi_exact(&f).unwrap();
        let b = max_extreme_count(&f).unwrap();
        assert!(p.sum_p() <= (5 * b) as f64);
    }
}

#[test]
fn sparsifier_passing_subsets_passes_extension() {
    let f = gen_coverage(30, 6, 120, 0.7).unwrap().to_function().unwrap();
    let p = pi_exact(&f).unwrap();
    let kappa = kappa_unconstrained(6, 0.5, 0.2).unwrap() / 4.0;
    let mut passing = 0;
    for seed in 0..40 {
        let w = sample_sparsifier(&p, kappa, seed).unwrap();
        if verify_all_subsets(&f, &w, 0.5).unwrap().pass {
            passing += 1;
            assert!(verify_lovasz(&f, &w, 0.5, 100, seed).unwrap().pass);
        }
    }
    assert!(passing > 0);
}

#[test]
fn all_ones_extension_is_exact_everywhere() {
    let f = gen_facility(2, 7, 40, CostLaw::Uniform).unwrap().to_function().unwrap();
    let ones = SparsifierWeights::ones(f.num_components());
    let fw = f.weighted(&ones).unwrap();
    let x = ContinuousPoint::new(vec![0.3, 0.1, 0.9, 0.0, 0.55, 0.55, 1.0]).unwrap();
    assert_eq!(lovasz_eval(&f, &x).unwrap(), lovasz_eval(&fw, &x).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn coverage_closed_form_equals_brute_force(seed in 0u64..100_000, n in 2usize..=8, density in 0.2f64..=1.0) {
        prop_assume!(density * n as f64 >= 1.0);
        let inst = gen_coverage(seed, n, 30, density).unwrap();
        let oracle = brute_p(n, inst.universe_size(), |i, a| coverage_value(&inst, i, a));
        let closed = pi_coverage(&inst).unwrap();
        let exact = pi_exact(&inst.to_function().unwrap()).unwrap();
        for (i, o) in oracle.iter().enumerate() {
            prop_assert!((closed.p_hat()[i] - o).abs() <= 1e-12);
            prop_assert!((exact.p_hat()[i] - o).abs() <= 1e-12);
        }
        prop_assert!(closed.sum_p() <= n as f64 + 1e-12);
    }

    #[test]
    fn facility_closed_form_equals_brute_force(seed in 0u64..100_000, n in 1usize..=8, clustered in any::<bool>()) {
        let law = if clustered { CostLaw::Clustered { centers: 3 } } else { CostLaw::Uniform };
        let inst = gen_facility(seed, n, 20, law).unwrap();
        prop_assume!(inst.rows().any(|r| r.iter().any(|c| *c > 0.0)));
        let oracle = brute_p(n, inst.n_clients(), |i, a| facility_value(&inst, i, a));
        let closed = pi_facility(&inst).unwrap();
        for (c, o) in closed.p_hat().iter().zip(&oracle) {
            prop_assert!((c - o).abs() <= 1e-12);
        }
        prop_assert!(closed.sum_p() <= n as f64 + 1e-9);
    }

    #[test]
    fn monotone_surrogate_dominates(seed in 0u64..100_000, n in 2usize..=8, coverage in any::<bool>()) {
        let f = if coverage {
            gen_coverage(seed, n, 25, 0.5).unwrap().to_function().unwrap()
        } else {
            gen_facility(seed, n, 25, CostLaw::Uniform).unwrap().to_function().unwrap()
        };
        let upper = pi_upper_monotone(&f).unwrap();
        let exact = pi_exact(&f).unwrap();
        for (u, e) in upper.p_hat().iter().zip(exact.p_hat()) {
            prop_assert!(u + 1e-12 >= *e);
        }
    }

    #[test]
    fn exact_importance_is_a_probability(seed in 0u64..100_000, n in 3usize..=7) {
        let f = gen_hypergraph(seed, n, 12, 3).unwrap().to_function().unwrap();
        let p = pi_exact(&f).unwrap();
        for &x in p.p_hat() {
            prop_assert!((0.0..=1.0 + 1e-15).contains(&x));
        }
    }

    #[test]
    fn weighted_ones_is_the_sum(seed in 0u64..100_000, n in 1usize..=8) {
        let f = gen_facility(seed, n, 15, CostLaw::Uniform).unwrap().to_function().unwrap();
        let ones = SparsifierWeights::ones(f.num_components());
        for s in Subset::all(n) {
            prop_assert_eq!(f.eval_weighted(&ones, s).unwrap(), f.eval_sum(s).unwrap());
        }
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>()) {
        let f = gen_coverage(1, 6, 80, 0.8).unwrap().to_function().unwrap();
        let p = pi_exact(&f).unwrap();
        let a = sample_sparsifier(&p, 20.0, seed).unwrap();
        let b = sample_sparsifier(&p, 20.0, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn greedy_on_identity_weights_matches_plain_greedy() {
    use submod_core::optimize::greedy_cardinality;
    let f = gen_coverage(8, 10, 100, 0.3).unwrap().to_function().unwrap();
    let ones = SparsifierWeights::ones(f.num_components());
    let plain = greedy_cardinality(&f, 4).unwrap();
    let weighted = greedy_cardinality(&f.weighted(&ones).unwrap(), 4).unwrap();
    assert_eq!(plain.chosen, weighted.chosen);
    assert_eq!(plain.value, f.eval(weighted.set()));
}
