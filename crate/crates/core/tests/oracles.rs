//! Randomised sweeps comparing each operation with an independent oracle.

mod common;

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stpaths::pruning::{compute_inverse_scope_traced, compute_scope_traced};
use stpaths::*;

use common::*;

fn pairs(g: &DirectedGraph) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
    g.vertices().flat_map(move |s| g.vertices().filter(move |&t| t != s).map(move |t| (s, t)))
}

fn corpus(seed: u64, graphs: usize, max_n: usize, p: f64) -> Vec<DirectedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..graphs)
        .map(|_| {
            let n = rng.gen_range(2..=max_n);
            random_digraph(n, p, &mut rng)
        })
        .collect()
}

fn set(vs: &VertexSet) -> BTreeSet<VertexId> {
    vs.members().iter().copied().collect()
}

#[test]
fn scope_matches_path_oracle() {
    for g in corpus(1, 60, 8, 0.3) {
        for (s, t) in pairs(&g) {
            assert_eq!(set(&compute_scope(&g, s, t).unwrap()), oracle_scope(&g, s, t));
        }
    }
}

#[test]
fn inverse_scope_is_scope_of_inverse_graph() {
    for g in corpus(2, 60, 8, 0.3) {
        let inv = g.inverse();
        for (s, t) in pairs(&g) {
            assert_eq!(
                set(&compute_inverse_scope(&g, s, t).unwrap()),
                set(&compute_scope(&inv, t, s).unwrap())
            );
        }
    }
}

#[test]
fn scopes_visit_each_edge_at_most_once() {
    for g in corpus(3, 60, 9, 0.4) {
        for (s, t) in pairs(&g) {
            assert!(compute_scope_traced(&g, s, t).unwrap().edges_visited <= g.edge_count());
            assert!(compute_inverse_scope_traced(&g, s, t).unwrap().edges_visited <= g.edge_count());
        }
    }
}

#[test]
fn enumeration_matches_naive_reference() {
    for g in corpus(4, 40, 8, 0.3) {
        for (s, t) in pairs(&g) {
            let mut emitted = Vec::new();
            let out = espe_enumerate(&g, s, t, CountLimits::unlimited(), |p| {
                emitted.push(p.to_vec());
                ControlFlow::Continue(())
            })
            .unwrap();
            assert!(out.complete);
            assert_eq!(out.count, PathCount::from(emitted.len() as u64));
            assert!(emitted.windows(2).all(|w| w[0] < w[1]), "not lexicographic");
            for p in &emitted {
                assert_simple_path(&g, p, s, t);
            }
            let mut reference = naive_paths(&g, s, t);
            reference.sort();
            assert_eq!(emitted, reference);
        }
    }
}

#[test]
fn pruning_preserves_counts_and_paths_stay_in_scope() {
    for g in corpus(5, 200, 9, 0.3) {
        for (s, t) in pairs(&g) {
            let raw = espe_count(&g, s, t, CountLimits::unlimited()).unwrap();
            let mut paths = Vec::new();
            let pruned = pruned_espe_enumerate(&g, s, t, CountLimits::unlimited(), |p| {
                paths.push(p.to_vec());
                ControlFlow::Continue(())
            })
            .unwrap();
            assert_eq!(raw.count, pruned.count);
            assert_eq!(
                pruned_espe_count(&g, s, t, CountLimits::unlimited()).unwrap().count,
                raw.count
            );

            let scope = compute_scope(&g, s, t).unwrap();
            let inverse = compute_inverse_scope(&g, s, t).unwrap();
            for p in &paths {
                assert_simple_path(&g, p, s, t);
                assert!(p.iter().all(|&v| scope.contains(v) && inverse.contains(v)));
            }
        }
    }
}

#[test]
fn intersection_can_contain_vertices_on_no_path() {
    let g = trap_graph();
    let (s, t, b) = (VertexId(0), VertexId(3), VertexId(2));
    let p = prune(&g, s, t).unwrap();
    assert_eq!(p.vertex_count(), 4);
    let on_some_path: BTreeSet<VertexId> = naive_paths(&g, s, t).into_iter().flatten().collect();
    assert!(!on_some_path.contains(&b));

    // and the pruned sampler can strand there
    let m = sampler_exact_moments(&g, s, t, Variant::Pruned, 100).unwrap();
    assert_eq!(m.outcome_count, 2);
    assert_eq!(m.expectation, BigRational::one());
    // outcomes: s-a-t with weight 2, s-a-b dead end; E[X^2] = 1/2 * 4 = 2
    assert_eq!(m.per_sample_variance, BigRational::one());
    let r = estimate_count(&g, s, t, 1_000, 9, Variant::Pruned).unwrap();
    assert!(r.dead_end_samples > 0);
}

#[test]
fn sampler_is_unbiased_for_both_variants() {
    for g in corpus(6, 60, 7, 0.35) {
        for (s, t) in pairs(&g) {
            let count = espe_count(&g, s, t, CountLimits::unlimited()).unwrap().count;
            let count = BigRational::from_integer(BigInt::from(count.0));
            let base = sampler_exact_moments(&g, s, t, Variant::Baseline, 1 << 22).unwrap();
            let pruned = sampler_exact_moments(&g, s, t, Variant::Pruned, 1 << 22).unwrap();
            assert_eq!(base.expectation, count);
            assert_eq!(pruned.expectation, count);
            assert_eq!(base.total_probability, BigRational::one());
            assert_eq!(pruned.total_probability, BigRational::one());
            assert!(pruned.per_sample_variance >= BigRational::zero());
            // holds empirically across the corpus
            assert!(pruned.per_sample_variance <= base.per_sample_variance);
        }
    }
}

#[test]
fn outcome_probability_replays() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in corpus(7, 30, 9, 0.35) {
        for (s, t) in pairs(&g) {
            let o = sample_path(&g, s, t, &mut rng).unwrap();
            // replay: product of |unvisited out-neighbors| at each non-final step
            let mut weight = BigUint::one();
            let mut visited = BTreeSet::new();
            for step in o.path.windows(2) {
                visited.insert(step[0]);
                let choices =
                    g.out_neighbors(step[0]).iter().filter(|w| !visited.contains(w)).count();
                weight *= choices;
            }
            if !o.reached_t {
                let last = *o.path.last().unwrap();
                visited.insert(last);
                assert!(g.out_neighbors(last).iter().all(|w| visited.contains(w)));
            }
            assert_eq!(o.reached_t, o.path.last() == Some(&t));
            assert_eq!(o.weight, weight);
            assert_eq!(o.probability(), BigRational::new(BigInt::one(), BigInt::from(weight)));
        }
    }
}

#[test]
fn estimates_are_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = random_digraph(9, 0.4, &mut rng);
    let (s, t) = (VertexId(0), VertexId(8));
    for variant in [Variant::Baseline, Variant::Pruned] {
        let a = estimate_count(&g, s, t, 500, 77, variant).unwrap();
        let b = estimate_count(&g, s, t, 500, 77, variant).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.sample_variance, b.sample_variance);
        assert_eq!(a.dead_end_samples, b.dead_end_samples);
        assert!(a.dead_end_samples <= a.n_samples);
    }
    let one = espe_count(&g, s, t, CountLimits::unlimited());
    let two = espe_count(&g, s, t, CountLimits::unlimited());
    assert_eq!(one.unwrap().count, two.unwrap().count);
}

#[test]
fn adding_edges_never_decreases_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..40 {
        let n = rng.gen_range(3..=8u32);
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut prev = vec![BigUint::zero(); (n * n) as usize];
        for _ in 0..n * 2 {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v {
                edges.push((u, v));
            }
            let g = DirectedGraph::from_pairs(n as usize, &edges);
            for (s, t) in pairs(&g) {
                let c = espe_count(&g, s, t, CountLimits::unlimited()).unwrap().count.0;
                let slot = &mut prev[(s.0 * n + t.0) as usize];
                assert!(c >= *slot);
                *slot = c;
            }
        }
    }
}

#[test]
fn monte_carlo_stays_within_five_sigma() {
    // K4: C = 5; per-sample variance from the exact decision tree
    let g = complete_digraph(4);
    let (s, t) = (VertexId(0), VertexId(3));
    let m = sampler_exact_moments(&g, s, t, Variant::Baseline, 1_000).unwrap();
    assert_eq!(m.expectation, BigRational::from_integer(BigInt::from(5)));
    let sigma = stpaths::estimator::ratio_to_f64(&m.per_sample_variance).sqrt();
    let n = 100_000u64;
    let bound = 5.0 * sigma / (n as f64).sqrt();
    let hits = (0..100)
        .filter(|&seed| {
            let r = estimate_count(&g, s, t, n, seed, Variant::Baseline).unwrap();
            (r.estimate_f64() - 5.0).abs() <= bound
        })
        .count();
    assert!(hits >= 99, "{hits}/100 seeds within 5 sigma");
}
