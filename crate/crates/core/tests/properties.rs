use proptest::prelude::*;

use costgreedy::costs::{CostModel, DiscreteTable, QueryCosts};
use costgreedy::decentralized::FifoBuffer;
use costgreedy::oracle::{enumerate_and_verify_optimality, tiny_instance};
use costgreedy::search::{evaluate_batch, query_at, run_search, CostGreedy, Greedy, ZeroWeighting};
use costgreedy::stats::Moments;
use costgreedy::topology::{
    generate_graph, shortcut_counts, CostGraph, GraphSpec, ShortcutLaw, VertexId,
};
use costgreedy::weights::{
    compress, distance_zone, exact_fixpoint, exact_iterate, DegreeConditioning,
    DistanceWeightVector,
};

fn law() -> impl Strategy<Value = ShortcutLaw> {
    prop_oneof![
        (0u32..6).prop_map(ShortcutLaw::Constant),
        (1u32..8, 0.05f64..0.95, 0u32..3).prop_map(|(a, p, b)| ShortcutLaw::TwoType {
            count_a: a,
            fraction_a: p,
            count_b: b
        }),
        (1.2f64..3.0).prop_map(|t| ShortcutLaw::PowerLaw { tail: t }),
    ]
}

fn cost_model() -> impl Strategy<Value = CostModel> {
    prop_oneof![
        (0.1f64..3.0).prop_map(CostModel::Constant),
        (0.2f64..4.0).prop_map(|rate| CostModel::Exponential { rate }),
        Just(CostModel::TwoPoint),
        proptest::collection::vec((0.0f64..5.0, 0.1f64..1.0), 1..5).prop_map(|vp| {
            let total: f64 = vp.iter().map(|p| p.1).sum();
            let (v, p): (Vec<f64>, Vec<f64>) = vp.into_iter().map(|(v, p)| (v, p / total)).unzip();
            CostModel::Discrete(DiscreteTable::new(v, p).unwrap())
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph_text_round_trips(n in 2u32..300, law in law(), alpha in 0.0f64..2.5, seed: u64) {
        let g = generate_graph(&GraphSpec { n, alpha, shortcuts: law, seed }).unwrap();
        let back = CostGraph::read_text(g.to_text().as_bytes()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn shortcut_counts_follow_law(n in 2u32..500, law in law(), seed: u64) {
        let spec = GraphSpec { n, alpha: 1.0, shortcuts: law.clone(), seed };
        let counts = shortcut_counts(&spec);
        prop_assert_eq!(counts.len(), n as usize);
        match law {
            ShortcutLaw::Constant(q) => prop_assert!(counts.iter().all(|&c| c == q)),
            ShortcutLaw::TwoType { count_a, fraction_a, count_b } => {
                let heavy = (fraction_a * n as f64).floor() as usize;
                if count_a != count_b {
                    prop_assert_eq!(counts.iter().filter(|&&c| c == count_a).count(), heavy);
                }
                prop_assert!(counts.iter().all(|&c| c == count_a || c == count_b));
            }
            ShortcutLaw::PowerLaw { .. } => prop_assert!(counts.iter().all(|&c| c >= 1 && c < n)),
        }
    }

    #[test]
    fn every_search_is_forward(n in 4u32..400, law in law(), model in cost_model(), seed: u64, i in 0u64..100) {
        let g = generate_graph(&GraphSpec { n, alpha: 1.0, shortcuts: law, seed }).unwrap();
        let q = query_at(n, seed, i);
        prop_assert_ne!(q.source, q.target);
        let costs = QueryCosts::new(&model, q.cost_seed);
        for r in [
            run_search(&g, &costs, q.source, q.target, &Greedy, &ZeroWeighting).unwrap(),
            run_search(&g, &costs, q.source, q.target, &CostGreedy, &ZeroWeighting).unwrap(),
        ] {
            prop_assert!(r.path.windows(2).all(|p| g.distance(p[1], q.target) < g.distance(p[0], q.target)));
            prop_assert!(r.steps <= g.distance(q.source, q.target));
            prop_assert!(r.cost + 1e-9 >= r.min_tally);
            let rem = r.remaining_costs();
            prop_assert!((rem[0] - r.cost).abs() < 1e-9);
            prop_assert_eq!(*rem.last().unwrap(), 0.0);
        }
    }

    #[test]
    fn quantiles_are_monotone_and_in_support(model in cost_model(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(model.quantile(lo) <= model.quantile(hi));
        if let Some(t) = model.as_discrete() {
            prop_assert!(t.values().contains(&model.quantile(lo)));
            prop_assert!(model.expected_min_of_k(3) <= model.expected_min_of_k(2) + 1e-12);
            prop_assert!(model.expected_min_of_k(1) <= model.expected_cost() + 1e-9);
        }
    }

    #[test]
    fn compressed_lookup_is_zone_faithful(
        n in 4u32..2000,
        k_z in 1usize..6,
        values in proptest::collection::vec(0.0f64..100.0, 2000),
    ) {
        let v = DistanceWeightVector::from_values(&values[..n as usize]);
        let c = compress(&v, k_z);
        prop_assert_eq!(c.lookup(0), 0.0);
        for d in 1..n {
            let zone_lo = 1u32 << distance_zone(d);
            let zone_hi = (zone_lo * 2).min(n);
            let zone = &values[zone_lo as usize..zone_hi as usize];
            let lo = zone.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = zone.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let got = c.lookup(d);
            prop_assert!(got >= lo - 1e-9 && got <= hi + 1e-9);
        }
        prop_assert!(c.entries_per_class() <= k_z * (32 - (n - 1).leading_zeros()) as usize);
    }

    #[test]
    fn fifo_keeps_last_m(m in 1usize..30, xs in proptest::collection::vec(-10.0f64..10.0, 0..100)) {
        let mut b = FifoBuffer::new(m);
        for &x in &xs {
            b.push(x);
        }
        let tail: Vec<f64> = xs[xs.len().saturating_sub(m)..].to_vec();
        prop_assert_eq!(b.iter().collect::<Vec<_>>(), tail.clone());
        let mean = if tail.is_empty() { 0.0 } else { tail.iter().sum::<f64>() / tail.len() as f64 };
        prop_assert!((b.mean() - mean).abs() < 1e-9);
    }

    #[test]
    fn moments_merge_like_concatenation(a in proptest::collection::vec(-1e3f64..1e3, 0..50), b in proptest::collection::vec(-1e3f64..1e3, 0..50)) {
        let mut m: Moments = a.iter().copied().collect();
        m.merge(&b.iter().copied().collect());
        let all: Moments = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(m.count, all.count);
        prop_assert!((m.mean() - all.mean()).abs() < 1e-6);
        prop_assert!((m.variance() - all.variance()).abs() < 1e-3 * (1.0 + all.variance()));
    }

    #[test]
    fn exact_fixed_point_solves_optimality_equation(seed: u64) {
        let inst = tiny_instance(seed);
        let table = CostModel::TwoPoint.as_discrete().unwrap();
        let w = exact_fixpoint(&inst.graph, &table, inst.target).unwrap();
        prop_assert_eq!(w.values()[inst.target.index()], 0.0);
        let again = exact_iterate(&inst.graph, &table, w.values(), inst.target).unwrap();
        prop_assert_eq!(again, w.values().to_vec());
    }

    #[test]
    fn fixed_point_beats_every_policy(seed: u64, z in 0u32..6) {
        let inst = tiny_instance(seed);
        let z = VertexId(z % inst.graph.n());
        let table = CostModel::TwoPoint.as_discrete().unwrap();
        let r = enumerate_and_verify_optimality(&inst.graph, &table, z).unwrap();
        prop_assert!(r.pass(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn batches_are_reproducible(n in 16u32..256, seed: u64, queries in 1usize..400) {
        let g = generate_graph(&GraphSpec::small_world(n, seed)).unwrap();
        let model = CostModel::Exponential { rate: 1.0 };
        let a = evaluate_batch(&g, &model, &CostGreedy, &ZeroWeighting, queries, seed).unwrap();
        let b = evaluate_batch(&g, &model, &CostGreedy, &ZeroWeighting, queries, seed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a.cost.count, queries as u64);
    }

    #[test]
    fn unconditioned_vectors_ignore_degree(n in 8u32..128, seed: u64) {
        let g = generate_graph(&GraphSpec { n, alpha: 1.0, shortcuts: ShortcutLaw::PowerLaw { tail: 2.0 }, seed }).unwrap();
        prop_assert_eq!(DegreeConditioning::None.class_count(&g), 1);
        prop_assert!(DegreeConditioning::Log2Shortcuts.class_count(&g) >= 1);
    }
}
