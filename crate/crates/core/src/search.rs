//! Forward search strategies and per-query accounting.
//!
//! A strategy implements [`Stepper`] and sees only a [`LocalView`]: the
//! current vertex's out-edges with their realized costs, the distance of
//! each neighbor to the target, the neighbors' weights and shortcut counts,
//! and the model parameters. Costs of edges elsewhere in the graph are not
//! reachable from a stepper.
//!
//! Strategies are registered by name in a [`StepperRegistry`]:
//! `greedy`, `cost-greedy`, `lowest-cost` and `sj`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::costs::{CostModel, EdgeCosts, QueryCosts};
use crate::error::{Error, Result};
use crate::rng::{counter_uniform, derive_path, tag};
use crate::stats::Moments;
use crate::topology::{harmonic_normalizer, CostGraph, EdgeId, VertexId};

/// Estimated remaining cost `w_z(y)`. Implementations must return 0 for `y == z`.
pub trait Weighting: Send + Sync {
    fn weight(&self, g: &CostGraph, y: VertexId, z: VertexId) -> f64;
}

/// `w ≡ 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroWeighting;

impl Weighting for ZeroWeighting {
    fn weight(&self, _: &CostGraph, _: VertexId, _: VertexId) -> f64 {
        0.0
    }
}

impl<W: Weighting + ?Sized> Weighting for &W {
    fn weight(&self, g: &CostGraph, y: VertexId, z: VertexId) -> f64 {
        (**self).weight(g, y, z)
    }
}

/// One out-edge of the current vertex as seen by a stepper.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hop {
    pub edge: EdgeId,
    pub vertex: VertexId,
    /// Distance from `vertex` to the target.
    pub distance: u32,
    pub cost: f64,
    /// Weight of `vertex`; only filled for forward hops of weight-reading steppers.
    pub weight: f64,
    pub shortcuts: u32,
}

impl Hop {
    #[inline]
    fn tie_key(&self) -> (u32, u32, u32) {
        (self.distance, self.vertex.0, self.edge.0)
    }
}

/// Graph-model parameters a decentralized strategy may know.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub n: u32,
    pub alpha: f64,
    pub normalizer: f64,
}

impl ModelParams {
    pub fn of(g: &CostGraph) -> Self {
        Self {
            n: g.n(),
            alpha: g.alpha(),
            normalizer: harmonic_normalizer(g.n(), g.alpha()),
        }
    }
}

pub struct LocalView<'a> {
    current: VertexId,
    target: VertexId,
    distance: u32,
    hops: &'a [Hop],
    params: &'a ModelParams,
}

impl<'a> LocalView<'a> {
    pub fn new(
        current: VertexId,
        target: VertexId,
        distance: u32,
        hops: &'a [Hop],
        params: &'a ModelParams,
    ) -> Self {
        Self {
            current,
            target,
            distance,
            hops,
            params,
        }
    }

    pub fn current(&self) -> VertexId {
        self.current
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    /// Distance from the current vertex to the target.
    pub fn distance(&self) -> u32 {
        self.distance
    }

    pub fn hops(&self) -> &'a [Hop] {
        self.hops
    }

    pub fn params(&self) -> &ModelParams {
        self.params
    }

    pub fn forward(&self) -> impl Iterator<Item = (usize, &'a Hop)> + '_ {
        let d = self.distance;
        self.hops
            .iter()
            .enumerate()
            .filter(move |(_, h)| h.distance < d)
    }

    /// Forward hop minimizing `score`, ties broken by distance to the
    /// target, then vertex id, then edge id.
    pub fn argmin_forward<F: Fn(&Hop) -> f64>(&self, score: F) -> Option<usize> {
        self.forward()
            .map(|(i, h)| (i, score(h), h.tie_key()))
            .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.2.cmp(&b.2)))
            .map(|(i, _, _)| i)
    }
}

/// A forward search strategy. `choose` returns an index into `view.hops()`.
pub trait Stepper: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether `Hop::weight` must be filled in before `choose`.
    fn uses_weights(&self) -> bool {
        false
    }

    fn choose(&self, view: &LocalView<'_>) -> Option<usize>;
}

/// Closest neighbor to the target; ignores costs.
#[derive(Clone, Copy, Debug, Default)]
pub struct Greedy;

impl Stepper for Greedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn choose(&self, view: &LocalView<'_>) -> Option<usize> {
        view.forward()
            .min_by_key(|(_, h)| h.tie_key())
            .map(|(i, _)| i)
    }
}

/// Forward weighted greedy: minimizes realized edge cost plus the weight of
/// the neighbor. With cost-greedy weights this is cost-greedy search.
#[derive(Clone, Copy, Debug, Default)]
pub struct CostGreedy;

impl Stepper for CostGreedy {
    fn name(&self) -> &'static str {
        "cost-greedy"
    }

    fn uses_weights(&self) -> bool {
        true
    }

    fn choose(&self, view: &LocalView<'_>) -> Option<usize> {
        view.argmin_forward(|h| h.cost + h.weight)
    }
}

/// Cheapest forward edge (weighted greedy with `w ≡ 0`).
#[derive(Clone, Copy, Debug, Default)]
pub struct LowestCost;

impl Stepper for LowestCost {
    fn name(&self) -> &'static str {
        "lowest-cost"
    }

    fn choose(&self, view: &LocalView<'_>) -> Option<usize> {
        view.argmin_forward(|h| h.cost)
    }
}

/// Expected-value navigation: the forward neighbor most likely to be
/// directly connected to the target. Defined for unit costs.
#[derive(Clone, Copy, Debug, Default)]
pub struct SimsekJensen;

impl SimsekJensen {
    /// `P(target ∈ N(y))` from the model: certain when `y` is the target or
    /// its ring successor is; otherwise `1 - (1 - d^-alpha / h_n)^q(y)`.
    pub fn hit_probability(hop: &Hop, params: &ModelParams) -> f64 {
        if hop.distance <= 1 {
            return 1.0;
        }
        let single = (hop.distance as f64).powf(-params.alpha) / params.normalizer;
        1.0 - (1.0 - single).powi(hop.shortcuts as i32)
    }
}

impl Stepper for SimsekJensen {
    fn name(&self) -> &'static str {
        "sj"
    }

    fn choose(&self, view: &LocalView<'_>) -> Option<usize> {
        let params = *view.params();
        view.argmin_forward(|h| -Self::hit_probability(h, &params))
    }
}

/// Construction context handed to registry factories.
pub struct StepperContext<'a> {
    pub cost_model: &'a CostModel,
}

type StepperFactory = Box<dyn Fn(&StepperContext<'_>) -> Result<Box<dyn Stepper>> + Send + Sync>;

/// Named search strategies, selected at runtime.
pub struct StepperRegistry {
    factories: BTreeMap<&'static str, StepperFactory>,
}

impl StepperRegistry {
    pub fn new() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register("greedy", |_| Ok(Box::new(Greedy)));
        r.register("cost-greedy", |_| Ok(Box::new(CostGreedy)));
        r.register("lowest-cost", |_| Ok(Box::new(LowestCost)));
        r.register("sj", |ctx| {
            if !ctx.cost_model.is_constant() {
                return Err(Error::Unsupported(format!(
                    "the sj stepper needs constant costs, got `{}`",
                    ctx.cost_model
                )));
            }
            Ok(Box::new(SimsekJensen))
        });
        r
    }

    pub fn register<F>(&mut self, name: &'static str, factory: F)
    where
        F: Fn(&StepperContext<'_>) -> Result<Box<dyn Stepper>> + Send + Sync + 'static,
    {
        self.factories.insert(name, Box::new(factory));
    }

    pub fn create(&self, name: &str, ctx: &StepperContext<'_>) -> Result<Box<dyn Stepper>> {
        let factory = self.factories.get(name).ok_or_else(|| Error::Unknown {
            kind: "stepper",
            name: name.to_string(),
        })?;
        factory(ctx)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }
}

impl Default for StepperRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub path: Vec<VertexId>,
    /// Realized cost of each traversed edge, `path.len() - 1` entries.
    pub hop_costs: Vec<f64>,
    pub steps: u32,
    pub cost: f64,
    /// Sum over visited non-target vertices of the cheapest out-edge cost.
    pub min_tally: f64,
}

impl SearchResult {
    /// Realized cost from `path[i]` to the target.
    pub fn remaining_costs(&self) -> Vec<f64> {
        let mut rem = vec![0.0; self.path.len()];
        for i in (0..self.hop_costs.len()).rev() {
            rem[i] = rem[i + 1] + self.hop_costs[i];
        }
        rem
    }
}

/// Fills `hops` with the out-edges of `x` toward `z`; returns the cheapest
/// out-edge cost.
fn fill_hops<C: EdgeCosts + ?Sized>(
    g: &CostGraph,
    costs: &C,
    weights: &dyn Weighting,
    read_weights: bool,
    x: VertexId,
    z: VertexId,
    hops: &mut Vec<Hop>,
) -> f64 {
    hops.clear();
    let dx = g.distance(x, z);
    let mut cheapest = f64::INFINITY;
    for (edge, y) in g.out_edges(x) {
        let cost = costs.cost(edge);
        cheapest = cheapest.min(cost);
        let distance = g.distance(y, z);
        let weight = if read_weights && distance < dx && y != z {
            weights.weight(g, y, z)
        } else {
            0.0
        };
        hops.push(Hop {
            edge,
            vertex: y,
            distance,
            cost,
            weight,
            shortcuts: g.shortcut_count(y),
        });
    }
    cheapest
}

fn single_step<C: EdgeCosts + ?Sized>(
    g: &CostGraph,
    costs: &C,
    weights: &dyn Weighting,
    stepper: &dyn Stepper,
    x: VertexId,
    z: VertexId,
) -> Result<VertexId> {
    if x == z {
        return Err(Error::SameEndpoints(x));
    }
    let params = ModelParams::of(g);
    let mut hops = Vec::new();
    fill_hops(g, costs, weights, stepper.uses_weights(), x, z, &mut hops);
    let view = LocalView::new(x, z, g.distance(x, z), &hops, &params);
    stepper
        .choose(&view)
        .map(|i| hops[i].vertex)
        .ok_or(Error::NoProgress {
            stepper: stepper.name(),
            at: x,
            target: z,
        })
}

/// Greedy never reads costs; unit costs fill the view.
pub fn greedy_step(g: &CostGraph, x: VertexId, z: VertexId) -> Result<VertexId> {
    let unit = CostModel::Constant(1.0);
    single_step(g, &QueryCosts::new(&unit, 0), &ZeroWeighting, &Greedy, x, z)
}

pub fn forward_weighted_step<C: EdgeCosts + ?Sized>(
    g: &CostGraph,
    costs: &C,
    weights: &dyn Weighting,
    x: VertexId,
    z: VertexId,
) -> Result<VertexId> {
    single_step(g, costs, weights, &CostGreedy, x, z)
}

/// Assumes unit costs.
pub fn sj_step(g: &CostGraph, x: VertexId, z: VertexId) -> Result<VertexId> {
    let unit = CostModel::Constant(1.0);
    single_step(
        g,
        &QueryCosts::new(&unit, 0),
        &ZeroWeighting,
        &SimsekJensen,
        x,
        z,
    )
}

/// Routes from `x` to `z`, one stepper decision per vertex.
pub fn run_search<C: EdgeCosts + ?Sized>(
    g: &CostGraph,
    costs: &C,
    x: VertexId,
    z: VertexId,
    stepper: &dyn Stepper,
    weights: &dyn Weighting,
) -> Result<SearchResult> {
    let params = ModelParams::of(g);
    run_search_with(g, &params, costs, x, z, stepper, weights)
}

/// [`run_search`] with precomputed model parameters.
pub fn run_search_with<C: EdgeCosts + ?Sized>(
    g: &CostGraph,
    params: &ModelParams,
    costs: &C,
    x: VertexId,
    z: VertexId,
    stepper: &dyn Stepper,
    weights: &dyn Weighting,
) -> Result<SearchResult> {
    let read_weights = stepper.uses_weights();
    let mut path = vec![x];
    let mut hop_costs = Vec::new();
    let mut cost = 0.0;
    let mut min_tally = 0.0;
    let mut hops = Vec::with_capacity(g.out_degree(x) as usize);
    let mut current = x;
    let mut distance = g.distance(x, z);
    while current != z {
        min_tally += fill_hops(g, costs, weights, read_weights, current, z, &mut hops);
        let view = LocalView::new(current, z, distance, &hops, params);
        let chosen = stepper.choose(&view).map(|i| hops[i]);
        let hop = match chosen {
            Some(h) if h.distance < distance => h,
            _ => {
                return Err(Error::NoProgress {
                    stepper: stepper.name(),
                    at: current,
                    target: z,
                })
            }
        };
        cost += hop.cost;
        hop_costs.push(hop.cost);
        path.push(hop.vertex);
        current = hop.vertex;
        distance = hop.distance;
    }
    Ok(SearchResult {
        steps: hop_costs.len() as u32,
        path,
        hop_costs,
        cost,
        min_tally,
    })
}

/// Endpoints and cost seed of one simulated query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Query {
    pub source: VertexId,
    pub target: VertexId,
    pub cost_seed: u64,
}

/// Query `index` of the stream `stream_seed`: a uniform ordered pair of
/// distinct vertices and an independent cost seed.
pub fn query_at(n: u32, stream_seed: u64, index: u64) -> Query {
    let seed = derive_path(stream_seed, &[index]);
    let endpoint_seed = crate::rng::derive_seed(seed, tag::ENDPOINTS);
    let source = ((counter_uniform(endpoint_seed, 0) * n as f64) as u32).min(n - 1);
    let offset = 1 + ((counter_uniform(endpoint_seed, 1) * (n - 1) as f64) as u32).min(n - 2);
    let target = ((source as u64 + offset as u64) % n as u64) as u32;
    Query {
        source: VertexId(source),
        target: VertexId(target),
        cost_seed: crate::rng::derive_seed(seed, tag::COSTS),
    }
}

/// Number of fixed work chunks; results are reduced in chunk order so they
/// do not depend on the thread count.
pub(crate) const CHUNKS: usize = 16;

pub(crate) fn fold_chunks<A, I, F, M>(total: usize, init: I, body: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, usize) -> Result<()> + Sync,
    M: Fn(&mut A, A),
{
    let per_chunk = total.div_ceil(CHUNKS).max(1);
    let parts: Vec<Result<A>> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for i in (c * per_chunk)..((c + 1) * per_chunk).min(total) {
                body(&mut acc, i)?;
            }
            Ok(acc)
        })
        .collect();
    let mut out = init();
    for part in parts {
        merge(&mut out, part?);
    }
    Ok(out)
}

/// Aggregate statistics of a query batch.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BatchStats {
    pub cost: Moments,
    pub steps: Moments,
    pub min_tally: Moments,
    /// `ln d(x, z)` of the sampled pairs.
    pub log_distance: Moments,
}

impl BatchStats {
    pub fn record(&mut self, g: &CostGraph, q: &Query, r: &SearchResult) {
        self.cost.push(r.cost);
        self.steps.push(r.steps as f64);
        self.min_tally.push(r.min_tally);
        self.log_distance
            .push((g.distance(q.source, q.target) as f64).ln());
    }

    pub fn merge(&mut self, other: &BatchStats) {
        self.cost.merge(&other.cost);
        self.steps.merge(&other.steps);
        self.min_tally.merge(&other.min_tally);
        self.log_distance.merge(&other.log_distance);
    }
}

/// Runs `queries` queries from the stream `seed` with frozen weights.
pub fn evaluate_batch(
    g: &CostGraph,
    model: &CostModel,
    stepper: &dyn Stepper,
    weights: &dyn Weighting,
    queries: usize,
    seed: u64,
) -> Result<BatchStats> {
    let params = ModelParams::of(g);
    fold_chunks(
        queries,
        BatchStats::default,
        |acc, i| {
            let q = query_at(g.n(), seed, i as u64);
            let costs = QueryCosts::new(model, q.cost_seed);
            let r = run_search_with(g, &params, &costs, q.source, q.target, stepper, weights)?;
            acc.record(g, &q, &r);
            Ok(())
        },
        |a, b| a.merge(&b),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{CostAssignment, CostModel};
    use crate::topology::{generate_graph, GraphSpec};

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn graph_with(n: u32, shortcuts: &[(u32, &[u32])]) -> CostGraph {
        let mut sc = vec![Vec::new(); n as usize];
        for &(x, ys) in shortcuts {
            sc[x as usize] = ys.to_vec();
        }
        CostGraph::from_shortcuts(n, 1.0, 0, &sc).unwrap()
    }

    /// Weighting backed by an explicit per-vertex table for one target.
    struct Table(Vec<f64>);

    impl Weighting for Table {
        fn weight(&self, _: &CostGraph, y: VertexId, _: VertexId) -> f64 {
            self.0[y.index()]
        }
    }

    #[test]
    fn greedy_cases() {
        let g = graph_with(8, &[(0, &[2, 6]), (3, &[4])]);
        assert_eq!(greedy_step(&g, v(0), v(4)).unwrap(), v(2));
        assert_eq!(greedy_step(&g, v(3), v(4)).unwrap(), v(4));
        let ring = CostGraph::ring(8).unwrap();
        for (x, z) in [(0, 5), (7, 3), (2, 1)] {
            assert_eq!(greedy_step(&ring, v(x), v(z)).unwrap(), v((x + 1) % 8));
        }
        assert!(greedy_step(&ring, v(2), v(2)).is_err());
    }

    #[test]
    fn weighted_step_picks_cost_plus_weight() {
        // edges of 0: ring -> 1 (e0), shortcut -> 2 (e1); target 4
        let g = graph_with(8, &[(0, &[2])]);
        let mut costs = vec![1.0; g.edge_count()];
        costs[0] = 5.0;
        costs[1] = 1.0;
        let mut w = vec![0.0; 8];
        w[1] = 1.0;
        w[2] = 2.5;
        let a = CostAssignment::from_vec(costs.clone());
        assert_eq!(
            forward_weighted_step(&g, &a, &Table(w), v(0), v(4)).unwrap(),
            v(2)
        );
        // w ≡ 0 is lowest-cost forward
        assert_eq!(
            forward_weighted_step(&g, &a, &ZeroWeighting, v(0), v(4)).unwrap(),
            v(2)
        );
        costs[0] = 0.5;
        let a = CostAssignment::from_vec(costs);
        assert_eq!(
            forward_weighted_step(&g, &a, &ZeroWeighting, v(0), v(4)).unwrap(),
            v(1)
        );
    }

    #[test]
    fn weighted_tie_breaks_toward_target() {
        let g = graph_with(8, &[(0, &[3])]);
        let a = CostAssignment::from_vec(vec![1.0; g.edge_count()]);
        // equal scores: 1 + 2 (via 1) vs 1 + 2 (via 3); 3 is closer to 6
        let mut w = vec![0.0; 8];
        w[1] = 2.0;
        w[3] = 2.0;
        assert_eq!(
            forward_weighted_step(&g, &a, &Table(w), v(0), v(6)).unwrap(),
            v(3)
        );
    }

    #[test]
    fn constant_costs_with_increasing_weights_match_greedy() {
        let g = generate_graph(&GraphSpec::small_world(128, 4)).unwrap();
        let a = CostAssignment::from_vec(vec![1.0; g.edge_count()]);
        struct ByDistance;
        impl Weighting for ByDistance {
            fn weight(&self, g: &CostGraph, y: VertexId, z: VertexId) -> f64 {
                (g.distance(y, z) as f64).sqrt()
            }
        }
        for x in 0..128 {
            for z in [0u32, 17, 64, 127] {
                if x == z {
                    continue;
                }
                assert_eq!(
                    forward_weighted_step(&g, &a, &ByDistance, v(x), v(z)).unwrap(),
                    greedy_step(&g, v(x), v(z)).unwrap()
                );
            }
        }
    }

    #[test]
    fn sj_prefers_certain_hit() {
        // 0 -> 1 (ring), 0 -> 5 (shortcut); target 6; 5's successor is 6
        let g = graph_with(16, &[(0, &[5]), (1, &[2, 3, 4, 7, 9])]);
        assert_eq!(sj_step(&g, v(0), v(6)).unwrap(), v(5));
    }

    #[test]
    fn sj_prefers_high_degree_farther_neighbor() {
        // independent plug-in values for n = 1024, alpha = 1 (h = 7.508199...)
        let params = ModelParams {
            n: 1024,
            alpha: 1.0,
            normalizer: harmonic_normalizer(1024, 1.0),
        };
        assert!((params.normalizer - 7.508_199_109_778_134).abs() < 1e-9);
        let hop = |d, q| Hop {
            edge: EdgeId(0),
            vertex: VertexId(0),
            distance: d,
            cost: 1.0,
            weight: 0.0,
            shortcuts: q,
        };
        let pa = SimsekJensen::hit_probability(&hop(10, 55), &params);
        let pb = SimsekJensen::hit_probability(&hop(5, 5), &params);
        assert!((pa - 0.521_670_037_805_080_9).abs() < 1e-9, "{pa}");
        assert!((pb - 0.126_278_647_040_141_1).abs() < 1e-9, "{pb}");

        let hops = [
            Hop {
                edge: EdgeId(0),
                vertex: VertexId(1),
                ..hop(10, 55)
            },
            Hop {
                edge: EdgeId(1),
                vertex: VertexId(2),
                ..hop(5, 5)
            },
        ];
        let view = LocalView::new(VertexId(0), VertexId(9), 20, &hops, &params);
        assert_eq!(SimsekJensen.choose(&view), Some(0));
    }

    #[test]
    fn sj_degenerate_falls_back_to_closest() {
        let params = ModelParams {
            n: 64,
            alpha: 1.0,
            normalizer: harmonic_normalizer(64, 1.0),
        };
        let mk = |e, y, d| Hop {
            edge: EdgeId(e),
            vertex: VertexId(y),
            distance: d,
            cost: 1.0,
            weight: 0.0,
            shortcuts: 0,
        };
        let hops = [mk(0, 1, 30), mk(1, 5, 9), mk(2, 7, 20)];
        let view = LocalView::new(VertexId(0), VertexId(40), 31, &hops, &params);
        assert_eq!(SimsekJensen.choose(&view), Some(1));
    }

    #[test]
    fn registry_names_and_errors() {
        let reg = StepperRegistry::with_builtins();
        assert_eq!(
            reg.names(),
            vec!["cost-greedy", "greedy", "lowest-cost", "sj"]
        );
        let exp = CostModel::Exponential { rate: 1.0 };
        let unit = CostModel::Constant(1.0);
        assert!(reg
            .create("sj", &StepperContext { cost_model: &exp })
            .is_err());
        assert_eq!(
            reg.create("sj", &StepperContext { cost_model: &unit })
                .unwrap()
                .name(),
            "sj"
        );
        assert!(matches!(
            reg.create("dijkstra", &StepperContext { cost_model: &unit }),
            Err(Error::Unknown { .. })
        ));
        for name in reg.names() {
            assert_eq!(
                reg.create(name, &StepperContext { cost_model: &unit })
                    .unwrap()
                    .name(),
                name
            );
        }
    }

    #[test]
    fn run_search_trivial_and_forced() {
        let ring = CostGraph::ring(8).unwrap();
        let unit = CostModel::Constant(1.0);
        let costs = QueryCosts::new(&unit, 1);
        let r = run_search(&ring, &costs, v(3), v(3), &Greedy, &ZeroWeighting).unwrap();
        assert_eq!((r.steps, r.cost, r.path.len()), (0, 0.0, 1));
        let r = run_search(&ring, &costs, v(6), v(3), &CostGreedy, &ZeroWeighting).unwrap();
        assert_eq!(r.steps, 5);
        assert_eq!(r.cost, 5.0);
        assert_eq!(r.min_tally, 5.0);
        assert_eq!(r.path, vec![v(6), v(7), v(0), v(1), v(2), v(3)]);
        assert_eq!(r.remaining_costs(), vec![5.0, 4.0, 3.0, 2.0, 1.0, 0.0]);
    }

    #[test]
    fn broken_stepper_is_reported() {
        struct Backwards;
        impl Stepper for Backwards {
            fn name(&self) -> &'static str {
                "backwards"
            }
            fn choose(&self, view: &LocalView<'_>) -> Option<usize> {
                view.hops()
                    .iter()
                    .position(|h| h.distance >= view.distance())
            }
        }
        let g = graph_with(8, &[(0, &[7])]);
        let unit = CostModel::Constant(1.0);
        let err = run_search(
            &g,
            &QueryCosts::new(&unit, 0),
            v(0),
            v(4),
            &Backwards,
            &ZeroWeighting,
        );
        assert!(matches!(err, Err(Error::NoProgress { .. })));
    }

    #[test]
    fn greedy_ignores_costs() {
        let g = generate_graph(&GraphSpec::small_world(512, 8)).unwrap();
        let m = CostModel::Exponential { rate: 1.0 };
        for i in 0..50 {
            let q = query_at(512, 5, i);
            let a = run_search(
                &g,
                &QueryCosts::new(&m, 1),
                q.source,
                q.target,
                &Greedy,
                &ZeroWeighting,
            )
            .unwrap();
            let b = run_search(
                &g,
                &QueryCosts::new(&m, 2),
                q.source,
                q.target,
                &Greedy,
                &ZeroWeighting,
            )
            .unwrap();
            assert_eq!(a.path, b.path);
        }
    }

    #[test]
    fn queries_are_distinct_pairs() {
        for i in 0..2000 {
            let q = query_at(5, 3, i);
            assert_ne!(q.source, q.target);
            assert!(q.source.0 < 5 && q.target.0 < 5);
        }
        assert_eq!(query_at(2, 0, 0).target.0, 1 - query_at(2, 0, 0).source.0);
    }

    #[test]
    fn batch_is_reproducible() {
        let g = generate_graph(&GraphSpec::small_world(256, 8)).unwrap();
        let m = CostModel::Exponential { rate: 1.0 };
        let a = evaluate_batch(&g, &m, &CostGreedy, &ZeroWeighting, 500, 3).unwrap();
        let b = evaluate_batch(&g, &m, &CostGreedy, &ZeroWeighting, 500, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cost.count, 500);
    }
}
