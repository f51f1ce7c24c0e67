//! Independent verifiers.
//!
//! * Exhaustive: on tiny instances with finite cost support, every
//!   deterministic forward policy is enumerated and evaluated exactly with
//!   a recursion that shares no code with [`crate::weights`]. The cost-greedy
//!   fixed point must match the best of them at every vertex.
//! * Exact: fixed-point convergence from different starting weights and the
//!   regret of perturbed weights.
//! * Monte Carlo: the Wald identity `E[R] = E[C_min] E[S]` for the tally `R`
//!   of cheapest out-edge costs along any forward search, and the
//!   `log n log d` scaling of mean cost.

use std::fmt::Write as _;
use std::io::Write;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::costs::{CostModel, DiscreteTable, QueryCosts};
use crate::error::{Error, Result};
use crate::rng::{derive_path, derive_seed, tag};
use crate::search::{
    fold_chunks, query_at, run_search_with, BatchStats, CostGreedy, Hop, LocalView, ModelParams,
    Stepper, Weighting,
};
use crate::stats::Moments;
use crate::topology::{generate_graph, CostGraph, GraphSpec, ShortcutLaw, VertexId};
use crate::weights::{
    estimate_rounds, exact_evaluate, exact_fixpoint, exact_trajectory, rank_order, EstimationConfig,
};

/// Largest number of forward policies enumerated for one target.
pub const POLICY_LIMIT: u128 = 1_000_000;

/// Agreement tolerance between exact computations.
pub const EXACT_TOLERANCE: f64 = 1e-9;

/// Forward out-neighbors of `x`, one entry per edge, in out-edge order.
fn forward_targets(g: &CostGraph, x: VertexId, z: VertexId) -> Vec<VertexId> {
    let dx = g.distance(x, z);
    g.out_edges(x)
        .map(|(_, y)| y)
        .filter(|&y| g.distance(y, z) < dx)
        .collect()
}

fn tuple_count(support: usize, k: usize) -> Result<usize> {
    let t = (support as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if t > crate::weights::ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            terms: t,
            limit: crate::weights::ENUMERATION_LIMIT,
        });
    }
    Ok(t as usize)
}

/// Digit `j` of tuple `t`: the support index of the cost on forward edge `j`.
#[inline]
fn digit(t: usize, j: usize, support: usize) -> usize {
    (t / support.pow(j as u32)) % support
}

/// A deterministic forward policy toward one target: for every vertex, the
/// forward edge chosen under each joint cost outcome on its forward edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForwardPolicy {
    target: VertexId,
    support: usize,
    /// `tables[x][t]` indexes the forward edges of `x`; empty for the target.
    tables: Vec<Vec<u8>>,
}

impl ForwardPolicy {
    /// Builds a policy from `choose(x, digits)`, which receives the support
    /// index of the cost on each forward edge and returns a forward edge index.
    pub fn from_fn<F>(g: &CostGraph, support: usize, z: VertexId, mut choose: F) -> Result<Self>
    where
        F: FnMut(VertexId, &[usize]) -> usize,
    {
        let mut tables = vec![Vec::new(); g.n() as usize];
        for x in g.vertices().filter(|&x| x != z) {
            let k = forward_targets(g, x, z).len();
            let tuples = tuple_count(support, k)?;
            let mut digits = vec![0; k];
            tables[x.index()] = (0..tuples)
                .map(|t| {
                    for (j, d) in digits.iter_mut().enumerate() {
                        *d = digit(t, j, support);
                    }
                    let c = choose(x, &digits);
                    assert!(c < k, "policy chose edge {c} of {k} at {x}");
                    c as u8
                })
                .collect();
        }
        Ok(Self {
            target: z,
            support,
            tables,
        })
    }

    /// Always the ring successor (the first out-edge, always forward).
    pub fn ring_successor(g: &CostGraph, support: usize, z: VertexId) -> Result<Self> {
        Self::from_fn(g, support, z, |_, _| 0)
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    #[inline]
    pub fn choice(&self, x: VertexId, tuple: usize) -> usize {
        self.tables[x.index()][tuple] as usize
    }

    /// One line per deciding vertex: `x: t0->e t1->e ...`.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (x, table) in self.tables.iter().enumerate() {
            if table.is_empty() {
                continue;
            }
            let _ = write!(s, "{x}:");
            for (t, c) in table.iter().enumerate() {
                let _ = write!(s, " {t}->{c}");
            }
            s.push('\n');
        }
        s
    }
}

/// Exact `E[T_z(x; policy)]` for every `x`, by memoized recursion on the
/// chosen successor.
pub fn policy_expected_cost(
    g: &CostGraph,
    table: &DiscreteTable,
    policy: &ForwardPolicy,
) -> Result<Vec<f64>> {
    let z = policy.target;
    let support = table.support_size();
    if support != policy.support {
        return Err(Error::InvalidSpec(format!(
            "policy built for support {}, table has {support}",
            policy.support
        )));
    }
    let n = g.n() as usize;
    let fwd: Vec<Vec<VertexId>> = g
        .vertices()
        .map(|x| {
            if x == z {
                Vec::new()
            } else {
                forward_targets(g, x, z)
            }
        })
        .collect();
    for x in g.vertices().filter(|&x| x != z) {
        tuple_count(support, fwd[x.index()].len())?;
    }
    let mut memo: Vec<Option<f64>> = vec![None; n];
    memo[z.index()] = Some(0.0);

    fn value(
        x: VertexId,
        fwd: &[Vec<VertexId>],
        table: &DiscreteTable,
        policy: &ForwardPolicy,
        memo: &mut [Option<f64>],
    ) -> f64 {
        if let Some(v) = memo[x.index()] {
            return v;
        }
        let edges = &fwd[x.index()];
        let support = table.support_size();
        let tuples = support.pow(edges.len() as u32);
        let mut total = 0.0;
        for t in 0..tuples {
            let p: f64 = (0..edges.len())
                .map(|j| table.probs()[digit(t, j, support)])
                .product();
            let c = policy.choice(x, t);
            let edge_cost = table.values()[digit(t, c, support)];
            total += p * (edge_cost + value(edges[c], fwd, table, policy, memo));
        }
        memo[x.index()] = Some(total);
        total
    }

    Ok(g.vertices()
        .map(|x| value(x, &fwd, table, policy, &mut memo))
        .collect())
}

/// Monte Carlo estimate of `E[T_z(x; policy)]`.
pub fn simulate_policy(
    g: &CostGraph,
    table: &DiscreteTable,
    policy: &ForwardPolicy,
    x: VertexId,
    samples: usize,
    seed: u64,
) -> Result<Moments> {
    let z = policy.target;
    let support = table.support_size();
    let dist =
        WeightedIndex::new(table.probs()).map_err(|e| Error::InvalidCostModel(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Moments::default();
    for _ in 0..samples {
        let mut at = x;
        let mut cost = 0.0;
        while at != z {
            let edges = forward_targets(g, at, z);
            let mut t = 0;
            let mut digits = Vec::with_capacity(edges.len());
            for j in 0..edges.len() {
                let d = dist.sample(&mut rng);
                digits.push(d);
                t += d * support.pow(j as u32);
            }
            let c = policy.choice(at, t);
            cost += table.values()[digits[c]];
            at = edges[c];
        }
        out.push(cost);
    }
    Ok(out)
}

/// Per-vertex number of decision tables, and their product.
fn policy_space(
    g: &CostGraph,
    support: usize,
    z: VertexId,
) -> Result<(Vec<(VertexId, u128)>, u128)> {
    let mut per_vertex = Vec::new();
    let mut total: u128 = 1;
    for x in g.vertices().filter(|&x| x != z) {
        let k = forward_targets(g, x, z).len() as u128;
        let tuples = tuple_count(support, k as usize)? as u32;
        let count = k.checked_pow(tuples).unwrap_or(u128::MAX);
        total = total.saturating_mul(count);
        if total > POLICY_LIMIT {
            return Err(Error::EnumerationTooLarge {
                terms: total,
                limit: POLICY_LIMIT,
            });
        }
        per_vertex.push((x, count));
    }
    Ok((per_vertex, total))
}

/// Policy number `index` in the mixed-radix enumeration.
fn decode_policy(
    g: &CostGraph,
    support: usize,
    z: VertexId,
    space: &[(VertexId, u128)],
    index: u128,
) -> Result<ForwardPolicy> {
    let mut local = vec![0u128; g.n() as usize];
    let mut rest = index;
    for &(x, count) in space {
        local[x.index()] = rest % count;
        rest /= count;
    }
    ForwardPolicy::from_fn(g, support, z, |x, digits| {
        let k = forward_targets(g, x, z).len() as u128;
        let t: usize = digits
            .iter()
            .enumerate()
            .map(|(j, &d)| d * support.pow(j as u32))
            .sum();
        ((local[x.index()] / k.pow(t as u32)) % k) as usize
    })
}

#[derive(Clone, Debug)]
pub struct OptimalityReport {
    pub target: VertexId,
    pub policies: u128,
    /// Best enumerated expected cost per vertex.
    pub best: Vec<f64>,
    /// Cost-greedy fixed point per vertex.
    pub fixed_point: Vec<f64>,
    /// `max_x |best(x) - fixed_point(x)|`.
    pub max_gap: f64,
    /// A policy beating the fixed point somewhere, with its decision tables.
    pub violation: Option<String>,
}

impl OptimalityReport {
    pub fn pass(&self) -> bool {
        self.max_gap <= EXACT_TOLERANCE && self.violation.is_none()
    }
}

/// Enumerates every deterministic forward policy toward `z` and compares
/// the per-vertex minimum with the cost-greedy fixed point.
pub fn enumerate_and_verify_optimality(
    g: &CostGraph,
    table: &DiscreteTable,
    z: VertexId,
) -> Result<OptimalityReport> {
    let support = table.support_size();
    let (space, total) = policy_space(g, support, z)?;
    let fixed = exact_fixpoint(g, table, z)?;
    let fixed_point = fixed.values().to_vec();
    let n = g.n() as usize;

    // (per-vertex minimum, first policy strictly below the fixed point)
    type Acc = (Vec<f64>, Option<u128>);
    let (best, beaten) = fold_chunks(
        total as usize,
        || -> Acc { (vec![f64::INFINITY; n], None) },
        |(best, beaten), i| {
            let policy = decode_policy(g, support, z, &space, i as u128)?;
            let cost = policy_expected_cost(g, table, &policy)?;
            for (x, &c) in cost.iter().enumerate() {
                best[x] = best[x].min(c);
                if c < fixed_point[x] - EXACT_TOLERANCE && beaten.is_none() {
                    *beaten = Some(i as u128);
                }
            }
            Ok(())
        },
        |(a, ba), (b, bb)| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x = x.min(*y);
            }
            *ba = match (*ba, bb) {
                (Some(p), Some(q)) => Some(p.min(q)),
                (p, q) => p.or(q),
            };
        },
    )?;
    let max_gap = best
        .iter()
        .zip(&fixed_point)
        .map(|(b, f)| (b - f).abs())
        .fold(0.0, f64::max);
    let violation = match beaten {
        Some(i) => Some(decode_policy(g, support, z, &space, i)?.describe()),
        None => None,
    };
    Ok(OptimalityReport {
        target: z,
        policies: total,
        best,
        fixed_point,
        max_gap,
        violation,
    })
}

#[derive(Clone, Debug)]
pub struct FixpointReport {
    /// Iterations until `w_k == w_{k+1}`, from `w_0 ≡ 0` and `w_0 ≡ 100`.
    pub iterations: [usize; 2],
    pub limits_equal: bool,
    /// Every vertex of rank `r` keeps the same value from iteration `r` on.
    pub frozen_by_rank: bool,
    pub n: u32,
}

impl FixpointReport {
    pub fn pass(&self) -> bool {
        self.limits_equal
            && self.frozen_by_rank
            && self.iterations.iter().all(|&k| k < self.n as usize)
    }
}

pub fn verify_fixpoint_convergence(
    g: &CostGraph,
    table: &DiscreteTable,
    z: VertexId,
) -> Result<FixpointReport> {
    let n = g.n() as usize;
    let order = rank_order(g, z);
    let mut iterations = [0; 2];
    let mut limits = Vec::new();
    let mut frozen_by_rank = true;
    for (slot, start) in [0.0, 100.0].into_iter().enumerate() {
        let traj = exact_trajectory(g, table, z, &vec![start; n])?;
        // the last two iterates coincide; the first index of the limit counts
        iterations[slot] = traj.len() - 2;
        for (r, x) in order.iter().enumerate() {
            let rank = r + 1;
            if rank < traj.len() {
                let settled = traj[rank][x.index()];
                frozen_by_rank &= traj[rank..].iter().all(|w| w[x.index()] == settled);
            }
        }
        limits.push(traj.last().expect("non-empty").clone());
    }
    Ok(FixpointReport {
        iterations,
        limits_equal: limits[0] == limits[1],
        frozen_by_rank,
        n: g.n(),
    })
}

/// `P(x -> y)` for one step of weighted greedy search with weights `w`
/// (the target absorbs).
pub fn transition_matrix(
    g: &CostGraph,
    table: &DiscreteTable,
    w: &[f64],
    z: VertexId,
) -> Result<Vec<Vec<f64>>> {
    let n = g.n() as usize;
    let params = ModelParams::of(g);
    let support = table.support_size();
    let mut m = vec![vec![0.0; n]; n];
    m[z.index()][z.index()] = 1.0;
    for x in g.vertices().filter(|&x| x != z) {
        let fwd: Vec<(crate::topology::EdgeId, VertexId)> = g
            .out_edges(x)
            .filter(|&(_, y)| g.distance(y, z) < g.distance(x, z))
            .collect();
        let tuples = tuple_count(support, fwd.len())?;
        let mut hops = Vec::with_capacity(fwd.len());
        for t in 0..tuples {
            hops.clear();
            let mut p = 1.0;
            for (j, &(edge, y)) in fwd.iter().enumerate() {
                let d = digit(t, j, support);
                p *= table.probs()[d];
                hops.push(Hop {
                    edge,
                    vertex: y,
                    distance: g.distance(y, z),
                    cost: table.values()[d],
                    weight: if y == z { 0.0 } else { w[y.index()] },
                    shortcuts: g.shortcut_count(y),
                });
            }
            let view = LocalView::new(x, z, g.distance(x, z), &hops, &params);
            let c = CostGreedy.choose(&view).expect("forward edge exists");
            m[x.index()][hops[c].vertex.index()] += p;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct ApproximationReport {
    pub epsilon: f64,
    pub draws: usize,
    /// Largest `E[T(x; F_w)] - E[T(x; F_w~)]` over draws and vertices.
    pub max_regret: f64,
    /// Smallest regret; negative values would contradict optimality.
    pub min_regret: f64,
    /// `2 n epsilon`.
    pub bound: f64,
    /// `err(x) <= 2 eps k + sum_v P_k(x -> v) err(v)` for all `x`, `k`.
    pub per_step_ok: bool,
    /// `err(x) <= 2 eps (k + n P(S > k))` for all `x`, `k`.
    pub tail_ok: bool,
}

impl ApproximationReport {
    pub fn pass(&self) -> bool {
        self.max_regret <= self.bound + EXACT_TOLERANCE
            && self.min_regret >= -EXACT_TOLERANCE
            && self.per_step_ok
            && self.tail_ok
    }
}

/// Regret of weights `max(w~ + delta, 0)` with `delta(x) = ±epsilon`
/// (independent random signs) over `draws` draws.
pub fn verify_approximation_bound(
    g: &CostGraph,
    table: &DiscreteTable,
    z: VertexId,
    epsilon: f64,
    draws: usize,
    seed: u64,
) -> Result<ApproximationReport> {
    let n = g.n() as usize;
    let optimal = exact_fixpoint(g, table, z)?;
    let w_opt = optimal.values();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ApproximationReport {
        epsilon,
        draws,
        max_regret: f64::NEG_INFINITY,
        min_regret: f64::INFINITY,
        bound: 2.0 * n as f64 * epsilon,
        per_step_ok: true,
        tail_ok: true,
    };
    let slack = EXACT_TOLERANCE;
    for _ in 0..draws {
        let w: Vec<f64> = g
            .vertices()
            .map(|x| {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                if x == z {
                    0.0
                } else {
                    (w_opt[x.index()] + sign * epsilon).max(0.0)
                }
            })
            .collect();
        let cost = exact_evaluate(g, table, &w, z)?.cost;
        let err: Vec<f64> = cost.iter().zip(w_opt).map(|(c, o)| c - o).collect();
        for &e in &err {
            report.max_regret = report.max_regret.max(e);
            report.min_regret = report.min_regret.min(e);
        }
        let m = transition_matrix(g, table, &w, z)?;
        for x in g.vertices() {
            let mut dist = vec![0.0; n];
            dist[x.index()] = 1.0;
            for k in 1..=n {
                let mut next = vec![0.0; n];
                for (u, &pu) in dist.iter().enumerate() {
                    if pu > 0.0 {
                        for (v, &p) in m[u].iter().enumerate() {
                            next[v] += pu * p;
                        }
                    }
                }
                dist = next;
                let tail: f64 = dist.iter().zip(&err).map(|(p, e)| p * e).sum();
                let lhs = err[x.index()];
                let kf = k as f64;
                report.per_step_ok &= lhs <= 2.0 * epsilon * kf + tail + slack;
                let unfinished = (1.0 - dist[z.index()]).max(0.0);
                report.tail_ok &= lhs <= 2.0 * epsilon * (kf + n as f64 * unfinished) + slack;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug)]
pub struct WaldReport {
    pub mean_tally: f64,
    pub mean_steps: f64,
    pub expected_min: f64,
    /// Mean and standard error of `R - E[C_min] S` per query.
    pub mean_gap: f64,
    pub gap_std_err: f64,
    pub queries: u64,
}

impl WaldReport {
    pub fn pass(&self) -> bool {
        self.mean_gap.abs() <= 3.0 * self.gap_std_err
    }
}

/// Monte Carlo check of `E[R] = E[C_min] E[S]` on a constant out-degree graph.
pub fn verify_wald(
    g: &CostGraph,
    model: &CostModel,
    stepper: &dyn Stepper,
    weights: &dyn Weighting,
    queries: usize,
    seed: u64,
) -> Result<WaldReport> {
    let k = g.out_degree(VertexId(0));
    if g.vertices().any(|x| g.out_degree(x) != k) {
        return Err(Error::Unsupported(
            "the Wald check needs a constant out-degree graph".into(),
        ));
    }
    let expected_min = model.expected_min_of_k(k);
    let params = ModelParams::of(g);
    let (gap, stats) = fold_chunks(
        queries,
        || (Moments::default(), BatchStats::default()),
        |(gap, stats), i| {
            let q = query_at(g.n(), seed, i as u64);
            let costs = QueryCosts::new(model, q.cost_seed);
            let r = run_search_with(g, &params, &costs, q.source, q.target, stepper, weights)?;
            gap.push(r.min_tally - expected_min * r.steps as f64);
            stats.record(g, &q, &r);
            Ok(())
        },
        |(ga, sa), (gb, sb)| {
            ga.merge(&gb);
            sa.merge(&sb);
        },
    )?;
    Ok(WaldReport {
        mean_tally: stats.min_tally.mean(),
        mean_steps: stats.steps.mean(),
        expected_min,
        mean_gap: gap.mean(),
        gap_std_err: gap.std_err(),
        queries: gap.count,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingPoint {
    pub n: u32,
    pub mean_cost: f64,
    pub mean_log_distance: f64,
    /// `mean_cost / (ln n * mean ln d)`.
    pub ratio: f64,
}

impl ScalingPoint {
    pub fn from_stats(n: u32, stats: &BatchStats) -> Self {
        let mean_log_distance = stats.log_distance.mean();
        Self {
            n,
            mean_cost: stats.cost.mean(),
            mean_log_distance,
            ratio: stats.cost.mean() / ((n as f64).ln() * mean_log_distance),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    /// `(max - min) / min` of the ratio over the largest three sizes.
    pub spread: f64,
}

impl ScalingReport {
    pub fn pass(&self) -> bool {
        self.spread < 0.25
    }
}

pub fn scaling_consistency(mut points: Vec<ScalingPoint>) -> ScalingReport {
    points.sort_by_key(|p| p.n);
    let top = &points[points.len().saturating_sub(3)..];
    let max = top
        .iter()
        .map(|p| p.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let min = top.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    let spread = if top.is_empty() {
        0.0
    } else {
        (max - min) / min
    };
    ScalingReport { points, spread }
}

/// Estimates cost-greedy weights at each size, evaluates them on a
/// held-out batch of `eval_per_vertex * n` queries, and checks the ratio.
/// `shortcuts` fixes the degree law; `None` gives every vertex `log2 n`
/// shortcuts, under which the ratio drifts down with `n`.
pub fn verify_scaling(
    sizes: &[u32],
    shortcuts: Option<&ShortcutLaw>,
    model: &CostModel,
    cfg: &EstimationConfig,
    eval_per_vertex: usize,
) -> Result<ScalingReport> {
    let mut points = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut spec = GraphSpec::small_world(n, derive_seed(cfg.seed, n as u64));
        if let Some(law) = shortcuts {
            spec.shortcuts = law.clone();
        }
        let g = generate_graph(&spec)?;
        let (w, _) = estimate_rounds(&g, model, cfg, |_, _| Ok(()))?;
        let eval_seed = derive_path(cfg.seed, &[tag::EVAL, n as u64]);
        let stats = crate::search::evaluate_batch(
            &g,
            model,
            &CostGreedy,
            &w,
            eval_per_vertex * n as usize,
            eval_seed,
        )?;
        points.push(ScalingPoint::from_stats(n, &stats));
    }
    Ok(scaling_consistency(points))
}

/// A tiny verification instance: ring on 4 to 6 vertices with at most two
/// shortcuts in total, and one target.
#[derive(Clone, Debug)]
pub struct TinyInstance {
    pub graph: CostGraph,
    pub target: VertexId,
    pub seed: u64,
}

impl TinyInstance {
    pub fn label(&self) -> String {
        let g = &self.graph;
        let mut s = format!("n{}_z{}", g.n(), self.target);
        for x in g.vertices() {
            for y in g.shortcuts(x) {
                let _ = write!(s, "_{x}-{y}");
            }
        }
        s
    }
}

pub fn tiny_instance(seed: u64) -> TinyInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, tag::INSTANCE));
    let n: u32 = rng.random_range(4..=6);
    let count = rng.random_range(0..=2);
    let mut shortcuts = vec![Vec::new(); n as usize];
    for _ in 0..count {
        let x = rng.random_range(0..n);
        // skip the successor so every shortcut is a real alternative
        let y = (x + rng.random_range(2..n)) % n;
        shortcuts[x as usize].push(y);
    }
    let graph = CostGraph::from_shortcuts(n, 1.0, seed, &shortcuts).expect("valid tiny instance");
    let target = VertexId(rng.random_range(0..n));
    TinyInstance {
        graph,
        target,
        seed,
    }
}

/// One line of a verifier report.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub check: String,
    pub instance: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(
        check: &str,
        instance: impl Into<String>,
        value: f64,
        bound: f64,
        pass: bool,
    ) -> Self {
        Self {
            check: check.to_string(),
            instance: instance.into(),
            value,
            bound,
            pass,
        }
    }
}

/// CSV `check,instance,value,bound,pass`.
pub fn write_report<W: Write>(rows: &[ReportRow], mut out: W) -> Result<()> {
    writeln!(out, "check,instance,value,bound,pass")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.check, r.instance, r.value, r.bound, r.pass
        )?;
    }
    Ok(())
}

/// Runs the exhaustive checks on `count` tiny instances with two-point costs.
pub fn tiny_suite(count: usize, seed: u64) -> Result<Vec<ReportRow>> {
    let table = CostModel::TwoPoint.as_discrete().expect("finite support");
    let mut rows = Vec::new();
    for i in 0..count {
        let inst = tiny_instance(derive_seed(seed, i as u64));
        let label = inst.label();
        let (g, z) = (&inst.graph, inst.target);
        let opt = enumerate_and_verify_optimality(g, &table, z)?;
        rows.push(ReportRow::new(
            "optimality",
            &label,
            opt.max_gap,
            EXACT_TOLERANCE,
            opt.pass(),
        ));
        let fix = verify_fixpoint_convergence(g, &table, z)?;
        let k = *fix.iterations.iter().max().expect("two starts");
        rows.push(ReportRow::new(
            "fixpoint",
            &label,
            k as f64,
            (g.n() - 1) as f64,
            fix.pass(),
        ));
        for (j, eps) in [0.05, 0.1, 0.5].into_iter().enumerate() {
            let a = verify_approximation_bound(
                g,
                &table,
                z,
                eps,
                10,
                derive_path(seed, &[i as u64, j as u64]),
            )?;
            rows.push(ReportRow::new(
                &format!("approximation_{eps}"),
                &label,
                a.max_regret,
                a.bound,
                a.pass(),
            ));
        }
    }
    Ok(rows)
}
