//! Cost-greedy weights.
//!
//! Two routes to the solution of the optimality equation
//! `w(x) = E[T_z(x; F_w)]`:
//!
//! * **exact**: for finite-support cost laws, [`exact_evaluate`] computes
//!   `E[T_z(x; F_w)]` for every `x` in one pass over vertices ordered by
//!   distance to `z`, enumerating every joint cost outcome on the forward
//!   edges of each vertex. Iterating it from any start reaches the fixed
//!   point after at most `n - 1` passes.
//! * **empirical**: [`empirical_round`] simulates queries with the current
//!   weights and records, at every visited vertex, the realized remaining
//!   cost. Samples are pooled by distance to the target (the graph is
//!   translation invariant) and compressed into zones `[2^i, 2^(i+1))`.

use std::io::{BufRead, Write};

use crate::costs::{CostModel, DiscreteTable, QueryCosts};
use crate::error::{Error, Result};
use crate::rng::{derive_path, tag};
use crate::search::{
    fold_chunks, query_at, run_search_with, BatchStats, CostGreedy, Hop, LocalView, ModelParams,
    Stepper, Weighting,
};
use crate::topology::{CostGraph, EdgeId, VertexId};

/// Largest number of joint cost outcomes enumerated for a single vertex.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// Zone of a distance `d >= 1`: `floor(log2 d)`.
#[inline]
pub fn distance_zone(d: u32) -> usize {
    debug_assert!(d >= 1);
    (31 - d.leading_zeros()) as usize
}

/// Number of zones covering distances `1..n`.
pub fn zone_count(n: u32) -> usize {
    distance_zone(n.max(2) - 1) + 1
}

/// Optional split of the weights by the degree of the vertex they describe.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DegreeConditioning {
    #[default]
    None,
    /// Class `floor(log2(q + 1))` for a vertex with `q` shortcuts.
    Log2Shortcuts,
}

impl DegreeConditioning {
    #[inline]
    pub fn class_of(self, shortcuts: u32) -> usize {
        match self {
            DegreeConditioning::None => 0,
            DegreeConditioning::Log2Shortcuts => distance_zone(shortcuts + 1),
        }
    }

    pub fn class_count(self, g: &CostGraph) -> usize {
        g.vertices()
            .map(|x| self.class_of(g.shortcut_count(x)))
            .max()
            .unwrap_or(0)
            + 1
    }
}

/// `w_z(x)` for one fixed target `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetWeights {
    target: VertexId,
    values: Vec<f64>,
}

impl TargetWeights {
    pub fn new(target: VertexId, mut values: Vec<f64>) -> Self {
        values[target.index()] = 0.0;
        Self { target, values }
    }

    pub fn constant(n: u32, target: VertexId, value: f64) -> Self {
        Self::new(target, vec![value; n as usize])
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Weighting for TargetWeights {
    fn weight(&self, _: &CostGraph, y: VertexId, z: VertexId) -> f64 {
        debug_assert_eq!(z, self.target);
        self.values[y.index()]
    }
}

/// `w_z(x)` for every ordered pair.
#[derive(Clone, Debug, PartialEq)]
pub struct FullWeightTable {
    n: u32,
    values: Vec<f64>,
}

impl FullWeightTable {
    pub fn from_targets(n: u32, targets: &[TargetWeights]) -> Self {
        let mut values = vec![0.0; n as usize * n as usize];
        for t in targets {
            let base = t.target.index() * n as usize;
            values[base..base + n as usize].copy_from_slice(&t.values);
        }
        Self { n, values }
    }

    pub fn get(&self, x: VertexId, z: VertexId) -> f64 {
        self.values[z.index() * self.n as usize + x.index()]
    }
}

impl Weighting for FullWeightTable {
    fn weight(&self, _: &CostGraph, y: VertexId, z: VertexId) -> f64 {
        self.get(y, z)
    }
}

/// Vertices other than `z` by increasing distance to `z`. On the directed
/// ring all distances are distinct, so this order is the rank order.
pub fn rank_order(g: &CostGraph, z: VertexId) -> Vec<VertexId> {
    let mut order: Vec<VertexId> = g.vertices().filter(|&x| x != z).collect();
    order.sort_by_key(|&x| (g.distance(x, z), x.0));
    order
}

/// Exact expected cost and steps of forward weighted search toward one target.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactEvaluation {
    pub cost: Vec<f64>,
    pub steps: Vec<f64>,
}

fn forward_edges(g: &CostGraph, x: VertexId, z: VertexId) -> Vec<(EdgeId, VertexId, u32)> {
    let dx = g.distance(x, z);
    g.out_edges(x)
        .filter_map(|(e, y)| {
            let d = g.distance(y, z);
            (d < dx).then_some((e, y, d))
        })
        .collect()
}

/// `support^k`, or an error past [`ENUMERATION_LIMIT`].
pub fn enumeration_terms(support: usize, k: usize) -> Result<u128> {
    let terms = (support as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if terms > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            terms,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(terms)
}

/// `E[T_z(x; F_w)]` and `E[S_z(x; F_w)]` for every `x`, exactly.
///
/// Vertices are finalized in rank order, so the continuation value of a
/// chosen neighbor is already the exact expectation under `F_w`.
pub fn exact_evaluate(
    g: &CostGraph,
    table: &DiscreteTable,
    weights: &[f64],
    z: VertexId,
) -> Result<ExactEvaluation> {
    let n = g.n() as usize;
    if weights.len() != n {
        return Err(Error::InvalidSpec(format!(
            "{} weights for {n} vertices",
            weights.len()
        )));
    }
    let params = ModelParams::of(g);
    let values = table.values();
    let probs = table.probs();
    let support = values.len();
    let mut cost = vec![0.0; n];
    let mut steps = vec![0.0; n];
    let mut hops: Vec<Hop> = Vec::new();

    for x in rank_order(g, z) {
        let fwd = forward_edges(g, x, z);
        let terms = enumeration_terms(support, fwd.len())?;
        let mut digits = vec![0usize; fwd.len()];
        let (mut ec, mut es) = (0.0, 0.0);
        for _ in 0..terms {
            hops.clear();
            let mut p = 1.0;
            for (&(edge, y, distance), &digit) in fwd.iter().zip(&digits) {
                p *= probs[digit];
                hops.push(Hop {
                    edge,
                    vertex: y,
                    distance,
                    cost: values[digit],
                    weight: if y == z { 0.0 } else { weights[y.index()] },
                    shortcuts: g.shortcut_count(y),
                });
            }
            let view = LocalView::new(x, z, g.distance(x, z), &hops, &params);
            let chosen = hops[CostGreedy
                .choose(&view)
                .expect("a forward edge always exists")];
            ec += p * (chosen.cost + cost[chosen.vertex.index()]);
            es += p * (1.0 + steps[chosen.vertex.index()]);
            for d in digits.iter_mut() {
                *d += 1;
                if *d < support {
                    break;
                }
                *d = 0;
            }
        }
        cost[x.index()] = ec;
        steps[x.index()] = es;
    }
    Ok(ExactEvaluation { cost, steps })
}

/// One step of `w_{i+1}(x) = E[T_z(x; F_{w_i})]`.
pub fn exact_iterate(
    g: &CostGraph,
    table: &DiscreteTable,
    weights: &[f64],
    z: VertexId,
) -> Result<Vec<f64>> {
    Ok(exact_evaluate(g, table, weights, z)?.cost)
}

/// Iterates from `initial` until two consecutive iterates coincide.
/// Returns `w_0, w_1, ..., w_k` with `w_k == w_{k-1}` (or `k == 0` when
/// `initial` is already a fixed point).
pub fn exact_trajectory(
    g: &CostGraph,
    table: &DiscreteTable,
    z: VertexId,
    initial: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let mut w0 = initial.to_vec();
    w0[z.index()] = 0.0;
    let mut iterates = vec![w0];
    // the fixed point is reached by iteration n - 1; allow one extra pass to observe it
    for _ in 0..=g.n() {
        let next = exact_iterate(g, table, iterates.last().expect("non-empty"), z)?;
        let done = &next == iterates.last().expect("non-empty");
        iterates.push(next);
        if done {
            break;
        }
    }
    Ok(iterates)
}

/// Exact cost-greedy weights toward `z`.
pub fn exact_fixpoint(g: &CostGraph, table: &DiscreteTable, z: VertexId) -> Result<TargetWeights> {
    let traj = exact_trajectory(g, table, z, &vec![0.0; g.n() as usize])?;
    Ok(TargetWeights::new(
        z,
        traj.last().expect("non-empty").clone(),
    ))
}

/// Per-distance sample accumulator, optionally split by degree class.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceWeightVector {
    n: u32,
    conditioning: DegreeConditioning,
    classes: usize,
    sums: Vec<f64>,
    counts: Vec<u64>,
}

impl DistanceWeightVector {
    pub fn new(n: u32, conditioning: DegreeConditioning, classes: usize) -> Self {
        let len = n as usize * classes.max(1);
        Self {
            n,
            conditioning,
            classes: classes.max(1),
            sums: vec![0.0; len],
            counts: vec![0; len],
        }
    }

    /// Unconditioned vector holding one sample of `values[d]` at each `d >= 1`.
    pub fn from_values(values: &[f64]) -> Self {
        let mut v = Self::new(values.len() as u32, DegreeConditioning::None, 1);
        for (d, &x) in values.iter().enumerate().skip(1) {
            v.record(0, d as u32, x);
        }
        v
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn conditioning(&self) -> DegreeConditioning {
        self.conditioning
    }

    #[inline]
    fn slot(&self, class: usize, d: u32) -> usize {
        class * self.n as usize + d as usize
    }

    #[inline]
    pub fn record(&mut self, class: usize, d: u32, value: f64) {
        let i = self.slot(class, d);
        self.sums[i] += value;
        self.counts[i] += 1;
    }

    pub fn count(&self, class: usize, d: u32) -> u64 {
        self.counts[self.slot(class, d)]
    }

    pub fn sum(&self, class: usize, d: u32) -> f64 {
        self.sums[self.slot(class, d)]
    }

    pub fn mean(&self, class: usize, d: u32) -> Option<f64> {
        let i = self.slot(class, d);
        (self.counts[i] > 0).then(|| self.sums[i] / self.counts[i] as f64)
    }

    pub fn merge(&mut self, other: &DistanceWeightVector) {
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

impl Weighting for DistanceWeightVector {
    fn weight(&self, g: &CostGraph, y: VertexId, z: VertexId) -> f64 {
        let class = self
            .conditioning
            .class_of(g.shortcut_count(y))
            .min(self.classes - 1);
        self.mean(class, g.distance(y, z)).unwrap_or(0.0)
    }
}

/// Recorded positions of zone `zone`: `k_z` evenly spaced starts within
/// `[2^zone, min(2^(zone+1), n))`, fewer if the zone is narrower.
pub fn zone_positions(n: u32, zone: usize, k_z: usize) -> Vec<u32> {
    let start = 1u64 << zone;
    let end = (1u64 << (zone + 1)).min(n as u64);
    if start >= end {
        return Vec::new();
    }
    let width = end - start;
    let k = (k_z as u64).clamp(1, width);
    (0..k).map(|j| (start + j * width / k) as u32).collect()
}

#[derive(Clone, Debug, PartialEq)]
struct Zone {
    positions: Vec<u32>,
    values: Vec<f64>,
}

/// Weights stored only at exponentially spaced distances. Lookup returns the
/// entry of the nearest recorded position at or below `d`; `d = 0` is 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressedWeightVector {
    n: u32,
    k_z: usize,
    conditioning: DegreeConditioning,
    classes: Vec<Vec<Zone>>,
}

impl CompressedWeightVector {
    pub fn zeros(n: u32, k_z: usize, conditioning: DegreeConditioning, classes: usize) -> Self {
        let zones: Vec<Zone> = (0..zone_count(n))
            .map(|i| {
                let positions = zone_positions(n, i, k_z);
                let values = vec![0.0; positions.len()];
                Zone { positions, values }
            })
            .collect();
        Self {
            n,
            k_z,
            conditioning,
            classes: vec![zones; classes.max(1)],
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k_z(&self) -> usize {
        self.k_z
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Number of stored values per class.
    pub fn entries_per_class(&self) -> usize {
        self.classes[0].iter().map(|z| z.positions.len()).sum()
    }

    pub fn lookup(&self, d: u32) -> f64 {
        self.lookup_class(0, d)
    }

    pub fn lookup_class(&self, class: usize, d: u32) -> f64 {
        if d == 0 {
            return 0.0;
        }
        let zone = &self.classes[class][distance_zone(d)];
        let i = zone.positions.partition_point(|&p| p <= d);
        zone.values[i - 1]
    }

    /// `(class, zone, position, value)` for every stored entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32, f64)> + '_ {
        self.classes.iter().enumerate().flat_map(|(c, zones)| {
            zones.iter().enumerate().flat_map(move |(i, z)| {
                z.positions
                    .iter()
                    .zip(&z.values)
                    .map(move |(&p, &v)| (c, i, p, v))
            })
        })
    }

    /// CSV `zone,position,value`; degree-conditioned vectors get a leading
    /// `class` column.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let conditioned = self.classes.len() > 1;
        if conditioned {
            writeln!(out, "class,zone,position,value")?;
        } else {
            writeln!(out, "zone,position,value")?;
        }
        for (c, zone, p, v) in self.entries() {
            if conditioned {
                writeln!(out, "{c},{zone},{p},{v}")?;
            } else {
                writeln!(out, "{zone},{p},{v}")?;
            }
        }
        Ok(())
    }

    /// Reads the entries written by [`write_csv`](Self::write_csv) for a graph of size `n`.
    pub fn read_csv<R: BufRead>(
        input: R,
        n: u32,
        conditioning: DegreeConditioning,
    ) -> Result<Self> {
        let mut rows: Vec<(usize, usize, u32, f64)> = Vec::new();
        let mut conditioned = false;
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if i == 0 {
                conditioned = line.trim() == "class,zone,position,value";
                if !conditioned && line.trim() != "zone,position,value" {
                    return Err(Error::Parse {
                        line: 1,
                        message: format!("unexpected header `{line}`"),
                    });
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let perr = |m: String| Error::Parse {
                line: i + 1,
                message: m,
            };
            let f: Vec<&str> = line.split(',').collect();
            let f = if conditioned {
                f
            } else {
                [&["0"], &f[..]].concat()
            };
            if f.len() != 4 {
                return Err(perr(format!("expected 4 fields, got `{line}`")));
            }
            rows.push((
                f[0].parse().map_err(|e| perr(format!("class: {e}")))?,
                f[1].parse().map_err(|e| perr(format!("zone: {e}")))?,
                f[2].parse().map_err(|e| perr(format!("position: {e}")))?,
                f[3].parse().map_err(|e| perr(format!("value: {e}")))?,
            ));
        }
        let classes = rows.iter().map(|r| r.0).max().map_or(1, |c| c + 1);
        let zones = zone_count(n);
        let mut out = Self {
            n,
            k_z: 0,
            conditioning,
            classes: vec![
                (0..zones)
                    .map(|_| Zone {
                        positions: Vec::new(),
                        values: Vec::new()
                    })
                    .collect();
                classes
            ],
        };
        for (c, zone, p, v) in rows {
            if zone >= zones || p == 0 || p >= n || distance_zone(p) != zone {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("position {p} does not belong to zone {zone} for n = {n}"),
                });
            }
            let z = &mut out.classes[c][zone];
            z.positions.push(p);
            z.values.push(v);
        }
        for zones in &out.classes {
            for (i, z) in zones.iter().enumerate() {
                if z.positions.first() != Some(&(1u32 << i))
                    || z.positions.windows(2).any(|w| w[0] >= w[1])
                {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!(
                            "zone {i} must start at {} with increasing positions",
                            1u32 << i
                        ),
                    });
                }
            }
        }
        out.k_z = out.classes[0]
            .iter()
            .map(|z| z.positions.len())
            .max()
            .unwrap_or(1);
        Ok(out)
    }
}

impl Weighting for CompressedWeightVector {
    #[inline]
    fn weight(&self, g: &CostGraph, y: VertexId, z: VertexId) -> f64 {
        let class = self
            .conditioning
            .class_of(g.shortcut_count(y))
            .min(self.classes.len() - 1);
        self.lookup_class(class, g.distance(y, z))
    }
}

/// Zone compression with `k_z` positions per zone; each entry is the
/// sample-weighted mean of the distances it covers.
pub fn compress(v: &DistanceWeightVector, k_z: usize) -> CompressedWeightVector {
    compress_with_fallback(v, k_z, None)
}

/// As [`compress`], but entries without samples take the value `previous`
/// gives at that position (0 without a previous vector).
pub fn compress_with_fallback(
    v: &DistanceWeightVector,
    k_z: usize,
    previous: Option<&CompressedWeightVector>,
) -> CompressedWeightVector {
    let mut out = CompressedWeightVector::zeros(v.n, k_z, v.conditioning, v.classes);
    for (class, zones) in out.classes.iter_mut().enumerate() {
        for (zi, zone) in zones.iter_mut().enumerate() {
            let zone_end = (1u64 << (zi + 1)).min(v.n as u64) as u32;
            for j in 0..zone.positions.len() {
                let lo = zone.positions[j];
                let hi = zone.positions.get(j + 1).copied().unwrap_or(zone_end);
                let (mut sum, mut count) = (0.0, 0u64);
                for d in lo..hi {
                    sum += v.sum(class, d);
                    count += v.count(class, d);
                }
                zone.values[j] = if count > 0 {
                    sum / count as f64
                } else {
                    previous.map_or(0.0, |p| p.lookup_class(class.min(p.classes.len() - 1), lo))
                };
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct EstimationConfig {
    /// Queries per round; `None` means `20 n`.
    pub queries_per_round: Option<usize>,
    pub rounds: usize,
    pub k_z: usize,
    pub conditioning: DegreeConditioning,
    pub seed: u64,
    /// Starting weights; `None` means `w_0 ≡ 0`.
    pub initial: Option<CompressedWeightVector>,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        Self {
            queries_per_round: None,
            rounds: 10,
            k_z: 1,
            conditioning: DegreeConditioning::None,
            seed: 0,
            initial: None,
        }
    }
}

impl EstimationConfig {
    pub fn queries(&self, n: u32) -> usize {
        self.queries_per_round.unwrap_or(20 * n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 || self.k_z == 0 || self.queries_per_round == Some(0) {
            return Err(Error::Config(
                "rounds, k_z and queries per round must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundDiagnostics {
    pub round: usize,
    pub mean_cost: f64,
    pub mean_steps: f64,
    pub ci95_cost: f64,
    pub ci95_steps: f64,
    pub queries: u64,
}

impl RoundDiagnostics {
    pub fn from_stats(round: usize, s: &BatchStats) -> Self {
        Self {
            round,
            mean_cost: s.cost.mean(),
            mean_steps: s.steps.mean(),
            ci95_cost: s.cost.ci95(),
            ci95_steps: s.steps.ci95(),
            queries: s.cost.count,
        }
    }
}

/// CSV `round,mean_cost,mean_steps,ci95_cost`.
pub fn write_diagnostics_csv<W: Write>(rounds: &[RoundDiagnostics], mut out: W) -> Result<()> {
    writeln!(out, "round,mean_cost,mean_steps,ci95_cost")?;
    for r in rounds {
        writeln!(
            out,
            "{},{},{},{}",
            r.round, r.mean_cost, r.mean_steps, r.ci95_cost
        )?;
    }
    Ok(())
}

pub struct RoundOutput {
    pub samples: DistanceWeightVector,
    pub stats: BatchStats,
}

/// Simulates one round of queries with frozen weights `w` and pools the
/// remaining realized cost seen at every visited vertex by its distance to
/// the target (and degree class). `round` selects the query stream.
pub fn empirical_round(
    g: &CostGraph,
    model: &CostModel,
    w: &dyn Weighting,
    cfg: &EstimationConfig,
    round: usize,
) -> Result<RoundOutput> {
    let classes = cfg.conditioning.class_count(g);
    let params = ModelParams::of(g);
    let stream = derive_path(cfg.seed, &[tag::TRAIN, round as u64]);
    let (samples, stats) = fold_chunks(
        cfg.queries(g.n()),
        || {
            (
                DistanceWeightVector::new(g.n(), cfg.conditioning, classes),
                BatchStats::default(),
            )
        },
        |(acc, stats), i| {
            let q = query_at(g.n(), stream, i as u64);
            let costs = QueryCosts::new(model, q.cost_seed);
            let r = run_search_with(g, &params, &costs, q.source, q.target, &CostGreedy, w)?;
            let remaining = r.remaining_costs();
            for (v, rem) in r.path.iter().zip(&remaining).take(r.path.len() - 1) {
                let class = cfg.conditioning.class_of(g.shortcut_count(*v));
                acc.record(class, g.distance(*v, q.target), *rem);
            }
            stats.record(g, &q, &r);
            Ok(())
        },
        |(a, sa), (b, sb)| {
            a.merge(&b);
            sa.merge(&sb);
        },
    )?;
    Ok(RoundOutput { samples, stats })
}

/// Runs `cfg.rounds` empirical rounds, each round's compressed estimate
/// becoming the next round's weighting. `on_round` sees the weights
/// produced by each round.
pub fn estimate_rounds<F>(
    g: &CostGraph,
    model: &CostModel,
    cfg: &EstimationConfig,
    mut on_round: F,
) -> Result<(CompressedWeightVector, Vec<RoundDiagnostics>)>
where
    F: FnMut(usize, &CompressedWeightVector) -> Result<()>,
{
    cfg.validate()?;
    let classes = cfg.conditioning.class_count(g);
    let mut current = cfg.initial.clone().unwrap_or_else(|| {
        CompressedWeightVector::zeros(g.n(), cfg.k_z, cfg.conditioning, classes)
    });
    let mut diagnostics = Vec::with_capacity(cfg.rounds);
    for round in 1..=cfg.rounds {
        let out = empirical_round(g, model, &current, cfg, round)?;
        diagnostics.push(RoundDiagnostics::from_stats(round, &out.stats));
        current = compress_with_fallback(&out.samples, cfg.k_z, Some(&current));
        on_round(round, &current)?;
    }
    Ok((current, diagnostics))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EstimationMode {
    #[default]
    Empirical,
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FittedWeights {
    Full(FullWeightTable),
    Compressed(CompressedWeightVector),
}

impl Weighting for FittedWeights {
    fn weight(&self, g: &CostGraph, y: VertexId, z: VertexId) -> f64 {
        match self {
            FittedWeights::Full(t) => t.weight(g, y, z),
            FittedWeights::Compressed(c) => c.weight(g, y, z),
        }
    }
}

pub struct Estimate {
    pub weights: FittedWeights,
    pub rounds: Vec<RoundDiagnostics>,
}

/// Whether exact mode can handle `model` on `g`.
pub fn exact_eligible(g: &CostGraph, model: &CostModel) -> bool {
    match model.as_discrete() {
        Some(t) => g
            .vertices()
            .all(|x| enumeration_terms(t.support_size(), g.out_degree(x) as usize).is_ok()),
        None => false,
    }
}

/// Iterates the weights to (an estimate of) the cost-greedy fixed point.
///
/// Exact mode solves every target separately and reports, per iteration,
/// the exact mean cost and steps over all ordered pairs.
pub fn iterate_to_fixpoint(
    g: &CostGraph,
    model: &CostModel,
    cfg: &EstimationConfig,
    mode: EstimationMode,
) -> Result<Estimate> {
    match mode {
        EstimationMode::Empirical => {
            let (w, rounds) = estimate_rounds(g, model, cfg, |_, _| Ok(()))?;
            Ok(Estimate {
                weights: FittedWeights::Compressed(w),
                rounds,
            })
        }
        EstimationMode::Exact => {
            let table = model.as_discrete().ok_or_else(|| {
                Error::Unsupported(format!("exact weights need finite support, got `{model}`"))
            })?;
            if !exact_eligible(g, model) {
                return Err(Error::Unsupported(format!(
                    "exact weights for `{model}` exceed {ENUMERATION_LIMIT} outcomes at some vertex"
                )));
            }
            let n = g.n() as usize;
            let mut tables = Vec::with_capacity(n);
            // per target, the summed (cost, steps) of every iteration until it stops changing
            let mut traces: Vec<Vec<(f64, f64)>> = Vec::with_capacity(n);
            for z in g.vertices() {
                let mut w = vec![0.0; n];
                let mut trace = Vec::new();
                loop {
                    let eval = exact_evaluate(g, &table, &w, z)?;
                    trace.push((
                        eval.cost.iter().sum::<f64>(),
                        eval.steps.iter().sum::<f64>(),
                    ));
                    if eval.cost == w {
                        break;
                    }
                    w = eval.cost;
                }
                traces.push(trace);
                tables.push(TargetWeights::new(z, w));
            }
            let total_rounds = traces.iter().map(Vec::len).max().unwrap_or(0);
            let pairs = (n * (n - 1)) as f64;
            let rounds = (0..total_rounds)
                .map(|r| {
                    let (c, s) = traces.iter().fold((0.0, 0.0), |(c, s), t| {
                        let (tc, ts) = t[r.min(t.len() - 1)];
                        (c + tc, s + ts)
                    });
                    RoundDiagnostics {
                        round: r + 1,
                        mean_cost: c / pairs,
                        mean_steps: s / pairs,
                        ci95_cost: 0.0,
                        ci95_steps: 0.0,
                        queries: 0,
                    }
                })
                .collect();
            Ok(Estimate {
                weights: FittedWeights::Full(FullWeightTable::from_targets(g.n(), &tables)),
                rounds,
            })
        }
    }
}
