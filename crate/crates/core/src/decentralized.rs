//! Fully decentralized weights: every vertex keeps, per distance category,
//! a FIFO buffer of the remaining costs of the last `m` queries it forwarded.
//! A search step at `x` reads the buffers of `x`'s neighbors and nothing else.
//!
//! A vertex whose category sees much less traffic than the vertex itself
//! generates is assumed to hold a stale, overestimated value; at the end of
//! each interval such buffers are overwritten with zeros, which makes the
//! vertex attractive again and brings in fresh samples.

use std::io::Write;

use crate::costs::{CostModel, QueryCosts};
use crate::error::{Error, Result};
use crate::rng::{derive_path, tag};
use crate::search::{
    evaluate_batch, query_at, run_search_with, BatchStats, CostGreedy, ModelParams, Query,
    SearchResult, Weighting,
};
use crate::topology::{CostGraph, VertexId};
use crate::weights::{distance_zone, zone_count, RoundDiagnostics};

pub const DEFAULT_BUFFER: usize = 20;

/// Fixed-capacity FIFO of cost samples with a cached mean.
#[derive(Clone, Debug, PartialEq)]
pub struct FifoBuffer {
    entries: Vec<f64>,
    capacity: usize,
    head: usize,
    mean: f64,
}

impl FifoBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "buffer capacity must be positive");
        Self {
            entries: Vec::with_capacity(capacity),
            capacity,
            head: 0,
            mean: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Mean of the stored samples; 0 when empty.
    #[inline]
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Appends `x`, evicting the oldest sample when full.
    pub fn push(&mut self, x: f64) {
        if self.entries.len() < self.capacity {
            self.entries.push(x);
        } else {
            self.entries[self.head] = x;
            self.head = (self.head + 1) % self.capacity;
        }
        self.mean = self.entries.iter().sum::<f64>() / self.entries.len() as f64;
    }

    /// Replaces the contents with `capacity` zeros.
    pub fn zero(&mut self) {
        self.entries.clear();
        self.entries.resize(self.capacity, 0.0);
        self.head = 0;
        self.mean = 0.0;
    }

    /// Samples from oldest to newest.
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        let (newer, older) = self
            .entries
            .split_at(if self.entries.len() == self.capacity {
                self.head
            } else {
                0
            });
        older.iter().chain(newer).copied()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeState {
    pub buffers: Vec<FifoBuffer>,
    /// Queries forwarded per category during the current interval.
    pub received: Vec<u32>,
    /// Queries this vertex initiated during the current interval.
    pub self_count: u32,
}

impl NodeState {
    pub fn new(categories: usize, m: usize) -> Self {
        Self {
            buffers: vec![FifoBuffer::new(m); categories],
            received: vec![0; categories],
            self_count: 0,
        }
    }

    #[inline]
    pub fn weight(&self, category: usize) -> f64 {
        self.buffers[category].mean()
    }

    /// Zeroes every buffer whose category received fewer than a quarter of
    /// the queries this vertex initiated, then clears the counters. Returns
    /// the number of zeroed buffers.
    pub fn reset_check(&mut self) -> usize {
        let mut zeroed = 0;
        for (buffer, received) in self.buffers.iter_mut().zip(&mut self.received) {
            if 4 * (*received as u64) < self.self_count as u64 {
                buffer.zero();
                zeroed += 1;
            }
            *received = 0;
        }
        self.self_count = 0;
        zeroed
    }
}

/// Distance category of `d >= 1`.
#[inline]
pub fn category(d: u32) -> usize {
    distance_zone(d)
}

/// Reads the neighbor states during a search step.
pub struct StateWeights<'a> {
    states: &'a [NodeState],
}

impl Weighting for StateWeights<'_> {
    #[inline]
    fn weight(&self, g: &CostGraph, y: VertexId, z: VertexId) -> f64 {
        let d = g.distance(y, z);
        if d == 0 {
            return 0.0;
        }
        self.states[y.index()].weight(category(d))
    }
}

#[derive(Clone, Debug)]
pub struct DecentralizedNetwork {
    graph: CostGraph,
    params: ModelParams,
    states: Vec<NodeState>,
    m: usize,
}

impl DecentralizedNetwork {
    pub fn new(graph: CostGraph, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("buffer size m must be >= 1".into()));
        }
        let categories = zone_count(graph.n());
        let states = vec![NodeState::new(categories, m); graph.n() as usize];
        Ok(Self {
            params: ModelParams::of(&graph),
            graph,
            states,
            m,
        })
    }

    pub fn graph(&self) -> &CostGraph {
        &self.graph
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    pub fn state(&self, x: VertexId) -> &NodeState {
        &self.states[x.index()]
    }

    pub fn buffer_size(&self) -> usize {
        self.m
    }

    pub fn weights(&self) -> StateWeights<'_> {
        StateWeights {
            states: &self.states,
        }
    }

    /// Routes one query with the current states, then lets every visited
    /// vertex record the realized remaining cost.
    pub fn route_query(&mut self, model: &CostModel, q: &Query) -> Result<SearchResult> {
        let costs = QueryCosts::new(model, q.cost_seed);
        let r = run_search_with(
            &self.graph,
            &self.params,
            &costs,
            q.source,
            q.target,
            &CostGreedy,
            &StateWeights {
                states: &self.states,
            },
        )?;
        let remaining = r.remaining_costs();
        for (v, rem) in r.path.iter().zip(&remaining).take(r.path.len() - 1) {
            let c = category(self.graph.distance(*v, q.target));
            let state = &mut self.states[v.index()];
            state.buffers[c].push(*rem);
            state.received[c] += 1;
        }
        self.states[q.source.index()].self_count += 1;
        Ok(r)
    }

    /// Runs [`NodeState::reset_check`] at every vertex; returns the number
    /// of zeroed buffers.
    pub fn reset_all(&mut self) -> usize {
        self.states.iter_mut().map(NodeState::reset_check).sum()
    }

    /// Routes the evaluation stream `query_at(n, seed, 0..queries)` with
    /// the network still learning, as it would in operation. No reset checks
    /// run during the batch.
    pub fn evaluate_live(
        &mut self,
        model: &CostModel,
        queries: usize,
        seed: u64,
    ) -> Result<BatchStats> {
        let mut stats = BatchStats::default();
        for i in 0..queries {
            let q = query_at(self.graph.n(), seed, i as u64);
            let r = self.route_query(model, &q)?;
            stats.record(&self.graph, &q, &r);
        }
        Ok(stats)
    }

    /// Evaluation with the states frozen. Buffers zeroed by the last reset
    /// stay at zero here, so this understates what the live network achieves.
    pub fn evaluate_frozen(
        &self,
        model: &CostModel,
        queries: usize,
        seed: u64,
    ) -> Result<BatchStats> {
        evaluate_batch(
            &self.graph,
            model,
            &CostGreedy,
            &self.weights(),
            queries,
            seed,
        )
    }

    /// CSV `vertex,category,buffer_mean,buffer_len,received,self_count`.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "vertex,category,buffer_mean,buffer_len,received,self_count"
        )?;
        for (x, s) in self.states.iter().enumerate() {
            for (c, b) in s.buffers.iter().enumerate() {
                writeln!(
                    out,
                    "{x},{c},{},{},{},{}",
                    b.mean(),
                    b.len(),
                    s.received[c],
                    s.self_count
                )?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct DecentralizedConfig {
    pub rounds: usize,
    /// Queries per round; `None` means `20 n`.
    pub queries_per_round: Option<usize>,
    pub seed: u64,
}

impl Default for DecentralizedConfig {
    fn default() -> Self {
        Self {
            rounds: 20,
            queries_per_round: None,
            seed: 0,
        }
    }
}

/// Sequential query stream over uniform ordered pairs with a reset check at
/// every round boundary. Diagnostics describe the queries as routed during
/// each round.
pub fn run_decentralized_experiment(
    net: &mut DecentralizedNetwork,
    model: &CostModel,
    cfg: &DecentralizedConfig,
) -> Result<Vec<RoundDiagnostics>> {
    let n = net.graph.n();
    let per_round = cfg.queries_per_round.unwrap_or(20 * n as usize);
    let mut out = Vec::with_capacity(cfg.rounds);
    for round in 1..=cfg.rounds {
        let stream = derive_path(cfg.seed, &[tag::TRAIN, round as u64]);
        let mut stats = BatchStats::default();
        for i in 0..per_round {
            let q = query_at(n, stream, i as u64);
            let r = net.route_query(model, &q)?;
            stats.record(&net.graph, &q, &r);
        }
        net.reset_all();
        out.push(RoundDiagnostics::from_stats(round, &stats));
    }
    Ok(out)
}
