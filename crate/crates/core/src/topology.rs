//! Directed rings augmented with Kleinberg-style shortcuts.
//!
//! Every vertex `x` owns one ring edge to `x + 1 (mod n)` followed by its
//! shortcut edges. Shortcut destinations are drawn independently, each at
//! ring distance `d` with probability proportional to `d^-alpha`.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Pareto};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, tag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a directed edge in a [`CostGraph`]. Parallel edges get distinct ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Directed arc distance `(z - x) mod n`.
#[inline]
pub fn ring_distance(x: VertexId, z: VertexId, n: u32) -> u32 {
    debug_assert!(x.0 < n && z.0 < n);
    ((z.0 as u64 + n as u64 - x.0 as u64) % n as u64) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RingMetric {
    n: u32,
}

impl RingMetric {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("ring size {n} < 2")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn distance(&self, x: VertexId, z: VertexId) -> u32 {
        ring_distance(x, z, self.n)
    }
}

/// Per-vertex shortcut count law.
#[derive(Clone, Debug, PartialEq)]
pub enum ShortcutLaw {
    Constant(u32),
    /// `fraction_a` of the vertices (an exact quota) get `count_a`, the rest `count_b`.
    TwoType {
        count_a: u32,
        fraction_a: f64,
        count_b: u32,
    },
    /// `floor(Pareto(min = 1, tail))`, capped at `n - 1`.
    PowerLaw {
        tail: f64,
    },
}

impl fmt::Display for ShortcutLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShortcutLaw::Constant(q) => write!(f, "constant:{q}"),
            ShortcutLaw::TwoType {
                count_a,
                fraction_a,
                count_b,
            } => write!(f, "two-type:{count_a},{fraction_a},{count_b}"),
            ShortcutLaw::PowerLaw { tail } => write!(f, "power-law:{tail}"),
        }
    }
}

impl FromStr for ShortcutLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("cannot parse shortcut law `{s}`"));
        let (kind, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums: Vec<&str> = args.split(',').map(str::trim).collect();
        match (kind.trim(), nums.as_slice()) {
            ("constant", [q]) => Ok(ShortcutLaw::Constant(q.parse().map_err(|_| bad())?)),
            ("two-type", [a, p, b]) => Ok(ShortcutLaw::TwoType {
                count_a: a.parse().map_err(|_| bad())?,
                fraction_a: p.parse().map_err(|_| bad())?,
                count_b: b.parse().map_err(|_| bad())?,
            }),
            ("power-law", [t]) => Ok(ShortcutLaw::PowerLaw {
                tail: t.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphSpec {
    pub n: u32,
    pub alpha: f64,
    pub shortcuts: ShortcutLaw,
    pub seed: u64,
}

impl GraphSpec {
    /// Ring of `n` with `log2 n` shortcuts per vertex and `alpha = 1`.
    pub fn small_world(n: u32, seed: u64) -> Self {
        Self {
            n,
            alpha: 1.0,
            shortcuts: ShortcutLaw::Constant(log2_rounded(n)),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSpec(format!("n = {} < 2", self.n)));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "alpha = {} must be >= 0",
                self.alpha
            )));
        }
        match self.shortcuts {
            ShortcutLaw::Constant(_) => {}
            ShortcutLaw::TwoType { fraction_a, .. } => {
                if !(fraction_a > 0.0 && fraction_a < 1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "two-type fraction {fraction_a} not in (0, 1)"
                    )));
                }
            }
            ShortcutLaw::PowerLaw { tail } => {
                if !(tail.is_finite() && tail > 1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "tail exponent {tail} must be > 1"
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn log2_rounded(n: u32) -> u32 {
    (n as f64).log2().round() as u32
}

/// `h_n = sum_{d=1}^{n-1} d^-alpha`.
pub fn harmonic_normalizer(n: u32, alpha: f64) -> f64 {
    (1..n).map(|d| (d as f64).powf(-alpha)).sum()
}

/// Probability that a single shortcut from `x` lands on each vertex.
/// Entry `x` itself is zero.
pub fn shortcut_target_distribution(x: VertexId, n: u32, alpha: f64) -> Result<Vec<f64>> {
    RingMetric::new(n)?;
    if x.0 >= n {
        return Err(Error::InvalidSpec(format!(
            "vertex {x} out of range for n = {n}"
        )));
    }
    let h = harmonic_normalizer(n, alpha);
    Ok((0..n)
        .map(|y| {
            let d = ring_distance(x, VertexId(y), n);
            if d == 0 {
                0.0
            } else {
                (d as f64).powf(-alpha) / h
            }
        })
        .collect())
}

/// A fixed realization of the random graph. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct CostGraph {
    n: u32,
    alpha: f64,
    seed: u64,
    offsets: Vec<u32>,
    targets: Vec<VertexId>,
}

impl CostGraph {
    /// Builds a ring of `n` plus the given shortcut destinations per vertex.
    pub fn from_shortcuts(n: u32, alpha: f64, seed: u64, shortcuts: &[Vec<u32>]) -> Result<Self> {
        RingMetric::new(n)?;
        if shortcuts.len() != n as usize {
            return Err(Error::InvalidSpec(format!(
                "{} shortcut lists for {n} vertices",
                shortcuts.len()
            )));
        }
        let mut offsets = Vec::with_capacity(n as usize + 1);
        let mut targets =
            Vec::with_capacity(n as usize + shortcuts.iter().map(Vec::len).sum::<usize>());
        offsets.push(0);
        for (x, list) in shortcuts.iter().enumerate() {
            targets.push(VertexId(((x as u64 + 1) % n as u64) as u32));
            for &y in list {
                if y >= n {
                    return Err(Error::InvalidSpec(format!(
                        "shortcut {x} -> {y} out of range"
                    )));
                }
                if y as usize == x {
                    return Err(Error::InvalidSpec(format!("self-loop shortcut at {x}")));
                }
                targets.push(VertexId(y));
            }
            offsets.push(targets.len() as u32);
        }
        Ok(Self {
            n,
            alpha,
            seed,
            offsets,
            targets,
        })
    }

    pub fn ring(n: u32) -> Result<Self> {
        Self::from_shortcuts(n, 1.0, 0, &vec![Vec::new(); n as usize])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn metric(&self) -> RingMetric {
        RingMetric { n: self.n }
    }

    #[inline]
    pub fn distance(&self, x: VertexId, z: VertexId) -> u32 {
        ring_distance(x, z, self.n)
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId)
    }

    /// Out-edges of `x`, ring successor first.
    #[inline]
    pub fn out_edges(&self, x: VertexId) -> impl ExactSizeIterator<Item = (EdgeId, VertexId)> + '_ {
        let lo = self.offsets[x.index()];
        let hi = self.offsets[x.index() + 1];
        (lo..hi).map(move |e| (EdgeId(e), self.targets[e as usize]))
    }

    #[inline]
    pub fn out_degree(&self, x: VertexId) -> u32 {
        self.offsets[x.index() + 1] - self.offsets[x.index()]
    }

    #[inline]
    pub fn shortcut_count(&self, x: VertexId) -> u32 {
        self.out_degree(x) - 1
    }

    pub fn edge_target(&self, e: EdgeId) -> VertexId {
        self.targets[e.index()]
    }

    pub fn shortcuts(&self, x: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out_edges(x).skip(1).map(|(_, y)| y)
    }

    /// Text form: header `n alpha seed`, then `x: succ shortcut...` per vertex.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {} {}", self.n, self.alpha, self.seed)?;
        for x in self.vertices() {
            write!(out, "{x}:")?;
            for (_, y) in self.out_edges(x) {
                write!(out, " {y}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("graph text is ascii")
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let mut lines = input.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| perr(1, "missing header".into()))?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(perr(1, format!("expected `n alpha seed`, got `{header}`")));
        }
        let n: u32 = fields[0].parse().map_err(|e| perr(1, format!("n: {e}")))?;
        let alpha: f64 = fields[1]
            .parse()
            .map_err(|e| perr(1, format!("alpha: {e}")))?;
        let seed: u64 = fields[2]
            .parse()
            .map_err(|e| perr(1, format!("seed: {e}")))?;
        RingMetric::new(n).map_err(|e| perr(1, e.to_string()))?;

        let mut shortcuts = Vec::with_capacity(n as usize);
        for (i, line) in lines {
            let line = line?;
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| perr(lineno, "missing `:`".into()))?;
            let x: u32 = head
                .trim()
                .parse()
                .map_err(|e| perr(lineno, format!("vertex: {e}")))?;
            if x as usize != shortcuts.len() {
                return Err(perr(
                    lineno,
                    format!("expected vertex {}, got {x}", shortcuts.len()),
                ));
            }
            let mut ids = rest.split_whitespace().map(|t| {
                t.parse::<u32>()
                    .map_err(|e| perr(lineno, format!("neighbor `{t}`: {e}")))
            });
            let succ = ids
                .next()
                .ok_or_else(|| perr(lineno, "missing ring successor".into()))??;
            if succ != (x + 1) % n {
                return Err(perr(
                    lineno,
                    format!("first neighbor {succ} is not the ring successor"),
                ));
            }
            shortcuts.push(ids.collect::<Result<Vec<u32>>>()?);
        }
        if shortcuts.len() != n as usize {
            return Err(perr(
                0,
                format!("expected {n} vertex lines, got {}", shortcuts.len()),
            ));
        }
        CostGraph::from_shortcuts(n, alpha, seed, &shortcuts)
    }
}

/// Shortcut count for every vertex under `spec.shortcuts`.
pub fn shortcut_counts(spec: &GraphSpec) -> Vec<u32> {
    let n = spec.n as usize;
    let degree_seed = derive_seed(spec.seed, tag::DEGREES);
    match spec.shortcuts {
        ShortcutLaw::Constant(q) => vec![q; n],
        ShortcutLaw::TwoType {
            count_a,
            fraction_a,
            count_b,
        } => {
            let quota = (fraction_a * spec.n as f64).floor() as usize;
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(degree_seed));
            let mut counts = vec![count_b; n];
            for &x in &order[..quota] {
                counts[x] = count_a;
            }
            counts
        }
        ShortcutLaw::PowerLaw { tail } => {
            let pareto = Pareto::new(1.0, tail).expect("validated tail exponent");
            let cap = (spec.n - 1) as f64;
            (0..n)
                .map(|x| {
                    let mut rng = ChaCha8Rng::seed_from_u64(degree_seed);
                    rng.set_stream(x as u64);
                    pareto.sample(&mut rng).floor().min(cap) as u32
                })
                .collect()
        }
    }
}

/// Draws a graph realization. Deterministic in `spec.seed`; each source
/// vertex uses its own RNG stream.
pub fn generate_graph(spec: &GraphSpec) -> Result<CostGraph> {
    spec.validate()?;
    let n = spec.n;
    let counts = shortcut_counts(spec);
    let weights: Vec<f64> = (1..n).map(|d| (d as f64).powf(-spec.alpha)).collect();
    let offsets_dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidSpec(format!("shortcut distribution: {e}")))?;
    let graph_seed = derive_seed(spec.seed, tag::GRAPH);

    let shortcuts: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            let mut rng = ChaCha8Rng::seed_from_u64(graph_seed);
            rng.set_stream(x as u64);
            (0..counts[x as usize])
                .map(|_| {
                    let d = offsets_dist.sample(&mut rng) as u64 + 1;
                    ((x as u64 + d) % n as u64) as u32
                })
                .collect()
        })
        .collect();
    CostGraph::from_shortcuts(n, spec.alpha, spec.seed, &shortcuts)
}

/// Out-edges of `x` that strictly approach `z`.
pub fn forward_neighbors(
    g: &CostGraph,
    x: VertexId,
    z: VertexId,
) -> Result<Vec<(EdgeId, VertexId)>> {
    if x == z {
        return Err(Error::SameEndpoints(x));
    }
    let dx = g.distance(x, z);
    Ok(g.out_edges(x)
        .filter(|&(_, y)| g.distance(y, z) < dx)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn ring_distance_cases() {
        assert_eq!(ring_distance(v(3), v(3), 8), 0);
        assert_eq!(ring_distance(v(2), v(5), 8), 3);
        assert_eq!(ring_distance(v(5), v(2), 8), 5);
    }

    #[test]
    fn ring_metric_rejects_tiny() {
        assert!(RingMetric::new(1).is_err());
        assert!(RingMetric::new(2).is_ok());
    }

    #[test]
    fn target_distribution_normalizes() {
        let p = shortcut_target_distribution(v(0), 4, 1.0).unwrap();
        assert_eq!(p[0], 0.0);
        assert!((p[2] - 3.0 / 11.0).abs() < 1e-12);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let uniform = shortcut_target_distribution(v(1), 4, 0.0).unwrap();
        for y in [0usize, 2, 3] {
            assert!((uniform[y] - 1.0 / 3.0).abs() < 1e-12);
        }

        let forced = shortcut_target_distribution(v(0), 2, 3.5).unwrap();
        assert_eq!(forced, vec![0.0, 1.0]);

        assert!(shortcut_target_distribution(v(0), 1, 1.0).is_err());
    }

    #[test]
    fn constant_law_degrees() {
        let g = generate_graph(&GraphSpec {
            n: 8,
            alpha: 1.0,
            shortcuts: ShortcutLaw::Constant(3),
            seed: 11,
        })
        .unwrap();
        for x in g.vertices() {
            assert_eq!(g.out_degree(x), 4);
            assert_eq!(g.out_edges(x).next().unwrap().1, VertexId((x.0 + 1) % 8));
            assert!(g.shortcuts(x).all(|y| y != x));
        }
        assert_eq!(g.edge_count(), 32);
    }

    #[test]
    fn small_world_shape() {
        let g = generate_graph(&GraphSpec::small_world(1024, 5)).unwrap();
        assert!(g.vertices().all(|x| g.shortcut_count(x) == 10));
    }

    #[test]
    fn two_type_quota_is_exact() {
        let g = generate_graph(&GraphSpec {
            n: 1000,
            alpha: 1.0,
            shortcuts: ShortcutLaw::TwoType {
                count_a: 55,
                fraction_a: 0.1,
                count_b: 5,
            },
            seed: 3,
        })
        .unwrap();
        let heavy = g.vertices().filter(|&x| g.out_degree(x) == 56).count();
        let light = g.vertices().filter(|&x| g.out_degree(x) == 6).count();
        assert_eq!(heavy, 100);
        assert_eq!(light, 900);
    }

    #[test]
    fn power_law_counts_are_capped_and_positive() {
        let spec = GraphSpec {
            n: 64,
            alpha: 1.0,
            shortcuts: ShortcutLaw::PowerLaw { tail: 2.0 },
            seed: 9,
        };
        let counts = shortcut_counts(&spec);
        assert!(counts.iter().all(|&c| (1..=63).contains(&c)));
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = GraphSpec::small_world(16, 0);
        spec.alpha = -1.0;
        assert!(generate_graph(&spec).is_err());
        spec.alpha = 1.0;
        spec.shortcuts = ShortcutLaw::TwoType {
            count_a: 1,
            fraction_a: 1.0,
            count_b: 1,
        };
        assert!(generate_graph(&spec).is_err());
        spec.shortcuts = ShortcutLaw::PowerLaw { tail: 1.0 };
        assert!(generate_graph(&spec).is_err());
        spec.shortcuts = ShortcutLaw::Constant(1);
        spec.n = 1;
        assert!(generate_graph(&spec).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GraphSpec::small_world(256, 42);
        assert_eq!(
            generate_graph(&spec).unwrap(),
            generate_graph(&spec).unwrap()
        );
        let other = GraphSpec::small_world(256, 43);
        assert_ne!(
            generate_graph(&spec).unwrap(),
            generate_graph(&other).unwrap()
        );
    }

    #[test]
    fn forward_neighbor_cases() {
        let ring = CostGraph::ring(8).unwrap();
        let fwd = forward_neighbors(&ring, v(0), v(4)).unwrap();
        assert_eq!(fwd.iter().map(|p| p.1).collect::<Vec<_>>(), vec![v(1)]);

        let mut sc = vec![Vec::new(); 8];
        sc[0] = vec![2, 6];
        sc[3] = vec![4];
        let g = CostGraph::from_shortcuts(8, 1.0, 0, &sc).unwrap();
        let fwd: Vec<_> = forward_neighbors(&g, v(0), v(4))
            .unwrap()
            .into_iter()
            .map(|p| p.1)
            .collect();
        assert_eq!(fwd, vec![v(1), v(2)]);

        let fwd = forward_neighbors(&g, v(3), v(4)).unwrap();
        assert_eq!(fwd.len(), 2);
        assert!(fwd.iter().all(|&(_, y)| y == v(4)));

        assert!(matches!(
            forward_neighbors(&g, v(2), v(2)),
            Err(Error::SameEndpoints(_))
        ));
    }

    #[test]
    fn law_parse_round_trip() {
        for law in [
            ShortcutLaw::Constant(7),
            ShortcutLaw::TwoType {
                count_a: 55,
                fraction_a: 0.1,
                count_b: 5,
            },
            ShortcutLaw::PowerLaw { tail: 2.0 },
        ] {
            assert_eq!(law.to_string().parse::<ShortcutLaw>().unwrap(), law);
        }
        assert!("constant".parse::<ShortcutLaw>().is_err());
        assert!("two-type:1,2".parse::<ShortcutLaw>().is_err());
        assert!("zipf:2".parse::<ShortcutLaw>().is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = generate_graph(&GraphSpec {
            n: 50,
            alpha: 0.75,
            shortcuts: ShortcutLaw::PowerLaw { tail: 2.0 },
            seed: 1234,
        })
        .unwrap();
        let text = g.to_text();
        assert!(text.starts_with("50 0.75 1234\n"));
        let back = CostGraph::read_text(text.as_bytes()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_parse_errors() {
        assert!(CostGraph::read_text("".as_bytes()).is_err());
        assert!(CostGraph::read_text("3 1 0\n0: 1\n1: 2\n".as_bytes()).is_err());
        assert!(CostGraph::read_text("3 1 0\n0: 2\n1: 2\n2: 0\n".as_bytes()).is_err());
        assert!(CostGraph::read_text("3 1 0\n0: 1 0\n1: 2\n2: 0\n".as_bytes()).is_err());
        assert!(CostGraph::read_text("3 1 0\n0: 1 2\n1: 2\n2: 0\n".as_bytes()).is_ok());
    }
}
