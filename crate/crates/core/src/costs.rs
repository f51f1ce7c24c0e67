//! Edge-cost models and per-query realizations.
//!
//! Costs attach to edge ids, so parallel edges are independent. A query's
//! realization is a pure function of its seed: [`QueryCosts`] evaluates any
//! edge on demand, [`CostAssignment`] materializes the full table.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::counter_uniform;
use crate::topology::{CostGraph, EdgeId};

/// Finite-support cost law. Values are sorted ascending and distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteTable {
    values: Vec<f64>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DiscreteTable {
    pub fn new(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != probs.len() {
            return Err(Error::InvalidCostModel(
                "table needs matching, non-empty values and probabilities".into(),
            ));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidCostModel(
                "table values must be finite and >= 0".into(),
            ));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidCostModel(
                "table probabilities must be >= 0".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidCostModel(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let mut pairs: Vec<(f64, f64)> = values.into_iter().zip(probs).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (v, p) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += p,
                _ => merged.push((v, p)),
            }
        }
        let (values, probs): (Vec<f64>, Vec<f64>) = merged.into_iter().unzip();
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Self {
            values,
            probs,
            cumulative,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn support_size(&self) -> usize {
        self.values.len()
    }

    fn quantile(&self, u: f64) -> f64 {
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.values[i.min(self.values.len() - 1)]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CostModel {
    Constant(f64),
    Exponential {
        rate: f64,
    },
    /// 2 with probability 1/2, otherwise 0.
    TwoPoint,
    Discrete(DiscreteTable),
}

impl CostModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            CostModel::Constant(c) if !(c.is_finite() && *c >= 0.0) => Err(
                Error::InvalidCostModel(format!("constant cost {c} must be >= 0")),
            ),
            CostModel::Exponential { rate } if !(rate.is_finite() && *rate > 0.0) => Err(
                Error::InvalidCostModel(format!("exponential rate {rate} must be > 0")),
            ),
            _ => Ok(()),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            CostModel::Constant(_) => true,
            CostModel::Discrete(t) => t.support_size() == 1,
            _ => false,
        }
    }

    /// The model as a finite table, if it has finite support.
    pub fn as_discrete(&self) -> Option<DiscreteTable> {
        match self {
            CostModel::Constant(c) => DiscreteTable::new(vec![*c], vec![1.0]).ok(),
            CostModel::TwoPoint => DiscreteTable::new(vec![0.0, 2.0], vec![0.5, 0.5]).ok(),
            CostModel::Discrete(t) => Some(t.clone()),
            CostModel::Exponential { .. } => None,
        }
    }

    /// Inverse CDF.
    #[inline]
    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            CostModel::Constant(c) => *c,
            CostModel::Exponential { rate } => -(1.0 - u).ln() / rate,
            CostModel::TwoPoint => {
                if u < 0.5 {
                    0.0
                } else {
                    2.0
                }
            }
            CostModel::Discrete(t) => t.quantile(u),
        }
    }

    pub fn expected_cost(&self) -> f64 {
        match self {
            CostModel::Constant(c) => *c,
            CostModel::Exponential { rate } => 1.0 / rate,
            CostModel::TwoPoint => 1.0,
            CostModel::Discrete(t) => t.values.iter().zip(&t.probs).map(|(v, p)| v * p).sum(),
        }
    }

    /// `E[min(C_1, ..., C_k)]` for i.i.d. draws.
    pub fn expected_min_of_k(&self, k: u32) -> f64 {
        assert!(k >= 1, "minimum of zero draws");
        match self {
            CostModel::Exponential { rate } => 1.0 / (rate * k as f64),
            _ => {
                let t = self.as_discrete().expect("finite-support model");
                // E[min] = sum_i v_i * (P(X >= v_i)^k - P(X > v_i)^k)
                let mut at_least = 1.0f64;
                let mut total = 0.0;
                for (v, p) in t.values.iter().zip(&t.probs) {
                    let above = (at_least - p).max(0.0);
                    total += v * (at_least.powi(k as i32) - above.powi(k as i32));
                    at_least = above;
                }
                total
            }
        }
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostModel::Constant(c) => write!(f, "constant:{c}"),
            CostModel::Exponential { rate } => write!(f, "exp:{rate}"),
            CostModel::TwoPoint => write!(f, "twopoint"),
            CostModel::Discrete(t) => {
                write!(f, "table:")?;
                for (i, (v, p)) in t.values.iter().zip(&t.probs).enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{v},{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for CostModel {
    type Err = Error;

    /// `constant:1`, `exp:1`, `twopoint`, `table:v1,p1;v2,p2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: String| Error::InvalidCostModel(msg);
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|e| bad(format!("`{t}`: {e}")))
        };
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a)),
            None => (s, None),
        };
        let model = match (kind, arg) {
            ("constant", Some(a)) => CostModel::Constant(num(a)?),
            ("exp", Some(a)) => CostModel::Exponential { rate: num(a)? },
            ("twopoint", None) => CostModel::TwoPoint,
            ("table", Some(a)) => {
                let mut values = Vec::new();
                let mut probs = Vec::new();
                for pair in a.split(';').filter(|p| !p.trim().is_empty()) {
                    let (v, p) = pair
                        .split_once(',')
                        .ok_or_else(|| bad(format!("table entry `{pair}` is not `value,prob`")))?;
                    values.push(num(v)?);
                    probs.push(num(p)?);
                }
                CostModel::Discrete(DiscreteTable::new(values, probs)?)
            }
            _ => return Err(bad(format!("unrecognized cost model `{s}`"))),
        };
        model.validate()?;
        Ok(model)
    }
}

/// Source of realized edge costs for one query.
pub trait EdgeCosts {
    fn cost(&self, edge: EdgeId) -> f64;
}

/// Lazily evaluated realization: cost of edge `e` is the model quantile of
/// a counter-based uniform keyed by `(seed, e)`.
#[derive(Clone, Copy, Debug)]
pub struct QueryCosts<'a> {
    model: &'a CostModel,
    seed: u64,
}

impl<'a> QueryCosts<'a> {
    pub fn new(model: &'a CostModel, seed: u64) -> Self {
        Self { model, seed }
    }
}

impl EdgeCosts for QueryCosts<'_> {
    #[inline]
    fn cost(&self, edge: EdgeId) -> f64 {
        match self.model {
            CostModel::Constant(c) => *c,
            m => m.quantile(counter_uniform(self.seed, edge.0 as u64)),
        }
    }
}

/// Fully materialized per-edge costs.
#[derive(Clone, Debug, PartialEq)]
pub struct CostAssignment(Vec<f64>);

impl CostAssignment {
    pub fn from_vec(costs: Vec<f64>) -> Self {
        Self(costs)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl EdgeCosts for CostAssignment {
    fn cost(&self, edge: EdgeId) -> f64 {
        self.0[edge.index()]
    }
}

/// One fresh i.i.d. draw per directed edge, deterministic in `query_seed`.
pub fn sample_costs(g: &CostGraph, model: &CostModel, query_seed: u64) -> CostAssignment {
    let q = QueryCosts::new(model, query_seed);
    CostAssignment(
        (0..g.edge_count() as u32)
            .map(|e| q.cost(EdgeId(e)))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{generate_graph, GraphSpec};

    #[test]
    fn constant_costs_everywhere() {
        let g = generate_graph(&GraphSpec::small_world(64, 1)).unwrap();
        let a = sample_costs(&g, &CostModel::Constant(1.0), 5);
        assert_eq!(a.len(), g.edge_count());
        assert!(a.as_slice().iter().all(|&c| c == 1.0));
    }

    #[test]
    fn exponential_mean() {
        let m = CostModel::Exponential { rate: 1.0 };
        let q = QueryCosts::new(&m, 77);
        let n = 1_000_000u32;
        let mean = (0..n).map(|e| q.cost(EdgeId(e))).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn two_point_zero_fraction() {
        let m = CostModel::TwoPoint;
        let q = QueryCosts::new(&m, 3);
        let n = 100_000u32;
        let zeros = (0..n).filter(|&e| q.cost(EdgeId(e)) == 0.0).count();
        let frac = zeros as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.01, "fraction {frac}");
        assert!((0..n).all(|e| matches!(q.cost(EdgeId(e)), c if c == 0.0 || c == 2.0)));
    }

    #[test]
    fn same_seed_same_costs() {
        let g = generate_graph(&GraphSpec::small_world(32, 1)).unwrap();
        let m = CostModel::Exponential { rate: 2.0 };
        assert_eq!(sample_costs(&g, &m, 9), sample_costs(&g, &m, 9));
        assert_ne!(sample_costs(&g, &m, 9), sample_costs(&g, &m, 10));
    }

    #[test]
    fn expected_costs() {
        assert_eq!(CostModel::Constant(1.0).expected_cost(), 1.0);
        assert_eq!(CostModel::Exponential { rate: 1.0 }.expected_cost(), 1.0);
        assert_eq!(CostModel::TwoPoint.expected_cost(), 1.0);
    }

    #[test]
    fn expected_minimum_cases() {
        assert_eq!(
            CostModel::Exponential { rate: 1.0 }.expected_min_of_k(4),
            0.25
        );
        assert_eq!(CostModel::Constant(3.0).expected_min_of_k(7), 3.0);
        // four equally likely outcomes of two draws; min is 2 only for (2, 2)
        assert!((CostModel::TwoPoint.expected_min_of_k(2) - 0.5).abs() < 1e-15);
        assert_eq!(CostModel::TwoPoint.expected_min_of_k(1), 1.0);
    }

    #[test]
    fn expected_min_of_exponentials_matches_monte_carlo() {
        let m = CostModel::Exponential { rate: 1.0 };
        let q = QueryCosts::new(&m, 1234);
        let trials = 1_000_000u32;
        let mut sum = 0.0;
        for t in 0..trials {
            let base = t * 4;
            sum += (0..4)
                .map(|j| q.cost(EdgeId(base + j)))
                .fold(f64::INFINITY, f64::min);
        }
        let mean = sum / trials as f64;
        // sd of Exp(4) is 0.25, so 3 standard errors is 0.00075
        assert!((mean - 0.25).abs() < 0.00075, "mean {mean}");
    }

    #[test]
    fn min_of_k_never_exceeds_mean() {
        let models = [
            CostModel::TwoPoint,
            CostModel::Exponential { rate: 0.5 },
            "table:1,0.2;3,0.5;10,0.3".parse().unwrap(),
        ];
        for m in &models {
            assert!((m.expected_min_of_k(1) - m.expected_cost()).abs() < 1e-12);
            for k in 2..10 {
                assert!(m.expected_min_of_k(k) <= m.expected_min_of_k(k - 1) + 1e-12);
            }
        }
    }

    #[test]
    fn parse_and_display() {
        for s in ["constant:1", "exp:1", "twopoint", "table:0,0.25;1,0.75"] {
            let m: CostModel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("exp:0".parse::<CostModel>().is_err());
        assert!("table:1,0.5".parse::<CostModel>().is_err());
        assert!("uniform:1".parse::<CostModel>().is_err());
        assert!("constant:-1".parse::<CostModel>().is_err());
    }

    #[test]
    fn discrete_quantile_follows_probabilities() {
        let m: CostModel = "table:5,0.1;1,0.6;3,0.3".parse().unwrap();
        assert_eq!(m.quantile(0.0), 1.0);
        assert_eq!(m.quantile(0.59), 1.0);
        assert_eq!(m.quantile(0.6), 3.0);
        assert_eq!(m.quantile(0.95), 5.0);
        assert!((m.expected_cost() - (0.6 + 0.9 + 0.5)).abs() < 1e-12);
    }
}
