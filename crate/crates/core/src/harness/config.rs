//! Plain-text `key = value` experiment configuration.
//!
//! ```text
//! # round-by-round convergence at one size
//! experiment = by-round
//! sizes = 2^14
//! cost = exp:1
//! seed = 7
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::costs::CostModel;
use crate::error::{Error, Result};
use crate::topology::{log2_rounded, ShortcutLaw};
use crate::weights::DegreeConditioning;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Baseline,
    BySize,
    ByRound,
    TwoDegree,
    Decentralized,
    General,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Baseline,
        ExperimentKind::BySize,
        ExperimentKind::ByRound,
        ExperimentKind::TwoDegree,
        ExperimentKind::Decentralized,
        ExperimentKind::General,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Baseline => "baseline",
            ExperimentKind::BySize => "by-size",
            ExperimentKind::ByRound => "by-round",
            ExperimentKind::TwoDegree => "two-degree",
            ExperimentKind::Decentralized => "decentralized",
            ExperimentKind::General => "general",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Unknown {
                kind: "experiment",
                name: s.to_string(),
            })
    }
}

/// Shortcut law for every size: `log2` means `round(log2 n)` shortcuts per vertex.
#[derive(Clone, Debug, PartialEq)]
pub enum DegreeSpec {
    Log2,
    Law(ShortcutLaw),
}

impl DegreeSpec {
    pub fn law_for(&self, n: u32) -> ShortcutLaw {
        match self {
            DegreeSpec::Log2 => ShortcutLaw::Constant(log2_rounded(n)),
            DegreeSpec::Law(law) => law.clone(),
        }
    }

    /// Degree-conditioned weights whenever the out-degree varies.
    pub fn conditioning(&self) -> DegreeConditioning {
        match self {
            DegreeSpec::Log2 | DegreeSpec::Law(ShortcutLaw::Constant(_)) => {
                DegreeConditioning::None
            }
            DegreeSpec::Law(_) => DegreeConditioning::Log2Shortcuts,
        }
    }
}

impl fmt::Display for DegreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeSpec::Log2 => f.write_str("log2"),
            DegreeSpec::Law(law) => law.fmt(f),
        }
    }
}

impl FromStr for DegreeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "log2" {
            Ok(DegreeSpec::Log2)
        } else {
            Ok(DegreeSpec::Law(s.parse()?))
        }
    }
}

/// Comma-separated sizes; entries are integers, `2^k`, or `2^a..2^b`
/// (every power in between).
pub fn parse_sizes(s: &str) -> Result<Vec<u32>> {
    let bad = |item: &str| Error::Config(format!("bad size `{item}`"));
    let power = |item: &str| -> Result<u32> {
        let item = item.trim();
        match item.strip_prefix("2^") {
            Some(k) => {
                let k: u32 = k.parse().map_err(|_| bad(item))?;
                1u32.checked_shl(k)
                    .filter(|_| k < 31)
                    .ok_or_else(|| bad(item))
            }
            None => item.parse().map_err(|_| bad(item)),
        }
    };
    let mut out = Vec::new();
    for item in s.split(',').filter(|i| !i.trim().is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (power(a)?, power(b)?);
                if !a.is_power_of_two() || !b.is_power_of_two() || a > b {
                    return Err(bad(item));
                }
                let mut n = a;
                while n <= b {
                    out.push(n);
                    n *= 2;
                }
            }
            None => out.push(power(item)?),
        }
    }
    if out.is_empty() {
        return Err(Error::Config("empty size list".into()));
    }
    Ok(out)
}

fn format_sizes(sizes: &[u32]) -> String {
    sizes
        .iter()
        .map(|&n| {
            if n.is_power_of_two() {
                format!("2^{}", n.trailing_zeros())
            } else {
                n.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub sizes: Vec<u32>,
    pub cost: CostModel,
    pub degree: DegreeSpec,
    /// Estimation rounds; for the decentralized runs, rounds of the query stream.
    pub rounds: usize,
    /// Queries per round, as a multiple of `n`.
    pub queries_multiplier: usize,
    /// FIFO buffer length of the decentralized estimator.
    pub m: usize,
    /// Positions per zone of the compressed weight vector.
    pub k_z: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Independent graph realizations per size, pooled in the results.
    pub graph_seeds: usize,
    /// Held-out evaluation queries, as a multiple of `n`.
    pub eval_multiplier: usize,
    /// Estimation rounds of the centralized baseline in decentralized runs.
    pub central_rounds: usize,
}

impl ExperimentConfig {
    pub fn preset(experiment: ExperimentKind, seed: u64) -> Self {
        let exp1 = CostModel::Exponential { rate: 1.0 };
        let pow2 = |ks: &[u32]| ks.iter().map(|&k| 1u32 << k).collect::<Vec<_>>();
        let mut cfg = Self {
            experiment,
            sizes: pow2(&[10, 12, 14, 16]),
            cost: exp1.clone(),
            degree: DegreeSpec::Log2,
            rounds: 10,
            queries_multiplier: 20,
            m: crate::decentralized::DEFAULT_BUFFER,
            k_z: 1,
            seed,
            out: PathBuf::from("out"),
            graph_seeds: 1,
            eval_multiplier: 10,
            central_rounds: 10,
        };
        match experiment {
            ExperimentKind::Baseline => cfg.cost = CostModel::Constant(1.0),
            ExperimentKind::BySize => {}
            ExperimentKind::ByRound => cfg.sizes = pow2(&[14]),
            ExperimentKind::TwoDegree => {
                cfg.sizes = pow2(&[10, 12, 14]);
                cfg.cost = CostModel::Constant(1.0);
                cfg.degree = DegreeSpec::Law(ShortcutLaw::TwoType {
                    count_a: 55,
                    fraction_a: 0.1,
                    count_b: 5,
                });
                cfg.graph_seeds = 4;
            }
            ExperimentKind::Decentralized => {
                cfg.sizes = pow2(&[10, 12, 14]);
                cfg.rounds = 20;
            }
            ExperimentKind::General => {
                cfg.sizes = pow2(&[10, 12]);
                cfg.degree = DegreeSpec::Law(ShortcutLaw::PowerLaw { tail: 2.0 });
                cfg.rounds = 20;
            }
        }
        cfg
    }

    /// Reads a config file. `experiment` and `seed` may come from the
    /// caller instead of the file; one of the two must name each. Later
    /// sources win: preset, file, caller.
    pub fn from_text(
        text: &str,
        experiment: Option<ExperimentKind>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        let lookup = |key: &str| {
            pairs
                .iter()
                .rev()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
        };
        let kind = match (experiment, lookup("experiment")) {
            (Some(k), _) => k,
            (None, Some(name)) => name.parse()?,
            (None, None) => return Err(Error::Config("no experiment named".into())),
        };
        let file_seed = lookup("seed")
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| Error::Config(format!("bad seed `{s}`")))
            })
            .transpose()?;
        let seed = seed
            .or(file_seed)
            .ok_or_else(|| Error::Config("a seed is required".into()))?;
        let mut cfg = Self::preset(kind, seed);
        for (key, value) in &pairs {
            if key != "experiment" && key != "seed" {
                cfg.set(key, value)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<usize> {
            v.parse()
                .map_err(|_| Error::Config(format!("`{key}` needs a count, got `{v}`")))
        };
        match key {
            "experiment" => self.experiment = value.parse()?,
            "sizes" => self.sizes = parse_sizes(value)?,
            "cost" => self.cost = value.parse()?,
            "degree" => self.degree = value.parse()?,
            "rounds" => self.rounds = num(value)?,
            "queries_multiplier" => self.queries_multiplier = num(value)?,
            "m" => self.m = num(value)?,
            "k_z" => self.k_z = num(value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::Config(format!("bad seed `{value}`")))?
            }
            "out" => self.out = PathBuf::from(value),
            "graph_seeds" => self.graph_seeds = num(value)?,
            "eval_multiplier" => self.eval_multiplier = num(value)?,
            "central_rounds" => self.central_rounds = num(value)?,
            _ => {
                return Err(Error::Unknown {
                    kind: "config key",
                    name: key.to_string(),
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.cost.validate()?;
        if self.sizes.iter().any(|&n| n < 4) {
            return Err(Error::Config("sizes must be >= 4".into()));
        }
        let counts = [
            ("rounds", self.rounds),
            ("queries_multiplier", self.queries_multiplier),
            ("m", self.m),
            ("k_z", self.k_z),
            ("graph_seeds", self.graph_seeds),
            ("eval_multiplier", self.eval_multiplier),
            ("central_rounds", self.central_rounds),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("`{name}` must be >= 1")));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        format!(
            "experiment = {}\nsizes = {}\ncost = {}\ndegree = {}\nrounds = {}\nqueries_multiplier = {}\nm = {}\nk_z = {}\nseed = {}\nout = {}\ngraph_seeds = {}\neval_multiplier = {}\ncentral_rounds = {}\n",
            self.experiment,
            format_sizes(&self.sizes),
            self.cost,
            self.degree,
            self.rounds,
            self.queries_multiplier,
            self.m,
            self.k_z,
            self.seed,
            self.out.display(),
            self.graph_seeds,
            self.eval_multiplier,
            self.central_rounds,
        )
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected `key = value`, got `{raw}`"),
        })?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("2^10,4096").unwrap(), vec![1024, 4096]);
        assert_eq!(
            parse_sizes("2^10..2^13").unwrap(),
            vec![1024, 2048, 4096, 8192]
        );
        assert!(parse_sizes("2^40").is_err());
        assert!(parse_sizes("100..2^10").is_err());
        assert!(parse_sizes("").is_err());
        assert_eq!(format_sizes(&[1024, 1000]), "2^10,1000");
    }

    #[test]
    fn file_overrides_preset() {
        let text = "# comment\nexperiment = two-degree\nsizes = 2^8 # inline\nrounds=3\nseed = 5\n";
        let cfg = ExperimentConfig::from_text(text, None, None).unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::TwoDegree);
        assert_eq!(cfg.sizes, vec![256]);
        assert_eq!(cfg.rounds, 3);
        assert_eq!(cfg.graph_seeds, 4);
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.degree.conditioning(), DegreeConditioning::Log2Shortcuts);
        let cli =
            ExperimentConfig::from_text(text, Some(ExperimentKind::Baseline), Some(9)).unwrap();
        assert_eq!(cli.experiment, ExperimentKind::Baseline);
        assert_eq!(cli.seed, 9);
    }

    #[test]
    fn seed_is_mandatory() {
        assert!(matches!(
            ExperimentConfig::from_text("experiment = baseline\n", None, None),
            Err(Error::Config(_))
        ));
        assert!(ExperimentConfig::from_text("", Some(ExperimentKind::Baseline), None).is_err());
        assert!(ExperimentConfig::from_text("", Some(ExperimentKind::Baseline), Some(1)).is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        let base = "experiment = baseline\nseed = 1\n";
        for extra in [
            "colour = red",
            "rounds = 0",
            "cost = gamma:2",
            "degree = zipf:3",
            "just words",
            "m = -1",
        ] {
            assert!(
                ExperimentConfig::from_text(&format!("{base}{extra}\n"), None, None).is_err(),
                "{extra}"
            );
        }
    }

    #[test]
    fn text_round_trip() {
        for kind in ExperimentKind::ALL {
            let cfg = ExperimentConfig::preset(kind, 42);
            let back = ExperimentConfig::from_text(&cfg.to_text(), None, None).unwrap();
            assert_eq!(back, cfg);
        }
    }
}
