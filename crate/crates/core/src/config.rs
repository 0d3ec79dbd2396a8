//! Declarative experiment description (TOML) and its validated, resolved form.
//!
//! ```toml
//! k = 10
//! horizon = 10000
//! repetitions = 50
//! seed = 7
//!
//! [policy]
//! kind = "exp3set"
//! tune = "symmetric"      # or: eta = 0.05
//!
//! [losses]
//! kind = "gap"
//! base = 0.4
//! gap = 0.1
//!
//! [graph]
//! kind = "disjoint-cliques"
//! sizes = [4, 3, 3]
//!
//! [output]
//! csv = "results.csv"
//! json = "results.json"
//! ```
//!
//! Node indices in configs and graph files are 1-based.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::environments::{read_loss_table, GraphProcess, LossProcess};
use crate::error::{ConfigError, HarnessError};
use crate::graphs::{parse_graph_sequence, DirectedGraph, MAS_EXACT_CAP};
use crate::harness::{EpisodeSetup, Policy, Setting};
use crate::policies::{
    bucket_of, er_observation_factor, tune_eta_er, tune_eta_mas, tune_eta_symmetric, Exp3Dom, Exp3Set,
    GammaSchedule,
};
use crate::seeds::EpisodeSeeds;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub k: usize,
    pub horizon: usize,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to informed for Exp3-DOM and uninformed for Exp3-SET.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<Setting>,
    pub policy: PolicySpec,
    pub losses: LossSpec,
    pub graph: GraphSpec,
    #[serde(default, skip_serializing)]
    pub output: OutputSpec,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TuneRule {
    /// `Σ α_t` over a symmetric graph sequence.
    Symmetric,
    /// Erdős–Rényi density rule.
    Er,
    /// `Σ mas_t` over a directed graph sequence.
    Mas,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PolicySpec {
    Exp3set {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tune: Option<TuneRule>,
    },
    Exp3dom {
        /// Fixed per-bucket rates; omitted means the doubling trick.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gammas: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LossSpec {
    Bernoulli {
        means: Vec<f64>,
    },
    /// Bernoulli means `base` for arm `best` (1-based) and `base + gap` elsewhere.
    Gap {
        base: f64,
        gap: f64,
        #[serde(default = "one")]
        best: usize,
    },
    Table {
        rows: Vec<Vec<f64>>,
        #[serde(default)]
        rewards: bool,
    },
    Csv {
        path: PathBuf,
        #[serde(default)]
        rewards: bool,
    },
    PunishLast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Clique,
    Empty,
    TotalOrder,
    Star {
        #[serde(default = "one")]
        center: usize,
    },
    /// Either explicit `sizes` or `count` cliques of near-equal size.
    DisjointCliques {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sizes: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
    },
    ErdosRenyi {
        r: f64,
    },
    /// One graph literal used every round.
    File {
        path: PathBuf,
    },
    /// `---`-separated graph literals, one per round.
    Scripted {
        path: PathBuf,
    },
    Literal {
        text: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

/// The graph sequence an experiment will see, loaded once.
#[derive(Debug, Clone, PartialEq)]
pub enum ResolvedGraphs {
    Fixed(DirectedGraph),
    ErdosRenyi(f64),
    Scripted(Vec<DirectedGraph>),
}

/// A validated configuration with its files loaded and learning rate resolved.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub digest: String,
    pub graphs: ResolvedGraphs,
    loss_table: Option<Vec<Vec<f64>>>,
    /// Resolved Exp3-SET rate (None for Exp3-DOM).
    pub eta: Option<f64>,
    /// Directory relative paths in the config resolve against.
    pub base_dir: PathBuf,
}

/// Line of `key = ...` inside `[section]` (or the top level for `None`), if present.
fn line_of(source: &str, section: Option<&str>, key: &str) -> Option<usize> {
    let mut current: Option<String> = None;
    let mut header_line = None;
    for (n, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(name.trim().to_string());
            if Some(name.trim()) == section {
                header_line = Some(n + 1);
            }
            continue;
        }
        if current.as_deref() == section {
            if let Some(rest) = line.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(n + 1);
                }
            }
        }
    }
    header_line
}

struct Validator<'a> {
    source: &'a str,
}

impl Validator<'_> {
    fn err(&self, section: Option<&str>, key: &str, msg: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            line: line_of(self.source, section, key).unwrap_or(1),
            msg: msg.into(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn effective_setting(&self) -> Setting {
        self.setting.unwrap_or(match self.policy {
            PolicySpec::Exp3dom { .. } => Setting::Informed,
            PolicySpec::Exp3set { .. } => Setting::Uninformed,
        })
    }
}

impl Experiment {
    /// Reads, parses and validates a config file; relative paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let config = ExperimentConfig::from_toml(&text)?;
        Self::from_config(config, &text, base)
    }

    /// Validates a parsed config. `source` anchors error messages to lines.
    pub fn from_config(mut config: ExperimentConfig, source: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let v = Validator { source };
        let k = config.k;
        if k == 0 {
            return Err(v.err(None, "k", "k must be positive"));
        }
        if config.horizon == 0 {
            return Err(v.err(None, "horizon", "horizon must be positive"));
        }
        if config.repetitions == 0 {
            return Err(v.err(None, "repetitions", "repetitions must be positive"));
        }
        if matches!(config.policy, PolicySpec::Exp3dom { .. }) && config.setting == Some(Setting::Uninformed) {
            return Err(v.err(
                None,
                "setting",
                "exp3dom requires the informed setting (the graph must be disclosed before play)",
            ));
        }
        let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base_dir.join(p) };
        let mut file_bytes: Vec<u8> = Vec::new();

        // graphs
        let graphs = match &config.graph {
            GraphSpec::Clique => ResolvedGraphs::Fixed(DirectedGraph::complete(k)),
            GraphSpec::Empty => ResolvedGraphs::Fixed(DirectedGraph::empty(k)),
            GraphSpec::TotalOrder => ResolvedGraphs::Fixed(DirectedGraph::total_order(k)),
            GraphSpec::Star { center } => {
                if *center == 0 || *center > k {
                    return Err(v.err(Some("graph"), "center", format!("star center {center} outside 1..={k}")));
                }
                ResolvedGraphs::Fixed(DirectedGraph::star(k, center - 1).expect("center checked"))
            }
            GraphSpec::DisjointCliques { sizes, count } => {
                let sizes = match (sizes, count) {
                    (Some(s), None) => s.clone(),
                    (None, Some(c)) if *c >= 1 && *c <= k => {
                        (0..*c).map(|i| k / c + usize::from(i < k % c)).collect()
                    }
                    _ => {
                        return Err(v.err(
                            Some("graph"),
                            "kind",
                            format!("disjoint-cliques needs exactly one of `sizes` or `count` (1..={k})"),
                        ))
                    }
                };
                if sizes.iter().sum::<usize>() != k || sizes.contains(&0) {
                    return Err(v.err(Some("graph"), "sizes", format!("clique sizes {sizes:?} must be positive and sum to k={k}")));
                }
                ResolvedGraphs::Fixed(DirectedGraph::disjoint_cliques(&sizes))
            }
            GraphSpec::ErdosRenyi { r } => {
                if !(0.0..=1.0).contains(r) {
                    return Err(v.err(Some("graph"), "r", format!("density {r} outside [0, 1]")));
                }
                ResolvedGraphs::ErdosRenyi(*r)
            }
            GraphSpec::File { path } | GraphSpec::Scripted { path } => {
                let full = resolve(path);
                let text = fs::read_to_string(&full)
                    .map_err(|e| v.err(Some("graph"), "path", format!("{}: {e}", full.display())))?;
                file_bytes.extend_from_slice(text.as_bytes());
                let gs = parse_graph_sequence(&text)
                    .map_err(|e| v.err(Some("graph"), "path", format!("{}: {e}", full.display())))?;
                match &config.graph {
                    GraphSpec::File { .. } => {
                        if gs.len() != 1 {
                            return Err(v.err(Some("graph"), "path", format!("expected one graph, found {}", gs.len())));
                        }
                        ResolvedGraphs::Fixed(gs.into_iter().next().expect("one graph"))
                    }
                    _ => {
                        if gs.len() < config.horizon {
                            return Err(v.err(
                                Some("graph"),
                                "path",
                                format!("{} graphs scripted for a horizon of {}", gs.len(), config.horizon),
                            ));
                        }
                        ResolvedGraphs::Scripted(gs)
                    }
                }
            }
            GraphSpec::Literal { text } => ResolvedGraphs::Fixed(
                DirectedGraph::parse_literal(text).map_err(|e| v.err(Some("graph"), "text", e.to_string()))?,
            ),
        };
        let sizes_ok = match &graphs {
            ResolvedGraphs::Fixed(g) => g.num_nodes() == k,
            ResolvedGraphs::Scripted(gs) => gs.iter().all(|g| g.num_nodes() == k),
            ResolvedGraphs::ErdosRenyi(_) => true,
        };
        if !sizes_ok {
            return Err(v.err(Some("graph"), "kind", format!("graph node count differs from k={k}")));
        }

        // losses
        let loss_table = match &config.losses {
            LossSpec::Bernoulli { means } => {
                if means.len() != k {
                    return Err(v.err(Some("losses"), "means", format!("{} means for k={k}", means.len())));
                }
                if means.iter().any(|m| !(0.0..=1.0).contains(m)) {
                    return Err(v.err(Some("losses"), "means", "means must lie in [0, 1]"));
                }
                None
            }
            LossSpec::Gap { base, gap, best } => {
                if !(0.0..=1.0).contains(base) || !(0.0..=1.0).contains(&(base + gap)) {
                    return Err(v.err(Some("losses"), "gap", "base and base + gap must lie in [0, 1]"));
                }
                if *best == 0 || *best > k {
                    return Err(v.err(Some("losses"), "best", format!("best arm {best} outside 1..={k}")));
                }
                None
            }
            LossSpec::Table { rows, rewards } => Some(check_table(&v, rows.clone(), *rewards, k, config.horizon)?),
            LossSpec::Csv { path, rewards } => {
                let full = resolve(path);
                let bytes = fs::read(&full).map_err(|e| v.err(Some("losses"), "path", format!("{}: {e}", full.display())))?;
                file_bytes.extend_from_slice(&bytes);
                let table = read_loss_table(bytes.as_slice())
                    .map_err(|e| v.err(Some("losses"), "path", format!("{}: {e}", full.display())))?;
                Some(check_table(&v, table, *rewards, k, config.horizon)?)
            }
            LossSpec::PunishLast => None,
        };

        // policy
        let eta = match &config.policy {
            PolicySpec::Exp3set { eta, tune } => Some(match (eta, tune) {
                (Some(e), None) => {
                    if !(0.0..=1.0).contains(e) {
                        return Err(v.err(Some("policy"), "eta", format!("eta {e} outside [0, 1]")));
                    }
                    *e
                }
                (None, Some(rule)) => tune_for(&v, *rule, &graphs, k, config.horizon)?,
                _ => return Err(v.err(Some("policy"), "kind", "exp3set needs exactly one of `eta` or `tune`")),
            }),
            PolicySpec::Exp3dom { gammas } => {
                if let Some(gs) = gammas {
                    let expected = bucket_of(k) + 1;
                    if gs.len() != expected {
                        return Err(v.err(Some("policy"), "gammas", format!("expected {expected} gammas (one per bucket), got {}", gs.len())));
                    }
                    if gs.iter().any(|g| !(*g > 0.0 && *g <= 1.0)) {
                        return Err(v.err(Some("policy"), "gammas", "gammas must lie in (0, 1]"));
                    }
                }
                None
            }
        };

        config.setting = Some(config.effective_setting());
        let digest = digest_of(&config, &file_bytes);
        Ok(Self { config, digest, graphs, loss_table, eta, base_dir: base_dir.to_path_buf() })
    }

    pub fn setting(&self) -> Setting {
        self.config.effective_setting()
    }

    /// Fresh policy and processes for one repetition.
    pub fn episode_setup(&self, seeds: EpisodeSeeds) -> Result<EpisodeSetup, HarnessError> {
        let k = self.config.k;
        let policy = match &self.config.policy {
            PolicySpec::Exp3set { .. } => Policy::Exp3Set(Exp3Set::new(k, self.eta.expect("resolved"))?),
            PolicySpec::Exp3dom { gammas } => {
                let schedule = gammas.clone().map_or(GammaSchedule::Doubling, GammaSchedule::Fixed);
                Policy::Exp3Dom(Exp3Dom::new(k, schedule)?)
            }
        };
        let losses = match (&self.config.losses, &self.loss_table) {
            (LossSpec::Bernoulli { means }, _) => LossProcess::bernoulli(means.clone(), seeds.loss)?,
            (LossSpec::Gap { base, gap, best }, _) => {
                let means = (0..k).map(|i| if i + 1 == *best { *base } else { base + gap }).collect();
                LossProcess::bernoulli(means, seeds.loss)?
            }
            (LossSpec::PunishLast, _) => LossProcess::punish_last(k),
            (_, Some(table)) => LossProcess::scripted(table.clone())?,
            (_, None) => unreachable!("tables are loaded at validation"),
        };
        let graphs = match &self.graphs {
            ResolvedGraphs::Fixed(g) => GraphProcess::Fixed(g.clone()),
            ResolvedGraphs::ErdosRenyi(r) => GraphProcess::erdos_renyi(k, *r, seeds.graph)?,
            ResolvedGraphs::Scripted(gs) => GraphProcess::Scripted(gs.clone()),
        };
        Ok(EpisodeSetup { policy, losses, graphs })
    }

    /// Per-round complexity charged by the applicable regret bound: α or mas
    /// for Exp3-SET on fixed or scripted graphs, the Erdős–Rényi factor on
    /// random graphs, and α for Exp3-DOM.
    pub fn bound_complexities(&self) -> Result<Vec<f64>, HarnessError> {
        let k = self.config.k;
        let horizon = self.config.horizon;
        let dom = matches!(self.config.policy, PolicySpec::Exp3dom { .. });
        let charge = |g: &DirectedGraph| graph_complexity(g, dom);
        match &self.graphs {
            ResolvedGraphs::Fixed(g) => Ok(vec![charge(g)?; horizon]),
            ResolvedGraphs::ErdosRenyi(_) if dom => Err(HarnessError::UnsupportedBound(
                "exp3dom on erdos-renyi graphs has no closed-form complexity".into(),
            )),
            ResolvedGraphs::ErdosRenyi(r) => Ok(vec![er_observation_factor(k, *r); horizon]),
            ResolvedGraphs::Scripted(gs) => gs.iter().take(horizon).map(charge).collect(),
        }
    }

    /// Copy of the config with one parameter replaced, revalidated.
    pub fn with_axis(&self, axis: SweepAxis, value: f64) -> Result<Self, ConfigError> {
        let mut c = self.config.clone();
        let bad = |msg: String| ConfigError::Invalid { line: 1, msg };
        match axis {
            SweepAxis::Eta => match &mut c.policy {
                PolicySpec::Exp3set { eta, tune } => {
                    *eta = Some(value);
                    *tune = None;
                }
                _ => return Err(bad("sweeping eta needs an exp3set policy".into())),
            },
            SweepAxis::R => match &mut c.graph {
                GraphSpec::ErdosRenyi { r } => *r = value,
                _ => return Err(bad("sweeping r needs an erdos-renyi graph".into())),
            },
            SweepAxis::T => c.horizon = as_count(value).ok_or_else(|| bad(format!("T={value} is not a positive integer")))?,
            SweepAxis::K => {
                let k = as_count(value).ok_or_else(|| bad(format!("K={value} is not a positive integer")))?;
                c.k = k;
                if !matches!(c.losses, LossSpec::Gap { .. } | LossSpec::PunishLast) {
                    return Err(bad("sweeping K needs `gap` or `punish-last` losses".into()));
                }
                match &mut c.graph {
                    GraphSpec::DisjointCliques { sizes, count } => {
                        if sizes.is_some() || count.is_none() {
                            return Err(bad("sweeping K needs disjoint-cliques given by `count`".into()));
                        }
                    }
                    GraphSpec::File { .. } | GraphSpec::Scripted { .. } | GraphSpec::Literal { .. } => {
                        return Err(bad("sweeping K needs a graph kind parameterized by k".into()))
                    }
                    _ => {}
                }
                if let PolicySpec::Exp3dom { gammas: Some(_) } = c.policy {
                    return Err(bad("sweeping K needs exp3dom with the doubling schedule".into()));
                }
            }
        }
        self.revalidate(c)
    }

    /// Copy with a different base seed.
    pub fn with_seed(&self, seed: u64) -> Result<Self, ConfigError> {
        let mut c = self.config.clone();
        c.seed = seed;
        self.revalidate(c)
    }

    fn revalidate(&self, mut config: ExperimentConfig) -> Result<Self, ConfigError> {
        config.output = self.config.output.clone();
        let text = config.to_toml();
        Self::from_config(config, &text, &self.base_dir)
    }

    pub fn eta(&self) -> Option<f64> {
        self.eta
    }
}

fn as_count(value: f64) -> Option<usize> {
    (value >= 1.0 && value.fract() == 0.0).then_some(value as usize)
}

/// Parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "eta")]
    Eta,
    #[serde(rename = "r")]
    R,
    #[serde(rename = "T")]
    T,
    #[serde(rename = "K")]
    K,
}

impl std::str::FromStr for SweepAxis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eta" => Ok(Self::Eta),
            "r" => Ok(Self::R),
            "T" => Ok(Self::T),
            "K" => Ok(Self::K),
            other => Err(format!("unknown sweep axis `{other}` (expected eta, r, T or K)")),
        }
    }
}

fn graph_complexity(g: &DirectedGraph, alpha_only: bool) -> Result<f64, HarnessError> {
    let value = if alpha_only || g.is_symmetric() {
        g.independence_number_exact()?
    } else {
        g.mas_exact()?
    };
    Ok(value as f64)
}

fn check_table(v: &Validator, rows: Vec<Vec<f64>>, rewards: bool, k: usize, horizon: usize) -> Result<Vec<Vec<f64>>, ConfigError> {
    if rows.len() < horizon {
        return Err(v.err(Some("losses"), "kind", format!("{} loss rows for a horizon of {horizon}", rows.len())));
    }
    if let Some((n, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != k) {
        return Err(v.err(Some("losses"), "kind", format!("loss row {} has {} columns, expected {k}", n + 1, row.len())));
    }
    if let Some(n) = rows.iter().position(|r| r.iter().any(|x| !(0.0..=1.0).contains(x))) {
        return Err(v.err(Some("losses"), "kind", format!("loss row {} has values outside [0, 1]", n + 1)));
    }
    Ok(if rewards {
        rows.into_iter().map(|r| r.into_iter().map(|g| 1.0 - g).collect()).collect()
    } else {
        rows
    })
}

fn tune_for(v: &Validator, rule: TuneRule, graphs: &ResolvedGraphs, k: usize, horizon: usize) -> Result<f64, ConfigError> {
    let mismatch = |what: &str| v.err(Some("policy"), "tune", format!("tune = \"{}\" {what}", rule_name(rule)));
    let eta = match (rule, graphs) {
        (TuneRule::Er, ResolvedGraphs::ErdosRenyi(r)) => tune_eta_er(k, *r, horizon),
        (TuneRule::Er, _) => return Err(mismatch("needs an erdos-renyi graph")),
        (TuneRule::Symmetric, ResolvedGraphs::Fixed(g)) if g.is_symmetric() => {
            let alpha = g.independence_number_exact().map_err(|e| mismatch(&e.to_string()))?;
            tune_eta_symmetric(k, (alpha * horizon) as f64)
        }
        (TuneRule::Symmetric, ResolvedGraphs::Scripted(gs)) if gs.iter().all(DirectedGraph::is_symmetric) => {
            let mut sum = 0usize;
            for g in gs.iter().take(horizon) {
                sum += g.independence_number_exact().map_err(|e| mismatch(&e.to_string()))?;
            }
            tune_eta_symmetric(k, sum as f64)
        }
        (TuneRule::Symmetric, _) => return Err(mismatch("needs a symmetric fixed or scripted graph")),
        (TuneRule::Mas, ResolvedGraphs::ErdosRenyi(_)) => return Err(mismatch("needs a fixed or scripted graph")),
        (TuneRule::Mas, _) if k > MAS_EXACT_CAP => {
            return Err(mismatch(&format!("needs k <= {MAS_EXACT_CAP} for exact mas")))
        }
        (TuneRule::Mas, ResolvedGraphs::Fixed(g)) => {
            let m = g.mas_exact().map_err(|e| mismatch(&e.to_string()))?;
            tune_eta_mas(k, (m * horizon) as f64)
        }
        (TuneRule::Mas, ResolvedGraphs::Scripted(gs)) => {
            let mut sum = 0usize;
            for g in gs.iter().take(horizon) {
                sum += g.mas_exact().map_err(|e| mismatch(&e.to_string()))?;
            }
            tune_eta_mas(k, sum as f64)
        }
    };
    eta.map_err(|e| mismatch(&e.to_string()))
}

fn rule_name(rule: TuneRule) -> &'static str {
    match rule {
        TuneRule::Symmetric => "symmetric",
        TuneRule::Er => "er",
        TuneRule::Mas => "mas",
    }
}

/// SHA-256 over the canonical JSON of the config (outputs excluded) followed by
/// the bytes of every file it references.
fn digest_of(config: &ExperimentConfig, file_bytes: &[u8]) -> String {
    let json = serde_json::to_vec(config).expect("config serializes");
    let mut h = Sha256::new();
    h.update(&json);
    h.update(file_bytes);
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
k = 4
horizon = 10
seed = 3

[policy]
kind = "exp3set"
eta = 0.1

[losses]
kind = "bernoulli"
means = [0.1, 0.2, 0.3, 0.4]

[graph]
kind = "clique"
"#;

    fn build(text: &str) -> Result<Experiment, ConfigError> {
        let c = ExperimentConfig::from_toml(text)?;
        Experiment::from_config(c, text, Path::new("."))
    }

    #[test]
    fn minimal_config_validates() {
        let e = build(MINIMAL).unwrap();
        assert_eq!(e.eta(), Some(0.1));
        assert_eq!(e.setting(), Setting::Uninformed);
        assert_eq!(e.digest.len(), 64);
        assert_eq!(e.graphs, ResolvedGraphs::Fixed(DirectedGraph::complete(4)));
    }

    #[test]
    fn digest_ignores_outputs_but_tracks_parameters() {
        let a = build(MINIMAL).unwrap();
        let with_out = format!("{MINIMAL}\n[output]\ncsv = \"x.csv\"\n");
        let b = build(&with_out).unwrap();
        assert_eq!(a.digest, b.digest);
        let c = build(&MINIMAL.replace("seed = 3", "seed = 4")).unwrap();
        assert_ne!(a.digest, c.digest);
    }

    #[test]
    fn dom_uninformed_is_rejected_with_line() {
        let text = r#"k = 4
horizon = 10
setting = "uninformed"

[policy]
kind = "exp3dom"

[losses]
kind = "punish-last"

[graph]
kind = "empty"
"#;
        let err = build(text).unwrap_err();
        match err {
            ConfigError::Invalid { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("informed"), "{msg}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = build("k = 4\nhorizon = \n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = build(&MINIMAL.replace("eta = 0.1", "eta = 0.1\nbogus = 1")).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn tune_rule_must_match_graph() {
        let text = MINIMAL.replace("eta = 0.1", "tune = \"er\"");
        let err = build(&text).unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { line: 8, .. }), "{err}");

        let sym = build(&MINIMAL.replace("eta = 0.1", "tune = \"symmetric\"")).unwrap();
        let expected = tune_eta_symmetric(4, 10.0).unwrap();
        assert_eq!(sym.eta(), Some(expected));

        let directed = MINIMAL
            .replace("eta = 0.1", "tune = \"symmetric\"")
            .replace("kind = \"clique\"", "kind = \"total-order\"");
        assert!(build(&directed).is_err());
        let mas = build(&directed.replace("symmetric", "mas")).unwrap();
        assert_eq!(mas.eta(), Some(tune_eta_mas(4, 40.0).unwrap()));
    }

    #[test]
    fn disjoint_cliques_by_count() {
        let text = MINIMAL
            .replace("k = 4", "k = 10")
            .replace("kind = \"clique\"", "kind = \"disjoint-cliques\"\ncount = 3")
            .replace("kind = \"bernoulli\"\nmeans = [0.1, 0.2, 0.3, 0.4]", "kind = \"gap\"\nbase = 0.4\ngap = 0.1");
        let e = build(&text).unwrap();
        assert_eq!(e.graphs, ResolvedGraphs::Fixed(DirectedGraph::disjoint_cliques(&[4, 3, 3])));
        assert_eq!(e.bound_complexities().unwrap(), vec![3.0; 10]);
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let err = build(&MINIMAL.replace("[0.1, 0.2, 0.3, 0.4]", "[0.1, 0.2]")).unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { line: 12, .. }), "{err}");
    }

    #[test]
    fn sweep_axis_rewrites() {
        let e = build(MINIMAL).unwrap();
        let swept = e.with_axis(SweepAxis::Eta, 0.3).unwrap();
        assert_eq!(swept.eta(), Some(0.3));
        let swept = e.with_axis(SweepAxis::T, 25.0).unwrap();
        assert_eq!(swept.config.horizon, 25);
        assert!(e.with_axis(SweepAxis::R, 0.5).is_err());
        assert!(e.with_axis(SweepAxis::T, 2.5).is_err());
        assert_eq!("K".parse::<SweepAxis>(), Ok(SweepAxis::K));
        assert!("x".parse::<SweepAxis>().is_err());
    }
}
