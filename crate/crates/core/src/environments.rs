//! Loss and observation-graph processes driven round by round by the harness.
//!
//! Rounds are 1-indexed. At round `t` a process receives the learner's past
//! actions `I_1..I_{t-1}` and nothing else. Random processes own a
//! `ChaCha8Rng`, so a given seed yields the same sequence on every platform.

use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::EnvError;
use crate::graphs::{parse_graph_sequence, DirectedGraph};

pub type AdaptiveLossFn = Box<dyn FnMut(usize, &[usize]) -> Vec<f64> + Send>;
pub type AdaptiveGraphFn = Box<dyn FnMut(usize, &[usize]) -> DirectedGraph + Send>;

pub enum LossProcess {
    /// Independent Bernoulli losses with the given means.
    Bernoulli { means: Vec<f64>, rng: ChaCha8Rng },
    /// Row `t-1` of the table at round `t`.
    Scripted { table: Vec<Vec<f64>> },
    /// Nonoblivious: losses are a function of the round and past actions.
    Adaptive { num_actions: usize, f: AdaptiveLossFn },
}

fn check_history(t: usize, history: &[usize]) -> Result<(), EnvError> {
    if t == 0 || history.len() != t - 1 {
        return Err(EnvError::HistoryLength { round: t.max(1), got: history.len() });
    }
    Ok(())
}

fn check_losses(round: usize, width: usize, losses: &[f64]) -> Result<(), EnvError> {
    if losses.len() != width {
        return Err(EnvError::WrongWidth { round, expected: width, got: losses.len() });
    }
    if let Some((action, &loss)) = losses.iter().enumerate().find(|(_, l)| !(0.0..=1.0).contains(*l)) {
        return Err(EnvError::LossOutOfRange { round, action, loss });
    }
    Ok(())
}

impl LossProcess {
    pub fn bernoulli(means: Vec<f64>, seed: u64) -> Result<Self, EnvError> {
        if let Some(&m) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(EnvError::InvalidMean(m));
        }
        Ok(Self::Bernoulli { means, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn scripted(table: Vec<Vec<f64>>) -> Result<Self, EnvError> {
        if let Some(first) = table.first() {
            let width = first.len();
            for (row, losses) in table.iter().enumerate() {
                check_losses(row + 1, width, losses)?;
            }
        }
        Ok(Self::Scripted { table })
    }

    /// Scripted process from rewards `g ∈ [0, 1]`, converted to losses `1 - g`.
    pub fn from_rewards(rewards: Vec<Vec<f64>>) -> Result<Self, EnvError> {
        for (row, gains) in rewards.iter().enumerate() {
            if let Some((action, &loss)) = gains.iter().enumerate().find(|(_, g)| !(0.0..=1.0).contains(*g)) {
                return Err(EnvError::LossOutOfRange { round: row + 1, action, loss });
            }
        }
        let losses = rewards
            .into_iter()
            .map(|row| row.into_iter().map(|g| 1.0 - g).collect())
            .collect();
        Self::scripted(losses)
    }

    pub fn adaptive(num_actions: usize, f: AdaptiveLossFn) -> Self {
        Self::Adaptive { num_actions, f }
    }

    /// Loss 1 on the previously played action, 0 elsewhere (all zero at round 1).
    pub fn punish_last(num_actions: usize) -> Self {
        Self::adaptive(
            num_actions,
            Box::new(move |_, history: &[usize]| {
                let mut losses = vec![0.0; num_actions];
                if let Some(&last) = history.last() {
                    losses[last] = 1.0;
                }
                losses
            }),
        )
    }

    pub fn num_actions(&self) -> usize {
        match self {
            Self::Bernoulli { means, .. } => means.len(),
            Self::Scripted { table } => table.first().map_or(0, Vec::len),
            Self::Adaptive { num_actions, .. } => *num_actions,
        }
    }

    pub fn next_losses(&mut self, t: usize, history: &[usize]) -> Result<Vec<f64>, EnvError> {
        check_history(t, history)?;
        let width = self.num_actions();
        match self {
            Self::Bernoulli { means, rng } => Ok(means
                .iter()
                .map(|&m| if rng.random::<f64>() < m { 1.0 } else { 0.0 })
                .collect()),
            Self::Scripted { table } => table
                .get(t - 1)
                .cloned()
                .ok_or(EnvError::LossTableExhausted { round: t, rows: table.len() }),
            Self::Adaptive { f, .. } => {
                let losses = f(t, history);
                check_losses(t, width, &losses)?;
                Ok(losses)
            }
        }
    }
}

/// Reads a headerless CSV loss table: one row per round, one column per action.
pub fn read_loss_table<R: Read>(reader: R) -> Result<Vec<Vec<f64>>, EnvError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut table = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(row + 1, |p| p.line() as usize);
        let values = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| EnvError::Table {
                    line,
                    msg: format!("invalid number `{field}`"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        table.push(values);
    }
    Ok(table)
}

pub enum GraphProcess {
    /// The same graph every round.
    Fixed(DirectedGraph),
    /// A fresh Erdős–Rényi draw every round.
    ErdosRenyi { num_actions: usize, r: f64, rng: ChaCha8Rng },
    /// Graph `t-1` of the list at round `t`.
    Scripted(Vec<DirectedGraph>),
    /// Nonoblivious: the graph is a function of the round and past actions.
    Adaptive { num_actions: usize, f: AdaptiveGraphFn },
}

impl GraphProcess {
    pub fn erdos_renyi(num_actions: usize, r: f64, seed: u64) -> Result<Self, EnvError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(crate::error::GraphError::InvalidDensity(r).into());
        }
        Ok(Self::ErdosRenyi { num_actions, r, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    /// Parses `---`-separated graph literals into a scripted process.
    pub fn scripted_from_text(text: &str) -> Result<Self, EnvError> {
        Ok(Self::Scripted(parse_graph_sequence(text)?))
    }

    pub fn adaptive(num_actions: usize, f: AdaptiveGraphFn) -> Self {
        Self::Adaptive { num_actions, f }
    }

    pub fn num_actions(&self) -> usize {
        match self {
            Self::Fixed(g) => g.num_nodes(),
            Self::ErdosRenyi { num_actions, .. } | Self::Adaptive { num_actions, .. } => *num_actions,
            Self::Scripted(gs) => gs.first().map_or(0, DirectedGraph::num_nodes),
        }
    }

    pub fn fixed_graph(&self) -> Option<&DirectedGraph> {
        match self {
            Self::Fixed(g) => Some(g),
            _ => None,
        }
    }

    pub fn next_graph(&mut self, t: usize, history: &[usize]) -> Result<DirectedGraph, EnvError> {
        check_history(t, history)?;
        let k = self.num_actions();
        let g = match self {
            Self::Fixed(g) => g.clone(),
            Self::ErdosRenyi { num_actions, r, rng } => DirectedGraph::erdos_renyi(*num_actions, *r, rng)?,
            Self::Scripted(gs) => gs
                .get(t - 1)
                .cloned()
                .ok_or(EnvError::GraphListExhausted { round: t, len: gs.len() })?,
            Self::Adaptive { f, .. } => f(t, history),
        };
        if g.num_nodes() != k {
            return Err(EnvError::GraphSize { round: t, expected: k, got: g.num_nodes() });
        }
        Ok(g)
    }
}
