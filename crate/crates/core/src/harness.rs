//! The protocol loop, per-round traces, realized regret and batch aggregation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::environments::{GraphProcess, LossProcess};
use crate::error::HarnessError;
use crate::graphs::{DirectedGraph, ALPHA_EXACT_CAP};
use crate::policies::{q_statistic, sample_action, Exp3Dom, Exp3Set};
use crate::seeds::EpisodeSeeds;

/// Whether the round's graph is disclosed before (informed) or after
/// (uninformed) the learner commits to an action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Informed,
    Uninformed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum Policy {
    Exp3Set(Exp3Set),
    Exp3Dom(Exp3Dom),
}

impl Policy {
    pub fn num_actions(&self) -> usize {
        match self {
            Policy::Exp3Set(p) => p.num_actions(),
            Policy::Exp3Dom(p) => p.num_actions(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: usize,
    pub action: usize,
    pub loss: f64,
    pub observed: Vec<usize>,
    pub probs: Vec<f64>,
    pub q: Vec<f64>,
    pub q_statistic: f64,
    /// `None` when not computed (graph above the exact cap).
    pub alpha: Option<usize>,
    pub dominating_set_size: Option<usize>,
    pub bucket: Option<usize>,
    pub gamma: Option<f64>,
    pub restarted: bool,
}

/// One point of an episode's regret curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: usize,
    pub regret: f64,
    pub q_statistic: f64,
    pub alpha: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub horizon: usize,
    pub policy_loss: f64,
    pub arm_losses: Vec<f64>,
    /// `L_A - min_k L_k` on realized losses.
    pub regret: f64,
    pub curve: Vec<CurvePoint>,
    pub traces: Vec<RoundRecord>,
    pub seeds: EpisodeSeeds,
    pub config_digest: Option<String>,
    /// Number of rounds each Exp3-DOM bucket was used (empty for Exp3-SET).
    pub bucket_rounds: Vec<usize>,
    pub final_policy: Policy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpisodeOptions {
    pub record_alpha: bool,
    pub keep_traces: bool,
}

impl Default for EpisodeOptions {
    fn default() -> Self {
        Self { record_alpha: true, keep_traces: true }
    }
}

/// Rounds at or below this horizon are all logged.
pub const FULL_TRACE_HORIZON: usize = 100_000;
const THINNED_POINTS: usize = 10_000;

/// Whether round `t` of a `horizon`-round episode is logged.
pub fn is_logged_round(t: usize, horizon: usize) -> bool {
    horizon <= FULL_TRACE_HORIZON || t.is_multiple_of(horizon.div_ceil(THINNED_POINTS)) || t == horizon
}

struct AlphaTracker {
    enabled: bool,
    fixed: Option<Option<usize>>,
}

impl AlphaTracker {
    fn new(enabled: bool, graphs: &GraphProcess) -> Self {
        let fixed = graphs
            .fixed_graph()
            .filter(|_| enabled)
            .map(|g| g.independence_number_exact().ok());
        Self { enabled, fixed }
    }

    fn alpha(&self, g: &DirectedGraph) -> Option<usize> {
        match self.fixed {
            Some(a) => a,
            None if self.enabled && g.num_nodes() <= ALPHA_EXACT_CAP => g.independence_number_exact().ok(),
            None => None,
        }
    }
}

/// Runs one episode of `horizon` rounds.
///
/// Uninformed: the graph is generated, the policy draws `I_t`, the pairs
/// `(i, ℓ_i)` for `i ∈ S_{I_t}` are revealed, then the graph is disclosed to the
/// update. Informed: the graph is disclosed before the draw. The policy's
/// randomness comes from `seeds.policy` only.
pub fn run_episode(
    mut policy: Policy,
    losses: &mut LossProcess,
    graphs: &mut GraphProcess,
    horizon: usize,
    setting: Setting,
    seeds: EpisodeSeeds,
    options: EpisodeOptions,
) -> Result<ExperimentResult, HarnessError> {
    if matches!(policy, Policy::Exp3Dom(_)) && setting == Setting::Uninformed {
        return Err(HarnessError::DomRequiresInformed);
    }
    let k = policy.num_actions();
    if losses.num_actions() != k && horizon > 0 || graphs.num_actions() != k && horizon > 0 {
        return Err(HarnessError::ActionCount {
            losses: losses.num_actions(),
            graphs: graphs.num_actions(),
            policy: k,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seeds.policy);
    let alpha_tracker = AlphaTracker::new(options.record_alpha, graphs);
    let mut history: Vec<usize> = Vec::with_capacity(horizon);
    let mut arm_losses = vec![0.0; k];
    let mut policy_loss = 0.0;
    let mut curve = Vec::new();
    let mut traces = Vec::new();
    let mut bucket_rounds = match &policy {
        Policy::Exp3Dom(d) => vec![0; d.buckets().len()],
        Policy::Exp3Set(_) => Vec::new(),
    };

    for t in 1..=horizon {
        let round_losses = losses.next_losses(t, &history)?;
        let graph = graphs.next_graph(t, &history)?;

        let (action, probs, q, q_stat, observed, dom_info) = match &mut policy {
            Policy::Exp3Set(p) => {
                let probs = p.distribution();
                let action = sample_action(&probs, &mut rng);
                let revealed = reveal(&graph, action, &round_losses);
                let est = p.update(&graph, action, &revealed)?;
                let q_stat = est.q_statistic(&probs);
                (action, probs, est.q, q_stat, est.observed, None)
            }
            Policy::Exp3Dom(p) => {
                let choice = p.choose(&graph)?;
                let action = sample_action(&choice.probs, &mut rng);
                let revealed = reveal(&graph, action, &round_losses);
                let upd = p.update(&graph, &choice, action, &revealed)?;
                bucket_rounds[choice.bucket] += 1;
                let info = (choice.dominating_set.len(), choice.bucket, choice.gamma, upd.restarted);
                (action, choice.probs, upd.estimate.q, upd.q_statistic, upd.estimate.observed, Some(info))
            }
        };

        let loss = round_losses[action];
        policy_loss += loss;
        for (acc, l) in arm_losses.iter_mut().zip(&round_losses) {
            *acc += l;
        }
        history.push(action);

        let restarted = dom_info.is_some_and(|d| d.3);
        let logged = is_logged_round(t, horizon);
        if logged || (restarted && options.keep_traces) {
            let alpha = alpha_tracker.alpha(&graph);
            if logged {
                let best = arm_losses.iter().copied().fold(f64::INFINITY, f64::min);
                curve.push(CurvePoint { t, regret: policy_loss - best, q_statistic: q_stat, alpha });
            }
            if options.keep_traces {
                traces.push(RoundRecord {
                    t,
                    action,
                    loss,
                    observed,
                    probs,
                    q,
                    q_statistic: q_stat,
                    alpha,
                    dominating_set_size: dom_info.map(|d| d.0),
                    bucket: dom_info.map(|d| d.1),
                    gamma: dom_info.map(|d| d.2),
                    restarted,
                });
            }
        }
    }

    let best = arm_losses.iter().copied().fold(f64::INFINITY, f64::min);
    let regret = if horizon == 0 || k == 0 { 0.0 } else { policy_loss - best };
    Ok(ExperimentResult {
        horizon,
        policy_loss,
        arm_losses,
        regret,
        curve,
        traces,
        seeds,
        config_digest: None,
        bucket_rounds,
        final_policy: policy,
    })
}

fn reveal(g: &DirectedGraph, action: usize, losses: &[f64]) -> Vec<(usize, f64)> {
    g.observation_set(action).into_iter().map(|i| (i, losses[i])).collect()
}

/// Recomputes `Q_t` for a logged round from its distribution and the round's graph.
pub fn recompute_q(record: &RoundRecord, g: &DirectedGraph) -> f64 {
    q_statistic(&record.probs, g)
}

/// Per-episode numbers kept in a batch aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub seeds: EpisodeSeeds,
    pub policy_loss: f64,
    pub regret: f64,
    pub bucket_rounds: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub repetitions: usize,
    pub base_seed: u64,
    pub mean_regret: f64,
    /// Population standard deviation over repetitions.
    pub std_regret: f64,
    pub rounds: Vec<usize>,
    pub regret_mean: Vec<f64>,
    pub regret_std: Vec<f64>,
    pub q_mean: Vec<f64>,
    /// Mean recorded `α(G_t)`; `None` where any repetition did not compute it.
    pub alpha_mean: Vec<Option<f64>>,
    pub episodes: Vec<EpisodeSummary>,
}

fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Aggregates episodes in the given order; all must share a horizon.
pub fn aggregate(base_seed: u64, episodes: &[ExperimentResult]) -> Result<BatchResult, HarnessError> {
    let first = episodes.first().ok_or(HarnessError::NoRepetitions)?;
    let rounds: Vec<usize> = first.curve.iter().map(|c| c.t).collect();
    let n_points = rounds.len();
    let mut regret_mean = Vec::with_capacity(n_points);
    let mut regret_std = Vec::with_capacity(n_points);
    let mut q_mean = Vec::with_capacity(n_points);
    let mut alpha_mean = Vec::with_capacity(n_points);
    for idx in 0..n_points {
        let (m, s) = mean_std(episodes.iter().map(|e| e.curve[idx].regret));
        regret_mean.push(m);
        regret_std.push(s);
        q_mean.push(mean_std(episodes.iter().map(|e| e.curve[idx].q_statistic)).0);
        let alphas: Option<Vec<f64>> = episodes.iter().map(|e| e.curve[idx].alpha.map(|a| a as f64)).collect();
        alpha_mean.push(alphas.map(|a| a.iter().sum::<f64>() / a.len() as f64));
    }
    let (mean_regret, std_regret) = mean_std(episodes.iter().map(|e| e.regret));
    Ok(BatchResult {
        repetitions: episodes.len(),
        base_seed,
        mean_regret,
        std_regret,
        rounds,
        regret_mean,
        regret_std,
        q_mean,
        alpha_mean,
        episodes: episodes
            .iter()
            .map(|e| EpisodeSummary {
                seeds: e.seeds,
                policy_loss: e.policy_loss,
                regret: e.regret,
                bucket_rounds: e.bucket_rounds.clone(),
            })
            .collect(),
    })
}

/// Everything one repetition needs, built from its derived seeds.
pub struct EpisodeSetup {
    pub policy: Policy,
    pub losses: LossProcess,
    pub graphs: GraphProcess,
}

/// Runs `repetitions` episodes in parallel and aggregates them in repetition order.
pub fn run_batch_with<F>(
    base_seed: u64,
    repetitions: usize,
    horizon: usize,
    setting: Setting,
    options: EpisodeOptions,
    build: F,
) -> Result<BatchResult, HarnessError>
where
    F: Fn(EpisodeSeeds) -> Result<EpisodeSetup, HarnessError> + Sync,
{
    if repetitions == 0 {
        return Err(HarnessError::NoRepetitions);
    }
    let episodes = (0..repetitions as u64)
        .into_par_iter()
        .map(|rep| {
            let seeds = EpisodeSeeds::derive(base_seed, rep);
            let EpisodeSetup { policy, mut losses, mut graphs } = build(seeds)?;
            let opts = EpisodeOptions { keep_traces: false, ..options };
            run_episode(policy, &mut losses, &mut graphs, horizon, setting, seeds, opts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    aggregate(base_seed, &episodes)
}

/// Runs a validated experiment configuration.
pub fn run_batch(experiment: &crate::config::Experiment, repetitions: usize) -> Result<BatchResult, HarnessError> {
    run_batch_with(
        experiment.config.seed,
        repetitions,
        experiment.config.horizon,
        experiment.setting(),
        EpisodeOptions { record_alpha: true, keep_traces: false },
        |seeds| experiment.episode_setup(seeds),
    )
}

/// Regret bound after each round `t = 1..=T`. With `C_t = Σ_{s≤t} c_s` the
/// per-round complexities of [`Experiment::bound_complexities`], Exp3-SET gets
/// `sqrt(2 ln K · C_t)` and Exp3-DOM gets `4 ln K · sqrt(ln(K t) · C_t)`.
///
/// [`Experiment::bound_complexities`]: crate::config::Experiment::bound_complexities
pub fn regret_bound_overlay(experiment: &crate::config::Experiment) -> Result<Vec<f64>, HarnessError> {
    let per_round = experiment.bound_complexities()?;
    let k = experiment.config.k as f64;
    let dom = matches!(experiment.config.policy, crate::config::PolicySpec::Exp3dom { .. });
    let mut acc = 0.0;
    Ok(per_round
        .into_iter()
        .enumerate()
        .map(|(s, c)| {
            acc += c;
            if dom {
                4.0 * k.ln() * ((k * (s + 1) as f64).ln() * acc).sqrt()
            } else {
                (2.0 * k.ln() * acc).sqrt()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::GammaSchedule;

    fn set_policy(k: usize, eta: f64) -> Policy {
        Policy::Exp3Set(Exp3Set::new(k, eta).unwrap())
    }

    #[test]
    fn zero_horizon_is_zero_regret() {
        let mut l = LossProcess::bernoulli(vec![0.5; 3], 1).unwrap();
        let mut g = GraphProcess::Fixed(DirectedGraph::empty(3));
        let r = run_episode(set_policy(3, 0.1), &mut l, &mut g, 0, Setting::Uninformed, EpisodeSeeds::derive(0, 0), EpisodeOptions::default()).unwrap();
        assert_eq!(r.regret, 0.0);
        assert_eq!(r.policy_loss, 0.0);
        assert!(r.traces.is_empty());
    }

    #[test]
    fn single_action_has_no_regret() {
        let mut l = LossProcess::bernoulli(vec![0.7], 4).unwrap();
        let mut g = GraphProcess::Fixed(DirectedGraph::empty(1));
        let r = run_episode(set_policy(1, 0.3), &mut l, &mut g, 500, Setting::Uninformed, EpisodeSeeds::derive(1, 0), EpisodeOptions::default()).unwrap();
        assert_eq!(r.regret, 0.0);
        assert!(r.curve.iter().all(|c| c.regret == 0.0));
    }

    #[test]
    fn dom_needs_informed_setting() {
        let mut l = LossProcess::bernoulli(vec![0.5; 2], 1).unwrap();
        let mut g = GraphProcess::Fixed(DirectedGraph::empty(2));
        let p = Policy::Exp3Dom(Exp3Dom::new(2, GammaSchedule::Doubling).unwrap());
        let err = run_episode(p, &mut l, &mut g, 5, Setting::Uninformed, EpisodeSeeds::derive(0, 0), EpisodeOptions::default()).unwrap_err();
        assert!(matches!(err, HarnessError::DomRequiresInformed));
        assert!(err.to_string().contains("informed"));
    }

    #[test]
    fn traces_are_conserved() {
        let graph = DirectedGraph::from_arcs(4, [(0, 1), (2, 3), (3, 0)]).unwrap();
        let mut l = LossProcess::bernoulli(vec![0.2, 0.4, 0.6, 0.8], 3).unwrap();
        let mut g = GraphProcess::Fixed(graph.clone());
        let r = run_episode(set_policy(4, 0.2), &mut l, &mut g, 300, Setting::Uninformed, EpisodeSeeds::derive(5, 0), EpisodeOptions::default()).unwrap();
        assert_eq!(r.traces.len(), 300);
        let total: f64 = r.traces.iter().map(|t| t.loss).sum();
        assert_eq!(total, r.policy_loss);
        for rec in &r.traces {
            assert_eq!(rec.observed, graph.observation_set(rec.action));
            assert!((recompute_q(rec, &graph) - rec.q_statistic).abs() < 1e-12);
            assert_eq!(rec.alpha, Some(2));
        }
        let best = r.arm_losses.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(r.regret, r.policy_loss - best);
    }

    #[test]
    fn thinning_schedule() {
        assert!((1..=100).all(|t| is_logged_round(t, 100)));
        let horizon = 200_000;
        let logged = (1..=horizon).filter(|&t| is_logged_round(t, horizon)).count();
        assert_eq!(logged, 10_000);
        assert!(is_logged_round(horizon, horizon));
    }

    #[test]
    fn batch_of_one_equals_episode() {
        let build = |seeds: EpisodeSeeds| -> Result<EpisodeSetup, HarnessError> {
            Ok(EpisodeSetup {
                policy: set_policy(3, 0.1),
                losses: LossProcess::bernoulli(vec![0.3, 0.5, 0.6], seeds.loss)?,
                graphs: GraphProcess::erdos_renyi(3, 0.5, seeds.graph)?,
            })
        };
        let batch = run_batch_with(11, 1, 200, Setting::Uninformed, EpisodeOptions::default(), build).unwrap();
        let seeds = EpisodeSeeds::derive(11, 0);
        let EpisodeSetup { policy, mut losses, mut graphs } = build(seeds).unwrap();
        let ep = run_episode(policy, &mut losses, &mut graphs, 200, Setting::Uninformed, seeds, EpisodeOptions::default()).unwrap();
        assert_eq!(batch.mean_regret, ep.regret);
        assert_eq!(batch.std_regret, 0.0);
        let curve: Vec<f64> = ep.curve.iter().map(|c| c.regret).collect();
        assert_eq!(batch.regret_mean, curve);

        let again = run_batch_with(11, 4, 200, Setting::Uninformed, EpisodeOptions::default(), build).unwrap();
        let twice = run_batch_with(11, 4, 200, Setting::Uninformed, EpisodeOptions::default(), build).unwrap();
        assert_eq!(again, twice);
        // the mean curve is the componentwise mean of the episode curves
        let eps: Vec<ExperimentResult> = (0..4)
            .map(|rep| {
                let seeds = EpisodeSeeds::derive(11, rep);
                let EpisodeSetup { policy, mut losses, mut graphs } = build(seeds).unwrap();
                run_episode(policy, &mut losses, &mut graphs, 200, Setting::Uninformed, seeds, EpisodeOptions::default()).unwrap()
            })
            .collect();
        for (idx, m) in again.regret_mean.iter().enumerate() {
            let direct = eps.iter().map(|e| e.curve[idx].regret).sum::<f64>() / 4.0;
            assert!((m - direct).abs() < 1e-12);
        }
    }
}
