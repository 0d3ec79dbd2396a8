//! Brute-force and Monte Carlo checks of the combinatorial facts behind the
//! regret bounds.
//!
//! The checks recompute `Q`, `α`, `mas` and `γ` here by subset enumeration
//! over bitmasks and rerun the greedy cover from scratch, so agreement with
//! [`crate::graphs`] and [`crate::policies`] is evidence rather than a
//! tautology. Every trial draws from its own seeded stream, which keeps reports
//! reproducible under parallel execution.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graphs::DirectedGraph;
use crate::policies::loss_estimates;
use crate::seeds::splitmix64;

/// Largest graph the subset-enumeration oracles accept.
pub const BRUTE_FORCE_CAP: usize = 20;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub check: String,
    pub instances: usize,
    /// Largest `bound - quantity` seen.
    pub max_slack: f64,
    /// Smallest `bound - quantity` seen; negative only alongside violations.
    pub min_slack: f64,
    /// Checked value for single-quantity checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    pub violations: Vec<String>,
    /// Wall-clock seconds; left out of JSON so reports are byte-stable.
    #[serde(skip)]
    pub runtime: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of one instance: `(bound - quantity, violations)`.
type Outcome = (f64, Vec<String>);

fn collect(check: &str, started: Instant, outcomes: Vec<Outcome>) -> OracleReport {
    let instances = outcomes.len();
    let (mut max_slack, mut min_slack) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut violations = Vec::new();
    for (slack, v) in outcomes {
        max_slack = max_slack.max(slack);
        min_slack = min_slack.min(slack);
        violations.extend(v);
    }
    OracleReport {
        check: check.to_string(),
        instances,
        max_slack,
        min_slack,
        value: None,
        violations,
        runtime: started.elapsed().as_secs_f64(),
    }
}

fn check_cap(op: &'static str, k_max: usize) -> Result<(), GraphError> {
    if k_max > BRUTE_FORCE_CAP {
        return Err(GraphError::CapExceeded { op, num_nodes: k_max, cap: BRUTE_FORCE_CAP });
    }
    Ok(())
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed, trial as u64))
}

fn run_trials<F>(check: &str, trials: usize, seed: u64, f: F) -> OracleReport
where
    F: Fn(usize, &mut ChaCha8Rng) -> Outcome + Sync,
{
    let started = Instant::now();
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|n| f(n, &mut trial_rng(seed, n)))
        .collect();
    collect(check, started, outcomes)
}

// ---------------------------------------------------------------------------
// independent arithmetic

/// `Σ_i p_i / (p_i + Σ_{j→i} p_j)` straight from the arc relation.
fn q_sum(g: &DirectedGraph, p: &[f64]) -> f64 {
    let k = g.num_nodes();
    (0..k)
        .filter(|&i| p[i] > 0.0)
        .map(|i| {
            let mass: f64 = (0..k).filter(|&j| j != i && g.has_arc(j, i)).map(|j| p[j]).sum();
            p[i] / (p[i] + mass)
        })
        .sum()
}

struct Masks {
    k: usize,
    /// Arcs out of `v`.
    out: Vec<u32>,
    /// Arcs into `v`.
    inn: Vec<u32>,
}

impl Masks {
    fn of(g: &DirectedGraph) -> Self {
        let k = g.num_nodes();
        let mut out = vec![0u32; k];
        let mut inn = vec![0u32; k];
        for (i, j) in g.arcs() {
            out[i] |= 1 << j;
            inn[j] |= 1 << i;
        }
        Self { k, out, inn }
    }

    fn full(&self) -> u32 {
        ((1u64 << self.k) - 1) as u32
    }

    /// Largest subset with no arc in either direction between members.
    fn alpha(&self) -> usize {
        let n = 1usize << self.k;
        let mut independent = vec![false; n];
        independent[0] = true;
        let mut best = 0;
        for s in 1..n {
            let v = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            let adj = (self.out[v] | self.inn[v]) as usize;
            independent[s] = independent[rest] && adj & rest == 0;
            if independent[s] {
                best = best.max(s.count_ones() as usize);
            }
        }
        best
    }

    /// Largest subset inducing an acyclic digraph: `S` is acyclic iff some
    /// member has no in-arc from `S` and the rest of `S` is acyclic.
    fn mas(&self) -> usize {
        let n = 1usize << self.k;
        let mut acyclic = vec![false; n];
        acyclic[0] = true;
        let mut best = 0;
        for s in 1..n {
            let mut bits = s;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.inn[v] as usize & s == 0 && acyclic[s & !(1 << v)] {
                    acyclic[s] = true;
                    best = best.max(s.count_ones() as usize);
                    break;
                }
            }
        }
        best
    }

    /// Smallest `R` such that every node is in `R` or has an in-arc from `R`.
    fn gamma(&self) -> usize {
        let n = 1usize << self.k;
        let full = self.full();
        let mut cover = vec![0u32; n];
        let mut best = self.k;
        for s in 1..n {
            let v = s.trailing_zeros() as usize;
            cover[s] = cover[s & (s - 1)] | self.out[v] | (1 << v);
            if cover[s] == full {
                best = best.min(s.count_ones() as usize);
            }
        }
        best
    }

    /// Greedy set cover over closed out-neighborhoods, lowest index on ties.
    fn greedy_cover(&self) -> Vec<usize> {
        let full = self.full();
        let mut covered = 0u32;
        let mut picked = Vec::new();
        while covered != full {
            let (v, _) = (0..self.k)
                .map(|v| (v, ((self.out[v] | (1 << v)) & !covered).count_ones()))
                .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
            picked.push(v);
            covered |= self.out[v] | (1 << v);
        }
        picked
    }

    /// Repeatedly strips nodes with no in-arc from the remaining set.
    fn is_acyclic(&self, nodes: &[usize]) -> bool {
        let mut left: u32 = nodes.iter().fold(0, |m, &v| m | (1 << v));
        loop {
            if left == 0 {
                return true;
            }
            let sources: u32 = (0..self.k)
                .filter(|&v| left & (1 << v) != 0 && self.inn[v] & left == 0)
                .fold(0, |m, v| m | (1 << v));
            if sources == 0 {
                return false;
            }
            left &= !sources;
        }
    }
}

// ---------------------------------------------------------------------------
// random instances

fn random_graph(k: usize, symmetric: bool, rng: &mut ChaCha8Rng) -> DirectedGraph {
    let r: f64 = rng.random();
    let mut arcs = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j || (symmetric && j < i) {
                continue;
            }
            if rng.random::<f64>() < r {
                arcs.push((i, j));
                if symmetric {
                    arcs.push((j, i));
                }
            }
        }
    }
    DirectedGraph::from_arcs(k, arcs).expect("arcs within range")
}

/// Random distribution; with probability one half some coordinates are zeroed.
fn random_distribution(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let sparse = rng.random::<bool>();
    let mut p: Vec<f64> = (0..k)
        .map(|_| {
            let u: f64 = rng.random();
            if sparse && rng.random::<f64>() < 0.3 {
                0.0
            } else {
                -(1.0 - u).ln()
            }
        })
        .collect();
    if p.iter().all(|&x| x == 0.0) {
        let i = rng.random_range(0..k);
        p[i] = 1.0;
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

fn random_k(k_max: usize, rng: &mut ChaCha8Rng) -> usize {
    rng.random_range(1..=k_max.max(1))
}

// ---------------------------------------------------------------------------
// checks

/// `Q = (K+1)/2` on the total order with `p_i = 2^{-i}` (`i < K`) and `p_K = 2^{-K+1}`.
pub fn verify_fact1(k: usize) -> OracleReport {
    let started = Instant::now();
    assert!(k >= 2, "K must be at least 2");
    let g = DirectedGraph::total_order(k);
    let p: Vec<f64> = (1..=k).map(|i| 0.5f64.powi(i.min(k - 1) as i32)).collect();
    let q = q_sum(&g, &p);
    let expected = (k as f64 + 1.0) / 2.0;
    let err = (q - expected).abs();
    let violations = if err <= 1e-12 {
        vec![]
    } else {
        vec![format!("K={k}: Q={q} differs from {expected} by {err:e}")]
    };
    let mut report = collect("fact1", started, vec![(1e-12 - err, violations)]);
    report.value = Some(q);
    report
}

/// `Q ≤ α` on random symmetric graphs; the library's exact α must match enumeration.
pub fn verify_q_le_alpha(trials: usize, k_max: usize, seed: u64) -> Result<OracleReport, GraphError> {
    check_cap("verify_q_le_alpha", k_max)?;
    Ok(run_trials("q_le_alpha", trials, seed, |n, rng| {
        let k = random_k(k_max, rng);
        let g = random_graph(k, true, rng);
        let p = random_distribution(k, rng);
        let q = q_sum(&g, &p);
        let alpha = Masks::of(&g).alpha();
        let mut v = Vec::new();
        if q > alpha as f64 + EPS {
            v.push(format!("trial {n}: K={k} Q={q} > alpha={alpha}"));
        }
        if g.independence_number_exact().ok() != Some(alpha) {
            v.push(format!("trial {n}: library alpha disagrees with enumeration ({alpha})"));
        }
        (alpha as f64 - q, v)
    }))
}

/// `Q ≤ mas`, and the constructive witness is acyclic with at least `⌈Q⌉` nodes.
pub fn verify_q_le_mas(trials: usize, k_max: usize, seed: u64) -> Result<OracleReport, GraphError> {
    check_cap("verify_q_le_mas", k_max)?;
    Ok(run_trials("q_le_mas", trials, seed, |n, rng| {
        let k = random_k(k_max, rng);
        let g = random_graph(k, false, rng);
        let p = random_distribution(k, rng);
        let q = q_sum(&g, &p);
        let masks = Masks::of(&g);
        let mas = masks.mas();
        let witness = g.mas_greedy_witness(&p);
        let mut v = Vec::new();
        if q > mas as f64 + EPS {
            v.push(format!("trial {n}: K={k} Q={q} > mas={mas}"));
        }
        if !masks.is_acyclic(&witness) {
            v.push(format!("trial {n}: witness {witness:?} induces a cycle"));
        }
        if (witness.len() as f64) < (q - EPS).ceil() {
            v.push(format!("trial {n}: witness size {} < ceil(Q) for Q={q}", witness.len()));
        }
        if g.mas_exact().ok() != Some(mas) {
            v.push(format!("trial {n}: library mas disagrees with enumeration ({mas})"));
        }
        (mas as f64 - q, v)
    }))
}

/// `Σ_i 1/(1+d_i^-) ≤ 2α ln(1 + K/α)` on random directed graphs.
pub fn verify_amlemma(trials: usize, k_max: usize, seed: u64) -> Result<OracleReport, GraphError> {
    check_cap("verify_amlemma", k_max)?;
    Ok(run_trials("amlemma", trials, seed, |n, rng| {
        let k = random_k(k_max, rng);
        let g = random_graph(k, false, rng);
        let masks = Masks::of(&g);
        let lhs: f64 = masks.inn.iter().map(|m| 1.0 / (1.0 + m.count_ones() as f64)).sum();
        let alpha = masks.alpha() as f64;
        let bound = 2.0 * alpha * (1.0 + k as f64 / alpha).ln();
        let v = if lhs > bound + EPS {
            vec![format!("trial {n}: K={k} sum={lhs} > {bound}")]
        } else {
            vec![]
        };
        (bound - lhs, v)
    }))
}

/// Right-hand side of the weighted indegree bound for a dominating set of size `r`.
pub fn weighted_amlemma_bound(k: usize, alpha: usize, r: usize, beta: f64) -> f64 {
    let (k, alpha, r) = (k as f64, alpha as f64, r as f64);
    let inner = (k * k / (r * beta)).ceil() + k;
    2.0 * alpha * (1.0 + inner / alpha).ln() + 2.0 * r
}

/// `Q ≤ 2α ln(1 + (⌈K²/(rβ)⌉ + K)/α) + 2r` for `p` floored on the greedy cover `R`.
///
/// `p` mixes a random distribution with the uniform one on `R`, and `β` is the
/// smallest resulting mass on `R`.
pub fn verify_weighted_amlemma(trials: usize, k_max: usize, seed: u64) -> Result<OracleReport, GraphError> {
    check_cap("verify_weighted_amlemma", k_max)?;
    Ok(run_trials("weighted_amlemma", trials, seed, |n, rng| {
        let k = random_k(k_max, rng);
        let g = random_graph(k, false, rng);
        let masks = Masks::of(&g);
        let cover = masks.greedy_cover();
        let lambda: f64 = rng.random_range(0.01..=1.0);
        let base = random_distribution(k, rng);
        let mut p: Vec<f64> = base.iter().map(|x| (1.0 - lambda) * x).collect();
        for &i in &cover {
            p[i] += lambda / cover.len() as f64;
        }
        let beta = cover.iter().map(|&i| p[i]).fold(f64::INFINITY, f64::min);
        let q = q_sum(&g, &p);
        let bound = weighted_amlemma_bound(k, masks.alpha(), cover.len(), beta);
        let v = if q > bound + EPS {
            vec![format!("trial {n}: K={k} Q={q} > {bound}")]
        } else {
            vec![]
        };
        (bound - q, v)
    }))
}

/// `|R| ≤ min{γ(1+ln K), ⌈2α ln K⌉ + 1}` for the greedy cover, which must also
/// match [`DirectedGraph::greedy_dominating_set`].
pub fn verify_greedycover(trials: usize, k_max: usize, seed: u64) -> Result<OracleReport, GraphError> {
    check_cap("verify_greedycover", k_max)?;
    Ok(run_trials("greedycover", trials, seed, |n, rng| {
        let k = random_k(k_max, rng);
        let g = random_graph(k, false, rng);
        let masks = Masks::of(&g);
        let cover = masks.greedy_cover();
        let ln_k = (k as f64).ln();
        let gamma = masks.gamma() as f64;
        let alpha = masks.alpha() as f64;
        let bound = (gamma * (1.0 + ln_k)).min((2.0 * alpha * ln_k - EPS).ceil() + 1.0);
        let size = cover.len() as f64;
        let mut v = Vec::new();
        if size > bound + EPS {
            v.push(format!("trial {n}: K={k} |R|={size} > {bound}"));
        }
        if g.greedy_dominating_set() != cover {
            v.push(format!("trial {n}: library greedy cover differs from {cover:?}"));
        }
        (bound - size, v)
    }))
}

/// `a/(a+b-A) ≤ a/(a+b) + A/(B-A)` whenever `a, b ≥ 0` and `a+b ≥ B > A > 0`.
pub fn verify_ancillary(trials: usize, seed: u64) -> OracleReport {
    run_trials("ancillary", trials, seed, |n, rng| {
        let a_cap: f64 = rng.random_range(1e-6..10.0);
        let b_cap = a_cap + rng.random_range(1e-6..10.0);
        let total = b_cap + if rng.random::<f64>() < 0.1 { 0.0 } else { rng.random_range(0.0..10.0) };
        let share: f64 = if rng.random::<f64>() < 0.1 { 0.0 } else { rng.random() };
        let a = total * share;
        let b = total - a;
        let lhs = a / (a + b - a_cap);
        let rhs = a / (a + b) + a_cap / (b_cap - a_cap);
        let v = if lhs > rhs * (1.0 + 1e-12) + 1e-15 {
            vec![format!("trial {n}: a={a} b={b} A={a_cap} B={b_cap}: {lhs} > {rhs}")]
        } else {
            vec![]
        };
        (rhs - lhs, v)
    })
}

/// `(1 - (1-r)^K) / (rK)`, with its `r → 0` limit 1.
pub fn claim2_closed_form(k: usize, r: f64) -> f64 {
    if r < 1e-12 {
        1.0
    } else {
        (1.0 - (1.0 - r).powi(k as i32)) / (r * k as f64)
    }
}

/// Mean over `samples` Erdős–Rényi draws of each node's term `p_i/(p_i + Σ_{j→i} p_j)`.
fn claim2_means(k: usize, r: f64, p: &[f64], samples: usize, seed: u64) -> Vec<f64> {
    let chunks = 64.min(samples);
    let sums: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(seed, c + 1);
            let n = samples / chunks + usize::from(c < samples % chunks);
            let mut acc = vec![0.0; k];
            for _ in 0..n {
                let g = DirectedGraph::erdos_renyi(k, r, &mut rng).expect("valid density");
                for (i, a) in acc.iter_mut().enumerate() {
                    let mass: f64 = g.in_neighbors(i).iter().map(|&j| p[j]).sum();
                    *a += p[i] / (p[i] + mass);
                }
            }
            acc
        })
        .collect();
    (0..k).map(|i| sums.iter().map(|s| s[i]).sum::<f64>() / samples as f64).collect()
}

/// Monte Carlo over Erdős–Rényi redraws against `(1 - (1-r)^K)/(rK)` within
/// `4/√samples`, in two forms: every node's term under the uniform distribution,
/// and the node average `E[Q]/K` under a random full-support distribution.
///
/// A single node's term is not distribution-free: for `K = 2` its expectation is
/// `(1 - r) + r·p_i`. Only the node average is, which is what the regret bound
/// consumes.
pub fn verify_claim2(k: usize, r: f64, samples: usize, seed: u64) -> OracleReport {
    let started = Instant::now();
    assert!(k >= 1 && samples >= 1 && (0.0..=1.0).contains(&r), "need K ≥ 1, samples ≥ 1, r ∈ [0, 1]");
    let expected = claim2_closed_form(k, r);
    let tol = 4.0 / (samples as f64).sqrt();
    let judge = |what: String, mean: f64| {
        let err = (mean - expected).abs();
        let v = if err > tol {
            vec![format!("K={k} r={r} {what}: mean {mean} vs {expected} (tol {tol})")]
        } else {
            vec![]
        };
        (tol - err, v)
    };

    let uniform = vec![1.0 / k as f64; k];
    let mut outcomes: Vec<Outcome> = claim2_means(k, r, &uniform, samples, seed)
        .into_iter()
        .enumerate()
        .map(|(i, m)| judge(format!("uniform p, node {i}"), m))
        .collect();

    let mut rng = trial_rng(seed, 0);
    let mut p = random_distribution(k, &mut rng);
    p.iter_mut().for_each(|x| *x = 0.5 * *x + 0.5 / k as f64);
    let per_node = claim2_means(k, r, &p, samples, splitmix64(seed, 1));
    outcomes.push(judge("random p, node average".into(), per_node.iter().sum::<f64>() / k as f64));

    let mut report = collect(&format!("claim2[K={k},r={r}]"), started, outcomes);
    report.value = Some(expected);
    report
}

/// Exhaustive over the played action: `E[ℓ̂_i] = ℓ_i` to 1e-12 and
/// `E[ℓ̂_i²] ≤ 1/q_i`, using the estimator from [`crate::policies`].
pub fn verify_estimator_moments(k_max: usize, trials: usize, seed: u64) -> Result<OracleReport, GraphError> {
    check_cap("verify_estimator_moments", k_max)?;
    Ok(run_trials("estimator_moments", trials, seed, |n, rng| {
        let k = random_k(k_max, rng);
        let g = random_graph(k, rng.random(), rng);
        let mut p = random_distribution(k, rng);
        p.iter_mut().for_each(|x| *x = 0.9 * *x + 0.1 / k as f64);
        let losses: Vec<f64> = (0..k).map(|_| rng.random()).collect();
        let mut first = vec![0.0; k];
        let mut second = vec![0.0; k];
        for played in 0..k {
            let observed: Vec<(usize, f64)> =
                (0..k).filter(|&j| j == played || g.has_arc(played, j)).map(|j| (j, losses[j])).collect();
            let est = loss_estimates(&p, &g, played, &observed).expect("well-formed round");
            for i in 0..k {
                first[i] += p[played] * est.values[i];
                second[i] += p[played] * est.values[i] * est.values[i];
            }
        }
        let mut v = Vec::new();
        let mut slack = f64::INFINITY;
        for i in 0..k {
            let q_i = p[i] + (0..k).filter(|&j| j != i && g.has_arc(j, i)).map(|j| p[j]).sum::<f64>();
            let bias = (first[i] - losses[i]).abs();
            if bias > 1e-12 {
                v.push(format!("trial {n}: i={i} E[est]={} vs loss {}", first[i], losses[i]));
            }
            let bound = 1.0 / q_i;
            if second[i] > bound * (1.0 + 1e-12) {
                v.push(format!("trial {n}: i={i} second moment {} > 1/q = {bound}", second[i]));
            }
            slack = slack.min(bound - second[i]);
        }
        (slack, v)
    }))
}

// ---------------------------------------------------------------------------
// suite

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Fact1,
    QAlpha,
    QMas,
    Amlemma,
    WeightedAmlemma,
    Greedycover,
    Ancillary,
    Claim2,
    Moments,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Fact1,
        Suite::QAlpha,
        Suite::QMas,
        Suite::Amlemma,
        Suite::WeightedAmlemma,
        Suite::Greedycover,
        Suite::Ancillary,
        Suite::Claim2,
        Suite::Moments,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fact1 => "fact1",
            Suite::QAlpha => "q-alpha",
            Suite::QMas => "q-mas",
            Suite::Amlemma => "amlemma",
            Suite::WeightedAmlemma => "weighted-amlemma",
            Suite::Greedycover => "greedycover",
            Suite::Ancillary => "ancillary",
            Suite::Claim2 => "claim2",
            Suite::Moments => "moments",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_selection(name: &str) -> Result<Vec<Suite>, String> {
        if name == "all" {
            return Ok(Self::ALL.to_vec());
        }
        Self::ALL
            .iter()
            .copied()
            .find(|s| s.name() == name)
            .map(|s| vec![s])
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite `{name}` (expected all, {})", names.join(", "))
            })
    }
}

/// Overrides for a suite run; unset fields use the default trial counts.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SuiteParams {
    /// Restricts `fact1` and `claim2` to a single K.
    pub k: Option<usize>,
    /// Restricts `claim2` to a single density.
    pub r: Option<f64>,
    pub trials: Option<usize>,
    pub samples: Option<usize>,
}

pub const CLAIM2_KS: [usize; 3] = [2, 5, 10];
pub const CLAIM2_RS: [f64; 3] = [0.1, 0.5, 0.9];

/// Runs one suite and returns its reports in a fixed order.
pub fn run_suite(suite: Suite, params: SuiteParams, seed: u64) -> Result<Vec<OracleReport>, GraphError> {
    let trials = |default: usize| params.trials.unwrap_or(default);
    Ok(match suite {
        Suite::Fact1 => match params.k {
            Some(k) => vec![verify_fact1(k)],
            None => (2..=20).map(verify_fact1).collect(),
        },
        Suite::QAlpha => vec![verify_q_le_alpha(trials(500), 16, seed)?],
        Suite::QMas => vec![verify_q_le_mas(trials(200), 12, seed)?],
        Suite::Amlemma => vec![verify_amlemma(trials(500), 16, seed)?],
        Suite::WeightedAmlemma => vec![verify_weighted_amlemma(trials(300), 14, seed)?],
        Suite::Greedycover => vec![verify_greedycover(trials(300), 14, seed)?],
        Suite::Ancillary => vec![verify_ancillary(trials(10_000), seed)],
        Suite::Claim2 => {
            let ks = params.k.map_or(CLAIM2_KS.to_vec(), |k| vec![k]);
            let rs = params.r.map_or(CLAIM2_RS.to_vec(), |r| vec![r]);
            let samples = params.samples.unwrap_or(100_000);
            ks.iter()
                .flat_map(|&k| rs.iter().map(move |&r| (k, r)))
                .map(|(k, r)| verify_claim2(k, r, samples, seed))
                .collect()
        }
        Suite::Moments => vec![verify_estimator_moments(10, trials(200), seed)?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fact1_values() {
        for (k, expected) in [(2, 1.5), (4, 2.5), (10, 5.5)] {
            let r = verify_fact1(k);
            assert!(r.passed(), "{:?}", r.violations);
            assert_relative_eq!(r.value.unwrap(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn masks_on_small_graphs() {
        let c5 = DirectedGraph::directed_cycle(5).reciprocate();
        assert_eq!(Masks::of(&c5).alpha(), 2);
        let c3 = DirectedGraph::directed_cycle(3);
        assert_eq!(Masks::of(&c3).mas(), 2);
        let c4 = DirectedGraph::directed_cycle(4);
        assert_eq!(Masks::of(&c4).gamma(), 2);
        let m = Masks::of(&DirectedGraph::empty(7));
        assert_eq!((m.alpha(), m.mas(), m.gamma()), (7, 7, 7));
        let m = Masks::of(&DirectedGraph::total_order(6));
        assert_eq!((m.alpha(), m.mas(), m.gamma()), (1, 6, 1));
        assert!(!Masks::of(&c3).is_acyclic(&[0, 1, 2]));
        assert!(Masks::of(&c3).is_acyclic(&[0, 1]));
    }

    #[test]
    fn q_on_named_graphs() {
        let k = 6;
        let p: Vec<f64> = (1..=k).map(|i| 0.5f64.powi(i.min(k - 1) as i32)).collect();
        let g = DirectedGraph::total_order(k);
        assert_relative_eq!(q_sum(&g, &p), 3.5, epsilon = 1e-12);
        assert_eq!(Masks::of(&g).mas(), 6);

        let c3 = DirectedGraph::directed_cycle(3);
        assert_relative_eq!(q_sum(&c3, &[1.0 / 3.0; 3]), 1.5, epsilon = 1e-12);

        assert_relative_eq!(q_sum(&DirectedGraph::complete(5), &[0.2; 5]), 1.0, epsilon = 1e-12);
        assert_relative_eq!(q_sum(&DirectedGraph::empty(5), &[0.2; 5]), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn amlemma_extremes() {
        for k in 1..=8usize {
            let kf = k as f64;
            // clique: one term per node of 1/K, α = 1
            assert!(1.0 <= 2.0 * (1.0 + kf).ln() + EPS);
            // empty graph: K terms of 1, α = K
            assert!(kf <= 2.0 * kf * 2f64.ln());
        }
    }

    #[test]
    fn weighted_bound_named_instances() {
        // R = V with the uniform distribution
        let k = 6;
        let q = q_sum(&DirectedGraph::empty(k), &vec![1.0 / k as f64; k]);
        assert!(q <= weighted_amlemma_bound(k, k, k, 1.0 / k as f64));
        // star with R = {center}, β = 0.5
        let star = DirectedGraph::star(k, 0).unwrap();
        let mut p = vec![0.1; k];
        p[0] = 0.5;
        assert!(q_sum(&star, &p) <= weighted_amlemma_bound(k, Masks::of(&star).alpha(), 1, 0.5));
    }

    #[test]
    fn greedy_cover_named_instances() {
        let star = Masks::of(&DirectedGraph::star(9, 0).unwrap());
        assert_eq!(star.greedy_cover(), vec![0]);
        let empty = Masks::of(&DirectedGraph::empty(5));
        assert_eq!(empty.greedy_cover().len(), 5);
        assert_eq!(empty.gamma(), 5);
    }

    #[test]
    fn ancillary_named_instances() {
        let (a, b, cap_a, cap_b) = (1.0f64, 1.0f64, 0.5f64, 1.5f64);
        let lhs = a / (a + b - cap_a);
        let rhs = a / (a + b) + cap_a / (cap_b - cap_a);
        assert_relative_eq!(lhs, 2.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(rhs, 1.0, epsilon = 1e-12);
        assert!(verify_ancillary(2000, 1).passed());
    }

    #[test]
    fn claim2_closed_forms() {
        assert_relative_eq!(claim2_closed_form(2, 0.5), 0.75, epsilon = 1e-15);
        assert_relative_eq!(claim2_closed_form(7, 1.0), 1.0 / 7.0, epsilon = 1e-15);
        assert_eq!(claim2_closed_form(7, 0.0), 1.0);
        assert_relative_eq!(claim2_closed_form(7, 1e-9), 1.0, epsilon = 1e-6);
        let r = verify_claim2(2, 0.5, 20_000, 3);
        assert!(r.passed(), "{:?}", r.violations);
        let r = verify_claim2(4, 1.0, 200, 3);
        assert!(r.min_slack > 4.0 / 200f64.sqrt() - 1e-12, "clique terms are exact");
    }

    #[test]
    fn single_node_term_depends_on_p() {
        // K = 2: the term is 1 without the arc and p_i with it
        let (r, p) = (0.5, [0.8, 0.2]);
        let means = claim2_means(2, r, &p, 40_000, 11);
        for i in 0..2 {
            assert!((means[i] - ((1.0 - r) + r * p[i])).abs() < 0.02, "{means:?}");
        }
        assert!((means[0] - claim2_closed_form(2, r)).abs() > 0.05);
        assert!(((means[0] + means[1]) / 2.0 - claim2_closed_form(2, r)).abs() < 0.02);
    }

    #[test]
    fn reports_are_reproducible() {
        let a = verify_q_le_mas(20, 8, 7).unwrap();
        let b = verify_q_le_mas(20, 8, 7).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(verify_q_le_alpha(1, 21, 0).is_err());
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse_selection("all").unwrap().len(), 9);
        assert_eq!(Suite::parse_selection("claim2").unwrap(), vec![Suite::Claim2]);
        assert!(Suite::parse_selection("nope").is_err());
    }
}
