//! Exp3-SET (uninformed) and Exp3-DOM (informed) with the shared
//! importance-weighted estimator and learning-rate tuning rules.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::PolicyError;
use crate::graphs::DirectedGraph;

/// Probability that each action's loss is observed: `q_i = p_i + Σ_{j→i} p_j`.
pub fn q_values(p: &[f64], g: &DirectedGraph) -> Vec<f64> {
    (0..g.num_nodes())
        .map(|i| p[i] + g.in_neighbors(i).iter().map(|&j| p[j]).sum::<f64>())
        .collect()
}

/// `Q = Σ_i p_i / q_i`, with zero-probability terms contributing 0.
pub fn q_statistic(p: &[f64], g: &DirectedGraph) -> f64 {
    q_statistic_from(p, &q_values(p, g))
}

fn q_statistic_from(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(pi, qi)| pi / qi)
        .sum()
}

/// Importance-weighted loss estimate for one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossEstimate {
    /// `ℓ̂_i = ℓ_i / q_i` on observed actions, 0 elsewhere.
    pub values: Vec<f64>,
    /// Observation set of the played action, ascending.
    pub observed: Vec<usize>,
    /// Observation probabilities under the play distribution.
    pub q: Vec<f64>,
}

impl LossEstimate {
    /// `Σ_i p_i / q_i` for the distribution the estimate was built from.
    pub fn q_statistic(&self, p: &[f64]) -> f64 {
        q_statistic_from(p, &self.q)
    }
}

/// Builds `ℓ̂` for played action `played` from the revealed `(action, loss)` pairs.
///
/// The revealed actions must be exactly `S_played` and every loss must lie in [0, 1].
pub fn loss_estimates(
    p: &[f64],
    g: &DirectedGraph,
    played: usize,
    observed: &[(usize, f64)],
) -> Result<LossEstimate, PolicyError> {
    let k = g.num_nodes();
    if p.len() != k {
        return Err(PolicyError::SizeMismatch { graph: k, policy: p.len() });
    }
    if played >= k {
        return Err(PolicyError::ActionOutOfRange { action: played, num_actions: k });
    }
    let expected = g.observation_set(played);
    let mut seen: Vec<usize> = observed.iter().map(|&(i, _)| i).collect();
    seen.sort_unstable();
    if seen != expected {
        return Err(PolicyError::ObservedSetMismatch { observed: seen, expected });
    }
    let q = q_values(p, g);
    let mut values = vec![0.0; k];
    for &(i, loss) in observed {
        if !(0.0..=1.0).contains(&loss) {
            return Err(PolicyError::LossOutOfRange { action: i, loss });
        }
        values[i] = loss / q[i];
    }
    Ok(LossEstimate { values, observed: expected, q })
}

/// Draws an index from `p` by inverse CDF with one uniform draw.
pub fn sample_action<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return i;
        }
    }
    // rounding left `u` above the total mass: take the last supported action
    p.iter().rposition(|&pi| pi > 0.0).unwrap_or(p.len() - 1)
}

fn normalize(w: &[f64]) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Multiplies `w_i` by `exp(-rate·ℓ̂_i)` and rescales so the largest weight is 1.
fn exponential_update(weights: &mut [f64], rate: f64, estimate: &[f64]) {
    for (w, l) in weights.iter_mut().zip(estimate) {
        *w *= (-rate * l).exp();
    }
    let max = weights.iter().copied().fold(0.0, f64::max);
    if max > 0.0 && max.is_finite() {
        weights.iter_mut().for_each(|w| *w /= max);
    }
}

/// Exp3-SET: exponential weights over importance-weighted estimates, no explicit
/// exploration. It never sees the round's graph before it has committed to an
/// action: [`Exp3Set::distribution`] takes no graph, only [`Exp3Set::update`] does.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exp3Set {
    eta: f64,
    weights: Vec<f64>,
    round: usize,
}

impl Exp3Set {
    pub fn new(num_actions: usize, eta: f64) -> Result<Self, PolicyError> {
        if num_actions == 0 {
            return Err(PolicyError::NoActions);
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(PolicyError::InvalidEta(eta));
        }
        Ok(Self {
            eta,
            weights: vec![1.0; num_actions],
            round: 0,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of completed updates.
    pub fn round(&self) -> usize {
        self.round
    }

    pub fn num_actions(&self) -> usize {
        self.weights.len()
    }

    /// `p_i = w_i / Σ_j w_j`.
    pub fn distribution(&self) -> Vec<f64> {
        normalize(&self.weights)
    }

    /// Applies the round's feedback once the graph has been disclosed.
    pub fn update(
        &mut self,
        disclosed: &DirectedGraph,
        played: usize,
        observed: &[(usize, f64)],
    ) -> Result<LossEstimate, PolicyError> {
        if disclosed.num_nodes() != self.weights.len() {
            return Err(PolicyError::SizeMismatch {
                graph: disclosed.num_nodes(),
                policy: self.weights.len(),
            });
        }
        let p = self.distribution();
        let estimate = loss_estimates(&p, disclosed, played, observed)?;
        exponential_update(&mut self.weights, self.eta, &estimate.values);
        self.round += 1;
        Ok(estimate)
    }
}

/// How Exp3-DOM sets the exploration rate of each bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaSchedule {
    /// One constant rate per bucket `b = 0..=⌊log2 K⌋`.
    Fixed(Vec<f64>),
    /// Per-bucket doubling trick over `γ_r = sqrt(2^b ln K / 2^r)`.
    Doubling,
}

/// One Exp3 instance of Exp3-DOM, used on rounds with `|R_t| ∈ [2^b, 2^{b+1} - 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomBucket {
    pub weights: Vec<f64>,
    pub gamma: f64,
    /// Current doubling index `r`.
    pub doubling_index: u32,
    /// Running sum of `1 + Q_t / 2^{b+1}` over the bucket's rounds; never reset.
    pub accumulator: f64,
    pub restarts: u32,
    pub rounds: usize,
}

/// Output of [`Exp3Dom::choose`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomChoice {
    pub bucket: usize,
    pub dominating_set: Vec<usize>,
    pub probs: Vec<f64>,
    pub gamma: f64,
}

/// Output of [`Exp3Dom::update`].
#[derive(Debug, Clone, PartialEq)]
pub struct DomUpdate {
    pub estimate: LossEstimate,
    /// `Q^{(b_t)}_t` under the round's play distribution.
    pub q_statistic: f64,
    pub restarted: bool,
}

/// Exp3-DOM: one exponential-weights instance per dominating-set size class,
/// each mixing in uniform exploration over the round's dominating set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exp3Dom {
    num_actions: usize,
    schedule: GammaSchedule,
    buckets: Vec<DomBucket>,
    round: usize,
}

/// `⌊log2 n⌋` for `n >= 1`.
pub fn bucket_of(dominating_set_size: usize) -> usize {
    dominating_set_size.max(1).ilog2() as usize
}

/// `min(1, sqrt(2^b ln K / 2^r))`; `K = 1` gets rate 1.
pub fn doubling_gamma(num_actions: usize, bucket: usize, doubling_index: u32) -> f64 {
    if num_actions < 2 {
        return 1.0;
    }
    let ln_k = (num_actions as f64).ln();
    let g = ((2f64.powi(bucket as i32) * ln_k) / 2f64.powi(doubling_index as i32)).sqrt();
    g.min(1.0)
}

impl Exp3Dom {
    pub fn new(num_actions: usize, schedule: GammaSchedule) -> Result<Self, PolicyError> {
        if num_actions == 0 {
            return Err(PolicyError::NoActions);
        }
        let count = bucket_of(num_actions) + 1;
        let gammas: Vec<f64> = match &schedule {
            GammaSchedule::Fixed(gs) => {
                if gs.len() != count {
                    return Err(PolicyError::GammaCount { expected: count, got: gs.len() });
                }
                if let Some(&bad) = gs.iter().find(|&&g| !(g > 0.0 && g <= 1.0)) {
                    return Err(PolicyError::InvalidGamma(bad));
                }
                gs.clone()
            }
            GammaSchedule::Doubling => (0..count).map(|b| doubling_gamma(num_actions, b, 0)).collect(),
        };
        let buckets = gammas
            .into_iter()
            .map(|gamma| DomBucket {
                weights: vec![1.0; num_actions],
                gamma,
                doubling_index: 0,
                accumulator: 0.0,
                restarts: 0,
                rounds: 0,
            })
            .collect();
        Ok(Self { num_actions, schedule, buckets, round: 0 })
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn buckets(&self) -> &[DomBucket] {
        &self.buckets
    }

    pub fn schedule(&self) -> &GammaSchedule {
        &self.schedule
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// Computes the greedy dominating set of `g` and the bucket's play distribution.
    pub fn choose(&self, g: &DirectedGraph) -> Result<DomChoice, PolicyError> {
        self.choose_with(g, g.greedy_dominating_set())
    }

    /// Like [`Exp3Dom::choose`] with a caller-supplied dominating set.
    pub fn choose_with(&self, g: &DirectedGraph, dominating_set: Vec<usize>) -> Result<DomChoice, PolicyError> {
        if g.num_nodes() != self.num_actions {
            return Err(PolicyError::SizeMismatch { graph: g.num_nodes(), policy: self.num_actions });
        }
        if dominating_set.is_empty() || !g.is_dominating_set(&dominating_set) {
            return Err(PolicyError::NotDominating);
        }
        let mut set = dominating_set;
        let mut seen = vec![false; self.num_actions];
        set.retain(|&i| !std::mem::replace(&mut seen[i], true));
        let bucket = bucket_of(set.len());
        let inst = &self.buckets[bucket];
        let gamma = inst.gamma;
        let total: f64 = inst.weights.iter().sum();
        let mut probs: Vec<f64> = inst.weights.iter().map(|w| (1.0 - gamma) * w / total).collect();
        let share = gamma / set.len() as f64;
        for &i in &set {
            probs[i] += share;
        }
        Ok(DomChoice { bucket, dominating_set: set, probs, gamma })
    }

    /// Updates the bucket used by `choice` and applies the doubling restart rule.
    pub fn update(
        &mut self,
        g: &DirectedGraph,
        choice: &DomChoice,
        played: usize,
        observed: &[(usize, f64)],
    ) -> Result<DomUpdate, PolicyError> {
        let expected = bucket_of(choice.dominating_set.len());
        if choice.bucket != expected || choice.bucket >= self.buckets.len() {
            return Err(PolicyError::BucketMismatch { expected, got: choice.bucket });
        }
        let b = choice.bucket;
        let estimate = loss_estimates(&choice.probs, g, played, observed)?;
        let q_stat = estimate.q_statistic(&choice.probs);
        let scale = 2f64.powi(b as i32);
        let inst = &mut self.buckets[b];
        exponential_update(&mut inst.weights, inst.gamma / scale, &estimate.values);
        inst.rounds += 1;
        self.round += 1;

        let mut restarted = false;
        if self.schedule == GammaSchedule::Doubling {
            inst.accumulator += 1.0 + q_stat / (2.0 * scale);
            while inst.accumulator > 2f64.powi(inst.doubling_index as i32) {
                inst.doubling_index += 1;
                restarted = true;
            }
            if restarted {
                inst.restarts += 1;
                inst.gamma = doubling_gamma(self.num_actions, b, inst.doubling_index);
                inst.weights.iter_mut().for_each(|w| *w = 1.0);
            }
        }
        Ok(DomUpdate { estimate, q_statistic: q_stat, restarted })
    }
}

fn check_tuning_inputs(num_actions: usize, name: &'static str, value: f64) -> Result<(), PolicyError> {
    if num_actions < 2 {
        return Err(PolicyError::TooFewActions(num_actions));
    }
    if value <= 0.0 || !value.is_finite() {
        return Err(PolicyError::NonPositive { name, value });
    }
    Ok(())
}

fn clip_rate(eta: f64) -> f64 {
    eta.min(1.0)
}

/// `sqrt(2 ln K / Σ_t α_t)` clipped to (0, 1], for symmetric graph sequences.
pub fn tune_eta_symmetric(num_actions: usize, alpha_sum: f64) -> Result<f64, PolicyError> {
    check_tuning_inputs(num_actions, "alpha_sum", alpha_sum)?;
    Ok(clip_rate((2.0 * (num_actions as f64).ln() / alpha_sum).sqrt()))
}

/// `sqrt(2 ln K / Σ_t m_t)` clipped to (0, 1], where `m_t` bounds `mas(G_t)`.
pub fn tune_eta_mas(num_actions: usize, mas_sum: f64) -> Result<f64, PolicyError> {
    check_tuning_inputs(num_actions, "mas_sum", mas_sum)?;
    Ok(clip_rate((2.0 * (num_actions as f64).ln() / mas_sum).sqrt()))
}

/// `(1 - (1-r)^K) / r`, continued by its limit `K` as `r → 0`.
pub fn er_observation_factor(num_actions: usize, r: f64) -> f64 {
    if r < 1e-9 {
        num_actions as f64
    } else {
        (1.0 - (1.0 - r).powi(num_actions as i32)) / r
    }
}

/// `sqrt(2 r ln K / (T (1 - (1-r)^K)))` clipped to (0, 1], for Erdős–Rényi graphs.
pub fn tune_eta_er(num_actions: usize, r: f64, horizon: usize) -> Result<f64, PolicyError> {
    check_tuning_inputs(num_actions, "horizon", horizon as f64)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(PolicyError::NonPositive { name: "density", value: r });
    }
    let denom = horizon as f64 * er_observation_factor(num_actions, r);
    Ok(clip_rate((2.0 * (num_actions as f64).ln() / denom).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reveal(g: &DirectedGraph, played: usize, losses: &[f64]) -> Vec<(usize, f64)> {
        g.observation_set(played).into_iter().map(|i| (i, losses[i])).collect()
    }

    #[test]
    fn q_values_examples() {
        let g = DirectedGraph::from_arcs(3, [(0, 1)]).unwrap();
        let q = q_values(&[0.5, 0.3, 0.2], &g);
        assert_relative_eq!(q[0], 0.5);
        assert_relative_eq!(q[1], 0.8);
        assert_relative_eq!(q[2], 0.2);
        let q = q_values(&[0.1, 0.2, 0.7], &DirectedGraph::complete(3));
        q.iter().for_each(|&x| assert_relative_eq!(x, 1.0, epsilon = 1e-15));
        assert_eq!(q_values(&[0.1, 0.2, 0.7], &DirectedGraph::empty(3)), vec![0.1, 0.2, 0.7]);
    }

    #[test]
    fn q_statistic_examples() {
        let g = DirectedGraph::total_order(4);
        assert_relative_eq!(q_statistic(&[0.5, 0.25, 0.125, 0.125], &g), 2.5, epsilon = 1e-12);
        assert_relative_eq!(q_statistic(&[0.1, 0.6, 0.3], &DirectedGraph::complete(3)), 1.0, epsilon = 1e-12);
        assert_relative_eq!(q_statistic(&[0.1, 0.6, 0.3], &DirectedGraph::empty(3)), 3.0, epsilon = 1e-12);
        // zero-probability coordinates contribute nothing
        assert_relative_eq!(q_statistic(&[0.0, 0.5, 0.5], &DirectedGraph::empty(3)), 2.0);
    }

    #[test]
    fn loss_estimate_examples() {
        let g = DirectedGraph::from_arcs(3, [(0, 1)]).unwrap();
        let p = [0.5, 0.3, 0.2];
        let est = loss_estimates(&p, &g, 0, &[(0, 0.4), (1, 0.6)]).unwrap();
        assert_relative_eq!(est.values[0], 0.8);
        assert_relative_eq!(est.values[1], 0.75);
        assert_eq!(est.values[2], 0.0);

        let clique = DirectedGraph::complete(3);
        let ls = [0.3, 0.9, 0.1];
        let est = loss_estimates(&p, &clique, 2, &reveal(&clique, 2, &ls)).unwrap();
        for i in 0..3 {
            assert_relative_eq!(est.values[i], ls[i], epsilon = 1e-15);
        }
    }

    #[test]
    fn loss_estimate_errors() {
        let g = DirectedGraph::from_arcs(3, [(0, 1)]).unwrap();
        let p = [0.5, 0.3, 0.2];
        assert!(matches!(
            loss_estimates(&p, &g, 0, &[(0, 1.4), (1, 0.6)]),
            Err(PolicyError::LossOutOfRange { .. })
        ));
        assert!(matches!(
            loss_estimates(&p, &g, 0, &[(0, 0.4)]),
            Err(PolicyError::ObservedSetMismatch { .. })
        ));
        assert!(matches!(
            loss_estimates(&p, &g, 0, &[(0, 0.4), (1, 0.1), (2, 0.2)]),
            Err(PolicyError::ObservedSetMismatch { .. })
        ));
    }

    #[test]
    fn exp3set_distribution_examples() {
        let s = Exp3Set::new(4, 0.1).unwrap();
        assert_eq!(s.distribution(), vec![0.25; 4]);
        let s = Exp3Set { eta: 0.1, weights: vec![2.0, 1.0, 1.0], round: 0 };
        assert_eq!(s.distribution(), vec![0.5, 0.25, 0.25]);
    }

    #[test]
    fn exp3set_single_update() {
        let g = DirectedGraph::from_arcs(3, [(0, 1)]).unwrap();
        let mut s = Exp3Set::new(3, 0.1).unwrap();
        // uniform p: q = (1/3, 2/3, 1/3); losses chosen to give ℓ̂ = (0.8, 0.75, 0)
        let est = s.update(&g, 0, &[(0, 0.8 / 3.0), (1, 0.5)]).unwrap();
        assert_relative_eq!(est.values[0], 0.8, epsilon = 1e-12);
        assert_relative_eq!(est.values[1], 0.75, epsilon = 1e-12);
        let raw = [(-0.08f64).exp(), (-0.075f64).exp(), 1.0];
        let expected = normalize(&raw);
        for (a, b) in s.distribution().iter().zip(&expected) {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
        assert_eq!(s.round(), 1);
        assert_eq!(s.weights()[2], 1.0);
    }

    #[test]
    fn exp3set_zero_rate_stays_uniform() {
        let g = DirectedGraph::total_order(3);
        let mut s = Exp3Set::new(3, 0.0).unwrap();
        for t in 0..20 {
            let played = t % 3;
            s.update(&g, played, &reveal(&g, played, &[1.0, 0.5, 0.0])).unwrap();
        }
        assert_eq!(s.distribution(), vec![1.0 / 3.0; 3]);
        assert!(Exp3Set::new(3, 1.5).is_err());
    }

    #[test]
    fn exp3set_unobserved_coordinates_keep_weight() {
        let g = DirectedGraph::empty(3);
        let mut s = Exp3Set::new(3, 0.5).unwrap();
        s.update(&g, 1, &[(1, 1.0)]).unwrap();
        assert_eq!(s.weights()[0], s.weights()[2]);
        assert!(s.weights()[1] < s.weights()[0]);
    }

    #[test]
    fn bucket_index() {
        assert_eq!(bucket_of(1), 0);
        assert_eq!(bucket_of(5), 2);
        assert_eq!(bucket_of(7), 2);
        assert_eq!(bucket_of(8), 3);
    }

    #[test]
    fn exp3dom_choice_examples() {
        let g = DirectedGraph::star(4, 0).unwrap();
        let dom = Exp3Dom::new(4, GammaSchedule::Fixed(vec![0.2, 0.2, 0.2])).unwrap();
        let c = dom.choose(&g).unwrap();
        assert_eq!(c.bucket, 0);
        assert_eq!(c.dominating_set, vec![0]);
        let expected = [0.4, 0.2, 0.2, 0.2];
        for (a, b) in c.probs.iter().zip(expected) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }

        let e = DirectedGraph::empty(4);
        let dom = Exp3Dom::new(4, GammaSchedule::Fixed(vec![1.0, 1.0, 1.0])).unwrap();
        let c = dom.choose_with(&e, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(c.bucket, 2);
        assert_eq!(c.probs, vec![0.25; 4]);

        let g = DirectedGraph::from_arcs(4, [(0, 1), (0, 2)]).unwrap();
        let c = dom.choose(&g).unwrap();
        assert_eq!(c.dominating_set, vec![0, 3]);
        assert_eq!(c.probs, vec![0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn exp3dom_rejects_bad_inputs() {
        let g = DirectedGraph::empty(4);
        let dom = Exp3Dom::new(4, GammaSchedule::Doubling).unwrap();
        assert_eq!(dom.choose_with(&g, vec![0, 1]), Err(PolicyError::NotDominating));
        assert!(Exp3Dom::new(4, GammaSchedule::Fixed(vec![0.2])).is_err());
        assert!(Exp3Dom::new(4, GammaSchedule::Fixed(vec![0.2, 0.0, 0.1])).is_err());

        let mut dom = dom;
        let mut c = dom.choose(&g).unwrap();
        c.bucket = 0;
        let err = dom.update(&g, &c, 0, &[(0, 0.5)]).unwrap_err();
        assert_eq!(err, PolicyError::BucketMismatch { expected: 2, got: 0 });
    }

    #[test]
    fn doubling_schedule_values() {
        assert_eq!(doubling_gamma(4, 0, 0), 1.0);
        assert_relative_eq!(doubling_gamma(3, 1, 3), (2.0 * 3f64.ln() / 8.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(doubling_gamma(3, 1, 3), 0.524, epsilon = 5e-4);
        assert_eq!(doubling_gamma(1, 0, 5), 1.0);
    }

    #[test]
    fn exp3dom_restart_shrinks_gamma_and_resets_weights() {
        let g = DirectedGraph::total_order(4);
        let mut dom = Exp3Dom::new(4, GammaSchedule::Doubling).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen_restart = false;
        for _ in 0..200 {
            let before = dom.buckets()[0].gamma;
            let c = dom.choose(&g).unwrap();
            let played = sample_action(&c.probs, &mut rng);
            let u = dom.update(&g, &c, played, &reveal(&g, played, &[0.9, 0.1, 0.5, 0.3])).unwrap();
            let inst = &dom.buckets()[0];
            if u.restarted {
                seen_restart = true;
                assert!(inst.gamma < before);
                assert!(inst.weights.iter().all(|&w| w == 1.0));
                assert!(inst.accumulator <= 2f64.powi(inst.doubling_index as i32));
            }
        }
        assert!(seen_restart);
        assert!(dom.buckets()[0].gamma < 1.0);
    }

    #[test]
    fn fixed_schedule_never_restarts() {
        let g = DirectedGraph::empty(2);
        let mut dom = Exp3Dom::new(2, GammaSchedule::Fixed(vec![0.5, 0.5])).unwrap();
        for t in 0..50 {
            let c = dom.choose(&g).unwrap();
            let played = t % 2;
            let u = dom.update(&g, &c, played, &[(played, 0.5)]).unwrap();
            assert!(!u.restarted);
        }
        assert_eq!(dom.buckets()[1].gamma, 0.5);
        assert_eq!(dom.buckets()[1].rounds, 50);
    }

    #[test]
    fn tuning_examples() {
        assert_relative_eq!(tune_eta_symmetric(4, 100.0).unwrap(), 0.16651, epsilon = 1e-5);
        assert_relative_eq!(tune_eta_symmetric(4, 2.0 * 4f64.ln()).unwrap(), 1.0, epsilon = 1e-15);
        assert!(tune_eta_symmetric(4, 1e6).unwrap() < tune_eta_symmetric(4, 1e4).unwrap());
        assert!(tune_eta_symmetric(1, 10.0).is_err());
        assert!(tune_eta_symmetric(3, 0.0).is_err());

        assert_relative_eq!(tune_eta_er(5, 1.0, 100).unwrap(), (2.0 * 5f64.ln() / 100.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(tune_eta_er(5, 0.0, 100).unwrap(), (2.0 * 5f64.ln() / 500.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(tune_eta_er(5, 1e-12, 100).unwrap(), (2.0 * 5f64.ln() / 500.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(tune_eta_er(2, 0.5, 100).unwrap(), 0.0961, epsilon = 1e-4);
        assert_relative_eq!(tune_eta_mas(4, 100.0).unwrap(), tune_eta_symmetric(4, 100.0).unwrap());
    }

    #[test]
    fn sampling_follows_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = [0.2, 0.0, 0.8];
        let mut counts = [0usize; 3];
        for _ in 0..20_000 {
            counts[sample_action(&p, &mut rng)] += 1;
        }
        assert_eq!(counts[1], 0);
        assert!((counts[0] as f64 / 20_000.0 - 0.2).abs() < 0.02);
    }

    #[test]
    fn state_snapshot_resumes_identically() {
        let g = DirectedGraph::from_arcs(3, [(0, 1), (2, 0)]).unwrap();
        let mut a = Exp3Dom::new(3, GammaSchedule::Doubling).unwrap();
        let c = a.choose(&g).unwrap();
        a.update(&g, &c, 0, &reveal(&g, 0, &[0.3, 0.2, 0.1])).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        let mut b: Exp3Dom = serde_json::from_str(&json).unwrap();
        assert_eq!(a, b);
        let c = a.choose(&g).unwrap();
        a.update(&g, &c, 2, &reveal(&g, 2, &[0.3, 0.2, 0.1])).unwrap();
        b.update(&g, &c, 2, &reveal(&g, 2, &[0.3, 0.2, 0.1])).unwrap();
        assert_eq!(a, b);

        let s = Exp3Set::new(2, 0.5).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v, serde_json::json!({"eta": 0.5, "weights": [1.0, 1.0], "round": 0}));
    }
}
