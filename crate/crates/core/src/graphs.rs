//! Directed observation graphs and their combinatorial statistics.
//!
//! Node `i` observing node `j` is stored as the arc `(i, j)`. Self-observation
//! is never stored as an arc but is always part of the observation set
//! `S_i = {i} ∪ {j : (i, j) is an arc}`.
//!
//! Nodes are 0-indexed in the API. The text literal format is 1-indexed:
//!
//! ```text
//! # three nodes, node 1 also reveals node 2
//! K=3
//! 1 2
//! ```

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GraphError;

/// Default cap on `K` for [`DirectedGraph::independence_number_exact`].
pub const ALPHA_EXACT_CAP: usize = 24;
/// Default cap on `K` for [`DirectedGraph::mas_exact`].
pub const MAS_EXACT_CAP: usize = 16;
/// Default cap on `K` for [`DirectedGraph::domination_number_exact`].
pub const GAMMA_EXACT_CAP: usize = 20;

/// A directed graph on nodes `0..K` without self-loops.
#[derive(Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    k: usize,
    words: usize,
    bits: Vec<u64>,
    out_nbrs: Vec<Vec<usize>>,
    in_nbrs: Vec<Vec<usize>>,
}

impl DirectedGraph {
    /// The graph on `k` nodes with no arcs (the bandit observation system).
    pub fn empty(k: usize) -> Self {
        let words = k.div_ceil(64).max(1);
        Self {
            k,
            words,
            bits: vec![0; k * words],
            out_nbrs: vec![Vec::new(); k],
            in_nbrs: vec![Vec::new(); k],
        }
    }

    /// Builds a graph from arcs `(from, to)`. Self-loops are dropped, duplicates merged.
    pub fn from_arcs<I>(k: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(k);
        for (i, j) in arcs {
            if i >= k || j >= k {
                return Err(GraphError::NodeOutOfRange {
                    node: i.max(j),
                    num_nodes: k,
                });
            }
            g.insert_arc(i, j);
        }
        g.sort_adjacency();
        Ok(g)
    }

    /// Builds a graph from its observation system `{S_i}`.
    ///
    /// Every `sets[i]` must contain `i`.
    pub fn from_observation_sets(sets: &[Vec<usize>]) -> Result<Self, GraphError> {
        let k = sets.len();
        let mut g = Self::empty(k);
        for (i, s) in sets.iter().enumerate() {
            if !s.contains(&i) {
                return Err(GraphError::MissingSelfObservation { node: i });
            }
            for &j in s {
                if j >= k {
                    return Err(GraphError::NodeOutOfRange { node: j, num_nodes: k });
                }
                g.insert_arc(i, j);
            }
        }
        g.sort_adjacency();
        Ok(g)
    }

    /// Complete directed graph (the full-information observation system).
    pub fn complete(k: usize) -> Self {
        let mut g = Self::empty(k);
        for i in 0..k {
            for j in 0..k {
                g.insert_arc(i, j);
            }
        }
        g
    }

    /// Total order: node `j` observes every `i < j`.
    ///
    /// With 1-indexed nodes this is the arc set `{(j, i) : j > i}`, so the
    /// highest node observes everybody and the lowest node only itself.
    pub fn total_order(k: usize) -> Self {
        let mut g = Self::empty(k);
        for i in 0..k {
            for j in (i + 1)..k {
                g.insert_arc(j, i);
            }
        }
        g.sort_adjacency();
        g
    }

    /// Symmetric star: `center` and every leaf observe each other.
    pub fn star(k: usize, center: usize) -> Result<Self, GraphError> {
        if center >= k {
            return Err(GraphError::NodeOutOfRange { node: center, num_nodes: k });
        }
        let arcs = (0..k)
            .filter(|&j| j != center)
            .flat_map(|j| [(center, j), (j, center)]);
        Self::from_arcs(k, arcs)
    }

    /// Directed cycle `0 → 1 → … → k-1 → 0`.
    pub fn directed_cycle(k: usize) -> Self {
        let arcs = (0..k).map(|i| (i, (i + 1) % k));
        Self::from_arcs(k, arcs).expect("cycle arcs are in range")
    }

    /// Disjoint union of symmetric cliques with the given sizes.
    pub fn disjoint_cliques(sizes: &[usize]) -> Self {
        let k = sizes.iter().sum();
        let mut g = Self::empty(k);
        let mut start = 0;
        for &s in sizes {
            for i in start..start + s {
                for j in start..start + s {
                    g.insert_arc(i, j);
                }
            }
            start += s;
        }
        g
    }

    /// Directed Erdős–Rényi graph: each ordered pair `(i, j)`, `i != j`, is an arc
    /// independently with probability `r`.
    ///
    /// Pairs are visited row-major (`i` outer, `j` inner) with one uniform draw per
    /// pair, so a seeded generator yields the same graph on every platform.
    pub fn erdos_renyi<R: Rng + ?Sized>(k: usize, r: f64, rng: &mut R) -> Result<Self, GraphError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(GraphError::InvalidDensity(r));
        }
        let mut g = Self::empty(k);
        for i in 0..k {
            for j in 0..k {
                if i != j && rng.random::<f64>() < r {
                    g.insert_arc(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Adds the reverse of every arc.
    pub fn reciprocate(&self) -> Self {
        let mut g = self.clone();
        for (i, j) in self.arcs() {
            g.insert_arc(j, i);
        }
        g.sort_adjacency();
        g
    }

    /// True iff every arc has its reverse.
    pub fn is_symmetric(&self) -> bool {
        self.arcs().all(|(i, j)| self.has_arc(j, i))
    }

    fn insert_arc(&mut self, i: usize, j: usize) {
        if i == j || self.has_arc(i, j) {
            return;
        }
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
        self.out_nbrs[i].push(j);
        self.in_nbrs[j].push(i);
    }

    fn sort_adjacency(&mut self) {
        self.out_nbrs.iter_mut().for_each(|v| v.sort_unstable());
        self.in_nbrs.iter_mut().for_each(|v| v.sort_unstable());
    }

    pub fn num_nodes(&self) -> usize {
        self.k
    }

    pub fn num_arcs(&self) -> usize {
        self.out_nbrs.iter().map(Vec::len).sum()
    }

    /// O(1) arc membership. Always false for `i == j`.
    #[inline]
    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        i != j && self.bits[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }

    /// True iff playing `i` reveals the loss of `j` (includes `i == j`).
    #[inline]
    pub fn observes(&self, i: usize, j: usize) -> bool {
        i == j || self.has_arc(i, j)
    }

    /// Nodes `j != i` with an arc `(i, j)`, ascending.
    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_nbrs[i]
    }

    /// Nodes `j != i` with an arc `(j, i)`, ascending.
    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_nbrs[i]
    }

    pub fn outdegree(&self, i: usize) -> usize {
        self.out_nbrs[i].len()
    }

    pub fn indegree(&self, i: usize) -> usize {
        self.in_nbrs[i].len()
    }

    /// Observation set `S_i`, ascending and always containing `i`.
    pub fn observation_set(&self, i: usize) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.out_nbrs[i].len() + 1);
        let mut placed = false;
        for &j in &self.out_nbrs[i] {
            if !placed && j > i {
                s.push(i);
                placed = true;
            }
            s.push(j);
        }
        if !placed {
            s.push(i);
        }
        s
    }

    /// All observation sets `{S_i}`.
    pub fn observation_sets(&self) -> Vec<Vec<usize>> {
        (0..self.k).map(|i| self.observation_set(i)).collect()
    }

    /// All arcs in row-major order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_nbrs
            .iter()
            .enumerate()
            .flat_map(|(i, outs)| outs.iter().map(move |&j| (i, j)))
    }

    fn check_cap(&self, op: &'static str, cap: usize) -> Result<(), GraphError> {
        if self.k > cap {
            Err(GraphError::CapExceeded { op, num_nodes: self.k, cap })
        } else {
            Ok(())
        }
    }

    /// Out-neighborhood bitmask per node (excluding self). Requires `K <= 32`.
    fn out_masks(&self) -> Vec<u32> {
        debug_assert!(self.k <= 32);
        self.out_nbrs
            .iter()
            .map(|outs| outs.iter().fold(0u32, |m, &j| m | (1 << j)))
            .collect()
    }

    fn in_masks(&self) -> Vec<u32> {
        debug_assert!(self.k <= 32);
        self.in_nbrs
            .iter()
            .map(|ins| ins.iter().fold(0u32, |m, &j| m | (1 << j)))
            .collect()
    }

    /// Independence number of the orientation-ignored graph, with the default cap.
    pub fn independence_number_exact(&self) -> Result<usize, GraphError> {
        self.independence_number_exact_capped(ALPHA_EXACT_CAP)
    }

    /// Independence number by branch and bound; `cap` must not exceed 32.
    pub fn independence_number_exact_capped(&self, cap: usize) -> Result<usize, GraphError> {
        self.check_cap("independence_number_exact", cap.min(32))?;
        if self.k == 0 {
            return Ok(0);
        }
        let out = self.out_masks();
        let inn = self.in_masks();
        let adj: Vec<u32> = out.iter().zip(&inn).map(|(o, i)| o | i).collect();
        let all = if self.k == 32 { u32::MAX } else { (1u32 << self.k) - 1 };
        Ok(max_independent(all, &adj) as usize)
    }

    /// Size of a largest node set inducing an acyclic subgraph, with the default cap.
    pub fn mas_exact(&self) -> Result<usize, GraphError> {
        self.mas_exact_capped(MAS_EXACT_CAP)
    }

    /// Exact `mas` by dynamic programming over subsets: a nonempty set is acyclic
    /// iff it has a node with no in-arc from the rest and the rest is acyclic.
    pub fn mas_exact_capped(&self, cap: usize) -> Result<usize, GraphError> {
        self.check_cap("mas_exact", cap.min(24))?;
        let inn = self.in_masks();
        let n = 1usize << self.k;
        let mut acyclic = vec![false; n];
        acyclic[0] = true;
        let mut best = 0;
        for s in 1..n {
            let set = s as u32;
            let mut rest = set;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if inn[v] & set == 0 && acyclic[s & !(1 << v)] {
                    acyclic[s] = true;
                    best = best.max(set.count_ones() as usize);
                    break;
                }
            }
        }
        Ok(best)
    }

    /// Constructive acyclic set of size at least `Σ_i p_i / (p_i + Σ_{j→i} p_j)`.
    ///
    /// Repeatedly picks the surviving node minimizing its own plus surviving
    /// in-neighbors' mass (lowest index on ties), keeps it, and deletes it together
    /// with its surviving in-neighbors. Returned nodes are in pick order.
    pub fn mas_greedy_witness(&self, p: &[f64]) -> Vec<usize> {
        assert_eq!(p.len(), self.k, "distribution length must equal K");
        let mut alive = vec![true; self.k];
        let mut remaining = self.k;
        let mut picked = Vec::new();
        while remaining > 0 {
            let mut best: Option<(usize, f64)> = None;
            for i in (0..self.k).filter(|&i| alive[i]) {
                let mass = p[i]
                    + self.in_nbrs[i]
                        .iter()
                        .filter(|&&j| alive[j])
                        .map(|&j| p[j])
                        .sum::<f64>();
                if best.is_none_or(|(_, m)| mass < m) {
                    best = Some((i, mass));
                }
            }
            let (v, _) = best.expect("some node is alive");
            picked.push(v);
            alive[v] = false;
            remaining -= 1;
            for &j in &self.in_nbrs[v] {
                if alive[j] {
                    alive[j] = false;
                    remaining -= 1;
                }
            }
        }
        picked
    }

    /// True iff the subgraph induced by `nodes` has no directed cycle.
    pub fn induces_acyclic(&self, nodes: &[usize]) -> bool {
        let mut member = vec![false; self.k];
        for &v in nodes {
            member[v] = true;
        }
        let mut indeg: Vec<usize> = (0..self.k)
            .map(|v| {
                if member[v] {
                    self.in_nbrs[v].iter().filter(|&&u| member[u]).count()
                } else {
                    0
                }
            })
            .collect();
        let mut stack: Vec<usize> = nodes.iter().copied().filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &self.out_nbrs[v] {
                if member[w] {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        stack.push(w);
                    }
                }
            }
        }
        seen == nodes.len()
    }

    /// Greedy Set Cover over `{S_i}`: repeatedly pick the node whose observation
    /// set covers the most uncovered nodes, lowest index on ties.
    pub fn greedy_dominating_set(&self) -> Vec<usize> {
        let mut covered = vec![false; self.k];
        let mut uncovered = self.k;
        let mut picked = Vec::new();
        while uncovered > 0 {
            let mut best = (0, 0);
            for i in 0..self.k {
                let gain = usize::from(!covered[i])
                    + self.out_nbrs[i].iter().filter(|&&j| !covered[j]).count();
                if gain > best.1 {
                    best = (i, gain);
                }
            }
            let v = best.0;
            picked.push(v);
            for j in std::iter::once(v).chain(self.out_nbrs[v].iter().copied()) {
                if !covered[j] {
                    covered[j] = true;
                    uncovered -= 1;
                }
            }
        }
        picked
    }

    /// True iff every node outside `set` is observed by some node of `set`.
    pub fn is_dominating_set(&self, set: &[usize]) -> bool {
        let mut covered = vec![false; self.k];
        for &i in set {
            if i >= self.k {
                return false;
            }
            covered[i] = true;
            for &j in &self.out_nbrs[i] {
                covered[j] = true;
            }
        }
        covered.into_iter().all(|c| c)
    }

    /// Domination number with the default cap.
    pub fn domination_number_exact(&self) -> Result<usize, GraphError> {
        self.domination_number_exact_capped(GAMMA_EXACT_CAP)
    }

    /// Smallest dominating set size, searching subsets in increasing size.
    pub fn domination_number_exact_capped(&self, cap: usize) -> Result<usize, GraphError> {
        self.check_cap("domination_number_exact", cap.min(32))?;
        if self.k == 0 {
            return Ok(0);
        }
        let closed: Vec<u32> = self
            .out_masks()
            .into_iter()
            .enumerate()
            .map(|(i, m)| m | (1 << i))
            .collect();
        let all = if self.k == 32 { u32::MAX } else { (1u32 << self.k) - 1 };
        for size in 1..=self.k {
            if covers_with(&closed, all, 0, size) {
                return Ok(size);
            }
        }
        unreachable!("the whole node set dominates")
    }

    /// Exact statistics where within caps, greedy values otherwise.
    pub fn stats(&self) -> GraphStats {
        let alpha = self.independence_number_exact().ok();
        GraphStats {
            independence_number: alpha,
            domination_number: self.domination_number_exact().ok(),
            mas: self.mas_exact().ok(),
            greedy_dominating_set_size: self.greedy_dominating_set().len(),
            mas_witness_size: {
                let k = self.k.max(1) as f64;
                self.mas_greedy_witness(&vec![1.0 / k; self.k]).len()
            },
            indegrees: (0..self.k).map(|i| self.indegree(i)).collect(),
            outdegrees: (0..self.k).map(|i| self.outdegree(i)).collect(),
            symmetric: self.is_symmetric(),
        }
    }

    /// Parses the `K=<int>` plus `i j` per line literal (1-indexed, `#` comments).
    pub fn parse_literal(text: &str) -> Result<Self, GraphError> {
        parse_block(text.lines().enumerate().map(|(n, l)| (n + 1, l)))
    }

    /// Renders the graph in the literal format.
    pub fn to_literal(&self) -> String {
        let mut s = format!("K={}\n", self.k);
        for (i, j) in self.arcs() {
            s.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        s
    }
}

/// Parses concatenated graph literals separated by `---` lines.
pub fn parse_graph_sequence(text: &str) -> Result<Vec<DirectedGraph>, GraphError> {
    let mut graphs = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim() == "---" {
            if block.iter().any(|(_, l)| !strip_comment(l).is_empty()) {
                graphs.push(parse_block(block.drain(..))?);
            }
            block.clear();
        } else {
            block.push((n + 1, line));
        }
    }
    if block.iter().any(|(_, l)| !strip_comment(l).is_empty()) {
        graphs.push(parse_block(block.into_iter())?);
    }
    Ok(graphs)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_block<'a, I>(lines: I) -> Result<DirectedGraph, GraphError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut k: Option<usize> = None;
    let mut arcs = Vec::new();
    let mut last_line = 0;
    for (lineno, raw) in lines {
        last_line = lineno;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| GraphError::Parse { line: lineno, msg };
        match k {
            None => {
                let rest = line
                    .strip_prefix("K=")
                    .or_else(|| line.strip_prefix("K ="))
                    .ok_or_else(|| err(format!("expected `K=<int>`, found `{line}`")))?;
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("invalid node count `{}`", rest.trim())))?;
                if n == 0 {
                    return Err(err("K must be positive".into()));
                }
                k = Some(n);
            }
            Some(n) => {
                let mut parts = line.split_whitespace();
                let mut node = |name: &str| -> Result<usize, GraphError> {
                    let tok = parts
                        .next()
                        .ok_or_else(|| err(format!("missing {name} node")))?;
                    let v: usize = tok
                        .parse()
                        .map_err(|_| err(format!("invalid {name} node `{tok}`")))?;
                    if v == 0 || v > n {
                        return Err(err(format!("node {v} outside 1..={n}")));
                    }
                    Ok(v - 1)
                };
                let i = node("source")?;
                let j = node("target")?;
                if parts.next().is_some() {
                    return Err(err("expected exactly two nodes per arc line".into()));
                }
                if i == j {
                    return Err(err(format!("self-loop {} {} (self-observation is implicit)", i + 1, j + 1)));
                }
                arcs.push((i, j));
            }
        }
    }
    let k = k.ok_or(GraphError::Parse {
        line: last_line,
        msg: "missing `K=<int>` header".into(),
    })?;
    DirectedGraph::from_arcs(k, arcs)
}

/// Largest independent set inside `cand`: branch on the lowest candidate.
fn max_independent(cand: u32, adj: &[u32]) -> u32 {
    if cand == 0 {
        return 0;
    }
    let v = cand.trailing_zeros() as usize;
    let nv = adj[v] & cand;
    let without_v = cand & !(1 << v);
    if nv == 0 {
        return 1 + max_independent(without_v, adj);
    }
    // The exclude branch can return at most |cand| - 1.
    let take = 1 + max_independent(without_v & !nv, adj);
    if take >= cand.count_ones() - 1 {
        return take;
    }
    take.max(max_independent(without_v, adj))
}

/// Can `size` more picks, together with `covered`, cover `all`?
fn covers_with(closed: &[u32], all: u32, covered: u32, size: usize) -> bool {
    if covered == all {
        return true;
    }
    if size == 0 {
        return false;
    }
    // The lowest uncovered node must be dominated by one of the remaining picks;
    // branching only over its dominators keeps the search small.
    let target = (!covered & all).trailing_zeros() as usize;
    (0..closed.len()).any(|i| {
        closed[i] & (1 << target) != 0 && covers_with(closed, all, covered | closed[i], size - 1)
    })
}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectedGraph")
            .field("num_nodes", &self.k)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    num_nodes: usize,
    arcs: Vec<(usize, usize)>,
}

impl Serialize for DirectedGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            num_nodes: self.k,
            arcs: self.arcs().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DirectedGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(deserializer)?;
        DirectedGraph::from_arcs(repr.num_nodes, repr.arcs).map_err(serde::de::Error::custom)
    }
}

/// Summary statistics of one observation graph. Exact values are `None`
/// when the graph exceeds the corresponding oracle cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub independence_number: Option<usize>,
    pub domination_number: Option<usize>,
    pub mas: Option<usize>,
    /// Upper bound on the domination number.
    pub greedy_dominating_set_size: usize,
    /// Lower bound on `mas` from the greedy witness under uniform mass.
    pub mas_witness_size: usize,
    pub indegrees: Vec<usize>,
    pub outdegrees: Vec<usize>,
    pub symmetric: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arcs(g: &DirectedGraph) -> Vec<(usize, usize)> {
        g.arcs().collect()
    }

    #[test]
    fn observation_sets_round_trip() {
        let g = DirectedGraph::from_observation_sets(&[vec![0, 1], vec![1]]).unwrap();
        assert_eq!(arcs(&g), vec![(0, 1)]);
        assert_eq!(g.observation_sets(), vec![vec![0, 1], vec![1]]);

        let bandit = DirectedGraph::from_observation_sets(&[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(bandit.num_arcs(), 0);

        let full = vec![vec![0, 1, 2]; 3];
        let expert = DirectedGraph::from_observation_sets(&full).unwrap();
        assert_eq!(expert.num_arcs(), 6);
        assert_eq!(expert.observation_sets(), full);
    }

    #[test]
    fn observation_set_missing_self_is_rejected() {
        let err = DirectedGraph::from_observation_sets(&[vec![1], vec![1]]).unwrap_err();
        assert!(matches!(err, GraphError::MissingSelfObservation { node: 0 }));
    }

    #[test]
    fn total_order_arcs() {
        assert_eq!(arcs(&DirectedGraph::total_order(3)), vec![(1, 0), (2, 0), (2, 1)]);
        assert_eq!(DirectedGraph::total_order(1).num_arcs(), 0);
        let g = DirectedGraph::total_order(4);
        assert_eq!(g.num_arcs(), 6);
        assert_eq!(g.outdegree(3), 3);
        assert_eq!(g.outdegree(0), 0);
    }

    #[test]
    fn erdos_renyi_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(DirectedGraph::erdos_renyi(5, 1.0, &mut rng).unwrap(), DirectedGraph::complete(5));
        assert_eq!(DirectedGraph::erdos_renyi(5, 0.0, &mut rng).unwrap().num_arcs(), 0);
        assert!(DirectedGraph::erdos_renyi(5, 1.5, &mut rng).is_err());
    }

    #[test]
    fn erdos_renyi_mean_arc_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 10_000;
        let total: usize = (0..n)
            .map(|_| DirectedGraph::erdos_renyi(10, 0.5, &mut rng).unwrap().num_arcs())
            .sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 45.0).abs() < 1.0, "mean arc count {mean}");
    }

    #[test]
    fn reciprocate_and_symmetry() {
        let g = DirectedGraph::total_order(3).reciprocate();
        assert_eq!(g, DirectedGraph::complete(3));
        assert!(g.is_symmetric());
        assert_eq!(DirectedGraph::empty(4).reciprocate(), DirectedGraph::empty(4));
        assert!(!DirectedGraph::total_order(2).is_symmetric());
        assert!(DirectedGraph::empty(3).is_symmetric());
    }

    #[test]
    fn independence_number_examples() {
        assert_eq!(DirectedGraph::complete(6).independence_number_exact().unwrap(), 1);
        assert_eq!(DirectedGraph::empty(7).independence_number_exact().unwrap(), 7);
        assert_eq!(DirectedGraph::directed_cycle(5).independence_number_exact().unwrap(), 2);
        assert_eq!(DirectedGraph::total_order(5).independence_number_exact().unwrap(), 1);
    }

    #[test]
    fn exact_oracles_reject_large_graphs() {
        let g = DirectedGraph::empty(25);
        assert!(matches!(
            g.independence_number_exact(),
            Err(GraphError::CapExceeded { cap: 24, .. })
        ));
        assert!(DirectedGraph::empty(17).mas_exact().is_err());
        assert!(DirectedGraph::empty(21).domination_number_exact().is_err());
        let msg = g.independence_number_exact().unwrap_err().to_string();
        assert!(msg.contains("use a bound instead"), "{msg}");
    }

    #[test]
    fn mas_examples() {
        assert_eq!(DirectedGraph::total_order(7).mas_exact().unwrap(), 7);
        assert_eq!(DirectedGraph::directed_cycle(3).mas_exact().unwrap(), 2);
        assert_eq!(DirectedGraph::directed_cycle(5).reciprocate().mas_exact().unwrap(), 2);
        assert_eq!(DirectedGraph::empty(7).mas_exact().unwrap(), 7);
    }

    #[test]
    fn mas_witness_examples() {
        let w = DirectedGraph::complete(5).mas_greedy_witness(&[0.2; 5]);
        assert_eq!(w.len(), 1);

        let g = DirectedGraph::total_order(4);
        let w = g.mas_greedy_witness(&[0.5, 0.25, 0.125, 0.125]);
        assert!(w.len() >= 3);
        assert!(g.induces_acyclic(&w));

        let mut w = DirectedGraph::empty(4).mas_greedy_witness(&[0.1, 0.2, 0.3, 0.4]);
        w.sort();
        assert_eq!(w, vec![0, 1, 2, 3]);
    }

    #[test]
    fn acyclicity_check() {
        let c = DirectedGraph::directed_cycle(3);
        assert!(!c.induces_acyclic(&[0, 1, 2]));
        assert!(c.induces_acyclic(&[0, 1]));
        assert!(c.induces_acyclic(&[]));
    }

    #[test]
    fn greedy_dominating_set_examples() {
        assert_eq!(DirectedGraph::star(6, 2).unwrap().greedy_dominating_set(), vec![2]);
        assert_eq!(DirectedGraph::total_order(5).greedy_dominating_set(), vec![4]);
        assert_eq!(DirectedGraph::empty(4).greedy_dominating_set(), vec![0, 1, 2, 3]);
        // ties broken toward the lowest index
        assert_eq!(DirectedGraph::disjoint_cliques(&[2, 2]).greedy_dominating_set(), vec![0, 2]);
    }

    #[test]
    fn domination_number_examples() {
        assert_eq!(DirectedGraph::star(6, 0).unwrap().domination_number_exact().unwrap(), 1);
        assert_eq!(DirectedGraph::empty(5).domination_number_exact().unwrap(), 5);
        assert_eq!(DirectedGraph::directed_cycle(4).domination_number_exact().unwrap(), 2);
        assert!(DirectedGraph::directed_cycle(4).is_dominating_set(&[0, 2]));
        assert!(!DirectedGraph::directed_cycle(4).is_dominating_set(&[0, 1]));
    }

    #[test]
    fn literal_round_trip_and_errors() {
        let g = DirectedGraph::parse_literal("# comment\nK=3\n1 2  # trailing\n\n3 1\n").unwrap();
        assert_eq!(arcs(&g), vec![(0, 1), (2, 0)]);
        assert_eq!(DirectedGraph::parse_literal(&g.to_literal()).unwrap(), g);

        let err = DirectedGraph::parse_literal("K=3\n1 4\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err}");
        assert!(DirectedGraph::parse_literal("1 2\n").is_err());
        assert!(DirectedGraph::parse_literal("K=2\n1 1\n").is_err());
        assert!(DirectedGraph::parse_literal("").is_err());
    }

    #[test]
    fn graph_sequence_blocks() {
        let text = "K=2\n1 2\n---\nK=2\n---\n# only a comment\n---\nK=3\n3 1\n";
        let gs = parse_graph_sequence(text).unwrap();
        assert_eq!(gs.len(), 3);
        assert_eq!(arcs(&gs[0]), vec![(0, 1)]);
        assert_eq!(gs[1].num_arcs(), 0);
        assert_eq!(arcs(&gs[2]), vec![(2, 0)]);
    }

    #[test]
    fn serde_shape() {
        let g = DirectedGraph::total_order(3);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"num_nodes":3,"arcs":[[1,0],[2,0],[2,1]]}"#);
        let back: DirectedGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn stats_of_small_graphs() {
        let s = DirectedGraph::empty(7).stats();
        assert_eq!(s.independence_number, Some(7));
        assert_eq!(s.domination_number, Some(7));
        assert_eq!(s.mas, Some(7));
        let s = DirectedGraph::total_order(5).stats();
        assert_eq!(s.independence_number, Some(1));
        assert_eq!(s.mas, Some(5));
        assert_eq!(s.domination_number, Some(1));
        assert!(!s.symmetric);
    }
}
