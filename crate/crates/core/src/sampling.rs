//! MCMC sampling of homomorphisms from the k-chain motif into a network.
//!
//! A homomorphism of the k-chain is a k-walk `x(1), ..., x(k)` with
//! `A(x(i), x(i+1)) > 0`; an injective one is a k-path. Three base chains
//! are provided (exact pivot, approximate pivot, Glauber) plus the
//! rejection wrapper that only reports injective states. Brute-force
//! enumerators give the stationary distributions for small networks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Network;
use crate::rng::Rng;

/// The path motif on `k` nodes with edges `i -> i+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainMotif {
    k: usize,
}

impl ChainMotif {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::param("k", format!("chain motif needs at least 2 nodes, got {k}")));
        }
        Ok(ChainMotif { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Adjacency of the motif: `A_F(a, b) = 1` iff `b = a + 1`.
    pub fn adjacency(&self, a: usize, b: usize) -> bool {
        b == a + 1 && b < self.k
    }
}

/// A k-walk in a network, stored as its node sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Homomorphism(pub Vec<usize>);

impl Homomorphism {
    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// True when all nodes are distinct (a k-path).
    pub fn is_injective(&self) -> bool {
        let x = &self.0;
        if x.len() <= 16 {
            (0..x.len()).all(|i| !x[i + 1..].contains(&x[i]))
        } else {
            let mut s = x.clone();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        }
    }

    /// True when every consecutive pair is adjacent in `g`.
    pub fn is_valid(&self, g: &Network) -> bool {
        self.0.iter().all(|&u| u < g.n()) && self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    /// Product of the chain weights `A(x(i), x(i+1))`.
    pub fn weight(&self, g: &Network) -> f64 {
        self.0.windows(2).map(|w| g.weight(w[0], w[1])).product()
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum McmcMode {
    PivotExact,
    PivotApprox,
    Glauber,
}

impl McmcMode {
    pub fn as_str(self) -> &'static str {
        match self {
            McmcMode::PivotExact => "pivot",
            McmcMode::PivotApprox => "pivotapprox",
            McmcMode::Glauber => "glauber",
        }
    }
}

impl FromStr for McmcMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pivot" | "pivotexact" | "exact" => Ok(McmcMode::PivotExact),
            "pivotapprox" | "approx" => Ok(McmcMode::PivotApprox),
            "glauber" => Ok(McmcMode::Glauber),
            _ => Err(Error::param("mode", format!("unknown MCMC mode `{s}` (pivot, pivotapprox, glauber)"))),
        }
    }
}

impl fmt::Display for McmcMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub mode: McmcMode,
    /// Only report k-paths.
    pub injective: bool,
    /// Cap on consecutive non-injective states before giving up.
    pub max_rejections: usize,
}

impl SamplerConfig {
    pub fn new(mode: McmcMode) -> Self {
        SamplerConfig {
            mode,
            injective: false,
            max_rejections: 100_000,
        }
    }

    pub fn injective(mut self, injective: bool) -> Self {
        self.injective = injective;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_rejections == 0 {
            return Err(Error::param("max_rejections", "must be at least 1"));
        }
        Ok(())
    }
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self::new(McmcMode::PivotApprox)
    }
}

/// Weighted walk counts `R_j = A^j 1` for `j = 0..k`, each level rescaled
/// to a maximum of one so long chains do not overflow.
///
/// `R_{k-1}(u)` is proportional to the total weight of homomorphisms with
/// `x(1) = u`, and `A(u, w) R_{k-i}(w)` is proportional to the probability
/// that `x(i) = w` given `x(i-1) = u` under the homomorphism density.
#[derive(Debug, Clone)]
pub struct WalkCounts {
    levels: Vec<Vec<f64>>,
}

impl WalkCounts {
    pub fn new(g: &Network, k: usize) -> Self {
        let n = g.n();
        let mut levels = vec![vec![1.0; n]];
        for j in 1..k {
            let prev = &levels[j - 1];
            let mut next: Vec<f64> = (0..n)
                .map(|u| {
                    g.neighbors(u)
                        .iter()
                        .zip(g.neighbor_weights(u))
                        .map(|(&v, &w)| w * prev[v])
                        .sum()
                })
                .collect();
            let m = next.iter().copied().fold(0.0, f64::max);
            if m > 0.0 {
                next.iter_mut().for_each(|x| *x /= m);
            }
            levels.push(next);
        }
        WalkCounts { levels }
    }

    /// Rescaled `R_j`.
    pub fn level(&self, j: usize) -> &[f64] {
        &self.levels[j]
    }

    pub fn k(&self) -> usize {
        self.levels.len()
    }
}

fn pick_weighted(rng: &mut Rng, total: f64, weights: impl Iterator<Item = (usize, f64)> + Clone) -> Option<usize> {
    if !(total > 0.0) {
        return None;
    }
    let mut u = rng.random::<f64>() * total;
    let mut last = None;
    for (v, w) in weights {
        if w > 0.0 {
            last = Some(v);
            if u < w {
                return Some(v);
            }
            u -= w;
        }
    }
    // Rounding can leave a sliver of mass past the final candidate.
    last
}

/// Draws a homomorphism by i.i.d. uniform node sequences, falling back to a
/// random edge grown by uniform neighbor steps after `10 n` failures.
pub fn rejection_init(g: &Network, k: usize, rng: &mut Rng) -> Result<Homomorphism> {
    ChainMotif::new(k)?;
    let n = g.n();
    if g.edge_count() == 0 {
        return Err(Error::Structure("network has no edges, so no homomorphism exists".into()));
    }
    let mut x = vec![0; k];
    'tries: for _ in 0..10 * n {
        x[0] = rng.random_range(0..n);
        for i in 1..k {
            x[i] = rng.random_range(0..n);
            if !g.has_edge(x[i - 1], x[i]) {
                continue 'tries;
            }
        }
        return Ok(Homomorphism(x));
    }
    let edges: Vec<(usize, usize, f64)> = g.edges().collect();
    let (u, v, _) = edges[rng.random_range(0..edges.len())];
    let (a, b) = if rng.random::<bool>() { (u, v) } else { (v, u) };
    x[0] = a;
    x[1] = b;
    for i in 2..k {
        let nb = g.neighbors(x[i - 1]);
        x[i] = nb[rng.random_range(0..nb.len())];
    }
    Ok(Homomorphism(x))
}

/// Metropolis acceptance probability for moving the pivot from `from` to
/// `to` in the given pivot mode.
///
/// The pivot proposes along the weighted random walk `A(from, .) / s(from)`.
/// Approximate mode corrects the walk toward a uniform pivot, Exact mode
/// toward the pivot marginal of the homomorphism density, proportional to
/// `R_{k-1}`.
pub fn acceptance_probability(g: &Network, walks: &WalkCounts, mode: McmcMode, from: usize, to: usize) -> f64 {
    let (sf, st) = (g.strength(from), g.strength(to));
    let ratio = match mode {
        McmcMode::PivotApprox => sf / st,
        McmcMode::PivotExact => {
            let r = walks.level(walks.k() - 1);
            (r[to] * sf) / (r[from] * st)
        }
        McmcMode::Glauber => 1.0,
    };
    ratio.min(1.0)
}

/// Pivot-chain update. Returns whether the pivot move was accepted.
pub fn pivot_update(
    g: &Network,
    walks: &WalkCounts,
    x: &mut Homomorphism,
    mode: McmcMode,
    rng: &mut Rng,
) -> Result<bool> {
    let k = x.k();
    let x1 = x.0[0];
    let s = g.strength(x1);
    let l = pick_weighted(
        rng,
        s,
        g.neighbors(x1).iter().copied().zip(g.neighbor_weights(x1).iter().copied()),
    )
    .ok_or(Error::DeadEnd { node: x1 })?;
    let alpha = acceptance_probability(g, walks, mode, x1, l);
    let accepted = rng.random::<f64>() < alpha;
    if accepted {
        x.0[0] = l;
    }
    for i in 1..k {
        let prev = x.0[i - 1];
        let r = walks.level(k - 1 - i);
        let nb = g.neighbors(prev);
        let wt = g.neighbor_weights(prev);
        let cand = nb.iter().copied().zip(wt.iter().copied()).map(|(v, w)| (v, w * r[v]));
        let total: f64 = cand.clone().map(|(_, w)| w).sum();
        x.0[i] = pick_weighted(rng, total, cand).ok_or(Error::DeadEnd { node: prev })?;
    }
    Ok(accepted)
}

/// Glauber update: resample one uniformly chosen coordinate from its
/// conditional given its chain neighbors.
pub fn glauber_update(g: &Network, x: &mut Homomorphism, rng: &mut Rng) -> Result<()> {
    let k = x.k();
    for _ in 0..k {
        let v = rng.random_range(0..k);
        if glauber_resample(g, x, v, rng) {
            return Ok(());
        }
    }
    Err(Error::DeadEnd { node: x.0[0] })
}

/// Resamples coordinate `v` (0-based) from its conditional. Returns false,
/// leaving `x` untouched, when the conditional has no mass.
pub fn glauber_resample(g: &Network, x: &mut Homomorphism, v: usize, rng: &mut Rng) -> bool {
    let k = x.k();
    let left = (v > 0).then(|| x.0[v - 1]);
    let right = (v + 1 < k).then(|| x.0[v + 1]);
    // Candidates come from the neighborhood of one fixed side and are
    // weighted by the other.
    let base = left.or(right).expect("k >= 2");
    let other = if left.is_some() { right } else { None };
    let nb = g.neighbors(base);
    let wt = g.neighbor_weights(base);
    let cand = nb.iter().copied().zip(wt.iter().copied()).map(|(w, a)| match other {
        Some(o) => (w, a * g.weight(w, o)),
        None => (w, a),
    });
    let total: f64 = cand.clone().map(|(_, w)| w).sum();
    match pick_weighted(rng, total, cand) {
        Some(z) => {
            x.0[v] = z;
            true
        }
        None => false,
    }
}

/// Applies the base update of `config.mode` until the state is a k-path.
/// At least one update is always made. Returns the number of rejected
/// (non-injective) intermediate states.
pub fn injective_step(
    g: &Network,
    walks: &WalkCounts,
    x: &mut Homomorphism,
    config: &SamplerConfig,
    rng: &mut Rng,
) -> Result<usize> {
    let mut rejections = 0;
    loop {
        base_update(g, walks, x, config.mode, rng)?;
        if x.is_injective() {
            return Ok(rejections);
        }
        rejections += 1;
        if rejections > config.max_rejections {
            return Err(Error::Mixing {
                rejections,
                context: String::new(),
            });
        }
    }
}

fn base_update(g: &Network, walks: &WalkCounts, x: &mut Homomorphism, mode: McmcMode, rng: &mut Rng) -> Result<bool> {
    match mode {
        McmcMode::Glauber => glauber_update(g, x, rng).map(|_| true),
        m => pivot_update(g, walks, x, m, rng),
    }
}

/// A running chain over homomorphisms of the k-chain into `g`.
#[derive(Debug, Clone)]
pub struct MotifChain<'g> {
    g: &'g Network,
    walks: Arc<WalkCounts>,
    config: SamplerConfig,
    state: Homomorphism,
    rng: Rng,
    steps: u64,
    accepted: u64,
    rejections: u64,
}

impl<'g> MotifChain<'g> {
    /// Starts a chain from a rejection-sampled state (moved to a k-path
    /// first when the configuration is injective).
    pub fn new(g: &'g Network, k: usize, config: SamplerConfig, rng: Rng) -> Result<Self> {
        let walks = Arc::new(WalkCounts::new(g, k));
        Self::with_walk_counts(g, walks, config, rng)
    }

    /// Like [`MotifChain::new`] but reuses precomputed walk counts.
    pub fn with_walk_counts(g: &'g Network, walks: Arc<WalkCounts>, config: SamplerConfig, mut rng: Rng) -> Result<Self> {
        config.validate()?;
        let k = walks.k();
        let mut state = rejection_init(g, k, &mut rng)?;
        if config.injective && !state.is_injective() {
            injective_step(g, &walks, &mut state, &config, &mut rng)?;
        }
        Ok(MotifChain {
            g,
            walks,
            config,
            state,
            rng,
            steps: 0,
            accepted: 0,
            rejections: 0,
        })
    }

    /// Starts from a given state.
    pub fn from_state(g: &'g Network, walks: Arc<WalkCounts>, config: SamplerConfig, state: Homomorphism, rng: Rng) -> Result<Self> {
        config.validate()?;
        if state.k() != walks.k() || !state.is_valid(g) {
            return Err(Error::Structure(format!("{state} is not a homomorphism of the {}-chain", walks.k())));
        }
        Ok(MotifChain {
            g,
            walks,
            config,
            state,
            rng,
            steps: 0,
            accepted: 0,
            rejections: 0,
        })
    }

    pub fn state(&self) -> &Homomorphism {
        &self.state
    }

    pub fn k(&self) -> usize {
        self.walks.k()
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn network(&self) -> &'g Network {
        self.g
    }

    /// Advances the chain by one reported state.
    pub fn step(&mut self) -> Result<&Homomorphism> {
        self.steps += 1;
        if self.config.injective {
            let r = injective_step(self.g, &self.walks, &mut self.state, &self.config, &mut self.rng)?;
            self.rejections += r as u64;
            self.accepted += 1;
        } else if base_update(self.g, &self.walks, &mut self.state, self.config.mode, &mut self.rng)? {
            self.accepted += 1;
        }
        Ok(&self.state)
    }

    /// Fraction of pivot proposals accepted (1 for Glauber).
    pub fn acceptance_rate(&self) -> f64 {
        if self.steps == 0 {
            1.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }

    /// Mean number of discarded non-injective states per reported state.
    pub fn total_rejections(&self) -> u64 {
        self.rejections
    }

    pub fn mean_rejections(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.rejections as f64 / self.steps as f64
        }
    }
}

const ENUMERATION_LIMIT: f64 = 1e7;

/// Every homomorphism of the k-chain into `g` (or every k-path), in
/// lexicographic order.
pub fn enumerate_homomorphisms(g: &Network, k: usize, injective: bool) -> Result<Vec<Homomorphism>> {
    ChainMotif::new(k)?;
    let n = g.n();
    // Exact walk count on the support graph.
    let mut count = vec![1.0f64; n];
    for _ in 1..k {
        count = (0..n).map(|u| g.neighbors(u).iter().map(|&v| count[v]).sum()).collect();
    }
    let total: f64 = count.iter().sum();
    if total > ENUMERATION_LIMIT {
        return Err(Error::Capacity(format!(
            "{total:.3e} homomorphisms exceed the enumeration limit of {ENUMERATION_LIMIT:e}"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut x = Vec::with_capacity(k);
    fn dfs(g: &Network, k: usize, injective: bool, x: &mut Vec<usize>, out: &mut Vec<Homomorphism>) {
        if x.len() == k {
            out.push(Homomorphism(x.clone()));
            return;
        }
        let last = *x.last().unwrap();
        for &v in g.neighbors(last) {
            if injective && x.contains(&v) {
                continue;
            }
            x.push(v);
            dfs(g, k, injective, x, out);
            x.pop();
        }
    }
    for u in 0..n {
        x.push(u);
        dfs(g, k, injective, &mut x, &mut out);
        x.pop();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Proportional to the product of chain weights.
    Pi,
    /// `Pi` restricted to k-paths.
    PiInj,
    /// Stationary law of the approximate pivot chain: uniform pivot, then
    /// the rest of the walk weighted by its chain weights.
    PiHat,
    /// `PiHat` restricted to k-paths.
    PiHatInj,
}

impl Target {
    pub fn for_config(config: &SamplerConfig) -> Self {
        match (config.mode, config.injective) {
            (McmcMode::PivotApprox, false) => Target::PiHat,
            (McmcMode::PivotApprox, true) => Target::PiHatInj,
            (_, false) => Target::Pi,
            (_, true) => Target::PiInj,
        }
    }
}

/// Exact target distribution by enumeration. Probabilities are normalized
/// to sum to one.
pub fn target_distribution(g: &Network, k: usize, which: Target) -> Result<BTreeMap<Homomorphism, f64>> {
    let all = enumerate_homomorphisms(g, k, false)?;
    let weights: Vec<f64> = all.iter().map(|h| h.weight(g)).collect();
    let mut raw: Vec<f64> = match which {
        Target::Pi | Target::PiInj => weights.clone(),
        Target::PiHat | Target::PiHatInj => {
            let mut from = vec![0.0; g.n()];
            for (h, w) in all.iter().zip(&weights) {
                from[h.0[0]] += w;
            }
            all.iter()
                .zip(&weights)
                .map(|(h, w)| w / (g.n() as f64 * from[h.0[0]]))
                .collect()
        }
    };
    if matches!(which, Target::PiInj | Target::PiHatInj) {
        for (h, p) in all.iter().zip(raw.iter_mut()) {
            if !h.is_injective() {
                *p = 0.0;
            }
        }
    }
    let z: f64 = raw.iter().sum();
    if !(z > 0.0) {
        return Err(Error::Structure(format!("no {k}-chain homomorphism in the target's support")));
    }
    Ok(all
        .into_iter()
        .zip(raw)
        .filter(|(_, p)| *p > 0.0)
        .map(|(h, p)| (h, p / z))
        .collect())
}

/// Total-variation distance between an empirical count table and a target.
pub fn total_variation(counts: &BTreeMap<Homomorphism, u64>, target: &BTreeMap<Homomorphism, f64>) -> f64 {
    let n: u64 = counts.values().sum();
    let n = n.max(1) as f64;
    let mut tv = 0.0;
    for (h, &p) in target {
        let q = counts.get(h).copied().unwrap_or(0) as f64 / n;
        tv += (p - q).abs();
    }
    for (h, &c) in counts {
        if !target.contains_key(h) {
            tv += c as f64 / n;
        }
    }
    tv / 2.0
}

/// Runs a chain for `steps` reported states and returns the empirical
/// occupation counts.
pub fn occupation(chain: &mut MotifChain<'_>, steps: u64) -> Result<BTreeMap<Homomorphism, u64>> {
    let mut counts = BTreeMap::new();
    for _ in 0..steps {
        *counts.entry(chain.step()?.clone()).or_insert(0) += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use proptest::prelude::*;

    use super::*;
    use crate::graph::fixtures::*;
    use crate::rng;

    fn chain(g: &Network, k: usize, config: SamplerConfig, seed: u64) -> MotifChain<'_> {
        MotifChain::new(g, k, config, rng::stream(seed, 0)).unwrap()
    }

    /// Bowtie with a pendant weighted edge: connected, non-bipartite, not regular.
    fn weighted_kite() -> Network {
        Network::from_edges(5, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 1.0), (2, 3, 0.5), (3, 4, 3.0)]).unwrap()
    }

    #[test]
    fn rejection_init_reaches_every_walk_of_k3() {
        let g = complete(3);
        let mut r = rng::stream(1, 0);
        let seen: HashSet<_> = (0..2000).map(|_| rejection_init(&g, 3, &mut r).unwrap()).collect();
        assert_eq!(seen.len(), 12);
        assert!(seen.iter().all(|h| h.is_valid(&g)));
    }

    #[test]
    fn rejection_init_single_edge_and_empty() {
        let g = Network::from_pairs(2, [(0, 1)]).unwrap();
        let mut r = rng::stream(2, 0);
        for _ in 0..50 {
            let h = rejection_init(&g, 3, &mut r).unwrap();
            assert!(h.0 == vec![0, 1, 0] || h.0 == vec![1, 0, 1]);
        }
        assert!(matches!(rejection_init(&Network::empty(4), 3, &mut r), Err(Error::Structure(_))));
    }

    #[test]
    fn rejection_init_fallback_on_sparse_graph() {
        let g = path(400);
        let mut r = rng::stream(3, 0);
        let h = rejection_init(&g, 12, &mut r).unwrap();
        assert!(h.is_valid(&g));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_homomorphisms(&complete(3), 2, false).unwrap().len(), 6);
        assert_eq!(enumerate_homomorphisms(&complete(3), 3, true).unwrap().len(), 6);
        assert_eq!(enumerate_homomorphisms(&cycle(4), 3, false).unwrap().len(), 16);
        let big = complete(60);
        assert!(matches!(enumerate_homomorphisms(&big, 6, false), Err(Error::Capacity(_))));
    }

    #[test]
    fn pi_is_uniform_on_unweighted_graphs() {
        let t = target_distribution(&bowtie(), 3, Target::Pi).unwrap();
        let p = 1.0 / t.len() as f64;
        assert!(t.values().all(|&q| (q - p).abs() < 1e-15));
    }

    #[test]
    fn pi_hat_equals_pi_on_regular_graphs() {
        let g = cycle(5);
        let a = target_distribution(&g, 4, Target::Pi).unwrap();
        let b = target_distribution(&g, 4, Target::PiHat).unwrap();
        for (h, p) in &a {
            assert!((p - b[h]).abs() < 1e-12);
        }
    }

    #[test]
    fn pi_hat_on_star() {
        let g = star(3);
        let t = target_distribution(&g, 2, Target::PiHat).unwrap();
        assert_eq!(t.len(), 6);
        for (h, &p) in &t {
            let expect = if h.0[0] == 0 { 1.0 / 12.0 } else { 1.0 / 4.0 };
            assert!((p - expect).abs() < 1e-15, "{h}: {p}");
        }
        assert!((t.values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn injective_target_without_support_is_structure_error() {
        let g = Network::from_pairs(2, [(0, 1)]).unwrap();
        assert!(matches!(target_distribution(&g, 3, Target::PiInj), Err(Error::Structure(_))));
    }

    #[test]
    fn exact_acceptance_matches_dense_formula_on_star() {
        // Independent evaluation with dense matrix powers.
        let g = star(5);
        let n = g.n();
        let dense: Vec<Vec<f64>> = (0..n).map(|u| (0..n).map(|v| g.weight(u, v)).collect()).collect();
        let mul = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|c| a[i][c] * b[c][j]).sum()).collect())
                .collect()
        };
        for k in 2..=4 {
            let mut pow = dense.clone();
            for _ in 2..k {
                pow = mul(&pow, &dense);
            }
            let row: Vec<f64> = pow.iter().map(|r| r.iter().sum()).collect();
            let walks = WalkCounts::new(&g, k);
            for from in 0..n {
                for to in g.neighbors(from).iter().copied() {
                    let s = |u: usize| dense[u].iter().sum::<f64>();
                    let expect = ((row[to] * s(from)) / (row[from] * s(to))).min(1.0);
                    let got = acceptance_probability(&g, &walks, McmcMode::PivotExact, from, to);
                    assert!((got - expect).abs() < 1e-12, "k={k} {from}->{to}: {got} vs {expect}");
                }
            }
        }
        // For k = 2 the pivot marginal is the walk's own stationary law.
        let walks = WalkCounts::new(&g, 2);
        assert_eq!(acceptance_probability(&g, &walks, McmcMode::PivotExact, 1, 0), 1.0);
        let approx = acceptance_probability(&g, &walks, McmcMode::PivotApprox, 1, 0);
        assert!((approx - 0.2).abs() < 1e-15);
    }

    #[test]
    fn exact_pivot_on_regular_graph_always_accepts() {
        let g = cycle(5);
        let walks = WalkCounts::new(&g, 4);
        for u in 0..5 {
            for &v in g.neighbors(u) {
                assert_eq!(acceptance_probability(&g, &walks, McmcMode::PivotExact, u, v), 1.0);
            }
        }
    }

    #[test]
    fn glauber_conditionals() {
        let g = complete(3);
        let mut r = rng::stream(4, 0);
        let trials = 20_000;
        let mut ones = 0;
        for _ in 0..trials {
            let mut x = Homomorphism(vec![0, 1]);
            assert!(glauber_resample(&g, &mut x, 1, &mut r));
            assert_ne!(x.0[1], 0);
            ones += (x.0[1] == 1) as usize;
        }
        let f = ones as f64 / trials as f64;
        assert!((f - 0.5).abs() < 0.02, "{f}");

        let p = path(3);
        for _ in 0..100 {
            let mut x = Homomorphism(vec![0, 1, 2]);
            assert!(glauber_resample(&p, &mut x, 1, &mut r));
            assert_eq!(x.0, vec![0, 1, 2]);
            glauber_update(&p, &mut x, &mut r).unwrap();
            assert!(x.is_valid(&p));
        }
    }

    #[test]
    fn injective_step_examples() {
        let mut r = rng::stream(5, 0);
        let g = complete(3);
        let w = WalkCounts::new(&g, 3);
        let cfg = SamplerConfig::new(McmcMode::PivotApprox).injective(true);
        let mut x = Homomorphism(vec![0, 1, 0]);
        for _ in 0..100 {
            injective_step(&g, &w, &mut x, &cfg, &mut r).unwrap();
            let mut s = x.0.clone();
            s.sort();
            assert_eq!(s, vec![0, 1, 2]);
        }
        let p = path(3);
        let w = WalkCounts::new(&p, 3);
        let mut x = Homomorphism(vec![0, 1, 0]);
        for _ in 0..100 {
            injective_step(&p, &w, &mut x, &cfg, &mut r).unwrap();
            assert!(x.0 == vec![0, 1, 2] || x.0 == vec![2, 1, 0]);
        }
        let e = Network::from_pairs(2, [(0, 1)]).unwrap();
        let w = WalkCounts::new(&e, 3);
        let cfg = SamplerConfig {
            max_rejections: 50,
            ..cfg
        };
        let mut x = Homomorphism(vec![0, 1, 0]);
        assert!(matches!(
            injective_step(&e, &w, &mut x, &cfg, &mut r),
            Err(Error::Mixing { rejections: 51, .. })
        ));
    }

    fn assert_stationary(g: &Network, k: usize, config: SamplerConfig, seed: u64) {
        let mut c = chain(g, k, config, seed);
        for _ in 0..1000 {
            c.step().unwrap();
        }
        let counts = occupation(&mut c, 1_000_000).unwrap();
        let target = target_distribution(g, k, Target::for_config(&config)).unwrap();
        assert!(target.len() <= 200);
        let tv = total_variation(&counts, &target);
        assert!(tv <= 0.02, "{:?}: TV {tv}", config);
    }

    #[test]
    fn pivot_exact_is_stationary_for_pi() {
        assert_stationary(&bowtie(), 3, SamplerConfig::new(McmcMode::PivotExact), 10);
        assert_stationary(&weighted_kite(), 3, SamplerConfig::new(McmcMode::PivotExact), 11);
    }

    #[test]
    fn pivot_approx_is_stationary_for_pi_hat() {
        assert_stationary(&bowtie(), 3, SamplerConfig::new(McmcMode::PivotApprox), 12);
        assert_stationary(&weighted_kite(), 3, SamplerConfig::new(McmcMode::PivotApprox), 13);
    }

    #[test]
    fn glauber_is_stationary_for_pi() {
        assert_stationary(&bowtie(), 3, SamplerConfig::new(McmcMode::Glauber), 14);
        assert_stationary(&weighted_kite(), 3, SamplerConfig::new(McmcMode::Glauber), 15);
    }

    #[test]
    fn injective_chains_are_stationary_for_restricted_targets() {
        for (i, mode) in [McmcMode::PivotExact, McmcMode::PivotApprox, McmcMode::Glauber].into_iter().enumerate() {
            assert_stationary(&bowtie(), 3, SamplerConfig::new(mode).injective(true), 20 + i as u64);
        }
    }

    #[test]
    fn pivot_exact_detailed_balance() {
        let g = weighted_kite();
        let mut c = chain(&g, 2, SamplerConfig::new(McmcMode::PivotExact), 30);
        let steps = 1_000_000u64;
        let mut flow: BTreeMap<(Homomorphism, Homomorphism), u64> = BTreeMap::new();
        let mut prev = c.state().clone();
        for _ in 0..steps {
            let next = c.step().unwrap().clone();
            if next != prev {
                *flow.entry((prev.clone(), next.clone())).or_default() += 1;
            }
            prev = next;
        }
        for ((a, b), &f) in &flow {
            let back = flow.get(&(b.clone(), a.clone())).copied().unwrap_or(0);
            let diff = (f as f64 - back as f64).abs() / steps as f64;
            let sd = ((f + back) as f64).sqrt() / steps as f64;
            assert!(diff <= 5.0 * sd + 1e-4, "{a} <-> {b}: {f} vs {back}");
        }
    }

    #[test]
    fn coverage_of_injective_homomorphisms() {
        let g = cycle(9);
        let k = 3;
        assert!(2 * (k - 1) <= 4);
        let paths = enumerate_homomorphisms(&g, k, true).unwrap();
        let covered: HashSet<usize> = paths.iter().flat_map(|h| h.0.iter().copied()).collect();
        assert_eq!(covered.len(), g.n());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("PivotApprox".parse::<McmcMode>().unwrap(), McmcMode::PivotApprox);
        assert_eq!("pivot".parse::<McmcMode>().unwrap(), McmcMode::PivotExact);
        assert!("metropolis".parse::<McmcMode>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn updates_preserve_validity(
            seed in 0u64..1000,
            k in 2usize..7,
            mode in prop::sample::select(vec![McmcMode::PivotExact, McmcMode::PivotApprox, McmcMode::Glauber]),
            p in 0.15f64..0.6,
        ) {
            let g = crate::graph::generate(&crate::graph::ModelSpec::Er { n: 15, p }, seed).unwrap();
            prop_assume!(g.edge_count() > 0);
            let mut c = chain(&g, k, SamplerConfig::new(mode), seed);
            for _ in 0..200 {
                let before = c.state().clone();
                let h = c.step().unwrap();
                prop_assert!(h.is_valid(&g));
                if mode == McmcMode::Glauber {
                    let diff = before.0.iter().zip(&h.0).filter(|(a, b)| a != b).count();
                    prop_assert!(diff <= 1);
                }
            }
        }
    }
}
