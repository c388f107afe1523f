//! Network denoising and reconstruction.
//!
//! A motif chain walks over `G`. Each visited patch is approximated by the
//! dictionary, and the approximation is folded entrywise into a running mean
//! per node pair. The means form the reconstructed weighted network.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use ndarray::{Array2, ArrayView2};
use rand::seq::IndexedRandom as _;

use crate::error::{Error, Result};
use crate::factorization::{Dictionary, SparseCoder};
use crate::graph::Network;
use crate::patches::{on_chain_mask, MaskMode};
use crate::rng::{self, ids, Rng};
use crate::sampling::{
    injective_step, target_distribution, Homomorphism, McmcMode, MotifChain, SamplerConfig, Target, WalkCounts,
};

/// Running means per unordered node pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReconstructionAccumulator {
    cells: HashMap<(usize, usize), (u64, f64)>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl ReconstructionAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, u: usize, v: usize, value: f64) {
        let cell = self.cells.entry(key(u, v)).or_insert((0, 0.0));
        cell.0 += 1;
        cell.1 += (value - cell.1) / cell.0 as f64;
    }

    pub fn count(&self, u: usize, v: usize) -> u64 {
        self.cells.get(&key(u, v)).map_or(0, |c| c.0)
    }

    pub fn mean(&self, u: usize, v: usize) -> Option<f64> {
        self.cells.get(&key(u, v)).map(|c| c.1)
    }

    /// Number of pairs visited at least once.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `(u, v, count, mean)` with `u <= v`, sorted.
    pub fn entries(&self) -> Vec<(usize, usize, u64, f64)> {
        let mut out: Vec<_> = self.cells.iter().map(|(&(u, v), &(c, m))| (u, v, c, m)).collect();
        out.sort_by_key(|e| (e.0, e.1));
        out
    }

    /// Count-weighted merge, as if all of `other`'s updates had been made here.
    pub fn merge(&mut self, other: &ReconstructionAccumulator) {
        for (&k, &(c2, m2)) in &other.cells {
            let cell = self.cells.entry(k).or_insert((0, 0.0));
            let c = cell.0 + c2;
            cell.1 = (cell.0 as f64 * cell.1 + c2 as f64 * m2) / c as f64;
            cell.0 = c;
        }
    }

    /// Plain average of two accumulators: the mean of both means where both
    /// visited a pair, otherwise whichever did.
    pub fn average(&self, other: &ReconstructionAccumulator) -> ReconstructionAccumulator {
        let mut out = self.clone();
        for (&k, &(c2, m2)) in &other.cells {
            match out.cells.get_mut(&k) {
                Some(cell) => {
                    cell.1 = (cell.1 + m2) / 2.0;
                    cell.0 += c2;
                }
                None => {
                    out.cells.insert(k, (c2, m2));
                }
            }
        }
        out
    }

    /// Weighted network on `like`'s node set. Pairs with nonpositive mean are absent.
    pub fn to_network(&self, like: &Network) -> Network {
        let edges = self.entries().into_iter().filter(|e| e.3 > 0.0).map(|(u, v, _, m)| (u, v, m));
        like.with_same_nodes(edges).expect("accumulator keys lie in the node set")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NdrParams {
    pub k: usize,
    /// Chain steps. `None` means `⌊n ln n⌋`.
    pub iterations: Option<usize>,
    pub lambda: f64,
    pub theta: f64,
    pub xi: f64,
    pub denoising: bool,
    pub injective: bool,
    pub mode: McmcMode,
    pub seed: u64,
    pub max_rejections: usize,
    pub mask_mode: MaskMode,
    pub code_iters: usize,
    pub code_tol: f64,
    /// Independent chains whose accumulators are merged.
    pub chains: usize,
    /// Worker threads for the chains.
    pub threads: usize,
}

impl Default for NdrParams {
    fn default() -> Self {
        NdrParams {
            k: 21,
            iterations: None,
            lambda: 0.0,
            theta: 0.4,
            xi: 1.0,
            denoising: false,
            injective: false,
            mode: McmcMode::PivotApprox,
            seed: 0,
            max_rejections: 100_000,
            mask_mode: MaskMode::Symmetric,
            code_iters: 100,
            code_tol: 1e-8,
            chains: 1,
            threads: 1,
        }
    }
}

impl NdrParams {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::param("k", format!("must be at least 2, got {}", self.k)));
        }
        if self.iterations == Some(0) {
            return Err(Error::param("T", "must be at least 1"));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::param("lambda", format!("{} must be a nonnegative number", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::param("theta", format!("{} outside [0, 1]", self.theta)));
        }
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(Error::param("xi", format!("{} outside [0, 1]", self.xi)));
        }
        if self.chains == 0 {
            return Err(Error::param("chains", "must be at least 1"));
        }
        if self.threads == 0 {
            return Err(Error::param("threads", "must be at least 1"));
        }
        if self.max_rejections == 0 {
            return Err(Error::param("max_rejections", "must be at least 1"));
        }
        Ok(())
    }

    pub fn sampler(&self) -> SamplerConfig {
        SamplerConfig {
            mode: self.mode,
            injective: self.injective,
            max_rejections: self.max_rejections,
        }
    }

    /// Steps for a network on `n` nodes.
    pub fn steps_for(&self, n: usize) -> usize {
        self.iterations.unwrap_or_else(|| auto_iterations(n))
    }

    fn check_dictionary(&self, dict: &Dictionary) -> Result<()> {
        self.validate()?;
        if dict.k() != self.k {
            return Err(Error::param(
                "k",
                format!("{} does not match the dictionary's k = {}", self.k, dict.k()),
            ));
        }
        Ok(())
    }
}

/// `⌊n ln n⌋`, at least one.
pub fn auto_iterations(n: usize) -> usize {
    let n = n as f64;
    ((n * n.ln()).floor() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Masking {
    None,
    OffChain,
    Thin(f64),
}

/// Approximates single patches by a nonnegative combination of the
/// (masked) dictionary columns.
#[derive(Debug, Clone)]
pub struct MesoscaleApproximator {
    k: usize,
    masking: Masking,
    mask: Vec<bool>,
    coder: SparseCoder,
}

impl MesoscaleApproximator {
    pub fn new(dict: &Dictionary, params: &NdrParams) -> Result<Self> {
        let k = dict.k();
        let masking = if params.denoising {
            Masking::OffChain
        } else if params.xi < 1.0 {
            Masking::Thin(params.xi)
        } else {
            Masking::None
        };
        let m = on_chain_mask(k, params.mask_mode);
        let mask: Vec<bool> = (0..k * k).map(|i| m[(i % k, i / k)]).collect();
        let mut w = dict.matrix().clone();
        for mut col in w.columns_mut() {
            for (v, &on) in col.iter_mut().zip(&mask) {
                mask_entry(v, on, masking);
            }
        }
        let coder = SparseCoder::new(w.view(), params.lambda, params.code_iters, params.code_tol)?;
        Ok(MesoscaleApproximator { k, masking, mask, coder })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Whether vectorized position `i` is on the chain.
    pub fn on_chain(&self, i: usize) -> bool {
        self.mask[i]
    }

    /// `Â = W̃ H` for a batch of vectorized patches (k²×N).
    pub fn approximate(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        let mut x = x.to_owned();
        for mut col in x.columns_mut() {
            for (i, v) in col.iter_mut().enumerate() {
                mask_entry(v, self.mask[i], self.masking);
            }
        }
        self.coder.approximate(x.view())
    }

    /// Single-patch version of [`MesoscaleApproximator::approximate`].
    /// `patch` is masked in place and `out` receives `Â`.
    pub fn approximate_patch(&self, patch: &mut [f64], scratch: &mut Vec<f64>, out: &mut [f64]) -> Result<()> {
        for (i, v) in patch.iter_mut().enumerate() {
            mask_entry(v, self.mask[i], self.masking);
        }
        scratch.resize(self.coder.r(), 0.0);
        self.coder.approximate_column(patch, scratch, out)
    }
}

fn mask_entry(v: &mut f64, on: bool, masking: Masking) {
    if on {
        match masking {
            Masking::None => {}
            Masking::OffChain => *v = 0.0,
            Masking::Thin(xi) => *v *= xi,
        }
    }
}

fn fill_patch(g: &Network, x: &Homomorphism, out: &mut [f64]) {
    let v = x.nodes();
    let k = v.len();
    for b in 0..k {
        for a in 0..k {
            out[a + k * b] = g.weight(v[a], v[b]);
        }
    }
}

/// Patch buffers reused across steps.
struct Workspace {
    patch: Vec<f64>,
    raw: Vec<f64>,
    code: Vec<f64>,
    a_hat: Vec<f64>,
}

impl Workspace {
    fn new(k: usize) -> Self {
        Workspace {
            patch: vec![0.0; k * k],
            raw: vec![0.0; k * k],
            code: Vec::new(),
            a_hat: vec![0.0; k * k],
        }
    }

    /// Fills `raw` with the patch of `x` and `a_hat` with its approximation.
    fn approximate(&mut self, g: &Network, x: &Homomorphism, approx: &MesoscaleApproximator) -> Result<()> {
        fill_patch(g, x, &mut self.raw);
        self.patch.copy_from_slice(&self.raw);
        approx.approximate_patch(&mut self.patch, &mut self.code, &mut self.a_hat)
    }

    fn l1_error(&self) -> f64 {
        self.raw.iter().zip(&self.a_hat).map(|(x, y)| (x - y).abs()).sum()
    }
}

/// Called for every accumulator update as `(state, a, b, value)`.
pub type Observer<'a> = &'a mut dyn FnMut(&Homomorphism, usize, usize, f64);

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub network: Network,
    pub accumulator: ReconstructionAccumulator,
    pub steps: usize,
    /// 2 when the bipartite two-pass scheme was used.
    pub passes: usize,
    pub rejections: u64,
}

struct ChainRun {
    acc: ReconstructionAccumulator,
    rejections: u64,
}

#[allow(clippy::too_many_arguments)]
fn run_chain(
    g: &Network,
    walks: Arc<WalkCounts>,
    approx: &MesoscaleApproximator,
    params: &NdrParams,
    start: Option<Homomorphism>,
    rng: Rng,
    steps: usize,
    mut observer: Option<Observer<'_>>,
) -> Result<ChainRun> {
    let config = params.sampler();
    let mut chain = match start {
        Some(s) => MotifChain::from_state(g, walks, config, s, rng)?,
        None => MotifChain::with_walk_counts(g, walks, config, rng)?,
    };
    let k = approx.k();
    let mut acc = ReconstructionAccumulator::new();
    let mut ws = Workspace::new(k);
    for _ in 0..steps {
        let x = chain.step()?;
        ws.approximate(g, x, approx)?;
        let v = x.nodes();
        for b in 0..k {
            for a in 0..k {
                let i = a + k * b;
                if params.denoising && approx.on_chain(i) {
                    continue;
                }
                let value = ws.a_hat[i];
                acc.update(v[a], v[b], value);
                if let Some(obs) = observer.as_mut() {
                    obs(x, a, b, value);
                }
            }
        }
    }
    Ok(ChainRun {
        acc,
        rejections: chain.total_rejections(),
    })
}

/// Reconstructs `g` from its patches as seen through `dict`.
pub fn reconstruct(g: &Network, dict: &Dictionary, params: &NdrParams) -> Result<Reconstruction> {
    reconstruct_inner(g, dict, params, None)
}

/// Like [`reconstruct`], reporting every accumulator update to `observer`.
/// Chains run sequentially.
pub fn reconstruct_observed(
    g: &Network,
    dict: &Dictionary,
    params: &NdrParams,
    observer: Observer<'_>,
) -> Result<Reconstruction> {
    reconstruct_inner(g, dict, params, Some(observer))
}

fn split(total: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|i| total / parts + usize::from(i < total % parts)).collect()
}

fn chain_stream(pass: usize, chain: usize) -> u64 {
    ids::RECONSTRUCT | ((pass as u64) << 32) | ((chain as u64) << 40)
}

fn reconstruct_inner(
    g: &Network,
    dict: &Dictionary,
    params: &NdrParams,
    mut observer: Option<Observer<'_>>,
) -> Result<Reconstruction> {
    params.check_dictionary(dict)?;
    let k = params.k;
    let approx = MesoscaleApproximator::new(dict, params)?;
    let walks = Arc::new(WalkCounts::new(g, k));
    let steps = params.steps_for(g.n());
    let colors = if k % 2 == 1 { g.bipartition() } else { None };
    let passes = if colors.is_some() && g.edge_count() > 0 { 2 } else { 1 };
    let mut pass_accs = Vec::with_capacity(passes);
    let mut rejections = 0;
    for (pass, pass_steps) in split(steps, passes).into_iter().enumerate() {
        let chain_steps = split(pass_steps, params.chains);
        let mut starts = Vec::with_capacity(params.chains);
        let mut rngs = Vec::with_capacity(params.chains);
        for c in 0..params.chains {
            let mut r = rng::stream(params.seed, chain_stream(pass, c));
            let start = match &colors {
                Some(col) if passes == 2 => Some(colored_start(g, &walks, &params.sampler(), col, pass == 1, &mut r)?),
                _ => None,
            };
            starts.push(start);
            rngs.push(r);
        }
        let runs: Vec<ChainRun> = if observer.is_some() || params.threads == 1 || params.chains == 1 {
            let mut out = Vec::with_capacity(params.chains);
            for ((start, r), n) in starts.into_iter().zip(rngs).zip(&chain_steps) {
                let obs = observer.as_mut().map(|o| &mut **o as Observer<'_>);
                out.push(run_chain(g, walks.clone(), &approx, params, start, r, *n, obs)?);
            }
            out
        } else {
            let jobs: Vec<_> = starts.into_iter().zip(rngs).zip(chain_steps).collect();
            let mut out = Vec::with_capacity(jobs.len());
            let mut jobs = jobs.into_iter();
            loop {
                let batch: Vec<_> = jobs.by_ref().take(params.threads).collect();
                if batch.is_empty() {
                    break;
                }
                let results: Vec<Result<ChainRun>> = std::thread::scope(|s| {
                    let handles: Vec<_> = batch
                        .into_iter()
                        .map(|((start, r), n)| {
                            let walks = walks.clone();
                            let approx = &approx;
                            s.spawn(move || run_chain(g, walks, approx, params, start, r, n, None))
                        })
                        .collect();
                    handles.into_iter().map(|h| h.join().expect("chain worker panicked")).collect()
                });
                for r in results {
                    out.push(r?);
                }
            }
            out
        };
        let mut acc = ReconstructionAccumulator::new();
        for run in runs {
            acc.merge(&run.acc);
            rejections += run.rejections;
        }
        pass_accs.push(acc);
    }
    let accumulator = match pass_accs.as_slice() {
        [one] => one.clone(),
        [a, b] => a.average(b),
        _ => unreachable!(),
    };
    Ok(Reconstruction {
        network: accumulator.to_network(g),
        accumulator,
        steps,
        passes,
        rejections,
    })
}

/// A starting state whose first node has the given color.
fn colored_start(
    g: &Network,
    walks: &WalkCounts,
    config: &SamplerConfig,
    colors: &[bool],
    color: bool,
    rng: &mut Rng,
) -> Result<Homomorphism> {
    let k = walks.k();
    let pool: Vec<usize> = (0..g.n()).filter(|&u| colors[u] == color && g.degree(u) > 0).collect();
    let Some(_) = pool.first() else {
        return Err(Error::Structure("a color class of the bipartite network has no edges".into()));
    };
    let mut last = None;
    for _ in 0..(100 * g.n()).max(1000) {
        let mut x = Vec::with_capacity(k);
        x.push(*pool.choose(rng).unwrap());
        for i in 1..k {
            x.push(*g.neighbors(x[i - 1]).choose(rng).unwrap());
        }
        let h = Homomorphism(x);
        if !config.injective || h.is_injective() {
            return Ok(h);
        }
        last = Some(h);
    }
    let mut h = last.unwrap();
    injective_step(g, walks, &mut h, config, rng)?;
    Ok(h)
}

/// Binary network of the pairs whose weight strictly exceeds `theta`.
pub fn threshold(g: &Network, theta: f64) -> Result<Network> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::param("theta", format!("{theta} outside [0, 1]")));
    }
    let edges: Vec<_> = g.edges().filter(|e| e.2 > theta).map(|(u, v, _)| (u, v, 1.0)).collect();
    g.with_same_nodes(edges)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JaccardMetrics {
    pub index: f64,
    pub distance: f64,
}

fn same_nodes(g: &Network, h: &Network) -> Result<()> {
    if g.n() != h.n() {
        return Err(Error::Structure(format!("node sets differ: {} vs {} nodes", g.n(), h.n())));
    }
    Ok(())
}

/// Jaccard index of the edge sets, and the L1 Jaccard distance of the
/// weight matrices over ordered pairs.
pub fn jaccard_metrics(g: &Network, h: &Network) -> Result<JaccardMetrics> {
    same_nodes(g, h)?;
    let mut inter = 0usize;
    let mut union = 0usize;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut visit = |u: usize, v: usize, a: f64, b: f64| {
        let mult = if u == v { 1.0 } else { 2.0 };
        num += mult * (a - b).abs();
        den += mult * a.max(b);
        union += 1;
        if a > 0.0 && b > 0.0 {
            inter += 1;
        }
    };
    for (u, v, a) in g.edges() {
        visit(u, v, a, h.weight(u, v));
    }
    for (u, v, b) in h.edges() {
        if !g.has_edge(u, v) {
            visit(u, v, 0.0, b);
        }
    }
    if union == 0 || den == 0.0 {
        return Err(Error::Metric("Jaccard metrics are undefined for two empty networks".into()));
    }
    Ok(JaccardMetrics {
        index: inter as f64 / union as f64,
        distance: num / den,
    })
}

/// Ordered node pair to weight.
pub type PairWeights = BTreeMap<(usize, usize), f64>;

/// Jaccard distance with ordered pair `(x, y)` weighted by `weights`.
pub fn weighted_jaccard_distance(g: &Network, h: &Network, weights: &PairWeights) -> Result<f64> {
    same_nodes(g, h)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&(x, y), &w) in weights {
        let (a, b) = (g.weight(x, y), h.weight(x, y));
        num += w * (a - b).abs();
        den += w * a.max(b);
    }
    if !(den > 0.0) {
        return Err(Error::Metric("weighted Jaccard distance has a zero denominator".into()));
    }
    Ok(num / den)
}

/// Exact limit of the reconstruction and its expected visit counts.
#[derive(Debug, Clone)]
pub struct LimitingReconstruction {
    pub network: Network,
    /// Expected number of updates per step at each ordered pair.
    pub visits: PairWeights,
}

fn allowed_pairs(k: usize, params: &NdrParams) -> Vec<(usize, usize)> {
    let mask = on_chain_mask(k, params.mask_mode);
    let mut out = Vec::with_capacity(k * k);
    for b in 0..k {
        for a in 0..k {
            if !params.denoising || !mask[(a, b)] {
                out.push((a, b));
            }
        }
    }
    out
}

/// Expected visit counts `E[N_xy]` under the chain's stationary law.
pub fn expected_visits(g: &Network, params: &NdrParams) -> Result<PairWeights> {
    let target = target_distribution(g, params.k, Target::for_config(&params.sampler()))?;
    let pairs = allowed_pairs(params.k, params);
    let mut visits = PairWeights::new();
    for (h, p) in &target {
        let v = h.nodes();
        for &(a, b) in &pairs {
            *visits.entry((v[a], v[b])).or_insert(0.0) += p;
        }
    }
    Ok(visits)
}

/// Limit of [`reconstruct`] as the number of steps grows, by enumeration
/// of the stationary law. Bipartite networks with odd `k` are not covered.
pub fn limiting_reconstruction(g: &Network, dict: &Dictionary, params: &NdrParams) -> Result<LimitingReconstruction> {
    params.check_dictionary(dict)?;
    let k = params.k;
    let target = target_distribution(g, k, Target::for_config(&params.sampler()))?;
    let approx = MesoscaleApproximator::new(dict, params)?;
    let pairs = allowed_pairs(k, params);
    let mut num: HashMap<(usize, usize), (f64, f64)> = HashMap::new();
    let mut visits = PairWeights::new();
    let mut ws = Workspace::new(k);
    for (h, &p) in &target {
        ws.approximate(g, h, &approx)?;
        let v = h.nodes();
        for &(a, b) in &pairs {
            let cell = num.entry(key(v[a], v[b])).or_insert((0.0, 0.0));
            cell.0 += p * ws.a_hat[a + k * b];
            cell.1 += p;
            *visits.entry((v[a], v[b])).or_insert(0.0) += p;
        }
    }
    let mut edges: Vec<_> = num
        .into_iter()
        .filter(|(_, (s, w))| *w > 0.0 && *s > 0.0)
        .map(|((u, v), (s, w))| (u, v, s / w))
        .collect();
    edges.sort_by_key(|e| (e.0, e.1));
    Ok(LimitingReconstruction {
        network: g.with_same_nodes(edges)?,
        visits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MesoscaleError {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

fn check_mesoscale_params(params: &NdrParams) -> Result<()> {
    if params.denoising {
        return Err(Error::param("denoising", "the mesoscale error is defined without denoising"));
    }
    Ok(())
}

/// Monte Carlo mean of `‖A_x - Â_x‖₁` over `samples` consecutive states
/// of an injective chain.
pub fn mesoscale_error(g: &Network, dict: &Dictionary, samples: usize, params: &NdrParams) -> Result<MesoscaleError> {
    params.check_dictionary(dict)?;
    check_mesoscale_params(params)?;
    if samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    let k = params.k;
    let approx = MesoscaleApproximator::new(dict, params)?;
    let config = params.sampler().injective(true);
    let mut chain = MotifChain::new(g, k, config, rng::stream(params.seed, ids::MESOSCALE))?;
    let mut ws = Workspace::new(k);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..samples {
        let x = chain.step()?;
        ws.approximate(g, x, &approx)?;
        let e = ws.l1_error();
        sum += e;
        sq += e * e;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = if samples > 1 { ((sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(MesoscaleError {
        mean,
        std_error: (var / n).sqrt(),
        samples,
    })
}

/// Exact expectation of `‖A_x - Â_x‖₁` under the chain's stationary law.
pub fn exact_mesoscale_error(g: &Network, dict: &Dictionary, params: &NdrParams) -> Result<f64> {
    params.check_dictionary(dict)?;
    check_mesoscale_params(params)?;
    let k = params.k;
    let target = target_distribution(g, k, Target::for_config(&params.sampler()))?;
    let approx = MesoscaleApproximator::new(dict, params)?;
    let mut ws = Workspace::new(k);
    let mut total = 0.0;
    for (h, &p) in &target {
        ws.approximate(g, h, &approx)?;
        total += p * ws.l1_error();
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// Weighted Jaccard distance of the limiting reconstruction, or the plain
    /// Jaccard distance of a finite run when enumeration is out of reach.
    pub lhs: f64,
    /// Mesoscale error divided by `2(k-1)`.
    pub rhs: f64,
    pub holds: bool,
    /// `rhs - lhs`.
    pub margin: f64,
    /// Whether both sides were computed exactly.
    pub exact: bool,
}

/// Samples used for the Monte Carlo right-hand side when enumeration fails.
pub const BOUND_SAMPLES: usize = 10_000;

/// Checks `JD(G, Â) <= E‖A_x - Â_x‖₁ / (2(k-1))` for a network whose
/// edge weights are all at least one.
pub fn bound_report(g: &Network, dict: &Dictionary, params: &NdrParams) -> Result<BoundReport> {
    bound_with(g, dict, params, None, BOUND_SAMPLES)
}

/// Like [`bound_report`], but falls back on the finished run `rec` (and
/// `samples` Monte Carlo draws) instead of a fresh reconstruction.
pub fn bound_from_run(
    g: &Network,
    dict: &Dictionary,
    params: &NdrParams,
    rec: &Reconstruction,
    samples: usize,
) -> Result<BoundReport> {
    bound_with(g, dict, params, Some(rec), samples)
}

fn bound_with(
    g: &Network,
    dict: &Dictionary,
    params: &NdrParams,
    rec: Option<&Reconstruction>,
    samples: usize,
) -> Result<BoundReport> {
    params.check_dictionary(dict)?;
    check_mesoscale_params(params)?;
    if g.edges().any(|e| e.2 < 1.0) {
        return Err(Error::Structure("the reconstruction bound needs every edge weight to be at least 1".into()));
    }
    let scale = 2.0 * (params.k - 1) as f64;
    let exact = match limiting_reconstruction(g, dict, params) {
        Ok(limit) => {
            let lhs = weighted_jaccard_distance(g, &limit.network, &limit.visits)?;
            let rhs = exact_mesoscale_error(g, dict, params)? / scale;
            Some((lhs, rhs))
        }
        Err(Error::Capacity(_)) => None,
        Err(e) => return Err(e),
    };
    let (lhs, rhs, is_exact) = match exact {
        Some((l, r)) => (l, r, true),
        None => {
            let lhs = match rec {
                Some(rec) => jaccard_metrics(g, &rec.network)?.distance,
                None => jaccard_metrics(g, &reconstruct(g, dict, params)?.network)?.distance,
            };
            let rhs = mesoscale_error(g, dict, samples, params)?.mean / scale;
            (lhs, rhs, false)
        }
    };
    Ok(BoundReport {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
        margin: rhs - lhs,
        exact: is_exact,
    })
}
