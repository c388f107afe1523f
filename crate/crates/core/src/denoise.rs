//! Denoising experiments: score candidate pairs of a corrupted network by
//! their reconstructed weight, then evaluate the scores as a binary
//! classifier.
//!
//! A pair is positive when it is an edge of the original network. For
//! additive noise the candidates are the observed edges, and the added ones
//! are negative. For subtractive noise the candidates are observed non-edges,
//! and the removed ones are positive.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom as _;

use crate::error::{Error, Result};
use crate::factorization::Dictionary;
use crate::graph::{EdgeClass, Network};
use crate::ndl::{learn_dictionary, NdlParams};
use crate::ndr::{reconstruct, NdrParams, Reconstruction};
use crate::rng::{self, ids};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Additive,
    Subtractive,
}

impl NoiseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseKind::Additive => "additive",
            NoiseKind::Subtractive => "subtractive",
        }
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "additive" | "add" => Ok(NoiseKind::Additive),
            "subtractive" | "sub" => Ok(NoiseKind::Subtractive),
            _ => Err(Error::param("noise", format!("unknown noise kind `{s}` (additive, subtractive)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredPair {
    pub u: usize,
    pub v: usize,
    pub score: f64,
    pub positive: bool,
}

/// Candidate pairs with ground-truth labels and scores. Pairs are unique
/// and stored with `u < v`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoredPairs {
    pub pairs: Vec<ScoredPair>,
}

impl ScoredPairs {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.pairs.iter().filter(|p| p.positive).count()
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }

    fn check_two_classes(&self, what: &str) -> Result<()> {
        if self.positives() == 0 || self.negatives() == 0 {
            return Err(Error::Metric(format!(
                "{what} needs both classes, got {} positive and {} negative pairs",
                self.positives(),
                self.negatives()
            )));
        }
        Ok(())
    }

    /// From `(u, v, score, positive)` tuples.
    pub fn from_tuples(items: impl IntoIterator<Item = (usize, usize, f64, bool)>) -> Self {
        ScoredPairs {
            pairs: items
                .into_iter()
                .map(|(u, v, score, positive)| ScoredPair {
                    u: u.min(v),
                    v: u.max(v),
                    score,
                    positive,
                })
                .collect(),
        }
    }
}

/// Pairs to classify in `g_obs`: every edge for additive noise; for
/// subtractive noise the non-edges at distance at most `k`, or every
/// non-edge when `all_nonedges` is set.
pub fn candidate_pairs(g_obs: &Network, kind: NoiseKind, k: usize, all_nonedges: bool) -> Vec<(usize, usize)> {
    match kind {
        NoiseKind::Additive => g_obs.edges().filter(|e| e.0 != e.1).map(|e| (e.0, e.1)).collect(),
        NoiseKind::Subtractive => {
            let mut out = Vec::new();
            for u in 0..g_obs.n() {
                let dist = if all_nonedges { Vec::new() } else { g_obs.bfs_distances(u) };
                for v in u + 1..g_obs.n() {
                    if g_obs.has_edge(u, v) {
                        continue;
                    }
                    if all_nonedges || dist[v].is_some_and(|d| d <= k) {
                        out.push((u, v));
                    }
                }
            }
            out
        }
    }
}

/// Labels candidates using the corruption record: changed pairs carry their
/// class, unchanged candidates are observed edges (additive) or true
/// non-edges (subtractive). Scores start at zero.
pub fn label_candidates(
    candidates: &[(usize, usize)],
    kind: NoiseKind,
    changed: &BTreeMap<(usize, usize), EdgeClass>,
) -> ScoredPairs {
    ScoredPairs::from_tuples(candidates.iter().map(|&(u, v)| {
        let positive = match changed.get(&(u.min(v), u.max(v))) {
            Some(class) => *class == EdgeClass::TrueEdge,
            None => kind == NoiseKind::Additive,
        };
        (u, v, 0.0, positive)
    }))
}

#[derive(Debug, Clone)]
pub struct DenoiseOutput {
    pub scored: ScoredPairs,
    pub dictionary: Dictionary,
    pub reconstruction: Reconstruction,
}

/// Learns a dictionary from `g_obs`, reconstructs `g_obs` with it, and
/// scores every candidate pair by its reconstructed weight.
pub fn denoise_pipeline(
    g_obs: &Network,
    kind: NoiseKind,
    changed: &BTreeMap<(usize, usize), EdgeClass>,
    ndl: &NdlParams,
    ndr: &NdrParams,
    all_nonedges: bool,
) -> Result<DenoiseOutput> {
    let candidates = candidate_pairs(g_obs, kind, ndr.k, all_nonedges);
    let mut scored = label_candidates(&candidates, kind, changed);
    scored.check_two_classes("denoising").map_err(|_| {
        Error::Structure(format!(
            "degenerate denoising run: {} candidate pairs with {} positives and {} negatives; \
             the corruption changed nothing that can be classified",
            scored.len(),
            scored.positives(),
            scored.negatives()
        ))
    })?;
    let learned = learn_dictionary(g_obs, ndl)?;
    let reconstruction = reconstruct(g_obs, &learned.dictionary, ndr)?;
    for p in &mut scored.pairs {
        p.score = reconstruction.accumulator.mean(p.u, p.v).unwrap_or(0.0);
    }
    Ok(DenoiseOutput {
        scored,
        dictionary: learned.dictionary,
        reconstruction,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    JaccardIndex,
    PreferentialAttachment,
    AdamicAdar,
}

impl BaselineMethod {
    pub const ALL: [BaselineMethod; 3] = [
        BaselineMethod::JaccardIndex,
        BaselineMethod::PreferentialAttachment,
        BaselineMethod::AdamicAdar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BaselineMethod::JaccardIndex => "jaccard",
            BaselineMethod::PreferentialAttachment => "pa",
            BaselineMethod::AdamicAdar => "adamic_adar",
        }
    }
}

impl fmt::Display for BaselineMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for BaselineMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jaccard" | "jaccardindex" => Ok(BaselineMethod::JaccardIndex),
            "pa" | "preferentialattachment" => Ok(BaselineMethod::PreferentialAttachment),
            "aa" | "adamic_adar" | "adamicadar" => Ok(BaselineMethod::AdamicAdar),
            _ => Err(Error::param("baseline", format!("unknown method `{s}` (jaccard, pa, adamic_adar)"))),
        }
    }
}

fn common_neighbors(g: &Network, u: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
    let (a, b) = (g.neighbors(u), g.neighbors(v));
    // Both lists are sorted.
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    return Some(a[i - 1]);
                }
            }
        }
        None
    })
}

/// Score of one pair under a neighborhood baseline.
pub fn baseline_score(g: &Network, u: usize, v: usize, method: BaselineMethod) -> Result<f64> {
    match method {
        BaselineMethod::JaccardIndex => {
            let common = common_neighbors(g, u, v).count();
            let union = g.degree(u) + g.degree(v) - common;
            Ok(if union == 0 { 0.0 } else { common as f64 / union as f64 })
        }
        BaselineMethod::PreferentialAttachment => Ok((g.degree(u) * g.degree(v)) as f64),
        BaselineMethod::AdamicAdar => {
            let mut s = 0.0;
            for z in common_neighbors(g, u, v) {
                let d = g.degree(z);
                if d < 2 {
                    return Err(Error::MethodUnavailable(format!(
                        "Adamic-Adar is undefined: common neighbor {} has degree {d}",
                        g.label(z)
                    )));
                }
                s += 1.0 / (d as f64).ln();
            }
            Ok(s)
        }
    }
}

/// Rescores `template`'s pairs with a baseline, keeping the labels.
pub fn baseline_scores(g: &Network, template: &ScoredPairs, method: BaselineMethod) -> Result<ScoredPairs> {
    if method == BaselineMethod::AdamicAdar && g.has_self_edges() {
        return Err(Error::MethodUnavailable("Adamic-Adar is undefined for networks with self-edges".into()));
    }
    let mut out = template.clone();
    for p in &mut out.pairs {
        p.score = baseline_score(g, p.u, p.v, method)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Roc {
    pub auc: f64,
    /// `(false positive rate, true positive rate)` from `(0, 0)` to `(1, 1)`,
    /// one point per distinct score.
    pub points: Vec<(f64, f64)>,
}

/// Area under the ROC curve as the Mann-Whitney statistic, ties counted half.
pub fn roc_auc(scored: &ScoredPairs) -> Result<Roc> {
    scored.check_two_classes("ROC analysis")?;
    if scored.pairs.iter().any(|p| p.score.is_nan()) {
        return Err(Error::Metric("scores contain NaN".into()));
    }
    let mut items: Vec<(f64, bool)> = scored.pairs.iter().map(|p| (p.score, p.positive)).collect();
    items.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (np, nn) = (scored.positives() as f64, scored.negatives() as f64);
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0.0, 0.0);
    let mut area = 0.0;
    let mut i = 0;
    while i < items.len() {
        let s = items[i].0;
        let (mut gp, mut gn) = (0.0, 0.0);
        while i < items.len() && items[i].0 == s {
            if items[i].1 {
                gp += 1.0;
            } else {
                gn += 1.0;
            }
            i += 1;
        }
        // Negatives in this group beat every positive already counted and
        // tie with the group's positives.
        area += gn * (tp + gp / 2.0);
        tp += gp;
        fp += gn;
        points.push((fp / nn, tp / np));
    }
    Ok(Roc {
        auc: area / (np * nn),
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    /// Pairs with score at least `theta` are predicted positive.
    pub theta: f64,
}

/// Accuracy, precision and recall of the rule `score >= theta`. Precision
/// is 0 when nothing is predicted positive, recall is 0 without positives.
pub fn classification_metrics(pairs: &[ScoredPair], theta: f64) -> (f64, f64, f64) {
    let (mut tp, mut tn, mut fp, mut fneg) = (0usize, 0usize, 0usize, 0usize);
    for p in pairs {
        match (p.score >= theta, p.positive) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fneg += 1,
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    (ratio(tp + tn, pairs.len()), ratio(tp, tp + fp), ratio(tp, tp + fneg))
}

/// Threshold maximizing accuracy on `pairs`. Candidates are `-inf`, the
/// midpoints between consecutive distinct scores, and `+inf`. Ties go to the
/// smaller threshold.
pub fn best_threshold(pairs: &[ScoredPair]) -> f64 {
    let mut scores: Vec<f64> = pairs.iter().map(|p| p.score).collect();
    scores.sort_by(f64::total_cmp);
    scores.dedup();
    let mut cands = vec![f64::NEG_INFINITY];
    cands.extend(scores.windows(2).map(|w| w[0] + (w[1] - w[0]) / 2.0));
    cands.push(f64::INFINITY);
    let mut best = (f64::NEG_INFINITY, f64::INFINITY);
    for &t in &cands {
        let acc = classification_metrics(pairs, t).0;
        if acc > best.0 {
            best = (acc, t);
        }
    }
    best.1
}

/// Splits the pairs at random into training, validation and test parts,
/// picks the threshold on the validation part and reports metrics on the
/// test part. The training part is not used by threshold rules.
pub fn classify_with_split(scored: &ScoredPairs, seed: u64, train_frac: f64, val_frac: f64) -> Result<Classification> {
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(Error::param("train", format!("{train_frac} outside (0, 1)")));
    }
    if !(val_frac > 0.0 && train_frac + val_frac < 1.0) {
        return Err(Error::param("val", format!("{val_frac} must be positive and leave room for a test part")));
    }
    let n = scored.len();
    let n_train = (train_frac * n as f64).floor() as usize;
    let n_val = (val_frac * n as f64).floor() as usize;
    if n_val == 0 || n_train + n_val >= n {
        return Err(Error::Metric(format!("{n} pairs are too few for the requested split")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(seed, ids::SPLIT));
    let pick = |idx: &[usize]| -> Vec<ScoredPair> { idx.iter().map(|&i| scored.pairs[i]).collect() };
    let val = pick(&order[n_train..n_train + n_val]);
    let test = pick(&order[n_train + n_val..]);
    let theta = best_threshold(&val);
    let (accuracy, precision, recall) = classification_metrics(&test, theta);
    Ok(Classification {
        accuracy,
        precision,
        recall,
        theta,
    })
}
