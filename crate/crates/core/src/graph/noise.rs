use std::collections::{BTreeMap, HashSet};

use rand::seq::index::sample;
use rand::Rng as _;

use super::generate::watts_strogatz_edges;
use super::spanning::uniform_spanning_tree;
use super::Network;
use crate::error::{Error, Result};
use crate::rng;

/// Corruption models applied to an observed network.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    /// Remove `⌊fraction · |E₀|⌋` edges outside a uniform spanning tree.
    SubtractiveEr { fraction: f64 },
    /// Add `⌊fraction · |E|⌋` uniformly random non-adjacent pairs.
    AdditiveEr { fraction: f64 },
    /// Overlay a Watts–Strogatz graph on `n0` uniformly chosen nodes.
    AdditiveWs { n0: usize, k0: usize, p: f64 },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseSpec::SubtractiveEr { fraction } | NoiseSpec::AdditiveEr { fraction } => {
                if !(*fraction > 0.0 && *fraction < 1.0) {
                    return Err(Error::param("fraction", format!("{fraction} outside (0, 1)")));
                }
            }
            NoiseSpec::AdditiveWs { n0, k0, p } => {
                if k0 >= n0 {
                    return Err(Error::param("k0", format!("ring degree {k0} must be below n0 = {n0}")));
                }
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::param("p", format!("{p} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }

    pub fn is_additive(&self) -> bool {
        !matches!(self, NoiseSpec::SubtractiveEr { .. })
    }
}

/// Ground-truth class of a changed pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    /// Present in the original network (removed by subtractive noise).
    TrueEdge,
    /// Absent from the original network (added by additive noise).
    FalseEdge,
}

impl EdgeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeClass::TrueEdge => "true_edge",
            EdgeClass::FalseEdge => "false_edge",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "true_edge" => Some(EdgeClass::TrueEdge),
            "false_edge" => Some(EdgeClass::FalseEdge),
            _ => None,
        }
    }
}

/// Output of [`corrupt`].
#[derive(Debug, Clone)]
pub struct Corruption {
    pub network: Network,
    /// Removed (subtractive) or added (additive) pairs, `u < v`, sorted.
    pub changed: Vec<(usize, usize)>,
    pub labels: BTreeMap<(usize, usize), EdgeClass>,
}

/// Corrupts `g` according to `spec`. Labels are kept on the output network.
pub fn corrupt(g: &Network, spec: &NoiseSpec, seed: u64) -> Result<Corruption> {
    spec.validate()?;
    let mut rng = rng::stream(seed, rng::ids::CORRUPT);
    let n = g.n();
    let (edges, changed, class) = match spec {
        NoiseSpec::SubtractiveEr { fraction } => {
            if !g.is_connected() {
                return Err(Error::Structure("subtractive noise requires a connected network".into()));
            }
            let tree: HashSet<(usize, usize)> = uniform_spanning_tree(g, &mut rng)?.into_iter().collect();
            let off_tree: Vec<(usize, usize)> = g
                .edges()
                .map(|(u, v, _)| (u, v))
                .filter(|e| !tree.contains(e))
                .collect();
            let m = (fraction * off_tree.len() as f64).floor() as usize;
            let removed: HashSet<(usize, usize)> =
                sample(&mut rng, off_tree.len(), m).into_iter().map(|i| off_tree[i]).collect();
            let kept: Vec<_> = g.edges().filter(|(u, v, _)| !removed.contains(&(*u, *v))).collect();
            (kept, removed.into_iter().collect::<Vec<_>>(), EdgeClass::TrueEdge)
        }
        NoiseSpec::AdditiveEr { fraction } => {
            let m = (fraction * g.edge_count() as f64).floor() as usize;
            let added = random_non_edges(g, m, &mut rng)?;
            let mut all: Vec<_> = g.edges().collect();
            all.extend(added.iter().map(|&(u, v)| (u, v, 1.0)));
            (all, added, EdgeClass::FalseEdge)
        }
        NoiseSpec::AdditiveWs { n0, k0, p } => {
            if *n0 > n {
                return Err(Error::param("n0", format!("{n0} exceeds node count {n}")));
            }
            let chosen = sample(&mut rng, n, *n0).into_vec();
            let local = watts_strogatz_edges(*n0, *k0, *p, &mut rng);
            let mut added = Vec::new();
            for (a, b) in local {
                let (u, v) = (chosen[a].min(chosen[b]), chosen[a].max(chosen[b]));
                if !g.has_edge(u, v) && !added.contains(&(u, v)) {
                    added.push((u, v));
                }
            }
            let mut all: Vec<_> = g.edges().collect();
            all.extend(added.iter().map(|&(u, v)| (u, v, 1.0)));
            (all, added, EdgeClass::FalseEdge)
        }
    };
    let mut changed = changed;
    changed.sort_unstable();
    let labels = changed.iter().map(|&e| (e, class)).collect();
    Ok(Corruption {
        network: g.with_same_nodes(edges)?,
        changed,
        labels,
    })
}

fn random_non_edges(g: &Network, m: usize, rng: &mut rng::Rng) -> Result<Vec<(usize, usize)>> {
    let n = g.n();
    let total = n * n.saturating_sub(1) / 2;
    let existing = g.edges().filter(|(u, v, _)| u != v).count();
    let available = total - existing;
    if available < m {
        return Err(Error::Structure(format!(
            "cannot add {m} new edges: only {available} non-adjacent pairs"
        )));
    }
    let mut added = Vec::with_capacity(m);
    if available >= total / 2 {
        let mut seen = HashSet::new();
        while added.len() < m {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            let e = (u.min(v), u.max(v));
            if u != v && !g.has_edge(u, v) && seen.insert(e) {
                added.push(e);
            }
        }
    } else {
        let pool: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        added.extend(sample(rng, pool.len(), m).into_iter().map(|i| pool[i]));
    }
    Ok(added)
}
