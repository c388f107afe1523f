//! Undirected weighted networks, random-graph generators, corruption
//! operators and structural statistics.
//!
//! Nodes are dense integers `0..n`. Weights are strictly positive and stored
//! symmetrically; a missing pair has weight zero. Self-edges are allowed.

mod generate;
mod io;
mod noise;
mod spanning;
mod stats;

use std::collections::{BTreeMap, VecDeque};

pub use generate::{generate, ModelSpec};
pub use io::{load_edge_list, load_edge_list_with, read_edge_list, save_edge_list, write_edge_list, NodeTable};
pub use noise::{corrupt, Corruption, EdgeClass, NoiseSpec};
pub use spanning::uniform_spanning_tree;
pub use stats::{structural_stats, StructuralStats};

use crate::error::{Error, Result};

/// A sparse, symmetric, nonnegative weight matrix over nodes `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    adj: Vec<Vec<usize>>,
    wts: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl Network {
    /// A network with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Network {
            adj: vec![Vec::new(); n],
            wts: vec![Vec::new(); n],
            labels: None,
        }
    }

    /// Builds a network from weighted pairs. Each unordered pair may be
    /// listed in either or both orientations as long as the weights agree.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut b = NetworkBuilder::new(n);
        for (u, v, w) in edges {
            b.add_edge(u, v, w)?;
        }
        Ok(b.build())
    }

    /// Builds a binary network (all weights 1).
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Sorted neighbor list of `u` (contains `u` itself when it has a self-edge).
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    /// Weights aligned with [`Network::neighbors`].
    pub fn neighbor_weights(&self, u: usize) -> &[f64] {
        &self.wts[u]
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        match self.adj[u].binary_search(&v) {
            Ok(i) => self.wts[u][i],
            Err(_) => 0.0,
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Number of distinct neighbors, counting a self-edge once.
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Row sum of the weight matrix.
    pub fn strength(&self, u: usize) -> f64 {
        self.wts[u].iter().sum()
    }

    /// Neighbors of `u` excluding `u` itself.
    pub fn proper_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied().filter(move |&v| v != u)
    }

    /// Number of unordered pairs with positive weight (self-edges included).
    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Unordered edges `(u, v, w)` with `u <= v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(u, nb)| {
            nb.iter()
                .zip(&self.wts[u])
                .filter(move |(&v, _)| v >= u)
                .map(move |(&v, &w)| (u, v, w))
        })
    }

    pub fn has_self_edges(&self) -> bool {
        (0..self.n()).any(|u| self.has_edge(u, u))
    }

    /// True when every stored weight equals one.
    pub fn is_binary(&self) -> bool {
        self.wts.iter().flatten().all(|&w| w == 1.0)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display label of node `u`: its interned name, or the integer id.
    pub fn label(&self, u: usize) -> String {
        match &self.labels {
            Some(l) => l[u].clone(),
            None => u.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n(), "label table size must match node count");
        self.labels = Some(labels);
        self
    }

    /// Copy of the network with the node set grown to `n` isolated-padded nodes.
    pub fn resized(&self, n: usize) -> Self {
        assert!(n >= self.n());
        let mut out = self.clone();
        out.adj.resize(n, Vec::new());
        out.wts.resize(n, Vec::new());
        if let Some(l) = out.labels.as_mut() {
            let start = l.len();
            l.extend((start..n).map(|i| i.to_string()));
        }
        out
    }

    /// Same nodes and labels, different edges.
    pub fn with_same_nodes<I>(&self, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut out = Self::from_edges(self.n(), edges)?;
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// Checks the type invariants: symmetry, positive finite weights, sorted
    /// and duplicate-free neighbor lists.
    pub fn validate(&self) -> Result<()> {
        for u in 0..self.n() {
            let nb = &self.adj[u];
            if nb.len() != self.wts[u].len() {
                return Err(Error::Structure(format!("node {u}: neighbor/weight length mismatch")));
            }
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Structure(format!("node {u}: neighbor list not strictly sorted")));
            }
            for (&v, &w) in nb.iter().zip(&self.wts[u]) {
                if v >= self.n() {
                    return Err(Error::Structure(format!("node {u}: neighbor {v} out of range")));
                }
                if !(w > 0.0 && w.is_finite()) {
                    return Err(Error::Structure(format!("pair ({u}, {v}) has weight {w}")));
                }
                if self.weight(v, u) != w {
                    return Err(Error::Structure(format!("pair ({u}, {v}) is not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// Hop distances from `src`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Two-coloring of the network if it is bipartite (isolated nodes get
    /// color `false`). Self-edges make a network non-bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n()];
        for s in 0..self.n() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &v in &self.adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }
}

/// Incremental constructor that enforces symmetry and positivity.
#[derive(Debug, Clone)]
pub struct NetworkBuilder {
    n: usize,
    pairs: BTreeMap<(usize, usize), f64>,
}

impl NetworkBuilder {
    pub fn new(n: usize) -> Self {
        NetworkBuilder {
            n,
            pairs: BTreeMap::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Grows the node set so that `u` is a valid node.
    pub fn ensure_node(&mut self, u: usize) {
        self.n = self.n.max(u + 1);
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.pairs.contains_key(&(u.min(v), u.max(v)))
    }

    /// Adds the undirected pair `{u, v}`. Re-adding with the same weight is a
    /// no-op; a conflicting weight is a consistency error.
    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Structure(format!(
                "pair ({u}, {v}) out of range for {} nodes",
                self.n
            )));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::param("weight", format!("pair ({u}, {v}) has non-positive weight {w}")));
        }
        let key = (u.min(v), u.max(v));
        match self.pairs.get(&key) {
            Some(&old) if old != w => Err(Error::Consistency {
                u: u.to_string(),
                v: v.to_string(),
                first: old,
                second: w,
            }),
            Some(_) => Ok(()),
            None => {
                self.pairs.insert(key, w);
                Ok(())
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        self.pairs.remove(&(u.min(v), u.max(v))).is_some()
    }

    pub fn build(self) -> Network {
        let mut adj = vec![Vec::new(); self.n];
        let mut wts = vec![Vec::new(); self.n];
        // BTreeMap order keeps every list sorted without a final sort pass
        // for the `u` side; the `v` side is sorted afterwards.
        for (&(u, v), &w) in &self.pairs {
            adj[u].push(v);
            wts[u].push(w);
            if u != v {
                adj[v].push(u);
                wts[v].push(w);
            }
        }
        for u in 0..self.n {
            if adj[u].windows(2).any(|p| p[0] > p[1]) {
                let mut z: Vec<(usize, f64)> = adj[u].iter().copied().zip(wts[u].iter().copied()).collect();
                z.sort_by_key(|p| p.0);
                adj[u] = z.iter().map(|p| p.0).collect();
                wts[u] = z.iter().map(|p| p.1).collect();
            }
        }
        Network { adj, wts, labels: None }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Network;

    pub fn complete(n: usize) -> Network {
        Network::from_pairs(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn cycle(n: usize) -> Network {
        Network::from_pairs(n, (0..n).map(|u| (u, (u + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Network {
        Network::from_pairs(n, (0..n - 1).map(|u| (u, u + 1))).unwrap()
    }

    pub fn star(leaves: usize) -> Network {
        Network::from_pairs(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    /// Two triangles sharing node 0.
    pub fn bowtie() -> Network {
        Network::from_pairs(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn builder_symmetrizes_and_sorts() {
        let g = Network::from_edges(4, [(3, 0, 2.0), (0, 1, 1.0), (2, 0, 0.5)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.weight(3, 0), 2.0);
        assert_eq!(g.weight(0, 3), 2.0);
        assert_eq!(g.weight(1, 2), 0.0);
        g.validate().unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn conflicting_duplicate_is_rejected() {
        let err = Network::from_edges(2, [(0, 1, 1.0), (1, 0, 2.0)]).unwrap_err();
        assert!(matches!(err, Error::Consistency { .. }));
        assert!(Network::from_edges(2, [(0, 1, 1.0), (1, 0, 1.0)]).is_ok());
    }

    #[test]
    fn self_edge_counts_once() {
        let g = Network::from_pairs(2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_self_edges());
        assert!(g.bipartition().is_none());
    }

    #[test]
    fn connectivity_and_bipartiteness() {
        assert!(cycle(6).bipartition().is_some());
        assert!(cycle(5).bipartition().is_none());
        assert!(bowtie().is_connected());
        let g = Network::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(complete(4).edge_count(), 6);
        assert_eq!(star(5).degree(0), 5);
        assert_eq!(path(4).bfs_distances(0)[3], Some(3));
    }
}
