use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng as _;

use super::{Network, NetworkBuilder};
use crate::error::{Error, Result};
use crate::rng::{self, Rng};

/// Random-graph models.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    /// Erdős–Rényi: each pair independently with probability `p`.
    Er { n: usize, p: f64 },
    /// Watts–Strogatz: ring where each node links to its `k` nearest
    /// neighbors (`k / 2` per side), each ring edge rewired with probability `p`.
    Ws { n: usize, k: usize, p: f64 },
    /// Barabási–Albert: `n0` isolated seeds, each new node attaches `n0` edges
    /// by linear preferential attachment.
    Ba { n: usize, n0: usize },
    /// Stochastic block model with block sizes and a symmetric matrix of
    /// within/between-block edge probabilities.
    Sbm { sizes: Vec<usize>, probs: Vec<Vec<f64>> },
}

impl ModelSpec {
    /// SBM with a constant within-block and between-block probability.
    pub fn sbm_uniform(sizes: Vec<usize>, p_in: f64, p_out: f64) -> Self {
        let b = sizes.len();
        let probs = (0..b)
            .map(|i| (0..b).map(|j| if i == j { p_in } else { p_out }).collect())
            .collect();
        ModelSpec::Sbm { sizes, probs }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |name: &'static str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::param(name, format!("probability {p} outside [0, 1]")))
            }
        };
        match self {
            ModelSpec::Er { p, .. } => prob("p", *p),
            ModelSpec::Ws { n, k, p } => {
                prob("p", *p)?;
                if *k >= *n {
                    return Err(Error::param("k", format!("ring degree {k} must be below n = {n}")));
                }
                Ok(())
            }
            ModelSpec::Ba { n, n0 } => {
                if *n0 == 0 {
                    return Err(Error::param("n0", "must be at least 1"));
                }
                if n < n0 {
                    return Err(Error::param("n", format!("n = {n} is below n0 = {n0}")));
                }
                Ok(())
            }
            ModelSpec::Sbm { sizes, probs } => {
                if sizes.is_empty() || sizes.contains(&0) {
                    return Err(Error::param("sizes", "block sizes must be positive"));
                }
                if probs.len() != sizes.len() || probs.iter().any(|r| r.len() != sizes.len()) {
                    return Err(Error::param("probs", "block matrix must be square with one row per block"));
                }
                for i in 0..sizes.len() {
                    for j in 0..sizes.len() {
                        prob("probs", probs[i][j])?;
                        if probs[i][j] != probs[j][i] {
                            return Err(Error::param("probs", "block matrix must be symmetric"));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// Draws a simple undirected binary network from `spec`.
pub fn generate(spec: &ModelSpec, seed: u64) -> Result<Network> {
    spec.validate()?;
    let mut rng = rng::stream(seed, rng::ids::GENERATE);
    Ok(match spec {
        ModelSpec::Er { n, p } => erdos_renyi(*n, *p, &mut rng),
        ModelSpec::Ws { n, k, p } => {
            let edges = watts_strogatz_edges(*n, *k, *p, &mut rng);
            Network::from_pairs(*n, edges)?
        }
        ModelSpec::Ba { n, n0 } => barabasi_albert(*n, *n0, &mut rng),
        ModelSpec::Sbm { sizes, probs } => sbm(sizes, probs, &mut rng),
    })
}

fn erdos_renyi(n: usize, p: f64, rng: &mut Rng) -> Network {
    let mut b = NetworkBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                b.add_edge(u, v, 1.0).expect("valid pair");
            }
        }
    }
    b.build()
}

fn sbm(sizes: &[usize], probs: &[Vec<f64>], rng: &mut Rng) -> Network {
    let block: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
        .collect();
    let n = block.len();
    let mut b = NetworkBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < probs[block[u]][block[v]] {
                b.add_edge(u, v, 1.0).expect("valid pair");
            }
        }
    }
    b.build()
}

/// Edge list of a Watts–Strogatz graph on nodes `0..n`.
///
/// Ring edges are visited in the canonical order (offset, then node). A
/// rewired edge keeps one endpoint (each with probability 1/2) and moves the
/// other to a uniformly random node that creates neither a self-edge nor a
/// duplicate; if no such node exists the edge is left in place.
pub(crate) fn watts_strogatz_edges(n: usize, k: usize, p: f64, rng: &mut Rng) -> Vec<(usize, usize)> {
    let key = |u: usize, v: usize| (u.min(v), u.max(v));
    let half = k / 2;
    let mut ring = Vec::new();
    for j in 1..=half {
        for i in 0..n {
            let e = key(i, (i + j) % n);
            if e.0 != e.1 && !ring.contains(&e) {
                ring.push(e);
            }
        }
    }
    let mut present: HashSet<(usize, usize)> = ring.iter().copied().collect();
    let mut order = ring.clone();
    for slot in order.iter_mut() {
        if rng.random::<f64>() >= p {
            continue;
        }
        let (a, b) = *slot;
        let keep = if rng.random::<bool>() { a } else { b };
        let free = (0..n).filter(|&w| w != keep && !present.contains(&key(keep, w))).count();
        if free == 0 {
            continue;
        }
        let target = loop {
            let w = rng.random_range(0..n);
            if w != keep && !present.contains(&key(keep, w)) {
                break w;
            }
        };
        present.remove(slot);
        let e = key(keep, target);
        present.insert(e);
        *slot = e;
    }
    order
}

fn barabasi_albert(n: usize, n0: usize, rng: &mut Rng) -> Network {
    let mut b = NetworkBuilder::new(n);
    // Each endpoint occurrence appears once, so a uniform draw is
    // degree-proportional.
    let mut endpoints: Vec<usize> = Vec::new();
    for v in n0..n {
        let targets: Vec<usize> = if endpoints.is_empty() {
            sample(rng, v, n0).into_vec()
        } else {
            let mut chosen = Vec::with_capacity(n0);
            while chosen.len() < n0 {
                let t = endpoints[rng.random_range(0..endpoints.len())];
                if !chosen.contains(&t) {
                    chosen.push(t);
                }
            }
            chosen
        };
        for t in targets {
            b.add_edge(v, t, 1.0).expect("valid pair");
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_with_p_one_is_complete() {
        let g = generate(&ModelSpec::Er { n: 5, p: 1.0 }, 1).unwrap();
        assert_eq!(g.edge_count(), 10);
    }

    #[test]
    fn er_edge_count_within_four_sigma() {
        let (n, p) = (5000usize, 0.01);
        let g = generate(&ModelSpec::Er { n, p }, 3).unwrap();
        let pairs = (n * (n - 1) / 2) as f64;
        let mean = pairs * p;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        assert!((mean - 124_975.0).abs() < 1e-6);
        assert!((g.edge_count() as f64 - mean).abs() <= 4.0 * sd, "{} edges", g.edge_count());
    }

    #[test]
    fn sbm_edge_count_matches_reported_instance_scale() {
        // 3 blocks of 1000: 3 * C(1000,2) * 0.5 + 3 * 1000^2 * 0.001
        let mean: f64 = 3.0 * 499_500.0 * 0.5 + 3.0 * 1.0e6 * 0.001;
        assert!((mean - 752_250.0).abs() < 1e-6);
        let var: f64 = 3.0 * 499_500.0 * 0.25 + 3.0 * 1.0e6 * 0.001 * 0.999;
        let g = generate(&ModelSpec::sbm_uniform(vec![1000; 3], 0.5, 0.001), 11).unwrap();
        let m = g.edge_count() as f64;
        assert!((m - mean).abs() <= 4.0 * var.sqrt(), "{m}");
        // The published instance (752,450 edges) is well inside the same band.
        assert!((752_450.0 - mean).abs() <= 4.0 * var.sqrt());
    }

    #[test]
    fn ws_without_rewiring_is_a_ring_lattice() {
        let g = generate(&ModelSpec::Ws { n: 10, k: 4, p: 0.0 }, 0).unwrap();
        assert_eq!(g.edge_count(), 20);
        assert!((0..10).all(|u| g.degree(u) == 4));
        assert!(g.has_edge(0, 9) && g.has_edge(0, 8));
    }

    #[test]
    fn ws_rewiring_preserves_edge_count_and_simplicity() {
        let g = generate(&ModelSpec::Ws { n: 50, k: 4, p: 0.3 }, 5).unwrap();
        assert_eq!(g.edge_count(), 100);
        assert!(!g.has_self_edges());
        g.validate().unwrap();
    }

    #[test]
    fn ba_edge_count() {
        let g = generate(&ModelSpec::Ba { n: 100, n0: 3 }, 2).unwrap();
        assert_eq!(g.edge_count(), 97 * 3);
        assert!(g.is_connected());
    }

    #[test]
    fn generation_is_reproducible() {
        let spec = ModelSpec::Ws { n: 40, k: 4, p: 0.2 };
        assert_eq!(generate(&spec, 9).unwrap(), generate(&spec, 9).unwrap());
        assert_ne!(generate(&spec, 9).unwrap(), generate(&spec, 10).unwrap());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(generate(&ModelSpec::Er { n: 3, p: 1.5 }, 0).is_err());
        assert!(generate(&ModelSpec::Ba { n: 2, n0: 3 }, 0).is_err());
        assert!(generate(&ModelSpec::Ws { n: 4, k: 4, p: 0.1 }, 0).is_err());
        assert!(generate(&ModelSpec::sbm_uniform(vec![2, 0], 0.5, 0.1), 0).is_err());
    }
}
