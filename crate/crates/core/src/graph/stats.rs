use super::Network;

/// Degree histogram, clustering and diameter of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralStats {
    /// `degree_histogram[d]` is the number of nodes with `d` proper neighbors.
    pub degree_histogram: Vec<usize>,
    /// Local clustering coefficient per node.
    pub clustering: Vec<f64>,
    pub mean_clustering: f64,
    /// Largest finite shortest-path distance (the per-component maximum
    /// when the network is disconnected).
    pub diameter: usize,
    pub connected: bool,
}

pub fn structural_stats(g: &Network) -> StructuralStats {
    let n = g.n();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|u| g.proper_neighbors(u).collect()).collect();
    let max_deg = nbrs.iter().map(Vec::len).max().unwrap_or(0);
    let mut degree_histogram = vec![0; max_deg + 1];
    for nb in &nbrs {
        degree_histogram[nb.len()] += 1;
    }

    let clustering: Vec<f64> = nbrs
        .iter()
        .map(|nb| {
            let d = nb.len();
            if d < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if g.has_edge(a, b) {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (d * (d - 1)) as f64
        })
        .collect();
    let mean_clustering = if n == 0 {
        0.0
    } else {
        clustering.iter().sum::<f64>() / n as f64
    };

    let mut diameter = 0;
    let mut connected = true;
    for s in 0..n {
        for d in g.bfs_distances(s) {
            match d {
                Some(d) => diameter = diameter.max(d),
                None => connected = false,
            }
        }
    }

    StructuralStats {
        degree_histogram,
        clustering,
        mean_clustering,
        diameter,
        connected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn complete_graph() {
        let s = structural_stats(&complete(4));
        assert!(s.clustering.iter().all(|&c| c == 1.0));
        assert_eq!(s.diameter, 1);
        assert_eq!(s.degree_histogram, vec![0, 0, 0, 4]);
    }

    #[test]
    fn path_has_no_triangles() {
        let s = structural_stats(&path(4));
        assert_eq!(s.diameter, 3);
        assert_eq!(s.mean_clustering, 0.0);
    }

    #[test]
    fn six_cycle() {
        let s = structural_stats(&cycle(6));
        assert_eq!(s.diameter, 3);
        assert_eq!(s.mean_clustering, 0.0);
        assert!(s.connected);
    }

    #[test]
    fn bowtie_clustering() {
        // Leaves sit in one triangle each with degree 2; the hub has 2 links
        // among 4 neighbors.
        let s = structural_stats(&bowtie());
        assert_eq!(s.clustering[1], 1.0);
        assert!((s.clustering[0] - 2.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn disconnected_flag() {
        let g = Network::from_pairs(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let s = structural_stats(&g);
        assert!(!s.connected);
        assert_eq!(s.diameter, 2);
    }
}
