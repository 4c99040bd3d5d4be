use alloc::vec;
use alloc::vec::Vec;

use super::{gaussian_kl, kl_total};
use crate::stats::CumulantVector;
use crate::theory::Topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphSource {
    Theoretical,
    Empirical,
}

impl GraphSource {
    pub fn tag(&self) -> &'static str {
        match self {
            GraphSource::Theoretical => "theoretical",
            GraphSource::Empirical => "empirical",
        }
    }
}

/// Weighted directed dissimilarity graph: dense W with W[l][q] = KL(p_l || p_q).
///
/// W is computed for every ordered pair regardless of the adjacency; the
/// topology's edges are carried alongside as a rendering mask. Islands with
/// kappa_2 <= 0 have their row and column marked undefined (NaN) instead of
/// failing the whole graph. Corrected weights may be negative (expansion
/// artifact) and are stored unclamped, with a flag.
#[derive(Debug, Clone)]
pub struct KLGraph {
    n: usize,
    weights: Vec<f64>,
    gaussian_weights: Vec<f64>,
    defined: Vec<bool>,
    edges: Vec<bool>,
    generation: usize,
    source: GraphSource,
}

impl KLGraph {
    pub fn n_islands(&self) -> usize {
        self.n
    }

    /// Corrected weight l -> q; NaN when either island is undefined.
    pub fn weight(&self, l: usize, q: usize) -> f64 {
        self.weights[l * self.n + q]
    }

    /// Gaussian-only weight l -> q.
    pub fn gaussian_weight(&self, l: usize, q: usize) -> f64 {
        self.gaussian_weights[l * self.n + q]
    }

    pub fn is_defined(&self, island: usize) -> bool {
        self.defined[island]
    }

    /// Whether l -> q is an edge of the input topology.
    pub fn edge(&self, l: usize, q: usize) -> bool {
        self.edges[l * self.n + q]
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn source(&self) -> GraphSource {
        self.source
    }

    pub fn has_negative_weight(&self) -> bool {
        self.weights.iter().any(|w| w.is_finite() && *w < 0.0)
    }
}

/// Dense divergence matrix over all island pairs at one generation.
pub fn build_kl_graph(
    kappa_all: &[CumulantVector],
    topology: &Topology,
    generation: usize,
    source: GraphSource,
) -> KLGraph {
    let n = kappa_all.len();
    let defined: Vec<bool> = kappa_all.iter().map(|k| k.variance() > 0.0).collect();
    let mut weights = vec![0.0; n * n];
    let mut gaussian_weights = vec![0.0; n * n];
    let mut edges = vec![false; n * n];
    for l in 0..n {
        for q in 0..n {
            if topology.n_islands() == n {
                edges[l * n + q] = topology.edge(l, q);
            }
            if l == q {
                continue;
            }
            if defined[l] && defined[q] {
                weights[l * n + q] = kl_total(&kappa_all[l], &kappa_all[q])
                    .expect("positive variances checked");
                gaussian_weights[l * n + q] = gaussian_kl(
                    kappa_all[l].mean(),
                    kappa_all[l].variance(),
                    kappa_all[q].mean(),
                    kappa_all[q].variance(),
                )
                .expect("positive variances checked");
            } else {
                weights[l * n + q] = f64::NAN;
                gaussian_weights[l * n + q] = f64::NAN;
            }
        }
    }
    KLGraph {
        n,
        weights,
        gaussian_weights,
        defined,
        edges,
        generation,
        source,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(values: &[f64]) -> CumulantVector {
        CumulantVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn identical_islands_zero_matrix() {
        let k = cv(&[0.0, 1.0, 0.1, 0.0]);
        let topo = Topology::directed_ring(3);
        let g = build_kl_graph(&[k.clone(), k.clone(), k], &topo, 7, GraphSource::Theoretical);
        for l in 0..3 {
            for q in 0..3 {
                assert_eq!(g.weight(l, q), 0.0);
            }
        }
        assert_eq!(g.generation(), 7);
        assert!(!g.has_negative_weight());
    }

    #[test]
    fn two_gaussian_islands_symmetric_half() {
        let topo = Topology::directed_ring(2);
        let g = build_kl_graph(
            &[cv(&[0.0, 1.0, 0.0, 0.0]), cv(&[1.0, 1.0, 0.0, 0.0])],
            &topo,
            0,
            GraphSource::Theoretical,
        );
        assert_eq!(g.weight(0, 1), 0.5);
        assert_eq!(g.weight(1, 0), 0.5);
        assert_eq!(g.weight(0, 0), 0.0);
    }

    #[test]
    fn degenerate_island_marks_row_and_column() {
        let topo = Topology::directed_ring(3);
        let g = build_kl_graph(
            &[
                cv(&[0.0, 1.0, 0.0, 0.0]),
                cv(&[1.0, 0.0, 0.0, 0.0]),
                cv(&[2.0, 1.0, 0.0, 0.0]),
            ],
            &topo,
            0,
            GraphSource::Empirical,
        );
        assert!(!g.is_defined(1));
        assert!(g.weight(0, 1).is_nan());
        assert!(g.weight(1, 2).is_nan());
        assert!(g.weight(0, 2).is_finite());
    }

    #[test]
    fn asymmetry_of_variance_pairs() {
        let topo = Topology::directed_ring(2);
        let g = build_kl_graph(
            &[cv(&[0.0, 1.0, 0.0, 0.0]), cv(&[0.0, 2.0, 0.0, 0.0])],
            &topo,
            0,
            GraphSource::Theoretical,
        );
        assert!((g.weight(0, 1) - g.weight(1, 0)).abs() > 1e-3);
    }
}
