use alloc::vec;
use alloc::vec::Vec;

use super::TheoryError;

/// Island connectivity: binary adjacency A (A_ij = edge i -> j) plus the
/// row-normalized matrix with entries A_ij / sum_j A_ij. All-zero rows stay
/// all-zero; self-loops are kept only if present in the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    n: usize,
    adjacency: Vec<u8>,
    normalized: Vec<f64>,
}

impl Topology {
    pub fn from_adjacency(rows: &[Vec<f64>]) -> Result<Self, TheoryError> {
        let n = rows.len();
        let mut adjacency = vec![0u8; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(TheoryError::NonSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v == 0.0 {
                    adjacency[i * n + j] = 0;
                } else if v == 1.0 {
                    adjacency[i * n + j] = 1;
                } else {
                    return Err(TheoryError::NonBinary {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        Ok(Self::from_bits(n, adjacency))
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![0u8; n * n];
        for &(src, dst) in edges {
            adjacency[src * n + dst] = 1;
        }
        Self::from_bits(n, adjacency)
    }

    /// Directed ring 0 -> 1 -> ... -> n-1 -> 0.
    pub fn directed_ring(n: usize) -> Self {
        let mut adjacency = vec![0u8; n * n];
        for i in 0..n {
            adjacency[i * n + (i + 1) % n] = 1;
        }
        Self::from_bits(n, adjacency)
    }

    /// Single island, no edges.
    pub fn singleton() -> Self {
        Self::from_bits(1, vec![0])
    }

    fn from_bits(n: usize, adjacency: Vec<u8>) -> Self {
        let mut normalized = vec![0.0; n * n];
        for i in 0..n {
            let row_sum: u32 = adjacency[i * n..(i + 1) * n].iter().map(|&b| b as u32).sum();
            if row_sum > 0 {
                for j in 0..n {
                    normalized[i * n + j] = adjacency[i * n + j] as f64 / row_sum as f64;
                }
            }
        }
        Self {
            n,
            adjacency,
            normalized,
        }
    }

    pub fn n_islands(&self) -> usize {
        self.n
    }

    pub fn edge(&self, from: usize, to: usize) -> bool {
        self.adjacency[from * self.n + to] == 1
    }

    /// Row-normalized weight of edge `from -> to`.
    pub fn normalized_weight(&self, from: usize, to: usize) -> f64 {
        self.normalized[from * self.n + to]
    }

    pub fn out_degree(&self, island: usize) -> usize {
        self.adjacency[island * self.n..(island + 1) * self.n]
            .iter()
            .map(|&b| b as usize)
            .sum()
    }

    pub fn in_degree(&self, island: usize) -> usize {
        (0..self.n).filter(|&j| self.edge(j, island)).count()
    }

    /// sum_j normalized(j, island): the inflow weight entering Eq. 3's n_m.
    pub fn inflow_weight(&self, island: usize) -> f64 {
        (0..self.n).map(|j| self.normalized_weight(j, island)).sum()
    }
}
