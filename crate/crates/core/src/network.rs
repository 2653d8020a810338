//! Communication topology: connected random graphs and consensus weights.
//!
//! Graphs are sampled as Erdos-Renyi with a given edge probability and
//! rejection-resampled until connected, so every run works on a graph where
//! consensus can actually reach all nodes. Edge weights follow the
//! Metropolis-Hastings rule
//!
//! ```text
//! w_nm = 1 / (1 + max(deg_n, deg_m))   for an edge (n, m)
//! w_nn = 1 - sum of the node's edge weights
//! ```
//!
//! which makes the weight matrix symmetric, doubly stochastic, and zero on
//! non-edges, so repeated averaging converges to the flat mean on connected
//! graphs.

use rand::Rng;

use crate::error::{Error, Result};

/// How many rejection-sampling attempts to make before giving up.
pub const MAX_GRAPH_ATTEMPTS: u32 = 10_000;

/// Undirected simple graph stored as a row-major boolean matrix with a false
/// diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    edges: Vec<bool>,
}

impl Adjacency {
    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Adjacency {
        Adjacency {
            n,
            edges: vec![false; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "self loops are not edges");
        self.edges[a * self.n + b] = true;
        self.edges[b * self.n + a] = true;
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges[a * self.n + b]
    }

    /// Number of neighbors, excluding the node itself.
    pub fn degree(&self, a: usize) -> usize {
        (0..self.n).filter(|&b| self.has_edge(a, b)).count()
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&b| self.has_edge(a, b))
    }

    /// Breadth-first reachability from node 0. Graphs with no nodes or a
    /// single node count as connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(a) = queue.pop_front() {
            for b in self.neighbors(a) {
                if !seen[b] {
                    seen[b] = true;
                    reached += 1;
                    queue.push_back(b);
                }
            }
        }
        reached == self.n
    }
}

/// Sample each unordered pair independently with probability `connectivity`.
fn sample_graph(n: usize, connectivity: f64, rng: &mut impl Rng) -> Adjacency {
    let mut adj = Adjacency::empty(n);
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.random::<f64>() < connectivity {
                adj.add_edge(a, b);
            }
        }
    }
    adj
}

/// Sample connected graphs by rejection. Errors after
/// [`MAX_GRAPH_ATTEMPTS`] consecutive disconnected samples.
pub fn random_connected_graph(
    n: usize,
    connectivity: f64,
    rng: &mut impl Rng,
) -> Result<Adjacency> {
    assert!(n >= 2, "a network needs at least two nodes");
    assert!(
        connectivity > 0.0 && connectivity <= 1.0,
        "edge probability must be in (0, 1]"
    );
    for _ in 0..MAX_GRAPH_ATTEMPTS {
        let adj = sample_graph(n, connectivity, rng);
        if adj.is_connected() {
            return Ok(adj);
        }
    }
    Err(Error::GraphSampling {
        n,
        connectivity,
        attempts: MAX_GRAPH_ATTEMPTS,
    })
}

/// Metropolis-Hastings weight matrix, row-major with zeros on non-edges.
pub fn metropolis_hastings_weights(adj: &Adjacency) -> Vec<f64> {
    let n = adj.n();
    let degrees: Vec<usize> = (0..n).map(|a| adj.degree(a)).collect();
    let mut w = vec![0.0; n * n];
    for a in 0..n {
        let mut off_sum = 0.0;
        for b in adj.neighbors(a) {
            let weight = 1.0 / (1 + degrees[a].max(degrees[b])) as f64;
            w[a * n + b] = weight;
            off_sum += weight;
        }
        w[a * n + a] = 1.0 - off_sum;
    }
    w
}

/// A sampled graph together with its consensus weights and, per node, the
/// inbox order used everywhere: the node itself first, then neighbors in
/// ascending index order.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    adjacency: Adjacency,
    weights: Vec<f64>,
    neighborhoods: Vec<Vec<usize>>,
}

impl Topology {
    pub fn from_adjacency(adjacency: Adjacency) -> Topology {
        let weights = metropolis_hastings_weights(&adjacency);
        let neighborhoods = (0..adjacency.n())
            .map(|a| {
                let mut list = vec![a];
                list.extend(adjacency.neighbors(a));
                list
            })
            .collect();
        Topology {
            adjacency,
            weights,
            neighborhoods,
        }
    }

    pub fn random(n: usize, connectivity: f64, rng: &mut impl Rng) -> Result<Topology> {
        Ok(Topology::from_adjacency(random_connected_graph(
            n,
            connectivity,
            rng,
        )?))
    }

    pub fn n(&self) -> usize {
        self.adjacency.n()
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.weights[a * self.n() + b]
    }

    /// Inbox order for node `a`: `(member, weight)` with the node itself
    /// first, then neighbors ascending.
    pub fn neighborhood(&self, a: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.neighborhoods[a]
            .iter()
            .map(move |&b| (b, self.weight(a, b)))
    }
}
