use crate::graph_io::{Dyad, ObservedGraph};

/// Adjacency of a training graph in compressed-row form.
///
/// Latent counts are only ever nonzero on observed edges, so per-subnetwork
/// count vectors are indexed by edge position in [`Topology::edges`].
/// Unobserved (held-out) dyads are tracked separately because they are
/// removed from the dyad totals of every block pair.
#[derive(Clone, Debug)]
pub struct Topology {
    n: usize,
    edges: Vec<Dyad>,
    unobserved: Vec<Dyad>,
    edge_offsets: Vec<usize>,
    // (neighbour, edge index)
    edge_adj: Vec<(u32, u32)>,
    held_offsets: Vec<usize>,
    held_adj: Vec<u32>,
}

fn csr<T: Copy + Default>(n: usize, items: impl Iterator<Item = (u32, T)> + Clone) -> (Vec<usize>, Vec<T>) {
    let mut offsets = vec![0usize; n + 1];
    for (v, _) in items.clone() {
        offsets[v as usize + 1] += 1;
    }
    for v in 0..n {
        offsets[v + 1] += offsets[v];
    }
    let mut fill = offsets.clone();
    let mut out = vec![T::default(); offsets[n]];
    for (v, t) in items {
        out[fill[v as usize]] = t;
        fill[v as usize] += 1;
    }
    (offsets, out)
}

impl Topology {
    pub fn new(n: usize, edges: Vec<Dyad>, unobserved: Vec<Dyad>) -> Self {
        let edge_items = edges.iter().enumerate().flat_map(|(e, &(i, j))| {
            [(i, (j, e as u32)), (j, (i, e as u32))]
        });
        let (edge_offsets, edge_adj) = csr(n, edge_items);
        let held_items = unobserved.iter().flat_map(|&(i, j)| [(i, j), (j, i)]);
        let (held_offsets, held_adj) = csr(n, held_items);
        Topology {
            n,
            edges,
            unobserved,
            edge_offsets,
            edge_adj,
            held_offsets,
            held_adj,
        }
    }

    pub fn from_graph(g: &ObservedGraph) -> Self {
        Topology::new(g.n(), g.edges().to_vec(), g.unobserved().to_vec())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edges(&self) -> &[Dyad] {
        &self.edges
    }

    #[inline]
    pub fn unobserved(&self) -> &[Dyad] {
        &self.unobserved
    }

    /// `(neighbour, edge index)` pairs of vertex `v`.
    #[inline]
    pub fn edge_neighbours(&self, v: usize) -> &[(u32, u32)] {
        &self.edge_adj[self.edge_offsets[v]..self.edge_offsets[v + 1]]
    }

    /// Vertices sharing an unobserved dyad with `v`.
    #[inline]
    pub fn unobserved_neighbours(&self, v: usize) -> &[u32] {
        &self.held_adj[self.held_offsets[v]..self.held_offsets[v + 1]]
    }
}
