use rand::seq::SliceRandom;
use rand::Rng;

use super::{bits, Graph, GraphError};

/// A graph together with total orders on its vertices and its edges.
///
/// Orders are stored as ranks: `vertex_rank[v] < vertex_rank[w]` means `v`
/// precedes `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedGraph {
    graph: Graph,
    vertex_rank: Vec<usize>,
    edge_rank: Vec<usize>,
}

fn ranks_from_order(order: &[usize], len: usize, what: &str) -> Result<Vec<usize>, GraphError> {
    if order.len() != len {
        return Err(GraphError::InvalidOrder(format!(
            "{what} order has {} entries, expected {len}",
            order.len()
        )));
    }
    let mut rank = vec![usize::MAX; len];
    for (r, &x) in order.iter().enumerate() {
        if x >= len || rank[x] != usize::MAX {
            return Err(GraphError::InvalidOrder(format!(
                "{what} order is not a permutation (entry {x})"
            )));
        }
        rank[x] = r;
    }
    Ok(rank)
}

/// Replace arbitrary distinct keys by their ranks `0..len`.
fn compact(keys: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by_key(|&i| keys[i]);
    let mut out = vec![0; keys.len()];
    for (r, i) in idx.into_iter().enumerate() {
        out[i] = r;
    }
    out
}

impl OrderedGraph {
    /// Label order on vertices, index order on edges.
    pub fn natural(graph: Graph) -> Self {
        OrderedGraph {
            vertex_rank: (0..graph.n()).collect(),
            edge_rank: (0..graph.m()).collect(),
            graph,
        }
    }

    /// Orders are listed smallest first.
    pub fn new(graph: Graph, vertex_order: &[usize], edge_order: &[usize]) -> Result<Self, GraphError> {
        let vertex_rank = ranks_from_order(vertex_order, graph.n(), "vertex")?;
        let edge_rank = ranks_from_order(edge_order, graph.m(), "edge")?;
        Ok(OrderedGraph {
            graph,
            vertex_rank,
            edge_rank,
        })
    }

    /// Given vertex order; edges ordered lexicographically by the ranks of
    /// their (smaller, larger) endpoints.
    pub fn lexicographic(graph: Graph, vertex_order: &[usize]) -> Result<Self, GraphError> {
        let vertex_rank = ranks_from_order(vertex_order, graph.n(), "vertex")?;
        let edge_rank = lexicographic_edge_ranks(&graph, &vertex_rank);
        Ok(OrderedGraph {
            graph,
            vertex_rank,
            edge_rank,
        })
    }

    /// Independent uniformly random vertex and edge orders.
    pub fn random<R: Rng + ?Sized>(graph: Graph, rng: &mut R) -> Self {
        let mut vo: Vec<usize> = (0..graph.n()).collect();
        let mut eo: Vec<usize> = (0..graph.m()).collect();
        vo.shuffle(rng);
        eo.shuffle(rng);
        OrderedGraph::new(graph, &vo, &eo).expect("shuffles are permutations")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn vertex_rank(&self, v: usize) -> usize {
        self.vertex_rank[v]
    }

    pub fn edge_rank(&self, e: usize) -> usize {
        self.edge_rank[e]
    }

    pub fn edge_ranks(&self) -> &[usize] {
        &self.edge_rank
    }

    /// Vertices listed smallest first.
    pub fn vertex_order(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.graph.n()).collect();
        v.sort_by_key(|&x| self.vertex_rank[x]);
        v
    }

    /// Edge indices listed smallest first.
    pub fn edge_order(&self) -> Vec<usize> {
        let mut e: Vec<usize> = (0..self.graph.m()).collect();
        e.sort_by_key(|&x| self.edge_rank[x]);
        e
    }

    /// Smallest vertex of `mask` under the vertex order.
    pub fn min_vertex(&self, mask: u64) -> Option<usize> {
        bits(mask).min_by_key(|&v| self.vertex_rank[v])
    }

    /// Same graph and edge order; the listed vertices move to the front in
    /// the given order, the rest keep their relative order.
    pub fn with_vertices_first(&self, first: &[usize]) -> Result<Self, GraphError> {
        let mut order: Vec<usize> = first.to_vec();
        let mut mask = 0u64;
        for &v in first {
            if v >= self.graph.n() || mask >> v & 1 == 1 {
                return Err(GraphError::InvalidOrder(format!("bad leading vertex {v}")));
            }
            mask |= 1 << v;
        }
        order.extend(self.vertex_order().into_iter().filter(|&v| mask >> v & 1 == 0));
        let vertex_rank = ranks_from_order(&order, self.graph.n(), "vertex")?;
        Ok(OrderedGraph {
            graph: self.graph.clone(),
            vertex_rank,
            edge_rank: self.edge_rank.clone(),
        })
    }

    /// Induced subgraph on `mask` with both orders inherited. Returns the old
    /// label of every new vertex.
    pub fn induced(&self, mask: u64) -> (OrderedGraph, Vec<usize>) {
        let (sub, old) = self.graph.induced(mask);
        let vertex_rank = compact(&old.iter().map(|&v| self.vertex_rank[v]).collect::<Vec<_>>());
        let edge_keys: Vec<usize> = sub
            .edges()
            .iter()
            .map(|&(a, b)| {
                let e = self
                    .graph
                    .edge_index(old[a], old[b])
                    .expect("induced edge exists in parent");
                self.edge_rank[e]
            })
            .collect();
        let edge_rank = compact(&edge_keys);
        (
            OrderedGraph {
                graph: sub,
                vertex_rank,
                edge_rank,
            },
            old,
        )
    }

    /// `G / e` with inherited orders: the merged vertex takes the smaller
    /// rank of the two endpoints, and a merged pair of parallel edges keeps
    /// the smaller rank.
    pub fn contract_edge(&self, e: usize) -> Result<(OrderedGraph, Vec<usize>), GraphError> {
        let (u, v) = self.graph.edge(e)?;
        let (sub, map) = self.graph.contract_edge_mapped(e)?;
        let mut vertex_keys = vec![usize::MAX; sub.n()];
        for (old, &new) in map.iter().enumerate() {
            vertex_keys[new] = vertex_keys[new].min(self.vertex_rank[old]);
        }
        debug_assert_eq!(vertex_keys[map[u]], self.vertex_rank[u].min(self.vertex_rank[v]));
        let mut edge_keys = vec![usize::MAX; sub.m()];
        for (i, &(a, b)) in self.graph.edges().iter().enumerate() {
            if i == e {
                continue;
            }
            if let Some(j) = sub.edge_index(map[a], map[b]) {
                edge_keys[j] = edge_keys[j].min(self.edge_rank[i]);
            }
        }
        Ok((
            OrderedGraph {
                vertex_rank: compact(&vertex_keys),
                edge_rank: compact(&edge_keys),
                graph: sub,
            },
            map,
        ))
    }

    /// `G \ e` with inherited orders.
    pub fn delete_edge(&self, e: usize) -> Result<OrderedGraph, GraphError> {
        let sub = self.graph.delete_edge(e)?;
        let edge_keys: Vec<usize> = sub
            .edges()
            .iter()
            .map(|&(a, b)| self.edge_rank[self.graph.edge_index(a, b).expect("edge survives")])
            .collect();
        Ok(OrderedGraph {
            vertex_rank: self.vertex_rank.clone(),
            edge_rank: compact(&edge_keys),
            graph: sub,
        })
    }

    /// `G - S` with inherited orders.
    pub fn remove_vertices(&self, mask: u64) -> OrderedGraph {
        self.induced(self.graph.vertex_mask() & !mask).0
    }
}

pub(crate) fn lexicographic_edge_ranks(graph: &Graph, vertex_rank: &[usize]) -> Vec<usize> {
    let keys: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (ra, rb) = (vertex_rank[a], vertex_rank[b]);
            (ra.min(rb), ra.max(rb))
        })
        .collect();
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by_key(|&i| keys[i]);
    let mut rank = vec![0; keys.len()];
    for (r, i) in idx.into_iter().enumerate() {
        rank[i] = r;
    }
    rank
}
