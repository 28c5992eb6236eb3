//! Simple undirected graphs on at most 64 vertices.
//!
//! Vertices are dense labels `0..n`; adjacency is stored as one `u64`
//! bitmask per vertex and the edge list is kept sorted, so an edge index is
//! a stable handle for as long as the graph is not modified. Every surgery
//! (`delete_edge`, `delete_vertex`, `contract_edge`, `induced`) returns a new
//! graph relabelled densely, preserving the relative order of surviving
//! vertices.

mod io;
mod order;

pub use io::{parse_edge_list, parse_graph6, parse_graphs, to_edge_list, to_graph6};
pub use order::OrderedGraph;

use std::fmt;

use thiserror::Error;

/// Largest supported vertex count (one adjacency word per vertex).
pub const MAX_VERTICES: usize = 64;

/// Largest edge count for which edge subsets can be represented as an [`EdgeSet`].
pub const MAX_SUBSET_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex label {label} out of range for a graph on {n} vertices")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("at most {MAX_VERTICES} vertices are supported, got {0}")]
    TooManyVertices(usize),
    #[error("no edge with index {0}")]
    MissingEdge(usize),
    #[error("no vertex {0}")]
    MissingVertex(usize),
    #[error("edge set contains a cycle")]
    NotAForest,
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("malformed graph6 token: {0}")]
    Graph6(String),
    #[error("malformed edge list: {0}")]
    EdgeList(String),
}

/// Iterate over the set bits of a mask, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Mask with the lowest `n` bits set.
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of the edge indices of a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct EdgeSet(pub u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = EdgeSet::EMPTY;
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        debug_assert!(e < MAX_SUBSET_EDGES);
        self.0 |= 1 << e;
    }

    pub fn with(self, e: usize) -> Self {
        let mut s = self;
        s.insert(e);
        s
    }

    pub fn union(self, other: EdgeSet) -> Self {
        EdgeSet(self.0 | other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        bits(self.0)
    }
}

/// Length of a shortest cycle; forests have infinite girth.
///
/// `Infinite` compares greater than every finite value, so `girth >= Finite(g)`
/// reads as "girth at least g" for forests too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn at_least(self, g: usize) -> bool {
        self >= Girth::Finite(g)
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

/// A simple undirected graph with vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            n,
            edges: Vec::new(),
            adj: vec![0; n],
        })
    }

    /// Build a graph from label pairs. Repeated pairs (in either orientation)
    /// collapse to a single edge.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in pairs {
            for label in [u, v] {
                if label >= n {
                    return Err(GraphError::LabelOutOfRange { label, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        g.rebuild_edges();
        Ok(g)
    }

    /// Build from symmetric adjacency masks. Callers guarantee symmetry and
    /// an empty diagonal.
    pub(crate) fn from_adjacency(adj: Vec<u64>) -> Self {
        let mut g = Graph {
            n: adj.len(),
            edges: Vec::new(),
            adj,
        };
        debug_assert!((0..g.n).all(|v| g.adj[v] >> v & 1 == 0));
        g.rebuild_edges();
        g
    }

    fn rebuild_edges(&mut self) {
        self.edges.clear();
        for u in 0..self.n {
            for v in bits(self.adj[u] >> u) {
                if v > 0 {
                    self.edges.push((u, u + v));
                }
            }
        }
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        Graph::from_edge_list(n, &pairs)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::EdgeList(format!(
                "a cycle needs at least 3 vertices, got {n}"
            )));
        }
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &pairs)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edge_list(n, &pairs)
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self, GraphError> {
        let mut pairs = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                pairs.push((u, v));
            }
        }
        Graph::from_edge_list(a + b, &pairs)
    }

    /// `K_{1,k}` with the center at label 0.
    pub fn star(k: usize) -> Result<Self, GraphError> {
        Graph::complete_bipartite(1, k)
    }

    pub fn petersen() -> Self {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edge_list(10, &pairs).expect("petersen edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Result<(usize, usize), GraphError> {
        self.edges.get(e).copied().ok_or(GraphError::MissingEdge(e))
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    /// Neighbourhood of `v` as a vertex mask.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> {
        bits(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    /// Edge indices with both endpoints in `mask`.
    pub fn edges_within(&self, mask: u64) -> EdgeSet {
        let mut s = EdgeSet::EMPTY;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
                s.insert(i);
            }
        }
        s
    }

    /// Edge indices incident to `v`.
    pub fn incident_edges(&self, v: usize) -> EdgeSet {
        EdgeSet::from_indices(
            self.edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == v || b == v)
                .map(|(i, _)| i),
        )
    }

    /// Vertices reachable from `start` inside `within`.
    pub fn reach(&self, start: usize, within: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v] & within;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen & (within | 1 << start)
    }

    /// Whether the subgraph induced by `mask` is connected (the empty set is not).
    pub fn is_connected_within(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let start = mask.trailing_zeros() as usize;
        self.reach(start, mask) == mask
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.is_connected_within(self.vertex_mask())
    }

    /// Vertex masks of the connected components, ordered by smallest label.
    pub fn components(&self) -> Vec<u64> {
        let mut rest = self.vertex_mask();
        let mut out = Vec::new();
        while rest != 0 {
            let c = self.reach(rest.trailing_zeros() as usize, rest);
            out.push(c);
            rest &= !c;
        }
        out
    }

    /// Induced subgraph on `mask`, relabelled in increasing label order.
    /// Also returns the old label of each new vertex.
    pub fn induced(&self, mask: u64) -> (Graph, Vec<usize>) {
        let mask = mask & self.vertex_mask();
        let old: Vec<usize> = bits(mask).collect();
        let mut new_of = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let adj = old
            .iter()
            .map(|&v| bits(self.adj[v] & mask).fold(0u64, |acc, w| acc | 1 << new_of[w]))
            .collect();
        (Graph::from_adjacency(adj), old)
    }

    /// `G - S`: remove a set of vertices and their incident edges.
    pub fn remove_vertices(&self, mask: u64) -> Graph {
        self.induced(self.vertex_mask() & !mask).0
    }

    pub fn delete_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        if v >= self.n {
            return Err(GraphError::MissingVertex(v));
        }
        Ok(self.remove_vertices(1 << v))
    }

    pub fn delete_edge(&self, e: usize) -> Result<Graph, GraphError> {
        let (u, v) = self.edge(e)?;
        let mut adj = self.adj.clone();
        adj[u] &= !(1 << v);
        adj[v] &= !(1 << u);
        Ok(Graph::from_adjacency(adj))
    }

    /// `G / e`. The merged vertex keeps the smaller endpoint's position; the
    /// resulting loop is dropped and parallel edges collapse.
    pub fn contract_edge(&self, e: usize) -> Result<Graph, GraphError> {
        self.contract_edge_mapped(e).map(|(g, _)| g)
    }

    /// Like [`Graph::contract_edge`], also returning the new label of every old vertex.
    pub fn contract_edge_mapped(&self, e: usize) -> Result<(Graph, Vec<usize>), GraphError> {
        let (u, v) = self.edge(e)?;
        let map: Vec<usize> = (0..self.n)
            .map(|w| match w.cmp(&v) {
                std::cmp::Ordering::Less => w,
                std::cmp::Ordering::Equal => u,
                std::cmp::Ordering::Greater => w - 1,
            })
            .collect();
        let mut adj = vec![0u64; self.n - 1];
        for &(a, b) in &self.edges {
            let (x, y) = (map[a], map[b]);
            if x != y {
                adj[x] |= 1 << y;
                adj[y] |= 1 << x;
            }
        }
        Ok((Graph::from_adjacency(adj), map))
    }

    /// Common neighbours of `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        (self.adj[u] & self.adj[v]).count_ones() as usize
    }

    /// Vertex set touched by an edge set.
    pub fn vertices_of(&self, set: EdgeSet) -> u64 {
        set.iter().fold(0, |acc, e| {
            let (u, v) = self.edges[e];
            acc | 1 << u | 1 << v
        })
    }

    /// Whether `set` is acyclic.
    pub fn is_forest(&self, set: EdgeSet) -> bool {
        let mut dsu = Dsu::new(self.n);
        set.iter().all(|e| {
            let (u, v) = self.edges[e];
            dsu.union(u, v)
        })
    }

    /// Vertex masks of the components of `(V, set)`, singletons included.
    pub fn forest_components(&self, set: EdgeSet) -> Vec<u64> {
        let mut dsu = Dsu::new(self.n);
        for e in set.iter() {
            let (u, v) = self.edges[e];
            dsu.union(u, v);
        }
        let mut by_root = vec![0u64; self.n];
        for v in 0..self.n {
            by_root[dsu.find(v)] |= 1 << v;
        }
        by_root.into_iter().filter(|&m| m != 0).collect()
    }

    /// Shortest cycle length, by a breadth-first search from every vertex.
    pub fn girth(&self) -> Girth {
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..self.n {
            dist.fill(usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                if 2 * dist[x] + 1 >= best {
                    break;
                }
                for y in self.neighbors(x) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        best = best.min(dist[x] + dist[y] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// No induced `K_{1,3}`.
    pub fn is_claw_free(&self) -> bool {
        (0..self.n).all(|v| {
            let nb: Vec<usize> = self.neighbors(v).collect();
            for (i, &a) in nb.iter().enumerate() {
                for (j, &b) in nb.iter().enumerate().skip(i + 1) {
                    if self.has_edge(a, b) {
                        continue;
                    }
                    for &c in &nb[j + 1..] {
                        if !self.has_edge(a, c) && !self.has_edge(b, c) {
                            return false;
                        }
                    }
                }
            }
            true
        })
    }

    /// Whether no edge has both endpoints in `mask`.
    pub fn is_independent(&self, mask: u64) -> bool {
        bits(mask).all(|v| self.adj[v] & mask == 0)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", to_graph6(self))
    }
}

/// Union-find over `0..n`.
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
