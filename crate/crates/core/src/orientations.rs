//! Acyclic orientations with a unique source, the map `phi` from such
//! orientations to stable spanning trees, the orientation polynomial `A_G`
//! and star forests (forests whose components are `phi` images).

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{bits, full_mask, EdgeSet, Graph, GraphError, OrderedGraph, MAX_SUBSET_EDGES};
use crate::poly::IntPolynomial;
use crate::tree_genfun::{eval_nonnegative, stable_tree_genfun};
use crate::whitney::forest_polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientationError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph is not connected")]
    Disconnected,
    #[error("orientation has a directed cycle")]
    NotAcyclic,
    #[error("vertex {0} is not the unique source")]
    NotUniqueSource(usize),
    #[error("edge set is not a spanning tree of the graph")]
    NotSpanningTree,
    #[error("tree is not stable")]
    NotStable,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A direction for every edge: `forward[e]` means edge `(a, b)` with
/// `a < b` points from `a` to `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    graph: Graph,
    forward: Vec<bool>,
}

impl Orientation {
    pub fn new(graph: Graph, forward: Vec<bool>) -> Result<Self, OrientationError> {
        if forward.len() != graph.m() {
            return Err(OrientationError::Precondition(format!(
                "{} directions for {} edges",
                forward.len(),
                graph.m()
            )));
        }
        Ok(Orientation { graph, forward })
    }

    /// Orientation given by a list of arcs, one per edge.
    pub fn from_arcs(graph: Graph, arcs: &[(usize, usize)]) -> Result<Self, OrientationError> {
        let mut forward = vec![None; graph.m()];
        for &(a, b) in arcs {
            let e = graph
                .edge_index(a, b)
                .ok_or(OrientationError::Graph(GraphError::MissingEdge(usize::MAX)))?;
            if forward[e].replace(a < b).is_some() {
                return Err(OrientationError::Precondition(format!("edge {a}-{b} directed twice")));
            }
        }
        let forward = forward
            .into_iter()
            .collect::<Option<Vec<bool>>>()
            .ok_or_else(|| OrientationError::Precondition("some edge has no direction".into()))?;
        Ok(Orientation { graph, forward })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `(tail, head)` of edge `e`.
    pub fn arc(&self, e: usize) -> (usize, usize) {
        let (a, b) = self.graph.edges()[e];
        if self.forward[e] {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.graph.m()).map(|e| self.arc(e)).collect()
    }

    /// In-neighbour mask of every vertex.
    fn in_masks(&self) -> Vec<u64> {
        let mut inn = vec![0u64; self.graph.n()];
        for e in 0..self.graph.m() {
            let (t, h) = self.arc(e);
            inn[h] |= 1 << t;
        }
        inn
    }

    pub fn is_acyclic(&self) -> bool {
        let inn = self.in_masks();
        let mut left = self.graph.vertex_mask();
        loop {
            let sources: u64 = bits(left).filter(|&v| inn[v] & left == 0).fold(0, |m, v| m | 1 << v);
            if sources == 0 {
                return left == 0;
            }
            left &= !sources;
        }
    }

    /// Vertices without incoming edges.
    pub fn sources(&self) -> u64 {
        let inn = self.in_masks();
        (0..self.graph.n()).filter(|&v| inn[v] == 0).fold(0, |m, v| m | 1 << v)
    }

    pub fn has_unique_source(&self, v: usize) -> bool {
        v < self.graph.n() && self.sources() == 1 << v
    }
}

/// A spanning tree of `graph[vertices]` with a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StableTree {
    pub root: usize,
    pub vertices: u64,
    pub edges: EdgeSet,
}

impl StableTree {
    /// Tree distance of every vertex from the root (`usize::MAX` outside).
    pub fn depths(&self, g: &Graph) -> Vec<usize> {
        let mut depth = vec![usize::MAX; g.n()];
        depth[self.root] = 0;
        let mut frontier = vec![self.root];
        while let Some(a) = frontier.pop() {
            for e in self.edges.iter() {
                let (x, y) = g.edges()[e];
                let b = if x == a {
                    y
                } else if y == a {
                    x
                } else {
                    continue;
                };
                if depth[b] == usize::MAX {
                    depth[b] = depth[a] + 1;
                    frontier.push(b);
                }
            }
        }
        depth
    }

    /// Vertex masks of the distance levels.
    pub fn levels(&self, g: &Graph) -> Vec<u64> {
        let depth = self.depths(g);
        let mut levels = Vec::new();
        for v in bits(self.vertices) {
            let d = depth[v];
            if d == usize::MAX {
                continue;
            }
            if levels.len() <= d {
                levels.resize(d + 1, 0);
            }
            levels[d] |= 1 << v;
        }
        levels
    }

    /// Whether the edges form a tree on `vertices` through the root.
    pub fn is_tree(&self, g: &Graph) -> bool {
        self.vertices >> self.root & 1 == 1
            && self.edges.len() + 1 == self.vertices.count_ones() as usize
            && (self.edges.is_empty() || g.vertices_of(self.edges) == self.vertices)
            && g.is_forest(self.edges)
    }

    /// Every distance level is independent in `g`.
    pub fn is_stable(&self, g: &Graph) -> bool {
        self.is_tree(g) && self.levels(g).into_iter().all(|l| g.is_independent(l))
    }
}

/// Visit the directions of every orientation of `h` that is acyclic with
/// unique source `v`, by backtracking over edges with a reachability test.
fn for_each_ao(h: &Graph, v: usize, mut visit: impl FnMut(&[bool])) {
    let n = h.n();
    let mut out = vec![0u64; n];
    let mut indeg = vec![0usize; n];
    let mut forward = vec![false; h.m()];
    // vertex whose last incident edge is edge i, checked for a source there
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); h.m()];
    for w in 0..n {
        if let Some(last) = h.incident_edges(w).iter().last() {
            if w != v {
                closes[last].push(w);
            }
        }
    }
    fn reaches(out: &[u64], from: usize, to: usize) -> bool {
        let mut seen = 1u64 << from;
        let mut frontier = seen;
        while frontier != 0 {
            let next = bits(frontier).fold(0u64, |m, x| m | out[x]) & !seen;
            if next >> to & 1 == 1 {
                return true;
            }
            seen |= next;
            frontier = next;
        }
        from == to
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        h: &Graph,
        v: usize,
        e: usize,
        out: &mut Vec<u64>,
        indeg: &mut Vec<usize>,
        forward: &mut Vec<bool>,
        closes: &[Vec<usize>],
        visit: &mut impl FnMut(&[bool]),
    ) {
        if e == h.m() {
            visit(forward);
            return;
        }
        let (a, b) = h.edges()[e];
        for (t, hd, fw) in [(a, b, true), (b, a, false)] {
            if hd == v || reaches(out, hd, t) {
                continue;
            }
            out[t] |= 1 << hd;
            indeg[hd] += 1;
            forward[e] = fw;
            if closes[e].iter().all(|&w| indeg[w] > 0) {
                go(h, v, e + 1, out, indeg, forward, closes, visit);
            }
            indeg[hd] -= 1;
            out[t] &= !(1 << hd);
        }
    }
    // isolated non-root vertices are extra sources
    if (0..n).any(|w| w != v && h.degree(w) == 0) {
        return;
    }
    go(h, v, 0, &mut out, &mut indeg, &mut forward, &closes, &mut visit);
}

fn check_rooted_connected(h: &Graph, v: usize) -> Result<(), OrientationError> {
    if v >= h.n() {
        return Err(GraphError::MissingVertex(v).into());
    }
    if !h.is_connected() {
        return Err(OrientationError::Disconnected);
    }
    Ok(())
}

/// `AO(H, v)`.
pub fn acyclic_orientations_unique_source(h: &Graph, v: usize) -> Result<Vec<Orientation>, OrientationError> {
    check_rooted_connected(h, v)?;
    let mut all = Vec::new();
    for_each_ao(h, v, |f| {
        all.push(Orientation {
            graph: h.clone(),
            forward: f.to_vec(),
        })
    });
    Ok(all)
}

/// `ao(H, v)`; zero when `H` is disconnected.
pub fn count_ao(h: &Graph, v: usize) -> u64 {
    if v >= h.n() || !h.is_connected() {
        return 0;
    }
    let mut count = 0;
    for_each_ao(h, v, |_| count += 1);
    count
}

/// Peel sources level by level; attach each new vertex by its smallest
/// incoming edge (under `edge_rank`) from the previous level.
pub fn phi(omega: &Orientation, root: usize, edge_rank: &[usize]) -> Result<StableTree, OrientationError> {
    let g = omega.graph();
    if root >= g.n() {
        return Err(GraphError::MissingVertex(root).into());
    }
    if edge_rank.len() != g.m() {
        return Err(OrientationError::Precondition("edge order does not match graph".into()));
    }
    if !omega.is_acyclic() {
        return Err(OrientationError::NotAcyclic);
    }
    if !omega.has_unique_source(root) {
        return Err(OrientationError::NotUniqueSource(root));
    }
    let inn = omega.in_masks();
    let mut level = 1u64 << root;
    let mut left = g.vertex_mask() & !level;
    let mut edges = EdgeSet::EMPTY;
    while left != 0 {
        let next: u64 = bits(left).filter(|&w| inn[w] & left == 0).fold(0, |m, w| m | 1 << w);
        for w in bits(next) {
            let e = bits(inn[w] & level)
                .map(|t| g.edge_index(t, w).expect("arc is an edge"))
                .min_by_key(|&e| edge_rank[e])
                .expect("a new source has an arc from the previous level");
            edges.insert(e);
        }
        left &= !next;
        level = next;
    }
    Ok(StableTree {
        root,
        vertices: g.vertex_mask(),
        edges,
    })
}

/// Orient every edge from the lower tree level to the higher one.
pub fn reconstruct_orientation(t: &StableTree, h: &Graph) -> Result<Orientation, OrientationError> {
    if t.vertices != h.vertex_mask() || !t.is_tree(h) {
        return Err(OrientationError::NotSpanningTree);
    }
    if !t.is_stable(h) {
        return Err(OrientationError::NotStable);
    }
    let depth = t.depths(h);
    let forward = h.edges().iter().map(|&(a, b)| depth[a] < depth[b]).collect();
    Ok(Orientation {
        graph: h.clone(),
        forward,
    })
}

/// `phi` is injective on `AO(H, v)` and inverted by [`reconstruct_orientation`].
pub fn phi_injectivity_check(h: &Graph, v: usize, edge_rank: &[usize]) -> Result<bool, OrientationError> {
    let all = acyclic_orientations_unique_source(h, v)?;
    let mut seen = std::collections::HashSet::new();
    for omega in &all {
        let t = phi(omega, v, edge_rank)?;
        if !t.is_stable(h) || !seen.insert(t.edges) || reconstruct_orientation(&t, h)? != *omega {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of stable spanning trees of connected `h` rooted at `v`.
pub fn count_stable_spanning_trees(h: &Graph, v: usize) -> Result<IntPolynomial, GraphError> {
    stable_tree_genfun(h, v)
}

/// Visit every partition of `mask` into blocks that induce connected
/// subgraphs. Each partition is produced once: the block of the lowest
/// remaining label is chosen first.
fn for_each_connected_partition(g: &Graph, mask: u64, blocks: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
    if mask == 0 {
        visit(blocks);
        return;
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut sub = rest;
    loop {
        let block = sub | low;
        if g.is_connected_within(block) {
            blocks.push(block);
            for_each_connected_partition(g, mask & !block, blocks, visit);
            blocks.pop();
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
}

/// `A_G(x) = sum over partitions of prod ao(G[S], min S) x^{|S|-1}`.
///
/// Blocks inducing disconnected subgraphs contribute zero and are skipped.
/// Partial sums are memoised on the set of vertices still to be covered.
pub fn orientation_polynomial(og: &OrderedGraph) -> IntPolynomial {
    let g = og.graph();
    let mut ao = HashMap::new();
    let mut memo = HashMap::new();
    partition_sum(og, full_mask(g.n()), &mut ao, &mut memo)
}

fn partition_sum(
    og: &OrderedGraph,
    mask: u64,
    ao: &mut HashMap<u64, u64>,
    memo: &mut HashMap<u64, IntPolynomial>,
) -> IntPolynomial {
    if mask == 0 {
        return IntPolynomial::one();
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let g = og.graph();
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut total = IntPolynomial::zero();
    let mut sub = rest;
    loop {
        let block = sub | low;
        if g.is_connected_within(block) {
            let count = *ao.entry(block).or_insert_with(|| {
                let (h, old) = g.induced(block);
                let root = og.min_vertex(block).expect("nonempty");
                count_ao(&h, old.iter().position(|&w| w == root).expect("root in block"))
            });
            let weight = IntPolynomial::monomial(BigInt::from(count), block.count_ones() as usize - 1);
            total = &total + &(&weight * &partition_sum(og, mask & !block, ao, memo));
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    memo.insert(mask, total.clone());
    total
}

/// Star forests under fixed vertex and edge orders. Every member,
/// including the empty forest, is listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarForestFamily {
    pub graph: OrderedGraph,
    pub forests: Vec<EdgeSet>,
}

impl StarForestFamily {
    pub fn generating_function(&self) -> IntPolynomial {
        let mut counts = vec![0u64; self.graph.graph().n().max(1)];
        for f in &self.forests {
            counts[f.len()] += 1;
        }
        IntPolynomial::new(counts.into_iter().map(BigInt::from).collect())
    }

    /// `sum y^|F|` for `y ≥ 0`.
    pub fn evaluate(&self, y: f64) -> f64 {
        eval_nonnegative(&self.generating_function(), y)
    }
}

/// The `phi` images of `AO(G[S], min S)` for a connected block `S`, as edge
/// sets of `og`.
fn block_star_trees(og: &OrderedGraph, block: u64) -> Vec<EdgeSet> {
    let g = og.graph();
    if block.count_ones() == 1 {
        return vec![EdgeSet::EMPTY];
    }
    let (sub, old) = og.induced(block);
    let h = sub.graph();
    let root = sub.min_vertex(h.vertex_mask()).expect("nonempty");
    let mut trees = Vec::new();
    for_each_ao(h, root, |f| {
        let omega = Orientation {
            graph: h.clone(),
            forward: f.to_vec(),
        };
        let t = phi(&omega, root, sub.edge_ranks()).expect("enumerated orientations are valid");
        trees.push(EdgeSet::from_indices(t.edges.iter().map(|e| {
            let (a, b) = h.edges()[e];
            g.edge_index(old[a], old[b]).expect("induced edge")
        })));
    });
    trees
}

/// All star forests of `og`.
///
/// Panics if the graph has more than 64 edges.
pub fn star_forests(og: &OrderedGraph) -> StarForestFamily {
    let g = og.graph();
    assert!(
        g.m() <= MAX_SUBSET_EDGES,
        "edge subsets limited to {MAX_SUBSET_EDGES} edges"
    );
    let mut cache: HashMap<u64, Vec<EdgeSet>> = HashMap::new();
    let mut forests = Vec::new();
    for_each_connected_partition(g, full_mask(g.n()), &mut Vec::new(), &mut |blocks| {
        let mut partial = vec![EdgeSet::EMPTY];
        for &b in blocks {
            let trees = cache.entry(b).or_insert_with(|| block_star_trees(og, b));
            partial = partial
                .iter()
                .flat_map(|p| trees.iter().map(move |t| p.union(*t)))
                .collect();
        }
        forests.extend(partial);
    });
    StarForestFamily {
        graph: og.clone(),
        forests,
    }
}

/// `F*_{G,U}`: the vertices of `anchors` are moved to the front of the
/// vertex order (keeping their relative order) and only star forests whose
/// every non-trivial component meets `anchors` are kept.
pub fn star_forests_anchored(og: &OrderedGraph, anchors: u64) -> Result<StarForestFamily, GraphError> {
    let g = og.graph();
    if anchors & !g.vertex_mask() != 0 {
        return Err(GraphError::MissingVertex(
            63 - (anchors & !g.vertex_mask()).leading_zeros() as usize,
        ));
    }
    let first: Vec<usize> = og
        .vertex_order()
        .into_iter()
        .filter(|&v| anchors >> v & 1 == 1)
        .collect();
    let reordered = og.with_vertices_first(&first)?;
    let all = star_forests(&reordered);
    let forests = all
        .forests
        .into_iter()
        .filter(|&f| {
            g.forest_components(f)
                .into_iter()
                .all(|c| c.count_ones() == 1 || c & anchors != 0)
        })
        .collect();
    Ok(StarForestFamily {
        graph: reordered,
        forests,
    })
}

/// Union of the components of `(V, forest)` that meet `anchors`.
pub fn anchored_vertices(g: &Graph, forest: EdgeSet, anchors: u64) -> u64 {
    g.forest_components(forest)
        .into_iter()
        .filter(|&c| c & anchors != 0)
        .fold(0, |m, c| m | c)
}

/// Whether the tree `t` (a single component through its minimum vertex) is
/// a star tree of `og`: the `phi` image of some orientation of the induced
/// subgraph rooted at the smallest vertex.
pub fn is_star_tree(og: &OrderedGraph, t: EdgeSet) -> bool {
    let g = og.graph();
    if t.is_empty() {
        return true;
    }
    let verts = g.vertices_of(t);
    if verts.count_ones() as usize != t.len() + 1 || !g.is_forest(t) {
        return false;
    }
    let (sub, old) = og.induced(verts);
    let h = sub.graph();
    let root = sub.min_vertex(h.vertex_mask()).expect("nonempty");
    let local = EdgeSet::from_indices(t.iter().map(|e| {
        let (a, b) = g.edges()[e];
        let pa = old.iter().position(|&w| w == a).expect("endpoint");
        let pb = old.iter().position(|&w| w == b).expect("endpoint");
        h.edge_index(pa, pb).expect("edge of induced graph")
    }));
    let tree = StableTree {
        root,
        vertices: h.vertex_mask(),
        edges: local,
    };
    match reconstruct_orientation(&tree, h) {
        Ok(omega) => phi(&omega, root, sub.edge_ranks())
            .map(|s| s.edges == local)
            .unwrap_or(false),
        Err(_) => false,
    }
}

/// `A_G = x A_{G/e} + A_{G\e}` for an edge `e` at the smallest vertex; the
/// contracted vertex is the smallest vertex of `G/e`.
pub fn ao_deletion_contraction_check(og: &OrderedGraph, e: usize) -> Result<bool, OrientationError> {
    let g = og.graph();
    let (a, b) = g.edge(e)?;
    let u = og.min_vertex(g.vertex_mask()).expect("graph has an edge");
    if a != u && b != u {
        return Err(OrientationError::Precondition(format!(
            "edge {a}-{b} does not contain the smallest vertex {u}"
        )));
    }
    let (contracted, map) = og.contract_edge(e)?;
    debug_assert_eq!(contracted.min_vertex(contracted.graph().vertex_mask()), Some(map[u]));
    let deleted = og.delete_edge(e)?;
    let lhs = orientation_polynomial(og);
    let rhs = &orientation_polynomial(&contracted).shift(1) + &orientation_polynomial(&deleted);
    Ok(lhs == rhs)
}

// F of `og` minus a vertex set, memoised on the set.
struct RemainderCache<'a> {
    og: &'a OrderedGraph,
    seen: HashMap<u64, IntPolynomial>,
}

impl<'a> RemainderCache<'a> {
    fn new(og: &'a OrderedGraph) -> Self {
        RemainderCache {
            og,
            seen: HashMap::new(),
        }
    }

    fn get(&mut self, gone: u64) -> IntPolynomial {
        let og = self.og;
        self.seen
            .entry(gone)
            .or_insert_with(|| forest_polynomial(&og.remove_vertices(gone)))
            .clone()
    }
}

/// `F_G = sum over F in F*_{G,U} of x^|F| F_{G - V_U(F)}`.
pub fn expand_u_check(og: &OrderedGraph, anchors: u64) -> Result<bool, GraphError> {
    let g = og.graph();
    let family = star_forests_anchored(og, anchors)?;
    let mut rest = RemainderCache::new(og);
    let rhs: IntPolynomial = family
        .forests
        .iter()
        .map(|&f| rest.get(anchored_vertices(g, f, anchors)).shift(f.len()))
        .sum();
    Ok(rhs == forest_polynomial(og))
}

/// `F_G = F_{G-v} + sum over nonempty T in F*_{G,v} of x^|T| F_{G - V(T)}`.
pub fn fundamental_recurrence_check(og: &OrderedGraph, v: usize) -> Result<bool, GraphError> {
    let g = og.graph();
    if v >= g.n() {
        return Err(GraphError::MissingVertex(v));
    }
    let family = star_forests_anchored(og, 1 << v)?;
    let mut rest = RemainderCache::new(og);
    let trees: IntPolynomial = family
        .forests
        .iter()
        .filter(|f| !f.is_empty())
        .map(|&t| rest.get(g.vertices_of(t)).shift(t.len()))
        .sum();
    Ok(forest_polynomial(og) == &rest.get(1 << v) + &trees)
}

/// `sum over F in F*_{G,S} of y^|F|` against `prod over s in S of S_{G,s}(y)`.
/// Returns `(lhs, rhs)`.
pub fn forest_to_tree_values(og: &OrderedGraph, anchors: u64, y: f64) -> Result<(f64, f64), GraphError> {
    let g = og.graph();
    let lhs = star_forests_anchored(og, anchors)?.evaluate(y);
    let mut rhs = 1.0;
    for s in bits(anchors) {
        rhs *= eval_nonnegative(&stable_tree_genfun(g, s)?, y);
    }
    Ok((lhs, rhs))
}

pub fn forest_to_tree_check(og: &OrderedGraph, anchors: u64, y: f64) -> Result<bool, GraphError> {
    let (lhs, rhs) = forest_to_tree_values(og, anchors, y)?;
    Ok(lhs <= rhs * (1.0 + 1e-12))
}

/// Classification of one anchored forest `F` of `G - v` whose extension
/// `vU ∪ F` is not a star tree of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadForest {
    /// `F` as edges of `G - v`.
    pub forest: Vec<(usize, usize)>,
    pub edges: usize,
    pub nontrivial_components: usize,
    pub has_u1: bool,
    pub has_u2: bool,
}

/// Every `F` in `F*_{G-v,U}` with `vU ∪ F` outside `F*_{G,v}`, for
/// `U = {u1, u2}` an independent pair of neighbours of `v`. Orders: `v`
/// first, then its neighbours, then the rest, edges lexicographic; in
/// `G - v` the pair `u1 < u2` moves to the front and edges keep their order.
/// `u1` and `u2` are returned as labels of `G`, sorted by that order.
pub fn structure_bad_forests(
    g: &Graph,
    v: usize,
    pair: (usize, usize),
) -> Result<(Vec<BadForest>, (usize, usize)), OrientationError> {
    let (p, q) = pair;
    if v >= g.n() || p >= g.n() || q >= g.n() {
        return Err(GraphError::MissingVertex(v.max(p).max(q)).into());
    }
    let nv = g.neighbor_mask(v);
    if p == q || nv >> p & 1 == 0 || nv >> q & 1 == 0 {
        return Err(OrientationError::Precondition(
            "U must be two distinct neighbours of v".into(),
        ));
    }
    if g.has_edge(p, q) {
        return Err(OrientationError::Precondition("U is not independent".into()));
    }
    let mut order = vec![v];
    order.extend(g.neighbors(v));
    order.extend((0..g.n()).filter(|&w| w != v && nv >> w & 1 == 0));
    let og = OrderedGraph::lexicographic(g.clone(), &order)?;
    let (u1, u2) = if og.vertex_rank(p) < og.vertex_rank(q) {
        (p, q)
    } else {
        (q, p)
    };

    let minus = og.remove_vertices(1 << v);
    let down = |w: usize| if w > v { w - 1 } else { w };
    let up = |w: usize| if w >= v { w + 1 } else { w };
    let (l1, l2) = (down(u1), down(u2));
    let anchored = star_forests_anchored(&minus.with_vertices_first(&[l1, l2])?, 1 << l1 | 1 << l2)?;
    let h = minus.graph();
    let vu = [
        g.edge_index(v, u1).expect("neighbour"),
        g.edge_index(v, u2).expect("neighbour"),
    ];
    let mut bad = Vec::new();
    for &f in &anchored.forests {
        let lifted = EdgeSet::from_indices(f.iter().map(|e| {
            let (a, b) = h.edges()[e];
            g.edge_index(up(a), up(b)).expect("edge survives")
        }));
        let t = EdgeSet::from_indices(vu).union(lifted);
        let member = g.is_forest(t) && is_star_tree(&og, t);
        if member {
            continue;
        }
        let comps: Vec<u64> = h
            .forest_components(f)
            .into_iter()
            .filter(|c| c.count_ones() > 1)
            .collect();
        let touched = comps.iter().fold(0u64, |m, c| m | c);
        bad.push(BadForest {
            forest: f.iter().map(|e| h.edges()[e]).collect(),
            edges: f.len(),
            nontrivial_components: comps.len(),
            has_u1: touched >> l1 & 1 == 1,
            has_u2: touched >> l2 & 1 == 1,
        });
    }
    Ok((bad, (u1, u2)))
}

/// The structure property of forests that fail to extend to a star tree:
/// each has at least one edge, and when it has a single non-trivial
/// component that component contains `u2`.
///
/// A single component containing both `u1` and `u2` is allowed: it arises
/// whenever `vU ∪ F` closes a cycle (for example the path `u1 w u2` in a
/// 4-cycle).
pub fn structure_bad_check(g: &Graph, v: usize, pair: (usize, usize)) -> Result<bool, OrientationError> {
    let (bad, _) = structure_bad_forests(g, v, pair)?;
    Ok(bad
        .iter()
        .all(|b| b.edges >= 1 && (b.nontrivial_components != 1 || b.has_u2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::whitney::chromatic_polynomial;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    // Oracle: filter all 2^m orientations.
    fn brute_ao(h: &Graph, v: usize) -> usize {
        (0u64..1 << h.m())
            .filter(|&s| {
                let o = Orientation::new(h.clone(), (0..h.m()).map(|e| s >> e & 1 == 1).collect()).unwrap();
                o.is_acyclic() && o.has_unique_source(v)
            })
            .count()
    }

    #[test]
    fn ao_examples() {
        assert_eq!(
            acyclic_orientations_unique_source(&Graph::empty(1).unwrap(), 0)
                .unwrap()
                .len(),
            1
        );
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(acyclic_orientations_unique_source(&k2, 0).unwrap().len(), 1);
        assert_eq!(acyclic_orientations_unique_source(&k2, 1).unwrap().len(), 1);
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(acyclic_orientations_unique_source(&k3, 2).unwrap().len(), 2);
        assert_eq!(
            acyclic_orientations_unique_source(&Graph::empty(2).unwrap(), 0),
            Err(OrientationError::Disconnected)
        );
        for g in [
            Graph::petersen(),
            Graph::complete(5).unwrap(),
            Graph::complete_bipartite(2, 3).unwrap(),
        ] {
            if g.m() <= 16 {
                assert_eq!(count_ao(&g, 0) as usize, brute_ao(&g, 0));
            }
            let chi = chromatic_polynomial(&g);
            assert_eq!(BigInt::from(count_ao(&g, 1)), num_traits::Signed::abs(&chi.coeff(1)));
        }
    }

    #[test]
    fn phi_examples() {
        // v = 0, a = 1, b = 2; edges (0,1) < (0,2) < (1,2) in index order
        let k3 = Graph::complete(3).unwrap();
        let ranks = [0, 1, 2];
        let w1 = Orientation::from_arcs(k3.clone(), &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let t1 = phi(&w1, 0, &ranks).unwrap();
        assert_eq!(t1.edges, EdgeSet::from_indices([0, 2]));
        let w2 = Orientation::from_arcs(k3.clone(), &[(0, 1), (0, 2), (2, 1)]).unwrap();
        assert_eq!(phi(&w2, 0, &ranks).unwrap().edges, EdgeSet::from_indices([1, 2]));
        assert_eq!(reconstruct_orientation(&t1, &k3).unwrap(), w1);
        let k2 = Graph::complete(2).unwrap();
        let w = Orientation::from_arcs(k2.clone(), &[(0, 1)]).unwrap();
        let t = phi(&w, 0, &[0]).unwrap();
        assert_eq!(t.edges, EdgeSet::from_indices([0]));
        assert_eq!(reconstruct_orientation(&t, &k2).unwrap(), w);
        let p3 = Graph::path(3).unwrap();
        let t = StableTree {
            root: 0,
            vertices: 0b111,
            edges: EdgeSet::from_indices([0, 1]),
        };
        assert_eq!(reconstruct_orientation(&t, &p3).unwrap().arcs(), vec![(0, 1), (1, 2)]);
        // errors
        assert_eq!(phi(&w1, 1, &ranks), Err(OrientationError::NotUniqueSource(1)));
        let cyc = Orientation::from_arcs(k3.clone(), &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(phi(&cyc, 0, &ranks), Err(OrientationError::NotAcyclic));
        let star = StableTree {
            root: 0,
            vertices: 0b111,
            edges: EdgeSet::from_indices([0, 1]),
        };
        assert_eq!(reconstruct_orientation(&star, &k3), Err(OrientationError::NotStable));
    }

    #[test]
    fn injectivity_small() {
        for g in [Graph::complete(4).unwrap(), Graph::cycle(5).unwrap(), Graph::petersen()] {
            let ranks: Vec<usize> = (0..g.m()).rev().collect();
            for v in 0..g.n().min(3) {
                assert!(phi_injectivity_check(&g, v, &ranks).unwrap());
            }
        }
    }

    #[test]
    fn polynomial_examples() {
        let k3 = OrderedGraph::natural(Graph::complete(3).unwrap());
        assert_eq!(orientation_polynomial(&k3), p(&[1, 3, 2]));
        assert_eq!(
            orientation_polynomial(&OrderedGraph::natural(Graph::complete(2).unwrap())),
            p(&[1, 1])
        );
        assert_eq!(
            orientation_polynomial(&OrderedGraph::natural(Graph::empty(2).unwrap())),
            p(&[1])
        );
        assert_eq!(star_forests(&k3).generating_function(), p(&[1, 3, 2]));
        let k2 = OrderedGraph::natural(Graph::complete(2).unwrap());
        let fam = star_forests_anchored(&k2, 1).unwrap();
        assert_eq!(fam.forests, vec![EdgeSet::from_indices([0]), EdgeSet::EMPTY]);
        let empty = OrderedGraph::natural(Graph::empty(3).unwrap());
        assert_eq!(
            star_forests_anchored(&empty, 0b101).unwrap().forests,
            vec![EdgeSet::EMPTY]
        );
    }

    #[test]
    fn identity_examples() {
        for g in [
            Graph::complete(3).unwrap(),
            Graph::complete(2).unwrap(),
            Graph::cycle(4).unwrap(),
        ] {
            let og = OrderedGraph::natural(g.clone());
            for e in g.incident_edges(0).iter() {
                assert!(ao_deletion_contraction_check(&og, e).unwrap());
            }
            for v in 0..g.n() {
                assert!(fundamental_recurrence_check(&og, v).unwrap());
            }
        }
        let c4 = OrderedGraph::natural(Graph::cycle(4).unwrap());
        assert!(ao_deletion_contraction_check(&c4, 3).is_err() || c4.graph().edge(3).unwrap().0 == 0);
        assert!(expand_u_check(&c4, 0b0101).unwrap());
        assert!(forest_to_tree_check(&c4, 0b0011, 0.1).unwrap());
    }

    #[test]
    fn structure_examples() {
        // C4 = 0-1-2-3-0, v = 0 with neighbours 1 and 3
        let c4 = Graph::cycle(4).unwrap();
        assert!(structure_bad_check(&c4, 0, (1, 3)).unwrap());
        let (bad, (u1, u2)) = structure_bad_forests(&c4, 0, (3, 1)).unwrap();
        assert_eq!((u1, u2), (1, 3));
        // the path 1-2-3 closes a cycle; edge 2-3 alone attaches 2 by a non-minimal edge
        assert_eq!(bad.len(), 2);
        let c5 = Graph::cycle(5).unwrap();
        assert!(structure_bad_check(&c5, 0, (1, 4)).unwrap());
        let cherry = Graph::star(2).unwrap();
        assert!(structure_bad_check(&cherry, 0, (1, 2)).unwrap());
        assert!(structure_bad_check(&Graph::complete(3).unwrap(), 0, (1, 2)).is_err());
    }
}
