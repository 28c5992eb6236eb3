//! Chromatic polynomials by deletion-contraction and broken-circuit-free
//! (BCF) forests under an edge order.
//!
//! A forest `F` is BCF when no edge outside `F` closes a cycle in which it is
//! the largest edge. `F_G(x) = sum over BCF sets of x^|F|` is independent of
//! the order and satisfies `chi_G(x) = x^n F_G(-1/x)`.

use num_bigint::BigInt;

use crate::graph::{bits, EdgeSet, Graph, GraphError, OrderedGraph, MAX_SUBSET_EDGES};
use crate::poly::IntPolynomial;

fn x_pow(k: usize) -> IntPolynomial {
    IntPolynomial::monomial(BigInt::from(1), k)
}

fn pow(p: &IntPolynomial, k: usize) -> IntPolynomial {
    (0..k).fold(IntPolynomial::one(), |acc, _| &acc * p)
}

/// `x (x-1) ... (x-n+1)`.
pub fn falling_factorial(n: usize) -> IntPolynomial {
    (0..n as i64).map(IntPolynomial::linear_root).product()
}

pub fn chromatic_polynomial(g: &Graph) -> IntPolynomial {
    let comps = g.components();
    if comps.len() > 1 {
        return comps
            .into_iter()
            .map(|c| connected_chromatic(&g.induced(c).0))
            .product();
    }
    connected_chromatic(g)
}

fn connected_chromatic(g: &Graph) -> IntPolynomial {
    let (n, m) = (g.n(), g.m());
    if m == 0 {
        return x_pow(n);
    }
    let x_minus_1 = IntPolynomial::linear_root(1);
    if m == n - 1 {
        return &x_pow(1) * &pow(&x_minus_1, n - 1);
    }
    if m == n && g.max_degree() == 2 {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        return &pow(&x_minus_1, n) + &x_minus_1.scale(&BigInt::from(sign));
    }
    if m == n * (n - 1) / 2 {
        return falling_factorial(n);
    }
    let v = (0..n)
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .expect("n > 0");
    let w = g.neighbors(v).next().expect("max degree is positive");
    let e = g.edge_index(v, w).expect("edge exists");
    let deleted = g.delete_edge(e).expect("valid edge");
    let contracted = g.contract_edge(e).expect("valid edge");
    &chromatic_polynomial(&deleted) - &chromatic_polynomial(&contracted)
}

/// Edges of the unique path from `x` to `y` in the forest `set`, if any.
fn forest_path(g: &Graph, set: EdgeSet, x: usize, y: usize) -> Option<Vec<usize>> {
    let mut via = vec![usize::MAX; g.n()];
    let mut seen = 1u64 << x;
    let mut stack = vec![x];
    while let Some(a) = stack.pop() {
        if a == y {
            break;
        }
        for e in set.iter() {
            let (p, q) = g.edges()[e];
            let b = if p == a {
                q
            } else if q == a {
                p
            } else {
                continue;
            };
            if seen >> b & 1 == 0 {
                seen |= 1 << b;
                via[b] = e;
                stack.push(b);
            }
        }
    }
    if seen >> y & 1 == 0 {
        return None;
    }
    let mut path = Vec::new();
    let mut c = y;
    while c != x {
        let e = via[c];
        path.push(e);
        let (p, q) = g.edges()[e];
        c = if p == c { q } else { p };
    }
    Some(path)
}

/// Direct check of the definition.
pub fn is_bcf(og: &OrderedGraph, set: EdgeSet) -> Result<bool, GraphError> {
    let g = og.graph();
    if let Some(e) = set.iter().find(|&e| e >= g.m()) {
        return Err(GraphError::MissingEdge(e));
    }
    if !g.is_forest(set) {
        return Err(GraphError::NotAForest);
    }
    for f in (0..g.m()).filter(|&f| !set.contains(f)) {
        let (x, y) = g.edges()[f];
        if let Some(path) = forest_path(g, set, x, y) {
            if path.iter().all(|&e| og.edge_rank(e) < og.edge_rank(f)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Visit every BCF set once.
///
/// Edges are decided in increasing order, so a newly added edge is the
/// largest of the set. Joining components `A` and `B` with edge `e` then
/// keeps the set BCF exactly when no edge between `A` and `B` is larger
/// than `e`.
///
/// Panics if the graph has more than 64 edges.
pub fn for_each_bcf_set(og: &OrderedGraph, mut visit: impl FnMut(EdgeSet)) {
    let g = og.graph();
    assert!(
        g.m() <= MAX_SUBSET_EDGES,
        "edge subsets limited to {MAX_SUBSET_EDGES} edges"
    );
    let order = og.edge_order();
    let comp: Vec<u64> = (0..g.n()).map(|v| 1u64 << v).collect();
    grow(og, &order, 0, EdgeSet::EMPTY, comp, &mut visit);
}

fn grow(og: &OrderedGraph, order: &[usize], pos: usize, set: EdgeSet, comp: Vec<u64>, visit: &mut impl FnMut(EdgeSet)) {
    if pos == order.len() {
        visit(set);
        return;
    }
    let g = og.graph();
    let e = order[pos];
    let (a, b) = g.edges()[e];
    let (ca, cb) = (comp[a], comp[b]);
    let joinable = ca != cb
        && order[pos + 1..].iter().all(|&f| {
            let (p, q) = g.edges()[f];
            !(ca >> p & 1 == 1 && cb >> q & 1 == 1 || ca >> q & 1 == 1 && cb >> p & 1 == 1)
        });
    if joinable {
        let mut merged = comp.clone();
        for v in bits(ca | cb) {
            merged[v] = ca | cb;
        }
        grow(og, order, pos + 1, set.with(e), merged, visit);
    }
    grow(og, order, pos + 1, set, comp, visit);
}

pub fn forest_polynomial(og: &OrderedGraph) -> IntPolynomial {
    let mut counts = vec![0u64; og.graph().n().max(1)];
    for_each_bcf_set(og, |f| counts[f.len()] += 1);
    IntPolynomial::new(counts.into_iter().map(BigInt::from).collect())
}

/// A family of BCF sets. The empty set is never stored in `forests`;
/// `includes_empty` records whether it belongs to the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcfFamily {
    pub graph: OrderedGraph,
    pub forests: Vec<EdgeSet>,
    pub rooted_at: Option<usize>,
    pub includes_empty: bool,
}

impl BcfFamily {
    /// `sum x^|F|` over the members.
    pub fn generating_function(&self) -> IntPolynomial {
        let mut counts = vec![0u64; self.graph.graph().n().max(1)];
        counts[0] = self.includes_empty as u64;
        for f in &self.forests {
            counts[f.len()] += 1;
        }
        IntPolynomial::new(counts.into_iter().map(BigInt::from).collect())
    }

    pub fn len(&self) -> usize {
        self.forests.len() + self.includes_empty as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All BCF sets of the graph.
pub fn bcf_forests(og: &OrderedGraph) -> BcfFamily {
    let mut forests = Vec::new();
    for_each_bcf_set(og, |f| {
        if !f.is_empty() {
            forests.push(f)
        }
    });
    BcfFamily {
        graph: og.clone(),
        forests,
        rooted_at: None,
        includes_empty: true,
    }
}

/// Nonempty BCF sets that form a single tree through `v`.
pub fn bcf_rooted_trees(og: &OrderedGraph, v: usize) -> Result<BcfFamily, GraphError> {
    let g = og.graph();
    if v >= g.n() {
        return Err(GraphError::MissingVertex(v));
    }
    let mut forests = Vec::new();
    for_each_bcf_set(og, |f| {
        let verts = g.vertices_of(f);
        if !f.is_empty() && verts >> v & 1 == 1 && verts.count_ones() as usize == f.len() + 1 {
            forests.push(f);
        }
    });
    Ok(BcfFamily {
        graph: og.clone(),
        forests,
        rooted_at: Some(v),
        includes_empty: false,
    })
}

/// Both sides of the expansion of `F_{G/e}` for `e = {u, v}`, under an edge
/// order with `e` smallest and the other edges at `v` largest:
///
/// `F_{G/e} = sum_T x^|T| F_{G - V(T)}`
///
/// over the trivial tree at `u` and the BCF trees of `G \ e` through `u`
/// that avoid the neighbours of `v` in `G \ e`.
pub fn contraction_expansion(g: &Graph, e: usize, v: usize) -> Result<(IntPolynomial, IntPolynomial), GraphError> {
    let (p, q) = g.edge(e)?;
    let u = if v == p {
        q
    } else if v == q {
        p
    } else {
        return Err(GraphError::MissingVertex(v));
    };
    let at_v = g.incident_edges(v);
    let mut edge_order = vec![e];
    edge_order.extend((0..g.m()).filter(|&f| !at_v.contains(f)));
    edge_order.extend(at_v.iter().filter(|&f| f != e));
    let vertex_order: Vec<usize> = (0..g.n()).collect();
    let og = OrderedGraph::new(g.clone(), &vertex_order, &edge_order)?;

    let lhs = forest_polynomial(&og.contract_edge(e)?.0);

    let deleted = og.delete_edge(e)?;
    let blocked = g.neighbor_mask(v) & !(1 << u);
    let trees = bcf_rooted_trees(&deleted, u)?;
    let dg = deleted.graph();
    let rhs = std::iter::once((EdgeSet::EMPTY, 1u64 << u))
        .chain(trees.forests.iter().map(|&t| (t, dg.vertices_of(t))))
        .filter(|&(_, verts)| verts & blocked == 0)
        .map(|(t, verts)| &x_pow(t.len()) * &forest_polynomial(&og.remove_vertices(verts)))
        .sum();
    Ok((lhs, rhs))
}

/// Whether the contraction expansion holds with either endpoint of `e` in
/// the role of `v`.
pub fn expand_contraction_check(g: &Graph, e: usize) -> Result<bool, GraphError> {
    let (p, q) = g.edge(e)?;
    for v in [p, q] {
        let (lhs, rhs) = contraction_expansion(g, e, v)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    // Oracle: filter all 2^m subsets through the definition.
    fn brute_forest_polynomial(og: &OrderedGraph) -> IntPolynomial {
        let g = og.graph();
        let mut counts = vec![0i64; g.n().max(1)];
        for s in 0u64..1 << g.m() {
            let set = EdgeSet(s);
            if g.is_forest(set) && is_bcf(og, set).unwrap() {
                counts[set.len()] += 1;
            }
        }
        p(&counts)
    }

    // Oracle: count proper colourings with q colours, then compare values.
    fn colourings(g: &Graph, q: u64) -> u64 {
        fn go(g: &Graph, v: usize, q: u64, col: &mut Vec<u64>) -> u64 {
            if v == g.n() {
                return 1;
            }
            (0..q)
                .map(|c| {
                    if g.neighbors(v).any(|w| w < v && col[w] == c) {
                        return 0;
                    }
                    col[v] = c;
                    go(g, v + 1, q, col)
                })
                .sum()
        }
        go(g, 0, q, &mut vec![0; g.n()])
    }

    fn graph_from_bits(n: usize, bits: u64) -> Graph {
        let mut pairs = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bits >> k & 1 == 1 {
                    pairs.push((i, j));
                }
                k += 1;
            }
        }
        Graph::from_edge_list(n, &pairs).unwrap()
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_polynomial(&Graph::complete(3).unwrap()), p(&[0, 2, -3, 1]));
        assert_eq!(chromatic_polynomial(&Graph::path(3).unwrap()), p(&[0, 1, -2, 1]));
        let c4 = Graph::cycle(4).unwrap();
        let chi = chromatic_polynomial(&c4);
        // (x-1)^4 + (x-1)
        assert_eq!(chi, p(&[0, -3, 6, -4, 1]));
        for q in 1..=5u64 {
            assert_eq!(chi.eval_int(&BigInt::from(q)), BigInt::from(colourings(&c4, q)));
        }
        assert_eq!(chromatic_polynomial(&Graph::empty(0).unwrap()), IntPolynomial::one());
        assert_eq!(chromatic_polynomial(&Graph::empty(3).unwrap()), p(&[0, 0, 0, 1]));
    }

    #[test]
    fn chromatic_matches_colouring_counts() {
        for g in [
            Graph::petersen(),
            Graph::complete_bipartite(3, 3).unwrap(),
            graph_from_bits(6, 0b1011_0110_1101_0101),
        ] {
            let chi = chromatic_polynomial(&g);
            for q in 0..=4u64 {
                assert_eq!(chi.eval_int(&BigInt::from(q)), BigInt::from(colourings(&g, q)), "{g}");
            }
        }
    }

    #[test]
    fn bcf_triangle() {
        let og = OrderedGraph::natural(Graph::complete(3).unwrap());
        assert!(!is_bcf(&og, EdgeSet::from_indices([0, 1])).unwrap());
        assert!(is_bcf(&og, EdgeSet::from_indices([0, 2])).unwrap());
        assert!(is_bcf(&og, EdgeSet::EMPTY).unwrap());
        assert_eq!(
            is_bcf(&og, EdgeSet::from_indices([0, 1, 2])),
            Err(GraphError::NotAForest)
        );
        assert_eq!(forest_polynomial(&og), p(&[1, 3, 2]));
        assert_eq!(
            forest_polynomial(&OrderedGraph::natural(Graph::complete(2).unwrap())),
            p(&[1, 1])
        );
        assert_eq!(
            forest_polynomial(&OrderedGraph::natural(Graph::empty(4).unwrap())),
            p(&[1])
        );
    }

    #[test]
    fn rooted_trees() {
        // vertex 1 is an endpoint of edge 0 = (0,1) and of edge 2 = (1,2)
        let og = OrderedGraph::natural(Graph::complete(3).unwrap());
        let fam = bcf_rooted_trees(&og, 1).unwrap();
        let g = og.graph();
        let mut expected: Vec<EdgeSet> = (1u64..8)
            .map(EdgeSet)
            .filter(|&s| {
                let verts = g.vertices_of(s);
                g.is_forest(s)
                    && is_bcf(&og, s).unwrap()
                    && verts & 2 == 2
                    && verts.count_ones() as usize == s.len() + 1
            })
            .collect();
        let mut got = fam.forests.clone();
        expected.sort_by_key(|s| s.0);
        got.sort_by_key(|s| s.0);
        assert_eq!(got, expected);
        assert!(got.contains(&EdgeSet::from_indices([0])));
        assert!(got.contains(&EdgeSet::from_indices([2])));

        let star = OrderedGraph::natural(Graph::star(3).unwrap());
        assert_eq!(bcf_rooted_trees(&star, 0).unwrap().forests.len(), 7);
        let single = OrderedGraph::natural(Graph::empty(1).unwrap());
        assert!(bcf_rooted_trees(&single, 0).unwrap().is_empty());
    }

    #[test]
    fn contraction_expansion_examples() {
        let k3 = Graph::complete(3).unwrap();
        for e in 0..3 {
            assert!(expand_contraction_check(&k3, e).unwrap());
            let (v, _) = k3.edge(e).unwrap();
            let (lhs, rhs) = contraction_expansion(&k3, e, v).unwrap();
            assert_eq!(lhs, p(&[1, 1]));
            assert_eq!(rhs, p(&[1, 1]));
        }
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(contraction_expansion(&k2, 0, 1).unwrap(), (p(&[1]), p(&[1])));
        let c4 = Graph::cycle(4).unwrap();
        for e in 0..4 {
            assert!(expand_contraction_check(&c4, e).unwrap());
        }
    }

    proptest! {
        #[test]
        fn enumeration_matches_subset_filter(n in 1usize..7, bits in any::<u64>(), seed in any::<u64>()) {
            use rand::SeedableRng;
            let g = graph_from_bits(n, bits);
            let og = OrderedGraph::random(g, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(forest_polynomial(&og), brute_forest_polynomial(&og));
        }

        #[test]
        fn whitney_and_deletion_contraction(n in 1usize..8, bits in any::<u64>(), seed in any::<u64>()) {
            use rand::SeedableRng;
            let g = graph_from_bits(n, bits);
            let chi = chromatic_polynomial(&g);
            let og = OrderedGraph::random(g.clone(), &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(forest_polynomial(&og).whitney_transform(n).unwrap(), chi.clone());
            prop_assert!(chi.signs_alternate());
            prop_assert!(chi.coeff(0) == BigInt::from(0));
            for e in 0..g.m() {
                let split = &chromatic_polynomial(&g.delete_edge(e).unwrap())
                    - &chromatic_polynomial(&g.contract_edge(e).unwrap());
                prop_assert_eq!(&split, &chi);
                prop_assert!(expand_contraction_check(&g, e).unwrap());
            }
        }
    }
}
