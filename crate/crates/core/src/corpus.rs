//! Graph corpora: exhaustive labelled and unlabelled enumeration, seeded
//! random graphs, and the named families.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{bits, to_graph6, Graph, GraphError, MAX_VERTICES};

/// Seed used when none is given. Random corpora are drawn from `ChaCha8Rng`.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Largest order for which every labelled graph is enumerated.
pub const MAX_LABELLED_N: usize = 6;

/// Largest order for the isomorphism-free connected enumeration.
pub const MAX_UNLABELLED_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusGraph {
    pub id: String,
    pub graph: Graph,
}

impl CorpusGraph {
    fn anonymous(graph: Graph) -> Self {
        CorpusGraph {
            id: to_graph6(&graph),
            graph,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Complete,
    Cycle,
    Path,
    CompleteBipartite,
    Petersen,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Complete => "complete",
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::CompleteBipartite => "complete-bipartite",
            Family::Petersen => "petersen",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSpec {
    /// Connected graphs on `1..=max_n` vertices, one per isomorphism class.
    Exhaustive {
        max_n: usize,
    },
    /// `count` graphs `G(n, p)` with `n` uniform in `n_min..=n_max`.
    Random {
        count: usize,
        n_min: usize,
        n_max: usize,
        p: f64,
        seed: u64,
    },
    Named {
        family: Family,
        max_n: usize,
    },
}

impl CorpusSpec {
    pub fn generate(&self) -> Result<Vec<CorpusGraph>, GraphError> {
        match *self {
            CorpusSpec::Exhaustive { max_n } => Ok(connected_unlabelled(max_n)?
                .into_iter()
                .map(CorpusGraph::anonymous)
                .collect()),
            CorpusSpec::Random {
                count,
                n_min,
                n_max,
                p,
                seed,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let graphs = random_graphs(&mut rng, count, n_min, n_max, p)?;
                Ok(graphs.into_iter().map(CorpusGraph::anonymous).collect())
            }
            CorpusSpec::Named { family, max_n } => named_family(family, max_n),
        }
    }
}

/// Every graph on vertex set `0..n`, in order of the edge bitmask over the
/// lexicographic pairs.
pub fn labelled_graphs(n: usize) -> Result<impl Iterator<Item = Graph>, GraphError> {
    if n > MAX_LABELLED_N {
        return Err(GraphError::TooManyVertices(n));
    }
    let pairs = all_pairs(n);
    Ok((0u64..1 << pairs.len()).map(move |mask| {
        let chosen: Vec<_> = bits(mask).map(|i| pairs[i]).collect();
        Graph::from_edge_list(n, &chosen).expect("pairs are valid")
    }))
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Result<Graph, GraphError> {
    let pairs: Vec<_> = all_pairs(n)
        .into_iter()
        .filter(|_| rng.gen_bool(p.clamp(0.0, 1.0)))
        .collect();
    Graph::from_edge_list(n, &pairs)
}

pub fn random_graphs<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    n_min: usize,
    n_max: usize,
    p: f64,
) -> Result<Vec<Graph>, GraphError> {
    if n_max > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n_max));
    }
    let (lo, hi) = (n_min.min(n_max), n_min.max(n_max));
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            random_graph(rng, n, p)
        })
        .collect()
}

/// Connected graphs on `1..=max_n` vertices up to isomorphism, by order and
/// then by canonical code. Counts are 1, 1, 2, 6, 21, 112, 853, 11117.
pub fn connected_unlabelled(max_n: usize) -> Result<Vec<Graph>, GraphError> {
    if max_n > MAX_UNLABELLED_N {
        return Err(GraphError::TooManyVertices(max_n));
    }
    let mut out = Vec::new();
    if max_n == 0 {
        return Ok(out);
    }
    // a connected graph always has a vertex whose removal leaves it
    // connected, so extending every class by one vertex reaches all classes
    let mut layer = vec![Graph::empty(1)?];
    out.extend(layer.iter().cloned());
    for n in 2..=max_n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &layer {
            for nbrs in 1u64..1 << (n - 1) {
                let mut edges = g.edges().to_vec();
                edges.extend(bits(nbrs).map(|u| (u, n - 1)));
                let code = canonical_code(&Graph::from_edge_list(n, &edges)?);
                if seen.insert(code) {
                    next.push(code);
                }
            }
        }
        next.sort_unstable();
        layer = next.into_iter().map(|c| from_code(n, c)).collect();
        out.extend(layer.iter().cloned());
    }
    Ok(out)
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn from_code(n: usize, code: u64) -> Graph {
    let edges: Vec<_> = all_pairs(n)
        .into_iter()
        .enumerate()
        .filter(|&(k, _)| code >> k & 1 == 1)
        .map(|(_, p)| p)
        .collect();
    Graph::from_edge_list(n, &edges).expect("valid code")
}

/// Smallest adjacency code over relabellings that sort vertices by a
/// degree-based invariant. Isomorphic graphs get equal codes.
fn canonical_code(g: &Graph) -> u64 {
    let n = g.n();
    assert!(
        n * n.saturating_sub(1) / 2 <= 64,
        "graph too large for a canonical code"
    );
    let inv: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).map(|u| g.degree(u)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    // cells of equal invariant, in position order
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match cells.last_mut() {
            Some(c) if inv[c[0]] == inv[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut placed = Vec::with_capacity(n);
    let mut used = 0u64;
    search(g, &cells, 0, &mut placed, &mut used, &mut best);
    best
}

fn search(g: &Graph, cells: &[Vec<usize>], cell: usize, placed: &mut Vec<usize>, used: &mut u64, best: &mut u64) {
    let n = g.n();
    if placed.len() == n {
        let mut code = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if g.has_edge(placed[i], placed[j]) {
                    code |= 1 << pair_index(n, i, j);
                }
            }
        }
        *best = (*best).min(code);
        return;
    }
    let members = &cells[cell];
    let done = members.iter().all(|&v| *used >> v & 1 == 1);
    if done {
        return search(g, cells, cell + 1, placed, used, best);
    }
    for &v in members {
        if *used >> v & 1 == 0 {
            *used |= 1 << v;
            placed.push(v);
            search(g, cells, cell, placed, used, best);
            placed.pop();
            *used &= !(1 << v);
        }
    }
}

/// Members of a named family with at most `max_n` vertices: `K_1..K_n`,
/// `C_3..C_n`, `P_1..P_n`, `K_{a,b}` with `1 ≤ a ≤ b`, and the Petersen graph
/// when `max_n ≥ 10`.
pub fn named_family(family: Family, max_n: usize) -> Result<Vec<CorpusGraph>, GraphError> {
    let named = |id: String, graph: Graph| CorpusGraph { id, graph };
    let out = match family {
        Family::Complete => (1..=max_n)
            .map(|n| Ok(named(format!("K{n}"), Graph::complete(n)?)))
            .collect::<Result<_, GraphError>>()?,
        Family::Cycle => (3..=max_n)
            .map(|n| Ok(named(format!("C{n}"), Graph::cycle(n)?)))
            .collect::<Result<_, GraphError>>()?,
        Family::Path => (1..=max_n)
            .map(|n| Ok(named(format!("P{n}"), Graph::path(n)?)))
            .collect::<Result<_, GraphError>>()?,
        Family::CompleteBipartite => {
            let mut v = Vec::new();
            for a in 1..=max_n / 2 {
                for b in a..=max_n - a {
                    v.push(named(format!("K{a},{b}"), Graph::complete_bipartite(a, b)?));
                }
            }
            v
        }
        Family::Petersen => {
            if max_n >= 10 {
                vec![named("petersen".into(), Graph::petersen())]
            } else {
                Vec::new()
            }
        }
    };
    Ok(out)
}

/// The line graph: one vertex per edge of `g`, adjacent when the edges share
/// an endpoint. Line graphs are claw-free.
pub fn line_graph(g: &Graph) -> Result<Graph, GraphError> {
    let m = g.m();
    if m > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(m));
    }
    let es = g.edges();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = es[i];
            let (c, d) = es[j];
            if a == c || a == d || b == c || b == d {
                pairs.push((i, j));
            }
        }
    }
    Graph::from_edge_list(m, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labelled_counts() {
        for (n, want) in [(0, 1), (1, 1), (2, 2), (3, 8), (4, 64), (5, 1024)] {
            assert_eq!(labelled_graphs(n).unwrap().count(), want);
        }
        assert!(labelled_graphs(7).is_err());
    }

    #[test]
    fn unlabelled_counts_match_known_sequence() {
        let all = connected_unlabelled(7).unwrap();
        let mut by_n = [0usize; 8];
        for g in &all {
            assert!(g.is_connected());
            by_n[g.n()] += 1;
        }
        assert_eq!(by_n, [0, 1, 1, 2, 6, 21, 112, 853]);
        assert_eq!(all.len(), 996);
    }

    // Oracle: codes minimised over all n! permutations.
    fn brute_code(g: &Graph) -> u64 {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = g.n();
        perms(n)
            .into_iter()
            .map(|p| {
                let mut c = 0u64;
                for &(a, b) in g.edges() {
                    let (i, j) = (p[a].min(p[b]), p[a].max(p[b]));
                    c |= 1 << pair_index(n, i, j);
                }
                c
            })
            .min()
            .unwrap()
    }

    #[test]
    fn canonical_code_separates_classes_like_brute_force() {
        // two codes agree iff the brute-force minima agree
        let graphs: Vec<Graph> = labelled_graphs(5).unwrap().collect();
        let mut pairs = HashSet::new();
        for g in &graphs {
            pairs.insert((canonical_code(g), brute_code(g)));
        }
        let fast: HashSet<u64> = pairs.iter().map(|p| p.0).collect();
        let slow: HashSet<u64> = pairs.iter().map(|p| p.1).collect();
        assert_eq!(fast.len(), slow.len());
        assert_eq!(pairs.len(), slow.len());
        assert_eq!(slow.len(), 34);
    }

    #[test]
    fn random_corpus_is_reproducible() {
        let spec = CorpusSpec::Random {
            count: 20,
            n_min: 6,
            n_max: 8,
            p: 0.4,
            seed: DEFAULT_SEED,
        };
        let a = spec.generate().unwrap();
        assert_eq!(a, spec.generate().unwrap());
        assert!(a.iter().all(|c| (6..=8).contains(&c.graph.n())));
        let other = CorpusSpec::Random {
            count: 20,
            n_min: 6,
            n_max: 8,
            p: 0.4,
            seed: DEFAULT_SEED + 1,
        };
        assert_ne!(a, other.generate().unwrap());
    }

    #[test]
    fn named_families() {
        let k = named_family(Family::Complete, 4).unwrap();
        assert_eq!(
            k.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(),
            ["K1", "K2", "K3", "K4"]
        );
        let b = named_family(Family::CompleteBipartite, 4).unwrap();
        assert_eq!(
            b.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(),
            ["K1,1", "K1,2", "K1,3", "K2,2"]
        );
        assert!(named_family(Family::Petersen, 9).unwrap().is_empty());
        assert_eq!(named_family(Family::Petersen, 10).unwrap()[0].graph.m(), 15);
        assert_eq!(named_family(Family::Cycle, 5).unwrap().len(), 3);
    }

    #[test]
    fn line_graphs_are_claw_free() {
        let l = line_graph(&Graph::star(3).unwrap()).unwrap();
        assert_eq!((l.n(), l.m()), (3, 3));
        assert_eq!(line_graph(&Graph::cycle(5).unwrap()).unwrap().m(), 5);
        for g in connected_unlabelled(6).unwrap() {
            assert!(line_graph(&g).unwrap().is_claw_free());
        }
    }
}
