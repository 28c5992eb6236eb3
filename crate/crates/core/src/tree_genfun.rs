//! Rooted tree generating functions `T_{G,v}`, `S_{G,v}` (stable trees) and
//! `T_{G,v;k}` (trees reaching distance `k`), plus numeric checks of the
//! bounds they satisfy at the special evaluation points used by the
//! certifier.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::poly::IntPolynomial;

/// Relative slack allowed when comparing a value with its bound.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeGenError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeKind {
    Plain,
    Stable,
    /// Trees with a vertex at tree distance at least `k` from the root.
    Deep(usize),
}

/// A generating function evaluated at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeGenEval {
    pub graph: String,
    pub root: usize,
    pub kind: TreeKind,
    pub x: f64,
    pub value: f64,
}

/// Outcome of comparing a generating-function value with a proved bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub x: f64,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(x: f64, value: f64, bound: f64) -> Self {
        BoundCheck {
            x,
            value,
            bound,
            holds: value <= bound + BOUND_SLACK * bound.abs().max(1.0),
        }
    }
}

struct Grower<'a> {
    g: &'a Graph,
    stable: bool,
    tree: u64,
    depth: Vec<usize>,
    levels: Vec<u64>,
    forbidden: Vec<u64>,
    edges: usize,
}

impl Grower<'_> {
    /// Include/exclude branching on the first edge leaving the tree that
    /// has not been ruled out. Each subtree is reached exactly once.
    fn run(&mut self, visit: &mut impl FnMut(usize, usize)) {
        let g = self.g;
        let next = crate::graph::bits(self.tree).find_map(|u| {
            let out = g.neighbor_mask(u) & !self.tree & !self.forbidden[u];
            (out != 0).then(|| (u, out.trailing_zeros() as usize))
        });
        let Some((u, w)) = next else {
            let max_depth = self.levels.iter().rposition(|&l| l != 0).unwrap_or(0);
            visit(self.edges, max_depth);
            return;
        };
        let d = self.depth[u] + 1;
        if self.levels.len() <= d {
            self.levels.push(0);
        }
        // A level that is not independent stays so as the tree grows.
        if !self.stable || g.neighbor_mask(w) & self.levels[d] == 0 {
            self.tree |= 1 << w;
            self.depth[w] = d;
            self.levels[d] |= 1 << w;
            self.edges += 1;
            self.run(visit);
            self.edges -= 1;
            self.levels[d] &= !(1 << w);
            self.tree &= !(1 << w);
        }
        self.forbidden[u] |= 1 << w;
        self.forbidden[w] |= 1 << u;
        self.run(visit);
        self.forbidden[u] &= !(1 << w);
        self.forbidden[w] &= !(1 << u);
    }
}

/// Visit `(edge count, depth)` of every subtree containing `v`, the
/// single-vertex tree included.
fn for_each_subtree(g: &Graph, v: usize, stable: bool, mut visit: impl FnMut(usize, usize)) {
    let mut grower = Grower {
        g,
        stable,
        tree: 1 << v,
        depth: vec![0; g.n()],
        levels: vec![1 << v],
        forbidden: vec![0; g.n()],
        edges: 0,
    };
    grower.run(&mut visit);
}

pub fn tree_genfun(g: &Graph, v: usize, kind: TreeKind) -> Result<IntPolynomial, GraphError> {
    if v >= g.n() {
        return Err(GraphError::MissingVertex(v));
    }
    let mut counts = vec![0u64; g.n()];
    let min_depth = match kind {
        TreeKind::Deep(k) => k,
        _ => 0,
    };
    for_each_subtree(g, v, kind == TreeKind::Stable, |edges, depth| {
        if depth >= min_depth {
            counts[edges] += 1;
        }
    });
    Ok(IntPolynomial::new(counts.into_iter().map(BigInt::from).collect()))
}

/// `T_{G,v}`: subtrees through `v`, counted by edges.
pub fn rooted_tree_genfun(g: &Graph, v: usize) -> Result<IntPolynomial, GraphError> {
    tree_genfun(g, v, TreeKind::Plain)
}

/// `S_{G,v}`: subtrees through `v` whose distance levels are independent in `g`.
pub fn stable_tree_genfun(g: &Graph, v: usize) -> Result<IntPolynomial, GraphError> {
    tree_genfun(g, v, TreeKind::Stable)
}

/// `T_{G,v;k}`: subtrees through `v` reaching tree distance `k`.
pub fn deep_tree_genfun(g: &Graph, v: usize, k: usize) -> Result<IntPolynomial, GraphError> {
    tree_genfun(g, v, TreeKind::Deep(k))
}

/// Value of a polynomial with non-negative coefficients at `x ≥ 0`.
pub fn eval_nonnegative(p: &IntPolynomial, x: f64) -> f64 {
    p.coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::INFINITY))
}

pub fn evaluate(g: &Graph, v: usize, kind: TreeKind, x: f64) -> Result<TreeGenEval, GraphError> {
    let p = tree_genfun(g, v, kind)?;
    Ok(TreeGenEval {
        graph: g.to_string(),
        root: v,
        kind,
        x,
        value: eval_nonnegative(&p, x),
    })
}

/// `1 + b/(Δ-1)`.
pub fn growth_factor(delta: usize, b: f64) -> f64 {
    1.0 + b / (delta as f64 - 1.0)
}

/// The point `b (1 + b/(Δ-1))^{-(Δ-1)} / (Δ-1)` at which rooted trees are bounded.
pub fn tree_argument(delta: usize, b: f64) -> f64 {
    let d1 = delta as f64 - 1.0;
    b * growth_factor(delta, b).powf(-d1) / d1
}

/// `1 + b + b²/4`.
pub fn clawfree_growth(b: f64) -> f64 {
    1.0 + b + b * b / 4.0
}

/// The point `b / ((1 + b + b²/4) Δ)` at which stable trees are bounded.
pub fn stable_argument(delta: usize, b: f64) -> f64 {
    b / (clawfree_growth(b) * delta as f64)
}

/// Bound on `T_{G,v;k}` at [`tree_argument`]: `e^b (b / (1 + b/(Δ-1)))^k`.
pub fn deep_tree_bound(delta: usize, k: usize, b: f64) -> f64 {
    b.exp() * (b / growth_factor(delta, b)).powi(k as i32)
}

fn check_degrees(g: &Graph, v: usize, delta: usize, root_cap: usize, b: f64) -> Result<(), TreeGenError> {
    if v >= g.n() {
        return Err(GraphError::MissingVertex(v).into());
    }
    if delta < 2 {
        return Err(TreeGenError::Precondition(format!("delta = {delta} < 2")));
    }
    if !(b >= 0.0 && b.is_finite()) {
        return Err(TreeGenError::Precondition(format!(
            "b = {b} must be finite and non-negative"
        )));
    }
    if g.max_degree() > delta {
        return Err(TreeGenError::Precondition(format!(
            "maximum degree {} exceeds delta = {delta}",
            g.max_degree()
        )));
    }
    if g.degree(v) > root_cap {
        return Err(TreeGenError::Precondition(format!(
            "root degree {} exceeds {root_cap}",
            g.degree(v)
        )));
    }
    Ok(())
}

/// `T_{G,v}(x) ≤ (1 + b/(Δ-1))^{deg v}` at `x` = [`tree_argument`], for `deg v ≤ Δ-1`.
pub fn tree_bound_check(g: &Graph, v: usize, delta: usize, b: f64) -> Result<BoundCheck, TreeGenError> {
    check_degrees(g, v, delta, delta - 1, b)?;
    let x = tree_argument(delta, b);
    let value = eval_nonnegative(&rooted_tree_genfun(g, v)?, x);
    Ok(BoundCheck::new(
        x,
        value,
        growth_factor(delta, b).powi(g.degree(v) as i32),
    ))
}

/// `S_{G,v}(x) ≤ 1 + b + b²/4` at `x` = [`stable_argument`], for claw-free `g`.
pub fn stable_tree_bound_check(g: &Graph, v: usize, delta: usize, b: f64) -> Result<BoundCheck, TreeGenError> {
    check_degrees(g, v, delta, delta, b)?;
    if !g.is_claw_free() {
        return Err(TreeGenError::Precondition("graph contains a claw".into()));
    }
    let x = stable_argument(delta, b);
    let value = eval_nonnegative(&stable_tree_genfun(g, v)?, x);
    Ok(BoundCheck::new(x, value, clawfree_growth(b)))
}

/// `T_{G,v;k}(x) ≤ e^b (b/(1 + b/(Δ-1)))^k` at `x` = [`tree_argument`].
pub fn deep_tree_bound_check(g: &Graph, v: usize, delta: usize, k: usize, b: f64) -> Result<BoundCheck, TreeGenError> {
    check_degrees(g, v, delta, delta - 1, b)?;
    let x = tree_argument(delta, b);
    let value = eval_nonnegative(&deep_tree_genfun(g, v, k)?, x);
    Ok(BoundCheck::new(x, value, deep_tree_bound(delta, k, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bits, EdgeSet};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    // Oracle: filter every edge subset for trees through v.
    fn brute(g: &Graph, v: usize, kind: TreeKind) -> IntPolynomial {
        let mut counts = vec![0i64; g.n()];
        'sets: for s in 0u64..1 << g.m() {
            let set = EdgeSet(s);
            let verts = if s == 0 { 1 << v } else { g.vertices_of(set) };
            if verts >> v & 1 == 0 || verts.count_ones() as usize != set.len() + 1 || !g.is_forest(set) {
                continue;
            }
            let mut dist = vec![usize::MAX; g.n()];
            dist[v] = 0;
            let mut frontier = vec![v];
            while let Some(a) = frontier.pop() {
                for e in set.iter() {
                    let (x, y) = g.edges()[e];
                    let b = if x == a {
                        y
                    } else if y == a {
                        x
                    } else {
                        continue;
                    };
                    if dist[b] == usize::MAX {
                        dist[b] = dist[a] + 1;
                        frontier.push(b);
                    }
                }
            }
            let depth = bits(verts).map(|w| dist[w]).max().unwrap();
            match kind {
                TreeKind::Deep(k) if depth < k => continue,
                TreeKind::Stable => {
                    for d in 0..=depth {
                        let level = bits(verts).filter(|&w| dist[w] == d).fold(0u64, |m, w| m | 1 << w);
                        if !g.is_independent(level) {
                            continue 'sets;
                        }
                    }
                }
                _ => {}
            }
            counts[set.len()] += 1;
        }
        p(&counts)
    }

    #[test]
    fn examples() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(rooted_tree_genfun(&k3, 0).unwrap(), p(&[1, 2, 3]));
        assert_eq!(stable_tree_genfun(&k3, 0).unwrap(), p(&[1, 2, 2]));
        assert_eq!(deep_tree_genfun(&k3, 0, 2).unwrap(), p(&[0, 0, 2]));
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(rooted_tree_genfun(&k2, 1).unwrap(), p(&[1, 1]));
        assert_eq!(stable_tree_genfun(&k2, 1).unwrap(), p(&[1, 1]));
        assert_eq!(rooted_tree_genfun(&Graph::empty(1).unwrap(), 0).unwrap(), p(&[1]));
        let cherry = Graph::star(2).unwrap();
        assert_eq!(stable_tree_genfun(&cherry, 0).unwrap(), p(&[1, 2, 1]));
        let p3 = Graph::path(3).unwrap();
        assert_eq!(deep_tree_genfun(&p3, 0, 2).unwrap(), p(&[0, 0, 1]));
        assert_eq!(
            deep_tree_genfun(&k3, 1, 0).unwrap(),
            rooted_tree_genfun(&k3, 1).unwrap()
        );
    }

    #[test]
    fn bound_check_examples() {
        let cherry = Graph::star(2).unwrap();
        let c = tree_bound_check(&cherry, 0, 3, 1.0).unwrap();
        assert!((c.x - 2.0 / 9.0).abs() < 1e-15);
        assert!((c.value - (1.0 + 2.0 * c.x + c.x * c.x)).abs() < 1e-15);
        assert_eq!(c.bound, 2.25);
        assert!(c.holds);
        let zero = tree_bound_check(&Graph::petersen(), 0, 4, 0.0).unwrap();
        assert_eq!((zero.value, zero.bound, zero.holds), (1.0, 1.0, true));
        assert!(tree_bound_check(&Graph::petersen(), 0, 3, 1.0).is_err());
        assert!(stable_tree_bound_check(&Graph::star(3).unwrap(), 1, 3, 1.0).is_err());
        assert!(
            stable_tree_bound_check(&Graph::complete(4).unwrap(), 0, 3, 0.865)
                .unwrap()
                .holds
        );
        assert!(
            deep_tree_bound_check(&Graph::path(6).unwrap(), 0, 3, 3, 1.0)
                .unwrap()
                .holds
        );
    }

    proptest! {
        #[test]
        fn enumeration_matches_filter(n in 1usize..7, bits in any::<u64>(), v in 0usize..7, k in 0usize..4) {
            let mut pairs = Vec::new();
            let mut i = 0;
            for b in 1..n {
                for a in 0..b {
                    if bits >> i & 1 == 1 {
                        pairs.push((a, b));
                    }
                    i += 1;
                }
            }
            let g = Graph::from_edge_list(n, &pairs).unwrap();
            let v = v % n;
            let plain = rooted_tree_genfun(&g, v).unwrap();
            let stable = stable_tree_genfun(&g, v).unwrap();
            let deep = deep_tree_genfun(&g, v, k).unwrap();
            prop_assert_eq!(&plain, &brute(&g, v, TreeKind::Plain));
            prop_assert_eq!(&stable, &brute(&g, v, TreeKind::Stable));
            prop_assert_eq!(&deep, &brute(&g, v, TreeKind::Deep(k)));
            prop_assert!(stable.coefficientwise_le(&plain));
            prop_assert!(deep.coefficientwise_le(&plain));
            prop_assert!(deep_tree_genfun(&g, v, k + 1).unwrap().coefficientwise_le(&deep));
        }
    }
}
