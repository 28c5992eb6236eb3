//! Identity suites run over a corpus of small graphs under random vertex and
//! edge orders.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{labelled_graphs, line_graph, random_graph};
use crate::graph::{bits, to_graph6, Graph, OrderedGraph};
use crate::orientations::{
    ao_deletion_contraction_check, count_ao, expand_u_check, fundamental_recurrence_check, orientation_polynomial,
    phi_injectivity_check, star_forests, star_forests_anchored, structure_bad_check,
};
use crate::tree_genfun::{
    deep_tree_bound_check, eval_nonnegative, stable_tree_bound_check, stable_tree_genfun, tree_bound_check, BoundCheck,
    TreeGenError,
};
use crate::whitney::{chromatic_polynomial, expand_contraction_check, forest_polynomial};

/// Largest order accepted by [`run`].
pub const MAX_VERIFY_N: usize = 9;

/// Graphs up to this order are enumerated exhaustively (all labelled graphs).
pub const EXHAUSTIVE_N: usize = 5;

/// Arguments of the forest-to-tree comparison.
pub const FOREST_TO_TREE_YS: [f64; 3] = [0.01, 0.05, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// `χ_G` is the Whitney transform of the BCF generating function.
    Whitney,
    /// Orientation, BCF and star-forest generating functions coincide.
    OrientationsEqualForests,
    /// `phi` is injective with inverse `reconstruct`, and `ao(G, v)` is the
    /// absolute linear coefficient of `χ_G` for every root `v`.
    PhiInjectivity,
    AoDeletionContraction,
    ContractionExpansion,
    /// Anchored forests that do not extend to a star tree through `v`.
    StarExtension,
    ExpandAnchors,
    FundamentalRecurrence,
    ForestToTree,
    TreeBounds,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Whitney,
        Suite::OrientationsEqualForests,
        Suite::PhiInjectivity,
        Suite::AoDeletionContraction,
        Suite::ContractionExpansion,
        Suite::StarExtension,
        Suite::ExpandAnchors,
        Suite::FundamentalRecurrence,
        Suite::ForestToTree,
        Suite::TreeBounds,
    ];

    fn index(self) -> usize {
        Suite::ALL.iter().position(|&s| s == self).expect("listed")
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub max_n: usize,
    pub seed: u64,
    /// Random graphs drawn with `EXHAUSTIVE_N < n ≤ max_n`.
    pub trials: usize,
    /// Random orderings per graph.
    pub orderings: usize,
    pub edge_probability: f64,
    /// Test hook: every check of this suite reports failure.
    #[doc(hidden)]
    pub inject_fault: Option<Suite>,
}

impl VerifyConfig {
    pub fn new(max_n: usize, seed: u64, trials: usize) -> Self {
        VerifyConfig {
            max_n,
            seed,
            trials,
            orderings: 3,
            edge_probability: 0.5,
            inject_fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub graph6: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub checks: u64,
    pub failures: u64,
    /// The first failure in corpus order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub max_n: usize,
    pub seed: u64,
    pub trials: usize,
    pub orderings: usize,
    pub graphs: usize,
    pub passed: bool,
    pub suites: Vec<SuiteSummary>,
}

#[derive(Debug, thiserror::Error)]
#[error("max_n = {0} exceeds {MAX_VERIFY_N}")]
pub struct VerifyRangeError(pub usize);

/// The graphs [`run`] checks: all labelled graphs on `1..=min(max_n, 5)`
/// vertices followed by `trials` random graphs `G(n, p)` with
/// `6 ≤ n ≤ max_n`.
pub fn verification_corpus(cfg: &VerifyConfig) -> Result<Vec<Graph>, VerifyRangeError> {
    if cfg.max_n > MAX_VERIFY_N {
        return Err(VerifyRangeError(cfg.max_n));
    }
    let mut graphs = Vec::new();
    for n in 1..=cfg.max_n.min(EXHAUSTIVE_N) {
        graphs.extend(labelled_graphs(n).expect("small order"));
    }
    if cfg.max_n > EXHAUSTIVE_N {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.trials {
            let n = rng.gen_range(EXHAUSTIVE_N + 1..=cfg.max_n);
            graphs.push(random_graph(&mut rng, n, cfg.edge_probability).expect("small order"));
        }
    }
    Ok(graphs)
}

#[derive(Debug, Clone, Default)]
struct Tally {
    checks: u64,
    failures: u64,
    witness: Option<Witness>,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures += other.failures;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }
}

struct Recorder<'a> {
    graph: &'a Graph,
    tallies: Vec<Tally>,
    fault: Option<Suite>,
}

impl<'a> Recorder<'a> {
    fn new(graph: &'a Graph, fault: Option<Suite>) -> Self {
        Recorder {
            graph,
            tallies: vec![Tally::default(); Suite::ALL.len()],
            fault,
        }
    }

    fn record<E: fmt::Display>(&mut self, suite: Suite, detail: impl FnOnce() -> String, outcome: Result<bool, E>) {
        let faulty = self.fault == Some(suite);
        let t = &mut self.tallies[suite.index()];
        t.checks += 1;
        let failure = match outcome {
            Ok(true) if !faulty => None,
            Ok(true) => Some("injected fault".to_string()),
            Ok(false) => Some(detail()),
            Err(e) => Some(format!("{}: {e}", detail())),
        };
        if let Some(detail) = failure {
            t.failures += 1;
            if t.witness.is_none() {
                t.witness = Some(Witness {
                    graph6: to_graph6(self.graph),
                    detail,
                });
            }
        }
    }
}

fn orders_text(og: &OrderedGraph) -> String {
    format!("vertex order {:?}, edge order {:?}", og.vertex_order(), og.edge_order())
}

fn check_graph(g: &Graph, rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Vec<Tally> {
    let mut rec = Recorder::new(g, cfg.inject_fault);
    let n = g.n();
    let chi = chromatic_polynomial(g);

    // order-independent checks
    if g.is_connected() {
        let linear = chi.coeff(1).magnitude().clone();
        for v in 0..n {
            let ok = num_bigint::BigUint::from(count_ao(g, v)) == linear;
            rec.record::<String>(
                Suite::PhiInjectivity,
                || format!("ao at root {v} differs from |[x]χ|"),
                Ok(ok),
            );
        }
    }
    for e in 0..g.m() {
        rec.record(
            Suite::ContractionExpansion,
            || format!("edge {:?}", g.edges()[e]),
            expand_contraction_check(g, e),
        );
    }
    for v in 0..n {
        let nb: Vec<usize> = g.neighbors(v).collect();
        for (i, &p) in nb.iter().enumerate() {
            for &q in &nb[i + 1..] {
                if !g.has_edge(p, q) {
                    rec.record(
                        Suite::StarExtension,
                        || format!("v = {v}, U = {{{p}, {q}}}"),
                        structure_bad_check(g, v, (p, q)),
                    );
                }
            }
        }
    }
    tree_bound_trial(g, rng, &mut rec);

    for _ in 0..cfg.orderings {
        let og = OrderedGraph::random(g.clone(), rng);
        let forest = forest_polynomial(&og);
        let whitney = forest
            .whitney_transform(n)
            .and_then(|t| Ok(t == chi && chi.inverse_whitney_transform(n)? == forest));
        rec.record(Suite::Whitney, || orders_text(&og), whitney);
        let stars = star_forests(&og).generating_function();
        rec.record::<String>(
            Suite::OrientationsEqualForests,
            || orders_text(&og),
            Ok(orientation_polynomial(&og) == forest && stars == forest),
        );
        if g.is_connected() {
            for v in 0..n {
                rec.record(
                    Suite::PhiInjectivity,
                    || format!("root {v}, {}", orders_text(&og)),
                    phi_injectivity_check(g, v, og.edge_ranks()),
                );
            }
        }
        if let Some(u) = og.min_vertex(g.vertex_mask()) {
            for e in g.incident_edges(u).iter() {
                rec.record(
                    Suite::AoDeletionContraction,
                    || format!("edge {:?}, {}", g.edges()[e], orders_text(&og)),
                    ao_deletion_contraction_check(&og, e),
                );
            }
        }
        let mut anchor_sets = vec![0u64];
        for i in 0..n {
            anchor_sets.push(1 << i);
            for j in i + 1..n {
                anchor_sets.push(1 << i | 1 << j);
            }
        }
        for &u in &anchor_sets {
            rec.record(
                Suite::ExpandAnchors,
                || format!("U = {:?}, {}", bits(u).collect::<Vec<_>>(), orders_text(&og)),
                expand_u_check(&og, u),
            );
        }
        for v in 0..n {
            rec.record(
                Suite::FundamentalRecurrence,
                || format!("v = {v}, {}", orders_text(&og)),
                fundamental_recurrence_check(&og, v),
            );
        }
        let stable: Vec<_> = (0..n)
            .map(|s| stable_tree_genfun(g, s).expect("vertex exists"))
            .collect();
        for &u in anchor_sets.iter().skip(1) {
            let family = star_forests_anchored(&og, u).expect("anchors exist");
            for y in FOREST_TO_TREE_YS {
                let lhs = family.evaluate(y);
                let rhs: f64 = bits(u).map(|s| eval_nonnegative(&stable[s], y)).product();
                rec.record::<String>(
                    Suite::ForestToTree,
                    || {
                        format!(
                            "S = {:?}, y = {y}: {lhs} > {rhs}, {}",
                            bits(u).collect::<Vec<_>>(),
                            orders_text(&og)
                        )
                    },
                    Ok(lhs <= rhs * (1.0 + 1e-12)),
                );
            }
        }
    }
    rec.tallies
}

fn bound_outcome(r: Result<BoundCheck, TreeGenError>) -> Result<bool, TreeGenError> {
    r.map(|c| c.holds)
}

fn tree_bound_trial(g: &Graph, rng: &mut ChaCha8Rng, rec: &mut Recorder<'_>) {
    if g.n() == 0 {
        return;
    }
    let trial = TreeBoundTrial::draw(g, rng);
    for (name, outcome) in trial.run(g) {
        let t = trial.clone();
        rec.record(Suite::TreeBounds, move || format!("{name} at {t:?}"), outcome);
    }
}

/// One randomized instance of the tree generating-function bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeBoundTrial {
    pub root: usize,
    pub delta: usize,
    pub b: f64,
    pub depth: usize,
}

impl TreeBoundTrial {
    /// Random root, `b ∈ [0, 3]`, depth `k ≤ n`, and `Δ` the smallest value
    /// (at least 2) compatible with the graph and with `deg(root) ≤ Δ - 1`,
    /// sometimes increased by one.
    pub fn draw<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Self {
        let root = rng.gen_range(0..g.n());
        let delta = g.max_degree().max(g.degree(root) + 1).max(2) + rng.gen_range(0..=1);
        TreeBoundTrial {
            root,
            delta,
            b: rng.gen_range(0.0..=3.0),
            depth: rng.gen_range(0..=g.n()),
        }
    }

    /// Outcomes of the plain and deep tree bounds, plus the stable bound when
    /// `g` is claw-free.
    pub fn run(&self, g: &Graph) -> Vec<(&'static str, Result<bool, TreeGenError>)> {
        let mut out = vec![
            (
                "tree bound",
                bound_outcome(tree_bound_check(g, self.root, self.delta, self.b)),
            ),
            (
                "deep tree bound",
                bound_outcome(deep_tree_bound_check(g, self.root, self.delta, self.depth, self.b)),
            ),
        ];
        if g.is_claw_free() {
            out.push((
                "stable tree bound",
                bound_outcome(stable_tree_bound_check(g, self.root, self.delta, self.b)),
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub graph6: String,
    pub trial: TreeBoundTrial,
    /// `(bound, holds)` per bound tried.
    pub results: Vec<(&'static str, bool)>,
}

impl TrialOutcome {
    pub fn holds(&self) -> bool {
        self.results.iter().all(|r| r.1)
    }
}

/// `count` random bound trials. Every third graph is the line graph of a
/// random graph so the stable bound is exercised on claw-free inputs.
pub fn tree_bound_trials(count: usize, seed: u64) -> Vec<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let g = if i % 3 == 2 {
                loop {
                    let n = rng.gen_range(2..=6);
                    let base = random_graph(&mut rng, n, 0.5).expect("small order");
                    if (1..=10).contains(&base.m()) {
                        break line_graph(&base).expect("few edges");
                    }
                }
            } else {
                let n = rng.gen_range(1..=8);
                let p = rng.gen_range(0.2..0.8);
                random_graph(&mut rng, n, p).expect("small order")
            };
            let trial = TreeBoundTrial::draw(&g, &mut rng);
            let results = trial
                .run(&g)
                .into_iter()
                .map(|(name, r)| (name, matches!(r, Ok(true))))
                .collect();
            TrialOutcome {
                graph6: to_graph6(&g),
                trial,
                results,
            }
        })
        .collect()
}

/// Runs every suite over [`verification_corpus`]. Graphs are checked in
/// parallel; each draws its orderings from its own stream of the seed, and
/// tallies are merged in corpus order.
pub fn run(cfg: &VerifyConfig) -> Result<VerifySummary, VerifyRangeError> {
    let graphs = verification_corpus(cfg)?;
    let per_graph: Vec<Vec<Tally>> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64 + 1);
            check_graph(g, &mut rng, cfg)
        })
        .collect();
    let mut totals = vec![Tally::default(); Suite::ALL.len()];
    for tallies in per_graph {
        for (t, other) in totals.iter_mut().zip(tallies) {
            t.merge(other);
        }
    }
    let suites: Vec<SuiteSummary> = Suite::ALL
        .iter()
        .zip(totals)
        .map(|(&suite, t)| SuiteSummary {
            suite,
            checks: t.checks,
            failures: t.failures,
            witness: t.witness,
        })
        .collect();
    Ok(VerifySummary {
        max_n: cfg.max_n,
        seed: cfg.seed,
        trials: cfg.trials,
        orderings: cfg.orderings,
        graphs: graphs.len(),
        passed: suites.iter().all(|s| s.failures == 0),
        suites,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph6;

    #[test]
    fn vacuous_run_passes() {
        let s = run(&VerifyConfig::new(0, 1, 10)).unwrap();
        assert!(s.passed);
        assert_eq!(s.graphs, 0);
        assert!(s.suites.iter().all(|t| t.checks == 0));
    }

    #[test]
    fn small_exhaustive_run_passes() {
        let s = run(&VerifyConfig::new(4, 7, 0)).unwrap();
        assert_eq!(s.graphs, 1 + 2 + 8 + 64);
        assert!(s.passed, "{s:?}");
        assert!(s.suites.iter().all(|t| t.checks > 0), "{s:?}");
    }

    #[test]
    fn injected_fault_is_reported_with_witness() {
        let mut cfg = VerifyConfig::new(3, 7, 0);
        cfg.inject_fault = Some(Suite::Whitney);
        let s = run(&cfg).unwrap();
        assert!(!s.passed);
        let w = s.suites[0].witness.as_ref().unwrap();
        // the first graph of the corpus is the single vertex
        assert_eq!(parse_graph6(&w.graph6).unwrap().n(), 1);
        assert!(s.suites[1..].iter().all(|t| t.failures == 0));
    }

    #[test]
    fn rejects_large_orders() {
        assert!(run(&VerifyConfig::new(10, 0, 1)).is_err());
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = VerifyConfig::new(7, 3, 6);
        assert_eq!(run(&cfg).unwrap(), run(&cfg).unwrap());
    }

    #[test]
    fn bound_trials_hold() {
        let trials = tree_bound_trials(60, 11);
        assert!(trials.iter().any(|t| t.results.len() == 3));
        for t in trials {
            assert!(t.holds(), "{t:?}");
        }
    }
}
