//! Chromatic-root scans: per-graph reports against a disk of radius `K·Δ`.

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::CorpusGraph;
use crate::poly::{complex_roots, ComplexInterval};
use crate::whitney::chromatic_polynomial;

/// Largest order the root scan accepts.
pub const MAX_ROOT_N: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    pub id: String,
    pub n: usize,
    pub delta: usize,
    pub roots: Vec<ComplexInterval>,
    pub max_modulus: f64,
    pub k: f64,
    /// Every root satisfies `|z| ≤ K·Δ + r` for its inclusion radius `r`.
    /// `false` whenever the roots could not be computed.
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RootReport {
    /// `max_modulus / Δ`, or `None` for edgeless graphs.
    pub fn ratio(&self) -> Option<f64> {
        (self.delta > 0 && self.error.is_none()).then(|| self.max_modulus / self.delta as f64)
    }
}

pub fn root_report(item: &CorpusGraph, k: f64) -> RootReport {
    let g = &item.graph;
    let delta = g.max_degree();
    let mut report = RootReport {
        id: item.id.clone(),
        n: g.n(),
        delta,
        roots: Vec::new(),
        max_modulus: 0.0,
        k,
        verdict: false,
        error: None,
    };
    if g.n() > MAX_ROOT_N {
        report.error = Some(format!("{} vertices exceeds the limit of {MAX_ROOT_N}", g.n()));
        return report;
    }
    match complex_roots(&chromatic_polynomial(g)) {
        Ok(roots) => {
            let disk = k * delta as f64;
            report.max_modulus = roots.iter().map(|r| r.modulus()).fold(0.0, f64::max);
            report.verdict = roots.iter().all(|r| r.modulus() <= disk + r.radius);
            report.roots = roots;
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub graphs: usize,
    pub k: f64,
    pub all_within: bool,
    pub failures: usize,
    pub errors: usize,
    /// Largest `max_modulus / Δ` over graphs with an edge.
    pub max_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio_id: Option<String>,
}

/// Reports in corpus order. Graphs are processed in parallel.
pub fn scan(corpus: &[CorpusGraph], k: f64) -> (Vec<RootReport>, ScanSummary) {
    let reports: Vec<RootReport> = corpus.par_iter().map(|c| root_report(c, k)).collect();
    let mut best: Option<(f64, &str)> = None;
    for r in &reports {
        if let Some(q) = r.ratio() {
            if best.is_none_or(|(b, _)| q > b) {
                best = Some((q, &r.id));
            }
        }
    }
    let summary = ScanSummary {
        graphs: reports.len(),
        k,
        all_within: reports.iter().all(|r| r.verdict),
        failures: reports.iter().filter(|r| !r.verdict && r.error.is_none()).count(),
        errors: reports.iter().filter(|r| r.error.is_some()).count(),
        max_ratio: best.map(|b| b.0),
        max_ratio_id: best.map(|b| b.1.to_string()),
    };
    (reports, summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{named_family, Family};
    use crate::graph::Graph;

    fn item(id: &str, graph: Graph) -> CorpusGraph {
        CorpusGraph { id: id.into(), graph }
    }

    #[test]
    fn complete_graph_roots_reach_delta() {
        let r = root_report(&item("K4", Graph::complete(4).unwrap()), 4.25);
        assert_eq!(r.delta, 3);
        assert!((r.max_modulus - 3.0).abs() < 1e-9);
        assert!(r.verdict);
        assert_eq!(r.roots.len(), 4);
    }

    #[test]
    fn verdict_uses_the_disk() {
        // K4 has a root at 3 = Δ, so K = 0.9 fails
        let r = root_report(&item("K4", Graph::complete(4).unwrap()), 0.9);
        assert!(!r.verdict);
        let edgeless = root_report(&item("E3", Graph::empty(3).unwrap()), 1.0);
        assert!(edgeless.verdict);
        assert_eq!(edgeless.ratio(), None);
    }

    #[test]
    fn oversized_graphs_are_flagged() {
        let r = root_report(&item("P15", Graph::path(15).unwrap()), 4.25);
        assert!(r.error.is_some() && !r.verdict);
    }

    #[test]
    fn scan_summary() {
        let corpus = named_family(Family::Complete, 5).unwrap();
        let (reports, s) = scan(&corpus, 4.25);
        assert_eq!(
            reports.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(),
            ["K1", "K2", "K3", "K4", "K5"]
        );
        assert!(s.all_within);
        // K2 has its root 1 at Δ = 1
        assert!((s.max_ratio.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(s.max_ratio_id.as_deref(), Some("K2"));
    }
}
