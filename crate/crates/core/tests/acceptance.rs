//! End-to-end checks, one line per property. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chromazero::certifier::{
    b_max, certify, condition_general, condition_girth_limit, lambert_w, log_bound_holds, optimize, Mode,
    GENERAL_PAIRS, GIRTH_LIMIT_A, TABLE_DEGREES,
};
use chromazero::corpus::{connected_unlabelled, CorpusGraph};
use chromazero::graph::Graph;
use chromazero::poly::complex_roots;
use chromazero::report::scan;
use chromazero::verify::{run, tree_bound_trials, Suite, VerifyConfig, VerifySummary};
use chromazero::whitney::chromatic_polynomial;

const GENERAL_K: [f64; 6] = [2.321, 2.816, 3.107, 3.298, 3.965, 4.192];
const GIRTH_LIMIT_K: [f64; 6] = [1.944, 2.364, 2.612, 2.776, 3.348, 3.547];

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(name: &'static str, budget: Duration, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    let elapsed = start.elapsed();
    let within = elapsed <= budget;
    Outcome {
        name,
        pass: pass && within,
        detail: if within {
            detail
        } else {
            format!("{detail}; over budget {budget:?}")
        },
        elapsed,
    }
}

fn general_table() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for ((&d, (a, b)), want) in TABLE_DEGREES.iter().zip(GENERAL_PAIRS).zip(GENERAL_K) {
        let r = condition_general(d, a, b).expect("in range");
        let k = r.k;
        let opt = optimize(Mode::General, Some(d)).expect("feasible").k;
        let row_ok = r.holds && (k - want).abs() <= 1e-3 && opt <= want + 1e-3;
        ok &= row_ok;
        parts.push(format!("Δ={d} K={k:.4} opt={opt:.4}"));
    }
    (ok, parts.join(", "))
}

fn girth_limit_table() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for ((&d, a), want) in TABLE_DEGREES.iter().zip(GIRTH_LIMIT_A).zip(GIRTH_LIMIT_K) {
        let r = condition_girth_limit(d, a, b_max(d)).expect("in range");
        ok &= r.holds && (r.k - want).abs() <= 1e-3;
        parts.push(format!("Δ={d} K={:.4}", r.k));
    }
    (ok, parts.join(", "))
}

fn headline_constants() -> (bool, String) {
    let k_of = |mode, a, b| certify(mode, None, a, b).expect("in range").map(|c| c.k);
    let uniform = k_of(Mode::Uniform, 0.333, 0.739);
    let w = lambert_w(1.0 / std::f64::consts::E);
    let girth = k_of(Mode::GirthLimitUniform, 1.0 - std::f64::consts::E * w, 1.0);
    let claw = k_of(Mode::Clawfree, 0.377, 0.865);
    let ok = uniform.is_some_and(|k| k <= 4.25)
        && girth.is_some_and(|k| (k - 1.0 / w).abs() <= 1e-3 && (k - 3.5911).abs() <= 1e-3)
        && claw.is_some_and(|k| k <= 3.81);
    (
        ok,
        format!(
            "uniform {uniform:?}, large girth {girth:?} (1/W(1/e) = {:.6}), claw-free {claw:?}",
            1.0 / w
        ),
    )
}

fn suites_hold(summary: &VerifySummary, suites: &[Suite]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for s in &summary.suites {
        if suites.contains(&s.suite) {
            ok &= s.checks > 0 && s.failures == 0;
            parts.push(format!("{} {}/{}", s.suite, s.checks - s.failures, s.checks));
            if let Some(w) = &s.witness {
                parts.push(format!("witness {} ({})", w.graph6, w.detail));
            }
        }
    }
    (ok, format!("{} graphs: {}", summary.graphs, parts.join(", ")))
}

fn bound_trials() -> (bool, String) {
    let trials = tree_bound_trials(500, 0xb0d);
    let checks: usize = trials.iter().map(|t| t.results.len()).sum();
    let bad: Vec<String> = trials
        .iter()
        .filter(|t| !t.holds())
        .map(|t| format!("{} {:?}", t.graph6, t.trial))
        .collect();
    (bad.is_empty(), format!("500 trials, {checks} bounds, failures {bad:?}"))
}

fn root_containment() -> (bool, String) {
    let corpus: Vec<CorpusGraph> = connected_unlabelled(7)
        .expect("small order")
        .into_iter()
        .map(|graph| CorpusGraph {
            id: chromazero::graph::to_graph6(&graph),
            graph,
        })
        .collect();
    let (_, all) = scan(&corpus, 4.25);
    let claw: Vec<CorpusGraph> = corpus.iter().filter(|c| c.graph.is_claw_free()).cloned().collect();
    let (_, cf) = scan(&claw, 3.81);
    let mut complete_ok = true;
    let mut worst = 0.0f64;
    for d in 1..=6 {
        let chi = chromatic_polynomial(&Graph::complete(d + 1).expect("small"));
        let exact = chi.eval_int(&BigInt::from(d)) == BigInt::from(0);
        let roots = complex_roots(&chi).expect("roots");
        let target = Complex64::new(d as f64, 0.0);
        let nearest = roots
            .iter()
            .map(|r| r.center())
            .min_by(|x, y| (x - target).norm().total_cmp(&(y - target).norm()))
            .expect("degree at least 2");
        let gap = (nearest - target).norm();
        let residual = chi.eval_complex(nearest).0.norm();
        worst = worst.max(gap);
        complete_ok &= exact && gap <= 1e-8 && residual <= 1e-8;
    }
    let ok = all.all_within && all.errors == 0 && cf.all_within && cf.errors == 0 && complete_ok;
    (
        ok,
        format!(
            "{} connected graphs within 4.25Δ: {}; {} claw-free within 3.81Δ: {}; max |z|/Δ {:?}; complete graphs root at Δ (max gap {worst:e}): {complete_ok}",
            all.graphs, all.all_within, cf.graphs, cf.all_within, all.max_ratio
        ),
    )
}

fn log_bound() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let bad = (0..10_000)
        .map(|_| -rng.gen_range(f64::MIN_POSITIVE..=0.5))
        .filter(|&x| !log_bound_holds(x))
        .count();
    (bad == 0, format!("10000 samples in [-1/2, 0), {bad} violations"))
}

fn main() -> ExitCode {
    let minute = Duration::from_secs(60);
    let ten = Duration::from_secs(600);
    let mut outcomes = vec![
        timed("general-degree constants", minute, general_table),
        timed("large-girth constants", minute, girth_limit_table),
        timed("degree-free constants", minute, headline_constants),
    ];

    let start = Instant::now();
    let summary = run(&VerifyConfig::new(8, 0x5eed, 200)).expect("max_n in range");
    let verify_time = start.elapsed();
    let mut identities = timed("exact identities on small and random graphs", ten, || {
        suites_hold(
            &summary,
            &[
                Suite::Whitney,
                Suite::OrientationsEqualForests,
                Suite::AoDeletionContraction,
                Suite::ContractionExpansion,
                Suite::ExpandAnchors,
                Suite::FundamentalRecurrence,
            ],
        )
    });
    identities.elapsed += verify_time;
    identities.pass &= verify_time <= ten;
    outcomes.push(identities);
    outcomes.push(timed("phi injectivity and ao", ten, || {
        suites_hold(&summary, &[Suite::PhiInjectivity])
    }));
    outcomes.push(timed("tree generating-function bounds", ten, bound_trials));
    outcomes.push(timed("chromatic root containment", ten, root_containment));
    outcomes.push(timed("logarithm lower bound", minute, log_bound));

    let mut all = true;
    for o in &outcomes {
        all &= o.pass;
        println!(
            "{} {} [{:.2?}]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.elapsed,
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
