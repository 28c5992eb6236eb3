use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chromazero::certifier::{certify, emit_tables, optimize, optimized_tables, CertError, Certificate, Mode, TableRow};
use chromazero::corpus::{CorpusSpec, Family, DEFAULT_SEED};
use chromazero::graph::{parse_graphs, to_graph6, Graph, OrderedGraph};
use chromazero::orientations::orientation_polynomial;
use chromazero::poly::IntPolynomial;
use chromazero::report::{scan, RootReport, ScanSummary};
use chromazero::verify::{run, VerifyConfig};
use chromazero::whitney::{chromatic_polynomial, forest_polynomial};

const EXIT_PARSE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "chromazero",
    version,
    about = "Chromatic polynomials, identity checks and zero-free disks"
)]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CorpusKind {
    Exhaustive,
    Random,
    Complete,
    Cycle,
    Path,
    Bipartite,
    Petersen,
}

#[derive(Subcommand)]
enum Command {
    /// Print the chromatic, BCF-forest and orientation polynomials.
    Chromatic {
        /// graph6 string or edge list; read from stdin when omitted.
        graph: Option<String>,
        /// Comma-separated vertex order (default 0, 1, ...).
        #[arg(long, value_delimiter = ',')]
        vertex_order: Option<Vec<usize>>,
        /// Comma-separated edge order by edge index (default lexicographic).
        #[arg(long, value_delimiter = ',')]
        edge_order: Option<Vec<usize>>,
    },
    /// Run the identity suites and print a JSON summary.
    Verify {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random graphs with more than five vertices.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        orderings: usize,
    },
    /// Certify a disk constant, at the given (a, b) or by optimising.
    Certify {
        /// general, girth, girth-limit, girth-limit-uniform, uniform or clawfree.
        #[arg(long)]
        mode: String,
        #[arg(long)]
        delta: Option<usize>,
        /// Girth for `--mode girth`.
        #[arg(long)]
        girth: Option<usize>,
        #[arg(short, long, requires = "b")]
        a: Option<f64>,
        #[arg(short, long, requires = "a")]
        b: Option<f64>,
    },
    /// Emit the general and large-girth constant tables as CSV.
    Tables {
        /// Optimise each row instead of evaluating the reference pairs.
        #[arg(long)]
        optimize: bool,
    },
    /// Compute chromatic roots over a corpus and compare with K·Δ.
    Roots {
        #[arg(long, value_enum, default_value = "exhaustive")]
        corpus: CorpusKind,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random corpus size.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        #[arg(long, default_value_t = 4.25)]
        k_constant: f64,
        /// Take K from an optimised certificate of a degree-free mode instead.
        #[arg(long, conflicts_with = "k_constant")]
        mode: Option<String>,
        /// Keep only claw-free graphs.
        #[arg(long)]
        claw_free: bool,
        /// Omit the individual roots from each report.
        #[arg(long)]
        no_roots: bool,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("CHROMAZERO_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                return fail(
                    EXIT_PARSE,
                    format!("CHROMAZERO_THREADS={t:?} is not a positive integer"),
                )
            }
        }
    }
    let format = cli.format;
    match cli.command {
        Command::Chromatic {
            graph,
            vertex_order,
            edge_order,
        } => cmd_chromatic(graph, vertex_order, edge_order, format.unwrap_or(Format::Text)),
        Command::Verify {
            max_n,
            seed,
            trials,
            orderings,
        } => {
            let mut cfg = VerifyConfig::new(max_n, seed, trials);
            cfg.orderings = orderings;
            match run(&cfg) {
                Ok(summary) => {
                    println!("{}", serde_json::to_string(&summary).expect("serialisable"));
                    if summary.passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(EXIT_VERIFY)
                    }
                }
                Err(e) => fail(EXIT_PARSE, e),
            }
        }
        Command::Certify {
            mode,
            delta,
            girth,
            a,
            b,
        } => cmd_certify(&mode, delta, girth, a.zip(b), format.unwrap_or(Format::Json)),
        Command::Tables { optimize } => cmd_tables(optimize, format.unwrap_or(Format::Csv)),
        Command::Roots {
            corpus,
            max_n,
            seed,
            count,
            edge_prob,
            k_constant,
            mode,
            claw_free,
            no_roots,
        } => {
            let spec = match corpus {
                CorpusKind::Exhaustive => CorpusSpec::Exhaustive { max_n },
                CorpusKind::Random => CorpusSpec::Random {
                    count,
                    n_min: 1,
                    n_max: max_n,
                    p: edge_prob,
                    seed,
                },
                CorpusKind::Complete => named(Family::Complete, max_n),
                CorpusKind::Cycle => named(Family::Cycle, max_n),
                CorpusKind::Path => named(Family::Path, max_n),
                CorpusKind::Bipartite => named(Family::CompleteBipartite, max_n),
                CorpusKind::Petersen => named(Family::Petersen, max_n.max(10)),
            };
            let k = match mode {
                None => k_constant,
                Some(m) => match degree_free_k(&m) {
                    Ok(k) => k,
                    Err((code, msg)) => return fail(code, msg),
                },
            };
            cmd_roots(&spec, k, claw_free, no_roots, format.unwrap_or(Format::Json))
        }
    }
}

fn named(family: Family, max_n: usize) -> CorpusSpec {
    CorpusSpec::Named { family, max_n }
}

fn coeff_values(p: &IntPolynomial) -> Vec<Value> {
    p.coeffs()
        .iter()
        .map(|c| {
            let s = c.to_string();
            s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
        })
        .collect()
}

fn coeff_text(p: &IntPolynomial) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn read_input(graph: Option<String>) -> io::Result<String> {
    match graph {
        Some(g) if g != "-" => Ok(g),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn cmd_chromatic(
    graph: Option<String>,
    vertex_order: Option<Vec<usize>>,
    edge_order: Option<Vec<usize>>,
    format: Format,
) -> ExitCode {
    let text = match read_input(graph) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let graphs = match parse_graphs(&text) {
        Ok(gs) if !gs.is_empty() => gs,
        Ok(_) => return fail(EXIT_PARSE, "no graph in input"),
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let mut out = io::stdout().lock();
    for g in graphs {
        let og = match ordered(&g, vertex_order.as_deref(), edge_order.as_deref()) {
            Ok(og) => og,
            Err(e) => return fail(EXIT_PARSE, e),
        };
        let chi = chromatic_polynomial(&g);
        let forest = forest_polynomial(&og);
        let orient = orientation_polynomial(&og);
        let written = match format {
            Format::Json => writeln!(
                out,
                "{}",
                json!({
                    "graph": to_graph6(&g),
                    "n": g.n(),
                    "m": g.m(),
                    "vertex_order": og.vertex_order(),
                    "edge_order": og.edge_order(),
                    "chromatic": coeff_values(&chi),
                    "forest": coeff_values(&forest),
                    "orientations": coeff_values(&orient),
                })
            ),
            Format::Text | Format::Csv => writeln!(
                out,
                "graph {}\nchromatic {}\nforest {}\norientations {}",
                to_graph6(&g),
                coeff_text(&chi),
                coeff_text(&forest),
                coeff_text(&orient)
            ),
        };
        if written.is_err() {
            return ExitCode::FAILURE;
        }
    }
    ExitCode::SUCCESS
}

fn ordered(
    g: &Graph,
    vertex_order: Option<&[usize]>,
    edge_order: Option<&[usize]>,
) -> Result<OrderedGraph, chromazero::graph::GraphError> {
    let natural_v: Vec<usize> = (0..g.n()).collect();
    let natural_e: Vec<usize> = (0..g.m()).collect();
    OrderedGraph::new(
        g.clone(),
        vertex_order.unwrap_or(&natural_v),
        edge_order.unwrap_or(&natural_e),
    )
}

fn parse_mode(name: &str, girth: Option<usize>) -> Result<Mode, String> {
    match (name, girth) {
        ("girth" | "general-girth", Some(g)) => Ok(Mode::GeneralGirth(g)),
        ("girth" | "general-girth", None) => Err("--mode girth needs --girth".into()),
        (_, Some(_)) => Err("--girth only applies to --mode girth".into()),
        _ => name.parse(),
    }
}

fn cert_exit(e: CertError) -> (u8, String) {
    match e {
        CertError::Range(_) => (EXIT_PARSE, e.to_string()),
        CertError::Infeasible(_) => (EXIT_INFEASIBLE, e.to_string()),
    }
}

fn degree_free_k(name: &str) -> Result<f64, (u8, String)> {
    let mode = name.parse::<Mode>().map_err(|e| (EXIT_PARSE, e))?;
    if mode.needs_delta() {
        return Err((EXIT_PARSE, format!("mode {mode} depends on the maximum degree")));
    }
    optimize(mode, None).map(|c| c.k).map_err(cert_exit)
}

fn cmd_certify(
    name: &str,
    delta: Option<usize>,
    girth: Option<usize>,
    pair: Option<(f64, f64)>,
    format: Format,
) -> ExitCode {
    let mode = match parse_mode(name, girth) {
        Ok(m) => m,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    if mode.needs_delta() && delta.is_none() {
        return fail(EXIT_PARSE, format!("mode {mode} needs --delta"));
    }
    let delta = if mode.needs_delta() { delta } else { None };
    let result: Result<Certificate, CertError> = match pair {
        Some((a, b)) => certify(mode, delta, a, b).and_then(|c| c.ok_or(CertError::Infeasible(mode))),
        None => optimize(mode, delta),
    };
    match result {
        Ok(cert) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string(&cert).expect("serialisable")),
                Format::Csv => {
                    println!("mode,delta,K,a,b,radius");
                    println!(
                        "{},{},{:.4},{},{},{}",
                        cert.mode,
                        cert.delta.map(|d| d.to_string()).unwrap_or_default(),
                        cert.k,
                        cert.a,
                        cert.b,
                        cert.radius
                    );
                }
                Format::Text => println!("{} K = {:.4} at a = {}, b = {}", cert.mode, cert.k, cert.a, cert.b),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (code, msg) = cert_exit(e);
            fail(code, msg)
        }
    }
}

fn cmd_tables(optimize: bool, format: Format) -> ExitCode {
    let tables = if optimize { optimized_tables() } else { emit_tables() };
    let (general, girth) = match tables {
        Ok(t) => t,
        Err(e) => {
            let (code, msg) = cert_exit(e);
            return fail(code, msg);
        }
    };
    let rows = general
        .iter()
        .map(|r| ("general", r))
        .chain(girth.iter().map(|r| ("girth-limit", r)));
    match format {
        Format::Json => {
            for (table, r) in rows {
                println!(
                    "{}",
                    json!({"table": table, "delta": r.delta, "K": r.k, "a": r.a, "b": r.b})
                );
            }
        }
        Format::Csv | Format::Text => {
            println!("table,{}", TableRow::csv_header());
            for (table, r) in rows {
                println!("{table},{}", r.to_csv());
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_roots(spec: &CorpusSpec, k: f64, claw_free: bool, no_roots: bool, format: Format) -> ExitCode {
    let mut corpus = match spec.generate() {
        Ok(c) => c,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    if claw_free {
        corpus.retain(|c| c.graph.is_claw_free());
    }
    let (mut reports, summary) = scan(&corpus, k);
    if no_roots {
        for r in &mut reports {
            r.roots.clear();
        }
    }
    let mut out = io::stdout().lock();
    let result = match format {
        Format::Json => write_json(&mut out, &reports, &summary),
        Format::Csv | Format::Text => write_table(&mut out, &reports, &summary),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(_) => ExitCode::FAILURE,
    }
}

fn write_json(out: &mut impl Write, reports: &[RootReport], summary: &ScanSummary) -> io::Result<()> {
    for r in reports {
        writeln!(out, "{}", serde_json::to_string(r).expect("serialisable"))?;
    }
    writeln!(out, "{}", json!({ "summary": summary }))
}

fn write_table(out: &mut impl Write, reports: &[RootReport], summary: &ScanSummary) -> io::Result<()> {
    writeln!(out, "id,n,delta,max_modulus,ratio,verdict")?;
    for r in reports {
        let ratio = r.ratio().map(|q| format!("{q:.6}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{:.6},{},{}",
            r.id, r.n, r.delta, r.max_modulus, ratio, r.verdict
        )?;
    }
    let worst = summary
        .max_ratio
        .map(|q| format!("{q:.6}"))
        .unwrap_or_else(|| "none".into());
    writeln!(
        out,
        "# {} graphs, K = {}, all within: {}, max |z|/delta = {}",
        summary.graphs, summary.k, summary.all_within, worst
    )
}
