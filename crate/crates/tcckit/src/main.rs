//! Command-line front end: generation, verification, discharging, coloring,
//! pattern matching, extension traces, and DOT export.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;
use tcckit::coloring::{
    parse_tcc, solve, total_chromatic_number, validate, write_tcc, ChiResult,
    PartialTotalColoring, SolveOutcome,
};
use tcckit::discharge::{audit, parametric_analysis, DischargeParams, DonorMode};
use tcckit::extension::{
    extend_edge_uv, extend_vertex_u, locate_config, trace_to_jsonl, Config646, PALETTE,
};
use tcckit::generate::{gen_planar, metadata, sample_theorem_class, GenMode, GenSpec};
use tcckit::graph::{parse_tcg, write_tcg, Element, FaceSet, Graph};
use tcckit::patterns::{contains_forbidden, subgraph_match, MatchOptions, PatternCatalog};

/// Built-in pattern catalog; `TCCKIT_CATALOG` points at a replacement file.
const BUILTIN_CATALOG: &str = include_str!("../assets/patterns.patcat");

const EXIT_OK: u8 = 0;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_IN_CLASS: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

#[derive(Parser)]
#[command(name = "tcckit", version, about = "Total-coloring verification toolkit")]
struct Cli {
    /// Seed for randomized subcommands (required by them; no ambient entropy).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit the run report as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Omit timings from reports (for byte-identical output).
    #[arg(long, global = true)]
    no_timing: bool,
    /// Parallelism across input files.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Backtracking node budget for solver-backed subcommands.
    #[arg(long, global = true, default_value_t = tcckit::coloring::DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliGenMode {
    Triangulation,
    Sparse,
    TheoremClass,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliDonorMode {
    Exclusive,
    Split,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtendMode {
    Edge,
    Vertex,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded embedded planar graph plus a metadata sidecar.
    Gen {
        /// Target vertex count.
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = CliGenMode::Sparse)]
        mode: CliGenMode,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Output path for the graph; metadata goes to `<out>.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Full pipeline: parse, faces, degree cap, forbidden shapes, 8-coloring.
    Verify {
        inputs: Vec<PathBuf>,
        /// Where to write the witness coloring (single input only).
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Exact-rational discharging audit.
    Discharge {
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = CliDonorMode::Exclusive)]
        donor_mode: CliDonorMode,
        /// Also report the parametric sum/frontier for lambda = p/q.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Total chromatic number with witness and infeasibility certificate.
    Chi {
        input: PathBuf,
        #[arg(long)]
        max_k: Option<usize>,
    },
    /// Solve for a total coloring at a fixed palette size.
    Color {
        input: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Partial coloring to respect ("tcc v1").
        #[arg(long)]
        fixed: Option<PathBuf>,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Match the pattern catalog against a host graph.
    Patterns { inputs: Vec<PathBuf> },
    /// Run an extension procedure and emit its recoloring trace.
    Extend {
        input: PathBuf,
        /// Partial coloring ("tcc v1") satisfying the procedure hypothesis.
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_enum)]
        mode: ExtendMode,
        /// Configuration selection; only "auto" is supported.
        #[arg(long, default_value = "auto")]
        config: String,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Deterministic DOT export with degree labels and optional colors.
    ExportDot {
        input: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    input_digest: Vec<String>,
    verdicts: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<u64>,
    artifacts: Vec<String>,
}

struct Ctx {
    json: bool,
    no_timing: bool,
    node_budget: u64,
    seed: Option<u64>,
    catalog: PatternCatalog,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let catalog = match load_catalog() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let ctx = Ctx {
        json: cli.json,
        no_timing: cli.no_timing,
        node_budget: cli.node_budget,
        seed: cli.seed,
        catalog,
    };
    let started = Instant::now();
    let result = match cli.command {
        Cmd::Gen { n, mode, max_degree, out } => cmd_gen(&ctx, n, mode, max_degree, &out),
        Cmd::Verify { inputs, witness_out } => {
            per_file(&ctx, cli.jobs, &inputs, move |ctx, p| {
                cmd_verify(ctx, p, witness_out.as_deref())
            })
        }
        Cmd::Discharge { inputs, donor_mode, lambda } => {
            per_file(&ctx, cli.jobs, &inputs, move |ctx, p| {
                cmd_discharge(ctx, p, donor_mode, lambda.as_deref())
            })
        }
        Cmd::Chi { input, max_k } => cmd_chi(&ctx, &input, max_k),
        Cmd::Color { input, k, fixed, witness_out } => {
            cmd_color(&ctx, &input, k, fixed.as_deref(), witness_out.as_deref())
        }
        Cmd::Patterns { inputs } => per_file(&ctx, cli.jobs, &inputs, cmd_patterns),
        Cmd::Extend { input, coloring, mode, config, trace_out } => {
            cmd_extend(&ctx, &input, &coloring, mode, &config, trace_out.as_deref())
        }
        Cmd::ExportDot { input, coloring } => cmd_export_dot(&ctx, &input, coloring.as_deref()),
    };
    match result {
        Ok((code, mut report)) => {
            if !ctx.no_timing {
                report.timings_ms = Some(started.elapsed().as_millis() as u64);
            }
            if ctx.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            }
            ExitCode::from(code)
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type CmdResult = Result<(u8, RunReport), (u8, String)>;

fn load_catalog() -> Result<PatternCatalog, String> {
    match std::env::var_os("TCCKIT_CATALOG") {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read catalog {}: {e}", path.to_string_lossy()))?;
            PatternCatalog::parse(&text).map_err(|e| format!("catalog parse: {e}"))
        }
        None => PatternCatalog::parse(BUILTIN_CATALOG).map_err(|e| format!("builtin catalog: {e}")),
    }
}

fn digest_text(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

fn read_graph(path: &Path) -> Result<(Graph, String), (u8, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let g = parse_tcg(&text)
        .map_err(|e| (EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Ok((g, digest_text(&text)))
}

fn read_coloring(path: &Path) -> Result<(PartialTotalColoring, String), (u8, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let c = parse_tcc(&text)
        .map_err(|e| (EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Ok((c, digest_text(&text)))
}

fn report(command: &str, digests: Vec<String>, verdicts: serde_json::Value, artifacts: Vec<String>) -> RunReport {
    RunReport {
        command: command.to_string(),
        input_digest: digests,
        verdicts,
        timings_ms: None,
        artifacts,
    }
}

fn say(ctx: &Ctx, line: &str) {
    if !ctx.json {
        println!("{line}");
    }
}

/// Runs a per-file subcommand over all inputs, optionally in parallel; the
/// process exit code is the worst per-file code and reports are merged.
fn per_file<F>(ctx: &Ctx, jobs: usize, inputs: &[PathBuf], f: F) -> CmdResult
where
    F: Fn(&Ctx, &Path) -> CmdResult + Sync,
{
    if inputs.is_empty() {
        return Err((EXIT_PARSE, "no input files given".into()));
    }
    let jobs = jobs.max(1).min(inputs.len());
    let results: Vec<CmdResult> = if jobs == 1 {
        inputs.iter().map(|p| f(ctx, p)).collect()
    } else {
        let mut slots: Vec<Option<CmdResult>> = (0..inputs.len()).map(|_| None).collect();
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slot_refs: Vec<std::sync::Mutex<&mut Option<CmdResult>>> =
            slots.iter_mut().map(std::sync::Mutex::new).collect();
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= inputs.len() {
                        break;
                    }
                    let r = f(ctx, &inputs[i]);
                    **slot_refs[i].lock().unwrap() = Some(r);
                });
            }
        });
        slots.into_iter().map(|s| s.unwrap()).collect()
    };
    let mut code = EXIT_OK;
    let mut digests = Vec::new();
    let mut verdicts = Vec::new();
    let mut artifacts = Vec::new();
    let mut command = String::new();
    for r in results {
        match r {
            Ok((c, rep)) => {
                code = code.max(c);
                command = rep.command;
                digests.extend(rep.input_digest);
                verdicts.push(rep.verdicts);
                artifacts.extend(rep.artifacts);
            }
            Err((c, msg)) => {
                code = code.max(c);
                eprintln!("error: {msg}");
                verdicts.push(json!({ "error": msg }));
            }
        }
    }
    Ok((code, report(&command, digests, json!(verdicts), artifacts)))
}

fn cmd_gen(
    ctx: &Ctx,
    n: usize,
    mode: CliGenMode,
    max_degree: Option<usize>,
    out: &Path,
) -> CmdResult {
    let Some(seed) = ctx.seed else {
        return Err((EXIT_PARSE, "gen requires an explicit --seed".into()));
    };
    let spec = GenSpec {
        budget: n,
        seed,
        mode: match mode {
            CliGenMode::Triangulation => GenMode::Triangulation,
            CliGenMode::Sparse | CliGenMode::TheoremClass => GenMode::Sparse,
        },
        max_degree: match mode {
            CliGenMode::TheoremClass => Some(max_degree.unwrap_or(6)),
            _ => max_degree,
        },
    };
    let (g, stats) = match mode {
        CliGenMode::TheoremClass => {
            let (g, s) = sample_theorem_class(&spec, &ctx.catalog)
                .map_err(|e| (EXIT_PARSE, e.to_string()))?;
            (g, Some(s))
        }
        _ => (gen_planar(&spec).map_err(|e| (EXIT_PARSE, e.to_string()))?, None),
    };
    let text = write_tcg(&g);
    std::fs::write(out, &text).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let meta = metadata(&g, &spec, stats.as_ref());
    let meta_path = format!("{}.json", out.display());
    std::fs::write(&meta_path, serde_json::to_string_pretty(&meta).unwrap())
        .map_err(|e| (EXIT_PARSE, e.to_string()))?;
    say(ctx, &format!("wrote {} (n={}, m={})", out.display(), g.vertex_count(), g.edge_count()));
    Ok((
        EXIT_OK,
        report(
            "gen",
            vec![digest_text(&text)],
            json!({ "n": g.vertex_count(), "m": g.edge_count(), "seed": seed }),
            vec![out.display().to_string(), meta_path],
        ),
    ))
}

fn cmd_verify(ctx: &Ctx, input: &Path, witness_out: Option<&Path>) -> CmdResult {
    let (g, digest) = read_graph(input)?;
    let fs = FaceSet::trace(&g);
    let euler = fs.euler_holds(&g);
    let fr = contains_forbidden(&g, &ctx.catalog);
    if !euler || !fr.admissible {
        let matched: Vec<&str> = fr
            .found
            .iter()
            .filter(|(_, m)| m.is_some())
            .map(|(n, _)| n.as_str())
            .collect();
        let why = if !euler {
            "embedding fails the Euler check".to_string()
        } else if fr.max_degree > 6 {
            format!("maximum degree {} exceeds 6", fr.max_degree)
        } else {
            format!("forbidden shape present: {}", matched.join(", "))
        };
        say(ctx, &format!("{}: not in class ({why})", input.display()));
        return Ok((
            EXIT_NOT_IN_CLASS,
            report(
                "verify",
                vec![digest],
                json!({ "input": input.display().to_string(), "in_class": false,
                        "reason": why, "matched": matched }),
                vec![],
            ),
        ));
    }
    let empty = PartialTotalColoring::new(8);
    let outcome = solve(&g, 8, &empty, ctx.node_budget)
        .map_err(|e| (EXIT_PARSE, e.to_string()))?;
    match outcome {
        SolveOutcome::Solution(w) => {
            let issues = validate(&g, &w).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            if !issues.is_empty() || !w.is_total(&g) {
                return Err((EXIT_PARSE, "internal: witness failed re-validation".into()));
            }
            let wpath = witness_out
                .map(|p| p.to_path_buf())
                .unwrap_or_else(|| input.with_extension("tcc"));
            std::fs::write(&wpath, write_tcc(&w)).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            say(ctx, &format!("{}: in class, 8-coloring found -> {}", input.display(), wpath.display()));
            Ok((
                EXIT_OK,
                report(
                    "verify",
                    vec![digest],
                    json!({ "input": input.display().to_string(), "in_class": true,
                            "colored": true, "palette": 8 }),
                    vec![wpath.display().to_string()],
                ),
            ))
        }
        SolveOutcome::Infeasible { nodes } => Err((
            EXIT_PARSE,
            format!("no total 8-coloring exists ({nodes} nodes searched)"),
        )),
        SolveOutcome::Timeout { nodes } => {
            say(ctx, &format!("{}: solver timeout after {nodes} nodes", input.display()));
            Ok((
                EXIT_TIMEOUT,
                report(
                    "verify",
                    vec![digest],
                    json!({ "input": input.display().to_string(), "in_class": true,
                            "colored": false, "timeout_nodes": nodes }),
                    vec![],
                ),
            ))
        }
    }
}

fn parse_lambda(s: &str) -> Result<num_rational::Ratio<i64>, (u8, String)> {
    let parts: Vec<&str> = s.split('/').collect();
    let bad = || (EXIT_PARSE, format!("bad lambda {s:?}, expected p/q"));
    match parts.as_slice() {
        [p, q] => {
            let p: i64 = p.parse().map_err(|_| bad())?;
            let q: i64 = q.parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(num_rational::Ratio::new(p, q))
        }
        [p] => Ok(num_rational::Ratio::from_integer(p.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn cmd_discharge(
    ctx: &Ctx,
    input: &Path,
    donor_mode: CliDonorMode,
    lambda: Option<&str>,
) -> CmdResult {
    let (g, digest) = read_graph(input)?;
    let fs = FaceSet::trace(&g);
    let params = DischargeParams {
        donor_mode: match donor_mode {
            CliDonorMode::Exclusive => DonorMode::Exclusive,
            CliDonorMode::Split => DonorMode::Split,
        },
    };
    let rep = audit(&g, &fs, &params).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let mut verdicts = serde_json::to_value(&rep).unwrap();
    if let Some(l) = lambda {
        let l = parse_lambda(l)?;
        let (sum, frontier) =
            parametric_analysis(&g, &fs, l).map_err(|e| (EXIT_PARSE, e.to_string()))?;
        verdicts["parametric"] = json!({
            "lambda": l.to_string(),
            "sum": sum.to_string(),
            "frontier": frontier.to_string(),
        });
    }
    say(
        ctx,
        &format!(
            "{}: initial {} final {} verdict {}",
            input.display(),
            rep.sum_initial.to_rat(),
            rep.sum_final.to_rat(),
            rep.verdict
        ),
    );
    Ok((EXIT_OK, report("discharge", vec![digest], verdicts, vec![])))
}

fn cmd_chi(ctx: &Ctx, input: &Path, max_k: Option<usize>) -> CmdResult {
    let (g, digest) = read_graph(input)?;
    let max_k = max_k.unwrap_or(g.max_degree() + 2);
    let res = total_chromatic_number(&g, max_k, ctx.node_budget)
        .map_err(|e| (EXIT_PARSE, e.to_string()))?;
    match res {
        ChiResult::Exact { chi, witness, infeasible_nodes_below } => {
            let issues = validate(&g, &witness).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            if !issues.is_empty() {
                return Err((EXIT_PARSE, "internal: witness failed re-validation".into()));
            }
            say(ctx, &format!("{}: chi'' = {chi}", input.display()));
            Ok((
                EXIT_OK,
                report(
                    "chi",
                    vec![digest],
                    json!({ "chi": chi, "witness": write_tcc(&witness),
                            "infeasible_nodes_below": infeasible_nodes_below }),
                    vec![],
                ),
            ))
        }
        ChiResult::LowerBoundOnly { tried_up_to } => Err((
            EXIT_PARSE,
            format!("no total coloring with up to {tried_up_to} colors"),
        )),
        ChiResult::Timeout { at_k } => {
            say(ctx, &format!("{}: timeout at k={at_k}", input.display()));
            Ok((
                EXIT_TIMEOUT,
                report("chi", vec![digest], json!({ "timeout_at_k": at_k }), vec![]),
            ))
        }
    }
}

fn cmd_color(
    ctx: &Ctx,
    input: &Path,
    k: usize,
    fixed: Option<&Path>,
    witness_out: Option<&Path>,
) -> CmdResult {
    let (g, digest) = read_graph(input)?;
    let mut digests = vec![digest];
    let fixed_coloring = match fixed {
        Some(p) => {
            let (c, d) = read_coloring(p)?;
            digests.push(d);
            c
        }
        None => PartialTotalColoring::new(k),
    };
    let outcome = solve(&g, k, &fixed_coloring, ctx.node_budget)
        .map_err(|e| (EXIT_PARSE, e.to_string()))?;
    match outcome {
        SolveOutcome::Solution(w) => {
            let mut artifacts = vec![];
            if let Some(p) = witness_out {
                std::fs::write(p, write_tcc(&w)).map_err(|e| (EXIT_PARSE, e.to_string()))?;
                artifacts.push(p.display().to_string());
            }
            say(ctx, &format!("{}: total {k}-coloring found", input.display()));
            Ok((
                EXIT_OK,
                report(
                    "color",
                    digests,
                    json!({ "feasible": true, "k": k, "witness": write_tcc(&w) }),
                    artifacts,
                ),
            ))
        }
        SolveOutcome::Infeasible { nodes } => {
            say(ctx, &format!("{}: infeasible at k={k} ({nodes} nodes)", input.display()));
            Ok((
                EXIT_OK,
                report(
                    "color",
                    digests,
                    json!({ "feasible": false, "k": k, "certificate_nodes": nodes }),
                    vec![],
                ),
            ))
        }
        SolveOutcome::Timeout { nodes } => {
            say(ctx, &format!("{}: timeout at k={k}", input.display()));
            Ok((
                EXIT_TIMEOUT,
                report("color", digests, json!({ "timeout_nodes": nodes, "k": k }), vec![]),
            ))
        }
    }
}

fn cmd_patterns(ctx: &Ctx, input: &Path) -> CmdResult {
    let (g, digest) = read_graph(input)?;
    let mut found = Vec::new();
    for entry in &ctx.catalog.entries {
        let ms = subgraph_match(&g, &entry.pattern, MatchOptions::default());
        found.push(json!({
            "pattern": entry.name,
            "matches": ms.len(),
            "first": ms.first().map(|m| m.map.clone()),
        }));
    }
    let fr = contains_forbidden(&g, &ctx.catalog);
    say(
        ctx,
        &format!(
            "{}: {} ({} catalog entries checked)",
            input.display(),
            if fr.admissible { "admissible" } else { "not admissible" },
            ctx.catalog.entries.len()
        ),
    );
    Ok((
        EXIT_OK,
        report(
            "patterns",
            vec![digest],
            json!({ "input": input.display().to_string(),
                    "catalog_digest": ctx.catalog.digest(),
                    "admissible": fr.admissible,
                    "max_degree": fr.max_degree,
                    "found": found }),
            vec![],
        ),
    ))
}

fn pick_config(g: &Graph, spec: &str) -> Result<Config646, (u8, String)> {
    if spec != "auto" {
        return Err((EXIT_PARSE, format!("unsupported --config {spec:?}; use auto")));
    }
    locate_config(g)
        .into_iter()
        .max_by_key(|c| c.hypothesis)
        .ok_or((EXIT_NOT_IN_CLASS, "no [6,4,6] configuration in this graph".into()))
}

fn cmd_extend(
    ctx: &Ctx,
    input: &Path,
    coloring: &Path,
    mode: ExtendMode,
    config: &str,
    trace_out: Option<&Path>,
) -> CmdResult {
    let (g, gdig) = read_graph(input)?;
    let (col, cdig) = read_coloring(coloring)?;
    let cfg = pick_config(&g, config)?;
    let out = match mode {
        ExtendMode::Edge => extend_edge_uv(&g, &col, &cfg),
        ExtendMode::Vertex => extend_vertex_u(&g, &col, &cfg),
    }
    .map_err(|e| (EXIT_NOT_IN_CLASS, e.to_string()))?;
    // every step must replay cleanly against the input
    let replayed = tcckit::extension::replay(&g, &col, &out.trace)
        .map_err(|e| (EXIT_PARSE, format!("internal: trace replay failed: {e}")))?;
    if replayed != out.coloring {
        return Err((EXIT_PARSE, "internal: replay disagrees with outcome".into()));
    }
    let jsonl = trace_to_jsonl(&out.trace);
    let mut artifacts = vec![];
    if let Some(p) = trace_out {
        std::fs::write(p, &jsonl).map_err(|e| (EXIT_PARSE, e.to_string()))?;
        artifacts.push(p.display().to_string());
    }
    say(
        ctx,
        &format!(
            "{}: {} steps via {:?}{}",
            input.display(),
            out.trace.len(),
            out.case_labels,
            if out.used_fallback { " (fallback)" } else { "" }
        ),
    );
    Ok((
        EXIT_OK,
        report(
            "extend",
            vec![gdig, cdig],
            json!({ "hypothesis": format!("{:?}", cfg.hypothesis),
                    "palette": PALETTE,
                    "steps": out.trace.len(),
                    "case_labels": out.case_labels,
                    "used_fallback": out.used_fallback,
                    "result": write_tcc(&out.coloring),
                    "trace_jsonl": jsonl }),
            artifacts,
        ),
    ))
}

fn cmd_export_dot(ctx: &Ctx, input: &Path, coloring: Option<&Path>) -> CmdResult {
    let (g, gdig) = read_graph(input)?;
    let mut digests = vec![gdig];
    let col = match coloring {
        Some(p) => {
            let (c, d) = read_coloring(p)?;
            digests.push(d);
            Some(c)
        }
        None => None,
    };
    let mut dot = String::from("graph g {\n");
    for v in g.vertices() {
        let color = col
            .as_ref()
            .and_then(|c| c.get(Element::Vertex(v)))
            .map(|c| format!(", color=\"{c}\""))
            .unwrap_or_default();
        dot.push_str(&format!(
            "  v{v} [label=\"{v} (d={}){}\"{color}];\n",
            g.degree(v),
            col.as_ref()
                .and_then(|c| c.get(Element::Vertex(v)))
                .map(|c| format!(" c{c}"))
                .unwrap_or_default()
        ));
    }
    for e in g.edges() {
        let color = col
            .as_ref()
            .and_then(|c| c.get(Element::Edge(*e)))
            .map(|c| format!(" [label=\"c{c}\", color=\"{c}\"]"))
            .unwrap_or_default();
        dot.push_str(&format!("  v{} -- v{}{color};\n", e.0, e.1));
    }
    dot.push_str("}\n");
    if !ctx.json {
        print!("{dot}");
    }
    Ok((
        EXIT_OK,
        report("export-dot", digests, json!({ "dot": dot }), vec![]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tcckit::patterns::builtin_catalog;

    #[test]
    fn bundled_catalog_matches_builtin() {
        assert_eq!(BUILTIN_CATALOG, builtin_catalog().to_patcat());
        let parsed = PatternCatalog::parse(BUILTIN_CATALOG).unwrap();
        assert_eq!(parsed.digest(), builtin_catalog().digest());
    }
}
