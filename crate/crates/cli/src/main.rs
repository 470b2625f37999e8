//! `bimoore`: build, search and certify bipartite graphs of diameter 3 near
//! the bipartite Moore bound.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bipartite_moore::caseanalysis::{nonexistence_case_audit, Verdict};
use bipartite_moore::fixtures::{DEGREE_11_WITNESSES, SMALL_WITNESSES};
use bipartite_moore::structure::{
    check_observations, check_observations_forced, classify_and_decompose, is_isomorphic, Status,
};
use bipartite_moore::{
    affine_equivalence, build_phi_spec, defect, max_m, max_m_upper_bound, moore_bound,
    search_offsets, two_step_residues, BipartiteGraph, Error, Extent, PhiSpec, Regularity,
    SearchMode, SearchTask,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "bimoore",
    version,
    about = "Bipartite graphs of diameter 3 near the Moore bound"
)]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bipartite Moore bound M^b(d,D), and the defect of an order if given.
    Bound {
        #[arg(value_parser = clap::value_parser!(u32).range(2..=64))]
        d: u32,
        #[arg(value_name = "D", value_parser = clap::value_parser!(u32).range(2..=16))]
        diameter: u32,
        #[arg(long)]
        order: Option<u128>,
    },
    /// Build Φ_m(A) and write it in adjacency-list format.
    Build {
        #[arg(long)]
        spec: PhiSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report order, regularity, diameter, girth and defect.
    Check {
        #[command(flatten)]
        input: GraphInput,
        /// Exit 1 unless the diameter equals this value.
        #[arg(long)]
        expect_diameter: Option<u32>,
    },
    /// Exhaustive offset search for diameter-3 Φ_m(A) of degree d.
    Search {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, group = "mode")]
        all: bool,
        #[arg(long, group = "mode")]
        first: bool,
        #[arg(long, group = "mode")]
        count: bool,
        #[command(flatten)]
        run: RunOpts,
        /// Offsets fixed in advance, e.g. `4,9`.
        #[arg(long, value_delimiter = ',')]
        prefix: Vec<usize>,
        /// Only offsets in [4, m-4].
        #[arg(long)]
        spacing: bool,
        /// Exit 1 if any solution is found.
        #[arg(long)]
        expect_none: bool,
    },
    /// Largest m in a range admitting a diameter-3 Φ_m(A) of degree d.
    MaxM {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Short cycles, decomposition and defect-4 observations of a graph.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        d: u32,
        /// Evaluate observations even when the defect is not 4.
        #[arg(long)]
        force: bool,
    },
    /// Isomorphism test. Arguments are files or `phi m: ...` specs.
    Iso {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Arithmetic audit of the case analysis for bipartite (d,3,-4)-graphs.
    Audit {
        #[arg(long, default_value_t = 7)]
        d: usize,
        /// Largest quotient of linked component orders (default d-3).
        #[arg(long, conflicts_with = "divisibility_only")]
        ratio_cap: Option<usize>,
        /// Link components on divisibility alone.
        #[arg(long)]
        divisibility_only: bool,
        #[arg(long, env = "BIMOORE_WORKERS")]
        workers: Option<usize>,
    },
    /// Verify the shipped witness graphs.
    VerifyKnown {
        /// Write each witness as an adjacency file into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Verify these degree-11 tuples instead of the shipped ones.
        #[arg(long)]
        spec: Vec<PhiSpec>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphInput {
    #[arg(long)]
    spec: Option<PhiSpec>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct RunOpts {
    #[arg(long, env = "BIMOORE_WORKERS")]
    workers: Option<usize>,
    /// Node budget per search.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Check(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<Output, Failure>;

/// What a command printed, and whether its checks held.
struct Output {
    text: String,
    json: Value,
    status: Result<(), Failure>,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            status: Ok(()),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn workers(w: Option<usize>) -> Result<usize, Failure> {
    match w {
        Some(0) => Err(Failure::Usage("workers must be at least 1".into())),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn read_graph(path: &Path) -> Result<BipartiteGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(BipartiteGraph::from_str_auto(&text)?)
}

fn graph_arg(arg: &str) -> Result<BipartiteGraph, Failure> {
    if arg.trim_start().starts_with("phi") {
        let spec: PhiSpec = arg.parse()?;
        Ok(build_phi_spec(&spec))
    } else {
        read_graph(Path::new(arg))
    }
}

fn extent(e: Extent) -> String {
    match e {
        Extent::Finite(n) => n.to_string(),
        Extent::Infinite => "infinite".into(),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GraphSummary {
    order: usize,
    n_left: usize,
    n_right: usize,
    edges: usize,
    regularity: Regularity,
    diameter: Extent,
    girth: Extent,
    defect: Option<bipartite_moore::DefectRecord>,
}

fn summarize(g: &BipartiteGraph) -> Result<GraphSummary, Failure> {
    let diameter = g.diameter()?;
    let regularity = g.regularity();
    let max_deg = match regularity {
        Regularity::Regular { degree } => degree,
        Regularity::Irregular { max_degree, .. } => max_degree,
    };
    // defect against the bound for the graph's own degree and diameter
    let defect = match diameter {
        Extent::Finite(dm) if (2..=64).contains(&max_deg) && (2..=16).contains(&dm) => {
            defect(max_deg as u32, dm, g.order() as u128).ok()
        }
        _ => None,
    };
    Ok(GraphSummary {
        order: g.order(),
        n_left: g.n_left(),
        n_right: g.n_right(),
        edges: g.edge_count(),
        regularity,
        diameter,
        girth: g.girth(),
        defect,
    })
}

fn summary_text(s: &GraphSummary) -> String {
    let reg = match s.regularity {
        Regularity::Regular { degree } => format!("regular, degree {degree}"),
        Regularity::Irregular {
            min_degree,
            max_degree,
        } => format!("irregular, degrees {min_degree}..{max_degree}"),
    };
    let mut t = format!(
        "order {} ({} + {}), {} edges, {reg}\ndiameter {}, girth {}\n",
        s.order,
        s.n_left,
        s.n_right,
        s.edges,
        extent(s.diameter),
        extent(s.girth)
    );
    if let Some(r) = &s.defect {
        let _ = writeln!(
            t,
            "M^b({},{})={} defect={}",
            r.d, r.diameter, r.moore_bound, r.defect
        );
    }
    t
}

fn run_bound(d: u32, dm: u32, order: Option<u128>) -> Outcome {
    let mb = moore_bound(d, dm)?;
    let mut text = format!("d={d} D={dm} M^b={mb}\n");
    let mut j = json!({ "d": d, "D": dm, "mooreBound": mb });
    if let Some(n) = order {
        let r = defect(d, dm, n)?;
        let _ = writeln!(text, "order={} defect={}", r.order, r.defect);
        j = to_json(&r);
    }
    if dm == 3 && d >= 4 {
        let m = max_m_upper_bound(d)?;
        let _ = writeln!(text, "m(d) <= {m}");
        j["maxMUpperBound"] = json!(m);
    }
    Ok(Output::ok(text, j))
}

fn run_build(spec: &PhiSpec, out: Option<&Path>) -> Outcome {
    let g = build_phi_spec(spec);
    let adj = g.to_adjacency_string();
    let j = json!({
        "spec": spec,
        "order": g.order(),
        "degree": spec.degree(),
        "edges": g.edge_count(),
        "out": out.map(|p| p.display().to_string()),
    });
    let text = match out {
        Some(p) => {
            std::fs::write(p, &adj).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            format!(
                "wrote {} ({} vertices) to {}\n",
                spec,
                g.order(),
                p.display()
            )
        }
        None => adj,
    };
    Ok(Output::ok(text, j))
}

fn run_check(input: &GraphInput, expect: Option<u32>) -> Outcome {
    let (g, spec) = match (&input.spec, &input.input) {
        (Some(s), _) => (build_phi_spec(s), Some(s)),
        (None, Some(p)) => (read_graph(p)?, None),
        (None, None) => unreachable!("clap requires one input"),
    };
    let s = summarize(&g)?;
    let mut text = summary_text(&s);
    let mut j = to_json(&s);
    let mut status = Ok(());
    if let Some(spec) = spec {
        let cov = two_step_residues(spec);
        let bfs_ok = matches!(s.diameter, Extent::Finite(n) if n <= 3);
        let _ = writeln!(
            text,
            "two-step residues: {} of {} covered{}",
            cov.covered.count(),
            spec.m(),
            if cov.full {
                ""
            } else {
                ", missing listed in JSON"
            }
        );
        j["spec"] = json!(spec);
        j["residues"] = to_json(&cov);
        if cov.full != bfs_ok {
            status = Err(Failure::Check("residue test disagrees with BFS".into()));
        }
    }
    if let Some(want) = expect {
        if s.diameter != Extent::Finite(want) {
            status = Err(Failure::Check(format!(
                "diameter {} != expected {want}",
                extent(s.diameter)
            )));
        }
    }
    Ok(Output {
        text,
        json: j,
        status,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_search(
    d: usize,
    m: usize,
    mode: SearchMode,
    run: &RunOpts,
    prefix: Vec<usize>,
    spacing: bool,
    expect_none: bool,
) -> Outcome {
    let mut task = SearchTask::new(d, m, mode)
        .with_prefix(prefix)
        .with_saturation_spacing(spacing);
    task.node_budget = run.budget;
    let r = search_offsets(&task, workers(run.workers)?)?;
    let mut text = format!(
        "{} solution{}, {}\n",
        r.solution_count,
        if r.solution_count == 1 { "" } else { "s" },
        if r.exhausted {
            "exhausted"
        } else {
            "not exhausted"
        }
    );
    for s in &r.solutions {
        let _ = writeln!(text, "{s}");
    }
    let _ = writeln!(
        text,
        "nodes {} pruned(bound) {} pruned(symmetry) {} shards {}/{} elapsed {:.3}s",
        r.counters.nodes_visited,
        r.counters.pruned_by_bound,
        r.counters.pruned_by_symmetry,
        r.shards_completed,
        r.shards_total,
        r.elapsed.as_secs_f64()
    );
    let stopped_early = mode == SearchMode::FindFirst && r.solution_count > 0;
    let status = if expect_none && r.solution_count > 0 {
        Err(Failure::Check(format!(
            "{} solutions found",
            r.solution_count
        )))
    } else if !r.exhausted && !stopped_early {
        Err(Failure::Budget(
            "node budget exhausted before the search finished".into(),
        ))
    } else {
        Ok(())
    };
    Ok(Output {
        text,
        json: to_json(&r),
        status,
    })
}

fn run_max_m(d: usize, from: Option<usize>, to: Option<usize>, run: &RunOpts) -> Outcome {
    let hi = match to {
        Some(h) => h,
        None => max_m_upper_bound(d as u32)?,
    };
    let lo = from.unwrap_or(5);
    let r = max_m(d, lo, hi, run.budget, workers(run.workers)?)?;
    let mut text = String::new();
    match r.best_m {
        Some(m) => {
            let _ = writeln!(text, "d={d}: best m in [{lo}, {hi}] is {m}");
            for w in &r.witnesses {
                let _ = writeln!(text, "witness {w}");
            }
        }
        None => {
            let _ = writeln!(text, "d={d}: no solution found in [{lo}, {hi}]");
        }
    }
    let settled = r.best_m.is_some() || r.settled_down_to == Some(lo);
    if let Some(s) = r.settled_down_to {
        let _ = writeln!(text, "settled m in [{s}, {hi}]");
    }
    let status = if settled {
        Ok(())
    } else {
        Err(Failure::Budget(
            "budget ran out before the range was settled".into(),
        ))
    };
    Ok(Output {
        text,
        json: to_json(&r),
        status,
    })
}

fn names<T: std::fmt::Display>(vs: &[T]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_analyze(path: &Path, d: u32, force: bool) -> Outcome {
    let g = read_graph(path)?;
    let s = summarize(&g)?;
    let dec = classify_and_decompose(&g);
    let obs = if force {
        check_observations_forced(&g, &dec, d)
    } else {
        check_observations(&g, &dec, d)
    };
    let mut text = summary_text(&s);
    let _ = writeln!(
        text,
        "4-cycles {}: S2 {}, S1 {}, S0 {}, unclassified {}",
        dec.cycles.len(),
        dec.s2.len(),
        dec.s1.len(),
        dec.s0.len(),
        dec.unclassified_cycles.len()
    );
    let _ = writeln!(
        text,
        "Γ_2: {} Θ_2 components; Γ_1: {} Φ components{}; Γ_0: {} vertices; residue {} vertices",
        dec.gamma2.len(),
        dec.gamma1.len(),
        if dec.gamma1.is_empty() {
            String::new()
        } else {
            format!(
                " (m' = {})",
                names(&dec.gamma1.iter().map(|c| c.m).collect::<Vec<_>>())
            )
        },
        dec.gamma0.len(),
        dec.residue.len()
    );
    for u in &dec.unclassified_components {
        let _ = writeln!(
            text,
            "unclassified component of {} vertices: {}",
            u.vertices.len(),
            u.reason
        );
    }
    if !obs.applicable {
        let _ = writeln!(text, "observations not applicable: {}", obs.reason);
    }
    for o in &obs.observations {
        let tag = match o.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::NotApplicable => "n/a ",
        };
        let _ = write!(text, "  [{tag}] {}: {}", o.name, o.detail);
        if !o.witness.is_empty() {
            let _ = write!(text, " (witness {})", names(&o.witness));
        }
        text.push('\n');
    }
    let failed: Vec<&str> = obs.failures().map(|o| o.name).collect();
    let status = if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "observations failed: {}",
            failed.join(", ")
        )))
    };
    let j = json!({ "graph": s, "decomposition": dec, "observations": obs });
    Ok(Output {
        text,
        json: j,
        status,
    })
}

fn run_iso(a: &str, b: &str) -> Outcome {
    let (ga, gb) = (graph_arg(a)?, graph_arg(b)?);
    let r = is_isomorphic(&ga, &gb)?;
    let text = format!(
        "{} (search nodes {})\n",
        if r.isomorphic {
            "isomorphic"
        } else {
            "not isomorphic"
        },
        r.search_nodes
    );
    Ok(Output::ok(text, to_json(&r)))
}

fn run_audit(d: usize, cap: Option<usize>, divisibility_only: bool, w: Option<usize>) -> Outcome {
    let cap = if divisibility_only {
        None
    } else {
        Some(cap.unwrap_or(d.saturating_sub(3)))
    };
    let r = nonexistence_case_audit(d, cap, workers(w)?)?;
    let mut text = String::new();
    for e in &r.entries {
        let _ = writeln!(
            text,
            "{:<22} {:<13} {}",
            e.name,
            format!("{:?}", e.verdict),
            e.claim
        );
        let _ = writeln!(text, "{:<22} {}", "", e.citation);
        for (k, v) in &e.values {
            let _ = writeln!(text, "{:<24}{k} = {v}", "");
        }
    }
    let _ = writeln!(text, "overall: {:?}: {}", r.overall, r.conclusion);
    let status = match r.overall {
        Verdict::Pass => Ok(()),
        _ => Err(Failure::Check(r.conclusion.clone())),
    };
    Ok(Output {
        text,
        json: to_json(&r),
        status,
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct WitnessCheck {
    spec: PhiSpec,
    graph: GraphSummary,
    checks: Vec<(String, bool)>,
    exported: Option<String>,
}

fn run_verify_known(export: Option<&Path>, custom: &[PhiSpec]) -> Outcome {
    let parse = |s: &&str| s.parse::<PhiSpec>().expect("fixture parses");
    // (spec, expected degree, expected defect)
    let mut targets: Vec<(PhiSpec, usize, u128)> = Vec::new();
    if custom.is_empty() {
        targets.extend(DEGREE_11_WITNESSES.iter().map(|s| (parse(s), 11, 32)));
        targets.extend(SMALL_WITNESSES.iter().map(|s| {
            let p = parse(s);
            let d = p.degree();
            (p, d, 4)
        }));
    } else {
        targets.extend(custom.iter().map(|s| (s.clone(), 11, 32)));
    }
    if let Some(dir) = export {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    }

    let mut text = String::new();
    let mut results = Vec::new();
    let mut failed = Vec::new();
    for (spec, d, eps) in &targets {
        let g = build_phi_spec(spec);
        let s = summarize(&g)?;
        let mb = moore_bound(*d as u32, 3)?;
        let checks = vec![
            (format!("order {}", mb - eps), g.order() as u128 + eps == mb),
            (
                format!("{d}-regular"),
                s.regularity == Regularity::Regular { degree: *d },
            ),
            ("diameter 3".to_string(), s.diameter == Extent::Finite(3)),
            (
                format!("defect {eps}"),
                s.defect.as_ref().is_some_and(|r| r.defect == *eps),
            ),
            ("girth 4".to_string(), s.girth == Extent::Finite(4)),
        ];
        let bad: Vec<&str> = checks
            .iter()
            .filter(|c| !c.1)
            .map(|c| c.0.as_str())
            .collect();
        let exported = match export {
            Some(dir) => {
                let name = format!(
                    "phi{}_{}.adj",
                    spec.m(),
                    spec.offsets()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("_")
                );
                let path = dir.join(name);
                std::fs::write(&path, g.to_adjacency_string())
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                Some(path.display().to_string())
            }
            None => None,
        };
        if bad.is_empty() {
            let _ = writeln!(text, "ok    {spec}");
        } else {
            let _ = writeln!(text, "FAIL  {spec}: {}", bad.join(", "));
            failed.push(format!("{spec}: {}", bad.join(", ")));
        }
        results.push(WitnessCheck {
            spec: spec.clone(),
            graph: s,
            checks,
            exported,
        });
    }

    // pairwise non-isomorphism among the degree-11 graphs
    let big: Vec<&PhiSpec> = targets.iter().filter(|t| t.1 == 11).map(|t| &t.0).collect();
    let mut pairs = Vec::new();
    for i in 0..big.len() {
        for k in i + 1..big.len() {
            let r = is_isomorphic(&build_phi_spec(big[i]), &build_phi_spec(big[k]))?;
            let affine = affine_equivalence(big[i], big[k]);
            let how = match affine {
                Some((u, c)) => format!("isomorphic via x_i -> x_{{{u}i}}, y_j -> y_{{{u}j+{c}}}"),
                None if r.isomorphic => "isomorphic".to_string(),
                None => "not isomorphic".to_string(),
            };
            let _ = writeln!(
                text,
                "{}  {} vs {}: {how}",
                if r.isomorphic { "FAIL" } else { "ok  " },
                big[i],
                big[k],
            );
            if r.isomorphic {
                failed.push(format!("{} and {} are isomorphic", big[i], big[k]));
            }
            pairs.push(json!({
                "a": big[i],
                "b": big[k],
                "isomorphic": r.isomorphic,
                "affineMap": affine.map(|(u, c)| json!({ "u": u, "c": c })),
            }));
        }
    }
    let status = if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join("; ")))
    };
    let j = json!({ "witnesses": results, "pairs": pairs, "verified": failed.is_empty() });
    Ok(Output {
        text,
        json: j,
        status,
    })
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Bound { d, diameter, order } => run_bound(d, diameter, order),
        Command::Build { spec, out } => run_build(&spec, out.as_deref()),
        Command::Check {
            input,
            expect_diameter,
        } => run_check(&input, expect_diameter),
        Command::Search {
            d,
            m,
            all: _,
            first,
            count,
            run,
            prefix,
            spacing,
            expect_none,
        } => {
            let mode = if first {
                SearchMode::FindFirst
            } else if count {
                SearchMode::CountOnly
            } else {
                SearchMode::FindAll
            };
            run_search(d, m, mode, &run, prefix, spacing, expect_none)
        }
        Command::MaxM { d, from, to, run } => run_max_m(d, from, to, &run),
        Command::Analyze { input, d, force } => run_analyze(&input, d, force),
        Command::Iso { a, b } => run_iso(&a, &b),
        Command::Audit {
            d,
            ratio_cap,
            divisibility_only,
            workers,
        } => run_audit(d, ratio_cap, divisibility_only, workers),
        Command::VerifyKnown { export, spec } => run_verify_known(export.as_deref(), &spec),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Bound { .. } => "bound",
        Command::Build { .. } => "build",
        Command::Check { .. } => "check",
        Command::Search { .. } => "search",
        Command::MaxM { .. } => "max-m",
        Command::Analyze { .. } => "analyze",
        Command::Iso { .. } => "iso",
        Command::Audit { .. } => "audit",
        Command::VerifyKnown { .. } => "verify-known",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let (out, status) = match dispatch(cli.command) {
        Ok(o) => {
            let Output { text, json, status } = o;
            (Some((text, json)), status)
        }
        Err(f) => (None, Err(f)),
    };
    if let Some((text, body)) = out {
        if cli.json {
            let doc = json!({ "schemaVersion": SCHEMA_VERSION, "command": name, "result": body });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("json value prints")
            );
        } else {
            print!("{text}");
        }
    }
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget: {msg}");
            ExitCode::from(3)
        }
    }
}
