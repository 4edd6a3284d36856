use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use citrus_core::citrus::{bush_from_stem, detect_cycle_bush, detect_path_bush, search_entangled_bush, BushDecomposition};
use citrus_core::dichotomy::{classify_deletion, classify_h, classify_spec, Verdict};
use citrus_core::dispatch::{dispatch_solve, DispatchOptions, Method, SolveReport};
use citrus_core::graph::longest_path;
use citrus_core::hardness::{
    check_deletion_set, check_tw3_certificate, csp_to_sf, decode_assignment, parse_roles, roles_text,
    solve_csp_bruteforce, three_col_to_csp, CspInstance, HardInstance, DEFAULT_CSP_CAP,
};
use citrus_core::oracle::{solve_exact, EXACT_LIMIT};
use citrus_core::reductions::{remove_dominated, split_blocks, wedge_transform};
use citrus_core::tw2::is_tw_at_most_2;
use citrus_core::{Error, Graph, HSpec, TerminalSet};

#[derive(Parser)]
#[command(name = "citrus", version, about = "Steiner forest on lemon bushes and related graph classes")]
struct Cli {
    /// Print JSON instead of text lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance, choosing the solver automatically.
    Solve {
        graph: PathBuf,
        terms: PathBuf,
        /// auto, tw2, tangle, cycle, path, tangle-search or exact.
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, default_value_t = 5)]
        ell: usize,
        /// Largest stem for the entangled-bush detectors.
        #[arg(long, default_value_t = 13)]
        max_stem: usize,
        /// Comma-separated detector order for auto mode.
        #[arg(long)]
        order: Option<String>,
        /// Fail instead of falling back to the exponential solver.
        #[arg(long)]
        no_fallback: bool,
    },
    /// Report the structure the detectors find in a graph.
    Detect {
        graph: PathBuf,
        #[arg(long, default_value_t = 5)]
        ell: usize,
        #[arg(long, default_value_t = 13)]
        max_stem: usize,
    },
    /// Classify H-subgraph-free graphs; H is a spec such as `S2,3,5` or a graph file.
    ClassifyH { h: String },
    /// Classify graphs of c-deletion set number k.
    ClassifyDeletion { c: usize, k: usize },
    /// Generate a hard Steiner forest instance.
    GenHard {
        #[arg(long, value_enum)]
        from: Source,
        /// Graph file (3col) or CSP file (csp).
        input: PathBuf,
        /// Writes PREFIX.graph and PREFIX.terms.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the certificates of a generated instance.
    VerifyHard {
        graph: PathBuf,
        terms: PathBuf,
        /// Source CSP, compared against the instance optimum.
        #[arg(long)]
        csp: Option<PathBuf>,
        /// Largest vertex count on which the exact optimum is computed (at most 24).
        #[arg(long, default_value_t = EXACT_LIMIT)]
        exact_limit: usize,
    },
    /// Apply the safe reductions and report what they removed.
    Reduce {
        graph: PathBuf,
        terms: PathBuf,
        /// Writes the reduced instance to PREFIX.graph and PREFIX.terms.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    #[value(name = "3col")]
    ThreeCol,
    Csp,
}

/// Failures with their exit code.
enum Failure {
    Core(Error),
    Io(String),
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Infeasible(_)) => 2,
            Failure::Core(Error::Parse { .. }) | Failure::Usage(_) => 3,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(m) | Failure::Usage(m) | Failure::Check(m) => m.clone(),
        }
    }
}

type Outcome = Result<Vec<String>, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(graph: &Path, terms: &Path) -> Result<(Graph, TerminalSet), Failure> {
    let g = Graph::parse(&read(graph)?)?;
    let t = TerminalSet::parse(&read(terms)?)?;
    t.validate_for(&g)?;
    Ok((g, t))
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(format!(".{ext}"));
    PathBuf::from(s)
}

fn emit(json: bool, value: &impl Serialize, lines: Vec<String>) -> Outcome {
    if json {
        Ok(vec![serde_json::to_string_pretty(value).expect("serialisable")])
    } else {
        Ok(lines)
    }
}

fn parse_method(s: &str) -> Result<Method, Failure> {
    Method::parse(s).ok_or_else(|| Failure::Usage(format!("unknown method `{s}`")))
}

fn solve(json: bool, cmd: Command) -> Outcome {
    let Command::Solve {
        graph,
        terms,
        method,
        ell,
        max_stem,
        order,
        no_fallback,
    } = cmd
    else {
        unreachable!()
    };
    let (g, t) = load(&graph, &terms)?;
    let mut opts = if method == "auto" {
        DispatchOptions::default()
    } else {
        DispatchOptions::forced(parse_method(&method)?)
    };
    opts.ell = ell;
    opts.max_stem = max_stem;
    if let Some(order) = order {
        opts.order = order.split(',').map(|m| parse_method(m.trim())).collect::<Result<_, _>>()?;
    }
    if no_fallback {
        opts.allow_fallback = false;
    }
    let report = dispatch_solve(&g, &t, &opts)?;
    let mut lines = vec![format!("size {}", report.forest.size())];
    for e in &report.trace {
        lines.push(format!(
            "trace {} vertices={} edges={} pairs={} size={}{}",
            e.step,
            e.vertices,
            e.edges,
            e.pairs,
            e.size,
            if e.detail.is_empty() { String::new() } else { format!(" {}", e.detail) }
        ));
    }
    lines.extend(report.forest.edges().iter().map(|(u, v)| format!("edge {u} {v}")));
    lines.push(format!("time_ms {}", report.millis));
    #[derive(Serialize)]
    struct Out<'a> {
        size: usize,
        #[serde(flatten)]
        report: &'a SolveReport,
    }
    emit(
        json,
        &Out {
            size: report.forest.size(),
            report: &report,
        },
        lines,
    )
}

#[derive(Serialize)]
struct CitrusReport {
    ends: (usize, usize),
    direct_edge: bool,
    wedges: Vec<String>,
}

#[derive(Serialize)]
struct DetectReport {
    vertices: usize,
    edges: usize,
    tw_at_most_2: bool,
    kind: &'static str,
    stem: Vec<usize>,
    tangle: Vec<usize>,
    citruses: Vec<CitrusReport>,
}

/// The first bush found, in the order the dispatcher tries them.
fn find_bush(g: &Graph, ell: usize, max_stem: usize) -> Option<(&'static str, BushDecomposition, Vec<usize>)> {
    if g.n() <= 20 {
        let path = longest_path(g).vertices;
        if path.len() <= max_stem {
            if let Some(b) = bush_from_stem(g, &path, ell, true) {
                return Some(("entangled", b.clone(), b.stem));
            }
        }
    }
    if let Some(cb) = detect_cycle_bush(g, ell) {
        return Some(("cycle", cb.bush, cb.order));
    }
    if let Some(pb) = detect_path_bush(g, ell) {
        return Some(("path", pb.bush, pb.order));
    }
    search_entangled_bush(g, max_stem, ell, DispatchOptions::default().stem_budget)
        .map(|b| ("entangled", b.clone(), b.stem))
}

fn detect(json: bool, graph: &Path, ell: usize, max_stem: usize) -> Outcome {
    let g = Graph::parse(&read(graph)?)?;
    let found = find_bush(&g, ell, max_stem);
    let mut report = DetectReport {
        vertices: g.n(),
        edges: g.m(),
        tw_at_most_2: is_tw_at_most_2(&g),
        kind: "none",
        stem: Vec::new(),
        tangle: Vec::new(),
        citruses: Vec::new(),
    };
    if let Some((kind, bush, order)) = found {
        report.kind = kind;
        report.stem = order;
        report.tangle = bush.tangle.clone();
        report.citruses = bush
            .citruses
            .iter()
            .map(|c| CitrusReport {
                ends: c.ends,
                direct_edge: c.has_direct_edge,
                wedges: c.wedges.iter().map(|w| format!("{:?}", w.class).to_lowercase()).collect(),
            })
            .collect();
    }
    let join = |vs: &[usize]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    let mut lines = vec![
        format!("vertices {} edges {}", report.vertices, report.edges),
        format!("tw2 {}", report.tw_at_most_2),
        format!("bush {}", report.kind),
    ];
    if report.kind != "none" {
        lines.push(format!("stem {}", join(&report.stem)));
        lines.push(format!("tangle {}", join(&report.tangle)));
        for c in &report.citruses {
            lines.push(format!(
                "citrus {} {} direct={} wedges={}",
                c.ends.0,
                c.ends.1,
                c.direct_edge,
                if c.wedges.is_empty() { "-".to_string() } else { c.wedges.join(",") }
            ));
        }
    }
    emit(json, &report, lines)
}

fn verdict_out(json: bool, v: &Verdict) -> Outcome {
    emit(json, v, vec![v.to_string()])
}

fn classify_h_cmd(json: bool, h: &str) -> Outcome {
    let verdict = if Path::new(h).is_file() {
        classify_h(&Graph::parse(&read(Path::new(h))?)?)
    } else {
        classify_spec(&HSpec::parse(h)?)
    };
    match verdict {
        Ok(v) => verdict_out(json, &v),
        Err(Error::OutOfDichotomy(why)) => {
            #[derive(Serialize)]
            struct Out {
                answer: &'static str,
                witness: String,
            }
            let line = format!("OUT-OF-DICHOTOMY\t{why}");
            emit(
                json,
                &Out {
                    answer: "OUT-OF-DICHOTOMY",
                    witness: why,
                },
                vec![line],
            )
        }
        Err(e) => Err(e.into()),
    }
}

fn gen_hard(json: bool, from: Source, input: &Path, out: &Path) -> Outcome {
    let text = read(input)?;
    let csp = match from {
        Source::ThreeCol => three_col_to_csp(&Graph::parse(&text)?),
        Source::Csp => CspInstance::parse(&text)?,
    };
    let padded = csp.padded();
    let h = csp_to_sf(&padded)?;
    let graph_file = with_suffix(out, "graph");
    let terms_file = with_suffix(out, "terms");
    write(&graph_file, &format!("{}{}", roles_text(&h), h.graph.to_text()))?;
    write(&terms_file, &h.terminals.to_text())?;
    #[derive(Serialize)]
    struct Out {
        graph: PathBuf,
        terms: PathBuf,
        variables: usize,
        padding: usize,
        vertices: usize,
        edges: usize,
        pairs: usize,
        budget: usize,
    }
    let o = Out {
        graph: graph_file,
        terms: terms_file,
        variables: csp.n,
        padding: padded.n - csp.n,
        vertices: h.graph.n(),
        edges: h.graph.m(),
        pairs: h.terminals.len(),
        budget: h.budget,
    };
    let lines = vec![
        format!("graph {}", o.graph.display()),
        format!("terms {}", o.terms.display()),
        format!("variables {} padding {}", o.variables, o.padding),
        format!("vertices {} edges {} pairs {}", o.vertices, o.edges, o.pairs),
        format!("budget {}", o.budget),
    ];
    emit(json, &o, lines)
}

#[derive(Serialize)]
struct VerifyReport {
    deletion_set: bool,
    tw3_certificate: bool,
    optimum: Option<usize>,
    within_budget: Option<bool>,
    assignment: Option<Vec<u8>>,
    csp_satisfiable: Option<bool>,
    agrees: Option<bool>,
}

fn verify_hard(json: bool, graph: &Path, terms: &Path, csp: Option<&Path>, exact_limit: usize) -> Outcome {
    let text = read(graph)?;
    let (g, t) = load(graph, terms)?;
    let h: HardInstance = parse_roles(&text, g, t)?;
    let mut r = VerifyReport {
        deletion_set: check_deletion_set(&h.graph, &h.hubs, 2),
        tw3_certificate: check_tw3_certificate(&h),
        optimum: None,
        within_budget: None,
        assignment: None,
        csp_satisfiable: None,
        agrees: None,
    };
    if h.graph.n() <= exact_limit.min(EXACT_LIMIT) {
        match solve_exact(&h.graph, &h.terminals) {
            Ok(opt) => {
                r.optimum = Some(opt.size());
                r.within_budget = Some(opt.size() <= h.budget);
                r.assignment = decode_assignment(&h, opt.edges());
            }
            // a variable with all three values forbidden cuts its terminals apart
            Err(Error::Infeasible(_)) => r.within_budget = Some(false),
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(path) = csp {
        let source = CspInstance::parse(&read(path)?)?.padded();
        let cap = DEFAULT_CSP_CAP.max(source.n);
        let sat = solve_csp_bruteforce(&source, cap)?.is_some();
        r.csp_satisfiable = Some(sat);
        r.agrees = r.within_budget.map(|w| w == sat);
    }
    let show = |x: Option<String>| x.unwrap_or_else(|| "skipped".into());
    let lines = vec![
        format!("deletion-set {}", r.deletion_set),
        format!("tw3-certificate {}", r.tw3_certificate),
        format!("optimum {}", show(r.optimum.map(|x| x.to_string()))),
        format!("within-budget {}", show(r.within_budget.map(|x| x.to_string()))),
        format!(
            "assignment {}",
            show(r.assignment.as_ref().map(|a| a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
        ),
        format!("csp-satisfiable {}", show(r.csp_satisfiable.map(|x| x.to_string()))),
        format!("agrees {}", show(r.agrees.map(|x| x.to_string()))),
    ];
    let ok = r.deletion_set && r.tw3_certificate && r.agrees != Some(false);
    let out = emit(json, &r, lines)?;
    if ok {
        Ok(out)
    } else {
        for line in out {
            println!("{line}");
        }
        Err(Failure::Check("certificate check failed".into()))
    }
}

fn reduce(json: bool, graph: &Path, terms: &Path, out: Option<&Path>) -> Outcome {
    let (g, t) = load(graph, terms)?;
    let reduced = remove_dominated(&g, &t);
    let h = wedge_transform(&reduced.graph, &reduced.terminals);
    let blocks = if g.is_connected() && !t.is_empty() {
        Some(split_blocks(&h, &reduced.terminals)?.len())
    } else {
        None
    };
    #[derive(Serialize)]
    struct Out {
        vertices_before: usize,
        edges_before: usize,
        dominated_removed: usize,
        wedge_edges_removed: usize,
        vertices_after: usize,
        edges_after: usize,
        blocks: Option<usize>,
        origin: Vec<usize>,
    }
    let o = Out {
        vertices_before: g.n(),
        edges_before: g.m(),
        dominated_removed: g.n() - reduced.graph.n(),
        wedge_edges_removed: reduced.graph.m() - h.m(),
        vertices_after: h.n(),
        edges_after: h.m(),
        blocks,
        origin: reduced.origin.clone(),
    };
    if let Some(prefix) = out {
        write(&with_suffix(prefix, "graph"), &h.to_text())?;
        write(&with_suffix(prefix, "terms"), &reduced.terminals.to_text())?;
    }
    let lines = vec![
        format!("vertices {} -> {}", o.vertices_before, o.vertices_after),
        format!("edges {} -> {}", o.edges_before, o.edges_after),
        format!("dominated-removed {}", o.dominated_removed),
        format!("wedge-edges-removed {}", o.wedge_edges_removed),
        format!("blocks {}", o.blocks.map_or("-".into(), |b| b.to_string())),
        format!(
            "origin {}",
            o.origin.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        ),
    ];
    emit(json, &o, lines)
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        cmd @ Command::Solve { .. } => solve(json, cmd),
        Command::Detect { graph, ell, max_stem } => detect(json, &graph, ell, max_stem),
        Command::ClassifyH { h } => classify_h_cmd(json, &h),
        Command::ClassifyDeletion { c, k } => {
            if c == 0 {
                return Err(Failure::Usage("c must be at least 1".into()));
            }
            verdict_out(json, &classify_deletion(c, k))
        }
        Command::GenHard { from, input, out } => gen_hard(json, from, &input, &out),
        Command::VerifyHard {
            graph,
            terms,
            csp,
            exact_limit,
        } => verify_hard(json, &graph, &terms, csp.as_deref(), exact_limit),
        Command::Reduce { graph, terms, out } => reduce(json, &graph, &terms, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
