use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use homrecol::format::{
    parse_graph_with_warnings, parse_instance, parse_path, serialize_graph, serialize_instance,
    serialize_path, InstanceFile,
};
use homrecol::harness::{Campaign, Mode};
use homrecol::hom::check_path;
use homrecol::oracle::{export_col_graph, reachable, DEFAULT_EXPORT_CAP, DEFAULT_STATE_BUDGET};
use homrecol::reductions::{
    self, build_clique_incidence, build_edge_incidence, lift_hom, transfer_path_backward, Method,
};
use homrecol::structure::{dismantle, is_stiff};
use homrecol::{Graph, Instance, OracleError, RecoloringPath};

const EXIT_NO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "homrecol",
    version,
    about = "Recoloring of graph homomorphisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print structural flags and the maximal cliques of a graph.
    Props { graph: PathBuf },
    /// Decide whether beta is reachable from alpha in Col(g, h).
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum)]
        via: Option<Via>,
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
        /// Write the path here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce an instance and write the reduced instance plus a mapping file.
    Reduce {
        instance: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Defaults to `<out>.map` when `--out` is given.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Replay a path file from alpha and check that it ends at beta.
    Verify { instance: PathBuf, path: PathBuf },
    /// Fold a graph down to its stiff core.
    Dismantle {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an oracle-equivalence campaign.
    OracleCompare {
        #[arg(long)]
        campaign: Campaign,
        #[arg(long)]
        max_g: usize,
        #[arg(long)]
        max_h: usize,
        /// Switches to seeded random generation.
        #[arg(long, requires = "count")]
        seed: Option<u64>,
        #[arg(long, requires = "seed")]
        count: Option<usize>,
        #[arg(long)]
        pair_limit: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Write Col(g, h) as a graph file, or as DOT with `--dot`.
    ExportColgraph {
        instance: PathBuf,
        #[arg(long)]
        dot: bool,
        #[arg(long, default_value_t = DEFAULT_EXPORT_CAP)]
        cap: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    CliqueIncidence,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let (g, warnings) = parse_graph_with_warnings(&read(path)?)
        .map_err(|e| Failure::input(format!("{}:{}", path.display(), e)))?;
    for w in warnings {
        eprintln!(
            "warning: {}: line {}: {}",
            path.display(),
            w.line,
            w.message
        );
    }
    Ok(g)
}

fn load_instance(path: &Path) -> Result<(InstanceFile, Instance), Failure> {
    let file = parse_instance(&read(path)?)
        .map_err(|e| Failure::input(format!("{}:{}", path.display(), e)))?;
    for w in &file.warnings {
        eprintln!(
            "warning: {}: line {}: {}",
            path.display(),
            w.line,
            w.message
        );
    }
    let inst = Instance::new(
        file.g.clone(),
        file.h.clone(),
        file.alpha.clone(),
        file.beta.clone(),
    )
    .map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))?;
    Ok((file, inst))
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::BudgetExceeded { .. } => Failure {
            code: EXIT_BUDGET,
            message: e.to_string(),
        },
        other => Failure::input(other.to_string()),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn props(path: &Path) -> Outcome {
    let g = load_graph(path)?;
    println!("graph {}", g.name());
    println!("vertices {}", g.n());
    println!("edges {}", g.edge_count());
    println!("reflexive {}", yes_no(g.is_reflexive()));
    println!("irreflexive {}", yes_no(g.is_irreflexive()));
    println!("bipartite {}", yes_no(g.is_bipartite()));
    println!("connected {}", yes_no(g.is_connected()));
    println!("square-free {}", yes_no(g.is_square_free()));
    println!("induced-diamond-free {}", yes_no(!g.has_induced_diamond()));
    println!("stiff {}", yes_no(is_stiff(&g)));
    let cliques: Vec<String> = g
        .maximal_cliques()
        .iter()
        .map(|c| {
            format!(
                "{{{}}}",
                c.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect();
    println!("max-cliques {}", cliques.join(" "));
    Ok(0)
}

fn emit_path(path: &RecoloringPath, out: Option<&Path>) -> Result<(), Failure> {
    let text = serialize_path(path);
    match out {
        Some(p) => write(p, &text),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn solve(path: &Path, via: Option<Via>, budget: usize, out: Option<&Path>) -> Outcome {
    let (_, inst) = load_instance(path)?;
    let (found, states) = match via {
        None => {
            let r = reachable(&inst, budget).map_err(oracle_failure)?;
            (r.path, r.states_visited)
        }
        Some(Via::CliqueIncidence) => {
            let ei = build_edge_incidence(&inst.g)
                .map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))?;
            let ci = build_clique_incidence(&inst.h, true)
                .map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))?;
            let lift = |a| lift_hom(a, &ei, &ci).expect("endpoints were validated");
            let reduced = Instance {
                alpha: lift(&inst.alpha),
                beta: lift(&inst.beta),
                g: ei.incidence.clone(),
                h: ci.incidence.clone(),
            };
            let r = reachable(&reduced, budget).map_err(oracle_failure)?;
            let back = match r.path {
                Some(p) => Some(transfer_path_backward(&p, &ei, &ci).map_err(|e| Failure {
                    code: EXIT_INPUT,
                    message: format!("transferring the path back failed: {}", e),
                })?),
                None => None,
            };
            (back, r.states_visited)
        }
    };
    match found {
        Some(p) => {
            let p = p.normalize();
            println!("REACHABLE");
            println!("states {}", states);
            println!("length {}", p.len());
            emit_path(&p, out)?;
            Ok(0)
        }
        None => {
            println!("UNREACHABLE");
            println!("states {}", states);
            Ok(EXIT_NO)
        }
    }
}

fn reduce(path: &Path, method: Method, out: Option<&Path>, mapping: Option<&Path>) -> Outcome {
    let (_, inst) = load_instance(path)?;
    let r = reductions::reduce(&inst, method)
        .map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))?;
    let text = serialize_instance(
        &r.instance.g,
        &r.instance.h,
        &r.instance.alpha,
        &r.instance.beta,
    );
    let default_map = out.map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(".map");
        PathBuf::from(s)
    });
    match out {
        Some(p) => write(p, &text)?,
        None => print!("{}", text),
    }
    if let Some(m) = mapping.map(Path::to_path_buf).or(default_map) {
        write(&m, &r.mapping)?;
    }
    Ok(0)
}

fn verify(instance: &Path, path_file: &Path) -> Outcome {
    let (file, _) = load_instance(instance)?;
    let path = parse_path(&read(path_file)?, file.alpha.clone())
        .map_err(|e| Failure::input(format!("{}:{}", path_file.display(), e)))?;
    match check_path(&file.g, &file.h, &path, &file.beta) {
        Ok(()) => {
            println!("VALID {} steps", path.len());
            Ok(0)
        }
        Err(e) => {
            println!("INVALID {}", e);
            Ok(EXIT_NO)
        }
    }
}

fn dismantle_cmd(path: &Path, out: Option<&Path>) -> Outcome {
    let g = load_graph(path)?;
    let seq = dismantle(&g);
    for f in &seq.folds {
        println!("fold {} -> {}", f.folded, f.into);
    }
    let core = seq.core();
    let kept: Vec<String> = seq.core_vertices().iter().map(|v| v.to_string()).collect();
    println!("core {} vertices: {}", core.n(), kept.join(" "));
    if let Some(p) = out {
        write(p, &serialize_graph(&core))?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn oracle_compare(
    campaign: Campaign,
    max_g: usize,
    max_h: usize,
    seed: Option<u64>,
    count: Option<usize>,
    pair_limit: Option<usize>,
    out_dir: Option<&Path>,
) -> Outcome {
    let mut spec = campaign.default_spec(max_g, max_h);
    if let (Some(seed), Some(count)) = (seed, count) {
        spec = spec.mode(Mode::Random { seed, count });
    }
    if let Some(limit) = pair_limit {
        spec.pair_limit = limit;
    }
    let report = campaign
        .run(&spec)
        .map_err(|e| Failure::input(e.to_string()))?;
    print!("{}", report.render_timed());
    if let Some(dir) = out_dir {
        report
            .write_counterexamples(dir)
            .map_err(|e| Failure::input(format!("{}: {}", dir.display(), e)))?;
    }
    Ok(if report.mismatches.is_empty() {
        0
    } else {
        EXIT_NO
    })
}

fn export_colgraph(path: &Path, dot: bool, cap: u64) -> Outcome {
    let (file, _) = load_instance(path)?;
    let (col, _) = export_col_graph(&file.g, &file.h, cap).map_err(oracle_failure)?;
    if dot {
        print!("{}", col.to_dot(false));
    } else {
        print!("{}", serialize_graph(&col));
    }
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Props { graph } => props(&graph),
        Command::Solve {
            instance,
            via,
            budget,
            out,
        } => solve(&instance, via, budget, out.as_deref()),
        Command::Reduce {
            instance,
            method,
            out,
            mapping,
        } => reduce(&instance, method, out.as_deref(), mapping.as_deref()),
        Command::Verify { instance, path } => verify(&instance, &path),
        Command::Dismantle { graph, out } => dismantle_cmd(&graph, out.as_deref()),
        Command::OracleCompare {
            campaign,
            max_g,
            max_h,
            seed,
            count,
            pair_limit,
            out_dir,
        } => oracle_compare(
            campaign,
            max_g,
            max_h,
            seed,
            count,
            pair_limit,
            out_dir.as_deref(),
        ),
        Command::ExportColgraph { instance, dot, cap } => export_colgraph(&instance, dot, cap),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
