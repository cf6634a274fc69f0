mod dot;
mod error;
mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lcadag::holju::{deconstruct, random_global_lca, replay, ConstructionTrace, ExtendMode, GenParams};
use lcadag::lca::Route;
use lcadag::level1::{random_level1, Level1Kind};
use lcadag::setsys::{ancestors, clusters, descendants, intermediaries, SetSystem};
use lcadag::text::{parse_edge_list, write_edge_list};
use lcadag::transform::{hasse, hasse_with_labels, lop, lxt, sf, LopPolicy};
use lcadag::Dag;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{evaluate, Predicate};

/// Size caps for the exhaustive searches.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub max_vertices: usize,
    pub max_subsets: usize,
}

impl Caps {
    /// Defaults, or `LCADAG_MAX_N=n`: `n` vertices and `2^n` subsets.
    fn from_env() -> Result<Caps, CliError> {
        match std::env::var("LCADAG_MAX_N") {
            Ok(raw) => {
                let n: usize = raw
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Input(format!("LCADAG_MAX_N must be a number, got {raw:?}")))?;
                Ok(Caps { max_vertices: n, max_subsets: 1usize << n.min(40) })
            }
            Err(_) => Ok(Caps {
                max_vertices: lcadag::minors::DEFAULT_MAX_VERTICES,
                max_subsets: lcadag::setsys::DEFAULT_MAX_SUBSETS,
            }),
        }
    }
}

#[derive(Parser)]
#[command(name = "lcadag", version, about = "Least common ancestors in directed acyclic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a predicate; exit 0 if it holds, 1 if it fails.
    Check {
        which: Predicate,
        /// Graph file (edge list or DOT); stdin when absent or `-`.
        input: Option<PathBuf>,
        /// Recognition route for global-lca; all routes by default.
        #[arg(long, value_parser = parse_route)]
        route: Option<RouteArg>,
        #[arg(long)]
        json: bool,
    },
    /// Apply a transformation and print the result.
    Transform {
        which: TransformKind,
        input: Option<PathBuf>,
        /// Emit DOT instead of an edge list.
        #[arg(long)]
        dot: bool,
    },
    /// Print a set system as JSON, optionally with predicate verdicts.
    Systems {
        which: SystemKind,
        input: Option<PathBuf>,
        #[arg(long)]
        closed: bool,
        #[arg(long)]
        pre_binary: bool,
        #[arg(long, value_name = "K")]
        pre_k: Option<usize>,
    },
    /// Generate a random graph.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Rebuild a graph from a construction trace, checking rule (O*) at each step.
    Replay {
        trace: Option<PathBuf>,
        /// Skip the (O*) checks.
        #[arg(long)]
        unchecked: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Print a construction trace for a graph with the global lca-property.
    Deconstruct { input: Option<PathBuf> },
    /// Check a predicate on many graph files; one line per file, in input order.
    Corpus {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "global-lca")]
        which: Predicate,
        /// Worker threads; 0 picks the number of CPUs.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// A global lca-network grown by (O*) leaf attachments.
    Holju {
        n: usize,
        seed: u64,
        #[arg(long, default_value_t = GenParams::default().max_parents)]
        max_parents: usize,
        /// Also write the construction trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        dot: bool,
    },
    /// A level-1 network.
    Level1 {
        n: usize,
        seed: u64,
        /// Restrict to galled trees.
        #[arg(long)]
        galled: bool,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    Sf,
    Lxt,
    Lop,
    Rev,
    HasseClusters,
    HasseDescendants,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemKind {
    Clusters,
    Descendants,
    Ancestors,
    Intermediaries,
}

#[derive(Clone, Copy)]
enum RouteArg {
    All,
    One(Route),
}

fn parse_route(s: &str) -> Result<RouteArg, String> {
    if s == "all" {
        return Ok(RouteArg::All);
    }
    Route::from_name(s).map(RouteArg::One).ok_or_else(|| {
        let names: Vec<&str> = Route::ALL.iter().map(|r| r.name()).collect();
        format!("unknown route {s:?}; expected all, {}", names.join(", "))
    })
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn parse_graph(text: &str) -> Result<Dag, CliError> {
    if dot::looks_like_dot(text) {
        dot::parse_dot(text)
    } else {
        Ok(parse_edge_list(text)?)
    }
}

fn read_graph(path: Option<&Path>) -> Result<Dag, CliError> {
    parse_graph(&read_input(path)?)
}

fn render(g: &Dag, as_dot: bool) -> String {
    if as_dot {
        dot::write_dot(g)
    } else {
        write_edge_list(g)
    }
}

fn system_json(s: &SetSystem) -> Value {
    json!(s.sorted_labels())
}

fn systems(
    g: &Dag,
    which: SystemKind,
    closed: bool,
    pre_binary: bool,
    pre_k: Option<usize>,
    caps: &Caps,
) -> Result<Value, CliError> {
    let s = match which {
        SystemKind::Clusters => clusters(g),
        SystemKind::Descendants => descendants(g),
        SystemKind::Ancestors => ancestors(g),
        SystemKind::Intermediaries => intermediaries(g),
    };
    if !closed && !pre_binary && pre_k.is_none() {
        return Ok(system_json(&s));
    }
    let mut out = serde_json::Map::new();
    out.insert("family".into(), system_json(&s));
    if closed {
        let witness = s.closed_violation().map(|(i, j)| {
            let (a, b) = (&s.members()[i], &s.members()[j]);
            json!([s.labels_of(a), s.labels_of(b), s.labels_of(&a.intersection(b))])
        });
        out.insert("closed".into(), json!({ "holds": witness.is_none(), "witness": witness }));
    }
    if pre_binary {
        let witness = s.pre_binary_violation().map(|v| s.labels_of(&v));
        out.insert("pre_binary".into(), json!({ "holds": witness.is_none(), "witness": witness }));
    }
    if let Some(k) = pre_k {
        let witness = s.pre_k_ary_violation(k, caps.max_subsets)?.map(|v| s.labels_of(&v));
        out.insert("pre_k_ary".into(), json!({ "k": k, "holds": witness.is_none(), "witness": witness }));
    }
    Ok(Value::Object(out))
}

fn transform(g: &Dag, which: TransformKind) -> Result<Dag, CliError> {
    Ok(match which {
        TransformKind::Sf => sf(g),
        TransformKind::Lxt => lxt(g)?,
        TransformKind::Lop => lop(g, LopPolicy::default())?,
        TransformKind::Rev => g.reverse(),
        TransformKind::HasseClusters => hasse(&clusters(g)),
        TransformKind::HasseDescendants => {
            // Each descendant set is named after the vertex it belongs to.
            let d = descendants(g);
            let mut labels = vec![String::new(); d.len()];
            for v in g.vertices() {
                labels[d.witness(v).expect("per-vertex system")] = g.label(v).to_string();
            }
            hasse_with_labels(&d, labels)?
        }
    })
}

/// Runs one corpus entry; returns its exit code and output line.
fn corpus_entry(path: &Path, which: Predicate, caps: &Caps, as_json: bool) -> (u8, String) {
    let result = read_graph(Some(path)).and_then(|g| evaluate(&g, which, None, caps));
    let name = path.display().to_string();
    match result {
        Ok(r) if as_json => {
            let mut v = r.to_json();
            v["input"] = json!(name);
            (r.exit_code(), v.to_string())
        }
        Ok(r) => (r.exit_code(), format!("{name}\t{}", if r.holds { "holds" } else { "fails" })),
        Err(e) if as_json => (e.code(), json!({ "input": name, "error": e.to_string() }).to_string()),
        Err(e) => (e.code(), format!("{name}\terror: {e}")),
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let caps = Caps::from_env()?;
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Check { which, input, route, json } => {
            let g = read_graph(input.as_deref())?;
            let route = match route {
                Some(RouteArg::One(r)) => Some(r),
                _ => None,
            };
            if route.is_some() && which != Predicate::GlobalLca {
                return Err(CliError::Input("--route only applies to global-lca".into()));
            }
            let report = evaluate(&g, which, route, &caps)?;
            if json {
                writeln!(stdout, "{}", report.to_json())?;
            } else {
                writeln!(stdout, "{}", report.to_text())?;
            }
            Ok(report.exit_code())
        }
        Command::Transform { which, input, dot } => {
            let g = read_graph(input.as_deref())?;
            write!(stdout, "{}", render(&transform(&g, which)?, dot))?;
            Ok(0)
        }
        Command::Systems { which, input, closed, pre_binary, pre_k } => {
            let g = read_graph(input.as_deref())?;
            writeln!(stdout, "{}", systems(&g, which, closed, pre_binary, pre_k, &caps)?)?;
            Ok(0)
        }
        Command::Generate { kind } => {
            match kind {
                GenerateKind::Holju { n, seed, max_parents, trace, dot } => {
                    let params = GenParams { max_parents, ..GenParams::default() };
                    let (g, t) = random_global_lca(n, seed, params)?;
                    if let Some(path) = trace {
                        fs::write(&path, t.to_string())
                            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    }
                    write!(stdout, "{}", render(&g, dot))?;
                }
                GenerateKind::Level1 { n, seed, galled, dot } => {
                    let kind = if galled { Level1Kind::GalledTree } else { Level1Kind::Level1 };
                    write!(stdout, "{}", render(&random_level1(n, seed, kind)?, dot))?;
                }
            }
            Ok(0)
        }
        Command::Replay { trace, unchecked, dot } => {
            let t: ConstructionTrace = read_input(trace.as_deref())?.parse()?;
            let mode = if unchecked { ExtendMode::Unchecked } else { ExtendMode::Checked };
            match replay(&t, mode) {
                Ok(g) => {
                    write!(stdout, "{}", render(&g, dot))?;
                    Ok(0)
                }
                Err(e) if matches!(e.source, lcadag::Error::OStarViolated { .. }) => {
                    eprintln!("replay failed at {e}");
                    Ok(1)
                }
                Err(e) => Err(CliError::Input(format!("replay failed at {e}"))),
            }
        }
        Command::Deconstruct { input } => {
            let g = read_graph(input.as_deref())?;
            match deconstruct(&g) {
                Ok(t) => {
                    write!(stdout, "{t}")?;
                    Ok(0)
                }
                Err(e @ lcadag::Error::NotHolju { .. }) => {
                    eprintln!("{e}");
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Corpus { inputs, which, jobs, json } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| CliError::Input(format!("cannot start {jobs} workers: {e}")))?;
            let results: Vec<(u8, String)> =
                pool.install(|| inputs.par_iter().map(|p| corpus_entry(p, which, &caps, json)).collect());
            for (_, line) in &results {
                writeln!(stdout, "{line}")?;
            }
            Ok(results.iter().map(|r| r.0).max().unwrap_or(0))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
