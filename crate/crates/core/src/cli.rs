//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven in-process by tests.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{bound_holds_exact, evaluate, BoundKind, RootStatus};
use crate::campaign::{run_campaign, CampaignSpec, Family};
use crate::chain::{verify_chain, verify_chain_all_x};
use crate::exact::{alpha_exact, ENUMERATION_PREFERRED};
use crate::generators::{gen_gnm_connected, gen_gnp_connected, gen_named, Named};
use crate::io::{self, Format, GraphDocument};
use crate::min_greedy::{PolicyKind, DEFAULT_KMIN_BUDGET};
use crate::rng::Seed;

#[derive(Debug, Parser)]
#[command(name = "indset", version, about = "MIN greedy independent sets, lower bounds and proof-chain checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a graph file.
    Gen(GenArgs),
    /// Validate a graph file, optionally converting it.
    Parse(ParseArgs),
    /// Run MIN and dump the iteration trace as CSV.
    RunMin(RunMinArgs),
    /// Exact independence number with a witness.
    Alpha(GraphInput),
    /// Evaluate the closed-form bounds.
    Bounds(BoundsArgs),
    /// Check every link of the edge-counting chain on one run.
    VerifyChain(VerifyArgs),
    /// Run a measurement campaign and write CSV.
    Campaign(CampaignArgs),
}

#[derive(Debug, Args)]
struct GraphInput {
    /// Graph file.
    path: PathBuf,
    #[arg(long, default_value = "dimacs")]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenFamily {
    Path,
    Cycle,
    Complete,
    CompleteBipartite,
    Star,
    Gnm,
    Gnp,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: GenFamily,
    /// Vertex count (for stars: leaves + 1).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// First side of a complete bipartite graph.
    #[arg(long)]
    a: Option<usize>,
    /// Second side of a complete bipartite graph.
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_retries: usize,
    #[arg(long, default_value = "dimacs")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParseArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Re-serialize in this format instead of printing a summary.
    #[arg(long)]
    to: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunMinArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, default_value = "lowest")]
    policy: PolicyKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_KMIN_BUDGET)]
    kmin_budget: usize,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Graph file; alternatively give --n and --m.
    path: Option<PathBuf>,
    #[arg(long, default_value = "dimacs")]
    format: Format,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    /// Independence number to test the bounds against.
    #[arg(long)]
    alpha: Option<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, default_value = "lowest")]
    policy: PolicyKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_KMIN_BUDGET)]
    kmin_budget: usize,
    /// Maximum independent set to use, comma separated; defaults to the
    /// lexicographically smallest one.
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<usize>>,
    /// Evaluate against every maximum independent set.
    #[arg(long, conflicts_with = "x")]
    all_x: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CampaignFamily {
    Exhaustive,
    Gnm,
    Gnp,
}

#[derive(Debug, Args)]
struct CampaignArgs {
    /// TOML campaign spec; excludes the grid flags.
    #[arg(long, conflicts_with_all = ["family", "n", "m", "density", "p", "instances", "seed", "policy", "alpha_budget", "kmin_budget", "restarts"])]
    spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<CampaignFamily>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    density: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    policy: Option<PolicyKind>,
    #[arg(long)]
    alpha_budget: Option<usize>,
    #[arg(long)]
    kmin_budget: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// CSV destination; without it CSV goes to stdout and the summary to
    /// stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

/// Parses `argv` (including the program name) and executes the command.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    match command {
        Command::Gen(a) => gen(a, stdout),
        Command::Parse(a) => parse(a, stdout),
        Command::RunMin(a) => run_min_cmd(a, stdout),
        Command::Alpha(a) => alpha(a, stdout),
        Command::Bounds(a) => bounds(a, stdout),
        Command::VerifyChain(a) => verify(a, stdout),
        Command::Campaign(a) => campaign(a, stdout, stderr),
    }
}

fn read_graph(input: &GraphInput) -> Result<GraphDocument, Failure> {
    read_graph_at(&input.path, input.format)
}

fn read_graph_at(path: &Path, format: Format) -> Result<GraphDocument, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    io::parse(&bytes, format).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => stdout.write_all(bytes).map_err(input),
    }
}

fn required<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --family {family}")))
}

fn gen(a: GenArgs, stdout: &mut dyn Write) -> Outcome {
    let seed = Seed(a.seed);
    let usage = |e: crate::generators::GenError| Failure::Usage(e.to_string());
    let graph = match a.family {
        GenFamily::Path => gen_named(Named::Path(required(a.n, "n", "path")?)).map_err(usage)?,
        GenFamily::Cycle => gen_named(Named::Cycle(required(a.n, "n", "cycle")?)).map_err(usage)?,
        GenFamily::Complete => gen_named(Named::Complete(required(a.n, "n", "complete")?)).map_err(usage)?,
        GenFamily::CompleteBipartite => gen_named(Named::CompleteBipartite(
            required(a.a, "a", "complete-bipartite")?,
            required(a.b, "b", "complete-bipartite")?,
        ))
        .map_err(usage)?,
        GenFamily::Star => {
            let n = required(a.n, "n", "star")?;
            gen_named(Named::Star(n.saturating_sub(1))).map_err(usage)?
        }
        GenFamily::Gnm => {
            gen_gnm_connected(required(a.n, "n", "gnm")?, required(a.m, "m", "gnm")?, seed).map_err(usage)?
        }
        GenFamily::Gnp => gen_gnp_connected(required(a.n, "n", "gnp")?, required(a.p, "p", "gnp")?, seed, a.max_retries)
            .map_err(input)?,
    };
    let doc = GraphDocument::new(graph, a.format);
    emit(&io::serialize(&doc, a.format), a.out.as_deref(), stdout)
}

fn parse(a: ParseArgs, stdout: &mut dyn Write) -> Outcome {
    let doc = read_graph(&a.input)?;
    match a.to {
        Some(format) => emit(&io::serialize(&doc, format), a.out.as_deref(), stdout),
        None => {
            let g = &doc.graph;
            let mut text = format!("n={} m={} connected={}\n", g.n(), g.m(), g.is_connected());
            for w in &doc.warnings {
                text.push_str(&format!("warning: {w}\n"));
            }
            emit(text.as_bytes(), a.out.as_deref(), stdout)
        }
    }
}

fn run_min_cmd(a: RunMinArgs, stdout: &mut dyn Write) -> Outcome {
    let doc = read_graph(&a.input)?;
    let trace = a
        .policy
        .with_seed(Seed(a.seed))
        .run(&doc.graph, a.kmin_budget)
        .map_err(input)?;
    stdout.write_all(trace.to_csv().as_bytes()).map_err(input)
}

fn alpha(a: GraphInput, stdout: &mut dyn Write) -> Outcome {
    let doc = read_graph(&a)?;
    let r = alpha_exact(&doc.graph);
    let witness: Vec<String> = r.witness.iter().map(|v| v.to_string()).collect();
    writeln!(stdout, "alpha={} witness={} method={}", r.alpha, witness.join(" "), r.method).map_err(input)
}

fn bounds(a: BoundsArgs, stdout: &mut dyn Write) -> Outcome {
    let (n, m, alpha) = match (&a.path, a.n, a.m) {
        (Some(path), None, None) => {
            let doc = read_graph_at(path, a.format)?;
            let g = doc.graph;
            if !g.is_connected() {
                return Err(Failure::Input(format!("{}: graph is not connected", path.display())));
            }
            if g.n() == 0 {
                return Err(Failure::Input(format!("{}: graph has no vertices", path.display())));
            }
            let alpha = a.alpha.or_else(|| (g.n() <= ENUMERATION_PREFERRED * 4).then(|| alpha_exact(&g).alpha as u64));
            (g.n() as u64, g.m() as u64, alpha)
        }
        (None, Some(n), Some(m)) => (n, m, a.alpha),
        _ => return Err(Failure::Usage("give either a graph file or both --n and --m".into())),
    };
    let mut text = String::new();
    for kind in BoundKind::ALL {
        let b = evaluate(kind, n, m).map_err(input)?;
        let origin = match kind {
            BoundKind::Harant => "published",
            BoundKind::Claimed => "claimed",
            BoundKind::Repaired => "derived",
        };
        let (value, ceil) = match b.status {
            RootStatus::Real => (format!("{:?}", b.value.unwrap()), b.ceil_value.unwrap().to_string()),
            RootStatus::NotReal => ("-".to_string(), "-".to_string()),
        };
        text.push_str(&format!(
            "kind={kind} status={} value={value} ceil={ceil} disc={} origin={origin}",
            b.status.as_str(),
            b.discriminant
        ));
        if let Some(alpha) = alpha {
            let verdict = bound_holds_exact(kind, n, m, alpha).map_err(input)?;
            text.push_str(&format!(" alpha={alpha} valid={}", verdict.as_str()));
        }
        text.push('\n');
    }
    stdout.write_all(text.as_bytes()).map_err(input)
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> Outcome {
    let doc = read_graph(&a.input)?;
    let g = &doc.graph;
    let trace = a
        .policy
        .with_seed(Seed(a.seed))
        .run(g, a.kmin_budget)
        .map_err(input)?;
    let text = if a.all_x {
        verify_chain_all_x(g, &trace).map_err(input)?.to_string()
    } else {
        let x = match a.x {
            Some(x) => x,
            None => alpha_exact(g).witness,
        };
        verify_chain(g, &trace, &x).map_err(input)?.to_string()
    };
    stdout.write_all(text.as_bytes()).map_err(input)
}

fn campaign(a: CampaignArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let spec = match &a.spec {
        Some(path) => CampaignSpec::load(path).map_err(input)?,
        None => {
            let family = match a.family {
                Some(CampaignFamily::Exhaustive) => Family::Exhaustive,
                Some(CampaignFamily::Gnm) => Family::Gnm,
                Some(CampaignFamily::Gnp) => Family::Gnp,
                None => return Err(Failure::Usage("either --spec or --family is required".into())),
            };
            if a.n.is_empty() {
                return Err(Failure::Usage("--n is required".into()));
            }
            let mut spec = CampaignSpec::new(family, a.n);
            spec.m = a.m;
            spec.density = a.density;
            spec.p = a.p;
            spec.instances = a.instances.unwrap_or(spec.instances);
            spec.seed = a.seed.unwrap_or(spec.seed);
            spec.policy = a.policy.unwrap_or(spec.policy);
            spec.alpha_budget = a.alpha_budget.unwrap_or(spec.alpha_budget);
            spec.kmin_budget = a.kmin_budget.unwrap_or(spec.kmin_budget);
            spec.restarts = a.restarts.unwrap_or(spec.restarts);
            spec
        }
    };
    let out = run_campaign(&spec).map_err(input)?;
    let csv = out.to_csv().map_err(input)?;
    let summary = out.summary_table();
    match &a.out {
        Some(path) => {
            emit(csv.as_bytes(), Some(path), stdout)?;
            stdout.write_all(summary.as_bytes()).map_err(input)
        }
        None => {
            stdout.write_all(csv.as_bytes()).map_err(input)?;
            stderr.write_all(summary.as_bytes()).map_err(input)
        }
    }
}
