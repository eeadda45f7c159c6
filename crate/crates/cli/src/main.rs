//! `sdfvs`: solve, check and generate Subset-DFVS instances.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sdfvs::format::{format_solution, parse_solution, InstanceFile, ProblemKind};
use sdfvs::generate::{planted_instance, random_instance, GenParams};
use sdfvs::oracle::{brute_force_solve, OracleBudget};
use sdfvs::sampling::{SamplingConfig, SamplingMode};
use sdfvs::solver::{edge_to_vertex, solve, verify_solution, EdgeInstance, SolveError, SolverConfig};

const EXIT_NO: u8 = 2;
const EXIT_PARSE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;
const EXIT_LIMIT: u8 = 75;

#[derive(Parser)]
#[command(name = "sdfvs", version, about = "Subset Directed Feedback Vertex Set solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print a report.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        /// Print the report as one JSON object.
        #[arg(long)]
        json: bool,
    },
    /// Check a proposed solution against an instance.
    Verify { file: PathBuf, solution: PathBuf },
    /// Solve by exhaustive search.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_vertices: usize,
    },
    /// Generate an instance and write it to stdout.
    Gen {
        #[arg(long, value_enum, default_value_t = GenMode::Random)]
        mode: GenMode,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.5)]
        s_fraction: f64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convert between the arc form and the vertex form.
    Reduce {
        file: PathBuf,
        /// Subdivide every arc rather than only the S-arcs.
        #[arg(long)]
        every_arc: bool,
    },
    /// Solve every instance in a directory and write CSV.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        /// Cross-check instances up to this many vertices with the oracle.
        #[arg(long, default_value_t = 10)]
        oracle_max: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Exhaustive for up to 16 vertices, Monte Carlo above.
    Auto,
    Mc,
    ExhaustiveP,
    Det,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GenMode {
    Random,
    Planted,
}

#[derive(Args, Clone)]
struct SolveOpts {
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Trials per covering call (default 4^(k²) + 64).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Time limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Find the smallest budget up to the file's `k`.
    #[arg(long)]
    minimize: bool,
}

impl SolveOpts {
    fn config(&self, n: usize, seed: u64) -> SolverConfig {
        let mode = match self.mode {
            Mode::Auto if n <= 16 => SamplingMode::ExhaustiveP,
            Mode::Auto | Mode::Mc => SamplingMode::MonteCarlo,
            Mode::ExhaustiveP => SamplingMode::ExhaustiveP,
            Mode::Det => SamplingMode::Deterministic,
        };
        SolverConfig {
            sampling: SamplingConfig {
                mode,
                trials: self.trials,
                seed,
                ..SamplingConfig::default()
            },
            max_nodes: self.max_nodes,
            timeout: self.timeout.map(Duration::from_secs_f64),
            ..SolverConfig::default()
        }
    }
}

#[derive(Serialize, Debug, Clone)]
struct RunReport {
    name: String,
    n: usize,
    m: usize,
    s: usize,
    k: usize,
    answer: String,
    solution: String,
    nodes: u64,
    trials: u64,
    wall_ms: u128,
    seed: u64,
    mode: String,
}

enum Failure {
    Parse(String),
    Limit(String),
    Internal(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Parse(m) => (EXIT_PARSE, m),
            Failure::Limit(m) => (EXIT_LIMIT, m),
            Failure::Internal(m) => (EXIT_INTERNAL, m),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NodeLimit(_) | SolveError::Timeout => Failure::Limit(e.to_string()),
            SolveError::Sampling(_) => Failure::Parse(e.to_string()),
            SolveError::Uncertified => Failure::Internal(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<InstanceFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    InstanceFile::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn name_of(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn run_solve(
    name: String,
    inst: &EdgeInstance,
    opts: &SolveOpts,
) -> Result<(RunReport, Option<sdfvs::VertexSet>), Failure> {
    let n = inst.graph().vertex_count();
    let started = Instant::now();
    let budgets: Vec<usize> = if opts.minimize {
        (0..=inst.budget()).collect()
    } else {
        vec![inst.budget()]
    };
    let (mut nodes, mut trials, mut exact) = (0, 0, true);
    let mut found = None;
    let mut used_k = inst.budget();
    for k in budgets {
        let seed = if opts.minimize {
            opts.seed.wrapping_add(k as u64)
        } else {
            opts.seed
        };
        let report = solve(&inst.with_budget(k), &opts.config(n, seed))?;
        nodes += report.stats.nodes;
        trials += report.stats.trials;
        exact &= report.exact;
        if let Some(sol) = report.solution {
            if !verify_solution(inst, &sol.deleted) {
                return Err(Failure::Internal("solution failed verification".into()));
            }
            found = Some(sol.deleted);
            used_k = k;
            break;
        }
    }
    let report = RunReport {
        name,
        n,
        m: inst.graph().arc_count(),
        s: inst.s_arcs().len(),
        k: used_k,
        answer: if found.is_some() { "YES" } else { "NO" }.into(),
        solution: found.as_ref().map(format_solution).unwrap_or_default(),
        nodes,
        trials,
        wall_ms: started.elapsed().as_millis(),
        seed: opts.seed,
        mode: if exact { "exact" } else { "one-sided-monte-carlo" }.into(),
    };
    Ok((report, found))
}

fn cmd_solve(file: &Path, opts: &SolveOpts, json: bool) -> Result<ExitCode, Failure> {
    let inst = load(file)?.to_edge_instance();
    let (report, found) = run_solve(name_of(file), &inst, opts)?;
    if json {
        let text = serde_json::to_string(&report).map_err(|e| Failure::Internal(e.to_string()))?;
        println!("{text}");
    } else {
        println!("answer: {}", report.answer);
        if found.is_some() {
            println!("solution: {}", report.solution);
        }
        println!("budget: {}", report.k);
        println!("nodes: {}", report.nodes);
        println!("trials: {}", report.trials);
        println!("wall_ms: {}", report.wall_ms);
        println!("seed: {}", report.seed);
        println!("mode: {}", report.mode);
    }
    Ok(if found.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NO)
    })
}

fn cmd_verify(file: &Path, solution: &Path) -> Result<ExitCode, Failure> {
    let parsed = load(file)?;
    let text = fs::read_to_string(solution)
        .map_err(|e| Failure::Parse(format!("{}: {e}", solution.display())))?;
    let x = parse_solution(&text, parsed.n)
        .map_err(|e| Failure::Parse(format!("{}: {e}", solution.display())))?;
    if verify_solution(&parsed.to_edge_instance(), &x) {
        println!("valid");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("invalid");
        Ok(ExitCode::from(EXIT_NO))
    }
}

fn cmd_oracle(file: &Path, max_vertices: usize) -> Result<ExitCode, Failure> {
    let inst = load(file)?.to_edge_instance();
    let budget = OracleBudget {
        max_vertices,
        ..OracleBudget::default()
    };
    match brute_force_solve(&inst, &budget).map_err(|e| Failure::Parse(e.to_string()))? {
        Some(sol) => {
            println!("answer: YES");
            println!("solution: {}", format_solution(&sol.deleted));
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("answer: NO");
            Ok(ExitCode::from(EXIT_NO))
        }
    }
}

fn cmd_gen(mode: GenMode, params: GenParams) -> Result<ExitCode, Failure> {
    let comment = format!(
        "{} n={} m={} s_fraction={} k={} seed={}",
        match mode {
            GenMode::Random => "random",
            GenMode::Planted => "planted",
        },
        params.n,
        params.m,
        params.s_fraction,
        params.k,
        params.seed
    );
    let inst = match mode {
        GenMode::Random => random_instance(&params),
        GenMode::Planted => planted_instance(&params).map(|(i, _)| i),
    }
    .map_err(|e| Failure::Parse(e.to_string()))?;
    print!("{}", InstanceFile::from_edge_instance(&inst, vec![comment]).serialize());
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(file: &Path, every_arc: bool) -> Result<ExitCode, Failure> {
    let parsed = load(file)?;
    let out = match parsed.kind {
        ProblemKind::Edge => {
            let v = edge_to_vertex(&parsed.to_edge_instance(), every_arc);
            InstanceFile::from_vertex_instance(&v, parsed.comments.clone())
        }
        ProblemKind::Vertex => {
            InstanceFile::from_edge_instance(&parsed.to_edge_instance(), parsed.comments.clone())
        }
    };
    print!("{}", out.serialize());
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(
    dir: &Path,
    opts: &SolveOpts,
    oracle_max: usize,
    output: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Parse(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let sink: Box<dyn std::io::Write> = match output {
        Some(p) => Box::new(
            fs::File::create(p).map_err(|e| Failure::Internal(format!("{}: {e}", p.display())))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    let budget = OracleBudget {
        max_vertices: oracle_max,
        ..OracleBudget::default()
    };
    let mut unsound = false;
    for path in paths {
        let inst = load(&path)?.to_edge_instance();
        let (report, found) = run_solve(name_of(&path), &inst, opts)?;
        if inst.graph().vertex_count() <= oracle_max {
            if let Ok(truth) = brute_force_solve(&inst, &budget) {
                // With --minimize the report's budget may be below the file's.
                let expected = truth.is_some();
                match (found.is_some(), expected) {
                    (true, false) => {
                        eprintln!("{}: solver YES but oracle NO", report.name);
                        unsound = true;
                    }
                    (false, true) => eprintln!("{}: solver NO but oracle YES", report.name),
                    _ => {}
                }
            }
        }
        writer
            .serialize(&report)
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    writer.flush().map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(if unsound {
        ExitCode::from(EXIT_INTERNAL)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { file, opts, json } => cmd_solve(file, opts, *json),
        Command::Verify { file, solution } => cmd_verify(file, solution),
        Command::Oracle { file, max_vertices } => cmd_oracle(file, *max_vertices),
        Command::Gen {
            mode,
            n,
            m,
            s_fraction,
            k,
            seed,
        } => cmd_gen(
            *mode,
            GenParams {
                n: *n,
                m: *m,
                s_fraction: *s_fraction,
                k: *k,
                seed: *seed,
            },
        ),
        Command::Reduce { file, every_arc } => cmd_reduce(file, *every_arc),
        Command::Bench {
            dir,
            opts,
            oracle_max,
            output,
        } => cmd_bench(dir, opts, *oracle_max, output.as_deref()),
    };
    result.unwrap_or_else(Failure::report)
}
