//! `subsq`: solve, generate and benchmark overdetermined interval linear
//! systems from the command line.
//!
//! Exit codes for `solve` and `hull`: 0 = verified enclosure, 2 = proven
//! unsolvable, 3 = inconclusive, 1 = usage or IO error.

use std::fs;
use std::io::{self, Read as _, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use subsquares::hull::{exact_hull, DEFAULT_HULL_CAP};
use subsquares::linalg::IntervalVector;
use subsquares::parallel::parallel_sequential_solve;
use subsquares::selection::default_overlap;
use subsquares::solver::{
    default_budget, sequential_solve, simple_solve, Budget, SolveOutcome, SolveParams, StartBox,
};
use subsquares::square::SolveStatus;

use subsquares_cli::experiments::{
    run_table1, run_table3, run_table4, run_table5, DEFAULT_TIGHTNESS_RADIUS, DETECTION_BUDGET,
    DETECTION_RADII, DETECTION_SIZES, SHAVING_ROWS, SHAVING_ROWS_CENTERED, TIGHTNESS_SIZES,
    X0_INFLATION,
};
use subsquares_cli::generate::{generate, GeneratorKind};
use subsquares_cli::sysfile;

#[derive(Parser)]
#[command(
    name = "subsq",
    version,
    about = "Verified enclosures for overdetermined interval linear systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a system file; prints one JSON line and exits 0/2/3
    Solve(SolveArgs),
    /// Generate a random system file
    Gen(GenArgs),
    /// Exact solution-set hull of a small system (LP-based)
    Hull(HullArgs),
    /// Run a benchmark table; prints CSV (timings go to stderr)
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Intersect independently solved subsquares
    Simple,
    /// Iterate all chosen subsquares over one shared box (Gauss-Seidel)
    Sequential,
    /// Threaded shared-box iteration (Jacobi)
    Parallel,
}

#[derive(Args)]
struct SolveArgs {
    /// System file; `-` reads stdin
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Sequential)]
    mode: Mode,
    /// Rows shared between consecutive subsquares [default: max(1, n/3)]
    #[arg(long)]
    overlap: Option<usize>,
    /// Convergence threshold on endpoint movement per round
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Iteration-round cap
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    #[arg(long, env = "SUBSQ_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; above 1 requires --mode parallel
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Simple-mode subsquare budget: `all` or a count of random draws
    #[arg(long, value_parser = parse_budget)]
    budget: Option<BudgetArg>,
    /// Start-box file for sequential/parallel modes (count line, then `lo hi` lines)
    #[arg(long)]
    x0: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// Planted solution at a random position inside each interval (solvable)
    Shifted,
    /// Intervals centered on the point system (solvable midpoint system)
    Centered,
    /// Coefficients shifted past their intervals (usually unsolvable)
    Unsolvable,
}

impl From<KindArg> for GeneratorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Shifted => GeneratorKind::Shifted,
            KindArg::Centered => GeneratorKind::Centered,
            KindArg::Unsolvable => GeneratorKind::Unsolvable,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// System shape as `MxN`, e.g. 15x10
    #[arg(long, value_parser = parse_size)]
    size: (usize, usize),
    /// Half-width of every coefficient interval
    #[arg(long, default_value_t = 0.25)]
    radius: f64,
    #[arg(long, value_enum, default_value_t = KindArg::Shifted)]
    kind: KindArg,
    #[arg(long, env = "SUBSQ_SEED", default_value_t = 0)]
    seed: u64,
    /// Output path (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct HullArgs {
    /// System file; `-` reads stdin
    file: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableArg {
    /// All-subsquares intersection vs exact hull (width/volume ratios)
    Table1,
    /// Random subsquares until unsolvability is detected
    Table3,
    /// Shaving a loose start box, shifted generator
    Table4,
    /// Shaving a loose start box, centered generator
    Table5,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(value_enum)]
    table: TableArg,
    /// Systems per row [defaults: 50 for table1, 30 for table3, 20 for table4/5]
    #[arg(long)]
    trials: Option<usize>,
    /// Subsquare-set redraws per system (table4/5 `best` column)
    #[arg(long, default_value_t = 10)]
    redraws: usize,
    #[arg(long, env = "SUBSQ_SEED", default_value_t = 0)]
    seed: u64,
    /// Replace the built-in radius list with a single value
    #[arg(long)]
    radius: Option<f64>,
    /// Replace the built-in per-row overlaps
    #[arg(long)]
    overlap: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Random-draw budget for table3 detection
    #[arg(long, default_value_t = DETECTION_BUDGET)]
    budget: usize,
    /// Start-box inflation factor for table4/5
    #[arg(long, default_value_t = X0_INFLATION)]
    x0_inflate: f64,
    /// Output path (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Debug)]
enum BudgetArg {
    All,
    Count(usize),
}

fn parse_budget(s: &str) -> Result<BudgetArg, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(BudgetArg::All);
    }
    s.parse::<usize>()
        .map(BudgetArg::Count)
        .map_err(|_| format!("expected `all` or a count, got `{s}`"))
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected `MxN`, got `{s}`"))?;
    let m: usize = m.trim().parse().map_err(|_| format!("bad equation count in `{s}`"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("bad unknown count in `{s}`"))?;
    if m >= n && n >= 1 {
        Ok((m, n))
    } else {
        Err(format!("need m >= n >= 1, got {m}x{n}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if ok { 0 } else { 1 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Hull(a) => cmd_hull(a),
        Cmd::Bench(a) => cmd_bench(a),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn endpoint_value(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn box_values(x: &IntervalVector) -> Vec<[serde_json::Value; 2]> {
    x.iter()
        .map(|iv| match iv.bounds() {
            Some((lo, hi)) => [endpoint_value(lo), endpoint_value(hi)],
            None => ["empty".into(), "empty".into()],
        })
        .collect()
}

#[derive(Serialize)]
struct Report {
    status: &'static str,
    r#box: Vec<[serde_json::Value; 2]>,
    iterations: usize,
    subsquares_used: usize,
    seed: u64,
}

fn exit_for(status: &SolveStatus) -> ExitCode {
    match status {
        SolveStatus::Enclosure => ExitCode::SUCCESS,
        SolveStatus::ProvenUnsolvable => ExitCode::from(2),
        SolveStatus::Inconclusive(_) => ExitCode::from(3),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let (a, b) = sysfile::read_system(&read_input(&args.file)?)?;
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        bail!("system has more unknowns ({n}) than equations ({m})");
    }
    let overlap = match args.overlap {
        Some(o) if o >= n => bail!("--overlap must be below n = {n}"),
        Some(o) => o,
        None => default_overlap(n),
    };
    if args.workers == 0 {
        bail!("--workers must be at least 1");
    }
    if args.workers > 1 && args.mode != Mode::Parallel {
        bail!("--workers above 1 requires --mode parallel");
    }
    let x0 = match &args.x0 {
        Some(p) => {
            if args.mode == Mode::Simple {
                bail!("--x0 applies to sequential/parallel modes only");
            }
            let bx = sysfile::read_box(&read_input(p)?)?;
            if bx.len() != n {
                bail!("start box has {} components, the system has {n}", bx.len());
            }
            StartBox::Given(bx)
        }
        None => StartBox::Auto,
    };
    let params = SolveParams { eps: args.eps, max_iter: args.max_iter };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    let out: SolveOutcome = match args.mode {
        Mode::Simple => {
            let budget = match args.budget {
                Some(BudgetArg::All) => Budget::AllSubsquares,
                Some(BudgetArg::Count(k)) => Budget::Random(k),
                None => default_budget(m, n, overlap).map_err(|e| anyhow!(e))?,
            };
            simple_solve(&a, &b, budget, params, &mut rng).map_err(|e| anyhow!(e))?
        }
        Mode::Sequential => {
            if args.budget.is_some() {
                bail!("--budget applies to simple mode only");
            }
            sequential_solve(&a, &b, &x0, overlap, params, &mut rng).map_err(|e| anyhow!(e))?
        }
        Mode::Parallel => {
            if args.budget.is_some() {
                bail!("--budget applies to simple mode only");
            }
            parallel_sequential_solve(&a, &b, &x0, overlap, params, args.workers, &mut rng)
                .map_err(|e| anyhow!(e))?
        }
    };

    if let SolveStatus::Inconclusive(reason) = &out.status {
        eprintln!("note: inconclusive ({reason:?})");
    }
    let report = Report {
        status: match out.status {
            SolveStatus::Enclosure => "enclosure",
            SolveStatus::ProvenUnsolvable => "proven_unsolvable",
            SolveStatus::Inconclusive(_) => "inconclusive",
        },
        r#box: box_values(&out.x),
        iterations: out.iterations,
        subsquares_used: out.subsquares_used,
        seed: args.seed,
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(exit_for(&out.status))
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let (m, n) = args.size;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let sys = generate(args.kind.into(), m, n, args.radius, &mut rng);
    let mut text = format!(
        "# random {m}x{n} interval system: radius {}, kind {:?}, seed {}\n",
        args.radius, args.kind, args.seed
    );
    text.push_str(&sysfile::write_system(&sys.a, &sys.b));
    text.push_str("# solution of the generating point system:\n");
    for v in &sys.x_star {
        text.push_str(&format!("#   {}\n", sysfile::format_endpoint(*v)));
    }
    match &args.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_hull(args: HullArgs) -> Result<ExitCode> {
    let (a, b) = sysfile::read_system(&read_input(&args.file)?)?;
    let res = exact_hull(&a, &b, DEFAULT_HULL_CAP).map_err(|e| anyhow!(e))?;
    let (hull_json, code) = match &res.hull {
        Some(h) => (serde_json::json!(box_values(h)), ExitCode::SUCCESS),
        None => (serde_json::Value::Null, ExitCode::from(2)),
    };
    let line = serde_json::json!({
        "hull": hull_json,
        "orthants_visited": res.orthants_visited,
    });
    println!("{line}");
    Ok(code)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let params = SolveParams { eps: args.eps, max_iter: args.max_iter };
    let mut sink: Box<dyn io::Write> = match &args.output {
        Some(p) => Box::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        ),
        None => Box::new(io::stdout()),
    };
    let mut log = io::stderr();

    match args.table {
        TableArg::Table1 => {
            let radius = args.radius.unwrap_or(DEFAULT_TIGHTNESS_RADIUS);
            let trials = args.trials.unwrap_or(50);
            run_table1(TIGHTNESS_SIZES, radius, trials, args.seed, params, &mut sink, &mut log)?;
        }
        TableArg::Table3 => {
            let radii: Vec<f64> = match args.radius {
                Some(r) => vec![r],
                None => DETECTION_RADII.to_vec(),
            };
            let trials = args.trials.unwrap_or(30);
            run_table3(
                DETECTION_SIZES,
                &radii,
                trials,
                args.budget,
                args.seed,
                params,
                &mut sink,
                &mut log,
            )?;
        }
        TableArg::Table4 | TableArg::Table5 => {
            let base = if args.table == TableArg::Table4 { SHAVING_ROWS } else { SHAVING_ROWS_CENTERED };
            let mut rows: Vec<(usize, usize, usize, f64)> = base
                .iter()
                .map(|&(m, n, o, r)| {
                    (m, n, args.overlap.unwrap_or(o), args.radius.unwrap_or(r))
                })
                .collect();
            rows.dedup();
            for &(_, n, o, _) in &rows {
                if o >= n {
                    bail!("--overlap {o} must be below n = {n}");
                }
            }
            let trials = args.trials.unwrap_or(20);
            let runner = if args.table == TableArg::Table4 { run_table4 } else { run_table5 };
            runner(
                &rows,
                trials,
                args.redraws,
                args.x0_inflate,
                args.seed,
                params,
                &mut sink,
                &mut log,
            )?;
        }
    }
    sink.flush()?;
    Ok(ExitCode::SUCCESS)
}
