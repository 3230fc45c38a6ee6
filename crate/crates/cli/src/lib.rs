//! Command-line driver. [`run`] parses arguments, executes one subcommand and
//! returns the process exit status: 0 on success, 1 when a verification fails,
//! 2 on usage or input errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hanoi_uniform::bounds::check_all;
use hanoi_uniform::graph::{load_edge_list, save_edge_list};
use hanoi_uniform::rational::{format_rational, parse_rational, Rational};
use hanoi_uniform::solver::MoveList;
use hanoi_uniform::uniformity::evenly_spaced_sources;
use hanoi_uniform::verify::run_suite;
use hanoi_uniform::{
    best_uniformity, blow_up, build_explicit, build_planned_graph, is_distance_uniform,
    iterate_truncation, plan_parameters, sampled_uniformity, solve, verify_path, HanoiParams,
    HanoiState,
};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "hanoi-uniform",
    version,
    about = "Distance-uniform Hanoi graphs"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// State-count cap as a power of two.
    #[arg(long, global = true, default_value_t = 26)]
    cap: u32,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a Hanoi graph (or a planned graph) as an edge list.
    Generate(GenerateArgs),
    /// Report the best critical distance and epsilon of a graph file.
    Analyze(AnalyzeArgs),
    /// Solve the Hanoi game between two states.
    Solve(SolveArgs),
    /// Choose Hanoi parameters for a target size and epsilon.
    Plan(PlanArgs),
    /// Write the iterated truncation of a simplex with its state labels.
    Truncate(TruncateArgs),
    /// Blow a graph file up to a larger vertex count.
    Blowup(BlowupArgs),
    /// Run the self-check suite for one (r, k).
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, requires = "k", conflicts_with_all = ["n", "epsilon"])]
    r: Option<u32>,
    #[arg(long, requires = "r")]
    k: Option<usize>,
    /// Use proper states only (nonzero first entry).
    #[arg(long)]
    proper: bool,
    /// Target vertex count; builds the planned graph.
    #[arg(long, requires = "epsilon")]
    n: Option<u64>,
    #[arg(long, requires = "n")]
    epsilon: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Check uniformity at this epsilon (needs --d).
    #[arg(long, requires = "d")]
    epsilon: Option<String>,
    #[arg(long, requires = "epsilon")]
    d: Option<u32>,
    /// Analyse this many evenly spaced sources instead of all vertices.
    #[arg(long, conflicts_with = "epsilon")]
    sample: Option<usize>,
    /// Also run the minimum-degree, ball-growth and upper-bound checkers.
    #[arg(long, conflicts_with_all = ["sample", "epsilon"])]
    bounds: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    #[arg(long)]
    proper: bool,
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[arg(long)]
    n: u64,
    /// Exact fraction such as `1/16`.
    #[arg(long)]
    epsilon: String,
}

#[derive(Args, Debug)]
struct TruncateArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BlowupArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    k: usize,
}

type Failure = Box<dyn std::error::Error + Send + Sync>;

struct Ctx {
    json: bool,
    cap: u64,
}

/// Runs the CLI on `argv` (program name first), writing to `out` and `err`.
pub fn run<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    if cli.cap > 40 {
        let _ = writeln!(err, "error: --cap {} is above 40 bits", cli.cap);
        return EXIT_USAGE;
    }
    let ctx = Ctx {
        json: cli.json,
        cap: 1u64 << cli.cap,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(&cli.command, &ctx, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx, out: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    match cmd {
        Command::Generate(a) => generate(a, ctx, out),
        Command::Analyze(a) => analyze(a, ctx, out),
        Command::Solve(a) => solve_cmd(a, ctx, out),
        Command::Plan(a) => plan(a, ctx, out),
        Command::Truncate(a) => truncate(a, ctx, out),
        Command::Blowup(a) => blowup(a, ctx, out),
        Command::Verify(a) => verify(a, ctx, out),
    }
}

fn epsilon_arg(text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| format!("--epsilon: {e}").into())
}

fn generate(a: &GenerateArgs, ctx: &Ctx, out: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    let g = match (a.r, a.k, a.n, &a.epsilon) {
        (Some(r), Some(k), None, None) => {
            build_explicit(&HanoiParams::new(r, k, a.proper)?, ctx.cap)?
        }
        (None, None, Some(n), Some(eps)) => {
            build_planned_graph(&plan_parameters(n, &epsilon_arg(eps)?)?, ctx.cap)?
        }
        _ => return Err("generate needs either --r and --k, or --n and --epsilon".into()),
    };
    save_edge_list(&g, &a.out)?;
    if ctx.json {
        writeln!(
            out,
            "{}",
            json!({"n": g.n(), "m": g.edge_count(), "out": a.out.display().to_string()})
        )?;
    } else {
        writeln!(
            out,
            "wrote {} vertices, {} edges to {}",
            g.n(),
            g.edge_count(),
            a.out.display()
        )?;
    }
    Ok(EXIT_OK)
}

fn analyze(a: &AnalyzeArgs, ctx: &Ctx, out: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    let g = load_edge_list(&a.input)?;
    if let (Some(eps), Some(d)) = (&a.epsilon, a.d) {
        let eps = epsilon_arg(eps)?;
        let ok = is_distance_uniform(&g, &eps, d);
        if ctx.json {
            writeln!(
                out,
                "{}",
                json!({"n": g.n(), "epsilon": format_rational(&eps), "d": d, "uniform": ok})
            )?;
        } else {
            writeln!(
                out,
                "{}-distance-uniform at d = {d}: {ok}",
                format_rational(&eps)
            )?;
        }
        return Ok(if ok { EXIT_OK } else { EXIT_FAILED });
    }

    let report = match a.sample {
        Some(count) => sampled_uniformity(&g, &evenly_spaced_sources(g.n(), count))?,
        None => best_uniformity(&g)?,
    };
    let bounds = if a.bounds {
        Some(check_all(&g, &report)?)
    } else {
        None
    };
    if ctx.json {
        let mut v = report.to_json();
        if let Some(b) = &bounds {
            v["bounds"] = serde_json::to_value(b)?;
        }
        writeln!(out, "{v}")?;
    } else {
        let eps = report.epsilon();
        writeln!(out, "n\t{}", report.n)?;
        writeln!(out, "d\t{}", report.d)?;
        writeln!(
            out,
            "epsilon\t{}\t{:.6}",
            format_rational(&eps),
            hanoi_uniform::rational::to_f64(&eps)
        )?;
        writeln!(out, "connected\t{}", report.connected)?;
        match report.diameter() {
            Some(diam) => writeln!(out, "diameter\t{diam}")?,
            None => writeln!(out, "diameter\tunknown")?,
        }
        writeln!(out, "sources\t{}", report.sources.len())?;
        if let Some(b) = &bounds {
            writeln!(
                out,
                "min_degree\t{}\t{}",
                b.min_degree,
                pass(b.min_degree_ok)
            )?;
            for row in &b.growth.rows {
                writeln!(
                    out,
                    "growth\tr={}\tmin_ball={}\trequired={}\t{}",
                    row.radius,
                    row.min_ball,
                    row.required,
                    pass(row.pass)
                )?;
            }
            writeln!(
                out,
                "upper_bound\t{:.3}\t{}",
                b.upper_bound_value,
                pass(b.upper_bound_ok)
            )?;
        }
    }
    Ok(match &bounds {
        Some(b) if !b.all_pass() => EXIT_FAILED,
        _ => EXIT_OK,
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn solve_cmd(a: &SolveArgs, ctx: &Ctx, out: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    let params = HanoiParams::new(a.r, a.k, a.proper)?;
    let from = HanoiState::parse(&a.from, &params)?;
    let to = HanoiState::parse(&a.to, &params)?;
    let path = solve(&from, &to, &params)?;
    let ok = verify_path(&path, &params).is_ok_and(|end| end == to);
    let moves = MoveList(&path.moves).to_string();
    if ctx.json {
        writeln!(
            out,
            "{}",
            json!({"from": from.to_string(), "to": to.to_string(), "length": path.len(), "moves": moves, "verified": ok})
        )?;
    } else {
        writeln!(out, "{} moves", path.len())?;
        writeln!(out, "{moves}")?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn plan(a: &PlanArgs, ctx: &Ctx, out: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    let plan = plan_parameters(a.n, &epsilon_arg(&a.epsilon)?)?;
    if ctx.json {
        writeln!(out, "{}", plan.to_json())?;
    } else {
        let mode = serde_json::to_value(plan.mode)?;
        writeln!(out, "mode\t{}", mode.as_str().unwrap_or_default())?;
        writeln!(out, "m a b\t{} {} {}", plan.m, plan.a, plan.b)?;
        writeln!(out, "r k\t{} {}", plan.r, plan.k)?;
        writeln!(out, "base_n\t{}", plan.base_n)?;
        writeln!(out, "predicted_d\t{}", plan.predicted_d)?;
        let cc = plan.copy_counts;
        writeln!(out, "copies\t{} {} {}", cc.floor, cc.ceil, cc.ceil_vertices)?;
        for w in &plan.warnings {
            writeln!(out, "warning\t{w}")?;
        }
    }
    Ok(EXIT_OK)
}

fn truncate(a: &TruncateArgs, ctx: &Ctx, out: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    let t = iterate_truncation(a.r, a.k, ctx.cap)?;
    let g = t.to_explicit()?;
    save_edge_list(&g, &a.out)?;
    if ctx.json {
        writeln!(
            out,
            "{}",
            json!({"n": g.n(), "m": g.edge_count(), "out": a.out.display().to_string()})
        )?;
    } else {
        writeln!(
            out,
            "wrote {} vertices, {} edges to {}",
            g.n(),
            g.edge_count(),
            a.out.display()
        )?;
    }
    Ok(EXIT_OK)
}

fn blowup(a: &BlowupArgs, ctx: &Ctx, out: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    if a.n > ctx.cap {
        return Err(format!("--n {} exceeds the cap {}", a.n, ctx.cap).into());
    }
    let g = load_edge_list(&a.input)?;
    let b = blow_up(&g, a.n)?;
    save_edge_list(&b, &a.out)?;
    if ctx.json {
        writeln!(
            out,
            "{}",
            json!({"n": b.n(), "m": b.edge_count(), "out": a.out.display().to_string()})
        )?;
    } else {
        writeln!(
            out,
            "wrote {} vertices, {} edges to {}",
            b.n(),
            b.edge_count(),
            a.out.display()
        )?;
    }
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, ctx: &Ctx, out: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    let report = run_suite(a.r, a.k, ctx.cap)?;
    if ctx.json {
        writeln!(out, "{}", serde_json::to_string(&report)?)?;
    } else {
        write!(out, "{}", report.to_table())?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}
