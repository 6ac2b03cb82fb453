use std::fs;
use std::io::{self, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use borwin::baselines::{brute_force_with, rcsp_label_setting_until, BruteMode, DEFAULT_PATH_CAP};
use borwin::bench::{disagreements, run_bench, write_cactus, write_csv, Algo, BenchRecord, BenchStatus};
use borwin::generator::{generate, DagParams, Family, Generated, GeneratorConfig, HucParams, PriceMode};
use borwin::graph::{Path, ValidationWarning, WindowedDag};
use borwin::huc::{build_graph, export_milp, nmckp_provider, revenue, volumes, HucGraph, HucInstance};
use borwin::io::{dag_to_json, huc_to_json, parse_instance, solution_json, Instance};
use borwin::nmckp::{NmckpBound, UbProvider};
use borwin::scalar::format_scalar;
use borwin::solver::{solve, SolveStatus, SolverOptions};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "borwin", version, about = "Exact longest paths under resource windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a DAG or hydro instance (schema is auto-detected).
    Solve(SolveArgs),
    /// Generate seeded random instances.
    Gen(GenArgs),
    /// Run algorithms over a directory of instances and write CSV.
    Bench(BenchArgs),
    /// Write the hydro MILP model in LP format.
    ExportLp {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check an instance file and report problems.
    Validate { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum UbArg {
    None,
    Trivial,
    Lp,
}

#[derive(clap::Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, default_value = "borwin", value_parser = parse_algo)]
    algo: Algo,
    /// Completion bound for hydro instances (DAGs always use the trivial one unless `none`).
    #[arg(long, value_enum, default_value = "lp")]
    ub: UbArg,
    #[arg(long, env = "BORWIN_TRACE", value_parser = parse_flag, default_value = "0", num_args = 0, default_missing_value = "1")]
    trace: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    time_limit_ms: Option<u64>,
    #[arg(long)]
    no_dominance: bool,
    #[arg(long)]
    no_pruning: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Dag,
    Huc,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "dag")]
    family: FamilyArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output directory; a single instance goes to stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    vertices: usize,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long, default_value_t = 0.3)]
    window_prob: f64,
    #[arg(long, default_value_t = 1.0)]
    window_width: f64,
    #[arg(long, default_value_t = 6)]
    periods: usize,
    #[arg(long, default_value_t = 3)]
    points: usize,
    #[arg(long, default_value_t = 2)]
    min_updown: usize,
    #[arg(long)]
    near_flat: bool,
    #[arg(long, default_value_t = 6)]
    slack: i64,
    /// Start hydro units at a random level, possibly locked by a recent change.
    #[arg(long)]
    random_initial: bool,
}

#[derive(clap::Args)]
struct BenchArgs {
    dir: PathBuf,
    #[arg(long)]
    timeout_ms: Option<u64>,
    #[arg(long, value_delimiter = ',', default_value = "borwin,rcsp", value_parser = parse_algo)]
    algos: Vec<Algo>,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Solved-within-time table for cactus plots.
    #[arg(long)]
    cactus: Option<PathBuf>,
}

fn parse_algo(s: &str) -> Result<Algo, String> {
    s.parse()
}

fn parse_flag(s: &str) -> Result<bool, String> {
    match s {
        "1" | "true" | "yes" | "on" => Ok(true),
        "" | "0" | "false" | "no" | "off" => Ok(false),
        other => Err(format!("expected 0 or 1, got `{other}`")),
    }
}

type CliResult = Result<ExitCode, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Gen(args) => cmd_gen(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::ExportLp { input, out } => cmd_export_lp(&input, out.as_deref()),
        Command::Validate { input } => cmd_validate(&input),
    };
    match res {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn read_instance(path: &FsPath) -> Result<Instance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

struct Outcome {
    status: SolveStatus,
    path: Option<Path>,
    stats: serde_json::Value,
}

fn run_baseline(dag: &WindowedDag, algo: Algo, deadline: Option<Instant>) -> Result<Outcome, String> {
    let (res, stats) = match algo {
        Algo::Rcsp => match rcsp_label_setting_until(dag, deadline) {
            None => {
                return Ok(Outcome {
                    status: SolveStatus::Timeout,
                    path: None,
                    stats: json!({}),
                })
            }
            Some((res, st)) => (res, json!({"labels_created": st.labels_created, "labels_pruned_dom": st.labels_dominated})),
        },
        Algo::Oracle => {
            let res = brute_force_with(dag, BruteMode::Fast, DEFAULT_PATH_CAP).map_err(|e| e.to_string())?;
            let st = json!({"paths": res.total_paths, "feasible_paths": res.feasible_paths});
            (res, st)
        }
        Algo::Borwin => unreachable!("handled by the solver"),
    };
    Ok(Outcome {
        status: if res.is_feasible() { SolveStatus::Optimal } else { SolveStatus::Infeasible },
        path: res.best,
        stats,
    })
}

fn cmd_solve(args: &SolveArgs) -> CliResult {
    let inst = read_instance(&args.input)?;
    let huc: Option<(HucInstance, HucGraph)> = match &inst {
        Instance::Dag(_) => None,
        Instance::Huc(h) => Some((h.clone(), build_graph(h).map_err(|e| e.to_string())?)),
    };
    let dag = match (&inst, &huc) {
        (Instance::Dag(d), _) => d,
        (_, Some((_, g))) => &g.dag,
        _ => unreachable!(),
    };
    let ub = match (args.ub, &huc) {
        (UbArg::None, _) => UbProvider::Disabled,
        (UbArg::Trivial, _) | (UbArg::Lp, None) => UbProvider::Trivial,
        (UbArg::Lp, Some((h, g))) => nmckp_provider(h, g, NmckpBound::Lp),
    };
    let time_limit = args.time_limit_ms.map(Duration::from_millis);
    let start = Instant::now();

    let out = if args.algo == Algo::Borwin {
        let opts = SolverOptions {
            ub,
            dominance: !args.no_dominance,
            prune_mu: !args.no_pruning,
            prune_ub: !args.no_pruning,
            trace: args.trace,
            time_limit,
        };
        let sol = solve(dag, &opts).map_err(|e| e.to_string())?;
        if args.trace {
            let mut err = io::stderr().lock();
            for step in &sol.phase1_steps {
                let _ = writeln!(err, "phase1 {step}");
            }
            for ev in &sol.trace {
                let _ = writeln!(err, "phase2 {}", ev.render(dag));
            }
        }
        let mut stats = solution_json(dag, &sol, "borwin");
        if let Some(m) = stats.as_object_mut() {
            for k in ["algo", "status", "value", "path", "resource"] {
                m.remove(k);
            }
        }
        Outcome {
            status: sol.status,
            path: sol.path,
            stats,
        }
    } else {
        run_baseline(dag, args.algo, time_limit.map(|t| start + t))?
    };
    let time_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut doc = json!({
        "algo": args.algo.name(),
        "status": out.status.as_str(),
        "value": out.path.as_ref().map(|p| format_scalar(&p.value)),
        "path": out.path.as_ref().map(|p| p.vertices.iter().map(|&v| dag.label(v)).collect::<Vec<_>>()),
        "resource": out.path.as_ref().map(|p| format_scalar(&p.resource)),
        "time_ms": time_ms,
        "stats": out.stats,
    });
    if let (Some((h, g)), Some(p)) = (&huc, &out.path) {
        if out.status == SolveStatus::Optimal {
            let schedule = g.schedule(p);
            doc["schedule"] = json!(schedule);
            doc["revenue"] = json!(format_scalar(&revenue(h, &schedule)));
            doc["volumes"] = json!(volumes(h, &schedule).iter().map(format_scalar).collect::<Vec<_>>());
        }
    }

    if args.json {
        println!("{}", serde_json::to_string_pretty(&doc).expect("serialisable"));
    } else {
        print_text(&doc);
    }
    Ok(match out.status {
        SolveStatus::Optimal => ExitCode::SUCCESS,
        SolveStatus::Infeasible => ExitCode::from(EXIT_INFEASIBLE),
        SolveStatus::Timeout => ExitCode::from(EXIT_TIMEOUT),
    })
}

/// `7/1` reads better as `7` on a terminal.
fn plain(s: &str) -> String {
    s.strip_suffix("/1").unwrap_or(s).to_string()
}

fn print_text(doc: &serde_json::Value) {
    let s = |k: &str| plain(doc[k].as_str().unwrap_or("-"));
    let list = |k: &str| match doc[k].as_array() {
        Some(a) => a.iter().map(|x| x.as_str().map_or_else(|| x.to_string(), plain)).collect::<Vec<_>>().join(","),
        None => "-".into(),
    };
    println!("status: {}", s("status"));
    println!("value: {}", s("value"));
    println!("path: {}", list("path"));
    println!("resource: {}", s("resource"));
    if doc.get("schedule").is_some() {
        println!("schedule: {}", list("schedule"));
        println!("revenue: {}", s("revenue"));
        println!("volumes: {}", list("volumes"));
    }
    println!("time_ms: {:.3}", doc["time_ms"].as_f64().unwrap_or(0.0));
    if let Some(stats) = doc["stats"].as_object() {
        for (k, v) in stats {
            println!("{k}: {}", v.as_str().map_or_else(|| v.to_string(), plain));
        }
    }
}

fn cmd_gen(args: &GenArgs) -> CliResult {
    let family = match args.family {
        FamilyArg::Dag => Family::Dag(DagParams {
            vertices: args.vertices,
            density: args.density,
            window_prob: args.window_prob,
            window_width: args.window_width,
            ..Default::default()
        }),
        FamilyArg::Huc => Family::Huc(HucParams {
            periods: args.periods,
            points: args.points,
            min_updown: args.min_updown,
            price_mode: if args.near_flat { PriceMode::NearFlat } else { PriceMode::Independent },
            slack: args.slack,
            random_initial: args.random_initial,
        }),
    };
    if args.count == 0 {
        return Err("--count must be at least 1".into());
    }
    if args.vertices < 2 || !(0.0..=1.0).contains(&args.density) || !(0.0..=1.0).contains(&args.window_prob) {
        return Err("need --vertices >= 2 and --density, --window-prob in [0, 1]".into());
    }
    if args.periods == 0 || args.points == 0 || args.min_updown == 0 || args.slack < 0 {
        return Err("--periods, --points and --min-updown must be positive, --slack non-negative".into());
    }
    let config = GeneratorConfig {
        seed: args.seed,
        count: args.count,
        family,
    };
    let render = |g: &Generated| match g {
        Generated::Dag(d) => dag_to_json(d),
        Generated::Huc(h) => huc_to_json(h),
    };
    let instances = generate(&config);
    match &args.out {
        None if instances.len() == 1 => print!("{}", render(&instances[0].1)),
        None => return Err("--out is required when --count > 1".into()),
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            for (name, g) in &instances {
                let path = dir.join(format!("{name}.json"));
                fs::write(&path, render(g)).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            eprintln!("wrote {} instances to {}", instances.len(), dir.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs) -> CliResult {
    let mut files: Vec<PathBuf> = fs::read_dir(&args.dir)
        .map_err(|e| format!("{}: {e}", args.dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let timeout = args.timeout_ms.map(Duration::from_millis);
    let mut records = Vec::new();
    for file in &files {
        let name = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        match read_instance(file) {
            Ok(inst) => records.extend(run_bench(&[(name, inst)], &args.algos, timeout)),
            Err(msg) => {
                eprintln!("warning: {msg}");
                records.extend(args.algos.iter().map(|&algo| BenchRecord {
                    instance: name.clone(),
                    algo,
                    status: BenchStatus::Error,
                    value: None,
                    time_ms: 0.0,
                    p1_iters: 0,
                    p2_iters: 0,
                    labels_created: 0,
                    labels_pruned_bound: 0,
                    labels_pruned_dom: 0,
                    labels_pruned_ub: 0,
                }));
            }
        }
    }
    match &args.csv {
        Some(p) => {
            let f = fs::File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
            write_csv(&records, f).map_err(|e| e.to_string())?;
        }
        None => write_csv(&records, io::stdout().lock()).map_err(|e| e.to_string())?,
    }
    if let Some(p) = &args.cactus {
        let f = fs::File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
        write_cactus(&records, &args.algos, f).map_err(|e| e.to_string())?;
    }
    let clashes = disagreements(&records);
    for name in &clashes {
        eprintln!("warning: algorithms disagree on {name}");
    }
    Ok(if clashes.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_export_lp(input: &FsPath, out: Option<&FsPath>) -> CliResult {
    let Instance::Huc(inst) = read_instance(input)? else {
        return Err(format!("{}: export-lp needs a hydro instance", input.display()));
    };
    match out {
        Some(p) => {
            let mut f = io::BufWriter::new(fs::File::create(p).map_err(|e| format!("{}: {e}", p.display()))?);
            export_milp(&inst, &mut f).and_then(|_| f.flush()).map_err(|e| e.to_string())?;
        }
        None => match export_milp(&inst, &mut io::stdout().lock()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.to_string()),
            _ => {}
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(input: &FsPath) -> CliResult {
    match read_instance(input)? {
        Instance::Dag(dag) => {
            let report = dag.validate().map_err(|e| e.to_string())?;
            for w in &report.warnings {
                match w {
                    ValidationWarning::IgnoredWindow(v) => {
                        println!("warning: window on `{}` is ignored (vertex lies on no source-sink path)", dag.label(*v))
                    }
                }
            }
            println!("ok: dag with {} vertices, {} arcs", dag.vertex_count(), dag.arc_count());
        }
        Instance::Huc(h) => {
            h.validate().map_err(|e| e.to_string())?;
            let g = build_graph(&h).map_err(|e| e.to_string())?;
            println!(
                "ok: hydro unit with {} periods, {} points; state graph {} of {} vertices after pruning",
                h.periods,
                h.points.len(),
                g.dag.vertex_count(),
                g.full_vertex_count
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
