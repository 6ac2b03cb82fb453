//! Benchmark harness: every algorithm on every instance, one CSV row each,
//! plus a solved-within-time table for cactus plots.

use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::baselines::{brute_force_with, rcsp_label_setting_until, BruteMode, DEFAULT_PATH_CAP};
use crate::graph::WindowedDag;
use crate::huc::{build_graph, nmckp_provider};
use crate::io::Instance;
use crate::nmckp::{NmckpBound, UbProvider};
use crate::scalar::{format_scalar, Scalar};
use crate::solver::{solve, SolveStatus, SolverOptions};

pub const CSV_HEADER: [&str; 11] = [
    "instance",
    "algo",
    "status",
    "value",
    "time_ms",
    "p1_iters",
    "p2_iters",
    "labels_created",
    "labels_pruned_bound",
    "labels_pruned_dom",
    "labels_pruned_ub",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Borwin,
    Rcsp,
    Oracle,
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Borwin => "borwin",
            Algo::Rcsp => "rcsp",
            Algo::Oracle => "oracle",
        }
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "borwin" => Ok(Algo::Borwin),
            "rcsp" => Ok(Algo::Rcsp),
            "oracle" => Ok(Algo::Oracle),
            other => Err(format!("unknown algorithm `{other}` (borwin, rcsp, oracle)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchStatus {
    Opt,
    Infeasible,
    Timeout,
    Error,
}

impl BenchStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            BenchStatus::Opt => "opt",
            BenchStatus::Infeasible => "infeasible",
            BenchStatus::Timeout => "timeout",
            BenchStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance: String,
    pub algo: Algo,
    pub status: BenchStatus,
    /// Present only for `opt`.
    pub value: Option<Scalar>,
    pub time_ms: f64,
    pub p1_iters: usize,
    pub p2_iters: usize,
    pub labels_created: usize,
    pub labels_pruned_bound: usize,
    pub labels_pruned_dom: usize,
    pub labels_pruned_ub: usize,
}

impl BenchRecord {
    fn new(instance: &str, algo: Algo) -> Self {
        BenchRecord {
            instance: instance.to_string(),
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
        }
    }

    pub fn fields(&self) -> [String; 11] {
        [
            self.instance.clone(),
            self.algo.name().to_string(),
            self.status.as_str().to_string(),
            self.value.as_ref().map(format_scalar).unwrap_or_default(),
            format!("{:.3}", self.time_ms),
            self.p1_iters.to_string(),
            self.p2_iters.to_string(),
            self.labels_created.to_string(),
            self.labels_pruned_bound.to_string(),
            self.labels_pruned_dom.to_string(),
            self.labels_pruned_ub.to_string(),
        ]
    }
}

/// Runs one algorithm on one instance under `timeout`.
pub fn run_one(name: &str, inst: &Instance, algo: Algo, timeout: Option<Duration>) -> BenchRecord {
    let mut rec = BenchRecord::new(name, algo);
    let start = Instant::now();
    let (dag, ub): (WindowedDag, UbProvider) = match inst {
        Instance::Dag(d) => (d.clone(), UbProvider::Trivial),
        Instance::Huc(h) => match build_graph(h) {
            Ok(g) => {
                let ub = nmckp_provider(h, &g, NmckpBound::Lp);
                (g.dag, ub)
            }
            Err(_) => return rec,
        },
    };
    match algo {
        Algo::Borwin => {
            let opts = SolverOptions {
                ub,
                time_limit: timeout,
                ..Default::default()
            };
            if let Ok(sol) = solve(&dag, &opts) {
                rec.status = match sol.status {
                    SolveStatus::Optimal => BenchStatus::Opt,
                    SolveStatus::Infeasible => BenchStatus::Infeasible,
                    SolveStatus::Timeout => BenchStatus::Timeout,
                };
                if rec.status == BenchStatus::Opt {
                    rec.value = sol.value().cloned();
                }
                rec.p1_iters = sol.phase1_iterations();
                rec.p2_iters = sol.stats.phase2_iterations;
                rec.labels_created = sol.stats.labels_created;
                rec.labels_pruned_bound = sol.stats.labels_pruned_bound;
                rec.labels_pruned_dom = sol.stats.labels_pruned_dominance;
                rec.labels_pruned_ub = sol.stats.labels_pruned_ub;
            }
        }
        Algo::Rcsp => match rcsp_label_setting_until(&dag, timeout.map(|t| start + t)) {
            None => rec.status = BenchStatus::Timeout,
            Some((res, stats)) => {
                rec.status = if res.is_feasible() { BenchStatus::Opt } else { BenchStatus::Infeasible };
                rec.value = res.value().cloned();
                rec.labels_created = stats.labels_created;
                rec.labels_pruned_dom = stats.labels_dominated;
            }
        },
        Algo::Oracle => match brute_force_with(&dag, BruteMode::Fast, DEFAULT_PATH_CAP) {
            Err(_) => rec.status = BenchStatus::Timeout,
            Ok(res) => {
                rec.status = if res.is_feasible() { BenchStatus::Opt } else { BenchStatus::Infeasible };
                rec.value = res.value().cloned();
                rec.labels_created = res.total_paths;
            }
        },
    }
    rec.time_ms = start.elapsed().as_secs_f64() * 1e3;
    if timeout.is_some_and(|t| start.elapsed() > t) && rec.status != BenchStatus::Error {
        rec.status = BenchStatus::Timeout;
        rec.value = None;
    }
    rec
}

pub fn run_bench(instances: &[(String, Instance)], algos: &[Algo], timeout: Option<Duration>) -> Vec<BenchRecord> {
    instances
        .iter()
        .flat_map(|(name, inst)| algos.iter().map(move |&a| run_one(name, inst, a, timeout)))
        .collect()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Rows `algo,solved,time_ms`: the `solved`-th fastest solve of each
/// algorithm took `time_ms`.
pub fn write_cactus<W: Write>(records: &[BenchRecord], algos: &[Algo], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["algo", "solved", "time_ms"])?;
    for algo in algos {
        let mut times: Vec<f64> = records
            .iter()
            .filter(|r| r.algo == *algo && matches!(r.status, BenchStatus::Opt | BenchStatus::Infeasible))
            .map(|r| r.time_ms)
            .collect();
        times.sort_by(f64::total_cmp);
        for (k, t) in times.iter().enumerate() {
            w.write_record([algo.name().to_string(), (k + 1).to_string(), format!("{t:.3}")])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Instances where two `opt` rows disagree on the value.
pub fn disagreements(records: &[BenchRecord]) -> Vec<String> {
    let mut out = Vec::new();
    for r in records.iter().filter(|r| r.status == BenchStatus::Opt) {
        let clash = records
            .iter()
            .any(|o| o.instance == r.instance && o.status == BenchStatus::Opt && o.value != r.value);
        if clash && !out.contains(&r.instance) {
            out.push(r.instance.clone());
        }
    }
    out
}
