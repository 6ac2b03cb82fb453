//! Single hydro unit commitment: instance model, compilation to a
//! window-constrained DAG over (period, level, lock) states, schedule
//! legality, an exhaustive schedule oracle and MILP export.
//!
//! Operating points are listed idle first; `flow` and `power` of point `i`
//! are the increments over point `i - 1`, so level `i` turbines
//! `F_i = D_1 + … + D_i` and earns `C_t^i = W_t^1 + … + W_t^i` in period `t`.
//!
//! The lock `l` of a state counts the periods left before the level may move
//! in the opposite direction: `l > 0` after an increase, `l < 0` after a
//! decrease, drifting back to 0 one step per period.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{Arc, Path, VertexId, Window, WindowedDag};
use crate::nmckp::{Item, NestedMckp, NmckpBound, NmckpProvider, Stage, UbProvider};
use crate::scalar::{to_decimal_string, Scalar};
use crate::solver::{solve, SolveStatus, SolverOptions, Solution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatingPoint {
    pub flow: Scalar,
    pub power: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InitialState {
    pub i: usize,
    pub l: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HucInstance {
    pub periods: usize,
    pub points: Vec<OperatingPoint>,
    pub ramp_up: Scalar,
    pub ramp_down: Scalar,
    pub min_updown: usize,
    pub prices: Vec<Scalar>,
    pub phi1: Scalar,
    pub phi2: Scalar,
    /// Lower bound on the volume used through period `t` (index `t - 1`).
    pub win_lo: Vec<Scalar>,
    pub win_hi: Vec<Scalar>,
    pub initial: InitialState,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HucError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("no schedule meets every volume window")]
    Infeasible,
    #[error("deadline reached before optimality was proven")]
    Timeout,
    #[error(transparent)]
    Solve(#[from] crate::solver::SolveError),
}

/// Per-period, per-point values `W_t^i = Λ_t·P_i + (Φ² − Φ¹)·D_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    rows: Vec<Vec<Scalar>>,
}

impl ValueTable {
    /// `W_t^i` for `t` in `1..=T`.
    pub fn point_value(&self, t: usize, i: usize) -> &Scalar {
        &self.rows[t - 1][i]
    }

    /// `C_t^i`, the value of running at level `i` in period `t`.
    pub fn level_value(&self, t: usize, i: usize) -> Scalar {
        self.rows[t - 1][..=i].iter().sum()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }
}

impl HucInstance {
    pub fn levels(&self) -> usize {
        self.points.len()
    }

    pub fn validate(&self) -> Result<(), HucError> {
        let bad = |m: String| Err(HucError::InvalidInstance(m));
        let t = self.periods;
        if t == 0 {
            return bad("T must be at least 1".into());
        }
        if self.points.is_empty() {
            return bad("at least the idle point is required".into());
        }
        if !self.points[0].flow.is_zero() || !self.points[0].power.is_zero() {
            return bad("point 0 must be idle (D = 0, P = 0)".into());
        }
        if let Some(k) = self.points.iter().skip(1).position(|p| p.flow <= Scalar::zero()) {
            return bad(format!("point {} must have a positive flow increment", k + 1));
        }
        if self.min_updown == 0 {
            return bad("min_updown must be at least 1".into());
        }
        if self.ramp_up < Scalar::zero() || self.ramp_down < Scalar::zero() {
            return bad("ramps must be nonnegative".into());
        }
        for (name, len) in [("prices", self.prices.len()), ("win_lo", self.win_lo.len()), ("win_hi", self.win_hi.len())] {
            if len != t {
                return bad(format!("{name} has {len} entries, expected T = {t}"));
            }
        }
        if let Some(k) = (0..t).find(|&k| self.win_lo[k] > self.win_hi[k]) {
            return bad(format!("window of period {} has lo > hi", k + 1));
        }
        if self.initial.i >= self.levels() {
            return bad(format!("initial level {} out of range", self.initial.i));
        }
        if self.initial.l.unsigned_abs() as usize >= self.min_updown {
            return bad(format!("initial lock {} outside ±(min_updown - 1)", self.initial.l));
        }
        Ok(())
    }

    pub fn value_table(&self) -> ValueTable {
        let water = &self.phi2 - &self.phi1;
        let rows = self
            .prices
            .iter()
            .map(|price| self.points.iter().map(|p| price * &p.power + &water * &p.flow).collect())
            .collect();
        ValueTable { rows }
    }

    /// Cumulative flow `F_i` of every level.
    pub fn level_flows(&self) -> Vec<Scalar> {
        let mut acc = Scalar::zero();
        self.points
            .iter()
            .map(|p| {
                acc += &p.flow;
                acc.clone()
            })
            .collect()
    }

    /// Vertex count of the state graph before reachability pruning.
    pub fn full_vertex_count(&self) -> usize {
        self.periods * self.levels() * (2 * self.min_updown - 1) + 2
    }

    fn window(&self, t: usize) -> Window {
        Window::new(self.win_lo[t - 1].clone(), self.win_hi[t - 1].clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HucVertex {
    Source,
    State { t: usize, i: usize, l: i64 },
    Sink,
}

impl fmt::Display for HucVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HucVertex::Source => f.write_str("s"),
            HucVertex::Sink => f.write_str("p"),
            HucVertex::State { t, i, l } => write!(f, "({t},{i},{l})"),
        }
    }
}

/// The compiled state graph, restricted to vertices on source-to-sink paths.
#[derive(Debug, Clone)]
pub struct HucGraph {
    pub dag: WindowedDag,
    /// State of every vertex of `dag`.
    pub states: Vec<HucVertex>,
    index: HashMap<HucVertex, VertexId>,
    /// Vertices constructed before pruning.
    pub full_vertex_count: usize,
    pub full_arc_count: usize,
}

impl HucGraph {
    pub fn vertex(&self, key: HucVertex) -> Option<VertexId> {
        self.index.get(&key).copied()
    }

    pub fn state(&self, v: VertexId) -> HucVertex {
        self.states[v.0]
    }

    /// Level chosen in each period along a source-to-sink path.
    pub fn schedule(&self, path: &Path) -> Vec<usize> {
        path.vertices
            .iter()
            .filter_map(|&v| match self.states[v.0] {
                HucVertex::State { i, .. } => Some(i),
                _ => None,
            })
            .collect()
    }
}

/// Successor level and lock, or `None` when the move is not allowed.
pub(crate) fn step(inst: &HucInstance, flows: &[Scalar], i: usize, l: i64, j: usize) -> Option<i64> {
    let lmax = inst.min_updown as i64 - 1;
    match j.cmp(&i) {
        std::cmp::Ordering::Equal => Some(l - l.signum()),
        std::cmp::Ordering::Greater => (l >= 0 && &flows[j] - &flows[i] <= inst.ramp_up).then_some(lmax),
        std::cmp::Ordering::Less => (l <= 0 && &flows[i] - &flows[j] <= inst.ramp_down).then_some(-lmax),
    }
}

/// Unpruned state graph; vertex 0 is the source, the last vertex the sink.
pub fn build_full_graph(inst: &HucInstance) -> Result<(WindowedDag, Vec<HucVertex>), HucError> {
    inst.validate()?;
    let levels = inst.levels();
    let width = 2 * inst.min_updown - 1;
    let lmax = inst.min_updown as i64 - 1;
    let n = inst.full_vertex_count();
    let id = |t: usize, i: usize, l: i64| 1 + ((t - 1) * levels + i) * width + (l + lmax) as usize;
    let sink = n - 1;
    let flows = inst.level_flows();
    let values = inst.value_table();
    let level_values: Vec<Vec<Scalar>> = (1..=inst.periods)
        .map(|t| (0..levels).map(|i| values.level_value(t, i)).collect())
        .collect();

    let mut states = vec![HucVertex::Source; n];
    let mut windows = vec![Window::at_least(Scalar::zero()); n];
    for t in 1..=inst.periods {
        for i in 0..levels {
            for l in -lmax..=lmax {
                states[id(t, i, l)] = HucVertex::State { t, i, l };
                windows[id(t, i, l)] = inst.window(t);
            }
        }
    }
    states[sink] = HucVertex::Sink;
    windows[sink] = inst.window(inst.periods);

    let mut arcs = Vec::new();
    let push_from = |from: usize, t_next: usize, i: usize, l: i64, arcs: &mut Vec<Arc>| {
        for j in 0..levels {
            if let Some(l2) = step(inst, &flows, i, l, j) {
                arcs.push(Arc::new(
                    from,
                    id(t_next, j, l2),
                    level_values[t_next - 1][j].clone(),
                    flows[j].clone(),
                ));
            }
        }
    };
    push_from(0, 1, inst.initial.i, inst.initial.l, &mut arcs);
    for t in 1..inst.periods {
        for i in 0..levels {
            for l in -lmax..=lmax {
                push_from(id(t, i, l), t + 1, i, l, &mut arcs);
            }
        }
    }
    for i in 0..levels {
        for l in -lmax..=lmax {
            arcs.push(Arc::new(id(inst.periods, i, l), sink, Scalar::zero(), Scalar::zero()));
        }
    }
    let labels = states.iter().map(|s| s.to_string()).collect();
    let dag = WindowedDag::new(windows, arcs, VertexId(0), VertexId(sink))
        .map_err(|e| HucError::InvalidInstance(e.to_string()))?
        .with_labels(labels);
    Ok((dag, states))
}

/// State graph with unreachable states removed.
pub fn build_graph(inst: &HucInstance) -> Result<HucGraph, HucError> {
    let (full, full_states) = build_full_graph(inst)?;
    let (dag, map) = full.pruned();
    let mut states = vec![HucVertex::Source; dag.vertex_count()];
    for (old, new) in map.iter().enumerate() {
        if let Some(new) = new {
            states[new.0] = full_states[old];
        }
    }
    let index = states.iter().enumerate().map(|(k, s)| (*s, VertexId(k))).collect();
    Ok(HucGraph {
        full_vertex_count: full.vertex_count(),
        full_arc_count: full.arc_count(),
        dag,
        states,
        index,
    })
}

/// Nested knapsack view: one stage per period, items are levels.
pub fn nested_mckp(inst: &HucInstance) -> NestedMckp {
    let flows = inst.level_flows();
    let values = inst.value_table();
    let stages = (1..=inst.periods)
        .map(|t| Stage {
            items: (0..inst.levels())
                .map(|i| Item::new(values.level_value(t, i), flows[i].clone()))
                .collect(),
            window: inst.window(t),
        })
        .collect();
    NestedMckp::new(stages).expect("validated instance gives valid stages")
}

/// Knapsack completion bound wired to the vertices of `graph`.
pub fn nmckp_provider(inst: &HucInstance, graph: &HucGraph, mode: NmckpBound) -> UbProvider {
    let stage_of_vertex = graph
        .states
        .iter()
        .map(|s| match s {
            HucVertex::Source => 0,
            HucVertex::State { t, .. } => *t,
            HucVertex::Sink => inst.periods,
        })
        .collect();
    UbProvider::Nmckp(NmckpProvider {
        problem: nested_mckp(inst),
        stage_of_vertex,
        mode,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LegalityViolation {
    #[error("level out of range in period {t}")]
    Level { t: usize },
    #[error("ramp-up exceeded in period {t}")]
    RampUp { t: usize },
    #[error("ramp-down exceeded in period {t}")]
    RampDown { t: usize },
    /// An increase too soon after a decrease.
    #[error("min-up violated in period {t}")]
    MinUp { t: usize },
    /// A decrease too soon after an increase.
    #[error("min-down violated in period {t}")]
    MinDown { t: usize },
    #[error("path skips or repeats a period")]
    Periods,
}

impl LegalityViolation {
    pub fn rule(&self) -> &'static str {
        match self {
            LegalityViolation::Level { .. } => "level",
            LegalityViolation::RampUp { .. } => "ramp-up",
            LegalityViolation::RampDown { .. } => "ramp-down",
            LegalityViolation::MinUp { .. } => "min-up",
            LegalityViolation::MinDown { .. } => "min-down",
            LegalityViolation::Periods => "periods",
        }
    }
}

/// Checks ramping and min-up/min-down on a level sequence (one entry per
/// period), starting from the instance's initial state. Two consecutive
/// level changes in opposite directions must be at least `min_updown`
/// periods apart.
pub fn check_schedule(inst: &HucInstance, schedule: &[usize]) -> Result<(), LegalityViolation> {
    let flows = inst.level_flows();
    let big_l = inst.min_updown as i64;
    let l0 = inst.initial.l;
    // the initial lock stands for an earlier change
    let mut last: Option<(i64, std::cmp::Ordering)> = match l0.cmp(&0) {
        std::cmp::Ordering::Greater => Some((l0 - big_l + 1, std::cmp::Ordering::Greater)),
        std::cmp::Ordering::Less => Some((-l0 - big_l + 1, std::cmp::Ordering::Less)),
        std::cmp::Ordering::Equal => None,
    };
    let mut prev = inst.initial.i;
    for (k, &i) in schedule.iter().enumerate() {
        let t = k + 1;
        if i >= inst.levels() {
            return Err(LegalityViolation::Level { t });
        }
        let dir = i.cmp(&prev);
        match dir {
            std::cmp::Ordering::Greater if &flows[i] - &flows[prev] > inst.ramp_up => {
                return Err(LegalityViolation::RampUp { t })
            }
            std::cmp::Ordering::Less if &flows[prev] - &flows[i] > inst.ramp_down => {
                return Err(LegalityViolation::RampDown { t })
            }
            _ => {}
        }
        if dir != std::cmp::Ordering::Equal {
            if let Some((tau, d)) = last {
                if d != dir && (t as i64) - tau < big_l {
                    return Err(if dir == std::cmp::Ordering::Greater {
                        LegalityViolation::MinUp { t }
                    } else {
                        LegalityViolation::MinDown { t }
                    });
                }
            }
            last = Some((t as i64, dir));
        }
        prev = i;
    }
    Ok(())
}

/// Legality of a source-to-sink path, judged from its (period, level)
/// sequence alone.
pub fn check_path_legality(inst: &HucInstance, graph: &HucGraph, path: &Path) -> Result<Vec<usize>, LegalityViolation> {
    let mut schedule = Vec::new();
    for &v in &path.vertices {
        if let HucVertex::State { t, i, .. } = graph.state(v) {
            if t != schedule.len() + 1 {
                return Err(LegalityViolation::Periods);
            }
            schedule.push(i);
        }
    }
    if schedule.len() != inst.periods {
        return Err(LegalityViolation::Periods);
    }
    check_schedule(inst, &schedule)?;
    Ok(schedule)
}

/// Cumulative volume after each period.
pub fn volumes(inst: &HucInstance, schedule: &[usize]) -> Vec<Scalar> {
    let flows = inst.level_flows();
    let mut acc = Scalar::zero();
    schedule
        .iter()
        .map(|&i| {
            acc += &flows[i];
            acc.clone()
        })
        .collect()
}

pub fn revenue(inst: &HucInstance, schedule: &[usize]) -> Scalar {
    let table = inst.value_table();
    schedule.iter().enumerate().map(|(k, &i)| table.level_value(k + 1, i)).sum()
}

pub fn within_windows(inst: &HucInstance, schedule: &[usize]) -> bool {
    volumes(inst, schedule)
        .iter()
        .enumerate()
        .all(|(k, v)| inst.win_lo[k] <= *v && *v <= inst.win_hi[k])
}

/// The graph path that realises `schedule`, if any.
pub fn schedule_to_path(inst: &HucInstance, graph: &HucGraph, schedule: &[usize]) -> Option<Path> {
    let flows = inst.level_flows();
    let (mut i, mut l) = (inst.initial.i, inst.initial.l);
    let mut at = graph.vertex(HucVertex::Source)?;
    let mut arcs = Vec::new();
    for (k, &j) in schedule.iter().enumerate() {
        if j >= inst.levels() {
            return None;
        }
        let l2 = step(inst, &flows, i, l, j)?;
        let next = graph.vertex(HucVertex::State { t: k + 1, i: j, l: l2 })?;
        arcs.push(graph.dag.find_arc(at, next)?);
        at = next;
        i = j;
        l = l2;
    }
    arcs.push(graph.dag.find_arc(at, graph.vertex(HucVertex::Sink)?)?);
    graph.dag.path(graph.dag.source(), &arcs).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleOracle {
    pub best: Option<(Vec<usize>, Scalar)>,
    pub legal: usize,
    pub feasible: usize,
}

/// Enumerates all `levels^T` schedules; `None` when there are more than `cap`.
pub fn schedule_oracle(inst: &HucInstance, cap: usize) -> Option<ScheduleOracle> {
    let levels = inst.levels();
    let total = (0..inst.periods).try_fold(1usize, |acc, _| acc.checked_mul(levels))?;
    if total > cap {
        return None;
    }
    let mut out = ScheduleOracle {
        best: None,
        legal: 0,
        feasible: 0,
    };
    let mut s = vec![0usize; inst.periods];
    for _ in 0..total {
        if check_schedule(inst, &s).is_ok() {
            out.legal += 1;
            if within_windows(inst, &s) {
                out.feasible += 1;
                let r = revenue(inst, &s);
                if out.best.as_ref().is_none_or(|(_, b)| &r > b) {
                    out.best = Some((s.clone(), r));
                }
            }
        }
        for d in s.iter_mut().rev() {
            *d += 1;
            if *d < levels {
                break;
            }
            *d = 0;
        }
    }
    Some(out)
}

#[derive(Debug, Clone)]
pub struct HucSolution {
    pub schedule: Vec<usize>,
    pub revenue: Scalar,
    pub volumes: Vec<Scalar>,
    pub solution: Solution,
}

/// Builds the state graph and solves it with the knapsack completion bound.
pub fn solve_huc(inst: &HucInstance) -> Result<HucSolution, HucError> {
    solve_huc_with(inst, SolverOptions::default(), NmckpBound::Lp)
}

pub fn solve_huc_with(inst: &HucInstance, mut opts: SolverOptions, bound: NmckpBound) -> Result<HucSolution, HucError> {
    let graph = build_graph(inst)?;
    opts.ub = nmckp_provider(inst, &graph, bound);
    let solution = solve(&graph.dag, &opts)?;
    match solution.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => return Err(HucError::Infeasible),
        SolveStatus::Timeout => return Err(HucError::Timeout),
    }
    let path = solution.path.as_ref().expect("optimal solution has a path");
    let schedule = graph.schedule(path);
    Ok(HucSolution {
        revenue: revenue(inst, &schedule),
        volumes: volumes(inst, &schedule),
        schedule,
        solution,
    })
}

fn lp_num(q: &Scalar) -> String {
    to_decimal_string(q, 12)
}

fn lp_term(first: bool, coef: &Scalar, var: &str) -> String {
    let neg = coef < &Scalar::zero();
    let mag = if neg { -coef } else { coef.clone() };
    let sign = match (first, neg) {
        (true, false) => String::new(),
        (true, true) => "- ".into(),
        (false, false) => " + ".into(),
        (false, true) => " - ".into(),
    };
    if mag.is_one() {
        format!("{sign}{var}")
    } else {
        format!("{sign}{} {var}", lp_num(&mag))
    }
}

fn lp_expr(terms: &[(Scalar, String)]) -> String {
    let kept: Vec<_> = terms.iter().filter(|(c, _)| !c.is_zero()).collect();
    if kept.is_empty() {
        return "0 x_1_1".into();
    }
    kept.iter().enumerate().map(|(k, (c, v))| lp_term(k == 0, c, v)).collect()
}

/// Writes the mixed-integer model in CPLEX LP format: binary `x_t_i`
/// (level at least `i` in period `t`) and `v_t_i` (switch-on of increment
/// `i` at period `t ≥ 2`). The objective uses the per-point values. Each
/// volume window is one equality row with a bounded slack `s_t`.
pub fn export_milp(inst: &HucInstance, out: &mut dyn Write) -> io::Result<()> {
    inst.validate().map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
    let t_max = inst.periods;
    let incs = inst.levels() - 1;
    let big_l = inst.min_updown;
    let w = inst.value_table();
    let x = |t: usize, i: usize| format!("x_{t}_{i}");
    let v = |t: usize, i: usize| format!("v_{t}_{i}");
    let x0 = |i: usize| if i <= inst.initial.i { Scalar::one() } else { Scalar::zero() };
    let flow = |t: usize, sign: i64| -> Vec<(Scalar, String)> {
        (1..=incs).map(|i| (&inst.points[i].flow * Scalar::from_integer(sign.into()), x(t, i))).collect()
    };

    writeln!(out, "\\ single hydro unit commitment, T={t_max}, levels={}", inst.levels())?;
    writeln!(out, "Maximize")?;
    let obj: Vec<_> = (1..=t_max)
        .flat_map(|t| (1..=incs).map(move |i| (t, i)))
        .map(|(t, i)| (w.point_value(t, i).clone(), x(t, i)))
        .collect();
    writeln!(out, " obj: {}", if incs == 0 { "0".into() } else { lp_expr(&obj) })?;
    writeln!(out, "Subject To")?;
    if incs > 0 {
        for t in 1..=t_max {
            let mut terms: Vec<_> = (1..=t).flat_map(|s| flow(s, 1)).collect();
            terms.push((-Scalar::one(), format!("s_{t}")));
            writeln!(out, " flow_{t}: {} = {}", lp_expr(&terms), lp_num(&inst.win_lo[t - 1]))?;
        }
        for t in 1..=t_max {
            for i in 1..incs {
                writeln!(out, " prec_{t}_{i}: {} - {} >= 0", x(t, i), x(t, i + 1))?;
            }
        }
        for t in 2..=t_max {
            let mut terms = flow(t, 1);
            terms.extend(flow(t - 1, -1));
            writeln!(out, " rampup_{t}: {} <= {}", lp_expr(&terms), lp_num(&inst.ramp_up))?;
            writeln!(out, " rampdown_{t}: {} >= {}", lp_expr(&terms), lp_num(&-&inst.ramp_down))?;
        }
        for t in big_l..=t_max {
            for i in 1..=incs {
                // v_1 does not exist: a switch-on at period 1 is x_1 - x_0 with x_0 fixed
                let vs: Vec<_> = (t + 1 - big_l..=t)
                    .filter_map(|s| match s {
                        1 if x0(i).is_zero() => Some((Scalar::one(), x(1, i))),
                        1 => None,
                        _ => Some((Scalar::one(), v(s, i))),
                    })
                    .collect();
                let mut up = vs.clone();
                up.push((-Scalar::one(), x(t, i)));
                writeln!(out, " minup_{t}_{i}: {} <= 0", lp_expr(&up))?;
                let prior = t - big_l;
                if prior == 0 {
                    let lhs = if vs.is_empty() { format!("0 {}", x(t, i)) } else { lp_expr(&vs) };
                    writeln!(out, " mindown_{t}_{i}: {lhs} <= {}", lp_num(&(Scalar::one() - x0(i))))?;
                } else {
                    let mut down = vs;
                    down.push((Scalar::one(), x(prior, i)));
                    writeln!(out, " mindown_{t}_{i}: {} <= 1", lp_expr(&down))?;
                }
            }
        }
        for t in 2..=t_max {
            for i in 1..=incs {
                writeln!(out, " switch_{t}_{i}: {} - {} + {} >= 0", v(t, i), x(t, i), x(t - 1, i))?;
            }
        }
    }
    if incs > 0 {
        writeln!(out, "Bounds")?;
        for t in 1..=t_max {
            let (lo, hi) = (&inst.win_lo[t - 1], &inst.win_hi[t - 1]);
            let (mut s_lo, mut s_hi) = (Scalar::zero(), hi - lo);
            if t == 1 {
                // ramping out of the initial level, with s_1 = flow_1 - lo_1
                let f0 = &inst.level_flows()[inst.initial.i];
                s_lo = s_lo.max(f0 - &inst.ramp_down - lo);
                s_hi = s_hi.min(f0 + &inst.ramp_up - lo);
            }
            writeln!(out, " {} <= s_{t} <= {}", lp_num(&s_lo), lp_num(&s_hi))?;
        }
        // a change just before period 1 still locks its increment
        let (i0, l0) = (inst.initial.i, inst.initial.l);
        for t in 1..=(l0.unsigned_abs() as usize).min(t_max) {
            match l0.signum() {
                1 if i0 >= 1 => writeln!(out, " {} = 1", x(t, i0))?,
                -1 if i0 < incs => writeln!(out, " {} = 0", x(t, i0 + 1))?,
                _ => {}
            }
        }
    }
    writeln!(out, "Binary")?;
    for t in 1..=t_max {
        for i in 1..=incs {
            writeln!(out, " {}", x(t, i))?;
        }
    }
    for t in 2..=t_max {
        for i in 1..=incs {
            writeln!(out, " {}", v(t, i))?;
        }
    }
    writeln!(out, "End")?;
    Ok(())
}

pub fn export_milp_string(inst: &HucInstance) -> String {
    let mut buf = Vec::new();
    export_milp(inst, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
