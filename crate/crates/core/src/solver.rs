//! End-to-end solve: first phase for the multiplier, second phase for the
//! exact optimum.

use std::time::{Duration, Instant};

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{Path, WindowedDag};
use crate::nmckp::UbProvider;
use crate::phase1::{run_phase1_traced, Orientation, Phase1Error, Phase1Step, PhaseOneOutcome};
use crate::phase2::{run_phase2_with, Phase2Options, Phase2Stats, Phase2Status, TraceEvent};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub ub: UbProvider,
    pub dominance: bool,
    pub prune_mu: bool,
    pub prune_ub: bool,
    pub trace: bool,
    pub time_limit: Option<Duration>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            ub: UbProvider::Trivial,
            dominance: true,
            prune_mu: true,
            prune_ub: true,
            trace: false,
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Timeout,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "opt",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Phase1(#[from] Phase1Error),
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    /// Optimal path (incumbent on timeout), original coordinates.
    pub path: Option<Path>,
    pub phase1: PhaseOneOutcome,
    pub phase1_steps: Vec<Phase1Step>,
    pub delta: Option<Scalar>,
    pub orientation: Orientation,
    pub stats: Phase2Stats,
    pub trace: Vec<TraceEvent>,
    pub elapsed: Duration,
}

impl Solution {
    pub fn value(&self) -> Option<&Scalar> {
        self.path.as_ref().map(|p| &p.value)
    }

    pub fn phase1_iterations(&self) -> usize {
        self.phase1_steps.len()
    }
}

pub fn solve(dag: &WindowedDag, opts: &SolverOptions) -> Result<Solution, SolveError> {
    let start = Instant::now();
    let mut steps = Vec::new();
    let phase1 = run_phase1_traced(dag, &mut steps)?;
    let (delta, orientation) = match phase1.multiplier() {
        Some(m) => m,
        None => {
            return Ok(Solution {
                status: SolveStatus::Infeasible,
                path: None,
                phase1,
                phase1_steps: steps,
                delta: None,
                orientation: Orientation::Lid,
                stats: Phase2Stats::default(),
                trace: Vec::new(),
                elapsed: start.elapsed(),
            })
        }
    };
    // the value-maximal path may still break an intermediate window, so
    // δ = 0 outcomes go through the second phase as well
    debug_assert!(matches!(phase1, PhaseOneOutcome::Pair(_)) || delta.is_zero());
    let odag = orientation.apply(dag);
    let p2 = Phase2Options {
        dominance: opts.dominance,
        prune_mu: opts.prune_mu,
        prune_ub: opts.prune_ub,
        trace: opts.trace,
        deadline: opts.time_limit.map(|d| start + d),
        orientation,
    };
    let res = run_phase2_with(&odag, &delta, &opts.ub, &p2);
    let status = match res.status {
        Phase2Status::Optimal => SolveStatus::Optimal,
        Phase2Status::Infeasible => SolveStatus::Infeasible,
        Phase2Status::Timeout => SolveStatus::Timeout,
    };
    let path = res
        .best
        .map(|p| dag.path(dag.source(), &p.arcs).expect("same arc ids"));
    Ok(Solution {
        status,
        path,
        phase1,
        phase1_steps: steps,
        delta: Some(delta),
        orientation,
        stats: res.stats,
        trace: res.trace,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example_dag;
    use crate::graph::{check_windows, Window};
    use crate::scalar::{int, ratio};

    #[test]
    fn example_end_to_end() {
        let dag = example_dag();
        let sol = solve(&dag, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.value(), Some(&int(29)));
        assert_eq!(sol.delta, Some(ratio(1, 19)));
        assert_eq!(sol.phase1_iterations(), 2);
        assert!(check_windows(&dag, sol.path.as_ref().unwrap()).is_feasible());
    }

    #[test]
    fn overshoot_goes_through_mirror() {
        let base = example_dag();
        let mut arcs = base.arcs().to_vec();
        arcs[4].value = int(30);
        let dag = WindowedDag::new(base.windows().to_vec(), arcs, base.source(), base.sink()).unwrap();
        let sol = solve(&dag, &SolverOptions::default()).unwrap();
        let oracle = crate::baselines::brute_force(&dag).unwrap();
        assert_eq!(sol.orientation, Orientation::Lie);
        assert_eq!(sol.value(), oracle.value());
    }

    #[test]
    fn intermediate_window_breaks_value_maximiser() {
        // s,1,3,p fits the sink window but not vertex 3's upper bound
        let base = example_dag();
        let mut w = base.windows().to_vec();
        w[base.sink().0] = Window::new(int(10), int(20));
        w[3] = Window::new(int(0), int(9));
        let dag = WindowedDag::new(w, base.arcs().to_vec(), base.source(), base.sink()).unwrap();
        let sol = solve(&dag, &SolverOptions::default()).unwrap();
        assert_eq!(sol.value(), crate::baselines::brute_force(&dag).unwrap().value());
    }

    #[test]
    fn infeasible_from_phase_one() {
        let base = example_dag();
        let mut w = base.windows().to_vec();
        w[base.sink().0] = Window::new(int(41), int(50));
        let dag = WindowedDag::new(w, base.arcs().to_vec(), base.source(), base.sink()).unwrap();
        let sol = solve(&dag, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert_eq!(sol.status.as_str(), "infeasible");
    }
}
