//! First phase: dichotomic search over the supported points of the
//! bi-objective relaxation (maximise value, maximise resource) for the pair
//! that straddles the sink's lower bound.
//!
//! The outcome carries the multiplier δ used by the second phase, the value
//! bound `μ_δ(x_A) − δ·β` and the search space every optimum lies in.
//!
//! Instances whose unconstrained optimum overshoots the sink's upper bound
//! are handled by mirroring resources (`R ↦ −R`, windows flipped), which
//! turns the upper bound into a lower bound. Everything stored in a
//! [`StraddlingPair`] except the two paths is expressed in those mirrored
//! ("oriented") coordinates.

use std::borrow::Cow;

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{BiPoint, GraphError, Path, WindowedDag};
use crate::longest::{lagrangian_value, longest_path};
use crate::scalar::{floor, is_integral, Multiplier, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// The unconstrained optimum uses too little resource.
    Lid,
    /// The unconstrained optimum uses too much resource; coordinates mirrored.
    Lie,
}

impl Orientation {
    /// Maps an original-coordinate resource into oriented coordinates.
    pub fn orient(&self, r: &Scalar) -> Scalar {
        match self {
            Orientation::Lid => r.clone(),
            Orientation::Lie => -r,
        }
    }

    /// The instance as seen in oriented coordinates.
    pub fn apply<'a>(&self, dag: &'a WindowedDag) -> Cow<'a, WindowedDag> {
        match self {
            Orientation::Lid => Cow::Borrowed(dag),
            Orientation::Lie => Cow::Owned(dag.mirrored()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StraddlingPair {
    /// Supported path below the sink's lower bound (original coordinates).
    pub x_a: Path,
    /// Supported path at or above the sink's lower bound (original coordinates).
    pub x_b: Path,
    pub delta: Scalar,
    /// `μ_δ(x_A) − δ·β`: an upper bound on the value of any feasible path.
    pub ub_value: Scalar,
    /// `μ_δ(x_A) = μ_δ(x_B)`.
    pub ub_mu: Scalar,
    pub orientation: Orientation,
    /// Oriented sink lower bound.
    pub beta: Scalar,
    /// Oriented sink upper bound (`None` = unbounded).
    pub alpha: Option<Scalar>,
}

impl StraddlingPair {
    pub fn point_a(&self) -> BiPoint {
        BiPoint::new(self.x_a.value.clone(), self.orientation.orient(&self.x_a.resource))
    }

    pub fn point_b(&self) -> BiPoint {
        BiPoint::new(self.x_b.value.clone(), self.orientation.orient(&self.x_b.resource))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum PhaseOneOutcome {
    /// The value-maximal path already satisfies the sink window; δ = 0.
    SolvedAtSp { path: Path },
    /// No path reaches the sink's lower bound even when maximising resource.
    Infeasible,
    Pair(StraddlingPair),
}

impl PhaseOneOutcome {
    /// Multiplier and orientation handed to the second phase.
    pub fn multiplier(&self) -> Option<(Scalar, Orientation)> {
        match self {
            PhaseOneOutcome::SolvedAtSp { .. } => Some((Scalar::zero(), Orientation::Lid)),
            PhaseOneOutcome::Infeasible => None,
            PhaseOneOutcome::Pair(p) => Some((p.delta.clone(), p.orientation)),
        }
    }

    pub fn pair(&self) -> Option<&StraddlingPair> {
        match self {
            PhaseOneOutcome::Pair(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Phase1Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("outcome is not a straddling pair")]
    NotAPair,
}

/// One dichotomy step: the current pair, the multiplier tried and the
/// maximiser it produced (all oriented).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase1Step {
    pub iteration: usize,
    pub a: BiPoint,
    pub b: BiPoint,
    pub delta: Multiplier,
    pub c: BiPoint,
}

impl std::fmt::Display for Phase1Step {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "iter={} xA=({}, {}) xB=({}, {}) delta={} xC=({}, {})",
            self.iteration, self.a.v1, self.a.v2, self.b.v1, self.b.v2, self.delta, self.c.v1, self.c.v2
        )
    }
}

pub fn run_phase1(dag: &WindowedDag) -> Result<PhaseOneOutcome, Phase1Error> {
    run_phase1_traced(dag, &mut Vec::new())
}

/// [`run_phase1`], recording one [`Phase1Step`] per maximisation.
pub fn run_phase1_traced(dag: &WindowedDag, trace: &mut Vec<Phase1Step>) -> Result<PhaseOneOutcome, Phase1Error> {
    let sink_window = dag.window(dag.sink()).clone();
    let sp = longest_path(dag, &Multiplier::zero(), dag.source())?.path;
    if sink_window.contains(&sp.resource) {
        return Ok(PhaseOneOutcome::SolvedAtSp { path: sp });
    }
    let (orientation, first) = if sink_window.lo.as_ref().is_some_and(|lo| &sp.resource < lo) {
        (Orientation::Lid, sp)
    } else {
        // overshoot: among value maximisers take the one using least resource
        let low = longest_path(&dag.mirrored(), &Multiplier::zero(), dag.source())?.path;
        let low = dag.path(dag.source(), &low.arcs)?;
        if sink_window.contains(&low.resource) || sink_window.lo.as_ref().is_some_and(|lo| &low.resource < lo) {
            // value maximisers on both sides of the window (or inside it): δ = 0
            // is already dual-optimal
            return Ok(PhaseOneOutcome::SolvedAtSp { path: low });
        }
        (Orientation::Lie, low)
    };
    let odag = orientation.apply(dag);
    let odag = odag.as_ref();
    let beta = odag
        .window(odag.sink())
        .lo
        .clone()
        .ok_or_else(|| Phase1Error::Invariant("oriented sink has no lower bound".into()))?;
    let alpha = odag.window(odag.sink()).hi.clone();

    let mut x_a = odag.path(odag.source(), &first.arcs)?;
    let mut x_b = longest_path(odag, &Multiplier::Infinite, odag.source())?.path;
    if x_b.resource < beta {
        return Ok(PhaseOneOutcome::Infeasible);
    }

    let mut iteration = 0;
    let delta = loop {
        if x_b.resource <= x_a.resource {
            return Err(Phase1Error::Invariant(format!(
                "pair not ordered by resource: R(xB)={} <= R(xA)={}",
                x_b.resource, x_a.resource
            )));
        }
        let delta = (&x_a.value - &x_b.value) / (&x_b.resource - &x_a.resource);
        iteration += 1;
        let x_c = longest_path(odag, &Multiplier::Finite(delta.clone()), odag.source())?.path;
        trace.push(Phase1Step {
            iteration,
            a: x_a.point(),
            b: x_b.point(),
            delta: Multiplier::Finite(delta.clone()),
            c: x_c.point(),
        });
        if x_c.point().pareto_equal(&x_a.point()) || x_c.point().pareto_equal(&x_b.point()) {
            break delta;
        }
        if x_c.resource >= beta {
            x_b = x_c;
        } else {
            x_a = x_c;
        }
    };

    let ub_mu = &x_a.value + &delta * &x_a.resource;
    let ub_value = &ub_mu - &delta * &beta;
    Ok(PhaseOneOutcome::Pair(StraddlingPair {
        x_a: dag.path(dag.source(), &x_a.arcs)?,
        x_b: dag.path(dag.source(), &x_b.arcs)?,
        delta,
        ub_value,
        ub_mu,
        orientation,
        beta,
        alpha,
    }))
}

/// True when every arc value is an integer, so any path value is too.
pub fn integral_values(dag: &WindowedDag) -> bool {
    dag.arcs().iter().all(|a| is_integral(&a.value))
}

/// The pair's value bound, floored when all path values are integers.
pub fn integer_round_ub(outcome: &PhaseOneOutcome, integral_values: bool) -> Result<Scalar, Phase1Error> {
    let pair = outcome.pair().ok_or(Phase1Error::NotAPair)?;
    Ok(if integral_values {
        floor(&pair.ub_value)
    } else {
        pair.ub_value.clone()
    })
}

/// Region of the (value, resource) plane that contains every optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    pub beta: Scalar,
    pub alpha: Option<Scalar>,
    pub ub_value: Scalar,
    pub ub_mu: Scalar,
    pub delta: Scalar,
    pub orientation: Orientation,
}

impl SearchSpace {
    /// Membership of an oriented point.
    pub fn contains_point(&self, p: &BiPoint) -> bool {
        p.v2 >= self.beta
            && self.alpha.as_ref().is_none_or(|a| &p.v2 <= a)
            && p.v1 <= self.ub_value
            && &p.v1 + &self.delta * &p.v2 <= self.ub_mu
    }

    /// Membership of a path given in original coordinates.
    pub fn contains(&self, path: &Path) -> bool {
        self.contains_point(&BiPoint::new(path.value.clone(), self.orientation.orient(&path.resource)))
    }
}

pub fn search_space(outcome: &PhaseOneOutcome) -> Result<SearchSpace, Phase1Error> {
    let p = outcome.pair().ok_or(Phase1Error::NotAPair)?;
    Ok(SearchSpace {
        beta: p.beta.clone(),
        alpha: p.alpha.clone(),
        ub_value: p.ub_value.clone(),
        ub_mu: p.ub_mu.clone(),
        delta: p.delta.clone(),
        orientation: p.orientation,
    })
}

/// `θ(λ) = max over paths of V + λ·(R − β)` with windows ignored; `None`
/// when the sink is unreachable.
pub fn lagrangian_theta(dag: &WindowedDag, lambda: &Scalar, beta: &Scalar) -> Option<Scalar> {
    lagrangian_value(dag, lambda, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example_dag;
    use crate::graph::{Window, WindowedDag};
    use crate::scalar::{int, ratio};

    fn with_sink_window(dag: &WindowedDag, w: Window) -> WindowedDag {
        let mut windows = dag.windows().to_vec();
        windows[dag.sink().0] = w;
        WindowedDag::new(windows, dag.arcs().to_vec(), dag.source(), dag.sink())
            .unwrap()
            .with_labels(dag.labels().to_vec())
    }

    #[test]
    fn example_pair() {
        let dag = example_dag();
        let mut trace = Vec::new();
        let out = run_phase1_traced(&dag, &mut trace).unwrap();
        let p = out.pair().unwrap();
        assert_eq!(p.delta, ratio(1, 19));
        assert_eq!(p.point_a(), BiPoint::new(int(33), int(16)));
        assert_eq!(p.point_b(), BiPoint::new(int(32), int(35)));
        assert_eq!(p.ub_mu, ratio(643, 19));
        assert_eq!(p.ub_value, ratio(623, 19));
        assert_eq!(p.orientation, Orientation::Lid);
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[0].delta, Multiplier::Finite(ratio(7, 24)));
        assert_eq!(trace[0].b, BiPoint::new(int(26), int(40)));
        assert_eq!(trace[0].c, BiPoint::new(int(32), int(35)));
        assert_eq!(integer_round_ub(&out, integral_values(&dag)).unwrap(), int(32));
        assert_eq!(integer_round_ub(&out, false).unwrap(), ratio(623, 19));
    }

    #[test]
    fn solved_at_sp_when_optimum_in_window() {
        let dag = with_sink_window(&example_dag(), Window::new(int(10), int(20)));
        match run_phase1(&dag).unwrap() {
            PhaseOneOutcome::SolvedAtSp { path } => assert_eq!(path.value, int(33)),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            integer_round_ub(&run_phase1(&dag).unwrap(), true),
            Err(Phase1Error::NotAPair)
        );
    }

    #[test]
    fn infeasible_above_max_resource() {
        let dag = with_sink_window(&example_dag(), Window::new(int(41), int(50)));
        assert_eq!(run_phase1(&dag).unwrap(), PhaseOneOutcome::Infeasible);
    }

    #[test]
    fn overshoot_is_mirrored() {
        // max-value path uses 16; cap the sink below it
        let dag = with_sink_window(&example_dag(), Window::new(int(0), int(12)));
        let out = run_phase1(&dag).unwrap();
        match &out {
            PhaseOneOutcome::Infeasible => {}
            other => panic!("no path uses at most 12, got {other:?}"),
        }
        let dag = with_sink_window(&example_dag(), Window::new(int(0), int(15)));
        assert_eq!(run_phase1(&dag).unwrap(), PhaseOneOutcome::Infeasible);
        let dag = with_sink_window(&example_dag(), Window::at_least(int(0)));
        assert!(matches!(run_phase1(&dag).unwrap(), PhaseOneOutcome::SolvedAtSp { .. }));
    }

    #[test]
    fn mirrored_pair_straddles() {
        // make the heavy path s,1,3,2,p (56, 35) the value maximiser
        let base = example_dag();
        let mut arcs = base.arcs().to_vec();
        arcs[4].value = int(30);
        let dag = WindowedDag::new(base.windows().to_vec(), arcs, base.source(), base.sink())
            .unwrap()
            .with_labels(base.labels().to_vec());
        let out = run_phase1(&dag).unwrap();
        let p = out.pair().expect("pair");
        assert_eq!(p.orientation, Orientation::Lie);
        assert_eq!(p.beta, int(-29));
        assert!(p.point_a().v2 < p.beta && p.point_b().v2 >= p.beta);
        let mu = |pt: BiPoint| pt.v1 + &p.delta * pt.v2;
        assert_eq!(mu(p.point_a()), mu(p.point_b()));
        assert_eq!(p.ub_value, &p.ub_mu - &p.delta * &p.beta);
    }

    #[test]
    fn search_space_membership() {
        let dag = example_dag();
        let out = run_phase1(&dag).unwrap();
        let omega = search_space(&out).unwrap();
        let path = |l: &[&str]| {
            let arcs: Vec<_> = l
                .windows(2)
                .map(|w| dag.find_arc(dag.vertex_by_label(w[0]).unwrap(), dag.vertex_by_label(w[1]).unwrap()).unwrap())
                .collect();
            dag.path(dag.source(), &arcs).unwrap()
        };
        assert!(omega.contains(&path(&["s", "1", "2", "p"])));
        assert!(!omega.contains(&path(&["s", "1", "3", "p"])));
        assert!(!omega.contains(&path(&["s", "1", "3", "2", "p"])));
        assert_eq!(search_space(&PhaseOneOutcome::Infeasible), Err(Phase1Error::NotAPair));
    }

    #[test]
    fn theta_on_example() {
        let dag = example_dag();
        assert_eq!(lagrangian_theta(&dag, &int(0), &int(20)).unwrap(), int(33));
        assert_eq!(lagrangian_theta(&dag, &ratio(1, 19), &int(20)).unwrap(), ratio(623, 19));
        assert_eq!(lagrangian_theta(&dag, &int(1), &int(20)).unwrap(), int(47));
    }
}
