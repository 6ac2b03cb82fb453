//! Exact solver for longest paths in acyclic graphs under per-vertex windows
//! on a cumulative resource.
//!
//! A first phase finds the Lagrangian multiplier δ of the sink's resource
//! bound by a dichotomic search over supported bi-objective points; a second
//! phase enumerates hybrid paths in decreasing `V + δ·R` until the incumbent
//! is proven optimal. A single hydro unit commitment model compiles to the
//! same graph form.
//!
//! ```
//! use borwin::{fixtures::example_dag, solve, SolverOptions};
//!
//! let dag = example_dag();
//! let sol = solve(&dag, &SolverOptions::default()).unwrap();
//! assert_eq!(dag.format_path(sol.path.as_ref().unwrap()), "s,1,2,p");
//! assert_eq!(sol.value().unwrap(), &borwin::scalar::int(29));
//! ```

pub mod baselines;
pub mod bench;
pub mod fixtures;
pub mod generator;
pub mod graph;
pub mod huc;
pub mod io;
pub mod longest;
pub mod nmckp;
pub mod phase1;
pub mod phase2;
pub mod scalar;
pub mod solver;

pub use graph::{Arc, ArcId, Path, VertexId, Window, WindowedDag};
pub use nmckp::UbProvider;
pub use phase1::{run_phase1, PhaseOneOutcome};
pub use phase2::{run_phase2, run_phase2_with, Phase2Options};
pub use scalar::{Multiplier, Scalar};
pub use solver::{solve, SolveStatus, Solution, SolverOptions};
