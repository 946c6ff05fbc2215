//! Co-learning dynamics between a human operator and an AI agent.
//!
//! A six-stock system dynamics model (expertise, competence, shared
//! awareness, trust, delegated authority, cognitive load) with five feedback
//! loops, integrated as a hybrid system with a hysteretic cognitive-load
//! guard. On top of the simulator sit a time-resolved proportionality
//! assessment, loop-polarity diagnostics, sweeps and grid-search calibration.
//!
//! ```
//! use colearn_core::{analysis, scenario};
//!
//! let run = analysis::evaluate(&scenario::builtin_baseline()).unwrap();
//! assert_eq!(run.trajectory.len(), 101);
//! println!("verdict: {}", run.verdict.outcome);
//! ```

pub mod analysis;
pub mod integrator;
pub mod model;
pub mod proportionality;
pub mod scenario;

pub use analysis::{evaluate, Run};
pub use integrator::{simulate, Method, SolverConfig, Trajectory};
pub use model::{StockState, Violations};
pub use scenario::{builtin_baseline, parse_scenario, write_scenario, Scenario};
