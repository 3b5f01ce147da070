//! Success probabilities: exact enumeration and Monte-Carlo simulation.

mod fast;
pub mod exact;
pub mod sim;

pub use exact::{evaluate_pattern, exact_success_probability, necessity_check, ExactOptions, ExactResult, Known, PatternOutcome};
pub use sim::{monte_carlo, monte_carlo_with, Enforcement, McResult, Outcomes, SimPolicy, Simulator, TrialResult};
