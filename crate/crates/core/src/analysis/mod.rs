//! Post-hoc metrics over traces and closed-form guarantees.

pub mod bounds;
pub mod complexity;
pub mod gap;
pub mod regret;

pub use bounds::{bound_calculators, tau_star, Bound, BoundInputs, BoundReport};
pub use complexity::{
    sample_complexity, sample_complexity_for, ComplexityMeter, SampleComplexityReport,
    SegmentComplexity,
};
pub use gap::{
    full_set_gap, horizon_optimal_arm, min_gap_bruteforce, realization_gap, GapReport, GapWitness,
    Round, RoundRobinRealization,
};
pub use regret::{pseudo_regret, RegretMeter};
