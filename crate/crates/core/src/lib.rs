//! Constrained scheduling for fleets of machines with distinct speeds and
//! working/idle power ratings.
//!
//! Four problems are covered, for divisible workloads and atomic jobs:
//!
//! * minimize makespan under an instantaneous power cap ([`power`]),
//! * minimize energy under a power cap ([`power`]),
//! * minimize makespan under an energy budget ([`energy_budget`]),
//! * minimize energy under a makespan budget ([`makespan_budget`]).
//!
//! The divisible budget-constrained problems are solved exactly; the rest use
//! approximation algorithms whose proven bounds the [`oracle`] module can
//! certify empirically through brute-force enumeration. All quantities are
//! exact rationals so bound comparisons are never blurred by rounding.

pub mod energy_budget;
pub mod io;
pub mod kernels;
pub mod makespan_budget;
pub mod model;
pub mod oracle;
pub mod power;
pub mod rational;

pub use model::{
    energy, makespan, power_draw, validate_instance, verify_schedule, Constraint, ConstraintKind,
    FeasibilityReport, Fleet, Guarantee, Infeasibility, JobSpec, Machine, ModelError, Schedule,
    SolveOutcome, SolveResult, ValidationReport,
};
pub use rational::{format_rational, parse_rational, Rational};
