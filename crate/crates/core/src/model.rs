//! Machines, fleets, jobs, constraints, and schedules, plus exact evaluation
//! of makespan, energy, and instantaneous power draw.
//!
//! A machine is described by three integer ratings: working power (draw while
//! executing), idle power (draw while on but idle), and speed (work units per
//! second). All machines stay on for the whole makespan, so every schedule is
//! charged the fleet's total idle power over the realized makespan, and each
//! working machine additionally pays its marginal power (working minus idle)
//! for the time it actually runs.

use std::collections::BTreeSet;
use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("fleet has no machines")]
    EmptyFleet,
    #[error("machine {id}: idle power {idle} must be strictly below working power {working}")]
    IdleNotBelowWorking { id: usize, idle: u64, working: u64 },
    #[error("machine {id}: idle power {idle} exceeds working power {working}")]
    IdleAboveWorking { id: usize, idle: u64, working: u64 },
    #[error("machine {id}: speed and working power must be at least 1")]
    ZeroRating { id: usize },
    #[error("machine ids must be unique and dense 0..m-1; position {position} holds id {id}")]
    NonDenseIds { position: usize, id: usize },
    #[error("unknown machine id {id}")]
    UnknownMachine { id: usize },
    #[error("machine {id}: negative work or time in schedule")]
    NegativeAssignment { id: usize },
    #[error("duplicate schedule row for machine {id}")]
    DuplicateRow { id: usize },
    #[error("job list is empty")]
    NoJobs,
    #[error("job {index} has zero weight")]
    ZeroWeight { index: usize },
    #[error("job {index} assigned to unknown machine id {id}")]
    BadJobAssignment { index: usize, id: usize },
    #[error("total work must be positive")]
    NonPositiveWork,
    #[error("constraint value must be positive")]
    NonPositiveConstraint,
    #[error("fleet power ratings overflow")]
    RatingOverflow,
}

/// One machine: integer power ratings and speed, identified by a dense index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    pub id: usize,
    /// Draw while executing work, watts.
    pub working_power: u64,
    /// Draw while on but idle, watts.
    pub idle_power: u64,
    /// Work units per second.
    pub speed: u64,
}

impl Machine {
    pub fn new(id: usize, working_power: u64, idle_power: u64, speed: u64) -> Self {
        Machine {
            id,
            working_power,
            idle_power,
            speed,
        }
    }

    /// Extra draw incurred by activating this machine, watts.
    pub fn marginal_power(&self) -> u64 {
        self.working_power - self.idle_power
    }

    /// Work produced per joule of marginal energy: speed / marginal power.
    pub fn efficiency(&self) -> Rational {
        ratio_of(self.speed, self.marginal_power())
    }

    /// Idle-to-working draw ratio in `[0, 1]`.
    pub fn power_ratio(&self) -> Rational {
        ratio_of(self.idle_power, self.working_power)
    }

    /// Seconds this machine needs for `work` units.
    pub fn time_for(&self, work: &Rational) -> Rational {
        work / rat(self.speed)
    }
}

fn ratio_of(p: u64, q: u64) -> Rational {
    rat(p) / rat(q)
}

/// An ordered machine set with recomputed aggregates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fleet {
    machines: Vec<Machine>,
    gamma_total: u64,
    allow_mu_eq_gamma: bool,
}

impl Fleet {
    /// Builds a fleet, enforcing dense ids, positive ratings, and idle power
    /// strictly below working power.
    pub fn new(machines: Vec<Machine>) -> Result<Self, ModelError> {
        Self::build(machines, false)
    }

    /// Like [`Fleet::new`] but permits `idle == working` power, the degenerate
    /// setting in which energy is proportional to makespan.
    pub fn new_allow_equal_power(machines: Vec<Machine>) -> Result<Self, ModelError> {
        Self::build(machines, true)
    }

    fn build(machines: Vec<Machine>, allow_mu_eq_gamma: bool) -> Result<Self, ModelError> {
        if machines.is_empty() {
            return Err(ModelError::EmptyFleet);
        }
        let mut gamma_total: u64 = 0;
        for (position, m) in machines.iter().enumerate() {
            if m.id != position {
                return Err(ModelError::NonDenseIds { position, id: m.id });
            }
            if m.speed == 0 || m.working_power == 0 {
                return Err(ModelError::ZeroRating { id: m.id });
            }
            if allow_mu_eq_gamma {
                if m.idle_power > m.working_power {
                    return Err(ModelError::IdleAboveWorking {
                        id: m.id,
                        idle: m.idle_power,
                        working: m.working_power,
                    });
                }
            } else if m.idle_power >= m.working_power {
                return Err(ModelError::IdleNotBelowWorking {
                    id: m.id,
                    idle: m.idle_power,
                    working: m.working_power,
                });
            }
            gamma_total = gamma_total
                .checked_add(m.idle_power)
                .ok_or(ModelError::RatingOverflow)?;
        }
        // Reject fleets whose working-power sum overflows; every downstream
        // aggregate is bounded by it.
        machines
            .iter()
            .try_fold(0u64, |acc, m| acc.checked_add(m.working_power))
            .ok_or(ModelError::RatingOverflow)?;
        Ok(Fleet {
            machines,
            gamma_total,
            allow_mu_eq_gamma,
        })
    }

    pub fn len(&self) -> usize {
        self.machines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.machines.is_empty()
    }

    pub fn machines(&self) -> &[Machine] {
        &self.machines
    }

    pub fn machine(&self, id: usize) -> Result<&Machine, ModelError> {
        self.machines
            .get(id)
            .ok_or(ModelError::UnknownMachine { id })
    }

    /// Sum of idle powers over all machines, watts.
    pub fn gamma_total(&self) -> u64 {
        self.gamma_total
    }

    /// Sum of working powers over all machines, watts.
    pub fn mu_total(&self) -> u64 {
        self.machines.iter().map(|m| m.working_power).sum()
    }

    /// Speed of the fastest machine.
    pub fn max_speed(&self) -> u64 {
        self.machines.iter().map(|m| m.speed).max().unwrap_or(0)
    }

    pub fn speed_total(&self) -> u64 {
        self.machines.iter().map(|m| m.speed).sum()
    }

    pub fn min_speed(&self) -> u64 {
        self.machines.iter().map(|m| m.speed).min().unwrap_or(0)
    }

    pub fn min_marginal_power(&self) -> u64 {
        self.machines
            .iter()
            .map(|m| m.marginal_power())
            .min()
            .unwrap_or(0)
    }

    pub fn marginal_power_total(&self) -> u64 {
        self.machines.iter().map(|m| m.marginal_power()).sum()
    }

    /// Machine ids sorted by efficiency, best first; ties broken by lower id.
    /// This is the scan order shared by the greedy solvers.
    pub fn efficiency_order(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.machines.len()).collect();
        // speed/d descending via cross-multiplication: keeps integers exact.
        ids.sort_by(|&a, &b| {
            let ma = &self.machines[a];
            let mb = &self.machines[b];
            let lhs = u128::from(ma.speed) * u128::from(mb.marginal_power());
            let rhs = u128::from(mb.speed) * u128::from(ma.marginal_power());
            rhs.cmp(&lhs).then(a.cmp(&b))
        });
        ids
    }

    pub fn allows_equal_power(&self) -> bool {
        self.allow_mu_eq_gamma
    }
}

/// The workload: either an arbitrarily divisible total, or atomic weights.
#[derive(Debug, Clone, PartialEq)]
pub enum JobSpec {
    Divisible { total_work: Rational },
    Discrete { weights: Vec<u64> },
}

impl JobSpec {
    pub fn divisible(total_work: Rational) -> Result<Self, ModelError> {
        if !total_work.is_positive() {
            return Err(ModelError::NonPositiveWork);
        }
        Ok(JobSpec::Divisible { total_work })
    }

    pub fn discrete(weights: Vec<u64>) -> Result<Self, ModelError> {
        if weights.is_empty() {
            return Err(ModelError::NoJobs);
        }
        if let Some(index) = weights.iter().position(|&w| w == 0) {
            return Err(ModelError::ZeroWeight { index });
        }
        Ok(JobSpec::Discrete { weights })
    }

    /// Total work, summing weights in the discrete case.
    pub fn total_work(&self) -> Rational {
        match self {
            JobSpec::Divisible { total_work } => total_work.clone(),
            JobSpec::Discrete { weights } => rat(weights.iter().sum()),
        }
    }

    pub fn weights(&self) -> Option<&[u64]> {
        match self {
            JobSpec::Divisible { .. } => None,
            JobSpec::Discrete { weights } => Some(weights),
        }
    }

    pub fn is_divisible(&self) -> bool {
        matches!(self, JobSpec::Divisible { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    PowerCap,
    EnergyBudget,
    MakespanBudget,
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConstraintKind::PowerCap => "power",
            ConstraintKind::EnergyBudget => "energy",
            ConstraintKind::MakespanBudget => "makespan",
        };
        f.write_str(s)
    }
}

/// A single resource limit: watts, joules, or seconds depending on the kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub value: Rational,
}

impl Constraint {
    pub fn new(kind: ConstraintKind, value: Rational) -> Result<Self, ModelError> {
        if !value.is_positive() {
            return Err(ModelError::NonPositiveConstraint);
        }
        Ok(Constraint { kind, value })
    }

    pub fn power_cap(watts: u64) -> Self {
        Constraint {
            kind: ConstraintKind::PowerCap,
            value: rat(watts),
        }
    }

    pub fn energy_budget(joules: Rational) -> Self {
        Constraint {
            kind: ConstraintKind::EnergyBudget,
            value: joules,
        }
    }

    pub fn makespan_budget(seconds: Rational) -> Self {
        Constraint {
            kind: ConstraintKind::MakespanBudget,
            value: seconds,
        }
    }
}

/// Work and time assigned to one machine; `work = time * speed` always holds
/// for rows built through the constructors here.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentRow {
    pub machine: usize,
    pub work: Rational,
    pub time: Rational,
    /// Indices of the atomic jobs placed here, for discrete schedules.
    pub jobs: Option<Vec<usize>>,
}

/// A complete assignment: one row per participating machine, sorted by id.
/// Machines without a row are idle for the whole makespan.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule {
    rows: Vec<AssignmentRow>,
}

impl Schedule {
    pub fn empty() -> Self {
        Schedule { rows: Vec::new() }
    }

    /// Builds a schedule from explicit rows; rejects duplicate machines and
    /// negative quantities, and sorts rows by machine id.
    pub fn from_rows(mut rows: Vec<AssignmentRow>) -> Result<Self, ModelError> {
        rows.sort_by_key(|r| r.machine);
        for pair in rows.windows(2) {
            if pair[0].machine == pair[1].machine {
                return Err(ModelError::DuplicateRow {
                    id: pair[1].machine,
                });
            }
        }
        for row in &rows {
            if row.work.is_negative() || row.time.is_negative() {
                return Err(ModelError::NegativeAssignment { id: row.machine });
            }
        }
        Ok(Schedule { rows })
    }

    /// Rows from per-machine running times; work is derived as `time * speed`.
    pub fn from_times(fleet: &Fleet, times: &[(usize, Rational)]) -> Result<Self, ModelError> {
        let rows = times
            .iter()
            .map(|(id, time)| {
                let m = fleet.machine(*id)?;
                Ok(AssignmentRow {
                    machine: *id,
                    work: time * rat(m.speed),
                    time: time.clone(),
                    jobs: None,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        Self::from_rows(rows)
    }

    /// Rows from per-machine work amounts; time is derived as `work / speed`.
    pub fn from_works(fleet: &Fleet, works: &[(usize, Rational)]) -> Result<Self, ModelError> {
        let rows = works
            .iter()
            .map(|(id, work)| {
                let m = fleet.machine(*id)?;
                Ok(AssignmentRow {
                    machine: *id,
                    work: work.clone(),
                    time: m.time_for(work),
                    jobs: None,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        Self::from_rows(rows)
    }

    /// Discrete schedule from a job-to-machine map (`machine_of_job[j]` is the
    /// machine id running job `j`).
    pub fn from_job_assignment(
        fleet: &Fleet,
        weights: &[u64],
        machine_of_job: &[usize],
    ) -> Result<Self, ModelError> {
        let mut per_machine: Vec<(u64, Vec<usize>)> = vec![(0, Vec::new()); fleet.len()];
        for (index, (&w, &id)) in weights.iter().zip(machine_of_job).enumerate() {
            if id >= fleet.len() {
                return Err(ModelError::BadJobAssignment { index, id });
            }
            per_machine[id].0 += w;
            per_machine[id].1.push(index);
        }
        let rows = per_machine
            .into_iter()
            .enumerate()
            .filter(|(_, (w, _))| *w > 0)
            .map(|(id, (w, jobs))| {
                let work = rat(w);
                let time = fleet.machine(id).expect("dense id").time_for(&work);
                AssignmentRow {
                    machine: id,
                    work,
                    time,
                    jobs: Some(jobs),
                }
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn rows(&self) -> &[AssignmentRow] {
        &self.rows
    }

    pub fn row(&self, machine: usize) -> Option<&AssignmentRow> {
        self.rows.iter().find(|r| r.machine == machine)
    }

    /// Machines with nonzero running time.
    pub fn working_set(&self) -> BTreeSet<usize> {
        self.rows
            .iter()
            .filter(|r| r.time.is_positive())
            .map(|r| r.machine)
            .collect()
    }

    pub fn total_work(&self) -> Rational {
        self.rows.iter().map(|r| r.work.clone()).sum()
    }

    /// Adds zero rows for every fleet machine absent from the schedule, so
    /// emitted outcomes list all machines explicitly.
    pub fn with_idle_rows(mut self, fleet: &Fleet) -> Self {
        let present: BTreeSet<usize> = self.rows.iter().map(|r| r.machine).collect();
        let discrete = self.rows.iter().any(|r| r.jobs.is_some());
        for m in fleet.machines() {
            if !present.contains(&m.id) {
                self.rows.push(AssignmentRow {
                    machine: m.id,
                    work: Rational::zero(),
                    time: Rational::zero(),
                    jobs: discrete.then(Vec::new),
                });
            }
        }
        self.rows.sort_by_key(|r| r.machine);
        self
    }
}

/// Makespan: the largest per-machine running time; zero for an idle schedule.
pub fn makespan(schedule: &Schedule) -> Rational {
    schedule
        .rows()
        .iter()
        .map(|r| r.time.clone())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Total energy: each working machine pays its marginal power over its
/// running time, and the whole fleet pays its idle-power sum over the
/// realized makespan (charged exactly once).
pub fn energy(schedule: &Schedule, fleet: &Fleet) -> Result<Rational, ModelError> {
    let mut marginal = Rational::zero();
    for row in schedule.rows() {
        let m = fleet.machine(row.machine)?;
        marginal += rat(m.marginal_power()) * &row.time;
    }
    Ok(marginal + rat(fleet.gamma_total()) * makespan(schedule))
}

/// Instantaneous system draw when exactly `working_set` is active: the
/// fleet-wide idle sum plus the members' marginal powers.
pub fn power_draw(working_set: &BTreeSet<usize>, fleet: &Fleet) -> Result<u64, ModelError> {
    let mut draw = fleet.gamma_total();
    for &id in working_set {
        draw += fleet.machine(id)?.marginal_power();
    }
    Ok(draw)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone)]
pub struct Finding {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        !self.findings.iter().any(|f| f.severity == Severity::Error)
    }

    fn error(&mut self, code: &'static str, message: String) {
        self.findings.push(Finding {
            severity: Severity::Error,
            code,
            message,
        });
    }

    fn warning(&mut self, code: &'static str, message: String) {
        self.findings.push(Finding {
            severity: Severity::Warning,
            code,
            message,
        });
    }
}

/// Checks an instance against the model's feasibility assumptions before any
/// solver runs. Structural invariants (dense ids, positive ratings, positive
/// budgets) are enforced at construction; this reports constraint-level
/// problems: a power cap too low to run any machine, a vacuous power cap, and
/// budgets that cannot complete the workload even at full saturation.
pub fn validate_instance(
    fleet: &Fleet,
    jobs: &JobSpec,
    constraint: &Constraint,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let total_work = jobs.total_work();
    match constraint.kind {
        ConstraintKind::PowerCap => {
            let floor = fleet.gamma_total() + fleet.min_marginal_power();
            if constraint.value <= rat(floor) {
                report.error(
                    "power-cap-too-low",
                    format!(
                        "power cap {} cannot run any machine: all-idle draw {} plus \
                         cheapest activation {} is not below the cap",
                        format_rational(&constraint.value),
                        fleet.gamma_total(),
                        fleet.min_marginal_power()
                    ),
                );
            } else if constraint.value >= rat(fleet.mu_total()) {
                report.warning(
                    "power-cap-unconstrained",
                    format!(
                        "power cap {} admits all machines at once (total working draw {}); \
                         the constraint is vacuous",
                        format_rational(&constraint.value),
                        fleet.mu_total()
                    ),
                );
            }
        }
        ConstraintKind::EnergyBudget => {
            if jobs.is_divisible() {
                let (peak_work, _) =
                    crate::energy_budget::max_achievable_work(fleet, &constraint.value);
                if peak_work < total_work {
                    report.error(
                        "energy-budget-infeasible",
                        format!(
                            "energy budget {} completes at most {} work units; {} required",
                            format_rational(&constraint.value),
                            format_rational(&peak_work),
                            format_rational(&total_work)
                        ),
                    );
                }
            } else {
                // Lower bound: all work on the per-joule-cheapest machine,
                // idle charge over the fastest conceivable makespan.
                let min_cost = fleet
                    .machines()
                    .iter()
                    .map(|m| rat(m.marginal_power()) / rat(m.speed))
                    .min()
                    .expect("non-empty fleet");
                let bound = &total_work * min_cost
                    + rat(fleet.gamma_total()) * &total_work / rat(fleet.speed_total());
                if constraint.value < bound {
                    report.error(
                        "energy-budget-infeasible",
                        format!(
                            "energy budget {} is below the lower bound {} for this workload",
                            format_rational(&constraint.value),
                            format_rational(&bound)
                        ),
                    );
                }
            }
        }
        ConstraintKind::MakespanBudget => {
            let capacity = rat(fleet.speed_total()) * &constraint.value;
            if capacity < total_work {
                report.error(
                    "makespan-budget-infeasible",
                    format!(
                        "makespan budget {} caps total capacity at {} work units; {} required",
                        format_rational(&constraint.value),
                        format_rational(&capacity),
                        format_rational(&total_work)
                    ),
                );
            }
            if let Some(weights) = jobs.weights() {
                let max_speed = rat(fleet.max_speed());
                for (index, &w) in weights.iter().enumerate() {
                    if rat(w) / &max_speed > constraint.value {
                        report.error(
                            "makespan-budget-infeasible",
                            format!(
                                "job {index} (weight {w}) cannot finish within the budget \
                                 even on the fastest machine"
                            ),
                        );
                    }
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

/// Outcome of checking a schedule against an instance.
#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Independently re-checks a schedule: per-machine work/time consistency,
/// work conservation (and job partition for discrete workloads), and the
/// instance constraint. All findings are reported, nothing is thrown.
pub fn verify_schedule(
    schedule: &Schedule,
    fleet: &Fleet,
    jobs: &JobSpec,
    constraint: &Constraint,
) -> FeasibilityReport {
    let mut violations = Vec::new();
    for row in schedule.rows() {
        match fleet.machine(row.machine) {
            Ok(m) => {
                if row.work != &row.time * rat(m.speed) {
                    violations.push(Violation {
                        code: "work-time-mismatch",
                        message: format!(
                            "machine {}: work {} != time {} x speed {}",
                            m.id,
                            format_rational(&row.work),
                            format_rational(&row.time),
                            m.speed
                        ),
                    });
                }
            }
            Err(_) => violations.push(Violation {
                code: "unknown-machine",
                message: format!("schedule references unknown machine id {}", row.machine),
            }),
        }
    }

    let total = schedule.total_work();
    let required = jobs.total_work();
    if total != required {
        violations.push(Violation {
            code: "work-conservation",
            message: format!(
                "assigned work {} != required total {}",
                format_rational(&total),
                format_rational(&required)
            ),
        });
    }

    if let Some(weights) = jobs.weights() {
        let mut seen = vec![false; weights.len()];
        for row in schedule.rows() {
            let Some(job_ids) = &row.jobs else {
                if row.work.is_positive() {
                    violations.push(Violation {
                        code: "missing-job-list",
                        message: format!(
                            "machine {} carries work but lists no jobs for a discrete workload",
                            row.machine
                        ),
                    });
                }
                continue;
            };
            let mut row_weight: u64 = 0;
            for &j in job_ids {
                if j >= weights.len() {
                    violations.push(Violation {
                        code: "job-partition",
                        message: format!("machine {} lists unknown job {j}", row.machine),
                    });
                    continue;
                }
                if seen[j] {
                    violations.push(Violation {
                        code: "job-partition",
                        message: format!("job {j} assigned more than once"),
                    });
                }
                seen[j] = true;
                row_weight += weights[j];
            }
            if rat(row_weight) != row.work {
                violations.push(Violation {
                    code: "job-weight-mismatch",
                    message: format!(
                        "machine {}: listed jobs weigh {} but row carries {}",
                        row.machine,
                        row_weight,
                        format_rational(&row.work)
                    ),
                });
            }
        }
        for (j, taken) in seen.iter().enumerate() {
            if !taken {
                violations.push(Violation {
                    code: "job-partition",
                    message: format!("job {j} is not assigned to any machine"),
                });
            }
        }
    }

    match constraint.kind {
        ConstraintKind::PowerCap => {
            // unknown ids were already reported above, so Err is ignored here
            if let Ok(draw) = power_draw(&schedule.working_set(), fleet) {
                if rat(draw) > constraint.value {
                    violations.push(Violation {
                        code: "power-cap-exceeded",
                        message: format!(
                            "working set draws {draw} W against cap {}",
                            format_rational(&constraint.value)
                        ),
                    });
                }
            }
        }
        ConstraintKind::EnergyBudget => {
            if let Ok(e) = energy(schedule, fleet) {
                if e > constraint.value {
                    violations.push(Violation {
                        code: "energy-budget-exceeded",
                        message: format!(
                            "schedule consumes {} J against budget {}",
                            format_rational(&e),
                            format_rational(&constraint.value)
                        ),
                    });
                }
            }
        }
        ConstraintKind::MakespanBudget => {
            let t = makespan(schedule);
            if t > constraint.value {
                violations.push(Violation {
                    code: "makespan-budget-exceeded",
                    message: format!(
                        "makespan {} s against budget {}",
                        format_rational(&t),
                        format_rational(&constraint.value)
                    ),
                });
            }
        }
    }

    FeasibilityReport { violations }
}

/// Bound metadata attached to a solver result.
#[derive(Debug, Clone, PartialEq)]
pub struct Guarantee {
    /// Proven worst-case ratio against the optimum, when one applies.
    pub bound_ratio: Option<Rational>,
    pub epsilon: Option<Rational>,
    pub exact: bool,
}

impl Guarantee {
    pub fn exact() -> Self {
        Guarantee {
            bound_ratio: Some(Rational::one()),
            epsilon: None,
            exact: true,
        }
    }

    pub fn approx(bound_ratio: Rational, epsilon: Option<Rational>) -> Self {
        Guarantee {
            bound_ratio: Some(bound_ratio),
            epsilon,
            exact: false,
        }
    }
}

/// A solved instance: the schedule, its objective value, the guarantee, and
/// free-form diagnostics (iteration counts, table sizes, ...).
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub schedule: Schedule,
    pub objective: Rational,
    pub guarantee: Guarantee,
    pub diagnostics: std::collections::BTreeMap<String, String>,
}

/// Why a solver could not produce a schedule, with whatever certificate the
/// algorithm can offer.
#[derive(Debug, Clone, PartialEq)]
pub enum Infeasibility {
    /// Power cap: no machine's activation fits in the margin above all-idle.
    NoMachineFitsMargin { margin: u64 },
    /// Energy budget, divisible: the peak achievable work over all makespans.
    EnergyShortfall {
        peak_work: Rational,
        peak_makespan: Rational,
    },
    /// Energy budget, discrete: every machine-prefix schedule overshoots.
    AllPrefixesExceedBudget { min_prefix_energy: Rational },
    /// Makespan budget, divisible: total capacity within the budget.
    CapacityShortfall { capacity: Rational },
    /// Makespan budget, discrete: this job fits no machine.
    JobDoesNotFit { job: usize, weight: u64 },
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::NoMachineFitsMargin { margin } => {
                write!(
                    f,
                    "no machine activation fits in the power margin {margin} W"
                )
            }
            Infeasibility::EnergyShortfall {
                peak_work,
                peak_makespan,
            } => write!(
                f,
                "energy budget tops out at {} work units (at makespan {})",
                format_rational(peak_work),
                format_rational(peak_makespan)
            ),
            Infeasibility::AllPrefixesExceedBudget { min_prefix_energy } => write!(
                f,
                "every machine prefix exceeds the energy budget (cheapest needs {})",
                format_rational(min_prefix_energy)
            ),
            Infeasibility::CapacityShortfall { capacity } => write!(
                f,
                "total capacity within the makespan budget is only {} work units",
                format_rational(capacity)
            ),
            Infeasibility::JobDoesNotFit { job, weight } => {
                write!(
                    f,
                    "job {job} (weight {weight}) fits no machine within the budget"
                )
            }
        }
    }
}

/// Solver result: a schedule with guarantees, or a certified infeasibility.
#[derive(Debug, Clone)]
pub enum SolveResult {
    Solved(SolveOutcome),
    Infeasible(Infeasibility),
}

impl SolveResult {
    pub fn outcome(&self) -> Option<&SolveOutcome> {
        match self {
            SolveResult::Solved(o) => Some(o),
            SolveResult::Infeasible(_) => None,
        }
    }

    pub fn expect_solved(&self, context: &str) -> &SolveOutcome {
        match self {
            SolveResult::Solved(o) => o,
            SolveResult::Infeasible(i) => panic!("{context}: unexpectedly infeasible: {i}"),
        }
    }
}
