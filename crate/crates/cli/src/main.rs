//! Command-line front end: solve instances, verify schedules against them,
//! run the brute-force oracles, generate seeded instances, and benchmark the
//! solvers' approximation ratios against their proven bounds.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use schedcon::energy_budget::{
    min_makespan_divisible, min_makespan_nondivisible, EnergyBudgetProblem,
};
use schedcon::io::{self, GenSpec, JobGen};
use schedcon::makespan_budget::{
    energy_ratio_bound, min_energy_divisible, min_energy_nondivisible, MakespanBudgetProblem,
};
use schedcon::model::{
    validate_instance, verify_schedule, Constraint, ConstraintKind, Fleet, JobSpec, Severity,
    SolveResult,
};
use schedcon::oracle::{
    self, exact_assignment_enum, exact_power_subset, grid_min_makespan_divisible, GridOutcome,
    PowerObjective,
};
use schedcon::power::{
    min_energy_under_power, min_makespan_under_power, EnergyGreedyMode, PowerProblem,
};
use schedcon::rational::{
    floor_to_u64, format_rational, parse_rational, rat, ratio, to_f64, Rational,
};

const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "schedcon",
    about = "Constrained scheduling on machines with distinct speeds and power ratings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance; the problem is inferred from its constraint kind
    /// and job type.
    Solve(SolveArgs),
    /// Re-check an emitted schedule against an instance.
    Verify(VerifyArgs),
    /// Run the exact reference solver for an instance.
    Oracle(OracleArgs),
    /// Generate a seeded random instance.
    Gen(GenArgs),
    /// Solve many seeded instances and compare against the oracles.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Objective {
    Makespan,
    Energy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Corrected,
    #[value(name = "paper-verbatim")]
    PaperVerbatim,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Write the outcome here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Required for power-capped instances: which objective to minimize.
    #[arg(long, value_enum)]
    objective: Option<Objective>,
    /// Approximation parameter as a rational, e.g. 1/4.
    #[arg(long, default_value = "1/4", value_parser = parse_epsilon)]
    epsilon: Rational,
    /// Energy-greedy admission test variant (power + energy only).
    #[arg(long, value_enum, default_value = "corrected")]
    mode: Mode,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Outcome file produced by `solve` (or any file in the same schema).
    #[arg(long)]
    schedule: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Required for power-capped instances.
    #[arg(long, value_enum)]
    objective: Option<Objective>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum JobKindArg {
    Divisible,
    Discrete,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstraintArg {
    Power,
    Energy,
    Makespan,
}

impl From<ConstraintArg> for ConstraintKind {
    fn from(value: ConstraintArg) -> Self {
        match value {
            ConstraintArg::Power => ConstraintKind::PowerCap,
            ConstraintArg::Energy => ConstraintKind::EnergyBudget,
            ConstraintArg::Makespan => ConstraintKind::MakespanBudget,
        }
    }
}

#[derive(Args, Clone)]
struct GenSpecArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Machine count range, inclusive, e.g. 2..6.
    #[arg(long, default_value = "2..6", value_parser = parse_usize_range)]
    machines: (usize, usize),
    /// Job count range for discrete workloads.
    #[arg(long, default_value = "1..8", value_parser = parse_usize_range)]
    jobs_count: (usize, usize),
    /// Job weight range for discrete workloads.
    #[arg(long, default_value = "1..100", value_parser = parse_u64_range)]
    weight: (u64, u64),
    /// Total work range for divisible workloads.
    #[arg(long, default_value = "1..100", value_parser = parse_u64_range)]
    work: (u64, u64),
    #[arg(long, default_value = "1..50", value_parser = parse_u64_range)]
    speed: (u64, u64),
    /// Marginal (working minus idle) power range.
    #[arg(long, default_value = "1..50", value_parser = parse_u64_range)]
    marginal_power: (u64, u64),
    #[arg(long, default_value = "0..50", value_parser = parse_u64_range)]
    idle_power: (u64, u64),
    /// Budget position between minimal feasible (0) and vacuous (1).
    #[arg(long, default_value = "1/2", value_parser = parse_tightness)]
    tightness: Rational,
}

impl GenSpecArgs {
    fn to_spec(&self, seed: u64, constraint: ConstraintKind, jobs: JobKindArg) -> GenSpec {
        let jobs = match jobs {
            JobKindArg::Divisible => JobGen::Divisible { work: self.work },
            JobKindArg::Discrete => JobGen::Discrete {
                count: self.jobs_count,
                weight: self.weight,
            },
        };
        GenSpec {
            seed,
            machines: self.machines,
            jobs,
            speed: self.speed,
            marginal_power: self.marginal_power,
            idle_power: self.idle_power,
            constraint,
            tightness: self.tightness.clone(),
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    spec: GenSpecArgs,
    #[arg(long, value_enum)]
    constraint: ConstraintArg,
    #[arg(long, value_enum)]
    jobs: JobKindArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    spec: GenSpecArgs,
    /// Restrict to one constraint kind (default: all problems).
    #[arg(long, value_enum)]
    constraint: Option<ConstraintArg>,
    /// Restrict power-capped runs to one objective.
    #[arg(long, value_enum)]
    objective: Option<Objective>,
    /// Restrict to one job type.
    #[arg(long, value_enum)]
    jobs: Option<JobKindArg>,
    /// Instances per problem variant.
    #[arg(long, default_value_t = 100)]
    count: u64,
    /// Approximation parameters for the epsilon-driven solvers (repeatable).
    #[arg(long = "epsilon", value_parser = parse_epsilon)]
    epsilons: Vec<Rational>,
    /// Write the full report as JSON here.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn parse_epsilon(s: &str) -> Result<Rational, String> {
    let value = parse_rational(s)?;
    if value <= rat(0) || value >= rat(1) {
        return Err("epsilon must lie strictly between 0 and 1".into());
    }
    Ok(value)
}

fn parse_tightness(s: &str) -> Result<Rational, String> {
    let value = parse_rational(s)?;
    if value <= rat(0) || value > rat(1) {
        return Err("tightness must lie in (0, 1]".into());
    }
    Ok(value)
}

fn parse_u64_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad range start {lo:?}"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad range end {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

fn parse_usize_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = parse_u64_range(s)?;
    Ok((lo as usize, hi as usize))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match run {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn read_instance(path: &Path) -> Result<(Fleet, JobSpec, Constraint)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    io::parse_instance(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{}", String::from_utf8_lossy(bytes)),
    }
    Ok(())
}

fn power_problem(fleet: Fleet, jobs: &JobSpec, constraint: &Constraint) -> Result<PowerProblem> {
    let JobSpec::Divisible { total_work } = jobs else {
        bail!("power-capped scheduling of discrete jobs has no solver; use a divisible workload");
    };
    let cap = floor_to_u64(&constraint.value)
        .ok_or_else(|| anyhow!("power cap must be a non-negative integer"))?;
    PowerProblem::new(fleet, total_work.clone(), cap).map_err(Into::into)
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let (fleet, jobs, constraint) = read_instance(&args.instance)?;

    // Budget-shortfall findings are left to the solver, which certifies the
    // infeasibility; anything else is an input error.
    let report = validate_instance(&fleet, &jobs, &constraint);
    let mut blocked = false;
    for finding in &report.findings {
        match finding.severity {
            Severity::Error if finding.code.ends_with("-infeasible") => {
                eprintln!("note [{}]: {}", finding.code, finding.message)
            }
            Severity::Error => {
                eprintln!("invalid instance [{}]: {}", finding.code, finding.message);
                blocked = true;
            }
            Severity::Warning => eprintln!("warning [{}]: {}", finding.code, finding.message),
        }
    }
    if blocked {
        return Ok(ExitCode::from(1));
    }

    if constraint.kind != ConstraintKind::PowerCap && args.objective.is_some() {
        bail!("--objective only applies to power-capped instances");
    }
    let result = match (constraint.kind, jobs.is_divisible()) {
        (ConstraintKind::PowerCap, _) => {
            let problem = power_problem(fleet, &jobs, &constraint)?;
            match args.objective {
                Some(Objective::Makespan) => min_makespan_under_power(&problem, &args.epsilon)?,
                Some(Objective::Energy) => {
                    let mode = match args.mode {
                        Mode::Corrected => EnergyGreedyMode::Corrected,
                        Mode::PaperVerbatim => EnergyGreedyMode::PaperVerbatim,
                    };
                    min_energy_under_power(&problem, mode)?
                }
                None => bail!("power-capped instances need --objective makespan|energy"),
            }
        }
        (ConstraintKind::EnergyBudget, true) => {
            let problem = EnergyBudgetProblem::new(fleet, jobs, constraint.value.clone());
            min_makespan_divisible(&problem)?
        }
        (ConstraintKind::EnergyBudget, false) => {
            let problem = EnergyBudgetProblem::new(fleet, jobs, constraint.value.clone());
            min_makespan_nondivisible(&problem, &args.epsilon)?
        }
        (ConstraintKind::MakespanBudget, true) => {
            let problem = MakespanBudgetProblem::new(fleet, jobs, constraint.value.clone());
            min_energy_divisible(&problem)?
        }
        (ConstraintKind::MakespanBudget, false) => {
            let problem = MakespanBudgetProblem::new(fleet, jobs, constraint.value.clone());
            min_energy_nondivisible(&problem)?
        }
    };

    let bytes = io::emit_outcome(&result);
    write_or_print(args.output.as_deref(), &bytes)?;
    Ok(match result {
        SolveResult::Solved(_) => ExitCode::SUCCESS,
        SolveResult::Infeasible(_) => ExitCode::from(EXIT_INFEASIBLE),
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let (fleet, jobs, constraint) = read_instance(&args.instance)?;
    let bytes =
        fs::read(&args.schedule).with_context(|| format!("reading {}", args.schedule.display()))?;
    let parsed = io::parse_outcome(&bytes)
        .with_context(|| format!("parsing {}", args.schedule.display()))?;
    let Some(schedule) = parsed.schedule else {
        bail!(
            "{} contains no schedule (infeasible outcome)",
            args.schedule.display()
        );
    };
    let report = verify_schedule(&schedule, &fleet, &jobs, &constraint);
    if report.passed() {
        println!("PASS: schedule satisfies the instance");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAIL: {} violation(s)", report.violations.len());
        for violation in &report.violations {
            println!("  [{}] {}", violation.code, violation.message);
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode> {
    let (fleet, jobs, constraint) = read_instance(&args.instance)?;
    let result = match (constraint.kind, &jobs) {
        (ConstraintKind::PowerCap, JobSpec::Divisible { .. }) => {
            let problem = power_problem(fleet, &jobs, &constraint)?;
            let objective = match args.objective {
                Some(Objective::Makespan) => PowerObjective::Makespan,
                Some(Objective::Energy) => PowerObjective::Energy,
                None => bail!("power-capped instances need --objective makespan|energy"),
            };
            match exact_power_subset(&problem, objective) {
                Ok(result) => result,
                Err(schedcon::oracle::OracleError::Infeasible) => {
                    let value = serde_json::json!({
                        "status": "infeasible",
                        "certificate": {
                            "kind": "no-machine-fits-margin",
                            "margin": problem.margin(),
                        },
                    });
                    let mut bytes = serde_json::to_vec(&value)?;
                    bytes.push(b'\n');
                    write_or_print(args.output.as_deref(), &bytes)?;
                    return Ok(ExitCode::from(EXIT_INFEASIBLE));
                }
                Err(err) => return Err(err.into()),
            }
        }
        (ConstraintKind::PowerCap, JobSpec::Discrete { .. }) => {
            bail!("power-capped scheduling of discrete jobs has no oracle")
        }
        (ConstraintKind::EnergyBudget, JobSpec::Divisible { .. }) => {
            let problem = EnergyBudgetProblem::new(fleet, jobs, constraint.value.clone());
            match grid_min_makespan_divisible(&problem, 10_000) {
                GridOutcome::Feasible(result) => result,
                GridOutcome::Infeasible {
                    peak_work,
                    peak_makespan,
                } => {
                    let value = serde_json::json!({
                        "status": "infeasible",
                        "certificate": {
                            "kind": "energy-shortfall",
                            "peak_work": format_rational(&peak_work),
                            "peak_makespan": format_rational(&peak_makespan),
                        },
                    });
                    let mut bytes = serde_json::to_vec(&value)?;
                    bytes.push(b'\n');
                    write_or_print(args.output.as_deref(), &bytes)?;
                    return Ok(ExitCode::from(EXIT_INFEASIBLE));
                }
            }
        }
        (ConstraintKind::MakespanBudget, JobSpec::Divisible { .. }) => {
            let total_work = jobs.total_work();
            match oracle::fractional_min_energy_given_makespan(
                &fleet,
                &total_work,
                &constraint.value,
            ) {
                Some(result) => result,
                None => {
                    let capacity = rat(fleet.speed_total()) * &constraint.value;
                    let value = serde_json::json!({
                        "status": "infeasible",
                        "certificate": {
                            "kind": "capacity-shortfall",
                            "capacity": format_rational(&capacity),
                        },
                    });
                    let mut bytes = serde_json::to_vec(&value)?;
                    bytes.push(b'\n');
                    write_or_print(args.output.as_deref(), &bytes)?;
                    return Ok(ExitCode::from(EXIT_INFEASIBLE));
                }
            }
        }
        (_, JobSpec::Discrete { weights }) => {
            match exact_assignment_enum(&fleet, weights, &constraint) {
                Ok(result) => result,
                Err(oracle::OracleError::Infeasible) => {
                    let value = serde_json::json!({
                        "status": "infeasible",
                        "certificate": { "kind": "no-feasible-assignment" },
                    });
                    let mut bytes = serde_json::to_vec(&value)?;
                    bytes.push(b'\n');
                    write_or_print(args.output.as_deref(), &bytes)?;
                    return Ok(ExitCode::from(EXIT_INFEASIBLE));
                }
                Err(err) => return Err(err.into()),
            }
        }
    };
    let bytes = io::emit_oracle_result(&result);
    write_or_print(args.output.as_deref(), &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let spec = args
        .spec
        .to_spec(args.spec.seed, args.constraint.into(), args.jobs);
    let (fleet, jobs, constraint) = io::generate(&spec)?;
    let bytes = io::emit_instance(&fleet, &jobs, &constraint);
    write_or_print(args.output.as_deref(), &bytes)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// bench

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variant {
    PowerMakespan,
    PowerEnergy,
    EnergyDivisible,
    EnergyDiscrete,
    MakespanDivisible,
    MakespanDiscrete,
}

impl Variant {
    fn all() -> &'static [Variant] {
        &[
            Variant::PowerMakespan,
            Variant::PowerEnergy,
            Variant::EnergyDivisible,
            Variant::EnergyDiscrete,
            Variant::MakespanDivisible,
            Variant::MakespanDiscrete,
        ]
    }

    fn name(self) -> &'static str {
        match self {
            Variant::PowerMakespan => "power-makespan",
            Variant::PowerEnergy => "power-energy",
            Variant::EnergyDivisible => "energy-divisible",
            Variant::EnergyDiscrete => "energy-discrete",
            Variant::MakespanDivisible => "makespan-divisible",
            Variant::MakespanDiscrete => "makespan-discrete",
        }
    }

    fn constraint(self) -> ConstraintKind {
        match self {
            Variant::PowerMakespan | Variant::PowerEnergy => ConstraintKind::PowerCap,
            Variant::EnergyDivisible | Variant::EnergyDiscrete => ConstraintKind::EnergyBudget,
            Variant::MakespanDivisible | Variant::MakespanDiscrete => {
                ConstraintKind::MakespanBudget
            }
        }
    }

    fn discrete(self) -> bool {
        matches!(self, Variant::EnergyDiscrete | Variant::MakespanDiscrete)
    }

    fn bound_label(self, epsilon: Option<&Rational>) -> String {
        match self {
            Variant::PowerMakespan => {
                let eps = epsilon.expect("epsilon-driven variant");
                format!("1/(1-{})", format_rational(eps))
            }
            Variant::PowerEnergy => "2".into(),
            Variant::EnergyDivisible | Variant::MakespanDivisible => "exact".into(),
            Variant::EnergyDiscrete => {
                let eps = epsilon.expect("epsilon-driven variant");
                format!("19/12+{}", format_rational(eps))
            }
            Variant::MakespanDiscrete => "1+eta_max/eta_min".into(),
        }
    }
}

#[derive(Default, Clone)]
struct InstanceStats {
    verified: bool,
    unverified: bool,
    solver_infeasible: bool,
    ratio: Option<Rational>,
    violation: bool,
    over_one_plus_eps: bool,
}

struct VariantReport {
    variant: Variant,
    epsilon: Option<Rational>,
    instances: u64,
    verified: u64,
    unverified: u64,
    solver_infeasible: u64,
    mean_ratio: Option<f64>,
    max_ratio: Option<Rational>,
    violations: u64,
    over_one_plus_eps: u64,
}

fn bench_instance(
    variant: Variant,
    spec_args: &GenSpecArgs,
    seed: u64,
    epsilon: Option<&Rational>,
) -> Result<InstanceStats> {
    let job_kind = if variant.discrete() {
        JobKindArg::Discrete
    } else {
        JobKindArg::Divisible
    };
    let spec = spec_args.to_spec(seed, variant.constraint(), job_kind);
    let (fleet, jobs, constraint) = io::generate(&spec)?;
    let mut stats = InstanceStats::default();

    match variant {
        Variant::PowerMakespan | Variant::PowerEnergy => {
            let problem = power_problem(fleet.clone(), &jobs, &constraint)?;
            let result = if variant == Variant::PowerMakespan {
                min_makespan_under_power(&problem, epsilon.expect("epsilon required"))?
            } else {
                min_energy_under_power(&problem, EnergyGreedyMode::Corrected)?
            };
            let SolveResult::Solved(outcome) = result else {
                stats.solver_infeasible = true;
                return Ok(stats);
            };
            if fleet.len() > oracle::MAX_SUBSET_MACHINES {
                stats.unverified = true;
                return Ok(stats);
            }
            let objective = if variant == Variant::PowerMakespan {
                PowerObjective::Makespan
            } else {
                PowerObjective::Energy
            };
            let reference = exact_power_subset(&problem, objective)?;
            let ratio_value = &outcome.objective / &reference.objective;
            let bound = match variant {
                Variant::PowerMakespan => {
                    let eps = epsilon.expect("epsilon required");
                    stats.over_one_plus_eps = ratio_value > rat(1) + eps;
                    rat(1) / (rat(1) - eps)
                }
                _ => rat(2),
            };
            stats.violation = ratio_value > bound;
            stats.ratio = Some(ratio_value);
            stats.verified = true;
        }
        Variant::EnergyDivisible => {
            let problem = EnergyBudgetProblem::new(fleet.clone(), jobs, constraint.value.clone());
            let result = min_makespan_divisible(&problem)?;
            let SolveResult::Solved(outcome) = result else {
                stats.solver_infeasible = true;
                return Ok(stats);
            };
            let reference = grid_min_makespan_divisible(&problem, 10_000);
            let GridOutcome::Feasible(reference) = reference else {
                stats.unverified = true;
                return Ok(stats);
            };
            // exact solver vs grid point: equal up to one grid step
            let total_work = problem.jobs.total_work();
            let step = (&total_work / rat(fleet.min_speed()) * ratio(21, 20)
                - &total_work / rat(fleet.speed_total()))
                / rat(10_000);
            stats.violation = outcome.objective > reference.objective
                || reference.objective > &outcome.objective + step;
            stats.ratio = Some(&outcome.objective / &reference.objective);
            stats.verified = true;
        }
        Variant::EnergyDiscrete => {
            let problem =
                EnergyBudgetProblem::new(fleet.clone(), jobs.clone(), constraint.value.clone());
            let eps = epsilon.expect("epsilon required");
            let result = min_makespan_nondivisible(&problem, eps)?;
            let SolveResult::Solved(outcome) = result else {
                stats.solver_infeasible = true;
                return Ok(stats);
            };
            let weights = jobs.weights().expect("discrete variant");
            match exact_assignment_enum(&fleet, weights, &constraint) {
                Ok(reference) => {
                    let ratio_value = &outcome.objective / &reference.objective;
                    stats.violation = ratio_value > ratio(19, 12) + eps;
                    stats.ratio = Some(ratio_value);
                    stats.verified = true;
                }
                Err(oracle::OracleError::AssignmentSpaceTooLarge { .. }) => {
                    stats.unverified = true;
                }
                Err(err) => return Err(err.into()),
            }
        }
        Variant::MakespanDivisible => {
            let problem =
                MakespanBudgetProblem::new(fleet.clone(), jobs.clone(), constraint.value.clone());
            let result = min_energy_divisible(&problem)?;
            let SolveResult::Solved(outcome) = result else {
                stats.solver_infeasible = true;
                return Ok(stats);
            };
            let total_work = jobs.total_work();
            let reference = oracle::fractional_min_energy_given_makespan(
                &fleet,
                &total_work,
                &constraint.value,
            )
            .expect("solver found the instance feasible");
            stats.violation = outcome.objective != reference.objective;
            stats.ratio = Some(&outcome.objective / &reference.objective);
            stats.verified = true;
        }
        Variant::MakespanDiscrete => {
            let problem =
                MakespanBudgetProblem::new(fleet.clone(), jobs.clone(), constraint.value.clone());
            let result = min_energy_nondivisible(&problem)?;
            let SolveResult::Solved(outcome) = result else {
                stats.solver_infeasible = true;
                return Ok(stats);
            };
            let weights = jobs.weights().expect("discrete variant");
            match exact_assignment_enum(&fleet, weights, &constraint) {
                Ok(reference) => {
                    let ratio_value = &outcome.objective / &reference.objective;
                    let mut violation = ratio_value > energy_ratio_bound(&fleet);
                    if let Ok(Some(optimal_count)) =
                        oracle::min_machine_count_under_makespan(&fleet, weights, &constraint.value)
                    {
                        let used = outcome.schedule.working_set().len();
                        violation = violation || used > 2 * optimal_count;
                    }
                    stats.violation = violation;
                    stats.ratio = Some(ratio_value);
                    stats.verified = true;
                }
                Err(oracle::OracleError::AssignmentSpaceTooLarge { .. }) => {
                    stats.unverified = true;
                }
                Err(err) => return Err(err.into()),
            }
        }
    }
    Ok(stats)
}

fn run_variant(
    variant: Variant,
    args: &BenchArgs,
    epsilon: Option<&Rational>,
    pool: &rayon::ThreadPool,
) -> Result<VariantReport> {
    use rayon::prelude::*;
    let results: Vec<Result<InstanceStats>> = pool.install(|| {
        (0..args.count)
            .into_par_iter()
            .map(|i| bench_instance(variant, &args.spec, args.spec.seed.wrapping_add(i), epsilon))
            .collect()
    });
    let mut verified = 0u64;
    let mut unverified = 0u64;
    let mut solver_infeasible = 0u64;
    let mut violations = 0u64;
    let mut over_one_plus_eps = 0u64;
    let mut ratio_sum = Rational::from_integer(0.into());
    let mut max_ratio: Option<Rational> = None;
    for result in results {
        let stats = result?;
        verified += u64::from(stats.verified);
        unverified += u64::from(stats.unverified);
        solver_infeasible += u64::from(stats.solver_infeasible);
        violations += u64::from(stats.violation);
        over_one_plus_eps += u64::from(stats.over_one_plus_eps);
        if let Some(ratio_value) = stats.ratio {
            if max_ratio.as_ref().is_none_or(|m| ratio_value > *m) {
                max_ratio = Some(ratio_value.clone());
            }
            ratio_sum += ratio_value;
        }
    }
    let mean_ratio = (verified > 0).then(|| to_f64(&(ratio_sum / rat(verified))));
    Ok(VariantReport {
        variant,
        epsilon: epsilon.cloned(),
        instances: args.count,
        verified,
        unverified,
        solver_infeasible,
        mean_ratio,
        max_ratio,
        violations,
        over_one_plus_eps,
    })
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let epsilons = if args.epsilons.is_empty() {
        vec![ratio(1, 2), ratio(1, 4), ratio(1, 10)]
    } else {
        args.epsilons.clone()
    };
    let threads = std::env::var("SCHEDCON_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("building bench thread pool")?;

    let selected: Vec<Variant> = Variant::all()
        .iter()
        .copied()
        .filter(|v| {
            args.constraint
                .is_none_or(|c| v.constraint() == ConstraintKind::from(c))
                && args
                    .jobs
                    .is_none_or(|j| v.discrete() == (j == JobKindArg::Discrete))
                && !matches!(
                    (v, args.objective),
                    (Variant::PowerMakespan, Some(Objective::Energy))
                        | (Variant::PowerEnergy, Some(Objective::Makespan))
                )
        })
        .collect();
    if selected.is_empty() {
        bail!("no problem variant matches the given filters");
    }

    let mut reports = Vec::new();
    for &variant in &selected {
        match variant {
            Variant::PowerMakespan | Variant::EnergyDiscrete => {
                for eps in &epsilons {
                    reports.push(run_variant(variant, &args, Some(eps), &pool)?);
                }
            }
            _ => reports.push(run_variant(variant, &args, None, &pool)?),
        }
    }

    println!(
        "{:<22} {:>9} {:>9} {:>11} {:>11} {:>10} {:>18} {:>10}",
        "problem",
        "instances",
        "verified",
        "unverified",
        "infeasible",
        "mean",
        "bound",
        "violations"
    );
    for report in &reports {
        let name = match &report.epsilon {
            Some(eps) => format!("{} eps={}", report.variant.name(), format_rational(eps)),
            None => report.variant.name().to_string(),
        };
        println!(
            "{:<22} {:>9} {:>9} {:>11} {:>11} {:>10} {:>18} {:>10}",
            name,
            report.instances,
            report.verified,
            report.unverified,
            report.solver_infeasible,
            report.mean_ratio.map_or("-".into(), |m| format!("{m:.4}")),
            report.variant.bound_label(report.epsilon.as_ref()),
            report.violations,
        );
    }
    let total_violations: u64 = reports.iter().map(|r| r.violations).sum();
    println!("total bound violations: {total_violations}");

    if let Some(path) = &args.report {
        let entries: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| {
                let mut entry = BTreeMap::new();
                entry.insert("problem".to_string(), serde_json::json!(r.variant.name()));
                entry.insert(
                    "epsilon".to_string(),
                    serde_json::json!(r.epsilon.as_ref().map(format_rational)),
                );
                entry.insert("instances".to_string(), serde_json::json!(r.instances));
                entry.insert("verified".to_string(), serde_json::json!(r.verified));
                entry.insert("unverified".to_string(), serde_json::json!(r.unverified));
                entry.insert(
                    "solver_infeasible".to_string(),
                    serde_json::json!(r.solver_infeasible),
                );
                entry.insert("mean_ratio".to_string(), serde_json::json!(r.mean_ratio));
                entry.insert(
                    "max_ratio".to_string(),
                    serde_json::json!(r.max_ratio.as_ref().map(format_rational)),
                );
                entry.insert(
                    "bound".to_string(),
                    serde_json::json!(r.variant.bound_label(r.epsilon.as_ref())),
                );
                entry.insert("violations".to_string(), serde_json::json!(r.violations));
                entry.insert(
                    "over_one_plus_epsilon".to_string(),
                    serde_json::json!(r.over_one_plus_eps),
                );
                serde_json::json!(entry)
            })
            .collect();
        let mut bytes = serde_json::to_vec(&serde_json::json!({ "variants": entries }))?;
        bytes.push(b'\n');
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }

    Ok(if total_violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
