//! Canonical JSON instance and outcome formats, plus seeded random instance
//! generation.
//!
//! All rationals travel as strings (`"p"` or `"p/q"`, lowest terms) so files
//! stay exact end to end. Emission is canonical: sorted keys, compact
//! separators, one trailing newline. Identical values produce identical
//! bytes.

use num::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::kernels;
use crate::model::{
    makespan, validate_instance, Constraint, ConstraintKind, Fleet, Guarantee, Infeasibility,
    JobSpec, Machine, ModelError, Schedule, SolveResult,
};
use crate::oracle::{OracleMethod, OracleResult};
use crate::rational::{format_rational, parse_rational, rat, Rational};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {found} (expected {FORMAT_VERSION})")]
    Version { found: u64 },
    #[error("{context}: {message}")]
    Field { context: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn field_err(context: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Field {
        context: context.into(),
        message: message.into(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRaw {
    version: u64,
    machines: Vec<MachineRaw>,
    jobs: JobsRaw,
    constraint: ConstraintRaw,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MachineRaw {
    id: usize,
    working_power: u64,
    idle_power: u64,
    speed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum JobsRaw {
    Divisible { total_work: String },
    Discrete { weights: Vec<u64> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintRaw {
    kind: String,
    value: String,
}

/// Strict parse of an instance file: unknown fields are rejected and every
/// model invariant is enforced with a positional message.
pub fn parse_instance(bytes: &[u8]) -> Result<(Fleet, JobSpec, Constraint), IoError> {
    let raw: InstanceRaw = serde_json::from_slice(bytes)?;
    if raw.version != FORMAT_VERSION {
        return Err(IoError::Version { found: raw.version });
    }
    let machines = raw
        .machines
        .into_iter()
        .map(|m| Machine::new(m.id, m.working_power, m.idle_power, m.speed))
        .collect();
    let fleet = Fleet::new(machines)?;
    let jobs = match raw.jobs {
        JobsRaw::Divisible { total_work } => {
            let value = parse_rational(&total_work)
                .map_err(|e| field_err("jobs.divisible.total_work", e))?;
            JobSpec::divisible(value)?
        }
        JobsRaw::Discrete { weights } => JobSpec::discrete(weights)?,
    };
    let kind = match raw.constraint.kind.as_str() {
        "power" => ConstraintKind::PowerCap,
        "energy" => ConstraintKind::EnergyBudget,
        "makespan" => ConstraintKind::MakespanBudget,
        other => {
            return Err(field_err(
                "constraint.kind",
                format!("unknown kind {other:?} (expected power, energy, or makespan)"),
            ))
        }
    };
    let value =
        parse_rational(&raw.constraint.value).map_err(|e| field_err("constraint.value", e))?;
    if kind == ConstraintKind::PowerCap && !value.denom().is_one() {
        return Err(field_err(
            "constraint.value",
            "a power cap must be an integer",
        ));
    }
    let constraint = Constraint::new(kind, value)?;
    Ok((fleet, jobs, constraint))
}

fn canonical_bytes(value: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec(value).expect("serializable value");
    bytes.push(b'\n');
    bytes
}

/// Canonical instance emission; `parse_instance` inverts it exactly.
pub fn emit_instance(fleet: &Fleet, jobs: &JobSpec, constraint: &Constraint) -> Vec<u8> {
    let machines: Vec<Value> = fleet
        .machines()
        .iter()
        .map(|m| {
            json!({
                "id": m.id,
                "working_power": m.working_power,
                "idle_power": m.idle_power,
                "speed": m.speed,
            })
        })
        .collect();
    let jobs_value = match jobs {
        JobSpec::Divisible { total_work } => {
            json!({ "divisible": { "total_work": format_rational(total_work) } })
        }
        JobSpec::Discrete { weights } => json!({ "discrete": { "weights": weights } }),
    };
    let value = json!({
        "version": FORMAT_VERSION,
        "machines": machines,
        "jobs": jobs_value,
        "constraint": {
            "kind": constraint.kind.to_string(),
            "value": format_rational(&constraint.value),
        },
    });
    canonical_bytes(&value)
}

fn schedule_value(schedule: &Schedule) -> Value {
    let assignments: Vec<Value> = schedule
        .rows()
        .iter()
        .map(|row| {
            let mut entry = Map::new();
            entry.insert("id".into(), json!(row.machine));
            entry.insert("work".into(), json!(format_rational(&row.work)));
            entry.insert("time".into(), json!(format_rational(&row.time)));
            if let Some(jobs) = &row.jobs {
                entry.insert("jobs".into(), json!(jobs));
            }
            Value::Object(entry)
        })
        .collect();
    Value::Array(assignments)
}

fn guarantee_value(guarantee: &Guarantee) -> Value {
    json!({
        "bound_ratio": guarantee.bound_ratio.as_ref().map(format_rational),
        "epsilon": guarantee.epsilon.as_ref().map(format_rational),
        "exact": guarantee.exact,
    })
}

fn infeasibility_value(reason: &Infeasibility) -> Value {
    match reason {
        Infeasibility::NoMachineFitsMargin { margin } => {
            json!({ "kind": "no-machine-fits-margin", "margin": margin })
        }
        Infeasibility::EnergyShortfall {
            peak_work,
            peak_makespan,
        } => json!({
            "kind": "energy-shortfall",
            "peak_work": format_rational(peak_work),
            "peak_makespan": format_rational(peak_makespan),
        }),
        Infeasibility::AllPrefixesExceedBudget { min_prefix_energy } => json!({
            "kind": "all-prefixes-exceed-budget",
            "min_prefix_energy": format_rational(min_prefix_energy),
        }),
        Infeasibility::CapacityShortfall { capacity } => json!({
            "kind": "capacity-shortfall",
            "capacity": format_rational(capacity),
        }),
        Infeasibility::JobDoesNotFit { job, weight } => json!({
            "kind": "job-does-not-fit",
            "job": job,
            "weight": weight,
        }),
    }
}

/// Canonical outcome emission: per-machine assignments as rational strings,
/// the working set, objective, and guarantee block for solved instances;
/// a reason and certificate for infeasible ones.
pub fn emit_outcome(result: &SolveResult) -> Vec<u8> {
    let value = match result {
        SolveResult::Solved(outcome) => {
            let working: Vec<usize> = outcome.schedule.working_set().into_iter().collect();
            debug_assert!(
                !working.is_empty(),
                "solved outcomes always employ a machine"
            );
            json!({
                "status": "ok",
                "objective": format_rational(&outcome.objective),
                "assignments": schedule_value(&outcome.schedule),
                "working_set": working,
                "guarantee": guarantee_value(&outcome.guarantee),
                "diagnostics": outcome.diagnostics,
            })
        }
        SolveResult::Infeasible(reason) => json!({
            "status": "infeasible",
            "reason": reason.to_string(),
            "certificate": infeasibility_value(reason),
        }),
    };
    canonical_bytes(&value)
}

/// Canonical oracle-result emission.
pub fn emit_oracle_result(result: &OracleResult) -> Vec<u8> {
    let method = match result.method {
        OracleMethod::SubsetEnum => "subset-enum",
        OracleMethod::AssignmentEnum => "assignment-enum",
        OracleMethod::GridSweep => "grid-T",
        OracleMethod::FractionalKnapsack => "fractional-knapsack",
        OracleMethod::StepSimulation => "step-simulation",
    };
    let working: Vec<usize> = result.witness.working_set().into_iter().collect();
    let value = json!({
        "status": "ok",
        "objective": format_rational(&result.objective),
        "assignments": schedule_value(&result.witness),
        "working_set": working,
        "method": method,
        "search_space_size": result.search_space_size,
    });
    canonical_bytes(&value)
}

#[derive(Deserialize)]
struct OutcomeRaw {
    status: String,
    #[serde(default)]
    assignments: Vec<AssignmentRaw>,
    #[serde(default)]
    objective: Option<String>,
}

#[derive(Deserialize)]
struct AssignmentRaw {
    id: usize,
    work: String,
    time: String,
    #[serde(default)]
    jobs: Option<Vec<usize>>,
}

/// Parsed schedule file: the assignment rows of an emitted outcome, plus the
/// objective when present. Infeasible outcomes carry no schedule.
pub struct ParsedOutcome {
    pub schedule: Option<Schedule>,
    pub objective: Option<Rational>,
}

/// Reads back an emitted outcome (or oracle result); tolerant of extra
/// fields so reports stay extensible, strict about the assignment rows.
pub fn parse_outcome(bytes: &[u8]) -> Result<ParsedOutcome, IoError> {
    let raw: OutcomeRaw = serde_json::from_slice(bytes)?;
    if raw.status != "ok" {
        return Ok(ParsedOutcome {
            schedule: None,
            objective: None,
        });
    }
    let rows = raw
        .assignments
        .into_iter()
        .map(|a| {
            let context = format!("assignments[id={}]", a.id);
            Ok(crate::model::AssignmentRow {
                machine: a.id,
                work: parse_rational(&a.work).map_err(|e| field_err(&context, e))?,
                time: parse_rational(&a.time).map_err(|e| field_err(&context, e))?,
                jobs: a.jobs,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    let schedule = Schedule::from_rows(rows)?;
    let objective = raw
        .objective
        .map(|o| parse_rational(&o).map_err(|e| field_err("objective", e)))
        .transpose()?;
    Ok(ParsedOutcome {
        schedule: Some(schedule),
        objective,
    })
}

/// How the generator draws the workload.
#[derive(Debug, Clone)]
pub enum JobGen {
    Divisible {
        work: (u64, u64),
    },
    Discrete {
        count: (usize, usize),
        weight: (u64, u64),
    },
}

/// Seeded instance generation: machine ratings are drawn uniformly from the
/// given ranges and the constraint value is interpolated, by `tightness` in
/// `(0, 1]`, between the minimal feasible budget (computed by a greedy
/// estimate) and the vacuous one.
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub seed: u64,
    pub machines: (usize, usize),
    pub jobs: JobGen,
    pub speed: (u64, u64),
    pub marginal_power: (u64, u64),
    pub idle_power: (u64, u64),
    pub constraint: ConstraintKind,
    pub tightness: Rational,
}

impl GenSpec {
    /// Ranges from the scales used throughout the test corpus: speeds and
    /// marginal powers in 1..=50, idle power in 0..=50, weights in 1..=100.
    pub fn new(seed: u64, constraint: ConstraintKind, jobs: JobGen) -> Self {
        GenSpec {
            seed,
            machines: (2, 6),
            jobs,
            speed: (1, 50),
            marginal_power: (1, 50),
            idle_power: (0, 50),
            constraint,
            tightness: crate::rational::ratio(1, 2),
        }
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("empty range for {0}")]
    EmptyRange(&'static str),
    #[error("tightness must lie in (0, 1]")]
    BadTightness,
    #[error("power-capped instances require divisible jobs")]
    PowerNeedsDivisible,
    #[error("could not generate a valid instance in {0} attempts")]
    Exhausted(u32),
}

const MAX_ATTEMPTS: u32 = 16;

fn check_range<T: PartialOrd>(name: &'static str, range: (T, T)) -> Result<(), GenError> {
    if range.0 > range.1 {
        return Err(GenError::EmptyRange(name));
    }
    Ok(())
}

/// Draws one instance deterministically from the seed. Instances always pass
/// [`validate_instance`]; draws that fail validation are retried a bounded
/// number of times against the same rng stream.
pub fn generate(spec: &GenSpec) -> Result<(Fleet, JobSpec, Constraint), GenError> {
    check_range("machines", spec.machines)?;
    check_range("speed", spec.speed)?;
    check_range("marginal_power", spec.marginal_power)?;
    check_range("idle_power", spec.idle_power)?;
    if let JobGen::Discrete { count, weight } = &spec.jobs {
        check_range("job count", *count)?;
        check_range("job weight", *weight)?;
    }
    if !spec.tightness.is_positive() || spec.tightness > rat(1) {
        return Err(GenError::BadTightness);
    }
    if spec.constraint == ConstraintKind::PowerCap && matches!(spec.jobs, JobGen::Discrete { .. }) {
        return Err(GenError::PowerNeedsDivisible);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let m = rng.gen_range(spec.machines.0..=spec.machines.1);
        let machines: Vec<Machine> = (0..m)
            .map(|id| {
                let marginal = rng
                    .gen_range(spec.marginal_power.0..=spec.marginal_power.1)
                    .max(1);
                let idle = rng.gen_range(spec.idle_power.0..=spec.idle_power.1);
                let speed = rng.gen_range(spec.speed.0..=spec.speed.1).max(1);
                Machine::new(id, idle + marginal, idle, speed)
            })
            .collect();
        let fleet = Fleet::new(machines).expect("generated ratings are valid");
        let jobs = match &spec.jobs {
            JobGen::Divisible { work } => {
                JobSpec::divisible(rat(rng.gen_range(work.0..=work.1).max(1)))
                    .expect("positive work")
            }
            JobGen::Discrete { count, weight } => {
                let n = rng.gen_range(count.0..=count.1).max(1);
                let weights = (0..n)
                    .map(|_| rng.gen_range(weight.0..=weight.1).max(1))
                    .collect();
                JobSpec::discrete(weights).expect("positive weights")
            }
        };
        let Some(constraint) = constraint_for(&fleet, &jobs, spec) else {
            continue;
        };
        if validate_instance(&fleet, &jobs, &constraint).ok() {
            return Ok((fleet, jobs, constraint));
        }
    }
    Err(GenError::Exhausted(MAX_ATTEMPTS))
}

/// Interpolates the constraint value between the minimal feasible budget and
/// the vacuous one.
fn constraint_for(fleet: &Fleet, jobs: &JobSpec, spec: &GenSpec) -> Option<Constraint> {
    let t = &spec.tightness;
    let total_work = jobs.total_work();
    match spec.constraint {
        ConstraintKind::PowerCap => {
            let floor = fleet.gamma_total() + fleet.min_marginal_power();
            let vacuous = fleet.mu_total();
            if floor + 1 > vacuous {
                return None; // no cap window; redraw the fleet
            }
            let span = rat(vacuous - floor) * t;
            let bump = span.ceil().to_integer();
            let bump = u64::try_from(bump.max(1.into())).ok()?;
            Some(Constraint::power_cap(floor + bump.max(1)))
        }
        ConstraintKind::EnergyBudget => {
            let (minimal, vacuous) = match jobs {
                JobSpec::Divisible { .. } => {
                    // best and all-machines efficiency-prefix energies
                    let mut speed_sum = Rational::zero();
                    let mut cost_sum = rat(fleet.gamma_total());
                    let mut minimal: Option<Rational> = None;
                    let mut last = Rational::zero();
                    for &id in &fleet.efficiency_order() {
                        let m = &fleet.machines()[id];
                        speed_sum += rat(m.speed);
                        cost_sum += rat(m.marginal_power());
                        last = &cost_sum * &total_work / &speed_sum;
                        if minimal.as_ref().is_none_or(|b| last < *b) {
                            minimal = Some(last.clone());
                        }
                    }
                    (minimal.expect("non-empty fleet"), last)
                }
                JobSpec::Discrete { weights } => {
                    let order = fleet.efficiency_order();
                    let mut minimal: Option<Rational> = None;
                    let mut maximal: Option<Rational> = None;
                    for r in 1..=order.len() {
                        let machines: Vec<&Machine> =
                            order[..r].iter().map(|&id| &fleet.machines()[id]).collect();
                        let schedule =
                            kernels::lpt_assign(weights, &machines).expect("machines non-empty");
                        let e = crate::model::energy(&schedule, fleet).expect("fleet ids");
                        if minimal.as_ref().is_none_or(|b| e < *b) {
                            minimal = Some(e.clone());
                        }
                        if maximal.as_ref().is_none_or(|b| e > *b) {
                            maximal = Some(e);
                        }
                    }
                    (minimal.expect("non-empty"), maximal.expect("non-empty"))
                }
            };
            let value = &minimal + (&vacuous - &minimal) * t;
            Some(Constraint::energy_budget(value))
        }
        ConstraintKind::MakespanBudget => {
            let (minimal, vacuous) = match jobs {
                JobSpec::Divisible { .. } => (
                    &total_work / rat(fleet.speed_total()),
                    &total_work / rat(fleet.min_speed()),
                ),
                JobSpec::Discrete { weights } => {
                    let machines: Vec<&Machine> = fleet.machines().iter().collect();
                    let schedule =
                        kernels::lpt_assign(weights, &machines).expect("machines non-empty");
                    (makespan(&schedule), &total_work / rat(fleet.min_speed()))
                }
            };
            let value = &minimal + (&vacuous - &minimal) * t;
            Some(Constraint::makespan_budget(value))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SolveOutcome;
    use crate::rational::ratio;

    fn f3_bytes() -> Vec<u8> {
        br#"{
            "version": 1,
            "machines": [
                {"id": 0, "working_power": 10, "idle_power": 2, "speed": 5},
                {"id": 1, "working_power": 8, "idle_power": 3, "speed": 4},
                {"id": 2, "working_power": 6, "idle_power": 1, "speed": 2}
            ],
            "jobs": {"divisible": {"total_work": "12"}},
            "constraint": {"kind": "power", "value": "16"}
        }"#
        .to_vec()
    }

    #[test]
    fn parses_reference_instance() {
        let (fleet, jobs, constraint) = parse_instance(&f3_bytes()).unwrap();
        assert_eq!(fleet.gamma_total(), 6);
        assert_eq!(jobs.total_work(), rat(12));
        assert_eq!(constraint.kind, ConstraintKind::PowerCap);
        assert_eq!(constraint.value, rat(16));
    }

    #[test]
    fn rejects_idle_at_or_above_working() {
        let bytes = br#"{
            "version": 1,
            "machines": [{"id": 0, "working_power": 5, "idle_power": 5, "speed": 2}],
            "jobs": {"divisible": {"total_work": "3"}},
            "constraint": {"kind": "power", "value": "9"}
        }"#;
        let err = parse_instance(bytes).unwrap_err();
        assert!(err.to_string().contains("machine 0"), "{err}");
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let bytes = br#"{
            "version": 1,
            "machines": [{"id": 0, "working_power": 5, "idle_power": 1, "speed": 2, "color": "red"}],
            "jobs": {"divisible": {"total_work": "3"}},
            "constraint": {"kind": "power", "value": "9"}
        }"#;
        assert!(matches!(parse_instance(bytes), Err(IoError::Json(_))));

        let mut v2 = String::from_utf8(f3_bytes()).unwrap();
        v2 = v2.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(
            parse_instance(v2.as_bytes()),
            Err(IoError::Version { found: 2 })
        ));
    }

    #[test]
    fn rational_string_forms_accepted() {
        let mut s = String::from_utf8(f3_bytes()).unwrap();
        s = s.replace("\"value\": \"16\"", "\"value\": \"24/1\"");
        let (_, _, constraint) = parse_instance(s.as_bytes()).unwrap();
        assert_eq!(constraint.value, rat(24));
    }

    #[test]
    fn instance_round_trip_is_exact() {
        let (fleet, jobs, constraint) = parse_instance(&f3_bytes()).unwrap();
        let bytes = emit_instance(&fleet, &jobs, &constraint);
        let (fleet2, jobs2, constraint2) = parse_instance(&bytes).unwrap();
        assert_eq!(fleet, fleet2);
        assert_eq!(jobs, jobs2);
        assert_eq!(constraint, constraint2);
        assert_eq!(bytes, emit_instance(&fleet2, &jobs2, &constraint2));
    }

    #[test]
    fn outcome_emission_is_byte_stable_and_parses_back() {
        let (fleet, _, _) = parse_instance(&f3_bytes()).unwrap();
        let schedule = Schedule::from_works(&fleet, &[(1, rat(8)), (2, rat(4))])
            .unwrap()
            .with_idle_rows(&fleet);
        let outcome = SolveOutcome {
            schedule: schedule.clone(),
            objective: rat(2),
            guarantee: Guarantee::approx(ratio(4, 3), Some(ratio(1, 4))),
            diagnostics: Default::default(),
        };
        let a = emit_outcome(&SolveResult::Solved(outcome.clone()));
        let b = emit_outcome(&SolveResult::Solved(outcome));
        assert_eq!(a, b);
        let parsed = parse_outcome(&a).unwrap();
        assert_eq!(parsed.schedule.unwrap(), schedule);
        assert_eq!(parsed.objective.unwrap(), rat(2));
        let text = String::from_utf8(a).unwrap();
        assert!(text.contains("\"objective\":\"2\""), "{text}");
    }

    #[test]
    fn infeasible_outcome_schema() {
        let result = SolveResult::Infeasible(Infeasibility::EnergyShortfall {
            peak_work: ratio(216, 19),
            peak_makespan: ratio(24, 19),
        });
        let bytes = emit_outcome(&result);
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.contains("\"status\":\"infeasible\""), "{text}");
        assert!(text.contains("\"peak_work\":\"216/19\""), "{text}");
        let parsed = parse_outcome(&bytes).unwrap();
        assert!(parsed.schedule.is_none());
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec::new(
            42,
            ConstraintKind::PowerCap,
            JobGen::Divisible { work: (1, 100) },
        );
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        let bytes_a = emit_instance(&a.0, &a.1, &a.2);
        let bytes_b = emit_instance(&b.0, &b.1, &b.2);
        assert_eq!(bytes_a, bytes_b);
    }

    #[test]
    fn generated_instances_validate_across_kinds_and_tightness() {
        for (kind, jobs) in [
            (
                ConstraintKind::PowerCap,
                JobGen::Divisible { work: (1, 100) },
            ),
            (
                ConstraintKind::EnergyBudget,
                JobGen::Divisible { work: (1, 100) },
            ),
            (
                ConstraintKind::EnergyBudget,
                JobGen::Discrete {
                    count: (1, 8),
                    weight: (1, 100),
                },
            ),
            (
                ConstraintKind::MakespanBudget,
                JobGen::Divisible { work: (1, 100) },
            ),
            (
                ConstraintKind::MakespanBudget,
                JobGen::Discrete {
                    count: (1, 8),
                    weight: (1, 100),
                },
            ),
        ] {
            for (seed, tightness) in [(1u64, ratio(1, 100)), (2, ratio(1, 2)), (3, rat(1))] {
                let mut spec = GenSpec::new(seed, kind, jobs.clone());
                spec.tightness = tightness;
                let (fleet, jobs, constraint) = generate(&spec).unwrap();
                let report = validate_instance(&fleet, &jobs, &constraint);
                assert!(report.ok(), "{kind} seed {seed}: {:?}", report.findings);
            }
        }
    }

    #[test]
    fn vacuous_power_tightness_hits_the_full_draw() {
        let mut spec = GenSpec::new(
            7,
            ConstraintKind::PowerCap,
            JobGen::Divisible { work: (1, 100) },
        );
        spec.tightness = rat(1);
        let (fleet, _, constraint) = generate(&spec).unwrap();
        assert_eq!(constraint.value, rat(fleet.mu_total()));
    }

    #[test]
    fn power_with_discrete_jobs_is_rejected() {
        let spec = GenSpec::new(
            1,
            ConstraintKind::PowerCap,
            JobGen::Discrete {
                count: (1, 3),
                weight: (1, 10),
            },
        );
        assert!(matches!(
            generate(&spec),
            Err(GenError::PowerNeedsDivisible)
        ));
    }
}
