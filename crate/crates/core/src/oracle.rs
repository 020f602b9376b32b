//! Independent reference solvers: subset and assignment enumeration, a grid
//! sweep for the divisible energy-budget problem, a fixed-limit fractional
//! fill for the divisible makespan-budget problem, and a time-stepped energy
//! accumulator that cross-checks the closed-form energy evaluation.
//!
//! Everything here is deliberately simple and kept separate from the solver
//! code paths it certifies.

use num::{Signed, Zero};
use thiserror::Error;

use crate::energy_budget::EnergyBudgetProblem;
use crate::model::{energy, makespan, Constraint, ConstraintKind, Fleet, Schedule};
use crate::power::PowerProblem;
use crate::rational::{rat, Rational};

/// Subset enumeration refuses above this machine count.
pub const MAX_SUBSET_MACHINES: usize = 22;
/// Assignment enumeration refuses above this many job-to-machine maps.
pub const MAX_ASSIGNMENT_SPACE: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{candidates} machines exceed the subset enumeration limit of {limit}")]
    TooManyMachines { candidates: usize, limit: usize },
    #[error("{space} assignments exceed the enumeration limit of {limit}")]
    AssignmentSpaceTooLarge { space: u64, limit: u64 },
    #[error("assignment enumeration handles energy and makespan budgets only")]
    UnsupportedConstraint,
    #[error("no feasible configuration exists")]
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    SubsetEnum,
    AssignmentEnum,
    GridSweep,
    FractionalKnapsack,
    StepSimulation,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub objective: Rational,
    pub witness: Schedule,
    pub search_space_size: u64,
    pub method: OracleMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerObjective {
    Makespan,
    Energy,
}

/// Exact optimum for divisible work under a power cap by enumerating every
/// working set whose draw fits the cap. Ties prefer the lexicographically
/// smallest subset.
pub fn exact_power_subset(
    problem: &PowerProblem,
    objective: PowerObjective,
) -> Result<OracleResult, OracleError> {
    let fleet = &problem.fleet;
    let m = fleet.len();
    if m > MAX_SUBSET_MACHINES {
        return Err(OracleError::TooManyMachines {
            candidates: m,
            limit: MAX_SUBSET_MACHINES,
        });
    }
    let margin = problem.margin();
    let gamma = fleet.gamma_total();

    // Comparing W/s1 vs W/s2 and (g+d1)W/s1 vs (g+d2)W/s2 by
    // cross-multiplication keeps the scan in integers.
    let mut best: Option<(u64, u64, Vec<usize>)> = None; // (marginal, speed, ids)
    for mask in 1u64..(1 << m) {
        let mut marginal: u64 = 0;
        let mut speed: u64 = 0;
        for (id, machine) in fleet.machines().iter().enumerate() {
            if mask & (1 << id) != 0 {
                marginal += machine.marginal_power();
                speed += machine.speed;
            }
        }
        if marginal > margin {
            continue;
        }
        let better = match &best {
            None => true,
            Some((best_marginal, best_speed, best_ids)) => {
                let ordering = match objective {
                    PowerObjective::Makespan => {
                        // smaller W/speed means larger speed
                        speed.cmp(best_speed)
                    }
                    PowerObjective::Energy => {
                        let lhs = u128::from(gamma + *best_marginal) * u128::from(speed);
                        let rhs = u128::from(gamma + marginal) * u128::from(*best_speed);
                        lhs.cmp(&rhs)
                    }
                };
                match ordering {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => {
                        let ids: Vec<usize> = (0..m).filter(|id| mask & (1 << id) != 0).collect();
                        ids < *best_ids
                    }
                }
            }
        };
        if better {
            let ids: Vec<usize> = (0..m).filter(|id| mask & (1 << id) != 0).collect();
            best = Some((marginal, speed, ids));
        }
    }

    let (marginal, speed, ids) = best.ok_or(OracleError::Infeasible)?;
    let t = &problem.total_work / rat(speed);
    let times: Vec<(usize, Rational)> = ids.iter().map(|&id| (id, t.clone())).collect();
    let witness = Schedule::from_times(fleet, &times).expect("fleet ids");
    let objective_value = match objective {
        PowerObjective::Makespan => t,
        PowerObjective::Energy => rat(gamma + marginal) * &problem.total_work / rat(speed),
    };
    Ok(OracleResult {
        objective: objective_value,
        witness,
        search_space_size: 1 << m,
        method: OracleMethod::SubsetEnum,
    })
}

/// Exact per-machine quantities scaled by the lcm of the fleet's speeds, so
/// assignment enumeration runs in checked integer arithmetic: a load of `w`
/// work units on machine `i` takes `w * per_unit[i]` scaled seconds and
/// `d_i * w * per_unit[i]` scaled joules, both exactly.
struct ScaledEval {
    marginals: Vec<u128>,
    per_unit: Vec<u128>,
    gamma: u128,
    /// lcm of the speeds: scaled quantity / scale = exact rational value.
    scale: u128,
    /// constraint threshold as (numer * scale, denom): scaled value v is
    /// within the budget iff v * denom <= numer * scale.
    bound_numer: u128,
    bound_denom: u128,
}

impl ScaledEval {
    /// `None` when any intermediate could overflow u128; callers then fall
    /// back to plain rational evaluation.
    fn try_new(fleet: &Fleet, weights: &[u64], bound: &Rational) -> Option<ScaledEval> {
        let mut scale: u128 = 1;
        for m in fleet.machines() {
            let s = u128::from(m.speed);
            scale = scale.checked_mul(s / gcd(scale, s))?;
        }
        let per_unit: Vec<u128> = fleet
            .machines()
            .iter()
            .map(|m| scale / u128::from(m.speed))
            .collect();
        let total_weight: u128 = weights.iter().map(|&w| u128::from(w)).sum();
        // worst-case scaled energy: every job on the slowest machine at the
        // largest marginal power, plus the idle charge
        let max_per_unit = per_unit.iter().max().copied()?;
        let max_marginal = fleet
            .machines()
            .iter()
            .map(|m| u128::from(m.marginal_power()))
            .max()?
            .max(u128::from(fleet.gamma_total()));
        let worst = total_weight
            .checked_mul(max_per_unit)?
            .checked_mul(max_marginal.checked_mul(2)?)?;
        let bound_numer = u128::try_from(bound.numer()).ok()?.checked_mul(scale)?;
        let bound_denom = u128::try_from(bound.denom()).ok()?;
        worst.checked_mul(bound_denom)?;
        Some(ScaledEval {
            marginals: fleet
                .machines()
                .iter()
                .map(|m| u128::from(m.marginal_power()))
                .collect(),
            per_unit,
            gamma: u128::from(fleet.gamma_total()),
            scale,
            bound_numer,
            bound_denom,
        })
    }

    fn scaled_makespan(&self, loads: &[u64]) -> u128 {
        loads
            .iter()
            .zip(&self.per_unit)
            .map(|(&w, &pu)| u128::from(w) * pu)
            .max()
            .unwrap_or(0)
    }

    fn scaled_energy(&self, loads: &[u64]) -> u128 {
        let work: u128 = loads
            .iter()
            .zip(self.per_unit.iter().zip(&self.marginals))
            .map(|(&w, (&pu, &d))| u128::from(w) * pu * d)
            .sum();
        work + self.gamma * self.scaled_makespan(loads)
    }

    fn within_bound(&self, scaled: u128) -> bool {
        scaled * self.bound_denom <= self.bound_numer
    }

    fn to_rational(&self, scaled: u128) -> Rational {
        Rational::new(scaled.into(), self.scale.into())
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn checked_space(fleet: &Fleet, weights: &[u64]) -> Result<u64, OracleError> {
    (fleet.len() as u64)
        .checked_pow(weights.len() as u32)
        .filter(|&s| s <= MAX_ASSIGNMENT_SPACE)
        .ok_or(OracleError::AssignmentSpaceTooLarge {
            space: u64::MAX,
            limit: MAX_ASSIGNMENT_SPACE,
        })
}

/// Walks every job-to-machine map in lexicographic order (last job fastest),
/// keeping per-machine loads incrementally updated, and hands each
/// assignment's loads to the visitor.
fn for_each_assignment(
    machine_count: usize,
    weights: &[u64],
    mut visit: impl FnMut(&[usize], &[u64]),
) {
    let mut assignment = vec![0usize; weights.len()];
    let mut loads = vec![0u64; machine_count];
    loads[0] = weights.iter().sum();
    loop {
        visit(&assignment, &loads);
        let mut pos = weights.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            loads[assignment[pos]] -= weights[pos];
            assignment[pos] += 1;
            if assignment[pos] < machine_count {
                loads[assignment[pos]] += weights[pos];
                break;
            }
            assignment[pos] = 0;
            loads[0] += weights[pos];
        }
    }
}

/// Exact optimum for atomic jobs by enumerating every job-to-machine map in
/// lexicographic order: minimizes the complementary metric subject to the
/// given energy or makespan budget. Returns the first-in-order optimum.
pub fn exact_assignment_enum(
    fleet: &Fleet,
    weights: &[u64],
    constraint: &Constraint,
) -> Result<OracleResult, OracleError> {
    if constraint.kind == ConstraintKind::PowerCap {
        return Err(OracleError::UnsupportedConstraint);
    }
    let space = checked_space(fleet, weights)?;

    let best = match ScaledEval::try_new(fleet, weights, &constraint.value) {
        Some(eval) => {
            let mut best: Option<(u128, Vec<usize>)> = None;
            for_each_assignment(fleet.len(), weights, |assignment, loads| {
                let (feasible_metric, objective) = match constraint.kind {
                    ConstraintKind::EnergyBudget => {
                        (eval.scaled_energy(loads), eval.scaled_makespan(loads))
                    }
                    _ => (eval.scaled_makespan(loads), eval.scaled_energy(loads)),
                };
                if eval.within_bound(feasible_metric)
                    && best.as_ref().is_none_or(|(b, _)| objective < *b)
                {
                    best = Some((objective, assignment.to_vec()));
                }
            });
            best.map(|(scaled, assignment)| (eval.to_rational(scaled), assignment))
        }
        None => {
            let mut best: Option<(Rational, Vec<usize>)> = None;
            for_each_assignment(fleet.len(), weights, |assignment, loads| {
                let (t, e) = rational_metrics(fleet, loads);
                let (feasible, objective) = match constraint.kind {
                    ConstraintKind::EnergyBudget => (e <= constraint.value, t),
                    _ => (t <= constraint.value, e),
                };
                if feasible && best.as_ref().is_none_or(|(b, _)| objective < *b) {
                    best = Some((objective, assignment.to_vec()));
                }
            });
            best
        }
    };

    let (objective, witness_assignment) = best.ok_or(OracleError::Infeasible)?;
    let witness = Schedule::from_job_assignment(fleet, weights, &witness_assignment)
        .expect("machine indices in range");
    Ok(OracleResult {
        objective,
        witness,
        search_space_size: space,
        method: OracleMethod::AssignmentEnum,
    })
}

fn rational_metrics(fleet: &Fleet, loads: &[u64]) -> (Rational, Rational) {
    let mut span = Rational::zero();
    let mut marginal = Rational::zero();
    for (machine, &load) in fleet.machines().iter().zip(loads) {
        let time = rat(load) / rat(machine.speed);
        marginal += rat(machine.marginal_power()) * &time;
        if time > span {
            span = time;
        }
    }
    let energy = marginal + rat(fleet.gamma_total()) * &span;
    (span, energy)
}

/// Minimum number of distinct machines over all assignments meeting the
/// makespan budget, by the same enumeration.
pub fn min_machine_count_under_makespan(
    fleet: &Fleet,
    weights: &[u64],
    budget: &Rational,
) -> Result<Option<usize>, OracleError> {
    checked_space(fleet, weights)?;
    let mut best: Option<usize> = None;
    match ScaledEval::try_new(fleet, weights, budget) {
        Some(eval) => {
            for_each_assignment(fleet.len(), weights, |_, loads| {
                if eval.within_bound(eval.scaled_makespan(loads)) {
                    let used = loads.iter().filter(|&&w| w > 0).count();
                    if best.is_none_or(|b| used < b) {
                        best = Some(used);
                    }
                }
            });
        }
        None => {
            for_each_assignment(fleet.len(), weights, |_, loads| {
                let (t, _) = rational_metrics(fleet, loads);
                if t <= *budget {
                    let used = loads.iter().filter(|&&w| w > 0).count();
                    if best.is_none_or(|b| used < b) {
                        best = Some(used);
                    }
                }
            });
        }
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub enum GridOutcome {
    /// Smallest grid makespan that completes the work, with its witness.
    Feasible(OracleResult),
    /// No grid point completes the work; the peak observed work.
    Infeasible {
        peak_work: Rational,
        peak_makespan: Rational,
    },
}

/// Work achievable within makespan `t` and the energy budget: a fractional
/// fill in efficiency order with per-machine time cap `t` and energy cap
/// `budget - gamma_total * t`. Returns the per-machine times alongside.
fn fill_work_at(
    fleet: &Fleet,
    budget: &Rational,
    t: &Rational,
) -> (Rational, Vec<(usize, Rational)>) {
    let mut energy_left = budget - rat(fleet.gamma_total()) * t;
    let mut work = Rational::zero();
    let mut times = Vec::new();
    if energy_left.is_negative() {
        return (work, times);
    }
    for &id in &fleet.efficiency_order() {
        if !energy_left.is_positive() {
            break;
        }
        let m = &fleet.machines()[id];
        let d = rat(m.marginal_power());
        let affordable = &energy_left / &d;
        let run = if &affordable < t {
            affordable
        } else {
            t.clone()
        };
        if !run.is_positive() {
            continue;
        }
        energy_left -= &d * &run;
        work += rat(m.speed) * &run;
        times.push((id, run));
    }
    (work, times)
}

/// Grid sweep for the divisible energy-budget problem: makespans from the
/// all-machines floor `W / total_speed` up to `W / min_speed` (plus 5%
/// slack), at `resolution` uniform steps, all in exact rationals. Scans
/// upward and stops at the first grid point whose fractional fill reaches the
/// required work; otherwise reports the peak.
pub fn grid_min_makespan_divisible(problem: &EnergyBudgetProblem, resolution: u32) -> GridOutcome {
    let fleet = &problem.fleet;
    let total_work = problem.jobs.total_work();
    let budget = &problem.energy_budget;

    let lo = &total_work / rat(fleet.speed_total());
    let hi = &total_work / rat(fleet.min_speed()) * rat(21) / rat(20);
    let step = (&hi - &lo) / rat(u64::from(resolution));

    let mut peak_work = Rational::zero();
    let mut peak_makespan = lo.clone();
    for k in 0..=resolution {
        let t = &lo + &step * rat(u64::from(k));
        let (work, times) = fill_work_at(fleet, budget, &t);
        if work >= total_work {
            // Trim the least efficient running machine so the witness carries
            // exactly the required work.
            let mut times = times;
            let mut excess = &work - &total_work;
            while excess.is_positive() {
                let (id, run) = times.pop().expect("work came from these machines");
                let speed = rat(fleet.machines()[id].speed);
                let surplus_time = &excess / &speed;
                if surplus_time < run {
                    times.push((id, run - surplus_time));
                    break;
                }
                excess -= speed * run;
            }
            let witness = Schedule::from_times(fleet, &times).expect("fleet ids");
            return GridOutcome::Feasible(OracleResult {
                objective: t,
                witness,
                search_space_size: u64::from(resolution) + 1,
                method: OracleMethod::GridSweep,
            });
        }
        if work > peak_work {
            peak_work = work;
            peak_makespan = t;
        }
    }
    GridOutcome::Infeasible {
        peak_work,
        peak_makespan,
    }
}

/// Minimum energy for divisible work at a fixed makespan limit: fills
/// machines to the limit in efficiency order (the fractional-knapsack
/// optimum for `min sum d_i t_i` subject to the work and time caps) and
/// charges idle power over the realized makespan. `None` when the capacity
/// falls short.
pub fn fractional_min_energy_given_makespan(
    fleet: &Fleet,
    total_work: &Rational,
    budget: &Rational,
) -> Option<OracleResult> {
    if rat(fleet.speed_total()) * budget < *total_work {
        return None;
    }
    let mut remaining = total_work.clone();
    let mut times: Vec<(usize, Rational)> = Vec::new();
    for &id in &fleet.efficiency_order() {
        if !remaining.is_positive() {
            break;
        }
        let m = &fleet.machines()[id];
        let full = rat(m.speed) * budget;
        let take = if remaining >= full {
            full
        } else {
            remaining.clone()
        };
        remaining -= &take;
        times.push((id, m.time_for(&take)));
    }
    let witness = Schedule::from_times(fleet, &times).expect("fleet ids");
    let objective = energy(&witness, fleet).expect("fleet ids");
    Some(OracleResult {
        objective,
        witness,
        search_space_size: fleet.len() as u64,
        method: OracleMethod::FractionalKnapsack,
    })
}

/// Minimum energy for divisible work over every makespan up to the limit,
/// not just the limit itself: evaluates the efficiency-ordered fill at each
/// breakpoint `W / prefix_speed` (clamped to the limit) and keeps the best.
/// Used to measure whether finishing early can beat filling to the limit.
pub fn continuous_min_energy_given_makespan(
    fleet: &Fleet,
    total_work: &Rational,
    budget: &Rational,
) -> Option<OracleResult> {
    let mut candidates: Vec<Rational> = vec![budget.clone()];
    let mut speed_sum: u64 = 0;
    for &id in &fleet.efficiency_order() {
        speed_sum += fleet.machines()[id].speed;
        let t = total_work / rat(speed_sum);
        if t <= *budget {
            candidates.push(t);
        }
    }
    let mut best: Option<OracleResult> = None;
    for t in candidates {
        if let Some(result) = fractional_min_energy_given_makespan(fleet, total_work, &t) {
            if best.as_ref().is_none_or(|b| result.objective < b.objective) {
                best = Some(result);
            }
        }
    }
    best
}

/// Integrates system power over `steps` uniform slices of the makespan: a
/// machine is charged its working power for a slice when it is still running
/// at the slice start, and its idle power otherwise. Equals the closed-form
/// energy exactly whenever every per-machine time is a multiple of the slice
/// width.
pub fn step_simulation_energy(schedule: &Schedule, fleet: &Fleet, steps: u32) -> Rational {
    let total = makespan(schedule);
    if total.is_zero() {
        return Rational::zero();
    }
    let slice = &total / rat(u64::from(steps));
    let mut acc = Rational::zero();
    for machine in fleet.machines() {
        let time = schedule
            .row(machine.id)
            .map(|r| r.time.clone())
            .unwrap_or_else(Rational::zero);
        for k in 0..steps {
            let start = &slice * rat(u64::from(k));
            let rate = if time > start {
                machine.working_power
            } else {
                machine.idle_power
            };
            acc += rat(rate) * &slice;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{verify_schedule, JobSpec, Machine};
    use crate::rational::ratio;

    fn f3() -> Fleet {
        Fleet::new(vec![
            Machine::new(0, 10, 2, 5),
            Machine::new(1, 8, 3, 4),
            Machine::new(2, 6, 1, 2),
        ])
        .unwrap()
    }

    #[test]
    fn power_subset_reference() {
        let p = PowerProblem::new(f3(), rat(12), 16).unwrap();
        let r = exact_power_subset(&p, PowerObjective::Makespan).unwrap();
        assert_eq!(r.objective, rat(2));
        assert_eq!(r.search_space_size, 8);
        assert_eq!(
            r.witness.working_set().into_iter().collect::<Vec<_>>(),
            vec![1, 2]
        );

        let r = exact_power_subset(&p, PowerObjective::Energy).unwrap();
        assert_eq!(r.objective, rat(32));
        assert_eq!(
            r.witness.working_set().into_iter().collect::<Vec<_>>(),
            vec![1, 2]
        );
    }

    #[test]
    fn power_subset_single_machine() {
        let fleet = Fleet::new(vec![Machine::new(0, 8, 3, 4)]).unwrap();
        let p = PowerProblem::new(fleet, rat(8), 9).unwrap();
        let r = exact_power_subset(&p, PowerObjective::Makespan).unwrap();
        assert_eq!(r.objective, rat(2));
        assert_eq!(r.search_space_size, 2);
    }

    #[test]
    fn power_subset_refuses_large_fleets() {
        let machines: Vec<Machine> = (0..23).map(|i| Machine::new(i, 3, 1, 2)).collect();
        let p = PowerProblem::new(Fleet::new(machines).unwrap(), rat(5), 40).unwrap();
        assert!(matches!(
            exact_power_subset(&p, PowerObjective::Makespan),
            Err(OracleError::TooManyMachines { candidates: 23, .. })
        ));
    }

    #[test]
    fn assignment_enum_reference_sweeps() {
        let fleet = f3();
        let weights = [6, 4, 2];
        // minimize energy under makespan 2: optimum 26.1, attained both by
        // 6->B, 4->A, 2->A and by 6->A, 4->B, 2->B; the lexicographic
        // tie-break returns the latter
        let r =
            exact_assignment_enum(&fleet, &weights, &Constraint::makespan_budget(rat(2))).unwrap();
        assert_eq!(r.objective, ratio(261, 10));
        assert_eq!(r.search_space_size, 27);
        assert_eq!(r.witness.row(0).unwrap().jobs.as_deref(), Some(&[0][..]));
        assert_eq!(r.witness.row(1).unwrap().jobs.as_deref(), Some(&[1, 2][..]));
        let other = Schedule::from_job_assignment(&fleet, &weights, &[1, 0, 0]).unwrap();
        assert_eq!(energy(&other, &fleet).unwrap(), r.objective);

        // minimize makespan under energy 34: 1.2 via 6->A, 4->B, 2->C
        let r =
            exact_assignment_enum(&fleet, &weights, &Constraint::energy_budget(rat(34))).unwrap();
        assert_eq!(r.objective, ratio(6, 5));
        assert_eq!(r.witness.row(0).unwrap().jobs.as_deref(), Some(&[0][..]));
        assert_eq!(r.witness.row(1).unwrap().jobs.as_deref(), Some(&[1][..]));
        assert_eq!(r.witness.row(2).unwrap().jobs.as_deref(), Some(&[2][..]));
    }

    #[test]
    fn assignment_enum_one_job_picks_best_machine() {
        let fleet = f3();
        let r =
            exact_assignment_enum(&fleet, &[10], &Constraint::makespan_budget(rat(10))).unwrap();
        // job alone: cheapest energy is d*w/v + gamma*w/v minimized over machines
        // A: 8*2 + 6*2 = 28, B: 5*2.5 + 6*2.5 = 27.5, C: 5*5 + 6*5 = 55
        assert_eq!(r.objective, ratio(55, 2));
        assert_eq!(
            r.witness.working_set().into_iter().collect::<Vec<_>>(),
            vec![1]
        );
    }

    #[test]
    fn assignment_enum_witnesses_verify() {
        let fleet = f3();
        let weights = [6, 4, 2];
        let jobs = JobSpec::discrete(weights.to_vec()).unwrap();
        for constraint in [
            Constraint::makespan_budget(rat(2)),
            Constraint::energy_budget(rat(34)),
        ] {
            let r = exact_assignment_enum(&fleet, &weights, &constraint).unwrap();
            let report = verify_schedule(&r.witness, &fleet, &jobs, &constraint);
            assert!(report.passed(), "{:?}", report.violations);
        }
    }

    #[test]
    fn assignment_enum_infeasible() {
        let fleet = f3();
        let err =
            exact_assignment_enum(&fleet, &[11], &Constraint::makespan_budget(rat(2))).unwrap_err();
        assert_eq!(err, OracleError::Infeasible);
    }

    #[test]
    fn machine_count_minimum() {
        let fleet = f3();
        let count = min_machine_count_under_makespan(&fleet, &[6, 4, 2], &rat(2))
            .unwrap()
            .unwrap();
        assert_eq!(count, 2);
        let count = min_machine_count_under_makespan(&fleet, &[2], &rat(2))
            .unwrap()
            .unwrap();
        assert_eq!(count, 1);
        assert!(min_machine_count_under_makespan(&fleet, &[11], &rat(2))
            .unwrap()
            .is_none());
    }

    #[test]
    fn grid_reference_feasible() {
        let p = EnergyBudgetProblem::new(f3(), JobSpec::divisible(rat(12)).unwrap(), rat(28));
        let GridOutcome::Feasible(r) = grid_min_makespan_divisible(&p, 10_000) else {
            panic!("expected feasible");
        };
        // within one grid step of 12/11
        let lo = ratio(12, 11);
        let hi_range = rat(12) / rat(2) * ratio(21, 20);
        let step = (&hi_range - &lo) / rat(10_000);
        assert!(r.objective >= lo.clone() && r.objective <= lo + step);
    }

    #[test]
    fn grid_reference_infeasible_peak() {
        let p = EnergyBudgetProblem::new(f3(), JobSpec::divisible(rat(12)).unwrap(), rat(24));
        let GridOutcome::Infeasible { peak_work, .. } = grid_min_makespan_divisible(&p, 10_000)
        else {
            panic!("expected infeasible");
        };
        assert!(peak_work > ratio(113, 10) && peak_work < ratio(114, 10));
    }

    #[test]
    fn grid_generous_budget_returns_floor() {
        let p = EnergyBudgetProblem::new(f3(), JobSpec::divisible(rat(12)).unwrap(), rat(100_000));
        let GridOutcome::Feasible(r) = grid_min_makespan_divisible(&p, 1000) else {
            panic!("expected feasible");
        };
        assert_eq!(r.objective, ratio(12, 11));
    }

    #[test]
    fn grid_witness_verifies() {
        let jobs = JobSpec::divisible(rat(12)).unwrap();
        let p = EnergyBudgetProblem::new(f3(), jobs.clone(), rat(28));
        let GridOutcome::Feasible(r) = grid_min_makespan_divisible(&p, 1000) else {
            panic!("expected feasible");
        };
        let report = verify_schedule(
            &r.witness,
            &p.fleet,
            &jobs,
            &Constraint::energy_budget(rat(28)),
        );
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn fractional_fill_reference() {
        let fleet = f3();
        let r = fractional_min_energy_given_makespan(&fleet, &rat(12), &rat(2)).unwrap();
        assert_eq!(r.objective, ratio(142, 5));
        assert!(fractional_min_energy_given_makespan(&fleet, &rat(12), &rat(1)).is_none());
    }

    #[test]
    fn step_simulation_aligned_is_exact() {
        let fleet = f3();
        let s =
            Schedule::from_times(&fleet, &[(0, ratio(6, 5)), (1, rat(1)), (2, rat(1))]).unwrap();
        let sim = step_simulation_energy(&s, &fleet, 60);
        assert_eq!(sim, ratio(134, 5));
        assert_eq!(sim, energy(&s, &fleet).unwrap());
    }

    #[test]
    fn step_simulation_misaligned_error_bound() {
        let fleet = f3();
        let s =
            Schedule::from_times(&fleet, &[(0, ratio(6, 5)), (1, rat(1)), (2, rat(1))]).unwrap();
        let exact = energy(&s, &fleet).unwrap();
        for steps in [7u32, 13, 31] {
            let sim = step_simulation_energy(&s, &fleet, steps);
            let bound = rat(10) * ratio(6, 5) / rat(u64::from(steps)) * rat(3);
            let diff = if sim > exact {
                &sim - &exact
            } else {
                &exact - &sim
            };
            assert!(diff <= bound, "steps {steps}: diff {diff} > bound {bound}");
        }
    }
}
