//! Solvers for minimizing energy under a makespan limit: an exact
//! efficiency-ordered fill for divisible workloads, and a first-fit-
//! decreasing variant over efficiency-ordered machines for atomic jobs.

use std::collections::BTreeMap;

use num::Zero;
use thiserror::Error;

use crate::model::{
    energy, makespan, Fleet, Guarantee, Infeasibility, JobSpec, Schedule, SolveOutcome, SolveResult,
};
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MakespanBudgetError {
    #[error("this solver handles divisible workloads only")]
    NeedsDivisibleJobs,
    #[error("this solver handles discrete workloads only")]
    NeedsDiscreteJobs,
}

#[derive(Debug, Clone)]
pub struct MakespanBudgetProblem {
    pub fleet: Fleet,
    pub jobs: JobSpec,
    pub makespan_budget: Rational,
}

impl MakespanBudgetProblem {
    pub fn new(fleet: Fleet, jobs: JobSpec, makespan_budget: Rational) -> Self {
        MakespanBudgetProblem {
            fleet,
            jobs,
            makespan_budget,
        }
    }
}

/// Exact minimum energy for a divisible workload under a makespan limit:
/// machines are filled to the limit in efficiency order and the last used
/// machine takes the remainder. Idle power is charged over the realized
/// makespan, which can be below the budget when the first machine absorbs
/// everything.
pub fn min_energy_divisible(
    problem: &MakespanBudgetProblem,
) -> Result<SolveResult, MakespanBudgetError> {
    let JobSpec::Divisible { total_work } = &problem.jobs else {
        return Err(MakespanBudgetError::NeedsDivisibleJobs);
    };
    let fleet = &problem.fleet;
    let budget = &problem.makespan_budget;

    let capacity = rat(fleet.speed_total()) * budget;
    if capacity < *total_work {
        return Ok(SolveResult::Infeasible(Infeasibility::CapacityShortfall {
            capacity,
        }));
    }

    let mut works: Vec<(usize, Rational)> = Vec::new();
    let mut remaining = total_work.clone();
    for &id in &fleet.efficiency_order() {
        if remaining.is_zero() {
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
        works.push((id, take));
    }
    debug_assert!(remaining.is_zero());

    let schedule = Schedule::from_works(fleet, &works)
        .expect("ids from the fleet")
        .with_idle_rows(fleet);
    let objective = energy(&schedule, fleet).expect("fleet ids");
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("working_set_size".into(), works.len().to_string());
    diagnostics.insert(
        "realized_makespan".into(),
        format_rational(&makespan(&schedule)),
    );
    Ok(SolveResult::Solved(SolveOutcome {
        schedule,
        objective,
        guarantee: Guarantee::exact(),
        diagnostics,
    }))
}

/// First-fit-decreasing for atomic jobs under a makespan limit: jobs in
/// non-increasing weight order each go to the first machine, scanning the
/// whole fleet in efficiency order, whose remaining time can take them. A
/// machine joins the working set on its first assignment; the scan order
/// never changes. The working set uses at most twice the optimal machine
/// count and the energy is within `1 + eta_max / eta_min` of optimal.
pub fn min_energy_nondivisible(
    problem: &MakespanBudgetProblem,
) -> Result<SolveResult, MakespanBudgetError> {
    let JobSpec::Discrete { weights } = &problem.jobs else {
        return Err(MakespanBudgetError::NeedsDiscreteJobs);
    };
    let fleet = &problem.fleet;
    let budget = &problem.makespan_budget;
    let order = fleet.efficiency_order();

    let mut job_order: Vec<usize> = (0..weights.len()).collect();
    job_order.sort_by_key(|&j| (std::cmp::Reverse(weights[j]), j));

    let mut times: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut loads: BTreeMap<usize, (u64, Vec<usize>)> = BTreeMap::new();
    for j in job_order {
        let w = weights[j];
        let mut placed = false;
        for &id in &order {
            let m = &fleet.machines()[id];
            let step = rat(w) / rat(m.speed);
            let used = times.entry(id).or_insert_with(Rational::zero);
            if &*used + &step <= *budget {
                *used += step;
                let entry = loads.entry(id).or_insert((0, Vec::new()));
                entry.0 += w;
                entry.1.push(j);
                placed = true;
                break;
            }
        }
        if !placed {
            return Ok(SolveResult::Infeasible(Infeasibility::JobDoesNotFit {
                job: j,
                weight: w,
            }));
        }
    }

    let rows: Vec<crate::model::AssignmentRow> = loads
        .into_iter()
        .map(|(id, (load, mut jobs))| {
            jobs.sort_unstable();
            let work = rat(load);
            let time = fleet.machines()[id].time_for(&work);
            crate::model::AssignmentRow {
                machine: id,
                work,
                time,
                jobs: Some(jobs),
            }
        })
        .collect();
    let schedule = Schedule::from_rows(rows)
        .expect("distinct machines")
        .with_idle_rows(fleet);
    let objective = energy(&schedule, fleet).expect("fleet ids");

    let eta_bound = energy_ratio_bound(fleet);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert(
        "working_set_size".into(),
        schedule.working_set().len().to_string(),
    );
    diagnostics.insert(
        "realized_makespan".into(),
        format_rational(&makespan(&schedule)),
    );
    Ok(SolveResult::Solved(SolveOutcome {
        schedule,
        objective,
        guarantee: Guarantee::approx(eta_bound, None),
        diagnostics,
    }))
}

/// The fleet-wide energy bound `1 + eta_max / eta_min` for the first-fit
/// solver, with efficiencies taken over the whole fleet.
pub fn energy_ratio_bound(fleet: &Fleet) -> Rational {
    let etas: Vec<Rational> = fleet.machines().iter().map(|m| m.efficiency()).collect();
    let eta_max = etas.iter().max().expect("non-empty fleet");
    let eta_min = etas.iter().min().expect("non-empty fleet");
    rat(1) + eta_max / eta_min
}
