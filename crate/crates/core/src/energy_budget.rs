//! Solvers for minimizing makespan under an energy budget: an exact
//! efficiency-ordered solve for divisible workloads, and LPT over machine
//! prefixes plus a subset-sum top-up for atomic jobs.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use thiserror::Error;

use crate::kernels::{self, KernelError};
use crate::model::{
    energy, makespan, Fleet, Guarantee, Infeasibility, JobSpec, Machine, Schedule, SolveOutcome,
    SolveResult,
};
use crate::rational::{format_rational, rat, ratio, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnergyBudgetError {
    #[error("this solver handles divisible workloads only")]
    NeedsDivisibleJobs,
    #[error("this solver handles discrete workloads only")]
    NeedsDiscreteJobs,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone)]
pub struct EnergyBudgetProblem {
    pub fleet: Fleet,
    pub jobs: JobSpec,
    pub energy_budget: Rational,
}

impl EnergyBudgetProblem {
    pub fn new(fleet: Fleet, jobs: JobSpec, energy_budget: Rational) -> Self {
        EnergyBudgetProblem {
            fleet,
            jobs,
            energy_budget,
        }
    }
}

/// Peak achievable work under an energy budget, over all makespans.
///
/// For a fixed makespan T, the most work the budget buys is a fractional
/// fill in efficiency order with per-machine time cap T and energy cap
/// `budget - gamma_total * T`. That quantity is piecewise linear and concave
/// in T, so its peak sits at one of the breakpoints where capping the next
/// efficiency prefix exactly exhausts the budget. Returns the peak work and
/// the makespan attaining it.
pub fn max_achievable_work(fleet: &Fleet, energy_budget: &Rational) -> (Rational, Rational) {
    let order = fleet.efficiency_order();
    let gamma = fleet.gamma_total();
    let mut best_work = Rational::zero();
    let mut best_makespan = Rational::zero();
    let mut speed_sum: u64 = 0;
    let mut marginal_sum: u64 = 0;
    for &id in &order {
        let m = &fleet.machines()[id];
        speed_sum += m.speed;
        marginal_sum += m.marginal_power();
        // T where running this prefix flat out uses the whole budget
        let t = energy_budget / rat(gamma + marginal_sum);
        let work = rat(speed_sum) * &t;
        if work > best_work {
            best_work = work;
            best_makespan = t;
        }
    }
    (best_work, best_makespan)
}

/// Exact minimum makespan for a divisible workload under an energy budget.
///
/// Machines are sorted by efficiency. In an optimal assignment the best
/// machines run for the whole makespan and at most one machine runs a partial
/// stint on the remaining energy, so it suffices to test, for every prefix
/// length k, both the pure candidate (prefix k covers the work alone, budget
/// permitting) and the mixed candidate where the prefix is time-capped and
/// machine k+1 absorbs the leftover budget. The smallest candidate whose
/// witness satisfies every cap is the optimum. On infeasible instances the
/// peak achievable work is returned as a certificate.
pub fn min_makespan_divisible(
    problem: &EnergyBudgetProblem,
) -> Result<SolveResult, EnergyBudgetError> {
    let JobSpec::Divisible { total_work } = &problem.jobs else {
        return Err(EnergyBudgetError::NeedsDivisibleJobs);
    };
    let fleet = &problem.fleet;
    let budget = &problem.energy_budget;
    let order = fleet.efficiency_order();
    let gamma = rat(fleet.gamma_total());

    struct Candidate {
        makespan: Rational,
        prefix: usize,
        partial: Option<(usize, Rational)>, // (machine id, time)
    }
    let mut best: Option<Candidate> = None;
    let mut consider = |c: Candidate| match &best {
        Some(b) if b.makespan <= c.makespan => {}
        _ => best = Some(c),
    };

    let mut speed_sum = Rational::zero();
    let mut marginal_sum = Rational::zero();
    for (k, &id) in order.iter().enumerate() {
        let m = &fleet.machines()[id];
        speed_sum += rat(m.speed);
        marginal_sum += rat(m.marginal_power());

        // Pure candidate: machines order[0..=k] run the whole makespan.
        let t = total_work / &speed_sum;
        let used = (&marginal_sum + &gamma) * &t;
        if used <= *budget {
            consider(Candidate {
                makespan: t,
                prefix: k + 1,
                partial: None,
            });
        }

        // Mixed candidate: this prefix is time-capped and the next machine
        // in efficiency order spends exactly the leftover energy.
        if let Some(&next_id) = order.get(k + 1) {
            let next = &fleet.machines()[next_id];
            let eta = next.efficiency();
            let denom = &speed_sum - &eta * (&gamma + &marginal_sum);
            if denom.is_zero() {
                continue; // work gain per unit makespan cancels; boundary
                          // candidates cover this regime
            }
            let t = (total_work - &eta * budget) / denom;
            if !t.is_positive() {
                continue;
            }
            let leftover = budget - (&gamma + &marginal_sum) * &t;
            let partial_time = &leftover / rat(next.marginal_power());
            if partial_time.is_negative() || partial_time > t {
                continue;
            }
            consider(Candidate {
                makespan: t,
                prefix: k + 1,
                partial: Some((next_id, partial_time)),
            });
        }
    }

    let Some(winner) = best else {
        let (peak_work, peak_makespan) = max_achievable_work(fleet, budget);
        return Ok(SolveResult::Infeasible(Infeasibility::EnergyShortfall {
            peak_work,
            peak_makespan,
        }));
    };

    let mut times: Vec<(usize, Rational)> = order[..winner.prefix]
        .iter()
        .map(|&id| (id, winner.makespan.clone()))
        .collect();
    if let Some((id, t)) = &winner.partial {
        times.push((*id, t.clone()));
    }
    let schedule = Schedule::from_times(fleet, &times)
        .expect("ids from the fleet")
        .with_idle_rows(fleet);
    debug_assert_eq!(schedule.total_work(), *total_work);

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("prefix_len".into(), winner.prefix.to_string());
    diagnostics.insert(
        "partial_machine".into(),
        winner
            .partial
            .as_ref()
            .map_or("none".into(), |(id, _)| id.to_string()),
    );
    diagnostics.insert(
        "energy_used".into(),
        format_rational(&energy(&schedule, fleet).expect("fleet ids")),
    );
    Ok(SolveResult::Solved(SolveOutcome {
        schedule,
        objective: winner.makespan,
        guarantee: Guarantee::exact(),
        diagnostics,
    }))
}

/// LPT-with-top-up for atomic jobs under an energy budget.
///
/// Machines are scanned in efficiency order. For every prefix length r, LPT
/// assigns all jobs to the first r machines; among the prefixes that meet the
/// budget, the one with the smallest makespan is kept (ties go to the longer
/// prefix). Adding a machine usually shortens the LPT schedule but can
/// lengthen it when the newcomer is much slower, so feasible prefixes are
/// compared by makespan rather than by length alone. The leftover budget is
/// then converted into a work capacity for the next machine in efficiency
/// order, a near-maximal job subset (trimmed-list subset sum) is moved there,
/// and the remaining jobs are LPT-assigned within the prefix again. The
/// makespan is within `19/12 + epsilon` of the optimum.
pub fn min_makespan_nondivisible(
    problem: &EnergyBudgetProblem,
    epsilon: &Rational,
) -> Result<SolveResult, EnergyBudgetError> {
    let JobSpec::Discrete { weights } = &problem.jobs else {
        return Err(EnergyBudgetError::NeedsDiscreteJobs);
    };
    let fleet = &problem.fleet;
    let budget = &problem.energy_budget;
    let order = fleet.efficiency_order();

    let prefix_machines = |r: usize| -> Vec<&Machine> {
        order[..r].iter().map(|&id| &fleet.machines()[id]).collect()
    };

    let mut feasible: Option<(usize, Schedule, Rational)> = None;
    let mut min_prefix_energy: Option<Rational> = None;
    for r in 1..=order.len() {
        let schedule = kernels::lpt_assign(weights, &prefix_machines(r))?;
        let used = energy(&schedule, fleet).expect("fleet ids");
        if min_prefix_energy.as_ref().is_none_or(|m| used < *m) {
            min_prefix_energy = Some(used.clone());
        }
        if used <= *budget
            && feasible
                .as_ref()
                .is_none_or(|(_, best, _)| makespan(&schedule) <= makespan(best))
        {
            feasible = Some((r, schedule, used));
        }
    }

    let Some((r, prefix_schedule, prefix_energy)) = feasible else {
        return Ok(SolveResult::Infeasible(
            Infeasibility::AllPrefixesExceedBudget {
                min_prefix_energy: min_prefix_energy.expect("at least one machine"),
            },
        ));
    };

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("prefix_len".into(), r.to_string());

    let mut schedule = prefix_schedule;
    if r < order.len() {
        // Top up the first machine beyond the accepted prefix with jobs paid
        // for by the leftover budget, then re-run LPT on what remains.
        let extra_id = order[r];
        let extra = &fleet.machines()[extra_id];
        let margin = budget - &prefix_energy;
        let capacity = extra.efficiency() * &margin;
        let pick = kernels::subset_sum_max_work(weights, &capacity, epsilon)?;
        if !pick.indices.is_empty() {
            let moved: std::collections::BTreeSet<usize> = pick.indices.iter().copied().collect();
            let mut remaining_weights = Vec::new();
            let mut remaining_jobs = Vec::new();
            for (j, &w) in weights.iter().enumerate() {
                if !moved.contains(&j) {
                    remaining_weights.push(w);
                    remaining_jobs.push(j);
                }
            }
            let rest = kernels::lpt_assign(&remaining_weights, &prefix_machines(r))?;
            let mut rows: Vec<crate::model::AssignmentRow> = rest
                .rows()
                .iter()
                .map(|row| {
                    let mut row = row.clone();
                    row.jobs = row
                        .jobs
                        .map(|local| local.into_iter().map(|j| remaining_jobs[j]).collect());
                    row
                })
                .collect();
            let moved_work = rat(pick.total);
            rows.push(crate::model::AssignmentRow {
                machine: extra_id,
                time: extra.time_for(&moved_work),
                work: moved_work,
                jobs: Some(pick.indices.clone()),
            });
            let candidate = Schedule::from_rows(rows).expect("distinct machines");
            let candidate_energy = energy(&candidate, fleet).expect("fleet ids");
            // Moving jobs can reshuffle the prefix unfavourably; keep the
            // top-up only when it still fits the budget and actually helps.
            if candidate_energy <= *budget && makespan(&candidate) < makespan(&schedule) {
                diagnostics.insert("topped_up_machine".into(), extra_id.to_string());
                diagnostics.insert("moved_jobs".into(), pick.indices.len().to_string());
                schedule = candidate;
            }
        }
    }

    let objective = makespan(&schedule);
    let schedule = schedule.with_idle_rows(fleet);
    diagnostics.insert(
        "energy_used".into(),
        format_rational(&energy(&schedule, fleet).expect("fleet ids")),
    );
    Ok(SolveResult::Solved(SolveOutcome {
        schedule,
        objective,
        guarantee: Guarantee::approx(ratio(19, 12) + epsilon, Some(epsilon.clone())),
        diagnostics,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{verify_schedule, Constraint, Machine};

    fn f3() -> Fleet {
        Fleet::new(vec![
            Machine::new(0, 10, 2, 5),
            Machine::new(1, 8, 3, 4),
            Machine::new(2, 6, 1, 2),
        ])
        .unwrap()
    }

    #[test]
    fn divisible_reference_all_machines() {
        let p = EnergyBudgetProblem::new(f3(), JobSpec::divisible(rat(12)).unwrap(), rat(28));
        let result = min_makespan_divisible(&p).unwrap();
        let outcome = result.expect_solved("F3 E=28");
        assert_eq!(outcome.objective, ratio(12, 11));
        assert!(outcome.guarantee.exact);
        assert_eq!(outcome.schedule.working_set().len(), 3);
        // all three time-capped at 12/11; energy 24 * 12/11 = 288/11 <= 28
        let used = energy(&outcome.schedule, &p.fleet).unwrap();
        assert_eq!(used, ratio(288, 11));
        assert!(used <= rat(28));
    }

    #[test]
    fn divisible_reference_infeasible_with_certificate() {
        let p = EnergyBudgetProblem::new(f3(), JobSpec::divisible(rat(12)).unwrap(), rat(24));
        let result = min_makespan_divisible(&p).unwrap();
        let SolveResult::Infeasible(Infeasibility::EnergyShortfall {
            peak_work,
            peak_makespan,
        }) = result
        else {
            panic!("expected infeasible outcome");
        };
        assert_eq!(peak_work, ratio(216, 19));
        assert!(peak_work > ratio(113, 10) && peak_work < ratio(114, 10));
        assert_eq!(peak_makespan, ratio(24, 19));
    }

    #[test]
    fn divisible_generous_budget_hits_speed_floor() {
        let p = EnergyBudgetProblem::new(f3(), JobSpec::divisible(rat(12)).unwrap(), rat(1000));
        let result = min_makespan_divisible(&p).unwrap();
        assert_eq!(
            result.expect_solved("slack budget").objective,
            ratio(12, 11)
        );
    }

    #[test]
    fn divisible_mixed_candidate_wins_when_budget_is_tight() {
        // Budget below the all-machines pure candidate (288/11 ~ 26.18) but
        // above the minimum feasible: optimum caps a prefix and gives the
        // remainder a partial stint.
        let p = EnergyBudgetProblem::new(f3(), JobSpec::divisible(rat(12)).unwrap(), rat(26));
        let result = min_makespan_divisible(&p).unwrap();
        let outcome = result.expect_solved("F3 E=26");
        let jobs = JobSpec::divisible(rat(12)).unwrap();
        let report = verify_schedule(
            &outcome.schedule,
            &p.fleet,
            &jobs,
            &Constraint::energy_budget(rat(26)),
        );
        assert!(report.passed(), "{:?}", report.violations);
        assert!(outcome.objective > ratio(12, 11));
    }

    #[test]
    fn divisible_rejects_discrete_jobs() {
        let p = EnergyBudgetProblem::new(f3(), JobSpec::discrete(vec![3]).unwrap(), rat(28));
        assert_eq!(
            min_makespan_divisible(&p).unwrap_err(),
            EnergyBudgetError::NeedsDivisibleJobs
        );
    }

    #[test]
    fn nondivisible_reference_feasible() {
        let jobs = JobSpec::discrete(vec![6, 4, 2]).unwrap();
        let p = EnergyBudgetProblem::new(f3(), jobs.clone(), rat(34));
        let result = min_makespan_nondivisible(&p, &ratio(1, 10)).unwrap();
        let outcome = result.expect_solved("F3 E=34");
        // whole-fleet prefix: 6 -> A, 4 -> B, 2 -> C at energy 26.8
        assert_eq!(outcome.objective, ratio(6, 5));
        assert_eq!(energy(&outcome.schedule, &p.fleet).unwrap(), ratio(134, 5));
        let report = verify_schedule(
            &outcome.schedule,
            &p.fleet,
            &jobs,
            &Constraint::energy_budget(rat(34)),
        );
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn nondivisible_reference_infeasible() {
        let jobs = JobSpec::discrete(vec![6, 4, 2]).unwrap();
        let p = EnergyBudgetProblem::new(f3(), jobs, rat(26));
        let result = min_makespan_nondivisible(&p, &ratio(1, 10)).unwrap();
        let SolveResult::Infeasible(Infeasibility::AllPrefixesExceedBudget { min_prefix_energy }) =
            result
        else {
            panic!("expected infeasible outcome");
        };
        // cheapest prefix is {B, A} at 26.1
        assert_eq!(min_prefix_energy, ratio(261, 10));
    }

    #[test]
    fn nondivisible_single_job_single_machine() {
        let fleet = Fleet::new(vec![Machine::new(0, 8, 3, 4)]).unwrap();
        let jobs = JobSpec::discrete(vec![6]).unwrap();
        let p = EnergyBudgetProblem::new(fleet, jobs, rat(100));
        let result = min_makespan_nondivisible(&p, &ratio(1, 10)).unwrap();
        let outcome = result.expect_solved("forced placement");
        assert_eq!(outcome.objective, ratio(3, 2));
        assert_eq!(
            outcome.schedule.row(0).unwrap().jobs.as_deref(),
            Some(&[0][..])
        );
    }

    #[test]
    fn nondivisible_budget_respected_exactly() {
        let jobs = JobSpec::discrete(vec![9, 7, 5, 3, 2, 2]).unwrap();
        for budget in [30u64, 40, 60, 90] {
            let p = EnergyBudgetProblem::new(f3(), jobs.clone(), rat(budget));
            if let SolveResult::Solved(outcome) =
                min_makespan_nondivisible(&p, &ratio(1, 10)).unwrap()
            {
                let used = energy(&outcome.schedule, &p.fleet).unwrap();
                assert!(used <= rat(budget), "budget {budget}: used {used}");
            }
        }
    }

    #[test]
    fn peak_work_is_monotone_in_budget() {
        let fleet = f3();
        let (w24, _) = max_achievable_work(&fleet, &rat(24));
        let (w28, _) = max_achievable_work(&fleet, &rat(28));
        assert!(w24 < w28);
        // linearity in the budget: peak scales proportionally
        let (w48, _) = max_achievable_work(&fleet, &rat(48));
        assert_eq!(w48, w24 * rat(2));
    }
}
