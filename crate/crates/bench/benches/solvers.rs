//! Criterion benchmarks for the solver kernels and the enumeration oracle,
//! on fixed seeded fleets at the scales the test corpus uses.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use schedcon::energy_budget::{
    min_makespan_divisible, min_makespan_nondivisible, EnergyBudgetProblem,
};
use schedcon::kernels::{dp_min_power, fptas_max_speed, lpt_assign, subset_sum_max_work};
use schedcon::makespan_budget::{min_energy_nondivisible, MakespanBudgetProblem};
use schedcon::model::{Constraint, Fleet, JobSpec, Machine};
use schedcon::oracle::exact_assignment_enum;
use schedcon::power::{min_energy_under_power, EnergyGreedyMode, PowerProblem};
use schedcon::rational::{rat, ratio};

/// Deterministic pseudo-random fleet without pulling in an rng dependency.
fn fleet(m: usize, salt: u64) -> Fleet {
    let mut state = salt.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
    let mut next = move |range: u64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % range
    };
    Fleet::new(
        (0..m)
            .map(|id| {
                let marginal = 1 + next(50);
                let idle = next(50);
                Machine::new(id, idle + marginal, idle, 1 + next(50))
            })
            .collect(),
    )
    .unwrap()
}

fn weights(n: usize, salt: u64) -> Vec<u64> {
    let mut state = salt.wrapping_mul(0xD134_2543_DE82_EF95).wrapping_add(3);
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            1 + state % 100
        })
        .collect()
}

fn bench_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernels");
    for m in [8usize, 12, 16] {
        let f = fleet(m, m as u64);
        let pairs: Vec<(u64, u64)> = f
            .machines()
            .iter()
            .map(|mach| (mach.speed, mach.marginal_power()))
            .collect();
        group.bench_with_input(BenchmarkId::new("dp_min_power", m), &pairs, |b, pairs| {
            b.iter(|| dp_min_power(pairs).unwrap())
        });
        let machines: Vec<&Machine> = f.machines().iter().collect();
        let margin = f.marginal_power_total() / 2;
        group.bench_with_input(BenchmarkId::new("fptas_eps_1_10", m), &machines, |b, ms| {
            b.iter(|| fptas_max_speed(ms, margin, &ratio(1, 10)).unwrap())
        });
    }
    let jobs = weights(64, 5);
    group.bench_function("subset_sum_trimmed_n64", |b| {
        let cap = rat(jobs.iter().sum::<u64>() / 2);
        b.iter(|| subset_sum_max_work(&jobs, &cap, &ratio(1, 10)).unwrap())
    });
    let f = fleet(8, 11);
    let machines: Vec<&Machine> = f.machines().iter().collect();
    group.bench_function("lpt_n64_m8", |b| {
        b.iter(|| lpt_assign(&jobs, &machines).unwrap())
    });
    group.finish();
}

fn bench_solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solvers");
    let f = fleet(12, 2);
    let cap = f.gamma_total() + f.marginal_power_total() / 2;
    let power = PowerProblem::new(f.clone(), rat(100), cap).unwrap();
    group.bench_function("energy_under_power_m12", |b| {
        b.iter(|| min_energy_under_power(&power, EnergyGreedyMode::Corrected).unwrap())
    });

    let budget = (rat(f.marginal_power_total()) + rat(f.gamma_total())) * rat(100)
        / rat(f.speed_total())
        * ratio(3, 2);
    let divisible = EnergyBudgetProblem::new(
        f.clone(),
        JobSpec::divisible(rat(100)).unwrap(),
        budget.clone(),
    );
    group.bench_function("energy_budget_divisible_m12", |b| {
        b.iter(|| min_makespan_divisible(&divisible).unwrap())
    });

    let jobs = weights(24, 7);
    let discrete = EnergyBudgetProblem::new(
        f.clone(),
        JobSpec::discrete(jobs.clone()).unwrap(),
        budget * rat(4),
    );
    group.bench_function("energy_budget_lpt_topup_m12_n24", |b| {
        b.iter(|| min_makespan_nondivisible(&discrete, &ratio(1, 10)).unwrap())
    });

    let span = rat(jobs.iter().sum::<u64>()) / rat(f.speed_total()) * rat(3);
    let packing = MakespanBudgetProblem::new(f.clone(), JobSpec::discrete(jobs).unwrap(), span);
    group.bench_function("makespan_budget_first_fit_m12_n24", |b| {
        b.iter(|| min_energy_nondivisible(&packing).unwrap())
    });
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    let f = fleet(4, 3);
    let jobs = weights(10, 9);
    let total = rat(jobs.iter().sum::<u64>());
    let budget = &total / rat(f.speed_total()) * rat(3);
    group.bench_function("assignment_enum_4^10", |b| {
        b.iter(|| {
            exact_assignment_enum(&f, &jobs, &Constraint::makespan_budget(budget.clone())).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_kernels, bench_solvers, bench_oracle);
criterion_main!(benches);
