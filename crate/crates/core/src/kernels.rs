//! Reusable combinatorial kernels: the pseudo-polynomial subset-selection DP
//! over machine speeds, its rounding wrapper with a `(1 - epsilon)` speed
//! guarantee, a trimmed-list subset-sum approximation, and the LPT list
//! scheduler.

use num::{BigInt, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::model::{AssignmentRow, Machine, Schedule};
use crate::rational::{rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("at least one machine is required")]
    NoMachines,
    #[error("machine speeds must be at least 1")]
    ZeroSpeed,
    #[error("epsilon must lie strictly between 0 and 1")]
    InvalidEpsilon,
    #[error("speed table of {cells} cells is too large; round the speeds first")]
    TableTooLarge { cells: u128 },
}

/// Dynamic program over (machine prefix, exact total speed): cell `(i, v)`
/// holds the minimum total marginal power of a subset of the first `i`
/// machines whose speeds sum to exactly `v`, or `None` when no such subset
/// exists. Columns run 1..=m*V where V is the fastest input speed.
#[derive(Debug)]
pub struct DpTable {
    machines: Vec<(u64, u64)>, // (speed, marginal power) in input order
    cols: usize,
    power: Vec<Option<u64>>,
    take: Vec<bool>,
}

impl DpTable {
    fn idx(&self, row: usize, col: usize) -> usize {
        debug_assert!(col >= 1 && col <= self.cols);
        row * self.cols + (col - 1)
    }

    /// Minimum power for the first `row + 1` machines at exact speed `col`.
    pub fn min_power(&self, row: usize, col: u64) -> Option<u64> {
        if col == 0 || col as usize > self.cols {
            return None;
        }
        self.power[self.idx(row, col as usize)]
    }

    pub fn rows(&self) -> usize {
        self.machines.len()
    }

    /// Column count; the table extent is `rows() * cols()` cells.
    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reconstruct(&self, speed: u64) -> Vec<usize> {
        let mut subset = Vec::new();
        let mut row = self.machines.len() - 1;
        let mut col = speed;
        loop {
            if col == 0 {
                break;
            }
            if self.take[self.idx(row, col as usize)] {
                subset.push(row);
                col -= self.machines[row].0;
            }
            if row == 0 {
                break;
            }
            row -= 1;
        }
        subset.reverse();
        subset
    }
}

/// Fills the DP table for `machines` given as `(speed, marginal_power)`
/// pairs. A machine may realize a column on its own (the take branch applies
/// whenever its speed is at most the column), with the empty prefix worth
/// zero power. Runs in O(m^2 V) for maximum speed V.
pub fn dp_min_power(machines: &[(u64, u64)]) -> Result<DpTable, KernelError> {
    if machines.is_empty() {
        return Err(KernelError::NoMachines);
    }
    if machines.iter().any(|&(speed, _)| speed == 0) {
        return Err(KernelError::ZeroSpeed);
    }
    let max_speed = machines.iter().map(|&(s, _)| s).max().unwrap();
    let rows = machines.len();
    // the table is pseudo-polynomial in the speeds; refuse absurd extents
    const MAX_CELLS: u128 = 1 << 26;
    let cells = (rows as u128) * (rows as u128) * u128::from(max_speed);
    if cells > MAX_CELLS {
        return Err(KernelError::TableTooLarge { cells });
    }
    let cols = rows * usize::try_from(max_speed).expect("bounded by the cell check");
    let mut table = DpTable {
        machines: machines.to_vec(),
        cols,
        power: vec![None; rows * cols],
        take: vec![false; rows * cols],
    };
    for (row, &(speed, marginal)) in machines.iter().enumerate() {
        for col in 1..=cols {
            let keep = if row > 0 {
                table.power[table.idx(row - 1, col)]
            } else {
                None
            };
            let take = if speed as usize <= col {
                let rest = col as u64 - speed;
                let base = if rest == 0 {
                    Some(0)
                } else if row > 0 {
                    table.power[table.idx(row - 1, rest as usize)]
                } else {
                    None
                };
                base.map(|p| p + marginal)
            } else {
                None
            };
            let i = table.idx(row, col);
            // Ties prefer the keep branch, so witnesses are deterministic.
            match (keep, take) {
                (Some(k), Some(t)) if t < k => {
                    table.power[i] = Some(t);
                    table.take[i] = true;
                }
                (Some(k), _) => table.power[i] = Some(k),
                (None, Some(t)) => {
                    table.power[i] = Some(t);
                    table.take[i] = true;
                }
                (None, None) => {}
            }
        }
    }
    Ok(table)
}

/// The largest exact speed whose minimum power fits within the margin, with
/// one witness subset (positions into the DP input). Returns `(0, [])` when
/// nothing fits.
pub fn best_subset_under_power(table: &DpTable, power_cap_margin: u64) -> (u64, Vec<usize>) {
    let last = table.rows() - 1;
    for col in (1..=table.cols() as u64).rev() {
        if let Some(p) = table.min_power(last, col) {
            if p <= power_cap_margin {
                return (col, table.reconstruct(col));
            }
        }
    }
    (0, Vec::new())
}

/// Speeds rounded down by the scale `K = epsilon * V / m`.
#[derive(Debug)]
pub struct RoundedSpeeds {
    pub scale: Rational,
    pub rounded: Vec<u64>,
}

/// Rounds every speed down to `floor(speed / K)`; exact integer arithmetic,
/// no floats involved.
pub fn round_speeds(machines: &[&Machine], epsilon: &Rational) -> RoundedSpeeds {
    let max_speed = machines.iter().map(|m| m.speed).max().unwrap_or(1);
    let m = machines.len() as u64;
    let scale = epsilon * rat(max_speed) / rat(m);
    let rounded = machines
        .iter()
        .map(|mach| {
            // floor(speed / K) = floor(speed * m * q / (p * V)) for eps = p/q
            let numer = BigInt::from(mach.speed) * BigInt::from(m) * epsilon.denom();
            let denom = epsilon.numer() * BigInt::from(max_speed);
            (numer / denom).to_u64().expect("rounded speed fits u64")
        })
        .collect();
    RoundedSpeeds { scale, rounded }
}

#[derive(Debug)]
pub struct FptasPick {
    /// Machine ids of the chosen working set.
    pub subset: Vec<usize>,
    /// True (unrounded) total speed of the subset.
    pub achieved_speed: u64,
    /// Cell count of the rounded DP table.
    pub rounded_table_size: usize,
}

/// Maximum-total-speed subset selection under a marginal-power margin, via
/// speed rounding and the exact DP on the rounded values. The returned true
/// speed is at least `(1 - epsilon)` times the optimum; the rounded table has
/// at most `m * m * floor(m / epsilon)` cells.
///
/// Machines whose activation power exceeds the margin are discarded before
/// choosing the rounding scale: the speed guarantee rests on the optimum
/// being at least the fastest candidate's speed, which only holds over
/// machines that can actually be switched on.
pub fn fptas_max_speed(
    machines: &[&Machine],
    margin: u64,
    epsilon: &Rational,
) -> Result<FptasPick, KernelError> {
    if machines.is_empty() {
        return Err(KernelError::NoMachines);
    }
    if !epsilon.is_positive() || *epsilon >= rat(1) {
        return Err(KernelError::InvalidEpsilon);
    }
    let fitting: Vec<&Machine> = machines
        .iter()
        .filter(|m| m.marginal_power() <= margin)
        .copied()
        .collect();
    if fitting.is_empty() {
        return Ok(FptasPick {
            subset: Vec::new(),
            achieved_speed: 0,
            rounded_table_size: 0,
        });
    }
    let rounding = round_speeds(&fitting, epsilon);
    // Machines rounded to speed zero contribute power but no profit; they can
    // never appear in an optimal rounded subset. The fastest fitting machine
    // always rounds to at least floor(m / epsilon) >= 1.
    let kept: Vec<usize> = (0..fitting.len())
        .filter(|&i| rounding.rounded[i] >= 1)
        .collect();
    let dp_input: Vec<(u64, u64)> = kept
        .iter()
        .map(|&i| (rounding.rounded[i], fitting[i].marginal_power()))
        .collect();
    let table = dp_min_power(&dp_input)?;
    let (_, positions) = best_subset_under_power(&table, margin);
    let mut subset: Vec<usize> = positions.iter().map(|&p| fitting[kept[p]].id).collect();
    subset.sort_unstable();
    let achieved_speed = positions.iter().map(|&p| fitting[kept[p]].speed).sum();
    Ok(FptasPick {
        subset,
        achieved_speed,
        rounded_table_size: table.rows() * table.cols(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumPick {
    /// Chosen job indices, ascending.
    pub indices: Vec<usize>,
    pub total: u64,
}

/// Maximal subset sum under a capacity, via the classical trimmed-list
/// scheme: achievable sums are kept sorted, each weight is merged in, sums
/// beyond the capacity are dropped, and sums within a relative
/// `delta = epsilon / (2n)` of a kept sum are pruned. The result is at least
/// `(1 - epsilon)` times the best achievable sum.
pub fn subset_sum_max_work(
    weights: &[u64],
    work_capacity: &Rational,
    epsilon: &Rational,
) -> Result<SubsetSumPick, KernelError> {
    if !epsilon.is_positive() || *epsilon >= rat(1) {
        return Err(KernelError::InvalidEpsilon);
    }
    if work_capacity.is_negative() || weights.is_empty() {
        return Ok(SubsetSumPick {
            indices: Vec::new(),
            total: 0,
        });
    }
    let total: u64 = weights.iter().sum();
    let cap = crate::rational::floor_to_u64(work_capacity)
        .unwrap_or(0)
        .min(total);
    if rat(total) <= *work_capacity {
        return Ok(SubsetSumPick {
            indices: (0..weights.len()).collect(),
            total,
        });
    }

    const NO_NODE: u32 = u32::MAX;
    // arena of (job, parent) links so trimmed entries stay reconstructible
    let mut arena: Vec<(u32, u32)> = Vec::new();
    let mut list: Vec<(u64, u32)> = vec![(0, NO_NODE)];

    // keep y only if y * 2nq > last * (2nq + p), i.e. y > last * (1 + delta)
    let n = BigInt::from(weights.len() as u64);
    let delta_denom = BigInt::from(2) * &n * epsilon.denom();
    let delta_edge = &delta_denom + epsilon.numer();

    for (job, &w) in weights.iter().enumerate() {
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(list.len() * 2);
        let mut shifted = list
            .iter()
            .filter_map(|&(sum, node)| {
                let s = sum + w;
                (s <= cap).then(|| {
                    arena.push((job as u32, node));
                    (s, (arena.len() - 1) as u32)
                })
            })
            .peekable();
        let mut original = list.iter().copied().peekable();
        loop {
            let pick_original = match (original.peek(), shifted.peek()) {
                (Some(&(a, _)), Some(&(b, _))) => a <= b,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let item = if pick_original {
                original.next().unwrap()
            } else {
                shifted.next().unwrap()
            };
            match merged.last() {
                Some(&(last, _)) => {
                    if BigInt::from(item.0) * &delta_denom > BigInt::from(last) * &delta_edge {
                        merged.push(item);
                    }
                }
                None => merged.push(item),
            }
        }
        list = merged;
    }

    let &(best, mut node) = list.last().expect("list retains the zero sum");
    let mut indices = Vec::new();
    while node != NO_NODE {
        let (job, parent) = arena[node as usize];
        indices.push(job as usize);
        node = parent;
    }
    indices.sort_unstable();
    Ok(SubsetSumPick {
        indices,
        total: best,
    })
}

/// Longest-processing-time list scheduling for machines of unequal speeds:
/// jobs in non-increasing weight order (ties by original index) each go to
/// the machine on which they would finish earliest (ties by position in the
/// given machine order). On identical machines this coincides with
/// least-loaded placement; with distinct speeds the finish-time rule is the
/// one that carries the 19/12 worst-case ratio, whereas raw least-loaded
/// placement can park a job on an arbitrarily slow machine.
/// Returns a schedule over exactly the given machines.
pub fn lpt_assign(weights: &[u64], machines: &[&Machine]) -> Result<Schedule, KernelError> {
    if machines.is_empty() {
        return Err(KernelError::NoMachines);
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by_key(|&j| (std::cmp::Reverse(weights[j]), j));

    let mut times: Vec<Rational> = vec![Rational::zero(); machines.len()];
    let mut loads: Vec<u64> = vec![0; machines.len()];
    let mut jobs: Vec<Vec<usize>> = vec![Vec::new(); machines.len()];
    for j in order {
        let finish_at = |pos: usize| &times[pos] + rat(weights[j]) / rat(machines[pos].speed);
        let target = (0..machines.len())
            .min_by(|&a, &b| finish_at(a).cmp(&finish_at(b)).then(a.cmp(&b)))
            .expect("machines non-empty");
        loads[target] += weights[j];
        times[target] += rat(weights[j]) / rat(machines[target].speed);
        jobs[target].push(j);
    }

    let rows = machines
        .iter()
        .enumerate()
        .map(|(pos, m)| {
            let mut assigned = std::mem::take(&mut jobs[pos]);
            assigned.sort_unstable();
            AssignmentRow {
                machine: m.id,
                work: rat(loads[pos]),
                time: times[pos].clone(),
                jobs: Some(assigned),
            }
        })
        .collect();
    Ok(Schedule::from_rows(rows).expect("distinct machines"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{makespan, Fleet};
    use crate::rational::ratio;

    fn f3() -> Fleet {
        Fleet::new(vec![
            Machine::new(0, 10, 2, 5),
            Machine::new(1, 8, 3, 4),
            Machine::new(2, 6, 1, 2),
        ])
        .unwrap()
    }

    /// Exhaustive reference for the DP: best power at each exact speed.
    fn enum_min_power(machines: &[(u64, u64)], speed: u64) -> Option<u64> {
        let mut best = None;
        for mask in 1u32..(1 << machines.len()) {
            let (mut s, mut p) = (0u64, 0u64);
            for (i, &(speed_i, power_i)) in machines.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s += speed_i;
                    p += power_i;
                }
            }
            if s == speed {
                best = Some(best.map_or(p, |b: u64| b.min(p)));
            }
        }
        best
    }

    #[test]
    fn dp_matches_subset_enumeration_on_reference_fleet() {
        let machines = [(5, 8), (4, 5), (2, 5)];
        let table = dp_min_power(&machines).unwrap();
        assert_eq!(table.min_power(2, 6), Some(10)); // {B, C}
        assert_eq!(table.min_power(2, 5), Some(8)); // {A}
        assert_eq!(table.min_power(2, 11), Some(18)); // all
        for speed in 1..=15 {
            assert_eq!(
                table.min_power(2, speed),
                enum_min_power(&machines, speed),
                "speed {speed}"
            );
        }
    }

    #[test]
    fn dp_single_machine_boundary() {
        let table = dp_min_power(&[(5, 8)]).unwrap();
        assert_eq!(table.min_power(0, 5), Some(8));
        for speed in [1, 2, 3, 4] {
            assert_eq!(table.min_power(0, speed), None);
        }
    }

    #[test]
    fn dp_refuses_absurd_speed_tables() {
        let err = dp_min_power(&[(u64::MAX / 2, 1), (3, 1)]).unwrap_err();
        assert!(matches!(err, KernelError::TableTooLarge { .. }));
    }

    #[test]
    fn dp_identical_machines() {
        let table = dp_min_power(&[(3, 4), (3, 4)]).unwrap();
        assert_eq!(table.min_power(1, 6), Some(8));
        assert_eq!(table.min_power(1, 3), Some(4));
    }

    #[test]
    fn dp_min_power_is_non_increasing_in_rows() {
        let machines = [(5, 8), (4, 5), (2, 5), (3, 2)];
        let table = dp_min_power(&machines).unwrap();
        for col in 1..=table.cols() as u64 {
            let mut prev = None;
            for row in 0..table.rows() {
                let cur = table.min_power(row, col);
                if let (Some(p), Some(c)) = (prev, cur) {
                    assert!(c <= p, "row {row} col {col}");
                }
                if cur.is_some() {
                    prev = cur;
                }
            }
        }
    }

    #[test]
    fn best_subset_reference_cases() {
        let table = dp_min_power(&[(5, 8), (4, 5), (2, 5)]).unwrap();
        let (speed, subset) = best_subset_under_power(&table, 10);
        assert_eq!((speed, subset), (6, vec![1, 2]));
        let (speed, subset) = best_subset_under_power(&table, 4);
        assert_eq!((speed, subset), (0, vec![]));
        let (speed, subset) = best_subset_under_power(&table, 18);
        assert_eq!((speed, subset), (11, vec![0, 1, 2]));
    }

    #[test]
    fn fptas_reference_rounding() {
        let fleet = f3();
        let machines: Vec<&Machine> = fleet.machines().iter().collect();
        let rounding = round_speeds(&machines, &ratio(1, 4));
        assert_eq!(rounding.scale, ratio(5, 12));
        assert_eq!(rounding.rounded, vec![12, 9, 4]);

        let pick = fptas_max_speed(&machines, 10, &ratio(1, 4)).unwrap();
        assert_eq!(pick.subset, vec![1, 2]);
        assert_eq!(pick.achieved_speed, 6);
        // 3/4 of the enumeration optimum 6
        assert!(rat(pick.achieved_speed) >= ratio(3, 4) * rat(6));
    }

    #[test]
    fn fptas_loose_epsilon_still_meets_bound() {
        let fleet = f3();
        let machines: Vec<&Machine> = fleet.machines().iter().collect();
        let pick = fptas_max_speed(&machines, 10, &ratio(9, 10)).unwrap();
        assert!(
            rat(10) * rat(pick.achieved_speed) >= rat(6),
            "speed >= 0.6 * 6 / ... "
        );
        assert!(rat(pick.achieved_speed) >= ratio(1, 10) * rat(6));
    }

    #[test]
    fn fptas_single_machine() {
        let only = Machine::new(0, 9, 1, 7);
        let pick = fptas_max_speed(&[&only], 8, &ratio(1, 2)).unwrap();
        assert_eq!(pick.subset, vec![0]);
        assert_eq!(pick.achieved_speed, 7);
        let pick = fptas_max_speed(&[&only], 7, &ratio(1, 2)).unwrap();
        assert!(pick.subset.is_empty());
        assert_eq!(pick.achieved_speed, 0);
    }

    #[test]
    fn fptas_rejects_bad_epsilon() {
        let only = Machine::new(0, 9, 1, 7);
        for eps in [rat(0), rat(1), rat(2)] {
            assert_eq!(
                fptas_max_speed(&[&only], 8, &eps).unwrap_err(),
                KernelError::InvalidEpsilon
            );
        }
    }

    #[test]
    fn subset_sum_reference_cases() {
        let pick = subset_sum_max_work(&[6, 4, 2], &ratio(24, 5), &ratio(1, 10)).unwrap();
        assert_eq!(
            pick,
            SubsetSumPick {
                indices: vec![1],
                total: 4
            }
        );
        let pick = subset_sum_max_work(&[6, 4, 2], &rat(12), &ratio(1, 10)).unwrap();
        assert_eq!(
            pick,
            SubsetSumPick {
                indices: vec![0, 1, 2],
                total: 12
            }
        );
        let pick = subset_sum_max_work(&[5, 5, 5], &rat(4), &ratio(1, 10)).unwrap();
        assert_eq!(
            pick,
            SubsetSumPick {
                indices: vec![],
                total: 0
            }
        );
    }

    #[test]
    fn subset_sum_witness_adds_up() {
        let weights = [13, 7, 19, 4, 4, 9, 2];
        let pick = subset_sum_max_work(&weights, &rat(31), &ratio(1, 4)).unwrap();
        let sum: u64 = pick.indices.iter().map(|&i| weights[i]).sum();
        assert_eq!(sum, pick.total);
        assert!(pick.total <= 31);
    }

    #[test]
    fn lpt_reference_traces() {
        let fleet = f3();
        let b = &fleet.machines()[1];
        let a = &fleet.machines()[0];
        // machines in the order [B, A]: 6 finishes earliest on A (1.2), then
        // 4 and 2 stack on B (1.5); makespan 1.5 vs the two-machine optimum 1.5
        let s = lpt_assign(&[6, 4, 2], &[b, a]).unwrap();
        assert_eq!(makespan(&s), ratio(3, 2));
        assert_eq!(s.row(0).unwrap().jobs.as_deref(), Some(&[0][..]));
        assert_eq!(s.row(0).unwrap().time, ratio(6, 5));
        assert_eq!(s.row(1).unwrap().jobs.as_deref(), Some(&[1, 2][..]));
        assert_eq!(s.row(1).unwrap().time, ratio(3, 2));

        let s = lpt_assign(&[6], &[b]).unwrap();
        assert_eq!(makespan(&s), ratio(3, 2));

        let m0 = Machine::new(0, 5, 1, 3);
        let m1 = Machine::new(1, 5, 1, 3);
        let s = lpt_assign(&[3, 3], &[&m0, &m1]).unwrap();
        assert_eq!(makespan(&s), rat(1));
        assert_eq!(s.row(0).unwrap().work, rat(3));
        assert_eq!(s.row(1).unwrap().work, rat(3));
    }

    #[test]
    fn lpt_is_deterministic() {
        let fleet = f3();
        let machines: Vec<&Machine> = fleet.machines().iter().collect();
        let weights = [9, 9, 3, 3, 3, 1];
        let a = lpt_assign(&weights, &machines).unwrap();
        let b = lpt_assign(&weights, &machines).unwrap();
        assert_eq!(a, b);
    }
}
