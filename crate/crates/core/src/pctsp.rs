//! Best tour for a fixed loading plan.
//!
//! With the plan fixed, a pickup tour must visit every row front to back and
//! a delivery tour back to front. The reachable prefixes are antichains of
//! this chain partition, encoded as one consumed-prefix counter per row. The
//! last visited vertex is the last consumed item of some row, so a state is
//! `(counter vector, last row)`.

use crate::error::{Error, Result};
use crate::model::{Direction, Goal, Instance, LoadingPlan, SolutionTriple, Tour, Value};
use crate::scaled::ScaledMatrix;

const UNSET: i128 = i128::MAX;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpStats {
    /// `(counter vector, last row)` states holding a finite value.
    pub states: usize,
}

fn check_plan(n: usize, plan: &LoadingPlan) -> Result<()> {
    let mut seen = vec![false; n + 1];
    for row in plan.rows() {
        for &v in row {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPlan(format!("plan {plan} is not a partition of 1..{n}")));
            }
            seen[v] = true;
        }
    }
    if seen.iter().skip(1).any(|s| !s) {
        return Err(Error::InvalidPlan(format!("plan {plan} misses some item of 1..{n}")));
    }
    Ok(())
}

/// Optimal tour under already-oriented weights (always minimised).
///
/// Rows must partition `1..w.size()-1`; this is not rechecked here.
pub fn best_tour_scaled(w: &ScaledMatrix, plan: &LoadingPlan, dir: Direction) -> (Tour, i128, DpStats) {
    let chains: Vec<Vec<usize>> = plan
        .rows()
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| match dir {
            Direction::Pickup => r.clone(),
            Direction::Delivery => r.iter().rev().copied().collect(),
        })
        .collect();
    let m = chains.len();
    if m == 0 {
        return (Tour::identity(1), 0, DpStats::default());
    }
    let mut stride = vec![1usize; m];
    for r in 1..m {
        stride[r] = stride[r - 1] * (chains[r - 1].len() + 1);
    }
    let total = stride[m - 1] * (chains[m - 1].len() + 1);
    let mut best = vec![UNSET; total * m];
    let mut parent = vec![u8::MAX; total * m];
    let mut counters = vec![0usize; m];
    let mut stats = DpStats::default();
    for idx in 1..total {
        // decode the mixed-radix counter vector
        let mut rest = idx;
        for r in (0..m).rev() {
            counters[r] = rest / stride[r];
            rest %= stride[r];
        }
        for r in 0..m {
            if counters[r] == 0 {
                continue;
            }
            let v = chains[r][counters[r] - 1];
            let prev = idx - stride[r];
            let cell = idx * m + r;
            if prev == 0 {
                best[cell] = w.get(0, v);
                stats.states += 1;
                continue;
            }
            let mut b = UNSET;
            let mut arg = u8::MAX;
            for s in 0..m {
                let cs = if s == r { counters[s] - 1 } else { counters[s] };
                if cs == 0 {
                    continue;
                }
                let pv = best[prev * m + s];
                if pv == UNSET {
                    continue;
                }
                let cand = pv + w.get(chains[s][cs - 1], v);
                if cand < b {
                    b = cand;
                    arg = s as u8;
                }
            }
            if b != UNSET {
                best[cell] = b;
                parent[cell] = arg;
                stats.states += 1;
            }
        }
    }
    let full = total - 1;
    let mut b = UNSET;
    let mut last = 0;
    for r in 0..m {
        let pv = best[full * m + r];
        if pv == UNSET {
            continue;
        }
        let cand = pv + w.get(*chains[r].last().unwrap(), 0);
        if cand < b {
            b = cand;
            last = r;
        }
    }
    let n: usize = chains.iter().map(Vec::len).sum();
    let mut seq = vec![0usize; n + 1];
    let mut idx = full;
    let mut r = last;
    for pos in (1..=n).rev() {
        let cnt = (idx / stride[r]) % (chains[r].len() + 1);
        seq[pos] = chains[r][cnt - 1];
        let p = parent[idx * m + r];
        idx -= stride[r];
        r = p as usize;
    }
    (Tour::new(seq).expect("plan partitions the items"), b, stats)
}

/// Best tour consistent with `plan` under `d`, in the given direction and goal.
pub fn best_tour_given_plan(inst: &Instance, plan: &LoadingPlan, dir: Direction, goal: Goal) -> Result<(Tour, Value)> {
    check_plan(inst.n, plan)?;
    let d = match dir {
        Direction::Pickup => &inst.dp,
        Direction::Delivery => &inst.dd,
    };
    let w = ScaledMatrix::oriented(d, goal);
    let (tour, v, _) = best_tour_scaled(&w, plan, dir);
    Ok((tour, w.value(v)))
}

/// Independent best pickup and delivery tours for `plan`.
pub fn best_pair_given_plan(inst: &Instance, plan: &LoadingPlan) -> Result<SolutionTriple> {
    pair_given_plan(inst, plan, inst.goal)
}

/// Same as [`best_pair_given_plan`] with the goal flipped.
pub fn worst_pair_given_plan(inst: &Instance, plan: &LoadingPlan) -> Result<SolutionTriple> {
    pair_given_plan(inst, plan, inst.goal.flip())
}

fn pair_given_plan(inst: &Instance, plan: &LoadingPlan, goal: Goal) -> Result<SolutionTriple> {
    let (tp, _) = best_tour_given_plan(inst, plan, Direction::Pickup, goal)?;
    let (td, _) = best_tour_given_plan(inst, plan, Direction::Delivery, goal)?;
    Ok(inst.triple(plan.clone(), tp, td))
}

/// Reusable evaluator with pre-scaled matrices for both goals.
#[derive(Debug, Clone)]
pub struct PlanEvaluator {
    pick: [ScaledMatrix; 2],
    deliv: [ScaledMatrix; 2],
}

impl PlanEvaluator {
    pub fn new(inst: &Instance) -> Self {
        PlanEvaluator {
            pick: [
                ScaledMatrix::oriented(&inst.dp, Goal::Min),
                ScaledMatrix::oriented(&inst.dp, Goal::Max),
            ],
            deliv: [
                ScaledMatrix::oriented(&inst.dd, Goal::Min),
                ScaledMatrix::oriented(&inst.dd, Goal::Max),
            ],
        }
    }

    fn slot(goal: Goal) -> usize {
        match goal {
            Goal::Min => 0,
            Goal::Max => 1,
        }
    }

    /// Optimal pair value for `plan` under `goal`, with the two tours.
    pub fn pair(&self, plan: &LoadingPlan, goal: Goal) -> (Tour, Tour, Value) {
        let s = Self::slot(goal);
        let (tp, a, _) = best_tour_scaled(&self.pick[s], plan, Direction::Pickup);
        let (td, b, _) = best_tour_scaled(&self.deliv[s], plan, Direction::Delivery);
        (tp, td, self.pick[s].value(a) + self.deliv[s].value(b))
    }
}
