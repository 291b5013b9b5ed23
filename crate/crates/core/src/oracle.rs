//! Brute-force extremes and exhaustive reference checks for small instances.
//!
//! Extremes enumerate loading plans, not tour pairs: every plan is a family
//! of non-empty ordered rows, built by inserting items `1..=n` in turn, so a
//! plan is produced once regardless of row labels. Each plan is then solved
//! in both goals with the fixed-plan DP.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::feasibility::{delivery_consistent, pickup_consistent};
use crate::model::{Direction, DistanceMatrix, Edge, Goal, Instance, LoadingPlan, Matching, SolutionTriple, Tour, TspInstance, Value};
use crate::pctsp::PlanEvaluator;
use crate::tsp::held_karp;

pub const DEFAULT_ORACLE_CAP: usize = 8;

/// Items fixed before the enumeration fans out over threads.
const SPLIT_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremes {
    pub opt: SolutionTriple,
    pub wor: SolutionTriple,
    /// Distinct plans visited.
    pub plans: usize,
}

fn grow(rows: &mut Vec<Vec<usize>>, next: usize, k: usize, c: usize, stop: usize, f: &mut dyn FnMut(&[Vec<usize>])) {
    if next > stop {
        f(rows);
        return;
    }
    for r in 0..rows.len() {
        if rows[r].len() >= c {
            continue;
        }
        for pos in 0..=rows[r].len() {
            rows[r].insert(pos, next);
            grow(rows, next + 1, k, c, stop, f);
            rows[r].remove(pos);
        }
    }
    if rows.len() < k {
        rows.push(vec![next]);
        grow(rows, next + 1, k, c, stop, f);
        rows.pop();
    }
}

/// Calls `f` once per loading plan of `1..=n` into at most `k` rows of at
/// most `c` items, ignoring row labels and empty rows.
pub fn for_each_plan(n: usize, k: usize, c: usize, mut f: impl FnMut(&LoadingPlan)) {
    grow(&mut Vec::new(), 1, k, c, n, &mut |rows| f(&LoadingPlan::new(rows.to_vec())));
}

pub fn count_plans(n: usize, k: usize, c: usize) -> usize {
    let mut count = 0;
    for_each_plan(n, k, c, |_| count += 1);
    count
}

#[derive(Debug, Clone)]
struct Best {
    value: Value,
    plan: LoadingPlan,
    pickup: Tour,
    delivery: Tour,
}

fn keep(slot: &mut Option<Best>, goal: Goal, cand: Best) {
    if slot.as_ref().is_none_or(|b| goal.better(&cand.value, &b.value)) {
        *slot = Some(cand);
    }
}

/// OPT and WOR with witnesses; `n` must not exceed `cap`.
pub fn exact_extremes_capped(inst: &Instance, cap: usize) -> Result<Extremes> {
    if inst.n > cap {
        return Err(Error::CapExceeded { size: inst.n, cap });
    }
    if inst.k * inst.c < inst.n {
        return Err(Error::Capacity(format!("k*c = {} is below n = {}", inst.k * inst.c, inst.n)));
    }
    let (n, k, c) = (inst.n, inst.k, inst.c);
    let eval = PlanEvaluator::new(inst);
    let goal = inst.goal;
    let mut prefixes = Vec::new();
    grow(&mut Vec::new(), 1, k, c, SPLIT_DEPTH.min(n), &mut |rows| {
        prefixes.push(rows.to_vec())
    });
    let parts: Vec<(Option<Best>, Option<Best>, usize)> = prefixes
        .into_par_iter()
        .map(|mut rows| {
            let (mut best, mut worst, mut count) = (None, None, 0);
            let start = rows.iter().map(Vec::len).sum::<usize>() + 1;
            grow(&mut rows, start, k, c, n, &mut |rows| {
                count += 1;
                let plan = LoadingPlan::new(rows.to_vec());
                let (tp, td, v) = eval.pair(&plan, goal);
                keep(
                    &mut best,
                    goal,
                    Best {
                        value: v,
                        plan: plan.clone(),
                        pickup: tp,
                        delivery: td,
                    },
                );
                let (tp, td, v) = eval.pair(&plan, goal.flip());
                keep(
                    &mut worst,
                    goal.flip(),
                    Best {
                        value: v,
                        plan,
                        pickup: tp,
                        delivery: td,
                    },
                );
            });
            (best, worst, count)
        })
        .collect();
    let (mut best, mut worst, mut plans) = (None, None, 0);
    for (b, w, cnt) in parts {
        plans += cnt;
        if let Some(b) = b {
            keep(&mut best, goal, b);
        }
        if let Some(w) = w {
            keep(&mut worst, goal.flip(), w);
        }
    }
    let triple = |b: Best| inst.triple(b.plan.padded(k), b.pickup, b.delivery);
    let none = || Error::Internal("no loading plan enumerated".into());
    Ok(Extremes {
        opt: triple(best.ok_or_else(none)?),
        wor: triple(worst.ok_or_else(none)?),
        plans,
    })
}

pub fn exact_extremes(inst: &Instance) -> Result<Extremes> {
    exact_extremes_capped(inst, DEFAULT_ORACLE_CAP)
}

/// Best and worst tour of a TSP instance by exact DP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TourExtremes {
    pub best: (Tour, Value),
    pub worst: (Tour, Value),
}

pub fn tsp_extremes(inst: &TspInstance, cap: usize) -> Result<TourExtremes> {
    let best = held_karp(inst, cap)?;
    let worst = held_karp(&TspInstance::new(inst.d.clone(), inst.goal.flip()), cap)?;
    Ok(TourExtremes { best, worst })
}

/// Extremes of the combined instance; `worst.0` is the worst combined tour.
pub fn sigma_extremes(inst: &Instance) -> Result<TourExtremes> {
    tsp_extremes(&inst.sigma(), crate::tsp::DEFAULT_EXACT_CAP)
}

/// Predecessor and successor of `x` in `t`, and the cycle on the remaining
/// vertices obtained by joining them.
pub fn shortcut(t: &Tour, x: usize) -> (usize, usize, Vec<usize>) {
    let (i, j) = t.neighbours(x);
    let rest = t.vertices().iter().copied().filter(|&v| v != x).collect();
    (i, j, rest)
}

/// Calls `f` on every tour of `0..size` starting at the depot.
pub fn for_each_tour(size: usize, mut f: impl FnMut(&[usize])) {
    let mut seq: Vec<usize> = (0..size).collect();
    permute(&mut seq, 1, &mut f);
}

fn permute(seq: &mut [usize], from: usize, f: &mut dyn FnMut(&[usize])) {
    if from + 1 >= seq.len() {
        f(seq);
        return;
    }
    for i in from..seq.len() {
        seq.swap(from, i);
        permute(seq, from + 1, f);
        seq.swap(from, i);
    }
}

/// Best consistent tour for `plan` by filtering all permutations.
pub fn brute_tour_given_plan(inst: &Instance, plan: &LoadingPlan, dir: Direction, goal: Goal) -> Option<(Tour, Value)> {
    let d = match dir {
        Direction::Pickup => &inst.dp,
        Direction::Delivery => &inst.dd,
    };
    let mut best: Option<(Vec<usize>, Value)> = None;
    for_each_tour(inst.vertex_count(), |seq| {
        let t = Tour::new(seq.to_vec()).expect("permutation of 0..size");
        let ok = match dir {
            Direction::Pickup => pickup_consistent(&t, plan),
            Direction::Delivery => delivery_consistent(&t, plan),
        };
        if !ok {
            return;
        }
        let v = d.cycle_cost(seq);
        if best.as_ref().is_none_or(|(_, b)| goal.better(&v, b)) {
            best = Some((seq.to_vec(), v));
        }
    });
    best.map(|(s, v)| (Tour::new(s).unwrap(), v))
}

/// Whether some plan with at most `k` rows of at most `c` items fits both
/// tours, trying every row assignment.
pub fn brute_feasible(tp: &Tour, td: &Tour, k: usize, c: usize) -> bool {
    let items = &tp.vertices()[1..];
    let n = items.len();
    let mut assign = vec![0usize; n];
    loop {
        let mut rows = vec![Vec::new(); k];
        for (p, &v) in items.iter().enumerate() {
            rows[assign[p]].push(v);
        }
        if rows.iter().all(|r| r.len() <= c) && delivery_consistent(td, &LoadingPlan::new(rows)) {
            return true;
        }
        // next assignment in base k
        let mut p = 0;
        while p < n && assign[p] + 1 == k {
            assign[p] = 0;
            p += 1;
        }
        if p == n {
            return false;
        }
        assign[p] += 1;
    }
}

/// Optimal perfect (even count) or near-perfect (odd count) matching by
/// enumeration.
pub fn brute_matching(vertices: &[usize], d: &DistanceMatrix, goal: Goal) -> (Matching, Value) {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<Edge>, out: &mut dyn FnMut(&[Edge])) {
        if rest.len() < 2 {
            out(cur);
            return;
        }
        let a = rest.remove(0);
        for i in 0..rest.len() {
            let b = rest.remove(i);
            cur.push((a, b));
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, b);
        }
        rest.insert(0, a);
    }
    let mut best: Option<(Vec<(usize, usize)>, Value)> = None;
    let exposed: Vec<Option<usize>> = if vertices.len() % 2 == 1 {
        vertices.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    for skip in exposed {
        let mut rest: Vec<usize> = vertices.iter().copied().filter(|&v| Some(v) != skip).collect();
        rec(&mut rest, &mut Vec::new(), &mut |pairs| {
            let w: Value = pairs.iter().map(|&(a, b)| d.get(a, b)).sum();
            if best.as_ref().is_none_or(|(_, b)| goal.better(&w, b)) {
                best = Some((pairs.to_vec(), w));
            }
        });
    }
    let (pairs, w) = best.unwrap_or_default();
    (Matching::new(pairs).expect("enumerated pairs are disjoint"), w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioReport {
    /// `value / OPT`; `None` when OPT is zero and the value is not.
    pub standard: Option<Value>,
    /// `(value - WOR) / (OPT - WOR)`, 1 when the two extremes coincide.
    pub differential: Value,
}

pub fn ratio_report(value: Value, opt: Value, wor: Value) -> RatioReport {
    let standard = if !opt.is_zero() {
        Some(value / opt)
    } else if value.is_zero() {
        Some(Value::from_integer(1))
    } else {
        None
    };
    let differential = if opt == wor {
        Value::from_integer(1)
    } else {
        (value - wor) / (opt - wor)
    };
    RatioReport { standard, differential }
}
