//! Loading-plan consistency for pairs of tours.
//!
//! Items are ranked by pickup position, and `pi[p]` is the rank of the p-th
//! picked item in the *reversed* delivery tour. Two items may share a row iff
//! they are picked and (reverse-)delivered in the same order, i.e. they form
//! an ascent of `pi`. Conflicting pairs are exactly the inversions, so rows
//! are increasing subsequences and the minimum row count is the length of
//! the longest decreasing subsequence.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Edge, Instance, LoadingPlan, SolutionTriple, Tour};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictPermutation {
    /// Items in pickup order.
    pub order: Vec<usize>,
    /// `pi[p]`: 0-based rank of `order[p]` in the reversed delivery tour.
    pub pi: Vec<usize>,
}

impl ConflictPermutation {
    /// Unordered conflicting item pairs, `(min, max)` sorted.
    pub fn conflicts(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.pi.len() {
            for q in p + 1..self.pi.len() {
                if self.pi[p] > self.pi[q] {
                    let (a, b) = (self.order[p], self.order[q]);
                    out.push((a.min(b), a.max(b)));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn check_pair(tp: &Tour, td: &Tour) -> Result<()> {
    if tp.len() != td.len() {
        return Err(Error::Dimension(format!(
            "pickup tour has {} vertices, delivery tour {}",
            tp.len(),
            td.len()
        )));
    }
    Ok(())
}

pub fn conflict_permutation(tp: &Tour, td: &Tour) -> Result<ConflictPermutation> {
    check_pair(tp, td)?;
    let rev_rank = td.reverse().ranks();
    let order: Vec<usize> = tp.vertices()[1..].to_vec();
    let pi = order.iter().map(|&v| rev_rank[v] - 1).collect();
    Ok(ConflictPermutation { order, pi })
}

/// Minimum number of rows without capacity limit, with a witness.
///
/// Patience piles keep decreasing tops from left to right; each value goes
/// on the leftmost pile whose top is smaller, else opens a new pile.
pub fn min_rows_uncapacitated(tp: &Tour, td: &Tour) -> Result<(usize, LoadingPlan)> {
    let cp = conflict_permutation(tp, td)?;
    let mut tops: Vec<usize> = Vec::new();
    let mut piles: Vec<Vec<usize>> = Vec::new();
    for (p, &x) in cp.pi.iter().enumerate() {
        // tops is strictly decreasing; find first index with top < x
        let idx = tops.partition_point(|&t| t > x);
        if idx == tops.len() {
            tops.push(x);
            piles.push(vec![cp.order[p]]);
        } else {
            tops[idx] = x;
            piles[idx].push(cp.order[p]);
        }
    }
    let rows = piles.len();
    Ok((rows, LoadingPlan::new(piles).canonical()))
}

const FULL: usize = usize::MAX;

/// A plan with `k` rows of capacity `c` making `(tp, td)` consistent, if any.
///
/// Dynamic program over the pickup order. A state is the sorted multiset of
/// `(top, load)` per row, where `top` is `pi` of the last item + 1 (0 when
/// empty) and full rows carry a sentinel top. The state count is polynomial
/// in `n` for fixed `k`.
pub fn feasible_capacitated(tp: &Tour, td: &Tour, k: usize, c: usize) -> Result<Option<LoadingPlan>> {
    let n = tp.len() - 1;
    if k * c < n {
        return Err(Error::Precondition(format!("k*c = {} is below n = {n}", k * c)));
    }
    if c >= n {
        let (rows, plan) = min_rows_uncapacitated(tp, td)?;
        return Ok(if rows <= k { Some(plan.padded(k)) } else { None });
    }
    let cp = conflict_permutation(tp, td)?;
    type State = Vec<(usize, usize)>;
    let start: State = vec![(0, 0); k];
    let mut layers: Vec<HashMap<State, (State, Edge)>> = Vec::with_capacity(n);
    let mut frontier: Vec<State> = vec![start.clone()];
    for &x in &cp.pi {
        let x1 = x + 1;
        let mut next: HashMap<State, (State, (usize, usize))> = HashMap::new();
        for s in &frontier {
            let mut tried: Option<(usize, usize)> = None;
            for (r, &(top, load)) in s.iter().enumerate() {
                if top >= x1 || load >= c || tried == Some((top, load)) {
                    continue;
                }
                tried = Some((top, load));
                let mut t = s.clone();
                t[r] = if load + 1 == c { (FULL, c) } else { (x1, load + 1) };
                t.sort_unstable();
                next.entry(t).or_insert_with(|| (s.clone(), (top, load)));
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        let mut keys: Vec<State> = next.keys().cloned().collect();
        keys.sort_unstable();
        frontier = keys;
        layers.push(next);
    }
    // walk back to recover which row slot each item took
    let mut choice = vec![(0, 0); n];
    let mut s = frontier[0].clone();
    for p in (0..n).rev() {
        let (prev, slot) = layers[p][&s].clone();
        choice[p] = slot;
        s = prev;
    }
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut state: Vec<(usize, usize)> = vec![(0, 0); k];
    for (p, &slot) in choice.iter().enumerate() {
        let r = state
            .iter()
            .position(|&st| st == slot)
            .ok_or_else(|| Error::Internal("feasibility reconstruction lost a row".to_string()))?;
        rows[r].push(cp.order[p]);
        let load = state[r].1 + 1;
        state[r] = if load == c { (FULL, c) } else { (cp.pi[p] + 1, load) };
    }
    Ok(Some(LoadingPlan::new(rows).canonical()))
}

/// Every row is visited front to back by the pickup tour.
pub fn pickup_consistent(tp: &Tour, plan: &LoadingPlan) -> bool {
    let rank = tp.ranks();
    plan.rows().iter().all(|row| {
        row.windows(2)
            .all(|w| w[0] < rank.len() && w[1] < rank.len() && rank[w[0]] < rank[w[1]])
    })
}

/// Every row is visited back to front by the delivery tour.
pub fn delivery_consistent(td: &Tour, plan: &LoadingPlan) -> bool {
    let rank = td.ranks();
    plan.rows().iter().all(|row| {
        row.windows(2)
            .all(|w| w[0] < rank.len() && w[1] < rank.len() && rank[w[0]] > rank[w[1]])
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub violations: Vec<String>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_solution(inst: &Instance, s: &SolutionTriple) -> VerificationReport {
    let mut violations = Vec::new();
    let len = inst.vertex_count();
    for (name, t) in [("pickup", &s.pickup), ("delivery", &s.delivery)] {
        if t.len() != len {
            violations.push(format!("{name} tour has {} vertices, expected {len}", t.len()));
        } else if let Err(e) = Tour::new(t.vertices().to_vec()) {
            violations.push(format!("{name} {e}"));
        }
    }
    violations.extend(s.plan.violations(inst.n, inst.k, inst.c));
    if violations.is_empty() {
        if !pickup_consistent(&s.pickup, &s.plan) {
            violations.push("pickup tour does not load some row front to back".to_string());
        }
        if !delivery_consistent(&s.delivery, &s.plan) {
            violations.push("delivery tour does not unload some row back to front".to_string());
        }
        let v = inst.pair_value(&s.pickup, &s.delivery);
        if v != s.value {
            violations.push(format!("stated value {} differs from recomputed {v}", s.value));
        }
    }
    VerificationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{int, DistanceMatrix, Goal};

    fn t(v: &[usize]) -> Tour {
        Tour::new(v.to_vec()).unwrap()
    }

    #[test]
    fn reverse_pair_has_no_conflicts() {
        let tp = t(&[0, 1, 2, 3]);
        assert!(conflict_permutation(&tp, &tp.reverse()).unwrap().conflicts().is_empty());
    }

    #[test]
    fn identical_tours_form_a_clique() {
        let tp = t(&[0, 1, 2, 3]);
        let c = conflict_permutation(&tp, &tp).unwrap().conflicts();
        assert_eq!(c, vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn row_counts_for_extreme_pairs() {
        let tp = t(&[0, 3, 1, 5, 2, 4]);
        assert_eq!(min_rows_uncapacitated(&tp, &tp).unwrap().0, 5);
        assert_eq!(min_rows_uncapacitated(&tp, &tp.reverse()).unwrap().0, 1);
    }

    #[test]
    fn patience_ties_go_to_lowest_row() {
        // pi = [1, 0, 2]: item 3 could extend either pile, lowest wins
        let tp = t(&[0, 1, 2, 3]);
        let td = t(&[0, 3, 1, 2]);
        let (rows, plan) = min_rows_uncapacitated(&tp, &td).unwrap();
        assert_eq!(rows, 2);
        assert!(pickup_consistent(&tp, &plan) && delivery_consistent(&td, &plan));
    }

    #[test]
    fn reverse_pair_fits_two_halves() {
        let tp = t(&[0, 4, 2, 5, 1, 3]);
        let plan = feasible_capacitated(&tp, &tp.reverse(), 2, 3).unwrap().unwrap();
        assert!(plan.max_row_len() <= 3);
        assert!(pickup_consistent(&tp, &plan) && delivery_consistent(&tp.reverse(), &plan));
    }

    #[test]
    fn identical_three_items_two_rows_infeasible() {
        let tp = t(&[0, 1, 2, 3]);
        assert_eq!(feasible_capacitated(&tp, &tp, 2, 2).unwrap(), None);
        assert_eq!(feasible_capacitated(&tp, &tp, 2, 3).unwrap(), None);
    }

    #[test]
    fn capacity_binds() {
        // one row would suffice without capacity
        let tp = t(&[0, 1, 2, 3, 4]);
        assert_eq!(min_rows_uncapacitated(&tp, &tp.reverse()).unwrap().0, 1);
        let plan = feasible_capacitated(&tp, &tp.reverse(), 2, 2).unwrap().unwrap();
        assert!(plan.violations(4, 2, 2).is_empty());
        assert!(pickup_consistent(&tp, &plan) && delivery_consistent(&tp.reverse(), &plan));
        assert_eq!(feasible_capacitated(&tp, &tp, 4, 1).unwrap().map(|p| p.k()), Some(4));
        assert_eq!(feasible_capacitated(&tp, &tp, 2, 2).unwrap(), None);
    }

    #[test]
    fn verify_flags_problems() {
        let d = DistanceMatrix::constant(4, int(1));
        let inst = Instance::new(3, 2, 2, d.clone(), d, Goal::Min).unwrap();
        let tp = t(&[0, 1, 2, 3]);
        let good = inst.triple(LoadingPlan::new(vec![vec![1, 2], vec![3]]), tp.clone(), tp.reverse());
        assert!(verify_solution(&inst, &good).is_ok());
        let mut dup = good.clone();
        dup.plan = LoadingPlan::new(vec![vec![1, 2], vec![2]]);
        assert!(!verify_solution(&inst, &dup).is_ok());
        let mut wrong_order = good.clone();
        wrong_order.pickup = t(&[0, 2, 1, 3]);
        wrong_order.value = inst.pair_value(&wrong_order.pickup, &wrong_order.delivery);
        assert!(!verify_solution(&inst, &wrong_order).is_ok());
        let mut wrong_value = good;
        wrong_value.value = int(99);
        assert!(!verify_solution(&inst, &wrong_value).is_ok());
    }
}
