//! Differential approximation for two rows when `|V|` is even.
//!
//! The matching plan `P` and its variant `P'` (first items of the two rows
//! exchanged) are both solved exactly and the better one is kept.

use crate::apx_two::{check_two_row_symmetric, optimal_matchings, plan_from_matchings};
use crate::error::{Error, Result};
use crate::model::{Instance, LoadingPlan, Matching, SolutionTriple};
use crate::pctsp::best_pair_given_plan;

/// A vertex addressed by its place in a two-row plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Depot,
    /// `(row, position)`, both 0-based.
    At(usize, usize),
}

fn profile(plan: &LoadingPlan) -> Result<usize> {
    let rows = plan.rows();
    if rows.len() != 2 || rows[0].len() != rows[1].len() + 1 || rows[1].is_empty() {
        return Err(Error::InvalidPlan(format!(
            "completions need rows of lengths (nu+1, nu) with nu >= 1, got {plan}"
        )));
    }
    Ok(rows[1].len())
}

/// Slot pairs of the first completion for row lengths `(nu+1, nu)`.
pub fn straight_completion_slots(nu: usize) -> Vec<(Slot, Slot)> {
    let mut out: Vec<(Slot, Slot)> = (0..nu).map(|p| (Slot::At(0, p), Slot::At(1, p))).collect();
    out.push((Slot::At(0, nu), Slot::Depot));
    out
}

/// Slot pairs of the second completion for row lengths `(nu+1, nu)`.
pub fn shifted_completion_slots(nu: usize) -> Vec<(Slot, Slot)> {
    let mut out = vec![(Slot::At(0, 0), Slot::At(0, 1))];
    for p in 2..=nu {
        out.push((Slot::At(0, p), Slot::At(1, p - 2)));
    }
    out.push((Slot::At(1, nu - 1), Slot::Depot));
    out
}

fn resolve(plan: &LoadingPlan, slots: &[(Slot, Slot)]) -> Result<Matching> {
    let at = |s: Slot| match s {
        Slot::Depot => 0,
        Slot::At(r, p) => plan.rows()[r][p],
    };
    Matching::new(slots.iter().map(|&(a, b)| (at(a), at(b))))
}

pub fn straight_completion(plan: &LoadingPlan) -> Result<Matching> {
    let nu = profile(plan)?;
    resolve(plan, &straight_completion_slots(nu))
}

pub fn shifted_completion(plan: &LoadingPlan) -> Result<Matching> {
    let nu = profile(plan)?;
    resolve(plan, &shifted_completion_slots(nu))
}

/// Exchanges the first items of rows 1 and 2.
pub fn swap_first(plan: &LoadingPlan) -> Result<LoadingPlan> {
    let mut rows = plan.rows().to_vec();
    if rows.len() != 2 || rows[0].is_empty() || rows[1].is_empty() {
        return Err(Error::InvalidPlan(format!("swap needs two non-empty rows, got {plan}")));
    }
    let a = rows[0][0];
    rows[0][0] = rows[1][0];
    rows[1][0] = a;
    Ok(LoadingPlan::new(rows))
}

/// The plan built from the optimum matchings and its swapped variant.
pub fn even_plans(inst: &Instance) -> Result<(LoadingPlan, Option<LoadingPlan>)> {
    let (mp, md) = optimal_matchings(inst)?;
    let plan = plan_from_matchings(inst.n, &mp, &md)?;
    if plan.max_row_len() > inst.c {
        return Err(Error::Capacity(format!("plan {plan} exceeds capacity {}", inst.c)));
    }
    let alt = if inst.n > 1 && plan.rows().iter().all(|r| !r.is_empty()) {
        Some(swap_first(&plan)?)
    } else {
        None
    };
    Ok((plan, alt))
}

pub fn dapx_even(inst: &Instance) -> Result<SolutionTriple> {
    check_two_row_symmetric(inst)?;
    if inst.vertex_count() % 2 == 1 {
        return Err(Error::Precondition(format!(
            "even vertex count required, got {}",
            inst.vertex_count()
        )));
    }
    let (plan, alt) = even_plans(inst)?;
    let first = best_pair_given_plan(inst, &plan)?;
    match alt {
        Some(p) => {
            let second = best_pair_given_plan(inst, &p)?;
            Ok(if inst.goal.better(&second.value, &first.value) {
                second
            } else {
                first
            })
        }
        None => Ok(first),
    }
}
