//! Matching-based approximation for two rows.
//!
//! Optimum (near-)perfect matchings for pickup and delivery are merged into
//! a multigraph of paths and even cycles; each component is split between
//! the two rows so that every matched pair ends up either adjacent in a row
//! or across the rows at a row end. The best tours for the resulting plan
//! are then computed exactly.

use crate::error::{Error, Result};
use crate::graph::{components, Component};
use crate::matching::{optimal_near_perfect_matching, optimal_perfect_matching};
use crate::model::{Instance, LoadingPlan, Matching, SolutionTriple};
use crate::pctsp::best_pair_given_plan;

/// Builds the two rows from explicitly oriented components.
///
/// `depot_seq` lists the depot component after the depot itself,
/// `(v_1, ..., v_L)`: its first `ceil(L/2)` vertices open row 1 and the rest,
/// reversed, open row 2. Each other sequence `(v_1, ..., v_M)` appends its
/// first `floor(M/2)` vertices to row 1 and the rest, reversed, to row 2.
pub fn plan_from_oriented_components(depot_seq: &[usize], others: &[Vec<usize>]) -> LoadingPlan {
    let mut row1 = Vec::new();
    let mut row2 = Vec::new();
    let half = depot_seq.len().div_ceil(2);
    row1.extend_from_slice(&depot_seq[..half]);
    row2.extend(depot_seq[half..].iter().rev());
    for seq in others {
        let half = seq.len() / 2;
        row1.extend_from_slice(&seq[..half]);
        row2.extend(seq[half..].iter().rev());
    }
    LoadingPlan::new(vec![row1, row2])
}

/// Deterministic orientation of the components of `mp + md` on `0..=n`.
///
/// Returns the depot sequence (without the depot) and the other sequences in
/// order of smallest vertex.
pub fn oriented_components(n: usize, mp: &Matching, md: &Matching) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    oriented_components_on(&(0..=n).collect::<Vec<_>>(), mp, md)
}

pub fn oriented_components_on(vertices: &[usize], mp: &Matching, md: &Matching) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    let edges: Vec<(usize, usize)> = mp.pairs().iter().chain(md.pairs()).copied().collect();
    let comps = components(vertices, &edges)
        .ok_or_else(|| Error::InvalidMatching("union of the matchings is not a set of paths and cycles".into()))?;
    let mut depot = Vec::new();
    let mut others = Vec::new();
    for Component { seq, .. } in comps {
        if seq.contains(&0) {
            depot = depot_sequence(&seq);
        } else {
            others.push(seq);
        }
    }
    Ok((depot, others))
}

/// Depot component closed into a cycle, walked from 0 toward its smaller
/// neighbour, depot dropped.
fn depot_sequence(seq: &[usize]) -> Vec<usize> {
    let len = seq.len();
    if len == 1 {
        return Vec::new();
    }
    let p = seq.iter().position(|&v| v == 0).unwrap();
    let fwd = seq[(p + 1) % len];
    let back = seq[(p + len - 1) % len];
    // an open chain is closed through its two ends
    let forward = fwd <= back;
    (1..len)
        .map(|s| if forward { seq[(p + s) % len] } else { seq[(p + len - s) % len] })
        .collect()
}

fn check_matchings(n: usize, mp: &Matching, md: &Matching) -> Result<()> {
    let verts: Vec<usize> = (0..=n).collect();
    let ok = |m: &Matching| {
        if verts.len().is_multiple_of(2) {
            m.is_perfect_on(&verts)
        } else {
            m.is_near_perfect_on(&verts)
        }
    };
    if !ok(mp) || !ok(md) {
        return Err(Error::InvalidMatching(format!(
            "matchings must be {} on 0..={n}",
            if verts.len().is_multiple_of(2) { "perfect" } else { "near-perfect" }
        )));
    }
    Ok(())
}

/// Two-row plan in which both matchings are plan-consistent.
pub fn plan_from_matchings(n: usize, mp: &Matching, md: &Matching) -> Result<LoadingPlan> {
    check_matchings(n, mp, md)?;
    let (depot, others) = oriented_components(n, mp, md)?;
    Ok(plan_from_oriented_components(&depot, &others))
}

/// Optimum pickup and delivery matchings on `0..=n`.
pub fn optimal_matchings(inst: &Instance) -> Result<(Matching, Matching)> {
    let verts: Vec<usize> = (0..=inst.n).collect();
    if verts.len().is_multiple_of(2) {
        Ok((
            optimal_perfect_matching(&verts, &inst.dp, inst.goal)?,
            optimal_perfect_matching(&verts, &inst.dd, inst.goal)?,
        ))
    } else {
        Ok((
            optimal_near_perfect_matching(&verts, &inst.dp, inst.goal)?.0,
            optimal_near_perfect_matching(&verts, &inst.dd, inst.goal)?.0,
        ))
    }
}

pub fn check_two_row_symmetric(inst: &Instance) -> Result<()> {
    if inst.k != 2 {
        return Err(Error::Precondition(format!("two rows required, instance has k = {}", inst.k)));
    }
    if !inst.is_symmetric() {
        return Err(Error::Precondition("symmetric distances required".to_string()));
    }
    if inst.c < inst.n.div_ceil(2) {
        return Err(Error::Precondition(format!("capacity {} is below ceil(n/2)", inst.c)));
    }
    Ok(())
}

pub fn apx_2dtspms(inst: &Instance) -> Result<SolutionTriple> {
    check_two_row_symmetric(inst)?;
    let (mp, md) = optimal_matchings(inst)?;
    apx_with_matchings(inst, &mp, &md)
}

/// Same as [`apx_2dtspms`] with injected matchings.
pub fn apx_with_matchings(inst: &Instance, mp: &Matching, md: &Matching) -> Result<SolutionTriple> {
    check_two_row_symmetric(inst)?;
    let plan = plan_from_matchings(inst.n, mp, md)?;
    if plan.max_row_len() > inst.c {
        return Err(Error::Capacity(format!("plan {plan} exceeds capacity {}", inst.c)));
    }
    best_pair_given_plan(inst, &plan)
}
