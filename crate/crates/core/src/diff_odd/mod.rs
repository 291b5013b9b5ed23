//! Differential approximation for two rows when `|V|` is odd.
//!
//! For every vertex `x`, optimum perfect matchings on `V - x` are merged into
//! even cycles. Depending on where the depot sits, one of four constructions
//! produces two completions with their plans such that both matchings extend
//! to plan-consistent tours, and swapping the two edges at `x` for the
//! selected edge turns the union of the completions into a Hamiltonian cycle.
//! All produced plans are solved exactly and the best solution is returned.
//!
//! Case names: `ShortDepotCycle` (x is an item, the depot's cycle has two vertices),
//! `LongDepotCycle` (x is an item, longer depot cycle), `DepotExcludedMulti` (x is the depot,
//! several cycles), `DepotExcludedSingle` (x is the depot, one Hamiltonian cycle).

mod depot;
mod item;

use rayon::prelude::*;

use crate::apx_two::{check_two_row_symmetric, plan_from_oriented_components};
use crate::error::{Error, Result};
use crate::feasibility::feasible_capacitated;
use crate::graph::{components, consistent_tour, remove_edge, single_cycle, tour_from_cycle};
use crate::matching::optimal_perfect_matching;
use crate::model::{Direction, Instance, LoadingPlan, Matching, SolutionTriple, Value};
use crate::pctsp::best_pair_given_plan;

pub use depot::{
    admissible_pairs, alternating_plan, alternating_plan_defined, completion, dispatch_completions, dispatch_row_applies,
    rewired_dispatch_is_hamiltonian, split_plan, staggered_completions, stride_three_edges, CompletionSpec, DISPATCH_ROWS,
};
pub use item::{alternating_completions, swap_cycle, swapped_prefix_plan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OddCase {
    ShortDepotCycle,
    LongDepotCycle,
    DepotExcludedMulti,
    DepotExcludedSingle,
    /// Too few vertices for any construction; a plain matching plan is used.
    Fallback,
}

impl OddCase {
    pub fn name(self) -> &'static str {
        match self {
            OddCase::ShortDepotCycle => "short_depot_cycle",
            OddCase::LongDepotCycle => "long_depot_cycle",
            OddCase::DepotExcludedMulti => "depot_excluded_multi",
            OddCase::DepotExcludedSingle => "depot_excluded_single",
            OddCase::Fallback => "fallback",
        }
    }
}

/// One completion together with the plan it is meant for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub plan: LoadingPlan,
    /// Edges on `V` (a perfect matching on `V - x` with `x` spliced in).
    pub edges: Vec<(usize, usize)>,
    /// Both matchings plus `edges` give plan-consistent tours.
    pub validated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOutcome {
    pub x: usize,
    pub case: OddCase,
    pub mp: Matching,
    pub md: Matching,
    /// Candidate edges on `V - x`, `(min, max)` sorted.
    pub candidates: Vec<(usize, usize)>,
    pub selected: Option<(usize, usize)>,
    pub first: Option<Completion>,
    pub second: Option<Completion>,
    /// Row of the dispatch table used in the single-cycle depot case.
    pub dispatch_row: Option<u8>,
    pub plans: Vec<LoadingPlan>,
}

impl VertexOutcome {
    /// Removing the two edges at `x` toward the selected edge from the union
    /// of both completions, then adding that edge, yields a Hamiltonian cycle.
    pub fn rewired_is_hamiltonian(&self, vertex_count: usize) -> bool {
        let (Some(a), Some(b), Some((i, j))) = (&self.first, &self.second, self.selected) else {
            return false;
        };
        rewires(self.x, &a.edges, &b.edges, (i, j), vertex_count)
    }
}

/// `first + second` without `(x, i)` and `(x, j)`, plus `(i, j)`, is one
/// cycle through all vertices.
pub(crate) fn rewires(x: usize, first: &[(usize, usize)], second: &[(usize, usize)], (i, j): (usize, usize), vertex_count: usize) -> bool {
    let mut edges: Vec<(usize, usize)> = first.iter().chain(second).copied().collect();
    if !remove_edge(&mut edges, x, i) || !remove_edge(&mut edges, x, j) {
        return false;
    }
    edges.push((i, j));
    let verts: Vec<usize> = (0..vertex_count).collect();
    single_cycle(&verts, &edges).is_some()
}

/// `d(i,x) + d(x,j) - d(i,j)` for the chosen direction's matrix.
pub fn delta(inst: &Instance, x: usize, i: usize, j: usize, dir: Direction) -> Result<Value> {
    if x == i || x == j || i == j {
        return Err(Error::Precondition(format!(
            "delta needs distinct vertices, got x={x}, i={i}, j={j}"
        )));
    }
    let d = match dir {
        Direction::Pickup => &inst.dp,
        Direction::Delivery => &inst.dd,
    };
    Ok(d.get(i, x) + d.get(x, j) - d.get(i, j))
}

pub fn delta_sum(inst: &Instance, x: usize, i: usize, j: usize) -> Value {
    let dp = &inst.dp;
    let dd = &inst.dd;
    dp.get(i, x) + dp.get(x, j) - dp.get(i, j) + dd.get(i, x) + dd.get(x, j) - dd.get(i, j)
}

/// Best edge of `candidates` for the summed insertion cost, ties to the smallest
/// `(min, max)` pair.
pub fn best_edge(inst: &Instance, x: usize, candidates: &[(usize, usize)]) -> Option<(usize, usize)> {
    let mut sorted: Vec<(usize, usize)> = candidates.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    sorted.sort_unstable();
    let mut best: Option<((usize, usize), Value)> = None;
    for e in sorted {
        let v = delta_sum(inst, x, e.0, e.1);
        if best.as_ref().is_none_or(|(_, bv)| inst.goal.better(&v, bv)) {
            best = Some((e, v));
        }
    }
    best.map(|(e, _)| e)
}

fn normalize_pairs(v: impl IntoIterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = v.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub(crate) fn with_inserted(plan: &LoadingPlan, row: usize, pos: usize, x: usize) -> LoadingPlan {
    let mut rows = plan.rows().to_vec();
    rows[row].insert(pos, x);
    LoadingPlan::new(rows)
}

/// `mp + edges` and `md + edges` both admit plan-consistent orientations.
pub(crate) fn completion_fits(n: usize, mp: &Matching, md: &Matching, edges: &[(usize, usize)], plan: &LoadingPlan) -> bool {
    let with = |m: &Matching| -> Vec<(usize, usize)> { m.pairs().iter().chain(edges).copied().collect() };
    consistent_tour(n, &with(mp), plan, Direction::Pickup).is_some() && consistent_tour(n, &with(md), plan, Direction::Delivery).is_some()
}

/// Places `x` into `base`: the preferred slot first, then row 2 and row 1
/// positions in ascending order. The first placement within capacity that
/// makes the completion fit wins. Failing that, a plan is derived from the
/// completed tours; if none exists `x` is appended to row 2 and the
/// completion is marked unvalidated.
pub(crate) fn place_x(ctx: &Ctx<'_>, base: &LoadingPlan, edges: Vec<(usize, usize)>, preferred: Option<(usize, usize)>) -> Completion {
    let mut slots: Vec<(usize, usize)> = preferred.into_iter().collect();
    for row in [1, 0] {
        for pos in 0..=base.rows()[row].len() {
            if Some((row, pos)) != preferred {
                slots.push((row, pos));
            }
        }
    }
    for (row, pos) in slots {
        if base.rows()[row].len() + 1 > ctx.inst.c {
            continue;
        }
        let plan = with_inserted(base, row, pos, ctx.x);
        if completion_fits(ctx.inst.n, &ctx.mp, &ctx.md, &edges, &plan) {
            return Completion {
                plan,
                edges,
                validated: true,
            };
        }
    }
    if let Some(plan) = plan_for_edges(ctx, &edges) {
        return Completion {
            plan,
            edges,
            validated: true,
        };
    }
    let len = base.rows()[1].len();
    Completion {
        plan: with_inserted(base, 1, len, ctx.x),
        edges,
        validated: false,
    }
}

/// A two-row plan within capacity for the tours that `mp + edges` and
/// `md + edges` induce, trying all four orientations.
pub(crate) fn plan_for_edges(ctx: &Ctx<'_>, edges: &[(usize, usize)]) -> Option<LoadingPlan> {
    let verts: Vec<usize> = (0..=ctx.inst.n).collect();
    let with = |m: &Matching| -> Option<Vec<usize>> {
        let e: Vec<(usize, usize)> = m.pairs().iter().chain(edges).copied().collect();
        single_cycle(&verts, &e)
    };
    let (cp, cd) = (with(&ctx.mp)?, with(&ctx.md)?);
    for fp in [true, false] {
        for fd in [true, false] {
            let (tp, td) = (tour_from_cycle(&cp, fp), tour_from_cycle(&cd, fd));
            if let Ok(Some(plan)) = feasible_capacitated(&tp, &td, 2, ctx.inst.c) {
                return Some(plan);
            }
        }
    }
    None
}

pub(crate) struct Ctx<'a> {
    pub inst: &'a Instance,
    pub x: usize,
    pub mp: Matching,
    pub md: Matching,
    pub vx: Vec<usize>,
}

/// Rotates a cycle so that `v` lands at index `at`.
pub(crate) fn rotate_to(seq: &[usize], v: usize, at: usize) -> Vec<usize> {
    let len = seq.len();
    let p = seq.iter().position(|&u| u == v).expect("vertex on cycle");
    (0..len).map(|s| seq[(p + len - at + s) % len]).collect()
}

/// Moves the component containing `v` to the end, rotated so `v` sits at `at`.
pub(crate) fn move_last(others: &mut Vec<Vec<usize>>, v: usize, at: usize) {
    if let Some(p) = others.iter().position(|c| c.contains(&v)) {
        let comp = others.remove(p);
        others.push(rotate_to(&comp, v, at));
    }
}

fn fallback(ctx: &Ctx<'_>, depot_seq: &[usize], others: &[Vec<usize>]) -> VertexOutcome {
    let mut plan = plan_from_oriented_components(depot_seq, others);
    if ctx.x != 0 {
        let r = if plan.rows()[1].len() <= plan.rows()[0].len() { 1 } else { 0 };
        let len = plan.rows()[r].len();
        plan = with_inserted(&plan, r, len, ctx.x);
    }
    VertexOutcome {
        x: ctx.x,
        case: OddCase::Fallback,
        mp: ctx.mp.clone(),
        md: ctx.md.clone(),
        candidates: Vec::new(),
        selected: None,
        first: None,
        second: None,
        dispatch_row: None,
        plans: vec![plan],
    }
}

/// Matchings, case dispatch and completions for one vertex `x`.
pub fn vertex_outcome(inst: &Instance, x: usize) -> Result<VertexOutcome> {
    if x > inst.n {
        return Err(Error::Precondition(format!("vertex {x} is not in V")));
    }
    let vx: Vec<usize> = (0..=inst.n).filter(|&v| v != x).collect();
    let mp = optimal_perfect_matching(&vx, &inst.dp, inst.goal)?;
    let md = optimal_perfect_matching(&vx, &inst.dd, inst.goal)?;
    let ctx = Ctx { inst, x, mp, md, vx };
    let edges: Vec<(usize, usize)> = ctx.mp.pairs().iter().chain(ctx.md.pairs()).copied().collect();
    let comps = components(&ctx.vx, &edges).ok_or_else(|| Error::Internal("union of two perfect matchings is not a cycle cover".into()))?;
    let mut depot_cycle: Option<Vec<usize>> = None;
    let mut others: Vec<Vec<usize>> = Vec::new();
    for c in comps {
        if c.seq.contains(&0) {
            depot_cycle = Some(c.seq);
        } else {
            others.push(c.seq);
        }
    }
    let mut out = match depot_cycle {
        Some(cycle) => {
            // cycle starts at 0; drop it
            let seq = cycle[1..].to_vec();
            if seq.len() == 1 && others.is_empty() {
                fallback(&ctx, &seq, &others)
            } else if seq.len() == 1 {
                item::case_short_depot_cycle(&ctx, seq[0], others)?
            } else {
                let spare = fallback(&ctx, &seq, &others).plans;
                let mut o = item::case_long_depot_cycle(&ctx, seq, others)?;
                // an unplaceable x still leaves the plain matching plan
                if ![&o.first, &o.second].iter().all(|c| c.as_ref().is_some_and(|c| c.validated)) {
                    o.plans.extend(spare);
                }
                o
            }
        }
        None if others.len() >= 2 => depot::case_excluded_multi(&ctx, others)?,
        None => depot::case_excluded_single(&ctx, others.pop().unwrap_or_default())?,
    };
    let mut seen = Vec::new();
    for p in std::mem::take(&mut out.plans) {
        if !seen.contains(&p) {
            seen.push(p);
        }
    }
    out.plans = seen;
    Ok(out)
}

/// Best value over the plans of `x` that fit the capacity, with its triple.
pub fn vertex_best(inst: &Instance, outcome: &VertexOutcome) -> Result<Option<SolutionTriple>> {
    let mut best: Option<SolutionTriple> = None;
    for plan in &outcome.plans {
        if plan.max_row_len() > inst.c {
            log::warn!(
                "skipping plan {plan} for x = {} ({}): exceeds capacity {}",
                outcome.x,
                outcome.case.name(),
                inst.c
            );
            continue;
        }
        let s = best_pair_given_plan(inst, plan)?;
        if best.as_ref().is_none_or(|b| inst.goal.better(&s.value, &b.value)) {
            best = Some(s);
        }
    }
    Ok(best)
}

pub fn check_odd(inst: &Instance) -> Result<()> {
    check_two_row_symmetric(inst)?;
    if inst.vertex_count().is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "odd vertex count required, got {}",
            inst.vertex_count()
        )));
    }
    Ok(())
}

/// Per-vertex outcomes and best triples, in vertex order.
pub fn all_vertex_results(inst: &Instance) -> Result<Vec<(VertexOutcome, Option<SolutionTriple>)>> {
    check_odd(inst)?;
    (0..=inst.n)
        .into_par_iter()
        .map(|x| {
            let o = vertex_outcome(inst, x)?;
            let b = vertex_best(inst, &o)?;
            Ok((o, b))
        })
        .collect()
}

pub fn dapx_odd(inst: &Instance) -> Result<SolutionTriple> {
    let results = all_vertex_results(inst)?;
    let mut best: Option<SolutionTriple> = None;
    for (_, s) in &results {
        if let Some(s) = s {
            if best.as_ref().is_none_or(|b| inst.goal.better(&s.value, &b.value)) {
                best = Some(s.clone());
            }
        }
    }
    best.ok_or_else(|| {
        let detail: Vec<String> = results.iter().map(|(o, _)| format!("x={} ({})", o.x, o.case.name())).collect();
        Error::Capacity(format!("every plan exceeds capacity {}: {}", inst.c, detail.join(", ")))
    })
}

pub(crate) fn cross_pairs(a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
    normalize_pairs(a.iter().flat_map(|&u| b.iter().map(move |&w| (u, w))))
}
