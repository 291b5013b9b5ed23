//! Constructions for `x` an item (the depot stays in `V - x`).

use super::{best_edge, cross_pairs, move_last, normalize_pairs, place_x, Completion, Ctx, OddCase, VertexOutcome};
use crate::apx_two::plan_from_oriented_components;
use crate::diff_even::{shifted_completion, straight_completion};
use crate::error::{Error, Result};
use crate::graph::splice;
use crate::model::{Edge, LoadingPlan};

fn spliced(pairs: &[(usize, usize)], a: usize, b: usize, x: usize) -> Result<Vec<(usize, usize)>> {
    let mut e = pairs.to_vec();
    if !splice(&mut e, a, b, x) {
        return Err(Error::Internal(format!("edge ({a},{b}) missing from completion {pairs:?}")));
    }
    Ok(e)
}

/// Depot cycle of two vertices: candidates are depot edges avoiding its
/// matched partner.
pub(super) fn case_short_depot_cycle(ctx: &Ctx<'_>, partner: usize, mut others: Vec<Vec<usize>>) -> Result<VertexOutcome> {
    let rest: Vec<usize> = ctx.vx.iter().copied().filter(|&v| v != 0 && v != partner).collect();
    let candidates = cross_pairs(&[0], &rest);
    let (_, y) = best_edge(ctx.inst, ctx.x, &candidates).expect("other cycles exist");
    // y's cycle goes last with y at the end of row 1
    let len = others.iter().find(|c| c.contains(&y)).map(Vec::len).unwrap();
    move_last(&mut others, y, len / 2 - 1);
    let base = plan_from_oriented_components(&[partner], &others);
    let row1_end = *base.rows()[0].last().unwrap();
    let row2_end = *base.rows()[1].last().unwrap();
    debug_assert_eq!(row1_end, y);
    let a = spliced(straight_completion(&base)?.pairs(), y, 0, ctx.x)?;
    let a2 = spliced(shifted_completion(&base)?.pairs(), row2_end, 0, ctx.x)?;
    let end = base.rows()[1].len();
    let first = place_x(ctx, &base, a, Some((1, end)));
    let second = place_x(ctx, &base, a2, Some((1, end)));
    Ok(VertexOutcome {
        x: ctx.x,
        case: OddCase::ShortDepotCycle,
        mp: ctx.mp.clone(),
        md: ctx.md.clone(),
        candidates,
        selected: Some((0, y)),
        plans: vec![first.plan.clone(), second.plan.clone()],
        first: Some(first),
        second: Some(second),
        dispatch_row: None,
    })
}

/// Exchanges the rows at every even 1-based position `p <= m0`.
pub fn swapped_prefix_plan(plan: &LoadingPlan, m0: usize) -> LoadingPlan {
    let mut rows = plan.rows().to_vec();
    for p in (2..=m0).step_by(2) {
        let t = rows[0][p - 1];
        rows[0][p - 1] = rows[1][p - 1];
        rows[1][p - 1] = t;
    }
    LoadingPlan::new(rows)
}

/// `(i_1, ..., i_m0, j_m0, ..., j_1)` read off the plan.
pub fn swap_cycle(q: &LoadingPlan, m0: usize) -> Vec<usize> {
    let mut g: Vec<usize> = q.rows()[0][..m0].to_vec();
    g.extend(q.rows()[1][..m0].iter().rev());
    g
}

/// The two completions of `q` on `V - x`.
///
/// Edges of [`swap_cycle`] alternate between them, `(i_1, j_1)` in the
/// first. The tail follows the even-case completions: the first pairs
/// `(i_p, j_p)` and closes at `i_{nu+1}`; the second joins
/// `(i_{m0+1}, i_{m0+2})`, pairs `(i_{p+2}, j_p)` and closes at `j_nu`.
pub fn alternating_completions(q: &LoadingPlan, m0: usize) -> (Vec<Edge>, Vec<Edge>) {
    let i = &q.rows()[0];
    let j = &q.rows()[1];
    let nu = j.len();
    let g = swap_cycle(q, m0);
    let len = g.len();
    let mut b = Vec::new();
    let mut bp = Vec::new();
    for t in 0..len {
        let e = (g[t], g[(t + 1) % len]);
        if t % 2 == 1 {
            b.push(e);
        } else {
            bp.push(e);
        }
    }
    // 1-based p maps to index p-1
    for p in m0 + 1..=nu {
        b.push((i[p - 1], j[p - 1]));
    }
    b.push((i[nu], 0));
    if nu == m0 {
        bp.push((i[m0], 0));
    } else {
        bp.push((i[m0], i[m0 + 1]));
        for p in m0 + 1..nu {
            bp.push((i[p + 1], j[p - 1]));
        }
        bp.push((j[nu - 1], 0));
    }
    (b, bp)
}

/// Splices `x` into the edge of the perfect matching `edges` at `v`.
fn spliced_at(edges: &[(usize, usize)], v: usize, x: usize) -> Vec<(usize, usize)> {
    let &(a, b) = edges.iter().find(|&&(a, b)| a == v || b == v).expect("perfect matching covers v");
    let mut e = edges.to_vec();
    splice(&mut e, a, b, x);
    e
}

/// Swapped-prefix completions for one orientation of the depot cycle;
/// `exchange` swaps which completion receives `x` next to `u`.
fn long_cycle_attempt(
    ctx: &Ctx<'_>,
    depot: &[usize],
    mut others: Vec<Vec<usize>>,
    (u, w): (usize, usize),
    exchange: bool,
) -> (Completion, Completion) {
    let m0 = (depot.len() - 1) / 2;
    let middle = depot[m0];
    let jpos = depot.iter().position(|&v| v == u).unwrap() + 1;
    let n_on_b = (jpos % 2 == 1) != exchange;
    if w != 0 && w != middle {
        let len = others.iter().find(|c| c.contains(&w)).map(Vec::len).unwrap();
        // the second completion closes at the end of row 2, the first at row 1
        let at = if n_on_b { len / 2 } else { len / 2 - 1 };
        move_last(&mut others, w, at);
    }
    let base = plan_from_oriented_components(depot, &others);
    let q = swapped_prefix_plan(&base, m0);
    let (b, bp) = alternating_completions(&q, m0);
    let (x_set, y_set) = if n_on_b { (&b, &bp) } else { (&bp, &b) };
    let row2 = q.rows()[1].len();
    let pref1 = if jpos == 1 { 1 } else { jpos - 1 }.min(row2);
    let pref2 = if w == middle { m0 } else { row2 };
    let first = place_x(ctx, &q, spliced_at(x_set, u, ctx.x), Some((1, pref1)));
    let second = place_x(ctx, &q, spliced_at(y_set, w, ctx.x), Some((1, pref2)));
    (first, second)
}

/// Depot cycle `(0, v_1, ..., v_{2 m0 + 1})` with `m0 >= 1`.
///
/// The prescribed orientation (u in the first half) is tried first, then
/// the completions exchanged, then the reversed cycle. The first attempt
/// whose completions both fit is kept, otherwise the prescribed one.
pub(super) fn case_long_depot_cycle(ctx: &Ctx<'_>, mut depot: Vec<usize>, others: Vec<Vec<usize>>) -> Result<VertexOutcome> {
    let m0 = (depot.len() - 1) / 2;
    let middle = depot[m0];
    let on_cycle: Vec<usize> = depot.iter().copied().filter(|&v| v != middle).collect();
    let rest: Vec<usize> = ctx.vx.iter().copied().filter(|v| !on_cycle.contains(v)).collect();
    let candidates = cross_pairs(&on_cycle, &rest);
    let e = best_edge(ctx.inst, ctx.x, &candidates).expect("the cycle and its complement are non-empty");
    let (u, w) = if on_cycle.contains(&e.0) { e } else { (e.1, e.0) };
    if depot.iter().position(|&v| v == u).unwrap() > m0 {
        depot.reverse();
    }
    let reversed: Vec<usize> = depot.iter().rev().copied().collect();
    let mut chosen = None;
    for (seq, exchange) in [(&depot, false), (&depot, true), (&reversed, false), (&reversed, true)] {
        let (f, s) = long_cycle_attempt(ctx, seq, others.clone(), (u, w), exchange);
        let ok = f.validated && s.validated;
        if chosen.is_none() || ok {
            chosen = Some((f, s));
        }
        if ok {
            break;
        }
    }
    let (first, second) = chosen.unwrap();
    Ok(VertexOutcome {
        x: ctx.x,
        case: OddCase::LongDepotCycle,
        mp: ctx.mp.clone(),
        md: ctx.md.clone(),
        candidates: normalize_pairs(candidates),
        selected: Some((u, w)),
        plans: vec![first.plan.clone(), second.plan.clone()],
        first: Some(first),
        second: Some(second),
        dispatch_row: None,
    })
}
