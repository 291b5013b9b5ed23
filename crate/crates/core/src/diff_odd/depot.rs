//! Constructions for `x = 0`: the depot is removed and `V - 0` is covered by
//! the cycles of the two matchings.

use num_integer::Integer;

use super::{best_edge, completion_fits, cross_pairs, move_last, normalize_pairs, rotate_to, Completion, Ctx, OddCase, VertexOutcome};
use crate::apx_two::plan_from_oriented_components;
use crate::error::{Error, Result};
use crate::graph::{remove_edge, single_cycle, splice};
use crate::model::{Edge, LoadingPlan};

/// Several cycles: one plan and two shifted completions through the depot.
pub(super) fn case_excluded_multi(ctx: &Ctx<'_>, mut others: Vec<Vec<usize>>) -> Result<VertexOutcome> {
    let mut candidates = Vec::new();
    for s in 0..others.len() {
        for t in s + 1..others.len() {
            candidates.extend(cross_pairs(&others[s], &others[t]));
        }
    }
    let candidates = normalize_pairs(candidates);
    let (a, b) = best_edge(ctx.inst, 0, &candidates).expect("at least two cycles");
    let half_rows = ctx.inst.n / 2;
    // a opens row 1; b closes row 2 when the row length is odd, row 1 otherwise
    let pa = others.iter().position(|c| c.contains(&a)).unwrap();
    let first = others.remove(pa);
    others.insert(0, rotate_to(&first, a, 0));
    let len = others.iter().find(|c| c.contains(&b)).map(Vec::len).unwrap();
    move_last(&mut others, b, if half_rows % 2 == 1 { len / 2 } else { len / 2 - 1 });
    let plan = plan_from_oriented_components(&[], &others);
    let (c, cp) = staggered_completions(&plan)?;
    let first = Completion {
        validated: completion_fits(ctx.inst.n, &ctx.mp, &ctx.md, &c, &plan),
        plan: plan.clone(),
        edges: c,
    };
    let second = Completion {
        validated: completion_fits(ctx.inst.n, &ctx.mp, &ctx.md, &cp, &plan),
        plan: plan.clone(),
        edges: cp,
    };
    Ok(VertexOutcome {
        x: 0,
        case: OddCase::DepotExcludedMulti,
        mp: ctx.mp.clone(),
        md: ctx.md.clone(),
        candidates,
        selected: Some((a, b)),
        first: Some(first),
        second: Some(second),
        dispatch_row: None,
        plans: vec![plan],
    })
}

/// For rows `(i_1..i_L)`, `(j_1..j_L)`: the matchings `(i_p, j_{p+1})` and
/// `(j_p, i_{p+1})`, closed through the depot.
pub fn staggered_completions(plan: &LoadingPlan) -> Result<(Vec<Edge>, Vec<Edge>)> {
    let rows = plan.rows();
    if rows.len() != 2 || rows[0].len() != rows[1].len() || rows[0].is_empty() {
        return Err(Error::InvalidPlan(format!(
            "shifted completions need two equal non-empty rows, got {plan}"
        )));
    }
    let (i, j) = (&rows[0], &rows[1]);
    let l = i.len();
    let mut c: Vec<(usize, usize)> = (0..l - 1).map(|p| (i[p], j[p + 1])).collect();
    c.push((i[l - 1], 0));
    c.push((0, j[0]));
    let mut cp: Vec<(usize, usize)> = (0..l - 1).map(|p| (j[p], i[p + 1])).collect();
    cp.push((j[l - 1], 0));
    cp.push((0, i[0]));
    Ok((c, cp))
}

/// A completion of the single-cycle case, indexed on the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompletionSpec {
    Split(usize),
    Alternating(usize),
}

/// Number of rows in the dispatch table.
pub const DISPATCH_ROWS: u8 = 8;

fn md(a: i64, m: usize) -> usize {
    a.rem_euclid(m as i64) as usize
}

/// Whether the alternating-pairs plan exists for a cycle of length `m`.
pub fn alternating_plan_defined(m: usize) -> bool {
    (m % 4 == 2 && m >= 6) || (m.is_multiple_of(4) && m >= 8)
}

/// Starts at `v_i` and walks the cycle both ways.
pub fn split_plan(cycle: &[usize], i: usize) -> LoadingPlan {
    let m = cycle.len();
    let h = m / 2;
    let at = |o: i64| cycle[md(i as i64 + o, m)];
    let row1 = (0..h as i64).map(at).collect();
    let row2 = (1..=h as i64).map(|r| at(-r)).collect();
    LoadingPlan::new(vec![row1, row2])
}

/// Offsets from `i` of the two rows of the alternating-pairs plan.
fn q_offsets(m: usize) -> (Vec<usize>, Vec<usize>) {
    let mut r1 = Vec::new();
    let mut r2 = vec![m - 1];
    let last_pair = if m % 4 == 2 { m - 4 } else { m - 6 };
    for t in (0..=last_pair).step_by(2) {
        let r = if (t / 2) % 2 == 0 { &mut r1 } else { &mut r2 };
        r.push(t);
        r.push(t + 1);
    }
    if m % 4 == 2 {
        r1.push(m - 2);
    } else {
        r2.push(m - 4);
        r1.push(m - 2);
        r1.push(m - 3);
    }
    (r1, r2)
}

/// Pairs of consecutive cycle vertices loaded alternately into the rows,
/// starting with `v_i`. `None` when the cycle is too short.
pub fn alternating_plan(cycle: &[usize], i: usize) -> Option<LoadingPlan> {
    let m = cycle.len();
    if !alternating_plan_defined(m) {
        return None;
    }
    let (r1, r2) = q_offsets(m);
    let at = |o: &usize| cycle[(i + o) % m];
    Some(LoadingPlan::new(vec![r1.iter().map(at).collect(), r2.iter().map(at).collect()]))
}

/// Index pairs `{t, t+3}` for every `t` of parity opposite to `i`.
pub fn stride_three_edges(m: usize, i: usize) -> Vec<(usize, usize)> {
    (0..m).filter(|t| t % 2 != i % 2).map(|t| (t, (t + 3) % m)).collect()
}

/// Index pairs of a completion and the index pair carrying the depot.
fn completion_indices(spec: CompletionSpec, m: usize) -> Option<(Vec<Edge>, Edge)> {
    let h = m / 2;
    match spec {
        CompletionSpec::Split(i) => {
            let mut e: Vec<(usize, usize)> = (1..h as i64).map(|r| (md(i as i64 - r, m), md(i as i64 + r, m))).collect();
            let depot = ((i + h) % m, i);
            e.push(depot);
            Some((e, depot))
        }
        CompletionSpec::Alternating(i) => {
            if !alternating_plan_defined(m) {
                return None;
            }
            let o = |k: i64| md(i as i64 + k, m);
            let mut e = stride_three_edges(m, i);
            if h % 2 == 1 {
                Some((e, (o(-3), i)))
            } else {
                for (a, b) in [(o(-3), i), (o(-5), o(-2)), (o(-7), o(-4))] {
                    if !remove_edge(&mut e, a, b) {
                        return None;
                    }
                }
                e.extend([(o(-5), o(-3)), (o(-7), o(-2)), (o(-4), i)]);
                Some((e, (o(-4), i)))
            }
        }
    }
}

/// Plan and completion on the cycle's vertices with the depot spliced in.
pub fn completion(spec: CompletionSpec, cycle: &[usize]) -> Option<(LoadingPlan, Vec<(usize, usize)>)> {
    let m = cycle.len();
    let (idx, (da, db)) = completion_indices(spec, m)?;
    let mut edges: Vec<(usize, usize)> = idx.iter().map(|&(a, b)| (cycle[a], cycle[b])).collect();
    splice(&mut edges, cycle[da], cycle[db], 0);
    let plan = match spec {
        CompletionSpec::Split(i) => split_plan(cycle, i),
        CompletionSpec::Alternating(i) => alternating_plan(cycle, i)?,
    };
    Some((plan, edges))
}

/// Condition of a dispatch row for indices `i != j` on a cycle of length `m`.
pub fn dispatch_row_applies(row: u8, m: usize, i: usize, j: usize) -> bool {
    if m < 2 || m % 2 == 1 || i % m == j % m {
        return false;
    }
    let h = m / 2;
    let d = md(j as i64 - i as i64, m);
    let parity = i % 2 != j % 2;
    let unit = d == 1 || d == m - 1;
    match row {
        1 => d.gcd(&m) == 1,
        2 => alternating_plan_defined(m) && h % 6 == 3 && i % 3 != j % 3,
        3 => alternating_plan_defined(m) && (h % 6 == 1 || h % 6 == 5) && parity,
        4 => alternating_plan_defined(m) && h.is_multiple_of(6) && parity,
        5 => alternating_plan_defined(m) && h % 6 == 4 && parity && !unit,
        6 => alternating_plan_defined(m) && h % 6 == 2 && unit,
        7 => alternating_plan_defined(m) && h % 6 == 2 && parity && (d % 6 == 1 || d % 6 == 5),
        8 => alternating_plan_defined(m) && h % 6 == 2 && parity && (d % 6 == 3 || d % 6 == 5),
        _ => false,
    }
}

/// The two completions a row prescribes.
pub fn dispatch_completions(row: u8, m: usize, i: usize, j: usize) -> (CompletionSpec, CompletionSpec) {
    use CompletionSpec::{Alternating, Split};
    match row {
        1 => (Split(i), Split(j)),
        2 => (Split(i), Alternating(j)),
        7 => (Alternating((i + 4) % m), Alternating(j)),
        8 => (Alternating(i), Alternating((j + 4) % m)),
        _ => (Alternating(i), Alternating(j)),
    }
}

fn rewired(first: &[(usize, usize)], second: &[(usize, usize)], a: usize, b: usize, vertex_count: usize) -> bool {
    let mut edges: Vec<(usize, usize)> = first.iter().chain(second).copied().collect();
    if !remove_edge(&mut edges, 0, a) || !remove_edge(&mut edges, 0, b) {
        return false;
    }
    edges.push((a, b));
    single_cycle(&(0..vertex_count).collect::<Vec<_>>(), &edges).is_some()
}

/// Rewiring check of a row on the cycle `1, ..., m` with the depot 0.
pub fn rewired_dispatch_is_hamiltonian(row: u8, m: usize, i: usize, j: usize) -> bool {
    let cycle: Vec<usize> = (1..=m).collect();
    let (s, t) = dispatch_completions(row, m, i, j);
    match (completion(s, &cycle), completion(t, &cycle)) {
        (Some((_, a)), Some((_, b))) => rewired(&a, &b, cycle[i], cycle[j], m + 1),
        _ => false,
    }
}

/// Index pairs `{i, j}` for which some row applies in either order.
pub fn admissible_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if (1..=DISPATCH_ROWS).any(|r| dispatch_row_applies(r, m, i, j) || dispatch_row_applies(r, m, j, i)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// One Hamiltonian cycle on `V - 0`: a pair of completions chosen by the
/// dispatch table for the best admissible edge.
pub(super) fn case_excluded_single(ctx: &Ctx<'_>, cycle: Vec<usize>) -> Result<VertexOutcome> {
    let m = cycle.len();
    let candidates = normalize_pairs(admissible_pairs(m).into_iter().map(|(i, j)| (cycle[i], cycle[j])));
    let (p, q) =
        best_edge(ctx.inst, 0, &candidates).ok_or_else(|| Error::Internal(format!("no admissible pair on a cycle of length {m}")))?;
    let ip = cycle.iter().position(|&v| v == p).unwrap();
    let iq = cycle.iter().position(|&v| v == q).unwrap();
    let mut chosen = None;
    let mut applicable = None;
    'outer: for (i, j) in [(ip, iq), (iq, ip)] {
        for row in 1..=DISPATCH_ROWS {
            if !dispatch_row_applies(row, m, i, j) {
                continue;
            }
            let (s, t) = dispatch_completions(row, m, i, j);
            let (Some(a), Some(b)) = (completion(s, &cycle), completion(t, &cycle)) else {
                continue;
            };
            if applicable.is_none() {
                applicable = Some((row, i, j, a.clone(), b.clone()));
            }
            if rewired(&a.1, &b.1, cycle[i], cycle[j], ctx.inst.n + 1) {
                chosen = Some((row, i, j, a, b));
                break 'outer;
            }
        }
    }
    let (row, i, j, a, b) = match chosen {
        Some(c) => c,
        None => {
            let c =
                applicable.ok_or_else(|| Error::Internal(format!("no dispatch row covers the pair ({p},{q}) on a cycle of length {m}")))?;
            log::warn!(
                "dispatch row {} for ({p},{q}) does not rewire to a Hamiltonian cycle (m = {m})",
                c.0
            );
            c
        }
    };
    let make = |(plan, edges): (LoadingPlan, Vec<(usize, usize)>)| Completion {
        validated: completion_fits(ctx.inst.n, &ctx.mp, &ctx.md, &edges, &plan),
        plan,
        edges,
    };
    let first = make(a);
    let second = make(b);
    Ok(VertexOutcome {
        x: 0,
        case: OddCase::DepotExcludedSingle,
        mp: ctx.mp.clone(),
        md: ctx.md.clone(),
        candidates,
        selected: Some((cycle[i], cycle[j])),
        plans: vec![first.plan.clone(), second.plan.clone()],
        first: Some(first),
        second: Some(second),
        dispatch_row: Some(row),
    })
}
