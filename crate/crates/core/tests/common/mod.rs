//! Checkers shared by the integration tests and the acceptance run. Each
//! returns a [`Tally`] of checked cases and failures instead of panicking so
//! that the acceptance binary can report every criterion.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stacktsp::apx_two::{apx_2dtspms, optimal_matchings, oriented_components_on, plan_from_matchings, plan_from_oriented_components};
use stacktsp::diff_even::{dapx_even, shifted_completion, straight_completion, swap_first};
use stacktsp::diff_odd::{
    admissible_pairs, all_vertex_results, alternating_completions, dapx_odd, delta, dispatch_row_applies, rewired_dispatch_is_hamiltonian,
    staggered_completions, swapped_prefix_plan, vertex_outcome, Completion, OddCase, VertexOutcome, DISPATCH_ROWS,
};
use stacktsp::feasibility::{delivery_consistent, feasible_capacitated, pickup_consistent, verify_solution};
use stacktsp::generators::{gen_random, Profile};
use stacktsp::graph::{components, consistent_tour, remove_edge, single_cycle, tour_from_cycle};
use stacktsp::matching::{optimal_near_perfect_matching, optimal_perfect_matching};
use stacktsp::oracle::{brute_feasible, brute_matching, brute_tour_given_plan, exact_extremes, ratio_report, sigma_extremes};
use stacktsp::pctsp::best_tour_given_plan;
use stacktsp::tsp::{held_karp, DEFAULT_EXACT_CAP};
use stacktsp::{frac, int, Direction, DistanceMatrix, Goal, Instance, LoadingPlan, Matching, Tour, Value};

const KEEP: usize = 3;

#[derive(Debug, Default, Clone)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
    /// The first few failures, described.
    pub examples: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < KEEP {
                self.examples.push(describe());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.checked > 0 && self.failed == 0
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
        for e in other.examples {
            if self.examples.len() < KEEP {
                self.examples.push(e);
            }
        }
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} checked, {} failed", self.checked, self.failed)?;
        if let Some(e) = self.examples.first() {
            write!(f, " (e.g. {e})")?;
        }
        Ok(())
    }
}

pub type Tallies = BTreeMap<String, Tally>;

pub fn tally<'a>(t: &'a mut Tallies, key: &str) -> &'a mut Tally {
    t.entry(key.to_string()).or_default()
}

pub fn all_ok(t: &Tallies) -> bool {
    !t.is_empty() && t.values().all(Tally::ok)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tour(size: usize, rng: &mut ChaCha8Rng) -> Tour {
    let mut rest: Vec<usize> = (1..size).collect();
    rest.shuffle(rng);
    Tour::new(std::iter::once(0).chain(rest).collect()).unwrap()
}

/// Items `1..=n` shuffled into `k` rows of at most `c`.
pub fn random_plan(n: usize, k: usize, c: usize, rng: &mut ChaCha8Rng) -> LoadingPlan {
    let mut items: Vec<usize> = (1..=n).collect();
    items.shuffle(rng);
    let mut rows = vec![Vec::new(); k];
    for v in items {
        let open: Vec<usize> = (0..k).filter(|&r| rows[r].len() < c).collect();
        let r = open[rng.gen_range(0..open.len())];
        rows[r].push(v);
    }
    LoadingPlan::new(rows)
}

/// A pickup tour and a delivery tour that fit `plan`: random interleavings
/// of the rows, front first and back first.
pub fn plan_tours(plan: &LoadingPlan, rng: &mut ChaCha8Rng) -> (Tour, Tour) {
    let interleave = |rows: Vec<Vec<usize>>, rng: &mut ChaCha8Rng| {
        let mut heads = vec![0usize; rows.len()];
        let mut seq = vec![0];
        loop {
            let open: Vec<usize> = (0..rows.len()).filter(|&r| heads[r] < rows[r].len()).collect();
            if open.is_empty() {
                break;
            }
            let r = open[rng.gen_range(0..open.len())];
            seq.push(rows[r][heads[r]]);
            heads[r] += 1;
        }
        Tour::new(seq).unwrap()
    };
    let front: Vec<Vec<usize>> = plan.rows().to_vec();
    let back: Vec<Vec<usize>> = plan.rows().iter().map(|r| r.iter().rev().copied().collect()).collect();
    (interleave(front, rng), interleave(back, rng))
}

/// Every Hamiltonian cycle on `verts`, once per direction class.
pub fn hamiltonian_cycles(verts: &[usize]) -> Vec<Vec<usize>> {
    fn rec(first: usize, cur: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            if cur.len() < 3 || cur[1] < cur[cur.len() - 1] {
                out.push(std::iter::once(first).chain(cur[1..].iter().copied()).collect());
            }
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            rec(first, cur, rest, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    if let Some((&first, tail)) = verts.split_first() {
        rec(first, &mut vec![first], &mut tail.to_vec(), &mut out);
    }
    out
}

fn goal_of(seed: u64) -> Goal {
    if seed.is_multiple_of(2) {
        Goal::Min
    } else {
        Goal::Max
    }
}

/// Symmetric profiles alternate between integer entries in `1..=20` and
/// the two values `{1, 2}`, which produce many ties.
fn symmetric_profile(seed: u64) -> Profile {
    if seed % 3 == 2 {
        Profile::Bivalued(1, 2)
    } else {
        Profile::Symmetric
    }
}

pub fn random_symmetric_instance(n: usize, c: usize, seed: u64) -> Instance {
    gen_random(symmetric_profile(seed), n, 2, c, goal_of(seed / 3), seed).unwrap()
}

// ---------------------------------------------------------------- oracles

/// The plan-constrained tour DP against filtering all permutations, for
/// both directions and goals.
pub fn pc_tsp_against_brute_force(sizes: &[usize], seeds: u64) -> Tally {
    let mut t = Tally::default();
    for &n in sizes {
        for seed in 0..seeds {
            let mut r = rng(seed * 31 + n as u64);
            let k = r.gen_range(1..=3usize.min(n));
            let c = n.div_ceil(k) + r.gen_range(0..=1);
            let inst = gen_random(Profile::General, n, k, c, Goal::Min, seed).unwrap();
            let plan = random_plan(n, k, c, &mut r);
            for dir in [Direction::Pickup, Direction::Delivery] {
                for goal in [Goal::Min, Goal::Max] {
                    let (tour, v) = best_tour_given_plan(&inst, &plan, dir, goal).unwrap();
                    let (_, b) = brute_tour_given_plan(&inst, &plan, dir, goal).unwrap();
                    let d = if dir == Direction::Pickup { &inst.dp } else { &inst.dd };
                    let fits = if dir == Direction::Pickup {
                        pickup_consistent(&tour, &plan)
                    } else {
                        delivery_consistent(&tour, &plan)
                    };
                    t.check(v == b && tour.cost(d) == v && fits, || {
                        format!("n={n} seed={seed} {dir:?} {goal}: dp {v}, brute {b}")
                    });
                }
            }
        }
    }
    t
}

/// Optimum (near-)perfect matchings against enumeration, on random vertex
/// subsets of a symmetric matrix.
pub fn matching_against_enumeration(max_vertices: usize, seeds: u64) -> Tally {
    let mut t = Tally::default();
    for size in 2..=max_vertices {
        for seed in 0..seeds {
            let mut r = rng(seed * 17 + size as u64);
            let inst = gen_random(symmetric_profile(seed), 15, 2, 8, Goal::Min, seed).unwrap();
            let mut verts: Vec<usize> = (0..16).collect();
            verts.shuffle(&mut r);
            verts.truncate(size);
            for goal in [Goal::Min, Goal::Max] {
                let (_, want) = brute_matching(&verts, &inst.dp, goal);
                let got = if size % 2 == 0 {
                    optimal_perfect_matching(&verts, &inst.dp, goal).map(|m| (m.is_perfect_on(&verts), m.weight(&inst.dp)))
                } else {
                    optimal_near_perfect_matching(&verts, &inst.dp, goal).map(|(m, _)| (m.is_near_perfect_on(&verts), m.weight(&inst.dp)))
                };
                t.check(got == Ok((true, want)), || {
                    format!("{size} vertices seed={seed} {goal}: got {got:?}, enumeration {want}")
                });
            }
        }
    }
    t
}

/// The capacitated two-row feasibility verdict against trying every row
/// assignment. Half of the pairs come from a random plan so that both
/// verdicts occur.
pub fn feasibility_against_brute_force(sizes: &[usize], seeds: u64) -> Tally {
    let mut t = Tally::default();
    for &n in sizes {
        for seed in 0..seeds {
            let mut r = rng(seed * 7 + n as u64);
            let c = r.gen_range(n.div_ceil(2)..=n);
            let (tp, td) = if seed % 2 == 0 {
                let plan = random_plan(n, 2, n, &mut r);
                plan_tours(&plan, &mut r)
            } else {
                (random_tour(n + 1, &mut r), random_tour(n + 1, &mut r))
            };
            let verdict = feasible_capacitated(&tp, &td, 2, c).unwrap();
            let want = brute_feasible(&tp, &td, 2, c);
            let plan_ok = verdict
                .as_ref()
                .is_none_or(|p| p.violations(n, 2, c).is_empty() && pickup_consistent(&tp, p) && delivery_consistent(&td, p));
            t.check(verdict.is_some() == want && plan_ok, || {
                format!("n={n} c={c} tp=({tp}) td=({td}): dp {}, brute {want}", verdict.is_some())
            });
        }
    }
    t
}

// ---------------------------------------------------- even completions

fn union(m: &Matching, extra: &Matching) -> Vec<(usize, usize)> {
    m.pairs().iter().chain(extra.pairs()).copied().collect()
}

/// Completion properties of the even case, `|V| = 2 nu + 2`:
/// both matchings close into plan-consistent tours with the straight
/// completion under the plan and its swapped variant, with the shifted
/// completion when they link the depot to the first item of row 1, and the
/// two completion unions form a feasible pair at tight capacity.
pub fn even_completions(inst: &Instance, t: &mut Tallies) {
    let n = inst.n;
    let (mp, md) = optimal_matchings(inst).unwrap();
    let p = plan_from_matchings(n, &mp, &md).unwrap();
    let q = swap_first(&p).unwrap();
    let a = straight_completion(&p).unwrap();
    let id = || format!("n={n} mp={:?} md={:?} plan={p}", mp.pairs(), md.pairs());
    let mut straight = Tally::default();
    for plan in [&p, &q] {
        straight.check(straight_completion(plan).unwrap() == a, || {
            format!("{}: straight completion differs after swap", id())
        });
        straight.check(consistent_tour(n, &union(&mp, &a), plan, Direction::Pickup).is_some(), || {
            format!("{}: pickup", id())
        });
        straight.check(consistent_tour(n, &union(&md, &a), plan, Direction::Delivery).is_some(), || {
            format!("{}: delivery", id())
        });
    }
    tally(t, "straight completion").merge(straight);
    let shifted = tally(t, "shifted completion");
    for plan in [&p, &q] {
        let ap = shifted_completion(plan).unwrap();
        let head = plan.rows()[0][0];
        for (m, dir) in [(&mp, Direction::Pickup), (&md, Direction::Delivery)] {
            if m.partner(0) == Some(head) {
                shifted.check(consistent_tour(n, &union(m, &ap), plan, dir).is_some(), || {
                    format!("{}: {dir:?} with plan {plan}", id())
                });
            }
        }
    }
    let verts: Vec<usize> = (0..=n).collect();
    let cycle = |plan: &LoadingPlan| single_cycle(&verts, &union(&a, &shifted_completion(plan).unwrap()));
    let pair_ok = match (cycle(&p), cycle(&q)) {
        (Some(cp), Some(cq)) => [true, false].iter().any(|&f| {
            [true, false].iter().any(|&g| {
                feasible_capacitated(&tour_from_cycle(&cp, f), &tour_from_cycle(&cq, g), 2, n.div_ceil(2))
                    .unwrap()
                    .is_some()
            })
        }),
        _ => false,
    };
    tally(t, "completion pair").check(pair_ok, || format!("{}: completion unions are not a feasible pair", id()));
}

// ------------------------------------------------------------ odd cases

fn relabel_without(x: usize, v: usize) -> usize {
    if v > x {
        v - 1
    } else {
        v
    }
}

/// Whether `m + extra` is one cycle on `verts` admitting a tour consistent
/// with `plan` in direction `dir`; `x` is absent and labels above it shift.
fn fits_without(x: usize, verts: &[usize], m: &Matching, extra: &[(usize, usize)], plan: &LoadingPlan, dir: Direction) -> bool {
    let r = |v| relabel_without(x, v);
    let edges: Vec<(usize, usize)> = m.pairs().iter().chain(extra).map(|&(a, b)| (r(a), r(b))).collect();
    let verts: Vec<usize> = verts.iter().map(|&v| r(v)).collect();
    let plan = LoadingPlan::new(plan.rows().iter().map(|row| row.iter().map(|&v| r(v)).collect()).collect());
    consistent_tour(verts.len() - 1, &edges, &plan, dir).is_some()
}

/// For every item `x` whose depot cycle has at least four vertices: both
/// matchings close into plan-consistent tours on `V - x` with each of the
/// two alternating completions of the swapped-prefix plan, and the union of
/// the completions is the prefix cycle plus one other cycle.
pub fn swapped_prefix_completions(inst: &Instance, t: &mut Tallies) {
    let n = inst.n;
    for x in 1..=n {
        let vx: Vec<usize> = (0..=n).filter(|&v| v != x).collect();
        let mp = optimal_perfect_matching(&vx, &inst.dp, inst.goal).unwrap();
        let md = optimal_perfect_matching(&vx, &inst.dd, inst.goal).unwrap();
        let (depot, others) = oriented_components_on(&vx, &mp, &md).unwrap();
        if depot.len() < 3 {
            continue;
        }
        let m0 = (depot.len() - 1) / 2;
        let q = swapped_prefix_plan(&plan_from_oriented_components(&depot, &others), m0);
        let (b, bp) = alternating_completions(&q, m0);
        let id = || format!("n={n} x={x} depot={depot:?} others={others:?} plan={q}");
        let pick = tally(t, "pickup tours");
        for e in [&b, &bp] {
            pick.check(fits_without(x, &vx, &mp, e, &q, Direction::Pickup), || format!("{}: {e:?}", id()));
        }
        let del = tally(t, "delivery tours");
        for e in [&b, &bp] {
            del.check(fits_without(x, &vx, &md, e, &q, Direction::Delivery), || format!("{}: {e:?}", id()));
        }
        let mut prefix: Vec<usize> = q.rows().iter().flat_map(|r| r[..m0].iter().copied()).collect();
        prefix.sort_unstable();
        let both: Vec<(usize, usize)> = b.iter().chain(&bp).copied().collect();
        let split = components(&vx, &both).is_some_and(|cs| {
            cs.len() == 2
                && cs.iter().any(|c| {
                    let mut s = c.seq.clone();
                    s.sort_unstable();
                    s == prefix
                })
        });
        tally(t, "two cycles").check(split, || format!("{}: union {both:?}", id()));
    }
}

/// Union of the staggered completions of two rows of length `len`, with the
/// depot shortcut: one cycle when `len` is odd, two of length `len`
/// otherwise.
pub fn staggered_parity(len: usize, seed: u64) -> Tally {
    let mut t = Tally::default();
    let mut items: Vec<usize> = (1..=2 * len).collect();
    items.shuffle(&mut rng(seed));
    let plan = LoadingPlan::new(vec![items[..len].to_vec(), items[len..].to_vec()]);
    let (c, cp) = staggered_completions(&plan).unwrap();
    let (i, j) = (&plan.rows()[0], &plan.rows()[1]);
    let mut edges: Vec<(usize, usize)> = c.iter().chain(&cp).copied().collect();
    let removed = remove_edge(&mut edges, i[len - 1], 0)
        && remove_edge(&mut edges, 0, j[0])
        && remove_edge(&mut edges, j[len - 1], 0)
        && remove_edge(&mut edges, 0, i[0]);
    edges.push((i[len - 1], j[0]));
    edges.push((j[len - 1], i[0]));
    let sizes: Option<Vec<usize>> = components(&items, &edges).map(|cs| cs.iter().map(|c| c.seq.len()).collect());
    let want = if len % 2 == 1 { vec![2 * len] } else { vec![len, len] };
    t.check(removed && sizes.as_ref() == Some(&want), || {
        format!("len={len} plan={plan}: component sizes {sizes:?}")
    });
    t
}

fn depot_cycle_len(o: &VertexOutcome, n: usize) -> usize {
    let vx: Vec<usize> = (0..=n).filter(|&v| v != o.x).collect();
    let edges: Vec<(usize, usize)> = o.mp.pairs().iter().chain(o.md.pairs()).copied().collect();
    components(&vx, &edges)
        .unwrap()
        .into_iter()
        .find(|c| c.seq.contains(&0))
        .map_or(0, |c| c.seq.len())
}

/// Case label; the long depot cycle splits by whether it has four vertices.
pub fn case_key(o: &VertexOutcome, n: usize) -> String {
    match o.case {
        OddCase::LongDepotCycle if depot_cycle_len(o, n) == 4 => "long_depot_cycle (4 vertices)".into(),
        OddCase::LongDepotCycle => "long_depot_cycle (6+ vertices)".into(),
        c => c.name().into(),
    }
}

fn completion_solves(inst: &Instance, o: &VertexOutcome, c: &Completion) -> bool {
    let with = |m: &Matching| -> Vec<(usize, usize)> { m.pairs().iter().chain(&c.edges).copied().collect() };
    let tp = consistent_tour(inst.n, &with(&o.mp), &c.plan, Direction::Pickup);
    let td = consistent_tour(inst.n, &with(&o.md), &c.plan, Direction::Delivery);
    match (tp, td) {
        (Some(tp), Some(td)) => verify_solution(inst, &inst.triple(c.plan.clone(), tp, td)).is_ok(),
        _ => false,
    }
}

/// Per vertex `x`, keyed by case: both completions give verified solutions
/// and rewire into a Hamiltonian cycle through the selected edge. For
/// `|V - x| <= max_hit_size` the candidate set also meets every
/// Hamiltonian cycle on `V - x` (key `separating set`).
pub fn odd_case_invariants(inst: &Instance, max_hit_size: usize, t: &mut Tallies) {
    let n = inst.n;
    for x in 0..=n {
        let o = vertex_outcome(inst, x).unwrap();
        if o.case == OddCase::Fallback {
            continue;
        }
        let solved = [&o.first, &o.second]
            .iter()
            .all(|c| c.as_ref().is_some_and(|c| completion_solves(inst, &o, c)));
        let selected_ok = o.selected.is_some_and(|(i, j)| o.candidates.contains(&(i.min(j), i.max(j))));
        let ham = o.rewired_is_hamiltonian(n + 1);
        tally(t, &case_key(&o, n)).check(solved && selected_ok && ham, || {
            format!(
                "n={n} c={} x={x} mp={:?} md={:?} selected={:?} solved={solved} hamiltonian={ham}",
                inst.c,
                o.mp.pairs(),
                o.md.pairs(),
                o.selected
            )
        });
        if n <= max_hit_size {
            let vx: Vec<usize> = (0..=n).filter(|&v| v != x).collect();
            let missed = hamiltonian_cycles(&vx).into_iter().find(|cyc| {
                (0..cyc.len()).all(|p| {
                    let (a, b) = (cyc[p], cyc[(p + 1) % cyc.len()]);
                    !o.candidates.contains(&(a.min(b), a.max(b)))
                })
            });
            tally(t, "separating set").check(missed.is_none(), || {
                format!("n={n} x={x} ({}): cycle {missed:?} avoids {:?}", o.case.name(), o.candidates)
            });
        }
    }
}

/// Every dispatch row rewires into a Hamiltonian cycle wherever it applies,
/// and every admissible pair is served by some row.
pub fn dispatch_rows(max_m: usize) -> Tally {
    let mut t = Tally::default();
    for m in (4..=max_m).step_by(2) {
        for row in 1..=DISPATCH_ROWS {
            for i in 0..m {
                for j in 0..m {
                    if dispatch_row_applies(row, m, i, j) {
                        t.check(rewired_dispatch_is_hamiltonian(row, m, i, j), || {
                            format!("m={m} row {row} ({i},{j})")
                        });
                    }
                }
            }
        }
        for (i, j) in admissible_pairs(m) {
            let served = (1..=DISPATCH_ROWS).any(|r| {
                (dispatch_row_applies(r, m, i, j) && rewired_dispatch_is_hamiltonian(r, m, i, j))
                    || (dispatch_row_applies(r, m, j, i) && rewired_dispatch_is_hamiltonian(r, m, j, i))
            });
            t.check(served, || format!("m={m} pair ({i},{j}) has no row"));
        }
    }
    t
}

// ------------------------------------------------------------ inequalities

fn directed_delta(inst: &Instance, x: usize, t: &Tour, dir: Direction) -> Value {
    let (i, j) = t.neighbours(x);
    delta(inst, x, i, j, dir).unwrap()
}

/// `sum_x delta_x(T) = 2 d(T) - d(T^2)` for both matrices.
pub fn square_identity(inst: &Instance, tour: &Tour) -> bool {
    let sq = tour.square().unwrap();
    [(Direction::Pickup, &inst.dp), (Direction::Delivery, &inst.dd)]
        .iter()
        .all(|&(dir, d)| {
            let sum: Value = (0..inst.vertex_count()).map(|x| directed_delta(inst, x, tour, dir)).sum();
            sum == int(2) * tour.cost(d) - sq.cost(d)
        })
}

/// The sandwich between the combined tour, the optimum and the two separate
/// tours, and the midpoint bound on the combined tour.
pub fn extreme_bounds(inst: &Instance, t: &mut Tallies) {
    let g = inst.goal;
    let ext = exact_extremes(inst).unwrap();
    let (opt, wor) = (ext.opt.value, ext.wor.value);
    let sep = held_karp(&inst.pickup_tsp(), DEFAULT_EXACT_CAP).unwrap().1 + held_karp(&inst.delivery_tsp(), DEFAULT_EXACT_CAP).unwrap().1;
    let sigma = sigma_extremes(inst).unwrap().best.1;
    let id = || format!("n={} {} seed={:?}", inst.n, g, inst.meta.seed);
    tally(t, "sandwich").check(g.at_least(&sep, &opt) && g.at_least(&opt, &sigma) && g.at_least(&opt, &wor), || {
        format!("{}: separate {sep}, opt {opt}, combined {sigma}, wor {wor}", id())
    });
    tally(t, "combined midpoint").check(g.at_least(&sigma, &((opt + wor) / int(2))), || {
        format!("{}: combined {sigma}, opt {opt}, wor {wor}", id())
    });
}

/// Per-vertex bounds of the odd case, `|V|` odd, two rows, symmetric.
pub fn odd_vertex_bounds(inst: &Instance, t: &mut Tallies) {
    let g = inst.goal;
    let ext = exact_extremes(inst).unwrap();
    let (opt, wor) = (ext.opt.value, ext.wor.value);
    let worst_sigma = sigma_extremes(inst).unwrap().worst.0;
    let (tp, td) = (&ext.opt.pickup, &ext.opt.delivery);
    let results = all_vertex_results(inst).unwrap();
    let id = || format!("n={} c={} {} seed={:?}", inst.n, inst.c, g, inst.meta.seed);
    let mut sum = int(0);
    for (o, best) in &results {
        let x = o.x;
        let matched = o.mp.weight(&inst.dp) + o.md.weight(&inst.dd);
        let at_opt = directed_delta(inst, x, tp, Direction::Pickup) + directed_delta(inst, x, td, Direction::Delivery);
        let at_worst =
            directed_delta(inst, x, &worst_sigma, Direction::Pickup) + directed_delta(inst, x, &worst_sigma, Direction::Delivery);
        sum += at_opt - at_worst;
        let half = frac(1, 2);
        tally(t, "matching vs optimum").check(g.at_least(&matched, &(half * (opt - at_opt))), || {
            format!("{} x={x}: matchings {matched}, opt {opt}, delta {at_opt}", id())
        });
        let floor = matched + half * (wor + at_worst);
        let key = format!("per-vertex value ({})", case_key(o, inst.n));
        tally(t, &key).check(best.as_ref().is_some_and(|b| g.at_least(&b.value, &floor)), || {
            format!("{} x={x}: value {:?}, floor {floor}", id(), best.as_ref().map(|b| b.value))
        });
    }
    tally(t, "delta sum").check(g.at_least(&(int(4) * (opt - wor)), &sum), || {
        format!("{}: sum {sum}, opt {opt}, wor {wor}", id())
    });
    let sq = tally(t, "square identity");
    for tour in [tp, td, &worst_sigma] {
        sq.check(square_identity(inst, tour), || format!("{}: tour {tour}", id()));
    }
}

// ----------------------------------------------------------------- ratios

/// `apx2` against the exact optimum at tight capacity; `bound(|V|)` is the
/// guaranteed ratio, a floor for max and a ceiling for min.
pub fn standard_ratio(profile: Profile, goal: Goal, sizes: &[usize], seeds: u64, bound: impl Fn(usize) -> Value) -> Tally {
    let mut t = Tally::default();
    for &n in sizes {
        for seed in 0..seeds {
            let inst = gen_random(profile, n, 2, n.div_ceil(2), goal, seed).unwrap();
            let apx = apx_2dtspms(&inst).unwrap();
            let ext = exact_extremes(&inst).unwrap();
            let want = bound(n + 1);
            let ratio = ratio_report(apx.value, ext.opt.value, ext.wor.value).standard;
            let ok = verify_solution(&inst, &apx).is_ok() && ratio.is_some_and(|r| goal.at_least(&r, &want));
            t.check(ok, || format!("{profile} n={n} seed={seed}: ratio {ratio:?}, bound {want}"));
        }
    }
    t
}

/// Differential ratio of `dapx2` (even `|V|`) or `dapx-odd` (odd `|V|`) at
/// tight capacity against `floor(|V|)`.
pub fn differential_ratio(sizes: &[usize], seeds: u64, floor: impl Fn(usize) -> Value) -> Tally {
    let mut t = Tally::default();
    for &n in sizes {
        for seed in 0..seeds {
            let inst = random_symmetric_instance(n, n.div_ceil(2), seed);
            let run = if n % 2 == 1 { dapx_even(&inst) } else { dapx_odd(&inst) };
            let ext = exact_extremes(&inst).unwrap();
            let want = floor(n + 1);
            let ratio = run
                .as_ref()
                .ok()
                .map(|s| ratio_report(s.value, ext.opt.value, ext.wor.value).differential);
            let ok = run.as_ref().is_ok_and(|s| verify_solution(&inst, s).is_ok()) && ratio.is_some_and(|r| r >= want);
            t.check(ok, || {
                format!(
                    "n={n} {} seed={seed}: differential {ratio:?}, floor {want}, run {:?}",
                    inst.goal,
                    run.as_ref().err()
                )
            });
        }
    }
    t
}

pub fn symmetric_matrix(size: usize, r: &mut ChaCha8Rng) -> DistanceMatrix {
    let mut d = DistanceMatrix::constant(size, int(0));
    for i in 0..size {
        for j in i + 1..size {
            let w = int(r.gen_range(1..=20));
            d.set(i, j, w);
            d.set(j, i, w);
        }
    }
    d
}
