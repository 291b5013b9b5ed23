//! Plain TSP solvers used by the reduction paths.
//!
//! Only the bitmask DP is exact. The heuristics carry no guarantee except
//! the double tree, which is within twice the optimum on metric inputs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Goal, Tour, TspInstance, Value};
use crate::scaled::ScaledMatrix;

pub const DEFAULT_EXACT_CAP: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TspMethod {
    Exact,
    NearestNeighbor,
    DoubleTree,
    GreedyMax,
}

impl TspMethod {
    pub const ALL: [TspMethod; 4] = [
        TspMethod::Exact,
        TspMethod::NearestNeighbor,
        TspMethod::DoubleTree,
        TspMethod::GreedyMax,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TspMethod::Exact => "exact",
            TspMethod::NearestNeighbor => "nn",
            TspMethod::DoubleTree => "double-tree",
            TspMethod::GreedyMax => "greedy-max",
        }
    }
}

impl FromStr for TspMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TspMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown TSP method {s:?}")))
    }
}

impl fmt::Display for TspMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TspSolver {
    pub method: TspMethod,
    /// Largest vertex count the exact DP accepts.
    pub exact_cap: usize,
}

impl TspSolver {
    pub fn new(method: TspMethod) -> Self {
        TspSolver {
            method,
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.exact_cap = cap;
        self
    }

    pub fn solve(&self, inst: &TspInstance) -> Result<Tour> {
        if inst.size() <= 3 {
            // every tour is optimal up to direction; the exact DP still picks it
            return Ok(held_karp(inst, usize::MAX)?.0);
        }
        match self.method {
            TspMethod::Exact => Ok(held_karp(inst, self.exact_cap)?.0),
            TspMethod::NearestNeighbor => Ok(nearest_neighbor(inst)),
            TspMethod::DoubleTree => double_tree(inst),
            TspMethod::GreedyMax => Ok(greedy_edges(inst)),
        }
    }
}

pub fn tsp_solve(inst: &TspInstance, method: TspMethod) -> Result<Tour> {
    TspSolver::new(method).solve(inst)
}

/// Optimal tour and its value by DP over (visited set, last vertex).
pub fn held_karp(inst: &TspInstance, cap: usize) -> Result<(Tour, Value)> {
    let size = inst.size();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let w = ScaledMatrix::oriented(&inst.d, inst.goal);
    if size <= 2 {
        let t = Tour::identity(size.max(1));
        let v = t.cost(&inst.d);
        return Ok((t, v));
    }
    let m = size - 1;
    let full = (1usize << m) - 1;
    let mut best = vec![i128::MAX; (full + 1) * m];
    let mut parent = vec![u8::MAX; (full + 1) * m];
    for j in 0..m {
        best[(1 << j) * m + j] = w.get(0, j + 1);
    }
    for mask in 1..=full {
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let cur = best[mask * m + j];
            if cur == i128::MAX {
                continue;
            }
            let mut rest = full & !mask;
            while rest != 0 {
                let t = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let next = mask | (1 << t);
                let cand = cur + w.get(j + 1, t + 1);
                if cand < best[next * m + t] {
                    best[next * m + t] = cand;
                    parent[next * m + t] = j as u8;
                }
            }
        }
    }
    let (mut last, mut total) = (0, i128::MAX);
    for j in 0..m {
        let cand = best[full * m + j] + w.get(j + 1, 0);
        if cand < total {
            total = cand;
            last = j;
        }
    }
    let mut seq = vec![0usize; size];
    let mut mask = full;
    for pos in (1..size).rev() {
        seq[pos] = last + 1;
        let p = parent[mask * m + last];
        mask &= !(1 << last);
        last = p as usize;
    }
    Ok((Tour::new(seq)?, w.value(total)))
}

/// Greedy walk from the depot to the best unvisited vertex.
pub fn nearest_neighbor(inst: &TspInstance) -> Tour {
    let size = inst.size();
    let w = ScaledMatrix::oriented(&inst.d, inst.goal);
    let mut seen = vec![false; size];
    seen[0] = true;
    let mut seq = vec![0];
    let mut cur = 0;
    for _ in 1..size {
        let next = (0..size).filter(|&v| !seen[v]).min_by_key(|&v| w.get(cur, v)).unwrap();
        seen[next] = true;
        seq.push(next);
        cur = next;
    }
    Tour::new(seq).expect("walk visits every vertex once")
}

/// Preorder walk of a minimum spanning tree rooted at the depot.
///
/// Needs a symmetric metric minimisation instance.
pub fn double_tree(inst: &TspInstance) -> Result<Tour> {
    if inst.goal != Goal::Min || !inst.d.is_symmetric() || !inst.d.is_metric() {
        return Err(Error::Precondition("double tree needs a symmetric metric min instance".into()));
    }
    let size = inst.size();
    let w = ScaledMatrix::new(&inst.d);
    // Prim from the depot
    let mut in_tree = vec![false; size];
    let mut key = vec![i128::MAX; size];
    let mut from = vec![0usize; size];
    let mut children = vec![Vec::new(); size];
    key[0] = 0;
    for _ in 0..size {
        let u = (0..size).filter(|&v| !in_tree[v]).min_by_key(|&v| key[v]).unwrap();
        in_tree[u] = true;
        if u != 0 {
            children[from[u]].push(u);
        }
        for v in 0..size {
            if !in_tree[v] && w.get(u, v) < key[v] {
                key[v] = w.get(u, v);
                from[v] = u;
            }
        }
    }
    let mut seq = Vec::with_capacity(size);
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        seq.push(u);
        stack.extend(children[u].iter().rev());
    }
    Tour::new(seq)
}

/// Greedy edge selection: best arcs first, keeping in/out degree at most one
/// and no premature cycle.
pub fn greedy_edges(inst: &TspInstance) -> Tour {
    let size = inst.size();
    let w = ScaledMatrix::oriented(&inst.d, inst.goal);
    let mut arcs: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (0..size).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    arcs.sort_by_key(|&(i, j)| (w.get(i, j), i, j));
    let mut succ = vec![usize::MAX; size];
    let mut has_pred = vec![false; size];
    // end of the path fragment starting at each fragment head
    let mut tail: Vec<usize> = (0..size).collect();
    let mut head: Vec<usize> = (0..size).collect();
    let mut added = 0;
    for (i, j) in arcs {
        if added == size - 1 {
            break;
        }
        if succ[i] != usize::MAX || has_pred[j] || head[i] == j {
            continue;
        }
        succ[i] = j;
        has_pred[j] = true;
        added += 1;
        // i is a fragment tail, j a fragment head
        let h = head[i];
        let t = tail[j];
        tail[h] = t;
        head[t] = h;
    }
    let start = (0..size).find(|&v| !has_pred[v]).unwrap();
    let mut path = vec![start];
    while succ[*path.last().unwrap()] != usize::MAX {
        path.push(succ[*path.last().unwrap()]);
    }
    let at = path.iter().position(|&v| v == 0).unwrap();
    path.rotate_left(at);
    Tour::new(path).expect("greedy fragments join into one path")
}
