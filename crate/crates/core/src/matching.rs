//! Exact optimum perfect and near-perfect matchings on complete graphs.
//!
//! Subset dynamic program: the lowest remaining vertex is matched first, so
//! the reachable masks are far fewer than `2^m`. Intended for vertex sets up
//! to about 22. Pair weight is `d(min, max)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{DistanceMatrix, Edge, Goal, Matching, Value};
use crate::scaled::ScaledMatrix;

pub const MAX_MATCHING_VERTICES: usize = 26;

struct Solver<'a> {
    verts: &'a [usize],
    w: ScaledMatrix,
    memo: HashMap<u32, (i128, u8)>,
}

impl Solver<'_> {
    fn weight(&self, a: usize, b: usize) -> i128 {
        let (u, v) = (self.verts[a], self.verts[b]);
        self.w.get(u.min(v), u.max(v))
    }

    /// Minimum oriented weight of a perfect matching of `mask`; partner of
    /// the lowest set bit, smallest on ties.
    fn solve(&mut self, mask: u32) -> i128 {
        if mask == 0 {
            return 0;
        }
        if let Some(&(v, _)) = self.memo.get(&mask) {
            return v;
        }
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << low);
        let mut best = i128::MAX;
        let mut arg = 0u8;
        let mut it = rest;
        while it != 0 {
            let j = it.trailing_zeros() as usize;
            it &= it - 1;
            let v = self.weight(low, j) + self.solve(rest & !(1 << j));
            if v < best {
                best = v;
                arg = j as u8;
            }
        }
        self.memo.insert(mask, (best, arg));
        best
    }

    fn pairs(&mut self, mut mask: u32) -> Vec<(usize, usize)> {
        self.solve(mask);
        let mut out = Vec::new();
        while mask != 0 {
            let low = mask.trailing_zeros() as usize;
            let j = self.memo[&mask].1 as usize;
            out.push((self.verts[low], self.verts[j]));
            mask &= !(1 << low) & !(1 << j);
        }
        out
    }
}

fn sorted_vertices(vertices: &[usize]) -> Result<Vec<usize>> {
    let mut v = vertices.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != vertices.len() {
        return Err(Error::Precondition("vertex list has duplicates".to_string()));
    }
    if v.len() > MAX_MATCHING_VERTICES {
        return Err(Error::CapExceeded {
            size: v.len(),
            cap: MAX_MATCHING_VERTICES,
        });
    }
    Ok(v)
}

/// Optimum perfect matching; among equal weights the lexicographically
/// smallest sorted pair list.
pub fn optimal_perfect_matching(vertices: &[usize], d: &DistanceMatrix, goal: Goal) -> Result<Matching> {
    let verts = sorted_vertices(vertices)?;
    if verts.len() % 2 == 1 {
        return Err(Error::Precondition(format!(
            "perfect matching needs an even vertex count, got {}",
            verts.len()
        )));
    }
    let mut s = Solver {
        verts: &verts,
        w: ScaledMatrix::oriented(d, goal),
        memo: HashMap::new(),
    };
    let full = if verts.is_empty() { 0 } else { u32::MAX >> (32 - verts.len()) };
    let pairs = s.pairs(full);
    Matching::new(pairs)
}

/// Optimum matching exposing exactly one vertex, over every exposed choice.
/// Ties go to the smaller pair list, then the smaller exposed vertex.
pub fn optimal_near_perfect_matching(vertices: &[usize], d: &DistanceMatrix, goal: Goal) -> Result<(Matching, usize)> {
    let verts = sorted_vertices(vertices)?;
    if verts.len() % 2 == 0 {
        return Err(Error::Precondition(format!(
            "near-perfect matching needs an odd vertex count, got {}",
            verts.len()
        )));
    }
    let mut s = Solver {
        verts: &verts,
        w: ScaledMatrix::oriented(d, goal),
        memo: HashMap::new(),
    };
    let full = u32::MAX >> (32 - verts.len());
    let mut best: Option<(i128, Vec<Edge>, usize)> = None;
    for (e, &v_e) in verts.iter().enumerate() {
        let mask = full & !(1 << e);
        let v = s.solve(mask);
        let mut pairs = s.pairs(mask);
        pairs.sort_unstable();
        let better = match &best {
            None => true,
            Some((bv, bp, _)) => v < *bv || (v == *bv && pairs < *bp),
        };
        if better {
            best = Some((v, pairs, v_e));
        }
    }
    let (_, pairs, exposed) = best.expect("odd vertex set is non-empty");
    Ok((Matching::new(pairs)?, exposed))
}

pub fn matching_weight(m: &Matching, d: &DistanceMatrix) -> Value {
    m.weight(d)
}
