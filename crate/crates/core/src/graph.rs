//! Small multigraph helpers: cycle walks and component decomposition of
//! unions of matchings.

use crate::feasibility::{delivery_consistent, pickup_consistent};
use crate::model::{Direction, Edge, LoadingPlan, Tour};

fn adjacency(vertices: &[usize], edges: &[Edge]) -> Option<(Vec<usize>, Vec<Vec<Edge>>)> {
    let max = vertices
        .iter()
        .chain(edges.iter().flat_map(|e| [&e.0, &e.1]))
        .copied()
        .max()
        .unwrap_or(0);
    let mut local = vec![usize::MAX; max + 1];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let mut adj = vec![Vec::new(); vertices.len()];
    for (id, &(a, b)) in edges.iter().enumerate() {
        let (la, lb) = (local[a], local[b]);
        if la == usize::MAX || lb == usize::MAX || a == b {
            return None;
        }
        adj[la].push((lb, id));
        adj[lb].push((la, id));
    }
    Some((local, adj))
}

/// The vertex order of the cycle when `edges` (a multiset) is exactly one
/// cycle through every vertex. Starts at the smallest vertex and moves
/// toward its smaller neighbour.
pub fn single_cycle(vertices: &[usize], edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    if vertices.len() < 2 || edges.len() != vertices.len() {
        return None;
    }
    let (_, adj) = adjacency(vertices, edges)?;
    if adj.iter().any(|a| a.len() != 2) {
        return None;
    }
    let start = (0..vertices.len()).min_by_key(|&i| vertices[i]).unwrap();
    let first = if vertices[adj[start][0].0] <= vertices[adj[start][1].0] {
        adj[start][0]
    } else {
        adj[start][1]
    };
    let mut seq = vec![vertices[start]];
    let (mut cur, mut via) = first;
    while cur != start {
        seq.push(vertices[cur]);
        let next = if adj[cur][0].1 != via { adj[cur][0] } else { adj[cur][1] };
        cur = next.0;
        via = next.1;
    }
    (seq.len() == vertices.len()).then_some(seq)
}

pub fn is_hamiltonian_cycle(vertices: &[usize], edges: &[(usize, usize)]) -> bool {
    single_cycle(vertices, edges).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub seq: Vec<usize>,
    /// Cycle (possibly a doubled edge) rather than a chain.
    pub closed: bool,
}

/// Components of a multigraph of maximum degree two, ordered by smallest
/// vertex. Cycles start at their smallest vertex toward its smaller
/// neighbour; chains start at their smaller endpoint.
pub fn components(vertices: &[usize], edges: &[(usize, usize)]) -> Option<Vec<Component>> {
    let (_, adj) = adjacency(vertices, edges)?;
    if adj.iter().any(|a| a.len() > 2) {
        return None;
    }
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by_key(|&i| vertices[i]);
    let mut seen = vec![false; vertices.len()];
    let mut comps = Vec::new();
    for &s in &order {
        if seen[s] {
            continue;
        }
        // collect the component, then find where to start
        let mut members = vec![s];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(w, _) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        let closed = members.iter().all(|&u| adj[u].len() == 2);
        let start = if closed {
            *members.iter().min_by_key(|&&u| vertices[u]).unwrap()
        } else {
            *members.iter().filter(|&&u| adj[u].len() < 2).min_by_key(|&&u| vertices[u]).unwrap()
        };
        let mut seq = vec![vertices[start]];
        if !adj[start].is_empty() {
            let first = if closed && vertices[adj[start][1].0] < vertices[adj[start][0].0] {
                adj[start][1]
            } else {
                adj[start][0]
            };
            let (mut cur, mut via) = first;
            while cur != start {
                seq.push(vertices[cur]);
                match adj[cur].iter().find(|&&(_, id)| id != via) {
                    Some(&(nx, id)) => {
                        cur = nx;
                        via = id;
                    }
                    None => break,
                }
            }
        }
        comps.push(Component { seq, closed });
    }
    Some(comps)
}

/// A depot-rooted tour following `cycle` in the given orientation.
pub fn tour_from_cycle(cycle: &[usize], forward: bool) -> Tour {
    let p = cycle.iter().position(|&v| v == 0).expect("cycle contains the depot");
    let len = cycle.len();
    let seq = (0..len)
        .map(|s| {
            if forward {
                cycle[(p + s) % len]
            } else {
                cycle[(p + len - s) % len]
            }
        })
        .collect();
    Tour::new(seq).expect("cycle is a permutation")
}

/// An orientation of the undirected cycle formed by `edges` over
/// `0..=n` that respects `plan` in direction `dir`.
pub fn consistent_tour(n: usize, edges: &[(usize, usize)], plan: &LoadingPlan, dir: Direction) -> Option<Tour> {
    let verts: Vec<usize> = (0..=n).collect();
    let cycle = single_cycle(&verts, edges)?;
    for forward in [true, false] {
        let t = tour_from_cycle(&cycle, forward);
        let ok = match dir {
            Direction::Pickup => pickup_consistent(&t, plan),
            Direction::Delivery => delivery_consistent(&t, plan),
        };
        if ok {
            return Some(t);
        }
    }
    None
}

/// Edges `(v_i, v_{i+1})` of a closed vertex sequence.
pub fn cycle_edges(seq: &[usize]) -> Vec<(usize, usize)> {
    (0..seq.len()).map(|i| (seq[i], seq[(i + 1) % seq.len()])).collect()
}

/// Removes one occurrence of the undirected edge `(a, b)`.
pub fn remove_edge(edges: &mut Vec<(usize, usize)>, a: usize, b: usize) -> bool {
    match edges.iter().position(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a)) {
        Some(p) => {
            edges.swap_remove(p);
            true
        }
        None => false,
    }
}

/// Replaces one occurrence of `(a, b)` by the path `a - x - b`.
pub fn splice(edges: &mut Vec<(usize, usize)>, a: usize, b: usize, x: usize) -> bool {
    if remove_edge(edges, a, b) {
        edges.push((a, x));
        edges.push((x, b));
        true
    } else {
        false
    }
}
