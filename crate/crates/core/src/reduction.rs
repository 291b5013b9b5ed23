//! Solutions built from plain TSP tours, and the TSP-level transforms.

use crate::error::{Error, Result};
use crate::model::{frac, int, DistanceMatrix, Instance, LoadingPlan, SolutionTriple, Tour, TspInstance, Value};
use crate::tsp::TspSolver;

/// Pickup tour `t` with the reversed tour for delivery.
///
/// Rows are consecutive blocks of `c` items along `t`, so delivering in the
/// reverse order unloads every row back to front.
pub fn reverse_pair(inst: &Instance, t: &Tour) -> SolutionTriple {
    let items = &t.vertices()[1..];
    let rows: Vec<Vec<usize>> = items.chunks(inst.c.max(1)).map(<[usize]>::to_vec).collect();
    let plan = LoadingPlan::new(rows).padded(inst.k);
    inst.triple(plan, t.clone(), t.reverse())
}

/// Better of `(T_P, T_P^-)` and `(T_D^-, T_D)` for tours solved on the two
/// single-tour instances.
pub fn reduce_two_tours(inst: &Instance, solver: &TspSolver) -> Result<SolutionTriple> {
    check_capacity(inst)?;
    let tp = solver.solve(&inst.pickup_tsp())?;
    let td = solver.solve(&inst.delivery_tsp())?;
    let a = reverse_pair(inst, &tp);
    let b = reverse_pair(inst, &td.reverse());
    Ok(if inst.goal.at_least(&a.value, &b.value) { a } else { b })
}

/// Tour on the combined instance paired with its reverse.
pub fn reduce_sigma(inst: &Instance, solver: &TspSolver) -> Result<SolutionTriple> {
    check_capacity(inst)?;
    let t = solver.solve(&inst.sigma())?;
    Ok(reverse_pair(inst, &t))
}

fn check_capacity(inst: &Instance) -> Result<()> {
    if inst.k * inst.c < inst.n {
        return Err(Error::Capacity(format!("k*c = {} is below n = {}", inst.k * inst.c, inst.n)));
    }
    Ok(())
}

/// The two transformed instances of a symmetric TSP instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transforms {
    /// `d_max - d`, goal flipped.
    pub reversed: TspInstance,
    /// `d + d_max - 2 d_min`, same goal; always metric.
    pub metric: TspInstance,
    pub d_min: Value,
    pub d_max: Value,
}

pub fn differential_transforms(inst: &TspInstance) -> Result<Transforms> {
    if !inst.d.is_symmetric() {
        return Err(Error::Precondition("differential transforms need a symmetric instance".into()));
    }
    let (d_min, d_max) = inst
        .d
        .off_diagonal_extremes()
        .ok_or_else(|| Error::Precondition("differential transforms need at least two vertices".into()))?;
    let size = inst.size();
    let off = |i: usize, j: usize, v| if i == j { int(0) } else { v };
    let d1 = DistanceMatrix::from_fn(size, |i, j| off(i, j, d_max - inst.d.get(i, j)));
    let d2 = DistanceMatrix::from_fn(size, |i, j| off(i, j, inst.d.get(i, j) + d_max - d_min - d_min));
    Ok(Transforms {
        reversed: TspInstance::new(d1, inst.goal.flip()),
        metric: TspInstance::new(d2, inst.goal),
        d_min,
        d_max,
    })
}

/// Stacks instance whose reverse-pair solutions cost exactly the tour.
///
/// `depot` of the TSP instance becomes vertex 0 (swapped with the old 0).
pub fn embed_tsp(inst: &TspInstance, k: usize, c: usize, depot: usize) -> Result<Instance> {
    let size = inst.size();
    if depot >= size {
        return Err(Error::Dimension(format!("depot {depot} outside 0..{size}")));
    }
    let n = size - 1;
    if k * c < n {
        return Err(Error::Capacity(format!("k*c = {} is below n = {n}", k * c)));
    }
    let relabel = |v: usize| {
        if v == 0 {
            depot
        } else if v == depot {
            0
        } else {
            v
        }
    };
    let half = frac(1, 2);
    let dp = DistanceMatrix::from_fn(size, |i, j| inst.d.get(relabel(i), relabel(j)) * half);
    let dd = dp.transpose();
    Instance::new(n, k, c, dp, dd, inst.goal)
}
