//! Instance families: the two tight constructions and seeded random draws.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{frac, int, DistanceMatrix, Goal, Instance, InstanceMeta, LoadingPlan, SolutionTriple, Tour, Value};

/// All-pairs shortest paths over the given arcs; `None` means no arc.
pub fn shortest_paths(size: usize, arc: impl Fn(usize, usize) -> Option<Value>) -> Result<DistanceMatrix> {
    let mut d: Vec<Option<Value>> = (0..size * size)
        .map(|p| {
            if p / size == p % size {
                Some(int(0))
            } else {
                arc(p / size, p % size)
            }
        })
        .collect();
    for m in 0..size {
        for i in 0..size {
            let Some(a) = d[i * size + m] else { continue };
            for j in 0..size {
                if let Some(b) = d[m * size + j] {
                    let via = a + b;
                    if d[i * size + j].is_none_or(|cur| via < cur) {
                        d[i * size + j] = Some(via);
                    }
                }
            }
        }
    }
    let entries = d
        .into_iter()
        .collect::<Option<Vec<Value>>>()
        .ok_or_else(|| Error::Precondition("arc set is not strongly connected".into()))?;
    DistanceMatrix::new(size, entries)
}

/// Metric instance on `kc + 1` vertices whose combined-tour optimum is far
/// from the true optimum.
///
/// Pickup distances are `lambda` along the cycle `(0, 1, ..., kc)`, delivery
/// distances 1 along the cycle of stride `c`; both are closed under shortest
/// paths on the undirected cycles.
pub fn gen_metric_tight(lambda: Value, k: usize, c: usize) -> Result<Instance> {
    if k < 2 || c < k {
        return Err(Error::Precondition(format!("need c >= k >= 2, got k = {k}, c = {c}")));
    }
    if lambda <= int(0) {
        return Err(Error::Precondition(format!("lambda must be positive, got {lambda}")));
    }
    let size = k * c + 1;
    let step = |s: usize| move |i: usize, j: usize| (j + size - i) % size == s || (i + size - j) % size == s;
    let (p, d) = (step(1), step(c));
    let dp = shortest_paths(size, |i, j| p(i, j).then_some(lambda))?;
    let dd = shortest_paths(size, |i, j| d(i, j).then_some(int(1)))?;
    let meta = InstanceMeta {
        family: Some(format!("metric-tight({lambda},{k},{c})")),
        seed: None,
    };
    Ok(Instance::new(size - 1, k, c, dp, dd, Goal::Min)?.with_meta(meta))
}

/// The optimal solution of [`gen_metric_tight`]: rows of `c` consecutive
/// items, pickup along the unit cycle, delivery along the stride cycle.
pub fn metric_tight_witness(inst: &Instance) -> Result<SolutionTriple> {
    let (k, c) = (inst.k, inst.c);
    let size = k * c + 1;
    if inst.vertex_count() != size {
        return Err(Error::Dimension(format!("expected {size} vertices for k = {k}, c = {c}")));
    }
    let rows = (0..k).map(|r| (r * c + 1..=(r + 1) * c).collect()).collect();
    let pickup = Tour::identity(size);
    let delivery = Tour::new((0..size).map(|t| t * c % size).collect())?;
    Ok(inst.triple(LoadingPlan::new(rows), pickup, delivery))
}

/// Symmetric two-valued instance with `4 n'` items, two rows of `2 n'`:
/// `lambda` along the cycle `(0, 1, ..., 4n')`, `mu` elsewhere. Maximised
/// iff `lambda > mu`.
pub fn gen_bivalued_tight(lambda: Value, mu: Value, n_prime: usize) -> Result<Instance> {
    if n_prime == 0 || lambda == mu || lambda < int(0) || mu < int(0) {
        return Err(Error::Precondition(format!(
            "need lambda != mu >= 0 and n' >= 1, got ({lambda}, {mu}, {n_prime})"
        )));
    }
    let n = 4 * n_prime;
    let size = n + 1;
    let d = DistanceMatrix::from_fn(size, |i, j| {
        if i == j {
            int(0)
        } else if (i + 1) % size == j || (j + 1) % size == i {
            lambda
        } else {
            mu
        }
    });
    let goal = if lambda > mu { Goal::Max } else { Goal::Min };
    let meta = InstanceMeta {
        family: Some(format!("bivalued-tight({lambda},{mu},{n_prime})")),
        seed: None,
    };
    Ok(Instance::new(n, 2, 2 * n_prime, d.clone(), d, goal)?.with_meta(meta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Independent integer entries in `1..=20`.
    General,
    Symmetric,
    /// Rounded plane distances, closed under shortest paths.
    MetricSymmetric,
    /// Symmetric entries drawn from `{a, b}`.
    Bivalued(i128, i128),
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::General => f.write_str("general"),
            Profile::Symmetric => f.write_str("symmetric"),
            Profile::MetricSymmetric => f.write_str("metric"),
            Profile::Bivalued(a, b) => write!(f, "bivalued-{a}-{b}"),
        }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Profile::General),
            "symmetric" => Ok(Profile::Symmetric),
            "metric" => Ok(Profile::MetricSymmetric),
            _ => {
                let parts: Vec<&str> = s.strip_prefix("bivalued-").map(|r| r.split('-').collect()).unwrap_or_default();
                match parts.as_slice() {
                    [a, b] => match (a.parse(), b.parse()) {
                        (Ok(a), Ok(b)) => Ok(Profile::Bivalued(a, b)),
                        _ => Err(Error::Precondition(format!("bad bivalued profile {s:?}"))),
                    },
                    _ => Err(Error::Precondition(format!("unknown profile {s:?}"))),
                }
            }
        }
    }
}

const HI: i128 = 20;
/// Plane distances are rounded up to this many parts per unit.
const GRID: i128 = 4;

fn draw(profile: Profile, size: usize, rng: &mut ChaCha8Rng) -> Result<DistanceMatrix> {
    let mut d = DistanceMatrix::constant(size, int(0));
    match profile {
        Profile::General => {
            for i in 0..size {
                for j in 0..size {
                    if i != j {
                        d.set(i, j, int(rng.gen_range(1..=HI)));
                    }
                }
            }
        }
        Profile::Symmetric | Profile::Bivalued(..) => {
            for i in 0..size {
                for j in i + 1..size {
                    let v = match profile {
                        Profile::Bivalued(a, b) => int(if rng.gen_bool(0.5) { a } else { b }),
                        _ => int(rng.gen_range(1..=HI)),
                    };
                    d.set(i, j, v);
                    d.set(j, i, v);
                }
            }
        }
        Profile::MetricSymmetric => {
            let pts: Vec<(f64, f64)> = (0..size).map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
            let rounded = |i: usize, j: usize| {
                let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
                frac(((dx * dx + dy * dy).sqrt() * GRID as f64).ceil() as i128, GRID)
            };
            d = shortest_paths(size, |i, j| Some(rounded(i.min(j), i.max(j))))?;
        }
    }
    Ok(d)
}

/// Deterministic random instance; the seed and profile go into the metadata.
pub fn gen_random(profile: Profile, n: usize, k: usize, c: usize, goal: Goal, seed: u64) -> Result<Instance> {
    if n == 0 || k == 0 || k * c < n {
        return Err(Error::Precondition(format!(
            "need n >= 1 and k*c >= n, got n = {n}, k = {k}, c = {c}"
        )));
    }
    if let Profile::Bivalued(a, b) = profile {
        if a < 0 || b < 0 {
            return Err(Error::Precondition("bivalued distances must be non-negative".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dp = draw(profile, n + 1, &mut rng)?;
    let dd = draw(profile, n + 1, &mut rng)?;
    let meta = InstanceMeta {
        family: Some(profile.to_string()),
        seed: Some(seed),
    };
    Ok(Instance::new(n, k, c, dp, dd, goal)?.with_meta(meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::verify_solution;

    #[test]
    fn metric_tight_shape() {
        let inst = gen_metric_tight(frac(1, 2), 2, 3).unwrap();
        assert_eq!(inst.n, 6);
        assert_eq!(inst.dp.get(2, 3), frac(1, 2));
        assert_eq!(inst.dp.get(0, 3), frac(3, 2));
        assert_eq!(inst.dd.get(0, 3), int(1));
        let rep = inst.validate();
        assert!(rep.is_valid() && rep.metric && rep.symmetric && rep.tight);
        let w = metric_tight_witness(&inst).unwrap();
        assert!(verify_solution(&inst, &w).is_ok());
        assert_eq!(w.value, int(7) * frac(3, 2));
    }

    #[test]
    fn bivalued_tight_shape() {
        let inst = gen_bivalued_tight(int(1), int(0), 1).unwrap();
        assert_eq!((inst.n, inst.k, inst.c, inst.goal), (4, 2, 2, Goal::Max));
        assert_eq!(inst.dp.get(4, 0), int(1));
        assert_eq!(inst.dp.get(1, 3), int(0));
        let rep = inst.validate();
        assert!(rep.symmetric && rep.bivalued == Some((int(0), int(1))));
        assert!(gen_bivalued_tight(int(1), int(1), 1).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        for p in [
            Profile::General,
            Profile::Symmetric,
            Profile::MetricSymmetric,
            Profile::Bivalued(1, 2),
        ] {
            let a = gen_random(p, 6, 2, 3, Goal::Min, 11).unwrap();
            assert_eq!(a, gen_random(p, 6, 2, 3, Goal::Min, 11).unwrap());
            assert_ne!(a.dp, gen_random(p, 6, 2, 3, Goal::Min, 12).unwrap().dp);
            assert_eq!(p.to_string().parse::<Profile>().unwrap(), p);
        }
    }

    #[test]
    fn profiles_hold() {
        for seed in 0..20 {
            let m = gen_random(Profile::MetricSymmetric, 7, 2, 4, Goal::Min, seed).unwrap().validate();
            assert!(m.metric && m.symmetric);
            let b = gen_random(Profile::Bivalued(1, 2), 7, 2, 4, Goal::Max, seed).unwrap();
            assert!(b.dp.entries().iter().all(|v| [int(0), int(1), int(2)].contains(v)));
        }
    }
}
