//! Problem data, solution representation and cost evaluation.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact distance/value type.
pub type Value = Ratio<i128>;
/// Ordered vertex pair.
pub type Edge = (usize, usize);

pub fn int(v: i128) -> Value {
    Value::from_integer(v)
}

pub fn frac(p: i128, q: i128) -> Value {
    Value::new(p, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Goal {
    Min,
    Max,
}

impl Goal {
    /// Strictly better under this goal.
    pub fn better<T: PartialOrd>(self, a: &T, b: &T) -> bool {
        match self {
            Goal::Min => a < b,
            Goal::Max => a > b,
        }
    }

    /// `a` is at least as good as `b`.
    pub fn at_least<T: PartialOrd>(self, a: &T, b: &T) -> bool {
        !self.better(b, a)
    }

    pub fn pick<T: PartialOrd + Clone>(self, a: &T, b: &T) -> T {
        if self.better(b, a) {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub fn flip(self) -> Goal {
        match self {
            Goal::Min => Goal::Max,
            Goal::Max => Goal::Min,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Goal::Min => "min",
            Goal::Max => "max",
        }
    }

    /// Multiplier that turns this goal into minimisation.
    pub fn sign(self) -> i128 {
        match self {
            Goal::Min => 1,
            Goal::Max => -1,
        }
    }
}

impl std::str::FromStr for Goal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Goal> {
        match s {
            "min" => Ok(Goal::Min),
            "max" => Ok(Goal::Max),
            _ => Err(Error::Precondition(format!("unknown goal `{s}`"))),
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Pickup,
    Delivery,
}

/// Square matrix of exact distances over `V = {0..size-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    size: usize,
    data: Vec<Value>,
}

impl DistanceMatrix {
    pub fn new(size: usize, data: Vec<Value>) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {size}x{size} matrix, got {}",
                size * size,
                data.len()
            )));
        }
        Ok(DistanceMatrix { size, data })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Value) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        DistanceMatrix { size, data }
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Result<Self> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Dimension(format!("row {r} has {} entries, expected {size}", row.len())));
            }
            data.extend(row.iter().map(|&v| int(v)));
        }
        Ok(DistanceMatrix { size, data })
    }

    pub fn constant(size: usize, w: Value) -> Self {
        Self::from_fn(size, |i, j| if i == j { Value::zero() } else { w })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Value {
        self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Value) {
        self.data[i * self.size + j] = v;
    }

    pub fn entries(&self) -> &[Value] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |i, j| self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (i + 1..self.size).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_metric(&self) -> bool {
        let n = self.size;
        for u in 0..n {
            for v in 0..n {
                let duv = self.get(u, v);
                for w in 0..n {
                    if duv > self.get(u, w) + self.get(w, v) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Off-diagonal values when there are at most two of them, ascending.
    pub fn bivalued(&self) -> Option<(Value, Value)> {
        let mut vals: Vec<Value> = Vec::new();
        for i in 0..self.size {
            for j in 0..self.size {
                if i != j && !vals.contains(&self.get(i, j)) {
                    vals.push(self.get(i, j));
                    if vals.len() > 2 {
                        return None;
                    }
                }
            }
        }
        vals.sort();
        match vals.len() {
            0 => None,
            1 => Some((vals[0], vals[0])),
            _ => Some((vals[0], vals[1])),
        }
    }

    pub fn off_diagonal_extremes(&self) -> Option<(Value, Value)> {
        let mut it = (0..self.size)
            .flat_map(|i| (0..self.size).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .map(|(i, j)| self.get(i, j));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    /// Cost of a closed walk given as a vertex sequence.
    pub fn cycle_cost(&self, seq: &[usize]) -> Value {
        if seq.len() < 2 {
            return Value::zero();
        }
        let mut s = Value::zero();
        for w in seq.windows(2) {
            s += self.get(w[0], w[1]);
        }
        s + self.get(seq[seq.len() - 1], seq[0])
    }
}

/// Depot-rooted Hamiltonian cycle over `{0..len-1}`, implicitly closed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour(Vec<usize>);

impl Tour {
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        if seq.first() != Some(&0) {
            return Err(Error::InvalidTour(format!("tour must start at the depot: {seq:?}")));
        }
        let mut seen = vec![false; seq.len()];
        for &v in &seq {
            if v >= seq.len() || seen[v] {
                return Err(Error::InvalidTour(format!("not a permutation of 0..{}: {seq:?}", seq.len())));
            }
            seen[v] = true;
        }
        Ok(Tour(seq))
    }

    pub fn identity(vertex_count: usize) -> Self {
        Tour((0..vertex_count).collect())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(0, i_n, ..., i_1)` for `(0, i_1, ..., i_n)`.
    pub fn reverse(&self) -> Tour {
        let mut v = Vec::with_capacity(self.0.len());
        v.push(0);
        v.extend(self.0[1..].iter().rev());
        Tour(v)
    }

    pub fn cost(&self, d: &DistanceMatrix) -> Value {
        d.cycle_cost(&self.0)
    }

    /// `rank[v]` = position of `v` in the tour.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.0.len()];
        for (p, &v) in self.0.iter().enumerate() {
            r[v] = p;
        }
        r
    }

    /// Predecessor and successor of `v`.
    pub fn neighbours(&self, v: usize) -> (usize, usize) {
        let len = self.0.len();
        let p = self.ranks()[v];
        (self.0[(p + len - 1) % len], self.0[(p + 1) % len])
    }

    /// Tour joining vertices at distance two. Needs an odd vertex count.
    pub fn square(&self) -> Result<Tour> {
        let len = self.0.len();
        if len.is_multiple_of(2) {
            return Err(Error::Precondition(format!(
                "square of a tour needs an odd vertex count, got {len}"
            )));
        }
        let mut v = Vec::with_capacity(len);
        let mut p = 0;
        for _ in 0..len {
            v.push(self.0[p]);
            p = (p + 2) % len;
        }
        Ok(Tour(v))
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&s.join(" "))
    }
}

/// `k` ordered rows; front of a row is loaded first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoadingPlan {
    rows: Vec<Vec<usize>>,
}

impl LoadingPlan {
    pub fn new(rows: Vec<Vec<usize>>) -> Self {
        LoadingPlan { rows }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<usize>> {
        self.rows
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn item_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_row_len(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Non-empty rows sorted by first item, empty rows last.
    pub fn canonical(&self) -> LoadingPlan {
        let mut rows: Vec<Vec<usize>> = self.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
        rows.sort_by_key(|r| r[0]);
        rows.resize(self.rows.len(), Vec::new());
        LoadingPlan { rows }
    }

    /// Pads with empty rows up to `k`.
    pub fn padded(mut self, k: usize) -> LoadingPlan {
        if self.rows.len() < k {
            self.rows.resize(k, Vec::new());
        }
        self
    }

    /// Violations of the partition / row-count / capacity invariants.
    pub fn violations(&self, n: usize, k: usize, c: usize) -> Vec<String> {
        let mut out = Vec::new();
        if self.rows.len() != k {
            out.push(format!("plan has {} rows, expected {k}", self.rows.len()));
        }
        let mut seen = vec![0usize; n + 1];
        for (r, row) in self.rows.iter().enumerate() {
            if row.len() > c {
                out.push(format!("row {} holds {} items, capacity is {c}", r + 1, row.len()));
            }
            for &v in row {
                if v == 0 || v > n {
                    out.push(format!("row {} holds unknown item {v}", r + 1));
                } else {
                    seen[v] += 1;
                }
            }
        }
        for (v, &cnt) in seen.iter().enumerate().skip(1) {
            match cnt {
                0 => out.push(format!("item {v} is not loaded")),
                1 => {}
                _ => out.push(format!("item {v} is loaded {cnt} times")),
            }
        }
        out
    }

    /// `(row, position)` of every item, indexed by item.
    pub fn slots(&self, n: usize) -> Vec<Option<(usize, usize)>> {
        let mut s = vec![None; n + 1];
        for (r, row) in self.rows.iter().enumerate() {
            for (p, &v) in row.iter().enumerate() {
                if v <= n {
                    s[v] = Some((r, p));
                }
            }
        }
        s
    }
}

impl fmt::Display for LoadingPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.rows.iter().enumerate() {
            let items: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "r{}= {} ; ", r + 1, items.join(" "))?;
        }
        Ok(())
    }
}

/// Disjoint unordered pairs, stored as `(min, max)` in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let mut used = std::collections::HashSet::new();
        for &(a, b) in &pairs {
            if a == b || !used.insert(a) || !used.insert(b) {
                return Err(Error::InvalidMatching(format!("pairs are not disjoint: {pairs:?}")));
            }
        }
        Ok(Matching { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn covers(&self, v: usize) -> bool {
        self.pairs.iter().any(|&(a, b)| a == v || b == v)
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Vertices of `vertices` left uncovered.
    pub fn exposed(&self, vertices: &[usize]) -> Vec<usize> {
        vertices.iter().copied().filter(|&v| !self.covers(v)).collect()
    }

    pub fn is_perfect_on(&self, vertices: &[usize]) -> bool {
        self.covers_only(vertices) && self.exposed(vertices).is_empty()
    }

    pub fn is_near_perfect_on(&self, vertices: &[usize]) -> bool {
        self.covers_only(vertices) && self.exposed(vertices).len() == 1
    }

    fn covers_only(&self, vertices: &[usize]) -> bool {
        self.pairs.iter().all(|&(a, b)| vertices.contains(&a) && vertices.contains(&b))
    }

    /// Weight using `d(min, max)` per pair.
    pub fn weight(&self, d: &DistanceMatrix) -> Value {
        self.pairs.iter().map(|&(a, b)| d.get(a, b)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionTriple {
    pub plan: LoadingPlan,
    pub pickup: Tour,
    pub delivery: Tour,
    pub value: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceMeta {
    pub family: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub k: usize,
    pub c: usize,
    pub dp: DistanceMatrix,
    pub dd: DistanceMatrix,
    pub goal: Goal,
    pub meta: InstanceMeta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub symmetric: bool,
    pub metric: bool,
    pub bivalued: Option<(Value, Value)>,
    pub uncapacitated: bool,
    pub tight: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Plain TSP instance on `{0..size-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TspInstance {
    pub d: DistanceMatrix,
    pub goal: Goal,
}

impl TspInstance {
    pub fn new(d: DistanceMatrix, goal: Goal) -> Self {
        TspInstance { d, goal }
    }

    pub fn size(&self) -> usize {
        self.d.size()
    }
}

impl Instance {
    /// Checks matrix dimensions only; see [`Instance::validate`] for the rest.
    pub fn new(n: usize, k: usize, c: usize, dp: DistanceMatrix, dd: DistanceMatrix, goal: Goal) -> Result<Self> {
        if dp.size() != n + 1 || dd.size() != n + 1 {
            return Err(Error::Dimension(format!(
                "matrices must be {0}x{0} for n = {n}, got {1} and {2}",
                n + 1,
                dp.size(),
                dd.size()
            )));
        }
        Ok(Instance {
            n,
            k,
            c,
            dp,
            dd,
            goal,
            meta: InstanceMeta::default(),
        })
    }

    pub fn with_meta(mut self, meta: InstanceMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n + 1
    }

    pub fn is_symmetric(&self) -> bool {
        self.dp.is_symmetric() && self.dd.is_symmetric()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.n == 0 {
            violations.push("n must be positive".to_string());
        }
        if self.k == 0 || self.c == 0 {
            violations.push("k and c must be positive".to_string());
        }
        if self.k * self.c < self.n {
            violations.push(format!("k*c = {} is below n = {}", self.k * self.c, self.n));
        }
        for (name, d) in [("dP", &self.dp), ("dD", &self.dd)] {
            for i in 0..d.size() {
                if !d.get(i, i).is_zero() {
                    violations.push(format!("{name}({i},{i}) = {} is not zero", d.get(i, i)));
                }
                for j in 0..d.size() {
                    if d.get(i, j).is_negative() {
                        violations.push(format!("{name}({i},{j}) = {} is negative", d.get(i, j)));
                    }
                }
            }
        }
        let bivalued = match (self.dp.bivalued(), self.dd.bivalued()) {
            (Some(a), Some(b)) => merge_two_values(a, b),
            _ => None,
        };
        let ceil = if self.k == 0 { 0 } else { self.n.div_ceil(self.k) };
        ValidationReport {
            violations,
            symmetric: self.is_symmetric(),
            metric: self.dp.is_metric() && self.dd.is_metric(),
            bivalued,
            uncapacitated: self.c >= self.n,
            tight: self.c == ceil,
        }
    }

    pub fn pickup_tsp(&self) -> TspInstance {
        TspInstance::new(self.dp.clone(), self.goal)
    }

    pub fn delivery_tsp(&self) -> TspInstance {
        TspInstance::new(self.dd.clone(), self.goal)
    }

    /// `d_sigma(i,j) = dP(i,j) + dD(j,i)`.
    pub fn sigma(&self) -> TspInstance {
        let d = DistanceMatrix::from_fn(self.n + 1, |i, j| self.dp.get(i, j) + self.dd.get(j, i));
        TspInstance::new(d, self.goal)
    }

    pub fn pair_value(&self, pickup: &Tour, delivery: &Tour) -> Value {
        pickup.cost(&self.dp) + delivery.cost(&self.dd)
    }

    pub fn triple(&self, plan: LoadingPlan, pickup: Tour, delivery: Tour) -> SolutionTriple {
        let value = self.pair_value(&pickup, &delivery);
        SolutionTriple {
            plan,
            pickup,
            delivery,
            value,
        }
    }
}

fn merge_two_values(a: (Value, Value), b: (Value, Value)) -> Option<(Value, Value)> {
    let mut v = vec![a.0, a.1, b.0, b.1];
    v.sort();
    v.dedup();
    match v.len() {
        1 => Some((v[0], v[0])),
        2 => Some((v[0], v[1])),
        _ => None,
    }
}
