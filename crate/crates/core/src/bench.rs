//! Seeded benchmark grid: every (instance, algorithm) cell with its ratios.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{gen_random, Profile};
use crate::model::{Goal, Instance, Value};
use crate::oracle::{exact_extremes_capped, ratio_report, Extremes};
use crate::solve::{run, Algo, SolveOptions};

pub const COLUMNS: [&str; 14] = [
    "instance_id",
    "family",
    "n",
    "k",
    "c",
    "goal",
    "algo",
    "value",
    "opt",
    "wor",
    "std_ratio",
    "diff_ratio",
    "wall_ms",
    "seed",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub profile: Profile,
    pub sizes: Vec<usize>,
    pub k: usize,
    /// Extra room per row above `ceil(n/k)`.
    pub slack: usize,
    pub goal: Goal,
    pub count: u64,
    pub seed: u64,
    pub algos: Vec<Algo>,
    pub opts: SolveOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance_id: String,
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub c: usize,
    pub goal: Goal,
    pub algo: Algo,
    pub value: Value,
    pub opt: Option<Value>,
    pub wor: Option<Value>,
    pub wall_ms: f64,
    pub seed: Option<u64>,
}

impl BenchRow {
    fn record(&self) -> Vec<String> {
        let na = || "NA".to_string();
        let ratios = match (self.opt, self.wor) {
            (Some(o), Some(w)) => Some(ratio_report(self.value, o, w)),
            _ => None,
        };
        let dec = |v: Value| format!("{:.6}", *v.numer() as f64 / *v.denom() as f64);
        vec![
            self.instance_id.clone(),
            self.family.clone(),
            self.n.to_string(),
            self.k.to_string(),
            self.c.to_string(),
            self.goal.to_string(),
            self.algo.to_string(),
            self.value.to_string(),
            self.opt.map_or_else(na, |v| v.to_string()),
            self.wor.map_or_else(na, |v| v.to_string()),
            ratios.and_then(|r| r.standard).map_or_else(na, dec),
            ratios.map_or_else(na, |r| dec(r.differential)),
            format!("{:.3}", self.wall_ms),
            self.seed.map_or_else(na, |s| s.to_string()),
        ]
    }
}

/// Instances of the grid, in (size, seed) order.
pub fn instances(cfg: &BenchConfig) -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    for &n in &cfg.sizes {
        let c = n.div_ceil(cfg.k) + cfg.slack;
        for s in 0..cfg.count {
            let seed = cfg.seed + s;
            let inst = gen_random(cfg.profile, n, cfg.k, c, cfg.goal, seed)?;
            out.push((format!("{}-n{n}-s{seed}", cfg.profile), inst));
        }
    }
    Ok(out)
}

/// Runs every cell; cells an algorithm does not apply to are skipped.
pub fn run_grid(items: &[(String, Instance)], algos: &[Algo], opts: &SolveOptions) -> Result<Vec<BenchRow>> {
    let extremes: Vec<Option<Extremes>> = items
        .par_iter()
        .map(|(_, inst)| match exact_extremes_capped(inst, opts.oracle_cap) {
            Ok(e) => Ok(Some(e)),
            Err(Error::CapExceeded { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let cells: Vec<(usize, Algo)> = (0..items.len()).flat_map(|i| algos.iter().map(move |&a| (i, a))).collect();
    let rows: Vec<Option<BenchRow>> = cells
        .par_iter()
        .map(|&(i, algo)| {
            let (id, inst) = &items[i];
            let t = Instant::now();
            let s = match run(inst, algo, opts) {
                Ok(s) => s,
                Err(e @ Error::Internal(_)) => return Err(e),
                Err(e) => {
                    log::warn!("{id}: {algo} skipped: {e}");
                    return Ok(None);
                }
            };
            let wall_ms = t.elapsed().as_secs_f64() * 1e3;
            let ext = extremes[i].as_ref();
            Ok(Some(BenchRow {
                instance_id: id.clone(),
                family: inst.meta.family.clone().unwrap_or_default(),
                n: inst.n,
                k: inst.k,
                c: inst.c,
                goal: inst.goal,
                algo,
                value: s.value,
                opt: ext.map(|e| e.opt.value),
                wor: ext.map(|e| e.wor.value),
                wall_ms,
                seed: inst.meta.seed,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let io = |e: csv::Error| Error::Precondition(format!("cannot write CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record(r.record()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Precondition(format!("cannot write CSV: {e}")))
}
