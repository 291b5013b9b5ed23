//! One entry point over every solver, as used by the CLI and the benchmark.

use std::fmt;
use std::str::FromStr;

use crate::apx_two::apx_2dtspms;
use crate::diff_even::dapx_even;
use crate::diff_odd::dapx_odd;
use crate::error::{Error, Result};
use crate::model::{Instance, SolutionTriple};
use crate::oracle::exact_extremes_capped;
use crate::reduction::{reduce_sigma, reduce_two_tours};
use crate::tsp::TspSolver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    /// Matching plan, two rows, symmetric distances.
    Apx2,
    /// Matching plan and its swapped variant, even vertex count.
    Dapx2,
    /// Per-vertex matching plans, odd vertex count.
    DapxOdd,
    ReduceTwo,
    ReduceSigma,
    /// Brute-force optimum, bounded by the oracle cap.
    Exact,
}

impl Algo {
    pub const ALL: [Algo; 6] = [
        Algo::Apx2,
        Algo::Dapx2,
        Algo::DapxOdd,
        Algo::ReduceTwo,
        Algo::ReduceSigma,
        Algo::Exact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Apx2 => "apx2",
            Algo::Dapx2 => "dapx2",
            Algo::DapxOdd => "dapx-odd",
            Algo::ReduceTwo => "reduce-two",
            Algo::ReduceSigma => "reduce-sigma",
            Algo::Exact => "exact",
        }
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown algorithm {s:?}")))
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub tsp: TspSolver,
    pub oracle_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tsp: TspSolver::new(crate::tsp::TspMethod::Exact),
            oracle_cap: crate::oracle::DEFAULT_ORACLE_CAP,
        }
    }
}

pub fn run(inst: &Instance, algo: Algo, opts: &SolveOptions) -> Result<SolutionTriple> {
    match algo {
        Algo::Apx2 => apx_2dtspms(inst),
        Algo::Dapx2 => dapx_even(inst),
        Algo::DapxOdd => dapx_odd(inst),
        Algo::ReduceTwo => reduce_two_tours(inst, &opts.tsp),
        Algo::ReduceSigma => reduce_sigma(inst, &opts.tsp),
        Algo::Exact => Ok(exact_extremes_capped(inst, opts.oracle_cap)?.opt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::verify_solution;
    use crate::generators::{gen_random, Profile};
    use crate::model::Goal;

    #[test]
    fn names_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.as_str().parse::<Algo>().unwrap(), a);
        }
    }

    #[test]
    fn every_algo_verifies() {
        for n in [4, 5] {
            let inst = gen_random(Profile::Symmetric, n, 2, n.div_ceil(2) + 1, Goal::Min, 3).unwrap();
            for a in Algo::ALL {
                let r = run(&inst, a, &SolveOptions::default());
                let wrong_parity = (a == Algo::Dapx2 && n % 2 == 0) || (a == Algo::DapxOdd && n % 2 == 1);
                if wrong_parity {
                    assert!(r.is_err());
                } else {
                    assert!(verify_solution(&inst, &r.unwrap()).is_ok(), "{a}");
                }
            }
        }
    }
}
