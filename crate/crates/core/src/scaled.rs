//! Integer image of a rational matrix for the inner loops of the exact solvers.
//!
//! Every entry is multiplied by the lcm of all denominators, so sums of
//! scaled entries compare exactly like sums of the original rationals.

use num_integer::Integer;

use crate::model::{DistanceMatrix, Goal, Value};

#[derive(Debug, Clone)]
pub struct ScaledMatrix {
    size: usize,
    w: Vec<i128>,
    scale: i128,
}

impl ScaledMatrix {
    pub fn new(d: &DistanceMatrix) -> Self {
        let scale = d.entries().iter().fold(1i128, |acc, v| acc.lcm(v.denom()));
        let w = d.entries().iter().map(|v| v.numer() * (scale / v.denom())).collect();
        ScaledMatrix { size: d.size(), w, scale }
    }

    /// Weights negated for maximisation, so every caller minimises.
    pub fn oriented(d: &DistanceMatrix, goal: Goal) -> Self {
        let mut m = Self::new(d);
        if goal == Goal::Max {
            for x in &mut m.w {
                *x = -*x;
            }
            m.scale = -m.scale;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.w[i * self.size + j]
    }

    /// Back to a rational.
    pub fn value(&self, total: i128) -> Value {
        Value::new(total, self.scale)
    }
}
