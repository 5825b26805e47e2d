//! Functions on the vertex set of one curve level.

use crate::error::{Error, Result};

/// Real-valued function on the `3^m + 1` chain vertices of level `m`,
/// stored in chain order.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction {
    level: u32,
    values: Vec<f64>,
}

impl VertexFunction {
    /// Wraps a value vector, validating its length against the level.
    pub fn new(level: u32, values: Vec<f64>) -> Result<Self> {
        let expected = 3usize.pow(level) + 1;
        if values.len() != expected {
            return Err(Error::WrongValueCount {
                level,
                expected,
                got: values.len(),
            });
        }
        Ok(VertexFunction { level, values })
    }

    /// Constant function.
    pub fn constant(level: u32, value: f64) -> Self {
        VertexFunction {
            level,
            values: vec![value; 3usize.pow(level) + 1],
        }
    }

    /// Samples `f` at the arc coordinates `(i−1)/3^m` of every chain vertex.
    pub fn from_arc_fn(level: u32, f: impl Fn(f64) -> f64) -> Self {
        let n = 3usize.pow(level) + 1;
        let denom = 3f64.powi(level as i32);
        let values = (0..n).map(|i| f(i as f64 / denom)).collect();
        VertexFunction { level, values }
    }

    /// Kronecker delta at the given 1-based chain index.
    pub fn kronecker(level: u32, chain_index: usize) -> Result<Self> {
        let n = 3usize.pow(level) + 1;
        if chain_index == 0 || chain_index > n {
            return Err(Error::IndexOutOfRange {
                what: "chain",
                index: chain_index,
                max: n,
            });
        }
        let mut values = vec![0.0; n];
        values[chain_index - 1] = 1.0;
        Ok(VertexFunction { level, values })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Value at the 1-based chain index.
    pub fn value(&self, chain_index: usize) -> Result<f64> {
        self.values
            .get(chain_index.wrapping_sub(1))
            .copied()
            .ok_or(Error::IndexOutOfRange {
                what: "chain",
                index: chain_index,
                max: self.values.len(),
            })
    }

    /// Checks that `other` lives on the same level.
    pub fn same_level(&self, other: &VertexFunction) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                expected: self.level,
                got: other.level,
            });
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}
