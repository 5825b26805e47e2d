//! Self-similar measures on the curve and the induced vertex quadrature.
//!
//! A measure model assigns branch weights `(μ1, μ2, μ3)` summing to one.
//! The measure of a level-`m` cell is the product of the weights along its
//! ternary address; with the default uniform weights every cell carries
//! `3^(1−m)`.  Integration averages the four corner values of each cell,
//! which makes constants integrate to exactly one, and the integral of a
//! vertex spline (the hat function of one chain vertex) is `μ(cell)/4` for
//! a vertex interior to a cell and `(μ(left) + μ(right))/8` for a vertex
//! shared by two cells.

use crate::error::{Error, Result};
use crate::function::VertexFunction;

/// How the integral of a hat function at a shared vertex combines the two
/// adjacent cell measures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SharedVertexRule {
    /// `(μ(left) + μ(right)) / 8` — the cell-averaged quadrature weight.
    #[default]
    Halved,
    /// `(μ(left) + μ(right)) / 4` — adds the two one-sided weights instead.
    Additive,
}

/// Branch weights of a self-similar measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureModel {
    weights: [f64; 3],
    shared_rule: SharedVertexRule,
}

impl Default for MeasureModel {
    fn default() -> Self {
        MeasureModel {
            weights: [1.0 / 3.0; 3],
            shared_rule: SharedVertexRule::Halved,
        }
    }
}

impl MeasureModel {
    /// Validates and wraps branch weights; they must be positive and sum to
    /// one (up to 1e−12).
    pub fn new(w1: f64, w2: f64, w3: f64) -> Result<Self> {
        if !(w1 > 0.0 && w2 > 0.0 && w3 > 0.0) {
            return Err(Error::InvalidWeights {
                w1,
                w2,
                w3,
                reason: "weights must be positive",
            });
        }
        if ((w1 + w2 + w3) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights {
                w1,
                w2,
                w3,
                reason: "weights must sum to 1",
            });
        }
        Ok(MeasureModel {
            weights: [w1, w2, w3],
            shared_rule: SharedVertexRule::Halved,
        })
    }

    pub fn with_shared_rule(mut self, rule: SharedVertexRule) -> Self {
        self.shared_rule = rule;
        self
    }

    pub fn weights(&self) -> [f64; 3] {
        self.weights
    }

    pub fn shared_rule(&self) -> SharedVertexRule {
        self.shared_rule
    }

    /// Measure of cell `j` (1-based) at level `m`: the product of branch
    /// weights along the base-3 digits of `j − 1`, most significant first.
    pub fn cell_measure(&self, m: u32, j: usize) -> Result<f64> {
        let count = 3usize.pow(m - 1);
        if j == 0 || j > count {
            return Err(Error::IndexOutOfRange {
                what: "trapeze",
                index: j,
                max: count,
            });
        }
        let mut product = 1.0;
        let mut rest = j - 1;
        for k in (0..m - 1).rev() {
            let digit = rest / 3usize.pow(k);
            rest %= 3usize.pow(k);
            product *= self.weights[digit];
        }
        Ok(product)
    }
}

/// Integral of `u` against the model measure: cells contribute their
/// measure times the average of their four corner values.
pub fn integrate(u: &VertexFunction, model: &MeasureModel) -> Result<f64> {
    let m = u.level();
    let values = u.values();
    let count = 3usize.pow(m - 1);
    let mut total = 0.0;
    for j in 1..=count {
        let base = 3 * (j - 1);
        let corner_sum = values[base] + values[base + 1] + values[base + 2] + values[base + 3];
        total += model.cell_measure(m, j)? * 0.25 * corner_sum;
    }
    Ok(total)
}

/// Integral of the hat function centred at an interior chain vertex.
///
/// Endpoints are rejected: their hats are not cell-interior objects of the
/// decomposition.  Under the default model every interior vertex gets the
/// uniform weight `3^(1−m)/4`.
pub fn spline_integral(m: u32, chain_index: usize, model: &MeasureModel) -> Result<f64> {
    let n = 3usize.pow(m) + 1;
    if chain_index == 0 || chain_index > n {
        return Err(Error::IndexOutOfRange {
            what: "chain",
            index: chain_index,
            max: n,
        });
    }
    if chain_index == 1 || chain_index == n {
        return Err(Error::EndpointVertex { index: chain_index });
    }
    let p = chain_index - 1;
    if p.is_multiple_of(3) {
        // Junction vertex shared by cells p/3 and p/3 + 1.
        let left = model.cell_measure(m, p / 3)?;
        let right = model.cell_measure(m, p / 3 + 1)?;
        Ok(match model.shared_rule() {
            SharedVertexRule::Halved => 0.125 * (left + right),
            SharedVertexRule::Additive => 0.25 * (left + right),
        })
    } else {
        Ok(0.25 * model.cell_measure(m, p / 3 + 1)?)
    }
}
