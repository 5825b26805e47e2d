//! Decomposition of a curve level into trapezoidal cells.
//!
//! At level `m` the chain splits into `3^(m−1)` cells; cell `j` (1-based)
//! owns the four chain vertices `3(j−1)+1 .. 3(j−1)+4`.  Each cell is a
//! convex isosceles trapezoid whose long side joins the first and last of
//! those vertices, with `|long| = 2 |short|` and all three remaining sides
//! of length `2^−m`.  Consecutive cells share exactly one chain vertex.

use crate::curve::GraphLevel;
use crate::error::{Error, Result};
use crate::geometry::{shoelace_area, Point2};

/// One trapezoidal cell of a level decomposition.
#[derive(Clone, Debug)]
pub struct Trapeze {
    level: u32,
    index: usize,
    chain_indices: [usize; 4],
    vertices: [Point2; 4],
    area: f64,
}

impl Trapeze {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// 1-based cell index within its level.
    pub fn index(&self) -> usize {
        self.index
    }

    /// 1-based chain indices of the four corners, in chain order.
    pub fn chain_indices(&self) -> [usize; 4] {
        self.chain_indices
    }

    pub fn vertices(&self) -> [Point2; 4] {
        self.vertices
    }

    /// Cached shoelace area.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Recomputes the shoelace area of the 4-gon, rejecting degenerate cells.
    pub fn shoelace(&self) -> Result<f64> {
        let a = shoelace_area(&self.vertices);
        if a < 1e-300 {
            return Err(Error::GeometryInvariant {
                detail: format!("degenerate trapeze {} at level {}", self.index, self.level),
            });
        }
        Ok(a)
    }
}

/// All cells of one level, in chain order.
#[derive(Clone, Debug)]
pub struct TrapezeSet {
    level: u32,
    cells: Vec<Trapeze>,
}

impl TrapezeSet {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn cells(&self) -> &[Trapeze] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell by 1-based index.
    pub fn cell(&self, j: usize) -> Result<&Trapeze> {
        self.cells
            .get(j.wrapping_sub(1))
            .ok_or(Error::IndexOutOfRange {
                what: "trapeze",
                index: j,
                max: self.cells.len(),
            })
    }

    /// Sum of all cell areas.
    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|t| t.area).sum()
    }
}

/// Closed-form area of one level-`m` cell: `(3√3/16) · 4^(1−m)`.
pub fn cell_area(m: u32) -> f64 {
    3.0 * 3f64.sqrt() / 16.0 * 4f64.powi(1 - m as i32)
}

/// Splits a level into its trapezoidal cells, validating every geometric
/// invariant (parallel sides, side ratios, equal legs, convexity, area).
pub fn trapeze_decomposition(level: &GraphLevel) -> Result<TrapezeSet> {
    let m = level.level();
    let verts = level.vertices();
    let count = 3usize.pow(m - 1);
    let step = 2f64.powi(-(m as i32));
    let expected_area = cell_area(m);
    let tol = 1e-12;

    let mut cells = Vec::with_capacity(count);
    for j in 1..=count {
        let base = 3 * (j - 1);
        let chain_indices = [base + 1, base + 2, base + 3, base + 4];
        let v = [
            verts[base],
            verts[base + 1],
            verts[base + 2],
            verts[base + 3],
        ];
        let (v1, v2, v3, v4) = (v[0], v[1], v[2], v[3]);

        let long = (v4.x - v1.x, v4.y - v1.y);
        let short = (v3.x - v2.x, v3.y - v2.y);
        let cross = long.0 * short.1 - long.1 * short.0;
        if cross.abs() > tol {
            return Err(Error::GeometryInvariant {
                detail: format!("cell {j} level {m}: sides (v1,v4) and (v2,v3) not parallel"),
            });
        }

        let long_len = v1.dist(&v4);
        let short_len = v2.dist(&v3);
        let leg_a = v1.dist(&v2);
        let leg_b = v3.dist(&v4);
        if (long_len - 2.0 * short_len).abs() > tol
            || (leg_a - short_len).abs() > tol
            || (leg_b - short_len).abs() > tol
            || (short_len - step).abs() > tol
        {
            return Err(Error::GeometryInvariant {
                detail: format!("cell {j} level {m}: side lengths violate the trapezoid shape"),
            });
        }

        // Convexity: the four turn cross-products share a sign.
        let mut signs = [0.0; 4];
        for k in 0..4 {
            let a = v[k];
            let b = v[(k + 1) % 4];
            let c = v[(k + 2) % 4];
            signs[k] = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        }
        if !(signs.iter().all(|&s| s > 0.0) || signs.iter().all(|&s| s < 0.0)) {
            return Err(Error::GeometryInvariant {
                detail: format!("cell {j} level {m}: polygon is not convex"),
            });
        }

        let area = shoelace_area(&v);
        if (area - expected_area).abs() > tol {
            return Err(Error::GeometryInvariant {
                detail: format!("cell {j} level {m}: area {area} differs from {expected_area}"),
            });
        }

        cells.push(Trapeze {
            level: m,
            index: j,
            chain_indices,
            vertices: v,
            area,
        });
    }

    Ok(TrapezeSet { level: m, cells })
}
