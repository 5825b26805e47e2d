//! Construction of the arrowhead-curve graph approximations.
//!
//! Level `m` is a chain of `3^m + 1` vertices joining `A = (0,0)` to
//! `D = (1,0)`, produced by the L-system with axiom `XF` and rules
//! `X → YF+XF+Y`, `Y → XF−YF−X`, drawn with turn angle π/3 and step `2^−m`.
//! The chain stays in the closed upper half-plane and its vertices populate
//! the vertex sets of the Sierpinski gasket over the same base triangle.
//!
//! The turtle runs on an integer lattice (units of `2^−(m+1)` horizontally
//! and `√3 · 2^−(m+1)` vertically), so vertex coordinates are exact up to a
//! single rounding at the end and consecutive distances are `2^−m` to
//! machine precision at every level.

use crate::error::{Error, Result};
use crate::geometry::{Homothecy, Point2, PointSet};

/// Default cap on the refinement level; `build_level_with_limit` can raise it.
pub const DEFAULT_DEPTH_LIMIT: u32 = 12;

/// Corner `A` of the base triangle.
pub const CORNER_A: Point2 = Point2::new(0.0, 0.0);
/// Corner `D` of the base triangle (the chain's far endpoint).
pub const CORNER_D: Point2 = Point2::new(1.0, 0.0);

/// Apex `E = (1/2, √3/2)` of the base triangle.
pub fn corner_apex() -> Point2 {
    Point2::new(0.5, 3f64.sqrt() / 2.0)
}

/// One level of the curve: the ordered chain of vertices.
#[derive(Clone, Debug)]
pub struct GraphLevel {
    level: u32,
    vertices: Vec<Point2>,
    arc_step: f64,
}

impl GraphLevel {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Vertices in chain order, from `A` to `D`.
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    /// Arc-length step between consecutive vertices, `3^−m`.
    pub fn arc_step(&self) -> f64 {
        self.arc_step
    }

    /// Number of chain vertices, `3^m + 1`.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Vertex at the 1-based chain index.
    pub fn vertex(&self, chain_index: usize) -> Result<Point2> {
        self.vertices
            .get(chain_index.wrapping_sub(1))
            .copied()
            .ok_or(Error::IndexOutOfRange {
                what: "chain",
                index: chain_index,
                max: self.vertices.len(),
            })
    }

    /// Normalized arc coordinate of the 1-based chain index: `(i−1)/3^m`.
    pub fn arc_coordinate(&self, chain_index: usize) -> Result<f64> {
        if chain_index == 0 || chain_index > self.vertices.len() {
            return Err(Error::IndexOutOfRange {
                what: "chain",
                index: chain_index,
                max: self.vertices.len(),
            });
        }
        Ok((chain_index - 1) as f64 / 3f64.powi(self.level as i32))
    }
}

/// `3^m + 1`, the number of chain vertices at level `m`.
pub fn vertex_count(m: u32) -> u64 {
    3u64.pow(m) + 1
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symbol {
    X,
    Y,
    Forward,
    Plus,
    Minus,
}

/// Expands the axiom `XF` by `m` parallel rewrites.
fn produce(m: u32) -> Vec<Symbol> {
    use Symbol::*;
    let mut word = vec![X, Forward];
    for _ in 0..m {
        let mut next = Vec::with_capacity(word.len() * 3);
        for s in &word {
            match s {
                X => next.extend_from_slice(&[Y, Forward, Plus, X, Forward, Plus, Y]),
                Y => next.extend_from_slice(&[X, Forward, Minus, Y, Forward, Minus, X]),
                other => next.push(*other),
            }
        }
        word = next;
    }
    word
}

/// Builds level `m` under the default depth limit.
pub fn build_level(m: u32) -> Result<GraphLevel> {
    build_level_with_limit(m, DEFAULT_DEPTH_LIMIT)
}

/// Builds level `m`, allowing a caller-chosen depth limit.
pub fn build_level_with_limit(m: u32, limit: u32) -> Result<GraphLevel> {
    if m == 0 {
        return Err(Error::IndexOutOfRange {
            what: "level",
            index: 0,
            max: limit as usize,
        });
    }
    if m > limit {
        return Err(Error::DepthLimitExceeded {
            requested: m,
            limit,
        });
    }

    // Integer turtle: heading is a multiple of 60°, tracked mod 6; positions
    // live on the lattice (a · 2^−(m+1), b · √3 · 2^−(m+1)).  One forward
    // step moves by one of the six unit vectors below, each of squared
    // length 4 in lattice units, i.e. exactly 2^−m in the plane.
    const DIRS: [(i64, i64); 6] = [(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)];

    let word = produce(m);
    // Odd levels start at 60°, even levels parallel to the base; the turn
    // tokens rotate clockwise for `+` and counter-clockwise for `−`.  This
    // is the unique convention that runs the chain from A to D through the
    // upper half-plane.
    let mut heading: i64 = if m % 2 == 1 { 1 } else { 0 };
    let mut pos: (i64, i64) = (0, 0);
    let mut lattice = Vec::with_capacity(3usize.pow(m) + 1);
    lattice.push(pos);
    for s in &word {
        match s {
            Symbol::Forward => {
                let d = DIRS[heading.rem_euclid(6) as usize];
                pos = (pos.0 + d.0, pos.1 + d.1);
                lattice.push(pos);
            }
            Symbol::Plus => heading -= 1,
            Symbol::Minus => heading += 1,
            _ => {}
        }
    }

    let unit = 2f64.powi(-(m as i32) - 1);
    let y_unit = 3f64.sqrt() * unit;
    let vertices: Vec<Point2> = lattice
        .iter()
        .map(|&(a, b)| Point2::new(a as f64 * unit, b as f64 * y_unit))
        .collect();

    debug_assert_eq!(vertices.len(), 3usize.pow(m) + 1);
    Ok(GraphLevel {
        level: m,
        vertices,
        arc_step: 3f64.powi(-(m as i32)),
    })
}

/// Chain indices (1-based) of the four level-1 vertices `A`, `B`, `C`, `D`
/// inside level `m`.
pub fn level_one_chain_indices(m: u32) -> [usize; 4] {
    let seg = 3usize.pow(m - 1);
    [1, seg + 1, 2 * seg + 1, 3 * seg + 1]
}

/// Vertex set of the level-`m` Sierpinski gasket over the base triangle
/// `A, D, E`: the union of the images of the corner set under all length-`m`
/// words in the three ratio-1/2 homothecies centred at the corners.
///
/// Points are deduplicated exactly (the construction is run on an integer
/// lattice) and returned sorted by `(x, y)`.  `m = 0` yields the corners.
pub fn gasket_vertices(m: u32) -> Vec<Point2> {
    let scale: i64 = 1 << (m + 1);
    let corners = [(0i64, 0i64), (scale, 0), (scale / 2, scale / 2)];
    let mut points: std::collections::HashSet<(i64, i64)> = corners.iter().copied().collect();
    for _ in 0..m {
        let mut next = std::collections::HashSet::with_capacity(points.len() * 3);
        for &(a, b) in &points {
            for &(ca, cb) in &corners {
                // Every coordinate stays even until the last halving, so the
                // division below is exact.
                next.insert(((a + ca) / 2, (b + cb) / 2));
            }
        }
        points = next;
    }
    let mut lattice: Vec<(i64, i64)> = points.into_iter().collect();
    lattice.sort_unstable();
    let s = scale as f64;
    let y_unit = 3f64.sqrt() / s;
    lattice
        .into_iter()
        .map(|(a, b)| Point2::new(a as f64 / s, b as f64 * y_unit))
        .collect()
}

/// Outcome of the structural subset checks at one level.
#[derive(Clone, Debug)]
pub struct SubsetReport {
    /// Every vertex of level `m` reappears in level `m+1` (tolerance 1e−9).
    pub nested_in_next: bool,
    /// Witness vertex if nesting fails.
    pub nesting_witness: Option<Point2>,
    /// The chain vertex set is a strict subset of the gasket vertex set of
    /// the same level.
    pub strict_subset_of_gasket: bool,
    /// Witness vertex if gasket containment fails.
    pub gasket_witness: Option<Point2>,
    /// Cardinalities `(|V_m|, |gasket_m|)`.
    pub cardinalities: (usize, usize),
}

/// Runs the nesting and gasket-containment checks for level `m`.
pub fn subset_checks(m: u32) -> Result<SubsetReport> {
    const TOL: f64 = 1e-9;
    let this = build_level(m)?;
    let next = build_level(m + 1)?;

    let mut next_set = PointSet::with_tolerance(TOL);
    for &p in next.vertices() {
        next_set.insert(p);
    }
    let mut nesting_witness = None;
    for &p in this.vertices() {
        if !next_set.contains(&p) {
            nesting_witness = Some(p);
            break;
        }
    }

    let gasket = gasket_vertices(m);
    let mut gasket_set = PointSet::with_tolerance(TOL);
    for &p in &gasket {
        gasket_set.insert(p);
    }
    let mut gasket_witness = None;
    for &p in this.vertices() {
        if !gasket_set.contains(&p) {
            gasket_witness = Some(p);
            break;
        }
    }
    let strict = gasket_witness.is_none() && this.vertex_count() < gasket.len();

    Ok(SubsetReport {
        nested_in_next: nesting_witness.is_none(),
        nesting_witness,
        strict_subset_of_gasket: strict,
        gasket_witness,
        cardinalities: (this.vertex_count(), gasket.len()),
    })
}

/// The three ratio-1/2 homothecies centred at the base-triangle corners.
pub fn gasket_maps() -> [Homothecy; 3] {
    [
        Homothecy {
            center: CORNER_A,
            ratio: 0.5,
        },
        Homothecy {
            center: CORNER_D,
            ratio: 0.5,
        },
        Homothecy {
            center: corner_apex(),
            ratio: 0.5,
        },
    ]
}
