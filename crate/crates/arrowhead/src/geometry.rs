//! Small planar-geometry toolkit: points, homothecies and a tolerance-aware
//! point set used for nesting and subset checks.

/// A point of the Euclidean plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Euclidean distance to another point.
    pub fn dist(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A contracting similarity `p ↦ center + ratio · (p − center)` (no rotation).
#[derive(Clone, Copy, Debug)]
pub struct Homothecy {
    pub center: Point2,
    pub ratio: f64,
}

impl Homothecy {
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2 {
            x: self.center.x + self.ratio * (p.x - self.center.x),
            y: self.center.y + self.ratio * (p.y - self.center.y),
        }
    }
}

/// Shoelace area of a simple polygon given by its vertices in order.
pub fn shoelace_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut twice = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    0.5 * twice.abs()
}

/// A set of points with membership queries up to a fixed Euclidean tolerance.
///
/// Points are bucketed on a grid a few tolerances wide; lookups scan the
/// 3×3 neighbourhood of the query's bucket, so two representations of the
/// same point can never be separated by a bucket boundary.
pub struct PointSet {
    tol: f64,
    cell: f64,
    buckets: std::collections::HashMap<(i64, i64), Vec<Point2>>,
    len: usize,
}

impl PointSet {
    pub fn with_tolerance(tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        PointSet {
            tol,
            cell: tol * 4.0,
            buckets: std::collections::HashMap::new(),
            len: 0,
        }
    }

    fn key(&self, p: &Point2) -> (i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
        )
    }

    /// Inserts `p` unless an equal point (within tolerance) is present.
    /// Returns `true` if the point was new.
    pub fn insert(&mut self, p: Point2) -> bool {
        if self.contains(&p) {
            return false;
        }
        self.buckets.entry(self.key(&p)).or_default().push(p);
        self.len += 1;
        true
    }

    pub fn contains(&self, p: &Point2) -> bool {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if bucket.iter().any(|q| q.dist(p) <= self.tol) {
                        return true;
                    }
                }
            }
        }
        false
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn shoelace_unit_square() {
        let sq = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        assert_abs_diff_eq!(shoelace_area(&sq), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn shoelace_orientation_independent() {
        let tri = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        ];
        let rev: Vec<_> = tri.iter().rev().copied().collect();
        assert_abs_diff_eq!(shoelace_area(&tri), 3f64.sqrt() / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(shoelace_area(&tri), shoelace_area(&rev), epsilon = 1e-16);
    }

    #[test]
    fn homothecy_contracts_toward_center() {
        let h = Homothecy {
            center: Point2::new(1.0, 0.0),
            ratio: 0.5,
        };
        let img = h.apply(Point2::new(0.0, 0.0));
        assert_abs_diff_eq!(img.x, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(img.y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn point_set_dedups_within_tolerance() {
        let mut set = PointSet::with_tolerance(1e-9);
        assert!(set.insert(Point2::new(0.25, 0.25)));
        assert!(!set.insert(Point2::new(0.25 + 1e-10, 0.25 - 1e-10)));
        assert!(set.insert(Point2::new(0.25 + 1e-6, 0.25)));
        assert_eq!(set.len(), 2);
        assert!(set.contains(&Point2::new(0.25, 0.25 + 9e-10)));
        assert!(!set.contains(&Point2::new(0.3, 0.25)));
    }

    #[test]
    fn point_set_catches_straddled_bucket_boundaries() {
        // Two near-equal points on opposite sides of a bucket boundary must
        // still be identified.
        let mut set = PointSet::with_tolerance(1e-9);
        let cell = 4e-9;
        let boundary = 10.0 * cell;
        set.insert(Point2::new(boundary - 1e-10, 0.0));
        assert!(set.contains(&Point2::new(boundary + 1e-10, 0.0)));
    }
}
