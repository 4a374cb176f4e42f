// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{GeometryError, Point, EPS};

/// Axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn new(min: Point, max: Point) -> Result<Self, GeometryError> {
        if min.dim() != max.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: min.dim(),
                found: max.dim(),
            });
        }
        if (0..min.dim()).any(|i| min.get(i) >= max.get(i)) {
            return Err(GeometryError::InvalidShape(
                "box min must be below max on every axis",
            ));
        }
        Ok(Self { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.dim()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && (0..self.dim())
                .all(|i| p.get(i) >= self.min.get(i) - EPS && p.get(i) <= self.max.get(i) + EPS)
    }

    pub fn diagonal(&self) -> f64 {
        self.min.distance(&self.max)
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.max.get(i) - self.min.get(i))
            .product()
    }

    /// Corners of a 2D box in counter-clockwise order.
    fn corners_2d(&self) -> Vec<Point> {
        vec![
            self.min,
            Point::xy(self.max.x(), self.min.y()),
            self.max,
            Point::xy(self.min.x(), self.max.y()),
        ]
    }
}

/// Obstacle geometry as it appears in scenario files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Convex polygon, 2D only; either winding accepted.
    Polygon(Vec<Point>),
    /// Axis-aligned box, any dimension.
    Box(Aabb),
}

/// `normal · x < offset` on the open interior side.
#[derive(Clone, Copy, Debug, PartialEq)]
struct HalfSpace {
    normal: Point,
    offset: f64,
}

/// A convex obstacle stored as the intersection of open half-spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Shape", into = "Shape")]
pub struct Obstacle {
    shape: Shape,
    halfspaces: Vec<HalfSpace>,
}

impl Obstacle {
    pub fn new(shape: Shape) -> Result<Self, GeometryError> {
        let halfspaces = match &shape {
            Shape::Box(b) => {
                let d = b.dim();
                let mut hs = Vec::with_capacity(2 * d);
                for i in 0..d {
                    let mut coords = vec![0.0; d];
                    coords[i] = 1.0;
                    let e = Point::new(&coords)?;
                    hs.push(HalfSpace {
                        normal: e,
                        offset: b.max.get(i),
                    });
                    hs.push(HalfSpace {
                        normal: e.scale(-1.0),
                        offset: -b.min.get(i),
                    });
                }
                hs
            }
            Shape::Polygon(vertices) => polygon_halfspaces(vertices)?,
        };
        let shape = match shape {
            Shape::Polygon(v) => Shape::Polygon(ccw(v)),
            s => s,
        };
        Ok(Self { shape, halfspaces })
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        Self::new(Shape::Polygon(vertices))
    }

    pub fn aabb(min: Point, max: Point) -> Result<Self, GeometryError> {
        Self::new(Shape::Box(Aabb::new(min, max)?))
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.halfspaces[0].normal.dim()
    }

    /// Polygon vertices (CCW) for 2D obstacles, box corners for 2D boxes.
    pub fn vertices_2d(&self) -> Option<Vec<Point>> {
        match &self.shape {
            Shape::Polygon(v) => Some(v.clone()),
            Shape::Box(b) if b.dim() == 2 => Some(b.corners_2d()),
            Shape::Box(_) => None,
        }
    }

    fn bounding_box(&self) -> (Point, Point) {
        match &self.shape {
            Shape::Box(b) => (b.min, b.max),
            Shape::Polygon(v) => {
                let (mut lo, mut hi) = (v[0], v[0]);
                for p in v {
                    lo = Point::xy(lo.x().min(p.x()), lo.y().min(p.y()));
                    hi = Point::xy(hi.x().max(p.x()), hi.y().max(p.y()));
                }
                (lo, hi)
            }
        }
    }

    /// True when `p` lies in the interior, deeper than the tolerance.
    pub fn contains_strict(&self, p: &Point) -> bool {
        self.halfspaces
            .iter()
            .all(|h| h.normal.dot(p) < h.offset - EPS)
    }

    /// True when the open segment `(a, b)` enters the interior.
    ///
    /// Touching the boundary (vertex grazes, sliding along an edge) is not a hit.
    pub fn segment_hits(&self, a: &Point, b: &Point) -> bool {
        let d = b.sub(a);
        if d.norm() == 0.0 {
            return self.contains_strict(a);
        }
        let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
        for h in &self.halfspaces {
            let num = h.offset - EPS - h.normal.dot(a);
            let denom = h.normal.dot(&d);
            if denom.abs() < 1e-15 {
                if num <= 0.0 {
                    return false;
                }
                continue;
            }
            let t = num / denom;
            if denom > 0.0 {
                t1 = t1.min(t);
            } else {
                t0 = t0.max(t);
            }
            if t0 >= t1 {
                return false;
            }
        }
        t0 < t1
    }
}

impl TryFrom<Shape> for Obstacle {
    type Error = GeometryError;

    fn try_from(shape: Shape) -> Result<Self, Self::Error> {
        Obstacle::new(shape)
    }
}

impl From<Obstacle> for Shape {
    fn from(o: Obstacle) -> Self {
        o.shape
    }
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a.x() * b.y() - b.x() * a.y()
        })
        .sum::<f64>()
        / 2.0
}

fn ccw(mut v: Vec<Point>) -> Vec<Point> {
    if signed_area(&v) < 0.0 {
        v.reverse();
    }
    v
}

fn polygon_halfspaces(vertices: &[Point]) -> Result<Vec<HalfSpace>, GeometryError> {
    if vertices.len() < 3 {
        return Err(GeometryError::InvalidShape(
            "polygon needs at least three vertices",
        ));
    }
    if vertices.iter().any(|p| p.dim() != 2) {
        return Err(GeometryError::InvalidShape("polygon obstacles are 2D only"));
    }
    if signed_area(vertices).abs() <= EPS {
        return Err(GeometryError::InvalidShape("polygon has zero area"));
    }
    let v = ccw(vertices.to_vec());
    let n = v.len();
    let mut hs = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
        let e1 = b.sub(&a);
        let e2 = c.sub(&b);
        if e1.x() * e2.y() - e1.y() * e2.x() < -EPS {
            return Err(GeometryError::InvalidShape("polygon is not convex"));
        }
        let len = e1.norm();
        if len <= EPS {
            return Err(GeometryError::InvalidShape("polygon has a repeated vertex"));
        }
        let normal = Point::xy(e1.y() / len, -e1.x() / len);
        hs.push(HalfSpace {
            normal,
            offset: normal.dot(&a),
        });
    }
    Ok(hs)
}

/// A bounded workspace with convex obstacles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWorld")]
pub struct World {
    bounds: Aabb,
    obstacles: Vec<Obstacle>,
}

#[derive(Deserialize)]
struct RawWorld {
    bounds: Aabb,
    #[serde(default)]
    obstacles: Vec<Obstacle>,
}

impl TryFrom<RawWorld> for World {
    type Error = GeometryError;

    fn try_from(raw: RawWorld) -> Result<Self, Self::Error> {
        World::new(raw.bounds, raw.obstacles)
    }
}

impl World {
    pub fn new(bounds: Aabb, obstacles: Vec<Obstacle>) -> Result<Self, GeometryError> {
        for o in &obstacles {
            if o.dim() != bounds.dim() {
                return Err(GeometryError::DimensionMismatch {
                    expected: bounds.dim(),
                    found: o.dim(),
                });
            }
            let (lo, hi) = o.bounding_box();
            if !bounds.contains(&lo) || !bounds.contains(&hi) {
                return Err(GeometryError::ObstacleOutOfBounds);
            }
        }
        Ok(Self { bounds, obstacles })
    }

    pub fn empty(bounds: Aabb) -> Self {
        Self {
            bounds,
            obstacles: Vec::new(),
        }
    }

    pub fn bounds(&self) -> &Aabb {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.bounds.contains(p)
    }

    /// Inside bounds and not inside any obstacle interior.
    pub fn is_free(&self, p: &Point) -> bool {
        self.contains(p) && !self.obstacles.iter().any(|o| o.contains_strict(p))
    }

    /// True iff the open segment `(a, b)` meets no obstacle interior.
    ///
    /// Obstacles are tested one at a time, so two obstacles that merely
    /// touch leave a zero-width seam that counts as free. Overlap them to
    /// seal a passage.
    pub fn collision_free(&self, a: &Point, b: &Point) -> bool {
        !self.obstacles.iter().any(|o| o.segment_hits(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(cx: f64, cy: f64, half: f64) -> Obstacle {
        Obstacle::aabb(
            Point::xy(cx - half, cy - half),
            Point::xy(cx + half, cy + half),
        )
        .unwrap()
    }

    fn field() -> Aabb {
        Aabb::new(Point::xy(-10.0, -10.0), Point::xy(10.0, 10.0)).unwrap()
    }

    #[test]
    fn empty_world_always_free() {
        let w = World::empty(field());
        assert!(w.collision_free(&Point::xy(-9.0, -9.0), &Point::xy(9.0, 9.0)));
    }

    #[test]
    fn segment_through_box_center_blocked() {
        let w = World::new(field(), vec![square(0.0, 0.0, 0.5)]).unwrap();
        assert!(!w.collision_free(&Point::xy(-2.0, 0.0), &Point::xy(2.0, 0.0)));
    }

    #[test]
    fn vertex_graze_and_edge_slide_are_free() {
        let w = World::new(field(), vec![square(0.0, 0.0, 0.5)]).unwrap();
        // passes exactly through the corner (0.5, 0.5)
        assert!(w.collision_free(&Point::xy(0.0, 1.0), &Point::xy(1.0, 0.0)));
        // runs along the top edge
        assert!(w.collision_free(&Point::xy(-2.0, 0.5), &Point::xy(2.0, 0.5)));
        // ends on the boundary
        assert!(w.collision_free(&Point::xy(-2.0, 0.0), &Point::xy(-0.5, 0.0)));
        // starts on the boundary and goes in
        assert!(!w.collision_free(&Point::xy(-0.5, 0.0), &Point::xy(0.0, 0.0)));
    }

    #[test]
    fn graze_oracle_against_dense_sampling() {
        // triangle; a segment grazing its apex must sample no interior point
        let tri = Obstacle::polygon(vec![
            Point::xy(0.0, 0.0),
            Point::xy(2.0, 0.0),
            Point::xy(1.0, 1.0),
        ])
        .unwrap();
        let (a, b) = (Point::xy(-1.0, 1.0), Point::xy(3.0, 1.0));
        assert!(!tri.segment_hits(&a, &b));
        let sampled_hit = (1..1000).any(|i| tri.contains_strict(&a.lerp(&b, i as f64 / 1000.0)));
        assert!(!sampled_hit);
        let (c, d) = (Point::xy(-1.0, 0.5), Point::xy(3.0, 0.5));
        assert!(tri.segment_hits(&c, &d));
    }

    #[test]
    fn polygon_validation() {
        assert!(Obstacle::polygon(vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)]).is_err());
        // non-convex dart
        assert!(Obstacle::polygon(vec![
            Point::xy(0.0, 0.0),
            Point::xy(2.0, 0.0),
            Point::xy(1.0, 0.3),
            Point::xy(1.0, 2.0),
        ])
        .is_err());
        // clockwise input is normalized
        let cw = Obstacle::polygon(vec![
            Point::xy(0.0, 0.0),
            Point::xy(0.0, 1.0),
            Point::xy(1.0, 1.0),
            Point::xy(1.0, 0.0),
        ])
        .unwrap();
        assert!(cw.contains_strict(&Point::xy(0.5, 0.5)));
    }

    #[test]
    fn obstacle_must_fit_bounds() {
        let r = World::new(field(), vec![square(9.8, 0.0, 0.5)]);
        assert!(matches!(r, Err(GeometryError::ObstacleOutOfBounds)));
    }

    #[test]
    fn boxes_in_3d() {
        let bounds = Aabb::new(Point::xyz(0.0, 0.0, 0.0), Point::xyz(10.0, 10.0, 10.0)).unwrap();
        let b = Obstacle::aabb(Point::xyz(4.0, 4.0, 4.0), Point::xyz(6.0, 6.0, 6.0)).unwrap();
        let w = World::new(bounds, vec![b]).unwrap();
        assert!(!w.collision_free(&Point::xyz(1.0, 5.0, 5.0), &Point::xyz(9.0, 5.0, 5.0)));
        assert!(w.collision_free(&Point::xyz(1.0, 5.0, 7.0), &Point::xyz(9.0, 5.0, 7.0)));
        assert!(!w.is_free(&Point::xyz(5.0, 5.0, 5.0)));
    }

    #[test]
    fn world_json_shape() {
        let w = World::new(field(), vec![square(0.0, 0.0, 0.5)]).unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert!(json["obstacles"][0]["box"]["min"].is_array());
        let back: World = serde_json::from_value(json).unwrap();
        assert_eq!(back, w);
    }
}
