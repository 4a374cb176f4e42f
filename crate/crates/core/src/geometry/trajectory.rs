// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{GeometryError, Point, EPS};

/// An ordered polyline of at least one point.
///
/// Plans, plan prefixes and suffixes, and observations are all trajectories.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Trajectory {
    points: Vec<Point>,
}

/// Closest point on a polyline together with its arc-length position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub point: Point,
    pub arc_length: f64,
    pub distance: f64,
}

impl Trajectory {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        let first = points.first().ok_or(GeometryError::EmptyTrajectory)?;
        let dim = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { points })
    }

    pub fn from_point(p: Point) -> Self {
        Self { points: vec![p] }
    }

    /// Straight segment `a -> b` (a single point when they coincide exactly).
    pub fn segment(a: Point, b: Point) -> Self {
        if a == b {
            Self::from_point(a)
        } else {
            Self { points: vec![a, b] }
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn start(&self) -> Point {
        self.points[0]
    }

    pub fn end(&self) -> Point {
        self.points[self.points.len() - 1]
    }

    /// Sum of Euclidean segment lengths.
    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }

    /// Arc length at every vertex; first entry is 0.
    pub fn cumulative_lengths(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.points.len());
        out.push(0.0);
        for w in self.points.windows(2) {
            acc += w[0].distance(&w[1]);
            out.push(acc);
        }
        out
    }

    /// Trajectory concatenation (`a ⊕ b`).
    ///
    /// When `end(a) != start(b)` the two are joined by a straight bridge.
    /// An exactly shared endpoint is not duplicated.
    pub fn concat(&self, other: &Trajectory) -> Result<Trajectory, GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut points = Vec::with_capacity(self.points.len() + other.points.len());
        points.extend_from_slice(&self.points);
        let skip = usize::from(self.end() == other.start());
        points.extend_from_slice(&other.points[skip..]);
        Ok(Trajectory { points })
    }

    /// Point on the polyline at arc length `s`, clamped to `[0, length]`.
    pub fn point_at(&self, s: f64) -> Point {
        if s <= 0.0 {
            return self.start();
        }
        let mut acc = 0.0;
        for w in self.points.windows(2) {
            let len = w[0].distance(&w[1]);
            if acc + len >= s && len > 0.0 {
                return w[0].lerp(&w[1], ((s - acc) / len).clamp(0.0, 1.0));
            }
            acc += len;
        }
        self.end()
    }

    /// Geometrically closest point on the polyline to `p`.
    ///
    /// Ties resolve to the smallest arc length.
    pub fn closest_point(&self, p: &Point) -> Projection {
        let mut best = Projection {
            point: self.start(),
            arc_length: 0.0,
            distance: p.distance(&self.start()),
        };
        let mut acc = 0.0;
        for w in self.points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ab = b.sub(&a);
            let len_sq = ab.dot(&ab);
            if len_sq == 0.0 {
                continue;
            }
            let len = len_sq.sqrt();
            let t = (p.sub(&a).dot(&ab) / len_sq).clamp(0.0, 1.0);
            let q = if t >= 1.0 { b } else { a.lerp(&b, t) };
            let d = p.distance(&q);
            if d < best.distance - 1e-12 {
                best = Projection {
                    point: q,
                    arc_length: acc + t * len,
                    distance: d,
                };
            }
            acc += len;
        }
        best
    }

    /// Euclidean distance from `p` to the polyline.
    pub fn distance_to(&self, p: &Point) -> f64 {
        self.closest_point(p).distance
    }

    /// Drops the first `s` meters of arc length (`t ⊖ prefix`).
    ///
    /// The new first point is interpolated on the segment containing `s`.
    pub fn remove_prefix(&self, s: f64) -> Result<Trajectory, GeometryError> {
        let total = self.length();
        if !s.is_finite() || s < -EPS || s > total + EPS {
            return Err(GeometryError::ArcLengthOutOfRange { s, length: total });
        }
        if s <= 0.0 {
            return Ok(self.clone());
        }
        if s >= total {
            return Ok(Trajectory::from_point(self.end()));
        }
        let mut acc = 0.0;
        for (i, w) in self.points.windows(2).enumerate() {
            let len = w[0].distance(&w[1]);
            if len > 0.0 && acc + len >= s {
                let rest = &self.points[i + 1..];
                if acc + len - s <= EPS {
                    return Trajectory::new(rest.to_vec());
                }
                let first = w[0].lerp(&w[1], (s - acc) / len);
                let mut points = Vec::with_capacity(rest.len() + 1);
                points.push(first);
                points.extend_from_slice(rest);
                return Ok(Trajectory { points });
            }
            acc += len;
        }
        Ok(Trajectory::from_point(self.end()))
    }

    /// `k >= 2` points at equally spaced arc-length stations, endpoints exact.
    pub fn resample(&self, k: usize) -> Vec<Point> {
        assert!(k >= 2, "resample needs at least two stations");
        let total = self.length();
        let mut out: Vec<Point> = (0..k)
            .map(|i| self.point_at(total * i as f64 / (k - 1) as f64))
            .collect();
        out[0] = self.start();
        out[k - 1] = self.end();
        out
    }

    /// Sub-polyline between arc lengths `from < to`, keeping interior vertices.
    pub fn slice(&self, from: f64, to: f64) -> Trajectory {
        let cum = self.cumulative_lengths();
        let mut points = vec![self.point_at(from)];
        for (p, &s) in self.points.iter().zip(&cum) {
            if s > from && s < to && *p != points[points.len() - 1] {
                points.push(*p);
            }
        }
        let last = self.point_at(to);
        if last != points[points.len() - 1] {
            points.push(last);
        }
        Trajectory { points }
    }
}

impl TryFrom<Vec<Point>> for Trajectory {
    type Error = GeometryError;

    fn try_from(points: Vec<Point>) -> Result<Self, Self::Error> {
        Trajectory::new(points)
    }
}

impl From<Trajectory> for Vec<Point> {
    fn from(t: Trajectory) -> Self {
        t.points
    }
}
