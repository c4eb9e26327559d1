//! Planar vectors, body shapes and contour-to-contour distance.

use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, Result};
use crate::object::RoadObject;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotates counter-clockwise by `angle` radians.
    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn angle(self) -> f64 {
        libm::atan2(self.y, self.x)
    }

    /// Mirror image about the x axis.
    pub fn reflect_y(self) -> Vec2 {
        Vec2::new(self.x, -self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Body outline, centered on the object's position and aligned to its heading.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "shape", rename_all = "snake_case"))]
pub enum BodyGeometry {
    Rectangle { length: f64, width: f64 },
    Point,
}

impl BodyGeometry {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BodyGeometry::Rectangle { length, width } => {
                if !(length > 0.0 && width > 0.0 && length.is_finite() && width.is_finite()) {
                    return Err(invalid("rectangle extents must be finite and positive"));
                }
                Ok(())
            }
            BodyGeometry::Point => Ok(()),
        }
    }

    /// Half extent along the heading axis; zero for points.
    pub fn half_length(&self) -> f64 {
        match *self {
            BodyGeometry::Rectangle { length, .. } => length / 2.0,
            BodyGeometry::Point => 0.0,
        }
    }

    pub fn half_width(&self) -> f64 {
        match *self {
            BodyGeometry::Rectangle { width, .. } => width / 2.0,
            BodyGeometry::Point => 0.0,
        }
    }
}

/// A body shape placed in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Footprint {
    pub geometry: BodyGeometry,
    pub center: Vec2,
    pub heading: f64,
}

impl Footprint {
    fn corners(&self, half_len: f64, half_wid: f64) -> [Vec2; 4] {
        let axis = Vec2::new(libm::cos(self.heading), libm::sin(self.heading));
        let normal = Vec2::new(-axis.y, axis.x);
        let (a, n) = (axis * half_len, normal * half_wid);
        [
            self.center + a + n,
            self.center - a + n,
            self.center - a - n,
            self.center + a - n,
        ]
    }

    /// Euclidean gap between the two outlines; zero when they touch or overlap.
    pub fn gap(&self, other: &Footprint) -> f64 {
        use BodyGeometry::*;
        match (self.geometry, other.geometry) {
            (Point, Point) => (self.center - other.center).norm(),
            (Rectangle { length, width }, Point) => {
                rect_point_gap(self.center, self.heading, length, width, other.center)
            }
            (Point, Rectangle { length, width }) => {
                rect_point_gap(other.center, other.heading, length, width, self.center)
            }
            (
                Rectangle {
                    length: l1,
                    width: w1,
                },
                Rectangle {
                    length: l2,
                    width: w2,
                },
            ) => {
                let a = self.corners(l1 / 2.0, w1 / 2.0);
                let b = other.corners(l2 / 2.0, w2 / 2.0);
                polygon_gap(&a, &b)
            }
        }
    }
}

fn rect_point_gap(center: Vec2, heading: f64, length: f64, width: f64, point: Vec2) -> f64 {
    let local = (point - center).rotate(-heading);
    let dx = (libm::fabs(local.x) - length / 2.0).max(0.0);
    let dy = (libm::fabs(local.y) - width / 2.0).max(0.0);
    libm::hypot(dx, dy)
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 > 0.0 {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p - (a + ab * t)).norm()
}

/// Separating-axis test for two convex quadrilaterals.
fn convex_overlap(a: &[Vec2; 4], b: &[Vec2; 4]) -> bool {
    for poly in [a, b] {
        for i in 0..4 {
            let edge = poly[(i + 1) % 4] - poly[i];
            let axis = Vec2::new(-edge.y, edge.x);
            let project = |pts: &[Vec2; 4]| {
                pts.iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                        let s = p.dot(axis);
                        (lo.min(s), hi.max(s))
                    })
            };
            let (a_lo, a_hi) = project(a);
            let (b_lo, b_hi) = project(b);
            if a_hi < b_lo || b_hi < a_lo {
                return false;
            }
        }
    }
    true
}

fn polygon_gap(a: &[Vec2; 4], b: &[Vec2; 4]) -> f64 {
    if convex_overlap(a, b) {
        return 0.0;
    }
    // Disjoint convex polygons: the closest pair always involves a vertex.
    let mut best = f64::INFINITY;
    for (p, q) in [(a, b), (b, a)] {
        for &v in p.iter() {
            for i in 0..4 {
                best = best.min(point_segment_distance(v, q[i], q[(i + 1) % 4]));
            }
        }
    }
    best
}

/// Gap between the contours of two road objects at their current states.
///
/// Symmetric in its arguments. Rectangles with non-positive extents are
/// rejected.
pub fn contour_distance(host: &RoadObject, obstacle: &RoadObject) -> Result<f64> {
    host.geometry.validate()?;
    obstacle.geometry.validate()?;
    if !host.state.position.is_finite() || !obstacle.state.position.is_finite() {
        return Err(invalid("non-finite position"));
    }
    Ok(host.footprint().gap(&obstacle.footprint()))
}
