//! Box overlap, foot points, ground-plane homographies and world distances.
//!
//! Image coordinates follow the MOT convention: the top-left pixel is
//! `(1, 1)`. Boxes are closed real-valued rectangles; nothing is rasterized.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Axis-aligned box given by its top-left corner, width and height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

impl BBox {
    pub fn new(left: f64, top: f64, width: f64, height: f64) -> Self {
        debug_assert!(width > 0.0 && height > 0.0, "box must have positive size");
        BBox {
            left,
            top,
            width,
            height,
        }
    }

    #[inline]
    pub fn right(&self) -> f64 {
        self.left + self.width
    }

    #[inline]
    pub fn bottom(&self) -> f64 {
        self.top + self.height
    }

    #[inline]
    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        let w = self.right().min(other.right()) - self.left.max(other.left);
        let h = self.bottom().min(other.bottom()) - self.top.max(other.top);
        if w <= 0.0 || h <= 0.0 {
            0.0
        } else {
            w * h
        }
    }

    pub fn iou(&self, other: &BBox) -> f64 {
        iou(self, other)
    }

    /// Bottom-center point, taken as the ground contact of a pedestrian.
    pub fn foot_point(&self) -> ImagePoint {
        ImagePoint {
            x: self.left + self.width / 2.0,
            y: self.top + self.height,
        }
    }

    /// Clips the box to an image of the given size. The image spans
    /// `[1, width + 1] x [1, height + 1]`. Returns `None` when nothing of
    /// the box is left inside.
    pub fn clipped(&self, image_width: f64, image_height: f64) -> Option<BBox> {
        let left = self.left.max(1.0);
        let top = self.top.max(1.0);
        let right = self.right().min(image_width + 1.0);
        let bottom = self.bottom().min(image_height + 1.0);
        (right > left && bottom > top).then(|| BBox::new(left, top, right - left, bottom - top))
    }
}

/// Intersection over union (Jaccard index) of two boxes, in `[0, 1]`.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter == 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    // guards the identical-box case against rounding above 1
    (inter / union).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImagePoint {
    pub x: f64,
    pub y: f64,
}

impl ImagePoint {
    pub fn new(x: f64, y: f64) -> Self {
        ImagePoint { x, y }
    }
}

/// Point in the world frame, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorldPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl WorldPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        WorldPoint { x, y, z }
    }

    pub fn distance(&self, other: &WorldPoint) -> f64 {
        dist3d(self, other)
    }
}

/// Euclidean distance between two world points.
pub fn dist3d(a: &WorldPoint, b: &WorldPoint) -> f64 {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Magnitude below which the homogeneous coordinate counts as zero.
pub const INFINITY_TOLERANCE: f64 = 1e-12;

/// Nonsingular 3x3 map from the image plane to the ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Homography(Matrix3<f64>);

impl Homography {
    pub fn new(matrix: Matrix3<f64>) -> Result<Self> {
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Homography("non-finite entry".into()));
        }
        let det = matrix.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Homography("matrix is singular".into()));
        }
        Ok(Homography(matrix))
    }

    pub fn from_row_slice(values: &[f64; 9]) -> Result<Self> {
        Self::new(Matrix3::from_row_slice(values))
    }

    pub fn identity() -> Self {
        Homography(Matrix3::identity())
    }

    /// Parses nine whitespace-separated reals in row-major order.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::Homography(format!("not a number: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let values: [f64; 9] = values
            .try_into()
            .map_err(|v: Vec<f64>| Error::Homography(format!("expected 9 values, got {}", v.len())))?;
        Self::from_row_slice(&values)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..3 {
            let row: Vec<String> = (0..3).map(|c| self.0[(r, c)].to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self
            .0
            .try_inverse()
            .ok_or_else(|| Error::Homography("matrix is not invertible".into()))?;
        Self::new(inv)
    }

    /// Applies the map and dehomogenizes, returning plane coordinates.
    pub fn apply(&self, p: ImagePoint) -> Result<(f64, f64)> {
        let v = self.0 * Vector3::new(p.x, p.y, 1.0);
        if v.z.abs() < INFINITY_TOLERANCE {
            return Err(Error::PointAtInfinity);
        }
        Ok((v.x / v.z, v.y / v.z))
    }

    /// Projects an image point onto the ground plane (`z = 0`).
    pub fn project_ground(&self, p: ImagePoint) -> Result<WorldPoint> {
        let (x, y) = self.apply(p)?;
        Ok(WorldPoint::new(x, y, 0.0))
    }
}

/// Free-function form of [`Homography::project_ground`].
pub fn project_ground(h: &Homography, p: ImagePoint) -> Result<WorldPoint> {
    h.project_ground(p)
}
