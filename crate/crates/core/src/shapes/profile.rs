use crate::error::{Error, Result};

/// Point count of every generated or UIUC-derived profile fed to the pipeline.
pub const UNIFORM_CARDINALITY: usize = 192;

const MIN_SPACING: f64 = 1e-12;

/// Ordered planar loop; the last point connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedProfile2D {
    points: Vec<[f64; 2]>,
}

impl ClosedProfile2D {
    /// Builds a loop, rejecting fewer than three points or coincident
    /// consecutive points (including the closing pair).
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints {
                found: points.len(),
            });
        }
        if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::NanInput);
        }
        let n = points.len();
        for i in 0..n {
            let a = points[i];
            let b = points[(i + 1) % n];
            if (b[0] - a[0]).hypot(b[1] - a[1]) <= MIN_SPACING {
                return Err(Error::InvalidGeometry(format!(
                    "points {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        Ok(ClosedProfile2D { points })
    }

    /// Counter-clockwise version of the loop (reversed when the signed area
    /// is negative).
    pub fn new_ccw(points: Vec<[f64; 2]>) -> Result<Self> {
        Ok(Self::new(points)?.into_ccw())
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Edges `(p_i, p_{i+1})`, closing edge last.
    pub fn edges(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    /// Shoelace area, positive for counter-clockwise loops.
    pub fn signed_area(&self) -> f64 {
        0.5 * self
            .edges()
            .map(|(a, b)| a[0] * b[1] - b[0] * a[1])
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges()
            .map(|(a, b)| (b[0] - a[0]).hypot(b[1] - a[1]))
            .sum()
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn into_ccw(mut self) -> Self {
        if self.signed_area() < 0.0 {
            self.points.reverse();
        }
        self
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        ClosedProfile2D { points }
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        ClosedProfile2D {
            points: self.points.iter().map(|p| [p[0] + dx, p[1] + dy]).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ClosedProfile2D {
            points: self
                .points
                .iter()
                .map(|p| [p[0] * factor, p[1] * factor])
                .collect(),
        }
    }

    /// Re-samples the loop to `n` points evenly spaced in arc length,
    /// starting at point 0. Used to bring heterogeneous profiles to a common
    /// cardinality.
    pub fn resampled(&self, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPoints { found: n });
        }
        let lengths: Vec<f64> = self
            .edges()
            .map(|(a, b)| (b[0] - a[0]).hypot(b[1] - a[1]))
            .collect();
        let total: f64 = lengths.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroPerimeter);
        }
        let mut out = Vec::with_capacity(n);
        let mut edge = 0usize;
        let mut walked = 0.0;
        for k in 0..n {
            let target = total * k as f64 / n as f64;
            while edge + 1 < lengths.len() && walked + lengths[edge] < target {
                walked += lengths[edge];
                edge += 1;
            }
            let a = self.points[edge];
            let b = self.points[(edge + 1) % self.points.len()];
            let t = ((target - walked) / lengths[edge]).clamp(0.0, 1.0);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
        ClosedProfile2D::new(out)
    }
}
