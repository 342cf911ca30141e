//! Eleven-parameter aerofoil built from four cubic Bézier segments.
//!
//! Each side runs leading edge -> crest -> trailing edge. The leading edge has
//! a vertical tangent shared by both sides and each crest has a horizontal
//! tangent shared by its two segments, so the profile is tangent-continuous
//! everywhere except at the trailing edge.

use std::f64::consts::PI;

use super::ClosedProfile2D;
use crate::error::{Error, Result};

/// Version tag of [`PARAM_RANGES`]; bump whenever a range changes.
pub const PARAM_TABLE_VERSION: &str = "bezier4-v1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
}

/// Affine map of each raw parameter in [0, 1] to a physical value
/// (chord units, angles in degrees).
pub const PARAM_RANGES: [ParamRange; 11] = [
    ParamRange { name: "le_radius_factor", lo: 0.2, hi: 0.8 },
    ParamRange { name: "upper_crest_x", lo: 0.2, hi: 0.5 },
    ParamRange { name: "upper_crest_y", lo: 0.03, hi: 0.18 },
    ParamRange { name: "upper_crest_flatness", lo: 0.3, hi: 0.9 },
    ParamRange { name: "lower_crest_x", lo: 0.2, hi: 0.5 },
    ParamRange { name: "lower_crest_y", lo: -0.18, hi: -0.03 },
    ParamRange { name: "lower_crest_flatness", lo: 0.3, hi: 0.9 },
    ParamRange { name: "te_upper_angle_deg", lo: -3.0, hi: 24.0 },
    ParamRange { name: "te_lower_angle_deg", lo: -3.0, hi: 24.0 },
    ParamRange { name: "te_thickness", lo: 0.0, hi: 0.02 },
    ParamRange { name: "te_camber_offset", lo: -0.03, hi: 0.03 },
];

/// Raw design vector, every component in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AirfoilParams([f64; 11]);

impl AirfoilParams {
    pub fn new(values: [f64; 11]) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ParamOutOfRange { index, value });
            }
        }
        Ok(AirfoilParams(values))
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        let arr: [f64; 11] = values.try_into().map_err(|_| Error::DimensionMismatch {
            expected: 11,
            found: values.len(),
        })?;
        Self::new(arr)
    }

    pub fn values(&self) -> &[f64; 11] {
        &self.0
    }

    pub fn reference() -> Self {
        AirfoilParams([0.5; 11])
    }
}

/// Physical construction values after the range map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AirfoilGeometry {
    pub le_radius_factor: f64,
    pub upper_crest: [f64; 2],
    pub upper_flatness: f64,
    pub lower_crest: [f64; 2],
    pub lower_flatness: f64,
    pub te_upper_angle_deg: f64,
    pub te_lower_angle_deg: f64,
    pub te_thickness: f64,
    pub te_camber_offset: f64,
}

impl AirfoilGeometry {
    pub fn from_params(params: &AirfoilParams) -> Self {
        let v: Vec<f64> = params
            .0
            .iter()
            .zip(PARAM_RANGES.iter())
            .map(|(p, r)| r.lo + (r.hi - r.lo) * p)
            .collect();
        AirfoilGeometry {
            le_radius_factor: v[0],
            upper_crest: [v[1], v[2]],
            upper_flatness: v[3],
            lower_crest: [v[4], v[5]],
            lower_flatness: v[6],
            te_upper_angle_deg: v[7],
            te_lower_angle_deg: v[8],
            te_thickness: v[9],
            te_camber_offset: v[10],
        }
    }

    /// Samples the profile: `n_points / 2` per side, cosine-clustered in x
    /// towards the leading edge, then scaled so the chord spans x in [0, 1].
    /// Points run trailing edge -> upper side -> leading edge -> lower side.
    pub fn build(&self, n_points: usize) -> Result<ClosedProfile2D> {
        if n_points < 32 || n_points % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "n_points must be even and at least 32, got {n_points}"
            )));
        }
        let half = n_points / 2;
        let te_u = self.te_camber_offset + 0.5 * self.te_thickness;
        let te_l = self.te_camber_offset - 0.5 * self.te_thickness;
        let upper = Side::new(
            self.upper_crest,
            self.upper_flatness,
            self.le_radius_factor * self.upper_crest[1].abs(),
            self.te_upper_angle_deg.to_radians(),
            te_u,
        );
        let lower = Side::new(
            self.lower_crest,
            self.lower_flatness,
            -self.le_radius_factor * self.lower_crest[1].abs(),
            -self.te_lower_angle_deg.to_radians(),
            te_l,
        );
        let targets: Vec<f64> = (0..half)
            .map(|k| 0.5 * (1.0 - (PI * (k as f64 + 0.5) / half as f64).cos()))
            .collect();
        let mut pts = Vec::with_capacity(n_points);
        pts.extend(targets.iter().rev().map(|&x| upper.point_at_x(x)));
        pts.extend(targets.iter().map(|&x| lower.point_at_x(x)));

        let xmin = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let xmax = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let chord = xmax - xmin;
        let pts = pts
            .into_iter()
            .map(|p| [(p[0] - xmin) / chord, p[1] / chord])
            .collect();
        ClosedProfile2D::new(pts)
    }
}

type Cubic = [[f64; 2]; 4];

struct Side {
    crest_x: f64,
    front: Cubic,
    rear: Cubic,
}

impl Side {
    /// `le_handle` is the signed vertical handle length at the leading edge;
    /// `te_slope_angle` is positive when the side descends into the trailing edge.
    fn new(crest: [f64; 2], flatness: f64, le_handle: f64, te_slope_angle: f64, te_y: f64) -> Self {
        let [xc, yc] = crest;
        let te_handle = 0.4 * (1.0 - xc);
        let front = [[0.0, 0.0], [0.0, le_handle], [xc * (1.0 - flatness), yc], [xc, yc]];
        let rear = [
            [xc, yc],
            [xc + 0.5 * flatness * (1.0 - xc), yc],
            [
                1.0 - te_handle * te_slope_angle.cos(),
                te_y + te_handle * te_slope_angle.sin(),
            ],
            [1.0, te_y],
        ];
        Side {
            crest_x: xc,
            front,
            rear,
        }
    }

    fn point_at_x(&self, x: f64) -> [f64; 2] {
        let curve = if x <= self.crest_x {
            &self.front
        } else {
            &self.rear
        };
        let t = solve_monotone_x(curve, x);
        bezier(curve, t)
    }
}

fn bezier(c: &Cubic, t: f64) -> [f64; 2] {
    let s = 1.0 - t;
    let b = [s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t];
    [
        b[0] * c[0][0] + b[1] * c[1][0] + b[2] * c[2][0] + b[3] * c[3][0],
        b[0] * c[0][1] + b[1] * c[1][1] + b[2] * c[2][1] + b[3] * c[3][1],
    ]
}

// x(t) is nondecreasing on every segment by construction of the handles.
fn solve_monotone_x(c: &Cubic, x: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if bezier(c, mid)[0] < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn generate_airfoil(params: &AirfoilParams, n_points: usize) -> Result<ClosedProfile2D> {
    AirfoilGeometry::from_params(params).build(n_points)
}
