use serde::{Deserialize, Serialize};

use super::{ClosedProfile2D, TriangleMesh};

/// Orientation determinants at or below this magnitude count as collinear.
pub const COLLINEAR_TOLERANCE: f64 = 1e-12;
/// Faces below this area (model units squared) are degenerate.
pub const DEGENERATE_AREA: f64 = 1e-14;
/// Loops up to this many edges use the all-pairs test.
const BRUTE_FORCE_LIMIT: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DefectCode {
    SelfIntersect,
    OpenEdge,
    NonManifoldEdge,
    InvertedOrientation,
    DegenerateFace,
    /// A decoded design could not be rebuilt at all.
    DecodeFail,
}

impl DefectCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DefectCode::SelfIntersect => "SELF_INTERSECT",
            DefectCode::OpenEdge => "OPEN_EDGE",
            DefectCode::NonManifoldEdge => "NON_MANIFOLD_EDGE",
            DefectCode::InvertedOrientation => "INVERTED_ORIENTATION",
            DefectCode::DegenerateFace => "DEGENERATE_FACE",
            DefectCode::DecodeFail => "DECODE_FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityVerdict {
    pub valid: bool,
    pub reasons: Vec<DefectCode>,
}

impl ValidityVerdict {
    pub fn from_reasons(mut reasons: Vec<DefectCode>) -> Self {
        reasons.sort();
        reasons.dedup();
        ValidityVerdict {
            valid: reasons.is_empty(),
            reasons,
        }
    }

    pub fn has(&self, code: DefectCode) -> bool {
        self.reasons.contains(&code)
    }

    /// Codes joined with `|`, empty when valid.
    pub fn codes(&self) -> String {
        self.reasons
            .iter()
            .map(|c| c.as_str())
            .collect::<Vec<_>>()
            .join("|")
    }
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn sign(v: f64) -> i8 {
    if v > COLLINEAR_TOLERANCE {
        1
    } else if v < -COLLINEAR_TOLERANCE {
        -1
    } else {
        0
    }
}

// c is assumed collinear with a-b.
fn within_box(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    let eps = COLLINEAR_TOLERANCE;
    c[0] >= a[0].min(b[0]) - eps
        && c[0] <= a[0].max(b[0]) + eps
        && c[1] >= a[1].min(b[1]) - eps
        && c[1] <= a[1].max(b[1]) + eps
}

/// Closed-segment intersection test, touching and collinear overlap included.
pub fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = sign(orient(q1, q2, p1));
    let d2 = sign(orient(q1, q2, p2));
    let d3 = sign(orient(p1, p2, q1));
    let d4 = sign(orient(p1, p2, q2));
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && within_box(q1, q2, p1))
        || (d2 == 0 && within_box(q1, q2, p2))
        || (d3 == 0 && within_box(p1, p2, q1))
        || (d4 == 0 && within_box(p1, p2, q2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionStrategy {
    /// Every non-adjacent pair, O(n^2).
    BruteForce,
    /// Edges sorted by their x-extent; only overlapping intervals are tested.
    Sweep,
    /// Brute force up to 512 edges, sweep beyond.
    Auto,
}

fn adjacent(i: usize, j: usize, n: usize) -> bool {
    i == j || (i + 1) % n == j || (j + 1) % n == i
}

/// Pairs `(i, j)`, `i < j`, of non-adjacent edges that intersect; edge `i`
/// joins point `i` to point `i + 1`.
pub fn find_self_intersections(
    profile: &ClosedProfile2D,
    strategy: IntersectionStrategy,
) -> Vec<(usize, usize)> {
    let pts = profile.points();
    let n = pts.len();
    let edge = |i: usize| (pts[i], pts[(i + 1) % n]);
    let strategy = match strategy {
        IntersectionStrategy::Auto if n <= BRUTE_FORCE_LIMIT => IntersectionStrategy::BruteForce,
        IntersectionStrategy::Auto => IntersectionStrategy::Sweep,
        s => s,
    };
    let mut hits = Vec::new();
    match strategy {
        IntersectionStrategy::BruteForce => {
            for i in 0..n {
                for j in i + 1..n {
                    if adjacent(i, j, n) {
                        continue;
                    }
                    let (a, b) = edge(i);
                    let (c, d) = edge(j);
                    if segments_intersect(a, b, c, d) {
                        hits.push((i, j));
                    }
                }
            }
        }
        _ => {
            let mut order: Vec<usize> = (0..n).collect();
            let xmin = |i: usize| {
                let (a, b) = edge(i);
                a[0].min(b[0])
            };
            let xmax = |i: usize| {
                let (a, b) = edge(i);
                a[0].max(b[0])
            };
            order.sort_by(|&a, &b| xmin(a).total_cmp(&xmin(b)).then(a.cmp(&b)));
            let mut active: Vec<usize> = Vec::new();
            for &i in &order {
                let lo = xmin(i) - COLLINEAR_TOLERANCE;
                active.retain(|&j| xmax(j) >= lo);
                for &j in &active {
                    if adjacent(i, j, n) {
                        continue;
                    }
                    let (a, b) = edge(i);
                    let (c, d) = edge(j);
                    if segments_intersect(a, b, c, d) {
                        hits.push((i.min(j), i.max(j)));
                    }
                }
                active.push(i);
            }
            hits.sort_unstable();
        }
    }
    hits
}

/// Simple-polygon test: `SELF_INTERSECT` iff two non-adjacent edges meet.
pub fn check_profile_validity(profile: &ClosedProfile2D) -> ValidityVerdict {
    let hits = find_self_intersections(profile, IntersectionStrategy::Auto);
    let mut reasons = Vec::new();
    if !hits.is_empty() {
        reasons.push(DefectCode::SelfIntersect);
    }
    ValidityVerdict::from_reasons(reasons)
}

/// Manifold and watertight test for a triangle mesh.
pub fn check_mesh_validity(mesh: &TriangleMesh) -> ValidityVerdict {
    let (open, non_manifold) = mesh.boundary_counts();
    let mut reasons = Vec::new();
    if open > 0 {
        reasons.push(DefectCode::OpenEdge);
    }
    if non_manifold > 0 {
        reasons.push(DefectCode::NonManifoldEdge);
    }
    if (0..mesh.faces().len()).any(|f| mesh.face_area(f) < DEGENERATE_AREA) {
        reasons.push(DefectCode::DegenerateFace);
    }
    if open == 0 && non_manifold == 0 && mesh.signed_volume() < 0.0 {
        reasons.push(DefectCode::InvertedOrientation);
    }
    ValidityVerdict::from_reasons(reasons)
}
