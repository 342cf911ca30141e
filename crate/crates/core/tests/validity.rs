use geoop::shapes::primitives::tetrahedron;
use geoop::shapes::{check_mesh_validity, check_profile_validity, find_self_intersections, ClosedProfile2D, DefectCode, IntersectionStrategy};
use proptest::prelude::*;

fn orient(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> i64 {
    ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).signum()
}

fn on_segment(a: [i64; 2], b: [i64; 2], p: [i64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Exact closed-segment intersection on integer coordinates.
fn exact_intersect(p1: [i64; 2], p2: [i64; 2], q1: [i64; 2], q2: [i64; 2]) -> bool {
    let (d1, d2) = (orient(q1, q2, p1), orient(q1, q2, p2));
    let (d3, d4) = (orient(p1, p2, q1), orient(p1, p2, q2));
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(q1, q2, p1))
        || (d2 == 0 && on_segment(q1, q2, p2))
        || (d3 == 0 && on_segment(p1, p2, q1))
        || (d4 == 0 && on_segment(p1, p2, q2))
}

fn exact_pairs(pts: &[[i64; 2]]) -> Vec<(usize, usize)> {
    let n = pts.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if (i + 1) % n == j || (j + 1) % n == i {
                continue;
            }
            if exact_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                out.push((i, j));
            }
        }
    }
    out
}

fn grid_loop() -> impl Strategy<Value = Vec<[i64; 2]>> {
    prop::collection::vec(prop::array::uniform2(0i64..12), 4..24).prop_filter("no repeated neighbours", |v| {
        let n = v.len();
        (0..n).all(|i| v[i] != v[(i + 1) % n])
    })
}

#[test]
fn bow_tie_and_open_tetrahedron() {
    let bow = ClosedProfile2D::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
    assert!(check_profile_validity(&bow).has(DefectCode::SelfIntersect));
    let open = tetrahedron().without_face(0);
    let v = check_mesh_validity(&open);
    assert!(!v.valid && v.has(DefectCode::OpenEdge));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn brute_force_matches_exact_oracle(pts in grid_loop()) {
        let prof = ClosedProfile2D::new(pts.iter().map(|p| [p[0] as f64, p[1] as f64]).collect()).unwrap();
        let want = exact_pairs(&pts);
        prop_assert_eq!(find_self_intersections(&prof, IntersectionStrategy::BruteForce), want.clone());
        prop_assert_eq!(find_self_intersections(&prof, IntersectionStrategy::Sweep), want);
    }
}
