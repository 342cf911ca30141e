mod common;

use common::{close, mesh_moment_oracle, polygon_moment_oracle, random_star, union};
use geoop::moments::{
    cardinality, moments_2d, moments_3d, moments_3d_along, sac_moment_identity_residual, shift,
};
use geoop::shapes::primitives::{cuboid, icosphere, torus, unit_cube};
use geoop::shapes::ClosedProfile2D;
use geoop::slicing::Axis;
use proptest::prelude::*;

fn radius(points: &[[f64; 3]]) -> f64 {
    points.iter().map(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()).fold(0.0, f64::max)
}

#[test]
fn unit_cube_moments_are_exact() {
    let mv = moments_3d(&unit_cube(), 5).unwrap();
    assert_eq!(mv.len(), 56);
    assert_eq!(cardinality(5, 3, false), 56);
    for (i, &[p, q, r]) in mv.exponents.iter().enumerate() {
        let want = 1.0 / ((p + 1) * (q + 1) * (r + 1)) as f64;
        assert!(close(mv.values[i], want, 1e-12, 0.0), "{p},{q},{r}");
    }
}

#[test]
fn closed_meshes_match_quadrature() {
    for mesh in [icosphere(2, 1.3).translated([0.2, -0.4, 0.1]), torus(2.0, 0.6, 24, 12)] {
        let mv = moments_3d(&mesh, 4).unwrap();
        let r = radius(mesh.vertices());
        for (i, &e) in mv.exponents.iter().enumerate() {
            let s = e.iter().sum::<u32>() as i32;
            let want = mesh_moment_oracle(&mesh, e);
            assert!(close(mv.values[i], want, 1e-10, mv.m0() * r.powi(s)), "{e:?}");
        }
    }
}

#[test]
fn divergence_axes_agree() {
    let meshes = [unit_cube(), icosphere(4, 1.0), torus(2.0, 0.5, 32, 16)];
    for mesh in &meshes {
        let r = radius(mesh.vertices());
        let x = moments_3d_along(mesh, 4, Axis::X).unwrap();
        for axis in [Axis::Y, Axis::Z] {
            let other = moments_3d_along(mesh, 4, axis).unwrap();
            for i in 0..x.len() {
                let s = x.exponents[i].iter().sum::<u32>() as i32;
                assert!(close(other.values[i], x.values[i], 1e-10, x.m0() * r.powi(s)));
            }
        }
    }
}

#[test]
fn sac_identity_on_sphere() {
    // Unit sphere spanning x in [0, 2], section area pi (1 - (x - 1)^2).
    let sphere = icosphere(4, 1.0).translated([1.0, 0.0, 0.0]);
    assert_eq!(sac_moment_identity_residual(&sphere, 0, 400).unwrap(), 0.0);
    for p in 1..=3 {
        let res = sac_moment_identity_residual(&sphere, p, 400).unwrap();
        assert!(res < 1e-2, "p={p}: {res}");
    }
}

#[test]
fn mesh_moments_are_additive() {
    let a = cuboid([0.0, 0.0, 0.0], [1.0, 2.0, 0.5]);
    let b = icosphere(2, 0.7).translated([4.0, 1.0, -1.0]);
    let both = moments_3d(&union(&[a.clone(), b.clone()]), 3).unwrap();
    let ma = moments_3d(&a, 3).unwrap();
    let mb = moments_3d(&b, 3).unwrap();
    for i in 0..both.len() {
        let want = ma.values[i] + mb.values[i];
        assert!(close(both.values[i], want, 1e-12, 1e-12));
    }
}

#[test]
fn split_polygon_is_additive() {
    let whole = ClosedProfile2D::new(vec![[0.0, 0.0], [3.0, 0.0], [3.0, 1.0], [1.5, 2.5], [0.0, 1.0]]).unwrap();
    let left = ClosedProfile2D::new(vec![[0.0, 0.0], [1.5, 0.0], [1.5, 2.5], [0.0, 1.0]]).unwrap();
    let right = ClosedProfile2D::new(vec![[1.5, 0.0], [3.0, 0.0], [3.0, 1.0], [1.5, 2.5]]).unwrap();
    let (w, l, r) = (
        moments_2d(&whole, 6).unwrap(),
        moments_2d(&left, 6).unwrap(),
        moments_2d(&right, 6).unwrap(),
    );
    for i in 0..w.len() {
        assert!(close(l.values[i] + r.values[i], w.values[i], 1e-12, 1e-12));
    }
}

#[test]
fn cardinality_matches_output_length() {
    let cube = unit_cube();
    let square = ClosedProfile2D::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
    for s in 0..=8 {
        assert_eq!(moments_3d(&cube, s).unwrap().len(), cardinality(s, 3, false));
        assert_eq!(moments_2d(&square, s).unwrap().len(), cardinality(s, 2, false));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_cuboids_match_closed_form(
        lo in prop::array::uniform3(-2.0f64..2.0),
        ext in prop::array::uniform3(0.1f64..3.0),
    ) {
        let hi = [lo[0] + ext[0], lo[1] + ext[1], lo[2] + ext[2]];
        let mv = moments_3d(&cuboid(lo, hi), 4).unwrap();
        let r = radius(&[lo, hi]);
        for (i, &e) in mv.exponents.iter().enumerate() {
            let f = |k: usize| (hi[k].powi(e[k] as i32 + 1) - lo[k].powi(e[k] as i32 + 1)) / (e[k] + 1) as f64;
            let want = f(0) * f(1) * f(2);
            let s = e.iter().sum::<u32>() as i32;
            prop_assert!(close(mv.values[i], want, 1e-11, mv.m0() * r.powi(s)));
        }
    }

    #[test]
    fn polygons_match_quadrature(seed in any::<u64>(), n in 5usize..40, cx in -3.0f64..3.0, cy in -3.0f64..3.0) {
        let prof = random_star(seed, n, [cx, cy]);
        let mv = moments_2d(&prof, 5).unwrap();
        let r = prof.points().iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
        for (i, &[p, q, _]) in mv.exponents.iter().enumerate() {
            let want = polygon_moment_oracle(prof.points(), p, q);
            prop_assert!(close(mv.values[i], want, 1e-10, mv.m0() * r.powi((p + q) as i32)));
        }
    }

    #[test]
    fn central_moments_ignore_translation(seed in any::<u64>(), dx in -5.0f64..5.0, dy in -5.0f64..5.0) {
        let prof = random_star(seed, 24, [0.0, 0.0]);
        let a = moments_2d(&prof, 4).unwrap().to_central().unwrap();
        let b = moments_2d(&prof.translated(dx, dy), 4).unwrap().to_central().unwrap();
        for i in 0..a.len() {
            prop_assert!(close(b.values[i], a.values[i], 1e-9, a.m0() * 16.0));
        }
    }

    #[test]
    fn moments_scale_homogeneously(seed in any::<u64>(), lambda in 0.2f64..4.0) {
        let prof = random_star(seed, 20, [0.3, -0.2]);
        let a = moments_2d(&prof, 4).unwrap();
        let b = moments_2d(&prof.scaled(lambda), 4).unwrap();
        for (i, &[p, q, _]) in a.exponents.iter().enumerate() {
            let want = lambda.powi((p + q + 2) as i32) * a.values[i];
            prop_assert!(close(b.values[i], want, 1e-11, b.m0() * (2.5 * lambda).powi((p + q) as i32)));
        }
    }

    #[test]
    fn shift_law_matches_translated_mesh(d in prop::array::uniform3(-2.0f64..2.0)) {
        let mesh = icosphere(1, 1.0);
        let mv = moments_3d(&mesh, 4).unwrap();
        let moved = moments_3d(&mesh.translated(d), 4).unwrap();
        let predicted = shift(&mv, d);
        let r = 1.0 + (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        for i in 0..mv.len() {
            let s = mv.exponents[i].iter().sum::<u32>() as i32;
            prop_assert!(close(predicted[i], moved.values[i], 1e-10, mv.m0() * r.powi(s)));
        }
    }
}
