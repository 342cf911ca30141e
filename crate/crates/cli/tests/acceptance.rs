//! The fourteen acceptance criteria, one PASS/FAIL line each.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use geoop::curvature::{gaussian_curvature_parametric, total_curvature_mesh, ParametricPatch};
use geoop::featureset::{assemble_go, lhs_sample, ComboSpec, GoConfig, GoVector};
use geoop::fourier::{planar_fd, resample_arclength, sectional_fd_3d, BoundarySignal, Complex};
use geoop::moments::{cardinality, moments_3d, moments_3d_along, sac_moment_identity_residual};
use geoop::quality::{build_dpp_kernel, dpp_loss_term};
use geoop::sensitivity::{saltelli_design, sobol_indices_scalar, sobol_indices_vector};
use geoop::shapes::primitives::{cylinder, frustum, icosphere, tetrahedron, torus, unit_cube};
use geoop::shapes::{
    check_mesh_validity, check_profile_validity, find_self_intersections, generate_airfoil, AirfoilParams,
    ClosedProfile2D, DefectCode, Design, IntersectionStrategy, TriangleMesh,
};
use geoop::slicing::Axis;
use geoop::subspace::{fit_kle_rows, project, reconstruct};
use geoop::surrogate::{ablation_combo, default_grid, evaluate, fit_gpr_rows, GprOptions, Kernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn radius(mesh: &TriangleMesh) -> f64 {
    mesh.vertices().iter().map(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()).fold(0.0, f64::max)
}

fn c1_cube_moments() -> Outcome {
    let t = Instant::now();
    let mv = moments_3d(&unit_cube(), 5).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    let mut worst = 0.0f64;
    for (i, &[p, q, r]) in mv.exponents.iter().enumerate() {
        let want = 1.0 / ((p + 1) * (q + 1) * (r + 1)) as f64;
        worst = worst.max((mv.values[i] - want).abs() / want);
    }
    check(
        mv.len() == 56 && cardinality(5, 3, false) == 56 && worst <= 1e-12 && secs < 1.0,
        format!("n={} max rel err {worst:.2e}, {secs:.3}s", mv.len()),
    )
}

fn c2_divergence_axes() -> Outcome {
    let mut worst = 0.0f64;
    for mesh in [unit_cube(), icosphere(4, 1.0), torus(2.0, 0.5, 48, 24)] {
        let r = radius(&mesh);
        let x = moments_3d_along(&mesh, 4, Axis::X).map_err(|e| e.to_string())?;
        for axis in [Axis::Y, Axis::Z] {
            let o = moments_3d_along(&mesh, 4, axis).map_err(|e| e.to_string())?;
            for i in 0..x.len() {
                let s = x.exponents[i].iter().sum::<u32>() as i32;
                let scale = x.values[i].abs().max(x.m0() * r.powi(s));
                worst = worst.max((o.values[i] - x.values[i]).abs() / scale);
            }
        }
    }
    check(worst <= 1e-10, format!("max rel disagreement {worst:.2e}"))
}

fn c3_sac_identity() -> Outcome {
    let sphere = icosphere(4, 1.0).translated([1.0, 0.0, 0.0]);
    let mut res = Vec::new();
    for p in 1..=3 {
        res.push(sac_moment_identity_residual(&sphere, p, 400).map_err(|e| e.to_string())?);
    }
    check(res.iter().all(|r| *r < 1e-2), format!("residuals p=1..3: {res:?}"))
}

fn c4_gauss_bonnet() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, mesh, want, tol) in [
        ("cube", unit_cube(), 2.0 * TAU, 1e-9),
        ("icosphere", icosphere(4, 1.0), 2.0 * TAU, 1e-9),
        ("torus", torus(2.0, 0.5, 48, 24), 0.0, 1e-8),
    ] {
        let s = total_curvature_mesh(&mesh).map_err(|e| e.to_string())?;
        let chi = mesh.euler_characteristic() as f64;
        ok &= (s.total_curvature - want).abs() <= tol && (s.euler_characteristic_estimate - chi).abs() <= 1e-9;
        notes.push(format!("{name} {:.2e}", (s.total_curvature - want).abs()));
    }
    check(ok, notes.join(", "))
}

fn c5_parametric_curvature() -> Outcome {
    let sphere = ParametricPatch::sphere(1.0);
    let mut worst = 0.0f64;
    for &(u, v) in &[(0.3, 0.4), (1.0, 1.5), (4.0, 2.7), (6.0, 0.05)] {
        let k = gaussian_curvature_parametric(&sphere, u, v).map_err(|e| e.to_string())?;
        worst = worst.max((k - 1.0).abs());
    }
    let kt = gaussian_curvature_parametric(&ParametricPatch::torus(2.0, 0.5), 0.0, 0.0).map_err(|e| e.to_string())?;
    check(
        worst <= 1e-10 && (kt - 0.8).abs() <= 1e-9,
        format!("sphere err {worst:.2e}, torus outer K={kt}"),
    )
}

fn random_loop(seed: u64) -> ClosedProfile2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(5..50);
    let pts = (0..n)
        .map(|k| {
            let t = TAU * (k as f64 + rng.random_range(0.0..0.5)) / n as f64;
            let r = rng.random_range(0.3..3.0);
            [r * t.cos() + 0.7, r * t.sin() - 0.2]
        })
        .collect();
    ClosedProfile2D::new(pts).unwrap()
}

fn c6_parseval() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let sig = resample_arclength(&random_loop(seed), 128).map_err(|e| e.to_string())?;
        let ms = sig.mean_square();
        worst = worst.max((planar_fd(&sig).total_energy(true) - ms).abs() / ms);
    }
    let z: Vec<Complex> = (0..256).map(|k| Complex::from_polar(2.0, TAU * k as f64 / 256.0)).collect();
    let f1 = planar_fd(&BoundarySignal::from_samples(z).map_err(|e| e.to_string())?).get(1).norm();
    check(
        worst <= 1e-10 && (f1 - 2.0).abs() <= 1e-9,
        format!("max rel Parseval gap {worst:.2e}, |F(1)|={f1}"),
    )
}

fn naive_dft(z: &[Complex], n: i64) -> Complex {
    let len = z.len() as f64;
    z.iter()
        .enumerate()
        .map(|(k, c)| c * Complex::from_polar(1.0, -TAU * n as f64 * k as f64 / len))
        .sum::<Complex>()
        / len
}

fn regular_section(radius: f64, sides: usize, samples: usize) -> Vec<Complex> {
    let vert = |i: usize| Complex::from_polar(radius, TAU * (i % sides) as f64 / sides as f64);
    let edge = (vert(1) - vert(0)).norm();
    let per = edge * sides as f64;
    (0..samples)
        .map(|j| {
            let s = per * j as f64 / samples as f64;
            let e = ((s / edge).floor() as usize).min(sides - 1);
            vert(e) + (vert(e + 1) - vert(e)) * ((s - e as f64 * edge) / edge)
        })
        .collect()
}

fn c7_sectional_fd() -> Outcome {
    let grid = sectional_fd_3d(&cylinder(1.0, 3.0, 48, 4), 16, 64).map_err(|e| e.to_string())?;
    let total = grid.total_energy(true);
    let off: f64 = grid.entries().filter(|&(m, _, _)| m != 0).map(|(_, _, c)| c.norm_sqr()).sum::<f64>()
        + grid.nyquist_energy;
    let (r0, r1, h, sides, s, n) = (1.0, 0.25, 2.0, 32, 8, 64usize);
    let cone = sectional_fd_3d(&frustum(r0, r1, h, sides, 5), s, n).map_err(|e| e.to_string())?;
    let spectra: Vec<Vec<Complex>> = cone
        .section_levels
        .iter()
        .map(|z| {
            let sec = regular_section(r0 + (r1 - r0) * z / h, sides, n);
            (-(n as i64) / 2..n as i64 / 2).map(|k| naive_dft(&sec, k)).collect()
        })
        .collect();
    let mut worst = 0.0f64;
    for (m, k, c) in cone.entries() {
        let col: Vec<Complex> = spectra.iter().map(|sp| sp[(k + n as i64 / 2) as usize]).collect();
        worst = worst.max((c - naive_dft(&col, m)).norm());
    }
    check(
        off < 0.01 * total && worst <= 1e-6,
        format!("cylinder off-axis fraction {:.2e}, cone max err {worst:.2e}", off / total),
    )
}

fn c8_ishigami() -> Outcome {
    let (a, b) = (7.0, 0.1);
    let f = |x: &Vec<f64>| {
        let u: Vec<f64> = x.iter().map(|v| -PI + TAU * v).collect();
        u[0].sin() + a * u[1].sin().powi(2) + b * u[2].powi(4) * u[0].sin()
    };
    let t = Instant::now();
    let s = saltelli_design(3, 1 << 14, 2024).map_err(|e| e.to_string())?;
    let fa: Vec<f64> = s.a.iter().map(f).collect();
    let fb: Vec<f64> = s.b.iter().map(f).collect();
    let fab: Vec<Vec<f64>> = s.ab.iter().map(|m| m.iter().map(f).collect()).collect();
    let r = sobol_indices_scalar(&fa, &fb, &fab).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    let pi4 = PI.powi(4);
    let v = a * a / 8.0 + b * pi4 / 5.0 + b * b * pi4 * pi4 / 18.0 + 0.5;
    let s1 = 0.5 * (1.0 + b * pi4 / 5.0).powi(2) / v;
    let s2 = a * a / 8.0 / v;
    let st3 = 8.0 * b * b * pi4 * pi4 / 225.0 / v;
    let errs = [
        (r.first_order[0] - s1).abs(),
        (r.first_order[1] - s2).abs(),
        r.first_order[2].abs(),
        (r.total_order[2] - st3).abs(),
    ];
    let wrap = |x: &[f64]| x.iter().map(|v| vec![*v]).collect::<Vec<_>>();
    let vr = sobol_indices_vector(&wrap(&fa), &wrap(&fb), &fab.iter().map(|m| wrap(m)).collect::<Vec<_>>())
        .map_err(|e| e.to_string())?;
    let same = vr.first_order_raw == r.first_order_raw && vr.total_order_raw == r.total_order_raw;
    check(
        errs.iter().all(|e| *e <= 0.02) && secs < 30.0 && same,
        format!("|dS1|,|dS2|,|dS3|,|dST3| = {errs:.3?}, {secs:.2}s, q=1 paths identical: {same}"),
    )
}

fn c9_kle() -> Outcome {
    let dirs = [
        [1.0, 0.0, 2.0, -1.0, 0.5, 0.0, 1.0, 0.3],
        [0.0, 1.0, -1.0, 0.0, 1.0, 3.0, -0.5, 0.0],
        [2.0, -1.0, 0.0, 1.0, 0.0, 1.0, 0.0, -2.0],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rows: Vec<Vec<f64>> = (0..60)
        .map(|_| {
            let c: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            (0..8).map(|j| 3.0 + (0..3).map(|k| c[k] * dirs[k][j]).sum::<f64>()).collect()
        })
        .collect();
    let basis = fit_kle_rows(&rows, 0.95).map_err(|e| e.to_string())?;
    let n = rows.len() as f64;
    let trace: f64 = (0..8)
        .map(|j| {
            let mu = rows.iter().map(|r| r[j]).sum::<f64>() / n;
            rows.iter().map(|r| (r[j] - mu).powi(2)).sum::<f64>() / (n - 1.0)
        })
        .sum();
    let mut worst = 0.0f64;
    for r in &rows {
        let back = reconstruct(&basis, &project(&basis, r).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        worst = worst.max(back.iter().zip(r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    let gap = (basis.total_variance() - trace).abs() / trace;
    check(
        basis.retained_dims == 3 && gap <= 1e-8 && worst <= 1e-10,
        format!("retained {}, trace gap {gap:.2e}, round trip {worst:.2e}", basis.retained_dims),
    )
}

fn go_records(n: usize, seed: u64) -> Vec<GoVector> {
    let cfg = GoConfig::default();
    lhs_sample(11, n, seed)
        .into_iter()
        .enumerate()
        .filter_map(|(i, x)| {
            let prof = generate_airfoil(&AirfoilParams::from_slice(&x).ok()?, cfg.profile_points).ok()?;
            let design = Design::Profile(prof);
            design.validity().valid.then_some(())?;
            assemble_go(&format!("a{i}"), &design, Some(&x), &cfg).ok()
        })
        .collect()
}

fn c10_gpr() -> Outcome {
    let x = lhs_sample(1, 30, 10);
    let y: Vec<f64> = x.iter().map(|r| (TAU * r[0]).sin()).collect();
    let model = fit_gpr_rows(&x, &y, &GprOptions::new(Kernel::Rbf, 10)).map_err(|e| e.to_string())?;
    let test: Vec<Vec<f64>> = (0..500).map(|i| vec![(i as f64 + 0.5) / 500.0]).collect();
    let truth: Vec<f64> = test.iter().map(|r| (TAU * r[0]).sin()).collect();
    let m = evaluate(&model, &test, &truth).map_err(|e| e.to_string())?;
    let (fit, _) = model.predict(&x).map_err(|e| e.to_string())?;
    let interp = fit.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let gos = go_records(40, 3);
    let labels: Vec<f64> = gos.iter().map(|g| g.p.as_ref().unwrap()[2] - g.p.as_ref().unwrap()[5]).collect();
    let combo = ComboSpec::parse("P+K").unwrap();
    let grid = default_grid();
    let a = ablation_combo(&gos, &labels, combo, &grid, 1).map_err(|e| e.to_string())?;
    let b = ablation_combo(&gos, &labels, combo, &grid, 1).map_err(|e| e.to_string())?;
    check(
        m.rmse < 0.02 && interp <= 1e-6 && a == b,
        format!("test RMSE {:.2e}, interpolation {interp:.2e}, ablation rerun identical: {}", m.rmse, a == b),
    )
}

fn c11_go_augmentation() -> Outcome {
    let t = Instant::now();
    let gos = go_records(500, 11);
    let second: Vec<[f64; 3]> = gos
        .iter()
        .map(|g| {
            let m = g.m.as_ref().unwrap();
            [m.get(2, 0, 0).unwrap(), m.get(1, 1, 0).unwrap(), m.get(0, 2, 0).unwrap()]
        })
        .collect();
    let z: Vec<Vec<f64>> = (0..3)
        .map(|k| {
            let col: Vec<f64> = second.iter().map(|s| s[k]).collect();
            let n = col.len() as f64;
            let mu = col.iter().sum::<f64>() / n;
            let sd = (col.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n).sqrt();
            col.iter().map(|v| (v - mu) / sd).collect()
        })
        .collect();
    let labels: Vec<f64> = (0..gos.len())
        .map(|i| z[0][i] + 0.5 * z[2][i] - 0.4 * z[1][i] + 0.3 * z[0][i] * z[2][i])
        .collect();
    let grid = default_grid();
    let p = ablation_combo(&gos, &labels, ComboSpec::parse("P").unwrap(), &grid, 7).map_err(|e| e.to_string())?;
    let pm = ablation_combo(&gos, &labels, ComboSpec::parse("P+M").unwrap(), &grid, 7).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    check(
        pm.metrics.r2 >= 0.95 && pm.metrics.r2 >= p.metrics.r2 && secs < 300.0,
        format!(
            "{} designs, R2(P)={:.4}, R2(P+M)={:.4}, {secs:.1}s",
            gos.len(),
            p.metrics.r2,
            pm.metrics.r2
        ),
    )
}

fn c12_dpp() -> Outcome {
    let identity = build_dpp_kernel(&[vec![0.0], vec![1e6]], &[1.0, 1.0], 1.0, 1.0).map_err(|e| e.to_string())?;
    let zero = dpp_loss_term(&identity).value + 0.0;
    let q = [1.0, 1.0, 1.0];
    let loss = |rows: &[Vec<f64>], q: &[f64]| -> Result<f64, String> {
        Ok(dpp_loss_term(&build_dpp_kernel(rows, q, 1.0, 1.0).map_err(|e| e.to_string())?).value)
    };
    let dup = loss(&[vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.5]], &q)?;
    let far = loss(&[vec![0.0, 0.0], vec![6.0, -4.0], vec![1.0, 0.5]], &q)?;
    let rows = [vec![0.0, 0.0], vec![0.4, 0.1], vec![1.0, 0.5]];
    let base = loss(&rows, &q)?;
    let mut raised = true;
    for i in 0..3 {
        let mut q2 = q;
        q2[i] = 1.5;
        raised &= loss(&rows, &q2)? < base;
    }
    check(
        zero == 0.0 && far < dup && raised,
        format!("identity loss {zero}, duplicate {dup:.3} -> moved {far:.3}, quality increase lowers loss: {raised}"),
    )
}

fn orient(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> i64 {
    ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).signum()
}

fn exact_intersect(p1: [i64; 2], p2: [i64; 2], q1: [i64; 2], q2: [i64; 2]) -> bool {
    let within = |a: [i64; 2], b: [i64; 2], p: [i64; 2]| {
        p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
    };
    let (d1, d2, d3, d4) = (orient(q1, q2, p1), orient(q1, q2, p2), orient(p1, p2, q1), orient(p1, p2, q2));
    (d1 * d2 < 0 && d3 * d4 < 0)
        || (d1 == 0 && within(q1, q2, p1))
        || (d2 == 0 && within(q1, q2, p2))
        || (d3 == 0 && within(p1, p2, q1))
        || (d4 == 0 && within(p1, p2, q2))
}

fn c13_validity() -> Outcome {
    let bow = ClosedProfile2D::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
    let bow_ok = check_profile_validity(&bow).has(DefectCode::SelfIntersect);
    let open_ok = check_mesh_validity(&tetrahedron().without_face(2)).has(DefectCode::OpenEdge);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut agree = 0;
    let mut tried = 0;
    while tried < 1000 {
        let n = rng.random_range(4..30);
        let pts: Vec<[i64; 2]> = (0..n).map(|_| [rng.random_range(0..16), rng.random_range(0..16)]).collect();
        if (0..n).any(|i| pts[i] == pts[(i + 1) % n]) {
            continue;
        }
        tried += 1;
        let prof = ClosedProfile2D::new(pts.iter().map(|p| [p[0] as f64, p[1] as f64]).collect()).unwrap();
        let mut want = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = (i + 1) % n == j || (j + 1) % n == i;
                if !adjacent && exact_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                    want.push((i, j));
                }
            }
        }
        if find_self_intersections(&prof, IntersectionStrategy::BruteForce) == want {
            agree += 1;
        }
    }
    check(
        bow_ok && open_ok && agree == 1000,
        format!("bow-tie {bow_ok}, open tetrahedron {open_ok}, oracle agreement {agree}/1000"),
    )
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_geoop")).args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn tree_hashes(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(dir: &Path, root: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                walk(&p, root, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().display().to_string();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

fn c14_reproducibility() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let cfg = d.join("config.json");
    std::fs::write(
        &cfg,
        r#"{"seed": 5, "sensitivity": {"n": 64}, "reduce": {"samples": 40}, "gen_airfoils": {"n": 12},
            "surrogate": {"combos": ["P", "P+M"], "kernels": ["RBF"]}}"#,
    )
    .map_err(|e| e.to_string())?;
    let c = cfg.to_str().unwrap();
    let p = |s: &str| d.join(s).display().to_string();
    run_cli(&["--config", c, "--out", &p("feat"), "features", "--generate-airfoils", "40"])?;
    let feats = p("feat/features.csv");
    let table = std::fs::read_to_string(&feats).map_err(|e| e.to_string())?;
    let mut labels = String::from("design_id,y\n");
    for line in table.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let y: f64 = f[1].parse::<f64>().unwrap() + 2.0 * f[3].parse::<f64>().unwrap();
        labels.push_str(&format!("{},{y}\n", f[0]));
    }
    std::fs::write(d.join("labels.csv"), labels).map_err(|e| e.to_string())?;
    let lab = p("labels.csv");
    let commands: Vec<(&str, Vec<String>)> = vec![
        ("features", vec!["features".into(), "--generate-airfoils".into(), "40".into()]),
        ("gen-airfoils", vec!["gen-airfoils".into()]),
        ("reduce", vec!["reduce".into(), feats.clone()]),
        ("sensitivity", vec!["sensitivity".into()]),
        ("surrogate", vec!["surrogate".into(), feats.clone(), lab.clone()]),
        ("quality", vec!["quality".into(), feats.clone(), feats.clone()]),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, args) in &commands {
        let mut trees = Vec::new();
        for (run, jobs) in [("a", "1"), ("b", "4")] {
            let out = p(&format!("{name}_{run}"));
            let mut full: Vec<&str> = vec!["--config", c, "--out", &out, "--jobs", jobs];
            full.extend(args.iter().map(String::as_str));
            run_cli(&full)?;
            trees.push(tree_hashes(Path::new(&out)));
        }
        let same = trees[0] == trees[1];
        ok &= same && !trees[0].is_empty();
        notes.push(format!("{name} {}", if same { "identical" } else { "DIFFERS" }));
    }
    check(ok, format!("{} commands run twice; {}", commands.len(), notes.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("moments exactness on the unit cube", c1_cube_moments),
        ("divergence-form consistency", c2_divergence_axes),
        ("SAC moment identity", c3_sac_identity),
        ("discrete Gauss-Bonnet", c4_gauss_bonnet),
        ("parametric curvature", c5_parametric_curvature),
        ("Parseval and circle spectrum", c6_parseval),
        ("sectional 3D Fourier descriptors", c7_sectional_fd),
        ("Sobol indices on Ishigami", c8_ishigami),
        ("KLE retention and round trip", c9_kle),
        ("GPR regression and determinism", c10_gpr),
        ("GO augmentation of surrogates", c11_go_augmentation),
        ("DPP loss term", c12_dpp),
        ("validity checks", c13_validity),
        ("CLI reproducibility", c14_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
