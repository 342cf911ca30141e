//! The six subcommands. Each writes `config.json` first and `manifest.json`
//! last; per-design failures go to `errors.csv`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use geoop::featureset::{assemble_go, build_matrix, lhs_sample, ComboSpec, GoVector, Standardisation};
use geoop::quality::{batch_scores, build_dpp_kernel, dpp_loss_term, fit_quality_standardisation, go_quality};
use geoop::sensitivity::{compare_index_vectors, evaluate_one, saltelli_design, select_features, study_from_records};
use geoop::shapes::{generate_airfoil, AirfoilParams, PARAM_RANGES};
use geoop::shapes::io::{parse_mesh, read_uiuc_dat, write_uiuc_dat, MeshFormat};
use geoop::shapes::Design;
use geoop::subspace::{
    decode_polyline, diversity_score, fit_kle_rows, median_pairwise_distance, reconstruct, sample_latent,
    validity_rate,
};
use geoop::surrogate::ablation_combo;

use crate::config::{parse_combos, StudyConfig};
use crate::features::{load_features, table, FeatureSidecar, ParamKind, FEATURES_FILE, SIDECAR_FILE};
use crate::output::{fmt_f64, parse_f64, read_csv, OutputDir};
use crate::{CliError, Command};

const ERRORS_FILE: &str = "errors.csv";

#[derive(Debug, Clone)]
struct Failure {
    design_id: String,
    source: String,
    code: String,
    message: String,
}

fn write_errors(out: &mut OutputDir, failures: &[Failure]) -> Result<(), CliError> {
    let header: Vec<String> = ["design_id", "source", "code", "message"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = failures
        .iter()
        .map(|f| vec![f.design_id.clone(), f.source.clone(), f.code.clone(), f.message.clone()])
        .collect();
    out.write_csv(ERRORS_FILE, &header, &rows)
}

fn core(e: geoop::Error) -> CliError {
    CliError::from_core(e)
}

pub fn dispatch(command: &Command, cfg: &StudyConfig, out_dir: &Path) -> Result<(), CliError> {
    let mut out = OutputDir::create(out_dir)?;
    out.write_json("config.json", cfg)?;
    let result = match command {
        Command::Features { .. } => features(cfg, &mut out),
        Command::Reduce { features, .. } => reduce(cfg, features, &mut out),
        Command::Sensitivity { .. } => sensitivity(cfg, &mut out),
        Command::Surrogate { features, labels, .. } => surrogate(cfg, features, labels, &mut out),
        Command::Quality { generated, training, .. } => quality(cfg, generated, training, &mut out),
        Command::GenAirfoils { .. } => gen_airfoils(cfg, &mut out),
    };
    let finished = out.finish();
    result.and(finished)
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{} is not a readable file", path.display())))
    }
}

#[derive(Debug, Clone)]
enum Source {
    Airfoil(Vec<f64>),
    Profile(PathBuf),
    Mesh(PathBuf),
}

fn classify(path: &Path) -> Option<Source> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    match ext.as_str() {
        "dat" => Some(Source::Profile(path.to_path_buf())),
        "obj" | "stl" => Some(Source::Mesh(path.to_path_buf())),
        _ => None,
    }
}

fn collect_inputs(inputs: &[String]) -> Result<Vec<(String, Source)>, CliError> {
    let mut files = Vec::new();
    for input in inputs {
        let path = PathBuf::from(input);
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(&path)
                .map_err(|e| CliError::Config(format!("{input}: {e}")))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && classify(p).is_some())
                .collect();
            entries.sort();
            files.extend(entries);
        } else if path.is_file() {
            if classify(&path).is_none() {
                return Err(CliError::Config(format!("{input}: unsupported file type")));
            }
            files.push(path);
        } else {
            return Err(CliError::Config(format!("{input}: no such file or directory")));
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(files.len());
    for f in files {
        let id = f.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_default();
        if !seen.insert(id.clone()) {
            return Err(CliError::Config(format!("duplicate design id {id:?}")));
        }
        out.push((id, classify(&f).unwrap()));
    }
    Ok(out)
}

fn source_label(s: &Source) -> String {
    match s {
        Source::Airfoil(_) => "generated".into(),
        Source::Profile(p) | Source::Mesh(p) => p.display().to_string(),
    }
}

fn load_design(source: &Source, cfg: &StudyConfig) -> geoop::Result<Design> {
    match source {
        Source::Airfoil(x) => Ok(Design::Profile(generate_airfoil(
            &AirfoilParams::from_slice(x)?,
            cfg.go.profile_points,
        )?)),
        Source::Profile(p) => Ok(Design::Profile(read_uiuc_dat(p)?.1)),
        Source::Mesh(p) => {
            let bytes = std::fs::read(p).map_err(|e| geoop::Error::Io(e.to_string()))?;
            let format = MeshFormat::detect(p, &bytes)
                .ok_or_else(|| geoop::Error::Io(format!("{}: unknown mesh format", p.display())))?;
            parse_mesh(&bytes, format).map(Design::Mesh)
        }
    }
}

fn one_go(id: &str, source: &Source, cfg: &StudyConfig) -> Result<GoVector, Failure> {
    let fail = |code: String, message: String| Failure {
        design_id: id.to_string(),
        source: source_label(source),
        code,
        message,
    };
    let design = load_design(source, cfg).map_err(|e| fail(e.code().into(), e.to_string()))?;
    let verdict = design.validity();
    if !verdict.valid {
        return Err(fail(verdict.codes(), "invalid design".into()));
    }
    let params = match source {
        Source::Airfoil(x) => Some(x.as_slice()),
        _ => None,
    };
    assemble_go(id, &design, params, &cfg.go).map_err(|e| fail(e.code().into(), e.to_string()))
}

fn features(cfg: &StudyConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let fc = &cfg.features;
    let sources: Vec<(String, Source)> = match (fc.generate_airfoils, fc.inputs.is_empty()) {
        (Some(_), false) => {
            return Err(CliError::Config("give either inputs or generate_airfoils, not both".into()))
        }
        (Some(n), true) => lhs_sample(PARAM_RANGES.len(), n, cfg.seed)
            .into_iter()
            .enumerate()
            .map(|(i, x)| (format!("airfoil_{i:04}"), Source::Airfoil(x)))
            .collect(),
        (None, false) => collect_inputs(&fc.inputs)?,
        (None, true) => return Err(CliError::Config("no inputs".into())),
    };
    let meshes = sources.iter().filter(|(_, s)| matches!(s, Source::Mesh(_))).count();
    if meshes != 0 && meshes != sources.len() {
        return Err(CliError::Config("inputs mix profiles and meshes".into()));
    }
    let results: Vec<Result<GoVector, Failure>> = sources
        .par_iter()
        .map(|(id, s)| one_go(id, s, cfg))
        .collect();
    let mut gos = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(g) => gos.push(g),
            Err(f) => failures.push(f),
        }
    }
    let (header, rows) = table(&gos)?;
    out.write_csv(FEATURES_FILE, &header, &rows)?;
    write_errors(out, &failures)?;
    let p_cols = header.iter().filter(|h| h.starts_with('p')).count();
    let sidecar = FeatureSidecar {
        dim: if meshes > 0 { 3 } else { 2 },
        param_kind: if p_cols == 0 {
            ParamKind::None
        } else if fc.generate_airfoils.is_some() {
            ParamKind::AirfoilParams
        } else {
            ParamKind::Coordinates
        },
        param_columns: p_cols,
        columns: header[1..].to_vec(),
        moment_order: cfg.go.moment_order,
        moment_variant: cfg.go.moment_variant,
        go: cfg.go.clone(),
        n_inputs: sources.len(),
        n_ok: gos.len(),
        n_failed: failures.len(),
    };
    out.write_json(SIDECAR_FILE, &sidecar)?;
    if gos.is_empty() {
        return Err(CliError::Runtime(format!("all {} designs failed", sources.len())));
    }
    Ok(())
}

fn decode_params(kind: ParamKind, p: &[f64]) -> geoop::Result<Design> {
    match kind {
        ParamKind::AirfoilParams => Ok(Design::Profile(generate_airfoil(
            &AirfoilParams::from_slice(p)?,
            geoop::shapes::UNIFORM_CARDINALITY,
        )?)),
        ParamKind::Coordinates => decode_polyline(p),
        ParamKind::None => Err(geoop::Error::InvalidArgument("no parameters to decode".into())),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

#[derive(Serialize)]
struct KleArtifact<'a> {
    combo: String,
    columns: &'a [String],
    standardisation: &'a Standardisation,
    basis: &'a geoop::subspace::KleBasis,
}

fn reduce(cfg: &StudyConfig, path: &Path, out: &mut OutputDir) -> Result<(), CliError> {
    require_file(path)?;
    let (gos, sidecar) = load_features(path)?;
    let kind = sidecar.as_ref().map_or(ParamKind::None, |s| s.param_kind);
    let combos = parse_combos(&cfg.reduce.combos)?;
    let header: Vec<String> = [
        "combo",
        "n_designs",
        "n_features",
        "retained_dims",
        "retained_fraction",
        "total_variance",
        "kernel_length",
        "diversity_data",
        "diversity_samples",
        "n_samples",
        "invalid_rate",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = Vec::new();
    for combo in combos {
        let m = build_matrix(&gos, combo, true).map_err(core)?;
        let std = m.standardisation.clone().expect("standardised matrix");
        let basis = fit_kle_rows(&m.rows, cfg.reduce.threshold).map_err(core)?;
        let latents = sample_latent(&basis, cfg.reduce.samples, cfg.seed, cfg.reduce.sample_scale);
        let samples: Vec<Vec<f64>> = latents
            .iter()
            .map(|z| reconstruct(&basis, z))
            .collect::<geoop::Result<_>>()
            .map_err(core)?;
        let len = median_pairwise_distance(&m.rows);
        let p_cols = m.column_names.iter().filter(|c| c.starts_with('p')).count();
        let invalid = (combo.include_p && kind != ParamKind::None && !samples.is_empty()).then(|| {
            validity_rate(&latents, &basis, |row| decode_params(kind, &std.invert(row)[..p_cols])).invalid_rate
        });
        let label = combo.label();
        rows.push(vec![
            label.clone(),
            m.n_rows().to_string(),
            m.n_cols().to_string(),
            basis.retained_dims.to_string(),
            fmt_f64(basis.retained_fraction(basis.retained_dims)),
            fmt_f64(basis.total_variance()),
            fmt_f64(len),
            fmt_f64(diversity_score(&m.rows, len)),
            opt((samples.len() >= 2).then(|| diversity_score(&samples, len))),
            samples.len().to_string(),
            opt(invalid),
        ]);
        let artifact = KleArtifact {
            combo: label.clone(),
            columns: &m.column_names,
            standardisation: &std,
            basis: &basis,
        };
        out.write_json(&format!("kle/{label}.json"), &artifact)?;
    }
    out.write_csv("reduce.csv", &header, &rows)
}

#[derive(Serialize)]
struct SensitivitySummary {
    n: usize,
    d: usize,
    evaluations: usize,
    failed_evaluations: usize,
    excluded_rows: usize,
    epsilons: Vec<f64>,
    use_total: bool,
    reports: Vec<String>,
    failures: BTreeMap<String, String>,
}

fn sensitivity(cfg: &StudyConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let sc = &cfg.sensitivity;
    let d = PARAM_RANGES.len();
    let design = saltelli_design(d, sc.n, cfg.seed).map_err(core)?;
    let rows = design.evaluation_rows();
    let generator = |x: &[f64]| -> geoop::Result<Design> {
        Ok(Design::Profile(generate_airfoil(&AirfoilParams::from_slice(x)?, cfg.go.profile_points)?))
    };
    let records: Vec<Option<GoVector>> = rows
        .par_iter()
        .enumerate()
        .map(|(i, x)| evaluate_one(i, x, &generator, &cfg.go))
        .collect();
    let failed = records.iter().filter(|r| r.is_none()).count();
    let study = study_from_records(&design, &records).map_err(core)?;
    let labels: Vec<String> = ComboSpec::go_only().iter().map(ComboSpec::label).collect();
    for (label, report) in &study.reports {
        let mut header: Vec<String> = ["parameter", "name", "first_order", "total_order", "first_order_raw", "total_order_raw"]
            .map(String::from)
            .to_vec();
        let masks: Vec<Vec<bool>> = sc.epsilons.iter().map(|&e| select_features(report, e, sc.use_total)).collect();
        header.extend(sc.epsilons.iter().map(|e| format!("selected_eps_{}", fmt_f64(*e))));
        let body: Vec<Vec<String>> = (0..d)
            .map(|i| {
                let mut r = vec![
                    i.to_string(),
                    PARAM_RANGES[i].name.to_string(),
                    fmt_f64(report.first_order[i]),
                    fmt_f64(report.total_order[i]),
                    fmt_f64(report.first_order_raw[i]),
                    fmt_f64(report.total_order_raw[i]),
                ];
                r.extend(masks.iter().map(|m| u8::from(m[i]).to_string()));
                r
            })
            .collect();
        out.write_csv(&format!("sobol/{label}.csv"), &header, &body)?;
    }
    let mut header = vec!["combo".to_string()];
    header.extend(labels.iter().cloned());
    let mut cos_rows = Vec::new();
    let mut mse_rows = Vec::new();
    for a in &labels {
        let mut cr = vec![a.clone()];
        let mut mr = vec![a.clone()];
        for b in &labels {
            let cmp = match (study.reports.get(a), study.reports.get(b)) {
                (Some(ra), Some(rb)) => compare_index_vectors(ra.chosen(sc.use_total), rb.chosen(sc.use_total)).ok(),
                _ => None,
            };
            cr.push(opt(cmp.as_ref().and_then(|c| c.cosine)));
            mr.push(opt(cmp.map(|c| c.mse)));
        }
        cos_rows.push(cr);
        mse_rows.push(mr);
    }
    out.write_csv("cosine.csv", &header, &cos_rows)?;
    out.write_csv("mse.csv", &header, &mse_rows)?;
    out.write_json(
        "sensitivity.json",
        &SensitivitySummary {
            n: study.n,
            d: study.d,
            evaluations: rows.len(),
            failed_evaluations: failed,
            excluded_rows: study.excluded,
            epsilons: sc.epsilons.clone(),
            use_total: sc.use_total,
            reports: study.reports.keys().cloned().collect(),
            failures: study.failures.clone(),
        },
    )
}

fn surrogate(cfg: &StudyConfig, features: &Path, labels: &Path, out: &mut OutputDir) -> Result<(), CliError> {
    require_file(features)?;
    require_file(labels)?;
    let (gos, _) = load_features(features)?;
    let table = read_csv(labels)?;
    if table.header.len() < 2 || table.header[0] != "design_id" {
        return Err(CliError::Runtime(format!("{}: expected design_id and a label column", labels.display())));
    }
    let mut by_id = BTreeMap::new();
    for (line, row) in table.rows.iter().enumerate() {
        by_id.insert(row[0].clone(), parse_f64(&row[1], labels, line + 1)?);
    }
    let mut kept = Vec::new();
    let mut y = Vec::new();
    let mut failures = Vec::new();
    for g in gos {
        match by_id.get(&g.design_id) {
            Some(v) if v.is_finite() => {
                y.push(*v);
                kept.push(g);
            }
            other => failures.push(Failure {
                design_id: g.design_id.clone(),
                source: labels.display().to_string(),
                code: if other.is_some() { "NAN_INPUT" } else { "MISSING_LABEL" }.into(),
                message: "no usable label".into(),
            }),
        }
    }
    write_errors(out, &failures)?;
    let combos = parse_combos(&cfg.surrogate.combos)?;
    let grid: Vec<_> = cfg
        .surrogate
        .kernels
        .iter()
        .flat_map(|&k| cfg.surrogate.mean_fns.iter().map(move |&m| (k, m)))
        .collect();
    let rows: Vec<_> = combos
        .par_iter()
        .map(|&c| ablation_combo(&kept, &y, c, &grid, cfg.seed))
        .collect::<geoop::Result<_>>()
        .map_err(core)?;
    let header: Vec<String> = [
        "combo", "kernel", "mean_fn", "validation_r2", "r2", "mape", "rmse", "mape_floored", "n_train", "n_test", "seed",
    ]
    .map(String::from)
    .to_vec();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.combo.clone(),
                r.kernel.name().to_string(),
                format!("{:?}", r.mean_fn).to_ascii_uppercase(),
                fmt_f64(r.validation_r2),
                fmt_f64(r.metrics.r2),
                fmt_f64(r.metrics.mape),
                fmt_f64(r.metrics.rmse),
                r.metrics.mape_floored.to_string(),
                r.n_train.to_string(),
                r.n_test.to_string(),
                r.seed.to_string(),
            ]
        })
        .collect();
    out.write_csv("ablation.csv", &header, &body)
}

#[derive(Serialize)]
struct QualityRecord {
    diversity: f64,
    quality: f64,
    novelty: f64,
    n_generated: usize,
    n_training: usize,
    gamma0: f64,
    kernel_length: f64,
    dpp_loss: Option<f64>,
    dpp_degenerate: Option<bool>,
    position_space: &'static str,
}

fn quality(cfg: &StudyConfig, generated: &Path, training: &Path, out: &mut OutputDir) -> Result<(), CliError> {
    require_file(generated)?;
    require_file(training)?;
    let (gen, _) = load_features(generated)?;
    let (train, _) = load_features(training)?;
    if gen.is_empty() || train.is_empty() {
        return Err(CliError::Runtime("quality needs non-empty generated and training sets".into()));
    }
    let sidecar = fit_quality_standardisation(&train).map_err(core)?;
    let qualities: Vec<f64> = gen
        .iter()
        .map(|g| go_quality(g, &sidecar))
        .collect::<geoop::Result<_>>()
        .map_err(core)?;
    let p_len = |g: &GoVector| g.p.as_ref().map(Vec::len);
    let n0 = p_len(&train[0]);
    let use_p = n0.is_some() && gen.iter().chain(&train).all(|g| p_len(g) == n0);
    let combo = if use_p { ComboSpec::parse("P") } else { ComboSpec::parse("M+K+FT") }.map_err(core)?;
    let raw = |set: &[GoVector]| -> Result<Vec<Vec<f64>>, CliError> {
        set.iter()
            .map(|g| geoop::featureset::flatten(g, &combo))
            .collect::<geoop::Result<_>>()
            .map_err(core)
    };
    let (raw_gen, raw_train) = (raw(&gen)?, raw(&train)?);
    let st = Standardisation::fit(&raw_train);
    let zg: Vec<Vec<f64>> = raw_gen.iter().map(|r| st.apply(r)).collect();
    let zt: Vec<Vec<f64>> = raw_train.iter().map(|r| st.apply(r)).collect();
    let len = cfg.quality.kernel_length.unwrap_or_else(|| median_pairwise_distance(&zt));
    let scores = batch_scores(&zg, &zt, &qualities, len, cfg.quality.gamma0).map_err(core)?;
    let dpp = if zg.len() >= 2 {
        Some(dpp_loss_term(&build_dpp_kernel(&zg, &qualities, cfg.quality.gamma0, len).map_err(core)?))
    } else {
        None
    };
    out.write_json(
        "quality.json",
        &QualityRecord {
            diversity: scores.diversity,
            quality: scores.quality,
            novelty: scores.novelty,
            n_generated: scores.n_generated,
            n_training: scores.n_training,
            gamma0: scores.gamma0,
            kernel_length: scores.kernel_length,
            dpp_loss: dpp.map(|d| d.value),
            dpp_degenerate: dpp.map(|d| d.degenerate),
            position_space: if use_p { "P" } else { "M+K+FT" },
        },
    )
}

fn gen_airfoils(cfg: &StudyConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let g = &cfg.gen_airfoils;
    let xs = lhs_sample(PARAM_RANGES.len(), g.n, cfg.seed);
    let built: Vec<_> = xs
        .par_iter()
        .map(|x| AirfoilParams::from_slice(x).and_then(|p| generate_airfoil(&p, g.points)))
        .collect();
    let mut header = vec!["design_id".to_string()];
    header.extend(PARAM_RANGES.iter().map(|r| r.name.to_string()));
    header.extend(["valid".to_string(), "defects".to_string()]);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (i, (x, b)) in xs.iter().zip(built).enumerate() {
        let id = format!("airfoil_{i:04}");
        match b {
            Ok(profile) => {
                let verdict = Design::Profile(profile.clone()).validity();
                out.write_bytes(&format!("airfoils/{id}.dat"), write_uiuc_dat(&id, &profile).as_bytes())?;
                let mut r = vec![id];
                r.extend(x.iter().map(|v| fmt_f64(*v)));
                r.push(u8::from(verdict.valid).to_string());
                r.push(verdict.codes());
                rows.push(r);
            }
            Err(e) => failures.push(Failure {
                design_id: id,
                source: "generated".into(),
                code: e.code().into(),
                message: e.to_string(),
            }),
        }
    }
    out.write_csv("params.csv", &header, &rows)?;
    write_errors(out, &failures)?;
    if rows.is_empty() {
        return Err(CliError::Runtime("no aerofoil could be built".into()));
    }
    Ok(())
}
