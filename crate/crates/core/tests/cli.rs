use std::path::Path;
use std::process::Command;

use isoglide::atlas::{
    analyze_design, point_in_polygon, sample_joint_space, useful_workspace_atlas, useful_zone, AtlasOptions,
    CompareProtocol, Rect,
};
use isoglide::cli::run;
use isoglide::{BranchSelector, DesignParams, Point2};
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["isoglide"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_isotropic_posture() {
    let o = cli(&["analyze", "preset:isotropic", "--pose", "2,0"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o.stdout);
    assert_eq!(v["singularity"], "regular");
    assert_eq!(v["jinv_is_identity"], true);
    assert_eq!(v["isotropic"], true);
    for k in ["kappaA", "kappaB", "kappaJinv", "lambda1", "lambda2", "detA", "detB"] {
        assert_eq!(v[k].as_f64(), Some(1.0), "{k}");
    }
    assert_eq!(v["rho"], serde_json::json!([1.0, 1.0]));
    assert!(v["theta1"].as_f64().unwrap().abs() < 1e-12);
    assert!((v["theta2"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
}

#[test]
fn analyze_serial_singular_assembly() {
    let o = cli(&["analyze", "preset:isotropic", "--rho", "1,1", "--branch", "-1"]);
    assert_eq!(o.code, 2);
    let v = json(&o.stdout);
    assert_eq!(v["singularity"], "serial");
    assert_eq!(v["p"], serde_json::json!([1.0, -1.0]));
    assert_eq!(v["Jinv"], Value::Null);
    assert_eq!(v["lambda1"], Value::Null);
}

#[test]
fn analyze_parallel_singular_posture() {
    // bars pointing in opposite directions put C, P and D on one line
    let design = DesignParams::isotropic(2.0, 1.0).unwrap();
    let q = isoglide::kinematics::posture_from_bar_angles(&design, 0.3, 0.3 + std::f64::consts::PI).unwrap();
    let b = q.branch(&design);
    let pose = format!("{:?},{:?}", q.p.x, q.p.y);
    let branch = format!("{},{},1", b.working_mode_1.as_i32(), b.working_mode_2.as_i32());
    let o = cli(&["analyze", "preset:isotropic", "--pose", &pose, "--branch", &branch]);
    assert_eq!(o.code, 2, "{}", o.stdout);
    let v = json(&o.stdout);
    assert_eq!(v["singularity"], "parallel");
    assert_eq!(v["J"], Value::Null);
    assert!(v["Jinv"].is_array());
}

#[test]
fn analyze_usage_errors() {
    let o = cli(&["analyze", "preset:isotropic", "--pose", "9,9"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("leg 1"), "{}", o.stderr);
    assert!(o.stdout.is_empty());

    let o = cli(&["analyze", "preset:isotropic", "--pose", "2,0", "--rho", "1,1"]);
    assert_eq!(o.code, 1);
    let o = cli(&["analyze", "preset:isotropic"]);
    assert_eq!(o.code, 1);
    let o = cli(&["analyze", "preset:isotropic", "--pose", "2"]);
    assert_eq!(o.code, 1);
    let o = cli(&["analyze", "preset:nonesuch", "--pose", "2,0"]);
    assert_eq!(o.code, 1);
    let o = cli(&["analyze", "preset:isotropic", "--rho", "9,9"]);
    assert_eq!(o.code, 1);
}

#[test]
fn analyze_malformed_config() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    for text in [
        r#"{"schema": 1, "preset": "isotropic", "unknown": 1}"#,
        r#"{"schema": 1, "preset": "isotropic""#,
        r#"{"preset": "isotropic"}"#,
    ] {
        std::fs::write(&bad, text).unwrap();
        let o = cli(&["analyze", path_str(&bad), "--pose", "2,0"]);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("schema"), "{}", o.stderr);
    }
    let o = cli(&["analyze", "/nonexistent/design.json", "--pose", "2,0"]);
    assert_eq!(o.code, 1);
}

#[test]
fn analyze_reads_degree_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("iso.json");
    std::fs::write(
        &cfg,
        r#"{"schema": 1, "a": [0, 0], "b": [2, -2], "alpha1": 0, "alpha2": 90, "angle_unit": "deg", "L1": 1, "L2": 1}"#,
    )
    .unwrap();
    let from_file = cli(&["analyze", path_str(&cfg), "--pose", "2.3,0.2"]);
    let from_preset = cli(&["analyze", "preset:isotropic", "--pose", "2.3,0.2"]);
    assert_eq!(from_file.code, 0);
    assert_eq!(from_file.stdout, from_preset.stdout);
}

#[test]
fn map_smoke_grid() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("m");
    let o = cli(&["map", "preset:isotropic", "--res", "3", "--out", path_str(&prefix)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let csv = std::fs::read_to_string(dir.path().join("m.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "u,v,status,kappaA,kappaB,lambda1,lambda2");
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 7));
    let summary = json(&std::fs::read_to_string(dir.path().join("m.summary.json")).unwrap());
    assert_eq!(summary["cells"], 9);
    assert!(summary["feasible_fraction"].is_number());
}

#[test]
fn map_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for space in ["joint", "work"] {
        let (a, b) = (dir.path().join(format!("{space}a")), dir.path().join(format!("{space}b")));
        for p in [&a, &b] {
            let o = cli(&["map", "preset:isotropic", "--space", space, "--res", "40", "--out", path_str(p)]);
            assert_eq!(o.code, 0, "{}", o.stderr);
        }
        for ext in [".csv", ".summary.json"] {
            let read = |p: &Path| std::fs::read(format!("{}{ext}", p.display())).unwrap();
            assert_eq!(read(&a), read(&b), "{space}{ext}");
        }
    }
}

#[test]
fn map_summary_matches_library_zone() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("iso");
    let o = cli(&["map", "preset:isotropic", "--res", "201", "--out", path_str(&prefix)]);
    assert_eq!(o.code, 0);
    let summary = json(&std::fs::read_to_string(dir.path().join("iso.summary.json")).unwrap());

    let design = DesignParams::isotropic(2.0, 1.0).unwrap();
    let atlas = sample_joint_space(
        &design,
        BranchSelector::default(),
        Rect::strokes(&design),
        (201, 201),
        AtlasOptions::default(),
    )
    .unwrap();
    let zone = useful_zone(&atlas).unwrap();
    let z = &summary["zone"];
    assert_eq!(z["cells"]["row"], zone.cells.row);
    assert_eq!(z["cells"]["col"], zone.cells.col);
    assert_eq!(z["cells"]["size"], zone.cells.size);
    assert!((z["side"].as_f64().unwrap() - zone.side).abs() <= 1e-11 * zone.side);
    assert!((summary["feasible_fraction"].as_f64().unwrap() - atlas.feasible_fraction()).abs() <= 1e-11);
}

#[test]
fn map_unwritable_path_fails() {
    let o = cli(&["map", "preset:isotropic", "--res", "3", "--out", "/nonexistent/dir/m"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("cannot write"));
    let o = cli(&["map", "preset:isotropic", "--res", "3", "--bounds", "5,6,0,1", "--out", "/tmp/x"]);
    assert_eq!(o.code, 1, "joint bounds outside the strokes");
}

fn ratio(res: &str) -> f64 {
    let o = cli(&["compare", "preset:isotropic", "preset:biglide", "--res", res]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stderr.contains("square area ratio"));
    json(&o.stdout)["area_ratio"].as_f64().unwrap()
}

#[test]
fn compare_presets() {
    let coarse = ratio("21");
    let fine = ratio("201");
    assert!(fine > 1.0 && coarse > 1.0);
    assert!((coarse - fine).abs() <= 0.25 * fine, "{coarse} vs {fine}");

    let o = cli(&["compare", "preset:isotropic", "preset:isotropic", "--res", "41"]);
    assert_eq!(json(&o.stdout)["area_ratio"].as_f64(), Some(1.0));
}

#[test]
fn compare_empty_zone_names_the_design() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tight.json");
    std::fs::write(&cfg, r#"{"schema": 1, "preset": "isotropic", "lambda_lo": 5, "lambda_hi": 6}"#).unwrap();
    let o = cli(&["compare", path_str(&cfg), "preset:biglide", "--res", "21"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("design A") && o.stderr.contains("tight.json"), "{}", o.stderr);

    let o = cli(&["compare", "preset:isotropic", path_str(&cfg), "--res", "21"]);
    assert_eq!(o.code, 0, "bounds come from the first design");
}

fn svg_doc(text: &str) -> roxmltree::Document<'_> {
    roxmltree::Document::parse(text).expect("well-formed SVG")
}

#[test]
fn isocurves_levels_and_well_formedness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.svg");
    let levels = "0.4,0.6,0.8,1,1.2,1.4,1.6";
    let o = cli(&["isocurves", "preset:isotropic", "--field", "lambda1", "--levels", levels, "--out", path_str(&out)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    let doc = svg_doc(&text);
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("viewBox"), Some("0 0 1000 1000"));

    // levels strictly inside the field range over the region must be drawn
    let design = DesignParams::isotropic(2.0, 1.0).unwrap();
    let (ja, outcome) = analyze_design(&design, &CompareProtocol::default()).unwrap();
    let wa = useful_workspace_atlas(&ja, &outcome.joint_zone, &outcome.region, 201).unwrap();
    let values: Vec<f64> = wa
        .cells
        .iter()
        .filter(|c| point_in_polygon(c.coords, &outcome.region.boundary))
        .filter_map(|c| c.report.map(|r| r.lambda1))
        .collect();
    let (lo, hi) = values.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let drawn: Vec<f64> =
        doc.descendants().filter_map(|n| n.attribute("data-level")).map(|s| s.parse().unwrap()).collect();
    for level in [0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6] {
        if lo < level && level < hi {
            assert!(drawn.contains(&level), "level {level} within [{lo}, {hi}] not drawn");
        }
    }
    assert!(drawn.iter().all(|l| *l > lo && *l < hi));

    let csv = std::fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert!(csv.starts_with("curve,level,closed,x,y\n"));
    assert!(csv.lines().count() > 1);
}

#[test]
fn isocurves_empty_levels_draw_outline_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.svg");
    let o = cli(&["isocurves", "preset:isotropic", "--levels", "", "--res", "61", "--out", path_str(&out)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    let doc = svg_doc(&text);
    let classes: Vec<&str> =
        doc.descendants().filter(|n| n.has_tag_name("path")).filter_map(|n| n.attribute("class")).collect();
    assert!(classes.contains(&"boundary"));
    assert!(!classes.contains(&"iso-curve"));
}

#[test]
fn isocurves_unknown_field() {
    let o = cli(&["isocurves", "preset:isotropic", "--field", "lambda3", "--out", "/tmp/never.svg"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("lambda3"));
    assert!(!Path::new("/tmp/never.svg").exists());
}

#[test]
fn low_amplification_curve_hugs_the_region_boundary() {
    let design = DesignParams::isotropic(2.0, 1.0).unwrap();
    let (ja, outcome) = analyze_design(&design, &CompareProtocol::default()).unwrap();
    let wa = useful_workspace_atlas(&ja, &outcome.joint_zone, &outcome.region, 201).unwrap();
    let b = &outcome.region.boundary;
    let dist = |p: Point2| {
        b.windows(2)
            .map(|w| {
                let (a, c) = (w[0], w[1]);
                let t = ((p - a).dot(c - a) / (c - a).norm_squared()).clamp(0.0, 1.0);
                (a + (c - a) * t - p).norm()
            })
            .fold(f64::MAX, f64::min)
    };
    let depth = wa.cells.iter().filter(|c| point_in_polygon(c.coords, b)).map(|c| dist(c.coords)).fold(0.0, f64::max);
    let curves = isoglide::atlas::iso_value_curves_within(&wa, isoglide::atlas::Field::Lambda1, &[0.4, 1.6], b);
    assert!(!curves.is_empty());
    for c in &curves {
        let far = c.points.iter().map(|&p| dist(p)).fold(0.0, f64::max);
        assert!(far <= 0.1 * depth, "level {} reaches {far} of depth {depth}", c.level);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_isoglide");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["analyze", "preset:isotropic", "--pose", "2,0"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(json(std::str::from_utf8(&ok.stdout).unwrap())["jinv_is_identity"] == true);
    assert_eq!(status(&["analyze", "preset:isotropic", "--rho", "1,1", "--branch", "-1"]).status.code(), Some(2));
    assert_eq!(status(&["analyze", "preset:isotropic", "--pose", "9,9"]).status.code(), Some(1));
    assert_eq!(status(&["bogus"]).status.code(), Some(1));
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}
