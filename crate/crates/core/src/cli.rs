//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage, configuration or I/O errors and
//! unreachable poses, 2 on singular postures and empty useful zones.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::atlas::{
    analyze_design, compare_designs, iso_value_curves_within, largest_feasible_square, map_zone_to_workspace,
    sample_joint_space, sample_workspace, useful_workspace_atlas, useful_zone, AtlasOptions, CellStatus,
    CompareProtocol, DesignOutcome, Field, GridAtlas, Rect, Space, ZoneResult,
};
use crate::config::{self, LoadedConfig};
use crate::error::Error;
use crate::format::{fmt_g, to_json};
use crate::jacobian::{SingularityClass, DEFAULT_SINGULARITY_TOL};
use crate::kinematics::{forward_kinematics, inverse_kinematics, BranchSelector, DesignParams, ManipConfig, Sign};
use crate::linalg::{Mat2, Point2};
use crate::manipulability::ManipReport;
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;

/// Perimeter samples per zone edge when mapping to the workspace.
const PERIMETER_SAMPLES: usize = 200;
const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "isoglide", version, about = "Planar two-prismatic-actuator mechanism analysis")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kinematic and conditioning report for one posture.
    Analyze(AnalyzeArgs),
    /// Grid atlas of joint space or workspace.
    Map(MapArgs),
    /// Inscribed useful-workspace squares of two designs.
    Compare(CompareArgs),
    /// Iso-value curves over the useful workspace, as SVG and CSV.
    Isocurves(IsocurvesArgs),
}

/// Design source: a JSON config path or `preset:isotropic` / `preset:biglide`.
#[derive(Debug, Args)]
struct DesignArg {
    config: String,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    design: DesignArg,
    /// End-point position `x,y` (inverse kinematics).
    #[arg(long, value_parser = parse_pair, conflicts_with = "rho", required_unless_present = "rho", allow_hyphen_values = true)]
    pose: Option<(f64, f64)>,
    /// Actuator strokes `r1,r2` (forward kinematics).
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    rho: Option<(f64, f64)>,
    /// Branch: `s` sets the assembly mode, `w1,w2,a` sets all three signs.
    #[arg(long, value_parser = parse_branch, default_value = "1", allow_hyphen_values = true)]
    branch: BranchSelector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Joint,
    Work,
}

#[derive(Debug, Args)]
struct MapArgs {
    #[command(flatten)]
    design: DesignArg,
    #[arg(long, value_enum, default_value = "joint")]
    space: SpaceArg,
    /// `u_min,u_max,v_min,v_max`; defaults to the stroke square (joint)
    /// or a box covering every reachable point (work).
    #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true)]
    bounds: Option<Rect>,
    /// Cells per side.
    #[arg(long, default_value_t = 201)]
    res: usize,
    #[arg(long, value_parser = parse_branch, default_value = "1", allow_hyphen_values = true)]
    branch: BranchSelector,
    /// Output prefix for `<prefix>.csv` and `<prefix>.summary.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CompareArgs {
    config_a: String,
    config_b: String,
    #[arg(long, default_value_t = 201)]
    res: usize,
}

#[derive(Debug, Args)]
struct IsocurvesArgs {
    #[command(flatten)]
    design: DesignArg,
    #[arg(long, value_parser = parse_field, default_value = "lambda1")]
    field: Field,
    /// Comma-separated levels; an empty list draws the outline only.
    #[arg(long, value_parser = parse_levels, default_value = "", allow_hyphen_values = true)]
    levels: Levels,
    #[arg(long, default_value_t = 201)]
    res: usize,
    /// SVG output path; polylines go to the same path with a `.csv` extension.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Debug)]
struct Levels(Vec<f64>);

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_f64).collect()
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    match parse_list(s)?.as_slice() {
        &[x, y] => Ok((x, y)),
        _ => Err(format!("expected two comma-separated numbers, got `{s}`")),
    }
}

fn parse_bounds(s: &str) -> Result<Rect, String> {
    match parse_list(s)?.as_slice() {
        &[a, b, c, d] => Rect::new(a, b, c, d).map_err(|e| e.to_string()),
        _ => Err(format!("expected u_min,u_max,v_min,v_max, got `{s}`")),
    }
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s.trim() {
        "1" | "+1" | "+" => Ok(Sign::Plus),
        "-1" | "-" | "\u{2212}1" => Ok(Sign::Minus),
        _ => Err(format!("`{s}` is not a sign (expected +1 or -1)")),
    }
}

fn parse_branch(s: &str) -> Result<BranchSelector, String> {
    let signs: Vec<Sign> = s.split(',').map(parse_sign).collect::<Result<_, _>>()?;
    match *signs.as_slice() {
        [a] => Ok(BranchSelector::with_assembly(a)),
        [w1, w2, a] => Ok(BranchSelector::new(w1, w2, a)),
        _ => Err(format!("expected `s` or `w1,w2,a`, got `{s}`")),
    }
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse(s).ok_or_else(|| format!("unknown field `{s}` (expected lambda1, lambda2, kappaA or kappaB)"))
}

fn parse_levels(s: &str) -> Result<Levels, String> {
    parse_list(s).map(Levels)
}

/// A failed command: exit code and diagnostic.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Reports go to `out`, diagnostics and tables to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Map(m) => cmd_map(m, out),
        Command::Compare(c) => cmd_compare(c, out, err),
        Command::Isocurves(i) => cmd_isocurves(i, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(source: &str) -> Result<LoadedConfig, Failure> {
    config::load(source).map_err(|e| Failure::usage(format!("{source}: {e}")))
}

fn options(cfg: &LoadedConfig) -> AtlasOptions {
    AtlasOptions { singularity_tol: DEFAULT_SINGULARITY_TOL, amplification: cfg.bounds }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::usage(format!("cannot write output: {e}")))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

#[derive(Serialize)]
struct BranchReport {
    working_mode_1: i32,
    working_mode_2: i32,
    assembly_mode: i32,
}

impl From<BranchSelector> for BranchReport {
    fn from(b: BranchSelector) -> Self {
        BranchReport {
            working_mode_1: b.working_mode_1.as_i32(),
            working_mode_2: b.working_mode_2.as_i32(),
            assembly_mode: b.assembly_mode.as_i32(),
        }
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    rho: [f64; 2],
    p: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
    theta1: f64,
    theta2: f64,
    branch: BranchReport,
    #[serde(rename = "detA")]
    det_a: f64,
    #[serde(rename = "detB")]
    det_b: f64,
    #[serde(rename = "kappaA")]
    kappa_a: f64,
    #[serde(rename = "kappaB")]
    kappa_b: f64,
    #[serde(rename = "kappaJinv")]
    kappa_jinv: f64,
    lambda1: Option<f64>,
    lambda2: Option<f64>,
    singularity: &'static str,
    isotropy_residuals: Option<[f64; 2]>,
    isotropic: bool,
    #[serde(rename = "J")]
    j: Option<[[f64; 2]; 2]>,
    #[serde(rename = "Jinv")]
    j_inv: Option<[[f64; 2]; 2]>,
    jinv_is_identity: bool,
}

fn xy(p: Point2) -> [f64; 2] {
    [p.x, p.y]
}

fn pose_for(design: &DesignParams, args: &AnalyzeArgs) -> Result<ManipConfig, Failure> {
    let (q, what) = match (args.pose, args.rho) {
        (Some((x, y)), None) => (inverse_kinematics(design, Point2::new(x, y), args.branch), "pose"),
        (None, Some(rho)) => (forward_kinematics(design, rho, args.branch), "strokes"),
        _ => return Err(Failure::usage("exactly one of --pose and --rho is required")),
    };
    q.map_err(|e| Failure::usage(format!("unreachable {what}: {e}")))
}

fn cmd_analyze(args: AnalyzeArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = load(&args.design.config)?;
    let design = cfg.design;
    let q = pose_for(&design, &args)?;
    let (report, bundle) = ManipReport::compute(&q, &design, DEFAULT_SINGULARITY_TOL);
    let amp = report.amplification;
    let body = AnalyzeReport {
        rho: [q.rho.0, q.rho.1],
        p: xy(q.p),
        c: xy(q.c),
        d: xy(q.d),
        theta1: q.theta1,
        theta2: q.theta2,
        branch: q.branch(&design).into(),
        det_a: bundle.det_a,
        det_b: bundle.det_b,
        kappa_a: report.kappa_a,
        kappa_b: report.kappa_b,
        kappa_jinv: report.kappa_jinv,
        lambda1: amp.map(|f| f.lambda1),
        lambda2: amp.map(|f| f.lambda2),
        singularity: report.class.as_str(),
        isotropy_residuals: report.isotropy_residuals.map(|(a, b)| [a, b]),
        isotropic: report.isotropic,
        j: bundle.j.map(|m| m.0),
        j_inv: bundle.j_inv.map(|m| m.0),
        jinv_is_identity: bundle.j_inv.is_some_and(|m| m.max_abs_diff(&Mat2::IDENTITY) <= IDENTITY_TOL),
    };
    emit(out, &to_json(&body))?;
    Ok(if report.class == SingularityClass::Regular { EXIT_OK } else { EXIT_SINGULAR })
}

/// Box containing every point the end point can reach.
fn reachable_box(d: &DesignParams) -> Rect {
    let pts = [
        d.a + d.axis1() * d.rho_min,
        d.a + d.axis1() * d.rho_max,
        d.b + d.axis2() * d.rho_min,
        d.b + d.axis2() * d.rho_max,
    ];
    let r = Rect::bounding(&pts).expect("four points");
    let g = d.max_bar();
    Rect { u_min: r.u_min - g, u_max: r.u_max + g, v_min: r.v_min - g, v_max: r.v_max + g }
}

fn atlas_csv(atlas: &GridAtlas) -> String {
    let mut s = String::from("u,v,status,kappaA,kappaB,lambda1,lambda2\n");
    let opt = |v: Option<f64>| v.map(fmt_g).unwrap_or_default();
    for cell in &atlas.cells {
        let r = cell.report;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt_g(cell.coords.x),
            fmt_g(cell.coords.y),
            cell.status.as_str(),
            opt(r.map(|r| r.kappa_a)),
            opt(r.map(|r| r.kappa_b)),
            opt(r.map(|r| r.lambda1)),
            opt(r.map(|r| r.lambda2)),
        );
    }
    s
}

#[derive(Serialize)]
struct MapSummary {
    space: &'static str,
    bounds: Rect,
    resolution: [usize; 2],
    branch: BranchReport,
    cells: usize,
    status_counts: std::collections::BTreeMap<&'static str, usize>,
    feasible_fraction: f64,
    /// Largest square of feasible cells; the useful zone in joint space.
    zone: Option<ZoneResult>,
    areas: MapAreas,
}

#[derive(Serialize)]
struct MapAreas {
    bounds: f64,
    feasible: f64,
    zone: Option<f64>,
    /// Workspace area enclosed by the zone's image (joint space only).
    mapped_zone: Option<f64>,
}

fn cmd_map(args: MapArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = load(&args.design.config)?;
    let design = cfg.design;
    let res = (args.res, args.res);
    let atlas = match args.space {
        SpaceArg::Joint => {
            let bounds = args.bounds.unwrap_or_else(|| Rect::strokes(&design));
            sample_joint_space(&design, args.branch, bounds, res, options(&cfg))?
        }
        SpaceArg::Work => {
            let bounds = args.bounds.unwrap_or_else(|| reachable_box(&design));
            sample_workspace(&design, args.branch, bounds, res, options(&cfg))?
        }
    };
    let zone = match atlas.space {
        Space::JointSpace => useful_zone(&atlas),
        Space::Workspace => largest_feasible_square(&atlas),
    };
    let zone = match zone {
        Ok(z) => Some(z),
        Err(Error::EmptyZone) => None,
        Err(e) => return Err(e.into()),
    };
    let mapped_zone = match (atlas.space, &zone) {
        (Space::JointSpace, Some(z)) => Some(map_zone_to_workspace(&atlas, z, PERIMETER_SAMPLES)?.area()),
        _ => None,
    };
    let mut counts = std::collections::BTreeMap::new();
    for c in &atlas.cells {
        *counts.entry(c.status.as_str()).or_insert(0) += 1;
    }
    let (cw, ch) = atlas.cell_size();
    let n_feasible = counts.get(CellStatus::Feasible.as_str()).copied().unwrap_or(0);
    let summary = MapSummary {
        space: match atlas.space {
            Space::JointSpace => "joint",
            Space::Workspace => "work",
        },
        bounds: atlas.bounds,
        resolution: [atlas.resolution.0, atlas.resolution.1],
        branch: atlas.branch.into(),
        cells: atlas.cells.len(),
        status_counts: counts,
        feasible_fraction: atlas.feasible_fraction(),
        areas: MapAreas {
            bounds: atlas.bounds.width() * atlas.bounds.height(),
            feasible: n_feasible as f64 * cw * ch,
            zone: zone.map(|z| z.area),
            mapped_zone,
        },
        zone,
    };
    let csv_path = with_suffix(&args.out, ".csv");
    let json_path = with_suffix(&args.out, ".summary.json");
    write_file(&csv_path, &atlas_csv(&atlas))?;
    write_file(&json_path, &to_json(&summary))?;
    emit(out, &format!("{}\n{}\n", csv_path.display(), json_path.display()))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct OutcomeSummary<'a> {
    source: &'a str,
    joint_zone: ZoneResult,
    feasible_fraction: f64,
    region_area: f64,
    workspace_square: ZoneResult,
}

impl<'a> OutcomeSummary<'a> {
    fn new(source: &'a str, o: &DesignOutcome) -> Self {
        OutcomeSummary {
            source,
            joint_zone: o.joint_zone,
            feasible_fraction: o.feasible_fraction,
            region_area: o.region_area,
            workspace_square: o.workspace_square,
        }
    }
}

#[derive(Serialize)]
struct CompareSummary<'a> {
    resolution: usize,
    first: OutcomeSummary<'a>,
    second: OutcomeSummary<'a>,
    area_ratio: f64,
}

fn cmd_compare(args: CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (a, b) = (load(&args.config_a)?, load(&args.config_b)?);
    // both designs share the first design's amplification bounds
    let protocol = CompareProtocol { resolution: args.res, options: options(&a), ..CompareProtocol::default() };
    let report = compare_designs(&a.design, &b.design, &protocol).map_err(|e| match e {
        Error::DesignFailed { index, source } => {
            let name = if index == 1 { &args.config_a } else { &args.config_b };
            let code = if *source == Error::EmptyZone { EXIT_SINGULAR } else { EXIT_USAGE };
            Failure { code, message: format!("design {} ({name}): {source}", if index == 1 { "A" } else { "B" }) }
        }
        other => other.into(),
    })?;
    let summary = CompareSummary {
        resolution: args.res,
        first: OutcomeSummary::new(&args.config_a, &report.first),
        second: OutcomeSummary::new(&args.config_b, &report.second),
        area_ratio: report.area_ratio,
    };
    emit(out, &to_json(&summary))?;

    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<8} {:<24} {:>16} {:>16} {:>16}",
        "design", "source", "joint side", "region area", "square area"
    );
    for (tag, o) in [("A", &summary.first), ("B", &summary.second)] {
        let _ = writeln!(
            table,
            "{:<8} {:<24} {:>16} {:>16} {:>16}",
            tag,
            o.source,
            fmt_g(o.joint_zone.side),
            fmt_g(o.region_area),
            fmt_g(o.workspace_square.area)
        );
    }
    let _ = writeln!(table, "square area ratio A/B: {}", fmt_g(report.area_ratio));
    let _ = err.write_all(table.as_bytes());
    Ok(EXIT_OK)
}

fn cmd_isocurves(args: IsocurvesArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = load(&args.design.config)?;
    let protocol = CompareProtocol { resolution: args.res, options: options(&cfg), ..CompareProtocol::default() };
    let (joint_atlas, outcome) = analyze_design(&cfg.design, &protocol).map_err(|e| Failure {
        code: if e == Error::EmptyZone { EXIT_SINGULAR } else { EXIT_USAGE },
        message: e.to_string(),
    })?;
    let work_atlas = useful_workspace_atlas(&joint_atlas, &outcome.joint_zone, &outcome.region, args.res)?;
    let curves = iso_value_curves_within(&work_atlas, args.field, &args.levels.0, &outcome.region.boundary);
    let svg_text = svg::render(&outcome.region.boundary, Some(&outcome.workspace_square), &curves, args.field.name());
    let csv_path = args.out.with_extension("csv");
    write_file(&args.out, &svg_text)?;
    write_file(&csv_path, &svg::polylines_csv(&curves))?;
    emit(out, &format!("{}\n{}\n", args.out.display(), csv_path.display()))?;
    Ok(EXIT_OK)
}
