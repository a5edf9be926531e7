//! Grid atlases of joint space and workspace, useful-zone extraction and
//! the isotropic-versus-biglide comparison pipeline.
//!
//! Cells are sampled at their centres. Per-cell work runs on the rayon pool
//! and is collected in row-major order, so results do not depend on the
//! number of threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::contour::{contour_levels, Polyline, ScalarGrid};
use crate::error::{Error, LegFailure, Result};
use crate::jacobian::{SingularityClass, DEFAULT_SINGULARITY_TOL};
use crate::kinematics::{forward_kinematics, inverse_kinematics, BranchSelector, DesignParams, ManipConfig};
use crate::linalg::Point2;
use crate::manipulability::{AmplificationBounds, ManipReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Space {
    JointSpace,
    Workspace,
}

/// Axis-aligned rectangle `[u_min, u_max] × [v_min, v_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rect {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Rect {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Result<Self> {
        let r = Rect { u_min, u_max, v_min, v_max };
        let finite = [u_min, u_max, v_min, v_max].iter().all(|v| v.is_finite());
        if !finite || !(u_min < u_max) || !(v_min < v_max) {
            return Err(Error::InvalidBounds(format!(
                "[{u_min}, {u_max}] x [{v_min}, {v_max}] is empty or not finite"
            )));
        }
        Ok(r)
    }

    pub fn square(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, lo, hi)
    }

    /// The stroke-limit square of a design.
    pub fn strokes(design: &DesignParams) -> Self {
        Rect { u_min: design.rho_min, u_max: design.rho_max, v_min: design.rho_min, v_max: design.rho_max }
    }

    pub fn width(&self) -> f64 {
        self.u_max - self.u_min
    }

    pub fn height(&self) -> f64 {
        self.v_max - self.v_min
    }

    /// Bounding box of a point set.
    pub fn bounding(points: &[Point2]) -> Option<Self> {
        let first = points.first()?;
        let init = Rect { u_min: first.x, u_max: first.x, v_min: first.y, v_max: first.y };
        Some(points.iter().fold(init, |r, p| Rect {
            u_min: r.u_min.min(p.x),
            u_max: r.u_max.max(p.x),
            v_min: r.v_min.min(p.y),
            v_max: r.v_max.max(p.y),
        }))
    }
}

/// Per-cell analysis settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AtlasOptions {
    pub singularity_tol: f64,
    pub amplification: AmplificationBounds,
}

impl Default for AtlasOptions {
    fn default() -> Self {
        AtlasOptions { singularity_tol: DEFAULT_SINGULARITY_TOL, amplification: AmplificationBounds::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CellStatus {
    Feasible,
    NoClosure,
    Singular(SingularityClass),
    /// Regular posture whose amplification factors leave the bounds.
    OutOfBounds,
    StrokeViolation,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Feasible => "feasible",
            CellStatus::NoClosure => "no_closure",
            CellStatus::Singular(SingularityClass::ParallelSingular) => "singular_parallel",
            CellStatus::Singular(SingularityClass::SerialSingular) => "singular_serial",
            CellStatus::Singular(SingularityClass::DoublySingular) => "singular_doubly",
            CellStatus::Singular(SingularityClass::Structural) => "singular_structural",
            CellStatus::Singular(SingularityClass::Regular) => "singular",
            CellStatus::OutOfBounds => "out_of_bounds",
            CellStatus::StrokeViolation => "stroke_violation",
        }
    }
}

/// The subset of a posture report kept per cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CellReport {
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_jinv: f64,
    pub class: SingularityClass,
    pub lambda1: f64,
    pub lambda2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CellRecord {
    pub coords: Point2,
    pub status: CellStatus,
    /// Present iff the status is `Feasible` or `OutOfBounds`.
    pub report: Option<CellReport>,
}

/// Scalar fields that can be read off an atlas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Field {
    Lambda1,
    Lambda2,
    KappaA,
    KappaB,
}

impl Field {
    pub fn of(self, r: &CellReport) -> f64 {
        match self {
            Field::Lambda1 => r.lambda1,
            Field::Lambda2 => r.lambda2,
            Field::KappaA => r.kappa_a,
            Field::KappaB => r.kappa_b,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Lambda1 => "lambda1",
            Field::Lambda2 => "lambda2",
            Field::KappaA => "kappaA",
            Field::KappaB => "kappaB",
        }
    }

    pub fn parse(s: &str) -> Option<Field> {
        match s {
            "lambda1" => Some(Field::Lambda1),
            "lambda2" => Some(Field::Lambda2),
            "kappaA" => Some(Field::KappaA),
            "kappaB" => Some(Field::KappaB),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridAtlas {
    pub space: Space,
    pub bounds: Rect,
    pub resolution: (usize, usize),
    /// Row-major: row index along `v`, column index along `u`.
    pub cells: Vec<CellRecord>,
    pub branch: BranchSelector,
    pub design: DesignParams,
    pub options: AtlasOptions,
}

impl GridAtlas {
    pub fn cell_size(&self) -> (f64, f64) {
        (self.bounds.width() / self.resolution.0 as f64, self.bounds.height() / self.resolution.1 as f64)
    }

    pub fn u_centers(&self) -> Vec<f64> {
        centers(self.bounds.u_min, self.bounds.u_max, self.resolution.0)
    }

    pub fn v_centers(&self) -> Vec<f64> {
        centers(self.bounds.v_min, self.bounds.v_max, self.resolution.1)
    }

    #[inline]
    pub fn cell(&self, row: usize, col: usize) -> &CellRecord {
        &self.cells[row * self.resolution.0 + col]
    }

    pub fn feasibility(&self) -> Vec<bool> {
        self.cells.iter().map(|c| c.status == CellStatus::Feasible).collect()
    }

    pub fn feasible_fraction(&self) -> f64 {
        let n = self.cells.iter().filter(|c| c.status == CellStatus::Feasible).count();
        n as f64 / self.cells.len() as f64
    }

    /// Node values for contouring; cells without a report are missing.
    pub fn scalar_grid(&self, field: Field) -> ScalarGrid {
        ScalarGrid {
            xs: self.u_centers(),
            ys: self.v_centers(),
            values: self.cells.iter().map(|c| c.report.map(|r| field.of(&r))).collect(),
        }
    }
}

fn centers(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(|k| lo + (k as f64 + 0.5) * h).collect()
}

fn check_resolution(resolution: (usize, usize)) -> Result<()> {
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::InvalidBounds(format!(
            "resolution {}x{} below the 2x2 minimum",
            resolution.0, resolution.1
        )));
    }
    Ok(())
}

fn classify_posture(
    config: &ManipConfig,
    design: &DesignParams,
    options: &AtlasOptions,
) -> (CellStatus, Option<CellReport>) {
    let (report, _) = ManipReport::compute(config, design, options.singularity_tol);
    if report.class.is_singular() {
        return (CellStatus::Singular(report.class), None);
    }
    let Some(amp) = report.amplification else {
        return (CellStatus::Singular(SingularityClass::ParallelSingular), None);
    };
    let cell = CellReport {
        kappa_a: report.kappa_a,
        kappa_b: report.kappa_b,
        kappa_jinv: report.kappa_jinv,
        class: report.class,
        lambda1: amp.lambda1,
        lambda2: amp.lambda2,
    };
    let status = if options.amplification.contains(&amp) { CellStatus::Feasible } else { CellStatus::OutOfBounds };
    (status, Some(cell))
}

fn sample_grid(
    bounds: Rect,
    resolution: (usize, usize),
    cell: impl Fn(Point2) -> (CellStatus, Option<CellReport>) + Sync,
) -> Vec<CellRecord> {
    let us = centers(bounds.u_min, bounds.u_max, resolution.0);
    let vs = centers(bounds.v_min, bounds.v_max, resolution.1);
    (0..resolution.0 * resolution.1)
        .into_par_iter()
        .map(|k| {
            let coords = Point2::new(us[k % resolution.0], vs[k / resolution.0]);
            let (status, report) = cell(coords);
            CellRecord { coords, status, report }
        })
        .collect()
}

/// Samples strokes `(ρ₁, ρ₂)` over `bounds` through forward kinematics.
pub fn sample_joint_space(
    design: &DesignParams,
    branch: BranchSelector,
    bounds: Rect,
    resolution: (usize, usize),
    options: AtlasOptions,
) -> Result<GridAtlas> {
    check_resolution(resolution)?;
    let bounds = Rect::new(bounds.u_min, bounds.u_max, bounds.v_min, bounds.v_max)?;
    if !(design.stroke_contains(bounds.u_min)
        && design.stroke_contains(bounds.u_max)
        && design.stroke_contains(bounds.v_min)
        && design.stroke_contains(bounds.v_max))
    {
        return Err(Error::InvalidBounds(format!(
            "joint bounds must lie within the stroke limits [{}, {}]",
            design.rho_min, design.rho_max
        )));
    }
    let cells = sample_grid(bounds, resolution, |rho| match forward_kinematics(design, (rho.x, rho.y), branch) {
        Ok(q) => classify_posture(&q, design, &options),
        Err(Error::StructuralSingularity) => (CellStatus::Singular(SingularityClass::Structural), None),
        Err(Error::StrokeOutOfRange(..)) => (CellStatus::StrokeViolation, None),
        Err(_) => (CellStatus::NoClosure, None),
    });
    Ok(GridAtlas { space: Space::JointSpace, bounds, resolution, cells, branch, design: *design, options })
}

/// Samples end-point positions over `bounds` through inverse kinematics.
pub fn sample_workspace(
    design: &DesignParams,
    branch: BranchSelector,
    bounds: Rect,
    resolution: (usize, usize),
    options: AtlasOptions,
) -> Result<GridAtlas> {
    check_resolution(resolution)?;
    let bounds = Rect::new(bounds.u_min, bounds.u_max, bounds.v_min, bounds.v_max)?;
    let cells = sample_grid(bounds, resolution, |p| match inverse_kinematics(design, p, branch) {
        Ok(q) if q.elbows_coincide(design) => (CellStatus::Singular(SingularityClass::Structural), None),
        Ok(q) => classify_posture(&q, design, &options),
        Err(Error::NoSolution { failure: LegFailure::StrokeViolation { .. }, .. }) => {
            (CellStatus::StrokeViolation, None)
        }
        Err(_) => (CellStatus::NoClosure, None),
    });
    Ok(GridAtlas { space: Space::Workspace, bounds, resolution, cells, branch, design: *design, options })
}

/// A square block of grid cells: lower-left cell and edge length in cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CellSquare {
    pub row: usize,
    pub col: usize,
    pub size: usize,
}

/// Largest all-`true` square of a row-major boolean grid. Ties go to the
/// smallest `(row, col)` of the lower-left cell.
pub fn largest_square(mask: &[bool], n_cols: usize, n_rows: usize) -> Option<CellSquare> {
    assert_eq!(mask.len(), n_cols * n_rows);
    // side[r][c]: largest square whose upper-right cell is (r, c)
    let mut side = vec![0usize; n_cols * n_rows];
    let mut best: Option<CellSquare> = None;
    for r in 0..n_rows {
        for c in 0..n_cols {
            let k = r * n_cols + c;
            if !mask[k] {
                continue;
            }
            let s = if r == 0 || c == 0 { 1 } else { 1 + side[k - n_cols].min(side[k - 1]).min(side[k - n_cols - 1]) };
            side[k] = s;
            // every square ending at (r, c) with side ≤ s is all-true; the
            // largest has lower-left (r + 1 - s, c + 1 - s)
            let candidate = CellSquare { row: r + 1 - s, col: c + 1 - s, size: s };
            best = match best {
                Some(b) if b.size > s || (b.size == s && (b.row, b.col) <= (candidate.row, candidate.col)) => Some(b),
                _ => Some(candidate),
            };
        }
    }
    best
}

/// A square region of an atlas or raster.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZoneResult {
    /// Lower-left corner of the square.
    pub origin: Point2,
    pub center: Point2,
    pub side: f64,
    pub area: f64,
    pub feasible_fraction: f64,
    pub cells: CellSquare,
}

fn zone_from_square(sq: CellSquare, origin: Point2, cell: (f64, f64), fraction: f64) -> ZoneResult {
    let lower_left = Point2::new(origin.x + sq.col as f64 * cell.0, origin.y + sq.row as f64 * cell.1);
    let (w, h) = (sq.size as f64 * cell.0, sq.size as f64 * cell.1);
    ZoneResult {
        origin: lower_left,
        center: Point2::new(lower_left.x + 0.5 * w, lower_left.y + 0.5 * h),
        side: w,
        area: w * h,
        feasible_fraction: fraction,
        cells: sq,
    }
}

/// Largest square of `Feasible` cells in any atlas.
pub fn largest_feasible_square(atlas: &GridAtlas) -> Result<ZoneResult> {
    let (n_u, n_v) = atlas.resolution;
    let sq = largest_square(&atlas.feasibility(), n_u, n_v).ok_or(Error::EmptyZone)?;
    let origin = Point2::new(atlas.bounds.u_min, atlas.bounds.v_min);
    Ok(zone_from_square(sq, origin, atlas.cell_size(), atlas.feasible_fraction()))
}

/// Largest square of joint space free of singularities and within the
/// amplification bounds.
pub fn useful_zone(atlas: &GridAtlas) -> Result<ZoneResult> {
    if atlas.space != Space::JointSpace {
        return Err(Error::WrongSpace { expected: "joint-space" });
    }
    largest_feasible_square(atlas)
}

/// Image of a joint-space zone in the workspace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MappedRegion {
    /// Images of the zone's cell centres, row-major.
    pub points: Vec<Point2>,
    /// Image of the square through the zone's outer cell centres,
    /// counter-clockwise in joint space, first vertex repeated at the end.
    pub boundary: Vec<Point2>,
}

impl MappedRegion {
    /// Shoelace area enclosed by the boundary.
    pub fn area(&self) -> f64 {
        polygon_area(&self.boundary)
    }
}

pub fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n).map(|k| poly[k].cross(poly[(k + 1) % n])).sum();
    0.5 * twice.abs()
}

/// Maps the zone's cells and perimeter through forward kinematics, with
/// `samples_per_edge` perimeter samples on each side of the square.
/// A one-cell zone maps to a single point and a degenerate boundary.
pub fn map_zone_to_workspace(atlas: &GridAtlas, zone: &ZoneResult, samples_per_edge: usize) -> Result<MappedRegion> {
    if atlas.space != Space::JointSpace {
        return Err(Error::WrongSpace { expected: "joint-space" });
    }
    let fk = |rho: Point2| {
        forward_kinematics(&atlas.design, (rho.x, rho.y), atlas.branch)
            .map(|q| q.p)
            .map_err(|e| Error::Internal(format!("zone point ({}, {}) does not assemble: {e}", rho.x, rho.y)))
    };

    let sq = zone.cells;
    let points = (sq.row..sq.row + sq.size)
        .flat_map(|r| (sq.col..sq.col + sq.size).map(move |c| (r, c)))
        .map(|(r, c)| fk(atlas.cell(r, c).coords))
        .collect::<Result<Vec<_>>>()?;

    // perimeter through the centres of the outer ring of cells, all of which
    // are known to assemble; the cell edges themselves may not
    let n = samples_per_edge.max(1);
    let last = sq.size - 1;
    let corners = [
        atlas.cell(sq.row, sq.col).coords,
        atlas.cell(sq.row, sq.col + last).coords,
        atlas.cell(sq.row + last, sq.col + last).coords,
        atlas.cell(sq.row + last, sq.col).coords,
    ];
    let mut boundary = Vec::with_capacity(4 * n + 1);
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        for s in 0..n {
            let t = s as f64 / n as f64;
            boundary.push(fk(a + (b - a) * t)?);
        }
    }
    boundary.push(boundary[0]);
    Ok(MappedRegion { points, boundary })
}

/// Even-odd point-in-polygon test; the polygon is implicitly closed.
pub fn point_in_polygon(p: Point2, poly: &[Point2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Square raster covering a polygon's bounding box with `resolution` cells
/// along its longer side.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub origin: Point2,
    pub cell: f64,
    pub n_cols: usize,
    pub n_rows: usize,
    pub inside: Vec<bool>,
}

pub fn rasterize_polygon(poly: &[Point2], resolution: usize) -> Result<Raster> {
    let bbox = Rect::bounding(poly).ok_or(Error::EmptyZone)?;
    let extent = bbox.width().max(bbox.height());
    if poly.len() < 3 || !(extent > 0.0) || resolution == 0 {
        return Err(Error::EmptyZone);
    }
    let cell = extent / resolution as f64;
    let n_cols = ((bbox.width() / cell).ceil() as usize).clamp(1, resolution);
    let n_rows = ((bbox.height() / cell).ceil() as usize).clamp(1, resolution);
    let origin = Point2::new(bbox.u_min, bbox.v_min);
    let inside = (0..n_rows)
        .flat_map(|r| (0..n_cols).map(move |c| (r, c)))
        .map(|(r, c)| {
            let p = Point2::new(origin.x + (c as f64 + 0.5) * cell, origin.y + (r as f64 + 0.5) * cell);
            point_in_polygon(p, poly)
        })
        .collect();
    Ok(Raster { origin, cell, n_cols, n_rows, inside })
}

/// Largest axis-aligned square inside the rasterized boundary of a region.
pub fn inscribed_workspace_square(region: &MappedRegion, resolution: usize) -> Result<ZoneResult> {
    let raster = rasterize_polygon(&region.boundary, resolution)?;
    let sq = largest_square(&raster.inside, raster.n_cols, raster.n_rows).ok_or(Error::EmptyZone)?;
    let fraction = raster.inside.iter().filter(|&&b| b).count() as f64 / raster.inside.len() as f64;
    Ok(zone_from_square(sq, raster.origin, (raster.cell, raster.cell), fraction))
}

/// Settings shared by both designs of a comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompareProtocol {
    /// Joint-space atlas and workspace raster resolution (cells per side).
    pub resolution: usize,
    pub branch: BranchSelector,
    pub perimeter_samples: usize,
    pub options: AtlasOptions,
}

impl Default for CompareProtocol {
    fn default() -> Self {
        CompareProtocol {
            resolution: 201,
            branch: BranchSelector::default(),
            perimeter_samples: 200,
            options: AtlasOptions::default(),
        }
    }
}

/// Full pipeline output for one design.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignOutcome {
    pub joint_zone: ZoneResult,
    pub feasible_fraction: f64,
    pub region: MappedRegion,
    pub region_area: f64,
    pub workspace_square: ZoneResult,
}

/// Joint atlas over the stroke square, useful zone, its workspace image and
/// the inscribed workspace square.
pub fn analyze_design(design: &DesignParams, protocol: &CompareProtocol) -> Result<(GridAtlas, DesignOutcome)> {
    let n = protocol.resolution;
    let atlas = sample_joint_space(design, protocol.branch, Rect::strokes(design), (n, n), protocol.options)?;
    let joint_zone = useful_zone(&atlas)?;
    let region = map_zone_to_workspace(&atlas, &joint_zone, protocol.perimeter_samples)?;
    let workspace_square = inscribed_workspace_square(&region, n)?;
    let outcome = DesignOutcome {
        joint_zone,
        feasible_fraction: atlas.feasible_fraction(),
        region_area: region.area(),
        region,
        workspace_square,
    };
    Ok((atlas, outcome))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub first: DesignOutcome,
    pub second: DesignOutcome,
    /// Inscribed workspace square area of the first design over the second.
    pub area_ratio: f64,
}

fn comparable(a: &DesignParams, b: &DesignParams) -> Result<()> {
    let rel = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(y.abs());
    let (da, db) = ((a.b - a.a).norm(), (b.b - b.a).norm());
    if !rel(da, db) {
        return Err(Error::IncomparableDesigns(format!("anchor distances differ ({da} vs {db})")));
    }
    if !rel(a.l1, b.l1) || !rel(a.l2, b.l2) {
        return Err(Error::IncomparableDesigns("bar lengths differ".into()));
    }
    Ok(())
}

/// Runs [`analyze_design`] on both designs under one protocol.
pub fn compare_designs(
    first: &DesignParams,
    second: &DesignParams,
    protocol: &CompareProtocol,
) -> Result<ComparisonReport> {
    comparable(first, second)?;
    let run = |index: usize, d: &DesignParams| {
        analyze_design(d, protocol).map(|(_, o)| o).map_err(|e| Error::DesignFailed { index, source: Box::new(e) })
    };
    let (a, b) = (run(1, first)?, run(2, second)?);
    Ok(ComparisonReport { area_ratio: a.workspace_square.area / b.workspace_square.area, first: a, second: b })
}

/// Iso-value curves of `field` over the atlas cells that carry a report.
pub fn iso_value_curves(atlas: &GridAtlas, field: Field, levels: &[f64]) -> Vec<Polyline> {
    contour_levels(&atlas.scalar_grid(field), levels)
}

/// As [`iso_value_curves`], restricted to cell centres inside `region`.
pub fn iso_value_curves_within(atlas: &GridAtlas, field: Field, levels: &[f64], region: &[Point2]) -> Vec<Polyline> {
    let mut grid = atlas.scalar_grid(field);
    for (v, cell) in grid.values.iter_mut().zip(&atlas.cells) {
        if !point_in_polygon(cell.coords, region) {
            *v = None;
        }
    }
    contour_levels(&grid, levels)
}

/// Workspace atlas over the bounding box of a mapped zone, using the
/// working modes of the zone's central posture.
pub fn useful_workspace_atlas(
    joint_atlas: &GridAtlas,
    zone: &ZoneResult,
    region: &MappedRegion,
    resolution: usize,
) -> Result<GridAtlas> {
    let design = &joint_atlas.design;
    let centre = forward_kinematics(design, (zone.center.x, zone.center.y), joint_atlas.branch)
        .map_err(|e| Error::Internal(format!("zone centre does not assemble: {e}")))?;
    let bbox = Rect::bounding(&region.boundary).ok_or(Error::EmptyZone)?;
    let extent = bbox.width().max(bbox.height());
    let cell = extent / resolution as f64;
    let n_u = ((bbox.width() / cell).ceil() as usize).max(2);
    let n_v = ((bbox.height() / cell).ceil() as usize).max(2);
    let bounds = Rect::new(bbox.u_min, bbox.u_min + n_u as f64 * cell, bbox.v_min, bbox.v_min + n_v as f64 * cell)?;
    sample_workspace(design, centre.branch(design), bounds, (n_u, n_v), joint_atlas.options)
}
