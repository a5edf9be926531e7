//! Geometry of the two-prismatic-actuator five-bar mechanism and its
//! position-level forward and inverse kinematics.
//!
//! Actuator `i` slides elbow `C` (resp. `D`) along a rail anchored at `A`
//! (resp. `B`) with direction `alpha_i`; the bars `CP` and `DP` of lengths
//! `L1` and `L2` meet at the end point `P`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Leg, LegFailure, Result};
use crate::linalg::{wrap_angle, Point2, Vec2};

/// Relative tolerance on `‖c − d‖` below which the elbows are considered
/// coincident.
pub const STRUCTURAL_TOL: f64 = 1e-9;

/// Relative slack on the stroke limits when validating inputs and IK roots.
const STROKE_SLACK: f64 = 1e-12;

/// Relative tolerance under which an IK discriminant counts as a double root.
const TANGENCY_TOL: f64 = 1e-12;

/// Full geometric definition of one mechanism.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    pub a: Point2,
    pub b: Point2,
    pub alpha1: f64,
    pub alpha2: f64,
    pub l1: f64,
    pub l2: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

impl DesignParams {
    /// Builds a design with the default stroke limits `[0, 4·max(L1, L2)]`.
    pub fn new(a: Point2, b: Point2, alpha1: f64, alpha2: f64, l1: f64, l2: f64) -> Result<Self> {
        let rho_max = 4.0 * l1.max(l2);
        Self::with_strokes(a, b, alpha1, alpha2, l1, l2, 0.0, rho_max)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_strokes(
        a: Point2,
        b: Point2,
        alpha1: f64,
        alpha2: f64,
        l1: f64,
        l2: f64,
        rho_min: f64,
        rho_max: f64,
    ) -> Result<Self> {
        let d = DesignParams { a, b, alpha1: wrap_angle(alpha1), alpha2: wrap_angle(alpha2), l1, l2, rho_min, rho_max };
        d.validate()?;
        Ok(d)
    }

    /// The isotropic morphology: `A = (0, 0)`, `B = (M, −M)`, actuators along
    /// x and y. Its isotropic posture is reached at `ρ₁ = ρ₂`.
    pub fn isotropic(m: f64, l: f64) -> Result<Self> {
        Self::new(Vec2::ZERO, Vec2::new(m, -m), 0.0, FRAC_PI_2, l, l)
    }

    /// The biglide reference: both actuators along x, anchors separated by
    /// the same distance `M√2` as the isotropic morphology.
    pub fn biglide(m: f64, l: f64) -> Result<Self> {
        Self::new(Vec2::ZERO, Vec2::new(m * std::f64::consts::SQRT_2, 0.0), 0.0, 0.0, l, l)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.a.x,
            self.a.y,
            self.b.x,
            self.b.y,
            self.alpha1,
            self.alpha2,
            self.l1,
            self.l2,
            self.rho_min,
            self.rho_max,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidDesign("non-finite parameter".into()));
        }
        if !(self.l1 > 0.0 && self.l2 > 0.0) {
            return Err(Error::InvalidDesign(format!(
                "bar lengths must be positive (L1 = {}, L2 = {})",
                self.l1, self.l2
            )));
        }
        if !(self.rho_min < self.rho_max) {
            return Err(Error::InvalidDesign(format!(
                "rho_min ({}) must be below rho_max ({})",
                self.rho_min, self.rho_max
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn axis1(&self) -> Vec2 {
        Vec2::from_angle(self.alpha1)
    }

    #[inline]
    pub fn axis2(&self) -> Vec2 {
        Vec2::from_angle(self.alpha2)
    }

    #[inline]
    pub fn max_bar(&self) -> f64 {
        self.l1.max(self.l2)
    }

    /// Elbow positions `(c, d)` for the given strokes.
    pub fn elbows(&self, rho: (f64, f64)) -> (Point2, Point2) {
        (self.a + self.axis1() * rho.0, self.b + self.axis2() * rho.1)
    }

    pub fn stroke_contains(&self, rho: f64) -> bool {
        let slack = STROKE_SLACK * self.rho_max.abs().max(self.rho_min.abs()).max(1.0);
        rho >= self.rho_min - slack && rho <= self.rho_max + slack
    }

    /// Uniform scaling of every length in the design.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::with_strokes(
            self.a * k,
            self.b * k,
            self.alpha1,
            self.alpha2,
            self.l1 * k,
            self.l2 * k,
            self.rho_min * k,
            self.rho_max * k,
        )
    }

    fn leg(&self, leg: Leg) -> (Point2, Vec2, f64) {
        match leg {
            Leg::One => (self.a, self.axis1(), self.l1),
            Leg::Two => (self.b, self.axis2(), self.l2),
        }
    }
}

/// `+1` or `−1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Sign of `x`, with zero mapped to `Plus`.
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn from_i32(v: i32) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Selects one of the (up to four) inverse and (up to two) forward
/// kinematic solutions.
///
/// A working mode of `+1` selects the smaller stroke root of that leg, which
/// is the root with `cos(θᵢ − αᵢ) > 0` (bar pointing forward along the rail);
/// `−1` selects the larger root. The assembly mode is the side of the line
/// `C → D` the end point lies on: `+1` when `(d − c) × (p − c) > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchSelector {
    pub working_mode_1: Sign,
    pub working_mode_2: Sign,
    pub assembly_mode: Sign,
}

impl Default for BranchSelector {
    fn default() -> Self {
        Self { working_mode_1: Sign::Plus, working_mode_2: Sign::Plus, assembly_mode: Sign::Plus }
    }
}

impl BranchSelector {
    pub fn new(working_mode_1: Sign, working_mode_2: Sign, assembly_mode: Sign) -> Self {
        Self { working_mode_1, working_mode_2, assembly_mode }
    }

    pub fn with_assembly(assembly_mode: Sign) -> Self {
        Self { assembly_mode, ..Self::default() }
    }

    fn working_mode(&self, leg: Leg) -> Sign {
        match leg {
            Leg::One => self.working_mode_1,
            Leg::Two => self.working_mode_2,
        }
    }
}

/// One resolved posture of the mechanism.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManipConfig {
    pub rho: (f64, f64),
    pub p: Point2,
    pub c: Point2,
    pub d: Point2,
    pub theta1: f64,
    pub theta2: f64,
}

impl ManipConfig {
    fn assemble(rho: (f64, f64), p: Point2, c: Point2, d: Point2) -> Self {
        ManipConfig { rho, p, c, d, theta1: (p - c).angle(), theta2: (p - d).angle() }
    }

    /// The branch this posture belongs to.
    pub fn branch(&self, design: &DesignParams) -> BranchSelector {
        BranchSelector {
            working_mode_1: Sign::of((self.p - self.c).dot(design.axis1())),
            working_mode_2: Sign::of((self.p - self.d).dot(design.axis2())),
            assembly_mode: Sign::of((self.d - self.c).cross(self.p - self.c)),
        }
    }

    /// Largest relative violation of the bar-length and rail constraints.
    pub fn closure_residual(&self, design: &DesignParams) -> f64 {
        let (c, d) = design.elbows(self.rho);
        let scale = design.max_bar();
        [
            ((self.p - self.c).norm() - design.l1).abs(),
            ((self.p - self.d).norm() - design.l2).abs(),
            (self.c - c).norm(),
            (self.d - d).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
            / scale
    }

    pub fn elbows_coincide(&self, design: &DesignParams) -> bool {
        (self.c - self.d).norm() < STRUCTURAL_TOL * design.max_bar()
    }
}

/// Closes the loop for given actuator strokes by intersecting the circles of
/// radius `L1`, `L2` centred on the elbows.
pub fn forward_kinematics(design: &DesignParams, rho: (f64, f64), branch: BranchSelector) -> Result<ManipConfig> {
    if !(design.stroke_contains(rho.0) && design.stroke_contains(rho.1)) {
        return Err(Error::StrokeOutOfRange(rho.0, rho.1));
    }
    forward_kinematics_unchecked(design, rho, branch)
}

/// Forward kinematics without the stroke-limit precondition.
pub fn forward_kinematics_unchecked(
    design: &DesignParams,
    rho: (f64, f64),
    branch: BranchSelector,
) -> Result<ManipConfig> {
    let (c, d) = design.elbows(rho);
    let cd = d - c;
    let dist = cd.norm();
    let (l1, l2) = (design.l1, design.l2);

    if dist < STRUCTURAL_TOL * design.max_bar() {
        return Err(Error::StructuralSingularity);
    }
    let (min, max) = ((l1 - l2).abs(), l1 + l2);
    if dist > max || dist < min {
        return Err(Error::NoAssembly { distance: dist, min, max });
    }

    let e = cd.scale(1.0 / dist);
    // distance from C along CD to the foot of P
    let along = (dist * dist + l1 * l1 - l2 * l2) / (2.0 * dist);
    let height = (l1 * l1 - along * along).max(0.0).sqrt();
    let p = c + e * along + e.perp() * (branch.assembly_mode.value() * height);
    Ok(ManipConfig::assemble(rho, p, c, d))
}

/// Real stroke roots of one leg, ascending, deduplicated at tangency.
fn leg_roots(design: &DesignParams, leg: Leg, p: Point2) -> std::result::Result<Vec<f64>, LegFailure> {
    let (anchor, axis, len) = design.leg(leg);
    let w = p - anchor;
    let along = w.dot(axis);
    let off_axis = w.cross(axis);
    let disc = len * len - off_axis * off_axis;
    if disc < -TANGENCY_TOL * len * len {
        return Err(LegFailure::NoRealRoot { distance_to_axis: off_axis.abs() });
    }
    if disc <= TANGENCY_TOL * len * len {
        return Ok(vec![along]);
    }
    let s = disc.sqrt();
    Ok(vec![along - s, along + s])
}

fn select_root(design: &DesignParams, leg: Leg, p: Point2, mode: Sign) -> std::result::Result<f64, LegFailure> {
    let roots = leg_roots(design, leg, p)?;
    let rho = match mode {
        Sign::Plus => roots[0],
        Sign::Minus => roots[roots.len() - 1],
    };
    if design.stroke_contains(rho) {
        Ok(rho)
    } else {
        Err(LegFailure::StrokeViolation { rho })
    }
}

fn config_at(design: &DesignParams, p: Point2, rho: (f64, f64)) -> ManipConfig {
    let (c, d) = design.elbows(rho);
    ManipConfig::assemble(rho, p, c, d)
}

/// Solves each leg's quadratic `‖p − (anchor + ρ·u)‖ = L` and keeps the root
/// chosen by the leg's working mode.
pub fn inverse_kinematics(design: &DesignParams, p: Point2, branch: BranchSelector) -> Result<ManipConfig> {
    let mut rho = [0.0; 2];
    for leg in [Leg::One, Leg::Two] {
        rho[leg.index()] = select_root(design, leg, p, branch.working_mode(leg))
            .map_err(|failure| Error::NoSolution { leg, failure })?;
    }
    Ok(config_at(design, p, (rho[0], rho[1])))
}

/// Every inverse kinematic solution within the stroke limits, ordered with
/// leg 1's working mode major (`+1` first) and leg 2's minor.
pub fn ik_all_solutions(design: &DesignParams, p: Point2) -> Vec<ManipConfig> {
    let admissible = |leg| -> Vec<f64> {
        leg_roots(design, leg, p)
            .map(|r| r.into_iter().filter(|&rho| design.stroke_contains(rho)).collect())
            .unwrap_or_default()
    };
    let r1 = admissible(Leg::One);
    let r2 = admissible(Leg::Two);
    r1.iter().flat_map(|&a| r2.iter().map(move |&b| (a, b))).map(|rho| config_at(design, p, rho)).collect()
}

/// Posture with prescribed bar angles, found by solving the linear system
/// `a + ρ₁u₁ + L₁e(θ₁) = b + ρ₂u₂ + L₂e(θ₂)` for the strokes. Stroke limits
/// are not enforced.
pub fn posture_from_bar_angles(design: &DesignParams, theta1: f64, theta2: f64) -> Result<ManipConfig> {
    let (u1, u2) = (design.axis1(), design.axis2());
    let det = -u1.cross(u2);
    if u1.cross(u2).abs() < 1e-12 {
        return Err(Error::ParallelAxes);
    }
    let rhs = design.b - design.a + Vec2::from_angle(theta2) * design.l2 - Vec2::from_angle(theta1) * design.l1;
    // [u1, -u2] [ρ₁, ρ₂]ᵀ = rhs  (Cramer)
    let rho1 = (rhs.x * -u2.y - -u2.x * rhs.y) / det;
    let rho2 = (u1.x * rhs.y - u1.y * rhs.x) / det;
    let (c, d) = design.elbows((rho1, rho2));
    let p = c + Vec2::from_angle(theta1) * design.l1;
    Ok(ManipConfig { rho: (rho1, rho2), p, c, d, theta1: wrap_angle(theta1), theta2: wrap_angle(theta2) })
}
