//! Velocity manipulability ellipsoids and amplification factors.
//!
//! For a unit ball of actuator rates `‖ρ̇‖ ≤ 1` the reachable end-point
//! velocities are `{ṗ : ṗᵀ(JJᵀ)⁻¹ṗ ≤ 1}`. The semi-axes `γᵢ` are the square
//! roots of the eigenvalues of `(JJᵀ)⁻¹` and the amplification factors are
//! `λᵢ = 1/γᵢ`, i.e. the singular values of `J`.

use serde::{Deserialize, Serialize};

use crate::conditioning::{ConditioningReport, IsotropyTol};
use crate::error::{Error, Result};
use crate::jacobian::{JacobianBundle, SingularityClass};
use crate::kinematics::{DesignParams, ManipConfig};
use crate::linalg::{Mat2, Vec2};

/// `J` is treated as singular when `σ_min ≤ SINGULAR_RATIO·σ_max`.
const SINGULAR_RATIO: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid2 {
    /// `(γ₁, γ₂)` with `γ₁ ≥ γ₂ > 0`.
    pub semi_axes: (f64, f64),
    /// Unit principal directions matching `semi_axes`.
    pub directions: [Vec2; 2],
}

impl Ellipsoid2 {
    /// `ṗᵀ(JJᵀ)⁻¹ṗ` expressed in the principal frame.
    pub fn quadratic_form(&self, v: Vec2) -> f64 {
        let (g1, g2) = self.semi_axes;
        let a = v.dot(self.directions[0]);
        let b = v.dot(self.directions[1]);
        a * a * g1 * g1 + b * b * g2 * g2
    }
}

fn check_regular(j: &Mat2) -> Result<(f64, f64)> {
    let (hi, lo) = j.singular_values();
    if !(hi > 0.0) || lo <= SINGULAR_RATIO * hi || !j.is_finite() {
        return Err(Error::Singular);
    }
    Ok((hi, lo))
}

/// Eigendecomposition of `(JJᵀ)⁻¹`, semi-axes sorted descending.
pub fn velocity_ellipsoid(j: &Mat2) -> Result<Ellipsoid2> {
    check_regular(j)?;
    let gram_inv = (*j * j.transpose()).inverse().ok_or(Error::Singular)?;
    let ([e0, e1], dirs) = gram_inv.symmetric_eigen();
    let (hi, lo) = j.singular_values();
    // eigenvalues of (JJᵀ)⁻¹ are 1/σ²; take the semi-axes from the singular
    // values for accuracy and the directions from the eigenvectors
    debug_assert!(e0 >= e1);
    Ok(Ellipsoid2 { semi_axes: (1.0 / lo, 1.0 / hi), directions: dirs })
}

/// Velocity amplification factors, ascending.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplificationFactors {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl AmplificationFactors {
    pub fn new(a: f64, b: f64) -> Self {
        AmplificationFactors { lambda1: a.min(b), lambda2: a.max(b) }
    }

    /// `λ_max / λ_min`, the condition number of `J`.
    pub fn ratio(&self) -> f64 {
        self.lambda2 / self.lambda1
    }
}

/// Singular values of `J`, ascending.
pub fn amplification_factors(j: &Mat2) -> Result<AmplificationFactors> {
    let (hi, lo) = check_regular(j)?;
    Ok(AmplificationFactors { lambda1: lo, lambda2: hi })
}

/// Open interval on the amplification factors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplificationBounds {
    pub lo: f64,
    pub hi: f64,
}

impl Default for AmplificationBounds {
    fn default() -> Self {
        AmplificationBounds { lo: 1.0 / 3.0, hi: 3.0 }
    }
}

impl AmplificationBounds {
    pub fn contains(&self, f: &AmplificationFactors) -> bool {
        within_amplification_bounds(f, self.lo, self.hi)
    }
}

/// Strict `lo < λᵢ < hi` for both factors.
pub fn within_amplification_bounds(f: &AmplificationFactors, lo: f64, hi: f64) -> bool {
    [f.lambda1, f.lambda2].iter().all(|&l| lo < l && l < hi)
}

/// Force amplification factors `1/λᵢ`, ascending.
pub fn force_amplification(f: &AmplificationFactors) -> (f64, f64) {
    (1.0 / f.lambda2, 1.0 / f.lambda1)
}

/// Everything computed for one posture.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManipReport {
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_jinv: f64,
    pub class: SingularityClass,
    /// Absent when `J` does not exist.
    pub amplification: Option<AmplificationFactors>,
    pub ellipsoid: Option<Ellipsoid2>,
    pub isotropy_residuals: Option<(f64, f64)>,
    pub isotropic: bool,
}

impl ManipReport {
    pub fn compute(config: &ManipConfig, design: &DesignParams, tol: f64) -> (Self, JacobianBundle) {
        let bundle = JacobianBundle::compute(config, design, tol);
        let cond = ConditioningReport::compute(config, design);
        let usable_j = bundle.j.filter(|_| !bundle.class.is_singular());
        let report = ManipReport {
            kappa_a: cond.kappa_a,
            kappa_b: cond.kappa_b,
            kappa_jinv: cond.kappa_jinv,
            class: bundle.class,
            amplification: usable_j.and_then(|j| amplification_factors(&j).ok()),
            ellipsoid: usable_j.and_then(|j| velocity_ellipsoid(&j).ok()),
            isotropy_residuals: cond.isotropy_residuals,
            isotropic: cond.isotropy_residuals.is_some_and(|r| IsotropyTol::for_design(design).accepts(r)),
        };
        (report, bundle)
    }
}
