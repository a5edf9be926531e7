//! Condition numbers of the Jacobians and the isotropy conditions of `J⁻¹`.
//!
//! Infinite condition numbers are returned as `f64::INFINITY`; the zero
//! matrix has no condition number and yields [`Error::UndefinedCondition`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobian::{inverse_kinematic_jacobian, matrix_a, matrix_b, DEFAULT_SINGULARITY_TOL};
use crate::kinematics::{DesignParams, ManipConfig};
use crate::linalg::{wrap_angle, Mat2};

/// Below this ratio `σ_min / σ_max` the condition number is infinite.
pub const RANK_LOSS_RATIO: f64 = 1e-15;

/// `σ_max / σ_min` of a 2×2 matrix.
pub fn condition_number_svd(m: &Mat2) -> Result<f64> {
    let (hi, lo) = m.singular_values();
    if hi == 0.0 {
        return Err(Error::UndefinedCondition);
    }
    if lo <= RANK_LOSS_RATIO * hi {
        return Ok(f64::INFINITY);
    }
    Ok(hi / lo)
}

/// κ(A) for equal bar lengths from the bar angles alone.
///
/// `t = 1/|tan((θ₂ − θ₁)/2)|` is one ratio of the two singular values; the
/// returned value is `max(t, 1/t)` so it stays ≥ 1.
pub fn kappa_a_closed_form(theta1: f64, theta2: f64) -> f64 {
    let delta = wrap_angle(theta2 - theta1);
    if delta.sin().abs() <= RANK_LOSS_RATIO {
        return f64::INFINITY;
    }
    let t = 1.0 / (0.5 * delta).tan().abs();
    t.max(1.0 / t)
}

/// κ(B) as `β_max/β_min` with `βᵢ = |cos(θᵢ − αᵢ)|`.
pub fn kappa_b_closed_form(theta1: f64, theta2: f64, alpha1: f64, alpha2: f64) -> f64 {
    let b1 = (theta1 - alpha1).cos().abs();
    let b2 = (theta2 - alpha2).cos().abs();
    let (hi, lo) = if b1 >= b2 { (b1, b2) } else { (b2, b1) };
    if lo <= RANK_LOSS_RATIO {
        return f64::INFINITY;
    }
    hi / lo
}

/// Residuals `(r_i, r_ii)` of the two isotropy conditions of `J⁻¹`:
/// `r_i = ‖p − c‖/c₁ − ‖p − d‖/c₂` and `r_ii = (p − c)ᵀ(p − d)`, with
/// `cᵢ = cos(θᵢ − αᵢ)`.
pub fn isotropy_conditions_jinv(config: &ManipConfig, design: &DesignParams) -> Result<(f64, f64)> {
    let b = matrix_b(config, design);
    let c1 = (config.theta1 - design.alpha1).cos();
    let c2 = (config.theta2 - design.alpha2).cos();
    if c1.abs() <= RANK_LOSS_RATIO || c2.abs() <= RANK_LOSS_RATIO {
        return Err(Error::SerialSingular { det: b.det() });
    }
    let bar1 = config.p - config.c;
    let bar2 = config.p - config.d;
    Ok((bar1.norm() / c1 - bar2.norm() / c2, bar1.dot(bar2)))
}

/// Tolerances on the isotropy residuals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropyTol {
    /// On `r_i`, in length units.
    pub gain: f64,
    /// On `r_ii`, in squared length units.
    pub orthogonality: f64,
}

impl IsotropyTol {
    /// `1e−9·L1` and `1e−9·L1²`.
    pub fn for_design(design: &DesignParams) -> Self {
        IsotropyTol { gain: 1e-9 * design.l1, orthogonality: 1e-9 * design.l1 * design.l1 }
    }

    pub fn accepts(&self, residuals: (f64, f64)) -> bool {
        residuals.0.abs() <= self.gain && residuals.1.abs() <= self.orthogonality
    }
}

pub fn is_isotropic(config: &ManipConfig, design: &DesignParams, tol: IsotropyTol) -> bool {
    isotropy_conditions_jinv(config, design).is_ok_and(|r| tol.accepts(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditioningReport {
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_jinv: f64,
    /// Eigenvalues of `AAᵀ`, descending.
    pub etas: (f64, f64),
    /// Singular values of `B`, descending.
    pub betas: (f64, f64),
    /// Absent at serial singularities.
    pub isotropy_residuals: Option<(f64, f64)>,
}

impl ConditioningReport {
    pub fn compute(config: &ManipConfig, design: &DesignParams) -> Self {
        let a = matrix_a(config);
        let b = matrix_b(config, design);
        let kappa = |m: &Mat2| condition_number_svd(m).unwrap_or(f64::INFINITY);
        let kappa_jinv = inverse_kinematic_jacobian(config, design, DEFAULT_SINGULARITY_TOL)
            .map(|m| kappa(&m))
            .unwrap_or(f64::INFINITY);
        let (b1, b2) = (b.get(0, 0).abs(), b.get(1, 1).abs());
        ConditioningReport {
            kappa_a: kappa(&a),
            kappa_b: kappa(&b),
            kappa_jinv,
            etas: (a * a.transpose()).symmetric_eigenvalues(),
            betas: (b1.max(b2), b1.min(b2)),
            isotropy_residuals: isotropy_conditions_jinv(config, design).ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{posture_from_bar_angles, DesignParams};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn iso() -> DesignParams {
        DesignParams::isotropic(2.0, 1.0).unwrap()
    }

    #[test]
    fn svd_condition_examples() {
        assert_eq!(condition_number_svd(&Mat2::IDENTITY).unwrap(), 1.0);
        assert_eq!(condition_number_svd(&Mat2::diag(3.0, 1.0)).unwrap(), 3.0);
        let k = condition_number_svd(&Mat2::new(1.0, 1.0, 0.0, 1.0)).unwrap();
        assert!((k - (3.0 + 5.0_f64.sqrt()) / 2.0).abs() < 1e-14);
        assert_eq!(condition_number_svd(&Mat2::ZERO), Err(Error::UndefinedCondition));
        assert_eq!(condition_number_svd(&Mat2::new(1.0, 2.0, 2.0, 4.0)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn kappa_a_examples() {
        assert!((kappa_a_closed_form(0.0, FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert!((kappa_a_closed_form(1.0, 1.0 - 3.0 * FRAC_PI_2) - 1.0).abs() < 1e-12);
        assert_eq!(kappa_a_closed_form(0.7, 0.7), f64::INFINITY);
        assert_eq!(kappa_a_closed_form(0.0, PI), f64::INFINITY);
        let k = kappa_a_closed_form(0.0, FRAC_PI_3);
        assert!((k - 3.0_f64.sqrt()).abs() < 1e-12);
        let q = posture_from_bar_angles(&iso(), 0.0, FRAC_PI_3).unwrap();
        assert!((condition_number_svd(&matrix_a(&q)).unwrap() - k).abs() < 1e-12);
        // printed ratio is below 1 for obtuse differences; normalized here
        assert!(kappa_a_closed_form(0.0, 2.5) >= 1.0);
    }

    #[test]
    fn kappa_b_examples() {
        assert!((kappa_b_closed_form(0.3, FRAC_PI_2 - 0.3, 0.0, FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert_eq!(kappa_b_closed_form(FRAC_PI_2, 1.0, 0.0, FRAC_PI_2), f64::INFINITY);
        let k = kappa_b_closed_form(0.0, FRAC_PI_2 + FRAC_PI_3, 0.0, FRAC_PI_2);
        assert!((k - 2.0).abs() < 1e-12);
        let q = posture_from_bar_angles(&iso(), 0.0, FRAC_PI_2 + FRAC_PI_3).unwrap();
        assert!((condition_number_svd(&matrix_b(&q, &iso())).unwrap() - k).abs() < 1e-12);
    }

    #[test]
    fn isotropy_residual_examples() {
        let d = iso();
        let q = posture_from_bar_angles(&d, 0.0, FRAC_PI_2).unwrap();
        let (ri, rii) = isotropy_conditions_jinv(&q, &d).unwrap();
        assert!(ri.abs() < 1e-15 && rii.abs() < 1e-15);
        assert!(is_isotropic(&q, &d, IsotropyTol::for_design(&d)));

        // orthogonal bars, unequal gains
        let q = posture_from_bar_angles(&d, 0.3, 0.3 - FRAC_PI_2).unwrap();
        let (ri, rii) = isotropy_conditions_jinv(&q, &d).unwrap();
        assert!(ri.abs() > 1e-3);
        assert!(rii.abs() < 1e-15);

        // equal gains c₁ = c₂ = cos(π/12) with θ₂ − θ₁ = π/3
        let q = posture_from_bar_angles(&d, PI / 12.0, 5.0 * PI / 12.0).unwrap();
        let (ri, rii) = isotropy_conditions_jinv(&q, &d).unwrap();
        assert!(ri.abs() < 1e-12);
        assert!((rii - 0.5).abs() < 1e-12);

        let q = posture_from_bar_angles(&d, FRAC_PI_2, 0.5).unwrap();
        assert!(matches!(isotropy_conditions_jinv(&q, &d), Err(Error::SerialSingular { .. })));
    }

    #[test]
    fn is_isotropic_tolerances() {
        let d = iso();
        let tol = IsotropyTol::for_design(&d);
        assert!(tol.accepts((1e-12, 1e-12)));
        assert!(!tol.accepts((1e-6, 0.0)));
        let q = posture_from_bar_angles(&d, 0.4, 0.4 + PI).unwrap();
        assert!(!is_isotropic(&q, &d, tol));
    }

    #[test]
    fn report_eigenvalues_match_closed_form() {
        let d = iso();
        let q = posture_from_bar_angles(&d, 0.2, 1.3).unwrap();
        let r = ConditioningReport::compute(&q, &d);
        let c = (q.theta1 - q.theta2).cos();
        assert!((r.etas.0 - (1.0 + c.abs())).abs() < 1e-14);
        assert!((r.etas.1 - (1.0 - c.abs())).abs() < 1e-14);
        assert!(r.kappa_a >= 1.0 && r.kappa_b >= 1.0 && r.kappa_jinv >= 1.0);
    }
}
