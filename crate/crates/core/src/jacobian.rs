//! Parallel and serial Jacobians of the velocity model `A ṗ = B ρ̇`, the
//! kinematic Jacobian `J = A⁻¹B` and its inverse, and singularity
//! classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{DesignParams, ManipConfig};
use crate::linalg::{Mat2, Mat3};

/// Default relative determinant tolerance: a Jacobian is singular when
/// `|det| ≤ tol·L1·L2`.
pub const DEFAULT_SINGULARITY_TOL: f64 = 1e-9;

/// Parallel Jacobian: rows `(p − c)ᵀ` and `(p − d)ᵀ`.
pub fn matrix_a(config: &ManipConfig) -> Mat2 {
    Mat2::from_rows(config.p - config.c, config.p - config.d)
}

/// Serial Jacobian `diag(L1·cos(θ₁ − α₁), L2·cos(θ₂ − α₂))`.
pub fn matrix_b(config: &ManipConfig, design: &DesignParams) -> Mat2 {
    Mat2::diag(design.l1 * (config.theta1 - design.alpha1).cos(), design.l2 * (config.theta2 - design.alpha2).cos())
}

fn det_scale(design: &DesignParams) -> f64 {
    design.l1 * design.l2
}

/// `J = A⁻¹B`, mapping actuator rates to end-point velocity.
pub fn kinematic_jacobian(config: &ManipConfig, design: &DesignParams, tol: f64) -> Result<Mat2> {
    let a = matrix_a(config);
    let det = a.det();
    if det.abs() <= tol * det_scale(design) {
        return Err(Error::ParallelSingular { det });
    }
    let a_inv = a.inverse().ok_or(Error::ParallelSingular { det })?;
    Ok(a_inv * matrix_b(config, design))
}

/// `J⁻¹ = B⁻¹A`; row `i` is the bar vector divided by `Lᵢ·cos(θᵢ − αᵢ)`.
pub fn inverse_kinematic_jacobian(config: &ManipConfig, design: &DesignParams, tol: f64) -> Result<Mat2> {
    let b = matrix_b(config, design);
    let det = b.det();
    if det.abs() <= tol * det_scale(design) || b.get(0, 0) == 0.0 || b.get(1, 1) == 0.0 {
        return Err(Error::SerialSingular { det });
    }
    let a = matrix_a(config);
    Ok(Mat2::from_rows(a.row(0).scale(1.0 / b.get(0, 0)), a.row(1).scale(1.0 / b.get(1, 1))))
}

/// Singularity type of a posture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularityClass {
    Regular,
    ParallelSingular,
    SerialSingular,
    DoublySingular,
    Structural,
}

impl SingularityClass {
    pub fn is_singular(self) -> bool {
        self != SingularityClass::Regular
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SingularityClass::Regular => "regular",
            SingularityClass::ParallelSingular => "parallel",
            SingularityClass::SerialSingular => "serial",
            SingularityClass::DoublySingular => "doubly",
            SingularityClass::Structural => "structural",
        }
    }
}

impl std::fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn classify(det_a: f64, det_b: f64, coincident: bool, design: &DesignParams, tol: f64) -> SingularityClass {
    if coincident {
        return SingularityClass::Structural;
    }
    let bound = tol * det_scale(design);
    match (det_a.abs() <= bound, det_b.abs() <= bound) {
        (true, true) => SingularityClass::DoublySingular,
        (true, false) => SingularityClass::ParallelSingular,
        (false, true) => SingularityClass::SerialSingular,
        (false, false) => SingularityClass::Regular,
    }
}

/// Coincident elbows dominate; otherwise the class follows which of
/// `det A`, `det B` vanish within `tol·L1·L2`.
pub fn classify_singularity(config: &ManipConfig, design: &DesignParams, tol: f64) -> SingularityClass {
    classify(matrix_a(config).det(), matrix_b(config, design).det(), config.elbows_coincide(design), design, tol)
}

/// Every Jacobian of one posture. `j` and `j_inv` are absent at parallel
/// and serial singularities respectively.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobianBundle {
    pub a: Mat2,
    pub b: Mat2,
    pub det_a: f64,
    pub det_b: f64,
    pub j: Option<Mat2>,
    pub j_inv: Option<Mat2>,
    pub class: SingularityClass,
}

impl JacobianBundle {
    pub fn compute(config: &ManipConfig, design: &DesignParams, tol: f64) -> Self {
        let a = matrix_a(config);
        let b = matrix_b(config, design);
        let (det_a, det_b) = (a.det(), b.det());
        let class = classify(det_a, det_b, config.elbows_coincide(design), design, tol);
        let structural = class == SingularityClass::Structural;
        JacobianBundle {
            a,
            b,
            det_a,
            det_b,
            j: (!structural).then(|| kinematic_jacobian(config, design, tol).ok()).flatten(),
            j_inv: (!structural).then(|| inverse_kinematic_jacobian(config, design, tol).ok()).flatten(),
            class,
        }
    }
}

/// Jacobian of the serial three-axis reference machine: the identity.
pub fn reference_jacobian_ppp() -> Mat3 {
    Mat3::IDENTITY
}

/// Embeds the planar Jacobian with a decoupled third prismatic axis:
/// `[[J, 0], [0, 1]]`.
pub fn hybrid_jacobian_3axis(j: &Mat2) -> Mat3 {
    Mat3([[j.get(0, 0), j.get(0, 1), 0.0], [j.get(1, 0), j.get(1, 1), 0.0], [0.0, 0.0, 1.0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{forward_kinematics, posture_from_bar_angles, BranchSelector, Sign};
    use crate::linalg::Vec2;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    const TOL: f64 = DEFAULT_SINGULARITY_TOL;

    fn iso() -> DesignParams {
        DesignParams::isotropic(2.0, 1.0).unwrap()
    }

    #[test]
    fn matrix_a_examples() {
        let d = iso();
        let q = posture_from_bar_angles(&d, 0.0, FRAC_PI_2).unwrap();
        let a = matrix_a(&q);
        assert!(a.max_abs_diff(&Mat2::IDENTITY) < 1e-12);
        assert!((a.det() - 1.0).abs() < 1e-12);

        let q = posture_from_bar_angles(&d, 0.4, 0.4).unwrap();
        assert!(matrix_a(&q).det().abs() < 1e-15);

        // row cross product e(0) × e(π/3) = sin(π/3)
        let q = posture_from_bar_angles(&d, 0.0, FRAC_PI_3).unwrap();
        assert!((matrix_a(&q).det() - 0.866_025_403_784_438_6).abs() < 1e-12);
    }

    #[test]
    fn matrix_b_examples() {
        let d = iso();
        let q = posture_from_bar_angles(&d, 0.0, FRAC_PI_2).unwrap();
        assert!(matrix_b(&q, &d).max_abs_diff(&Mat2::IDENTITY) < 1e-15);

        let q = posture_from_bar_angles(&d, FRAC_PI_2, 1.0).unwrap();
        let b = matrix_b(&q, &d);
        assert!(b.get(0, 0).abs() < 1e-15 && b.det().abs() < 1e-15);

        let d2 = DesignParams::isotropic(2.0, 2.0).unwrap();
        let q = posture_from_bar_angles(&d2, FRAC_PI_4, FRAC_PI_2).unwrap();
        let b = matrix_b(&q, &d2);
        let projection = |bar: Vec2, axis: Vec2| bar.dot(axis);
        assert!((b.get(0, 0) - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((b.get(1, 1) - 2.0).abs() < 1e-12);
        assert!((b.get(0, 0) - projection(q.p - q.c, d2.axis1())).abs() < 1e-12);
        assert!((b.get(1, 1) - projection(q.p - q.d, d2.axis2())).abs() < 1e-12);
    }

    #[test]
    fn jacobians_at_isotropic_posture_are_identity() {
        let d = iso();
        let q = forward_kinematics(&d, (1.0, 1.0), BranchSelector::default()).unwrap();
        let j = kinematic_jacobian(&q, &d, TOL).unwrap();
        let j_inv = inverse_kinematic_jacobian(&q, &d, TOL).unwrap();
        assert!(j.max_abs_diff(&Mat2::IDENTITY) < 1e-12);
        assert!(j_inv.max_abs_diff(&Mat2::IDENTITY) < 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let d = iso();
        let q = posture_from_bar_angles(&d, 0.0, FRAC_PI_2 + 0.1).unwrap();
        let j = kinematic_jacobian(&q, &d, TOL).unwrap();
        let branch = q.branch(&d);
        let h = 1e-6;
        for k in 0..2 {
            let mut plus = q.rho;
            let mut minus = q.rho;
            if k == 0 {
                plus.0 += h;
                minus.0 -= h;
            } else {
                plus.1 += h;
                minus.1 -= h;
            }
            let fp = forward_kinematics(&d, plus, branch).unwrap().p;
            let fm = forward_kinematics(&d, minus, branch).unwrap().p;
            let fd = (fp - fm).scale(0.5 / h);
            assert!((fd - j.col(k)).norm() < 1e-5, "column {k}: {fd:?} vs {:?}", j.col(k));
        }
    }

    #[test]
    fn singular_jacobians_are_errors() {
        let d = iso();
        let q = posture_from_bar_angles(&d, 0.2, 0.2 + PI).unwrap();
        assert!(matches!(kinematic_jacobian(&q, &d, TOL), Err(Error::ParallelSingular { .. })));
        let q = posture_from_bar_angles(&d, FRAC_PI_2, 1.0).unwrap();
        assert!(matches!(inverse_kinematic_jacobian(&q, &d, TOL), Err(Error::SerialSingular { .. })));
        let bundle = JacobianBundle::compute(&q, &d, TOL);
        assert!(bundle.j_inv.is_none() && bundle.j.is_some());
    }

    #[test]
    fn classification_examples() {
        let d = iso();
        let q = posture_from_bar_angles(&d, 0.3 + PI, 0.3).unwrap();
        assert_eq!(classify_singularity(&q, &d, TOL), SingularityClass::ParallelSingular);

        let q = forward_kinematics(&d, (1.0, 1.0), BranchSelector::with_assembly(Sign::Minus)).unwrap();
        assert!((q.theta1 + FRAC_PI_2).abs() < 1e-12);
        assert_eq!(classify_singularity(&q, &d, TOL), SingularityClass::SerialSingular);

        let q = forward_kinematics(&d, (1.0, 1.0), BranchSelector::default()).unwrap();
        assert_eq!(classify_singularity(&q, &d, TOL), SingularityClass::Regular);

        // opposite vertical bars: θ₁ − α₁ = π/2 and θ₁ − θ₂ = π
        let q = posture_from_bar_angles(&d, FRAC_PI_2, -FRAC_PI_2).unwrap();
        assert_eq!(classify_singularity(&q, &d, TOL), SingularityClass::DoublySingular);
    }

    #[test]
    fn coincident_elbows_are_structural() {
        let d = iso();
        let (c, _) = d.elbows((2.0, 2.0));
        let q =
            ManipConfig { rho: (2.0, 2.0), p: c + Vec2::new(0.0, 1.0), c, d: c, theta1: FRAC_PI_2, theta2: FRAC_PI_2 };
        assert_eq!(classify_singularity(&q, &d, TOL), SingularityClass::Structural);
        let bundle = JacobianBundle::compute(&q, &d, TOL);
        assert!(bundle.j.is_none() && bundle.j_inv.is_none());
    }

    #[test]
    fn hybrid_embedding() {
        assert_eq!(hybrid_jacobian_3axis(&Mat2::IDENTITY), reference_jacobian_ppp());
        let j = Mat2::new(1.0, 0.2, 0.0, 1.0);
        let h = hybrid_jacobian_3axis(&j);
        assert_eq!(h.0, [[1.0, 0.2, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let j = Mat2::new(0.3, -1.2, 2.5, 0.7);
        assert!((hybrid_jacobian_3axis(&j).det() - j.det()).abs() < 1e-15);
    }
}
