#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use isoglide::kinematics::posture_from_bar_angles;
use isoglide::{DesignParams, ManipConfig, Mat2, Point2};
use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Margin from the singular loci for "feasible" random postures.
pub const LOCUS_MARGIN: f64 = 1e-3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A design with non-parallel rails and wide stroke limits.
pub fn random_design(rng: &mut impl Rng, equal_bars: bool) -> DesignParams {
    loop {
        let a = Point2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let b = Point2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let alpha1 = rng.random_range(-PI..PI);
        let alpha2 = rng.random_range(-PI..PI);
        if (alpha2 - alpha1).sin().abs() < 0.1 {
            continue;
        }
        let l1 = rng.random_range(0.5..2.0);
        let l2 = if equal_bars { l1 } else { rng.random_range(0.5..2.0) };
        return DesignParams::with_strokes(a, b, alpha1, alpha2, l1, l2, -100.0, 100.0).unwrap();
    }
}

/// A posture away from every singular locus, drawn from random bar angles.
pub fn random_posture(rng: &mut impl Rng, design: &DesignParams) -> ManipConfig {
    loop {
        let t1 = rng.random_range(0.0..TAU);
        let t2 = rng.random_range(0.0..TAU);
        if (t1 - design.alpha1).cos().abs() < LOCUS_MARGIN
            || (t2 - design.alpha2).cos().abs() < LOCUS_MARGIN
            || (t2 - t1).sin().abs() < LOCUS_MARGIN
        {
            continue;
        }
        let q = posture_from_bar_angles(design, t1, t2).unwrap();
        if q.elbows_coincide(design) || !design.stroke_contains(q.rho.0) || !design.stroke_contains(q.rho.1) {
            continue;
        }
        return q;
    }
}

pub fn to_na(m: &Mat2) -> Matrix2<f64> {
    Matrix2::new(m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1))
}

/// Singular values from nalgebra's SVD, descending.
pub fn svd(m: &Mat2) -> (f64, f64) {
    let s = to_na(m).singular_values();
    (s[0].max(s[1]), s[0].min(s[1]))
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}
