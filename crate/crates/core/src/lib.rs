//! Kinematic, conditioning and workspace analysis of a planar parallel
//! mechanism driven by two prismatic actuators, and the comparison of its
//! isotropic design against the biglide morphology.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atlas;
pub mod cli;
pub mod conditioning;
pub mod config;
pub mod contour;
pub mod error;
pub mod format;
pub mod jacobian;
pub mod kinematics;
pub mod linalg;
pub mod manipulability;
pub mod svg;

pub use error::{Error, Leg, LegFailure, Result};
pub use jacobian::{JacobianBundle, SingularityClass, DEFAULT_SINGULARITY_TOL};
pub use kinematics::{BranchSelector, DesignParams, ManipConfig, Sign};
pub use linalg::{Mat2, Mat3, Point2, Vec2};
pub use manipulability::{AmplificationBounds, AmplificationFactors, Ellipsoid2, ManipReport};
