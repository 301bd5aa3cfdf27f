//! Tight classifiers for special recurrence families and the asymptotic
//! profile used for the dominant-root criterion. Every classifier returns a
//! [`Verdict`](crate::Verdict); none of them upgrades finite-window evidence
//! to a proof.

mod asymptotic;
mod constant;
mod fixed;

pub use asymptotic::{
    alpha_iterate, char_poly, classify_prec, classify_prec_with, dominant_root_profile, AsymptoticProfile,
    RootEstimate,
};
pub use constant::{
    ab_product_sign, classify_const, classify_const_with, closed_form_b, cone_membership, roots_const,
    roots_const_with_width, ClosedFormLC, ConstantSecondOrder, RootData, RootKind,
};
pub use fixed::{classify_fixed, fixed_point_residuals, FixedPointResiduals};

pub const CONSTANT_TIGHT: &str = "constant-coefficient tight";
pub const CONE: &str = "cone of initial data";
pub const FIXED_POINT: &str = "fixed point of L";
pub const DOMINANT_ROOT: &str = "dominant root";

/// Theorem names quoted in certificates.
pub mod theorem {
    pub const CONSTANT_TIGHT: &str =
        "second-order constant coefficients: L(a) is geometric, L^2(a) = 0, so infinite log-concavity <=> log-concavity";
    pub const CONE: &str = "cone of initial data: (b - a*l2)(a*l1 - b) <= 0";
    pub const FIXED_POINT: &str = "L-fixed sequence: every iterate equals the sequence";
    pub const DOMINANT_ROOT: &str =
        "second-order linear coefficients with dominant real root and monotone Turan ratio: infinite log-concavity <=> log-concavity";
    pub const QFORM_PSD: &str = "b_n = v_n^T Q_n v_n with Q_n PSD";
    pub const QFORM_THRESHOLD: &str = "Q_n = Q0 + n Q1 PSD for n >= N";
}
