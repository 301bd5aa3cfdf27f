//! Sequences with `L(a) = a`.
//!
//! Two defects are reported side by side: the direct one `b_n − a_n`, and the
//! four-term recurrence `a_{n+2}a_{n−1} − a_{n+1}a_n − (a_{n+1} − a_n)`. They
//! are independent checks and need not agree; `cosh(nθ)` and `cos(nθ)`, for
//! instance, satisfy `L(a) = −sinh²θ` and `L(a) = sin²θ` respectively, so
//! neither has a zero direct defect.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ell::apply_l;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::recurrence::SequenceWindow;
use crate::verdict::{Property, Scope, Verdict, Witness};

use super::{theorem, FIXED_POINT};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointResiduals {
    /// `r_n = b_n − a_n`.
    pub direct: SequenceWindow,
    /// `s_n = a_{n+2}a_{n−1} − a_{n+1}a_n − a_{n+1} + a_n`.
    pub four_term: SequenceWindow,
}

pub fn fixed_point_residuals(window: &SequenceWindow) -> Result<FixedPointResiduals> {
    if window.len() < 4 {
        return Err(Error::WindowTooShort { need: 4, have: window.len() });
    }
    let b = apply_l(window)?;
    let direct = b.iter().map(|(n, bn)| bn - window.get(n).unwrap()).collect();
    let four_term = window
        .terms()
        .windows(4)
        .map(|w| &w[3] * &w[0] - &w[2] * &w[1] - &w[2] + &w[1])
        .collect();
    Ok(FixedPointResiduals {
        direct: SequenceWindow::new(b.start(), direct)?,
        four_term: SequenceWindow::new(window.start() + 1, four_term)?,
    })
}

fn max_abs(w: &SequenceWindow) -> Rational {
    w.terms().iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
}

/// If the window is fixed by `L` up to `tolerance`, every iterate equals the
/// sequence and infinite log-concavity reduces to nonnegativity of the terms.
pub fn classify_fixed(window: &SequenceWindow, tolerance: &Rational) -> Result<Verdict> {
    let residuals = fixed_point_residuals(window)?;
    let defect = max_abs(&residuals.direct);
    let scope = Scope::Window { start: window.start(), end: window.end() };
    let facts = vec![
        format!("max |b_n - a_n| = {defect}"),
        format!("max |four-term defect| = {}", max_abs(&residuals.four_term)),
        format!("tolerance = {tolerance}"),
    ];
    if &defect > tolerance {
        return Ok(Verdict::inconclusive(
            FIXED_POINT,
            Property::InfinitelyLogConcave,
            "window is not fixed by L",
            facts,
            None,
        )
        .with_scope(scope));
    }
    let floor = -tolerance.clone();
    if window.terms().iter().all(|t| t >= &floor) {
        return Ok(Verdict::proved(FIXED_POINT, Property::InfinitelyLogConcave, scope, theorem::FIXED_POINT, facts));
    }
    // b_n = a_n up to the tolerance, so a clearly negative b_n is the witness.
    let b = apply_l(window)?;
    let witness = b
        .iter()
        .find(|(_, v)| v < &&floor)
        .map(|(index, value)| Witness { level: 1, index, value: value.clone() });
    Ok(match witness {
        Some(w) => Verdict::refuted(FIXED_POINT, Property::InfinitelyLogConcave, w, facts),
        None => Verdict::inconclusive(
            FIXED_POINT,
            Property::InfinitelyLogConcave,
            "negative terms only at the window edges",
            facts,
            None,
        )
        .with_scope(scope),
    })
}
