//! Sampled real sequences for the fixed-point check.
//!
//! One term per line, either `value` or `index value`; `#` starts a comment.
//! Values are decimal literals (`1.5430806348152437`, `-2.5e-3`) or exact
//! rationals, and are read as the exact rationals they denote.

use lcrec_core::criteria::{classify_fixed, fixed_point_residuals};
use lcrec_core::ell::apply_l;
use lcrec_core::rational::{parse_decimal, parse_rational, to_f64, Approx};
use lcrec_core::{Rational, SequenceWindow, Verdict};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Tolerance for sampled (non-rational) windows.
pub fn default_tolerance() -> Rational {
    Rational::new(1.into(), 1_000_000_000.into())
}

pub fn parse_tolerance(text: &str) -> CliResult<Rational> {
    let t = parse_decimal(text).ok_or_else(|| CliError::Input(format!("bad tolerance '{text}'")))?;
    if t.is_negative() {
        return Err(CliError::Input("tolerance must be nonnegative".into()));
    }
    Ok(t)
}

fn parse_value(s: &str) -> Option<Rational> {
    match parse_rational(s) {
        Some(r) => r.ok(),
        None => parse_decimal(s),
    }
}

pub fn parse_samples(text: &str) -> CliResult<SequenceWindow> {
    let mut start = None;
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| CliError::Input(format!("line {}: {what}", i + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (index, value) = match fields.as_slice() {
            [v] => (None, *v),
            [n, v] => (Some(n.parse::<usize>().map_err(|_| bad("bad index"))?), *v),
            _ => return Err(bad("expected 'value' or 'index value'")),
        };
        let expected = start.unwrap_or(0) + terms.len();
        match (index, start) {
            (Some(n), None) => start = Some(n),
            (Some(n), Some(_)) if n != expected => return Err(bad(&format!("expected index {expected}, got {n}"))),
            (None, None) => start = Some(0),
            _ => {}
        }
        terms.push(parse_value(value).ok_or_else(|| bad(&format!("bad number '{value}'")))?);
    }
    if terms.is_empty() {
        return Err(CliError::Input("no samples".into()));
    }
    Ok(SequenceWindow::new(start.unwrap_or(0), terms)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub start: usize,
    pub values: Vec<Approx>,
    pub min: Approx,
    pub max: Approx,
    /// `max − min` within the tolerance.
    pub constant: bool,
}

fn summarize(w: &SequenceWindow, tol: &Rational) -> ResidualSummary {
    let min = w.terms().iter().min().unwrap();
    let max = w.terms().iter().max().unwrap();
    ResidualSummary {
        start: w.start(),
        values: w.terms().iter().map(|v| Approx::new(to_f64(v))).collect(),
        min: Approx::new(to_f64(min)),
        max: Approx::new(to_f64(max)),
        constant: &(max - min) <= tol,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedReport {
    pub start: usize,
    pub end: usize,
    #[serde(with = "lcrec_core::rational::serde_str")]
    pub tolerance: Rational,
    /// `b_n = L(a)_n`.
    pub l_values: ResidualSummary,
    /// `b_n − a_n`.
    pub direct: ResidualSummary,
    /// `a_{n+2}a_{n−1} − a_{n+1}a_n − a_{n+1} + a_n`.
    pub four_term: ResidualSummary,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

pub fn fixed_report(window: &SequenceWindow, tolerance: &Rational) -> CliResult<FixedReport> {
    let residuals = fixed_point_residuals(window)?;
    let b = apply_l(window)?;
    let l_values = summarize(&b, tolerance);
    let direct = summarize(&residuals.direct, tolerance);
    let four_term = summarize(&residuals.four_term, tolerance);
    let verdict = classify_fixed(window, tolerance)?;
    let mut notes = Vec::new();
    let zero_within = |s: &ResidualSummary| s.min.value.abs().max(s.max.value.abs()) <= to_f64(tolerance);
    if l_values.constant && !zero_within(&direct) {
        notes.push(format!(
            "L(a) is constant ~ {:.12} on the window, so the sequence is not fixed by L",
            l_values.min.value
        ));
    }
    if zero_within(&four_term) != zero_within(&direct) {
        notes.push(format!(
            "the four-term recurrence is {} while b_n = a_n is {}; the two fixed-point tests disagree",
            if zero_within(&four_term) { "satisfied" } else { "violated" },
            if zero_within(&direct) { "satisfied" } else { "violated" },
        ));
    }
    Ok(FixedReport {
        start: window.start(),
        end: window.end(),
        tolerance: tolerance.clone(),
        l_values,
        direct,
        four_term,
        verdict,
        notes,
    })
}
