//! The log-concave operator `L(a)_k = a_k² − a_{k+1} a_{k−1}`, its iterates,
//! Turán ratios, the r-factor test, and the brute-force oracle.
//!
//! The oracle is the ground truth the other criteria are checked against: it
//! only ever generates terms and applies `L`, exactly.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};
use crate::recurrence::{RecurrenceSpec, SequenceWindow};
use crate::verdict::Witness;

pub const DEFAULT_DEPTH: usize = 4;
pub const DEFAULT_HORIZON: usize = 64;

/// Rational stand-in for `r_0 = (3 + √5)/2 ≈ 2.618`; `29/11 ≈ 2.636 > r_0`.
pub fn default_r_factor() -> Rational {
    ratio(29, 11)
}

/// Whether `r ≥ (3 + √5)/2`, decided exactly: `2r − 3 ≥ 0` and `(2r − 3)² ≥ 5`.
pub fn at_least_r0(r: &Rational) -> bool {
    let t = r * Rational::from_integer(2.into()) - Rational::from_integer(3.into());
    !t.is_negative() && &t * &t >= Rational::from_integer(5.into())
}

pub fn apply_l(window: &SequenceWindow) -> Result<SequenceWindow> {
    let t = window.terms();
    if t.len() < 3 {
        return Err(Error::WindowTooShort { need: 3, have: t.len() });
    }
    let terms = t.windows(3).map(|w| &w[1] * &w[1] - &w[2] * &w[0]).collect();
    SequenceWindow::new(window.start() + 1, terms)
}

pub fn iterate_l(window: &SequenceWindow, i: usize) -> Result<SequenceWindow> {
    if window.len() < 2 * i + 1 {
        return Err(Error::WindowTooShort { need: 2 * i + 1, have: window.len() });
    }
    (0..i).try_fold(window.clone(), |w, _| apply_l(&w))
}

/// `τ_n = a_{n−1} a_{n+1} / a_n²`, or `None` when `a_n = 0`.
pub fn turan_ratio(window: &SequenceWindow, n: usize) -> Result<Option<Rational>> {
    if n == 0 {
        return Err(Error::OutOfWindow { index: 0, start: window.start(), end: window.end() });
    }
    let prev = window.at(n - 1)?;
    let mid = window.at(n)?;
    let next = window.at(n + 1)?;
    if mid.is_zero() {
        return Ok(None);
    }
    Ok(Some(prev * next / (mid * mid)))
}

/// Smallest index holding a strictly negative term. Zero passes.
pub fn first_violation(window: &SequenceWindow) -> Option<usize> {
    window.iter().find(|(_, t)| t.is_negative()).map(|(i, _)| i)
}

/// First interior index where `a_n² ≥ r a_{n+1} a_{n−1}` fails.
pub fn r_factor_check(window: &SequenceWindow, r: &Rational) -> Result<Option<usize>> {
    let t = window.terms();
    if t.len() < 3 {
        return Err(Error::WindowTooShort { need: 3, have: t.len() });
    }
    Ok(t.windows(3)
        .position(|w| &w[1] * &w[1] < r * &w[2] * &w[0])
        .map(|j| window.start() + 1 + j))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLevel {
    pub level: usize,
    pub window: SequenceWindow,
    pub first_negative: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub depth: usize,
    pub horizon: usize,
    pub levels: Vec<OracleLevel>,
}

impl OracleReport {
    /// Builds levels `0..=depth` from an arbitrary starting window.
    pub fn from_window(window: SequenceWindow, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("oracle depth must be at least 1".into()));
        }
        if window.len() < 2 * depth + 1 {
            return Err(Error::WindowTooShort { need: 2 * depth + 1, have: window.len() });
        }
        let horizon = window.end();
        let mut levels = Vec::with_capacity(depth + 1);
        let mut current = window;
        for level in 0..=depth {
            let next = if level < depth { Some(apply_l(&current)?) } else { None };
            let first_negative = first_violation(&current);
            levels.push(OracleLevel { level, window: current, first_negative });
            match next {
                Some(n) => current = n,
                None => break,
            }
        }
        Ok(Self { depth, horizon, levels })
    }

    pub fn level(&self, i: usize) -> Option<&SequenceWindow> {
        self.levels.get(i).map(|l| &l.window)
    }

    /// The first negative entry at any level `≥ min_level`, scanning levels in
    /// increasing order.
    pub fn witness_from(&self, min_level: usize) -> Option<Witness> {
        self.levels.iter().filter(|l| l.level >= min_level).find_map(|l| {
            l.first_negative.map(|index| Witness {
                level: l.level,
                index,
                value: l.window.get(index).cloned().expect("index recorded from window"),
            })
        })
    }

    /// A negative iterate `L^i` with `i ≥ 1`: a certificate against
    /// (infinite) log-concavity.
    pub fn witness(&self) -> Option<Witness> {
        self.witness_from(1)
    }

    pub fn level_one_witness(&self) -> Option<Witness> {
        self.levels.get(1).and_then(|l| {
            l.first_negative.map(|index| Witness { level: 1, index, value: l.window.get(index).cloned().unwrap() })
        })
    }
}

/// Generates `a_0..=a_horizon` and applies `L` `depth` times. A negative entry
/// is a proof; a clean report only speaks for the examined window.
pub fn oracle(spec: &RecurrenceSpec, depth: usize, horizon: usize) -> Result<OracleReport> {
    let need = spec.order() - 1 + 2 * depth;
    if depth == 0 {
        return Err(Error::InvalidArgument("oracle depth must be at least 1".into()));
    }
    if horizon < need {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} too small for depth {depth}: need at least {need}"
        )));
    }
    OracleReport::from_window(spec.generate(horizon)?, depth)
}
