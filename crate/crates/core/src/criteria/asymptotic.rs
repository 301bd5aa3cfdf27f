//! Limiting characteristic polynomial, Turán-ratio diagnostics and the
//! dominant-root classifier for second-order recurrences.
//!
//! For `a_n ~ C n^α Λⁿ` the Turán ratio behaves like `τ_n = 1 − α/n² + O(n⁻⁴)`;
//! the growth exponent is estimated by a least-squares fit of `1 − τ_n`
//! against `1/n²`. The estimate is a diagnostic only and never feeds a proof.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::ell;
use crate::error::{Error, Result};
use crate::poly::{Enclosure, Poly};
use crate::qform::{build_qform, d2_psd_for_all, default_tolerance, psd_exact, threshold_n};
use crate::rational::{to_f64, Approx, Rational};
use crate::recurrence::{RecurrenceSpec, SequenceWindow};
use crate::verdict::{Property, Scope, Verdict};

use super::{theorem, DOMINANT_ROOT};

const MIN_PROFILE_WINDOW: usize = 16;

/// `χ(λ) = λ^d − p₀λ^{d−1} − ⋯ − p_{d−1}`, highest degree first.
pub fn char_poly(spec: &RecurrenceSpec) -> Vec<Rational> {
    std::iter::once(Rational::one()).chain(spec.p().iter().map(|p| -p.clone())).collect()
}

/// `α⁽ᵏ⁾ = 2 + 2ᵏ(α − 2)`, the solution of `α⁽ᵏ⁺¹⁾ = 2α⁽ᵏ⁾ − 2`.
pub fn alpha_iterate(alpha: &Rational, k: u32) -> Rational {
    let two = Rational::from_integer(2.into());
    &two + num_traits::pow(two.clone(), k as usize) * (alpha - &two)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootEstimate {
    pub enclosure: Enclosure,
    pub value: Approx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticProfile {
    #[serde(with = "crate::rational::serde_str::vec")]
    pub char_poly: Vec<Rational>,
    /// Distinct real roots of `χ`, largest first.
    pub real_roots: Vec<RootEstimate>,
    pub dominant_root: Option<RootEstimate>,
    pub second_root: Option<RootEstimate>,
    /// `d = 2` only: two real roots `Λ₁ > Λ₂ > 0`.
    pub roots_hypothesis: Option<bool>,
    pub all_positive: bool,
    pub tau_defined: bool,
    /// `τ_n` weakly increasing over the window; `None` if some `τ_n` is undefined.
    pub turan_monotone: Option<bool>,
    /// `τ_n < 1` at every checked index.
    pub tau_below_one: Option<bool>,
    pub alpha_estimate: Option<Approx>,
    pub window_start: usize,
    pub window_end: usize,
}

impl AsymptoticProfile {
    pub fn hypotheses_hold(&self) -> bool {
        self.roots_hypothesis == Some(true)
            && self.all_positive
            && self.turan_monotone == Some(true)
            && self.tau_below_one == Some(true)
    }

    pub fn failed_hypotheses(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.roots_hypothesis {
            Some(true) => {}
            Some(false) => out.push("(a) chi does not have two real roots L1 > L2 > 0".to_string()),
            None => out.push("(a) root hypothesis only defined for d = 2".to_string()),
        }
        if !self.all_positive {
            out.push("(b) some a_n <= 0 on the window".to_string());
        }
        match (self.turan_monotone, self.tau_below_one) {
            (Some(true), Some(true)) => {}
            (None, _) | (_, None) => out.push("(c) Turan ratio undefined (a_n = 0)".to_string()),
            (Some(m), Some(b)) => {
                if !m {
                    out.push("(c) Turan ratio not monotone increasing".to_string());
                }
                if !b {
                    out.push("(c) Turan ratio reaches 1".to_string());
                }
            }
        }
        out
    }
}

fn estimate(e: Enclosure) -> RootEstimate {
    let value = Approx::new(e.approx());
    RootEstimate { enclosure: e, value }
}

pub fn dominant_root_profile(spec: &RecurrenceSpec, window: &SequenceWindow) -> Result<AsymptoticProfile> {
    if window.len() < MIN_PROFILE_WINDOW {
        return Err(Error::WindowTooShort { need: MIN_PROFILE_WINDOW, have: window.len() });
    }
    let chi = char_poly(spec);
    let width = Rational::new(1.into(), num_bigint::BigInt::one() << 30);
    let mut roots: Vec<RootEstimate> =
        Poly::from_descending(&chi).real_roots(&width).into_iter().map(estimate).collect();
    roots.reverse();

    let roots_hypothesis = (spec.order() == 2).then(|| {
        let (p0, p1) = (&spec.p()[0], &spec.p()[1]);
        let disc = p0 * p0 + Rational::from_integer(4.into()) * p1;
        disc.is_positive() && p0.is_positive() && p1.is_negative()
    });

    let all_positive = window.terms().iter().all(Signed::is_positive);
    let taus: Vec<(usize, Option<Rational>)> = (window.start() + 1..window.end())
        .filter(|&n| n >= 1)
        .map(|n| Ok((n, ell::turan_ratio(window, n)?)))
        .collect::<Result<_>>()?;
    let tau_defined = taus.iter().all(|(_, t)| t.is_some());
    let (turan_monotone, tau_below_one, alpha_estimate) = if tau_defined {
        let defined: Vec<(usize, Rational)> = taus.into_iter().map(|(n, t)| (n, t.unwrap())).collect();
        let monotone = defined.windows(2).all(|w| w[0].1 <= w[1].1);
        let below = defined.iter().all(|(_, t)| t < &Rational::one());
        let tail = &defined[defined.len() / 2..];
        let (mut sxy, mut sxx) = (0.0f64, 0.0f64);
        for (n, t) in tail {
            let x = 1.0 / (*n as f64 * *n as f64);
            let y = to_f64(&(Rational::one() - t));
            sxy += x * y;
            sxx += x * x;
        }
        let alpha = (sxx > 0.0).then(|| Approx::new(sxy / sxx));
        (Some(monotone), Some(below), alpha)
    } else {
        (None, None, None)
    };

    Ok(AsymptoticProfile {
        char_poly: chi,
        dominant_root: roots.first().cloned(),
        second_root: roots.get(1).cloned(),
        real_roots: roots,
        roots_hypothesis,
        all_positive,
        tau_defined,
        turan_monotone,
        tau_below_one,
        alpha_estimate,
        window_start: window.start(),
        window_end: window.end(),
    })
}

pub fn classify_prec(spec: &RecurrenceSpec, horizon: usize) -> Result<Verdict> {
    classify_prec_with(spec, horizon).map(|(v, _)| v)
}

/// Dominant-root classifier for `d = 2`. A negative `b_n` refutes outright.
/// Otherwise a proof needs the hypotheses on the window, a clean level-1
/// oracle up to `horizon`, and `Q_n ⪰ 0` for every `n ≥ horizon`.
pub fn classify_prec_with(spec: &RecurrenceSpec, horizon: usize) -> Result<(Verdict, AsymptoticProfile)> {
    if spec.order() != 2 {
        return Err(Error::UnsupportedOrder { order: spec.order(), reason: "dominant-root criterion is for d = 2" });
    }
    let window = spec.generate(horizon.max(MIN_PROFILE_WINDOW - 1))?;
    let horizon = window.end();
    let profile = dominant_root_profile(spec, &window)?;
    let oracle = ell::OracleReport::from_window(window, 1)?;
    let window_facts = || {
        vec![
            format!("checked a_0..a_{horizon}"),
            format!("level-1 oracle clean on b_1..b_{}", horizon - 1),
        ]
    };

    if let Some(w) = oracle.level_one_witness() {
        let facts = vec!["log-concavity is necessary for infinite log-concavity".to_string()];
        return Ok((Verdict::refuted(DOMINANT_ROOT, Property::LogConcave, w, facts), profile));
    }

    if !profile.hypotheses_hold() {
        let reason = profile.failed_hypotheses().join("; ");
        let v = Verdict::inconclusive(DOMINANT_ROOT, Property::InfinitelyLogConcave, reason, window_facts(), None);
        return Ok((v, profile));
    }

    let tail = psd_tail(spec, horizon)?;
    let verdict = match tail {
        Some(tail_fact) => {
            let mut facts = window_facts();
            facts.push("chi has real roots L1 > L2 > 0".to_string());
            facts.push("a_n > 0 and tau_n increasing below 1 on the window".to_string());
            facts.push(tail_fact);
            Verdict::proved(DOMINANT_ROOT, Property::InfinitelyLogConcave, Scope::AllIndices, theorem::DOMINANT_ROOT, facts)
        }
        None => Verdict::inconclusive(
            DOMINANT_ROOT,
            Property::InfinitelyLogConcave,
            "hypotheses hold on the window but no PSD argument covers n beyond it",
            window_facts(),
            None,
        )
        .with_scope(Scope::Window { start: 0, end: horizon }),
    };
    Ok((verdict, profile))
}

/// A reason why `Q_n ⪰ 0` for every `n ≥ from`, if one can be certified.
fn psd_tail(spec: &RecurrenceSpec, from: usize) -> Result<Option<String>> {
    if d2_psd_for_all(spec, from)? {
        return Ok(Some(format!("(n p0 + q0)^2 <= -4 (n p1 + q1) for all n >= {from}")));
    }
    let pair = build_qform(spec)?;
    if let Some(n) = threshold_n(&pair, &default_tolerance())? {
        let n = n as usize;
        if (from..n.max(from)).all(|k| psd_exact(&pair.at(k)).psd) {
            return Ok(Some(format!("Q_n PSD pointwise on [{from}, {n}) and for n >= N = {n}")));
        }
    }
    Ok(None)
}
