//! `a_{n+1} = α a_n + β a_{n−1}`, `a_0 = a`, `a_1 = b`.
//!
//! With distinct roots λ₁, λ₂ and `a_n = Aλ₁ⁿ + Bλ₂ⁿ`,
//! `b_n = −AB(λ₁λ₂)^{n−1}(λ₁−λ₂)²`. The constants `A`, `B` are irrational in
//! general, so everything here goes through
//!
//! ```text
//! S = abα − b² + a²β = AB·(λ₁−λ₂)² = (b − aλ₂)(aλ₁ − b),
//! ```
//!
//! giving `b_n = −S·(−β)^{n−1}` over the rationals.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ell::{self, DEFAULT_DEPTH, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::poly::{Enclosure, Poly};
use crate::rational::Rational;
use crate::recurrence::RecurrenceSpec;
use crate::verdict::{Property, Verdict};

use super::{theorem, CONE, CONSTANT_TIGHT};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantSecondOrder {
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub beta: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub a: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub b: Rational,
}

impl ConstantSecondOrder {
    pub fn new(alpha: Rational, beta: Rational, a: Rational, b: Rational) -> Self {
        Self { alpha, beta, a, b }
    }

    /// `Some` when `spec` is second order with every `p_k = 0`.
    pub fn from_spec(spec: &RecurrenceSpec) -> Option<Self> {
        (spec.order() == 2 && spec.has_constant_coefficients()).then(|| Self {
            alpha: spec.q()[0].clone(),
            beta: spec.q()[1].clone(),
            a: spec.initial()[0].clone(),
            b: spec.initial()[1].clone(),
        })
    }

    pub fn to_spec(&self) -> RecurrenceSpec {
        RecurrenceSpec::constant_second_order(self.alpha.clone(), self.beta.clone(), self.a.clone(), self.b.clone())
    }

    /// `D = α² + 4β`.
    pub fn discriminant(&self) -> Rational {
        &self.alpha * &self.alpha + Rational::from_integer(4.into()) * &self.beta
    }

    /// `S = abα − b² + a²β`.
    pub fn s_value(&self) -> Rational {
        &self.a * &self.b * &self.alpha - &self.b * &self.b + &self.a * &self.a * &self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    DistinctReal,
    Repeated,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootData {
    #[serde(with = "crate::rational::serde_str")]
    pub discriminant: Rational,
    pub kind: RootKind,
    /// `λ₁ ≥ λ₂` when real.
    pub lambda1: Option<Enclosure>,
    pub lambda2: Option<Enclosure>,
}

pub fn roots_const(cs: &ConstantSecondOrder) -> RootData {
    roots_const_with_width(cs, &Rational::new(1.into(), num_bigint::BigInt::one() << 30))
}

pub fn roots_const_with_width(cs: &ConstantSecondOrder, width: &Rational) -> RootData {
    let d = cs.discriminant();
    let kind = if d.is_positive() {
        RootKind::DistinctReal
    } else if d.is_zero() {
        RootKind::Repeated
    } else {
        RootKind::Complex
    };
    let (lambda1, lambda2) = match kind {
        RootKind::Complex => (None, None),
        RootKind::Repeated => {
            let r = &cs.alpha / Rational::from_integer(2.into());
            (Some(Enclosure::exact(r.clone())), Some(Enclosure::exact(r)))
        }
        RootKind::DistinctReal => {
            let chi = Poly::from_descending(&[Rational::one(), -cs.alpha.clone(), -cs.beta.clone()]);
            let mut roots = chi.real_roots(width);
            debug_assert_eq!(roots.len(), 2);
            let l1 = roots.pop();
            let l2 = roots.pop();
            (l1, l2)
        }
    };
    RootData { discriminant: d, kind, lambda1, lambda2 }
}

/// `S = AB·(λ₁−λ₂)²`, whose sign is the sign of `AB` when `D > 0`.
pub fn ab_product_sign(cs: &ConstantSecondOrder) -> Result<Rational> {
    if !cs.discriminant().is_positive() {
        return Err(Error::Hypothesis(format!("discriminant {} is not positive", cs.discriminant())));
    }
    Ok(cs.s_value())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormLC {
    /// `K = −AB·(λ₁λ₂)⁻¹(λ₁−λ₂)²`, so that `b_n = K μⁿ`.
    pub coefficient_k: String,
    /// `μ = λ₁λ₂ = −β`.
    #[serde(with = "crate::rational::serde_str")]
    pub mu: Rational,
    /// `AB = S / D`.
    #[serde(with = "crate::rational::serde_str")]
    pub product_ab: Rational,
    /// `(λ₁−λ₂)² = D`.
    #[serde(with = "crate::rational::serde_str")]
    pub factor_sq: Rational,
}

impl ClosedFormLC {
    /// `b_n = −AB·μ^{n−1}·D` for `n ≥ 1`.
    pub fn predicted_b(&self, n: usize) -> Rational {
        assert!(n >= 1, "b_n is defined for n >= 1");
        -(&self.product_ab * num_traits::pow(self.mu.clone(), n - 1) * &self.factor_sq)
    }
}

pub fn closed_form_b(cs: &ConstantSecondOrder) -> Result<ClosedFormLC> {
    let s = ab_product_sign(cs)?;
    let d = cs.discriminant();
    let mu = -cs.beta.clone();
    let coefficient_k = if mu.is_zero() {
        format!("b_1 = {}, b_n = 0 for n >= 2", -s.clone())
    } else {
        format!("{}", -(&s / &mu))
    };
    Ok(ClosedFormLC { coefficient_k, mu, product_ab: &s / &d, factor_sq: d })
}

pub fn classify_const(cs: &ConstantSecondOrder) -> Verdict {
    classify_const_with(cs, DEFAULT_DEPTH, DEFAULT_HORIZON)
}

/// Decides infinite log-concavity when `D > 0`:
/// proved iff `S = 0`, or `S ≤ 0` with `β ≤ 0`. The `β = 0` case (root 0)
/// has `b_1 = −S` and `b_n = 0` afterwards, so it follows the sign of `S`.
pub fn classify_const_with(cs: &ConstantSecondOrder, depth: usize, horizon: usize) -> Verdict {
    let d = cs.discriminant();
    let spec = cs.to_spec();
    if !d.is_positive() {
        let depth = depth.max(1);
        let oracle = ell::oracle(&spec, depth, horizon.max(1 + 2 * depth));
        let kind = if d.is_zero() { "repeated root" } else { "complex roots" };
        let facts = vec![format!("D = alpha^2 + 4 beta = {d}")];
        let negative = oracle.as_ref().ok().and_then(|o| o.witness());
        return Verdict::inconclusive(
            CONSTANT_TIGHT,
            Property::InfinitelyLogConcave,
            format!("theorem needs distinct real roots; {kind}"),
            facts,
            negative,
        );
    }
    let s = cs.s_value();
    let mut facts = vec![
        format!("D = alpha^2 + 4 beta = {d} > 0"),
        format!("beta = {}", cs.beta),
        format!("S = a b alpha - b^2 + a^2 beta = {s}"),
        format!("AB = S / D = {}", &s / &d),
    ];
    let proved = s.is_zero() || (!s.is_positive() && !cs.beta.is_positive());
    if proved {
        facts.push(if s.is_zero() {
            "S = 0: b_n = 0 for all n >= 1".to_string()
        } else if cs.beta.is_zero() {
            "beta = 0, S < 0: b_1 = -S > 0, b_n = 0 for n >= 2".to_string()
        } else {
            "beta < 0, S <= 0: b_n = -S (-beta)^(n-1) >= 0".to_string()
        });
        return Verdict::proved(
            CONSTANT_TIGHT,
            Property::InfinitelyLogConcave,
            crate::verdict::Scope::AllIndices,
            theorem::CONSTANT_TIGHT,
            facts,
        );
    }
    facts.push("b_n = -S (-beta)^(n-1) takes a negative value".to_string());
    // b_1 = −S or b_2 = Sβ is already negative
    let witness = ell::oracle(&spec, 1, 3).ok().and_then(|o| o.level_one_witness());
    match witness {
        Some(w) => Verdict::refuted(CONSTANT_TIGHT, Property::LogConcave, w, facts),
        None => Verdict::inconclusive(
            CONSTANT_TIGHT,
            Property::LogConcave,
            "closed form predicts a negative b_n but the oracle found none",
            facts,
            None,
        ),
    }
}

/// Membership of `(a, b)` in `{(b − aλ₂)(aλ₁ − b) ≤ 0}`, needs `D > 0`, `β < 0`.
pub fn cone_membership(cs: &ConstantSecondOrder) -> Verdict {
    let d = cs.discriminant();
    if !d.is_positive() || !cs.beta.is_negative() {
        let mut failed = Vec::new();
        if !d.is_positive() {
            failed.push(format!("D = {d} is not > 0"));
        }
        if !cs.beta.is_negative() {
            failed.push(format!("beta = {} is not < 0", cs.beta));
        }
        return Verdict::inconclusive(CONE, Property::InCone, failed.join("; "), Vec::new(), None);
    }
    let s = cs.s_value();
    let inside = !s.is_positive();
    let facts = vec![
        format!("D = {d} > 0"),
        format!("beta = {} < 0", cs.beta),
        format!("(b - a l2)(a l1 - b) = S = {s} {} 0", if inside { "<=" } else { ">" }),
    ];
    let property = if inside { Property::InCone } else { Property::OutsideCone };
    Verdict::proved(CONE, property, crate::verdict::Scope::AllIndices, theorem::CONE, facts)
}
