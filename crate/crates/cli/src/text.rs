//! Human-readable rendering. Decimal values here are display-only.

use std::fmt::Write as _;

use lcrec_core::ell::OracleReport;
use lcrec_core::rational::{to_decimal, Approx};
use lcrec_core::{Certificate, Rational, Scope, SequenceWindow, Verdict};
use serde::{Deserialize, Serialize};

use crate::report::AnalysisReport;
use crate::samples::{FixedReport, ResidualSummary};

const DIGITS: usize = 20;

/// Up to 20 significant digits, truncated, trailing zeros dropped.
pub fn decimal(r: &Rational) -> String {
    let s = to_decimal(r, DIGITS);
    let (mantissa, exp) = match s.find('e') {
        Some(i) => s.split_at(i),
        None => (s.as_str(), ""),
    };
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{mantissa}{exp}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalApprox {
    pub value: String,
    pub approx: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRow {
    pub index: usize,
    #[serde(with = "lcrec_core::rational::serde_str")]
    pub value: Rational,
    pub decimal: DecimalApprox,
}

pub fn term_rows(w: &SequenceWindow) -> Vec<TermRow> {
    w.iter()
        .map(|(index, v)| TermRow {
            index,
            value: v.clone(),
            decimal: DecimalApprox { value: decimal(v), approx: true },
        })
        .collect()
}

pub fn terms(w: &SequenceWindow) -> String {
    let mut out = String::new();
    for (n, v) in w.iter() {
        let _ = writeln!(out, "{n}: {v}  ≈ {}", decimal(v));
    }
    out
}

fn scope(s: &Scope) -> String {
    match s {
        Scope::AllIndices => "all n".to_string(),
        Scope::Window { start, end } => format!("{start} <= n <= {end}"),
    }
}

pub fn verdict(v: &Verdict) -> String {
    let mut out = format!("[{}] {}: {} ({}", v.criterion, v.status, v.property, scope(&v.scope));
    out.push_str(")\n");
    match &v.certificate {
        Certificate::Theorem { theorem, facts } => {
            let _ = writeln!(out, "    by: {theorem}");
            for f in facts {
                let _ = writeln!(out, "    - {f}");
            }
        }
        Certificate::Counterexample { witness, facts } => {
            let _ = writeln!(out, "    witness: L^{}(a)_{} = {}", witness.level, witness.index, witness.value);
            for f in facts {
                let _ = writeln!(out, "    - {f}");
            }
        }
        Certificate::Evidence { reason, facts, negative } => {
            let _ = writeln!(out, "    reason: {reason}");
            for f in facts {
                let _ = writeln!(out, "    - {f}");
            }
            if let Some(w) = negative {
                let _ = writeln!(out, "    negative iterate: L^{}(a)_{} = {}", w.level, w.index, w.value);
            }
        }
    }
    out
}

pub fn analysis(r: &AnalysisReport) -> String {
    let mut out = format!("spec: {}\n\n", r.spec);
    for v in &r.criteria {
        out.push_str(&verdict(v));
    }
    let _ = writeln!(out, "\noracle (depth {}, horizon {}):", r.oracle.depth, r.oracle.horizon);
    for l in &r.oracle.levels {
        let state = match (l.first_negative, l.all_zero) {
            (Some(k), _) => format!("first negative at n = {k}"),
            (None, true) => "all zero".to_string(),
            (None, false) => "nonnegative".to_string(),
        };
        let _ = writeln!(out, "  level {} on [{}, {}]: {state}, min {}", l.level, l.start, l.end, l.min);
    }
    let o = &r.overall;
    let _ = write!(out, "\noverall: {}", o.status);
    if let Some(p) = o.property {
        let _ = write!(out, " ({p})");
    }
    if let Some(c) = &o.criterion {
        let _ = write!(out, " via {c}");
    }
    if let Some(w) = &o.witness {
        let _ = write!(out, ", witness L^{}(a)_{} = {}", w.level, w.index, w.value);
    }
    let _ = writeln!(out, "\n  log-concave: {}\n  infinitely log-concave: {}", o.log_concave, o.infinitely_log_concave);
    if !r.errata.is_empty() {
        out.push_str("\nerrata:\n");
        for e in &r.errata {
            let _ = writeln!(out, "  stated: {}  computed exact: {}", e.stated, e.computed_exact);
            if let Some(n) = &e.note {
                let _ = writeln!(out, "    {n}");
            }
        }
    }
    out
}

pub fn oracle(r: &OracleReport) -> String {
    let mut out = format!("depth {}, horizon {}\n", r.depth, r.horizon);
    for l in &r.levels {
        let neg = l.first_negative.map(|k| format!(", first negative at n = {k}")).unwrap_or_default();
        let _ = writeln!(out, "level {} on [{}, {}]{neg}", l.level, l.window.start(), l.window.end());
        for (n, v) in l.window.iter() {
            let _ = writeln!(out, "  {n}: {v}");
        }
    }
    out
}

fn residual_line(name: &str, s: &ResidualSummary) -> String {
    let f = |a: &Approx| format!("{:.12e}", a.value);
    format!("{name}: min ≈ {}, max ≈ {}{}\n", f(&s.min), f(&s.max), if s.constant { " (constant)" } else { "" })
}

pub fn fixed(r: &FixedReport) -> String {
    let mut out = format!("window [{}, {}], tolerance {}\n", r.start, r.end, decimal(&r.tolerance));
    out.push_str(&residual_line("L(a)_n", &r.l_values));
    out.push_str(&residual_line("b_n - a_n", &r.direct));
    out.push_str(&residual_line("four-term defect", &r.four_term));
    out.push_str(&verdict(&r.verdict));
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_trimmed() {
        assert_eq!(decimal(&Rational::from_integer(46.into())), "46");
        assert_eq!(decimal(&Rational::new(1.into(), 4.into())), "0.25");
        assert_eq!(decimal(&Rational::new(1.into(), 3.into())), "0.33333333333333333333");
        assert_eq!(decimal(&Rational::new((-5).into(), 2.into())), "-2.5");
    }
}
