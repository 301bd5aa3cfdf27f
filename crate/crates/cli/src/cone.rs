//! Grid sweep over initial data `(a, b)` for a fixed constant-coefficient
//! recurrence, flagging membership in `{S ≤ 0}`.

use std::fmt::Write as _;

use lcrec_core::criteria::ConstantSecondOrder;
use lcrec_core::rational::parse_rational;
use lcrec_core::Rational;
use num_traits::Signed;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub a: Rational,
    pub b: Rational,
    pub in_cone: bool,
    pub s: Rational,
}

/// Parses `lo:hi` with rational endpoints.
pub fn parse_range(text: &str) -> CliResult<(Rational, Rational)> {
    let bad = || CliError::Input(format!("bad range '{text}', expected lo:hi"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo = parse_rational(lo.trim()).and_then(Result::ok).ok_or_else(bad)?;
    let hi = parse_rational(hi.trim()).and_then(Result::ok).ok_or_else(bad)?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn axis(lo: &Rational, hi: &Rational, step: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut x = lo.clone();
    while &x <= hi {
        out.push(x.clone());
        x += step;
    }
    out
}

pub fn grid(
    alpha: &Rational,
    beta: &Rational,
    range: &(Rational, Rational),
    step: &Rational,
    parallel: bool,
) -> CliResult<Vec<Cell>> {
    if !step.is_positive() {
        return Err(CliError::Input("step must be positive".into()));
    }
    let probe = ConstantSecondOrder::new(alpha.clone(), beta.clone(), Rational::default(), Rational::default());
    let d = probe.discriminant();
    let mut failed = Vec::new();
    if !beta.is_negative() {
        failed.push(format!("beta < 0 violated (beta = {beta})"));
    }
    if !d.is_positive() {
        failed.push(format!("D = alpha^2 + 4 beta > 0 violated (D = {d})"));
    }
    if !failed.is_empty() {
        return Err(CliError::Input(failed.join("; ")));
    }
    let xs = axis(&range.0, &range.1, step);
    let row = |a: &Rational| -> Vec<Cell> {
        xs.iter()
            .map(|b| {
                let s = ConstantSecondOrder::new(alpha.clone(), beta.clone(), a.clone(), b.clone()).s_value();
                Cell { a: a.clone(), b: b.clone(), in_cone: !s.is_positive(), s }
            })
            .collect()
    };
    if !parallel {
        return Ok(xs.iter().flat_map(row).collect());
    }
    let rows: Vec<Vec<Cell>> = std::thread::scope(|sc| {
        let handles: Vec<_> = xs.iter().map(|a| sc.spawn(move || row(a))).collect();
        handles.into_iter().map(|h| h.join().expect("grid row thread")).collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

pub fn render(cells: &[Cell]) -> String {
    let mut out = String::from("# a b in_cone S\n");
    for c in cells {
        let _ = writeln!(out, "{} {} {} {}", c.a, c.b, u8::from(c.in_cone), c.s);
    }
    out
}
