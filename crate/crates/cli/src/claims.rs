//! Asserted values embedded in spec files as `#! claim` lines, e.g.
//!
//! ```text
//! #! claim L^1(4) < 0
//! #! claim a(3) = -5
//! ```
//!
//! `a(n)` is the sequence itself, `b(n)` its first `L` iterate and `L^k(n)`
//! the `k`-th. Each claim is re-evaluated exactly; false ones become errata.

use std::fmt;

use lcrec_core::ell::{first_violation, iterate_l};
use lcrec_core::rational::parse_rational;
use lcrec_core::{Rational, RecurrenceSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub line: usize,
    pub level: usize,
    pub index: usize,
    pub relation: Relation,
    pub value: Rational,
}

fn term(level: usize, index: usize) -> String {
    match level {
        0 => format!("a({index})"),
        1 => format!("b({index})"),
        k => format!("L^{k}({index})"),
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", term(self.level, self.index), self.relation, self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    pub stated: String,
    pub computed_exact: String,
    pub note: Option<String>,
}

fn parse_target(s: &str) -> Option<(usize, usize)> {
    let (head, rest) = s.trim().split_once('(')?;
    let index = rest.strip_suffix(')')?.trim().parse().ok()?;
    let level = match head.trim() {
        "a" => 0,
        "b" => 1,
        h => h.strip_prefix("L^")?.parse().ok()?,
    };
    Some((level, index))
}

fn parse_claim(body: &str) -> Option<(usize, usize, Relation, Rational)> {
    for (token, rel) in [
        ("<=", Relation::Le),
        (">=", Relation::Ge),
        ("<", Relation::Lt),
        (">", Relation::Gt),
        ("=", Relation::Eq),
    ] {
        if let Some((lhs, rhs)) = body.split_once(token) {
            let (level, index) = parse_target(lhs)?;
            let value = parse_rational(rhs.trim())?.ok()?;
            return Some((level, index, rel, value));
        }
    }
    None
}

pub fn parse_claims(text: &str) -> CliResult<Vec<Claim>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some(rest) = line.trim().strip_prefix("#!") else { continue };
        let Some(body) = rest.trim().strip_prefix("claim") else { continue };
        let (level, index, relation, value) = parse_claim(body.trim())
            .ok_or_else(|| CliError::Input(format!("line {}: malformed claim '{}'", i + 1, body.trim())))?;
        if index < level {
            return Err(CliError::Input(format!("line {}: {} is undefined", i + 1, term(level, index))));
        }
        out.push(Claim { line: i + 1, level, index, relation, value });
    }
    Ok(out)
}

/// `None` when the claim holds.
pub fn check(spec: &RecurrenceSpec, claim: &Claim) -> CliResult<Option<Erratum>> {
    let up_to = (claim.index + claim.level).max(spec.order() - 1);
    let window = iterate_l(&spec.generate(up_to)?, claim.level)?;
    let actual = window.at(claim.index)?.clone();
    if claim.relation.holds(&actual, &claim.value) {
        return Ok(None);
    }
    let note = if claim.relation == Relation::Lt && claim.value == Rational::from_integer(0.into()) {
        let wider = iterate_l(&spec.generate(up_to + 16)?, claim.level)?;
        Some(match first_violation(&wider) {
            Some(k) => format!(
                "first negative value at this level: {} = {}",
                term(claim.level, k),
                wider.at(k)?
            ),
            None => format!("no negative value at this level up to index {}", wider.end()),
        })
    } else {
        None
    };
    Ok(Some(Erratum {
        stated: claim.to_string(),
        computed_exact: format!("{} = {}", term(claim.level, claim.index), actual),
        note,
    }))
}

pub fn errata(spec: &RecurrenceSpec, text: &str) -> CliResult<Vec<Erratum>> {
    parse_claims(text)?.iter().filter_map(|c| check(spec, c).transpose()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_targets() {
        let c = parse_claims("#! claim L^1(4) < 0\n# plain comment\n#! claim a(3) = -5\n#! claim b(2) >= 1/2").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!((c[0].level, c[0].index, c[0].relation), (1, 4, Relation::Lt));
        assert_eq!(c[1].to_string(), "a(3) = -5");
        assert_eq!(c[2].to_string(), "b(2) >= 1/2");
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_claims("#! claim x(1) < 0").is_err());
        assert!(parse_claims("#! claim L^2(1) < 0").is_err());
    }

    #[test]
    fn failure_example_erratum() {
        let spec = RecurrenceSpec::parse("order=2; p=[1,-1]; q=[0,0]; initial=[1,2]").unwrap();
        let e = errata(&spec, "#! claim b(4) < 0\n#! claim a(3) = -2").unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].stated, "b(4) < 0");
        assert_eq!(e[0].computed_exact, "b(4) = 25");
        assert_eq!(e[0].note.as_deref(), Some("first negative value at this level: b(5) = -71"));
    }
}
