//! The Proved / Refuted / Inconclusive answer shape shared by every criterion.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proved,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    LogConcave,
    InfinitelyLogConcave,
    FixedPoint,
    InCone,
    OutsideCone,
}

/// The range of indices a verdict speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Scope {
    AllIndices,
    Window { start: usize, end: usize },
}

/// An exact negative entry `L^level(a)_index = value < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub level: usize,
    pub index: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Certificate {
    /// A theorem applied with every hypothesis checked exactly.
    Theorem { theorem: String, facts: Vec<String> },
    /// An exact negative iterate value.
    Counterexample { witness: Witness, facts: Vec<String> },
    /// Anything short of a proof: inapplicable hypotheses, finite-window
    /// evidence, or an iterate sign that refutes a weaker statement.
    Evidence { reason: String, facts: Vec<String>, negative: Option<Witness> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub status: Status,
    pub property: Property,
    pub scope: Scope,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn proved(
        criterion: &str,
        property: Property,
        scope: Scope,
        theorem: &str,
        facts: Vec<String>,
    ) -> Self {
        Self {
            criterion: criterion.to_string(),
            status: Status::Proved,
            property,
            scope,
            certificate: Certificate::Theorem { theorem: theorem.to_string(), facts },
        }
    }

    pub fn refuted(criterion: &str, property: Property, witness: Witness, facts: Vec<String>) -> Self {
        Self {
            criterion: criterion.to_string(),
            status: Status::Refuted,
            property,
            scope: Scope::AllIndices,
            certificate: Certificate::Counterexample { witness, facts },
        }
    }

    pub fn inconclusive(
        criterion: &str,
        property: Property,
        reason: impl Into<String>,
        facts: Vec<String>,
        negative: Option<Witness>,
    ) -> Self {
        Self {
            criterion: criterion.to_string(),
            status: Status::Inconclusive,
            property,
            scope: Scope::AllIndices,
            certificate: Certificate::Evidence { reason: reason.into(), facts, negative },
        }
    }

    pub fn with_scope(mut self, scope: Scope) -> Self {
        self.scope = scope;
        self
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.certificate {
            Certificate::Counterexample { witness, .. } => Some(witness),
            Certificate::Evidence { negative, .. } => negative.as_ref(),
            Certificate::Theorem { .. } => None,
        }
    }

    pub fn covers_all_indices(&self) -> bool {
        self.scope == Scope::AllIndices
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Proved => "Proved",
            Status::Refuted => "Refuted",
            Status::Inconclusive => "Inconclusive",
        })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::LogConcave => "log-concave",
            Property::InfinitelyLogConcave => "infinitely log-concave",
            Property::FixedPoint => "fixed by L",
            Property::InCone => "initial data in the log-concavity cone",
            Property::OutsideCone => "initial data outside the log-concavity cone",
        })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L^{}(a)_{} = {} < 0", self.level, self.index, self.value)
    }
}
