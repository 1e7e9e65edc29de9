use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One summand on the right-hand side of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: i64,
    /// The intermediate element a summand belongs to, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
}

impl Term {
    pub fn new(label: impl Into<String>, value: i64) -> Self {
        Term {
            label: label.into(),
            value,
            lambda: None,
        }
    }

    pub fn at(label: impl Into<String>, value: i64, lambda: impl Into<String>) -> Self {
        Term {
            label: label.into(),
            value,
            lambda: Some(lambda.into()),
        }
    }
}

/// The outcome of checking one identity on one interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub system: String,
    pub interval: String,
    pub equation: String,
    pub lhs: i64,
    pub terms: Vec<Term>,
    pub rhs: i64,
    pub pass: bool,
}

/// A Möbius decomposition is reported in the same shape.
pub type MobiusDecomposition = VerificationReport;

impl VerificationReport {
    /// Sums the terms into `rhs` and compares with `lhs`.
    pub fn new(system: String, interval: String, equation: impl Into<String>, lhs: i64, terms: Vec<Term>) -> Self {
        let rhs = terms.iter().map(|t| t.value).sum();
        VerificationReport {
            system,
            interval,
            equation: equation.into(),
            lhs,
            terms,
            rhs,
            pass: lhs == rhs,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Value of the term attached to `lambda`, if any.
    pub fn term_for(&self, lambda: &str) -> Option<i64> {
        self.terms
            .iter()
            .find(|t| t.lambda.as_deref() == Some(lambda))
            .map(|t| t.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_is_the_sum() {
        let r = VerificationReport::new(
            "classical".into(),
            "[1,12]".into(),
            "eq1",
            -1,
            vec![Term::new("a", -2), Term::at("b", 1, "12")],
        );
        assert_eq!(r.rhs, -1);
        assert!(r.pass);
        assert_eq!(r.term_for("12"), Some(1));
        let json = r.to_json().unwrap();
        assert!(json.contains("\"lambda\": \"12\""));
        assert!(!json.contains("\"lambda\": null"));
    }
}
