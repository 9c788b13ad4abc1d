use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::exact::{approx_decimal, rational_str, Rational};
use crate::series::ExponentVector;
use crate::unipoly::RootInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Flagged,
    Fail,
}

/// Whether the parameters of a check fall under the statement it tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    OutOfHypothesis,
}

/// Exact evidence attached to a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Exponent {
        exponent: ExponentVector,
        #[serde(with = "rational_str")]
        value: Rational,
        approx_non_authoritative: String,
    },
    Roots {
        intervals: Vec<RootInterval>,
    },
    Value {
        #[serde(with = "rational_str")]
        value: Rational,
        approx_non_authoritative: String,
    },
}

impl Witness {
    pub fn exponent(exponent: ExponentVector, value: Rational) -> Self {
        let approx_non_authoritative = approx_decimal(&value);
        Witness::Exponent { exponent, value, approx_non_authoritative }
    }

    pub fn value(value: Rational) -> Self {
        let approx_non_authoritative = approx_decimal(&value);
        Witness::Value { value, approx_non_authoritative }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub check_name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub expectation: Expectation,
    pub witness: Option<Witness>,
    pub notes: String,
}

impl CertReport {
    pub fn new(check_name: impl Into<String>) -> Self {
        Self {
            check_name: check_name.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            expectation: Expectation::Holds,
            witness: None,
            notes: String::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Display) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn expect(mut self, expectation: Expectation) -> Self {
        self.expectation = expectation;
        self
    }

    pub fn note(&mut self, text: impl AsRef<str>) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
    }

    /// Sets the status and labels out-of-hypothesis failures.
    pub fn finish(mut self, status: Status) -> Self {
        assert!(
            status != Status::Fail || self.witness.is_some(),
            "a failing report must carry a witness"
        );
        self.status = status;
        if status == Status::Fail && self.expectation == Expectation::OutOfHypothesis {
            self.note("expected-fail: parameters outside the statement's hypothesis");
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
