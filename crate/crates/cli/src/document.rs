//! The report document written by every subcommand, and its CSV flattening.

use grz_core::certify::RunManifest;
use grz_core::exact::format_rational;
use grz_core::grz::{CertReport, Witness};
use grz_core::series::{ExponentVector, MultiSeries};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub tool_version: String,
    /// Arguments as given on the command line, program name excluded.
    pub command: Vec<String>,
    pub manifest: RunManifest,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<MultiSeries>,
}

impl ReportDocument {
    pub fn new(command: Vec<String>, manifest: RunManifest, series: Option<MultiSeries>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            manifest,
            series,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        let suite = &self.manifest.suite;
        for report in &self.manifest.reports {
            w.write_record(report_row(suite, report))?;
        }
        if let Some(series) = &self.series {
            for (e, c) in series.terms() {
                let exponent = format_exponent(e);
                let value = format_rational(c);
                w.write_record([
                    suite.as_str(),
                    "series_term",
                    "",
                    "",
                    "",
                    "coefficient",
                    exponent.as_str(),
                    value.as_str(),
                    "",
                    "",
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "suite",
    "check_name",
    "status",
    "expectation",
    "params",
    "witness_kind",
    "witness_exponent",
    "witness_value",
    "witness_approx",
    "notes",
];

fn format_exponent(e: &ExponentVector) -> String {
    let parts: Vec<String> = e.entries().iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn json_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn report_row(suite: &str, report: &CertReport) -> Vec<String> {
    let params: Vec<String> = report.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let (kind, exponent, value, approx) = match &report.witness {
        None => ("", String::new(), String::new(), String::new()),
        Some(Witness::Exponent { exponent, value, approx_non_authoritative }) => (
            "exponent",
            format_exponent(exponent),
            format_rational(value),
            approx_non_authoritative.clone(),
        ),
        Some(Witness::Value { value, approx_non_authoritative }) => {
            ("value", String::new(), format_rational(value), approx_non_authoritative.clone())
        }
        Some(Witness::Roots { intervals }) => {
            let shown: Vec<String> = intervals
                .iter()
                .map(|iv| {
                    let body = if iv.exact {
                        format!("{{{}}}", format_rational(&iv.lo))
                    } else {
                        format!("[{},{}]", format_rational(&iv.lo), format_rational(&iv.hi))
                    };
                    format!("{body}x{}", iv.multiplicity)
                })
                .collect();
            ("roots", String::new(), shown.join(" "), String::new())
        }
    };
    vec![
        suite.to_string(),
        report.check_name.clone(),
        json_name(&report.status),
        json_name(&report.expectation),
        params.join("; "),
        kind.to_string(),
        exponent,
        value,
        approx,
        report.notes.clone(),
    ]
}
