use clap::ValueEnum;
use delta_laplace::rational::to_pq;
use delta_laplace::transform::table;
use delta_laplace::{Coefficient, SeqExpr, SolveReport};
use serde::Serialize;

use crate::dsl::{format_equation, split_terms};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Debug, Serialize)]
pub struct JsonReport {
    pub equation: String,
    pub order: u32,
    pub coefficient: &'static str,
    pub solution_terms: Vec<JsonTerm>,
    pub image: String,
    pub verification: JsonVerification,
}

#[derive(Debug, Serialize)]
pub struct JsonTerm {
    pub kind: &'static str,
    pub coeff: String,
    pub param: Param,
}

/// Power for `mono`, `recip` and `harmonic`, the factor list for `conv`,
/// nothing for `const`.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Param {
    None,
    Power(u32),
    Factors(String),
}

#[derive(Debug, Serialize)]
pub struct JsonVerification {
    pub checked_to: usize,
    pub max_numeric_error: f64,
    pub passed: bool,
}

pub fn format_report(report: &SolveReport, format: Format) -> String {
    match format {
        Format::Text => text(report),
        Format::Latex => format!("\\[ f(n) = {} \\]\n", report.solution.to_latex()),
        Format::Json => {
            let mut out = serde_json::to_string_pretty(&json(report))
                .expect("report fields serialize");
            out.push('\n');
            out
        }
    }
}

fn text(report: &SolveReport) -> String {
    let v = &report.verification;
    let status = if v.passed { "passed" } else { "FAILED" };
    format!(
        "equation: {}\nmethod: {}\nimage: F(x) = {}\nf(n) = {}\nverification: {status} \
         (exact for n <= {}, max transform error {:.3e})\n",
        format_equation(&report.equation),
        report.method,
        report.image,
        report.solution.to_text(),
        v.recurrence_checked_to,
        v.numeric_transform_max_error,
    )
}

pub fn json(report: &SolveReport) -> JsonReport {
    JsonReport {
        equation: format_equation(&report.equation),
        order: report.equation.order,
        coefficient: match report.equation.coefficient {
            Coefficient::One => "1",
            Coefficient::N => "n",
        },
        solution_terms: split_terms(&report.solution)
            .into_iter()
            .map(|(c, unit)| {
                let (kind, param) = classify(&unit);
                JsonTerm {
                    kind,
                    coeff: to_pq(&c),
                    param,
                }
            })
            .collect(),
        image: report.image.to_string(),
        verification: JsonVerification {
            checked_to: report.verification.recurrence_checked_to,
            max_numeric_error: report.verification.numeric_transform_max_error,
            passed: report.verification.passed,
        },
    }
}

fn classify(unit: &SeqExpr) -> (&'static str, Param) {
    match unit {
        SeqExpr::Const(_) => ("const", Param::None),
        SeqExpr::Mono(k) => ("mono", Param::Power(*k)),
        SeqExpr::Recip(p) => ("recip", Param::Power(p.exponent())),
        SeqExpr::Harmonic(p) => ("harmonic", Param::Power(p.exponent())),
        other => ("conv", Param::Factors(other.to_string())),
    }
}

/// One line per reference pair: the sequence, then its image.
pub fn format_table() -> String {
    let pairs = table();
    let width = pairs
        .iter()
        .map(|p| p.sequence.to_text().len())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for pair in pairs {
        out.push_str(&format!(
            "{:<width$}  <->  {}\n",
            pair.sequence.to_text(),
            pair.image
        ));
    }
    out
}
