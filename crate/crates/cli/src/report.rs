//! Text and key-value renderings of privacy reports.

use std::fmt::Write as _;

use bistochastic::PrivacyReport;

/// β as a percentage with `precision` decimals (0 gives whole percents).
pub fn percent(beta: f64, precision: usize) -> String {
    format!("{:.*}%", precision, beta * 100.0)
}

/// One line per attribute (name, entropy bits, budget bits, β%), then the aggregate.
pub fn render_text(report: &PrivacyReport, precision: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", report.mode.as_str());
    let width = report
        .per_attribute
        .iter()
        .map(|a| a.name.len())
        .max()
        .unwrap_or(0)
        .max("attribute".len());
    let _ = writeln!(
        out,
        "{:<width$}  {:>6}  {:>12}  {:>12}  {:>8}",
        "attribute", "size", "H(P) bits", "budget bits", "beta"
    );
    for a in &report.per_attribute {
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>12.6}  {:>12.6}  {:>8}",
            a.name,
            a.size,
            a.entropy_bits,
            a.budget_bits,
            percent(a.beta, precision)
        );
    }
    let _ = writeln!(
        out,
        "aggregate: H = {:.6} bits, budget = {:.6} bits, beta = {}",
        report.total_entropy_bits(),
        report.total_budget_bits(),
        percent(report.aggregate_beta, precision)
    );
    out
}

/// `key=value` lines with full precision, for scripts and tests.
pub fn render_kv(report: &PrivacyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode={}", report.mode.as_str());
    for a in &report.per_attribute {
        let _ = writeln!(out, "attribute.{}.size={}", a.name, a.size);
        let _ = writeln!(
            out,
            "attribute.{}.entropy_bits={:?}",
            a.name, a.entropy_bits
        );
        let _ = writeln!(out, "attribute.{}.budget_bits={:?}", a.name, a.budget_bits);
        let _ = writeln!(out, "attribute.{}.beta={:?}", a.name, a.beta);
    }
    let _ = writeln!(
        out,
        "aggregate.entropy_bits={:?}",
        report.total_entropy_bits()
    );
    let _ = writeln!(
        out,
        "aggregate.budget_bits={:?}",
        report.total_budget_bits()
    );
    let _ = writeln!(out, "aggregate.beta={:?}", report.aggregate_beta);
    out
}

/// Reads `key=value` lines back into a lookup; blank lines are skipped.
pub fn parse_kv(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}
