//! Rendering of run outcomes.

use std::fmt::Write as _;

use crate::config::Format;
use crate::run::RunOutcome;
use crate::CliError;

pub fn render(outcome: &RunOutcome, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(outcome).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => csv(outcome),
        Format::Md => Ok(markdown(outcome)),
    }
}

fn params_text(params: &std::collections::BTreeMap<String, String>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn csv(outcome: &RunOutcome) -> Result<String, CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "suite",
        "instance",
        "identity",
        "anchor",
        "params",
        "N",
        "status",
        "max_residual",
        "elapsed_ms",
        "detail",
    ])
    .map_err(io)?;
    for stream in &outcome.suites {
        for inst in &stream.instances {
            for r in &inst.records {
                w.write_record([
                    stream.suite.name(),
                    &inst.instance.to_string(),
                    &r.identity,
                    &r.anchor,
                    &params_text(&r.params),
                    &r.n.to_string(),
                    if r.passed() { "pass" } else { "fail" },
                    &r.max_residual,
                    &r.elapsed_ms.to_string(),
                    r.detail.as_deref().unwrap_or(""),
                ])
                .map_err(io)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

/// One table per suite; residuals appear only when nonzero.
fn markdown(outcome: &RunOutcome) -> String {
    let mut out = String::new();
    let verdict = if outcome.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "# Verification report\n");
    let _ = writeln!(
        out,
        "mode `{}`: {verdict}, {} checks, {} failures\n",
        outcome.mode, outcome.checks, outcome.failures
    );
    for note in &outcome.resampled {
        let _ = writeln!(out, "- resampled: {}", cell(note));
    }
    if !outcome.resampled.is_empty() {
        out.push('\n');
    }
    for stream in &outcome.suites {
        let _ = writeln!(
            out,
            "## {} ({})\n",
            stream.suite,
            if stream.passed { "pass" } else { "fail" }
        );
        let _ = writeln!(out, "| instance | identity | N | status | residual |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for inst in &stream.instances {
            for r in &inst.records {
                let residual = if r.max_residual == "0" {
                    String::new()
                } else {
                    cell(&r.max_residual)
                };
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    inst.instance,
                    cell(&r.identity),
                    r.n,
                    if r.passed() { "pass" } else { "fail" },
                    residual
                );
            }
        }
        out.push('\n');
    }
    out
}
