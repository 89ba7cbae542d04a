//! Artifact serialization and the Markdown / CSV renderings.

use serde_json::{json, Value};

use dplab_core::search::Witness;

use crate::{CliError, Outcome, RunManifest};

/// `{"manifest": .., "result": ..}`, pretty-printed with a trailing newline.
/// Object keys are sorted (serde_json's default map), so the text depends
/// only on the manifest and the result.
pub fn artifact(manifest: &RunManifest, result: &Value) -> String {
    let v = json!({ "manifest": manifest, "result": result });
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

pub fn markdown(o: &Outcome) -> String {
    let mut out = String::new();
    for line in &o.preface {
        out.push_str(line);
        out.push('\n');
    }
    if !o.preface.is_empty() {
        out.push('\n');
    }
    out.push_str(&format!("| {} |\n", o.headers.iter().map(|h| md_cell(h)).collect::<Vec<_>>().join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(o.headers.len())));
    for row in &o.rows {
        out.push_str(&format!("| {} |\n", row.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | ")));
    }
    out
}

pub fn csv(o: &Outcome) -> Result<String, CliError> {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    let err = |e: ::csv::Error| CliError::Internal(format!("csv: {e}"));
    w.write_record(&o.headers).map_err(err)?;
    for row in &o.rows {
        w.write_record(row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(format!("csv: {e}")))
}

/// One-line description of a trace-table witness.
pub fn witness_summary(w: &Witness) -> String {
    match w {
        Witness::Configuration { partition, method, contracted_lines, .. } => {
            let contract = if contracted_lines.is_empty() { String::new() } else { format!(", contract {}", contracted_lines.len()) };
            format!("blow up [{partition}] ({method}{contract})")
        }
        Witness::Surface { name, count, .. } => format!("surface {name} ({} points)", count.count),
        Witness::Twist { mirror_trace, .. } => format!("twist of a = {mirror_trace}"),
        Witness::Citation { tag, .. } => format!("citation: {tag}"),
        Witness::Certificates { certificates, citation } => {
            let parts: Vec<String> = certificates.iter().map(|c| format!("[{}]", c.partition)).collect();
            let cite = citation.as_ref().map_or(String::new(), |c| format!("; {c}"));
            format!("exhausted {}{cite}", parts.join(" "))
        }
        Witness::CountBound { count, .. } => format!("count bound ({count} points)"),
        Witness::Inconclusive { reasons, .. } => format!("inconclusive: {}", reasons.join("; ")),
    }
}
