//! Report files: JSON (full detail), CSV (one row per session) and a
//! fixed-width table for terminals.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use przk_bind_core::simulator::{Aggregates, CampaignReport, SessionMetrics};
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub fn to_json(report: &CampaignReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<CampaignReport, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::integrity(format!("report: {e}")))
}

pub fn load(path: &Path) -> Result<CampaignReport, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    from_json(&text).map_err(|e| match e {
        CliError::Integrity(msg) => CliError::Integrity(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    index: u64,
    kind: &'a str,
    accepted: bool,
    abort_reason: &'a str,
    auth_latency_ms: f64,
    key_ms: Option<f64>,
    keys_agree: Option<bool>,
    entity_exp: u64,
    entity_mul: u64,
    entity_hash: u64,
    twin_exp: u64,
    twin_mul: u64,
    twin_hash: u64,
}

impl<'a> From<&'a SessionMetrics> for CsvRow<'a> {
    fn from(m: &'a SessionMetrics) -> Self {
        CsvRow {
            index: m.index,
            kind: m.kind.as_str(),
            accepted: m.accepted,
            abort_reason: m.abort_reason.map_or("", |r| r.as_str()),
            auth_latency_ms: m.auth_latency_ms(),
            key_ms: m.key_establish_ms(),
            keys_agree: m.keys_agree,
            entity_exp: m.ops_entity.group_exp,
            entity_mul: m.ops_entity.group_mul,
            entity_hash: m.ops_entity.hash,
            twin_exp: m.ops_twin.group_exp,
            twin_mul: m.ops_twin.group_mul,
            twin_hash: m.ops_twin.hash,
        }
    }
}

pub fn to_csv(report: &CampaignReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for m in &report.sessions {
        w.serialize(CsvRow::from(m))
            .expect("csv rows always serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
}

fn opt(v: Option<f64>, unit: &str) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.3}{unit}"))
}

fn percent(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_string(), |x| format!("{:.4}%", x * 100.0))
}

/// Short human summary printed after `simulate`.
pub fn summary(report: &CampaignReport) -> String {
    let a = &report.aggregates;
    let c = &report.config;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "campaign: {} sessions, group {}, seed {}, latency {}..{} ms",
        a.sessions, c.group, c.rng_seed, c.latency_range_ms[0], c.latency_range_ms[1]
    );
    let _ = writeln!(
        s,
        "split: {} honest / {} adversarial",
        a.honest_sessions, a.adversarial_sessions
    );
    let _ = writeln!(
        s,
        "honest acceptance: {} ({} of {}), key agreement {} of {}",
        percent(a.honest_acceptance),
        a.honest_accepted,
        a.honest_sessions,
        a.key_agreements,
        a.honest_sessions
    );
    let _ = writeln!(
        s,
        "FAR: {} ({} of {} accepted)",
        percent(a.far),
        a.adversarial_accepted,
        a.adversarial_sessions
    );
    let _ = writeln!(
        s,
        "auth latency: mean {}, p95 {}; key establishment mean {}",
        opt(a.mean_auth_latency_ms, " ms"),
        opt(a.p95_auth_latency_ms, " ms"),
        opt(a.mean_key_establish_ms, " ms")
    );
    let _ = writeln!(
        s,
        "energy proxy: {} total, {} per honest session",
        a.energy_proxy,
        opt(a.energy_per_honest_session, "")
    );
    s
}

/// Summary plus one fixed-width row per adversary kind.
pub fn table(report: &CampaignReport) -> String {
    let a = &report.aggregates;
    let mut s = summary(report);
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<26} {:>10} {:>10} {:>10}",
        "kind", "attempted", "accepted", "far"
    );
    let _ = writeln!(s, "{:-<26} {:->10} {:->10} {:->10}", "", "", "", "");
    for t in &a.per_kind {
        let _ = writeln!(
            s,
            "{:<26} {:>10} {:>10} {:>10}",
            t.kind.as_str(),
            t.attempted,
            t.accepted,
            t.far
                .map_or_else(|| "null".to_string(), |f| format!("{f:.6}"))
        );
    }
    let _ = writeln!(
        s,
        "{:<26} {:>10} {:>10} {:>10}",
        "honest", a.honest_sessions, a.honest_accepted, "-"
    );
    s
}

/// First path at which two JSON values differ, e.g. `per_kind[2].accepted`.
fn first_difference(path: &str, stored: &Value, derived: &Value) -> Option<String> {
    match (stored, derived) {
        (Value::Object(a), Value::Object(b)) => {
            for (k, vb) in b {
                let sub = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                match a.get(k) {
                    Some(va) => {
                        if let Some(d) = first_difference(&sub, va, vb) {
                            return Some(d);
                        }
                    }
                    None => return Some(sub),
                }
            }
            a.keys()
                .find(|k| !b.contains_key(*k))
                .map(|k| format!("{path}.{k}"))
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                return Some(path.to_string());
            }
            a.iter()
                .zip(b)
                .enumerate()
                .find_map(|(i, (x, y))| first_difference(&format!("{path}[{i}]"), x, y))
        }
        _ => (stored != derived).then(|| path.to_string()),
    }
}

/// Recomputes the aggregates from the per-session rows and compares them
/// with the stored ones. Also checks row order and the kind split implied
/// by the stored config.
pub fn verify(report: &CampaignReport) -> Result<(), CliError> {
    for (i, m) in report.sessions.iter().enumerate() {
        if m.index != i as u64 {
            return Err(CliError::integrity(format!(
                "sessions[{i}].index is {}, expected {i}",
                m.index
            )));
        }
    }
    let derived = Aggregates::from_sessions(&report.sessions, &report.config.energy_weights);
    let stored_v = serde_json::to_value(&report.aggregates).expect("aggregates serialize");
    let derived_v = serde_json::to_value(&derived).expect("aggregates serialize");
    if let Some(metric) = first_difference("", &stored_v, &derived_v) {
        return Err(CliError::integrity(format!(
            "aggregate `{metric}` does not match the per-session rows"
        )));
    }
    if report.sessions.len() as u64 != report.config.sessions {
        return Err(CliError::integrity(format!(
            "config.sessions is {}, report has {} rows",
            report.config.sessions,
            report.sessions.len()
        )));
    }
    if derived.adversarial_sessions != report.config.adversarial_count() {
        return Err(CliError::integrity(format!(
            "adversarial_sessions is {}, config implies {}",
            derived.adversarial_sessions,
            report.config.adversarial_count()
        )));
    }
    for ((kind, expected), tally) in report.config.kind_counts().iter().zip(&derived.per_kind) {
        if tally.attempted != *expected {
            return Err(CliError::integrity(format!(
                "per_kind.{kind}.attempted is {}, config implies {expected}",
                tally.attempted
            )));
        }
    }
    Ok(())
}
