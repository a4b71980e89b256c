use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use nchw_core::VerificationReport;
use serde_json::Value;

use crate::config::Format;

/// Seconds since the Unix epoch.
pub fn now_timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// The report as pretty JSON, with a `"timestamp"` key when one is given.
pub fn to_json(report: &VerificationReport, timestamp: Option<u64>) -> Value {
    let mut v = serde_json::to_value(report).expect("report serializes");
    if let (Some(t), Value::Object(map)) = (timestamp, &mut v) {
        map.insert("timestamp".into(), t.into());
    }
    v
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Plain-text rendering with the same checks as the JSON form.
pub fn to_text(report: &VerificationReport, timestamp: Option<u64>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "phase: {}", report.phase);
    for (k, v) in &report.params {
        let _ = writeln!(s, "param {k} = {}", scalar(v));
    }
    for c in &report.checks {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{verdict} {} defect={:.3e} tolerance={:.3e}",
            c.name, c.defect, c.tolerance
        );
    }
    for (k, v) in &report.artifacts {
        let _ = writeln!(s, "artifact {k} = {}", scalar(v));
    }
    if let Some(t) = timestamp {
        let _ = writeln!(s, "timestamp: {t}");
    }
    let _ = writeln!(
        s,
        "result: {}",
        if report.all_pass() { "PASS" } else { "FAIL" }
    );
    s
}

pub fn render(report: &VerificationReport, format: Format, timestamp: Option<u64>) -> String {
    match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(&to_json(report, timestamp)).expect("json");
            out.push('\n');
            out
        }
        Format::Text => to_text(report, timestamp),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nchw_core::Check;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new("PositiveDelta");
        r.param("theta", 1.0).artifact("case", "GammaZeroLimit");
        r.push(Check::new("a", 1e-16, 1e-10))
            .push(Check::new("b", 1.0, 1e-10));
        r
    }

    #[test]
    fn json_has_stable_top_level_keys() {
        let v = to_json(&sample(), None);
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["artifacts", "checks", "params", "phase"]);
        assert!(to_json(&sample(), Some(7)).get("timestamp").is_some());
    }

    #[test]
    fn text_lists_every_check() {
        let t = to_text(&sample(), None);
        assert!(t.contains("PASS a defect=1.000e-16"));
        assert!(t.contains("FAIL b "));
        assert!(t.ends_with("result: FAIL\n"));
    }
}
