//! Rendering of reports as human-readable text, JSON or CSV.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use serde_json::Value;

use hyplab::cox::{CoxPresentation, SDReport};
use hyplab::hyperbolicity::Verdict;
use hyplab::selftest::SelfTestReport;
use hyplab::AmbientId;

use crate::Failure;

#[derive(Clone, Copy)]
pub enum Format {
    Human,
    Json,
    Csv,
}

pub enum Report {
    Verdicts { rows: Vec<Verdict>, verbose: bool, single: bool },
    Sd(SDReport),
    SelfTest(SelfTestReport),
    /// Any other serializable report, kept both as ordered JSON text and as a
    /// value for flattening.
    Generic { json: String, value: Value },
}

impl Report {
    pub fn json_like<T: Serialize>(v: &T) -> Result<Report, Failure> {
        let json = serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))?;
        let value = serde_json::to_value(v).map_err(|e| Failure::Internal(e.to_string()))?;
        Ok(Report::Generic { json, value })
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => self.json().map(|s| s + "\n"),
            Format::Csv => self.csv(),
            Format::Human => Ok(self.human()),
        }
    }

    fn json(&self) -> Result<String, String> {
        let r = match self {
            Report::Verdicts { rows, single: true, .. } => serde_json::to_string_pretty(&rows[0]),
            Report::Verdicts { rows, .. } => serde_json::to_string_pretty(rows),
            Report::Sd(r) => serde_json::to_string_pretty(r),
            Report::SelfTest(r) => serde_json::to_string_pretty(r),
            Report::Generic { json, .. } => return Ok(json.clone()),
        };
        r.map_err(|e| e.to_string())
    }

    fn csv(&self) -> Result<String, String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| e.to_string();
        match self {
            Report::Verdicts { rows, .. } => {
                w.write_record(["ambient", "class", "status", "epsilon", "plan", "witness", "reason"]).map_err(err)?;
                for v in rows {
                    w.write_record([
                        ambient_name(v),
                        join(&v.class),
                        v.status.to_string(),
                        v.epsilon.as_ref().map(|e| e.to_string()).unwrap_or_default(),
                        v.plan.clone().unwrap_or_default(),
                        v.witness.as_ref().map(|w| format!("{:?}", w.kind)).unwrap_or_default(),
                        v.reason.clone(),
                    ])
                    .map_err(err)?;
                }
            }
            Report::Sd(r) => {
                w.write_record(["stratum", "required_rank", "achieved_rank", "rows", "cols"]).map_err(err)?;
                for s in &r.per_stratum {
                    w.write_record([
                        pattern_label(&s.pattern),
                        s.required_rank.to_string(),
                        s.achieved_rank.to_string(),
                        s.rows.to_string(),
                        s.cols.to_string(),
                    ])
                    .map_err(err)?;
                }
            }
            Report::SelfTest(r) => {
                w.write_record(["group", "check", "passed", "detail"]).map_err(err)?;
                for g in &r.groups {
                    for c in &g.checks {
                        w.write_record([
                            g.group.clone(),
                            c.name.clone(),
                            c.passed.to_string(),
                            c.detail.clone().unwrap_or_default(),
                        ])
                        .map_err(err)?;
                    }
                }
            }
            Report::Generic { value, .. } => {
                w.write_record(["field", "value"]).map_err(err)?;
                for (k, v) in flatten(value) {
                    w.write_record([k, v]).map_err(err)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }

    fn human(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Verdicts { rows, verbose, single: true } => {
                let v = &rows[0];
                let _ = writeln!(out, "ambient   {}", ambient_name(v));
                let _ = writeln!(out, "class     ({})", v.class.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
                let _ = writeln!(out, "status    {}", v.status);
                if let (Some(e), Some(p)) = (&v.epsilon, &v.plan) {
                    let _ = writeln!(out, "epsilon   {e} (certified, plan '{p}')");
                }
                if let Some(w) = &v.witness {
                    let _ = writeln!(out, "witness   {:?}, genus {}", w.kind, w.genus_attained);
                }
                let _ = writeln!(out, "reason    {}", v.reason);
                if *verbose {
                    for c in &v.certificates {
                        let bundle = c.line_bundle.as_ref().map(|l| l.to_string()).unwrap_or_else(|| "-".into());
                        let _ = writeln!(
                            out,
                            "  {:?} bundle {bundle} on {}: 2g-2 >= {}, degree {}",
                            c.bound_kind, c.curve, c.genus_bound, c.degree
                        );
                    }
                }
            }
            Report::Verdicts { rows, .. } => {
                let _ = writeln!(out, "{:<18} {:<14} {:<14} {:<8} detail", "ambient", "class", "status", "epsilon");
                for v in rows {
                    let detail = v
                        .plan
                        .clone()
                        .or_else(|| v.witness.as_ref().map(|w| format!("{:?}", w.kind)))
                        .unwrap_or_else(|| v.reason.clone());
                    let _ = writeln!(
                        out,
                        "{:<18} {:<14} {:<14} {:<8} {detail}",
                        ambient_name(v),
                        join(&v.class),
                        v.status.to_string(),
                        v.epsilon.as_ref().map(|e| e.to_string()).unwrap_or_else(|| "-".into()),
                    );
                }
            }
            Report::Sd(r) => {
                let _ = writeln!(out, "ambient   {}", r.ambient);
                let _ = writeln!(out, "E         {}", join(&r.eclass));
                for b in &r.bundles {
                    let _ = writeln!(out, "L         {}", join(b));
                }
                let _ = writeln!(out, "verdict   {}", r.verdict);
                if let Some(p) = &r.failed_precondition {
                    let _ = writeln!(out, "failed    {p}");
                }
                if let Some(s) = &r.failing_stratum {
                    let _ = writeln!(out, "stratum   {} loses rank", pattern_label(s));
                }
                let _ = writeln!(out, "{:<16} {:>8} {:>8} {:>12}", "stratum", "required", "achieved", "matrix");
                for s in &r.per_stratum {
                    let _ = writeln!(
                        out,
                        "{:<16} {:>8} {:>8} {:>12}",
                        pattern_label(&s.pattern),
                        s.required_rank,
                        s.achieved_rank,
                        format!("{}x{}", s.rows, s.cols)
                    );
                    if let Some(m) = &s.matrix {
                        for row in m {
                            let entries: Vec<String> = row.iter().map(|(c, v)| format!("{c}:{v}")).collect();
                            let _ = writeln!(out, "    [{}]", entries.join(" "));
                        }
                    }
                }
            }
            Report::SelfTest(r) => {
                for g in &r.groups {
                    let failed = g.checks.iter().filter(|c| !c.passed).count();
                    let _ = writeln!(
                        out,
                        "{} {:<20} {}/{} checks",
                        if g.passed { "PASS" } else { "FAIL" },
                        g.group,
                        g.checks.len() - failed,
                        g.checks.len()
                    );
                    for c in g.checks.iter().filter(|c| !c.passed) {
                        let _ = writeln!(out, "    {}: {}", c.name, c.detail.clone().unwrap_or_default());
                    }
                }
                let _ = writeln!(out, "overall {}", if r.passed { "PASS" } else { "FAIL" });
            }
            Report::Generic { value, .. } => {
                for (k, v) in flatten(value) {
                    let _ = writeln!(out, "{k:<28} {v}");
                }
            }
        }
        out
    }
}

fn ambient_name(v: &Verdict) -> String {
    AmbientId { kind: v.ambient, params: v.params }.to_string()
}

fn join(c: &[i64]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn pattern_label(p: &[String]) -> String {
    if p.is_empty() {
        "(torus)".into()
    } else {
        p.join(",")
    }
}

/// Dotted-path view of a JSON value, in document order for arrays and key
/// order for objects.
fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
                let parts: Vec<String> = items.iter().map(scalar).collect();
                out.push((prefix.to_string(), parts.join(" ")));
            }
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            other => out.push((prefix.to_string(), scalar(other))),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn bigint_as_number<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// `x0^2*y1` style name of an exponent vector.
pub fn monomial_name(cox: &CoxPresentation, exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(&cox.variables)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, v)| if e == 1 { v.name.clone() } else { format!("{}^{e}", v.name) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
