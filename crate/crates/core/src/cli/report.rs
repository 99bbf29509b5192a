//! JSON, CSV and plain-text rendering of reports.

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::classify::Decision;
use crate::count::CountReport;
use crate::enumerate::{Invariants, PerDegree, TableRow, Violation, ViolationReport};
use crate::splitting::{BNDatum, SplittingType};

/// An exact JSON number for an arbitrary-precision integer.
pub fn big(v: &BigInt) -> Value {
    Value::Number(
        v.to_string()
            .parse::<Number>()
            .expect("integers are valid JSON numbers"),
    )
}

/// Reads back an integer written by [`big`].
pub fn parse_big(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}

pub fn parts_json(e: &SplittingType) -> Value {
    Value::Array(e.parts().iter().map(big).collect())
}

pub fn input_json(d: &BNDatum) -> Value {
    json!({ "g": big(d.genus()), "e": parts_json(d.splitting()) })
}

pub fn invariants_json(inv: &Invariants) -> Value {
    json!({
        "k": inv.k,
        "deg": big(&inv.degree),
        "u": big(&inv.u),
        "rho": big(&inv.rho),
        "h0": big(&inv.h0),
        "r": big(&inv.r),
        "degL": big(&inv.deg_l),
        "nonneg_parts": inv.nonneg_parts,
    })
}

pub fn decision_json(d: &Decision) -> Value {
    let mut obj = Map::new();
    obj.insert("value".into(), Value::Bool(d.value));
    obj.insert("case".into(), Value::String(d.case.to_string()));
    if let Some(note) = &d.note {
        obj.insert("note".into(), Value::String(note.clone()));
    }
    Value::Object(obj)
}

pub fn bpf_json(d: &Decision) -> Value {
    let mut v = decision_json(d);
    v["pullback_twist"] = d.pullback_twist.as_ref().map(big).unwrap_or(Value::Null);
    v
}

fn with_p(p: usize, mut v: Value) -> Value {
    if let Value::Object(obj) = &mut v {
        let mut out = Map::new();
        out.insert("p".into(), json!(p));
        out.extend(std::mem::take(obj));
        *obj = out;
    }
    v
}

pub fn count_json(c: &CountReport) -> Value {
    json!({
        "p": c.p,
        "N": big(&c.n_closed),
        "N_assembled": big(&c.n_assembled),
        "degZ": big(&c.deg_z),
        "degH": big(&c.deg_h),
        "degPi": big(&c.deg_pi),
        "degL": big(&c.deg_l),
        "edge_case": c.edge_case.name(),
    })
}

fn per_degree_json(pd: &PerDegree) -> Value {
    json!({
        "p": pd.p,
        "birational_rel": decision_json(&pd.birational_rel),
        "rel": decision_json(&pd.rel),
        "count": pd.count.as_ref().map(count_json).unwrap_or(Value::Null),
    })
}

pub fn row_json(row: &TableRow) -> Value {
    json!({
        "input": input_json(&row.datum),
        "invariants": invariants_json(&row.invariants),
        "bpf": bpf_json(&row.bpf),
        "birational_va": decision_json(&row.birational_va),
        "va": decision_json(&row.va),
        "per_p": row.per_degree.iter().map(per_degree_json).collect::<Vec<_>>(),
    })
}

/// Extra per-`p` verdicts reported by `classify`.
pub struct Sufficiency {
    pub p: usize,
    pub pva_sufficient: bool,
    pub birat_pva_sufficient: bool,
    pub conjectured_pva: bool,
}

pub fn classify_json(row: &TableRow, sufficiency: &[Sufficiency], warnings: &[String]) -> Value {
    let rel: Vec<Value> = row
        .per_degree
        .iter()
        .map(|pd| with_p(pd.p, decision_json(&pd.rel)))
        .collect();
    let birational_rel: Vec<Value> = row
        .per_degree
        .iter()
        .map(|pd| with_p(pd.p, decision_json(&pd.birational_rel)))
        .collect();
    let counts: Vec<Value> = row
        .per_degree
        .iter()
        .filter_map(|pd| pd.count.as_ref())
        .map(count_json)
        .collect();
    let sufficient: Vec<Value> = sufficiency
        .iter()
        .map(|s| {
            json!({
                "p": s.p,
                "pva_sufficient": s.pva_sufficient,
                "birat_pva_sufficient": s.birat_pva_sufficient,
                "conjectured_pva": s.conjectured_pva,
            })
        })
        .collect();
    json!({
        "input": input_json(&row.datum),
        "warnings": warnings,
        "invariants": invariants_json(&row.invariants),
        "decisions": {
            "bpf": bpf_json(&row.bpf),
            "birational_va": decision_json(&row.birational_va),
            "va": decision_json(&row.va),
            "rel_pva": rel,
            "birational_rel_pva": birational_rel,
            "sufficient": sufficient,
            "counts": counts,
        },
    })
}

pub fn count_report_json(d: &BNDatum, report: &CountReport, warnings: &[String]) -> Value {
    json!({
        "input": input_json(d),
        "warnings": warnings,
        "invariants": invariants_json(&Invariants::of(d)),
        "count": count_json(report),
    })
}

pub fn error_json(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

fn violation_json(v: &Violation) -> Value {
    json!({
        "property": v.property.id(),
        "g": v.genus.as_ref().map(big).unwrap_or(Value::Null),
        "e": v.e.as_ref().map(parts_json).unwrap_or(Value::Null),
        "p": v.p,
        "observed": v.observed,
        "expected": v.expected,
    })
}

pub fn verify_json(
    report: &ViolationReport,
    domain: Value,
    mutation: Option<&str>,
    max_listed: usize,
) -> Value {
    let checks: Map<String, Value> = report
        .checks
        .iter()
        .map(|(prop, n)| (prop.id().to_string(), json!(n)))
        .collect();
    let mut by_property: Map<String, Value> = Map::new();
    for v in &report.violations {
        let entry = by_property
            .entry(v.property.id().to_string())
            .or_insert(json!(0));
        *entry = json!(entry.as_u64().unwrap_or(0) + 1);
    }
    json!({
        "status": if report.is_clean() { "ok" } else { "violations" },
        "domain": domain,
        "mutation": mutation,
        "instances": report.instances,
        "total_checks": report.total_checks(),
        "checks": checks,
        "violation_count": report.violations.len(),
        "violations_by_property": by_property,
        "violations": report.violations.iter().take(max_listed).map(violation_json).collect::<Vec<_>>(),
    })
}

/// Fixed CSV header for table rows whose rank is at most `k_max`.
pub fn csv_header(k_max: usize) -> Vec<String> {
    let mut cols = vec!["g".to_string()];
    cols.extend((1..=k_max).map(|i| format!("e{i}")));
    for c in [
        "u", "rho", "h0", "r", "degL", "bpf", "bpf_case", "birat_va", "va", "va_case",
    ] {
        cols.push(c.to_string());
    }
    for p in 0..k_max {
        for c in ["brel", "rel", "rel_case", "N"] {
            cols.push(format!("{c}_p{p}"));
        }
    }
    cols
}

/// Marker for `N` outside its domain.
pub const OUT_OF_DOMAIN: &str = "ood";

pub fn csv_record(row: &TableRow, k_max: usize) -> Vec<String> {
    let inv = &row.invariants;
    let parts = row.datum.splitting().parts();
    let mut rec = vec![row.datum.genus().to_string()];
    rec.extend((0..k_max).map(|i| parts.get(i).map(ToString::to_string).unwrap_or_default()));
    rec.extend([
        inv.u.to_string(),
        inv.rho.to_string(),
        inv.h0.to_string(),
        inv.r.to_string(),
        inv.deg_l.to_string(),
        row.bpf.value.to_string(),
        row.bpf.case.to_string(),
        row.birational_va.value.to_string(),
        row.va.value.to_string(),
        row.va.case.to_string(),
    ]);
    for p in 0..k_max {
        match row.per_degree.iter().find(|pd| pd.p == p) {
            Some(pd) => rec.extend([
                pd.birational_rel.value.to_string(),
                pd.rel.value.to_string(),
                pd.rel.case.to_string(),
                pd.count
                    .as_ref()
                    .map(|c| c.n_closed.to_string())
                    .unwrap_or_else(|| OUT_OF_DOMAIN.to_string()),
            ]),
            None => rec.extend(std::iter::repeat_n(String::new(), 4)),
        }
    }
    rec
}

fn verdict(d: &Decision) -> String {
    if d.value {
        format!("yes ({})", d.case)
    } else {
        "no".to_string()
    }
}

pub fn row_plain(row: &TableRow) -> String {
    let inv = &row.invariants;
    let mut out = format!(
        "{}\n  k={} deg={} u={} rho'={} h0={} r={} degL={} nonneg={}\n",
        row.datum, inv.k, inv.degree, inv.u, inv.rho, inv.h0, inv.r, inv.deg_l, inv.nonneg_parts
    );
    out += &format!("  basepoint free:          {}\n", verdict(&row.bpf));
    out += &format!(
        "  birationally very ample: {}\n",
        verdict(&row.birational_va)
    );
    out += &format!("  very ample:              {}\n", verdict(&row.va));
    for pd in &row.per_degree {
        out += &format!(
            "  p={}: birational rel {} | rel {}",
            pd.p,
            verdict(&pd.birational_rel),
            verdict(&pd.rel)
        );
        if let Some(c) = &pd.count {
            out += &format!(" | N={} ({})", c.n_closed, c.edge_case);
        }
        out.push('\n');
    }
    for d in [&row.bpf, &row.va] {
        if let Some(note) = &d.note {
            out += &format!("  note: {note}\n");
        }
    }
    out
}
