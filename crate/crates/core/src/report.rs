//! Report assembly: every result becomes a JSON value plus a flat table.
//! Norms are always exact strings such as `2^(-3/2)`; JSON object keys are
//! emitted in sorted order.

use serde_json::{json, Value};

use crate::acceptance::AcceptanceReport;
use crate::config::OutputFormat;
use crate::error::Error;
use crate::gauss::{CauchyRow, SpectralReport};
use crate::spectra::{DirectTdz, Membership, ShilovReport, TdzReport, TopSpecReport, ZarCompareRow};
use crate::tilt::{AddLimitReport, ApproxRow, VerifyRow};
use crate::untilt::UntiltCtx;
use crate::witt::IntPoly;
use crate::zariski::{InvertStatus, ZariskianReport};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_tsv(&self) -> String {
        let clean = |s: &String| s.replace(['\t', '\n'], " ");
        let mut out = self.columns.join("\t");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(clean).collect::<Vec<_>>().join("\t"));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub json: Value,
    pub table: Table,
}

impl Output {
    /// A single-row table of `key`, `value` pairs taken from a flat JSON object.
    pub fn from_json(json: Value) -> Self {
        let mut table = Table::new(&["key", "value"]);
        if let Value::Object(m) = &json {
            for (k, v) in m {
                let s = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                table.push(vec![k.clone(), s]);
            }
        } else {
            table.push(vec!["value".into(), json.to_string()]);
        }
        Output { json, table }
    }
}

pub fn emit(out: &Output, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => format!("{}\n", out.json),
        OutputFormat::Tsv => out.table.to_tsv(),
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() } })
}

/// `X_i` for the first `n` variables, `Y_i` for the rest.
pub fn witt_poly_text(poly: &IntPoly, n: usize) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut terms: Vec<_> = poly.terms().collect();
    // by total degree, then lexicographically on exponents
    terms.sort_by(|a, b| {
        let da: u32 = a.0.iter().sum();
        let db: u32 = b.0.iter().sum();
        da.cmp(&db).then_with(|| b.0.cmp(a.0))
    });
    for (exp, c) in terms {
        let vars: Vec<String> = exp
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| {
                let name = if i < n { format!("X_{i}") } else { format!("Y_{}", i - n) };
                if *e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        let mag = c.magnitude().to_string();
        let body = match (vars.is_empty(), mag.as_str()) {
            (true, _) => mag,
            (false, "1") => vars.join("*"),
            (false, _) => format!("{mag}*{}", vars.join("*")),
        };
        let neg = c.sign() == num_bigint::Sign::Minus;
        parts.push(match (parts.is_empty(), neg) {
            (true, false) => body,
            (true, true) => format!("-{body}"),
            (false, false) => format!("+ {body}"),
            (false, true) => format!("- {body}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

pub fn witt_poly_json(poly: &IntPoly, n: usize) -> Value {
    let terms: Vec<Value> = poly.terms().map(|(e, c)| json!({ "exp": e, "coeff": c.to_string() })).collect();
    json!({ "terms": terms, "text": witt_poly_text(poly, n) })
}

pub fn spectral(rep: &SpectralReport, p: u32, power_bounded: Option<bool>) -> Output {
    let mut table = Table::new(&["n", "power_norm", "root", "running_min"]);
    let entries: Vec<Value> = rep
        .entries
        .iter()
        .map(|e| {
            table.push(vec![e.n.to_string(), e.power_norm.render(p), e.root.render(p), e.running_min.render(p)]);
            json!({
                "n": e.n,
                "power_norm": e.power_norm.render(p),
                "root": e.root.render(p),
                "running_min": e.running_min.render(p),
            })
        })
        .collect();
    let json = json!({
        "bound": rep.bound.render(p),
        "attained_at": rep.attained_at,
        "monotone": rep.is_monotone(),
        "fekete": rep.fekete_holds(),
        "power_bounded": power_bounded,
        "entries": entries,
    });
    Output { json, table }
}

pub fn cauchy(rows: &[CauchyRow], p: u32) -> Output {
    let mut table = Table::new(&["m", "diff_norm"]);
    let js: Vec<Value> = rows
        .iter()
        .map(|r| {
            table.push(vec![r.m.to_string(), r.diff_norm.render(p)]);
            json!({ "m": r.m, "diff_norm": r.diff_norm.render(p) })
        })
        .collect();
    Output { json: json!({ "rows": js }), table }
}

pub fn add_limit(rep: &AddLimitReport, ctx: &UntiltCtx) -> Output {
    let p = ctx.p();
    let mut table = Table::new(&["m", "value", "norm"]);
    let values: Vec<Value> = rep
        .values
        .iter()
        .enumerate()
        .map(|(m, v)| {
            table.push(vec![m.to_string(), v.to_string(), ctx.norm(v).render(p)]);
            json!({ "m": m, "value": ctx.to_json(v), "text": v.to_string() })
        })
        .collect();
    let json = json!({
        "values": values,
        "stable_from": rep.stable_from,
        "expected": ctx.to_json(&rep.expected),
        "expected_text": rep.expected.to_string(),
        "matches": rep.matches,
    });
    Output { json, table }
}

pub fn approx_rows(rows: &[ApproxRow], p: u32) -> (Value, Table) {
    let mut table = Table::new(&["r", "phi_f", "phi_g_sharp", "ok"]);
    let js = rows
        .iter()
        .map(|r| {
            table.push(vec![r.r.render(p), r.phi_f.render(p), r.phi_g_sharp.render(p), r.ok.to_string()]);
            json!({ "r": r.r.render(p), "phi_f": r.phi_f.render(p), "phi_g_sharp": r.phi_g_sharp.render(p), "ok": r.ok })
        })
        .collect();
    (Value::Array(js), table)
}

pub fn verify_rows(rows: &[VerifyRow], p: u32) -> Output {
    let mut table = Table::new(&["phi", "lhs", "rhs", "verdict"]);
    let js: Vec<Value> = rows
        .iter()
        .map(|r| {
            let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
            let v = verdict.as_str().unwrap_or_default().to_string();
            table.push(vec![r.phi.label(p), r.lhs.render(p), r.rhs.render(p), v.clone()]);
            json!({ "phi": r.phi.label(p), "lhs": r.lhs.render(p), "rhs": r.rhs.render(p), "verdict": v })
        })
        .collect();
    Output { json: json!({ "rows": js }), table }
}

fn status_json(s: &InvertStatus, p: u32) -> Value {
    match s {
        InvertStatus::Converged { residual } => json!({ "status": s.name(), "residual": residual.render(p) }),
        InvertStatus::DivergedSupport { supports, reason } => {
            json!({ "status": s.name(), "supports": supports, "reason": reason })
        }
        InvertStatus::Inconclusive { residual } => json!({ "status": s.name(), "residual": residual.render(p) }),
    }
}

pub fn invert(status: &InvertStatus, terms: usize, approx: Value, approx_text: String, p: u32) -> Output {
    let mut json = status_json(status, p);
    json["terms"] = json!(terms);
    json["approx"] = approx;
    json["approx_text"] = json!(approx_text.clone());
    let mut table = Table::new(&["status", "terms", "approx"]);
    table.push(vec![status.name().into(), terms.to_string(), approx_text]);
    Output { json, table }
}

pub fn zariskian(rep: &ZariskianReport, p: u32) -> Output {
    let mut table = Table::new(&["index", "norm", "status", "terms"]);
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            let st = r.status.as_ref().map_or("skipped (norm >= 1)", |s| s.name());
            table.push(vec![r.index.to_string(), r.norm.render(p), st.into(), r.terms.to_string()]);
            let mut j = r.status.as_ref().map_or(json!({ "status": st }), |s| status_json(s, p));
            j["index"] = json!(r.index);
            j["norm"] = json!(r.norm.render(p));
            j["terms"] = json!(r.terms);
            j
        })
        .collect();
    Output { json: json!({ "rows": rows, "verdict": rep.verdict.wording() }), table }
}

pub fn shilov(rep: &ShilovReport, p: u32) -> Output {
    let labels: Vec<String> = rep.points.iter().map(|d| d.label(p)).collect();
    let mut table = Table::new(&["subset", "points"]);
    for (i, s) in rep.minimal.iter().enumerate() {
        let names: Vec<&str> = s.iter().map(|j| labels[*j].as_str()).collect();
        table.push(vec![i.to_string(), names.join(",")]);
    }
    let json = json!({
        "family": rep.family,
        "points": labels,
        "minimal": rep.minimal,
        "unique": rep.unique,
    });
    Output { json, table }
}

fn direct_json(d: &DirectTdz) -> Value {
    match d {
        DirectTdz::Tdz { witness } => json!({ "verdict": "tdz", "witness": witness }),
        DirectTdz::NotTdz { certificate } => json!({ "verdict": "not_tdz", "certificate": certificate }),
        DirectTdz::Undecided => json!({ "verdict": "undecided" }),
    }
}

pub fn tdz(rep: &TdzReport, p: u32, family: &str) -> Output {
    let shilov: Vec<String> = rep.shilov.iter().map(|d| d.label(p)).collect();
    let json = json!({
        "family": family,
        "direct": direct_json(&rep.direct),
        "escassut": rep.escassut,
        "shilov": shilov,
        "agree": rep.agree,
    });
    Output::from_json(json)
}

fn membership_json(m: &Membership, p: u32) -> Value {
    match m {
        Membership::In(phi) => json!({ "status": "in", "kernel_of": phi.label(p) }),
        Membership::Out(r) => json!({ "status": "out", "reason": r }),
        Membership::Undecided(r) => json!({ "status": "undecided", "reason": r }),
    }
}

pub fn topspec(rep: &TopSpecReport, p: u32) -> Output {
    let mut table = Table::new(&["candidate", "status", "kernel_ok", "bounded_ok"]);
    let opt = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            table.push(vec![r.candidate.label(), r.membership.name().into(), opt(r.kernel_ok), opt(r.bounded_ok)]);
            let mut j = membership_json(&r.membership, p);
            j["candidate"] = json!(r.candidate.label());
            j["kernel_ok"] = json!(r.kernel_ok);
            j["bounded_ok"] = json!(r.bounded_ok);
            j
        })
        .collect();
    Output { json: json!({ "family": rep.family, "rows": rows }), table }
}

pub fn zar_compare(rows: &[ZarCompareRow]) -> Output {
    let mut table = Table::new(&["candidate", "member", "denominators_avoid", "contraction_ok", "unit_witness"]);
    let js: Vec<Value> = rows
        .iter()
        .map(|r| {
            table.push(vec![
                r.candidate.label(),
                r.member.to_string(),
                r.denominators_avoid.to_string(),
                r.contraction_ok.to_string(),
                r.unit_witness.clone().unwrap_or_else(|| "-".into()),
            ]);
            json!({
                "candidate": r.candidate.label(),
                "extension": format!("{} A^Zar", r.candidate.label()),
                "member": r.member,
                "denominators_avoid": r.denominators_avoid,
                "contraction_ok": r.contraction_ok,
                "unit_witness": r.unit_witness,
            })
        })
        .collect();
    Output { json: json!({ "rows": js }), table }
}

pub fn acceptance(rep: &AcceptanceReport) -> Output {
    let mut table = Table::new(&["id", "name", "passed", "detail"]);
    let js: Vec<Value> = rep
        .results
        .iter()
        .map(|r| {
            table.push(vec![r.id.to_string(), r.name.into(), r.passed.to_string(), r.detail.clone()]);
            json!({ "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail })
        })
        .collect();
    Output { json: json!({ "criteria": js, "all_passed": rep.all_passed() }), table }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::{NormValue, PExponent, Reading};
    use crate::witt::WittPolyCache;

    #[test]
    fn exact_norm_strings() {
        assert_eq!(NormValue::Pow(PExponent::new(2, 3, 1)).render(2), "2^(-3/2)");
        assert_eq!(NormValue::Zero.render(2), "0");
        assert_eq!(Reading::Below(NormValue::p_pow(2, 8)).render(2), "<= 2^(-8) (below precision)");
    }

    #[test]
    fn s1_text() {
        let c = WittPolyCache::get(2, 2, None).unwrap();
        assert_eq!(witt_poly_text(c.sum_poly(1), 2), "X_1 + Y_1 - X_0*Y_0");
        assert_eq!(witt_poly_text(c.sum_poly(0), 2), "X_0 + Y_0");
        assert_eq!(witt_poly_text(c.prod_poly(1), 2), "2*X_1*Y_1 + X_0^2*Y_1 + X_1*Y_0^2");
    }

    #[test]
    fn tsv_and_json_are_stable() {
        let out = Output::from_json(json!({ "b": "2^(-1)", "a": 1 }));
        assert_eq!(emit(&out, OutputFormat::Json), "{\"a\":1,\"b\":\"2^(-1)\"}\n");
        assert_eq!(emit(&out, OutputFormat::Tsv), "key\tvalue\na\t1\nb\t2^(-1)\n");
    }

    #[test]
    fn error_object() {
        let v = error_json(&Error::Unsupported("p = 7".into()));
        assert_eq!(v["error"]["kind"], "unsupported");
    }
}
