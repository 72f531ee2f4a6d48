//! JSON report documents.

use qfrft_core::suites::SuiteReport;
use qfrft_core::{Axis, Grid, Order, Report};
use serde_json::{json, Map, Value};

pub fn order(o: &Order) -> Value {
    json!({
        "alpha1": o.alpha1(),
        "alpha2": o.alpha2(),
        "p1": o.p(Axis::X1),
        "p2": o.p(Axis::X2),
    })
}

pub fn grid(g: &Grid) -> Value {
    let (x1_min, x1_max) = g.bounds(Axis::X1);
    let (x2_min, x2_max) = g.bounds(Axis::X2);
    json!({
        "n1": g.n1(),
        "n2": g.n2(),
        "x1_min": x1_min,
        "x1_max": x1_max,
        "x2_min": x2_min,
        "x2_max": x2_max,
    })
}

/// Signed terms keyed by label, in summation order.
pub fn rhs_terms(r: &Report) -> Value {
    let mut terms = Map::new();
    for t in &r.rhs_terms {
        terms.insert(
            t.label.to_string(),
            json!({ "sign": t.sign, "value": t.value }),
        );
    }
    Value::Object(terms)
}

pub fn bound(r: &Report, tolerances: Value, pass: bool) -> Value {
    json!({
        "theorem_id": r.theorem_id.as_str(),
        "orders": r.orders.iter().map(order).collect::<Vec<_>>(),
        "axis": r.axis.map(Axis::number),
        "lhs": r.lhs,
        "rhs": r.rhs,
        "slack": r.slack,
        "rhs_terms": rhs_terms(r),
        "grid": grid(&r.grid),
        "tolerances": tolerances,
        "pass": pass,
    })
}

pub fn suite(r: &SuiteReport) -> Value {
    json!({
        "suite": r.suite.name(),
        "config": r.config,
        "cases": r.cases,
        "pass": r.passed(),
    })
}

pub fn render(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("report values serialize");
    out.push(b'\n');
    out
}
