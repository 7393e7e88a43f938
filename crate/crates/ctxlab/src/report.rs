//! Plain-text and JSON rendering of results.

use ctxlab_core::povm::{ContextGraph, WitnessKind};
use ctxlab_core::{Complex64, Ket, Operator, Payload, Povm};
use serde_json::{json, Value};

/// `x` with 12 significant digits, trailing zeros trimmed.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        let s = format!("{:.11e}", x);
        let (mantissa, e) = s.split_once('e').expect("scientific");
        return format!("{}e{}", trim(mantissa), e);
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = trim(&format!("{:.*}", decimals, x));
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn complex(z: Complex64) -> String {
    if z.im == 0.0 || sig(z.im) == "0" {
        sig(z.re)
    } else if z.re == 0.0 || sig(z.re) == "0" {
        format!("{}i", sig(z.im))
    } else if z.im < 0.0 {
        format!("{}-{}i", sig(z.re), sig(-z.im))
    } else {
        format!("{}+{}i", sig(z.re), sig(z.im))
    }
}

pub fn ket(k: &Ket) -> String {
    let parts: Vec<String> = k.amplitudes().iter().map(|z| complex(*z)).collect();
    format!("({})", parts.join(", "))
}

pub fn matrix(op: &Operator) -> String {
    op.rows()
        .map(|r| {
            let parts: Vec<String> = r.iter().map(|z| complex(*z)).collect();
            format!("  [{}]", parts.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn json_complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn json_ket(k: &Ket) -> Value {
    Value::Array(k.amplitudes().iter().map(|z| json_complex(*z)).collect())
}

pub fn json_matrix(op: &Operator) -> Value {
    Value::Array(
        op.rows()
            .map(|r| Value::Array(r.iter().map(|z| json_complex(*z)).collect()))
            .collect(),
    )
}

pub fn povm_elements_text(p: &Povm) -> String {
    let mut out = String::new();
    for e in p.elements() {
        let weight = p.context_selection_probability(&e.label).unwrap_or(f64::NAN);
        match &e.payload {
            Payload::Vector(v) => {
                out += &format!("  {:<8} weight {:<16} {}\n", e.label, sig(weight), ket(v));
            }
            Payload::Operator(op) => {
                out += &format!(
                    "  {:<8} weight {:<16} operator, trace {}\n{}\n",
                    e.label,
                    sig(weight),
                    sig(op.trace().re),
                    matrix(op)
                );
            }
        }
    }
    out
}

pub fn povm_elements_json(p: &Povm) -> Value {
    Value::Array(
        p.elements()
            .iter()
            .map(|e| {
                let weight = p.context_selection_probability(&e.label).ok();
                match &e.payload {
                    Payload::Vector(v) => json!({"label": e.label, "weight": weight, "vector": json_ket(v)}),
                    Payload::Operator(op) => json!({"label": e.label, "weight": weight, "matrix": json_matrix(op)}),
                }
            })
            .collect(),
    )
}

fn witness_kind(kind: WitnessKind) -> &'static str {
    match kind {
        WitnessKind::Overlap => "overlap",
        WitnessKind::Commutator => "commutator",
    }
}

pub fn graph_text(g: &ContextGraph) -> String {
    let mut out = format!("context graph: {} nodes, {} edges\n", g.nodes.len(), g.edges.len());
    for e in &g.edges {
        out += &format!(
            "  {} -- {}  ({} {}{})\n",
            e.a,
            e.b,
            witness_kind(e.witness.kind),
            sig(e.witness.magnitude),
            if e.witness.proportional { ", proportional" } else { "" }
        );
    }
    if !g.excluded.is_empty() {
        out += &format!("  excluded zero outcomes: {}\n", g.excluded.join(", "));
    }
    out
}

pub fn graph_json(g: &ContextGraph) -> Value {
    json!({
        "nodes": g.nodes,
        "edges": g.edges.iter().map(|e| json!({
            "a": e.a,
            "b": e.b,
            "kind": witness_kind(e.witness.kind),
            "witness": e.witness.magnitude,
            "proportional": e.witness.proportional,
        })).collect::<Vec<_>>(),
        "excluded": g.excluded,
    })
}
