//! Report documents. Every report is a serde structure with a fixed field
//! order; `--pretty` renders the same document as aligned text.

use std::fmt::Write;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Number, Value};
use textile_core::closedform::ClosedFormResult;
use textile_core::{AbelianGroup, NonnegMatrix, TextileSystem, Tile};

/// Exact integer as a JSON number, however large.
pub fn exact(n: &impl ToString) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integers are valid JSON numbers"))
}

/// A boolean check; `witness` backs a success, `counterexample` a failure.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub holds: bool,
    pub witness: Value,
    pub counterexample: Value,
}

impl Check {
    pub fn pass(witness: Value) -> Self {
        Check { holds: true, witness, counterexample: Value::Null }
    }

    pub fn fail(counterexample: Value) -> Self {
        Check { holds: false, witness: Value::Null, counterexample }
    }

    pub fn from_result(r: Result<Value, Value>) -> Self {
        match r {
            Ok(w) => Check::pass(w),
            Err(c) => Check::fail(c),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Group {
    pub text: String,
    pub free_rank: usize,
    pub torsion: Vec<Value>,
}

impl From<&AbelianGroup> for Group {
    fn from(g: &AbelianGroup) -> Self {
        Group { text: g.to_string(), free_rank: g.free_rank(), torsion: g.torsion().iter().map(exact).collect() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TileRef {
    pub index: usize,
    pub top: String,
    pub right: String,
    pub left: String,
    pub bottom: String,
}

impl TileRef {
    pub fn new(sys: &TextileSystem, tile: &Tile) -> Self {
        let [top, right, left, bottom] = sys.tile_ids(tile).map(|id| id.to_string());
        let index = sys.tile_index(tile).map_or(0, |i| i + 1);
        TileRef { index, top, right, left, bottom }
    }

    pub fn at(sys: &TextileSystem, ix: usize) -> Self {
        Self::new(sys, &sys.tiles()[ix])
    }
}

pub fn tile_value(sys: &TextileSystem, ix: usize) -> Value {
    serde_json::to_value(TileRef::at(sys, ix)).expect("plain data")
}

/// `Ω_κ` as pairs of edge identifiers `[α, a]`.
pub fn omega_ids(sys: &TextileSystem) -> Vec<[String; 2]> {
    sys.omega()
        .iter()
        .map(|&(alpha, a)| [sys.graph_a().edge(alpha).id.to_string(), sys.graph_b().edge(a).id.to_string()])
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemSummary {
    pub vertices: usize,
    pub edges_a: usize,
    pub edges_b: usize,
    pub tiles: usize,
    pub omega: usize,
    pub kappa: &'static str,
}

impl SystemSummary {
    pub fn new(sys: &TextileSystem, kappa: &'static str) -> Self {
        SystemSummary {
            vertices: sys.graph_a().vertex_count(),
            edges_a: sys.graph_a().edge_count(),
            edges_b: sys.graph_b().edge_count(),
            tiles: sys.tiles().len(),
            omega: sys.omega().len(),
            kappa,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Matrices {
    pub omega: Vec<[String; 2]>,
    pub a_kappa: Vec<Vec<u64>>,
    pub b_kappa: Vec<Vec<u64>>,
    pub h_kappa: Vec<Vec<u64>>,
}

impl Matrices {
    pub fn new(sys: &TextileSystem) -> Self {
        Matrices {
            omega: omega_ids(sys),
            a_kappa: sys.a_kappa().to_rows(),
            b_kappa: sys.b_kappa().to_rows(),
            h_kappa: sys.h_kappa().to_rows(),
        }
    }
}

pub fn rows(m: &NonnegMatrix) -> Value {
    json!(m.to_rows())
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormSection {
    pub n: u64,
    pub m: u64,
    pub summands: Vec<Value>,
    pub quotients: Vec<u64>,
    pub remainders: Vec<u64>,
    pub gcd: u64,
    pub g: Value,
    pub k0: Group,
    pub k1: Group,
}

impl ClosedFormSection {
    pub fn new(n: u64, m: u64, r: &ClosedFormResult) -> Self {
        ClosedFormSection {
            n,
            m,
            summands: r.summands.iter().map(exact).collect(),
            quotients: r.trace.quotients.clone(),
            remainders: r.trace.remainders.clone(),
            gcd: r.trace.gcd,
            g: exact(&r.g),
            k0: (&r.canonical).into(),
            k1: (&r.k1).into(),
        }
    }
}

/// Aligned plain-text rendering of a report document.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        object(&mut out, map, 0);
    } else {
        let _ = writeln!(out, "{}", scalar(v));
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => if *b { "yes" } else { "no" }.into(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

fn is_group(map: &Map<String, Value>) -> bool {
    map.len() == 3 && map.contains_key("text") && map.contains_key("free_rank") && map.contains_key("torsion")
}

fn is_check(map: &Map<String, Value>) -> bool {
    map.len() == 3 && map.contains_key("holds") && map.contains_key("witness") && map.contains_key("counterexample")
}

/// One-line form of a value, if it has one.
fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Object(map) if is_group(map) => Some(scalar(&map["text"])),
        Value::Object(map) if is_check(map) => {
            let (verdict, detail) = if map["holds"] == Value::Bool(true) {
                ("yes", &map["witness"])
            } else {
                ("no ", &map["counterexample"])
            };
            Some(match detail {
                Value::Null => verdict.trim_end().into(),
                d => format!("{verdict}  {d}"),
            })
        }
        Value::Array(items) if items.is_empty() => Some("-".into()),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(items.iter().map(scalar).collect::<Vec<_>>().join(" "))
        }
        Value::Object(_) | Value::Array(_) => None,
        s => Some(scalar(s)),
    }
}

fn object(out: &mut String, map: &Map<String, Value>, indent: usize) {
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let pad = " ".repeat(indent);
    for (k, v) in map {
        if let Some(line) = inline(v) {
            let _ = writeln!(out, "{pad}{k:<width$}  {line}");
            continue;
        }
        let _ = writeln!(out, "{pad}{k}:");
        match v {
            Value::Object(inner) => object(out, inner, indent + 2),
            Value::Array(items) => array(out, items, indent + 2),
            _ => unreachable!("scalars render inline"),
        }
    }
}

fn array(out: &mut String, items: &[Value], indent: usize) {
    let pad = " ".repeat(indent);
    // rows of scalars (matrices, pairs) as aligned columns
    if items.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| inline(y).is_some() && !y.is_array()))) {
        let cells: Vec<Vec<String>> =
            items.iter().map(|r| r.as_array().unwrap().iter().map(|y| inline(y).unwrap()).collect()).collect();
        table(out, None, &cells, &pad);
        return;
    }
    // records with the same keys and one-line values as a table
    if let Some(Value::Object(first)) = items.first() {
        let keys: Vec<&String> = first.keys().collect();
        let flat = items.iter().all(|x| {
            x.as_object().is_some_and(|o| o.keys().eq(keys.iter().copied()) && o.values().all(|y| inline(y).is_some()))
        });
        if flat {
            let cells: Vec<Vec<String>> = items
                .iter()
                .map(|x| x.as_object().unwrap().values().map(|y| inline(y).unwrap()).collect())
                .collect();
            let header: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
            table(out, Some(&header), &cells, &pad);
            return;
        }
    }
    for (i, item) in items.iter().enumerate() {
        match item {
            Value::Object(inner) => {
                let _ = writeln!(out, "{pad}[{}]", i + 1);
                object(out, inner, indent + 2);
            }
            other => {
                let _ = writeln!(out, "{pad}{}", inline(other).unwrap_or_else(|| other.to_string()));
            }
        }
    }
}

fn table(out: &mut String, header: Option<&[String]>, cells: &[Vec<String>], pad: &str) {
    let cols = header.map_or_else(|| cells.iter().map(Vec::len).max().unwrap_or(0), <[String]>::len);
    let mut widths = vec![0; cols];
    for row in header.into_iter().chain(cells.iter().map(Vec::as_slice)) {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    for row in header.into_iter().chain(cells.iter().map(Vec::as_slice)) {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{pad}{}", line.join("  ").trim_end());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_numbers_keep_every_digit() {
        let big = "123456789012345678901234567890";
        let v = exact(&big);
        assert_eq!(serde_json::to_string(&v).unwrap(), big);
    }

    #[test]
    fn groups_and_checks_render_inline() {
        let g = Group::from(&AbelianGroup::cyclic(8));
        let doc = json!({ "k0": to(g), "ok": to(Check::pass(json!({"n": 1}))), "bad": to(Check::fail(Value::Null)) });
        assert_eq!(render_text(&doc), "k0   Z/8Z\nok   yes  {\"n\":1}\nbad  no\n");
    }

    #[test]
    fn records_render_as_tables() {
        let doc = json!({ "rows": [{ "n": 2, "k0": "Z/3Z" }, { "n": 10, "k0": "0" }] });
        assert_eq!(render_text(&doc), "rows:\n   n    k0\n   2  Z/3Z\n  10     0\n");
    }

    fn to(x: impl Serialize) -> Value {
        serde_json::to_value(x).unwrap()
    }
}
