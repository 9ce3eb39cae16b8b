//! System descriptions: a JSON document with the two matrices and a
//! specification.
//!
//! ```json
//! { "A": [[1, 1], [1, 0]], "B": [[1, 0], [0, 1]], "kappa": "canonical" }
//! ```
//!
//! `kappa` is `"canonical"` (the default), `"exchange"` (one-vertex systems
//! only) or a list of `{"alpha", "b", "a", "beta"}` objects whose values are
//! edge identifiers `"(i,j,k)"`.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;
use textile_core::graph::{graph_from_matrix, GraphTag};
use textile_core::textile::{canonical_specification, exchange_specification, KappaEntry, TextileError};
use textile_core::{DirectedMultigraph, EdgeId, NonnegMatrix, Specification, TextileSystem};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemInput {
    #[serde(rename = "A")]
    pub matrix_a: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    pub matrix_b: Vec<Vec<i64>>,
    #[serde(default)]
    pub kappa: KappaInput,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(untagged)]
pub enum KappaInput {
    #[default]
    #[serde(skip)]
    Canonical,
    Named(String),
    Explicit(Vec<KappaInputEntry>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaInputEntry {
    pub alpha: String,
    pub b: String,
    pub a: String,
    pub beta: String,
}

/// How the specification of a built system was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaKind {
    Canonical,
    Exchange,
    Explicit,
}

impl KappaKind {
    pub fn name(self) -> &'static str {
        match self {
            KappaKind::Canonical => "canonical",
            KappaKind::Exchange => "exchange",
            KappaKind::Explicit => "explicit",
        }
    }
}

pub struct LoadedSystem {
    pub system: TextileSystem,
    pub kind: KappaKind,
}

/// Reads from a file, or from standard input for `None` and `-`.
pub fn read_source(path: Option<&Path>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

pub fn parse_input(text: &str) -> Result<SystemInput, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

fn matrix(name: &str, rows: &[Vec<i64>]) -> Result<NonnegMatrix, CliError> {
    NonnegMatrix::from_signed_rows(rows).map_err(|e| CliError::Input(format!("matrix {name}: {e}")))
}

fn edge(ids: &str, graph: &DirectedMultigraph, field: &str) -> Result<usize, CliError> {
    let id: EdgeId = ids.parse().map_err(|e| CliError::Parse(format!("kappa.{field}: {e}")))?;
    graph
        .position(&id)
        .ok_or_else(|| CliError::InvalidKappa(format!("kappa.{field}: {}-edge {id} does not exist", graph.tag())))
}

fn specification(
    kappa: &KappaInput,
    ga: &DirectedMultigraph,
    gb: &DirectedMultigraph,
) -> Result<(Specification, KappaKind), CliError> {
    match kappa {
        KappaInput::Canonical => Ok((canonical_specification(ga, gb).map_err(textile_error)?, KappaKind::Canonical)),
        KappaInput::Named(name) if name == "canonical" => {
            Ok((canonical_specification(ga, gb).map_err(textile_error)?, KappaKind::Canonical))
        }
        KappaInput::Named(name) if name == "exchange" => {
            if ga.vertex_count() != 1 || gb.vertex_count() != 1 {
                return Err(CliError::Input("kappa \"exchange\" needs 1x1 matrices A = [N], B = [M]".into()));
            }
            let (n, m) = (ga.matrix()[(0, 0)], gb.matrix()[(0, 0)]);
            Ok((exchange_specification(n, m).map_err(textile_error)?, KappaKind::Exchange))
        }
        KappaInput::Named(other) => {
            Err(CliError::Parse(format!("kappa must be \"canonical\", \"exchange\" or a list, got {other:?}")))
        }
        KappaInput::Explicit(entries) => {
            let mut out = Vec::with_capacity(entries.len());
            for e in entries {
                out.push(KappaEntry {
                    alpha: edge(&e.alpha, ga, "alpha")?,
                    b: edge(&e.b, gb, "b")?,
                    a: edge(&e.a, gb, "a")?,
                    beta: edge(&e.beta, ga, "beta")?,
                });
            }
            Ok((Specification::from_entries(out), KappaKind::Explicit))
        }
    }
}

pub fn textile_error(e: TextileError) -> CliError {
    match e {
        TextileError::NotCommuting { .. } => CliError::Commutation(e.to_string()),
        TextileError::InvalidSpecification(_) => CliError::InvalidKappa(e.to_string()),
        TextileError::VertexMismatch { .. } | TextileError::ExchangeTooSmall { .. } => CliError::Input(e.to_string()),
    }
}

/// Validates matrices, checks `AB = BA` and builds the system.
pub fn build_system(input: &SystemInput) -> Result<LoadedSystem, CliError> {
    let a = matrix("A", &input.matrix_a)?;
    let b = matrix("B", &input.matrix_b)?;
    if a.dim() != b.dim() {
        return Err(CliError::Input(format!("A is {0}x{0} but B is {1}x{1}", a.dim(), b.dim())));
    }
    textile_core::textile::check_matrices_commute(&a, &b).map_err(textile_error)?;
    let ga = graph_from_matrix(&a, GraphTag::A);
    let gb = graph_from_matrix(&b, GraphTag::B);
    let (kappa, kind) = specification(&input.kappa, &ga, &gb)?;
    let system = TextileSystem::build(ga, gb, kappa).map_err(textile_error)?;
    Ok(LoadedSystem { system, kind })
}

pub fn load(path: Option<&Path>) -> Result<LoadedSystem, CliError> {
    build_system(&parse_input(&read_source(path)?)?)
}
