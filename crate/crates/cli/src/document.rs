//! Algebra documents: JSON (or TOML) with exact rational coefficients as strings.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use nilcalc_core::rational::{format_rational, parse_rational};
use nilcalc_core::{JordanHolderFlag, LieAlgebra, Matrix, Rational};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMatrix {
    pub real: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<Vec<String>>>,
}

/// `−Σ X_j² + Σ γ_l Z_l`: metric on the weight-1 span, one `γ_l` per weight-2 basis element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub gamma: Vec<ComplexMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    pub dimension: usize,
    pub weights: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    /// 1-based `c_ij^k` with `i < j`.
    pub brackets: Vec<BracketEntry>,
    /// 1-based Jordan–Hölder permutation, center first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorBlock>,
}

/// A parsed, validated algebra together with its source document.
#[derive(Clone, Debug)]
pub struct ParsedAlgebra {
    pub document: AlgebraDocument,
    pub algebra: LieAlgebra,
    pub flag: Option<JordanHolderFlag>,
}

impl AlgebraDocument {
    pub fn from_algebra(g: &LieAlgebra) -> Self {
        AlgebraDocument {
            name: g.name().to_string(),
            dimension: g.dim(),
            weights: g.weights().to_vec(),
            names: Some(g.basis_names().to_vec()),
            brackets: g.entries().into_iter().map(|(i, j, k, c)| BracketEntry { i: i + 1, j: j + 1, k: k + 1, coeff: format_rational(&c) }).collect(),
            flag: None,
            operator: None,
        }
    }

    /// Compact JSON with keys sorted at every level.
    pub fn canonical_json(&self) -> String {
        canonical(&serde_json::to_value(self).expect("documents serialize"))
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_pretty_json(&self) -> String {
        serde_json::to_string_pretty(&serde_json::to_value(self).expect("documents serialize")).expect("values serialize")
    }
}

/// Serializes with sorted object keys regardless of how `serde_json` orders maps.
pub fn canonical(v: &serde_json::Value) -> String {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let body: Vec<String> = keys.iter().map(|k| format!("{}:{}", Value::String((*k).clone()), canonical(&map[*k]))).collect();
            format!("{{{}}}", body.join(","))
        }
        Value::Array(items) => format!("[{}]", items.iter().map(canonical).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Parse { message: msg.into(), line: None, column: None }
}

fn rational(s: &str, what: &str) -> CliResult<Rational> {
    parse_rational(s).map_err(|e| malformed(format!("{what}: {e}")))
}

pub fn rational_matrix(rows: &[Vec<String>], what: &str) -> CliResult<Matrix> {
    rows.iter().map(|r| r.iter().map(|s| rational(s, what)).collect()).collect()
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Reads a JSON document, or TOML when the text does not start with `{`.
pub fn parse_document(text: &str) -> CliResult<AlgebraDocument> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m).to_string();
            CliError::Parse { message, line: Some(e.line()), column: Some(e.column()) }
        })
    } else {
        toml::from_str(text).map_err(|e| {
            let (line, column) = match e.span() {
                Some(s) => {
                    let (l, c) = line_column(text, s.start);
                    (Some(l), Some(c))
                }
                None => (None, None),
            };
            CliError::Parse { message: e.message().to_string(), line, column }
        })
    }
}

pub fn build_algebra(doc: &AlgebraDocument) -> CliResult<ParsedAlgebra> {
    let n = doc.dimension;
    if doc.weights.len() != n {
        return Err(malformed(format!("{} weights for dimension {n}", doc.weights.len())));
    }
    if let Some(names) = &doc.names {
        if names.len() != n {
            return Err(malformed(format!("{} names for dimension {n}", names.len())));
        }
    }
    let mut entries = Vec::with_capacity(doc.brackets.len());
    for b in &doc.brackets {
        for idx in [b.i, b.j, b.k] {
            if idx == 0 || idx > n {
                return Err(malformed(format!("bracket index {idx} outside 1..={n}")));
            }
        }
        let c = rational(&b.coeff, &format!("coefficient c_{{{},{}}}^{}", b.i, b.j, b.k))?;
        entries.push((b.i - 1, b.j - 1, b.k - 1, c));
    }
    let algebra = LieAlgebra::new(doc.name.clone(), doc.weights.clone(), doc.names.clone(), &entries)?;
    let diags = algebra.validate();
    if !diags.is_empty() {
        return Err(CliError::Invalid(diags));
    }
    let flag = match &doc.flag {
        None => None,
        Some(p) => {
            if p.iter().any(|&i| i == 0 || i > n) {
                return Err(malformed("flag entries must lie in 1..=dimension"));
            }
            Some(JordanHolderFlag::from_permutation(&algebra, p.iter().map(|i| i - 1).collect())?)
        }
    };
    Ok(ParsedAlgebra { document: doc.clone(), algebra, flag })
}

pub fn parse_algebra(text: &str) -> CliResult<ParsedAlgebra> {
    build_algebra(&parse_document(text)?)
}
