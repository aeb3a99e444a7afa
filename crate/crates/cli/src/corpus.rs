//! Algebra families and the bundled example corpus.

use nilcalc_core::families;
use nilcalc_core::liealg::mohsen_modification;
use nilcalc_core::LieAlgebra;

use crate::document::{parse_algebra, AlgebraDocument, ParsedAlgebra};
use crate::error::{CliError, CliResult};

pub const FAMILIES: [&str; 8] = ["heisenberg", "complex-heisenberg", "heisenberg-product", "quotient-chain", "free-step2", "engel", "upper-triangular", "mohsen-of"];

/// Bundled documents, addressable as `bundled:<name>`.
pub const BUNDLED: [(&str, &str); 10] = [
    ("heisenberg-1", include_str!("../corpus/heisenberg-1.json")),
    ("heisenberg-2", include_str!("../corpus/heisenberg-2.json")),
    ("complex-heisenberg-1", include_str!("../corpus/complex-heisenberg-1.json")),
    ("quotient-chain-3", include_str!("../corpus/quotient-chain-3.json")),
    ("quotient-chain-4", include_str!("../corpus/quotient-chain-4.json")),
    ("engel", include_str!("../corpus/engel.json")),
    ("upper-triangular-3", include_str!("../corpus/upper-triangular-3.json")),
    ("free-step2-3", include_str!("../corpus/free-step2-3.json")),
    ("heisenberg-1-shifted", include_str!("../corpus/heisenberg-1-shifted.json")),
    ("engel-imaginary", include_str!("../corpus/engel-imaginary.json")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

fn usize_param(family: &str, param: Option<&str>, default: Option<usize>) -> CliResult<usize> {
    match (param, default) {
        (None, Some(d)) => Ok(d),
        (None, None) => Err(CliError::Usage(format!("family {family} needs --param"))),
        (Some(p), _) => p.trim().parse().map_err(|_| CliError::Usage(format!("family {family}: --param must be a positive integer, got {p:?}"))),
    }
}

fn family_algebra(family: &str, param: Option<&str>) -> CliResult<LieAlgebra> {
    let g = match family {
        "heisenberg" => families::heisenberg(usize_param(family, param, Some(1))?)?,
        "complex-heisenberg" => families::complex_heisenberg(usize_param(family, param, Some(1))?)?,
        "heisenberg-product" => {
            let p = param.unwrap_or("1,1");
            let ns = p
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Usage(format!("heisenberg-product: --param must be a comma-separated list of sizes, got {p:?}")))?;
            families::heisenberg_product(&ns)?
        }
        "quotient-chain" => families::quotient_chain(usize_param(family, param, None)?)?,
        "free-step2" => families::free_step2(usize_param(family, param, None)?)?,
        "engel" => families::engel()?,
        "upper-triangular" => families::upper_triangular(usize_param(family, param, None)?)?,
        "mohsen-of" => {
            let p = param.ok_or_else(|| CliError::Usage("mohsen-of needs --param FAMILY[:PARAM] or a document path".into()))?;
            mohsen_modification(&resolve_source(p)?.algebra)?
        }
        other => return Err(CliError::Usage(format!("unknown family {other:?}; expected one of {}", FAMILIES.join(", ")))),
    };
    Ok(g)
}

/// Document for a named family at a parameter.
pub fn corpus_generate(family: &str, param: Option<&str>) -> CliResult<AlgebraDocument> {
    Ok(AlgebraDocument::from_algebra(&family_algebra(family, param)?))
}

/// Resolves `bundled:NAME`, `FAMILY[:PARAM]` or a file path.
pub fn resolve_source(source: &str) -> CliResult<ParsedAlgebra> {
    if let Some(name) = source.strip_prefix("bundled:") {
        let text = bundled(name).ok_or_else(|| CliError::Usage(format!("no bundled document named {name:?}")))?;
        return parse_algebra(text);
    }
    let (family, param) = match source.split_once(':') {
        Some((f, p)) => (f, Some(p)),
        None => (source, None),
    };
    if FAMILIES.contains(&family) {
        let g = family_algebra(family, param)?;
        return Ok(ParsedAlgebra { document: AlgebraDocument::from_algebra(&g), algebra: g, flag: None });
    }
    parse_algebra(&std::fs::read_to_string(source)?)
}
