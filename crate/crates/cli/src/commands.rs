//! Command dispatch: each command turns an algebra and a config into a report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use nilcalc_core::coadjoint::{
    enumerate_strata, extend_center_covector, has_flat_orbits, is_flat, is_on_gamma_partial, jump_indices, kirillov_form, reduced_symplectic_form,
    restrict_to_center, sample_covectors, vergne_polarization, FlatReason, JumpProfile,
};
use nilcalc_core::hellip::{self, BvEOperatorSpec, RocklandCheckConfig};
use nilcalc_core::lagrangian::{random_lagrangian, SymplecticSpace, DEFAULT_PHASE_TOLERANCE};
use nilcalc_core::liealg::{jordan_holder_basis, mohsen_flag, mohsen_modification};
use nilcalc_core::rational::{format_rational, ints, is_zero_vec};
use nilcalc_core::spectral::CMatrix;
use nilcalc_core::symbolrep::flat_rep;
use nilcalc_core::{linalg, JordanHolderFlag, LieAlgebra, Matrix, Rational};

use crate::corpus::resolve_source;
use crate::document::{rational_matrix, AlgebraDocument, ComplexMatrix, ParsedAlgebra};
use crate::error::{CliError, CliResult};
use crate::report::{AlgebraSummary, AnalysisReport, CommandEcho, ConfigEcho, ToolInfo, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Orbits,
    Stratify,
    Polarize,
    MaslovDemo,
    Helliptic,
    EngelCheck,
    Mohsen,
    CorpusRegression,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Validate,
        Command::Orbits,
        Command::Stratify,
        Command::Polarize,
        Command::MaslovDemo,
        Command::Helliptic,
        Command::EngelCheck,
        Command::Mohsen,
        Command::CorpusRegression,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Orbits => "orbits",
            Command::Stratify => "stratify",
            Command::Polarize => "polarize",
            Command::MaslovDemo => "maslov-demo",
            Command::Helliptic => "helliptic",
            Command::EngelCheck => "engel-check",
            Command::Mohsen => "mohsen",
            Command::CorpusRegression => "corpus-regression",
        }
    }

    pub fn parse(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Commands that run without an input algebra.
    pub fn algebra_optional(self) -> bool {
        matches!(self, Command::MaslovDemo | Command::CorpusRegression)
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub xi: Option<Vec<Rational>>,
    pub resolution: usize,
    pub truncation: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        let d = RocklandCheckConfig::default();
        Config { xi: None, resolution: d.resolution, truncation: d.truncation, tolerance: d.tolerance, seed: d.seed }
    }
}

impl Config {
    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            xi: self.xi.as_ref().map(|v| v.iter().map(format_rational).collect()),
            resolution: self.resolution,
            truncation: self.truncation,
            tolerance: self.tolerance,
            seed: self.seed,
        }
    }

    fn rockland(&self) -> RocklandCheckConfig {
        RocklandCheckConfig { truncation: self.truncation, tolerance: self.tolerance, resolution: self.resolution, seed: self.seed }
    }
}

/// Parses `"a,b,..."` into rationals.
pub fn parse_xi(text: &str) -> CliResult<Vec<Rational>> {
    text.split(',')
        .map(|s| nilcalc_core::rational::parse_rational(s.trim()).map_err(|e| CliError::Usage(format!("--xi: {e}"))))
        .collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|r| strings(r)).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn profile_json(p: &JumpProfile) -> Value {
    json!({ "profile": p.render(), "last": p.last().iter().collect::<Vec<_>>(), "orbit_dim": p.orbit_dim() })
}

fn flag_of(input: &ParsedAlgebra) -> CliResult<JordanHolderFlag> {
    match &input.flag {
        Some(f) => Ok(f.clone()),
        None => Ok(jordan_holder_basis(&input.algebra)?),
    }
}

/// Accepts a full covector or coordinates on the center (in flag order).
fn full_covector(g: &LieAlgebra, flag: &JordanHolderFlag, xi: &[Rational]) -> CliResult<Vec<Rational>> {
    if xi.len() == g.dim() {
        Ok(xi.to_vec())
    } else if xi.len() == flag.center_dim() {
        Ok(extend_center_covector(g, flag, xi))
    } else {
        Err(CliError::Usage(format!("--xi needs {} (full) or {} (center) coordinates, got {}", g.dim(), flag.center_dim(), xi.len())))
    }
}

fn reason_message(reason: FlatReason) -> &'static str {
    match reason {
        FlatReason::Flat => "flat orbits exist",
        FlatReason::OddCodimension => "no flat orbits: odd codimension of center",
        FlatReason::PfaffianVanishes => "no flat orbits: Pfaffian vanishes identically",
    }
}

fn reason_code(reason: FlatReason) -> &'static str {
    match reason {
        FlatReason::Flat => "flat",
        FlatReason::OddCodimension => "odd-codimension",
        FlatReason::PfaffianVanishes => "pfaffian-vanishes",
    }
}

pub fn run_command(command: Command, input: Option<&ParsedAlgebra>, source: Option<&str>, config: &Config) -> CliResult<AnalysisReport> {
    let mut warnings = Vec::new();
    let results = match (command, input) {
        (Command::MaslovDemo, _) => maslov_demo(input, config, &mut warnings)?,
        (Command::CorpusRegression, _) => corpus_regression()?,
        (_, None) => return Err(CliError::Usage(format!("{} needs --algebra FILE or --family NAME", command.name()))),
        (Command::Validate, Some(p)) => validate(p)?,
        (Command::Orbits, Some(p)) => orbits(p, config)?,
        (Command::Stratify, Some(p)) => stratify(p, config)?,
        (Command::Polarize, Some(p)) => polarize(p, config)?,
        (Command::Helliptic, Some(p)) => helliptic(p, config, &mut warnings)?,
        (Command::EngelCheck, Some(p)) => engel_check(p, config, &mut warnings)?,
        (Command::Mohsen, Some(p)) => mohsen(p)?,
    };
    let algebra = input.map(|p| AlgebraSummary { name: p.document.name.clone(), dimension: p.document.dimension, fingerprint: p.document.fingerprint() });
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::default(),
        command: CommandEcho { name: command.name().into(), source: source.map(String::from), config: config.echo() },
        algebra,
        results,
        warnings,
    })
}

fn validate(p: &ParsedAlgebra) -> CliResult<Value> {
    let g = &p.algebra;
    let flag = flag_of(p)?;
    Ok(json!({
        "valid": true,
        "diagnostics": [],
        "dimension": g.dim(),
        "weights": g.weights(),
        "step": g.step(),
        "center_dim": g.center().dim(),
        "flag": one_based(flag.permutation()),
        "document": serde_json::to_value(&p.document).expect("documents serialize"),
    }))
}

fn orbits(p: &ParsedAlgebra, config: &Config) -> CliResult<Value> {
    let g = &p.algebra;
    let flag = flag_of(p)?;
    let verdict = has_flat_orbits(g, &flag)?;
    let center_names: Vec<&str> = flag.center_indices().iter().map(|&i| g.basis_names()[i].as_str()).collect();
    let witness = verdict.witness.as_ref().map(|w| {
        json!({
            "center": strings(w),
            "covector": strings(&extend_center_covector(g, &flag, w)),
            "pfaffian": format_rational(&verdict.pfaffian.eval(w)),
        })
    });
    let mut out = json!({
        "center": matrix_strings(g.center().basis()),
        "center_dim": flag.center_dim(),
        "center_basis": center_names,
        "codimension": g.dim() - flag.center_dim(),
        "flag": one_based(flag.permutation()),
        "pfaffian": {
            "polynomial": verdict.pfaffian.render(g),
            "degree": verdict.pfaffian.poly.total_degree(),
            "odd_codimension": verdict.pfaffian.odd_codimension,
            "identically_zero": verdict.pfaffian.is_identically_zero(),
        },
        "flat_orbits": verdict.flat,
        "reason": reason_code(verdict.reason),
        "message": reason_message(verdict.reason),
        "witness": witness,
    });
    if let Some(xi) = &config.xi {
        let full = full_covector(g, &flag, xi)?;
        let rank = linalg::rank(&kirillov_form(g, &full));
        let z = restrict_to_center(&flag, &full);
        let in_center_dual = extend_center_covector(g, &flag, &z) == full;
        out["at_xi"] = json!({
            "covector": strings(&full),
            "kirillov_rank": rank,
            "flat": is_flat(g, &full),
            "on_gamma_partial": if verdict.flat && in_center_dual { Some(is_on_gamma_partial(g, &flag, &z)) } else { None },
        });
    }
    Ok(out)
}

fn stratify(p: &ParsedAlgebra, config: &Config) -> CliResult<Value> {
    let g = &p.algebra;
    let flag = flag_of(p)?;
    let samples = sample_covectors(g.dim(), config.resolution.max(1), config.seed);
    let summary = enumerate_strata(g, &flag, &samples)?;
    let strata: Vec<Value> = summary
        .strata
        .iter()
        .map(|(profile, idx)| {
            let mut v = profile_json(profile);
            v["count"] = json!(idx.len());
            v["example"] = json!(strings(&samples[idx[0]]));
            v
        })
        .collect();
    let mut out = json!({
        "flag": one_based(flag.permutation()),
        "samples": samples.len(),
        "strata": strata,
        "top": profile_json(&summary.top),
    });
    if let Some(xi) = &config.xi {
        let full = full_covector(g, &flag, xi)?;
        let mut v = profile_json(&jump_indices(g, &flag, &full));
        v["covector"] = json!(strings(&full));
        out["at_xi"] = v;
    }
    Ok(out)
}

fn polarize(p: &ParsedAlgebra, config: &Config) -> CliResult<Value> {
    let g = &p.algebra;
    let flag = flag_of(p)?;
    let xi = match &config.xi {
        Some(xi) => full_covector(g, &flag, xi)?,
        None => match has_flat_orbits(g, &flag)?.witness {
            Some(w) => extend_center_covector(g, &flag, &w),
            None => return Err(CliError::Usage("algebra has no flat orbits; pass --xi".into())),
        },
    };
    let h = vergne_polarization(g, &flag, &xi)?;
    let rank = linalg::rank(&kirillov_form(g, &xi));
    Ok(json!({
        "covector": strings(&xi),
        "flag": one_based(flag.permutation()),
        "basis": matrix_strings(h.basis()),
        "dimension": h.dim(),
        "codimension": g.dim() - h.dim(),
        "kirillov_rank": rank,
        "subalgebra": true,
        "isotropic": true,
    }))
}

fn maslov_demo(input: Option<&ParsedAlgebra>, config: &Config, warnings: &mut Vec<String>) -> CliResult<Value> {
    let line = |a: i64, b: i64| vec![ints(&[a, b])];
    let plane = SymplecticSpace::standard(1);
    let reference = plane.lion_cocycle_check(&line(1, 0), &line(0, 1), &line(1, 1), DEFAULT_PHASE_TOLERANCE)?;
    let (form_kind, omega) = match input {
        None => ("standard", SymplecticSpace::standard(2).omega().clone()),
        Some(p) => {
            let g = &p.algebra;
            let flag = flag_of(p)?;
            let xi = match &config.xi {
                Some(xi) => full_covector(g, &flag, xi)?,
                None => match has_flat_orbits(g, &flag)?.witness {
                    Some(w) => extend_center_covector(g, &flag, &w),
                    None => return Err(CliError::Usage("algebra has no flat orbits; pass --xi".into())),
                },
            };
            let (_, form) = reduced_symplectic_form(g, &xi);
            if form.is_empty() {
                return Err(CliError::Usage("Kirillov form vanishes at this covector".into()));
            }
            ("kirillov", form)
        }
    };
    let space = SymplecticSpace::new(omega.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut triples = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut degenerate = 0;
    for _ in 0..config.resolution {
        let ls: Vec<Vec<Vec<Rational>>> = (0..3).map(|_| random_lagrangian(&omega, &mut rng)).collect();
        let chk = space.lion_cocycle_check(&ls[0], &ls[1], &ls[2], DEFAULT_PHASE_TOLERANCE)?;
        if chk.near_degenerate {
            degenerate += 1;
        } else {
            max_residual = max_residual.max(chk.residual);
        }
        triples.push(json!({
            "lagrangians": ls.iter().map(matrix_strings).collect::<Vec<_>>(),
            "maslov": chk.maslov,
            "etas": chk.etas,
            "residual": chk.residual,
            "near_degenerate": chk.near_degenerate,
        }));
    }
    if degenerate > 0 {
        warnings.push(format!("{degenerate} sampled triple(s) were not pairwise transversal; their residuals are excluded from max_residual"));
    }
    Ok(json!({
        "reference": { "maslov": reference.maslov, "etas": reference.etas, "residual": reference.residual },
        "form": form_kind,
        "omega": matrix_strings(&omega),
        "triples": triples,
        "max_residual": max_residual,
        "degenerate": degenerate,
    }))
}

fn complex_matrix(m: &ComplexMatrix) -> CliResult<CMatrix> {
    let re = rational_matrix(&m.real, "gamma real part")?;
    let n = re.len();
    if re.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage("gamma matrices must be square".into()));
    }
    let im = match &m.imag {
        Some(rows) => rational_matrix(rows, "gamma imaginary part")?,
        None => linalg::zero_matrix(n, n),
    };
    if im.len() != n || im.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage("gamma real and imaginary parts differ in shape".into()));
    }
    let f = nilcalc_core::rational::to_f64;
    Ok(CMatrix::from_fn(n, n, |i, j| num_complex::Complex64::new(f(&re[i][j]), f(&im[i][j]))))
}

fn operator_spec(p: &ParsedAlgebra) -> CliResult<BvEOperatorSpec> {
    let g = &p.algebra;
    match &p.document.operator {
        None => Ok(BvEOperatorSpec::scalar(g, 0.0)?),
        Some(op) => {
            let metric = op.metric.as_ref().map(|m| rational_matrix(m, "metric")).transpose()?;
            let gamma = if op.gamma.is_empty() {
                let r = CMatrix::zeros(1, 1);
                vec![r; g.weight_indices(2).len()]
            } else {
                op.gamma.iter().map(complex_matrix).collect::<CliResult<_>>()?
            };
            Ok(BvEOperatorSpec::new(g, metric, gamma)?)
        }
    }
}

fn helliptic(p: &ParsedAlgebra, config: &Config, warnings: &mut Vec<String>) -> CliResult<Value> {
    let spec = operator_spec(p)?;
    if p.document.operator.is_none() {
        warnings.push("no operator block; using the sub-Laplacian with γ = 0".into());
    }
    let rc = config.rockland();
    rc.validate()?;
    let mut out = match &config.xi {
        Some(xi) => {
            if xi.len() != spec.center_dim() || is_zero_vec(xi) {
                return Err(CliError::Usage(format!("--xi needs {} nonzero coordinates on the weight-2 directions", spec.center_dim())));
            }
            let point = hellip::check_bve_at(&spec, xi, config.tolerance)?;
            json!({ "mode": "point", "verdict": point.verdict, "samples": [point] })
        }
        None => {
            let report = hellip::check_bve_sphere(&spec, &rc)?;
            json!({ "mode": "sphere", "verdict": report.verdict, "evidence": report.evidence, "samples": report.samples })
        }
    };
    let g = &p.algebra;
    let gens = g.weight_indices(1).len();
    let flag = flag_of(p)?;
    if spec.center_dim() == 1 && flag.center_dim() == 1 && gens <= 4 {
        let symbol = spec.symbol()?;
        let mut ladders = Vec::new();
        for s in [1i64, -1] {
            let xi = extend_center_covector(g, &flag, &ints(&[s]));
            let rep = flat_rep(g, &flag, &xi)?.with_metric(spec.metric());
            let ladder = hellip::rockland_bruteforce(&rep, &symbol, &rc)?;
            ladders.push(json!({ "center": s, "ladder": ladder }));
        }
        out["brute_force"] = json!(ladders);
    }
    Ok(out)
}

fn engel_check(p: &ParsedAlgebra, config: &Config, warnings: &mut Vec<String>) -> CliResult<Value> {
    let g = &p.algebra;
    if g.step() != Some(3) || g.dim() != 4 {
        warnings.push(format!("criterion applies to the 4-dimensional step-3 algebra; {} has dimension {} and step {:?}", g.name(), g.dim(), g.step()));
    }
    let gamma = match p.document.operator.as_ref().and_then(|op| op.gamma.first()) {
        Some(m) => complex_matrix(m)?,
        None => return Err(CliError::Usage("engel-check needs an operator block with one gamma matrix".into())),
    };
    let v = hellip::check_engel_gamma(&gamma, config.tolerance)?;
    Ok(json!({ "holds": v.holds, "undetermined": v.undetermined, "eigenvalues": v.eigenvalues }))
}

fn mohsen(p: &ParsedAlgebra) -> CliResult<Value> {
    let m = mohsen_modification(&p.algebra)?;
    let flag = mohsen_flag(&p.algebra)?;
    let verdict = has_flat_orbits(&m, &flag)?;
    let polarization = match &verdict.witness {
        Some(w) => Some(matrix_strings(vergne_polarization(&m, &flag, &extend_center_covector(&m, &flag, w))?.basis())),
        None => None,
    };
    let doc = AlgebraDocument::from_algebra(&m);
    Ok(json!({
        "dimension": m.dim(),
        "step": m.step(),
        "input_step": p.algebra.step(),
        "center_dim": m.center().dim(),
        "flag": one_based(flag.permutation()),
        "flat_orbits": verdict.flat,
        "pfaffian": verdict.pfaffian.render(&m),
        "witness": verdict.witness.as_ref().map(|w| strings(w)),
        "polarization": polarization,
        "fingerprint": doc.fingerprint(),
        "document": serde_json::to_value(&doc).expect("documents serialize"),
    }))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub id: String,
    pub source: String,
    pub command: String,
    #[serde(default)]
    pub xi: Option<String>,
    /// JSON pointer into `results`.
    pub path: String,
    pub expected: Value,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// `literature`, `derived` or `textbook`.
    pub provenance: String,
}

pub const EXPECTATIONS: &str = include_str!("../corpus/expectations.json");

pub fn expectations() -> CliResult<Vec<Expectation>> {
    serde_json::from_str(EXPECTATIONS).map_err(|e| CliError::Parse { message: format!("bundled expectations: {e}"), line: Some(e.line()), column: Some(e.column()) })
}

fn matches(actual: &Value, expected: &Value, tol: Option<f64>) -> bool {
    match (actual.as_f64(), expected.as_f64(), tol) {
        (Some(a), Some(e), Some(t)) => (a - e).abs() <= t,
        _ => actual == expected,
    }
}

fn check_expectation(e: &Expectation) -> Value {
    let outcome = (|| -> CliResult<Value> {
        let command = Command::parse(&e.command).ok_or_else(|| CliError::Usage(format!("unknown command {:?}", e.command)))?;
        if command == Command::CorpusRegression {
            return Err(CliError::Usage("corpus-regression cannot be nested".into()));
        }
        let input = if e.source == "-" { None } else { Some(resolve_source(&e.source)?) };
        let config = Config { xi: e.xi.as_deref().map(parse_xi).transpose()?, ..Config::default() };
        let report = run_command(command, input.as_ref(), Some(&e.source), &config)?;
        Ok(report.results.pointer(&e.path).cloned().unwrap_or(Value::Null))
    })();
    let (actual, pass) = match outcome {
        Ok(v) => {
            let pass = matches(&v, &e.expected, e.tolerance);
            (v, pass)
        }
        Err(err) => (json!({ "error": err.code(), "message": err.to_string() }), false),
    };
    json!({
        "id": e.id,
        "source": e.source,
        "command": e.command,
        "path": e.path,
        "provenance": e.provenance,
        "expected": e.expected,
        "actual": actual,
        "pass": pass,
    })
}

/// Worker count from `NILCALC_THREADS`, else rayon's default.
fn worker_count() -> usize {
    std::env::var("NILCALC_THREADS").ok().and_then(|s| s.trim().parse().ok()).filter(|&n| n > 0).unwrap_or(0)
}

fn corpus_regression() -> CliResult<Value> {
    let entries = expectations()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(worker_count()).build().map_err(|e| CliError::Usage(e.to_string()))?;
    let checked: Vec<Value> = pool.install(|| entries.par_iter().map(check_expectation).collect());
    let failed = checked.iter().filter(|v| v["pass"] != json!(true)).count();
    Ok(json!({ "total": checked.len(), "passed": checked.len() - failed, "failed": failed, "entries": checked }))
}

/// Number of failed expectations in a corpus-regression report.
pub fn regression_failures(report: &AnalysisReport) -> usize {
    report.results.get("failed").and_then(Value::as_u64).unwrap_or(0) as usize
}
