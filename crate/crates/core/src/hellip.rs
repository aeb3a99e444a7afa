//! H-ellipticity verdicts for `−Σ X_j² + Σ γ_l Z_l` on step-2 algebras, the Engel criterion,
//! and a brute-force spectral check on truncated represented symbols.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};
use crate::spectral::{self, CMatrix};
use crate::symbolrep::{self, FlatRepresentation, HermiteBasis, PBWSymbol};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Operator data: metric on the weight-1 span and `γ(ξ) = Σ ξ_l γ_l` over the weight-2 basis.
#[derive(Clone, Debug)]
pub struct BvEOperatorSpec {
    algebra: LieAlgebra,
    metric: Matrix,
    gamma: Vec<CMatrix>,
    rank: usize,
    gens: Vec<usize>,
    central: Vec<usize>,
}

impl BvEOperatorSpec {
    pub fn new(g: &LieAlgebra, metric: Option<Matrix>, gamma: Vec<CMatrix>) -> Result<Self> {
        match g.step() {
            Some(2) => {}
            Some(step) => return Err(Error::UnsupportedStep { step, reason: "operator data is defined for step-2 algebras".into() }),
            None => return Err(Error::NotNilpotent),
        }
        let gens = g.weight_indices(1);
        let central = g.weight_indices(2);
        if gens.len() + central.len() != g.dim() {
            return domain("grading must have weights 1 and 2 only");
        }
        let metric = metric.unwrap_or_else(|| linalg::identity(gens.len()));
        if metric.len() != gens.len() || metric.iter().any(|r| r.len() != gens.len()) || linalg::transpose(&metric) != metric {
            return domain(format!("metric must be a symmetric {0}×{0} matrix", gens.len()));
        }
        if linalg::inertia(&metric).0 != gens.len() {
            return domain("metric is not positive definite");
        }
        if gamma.len() != central.len() {
            return domain(format!("expected {} gamma matrices, got {}", central.len(), gamma.len()));
        }
        let rank = gamma.first().map_or(1, CMatrix::nrows);
        if gamma.iter().any(|m| m.nrows() != rank || m.ncols() != rank) {
            return domain("gamma matrices must be square of equal size");
        }
        Ok(BvEOperatorSpec { algebra: g.clone(), metric, gamma, rank, gens, central })
    }

    /// `γ ≡ c·ξ` on a single central direction with scalar fiber.
    pub fn scalar(g: &LieAlgebra, c: f64) -> Result<Self> {
        let m = g.weight_indices(2).len();
        Self::new(g, None, vec![CMatrix::from_element(1, 1, Complex64::new(c, 0.0)); m])
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn center_dim(&self) -> usize {
        self.central.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn metric(&self) -> &Matrix {
        &self.metric
    }

    /// Kirillov form of `ξ ∈ (g₋₂)*` on the weight-1 span.
    pub fn omega(&self, xi: &[Rational]) -> Matrix {
        self.gens
            .iter()
            .map(|&a| {
                self.gens
                    .iter()
                    .map(|&b| {
                        let br = self.algebra.bracket_basis(a, b);
                        self.central.iter().zip(xi).map(|(&z, x)| &br[z] * x).sum()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn gamma_at(&self, xi: &[f64]) -> CMatrix {
        let mut g = CMatrix::zeros(self.rank, self.rank);
        for (m, &x) in self.gamma.iter().zip(xi) {
            g += m * Complex64::new(x, 0.0);
        }
        g
    }

    /// Symbol `−Σ X_j² + Σ γ_l ⊗ (−iZ_l)`, represented as `H + γ(ξ)`.
    pub fn symbol(&self) -> Result<PBWSymbol> {
        let lap = PBWSymbol::sub_laplacian(&self.algebra, Some(&self.metric))?.tensor_identity(self.rank)?;
        lap.add(&PBWSymbol::central_potential(&self.algebra, &self.gamma)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Elliptic,
    NotElliptic,
    UndeterminedAtTolerance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Degenerate,
    FullRank,
}

#[derive(Clone, Debug, Serialize)]
pub struct LayerRecord {
    pub k: usize,
    pub sigma_min: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `γ_k` has a singular value below tolerance.
    SingularLayer { k: usize, sigma_min: f64 },
    /// A real eigenvalue of `γ(ξ)` at or beyond the threshold `Tr|ω_ξ|/2`.
    RealEigenvalue { eigenvalue: [f64; 2], threshold: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub xi: Vec<f64>,
    pub branch: Branch,
    pub verdict: Verdict,
    /// `Tr|ω_ξ| / 2` relative to the metric.
    pub threshold: f64,
    /// Set when `ω_ξ = 0` exactly, so every real eigenvalue of `γ(ξ)` meets the threshold.
    pub threshold_zero: bool,
    pub cutoff: Option<usize>,
    pub layers: Vec<LayerRecord>,
    pub witness: Option<Witness>,
}

fn normalized_form(spec: &BvEOperatorSpec, omega: &Matrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (spectral::to_real(omega), spectral::to_real(&spec.metric))
}

/// `k* = max(0, ⌈(‖γ‖ − Tr|ω|/2) / (2μ_min)⌉ + 1)`; layers beyond it satisfy `σ_min(γ_k) ≥ 2kμ_min + Tr|ω|/2 − ‖γ‖ > 0`.
pub fn layer_cutoff(gamma_norm: f64, half_trace: f64, mu_min: f64) -> usize {
    let v = ((gamma_norm - half_trace) / (2.0 * mu_min)).ceil() + 1.0;
    v.max(0.0) as usize
}

fn classify(sigma: f64, tol: f64) -> Verdict {
    if sigma < tol {
        Verdict::NotElliptic
    } else if sigma < 10.0 * tol {
        Verdict::UndeterminedAtTolerance
    } else {
        Verdict::Elliptic
    }
}

pub fn check_bve_at(spec: &BvEOperatorSpec, xi: &[Rational], tol: f64) -> Result<PointReport> {
    if xi.len() != spec.center_dim() {
        return domain(format!("ξ needs {} coordinates", spec.center_dim()));
    }
    if rational::is_zero_vec(xi) {
        return domain("ξ must be nonzero");
    }
    let xf: Vec<f64> = xi.iter().map(rational::to_f64).collect();
    let omega = spec.omega(xi);
    let rank = linalg::rank(&omega);
    let gamma = spec.gamma_at(&xf);
    let (om, met) = normalized_form(spec, &omega);
    if rank < spec.gens.len() {
        let threshold_zero = rank == 0;
        let threshold = if threshold_zero {
            0.0
        } else {
            let r = spectral::symmetric_function(&met, |e| 1.0 / e.sqrt());
            (&r * &om * &r).singular_values().sum() / 2.0
        };
        let mut verdict = Verdict::Elliptic;
        let mut witness = None;
        for mu in spectral::complex_eigenvalues(&gamma) {
            let real_like = mu.im.abs() <= tol;
            let clear = if threshold_zero { real_like } else { real_like && mu.re.abs() >= threshold + tol };
            if clear {
                verdict = Verdict::NotElliptic;
                witness = Some(Witness::RealEigenvalue { eigenvalue: [mu.re, mu.im], threshold });
                break;
            }
            if mu.im.abs() <= 10.0 * tol && mu.re.abs() >= threshold - tol {
                verdict = Verdict::UndeterminedAtTolerance;
            }
        }
        return Ok(PointReport { xi: xf, branch: Branch::Degenerate, verdict, threshold, threshold_zero, cutoff: None, layers: Vec::new(), witness });
    }
    let mus = symbolrep::symplectic_eigenvalues(&om, &met)?;
    let half_trace: f64 = mus.iter().sum();
    let cutoff = layer_cutoff(spectral::operator_norm(&gamma), half_trace, mus[0]);
    let mut layers = Vec::with_capacity(cutoff + 1);
    let mut verdict = Verdict::Elliptic;
    let mut witness = None;
    for k in 0..=cutoff {
        let sigma_min = spectral::smallest_singular_value(&symbolrep::gamma_k(&om, &met, &gamma, k)?);
        layers.push(LayerRecord { k, sigma_min });
        match classify(sigma_min, tol) {
            Verdict::NotElliptic if witness.is_none() => {
                verdict = Verdict::NotElliptic;
                witness = Some(Witness::SingularLayer { k, sigma_min });
            }
            Verdict::UndeterminedAtTolerance if verdict == Verdict::Elliptic => verdict = Verdict::UndeterminedAtTolerance,
            _ => {}
        }
    }
    Ok(PointReport { xi: xf, branch: Branch::FullRank, verdict, threshold: half_trace, threshold_zero: false, cutoff: Some(cutoff), layers, witness })
}

#[derive(Clone, Debug, Serialize)]
pub struct RocklandCheckConfig {
    pub truncation: usize,
    pub tolerance: f64,
    pub resolution: usize,
    pub seed: u64,
}

impl Default for RocklandCheckConfig {
    fn default() -> Self {
        RocklandCheckConfig { truncation: 24, tolerance: DEFAULT_TOLERANCE, resolution: 16, seed: 0 }
    }
}

impl RocklandCheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.truncation < 4 {
            return domain("truncation must be at least 4");
        }
        if !(self.tolerance > 0.0) {
            return domain("tolerance must be positive");
        }
        Ok(())
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic points on `S^{m−1}`: `±1` for `m = 1`, equally spaced for `m = 2`,
/// a Fibonacci spiral for `m = 3`, normalized Halton points (offset by `seed`) beyond.
pub fn sphere_points(m: usize, resolution: usize, seed: u64) -> Vec<Vec<f64>> {
    let count = resolution.max(1);
    match m {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * i as f64;
                    vec![r * a.cos(), r * a.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut out = Vec::with_capacity(count);
            let mut i = seed + 1;
            while out.len() < count {
                let v: Vec<f64> = (0..m).map(|j| 2.0 * radical_inverse(i, PRIMES[j % PRIMES.len()]) - 1.0).collect();
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 0.1 && n <= 1.0 {
                    out.push(v.iter().map(|x| x / n).collect());
                }
                i += 1;
            }
            out
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipticityReport {
    pub verdict: Verdict,
    /// `exhaustive` when the sphere of `z*` is the two points `±1`, `sampled` otherwise.
    pub evidence: &'static str,
    pub samples: Vec<PointReport>,
    pub config: RocklandCheckConfig,
}

impl EllipticityReport {
    pub fn witnesses(&self) -> impl Iterator<Item = &PointReport> {
        self.samples.iter().filter(|s| s.witness.is_some())
    }
}

fn aggregate(samples: &[PointReport]) -> Verdict {
    if samples.iter().any(|s| s.verdict == Verdict::NotElliptic) {
        Verdict::NotElliptic
    } else if samples.iter().any(|s| s.verdict == Verdict::UndeterminedAtTolerance) {
        Verdict::UndeterminedAtTolerance
    } else {
        Verdict::Elliptic
    }
}

pub fn check_bve_sphere(spec: &BvEOperatorSpec, config: &RocklandCheckConfig) -> Result<EllipticityReport> {
    config.validate()?;
    let m = spec.center_dim();
    if m == 0 {
        return domain("algebra has no weight-2 directions");
    }
    let points = sphere_points(m, config.resolution, config.seed);
    let samples = points
        .par_iter()
        .map(|p| {
            let xi: Vec<Rational> = p.iter().map(|&x| rational::from_f64(x)).collect::<Result<_>>()?;
            check_bve_at(spec, &xi, config.tolerance)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EllipticityReport { verdict: aggregate(&samples), evidence: if m == 1 { "exhaustive" } else { "sampled" }, samples, config: config.clone() })
}

/// `(k, dim ker γ_k)` for the singular layers `k ≤ k*`.
pub fn fiber_kernel_report(spec: &BvEOperatorSpec, xi: &[Rational], tol: f64) -> Result<Vec<(usize, usize)>> {
    let omega = spec.omega(xi);
    if linalg::rank(&omega) < spec.gens.len() {
        return domain("ω(ξ) is degenerate");
    }
    let xf: Vec<f64> = xi.iter().map(rational::to_f64).collect();
    let gamma = spec.gamma_at(&xf);
    let (om, met) = normalized_form(spec, &omega);
    let mus = symbolrep::symplectic_eigenvalues(&om, &met)?;
    let cutoff = layer_cutoff(spectral::operator_norm(&gamma), mus.iter().sum(), mus[0]);
    let mut out = Vec::new();
    for k in 0..=cutoff {
        let sv = spectral::singular_values(&symbolrep::gamma_k(&om, &met, &gamma, k)?);
        let dim = sv.iter().filter(|&&s| s < tol).count();
        if dim > 0 {
            out.push((k, dim));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EngelVerdict {
    /// Every eigenvalue is imaginary with modulus at least 1/2.
    pub holds: bool,
    pub undetermined: bool,
    pub eigenvalues: Vec<[f64; 2]>,
}

/// `γ − λ` invertible for all `λ` with `Re λ ≠ 0` or `|Im λ| < 1/2`.
pub fn check_engel_gamma(gamma: &CMatrix, tol: f64) -> Result<EngelVerdict> {
    if gamma.nrows() != gamma.ncols() {
        return domain("γ must be square");
    }
    let eig = spectral::complex_eigenvalues(gamma);
    let mut holds = true;
    let mut undetermined = false;
    for mu in &eig {
        if mu.re.abs() > tol || mu.im.abs() < 0.5 - tol {
            holds = false;
        } else if (mu.im.abs() - 0.5).abs() <= tol {
            undetermined = true;
        }
    }
    Ok(EngelVerdict { holds, undetermined: holds && undetermined, eigenvalues: eig.iter().map(|z| [z.re, z.im]).collect() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderTrend {
    Stable,
    Decaying,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderWitness {
    pub truncation: usize,
    pub sigma_min: f64,
    /// Hermite multi-index and fiber carrying the largest weight of the singular vector.
    pub multi_index: Vec<u32>,
    pub fiber: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RocklandLadder {
    pub steps: Vec<(usize, f64)>,
    pub trend: LadderTrend,
    pub witness: Option<LadderWitness>,
}

pub const STABLE_FLOOR: f64 = 1e-3;
pub const DECAY_CEILING: f64 = 1e-6;

/// `σ_min` of the exactly represented block at `N = 4, 8, …, truncation`.
pub fn rockland_bruteforce(rep: &FlatRepresentation, symbol: &PBWSymbol, config: &RocklandCheckConfig) -> Result<RocklandLadder> {
    config.validate()?;
    let ladder: Vec<usize> = (1..=config.truncation / 4).map(|i| 4 * i).collect();
    let mut steps = Vec::new();
    let mut last = None;
    for &n in &ladder {
        let m = symbolrep::represent_symbol(rep, symbol, n).matrix;
        let svd = m.clone().svd(false, true);
        let (imin, &smin) = svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty block");
        steps.push((n, smin));
        last = Some((n, smin, svd.v_t.expect("requested").row(imin).adjoint()));
    }
    let trend = if steps.iter().all(|&(_, s)| s > STABLE_FLOOR) {
        LadderTrend::Stable
    } else if steps.last().is_some_and(|&(_, s)| s < DECAY_CEILING) {
        LadderTrend::Decaying
    } else {
        LadderTrend::Inconclusive
    };
    let witness = match (trend, last) {
        (LadderTrend::Decaying, Some((n, sigma_min, v))) => {
            let r = symbol.rank();
            let idx = v.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).map(|(i, _)| i).unwrap_or(0);
            let basis = HermiteBasis::new(rep.dim(), n);
            Some(LadderWitness { truncation: n, sigma_min, multi_index: basis.multi_index(idx / r).to_vec(), fiber: idx % r })
        }
        _ => None,
    };
    Ok(RocklandLadder { steps, trend, witness })
}
