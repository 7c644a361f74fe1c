//! Block-model parameters, the mean progeny matrix and its spectral constants,
//! and graph sampling.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::rng;

const MULTIPLICITY_TOL: f64 = 1e-9;
const REGULARITY_TOL: f64 = 1e-9;

/// Parameters of a sparse block model: `r` blocks, connectivity `w` (edge
/// probability between blocks `a` and `b` is `w[a][b] / n`), prior `pi` and
/// vertex count `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SbmParams {
    r: usize,
    w: Vec<Vec<f64>>,
    pi: Vec<f64>,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    w: Vec<Vec<f64>>,
    pi: Vec<f64>,
    n: usize,
}

impl TryFrom<RawParams> for SbmParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        SbmParams::new(raw.w, raw.pi, raw.n)
    }
}

impl From<SbmParams> for RawParams {
    fn from(p: SbmParams) -> Self {
        RawParams {
            w: p.w,
            pi: p.pi,
            n: p.n,
        }
    }
}

impl SbmParams {
    pub fn new(w: Vec<Vec<f64>>, pi: Vec<f64>, n: usize) -> Result<Self> {
        validate_block_model(&w, &pi)?;
        let r = pi.len();
        if r < 2 {
            return Err(Error::InvalidParams(format!("need r >= 2 blocks, got {r}")));
        }
        if n < r {
            return Err(Error::InvalidParams(format!("n = {n} is smaller than r = {r}")));
        }
        Ok(SbmParams { r, w, pi, n })
    }

    /// Uniform prior over `w.len()` blocks.
    pub fn uniform(w: Vec<Vec<f64>>, n: usize) -> Result<Self> {
        let r = w.len();
        Self::new(w, vec![1.0 / r as f64; r], n)
    }

    /// `r` blocks with `a` on the diagonal and `b` elsewhere, uniform prior.
    pub fn circulant(r: usize, a: f64, b: f64, n: usize) -> Result<Self> {
        let w = (0..r)
            .map(|i| (0..r).map(|j| if i == j { a } else { b }).collect())
            .collect();
        Self::uniform(w, n)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> &[Vec<f64>] {
        &self.w
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    /// Same block structure at a different size.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.w.clone(), self.pi.clone(), n)
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.r as f64;
        self.pi.iter().all(|p| (p - u).abs() < 1e-12)
    }
}

fn validate_block_model(w: &[Vec<f64>], pi: &[f64]) -> Result<()> {
    let r = pi.len();
    if r == 0 {
        return Err(Error::InvalidParams("empty prior".into()));
    }
    if w.len() != r || w.iter().any(|row| row.len() != r) {
        return Err(Error::InvalidParams(format!("W must be {r}x{r}")));
    }
    for a in 0..r {
        for b in 0..r {
            let x = w[a][b];
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidParams(format!("W[{a}][{b}] = {x} is not a nonnegative real")));
            }
            if (x - w[b][a]).abs() > 1e-12 * x.abs().max(1.0) {
                return Err(Error::InvalidParams(format!("W is not symmetric at ({a}, {b})")));
            }
        }
    }
    if pi.iter().any(|&p| !p.is_finite() || p < 0.0) {
        return Err(Error::InvalidParams("prior has a negative entry".into()));
    }
    let total: f64 = pi.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParams(format!("prior sums to {total}, not 1")));
    }
    Ok(())
}

/// Spectral constants of a block model.
#[derive(Clone, Debug)]
pub struct SpectralProfile {
    pub r: usize,
    pub pi: Vec<f64>,
    /// Mean progeny matrix `M = ΠW`.
    pub m: DMatrix<f64>,
    /// `S = Π^{1/2} W Π^{1/2}`, similar to `M`.
    pub s: DMatrix<f64>,
    /// Common column sum of `M` (equals `mu[0]` under degree regularity).
    pub alpha: f64,
    /// Eigenvalues of `M`, by absolute value descending (ties: larger first).
    pub mu: Vec<f64>,
    /// Left eigenvectors `φ_kᵀ M = μ_k φ_kᵀ`, each of unit Euclidean norm.
    pub phi: Vec<Vec<f64>>,
    /// `μ₂² / μ₁`; zero when `r = 1`.
    pub tau: f64,
    /// Number of `k` with `μ_k² > μ₁`.
    pub r0: usize,
    /// Multiplicity of `|μ₂|`; zero when `r = 1`.
    pub d: usize,
    pub degree_regular: bool,
    pub column_sums: Vec<f64>,
    /// Non-fatal conditions (irregular degrees, subcritical, non-uniform prior).
    pub warnings: Vec<String>,
}

impl SpectralProfile {
    /// Profile of any block model, including the single-type case.
    pub fn from_block_model(w: &[Vec<f64>], pi: &[f64]) -> Result<Self> {
        validate_block_model(w, pi)?;
        let r = pi.len();
        let wm = DMatrix::from_fn(r, r, |i, j| w[i][j]);
        let m = DMatrix::from_fn(r, r, |i, j| pi[i] * wm[(i, j)]);
        let s = DMatrix::from_fn(r, r, |i, j| pi[i].sqrt() * wm[(i, j)] * pi[j].sqrt());

        let max_power = (r - 1) * (r - 1) + 1;
        if !positive_regular(&m, max_power) {
            return Err(Error::NotPositiveRegular { max_power });
        }

        let eig = SymmetricEigen::new(s.clone());
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (eig.eigenvalues[a], eig.eigenvalues[b]);
            y.abs().total_cmp(&x.abs()).then(y.total_cmp(&x))
        });
        let mu: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let phi: Vec<Vec<f64>> = order
            .iter()
            .map(|&k| {
                let u = eig.eigenvectors.column(k);
                let mut v: Vec<f64> = (0..r).map(|i| u[i] / pi[i].sqrt()).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter_mut().for_each(|x| *x /= norm);
                canonical_sign(&mut v);
                v
            })
            .collect();

        let column_sums: Vec<f64> = (0..r).map(|j| m.column(j).sum()).collect();
        let degree_regular = column_sums
            .iter()
            .all(|c| (c - column_sums[0]).abs() <= REGULARITY_TOL);
        let alpha = if degree_regular { column_sums[0] } else { mu[0] };

        let (tau, d) = if r >= 2 {
            let target = mu[1].abs();
            let tol = MULTIPLICITY_TOL * target.max(1.0);
            let d = mu.iter().filter(|x| (x.abs() - target).abs() <= tol).count();
            (mu[1] * mu[1] / mu[0], d)
        } else {
            (0.0, 0)
        };
        let r0 = mu.iter().filter(|x| *x * *x > mu[0]).count();

        let mut warnings = Vec::new();
        if !degree_regular {
            warnings.push(format!("not degree regular: column sums {column_sums:?}"));
        }
        if mu[0] <= 1.0 {
            warnings.push(format!("subcritical: mu_1 = {} <= 1", mu[0]));
        }
        let u = 1.0 / r as f64;
        if pi.iter().any(|p| (p - u).abs() > 1e-12) {
            warnings.push("non-uniform prior: explicit K is computed outside its stated regime".into());
        }

        Ok(SpectralProfile {
            r,
            pi: pi.to_vec(),
            m,
            s,
            alpha,
            mu,
            phi,
            tau,
            r0,
            d,
            degree_regular,
            column_sums,
            warnings,
        })
    }

    pub fn above_threshold(&self) -> bool {
        self.tau > 1.0
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.r as f64;
        self.pi.iter().all(|p| (p - u).abs() < 1e-12)
    }

    /// `max_k ‖φ_kᵀ M − μ_k φ_kᵀ‖∞`.
    pub fn eigen_residual(&self) -> f64 {
        self.phi
            .iter()
            .zip(&self.mu)
            .map(|(phi, &mu)| {
                let p = DVector::from_column_slice(phi);
                let left = self.m.tr_mul(&p);
                (left - p * mu).amax()
            })
            .fold(0.0, f64::max)
    }
}

fn positive_regular(m: &DMatrix<f64>, max_power: usize) -> bool {
    let mut p = m.clone();
    for _ in 0..max_power {
        if p.iter().all(|&x| x > 0.0) {
            return true;
        }
        p = &p * m;
    }
    false
}

/// Makes the first non-negligible coordinate positive.
pub fn canonical_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * max) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn derive_spectral_profile(params: &SbmParams) -> Result<SpectralProfile> {
    SpectralProfile::from_block_model(&params.w, &params.pi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeRegularity {
    pub regular: bool,
    pub column_sums: Vec<f64>,
    /// `Σ_i M_ij − α` per column.
    pub residuals: Vec<f64>,
}

pub fn check_degree_regularity(profile: &SpectralProfile) -> DegreeRegularity {
    let residuals: Vec<f64> = profile.column_sums.iter().map(|c| c - profile.alpha).collect();
    DegreeRegularity {
        regular: residuals.iter().all(|x| x.abs() <= REGULARITY_TOL),
        column_sums: profile.column_sums.clone(),
        residuals,
    }
}

/// A sampled graph together with its hidden labels.
#[derive(Clone, Debug, PartialEq)]
pub struct TypedGraphSample {
    pub graph: SparseGraph,
    pub sigma: Vec<usize>,
    pub r: usize,
    pub seed: u64,
}

/// Samples labels i.i.d. from `pi`, then every pair independently with
/// probability `min(W/n, 1)`. Pairs are visited block pair by block pair with
/// geometric skips, so the cost is proportional to the number of edges.
pub fn sample_graph(params: &SbmParams, seed: u64) -> TypedGraphSample {
    let n = params.n;
    let r = params.r;
    let mut types_rng = rng::stream(seed, "types");
    let mut cumulative = Vec::with_capacity(r);
    let mut acc = 0.0;
    for &p in &params.pi {
        acc += p;
        cumulative.push(acc);
    }
    let sigma: Vec<usize> = (0..n)
        .map(|_| {
            let u: f64 = types_rng.random();
            cumulative.iter().position(|&c| u < c).unwrap_or(r - 1)
        })
        .collect();

    let mut members = vec![Vec::new(); r];
    for (v, &s) in sigma.iter().enumerate() {
        members[s].push(v);
    }

    let mut edge_rng = rng::stream(seed, "edges");
    let mut edges = Vec::new();
    for a in 0..r {
        for b in a..r {
            let p = (params.w[a][b] / n as f64).min(1.0);
            let (la, lb) = (&members[a], &members[b]);
            let total = if a == b {
                la.len() * la.len().saturating_sub(1) / 2
            } else {
                la.len() * lb.len()
            };
            for k in skip_indices(total, p, &mut edge_rng) {
                if a == b {
                    let (i, j) = triangular_pair(k);
                    edges.push((la[i], la[j]));
                } else {
                    edges.push((la[k / lb.len()], lb[k % lb.len()]));
                }
            }
        }
    }
    let graph = SparseGraph::from_edges(n, edges).expect("sampled edges are valid");
    TypedGraphSample {
        graph,
        sigma,
        r,
        seed,
    }
}

/// Indices in `0..total` kept independently with probability `p`.
fn skip_indices(total: usize, p: f64, rng: &mut impl Rng) -> Vec<usize> {
    if p <= 0.0 || total == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..total).collect();
    }
    let log_q = (-p).ln_1p();
    let mut out = Vec::new();
    let mut k: f64 = -1.0;
    loop {
        let u: f64 = rng.random();
        k += 1.0 + ((1.0 - u).ln() / log_q).floor();
        if k >= total as f64 {
            return out;
        }
        out.push(k as usize);
    }
}

/// Position `k` in the enumeration `(0,1), (0,2), (1,2), (0,3), ...` of pairs `i < j`.
fn triangular_pair(k: usize) -> (usize, usize) {
    let mut j = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0).floor() as usize;
    while j * (j - 1) / 2 > k {
        j -= 1;
    }
    while (j + 1) * j / 2 <= k {
        j += 1;
    }
    (k - j * (j - 1) / 2, j)
}

/// Outcome of [`choose_ell`].
#[derive(Clone, Debug, PartialEq)]
pub struct EllChoice {
    pub ell: usize,
    /// `κ ln n / ln α` before flooring.
    pub raw: f64,
    pub overridden: bool,
    /// The formula gave 0 and was raised to 1.
    pub clamped: bool,
    /// `κ < 1/12`, the regime the guarantees are stated for.
    pub kappa_in_regime: bool,
}

/// `ℓ = max(1, ⌊κ ln n / ln α⌋)` unless overridden. `n` is real so that
/// astronomically large sizes can be explored.
pub fn choose_ell(
    profile: &SpectralProfile,
    n: f64,
    kappa: f64,
    override_ell: Option<usize>,
) -> Result<EllChoice> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidKappa(kappa));
    }
    if profile.alpha <= 1.0 {
        return Err(Error::SubCritical {
            alpha: profile.alpha,
        });
    }
    let raw = kappa * n.ln() / profile.alpha.ln();
    let formula = (raw + 1e-9).floor().max(0.0) as usize;
    Ok(EllChoice {
        ell: override_ell.unwrap_or(formula.max(1)),
        raw,
        overridden: override_ell.is_some(),
        clamped: override_ell.is_none() && formula == 0,
        kappa_in_regime: kappa < 1.0 / 12.0,
    })
}
