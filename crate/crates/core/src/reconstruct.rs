//! Two-way labelling from the second eigenvector, the threshold constant `K`,
//! and overlap scoring.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, SparseGraph, SparseSymMatrix};
use crate::model::{canonical_sign, SpectralProfile};
use crate::rng;
use crate::spectral::{self, EigenPair, SeparationReport};

/// `K = r τ √(d τ / (τ − 1))`.
pub fn explicit_k(r: usize, tau: f64, d: usize) -> Result<f64> {
    if !(tau > 1.0) {
        return Err(Error::AtOrBelowThreshold { tau });
    }
    let (r, d) = (r as f64, d as f64);
    Ok(r * tau * (d * tau / (tau - 1.0)).sqrt())
}

/// Rescales `v` so that `‖v‖² = v.len()` and fixes its sign.
pub fn normalize_for_algorithm(v: &[f64]) -> Result<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let scale = (v.len() as f64).sqrt() / norm;
    let mut out: Vec<f64> = v.iter().map(|x| x * scale).collect();
    canonical_sign(&mut out);
    Ok(out)
}

/// Probability of joining `I⁺`: `½ + ξ/(2K)` when `|ξ| ≤ K`, else `½`.
pub fn inclusion_probability(xi: f64, k: f64) -> f64 {
    if xi.abs() <= k {
        0.5 + xi / (2.0 * k)
    } else {
        0.5
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelAssignment {
    /// 0 for `I⁺`, 1 for `I⁻`.
    pub labels: Vec<usize>,
    /// Index (by magnitude) of the eigenpair the labels came from.
    pub source: usize,
    pub k_used: f64,
    pub seed: u64,
}

/// One independent coin per vertex, drawn from a counter-based stream so the
/// result does not depend on evaluation order.
pub fn label_two_way(xi: &[f64], k: f64, seed: u64) -> LabelAssignment {
    let labels = xi
        .iter()
        .enumerate()
        .map(|(v, &x)| {
            if rng::counter_uniform(seed, v as u64) < inclusion_probability(x, k) {
                0
            } else {
                1
            }
        })
        .collect();
    LabelAssignment {
        labels,
        source: 1,
        k_used: k,
        seed,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapScore {
    pub value: f64,
    /// `perm[a]` is the estimated label matched to true block `a`.
    pub best_permutation: Vec<usize>,
}

/// `max_perm (1/n) #{v : σ̂(v) = perm(σ(v))} − max_k π_k`, maximised exactly
/// over all `r!` permutations of the confusion matrix.
pub fn overlap(sigma: &[usize], sigma_hat: &[usize], pi: &[f64]) -> Result<OverlapScore> {
    let r = pi.len();
    if r > 8 {
        return Err(Error::TooManyBlocks(r));
    }
    if sigma.len() != sigma_hat.len() {
        return Err(Error::Incompatible(format!(
            "label vectors of length {} and {}",
            sigma.len(),
            sigma_hat.len()
        )));
    }
    let mut confusion = vec![vec![0usize; r]; r];
    for (v, (&a, &b)) in sigma.iter().zip(sigma_hat).enumerate() {
        for label in [a, b] {
            if label >= r {
                return Err(Error::LabelOutOfRange { vertex: v, label, r });
            }
        }
        confusion[a][b] += 1;
    }
    let (best, perm) = (0..r)
        .permutations(r)
        .map(|perm| {
            let hits: usize = (0..r).map(|a| confusion[a][perm[a]]).sum();
            (hits, perm)
        })
        .max_by_key(|(hits, _)| *hits)
        .expect("at least one permutation");
    let n = sigma.len().max(1) as f64;
    let max_pi = pi.iter().copied().fold(0.0, f64::max);
    Ok(OverlapScore {
        value: best as f64 / n - max_pi,
        best_permutation: perm,
    })
}

/// Which graph matrix the detector diagonalises.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixChoice {
    #[default]
    Distance,
    Path,
}

impl FromStr for MatrixChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distance" => Ok(MatrixChoice::Distance),
            "path" => Ok(MatrixChoice::Path),
            other => Err(Error::Config(format!("unknown matrix kind {other:?}"))),
        }
    }
}

impl fmt::Display for MatrixChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixChoice::Distance => "distance",
            MatrixChoice::Path => "path",
        })
    }
}

/// How the labelling threshold `K` is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KChoice {
    /// [`explicit_k`] from the profile; falls back to `MaxAbs` below threshold.
    #[default]
    Explicit,
    Fixed(f64),
    /// `K = max_v |ξ(v)|`, so the largest entries are labelled deterministically.
    MaxAbs,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetectOptions {
    pub ell: usize,
    pub seed: u64,
    pub matrix: MatrixChoice,
    pub k_choice: KChoice,
    /// Saturation cap for path counts.
    pub path_cap: u32,
    pub tol: f64,
    pub max_iter: usize,
    /// Number of eigenpairs to compute; defaults to `max(4, r0 + 1)`.
    pub eig_count: Option<usize>,
}

impl DetectOptions {
    pub fn new(ell: usize, seed: u64) -> Self {
        DetectOptions {
            ell,
            seed,
            matrix: MatrixChoice::Distance,
            k_choice: KChoice::Explicit,
            path_cap: 64,
            tol: spectral::DEFAULT_TOL,
            max_iter: spectral::DEFAULT_MAX_ITER,
            eig_count: None,
        }
    }
}

/// Wall-clock time per phase, in milliseconds.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct PhaseTimings {
    pub build_ms: f64,
    pub eig_ms: f64,
    pub label_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Detection {
    pub assignment: LabelAssignment,
    pub separation: SeparationReport,
    pub pairs: Vec<EigenPair>,
    /// Normalised vector the labels were drawn from (`‖ξ‖² = n`).
    pub xi: Vec<f64>,
    /// Several eigenvalues tied for second place and the one nearest `μ₂^ℓ` was taken.
    pub tie_broken: bool,
    pub warnings: Vec<String>,
    pub timings: PhaseTimings,
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Builds the chosen matrix for `g`; path counts saturated at `cap` are
/// reported through `warnings`.
pub fn build_matrix(
    g: &SparseGraph,
    ell: usize,
    matrix: MatrixChoice,
    cap: u32,
    warnings: &mut Vec<String>,
) -> SparseSymMatrix {
    match matrix {
        MatrixChoice::Distance => graph::distance_matrix(g, ell),
        MatrixChoice::Path => {
            let b = graph::path_expansion_matrix(g, ell, cap);
            if !b.saturated.is_empty() {
                warnings.push(format!("{} vertex pairs exceeded the path-count cap {cap}", b.saturated.len()));
            }
            b.matrix
        }
    }
}

/// Full pipeline: matrix, leading eigenpairs, second eigenvector, labels.
pub fn detect(g: &SparseGraph, profile: &SpectralProfile, opts: &DetectOptions) -> Result<Detection> {
    let mut warnings = Vec::new();
    if !profile.above_threshold() {
        warnings.push(format!("tau = {} is at or below the detection threshold", profile.tau));
    }

    let t = Instant::now();
    let matrix = build_matrix(g, opts.ell, opts.matrix, opts.path_cap, &mut warnings);
    let build_ms = elapsed_ms(t);

    let t = Instant::now();
    let k = opts.eig_count.unwrap_or((profile.r0 + 1).max(4));
    let pairs = spectral::top_eigenpairs(
        &matrix,
        k,
        opts.tol,
        opts.max_iter,
        rng::derive_seed(opts.seed, "eigen"),
    )?;
    let eig_ms = elapsed_ms(t);
    if pairs.len() < 2 {
        return Err(Error::Incompatible("graph has fewer than two vertices".into()));
    }

    let t = Instant::now();
    let (source, tie_broken) = second_index(&pairs, profile, opts.ell);
    let xi = normalize_for_algorithm(&pairs[source].vector)?;
    let k_used = match opts.k_choice {
        KChoice::Fixed(k) => k,
        KChoice::MaxAbs => max_abs(&xi),
        KChoice::Explicit => match explicit_k(profile.r, profile.tau, profile.d) {
            Ok(k) => k,
            Err(_) => {
                warnings.push("explicit K undefined at this tau; using max |xi| instead".into());
                max_abs(&xi)
            }
        },
    };
    let mut assignment = label_two_way(&xi, k_used, rng::derive_seed(opts.seed, "label"));
    assignment.source = source;
    assignment.seed = opts.seed;
    let label_ms = elapsed_ms(t);

    Ok(Detection {
        assignment,
        separation: spectral::separation_report(&pairs, profile, opts.ell, 10.0),
        pairs,
        xi,
        tie_broken,
        warnings,
        timings: PhaseTimings {
            build_ms,
            eig_ms,
            label_ms,
        },
    })
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Index of the second eigenpair by magnitude. When several pairs share that
/// magnitude the one closest to `μ₂^ℓ` wins.
fn second_index(pairs: &[EigenPair], profile: &SpectralProfile, ell: usize) -> (usize, bool) {
    let target_abs = pairs[1].value.abs();
    let tied: Vec<usize> = (1..pairs.len())
        .filter(|&j| (pairs[j].value.abs() - target_abs).abs() <= 1e-9 * target_abs.max(1.0))
        .collect();
    let opposite_signs = tied.iter().any(|&j| pairs[j].value.signum() != pairs[1].value.signum());
    if !opposite_signs || profile.mu.len() < 2 {
        return (1, false);
    }
    let predicted = profile.mu[1].powi(ell as i32);
    let best = tied
        .iter()
        .copied()
        .min_by(|&a, &b| {
            (pairs[a].value - predicted)
                .abs()
                .total_cmp(&(pairs[b].value - predicted).abs())
        })
        .expect("tie group is non-empty");
    (best, true)
}
