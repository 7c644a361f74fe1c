//! White-box neighbourhood statistics: these use the true labels and are kept
//! away from the detection path.

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{BfsScratch, SparseGraph};
use crate::model::SpectralProfile;
use crate::spectral::EigenPair;

#[derive(Clone, Debug, Serialize)]
pub struct LocalMomentReport {
    pub ell: usize,
    /// `(1/n) Σ_v ⟨φ_k, Y_ℓ(v)⟩² / μ_k^{2ℓ}` for each `k`.
    pub diagonal: Vec<f64>,
    /// `(j, k, (1/n) Σ_v ⟨φ_j, Y_ℓ(v)⟩⟨φ_k, Y_ℓ(v)⟩ / (μ_j^ℓ μ_k^ℓ))` for `j < k`.
    pub cross: Vec<(usize, usize, f64)>,
    /// `|cross| / √(diag_j diag_k)` in the same order as `cross`.
    pub cross_ratio: Vec<f64>,
    /// `|⟨ξ_k, N_k⟩| / (‖ξ_k‖ ‖N_k‖)` with `N_k(v) = ⟨φ_k, Y_ℓ(v)⟩`, for each supplied eigenvector.
    pub alignment: Vec<f64>,
    /// `1 / (r(τ − 1))`, given for uniform priors only.
    pub reference_rho: Option<f64>,
    /// Branching-process value of the diagonal moment at depth `ℓ`, averaged over the prior.
    pub depth_reference: Vec<f64>,
}

/// `N_k(v) = ⟨φ_k, Y_ℓ(v)⟩` for every vertex (rows) and `k` (columns).
pub fn neighbourhood_signal(g: &SparseGraph, sigma: &[usize], profile: &SpectralProfile, ell: usize) -> Vec<Vec<f64>> {
    let n = g.n();
    let r = profile.r;
    (0..n)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, v| {
                let layers = scratch.run(g, &[v], ell);
                let mut counts = vec![0.0; r];
                for &w in &layers[ell] {
                    counts[sigma[w]] += 1.0;
                }
                profile
                    .phi
                    .iter()
                    .map(|phi| phi.iter().zip(&counts).map(|(a, b)| a * b).sum())
                    .collect()
            },
        )
        .collect()
}

/// `E[(μ^{-ℓ}⟨φ, Z_ℓ⟩)²]` for a root drawn from the prior.
fn depth_second_moment(profile: &SpectralProfile, phi: &[f64], mu: f64, ell: usize) -> f64 {
    let r = profile.r;
    let phi_sq: Vec<f64> = phi.iter().map(|x| x * x).collect();
    let mut m2 = phi_sq.clone();
    for _ in 0..ell {
        m2 = (0..r)
            .map(|i| (0..r).map(|k| profile.m[(k, i)] * m2[k]).sum::<f64>() / (mu * mu) + phi_sq[i])
            .collect();
    }
    m2.iter().zip(&profile.pi).map(|(a, p)| a * p).sum()
}

/// Local moments of `N_k`; `eigvecs` are eigenpairs of `D^ℓ` ordered like `φ`.
pub fn local_moment_report(
    g: &SparseGraph,
    sigma: &[usize],
    profile: &SpectralProfile,
    ell: usize,
    eigvecs: &[EigenPair],
) -> LocalMomentReport {
    let n = g.n() as f64;
    let r = profile.r;
    let signal = neighbourhood_signal(g, sigma, profile, ell);
    let scale: Vec<f64> = profile.mu.iter().map(|m| m.powi(ell as i32)).collect();
    let moment = |j: usize, k: usize| signal.iter().map(|row| row[j] * row[k]).sum::<f64>() / (n * scale[j] * scale[k]);
    let diagonal: Vec<f64> = (0..r).map(|k| moment(k, k)).collect();
    let mut cross = Vec::new();
    let mut cross_ratio = Vec::new();
    for j in 0..r {
        for k in j + 1..r {
            let c = moment(j, k);
            cross.push((j, k, c));
            cross_ratio.push(c.abs() / (diagonal[j] * diagonal[k]).sqrt());
        }
    }
    let alignment = eigvecs
        .iter()
        .take(r)
        .enumerate()
        .map(|(k, pair)| {
            let nk: Vec<f64> = signal.iter().map(|row| row[k]).collect();
            let dot: f64 = nk.iter().zip(&pair.vector).map(|(a, b)| a * b).sum();
            let nn = nk.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nx = pair.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nn == 0.0 || nx == 0.0 {
                0.0
            } else {
                dot.abs() / (nn * nx)
            }
        })
        .collect();
    let reference_rho = (profile.is_uniform() && profile.tau > 1.0).then(|| 1.0 / (r as f64 * (profile.tau - 1.0)));
    let depth_reference = (0..r)
        .map(|k| depth_second_moment(profile, &profile.phi[k], profile.mu[k], ell))
        .collect();
    LocalMomentReport {
        ell,
        diagonal,
        cross,
        cross_ratio,
        alignment,
        reference_rho,
        depth_reference,
    }
}

/// Mean and second moment of `xi` inside each block.
pub fn block_moments(xi: &[f64], sigma: &[usize], r: usize) -> Vec<(f64, f64)> {
    let mut sum = vec![0.0; r];
    let mut sq = vec![0.0; r];
    let mut count = vec![0usize; r];
    for (&x, &s) in xi.iter().zip(sigma) {
        sum[s] += x;
        sq[s] += x * x;
        count[s] += 1;
    }
    (0..r)
        .map(|i| {
            let c = count[i].max(1) as f64;
            (sum[i] / c, sq[i] / c)
        })
        .collect()
}
