//! Neighbourhood signal ⟨φ_k, Y_ℓ(v)⟩ computed from the true labels, its
//! second moments and its alignment with the eigenvectors of D^ℓ.
//!
//! cargo run --release --example local_moments

use sbm_distance::diagnostics;
use sbm_distance::graph;
use sbm_distance::model::{self, SbmParams};
use sbm_distance::spectral;

fn main() -> sbm_distance::Result<()> {
    let params = SbmParams::circulant(2, 9.0, 1.0, 4000)?;
    let profile = model::derive_spectral_profile(&params)?;
    let ell = 3;
    let sample = model::sample_graph(&params, 2);
    let d = graph::distance_matrix(&sample.graph, ell);
    let pairs = spectral::top_eigenpairs(&d, profile.r, spectral::DEFAULT_TOL, spectral::DEFAULT_MAX_ITER, 2)?;
    let report = diagnostics::local_moment_report(&sample.graph, &sample.sigma, &profile, ell, &pairs);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
