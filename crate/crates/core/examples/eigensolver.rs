//! Leading eigenpairs of D^ℓ by the restarted Krylov solver, checked against a
//! dense decomposition.
//!
//! cargo run --release --example eigensolver

use std::time::Instant;

use sbm_distance::graph;
use sbm_distance::model::{self, SbmParams};
use sbm_distance::spectral;

fn main() -> sbm_distance::Result<()> {
    let params = SbmParams::circulant(2, 5.0, 1.0, 600)?;
    let profile = model::derive_spectral_profile(&params)?;
    let sample = model::sample_graph(&params, 8);
    let d = graph::distance_matrix(&sample.graph, 3);

    let t = Instant::now();
    let pairs = spectral::top_eigenpairs(&d, 4, spectral::DEFAULT_TOL, spectral::DEFAULT_MAX_ITER, 1)?;
    let sparse_ms = t.elapsed().as_secs_f64() * 1e3;

    let t = Instant::now();
    let dense = spectral::dense_eigenpairs(&d.to_dense());
    let dense_ms = t.elapsed().as_secs_f64() * 1e3;

    for (p, q) in pairs.iter().zip(&dense) {
        println!("{:>12.6} {:>12.6}  residual {:.1e}", p.value, q.value, p.residual);
    }
    println!("iterative {sparse_ms:.1} ms, dense {dense_ms:.1} ms");

    let sep = spectral::separation_report(&pairs, &profile, 3, 10.0);
    println!("lambda_k / mu_k^ell = {:?}", sep.ratios);
    println!("bulk |lambda_3| / alpha^(ell/2) = {:?}", sep.bulk_ratio);
    Ok(())
}
