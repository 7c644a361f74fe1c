//! Derive the spectral profile of a block model and sample one graph from it.
//!
//! cargo run --release --example sample_and_profile

use sbm_distance::model::{self, SbmParams};

fn main() -> sbm_distance::Result<()> {
    let params = SbmParams::new(
        vec![vec![9.0, 1.5, 1.5], vec![1.5, 9.0, 1.5], vec![1.5, 1.5, 9.0]],
        vec![1.0 / 3.0; 3],
        3000,
    )?;
    let profile = model::derive_spectral_profile(&params)?;
    println!("mu      = {:?}", profile.mu);
    println!("alpha   = {:.4}", profile.alpha);
    println!("tau     = {:.4} (above threshold: {})", profile.tau, profile.above_threshold());
    println!("r0      = {}, d = {}", profile.r0, profile.d);
    for w in &profile.warnings {
        println!("warning: {w}");
    }

    let ell = model::choose_ell(&profile, params.n() as f64, 1.0 / 13.0, None)?;
    println!("ell     = {} (raw {:.3}, clamped {})", ell.ell, ell.raw, ell.clamped);

    let sample = model::sample_graph(&params, 42);
    let mean_degree = 2.0 * sample.graph.m() as f64 / sample.graph.n() as f64;
    println!("sampled {} vertices, {} edges, mean degree {mean_degree:.3}", sample.graph.n(), sample.graph.m());
    let mut sizes = vec![0; profile.r];
    for &s in &sample.sigma {
        sizes[s] += 1;
    }
    println!("block sizes {sizes:?}");
    Ok(())
}
