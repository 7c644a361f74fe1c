//! Build the sparse test vector on a separated vertex set and its ℓ-shell,
//! before and after wiring the set to its neighbourhoods.
//!
//! cargo run --release --example rogue_certificate

use sbm_distance::adversary::{self, RogueMode};
use sbm_distance::graph;
use sbm_distance::model::{self, SbmParams};
use sbm_distance::spectral;

fn main() -> sbm_distance::Result<()> {
    let params = SbmParams::circulant(2, 5.0, 1.0, 10_000)?;
    let profile = model::derive_spectral_profile(&params)?;
    let ell = 2;
    let sample = model::sample_graph(&params, 800);
    let d = graph::distance_matrix(&sample.graph, ell);
    let signal = spectral::top_eigenpairs(&d, profile.r0, spectral::DEFAULT_TOL, spectral::DEFAULT_MAX_ITER, 1)?;

    for gamma in [2, 4, 8] {
        for mode in [RogueMode::Witness, RogueMode::Wired] {
            let cert = adversary::build_rogue_certificate(&sample.graph, ell, gamma, 0.2, mode, &signal)?;
            println!(
                "gamma {gamma} {mode:?}: shell {:>4}  rayleigh {:>7.3}  closed form {:>7.3}  cosines {:?}",
                cert.shell.len(),
                cert.rayleigh,
                cert.closed_form,
                cert.cosines.iter().map(|c| (c * 1e3).round() / 1e3).collect::<Vec<_>>()
            );
        }
    }
    Ok(())
}
