//! Plant cliques of growing size and compare the measured change in D^ℓ with
//! the shell bound, then watch the overlap.
//!
//! cargo run --release --example adversarial_clique

use sbm_distance::adversary;
use sbm_distance::graph;
use sbm_distance::model::{self, SbmParams};
use sbm_distance::reconstruct::{self, DetectOptions, KChoice};

fn main() -> sbm_distance::Result<()> {
    let params = SbmParams::circulant(2, 9.0, 1.0, 4000)?;
    let profile = model::derive_spectral_profile(&params)?;
    let ell = 3;
    let budget = adversary::robustness_budget(&profile, ell, params.n())?;
    println!("gamma_safe {:.2}, gamma_break {:.2}", budget.gamma_safe, budget.gamma_break);

    let sample = model::sample_graph(&params, 5);
    let d = graph::distance_matrix(&sample.graph, ell);
    let mut opts = DetectOptions::new(ell, 5);
    opts.k_choice = KChoice::MaxAbs;

    println!("{:>5} {:>10} {:>10} {:>8}", "gamma", "radius", "bound", "overlap");
    for gamma in [0, 2, 8, 32, 128] {
        let planted = adversary::plant_clique(&sample.graph, gamma, 11)?;
        let dt = graph::distance_matrix(&planted.graph, ell);
        let radius = if gamma == 0 { 0.0 } else { adversary::perturbation_radius(&d, &dt, 3)? };
        let bound = adversary::qk_bound(&sample.graph, planted.perturbation.affected(), ell, profile.alpha).bound();
        let det = reconstruct::detect(&planted.graph, &profile, &opts)?;
        let score = reconstruct::overlap(&sample.sigma, &det.assignment.labels, &profile.pi)?;
        println!("{gamma:>5} {radius:>10.2} {bound:>10.2} {:>8.4}", score.value);
    }
    Ok(())
}
