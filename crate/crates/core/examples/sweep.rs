//! A seeds × γ sweep written as CSV, the same path the `sweep` command takes.
//!
//! cargo run --release --example sweep [out.csv]

use sbm_distance::experiment::{self, ExperimentConfig, PerturbationKind, RowOutcome};
use sbm_distance::model::SbmParams;
use sbm_distance::reconstruct::KChoice;

fn main() -> sbm_distance::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "sweep.csv".into());
    let mut config = ExperimentConfig::new(SbmParams::circulant(2, 9.0, 1.0, 3000)?, (1..=4).collect());
    config.ell = Some(3);
    config.k_choice = KChoice::MaxAbs;
    config.perturbation = PerturbationKind::Clique;
    config.gammas = vec![0, 4, 16, 64];

    let rows = experiment::cmd_sweep(&config, out.as_ref())?;
    for row in &rows {
        match row {
            RowOutcome::Record(r) => println!("seed {} gamma {:>3} overlap {:.4}", r.seed, r.gamma, r.overlap),
            RowOutcome::Failed { seed, gamma, error } => println!("seed {seed} gamma {gamma} failed: {error}"),
        }
    }
    println!("wrote {out}");
    Ok(())
}
