use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sbm_distance::experiment::{self, DetectArgs, ExperimentConfig, RowOutcome, Suite};
use sbm_distance::reconstruct::MatrixChoice;
use sbm_distance::Result;

#[derive(Parser)]
#[command(name = "sbm-distance", version, about = "Distance-matrix community detection on sparse block models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    matrix: Option<MatrixChoice>,
    #[arg(long)]
    out: PathBuf,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if self.ell.is_some() {
            cfg.ell = self.ell;
        }
        if let Some(k) = self.kappa {
            cfg.kappa = k;
        }
        if let Some(m) = self.matrix {
            cfg.matrix = m;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph and write it as JSON.
    Generate(Common),
    /// Detect communities in a graph file.
    Detect {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        perturbation: Option<PathBuf>,
        /// Append a record row to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write an adversarial edit for a graph file.
    Perturb {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        gamma: usize,
    },
    /// Run every (seed, gamma) pair from the config and write a CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        gamma: Option<Vec<usize>>,
    },
    /// Run the built-in verification suites.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "oracles,spectra,bounds,gw")]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo moments of the branching-process martingale.
    Gw(Common),
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate(c) => {
            let s = experiment::cmd_generate(&c.load()?, c.seed, &c.out)?;
            eprintln!("wrote {} vertices, {} edges", s.graph.n(), s.graph.m());
        }
        Command::Detect { common, graph, perturbation, csv } => {
            let rec = experiment::cmd_detect(
                &common.load()?,
                &DetectArgs {
                    graph,
                    perturbation,
                    seed: common.seed,
                    assignment_out: Some(common.out.clone()),
                    csv,
                },
            )?;
            println!("{}", rec.to_csv_row());
        }
        Command::Perturb { common, graph, gamma } => {
            let p = experiment::cmd_perturb(&common.load()?, &graph, gamma, common.seed, &common.out)?;
            eprintln!("added {}, removed {}, gamma {}", p.added().len(), p.removed().len(), p.gamma_budget());
        }
        Command::Sweep { common, gamma } => {
            let mut cfg = common.load()?;
            if let Some(g) = gamma {
                cfg.gammas = g;
            }
            let rows = experiment::cmd_sweep(&cfg, &common.out)?;
            let failed = rows.iter().filter(|r| matches!(r, RowOutcome::Failed { .. })).count();
            eprintln!("{} rows, {failed} failed", rows.len());
        }
        Command::Verify { suite, seed, out } => {
            let report = experiment::cmd_verify(&suite, seed)?;
            for c in &report.checks {
                println!("[{}] {:?} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail);
            }
            if let Some(path) = out {
                sbm_distance::io::write_json(&path, &report)?;
            }
            return Ok(report.pass());
        }
        Command::Gw(c) => {
            let report = experiment::cmd_gw(&c.load()?, c.seed, Some(&c.out))?;
            println!(
                "variance sum {:.4} vs {:.4}, second moment sum {:.4} vs {:.4}",
                report.var_sum.estimate, report.var_sum.closed_form, report.sqmean_sum.estimate, report.sqmean_sum.closed_form
            );
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
