//! Batch experiments: configuration, per-run records, the CSV format, and the
//! command implementations behind the `sbm-distance` binary.

use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adversary::{self, RogueMode};
use crate::error::{Error, Result};
use crate::graph::{self, SparseGraph};
use crate::gw::{self, GwRecord};
use crate::io::{self, AssignmentDocument};
use crate::model::{self, SbmParams, SpectralProfile, TypedGraphSample};
use crate::reconstruct::{self, DetectOptions, KChoice, MatrixChoice};
use crate::rng;
use crate::spectral;

pub const CSV_HEADER: &str = "seed,n,r,ell,gamma,overlap,lambda1,lambda2,lambda3,lambda4,qk_bound,rogue_rayleigh,ms_build,ms_eig,ms_label";
pub const CSV_VERSION_LINE: &str = "# sbm-distance records v1; ms_* columns are wall-clock and vary between runs";

fn default_kappa() -> f64 {
    1.0 / 13.0
}

fn default_gw_runs() -> usize {
    100_000
}

fn default_gw_depth() -> usize {
    gw::DEFAULT_DEPTH
}

fn default_epsilon() -> f64 {
    0.2
}

/// Edit applied before detection in each sweep row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbationKind {
    #[default]
    None,
    /// Clique on `γ` uniformly chosen vertices.
    Clique,
    /// The rogue-certificate wiring on `γ` separated vertices.
    Rogue,
}

/// JSON configuration shared by every command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub params: SbmParams,
    /// Fixed `ℓ`; when absent it is derived from `kappa`.
    #[serde(default)]
    pub ell: Option<usize>,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub matrix: MatrixChoice,
    #[serde(default)]
    pub k_choice: KChoice,
    #[serde(default)]
    pub perturbation: PerturbationKind,
    #[serde(default)]
    pub gammas: Vec<usize>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_gw_runs")]
    pub gw_runs: usize,
    #[serde(default = "default_gw_depth")]
    pub gw_depth: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(params: SbmParams, seeds: Vec<u64>) -> Self {
        ExperimentConfig {
            params,
            ell: None,
            kappa: default_kappa(),
            seeds,
            matrix: MatrixChoice::Distance,
            k_choice: KChoice::Explicit,
            perturbation: PerturbationKind::None,
            gammas: Vec::new(),
            epsilon: default_epsilon(),
            gw_runs: default_gw_runs(),
            gw_depth: default_gw_depth(),
            output: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let cfg: ExperimentConfig = io::read_json(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::InvalidKappa(self.kappa));
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<SpectralProfile> {
        model::derive_spectral_profile(&self.params)
    }

    pub fn resolve_ell(&self, profile: &SpectralProfile) -> Result<usize> {
        Ok(model::choose_ell(profile, self.params.n() as f64, self.kappa, self.ell)?.ell)
    }
}

/// One row of the experiment CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub seed: u64,
    pub n: usize,
    pub r: usize,
    pub ell: usize,
    pub gamma: usize,
    pub overlap: f64,
    /// Leading eigenvalues by magnitude (up to four).
    pub lambda: Vec<f64>,
    pub qk_bound: Option<f64>,
    pub rogue_rayleigh: Option<f64>,
    pub ms_build: f64,
    pub ms_eig: f64,
    pub ms_label: f64,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ExperimentRecord {
    pub fn to_csv_row(&self) -> String {
        let mut row = format!(
            "{},{},{},{},{},{}",
            self.seed, self.n, self.r, self.ell, self.gamma, self.overlap
        );
        for k in 0..4 {
            let _ = write!(row, ",{}", opt(self.lambda.get(k).copied()));
        }
        let _ = write!(
            row,
            ",{},{},{:.3},{:.3},{:.3}",
            opt(self.qk_bound),
            opt(self.rogue_rayleigh),
            self.ms_build,
            self.ms_eig,
            self.ms_label
        );
        row
    }

    /// The row without its timing columns, which are the only fields that
    /// differ between identical runs.
    pub fn deterministic_part(&self) -> String {
        let row = self.to_csv_row();
        row.rsplitn(4, ',').last().unwrap_or_default().to_string()
    }
}

/// Runs detection on `sample` after the configured perturbation of strength
/// `gamma`.
pub fn run_row(
    config: &ExperimentConfig,
    profile: &SpectralProfile,
    ell: usize,
    sample: &TypedGraphSample,
    gamma: usize,
) -> Result<ExperimentRecord> {
    let seed = sample.seed;
    let adversary_seed = rng::derive_seed(seed, "adversary");
    let (g, qk, rogue) = match (config.perturbation, gamma) {
        (PerturbationKind::None, _) | (_, 0) => (sample.graph.clone(), None, None),
        (PerturbationKind::Clique, _) => {
            let c = adversary::plant_clique(&sample.graph, gamma, adversary_seed)?;
            let q = adversary::qk_bound(&sample.graph, c.perturbation.affected(), ell, profile.alpha);
            (c.graph, Some(q.bound()), None)
        }
        (PerturbationKind::Rogue, _) => {
            let cert = adversary::build_rogue_certificate(&sample.graph, ell, gamma, config.epsilon, RogueMode::Wired, &[])?;
            let affected = cert.perturbation.as_ref().map(|p| p.affected().to_vec()).unwrap_or_default();
            let q = adversary::qk_bound(&sample.graph, &affected, ell, profile.alpha);
            let g = cert.perturbed_graph.clone().unwrap_or_else(|| sample.graph.clone());
            (g, Some(q.bound()), Some(cert.rayleigh))
        }
    };
    let mut opts = DetectOptions::new(ell, seed);
    opts.matrix = config.matrix;
    opts.k_choice = config.k_choice;
    let det = reconstruct::detect(&g, profile, &opts)?;
    let score = reconstruct::overlap(&sample.sigma, &det.assignment.labels, &profile.pi)?;
    Ok(ExperimentRecord {
        seed,
        n: g.n(),
        r: profile.r,
        ell,
        gamma,
        overlap: score.value,
        lambda: det.pairs.iter().take(4).map(|p| p.value).collect(),
        qk_bound: qk,
        rogue_rayleigh: rogue,
        ms_build: det.timings.build_ms,
        ms_eig: det.timings.eig_ms,
        ms_label: det.timings.label_ms,
    })
}

/// Outcome of one sweep cell.
#[derive(Debug)]
pub enum RowOutcome {
    Record(ExperimentRecord),
    Failed { seed: u64, gamma: usize, error: String },
}

/// Runs every `(seed, γ)` pair, seed-major and `γ`-minor, handing each
/// outcome to `sink` as soon as it is ready. An empty `γ` grid means a single
/// unperturbed row per seed. Failing rows are reported and the sweep goes on.
pub fn run_sweep(config: &ExperimentConfig, mut sink: impl FnMut(&RowOutcome) -> Result<()>) -> Result<Vec<RowOutcome>> {
    config.validate()?;
    let profile = config.profile()?;
    let ell = config.resolve_ell(&profile)?;
    let gammas = if config.gammas.is_empty() { vec![0] } else { config.gammas.clone() };
    let mut out = Vec::with_capacity(config.seeds.len() * gammas.len());
    for &seed in &config.seeds {
        let sample = model::sample_graph(&config.params, seed);
        for &gamma in &gammas {
            let outcome = match run_row(config, &profile, ell, &sample, gamma) {
                Ok(rec) => RowOutcome::Record(rec),
                Err(e) => RowOutcome::Failed {
                    seed,
                    gamma,
                    error: e.to_string(),
                },
            };
            sink(&outcome)?;
            out.push(outcome);
        }
    }
    Ok(out)
}

/// Appends CSV rows to a file, writing the header when the file is new.
pub struct CsvSink {
    writer: BufWriter<File>,
}

impl CsvSink {
    pub fn create(path: &Path) -> Result<Self> {
        let mut writer = BufWriter::new(File::create(path)?);
        writeln!(writer, "{CSV_VERSION_LINE}")?;
        writeln!(writer, "{CSV_HEADER}")?;
        Ok(CsvSink { writer })
    }

    pub fn append(path: &Path) -> Result<Self> {
        let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut writer = BufWriter::new(file);
        if fresh {
            writeln!(writer, "{CSV_VERSION_LINE}")?;
            writeln!(writer, "{CSV_HEADER}")?;
        }
        Ok(CsvSink { writer })
    }

    pub fn write(&mut self, outcome: &RowOutcome) -> Result<()> {
        match outcome {
            RowOutcome::Record(rec) => writeln!(self.writer, "{}", rec.to_csv_row())?,
            RowOutcome::Failed { seed, gamma, error } => {
                writeln!(self.writer, "# failed seed={seed} gamma={gamma}: {error}")?
            }
        }
        self.writer.flush()?;
        Ok(())
    }
}

/// Samples a graph and writes its JSON document.
pub fn cmd_generate(config: &ExperimentConfig, seed: u64, out: &Path) -> Result<TypedGraphSample> {
    let sample = model::sample_graph(&config.params, seed);
    io::write_graph(out, &sample)?;
    Ok(sample)
}

/// Options for [`cmd_detect`] that are not part of the config file.
#[derive(Clone, Debug)]
pub struct DetectArgs {
    pub graph: PathBuf,
    pub perturbation: Option<PathBuf>,
    pub seed: u64,
    pub assignment_out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// Reads a graph (and optionally an edit), detects, writes the assignment
/// JSON and appends one CSV row.
pub fn cmd_detect(config: &ExperimentConfig, args: &DetectArgs) -> Result<ExperimentRecord> {
    let profile = config.profile()?;
    let ell = model::choose_ell(&profile, config.params.n() as f64, config.kappa, config.ell)?.ell;
    let mut sample = io::read_graph(&args.graph)?;
    let mut gamma = 0;
    if let Some(p) = &args.perturbation {
        let p = io::read_perturbation(p)?;
        sample.graph = adversary::apply_perturbation(&sample.graph, &p)?;
        gamma = p.gamma_budget();
    }
    let mut opts = DetectOptions::new(ell, args.seed);
    opts.matrix = config.matrix;
    opts.k_choice = config.k_choice;
    let det = reconstruct::detect(&sample.graph, &profile, &opts)?;
    for w in &det.warnings {
        eprintln!("warning: {w}");
    }
    let score = reconstruct::overlap(&sample.sigma, &det.assignment.labels, &profile.pi)?;
    if let Some(path) = &args.assignment_out {
        io::write_json(
            path,
            &AssignmentDocument {
                labels: det.assignment.labels.clone(),
                overlap: Some(score.value),
                perm: Some(score.best_permutation.clone()),
            },
        )?;
    }
    let record = ExperimentRecord {
        seed: args.seed,
        n: sample.graph.n(),
        r: profile.r,
        ell,
        gamma,
        overlap: score.value,
        lambda: det.pairs.iter().take(4).map(|p| p.value).collect(),
        qk_bound: None,
        rogue_rayleigh: None,
        ms_build: det.timings.build_ms,
        ms_eig: det.timings.eig_ms,
        ms_label: det.timings.label_ms,
    };
    if let Some(csv) = &args.csv {
        CsvSink::append(csv)?.write(&RowOutcome::Record(record.clone()))?;
    }
    Ok(record)
}

/// Builds an edit of strength `gamma` for the graph in `graph_path` and writes
/// it as perturbation JSON.
pub fn cmd_perturb(
    config: &ExperimentConfig,
    graph_path: &Path,
    gamma: usize,
    seed: u64,
    out: &Path,
) -> Result<adversary::Perturbation> {
    let sample = io::read_graph(graph_path)?;
    let p = match config.perturbation {
        PerturbationKind::None | PerturbationKind::Clique => {
            adversary::plant_clique(&sample.graph, gamma, rng::derive_seed(seed, "adversary"))?.perturbation
        }
        PerturbationKind::Rogue => {
            let profile = config.profile()?;
            let ell = config.resolve_ell(&profile)?;
            let k = adversary::greedy_separated_set(&sample.graph, ell, gamma, config.epsilon)?;
            adversary::wiring_perturbation(&sample.graph, &k)?
        }
    };
    io::write_perturbation(out, &p)?;
    Ok(p)
}

/// Runs the sweep and writes the CSV to `out`.
pub fn cmd_sweep(config: &ExperimentConfig, out: &Path) -> Result<Vec<RowOutcome>> {
    let mut sink = CsvSink::create(out)?;
    run_sweep(config, |o| sink.write(o))
}

/// Monte Carlo moments of the second-eigenvalue martingale against their
/// closed forms.
#[derive(Clone, Debug, Serialize)]
pub struct GwReport {
    pub tau: f64,
    pub depth: usize,
    pub runs: usize,
    pub var_sum: GwRecord,
    pub var_sum_raw: GwRecord,
    pub sqmean_sum: GwRecord,
    pub cumulant_j1: gw::CumulantCheck,
    pub cumulant_j2: gw::CumulantCheck,
    pub markov: Vec<gw::MarkovCheck>,
}

pub fn cmd_gw(config: &ExperimentConfig, seed: u64, out: Option<&Path>) -> Result<GwReport> {
    let profile = config.profile()?;
    let (phi, mu) = (&profile.phi[1], profile.mu[1]);
    let closed = gw::moment_closed_forms(&profile, phi, mu)?;
    let depth = config.gw_depth;
    let runs = config.gw_runs;
    let limits = gw::per_type_limits(&profile.m, phi, mu, depth, runs, rng::derive_seed(seed, "limits"))?;
    let se: f64 = limits
        .per_type
        .iter()
        .map(|s| s.variance * s.variance * 2.0 / s.values.len() as f64)
        .sum::<f64>()
        .sqrt();
    let cumulant = |j| gw::cumulant_relation_check(&profile, phi, mu, j, depth, runs / 4, 200, rng::derive_indexed(seed, j as u64));
    let report = GwReport {
        tau: profile.tau,
        depth,
        runs,
        var_sum: GwRecord::new(limits.var_sum_corrected, se, closed.var_sum),
        var_sum_raw: GwRecord::new(limits.var_sum_raw, se, closed.var_sum),
        sqmean_sum: GwRecord::new(limits.sqmean_sum_corrected, se, closed.sqmean_sum),
        cumulant_j1: cumulant(1)?,
        cumulant_j2: cumulant(2)?,
        markov: gw::markov_check(&limits.per_type, profile.tau, &[0.1, 0.05]),
    };
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        std::fs::write(path, text)?;
    }
    Ok(report)
}

/// Verification suites for [`cmd_verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oracles,
    Spectra,
    Bounds,
    Gw,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracles" => Ok(Suite::Oracles),
            "spectra" => Ok(Suite::Spectra),
            "bounds" => Ok(Suite::Bounds),
            "gw" => Ok(Suite::Gw),
            other => Err(Error::Config(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, suite: Suite, name: &str, pass: bool, detail: String) {
        self.checks.push(Check {
            suite,
            name: name.to_string(),
            pass,
            detail,
        });
    }
}

/// Distances by Floyd–Warshall; `None` for unreachable pairs.
pub fn all_pairs_distances(g: &SparseGraph) -> Vec<Vec<Option<usize>>> {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
        for &j in g.neighbors(i) {
            row[j] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(dkj) = d[k][j] {
                    if d[i][j].is_none_or(|x| dik + dkj < x) {
                        d[i][j] = Some(dik + dkj);
                    }
                }
            }
        }
    }
    d
}

/// Self-avoiding walk counts by enumerating every walk of length `ell` and
/// discarding those that repeat a vertex.
pub fn brute_force_path_counts(g: &SparseGraph, ell: usize) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut counts = vec![vec![0u32; n]; n];
    let mut stack: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    while let Some(walk) = stack.pop() {
        if walk.len() == ell + 1 {
            let mut seen = walk.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() == walk.len() {
                counts[walk[0]][walk[ell]] += 1;
            }
            continue;
        }
        for &w in g.neighbors(*walk.last().expect("non-empty walk")) {
            let mut next = walk.clone();
            next.push(w);
            stack.push(next);
        }
    }
    counts
}

pub fn cmd_verify(suites: &[Suite], seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for &suite in suites {
        match suite {
            Suite::Oracles => verify_oracles(&mut report, seed)?,
            Suite::Spectra => verify_spectra(&mut report, seed)?,
            Suite::Bounds => verify_bounds(&mut report, seed)?,
            Suite::Gw => verify_gw(&mut report, seed)?,
        }
    }
    Ok(report)
}

fn verify_oracles(report: &mut VerifyReport, seed: u64) -> Result<()> {
    let params = SbmParams::circulant(2, 5.0, 1.0, 150)?;
    for i in 0..3 {
        let s = model::sample_graph(&params, rng::derive_indexed(seed, i));
        let apsp = all_pairs_distances(&s.graph);
        for ell in 1..=4 {
            let d = graph::distance_matrix(&s.graph, ell);
            let ok = (0..s.graph.n()).all(|a| (0..s.graph.n()).all(|b| (d.get(a, b) == 1) == (apsp[a][b] == Some(ell))));
            report.push(Suite::Oracles, &format!("distance matrix sample {i} ell {ell}"), ok, format!("nnz {}", d.nnz()));
        }
    }
    let small = params.with_n(30)?;
    for i in 0..3 {
        let s = model::sample_graph(&small, rng::derive_indexed(seed, 100 + i));
        for ell in 1..=4 {
            let b = graph::path_expansion_matrix(&s.graph, ell, u32::MAX).matrix;
            let oracle = brute_force_path_counts(&s.graph, ell);
            let ok = (0..30).all(|a| (0..30).all(|c| b.get(a, c) == oracle[a][c]));
            report.push(Suite::Oracles, &format!("path matrix sample {i} ell {ell}"), ok, String::new());
        }
    }
    Ok(())
}

fn verify_spectra(report: &mut VerifyReport, seed: u64) -> Result<()> {
    let params = SbmParams::circulant(2, 5.0, 1.0, 300)?;
    let s = model::sample_graph(&params, seed);
    let d3 = graph::distance_matrix(&s.graph, 3);
    let pairs = spectral::top_eigenpairs(&d3, 4, spectral::DEFAULT_TOL, spectral::DEFAULT_MAX_ITER, seed)?;
    let dense = spectral::dense_eigenpairs(&d3.to_dense());
    let worst = pairs
        .iter()
        .zip(&dense)
        .map(|(p, o)| (p.value - o.value).abs() / o.value.abs())
        .fold(0.0, f64::max);
    report.push(Suite::Spectra, "lanczos against dense", worst <= 1e-6, format!("max relative error {worst:.2e}"));

    let profile = model::derive_spectral_profile(&params)?;
    report.push(
        Suite::Spectra,
        "left eigenvectors of M",
        profile.eigen_residual() <= 1e-8,
        format!("residual {:.2e}", profile.eigen_residual()),
    );
    Ok(())
}

fn verify_bounds(report: &mut VerifyReport, seed: u64) -> Result<()> {
    let tree = SparseGraph::complete_tree(3, 4);
    let r = spectral::delta_radius_check(&tree, 3, 3.0, 8, seed)?;
    report.push(Suite::Bounds, "delta radius on a tree", r.rho == 0.0, format!("rho {}", r.rho));
    let sq = spectral::delta_radius_check(&SparseGraph::cycle(4), 2, 2.0, 8, seed)?;
    report.push(Suite::Bounds, "delta radius on a 4-cycle", (sq.rho - 1.0).abs() < 1e-9, format!("rho {}", sq.rho));

    let params = SbmParams::circulant(2, 5.0, 1.0, 500)?;
    let s = model::sample_graph(&params, seed);
    let r = spectral::delta_radius_check(&s.graph, 3, 3.0, 64, seed)?;
    report.push(
        Suite::Bounds,
        "delta radius against the cycle bound",
        r.rho <= r.cycle_bound + 1e-9 && r.rho <= r.scale_bound,
        format!("rho {:.3}, cycle bound {:.3}, scale bound {:.1}", r.rho, r.cycle_bound, r.scale_bound),
    );

    let c = adversary::plant_clique(&s.graph, 6, seed)?;
    let d = graph::distance_matrix(&s.graph, 3);
    let dt = graph::distance_matrix(&c.graph, 3);
    let rho = adversary::perturbation_radius(&d, &dt, seed)?;
    let q = adversary::qk_bound(&s.graph, c.perturbation.affected(), 3, 3.0);
    report.push(
        Suite::Bounds,
        "clique perturbation against the shell bound",
        rho <= q.bound() + 1e-9,
        format!("rho {rho:.3}, bound {:.3}", q.bound()),
    );
    Ok(())
}

fn verify_gw(report: &mut VerifyReport, seed: u64) -> Result<()> {
    for (name, w) in [
        ("two types", vec![vec![5.0, 1.0], vec![1.0, 5.0]]),
        ("three types", vec![vec![9.0, 1.5, 1.5], vec![1.5, 9.0, 1.5], vec![1.5, 1.5, 9.0]]),
    ] {
        let r = w.len();
        let profile = SpectralProfile::from_block_model(&w, &vec![1.0 / r as f64; r])?;
        let closed = gw::moment_closed_forms(&profile, &profile.phi[1], profile.mu[1])?;
        let tau = profile.tau;
        let ok = (closed.var_sum - 1.0 / (tau - 1.0)).abs() < 1e-9 && (closed.sqmean_sum - tau / (tau - 1.0)).abs() < 1e-9;
        report.push(Suite::Gw, &format!("closed forms, {name}"), ok, format!("var sum {:.6}", closed.var_sum));

        let limits = gw::per_type_limits(&profile.m, &profile.phi[1], profile.mu[1], 8, 20_000, seed)?;
        let rel = (limits.var_sum_corrected - closed.var_sum).abs() / closed.var_sum;
        report.push(
            Suite::Gw,
            &format!("simulated variance sum, {name}"),
            rel <= 0.1,
            format!("estimate {:.4} (raw {:.4}) vs {:.4}", limits.var_sum_corrected, limits.var_sum_raw, closed.var_sum),
        );
    }
    Ok(())
}
