//! Multitype Galton–Watson simulation with Poisson offspring and the moment
//! identities of its martingale limits.
//!
//! Convention: a particle of type `j` has `Poisson(M[i][j])` children of type
//! `i`, so `E[Z_{t+1} | Z_t] = M Z_t` and `X_t = μ^{-t} ⟨φ, Z_t⟩` is a
//! martingale whenever `φᵀ M = μ φᵀ`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SpectralProfile;
use crate::rng;

pub const DEFAULT_DEPTH: usize = 8;
pub const DEFAULT_POPULATION_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootLaw {
    /// Always start from one particle of this type.
    Point(usize),
    /// Draw the root type from this distribution.
    Mixture(Vec<f64>),
}

impl RootLaw {
    /// `ν = E[Z_0]`.
    pub fn mean(&self, r: usize) -> Vec<f64> {
        match self {
            RootLaw::Point(j) => (0..r).map(|i| if i == *j { 1.0 } else { 0.0 }).collect(),
            RootLaw::Mixture(p) => p.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GwConfig {
    pub m: DMatrix<f64>,
    pub root_law: RootLaw,
    pub depth: usize,
    pub runs: usize,
    pub seed: u64,
    pub population_cap: u64,
}

impl GwConfig {
    pub fn new(m: DMatrix<f64>, root_law: RootLaw, runs: usize, seed: u64) -> Self {
        GwConfig {
            m,
            root_law,
            depth: DEFAULT_DEPTH,
            runs,
            seed,
            population_cap: DEFAULT_POPULATION_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        let r = self.m.nrows();
        if r == 0 || self.m.ncols() != r {
            return Err(Error::InvalidParams("mean matrix must be square and non-empty".into()));
        }
        if self.m.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidParams("mean matrix must be nonnegative".into()));
        }
        if self.runs == 0 {
            return Err(Error::InvalidParams("runs must be at least 1".into()));
        }
        match &self.root_law {
            RootLaw::Point(j) if *j >= r => Err(Error::InvalidParams(format!("root type {j} out of range"))),
            RootLaw::Mixture(p) if p.len() != r || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 => {
                Err(Error::InvalidParams("root law must be a probability vector of length r".into()))
            }
            _ => Ok(()),
        }
    }
}

/// One simulated tree: the type of its root and `Z_0..Z_depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub root: usize,
    pub z: Vec<Vec<u64>>,
    /// The population passed the cap; later generations are missing.
    pub capped: bool,
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub r: usize,
    pub depth: usize,
    pub trajectories: Vec<Trajectory>,
}

impl Simulation {
    pub fn capped_runs(&self) -> usize {
        self.trajectories.iter().filter(|t| t.capped).count()
    }

    /// Complete runs only.
    pub fn complete(&self) -> impl Iterator<Item = &Trajectory> {
        self.trajectories.iter().filter(|t| !t.capped)
    }
}

fn poisson(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    if mean < 10.0 {
        // inversion
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = (-mean).exp();
        let mut cdf = p;
        while u > cdf {
            k += 1;
            p *= mean / k as f64;
            cdf += p;
            if p < 1e-300 {
                break;
            }
        }
        k
    } else {
        Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
    }
}

/// Runs `cfg.runs` independent trees. Generation `t + 1` is drawn by
/// superposition, `Z_{t+1}(i) = Σ_j Poisson(Z_t(j) M[i][j])`, which has the same
/// law as per-particle sampling. Each run has its own derived seed, so the
/// output does not depend on thread scheduling.
pub fn simulate_population(cfg: &GwConfig) -> Result<Simulation> {
    cfg.validate()?;
    let r = cfg.m.nrows();
    let base = rng::derive_seed(cfg.seed, "gw");
    let trajectories = (0..cfg.runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = rand::SeedableRng::seed_from_u64(rng::derive_indexed(base, run as u64));
            simulate_one(cfg, r, &mut rng)
        })
        .collect();
    Ok(Simulation {
        r,
        depth: cfg.depth,
        trajectories,
    })
}

fn simulate_one(cfg: &GwConfig, r: usize, rng: &mut ChaCha8Rng) -> Trajectory {
    let root = match &cfg.root_law {
        RootLaw::Point(j) => *j,
        RootLaw::Mixture(p) => {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            p.iter()
                .position(|&x| {
                    acc += x;
                    u < acc
                })
                .unwrap_or(r - 1)
        }
    };
    let mut z = Vec::with_capacity(cfg.depth + 1);
    let mut current = vec![0u64; r];
    current[root] = 1;
    z.push(current.clone());
    for _ in 0..cfg.depth {
        let mut next = vec![0u64; r];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, &count) in current.iter().enumerate() {
                *slot += poisson(count as f64 * cfg.m[(i, j)], rng);
            }
        }
        if next.iter().sum::<u64>() > cfg.population_cap {
            return Trajectory { root, z, capped: true };
        }
        z.push(next.clone());
        current = next;
    }
    Trajectory { root, z, capped: false }
}

/// `μ^{-t} ⟨φ, Z_t⟩`.
pub fn martingale_value(z: &[u64], phi: &[f64], mu: f64, t: usize) -> f64 {
    let inner: f64 = z.iter().zip(phi).map(|(&c, &p)| c as f64 * p).sum();
    inner / mu.powi(t as i32)
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var)
}

/// Sample statistics of the martingale at the configured depth.
#[derive(Clone, Debug, Serialize)]
pub struct MartingaleSample {
    /// Terminal values, one per complete run.
    pub values: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    /// `⟨φ, ν⟩`.
    pub expected_mean: f64,
    /// Sample mean and standard error of `X_t` at every depth `t`.
    pub depth_means: Vec<(f64, f64)>,
    /// Mean, variance and count of the terminal value grouped by root type.
    pub per_type: Vec<TypeStats>,
    pub capped_runs: usize,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TypeStats {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
}

/// Simulates `cfg` and summarises `X_t = μ^{-t}⟨φ, Z_t⟩`.
pub fn martingale_limit_check(cfg: &GwConfig, phi: &[f64], mu: f64) -> Result<MartingaleSample> {
    let sim = simulate_population(cfg)?;
    Ok(summarize(&sim, &cfg.root_law, phi, mu))
}

fn summarize(sim: &Simulation, law: &RootLaw, phi: &[f64], mu: f64) -> MartingaleSample {
    let complete: Vec<&Trajectory> = sim.complete().collect();
    let depth_means = (0..=sim.depth)
        .map(|t| {
            let xs: Vec<f64> = complete.iter().map(|tr| martingale_value(&tr.z[t], phi, mu, t)).collect();
            let (m, v) = mean_var(&xs);
            (m, (v / xs.len() as f64).sqrt())
        })
        .collect();
    let values: Vec<f64> = complete
        .iter()
        .map(|tr| martingale_value(&tr.z[sim.depth], phi, mu, sim.depth))
        .collect();
    let (mean, variance) = mean_var(&values);
    let per_type = (0..sim.r)
        .map(|i| {
            let xs: Vec<f64> = complete
                .iter()
                .zip(&values)
                .filter(|(tr, _)| tr.root == i)
                .map(|(_, &x)| x)
                .collect();
            if xs.is_empty() {
                TypeStats {
                    count: 0,
                    mean: f64::NAN,
                    variance: f64::NAN,
                }
            } else {
                let (m, v) = mean_var(&xs);
                TypeStats {
                    count: xs.len(),
                    mean: m,
                    variance: v,
                }
            }
        })
        .collect();
    let nu = law.mean(sim.r);
    MartingaleSample {
        stderr: (variance / values.len() as f64).sqrt(),
        expected_mean: nu.iter().zip(phi).map(|(a, b)| a * b).sum(),
        mean,
        variance,
        values,
        depth_means,
        per_type,
        capped_runs: sim.capped_runs(),
    }
}

/// Largest `|mean(Z_t(i)) − (M^t ν)(i)| / s.e.` at each depth.
pub fn expectation_z_scores(sim: &Simulation, m: &DMatrix<f64>, nu: &[f64]) -> Vec<f64> {
    let complete: Vec<&Trajectory> = sim.complete().collect();
    let mut expected = DVector::from_column_slice(nu);
    let mut out = Vec::with_capacity(sim.depth + 1);
    for t in 0..=sim.depth {
        let mut worst = 0.0f64;
        for i in 0..sim.r {
            let xs: Vec<f64> = complete.iter().map(|tr| tr.z[t][i] as f64).collect();
            let (mean, var) = mean_var(&xs);
            let se = (var / xs.len() as f64).sqrt();
            let diff = (mean - expected[i]).abs();
            let z = if se > 0.0 {
                diff / se
            } else if diff < 1e-12 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(z);
        }
        out.push(worst);
        expected = m * expected;
    }
    out
}

/// Exact second moments of the martingale limits, one entry per root type.
#[derive(Clone, Debug, Serialize)]
pub struct MomentClosedForms {
    /// `Var(X_i)`.
    pub c2: Vec<f64>,
    /// `E[X_i²]`.
    pub m2: Vec<f64>,
    pub var_sum: f64,
    pub sqmean_sum: f64,
}

/// Solves `(I − Mᵀ/μ²) m2 = φ²` and sets `c2 = m2 − φ²`.
pub fn moment_closed_forms(profile: &SpectralProfile, phi: &[f64], mu: f64) -> Result<MomentClosedForms> {
    let mu_sq = mu * mu;
    if !(mu_sq > profile.alpha) {
        return Err(Error::SingularSystem {
            mu_sq,
            alpha: profile.alpha,
        });
    }
    let r = profile.r;
    let a = DMatrix::identity(r, r) - profile.m.transpose() / mu_sq;
    let phi_sq = DVector::from_iterator(r, phi.iter().map(|x| x * x));
    let m2 = a
        .lu()
        .solve(&phi_sq)
        .ok_or(Error::SingularSystem { mu_sq, alpha: profile.alpha })?;
    let c2 = &m2 - &phi_sq;
    Ok(MomentClosedForms {
        var_sum: c2.sum(),
        sqmean_sum: m2.sum(),
        c2: c2.iter().copied().collect(),
        m2: m2.iter().copied().collect(),
    })
}

/// Martingale limits started from each type in turn.
#[derive(Clone, Debug, Serialize)]
pub struct PerTypeLimits {
    pub per_type: Vec<MartingaleSample>,
    /// `Σ_i Var(X_i)` from the depth-`t` values.
    pub var_sum_raw: f64,
    /// `Σ_i Var(X_i)` after accounting for the variance still to come below depth `t`.
    pub var_sum_corrected: f64,
    pub sqmean_sum_raw: f64,
    pub sqmean_sum_corrected: f64,
    /// Per-type corrected variances.
    pub corrected: Vec<f64>,
}

/// Runs one simulation per root type (seeds derived from `seed`).
///
/// The depth-`t` value misses the variance generated below depth `t`. Writing
/// `X_∞ = μ^{-t} Σ_{p ∈ Z_t} X^{(p)}` gives `v = a + B v` with `a_i` the depth-`t`
/// variance and `B_ik = μ^{-2t} E[Z_t(k) | root i]`; `corrected` solves that
/// system with the empirical `a` and `B`.
pub fn per_type_limits(
    m: &DMatrix<f64>,
    phi: &[f64],
    mu: f64,
    depth: usize,
    runs: usize,
    seed: u64,
) -> Result<PerTypeLimits> {
    let r = m.nrows();
    let mut per_type = Vec::with_capacity(r);
    let mut b = DMatrix::zeros(r, r);
    for i in 0..r {
        let mut cfg = GwConfig::new(m.clone(), RootLaw::Point(i), runs, rng::derive_indexed(seed, i as u64));
        cfg.depth = depth;
        let sim = simulate_population(&cfg)?;
        let scale = mu.powi(-2 * depth as i32);
        let complete: Vec<&Trajectory> = sim.complete().collect();
        for k in 0..r {
            let mean_z = complete.iter().map(|tr| tr.z[depth][k] as f64).sum::<f64>() / complete.len() as f64;
            b[(i, k)] = scale * mean_z;
        }
        per_type.push(summarize(&sim, &cfg.root_law, phi, mu));
    }
    let a = DVector::from_iterator(r, per_type.iter().map(|s| s.variance));
    let corrected = (DMatrix::identity(r, r) - b)
        .lu()
        .solve(&a)
        .ok_or(Error::SingularSystem { mu_sq: mu * mu, alpha: f64::NAN })?;
    let var_sum_raw: f64 = a.sum();
    let sq_means: f64 = per_type.iter().map(|s| s.mean * s.mean).sum();
    Ok(PerTypeLimits {
        var_sum_raw,
        var_sum_corrected: corrected.sum(),
        sqmean_sum_raw: var_sum_raw + sq_means,
        sqmean_sum_corrected: corrected.sum() + sq_means,
        corrected: corrected.iter().copied().collect(),
        per_type,
    })
}

/// `j`-th moment (`j = 1`) or `k`-statistic (`j = 2, 3`) of a sample.
fn k_statistic(xs: &[f64], j: usize) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    match j {
        1 => mean,
        2 => xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0),
        3 => n * xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / ((n - 1.0) * (n - 2.0)),
        _ => panic!("cumulant order {j} not supported"),
    }
}

fn raw_moment(xs: &[f64], j: usize) -> f64 {
    xs.iter().map(|x| x.powi(j as i32)).sum::<f64>() / xs.len() as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct CumulantCheck {
    pub j: usize,
    pub depth: usize,
    /// `ĉ_j − (Mᵀ/μ^j) m̂_j`, per root type.
    pub residual: Vec<f64>,
    /// Bootstrap standard error of each residual component.
    pub stderr: Vec<f64>,
    pub max_abs_residual: f64,
    /// Every component within three standard errors of zero.
    pub pass: bool,
}

/// Checks `c_j = (Mᵀ/μ^j) m_j` with cumulants of `X` at depth `t` and moments
/// at depth `t − 1`, where the relation holds exactly. Error bars come from
/// `bootstrap` resamples of the runs.
#[allow(clippy::too_many_arguments)]
pub fn cumulant_relation_check(
    profile: &SpectralProfile,
    phi: &[f64],
    mu: f64,
    j: usize,
    depth: usize,
    runs: usize,
    bootstrap: usize,
    seed: u64,
) -> Result<CumulantCheck> {
    if !(1..=3).contains(&j) {
        return Err(Error::InvalidParams(format!("cumulant order {j} must be 1, 2 or 3")));
    }
    if depth == 0 {
        return Err(Error::InvalidParams("depth must be at least 1".into()));
    }
    if !(mu * mu > profile.alpha) {
        return Err(Error::SingularSystem {
            mu_sq: mu * mu,
            alpha: profile.alpha,
        });
    }
    let r = profile.r;
    // per root type: (values at depth t, values at depth t - 1)
    let mut samples: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(r);
    for i in 0..r {
        let mut cfg = GwConfig::new(
            profile.m.clone(),
            RootLaw::Point(i),
            runs,
            rng::derive_indexed(rng::derive_seed(seed, "cumulant"), i as u64),
        );
        cfg.depth = depth;
        let sim = simulate_population(&cfg)?;
        let pairs: (Vec<f64>, Vec<f64>) = sim
            .complete()
            .map(|tr| {
                (
                    martingale_value(&tr.z[depth], phi, mu, depth),
                    martingale_value(&tr.z[depth - 1], phi, mu, depth - 1),
                )
            })
            .unzip();
        samples.push(pairs);
    }
    let mt = profile.m.transpose() / mu.powi(j as i32);
    let residual_of = |samples: &[(Vec<f64>, Vec<f64>)]| -> Vec<f64> {
        let c = DVector::from_iterator(r, samples.iter().map(|(now, _)| k_statistic(now, j)));
        let m = DVector::from_iterator(r, samples.iter().map(|(_, prev)| raw_moment(prev, j)));
        (c - &mt * m).iter().copied().collect()
    };
    let residual = residual_of(&samples);

    let mut rng = rng::stream(seed, "bootstrap");
    let mut boot: Vec<Vec<f64>> = Vec::with_capacity(bootstrap);
    for _ in 0..bootstrap {
        let resampled: Vec<(Vec<f64>, Vec<f64>)> = samples
            .iter()
            .map(|(now, prev)| {
                let len = now.len();
                (0..len)
                    .map(|_| {
                        let k = rng.random_range(0..len);
                        (now[k], prev[k])
                    })
                    .unzip()
            })
            .collect();
        boot.push(residual_of(&resampled));
    }
    let stderr: Vec<f64> = (0..r)
        .map(|i| {
            let xs: Vec<f64> = boot.iter().map(|b| b[i]).collect();
            mean_var(&xs).1.sqrt()
        })
        .collect();
    let pass = residual.iter().zip(&stderr).all(|(res, se)| res.abs() <= 3.0 * se);
    Ok(CumulantCheck {
        j,
        depth,
        max_abs_residual: residual.iter().fold(0.0, |a, x| a.max(x.abs())),
        residual,
        stderr,
        pass,
    })
}

/// Empirical tail frequency against the second-moment bound
/// `P(|X_i| > √(τ / (η(τ − 1)))) ≤ η`.
#[derive(Clone, Debug, Serialize)]
pub struct MarkovCheck {
    pub eta: f64,
    pub threshold: f64,
    /// Worst per-type tail frequency.
    pub frequency: f64,
    pub pass: bool,
}

pub fn markov_check(per_type: &[MartingaleSample], tau: f64, etas: &[f64]) -> Vec<MarkovCheck> {
    etas.iter()
        .map(|&eta| {
            let threshold = (tau / (eta * (tau - 1.0))).sqrt();
            let frequency = per_type
                .iter()
                .map(|s| s.values.iter().filter(|x| x.abs() > threshold).count() as f64 / s.values.len() as f64)
                .fold(0.0, f64::max);
            MarkovCheck {
                eta,
                threshold,
                frequency,
                pass: frequency <= eta,
            }
        })
        .collect()
}

/// One Monte Carlo estimate against its exact value.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GwRecord {
    pub estimate: f64,
    pub stderr: f64,
    pub closed_form: f64,
    pub residual: f64,
}

impl GwRecord {
    pub fn new(estimate: f64, stderr: f64, closed_form: f64) -> Self {
        GwRecord {
            estimate,
            stderr,
            closed_form,
            residual: estimate - closed_form,
        }
    }

    pub fn relative_error(&self) -> f64 {
        self.residual.abs() / self.closed_form.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(alpha: f64) -> SpectralProfile {
        SpectralProfile::from_block_model(&[vec![alpha]], &[1.0]).unwrap()
    }

    fn two_type() -> SpectralProfile {
        SpectralProfile::from_block_model(&[vec![5.0, 1.0], vec![1.0, 5.0]], &[0.5, 0.5]).unwrap()
    }

    #[test]
    fn depth_zero_is_the_root() {
        let mut cfg = GwConfig::new(two_type().m, RootLaw::Point(1), 50, 3);
        cfg.depth = 0;
        let sim = simulate_population(&cfg).unwrap();
        assert!(sim.trajectories.iter().all(|t| t.z == vec![vec![0, 1]]));
    }

    #[test]
    fn simulation_is_deterministic() {
        let cfg = GwConfig::new(two_type().m, RootLaw::Mixture(vec![0.5, 0.5]), 200, 11);
        let a = simulate_population(&cfg).unwrap();
        let b = simulate_population(&cfg).unwrap();
        assert_eq!(a.trajectories, b.trajectories);
    }

    #[test]
    fn poisson_inversion_moments() {
        let mut rng = rng::stream(1, "poisson");
        for mean in [0.3, 2.5, 7.0, 40.0] {
            let xs: Vec<f64> = (0..40_000).map(|_| poisson(mean, &mut rng) as f64).collect();
            let (m, v) = mean_var(&xs);
            let se = (mean / xs.len() as f64).sqrt();
            assert!((m - mean).abs() < 4.0 * se, "mean {mean}: {m}");
            assert!((v / mean - 1.0).abs() < 0.05, "var {mean}: {v}");
        }
    }

    #[test]
    fn expectation_identity_two_types() {
        let prof = two_type();
        let mut cfg = GwConfig::new(prof.m.clone(), RootLaw::Point(0), 20_000, 5);
        cfg.depth = 5;
        let sim = simulate_population(&cfg).unwrap();
        let z = expectation_z_scores(&sim, &prof.m, &[1.0, 0.0]);
        assert!(z.iter().all(|&x| x < 4.0), "{z:?}");
    }

    #[test]
    fn closed_forms_match_threshold_formulas() {
        let single = single(3.0);
        let c = moment_closed_forms(&single, &[1.0], 3.0).unwrap();
        assert!((c.var_sum - 0.5).abs() < 1e-12);

        let prof = two_type();
        let c = moment_closed_forms(&prof, &prof.phi[1], prof.mu[1]).unwrap();
        assert!((c.var_sum - 3.0).abs() < 1e-9);
        assert!((c.sqmean_sum - 4.0).abs() < 1e-9);

        let three = SpectralProfile::from_block_model(
            &[vec![9.0, 1.5, 1.5], vec![1.5, 9.0, 1.5], vec![1.5, 1.5, 9.0]],
            &[1.0 / 3.0; 3],
        )
        .unwrap();
        let c = moment_closed_forms(&three, &three.phi[1], three.mu[1]).unwrap();
        let tau = three.tau;
        assert!((c.var_sum - 1.0 / (tau - 1.0)).abs() < 1e-9);
        assert!((c.sqmean_sum - tau / (tau - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn closed_forms_reject_subthreshold() {
        let prof = SpectralProfile::from_block_model(&[vec![4.0, 2.0], vec![2.0, 4.0]], &[0.5, 0.5]).unwrap();
        assert!(matches!(
            moment_closed_forms(&prof, &prof.phi[1], prof.mu[1]),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn single_type_cumulant_relation_is_scalar() {
        let prof = single(3.0);
        let check = cumulant_relation_check(&prof, &[1.0], 3.0, 2, 4, 4000, 50, 2).unwrap();
        assert_eq!(check.residual.len(), 1);
        assert!(check.max_abs_residual < 5.0 * check.stderr[0] + 1e-12);
    }

    #[test]
    fn first_cumulant_relation() {
        let prof = two_type();
        let check = cumulant_relation_check(&prof, &prof.phi[1], prof.mu[1], 1, 3, 5000, 50, 9).unwrap();
        assert!(check.pass, "{check:?}");
    }

    #[test]
    fn population_cap_flags_runs() {
        let mut cfg = GwConfig::new(DMatrix::from_element(1, 1, 5.0), RootLaw::Point(0), 20, 0);
        cfg.depth = 6;
        cfg.population_cap = 100;
        let sim = simulate_population(&cfg).unwrap();
        assert!(sim.capped_runs() > 0);
    }

    #[test]
    fn markov_bound_on_degenerate_sample() {
        let s = MartingaleSample {
            values: vec![0.0, 0.0, 10.0, 0.0],
            mean: 0.0,
            variance: 0.0,
            stderr: 0.0,
            expected_mean: 0.0,
            depth_means: vec![],
            per_type: vec![],
            capped_runs: 0,
        };
        let checks = markov_check(&[s], 2.0, &[0.1]);
        assert!((checks[0].threshold - 20f64.sqrt()).abs() < 1e-12);
        assert!((checks[0].frequency - 0.25).abs() < 1e-12);
        assert!(!checks[0].pass);
    }

    #[test]
    fn invalid_configs() {
        let m = DMatrix::from_element(2, 2, 1.0);
        assert!(simulate_population(&GwConfig::new(m.clone(), RootLaw::Point(2), 1, 0)).is_err());
        assert!(simulate_population(&GwConfig::new(m.clone(), RootLaw::Mixture(vec![0.2, 0.2]), 1, 0)).is_err());
        assert!(simulate_population(&GwConfig::new(m, RootLaw::Point(0), 0, 0)).is_err());
    }
}
