//! Edge edits within a vertex budget, clique planting, the shell-matrix bound
//! on how far such edits move `D^ℓ`, and the sparse test vector that exhibits
//! a large eigenvalue orthogonal to the community signal.

use std::collections::BTreeSet;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, BfsScratch, SparseGraph, SparseSymMatrix};
use crate::model::SpectralProfile;
use crate::rng;
use crate::spectral::{self, Difference, EigenPair, QcBound};

/// A set of edge additions and removals. Edges are stored as `(u, v)` with
/// `u < v`, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPerturbation", into = "RawPerturbation")]
pub struct Perturbation {
    gamma_budget: usize,
    added: Vec<(usize, usize)>,
    removed: Vec<(usize, usize)>,
    affected: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawPerturbation {
    gamma: usize,
    add: Vec<[usize; 2]>,
    remove: Vec<[usize; 2]>,
}

impl TryFrom<RawPerturbation> for Perturbation {
    type Error = Error;

    fn try_from(raw: RawPerturbation) -> Result<Self> {
        Perturbation::new(
            raw.gamma,
            raw.add.into_iter().map(|[u, v]| (u, v)).collect(),
            raw.remove.into_iter().map(|[u, v]| (u, v)).collect(),
        )
    }
}

impl From<Perturbation> for RawPerturbation {
    fn from(p: Perturbation) -> Self {
        RawPerturbation {
            gamma: p.gamma_budget,
            add: p.added.iter().map(|&(u, v)| [u, v]).collect(),
            remove: p.removed.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

fn normalize_edges(edges: Vec<(usize, usize)>) -> Result<Vec<(usize, usize)>> {
    let mut out: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(u, v)| {
            if u == v {
                Err(Error::InconsistentEdit(format!("self-loop at {u}")))
            } else {
                Ok((u.min(v), u.max(v)))
            }
        })
        .collect::<Result<_>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl Perturbation {
    pub fn new(gamma_budget: usize, added: Vec<(usize, usize)>, removed: Vec<(usize, usize)>) -> Result<Self> {
        let added = normalize_edges(added)?;
        let removed = normalize_edges(removed)?;
        if let Some(e) = added.iter().find(|e| removed.binary_search(e).is_ok()) {
            return Err(Error::InconsistentEdit(format!("edge {e:?} is both added and removed")));
        }
        let affected: BTreeSet<usize> = added
            .iter()
            .chain(&removed)
            .flat_map(|&(u, v)| [u, v])
            .collect();
        Ok(Perturbation {
            gamma_budget,
            added,
            removed,
            affected: affected.into_iter().collect(),
        })
    }

    pub fn empty(gamma_budget: usize) -> Self {
        Perturbation {
            gamma_budget,
            added: Vec::new(),
            removed: Vec::new(),
            affected: Vec::new(),
        }
    }

    pub fn gamma_budget(&self) -> usize {
        self.gamma_budget
    }

    pub fn added(&self) -> &[(usize, usize)] {
        &self.added
    }

    pub fn removed(&self) -> &[(usize, usize)] {
        &self.removed
    }

    /// Endpoints of every edited edge, sorted.
    pub fn affected(&self) -> &[usize] {
        &self.affected
    }

    /// The edit that undoes this one.
    pub fn inverse(&self) -> Perturbation {
        Perturbation {
            gamma_budget: self.gamma_budget,
            added: self.removed.clone(),
            removed: self.added.clone(),
            affected: self.affected.clone(),
        }
    }
}

/// Applies `p` to `g`. Fails when the edit touches more vertices than its
/// budget, removes a missing edge, or adds an existing one.
pub fn apply_perturbation(g: &SparseGraph, p: &Perturbation) -> Result<SparseGraph> {
    if p.affected.len() > p.gamma_budget {
        return Err(Error::BudgetExceeded {
            affected: p.affected.len(),
            budget: p.gamma_budget,
        });
    }
    for &(u, v) in &p.removed {
        if !g.has_edge(u, v) {
            return Err(Error::InconsistentEdit(format!("removed edge ({u}, {v}) is absent")));
        }
    }
    for &(u, v) in &p.added {
        if u >= g.n() || v >= g.n() {
            return Err(Error::InconsistentEdit(format!("added edge ({u}, {v}) is out of range")));
        }
        if g.has_edge(u, v) {
            return Err(Error::InconsistentEdit(format!("added edge ({u}, {v}) already exists")));
        }
    }
    let edges = g
        .edges()
        .into_iter()
        .filter(|e| p.removed.binary_search(e).is_err())
        .chain(p.added.iter().copied());
    SparseGraph::from_edges(g.n(), edges)
}

#[derive(Clone, Debug)]
pub struct PlantedClique {
    pub graph: SparseGraph,
    pub perturbation: Perturbation,
    /// The `gamma` chosen vertices, sorted.
    pub members: Vec<usize>,
}

/// Picks `gamma` vertices uniformly and adds every missing edge among them.
pub fn plant_clique(g: &SparseGraph, gamma: usize, seed: u64) -> Result<PlantedClique> {
    if gamma > g.n() {
        return Err(Error::InvalidParams(format!("gamma = {gamma} exceeds n = {}", g.n())));
    }
    let mut rng = rng::stream(seed, "clique");
    let mut members = index::sample(&mut rng, g.n(), gamma).into_vec();
    members.sort_unstable();
    let mut added = Vec::new();
    for (a, &u) in members.iter().enumerate() {
        for &v in &members[a + 1..] {
            if !g.has_edge(u, v) {
                added.push((u, v));
            }
        }
    }
    let perturbation = Perturbation::new(gamma, added, Vec::new())?;
    let graph = apply_perturbation(g, &perturbation)?;
    Ok(PlantedClique {
        graph,
        perturbation,
        members,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RobustnessBudget {
    /// `τ^ℓ / ln n`.
    pub gamma_safe: f64,
    /// `τ^ℓ`.
    pub gamma_break: f64,
}

pub fn robustness_budget(profile: &SpectralProfile, ell: usize, n: usize) -> Result<RobustnessBudget> {
    if !(profile.tau > 1.0) {
        return Err(Error::AtOrBelowThreshold { tau: profile.tau });
    }
    let gamma_break = profile.tau.powi(ell as i32);
    Ok(RobustnessBudget {
        gamma_safe: gamma_break / (n as f64).ln(),
        gamma_break,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QkReport {
    /// `S_t(𝒦)` for `t = 0..=ℓ`.
    pub shell_sizes: Vec<usize>,
    pub q: QcBound,
    /// `max_t S_t(𝒦) / (|𝒦| ln(n) α^t)` over `t ≥ 1`.
    pub growth_constant: f64,
    /// `𝒦` is so large that `S_0` dominates and the bound says nothing.
    pub degenerate: bool,
}

impl QkReport {
    /// The bound itself: the exact spectral radius of `Q_𝒦`.
    #[allow(clippy::misnamed_getters)]
    pub fn bound(&self) -> f64 {
        self.q.exact
    }
}

/// Shell sizes of `k_set` by multi-source BFS and the `Q_𝒦` radius built from
/// them.
pub fn qk_bound(g: &SparseGraph, k_set: &[usize], ell: usize, alpha: f64) -> QkReport {
    let shell_sizes: Vec<usize> = g.layers(k_set, ell).iter().map(Vec::len).collect();
    let sizes: Vec<f64> = shell_sizes.iter().map(|&s| s as f64).collect();
    let q = spectral::qc_bound(&sizes);
    let k = shell_sizes[0].max(1) as f64;
    let log_n = (g.n().max(2) as f64).ln();
    let growth_constant = sizes
        .iter()
        .enumerate()
        .skip(1)
        .map(|(t, s)| s / (k * log_n * alpha.powi(t as i32)))
        .fold(0.0, f64::max);
    let rest: usize = shell_sizes[1..].iter().sum();
    QkReport {
        degenerate: shell_sizes[0] * 2 >= g.n() || rest == 0,
        shell_sizes,
        q,
        growth_constant,
    }
}

/// `ρ(D̃^ℓ − D^ℓ)` through the iterative solver.
pub fn perturbation_radius(dl: &SparseSymMatrix, dl_tilde: &SparseSymMatrix, seed: u64) -> Result<f64> {
    let diff = Difference { a: dl_tilde, b: dl };
    let pairs = spectral::top_eigenpairs(&diff, 1, spectral::DEFAULT_TOL, spectral::DEFAULT_MAX_ITER, seed)?;
    Ok(pairs[0].value.abs())
}

/// Whether the certificate is evaluated on the graph as is, or after an edit
/// that links every `𝒦` vertex to the neighbourhoods of the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RogueMode {
    Witness,
    Wired,
}

#[derive(Clone, Debug, Serialize)]
pub struct RogueCertificate {
    pub mode: RogueMode,
    pub k_set: Vec<usize>,
    /// Vertices at distance exactly `ℓ` from `𝒦`.
    pub shell: Vec<usize>,
    /// Sparse test vector, `(vertex, value)` sorted by vertex.
    pub vector: Vec<(usize, f64)>,
    pub norm_sq: f64,
    /// `vᵀ D v` for the evaluated graph.
    pub quadratic_form: f64,
    /// `vᵀ D v / ‖v‖²`.
    pub rayleigh: f64,
    /// `2 √(γ S_ℓ(𝒦))`, the value of `vᵀDv` when every `𝒦`–shell pair is at distance `ℓ`.
    pub closed_form: f64,
    /// `⟨v, ξ_k⟩ / (‖v‖ ‖ξ_k‖)` for each supplied signal eigenvector.
    pub cosines: Vec<f64>,
    /// The wiring edit, in `Wired` mode. Its budget is the true number of
    /// touched vertices.
    pub perturbation: Option<Perturbation>,
    /// The wired graph, in `Wired` mode.
    #[serde(skip)]
    pub perturbed_graph: Option<SparseGraph>,
}

/// Up to `gamma` vertices chosen greedily from the `⌈n^{1−ε}⌉` largest
/// `S_ℓ`, each more than `2ℓ` away from the ones already taken.
pub fn greedy_separated_set(g: &SparseGraph, ell: usize, gamma: usize, epsilon: f64) -> Result<Vec<usize>> {
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let n = g.n();
    let growth = graph::shell_growth_report(g, ell, 1.0);
    let pool = ((n as f64).powf(1.0 - epsilon).ceil() as usize).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| growth.top_sizes[b].cmp(&growth.top_sizes[a]).then(a.cmp(&b)));
    order.truncate(pool);

    let mut blocked = vec![false; n];
    let mut scratch = BfsScratch::new(n);
    let mut chosen = Vec::with_capacity(gamma);
    for x in order {
        if chosen.len() == gamma {
            break;
        }
        if blocked[x] {
            continue;
        }
        chosen.push(x);
        for &w in scratch.run(g, &[x], 2 * ell).iter().flatten() {
            blocked[w] = true;
        }
    }
    if chosen.len() < gamma {
        return Err(Error::GreedyExhausted {
            achieved: chosen.len(),
            requested: gamma,
        });
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// The edit that joins each `𝒦` vertex to the neighbours of every other one,
/// so that every `𝒦`–shell pair ends up at distance exactly `ℓ`.
pub fn wiring_perturbation(g: &SparseGraph, k_set: &[usize]) -> Result<Perturbation> {
    let mut added = Vec::new();
    for &a in k_set {
        for &b in k_set {
            if a == b {
                continue;
            }
            for &w in g.neighbors(b) {
                if w != a && !g.has_edge(a, w) {
                    added.push((a, w));
                }
            }
        }
    }
    let probe = Perturbation::new(0, added.clone(), Vec::new())?;
    Perturbation::new(probe.affected().len(), added, Vec::new())
}

/// Builds the sparse test vector on `𝒦` and its `ℓ`-shell and evaluates it
/// against `D^ℓ` (of `g` in `Witness` mode, of the wired graph in `Wired`
/// mode). `signal` holds the eigenvectors the cosines are taken against.
pub fn build_rogue_certificate(
    g: &SparseGraph,
    ell: usize,
    gamma: usize,
    epsilon: f64,
    mode: RogueMode,
    signal: &[EigenPair],
) -> Result<RogueCertificate> {
    if gamma == 0 {
        return Err(Error::InvalidParams("gamma must be at least 1".into()));
    }
    let k_set = greedy_separated_set(g, ell, gamma, epsilon)?;
    let mut shell = g.layers(&k_set, ell).pop().unwrap_or_default();
    shell.sort_unstable();
    if shell.is_empty() {
        return Err(Error::InvalidGraph(format!("the selected set has an empty {ell}-shell")));
    }
    let s = shell.len() as f64;
    let g_k = k_set.len() as f64;
    let mut vector: Vec<(usize, f64)> = k_set
        .iter()
        .map(|&i| (i, g_k.powf(-0.5)))
        .chain(shell.iter().map(|&j| (j, s.powf(-0.5))))
        .collect();
    vector.sort_unstable_by_key(|&(i, _)| i);

    let (perturbation, evaluated) = match mode {
        RogueMode::Witness => (None, None),
        RogueMode::Wired => {
            let p = wiring_perturbation(g, &k_set)?;
            let gt = apply_perturbation(g, &p)?;
            (Some(p), Some(gt))
        }
    };
    let dl = graph::distance_matrix(evaluated.as_ref().unwrap_or(g), ell);
    let mut dense = vec![0.0; g.n()];
    for &(i, x) in &vector {
        dense[i] = x;
    }
    let quadratic_form = dl.quadratic_form(&dense);
    let norm_sq: f64 = vector.iter().map(|(_, x)| x * x).sum();
    let cosines = signal
        .iter()
        .map(|p| {
            let num: f64 = vector.iter().map(|&(i, x)| x * p.vector[i]).sum();
            let den = norm_sq.sqrt() * p.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
            num / den
        })
        .collect();
    Ok(RogueCertificate {
        mode,
        k_set,
        shell,
        vector,
        norm_sq,
        quadratic_form,
        rayleigh: quadratic_form / norm_sq,
        closed_form: 2.0 * (g_k * s).sqrt(),
        cosines,
        perturbation,
        perturbed_graph: evaluated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_graph, SbmParams};
    use nalgebra::DMatrix;

    #[test]
    fn perturbation_accounting() {
        let g = SparseGraph::path(6);
        let p = Perturbation::new(4, vec![(5, 0)], vec![(2, 3)]).unwrap();
        assert_eq!(p.added(), &[(0, 5)]);
        assert_eq!(p.affected(), &[0, 2, 3, 5]);
        let h = apply_perturbation(&g, &p).unwrap();
        assert!(h.has_edge(0, 5) && !h.has_edge(2, 3));
        assert_eq!(apply_perturbation(&h, &p.inverse()).unwrap(), g);

        let one = Perturbation::new(2, vec![], vec![(1, 2)]).unwrap();
        assert_eq!(one.affected(), &[1, 2]);
        assert_eq!(apply_perturbation(&g, &Perturbation::empty(0)).unwrap(), g);
    }

    #[test]
    fn perturbation_errors() {
        let g = SparseGraph::path(6);
        let tight = Perturbation::new(3, vec![(0, 5)], vec![(2, 3)]).unwrap();
        assert!(matches!(
            apply_perturbation(&g, &tight),
            Err(Error::BudgetExceeded { affected: 4, budget: 3 })
        ));
        assert!(Perturbation::new(4, vec![(0, 5)], vec![(5, 0)]).is_err());
        let missing = Perturbation::new(2, vec![], vec![(0, 5)]).unwrap();
        assert!(matches!(apply_perturbation(&g, &missing), Err(Error::InconsistentEdit(_))));
        let present = Perturbation::new(2, vec![(0, 1)], vec![]).unwrap();
        assert!(matches!(apply_perturbation(&g, &present), Err(Error::InconsistentEdit(_))));
    }

    #[test]
    fn clique_plus_removals_union() {
        let g = SparseGraph::from_edges(12, [(6, 7), (8, 9), (0, 1)]).unwrap();
        let mut added = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                if !(i == 0 && j == 1) {
                    added.push((i, j));
                }
            }
        }
        let p = Perturbation::new(9, added, vec![(6, 7), (8, 9)]).unwrap();
        assert_eq!(p.affected(), &[0, 1, 2, 3, 4, 6, 7, 8, 9]);
        assert_eq!(apply_perturbation(&g, &p).unwrap().m(), 10);
    }

    #[test]
    fn json_round_trip() {
        let p = Perturbation::new(3, vec![(2, 1)], vec![]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"gamma":3,"add":[[1,2]],"remove":[]}"#);
        let q: Perturbation = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn clique_planting() {
        let g = SparseGraph::empty(10);
        let one = plant_clique(&g, 1, 0).unwrap();
        assert_eq!(one.graph, g);
        assert!(one.perturbation.affected().is_empty());
        let tri = plant_clique(&g, 3, 0).unwrap();
        assert_eq!(tri.graph.m(), 3);
        assert_eq!(tri.perturbation.affected(), tri.members.as_slice());
        assert!(plant_clique(&g, 11, 0).is_err());
    }

    #[test]
    fn clique_planting_on_sbm_counts_missing_pairs() {
        let params = SbmParams::circulant(2, 5.0, 1.0, 2000).unwrap();
        let g = sample_graph(&params, 2).graph;
        let c = plant_clique(&g, 10, 5).unwrap();
        let existing = c
            .members
            .iter()
            .enumerate()
            .flat_map(|(a, &u)| c.members[a + 1..].iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| g.has_edge(u, v))
            .count();
        assert_eq!(c.perturbation.added().len(), 45 - existing);
        assert_eq!(c.graph.m(), g.m() + 45 - existing);
        assert!(c.perturbation.affected().len() <= 10);
    }

    #[test]
    fn budget_frontiers() {
        let prof = SpectralProfile::from_block_model(&[vec![5.0, 1.0], vec![1.0, 5.0]], &[0.5, 0.5]).unwrap();
        let b = robustness_budget(&prof, 4, 2000).unwrap();
        assert!((b.gamma_break - 256.0 / 81.0).abs() < 1e-12);
        assert!((b.gamma_safe - 256.0 / 81.0 / 2000f64.ln()).abs() < 1e-12);
        assert!((b.gamma_safe - 0.416).abs() < 1e-3);

        let at = SpectralProfile::from_block_model(&[vec![6.0, 2.0], vec![2.0, 6.0]], &[0.5, 0.5]).unwrap();
        assert!((at.tau - 1.0).abs() < 1e-12);
        assert!(robustness_budget(&at, 4, 2000).is_err());

        let two = SpectralProfile::from_block_model(&[vec![7.5, 1.5], vec![1.5, 7.5]], &[0.5, 0.5]).unwrap();
        assert!((two.tau - 2.0).abs() < 1e-12);
        assert!((robustness_budget(&two, 10, 100).unwrap().gamma_break - 1024.0).abs() < 1e-9);
    }

    #[test]
    fn qk_on_path_and_full_set() {
        let g = SparseGraph::path(7);
        let r = qk_bound(&g, &[3], 2, 2.0);
        assert_eq!(r.shell_sizes, vec![1, 2, 2]);
        let q = DMatrix::from_row_slice(3, 3, &[1.0, 2f64.sqrt(), 2f64.sqrt(), 2f64.sqrt(), 2.0, 0.0, 2f64.sqrt(), 0.0, 0.0]);
        assert!((r.bound() - spectral::dense_spectral_radius(&q)).abs() < 1e-12);

        let all: Vec<usize> = (0..7).collect();
        let r = qk_bound(&g, &all, 2, 2.0);
        assert_eq!(r.shell_sizes[0], 7);
        assert!(r.bound() >= 7.0 && r.degenerate);
    }

    #[test]
    fn rogue_on_tree_root() {
        let alpha = 3;
        let tree = SparseGraph::complete_tree(alpha, 1);
        let cert = build_rogue_certificate(&tree, 1, 1, 0.2, RogueMode::Witness, &[]).unwrap();
        assert_eq!(cert.k_set, vec![0]);
        assert_eq!(cert.shell.len(), alpha);
        assert!((cert.norm_sq - 2.0).abs() < 1e-12);
        assert!((cert.rayleigh - (alpha as f64).sqrt()).abs() < 1e-12);
        assert!((cert.closed_form - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn wired_certificate_reaches_closed_form() {
        let params = SbmParams::circulant(2, 5.0, 1.0, 3000).unwrap();
        let g = sample_graph(&params, 8).graph;
        for ell in 1..=3 {
            let cert = build_rogue_certificate(&g, ell, 3, 0.2, RogueMode::Wired, &[]).unwrap();
            assert_eq!(cert.vector.len(), 3 + cert.shell.len());
            assert!((cert.norm_sq - 2.0).abs() < 1e-10);
            assert!(cert.quadratic_form >= cert.closed_form - 1e-9, "ell {ell}");
            let p = cert.perturbation.as_ref().unwrap();
            assert_eq!(p.gamma_budget(), p.affected().len());
            let gt = cert.perturbed_graph.as_ref().unwrap();
            let scratch_dist = |a: usize, b: usize| {
                gt.layers(&[a], ell).iter().position(|l| l.contains(&b))
            };
            for &k in &cert.k_set {
                for &w in cert.shell.iter().take(20) {
                    assert_eq!(scratch_dist(k, w), Some(ell));
                }
            }
        }
    }

    #[test]
    fn greedy_separation_and_epsilon_checks() {
        let g = SparseGraph::path(40);
        let k = greedy_separated_set(&g, 2, 3, 0.2).unwrap();
        for (i, &a) in k.iter().enumerate() {
            for &b in &k[i + 1..] {
                assert!(b - a > 4);
            }
        }
        assert!(matches!(greedy_separated_set(&g, 2, 3, 0.3), Err(Error::InvalidEpsilon(_))));
        assert!(matches!(
            greedy_separated_set(&SparseGraph::complete(5), 1, 2, 0.2),
            Err(Error::GreedyExhausted { achieved: 1, requested: 2 })
        ));
    }

    #[test]
    fn perturbation_radius_matches_dense() {
        let params = SbmParams::circulant(2, 5.0, 1.0, 300).unwrap();
        let g = sample_graph(&params, 4).graph;
        let c = plant_clique(&g, 6, 1).unwrap();
        let d = graph::distance_matrix(&g, 2);
        let dt = graph::distance_matrix(&c.graph, 2);
        let rho = perturbation_radius(&d, &dt, 0).unwrap();
        let dense = spectral::dense_spectral_radius(&(dt.to_dense() - d.to_dense()));
        assert!((rho - dense).abs() < 1e-6 * dense.max(1.0));
        let q = qk_bound(&g, c.perturbation.affected(), 2, 3.0);
        assert!(rho <= q.bound() + 1e-9);
    }
}
