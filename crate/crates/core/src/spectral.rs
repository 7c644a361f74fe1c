//! Matrix-free symmetric eigensolver, separation diagnostics and the small
//! shell-size matrices that bound perturbation norms.
//!
//! [`top_eigenpairs`] runs a thick-restart Lanczos iteration with full
//! reorthogonalisation. Converged pairs are locked and later passes work in
//! their orthogonal complement; a final pass from a fresh random start looks
//! for any eigenvalue that a single Krylov space missed (repeated
//! eigenvalues).

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, SparseGraph, SparseSymMatrix};
use crate::model::{canonical_sign, SpectralProfile};
use crate::rng;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 5000;

/// A symmetric linear operator known only through its action.
pub trait SymOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl SymOperator for SparseSymMatrix {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        SparseSymMatrix::apply(self, x, y)
    }
}

impl SymOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// `x ↦ (A − B) x` without forming the difference.
pub struct Difference<'a> {
    pub a: &'a SparseSymMatrix,
    pub b: &'a SparseSymMatrix,
}

impl SymOperator for Difference<'_> {
    fn dim(&self) -> usize {
        self.a.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut tmp = vec![0.0; x.len()];
        self.a.apply(x, y);
        self.b.apply(x, &mut tmp);
        y.iter_mut().zip(&tmp).for_each(|(a, b)| *a -= b);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenPair {
    pub value: f64,
    /// Unit vector, first non-negligible coordinate positive.
    pub vector: Vec<f64>,
    /// `‖A x − λ x‖`.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn by_magnitude(a: f64, b: f64) -> std::cmp::Ordering {
    b.abs().total_cmp(&a.abs()).then(b.total_cmp(&a))
}

/// Two rounds of Gram–Schmidt against every vector in `bases`.
fn orthogonalize(v: &mut [f64], bases: &[&[Vec<f64>]]) {
    for _ in 0..2 {
        for basis in bases {
            for q in basis.iter() {
                let c = dot(q, v);
                axpy(-c, q, v);
            }
        }
    }
}

struct Lanczos<'a, O: SymOperator + ?Sized> {
    op: &'a O,
    n: usize,
    tol: f64,
    max_iter: usize,
    matvecs: usize,
    rng: rand_chacha::ChaCha8Rng,
}

enum PassOutcome {
    Done(Vec<EigenPair>),
    Budget(Vec<EigenPair>),
}

impl<O: SymOperator + ?Sized> Lanczos<'_, O> {
    fn matvec(&mut self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.op.apply(x, &mut y);
        self.matvecs += 1;
        y
    }

    /// Random unit vector orthogonal to `against`, or `None` if the
    /// complement is (numerically) empty.
    fn random_start(&mut self, against: &[&[Vec<f64>]]) -> Option<Vec<f64>> {
        for _ in 0..4 {
            let mut v: Vec<f64> = (0..self.n).map(|_| self.rng.random::<f64>() - 0.5).collect();
            orthogonalize(&mut v, against);
            let nv = norm(&v);
            if nv > 1e-8 {
                v.iter_mut().for_each(|x| *x /= nv);
                return Some(v);
            }
        }
        None
    }

    /// Finds up to `want` of the largest-magnitude eigenpairs in the
    /// complement of `locked`. Returns pairs in order of magnitude; only a
    /// prefix of converged pairs is returned.
    fn pass(&mut self, locked: &[Vec<f64>], want: usize) -> PassOutcome {
        let free = self.n - locked.len();
        let cap = free.min((3 * want + 30).max(60));
        let keep = (want + 8).min(cap / 2).max(want.min(cap));

        let mut q: Vec<Vec<f64>> = Vec::with_capacity(cap);
        let mut aq: Vec<Vec<f64>> = Vec::with_capacity(cap);
        let mut next = match self.random_start(&[locked]) {
            Some(v) => v,
            None => return PassOutcome::Done(Vec::new()),
        };
        let mut since_check = 0;
        loop {
            let av = self.matvec(&next);
            q.push(next);
            aq.push(av);
            since_check += 1;

            let mut candidate = aq.last().expect("basis is non-empty").clone();
            orthogonalize(&mut candidate, &[locked, &q]);
            let scale = norm(aq.last().expect("basis is non-empty")).max(1e-300);
            let exhausted = norm(&candidate) <= 1e-10 * scale;

            let full = q.len() >= cap;
            let out_of_budget = self.matvecs >= self.max_iter;
            if !(full || exhausted || out_of_budget || since_check >= 10) {
                let nc = norm(&candidate);
                candidate.iter_mut().for_each(|x| *x /= nc);
                next = candidate;
                continue;
            }
            since_check = 0;

            let ritz = rayleigh_ritz(&q, &aq);
            let converged = ritz
                .iter()
                .take(want)
                .take_while(|p| p.residual <= self.tol * p.value.abs().max(1.0))
                .count();
            if converged == want.min(ritz.len()) {
                let mut ritz = ritz;
                ritz.truncate(converged);
                return PassOutcome::Done(ritz);
            }
            if out_of_budget {
                let mut ritz = ritz;
                ritz.truncate(converged);
                return PassOutcome::Budget(ritz);
            }
            if exhausted {
                // invariant subspace found; continue from a fresh direction
                match self.random_start(&[locked, &q]) {
                    Some(v) if q.len() < cap => {
                        next = v;
                        continue;
                    }
                    Some(_) => {}
                    None => {
                        let mut ritz = ritz;
                        ritz.truncate(converged);
                        return PassOutcome::Done(ritz);
                    }
                }
            } else if !full {
                let nc = norm(&candidate);
                candidate.iter_mut().for_each(|x| *x /= nc);
                next = candidate;
                continue;
            }

            // thick restart: keep the leading Ritz vectors and continue from
            // the residual of the first unconverged one
            let restart_from = ritz[converged.min(ritz.len() - 1)].clone();
            let (nq, naq) = ritz_basis(&q, &aq, keep);
            q = nq;
            aq = naq;
            let mut r = residual_vector(&q, &aq, &restart_from);
            orthogonalize(&mut r, &[locked, &q]);
            let nr = norm(&r);
            next = if nr > 1e-12 {
                r.iter_mut().for_each(|x| *x /= nr);
                r
            } else {
                match self.random_start(&[locked, &q]) {
                    Some(v) => v,
                    None => {
                        let mut ritz = rayleigh_ritz(&q, &aq);
                        ritz.truncate(want);
                        return PassOutcome::Done(ritz);
                    }
                }
            };
        }
    }
}

/// Ritz pairs of the basis `q` (with `aq = A q`), by magnitude. Vectors are
/// returned in the full space with exact residuals.
fn rayleigh_ritz(q: &[Vec<f64>], aq: &[Vec<f64>]) -> Vec<EigenPair> {
    let m = q.len();
    let h = DMatrix::from_fn(m, m, |i, j| 0.5 * (dot(&q[i], &aq[j]) + dot(&q[j], &aq[i])));
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| by_magnitude(eig.eigenvalues[a], eig.eigenvalues[b]));
    let n = q[0].len();
    order
        .into_iter()
        .map(|k| {
            let theta = eig.eigenvalues[k];
            let s = eig.eigenvectors.column(k);
            let mut y = vec![0.0; n];
            let mut ay = vec![0.0; n];
            for j in 0..m {
                axpy(s[j], &q[j], &mut y);
                axpy(s[j], &aq[j], &mut ay);
            }
            let ny = norm(&y);
            y.iter_mut().for_each(|x| *x /= ny);
            ay.iter_mut().for_each(|x| *x /= ny);
            axpy(-theta, &y, &mut ay);
            EigenPair {
                value: theta,
                vector: y,
                residual: norm(&ay),
            }
        })
        .collect()
}

fn ritz_basis(q: &[Vec<f64>], aq: &[Vec<f64>], keep: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let m = q.len();
    let h = DMatrix::from_fn(m, m, |i, j| 0.5 * (dot(&q[i], &aq[j]) + dot(&q[j], &aq[i])));
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| by_magnitude(eig.eigenvalues[a], eig.eigenvalues[b]));
    let n = q[0].len();
    let mut nq = Vec::with_capacity(keep);
    let mut naq = Vec::with_capacity(keep);
    for &k in order.iter().take(keep) {
        let s = eig.eigenvectors.column(k);
        let mut y = vec![0.0; n];
        let mut ay = vec![0.0; n];
        for j in 0..m {
            axpy(s[j], &q[j], &mut y);
            axpy(s[j], &aq[j], &mut ay);
        }
        nq.push(y);
        naq.push(ay);
    }
    (nq, naq)
}

fn residual_vector(q: &[Vec<f64>], aq: &[Vec<f64>], pair: &EigenPair) -> Vec<f64> {
    // A y for y in span(q): project y onto q and map through aq
    let mut ay = vec![0.0; pair.vector.len()];
    for (qj, aqj) in q.iter().zip(aq) {
        axpy(dot(qj, &pair.vector), aqj, &mut ay);
    }
    axpy(-pair.value, &pair.vector, &mut ay);
    ay
}

/// The `k` eigenpairs of largest absolute value, sorted by `|λ|` descending
/// (ties: larger signed value first).
///
/// Every returned pair satisfies `‖Ax − λx‖ ≤ tol·max(1, |λ|)`. `max_iter`
/// bounds the total number of operator applications; when it is hit the
/// converged pairs are returned inside [`Error::NoConvergence`].
pub fn top_eigenpairs<O: SymOperator + ?Sized>(
    op: &O,
    k: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<Vec<EigenPair>> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::DegenerateOperator);
    }
    let k = k.min(n);
    let mut solver = Lanczos {
        op,
        n,
        tol,
        max_iter,
        matvecs: 0,
        rng: rng::stream(seed, "lanczos"),
    };
    let mut locked: Vec<EigenPair> = Vec::new();
    let mut verified = false;

    while !verified {
        let mut basis: Vec<Vec<f64>> = locked.iter().map(|p| p.vector.clone()).collect();
        let want = if locked.len() < k { k - locked.len() } else { 1 };
        let outcome = solver.pass(&basis, want);
        let (found, budget_hit) = match outcome {
            PassOutcome::Done(p) => (p, false),
            PassOutcome::Budget(p) => (p, true),
        };
        if locked.len() >= k {
            // verification pass: anything larger than the smallest locked value?
            let smallest = locked.last().map(|p| p.value.abs()).unwrap_or(0.0);
            match found.first() {
                Some(p) if p.value.abs() > smallest + tol * smallest.max(1.0) => {
                    locked.push(p.clone());
                }
                Some(_) => verified = true,
                None if !budget_hit => verified = true,
                None => {}
            }
        } else {
            let progress = !found.is_empty();
            locked.extend(found);
            if !progress && !budget_hit && locked.len() < k {
                // complement exhausted numerically
                verified = true;
            }
        }
        locked.sort_by(|a, b| by_magnitude(a.value, b.value));
        locked.truncate(k);
        basis.clear();
        if budget_hit && !verified {
            return Err(Error::NoConvergence {
                converged: finish(locked),
                requested: k,
                matvecs: solver.matvecs,
            });
        }
    }
    Ok(finish(locked))
}

fn finish(mut pairs: Vec<EigenPair>) -> Vec<EigenPair> {
    sort_pairs(&mut pairs);
    for p in &mut pairs {
        canonical_sign(&mut p.vector);
    }
    pairs
}

/// Sorts by `|λ|` descending; magnitudes equal to within `1e-9` relative
/// count as tied and are ordered by signed value.
fn sort_pairs(pairs: &mut [EigenPair]) {
    pairs.sort_by(|a, b| by_magnitude(a.value, b.value));
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() {
            let (x, y) = (pairs[end - 1].value.abs(), pairs[end].value.abs());
            if x - y > 1e-9 * x.max(1.0) {
                break;
            }
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| b.value.total_cmp(&a.value));
        start = end;
    }
}

/// Dense reference: all eigenpairs of a symmetric matrix, by magnitude.
pub fn dense_eigenpairs(m: &DMatrix<f64>) -> Vec<EigenPair> {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let pairs: Vec<EigenPair> = (0..n)
        .map(|k| {
            let v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            let mut av = vec![0.0; n];
            SymOperator::apply(m, &v, &mut av);
            axpy(-eig.eigenvalues[k], &v, &mut av);
            EigenPair {
                value: eig.eigenvalues[k],
                vector: v,
                residual: norm(&av),
            }
        })
        .collect();
    finish(pairs)
}

/// Spectral radius of a symmetric matrix by dense decomposition.
pub fn dense_spectral_radius(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Measured eigenvalues against the `μ_k^ℓ` and `α^{ℓ/2}` scales.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub lambda: Vec<f64>,
    /// `μ_k^ℓ` for `k < r0`.
    pub mu_powers: Vec<f64>,
    /// `α^{ℓ/2}`.
    pub bulk_scale: f64,
    /// `λ_k / μ_k^ℓ` for `k < r0`.
    pub ratios: Vec<f64>,
    /// `|λ_{r0+1}| / α^{ℓ/2}`, when that many pairs were computed.
    pub bulk_ratio: Option<f64>,
    /// `ln(n)² α^{ℓ/2}`.
    pub bulk_limit: f64,
    pub factor: f64,
    pub signal_ok: bool,
    pub bulk_ok: bool,
}

pub fn separation_report(
    pairs: &[EigenPair],
    profile: &SpectralProfile,
    ell: usize,
    factor: f64,
) -> SeparationReport {
    let n = pairs.first().map_or(0, |p| p.vector.len()) as f64;
    let lambda: Vec<f64> = pairs.iter().map(|p| p.value).collect();
    let mu_powers: Vec<f64> = profile.mu[..profile.r0]
        .iter()
        .map(|m| m.powi(ell as i32))
        .collect();
    let ratios: Vec<f64> = lambda.iter().zip(&mu_powers).map(|(l, m)| l / m).collect();
    let bulk_scale = profile.alpha.powf(ell as f64 / 2.0);
    let bulk_limit = n.ln().powi(2) * bulk_scale;
    let bulk = lambda.get(profile.r0).copied();
    let signal_ok = ratios.len() == mu_powers.len()
        && ratios.iter().all(|&x| x >= 1.0 / factor && x <= factor);
    SeparationReport {
        bulk_ratio: bulk.map(|b| b.abs() / bulk_scale),
        bulk_ok: bulk.is_none_or(|b| b.abs() <= bulk_limit),
        lambda,
        mu_powers,
        bulk_scale,
        ratios,
        bulk_limit,
        factor,
        signal_ok,
    }
}

/// Spectral radius of the shell matrix `Q` and its row-sum bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QcBound {
    pub exact: f64,
    pub bound: f64,
}

/// Builds the `(ℓ+1)×(ℓ+1)` matrix with entries `√(S_t S_u)` for `t + u ≤ ℓ`
/// (zero elsewhere) from shell sizes `S_0..S_ℓ`.
pub fn qc_bound(shell_sizes: &[f64]) -> QcBound {
    let len = shell_sizes.len();
    if len == 0 {
        return QcBound {
            exact: 0.0,
            bound: 0.0,
        };
    }
    let ell = len - 1;
    let q = DMatrix::from_fn(len, len, |t, u| {
        if t + u <= ell {
            (shell_sizes[t] * shell_sizes[u]).sqrt()
        } else {
            0.0
        }
    });
    let bound = (0..len)
        .map(|t| q.row(t).sum())
        .fold(0.0f64, f64::max);
    QcBound {
        exact: dense_spectral_radius(&q),
        bound,
    }
}

/// Result of [`delta_radius_check`].
#[derive(Clone, Debug, Serialize)]
pub struct DeltaRadiusReport {
    /// `ρ(Δ^ℓ)` from the iterative solver.
    pub rho: f64,
    /// `10 ln(n) α^{ℓ/2}`.
    pub scale_bound: f64,
    /// Largest exact `Q_C` radius over the short cycles.
    pub cycle_bound: f64,
    pub cycles: usize,
    pub tangle_free: bool,
    /// Pairs whose path count exceeded the cap.
    pub saturated: usize,
}

/// `ρ(Δ^ℓ)` for a graph small enough to build `B^ℓ`, with the per-cycle
/// shell bound computed over every cycle of length at most `2ℓ + 1`.
pub fn delta_radius_check(
    g: &SparseGraph,
    ell: usize,
    alpha: f64,
    cap: u32,
    seed: u64,
) -> Result<DeltaRadiusReport> {
    let b = graph::path_expansion_matrix(g, ell, cap);
    let d = graph::distance_matrix(g, ell);
    let delta = graph::delta_matrix(&b.matrix, &d)?;
    let rho = if delta.nnz() == 0 {
        0.0
    } else {
        let pairs = top_eigenpairs(&delta, 1, DEFAULT_TOL, DEFAULT_MAX_ITER, seed)?;
        pairs[0].value.abs()
    };
    let cycles = graph::short_cycles(g, 2 * ell + 1);
    let cycle_bound = cycles
        .iter()
        .map(|c| {
            let sizes: Vec<f64> = g.layers(c, ell).iter().map(|l| l.len() as f64).collect();
            qc_bound(&sizes).exact
        })
        .fold(0.0f64, f64::max);
    let n = g.n() as f64;
    Ok(DeltaRadiusReport {
        rho,
        scale_bound: 10.0 * n.ln() * alpha.powf(ell as f64 / 2.0),
        cycle_bound,
        cycles: cycles.len(),
        tangle_free: graph::tangle_free_check(g, ell).tangle_free,
        saturated: b.saturated.len(),
    })
}

/// `2√(2d)·‖perturbation‖ / gap`.
pub fn davis_kahan_bound(gap: f64, perturbation_norm: f64, d: usize) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::ZeroGap(gap));
    }
    Ok(2.0 * (2.0 * d as f64).sqrt() * perturbation_norm / gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MatrixKind;
    use crate::model::{sample_graph, SbmParams};

    fn check_pairs<O: SymOperator + ?Sized>(op: &O, pairs: &[EigenPair], tol: f64) {
        let n = op.dim();
        for (i, p) in pairs.iter().enumerate() {
            assert!((norm(&p.vector) - 1.0).abs() < 1e-10);
            let mut y = vec![0.0; n];
            op.apply(&p.vector, &mut y);
            axpy(-p.value, &p.vector, &mut y);
            assert!(norm(&y) <= tol * p.value.abs().max(1.0) * 1.01, "pair {i}: {}", norm(&y));
            for q in &pairs[..i] {
                assert!(dot(&p.vector, &q.vector).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn identity_and_two_by_two() {
        let id = DMatrix::<f64>::identity(5, 5);
        let p = top_eigenpairs(&id, 1, 1e-10, 100, 0).unwrap();
        assert!((p[0].value - 1.0).abs() < 1e-12);
        assert!(p[0].residual < 1e-12);

        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let p = top_eigenpairs(&m, 2, 1e-10, 100, 0).unwrap();
        assert!((p[0].value - 3.0).abs() < 1e-10);
        assert!((p[1].value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn empty_operator_is_rejected() {
        let m = DMatrix::<f64>::zeros(0, 0);
        assert!(matches!(
            top_eigenpairs(&m, 1, 1e-8, 10, 0),
            Err(Error::DegenerateOperator)
        ));
    }

    #[test]
    fn orders_by_magnitude_with_negative_values() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -5.0, 3.0, 5.0, 0.5]));
        let p = top_eigenpairs(&m, 4, 1e-10, 500, 1).unwrap();
        let vals: Vec<f64> = p.iter().map(|x| x.value).collect();
        for (got, want) in vals.iter().zip([5.0, -5.0, 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-9, "{vals:?}");
        }
    }

    #[test]
    fn finds_repeated_eigenvalues() {
        // diag with a triple top eigenvalue hidden behind a random rotation
        let n = 40;
        let mut diag = vec![0.0; n];
        for (i, d) in diag.iter_mut().enumerate() {
            *d = 1.0 / (1.0 + i as f64);
        }
        diag[0] = 4.0;
        diag[1] = 4.0;
        diag[2] = 4.0;
        diag[3] = 2.0;
        let mut r = rng::stream(5, "test");
        let a = DMatrix::from_fn(n, n, |_, _| r.random::<f64>() - 0.5);
        let q = a.qr().q();
        let m = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)) * q.transpose();
        let p = top_eigenpairs(&m, 4, 1e-9, 2000, 3).unwrap();
        let vals: Vec<f64> = p.iter().map(|x| x.value).collect();
        assert!(vals[..3].iter().all(|v| (v - 4.0).abs() < 1e-7), "{vals:?}");
        assert!((vals[3] - 2.0).abs() < 1e-7, "{vals:?}");
        check_pairs(&m, &p, 1e-9);
    }

    #[test]
    fn matches_dense_oracle_on_sbm_distance_matrix() {
        let params = SbmParams::circulant(2, 5.0, 1.0, 300).unwrap();
        let s = sample_graph(&params, 17);
        let d3 = graph::distance_matrix(&s.graph, 3);
        let pairs = top_eigenpairs(&d3, 4, 1e-10, DEFAULT_MAX_ITER, 2).unwrap();
        let oracle = dense_eigenpairs(&d3.to_dense());
        for (p, o) in pairs.iter().zip(&oracle) {
            assert!((p.value - o.value).abs() <= 1e-6 * o.value.abs(), "{} vs {}", p.value, o.value);
        }
        check_pairs(&d3, &pairs, 1e-10);
    }

    #[test]
    fn deterministic_given_seed() {
        let params = SbmParams::circulant(2, 5.0, 1.0, 400).unwrap();
        let s = sample_graph(&params, 3);
        let d2 = graph::distance_matrix(&s.graph, 2);
        let a = top_eigenpairs(&d2, 3, 1e-8, DEFAULT_MAX_ITER, 9).unwrap();
        let b = top_eigenpairs(&d2, 3, 1e-8, DEFAULT_MAX_ITER, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_exhaustion_reports_partial_results() {
        let params = SbmParams::circulant(2, 5.0, 1.0, 500).unwrap();
        let d = graph::distance_matrix(&sample_graph(&params, 1).graph, 3);
        match top_eigenpairs(&d, 6, 1e-14, 15, 0) {
            Err(Error::NoConvergence { requested, matvecs, .. }) => {
                assert_eq!(requested, 6);
                assert!(matvecs >= 15);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn difference_operator() {
        let g = SparseGraph::cycle(4);
        let b = graph::path_expansion_matrix(&g, 2, 4).matrix;
        let d = graph::distance_matrix(&g, 2);
        let p = top_eigenpairs(&Difference { a: &b, b: &d }, 1, 1e-10, 100, 0).unwrap();
        assert!((p[0].value.abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn separation_of_exact_pairs() {
        let prof = SpectralProfile::from_block_model(&[vec![5.0, 1.0], vec![1.0, 5.0]], &[0.5, 0.5]).unwrap();
        let pairs: Vec<EigenPair> = [81.0, 16.0, 2.0]
            .iter()
            .map(|&v| EigenPair {
                value: v,
                vector: vec![0.0; 10],
                residual: 0.0,
            })
            .collect();
        let rep = separation_report(&pairs, &prof, 4, 10.0);
        assert!(rep.ratios.iter().all(|r| (r - 1.0).abs() < 1e-12));
        assert!(rep.signal_ok && rep.bulk_ok);
        assert!((rep.bulk_ratio.unwrap() - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn qc_bound_cases() {
        let q = qc_bound(&[1.0, 0.0, 0.0, 0.0]);
        assert!((q.exact - 1.0).abs() < 1e-12 && (q.bound - 1.0).abs() < 1e-12);

        let q = qc_bound(&[1.0, 4.0, 16.0]);
        assert!((q.bound - 7.0).abs() < 1e-12);
        let dense = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 4.0, 2.0, 4.0, 0.0, 4.0, 0.0, 0.0]);
        assert!((q.exact - dense_spectral_radius(&dense)).abs() < 1e-12);
        assert!(q.exact <= q.bound);

        for alpha in [2.0f64, 3.0, 5.0] {
            for ell in 1..6 {
                let sizes: Vec<f64> = (0..=ell).map(|t| alpha.powi(t)).collect();
                let q = qc_bound(&sizes);
                let geometric = (ell as f64 + 1.0) * alpha.powf(ell as f64 / 2.0) * alpha.sqrt()
                    / (alpha.sqrt() - 1.0);
                assert!(q.exact <= q.bound + 1e-9 && q.bound <= geometric);
            }
        }
    }

    #[test]
    fn delta_radius_on_tree_and_square() {
        let tree = SparseGraph::complete_tree(2, 4);
        let r = delta_radius_check(&tree, 3, 2.0, 4, 0).unwrap();
        assert_eq!(r.rho, 0.0);
        let r = delta_radius_check(&SparseGraph::cycle(4), 2, 2.0, 4, 0).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-9);
        assert!(r.rho <= r.cycle_bound);
    }

    #[test]
    fn davis_kahan_values() {
        assert_eq!(davis_kahan_bound(1.0, 0.0, 1).unwrap(), 0.0);
        assert!((davis_kahan_bound(2.0, 1.0, 1).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((davis_kahan_bound(1.0, 1.0, 2).unwrap() - 4.0).abs() < 1e-12);
        assert!(matches!(davis_kahan_bound(0.0, 1.0, 1), Err(Error::ZeroGap(_))));
    }

    #[test]
    fn sparse_and_dense_operators_agree() {
        let g = SparseGraph::cycle(6);
        let a = SparseSymMatrix::adjacency(&g);
        assert_eq!(a.kind(), MatrixKind::Adjacency);
        let x: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let mut y1 = vec![0.0; 6];
        let mut y2 = vec![0.0; 6];
        SymOperator::apply(&a, &x, &mut y1);
        SymOperator::apply(&a.to_dense(), &x, &mut y2);
        assert_eq!(y1, y2);
    }
}
