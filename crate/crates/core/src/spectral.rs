//! Left Perron vectors and the resolvent operator `x ↦ x^T X(λ)` with
//! `X(λ) = (1-λ)(I - λP)⁻¹`.
//!
//! For an irreducible row-stochastic `P` the resolvent is positive,
//! irreducible and row-stochastic, shares its eigenvectors with `P`, and maps
//! eigenvalue `β` to `(1-λ)/(1-λβ)`. Power iteration on `X(λ)` therefore
//! converges to the left Perron vector of `P` even when plain iteration on
//! `P` oscillates (periodic chains), and no re-normalization step is needed:
//! `X(λ)` is a 1-norm isometry on the positive cone.

use crate::error::{Error, Result};
use crate::graph::{degrees, Graph, RowStochastic};
use crate::structure::scc;

/// 1-norm of a vector.
pub fn norm1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

/// 1-norm distance between two vectors of equal length.
pub fn norm1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Internal damping used by [`left_perron`]; any value in (0,1) yields the
/// same Perron vector, 0.5 keeps the damped operator well clear of
/// periodicity.
const PERRON_DAMPING: f64 = 0.5;

/// Converged left Perron vector of a row-stochastic block.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronResult {
    /// Strictly positive, unit 1-norm.
    pub vector: Vec<f64>,
    /// `‖c^T P − c^T‖₁` at termination.
    pub residual: f64,
    /// Resolvent applications performed.
    pub iterations: usize,
}

/// How to evaluate `x^T X(λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolventMethod {
    /// Jacobi refinement of the fixed-point form `y = λ yP + (1-λ) x`;
    /// contracts geometrically at rate λ.
    DirectSolve,
    /// Truncated series `(1-λ) Σ λ^k x P^k`, stopped once the tail bound
    /// `λ^{k+1}` is negligible.
    NeumannSeries,
}

/// Parameters of a resolvent application.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventConfig {
    pub lambda: f64,
    pub method: ResolventMethod,
    pub tolerance: f64,
    pub max_terms: usize,
}

impl ResolventConfig {
    pub fn new(lambda: f64) -> Self {
        ResolventConfig {
            lambda,
            method: ResolventMethod::DirectSolve,
            tolerance: 1e-12,
            max_terms: 10_000_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidInput("lambda must be in (0,1)".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidInput("max_terms must be positive".into()));
        }
        Ok(())
    }
}

fn require_no_dangling(p: &RowStochastic) -> Result<()> {
    if p.has_dangling() {
        return Err(Error::InvalidInput(
            "matrix has dangling rows; resolve them with a dangling policy first".into(),
        ));
    }
    Ok(())
}

/// Applies the resolvent to a probability vector: returns `y` with
/// `y^T (I − λP) = (1−λ) x^T` within `cfg.tolerance`, `y ≥ 0` and
/// `‖y‖₁ = 1`.
pub fn apply_resolvent(x: &[f64], p: &RowStochastic, cfg: &ResolventConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    require_no_dangling(p)?;
    if x.len() != p.n() {
        return Err(Error::InvalidInput(format!(
            "vector length {} does not match matrix order {}",
            x.len(),
            p.n()
        )));
    }
    let mut y = match cfg.method {
        ResolventMethod::DirectSolve => jacobi_solve(x, p, cfg)?,
        ResolventMethod::NeumannSeries => neumann_sum(x, p, cfg)?,
    };
    // The exact image of a distribution has unit mass; pin it down so the
    // truncation level never leaks into the 1-norm.
    let s = norm1(&y);
    if !(s > 0.0) {
        return Err(Error::Internal("resolvent image has zero mass".into()));
    }
    for v in &mut y {
        *v /= s;
    }
    Ok(y)
}

/// Raw linear action of the resolvent on an arbitrary vector, without the
/// simplex normalization. Used for spectral spot-checks on non-positive
/// vectors.
pub fn apply_resolvent_linear(
    x: &[f64],
    p: &RowStochastic,
    cfg: &ResolventConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    require_no_dangling(p)?;
    let lambda = cfg.lambda;
    let goal = cfg.tolerance * (1.0 - lambda);
    let mut y = x.to_vec();
    for _ in 0..cfg.max_terms {
        let mut z = p.left_mul(&y);
        for (zi, xi) in z.iter_mut().zip(x) {
            *zi = lambda * *zi + (1.0 - lambda) * xi;
        }
        let step = norm1_diff(&z, &y);
        y = z;
        if step <= goal {
            return Ok(y);
        }
    }
    let residual = {
        let py = p.left_mul(&y);
        y.iter()
            .zip(&py)
            .zip(x)
            .map(|((yi, pyi), xi)| (yi - lambda * pyi - (1.0 - lambda) * xi).abs())
            .sum()
    };
    Err(Error::Convergence {
        iterations: cfg.max_terms,
        residual,
        best: y,
    })
}

fn jacobi_solve(x: &[f64], p: &RowStochastic, cfg: &ResolventConfig) -> Result<Vec<f64>> {
    let lambda = cfg.lambda;
    // λ^m ≤ tol·(1−λ) bounds the distance to the exact image by tol/2
    // (via 4λ(1−λ) ≤ 1) without inspecting iterates.
    let a_priori = ((cfg.tolerance * (1.0 - lambda)).ln() / lambda.ln()).ceil() as usize + 1;
    let cap = a_priori.min(cfg.max_terms);
    // Successive-step bound: ‖y_m − y*‖ ≤ λ·step/(1−λ), so this early-exit
    // threshold also certifies distance ≤ tol/2.
    let goal = cfg.tolerance * ((1.0 - lambda) / (2.0 * lambda)).min(1.0);
    let mut y = x.to_vec();
    let mut step = f64::INFINITY;
    for _ in 0..cap {
        let mut z = p.left_mul(&y);
        for (zi, xi) in z.iter_mut().zip(x) {
            *zi = lambda * *zi + (1.0 - lambda) * xi;
        }
        step = norm1_diff(&z, &y);
        y = z;
        if step <= goal {
            return Ok(y);
        }
    }
    if cap < a_priori {
        return Err(Error::Convergence {
            iterations: cap,
            residual: step,
            best: y,
        });
    }
    Ok(y)
}

fn neumann_sum(x: &[f64], p: &RowStochastic, cfg: &ResolventConfig) -> Result<Vec<f64>> {
    let lambda = cfg.lambda;
    let scale = 1.0 - lambda;
    let mut y: Vec<f64> = x.iter().map(|v| v * scale).collect();
    let mut term = x.to_vec(); // λ^k x P^k
    let mut tail = lambda; // λ^{k+1}
    let mut k = 0usize;
    while tail > cfg.tolerance * 0.5 {
        if k >= cfg.max_terms {
            return Err(Error::Convergence {
                iterations: k,
                residual: tail,
                best: y,
            });
        }
        let mut next = p.left_mul(&term);
        for v in &mut next {
            *v *= lambda;
        }
        term = next;
        for (yi, ti) in y.iter_mut().zip(&term) {
            *yi += scale * ti;
        }
        tail *= lambda;
        k += 1;
    }
    Ok(y)
}

/// Left Perron vector of an irreducible row-stochastic block.
///
/// Runs power iteration on the damped operator `X(λ₀)` with fixed internal
/// `λ₀ = 0.5`; the damped operator is positive and shares the Perron vector
/// with the block itself. Stops once successive iterates differ by at most
/// `tol` in 1-norm *and* `‖c^T P − c^T‖₁ ≤ tol`.
///
/// The block must be irreducible (the caller establishes this via the SCC
/// decomposition); a dangling row — including the lone node without a
/// self-loop — is rejected.
pub fn left_perron(block: &RowStochastic, tol: f64, max_iter: usize) -> Result<PerronResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    require_no_dangling(block)?;
    let n = block.n();
    let inner = ResolventConfig {
        lambda: PERRON_DAMPING,
        method: ResolventMethod::DirectSolve,
        tolerance: (tol * 0.1).min(1e-13),
        max_terms: 10_000_000,
    };
    let mut x = vec![1.0 / n as f64; n];
    let mut iterations = 0usize;
    while iterations < max_iter {
        let y = apply_resolvent(&x, block, &inner)?;
        iterations += 1;
        let step = norm1_diff(&y, &x);
        x = y;
        if step <= tol {
            let residual = norm1_diff(&block.left_mul(&x), &x);
            if residual <= tol {
                return Ok(PerronResult {
                    vector: x,
                    residual,
                    iterations,
                });
            }
        }
    }
    let residual = norm1_diff(&block.left_mul(&x), &x);
    Err(Error::Convergence {
        iterations,
        residual,
        best: x,
    })
}

/// Degree shortcut for connected symmetric graphs: the Perron vector is the
/// degree vector scaled to unit sum.
pub fn degree_perron_undirected(g: &Graph) -> Result<Vec<f64>> {
    if !g.is_symmetric() {
        return Err(Error::InvalidInput(
            "graph is not symmetric; the degree shortcut needs an undirected graph".into(),
        ));
    }
    if scc(g).components.len() != 1 {
        return Err(Error::InvalidInput("graph is not connected".into()));
    }
    let d = degrees(g);
    if !(d.edge_weight_total > 0.0) {
        return Err(Error::InvalidInput("graph has no positive-weight edges".into()));
    }
    Ok(d.out_degree
        .iter()
        .map(|k| k / d.edge_weight_total)
        .collect())
}

/// Out-degree shortcut for strongly connected digraphs. Returns the scaled
/// out-degree vector exactly when the graph is degree-balanced (equivalently,
/// admits a closed Eulerian path); `None` signals the shortcut does not
/// apply.
pub fn degree_perron_eulerian(g: &Graph) -> Result<Option<Vec<f64>>> {
    if scc(g).components.len() != 1 {
        return Err(Error::InvalidInput("graph is not strongly connected".into()));
    }
    if !crate::structure::is_eulerian_balanced(g) {
        return Ok(None);
    }
    let d = degrees(g);
    if !(d.edge_weight_total > 0.0) {
        return Err(Error::InvalidInput("graph has no positive-weight edges".into()));
    }
    Ok(Some(
        d.out_degree
            .iter()
            .map(|k| k / d.edge_weight_total)
            .collect(),
    ))
}
