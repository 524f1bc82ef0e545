//! The PageRank operator on the probability simplex, the feedback iteration
//! `x_k^T = x_{k-1}^T X(λ)`, closed-form iteration limits, and the
//! fixed-point classifier.
//!
//! The limit of the feedback iteration puts zero mass on every non-dangling
//! cluster and splits the remaining mass over the dangling clusters, each in
//! the direction of its own left Perron vector. The split weights are the
//! absorption masses: the share of personalization mass that ends up in each
//! sink of the condensation. The fixed points of the operator are exactly
//! the convex combinations of the per-cluster Perron vertices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{row_normalize, Graph, RowStochastic};
use crate::lu::lu_factor;
use crate::spectral::{
    apply_resolvent, left_perron, norm1, norm1_diff, ResolventConfig, ResolventMethod,
};
use crate::structure::{graph_of_rows, normal_form, scc, NormalForm};

/// Distributions supplied by callers may be off unit mass by this much.
pub const DISTRIBUTION_TOL: f64 = 1e-9;

/// Tolerance used when computing Perron vertices for reports and limits.
const VERTEX_TOL: f64 = 1e-12;
const VERTEX_MAX_ITER: usize = 200_000;

/// Cap on stored trace entries (`N` values per stored iterate).
const MAX_TRACE_ENTRIES: usize = 10_000_000;

/// What to do with dangling rows before applying the operator.
#[derive(Debug, Clone, PartialEq)]
pub enum DanglingPolicy {
    /// Refuse to run; strict mode for inputs promised to have none.
    Reject,
    /// Replace each dangling row with the uniform distribution `e/N`.
    PatchUniform,
    /// Replace each dangling row with a caller-supplied distribution.
    PatchVector(Vec<f64>),
}

/// Parameters of the PageRank operator `PR_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRankConfig {
    pub lambda: f64,
    pub personalization: Vec<f64>,
    pub dangling_policy: DanglingPolicy,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl PageRankConfig {
    pub fn new(lambda: f64, personalization: Vec<f64>) -> Self {
        PageRankConfig {
            lambda,
            personalization,
            dangling_policy: DanglingPolicy::PatchUniform,
            tolerance: 1e-10,
            max_iterations: 1_000_000,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidInput("lambda must be in (0,1)".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be positive".into()));
        }
        validate_distribution(&self.personalization, n, "personalization vector")?;
        if let DanglingPolicy::PatchVector(u) = &self.dangling_policy {
            validate_distribution(u, n, "dangling patch vector")?;
        }
        Ok(())
    }

    fn resolvent(&self) -> ResolventConfig {
        ResolventConfig {
            lambda: self.lambda,
            method: ResolventMethod::DirectSolve,
            tolerance: self.tolerance,
            max_terms: 10_000_000,
        }
    }
}

/// Checks length, non-negativity and unit mass (within 1e-9).
pub fn validate_distribution(v: &[f64], n: usize, what: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} has length {}, expected {}",
            what,
            v.len(),
            n
        )));
    }
    for (i, &x) in v.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{} entry {} is not finite",
                what, i
            )));
        }
        if x < 0.0 {
            return Err(Error::InvalidInput(format!(
                "{} entry {} is negative ({})",
                what, i, x
            )));
        }
    }
    let sum = norm1(v);
    if (sum - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::InvalidInput(format!(
            "{} sums to {} (must be 1 within {:e})",
            what, sum, DISTRIBUTION_TOL
        )));
    }
    Ok(())
}

/// Scales a validated distribution to unit mass exactly.
fn renormalize(v: &[f64]) -> Vec<f64> {
    let s = norm1(v);
    v.iter().map(|x| x / s).collect()
}

/// Applies the dangling policy: returns a fully stochastic matrix, replacing
/// each dangling row with the patch distribution `u` (`P + d·u^T`).
pub fn resolve_dangling(p: &RowStochastic, policy: &DanglingPolicy) -> Result<RowStochastic> {
    if !p.has_dangling() {
        return Ok(p.clone());
    }
    let n = p.n();
    let patch_row: Vec<(usize, f64)> = match policy {
        DanglingPolicy::Reject => {
            return Err(Error::InvalidInput(
                "matrix has dangling rows under the reject policy".into(),
            ))
        }
        DanglingPolicy::PatchUniform => {
            let w = 1.0 / n as f64;
            (0..n).map(|j| (j, w)).collect()
        }
        DanglingPolicy::PatchVector(u) => {
            validate_distribution(u, n, "dangling patch vector")?;
            let mut w = renormalize(u);
            // Second pass pins the stored row sum to 1 within rounding.
            let s = norm1(&w);
            for x in &mut w {
                *x /= s;
            }
            w.iter()
                .enumerate()
                .filter(|&(_, &x)| x > 0.0)
                .map(|(j, &x)| (j, x))
                .collect()
        }
    };
    let rows = p
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if p.dangling()[i] {
                patch_row.clone()
            } else {
                row.clone()
            }
        })
        .collect();
    RowStochastic::from_rows(n, rows)
}

/// PageRank of the personalization vector: `π^T = (1−λ) v^T (I − λP)⁻¹`.
///
/// Dangling rows are first resolved by the configured policy. Warns (but
/// proceeds) when `v` has zero entries, since the operator's domain proper is
/// the strictly positive simplex.
pub fn pagerank(p: &RowStochastic, cfg: &PageRankConfig) -> Result<Vec<f64>> {
    cfg.validate(p.n())?;
    if cfg.personalization.iter().any(|&x| x == 0.0) {
        log::warn!("personalization vector has zero entries; PageRank may sit on the simplex boundary");
    }
    let patched = resolve_dangling(p, &cfg.dangling_policy)?;
    let v = renormalize(&cfg.personalization);
    apply_resolvent(&v, &patched, &cfg.resolvent())
}

/// Full record of a feedback iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// Stored iterates `(k, x_k)`, thinned by the requested stride and capped
    /// so at most [`MAX_TRACE_ENTRIES`] values are kept.
    pub iterates: Vec<(usize, Vec<f64>)>,
    /// `‖x_k − x_{k−1}‖₁` for `k = 1..`.
    pub residuals: Vec<f64>,
    /// Per-iteration 1-norm mass of each normal-form block, starting at `x_0`.
    pub cluster_mass: Vec<Vec<f64>>,
    pub converged: bool,
    pub limit: Vec<f64>,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }
}

/// Runs `x_k^T = x_{k-1}^T X(λ)` from `x_0 = v` until successive iterates
/// agree within `cfg.tolerance` in 1-norm or `cfg.max_iterations` is hit.
///
/// Non-convergence is reported in the trace, not as an error. Pass
/// `trace_stride = 0` to skip storing iterate vectors; residuals and block
/// masses are always recorded.
pub fn feedback_iterate(
    p: &RowStochastic,
    cfg: &PageRankConfig,
    trace_stride: usize,
) -> Result<IterationTrace> {
    cfg.validate(p.n())?;
    let patched = resolve_dangling(p, &cfg.dangling_policy)?;
    let structure_graph = graph_of_rows(&patched);
    let nf = normal_form(&scc(&structure_graph), &structure_graph);
    let blocks: Vec<&[usize]> = nf.blocks.iter().map(|b| b.nodes.as_slice()).collect();
    let block_mass = |x: &[f64]| -> Vec<f64> {
        blocks
            .iter()
            .map(|nodes| nodes.iter().map(|&v| x[v]).sum())
            .collect()
    };

    let inner = ResolventConfig {
        lambda: cfg.lambda,
        method: ResolventMethod::DirectSolve,
        tolerance: (cfg.tolerance * 1e-3).min(1e-13),
        max_terms: 10_000_000,
    };

    let mut x = renormalize(&cfg.personalization);
    let mut trace = IterationTrace {
        iterates: Vec::new(),
        residuals: Vec::new(),
        cluster_mass: vec![block_mass(&x)],
        converged: false,
        limit: Vec::new(),
    };
    let mut stored = 0usize;
    let store = |k: usize, x: &[f64], trace: &mut IterationTrace, stored: &mut usize| {
        if trace_stride >= 1 && k % trace_stride == 0 && *stored + x.len() <= MAX_TRACE_ENTRIES {
            trace.iterates.push((k, x.to_vec()));
            *stored += x.len();
        }
    };
    store(0, &x, &mut trace, &mut stored);

    for k in 1..=cfg.max_iterations {
        let y = apply_resolvent(&x, &patched, &inner)?;
        let residual = norm1_diff(&y, &x);
        x = y;
        trace.residuals.push(residual);
        trace.cluster_mass.push(block_mass(&x));
        store(k, &x, &mut trace, &mut stored);
        if residual <= cfg.tolerance {
            trace.converged = true;
            break;
        }
    }
    trace.limit = x;
    Ok(trace)
}

/// Exact limit of the feedback iteration, without iterating.
///
/// Writes zeros on every non-dangling block and `α_j · c_j` on dangling
/// block `j`, where `c_j` is the block's left Perron vector and `α_j` the
/// absorption mass: the personalization mass starting inside block `j` plus
/// the mass funneled into it through the transient part. The transient
/// contribution solves the absorption system on the block structure of
/// `X(λ)`: with `T` the transient-to-transient block and `R_j` the
/// transient-to-block-`j` block, `α_j = ‖v_j‖₁ + v_T^T (I − T)⁻¹ R_j e`.
pub fn predict_limit(
    p: &RowStochastic,
    nf: &NormalForm,
    v: &[f64],
    lambda: f64,
) -> Result<Vec<f64>> {
    if p.has_dangling() {
        return Err(Error::InvalidInput(
            "matrix has dangling rows; resolve them with a dangling policy first".into(),
        ));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidInput("lambda must be in (0,1)".into()));
    }
    validate_distribution(v, p.n(), "personalization vector")?;
    let v = renormalize(v);

    let transient: Vec<usize> = nf
        .blocks
        .iter()
        .filter(|b| !b.dangling)
        .flat_map(|b| b.nodes.iter().copied())
        .collect();
    let dangling_blocks: Vec<&Vec<usize>> = nf
        .blocks
        .iter()
        .filter(|b| b.dangling)
        .map(|b| &b.nodes)
        .collect();

    // Mass already inside each dangling block.
    let mut alphas: Vec<f64> = dangling_blocks
        .iter()
        .map(|nodes| nodes.iter().map(|&i| v[i]).sum())
        .collect();

    let t = transient.len();
    if t > 0 {
        let mut local = vec![usize::MAX; p.n()];
        for (k, &node) in transient.iter().enumerate() {
            local[node] = k;
        }
        let mut block_of = vec![usize::MAX; p.n()];
        for (j, nodes) in dangling_blocks.iter().enumerate() {
            for &node in nodes.iter() {
                block_of[node] = j;
            }
        }

        // P_TT dense and the direct per-block outflow s_j = (P_TD)_j e.
        let mut p_tt = vec![0.0; t * t];
        let mut s = vec![vec![0.0; t]; dangling_blocks.len()];
        for (k, &node) in transient.iter().enumerate() {
            for &(c, w) in p.row(node) {
                if local[c] != usize::MAX {
                    p_tt[k * t + local[c]] += w;
                } else {
                    s[block_of[c]][k] += w;
                }
            }
        }

        // Transient block of the resolvent: T = (1−λ)(I − λ P_TT)⁻¹, and
        // R_j e = λ (I − λ P_TT)⁻¹ s_j (each dangling diagonal block of the
        // resolvent is row-stochastic, so its e-image collapses).
        let m1: Vec<f64> = (0..t * t)
            .map(|idx| {
                let (i, j) = (idx / t, idx % t);
                (if i == j { 1.0 } else { 0.0 }) - lambda * p_tt[idx]
            })
            .collect();
        let lu1 = lu_factor(t, m1)?;

        let mut t_mat = vec![0.0; t * t];
        for j in 0..t {
            let mut col = vec![0.0; t];
            col[j] = 1.0;
            lu1.solve(&mut col);
            for i in 0..t {
                t_mat[i * t + j] = (1.0 - lambda) * col[i];
            }
        }
        let r_cols: Vec<Vec<f64>> = s
            .iter()
            .map(|sj| {
                let mut col = sj.clone();
                lu1.solve(&mut col);
                for x in &mut col {
                    *x *= lambda;
                }
                col
            })
            .collect();

        // z^T (I − T) = v_T^T, i.e. (I − T)^T z = v_T.
        let m2: Vec<f64> = (0..t * t)
            .map(|idx| {
                let (i, j) = (idx / t, idx % t);
                (if i == j { 1.0 } else { 0.0 }) - t_mat[j * t + i]
            })
            .collect();
        let lu2 = lu_factor(t, m2)?;
        let v_t: Vec<f64> = transient.iter().map(|&node| v[node]).collect();
        let mut z = v_t.clone();
        lu2.solve(&mut z);

        // The solve cannot be singular while every transient block has
        // spectral radius below one; verify the residual anyway.
        let mut residual = 0.0;
        for i in 0..t {
            let mut acc = z[i];
            for j in 0..t {
                acc -= t_mat[j * t + i] * z[j];
            }
            residual += (acc - v_t[i]).abs();
        }
        if !(residual <= 1e-9) {
            return Err(Error::Internal(format!(
                "absorption solve residual {:e} exceeds tolerance",
                residual
            )));
        }

        for (j, r) in r_cols.iter().enumerate() {
            let inflow: f64 = z.iter().zip(r).map(|(a, b)| a * b).sum();
            if inflow < -DISTRIBUTION_TOL {
                return Err(Error::Internal(format!(
                    "negative absorption mass {:e} for dangling block {}",
                    inflow, j
                )));
            }
            alphas[j] += inflow.max(0.0);
        }
    }

    let mut out = vec![0.0; p.n()];
    for (nodes, &alpha) in dangling_blocks.iter().zip(&alphas) {
        let block = p.restrict(nodes)?;
        let perron = left_perron(&block, VERTEX_TOL, VERTEX_MAX_ITER)?;
        for (k, &node) in nodes.iter().enumerate() {
            out[node] = alpha * perron.vector[k];
        }
    }
    Ok(out)
}

/// Existence and uniqueness of fixed points of `PR_λ`, with the vertex set
/// of the fixed-point polytope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    /// Number of non-dangling clusters.
    #[serde(rename = "L")]
    pub num_nondangling: usize,
    /// Number of dangling clusters.
    #[serde(rename = "M")]
    pub num_dangling: usize,
    /// A fixed point exists in the strictly positive simplex.
    pub exists_interior: bool,
    /// A fixed point exists in the closed simplex (always true).
    pub exists_boundary: bool,
    /// Exactly one fixed point.
    pub unique: bool,
    /// Per dangling cluster: its Perron vector zero-padded to length `N`.
    /// The fixed points are exactly the convex combinations of these.
    pub vertices: Vec<Vec<f64>>,
}

/// Classifies the fixed points of `PR_λ` on the graph, after resolving
/// dangling nodes with the given policy.
pub fn classify_fixed_points(
    g: &Graph,
    lambda: f64,
    policy: &DanglingPolicy,
) -> Result<FixedPointReport> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidInput("lambda must be in (0,1)".into()));
    }
    let patched = resolve_dangling(&row_normalize(g), policy)?;
    let structure_graph = graph_of_rows(&patched);
    let nf = normal_form(&scc(&structure_graph), &structure_graph);

    let num_nondangling = nf.num_nondangling();
    let num_dangling = nf.num_dangling();
    let mut vertices = Vec::with_capacity(num_dangling);
    for block in nf.blocks.iter().filter(|b| b.dangling) {
        let sub = patched.restrict(&block.nodes)?;
        let perron = left_perron(&sub, VERTEX_TOL, VERTEX_MAX_ITER)?;
        let mut vertex = vec![0.0; g.node_count()];
        for (k, &node) in block.nodes.iter().enumerate() {
            vertex[node] = perron.vector[k];
        }
        vertices.push(vertex);
    }

    Ok(FixedPointReport {
        num_nondangling,
        num_dangling,
        exists_interior: num_nondangling == 0,
        exists_boundary: true,
        unique: num_dangling == 1,
        vertices,
    })
}

/// Direct check of the fixed-point definition: is the configured
/// personalization vector its own PageRank within `tol` in 1-norm?
pub fn is_fixed_point(p: &RowStochastic, cfg: &PageRankConfig, tol: f64) -> Result<bool> {
    let pr = pagerank(p, cfg)?;
    Ok(norm1_diff(&pr, &cfg.personalization) <= tol)
}
