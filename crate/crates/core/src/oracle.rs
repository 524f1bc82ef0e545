//! Dense small-scale reference implementations.
//!
//! Everything here trades efficiency for being obviously correct: dense
//! Gaussian elimination, explicit matrix powers, boolean transitive closure.
//! The test suites (and `selftest`) compare the sparse/iterative paths
//! against these; nothing in the production paths calls into this module.

use crate::graph::{Graph, RowStochastic};

/// Maximum order accepted by the dense routines.
pub const MAX_DENSE_ORDER: usize = 64;

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {} has wrong length", i);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_sparse(p: &RowStochastic) -> Self {
        let mut m = Self::zeros(p.n());
        for (i, row) in p.rows().iter().enumerate() {
            for &(c, v) in row {
                m.set(i, c, m.get(i, c) + v);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
    }

    /// Left product `x^T M`.
    pub fn left_mul(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..self.n {
                y[j] += xi * self.get(i, j);
            }
        }
        y
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        (0..self.n).map(|j| self.get(i, j)).sum()
    }
}

/// Dense `X(λ) = (1−λ)(I − λP)⁻¹` by Gaussian elimination with partial
/// pivoting. Panics on a singular system, which cannot happen for a
/// row-stochastic `P` and `λ < 1` — hitting it signals a bug.
pub fn dense_resolvent(p: &DenseMatrix, lambda: f64) -> DenseMatrix {
    let n = p.n();
    assert!(n <= MAX_DENSE_ORDER, "oracle limited to order {}", MAX_DENSE_ORDER);
    assert!(lambda > 0.0 && lambda < 1.0, "lambda must be in (0,1)");

    // Augment [I - λP | I] and eliminate in place.
    let mut a = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j { 1.0 } else { 0.0 } - lambda * p.get(i, j);
            a.set(i, j, v);
        }
    }
    let mut inv = DenseMatrix::identity(n);

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                a.get(r1, col)
                    .abs()
                    .partial_cmp(&a.get(r2, col).abs())
                    .unwrap()
            })
            .unwrap();
        let pivot = a.get(pivot_row, col);
        assert!(
            pivot.abs() > 1e-14,
            "singular system in dense_resolvent (pivot {:e} at column {})",
            pivot,
            col
        );
        if pivot_row != col {
            for j in 0..n {
                let (x, y) = (a.get(col, j), a.get(pivot_row, j));
                a.set(col, j, y);
                a.set(pivot_row, j, x);
                let (x, y) = (inv.get(col, j), inv.get(pivot_row, j));
                inv.set(col, j, y);
                inv.set(pivot_row, j, x);
            }
        }
        let inv_pivot = 1.0 / a.get(col, col);
        for j in 0..n {
            a.set(col, j, a.get(col, j) * inv_pivot);
            inv.set(col, j, inv.get(col, j) * inv_pivot);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a.get(r, col);
            if factor == 0.0 {
                continue;
            }
            for j in 0..n {
                a.set(r, j, a.get(r, j) - factor * a.get(col, j));
                inv.set(r, j, inv.get(r, j) - factor * inv.get(col, j));
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, inv.get(i, j) * (1.0 - lambda));
        }
    }
    inv
}

/// Exact `v^T X^k` by repeated dense multiplication.
pub fn dense_power_limit(x: &DenseMatrix, v: &[f64], k: usize) -> Vec<f64> {
    assert!(x.n() <= MAX_DENSE_ORDER);
    let mut y = v.to_vec();
    for _ in 0..k {
        y = x.left_mul(&y);
    }
    y
}

/// Mutual-reachability classes with no outgoing arcs, via boolean transitive
/// closure. The brute-force counterpart of the condensation-sink computation.
pub fn reachability_sinks(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    assert!(n <= 12, "reachability oracle limited to 12 nodes");
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        reach[i][i] = true;
    }
    for e in g.edges() {
        if e.weight > 0.0 {
            reach[e.src][e.dst] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }

    let mut assigned = vec![false; n];
    let mut sinks = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &class {
            assigned[j] = true;
        }
        let is_sink = class
            .iter()
            .all(|&u| (0..n).all(|w| !reach[u][w] || class.contains(&w)));
        if is_sink {
            sinks.push(class);
        }
    }
    sinks
}
