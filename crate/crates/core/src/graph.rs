//! Weighted directed graphs, edge-list parsing and row normalization.
//!
//! A [`Graph`] is an immutable weighted digraph over nodes `0..N`. Parallel
//! edges are merged at construction by summing weights, so the edge list is
//! exactly the sparse non-negative adjacency matrix. [`row_normalize`] turns
//! it into the row-stochastic transition matrix, flagging all-zero rows as
//! dangling.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Absolute tolerance used for exact-by-construction float identities
/// (row sums, symmetry, degree balance).
pub const TIGHT_TOL: f64 = 1e-12;

/// A single weighted arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

/// Immutable weighted directed graph with nodes `0..node_count`.
///
/// Duplicate `(src, dst)` pairs are merged by summing weights and the edge
/// list is kept sorted by `(src, dst)`, so two graphs with the same weighted
/// adjacency compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from raw edges, merging duplicates.
    ///
    /// Fails when `node_count` is zero, an endpoint is out of range, a weight
    /// is negative or non-finite, or the graph has more than one node but no
    /// positive-weight edge at all.
    pub fn new(node_count: usize, raw_edges: Vec<Edge>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidInput("node count must be positive".into()));
        }
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for e in &raw_edges {
            if e.src >= node_count || e.dst >= node_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) out of range for {} nodes",
                    e.src, e.dst, node_count
                )));
            }
            if !e.weight.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) has non-finite weight",
                    e.src, e.dst
                )));
            }
            if e.weight < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) has negative weight {}",
                    e.src, e.dst, e.weight
                )));
            }
            *merged.entry((e.src, e.dst)).or_insert(0.0) += e.weight;
        }
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((src, dst), weight)| Edge { src, dst, weight })
            .collect();
        if node_count > 1 && !edges.iter().any(|e| e.weight > 0.0) {
            return Err(Error::InvalidInput(
                "graph with more than one node needs at least one positive-weight edge".into(),
            ));
        }
        Ok(Graph { node_count, edges })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Merged edges, sorted by `(src, dst)`. May contain zero-weight entries
    /// that were explicitly listed; these are structural zeros everywhere.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Adjacency lists over positive-weight edges only, targets ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            if e.weight > 0.0 {
                adj[e.src].push(e.dst);
            }
        }
        adj
    }

    /// True when node `i` carries a positive-weight self-loop.
    pub fn has_self_loop(&self, i: usize) -> bool {
        self.edges
            .iter()
            .any(|e| e.src == i && e.dst == i && e.weight > 0.0)
    }

    /// Weighted adjacency entry `a_ij` (0 when absent).
    pub fn weight(&self, src: usize, dst: usize) -> f64 {
        match self
            .edges
            .binary_search_by(|e| (e.src, e.dst).cmp(&(src, dst)))
        {
            Ok(k) => self.edges[k].weight,
            Err(_) => 0.0,
        }
    }

    /// True when the weighted adjacency matrix is symmetric within 1e-12.
    pub fn is_symmetric(&self) -> bool {
        self.edges
            .iter()
            .all(|e| (e.weight - self.weight(e.dst, e.src)).abs() <= TIGHT_TOL)
    }
}

/// Weighted in/out degree sums of a [`Graph`].
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSummary {
    /// Weighted row sums of the adjacency matrix.
    pub out_degree: Vec<f64>,
    /// Weighted column sums.
    pub in_degree: Vec<f64>,
    /// Row sums again, but only populated when the weight matrix is
    /// symmetric within 1e-12 (the undirected degree).
    pub undirected_degree: Option<Vec<f64>>,
    /// Total weight over all arcs; equals the arc count for unit weights.
    pub edge_weight_total: f64,
}

/// Computes weighted degree sums.
pub fn degrees(g: &Graph) -> DegreeSummary {
    let n = g.node_count();
    let mut out_degree = vec![0.0; n];
    let mut in_degree = vec![0.0; n];
    let mut total = 0.0;
    for e in g.edges() {
        out_degree[e.src] += e.weight;
        in_degree[e.dst] += e.weight;
        total += e.weight;
    }
    let undirected_degree = if g.is_symmetric() {
        Some(out_degree.clone())
    } else {
        None
    };
    DegreeSummary {
        out_degree,
        in_degree,
        undirected_degree,
        edge_weight_total: total,
    }
}

/// Sparse row-stochastic transition matrix with dangling-row flags.
///
/// Every non-dangling row holds strictly positive probabilities summing to 1
/// within 1e-12; dangling rows are empty.
#[derive(Debug, Clone, PartialEq)]
pub struct RowStochastic {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
    dangling: Vec<bool>,
}

impl RowStochastic {
    /// Validating constructor; columns must be in range and rows either empty
    /// or positive with unit sum.
    pub fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::InvalidInput(format!(
                "expected {} rows, got {}",
                n,
                rows.len()
            )));
        }
        let mut dangling = vec![false; n];
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() {
                dangling[i] = true;
                continue;
            }
            let mut sum = 0.0;
            for &(c, p) in row {
                if c >= n {
                    return Err(Error::InvalidInput(format!(
                        "row {} references column {} out of range",
                        i, c
                    )));
                }
                if !(p > 0.0) || !p.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "row {} has non-positive entry {} at column {}",
                        i, p, c
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > TIGHT_TOL {
                return Err(Error::InvalidInput(format!(
                    "row {} sums to {} (must be 1 within {:e})",
                    i, sum, TIGHT_TOL
                )));
            }
        }
        Ok(RowStochastic { n, rows, dangling })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    /// Dangling-row marker vector `d`.
    pub fn dangling(&self) -> &[bool] {
        &self.dangling
    }

    pub fn has_dangling(&self) -> bool {
        self.dangling.iter().any(|&d| d)
    }

    /// Left product `y = x^T P`. The input length must equal `n`.
    pub fn left_mul(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for (i, row) in self.rows.iter().enumerate() {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for &(c, p) in row {
                y[c] += xi * p;
            }
        }
        y
    }

    /// Sub-matrix induced by `nodes` (which must be closed under transitions,
    /// as dangling-cluster blocks are). Column ids are re-indexed to the
    /// position of each node in `nodes`.
    pub fn restrict(&self, nodes: &[usize]) -> Result<RowStochastic> {
        let mut local = BTreeMap::new();
        for (k, &v) in nodes.iter().enumerate() {
            local.insert(v, k);
        }
        let mut rows = Vec::with_capacity(nodes.len());
        for &v in nodes {
            let mut row = Vec::with_capacity(self.rows[v].len());
            for &(c, p) in &self.rows[v] {
                match local.get(&c) {
                    Some(&lc) => row.push((lc, p)),
                    None => {
                        return Err(Error::InvalidInput(format!(
                            "node {} has transition mass leaving the block",
                            v
                        )))
                    }
                }
            }
            rows.push(row);
        }
        RowStochastic::from_rows(nodes.len(), rows)
    }
}

/// Row-normalizes the weighted adjacency matrix: `p_ij = a_ij / k_out(i)`,
/// with zero rows left empty and flagged dangling.
pub fn row_normalize(g: &Graph) -> RowStochastic {
    let n = g.node_count();
    let mut out = vec![0.0; n];
    for e in g.edges() {
        out[e.src] += e.weight;
    }
    let mut rows = vec![Vec::new(); n];
    for e in g.edges() {
        if e.weight > 0.0 {
            rows[e.src].push((e.dst, e.weight / out[e.src]));
        }
    }
    let dangling: Vec<bool> = rows.iter().map(|r| r.is_empty()).collect();
    RowStochastic { n, rows, dangling }
}

/// Parses the edge-list format: `#` comment lines, an optional
/// `# nodes=N` header before any data, and data lines
/// `src<TAB>dst[<TAB>weight]` (any whitespace accepted as separator).
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut raw = Vec::new();
    let mut max_id: Option<usize> = None;
    let mut seen_data = false;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if !seen_data && declared.is_none() {
                if let Some(value) = comment.strip_prefix("nodes=") {
                    let n: usize = value.trim().parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad node count '{}'", value.trim()),
                    })?;
                    declared = Some(n);
                }
            }
            continue;
        }
        seen_data = true;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 'src dst [weight]', got {} fields", fields.len()),
            });
        }
        let src: usize = fields[0].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad source id '{}'", fields[0]),
        })?;
        let dst: usize = fields[1].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad destination id '{}'", fields[1]),
        })?;
        let weight: f64 = match fields.get(2) {
            Some(w) => w.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad weight '{}'", w),
            })?,
            None => 1.0,
        };
        if !weight.is_finite() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("weight '{}' is not finite", weight),
            });
        }
        if weight < 0.0 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("negative weight {}", weight),
            });
        }
        if let Some(n) = declared {
            if src >= n || dst >= n {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!(
                        "node id {} exceeds declared node count {}",
                        src.max(dst),
                        n
                    ),
                });
            }
        }
        max_id = Some(max_id.map_or(src.max(dst), |m| m.max(src).max(dst)));
        raw.push(Edge { src, dst, weight });
    }

    let node_count = match declared {
        Some(n) => n,
        None => match max_id {
            Some(m) => m + 1,
            None => {
                return Err(Error::InvalidInput(
                    "empty edge list with no '# nodes=N' header".into(),
                ))
            }
        },
    };
    Graph::new(node_count, raw)
}
