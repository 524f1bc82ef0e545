//! Strongly connected components, condensation and the block normal form.
//!
//! The normal form permutes nodes so the transition matrix becomes block
//! upper-triangular with every diagonal block irreducible (or a lone node
//! without a self-loop), and all sink components — the dangling clusters —
//! grouped in the last rows.

use std::collections::BTreeSet;

use crate::graph::{degrees, Graph, RowStochastic, TIGHT_TOL};

/// Strongly connected components plus the condensation DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Node lists, each ascending; components ordered by smallest member id.
    pub components: Vec<Vec<usize>>,
    /// Component index of each node.
    pub component_of: Vec<usize>,
    /// Arcs of the condensation DAG (no self-pairs).
    pub condensation_edges: BTreeSet<(usize, usize)>,
    /// Per component: single node without a positive self-loop
    /// (a null diagonal block of order 1).
    pub is_trivial: Vec<bool>,
}

/// Computes maximal SCCs with a single-pass iterative Tarjan walk.
///
/// Only positive-weight edges count as links. Components are re-indexed by
/// their smallest node id so the output is canonical.
pub fn scc(g: &Graph) -> SccDecomposition {
    let n = g.node_count();
    let adj = g.adjacency();

    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut components: Vec<Vec<usize>> = Vec::new();

    // Explicit DFS frames: (node, position in its adjacency list).
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        frames.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }

    components.sort_by_key(|c| c[0]);
    let mut component_of = vec![usize::MAX; n];
    for (cid, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = cid;
        }
    }

    let mut condensation_edges = BTreeSet::new();
    for e in g.edges() {
        if e.weight > 0.0 {
            let (cu, cv) = (component_of[e.src], component_of[e.dst]);
            if cu != cv {
                condensation_edges.insert((cu, cv));
            }
        }
    }

    let is_trivial = components
        .iter()
        .map(|c| c.len() == 1 && !g.has_self_loop(c[0]))
        .collect();

    SccDecomposition {
        components,
        component_of,
        condensation_edges,
        is_trivial,
    }
}

/// Indices of the sink components of the condensation, ascending.
///
/// These are the dangling clusters: node groups with no out-links to any
/// other cluster.
pub fn dangling_clusters(d: &SccDecomposition, _g: &Graph) -> Vec<usize> {
    let mut has_out = vec![false; d.components.len()];
    for &(from, _) in &d.condensation_edges {
        has_out[from] = true;
    }
    (0..d.components.len()).filter(|&c| !has_out[c]).collect()
}

/// One diagonal block of the normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalBlock {
    /// Original node ids, ascending.
    pub nodes: Vec<usize>,
    /// Sink component of the condensation.
    pub dangling: bool,
    /// A lone node without a self-loop (null block of order 1).
    pub trivial: bool,
}

/// Permutation into block upper-triangular form with dangling clusters last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    /// New position -> original node id.
    pub permutation: Vec<usize>,
    /// Diagonal blocks in permuted order: non-dangling first, then dangling.
    pub blocks: Vec<NormalBlock>,
}

impl NormalForm {
    /// Number of non-dangling diagonal blocks.
    pub fn num_nondangling(&self) -> usize {
        self.blocks.iter().filter(|b| !b.dangling).count()
    }

    /// Number of dangling clusters.
    pub fn num_dangling(&self) -> usize {
        self.blocks.iter().filter(|b| b.dangling).count()
    }

    /// Sizes `n_1..n_L` of the non-dangling blocks.
    pub fn nondangling_sizes(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter(|b| !b.dangling)
            .map(|b| b.nodes.len())
            .collect()
    }

    /// Sizes `m_1..m_M` of the dangling blocks.
    pub fn dangling_sizes(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter(|b| b.dangling)
            .map(|b| b.nodes.len())
            .collect()
    }
}

/// Orders the components into the normal form.
///
/// Non-dangling blocks come first, in a topological order of the condensation
/// with ties broken by smallest original node id; dangling blocks follow,
/// ordered by smallest original node id. Nodes keep ascending id order inside
/// each block.
pub fn normal_form(d: &SccDecomposition, g: &Graph) -> NormalForm {
    let ncomp = d.components.len();
    let sinks: Vec<usize> = dangling_clusters(d, g);
    let is_sink = {
        let mut v = vec![false; ncomp];
        for &s in &sinks {
            v[s] = true;
        }
        v
    };

    // Kahn's algorithm over the non-sink part of the condensation, always
    // releasing the candidate whose block holds the smallest node id.
    let mut indeg = vec![0usize; ncomp];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for &(from, to) in &d.condensation_edges {
        if !is_sink[from] && !is_sink[to] {
            out[from].push(to);
            indeg[to] += 1;
        }
    }
    let mut ready: BTreeSet<(usize, usize)> = (0..ncomp)
        .filter(|&c| !is_sink[c] && indeg[c] == 0)
        .map(|c| (d.components[c][0], c))
        .collect();
    let mut order: Vec<usize> = Vec::with_capacity(ncomp);
    while let Some(&(key, c)) = ready.iter().next() {
        ready.remove(&(key, c));
        order.push(c);
        for &t in &out[c] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.insert((d.components[t][0], t));
            }
        }
    }
    debug_assert_eq!(order.len() + sinks.len(), ncomp);
    order.extend(&sinks); // sinks already ascend by component id = min node id

    let mut permutation = Vec::with_capacity(g.node_count());
    let mut blocks = Vec::with_capacity(ncomp);
    for &c in &order {
        permutation.extend(&d.components[c]);
        blocks.push(NormalBlock {
            nodes: d.components[c].clone(),
            dangling: is_sink[c],
            trivial: d.is_trivial[c],
        });
    }
    let nf = NormalForm { permutation, blocks };
    debug_assert!(block_pattern_holds(g, &nf));
    nf
}

/// Checks the permuted matrix pattern: exact zeros below the diagonal blocks,
/// and no mass leaving any dangling block.
pub fn block_pattern_holds(g: &Graph, nf: &NormalForm) -> bool {
    let n = g.node_count();
    let mut block_of = vec![usize::MAX; n];
    for (b, block) in nf.blocks.iter().enumerate() {
        for &v in &block.nodes {
            block_of[v] = b;
        }
    }
    if block_of.iter().any(|&b| b == usize::MAX) {
        return false;
    }
    for e in g.edges() {
        if e.weight <= 0.0 {
            continue;
        }
        let (bs, bd) = (block_of[e.src], block_of[e.dst]);
        if bd < bs {
            return false; // entry below the diagonal blocks
        }
        if nf.blocks[bs].dangling && bd != bs {
            return false; // dangling block with an off-block row entry
        }
    }
    true
}

/// True when every node has equal weighted in- and out-degree within 1e-12.
///
/// For a strongly connected graph this is equivalent to the existence of a
/// closed Eulerian path; for other graphs it is just the balance test.
pub fn is_eulerian_balanced(g: &Graph) -> bool {
    let d = degrees(g);
    d.out_degree
        .iter()
        .zip(&d.in_degree)
        .all(|(o, i)| (o - i).abs() <= TIGHT_TOL)
}

/// Row-stochastic matrix reinterpreted as a weighted graph, so the structural
/// machinery (SCC, normal form) applies to patched matrices too.
pub fn graph_of_rows(p: &RowStochastic) -> Graph {
    let mut edges = Vec::new();
    for (i, row) in p.rows().iter().enumerate() {
        for &(c, v) in row {
            edges.push(crate::graph::Edge {
                src: i,
                dst: c,
                weight: v,
            });
        }
    }
    Graph::new(p.n(), edges).expect("row-stochastic matrix is a valid graph")
}
