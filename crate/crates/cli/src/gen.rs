//! Seeded random graph generation for `selftest`, the acceptance suite and
//! the benchmarks. Everything is deterministic for a fixed seed.

use pprank_core::{Edge, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Random distribution over `n` nodes. With `strict` every entry is positive;
/// otherwise roughly a quarter of the entries are zeroed.
pub fn distribution(rng: &mut ChaCha8Rng, n: usize, strict: bool) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                if strict || rng.gen::<f64>() > 0.25 {
                    1e-3 + rng.gen::<f64>()
                } else {
                    0.0
                }
            })
            .collect();
        let s: f64 = v.iter().sum();
        if s > 0.0 {
            for x in &mut v {
                *x /= s;
            }
            return v;
        }
    }
}

/// Appends a strongly connected block over ids `[offset, offset+size)`:
/// a random cycle plus chords, or a self-loop for a single node.
pub fn block_on(rng: &mut ChaCha8Rng, offset: usize, size: usize, edges: &mut Vec<Edge>) {
    if size == 1 {
        edges.push(Edge {
            src: offset,
            dst: offset,
            weight: 0.5 + rng.gen::<f64>(),
        });
        return;
    }
    let perm = shuffled(rng, size);
    for i in 0..size {
        edges.push(Edge {
            src: offset + perm[i],
            dst: offset + perm[(i + 1) % size],
            weight: 0.5 + rng.gen::<f64>(),
        });
    }
    for _ in 0..rng.gen_range(0..=size) {
        edges.push(Edge {
            src: offset + rng.gen_range(0..size),
            dst: offset + rng.gen_range(0..size),
            weight: 0.25 + rng.gen::<f64>(),
        });
    }
}

/// Strongly connected digraph on `n` nodes.
pub fn strongly_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    block_on(rng, 0, n, &mut edges);
    for _ in 0..rng.gen_range(0..=n) {
        edges.push(Edge {
            src: rng.gen_range(0..n),
            dst: rng.gen_range(0..n),
            weight: 0.25 + rng.gen::<f64>(),
        });
    }
    Graph::new(n, edges).unwrap()
}

/// Connected graph with a symmetric weight matrix (tree plus mirrored arcs).
pub fn connected_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    let push_pair = |rng: &mut ChaCha8Rng, a: usize, b: usize, edges: &mut Vec<Edge>| {
        let w = 0.5 + rng.gen::<f64>();
        edges.push(Edge { src: a, dst: b, weight: w });
        edges.push(Edge { src: b, dst: a, weight: w });
    };
    for v in 1..n {
        let p = rng.gen_range(0..v);
        push_pair(rng, v, p, &mut edges);
    }
    for _ in 0..rng.gen_range(0..=n) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            push_pair(rng, a, b, &mut edges);
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Strongly connected digraph with equal in- and out-degrees at every node:
/// an overlay of directed cycles, the first of which spans all nodes.
pub fn balanced_strongly_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    let cycles = rng.gen_range(1..=3);
    for c in 0..cycles {
        let w = (1 + rng.gen_range(0..3)) as f64;
        let nodes = shuffled(rng, n);
        let len = if c == 0 { n } else { rng.gen_range(2..=n) };
        for i in 0..len {
            edges.push(Edge {
                src: nodes[i],
                dst: nodes[(i + 1) % len],
                weight: w,
            });
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Balanced graph plus one extra arc, which breaks the degree balance while
/// keeping strong connectivity.
pub fn unbalanced_strongly_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let base = balanced_strongly_connected(rng, n);
    let mut edges: Vec<Edge> = base.edges().to_vec();
    let src = rng.gen_range(0..n);
    let dst = (src + rng.gen_range(1..n)) % n;
    edges.push(Edge { src, dst, weight: 1.5 });
    Graph::new(n, edges).unwrap()
}

/// Two strongly connected blocks `[0, n1)` and `[n1, n1+n2)` with no arcs
/// between them.
pub fn two_block_diagonal(rng: &mut ChaCha8Rng, n1: usize, n2: usize) -> Graph {
    let mut edges = Vec::new();
    block_on(rng, 0, n1, &mut edges);
    block_on(rng, n1, n2, &mut edges);
    Graph::new(n1 + n2, edges).unwrap()
}

/// Node 0 is a source feeding a strongly connected block on `1..=m`.
pub fn single_source(rng: &mut ChaCha8Rng, m: usize) -> Graph {
    let mut edges = Vec::new();
    block_on(rng, 1, m, &mut edges);
    for _ in 0..rng.gen_range(1..=2) {
        edges.push(Edge {
            src: 0,
            dst: 1 + rng.gen_range(0..m),
            weight: 0.5 + rng.gen::<f64>(),
        });
    }
    Graph::new(m + 1, edges).unwrap()
}

/// One diagonal block of a generated reducible graph.
#[derive(Debug, Clone)]
pub struct PlannedBlock {
    pub nodes: Vec<usize>,
    pub dangling: bool,
}

/// Reducible graph with `l` transient blocks followed by `m` dangling
/// blocks, every block of size `1..=max_block`. Cross arcs only run from
/// transient blocks to strictly later blocks, so the planned blocks are
/// exactly the SCCs and no row is dangling.
pub fn reducible_blocks(
    rng: &mut ChaCha8Rng,
    l: usize,
    m: usize,
    max_block: usize,
) -> (Graph, Vec<PlannedBlock>) {
    assert!(m >= 1);
    let mut plan = Vec::new();
    let mut off = 0usize;
    for i in 0..l + m {
        let dangling = i >= l;
        let size = rng.gen_range(1..=max_block);
        plan.push(PlannedBlock {
            nodes: (off..off + size).collect(),
            dangling,
        });
        off += size;
    }
    let mut edges = Vec::new();
    for (i, block) in plan.iter().enumerate() {
        let size = block.nodes.len();
        let offset = block.nodes[0];
        // A transient single node may stay a trivial (self-loop-free) block.
        if block.dangling || size > 1 || rng.gen_bool(0.5) {
            block_on(rng, offset, size, &mut edges);
        }
        if !block.dangling {
            for _ in 0..rng.gen_range(1..=3) {
                let target = &plan[rng.gen_range(i + 1..plan.len())];
                edges.push(Edge {
                    src: offset + rng.gen_range(0..size),
                    dst: target.nodes[0] + rng.gen_range(0..target.nodes.len()),
                    weight: 0.4 + rng.gen::<f64>(),
                });
            }
        }
    }
    (Graph::new(off, edges).unwrap(), plan)
}

/// Arbitrary weakly connected digraph; dangling nodes allowed.
pub fn weakly_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let m = rng.gen_range(n.max(2) - 1..=2 * n + 1);
        let edges: Vec<Edge> = (0..m)
            .map(|_| Edge {
                src: rng.gen_range(0..n),
                dst: rng.gen_range(0..n),
                weight: 0.25 + rng.gen::<f64>(),
            })
            .collect();
        let Ok(g) = Graph::new(n, edges) else { continue };
        if is_weakly_connected(&g) {
            return g;
        }
    }
}

fn is_weakly_connected(g: &Graph) -> bool {
    let n = g.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for e in g.edges() {
        if e.weight > 0.0 {
            let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.dst));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}
