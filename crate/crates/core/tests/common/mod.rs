//! Seeded generators shared by the integration suites.
#![allow(dead_code)] // not every suite uses every generator

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

/// Strongly connected digraph: a random full cycle plus random chords.
pub fn strongly_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let perm = shuffled(rng, n);
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push(Edge {
            src: perm[i],
            dst: perm[(i + 1) % n],
            weight: 0.5 + rng.gen::<f64>(),
        });
    }
    for _ in 0..rng.gen_range(n..=2 * n) {
        edges.push(Edge {
            src: rng.gen_range(0..n),
            dst: rng.gen_range(0..n),
            weight: 0.5 + 1.5 * rng.gen::<f64>(),
        });
    }
    Graph::new(n, edges).unwrap()
}

/// Connected symmetric digraph: random tree plus extra mirrored arcs.
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

/// Arbitrary digraph; may contain dangling nodes.
pub fn digraph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let m = rng.gen_range(1..=2 * n + 1);
        let edges: Vec<Edge> = (0..m)
            .map(|_| Edge {
                src: rng.gen_range(0..n),
                dst: rng.gen_range(0..n),
                weight: 0.25 + rng.gen::<f64>(),
            })
            .collect();
        if let Ok(g) = Graph::new(n, edges) {
            return g;
        }
    }
}

/// Random distribution over `n` nodes; strictly positive when asked.
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

/// Strongly connected block on the id range `[offset, offset + size)`,
/// appended onto `edges`.
pub fn block_on(
    rng: &mut ChaCha8Rng,
    offset: usize,
    size: usize,
    edges: &mut Vec<Edge>,
) {
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
