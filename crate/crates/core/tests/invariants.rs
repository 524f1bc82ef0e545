//! Seeded numeric invariants: oracle agreement, degree shortcuts, decay laws,
//! mass bookkeeping and the fixed-point polytope.

mod common;

use common::{block_on, connected_symmetric, digraph, distribution, rng, strongly_connected};
use pprank_core::oracle::{dense_power_limit, dense_resolvent, reachability_sinks, DenseMatrix};
use pprank_core::{
    apply_resolvent, classify_fixed_points, dangling_clusters, degree_perron_eulerian,
    degree_perron_undirected, degrees, feedback_iterate, graph_of_rows, is_fixed_point,
    left_perron, norm1, norm1_diff, normal_form, pagerank, predict_limit, resolve_dangling,
    row_normalize, scc, DanglingPolicy, Edge, Graph, PageRankConfig, ResolventConfig,
    ResolventMethod,
};
use rand::Rng;

#[test]
fn sparse_resolvent_matches_dense_oracle() {
    let mut rng = rng(11);
    for case in 0..50 {
        let n = rng.gen_range(2..=20);
        let g = digraph(&mut rng, n);
        let p = resolve_dangling(&row_normalize(&g), &DanglingPolicy::PatchUniform).unwrap();
        let dense = DenseMatrix::from_sparse(&p);
        let lambda = [0.15, 0.5, 0.85, 0.99][case % 4];
        let x = distribution(&mut rng, n, false);

        let resolvent = dense_resolvent(&dense, lambda);
        let want = resolvent.left_mul(&x);
        for method in [ResolventMethod::DirectSolve, ResolventMethod::NeumannSeries] {
            let cfg = ResolventConfig {
                method,
                tolerance: 1e-12,
                ..ResolventConfig::new(lambda)
            };
            let got = apply_resolvent(&x, &p, &cfg).unwrap();
            assert!(
                norm1_diff(&got, &want) <= 1e-9,
                "case {case}: {method:?} disagrees with dense oracle by {:e}",
                norm1_diff(&got, &want)
            );
        }
        for i in 0..n {
            assert!((resolvent.row_sum(i) - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn neumann_partial_sums_respect_tail_bound() {
    let mut rng = rng(12);
    for _ in 0..10 {
        let n = rng.gen_range(2..=10);
        let g = digraph(&mut rng, n);
        let p = resolve_dangling(&row_normalize(&g), &DanglingPolicy::PatchUniform).unwrap();
        let dense = DenseMatrix::from_sparse(&p);
        for lambda in [0.3, 0.7] {
            let x = dense_resolvent(&dense, lambda);
            // S_K = (1-λ) Σ_{i<=K} (λP)^i, accumulated term by term.
            let mut term = DenseMatrix::identity(n);
            let mut partial = DenseMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    partial.set(i, j, (1.0 - lambda) * term.get(i, j));
                }
            }
            for k in 0..40usize {
                let max_row_err = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| (x.get(i, j) - partial.get(i, j)).abs())
                            .sum::<f64>()
                    })
                    .fold(0.0f64, f64::max);
                let bound = lambda.powi(k as i32 + 1);
                assert!(
                    max_row_err <= bound + 1e-12,
                    "partial sum error {max_row_err:e} exceeds tail bound {bound:e} at K={k}"
                );
                // term <- λ P · term_prev  (λ^{k+1} P^{k+1})
                let mut next = DenseMatrix::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = 0.0;
                        for l in 0..n {
                            acc += term.get(i, l) * dense.get(l, j);
                        }
                        next.set(i, j, lambda * acc);
                    }
                }
                term = next;
                for i in 0..n {
                    for j in 0..n {
                        partial.set(i, j, partial.get(i, j) + (1.0 - lambda) * term.get(i, j));
                    }
                }
            }
        }
    }
}

#[test]
fn reachability_oracle_matches_dangling_clusters() {
    let mut rng = rng(13);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let g = digraph(&mut rng, n);
        let d = scc(&g);
        let got: Vec<Vec<usize>> = dangling_clusters(&d, &g)
            .into_iter()
            .map(|c| d.components[c].clone())
            .collect();
        assert_eq!(got, reachability_sinks(&g));
    }
}

#[test]
fn degree_vector_is_left_eigenvector_of_symmetric_graphs() {
    let mut rng = rng(14);
    for _ in 0..15 {
        let n = rng.gen_range(2..=12);
        let g = connected_symmetric(&mut rng, n);
        let d = degrees(&g);
        let scaled: Vec<f64> = d
            .out_degree
            .iter()
            .map(|k| k / d.edge_weight_total)
            .collect();
        let shortcut = degree_perron_undirected(&g).unwrap();
        assert_eq!(scaled, shortcut);
        let c = left_perron(&row_normalize(&g), 1e-12, 200_000).unwrap();
        assert!(norm1_diff(&c.vector, &shortcut) <= 1e-8);
    }
}

#[test]
fn eulerian_shortcut_agrees_with_perron_on_balanced_graphs() {
    let mut rng = rng(15);
    for _ in 0..10 {
        // Union of directed cycles over the same node set is balanced.
        let n = rng.gen_range(3..=10);
        let mut edges = Vec::new();
        let cycles = rng.gen_range(1..=3);
        for c in 0..cycles {
            let w = 1.0 + c as f64;
            let mut nodes: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                nodes.swap(i, j);
            }
            let len = if c == 0 { n } else { rng.gen_range(2..=n) };
            for i in 0..len {
                edges.push(Edge {
                    src: nodes[i],
                    dst: nodes[(i + 1) % len],
                    weight: w,
                });
            }
        }
        let g = Graph::new(n, edges).unwrap();
        let shortcut = degree_perron_eulerian(&g)
            .unwrap()
            .expect("cycle unions are balanced");
        let c = left_perron(&row_normalize(&g), 1e-12, 200_000).unwrap();
        assert!(norm1_diff(&c.vector, &shortcut) <= 1e-8);
    }
}

#[test]
fn source_block_decays_geometrically() {
    let mut rng = rng(16);
    for lambda in [0.15, 0.5, 0.85] {
        let m = rng.gen_range(2..=6);
        let mut edges = Vec::new();
        block_on(&mut rng, 1, m, &mut edges);
        for _ in 0..rng.gen_range(1..=2) {
            edges.push(Edge {
                src: 0,
                dst: rng.gen_range(1..=m),
                weight: 0.5 + rng.gen::<f64>(),
            });
        }
        let g = Graph::new(m + 1, edges).unwrap();
        let p = row_normalize(&g);
        let v = distribution(&mut rng, m + 1, true);
        let cfg = PageRankConfig {
            tolerance: 1e-300,
            max_iterations: 50,
            ..PageRankConfig::new(lambda, v)
        };
        let trace = feedback_iterate(&p, &cfg, 1).unwrap();
        let v0 = trace.iterates[0].1[0];
        for &(k, ref xk) in &trace.iterates {
            let want = v0 * (1.0 - lambda).powi(k as i32);
            assert!(
                (xk[0] - want).abs() <= 1e-12,
                "lambda {lambda}: source mass at k={k} is {} want {}",
                xk[0],
                want
            );
        }
    }
}

#[test]
fn limits_are_personalization_independent_when_irreducible() {
    let mut rng = rng(17);
    for _ in 0..6 {
        let n = rng.gen_range(3..=20);
        let g = strongly_connected(&mut rng, n);
        let p = row_normalize(&g);
        let c = left_perron(&p, 1e-12, 200_000).unwrap().vector;
        for lambda in [0.15, 0.5, 0.85] {
            let mut limits = Vec::new();
            for _ in 0..3 {
                let v = distribution(&mut rng, n, true);
                let cfg = PageRankConfig {
                    tolerance: 1e-11,
                    ..PageRankConfig::new(lambda, v)
                };
                let trace = feedback_iterate(&p, &cfg, 0).unwrap();
                assert!(trace.converged);
                assert!(norm1_diff(&trace.limit, &c) <= 1e-8);
                limits.push(trace.limit);
            }
            for a in &limits {
                for b in &limits {
                    assert!(norm1_diff(a, b) <= 1e-8);
                }
            }
        }
    }
}

#[test]
fn diagonal_blocks_split_mass_exactly() {
    let mut rng = rng(18);
    for _ in 0..10 {
        let n1 = rng.gen_range(2..=6);
        let n2 = rng.gen_range(2..=6);
        let mut edges = Vec::new();
        block_on(&mut rng, 0, n1, &mut edges);
        block_on(&mut rng, n1, n2, &mut edges);
        let g = Graph::new(n1 + n2, edges).unwrap();
        let p = row_normalize(&g);
        let v = distribution(&mut rng, n1 + n2, true);
        let cfg = PageRankConfig {
            tolerance: 1e-12,
            ..PageRankConfig::new(0.5, v.clone())
        };
        let trace = feedback_iterate(&p, &cfg, 0).unwrap();
        assert!(trace.converged);
        let mass1: f64 = trace.limit[..n1].iter().sum();
        let mass2: f64 = trace.limit[n1..].iter().sum();
        let v1 = norm1(&v[..n1]) / norm1(&v);
        let v2 = norm1(&v[n1..]) / norm1(&v);
        assert!((mass1 - v1).abs() <= 1e-10);
        assert!((mass2 - v2).abs() <= 1e-10);

        // Per-block direction equals the block Perron vector.
        let block1 = p.restrict(&(0..n1).collect::<Vec<_>>()).unwrap();
        let c1 = left_perron(&block1, 1e-12, 200_000).unwrap().vector;
        let dir1: Vec<f64> = trace.limit[..n1].iter().map(|x| x / mass1).collect();
        assert!(norm1_diff(&dir1, &c1) <= 1e-8);
    }
}

#[test]
fn iterates_keep_unit_mass_and_monotone_dangling_mass() {
    let mut rng = rng(19);
    for _ in 0..10 {
        let n = rng.gen_range(2..=10);
        let g = digraph(&mut rng, n);
        let p = row_normalize(&g);
        let v = distribution(&mut rng, n, false);
        let cfg = PageRankConfig {
            tolerance: 1e-11,
            ..PageRankConfig::new(0.85, v)
        };
        let trace = feedback_iterate(&p, &cfg, 1).unwrap();
        for (_, xk) in &trace.iterates {
            assert!((norm1(xk) - 1.0).abs() <= 1e-10);
        }
        let patched = resolve_dangling(&p, &DanglingPolicy::PatchUniform).unwrap();
        let gr = graph_of_rows(&patched);
        let nf = normal_form(&scc(&gr), &gr);
        for (b, block) in nf.blocks.iter().enumerate() {
            if !block.dangling {
                continue;
            }
            for w in trace.cluster_mass.windows(2) {
                assert!(w[1][b] >= w[0][b] - 1e-12);
            }
        }
    }
}

#[test]
fn predict_limit_matches_iteration_on_random_reducible_graphs() {
    let mut rng = rng(20);
    for case in 0..10 {
        let l = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=3);
        let mut sizes = Vec::new();
        for _ in 0..l {
            sizes.push((false, rng.gen_range(1..=4)));
        }
        for _ in 0..m {
            sizes.push((true, rng.gen_range(1..=4)));
        }
        let mut edges = Vec::new();
        let mut offsets = Vec::new();
        let mut off = 0;
        for &(dangling, s) in &sizes {
            offsets.push((dangling, off, s));
            if dangling || s > 1 || rng.gen_bool(0.5) {
                block_on(&mut rng, off, s, &mut edges);
            }
            off += s;
        }
        let n = off;
        for (i, &(dangling, boff, bsize)) in offsets.iter().enumerate() {
            if dangling {
                continue;
            }
            for _ in 0..rng.gen_range(1..=3) {
                let (_, toff, tsize) = offsets[rng.gen_range(i + 1..offsets.len())];
                edges.push(Edge {
                    src: boff + rng.gen_range(0..bsize),
                    dst: toff + rng.gen_range(0..tsize),
                    weight: 0.4 + rng.gen::<f64>(),
                });
            }
        }
        let g = Graph::new(n, edges).unwrap();
        let p = row_normalize(&g);
        assert!(!p.has_dangling(), "case {case}: generator left a dangling row");
        let nf = normal_form(&scc(&g), &g);
        let v = distribution(&mut rng, n, true);
        let lambda = [0.15, 0.5, 0.85][case % 3];

        let predicted = predict_limit(&p, &nf, &v, lambda).unwrap();
        let cfg = PageRankConfig {
            tolerance: 1e-12,
            ..PageRankConfig::new(lambda, v)
        };
        let trace = feedback_iterate(&p, &cfg, 0).unwrap();
        assert!(trace.converged, "case {case} did not converge");
        assert!(
            norm1_diff(&predicted, &trace.limit) <= 1e-7,
            "case {case}: prediction off by {:e}",
            norm1_diff(&predicted, &trace.limit)
        );
        assert!((norm1(&predicted) - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn fixed_point_polytope_membership() {
    let mut rng = rng(21);
    // Transient pair feeding a sink pair: L = 1, M = 1.
    let chained = Graph::new(
        4,
        [(0, 1), (1, 0), (0, 2), (2, 3), (3, 2)]
            .iter()
            .map(|&(src, dst)| Edge { src, dst, weight: 1.0 })
            .collect(),
    )
    .unwrap();
    // Two disjoint cycles: L = 0, M = 2.
    let disjoint = Graph::new(
        4,
        [(0, 1), (1, 0), (2, 3), (3, 2)]
            .iter()
            .map(|&(src, dst)| Edge { src, dst, weight: 1.0 })
            .collect(),
    )
    .unwrap();

    for g in [&chained, &disjoint] {
        let p = row_normalize(g);
        let report = classify_fixed_points(g, 0.85, &DanglingPolicy::PatchUniform).unwrap();
        for _ in 0..10 {
            // Random convex combination of the vertices is a fixed point.
            let mut weights: Vec<f64> = (0..report.vertices.len())
                .map(|_| rng.gen::<f64>() + 1e-3)
                .collect();
            let s: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= s;
            }
            let mut combo = vec![0.0; g.node_count()];
            for (w, vertex) in weights.iter().zip(&report.vertices) {
                for (c, x) in combo.iter_mut().zip(vertex) {
                    *c += w * x;
                }
            }
            let cfg = PageRankConfig::new(0.85, combo);
            assert!(is_fixed_point(&p, &cfg, 1e-8).unwrap());
        }
    }

    // With a non-dangling cluster present, distributions carrying transient
    // mass are not fixed points.
    let p = row_normalize(&chained);
    for _ in 0..10 {
        let mut v = distribution(&mut rng, 4, true);
        v[0] += 0.1;
        let s = norm1(&v);
        for x in &mut v {
            *x /= s;
        }
        let cfg = PageRankConfig::new(0.85, v);
        assert!(!is_fixed_point(&p, &cfg, 1e-8).unwrap());
    }
}

#[test]
fn pagerank_agrees_with_dense_power_iteration() {
    let mut rng = rng(22);
    for _ in 0..5 {
        let n = rng.gen_range(3..=12);
        let g = strongly_connected(&mut rng, n);
        let p = row_normalize(&g);
        let v = distribution(&mut rng, n, true);
        let cfg = PageRankConfig::new(0.5, v.clone());
        let pr = pagerank(&p, &cfg).unwrap();

        let dense = DenseMatrix::from_sparse(&p);
        let x = dense_resolvent(&dense, 0.5);
        let want = dense_power_limit(&x, &v, 1);
        let scale = norm1(&want);
        let want: Vec<f64> = want.iter().map(|w| w / scale).collect();
        assert!(norm1_diff(&pr, &want) <= 1e-9);
    }
}
