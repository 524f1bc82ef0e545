//! Embedded invariant suite behind the `selftest` subcommand.
//!
//! Runs seeded checks of the core identities on generated graphs and prints
//! one line per check; the log is byte-identical across runs for a fixed
//! seed. Returns exit code 0 when everything holds and 3 otherwise.

use std::io::Write;

use pprank_core::oracle::{reachability_sinks, DenseMatrix};
use pprank_core::{
    apply_resolvent_linear, classify_fixed_points, feedback_iterate, graph_of_rows,
    is_fixed_point, norm1, norm1_diff, resolve_dangling, row_normalize, DanglingPolicy,
    PageRankConfig, ResolventConfig,
};

use crate::gen;
use crate::io::{EXIT_INTERNAL, EXIT_OK};

struct Reporter<'a, W: Write> {
    out: &'a mut W,
    failures: usize,
    checks: usize,
}

impl<W: Write> Reporter<'_, W> {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
        }
        let status = if ok { "ok" } else { "FAIL" };
        writeln!(self.out, "check {name}: {status} ({detail})").expect("write selftest log");
    }
}

/// Runs the suite. `inject_fault` perturbs a row sum before the first check,
/// as a negative control that must drive the exit code to 3.
pub fn run(seed: u64, inject_fault: bool, out: &mut impl Write) -> i32 {
    writeln!(out, "selftest: seed={seed}").expect("write selftest log");
    let mut r = Reporter {
        out,
        failures: 0,
        checks: 0,
    };

    // Resolvent rows keep unit sum for stochastic inputs.
    {
        let mut rng = gen::rng(seed ^ 0x01);
        let mut max_dev = 0.0f64;
        for case in 0..3 {
            let g = gen::strongly_connected(&mut rng, 3 + 2 * case);
            let mut dense = DenseMatrix::from_sparse(&row_normalize(&g));
            if inject_fault && case == 0 {
                dense.set(0, 0, dense.get(0, 0) + 1e-6);
            }
            for lambda in [0.15, 0.5, 0.85] {
                let x = pprank_core::oracle::dense_resolvent(&dense, lambda);
                for i in 0..x.n() {
                    max_dev = max_dev.max((x.row_sum(i) - 1.0).abs());
                }
            }
        }
        r.check(
            "resolvent-row-sums",
            max_dev <= 1e-10,
            format!("max |row sum - 1| = {max_dev:e}"),
        );
    }

    // The resolvent preserves the 1-norm of non-negative vectors.
    {
        let mut rng = gen::rng(seed ^ 0x02);
        let mut max_dev = 0.0f64;
        for _ in 0..5 {
            let n = 2 + (rng_usize(&mut rng) % 9);
            let g = gen::weakly_connected(&mut rng, n);
            let p = resolve_dangling(&row_normalize(&g), &DanglingPolicy::PatchUniform)
                .expect("patching cannot fail");
            let x = gen::distribution(&mut rng, n, false);
            let cfg = ResolventConfig {
                tolerance: 1e-12,
                ..ResolventConfig::new(0.85)
            };
            let y = apply_resolvent_linear(&x, &p, &cfg).expect("resolvent application");
            max_dev = max_dev.max((norm1(&y) - 1.0).abs());
        }
        r.check(
            "resolvent-isometry",
            max_dev <= 1e-10,
            format!("max |mass - 1| = {max_dev:e}"),
        );
    }

    // Disconnected blocks keep exactly their share of the start mass.
    {
        let mut rng = gen::rng(seed ^ 0x03);
        let mut max_dev = 0.0f64;
        for _ in 0..3 {
            let n1 = 2 + rng_usize(&mut rng) % 4;
            let n2 = 2 + rng_usize(&mut rng) % 4;
            let g = gen::two_block_diagonal(&mut rng, n1, n2);
            let v = gen::distribution(&mut rng, n1 + n2, true);
            let cfg = PageRankConfig {
                tolerance: 1e-12,
                ..PageRankConfig::new(0.5, v.clone())
            };
            let trace = feedback_iterate(&row_normalize(&g), &cfg, 0).expect("iteration");
            let mass1: f64 = trace.limit[..n1].iter().sum();
            let want1 = norm1(&v[..n1]) / norm1(&v);
            max_dev = max_dev.max((mass1 - want1).abs());
        }
        r.check(
            "diagonal-mass-split",
            max_dev <= 1e-10,
            format!("max block-mass deviation = {max_dev:e}"),
        );
    }

    // Source-node mass decays exactly like (1-λ)^k.
    {
        let mut rng = gen::rng(seed ^ 0x04);
        let mut max_dev = 0.0f64;
        for lambda in [0.15, 0.5, 0.85] {
            let size = 2 + rng_usize(&mut rng) % 4;
            let g = gen::single_source(&mut rng, size);
            let v = gen::distribution(&mut rng, g.node_count(), true);
            let cfg = PageRankConfig {
                tolerance: 1e-300,
                max_iterations: 30,
                ..PageRankConfig::new(lambda, v)
            };
            let trace = feedback_iterate(&row_normalize(&g), &cfg, 1).expect("iteration");
            let v0 = trace.iterates[0].1[0];
            for &(k, ref xk) in &trace.iterates {
                let want = v0 * (1.0 - lambda).powi(k as i32);
                max_dev = max_dev.max((xk[0] - want).abs());
            }
        }
        r.check(
            "zero-block-decay",
            max_dev <= 1e-12,
            format!("max per-iteration deviation = {max_dev:e}"),
        );
    }

    // Classifier flags match the brute-force sink oracle and the vertices
    // really are fixed points.
    {
        let mut rng = gen::rng(seed ^ 0x05);
        let mut ok = true;
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let n = 2 + rng_usize(&mut rng) % 5;
            let g = gen::weakly_connected(&mut rng, n);
            let report = classify_fixed_points(&g, 0.85, &DanglingPolicy::PatchUniform)
                .expect("classification");
            let patched = resolve_dangling(&row_normalize(&g), &DanglingPolicy::PatchUniform)
                .expect("patching");
            let sinks = reachability_sinks(&graph_of_rows(&patched));
            ok &= report.num_dangling == sinks.len();
            ok &= report.unique == (sinks.len() == 1);
            ok &= report.exists_boundary;
            let p = row_normalize(&g);
            for vertex in &report.vertices {
                let cfg = PageRankConfig::new(0.85, vertex.clone());
                ok &= is_fixed_point(&p, &cfg, 1e-8).expect("fixed point check");
                let pr = pprank_core::pagerank(&p, &cfg).expect("pagerank");
                worst = worst.max(norm1_diff(&pr, vertex));
            }
        }
        r.check(
            "classifier-vs-oracle",
            ok,
            format!("max vertex self-distance = {worst:e}"),
        );
    }

    let (checks, failures) = (r.checks, r.failures);
    writeln!(out, "selftest: {}/{} checks passed", checks - failures, checks)
        .expect("write selftest log");
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    }
}

fn rng_usize(rng: &mut rand_chacha::ChaCha8Rng) -> usize {
    use rand::Rng;
    rng.gen_range(0..usize::MAX / 2)
}
