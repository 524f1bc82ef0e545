//! `pprank` — personalized PageRank as a simplex operator: fixed points,
//! feedback iteration, Perron vectors and structural reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use pprank_cli::io::{
    load_graph, load_vector, parse_dangling_spec, CliError, RunManifest, EXIT_INPUT,
    EXIT_NO_CONVERGENCE, EXIT_OK,
};
use pprank_cli::selftest;
use pprank_core::{
    classify_fixed_points, feedback_iterate, left_perron, normal_form, norm1_diff, pagerank,
    row_normalize, scc, FixedPointReport, Graph, IterationTrace, PageRankConfig,
};

#[derive(Parser)]
#[command(
    name = "pprank",
    version,
    about = "Personalized PageRank fixed points: iteration, Perron vectors and structure reports",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// PageRank of a personalization vector: (1-λ) v^T (I - λP)^-1
    Pagerank {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        v: PathBuf,
        /// patch-uniform | reject | patch:<vector file>
        #[arg(long, default_value = "patch-uniform")]
        dangling: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
    },
    /// Feedback iteration x_k^T = x_{k-1}^T X(λ) until convergence
    Iterate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        v: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
        /// Write per-node iterate values as CSV (iter,node,value)
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Keep every k-th iterate in the trace
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// Write per-block 1-norm masses as CSV (iter,block,mass)
        #[arg(long)]
        mass_trace: Option<PathBuf>,
        #[arg(long, default_value = "patch-uniform")]
        dangling: String,
    },
    /// Fixed-point existence/uniqueness report
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value = "patch-uniform")]
        dangling: String,
    },
    /// Left Perron vectors of the normal-form diagonal blocks
    Perron {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        /// Block index in normal-form order, or "all"
        #[arg(long, default_value = "all")]
        block: String,
    },
    /// Permutation to block upper-triangular form, dangling clusters last
    NormalForm {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check whether a candidate vector is a fixed point of PR_λ
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value = "patch-uniform")]
        dangling: String,
    },
    /// Run the embedded invariant suite on seeded random graphs
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Serialize)]
struct PagerankOut {
    vector: Vec<f64>,
    manifest: RunManifest,
}

#[derive(Serialize)]
struct IterateOut {
    limit: Vec<f64>,
    iterations: usize,
    converged: bool,
    manifest: RunManifest,
}

#[derive(Serialize)]
struct AnalyzeOut {
    #[serde(flatten)]
    report: FixedPointReport,
    manifest: RunManifest,
}

#[derive(Serialize)]
struct BlockPerron {
    block: usize,
    nodes: Vec<usize>,
    dangling: bool,
    trivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
}

#[derive(Serialize)]
struct PerronAllOut {
    blocks: Vec<BlockPerron>,
    manifest: RunManifest,
}

#[derive(Serialize)]
struct PerronOneOut {
    #[serde(flatten)]
    block: BlockPerron,
    manifest: RunManifest,
}

#[derive(Serialize)]
struct NormalFormBlockOut {
    nodes: Vec<usize>,
    dangling: bool,
    trivial: bool,
}

#[derive(Serialize)]
struct NormalFormOut {
    permutation: Vec<usize>,
    blocks: Vec<NormalFormBlockOut>,
    #[serde(rename = "L")]
    num_nondangling: usize,
    #[serde(rename = "M")]
    num_dangling: usize,
    manifest: RunManifest,
}

#[derive(Serialize)]
struct VerifyOut {
    fixed_point: bool,
    distance: f64,
    manifest: RunManifest,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(EXIT_OK);
            }
            eprintln!("{e}");
            std::process::exit(EXIT_INPUT);
        }
    };
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    };
    std::process::exit(code);
}

fn emit(value: &impl Serialize) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::input(format!("cannot serialize output: {e}")))?;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = writeln!(stdout, "{json}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(EXIT_OK);
        }
        return Err(CliError::input(format!("cannot write output: {e}")));
    }
    Ok(())
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Pagerank {
            graph,
            lambda,
            v,
            dangling,
            tol,
            max_iter,
        } => {
            let (g, digest) = load_graph(&graph)?;
            let cfg = PageRankConfig {
                lambda,
                personalization: load_vector(&v)?,
                dangling_policy: parse_dangling_spec(&dangling)?,
                tolerance: tol,
                max_iterations: max_iter,
            };
            let vector = pagerank(&row_normalize(&g), &cfg)?;
            let manifest = RunManifest::new("pagerank", digest)
                .param("graph", graph.display())
                .param("lambda", lambda)
                .param("v", v.display())
                .param("dangling", &dangling)
                .param("tol", tol)
                .param("max_iter", max_iter);
            emit(&PagerankOut { vector, manifest })?;
            Ok(EXIT_OK)
        }

        Command::Iterate {
            graph,
            lambda,
            v,
            tol,
            max_iter,
            trace,
            stride,
            mass_trace,
            dangling,
        } => {
            if stride == 0 {
                return Err(CliError::input("stride must be at least 1"));
            }
            let (g, digest) = load_graph(&graph)?;
            let cfg = PageRankConfig {
                lambda,
                personalization: load_vector(&v)?,
                dangling_policy: parse_dangling_spec(&dangling)?,
                tolerance: tol,
                max_iterations: max_iter,
            };
            let store_stride = if trace.is_some() { stride } else { 0 };
            let result = feedback_iterate(&row_normalize(&g), &cfg, store_stride)?;
            if let Some(path) = &trace {
                write_node_trace(path, &result)?;
            }
            if let Some(path) = &mass_trace {
                write_mass_trace(path, &result)?;
            }
            let manifest = RunManifest::new("iterate", digest)
                .param("graph", graph.display())
                .param("lambda", lambda)
                .param("v", v.display())
                .param("tol", tol)
                .param("max_iter", max_iter)
                .param("stride", stride)
                .param("dangling", &dangling);
            let converged = result.converged;
            emit(&IterateOut {
                limit: result.limit,
                iterations: result.residuals.len(),
                converged,
                manifest,
            })?;
            Ok(if converged { EXIT_OK } else { EXIT_NO_CONVERGENCE })
        }

        Command::Analyze {
            graph,
            lambda,
            dangling,
        } => {
            let (g, digest) = load_graph(&graph)?;
            let report = classify_fixed_points(&g, lambda, &parse_dangling_spec(&dangling)?)?;
            let manifest = RunManifest::new("analyze", digest)
                .param("graph", graph.display())
                .param("lambda", lambda)
                .param("dangling", &dangling);
            emit(&AnalyzeOut { report, manifest })?;
            Ok(EXIT_OK)
        }

        Command::Perron {
            graph,
            tol,
            max_iter,
            block,
        } => {
            let (g, digest) = load_graph(&graph)?;
            let nf = normal_form(&scc(&g), &g);
            let manifest = RunManifest::new("perron", digest)
                .param("graph", graph.display())
                .param("tol", tol)
                .param("max_iter", max_iter)
                .param("block", &block);
            if block == "all" {
                let blocks = nf
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(idx, b)| block_perron(&g, idx, b, tol, max_iter))
                    .collect::<Result<Vec<_>, _>>()?;
                emit(&PerronAllOut { blocks, manifest })?;
            } else {
                let idx: usize = block.parse().map_err(|_| {
                    CliError::input(format!("--block must be an index or \"all\", got '{block}'"))
                })?;
                let Some(b) = nf.blocks.get(idx) else {
                    return Err(CliError::input(format!(
                        "block index {idx} out of range; the normal form has {} blocks",
                        nf.blocks.len()
                    )));
                };
                if b.trivial {
                    return Err(CliError::input(format!(
                        "block {idx} is a single node without a self-loop; it has no Perron vector"
                    )));
                }
                let block = block_perron(&g, idx, b, tol, max_iter)?;
                emit(&PerronOneOut { block, manifest })?;
            }
            Ok(EXIT_OK)
        }

        Command::NormalForm { graph } => {
            let (g, digest) = load_graph(&graph)?;
            let nf = normal_form(&scc(&g), &g);
            let manifest =
                RunManifest::new("normal-form", digest).param("graph", graph.display());
            emit(&NormalFormOut {
                permutation: nf.permutation.clone(),
                blocks: nf
                    .blocks
                    .iter()
                    .map(|b| NormalFormBlockOut {
                        nodes: b.nodes.clone(),
                        dangling: b.dangling,
                        trivial: b.trivial,
                    })
                    .collect(),
                num_nondangling: nf.num_nondangling(),
                num_dangling: nf.num_dangling(),
                manifest,
            })?;
            Ok(EXIT_OK)
        }

        Command::Verify {
            graph,
            lambda,
            candidate,
            tol,
            dangling,
        } => {
            let (g, digest) = load_graph(&graph)?;
            let candidate_vec = load_vector(&candidate)?;
            let cfg = PageRankConfig {
                lambda,
                personalization: candidate_vec.clone(),
                dangling_policy: parse_dangling_spec(&dangling)?,
                tolerance: (tol * 1e-2).min(1e-10),
                max_iterations: 1_000_000,
            };
            let pr = pagerank(&row_normalize(&g), &cfg)?;
            let distance = norm1_diff(&pr, &candidate_vec);
            let manifest = RunManifest::new("verify", digest)
                .param("graph", graph.display())
                .param("lambda", lambda)
                .param("candidate", candidate.display())
                .param("tol", tol)
                .param("dangling", &dangling);
            emit(&VerifyOut {
                fixed_point: distance <= tol,
                distance,
                manifest,
            })?;
            Ok(EXIT_OK)
        }

        Command::Selftest { seed, inject_fault } => {
            // The suite exercises boundary vectors on purpose; skip the
            // per-call warnings.
            log::set_max_level(log::LevelFilter::Error);
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            Ok(selftest::run(seed, inject_fault, &mut out))
        }
    }
}

/// Perron data for one normal-form block, from the row-normalized subgraph
/// induced on the block's nodes.
fn block_perron(
    g: &Graph,
    idx: usize,
    block: &pprank_core::NormalBlock,
    tol: f64,
    max_iter: usize,
) -> Result<BlockPerron, CliError> {
    let mut out = BlockPerron {
        block: idx,
        nodes: block.nodes.clone(),
        dangling: block.dangling,
        trivial: block.trivial,
        vector: None,
        residual: None,
        iterations: None,
    };
    if block.trivial {
        return Ok(out);
    }
    let local: std::collections::BTreeMap<usize, usize> = block
        .nodes
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, k))
        .collect();
    let edges: Vec<pprank_core::Edge> = g
        .edges()
        .iter()
        .filter(|e| {
            e.weight > 0.0 && local.contains_key(&e.src) && local.contains_key(&e.dst)
        })
        .map(|e| pprank_core::Edge {
            src: local[&e.src],
            dst: local[&e.dst],
            weight: e.weight,
        })
        .collect();
    let sub = Graph::new(block.nodes.len(), edges)?;
    let perron = left_perron(&row_normalize(&sub), tol, max_iter)?;
    out.vector = Some(perron.vector);
    out.residual = Some(perron.residual);
    out.iterations = Some(perron.iterations);
    Ok(out)
}

fn write_node_trace(path: &Path, trace: &IterationTrace) -> Result<(), CliError> {
    let mut buf = String::from("iter,node,value\n");
    for (k, xk) in &trace.iterates {
        for (node, value) in xk.iter().enumerate() {
            buf.push_str(&format!("{k},{node},{value}\n"));
        }
    }
    write_file(path, &buf)
}

fn write_mass_trace(path: &Path, trace: &IterationTrace) -> Result<(), CliError> {
    let mut buf = String::from("iter,block,mass\n");
    for (k, masses) in trace.cluster_mass.iter().enumerate() {
        for (block, mass) in masses.iter().enumerate() {
            buf.push_str(&format!("{k},{block},{mass}\n"));
        }
    }
    write_file(path, &buf)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    let mut file = fs::File::create(path)
        .map_err(|e| CliError::input(format!("cannot create {}: {}", path.display(), e)))?;
    file.write_all(content.as_bytes())
        .map_err(|e| CliError::input(format!("cannot write {}: {}", path.display(), e)))?;
    Ok(())
}
