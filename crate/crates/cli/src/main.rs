//! `parwl` — refinement, isomorphism, and permutation-group tooling.
//!
//! Exit codes are stable and machine-readable:
//!   0 success (for `iso`: isomorphic)
//!   1 `iso`: not isomorphic
//!   2 input/parse error
//!   3 memory budget exceeded
//!   4 `iso`: inconclusive (node budget exhausted)
//!   5 `bench`: cross-worker-count determinism check failed
//!
//! Every flag can also be set through an environment variable with the
//! `PARWL_` prefix (e.g. `PARWL_WORKERS=8`).

use clap::{Args, Parser, Subcommand, ValueEnum};
use parwl::gadget::{simulate_kwl_via_cr, CrEngine};
use parwl::graph::Graph;
use parwl::perm::{
    is_transitive, minimal_block_system, orbits, refine_generating_set, schreier_sims,
    GeneratingSet, Permutation, Selection,
};
use parwl::refine::{
    color_refine, simulate_cr_by_wl2, walk_refine, wl2_refine, wlk_refine, RefineOptions,
};
use parwl::solver::{iso, IsoOptions, IsoOutcome, Refiner};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

const SCHEMA_VERSION: u32 = 1;

const EXIT_NOT_ISO: i32 = 1;
const EXIT_PARSE: i32 = 2;
const EXIT_BUDGET: i32 = 3;
const EXIT_INCONCLUSIVE: i32 = 4;
const EXIT_NONDETERMINISM: i32 = 5;

#[derive(Parser)]
#[command(name = "parwl", version, about = "Weisfeiler-Leman refinement and graph-isomorphism toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a refinement algorithm on one graph and emit the report.
    Refine(RefineCmd),
    /// Decide isomorphism of two graphs (exit code doubles as the verdict).
    Iso(IsoCmd),
    /// Permutation-group operations on a JSON generators file.
    Group(GroupCmd),
    /// Benchmark refinement across worker counts; emits CSV.
    Bench(BenchCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RefineAlgo {
    Cr,
    Wl2,
    Walk,
    Kwl,
    CrViaWl2,
    KwlViaGadget,
}

impl RefineAlgo {
    fn name(self) -> &'static str {
        match self {
            RefineAlgo::Cr => "cr",
            RefineAlgo::Wl2 => "wl2",
            RefineAlgo::Walk => "walk",
            RefineAlgo::Kwl => "kwl",
            RefineAlgo::CrViaWl2 => "cr-via-wl2",
            RefineAlgo::KwlViaGadget => "kwl-via-gadget",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IsoAlgo {
    Cr,
    CrViaWl2,
    Kwl,
    KwlViaGadget,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    /// Write output here instead of stdout.
    #[arg(long, env = "PARWL_OUT")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", env = "PARWL_FORMAT")]
    format: Format,
}

#[derive(Args)]
struct RefineCmd {
    /// Input graph (graph6 or `p n m` edge-list format, detected by content).
    input: PathBuf,
    #[arg(long, value_enum, default_value = "cr", env = "PARWL_ALGO")]
    algo: RefineAlgo,
    /// Dimension for kwl/kwl-via-gadget; walk length for walk.
    #[arg(long, default_value_t = 2, env = "PARWL_K")]
    k: usize,
    #[arg(long, env = "PARWL_MAX_ROUNDS")]
    max_rounds: Option<usize>,
    #[arg(long, default_value_t = 1, env = "PARWL_WORKERS")]
    workers: usize,
    /// Cap on dense color-array entries (tuples, gadget vertices).
    #[arg(long, default_value_t = parwl::DEFAULT_MEMORY_BUDGET, env = "PARWL_MEMORY_BUDGET")]
    memory_budget: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct IsoCmd {
    input1: PathBuf,
    input2: PathBuf,
    /// Refiner run at every search node.
    #[arg(long, value_enum, default_value = "cr", env = "PARWL_ALGO")]
    algo: IsoAlgo,
    #[arg(long, default_value_t = 2, env = "PARWL_K")]
    k: usize,
    #[arg(long, default_value_t = 1, env = "PARWL_WORKERS")]
    workers: usize,
    /// Cap on search nodes; exceeding it exits 4 (inconclusive).
    #[arg(long, env = "PARWL_NODE_BUDGET")]
    node_budget: Option<u64>,
    #[arg(long, default_value_t = parwl::DEFAULT_MEMORY_BUDGET, env = "PARWL_MEMORY_BUDGET")]
    memory_budget: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupAction {
    Orbits,
    Blocks,
    RefineGens,
    Order,
    Member,
}

#[derive(Args)]
struct GroupCmd {
    action: GroupAction,
    /// JSON file: an array of permutations, each an image array of 0..n-1.
    gens: PathBuf,
    /// Permutation to test (JSON image array), for `member`.
    #[arg(long)]
    element: Option<String>,
    /// Seed for the random-selection variant of refine-gens; omitted means
    /// the deterministic lowest-index rule.
    #[arg(long, env = "PARWL_SEED")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1, env = "PARWL_WORKERS")]
    workers: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchCmd {
    /// Directory of .g6 files; omitted selects the built-in corpus.
    corpus: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "cr", env = "PARWL_ALGO")]
    algo: RefineAlgo,
    /// Comma-separated worker counts, e.g. "1,2,4".
    #[arg(long, default_value = "1,4", env = "PARWL_WORKERS")]
    workers: String,
    /// Add a G(n,p) graph to the corpus: "n,p", e.g. "2000,0.01".
    #[arg(long, env = "PARWL_RANDOM")]
    random: Option<String>,
    #[arg(long, default_value_t = 1, env = "PARWL_SEED")]
    seed: u64,
    #[arg(long, default_value_t = 2, env = "PARWL_K")]
    k: usize,
    #[arg(long, env = "PARWL_MAX_ROUNDS")]
    max_rounds: Option<usize>,
    #[arg(long, default_value_t = parwl::DEFAULT_MEMORY_BUDGET, env = "PARWL_MEMORY_BUDGET")]
    memory_budget: u64,
    /// Timed repetitions per configuration; the minimum is reported.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, env = "PARWL_OUT")]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Refine(cmd) => cmd_refine(&cmd),
        Cmd::Iso(cmd) => cmd_iso(&cmd),
        Cmd::Group(cmd) => cmd_group(&cmd),
        Cmd::Bench(cmd) => cmd_bench(&cmd),
    };
    std::process::exit(code);
}

fn fail(code: i32, msg: impl std::fmt::Display) -> i32 {
    eprintln!("parwl: {msg}");
    code
}

/// Reads a graph file; edge-list inputs are recognized by their `p` header.
fn load_graph(path: &Path) -> Result<Graph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let is_edgelist = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("p ") || l == "p");
    let parsed = if is_edgelist {
        Graph::parse_edgelist(&text)
    } else {
        Graph::parse_graph6(text.as_bytes())
    };
    parsed.map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(output: &OutputArgs, value: &serde_json::Value, text: String) -> i32 {
    let body = match output.format {
        Format::Json => format!("{:#}\n", value),
        Format::Text => text,
    };
    match &output.out {
        None => {
            print!("{body}");
            0
        }
        Some(path) => match std::fs::write(path, body) {
            Ok(()) => 0,
            Err(e) => fail(EXIT_PARSE, format!("{}: {e}", path.display())),
        },
    }
}

fn cmd_refine(cmd: &RefineCmd) -> i32 {
    let g = match load_graph(&cmd.input) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let opts = RefineOptions {
        max_rounds: cmd.max_rounds,
        workers: cmd.workers,
        memory_budget: cmd.memory_budget,
    };
    let (mut value, rounds, num_colors) = match cmd.algo {
        RefineAlgo::Cr => {
            let r = color_refine(&g, &opts);
            (r.to_json(), r.rounds, r.partition.num_colors)
        }
        RefineAlgo::Wl2 => {
            let r = wl2_refine(&g, &opts);
            (r.to_json(), r.rounds, r.partition.num_colors)
        }
        RefineAlgo::CrViaWl2 => {
            let r = simulate_cr_by_wl2(&g, &opts);
            (r.to_json(), r.rounds, r.partition.num_colors)
        }
        RefineAlgo::Walk => match walk_refine(&g, cmd.k, cmd.workers) {
            Ok(pc) => {
                let v = json!({
                    "algorithm": "walk",
                    "n": g.n(),
                    "k": cmd.k,
                    "rounds": serde_json::Value::Null,
                    "stabilized": serde_json::Value::Null,
                    "color_counts": [pc.num_colors],
                    "num_colors": pc.num_colors,
                    "partition": pc.color_of,
                });
                let nc = pc.num_colors;
                (v, 0, nc)
            }
            Err(e) => return fail(EXIT_PARSE, e),
        },
        RefineAlgo::Kwl => match wlk_refine(&g, cmd.k, &opts) {
            Ok(r) => {
                let v = r.to_json();
                (v, r.rounds, r.partition.num_colors)
            }
            Err(e) => return fail(EXIT_BUDGET, e),
        },
        RefineAlgo::KwlViaGadget => match simulate_kwl_via_cr(&g, cmd.k, CrEngine::Parallel, &opts)
        {
            Ok((tuples, report)) => {
                let v = json!({
                    "algorithm": "kwl-via-gadget",
                    "n": g.n(),
                    "k": cmd.k,
                    "rounds": report.rounds,
                    "stabilized": report.stabilized,
                    "color_counts": report.color_counts,
                    "num_colors": tuples.num_colors,
                    "partition": tuples.color_of,
                });
                let nc = tuples.num_colors;
                (v, report.rounds, nc)
            }
            Err(e) => return fail(EXIT_BUDGET, e),
        },
    };
    value["schema_version"] = json!(SCHEMA_VERSION);
    let text = format!(
        "algorithm: {}\nn: {}\nrounds: {}\ncolors: {}\n",
        cmd.algo.name(),
        g.n(),
        rounds,
        num_colors,
    );
    emit(&cmd.output, &value, text)
}

fn cmd_iso(cmd: &IsoCmd) -> i32 {
    let g1 = match load_graph(&cmd.input1) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let g2 = match load_graph(&cmd.input2) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let opts = IsoOptions {
        refiner: match cmd.algo {
            IsoAlgo::Cr => Refiner::Cr,
            IsoAlgo::CrViaWl2 => Refiner::Wl2LogSim,
            IsoAlgo::Kwl => Refiner::Kwl(cmd.k),
            IsoAlgo::KwlViaGadget => Refiner::GadgetKwl(cmd.k),
        },
        workers: cmd.workers,
        node_budget: cmd.node_budget,
        memory_budget: cmd.memory_budget,
    };
    let result = match iso(&g1, &g2, &opts) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_BUDGET, e),
    };
    let mut value = result.to_json();
    value["schema_version"] = json!(SCHEMA_VERSION);
    let (text, code) = match &result.outcome {
        IsoOutcome::Isomorphic(w) => (format!("isomorphic: {}\n", w.to_cycle_string()), 0),
        IsoOutcome::NotIsomorphic => ("not isomorphic\n".to_string(), EXIT_NOT_ISO),
        IsoOutcome::Inconclusive => ("inconclusive (node budget)\n".to_string(), EXIT_INCONCLUSIVE),
    };
    let emit_code = emit(&cmd.output, &value, text);
    if emit_code != 0 {
        emit_code
    } else {
        code
    }
}

fn load_gens(path: &Path) -> Result<GeneratingSet, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let gens: Vec<Permutation> = serde_json::from_str(&text)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let n = gens.first().map_or(0, Permutation::n);
    GeneratingSet::new(n, gens).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_group(cmd: &GroupCmd) -> i32 {
    let gs = match load_gens(&cmd.gens) {
        Ok(gs) => gs,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let (value, text) = match cmd.action {
        GroupAction::Orbits => {
            let orbits = orbits(&gs);
            let text = format!("orbits: {orbits:?}\ntransitive: {}\n", orbits.len() <= 1);
            (
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "orbits": orbits,
                    "transitive": is_transitive(&gs),
                }),
                text,
            )
        }
        GroupAction::Blocks => match minimal_block_system(&gs) {
            Ok(bs) => {
                let text = format!("blocks: {:?}\nprimitive: {}\n", bs.blocks, bs.primitive);
                (
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "blocks": bs.blocks,
                        "primitive": bs.primitive,
                    }),
                    text,
                )
            }
            Err(e) => return fail(EXIT_PARSE, e),
        },
        GroupAction::RefineGens => {
            let selection = match cmd.seed {
                None => Selection::Deterministic,
                Some(seed) => Selection::Seeded(seed),
            };
            let (refined, chain) = refine_generating_set(&gs, selection, cmd.workers);
            let images: Vec<&[u32]> = refined.gens().iter().map(Permutation::images).collect();
            let text = format!(
                "generators: {} -> {}\norder: {}\n",
                gs.len(),
                refined.len(),
                chain.order(),
            );
            (
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "generators": images,
                    "count": refined.len(),
                    "order": chain.order().to_string(),
                }),
                text,
            )
        }
        GroupAction::Order => {
            let order = schreier_sims(&gs).order();
            (
                json!({"schema_version": SCHEMA_VERSION, "order": order.to_string()}),
                format!("order: {order}\n"),
            )
        }
        GroupAction::Member => {
            let Some(element) = &cmd.element else {
                return fail(EXIT_PARSE, "member requires --element");
            };
            let x: Permutation = match serde_json::from_str(element) {
                Ok(x) => x,
                Err(e) => return fail(EXIT_PARSE, e),
            };
            if x.n() != gs.n() {
                return fail(EXIT_PARSE, "element size does not match generators");
            }
            let sift = schreier_sims(&gs).sift(&x);
            (
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "member": sift.member,
                    "drop_level": sift.drop_level,
                }),
                format!("member: {}\n", sift.member),
            )
        }
    };
    emit(&cmd.output, &value, text)
}

fn bench_corpus(cmd: &BenchCmd) -> Result<Vec<(String, Graph)>, String> {
    let mut corpus = Vec::new();
    match &cmd.corpus {
        Some(dir) => {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
                .map_err(|e| format!("{}: {e}", dir.display()))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "g6"))
                .collect();
            paths.sort();
            for path in paths {
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                corpus.push((name, load_graph(&path)?));
            }
        }
        None => {
            corpus.push(("p64".to_string(), Graph::path(64)));
            corpus.push(("c128".to_string(), Graph::cycle(128)));
            corpus.push((
                "gnp256".to_string(),
                Graph::random(256, 0.05, cmd.seed).map_err(|e| e.to_string())?,
            ));
        }
    }
    if let Some(spec) = &cmd.random {
        let (n, p) = spec
            .split_once(',')
            .ok_or_else(|| format!("--random expects \"n,p\", got {spec:?}"))?;
        let n: usize = n.trim().parse().map_err(|e| format!("--random: {e}"))?;
        let p: f64 = p.trim().parse().map_err(|e| format!("--random: {e}"))?;
        corpus.push((
            format!("gnp{n}"),
            Graph::random(n, p, cmd.seed).map_err(|e| e.to_string())?,
        ));
    }
    Ok(corpus)
}

fn cmd_bench(cmd: &BenchCmd) -> i32 {
    let worker_counts: Vec<usize> = match cmd
        .workers
        .split(',')
        .map(|w| w.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(w) if !w.is_empty() && w.iter().all(|&w| w >= 1) => w,
        _ => return fail(EXIT_PARSE, format!("bad --workers list {:?}", cmd.workers)),
    };
    let corpus = match bench_corpus(cmd) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let mut csv = String::from("graph,algorithm,workers,rounds,wall_time_ms,speedup_vs_1_worker\n");
    for (name, g) in &corpus {
        let mut baseline: Option<(Vec<u32>, f64)> = None;
        for &workers in &worker_counts {
            let opts = RefineOptions {
                max_rounds: cmd.max_rounds,
                workers,
                memory_budget: cmd.memory_budget,
            };
            let run = || -> Result<(Vec<u32>, usize), String> {
                match cmd.algo {
                    RefineAlgo::Cr => {
                        let r = color_refine(g, &opts);
                        Ok((r.partition.color_of, r.rounds))
                    }
                    RefineAlgo::Wl2 => {
                        let r = wl2_refine(g, &opts);
                        Ok((r.partition.color_of, r.rounds))
                    }
                    RefineAlgo::CrViaWl2 => {
                        let r = simulate_cr_by_wl2(g, &opts);
                        Ok((r.partition.color_of, r.rounds))
                    }
                    RefineAlgo::Walk => {
                        let pc = walk_refine(g, cmd.k, workers)?;
                        Ok((pc.color_of, 0))
                    }
                    RefineAlgo::Kwl => {
                        let r = wlk_refine(g, cmd.k, &opts).map_err(|e| e.to_string())?;
                        Ok((r.partition.color_of, r.rounds))
                    }
                    RefineAlgo::KwlViaGadget => {
                        let (t, report) = simulate_kwl_via_cr(g, cmd.k, CrEngine::Parallel, &opts)
                            .map_err(|e| e.to_string())?;
                        Ok((t.color_of, report.rounds))
                    }
                }
            };
            let mut best_ms = f64::INFINITY;
            let mut result = None;
            for _ in 0..cmd.reps.max(1) {
                let start = Instant::now();
                let r = match run() {
                    Ok(r) => r,
                    Err(e) => return fail(EXIT_BUDGET, e),
                };
                best_ms = best_ms.min(start.elapsed().as_secs_f64() * 1000.0);
                result = Some(r);
            }
            let (partition, rounds) = result.expect("at least one rep");
            let speedup = match &baseline {
                None => {
                    baseline = Some((partition.clone(), best_ms));
                    1.0
                }
                Some((base_partition, base_ms)) => {
                    if *base_partition != partition {
                        return fail(
                            EXIT_NONDETERMINISM,
                            format!(
                                "partition for {name} at {workers} workers differs from {} workers",
                                worker_counts[0]
                            ),
                        );
                    }
                    base_ms / best_ms
                }
            };
            csv.push_str(&format!(
                "{name},{},{workers},{rounds},{best_ms:.3},{speedup:.3}\n",
                cmd.algo.name(),
            ));
        }
    }
    match &cmd.out {
        None => {
            print!("{csv}");
            0
        }
        Some(path) => match std::fs::write(path, csv) {
            Ok(()) => 0,
            Err(e) => fail(EXIT_PARSE, format!("{}: {e}", path.display())),
        },
    }
}
