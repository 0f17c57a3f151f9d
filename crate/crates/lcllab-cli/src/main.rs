use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lcllab_core::adversary::{
    random_corruption_plan, validate_budget, worst_case_search, CorruptionPlan,
};
use lcllab_core::congest::{
    congest_bipartite_trace, corruption_within_half_mode, NeighborhoodMode,
};
use lcllab_core::oracle::{
    check_scheme, thm32_construction, thm36_construction, thm36_windows_disjoint,
    thm61_construction,
};
use lcllab_core::refix::{refix_verdict_with_mode, ErrorBudget};
use lcllab_core::verifiers::{run_verifier_with_mode, Alg3Mode, Verdict};
use lcllab_core::{Graph, Labeling, SchemeId, SchemeSpec};

mod report;
use report::Report;

/// Exit codes: 0 all-accept / pass, 1 some-reject / failure witnesses found,
/// 2 usage or contract error.
const EXIT_REJECT: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lcllab",
    about = "Locally checkable labeling schemes, error-resilient verification, and exhaustive oracles",
    version
)]
struct Cli {
    /// Worker threads for the sweeps (also read from LCLLAB_JOBS).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Write the scheme's oracular labeling for a graph.
    Label {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        scheme: SchemeId,
        /// Output labeling file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scheme's verifier (optionally the refix meta-verifier) on a
    /// labeled graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        scheme: SchemeId,
        /// Tolerate this many errors per neighborhood via refix.
        #[arg(long)]
        refix: Option<usize>,
        /// Use the prose-strict acceptance for the 2-label view-3 scheme.
        #[arg(long)]
        strict_alg3: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive completeness/soundness sweep of a scheme over all small
    /// graphs (alias: check-scheme).
    #[command(alias = "check-scheme")]
    Sweep {
        #[arg(long)]
        scheme: SchemeId,
        #[arg(long)]
        nmax: usize,
        /// Check one representative per isomorphism class.
        #[arg(long)]
        dedup: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Corrupt a labeling within a per-neighborhood error budget.
    Corrupt {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        scheme: SchemeId,
        /// Error budget i (changes per N_{d+2i} neighborhood).
        #[arg(long, default_value_t = 1)]
        budget: usize,
        /// random: sample a budget-valid plan; worst-case: search for a plan
        /// that defeats refix.
        #[arg(long, value_enum, default_value = "random")]
        mode: CorruptMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Plan file to write; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate the 2-label view-1 impossibility construction for one or all
    /// 2-labelings of the fixed 7-node graph.
    Thm32 {
        /// Labeling file for the 7-node source graph; all 128 when omitted.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build and validate the repeated-window cycle construction for a
    /// labeled path.
    Thm36 {
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value_t = 1)]
        view_distance: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build and validate the error-budget impossibility certificate.
    Thm61 {
        /// Error budget i (the source graph has 3i+4 nodes).
        #[arg(long)]
        budget: usize,
        /// Labeling of the source graph; all-zero when omitted.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the 2-round CONGEST bipartiteness protocol.
    CongestBipartite {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Validate a corruption plan against the half-neighborhood budget
        /// before running.
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Count the node itself in its corruption neighborhood (default).
        #[arg(long)]
        closed_neighborhood: bool,
        /// Count corrupted neighbors only.
        #[arg(long, conflicts_with = "closed_neighborhood")]
        neighbors_only: bool,
        /// Emit per-round message logs.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum CorruptMode {
    Random,
    WorstCase,
}

fn read_graph(path: &PathBuf) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    Graph::parse_edge_list(&text).with_context(|| format!("parsing graph {}", path.display()))
}

fn read_labels(path: &PathBuf) -> Result<Labeling> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading labeling file {}", path.display()))?;
    Labeling::parse_text(&text).with_context(|| format!("parsing labeling {}", path.display()))
}

fn emit(report: &Report, output: &OutputArgs) -> Result<()> {
    let body = match output.format {
        Format::Json => serde_json::to_string_pretty(report)?,
        Format::Text => report.to_text(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, body + "\n")
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => println!("{body}"),
    }
    Ok(())
}

fn write_or_print(path: &Option<PathBuf>, body: String) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, &body).with_context(|| format!("writing {}", p.display()))?
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(jobs) = cli
        .jobs
        .or_else(|| std::env::var("LCLLAB_JOBS").ok().and_then(|v| v.parse().ok()))
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }

    match cli.command {
        Command::Label { graph, scheme, out } => {
            let g = read_graph(&graph)?;
            let l = scheme
                .label(&g)
                .with_context(|| format!("labeling with scheme {scheme}"))?;
            write_or_print(&out, l.to_text())?;
            Ok(0)
        }

        Command::Verify {
            graph,
            labels,
            scheme,
            refix,
            strict_alg3,
            output,
        } => {
            let started = Instant::now();
            let g = read_graph(&graph)?;
            let l = read_labels(&labels)?;
            let mode = if strict_alg3 {
                Alg3Mode::Strict
            } else {
                Alg3Mode::Pseudocode
            };
            let spec = SchemeSpec::for_graph(scheme, &g);
            let mut report = Report::new("verify", &format!("{scheme}"));
            let verdicts: Vec<Verdict> = match refix {
                None => run_verifier_with_mode(&g, &l, &spec, mode)?
                    .verdicts()
                    .to_vec(),
                Some(i) => {
                    let budget = ErrorBudget::new(i, spec.d);
                    let mut out = Vec::with_capacity(g.node_count());
                    for v in g.nodes() {
                        let (verdict, witness) =
                            refix_verdict_with_mode(&g, &l, v, &spec, &budget, mode)?;
                        if let Some(w) = witness {
                            report.push_imagined(v.0, w.patch());
                        }
                        out.push(verdict);
                    }
                    out
                }
            };
            report.set_verdicts(&verdicts);
            report.wall_time_ms = started.elapsed().as_millis() as u64;
            emit(&report, &output)?;
            Ok(if verdicts.iter().all(|v| v.is_accept()) {
                0
            } else {
                EXIT_REJECT
            })
        }

        Command::Sweep {
            scheme,
            nmax,
            dedup,
            output,
        } => {
            let started = Instant::now();
            let sweep = check_scheme(scheme, nmax, dedup)?;
            let mut report = Report::new("sweep", &format!("{scheme}"));
            let problem = match scheme.property() {
                lcllab_core::GraphProperty::HasCycle => "cycle detection",
                lcllab_core::GraphProperty::IsAcyclic => "cycle absence",
                lcllab_core::GraphProperty::IsBipartite => "bipartiteness",
            };
            let labels = match scheme {
                SchemeId::Cycle3 => "3".to_string(),
                SchemeId::Cycle2View3 | SchemeId::Bipartite2 => "2".to_string(),
                SchemeId::CycleN | SchemeId::AcyclicN => "n+1".to_string(),
            };
            report.note(&format!(
                "problem: {problem} | view distance: {} | labels: {labels} | result: {}",
                scheme.view_distance(),
                if sweep.passed() { "pass" } else { "FAIL" }
            ));
            report.set_sweep(&sweep);
            report.wall_time_ms = started.elapsed().as_millis() as u64;
            emit(&report, &output)?;
            Ok(if sweep.passed() { 0 } else { EXIT_REJECT })
        }

        Command::Corrupt {
            graph,
            labels,
            scheme,
            budget,
            mode,
            seed,
            out,
        } => {
            let g = read_graph(&graph)?;
            let l = read_labels(&labels)?;
            let spec = SchemeSpec::for_graph(scheme, &g);
            let b = ErrorBudget::new(budget, spec.d);
            let plan = match mode {
                CorruptMode::Random => random_corruption_plan(&g, &l, &b, seed)?,
                CorruptMode::WorstCase => match worst_case_search(&g, &l, &spec, &b)? {
                    Some(plan) => plan,
                    None => {
                        eprintln!(
                            "no budget-valid plan defeats refix({budget}) on this graph"
                        );
                        CorruptionPlan::empty()
                    }
                },
            };
            if !validate_budget(&g, &plan, &b) {
                bail!("internal error: produced plan violates the budget");
            }
            write_or_print(&out, plan.to_text(&l))?;
            Ok(0)
        }

        Command::Thm32 { labels, output } => {
            let started = Instant::now();
            let mut report = Report::new("thm32", "cycle-detection 2-label view-1");
            let mut failures = 0u64;
            match labels {
                Some(path) => {
                    let l = read_labels(&path)?;
                    let cert = thm32_construction(&l)?;
                    match cert.validate() {
                        Ok(()) => report.note("certificate valid"),
                        Err(e) => {
                            failures += 1;
                            report.note(&format!("certificate INVALID: {e}"));
                        }
                    }
                    report.push_witness(serde_json::to_value(&cert)?);
                }
                None => {
                    for bits in 0..128u32 {
                        let l =
                            Labeling::new((0..7).map(|k| bits >> k & 1).collect(), 2)?;
                        let cert = thm32_construction(&l)?;
                        if let Err(e) = cert.validate() {
                            failures += 1;
                            report.note(&format!("labeling {bits:07b}: {e}"));
                            report.push_witness(serde_json::to_value(&cert)?);
                        }
                    }
                    report.note(&format!("checked 128 labelings, {failures} failures"));
                }
            }
            report.wall_time_ms = started.elapsed().as_millis() as u64;
            emit(&report, &output)?;
            Ok(if failures == 0 { 0 } else { EXIT_REJECT })
        }

        Command::Thm36 {
            labels,
            view_distance,
            output,
        } => {
            let started = Instant::now();
            let l = read_labels(&labels)?;
            let cert = thm36_construction(&l, view_distance)?;
            let mut report = Report::new("thm36", "cycle-absence label lower bound");
            report.note(&format!(
                "cycle length {}, windows {}",
                cert.target_graph.node_count(),
                if thm36_windows_disjoint(&cert, view_distance) {
                    "disjoint"
                } else {
                    "overlapping"
                }
            ));
            let ok = match cert.validate() {
                Ok(()) => {
                    report.note("certificate valid");
                    true
                }
                Err(e) => {
                    report.note(&format!("certificate INVALID: {e}"));
                    false
                }
            };
            report.push_witness(serde_json::to_value(&cert)?);
            report.wall_time_ms = started.elapsed().as_millis() as u64;
            emit(&report, &output)?;
            Ok(if ok { 0 } else { EXIT_REJECT })
        }

        Command::Thm61 {
            budget,
            labels,
            output,
        } => {
            let started = Instant::now();
            let source_nodes = 3 * budget + 4;
            let l = match labels {
                Some(path) => read_labels(&path)?,
                None => Labeling::new(vec![0; source_nodes], 2)?,
            };
            let cert = thm61_construction(budget, &l)?;
            let mut report = Report::new("thm61", "errors vs view-distance lower bound");
            let ok = match cert.validate() {
                Ok(()) => {
                    report.note("certificate valid");
                    true
                }
                Err(e) => {
                    report.note(&format!("certificate INVALID: {e}"));
                    false
                }
            };
            report.push_witness(serde_json::to_value(&cert)?);
            report.wall_time_ms = started.elapsed().as_millis() as u64;
            emit(&report, &output)?;
            Ok(if ok { 0 } else { EXIT_REJECT })
        }

        Command::CongestBipartite {
            graph,
            labels,
            plan,
            closed_neighborhood: _,
            neighbors_only,
            trace,
            output,
        } => {
            let started = Instant::now();
            let g = read_graph(&graph)?;
            let l = read_labels(&labels)?;
            let mut report = Report::new("congest-bipartite", "2-round protocol");
            if let Some(plan_path) = plan {
                let text = std::fs::read_to_string(&plan_path)
                    .with_context(|| format!("reading plan {}", plan_path.display()))?;
                let plan = CorruptionPlan::parse_text(&text, &l)?;
                let mode = if neighbors_only {
                    NeighborhoodMode::NeighborsOnly
                } else {
                    NeighborhoodMode::Closed
                };
                let within = corruption_within_half_mode(&g, &plan, mode);
                report.note(&format!(
                    "plan with {} changes is {} the half-neighborhood budget",
                    plan.len(),
                    if within { "within" } else { "OUTSIDE" }
                ));
            }
            let (verdicts, run_trace) = congest_bipartite_trace(&g, &l)?;
            report.set_verdicts(verdicts.verdicts());
            report.note(&format!(
                "rounds: {}, max message bits: {}",
                run_trace.round_count(),
                run_trace.max_message_bits()
            ));
            if trace {
                report.push_witness(serde_json::to_value(&run_trace)?);
            }
            report.wall_time_ms = started.elapsed().as_millis() as u64;
            emit(&report, &output)?;
            Ok(if verdicts.all_accept() { 0 } else { EXIT_REJECT })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
