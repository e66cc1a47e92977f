use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use nads_core::heuristics::{pseudo_random_start, Heuristic};
use nads_core::oracle::verify_local_maximum;
use nads_core::{
    cds, load_edge_list_file, nads, propagate, GipParams, NodeId, SearchConfig, SeedSet,
    WeightScheme, WeightedGraph,
};
use nads_cli::config::parse_ordering;
use nads_cli::experiment::heuristic_seeds;
use nads_cli::gaps::reference_score;
use nads_cli::output::{trace_file_name, write_gaps, write_trace, SUMMARY_HEADER};
use nads_cli::{compute_gap_series, emit_outputs, run_on_graph, CliError, ExperimentConfig, GapAxis, Result};

#[derive(Parser, Debug)]
#[command(name = "nads", version, about = "Seed selection by network-aware direct search")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long = "theta-l", global = true)]
    theta_l: Option<f64>,
    #[arg(long = "theta-h", global = true)]
    theta_h: Option<f64>,
    #[arg(long, global = true)]
    l0: Option<f64>,
    #[arg(long, global = true)]
    h0: Option<f64>,
    /// Count the seeds' own initial state in the score.
    #[arg(long = "include-t0", global = true)]
    include_t0: bool,
    #[arg(long = "rng-seed", global = true)]
    rng_seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

impl Global {
    fn apply(&self, p: &mut GipParams) {
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut p.gamma, self.gamma);
        set(&mut p.epsilon, self.epsilon);
        set(&mut p.theta_l, self.theta_l);
        set(&mut p.theta_h, self.theta_h);
        set(&mut p.l0, self.l0);
        set(&mut p.h0, self.h0);
        p.include_t0 |= self.include_t0;
    }

    fn params(&self) -> GipParams {
        let mut p = GipParams::default();
        self.apply(&mut p);
        p
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment described by an INI config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Select seeds with one heuristic.
    Heuristic {
        #[arg(long)]
        graph: PathBuf,
        /// sd, sg, kc, cc or ci.
        #[arg(long)]
        method: String,
        #[arg(long)]
        budget: usize,
        /// uniform:<w>, invdeg or file.
        #[arg(long, default_value = "uniform:0.1")]
        weights: String,
    },
    /// Run nads or cds from a start point.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        method: String,
        #[arg(long)]
        budget: usize,
        /// A heuristic name or random:<seed>.
        #[arg(long, default_value = "sd")]
        start: String,
        /// Wall-clock seconds.
        #[arg(long = "time-budget")]
        time_budget: Option<f64>,
        #[arg(long = "eval-budget")]
        eval_budget: Option<u64>,
        #[arg(long)]
        zeta0: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long)]
        phase3: bool,
        /// lexicographic or degree.
        #[arg(long, default_value = "lexicographic")]
        ordering: String,
        #[arg(long, default_value = "uniform:0.1")]
        weights: String,
    },
    /// Check whether a seed set is a local maximum at radius d.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated node ids as they appear in the graph file.
        #[arg(long)]
        seeds: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "uniform:0.1")]
        weights: String,
    },
    /// Tabulate relative gaps from a directory of trace files.
    Gaps {
        #[arg(long)]
        traces: PathBuf,
        /// time or evals.
        #[arg(long, default_value = "time")]
        axis: String,
        /// Run length on the chosen axis; defaults to the longest trace.
        #[arg(long)]
        horizon: Option<f64>,
    },
}

fn load(path: &Path, weights: &str) -> Result<WeightedGraph> {
    Ok(load_edge_list_file(path, weights.parse::<WeightScheme>()?)?)
}

fn external_ids(graph: &WeightedGraph, seeds: &SeedSet) -> String {
    let ids: Vec<String> = seeds.nodes().iter().map(|&v| graph.external_id(v).to_string()).collect();
    ids.join(" ")
}

fn parse_seeds(graph: &WeightedGraph, raw: &str) -> Result<SeedSet> {
    let mut nodes = Vec::new();
    for tok in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let ext: u64 = tok
            .parse()
            .map_err(|_| CliError::config(format!("bad seed id {tok:?}")))?;
        let v: NodeId = graph
            .internal_id(ext)
            .ok_or_else(|| CliError::config(format!("seed {ext} is not a node of the graph")))?;
        nodes.push(v);
    }
    Ok(SeedSet::new(nodes)?)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn cmd_run(global: &Global, config: &Path) -> Result<()> {
    let mut cfg = ExperimentConfig::from_file(config)?;
    global.apply(&mut cfg.params);
    if let Some(seed) = global.rng_seed {
        cfg.rng_seed = seed;
        cfg.search.rng_seed = seed;
    }
    if let Some(out) = &global.out {
        cfg.output_dir = out.clone();
    }
    let graph = load_edge_list_file(&cfg.graph_path, cfg.weights)?;
    let report = run_on_graph(&cfg, &graph)?;
    let written = emit_outputs(&report, &cfg.output_dir)?;
    let ids = cfg.output_dir.join(format!("{}.ids", cfg.dataset));
    let file = fs::File::create(&ids).map_err(|e| CliError::io(&ids, e))?;
    graph
        .write_id_map(std::io::BufWriter::new(file))
        .map_err(|e| CliError::io(&ids, e))?;
    println!("wrote {} files to {}", written.len() + 1, cfg.output_dir.display());
    Ok(())
}

fn cmd_heuristic(global: &Global, graph: &Path, method: &str, budget: usize, weights: &str) -> Result<()> {
    let h: Heuristic = method.parse()?;
    let params = global.params();
    let g = load(graph, weights)?;
    let clock = Instant::now();
    let (seeds, evals) = heuristic_seeds(&g, &params, h, budget)?;
    let score = propagate(&g, &params, &seeds)?.score;
    let time_s = clock.elapsed().as_secs_f64();
    let line = format!("{h},{budget},{score:.6},{time_s:.6},{evals},{}\n", external_ids(&g, &seeds));
    let header = "method,B,score,time_s,evals,seeds\n";
    print!("{header}{line}");
    if let Some(out) = &global.out {
        create_dir(out)?;
        let path = out.join(format!("heuristic_{h}_{budget}.csv"));
        fs::write(&path, format!("{header}{line}")).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

fn cmd_solve(
    global: &Global,
    graph: &Path,
    method: &str,
    budget: usize,
    start: &str,
    search: SearchConfig,
    weights: &str,
) -> Result<()> {
    let params = global.params();
    let g = load(graph, weights)?;
    let (label, start_set) = match start.strip_prefix("random:") {
        Some(seed) => {
            let seed: u64 = seed
                .parse()
                .map_err(|_| CliError::config(format!("bad random start seed {seed:?}")))?;
            (format!("r{seed}"), pseudo_random_start(&g, budget, seed)?)
        }
        None => {
            let h: Heuristic = start.parse()?;
            (h.name().to_string(), heuristic_seeds(&g, &params, h, budget)?.0)
        }
    };
    let clock = Instant::now();
    let result = match method {
        "nads" => nads(&g, &params, &search, &start_set)?,
        "cds" => cds(&g, &params, &search, &start_set)?,
        other => return Err(CliError::config(format!("solve runs nads or cds, not {other:?}"))),
    };
    let time_s = clock.elapsed().as_secs_f64();
    let dataset = graph.file_stem().map_or("graph".into(), |s| s.to_string_lossy().into_owned());
    let row = format!(
        "{dataset},{method},{budget},{label},{:.6},{time_s:.6},{}\n",
        result.score, result.stats.evaluations
    );
    print!("{SUMMARY_HEADER}\n{row}");
    println!("seeds: {}", external_ids(&g, &result.seeds));
    println!("termination: {}", result.termination);
    let st = &result.stats;
    log::info!(
        "polls {} accepted: search {} full {} phase1 {} phase2 {} phase3 {}; filtered {}; cache hits {}",
        st.polls,
        st.search_acceptances,
        st.full_poll_acceptances,
        st.phase1_acceptances,
        st.phase2_acceptances,
        st.phase3_acceptances,
        st.filtered_by_restriction,
        st.cache_hits
    );
    if let Some(out) = &global.out {
        create_dir(out)?;
        write_trace(&out.join(trace_file_name(method, budget, &label)), &result.trace)?;
        let path = out.join("summary.csv");
        fs::write(&path, format!("{SUMMARY_HEADER}\n{row}")).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

fn cmd_verify(global: &Global, graph: &Path, seeds: &str, d: usize, weights: &str) -> Result<()> {
    let params = global.params();
    let g = load(graph, weights)?;
    let z = parse_seeds(&g, seeds)?;
    let report = verify_local_maximum(&g, &params, &z, d)?;
    let mut stdout = std::io::stdout().lock();
    let centre = propagate(&g, &params, &z)?.score;
    writeln!(
        stdout,
        "local_maximum={} d={d} score={:.6} evaluated={} witnesses={}",
        report.witnesses.is_empty(),
        centre,
        report.evaluated,
        report.witnesses.len()
    )
    .map_err(|e| CliError::io("stdout", e))?;
    for (y, s) in &report.witnesses {
        writeln!(stdout, "{},{s:.6}", external_ids(&g, y)).map_err(|e| CliError::io("stdout", e))?;
    }
    Ok(())
}

fn cmd_gaps(global: &Global, traces_dir: &Path, axis: &str, horizon: Option<f64>) -> Result<()> {
    let axis: GapAxis = axis.parse()?;
    let traces = nads_cli::output::read_traces(traces_dir)?;
    if traces.is_empty() {
        return Err(CliError::config(format!("no trace files in {}", traces_dir.display())));
    }
    let mut by_budget: BTreeMap<usize, Vec<_>> = BTreeMap::new();
    for t in traces {
        by_budget.entry(t.budget).or_default().push(t);
    }
    let out = global.out.clone().unwrap_or_else(|| traces_dir.to_path_buf());
    for (budget, group) in by_budget {
        let h = horizon.unwrap_or_else(|| group.iter().map(|t| t.extent(axis)).fold(0.0, f64::max));
        let h = if h > 0.0 { h } else { 1.0 };
        let series = compute_gap_series(&group, reference_score(&group), axis, h)?;
        println!("{}", write_gaps(&out, budget, &series)?.display());
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Run { config } => cmd_run(g, config),
        Command::Heuristic { graph, method, budget, weights } => {
            cmd_heuristic(g, graph, method, *budget, weights)
        }
        Command::Solve {
            graph,
            method,
            budget,
            start,
            time_budget,
            eval_budget,
            zeta0,
            delta,
            dmax,
            phase3,
            ordering,
            weights,
        } => {
            let mut search = SearchConfig {
                time_budget: time_budget.map(Duration::from_secs_f64),
                eval_budget: *eval_budget,
                phase3_enabled: *phase3,
                ordering: parse_ordering(ordering)?,
                rng_seed: g.rng_seed.unwrap_or(0),
                ..SearchConfig::default()
            };
            if let Some(z) = zeta0 {
                search.zeta0 = *z;
            }
            if let Some(d) = delta {
                search.delta = *d;
            }
            if let Some(d) = dmax {
                search.d_max = *d;
            }
            cmd_solve(g, graph, method, *budget, start, search, weights)
        }
        Command::Verify { graph, seeds, d, weights } => cmd_verify(g, graph, seeds, *d, weights),
        Command::Gaps { traces, axis, horizon } => cmd_gaps(g, traces, axis, *horizon),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
