use std::fs;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use spul::bench::{bench, BenchConfig};
use spul::io::{
    parse_dimacs, parse_edge_list, parse_reduction_map, parse_result_tsv, resolve_path,
    write_bench, write_edge_list, write_reduction_map, write_result, Format,
};
use spul::oracle::{enumerate_rainbow, OracleLimits};
use spul::reduction::{decode, encode};
use spul::{solve, Algorithm, LabeledDigraph, SearchBudget, VertexId};

/// Shortest paths whose edges carry pairwise-distinct labels.
#[derive(Parser)]
#[command(name = "spul", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shortest rainbow paths from one source.
    Solve(SolveArgs),
    /// BFS versus rainbow path statistics per source.
    Bench(BenchArgs),
    /// Brute-force distances and optimal path counts for small graphs.
    Oracle(OracleArgs),
    /// Encode a DIMACS CNF formula as a rainbow-path instance.
    Reduce(ReduceArgs),
    /// Read a satisfying assignment off a solve result for a reduced instance.
    Decode(DecodeArgs),
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value = "a")]
    algorithm: Algorithm,
    /// Cap on search tree nodes; unlimited when omitted.
    #[arg(long)]
    max_nodes: Option<NonZeroUsize>,
    /// Cap on pending queue entries; unlimited when omitted.
    #[arg(long)]
    max_queue: Option<NonZeroUsize>,
    #[arg(long, default_value = "tsv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl SearchArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_tree_nodes: self.max_nodes,
            max_queue_entries: self.max_queue,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Edge list, one `source<TAB>target<TAB>label` per line.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    source: String,
    /// Restrict to these targets (repeatable); all vertices by default.
    #[arg(long = "target")]
    targets: Vec<String>,
    /// Answer BFS-rainbow targets directly and stop once all reachable
    /// targets are found.
    #[arg(long)]
    preprocess: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Source vertex (repeatable).
    #[arg(long = "source", required_unless_present = "all_sources")]
    sources: Vec<String>,
    #[arg(long, conflicts_with = "sources")]
    all_sources: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    source: String,
    #[arg(long, default_value_t = OracleLimits::default().max_vertices)]
    max_vertices: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_edges)]
    max_edges: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_labels)]
    max_labels: usize,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    cnf: PathBuf,
    #[arg(long)]
    graph_out: PathBuf,
    #[arg(long)]
    map_out: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    map: PathBuf,
    /// TSV output of `solve` on the reduced graph.
    #[arg(long)]
    result: PathBuf,
}

/// How a successful command ended.
enum Completion {
    Full,
    BudgetAborted,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(Completion::Full) => ExitCode::SUCCESS,
        Ok(Completion::BudgetAborted) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Completion> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Decode(args) => cmd_decode(args),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<LabeledDigraph> {
    let (g, warnings) =
        parse_edge_list(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(g)
}

fn vertex(g: &LabeledDigraph, name: &str) -> Result<VertexId> {
    match g.vertex_id(name) {
        Some(v) => Ok(v),
        None => bail!("unknown vertex '{name}'"),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<Completion> {
    let g = load_graph(&args.graph)?;
    let s = vertex(&g, &args.source)?;
    let targets = args
        .targets
        .iter()
        .map(|t| vertex(&g, t))
        .collect::<Result<Vec<_>>>()?;
    let targets = (!args.targets.is_empty()).then_some(targets.as_slice());
    let result = solve(
        &g,
        s,
        targets,
        args.search.algorithm,
        args.preprocess,
        args.search.budget(),
    );
    write_out(
        args.search.output.as_deref(),
        &write_result(&g, &result, args.search.format),
    )?;
    Ok(if result.aborted {
        Completion::BudgetAborted
    } else {
        Completion::Full
    })
}

fn cmd_bench(args: BenchArgs) -> Result<Completion> {
    let g = load_graph(&args.graph)?;
    let sources: Vec<VertexId> = if args.all_sources {
        g.vertices().collect()
    } else {
        args.sources
            .iter()
            .map(|s| vertex(&g, s))
            .collect::<Result<_>>()?
    };
    let config = BenchConfig {
        algorithm: args.search.algorithm,
        budget: args.search.budget(),
    };
    let report = bench(&g, &sources, config);
    write_out(
        args.search.output.as_deref(),
        &write_bench(&g, &report, args.search.format),
    )?;
    Ok(if report.totals.aborted {
        Completion::BudgetAborted
    } else {
        Completion::Full
    })
}

fn cmd_oracle(args: OracleArgs) -> Result<Completion> {
    let g = load_graph(&args.graph)?;
    let s = vertex(&g, &args.source)?;
    let limits = OracleLimits {
        max_vertices: args.max_vertices,
        max_edges: args.max_edges,
        max_labels: args.max_labels,
    };
    let stats = enumerate_rainbow(&g, s, limits)?;
    let mut out = String::from("target\tdistance\tcount\n");
    for v in g.vertices() {
        let name = g.vertex_name(v);
        match stats.get(&v) {
            Some(st) => out.push_str(&format!("{name}\t{}\t{}\n", st.distance, st.count)),
            None => out.push_str(&format!("{name}\t-\t0\n")),
        }
    }
    print!("{out}");
    Ok(Completion::Full)
}

fn cmd_reduce(args: ReduceArgs) -> Result<Completion> {
    let inst =
        parse_dimacs(&read(&args.cnf)?).with_context(|| format!("in {}", args.cnf.display()))?;
    let rmap = encode(&inst);
    write_out(Some(&args.graph_out), &write_edge_list(&rmap.graph))?;
    write_out(Some(&args.map_out), &write_reduction_map(&rmap))?;
    eprintln!(
        "encoded {} variables, {} clauses: {} vertices, {} edges; source {}, sink {}",
        inst.num_vars(),
        inst.clauses().len(),
        rmap.graph.vertex_count(),
        rmap.graph.edge_count(),
        rmap.graph.vertex_name(rmap.source),
        rmap.graph.vertex_name(rmap.sink),
    );
    Ok(Completion::Full)
}

fn cmd_decode(args: DecodeArgs) -> Result<Completion> {
    let rmap = parse_reduction_map(&read(&args.map)?)
        .with_context(|| format!("in {}", args.map.display()))?;
    let rows = parse_result_tsv(&read(&args.result)?)
        .with_context(|| format!("in {}", args.result.display()))?;
    let g = &rmap.graph;
    let sink = g.vertex_name(rmap.sink);
    let witness = rows
        .iter()
        .find(|r| r.target == sink && r.status == "found")
        .and_then(|r| Some((r.vertices.as_ref()?, r.labels.as_ref()?)));
    let Some((vertices, labels)) = witness else {
        println!("UNSAT-WITNESS-ABSENT");
        return Ok(Completion::Full);
    };
    let path = resolve_path(g, vertices, labels).context("result row for the sink")?;
    let assignment = decode(&rmap, &path)?;
    for (j, value) in assignment.iter().enumerate() {
        println!("x{}={value}", j + 1);
    }
    Ok(Completion::Full)
}
