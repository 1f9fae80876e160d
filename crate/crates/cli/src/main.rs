//! `lattice`: validate, generate, index and query lattices given as
//! covering graphs.

mod bench;

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lattice_core::counterexample::dummy_node_demo;
use lattice_core::degree_index::{max_degree, RecursiveJoinIndex, SimpleJoinIndex};
use lattice_core::generators::{Family, FamilySpec, DEFAULT_P};
use lattice_core::meet_engine::MeetIndex;
use lattice_core::metrics::{QueryStats, SpaceReport};
use lattice_core::oracle::is_partial_lattice;
use lattice_core::trg::Trg;
use lattice_core::NodeId;

#[derive(Parser)]
#[command(
    name = "lattice",
    version,
    about = "Order tests, meets and joins on lattices in sublinear time"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file holds a transitive reduction of a partial lattice.
    Validate { file: PathBuf },
    /// Generate a lattice from one of the built-in families.
    Gen(GenArgs),
    /// Build an index and report its shape and size.
    BuildInfo(BuildInfoArgs),
    /// Answer one order, meet or join query.
    Query(QueryArgs),
    /// Build indexes over families and sizes and emit CSV measurements.
    Bench(bench::BenchArgs),
    /// Show that inserting a dummy header node can break the lattice property.
    DemoDummy,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("how_big").required(true))]
struct GenArgs {
    #[arg(long)]
    family: Family,
    /// The family's own size parameter (atoms, side, number, ...).
    #[arg(long, group = "how_big")]
    size: Option<u64>,
    /// Desired element count; the family parameter is chosen from it.
    #[arg(long, group = "how_big")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relation probability for the random families.
    #[arg(long, default_value_t = DEFAULT_P)]
    p: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub(crate) enum Structure {
    /// Block decomposition with meet tables (block size ⌈n^c⌉).
    Blocked,
    /// Header scan plus one stored local downset.
    Simple,
    /// Decomposition-tree descent for bounded degree.
    Recursive,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::Blocked => "blocked",
            Structure::Simple => "simple",
            Structure::Recursive => "recursive",
        })
    }
}

#[derive(Args)]
struct BuildInfoArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Structure::Blocked)]
    structure: Structure,
    /// Block-size exponent of the blocked structure, in [0.5, 1].
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Also print the block decomposition or decomposition tree.
    #[arg(long)]
    dump: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Leq,
    Meet,
    Join,
}

#[derive(Args)]
struct QueryArgs {
    file: PathBuf,
    #[arg(value_enum)]
    kind: Kind,
    x: NodeId,
    y: NodeId,
    #[arg(long, value_enum, default_value_t = Structure::Blocked)]
    structure: Structure,
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Print the query's probe counters after the answer.
    #[arg(long)]
    stats: bool,
}

/// A failed command: message plus process exit code.
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    /// Usage, parse and I/O problems.
    pub(crate) fn usage(message: impl fmt::Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    /// The input was read fine but violates a required property.
    pub(crate) fn violation(message: impl fmt::Display) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Gen(args) => gen(&args),
        Command::BuildInfo(args) => build_info(&args),
        Command::Query(args) => query(&args),
        Command::Bench(args) => bench::run(&args),
        Command::DemoDummy => demo_dummy(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn read_graph(path: &Path) -> Result<Trg, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format_args!("{}: {e}", path.display())))?;
    Trg::parse(&text).map_err(|e| Failure::usage(format_args!("{}: {e}", path.display())))
}

pub(crate) fn write_output(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format_args!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format_args!("stdout: {e}"))),
    }
}

fn validate(file: &Path) -> Outcome {
    let g = read_graph(file)?;
    g.validate_reduction().map_err(|e| {
        println!("{e}");
        Failure::violation("")
    })?;
    is_partial_lattice(&g).map_err(|v| {
        println!("{v}");
        Failure::violation("")
    })?;
    println!("ok");
    Ok(())
}

fn gen(args: &GenArgs) -> Outcome {
    let mut spec = match (args.size, args.n) {
        (Some(size), _) => FamilySpec::new(args.family, size, args.seed),
        (None, Some(n)) => FamilySpec::for_target(args.family, n, args.seed),
        (None, None) => unreachable!("clap requires --size or --n"),
    };
    spec.p = args.p;
    let g = spec.generate().map_err(Failure::usage)?;
    let text = match args.format {
        Format::Text => g.to_text(),
        Format::Dot => g.to_dot(),
    };
    write_output(args.out.as_deref(), &text)
}

fn check_exponent(c: f64) -> Outcome {
    if (0.5..=1.0).contains(&c) {
        Ok(())
    } else {
        Err(Failure::usage(format_args!("--c must lie in [0.5, 1], got {c}")))
    }
}

fn build_info(args: &BuildInfoArgs) -> Outcome {
    check_exponent(args.c)?;
    let g = read_graph(&args.file)?;
    g.validate_reduction().map_err(Failure::violation)?;
    let mut out = String::new();
    let mut line = |k: &str, v: &dyn fmt::Display| out.push_str(&format!("{k} {v}\n"));
    line("n", &g.n());
    line("edges", &g.edge_count());
    line("max_degree", &max_degree(&g).d);
    line("structure", &args.structure);
    let (report, dump) = match args.structure {
        Structure::Blocked => {
            let idx = MeetIndex::new(&g, args.c).map_err(Failure::violation)?;
            let bd = idx.primal().order_index().decomposition();
            line("c", &args.c);
            line("block_size", &bd.k());
            line("blocks", &bd.m());
            line("residual", &bd.residual().len());
            line("build_edge_visits", &idx.build_edge_visits());
            (idx.space_report(), bd.dump())
        }
        Structure::Simple => {
            let idx = SimpleJoinIndex::new(&g).map_err(Failure::violation)?;
            line("block_size", &idx.block_size());
            line("blocks", &idx.block_count());
            line("longest_local_downset", &idx.longest_child_downset());
            line("build_edge_visits", &idx.build_edge_visits());
            (idx.space_report(), idx.order_index().decomposition().dump())
        }
        Structure::Recursive => {
            let idx = RecursiveJoinIndex::new(&g).map_err(Failure::violation)?;
            let tree = idx.tree();
            line("tree_degree", &tree.d());
            line("tree_nodes", &tree.nodes().len());
            line("tree_height", &tree.height());
            line("tree_depth_bound", &tree.depth_bound());
            line("test_bound", &idx.test_bound());
            line("build_edge_visits", &idx.build_edge_visits());
            (idx.space_report(), tree.dump())
        }
    };
    out.push_str(&space_lines(&report));
    if args.dump {
        out.push_str(&dump);
    }
    write_output(None, &out)
}

fn space_lines(r: &SpaceReport) -> String {
    let names = SpaceReport::CSV_HEADER.split(',');
    let values = r.csv_row();
    names
        .zip(values.split(','))
        .filter(|(k, _)| !matches!(*k, "n" | "c"))
        .map(|(k, v)| format!("space.{k} {v}\n"))
        .collect()
}

fn query(args: &QueryArgs) -> Outcome {
    check_exponent(args.c)?;
    let g = read_graph(&args.file)?;
    for id in [args.x, args.y] {
        if id as usize >= g.n() {
            return Err(Failure::usage(format_args!("node {id} is outside [0, {})", g.n())));
        }
    }
    g.validate_reduction().map_err(Failure::violation)?;
    let (x, y) = (args.x, args.y);
    let (answer, stats) = match (args.kind, args.structure) {
        (Kind::Leq, Structure::Blocked) => {
            let idx = MeetIndex::new(&g, args.c).map_err(Failure::violation)?;
            let (b, s) = idx.primal().order_index().test_order_with_stats(x, y);
            (b.to_string(), s)
        }
        (Kind::Leq, Structure::Simple) => {
            let idx = SimpleJoinIndex::new(&g).map_err(Failure::violation)?;
            let (b, s) = idx.order_index().test_order_with_stats(x, y);
            (b.to_string(), s)
        }
        (Kind::Leq, Structure::Recursive) => {
            let idx = RecursiveJoinIndex::new(&g).map_err(Failure::violation)?;
            let (b, s) = idx.order_index().test_order_with_stats(x, y);
            (b.to_string(), s)
        }
        (Kind::Meet, Structure::Blocked) => {
            let (z, s) = MeetIndex::new(&g, args.c)
                .map_err(Failure::violation)?
                .meet_with_stats(x, y);
            (show(z), s)
        }
        (Kind::Join, Structure::Blocked) => {
            let (z, s) = MeetIndex::new(&g, args.c)
                .map_err(Failure::violation)?
                .join_with_stats(x, y);
            (show(z), s)
        }
        // The join structures answer meets on the flipped order.
        (kind, Structure::Simple) => {
            let h = if matches!(kind, Kind::Meet) { g.flip() } else { g };
            let (z, s) = SimpleJoinIndex::new(&h)
                .map_err(Failure::violation)?
                .join_with_stats(x, y);
            (show(z), s)
        }
        (kind, Structure::Recursive) => {
            let h = if matches!(kind, Kind::Meet) { g.flip() } else { g };
            let (z, s) = RecursiveJoinIndex::new(&h)
                .map_err(Failure::violation)?
                .join_with_stats(x, y);
            (show(z), s)
        }
    };
    let mut out = format!("{answer}\n");
    if args.stats {
        out.push_str(&stats_line(&stats));
    }
    write_output(None, &out)
}

fn show(z: Option<NodeId>) -> String {
    z.map_or_else(|| "null".to_string(), |z| z.to_string())
}

fn stats_line(s: &QueryStats) -> String {
    format!(
        "stats order_tests={} pair_tests={} probes={} array={} dict={} table={} block_checks={} scanned={} candidates={} blocks={} tree_nodes={}\n",
        s.order_tests,
        s.pair_tests,
        s.probes(),
        s.array_probes,
        s.dict_probes,
        s.table_probes,
        s.block_checks,
        s.scanned_elements,
        s.candidates,
        s.blocks_visited,
        s.tree_nodes_visited
    )
}

fn demo_dummy() -> Outcome {
    let demo = dummy_node_demo();
    write_output(None, &demo.report())?;
    if demo.refutes_claim() {
        Ok(())
    } else {
        Err(Failure::violation(
            "the modified graph did not show the expected violation",
        ))
    }
}
