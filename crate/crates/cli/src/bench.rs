//! `lattice bench`: one CSV row per (family, size, c, structure).

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use lattice_core::degree_index::{max_degree, RecursiveJoinIndex, SimpleJoinIndex};
use lattice_core::generators::{Family, FamilySpec, DEFAULT_P};
use lattice_core::meet_engine::MeetIndex;
use lattice_core::metrics::{fit_scaling, QueryStats, SpaceReport};
use lattice_core::trg::Trg;
use lattice_core::NodeId;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{write_output, Failure, Structure};

#[derive(Args)]
pub(crate) struct BenchArgs {
    /// Families to generate, comma separated.
    #[arg(long = "family", alias = "families", value_delimiter = ',', required = true)]
    families: Vec<Family>,
    /// Target element counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Block-size exponents for the blocked structure.
    #[arg(long = "c", value_delimiter = ',', default_value = "0.5")]
    c: Vec<f64>,
    #[arg(
        long = "structure",
        value_enum,
        value_delimiter = ',',
        default_value = "blocked,simple,recursive"
    )]
    structures: Vec<Structure>,
    /// Random queries per row.
    #[arg(long, default_value_t = 1000)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relation probability for the random families.
    #[arg(long, default_value_t = DEFAULT_P)]
    p: f64,
    /// Worker threads; rows are printed in the same order regardless.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Add wall-clock build and query times (makes output run-dependent).
    #[arg(long)]
    timing: bool,
    /// Print log-log slopes of space and order tests to standard error.
    #[arg(long)]
    fit: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

const ROW_HEAD: &str = "family,target,seed,structure,edges,d,query,queries";
const ROW_TAIL: &str = "build_edge_visits,mean_order_tests,mean_pair_tests,mean_probes,mean_work,max_order_tests";

struct Row {
    family: Family,
    target: usize,
    structure: Structure,
    result: Result<Measured, String>,
}

struct Measured {
    edges: usize,
    d: usize,
    query: &'static str,
    space: SpaceReport,
    build_edge_visits: u64,
    total: QueryStats,
    max_order_tests: u64,
    build_ms: f64,
    query_ns: f64,
}

impl Measured {
    /// Order tests of a meet; "above both arguments" tests of a join.
    fn tests(&self) -> u64 {
        if self.query == "meet" {
            self.total.order_tests
        } else {
            self.total.pair_tests
        }
    }
}

impl BenchArgs {
    fn header(&self) -> String {
        let mut h = format!("{ROW_HEAD},{},{ROW_TAIL}", SpaceReport::CSV_HEADER);
        if self.timing {
            h.push_str(",build_ms,query_ns");
        }
        h.push_str(",error");
        h
    }

    fn line(&self, r: &Row) -> String {
        let lead = format!("{},{},{},{}", r.family, r.target, self.seed, r.structure);
        match &r.result {
            Ok(m) => {
                let q = self.queries.max(1) as f64;
                let mut s = format!(
                    "{lead},{},{},{},{},{},{},{:.3},{:.3},{:.3},{:.3},{}",
                    m.edges,
                    m.d,
                    m.query,
                    self.queries,
                    m.space.csv_row(),
                    m.build_edge_visits,
                    m.total.order_tests as f64 / q,
                    m.total.pair_tests as f64 / q,
                    m.total.probes() as f64 / q,
                    m.total.work() as f64 / q,
                    m.max_order_tests
                );
                if self.timing {
                    s.push_str(&format!(",{:.3},{:.1}", m.build_ms, m.query_ns));
                }
                s.push(',');
                s
            }
            Err(e) => {
                let blanks = self.header().split(',').count() - 5;
                format!("{lead}{}{}", ",".repeat(blanks + 1), e.replace(',', ";"))
            }
        }
    }
}

fn pairs(n: usize, count: usize, seed: u64) -> Vec<(NodeId, NodeId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.random_range(0..n as NodeId), rng.random_range(0..n as NodeId)))
        .collect()
}

type QueryFn = Box<dyn Fn(NodeId, NodeId) -> QueryStats>;

fn measure(g: &Trg, structure: Structure, c: f64, queries: &[(NodeId, NodeId)]) -> Result<Measured, String> {
    let start = Instant::now();
    let (space, visits, query, run): (SpaceReport, u64, &'static str, QueryFn) = match structure {
        Structure::Blocked => {
            let idx = MeetIndex::new(g, c).map_err(|e| e.to_string())?;
            let (s, v) = (idx.space_report(), idx.build_edge_visits());
            (s, v, "meet", Box::new(move |x, y| idx.meet_with_stats(x, y).1))
        }
        Structure::Simple => {
            let idx = SimpleJoinIndex::new(g).map_err(|e| e.to_string())?;
            let (s, v) = (idx.space_report(), idx.build_edge_visits());
            (s, v, "join", Box::new(move |x, y| idx.join_with_stats(x, y).1))
        }
        Structure::Recursive => {
            let idx = RecursiveJoinIndex::new(g).map_err(|e| e.to_string())?;
            let (s, v) = (idx.space_report(), idx.build_edge_visits());
            (s, v, "join", Box::new(move |x, y| idx.join_with_stats(x, y).1))
        }
    };
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let mut total = QueryStats::default();
    let mut max_order_tests = 0;
    for &(x, y) in queries {
        let s = run(x, y);
        max_order_tests = max_order_tests.max(s.order_tests);
        total += s;
    }
    let query_ns = start.elapsed().as_secs_f64() * 1e9 / queries.len().max(1) as f64;
    Ok(Measured {
        edges: g.edge_count(),
        d: max_degree(g).d,
        query,
        space: SpaceReport { c, ..space },
        build_edge_visits: visits,
        total,
        max_order_tests,
        build_ms,
        query_ns,
    })
}

fn rows_for(args: &BenchArgs, family: Family, target: usize) -> Vec<Row> {
    let mut spec = FamilySpec::for_target(family, target, args.seed);
    spec.p = args.p;
    let graph = spec.generate().map_err(|e| e.to_string());
    let mut rows = Vec::new();
    for &structure in &args.structures {
        // The join structures have no block-size parameter.
        let cs: &[f64] = if structure == Structure::Blocked {
            &args.c
        } else {
            &[0.5]
        };
        for &c in cs {
            let result = graph.as_ref().map_err(Clone::clone).and_then(|g| {
                let queries = pairs(g.n(), args.queries, args.seed);
                measure(g, structure, c, &queries)
            });
            rows.push(Row {
                family,
                target,
                structure,
                result,
            });
        }
    }
    rows
}

fn fits(rows: &[Row]) -> String {
    let mut out = String::new();
    let mut groups: Vec<(Family, Structure, f64)> = Vec::new();
    for r in rows {
        if let Ok(m) = &r.result {
            let key = (r.family, r.structure, m.space.c);
            if !groups.contains(&key) {
                groups.push(key);
            }
        }
    }
    for (family, structure, c) in groups {
        let members: Vec<&Measured> = rows
            .iter()
            .filter(|r| r.family == family && r.structure == structure)
            .filter_map(|r| r.result.as_ref().ok())
            .filter(|m| m.space.c == c)
            .collect();
        let space: Vec<(f64, f64)> = members
            .iter()
            .map(|m| (m.space.n as f64, m.space.total() as f64))
            .collect();
        let tests: Vec<(f64, f64)> = members.iter().map(|m| (m.space.n as f64, m.tests() as f64)).collect();
        let slope = |p: &[(f64, f64)]| match fit_scaling(p) {
            Ok(f) => format!("{:.3}", f.slope),
            Err(e) => format!("n/a ({e})"),
        };
        out.push_str(&format!(
            "# {family} {structure} c={c}: space slope {}, order-test slope {}\n",
            slope(&space),
            slope(&tests)
        ));
    }
    out
}

pub(crate) fn run(args: &BenchArgs) -> Result<(), Failure> {
    if let Some(c) = args.c.iter().find(|c| !(0.5..=1.0).contains(*c)) {
        return Err(Failure::usage(format_args!("--c values must lie in [0.5, 1], got {c}")));
    }
    if args.jobs == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    let jobs: Vec<(Family, usize)> = args
        .families
        .iter()
        .flat_map(|&f| args.sizes.iter().map(move |&n| (f, n)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(Failure::usage)?;
    let rows: Vec<Row> = pool.install(|| {
        jobs.par_iter()
            .map(|&(f, n)| rows_for(args, f, n))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });
    let mut csv = args.header();
    csv.push('\n');
    for r in &rows {
        csv.push_str(&args.line(r));
        csv.push('\n');
    }
    write_output(args.out.as_deref(), &csv)?;
    if args.fit {
        eprint!("{}", fits(&rows));
    }
    let failed = rows.iter().filter(|r| r.result.is_err()).count();
    if failed > 0 {
        return Err(Failure::violation(format_args!("{failed} rows could not be built")));
    }
    Ok(())
}
