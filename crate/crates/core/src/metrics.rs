//! Probe counting, space accounting and log-log scaling fits.
//!
//! Query paths are generic over [`Probe`]. Passing `&mut ()` compiles the
//! counting away; passing a [`QueryStats`] owned by the calling thread gives
//! exact per-query tallies with no shared state. Tallies from several threads
//! are combined with `+=`.

use std::fmt::Write as _;
use std::ops::AddAssign;

use thiserror::Error;

/// Receiver for the primitive steps a query performs.
pub trait Probe {
    /// One read of a header-meet or subheader-meet array cell.
    fn array(&mut self) {}
    /// One membership query against a local-downset dictionary.
    fn dict(&mut self) {}
    /// One read of an in-subblock meet table.
    fn table(&mut self) {}
    /// One block or subblock id lookup/comparison.
    fn block_check(&mut self) {}
    /// One full order test `x ≤ y`.
    fn order_test(&mut self) {}
    /// One "is this node above both query arguments" comparison.
    fn pair_test(&mut self) {}
    /// Elements read from a stored list (residual downsets, leaf chunks).
    fn scanned(&mut self, _count: usize) {}
    /// One element added to a candidate set.
    fn candidate(&mut self) {}
    /// One iteration of a per-block loop.
    fn block_visit(&mut self) {}
    /// Entered a decomposition-tree node at `depth` (root = 0).
    fn tree_node(&mut self, _depth: usize) {}
}

impl Probe for () {}

/// Counters for a single query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub order_tests: u64,
    pub pair_tests: u64,
    pub array_probes: u64,
    pub dict_probes: u64,
    pub table_probes: u64,
    pub block_checks: u64,
    pub scanned_elements: u64,
    pub candidates: u64,
    pub blocks_visited: u64,
    pub tree_nodes_visited: u64,
    pub max_depth: u64,
}

impl QueryStats {
    /// Memory probes: array, dictionary, table and block-id reads.
    pub fn probes(&self) -> u64 {
        self.array_probes + self.dict_probes + self.table_probes + self.block_checks
    }

    /// Every counted primitive step; the time surrogate used by the benches.
    pub fn work(&self) -> u64 {
        self.probes() + self.scanned_elements + self.candidates
    }
}

impl Probe for QueryStats {
    fn array(&mut self) {
        self.array_probes += 1;
    }
    fn dict(&mut self) {
        self.dict_probes += 1;
    }
    fn table(&mut self) {
        self.table_probes += 1;
    }
    fn block_check(&mut self) {
        self.block_checks += 1;
    }
    fn order_test(&mut self) {
        self.order_tests += 1;
    }
    fn pair_test(&mut self) {
        self.pair_tests += 1;
    }
    fn scanned(&mut self, count: usize) {
        self.scanned_elements += count as u64;
    }
    fn candidate(&mut self) {
        self.candidates += 1;
    }
    fn block_visit(&mut self) {
        self.blocks_visited += 1;
    }
    fn tree_node(&mut self, depth: usize) {
        self.tree_nodes_visited += 1;
        self.max_depth = self.max_depth.max(depth as u64);
    }
}

impl AddAssign for QueryStats {
    fn add_assign(&mut self, o: Self) {
        self.order_tests += o.order_tests;
        self.pair_tests += o.pair_tests;
        self.array_probes += o.array_probes;
        self.dict_probes += o.dict_probes;
        self.table_probes += o.table_probes;
        self.block_checks += o.block_checks;
        self.scanned_elements += o.scanned_elements;
        self.candidates += o.candidates;
        self.blocks_visited += o.blocks_visited;
        self.tree_nodes_visited += o.tree_nodes_visited;
        self.max_depth = self.max_depth.max(o.max_depth);
    }
}

/// Entry counts (id-sized cells) of a built index, by component.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpaceReport {
    pub n: usize,
    pub c: f64,
    /// Header-meet array cells.
    pub header_meet_cells: u64,
    /// Local-downset dictionary entries.
    pub down_entries: u64,
    /// Subheader-meet array cells.
    pub subheader_meet_cells: u64,
    /// In-subblock meet table cells.
    pub table_cells: u64,
    /// Residual-subblock downset list cells.
    pub residual_list_cells: u64,
    /// Local-downset list cells kept by the simple join structure.
    pub child_list_cells: u64,
    pub tree_nodes: u64,
    pub leaf_list_cells: u64,
}

impl SpaceReport {
    pub fn total(&self) -> u64 {
        self.header_meet_cells
            + self.down_entries
            + self.subheader_meet_cells
            + self.table_cells
            + self.residual_list_cells
            + self.child_list_cells
            + self.tree_nodes
            + self.leaf_list_cells
    }

    pub const CSV_HEADER: &'static str =
        "n,c,header_meet,down,subheader_meet,tables,residual_lists,child_lists,tree_nodes,leaf_lists,total";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.c,
            self.header_meet_cells,
            self.down_entries,
            self.subheader_meet_cells,
            self.table_cells,
            self.residual_list_cells,
            self.child_list_cells,
            self.tree_nodes,
            self.leaf_list_cells,
            self.total()
        )
    }
}

impl AddAssign for SpaceReport {
    fn add_assign(&mut self, o: Self) {
        self.header_meet_cells += o.header_meet_cells;
        self.down_entries += o.down_entries;
        self.subheader_meet_cells += o.subheader_meet_cells;
        self.table_cells += o.table_cells;
        self.residual_list_cells += o.residual_list_cells;
        self.child_list_cells += o.child_list_cells;
        self.tree_nodes += o.tree_nodes;
        self.leaf_list_cells += o.leaf_list_cells;
    }
}

/// Per-build summary written by `build-info`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IndexStats {
    pub n: usize,
    pub blocks: usize,
    pub header_meet_cells: u64,
    pub down_entries: u64,
    pub build_edge_visits: u64,
}

impl IndexStats {
    pub const CSV_HEADER: &'static str = "n,m,header_meet,down,build_edge_visits";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.n, self.blocks, self.header_meet_cells, self.down_entries, self.build_edge_visits
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("scaling fit needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("scaling fit needs positive coordinates, got ({0}, {1})")]
    NonPositive(f64, f64),
    #[error("scaling fit needs at least two distinct sizes")]
    Degenerate,
}

/// Least-squares line through `(ln n, ln y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit, FitError> {
    if points.len() < 4 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(FitError::NonPositive(x, y));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= f64::EPSILON {
        return Err(FitError::Degenerate);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = logs.iter().map(|p| (p.1 - (intercept + slope * p.0)).powi(2)).sum();
    Ok(ScalingFit {
        points: points.to_vec(),
        slope,
        intercept,
        residual: (sse / k).sqrt(),
    })
}

impl ScalingFit {
    pub fn csv(&self) -> String {
        let mut s = String::from("n,value\n");
        for (x, y) in &self.points {
            writeln!(s, "{x},{y}").unwrap();
        }
        writeln!(
            s,
            "# slope={:.6} intercept={:.6} residual={:.6}",
            self.slope, self.intercept, self.residual
        )
        .unwrap();
        s
    }
}
