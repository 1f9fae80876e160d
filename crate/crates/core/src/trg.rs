//! Transitive reduction graphs (TRGs): the covering relation of a partial
//! lattice stored as a DAG with sorted in/out adjacency.
//!
//! An edge `(u, v)` means `v` covers `u`, so out-neighbours point up the order
//! and in-neighbours point down.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Dense element identifier in `[0, n)`.
pub type NodeId = u32;

/// Errors raised while assembling a TRG from an edge list.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrgError {
    #[error("node count must be positive")]
    Empty,
    #[error("node count {0} exceeds the supported maximum")]
    TooLarge(usize),
    #[error("edge ({u}, {v}) references a node outside [0, {n})")]
    OutOfRange { u: u64, v: u64, n: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: NodeId, v: NodeId },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected header line `lattice v1`")]
    BadHeader,
    #[error("expected `<n> <m>` counts line")]
    BadCounts,
    #[error("malformed edge line")]
    Malformed,
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("unexpected end of input")]
    Truncated,
    #[error(transparent)]
    Graph(#[from] TrgError),
}

/// A parse failure with the 1-based line number it was detected on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// The input graph contains a directed cycle, listed in edge order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph contains a cycle through {}", format_ids(.0))]
pub struct CycleError(pub Vec<NodeId>);

/// Why a graph is not a transitive reduction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionViolation {
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("edge ({from}, {to}) is transitive")]
    TransitiveEdge { from: NodeId, to: NodeId },
}

fn format_ids(ids: &[NodeId]) -> String {
    let parts: Vec<String> = ids.iter().map(|x| x.to_string()).collect();
    parts.join(" -> ")
}

/// Covering-relation DAG with adjacency kept in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trg {
    out_adj: Vec<Vec<NodeId>>,
    in_adj: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Trg {
    /// Builds a graph from `(lower, upper)` covering pairs.
    ///
    /// Rejects out-of-range ids, self-loops and duplicates; does not check
    /// acyclicity or reduction (see [`Trg::validate_reduction`]).
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, TrgError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if n == 0 {
            return Err(TrgError::Empty);
        }
        if n >= NodeId::MAX as usize {
            return Err(TrgError::TooLarge(n));
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(TrgError::OutOfRange {
                    u: u as u64,
                    v: v as u64,
                    n,
                });
            }
            if u == v {
                return Err(TrgError::SelfLoop(u));
            }
            out_adj[u as usize].push(v);
            in_adj[v as usize].push(u);
            edge_count += 1;
        }
        for (u, list) in out_adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(TrgError::DuplicateEdge {
                    u: u as NodeId,
                    v: w[0],
                });
            }
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Trg {
            out_adj,
            in_adj,
            edge_count,
        })
    }

    /// Parses the line-oriented `lattice v1` text format.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let last_line = text.lines().count().max(1);
        let err = |line, kind| ParseError { line, kind };

        let (line, header) = lines.next().ok_or_else(|| err(last_line, ParseErrorKind::Truncated))?;
        if header.split_whitespace().collect::<Vec<_>>() != ["lattice", "v1"] {
            return Err(err(line, ParseErrorKind::BadHeader));
        }

        let (counts_line, counts) = lines.next().ok_or_else(|| err(last_line, ParseErrorKind::Truncated))?;
        let (n, m) = parse_pair::<usize>(counts).ok_or_else(|| err(counts_line, ParseErrorKind::BadCounts))?;

        let mut edges = Vec::with_capacity(m);
        let mut seen = rustc_hash::FxHashSet::default();
        for (line, body) in lines {
            if edges.len() == m {
                return Err(err(
                    line,
                    ParseErrorKind::EdgeCount {
                        expected: m,
                        found: m + 1,
                    },
                ));
            }
            let (u, v) = parse_pair::<u64>(body).ok_or_else(|| err(line, ParseErrorKind::Malformed))?;
            if u as usize >= n || v as usize >= n {
                return Err(err(line, TrgError::OutOfRange { u, v, n }.into()));
            }
            let (u, v) = (u as NodeId, v as NodeId);
            if u == v {
                return Err(err(line, TrgError::SelfLoop(u).into()));
            }
            if !seen.insert((u, v)) {
                return Err(err(line, TrgError::DuplicateEdge { u, v }.into()));
            }
            edges.push((u, v));
        }
        if edges.len() < m {
            return Err(err(
                last_line,
                ParseErrorKind::EdgeCount {
                    expected: m,
                    found: edges.len(),
                },
            ));
        }
        Trg::from_edges(n, edges).map_err(|e| err(counts_line, e.into()))
    }

    /// Serializes to the `lattice v1` format, edges sorted by `(u, v)`.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 + self.edge_count * 10);
        writeln!(s, "lattice v1").unwrap();
        writeln!(s, "{} {}", self.n(), self.edge_count).unwrap();
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    /// Graphviz `digraph`, drawn bottom-up, one node and one edge per line.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
        for x in 0..self.n() {
            writeln!(s, "  {x};").unwrap();
        }
        for (u, v) in self.edges() {
            writeln!(s, "  {u} -> {v};").unwrap();
        }
        s.push_str("}\n");
        s
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Nodes covering `x`, ascending.
    #[inline]
    pub fn out_neighbours(&self, x: NodeId) -> &[NodeId] {
        &self.out_adj[x as usize]
    }

    /// Nodes covered by `x`, ascending.
    #[inline]
    pub fn in_neighbours(&self, x: NodeId) -> &[NodeId] {
        &self.in_adj[x as usize]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.n() as NodeId
    }

    /// All `(lower, upper)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u as NodeId, v)))
    }

    /// The order-dual graph: every edge reversed.
    pub fn flip(&self) -> Trg {
        Trg {
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
            edge_count: self.edge_count,
        }
    }

    /// Elements with no upper cover.
    pub fn maximal_elements(&self) -> Vec<NodeId> {
        self.nodes().filter(|&x| self.out_neighbours(x).is_empty()).collect()
    }

    /// Elements with no lower cover.
    pub fn minimal_elements(&self) -> Vec<NodeId> {
        self.nodes().filter(|&x| self.in_neighbours(x).is_empty()).collect()
    }

    /// The unique maximal element, if there is exactly one.
    pub fn top(&self) -> Option<NodeId> {
        match self.maximal_elements().as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    /// The graph itself if it has a top, otherwise a copy with a new node `n`
    /// covering every maximal element. The second value is that new node.
    pub fn with_top(&self) -> (Trg, Option<NodeId>) {
        if self.top().is_some() {
            return (self.clone(), None);
        }
        let t = self.n() as NodeId;
        let extra = self.maximal_elements().into_iter().map(|m| (m, t));
        let g = Trg::from_edges(self.n() + 1, self.edges().chain(extra)).expect("valid augmentation");
        (g, Some(t))
    }

    /// Topological order with ties broken by ascending id.
    pub fn linear_extension(&self) -> Result<LinearExtension, CycleError> {
        let n = self.n();
        let mut indeg: Vec<usize> = self.in_adj.iter().map(Vec::len).collect();
        let mut heap: BinaryHeap<Reverse<NodeId>> =
            self.nodes().filter(|&x| indeg[x as usize] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(x)) = heap.pop() {
            order.push(x);
            for &v in self.out_neighbours(x) {
                indeg[v as usize] -= 1;
                if indeg[v as usize] == 0 {
                    heap.push(Reverse(v));
                }
            }
        }
        if order.len() < n {
            return Err(CycleError(self.find_cycle(&indeg)));
        }
        Ok(LinearExtension::from_order(order))
    }

    // Every node with positive residual in-degree has an unplaced in-neighbour,
    // so walking downwards among them must revisit a node.
    fn find_cycle(&self, indeg: &[usize]) -> Vec<NodeId> {
        let start = indeg.iter().position(|&d| d > 0).expect("cycle exists") as NodeId;
        let mut seen_at = vec![usize::MAX; self.n()];
        let mut walk = Vec::new();
        let mut x = start;
        while seen_at[x as usize] == usize::MAX {
            seen_at[x as usize] = walk.len();
            walk.push(x);
            x = *self
                .in_neighbours(x)
                .iter()
                .find(|&&u| indeg[u as usize] > 0)
                .expect("unplaced node keeps an unplaced in-neighbour");
        }
        let mut cycle = walk[seen_at[x as usize]..].to_vec();
        cycle.reverse();
        cycle
    }

    /// Checks that the graph is acyclic and has no transitive edges.
    ///
    /// Reports the first transitive edge in `(u, v)` lexicographic order.
    pub fn validate_reduction(&self) -> Result<(), ReductionViolation> {
        let ext = self.linear_extension()?;
        let n = self.n();
        // strictly_above[x] = every node reachable from x by a path of length >= 1
        let mut strictly_above = vec![FixedBitSet::new(); n];
        for &x in ext.order().iter().rev() {
            let mut acc = FixedBitSet::with_capacity(n);
            for &v in self.out_neighbours(x) {
                acc.insert(v as usize);
                acc.union_with(&strictly_above[v as usize]);
            }
            strictly_above[x as usize] = acc;
        }
        for u in self.nodes() {
            let outs = self.out_neighbours(u);
            for &v in outs {
                if outs
                    .iter()
                    .any(|&w| w != v && strictly_above[w as usize].contains(v as usize))
                {
                    return Err(ReductionViolation::TransitiveEdge { from: u, to: v });
                }
            }
        }
        Ok(())
    }

    /// `↓x`, optionally confined to `restrict` (which must contain `x`).
    pub fn downset(&self, x: NodeId, restrict: Option<&NodeSet>) -> NodeSet {
        self.search(x, restrict, |g, z| g.in_neighbours(z))
    }

    /// `↑x`, optionally confined to `restrict` (which must contain `x`).
    pub fn upset(&self, x: NodeId, restrict: Option<&NodeSet>) -> NodeSet {
        self.search(x, restrict, |g, z| g.out_neighbours(z))
    }

    fn search<'a>(
        &'a self,
        x: NodeId,
        restrict: Option<&NodeSet>,
        next: impl Fn(&'a Trg, NodeId) -> &'a [NodeId],
    ) -> NodeSet {
        let n = self.n();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut stack = vec![x];
        seen.insert(x as usize);
        while let Some(z) = stack.pop() {
            for &w in next(self, z) {
                if seen.contains(w as usize) || restrict.is_some_and(|r| !r.contains(w)) {
                    continue;
                }
                seen.insert(w as usize);
                stack.push(w);
            }
        }
        NodeSet::from_bitset(seen)
    }
}

fn parse_pair<T: std::str::FromStr>(line: &str) -> Option<(T, T)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

impl fmt::Display for Trg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A total order compatible with the lattice order, plus its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearExtension {
    order: Vec<NodeId>,
    position: Vec<u32>,
}

impl LinearExtension {
    fn from_order(order: Vec<NodeId>) -> Self {
        let mut position = vec![0; order.len()];
        for (i, &x) in order.iter().enumerate() {
            position[x as usize] = i as u32;
        }
        LinearExtension { order, position }
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    #[inline]
    pub fn position(&self, x: NodeId) -> u32 {
        self.position[x as usize]
    }

    pub fn positions(&self) -> &[u32] {
        &self.position
    }

    /// Sorts `nodes` into extension order.
    pub fn sort(&self, nodes: &mut [NodeId]) {
        nodes.sort_unstable_by_key(|&x| self.position[x as usize]);
    }
}

/// A set of node ids over a fixed universe `[0, n)`.
///
/// Small sets are kept as a sorted list, large ones as a bitmap; the choice
/// never affects results.
#[derive(Debug, Clone)]
pub enum NodeSet {
    Sparse { universe: usize, ids: Vec<NodeId> },
    Dense(FixedBitSet),
}

impl NodeSet {
    pub fn from_ids<I: IntoIterator<Item = NodeId>>(universe: usize, ids: I) -> Self {
        let mut v: Vec<NodeId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self::choose(universe, v)
    }

    fn from_bitset(bits: FixedBitSet) -> Self {
        let universe = bits.len();
        let count = bits.count_ones(..);
        if Self::dense_for(universe, count) {
            NodeSet::Dense(bits)
        } else {
            NodeSet::Sparse {
                universe,
                ids: bits.ones().map(|i| i as NodeId).collect(),
            }
        }
    }

    fn choose(universe: usize, ids: Vec<NodeId>) -> Self {
        if Self::dense_for(universe, ids.len()) {
            let mut bits = FixedBitSet::with_capacity(universe);
            ids.iter().for_each(|&x| bits.insert(x as usize));
            NodeSet::Dense(bits)
        } else {
            NodeSet::Sparse { universe, ids }
        }
    }

    fn dense_for(universe: usize, count: usize) -> bool {
        count * 32 >= universe
    }

    pub fn contains(&self, x: NodeId) -> bool {
        match self {
            NodeSet::Sparse { ids, .. } => ids.binary_search(&x).is_ok(),
            NodeSet::Dense(bits) => bits.contains(x as usize),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            NodeSet::Sparse { ids, .. } => ids.len(),
            NodeSet::Dense(bits) => bits.count_ones(..),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn universe(&self) -> usize {
        match self {
            NodeSet::Sparse { universe, .. } => *universe,
            NodeSet::Dense(bits) => bits.len(),
        }
    }

    /// Members in ascending order.
    pub fn to_vec(&self) -> Vec<NodeId> {
        match self {
            NodeSet::Sparse { ids, .. } => ids.clone(),
            NodeSet::Dense(bits) => bits.ones().map(|i| i as NodeId).collect(),
        }
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let ids: Vec<NodeId> = self.to_vec().into_iter().filter(|&x| other.contains(x)).collect();
        Self::choose(self.universe(), ids)
    }
}

impl PartialEq for NodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.universe() == other.universe() && self.to_vec() == other.to_vec()
    }
}

impl Eq for NodeSet {}

/// Epoch-stamped visitation marks; clearing is O(1).
#[derive(Debug, Clone)]
pub(crate) struct Marks {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Marks {
    pub(crate) fn new(n: usize) -> Self {
        Marks {
            stamp: vec![0; n],
            epoch: 1,
        }
    }

    pub(crate) fn reset(&mut self) {
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    #[inline]
    pub(crate) fn is_marked(&self, x: NodeId) -> bool {
        self.stamp[x as usize] == self.epoch
    }

    /// Marks `x`; returns false if it was already marked.
    #[inline]
    pub(crate) fn mark(&mut self, x: NodeId) -> bool {
        let s = &mut self.stamp[x as usize];
        if *s == self.epoch {
            false
        } else {
            *s = self.epoch;
            true
        }
    }

    #[inline]
    pub(crate) fn unmark(&mut self, x: NodeId) {
        self.stamp[x as usize] = 0;
    }
}

/// DFS over in-edges from `x`, staying inside `member`; appends visited nodes
/// (including `x`) to `out` and returns edges inspected.
pub(crate) fn collect_down(
    g: &Trg,
    x: NodeId,
    member: impl Fn(NodeId) -> bool,
    marks: &mut Marks,
    out: &mut Vec<NodeId>,
) -> u64 {
    marks.reset();
    marks.mark(x);
    out.push(x);
    let mut edges = 0u64;
    let mut stack = vec![x];
    while let Some(z) = stack.pop() {
        for &w in g.in_neighbours(z) {
            edges += 1;
            if member(w) && marks.mark(w) {
                out.push(w);
                stack.push(w);
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn diamond() -> Trg {
        Trg::parse("lattice v1\n4 4\n0 1\n0 2\n1 3\n2 3\n").unwrap()
    }

    fn chain(n: usize) -> Trg {
        Trg::from_edges(n, (1..n as NodeId).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn parse_diamond_and_singleton() {
        let g = diamond();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.out_neighbours(0), &[1, 2]);
        assert_eq!(g.in_neighbours(3), &[1, 2]);

        let s = Trg::parse("lattice v1\n1 0\n").unwrap();
        assert_eq!((s.n(), s.edge_count()), (1, 0));
    }

    #[test]
    fn parse_divisors_of_12() {
        // 1 2 3 4 6 12 -> ids 0..6
        let vals = [1u32, 2, 3, 4, 6, 12];
        let mut covers = Vec::new();
        for (i, &a) in vals.iter().enumerate() {
            for (j, &b) in vals.iter().enumerate() {
                let between = vals.iter().any(|&c| c != a && c != b && c % a == 0 && b % c == 0);
                if a != b && b % a == 0 && !between {
                    covers.push((i, j));
                }
            }
        }
        let text = format!(
            "lattice v1\n# divisors of 12\n6 {}\n{}",
            covers.len(),
            covers.iter().map(|(u, v)| format!("{u} {v}\n")).collect::<String>()
        );
        let g = Trg::parse(&text).unwrap();
        let got: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u as usize, v as usize)).collect();
        assert_eq!(got, vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 4), (3, 5), (4, 5)]);
        assert!(g.validate_reduction().is_ok());
    }

    #[test]
    fn parse_comments_and_blank_lines() {
        let g = Trg::parse("# hdr\nlattice v1 # format\n\n3 2\n0 1 # a\n\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("lattice v2\n1 0\n", 1),
            ("lattice v1\n3\n", 2),
            ("lattice v1\n3 2\n0 1\n0 x\n", 4),
            ("lattice v1\n3 1\n0 3\n", 3),
            ("lattice v1\n3 2\n0 1\n0 1\n", 4),
            ("lattice v1\n3 1\n2 2\n", 3),
            ("lattice v1\n3 1\n0 1\n1 2\n", 4),
        ];
        for (text, line) in cases {
            let e = Trg::parse(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
        }
        let e = Trg::parse("lattice v1\n3 2\n0 1\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::EdgeCount { expected: 2, found: 1 }));
        assert!(matches!(Trg::parse("").unwrap_err().kind, ParseErrorKind::Truncated));
    }

    #[test]
    fn text_round_trip() {
        let g = diamond();
        assert_eq!(Trg::parse(&g.to_text()).unwrap(), g);
        let dot = g.to_dot();
        assert!(dot.contains("  0 -> 1;") && dot.starts_with("digraph"));
    }

    #[test]
    fn validate_reduction_cases() {
        assert_eq!(diamond().validate_reduction(), Ok(()));
        let t = Trg::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)]).unwrap();
        assert_eq!(
            t.validate_reduction(),
            Err(ReductionViolation::TransitiveEdge { from: 0, to: 3 })
        );
        let c = Trg::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        match c.validate_reduction() {
            Err(ReductionViolation::Cycle(CycleError(cyc))) => {
                assert_eq!(cyc.len(), 3);
                for w in 0..3 {
                    let (a, b) = (cyc[w], cyc[(w + 1) % 3]);
                    assert!(c.out_neighbours(a).contains(&b));
                }
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn linear_extension_tie_break() {
        assert_eq!(chain(3).linear_extension().unwrap().order(), &[0, 1, 2]);
        assert_eq!(diamond().linear_extension().unwrap().order(), &[0, 1, 2, 3]);
        // bottom 3 under an antichain {0,1,2}
        let g = Trg::from_edges(4, [(3, 0), (3, 1), (3, 2)]).unwrap();
        let ext = g.linear_extension().unwrap();
        assert_eq!(ext.order(), &[3, 0, 1, 2]);
        assert_eq!(ext.position(3), 0);
        let cyc = Trg::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert!(cyc.linear_extension().is_err());
    }

    #[test]
    fn downsets_and_upsets() {
        let g = diamond();
        assert_eq!(g.downset(3, None).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(g.downset(1, None).to_vec(), vec![0, 1]);
        let r = NodeSet::from_ids(4, [1, 3]);
        assert_eq!(g.downset(3, Some(&r)).to_vec(), vec![1, 3]);
        assert_eq!(g.upset(0, None).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(g.upset(2, None).to_vec(), vec![2, 3]);
        let s = Trg::parse("lattice v1\n1 0\n").unwrap();
        assert_eq!(s.upset(0, None).to_vec(), vec![0]);
    }

    #[test]
    fn flip_reverses_edges() {
        let f = chain(3).flip();
        assert_eq!(f.edges().collect::<Vec<_>>(), vec![(1, 0), (2, 1)]);
        let d = diamond();
        let fd = d.flip();
        assert_eq!(fd.edges().count(), 4);
        assert!(d.edges().all(|(u, v)| fd.out_neighbours(v).contains(&u)));
        assert_eq!(fd.flip(), d);
    }

    #[test]
    fn node_set_representations_agree() {
        let sparse = NodeSet::from_ids(1000, [5, 3, 9]);
        assert!(matches!(sparse, NodeSet::Sparse { .. }));
        let dense = NodeSet::from_ids(10, [5, 3, 9]);
        assert!(matches!(dense, NodeSet::Dense(_)));
        assert_eq!(sparse.to_vec(), dense.to_vec());
        assert!(sparse.contains(9) && dense.contains(9) && !dense.contains(4));
        assert_eq!(dense.intersection(&NodeSet::from_ids(10, [3, 4])).to_vec(), vec![3]);
    }

    #[test]
    fn marks_epochs() {
        let mut m = Marks::new(3);
        m.reset();
        assert!(m.mark(1));
        assert!(!m.mark(1));
        assert!(m.is_marked(1));
        m.reset();
        assert!(!m.is_marked(1));
    }
}
