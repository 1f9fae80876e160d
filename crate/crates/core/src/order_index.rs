//! Constant-time order testing.
//!
//! For every block header `h_i` the index keeps an `n`-cell array of
//! `h_i ∧ x`, and for every element `x` a hash set of its local downset
//! `↓x ∩ B_x`. A query `x ≤ y` with `x` in principal block `B_i` reduces to
//! one array read (`y_i = h_i ∧ y`) and one set lookup (`x ∈ DOWN(y_i)`).

use rustc_hash::FxHashSet;

use crate::decomposition::{BlockDecomposition, DecompositionParams, Scratch};
use crate::metrics::{IndexStats, Probe, QueryStats, SpaceReport};
use crate::trg::{collect_down, CycleError, LinearExtension, NodeId, Trg};

/// Runs the reverse-extension sweep that computes `pivot ∧ z` for every `z`
/// reachable inside `member`: each `y ∈ ↓pivot`, taken from last to first
/// in extension order, claims every still-unclaimed element of its upset.
/// `record(z, y)` is called once per claimed `z`. Returns edges inspected.
pub(crate) fn sweep_meets(
    g: &Trg,
    ext: &LinearExtension,
    pivot: NodeId,
    member: impl Fn(NodeId) -> bool + Copy,
    sc: &mut Scratch,
    mut record: impl FnMut(NodeId, NodeId),
) -> u64 {
    let mut down = std::mem::take(&mut sc.buf);
    down.clear();
    let mut edges = collect_down(g, pivot, member, &mut sc.marks, &mut down);
    ext.sort(&mut down);
    sc.marks.reset();
    let mut stack = Vec::new();
    for &y in down.iter().rev() {
        if !sc.marks.mark(y) {
            continue;
        }
        record(y, y);
        stack.push(y);
        while let Some(z) = stack.pop() {
            for &w in g.out_neighbours(z) {
                edges += 1;
                if member(w) && sc.marks.mark(w) {
                    record(w, y);
                    stack.push(w);
                }
            }
        }
    }
    sc.buf = down;
    edges
}

/// Header-meet arrays plus local-downset sets over a block decomposition.
#[derive(Debug, Clone)]
pub struct OrderIndex {
    bd: BlockDecomposition,
    /// `m × n`, row `i` holds `h_i ∧ x`; `n` stands for null.
    header_meet: Vec<NodeId>,
    down: Vec<FxHashSet<NodeId>>,
    build_edge_visits: u64,
}

impl OrderIndex {
    /// Decomposes `g` with block size `⌈n^c⌉` and builds the index.
    pub fn new(g: &Trg, c: f64) -> Result<Self, CycleError> {
        let k = DecompositionParams::for_exponent(g.n(), c).k;
        Self::with_block_size(g, k)
    }

    pub fn with_block_size(g: &Trg, k: usize) -> Result<Self, CycleError> {
        let ext = g.linear_extension()?;
        let mut sc = Scratch::new(g.n());
        let bd = BlockDecomposition::build(g, ext, k, &mut sc);
        Ok(Self::build_with(g, bd, &mut sc))
    }

    /// Builds the index over an existing decomposition of `g`.
    pub fn build(g: &Trg, bd: BlockDecomposition) -> Self {
        let mut sc = Scratch::new(g.n());
        Self::build_with(g, bd, &mut sc)
    }

    pub(crate) fn build_with(g: &Trg, bd: BlockDecomposition, sc: &mut Scratch) -> Self {
        let n = g.n();
        let m = bd.m();
        let null = n as NodeId;
        let mut edges = bd.edge_visits();
        let mut header_meet = vec![null; m * n];
        for (i, b) in bd.blocks().iter().enumerate() {
            let row = &mut header_meet[i * n..(i + 1) * n];
            edges += sweep_meets(
                g,
                bd.linear_extension(),
                b.header,
                |_| true,
                sc,
                |z, y| {
                    row[z as usize] = y;
                },
            );
        }

        let mut down: Vec<FxHashSet<NodeId>> = vec![FxHashSet::default(); n];
        for b in bd.blocks() {
            down[b.header as usize] = b.members.iter().copied().collect();
        }
        let block_of = bd.block_ids();
        for x in g.nodes() {
            let bx = block_of[x as usize];
            if (bx as usize) < m && bd.block(bx as usize).header == x {
                continue;
            }
            sc.buf.clear();
            edges += collect_down(g, x, |w| block_of[w as usize] == bx, &mut sc.marks, &mut sc.buf);
            down[x as usize] = sc.buf.iter().copied().collect();
        }
        OrderIndex {
            bd,
            header_meet,
            down,
            build_edge_visits: edges,
        }
    }

    pub fn n(&self) -> usize {
        self.down.len()
    }

    pub fn m(&self) -> usize {
        self.bd.m()
    }

    pub fn decomposition(&self) -> &BlockDecomposition {
        &self.bd
    }

    #[inline]
    pub(crate) fn null(&self) -> NodeId {
        self.n() as NodeId
    }

    /// `x ≤ y`.
    pub fn test_order(&self, x: NodeId, y: NodeId) -> bool {
        self.test_order_with(x, y, &mut ())
    }

    /// `x ≤ y`, with its probes reported to `p`.
    #[inline]
    pub fn test_order_with<P: Probe>(&self, x: NodeId, y: NodeId, p: &mut P) -> bool {
        p.order_test();
        let m = self.m() as u32;
        p.block_check();
        let bx = self.bd.block_of(x);
        if bx < m {
            p.array();
            let yi = self.header_meet[bx as usize * self.n() + y as usize];
            if yi == self.null() {
                return false;
            }
            p.block_check();
            if self.bd.block_of(yi) != bx {
                return false;
            }
            p.dict();
            self.down[yi as usize].contains(&x)
        } else {
            p.block_check();
            if self.bd.block_of(y) != m {
                return false;
            }
            p.dict();
            self.down[y as usize].contains(&x)
        }
    }

    /// `x ≤ y` together with the counters of this single query.
    pub fn test_order_with_stats(&self, x: NodeId, y: NodeId) -> (bool, QueryStats) {
        let mut s = QueryStats::default();
        let r = self.test_order_with(x, y, &mut s);
        (r, s)
    }

    /// `h_i ∧ x` with one array read.
    pub fn meet_with_header(&self, i: usize, x: NodeId) -> Option<NodeId> {
        let v = self.header_meet_raw(i, x, &mut ());
        (v != self.null()).then_some(v)
    }

    #[inline]
    pub(crate) fn header_meet_raw<P: Probe>(&self, i: usize, x: NodeId, p: &mut P) -> NodeId {
        p.array();
        self.header_meet[i * self.n() + x as usize]
    }

    /// `↓x ∩ B_x`.
    pub fn local_downset(&self, x: NodeId) -> &FxHashSet<NodeId> {
        &self.down[x as usize]
    }

    /// Total local-downset entries, `Σ_x |↓x ∩ B_x|`.
    pub fn down_entries(&self) -> u64 {
        self.down.iter().map(|s| s.len() as u64).sum()
    }

    /// The stored-entry bound for this build: `(n − m)(k − 1) + n`, which is
    /// at most `2n^{3/2}` when `k = ⌈√n⌉`.
    pub fn down_entry_bound(&self) -> u64 {
        let (n, m, k) = (self.n() as u64, self.m() as u64, self.bd.k() as u64);
        (n - m) * (k - 1) + n
    }

    pub fn build_edge_visits(&self) -> u64 {
        self.build_edge_visits
    }

    pub fn space_report(&self) -> SpaceReport {
        SpaceReport {
            n: self.n(),
            header_meet_cells: self.header_meet.len() as u64,
            down_entries: self.down_entries(),
            ..Default::default()
        }
    }

    pub fn stats(&self) -> IndexStats {
        IndexStats {
            n: self.n(),
            blocks: self.m(),
            header_meet_cells: self.header_meet.len() as u64,
            down_entries: self.down_entries(),
            build_edge_visits: self.build_edge_visits,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::block_decompose;
    use crate::oracle::transitive_closure;

    fn diamond() -> Trg {
        Trg::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn header_rows_on_diamond() {
        let g = diamond();
        // k = 1 makes every node a header, in order 0, 1, 2, 3
        let oi = OrderIndex::with_block_size(&g, 1).unwrap();
        let row = |i: usize| (0..4).map(|x| oi.meet_with_header(i, x)).collect::<Vec<_>>();
        assert_eq!(row(3), vec![Some(0), Some(1), Some(2), Some(3)]);
        assert_eq!(row(1), vec![Some(0), Some(1), Some(0), Some(1)]);
        assert_eq!(row(0), vec![Some(0); 4]);
    }

    #[test]
    fn null_header_meets() {
        // two chains with no common bottom
        let g = Trg::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let oi = OrderIndex::with_block_size(&g, 2).unwrap();
        assert_eq!(oi.m(), 2);
        assert_eq!(oi.meet_with_header(0, 3), None);
        assert_eq!(oi.meet_with_header(0, 1), Some(1));
    }

    #[test]
    fn diamond_orders() {
        let g = diamond();
        let c = transitive_closure(&g).unwrap();
        for k in 1..=4 {
            let oi = OrderIndex::with_block_size(&g, k).unwrap();
            for x in 0..4 {
                for y in 0..4 {
                    let (r, s) = oi.test_order_with_stats(x, y);
                    assert_eq!(r, c.leq(x, y), "k={k} {x} {y}");
                    assert!(s.probes() <= 5);
                }
            }
        }
        let oi = OrderIndex::new(&g, 0.5).unwrap();
        assert!(oi.test_order(0, 3));
        assert!(!oi.test_order(1, 2));
    }

    #[test]
    fn down_entries_on_diamond() {
        // k = 2: blocks {0,1} (header 1) and {2,3} (header 3)
        let g = diamond();
        let bd = block_decompose(&g, 2).unwrap();
        let oi = OrderIndex::build(&g, bd);
        // |DOWN|: 0 -> {0}, 1 -> {0,1}, 2 -> {2}, 3 -> {2,3}
        assert_eq!(oi.down_entries(), 6);
        assert_eq!(oi.space_report().header_meet_cells, 8);
        assert!(oi.down_entries() <= oi.down_entry_bound());
    }

    #[test]
    fn flipped_index_reverses_order() {
        let g = diamond();
        let a = OrderIndex::new(&g, 0.5).unwrap();
        let b = OrderIndex::new(&g.flip(), 0.5).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(a.test_order(x, y), b.test_order(y, x));
            }
        }
    }
}
