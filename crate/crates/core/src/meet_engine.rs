//! Meets and joins in sublinear time.
//!
//! On top of the order index, every principal block `B_i` is split again
//! into subblocks of size `⌈√|B_i|⌉`. The index stores, per block, the meets
//! of each subheader with every block member, a full meet table for every
//! principal subblock, and local-downset lists for the residual subblock.
//! A meet query collects one candidate per block (the meet of the two
//! representatives `x ∧ h_i`, `y ∧ h_i` if it lies in `B_i`) and returns the
//! largest. Joins run the same query on an index of the flipped order.

use crate::decomposition::{subblock_decompose_with, BlockDecomposition, DecompositionParams, Scratch};
use crate::metrics::{Probe, QueryStats, SpaceReport};
use crate::order_index::{sweep_meets, OrderIndex};
use crate::trg::{collect_down, CycleError, NodeId, Trg};

const NOT_IN_SUBBLOCK: u32 = u32::MAX;
const RESIDUAL_SUBBLOCK: u32 = u32::MAX - 1;

#[derive(Debug, Clone, Default)]
struct BlockMeets {
    subheaders: Vec<NodeId>,
    /// `ℓ × |B_i|`: row `j` holds `g_j ∧ x` indexed by position in the block.
    subheader_meet: Vec<NodeId>,
    /// One `|S|²` table per principal subblock, indexed by id rank.
    tables: Vec<Vec<NodeId>>,
    sizes: Vec<usize>,
}

/// Meet structures for one orientation of the order.
#[derive(Debug, Clone)]
pub struct MeetSide {
    oi: OrderIndex,
    blocks: Vec<BlockMeets>,
    block_pos: Vec<u32>,
    subblock_of: Vec<u32>,
    sub_rank: Vec<u32>,
    residual_lists: Vec<Vec<NodeId>>,
    build_edge_visits: u64,
}

impl MeetSide {
    /// Builds the structures for `g` with top-level block size `⌈n^c⌉`.
    pub fn new(g: &Trg, c: f64) -> Result<Self, CycleError> {
        let ext = g.linear_extension()?;
        let n = g.n();
        let k = DecompositionParams::for_exponent(n, c).k;
        let mut sc = Scratch::new(n);
        let bd = BlockDecomposition::build(g, ext, k, &mut sc);
        let oi = OrderIndex::build_with(g, bd, &mut sc);
        Ok(Self::build(g, oi, &mut sc))
    }

    fn build(g: &Trg, oi: OrderIndex, sc: &mut Scratch) -> Self {
        let n = g.n();
        let null = n as NodeId;
        let bd = oi.decomposition();
        let ext = bd.linear_extension();
        let block_of = bd.block_ids();
        let mut edges = oi.build_edge_visits();
        let mut block_pos = vec![u32::MAX; n];
        let mut subblock_of = vec![NOT_IN_SUBBLOCK; n];
        let mut sub_rank = vec![0u32; n];
        let mut residual_lists = vec![Vec::new(); n];
        let mut blocks = Vec::with_capacity(bd.m());

        for i in 0..bd.m() {
            let b = bd.block(i);
            for (p, &x) in b.members.iter().enumerate() {
                block_pos[x as usize] = p as u32;
            }
            let sub = subblock_decompose_with(g, bd, i, sc);
            edges += sub.edge_visits;
            for (j, s) in sub.subblocks.iter().enumerate() {
                let mut ids = s.members.clone();
                ids.sort_unstable();
                for (r, &x) in ids.iter().enumerate() {
                    subblock_of[x as usize] = j as u32;
                    sub_rank[x as usize] = r as u32;
                }
            }
            for &x in &sub.residual {
                subblock_of[x as usize] = RESIDUAL_SUBBLOCK;
            }

            let len = b.len();
            let mut meets = BlockMeets {
                subheaders: sub.subblocks.iter().map(|s| s.header).collect(),
                subheader_meet: vec![null; sub.subblocks.len() * len],
                tables: Vec::with_capacity(sub.subblocks.len()),
                sizes: sub.subblocks.iter().map(|s| s.len()).collect(),
            };
            let bi = i as u32;
            let in_block = |w: NodeId| block_of[w as usize] == bi;
            for (j, s) in sub.subblocks.iter().enumerate() {
                let row = &mut meets.subheader_meet[j * len..(j + 1) * len];
                edges += sweep_meets(g, ext, s.header, in_block, sc, |z, y| {
                    row[block_pos[z as usize] as usize] = y;
                });
            }
            for (j, s) in sub.subblocks.iter().enumerate() {
                let size = s.len();
                let mut table = vec![null; size * size];
                let sj = j as u32;
                let in_sub = |w: NodeId| block_of[w as usize] == bi && subblock_of[w as usize] == sj;
                for &pivot in &s.members {
                    let base = sub_rank[pivot as usize] as usize * size;
                    edges += sweep_meets(g, ext, pivot, in_sub, sc, |z, y| {
                        table[base + sub_rank[z as usize] as usize] = y;
                    });
                }
                meets.tables.push(table);
            }
            let in_res = |w: NodeId| block_of[w as usize] == bi && subblock_of[w as usize] == RESIDUAL_SUBBLOCK;
            for &x in &sub.residual {
                let mut list = Vec::new();
                edges += collect_down(g, x, in_res, &mut sc.marks, &mut list);
                residual_lists[x as usize] = list;
            }
            blocks.push(meets);
        }
        MeetSide {
            oi,
            blocks,
            block_pos,
            subblock_of,
            sub_rank,
            residual_lists,
            build_edge_visits: edges,
        }
    }

    pub fn order_index(&self) -> &OrderIndex {
        &self.oi
    }

    pub fn n(&self) -> usize {
        self.oi.n()
    }

    pub fn build_edge_visits(&self) -> u64 {
        self.build_edge_visits
    }

    /// Principal subblock count of block `i`.
    pub fn subblock_count(&self, i: usize) -> usize {
        self.blocks[i].subheaders.len()
    }

    /// `Σ_j |S_{i,j}|²` for block `i`.
    pub fn table_cells(&self, i: usize) -> u64 {
        self.blocks[i].sizes.iter().map(|&s| (s * s) as u64).sum()
    }

    pub fn space_report(&self) -> SpaceReport {
        let mut r = self.oi.space_report();
        for b in &self.blocks {
            r.subheader_meet_cells += b.subheader_meet.len() as u64;
            r.table_cells += b.tables.iter().map(|t| t.len() as u64).sum::<u64>();
        }
        r.residual_list_cells = self.residual_lists.iter().map(|l| l.len() as u64).sum();
        r
    }

    /// `x ∧ y`, or `None` when `x` and `y` have no common lower bound.
    pub fn meet(&self, x: NodeId, y: NodeId) -> Option<NodeId> {
        self.meet_with(x, y, &mut (), &mut |_| {})
    }

    /// Meet with probe reporting; `trace` sees every candidate as it is
    /// collected, including the per-block candidates inside a block.
    pub fn meet_with<P: Probe>(
        &self,
        x: NodeId,
        y: NodeId,
        p: &mut P,
        trace: &mut impl FnMut(NodeId),
    ) -> Option<NodeId> {
        let oi = &self.oi;
        let bd = oi.decomposition();
        let null = oi.null();
        let mut best = None;
        for i in 0..bd.m() {
            p.block_visit();
            let xi = oi.header_meet_raw(i, x, p);
            let yi = oi.header_meet_raw(i, y, p);
            if xi == null || yi == null {
                continue;
            }
            p.block_check();
            p.block_check();
            if bd.block_of(xi) as usize != i || bd.block_of(yi) as usize != i {
                continue;
            }
            if let Some(z) = self.meet_in_block_with(i, xi, yi, p, trace) {
                self.offer(&mut best, z, p, trace);
            }
        }
        p.block_check();
        p.block_check();
        if bd.is_residual(x) && bd.is_residual(y) {
            for &z in oi.local_downset(x) {
                p.scanned(1);
                if oi.test_order_with(z, y, p) {
                    self.offer(&mut best, z, p, trace);
                }
            }
        }
        best
    }

    // Keeps the running maximum of a candidate set whose maximum, if the
    // set is non-empty and a meet exists, lies above everything else.
    #[inline]
    fn offer<P: Probe>(&self, best: &mut Option<NodeId>, z: NodeId, p: &mut P, trace: &mut impl FnMut(NodeId)) {
        p.candidate();
        trace(z);
        match *best {
            None => *best = Some(z),
            Some(b) => {
                if self.oi.test_order_with(b, z, p) {
                    *best = Some(z);
                }
            }
        }
    }

    /// `xi ∧ yi` if it lies in block `i`, else `None`. Both arguments must
    /// lie in `B_i`.
    pub fn meet_in_block(&self, i: usize, xi: NodeId, yi: NodeId) -> Option<NodeId> {
        self.meet_in_block_with(i, xi, yi, &mut (), &mut |_| {})
    }

    fn meet_in_block_with<P: Probe>(
        &self,
        i: usize,
        xi: NodeId,
        yi: NodeId,
        p: &mut P,
        trace: &mut impl FnMut(NodeId),
    ) -> Option<NodeId> {
        let h = self.oi.decomposition().block(i).header;
        if xi == h {
            return Some(yi);
        }
        if yi == h {
            return Some(xi);
        }
        let null = self.oi.null();
        let bm = &self.blocks[i];
        let len = self.oi.decomposition().block(i).len();
        let (px, py) = (
            self.block_pos[xi as usize] as usize,
            self.block_pos[yi as usize] as usize,
        );
        let mut best = None;
        for j in 0..bm.subheaders.len() {
            p.block_visit();
            p.array();
            p.array();
            let xij = bm.subheader_meet[j * len + px];
            let yij = bm.subheader_meet[j * len + py];
            if xij == null || yij == null {
                continue;
            }
            p.block_check();
            p.block_check();
            let sj = j as u32;
            if self.subblock_of[xij as usize] != sj || self.subblock_of[yij as usize] != sj {
                continue;
            }
            p.table();
            let size = bm.sizes[j];
            let z = bm.tables[j][self.sub_rank[xij as usize] as usize * size + self.sub_rank[yij as usize] as usize];
            if z != null {
                self.offer(&mut best, z, p, trace);
            }
        }
        p.block_check();
        p.block_check();
        if self.subblock_of[xi as usize] == RESIDUAL_SUBBLOCK && self.subblock_of[yi as usize] == RESIDUAL_SUBBLOCK {
            let list = &self.residual_lists[xi as usize];
            p.scanned(list.len());
            for &z in list {
                if self.oi.test_order_with(z, yi, p) {
                    self.offer(&mut best, z, p, trace);
                }
            }
        }
        best
    }
}

/// Meet index for an order and its flip, answering meets and joins.
#[derive(Debug, Clone)]
pub struct MeetIndex {
    primal: MeetSide,
    dual: MeetSide,
    c: f64,
}

/// Builds the meet index with block size `⌈n^c⌉`, `c ∈ [1/2, 1]`.
pub fn build_meet_index(g: &Trg, c: f64) -> Result<MeetIndex, CycleError> {
    MeetIndex::new(g, c)
}

impl MeetIndex {
    pub fn new(g: &Trg, c: f64) -> Result<Self, CycleError> {
        assert!((0.5..=1.0).contains(&c), "tradeoff exponent {c} outside [0.5, 1]");
        Ok(MeetIndex {
            primal: MeetSide::new(g, c)?,
            dual: MeetSide::new(&g.flip(), c)?,
            c,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n(&self) -> usize {
        self.primal.n()
    }

    /// The structures for the original order.
    pub fn primal(&self) -> &MeetSide {
        &self.primal
    }

    /// The structures for the flipped order.
    pub fn dual(&self) -> &MeetSide {
        &self.dual
    }

    pub fn test_order(&self, x: NodeId, y: NodeId) -> bool {
        self.primal.oi.test_order(x, y)
    }

    pub fn meet(&self, x: NodeId, y: NodeId) -> Option<NodeId> {
        self.primal.meet(x, y)
    }

    pub fn join(&self, x: NodeId, y: NodeId) -> Option<NodeId> {
        self.dual.meet(x, y)
    }

    pub fn meet_with_stats(&self, x: NodeId, y: NodeId) -> (Option<NodeId>, QueryStats) {
        let mut s = QueryStats::default();
        let r = self.primal.meet_with(x, y, &mut s, &mut |_| {});
        (r, s)
    }

    pub fn join_with_stats(&self, x: NodeId, y: NodeId) -> (Option<NodeId>, QueryStats) {
        let mut s = QueryStats::default();
        let r = self.dual.meet_with(x, y, &mut s, &mut |_| {});
        (r, s)
    }

    /// Meet plus every candidate collected on the way.
    pub fn meet_traced(&self, x: NodeId, y: NodeId) -> (Option<NodeId>, Vec<NodeId>) {
        let mut seen = Vec::new();
        let r = self.primal.meet_with(x, y, &mut (), &mut |z| seen.push(z));
        (r, seen)
    }

    /// Join plus every candidate collected on the way.
    pub fn join_traced(&self, x: NodeId, y: NodeId) -> (Option<NodeId>, Vec<NodeId>) {
        let mut seen = Vec::new();
        let r = self.dual.meet_with(x, y, &mut (), &mut |z| seen.push(z));
        (r, seen)
    }

    /// Entry counts over both orientations.
    pub fn space_report(&self) -> SpaceReport {
        let mut r = self.primal.space_report();
        r += self.dual.space_report();
        r.c = self.c;
        r
    }

    pub fn build_edge_visits(&self) -> u64 {
        self.primal.build_edge_visits + self.dual.build_edge_visits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::transitive_closure;

    fn diamond() -> Trg {
        Trg::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn chain(n: usize) -> Trg {
        Trg::from_edges(n, (1..n as NodeId).map(|i| (i - 1, i))).unwrap()
    }

    fn check_all(g: &Trg, c: f64) {
        let cl = transitive_closure(g).unwrap();
        let idx = MeetIndex::new(g, c).unwrap();
        for x in g.nodes() {
            for y in g.nodes() {
                assert_eq!(idx.meet(x, y), cl.meet(x, y).unwrap(), "meet {x} {y}");
                assert_eq!(idx.join(x, y), cl.join(x, y).unwrap(), "join {x} {y}");
            }
        }
    }

    #[test]
    fn diamond_meets() {
        check_all(&diamond(), 0.5);
        check_all(&diamond(), 1.0);
        let idx = MeetIndex::new(&diamond(), 0.5).unwrap();
        let (m, trace) = idx.meet_traced(1, 2);
        assert_eq!(m, Some(0));
        assert!(trace.len() <= 2);
        let total: u64 = (0..idx.primal().order_index().m())
            .map(|i| idx.primal().table_cells(i))
            .sum();
        assert!(total <= 4);
    }

    #[test]
    fn chain_with_one_block() {
        let g = chain(16);
        let idx = MeetIndex::new(&g, 1.0).unwrap();
        assert_eq!(idx.primal().order_index().m(), 1);
        assert_eq!(idx.meet(3, 11), Some(3));
        let (_, s) = idx.meet_with_stats(3, 11);
        assert_eq!(s.blocks_visited - idx.primal().subblock_count(0) as u64, 1);
        check_all(&g, 1.0);
        check_all(&g, 0.5);
    }

    #[test]
    fn disconnected_meets_are_null() {
        let g = Trg::from_edges(5, [(0, 1), (2, 3), (1, 4), (3, 4)]).unwrap();
        let idx = MeetIndex::new(&g, 0.5).unwrap();
        assert_eq!(idx.meet(1, 3), None);
        assert_eq!(idx.join(1, 3), Some(4));
        check_all(&g, 0.75);
    }

    #[test]
    fn meet_in_block_header_shortcut() {
        let g = chain(9);
        let idx = MeetIndex::new(&g, 0.5).unwrap();
        // blocks of 3: {0,1,2} with header 2
        assert_eq!(idx.primal().meet_in_block(0, 2, 1), Some(1));
        assert_eq!(idx.primal().meet_in_block(0, 0, 1), Some(0));
    }
}
