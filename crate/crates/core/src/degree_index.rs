//! Join structures whose query cost depends on the maximum degree `d`.
//!
//! Both structures work on a graph with a top element; when the input has
//! none, a virtual top covering every maximal element is added and any
//! answer equal to it is reported as `None`. Meets are obtained by building
//! on the flipped graph.

use crate::decomposition::{
    build_decomposition_tree, ceil_sqrt, cover_decompose_with, BlockDecomposition, DecompositionTree, Scratch,
    TreeError,
};
use crate::metrics::{Probe, QueryStats, SpaceReport};
use crate::order_index::OrderIndex;
use crate::trg::{collect_down, CycleError, NodeId, Trg};

/// Maximum number of covered elements over all nodes, with a histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub d: usize,
    /// `histogram[k]` = number of nodes covering exactly `k` elements.
    pub histogram: Vec<usize>,
}

pub fn max_degree(g: &Trg) -> DegreeStats {
    let mut histogram = Vec::new();
    for x in g.nodes() {
        let k = g.in_neighbours(x).len();
        if histogram.len() <= k {
            histogram.resize(k + 1, 0);
        }
        histogram[k] += 1;
    }
    DegreeStats {
        d: histogram.len().saturating_sub(1),
        histogram,
    }
}

// One "is v above both x and y" comparison.
#[inline]
fn above_both<P: Probe>(oi: &OrderIndex, v: NodeId, x: NodeId, y: NodeId, p: &mut P) -> bool {
    p.pair_test();
    oi.test_order_with(x, v, p) && oi.test_order_with(y, v, p)
}

#[derive(Debug, Clone)]
struct JoinBlock {
    header: NodeId,
    /// Covered children of the header inside the block, ascending id.
    children: Vec<NodeId>,
    /// `↓c ∩ B` per child, in linear-extension order.
    child_downsets: Vec<Vec<NodeId>>,
}

/// Header scan over a `⌈√n⌉` block decomposition, then a child test and a
/// scan of one thin local downset.
#[derive(Debug, Clone)]
pub struct SimpleJoinIndex {
    oi: OrderIndex,
    blocks: Vec<JoinBlock>,
    virtual_top: Option<NodeId>,
    d: usize,
}

pub fn build_simple_join_index(g: &Trg) -> Result<SimpleJoinIndex, CycleError> {
    SimpleJoinIndex::new(g)
}

impl SimpleJoinIndex {
    pub fn new(g: &Trg) -> Result<Self, CycleError> {
        let (aug, virtual_top) = g.with_top();
        let ext = aug.linear_extension()?;
        let n = aug.n();
        let mut sc = Scratch::new(n);
        let bd = BlockDecomposition::build(&aug, ext, ceil_sqrt(n), &mut sc);
        let oi = OrderIndex::build_with(&aug, bd, &mut sc);
        let bd = oi.decomposition();
        let ext = bd.linear_extension();
        let m = bd.m() as u32;

        let mut cells: Vec<(NodeId, Vec<NodeId>)> = bd.blocks().iter().map(|b| (b.header, b.members.clone())).collect();
        if !bd.residual().is_empty() {
            let top = aug.top().expect("augmented graph has a top");
            cells.push((top, bd.residual().to_vec()));
        }
        let block_ids = bd.block_ids();
        let mut blocks = Vec::with_capacity(cells.len());
        for (i, (header, members)) in cells.into_iter().enumerate() {
            let bi = (i as u32).min(m);
            let cd = cover_decompose_with(&aug, ext, &members, header, &mut sc);
            let children: Vec<NodeId> = cd.chunks.iter().map(|c| c.header).collect();
            let child_downsets = children
                .iter()
                .map(|&c| {
                    let mut list = Vec::new();
                    collect_down(&aug, c, |w| block_ids[w as usize] == bi, &mut sc.marks, &mut list);
                    ext.sort(&mut list);
                    list
                })
                .collect();
            blocks.push(JoinBlock {
                header,
                children,
                child_downsets,
            });
        }
        Ok(SimpleJoinIndex {
            d: max_degree(&aug).d,
            oi,
            blocks,
            virtual_top,
        })
    }

    pub fn order_index(&self) -> &OrderIndex {
        &self.oi
    }

    /// Blocks scanned by a query, including the residual block under the top.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Headers in extraction order.
    pub fn block_order(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.blocks.iter().map(|b| b.header)
    }

    pub fn children(&self, i: usize) -> &[NodeId] {
        &self.blocks[i].children
    }

    /// Maximum in-degree of the (augmented) graph.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn block_size(&self) -> usize {
        self.oi.decomposition().k()
    }

    pub fn virtual_top(&self) -> Option<NodeId> {
        self.virtual_top
    }

    /// Longest stored child downset.
    pub fn longest_child_downset(&self) -> usize {
        self.blocks
            .iter()
            .flat_map(|b| b.child_downsets.iter().map(Vec::len))
            .max()
            .unwrap_or(0)
    }

    pub fn join(&self, x: NodeId, y: NodeId) -> Option<NodeId> {
        self.join_with(x, y, &mut ())
    }

    pub fn join_with_stats(&self, x: NodeId, y: NodeId) -> (Option<NodeId>, QueryStats) {
        let mut s = QueryStats::default();
        let r = self.join_with(x, y, &mut s);
        (r, s)
    }

    pub fn join_with<P: Probe>(&self, x: NodeId, y: NodeId, p: &mut P) -> Option<NodeId> {
        let oi = &self.oi;
        let b = self.blocks.iter().find(|b| {
            p.block_visit();
            above_both(oi, b.header, x, y, p)
        })?;
        for (j, &c) in b.children.iter().enumerate() {
            if above_both(oi, c, x, y, p) {
                let list = &b.child_downsets[j];
                for (seen, &z) in list.iter().enumerate() {
                    if above_both(oi, z, x, y, p) {
                        p.scanned(seen + 1);
                        return self.visible(z);
                    }
                }
                unreachable!("child above both arguments holds their join");
            }
        }
        self.visible(b.header)
    }

    fn visible(&self, z: NodeId) -> Option<NodeId> {
        (Some(z) != self.virtual_top).then_some(z)
    }

    pub fn space_report(&self) -> SpaceReport {
        let mut r = self.oi.space_report();
        r.child_list_cells = self
            .blocks
            .iter()
            .map(|b| b.children.len() as u64 + b.child_downsets.iter().map(|l| l.len() as u64).sum::<u64>())
            .sum();
        r
    }

    pub fn build_edge_visits(&self) -> u64 {
        self.oi.build_edge_visits()
    }
}

/// Decomposition-tree descent: at each node, recurse into the first child
/// above both arguments; leaves are scanned directly.
#[derive(Debug, Clone)]
pub struct RecursiveJoinIndex {
    oi: OrderIndex,
    tree: DecompositionTree,
    d: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum DegreeIndexError {
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

pub fn build_recursive_join_index(g: &Trg) -> Result<RecursiveJoinIndex, DegreeIndexError> {
    RecursiveJoinIndex::new(g)
}

impl RecursiveJoinIndex {
    pub fn new(g: &Trg) -> Result<Self, DegreeIndexError> {
        let (aug, _) = g.with_top();
        let d = max_degree(&aug).d;
        let tree = build_decomposition_tree(g, d)?;
        let oi = OrderIndex::new(&aug, 0.5)?;
        Ok(RecursiveJoinIndex { oi, tree, d })
    }

    pub fn tree(&self) -> &DecompositionTree {
        &self.tree
    }

    pub fn order_index(&self) -> &OrderIndex {
        &self.oi
    }

    /// Maximum in-degree of the (augmented) graph.
    pub fn d(&self) -> usize {
        self.d
    }

    /// `(d+1)·(2⌈log n / log d⌉ + 2)` with `d` raised to at least 2.
    pub fn test_bound(&self) -> u64 {
        ((self.tree.d() + 1) * self.tree.depth_bound()) as u64
    }

    pub fn join(&self, x: NodeId, y: NodeId) -> Option<NodeId> {
        recursive_join(&self.tree, &self.oi, x, y, &mut ())
    }

    pub fn join_with_stats(&self, x: NodeId, y: NodeId) -> (Option<NodeId>, QueryStats) {
        let mut s = QueryStats::default();
        let r = recursive_join(&self.tree, &self.oi, x, y, &mut s);
        (r, s)
    }

    pub fn space_report(&self) -> SpaceReport {
        let mut r = self.oi.space_report();
        r.tree_nodes = self.tree.nodes().len() as u64;
        r.leaf_list_cells = self.tree.leaf_cells();
        r
    }

    pub fn build_edge_visits(&self) -> u64 {
        self.oi.build_edge_visits() + self.tree.edge_visits()
    }
}

/// Join by descending `tree`; `oi` must index the same (augmented) graph.
pub fn recursive_join<P: Probe>(
    tree: &DecompositionTree,
    oi: &OrderIndex,
    x: NodeId,
    y: NodeId,
    p: &mut P,
) -> Option<NodeId> {
    let visible = |z: NodeId| (Some(z) != tree.virtual_top()).then_some(z);
    let mut u = tree.root();
    loop {
        p.tree_node(u.depth);
        if let Some(list) = &u.leaf {
            for (seen, &z) in list.iter().enumerate() {
                if above_both(oi, z, x, y, p) {
                    p.scanned(seen + 1);
                    return visible(z);
                }
            }
            p.scanned(list.len());
            return None;
        }
        let next = u
            .children
            .iter()
            .map(|&c| tree.node(c))
            .find(|v| v.inherited || above_both(oi, v.element.expect("non-root node has an element"), x, y, p));
        match next {
            Some(v) => u = v,
            None => return u.element.and_then(visible),
        }
    }
}
