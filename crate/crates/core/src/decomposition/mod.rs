//! Block, subblock and cover decompositions.
//!
//! A block decomposition with block size `k` repeatedly removes `↓h` for a
//! minimal fat node `h` (one with `|↓h| ≥ k` among the remaining elements,
//! all of whose strict predecessors are thin). Elements are visited in
//! linear-extension order, so the first fat node met is always minimal and
//! becomes the next header. Whatever is left forms the residual block.

mod tree;

pub use tree::{build_decomposition_tree, DecompositionTree, TreeError, TreeNode, TreeNodeKind};

use std::fmt::Write as _;

use thiserror::Error;

use crate::oracle::ClosureMatrix;
use crate::trg::{collect_down, CycleError, LinearExtension, Marks, NodeId, Trg};

/// A decomposition invariant failed; the message names the offending part.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("decomposition invariant violated: {0}")]
pub struct InvariantError(pub String);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(InvariantError(format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;

/// `⌈√n⌉`, exact for all `n`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// `⌈n^c⌉`, treating values within rounding noise of an integer as exact.
pub fn ceil_pow(n: usize, c: f64) -> usize {
    if (c - 0.5).abs() < 1e-12 {
        return ceil_sqrt(n).max(1);
    }
    let t = (n as f64).powf(c);
    let r = t.round();
    let k = if (t - r).abs() <= 1e-9 * t.max(1.0) {
        r
    } else {
        t.ceil()
    };
    (k as usize).clamp(1, n.max(1))
}

/// Block size `k` and the tradeoff exponent it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionParams {
    pub k: usize,
    pub c: f64,
}

impl DecompositionParams {
    /// `k = ⌈n^c⌉`; `c = 1/2` is the default.
    pub fn for_exponent(n: usize, c: f64) -> Self {
        DecompositionParams { k: ceil_pow(n, c), c }
    }

    /// Subblock size for a block with `block_len` elements.
    pub fn subblock_size(block_len: usize) -> usize {
        ceil_sqrt(block_len).max(1)
    }
}

/// A principal block (or subblock, or chunk) and its top element.
/// Members are stored in linear-extension order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub header: NodeId,
    pub members: Vec<NodeId>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn sorted_ids(&self) -> Vec<NodeId> {
        sorted(&self.members)
    }
}

fn sorted(ids: &[NodeId]) -> Vec<NodeId> {
    let mut v = ids.to_vec();
    v.sort_unstable();
    v
}

fn join_ids(ids: &[NodeId]) -> String {
    ids.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Blocks extracted from one region, in extraction order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Blocks {
    pub principal: Vec<Block>,
    pub residual: Vec<NodeId>,
    pub edge_visits: u64,
}

/// Reusable per-graph buffers for decomposition and index builds.
pub(crate) struct Scratch {
    pub(crate) alive: Marks,
    pub(crate) marks: Marks,
    pub(crate) buf: Vec<NodeId>,
    stack: Vec<NodeId>,
}

impl Scratch {
    pub(crate) fn new(n: usize) -> Self {
        Scratch {
            alive: Marks::new(n),
            marks: Marks::new(n),
            buf: Vec::new(),
            stack: Vec::new(),
        }
    }
}

// Counts `↓x` among alive nodes, stopping once `limit` nodes are seen.
fn bounded_downset_count(g: &Trg, x: NodeId, limit: usize, sc: &mut Scratch) -> (usize, u64) {
    let Scratch {
        alive, marks, stack, ..
    } = sc;
    marks.reset();
    marks.mark(x);
    stack.clear();
    stack.push(x);
    let mut count = 1;
    let mut edges = 0;
    while let Some(z) = stack.pop() {
        if count >= limit {
            break;
        }
        for &w in g.in_neighbours(z) {
            edges += 1;
            if alive.is_marked(w) && marks.mark(w) {
                count += 1;
                stack.push(w);
            }
        }
    }
    (count, edges)
}

/// Block decomposition of `region` (given in linear-extension order) with
/// block size `k`, using the incremental fat/thin sweep.
pub(crate) fn decompose_region(
    g: &Trg,
    ext: &LinearExtension,
    region: &[NodeId],
    k: usize,
    sc: &mut Scratch,
) -> Blocks {
    debug_assert!(k >= 1);
    sc.alive.reset();
    for &x in region {
        sc.alive.mark(x);
    }
    let mut out = Blocks::default();
    for &x in region {
        if !sc.alive.is_marked(x) {
            continue;
        }
        let (count, edges) = bounded_downset_count(g, x, k, sc);
        out.edge_visits += edges;
        if count < k {
            continue;
        }
        let mut members = Vec::new();
        let alive = &sc.alive;
        out.edge_visits += collect_down(g, x, |w| alive.is_marked(w), &mut sc.marks, &mut members);
        ext.sort(&mut members);
        for &m in &members {
            sc.alive.unmark(m);
        }
        out.principal.push(Block { header: x, members });
    }
    out.residual = region.iter().copied().filter(|&x| sc.alive.is_marked(x)).collect();
    out
}

/// Top-level decomposition of a whole lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    k: usize,
    ext: LinearExtension,
    blocks: Vec<Block>,
    residual: Vec<NodeId>,
    block_of: Vec<u32>,
    edge_visits: u64,
}

/// Decomposes `g` with block size `k` (clamped to at least 1).
pub fn block_decompose(g: &Trg, k: usize) -> Result<BlockDecomposition, CycleError> {
    let ext = g.linear_extension()?;
    let mut sc = Scratch::new(g.n());
    Ok(BlockDecomposition::build(g, ext, k, &mut sc))
}

impl BlockDecomposition {
    pub(crate) fn build(g: &Trg, ext: LinearExtension, k: usize, sc: &mut Scratch) -> Self {
        let k = k.max(1);
        let Blocks {
            principal,
            residual,
            edge_visits,
        } = decompose_region(g, &ext, ext.order(), k, sc);
        let m = principal.len() as u32;
        let mut block_of = vec![m; g.n()];
        for (i, b) in principal.iter().enumerate() {
            for &x in &b.members {
                block_of[x as usize] = i as u32;
            }
        }
        BlockDecomposition {
            k,
            ext,
            blocks: principal,
            residual,
            block_of,
            edge_visits,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of principal blocks.
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    pub fn headers(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.blocks.iter().map(|b| b.header)
    }

    pub fn residual(&self) -> &[NodeId] {
        &self.residual
    }

    /// Principal block index, or `m()` for the residual block.
    #[inline]
    pub fn block_of(&self, x: NodeId) -> u32 {
        self.block_of[x as usize]
    }

    pub fn block_ids(&self) -> &[u32] {
        &self.block_of
    }

    pub fn is_residual(&self, x: NodeId) -> bool {
        self.block_of(x) as usize == self.m()
    }

    pub fn linear_extension(&self) -> &LinearExtension {
        &self.ext
    }

    /// Edges inspected while decomposing.
    pub fn edge_visits(&self) -> u64 {
        self.edge_visits
    }

    /// Asserts the partition, size, header, thinness and per-block lattice
    /// invariants against the brute-force closure.
    pub fn check(&self, closure: &ClosureMatrix) -> Result<(), InvariantError> {
        let all: Vec<NodeId> = (0..self.n() as NodeId).collect();
        check_blocks(&all, &self.blocks, &self.residual, self.k, closure, "block")?;
        ensure!(self.m() * self.k <= self.n(), "m = {} exceeds n/k", self.m());
        for (i, b) in self.blocks.iter().enumerate() {
            ensure!(
                b.members.iter().all(|&x| self.block_of(x) == i as u32),
                "block_of disagrees with block {i}"
            );
        }
        ensure!(
            self.residual.iter().all(|&x| self.is_residual(x)),
            "block_of disagrees with residual"
        );
        Ok(())
    }

    /// One line per block: `block <i> header <h>: <ids…>`, then the residual.
    pub fn dump(&self) -> String {
        let mut s = format!("k {}\n", self.k);
        for (i, b) in self.blocks.iter().enumerate() {
            writeln!(s, "block {i} header {}: {}", b.header, join_ids(&b.sorted_ids())).unwrap();
        }
        writeln!(s, "residual: {}", join_ids(&sorted(&self.residual))).unwrap();
        s
    }
}

/// Checks a decomposition of `region` into `principal` + `residual`.
pub(crate) fn check_blocks(
    region: &[NodeId],
    principal: &[Block],
    residual: &[NodeId],
    k: usize,
    closure: &ClosureMatrix,
    what: &str,
) -> Result<(), InvariantError> {
    let n = closure.n();
    let mut owner = vec![usize::MAX; n];
    let mut in_region = vec![false; n];
    for &x in region {
        in_region[x as usize] = true;
    }
    let cells = principal
        .iter()
        .map(|b| b.members.as_slice())
        .chain(std::iter::once(residual));
    for (i, cell) in cells.enumerate() {
        for &x in cell {
            ensure!(in_region[x as usize], "{what} {i} holds {x} outside its region");
            ensure!(owner[x as usize] == usize::MAX, "{x} lies in two {what}s");
            owner[x as usize] = i;
        }
    }
    ensure!(
        region.iter().all(|&x| owner[x as usize] != usize::MAX),
        "{what}s do not cover their region"
    );

    let mut removed = vec![false; n];
    for (i, b) in principal.iter().enumerate() {
        ensure!(b.len() >= k, "{what} {i} has {} < {k} elements", b.len());
        ensure!(b.members.contains(&b.header), "{what} {i} lacks its header");
        // B_i = ↓h_i minus earlier blocks, restricted to the region
        let expect: Vec<NodeId> = closure
            .downset(b.header)
            .into_iter()
            .filter(|&z| in_region[z as usize] && !removed[z as usize])
            .collect();
        ensure!(
            expect == b.sorted_ids(),
            "{what} {i} is not the remaining downset of its header {}",
            b.header
        );
        check_thin(&b.members, Some(b.header), k, closure, what)?;
        if let Some(v) = closure.lattice_violation_within(&b.members) {
            return Err(InvariantError(format!("{what} {i} is not a partial lattice: {v}")));
        }
        for &x in &b.members {
            removed[x as usize] = true;
        }
    }
    check_thin(residual, None, k, closure, what)?;
    if let Some(v) = closure.lattice_violation_within(residual) {
        return Err(InvariantError(format!("residual {what} is not a partial lattice: {v}")));
    }
    Ok(())
}

fn check_thin(
    members: &[NodeId],
    header: Option<NodeId>,
    k: usize,
    closure: &ClosureMatrix,
    what: &str,
) -> Result<(), InvariantError> {
    for &x in members {
        if Some(x) == header {
            continue;
        }
        let local = members.iter().filter(|&&z| closure.leq(z, x)).count();
        ensure!(local < k, "non-header {x} of a {what} has local downset {local} >= {k}");
    }
    Ok(())
}

/// Subblocks of one principal block: a block decomposition of `B_i \ {h_i}`
/// with subblock size `r = ⌈√|B_i|⌉`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubblockDecomposition {
    pub block: usize,
    pub r: usize,
    pub subblocks: Vec<Block>,
    pub residual: Vec<NodeId>,
    pub edge_visits: u64,
}

impl SubblockDecomposition {
    pub fn count(&self) -> usize {
        self.subblocks.len()
    }

    /// Checks the subblock invariants for block `b` of the parent
    /// decomposition.
    pub fn check(&self, b: &Block, closure: &ClosureMatrix) -> Result<(), InvariantError> {
        let region: Vec<NodeId> = b.members.iter().copied().filter(|&x| x != b.header).collect();
        check_blocks(&region, &self.subblocks, &self.residual, self.r, closure, "subblock")?;
        ensure!(
            self.subblocks.len() * self.r <= b.len(),
            "block {} has {} subblocks of size >= {}",
            self.block,
            self.subblocks.len(),
            self.r
        );
        Ok(())
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (j, sb) in self.subblocks.iter().enumerate() {
            writeln!(
                s,
                "subblock {}.{j} header {}: {}",
                self.block,
                sb.header,
                join_ids(&sb.sorted_ids())
            )
            .unwrap();
        }
        writeln!(s, "subresidual {}: {}", self.block, join_ids(&sorted(&self.residual))).unwrap();
        s
    }
}

/// Decomposes principal block `i` of `bd` into subblocks.
pub fn subblock_decompose(g: &Trg, bd: &BlockDecomposition, i: usize) -> SubblockDecomposition {
    let mut sc = Scratch::new(g.n());
    subblock_decompose_with(g, bd, i, &mut sc)
}

pub(crate) fn subblock_decompose_with(
    g: &Trg,
    bd: &BlockDecomposition,
    i: usize,
    sc: &mut Scratch,
) -> SubblockDecomposition {
    let b = bd.block(i);
    let r = DecompositionParams::subblock_size(b.len());
    let region: Vec<NodeId> = b.members.iter().copied().filter(|&x| x != b.header).collect();
    let Blocks {
        principal,
        residual,
        edge_visits,
    } = decompose_region(g, bd.linear_extension(), &region, r, sc);
    SubblockDecomposition {
        block: i,
        r,
        subblocks: principal,
        residual,
        edge_visits,
    }
}

/// Cover decomposition of a block: one chunk per element covered by the
/// header inside the block, `C_j = (↓c_j ∩ B) \ ⋃_{l<j} ↓c_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkDecomposition {
    pub header: NodeId,
    /// Chunks in ascending order of their chunk headers.
    pub chunks: Vec<Block>,
    pub edge_visits: u64,
}

impl ChunkDecomposition {
    pub fn check(&self, block: &[NodeId], closure: &ClosureMatrix) -> Result<(), InvariantError> {
        let mut earlier: Vec<NodeId> = Vec::new();
        for (j, ch) in self.chunks.iter().enumerate() {
            let expect: Vec<NodeId> = sorted(block)
                .into_iter()
                .filter(|&z| closure.leq(z, ch.header) && !earlier.iter().any(|&c| closure.leq(z, c)))
                .collect();
            ensure!(
                expect == ch.sorted_ids(),
                "chunk {j} (header {}) has wrong members",
                ch.header
            );
            earlier.push(ch.header);
        }
        let covered: usize = self.chunks.iter().map(Block::len).sum();
        ensure!(
            covered + 1 == block.len(),
            "chunks cover {covered} of {} non-header elements",
            block.len() - 1
        );
        Ok(())
    }

    pub fn dump(&self, label: &str) -> String {
        let mut s = String::new();
        for (j, ch) in self.chunks.iter().enumerate() {
            writeln!(
                s,
                "chunk {label}.{j} header {}: {}",
                ch.header,
                join_ids(&ch.sorted_ids())
            )
            .unwrap();
        }
        s
    }
}

/// Splits `block` (whose top is `header`) by the header's covered children.
/// Children outside the block are ignored.
pub fn cover_decompose(g: &Trg, ext: &LinearExtension, block: &[NodeId], header: NodeId) -> ChunkDecomposition {
    let mut sc = Scratch::new(g.n());
    cover_decompose_with(g, ext, block, header, &mut sc)
}

pub(crate) fn cover_decompose_with(
    g: &Trg,
    ext: &LinearExtension,
    block: &[NodeId],
    header: NodeId,
    sc: &mut Scratch,
) -> ChunkDecomposition {
    // alive = block members not yet assigned to a chunk
    sc.alive.reset();
    for &x in block {
        sc.alive.mark(x);
    }
    let mut chunks = Vec::new();
    let mut edge_visits = 0;
    for &c in g.in_neighbours(header) {
        if !sc.alive.is_marked(c) {
            continue;
        }
        let mut members = Vec::new();
        let alive = &sc.alive;
        edge_visits += collect_down(g, c, |w| alive.is_marked(w), &mut sc.marks, &mut members);
        ext.sort(&mut members);
        for &m in &members {
            sc.alive.unmark(m);
        }
        chunks.push(Block { header: c, members });
    }
    ChunkDecomposition {
        header,
        chunks,
        edge_visits,
    }
}
