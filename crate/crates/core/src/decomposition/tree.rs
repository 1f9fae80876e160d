//! Recursive block/cover decomposition used by the degree-bounded join.
//!
//! A region `C` with top `c` is split by a block decomposition with block
//! size `⌈|C|/d⌉`; each resulting block is split by a cover decomposition of
//! its header; each chunk of size at least `2d` is a new region. Blocks and
//! chunks become alternating tree levels below a synthetic root.

use std::fmt::Write as _;

use thiserror::Error;

use super::{cover_decompose_with, decompose_region, ensure, InvariantError, Scratch};
use crate::trg::{CycleError, LinearExtension, NodeId, Trg};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeNodeKind {
    Root,
    Block,
    Chunk,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub kind: TreeNodeKind,
    /// Block or chunk header; `None` for the root.
    pub element: Option<NodeId>,
    pub parent: Option<u32>,
    /// Children in extraction order.
    pub children: Vec<u32>,
    /// Members of a leaf chunk, in linear-extension order.
    pub leaf: Option<Vec<NodeId>>,
    /// A block whose header is the header of the enclosing chunk. It is
    /// always the last child and always above anything that reached it.
    pub inherited: bool,
    /// Size of the block or chunk (n for the root).
    pub size: usize,
    pub depth: usize,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.leaf.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTree {
    nodes: Vec<TreeNode>,
    d: usize,
    n: usize,
    virtual_top: Option<NodeId>,
    edge_visits: u64,
}

/// Smallest `t` with `d^t ≥ n`.
pub(crate) fn ceil_log(n: usize, d: usize) -> usize {
    debug_assert!(d >= 2);
    let mut t = 0;
    let mut p = 1usize;
    while p < n {
        p = p.saturating_mul(d);
        t += 1;
    }
    t
}

/// Builds the tree for `g` with degree parameter `d` (raised to at least 2).
///
/// When `g` has no top, a virtual top with id `g.n()` covering every maximal
/// element is added first; the tree then ranges over `g.n() + 1` elements.
/// Structural invariants are checked before returning.
pub fn build_decomposition_tree(g: &Trg, d: usize) -> Result<DecompositionTree, TreeError> {
    let (aug, virtual_top) = g.with_top();
    DecompositionTree::build_on(&aug, virtual_top, d)
}

struct Builder<'a> {
    g: &'a Trg,
    ext: &'a LinearExtension,
    d: usize,
    sc: Scratch,
    nodes: Vec<TreeNode>,
    edge_visits: u64,
}

impl Builder<'_> {
    fn push(&mut self, parent: u32, kind: TreeNodeKind, element: NodeId, size: usize) -> u32 {
        let id = self.nodes.len() as u32;
        let depth = self.nodes[parent as usize].depth + 1;
        let inherited = kind == TreeNodeKind::Block && self.nodes[parent as usize].element == Some(element);
        self.nodes.push(TreeNode {
            kind,
            element: Some(element),
            parent: Some(parent),
            children: Vec::new(),
            leaf: None,
            inherited,
            size,
            depth,
        });
        self.nodes[parent as usize].children.push(id);
        id
    }

    // `region` is in extension order and has `top` as its maximum.
    fn expand(&mut self, parent: u32, region: &[NodeId], top: NodeId) {
        let k = region.len().div_ceil(self.d);
        let blocks = decompose_region(self.g, self.ext, region, k, &mut self.sc);
        self.edge_visits += blocks.edge_visits;
        let mut all = blocks.principal;
        if !blocks.residual.is_empty() {
            all.push(super::Block {
                header: top,
                members: blocks.residual,
            });
        }
        for b in all {
            let bid = self.push(parent, TreeNodeKind::Block, b.header, b.len());
            let cd = cover_decompose_with(self.g, self.ext, &b.members, b.header, &mut self.sc);
            self.edge_visits += cd.edge_visits;
            for ch in cd.chunks {
                let cid = self.push(bid, TreeNodeKind::Chunk, ch.header, ch.len());
                if ch.len() < 2 * self.d {
                    self.nodes[cid as usize].leaf = Some(ch.members);
                } else {
                    self.expand(cid, &ch.members, ch.header);
                }
            }
        }
    }
}

impl DecompositionTree {
    fn build_on(g: &Trg, virtual_top: Option<NodeId>, d: usize) -> Result<Self, TreeError> {
        let ext = g.linear_extension()?;
        let top = g.top().expect("graph with a top");
        let d = d.max(2);
        let n = g.n();
        let mut b = Builder {
            g,
            ext: &ext,
            d,
            sc: Scratch::new(n),
            nodes: vec![TreeNode {
                kind: TreeNodeKind::Root,
                element: None,
                parent: None,
                children: Vec::new(),
                leaf: None,
                inherited: false,
                size: n,
                depth: 0,
            }],
            edge_visits: 0,
        };
        if n < 2 * d {
            let leaf = b.push(0, TreeNodeKind::Chunk, top, n);
            b.nodes[leaf as usize].leaf = Some(ext.order().to_vec());
        } else {
            b.expand(0, ext.order(), top);
        }
        let tree = DecompositionTree {
            nodes: b.nodes,
            d,
            n,
            virtual_top,
            edge_visits: b.edge_visits,
        };
        tree.check()?;
        Ok(tree)
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: u32) -> &TreeNode {
        &self.nodes[id as usize]
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    /// Effective degree parameter, `max(d, 2)`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Element count, including a virtual top if one was added.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn virtual_top(&self) -> Option<NodeId> {
        self.virtual_top
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().map(|t| t.depth).max().unwrap_or(0)
    }

    /// `2⌈log n / log d⌉ + 2`.
    pub fn depth_bound(&self) -> usize {
        2 * ceil_log(self.n, self.d) + 2
    }

    pub fn leaf_cells(&self) -> u64 {
        self.nodes
            .iter()
            .filter_map(|t| t.leaf.as_ref())
            .map(|l| l.len() as u64)
            .sum()
    }

    pub fn edge_visits(&self) -> u64 {
        self.edge_visits
    }

    /// Degree, leaf size, depth, chunk shrinkage and single-occurrence checks.
    pub fn check(&self) -> Result<(), InvariantError> {
        let d = self.d;
        let mut seen = vec![false; self.n];
        let mut covered = vec![false; self.n];
        for (id, t) in self.nodes.iter().enumerate() {
            ensure!(
                t.children.len() <= d + 1,
                "tree node {id} has {} > d+1 = {} children",
                t.children.len(),
                d + 1
            );
            ensure!(
                t.depth <= self.depth_bound(),
                "tree node {id} at depth {} exceeds {}",
                t.depth,
                self.depth_bound()
            );
            if let Some(list) = &t.leaf {
                ensure!(list.len() < 2 * d, "leaf {id} holds {} >= 2d elements", list.len());
                ensure!(t.children.is_empty(), "leaf {id} has children");
                for &x in list {
                    covered[x as usize] = true;
                }
            }
            if let Some(x) = t.element {
                covered[x as usize] = true;
                if t.inherited {
                    let p = &self.nodes[t.parent.unwrap() as usize];
                    ensure!(p.element == Some(x), "inherited node {id} differs from its parent");
                    ensure!(
                        p.children.last() == Some(&(id as u32)),
                        "inherited node {id} is not the last child"
                    );
                } else {
                    ensure!(!seen[x as usize], "element {x} occurs twice in the tree");
                    seen[x as usize] = true;
                }
            }
            // chunk (or root) -> block -> chunk: sizes shrink by a factor d
            if t.kind != TreeNodeKind::Block {
                for &b in &t.children {
                    for &c in &self.nodes[b as usize].children {
                        let s = self.nodes[c as usize].size;
                        ensure!(
                            s * d <= t.size,
                            "chunk {c} of size {s} is not {d} times smaller than its grandparent {id} ({})",
                            t.size
                        );
                    }
                }
            }
        }
        ensure!(covered.iter().all(|&c| c), "tree does not reach every element");
        Ok(())
    }

    /// Indented dump: `<kind> <element> [size] [leaf: ids]`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let mut stack = vec![0u32];
        while let Some(id) = stack.pop() {
            let t = &self.nodes[id as usize];
            let pad = "  ".repeat(t.depth);
            let kind = match t.kind {
                TreeNodeKind::Root => "root",
                TreeNodeKind::Block => "block",
                TreeNodeKind::Chunk => "chunk",
            };
            write!(s, "{pad}{kind}").unwrap();
            if let Some(x) = t.element {
                write!(s, " {x}").unwrap();
            }
            write!(s, " [{}]", t.size).unwrap();
            if let Some(l) = &t.leaf {
                let mut l = l.clone();
                l.sort_unstable();
                let ids: Vec<String> = l.iter().map(|x| x.to_string()).collect();
                write!(s, " leaf: {}", ids.join(" ")).unwrap();
            }
            s.push('\n');
            stack.extend(t.children.iter().rev());
        }
        s
    }
}
