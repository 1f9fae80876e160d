//! Brute-force reference semantics: full reachability, meets, joins and the
//! lattice-property check. Everything else in the crate is tested against
//! this module.
//!
//! Rows are bitsets indexed by linear-extension position rather than by id,
//! so the first set bit of an upper-bound set is always a minimal element and
//! the last set bit of a lower-bound set is always a maximal one.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::trg::{CycleError, LinearExtension, NodeId, Trg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Meet,
    Join,
}

/// A pair whose greatest lower (or least upper) bound is not unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("not a lattice: {kind:?}({x}, {y}) has incomparable extremal bounds {first} and {second}")]
pub struct NotALattice {
    pub kind: BoundKind,
    pub x: NodeId,
    pub y: NodeId,
    pub first: NodeId,
    pub second: NodeId,
}

/// Four elements with `x1, x2 < y1, y2` and nothing in between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("lattice property fails: {x1}, {x2} < {y1}, {y2} with no element in between")]
pub struct LatticeViolation {
    pub x1: NodeId,
    pub x2: NodeId,
    pub y1: NodeId,
    pub y2: NodeId,
}

/// The reflexive-transitive closure of a TRG.
#[derive(Debug, Clone)]
pub struct ClosureMatrix {
    ext: LinearExtension,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

/// Computes `leq` by one DFS per node along out-edges.
pub fn transitive_closure(g: &Trg) -> Result<ClosureMatrix, CycleError> {
    let ext = g.linear_extension()?;
    let n = g.n();
    let pos = ext.positions();
    let mut up = Vec::with_capacity(n);
    let mut stack = Vec::new();
    let mut seen = FixedBitSet::with_capacity(n);
    for x in g.nodes() {
        seen.clear();
        let mut row = FixedBitSet::with_capacity(n);
        seen.insert(x as usize);
        stack.push(x);
        while let Some(z) = stack.pop() {
            row.insert(pos[z as usize] as usize);
            for &w in g.out_neighbours(z) {
                if !seen.put(w as usize) {
                    stack.push(w);
                }
            }
        }
        up.push(row);
    }
    let mut down = vec![FixedBitSet::with_capacity(n); n];
    for x in 0..n {
        let px = pos[x] as usize;
        for p in up[x].ones() {
            down[ext.order()[p] as usize].insert(px);
        }
    }
    Ok(ClosureMatrix { ext, up, down })
}

impl ClosureMatrix {
    pub fn n(&self) -> usize {
        self.up.len()
    }

    #[inline]
    pub fn leq(&self, x: NodeId, y: NodeId) -> bool {
        self.up[x as usize].contains(self.ext.position(y) as usize)
    }

    fn node_at(&self, p: usize) -> NodeId {
        self.ext.order()[p]
    }

    fn pos_mask(&self, members: &[NodeId]) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(self.n());
        for &x in members {
            m.insert(self.ext.position(x) as usize);
        }
        m
    }

    /// `↓x` as sorted ids.
    pub fn downset(&self, x: NodeId) -> Vec<NodeId> {
        self.ids(&self.down[x as usize])
    }

    /// `↑x` as sorted ids.
    pub fn upset(&self, x: NodeId) -> Vec<NodeId> {
        self.ids(&self.up[x as usize])
    }

    fn ids(&self, row: &FixedBitSet) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = row.ones().map(|p| self.node_at(p)).collect();
        v.sort_unstable();
        v
    }

    /// The maximum of `↓x ∩ ↓y`; `Ok(None)` when that set is empty.
    pub fn meet(&self, x: NodeId, y: NodeId) -> Result<Option<NodeId>, NotALattice> {
        self.extremum(BoundKind::Meet, x, y)
    }

    /// The minimum of `↑x ∩ ↑y`; `Ok(None)` when that set is empty.
    pub fn join(&self, x: NodeId, y: NodeId) -> Result<Option<NodeId>, NotALattice> {
        self.extremum(BoundKind::Join, x, y)
    }

    fn extremum(&self, kind: BoundKind, x: NodeId, y: NodeId) -> Result<Option<NodeId>, NotALattice> {
        let rows = match kind {
            BoundKind::Meet => &self.down,
            BoundKind::Join => &self.up,
        };
        let mut common = rows[x as usize].clone();
        common.intersect_with(&rows[y as usize]);
        // extension order: maximal lower bounds come last, minimal upper bounds first
        let pick = |s: &FixedBitSet| match kind {
            BoundKind::Meet => s.maximum(),
            BoundKind::Join => s.minimum(),
        };
        let Some(p) = pick(&common) else {
            return Ok(None);
        };
        let cand = self.node_at(p);
        let cand_row = &rows[cand as usize];
        if common.is_subset(cand_row) {
            return Ok(Some(cand));
        }
        common.difference_with(cand_row);
        let other = self.node_at(pick(&common).expect("non-empty difference"));
        Err(NotALattice {
            kind,
            x,
            y,
            first: cand.min(other),
            second: cand.max(other),
        })
    }

    /// Checks the lattice property on the whole order.
    pub fn lattice_violation(&self) -> Option<LatticeViolation> {
        let all: Vec<NodeId> = (0..self.n() as NodeId).collect();
        self.lattice_violation_within(&all)
    }

    /// Checks the lattice property on the suborder induced by `members`.
    ///
    /// A quadruple `x1, x2 < y1, y2` without an intermediate element exists
    /// exactly when some pair has two minimal common upper bounds (and,
    /// dually, exactly when some pair has two maximal common lower bounds), so
    /// scanning lower pairs in id order finds the lexicographically smallest
    /// witness `(x1, x2, y1, y2)` with `x1 < x2` and `y1 < y2`.
    pub fn lattice_violation_within(&self, members: &[NodeId]) -> Option<LatticeViolation> {
        let mask = self.pos_mask(members);
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let mut common = FixedBitSet::with_capacity(self.n());
        for (i, &x1) in sorted.iter().enumerate() {
            for &x2 in &sorted[i + 1..] {
                common.clone_from(&self.up[x1 as usize]);
                common.intersect_with(&self.up[x2 as usize]);
                common.intersect_with(&mask);
                let Some(p) = common.minimum() else { continue };
                if common.is_subset(&self.up[self.node_at(p) as usize]) {
                    continue;
                }
                let (y1, y2) = self.uncovered_pair(&common);
                return Some(LatticeViolation { x1, x2, y1, y2 });
            }
        }
        None
    }

    // Smallest (y1, y2) in `upper` with no z in `upper` below both.
    fn uncovered_pair(&self, upper: &FixedBitSet) -> (NodeId, NodeId) {
        let ids = self.ids(upper);
        let mut between = FixedBitSet::with_capacity(self.n());
        for (i, &y1) in ids.iter().enumerate() {
            for &y2 in &ids[i + 1..] {
                between.clone_from(upper);
                between.intersect_with(&self.down[y1 as usize]);
                between.intersect_with(&self.down[y2 as usize]);
                if between.is_clear() {
                    return (y1, y2);
                }
            }
        }
        unreachable!("upper-bound set with two minimal elements has an uncovered pair")
    }
}

/// Returns `Ok(())` when every pair has at most one maximal common lower bound
/// and at most one minimal common upper bound.
pub fn is_partial_lattice(g: &Trg) -> Result<(), LatticeViolation> {
    let c = transitive_closure(g).expect("is_partial_lattice requires an acyclic graph");
    match c.lattice_violation() {
        Some(v) => Err(v),
        None => Ok(()),
    }
}
