//! Every labeled partial lattice on up to seven elements.
//!
//! Posets on `{0, …, k}` are grown from posets on `{0, …, k−1}` by choosing
//! the set `D` of elements below `k` (a downset) and the set `U` above it (an
//! upset) with every element of `D` below every element of `U`. Each labeled
//! poset arises exactly once this way. Relations are kept as `u8` rows.

use crate::trg::{NodeId, Trg};

pub const MAX_SMALL: usize = 7;

#[derive(Clone, Copy)]
struct Poset {
    k: usize,
    /// `below[x]`: elements strictly below `x`.
    below: [u8; MAX_SMALL],
    above: [u8; MAX_SMALL],
}

impl Poset {
    fn is_downset(&self, d: u8) -> bool {
        (0..self.k).all(|x| d & 1 << x == 0 || self.below[x] & !d == 0)
    }

    fn is_upset(&self, u: u8) -> bool {
        (0..self.k).all(|x| u & 1 << x == 0 || self.above[x] & !u == 0)
    }

    fn extended(&self, d: u8, u: u8) -> Poset {
        let mut q = *self;
        let k = self.k;
        q.k = k + 1;
        q.below[k] = d;
        q.above[k] = u;
        for x in 0..k {
            if d & 1 << x != 0 {
                q.above[x] |= 1 << k | u;
            }
            if u & 1 << x != 0 {
                q.below[x] |= 1 << k | d;
            }
        }
        q
    }

    // Every common upper (lower) bound set has at most one minimal (maximal)
    // element.
    fn is_partial_lattice(&self) -> bool {
        let k = self.k;
        let up = |x: usize| self.above[x] | 1 << x;
        let down = |x: usize| self.below[x] | 1 << x;
        for x in 0..k {
            for y in x + 1..k {
                let ub = up(x) & up(y);
                let minimal = (0..k).filter(|&z| ub & 1 << z != 0 && self.below[z] & ub == 0).count();
                let lb = down(x) & down(y);
                let maximal = (0..k).filter(|&z| lb & 1 << z != 0 && self.above[z] & lb == 0).count();
                if minimal > 1 || maximal > 1 {
                    return false;
                }
            }
        }
        true
    }

    fn covering_graph(&self) -> Trg {
        let mut edges = Vec::new();
        for u in 0..self.k {
            for v in 0..self.k {
                if self.above[u] & 1 << v != 0 && self.above[u] & self.below[v] == 0 {
                    edges.push((u as NodeId, v as NodeId));
                }
            }
        }
        Trg::from_edges(self.k, edges).expect("valid covering graph")
    }
}

fn grow(p: &Poset, n: usize, f: &mut impl FnMut(&Poset)) {
    if p.k == n {
        f(p);
        return;
    }
    let full = ((1u16 << p.k) - 1) as u8;
    for d in 0..=full {
        if !p.is_downset(d) {
            continue;
        }
        let mut u = full & !d;
        // subsets of the complement of d, including the empty set
        loop {
            if p.is_upset(u) && (0..p.k).all(|x| d & 1 << x == 0 || p.above[x] & u == u) {
                grow(&p.extended(d, u), n, f);
            }
            if u == 0 {
                break;
            }
            u = (u - 1) & (full & !d);
        }
    }
}

/// Calls `f` with the covering graph of every labeled partial lattice on
/// `n` elements (`1 ≤ n ≤ 7`).
pub fn for_each_small_lattice(n: usize, mut f: impl FnMut(Trg)) {
    assert!((1..=MAX_SMALL).contains(&n), "small lattices need 1 ≤ n ≤ 7, got {n}");
    let start = Poset {
        k: 0,
        below: [0; MAX_SMALL],
        above: [0; MAX_SMALL],
    };
    grow(&start, n, &mut |p| {
        if p.is_partial_lattice() {
            f(p.covering_graph());
        }
    });
}

/// Every labeled partial lattice on `n` elements (`1 ≤ n ≤ 7`).
pub fn enumerate_small_lattices(n: usize) -> Vec<Trg> {
    let mut out = Vec::new();
    for_each_small_lattice(n, |g| out.push(g));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_counts() {
        assert_eq!(enumerate_small_lattices(1).len(), 1);
        // antichain, 0 < 1, 1 < 0
        assert_eq!(enumerate_small_lattices(2).len(), 3);
    }

    #[test]
    fn outputs_are_distinct_reductions() {
        let all = enumerate_small_lattices(4);
        let mut texts: Vec<String> = all.iter().map(Trg::to_text).collect();
        texts.sort();
        texts.dedup();
        assert_eq!(texts.len(), all.len());
        assert!(all.iter().all(|g| g.validate_reduction().is_ok()));
    }
}
