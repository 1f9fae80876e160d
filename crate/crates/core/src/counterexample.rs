//! Inserting a "dummy" header above some children of a block header can
//! break the lattice property.
//!
//! The original lattice has `x < c1`, `y < c2`, `x, y < c3` and a header `h`
//! covering `c1, c2, c3`. A dummy node `d` is then inserted with `c1, c2` as
//! its only lower covers and `h` as its only upper cover. Afterwards both `c3`
//! and `d` are minimal upper bounds of `x` and `y`.

use std::fmt::Write as _;

use crate::oracle::{is_partial_lattice, transitive_closure, LatticeViolation, NotALattice};
use crate::trg::{NodeId, Trg};

pub const X: NodeId = 0;
pub const Y: NodeId = 1;
pub const C1: NodeId = 2;
pub const C2: NodeId = 3;
pub const C3: NodeId = 4;
pub const H: NodeId = 5;
pub const D: NodeId = 6;

/// Element names by id.
pub const NAMES: [&str; 7] = ["x", "y", "c1", "c2", "c3", "h", "d"];

#[derive(Debug, Clone)]
pub struct DummyDemo {
    pub original: Trg,
    pub modified: Trg,
    pub original_check: Result<(), LatticeViolation>,
    pub modified_check: Result<(), LatticeViolation>,
    pub join_xy: Result<Option<NodeId>, NotALattice>,
    pub meet_c3_d: Result<Option<NodeId>, NotALattice>,
}

pub fn original_lattice() -> Trg {
    Trg::from_edges(6, [(X, C1), (Y, C2), (X, C3), (Y, C3), (C1, H), (C2, H), (C3, H)]).unwrap()
}

/// The original lattice with `d` placed between `c1, c2` and `h`.
pub fn with_dummy_node() -> Trg {
    Trg::from_edges(
        7,
        [(X, C1), (Y, C2), (X, C3), (Y, C3), (C3, H), (C1, D), (C2, D), (D, H)],
    )
    .unwrap()
}

pub fn dummy_node_demo() -> DummyDemo {
    let original = original_lattice();
    let modified = with_dummy_node();
    let closure = transitive_closure(&modified).expect("acyclic");
    DummyDemo {
        original_check: is_partial_lattice(&original),
        modified_check: is_partial_lattice(&modified),
        join_xy: closure.join(X, Y),
        meet_c3_d: closure.meet(C3, D),
        original,
        modified,
    }
}

fn name(x: NodeId) -> &'static str {
    NAMES[x as usize]
}

impl DummyDemo {
    /// Human-readable summary; identical on every run.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let edges = |g: &Trg| {
            g.edges()
                .map(|(u, v)| format!("{}<{}", name(u), name(v)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(s, "original covers: {}", edges(&self.original)).unwrap();
        match &self.original_check {
            Ok(()) => writeln!(s, "original: ok").unwrap(),
            Err(v) => writeln!(s, "original: {v}").unwrap(),
        }
        writeln!(s, "with dummy covers: {}", edges(&self.modified)).unwrap();
        match &self.modified_check {
            Ok(()) => writeln!(s, "with dummy: ok").unwrap(),
            Err(v) => writeln!(
                s,
                "with dummy: lattice property fails: {}, {} < {}, {} with no element in between",
                name(v.x1),
                name(v.x2),
                name(v.y1),
                name(v.y2)
            )
            .unwrap(),
        }
        let bound = |r: &Result<Option<NodeId>, NotALattice>| match r {
            Ok(Some(z)) => name(*z).to_string(),
            Ok(None) => "null".to_string(),
            Err(e) => format!("undefined ({} and {} are both extremal)", name(e.first), name(e.second)),
        };
        writeln!(s, "join(x, y): {}", bound(&self.join_xy)).unwrap();
        writeln!(s, "meet(c3, d): {}", bound(&self.meet_c3_d)).unwrap();
        s
    }

    /// True when the original passes and the modified graph fails with
    /// `c3` and `d` as the two minimal upper bounds of `x` and `y`.
    pub fn refutes_claim(&self) -> bool {
        self.original_check.is_ok()
            && self.modified_check
                == Err(LatticeViolation {
                    x1: X,
                    x2: Y,
                    y1: C3,
                    y2: D,
                })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dummy_breaks_lattice_property() {
        let demo = dummy_node_demo();
        assert!(demo.refutes_claim());
        let e = demo.join_xy.unwrap_err();
        assert_eq!((e.first, e.second), (C3, D));
        let e = demo.meet_c3_d.unwrap_err();
        assert_eq!((e.first, e.second), (X, Y));
        assert_eq!(demo.modified.validate_reduction(), Ok(()));
        assert_eq!(demo.report(), dummy_node_demo().report());
        assert!(demo
            .report()
            .contains("with dummy: lattice property fails: x, y < c3, d"));
    }
}
