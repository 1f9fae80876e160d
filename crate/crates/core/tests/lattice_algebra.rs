//! Algebraic laws of meet and join on every small partial lattice, checked
//! through the closure oracle and through the indexes.

use lattice_core::generators::for_each_small_lattice;
use lattice_core::meet_engine::MeetIndex;
use lattice_core::oracle::{transitive_closure, ClosureMatrix};
use lattice_core::NodeId;

fn meet(cl: &ClosureMatrix, x: NodeId, y: NodeId) -> Option<NodeId> {
    cl.meet(x, y).expect("partial lattice")
}

fn join(cl: &ClosureMatrix, x: NodeId, y: NodeId) -> Option<NodeId> {
    cl.join(x, y).expect("partial lattice")
}

#[test]
fn oracle_laws() {
    for n in 1..=5 {
        for_each_small_lattice(n, |g| {
            let cl = transitive_closure(&g).unwrap();
            let n = n as NodeId;
            for x in 0..n {
                assert_eq!(meet(&cl, x, x), Some(x));
                assert_eq!(join(&cl, x, x), Some(x));
                for y in 0..n {
                    let m = meet(&cl, x, y);
                    assert_eq!(m, meet(&cl, y, x));
                    assert_eq!(join(&cl, x, y), join(&cl, y, x));
                    if let Some(m) = m {
                        assert!(cl.leq(m, x) && cl.leq(m, y));
                        for z in 0..n {
                            if cl.leq(z, x) && cl.leq(z, y) {
                                assert!(cl.leq(z, m), "{m} is not greatest below {x}, {y}");
                            }
                        }
                        // absorption
                        assert_eq!(join(&cl, x, m), Some(x));
                    } else {
                        assert!((0..n).all(|z| !(cl.leq(z, x) && cl.leq(z, y))));
                    }
                    assert_eq!(cl.leq(x, y), m == Some(x));
                    for z in 0..n {
                        let left = m.and_then(|m| meet(&cl, m, z));
                        let right = meet(&cl, y, z).and_then(|w| meet(&cl, x, w));
                        assert_eq!(left, right, "associativity at {x} {y} {z}");
                    }
                }
            }
        });
    }
}

#[test]
fn flipped_graph_swaps_meet_and_join() {
    for_each_small_lattice(5, |g| {
        let cl = transitive_closure(&g).unwrap();
        let flipped = MeetIndex::new(&g.flip(), 0.5).unwrap();
        for x in g.nodes() {
            for y in g.nodes() {
                assert_eq!(flipped.meet(x, y), join(&cl, x, y));
                assert_eq!(flipped.join(x, y), meet(&cl, x, y));
                assert_eq!(flipped.test_order(y, x), cl.leq(x, y));
            }
        }
    });
}

#[test]
fn every_exponent_agrees_on_six_elements() {
    let mut count = 0;
    for_each_small_lattice(6, |g| {
        count += 1;
        if count % 7 != 0 {
            return;
        }
        let cl = transitive_closure(&g).unwrap();
        for c in [0.5, 0.6, 0.75, 0.9, 1.0] {
            let idx = MeetIndex::new(&g, c).unwrap();
            for x in g.nodes() {
                for y in g.nodes() {
                    assert_eq!(idx.meet(x, y), meet(&cl, x, y), "c={c}");
                    assert_eq!(idx.join(x, y), join(&cl, x, y), "c={c}");
                }
            }
        }
    });
}

#[test]
#[ignore = "every labeled partial lattice on seven elements; several minutes"]
fn seven_element_lattices_match_oracle() {
    let mut count = 0u64;
    for_each_small_lattice(7, |g| {
        count += 1;
        let cl = transitive_closure(&g).unwrap();
        let idx = MeetIndex::new(&g, 0.5).unwrap();
        for x in g.nodes() {
            for y in g.nodes() {
                assert_eq!(idx.test_order(x, y), cl.leq(x, y));
                assert_eq!(idx.meet(x, y), meet(&cl, x, y));
                assert_eq!(idx.join(x, y), join(&cl, x, y));
            }
        }
    });
    println!("{count} lattices on seven elements");
}
