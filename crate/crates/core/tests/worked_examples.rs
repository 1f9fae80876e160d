//! Hand-checkable meets and joins on familiar lattices.

use lattice_core::degree_index::{max_degree, RecursiveJoinIndex, SimpleJoinIndex};
use lattice_core::generators::{
    boolean, divisor, divisor_values, for_each_small_lattice, random_distributive, DEFAULT_P,
};
use lattice_core::meet_engine::{MeetIndex, MeetSide};
use lattice_core::oracle::transitive_closure;
use lattice_core::NodeId;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn divisors_meet_at_gcd_and_join_at_lcm() {
    let g = divisor(60).unwrap();
    let values = divisor_values(60);
    let id = |v: u64| values.iter().position(|&w| w == v).unwrap() as NodeId;
    let idx = MeetIndex::new(&g, 0.5).unwrap();
    assert_eq!(values[idx.meet(id(12), id(10)).unwrap() as usize], 2);
    assert_eq!(values[idx.join(id(4), id(6)).unwrap() as usize], 12);
    let simple = SimpleJoinIndex::new(&g).unwrap();
    let recursive = RecursiveJoinIndex::new(&g).unwrap();
    for (i, &a) in values.iter().enumerate() {
        for (j, &b) in values.iter().enumerate() {
            let (x, y) = (i as NodeId, j as NodeId);
            let lcm = a / gcd(a, b) * b;
            assert_eq!(values[idx.meet(x, y).unwrap() as usize], gcd(a, b));
            assert_eq!(values[idx.join(x, y).unwrap() as usize], lcm);
            assert_eq!(values[simple.join(x, y).unwrap() as usize], lcm);
            assert_eq!(values[recursive.join(x, y).unwrap() as usize], lcm);
            assert_eq!(idx.test_order(x, y), b % a == 0);
        }
    }
}

#[test]
fn boolean_meets_are_intersections() {
    // Node ids of the boolean generator are the subsets' bit masks.
    let g = boolean(4);
    let idx = MeetIndex::new(&g, 0.5).unwrap();
    let recursive = RecursiveJoinIndex::new(&g).unwrap();
    assert_eq!(max_degree(&g).d, 4);
    for x in g.nodes() {
        for y in g.nodes() {
            assert_eq!(idx.meet(x, y), Some(x & y));
            assert_eq!(idx.join(x, y), Some(x | y));
            assert_eq!(recursive.join(x, y), Some(x | y));
        }
    }
}

#[test]
fn in_block_meets_are_null_outside_the_block() {
    let mut outside = 0;
    let mut check = |side: &MeetSide, cl: &lattice_core::oracle::ClosureMatrix| {
        let bd = side.order_index().decomposition();
        for i in 0..bd.m() {
            let members = &bd.block(i).members;
            for &x in members {
                for &y in members {
                    let want = cl.meet(x, y).unwrap().filter(|&z| bd.block_of(z) as usize == i);
                    if want.is_none() {
                        outside += 1;
                    }
                    assert_eq!(side.meet_in_block(i, x, y), want);
                }
            }
        }
    };
    for g in [
        boolean(3),
        boolean(6),
        divisor(720).unwrap(),
        random_distributive(300, DEFAULT_P, 3),
    ] {
        let cl = transitive_closure(&g).unwrap();
        for c in [0.5, 0.75, 1.0] {
            check(&MeetSide::new(&g, c).unwrap(), &cl);
        }
    }
    for_each_small_lattice(5, |g| {
        let cl = transitive_closure(&g).unwrap();
        check(&MeetSide::new(&g, 0.5).unwrap(), &cl);
    });
    assert!(outside > 0);
}

#[test]
fn candidates_lie_below_both_arguments() {
    let g = random_distributive(500, DEFAULT_P, 11);
    let cl = transitive_closure(&g).unwrap();
    let idx = MeetIndex::new(&g, 0.5).unwrap();
    for x in (0..g.n() as NodeId).step_by(7) {
        for y in (0..g.n() as NodeId).step_by(5) {
            let (m, seen) = idx.meet_traced(x, y);
            assert_eq!(m, cl.meet(x, y).unwrap());
            assert!(seen.iter().all(|&z| cl.leq(z, x) && cl.leq(z, y)));
            let (j, seen) = idx.join_traced(x, y);
            assert_eq!(j, cl.join(x, y).unwrap());
            assert!(seen.iter().all(|&z| cl.leq(x, z) && cl.leq(y, z)));
        }
    }
}

#[test]
fn distributive_degree_is_logarithmic() {
    for seed in 0..8 {
        let g = random_distributive(1000, DEFAULT_P, seed);
        assert!(max_degree(&g).d as f64 <= (g.n() as f64).log2());
    }
}
