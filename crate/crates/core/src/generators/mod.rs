//! Lattice families for tests and benchmarks.
//!
//! Deterministic families (chains, bounded antichains, boolean lattices,
//! divisor lattices, grids) and two seeded random ones: lattices of downsets
//! of a random poset, which are distributive, and Dedekind–MacNeille
//! completions of a random poset, which are general lattices. Ids of random
//! families are shuffled so they carry no order information.

mod small;

pub use small::{enumerate_small_lattices, for_each_small_lattice};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::trg::{NodeId, Trg};

/// Largest lattice any generator will build.
pub const MAX_NODES: usize = 1 << 20;
/// Element cap for completions of random posets.
pub const COMPLETION_CAP: usize = 5000;
/// Largest random poset a completion is grown from.
pub const COMPLETION_POSET_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("{family} size {size} is outside the supported range: {reason}")]
    OutOfRange {
        family: Family,
        size: u64,
        reason: &'static str,
    },
    #[error("completion reached {0} elements, above the cap of {COMPLETION_CAP}")]
    CompletionTooLarge(usize),
    #[error("edge probability {0} is not in [0, 1]")]
    BadProbability(f64),
    #[error(
        "completion of a {COMPLETION_POSET_LIMIT}-element poset has only {reached} elements, below the target {target}"
    )]
    CompletionTooSmall { target: usize, reached: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Chain,
    AntichainBounded,
    Boolean,
    Divisor,
    Grid,
    RandomDistributive,
    RandomPosetCompletion,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Chain,
        Family::AntichainBounded,
        Family::Boolean,
        Family::Divisor,
        Family::Grid,
        Family::RandomDistributive,
        Family::RandomPosetCompletion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::AntichainBounded => "antichain_bounded",
            Family::Boolean => "boolean",
            Family::Divisor => "divisor",
            Family::Grid => "grid",
            Family::RandomDistributive => "random_distributive",
            Family::RandomPosetCompletion => "random_poset_completion",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, Family::RandomDistributive | Family::RandomPosetCompletion)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown family {0:?}")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFamily(s.to_string()))
    }
}

/// A family member. `size` is the family's own parameter:
///
/// | family | `size` |
/// |---|---|
/// | chain | element count |
/// | antichain_bounded | antichain width (`n = size + 2`) |
/// | boolean | number of atoms (`n = 2^size`) |
/// | divisor | the number whose divisors form the lattice |
/// | grid | side of a square grid (`n = size²`) |
/// | random_distributive, random_poset_completion | minimum element count |
///
/// [`FamilySpec::for_target`] picks a parameter from a desired element count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub size: u64,
    pub seed: u64,
    /// Relation probability of the random poset models.
    pub p: f64,
}

pub const DEFAULT_P: f64 = 0.3;

impl FamilySpec {
    pub fn new(family: Family, size: u64, seed: u64) -> Self {
        FamilySpec {
            family,
            size,
            seed,
            p: DEFAULT_P,
        }
    }

    /// The member closest to `n` elements: the largest one not exceeding `n`
    /// for deterministic families, the smallest one reaching `n` for random
    /// families.
    pub fn for_target(family: Family, n: usize, seed: u64) -> Self {
        let size = match family {
            Family::Chain | Family::RandomDistributive | Family::RandomPosetCompletion => n as u64,
            Family::AntichainBounded => n.saturating_sub(2) as u64,
            Family::Boolean => n.max(1).ilog2() as u64,
            Family::Divisor => divisor_number_for(n),
            Family::Grid => n.isqrt().max(1) as u64,
        };
        FamilySpec::new(family, size, seed)
    }

    pub fn generate(&self) -> Result<Trg, GenError> {
        generate(self)
    }
}

pub fn generate(spec: &FamilySpec) -> Result<Trg, GenError> {
    let size = spec.size;
    let out_of_range = |reason| GenError::OutOfRange {
        family: spec.family,
        size,
        reason,
    };
    if !(0.0..=1.0).contains(&spec.p) {
        return Err(GenError::BadProbability(spec.p));
    }
    match spec.family {
        Family::Chain => {
            if size == 0 || size as usize > MAX_NODES {
                return Err(out_of_range("need 1 ≤ n ≤ 2^20"));
            }
            Ok(chain(size as usize))
        }
        Family::AntichainBounded => {
            if size as usize + 2 > MAX_NODES {
                return Err(out_of_range("width too large"));
            }
            Ok(antichain_bounded(size as usize))
        }
        Family::Boolean => {
            if size > 20 {
                return Err(out_of_range("at most 20 atoms"));
            }
            Ok(boolean(size as u32))
        }
        Family::Divisor => divisor(size).map_err(out_of_range),
        Family::Grid => {
            if size == 0 || (size * size) as usize > MAX_NODES {
                return Err(out_of_range("need 1 ≤ side ≤ 1024"));
            }
            Ok(grid(size as usize, size as usize))
        }
        Family::RandomDistributive => {
            if size == 0 || size as usize > MAX_NODES / 2 {
                return Err(out_of_range("need 1 ≤ n ≤ 2^19"));
            }
            Ok(random_distributive(size as usize, spec.p, spec.seed))
        }
        Family::RandomPosetCompletion => {
            if size == 0 || size as usize > COMPLETION_CAP {
                return Err(out_of_range("need 1 ≤ n ≤ 5000"));
            }
            random_poset_completion(size as usize, spec.p, spec.seed)
        }
    }
}

fn from_edges(n: usize, edges: Vec<(NodeId, NodeId)>) -> Trg {
    Trg::from_edges(n, edges).expect("generator produced a valid graph")
}

/// `0 < 1 < … < n−1`.
pub fn chain(n: usize) -> Trg {
    from_edges(n, (1..n as NodeId).map(|i| (i - 1, i)).collect())
}

/// Bottom `0`, atoms `1..=w`, top `w+1`. With `w = 0`, a two-element chain.
pub fn antichain_bounded(w: usize) -> Trg {
    let top = w as NodeId + 1;
    if w == 0 {
        return chain(2);
    }
    let edges = (1..top).flat_map(|a| [(0, a), (a, top)]).collect();
    from_edges(w + 2, edges)
}

/// Subsets of `atoms` elements; id = bitmask.
pub fn boolean(atoms: u32) -> Trg {
    let n = 1u32 << atoms;
    let edges = (0..n)
        .flat_map(|s| {
            (0..atoms)
                .filter(move |b| s & (1 << b) == 0)
                .map(move |b| (s, s | 1 << b))
        })
        .collect();
    from_edges(n as usize, edges)
}

/// `rows × cols` product of two chains; id of `(r, c)` is `r·cols + c`.
pub fn grid(rows: usize, cols: usize) -> Trg {
    let id = |r: usize, c: usize| (r * cols + c) as NodeId;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
        }
    }
    from_edges(rows * cols, edges)
}

fn factorize(mut v: u64) -> Result<Vec<(u64, u32)>, &'static str> {
    const TRIAL_LIMIT: u64 = 1_000_000;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= v {
        if p > TRIAL_LIMIT {
            return Err("has a large factor that cannot be split by trial division");
        }
        let mut e = 0;
        while v.is_multiple_of(p) {
            v /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if v > 1 {
        out.push((v, 1));
    }
    Ok(out)
}

/// Divisors of `number` ordered by divisibility; ids ascend with the
/// divisor's value.
pub fn divisor(number: u64) -> Result<Trg, &'static str> {
    if number == 0 {
        return Err("need a positive number");
    }
    let factors = factorize(number)?;
    let count: u64 = factors.iter().map(|&(_, e)| e as u64 + 1).product();
    if count as usize > MAX_NODES {
        return Err("too many divisors");
    }
    let mut divs = vec![1u64];
    for &(p, e) in &factors {
        let base = divs.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            divs.extend(base.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    let index: HashMap<u64, NodeId> = divs.iter().enumerate().map(|(i, &d)| (d, i as NodeId)).collect();
    let mut edges = Vec::new();
    for (i, &d) in divs.iter().enumerate() {
        for &(p, _) in &factors {
            if (number / d).is_multiple_of(p) {
                edges.push((i as NodeId, index[&(d * p)]));
            }
        }
    }
    Ok(from_edges(divs.len(), edges))
}

/// Divisor values in id order for [`divisor`].
pub fn divisor_values(number: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=number.isqrt())
        .filter(|&d| number.is_multiple_of(d))
        .flat_map(|d| [d, number / d])
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

// The number `2^a 3^b 5^c 7^e` (fitting in u64) whose divisor count is the
// largest not exceeding `n`; ties go to the smaller number.
fn divisor_number_for(n: usize) -> u64 {
    let n = n.max(1) as u64;
    let mut best = (1u64, 1u64);
    let pow = |p: u64, e: u32| p.checked_pow(e);
    for a in 0..64 {
        for b in 0..41 {
            for c in 0..28 {
                for e in 0..23 {
                    let v = [pow(2, a), pow(3, b), pow(5, c), pow(7, e)]
                        .into_iter()
                        .try_fold(1u64, |acc, f| f.and_then(|f| acc.checked_mul(f)));
                    let Some(v) = v else { break };
                    let count = (a as u64 + 1) * (b as u64 + 1) * (c as u64 + 1) * (e as u64 + 1);
                    if count <= n && (count > best.1 || count == best.1 && v < best.0) {
                        best = (v, count);
                    }
                }
            }
        }
    }
    best.0
}

// Strict predecessor sets of a random poset grown one element at a time:
// element j lies above each earlier element independently with
// probability p, then the relation is transitively closed.
fn grow_element(preds: &mut Vec<FixedBitSet>, cap: usize, p: f64, rng: &mut ChaCha8Rng) {
    let mut below = FixedBitSet::with_capacity(cap);
    for (i, pred) in preds.iter().enumerate() {
        if rng.random_bool(p) {
            below.insert(i);
            below.union_with(pred);
        }
    }
    preds.push(below);
}

fn shuffled_ids(n: usize, rng: &mut ChaCha8Rng) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = (0..n as NodeId).collect();
    ids.shuffle(rng);
    ids
}

fn relabel(n: usize, edges: Vec<(usize, usize)>, rng: &mut ChaCha8Rng) -> Trg {
    let ids = shuffled_ids(n, rng);
    let edges = edges.into_iter().map(|(u, v)| (ids[u], ids[v])).collect();
    from_edges(n, edges)
}

/// Downsets of a random poset, ordered by inclusion. Poset elements are
/// added until there are at least `target` downsets, so the result has
/// between `target` and `2·target − 1` elements.
pub fn random_distributive(target: usize, p: f64, seed: u64) -> Trg {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut preds: Vec<FixedBitSet> = Vec::new();
    let mut downsets = vec![FixedBitSet::new()];
    while downsets.len() < target {
        let j = preds.len();
        let cap = j + 1;
        grow_element(&mut preds, cap, p, &mut rng);
        for d in downsets.iter_mut() {
            d.grow(cap);
        }
        let extra: Vec<FixedBitSet> = downsets
            .iter()
            .filter(|d| preds[j].is_subset(d))
            .map(|d| {
                let mut e = d.clone();
                e.insert(j);
                e
            })
            .collect();
        downsets.extend(extra);
    }
    let k = preds.len();
    for pr in preds.iter_mut() {
        pr.grow(k);
    }
    let index: HashMap<&FixedBitSet, usize> = downsets.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut edges = Vec::new();
    for (i, d) in downsets.iter().enumerate() {
        for (x, pred) in preds.iter().enumerate() {
            if !d.contains(x) && pred.is_subset(d) {
                let mut e = d.clone();
                e.insert(x);
                edges.push((i, index[&e]));
            }
        }
    }
    relabel(downsets.len(), edges, &mut rng)
}

// Intersections of principal ideals of a poset on at most 64 elements,
// together with the whole poset: the cuts of its completion.
fn completion_cuts(preds: &[u64], limit: usize) -> Option<Vec<u64>> {
    let k = preds.len();
    let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let principal: Vec<u64> = (0..k).map(|x| preds[x] | 1 << x).collect();
    let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
    let mut queue = vec![all];
    seen.insert(all);
    let mut i = 0;
    while i < queue.len() {
        let a = queue[i];
        i += 1;
        for &q in &principal {
            let b = a & q;
            if seen.insert(b) {
                if seen.len() > limit {
                    return None;
                }
                queue.push(b);
            }
        }
    }
    Some(queue)
}

/// Dedekind–MacNeille completion of a random poset. Poset elements are added
/// until the completion has at least `target` elements. Reaching 64 poset
/// elements first, or a completion beyond 5000 elements, is an error.
pub fn random_poset_completion(target: usize, p: f64, seed: u64) -> Result<Trg, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut preds: Vec<FixedBitSet> = Vec::new();
    let mut cuts = vec![0u64];
    while cuts.len() < target && preds.len() < COMPLETION_POSET_LIMIT {
        grow_element(&mut preds, COMPLETION_POSET_LIMIT, p, &mut rng);
        let masks: Vec<u64> = preds.iter().map(|b| b.ones().fold(0u64, |m, i| m | 1 << i)).collect();
        cuts = completion_cuts(&masks, COMPLETION_CAP).ok_or(GenError::CompletionTooLarge(COMPLETION_CAP + 1))?;
    }
    if cuts.len() < target {
        return Err(GenError::CompletionTooSmall {
            target,
            reached: cuts.len(),
        });
    }
    cuts.sort_unstable_by_key(|c| (c.count_ones(), *c));
    let n = cuts.len();
    let mut edges = Vec::new();
    let mut covers: Vec<u64> = Vec::new();
    for (i, &a) in cuts.iter().enumerate() {
        covers.clear();
        for (j, &b) in cuts.iter().enumerate().skip(i + 1) {
            if b & a == a && b != a && covers.iter().all(|&c| c & !b != 0) {
                covers.push(b);
                edges.push((i, j));
            }
        }
    }
    Ok(relabel(n, edges, &mut rng))
}
