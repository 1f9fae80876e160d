//! Space-efficient order, meet and join queries on partial lattices given
//! by their covering graphs.
//!
//! - [`trg`]: the covering graph, its text format and graph searches.
//! - [`oracle`]: brute-force closure, meets, joins and the lattice check.
//! - [`decomposition`]: block, subblock and cover decompositions.
//! - [`order_index`]: constant-time `x ≤ y`.
//! - [`meet_engine`]: meets and joins with a space/time tradeoff exponent.
//! - [`degree_index`]: join structures parameterized by the maximum degree.
//! - [`generators`]: lattice families and small-lattice enumeration.
//! - [`metrics`]: probe counters, space reports and scaling fits.

pub mod counterexample;
pub mod decomposition;
pub mod degree_index;
pub mod generators;
pub mod meet_engine;
pub mod metrics;
pub mod oracle;
pub mod order_index;
pub mod trg;

pub use trg::NodeId;
