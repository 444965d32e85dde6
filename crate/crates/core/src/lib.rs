//! Parking functions on directed graphs.
//!
//! Drivers with preferred vertices enter a digraph one at a time; a driver
//! whose preferred vertex is taken keeps following out-edges until she finds
//! a free vertex. A preference sequence is a parking function on the digraph
//! when some run of this process parks every driver.
//!
//! - [`graph`]: digraphs on `[n]`, reachability closures and filters.
//! - [`check`]: feasibility via bipartite matching, schedules, Hall violators,
//!   deterministic simulation, prime and distribution variants.
//! - [`families`]: sink/source trees, (inverse) mapping digraphs, closed forms.
//! - [`bijections`]: the leaf-path involution between sink and source tree
//!   parking functions and the correspondence between marked source-tree
//!   parking functions and inverse-mapping parking functions.
//! - [`enumerate`]: exhaustive counting sweeps and identity verification.

pub mod bijections;
pub mod check;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod graph;
pub mod matching;

pub use check::{
    hall_witness, is_deterministic, is_parking_distribution, is_parking_function, is_prime,
    is_source_tree_pf, parking_schedule, replay_validate, simulate_deterministic, DeterministicRun,
    HallViolator, ParkingDistribution, ParkingOutcome, PreferenceSequence,
};
pub use error::{Error, Result};
pub use families::{MappingFn, Orientation, RootedTree};
pub use graph::{Digraph, ReachSet};
