//! Exhaustive counting: `P(D, m)` for single digraphs, sums over whole
//! families, identity checks and the tree comparison scan.
//!
//! Counting relies on permutation invariance: only weakly increasing
//! sequences are checked, each weighted by its number of orderings.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::check::PreferenceSequence;
use crate::error::{Error, Result};
use crate::families::{mapping_by_index, mapping_count, rooted_tree_by_index, rooted_tree_count, Orientation};
use crate::graph::{Digraph, ReachSet};
use crate::matching::Matcher;

mod scan;
mod verify;

pub use scan::{open_question_scan, ScanRow};
pub use verify::{verify_identity, Identity, IdentityReport, IdentityRow};

/// Largest `n` accepted for a single-digraph count.
pub const SINGLE_CAP: usize = 10;
/// Default largest `n` for family sweeps.
pub const FAMILY_CAP: usize = 6;

pub(crate) fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    SinkTrees,
    SourceTrees,
    Mappings,
    InverseMappings,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::SinkTrees, Family::SourceTrees, Family::Mappings, Family::InverseMappings];

    pub fn name(self) -> &'static str {
        match self {
            Family::SinkTrees => "sink-trees",
            Family::SourceTrees => "source-trees",
            Family::Mappings => "mappings",
            Family::InverseMappings => "inverse-mappings",
        }
    }

    /// Number of labelled members on `[n]`.
    pub fn size(self, n: usize) -> u64 {
        match self {
            Family::SinkTrees | Family::SourceTrees => rooted_tree_count(n),
            Family::Mappings | Family::InverseMappings => mapping_count(n),
        }
    }

    /// The member with the given index, in the fixed enumeration order.
    pub fn digraph(self, n: usize, index: u64) -> Digraph {
        match self {
            Family::SinkTrees => rooted_tree_by_index(n, index, Orientation::Sink).as_digraph(),
            Family::SourceTrees => rooted_tree_by_index(n, index, Orientation::Source).as_digraph(),
            Family::Mappings => mapping_by_index(n, index).mapping_digraph(),
            Family::InverseMappings => mapping_by_index(n, index).inverse_mapping_digraph(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown family `{s}`") })
    }
}

/// Worker count and size cap for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub workers: usize,
    pub cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        let workers = std::thread::available_parallelism().map_or(1, usize::from);
        SweepOptions { workers, cap: FAMILY_CAP }
    }
}

impl SweepOptions {
    pub fn with_workers(workers: usize) -> Self {
        SweepOptions { workers: workers.max(1), ..Self::default() }
    }

    pub(crate) fn check_cap(&self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }
}

/// Splits `0..size` into contiguous shards and maps them on a pool of
/// `workers` threads. Results come back in shard order.
pub(crate) fn sharded<A, F>(size: u64, workers: usize, f: F) -> Result<Vec<(Range<u64>, A)>>
where
    A: Send,
    F: Fn(Range<u64>) -> A + Sync,
{
    let workers = workers.max(1);
    let pieces = (workers as u64 * 8).min(size).max(1);
    let ranges: Vec<Range<u64>> = (0..pieces)
        .map(|i| (size * i / pieces)..(size * (i + 1) / pieces))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    Ok(pool.install(|| ranges.into_par_iter().map(|r| (r.clone(), f(r))).collect()))
}

/// Every sequence in `[n]^m`, in lexicographic order of the reversed sequence.
pub fn all_sequences(n: usize, m: usize) -> impl Iterator<Item = PreferenceSequence> + Clone {
    let total = if n == 0 && m > 0 { 0 } else { (n as u64).pow(m as u32) };
    (0..total).map(move |mut code| {
        let mut v = Vec::with_capacity(m);
        for _ in 0..m {
            v.push((code % n as u64) as usize + 1);
            code /= n as u64;
        }
        PreferenceSequence::new(v)
    })
}

/// Reusable state for counting parking functions on one digraph after another.
#[derive(Debug, Default)]
pub(crate) struct Counter {
    matcher: Matcher,
    prefix: Vec<usize>,
    factorial: Vec<u64>,
}

impl Counter {
    pub(crate) fn new() -> Self {
        let mut factorial = vec![1u64; 21];
        for k in 1..=20 {
            factorial[k] = factorial[k - 1] * k as u64;
        }
        Counter { factorial, ..Default::default() }
    }

    /// Visits every weakly increasing sequence of length `m` over `[n]` that
    /// is a parking function, with its multiplicity.
    fn visit(&mut self, d: &Digraph, m: usize, mut f: impl FnMut(&[usize], u64)) {
        let n = d.vertex_count();
        if m > n {
            return;
        }
        let closure = d.closure();
        self.prefix.clear();
        let factorial = std::mem::take(&mut self.factorial);
        self.recurse(closure, n, m, 1, &factorial, &mut f);
        self.factorial = factorial;
    }

    fn recurse(&mut self, closure: &[ReachSet], n: usize, m: usize, low: usize, fact: &[u64], f: &mut impl FnMut(&[usize], u64)) {
        if self.prefix.len() == m {
            let rows: Vec<&ReachSet> = self.prefix.iter().map(|&v| &closure[v - 1]).collect();
            if self.matcher.saturates(&rows, n) {
                let mut ways = fact[m];
                let mut i = 0;
                while i < m {
                    let j = i + self.prefix[i..].iter().take_while(|&&x| x == self.prefix[i]).count();
                    ways /= fact[j - i];
                    i = j;
                }
                f(&self.prefix, ways);
            }
            return;
        }
        for v in low..=n {
            self.prefix.push(v);
            self.recurse(closure, n, m, v, fact, f);
            self.prefix.pop();
        }
    }

    /// `P(D, m)`.
    pub(crate) fn count(&mut self, d: &Digraph, m: usize) -> u64 {
        let mut total = 0;
        self.visit(d, m, |_, ways| total += ways);
        total
    }

    /// Number of parking distributions of total `m`.
    pub(crate) fn distributions(&mut self, d: &Digraph, m: usize) -> u64 {
        let mut total = 0;
        self.visit(d, m, |_, _| total += 1);
        total
    }
}

fn check_single(d: &Digraph) -> Result<()> {
    let n = d.vertex_count();
    if n > SINGLE_CAP {
        return Err(Error::CapExceeded { n, cap: SINGLE_CAP });
    }
    Ok(())
}

/// Number of sequences in `[n]^m` that are parking functions on `d`.
pub fn count_pf(d: &Digraph, m: usize) -> Result<BigUint> {
    check_single(d)?;
    Ok(BigUint::from(Counter::new().count(d, m)))
}

/// Number of parking distributions on `d` with `m` drivers in total, that is
/// parking functions counted up to reordering.
pub fn count_distributions(d: &Digraph, m: usize) -> Result<BigUint> {
    check_single(d)?;
    Ok(BigUint::from(Counter::new().distributions(d, m)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShardCount {
    pub start: u64,
    pub end: u64,
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
    pub instances: u64,
    pub millis: u64,
    pub shards: Vec<ShardCount>,
}

/// `Σ P(D, m)` over every member `D` of `family` on `[n]`.
pub fn family_sum(family: Family, n: usize, m: usize, options: &SweepOptions) -> Result<CountResult> {
    options.check_cap(n)?;
    let started = Instant::now();
    let size = family.size(n);
    let parts = sharded(size, options.workers, |range| {
        let mut counter = Counter::new();
        range.map(|i| u128::from(counter.count(&family.digraph(n, i), m))).sum::<u128>()
    })?;
    let shards: Vec<ShardCount> = parts
        .into_iter()
        .map(|(r, v)| ShardCount { start: r.start, end: r.end, value: BigUint::from(v) })
        .collect();
    Ok(CountResult {
        value: shards.iter().map(|s| &s.value).sum(),
        instances: size,
        millis: started.elapsed().as_millis() as u64,
        shards,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Digraph(Digraph),
    Family(Family, usize),
}

/// A counting job: one digraph or a whole family, with `m` drivers.
#[derive(Debug, Clone)]
pub struct CountRequest {
    pub target: Target,
    pub m: usize,
    pub options: SweepOptions,
}

impl CountRequest {
    pub fn run(&self) -> Result<CountResult> {
        match &self.target {
            Target::Family(family, n) => family_sum(*family, *n, self.m, &self.options),
            Target::Digraph(d) => {
                let started = Instant::now();
                let value = count_pf(d, self.m)?;
                Ok(CountResult {
                    shards: vec![ShardCount { start: 0, end: 1, value: value.clone() }],
                    value,
                    instances: 1,
                    millis: started.elapsed().as_millis() as u64,
                })
            }
        }
    }
}
