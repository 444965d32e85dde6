use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use super::{all_sequences, count_distributions, family_sum, serialize_big, sharded, Counter, Family, SweepOptions};
use crate::bijections::{
    deletable_cycle_edges, psi, psi_inverse, psi_nm, psi_nm_inverse, tau, tau_inverse, MarkedSourceTreePF, RankTable,
};
use crate::check::{is_parking_function, is_source_tree_pf, PreferenceSequence};
use crate::error::{Error, Result};
use crate::families::{
    binomial, classical_count, cycle_mapping, falling_factorial, identity_mapping, mapping_by_index, path_tree,
    rooted_tree_by_index, source_star_count, star_tree, MappingFn, Orientation,
};
use crate::graph::Digraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `n · F̃(n,m) = M̃(n,m)`.
    TildeNm,
    /// `n · F(n,m) = M(n,m)`.
    SinkNm,
    /// `P(T,n) <= P(T̃,n)` per sink tree, equal exactly on paths.
    TreeInequality,
    /// Source trees lie between the star and the path.
    ExtremalBounds,
    /// Mappings lie between `m!` and `n^m`.
    MappingBounds,
    /// Parking distributions on the path are counted by Catalan numbers.
    CatalanDistributions,
    /// `tau_inverse ∘ tau` is the identity and `tau` is an involution.
    TauRoundTrip,
    /// `psi` (or its extension for `m < n`) is a bijection.
    PsiRoundTrip,
    /// Every cycle of an inverse mapping parking function has a deletable edge.
    DeletableCycles,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::TildeNm,
        Identity::SinkNm,
        Identity::TreeInequality,
        Identity::ExtremalBounds,
        Identity::MappingBounds,
        Identity::CatalanDistributions,
        Identity::TauRoundTrip,
        Identity::PsiRoundTrip,
        Identity::DeletableCycles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::TildeNm => "tilde-nm",
            Identity::SinkNm => "sink-nm",
            Identity::TreeInequality => "tree-inequality",
            Identity::ExtremalBounds => "extremal-bounds",
            Identity::MappingBounds => "mapping-bounds",
            Identity::CatalanDistributions => "catalan-distributions",
            Identity::TauRoundTrip => "tau-roundtrip",
            Identity::PsiRoundTrip => "psi-roundtrip",
            Identity::DeletableCycles => "deletable-cycles",
        }
    }

    /// What the two reported values mean.
    pub fn sides(self) -> (&'static str, &'static str) {
        match self {
            Identity::TildeNm => ("n * source-tree sum", "inverse-mapping sum"),
            Identity::SinkNm => ("n * sink-tree sum", "mapping sum"),
            Identity::TreeInequality => ("sink-tree sum", "source-tree sum"),
            Identity::ExtremalBounds | Identity::MappingBounds => ("minimum", "maximum"),
            Identity::CatalanDistributions => ("distributions on the path", "catalan number"),
            Identity::TauRoundTrip | Identity::PsiRoundTrip | Identity::DeletableCycles => ("inputs", "successes"),
        }
    }

    /// Whether rows are indexed by `(n, m)` rather than by `n` alone.
    fn per_m(self) -> bool {
        matches!(
            self,
            Identity::TildeNm | Identity::SinkNm | Identity::ExtremalBounds | Identity::MappingBounds | Identity::PsiRoundTrip
        )
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub n: usize,
    pub m: usize,
    #[serde(serialize_with = "serialize_big")]
    pub lhs: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub rhs: BigUint,
    /// Instances examined.
    pub checked: u64,
    /// Instances, or global conditions, that failed.
    pub failures: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub rows: Vec<IdentityRow>,
    pub pass: bool,
}

/// Checks `identity` for every `n` in `ns`. Identities indexed by `m` use
/// every `m` in `0..=n` that also lies in `ms` (all of them when `ms` is
/// `None`); the others use `m = n`.
pub fn verify_identity(
    identity: Identity,
    ns: RangeInclusive<usize>,
    ms: Option<RangeInclusive<usize>>,
    options: &SweepOptions,
) -> Result<IdentityReport> {
    let mut rows = Vec::new();
    for n in ns {
        options.check_cap(n)?;
        if identity.per_m() {
            for m in (0..=n).filter(|m| ms.as_ref().is_none_or(|r| r.contains(m))) {
                rows.push(row_for(identity, n, m, options)?);
            }
        } else {
            rows.push(row_for(identity, n, n, options)?);
        }
    }
    let (lhs, rhs) = identity.sides();
    Ok(IdentityReport { identity, lhs, rhs, pass: rows.iter().all(|r| r.pass), rows })
}

fn row(n: usize, m: usize, lhs: BigUint, rhs: BigUint, checked: u64, failures: u64) -> IdentityRow {
    IdentityRow { n, m, lhs, rhs, checked, failures, pass: failures == 0 }
}

fn row_for(identity: Identity, n: usize, m: usize, options: &SweepOptions) -> Result<IdentityRow> {
    match identity {
        Identity::TildeNm => family_identity(Family::SourceTrees, Family::InverseMappings, n, m, options),
        Identity::SinkNm => family_identity(Family::SinkTrees, Family::Mappings, n, m, options),
        Identity::TreeInequality => tree_inequality(n, options),
        Identity::ExtremalBounds => extremal_bounds(n, m, options),
        Identity::MappingBounds => mapping_bounds(n, m, options),
        Identity::CatalanDistributions => {
            let lhs = count_distributions(&Digraph::path(n), n)?;
            let rhs = binomial(2 * n as u64, n as u64) / BigUint::from(n as u64 + 1);
            let failures = u64::from(lhs != rhs);
            Ok(row(n, n, lhs, rhs, 1, failures))
        }
        Identity::TauRoundTrip => tau_round_trip(n, options),
        Identity::PsiRoundTrip => psi_round_trip(n, m, options),
        Identity::DeletableCycles => deletable_cycles(n, options),
    }
}

fn family_identity(trees: Family, maps: Family, n: usize, m: usize, options: &SweepOptions) -> Result<IdentityRow> {
    let t = family_sum(trees, n, m, options)?;
    let f = family_sum(maps, n, m, options)?;
    let lhs = BigUint::from(n) * t.value;
    let failures = u64::from(lhs != f.value);
    Ok(row(n, m, lhs, f.value, t.instances + f.instances, failures))
}

fn tree_inequality(n: usize, options: &SweepOptions) -> Result<IdentityRow> {
    let parts = sharded(Family::SinkTrees.size(n), options.workers, |range| {
        let mut counter = Counter::new();
        let (mut sink, mut source, mut bad) = (0u128, 0u128, 0u64);
        for i in range {
            let tree = rooted_tree_by_index(n, i, Orientation::Sink);
            let p = counter.count(&tree.as_digraph(), n);
            let q = counter.count(&tree.reversed().as_digraph(), n);
            if p > q || (p == q) != tree.is_path() {
                bad += 1;
            }
            sink += u128::from(p);
            source += u128::from(q);
        }
        (sink, source, bad)
    })?;
    let (sink, source, mut bad) = parts
        .into_iter()
        .fold((0u128, 0u128, 0u64), |a, (_, b)| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    if (sink == source) != (n <= 2) {
        bad += 1;
    }
    Ok(row(n, n, sink.into(), source.into(), Family::SinkTrees.size(n), bad))
}

/// Minimum, maximum and number of members outside `[lo, hi]`.
fn range_sweep(family: Family, n: usize, m: usize, lo: u64, hi: u64, options: &SweepOptions) -> Result<(u64, u64, u64)> {
    let parts = sharded(family.size(n), options.workers, |range| {
        let mut counter = Counter::new();
        let (mut min, mut max, mut bad) = (u64::MAX, 0u64, 0u64);
        for i in range {
            let p = counter.count(&family.digraph(n, i), m);
            min = min.min(p);
            max = max.max(p);
            bad += u64::from(p < lo || p > hi);
        }
        (min, max, bad)
    })?;
    Ok(parts
        .into_iter()
        .fold((u64::MAX, 0, 0), |a, (_, b)| (a.0.min(b.0), a.1.max(b.1), a.2 + b.2)))
}

fn to_u64(v: &BigUint) -> u64 {
    u64::try_from(v).expect("counts at sweep sizes fit in 64 bits")
}

fn extremal_bounds(n: usize, m: usize, options: &SweepOptions) -> Result<IdentityRow> {
    let lo = to_u64(&source_star_count(n as u64, m as u64));
    let hi = to_u64(&classical_count(n as u64, m as u64));
    let (min, max, mut bad) = range_sweep(Family::SourceTrees, n, m, lo, hi, options)?;
    let mut counter = Counter::new();
    bad += u64::from(counter.count(&star_tree(n, Orientation::Source)?.as_digraph(), m) != lo);
    bad += u64::from(counter.count(&path_tree(n, Orientation::Source)?.as_digraph(), m) != hi);
    Ok(row(n, m, min.into(), max.into(), Family::SourceTrees.size(n), bad))
}

/// Every mapping digraph, in either orientation, has between `m!` and `n^m`
/// parking functions. The cycle attains `n^m`; the identity attains the
/// minimum over all mappings, which is the falling factorial `n (n-1) ...
/// (n-m+1)` and equals `m!` when `m = n`.
fn mapping_bounds(n: usize, m: usize, options: &SweepOptions) -> Result<IdentityRow> {
    let lo = to_u64(&falling_factorial(m as u64, m as u64));
    let hi = (n as u64).pow(m as u32);
    let floor = to_u64(&falling_factorial(n as u64, m as u64));
    let mut min = u64::MAX;
    let mut max = 0;
    let mut bad = 0;
    let mut counter = Counter::new();
    for family in [Family::Mappings, Family::InverseMappings] {
        let (a, b, c) = range_sweep(family, n, m, lo, hi, options)?;
        min = min.min(a);
        max = max.max(b);
        bad += c + u64::from(a != floor);
    }
    for f in [cycle_mapping(n)?, identity_mapping(n)?] {
        let target = if f.image().iter().enumerate().all(|(i, &x)| x == i + 1) { floor } else { hi };
        bad += u64::from(counter.count(&f.mapping_digraph(), m) != target);
        bad += u64::from(counter.count(&f.inverse_mapping_digraph(), m) != target);
    }
    if m == n {
        bad += u64::from(floor != lo);
    }
    Ok(row(n, m, min.into(), max.into(), 2 * Family::Mappings.size(n), bad))
}

fn tally(parts: Vec<(std::ops::Range<u64>, (u64, u64))>) -> (u64, u64) {
    parts.into_iter().fold((0, 0), |a, (_, b)| (a.0 + b.0, a.1 + b.1))
}

fn tau_round_trip(n: usize, options: &SweepOptions) -> Result<IdentityRow> {
    let parts = sharded(Family::SinkTrees.size(n), options.workers, |range| {
        let (mut checked, mut bad) = (0u64, 0u64);
        for i in range {
            let tree = rooted_tree_by_index(n, i, Orientation::Sink);
            let d = tree.as_digraph();
            for s in all_sequences(n, n) {
                if !is_parking_function(&d, &s).unwrap_or(false) {
                    continue;
                }
                checked += 1;
                let ok = tau(&tree, &s).is_ok_and(|out| {
                    out.permutation.is_involution()
                        && is_source_tree_pf(&out.tree, &out.seq).unwrap_or(false)
                        && tau_inverse(&out.tree, &out.seq).is_ok_and(|back| back.tree == tree && back.seq == s)
                });
                bad += u64::from(!ok);
            }
        }
        (checked, bad)
    })?;
    let (checked, bad) = tally(parts);
    Ok(row(n, n, checked.into(), (checked - bad).into(), checked, bad))
}

/// Whether, in every cycle of `f`, the vertex taken from `b` has the highest
/// rank among heads of that cycle's deletable edges. Among all ranked cycle
/// vertices the claim fails already for `n = 3`.
fn b_has_top_rank(f: &MappingFn, s: &PreferenceSequence, b: &[usize]) -> bool {
    let ranks = RankTable::new(s, f.vertex_count());
    let Ok(cycles) = deletable_cycle_edges(&f.inverse_mapping_digraph(), s) else {
        return false;
    };
    cycles.iter().all(|c| {
        let top = c.deletable.iter().filter_map(|&(_, v)| ranks.rank(v).map(|r| (r, v))).max();
        c.cycle.iter().filter(|v| b.contains(v)).all(|&v| top.is_some_and(|(_, t)| t == v))
    })
}

fn psi_round_trip(n: usize, m: usize, options: &SweepOptions) -> Result<IdentityRow> {
    let forward = sharded(Family::SourceTrees.size(n), options.workers, |range| {
        let (mut checked, mut bad) = (0u64, 0u64);
        for i in range {
            let tree = rooted_tree_by_index(n, i, Orientation::Source);
            for s in all_sequences(n, m) {
                if !is_source_tree_pf(&tree, &s).unwrap_or(false) {
                    continue;
                }
                for mark in 1..=n {
                    checked += 1;
                    let x = MarkedSourceTreePF { tree: tree.clone(), seq: s.clone(), mark };
                    let ok = if m == n {
                        psi(&x).is_ok_and(|out| {
                            b_has_top_rank(&out.mapping, &s, &out.b)
                                && psi_inverse(&out.mapping, &s).is_ok_and(|back| back == x)
                        })
                    } else {
                        psi_nm(&x).is_ok_and(|f| psi_nm_inverse(&f, &s).is_ok_and(|back| back == x))
                    };
                    bad += u64::from(!ok);
                }
            }
        }
        (checked, bad)
    })?;
    let backward = sharded(Family::InverseMappings.size(n), options.workers, |range| {
        let (mut checked, mut bad) = (0u64, 0u64);
        for i in range {
            let f = mapping_by_index(n, i);
            let d = f.inverse_mapping_digraph();
            for s in all_sequences(n, m) {
                if !is_parking_function(&d, &s).unwrap_or(false) {
                    continue;
                }
                checked += 1;
                let ok = if m == n {
                    psi_inverse(&f, &s).is_ok_and(|x| psi(&x).is_ok_and(|out| out.mapping == f))
                } else {
                    psi_nm_inverse(&f, &s).is_ok_and(|x| psi_nm(&x).is_ok_and(|g| g == f))
                };
                bad += u64::from(!ok);
            }
        }
        (checked, bad)
    })?;
    let (fc, fb) = tally(forward);
    let (bc, bb) = tally(backward);
    let bad = fb + bb + u64::from(fc != bc);
    Ok(row(n, m, BigUint::from(fc + bc), BigUint::from(fc + bc - fb - bb), fc + bc, bad))
}

fn deletable_cycles(n: usize, options: &SweepOptions) -> Result<IdentityRow> {
    let parts = sharded(Family::InverseMappings.size(n), options.workers, |range| {
        let (mut checked, mut bad) = (0u64, 0u64);
        for i in range {
            let d = mapping_by_index(n, i).inverse_mapping_digraph();
            for s in all_sequences(n, n) {
                if !is_parking_function(&d, &s).unwrap_or(false) {
                    continue;
                }
                checked += 1;
                let ok = deletable_cycle_edges(&d, &s).is_ok_and(|cs| cs.iter().all(|c| !c.deletable.is_empty()));
                bad += u64::from(!ok);
            }
        }
        (checked, bad)
    })?;
    let (checked, bad) = tally(parts);
    Ok(row(n, n, checked.into(), (checked - bad).into(), checked, bad))
}
