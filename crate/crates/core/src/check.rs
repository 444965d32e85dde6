//! Deciding whether a preference sequence parks on a digraph, with
//! certificates either way.
//!
//! A sequence `s` parks on `D` exactly when the drivers can be matched to
//! distinct vertices, driver `i` only to vertices reachable from `s_i`. A
//! maximum matching therefore answers the question; when it saturates the
//! drivers it is turned into an explicit run of the parking process, and
//! when it does not, its deficiency yields a set `B` of vertices whose
//! reachable set is wanted by too many drivers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{Orientation, RootedTree};
use crate::graph::{Digraph, ReachSet};
use crate::matching::Matcher;

/// Driver preferences `(s_1, ..., s_m)`, 1-based vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct PreferenceSequence(Vec<usize>);

impl PreferenceSequence {
    pub fn new(entries: Vec<usize>) -> Self {
        PreferenceSequence(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&v| v == 0 || v > n) {
            Some(&vertex) => Err(Error::VertexOutOfRange { vertex, n }),
            None => Ok(()),
        }
    }

    /// Number of drivers preferring a vertex of `set`.
    pub fn demand(&self, set: &ReachSet) -> usize {
        self.0.iter().filter(|&&v| set.contains(v)).count()
    }

    /// Per-vertex preference counts, indexed by `v - 1`.
    pub fn counts(&self, n: usize) -> Vec<usize> {
        let mut c = vec![0; n];
        for &v in &self.0 {
            c[v - 1] += 1;
        }
        c
    }

    pub fn sorted(&self) -> PreferenceSequence {
        let mut v = self.0.clone();
        v.sort_unstable();
        PreferenceSequence(v)
    }
}

impl From<Vec<usize>> for PreferenceSequence {
    fn from(v: Vec<usize>) -> Self {
        PreferenceSequence(v)
    }
}

impl<const N: usize> From<[usize; N]> for PreferenceSequence {
    fn from(v: [usize; N]) -> Self {
        PreferenceSequence(v.to_vec())
    }
}

impl fmt::Display for PreferenceSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Comma-separated list, e.g. `1,1,3,2,1`. The empty string is the empty sequence.
impl FromStr for PreferenceSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(PreferenceSequence(Vec::new()));
        }
        s.split(',')
            .map(|t| {
                t.trim().parse::<usize>().map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("bad preference `{}`: {e}", t.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(PreferenceSequence)
    }
}

/// A run of the parking process: where every driver parked and the walk
/// that got her there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParkingOutcome {
    /// `assignment[i]` is the vertex driver `i + 1` parked on.
    pub assignment: Vec<usize>,
    /// `walks[i]` starts at `s_{i+1}` and ends at `assignment[i]`.
    pub walks: Vec<Vec<usize>>,
}

impl ParkingOutcome {
    /// Edges traversed by any driver.
    pub fn used_edges(&self) -> BTreeSet<(usize, usize)> {
        self.walks
            .iter()
            .flat_map(|w| w.windows(2).map(|p| (p[0], p[1])))
            .collect()
    }
}

/// A set `B` with `|{i : s_i ∈ R(B)}| > |R(B)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HallViolator {
    pub b: Vec<usize>,
    pub reach: ReachSet,
    pub demand: usize,
}

/// Per-vertex driver counts, `f(v)` drivers preferring `v`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ParkingDistribution {
    counts: BTreeMap<usize, u64>,
}

impl ParkingDistribution {
    pub fn new<I: IntoIterator<Item = (usize, u64)>>(pairs: I) -> Self {
        let mut counts = BTreeMap::new();
        for (v, c) in pairs {
            if c > 0 {
                *counts.entry(v).or_insert(0) += c;
            }
        }
        ParkingDistribution { counts }
    }

    pub fn from_sequence(s: &PreferenceSequence) -> Self {
        Self::new(s.as_slice().iter().map(|&v| (v, 1)))
    }

    pub fn get(&self, v: usize) -> u64 {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// The weakly increasing sequence with these counts.
    pub fn to_sequence(&self) -> PreferenceSequence {
        PreferenceSequence(
            self.counts
                .iter()
                .flat_map(|(&v, &c)| std::iter::repeat_n(v, c as usize))
                .collect(),
        )
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self.counts.keys().find(|&&v| v == 0 || v > n) {
            Some(&vertex) => Err(Error::VertexOutOfRange { vertex, n }),
            None => Ok(()),
        }
    }
}

/// `vertex:count` pairs separated by commas, e.g. `1:2,3:1`.
impl FromStr for ParkingDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: String| Error::Parse { line: 0, message };
        let mut pairs = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (v, c) = part
                .split_once(':')
                .ok_or_else(|| bad(format!("expected `vertex:count`, got `{part}`")))?;
            let v = v.trim().parse::<usize>().map_err(|e| bad(format!("bad vertex `{v}`: {e}")))?;
            let c = c.trim().parse::<u64>().map_err(|e| bad(format!("bad count `{c}`: {e}")))?;
            pairs.push((v, c));
        }
        Ok(ParkingDistribution::new(pairs))
    }
}

fn driver_rows<'a>(d: &'a Digraph, s: &PreferenceSequence) -> Vec<&'a ReachSet> {
    let closure = d.closure();
    s.as_slice().iter().map(|&v| &closure[v - 1]).collect()
}

/// Whether `s` is a parking function on `d`.
pub fn is_parking_function(d: &Digraph, s: &PreferenceSequence) -> Result<bool> {
    s.validate(d.vertex_count())?;
    if s.len() > d.vertex_count() {
        return Ok(false);
    }
    Ok(Matcher::new().saturates(&driver_rows(d, s), d.vertex_count()))
}

/// A violated Hall inequality when `s` does not park, `None` when it does.
///
/// An unmatched driver of a maximum matching, together with every driver
/// reachable from it by alternating paths, forms a set `Z` whose combined
/// reach is matched into `Z` minus one driver. With `B` the preferences of
/// `Z`, `R(B)` is that reach and at least `|Z| > |R(B)|` drivers prefer it.
pub fn hall_witness(d: &Digraph, s: &PreferenceSequence) -> Result<Option<HallViolator>> {
    s.validate(d.vertex_count())?;
    let rows = driver_rows(d, s);
    let mut matcher = Matcher::new();
    if matcher.solve(&rows, d.vertex_count()) == s.len() {
        return Ok(None);
    }
    let unmatched = matcher
        .assignment()
        .iter()
        .position(Option::is_none)
        .expect("deficient matching leaves a driver unmatched");
    let drivers = matcher.alternating_drivers(&rows, unmatched);
    let b: BTreeSet<usize> = drivers.iter().map(|&i| s.as_slice()[i]).collect();
    let reach = d.reachable_from_set(b.iter().copied())?;
    let demand = s.demand(&reach);
    if demand <= reach.len() {
        return Err(Error::Invariant("alternating set does not violate Hall's condition".into()));
    }
    Ok(Some(HallViolator { b: b.into_iter().collect(), reach, demand }))
}

/// One successful run of the parking process, or `None` if `s` does not park.
///
/// Starts from a saturating matching `i -> v_i`. Driver `i` searches from
/// `s_i` through occupied vertices and parks on the smallest-labelled free
/// vertex `x` that still reaches `v_i`; a later driver matched to `x` is
/// rematched to `v_i`, which it can reach through `x`.
pub fn parking_schedule(d: &Digraph, s: &PreferenceSequence) -> Result<Option<ParkingOutcome>> {
    let n = d.vertex_count();
    s.validate(n)?;
    if s.len() > n {
        return Ok(None);
    }
    let rows = driver_rows(d, s);
    let mut matcher = Matcher::new();
    if matcher.solve(&rows, n) != s.len() {
        return Ok(None);
    }
    let mut target: Vec<usize> = matcher.assignment().into_iter().map(Option::unwrap).collect();
    let closure = d.closure();
    let mut occupied = ReachSet::empty(n);
    let mut assignment = Vec::with_capacity(s.len());
    let mut walks = Vec::with_capacity(s.len());

    for (i, &start) in s.as_slice().iter().enumerate() {
        let goal = target[i];
        let (x, walk) = if !occupied.contains(start) {
            (start, vec![start])
        } else {
            let mut prev = vec![0usize; n + 1];
            let mut seen = ReachSet::empty(n);
            seen.insert(start);
            let mut queue = VecDeque::from([start]);
            let mut best: Option<usize> = None;
            while let Some(y) = queue.pop_front() {
                for &z in d.successors(y) {
                    if !seen.insert(z) {
                        continue;
                    }
                    prev[z] = y;
                    if occupied.contains(z) {
                        queue.push_back(z);
                    } else if closure[z - 1].contains(goal) && best.is_none_or(|b| z < b) {
                        best = Some(z);
                    }
                }
            }
            let x = best.ok_or_else(|| Error::Invariant("no free vertex on the way to the matched spot".into()))?;
            let mut walk = vec![x];
            let mut cur = x;
            while cur != start {
                cur = prev[cur];
                walk.push(cur);
            }
            walk.reverse();
            (x, walk)
        };
        if x != goal {
            if let Some(j) = (i + 1..s.len()).find(|&j| target[j] == x) {
                target[j] = goal;
            }
        }
        occupied.insert(x);
        assignment.push(x);
        walks.push(walk);
    }
    Ok(Some(ParkingOutcome { assignment, walks }))
}

/// Replays `o` against the parking process and reports whether every step
/// is legal: walks start at the preference, follow edges, pass only through
/// occupied vertices and end on a free one.
pub fn replay_validate(d: &Digraph, s: &PreferenceSequence, o: &ParkingOutcome) -> bool {
    let n = d.vertex_count();
    if o.assignment.len() != s.len() || o.walks.len() != s.len() || s.validate(n).is_err() {
        return false;
    }
    let mut occupied = ReachSet::empty(n);
    for ((&pref, walk), &spot) in s.as_slice().iter().zip(&o.walks).zip(&o.assignment) {
        let (Some(&first), Some(&last)) = (walk.first(), walk.last()) else {
            return false;
        };
        if first != pref || last != spot || walk.iter().any(|&v| v == 0 || v > n) {
            return false;
        }
        if !walk.windows(2).all(|p| d.has_edge(p[0], p[1])) {
            return false;
        }
        if !walk[..walk.len() - 1].iter().all(|&v| occupied.contains(v)) {
            return false;
        }
        if occupied.contains(last) {
            return false;
        }
        occupied.insert(last);
    }
    true
}

/// Every vertex has out-degree at most one.
pub fn is_deterministic(d: &Digraph) -> bool {
    (1..=d.vertex_count()).all(|v| d.out_degree(v) <= 1)
}

/// Result of running the forced parking process on a deterministic digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterministicRun {
    pub outcome: ParkingOutcome,
    /// Edges traversed by a driver after failing to park at her preference.
    pub highlighted: BTreeSet<(usize, usize)>,
}

/// Runs the unique parking process. `None` if some driver gets stuck at a
/// vertex with no exit or comes back around a cycle of occupied vertices.
pub fn simulate_deterministic(d: &Digraph, s: &PreferenceSequence) -> Result<Option<DeterministicRun>> {
    let n = d.vertex_count();
    if !is_deterministic(d) {
        return Err(Error::NotDeterministic);
    }
    s.validate(n)?;
    let mut occupied = ReachSet::empty(n);
    let mut assignment = Vec::with_capacity(s.len());
    let mut walks = Vec::with_capacity(s.len());
    let mut highlighted = BTreeSet::new();
    for &start in s.as_slice() {
        let mut walk = vec![start];
        let mut visited = ReachSet::empty(n);
        visited.insert(start);
        let mut cur = start;
        while occupied.contains(cur) {
            let Some(&next) = d.successors(cur).first() else {
                return Ok(None);
            };
            if !visited.insert(next) {
                return Ok(None);
            }
            highlighted.insert((cur, next));
            walk.push(next);
            cur = next;
        }
        occupied.insert(cur);
        assignment.push(cur);
        walks.push(walk);
    }
    Ok(Some(DeterministicRun { outcome: ParkingOutcome { assignment, walks }, highlighted }))
}

/// Source-tree shortcut: `s` parks iff no subtree is preferred by more
/// drivers than it has vertices. Linear in `n + m`.
pub fn is_source_tree_pf(tree: &RootedTree, s: &PreferenceSequence) -> Result<bool> {
    if tree.orientation() != Orientation::Source {
        return Err(Error::OrientationMismatch { expected: Orientation::Source });
    }
    let n = tree.vertex_count();
    s.validate(n)?;
    let mut demand = s.counts(n);
    let mut size = vec![1usize; n];
    for &v in tree.top_down_order().iter().rev() {
        if demand[v - 1] > size[v - 1] {
            return Ok(false);
        }
        if let Some(p) = tree.parent(v) {
            demand[p - 1] += demand[v - 1];
            size[p - 1] += size[v - 1];
        }
    }
    Ok(true)
}

/// Prime parking functions: every filter other than `[n]` (and the empty
/// one, where the strict inequality is vacuous) is preferred by strictly
/// fewer drivers than it has vertices.
pub fn is_prime(d: &Digraph, s: &PreferenceSequence) -> Result<bool> {
    if !is_parking_function(d, s)? {
        return Ok(false);
    }
    let n = d.vertex_count();
    Ok(d
        .filters()
        .iter()
        .filter(|f| !f.is_empty() && f.len() < n)
        .all(|f| s.demand(f) < f.len()))
}

/// Whether a per-vertex demand can be satisfied: `sum_{v ∈ F} f(v) <= |F|`
/// for every filter `F`.
pub fn is_parking_distribution(d: &Digraph, f: &ParkingDistribution) -> Result<bool> {
    let n = d.vertex_count();
    f.validate(n)?;
    if f.total() > n as u64 {
        return Ok(false);
    }
    Ok(d.filters().iter().all(|filter| {
        let demand: u64 = filter.iter().map(|v| f.get(v)).sum();
        demand <= filter.len() as u64
    }))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::families::{path_tree, star_tree};
    use proptest::prelude::*;

    pub(crate) fn fig1() -> Digraph {
        Digraph::new(5, [(3, 2), (1, 3), (1, 2), (4, 5), (1, 4), (2, 5)]).unwrap()
    }

    pub(crate) fn fig2_source_tree() -> RootedTree {
        // root 3; 3 -> 6, 3 -> 1, 1 -> 2, 1 -> 7, 1 -> 4, 4 -> 5
        RootedTree::from_parents(3, vec![3, 1, 0, 1, 4, 3, 1], Orientation::Source).unwrap()
    }

    pub(crate) fn fig3_tree(o: Orientation) -> RootedTree {
        RootedTree::from_parents(4, vec![3, 3, 4, 0], o).unwrap()
    }

    pub(crate) fn fig4_sink_tree() -> RootedTree {
        // 1 -> 2 -> 3 -> 5 -> 6, 4 -> 5
        RootedTree::from_parents(6, vec![2, 3, 5, 5, 6, 0], Orientation::Sink).unwrap()
    }

    fn seq(v: &[usize]) -> PreferenceSequence {
        PreferenceSequence::new(v.to_vec())
    }

    #[test]
    fn figure1_parks() {
        assert!(is_parking_function(&fig1(), &seq(&[1, 1, 3, 2, 1])).unwrap());
        assert!(is_parking_function(&fig1(), &seq(&[])).unwrap());
        assert!(is_parking_function(&fig1(), &seq(&[1, 6])).is_err());
    }

    #[test]
    fn figure3_source_tree_pairs() {
        let d = fig3_tree(Orientation::Source).as_digraph();
        for a in 1..=4 {
            for b in 1..=4 {
                let ok = is_parking_function(&d, &seq(&[a, b])).unwrap();
                assert_eq!(ok, !(a == b && a <= 2), "({a},{b})");
            }
        }
    }

    #[test]
    fn more_drivers_than_vertices_is_false() {
        let d = Digraph::path(2);
        assert!(!is_parking_function(&d, &seq(&[1, 1, 1])).unwrap());
        assert!(parking_schedule(&d, &seq(&[1, 1, 1])).unwrap().is_none());
        let w = hall_witness(&d, &seq(&[1, 1, 1])).unwrap().unwrap();
        assert!(w.demand > w.reach.len());
    }

    #[test]
    fn hall_witness_examples() {
        let d = fig3_tree(Orientation::Source).as_digraph();
        let w = hall_witness(&d, &seq(&[1, 1])).unwrap().unwrap();
        assert_eq!(w.b, vec![1]);
        assert_eq!(w.reach.to_vec(), vec![1]);
        assert_eq!(w.demand, 2);

        let w = hall_witness(&Digraph::path(2), &seq(&[2, 2])).unwrap().unwrap();
        assert_eq!((w.b.clone(), w.reach.to_vec(), w.demand), (vec![2], vec![2], 2));

        let t = fig2_source_tree().as_digraph();
        assert_eq!(hall_witness(&t, &seq(&[2, 3, 4, 1, 3, 5, 1])).unwrap(), None);
    }

    #[test]
    fn schedule_examples() {
        let d = Digraph::path(3);
        let o = parking_schedule(&d, &seq(&[1, 1, 1])).unwrap().unwrap();
        assert_eq!(o.assignment, vec![1, 2, 3]);
        assert!(replay_validate(&d, &seq(&[1, 1, 1]), &o));

        let s = seq(&[1, 1, 3, 2, 1]);
        let o = parking_schedule(&fig1(), &s).unwrap().unwrap();
        assert!(replay_validate(&fig1(), &s, &o));
        assert!(o.used_edges().contains(&(1, 4)));

        let t = fig2_source_tree().as_digraph();
        let s = seq(&[2, 3, 4, 1, 3, 5, 1]);
        let o = parking_schedule(&t, &s).unwrap().unwrap();
        assert!(replay_validate(&t, &s, &o));
        let spots: BTreeSet<usize> = o.assignment.iter().copied().collect();
        assert_eq!(spots, (1..=7).collect());

        assert!(parking_schedule(&fig3_tree(Orientation::Source).as_digraph(), &seq(&[2, 2])).unwrap().is_none());
    }

    #[test]
    fn replay_examples() {
        let d = Digraph::path(2);
        let s = seq(&[1, 1]);
        let good = ParkingOutcome { assignment: vec![1, 2], walks: vec![vec![1], vec![1, 2]] };
        assert!(replay_validate(&d, &s, &good));
        let bad = ParkingOutcome { assignment: vec![1, 2], walks: vec![vec![1], vec![2]] };
        assert!(!replay_validate(&d, &s, &bad));
        let empty_walk = ParkingOutcome { assignment: vec![1, 2], walks: vec![vec![1], vec![]] };
        assert!(!replay_validate(&d, &s, &empty_walk));
        let passes_free = ParkingOutcome { assignment: vec![2], walks: vec![vec![1, 2]] };
        assert!(!replay_validate(&d, &seq(&[1]), &passes_free));

        // Figure 1 by hand: 1 parks at 1, 2 goes 1 -> 4, 3 parks at 3,
        // 4 parks at 2, 5 goes 1 -> 2 -> 5.
        let s = seq(&[1, 1, 3, 2, 1]);
        let o = ParkingOutcome {
            assignment: vec![1, 4, 3, 2, 5],
            walks: vec![vec![1], vec![1, 4], vec![3], vec![2], vec![1, 2, 5]],
        };
        assert!(replay_validate(&fig1(), &s, &o));
    }

    #[test]
    fn determinism() {
        assert!(is_deterministic(&fig4_sink_tree().as_digraph()));
        assert!(!is_deterministic(&fig1()));
        assert!(is_deterministic(&Digraph::edgeless(3)));
        assert_eq!(simulate_deterministic(&fig1(), &seq(&[1])), Err(Error::NotDeterministic));
    }

    #[test]
    fn simulate_examples() {
        let d = fig4_sink_tree().as_digraph();
        let s = seq(&[1, 4, 4, 2, 1, 3]);
        let run = simulate_deterministic(&d, &s).unwrap().unwrap();
        assert_eq!(run.outcome.assignment, vec![1, 4, 5, 2, 3, 6]);
        let expected: BTreeSet<(usize, usize)> = [(1, 2), (2, 3), (3, 5), (4, 5), (5, 6)].into();
        assert_eq!(run.highlighted, expected);
        assert!(replay_validate(&d, &s, &run.outcome));

        assert!(simulate_deterministic(&Digraph::path(2), &seq(&[2, 2])).unwrap().is_none());
        let empty = simulate_deterministic(&d, &seq(&[])).unwrap().unwrap();
        assert!(empty.outcome.assignment.is_empty() && empty.highlighted.is_empty());

        // occupied cycle with no free vertex
        let cyc = Digraph::new(2, [(1, 2), (2, 1)]).unwrap();
        assert!(simulate_deterministic(&cyc, &seq(&[1, 1, 1])).unwrap().is_none());
    }

    #[test]
    fn source_tree_shortcut_examples() {
        let t = fig2_source_tree();
        assert!(is_source_tree_pf(&t, &seq(&[2, 3, 4, 1, 3, 5, 1])).unwrap());
        assert!(!is_source_tree_pf(&fig3_tree(Orientation::Source), &seq(&[1, 1])).unwrap());
        assert!(is_source_tree_pf(&t, &seq(&[3; 7])).unwrap());
        assert_eq!(
            is_source_tree_pf(&fig3_tree(Orientation::Sink), &seq(&[1])),
            Err(Error::OrientationMismatch { expected: Orientation::Source })
        );
        assert!(!is_source_tree_pf(&t, &seq(&[3; 8])).unwrap());
    }

    #[test]
    fn prime_examples() {
        let p2 = Digraph::path(2);
        assert!(is_prime(&p2, &seq(&[1, 1])).unwrap());
        assert!(!is_prime(&p2, &seq(&[1, 2])).unwrap());
        assert!(!is_prime(&p2, &seq(&[2, 2])).unwrap());
        assert!(is_prime(&fig4_sink_tree().as_digraph(), &seq(&[1, 4, 4, 2, 1, 3])).unwrap());
    }

    #[test]
    fn prime_count_on_path_matches_classical() {
        // classical primes number (n-1)^(n-1)
        for n in 2..=5usize {
            let d = Digraph::path(n);
            let mut count = 0;
            for code in 0..n.pow(n as u32) {
                let s: Vec<usize> = (0..n).map(|k| code / n.pow(k as u32) % n + 1).collect();
                if is_prime(&d, &seq(&s)).unwrap() {
                    count += 1;
                }
            }
            assert_eq!(count, (n - 1).pow(n as u32 - 1), "n = {n}");
        }
    }

    #[test]
    fn distribution_examples() {
        let d = Digraph::path(3);
        let f: ParkingDistribution = "1:1,2:1,3:1".parse().unwrap();
        assert!(is_parking_distribution(&d, &f).unwrap());
        let f: ParkingDistribution = "3:2".parse().unwrap();
        assert!(!is_parking_distribution(&d, &f).unwrap());
        let f: ParkingDistribution = "1:4".parse().unwrap();
        assert!(!is_parking_distribution(&d, &f).unwrap());
        assert!(is_parking_distribution(&d, &"4:1".parse().unwrap()).is_err());
        assert!("1:-1".parse::<ParkingDistribution>().is_err());
        assert!("1".parse::<ParkingDistribution>().is_err());

        let mut total = 0;
        for a in 0..=3u64 {
            for b in 0..=3 - a {
                let f = ParkingDistribution::new([(1, a), (2, b), (3, 3 - a - b)]);
                if is_parking_distribution(&d, &f).unwrap() {
                    total += 1;
                }
            }
        }
        assert_eq!(total, 5);
    }

    #[test]
    fn sequence_parsing() {
        let s: PreferenceSequence = "1,1,3,2,1".parse().unwrap();
        assert_eq!(s.as_slice(), &[1, 1, 3, 2, 1]);
        assert_eq!(s.to_string(), "(1,1,3,2,1)");
        assert_eq!("(2, 3)".parse::<PreferenceSequence>().unwrap().as_slice(), &[2, 3]);
        assert!("".parse::<PreferenceSequence>().unwrap().is_empty());
        assert!("1,,2".parse::<PreferenceSequence>().is_err());
        assert!("1,-2".parse::<PreferenceSequence>().is_err());
    }

    /// Definition-level check on the path `1 -> ... -> n`.
    fn classical_inequality(n: usize, s: &[usize]) -> bool {
        (1..=n).all(|i| s.iter().filter(|&&x| x >= i).count() <= n - i + 1)
    }

    fn all_sequences(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
        (0..n.pow(m as u32)).map(move |code| (0..m).map(|k| code / n.pow(k as u32) % n + 1).collect())
    }

    #[test]
    fn classical_consistency() {
        for n in 1..=5 {
            let d = Digraph::path(n);
            for m in 0..=n {
                for s in all_sequences(n, m) {
                    assert_eq!(
                        is_parking_function(&d, &seq(&s)).unwrap(),
                        classical_inequality(n, &s),
                        "n={n} s={s:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn source_shortcut_agrees_with_matching_exhaustively() {
        for n in 1..=4 {
            for tree in crate::families::all_rooted_trees(n, Orientation::Source).unwrap() {
                let d = tree.as_digraph();
                for m in 0..=n + 1 {
                    for s in all_sequences(n, m) {
                        let s = seq(&s);
                        assert_eq!(is_source_tree_pf(&tree, &s).unwrap(), is_parking_function(&d, &s).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn permutation_invariance_exhaustive() {
        for n in 1..=3 {
            for mask in 0u32..1 << (n * n) {
                let edges = (0..n * n).filter(|k| mask >> k & 1 == 1).map(|k| (k / n + 1, k % n + 1));
                let d = Digraph::new(n, edges).unwrap();
                for s in all_sequences(n, n) {
                    let base = is_parking_function(&d, &seq(&s)).unwrap();
                    let mut r = s.clone();
                    r.reverse();
                    assert_eq!(base, is_parking_function(&d, &seq(&r)).unwrap());
                    r.rotate_left(1);
                    assert_eq!(base, is_parking_function(&d, &seq(&r)).unwrap());
                }
            }
        }
    }

    #[test]
    fn star_trees_small_counts() {
        let star = star_tree(3, Orientation::Source).unwrap().as_digraph();
        let parks = all_sequences(3, 3).filter(|s| is_parking_function(&star, &seq(s)).unwrap()).count();
        assert_eq!(parks, 13);
        let star = star_tree(3, Orientation::Sink).unwrap().as_digraph();
        let parks = all_sequences(3, 3).filter(|s| is_parking_function(&star, &seq(s)).unwrap()).count();
        assert_eq!(parks, 12);
        let path = path_tree(3, Orientation::Sink).unwrap().as_digraph();
        let parks = all_sequences(3, 3).filter(|s| is_parking_function(&path, &seq(s)).unwrap()).count();
        assert_eq!(parks, 16);
    }

    fn arb_instance() -> impl Strategy<Value = (Digraph, Vec<usize>, Vec<usize>)> {
        (1usize..=6).prop_flat_map(|n| {
            (
                proptest::collection::vec(proptest::bool::weighted(0.25), n * n),
                proptest::collection::vec(1..=n, 0..=n + 1),
                Just(n),
            )
                .prop_flat_map(|(bits, s, n)| {
                    let d = Digraph::new(n, (0..n * n).filter(|&k| bits[k]).map(|k| (k / n + 1, k % n + 1))).unwrap();
                    let len = s.len();
                    (Just(d), Just(s), Just((0..len).collect::<Vec<usize>>()).prop_shuffle())
                })
        })
    }

    proptest! {
        #[test]
        fn permutation_invariance_random((d, s, perm) in arb_instance()) {
            let permuted: Vec<usize> = perm.iter().map(|&i| s[i]).collect();
            prop_assert_eq!(
                is_parking_function(&d, &seq(&s)).unwrap(),
                is_parking_function(&d, &seq(&permuted)).unwrap()
            );
        }

        #[test]
        fn certificates_are_sound((d, s, _perm) in arb_instance()) {
            let s = seq(&s);
            let pf = is_parking_function(&d, &s).unwrap();
            match parking_schedule(&d, &s).unwrap() {
                Some(o) => { prop_assert!(pf); prop_assert!(replay_validate(&d, &s, &o)); }
                None => prop_assert!(!pf),
            }
            match hall_witness(&d, &s).unwrap() {
                Some(w) => {
                    prop_assert!(!pf);
                    prop_assert!(w.demand > w.reach.len());
                    prop_assert_eq!(&w.reach, &d.reachable_from_set(w.b.iter().copied()).unwrap());
                    prop_assert_eq!(w.demand, s.demand(&w.reach));
                }
                None => prop_assert!(pf),
            }
        }

        #[test]
        fn prime_implies_parking_and_distribution_agrees((d, s, _perm) in arb_instance()) {
            let s = seq(&s);
            let pf = is_parking_function(&d, &s).unwrap();
            if is_prime(&d, &s).unwrap() {
                prop_assert!(pf);
            }
            let dist = ParkingDistribution::from_sequence(&s);
            prop_assert_eq!(is_parking_distribution(&d, &dist).unwrap(), pf);
            prop_assert_eq!(is_parking_function(&d, &dist.to_sequence()).unwrap(), pf);
        }
    }
}
