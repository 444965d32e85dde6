//! Directed graphs on the vertex set `{1, ..., n}`, reachability closures and
//! the filters of the reachability quasiorder.
//!
//! Vertices are 1-based everywhere in the public API. Internally a
//! [`ReachSet`] stores vertex `v` at bit `v - 1`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 1]>;

fn word_count(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// A set of vertices drawn from `[n]`, stored as a bit set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReachSet {
    n: usize,
    words: Words,
}

impl ReachSet {
    pub fn empty(n: usize) -> Self {
        ReachSet {
            n,
            words: smallvec![0; word_count(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut set = Self::empty(n);
        for v in 1..=n {
            set.insert(v);
        }
        set
    }

    /// Builds a set from 1-based vertex labels. Labels outside `[n]` are an error.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Result<Self> {
        let mut set = Self::empty(n);
        for v in vertices {
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            set.insert(v);
        }
        Ok(set)
    }

    /// Size of the ground set.
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v >= 1 && v <= self.n && self.words[(v - 1) / 64] >> ((v - 1) % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        debug_assert!(v >= 1 && v <= self.n);
        let (w, b) = ((v - 1) / 64, (v - 1) % 64);
        let fresh = self.words[w] >> b & 1 == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v >= 1 && v <= self.n {
            self.words[(v - 1) / 64] &= !(1 << ((v - 1) % 64));
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ReachSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &ReachSet) -> ReachSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &ReachSet) -> ReachSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out
    }

    pub fn intersection(&self, other: &ReachSet) -> ReachSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn is_subset(&self, other: &ReachSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Vertices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit + 1)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ReachSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ReachSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// A directed graph on `[n]` without repeated edges. Self-loops are allowed.
///
/// The reachability closure is computed on first use and cached; after that
/// the graph is read-only and can be shared between threads.
#[derive(Clone)]
pub struct Digraph {
    n: usize,
    succ: Vec<Vec<usize>>,
    closure: OnceLock<Vec<ReachSet>>,
}

impl Digraph {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut succ = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if succ[u - 1].contains(&v) {
                return Err(Error::DuplicateEdge(u, v));
            }
            succ[u - 1].push(v);
        }
        for list in &mut succ {
            list.sort_unstable();
        }
        Ok(Digraph {
            n,
            succ,
            closure: OnceLock::new(),
        })
    }

    pub fn edgeless(n: usize) -> Self {
        Digraph {
            n,
            succ: vec![Vec::new(); n],
            closure: OnceLock::new(),
        }
    }

    /// The directed path `1 -> 2 -> ... -> n` (the classical one-way street).
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i, i + 1))).expect("path edges are in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u + 1, v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u >= 1 && u <= self.n && self.succ[u - 1].binary_search(&v).is_ok()
    }

    /// Out-neighbours of `v` in increasing order.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v - 1]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.succ[v - 1].len()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for (_, v) in self.edges() {
            deg[v - 1] += 1;
        }
        deg
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// A copy with every edge reversed.
    pub fn reversed(&self) -> Digraph {
        Self::new(self.n, self.edges().map(|(u, v)| (v, u))).expect("reversal keeps edges valid")
    }

    /// A copy with `(u, v)` removed. Missing edges are ignored.
    pub fn without_edge(&self, u: usize, v: usize) -> Digraph {
        Self::new(self.n, self.edges().filter(|&e| e != (u, v))).expect("subset of valid edges")
    }

    /// Reachability closure: entry `v - 1` is `R(v)`.
    pub fn closure(&self) -> &[ReachSet] {
        self.closure.get_or_init(|| {
            (1..=self.n).map(|v| self.search_from(v)).collect()
        })
    }

    fn search_from(&self, v: usize) -> ReachSet {
        let mut seen = ReachSet::empty(self.n);
        seen.insert(v);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.succ[u - 1] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// `R(v)`: every vertex reachable from `v` by a (possibly empty) directed path.
    pub fn reachable_from(&self, v: usize) -> Result<&ReachSet> {
        self.check_vertex(v)?;
        Ok(&self.closure()[v - 1])
    }

    /// `R(A)`, the union of `R(a)` over `a` in `A`.
    pub fn reachable_from_set<I: IntoIterator<Item = usize>>(&self, vertices: I) -> Result<ReachSet> {
        let closure = self.closure();
        let mut out = ReachSet::empty(self.n);
        for v in vertices {
            self.check_vertex(v)?;
            out.union_with(&closure[v - 1]);
        }
        Ok(out)
    }

    /// `i ⪯ j`: there is a directed path from `i` to `j`.
    pub fn precedes(&self, i: usize, j: usize) -> Result<bool> {
        self.check_vertex(j)?;
        Ok(self.reachable_from(i)?.contains(j))
    }

    /// All distinct reachable sets `R(B)` for `B ⊆ [n]`, i.e. the filters of
    /// the reachability quasiorder, ordered by size and then lexicographically.
    ///
    /// Every filter is a union of the single-vertex sets `R(v)`, so the family
    /// is grown by closing `{∅}` under union with each `R(v)` in turn.
    pub fn filters(&self) -> Vec<ReachSet> {
        let closure = self.closure();
        let mut seen: HashSet<ReachSet> = HashSet::new();
        seen.insert(ReachSet::empty(self.n));
        let mut basis: Vec<&ReachSet> = closure.iter().collect();
        basis.sort();
        basis.dedup();
        for r in basis {
            let grown: Vec<ReachSet> = seen.iter().map(|f| f.union(r)).collect();
            seen.extend(grown);
        }
        let mut out: Vec<ReachSet> = seen.into_iter().collect();
        out.sort_by_cached_key(|f| (f.len(), f.to_vec()));
        out
    }

    /// Renders the edge-list text format accepted by [`Digraph::from_str`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.succ == other.succ
    }
}

impl Eq for Digraph {}

impl std::hash::Hash for Digraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.succ.hash(state);
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Serialize for Digraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Digraph", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("edges", &self.edges().collect::<Vec<_>>())?;
        st.end()
    }
}

/// Strips a trailing `#` comment and surrounding whitespace.
pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses the edge-list format: the first significant line holds `n`, every
/// further line one `u v` pair. Blank lines and `#` comments are ignored.
impl FromStr for Digraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: idx + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match n {
                None => {
                    if fields.len() != 1 {
                        return Err(parse_err("expected the vertex count".into()));
                    }
                    n = Some(fields[0].parse().map_err(|e| parse_err(format!("bad vertex count: {e}")))?);
                }
                Some(count) => {
                    if fields.len() != 2 {
                        return Err(parse_err(format!("expected `u v`, got `{line}`")));
                    }
                    let mut pair = [0usize; 2];
                    for (slot, field) in pair.iter_mut().zip(&fields) {
                        *slot = field.parse().map_err(|e| parse_err(format!("bad vertex `{field}`: {e}")))?;
                        if *slot == 0 || *slot > count {
                            return Err(parse_err(format!("vertex {} outside 1..={count}", *slot)));
                        }
                    }
                    if !seen.insert((pair[0], pair[1])) {
                        return Err(parse_err(format!("duplicate edge ({}, {})", pair[0], pair[1])));
                    }
                    edges.push((pair[0], pair[1]));
                }
            }
        }
        let n = n.ok_or(Error::Parse { line: 0, message: "missing vertex count".into() })?;
        Digraph::new(n, edges)
    }
}
