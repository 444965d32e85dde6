//! Sink trees, source trees, mapping digraphs and inverse mapping digraphs,
//! together with the closed-form counts that bound their parking functions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{strip_comment, Digraph, ReachSet};

/// Edge direction of a rooted tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Edges point towards the root.
    Sink,
    /// Edges point away from the root.
    Source,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Sink => Orientation::Source,
            Orientation::Source => Orientation::Sink,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Sink => "sink",
            Orientation::Source => "source",
        })
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sink" => Ok(Orientation::Sink),
            "source" => Ok(Orientation::Source),
            other => Err(Error::Parse { line: 0, message: format!("unknown orientation `{other}`") }),
        }
    }
}

/// A labelled tree on `[n]` with a distinguished root and an edge orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RootedTree {
    root: usize,
    /// `parent[v - 1]`; zero for the root.
    parent: Vec<usize>,
    orientation: Orientation,
}

impl RootedTree {
    /// Builds a tree from a parent array (`parents[v - 1]`, with `0` at the root).
    pub fn from_parents(root: usize, parents: Vec<usize>, orientation: Orientation) -> Result<Self> {
        let n = parents.len();
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        if root == 0 || root > n {
            return Err(Error::VertexOutOfRange { vertex: root, n });
        }
        for (i, &p) in parents.iter().enumerate() {
            let v = i + 1;
            if v == root {
                if p != 0 {
                    return Err(Error::InvalidTree(format!("root {root} has parent {p}")));
                }
            } else if p == 0 || p > n {
                return Err(Error::InvalidTree(format!("vertex {v} has invalid parent {p}")));
            } else if p == v {
                return Err(Error::InvalidTree(format!("vertex {v} is its own parent")));
            }
        }
        // every vertex must reach the root within n steps
        for v in 1..=n {
            let mut cur = v;
            let mut steps = 0;
            while cur != root {
                cur = parents[cur - 1];
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidTree(format!("vertex {v} lies on a cycle")));
                }
            }
        }
        Ok(RootedTree { root, parent: parents, orientation })
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        match self.parent[v - 1] {
            0 => None,
            p => Some(p),
        }
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// Children of `v` in increasing label order.
    pub fn children(&self, v: usize) -> Vec<usize> {
        (1..=self.vertex_count()).filter(|&c| self.parent[c - 1] == v).collect()
    }

    /// Vertices with no children, increasing.
    pub fn leaves(&self) -> Vec<usize> {
        let mut has_child = vec![false; self.vertex_count()];
        for &p in &self.parent {
            if p != 0 {
                has_child[p - 1] = true;
            }
        }
        (1..=self.vertex_count()).filter(|&v| !has_child[v - 1]).collect()
    }

    /// Same labels and root, opposite orientation.
    pub fn reversed(&self) -> RootedTree {
        RootedTree { orientation: self.orientation.flipped(), ..self.clone() }
    }

    pub fn with_orientation(&self, orientation: Orientation) -> RootedTree {
        RootedTree { orientation, ..self.clone() }
    }

    /// `[root, ..., v]`.
    pub fn path_from_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Vertices ordered so that every vertex comes after its parent.
    pub fn top_down_order(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut children = vec![Vec::new(); n + 1];
        for v in 1..=n {
            if let Some(p) = self.parent(v) {
                children[p].push(v);
            }
        }
        let mut order = Vec::with_capacity(n);
        order.push(self.root);
        let mut i = 0;
        while i < order.len() {
            order.extend(children[order[i]].iter().copied());
            i += 1;
        }
        order
    }

    /// Vertex set of the subtree below `u` (including `u`).
    pub fn subtree(&self, u: usize) -> ReachSet {
        let n = self.vertex_count();
        let mut set = ReachSet::empty(n);
        for v in 1..=n {
            let mut cur = v;
            loop {
                if cur == u {
                    set.insert(v);
                    break;
                }
                match self.parent(cur) {
                    Some(p) => cur = p,
                    None => break,
                }
            }
        }
        set
    }

    /// Subtree sizes, indexed by `v - 1`.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1; self.vertex_count()];
        for &v in self.top_down_order().iter().rev() {
            if let Some(p) = self.parent(v) {
                size[p - 1] += size[v - 1];
            }
        }
        size
    }

    /// Whether the tree is a directed path hanging from the root.
    pub fn is_path(&self) -> bool {
        let mut child_count = vec![0; self.vertex_count()];
        for &p in &self.parent {
            if p != 0 {
                child_count[p - 1] += 1;
            }
        }
        child_count.iter().all(|&c| c <= 1)
    }

    /// The tree's edges as oriented by `orientation`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..=self.vertex_count())
            .filter_map(|v| self.parent(v).map(|p| (v, p)))
            .map(|(c, p)| match self.orientation {
                Orientation::Sink => (c, p),
                Orientation::Source => (p, c),
            })
            .collect()
    }

    pub fn as_digraph(&self) -> Digraph {
        Digraph::new(self.vertex_count(), self.edges()).expect("tree edges are valid")
    }

    /// Recovers a tree from a digraph that is exactly a rooted tree in the
    /// given orientation.
    pub fn from_digraph(d: &Digraph, orientation: Orientation) -> Result<Self> {
        let n = d.vertex_count();
        let mut parents = vec![0; n];
        for (u, v) in d.edges() {
            let (child, parent) = match orientation {
                Orientation::Sink => (u, v),
                Orientation::Source => (v, u),
            };
            if parents[child - 1] != 0 {
                return Err(Error::InvalidTree(format!("vertex {child} has two parents")));
            }
            parents[child - 1] = parent;
        }
        let roots: Vec<usize> = (1..=n).filter(|&v| parents[v - 1] == 0).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidTree(format!("expected one root, found {}", roots.len())));
        }
        Self::from_parents(roots[0], parents, orientation)
    }

    /// One-line text form: `root; p(1) p(2) ... p(n)` with `0` for the root.
    pub fn to_line(&self) -> String {
        let parents: Vec<String> = self.parent.iter().map(usize::to_string).collect();
        format!("{}; {}", self.root, parents.join(" "))
    }

    /// Parses [`RootedTree::to_line`] output; `#` comments and blank lines are skipped.
    pub fn parse(text: &str, orientation: Orientation) -> Result<Self> {
        let (idx, line) = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l)))
            .find(|(_, l)| !l.is_empty())
            .ok_or(Error::Parse { line: 0, message: "empty tree description".into() })?;
        let err = |message: String| Error::Parse { line: idx, message };
        let (root, rest) = line.split_once(';').ok_or_else(|| err("expected `root; parents`".into()))?;
        let root: usize = root.trim().parse().map_err(|e| err(format!("bad root: {e}")))?;
        let parents = rest
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| err(format!("bad parent `{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parents(root, parents, orientation)
    }
}

/// A function `f: [n] -> [n]`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MappingFn {
    image: Vec<usize>,
}

impl MappingFn {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        if let Some(&bad) = image.iter().find(|&&x| x == 0 || x > n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        Ok(MappingFn { image })
    }

    pub fn vertex_count(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `M_f`: edges `i -> f(i)`.
    pub fn mapping_digraph(&self) -> Digraph {
        Digraph::new(self.vertex_count(), (1..=self.vertex_count()).map(|i| (i, self.apply(i))))
            .expect("one edge per vertex")
    }

    /// `M̃_f`: edges `f(i) -> i`.
    pub fn inverse_mapping_digraph(&self) -> Digraph {
        Digraph::new(self.vertex_count(), (1..=self.vertex_count()).map(|i| (self.apply(i), i)))
            .expect("one edge per vertex")
    }

    /// Reads `f` off an inverse mapping digraph: `f(i)` is the unique in-neighbour of `i`.
    pub fn from_inverse_digraph(d: &Digraph) -> Result<Self> {
        let n = d.vertex_count();
        let mut image = vec![0; n];
        for (u, v) in d.edges() {
            if image[v - 1] != 0 {
                return Err(Error::NotInverseMapping(format!("vertex {v} has in-degree > 1")));
            }
            image[v - 1] = u;
        }
        if let Some(v) = image.iter().position(|&x| x == 0) {
            return Err(Error::NotInverseMapping(format!("vertex {} has in-degree 0", v + 1)));
        }
        Self::new(image)
    }

    /// Cycles of the functional graph. Each cycle is listed from its smallest
    /// vertex following `f`; cycles are sorted by that vertex.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        // 0 = unvisited, 1 = on current trail, 2 = finished
        let mut state = vec![0u8; n + 1];
        let mut cycles = Vec::new();
        for start in 1..=n {
            if state[start] != 0 {
                continue;
            }
            let mut trail = Vec::new();
            let mut cur = start;
            while state[cur] == 0 {
                state[cur] = 1;
                trail.push(cur);
                cur = self.apply(cur);
            }
            if state[cur] == 1 {
                let pos = trail.iter().position(|&x| x == cur).unwrap();
                let mut cycle = trail[pos..].to_vec();
                let min_pos = cycle.iter().enumerate().min_by_key(|(_, &v)| v).unwrap().0;
                cycle.rotate_left(min_pos);
                cycles.push(cycle);
            }
            for v in trail {
                state[v] = 2;
            }
        }
        cycles.sort();
        cycles
    }

    /// Component label (smallest cycle vertex) of every vertex, indexed by `v - 1`.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut label = vec![0; n + 1];
        for cycle in self.cycles() {
            for &v in &cycle {
                label[v] = cycle[0];
            }
        }
        for v in 1..=n {
            let mut path = Vec::new();
            let mut cur = v;
            while label[cur] == 0 {
                path.push(cur);
                cur = self.apply(cur);
            }
            let l = label[cur];
            for x in path {
                label[x] = l;
            }
        }
        label[1..].to_vec()
    }

    pub fn to_line(&self) -> String {
        self.image.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
    }

    /// Parses the image list `f(1) f(2) ... f(n)`; comments and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut image = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            for tok in strip_comment(raw).split_whitespace() {
                image.push(tok.parse::<usize>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("bad image `{tok}`: {e}"),
                })?);
            }
        }
        Self::new(image)
    }
}

/// Cayley's count `n^(n-1)` of rooted labelled trees.
pub fn rooted_tree_count(n: usize) -> u64 {
    (n as u64).pow(n.saturating_sub(1) as u32)
}

pub fn mapping_count(n: usize) -> u64 {
    (n as u64).pow(n as u32)
}

/// Decodes a Prüfer sequence (entries 1-based) into the edge list of a
/// labelled tree on `[n]`, `n = len + 2`.
pub fn prufer_decode(code: &[usize]) -> Vec<(usize, usize)> {
    let n = code.len() + 2;
    let mut degree = vec![1usize; n + 1];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (1..=n).find(|&v| degree[v] == 1).expect("a leaf always exists");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn root_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n + 1];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![0; n];
    let mut seen = vec![false; n + 1];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w - 1] = u;
                stack.push(w);
            }
        }
    }
    parent
}

/// The `index`-th rooted tree on `[n]`, for `index < n^(n-1)`. The index is
/// `prufer_rank * n + (root - 1)`.
pub fn rooted_tree_by_index(n: usize, index: u64, orientation: Orientation) -> RootedTree {
    assert!(n >= 1 && index < rooted_tree_count(n), "tree index out of range");
    let root = (index % n as u64) as usize + 1;
    if n == 1 {
        return RootedTree { root: 1, parent: vec![0], orientation };
    }
    let mut rank = index / n as u64;
    let mut code = vec![0; n - 2];
    for slot in code.iter_mut().rev() {
        *slot = (rank % n as u64) as usize + 1;
        rank /= n as u64;
    }
    let edges = prufer_decode(&code);
    RootedTree { root, parent: root_edges(n, &edges, root), orientation }
}

/// All `n^(n-1)` rooted labelled trees on `[n]`, each exactly once.
pub fn all_rooted_trees(n: usize, orientation: Orientation) -> Result<impl Iterator<Item = RootedTree> + Clone> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    Ok((0..rooted_tree_count(n)).map(move |i| rooted_tree_by_index(n, i, orientation)))
}

/// The `index`-th function `[n] -> [n]` in lexicographic order of image lists.
pub fn mapping_by_index(n: usize, index: u64) -> MappingFn {
    assert!(n >= 1 && index < mapping_count(n), "mapping index out of range");
    let mut image = vec![0; n];
    let mut rest = index;
    for slot in image.iter_mut().rev() {
        *slot = (rest % n as u64) as usize + 1;
        rest /= n as u64;
    }
    MappingFn { image }
}

/// All `n^n` functions `[n] -> [n]`.
pub fn all_mappings(n: usize) -> Result<impl Iterator<Item = MappingFn> + Clone> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    Ok((0..mapping_count(n)).map(move |i| mapping_by_index(n, i)))
}

/// A path rooted at one end. As a digraph it is `1 -> 2 -> ... -> n` in
/// either orientation: the sink version is rooted at `n`, the source version at `1`.
pub fn path_tree(n: usize, orientation: Orientation) -> Result<RootedTree> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let (root, parents) = match orientation {
        Orientation::Sink => (n, (1..=n).map(|v| if v == n { 0 } else { v + 1 }).collect()),
        Orientation::Source => (1, (1..=n).map(|v| v - 1).collect()),
    };
    RootedTree::from_parents(root, parents, orientation)
}

/// Star rooted at its centre `1`.
pub fn star_tree(n: usize, orientation: Orientation) -> Result<RootedTree> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let parents = (1..=n).map(|v| if v == 1 { 0 } else { 1 }).collect();
    RootedTree::from_parents(1, parents, orientation)
}

/// `f(i) = i + 1`, `f(n) = 1`.
pub fn cycle_mapping(n: usize) -> Result<MappingFn> {
    MappingFn::new((1..=n).map(|i| i % n + 1).collect())
}

pub fn identity_mapping(n: usize) -> Result<MappingFn> {
    MappingFn::new((1..=n).collect())
}

/// `a (a-1) ... (a-k+1)`; zero once a factor hits zero.
pub fn falling_factorial(a: u64, k: u64) -> BigUint {
    if k > a {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (a - i))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    falling_factorial(n, k) / falling_factorial(k, k)
}

/// Number of classical `(n, m)`-parking functions, `(n-m+1)(n+1)^(m-1)`.
/// Equal to `1` for `m = 0` and `0` for `m > n`.
pub fn classical_count(n: u64, m: u64) -> BigUint {
    if m > n {
        return BigUint::zero();
    }
    if m == 0 {
        return BigUint::one();
    }
    BigUint::from(n - m + 1) * BigUint::from(n + 1).pow((m - 1) as u32)
}

/// Parking functions on the source star with `n` vertices:
/// `sum_i C(m, i) (n-1)^(m-i falling)`.
pub fn source_star_count(n: u64, m: u64) -> BigUint {
    if n == 0 {
        return if m == 0 { BigUint::one() } else { BigUint::zero() };
    }
    (0..=m)
        .map(|i| binomial(m, i) * falling_factorial(n - 1, m - i))
        .sum()
}

/// Lower bound for sink trees: `n^(m falling) + C(m, 2) (n-1)^(m-1 falling)`.
pub fn sink_star_lower(n: u64, m: u64) -> BigUint {
    let tail = if m == 0 || n == 0 {
        BigUint::zero()
    } else {
        binomial(m, 2) * falling_factorial(n - 1, m - 1)
    };
    falling_factorial(n, m) + tail
}
