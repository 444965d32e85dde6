use serde::Serialize;

use crate::check::{is_parking_function, is_source_tree_pf, PreferenceSequence};
use crate::error::{Error, Result};
use crate::families::{MappingFn, Orientation, RootedTree};
use crate::graph::Digraph;

/// A parking function on a source tree together with a marked vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MarkedSourceTreePF {
    pub tree: RootedTree,
    pub seq: PreferenceSequence,
    pub mark: usize,
}

/// First position (1-based) at which each vertex appears in a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    first: Vec<Option<usize>>,
}

impl RankTable {
    pub fn new(s: &PreferenceSequence, n: usize) -> Self {
        let mut first = vec![None; n];
        for (i, &v) in s.as_slice().iter().enumerate() {
            first[v - 1].get_or_insert(i + 1);
        }
        RankTable { first }
    }

    pub fn rank(&self, v: usize) -> Option<usize> {
        self.first[v - 1]
    }

    fn require(&self, v: usize) -> Result<usize> {
        self.rank(v)
            .ok_or_else(|| Error::Invariant(format!("vertex {v} has no rank but no driver prefers it")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiOutput {
    pub mapping: MappingFn,
    pub seq: PreferenceSequence,
    /// Vertices on the root-to-mark path whose subtree is exactly filled.
    pub a: Vec<usize>,
    /// Members of `a` ranked after all their ancestors in `a`, root first.
    pub b: Vec<usize>,
}

/// Cycle edges of an inverse mapping digraph whose removal keeps `s` parking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleDeletions {
    pub cycle: Vec<usize>,
    pub deletable: Vec<(usize, usize)>,
}

/// For every cycle of the inverse mapping digraph `d`, the cycle edges
/// `(f(b), b)` that can be deleted with `s` still a parking function.
pub fn deletable_cycle_edges(d: &Digraph, s: &PreferenceSequence) -> Result<Vec<CycleDeletions>> {
    let f = MappingFn::from_inverse_digraph(d)?;
    if !is_parking_function(d, s)? {
        return Err(Error::NotParkingFunction);
    }
    f.cycles()
        .into_iter()
        .map(|cycle| {
            let mut deletable = Vec::new();
            for &b in &cycle {
                let e = (f.apply(b), b);
                if is_parking_function(&d.without_edge(e.0, e.1), s)? {
                    deletable.push(e);
                }
            }
            Ok(CycleDeletions { cycle, deletable })
        })
        .collect()
}

fn check_full_length(n: usize, s: &PreferenceSequence) -> Result<()> {
    if s.len() != n {
        return Err(Error::SequenceLength { expected: n, got: s.len() });
    }
    s.validate(n)
}

/// Turns a marked source-tree parking function into a parking function on an
/// inverse mapping digraph with the same sequence.
pub fn psi(x: &MarkedSourceTreePF) -> Result<PsiOutput> {
    let tree = &x.tree;
    if tree.orientation() != Orientation::Source {
        return Err(Error::OrientationMismatch { expected: Orientation::Source });
    }
    let n = tree.vertex_count();
    check_full_length(n, &x.seq)?;
    if x.mark == 0 || x.mark > n {
        return Err(Error::VertexOutOfRange { vertex: x.mark, n });
    }
    if !is_source_tree_pf(tree, &x.seq)? {
        return Err(Error::NotParkingFunction);
    }

    let sizes = tree.subtree_sizes();
    let mut demand = x.seq.counts(n);
    for &v in tree.top_down_order().iter().rev() {
        if let Some(p) = tree.parent(v) {
            demand[p - 1] += demand[v - 1];
        }
    }
    let ranks = RankTable::new(&x.seq, n);
    let a: Vec<usize> = tree
        .path_from_root(x.mark)
        .into_iter()
        .filter(|&v| demand[v - 1] == sizes[v - 1])
        .collect();
    let mut b = Vec::new();
    let mut best = 0;
    for &v in &a {
        let r = ranks.require(v)?;
        if r > best {
            b.push(v);
            best = r;
        }
    }

    let mut image: Vec<usize> = (1..=n).map(|v| tree.parent(v).unwrap_or(0)).collect();
    for j in 1..b.len() {
        image[b[j - 1] - 1] = tree.parent(b[j]).expect("non-root path vertex");
    }
    image[b[b.len() - 1] - 1] = x.mark;
    Ok(PsiOutput { mapping: MappingFn::new(image)?, seq: x.seq.clone(), a, b })
}

/// Inverse of [`psi`]: in every cycle pick the deletable-edge head of
/// highest rank, chain those heads by rank, and cut the last edge.
pub fn psi_inverse(f: &MappingFn, s: &PreferenceSequence) -> Result<MarkedSourceTreePF> {
    let n = f.vertex_count();
    check_full_length(n, s)?;
    let d = f.inverse_mapping_digraph();
    let ranks = RankTable::new(s, n);
    let mut heads = Vec::new();
    for c in deletable_cycle_edges(&d, s)? {
        let mut best: Option<(usize, usize)> = None;
        for &(_, b) in &c.deletable {
            let r = ranks.require(b)?;
            if best.is_none_or(|(br, _)| r > br) {
                best = Some((r, b));
            }
        }
        let (r, b) = best.ok_or_else(|| {
            Error::Invariant(format!("cycle {:?} has no deletable edge", c.cycle))
        })?;
        heads.push((r, b));
    }
    heads.sort_unstable();
    let b: Vec<usize> = heads.into_iter().map(|(_, v)| v).collect();

    let mut parents: Vec<usize> = f.image().to_vec();
    for i in 0..b.len() - 1 {
        parents[b[i + 1] - 1] = f.apply(b[i]);
    }
    parents[b[0] - 1] = 0;
    let mark = f.apply(b[b.len() - 1]);
    let tree = RootedTree::from_parents(b[0], parents, Orientation::Source)
        .map_err(|e| Error::Invariant(format!("rewiring did not give a tree: {e}")))?;
    Ok(MarkedSourceTreePF { tree, seq: s.clone(), mark })
}
