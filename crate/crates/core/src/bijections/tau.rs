use serde::Serialize;

use super::Permutation;
use crate::check::{is_source_tree_pf, simulate_deterministic, PreferenceSequence};
use crate::error::{Error, Result};
use crate::families::{Orientation, RootedTree};

/// One block of the leaf-path partition: vertices from `leaf` upwards,
/// skipping vertices taken by earlier blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafPath {
    pub leaf: usize,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauOutput {
    pub permutation: Permutation,
    pub seq: PreferenceSequence,
    pub tree: RootedTree,
    pub paths: Vec<LeafPath>,
}

/// Builds the leaf-path partition of every component, where `linked[c - 1]`
/// says that `c` and its parent lie in the same component.
///
/// Leaves are taken in increasing order. Each block grows upward from its
/// leaf, skipping vertices claimed by earlier blocks, and stops as soon as
/// exactly as many drivers prefer the block as it has vertices.
fn leaf_paths(tree: &RootedTree, linked: &[bool], counts: &[usize]) -> std::result::Result<Vec<LeafPath>, String> {
    let n = tree.vertex_count();
    let mut has_linked_child = vec![false; n];
    for c in 1..=n {
        if linked[c - 1] {
            has_linked_child[tree.parent(c).expect("linked vertices have parents") - 1] = true;
        }
    }
    let mut claimed = vec![false; n];
    let mut paths = Vec::new();
    for leaf in (1..=n).filter(|&v| linked[v - 1] && !has_linked_child[v - 1]) {
        let mut vertices = Vec::new();
        let mut demand = 0;
        let mut cur = leaf;
        loop {
            if !claimed[cur - 1] {
                vertices.push(cur);
                demand += counts[cur - 1];
                if demand == vertices.len() {
                    break;
                }
            }
            if !linked[cur - 1] {
                return Err(format!("the path from leaf {leaf} never balances"));
            }
            cur = tree.parent(cur).expect("linked vertices have parents");
        }
        for &v in &vertices {
            claimed[v - 1] = true;
        }
        paths.push(LeafPath { leaf, vertices });
    }
    for v in 1..=n {
        let in_component = linked[v - 1] || has_linked_child[v - 1];
        if in_component && !claimed[v - 1] {
            return Err(format!("vertex {v} is not covered by any leaf path"));
        }
    }
    Ok(paths)
}

fn reversal_permutation(n: usize, paths: &[LeafPath]) -> Permutation {
    let mut perm = Permutation::identity(n);
    for path in paths {
        let w = &path.vertices;
        for j in 0..w.len() / 2 {
            perm.swap(w[j], w[w.len() - 1 - j]);
        }
    }
    perm
}

fn check_length(tree: &RootedTree, s: &PreferenceSequence) -> Result<()> {
    let n = tree.vertex_count();
    if s.len() != n {
        return Err(Error::SequenceLength { expected: n, got: s.len() });
    }
    s.validate(n)
}

/// Maps an `(n, n)`-parking function on a sink tree to one on the reversed
/// (source) tree.
///
/// Drivers are parked deterministically and every edge used after a failed
/// attempt is highlighted. Within each highlighted component the leaf-path
/// partition is formed and each path is reversed; vertices outside any
/// highlighted edge are fixed.
pub fn tau(tree: &RootedTree, s: &PreferenceSequence) -> Result<TauOutput> {
    if tree.orientation() != Orientation::Sink {
        return Err(Error::OrientationMismatch { expected: Orientation::Sink });
    }
    check_length(tree, s)?;
    let n = tree.vertex_count();
    let run = simulate_deterministic(&tree.as_digraph(), s)?.ok_or(Error::NotParkingFunction)?;
    let linked: Vec<bool> = (1..=n)
        .map(|c| tree.parent(c).is_some_and(|p| run.highlighted.contains(&(c, p))))
        .collect();
    let paths = leaf_paths(tree, &linked, &s.counts(n)).map_err(Error::Invariant)?;
    let permutation = reversal_permutation(n, &paths);
    Ok(TauOutput {
        seq: permutation.apply_to_sequence(s),
        permutation,
        tree: tree.reversed(),
        paths,
    })
}

/// Inverse of [`tau`], starting from the source tree and the relabelled sequence.
///
/// An edge from `p` down to `c` belongs to a component exactly when fewer
/// drivers prefer the subtree below `c` than it has vertices. The same
/// leaf-path rule then recovers the partition. Inputs outside the image of
/// [`tau`] are rejected, which includes every result that `tau` does not
/// map back to the input.
pub fn tau_inverse(tree: &RootedTree, s: &PreferenceSequence) -> Result<TauOutput> {
    if tree.orientation() != Orientation::Source {
        return Err(Error::OrientationMismatch { expected: Orientation::Source });
    }
    check_length(tree, s)?;
    if !is_source_tree_pf(tree, s)? {
        return Err(Error::NotInImage("not a parking function on the source tree".into()));
    }
    let n = tree.vertex_count();
    let counts = s.counts(n);
    let mut demand = counts.clone();
    let sizes = tree.subtree_sizes();
    for &v in tree.top_down_order().iter().rev() {
        if let Some(p) = tree.parent(v) {
            demand[p - 1] += demand[v - 1];
        }
    }
    let linked: Vec<bool> = (1..=n)
        .map(|c| tree.parent(c).is_some() && demand[c - 1] < sizes[c - 1])
        .collect();
    let paths = leaf_paths(tree, &linked, &counts).map_err(Error::NotInImage)?;
    let permutation = reversal_permutation(n, &paths);
    let sink = tree.reversed();
    let original = permutation.apply_to_sequence(s);

    match tau(&sink, &original) {
        Ok(fwd) if fwd.seq == *s => Ok(TauOutput { permutation, seq: original, tree: sink, paths }),
        Ok(_) => Err(Error::NotInImage("recovered sequence does not map back".into())),
        Err(Error::NotParkingFunction) => {
            Err(Error::NotInImage("recovered sequence does not park on the sink tree".into()))
        }
        Err(e) => Err(e),
    }
}
