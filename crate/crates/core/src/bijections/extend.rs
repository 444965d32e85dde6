use std::collections::{BTreeSet, VecDeque};

use super::psi::{psi, psi_inverse, MarkedSourceTreePF};
use crate::check::{is_parking_function, PreferenceSequence};
use crate::error::{Error, Result};
use crate::families::{MappingFn, Orientation};
use crate::graph::{Digraph, ReachSet};
use crate::matching::Matcher;

/// Parks the drivers of `s` one at a time. Each driver takes, among the free
/// spots that still let every later driver park, the one reachable through
/// occupied vertices using the fewest `costly` edges, breaking ties by label.
/// Returns `s` followed by the spots left free, in increasing order.
fn extend_with_costs(d: &Digraph, costly: &BTreeSet<(usize, usize)>, s: &PreferenceSequence) -> Result<PreferenceSequence> {
    let n = d.vertex_count();
    s.validate(n)?;
    if !is_parking_function(d, s)? {
        return Err(Error::NotParkingFunction);
    }
    let closure = d.closure();
    let prefs = s.as_slice();
    let mut occupied = ReachSet::empty(n);
    let mut matcher = Matcher::new();
    let mut dist = vec![usize::MAX; n + 1];
    let mut deque = VecDeque::new();

    for (i, &start) in prefs.iter().enumerate() {
        dist.fill(usize::MAX);
        dist[start] = 0;
        deque.clear();
        deque.push_back(start);
        let mut candidates = Vec::new();
        while let Some(y) = deque.pop_front() {
            if !occupied.contains(y) {
                continue;
            }
            for &z in d.successors(y) {
                let w = usize::from(costly.contains(&(y, z)));
                let nd = dist[y] + w;
                if nd < dist[z] {
                    dist[z] = nd;
                    if w == 0 {
                        deque.push_front(z);
                    } else {
                        deque.push_back(z);
                    }
                }
            }
        }
        for x in 1..=n {
            if dist[x] != usize::MAX && !occupied.contains(x) {
                candidates.push((dist[x], x));
            }
        }
        candidates.sort_unstable();

        let mut chosen = None;
        for &(_, x) in &candidates {
            occupied.insert(x);
            let rest: Vec<ReachSet> = prefs[i + 1..]
                .iter()
                .map(|&v| closure[v - 1].difference(&occupied))
                .collect();
            let rows: Vec<&ReachSet> = rest.iter().collect();
            if matcher.saturates(&rows, n) {
                chosen = Some(x);
                break;
            }
            occupied.remove(x);
        }
        if chosen.is_none() {
            return Err(Error::Invariant(format!("driver {} has nowhere feasible to park", i + 1)));
        }
    }

    let mut out = prefs.to_vec();
    out.extend((1..=n).filter(|&v| !occupied.contains(v)));
    Ok(PreferenceSequence::new(out))
}

/// Extends a source-tree parking function of length `m` to length `n`,
/// avoiding edges on the path from the root to `mark` where possible.
pub fn extend_sequence(tree: &crate::families::RootedTree, s: &PreferenceSequence, mark: usize) -> Result<PreferenceSequence> {
    if tree.orientation() != Orientation::Source {
        return Err(Error::OrientationMismatch { expected: Orientation::Source });
    }
    let n = tree.vertex_count();
    if mark == 0 || mark > n {
        return Err(Error::VertexOutOfRange { vertex: mark, n });
    }
    let path = tree.path_from_root(mark);
    let costly = path.windows(2).map(|w| (w[0], w[1])).collect();
    extend_with_costs(&tree.as_digraph(), &costly, s)
}

/// The same extension on an inverse mapping digraph, avoiding cycle edges.
pub fn extend_sequence_on_mapping(f: &MappingFn, s: &PreferenceSequence) -> Result<PreferenceSequence> {
    let costly = f
        .cycles()
        .into_iter()
        .flatten()
        .map(|b| (f.apply(b), b))
        .collect();
    extend_with_costs(&f.inverse_mapping_digraph(), &costly, s)
}

fn check_short(n: usize, s: &PreferenceSequence) -> Result<()> {
    if s.len() > n {
        return Err(Error::SequenceLength { expected: n, got: s.len() });
    }
    Ok(())
}

/// [`psi`] for sequences of length `m <= n`: extend, then rewire.
pub fn psi_nm(x: &MarkedSourceTreePF) -> Result<MappingFn> {
    check_short(x.tree.vertex_count(), &x.seq)?;
    let full = extend_sequence(&x.tree, &x.seq, x.mark)?;
    let out = psi(&MarkedSourceTreePF { tree: x.tree.clone(), seq: full, mark: x.mark })?;
    Ok(out.mapping)
}

/// Inverse of [`psi_nm`].
pub fn psi_nm_inverse(f: &MappingFn, s: &PreferenceSequence) -> Result<MarkedSourceTreePF> {
    check_short(f.vertex_count(), s)?;
    let full = extend_sequence_on_mapping(f, s)?;
    let back = psi_inverse(f, &full)?;
    if extend_sequence(&back.tree, s, back.mark)? != full {
        return Err(Error::Invariant("tree and mapping extensions disagree".into()));
    }
    Ok(MarkedSourceTreePF { tree: back.tree, seq: s.clone(), mark: back.mark })
}
