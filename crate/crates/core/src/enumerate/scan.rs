use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::Serialize;

use super::{Counter, Family, SweepOptions};
use crate::error::Result;
use crate::families::{rooted_tree_by_index, Orientation, RootedTree};

/// One unlabelled tree shape compared in both orientations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub m: usize,
    /// Nested-parentheses code of the rooted shape.
    pub shape: String,
    /// Labelled trees with this shape.
    pub labelled: u64,
    pub sink: u64,
    pub source: u64,
    /// Sign of `sink - source`.
    pub sign: i8,
    pub path: bool,
    pub star: bool,
}

/// Canonical code: a vertex is `(` followed by its children's codes in
/// sorted order, then `)`.
fn shape_code(tree: &RootedTree) -> String {
    fn code(tree: &RootedTree, v: usize) -> String {
        let mut parts: Vec<String> = tree.children(v).into_iter().map(|c| code(tree, c)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    code(tree, tree.root())
}

/// Compares `P(T, m)` with `P(T̃, m)` on every rooted tree shape. Purely
/// descriptive: nothing is asserted about the sign.
pub fn open_question_scan(
    ns: RangeInclusive<usize>,
    ms: Option<RangeInclusive<usize>>,
    options: &SweepOptions,
) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for n in ns {
        options.check_cap(n)?;
        let mut shapes: BTreeMap<String, (RootedTree, u64)> = BTreeMap::new();
        for i in 0..Family::SinkTrees.size(n) {
            let tree = rooted_tree_by_index(n, i, Orientation::Sink);
            shapes.entry(shape_code(&tree)).or_insert((tree, 0)).1 += 1;
        }
        let mut counter = Counter::new();
        for m in (0..=n).filter(|m| ms.as_ref().is_none_or(|r| r.contains(m))) {
            for (shape, (tree, labelled)) in &shapes {
                let sink = counter.count(&tree.as_digraph(), m);
                let source = counter.count(&tree.reversed().as_digraph(), m);
                rows.push(ScanRow {
                    n,
                    m,
                    shape: shape.clone(),
                    labelled: *labelled,
                    sink,
                    source,
                    sign: sink.cmp(&source) as i8,
                    path: tree.is_path(),
                    star: tree.children(tree.root()).len() + 1 == n && n > 2,
                });
            }
        }
    }
    Ok(rows)
}
