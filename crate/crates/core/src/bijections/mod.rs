//! Bijective constructions between families of parking functions.
//!
//! - [`tau`] / [`tau_inverse`]: relabel a parking function on a sink tree
//!   into one on the same tree with every edge reversed, by flipping driver
//!   preferences along leaf paths.
//! - [`psi`] / [`psi_inverse`]: turn a source-tree parking function with a
//!   marked vertex into a parking function on an inverse mapping digraph by
//!   rewiring edges on the root-to-mark path that no driver needs.
//! - [`psi_nm`] / [`psi_nm_inverse`]: the same for fewer drivers than
//!   vertices, by first extending the sequence canonically.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::check::PreferenceSequence;
use crate::error::{Error, Result};

mod extend;
mod psi;
mod tau;

pub use extend::{extend_sequence, extend_sequence_on_mapping, psi_nm, psi_nm_inverse};
pub use psi::{deletable_cycle_edges, psi, psi_inverse, CycleDeletions, MarkedSourceTreePF, PsiOutput, RankTable};
pub use tau::{tau, tau_inverse, LeafPath, TauOutput};

/// A permutation of `[n]` stored in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Invariant(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub(crate) fn swap(&mut self, a: usize, b: usize) {
        self.0.swap(a - 1, b - 1);
    }

    pub fn is_involution(&self) -> bool {
        (1..=self.len()).all(|v| self.apply(self.apply(v)) == v)
    }

    pub fn apply_to_sequence(&self, s: &PreferenceSequence) -> PreferenceSequence {
        PreferenceSequence::new(s.as_slice().iter().map(|&v| self.apply(v)).collect())
    }

    /// Non-trivial cycles, each starting at its smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len() + 1];
        let mut out = Vec::new();
        for start in 1..=self.len() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.apply(cur);
            }
            out.push(cycle);
        }
        out
    }
}

/// Cycle notation such as `(15)(23)(46)`. Entries are space-separated when
/// some label has more than one digit; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        let sep = if self.len() >= 10 { " " } else { "" };
        for c in cycles {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(sep))?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Permutation", 2)?;
        st.serialize_field("cycles", &self.to_string())?;
        st.serialize_field("one_line", &self.0)?;
        st.end()
    }
}
