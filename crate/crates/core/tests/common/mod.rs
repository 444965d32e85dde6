//! Independent reference implementations used by the integration tests.

#![allow(dead_code)]

use digraph_parking::{Digraph, PreferenceSequence};
use rand::rngs::StdRng;
use rand::Rng;

/// Runs the parking process literally, trying every choice of out-edge.
///
/// Driver `i` starts at `s_i`; while her vertex is occupied she moves along
/// any out-edge. Revisiting a vertex within one walk never opens new options,
/// so those branches are cut. Returns whether some run parks everyone.
pub fn process_parks(d: &Digraph, s: &[usize]) -> bool {
    let n = d.vertex_count();
    if s.len() > n {
        return false;
    }
    let mut occupied = vec![false; n + 1];
    drive(d, s, &mut occupied)
}

fn drive(d: &Digraph, s: &[usize], occupied: &mut [bool]) -> bool {
    let Some((&start, rest)) = s.split_first() else {
        return true;
    };
    let mut spots = Vec::new();
    let mut on_walk = vec![false; occupied.len()];
    walk(d, start, occupied, &mut on_walk, &mut spots);
    spots.sort_unstable();
    spots.dedup();
    for x in spots {
        occupied[x] = true;
        let ok = drive(d, rest, occupied);
        occupied[x] = false;
        if ok {
            return true;
        }
    }
    false
}

fn walk(d: &Digraph, v: usize, occupied: &[bool], on_walk: &mut [bool], spots: &mut Vec<usize>) {
    if !occupied[v] {
        spots.push(v);
        return;
    }
    on_walk[v] = true;
    for &w in d.successors(v) {
        if !on_walk[w] {
            walk(d, w, occupied, on_walk, spots);
        }
    }
    on_walk[v] = false;
}

/// A random digraph on `[n]` where every ordered pair, loops included, is an
/// edge with probability `p`.
pub fn random_digraph(rng: &mut StdRng, n: usize, p: f64) -> Digraph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in 1..=n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, edges).expect("edges are in range and distinct")
}

pub fn random_sequence(rng: &mut StdRng, n: usize, m: usize) -> PreferenceSequence {
    PreferenceSequence::new((0..m).map(|_| rng.gen_range(1..=n)).collect())
}
