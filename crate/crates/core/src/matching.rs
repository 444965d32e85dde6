//! Hopcroft–Karp maximum matching between drivers (left) and vertices
//! (right). Driver `i` may be matched to any vertex in `rows[i]`.

use std::collections::VecDeque;

use crate::graph::ReachSet;

const UNMATCHED: usize = usize::MAX;
const INF: u32 = u32::MAX;

/// Scratch space for repeated matchings; reusing one per worker avoids
/// allocating in the counting sweeps.
#[derive(Debug, Default, Clone)]
pub struct Matcher {
    driver_to_vertex: Vec<usize>,
    vertex_to_driver: Vec<usize>,
    dist: Vec<u32>,
    queue: VecDeque<usize>,
}

impl Matcher {
    pub fn new() -> Self {
        Self::default()
    }

    /// Size of a maximum matching. Vertices are the 1-based members of each row.
    pub fn solve(&mut self, rows: &[&ReachSet], n: usize) -> usize {
        let m = rows.len();
        self.driver_to_vertex.clear();
        self.driver_to_vertex.resize(m, UNMATCHED);
        self.vertex_to_driver.clear();
        self.vertex_to_driver.resize(n + 1, UNMATCHED);
        self.dist.clear();
        self.dist.resize(m, INF);

        let mut size = 0;
        while self.layer(rows) {
            for d in 0..m {
                if self.driver_to_vertex[d] == UNMATCHED && self.augment(rows, d) {
                    size += 1;
                }
            }
        }
        size
    }

    /// Whether every driver can be matched.
    pub fn saturates(&mut self, rows: &[&ReachSet], n: usize) -> bool {
        rows.len() <= n && self.solve(rows, n) == rows.len()
    }

    fn layer(&mut self, rows: &[&ReachSet]) -> bool {
        self.queue.clear();
        for d in 0..rows.len() {
            if self.driver_to_vertex[d] == UNMATCHED {
                self.dist[d] = 0;
                self.queue.push_back(d);
            } else {
                self.dist[d] = INF;
            }
        }
        let mut found = false;
        while let Some(d) = self.queue.pop_front() {
            for v in rows[d].iter() {
                let next = self.vertex_to_driver[v];
                if next == UNMATCHED {
                    found = true;
                } else if self.dist[next] == INF {
                    self.dist[next] = self.dist[d] + 1;
                    self.queue.push_back(next);
                }
            }
        }
        found
    }

    fn augment(&mut self, rows: &[&ReachSet], d: usize) -> bool {
        for v in rows[d].iter() {
            let next = self.vertex_to_driver[v];
            let ok = next == UNMATCHED
                || (self.dist[next] == self.dist[d] + 1 && self.augment(rows, next));
            if ok {
                self.driver_to_vertex[d] = v;
                self.vertex_to_driver[v] = d;
                return true;
            }
        }
        self.dist[d] = INF;
        false
    }

    /// Matched vertex of each driver from the last `solve` call.
    pub fn assignment(&self) -> Vec<Option<usize>> {
        self.driver_to_vertex
            .iter()
            .map(|&v| (v != UNMATCHED).then_some(v))
            .collect()
    }

    /// Drivers reachable from an unmatched driver by alternating paths, after
    /// a `solve` that left `start` unmatched. Their joint neighbourhood is
    /// fully matched back into the set, so it is one smaller than the set.
    pub fn alternating_drivers(&self, rows: &[&ReachSet], start: usize) -> Vec<usize> {
        let mut seen = vec![false; rows.len()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(d) = stack.pop() {
            for v in rows[d].iter() {
                let next = self.vertex_to_driver[v];
                if next != UNMATCHED && !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        (0..rows.len()).filter(|&d| seen[d]).collect()
    }
}
