//! Dinic max-flow over integer or floating capacities.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

pub(crate) trait Capacity: Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> {
    const ZERO: Self;
    const INFINITE: Self;
    fn is_residual(self) -> bool;
    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Capacity for i64 {
    const ZERO: Self = 0;
    const INFINITE: Self = i64::MAX / 4;
    fn is_residual(self) -> bool {
        self > 0
    }
}

impl Capacity for f64 {
    const ZERO: Self = 0.0;
    const INFINITE: Self = f64::INFINITY;
    fn is_residual(self) -> bool {
        self > 1e-12
    }
}

#[derive(Debug, Clone)]
struct Arc<C> {
    to: usize,
    cap: C,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork<C> {
    arcs: Vec<Arc<C>>,
    adjacency: Vec<Vec<usize>>,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adjacency: vec![Vec::new(); nodes],
        }
    }

    /// Adds `from → to` with capacity `cap`; returns the arc id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: C) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: C::ZERO });
        self.adjacency[from].push(id);
        self.adjacency[to].push(id + 1);
        id
    }

    /// Flow currently routed through arc `id`.
    pub fn flow(&self, id: usize) -> C {
        // the reverse residual equals the flow, also on uncapacitated arcs
        self.arcs[id ^ 1].cap
    }

    fn levels(&self, source: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.adjacency.len()];
        level[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adjacency[u] {
                let arc = &self.arcs[a];
                if arc.cap.is_residual() && level[arc.to].is_none() {
                    level[arc.to] = Some(level[u].unwrap() + 1);
                    queue.push_back(arc.to);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, sink: usize, limit: C, level: &[Option<usize>], next: &mut [usize]) -> C {
        if u == sink {
            return limit;
        }
        while next[u] < self.adjacency[u].len() {
            let a = self.adjacency[u][next[u]];
            let Arc { to, cap } = self.arcs[a];
            if cap.is_residual() && level[to] == level[u].map(|l| l + 1) {
                let pushed = self.augment(to, sink, limit.min(cap), level, next);
                if pushed.is_residual() {
                    self.arcs[a].cap = self.arcs[a].cap - pushed;
                    self.arcs[a ^ 1].cap = self.arcs[a ^ 1].cap + pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        C::ZERO
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> C {
        let mut total = C::ZERO;
        loop {
            let level = self.levels(source);
            if level[sink].is_none() {
                return total;
            }
            let mut next = vec![0; self.adjacency.len()];
            loop {
                let pushed = self.augment(source, sink, C::INFINITE, &level, &mut next);
                if !pushed.is_residual() {
                    break;
                }
                total = total + pushed;
            }
        }
    }

    /// Nodes reachable from `source` in the residual network (source side of a minimum cut).
    pub fn source_side(&self, source: usize) -> Vec<bool> {
        self.levels(source).iter().map(Option::is_some).collect()
    }
}
