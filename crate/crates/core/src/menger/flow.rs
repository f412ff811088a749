//! Dinic's algorithm on a small integer-capacity network.

use std::collections::VecDeque;

pub(crate) const INF: u32 = u32::MAX / 2;

#[derive(Clone, Copy)]
struct Edge {
    to: usize,
    cap: u32,
    flow: u32,
}

pub(crate) struct FlowNetwork {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            cursor: vec![0; nodes],
        }
    }

    /// Adds `u → v` and its residual twin; returns the forward edge id.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize, cap: u32) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to: v, cap, flow: 0 });
        self.edges.push(Edge { to: u, cap: 0, flow: 0 });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if self.level[v] < 0 && self.push_capacity(e) > 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    /// Remaining capacity of edge `e` in the residual graph.
    fn push_capacity(&self, e: usize) -> u32 {
        if e.is_multiple_of(2) {
            let edge = self.edges[e];
            edge.cap - edge.flow
        } else {
            self.edges[e - 1].flow
        }
    }

    fn push(&mut self, e: usize, amount: u32) {
        if e.is_multiple_of(2) {
            self.edges[e].flow += amount;
        } else {
            self.edges[e - 1].flow -= amount;
        }
    }

    fn dfs(&mut self, u: usize, t: usize, limit: u32) -> u32 {
        if u == t {
            return limit;
        }
        while self.cursor[u] < self.adj[u].len() {
            let e = self.adj[u][self.cursor[u]];
            let v = self.edges[e].to;
            let room = self.push_capacity(e);
            if room > 0 && self.level[v] == self.level[u] + 1 {
                let got = self.dfs(v, t, limit.min(room));
                if got > 0 {
                    self.push(e, got);
                    return got;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    /// Augments up to `bound` units from `s` to `t`; returns the total flow.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize, bound: u32) -> u32 {
        let mut total = 0;
        while total < bound && self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let got = self.dfs(s, t, bound - total);
                if got == 0 {
                    break;
                }
                total += got;
                if total >= bound {
                    break;
                }
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual graph.
    pub(crate) fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if !seen[v] && self.push_capacity(e) > 0 {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Forward edges out of `u` currently carrying flow, as `(edge id, head)`.
    pub(crate) fn flow_out(&self, u: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[u]
            .iter()
            .copied()
            .filter(move |&e| e % 2 == 0 && self.edges[e].flow > 0)
            .map(move |e| (e, self.edges[e].to))
    }

    pub(crate) fn take_unit(&mut self, e: usize) {
        self.edges[e].flow -= 1;
    }
}
