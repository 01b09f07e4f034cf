//! Integral maximum flow (Dinic). Arcs are explored in insertion order, so
//! the resulting flow is a deterministic function of the construction order.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i64,
}

#[derive(Clone, Debug, Default)]
pub struct MaxFlow {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    initial: Vec<i64>,
}

impl MaxFlow {
    pub fn new(nodes: usize) -> Self {
        MaxFlow {
            adj: vec![Vec::new(); nodes],
            arcs: Vec::new(),
            initial: Vec::new(),
        }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds `from -> to` with capacity `cap`; returns the arc id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        assert!(cap >= 0, "negative capacity");
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.initial.push(cap);
        self.initial.push(0);
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently carried by arc `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.initial[id] - self.arcs[id].cap
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<i32>> {
        let mut level = vec![-1i32; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let a = &self.arcs[e];
                if a.cap > 0 && level[a.to] < 0 {
                    level[a.to] = level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        (level[t] >= 0).then_some(level)
    }

    /// Pushes a maximum flow from `s` to `t` and returns its value.
    pub fn run(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0i64;
        while let Some(mut level) = self.levels(s, t) {
            let mut next = vec![0usize; self.adj.len()];
            let mut path: Vec<usize> = Vec::new();
            let mut u = s;
            loop {
                if u == t {
                    let push = path.iter().map(|&e| self.arcs[e].cap).min().unwrap_or(0);
                    for &e in &path {
                        self.arcs[e].cap -= push;
                        self.arcs[e ^ 1].cap += push;
                    }
                    total += push;
                    // retreat to the tail of the first saturated arc
                    let cut = path.iter().position(|&e| self.arcs[e].cap == 0).unwrap_or(0);
                    path.truncate(cut);
                    u = path.last().map_or(s, |&e| self.arcs[e].to);
                    continue;
                }
                let mut advanced = false;
                while next[u] < self.adj[u].len() {
                    let e = self.adj[u][next[u]];
                    let a = &self.arcs[e];
                    if a.cap > 0 && level[a.to] == level[u] + 1 {
                        path.push(e);
                        u = a.to;
                        advanced = true;
                        break;
                    }
                    next[u] += 1;
                }
                if advanced {
                    continue;
                }
                // dead end
                level[u] = -1;
                match path.pop() {
                    Some(e) => {
                        u = self.arcs[e ^ 1].to;
                        next[u] += 1;
                    }
                    None => break,
                }
            }
        }
        total
    }
}
