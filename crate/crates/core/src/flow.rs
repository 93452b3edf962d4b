//! Dinic's maximum flow on small integer networks.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: usize,
    rev: usize,
}

#[derive(Debug, Clone)]
pub struct Dinic {
    graph: Vec<Vec<Arc>>,
    level: Vec<usize>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(nodes: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds `from -> to` and returns a handle for [`Dinic::flow_on`].
    pub fn add_edge(&mut self, from: usize, to: usize, cap: usize) -> (usize, usize) {
        let fwd = self.graph[from].len();
        let back = self.graph[to].len() + usize::from(from == to);
        self.graph[from].push(Arc { to, cap, rev: back });
        self.graph[to].push(Arc {
            to: from,
            cap: 0,
            rev: fwd,
        });
        (from, fwd)
    }

    /// Flow currently routed through the edge identified by `handle`.
    pub fn flow_on(&self, handle: (usize, usize)) -> usize {
        let arc = &self.graph[handle.0][handle.1];
        self.graph[arc.to][arc.rev].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = usize::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for arc in &self.graph[v] {
                if arc.cap > 0 && self.level[arc.to] == usize::MAX {
                    self.level[arc.to] = self.level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] != usize::MAX
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: usize) -> usize {
        if v == t {
            return pushed;
        }
        while self.iter[v] < self.graph[v].len() {
            let i = self.iter[v];
            let Arc { to, cap, rev } = self.graph[v][i];
            if cap > 0 && self.level[to] == self.level[v] + 1 {
                let d = self.dfs(to, t, pushed.min(cap));
                if d > 0 {
                    self.graph[v][i].cap -= d;
                    self.graph[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, usize::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        let mut d = Dinic::new(6);
        d.add_edge(0, 1, 10);
        d.add_edge(0, 2, 10);
        d.add_edge(1, 3, 4);
        d.add_edge(1, 4, 8);
        d.add_edge(2, 4, 9);
        d.add_edge(3, 5, 10);
        d.add_edge(4, 3, 6);
        d.add_edge(4, 5, 10);
        assert_eq!(d.max_flow(0, 5), 19);
    }

    #[test]
    fn disconnected_and_flow_readback() {
        let mut d = Dinic::new(4);
        d.add_edge(0, 1, 10);
        d.add_edge(2, 3, 5);
        assert_eq!(d.max_flow(0, 3), 0);

        let mut d = Dinic::new(4);
        let a = d.add_edge(0, 1, 3);
        let b = d.add_edge(1, 3, 2);
        d.add_edge(0, 2, 1);
        d.add_edge(2, 3, 5);
        assert_eq!(d.max_flow(0, 3), 3);
        assert_eq!(d.flow_on(a), 2);
        assert_eq!(d.flow_on(b), 2);
    }
}
