//! Shrinking problems as bipartite flows: set `i` must keep `dᵢ` of its cells,
//! each cell goes to at most one set.

use std::collections::VecDeque;

const FREE: u32 = u32::MAX;

/// Cells set `i` must keep for the family to be `ε`-disjoint.
pub(crate) fn demand(size: usize, epsilon: f64) -> usize {
    if epsilon >= 1.0 {
        return 0;
    }
    ((1.0 - epsilon) * size as f64 - 1e-9).ceil().max(0.0) as usize
}

struct Edge {
    to: usize,
    cap: u32,
}

/// Dinic's algorithm on an adjacency-list graph with paired reverse edges.
struct Dinic {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Dinic {
        Dinic { edges: Vec::new(), adj: vec![Vec::new(); nodes], level: vec![0; nodes], next: vec![0; nodes] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u32) -> usize {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0 });
        self.edges.len() - 2
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if self.edges[e].cap > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: u32) -> u32 {
        if u == t {
            return pushed;
        }
        while self.next[u] < self.adj[u].len() {
            let e = self.adj[u][self.next[u]];
            let v = self.edges[e].to;
            if self.edges[e].cap > 0 && self.level[v] == self.level[u] + 1 {
                let got = self.dfs(v, t, pushed.min(self.edges[e].cap));
                if got > 0 {
                    self.edges[e].cap -= got;
                    self.edges[e ^ 1].cap += got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut flow = 0u64;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|n| *n = 0);
            loop {
                let f = self.dfs(s, t, u32::MAX);
                if f == 0 {
                    break;
                }
                flow += u64::from(f);
            }
        }
        flow
    }
}

/// Exact shrinkings by max-flow, or `None` when the demands cannot all be met.
pub(crate) fn shrink_by_flow(universe: usize, family: &[Vec<u32>], demands: &[usize]) -> Option<Vec<Vec<u32>>> {
    let k = family.len();
    let (source, sink) = (k + universe, k + universe + 1);
    let mut g = Dinic::new(k + universe + 2);
    for (i, &d) in demands.iter().enumerate() {
        g.add_edge(source, i, d as u32);
    }
    let mut set_edges: Vec<Vec<(u32, usize)>> = vec![Vec::new(); k];
    for (i, cells) in family.iter().enumerate() {
        for &c in cells {
            let e = g.add_edge(i, k + c as usize, 1);
            set_edges[i].push((c, e));
        }
    }
    for c in 0..universe {
        g.add_edge(k + c, sink, 1);
    }
    let need: u64 = demands.iter().map(|&d| d as u64).sum();
    if g.max_flow(source, sink) < need {
        return None;
    }
    Some(
        set_edges
            .into_iter()
            .map(|edges| edges.into_iter().filter(|&(_, e)| g.edges[e].cap == 0).map(|(c, _)| c).collect())
            .collect(),
    )
}

/// First-fit shrinkings: each set keeps cells nobody earlier kept. Sound but incomplete.
pub(crate) fn shrink_first_fit(universe: usize, family: &[Vec<u32>], demands: &[usize]) -> Option<Vec<Vec<u32>>> {
    let mut taken = vec![false; universe];
    let mut out = Vec::with_capacity(family.len());
    for (cells, &d) in family.iter().zip(demands) {
        let kept: Vec<u32> = cells.iter().copied().filter(|&c| !taken[c as usize]).take(d).collect();
        if kept.len() < d {
            return None;
        }
        for &c in &kept {
            taken[c as usize] = true;
        }
        out.push(kept);
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Admission {
    Admitted,
    Rejected,
    WorkCapExceeded,
}

/// Maintains exact shrinkings of a growing family by augmenting paths.
///
/// Every admitted member holds exactly its demand, so a newcomer can only be
/// served by paths that start at it; admission is therefore exact.
pub(crate) struct IncrementalShrinker {
    epsilon: f64,
    owner: Vec<u32>,
    members: Vec<Vec<u32>>,
    demands: Vec<usize>,
    containing: Vec<Vec<u32>>,
    work_cap: u64,
    // Scratch reused across calls; an entry is live when it equals `stamp`.
    cell_mark: Vec<u32>,
    member_mark: Vec<u32>,
    parent: Vec<(u32, u32)>,
    stamp: u32,
}

impl IncrementalShrinker {
    pub(crate) fn new(universe: usize, epsilon: f64, work_cap: u64) -> IncrementalShrinker {
        IncrementalShrinker {
            epsilon,
            owner: vec![FREE; universe],
            members: Vec::new(),
            demands: Vec::new(),
            containing: vec![Vec::new(); universe],
            work_cap,
            cell_mark: vec![0; universe],
            member_mark: Vec::new(),
            parent: Vec::new(),
            stamp: 0,
        }
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.members.len()
    }

    pub(crate) fn try_admit(&mut self, cells: &[u32]) -> Admission {
        let id = self.members.len() as u32;
        let d = demand(cells.len(), self.epsilon);
        let free: Vec<u32> = cells.iter().copied().filter(|&c| self.owner[c as usize] == FREE).collect();
        if free.len() >= d {
            for &c in &free[..d] {
                self.owner[c as usize] = id;
            }
            self.register(cells, d);
            return Admission::Admitted;
        }
        if !self.hall_check(cells, d) {
            return Admission::Rejected;
        }
        self.members.push(cells.to_vec());
        self.demands.push(d);
        let mut undo: Vec<(u32, u32)> = Vec::new();
        for &c in &free {
            undo.push((c, FREE));
            self.owner[c as usize] = id;
        }
        let mut work = 0u64;
        let mut outcome = Admission::Admitted;
        for _ in free.len()..d {
            match self.augment(id, &mut undo, &mut work) {
                Some(true) => {}
                Some(false) => {
                    outcome = Admission::Rejected;
                    break;
                }
                None => {
                    outcome = Admission::WorkCapExceeded;
                    break;
                }
            }
        }
        if outcome != Admission::Admitted {
            for (c, prev) in undo.into_iter().rev() {
                self.owner[c as usize] = prev;
            }
            self.members.pop();
            self.demands.pop();
            return outcome;
        }
        self.members.pop();
        self.demands.pop();
        self.register(cells, d);
        outcome
    }

    fn register(&mut self, cells: &[u32], d: usize) {
        let id = self.members.len() as u32;
        for &c in cells {
            self.containing[c as usize].push(id);
        }
        self.members.push(cells.to_vec());
        self.demands.push(d);
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.cell_mark.fill(0);
            self.member_mark.fill(0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Hall's condition on the newcomer and the members it meets.
    fn hall_check(&mut self, cells: &[u32], d: usize) -> bool {
        let s = self.next_stamp();
        self.member_mark.resize(self.members.len(), 0);
        let mut distinct = 0usize;
        let mut need = d;
        for &c in cells {
            if self.cell_mark[c as usize] != s {
                self.cell_mark[c as usize] = s;
                distinct += 1;
            }
        }
        for &c in cells {
            for &t in &self.containing[c as usize] {
                if self.member_mark[t as usize] == s {
                    continue;
                }
                self.member_mark[t as usize] = s;
                need += self.demands[t as usize];
                for &x in &self.members[t as usize] {
                    if self.cell_mark[x as usize] != s {
                        self.cell_mark[x as usize] = s;
                        distinct += 1;
                    }
                }
            }
        }
        need <= distinct
    }

    /// One augmenting path from `start`; `None` when the work cap is hit.
    fn augment(&mut self, start: u32, undo: &mut Vec<(u32, u32)>, work: &mut u64) -> Option<bool> {
        let s = self.next_stamp();
        let n = self.members.len();
        self.member_mark.resize(n, 0);
        self.parent.resize(n, (FREE, FREE));
        self.member_mark[start as usize] = s;
        self.parent[start as usize] = (FREE, FREE);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &c in &self.members[u as usize] {
                *work += 1;
                if *work > self.work_cap {
                    return None;
                }
                let v = self.owner[c as usize];
                if v == u {
                    continue;
                }
                if v == FREE {
                    // u takes c; each member on the path hands its parent the cell that led to it.
                    let (mut member, mut cell) = (u, c);
                    loop {
                        undo.push((cell, self.owner[cell as usize]));
                        self.owner[cell as usize] = member;
                        match self.parent[member as usize] {
                            (FREE, _) => break,
                            (p, pc) => {
                                member = p;
                                cell = pc;
                            }
                        }
                    }
                    return Some(true);
                }
                if self.member_mark[v as usize] != s {
                    self.member_mark[v as usize] = s;
                    self.parent[v as usize] = (u, c);
                    queue.push_back(v);
                }
            }
        }
        Some(false)
    }

    /// The current shrinkings, one per admitted member.
    pub(crate) fn shrinkings(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.members.len()];
        for (c, &o) in self.owner.iter().enumerate() {
            if o != FREE {
                out[o as usize].push(c as u32);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(universe: usize, family: &[Vec<u32>], demands: &[usize]) -> bool {
        // Assign each cell to one of its sets or to nobody.
        fn go(c: usize, universe: usize, family: &[Vec<u32>], need: &mut [usize]) -> bool {
            if c == universe {
                return need.iter().all(|&n| n == 0);
            }
            if go(c + 1, universe, family, need) {
                return true;
            }
            for i in 0..family.len() {
                if need[i] > 0 && family[i].contains(&(c as u32)) {
                    need[i] -= 1;
                    let ok = go(c + 1, universe, family, need);
                    need[i] += 1;
                    if ok {
                        return true;
                    }
                }
            }
            false
        }
        go(0, universe, family, &mut demands.to_vec())
    }

    #[test]
    fn demand_rounding() {
        assert_eq!(demand(10, 0.4), 6);
        assert_eq!(demand(10, 0.1), 9);
        assert_eq!(demand(10, 0.0), 10);
        assert_eq!(demand(10, 1.5), 0);
        assert_eq!(demand(7, 0.5), 4);
    }

    #[test]
    fn identical_sets_need_room() {
        let s: Vec<u32> = (0..10).collect();
        let fam = vec![s.clone(), s];
        assert!(shrink_by_flow(10, &fam, &[6, 6]).is_none());
        assert!(shrink_by_flow(10, &fam, &[5, 5]).is_some());
    }

    #[test]
    fn flow_and_incremental_agree_with_brute_force() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for _ in 0..300 {
            let universe = 1 + next() % 8;
            let k = 1 + next() % 4;
            let family: Vec<Vec<u32>> = (0..k)
                .map(|_| (0..universe as u32).filter(|_| next() % 2 == 0).collect::<Vec<u32>>())
                .map(|v| if v.is_empty() { vec![0] } else { v })
                .collect();
            let eps = [0.0, 0.2, 0.5, 0.7][next() % 4];
            let demands: Vec<usize> = family.iter().map(|s| demand(s.len(), eps)).collect();
            let truth = brute_force(universe, &family, &demands);
            let flow = shrink_by_flow(universe, &family, &demands);
            assert_eq!(flow.is_some(), truth);
            let mut inc = IncrementalShrinker::new(universe, eps, u64::MAX);
            let all = family.iter().all(|s| inc.try_admit(s) == Admission::Admitted);
            if truth {
                assert!(all);
            }
            if let Some(sh) = flow {
                let mut used = vec![false; universe];
                for (s, (kept, &d)) in family.iter().zip(sh.iter().zip(&demands)) {
                    assert!(kept.len() >= d);
                    for c in kept {
                        assert!(s.contains(c) && !used[*c as usize]);
                        used[*c as usize] = true;
                    }
                }
            }
        }
    }

    #[test]
    fn rerouting_makes_room() {
        // A = {0, 1} keeps one cell; B = {0} needs cell 0, which A may have taken.
        let mut inc = IncrementalShrinker::new(2, 0.5, u64::MAX);
        assert_eq!(inc.try_admit(&[0, 1]), Admission::Admitted);
        assert_eq!(inc.try_admit(&[0]), Admission::Admitted);
        let sh = inc.shrinkings();
        assert_eq!(sh[1], vec![0]);
        assert_eq!(sh[0], vec![1]);
        assert_eq!(inc.try_admit(&[1]), Admission::Rejected);
        assert_eq!(inc.len(), 2);
    }

    #[test]
    fn work_cap_is_reported() {
        let mut inc = IncrementalShrinker::new(4, 0.5, 0);
        assert_eq!(inc.try_admit(&[0, 1]), Admission::Admitted);
        assert_eq!(inc.try_admit(&[0]), Admission::WorkCapExceeded);
        assert_eq!(inc.len(), 1);
    }

    #[test]
    fn first_fit_is_sound() {
        let fam = vec![vec![0, 1], vec![0]];
        assert!(shrink_first_fit(2, &fam, &[1, 1]).is_none());
        assert!(shrink_first_fit(2, &[vec![0], vec![0, 1]], &[1, 1]).is_some());
    }
}
