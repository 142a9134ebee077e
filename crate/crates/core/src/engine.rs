//! Product-automaton reachability and exhaustive walk enumeration.
//!
//! All searches run over product states `(vertex, automaton state)`. The
//! automaton has no ε-moves, so when an accepting run of a walk `w` visits
//! some product state twice, the stretch between the two visits consumes at
//! least one edge. Cutting that stretch out leaves a match `w'` whose edge
//! bag is `bag(w)` minus a non-empty bag, so `w' ≺ w`, and `w' ⊏ w` as well
//! since its edge set can only shrink and it is strictly shorter.
//!
//! Hence every `≺`-minimal and every `⊏`-minimal match admits an accepting
//! run that never repeats a product state, and those runs are finitely many.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::Result;
use crate::graph::{Graph, Walk};
use crate::regex::{Nfa, RegExp};

/// A `(vertex, automaton state)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState {
    pub vertex: usize,
    pub state: usize,
}

/// Shape of `Match(G, R, s, t)` as a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchLength {
    /// No match at all.
    Empty,
    /// Finitely many matches, the longest of the given length.
    Finite(usize),
    Infinite,
}

/// Counters from a product-simple enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Product states pushed on the search stack.
    pub expansions: u64,
    /// Accepting runs reached, before deduplication of walks.
    pub accepting_runs: u64,
}

/// A query automaton compiled against the labels of one graph.
#[derive(Debug, Clone)]
pub struct Query<'g> {
    graph: &'g Graph,
    nfa: Nfa,
    states: usize,
    labels: usize,
    finals: Vec<bool>,
    // delta[q * labels + a] = successors of q on label a
    delta: Vec<Vec<usize>>,
    rdelta: Vec<Vec<usize>>,
}

impl<'g> Query<'g> {
    pub fn new(graph: &'g Graph, r: &RegExp) -> Self {
        Self::from_nfa(graph, r.to_nfa())
    }

    pub fn from_nfa(graph: &'g Graph, nfa: Nfa) -> Self {
        let states = nfa.state_count;
        let labels = graph.labels().len();
        let mut delta = vec![Vec::new(); states * labels];
        let mut rdelta = vec![Vec::new(); states * labels];
        for t in &nfa.transitions {
            // Labels absent from the graph can never be read.
            if let Some(a) = graph.label_id(&t.label) {
                delta[t.from * labels + a].push(t.to);
                rdelta[t.to * labels + a].push(t.from);
            }
        }
        for list in delta.iter_mut().chain(rdelta.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let mut finals = vec![false; states];
        for &f in &nfa.finals {
            finals[f] = true;
        }
        Query {
            graph,
            nfa,
            states,
            labels,
            finals,
            delta,
            rdelta,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    /// `|V| × |Q|`, the number of product states.
    pub fn product_size(&self) -> usize {
        self.graph.vertex_count() * self.states
    }

    fn index(&self, vertex: usize, state: usize) -> usize {
        vertex * self.states + state
    }

    fn split(&self, idx: usize) -> ProductState {
        ProductState {
            vertex: idx / self.states,
            state: idx % self.states,
        }
    }

    pub(crate) fn start(&self, s: usize) -> usize {
        self.index(s, self.nfa.initial)
    }

    fn accepting(&self, idx: usize, t: usize) -> bool {
        let ps = self.split(idx);
        ps.vertex == t && self.finals[ps.state]
    }

    fn step(&self, q: usize, label: usize) -> &[usize] {
        &self.delta[q * self.labels + label]
    }

    /// Product successors `(edge id, product index)` in deterministic order.
    fn successors(&self, idx: usize) -> Vec<(usize, usize)> {
        let ps = self.split(idx);
        let mut out = Vec::new();
        for &e in self.graph.out_edges(ps.vertex) {
            let edge = self.graph.edge_idx(e);
            for &p in self.step(ps.state, edge.label) {
                out.push((e, self.index(edge.tgt, p)));
            }
        }
        out
    }

    /// Breadth-first distances from every product state to an accepting
    /// state at `t`.
    pub fn distances_to_accept(&self, t: usize) -> Vec<Option<u32>> {
        self.distances_to_accept_via(t, |_| true)
    }

    /// As [`Query::distances_to_accept`], over the edges `usable` keeps.
    pub fn distances_to_accept_via(&self, t: usize, usable: impl Fn(usize) -> bool) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.product_size()];
        let mut queue = VecDeque::new();
        for (q, &fin) in self.finals.iter().enumerate() {
            if fin {
                let idx = self.index(t, q);
                dist[idx] = Some(0);
                queue.push_back(idx);
            }
        }
        while let Some(idx) = queue.pop_front() {
            let ps = self.split(idx);
            let d = dist[idx].unwrap();
            for &e in self.graph.in_edges(ps.vertex) {
                if !usable(e) {
                    continue;
                }
                let edge = self.graph.edge_idx(e);
                for &q in &self.rdelta[ps.state * self.labels + edge.label] {
                    let pred = self.index(edge.src, q);
                    if dist[pred].is_none() {
                        dist[pred] = Some(d + 1);
                        queue.push_back(pred);
                    }
                }
            }
        }
        dist
    }

    /// Breadth-first distances from `(s, initial)`.
    pub fn distances_from(&self, s: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.product_size()];
        let start = self.start(s);
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(idx) = queue.pop_front() {
            let d = dist[idx].unwrap();
            for (_, next) in self.successors(idx) {
                if dist[next].is_none() {
                    dist[next] = Some(d + 1);
                    queue.push_back(next);
                }
            }
        }
        dist
    }

    pub fn nonempty(&self, s: usize, t: usize) -> bool {
        self.distances_from(s)
            .iter()
            .enumerate()
            .any(|(idx, d)| d.is_some() && self.accepting(idx, t))
    }

    /// Vertices `t` with `Match(G, R, s, t)` non-empty.
    pub fn reachable_targets(&self, s: usize) -> Vec<usize> {
        let dist = self.distances_from(s);
        let mut out: Vec<usize> = (0..self.product_size())
            .filter(|&idx| dist[idx].is_some() && self.finals[self.split(idx).state])
            .map(|idx| self.split(idx).vertex)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Whether the match set is empty, finite or infinite, and the longest
    /// match length when finite.
    pub fn match_length(&self, s: usize, t: usize) -> MatchLength {
        let fwd = self.distances_from(s);
        let bwd = self.distances_to_accept(t);
        let live: Vec<bool> = fwd
            .iter()
            .zip(&bwd)
            .map(|(a, b)| a.is_some() && b.is_some())
            .collect();
        let start = self.start(s);
        if !live[start] {
            return MatchLength::Empty;
        }
        // Iterative DFS over live states: cycle detection plus longest path
        // to acceptance in post-order.
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; live.len()];
        let mut longest = vec![0usize; live.len()];
        let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        let live_succ = |idx: usize| -> Vec<usize> {
            self.successors(idx)
                .into_iter()
                .map(|(_, n)| n)
                .filter(|&n| live[n])
                .collect()
        };
        color[start] = GREY;
        stack.push((start, live_succ(start), 0));
        while let Some((idx, succ, pos)) = stack.last_mut() {
            if *pos < succ.len() {
                let next = succ[*pos];
                *pos += 1;
                match color[next] {
                    GREY => return MatchLength::Infinite,
                    WHITE => {
                        color[next] = GREY;
                        let s = live_succ(next);
                        stack.push((next, s, 0));
                    }
                    _ => {}
                }
            } else {
                let idx = *idx;
                let best = succ.iter().map(|&n| longest[n] + 1).max();
                let here = if self.accepting(idx, t) { Some(0) } else { None };
                longest[idx] = best.into_iter().chain(here).max().unwrap_or(0);
                color[idx] = BLACK;
                stack.pop();
            }
        }
        MatchLength::Finite(longest[start])
    }

    /// All minimum-length matches, as edge paths from `s`, sorted.
    pub fn shortest_paths(&self, s: usize, t: usize) -> Vec<Vec<usize>> {
        let dist = self.distances_from(s);
        let best = (0..self.product_size())
            .filter(|&idx| self.accepting(idx, t))
            .filter_map(|idx| dist[idx])
            .min();
        let Some(best) = best else {
            return Vec::new();
        };
        // Walk back through BFS layers from every accepting state at distance `best`.
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let mut stack: Vec<(usize, Vec<usize>)> = (0..self.product_size())
            .filter(|&idx| self.accepting(idx, t) && dist[idx] == Some(best))
            .map(|idx| (idx, Vec::new()))
            .collect();
        while let Some((idx, rev_path)) = stack.pop() {
            let d = dist[idx].unwrap();
            if d == 0 {
                let mut path = rev_path;
                path.reverse();
                found.insert(path);
                continue;
            }
            let ps = self.split(idx);
            for &e in self.graph.in_edges(ps.vertex) {
                let edge = self.graph.edge_idx(e);
                for &q in &self.rdelta[ps.state * self.labels + edge.label] {
                    let pred = self.index(edge.src, q);
                    if dist[pred] == Some(d - 1) {
                        let mut p = rev_path.clone();
                        p.push(e);
                        stack.push((pred, p));
                    }
                }
            }
        }
        sorted(found)
    }

    /// Walks of `Match(G, R, s, t)` with length at most `max_len`, as sorted
    /// edge paths. The search tracks the set of automaton states reached, so
    /// each walk is produced once.
    pub fn match_paths(&self, s: usize, t: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.subset_search(s, t, Some(max_len), false, |p| out.push(p.to_vec()));
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Matches that repeat no edge, as sorted edge paths.
    pub fn trail_paths(&self, s: usize, t: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.subset_search(s, t, None, true, |p| out.push(p.to_vec()));
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn subset_search(
        &self,
        s: usize,
        t: usize,
        max_len: Option<usize>,
        trails_only: bool,
        mut emit: impl FnMut(&[usize]),
    ) {
        let dist = self.distances_to_accept(t);
        // Smallest remaining distance to acceptance from a vertex and state set.
        let slack = |v: usize, set: &[usize]| -> Option<u32> {
            set.iter().filter_map(|&q| dist[self.index(v, q)]).min()
        };
        let start_set = vec![self.nfa.initial];
        if slack(s, &start_set).is_none_or(|d| max_len.is_some_and(|m| d as usize > m)) {
            return;
        }
        let mut used = vec![false; self.graph.edge_count()];
        let mut path: Vec<usize> = Vec::new();
        // Frame: vertex, state set, next out-edge position.
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(s, start_set, 0)];
        let mut fresh = true;
        while let Some((v, set, pos)) = stack.last_mut() {
            if fresh {
                fresh = false;
                if *v == t && set.iter().any(|&q| self.finals[q]) {
                    emit(&path);
                }
            }
            let out = self.graph.out_edges(*v);
            let mut pushed = None;
            while *pos < out.len() {
                let e = out[*pos];
                *pos += 1;
                if trails_only && used[e] {
                    continue;
                }
                if max_len.is_some_and(|m| path.len() >= m) {
                    break;
                }
                let edge = self.graph.edge_idx(e);
                let mut next: Vec<usize> = set
                    .iter()
                    .flat_map(|&q| self.step(q, edge.label).iter().copied())
                    .collect();
                next.sort_unstable();
                next.dedup();
                let Some(d) = slack(edge.tgt, &next) else {
                    continue;
                };
                if max_len.is_some_and(|m| path.len() + 1 + d as usize > m) {
                    continue;
                }
                pushed = Some((e, edge.tgt, next));
                break;
            }
            match pushed {
                Some((e, tgt, next)) => {
                    used[e] = true;
                    path.push(e);
                    stack.push((tgt, next, 0));
                    fresh = true;
                }
                None => {
                    stack.pop();
                    if let Some(e) = path.pop() {
                        used[e] = false;
                    }
                }
            }
        }
    }

    /// Depth-first search over accepting runs that never revisit a product
    /// state, restricted to edges with remaining `budget` (a per-edge use
    /// limit; `None` means unlimited). `visit` sees the edge path of every
    /// accepting run and returns `true` to stop the search.
    pub fn product_simple_search(
        &self,
        s: usize,
        t: usize,
        budget: Option<&[u32]>,
        visit: impl FnMut(&[usize]) -> bool,
    ) -> SearchStats {
        let coreach = self.coreachable(t);
        self.product_simple_search_with(s, t, &coreach, budget, visit)
    }

    /// Product states from which an accepting state at `t` is reachable.
    pub fn coreachable(&self, t: usize) -> Vec<bool> {
        self.distances_to_accept(t)
            .into_iter()
            .map(|d| d.is_some())
            .collect()
    }

    /// As [`Query::product_simple_search`], reusing a precomputed
    /// [`Query::coreachable`] table for `t`.
    pub fn product_simple_search_with(
        &self,
        s: usize,
        t: usize,
        coreach: &[bool],
        budget: Option<&[u32]>,
        visit: impl FnMut(&[usize]) -> bool,
    ) -> SearchStats {
        self.simple_dfs(s, t, coreach, budget, None, visit)
    }

    fn simple_dfs(
        &self,
        s: usize,
        t: usize,
        coreach: &[bool],
        budget: Option<&[u32]>,
        mut pruner: Option<&mut Pruner>,
        mut visit: impl FnMut(&[usize]) -> bool,
    ) -> SearchStats {
        let mut stats = SearchStats::default();
        let start = self.start(s);
        if !coreach[start] {
            return stats;
        }
        let mut remaining: Option<Vec<u32>> = budget.map(<[u32]>::to_vec);
        let mut on_path = vec![false; self.product_size()];
        let mut path: Vec<usize> = Vec::new();
        // (product state, its successors, next successor to try)
        #[allow(clippy::type_complexity)]
        let mut stack: Vec<(usize, Vec<(usize, usize)>, usize)> = Vec::new();
        on_path[start] = true;
        stats.expansions += 1;
        if self.accepting(start, t) {
            stats.accepting_runs += 1;
            if visit(&path) {
                return stats;
            }
            if let Some(p) = pruner.as_deref_mut() {
                p.record(&path);
            }
        }
        let covered = pruner.as_deref().is_some_and(Pruner::covered);
        stack.push((
            start,
            if covered {
                Vec::new()
            } else {
                self.successors(start)
            },
            0,
        ));
        while let Some((_, succ, pos)) = stack.last_mut() {
            let mut pushed = None;
            while *pos < succ.len() {
                let (e, next) = succ[*pos];
                *pos += 1;
                if on_path[next] || !coreach[next] {
                    continue;
                }
                if remaining.as_ref().is_some_and(|r| r[e] == 0) {
                    continue;
                }
                pushed = Some((e, next));
                break;
            }
            match pushed {
                Some((e, next)) => {
                    if let Some(r) = remaining.as_mut() {
                        r[e] -= 1;
                    }
                    on_path[next] = true;
                    path.push(e);
                    stats.expansions += 1;
                    if let Some(p) = pruner.as_deref_mut() {
                        p.push(e);
                    }
                    if self.accepting(next, t) {
                        stats.accepting_runs += 1;
                        if visit(&path) {
                            return stats;
                        }
                        if let Some(p) = pruner.as_deref_mut() {
                            p.record(&path);
                        }
                    }
                    // every extension of a covered prefix is dominated
                    let covered = pruner.as_deref().is_some_and(Pruner::covered);
                    let succ = if covered {
                        Vec::new()
                    } else {
                        self.successors(next)
                    };
                    stack.push((next, succ, 0));
                }
                None => {
                    let (idx, _, _) = stack.pop().unwrap();
                    on_path[idx] = false;
                    if let Some(e) = path.pop() {
                        if let Some(r) = remaining.as_mut() {
                            r[e] += 1;
                        }
                        if let Some(p) = pruner.as_deref_mut() {
                            p.pop(e);
                        }
                    }
                }
            }
        }
        stats
    }

    /// A match from `s` to `t` of length at most `max_len` that uses each
    /// edge `e` at most `budget[e]` times. `dist` is
    /// [`Query::distances_to_accept`] for `t`.
    ///
    /// The search is over walks, tracking the set of automaton states
    /// reached, so a walk is explored once however many runs it has. The
    /// budget bounds every walk; no visited-state restriction is needed.
    /// Each time an edge runs out, distances are recomputed without the
    /// exhausted edges, which cuts branches that can no longer finish.
    ///
    /// Whether a node can still finish depends only on its vertex, its state
    /// set, the length left and the budget left on the edges it can still
    /// usefully take, and less of either never helps. Failed nodes are kept
    /// per (vertex, state set) and any node they cover is skipped.
    pub fn budgeted_search(
        &self,
        s: usize,
        t: usize,
        dist: &[Option<u32>],
        budget: &[u32],
        max_len: usize,
    ) -> Option<Vec<usize>> {
        let mut remaining = budget.to_vec();
        let total: usize = remaining.iter().map(|&b| b as usize).sum();
        let limit = max_len.min(total);
        let initial = self.distances_to_accept_via(t, |e| remaining[e] > 0);
        let slack = |dist: &[Option<u32>], v: usize, set: &[usize]| -> Option<usize> {
            set.iter()
                .filter_map(|&q| dist[self.index(v, q)])
                .min()
                .map(|d| d as usize)
        };
        let accepts = |v: usize, set: &[usize]| v == t && set.iter().any(|&q| self.finals[q]);

        let start = vec![self.nfa.initial];
        if slack(dist, s, &start).is_none_or(|d| d > limit) {
            return None;
        }
        if accepts(s, &start) {
            return Some(Vec::new());
        }

        let mut failures = Failures::new(self, budget);
        // Frame: vertex, state set, next out-edge, whether it pushed a
        // table, its budget on live edges.
        type Frame = (usize, Vec<usize>, usize, bool, Option<Box<[u8]>>);
        let root = failures.live_budget(s, &start, &initial, &remaining);
        let mut tables: Vec<Vec<Option<u32>>> = vec![initial];
        let mut path: Vec<usize> = Vec::new();
        let mut stack: Vec<Frame> = vec![(s, start, 0, false, root)];
        while let Some((v, set, pos, _, _)) = stack.last_mut() {
            let out = self.graph.out_edges(*v);
            if path.len() >= limit {
                *pos = out.len();
            }
            let mut pushed = None;
            while *pos < out.len() {
                let e = out[*pos];
                *pos += 1;
                if remaining[e] == 0 {
                    continue;
                }
                let edge = self.graph.edge_idx(e);
                let mut next: Vec<usize> = set
                    .iter()
                    .flat_map(|&q| self.step(q, edge.label).iter().copied())
                    .collect();
                next.sort_unstable();
                next.dedup();
                let left = limit - path.len() - 1;
                if slack(tables.last().unwrap(), edge.tgt, &next).is_none_or(|d| d > left) {
                    continue;
                }
                remaining[e] -= 1;
                let mut fresh = None;
                if remaining[e] == 0 {
                    let t2 = self.distances_to_accept_via(t, |f| remaining[f] > 0);
                    if slack(&t2, edge.tgt, &next).is_none_or(|d| d > left) {
                        remaining[e] += 1;
                        continue;
                    }
                    fresh = Some(t2);
                }
                let table = fresh.as_deref().unwrap_or_else(|| tables.last().unwrap());
                let live = failures.live_budget(edge.tgt, &next, table, &remaining);
                if failures.covers(edge.tgt, &next, live.as_deref(), left) {
                    remaining[e] += 1;
                    continue;
                }
                pushed = Some((e, edge.tgt, next, fresh, live));
                break;
            }
            match pushed {
                Some((e, tgt, next, fresh, live)) => {
                    path.push(e);
                    if accepts(tgt, &next) {
                        return Some(path);
                    }
                    let has_table = fresh.is_some();
                    tables.extend(fresh);
                    stack.push((tgt, next, 0, has_table, live));
                }
                None => {
                    let (v, set, _, has_table, live) = stack.pop().unwrap();
                    failures.record(v, set, live, limit - path.len());
                    if has_table {
                        tables.pop();
                    }
                    if let Some(e) = path.pop() {
                        remaining[e] += 1;
                    }
                }
            }
        }
        None
    }

    /// A match from `s` to `t` that only uses edges of `own` (sorted edge
    /// ids) and either misses one of them or is shorter than `own_len`.
    ///
    /// Breadth-first over `(product state, edges used so far)`, so each
    /// such pair is reached first by its shortest walk.
    pub fn smaller_set_search(
        &self,
        s: usize,
        t: usize,
        dist: &[Option<u32>],
        own: &[usize],
        own_len: usize,
    ) -> Option<Vec<usize>> {
        let mut slot = HashMap::with_capacity(own.len());
        for (i, &e) in own.iter().enumerate() {
            slot.insert(e, i);
        }
        let words = own.len().div_ceil(64).max(1);
        type Key = (usize, Vec<u64>);
        let full: Vec<u64> = {
            let mut f = vec![0u64; words];
            for i in 0..own.len() {
                f[i / 64] |= 1 << (i % 64);
            }
            f
        };
        let start: Key = (self.start(s), vec![0u64; words]);
        dist[start.0]?;
        let mut parent: HashMap<Key, Option<(Key, usize, usize)>> = HashMap::new();
        parent.insert(start.clone(), None);
        let mut queue = VecDeque::from([(start, 0usize)]);
        while let Some((key, len)) = queue.pop_front() {
            if self.accepting(key.0, t) && (key.1 != full || len < own_len) {
                let mut path = Vec::with_capacity(len);
                let mut at = key;
                while let Some(Some((prev, e, _))) = parent.get(&at) {
                    path.push(*e);
                    at = prev.clone();
                }
                path.reverse();
                return Some(path);
            }
            for (e, next) in self.successors(key.0) {
                let Some(&i) = slot.get(&e) else { continue };
                let Some(d) = dist[next] else { continue };
                let mut used = key.1.clone();
                used[i / 64] |= 1 << (i % 64);
                // With every edge in use only a shorter walk can qualify.
                if used == full && len + 1 + d as usize >= own_len {
                    continue;
                }
                let nk = (next, used);
                if !parent.contains_key(&nk) {
                    parent.insert(nk.clone(), Some((key.clone(), e, len + 1)));
                    queue.push_back((nk, len + 1));
                }
            }
        }
        None
    }

    /// Product-simple matches that include every minimal match under
    /// `order`, deduplicated and sorted. Prefixes whose footprint already
    /// covers a match found earlier are not extended, since everything
    /// beyond them is dominated by that match; a minimal match is never
    /// beyond such a prefix.
    pub fn minimal_candidates(&self, s: usize, t: usize, order: Dominance) -> (Vec<Vec<usize>>, SearchStats) {
        let coreach = self.coreachable(t);
        let mut pruner = Pruner::new(order, self.graph.edge_count());
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let stats = self.simple_dfs(s, t, &coreach, None, Some(&mut pruner), |p| {
            if !found.contains(p) {
                found.insert(p.to_vec());
            }
            false
        });
        (sorted(found), stats)
    }

    /// Deduplicated, sorted edge paths of all product-simple matches.
    pub fn product_simple_paths(&self, s: usize, t: usize) -> (Vec<Vec<usize>>, SearchStats) {
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let stats = self.product_simple_search(s, t, None, |p| {
            if !found.contains(p) {
                found.insert(p.to_vec());
            }
            false
        });
        (sorted(found), stats)
    }
}

/// Which strict order a candidate search prunes against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// strict sub-multiset of edges
    Bag,
    /// strict subset of edges, or the same set and shorter
    Set,
}

/// How many found matches the pruner tracks. Any subset prunes soundly;
/// the cap bounds the work per step on graphs with many large matches.
const PRUNER_CAPACITY: usize = 32;

struct Tracked {
    need: Vec<(usize, u32)>,
    // edges whose requirement the current prefix does not meet yet
    deficit: usize,
    len: usize,
}

/// Footprint of the current DFS prefix against a few found matches, kept
/// incrementally: pushing or popping an edge only touches the matches
/// that use it.
struct Pruner {
    order: Dominance,
    counts: Vec<u32>,
    distinct: usize,
    len: usize,
    tracked: Vec<Tracked>,
    // edge -> (tracked index, required count)
    by_edge: Vec<Vec<(usize, u32)>>,
    met: usize,
}

impl Pruner {
    fn new(order: Dominance, edges: usize) -> Self {
        Pruner {
            order,
            counts: vec![0; edges],
            distinct: 0,
            len: 0,
            tracked: Vec::new(),
            by_edge: vec![Vec::new(); edges],
            met: 0,
        }
    }

    fn push(&mut self, e: usize) {
        self.counts[e] += 1;
        self.len += 1;
        if self.counts[e] == 1 {
            self.distinct += 1;
        }
        for &(i, need) in &self.by_edge[e] {
            if self.counts[e] == need {
                self.tracked[i].deficit -= 1;
                if self.tracked[i].deficit == 0 {
                    self.met += 1;
                }
            }
        }
    }

    fn pop(&mut self, e: usize) {
        for &(i, need) in &self.by_edge[e] {
            if self.counts[e] == need {
                if self.tracked[i].deficit == 0 {
                    self.met -= 1;
                }
                self.tracked[i].deficit += 1;
            }
        }
        if self.counts[e] == 1 {
            self.distinct -= 1;
        }
        self.counts[e] -= 1;
        self.len -= 1;
    }

    /// Track `path`, a match that is also the current prefix.
    fn record(&mut self, path: &[usize]) {
        if self.tracked.len() == PRUNER_CAPACITY {
            return;
        }
        let mut need: HashMap<usize, u32> = HashMap::new();
        for &e in path {
            *need.entry(e).or_default() += 1;
        }
        if self.order == Dominance::Set {
            need.values_mut().for_each(|n| *n = 1);
        }
        let i = self.tracked.len();
        let mut need: Vec<(usize, u32)> = need.into_iter().collect();
        need.sort_unstable();
        let deficit = need.iter().filter(|&&(e, n)| self.counts[e] < n).count();
        for &(e, n) in &need {
            self.by_edge[e].push((i, n));
        }
        if deficit == 0 {
            self.met += 1;
        }
        self.tracked.push(Tracked {
            need,
            deficit,
            len: path.len(),
        });
    }

    /// Whether every extension of the current prefix is dominated by a
    /// tracked match.
    fn covered(&self) -> bool {
        if self.met == 0 {
            return false;
        }
        match self.order {
            // a sub-multiset of the prefix is strictly below any extension
            Dominance::Bag => true,
            Dominance::Set => self
                .tracked
                .iter()
                .any(|m| m.deficit == 0 && (m.need.len() < self.distinct || m.len <= self.len)),
        }
    }
}

fn sorted(set: HashSet<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = set.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

fn endpoints(g: &Graph, s: &str, t: &str) -> Result<(usize, usize)> {
    Ok((g.require_vertex(s)?, g.require_vertex(t)?))
}

fn to_walks(g: &Graph, s: usize, paths: Vec<Vec<usize>>) -> Vec<Walk> {
    paths.iter().map(|p| g.path_to_walk(s, p)).collect()
}

/// Whether `Match(g, r, s, t)` is non-empty (equivalently, `MM(g, r, s, t)`).
pub fn nonempty(g: &Graph, r: &RegExp, s: &str, t: &str) -> Result<bool> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(Query::new(g, r).nonempty(s, t))
}

/// All matches of minimum length.
pub fn shortest_matches(g: &Graph, r: &RegExp, s: &str, t: &str) -> Result<Vec<Walk>> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(to_walks(g, s, Query::new(g, r).shortest_paths(s, t)))
}

/// All matches with length at most `max_len`, sorted by length then steps.
pub fn enumerate_matches(g: &Graph, r: &RegExp, s: &str, t: &str, max_len: usize) -> Result<Vec<Walk>> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(to_walks(g, s, Query::new(g, r).match_paths(s, t, max_len)))
}

/// Matches admitting an accepting run without repeated product states.
pub fn enumerate_product_simple(g: &Graph, r: &RegExp, s: &str, t: &str) -> Result<Vec<Walk>> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(to_walks(g, s, Query::new(g, r).product_simple_paths(s, t).0))
}

/// Matches that are trails.
pub fn enumerate_trail_matches(g: &Graph, r: &RegExp, s: &str, t: &str) -> Result<Vec<Walk>> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(to_walks(g, s, Query::new(g, r).trail_paths(s, t)))
}

pub fn match_length(g: &Graph, r: &RegExp, s: &str, t: &str) -> Result<MatchLength> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(Query::new(g, r).match_length(s, t))
}

/// Budget on live edges and length left when a node was exhausted.
type Exhausted = (Box<[u8]>, usize);

/// Exhausted nodes of [`Query::budgeted_search`], keyed by
/// (vertex, state set).
struct Failures<'q, 'g> {
    q: &'q Query<'g>,
    /// Off when some budget does not fit a byte.
    enabled: bool,
    seen: Vec<bool>,
    live: Vec<bool>,
    table: HashMap<(usize, Vec<usize>), Vec<Exhausted>>,
}

impl<'q, 'g> Failures<'q, 'g> {
    fn new(q: &'q Query<'g>, budget: &[u32]) -> Self {
        Failures {
            q,
            enabled: budget.iter().all(|&b| b <= u8::MAX as u32),
            seen: vec![false; q.product_size()],
            live: vec![false; q.graph.edge_count()],
            table: HashMap::new(),
        }
    }

    /// The remaining budget restricted to edges some completion from
    /// `(v, set)` could take; every other edge reads as 0.
    fn live_budget(
        &mut self,
        v: usize,
        set: &[usize],
        dist: &[Option<u32>],
        remaining: &[u32],
    ) -> Option<Box<[u8]>> {
        if !self.enabled {
            return None;
        }
        self.seen.iter_mut().for_each(|x| *x = false);
        self.live.iter_mut().for_each(|x| *x = false);
        let mut stack: Vec<usize> = set.iter().map(|&q| self.q.index(v, q)).collect();
        for &i in &stack {
            self.seen[i] = true;
        }
        while let Some(i) = stack.pop() {
            for (e, j) in self.q.successors(i) {
                if remaining[e] == 0 || dist[j].is_none() {
                    continue;
                }
                self.live[e] = true;
                if !self.seen[j] {
                    self.seen[j] = true;
                    stack.push(j);
                }
            }
        }
        Some(
            self.live
                .iter()
                .zip(remaining)
                .map(|(&on, &r)| if on { r as u8 } else { 0 })
                .collect(),
        )
    }

    fn covers(&self, v: usize, set: &[usize], live: Option<&[u8]>, left: usize) -> bool {
        let Some(live) = live else { return false };
        self.table.get(&(v, set.to_vec())).is_some_and(|list| {
            list.iter()
                .any(|(b, l)| *l >= left && b.iter().zip(live).all(|(x, y)| x >= y))
        })
    }

    fn record(&mut self, v: usize, set: Vec<usize>, live: Option<Box<[u8]>>, left: usize) {
        let Some(live) = live else { return };
        let list = self.table.entry((v, set)).or_default();
        // drop what the new entry covers
        list.retain(|(b, l)| !(left >= *l && live.iter().zip(b.iter()).all(|(x, y)| x >= y)));
        list.push((live, left));
    }
}
