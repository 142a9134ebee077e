//! Walk semantics as set-valued queries: all matches, trails, shortest,
//! minimal multiset (MM) and shortest minimal set (SMS), plus membership.
//!
//! MM and SMS are computed from the product-simple candidates. Candidates
//! are scanned in an order where every walk that could dominate a candidate
//! comes first, so a single pass against the minima kept so far is enough:
//! if anything dominates `c`, some minimal walk does, that walk is itself a
//! candidate, and it was scanned (and kept) before `c`.

use std::collections::BTreeSet;

use crate::engine::{Dominance, Query};
use crate::error::{Error, Result};
use crate::graph::{Graph, Walk};
use crate::regex::RegExp;

/// Outcome of a membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// The walk's label word is not in the language.
    NotAMatch,
    /// A match strictly below the walk.
    Dominated(Walk),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

/// Sorted edge ids with repetitions: the multiset of a path.
pub(crate) fn bag_key(path: &[usize]) -> Vec<usize> {
    let mut b = path.to_vec();
    b.sort_unstable();
    b
}

pub(crate) fn set_key(path: &[usize]) -> Vec<usize> {
    let mut b = bag_key(path);
    b.dedup();
    b
}

/// Sub-multiset test on sorted lists (sets are the repetition-free case).
pub(crate) fn sorted_includes(small: &[usize], big: &[usize]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Result of a minimality filter at the edge-path level.
#[derive(Debug, Clone, Default)]
pub struct Minima {
    /// Minimal paths in canonical order (length, then edge ids).
    pub paths: Vec<Vec<usize>>,
    /// Candidates examined in total.
    pub examined: usize,
}

/// Streams `≺`-minimal paths to `emit` in canonical order. `emit` also gets
/// the number of candidates examined so far, the delay measure.
pub fn mm_stream(q: &Query, s: usize, t: usize, mut emit: impl FnMut(&[usize], usize)) -> usize {
    let (candidates, _) = q.minimal_candidates(s, t, Dominance::Bag);
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        let bag = bag_key(c);
        // Kept bags are never longer, and equal length with inclusion means equality.
        let dominated = kept
            .iter()
            .any(|m| m.len() < bag.len() && sorted_includes(m, &bag));
        if !dominated {
            emit(c, i + 1);
            kept.push(bag);
        }
    }
    candidates.len()
}

pub fn mm_paths(q: &Query, s: usize, t: usize) -> Minima {
    let mut paths = Vec::new();
    let examined = mm_stream(q, s, t, |p, _| paths.push(p.to_vec()));
    Minima { paths, examined }
}

pub fn sms_paths(q: &Query, s: usize, t: usize) -> Minima {
    let (candidates, _) = q.minimal_candidates(s, t, Dominance::Set);
    let examined = candidates.len();
    let mut keyed: Vec<(Vec<usize>, Vec<usize>)> = candidates.into_iter().map(|c| (set_key(&c), c)).collect();
    // A ⊏-dominator has a smaller edge set, or the same set and a shorter length.
    keyed.sort_by(|(sa, a), (sb, b)| {
        sa.len()
            .cmp(&sb.len())
            .then(a.len().cmp(&b.len()))
            .then_with(|| a.cmp(b))
    });
    let mut kept: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut paths = Vec::new();
    for (set, c) in keyed {
        let dominated = kept.iter().any(|(m, len)| {
            if m.len() == set.len() {
                *m == set && *len < c.len()
            } else {
                sorted_includes(m, &set)
            }
        });
        if !dominated {
            kept.push((set, c.len()));
            paths.push(c);
        }
    }
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Minima { paths, examined }
}

fn endpoints(g: &Graph, s: &str, t: &str) -> Result<(usize, usize)> {
    Ok((g.require_vertex(s)?, g.require_vertex(t)?))
}

fn walk_set(g: &Graph, s: usize, paths: &[Vec<usize>]) -> BTreeSet<Walk> {
    paths.iter().map(|p| g.path_to_walk(s, p)).collect()
}

/// `min≺ Match(g, r, s, t)`.
pub fn mm_set(g: &Graph, r: &RegExp, s: &str, t: &str) -> Result<BTreeSet<Walk>> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(walk_set(g, s, &mm_paths(&Query::new(g, r), s, t).paths))
}

/// `min⊏ Match(g, r, s, t)`.
pub fn sms_set(g: &Graph, r: &RegExp, s: &str, t: &str) -> Result<BTreeSet<Walk>> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(walk_set(g, s, &sms_paths(&Query::new(g, r), s, t).paths))
}

pub fn trail_set(g: &Graph, r: &RegExp, s: &str, t: &str) -> Result<BTreeSet<Walk>> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(walk_set(g, s, &Query::new(g, r).trail_paths(s, t)))
}

pub fn shortest_set(g: &Graph, r: &RegExp, s: &str, t: &str) -> Result<BTreeSet<Walk>> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(walk_set(g, s, &Query::new(g, r).shortest_paths(s, t)))
}

pub fn match_set(g: &Graph, r: &RegExp, s: &str, t: &str, max_len: usize) -> Result<BTreeSet<Walk>> {
    let (s, t) = endpoints(g, s, t)?;
    Ok(walk_set(g, s, &Query::new(g, r).match_paths(s, t, max_len)))
}

fn all_pairs(g: &Graph, r: &RegExp, per_pair: impl Fn(&Query, usize, usize) -> Minima) -> BTreeSet<Walk> {
    let q = Query::new(g, r);
    let mut out = BTreeSet::new();
    for s in 0..g.vertex_count() {
        for t in q.reachable_targets(s) {
            out.extend(walk_set(g, s, &per_pair(&q, s, t).paths));
        }
    }
    out
}

/// Union of `mm_set` over every `(s, t)` pair; minimality stays per pair.
pub fn mm_all(g: &Graph, r: &RegExp) -> BTreeSet<Walk> {
    all_pairs(g, r, mm_paths)
}

/// Union of `sms_set` over every `(s, t)` pair.
pub fn sms_all(g: &Graph, r: &RegExp) -> BTreeSet<Walk> {
    all_pairs(g, r, sms_paths)
}

fn prepare(g: &Graph, r: &RegExp, w: &Walk) -> Result<Option<(usize, usize, Vec<usize>)>> {
    let (s, path) = g
        .walk_to_path(w)
        .ok_or_else(|| Error::InvalidWalk(w.to_string()))?;
    if !r.to_nfa().accepts(&w.labels()) {
        return Ok(None);
    }
    let t = g.vertex_id(w.target()).expect("validated walk");
    Ok(Some((s, t, path)))
}

/// A match strictly `≺`-below `path`, if one exists. `dist` is
/// [`Query::distances_to_accept`] for `t`.
///
/// Anything below `path` uses each edge at most as often as `path` does,
/// which bounds the search; an exhausted search proves minimality.
pub fn mm_dominator(
    q: &Query,
    s: usize,
    t: usize,
    dist: &[Option<u32>],
    path: &[usize],
) -> Option<Vec<usize>> {
    if path.is_empty() {
        return None;
    }
    let mut budget = vec![0u32; q.graph().edge_count()];
    for &e in path {
        budget[e] += 1;
    }
    q.budgeted_search(s, t, dist, &budget, path.len() - 1)
}

/// A match strictly `⊏`-below `path`, if one exists.
pub fn sms_dominator(
    q: &Query,
    s: usize,
    t: usize,
    dist: &[Option<u32>],
    path: &[usize],
) -> Option<Vec<usize>> {
    q.smaller_set_search(s, t, dist, &set_key(path), path.len())
}

type Dominator = fn(&Query, usize, usize, &[Option<u32>], &[usize]) -> Option<Vec<usize>>;

fn membership(g: &Graph, r: &RegExp, w: &Walk, dominator: Dominator) -> Result<Membership> {
    let Some((s, t, path)) = prepare(g, r, w)? else {
        return Ok(Membership::NotAMatch);
    };
    let q = Query::new(g, r);
    let dist = q.distances_to_accept(t);
    Ok(match dominator(&q, s, t, &dist, &path) {
        Some(p) => Membership::Dominated(g.path_to_walk(s, &p)),
        None => Membership::Member,
    })
}

/// Whether `w ∈ MM(g, r, src(w), tgt(w))`, with a dominating match as
/// certificate when it is not.
pub fn mm_membership(g: &Graph, r: &RegExp, w: &Walk) -> Result<Membership> {
    membership(g, r, w, mm_dominator)
}

/// Whether `w ∈ SMS(g, r, src(w), tgt(w))`.
pub fn sms_membership(g: &Graph, r: &RegExp, w: &Walk) -> Result<Membership> {
    membership(g, r, w, sms_dominator)
}
