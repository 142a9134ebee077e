//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here goes through the position automaton or the product graph:
//! language membership is decided with Brzozowski derivatives and the
//! minimal-walk oracle is a layered search over (vertex, derivative, bag).

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use walkmin_core::{bag_lt, set_lt, Edge, Graph, RegExp, Walk};

/// Regular expressions normalized up to associativity, commutativity and
/// idempotence of `+`, which keeps the set of derivatives finite.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum D {
    Empty,
    Eps,
    Atom(String),
    Cat(Box<D>, Box<D>),
    Alt(BTreeSet<D>),
    Star(Box<D>),
}

fn cat(a: D, b: D) -> D {
    match (a, b) {
        (D::Empty, _) | (_, D::Empty) => D::Empty,
        (D::Eps, x) | (x, D::Eps) => x,
        // right-nest so equal languages get equal terms more often
        (D::Cat(a1, a2), b) => cat(*a1, cat(*a2, b)),
        (a, b) => D::Cat(Box::new(a), Box::new(b)),
    }
}

fn alt(a: D, b: D) -> D {
    let mut set = BTreeSet::new();
    for x in [a, b] {
        match x {
            D::Empty => {}
            D::Alt(xs) => set.extend(xs),
            x => {
                set.insert(x);
            }
        }
    }
    match set.len() {
        0 => D::Empty,
        1 => set.into_iter().next().unwrap(),
        _ => D::Alt(set),
    }
}

fn star(a: D) -> D {
    match a {
        D::Empty | D::Eps => D::Eps,
        D::Star(x) => D::Star(x),
        x => D::Star(Box::new(x)),
    }
}

impl D {
    pub fn from_regexp(r: &RegExp) -> D {
        match r {
            RegExp::Epsilon => D::Eps,
            RegExp::Atom(a) => D::Atom(a.clone()),
            RegExp::Star(x) => star(D::from_regexp(x)),
            RegExp::Concat(a, b) => cat(D::from_regexp(a), D::from_regexp(b)),
            RegExp::Union(a, b) => alt(D::from_regexp(a), D::from_regexp(b)),
        }
    }

    pub fn nullable(&self) -> bool {
        match self {
            D::Empty | D::Atom(_) => false,
            D::Eps | D::Star(_) => true,
            D::Cat(a, b) => a.nullable() && b.nullable(),
            D::Alt(xs) => xs.iter().any(D::nullable),
        }
    }

    pub fn derive(&self, c: &str) -> D {
        match self {
            D::Empty | D::Eps => D::Empty,
            D::Atom(a) => {
                if a == c {
                    D::Eps
                } else {
                    D::Empty
                }
            }
            D::Cat(a, b) => {
                let left = cat(a.derive(c), (**b).clone());
                if a.nullable() {
                    alt(left, b.derive(c))
                } else {
                    left
                }
            }
            D::Alt(xs) => xs.iter().fold(D::Empty, |acc, x| alt(acc, x.derive(c))),
            D::Star(x) => cat(x.derive(c), D::Star(x.clone())),
        }
    }

    pub fn matches<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut d = self.clone();
        for c in word {
            d = d.derive(c.as_ref());
            if d == D::Empty {
                return false;
            }
        }
        d.nullable()
    }
}

pub fn derivative_accepts<S: AsRef<str>>(r: &RegExp, word: &[S]) -> bool {
    D::from_regexp(r).matches(word)
}

pub const LABELS: [&str; 3] = ["a", "b", "c"];

/// A random expression with exactly `atoms` atom occurrences over `labels`.
pub fn random_regex(rng: &mut impl Rng, labels: &[&str], atoms: usize) -> RegExp {
    let base = if atoms == 0 {
        RegExp::Epsilon
    } else if atoms == 1 {
        RegExp::atom(*labels.choose(rng).unwrap())
    } else {
        let left = rng.gen_range(1..atoms);
        let (l, r) = (
            random_regex(rng, labels, left),
            random_regex(rng, labels, atoms - left),
        );
        if rng.gen_bool(0.5) {
            RegExp::concat(l, r)
        } else {
            RegExp::union(l, r)
        }
    };
    if rng.gen_bool(0.25) {
        RegExp::star(base)
    } else {
        base
    }
}

/// A random graph on `v0..` with at most `max_edges` distinct edges.
pub fn random_graph(rng: &mut impl Rng, vertices: usize, labels: &[&str], max_edges: usize) -> Graph {
    let names: Vec<String> = (0..vertices).map(|i| format!("v{i}")).collect();
    let edges: BTreeSet<Edge> = (0..rng.gen_range(0..=max_edges))
        .map(|_| {
            Edge::new(
                names.choose(rng).unwrap().clone(),
                *labels.choose(rng).unwrap(),
                names.choose(rng).unwrap().clone(),
            )
        })
        .collect();
    Graph::new(names.clone(), labels.iter().map(|l| l.to_string()), edges).unwrap()
}

/// One semantics test case: a graph, an expression and an endpoint pair.
pub struct Case {
    pub graph: Graph,
    pub regex: RegExp,
    pub source: String,
    pub target: String,
}

pub fn random_case(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let labels = &LABELS[..rng.gen_range(1..=3)];
    let graph = random_graph(&mut rng, n, labels, 8);
    let atoms = rng.gen_range(1..=6);
    let regex = random_regex(&mut rng, labels, atoms);
    let source = format!("v{}", rng.gen_range(0..n));
    let target = format!("v{}", rng.gen_range(0..n));
    Case {
        graph,
        regex,
        source,
        target,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Order {
    /// strict sub-multiset of edges
    Bag,
    /// strict subset of edges, or equal set and shorter
    Set,
}

type Key = (usize, usize, Vec<u8>);
/// key -> every (parent key, edge) reaching it; the root has no parent
type Layer = HashMap<Key, Vec<(Option<Key>, usize)>>;

/// The minimal matches from `s` to `t` among all matches of length at most
/// `bound`, found without any product-state reasoning.
///
/// Walks are grown one edge at a time. A node is keyed by its vertex, its
/// residual expression (a derivative) and its edge counts, and remembers
/// every (parent, edge) that reaches it, so distinct walks sharing a key are
/// all recoverable. Extending a prefix only adds edges, so once a match
/// with a smaller-or-equal footprint is on record the prefix can stop
/// growing: every extension would be dominated.
pub fn brute_force_minimal(
    g: &Graph,
    r: &RegExp,
    s: &str,
    t: &str,
    bound: usize,
    order: Order,
) -> BTreeSet<Walk> {
    let (Some(s), Some(t)) = (g.vertex_id(s), g.vertex_id(t)) else {
        return BTreeSet::new();
    };
    let m = g.edge_count();

    let mut derivs: Vec<D> = vec![D::from_regexp(r)];
    let mut intern: HashMap<D, usize> = HashMap::from([(derivs[0].clone(), 0)]);
    let mut step_memo: HashMap<(usize, usize), usize> = HashMap::new();
    let mut step = |d: usize, label: usize, derivs: &mut Vec<D>| -> usize {
        *step_memo.entry((d, label)).or_insert_with(|| {
            let next = derivs[d].derive(g.label_name(label));
            *intern.entry(next.clone()).or_insert_with(|| {
                derivs.push(next);
                derivs.len() - 1
            })
        })
    };
    let dead = |d: &D| *d == D::Empty;

    let mut layers: Vec<Layer> = Vec::new();
    let root: Key = (s, 0, vec![0; m]);
    layers.push(HashMap::from([(root, vec![(None, usize::MAX)])]));
    // footprints of matches on record, as edge-count vectors
    let mut recorded: Vec<Vec<u8>> = Vec::new();
    let mut accepted: Vec<(usize, Key)> = Vec::new();

    let covers = |small: &[u8], big: &[u8]| small.iter().zip(big).all(|(a, b)| a <= b);
    let footprint = |counts: &[u8]| -> Vec<u8> {
        match order {
            Order::Bag => counts.to_vec(),
            Order::Set => counts.iter().map(|&c| c.min(1)).collect(),
        }
    };

    for len in 0..=bound {
        let keys: Vec<Key> = layers[len].keys().cloned().collect();
        for key in &keys {
            if key.0 == t && derivs[key.1].nullable() {
                recorded.push(footprint(&key.2));
                accepted.push((len, key.clone()));
            }
        }
        if len == bound {
            break;
        }
        let mut next: Layer = HashMap::new();
        for key in keys {
            let fp = footprint(&key.2);
            if recorded.iter().any(|r| covers(r, &fp)) {
                continue;
            }
            for &e in g.out_edges(key.0) {
                let edge = g.edge_idx(e);
                let d = step(key.1, edge.label, &mut derivs);
                if dead(&derivs[d]) {
                    continue;
                }
                let mut counts = key.2.clone();
                counts[e] += 1;
                next.entry((edge.tgt, d, counts))
                    .or_default()
                    .push((Some(key.clone()), e));
            }
        }
        layers.push(next);
    }

    // Reconstruct every walk behind each accepted key.
    let mut walks: Vec<Walk> = Vec::new();
    for (len, key) in accepted {
        let mut suffixes: Vec<Vec<usize>> = Vec::new();
        collect_paths(&layers, len, &key, &mut Vec::new(), &mut suffixes);
        for p in suffixes {
            walks.push(g.path_to_walk(s, &p));
        }
    }
    let lt = |a: &Walk, b: &Walk| match order {
        Order::Bag => bag_lt(a, b),
        Order::Set => set_lt(a, b),
    };
    walks
        .iter()
        .filter(|w| !walks.iter().any(|o| lt(o, w)))
        .cloned()
        .collect()
}

fn collect_paths(
    layers: &[Layer],
    len: usize,
    key: &Key,
    suffix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for (parent, e) in &layers[len][key] {
        match parent {
            None => {
                let mut p = suffix.clone();
                p.reverse();
                out.push(p);
            }
            Some(pk) => {
                suffix.push(*e);
                collect_paths(layers, len - 1, pk, suffix, out);
                suffix.pop();
            }
        }
    }
}

/// Every walk of length at most `bound` from `s` whose label word the
/// derivative oracle accepts, ending anywhere in `targets`.
pub fn brute_force_matches(g: &Graph, r: &RegExp, s: &str, t: &str, bound: usize) -> BTreeSet<Walk> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![(Walk::new(s), D::from_regexp(r))];
    for len in 0..=bound {
        let mut next = Vec::new();
        for (w, d) in frontier {
            if w.target() == t && d.nullable() {
                out.insert(w.clone());
            }
            if len == bound {
                continue;
            }
            let v = g.vertex_id(w.target()).unwrap();
            for &e in g.out_edges(v) {
                let edge = g.edge(e);
                let nd = d.derive(&edge.label);
                if nd != D::Empty {
                    next.push((w.clone().then(edge.label, edge.tgt), nd));
                }
            }
        }
        frontier = next;
    }
    out
}
