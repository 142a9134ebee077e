use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Color, ColorMap, Edge};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Step {
    pub label: String,
    pub tgt: String,
}

/// A walk `v0 -a1-> v1 ... -ak-> vk`, stored as its source and step list.
///
/// Equality is structural. The ordering is the canonical output order:
/// length first, then source, then the step sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Walk {
    pub source: String,
    pub steps: Vec<Step>,
}

impl Walk {
    /// The length-0 walk at `source`.
    pub fn new(source: impl Into<String>) -> Self {
        Walk {
            source: source.into(),
            steps: Vec::new(),
        }
    }

    /// Builder-style append of one step.
    pub fn then(mut self, label: impl Into<String>, tgt: impl Into<String>) -> Self {
        self.push(label, tgt);
        self
    }

    pub fn push(&mut self, label: impl Into<String>, tgt: impl Into<String>) {
        self.steps.push(Step {
            label: label.into(),
            tgt: tgt.into(),
        });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn target(&self) -> &str {
        self.steps.last().map_or(&self.source, |s| &s.tgt)
    }

    /// The label word `a1 ... ak`.
    pub fn labels(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.label.as_str()).collect()
    }

    /// The vertex sequence `v0 ... vk`.
    pub fn vertices(&self) -> Vec<&str> {
        std::iter::once(self.source.as_str())
            .chain(self.steps.iter().map(|s| s.tgt.as_str()))
            .collect()
    }

    /// The edges in walk order, with repetitions.
    pub fn edges(&self) -> Vec<Edge> {
        let mut prev = self.source.as_str();
        self.steps
            .iter()
            .map(|s| {
                let e = Edge::new(prev, &s.label, &s.tgt);
                prev = &s.tgt;
                e
            })
            .collect()
    }

    pub fn concat(&self, other: &Walk) -> Result<Walk> {
        if self.target() != other.source {
            return Err(Error::EndpointMismatch {
                left: self.target().to_string(),
                right: other.source.clone(),
            });
        }
        let mut out = self.clone();
        out.steps.extend(other.steps.iter().cloned());
        Ok(out)
    }

    pub fn edge_bag(&self) -> EdgeBag {
        let mut bag = EdgeBag::default();
        for e in self.edges() {
            bag.add(e, 1);
        }
        bag
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().into_iter().collect()
    }

    /// The multiset of edges whose label is red under `colors`.
    pub fn red_edge_bag(&self, colors: &ColorMap) -> Result<EdgeBag> {
        let mut bag = EdgeBag::default();
        for e in self.edges() {
            match colors.get(&e.label) {
                Some(Color::Red) => bag.add(e, 1),
                Some(_) => {}
                None => return Err(Error::MissingColor(e.label.clone())),
            }
        }
        Ok(bag)
    }

    /// A walk with no repeated edge.
    pub fn is_trail(&self) -> bool {
        let edges = self.edges();
        let set: BTreeSet<&Edge> = edges.iter().collect();
        set.len() == edges.len()
    }

    /// Whether `factor` occurs as a contiguous sub-walk.
    pub fn has_factor(&self, factor: &Walk) -> bool {
        let verts = self.vertices();
        let n = factor.len();
        if n > self.len() {
            return false;
        }
        (0..=self.len() - n).any(|i| {
            verts[i] == factor.source
                && self.steps[i..i + n]
                    .iter()
                    .zip(&factor.steps)
                    .all(|(a, b)| a == b)
        })
    }
}

impl Ord for Walk {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.steps.cmp(&other.steps))
    }
}

impl PartialOrd for Walk {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)?;
        for s in &self.steps {
            write!(f, " -{}-> {}", s.label, s.tgt)?;
        }
        Ok(())
    }
}

/// A finite multiset of edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeBag(BTreeMap<Edge, usize>);

impl EdgeBag {
    pub fn add(&mut self, e: Edge, n: usize) {
        if n > 0 {
            *self.0.entry(e).or_insert(0) += n;
        }
    }

    pub fn count(&self, e: &Edge) -> usize {
        self.0.get(e).copied().unwrap_or(0)
    }

    /// Total multiplicity.
    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn support(&self) -> BTreeSet<Edge> {
        self.0.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, usize)> {
        self.0.iter().map(|(e, n)| (e, *n))
    }

    /// `self ⊆ other` as multisets.
    pub fn is_subbag_of(&self, other: &EdgeBag) -> bool {
        self.0.iter().all(|(e, n)| other.count(e) >= *n)
    }

    /// `self ⊊ other` as multisets.
    pub fn is_strict_subbag_of(&self, other: &EdgeBag) -> bool {
        self.total() < other.total() && self.is_subbag_of(other)
    }

    /// Multiset sum.
    pub fn sum(&self, other: &EdgeBag) -> EdgeBag {
        let mut out = self.clone();
        for (e, n) in other.iter() {
            out.add(e.clone(), n);
        }
        out
    }
}

/// The order `≺`: strict inclusion of edge multisets.
pub fn bag_lt(w1: &Walk, w2: &Walk) -> bool {
    w1.len() < w2.len() && w1.edge_bag().is_subbag_of(&w2.edge_bag())
}

/// The order `⊏`: strict inclusion of edge sets, with length breaking ties
/// between equal sets.
pub fn set_lt(w1: &Walk, w2: &Walk) -> bool {
    let s1 = w1.edge_set();
    let s2 = w2.edge_set();
    if s1 == s2 {
        w1.len() < w2.len()
    } else {
        s1.is_subset(&s2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sats() -> Walk {
        Walk::new("s").then("a", "t").then("b", "s").then("a", "t")
    }

    #[test]
    fn concat_examples() {
        let e = Walk::new("s");
        let a = Walk::new("s").then("a", "t");
        assert_eq!(e.concat(&a).unwrap(), a);
        let b = Walk::new("t").then("b", "s");
        assert_eq!(
            a.concat(&b).unwrap(),
            Walk::new("s").then("a", "t").then("b", "s")
        );
        assert_eq!(
            b.concat(&b).unwrap_err(),
            Error::EndpointMismatch {
                left: "s".into(),
                right: "t".into()
            }
        );
    }

    #[test]
    fn bags_and_sets() {
        let w = sats();
        let bag = w.edge_bag();
        assert_eq!(bag.count(&Edge::new("s", "a", "t")), 2);
        assert_eq!(bag.count(&Edge::new("t", "b", "s")), 1);
        assert_eq!(bag.total(), 3);
        assert_eq!(
            w.edge_set(),
            BTreeSet::from([Edge::new("s", "a", "t"), Edge::new("t", "b", "s")])
        );
    }

    #[test]
    fn red_bag_filters_and_reports_missing_colors() {
        let w = sats();
        let colors = ColorMap::from([("a".into(), Color::Red), ("b".into(), Color::Blue)]);
        let red = w.red_edge_bag(&colors).unwrap();
        assert_eq!(red.total(), 2);
        let partial = ColorMap::from([("a".into(), Color::Red)]);
        assert_eq!(
            w.red_edge_bag(&partial).unwrap_err(),
            Error::MissingColor("b".into())
        );
    }

    #[test]
    fn trails() {
        assert!(Walk::new("v").is_trail());
        assert!(!sats().is_trail());
        assert!(Walk::new("s").then("a", "t").then("b", "s").is_trail());
    }

    #[test]
    fn multiset_order_examples() {
        let e1 = Walk::new("v").then("e", "v");
        let e2 = Walk::new("v").then("e", "v").then("e", "v");
        let ef = Walk::new("v").then("e", "v").then("f", "v");
        assert!(bag_lt(&e1, &e2));
        assert!(!bag_lt(&e2, &ef) && !bag_lt(&ef, &e2));
        for w in [&e1, &e2, &ef] {
            assert!(!bag_lt(w, w));
        }
    }

    #[test]
    fn set_order_examples() {
        let e = Walk::new("v").then("e", "v");
        let ef = Walk::new("v").then("e", "v").then("f", "v");
        let ee = Walk::new("v").then("e", "v").then("e", "v");
        assert!(set_lt(&e, &ef));
        assert!(set_lt(&e, &ee));
        assert!(!set_lt(&e, &e));
        // ee and ef: {e} ⊊ {e, f}
        assert!(set_lt(&ee, &ef));
    }

    #[test]
    fn factors() {
        let w = sats();
        assert!(w.has_factor(&Walk::new("t").then("b", "s")));
        assert!(w.has_factor(&Walk::new("s")));
        assert!(!w.has_factor(&Walk::new("t").then("a", "s")));
    }

    #[test]
    fn canonical_order_is_length_first() {
        let long = Walk::new("a").then("a", "a").then("a", "a");
        let short = Walk::new("z").then("z", "z");
        assert!(short < long);
        assert_eq!(sats().to_string(), "s -a-> t -b-> s -a-> t");
    }
}
