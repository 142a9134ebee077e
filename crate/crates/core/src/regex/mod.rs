//! Regular expressions over string-token alphabets.
//!
//! Concrete syntax:
//!
//! ```text
//! EXPR   := TERM ('+' TERM)*
//! TERM   := FACTOR ('.'? FACTOR)*
//! FACTOR := BASE '*'*
//! BASE   := ATOM | '_' | '(' EXPR ')'
//! ATOM   := [A-Za-z0-9] "'"*
//! ```
//!
//! `_` is the empty word. Whitespace between tokens is ignored. Binary
//! operators nest to the right, so `abc` is `a·(b·c)`.

mod nfa;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

pub use nfa::{Nfa, Transition};
pub use parser::parse;

/// Abstract syntax of a regular expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegExp {
    Epsilon,
    Atom(String),
    Star(Box<RegExp>),
    Concat(Box<RegExp>, Box<RegExp>),
    Union(Box<RegExp>, Box<RegExp>),
}

impl RegExp {
    pub fn atom(label: impl Into<String>) -> Self {
        RegExp::Atom(label.into())
    }

    pub fn star(inner: RegExp) -> Self {
        RegExp::Star(Box::new(inner))
    }

    pub fn concat(left: RegExp, right: RegExp) -> Self {
        RegExp::Concat(Box::new(left), Box::new(right))
    }

    pub fn union(left: RegExp, right: RegExp) -> Self {
        RegExp::Union(Box::new(left), Box::new(right))
    }

    /// Maximum nesting depth of `*` nodes.
    pub fn star_height(&self) -> usize {
        match self {
            RegExp::Epsilon | RegExp::Atom(_) => 0,
            RegExp::Star(inner) => 1 + inner.star_height(),
            RegExp::Concat(l, r) | RegExp::Union(l, r) => l.star_height().max(r.star_height()),
        }
    }

    /// Number of atom occurrences (positions of the Glushkov automaton).
    pub fn atom_count(&self) -> usize {
        match self {
            RegExp::Epsilon => 0,
            RegExp::Atom(_) => 1,
            RegExp::Star(inner) => inner.atom_count(),
            RegExp::Concat(l, r) | RegExp::Union(l, r) => l.atom_count() + r.atom_count(),
        }
    }

    /// Whether the empty word belongs to the language.
    pub fn nullable(&self) -> bool {
        match self {
            RegExp::Epsilon | RegExp::Star(_) => true,
            RegExp::Atom(_) => false,
            RegExp::Concat(l, r) => l.nullable() && r.nullable(),
            RegExp::Union(l, r) => l.nullable() || r.nullable(),
        }
    }

    /// The set of labels occurring in the expression.
    pub fn alphabet(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut BTreeSet<String>) {
        match self {
            RegExp::Epsilon => {}
            RegExp::Atom(a) => {
                out.insert(a.clone());
            }
            RegExp::Star(inner) => inner.collect_labels(out),
            RegExp::Concat(l, r) | RegExp::Union(l, r) => {
                l.collect_labels(out);
                r.collect_labels(out);
            }
        }
    }

    /// Compile to the ε-free position automaton.
    pub fn to_nfa(&self) -> Nfa {
        Nfa::glushkov(self)
    }
}

impl fmt::Display for RegExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegExp::Epsilon => f.write_str("_"),
            RegExp::Atom(a) => f.write_str(a),
            RegExp::Star(inner) => match **inner {
                RegExp::Concat(..) | RegExp::Union(..) => write!(f, "({inner})*"),
                _ => write!(f, "{inner}*"),
            },
            RegExp::Concat(l, r) => {
                match **l {
                    RegExp::Concat(..) | RegExp::Union(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                match **r {
                    RegExp::Union(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
            RegExp::Union(l, r) => {
                match **l {
                    RegExp::Union(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                write!(f, "+{r}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> RegExp {
        RegExp::atom(s)
    }

    #[test]
    fn star_height_examples() {
        assert_eq!(a("a").star_height(), 0);
        assert_eq!(parse("0(1+2+313)*0").unwrap().star_height(), 1);
        assert_eq!(RegExp::star(RegExp::star(a("a"))).star_height(), 2);
    }

    #[test]
    fn display_round_trips_left_nested_trees() {
        let left = RegExp::concat(RegExp::concat(a("a"), a("b")), a("c"));
        assert_eq!(left.to_string(), "(ab)c");
        assert_eq!(parse(&left.to_string()).unwrap(), left);

        let u = RegExp::union(RegExp::union(a("a"), a("b")), RegExp::Epsilon);
        assert_eq!(parse(&u.to_string()).unwrap(), u);

        let s = RegExp::star(RegExp::star(RegExp::concat(a("4'"), a("1"))));
        assert_eq!(s.to_string(), "(4'1)**");
        assert_eq!(parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn alphabet_and_counts() {
        let r = parse("9(8+755+6464'+557)*X").unwrap();
        assert_eq!(r.atom_count(), 13);
        let alpha: Vec<_> = r.alphabet().into_iter().collect();
        assert_eq!(alpha, ["4", "4'", "5", "6", "7", "8", "9", "X"]);
        assert!(!r.nullable());
        assert!(parse("a*").unwrap().nullable());
    }
}
