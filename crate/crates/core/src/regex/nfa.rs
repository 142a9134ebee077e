use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::RegExp;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transition {
    pub from: usize,
    pub label: String,
    pub to: usize,
}

/// An automaton without ε-transitions.
///
/// Built by the position (Glushkov) construction: state 0 is initial and
/// state `p >= 1` stands for the `p`-th atom occurrence of the source
/// expression, so every transition entering `p` carries that atom's label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nfa {
    pub state_count: usize,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub transitions: Vec<Transition>,
}

struct Positions {
    labels: Vec<String>,
    follow: Vec<BTreeSet<usize>>,
}

struct Summary {
    nullable: bool,
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
}

impl Positions {
    fn visit(&mut self, r: &RegExp) -> Summary {
        match r {
            RegExp::Epsilon => Summary {
                nullable: true,
                first: BTreeSet::new(),
                last: BTreeSet::new(),
            },
            RegExp::Atom(label) => {
                self.labels.push(label.clone());
                self.follow.push(BTreeSet::new());
                let p = self.labels.len();
                Summary {
                    nullable: false,
                    first: BTreeSet::from([p]),
                    last: BTreeSet::from([p]),
                }
            }
            RegExp::Star(inner) => {
                let s = self.visit(inner);
                for &p in &s.last {
                    self.follow[p - 1].extend(s.first.iter().copied());
                }
                Summary { nullable: true, ..s }
            }
            RegExp::Concat(l, r) => {
                let ls = self.visit(l);
                let rs = self.visit(r);
                for &p in &ls.last {
                    self.follow[p - 1].extend(rs.first.iter().copied());
                }
                let mut first = ls.first;
                if ls.nullable {
                    first.extend(rs.first.iter().copied());
                }
                let mut last = rs.last;
                if rs.nullable {
                    last.extend(ls.last.iter().copied());
                }
                Summary {
                    nullable: ls.nullable && rs.nullable,
                    first,
                    last,
                }
            }
            RegExp::Union(l, r) => {
                let ls = self.visit(l);
                let rs = self.visit(r);
                Summary {
                    nullable: ls.nullable || rs.nullable,
                    first: &ls.first | &rs.first,
                    last: &ls.last | &rs.last,
                }
            }
        }
    }
}

impl Nfa {
    pub fn glushkov(r: &RegExp) -> Self {
        let mut pos = Positions {
            labels: Vec::new(),
            follow: Vec::new(),
        };
        let summary = pos.visit(r);
        let mut transitions = Vec::new();
        for &p in &summary.first {
            transitions.push(Transition {
                from: 0,
                label: pos.labels[p - 1].clone(),
                to: p,
            });
        }
        for (i, follow) in pos.follow.iter().enumerate() {
            for &q in follow {
                transitions.push(Transition {
                    from: i + 1,
                    label: pos.labels[q - 1].clone(),
                    to: q,
                });
            }
        }
        transitions.sort();
        let mut finals = summary.last;
        if summary.nullable {
            finals.insert(0);
        }
        Nfa {
            state_count: pos.labels.len() + 1,
            initial: 0,
            finals,
            transitions,
        }
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals.contains(&state)
    }

    fn step(&self, current: &BTreeSet<usize>, label: &str) -> BTreeSet<usize> {
        self.transitions
            .iter()
            .filter(|t| t.label == label && current.contains(&t.from))
            .map(|t| t.to)
            .collect()
    }

    /// Whether the automaton accepts `word`.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut current = BTreeSet::from([self.initial]);
        for letter in word {
            current = self.step(&current, letter.as_ref());
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.is_final(*q))
    }

    /// One accepting run (the state sequence, `word.len() + 1` long), if any.
    pub fn accepting_run<S: AsRef<str>>(&self, word: &[S]) -> Option<Vec<usize>> {
        // Forward layers, then walk back from any final state.
        let mut layers = vec![BTreeSet::from([self.initial])];
        for letter in word {
            let next = self.step(layers.last().unwrap(), letter.as_ref());
            if next.is_empty() {
                return None;
            }
            layers.push(next);
        }
        let mut state = *layers.last().unwrap().iter().find(|q| self.is_final(**q))?;
        let mut run = vec![state];
        for (i, letter) in word.iter().enumerate().rev() {
            state = self
                .transitions
                .iter()
                .find(|t| t.to == state && t.label == letter.as_ref() && layers[i].contains(&t.from))
                .map(|t| t.from)
                .expect("layer predecessor exists");
            run.push(state);
        }
        run.reverse();
        Some(run)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn word(s: &str) -> Vec<String> {
        s.chars().map(String::from).collect()
    }

    #[test]
    fn glushkov_state_count() {
        let n = parse("ab+a").unwrap().to_nfa();
        assert_eq!(n.state_count, 4);
        for t in &n.transitions {
            assert!(t.from < n.state_count && t.to < n.state_count);
            assert!(!t.label.is_empty());
        }
    }

    #[test]
    fn epsilon_automaton() {
        let n = RegExp::Epsilon.to_nfa();
        assert_eq!(n.state_count, 1);
        assert!(n.is_final(n.initial));
        assert!(n.transitions.is_empty());
        assert!(n.accepts::<&str>(&[]));
        assert!(!n.accepts(&["a"]));
    }

    #[test]
    fn star_unrolls() {
        let n = parse("a*").unwrap().to_nfa();
        for w in ["", "a", "aa"] {
            assert!(n.accepts(&word(w)), "{w:?}");
        }
        assert!(!n.accepts(&word("b")));
    }

    #[test]
    fn r1_membership() {
        let n = parse("0(1+2+313)*0").unwrap().to_nfa();
        assert!(n.accepts(&word("00")));
        assert!(n.accepts(&word("03130")));
        assert!(!n.accepts(&word("030")));
        assert!(!n.accepts(&word("0")));
    }

    #[test]
    fn primed_labels_are_single_letters() {
        let n = parse("414'").unwrap().to_nfa();
        assert!(n.accepts(&["4", "1", "4'"]));
        assert!(!n.accepts(&["4", "1", "4"]));
    }

    #[test]
    fn accepting_run_is_consistent() {
        let n = parse("(ab)*a").unwrap().to_nfa();
        let w = word("aba");
        let run = n.accepting_run(&w).unwrap();
        assert_eq!(run.len(), 4);
        assert_eq!(run[0], n.initial);
        assert!(n.is_final(run[3]));
        for (i, l) in w.iter().enumerate() {
            assert!(n
                .transitions
                .iter()
                .any(|t| t.from == run[i] && t.to == run[i + 1] && &t.label == l));
        }
        assert!(n.accepting_run(&word("ab")).is_none());
    }
}
