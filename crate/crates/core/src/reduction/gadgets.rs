use std::collections::BTreeSet;

use super::walks::membership_witness;
use super::{
    Expressions, ReductionInstance, SatInstance, Variant, R1, R2, R2_MEMBERSHIP, R2_SMS, R3, R3_SMS,
};
use crate::graph::{Color, ColorMap, Edge, Graph};

const RED: [&str; 4] = ["0", "1", "2", "3"];
const BLUE: [&str; 2] = ["4", "5"];
const GREEN: [&str; 5] = ["6", "7", "8", "9", "X"];

pub(crate) fn pos(side: &str, j: usize) -> String {
    format!("{side}^{j}")
}

fn sides(i: usize) -> [String; 2] {
    [format!("x{i}"), format!("nx{i}")]
}

#[derive(Default)]
struct Builder {
    edges: BTreeSet<Edge>,
}

impl Builder {
    fn add(&mut self, src: impl Into<String>, label: &str, tgt: impl Into<String>) {
        self.edges.insert(Edge::new(src, label, tgt));
    }

    fn finish(self, colors: &ColorMap) -> Graph {
        let vertices: BTreeSet<String> = self
            .edges
            .iter()
            .flat_map(|e| [e.src.clone(), e.tgt.clone()])
            .collect();
        Graph::new(vertices, colors.keys().cloned(), self.edges).expect("gadget edges are declared")
    }
}

fn palette(extra: &[(&str, Color)]) -> ColorMap {
    let mut m = ColorMap::new();
    for l in RED {
        m.insert(l.into(), Color::Red);
    }
    for l in BLUE {
        m.insert(l.into(), Color::Blue);
    }
    for l in GREEN {
        m.insert(l.into(), Color::Green);
    }
    for (l, c) in extra {
        m.insert((*l).into(), *c);
    }
    m
}

fn enum_edges(i: &SatInstance) -> Builder {
    let (k, l) = (i.k(), i.l());
    let mut b = Builder::default();

    // start gadget
    b.add("Source", "0", "start_x1");
    for v in 1..=k {
        b.add(format!("start_x{v}"), "2", format!("start_nx{v}"));
        if v < k {
            b.add(format!("start_nx{v}"), "2", format!("start_x{}", v + 1));
        }
        for side in sides(v) {
            b.add(format!("start_{side}"), "5", format!("LS{side}"));
            b.add(format!("LS{side}"), "7", format!("start_{side}"));
        }
    }

    // glue: every edge between two gadgets is drawn here
    b.add(format!("start_nx{k}"), "1", "x0R");
    b.add("x0R", "1", "Lx1");
    b.add(format!("x{k}R"), "1", format!("Lx{}", k + 1));
    b.add(format!("Lx{}", k + 1), "1", "C0R");
    b.add("C0R", "1", "LC1");
    b.add(format!("C{l}R"), "2", format!("LC{}", l + 1));
    b.add(format!("LC{}", l + 1), "2", "end_x1");
    b.add("Target", "9", "Sx0R");
    b.add("Sx0R", "8", "LSx1");
    b.add(format!("Sx{k}R"), "8", format!("LSx{}", k + 1));
    b.add(format!("LSx{}", k + 1), "8", "Snx0R");
    b.add("Snx0R", "8", "LSnx1");
    b.add(format!("Snx{k}R"), "8", format!("LSnx{}", k + 1));
    b.add(format!("LSnx{}", k + 1), "X", "Target");

    // variable gadgets
    for v in 1..=k {
        for side in sides(v) {
            b.add(format!("Lx{v}"), "1", pos(&side, 0));
            for j in 1..=l {
                b.add(pos(&side, j - 1), "1", pos(&side, j));
                b.add(pos(&side, j - 1), "6", pos(&side, j));
                b.add(pos(&side, j), "4", pos(&side, j - 1));
            }
            b.add(pos(&side, l), "1", format!("x{v}R"));
            b.add(format!("LS{side}"), "5", pos(&side, 0));
            b.add(pos(&side, l), "5", format!("S{side}R"));
            b.add(format!("S{side}R"), "5", format!("end_{side}"));
            b.add(format!("end_{side}"), "7", format!("S{side}R"));
        }
        if v < k {
            b.add(format!("x{v}R"), "2", format!("Lx{}", v + 1));
            b.add(format!("Sx{v}R"), "8", format!("LSx{}", v + 1));
            b.add(format!("Snx{v}R"), "8", format!("LSnx{}", v + 1));
        }
    }

    // clause gadgets, one 3-edge pair per literal occurrence
    for j in 1..=l {
        if j < l {
            b.add(format!("C{j}R"), "2", format!("LC{}", j + 1));
        }
        for lit in i.clause(j) {
            let side = lit.side();
            b.add(format!("LC{j}"), "3", pos(&side, j - 1));
            b.add(pos(&side, j), "3", format!("C{j}R"));
        }
    }

    // end gadget
    for v in 1..=k {
        b.add(format!("end_x{v}"), "2", format!("end_nx{v}"));
        if v < k {
            b.add(format!("end_nx{v}"), "2", format!("end_x{}", v + 1));
        }
    }
    b.add(format!("end_nx{k}"), "0", "Target");
    b
}

/// The main construction: `R = R1·R3 + R2` from `Source` to `Target`.
pub fn build_enum_instance(i: &SatInstance) -> ReductionInstance {
    let colors = palette(&[]);
    let graph = enum_edges(i).finish(&colors);
    ReductionInstance {
        sat: i.clone(),
        variant: Variant::Enum,
        graph,
        colors,
        expressions: Expressions {
            r1: R1.into(),
            r2: R2.into(),
            r3: Some(R3.into()),
            r: format!("{R1}{R3}+{R2}"),
        },
        source: "Source".into(),
        target: "Target".into(),
        witness: None,
    }
}

/// The red part of the main graph plus `G`-edges closing each variable
/// gadget, each clause gadget and each literal occurrence into circuits.
pub fn build_membership_instance(i: &SatInstance) -> ReductionInstance {
    let (k, l) = (i.k(), i.l());
    let colors: ColorMap = RED
        .iter()
        .map(|r| (r.to_string(), Color::Red))
        .chain([("G".to_string(), Color::Green)])
        .collect();
    let red = enum_edges(i);
    let mut b = Builder::default();
    for e in red.edges.into_iter().filter(|e| colors.contains_key(&e.label)) {
        b.edges.insert(e);
    }
    for v in 1..=k {
        b.add(format!("x{v}R"), "G", format!("Lx{v}"));
    }
    for j in 1..=l {
        b.add(format!("C{j}R"), "G", format!("LC{j}"));
        for lit in i.clause(j) {
            let side = lit.side();
            b.add(pos(&side, j - 1), "G", pos(&side, j));
        }
    }
    let graph = b.finish(&colors);
    let mut ri = ReductionInstance {
        sat: i.clone(),
        variant: Variant::Membership,
        graph,
        colors,
        expressions: Expressions {
            r1: R1.into(),
            r2: R2_MEMBERSHIP.into(),
            r3: None,
            r: format!("{R1}+{R2_MEMBERSHIP}"),
        },
        source: "Source".into(),
        target: "Target".into(),
        witness: None,
    };
    ri.witness = Some(membership_witness(&ri));
    ri
}

/// The main graph with each 4-edge sent across to the other side and a
/// blue `4'`-edge added back, so that `R2` matches use one edge of the
/// opposite side.
pub fn build_sms_instance(i: &SatInstance) -> ReductionInstance {
    let (k, l) = (i.k(), i.l());
    let colors = palette(&[("4'", Color::Blue)]);
    let mut b = enum_edges(i);
    for v in 1..=k {
        let [x, nx] = sides(v);
        for j in 1..=l {
            for (this, other) in [(&x, &nx), (&nx, &x)] {
                b.edges.remove(&Edge::new(pos(this, j), "4", pos(this, j - 1)));
                b.add(pos(this, j), "4", pos(other, j - 1));
                b.add(pos(other, j), "4'", pos(this, j));
            }
        }
    }
    let graph = b.finish(&colors);
    ReductionInstance {
        sat: i.clone(),
        variant: Variant::Sms,
        graph,
        colors,
        expressions: Expressions {
            r1: R1.into(),
            r2: R2_SMS.into(),
            r3: Some(R3_SMS.into()),
            r: format!("{R1}{R3_SMS}+{R2_SMS}"),
        },
        source: "Source".into(),
        target: "Target".into(),
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_clause() -> SatInstance {
        SatInstance::new(3, &[vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn vertex_count_formula() {
        for (k, l) in [(3, 1), (3, 2), (4, 3), (5, 5)] {
            let i = SatInstance::seeded(k, l, 1).unwrap();
            let ri = build_enum_instance(&i);
            assert_eq!(ri.graph.vertex_count(), 2 * k * l + 12 * k + 2 * l + 10);
        }
        assert_eq!(build_enum_instance(&one_clause()).graph.vertex_count(), 54);
    }

    #[test]
    fn labels_and_colors() {
        let ri = build_enum_instance(&one_clause());
        assert_eq!(ri.graph.labels().len(), 11);
        assert_eq!(ri.colors["X"], Color::Green);
        let sms = build_sms_instance(&one_clause());
        assert!(sms.graph.label_id("4'").is_some());
        assert_eq!(sms.colors["4'"], Color::Blue);
        let m = build_membership_instance(&one_clause());
        assert_eq!(m.graph.labels(), ["0", "1", "2", "3", "G"]);
        assert!(m.witness.is_some());
    }

    #[test]
    fn star_heights() {
        for ri in [
            build_enum_instance(&one_clause()),
            build_sms_instance(&one_clause()),
        ] {
            for r in [ri.r1(), ri.r2(), ri.r()].into_iter().chain(ri.r3()) {
                assert_eq!(r.star_height(), 1);
            }
        }
        // 11*G11* sits under the outer star
        let m = build_membership_instance(&one_clause());
        assert_eq!(m.r1().star_height(), 1);
        assert_eq!(m.r2().star_height(), 2);
    }

    #[test]
    fn sms_rewires_every_four_edge() {
        let ri = build_sms_instance(&one_clause());
        let fours: Vec<Edge> = ri.graph.edges().filter(|e| e.label == "4").collect();
        assert_eq!(fours.len(), 2 * 3);
        for e in fours {
            let from_neg = e.src.starts_with("nx");
            assert_ne!(from_neg, e.tgt.starts_with("nx"), "{e}");
        }
    }
}
