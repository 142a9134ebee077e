use super::gadgets::pos;
use super::{Literal, ReductionInstance, Valuation, Variant};
use crate::error::{Error, Result};
use crate::graph::Walk;

/// `x1, nx1, x2, nx2, ..., xk, nxk`: the order of the start and end chains.
fn chain(k: usize) -> Vec<String> {
    (1..=k)
        .flat_map(|v| [format!("x{v}"), format!("nx{v}")])
        .collect()
}

fn start_prefix(k: usize, upto: &str) -> Walk {
    let mut w = Walk::new("Source").then("0", "start_x1");
    for side in chain(k).iter().skip(1) {
        if w.target() == format!("start_{upto}") {
            break;
        }
        w.push("2", format!("start_{side}"));
    }
    w
}

fn end_suffix(w: &mut Walk, k: usize, from: &str) {
    let order = chain(k);
    let at = order.iter().position(|s| s == from).expect("side exists");
    for side in &order[at + 1..] {
        w.push("2", format!("end_{side}"));
    }
    w.push("0", "Target");
}

fn check_literal(ri: &ReductionInstance, alpha: Literal, j: usize) -> Result<()> {
    if alpha.var == 0 || alpha.var > ri.k() {
        return Err(Error::IndexOutOfRange(format!(
            "variable {} not in 1..={}",
            alpha.var,
            ri.k()
        )));
    }
    if j == 0 || j > ri.l() {
        return Err(Error::IndexOutOfRange(format!(
            "clause {j} not in 1..={}",
            ri.l()
        )));
    }
    Ok(())
}

/// The `R2` match through side `alpha` that steps back once at position `j`.
///
/// After the back step it continues along the side to `alpha^ℓ`, which is
/// what the following `5`-edge needs.
pub fn canonical_r2_walk(ri: &ReductionInstance, alpha: Literal, j: usize) -> Result<Walk> {
    ri.require(Variant::Enum)?;
    check_literal(ri, alpha, j)?;
    let side = alpha.side();
    let mut w = start_prefix(ri.k(), &side);
    w.push("5", format!("LS{side}"));
    w.push("5", pos(&side, 0));
    for i in 1..=j {
        w.push("1", pos(&side, i));
    }
    w.push("4", pos(&side, j - 1));
    for i in j..=ri.l() {
        w.push("1", pos(&side, i));
    }
    w.push("5", format!("S{side}R"));
    w.push("5", format!("end_{side}"));
    end_suffix(&mut w, ri.k(), &side);
    Ok(w)
}

/// The SMS-variant analogue: the back step crosses to the other side at
/// `j - 1` and the `4'`-edge returns.
pub fn canonical_sms_r2_walk(ri: &ReductionInstance, alpha: Literal, j: usize) -> Result<Walk> {
    ri.require(Variant::Sms)?;
    check_literal(ri, alpha, j)?;
    let side = alpha.side();
    let other = alpha.negated().side();
    let mut w = start_prefix(ri.k(), &side);
    w.push("5", format!("LS{side}"));
    w.push("5", pos(&side, 0));
    for i in 1..=j {
        w.push("1", pos(&side, i));
    }
    w.push("4", pos(&other, j - 1));
    w.push("1", pos(&other, j));
    w.push("4'", pos(&side, j));
    for i in j + 1..=ri.l() {
        w.push("1", pos(&side, i));
    }
    w.push("5", format!("S{side}R"));
    w.push("5", format!("end_{side}"));
    end_suffix(&mut w, ri.k(), &side);
    Ok(w)
}

/// The single `R3` match, a closed walk at `Target` through every side.
pub fn canonical_r3_walk(ri: &ReductionInstance) -> Result<Walk> {
    ri.require(Variant::Enum)?;
    let (k, l) = (ri.k(), ri.l());
    let mut w = Walk::new("Target").then("9", "Sx0R");
    for neg in [false, true] {
        let prefix = if neg { "nx" } else { "x" };
        w.push("8", format!("LS{prefix}1"));
        for v in 1..=k {
            let side = format!("{prefix}{v}");
            w.push("7", format!("start_{side}"));
            w.push("5", format!("LS{side}"));
            w.push("5", pos(&side, 0));
            for j in 1..=l {
                w.push("6", pos(&side, j));
                w.push("4", pos(&side, j - 1));
                w.push("6", pos(&side, j));
            }
            w.push("5", format!("S{side}R"));
            w.push("5", format!("end_{side}"));
            w.push("7", format!("S{side}R"));
            w.push("8", format!("LS{prefix}{}", v + 1));
        }
        if !neg {
            w.push("8", "Snx0R");
        }
    }
    w.push("X", "Target");
    Ok(w)
}

/// The `R1` match that takes the negative side of `x{v}` iff
/// `negative[v - 1]`, and crosses clause `j` through literal
/// `picks[j - 1]` (an index into the normalized clause).
pub fn r1_match(ri: &ReductionInstance, negative: &[bool], picks: &[usize]) -> Result<Walk> {
    let (k, l) = (ri.k(), ri.l());
    if negative.len() != k || picks.len() != l || picks.iter().any(|&p| p > 2) {
        return Err(Error::IndexOutOfRange(format!(
            "need {k} side choices and {l} literal picks in 0..3"
        )));
    }
    let mut w = start_prefix(k, &format!("nx{k}"));
    w.push("1", "x0R");
    w.push("1", "Lx1");
    for v in 1..=k {
        let side = Literal::new(v, !negative[v - 1]).side();
        for j in 0..=l {
            w.push("1", pos(&side, j));
        }
        w.push("1", format!("x{v}R"));
        if v < k {
            w.push("2", format!("Lx{}", v + 1));
        }
    }
    w.push("1", format!("Lx{}", k + 1));
    w.push("1", "C0R");
    w.push("1", "LC1");
    for j in 1..=l {
        let side = ri.sat.clause(j)[picks[j - 1]].side();
        w.push("3", pos(&side, j - 1));
        w.push("1", pos(&side, j));
        w.push("3", format!("C{j}R"));
        w.push("2", format!("LC{}", j + 1));
    }
    w.push("2", "end_x1");
    end_suffix(&mut w, k, "x1");
    Ok(w)
}

/// What an `R1` match commits to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R1Choices {
    /// Whether the negative side of `x{v}` is traversed, by `v - 1`.
    pub negative: Vec<bool>,
    /// The literal each clause is crossed through.
    pub literals: Vec<Literal>,
}

pub fn r1_choices(ri: &ReductionInstance, w: &Walk) -> Result<R1Choices> {
    if w.source != ri.source
        || w.target() != ri.target
        || !ri.graph.validate_walk(w)
        || !ri.r1().to_nfa().accepts(&w.labels())
    {
        return Err(Error::NotAnR1Match);
    }
    let edges = w.edges();
    let mut negative = Vec::with_capacity(ri.k());
    for v in 1..=ri.k() {
        let entry = format!("Lx{v}");
        let into = |side: String| {
            edges
                .iter()
                .any(|e| e.src == entry && e.label == "1" && e.tgt == pos(&side, 0))
        };
        match (into(format!("x{v}")), into(format!("nx{v}"))) {
            (true, false) => negative.push(false),
            (false, true) => negative.push(true),
            _ => return Err(Error::NotAnR1Match),
        }
    }
    let mut literals = Vec::with_capacity(ri.l());
    for j in 1..=ri.l() {
        let entry = format!("LC{j}");
        let crossing = ri.sat.clause(j).iter().copied().filter(|lit| {
            edges
                .iter()
                .any(|e| e.src == entry && e.label == "3" && e.tgt == pos(&lit.side(), j - 1))
        });
        let found: Vec<Literal> = crossing.collect();
        match found.as_slice() {
            [lit] => literals.push(*lit),
            _ => return Err(Error::NotAnR1Match),
        }
    }
    Ok(R1Choices { negative, literals })
}

/// `f_w`: `x{v}` is true exactly when `w` runs along its negative side.
pub fn valuation_of(ri: &ReductionInstance, w: &Walk) -> Result<Valuation> {
    Ok(Valuation(r1_choices(ri, w)?.negative))
}

/// Whether every clause is crossed through a literal on the side the walk
/// traverses in that literal's variable gadget.
pub fn clause_sides_agree(ri: &ReductionInstance, w: &Walk) -> Result<bool> {
    let c = r1_choices(ri, w)?;
    Ok(c.literals
        .iter()
        .all(|lit| c.negative[lit.var - 1] != lit.positive))
}

/// The membership-variant match that uses every red edge exactly once.
pub(crate) fn membership_witness(ri: &ReductionInstance) -> Walk {
    let (k, l) = (ri.k(), ri.l());
    let mut w = start_prefix(k, &format!("nx{k}"));
    w.push("1", "x0R");
    w.push("1", "Lx1");
    for v in 1..=k {
        for side in [format!("x{v}"), format!("nx{v}")] {
            for j in 0..=l {
                w.push("1", pos(&side, j));
            }
            w.push("1", format!("x{v}R"));
            if side.starts_with('x') {
                w.push("G", format!("Lx{v}"));
            }
        }
        if v < k {
            w.push("2", format!("Lx{}", v + 1));
        }
    }
    w.push("1", format!("Lx{}", k + 1));
    w.push("1", "C0R");
    w.push("1", "LC1");
    for j in 1..=l {
        for (n, lit) in ri.sat.clause(j).iter().enumerate() {
            if n > 0 {
                w.push("G", format!("LC{j}"));
            }
            let side = lit.side();
            w.push("3", pos(&side, j - 1));
            w.push("G", pos(&side, j));
            w.push("3", format!("C{j}R"));
        }
        w.push("2", format!("LC{}", j + 1));
    }
    w.push("2", "end_x1");
    end_suffix(&mut w, k, "x1");
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{build_enum_instance, build_membership_instance, SatInstance};

    fn ri() -> ReductionInstance {
        build_enum_instance(&SatInstance::new(3, &[vec![1, 2, 3]]).unwrap())
    }

    #[test]
    fn canonical_walks_validate() {
        let ri = ri();
        for v in 1..=3 {
            for positive in [true, false] {
                let w = canonical_r2_walk(&ri, Literal::new(v, positive), 1).unwrap();
                assert!(ri.graph.validate_walk(&w), "{w}");
                assert!(ri.r2().to_nfa().accepts(&w.labels()));
                assert!(!w.is_trail());
                assert_eq!(w.len(), 2 * 3 + 1 + 7);
            }
        }
        let w3 = canonical_r3_walk(&ri).unwrap();
        assert!(ri.graph.validate_walk(&w3));
        assert_eq!(w3.source, "Target");
        assert_eq!(w3.target(), "Target");
    }

    #[test]
    fn r2_walk_repeats_the_first_step_when_j_is_one() {
        let ri = ri();
        let w = canonical_r2_walk(&ri, Literal::new(1, true), 1).unwrap();
        let e = crate::graph::Edge::new("x1^0", "1", "x1^1");
        assert_eq!(w.edge_bag().count(&e), 2);
        assert!(canonical_r2_walk(&ri, Literal::new(1, true), 2).is_err());
        assert!(canonical_r2_walk(&ri, Literal::new(4, true), 1).is_err());
    }

    #[test]
    fn r1_matches_and_valuations() {
        let ri = ri();
        let w = r1_match(&ri, &[false, true, false], &[1]).unwrap();
        assert!(ri.graph.validate_walk(&w), "{w}");
        assert_eq!(w.len(), 3 + 21 + 4 + 5);
        let v = valuation_of(&ri, &w).unwrap();
        assert_eq!(v.0, vec![false, true, false]);
        // clause crossed through x2, side x2 not traversed
        assert!(w.is_trail());
        assert!(!clause_sides_agree(&ri, &w).unwrap());
        let all_pos = r1_match(&ri, &[false; 3], &[0]).unwrap();
        assert_eq!(valuation_of(&ri, &all_pos).unwrap().0, vec![false; 3]);
        assert!(!all_pos.is_trail());
        assert_eq!(
            valuation_of(&ri, &canonical_r3_walk(&ri).unwrap()).unwrap_err(),
            Error::NotAnR1Match
        );
    }

    #[test]
    fn witness_covers_red_edges_once() {
        let i = SatInstance::new(3, &[vec![1, -2, 3], vec![-1, 2, -3]]).unwrap();
        let m = build_membership_instance(&i);
        let w = m.witness.clone().unwrap();
        assert!(m.graph.validate_walk(&w), "{w}");
        assert!(m.r2().to_nfa().accepts(&w.labels()));
        let red = w.red_edge_bag(&m.colors).unwrap();
        let red_edges: Vec<_> = m.graph.edges().filter(|e| e.label != "G").collect();
        assert_eq!(red.total(), red_edges.len());
        assert!(red_edges.iter().all(|e| red.count(e) == 1));
    }
}
