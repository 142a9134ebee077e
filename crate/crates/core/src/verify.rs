//! Executable checks of the hardness construction on concrete formulas.
//!
//! Each check enumerates the relevant walk sets exhaustively and compares
//! them against what the construction predicts. Reports are JSON-friendly
//! and, apart from the timing fields, a pure function of the formula.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::engine::{MatchLength, Query};
use crate::error::{Error, Result};
use crate::graph::Color;
use crate::reduction::{
    build_enum_instance, build_membership_instance, build_sms_instance, canonical_r2_walk, canonical_r3_walk,
    canonical_sms_r2_walk, clause_sides_agree, r1_choices, sat_oracle, valuation_of, Literal,
    ReductionInstance, SatInstance, Variant,
};
use crate::semantics::{bag_key, mm_dominator, mm_paths, mm_stream, set_key, sms_paths, sorted_includes};

/// Names of the checks, in report order.
pub const CHECKS: [&str; 9] = [
    "r1_properties",
    "r2_census",
    "r3_unique",
    "trail_iff_sat",
    "red_inclusion",
    "equiv_three_way",
    "end_to_end",
    "membership_variant",
    "sms_variant",
];

/// Largest `k` and `ℓ` accepted without `force`.
pub const DEFAULT_SIZE_LIMIT: usize = 4;

/// Measured R1 length minus `kℓ + 7k + 4ℓ + 3`. The two extra edges are the
/// glue edges `start_nx{k} -1-> x0R` and `x0R -1-> Lx1` on the way in, where
/// the nominal formula counts one.
pub const R1_LENGTH_OFFSET: usize = 2;

pub fn nominal_r1_length(k: usize, l: usize) -> usize {
    k * l + 7 * k + 4 * l + 3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub k: usize,
    pub l: usize,
    /// Clauses as DIMACS literals.
    pub clauses: Vec<Vec<i64>>,
    pub variants: Vec<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceDescriptor {
    pub fn of(i: &SatInstance) -> Self {
        InstanceDescriptor {
            k: i.k(),
            l: i.l(),
            clauses: i
                .clauses()
                .iter()
                .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
                .collect(),
            variants: vec![Variant::Enum, Variant::Membership, Variant::Sms],
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub measured: Value,
    pub expected: Value,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance: InstanceDescriptor,
    pub checks: Vec<CheckRecord>,
    pub verdict: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    /// A fixed-width table, one row per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let d = &self.instance;
        let _ = writeln!(out, "instance: k={} l={} clauses={:?}", d.k, d.l, d.clauses);
        let _ = writeln!(out, "{:<20} {:<6} {:>10}  measured", "check", "result", "ms");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<20} {:<6} {:>10.1}  {}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.elapsed_ms,
                c.measured
            );
        }
        let _ = writeln!(out, "verdict: {}", if self.verdict { "PASS" } else { "FAIL" });
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    /// Skip the `k, ℓ ≤ 4` guard.
    pub force: bool,
    /// Run only these checks (all when `None`).
    pub only: Option<Vec<String>>,
    /// Recorded in the report.
    pub seed: Option<u64>,
}

/// Everything the checks share about one formula, built on demand.
struct Context {
    i: SatInstance,
    ri: ReductionInstance,
    sat: bool,
    r1: Option<Vec<Vec<usize>>>,
    r2: Option<Vec<Vec<usize>>>,
    w3: Option<Vec<usize>>,
}

/// Every match, when the match set is finite.
fn all_matches(q: &Query, s: usize, t: usize) -> Vec<Vec<usize>> {
    match q.match_length(s, t) {
        MatchLength::Empty => Vec::new(),
        MatchLength::Finite(n) => q.match_paths(s, t, n),
        MatchLength::Infinite => panic!("construction produced an infinite match set"),
    }
}

impl Context {
    fn new(i: &SatInstance) -> Result<Self> {
        Ok(Context {
            i: i.clone(),
            ri: build_enum_instance(i),
            sat: sat_oracle(i)?,
            r1: None,
            r2: None,
            w3: None,
        })
    }

    fn endpoints(&self) -> (usize, usize) {
        let g = &self.ri.graph;
        (g.vertex_id("Source").unwrap(), g.vertex_id("Target").unwrap())
    }

    fn easy(&self) -> usize {
        2 * self.i.k() * self.i.l()
    }

    fn r1(&mut self) -> &[Vec<usize>] {
        if self.r1.is_none() {
            let (s, t) = self.endpoints();
            let r1 = self.ri.r1();
            self.r1 = Some(all_matches(&Query::new(&self.ri.graph, &r1), s, t));
        }
        self.r1.as_deref().unwrap()
    }

    fn r2(&mut self) -> &[Vec<usize>] {
        if self.r2.is_none() {
            let (s, t) = self.endpoints();
            let r2 = self.ri.r2();
            self.r2 = Some(all_matches(&Query::new(&self.ri.graph, &r2), s, t));
        }
        self.r2.as_deref().unwrap()
    }

    fn w3(&mut self) -> &[usize] {
        if self.w3.is_none() {
            let w = canonical_r3_walk(&self.ri).unwrap();
            self.w3 = Some(self.ri.graph.walk_to_path(&w).unwrap().1);
        }
        self.w3.as_deref().unwrap()
    }

    fn canonical_r2(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for v in 1..=self.i.k() {
            for positive in [true, false] {
                for j in 1..=self.i.l() {
                    let w = canonical_r2_walk(&self.ri, Literal::new(v, positive), j).unwrap();
                    out.push(self.ri.graph.walk_to_path(&w).unwrap().1);
                }
            }
        }
        out.sort();
        out
    }

    fn red_only(&self, path: &[usize]) -> bool {
        let g = &self.ri.graph;
        path.iter()
            .all(|&e| self.ri.colors[g.label_name(g.edge_idx(e).label)] == Color::Red)
    }

    fn census(&self) -> usize {
        (1usize << self.i.k()) * 3usize.pow(self.i.l() as u32)
    }

    fn is_trail(path: &[usize]) -> bool {
        set_key(path).len() == path.len()
    }
}

fn r1_properties(cx: &mut Context) -> (bool, Value, Value) {
    let (k, l) = (cx.i.k(), cx.i.l());
    let census = cx.census();
    let r1 = cx.r1().to_vec();
    let (s, _) = cx.endpoints();
    let mut lengths = BTreeSet::new();
    let mut red = true;
    let mut structured = true;
    for p in &r1 {
        lengths.insert(p.len());
        red &= cx.red_only(p);
        // endpoints, one side per variable gadget, one crossing per clause
        structured &= r1_choices(&cx.ri, &cx.ri.graph.path_to_walk(s, p)).is_ok();
    }
    let nominal = nominal_r1_length(k, l);
    let expected_len = nominal + R1_LENGTH_OFFSET;
    let passed = r1.len() == census
        && red
        && structured
        && lengths.len() == 1
        && lengths.first() == Some(&expected_len);
    (
        passed,
        json!({
            "count": r1.len(),
            "lengths": lengths,
            "red_only": red,
            "one_side_per_variable_one_crossing_per_clause": structured,
        }),
        json!({
            "count": census,
            "length": expected_len,
            "nominal_formula": nominal,
            "offset": R1_LENGTH_OFFSET,
        }),
    )
}

fn r2_census(cx: &mut Context) -> (bool, Value, Value) {
    let (k, l) = (cx.i.k(), cx.i.l());
    let canonical = cx.canonical_r2();
    let mut found = cx.r2().to_vec();
    found.sort();
    let bound = 4 * k + l + 6;
    let max_len = found.iter().map(Vec::len).max().unwrap_or(0);
    // every R2 match is ≺-minimal among R2 matches
    let bags: Vec<Vec<usize>> = found.iter().map(|p| bag_key(p)).collect();
    let antichain = bags.iter().enumerate().all(|(a, x)| {
        bags.iter()
            .enumerate()
            .all(|(b, y)| a == b || !(x.len() < y.len() && sorted_includes(x, y)))
    });
    let equal = found == canonical;
    let passed = equal && found.len() == cx.easy() && max_len < bound && antichain;
    (
        passed,
        json!({
            "count": found.len(),
            "equals_canonical_set": equal,
            "max_length": max_len,
            "all_minimal": antichain,
        }),
        json!({"count": cx.easy(), "length_below": bound}),
    )
}

fn r3_unique(cx: &mut Context) -> (bool, Value, Value) {
    let g = &cx.ri.graph;
    let t = g.vertex_id("Target").unwrap();
    let r3 = cx.ri.r3().expect("enum variant has R3");
    let found = all_matches(&Query::new(g, &r3), t, t);
    let canonical = cx.w3().to_vec();
    let g = &cx.ri.graph;
    let mut counts = vec![0usize; g.edge_count()];
    for &e in &canonical {
        counts[e] += 1;
    }
    let mut multiplicities = BTreeSet::new();
    for (e, &n) in counts.iter().enumerate() {
        if cx.ri.colors[g.label_name(g.edge_idx(e).label)] != Color::Red {
            multiplicities.insert(n);
        }
    }
    let unique = found.len() == 1 && found[0] == canonical;
    let passed = unique && multiplicities.iter().all(|m| (1..=2).contains(m));
    (
        passed,
        json!({
            "count": found.len(),
            "equals_canonical": unique,
            "blue_green_multiplicities": multiplicities,
        }),
        json!({"count": 1, "blue_green_multiplicities": [1, 2]}),
    )
}

fn trail_iff_sat(cx: &mut Context) -> (bool, Value, Value) {
    let (s, t) = cx.endpoints();
    let r1 = cx.ri.r1();
    let trails = Query::new(&cx.ri.graph, &r1).trail_paths(s, t);
    let satisfying = trails.iter().all(|p| {
        let w = cx.ri.graph.path_to_walk(s, p);
        valuation_of(&cx.ri, &w).is_ok_and(|v| cx.i.satisfied_by(&v))
    });
    let passed = !trails.is_empty() == cx.sat && satisfying;
    (
        passed,
        json!({"trails": trails.len(), "valuations_satisfy": satisfying}),
        json!({"trail_exists": cx.sat}),
    )
}

fn red_inclusion(cx: &mut Context) -> (bool, Value, Value) {
    let census = cx.census();
    let r1 = cx.r1().to_vec();
    let g = &cx.ri.graph;
    let red_key = |p: &[usize]| -> Vec<usize> {
        let reds: Vec<usize> = p
            .iter()
            .copied()
            .filter(|&e| cx.ri.colors[g.label_name(g.edge_idx(e).label)] == Color::Red)
            .collect();
        bag_key(&reds)
    };
    let easy: Vec<Vec<usize>> = cx.canonical_r2().iter().map(|p| red_key(p)).collect();
    let mut agree = 0usize;
    for p in &r1 {
        let mine = red_key(p);
        let covered = easy.iter().any(|e| sorted_includes(e, &mine));
        if covered == !Context::is_trail(p) {
            agree += 1;
        }
    }
    (
        agree == r1.len() && r1.len() == census,
        json!({"r1_matches": r1.len(), "agreeing": agree}),
        json!({"r1_matches": census, "agreeing": census}),
    )
}

fn equiv_three_way(cx: &mut Context) -> (bool, Value, Value) {
    let census = cx.census();
    let (s, t) = cx.endpoints();
    let w3 = cx.w3().to_vec();
    let r2_bags: Vec<Vec<usize>> = cx.r2().iter().map(|p| bag_key(p)).collect();
    let r1 = cx.r1().to_vec();
    let r = cx.ri.r();
    let q = Query::new(&cx.ri.graph, &r);
    let dist = q.distances_to_accept(t);
    let mut agree = 0usize;
    let mut non_trails = 0usize;
    for p in &r1 {
        let mut whole = p.clone();
        whole.extend_from_slice(&w3);
        let bag = bag_key(&whole);
        let not_trail = !Context::is_trail(p);
        let below = r2_bags
            .iter()
            .any(|b| b.len() < bag.len() && sorted_includes(b, &bag));
        let excluded = mm_dominator(&q, s, t, &dist, &whole).is_some();
        non_trails += usize::from(not_trail);
        if not_trail == below && below == excluded {
            agree += 1;
        }
    }
    (
        agree == r1.len() && r1.len() == census,
        json!({"r1_matches": r1.len(), "agreeing": agree, "not_trails": non_trails}),
        json!({"r1_matches": census, "agreeing": census}),
    )
}

fn end_to_end(cx: &mut Context) -> (bool, Value, Value) {
    let (s, t) = cx.endpoints();
    let easy = cx.easy();
    let r1 = cx.ri.r1();
    let trails = Query::new(&cx.ri.graph, &r1).trail_paths(s, t).len();
    let r = cx.ri.r();
    let mm = mm_paths(&Query::new(&cx.ri.graph, &r), s, t);
    let found: BTreeSet<&Vec<usize>> = mm.paths.iter().collect();
    let canonical = cx.canonical_r2();
    let easy_present = canonical.iter().all(|p| found.contains(p));
    let count = mm.paths.len();
    let relation = if cx.sat { count > easy } else { count == easy };
    (
        relation && easy_present && count == easy + trails,
        json!({
            "mm_count": count,
            "candidates": mm.examined,
            "easy_present": easy_present,
        }),
        json!({
            "mm_count": if cx.sat { format!("> {easy}") } else { easy.to_string() },
            "mm_count_exact": easy + trails,
            "satisfiable": cx.sat,
        }),
    )
}

fn membership_variant(cx: &mut Context) -> (bool, Value, Value) {
    let m = build_membership_instance(&cx.i);
    let w2 = m.witness.clone().expect("membership witness");
    let red = w2.red_edge_bag(&m.colors).ok();
    let red_edges: Vec<_> = m
        .graph
        .edges()
        .filter(|e| m.colors[&e.label] == Color::Red)
        .collect();
    let covers =
        red.is_some_and(|b| b.total() == red_edges.len() && red_edges.iter().all(|e| b.count(e) == 1));
    let member = crate::semantics::mm_membership(&m.graph, &m.r(), &w2)
        .map(|x| x.is_member())
        .unwrap_or(false);
    // The shortest R2 match, against the witness length.
    let (s, t) = (
        m.graph.vertex_id("Source").unwrap(),
        m.graph.vertex_id("Target").unwrap(),
    );
    let q2 = Query::new(&m.graph, &m.r2());
    let shortest = q2.distances_to_accept(t)[q2.start(s)].unwrap_or(0);
    (
        member == !cx.sat && covers,
        json!({
            "witness_member": member,
            "witness_covers_red_edges_once": covers,
            "witness_length": w2.len(),
            "shortest_r2_match_length": shortest,
        }),
        json!({"witness_member": !cx.sat, "witness_covers_red_edges_once": true}),
    )
}

fn sms_variant(cx: &mut Context) -> (bool, Value, Value) {
    let sri = build_sms_instance(&cx.i);
    let easy = cx.easy();
    let g = &sri.graph;
    let (s, t) = (g.vertex_id("Source").unwrap(), g.vertex_id("Target").unwrap());

    let mut canonical = Vec::new();
    for v in 1..=cx.i.k() {
        for positive in [true, false] {
            for j in 1..=cx.i.l() {
                let w = canonical_sms_r2_walk(&sri, Literal::new(v, positive), j).unwrap();
                canonical.push(g.walk_to_path(&w).unwrap().1);
            }
        }
    }
    canonical.sort();
    let mut census = all_matches(&Query::new(g, &sri.r2()), s, t);
    census.sort();
    let census_ok = census == canonical;

    let sms = sms_paths(&Query::new(g, &sri.r()), s, t);
    let sets: Vec<Vec<usize>> = sms.paths.iter().map(|p| set_key(p)).collect();
    let antichain = (0..sets.len()).all(|a| {
        (0..sets.len()).all(|b| {
            a == b
                || !(if sets[a] == sets[b] {
                    sms.paths[a].len() < sms.paths[b].len()
                } else {
                    sorted_includes(&sets[a], &sets[b])
                })
        })
    });
    let easy_present = {
        let found: BTreeSet<&Vec<usize>> = sms.paths.iter().collect();
        canonical.iter().all(|p| found.contains(p))
    };
    // R1 matches that cross each clause on a traversed side
    let r1 = all_matches(&Query::new(g, &sri.r1()), s, t);
    let agreeing = r1
        .iter()
        .filter(|p| clause_sides_agree(&sri, &g.path_to_walk(s, p)).unwrap_or(false))
        .count();
    let count = sms.paths.len();
    let passed = census_ok && antichain && easy_present && (count == easy) == !cx.sat;
    (
        passed,
        json!({
            "r2_census": census.len(),
            "r2_equals_canonical": census_ok,
            "sms_count": count,
            "antichain": antichain,
            "easy_present": easy_present,
            "side_consistent_r1_matches": agreeing,
        }),
        json!({
            "r2_census": easy,
            "sms_count": if cx.sat { format!("> {easy}") } else { easy.to_string() },
            "satisfiable": cx.sat,
        }),
    )
}

type Check = fn(&mut Context) -> (bool, Value, Value);

fn check_fn(name: &str) -> Option<Check> {
    Some(match name {
        "r1_properties" => r1_properties,
        "r2_census" => r2_census,
        "r3_unique" => r3_unique,
        "trail_iff_sat" => trail_iff_sat,
        "red_inclusion" => red_inclusion,
        "equiv_three_way" => equiv_three_way,
        "end_to_end" => end_to_end,
        "membership_variant" => membership_variant,
        "sms_variant" => sms_variant,
        _ => return None,
    })
}

fn size_guard(i: &SatInstance, force: bool) -> Result<()> {
    if !force && (i.k() > DEFAULT_SIZE_LIMIT || i.l() > DEFAULT_SIZE_LIMIT) {
        return Err(Error::InstanceTooLarge(format!(
            "k={} l={} exceeds {DEFAULT_SIZE_LIMIT}; pass force to run anyway",
            i.k(),
            i.l()
        )));
    }
    Ok(())
}

/// Run the selected checks on `i`.
pub fn check_all(i: &SatInstance, opts: &CheckOptions) -> Result<VerificationReport> {
    size_guard(i, opts.force)?;
    let names: Vec<&str> = match &opts.only {
        None => CHECKS.to_vec(),
        Some(list) => {
            if let Some(bad) = list.iter().find(|n| check_fn(n).is_none()) {
                return Err(Error::Format(format!("unknown check {bad:?}")));
            }
            CHECKS
                .iter()
                .copied()
                .filter(|c| list.iter().any(|n| n == c))
                .collect()
        }
    };
    let mut cx = Context::new(i)?;
    let mut checks = Vec::with_capacity(names.len());
    for name in names {
        let started = Instant::now();
        let (passed, measured, expected) = check_fn(name).unwrap()(&mut cx);
        checks.push(CheckRecord {
            name: name.to_string(),
            passed,
            measured,
            expected,
            // whole microseconds survive a JSON round trip exactly
            elapsed_ms: started.elapsed().as_micros() as f64 / 1e3,
        });
    }
    let mut instance = InstanceDescriptor::of(i);
    instance.seed = opts.seed;
    Ok(VerificationReport {
        verdict: checks.iter().all(|c| c.passed),
        instance,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayPoint {
    /// 1-based output index.
    pub index: usize,
    /// Candidates examined before this output.
    pub examined: usize,
    /// Candidates examined since the previous output.
    pub gap: usize,
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayProfile {
    /// The number of outputs that come for free (`2ℓk`).
    pub easy: usize,
    pub points: Vec<DelayPoint>,
    pub candidates: usize,
    /// Gap before output `easy + 1`, if there is one.
    pub hard_gap: Option<usize>,
}

/// Stream `MM(q, s, t)` and record when each output appears.
pub fn delay_profile_for(q: &Query, s: usize, t: usize, easy: usize) -> DelayProfile {
    let started = Instant::now();
    let mut points: Vec<DelayPoint> = Vec::new();
    let candidates = mm_stream(q, s, t, |_, examined| {
        let prev = points.last().map_or(0, |p| p.examined);
        points.push(DelayPoint {
            index: points.len() + 1,
            examined,
            gap: examined - prev,
            elapsed_us: started.elapsed().as_micros() as u64,
        });
    });
    let hard_gap = points.get(easy).map(|p| p.gap);
    DelayProfile {
        easy,
        points,
        candidates,
        hard_gap,
    }
}

/// Delay profile of `MM(G_I, R, Source, Target)`.
pub fn delay_profile(i: &SatInstance, force: bool) -> Result<DelayProfile> {
    size_guard(i, force)?;
    let ri = build_enum_instance(i);
    let g = &ri.graph;
    let r = ri.r();
    let q = Query::new(g, &r);
    let (s, t) = (g.vertex_id("Source").unwrap(), g.vertex_id("Target").unwrap());
    Ok(delay_profile_for(&q, s, t, 2 * i.k() * i.l()))
}
