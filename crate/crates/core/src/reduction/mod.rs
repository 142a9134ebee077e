//! 3-CNF formulas and the gadget graphs that encode them.
//!
//! Three constructions share one vertex naming scheme:
//!
//! | vertex            | role                                              |
//! |-------------------|---------------------------------------------------|
//! | `Source`, `Target`| distinguished endpoints                           |
//! | `start_x{i}`, `start_nx{i}` / `end_x{i}`, `end_nx{i}` | start and end chains |
//! | `Lx{i}`, `x{i}R`  | entry and exit of variable gadget `i`             |
//! | `x{i}^{j}`, `nx{i}^{j}` | positive / negative side, `j = 0..=ℓ`       |
//! | `LSx{i}`, `Sx{i}R`, `LSnx{i}`, `Snx{i}R` | side entries for blue/green walks |
//! | `LC{j}`, `C{j}R`  | entry and exit of clause gadget `j`               |
//!
//! plus the glue vertices `x0R`, `Lx{k+1}`, `C0R`, `LC{ℓ+1}`, `Sx0R`,
//! `LSx{k+1}`, `Snx0R`, `LSnx{k+1}`.

mod dimacs;
mod gadgets;
mod walks;

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColorMap, Graph, Walk};
use crate::regex::{parse, RegExp};

pub use dimacs::parse_dimacs;
pub use gadgets::{build_enum_instance, build_membership_instance, build_sms_instance};
pub use walks::{
    canonical_r2_walk, canonical_r3_walk, canonical_sms_r2_walk, clause_sides_agree, r1_choices, r1_match,
    valuation_of, R1Choices,
};

pub const R1: &str = "0(1+2+313)*0";
pub const R2: &str = "02*551*41*552*0";
pub const R3: &str = "9(8+755+646+557)*X";
pub const R2_MEMBERSHIP: &str = "0(11*G11*+2+3G3G3G3G3G3)*0";
pub const R2_SMS: &str = "02*551*414'1*552*0";
pub const R3_SMS: &str = "9(8+755+6464'+557)*X";

/// The brute-force oracle walks all `2^k` valuations.
pub const SAT_ORACLE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn from_dimacs(lit: i64) -> Self {
        Literal::new(lit.unsigned_abs() as usize, lit > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn negated(self) -> Self {
        Literal::new(self.var, !self.positive)
    }

    /// The side of the variable gadget this literal names: `x{i}` or `nx{i}`.
    pub fn side(self) -> String {
        if self.positive {
            format!("x{}", self.var)
        } else {
            format!("nx{}", self.var)
        }
    }

    pub fn holds(self, v: &Valuation) -> bool {
        v.value(self.var) == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "¬x{}", self.var)
        }
    }
}

/// Truth values for `x1..xk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Valuation(pub Vec<bool>);

impl Valuation {
    /// Value of `x{var}` (1-based).
    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    /// The `bits`-th valuation: bit `i - 1` gives `x{i}`.
    pub fn from_bits(k: usize, bits: u64) -> Self {
        Valuation((0..k).map(|i| bits >> i & 1 == 1).collect())
    }
}

/// A 3-CNF formula whose clauses each mention three distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SatInstance {
    k: usize,
    clauses: Vec<[Literal; 3]>,
}

impl SatInstance {
    /// Validate and normalize: literals are deduplicated and sorted by variable.
    pub fn new(k: usize, clauses: &[Vec<i64>]) -> Result<Self> {
        if k == 0 {
            return Err(Error::Dimacs {
                line: 0,
                message: "at least one variable is required".into(),
            });
        }
        if clauses.is_empty() {
            return Err(Error::Dimacs {
                line: 0,
                message: "at least one clause is required".into(),
            });
        }
        let mut out = Vec::with_capacity(clauses.len());
        for (c, lits) in clauses.iter().enumerate() {
            let clause = c + 1;
            let mut norm: Vec<Literal> = Vec::new();
            for &lit in lits {
                let l = Literal::from_dimacs(lit);
                if l.var == 0 || l.var > k {
                    return Err(Error::VariableOutOfRange { var: l.var, k });
                }
                norm.push(l);
            }
            norm.sort();
            norm.dedup();
            if let Some(w) = norm.windows(2).find(|w| w[0].var == w[1].var) {
                return Err(Error::TautologicalClause {
                    clause,
                    var: w[0].var,
                });
            }
            match <[Literal; 3]>::try_from(norm.as_slice()) {
                Ok(arr) => out.push(arr),
                Err(_) => {
                    return Err(Error::ClauseArity {
                        clause,
                        found: norm.len(),
                    })
                }
            }
        }
        Ok(SatInstance { k, clauses: out })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of clauses, `ℓ`.
    pub fn l(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Clause `j` (1-based).
    pub fn clause(&self, j: usize) -> &[Literal; 3] {
        &self.clauses[j - 1]
    }

    pub fn satisfied_by(&self, v: &Valuation) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(v)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.k, self.l());
        for c in &self.clauses {
            for l in c {
                out.push_str(&l.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    /// All eight sign patterns over `x1, x2, x3`: the smallest unsatisfiable
    /// instance with three distinct variables per clause.
    pub fn full_unsat() -> Self {
        let clauses: Vec<Vec<i64>> = (0..8)
            .map(|m| {
                (1..=3)
                    .map(|v| if m >> (v - 1) & 1 == 1 { -v } else { v })
                    .collect()
            })
            .collect();
        SatInstance::new(3, &clauses).expect("well-formed")
    }

    /// `ℓ` clauses drawn uniformly from the non-tautological clauses over
    /// three distinct variables of `x1..xk`. Needs `k >= 3`.
    pub fn random(k: usize, l: usize, rng: &mut impl Rng) -> Result<Self> {
        if k < 3 {
            return Err(Error::ClauseArity { clause: 1, found: k });
        }
        let vars: Vec<i64> = (1..=k as i64).collect();
        let clauses: Vec<Vec<i64>> = (0..l)
            .map(|_| {
                vars.choose_multiple(rng, 3)
                    .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                    .collect()
            })
            .collect();
        SatInstance::new(k, &clauses)
    }

    pub fn seeded(k: usize, l: usize, seed: u64) -> Result<Self> {
        Self::random(k, l, &mut ChaCha8Rng::seed_from_u64(seed))
    }
}

impl fmt::Display for SatInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| format!("({} ∨ {} ∨ {})", c[0], c[1], c[2]))
            .collect();
        f.write_str(&parts.join(" ∧ "))
    }
}

/// A satisfying valuation, by exhaustive search.
pub fn satisfying_valuation(i: &SatInstance) -> Result<Option<Valuation>> {
    if i.k() > SAT_ORACLE_LIMIT {
        return Err(Error::TooManyVariables {
            k: i.k(),
            limit: SAT_ORACLE_LIMIT,
        });
    }
    Ok((0..1u64 << i.k())
        .map(|bits| Valuation::from_bits(i.k(), bits))
        .find(|v| i.satisfied_by(v)))
}

pub fn sat_oracle(i: &SatInstance) -> Result<bool> {
    Ok(satisfying_valuation(i)?.is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Enum,
    Membership,
    Sms,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Enum => "enum",
            Variant::Membership => "membership",
            Variant::Sms => "sms",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enum" => Ok(Variant::Enum),
            "membership" => Ok(Variant::Membership),
            "sms" => Ok(Variant::Sms),
            other => Err(Error::Format(format!("unknown variant {other:?}"))),
        }
    }
}

/// The fixed expressions of a construction, in concrete syntax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expressions {
    pub r1: String,
    pub r2: String,
    /// Absent in the membership variant.
    pub r3: Option<String>,
    pub r: String,
}

/// A gadget graph for one formula.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub sat: SatInstance,
    pub variant: Variant,
    pub graph: Graph,
    pub colors: ColorMap,
    pub expressions: Expressions,
    pub source: String,
    pub target: String,
    /// The all-red-edges match of the membership variant.
    pub witness: Option<Walk>,
}

fn compiled(text: &str) -> RegExp {
    parse(text).expect("built-in expressions parse")
}

impl ReductionInstance {
    pub fn r1(&self) -> RegExp {
        compiled(&self.expressions.r1)
    }

    pub fn r2(&self) -> RegExp {
        compiled(&self.expressions.r2)
    }

    pub fn r3(&self) -> Option<RegExp> {
        self.expressions.r3.as_deref().map(compiled)
    }

    pub fn r(&self) -> RegExp {
        compiled(&self.expressions.r)
    }

    pub fn k(&self) -> usize {
        self.sat.k()
    }

    pub fn l(&self) -> usize {
        self.sat.l()
    }

    pub(crate) fn require(&self, variant: Variant) -> Result<()> {
        if self.variant == variant {
            Ok(())
        } else {
            Err(Error::WrongVariant {
                expected: variant.to_string(),
                found: self.variant.to_string(),
            })
        }
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            variant: self.variant,
            k: self.k(),
            l: self.l(),
            r1: self.expressions.r1.clone(),
            r2: self.expressions.r2.clone(),
            r3: self.expressions.r3.clone(),
            r: self.expressions.r.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            witness: self.witness.clone(),
            r2_trailing_zero_restored: self.variant == Variant::Sms,
        }
    }
}

/// Sidecar written next to a generated graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub variant: Variant,
    pub k: usize,
    pub l: usize,
    #[serde(rename = "R1")]
    pub r1: String,
    #[serde(rename = "R2")]
    pub r2: String,
    #[serde(rename = "R3")]
    pub r3: Option<String>,
    #[serde(rename = "R")]
    pub r: String,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Walk>,
    /// The SMS variant's R2 ends with a `0` edge here as well, like the base R2.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub r2_trailing_zero_restored: bool,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_sorts_and_dedups() {
        let i = SatInstance::new(3, &[vec![3, -1, 2, 3]]).unwrap();
        assert_eq!(
            i.clause(1),
            &[
                Literal::new(1, false),
                Literal::new(2, true),
                Literal::new(3, true)
            ]
        );
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            SatInstance::new(2, &[vec![1, -1, 2]]).unwrap_err(),
            Error::TautologicalClause { clause: 1, var: 1 }
        );
        assert_eq!(
            SatInstance::new(3, &[vec![1, 2, 2]]).unwrap_err(),
            Error::ClauseArity { clause: 1, found: 2 }
        );
        assert_eq!(
            SatInstance::new(3, &[vec![1, 2, 4]]).unwrap_err(),
            Error::VariableOutOfRange { var: 4, k: 3 }
        );
    }

    #[test]
    fn oracle_examples() {
        let one = SatInstance::new(3, &[vec![1, 2, 3]]).unwrap();
        assert!(sat_oracle(&one).unwrap());
        let two = SatInstance::new(3, &[vec![1, 2, 3], vec![-1, -2, -3]]).unwrap();
        assert!(sat_oracle(&two).unwrap());
        let full = SatInstance::full_unsat();
        assert_eq!(full.l(), 8);
        assert!(!sat_oracle(&full).unwrap());
        let big = SatInstance::new(25, &[vec![1, 2, 3]]).unwrap();
        assert!(matches!(sat_oracle(&big), Err(Error::TooManyVariables { .. })));
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = SatInstance::seeded(4, 3, 7).unwrap();
        let b = SatInstance::seeded(4, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.l(), 3);
        assert!(SatInstance::seeded(2, 1, 0).is_err());
    }

    #[test]
    fn dimacs_round_trip() {
        let i = SatInstance::full_unsat();
        assert_eq!(parse_dimacs(&i.to_dimacs()).unwrap(), i);
    }

    #[test]
    fn manifest_keys() {
        let ri = build_sms_instance(&SatInstance::new(3, &[vec![1, 2, 3]]).unwrap());
        let v: serde_json::Value = serde_json::from_str(&ri.manifest().to_json()).unwrap();
        assert_eq!(v["variant"], "sms");
        assert_eq!(v["R2"], R2_SMS);
        assert_eq!(v["r2_trailing_zero_restored"], true);
        assert!(v.get("witness").is_none());
        let back = Manifest::from_json(&ri.manifest().to_json()).unwrap();
        assert_eq!(back, ri.manifest());
    }
}
