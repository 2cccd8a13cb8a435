//! The five axioms of the finite axiomatization of stratified comprehension,
//! written out in the pure membership language.
//!
//! Class terms are expanded in the usual way: `y = {z : φ}` becomes
//! `forall z. (z mem y <-> φ)`, an unordered-pair membership `{u,v} ∈ c`
//! becomes `exists q. (q mem c /\ forall w. (w mem q <-> (w = u \/ w = v)))`,
//! and `u ∩ v ≠ ∅` becomes `exists m. (m mem u /\ m mem v)`.

use std::fmt;
use std::str::FromStr;

use super::{parse_closed, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    Complements,
    Pairing,
    SetUnion,
    UComposition,
    UIntersection,
    /// Not one of the five; used to label extensionality reports.
    Extensionality,
}

impl AxiomId {
    /// The five comprehension axioms in their conventional order.
    pub const FIN_SF: [AxiomId; 5] = [
        AxiomId::Complements,
        AxiomId::Pairing,
        AxiomId::SetUnion,
        AxiomId::UComposition,
        AxiomId::UIntersection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Complements => "COMPLEMENTS",
            AxiomId::Pairing => "PAIRING",
            AxiomId::SetUnion => "SET_UNION",
            AxiomId::UComposition => "U_COMPOSITION",
            AxiomId::UIntersection => "U_INTERSECTION",
            AxiomId::Extensionality => "EXTENSIONALITY",
        }
    }

    fn source(self) -> &'static str {
        match self {
            AxiomId::Complements => COMPLEMENTS,
            AxiomId::Pairing => PAIRING,
            AxiomId::SetUnion => SET_UNION,
            AxiomId::UComposition => U_COMPOSITION,
            AxiomId::UIntersection => U_INTERSECTION,
            AxiomId::Extensionality => EXTENSIONALITY,
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        let all = AxiomId::FIN_SF.into_iter().chain([AxiomId::Extensionality]);
        for id in all {
            if id.name() == key {
                return Ok(id);
            }
        }
        let alias = match key.as_str() {
            "UNION" => Some(AxiomId::SetUnion),
            "COMPOSITION" => Some(AxiomId::UComposition),
            "INTERSECTION" | "PI" => Some(AxiomId::UIntersection),
            "EXT" => Some(AxiomId::Extensionality),
            _ => None,
        };
        alias.ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

const COMPLEMENTS: &str = "forall x. exists y. forall z. (z mem y <-> ~(z mem x))";

const PAIRING: &str = "forall a. forall b. exists y. forall z. (z mem y <-> (z = a \\/ z = b))";

const SET_UNION: &str =
    "forall x. exists y. forall z. (z mem y <-> exists w. (z mem w /\\ w mem x))";

// y = c ∘* d : p ∈ y iff p = {u,v} and, for some m, {u,m} ∈ c and {m,v} ∈ d.
const U_COMPOSITION: &str = "forall c. forall d. exists y. forall p. (p mem y <-> \
    exists u. exists v. ((forall w. (w mem p <-> (w = u \\/ w = v))) /\\ \
    exists m. ((exists q. (q mem c /\\ forall w1. (w1 mem q <-> (w1 = u \\/ w1 = m)))) /\\ \
    (exists q2. (q2 mem d /\\ forall w2. (w2 mem q2 <-> (w2 = m \\/ w2 = v)))))))";

// y = the set of all unordered pairs {u,v} with u ∩ v nonempty.
const U_INTERSECTION: &str = "exists y. forall p. (p mem y <-> \
    exists u. exists v. ((forall w. (w mem p <-> (w = u \\/ w = v))) /\\ \
    exists m. (m mem u /\\ m mem v)))";

const EXTENSIONALITY: &str = "forall x. forall y. ((forall z. (z mem x <-> z mem y)) -> x = y)";

/// The closed pure-membership formula for one axiom.
pub fn builtin_axiom(id: AxiomId) -> Formula {
    parse_closed(id.source()).expect("builtin axiom source parses")
}

/// The five comprehension axioms.
pub fn builtin_axioms() -> Vec<(AxiomId, Formula)> {
    AxiomId::FIN_SF
        .into_iter()
        .map(|id| (id, builtin_axiom(id)))
        .collect()
}

/// `forall x. forall y. ((forall z. (z mem x <-> z mem y)) -> x = y)`.
pub fn extensionality_formula() -> Formula {
    builtin_axiom(AxiomId::Extensionality)
}
