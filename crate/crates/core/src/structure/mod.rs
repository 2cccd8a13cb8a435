//! Finite membership structures and the recoded membership relations they
//! carry.
//!
//! A structure has a finite domain, a base edge relation `E(y, x)` ("y is a
//! member of x"), an optional permutation `j` that must be an automorphism
//! of `E`, a partial map `f`, and an optional designated code set `S`. From
//! these it derives
//!
//! * `y mem* x`  iff `E(y, j⁻¹(x))` and `x ∈ S`,
//! * `y mem' x`  iff `E(y, j⁻¹(f(x)))` (element-valued `f`),
//! * `y memf x`  iff `y ∈ f(x)` (set-valued `f`).
//!
//! The edge relation is either listed explicitly or induced by true
//! membership between hereditarily finite sets bound to domain elements.

mod closure;
mod eval;
mod load;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::RelSym;
use crate::hfset::HfSet;

pub use closure::{downward_set, lemma1_preimage, lemma2_image, upward_set, ClosureError};
pub use eval::{
    check_axiom, check_extensionality, eval, eval_with, AxiomReport, Compiled, EvalError,
    EvalOptions, ExtScope, Verdict,
};
pub use load::load_structure;

/// Index of a domain element.
pub type Elem = usize;

/// An unordered pair of elements; `{a, a}` is the singleton `{a}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UPair(Elem, Elem);

impl UPair {
    pub fn new(a: Elem, b: Elem) -> UPair {
        if a <= b {
            UPair(a, b)
        } else {
            UPair(b, a)
        }
    }

    pub fn singleton(a: Elem) -> UPair {
        UPair(a, a)
    }

    pub fn low(self) -> Elem {
        self.0
    }

    pub fn high(self) -> Elem {
        self.1
    }

    pub fn is_singleton(self) -> bool {
        self.0 == self.1
    }

    pub fn contains(self, e: Elem) -> bool {
        self.0 == e || self.1 == e
    }

    /// The members as a set (one element for a singleton).
    pub fn members(self) -> BTreeSet<Elem> {
        [self.0, self.1].into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FMode {
    /// `f: D ⇀ D`; `f(x)` is a code whose edge-extension is read as members.
    Element,
    /// `f: D ⇀ P(D)`.
    SetValued,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum FMap {
    Absent,
    Element {
        fwd: Vec<Option<Elem>>,
        inv: Vec<Option<Elem>>,
    },
    SetValued(Vec<Option<BTreeSet<Elem>>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate domain id `{0}`")]
    DuplicateId(String),
    #[error("unknown id `{0}`")]
    DanglingId(String),
    #[error("explicit edges and hf bindings cannot be mixed")]
    MixedEdgeModes,
    #[error("element-valued f and set-valued f cannot be mixed")]
    MixedFModes,
    #[error("f is defined twice at `{0}`")]
    DuplicateF(String),
    #[error("j is not a permutation of the domain: {0}")]
    BadPermutation(String),
    #[error("j is not an automorphism: E({x}, {y}) = {holds} but E(j({x}), j({y})) = {}", !holds)]
    AutomorphismViolation { x: String, y: String, holds: bool },
    #[error("f is not injective: f({x}) = f({y})")]
    InjectivityViolation { x: String, y: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipStructure {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    /// `edge[y * n + x]` is `E(y, x)`.
    edge: Vec<bool>,
    hf: Option<Vec<Option<HfSet>>>,
    j: Vec<Elem>,
    j_inv: Vec<Elem>,
    f: FMap,
    injective_declared: bool,
    code_set: Option<Vec<bool>>,
    predicates: BTreeMap<String, Vec<bool>>,
}

/// Assembles and validates a [`MembershipStructure`].
#[derive(Clone, Debug, Default)]
pub struct StructureBuilder {
    names: Vec<String>,
    edges: Vec<(Elem, Elem)>,
    hf: Vec<(Elem, HfSet)>,
    j: Option<Vec<Elem>>,
    f_elem: Vec<(Elem, Elem)>,
    f_set: Vec<(Elem, BTreeSet<Elem>)>,
    code_set: Option<BTreeSet<Elem>>,
    injective: Option<bool>,
    mode: Option<FMode>,
    predicates: BTreeMap<String, BTreeSet<Elem>>,
}

impl StructureBuilder {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        StructureBuilder {
            names: names.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    /// Domain `0..n` named by decimal index.
    pub fn with_size(n: usize) -> Self {
        StructureBuilder::new((0..n).map(|i| format!("e{i}")))
    }

    /// Domain of hereditarily finite sets, in the given order, with edges
    /// induced by membership. Elements are named by their Ackermann code.
    pub fn hf_domain(sets: &[HfSet]) -> Self {
        let names = sets.iter().enumerate().map(|(i, s)| match s.small_code() {
            Some(c) => c.to_string(),
            None => format!("big{i}"),
        });
        let mut b = StructureBuilder::new(names);
        b.hf = sets.iter().cloned().enumerate().collect();
        b
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// `E(member, container)`.
    pub fn edge(mut self, member: Elem, container: Elem) -> Self {
        self.edges.push((member, container));
        self
    }

    pub fn hf(mut self, e: Elem, set: HfSet) -> Self {
        self.hf.push((e, set));
        self
    }

    /// `j` as the image list `perm[x] = j(x)`.
    pub fn j(mut self, perm: Vec<Elem>) -> Self {
        self.j = Some(perm);
        self
    }

    /// `j` from disjoint cycles.
    pub fn j_cycles(self, cycles: &[Vec<Elem>]) -> Self {
        let mut perm: Vec<Elem> = (0..self.names.len()).collect();
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if let Some(p) = perm.get_mut(a) {
                    *p = cyc[(k + 1) % cyc.len()];
                }
            }
        }
        let n = self.names.len();
        let dangling = cycles.iter().flatten().any(|&a| a >= n);
        let mut seen = vec![0usize; n];
        for &a in cycles.iter().flatten().filter(|&&a| a < n) {
            seen[a] += 1;
        }
        if dangling || seen.iter().any(|&c| c > 1) {
            // Record an invalid image list so that build() reports it.
            let mut bad = perm;
            bad.push(usize::MAX);
            return self.j(bad);
        }
        self.j(perm)
    }

    /// Element-valued `f(x) = y`.
    pub fn f(mut self, x: Elem, y: Elem) -> Self {
        self.f_elem.push((x, y));
        self
    }

    /// Set-valued `f(x) = ys`.
    pub fn fset(mut self, x: Elem, ys: impl IntoIterator<Item = Elem>) -> Self {
        self.f_set.push((x, ys.into_iter().collect()));
        self
    }

    /// Fixes the mode of `f`, so that a map with no defined entries is still
    /// an (empty) element-valued or set-valued map rather than no map at all.
    pub fn f_mode(mut self, mode: FMode) -> Self {
        self.mode = Some(mode);
        self
    }

    /// Element-valued identity on every element.
    pub fn identity_f(mut self) -> Self {
        let n = self.names.len();
        self.f_elem.extend((0..n).map(|x| (x, x)));
        self
    }

    pub fn code_set(mut self, s: impl IntoIterator<Item = Elem>) -> Self {
        self.code_set = Some(s.into_iter().collect());
        self
    }

    /// Requests the injectivity check for a set-valued `f`. Element-valued
    /// maps are always checked.
    pub fn declare_injective(mut self, yes: bool) -> Self {
        self.injective = Some(yes);
        self
    }

    /// A named unary predicate usable as a quantifier guard.
    pub fn predicate(mut self, name: &str, members: impl IntoIterator<Item = Elem>) -> Self {
        self.predicates
            .insert(name.to_owned(), members.into_iter().collect());
        self
    }

    pub fn build(self) -> Result<MembershipStructure, StructureError> {
        let n = self.names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in self.names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(StructureError::DuplicateId(name.clone()));
            }
        }
        let dangling = |e: Elem| StructureError::DanglingId(format!("#{e}"));
        let check = |e: Elem| if e < n { Ok(e) } else { Err(dangling(e)) };

        if !self.edges.is_empty() && !self.hf.is_empty() {
            return Err(StructureError::MixedEdgeModes);
        }
        let mut edge = vec![false; n * n];
        for &(y, x) in &self.edges {
            edge[check(y)? * n + check(x)?] = true;
        }
        let hf = if self.hf.is_empty() {
            None
        } else {
            let mut bound: Vec<Option<HfSet>> = vec![None; n];
            for (e, s) in &self.hf {
                bound[check(*e)?] = Some(s.clone());
            }
            for y in 0..n {
                for x in 0..n {
                    if let (Some(sy), Some(sx)) = (&bound[y], &bound[x]) {
                        edge[y * n + x] = sx.contains(sy);
                    }
                }
            }
            Some(bound)
        };

        let j = match self.j {
            None => (0..n).collect::<Vec<_>>(),
            Some(perm) => {
                let mut hit = vec![false; n];
                if perm.len() != n {
                    return Err(StructureError::BadPermutation(
                        "cycles repeat an element or name an unknown id".into(),
                    ));
                }
                for &p in &perm {
                    if p >= n || std::mem::replace(&mut hit[p], true) {
                        return Err(StructureError::BadPermutation(format!(
                            "image list {perm:?}"
                        )));
                    }
                }
                perm
            }
        };
        let mut j_inv = vec![0; n];
        for (x, &jx) in j.iter().enumerate() {
            j_inv[jx] = x;
        }
        for x in 0..n {
            for y in 0..n {
                let here = edge[x * n + y];
                if here != edge[j[x] * n + j[y]] {
                    return Err(StructureError::AutomorphismViolation {
                        x: self.names[x].clone(),
                        y: self.names[y].clone(),
                        holds: here,
                    });
                }
            }
        }

        let mode = match (self.mode, self.f_elem.is_empty(), self.f_set.is_empty()) {
            (_, false, false)
            | (Some(FMode::SetValued), false, _)
            | (Some(FMode::Element), _, false) => return Err(StructureError::MixedFModes),
            (Some(mode), _, _) => Some(mode),
            (None, false, _) => Some(FMode::Element),
            (None, _, false) => Some(FMode::SetValued),
            (None, true, true) => None,
        };
        let f = if mode == Some(FMode::Element) {
            let mut fwd: Vec<Option<Elem>> = vec![None; n];
            let mut inv: Vec<Option<Elem>> = vec![None; n];
            for &(x, y) in &self.f_elem {
                let (x, y) = (check(x)?, check(y)?);
                if fwd[x].replace(y).is_some() {
                    return Err(StructureError::DuplicateF(self.names[x].clone()));
                }
                if let Some(other) = inv[y].replace(x) {
                    let (a, b) = (other.min(x), other.max(x));
                    return Err(StructureError::InjectivityViolation {
                        x: self.names[a].clone(),
                        y: self.names[b].clone(),
                    });
                }
            }
            FMap::Element { fwd, inv }
        } else if mode == Some(FMode::SetValued) {
            let mut map: Vec<Option<BTreeSet<Elem>>> = vec![None; n];
            for (x, ys) in &self.f_set {
                let x = check(*x)?;
                for &y in ys {
                    check(y)?;
                }
                if map[x].replace(ys.clone()).is_some() {
                    return Err(StructureError::DuplicateF(self.names[x].clone()));
                }
            }
            if self.injective == Some(true) {
                for a in 0..n {
                    for b in a + 1..n {
                        if map[a].is_some() && map[a] == map[b] {
                            return Err(StructureError::InjectivityViolation {
                                x: self.names[a].clone(),
                                y: self.names[b].clone(),
                            });
                        }
                    }
                }
            }
            FMap::SetValued(map)
        } else {
            FMap::Absent
        };

        let to_mask = |set: &BTreeSet<Elem>| -> Result<Vec<bool>, StructureError> {
            let mut mask = vec![false; n];
            for &e in set {
                mask[check(e)?] = true;
            }
            Ok(mask)
        };
        let code_set = self.code_set.as_ref().map(to_mask).transpose()?;
        let mut predicates = BTreeMap::new();
        for (name, set) in &self.predicates {
            predicates.insert(name.clone(), to_mask(set)?);
        }

        let injective_declared = match &f {
            FMap::Element { .. } => true,
            _ => self.injective == Some(true),
        };
        Ok(MembershipStructure {
            names: self.names,
            index,
            edge,
            hf,
            j,
            j_inv,
            f,
            injective_declared,
            code_set,
            predicates,
        })
    }
}

impl MembershipStructure {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn domain(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    /// `E(member, container)`.
    pub fn edge(&self, member: Elem, container: Elem) -> bool {
        self.edge[member * self.len() + container]
    }

    /// `{y : E(y, x)}`.
    pub fn ext(&self, x: Elem) -> BTreeSet<Elem> {
        self.domain().filter(|&y| self.edge(y, x)).collect()
    }

    pub fn has_explicit_edges(&self) -> bool {
        self.hf.is_none()
    }

    /// The HF set bound to `e`, in HF mode.
    pub fn hf_set(&self, e: Elem) -> Option<&HfSet> {
        self.hf.as_ref().and_then(|b| b[e].as_ref())
    }

    pub fn j(&self, x: Elem) -> Elem {
        self.j[x]
    }

    pub fn j_inv(&self, x: Elem) -> Elem {
        self.j_inv[x]
    }

    pub fn j_is_identity(&self) -> bool {
        self.j.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn f_mode(&self) -> Option<FMode> {
        match self.f {
            FMap::Absent => None,
            FMap::Element { .. } => Some(FMode::Element),
            FMap::SetValued(_) => Some(FMode::SetValued),
        }
    }

    /// Element-valued `f(x)`.
    pub fn f_elem(&self, x: Elem) -> Option<Elem> {
        match &self.f {
            FMap::Element { fwd, .. } => fwd[x],
            _ => None,
        }
    }

    /// Element-valued `f⁻¹(y)`.
    pub fn f_inv(&self, y: Elem) -> Option<Elem> {
        match &self.f {
            FMap::Element { inv, .. } => inv[y],
            _ => None,
        }
    }

    /// Set-valued `f(x)`.
    pub fn f_set(&self, x: Elem) -> Option<&BTreeSet<Elem>> {
        match &self.f {
            FMap::SetValued(map) => map[x].as_ref(),
            _ => None,
        }
    }

    pub fn in_dom_f(&self, x: Elem) -> bool {
        match &self.f {
            FMap::Absent => false,
            FMap::Element { fwd, .. } => fwd[x].is_some(),
            FMap::SetValued(map) => map[x].is_some(),
        }
    }

    pub fn dom_f(&self) -> BTreeSet<Elem> {
        self.domain().filter(|&x| self.in_dom_f(x)).collect()
    }

    /// Range of an element-valued `f`.
    pub fn range_f(&self) -> BTreeSet<Elem> {
        self.domain().filter(|&y| self.f_inv(y).is_some()).collect()
    }

    pub fn f_is_total(&self) -> bool {
        self.domain().all(|x| self.in_dom_f(x))
    }

    /// True when `f` is injective on its domain (checked, not declared).
    pub fn f_is_injective(&self) -> bool {
        match &self.f {
            FMap::Absent | FMap::Element { .. } => true,
            FMap::SetValued(map) => {
                let defined: Vec<&BTreeSet<Elem>> = map.iter().flatten().collect();
                let distinct: BTreeSet<&BTreeSet<Elem>> = defined.iter().copied().collect();
                distinct.len() == defined.len()
            }
        }
    }

    pub fn injective_declared(&self) -> bool {
        self.injective_declared
    }

    pub fn code_set(&self) -> Option<BTreeSet<Elem>> {
        self.code_set
            .as_ref()
            .map(|m| self.domain().filter(|&e| m[e]).collect())
    }

    pub fn in_code_set(&self, x: Elem) -> Option<bool> {
        self.code_set.as_ref().map(|m| m[x])
    }

    /// Membership mask of a named guard predicate. Besides user-declared
    /// predicates, `S` is the code set, `dom` the domain of `f`, `range` the
    /// range of an element-valued `f`, and `D` the whole domain.
    pub fn predicate(&self, name: &str) -> Option<Vec<bool>> {
        if let Some(mask) = self.predicates.get(name) {
            return Some(mask.clone());
        }
        let n = self.len();
        match name {
            "S" => self.code_set.clone(),
            "dom" => Some((0..n).map(|x| self.in_dom_f(x)).collect()),
            "range" => Some((0..n).map(|y| self.f_inv(y).is_some()).collect()),
            "D" => Some(vec![true; n]),
            _ => None,
        }
    }

    pub fn declared_predicates(&self) -> impl Iterator<Item = (&str, BTreeSet<Elem>)> {
        self.predicates.iter().map(|(k, m)| {
            (
                k.as_str(),
                m.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| i)
                    .collect(),
            )
        })
    }

    /// `y mem x`.
    pub fn mem(&self, y: Elem, x: Elem) -> bool {
        self.edge(y, x)
    }

    /// `y memf x`: `x ∈ dom(f)` and `y ∈ f(x)`.
    pub fn mem_f(&self, y: Elem, x: Elem) -> Result<bool, EvalError> {
        match &self.f {
            FMap::SetValued(map) => Ok(map[x].as_ref().is_some_and(|s| s.contains(&y))),
            _ => Err(EvalError::UnsupportedRelation {
                rel: RelSym::MemF,
                reason: "needs a set-valued f".into(),
            }),
        }
    }

    /// `y mem* x`: `E(y, j⁻¹(x))` and `x ∈ S`.
    pub fn mem_star(&self, y: Elem, x: Elem) -> Result<bool, EvalError> {
        match self.in_code_set(x) {
            None => Err(EvalError::UnsupportedRelation {
                rel: RelSym::MemStar,
                reason: "needs a designated code set S".into(),
            }),
            Some(in_s) => Ok(in_s && self.edge(y, self.j_inv(x))),
        }
    }

    /// `y mem' x`: `E(y, j⁻¹(f(x)))`.
    pub fn mem_prime(&self, y: Elem, x: Elem) -> Result<bool, EvalError> {
        match &self.f {
            FMap::Element { fwd, .. } => match fwd[x] {
                Some(fx) => Ok(self.edge(y, self.j_inv(fx))),
                None => Err(EvalError::UndefinedF {
                    elem: self.names[x].clone(),
                }),
            },
            _ => Err(EvalError::UnsupportedRelation {
                rel: RelSym::MemPrime,
                reason: "needs an element-valued f".into(),
            }),
        }
    }

    /// `y R x` for any relation symbol.
    pub fn holds(&self, rel: RelSym, y: Elem, x: Elem) -> Result<bool, EvalError> {
        match rel {
            RelSym::Eq => Ok(y == x),
            RelSym::Mem => Ok(self.mem(y, x)),
            RelSym::MemStar => self.mem_star(y, x),
            RelSym::MemPrime => self.mem_prime(y, x),
            RelSym::MemF => self.mem_f(y, x),
        }
    }

    /// Whether `rel` can be evaluated on this structure at all.
    pub fn supports(&self, rel: RelSym) -> Result<(), EvalError> {
        let reason = match rel {
            RelSym::Eq | RelSym::Mem => return Ok(()),
            RelSym::MemStar if self.code_set.is_some() => return Ok(()),
            RelSym::MemPrime if matches!(self.f, FMap::Element { .. }) => return Ok(()),
            RelSym::MemF if matches!(self.f, FMap::SetValued(_)) => return Ok(()),
            RelSym::MemStar => "needs a designated code set S",
            RelSym::MemPrime => "needs an element-valued f",
            RelSym::MemF => "needs a set-valued f",
        };
        Err(EvalError::UnsupportedRelation {
            rel,
            reason: reason.into(),
        })
    }

    /// Set-valued structure with `g(x) = {z : E(z, j⁻¹(f(x)))}`, so that
    /// `memf` under `g` is `mem'` here. Edges, `j` and `S` are kept.
    pub fn prime_view(&self) -> Option<MembershipStructure> {
        let FMap::Element { fwd, .. } = &self.f else {
            return None;
        };
        let map = fwd
            .iter()
            .map(|fx| fx.map(|c| self.ext(self.j_inv(c))))
            .collect();
        Some(MembershipStructure {
            f: FMap::SetValued(map),
            injective_declared: false,
            ..self.clone()
        })
    }

    /// Set-valued structure with `g(x) = {z : E(z, f⁻¹(x))}` for `x` in the
    /// range of `f`: membership read through the inverse of an injection.
    pub fn injection_view(&self) -> Option<MembershipStructure> {
        let FMap::Element { inv, .. } = &self.f else {
            return None;
        };
        let map = inv.iter().map(|pre| pre.map(|c| self.ext(c))).collect();
        Some(MembershipStructure {
            f: FMap::SetValued(map),
            injective_declared: false,
            ..self.clone()
        })
    }

    /// Renders a set of elements as `{a, b}`.
    pub fn show_set<'a>(&self, set: impl IntoIterator<Item = &'a Elem>) -> String {
        let names: Vec<&str> = set.into_iter().map(|&e| self.name(e)).collect();
        format!("{{{}}}", names.join(", "))
    }

    pub fn show_pair(&self, p: UPair) -> String {
        self.show_set(&p.members())
    }

    pub fn show_pairs<'a>(&self, pairs: impl IntoIterator<Item = &'a UPair>) -> String {
        let parts: Vec<String> = pairs.into_iter().map(|&p| self.show_pair(p)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Serializes in the line-based structure file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("domain:");
        for n in &self.names {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        match &self.hf {
            Some(bound) => {
                for (e, s) in bound.iter().enumerate() {
                    if let Some(s) = s {
                        out.push_str(&format!("hf: {} = {s}\n", self.names[e]));
                    }
                }
            }
            None => {
                for y in self.domain() {
                    for x in self.domain() {
                        if self.edge(y, x) {
                            out.push_str(&format!("edge: {} {}\n", self.names[y], self.names[x]));
                        }
                    }
                }
            }
        }
        if !self.j_is_identity() {
            out.push_str("j: ");
            let mut seen = vec![false; self.len()];
            for start in self.domain() {
                if seen[start] || self.j[start] == start {
                    continue;
                }
                let mut cyc = Vec::new();
                let mut at = start;
                while !seen[at] {
                    seen[at] = true;
                    cyc.push(self.names[at].as_str());
                    at = self.j[at];
                }
                out.push_str(&format!("({})", cyc.join(" ")));
            }
            out.push('\n');
        }
        match &self.f {
            FMap::Absent => {}
            FMap::Element { fwd, .. } => {
                if fwd.iter().all(Option::is_none) {
                    out.push_str("fmode: element\n");
                }
                for (x, fx) in fwd.iter().enumerate() {
                    if let Some(y) = fx {
                        out.push_str(&format!("f: {} -> {}\n", self.names[x], self.names[*y]));
                    }
                }
            }
            FMap::SetValued(map) => {
                if map.iter().all(Option::is_none) {
                    out.push_str("fmode: set\n");
                }
                if self.injective_declared {
                    out.push_str("injective: true\n");
                }
                for (x, fx) in map.iter().enumerate() {
                    if let Some(s) = fx {
                        out.push_str(&format!(
                            "fset: {} -> {}\n",
                            self.names[x],
                            self.show_set(s)
                        ));
                    }
                }
            }
        }
        if let Some(s) = self.code_set() {
            out.push_str(&format!("S: {}\n", self.show_set(&s)));
        }
        for (name, set) in self.declared_predicates() {
            out.push_str(&format!("pred: {name} = {}\n", self.show_set(&set)));
        }
        out
    }
}

impl fmt::Display for MembershipStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfset::v_stage;

    fn four_cycle() -> MembershipStructure {
        // a -> b -> c -> d -> a, with j the rotation a -> b -> c -> d.
        StructureBuilder::new(["a", "b", "c", "d"])
            .edge(0, 1)
            .edge(1, 2)
            .edge(2, 3)
            .edge(3, 0)
            .j_cycles(&[vec![0, 1, 2, 3]])
            .code_set([1])
            .build()
            .unwrap()
    }

    #[test]
    fn mem_star_on_rotated_cycle() {
        let m = four_cycle();
        // E(a, j⁻¹(b)) = E(a, a)
        assert!(!m.mem_star(0, 1).unwrap());
        // E(d, j⁻¹(b)) = E(d, a)
        assert!(m.mem_star(3, 1).unwrap());
        // c is outside S
        assert!(!m.mem_star(1, 2).unwrap());
    }

    #[test]
    fn mem_f_conventions() {
        let m = StructureBuilder::new(["a", "b", "z"])
            .fset(0, [1])
            .fset(2, [])
            .build()
            .unwrap();
        assert!(m.mem_f(1, 0).unwrap());
        assert!(!m.mem_f(0, 1).unwrap());
        assert!(m.domain().all(|y| !m.mem_f(y, 2).unwrap()));
        assert!(matches!(
            m.mem_star(0, 0),
            Err(EvalError::UnsupportedRelation { .. })
        ));
        assert!(matches!(
            m.mem_prime(0, 0),
            Err(EvalError::UnsupportedRelation { .. })
        ));
    }

    #[test]
    fn mem_prime_with_identity_j() {
        let v3 = v_stage(3).unwrap();
        let sets: Vec<HfSet> = v3.iter().cloned().collect();
        // f(x) = x for codes 0..2, f(3) undefined.
        let m = StructureBuilder::hf_domain(&sets)
            .f(0, 0)
            .f(1, 1)
            .f(2, 2)
            .build()
            .unwrap();
        for y in m.domain() {
            for x in 0..3 {
                assert_eq!(m.mem_prime(y, x).unwrap(), m.edge(y, x));
            }
        }
        assert_eq!(
            m.mem_prime(0, 3),
            Err(EvalError::UndefinedF { elem: "3".into() })
        );
    }

    #[test]
    fn automorphism_violation_names_the_pair() {
        let err = StructureBuilder::new(["a", "b"])
            .edge(0, 1)
            .j_cycles(&[vec![0, 1]])
            .build()
            .unwrap_err();
        assert_eq!(
            err,
            StructureError::AutomorphismViolation {
                x: "a".into(),
                y: "b".into(),
                holds: true
            }
        );
    }

    #[test]
    fn injectivity_and_mode_errors() {
        let err = StructureBuilder::new(["a", "b", "c"])
            .f(0, 2)
            .f(1, 2)
            .build()
            .unwrap_err();
        assert_eq!(
            err,
            StructureError::InjectivityViolation {
                x: "a".into(),
                y: "b".into()
            }
        );
        let err = StructureBuilder::new(["a", "b"])
            .fset(0, [])
            .fset(1, [])
            .declare_injective(true)
            .build()
            .unwrap_err();
        assert!(matches!(err, StructureError::InjectivityViolation { .. }));
        let ok = StructureBuilder::new(["a", "b"])
            .fset(0, [])
            .fset(1, [])
            .build()
            .unwrap();
        assert!(!ok.f_is_injective());
        let err = StructureBuilder::new(["a"])
            .f(0, 0)
            .fset(0, [])
            .build()
            .unwrap_err();
        assert_eq!(err, StructureError::MixedFModes);
        let err = StructureBuilder::new(["a", "a"]).build().unwrap_err();
        assert_eq!(err, StructureError::DuplicateId("a".into()));
    }

    #[test]
    fn empty_structure_is_valid() {
        let m = StructureBuilder::new(Vec::<String>::new()).build().unwrap();
        assert!(m.is_empty());
        assert!(m.dom_f().is_empty());
    }

    #[test]
    fn prime_view_matches_mem_prime() {
        let m = four_cycle();
        let m = StructureBuilder::new(m.names().to_vec())
            .edge(0, 1)
            .edge(1, 2)
            .edge(2, 3)
            .edge(3, 0)
            .j_cycles(&[vec![0, 1, 2, 3]])
            .f(0, 2)
            .f(1, 3)
            .f(2, 0)
            .build()
            .unwrap();
        let view = m.prime_view().unwrap();
        for y in m.domain() {
            for x in m.domain() {
                match m.mem_prime(y, x) {
                    Ok(b) => assert_eq!(view.mem_f(y, x).unwrap(), b),
                    Err(EvalError::UndefinedF { .. }) => assert!(!view.mem_f(y, x).unwrap()),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}
