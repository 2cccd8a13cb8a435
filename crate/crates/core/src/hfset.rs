//! Hereditarily finite sets in canonical form.
//!
//! Elements are deduplicated and kept in ascending Ackermann order, where
//! `code(∅) = 0` and `code(s) = Σ_{e ∈ s} 2^code(e)`. Codes below `2^64`
//! are cached, which covers every set of rank at most 5 and makes equality
//! and ordering on the usual working universes a single integer compare.
//! Larger sets fall back to a structural comparison that agrees with the
//! numeric order of their (big) codes.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Default ceiling on the bit width of an Ackermann code.
pub const DEFAULT_CODE_BITS: u64 = 1 << 20;

/// Largest stage `v_stage` will build.
pub const MAX_STAGE: usize = 5;

/// Largest set whose power set may be formed.
pub const MAX_POWER_SET_BASE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HfError {
    #[error("Ackermann code needs {bits} bits, budget is {budget}")]
    CodeTooWide { bits: u64, budget: u64 },
    #[error("stage V_{0} is too large to build (largest supported is V_{MAX_STAGE})")]
    StageTooLarge(usize),
    #[error("power set of a {0}-element set is too large")]
    PowerSetTooLarge(usize),
    #[error("{set} is not a subset of {universe}")]
    NotASubset { set: String, universe: String },
    #[error("{position}: malformed set notation: {message}")]
    Syntax { position: usize, message: String },
}

#[derive(Clone)]
pub struct HfSet(Arc<Node>);

struct Node {
    elems: Vec<HfSet>,
    small: Option<u64>,
}

impl HfSet {
    pub fn empty() -> HfSet {
        HfSet(Arc::new(Node {
            elems: Vec::new(),
            small: Some(0),
        }))
    }

    /// Builds the canonical set with the given elements (duplicates allowed).
    pub fn from_elems(elems: impl IntoIterator<Item = HfSet>) -> HfSet {
        let mut elems: Vec<HfSet> = elems.into_iter().collect();
        elems.sort();
        elems.dedup();
        HfSet::from_sorted(elems)
    }

    fn from_sorted(elems: Vec<HfSet>) -> HfSet {
        let small = elems.iter().try_fold(0u64, |acc, e| match e.small_code() {
            Some(c) if c < 64 => Some(acc | (1u64 << c)),
            _ => None,
        });
        HfSet(Arc::new(Node { elems, small }))
    }

    pub fn singleton(a: HfSet) -> HfSet {
        HfSet::from_sorted(vec![a])
    }

    /// The unordered pair `{a, b}`; collapses to `{a}` when `a = b`.
    pub fn pair(a: &HfSet, b: &HfSet) -> HfSet {
        HfSet::from_elems([a.clone(), b.clone()])
    }

    /// The von Neumann natural number `n`.
    pub fn ordinal(n: usize) -> HfSet {
        let mut elems = Vec::with_capacity(n);
        for _ in 0..n {
            let next = HfSet::from_sorted(elems.clone());
            elems.push(next);
        }
        HfSet::from_sorted(elems)
    }

    pub fn elems(&self) -> &[HfSet] {
        &self.0.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HfSet> {
        self.0.elems.iter()
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    /// The Ackermann code when it is below `2^64`.
    pub fn small_code(&self) -> Option<u64> {
        self.0.small
    }

    pub fn contains(&self, e: &HfSet) -> bool {
        self.0.elems.binary_search(e).is_ok()
    }

    pub fn is_subset(&self, other: &HfSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    pub fn union(&self, other: &HfSet) -> HfSet {
        HfSet::from_elems(self.iter().chain(other.iter()).cloned())
    }

    pub fn intersection(&self, other: &HfSet) -> HfSet {
        HfSet::from_sorted(self.iter().filter(|e| other.contains(e)).cloned().collect())
    }

    pub fn difference(&self, other: &HfSet) -> HfSet {
        HfSet::from_sorted(
            self.iter()
                .filter(|e| !other.contains(e))
                .cloned()
                .collect(),
        )
    }

    pub fn intersects(&self, other: &HfSet) -> bool {
        self.iter().any(|e| other.contains(e))
    }

    /// Components of an unordered pair: `{a}` reads as `(a, a)`, `{a, b}` as
    /// `(a, b)`; anything else is not a pair.
    pub fn as_pair(&self) -> Option<(&HfSet, &HfSet)> {
        match self.elems() {
            [a] => Some((a, a)),
            [a, b] => Some((a, b)),
            _ => None,
        }
    }

    /// Set-theoretic rank: 0 for the empty set, else 1 + max rank of elements.
    pub fn rank(&self) -> usize {
        self.iter().map(|e| e.rank() + 1).max().unwrap_or(0)
    }

    /// The transitive closure (all hereditary members), in ascending order.
    pub fn transitive_closure(&self) -> HfSet {
        let mut acc: Vec<HfSet> = Vec::new();
        let mut stack: Vec<HfSet> = self.elems().to_vec();
        while let Some(e) = stack.pop() {
            if !acc.contains(&e) {
                stack.extend(e.elems().iter().cloned());
                acc.push(e);
            }
        }
        HfSet::from_elems(acc)
    }
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (self.0.small, other.0.small) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.0.elems == other.0.elems,
            _ => false,
        }
    }
}

impl Eq for HfSet {}

impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0.small, other.0.small) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            // Binary comparison from the most significant bit: compare the
            // largest elements first.
            (None, None) => self.0.elems.iter().rev().cmp(other.0.elems.iter().rev()),
        }
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self.0.small {
            Some(c) => {
                0u8.hash(state);
                c.hash(state);
            }
            None => {
                1u8.hash(state);
                self.0.elems.hash(state);
            }
        }
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for HfSet {
    type Err = HfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let set = parse_set(bytes, &mut pos)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(HfError::Syntax {
                position: pos,
                message: "trailing input".into(),
            });
        }
        Ok(set)
    }
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_set(b: &[u8], pos: &mut usize) -> Result<HfSet, HfError> {
    skip_ws(b, pos);
    if b.get(*pos) != Some(&b'{') {
        return Err(HfError::Syntax {
            position: *pos,
            message: "expected `{`".into(),
        });
    }
    *pos += 1;
    let mut elems = Vec::new();
    skip_ws(b, pos);
    if b.get(*pos) == Some(&b'}') {
        *pos += 1;
        return Ok(HfSet::empty());
    }
    loop {
        elems.push(parse_set(b, pos)?);
        skip_ws(b, pos);
        match b.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b'}') => {
                *pos += 1;
                return Ok(HfSet::from_elems(elems));
            }
            _ => {
                return Err(HfError::Syntax {
                    position: *pos,
                    message: "expected `,` or `}`".into(),
                })
            }
        }
    }
}

/// The Ackermann code of `s`, within [`DEFAULT_CODE_BITS`].
pub fn ack_encode(s: &HfSet) -> Result<BigUint, HfError> {
    ack_encode_with_budget(s, DEFAULT_CODE_BITS)
}

pub fn ack_encode_with_budget(s: &HfSet, budget: u64) -> Result<BigUint, HfError> {
    if let Some(c) = s.small_code() {
        let bits = 64 - u64::from(c.leading_zeros());
        if bits > budget {
            return Err(HfError::CodeTooWide { bits, budget });
        }
        return Ok(BigUint::from(c));
    }
    let mut code = BigUint::zero();
    for e in s.iter() {
        let ec = ack_encode_with_budget(e, budget)?;
        let bit = match ec.to_u64() {
            Some(b) if b < budget => b,
            _ => {
                let bits = ec.to_u64().map_or(u64::MAX, |b| b.saturating_add(1));
                return Err(HfError::CodeTooWide { bits, budget });
            }
        };
        code.set_bit(bit, true);
    }
    Ok(code)
}

/// The set whose Ackermann code is `n`.
pub fn ack_decode(n: &BigUint) -> HfSet {
    match n.to_u64() {
        Some(small) => HfSet::from_code(small),
        None => HfSet::from_sorted(
            (0..n.bits())
                .filter(|&i| n.bit(i))
                .map(HfSet::from_code)
                .collect(),
        ),
    }
}

impl HfSet {
    /// Decodes a 64-bit Ackermann code.
    pub fn from_code(n: u64) -> HfSet {
        let elems = (0..64u64)
            .filter(|i| n >> i & 1 == 1)
            .map(HfSet::from_code)
            .collect();
        HfSet::from_sorted(elems)
    }
}

/// `V_n`: `V_0 = ∅`, `V_{n+1} = P(V_n)`.
pub fn v_stage(n: usize) -> Result<HfSet, HfError> {
    if n > MAX_STAGE {
        return Err(HfError::StageTooLarge(n));
    }
    let mut v = HfSet::empty();
    for _ in 0..n {
        v = power_set(&v)?;
    }
    Ok(v)
}

pub fn power_set(s: &HfSet) -> Result<HfSet, HfError> {
    let n = s.len();
    if n > MAX_POWER_SET_BASE {
        return Err(HfError::PowerSetTooLarge(n));
    }
    let subsets = (0..1u64 << n).map(|mask| {
        HfSet::from_sorted(
            s.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e.clone())
                .collect(),
        )
    });
    Ok(HfSet::from_elems(subsets))
}

/// `⋃s`.
pub fn big_union(s: &HfSet) -> HfSet {
    HfSet::from_elems(s.iter().flat_map(|e| e.iter().cloned()))
}

/// `{a, b}`.
pub fn pair(a: &HfSet, b: &HfSet) -> HfSet {
    HfSet::pair(a, b)
}

/// `P₁(s) = {{e} : e ∈ s}`.
pub fn singleton_image(s: &HfSet) -> HfSet {
    HfSet::from_elems(s.iter().map(|e| HfSet::singleton(e.clone())))
}

pub fn rank(s: &HfSet) -> usize {
    s.rank()
}

/// `universe \ s`, requiring `s ⊆ universe`.
pub fn complement_within(s: &HfSet, universe: &HfSet) -> Result<HfSet, HfError> {
    if !s.is_subset(universe) {
        return Err(HfError::NotASubset {
            set: s.to_string(),
            universe: universe.to_string(),
        });
    }
    Ok(universe.difference(s))
}

/// `x² = {{a, b} : a, b ∈ x}`, singletons included.
pub fn unordered_square(x: &HfSet) -> HfSet {
    let e = x.elems();
    let pairs = (0..e.len()).flat_map(|i| (i..e.len()).map(move |j| HfSet::pair(&e[i], &e[j])));
    HfSet::from_elems(pairs)
}

/// Unordered composition `c ∘* d = {{x, z} : ∃y ({x,y} ∈ c ∧ {y,z} ∈ d)}`.
///
/// Singletons `{a}` count as the pair `(a, a)`; elements that are not
/// pairs are ignored.
pub fn ustar_compose(c: &HfSet, d: &HfSet) -> HfSet {
    let mut right: BTreeMap<&HfSet, Vec<&HfSet>> = BTreeMap::new();
    for p in d.iter() {
        if let Some((a, b)) = p.as_pair() {
            right.entry(a).or_default().push(b);
            if a != b {
                right.entry(b).or_default().push(a);
            }
        }
    }
    let mut out = Vec::new();
    for p in c.iter() {
        if let Some((a, b)) = p.as_pair() {
            for (x, y) in [(a, b), (b, a)] {
                if let Some(zs) = right.get(y) {
                    out.extend(zs.iter().map(|z| HfSet::pair(x, z)));
                }
            }
        }
    }
    HfSet::from_elems(out)
}

/// `Π* A = {{x, y} ∈ A : x ∩ y ≠ ∅}`; a singleton `{x}` is kept iff `x ≠ ∅`.
pub fn pi_star(a: &HfSet) -> HfSet {
    HfSet::from_sorted(
        a.iter()
            .filter(|p| p.as_pair().is_some_and(|(x, y)| x.intersects(y)))
            .cloned()
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hf(s: &str) -> HfSet {
        s.parse().unwrap()
    }

    #[test]
    fn codes_of_small_sets() {
        assert_eq!(ack_encode(&hf("{}")).unwrap(), BigUint::from(0u32));
        assert_eq!(ack_encode(&hf("{{}}")).unwrap(), BigUint::from(1u32));
        assert_eq!(ack_encode(&hf("{{},{{}}}")).unwrap(), BigUint::from(3u32));
        assert_eq!(ack_decode(&BigUint::from(3u32)), hf("{ {{}} , {} }"));
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(hf("{{{}},{}}").to_string(), "{{},{{}}}");
        assert_eq!(hf("{{},{}}").to_string(), "{{}}");
    }

    #[test]
    fn malformed_notation() {
        assert!(matches!(
            "{".parse::<HfSet>(),
            Err(HfError::Syntax { position: 1, .. })
        ));
        assert!(matches!(
            "{}}".parse::<HfSet>(),
            Err(HfError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            "{{} {}}".parse::<HfSet>(),
            Err(HfError::Syntax { .. })
        ));
    }

    #[test]
    fn stage_sizes() {
        assert!(v_stage(0).unwrap().is_empty());
        assert_eq!(v_stage(4).unwrap().len(), 16);
        assert_eq!(v_stage(5).unwrap().len(), 65536);
        assert_eq!(v_stage(6).unwrap_err(), HfError::StageTooLarge(6));
    }

    #[test]
    fn toolbox_examples() {
        let a = HfSet::empty();
        let b = hf("{{}}");
        let ab = HfSet::pair(&a, &b);
        let fam = HfSet::from_elems([HfSet::singleton(a.clone()), ab.clone()]);
        assert_eq!(big_union(&fam), ab);
        assert_eq!(
            singleton_image(&ab),
            HfSet::from_elems([HfSet::singleton(a.clone()), HfSet::singleton(b.clone())])
        );
        let v2 = v_stage(2).unwrap();
        assert_eq!(complement_within(&HfSet::empty(), &v2).unwrap(), v2);
        assert!(complement_within(&hf("{{{{}}}}"), &v2).is_err());
        assert_eq!(HfSet::pair(&a, &a), HfSet::singleton(a.clone()));
    }

    #[test]
    fn squares() {
        let a = HfSet::empty();
        let b = hf("{{}}");
        assert!(unordered_square(&HfSet::empty()).is_empty());
        assert_eq!(
            unordered_square(&HfSet::singleton(a.clone())),
            HfSet::singleton(HfSet::singleton(a.clone()))
        );
        let expected = HfSet::from_elems([
            HfSet::singleton(a.clone()),
            HfSet::singleton(b.clone()),
            HfSet::pair(&a, &b),
        ]);
        assert_eq!(unordered_square(&HfSet::pair(&a, &b)), expected);
    }

    #[test]
    fn composition_examples() {
        let (a, b, e) = (
            HfSet::from_code(0),
            HfSet::from_code(1),
            HfSet::from_code(2),
        );
        let c = HfSet::singleton(HfSet::pair(&a, &b));
        let d = HfSet::singleton(HfSet::pair(&b, &e));
        assert_eq!(ustar_compose(&c, &d), HfSet::singleton(HfSet::pair(&a, &e)));
        assert!(ustar_compose(&HfSet::empty(), &d).is_empty());
        let sa = HfSet::singleton(HfSet::singleton(a.clone()));
        assert_eq!(ustar_compose(&sa, &sa), sa);
    }

    #[test]
    fn intersection_relation_examples() {
        let a = hf("{{}}");
        let b = hf("{{},{{}}}");
        let c = hf("{{{}}}");
        let ab = HfSet::singleton(HfSet::pair(&a, &b));
        assert_eq!(pi_star(&ab), ab);
        assert!(pi_star(&HfSet::singleton(HfSet::pair(&a, &c))).is_empty());
        assert!(pi_star(&HfSet::empty()).is_empty());
    }

    #[test]
    fn large_codes_order_like_numbers() {
        // {64} has code 2^64, {0, 64} has code 2^64 + 1, {65} has 2^65.
        let s64 = HfSet::singleton(HfSet::from_code(64));
        let s0_64 = HfSet::from_elems([HfSet::from_code(0), HfSet::from_code(64)]);
        let s65 = HfSet::singleton(HfSet::from_code(65));
        assert!(s64.small_code().is_none());
        assert!(HfSet::from_code(u64::MAX) < s64);
        assert!(s64 < s0_64 && s0_64 < s65);
        let code = ack_encode(&s0_64).unwrap();
        assert_eq!(code, (BigUint::from(1u32) << 64usize) + BigUint::from(1u32));
        assert_eq!(ack_decode(&code), s0_64);
        assert!(matches!(
            ack_encode_with_budget(&s65, 64),
            Err(HfError::CodeTooWide {
                bits: 66,
                budget: 64
            })
        ));
    }

    #[test]
    fn ordinals_have_matching_rank() {
        for n in 0..6 {
            assert_eq!(HfSet::ordinal(n).rank(), n);
            assert_eq!(HfSet::ordinal(n).len(), n);
        }
    }
}
