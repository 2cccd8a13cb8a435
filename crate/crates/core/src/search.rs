//! Enumeration and sampling of small structures, model search for axiom
//! subsets, and the finite Cantor check.
//!
//! Structures come in two shapes. In set-valued mode only `f: D ⇀ P(D)`
//! varies and there are no edges. In element mode both the edge relation
//! and the injection `f: D ⇀ D` vary, `j` is the identity and the code set
//! is `range(f)`.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{AxiomId, RelSym};
use crate::structure::{
    check_axiom, check_extensionality, Elem, EvalError, ExtScope, FMode, MembershipStructure,
    StructureBuilder,
};

pub const MAX_SET_VALUED_SIZE: usize = 4;
pub const MAX_ELEMENT_SIZE: usize = 7;
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    Axiom(AxiomId),
    Extensionality(ExtScope),
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::Axiom(id) => write!(f, "{id}"),
            Requirement::Extensionality(ExtScope::All) => f.write_str("EXTENSIONALITY"),
            Requirement::Extensionality(ExtScope::SetsOnly) => f.write_str("EXTENSIONALITY(sets)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random { seed: u64, samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub domain_size: usize,
    pub f_mode: FMode,
    pub require_injective: bool,
    pub require_total: bool,
    pub axioms: Vec<(Requirement, RelSym)>,
    /// Largest raw search space an exhaustive run may walk.
    pub budget: u64,
    pub mode: SearchMode,
    /// Keep only the lexicographically least member of each isomorphism class.
    pub canonical_only: bool,
}

impl SearchSpec {
    pub fn new(domain_size: usize, f_mode: FMode) -> SearchSpec {
        SearchSpec {
            domain_size,
            f_mode,
            require_injective: false,
            require_total: false,
            axioms: Vec::new(),
            budget: DEFAULT_BUDGET,
            mode: SearchMode::Exhaustive,
            canonical_only: false,
        }
    }

    pub fn injective(mut self, yes: bool) -> Self {
        self.require_injective = yes;
        self
    }

    pub fn total(mut self, yes: bool) -> Self {
        self.require_total = yes;
        self
    }

    pub fn require(mut self, req: Requirement, flavor: RelSym) -> Self {
        self.axioms.push((req, flavor));
        self
    }

    pub fn mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    /// Number of raw candidates before the injectivity, totality and
    /// canonical-form filters; `None` on overflow.
    pub fn raw_space(&self) -> Option<u64> {
        let n = self.domain_size as u32;
        let choices: u64 = match self.f_mode {
            FMode::SetValued => 1u64.checked_shl(n)?,
            FMode::Element => u64::from(n),
        } + u64::from(!self.require_total);
        let maps = choices.checked_pow(n)?;
        match self.f_mode {
            FMode::SetValued => Some(maps),
            FMode::Element => maps.checked_mul(1u64.checked_shl(n.checked_mul(n)?)?),
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.f_mode == FMode::SetValued && self.domain_size > MAX_SET_VALUED_SIZE {
            return Err(SearchError::Infeasible(format!(
                "set-valued search is limited to {MAX_SET_VALUED_SIZE} elements"
            )));
        }
        if self.f_mode == FMode::Element && self.domain_size > MAX_ELEMENT_SIZE {
            return Err(SearchError::Infeasible(format!(
                "element-mode search is limited to {MAX_ELEMENT_SIZE} elements"
            )));
        }
        if self.mode == SearchMode::Exhaustive {
            match self.raw_space() {
                Some(space) if space <= self.budget => {}
                space => {
                    return Err(SearchError::Infeasible(format!(
                        "exhaustive space {} exceeds budget {}",
                        space.map_or("> 2^64".to_string(), |s| s.to_string()),
                        self.budget
                    )))
                }
            }
        }
        if self.budget == 0 {
            return Err(SearchError::Infeasible("budget must be positive".into()));
        }
        for &(_, flavor) in &self.axioms {
            let ok = match self.f_mode {
                FMode::SetValued => matches!(flavor, RelSym::Mem | RelSym::MemF),
                FMode::Element => !matches!(flavor, RelSym::MemF),
            };
            if !ok || flavor == RelSym::Eq {
                return Err(SearchError::Flavor {
                    flavor,
                    mode: self.f_mode,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("infeasible search: {0}")]
    Infeasible(String),
    #[error("flavor `{flavor}` cannot be evaluated in {mode:?} mode")]
    Flavor { flavor: RelSym, mode: FMode },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn element_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| char::from(b'a' + i as u8).to_string())
        .collect()
}

/// Digits `0..radix` per position, most significant first.
struct Odometer {
    digits: Vec<u64>,
    radix: u64,
    done: bool,
}

impl Odometer {
    fn new(len: usize, radix: u64) -> Odometer {
        Odometer {
            digits: vec![0; len],
            radix,
            done: radix == 0 && len > 0,
        }
    }

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let current = self.digits.clone();
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.digits[k] += 1;
            if self.digits[k] < self.radix {
                break;
            }
            self.digits[k] = 0;
        }
        Some(current)
    }
}

/// A candidate `f`: per element, `None` for undefined or an encoded value
/// (a subset bitmask or an element index).
type FTuple = Vec<Option<u64>>;

fn decode_f(spec: &SearchSpec, digits: &[u64]) -> FTuple {
    digits
        .iter()
        .map(|&d| {
            if spec.require_total {
                Some(d)
            } else {
                d.checked_sub(1)
            }
        })
        .collect()
}

fn f_ok(spec: &SearchSpec, f: &FTuple) -> bool {
    if spec.require_injective || spec.f_mode == FMode::Element {
        let defined: Vec<u64> = f.iter().flatten().copied().collect();
        let distinct: BTreeSet<u64> = defined.iter().copied().collect();
        if distinct.len() != defined.len() {
            return false;
        }
    }
    true
}

fn mask_set(mask: u64) -> impl Iterator<Item = Elem> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

fn assemble(spec: &SearchSpec, f: &FTuple, edges: u64) -> MembershipStructure {
    let n = spec.domain_size;
    let mut b = StructureBuilder::new(element_names(n)).f_mode(spec.f_mode);
    match spec.f_mode {
        FMode::SetValued => {
            for (x, v) in f.iter().enumerate() {
                if let Some(mask) = v {
                    b = b.fset(x, mask_set(*mask));
                }
            }
            b = b.declare_injective(spec.require_injective);
        }
        FMode::Element => {
            for y in 0..n {
                for x in 0..n {
                    if edges >> (y * n + x) & 1 == 1 {
                        b = b.edge(y, x);
                    }
                }
            }
            for (x, v) in f.iter().enumerate() {
                if let Some(y) = v {
                    b = b.f(x, *y as Elem);
                }
            }
            b = b.code_set(f.iter().flatten().map(|&y| y as Elem));
        }
    }
    b.build().expect("enumerated structures are valid")
}

/// Signature used for the canonical-form filter: `f` and edges after
/// relabeling by `perm` (`perm[old] = new`).
fn signature(spec: &SearchSpec, f: &FTuple, edges: u64, perm: &[usize]) -> (Vec<Option<u64>>, u64) {
    let n = spec.domain_size;
    let mut g = vec![None; n];
    for (x, v) in f.iter().enumerate() {
        g[perm[x]] = v.map(|val| match spec.f_mode {
            FMode::SetValued => mask_set(val).map(|e| 1u64 << perm[e]).sum(),
            FMode::Element => perm[val as usize] as u64,
        });
    }
    let mut e = 0u64;
    for y in 0..n {
        for x in 0..n {
            if edges >> (y * n + x) & 1 == 1 {
                e |= 1 << (perm[y] * n + perm[x]);
            }
        }
    }
    // Undefined sorts first, as in the enumeration order.
    let key = g.iter().map(|v| v.map(|x| x + 1).or(Some(0))).collect();
    (key, e)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Structures meeting the requested shape constraints, in canonical order
/// (exhaustive) or as independent samples (random).
pub struct Enumeration {
    spec: SearchSpec,
    f_digits: Odometer,
    current_f: Option<FTuple>,
    next_edges: u64,
    edge_count: u64,
    perms: Vec<Vec<usize>>,
    rng: Option<(ChaCha8Rng, u64)>,
}

impl Iterator for Enumeration {
    type Item = MembershipStructure;

    fn next(&mut self) -> Option<MembershipStructure> {
        if let Some((rng, left)) = &mut self.rng {
            return sample(&self.spec, rng, left);
        }
        loop {
            if self.current_f.is_none() || self.next_edges == self.edge_count {
                let digits = self.f_digits.next()?;
                let f = decode_f(&self.spec, &digits);
                if !f_ok(&self.spec, &f) {
                    continue;
                }
                self.current_f = Some(f);
                self.next_edges = 0;
            }
            let f = self.current_f.as_ref().expect("set above");
            let edges = self.next_edges;
            self.next_edges += 1;
            if self.spec.canonical_only {
                let own = signature(&self.spec, f, edges, &self.perms[0]);
                if self
                    .perms
                    .iter()
                    .any(|p| signature(&self.spec, f, edges, p) < own)
                {
                    continue;
                }
            }
            return Some(assemble(&self.spec, f, edges));
        }
    }
}

fn sample(spec: &SearchSpec, rng: &mut ChaCha8Rng, left: &mut u64) -> Option<MembershipStructure> {
    if *left == 0 {
        return None;
    }
    *left -= 1;
    let n = spec.domain_size;
    let radix = match spec.f_mode {
        FMode::SetValued => 1u64 << n,
        FMode::Element => n as u64,
    } + u64::from(!spec.require_total);
    if radix == 0 && n > 0 {
        *left = 0;
        return None;
    }
    // Rejection sampling keeps the draw uniform over admissible maps.
    for _ in 0..100_000 {
        let digits: Vec<u64> = (0..n).map(|_| rng.gen_range(0..radix)).collect();
        let f = decode_f(spec, &digits);
        if f_ok(spec, &f) {
            let edges = match spec.f_mode {
                FMode::SetValued => 0,
                FMode::Element => rng.gen_range(0..1u64 << (n * n)),
            };
            return Some(assemble(spec, &f, edges));
        }
    }
    *left = 0;
    None
}

pub fn enumerate_structures(spec: &SearchSpec) -> Result<Enumeration, SearchError> {
    spec.validate()?;
    let n = spec.domain_size;
    let radix = match spec.f_mode {
        FMode::SetValued => 1u64 << n,
        FMode::Element => n as u64,
    } + u64::from(!spec.require_total);
    let edge_count = match spec.f_mode {
        FMode::SetValued => 1,
        FMode::Element => 1u64 << (n * n),
    };
    let rng = match spec.mode {
        SearchMode::Exhaustive => None,
        SearchMode::Random { seed, samples } => Some((ChaCha8Rng::seed_from_u64(seed), samples)),
    };
    Ok(Enumeration {
        spec: spec.clone(),
        f_digits: Odometer::new(n, radix),
        current_f: None,
        next_edges: 0,
        edge_count,
        perms: if spec.canonical_only {
            permutations(n)
        } else {
            Vec::new()
        },
        rng,
    })
}

/// Whether `m` satisfies every listed requirement.
pub fn satisfies(
    m: &MembershipStructure,
    axioms: &[(Requirement, RelSym)],
) -> Result<bool, EvalError> {
    for &(req, flavor) in axioms {
        let report = match req {
            Requirement::Axiom(id) => check_axiom(m, id, flavor)?,
            Requirement::Extensionality(scope) => check_extensionality(m, flavor, scope)?,
        };
        if !report.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// The first satisfying structure and how many were examined, it included.
    Found {
        model: Box<MembershipStructure>,
        examined: u64,
    },
    Exhausted {
        examined: u64,
    },
}

impl SearchOutcome {
    pub fn model(&self) -> Option<&MembershipStructure> {
        match self {
            SearchOutcome::Found { model, .. } => Some(model),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    /// One verdict header line followed by the model in structure-file format.
    pub fn to_text(&self) -> String {
        match self {
            SearchOutcome::Found { model, examined } => {
                format!(
                    "# verdict: FOUND after {examined} structures\n{}",
                    model.to_text()
                )
            }
            SearchOutcome::Exhausted { examined } => {
                format!("# verdict: EXHAUSTED after {examined} structures\n")
            }
        }
    }
}

/// Returns the first structure satisfying every requirement. A structure on
/// which a requirement applies `f` outside its domain has no truth value for
/// it and is not a model.
pub fn find_model(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    let mut examined = 0;
    for m in enumerate_structures(spec)? {
        examined += 1;
        match satisfies(&m, &spec.axioms) {
            Ok(true) => {
                return Ok(SearchOutcome::Found {
                    model: Box::new(m),
                    examined,
                })
            }
            Ok(false) | Err(EvalError::UndefinedF { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(SearchOutcome::Exhausted { examined })
}

/// Per-size result of the finite Cantor check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorRow {
    pub n: usize,
    /// Total maps `D → P(D)` examined.
    pub maps: u64,
    pub surjections: u64,
    /// Fewest subsets missed by any single map.
    pub min_missing: u64,
    /// Maps whose diagonal set `{x : x ∉ f(x)}` is outside their image.
    pub diagonal_missed: u64,
}

impl fmt::Display for CantorRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} maps={} surjections={} min_missing={} diagonal_missed={}",
            self.n, self.maps, self.surjections, self.min_missing, self.diagonal_missed
        )
    }
}

pub fn cantor_check(max_n: usize) -> Vec<CantorRow> {
    assert!(
        (1..=MAX_SET_VALUED_SIZE).contains(&max_n),
        "max_n must lie in 1..=4"
    );
    (1..=max_n)
        .map(|n| {
            let subsets = 1u64 << n;
            let mut row = CantorRow {
                n,
                maps: 0,
                surjections: 0,
                min_missing: u64::MAX,
                diagonal_missed: 0,
            };
            let mut odo = Odometer::new(n, subsets);
            while let Some(f) = odo.next() {
                row.maps += 1;
                let image: BTreeSet<u64> = f.iter().copied().collect();
                let missing = subsets - image.len() as u64;
                row.surjections += u64::from(missing == 0);
                row.min_missing = row.min_missing.min(missing);
                let diagonal: u64 = (0..n)
                    .filter(|&x| f[x] >> x & 1 == 0)
                    .map(|x| 1u64 << x)
                    .sum();
                row.diagonal_missed += u64::from(!image.contains(&diagonal));
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(spec: &SearchSpec) -> usize {
        enumerate_structures(spec).unwrap().count()
    }

    #[test]
    fn closed_form_counts() {
        let sv = |n| SearchSpec::new(n, FMode::SetValued);
        assert_eq!(count(&sv(1).total(true)), 2);
        assert_eq!(count(&sv(2).total(true).injective(true)), 12);
        assert_eq!(count(&sv(0)), 1);
        assert_eq!(count(&sv(2)), 25);
        assert_eq!(count(&sv(3).total(true)), 512);
        let el = |n| SearchSpec::new(n, FMode::Element);
        assert_eq!(count(&el(0)), 1);
        assert_eq!(count(&el(1)), 2 * 2);
        // partial injections on 2 elements: 7
        assert_eq!(count(&el(2).injective(true)), 7 * 16);
        // element-valued maps are always injective
        assert_eq!(count(&el(2).total(true)), 2 * 16);
    }

    #[test]
    fn canonical_filter_reduces() {
        let spec = SearchSpec {
            canonical_only: true,
            ..SearchSpec::new(2, FMode::SetValued).total(true)
        };
        // 16 maps, classes under swapping a and b: (16 + 4) / 2 = 10
        assert_eq!(count(&spec), 10);
    }

    #[test]
    fn complements_and_extensionality_size_two() {
        let spec = SearchSpec::new(2, FMode::SetValued)
            .total(true)
            .injective(true)
            .require(Requirement::Axiom(AxiomId::Complements), RelSym::MemF)
            .require(
                Requirement::Extensionality(ExtScope::SetsOnly),
                RelSym::MemF,
            );
        let out = find_model(&spec).unwrap();
        let m = out.model().unwrap();
        assert_eq!(m.f_set(0).unwrap(), &BTreeSet::new());
        assert_eq!(m.f_set(1).unwrap(), &BTreeSet::from([0, 1]));
        assert_eq!(
            out,
            SearchOutcome::Found {
                model: Box::new(m.clone()),
                examined: 3
            }
        );
        let swap = StructureBuilder::new(["a", "b"])
            .fset(0, [1])
            .fset(1, [0])
            .build()
            .unwrap();
        assert!(satisfies(&swap, &spec.axioms).unwrap());
    }

    #[test]
    fn no_axioms_gives_first_structure() {
        let spec = SearchSpec::new(2, FMode::SetValued);
        let out = find_model(&spec).unwrap();
        assert_eq!(
            out,
            SearchOutcome::Found {
                model: Box::new(enumerate_structures(&spec).unwrap().next().unwrap()),
                examined: 1
            }
        );
    }

    #[test]
    fn pairing_size_one_matches_oracle() {
        let spec = SearchSpec::new(1, FMode::SetValued)
            .total(true)
            .require(Requirement::Axiom(AxiomId::Pairing), RelSym::MemF);
        // f(a) = {a} codes {a, a}
        let m = find_model(&spec).unwrap();
        assert_eq!(m.model().unwrap().f_set(0).unwrap(), &BTreeSet::from([0]));
    }

    #[test]
    fn infeasible_and_flavor_errors() {
        assert!(matches!(
            enumerate_structures(&SearchSpec::new(5, FMode::SetValued)),
            Err(SearchError::Infeasible(_))
        ));
        assert!(matches!(
            enumerate_structures(&SearchSpec::new(4, FMode::Element)),
            Err(SearchError::Infeasible(_))
        ));
        let bad = SearchSpec::new(1, FMode::Element)
            .require(Requirement::Axiom(AxiomId::Complements), RelSym::MemF);
        assert!(matches!(find_model(&bad), Err(SearchError::Flavor { .. })));
    }

    #[test]
    fn random_mode_is_seeded() {
        let spec = SearchSpec::new(3, FMode::Element)
            .injective(true)
            .mode(SearchMode::Random {
                seed: 7,
                samples: 20,
            });
        let a: Vec<_> = enumerate_structures(&spec).unwrap().collect();
        let b: Vec<_> = enumerate_structures(&spec).unwrap().collect();
        assert_eq!(a.len(), 20);
        assert_eq!(a, b);
        assert!(a.iter().all(|m| m.f_is_injective()));
    }

    #[test]
    fn cantor_rows() {
        let rows = cantor_check(3);
        assert_eq!(
            rows.iter().map(|r| r.maps).collect::<Vec<_>>(),
            [2, 16, 512]
        );
        for r in &rows {
            assert_eq!(r.surjections, 0);
            assert_eq!(r.diagonal_missed, r.maps);
            assert_eq!(r.min_missing, (1 << r.n) - r.n as u64);
        }
    }

    #[test]
    fn undefined_f_is_not_a_model() {
        let spec = SearchSpec::new(2, FMode::Element)
            .require(Requirement::Axiom(AxiomId::SetUnion), RelSym::MemPrime);
        let out = find_model(&spec).unwrap();
        let m = out.model().expect("a total map models union");
        assert!(m.f_is_total());
        assert!(enumerate_structures(&spec)
            .unwrap()
            .take_while(|s| s != m)
            .all(|s| !s.f_is_total() || !satisfies(&s, &spec.axioms).unwrap()));
    }
}
