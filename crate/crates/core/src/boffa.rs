//! Witness recipes: the explicit terms a consistency proof offers as the
//! existential witness of each axiom, executed step by step over a finite
//! structure with an element-valued `f`.
//!
//! Two recipe families are provided.
//!
//! * [`Family::Automorphism`] reads membership as `y ∈' x ⟺ E(y, j⁻¹(f(x)))`
//!   and turns a target extension `T` into a witness by locating the code
//!   `c` of `T` and returning `f⁻¹(j(c))`.
//! * [`Family::Injection`] reads membership through the inverse of an
//!   injection, `y ∈* x ⟺ E(y, f⁻¹(x))` (elements outside `range(f)` are
//!   urelements), and returns `f(c)` for the code `c` of the target.
//!
//! Every successful run is validated by evaluating the axiom's matrix at the
//! inputs and the witness.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::{builtin_axiom, recode_translate, AxiomId, Formula, RelSym};
use crate::hfset::{v_stage, HfError};
use crate::structure::{
    downward_set, lemma1_preimage, upward_set, Compiled, Elem, EvalError, EvalOptions, FMode,
    MembershipStructure, StructureBuilder, StructureError, UPair,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Automorphism,
    Injection,
}

impl Family {
    /// The relation the family's witnesses are validated against.
    pub fn flavor(self) -> RelSym {
        match self {
            Family::Automorphism => RelSym::MemPrime,
            Family::Injection => RelSym::MemF,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "automorphism" | "auto" | "j" => Ok(Family::Automorphism),
            "injection" | "inj" | "f" => Ok(Family::Injection),
            other => Err(format!(
                "unknown recipe family `{other}` (automorphism|injection)"
            )),
        }
    }
}

/// How the intersection-set recipe applies its recoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PiReading {
    /// Recode every intersecting pair, then recode the resulting set.
    Pairwise,
    /// Collect the plain codes of the pairs and recode only the whole set.
    Setwise,
}

impl std::str::FromStr for PiReading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pairwise" => Ok(PiReading::Pairwise),
            "setwise" => Ok(PiReading::Setwise),
            other => Err(format!("unknown reading `{other}` (pairwise|setwise)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceObject {
    Elem(Elem),
    Set(BTreeSet<Elem>),
    Pairs(BTreeSet<UPair>),
}

impl TraceObject {
    pub fn render(&self, m: &MembershipStructure) -> String {
        match self {
            TraceObject::Elem(e) => m.name(*e).to_owned(),
            TraceObject::Set(s) => m.show_set(s),
            TraceObject::Pairs(p) => m.show_pairs(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub label: String,
    pub object: TraceObject,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecipeError {
    #[error("recipes need an element-valued f")]
    NeedsElementF,
    #[error("the {family:?} family has no recipe for {axiom}")]
    UnsupportedFamily { family: Family, axiom: AxiomId },
    #[error("no element has extension {set}")]
    MissingCode { set: String },
    #[error("several elements have extension {set}: {candidates}")]
    AmbiguousCode { set: String, candidates: String },
    #[error("{elem} is outside the range of f")]
    OutsideRange { elem: String },
    #[error("f is undefined at {elem}")]
    UndefinedF { elem: String },
    #[error("{axiom} takes {expected} inputs, got {got}")]
    Arity {
        axiom: AxiomId,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl RecipeError {
    /// True for the failures caused by the structure lacking a needed code.
    pub fn is_coding_gap(&self) -> bool {
        matches!(
            self,
            RecipeError::MissingCode { .. }
                | RecipeError::OutsideRange { .. }
                | RecipeError::UndefinedF { .. }
        )
    }
}

/// A recipe that stopped at `step`, with the trace up to that point.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("step `{step}`: {error}")]
pub struct RecipeFailure {
    pub step: String,
    pub error: RecipeError,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessOutcome {
    pub target: AxiomId,
    pub family: Family,
    pub inputs: Vec<Elem>,
    pub witness: Elem,
    pub trace: Vec<TraceStep>,
    pub validated: bool,
}

impl WitnessOutcome {
    /// Line-oriented report: one `label: object` line per step.
    pub fn report(&self, m: &MembershipStructure) -> String {
        let mut out = String::new();
        for step in &self.trace {
            out.push_str(&format!("{}: {}\n", step.label, step.object.render(m)));
        }
        out.push_str(&format!("witness: {}\n", m.name(self.witness)));
        out.push_str(&format!("validated: {}\n", self.validated));
        out
    }
}

/// Recipe runner for one structure and family.
pub struct Recipes<'m> {
    m: &'m MembershipStructure,
    family: Family,
    ext: Vec<BTreeSet<Elem>>,
    codes: HashMap<BTreeSet<Elem>, Vec<Elem>>,
    view: Option<MembershipStructure>,
}

struct Run<'r, 'm> {
    r: &'r Recipes<'m>,
    trace: Vec<TraceStep>,
}

impl<'r, 'm> Run<'r, 'm> {
    fn push(&mut self, label: impl Into<String>, object: TraceObject) {
        self.trace.push(TraceStep {
            label: label.into(),
            object,
        });
    }

    fn fail(&self, step: impl Into<String>, error: RecipeError) -> RecipeFailure {
        RecipeFailure {
            step: step.into(),
            error,
            trace: self.trace.clone(),
        }
    }

    fn at<T>(&self, step: &str, res: Result<T, RecipeError>) -> Result<T, RecipeFailure> {
        res.map_err(|e| self.fail(step, e))
    }

    /// The model-level members of `x` under the family's membership.
    fn members(&self, step: &str, x: Elem) -> Result<BTreeSet<Elem>, RecipeFailure> {
        self.at(step, self.r.members(x))
    }

    /// Code of `set` followed by the family's recoding.
    fn encode(&mut self, label: &str, set: &BTreeSet<Elem>) -> Result<Elem, RecipeFailure> {
        let code_step = format!("code({label})");
        let c = self.at(&code_step, self.r.code_of(set))?;
        self.push(code_step, TraceObject::Elem(c));
        let m = self.r.m;
        match self.r.family {
            Family::Automorphism => {
                let jc = m.j(c);
                self.push(format!("j({label})"), TraceObject::Elem(jc));
                let step = format!("f^-1(j({label}))");
                let w = m.f_inv(jc).ok_or_else(|| {
                    self.fail(
                        &step,
                        RecipeError::OutsideRange {
                            elem: m.name(jc).into(),
                        },
                    )
                })?;
                self.push(step, TraceObject::Elem(w));
                Ok(w)
            }
            Family::Injection => {
                let step = format!("f({label})");
                let w = m.f_elem(c).ok_or_else(|| {
                    self.fail(
                        &step,
                        RecipeError::UndefinedF {
                            elem: m.name(c).into(),
                        },
                    )
                })?;
                self.push(step, TraceObject::Elem(w));
                Ok(w)
            }
        }
    }

    /// Recodes each pair separately, as the elements the family would use
    /// to represent them.
    fn encode_pairs(
        &mut self,
        label: &str,
        pairs: &BTreeSet<UPair>,
    ) -> Result<BTreeSet<Elem>, RecipeFailure> {
        let m = self.r.m;
        let mut out = BTreeSet::new();
        for &p in pairs {
            let c = self.at(label, self.r.code_of(&p.members()))?;
            let w = match self.r.family {
                Family::Automorphism => m.f_inv(m.j(c)).ok_or_else(|| {
                    self.fail(
                        label,
                        RecipeError::OutsideRange {
                            elem: m.name(m.j(c)).into(),
                        },
                    )
                })?,
                Family::Injection => m.f_elem(c).ok_or_else(|| {
                    self.fail(
                        label,
                        RecipeError::UndefinedF {
                            elem: m.name(c).into(),
                        },
                    )
                })?,
            };
            out.insert(w);
        }
        self.push(label, TraceObject::Set(out.clone()));
        Ok(out)
    }

    /// The pairs coded by the members of a set, read at the plain `E` level.
    fn plain_pairs(&self, codes: &BTreeSet<Elem>) -> BTreeSet<UPair> {
        codes
            .iter()
            .filter_map(|&q| as_pair(&self.r.ext[q]))
            .collect()
    }

    /// The pairs coded by the members of a set under the family's membership.
    fn model_pairs(
        &self,
        step: &str,
        members: &BTreeSet<Elem>,
    ) -> Result<BTreeSet<UPair>, RecipeFailure> {
        let mut out = BTreeSet::new();
        for &q in members {
            if let Some(p) = as_pair(&self.members(step, q)?) {
                out.insert(p);
            }
        }
        Ok(out)
    }

    fn finish(
        self,
        target: AxiomId,
        inputs: Vec<Elem>,
        witness: Elem,
    ) -> Result<WitnessOutcome, RecipeFailure> {
        let validated = self.at("validate", self.r.validate(target, &inputs, witness))?;
        Ok(WitnessOutcome {
            target,
            family: self.r.family,
            inputs,
            witness,
            trace: self.trace,
            validated,
        })
    }
}

fn as_pair(s: &BTreeSet<Elem>) -> Option<UPair> {
    let mut it = s.iter();
    match (it.next(), it.next(), it.next()) {
        (Some(&a), None, None) => Some(UPair::singleton(a)),
        (Some(&a), Some(&b), None) => Some(UPair::new(a, b)),
        _ => None,
    }
}

/// `{{x, z} : ∃y ({x, y} ∈ c ∧ {y, z} ∈ d)}` over element pairs.
pub fn compose_pairs(c: &BTreeSet<UPair>, d: &BTreeSet<UPair>) -> BTreeSet<UPair> {
    let mut right: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
    for p in d {
        right.entry(p.low()).or_default().push(p.high());
        if !p.is_singleton() {
            right.entry(p.high()).or_default().push(p.low());
        }
    }
    let mut out = BTreeSet::new();
    for p in c {
        for (x, y) in [(p.low(), p.high()), (p.high(), p.low())] {
            for &z in right.get(&y).into_iter().flatten() {
                out.insert(UPair::new(x, z));
            }
        }
    }
    out
}

impl<'m> Recipes<'m> {
    pub fn new(m: &'m MembershipStructure, family: Family) -> Result<Recipes<'m>, RecipeError> {
        if m.f_mode() != Some(FMode::Element) {
            return Err(RecipeError::NeedsElementF);
        }
        let ext: Vec<BTreeSet<Elem>> = m.domain().map(|x| m.ext(x)).collect();
        let mut codes: HashMap<BTreeSet<Elem>, Vec<Elem>> = HashMap::new();
        for (x, s) in ext.iter().enumerate() {
            codes.entry(s.clone()).or_default().push(x);
        }
        let view = match family {
            Family::Automorphism => None,
            Family::Injection => m.injection_view(),
        };
        Ok(Recipes {
            m,
            family,
            ext,
            codes,
            view,
        })
    }

    pub fn structure(&self) -> &MembershipStructure {
        self.m
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// The element whose `E`-extension is exactly `set`.
    pub fn code_of(&self, set: &BTreeSet<Elem>) -> Result<Elem, RecipeError> {
        match self.codes.get(set).map(Vec::as_slice) {
            None | Some([]) => Err(RecipeError::MissingCode {
                set: self.m.show_set(set),
            }),
            Some([c]) => Ok(*c),
            Some(many) => Err(RecipeError::AmbiguousCode {
                set: self.m.show_set(set),
                candidates: self.m.show_set(many),
            }),
        }
    }

    /// Members of `x` under the family's membership relation.
    pub fn members(&self, x: Elem) -> Result<BTreeSet<Elem>, RecipeError> {
        let m = self.m;
        match self.family {
            Family::Automorphism => match m.f_elem(x) {
                Some(fx) => Ok(self.ext[m.j_inv(fx)].clone()),
                None => Err(RecipeError::UndefinedF {
                    elem: m.name(x).into(),
                }),
            },
            Family::Injection => Ok(m.f_inv(x).map(|c| self.ext[c].clone()).unwrap_or_default()),
        }
    }

    /// Evaluates the axiom's matrix at `inputs` and `witness` under the
    /// family's membership.
    pub fn validate(
        &self,
        axiom: AxiomId,
        inputs: &[Elem],
        witness: Elem,
    ) -> Result<bool, RecipeError> {
        let m = self.view.as_ref().unwrap_or(self.m);
        let phi = recode_translate(
            &builtin_axiom(axiom),
            RelSym::Mem,
            self.family.flavor(),
            None,
        )
        .expect("pure membership formula");
        let mut lead = Vec::new();
        let mut at = &phi;
        while let Formula::Forall(v, body) = at {
            lead.push(v.clone());
            at = body;
        }
        let Formula::Exists(y, matrix) = at else {
            return Err(EvalError::NotPrenexAxiom.into());
        };
        if lead.len() != inputs.len() {
            return Err(RecipeError::Arity {
                axiom,
                expected: lead.len(),
                got: inputs.len(),
            });
        }
        lead.push(y.clone());
        let compiled = Compiled::new(m, matrix, &lead, &EvalOptions::default())?;
        let mut env = vec![0; compiled.slots().len()];
        env[..inputs.len()].copy_from_slice(inputs);
        env[inputs.len()] = witness;
        Ok(compiled.eval(&mut env)?)
    }

    fn run(&self) -> Run<'_, 'm> {
        Run {
            r: self,
            trace: Vec::new(),
        }
    }

    fn require(&self, axiom: AxiomId, family: Family) -> Result<(), RecipeFailure> {
        if self.family == family {
            Ok(())
        } else {
            Err(RecipeFailure {
                step: "family".into(),
                error: RecipeError::UnsupportedFamily {
                    family: self.family,
                    axiom,
                },
                trace: Vec::new(),
            })
        }
    }

    /// `f⁻¹(j(k^c))` with `k = j⁻¹(f(x))` and the complement taken within
    /// the whole domain.
    pub fn complement(&self, x: Elem) -> Result<WitnessOutcome, RecipeFailure> {
        self.require(AxiomId::Complements, Family::Automorphism)?;
        let mut run = self.run();
        let k = run.members("k", x)?;
        run.push("k", TraceObject::Set(k.clone()));
        let kc: BTreeSet<Elem> = self.m.domain().filter(|e| !k.contains(e)).collect();
        run.push("k^c", TraceObject::Set(kc.clone()));
        let w = run.encode("k^c", &kc)?;
        run.finish(AxiomId::Complements, vec![x], w)
    }

    /// `f⁻¹(j({a, b}))`.
    pub fn pair(&self, a: Elem, b: Elem) -> Result<WitnessOutcome, RecipeFailure> {
        self.require(AxiomId::Pairing, Family::Automorphism)?;
        let mut run = self.run();
        let ab: BTreeSet<Elem> = [a, b].into();
        run.push("{a,b}", TraceObject::Set(ab.clone()));
        let w = run.encode("{a,b}", &ab)?;
        run.finish(AxiomId::Pairing, vec![a, b], w)
    }

    pub fn union(&self, x: Elem) -> Result<WitnessOutcome, RecipeFailure> {
        let m = self.m;
        let mut run = self.run();
        let target = match self.family {
            Family::Automorphism => {
                // k = ⋃ j⁻¹(f``x), read through the members of x
                let k = run.members("k", x)?;
                run.push("x", TraceObject::Set(k.clone()));
                let image: BTreeSet<Elem> = k.iter().filter_map(|&e| m.f_elem(e)).collect();
                run.push("f``x", TraceObject::Set(image.clone()));
                let union: BTreeSet<Elem> = image
                    .iter()
                    .flat_map(|&c| self.ext[m.j_inv(c)].iter().copied())
                    .collect();
                run.push("k", TraceObject::Set(union.clone()));
                union
            }
            Family::Injection => {
                let pre = m.f_inv(x).ok_or_else(|| {
                    run.fail(
                        "f^-1(x)",
                        RecipeError::OutsideRange {
                            elem: m.name(x).into(),
                        },
                    )
                })?;
                run.push("f^-1(x)", TraceObject::Elem(pre));
                let outer = self.ext[pre].clone();
                run.push("E(f^-1(x))", TraceObject::Set(outer.clone()));
                let k = lemma1_preimage(m, &outer).expect("element-valued f");
                run.push("k", TraceObject::Set(k.clone()));
                let union: BTreeSet<Elem> = k
                    .iter()
                    .flat_map(|&z| self.ext[z].iter().copied())
                    .collect();
                run.push("⋃k", TraceObject::Set(union.clone()));
                union
            }
        };
        let w = run.encode(
            if self.family == Family::Automorphism {
                "k"
            } else {
                "⋃k"
            },
            &target,
        )?;
        run.finish(AxiomId::SetUnion, vec![x], w)
    }

    pub fn compose(&self, x: Elem, y: Elem) -> Result<WitnessOutcome, RecipeFailure> {
        let m = self.m;
        let mut run = self.run();
        let (left, right) = match self.family {
            Family::Automorphism => {
                let k = run.members("k", x)?;
                run.push("k", TraceObject::Set(k.clone()));
                let l = run.members("l", y)?;
                run.push("l", TraceObject::Set(l.clone()));
                (
                    run.model_pairs("pairs(k)", &k)?,
                    run.model_pairs("pairs(l)", &l)?,
                )
            }
            Family::Injection => {
                let pull = |run: &mut Run, label: &str, v: Elem| {
                    let pre = m.f_inv(v).ok_or_else(|| {
                        run.fail(
                            format!("f^-1({label})"),
                            RecipeError::OutsideRange {
                                elem: m.name(v).into(),
                            },
                        )
                    })?;
                    run.push(format!("f^-1({label})"), TraceObject::Elem(pre));
                    let codes = lemma1_preimage(m, &self.ext[pre]).expect("element-valued f");
                    run.push(format!("f^-1``{label}"), TraceObject::Set(codes.clone()));
                    Ok::<_, RecipeFailure>(run.plain_pairs(&codes))
                };
                (pull(&mut run, "x", x)?, pull(&mut run, "y", y)?)
            }
        };
        run.push("pairs(x)", TraceObject::Pairs(left.clone()));
        run.push("pairs(y)", TraceObject::Pairs(right.clone()));
        let q = compose_pairs(&left, &right);
        run.push("q", TraceObject::Pairs(q.clone()));
        let label = match self.family {
            Family::Automorphism => "r",
            Family::Injection => "f``K",
        };
        let r = run.encode_pairs(label, &q)?;
        let w = run.encode(label, &r)?;
        run.finish(AxiomId::UComposition, vec![x, y], w)
    }

    pub fn pi(&self, reading: PiReading) -> Result<WitnessOutcome, RecipeFailure> {
        let mut run = self.run();
        let mut members = Vec::with_capacity(self.m.len());
        for x in self.m.domain() {
            members.push(run.members("I", x)?);
        }
        let mut intersecting = BTreeSet::new();
        for u in self.m.domain() {
            for v in u..self.m.len() {
                if !members[u].is_disjoint(&members[v]) {
                    intersecting.insert(UPair::new(u, v));
                }
            }
        }
        run.push("I", TraceObject::Pairs(intersecting.clone()));
        let w = match reading {
            PiReading::Pairwise => {
                let x = run.encode_pairs("X", &intersecting)?;
                run.encode("X", &x)?
            }
            PiReading::Setwise => {
                let mut codes = BTreeSet::new();
                for p in &intersecting {
                    codes.insert(run.at("codes(I)", self.code_of(&p.members()))?);
                }
                run.push("codes(I)", TraceObject::Set(codes.clone()));
                run.encode("I", &codes)?
            }
        };
        run.finish(AxiomId::UIntersection, Vec::new(), w)
    }

    /// Dispatches on the axiom; `inputs` must match its universal prefix.
    pub fn witness(
        &self,
        axiom: AxiomId,
        inputs: &[Elem],
        reading: PiReading,
    ) -> Result<WitnessOutcome, RecipeFailure> {
        let arity = |expected: usize| {
            if inputs.len() == expected {
                Ok(())
            } else {
                Err(RecipeFailure {
                    step: "inputs".into(),
                    error: RecipeError::Arity {
                        axiom,
                        expected,
                        got: inputs.len(),
                    },
                    trace: Vec::new(),
                })
            }
        };
        match axiom {
            AxiomId::Complements => arity(1).and_then(|_| self.complement(inputs[0])),
            AxiomId::Pairing => arity(2).and_then(|_| self.pair(inputs[0], inputs[1])),
            AxiomId::SetUnion => arity(1).and_then(|_| self.union(inputs[0])),
            AxiomId::UComposition => arity(2).and_then(|_| self.compose(inputs[0], inputs[1])),
            AxiomId::UIntersection => arity(0).and_then(|_| self.pi(reading)),
            AxiomId::Extensionality => Err(RecipeFailure {
                step: "axiom".into(),
                error: RecipeError::UnsupportedFamily {
                    family: self.family,
                    axiom,
                },
                trace: Vec::new(),
            }),
        }
    }
}

fn recipes(m: &MembershipStructure, family: Family) -> Result<Recipes<'_>, RecipeFailure> {
    Recipes::new(m, family).map_err(|error| RecipeFailure {
        step: "setup".into(),
        error,
        trace: Vec::new(),
    })
}

pub fn complement_witness(
    m: &MembershipStructure,
    x: Elem,
) -> Result<WitnessOutcome, RecipeFailure> {
    recipes(m, Family::Automorphism)?.complement(x)
}

pub fn pair_witness(
    m: &MembershipStructure,
    a: Elem,
    b: Elem,
) -> Result<WitnessOutcome, RecipeFailure> {
    recipes(m, Family::Automorphism)?.pair(a, b)
}

pub fn union_witness(
    m: &MembershipStructure,
    x: Elem,
    family: Family,
) -> Result<WitnessOutcome, RecipeFailure> {
    recipes(m, family)?.union(x)
}

pub fn compose_witness(
    m: &MembershipStructure,
    x: Elem,
    y: Elem,
    family: Family,
) -> Result<WitnessOutcome, RecipeFailure> {
    recipes(m, family)?.compose(x, y)
}

pub fn pi_witness(
    m: &MembershipStructure,
    family: Family,
    reading: PiReading,
) -> Result<WitnessOutcome, RecipeFailure> {
    recipes(m, family)?.pi(reading)
}

/// Outcome of [`transposition_example`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranspositionReport {
    pub n: usize,
    /// First pair `(x, y)` with `E(x, y) ≠ E(g(x), g(y))`.
    pub witness: (Elem, Elem),
    pub edge_before: bool,
    pub edge_after: bool,
    /// The error raised when `g` is offered as `j`.
    pub rejection: StructureError,
    /// Stage whose pairs were checked exhaustively.
    pub pair_stage: usize,
    pub pair_sets_checked: usize,
    pub downward_mismatches: usize,
    pub upward_mismatches: usize,
    pub partition_mismatches: usize,
    /// Pair-sets avoiding `∅` and `{∅}`, all of which must be fixed by `g`.
    pub avoiding: usize,
    pub avoiding_fixed: usize,
    /// Image of `{{∅, {∅}}}` under the downward map.
    pub swapped_image: BTreeSet<UPair>,
}

impl TranspositionReport {
    pub fn agrees(&self) -> bool {
        self.downward_mismatches == 0
            && self.upward_mismatches == 0
            && self.partition_mismatches == 0
            && self.avoiding == self.avoiding_fixed
    }
}

impl fmt::Display for TranspositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.witness;
        writeln!(f, "stage: V_{}", self.n)?;
        writeln!(f, "g: swaps 0 and 1, fixes every other code")?;
        writeln!(
            f,
            "not an automorphism: E({x},{y}) = {} but E(g({x}),g({y})) = {}",
            self.edge_before, self.edge_after
        )?;
        writeln!(f, "as j: {}", self.rejection)?;
        writeln!(
            f,
            "pair-sets over V_{}: {}",
            self.pair_stage, self.pair_sets_checked
        )?;
        writeln!(f, "downward mismatches: {}", self.downward_mismatches)?;
        writeln!(f, "upward mismatches: {}", self.upward_mismatches)?;
        writeln!(f, "partition mismatches: {}", self.partition_mismatches)?;
        writeln!(
            f,
            "avoiding {{0,1}}: {} of {} fixed",
            self.avoiding_fixed, self.avoiding
        )?;
        let image: Vec<String> = self
            .swapped_image
            .iter()
            .map(|p| format!("{{{},{}}}", p.low(), p.high()))
            .collect();
        write!(f, "downward {{{{0,1}}}}: {{{}}}", image.join(","))
    }
}

/// The transposition `g` of `∅` (code 0) and `{∅}` (code 1) on `V_n`, used
/// as `f` with `j` the identity.
///
/// Checks that `g` breaks membership, and that the upward and downward
/// maps through `g` agree with both a brute-force oracle and the argument
/// that splits each pair-set into pairs avoiding `{0, 1}` (fixed) and the
/// rest (swapped), over every pair-set on `V_min(n, 3)`.
pub fn transposition_example(n: usize) -> Result<TranspositionReport, HfError> {
    assert!((2..=4).contains(&n), "stage must lie in 2..=4");
    let stage = v_stage(n)?;
    let size = stage.len();
    let g = |e: Elem| match e {
        0 => 1,
        1 => 0,
        e => e,
    };
    let base = StructureBuilder::hf_domain(stage.elems());
    let rejection = base
        .clone()
        .j((0..size).map(g).collect())
        .build()
        .expect_err("g is never an automorphism");
    let mut builder = base;
    for e in 0..size {
        builder = builder.f(e, g(e));
    }
    let m = builder.build().expect("g is a bijection");

    let witness = m
        .domain()
        .flat_map(|x| m.domain().map(move |y| (x, y)))
        .find(|&(x, y)| m.edge(x, y) != m.edge(g(x), g(y)))
        .expect("g moves an edge");

    let pair_stage = n.min(3);
    let width = v_stage(pair_stage)?.len();
    let all_pairs: Vec<UPair> = (0..width)
        .flat_map(|a| (a..width).map(move |b| UPair::new(a, b)))
        .collect();
    let mut report = TranspositionReport {
        n,
        witness,
        edge_before: m.edge(witness.0, witness.1),
        edge_after: m.edge(g(witness.0), g(witness.1)),
        rejection,
        pair_stage,
        pair_sets_checked: 0,
        downward_mismatches: 0,
        upward_mismatches: 0,
        partition_mismatches: 0,
        avoiding: 0,
        avoiding_fixed: 0,
        swapped_image: downward_set(&m, &[UPair::new(0, 1)].into()).expect("element-valued f"),
    };
    for mask in 0u64..(1 << all_pairs.len()) {
        let x: BTreeSet<UPair> = all_pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        report.pair_sets_checked += 1;
        let down = downward_set(&m, &x).expect("element-valued f");
        let up = upward_set(&m, &x).expect("element-valued f");

        let mut down_oracle = BTreeSet::new();
        let mut up_oracle = BTreeSet::new();
        for z in m.domain() {
            for u in m.domain() {
                if x.contains(&UPair::new(z, u)) {
                    down_oracle.insert(UPair::new(g(z), g(u)));
                }
                if x.contains(&UPair::new(g(z), g(u))) {
                    up_oracle.insert(UPair::new(z, u));
                }
            }
        }
        report.downward_mismatches += usize::from(down != down_oracle);
        report.upward_mismatches += usize::from(up != up_oracle);

        let (touching, avoiding): (BTreeSet<UPair>, BTreeSet<UPair>) =
            x.iter().partition(|p| p.low() <= 1 || p.high() <= 1);
        let mut partition: BTreeSet<UPair> = avoiding.clone();
        partition.extend(touching.iter().map(|p| UPair::new(g(p.low()), g(p.high()))));
        report.partition_mismatches += usize::from(down != partition || up != partition);
        if touching.is_empty() {
            report.avoiding += 1;
            report.avoiding_fixed += usize::from(down == x && up == x);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::load_structure;

    fn hf_identity(n: usize) -> MembershipStructure {
        let stage = v_stage(n).unwrap();
        StructureBuilder::hf_domain(stage.elems())
            .identity_f()
            .build()
            .unwrap()
    }

    /// Digraph with an empty node, a universal node and two singletons.
    fn with_universe() -> MembershipStructure {
        load_structure(
            "domain: e u s t\n\
             edge: e u\nedge: u u\nedge: s u\nedge: t u\n\
             edge: e s\nedge: s t\n\
             f: e -> e\nf: u -> u\nf: s -> s\nf: t -> t\n",
        )
        .unwrap()
    }

    #[test]
    fn complement_of_empty_is_universe() {
        let m = with_universe();
        let out = complement_witness(&m, 0).unwrap();
        assert_eq!(out.witness, 1);
        assert!(out.validated);
        let back = complement_witness(&m, 1).unwrap();
        assert_eq!(back.witness, 0);
        assert!(back.validated);
        let labels: Vec<&str> = out.trace.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, ["k", "k^c", "code(k^c)", "j(k^c)", "f^-1(j(k^c))"]);
    }

    #[test]
    fn complement_missing_code() {
        let m = with_universe();
        // complement of {e} is {u, s, t}: nobody has that extension
        let err = complement_witness(&m, 2).unwrap_err();
        assert_eq!(err.step, "code(k^c)");
        assert!(matches!(err.error, RecipeError::MissingCode { .. }));
        assert_eq!(err.trace.len(), 2);
    }

    #[test]
    fn pair_in_v3() {
        let m = hf_identity(3);
        let out = pair_witness(&m, 0, 1).unwrap();
        assert_eq!(m.name(out.witness), "3");
        assert!(out.validated);
        let single = pair_witness(&m, 1, 1).unwrap();
        assert_eq!(m.name(single.witness), "2");
        // {∅, {{∅}}} has code 5, outside V_3
        let err = pair_witness(&m, 0, 2).unwrap_err();
        assert!(matches!(err.error, RecipeError::MissingCode { .. }));
    }

    #[test]
    fn pair_outside_range() {
        let m =
            load_structure("domain: a b p\nedge: a p\nedge: b p\nf: a -> a\nf: b -> b\n").unwrap();
        let err = pair_witness(&m, 0, 1).unwrap_err();
        assert_eq!(err.step, "f^-1(j({a,b}))");
        assert_eq!(err.error, RecipeError::OutsideRange { elem: "p".into() });
    }

    #[test]
    fn union_both_families() {
        let m = hf_identity(4);
        // x = {{{∅}}} has code 4 and union {{∅}}, code 2
        let x = m.lookup("4").unwrap();
        for family in [Family::Automorphism, Family::Injection] {
            let out = union_witness(&m, x, family).unwrap();
            assert_eq!(m.name(out.witness), "2");
            assert!(out.validated);
            let empty = union_witness(&m, 0, family).unwrap();
            assert_eq!(m.name(empty.witness), "0");
        }
    }

    #[test]
    fn union_outside_range_for_injection() {
        let m = load_structure("domain: a b\nedge: a b\nf: a -> a\n").unwrap();
        let err = union_witness(&m, 1, Family::Injection).unwrap_err();
        assert_eq!(err.step, "f^-1(x)");
    }

    #[test]
    fn compose_and_pi_on_v4() {
        let m = hf_identity(4);
        for family in [Family::Automorphism, Family::Injection] {
            // x = {{0,1}} = code 8, y = {{1}} = code 4: composition {{0,1}}
            let out = compose_witness(&m, 8, 4, family).unwrap();
            assert_eq!(out.witness, 8);
            assert!(out.validated);
            let out = compose_witness(&m, 0, 8, family).unwrap();
            assert_eq!(out.witness, 0);
            // V_4 has no code for its set of intersecting pairs
            let err = pi_witness(&m, family, PiReading::Pairwise).unwrap_err();
            assert!(err.error.is_coding_gap());
        }
    }

    #[test]
    fn pi_on_small_digraph() {
        // a = {a} is the only set meeting anything, and it codes {a, a}
        let m = load_structure("domain: e a\nedge: a a\nf: e -> e\nf: a -> a\n").unwrap();
        for reading in [PiReading::Pairwise, PiReading::Setwise] {
            let out = pi_witness(&m, Family::Automorphism, reading).unwrap();
            assert_eq!(m.name(out.witness), "a");
            assert!(out.validated);
        }
    }

    #[test]
    fn family_restrictions() {
        let m = hf_identity(2);
        let r = Recipes::new(&m, Family::Injection).unwrap();
        assert!(matches!(
            r.complement(0).unwrap_err().error,
            RecipeError::UnsupportedFamily { .. }
        ));
        let set_valued = load_structure("domain: a\nfset: a -> {}\n").unwrap();
        assert_eq!(
            union_witness(&set_valued, 0, Family::Injection)
                .unwrap_err()
                .error,
            RecipeError::NeedsElementF
        );
    }

    #[test]
    fn compose_pairs_matches_definition() {
        let c: BTreeSet<UPair> = [UPair::new(0, 1)].into();
        let d: BTreeSet<UPair> = [UPair::new(1, 2)].into();
        assert_eq!(compose_pairs(&c, &d), [UPair::new(0, 2)].into());
        assert_eq!(compose_pairs(&c, &BTreeSet::new()), BTreeSet::new());
        let s: BTreeSet<UPair> = [UPair::singleton(3)].into();
        assert_eq!(compose_pairs(&s, &s), s);
    }

    #[test]
    fn transposition_on_v3() {
        let r = transposition_example(3).unwrap();
        assert_eq!(r.witness, (0, 1));
        assert!(r.edge_before && !r.edge_after);
        assert_eq!(
            r.rejection,
            StructureError::AutomorphismViolation {
                x: "0".into(),
                y: "1".into(),
                holds: true
            }
        );
        assert_eq!(r.pair_sets_checked, 1024);
        assert!(r.agrees());
        assert_eq!(r.swapped_image, [UPair::new(0, 1)].into());
        assert_eq!(r.avoiding, 8);
    }
}
