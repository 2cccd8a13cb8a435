//! Brute-force Tarskian evaluation over a finite structure.
//!
//! Formulas are compiled once per structure: variables become slots in an
//! environment vector and every relation symbol used by the formula becomes
//! a precomputed `n × n` truth table.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{Elem, MembershipStructure};
use crate::formula::{
    builtin_axiom, extensionality_formula, recode_translate, AxiomId, Formula, RelSym, Var,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value assigned to free variable `{0}`")]
    MissingAssignment(Var),
    #[error("relation `{rel}` unsupported: {reason}")]
    UnsupportedRelation { rel: RelSym, reason: String },
    #[error("f is undefined at `{elem}`")]
    UndefinedF { elem: String },
    #[error("unknown guard predicate `{0}`")]
    UnknownPredicate(String),
    #[error("axiom body is not of the form forall.. exists y. matrix")]
    NotPrenexAxiom,
}

/// Evaluation settings.
#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Interpretation given to `mem` atoms.
    pub mem_as: RelSym,
    /// Range of the quantifiers; the whole domain when `None`.
    pub quantifier_domain: Option<Vec<Elem>>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            mem_as: RelSym::Mem,
            quantifier_domain: None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cell {
    False,
    True,
    Undefined,
}

struct Table {
    cells: Vec<Cell>,
}

enum Node {
    Rel {
        table: usize,
        left: usize,
        right: usize,
    },
    Eq(usize, usize),
    Guard {
        mask: usize,
        var: usize,
    },
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// A formula compiled against one structure.
pub struct Compiled<'m> {
    m: &'m MembershipStructure,
    root: Node,
    slots: Vec<Var>,
    tables: Vec<Table>,
    masks: Vec<Vec<bool>>,
    range: Vec<Elem>,
}

impl<'m> Compiled<'m> {
    /// Compiles `phi`. Variables listed in `leading` get slots `0..leading.len()`
    /// in that order; remaining variables follow.
    pub fn new(
        m: &'m MembershipStructure,
        phi: &Formula,
        leading: &[Var],
        opts: &EvalOptions,
    ) -> Result<Compiled<'m>, EvalError> {
        let mut slots: Vec<Var> = leading.to_vec();
        for v in phi.all_vars() {
            if !slots.contains(&v) {
                slots.push(v);
            }
        }
        let mut c = Compiled {
            m,
            root: Node::Eq(0, 0),
            slots,
            tables: Vec::new(),
            masks: Vec::new(),
            range: opts
                .quantifier_domain
                .clone()
                .unwrap_or_else(|| m.domain().collect()),
        };
        let mut table_of: BTreeMap<RelSym, usize> = BTreeMap::new();
        let mut mask_of: BTreeMap<String, usize> = BTreeMap::new();
        c.root = c.compile(phi, opts.mem_as, &mut table_of, &mut mask_of)?;
        Ok(c)
    }

    fn slot(&self, v: &Var) -> usize {
        self.slots
            .iter()
            .position(|s| s == v)
            .expect("slot allocated")
    }

    fn compile(
        &mut self,
        phi: &Formula,
        mem_as: RelSym,
        table_of: &mut BTreeMap<RelSym, usize>,
        mask_of: &mut BTreeMap<String, usize>,
    ) -> Result<Node, EvalError> {
        let mut go = |this: &mut Self, a: &Formula| this.compile(a, mem_as, table_of, mask_of);
        Ok(match phi {
            Formula::Atom(RelSym::Eq, l, r) => Node::Eq(self.slot(l), self.slot(r)),
            Formula::Atom(rel, l, r) => {
                let rel = if *rel == RelSym::Mem { mem_as } else { *rel };
                let (left, right) = (self.slot(l), self.slot(r));
                if rel == RelSym::Eq {
                    Node::Eq(left, right)
                } else {
                    let table = match table_of.get(&rel) {
                        Some(&t) => t,
                        None => {
                            let t = self.tables.len();
                            self.tables.push(build_table(self.m, rel)?);
                            table_of.insert(rel, t);
                            t
                        }
                    };
                    Node::Rel { table, left, right }
                }
            }
            Formula::Guard(name, v) => {
                let mask = match mask_of.get(name) {
                    Some(&k) => k,
                    None => {
                        let mask = self
                            .m
                            .predicate(name)
                            .ok_or_else(|| EvalError::UnknownPredicate(name.clone()))?;
                        self.masks.push(mask);
                        mask_of.insert(name.clone(), self.masks.len() - 1);
                        self.masks.len() - 1
                    }
                };
                Node::Guard {
                    mask,
                    var: self.slot(v),
                }
            }
            Formula::Not(a) => Node::Not(Box::new(go(self, a)?)),
            Formula::And(a, b) => Node::And(Box::new(go(self, a)?), Box::new(go(self, b)?)),
            Formula::Or(a, b) => Node::Or(Box::new(go(self, a)?), Box::new(go(self, b)?)),
            Formula::Implies(a, b) => Node::Implies(Box::new(go(self, a)?), Box::new(go(self, b)?)),
            Formula::Iff(a, b) => Node::Iff(Box::new(go(self, a)?), Box::new(go(self, b)?)),
            Formula::Forall(v, a) => Node::Forall(self.slot(v), Box::new(go(self, a)?)),
            Formula::Exists(v, a) => Node::Exists(self.slot(v), Box::new(go(self, a)?)),
        })
    }

    pub fn slots(&self) -> &[Var] {
        &self.slots
    }

    /// Evaluates with `env[i]` holding the value of slot `i`. Slots of bound
    /// variables are overwritten.
    pub fn eval(&self, env: &mut [Elem]) -> Result<bool, EvalError> {
        self.run(&self.root, env)
    }

    fn run(&self, node: &Node, env: &mut [Elem]) -> Result<bool, EvalError> {
        let n = self.m.len();
        Ok(match node {
            Node::Rel { table, left, right } => {
                let (y, x) = (env[*left], env[*right]);
                match self.tables[*table].cells[y * n + x] {
                    Cell::True => true,
                    Cell::False => false,
                    Cell::Undefined => {
                        return Err(EvalError::UndefinedF {
                            elem: self.m.name(x).to_owned(),
                        })
                    }
                }
            }
            Node::Eq(a, b) => env[*a] == env[*b],
            Node::Guard { mask, var } => self.masks[*mask][env[*var]],
            Node::Not(a) => !self.run(a, env)?,
            Node::And(a, b) => self.run(a, env)? && self.run(b, env)?,
            Node::Or(a, b) => self.run(a, env)? || self.run(b, env)?,
            Node::Implies(a, b) => !self.run(a, env)? || self.run(b, env)?,
            Node::Iff(a, b) => self.run(a, env)? == self.run(b, env)?,
            Node::Forall(slot, body) => self.quantify(*slot, body, env, false)?,
            Node::Exists(slot, body) => self.quantify(*slot, body, env, true)?,
        })
    }
}

impl Compiled<'_> {
    /// Searches the range for a value of `slot` making `body` equal to
    /// `target`; the outer value of the slot is restored afterwards.
    fn quantify(
        &self,
        slot: usize,
        body: &Node,
        env: &mut [Elem],
        target: bool,
    ) -> Result<bool, EvalError> {
        let saved = env[slot];
        let mut found = false;
        for &e in &self.range {
            env[slot] = e;
            match self.run(body, env) {
                Ok(v) if v == target => {
                    found = true;
                    break;
                }
                Ok(_) => {}
                Err(err) => {
                    env[slot] = saved;
                    return Err(err);
                }
            }
        }
        env[slot] = saved;
        Ok(found == target)
    }
}

fn build_table(m: &MembershipStructure, rel: RelSym) -> Result<Table, EvalError> {
    m.supports(rel)?;
    let n = m.len();
    let mut cells = Vec::with_capacity(n * n);
    for y in 0..n {
        for x in 0..n {
            cells.push(match m.holds(rel, y, x) {
                Ok(true) => Cell::True,
                Ok(false) => Cell::False,
                Err(EvalError::UndefinedF { .. }) => Cell::Undefined,
                Err(e) => return Err(e),
            });
        }
    }
    Ok(Table { cells })
}

/// Evaluates `phi` with quantifiers over the whole domain.
pub fn eval(
    m: &MembershipStructure,
    phi: &Formula,
    assignment: &BTreeMap<Var, Elem>,
) -> Result<bool, EvalError> {
    eval_with(m, phi, assignment, &EvalOptions::default())
}

pub fn eval_with(
    m: &MembershipStructure,
    phi: &Formula,
    assignment: &BTreeMap<Var, Elem>,
    opts: &EvalOptions,
) -> Result<bool, EvalError> {
    let free: Vec<Var> = phi.free_vars().into_iter().collect();
    if let Some(v) = free.iter().find(|v| !assignment.contains_key(*v)) {
        return Err(EvalError::MissingAssignment(v.clone()));
    }
    let compiled = Compiled::new(m, phi, &free, opts)?;
    let mut env = vec![0; compiled.slots().len()];
    for (i, v) in free.iter().enumerate() {
        env[i] = assignment[v];
    }
    compiled.eval(&mut env)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        })
    }
}

/// Outcome of checking one axiom over one structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub flavor: RelSym,
    pub verdict: Verdict,
    /// The universally quantified variables, in prefix order.
    pub universals: Vec<Var>,
    /// The existential variable (absent for extensionality).
    pub existential: Option<Var>,
    /// For every universal tuple, the least existential witness. Filled
    /// only up to the counterexample when the axiom fails.
    pub witnesses: Vec<(Vec<Elem>, Elem)>,
    /// The lexicographically least tuple without a witness.
    pub counterexample: Option<Vec<Elem>>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// Re-evaluates the axiom at the recorded witnesses and counterexample;
    /// true when every record reproduces the verdict.
    pub fn replay(&self, m: &MembershipStructure) -> Result<bool, EvalError> {
        if self.axiom == AxiomId::Extensionality {
            let Some(cx) = &self.counterexample else {
                return Ok(self.holds());
            };
            let phi = recode_translate(&extensionality_formula(), RelSym::Mem, self.flavor, None)
                .expect("pure membership formula");
            let (_, body) = split_universals(&phi);
            let vars = &self.universals;
            let assignment = vars.iter().cloned().zip(cx.iter().copied()).collect();
            return Ok(!eval(m, body, &assignment)?);
        }
        let phi = recode_translate(&builtin_axiom(self.axiom), RelSym::Mem, self.flavor, None)
            .expect("pure membership formula");
        let (universals, rest) = split_universals(&phi);
        let Formula::Exists(y, matrix) = rest else {
            return Err(EvalError::NotPrenexAxiom);
        };
        let mut lead = universals.clone();
        lead.push(y.clone());
        let compiled = Compiled::new(m, matrix, &lead, &EvalOptions::default())?;
        let mut env = vec![0; compiled.slots().len()];
        for (tuple, w) in &self.witnesses {
            env[..tuple.len()].copy_from_slice(tuple);
            env[tuple.len()] = *w;
            if !compiled.eval(&mut env)? {
                return Ok(false);
            }
        }
        if let Some(cx) = &self.counterexample {
            for y in m.domain() {
                env[..cx.len()].copy_from_slice(cx);
                env[cx.len()] = y;
                if compiled.eval(&mut env)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Splits leading universal quantifiers off a formula.
pub(crate) fn split_universals(phi: &Formula) -> (Vec<Var>, &Formula) {
    let mut vars = Vec::new();
    let mut at = phi;
    while let Formula::Forall(v, body) = at {
        vars.push(v.clone());
        at = body;
    }
    (vars, at)
}

/// Calls `visit` on every tuple of `arity` elements from `range`, in
/// lexicographic order, until it returns `false`.
pub(crate) fn for_each_tuple(
    range: &[Elem],
    arity: usize,
    mut visit: impl FnMut(&[Elem]) -> Result<bool, EvalError>,
) -> Result<(), EvalError> {
    if arity > 0 && range.is_empty() {
        return Ok(());
    }
    let mut idx = vec![0usize; arity];
    let mut tuple: Vec<Elem> = vec![range.first().copied().unwrap_or(0); arity];
    loop {
        if !visit(&tuple)? {
            return Ok(());
        }
        let mut k = arity;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < range.len() {
                tuple[k] = range[idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = range[0];
        }
    }
}

/// Checks one of the five axioms with `mem` read as `flavor`.
pub fn check_axiom(
    m: &MembershipStructure,
    id: AxiomId,
    flavor: RelSym,
) -> Result<AxiomReport, EvalError> {
    if id == AxiomId::Extensionality {
        return check_extensionality(m, flavor, ExtScope::All);
    }
    let phi = recode_translate(&builtin_axiom(id), RelSym::Mem, flavor, None)
        .expect("pure membership formula");
    let (universals, rest) = split_universals(&phi);
    let Formula::Exists(y, matrix) = rest else {
        return Err(EvalError::NotPrenexAxiom);
    };
    let mut lead = universals.clone();
    lead.push(y.clone());
    let compiled = Compiled::new(m, matrix, &lead, &EvalOptions::default())?;
    let domain: Vec<Elem> = m.domain().collect();
    let arity = universals.len();
    let mut env = vec![0; compiled.slots().len()];
    let mut witnesses = Vec::new();
    let mut counterexample = None;
    for_each_tuple(&domain, arity, |tuple| {
        for &cand in &domain {
            env[..arity].copy_from_slice(tuple);
            env[arity] = cand;
            if compiled.eval(&mut env)? {
                witnesses.push((tuple.to_vec(), cand));
                return Ok(true);
            }
        }
        counterexample = Some(tuple.to_vec());
        Ok(false)
    })?;
    Ok(AxiomReport {
        axiom: id,
        flavor,
        verdict: if counterexample.is_some() {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        universals,
        existential: Some(y.clone()),
        witnesses,
        counterexample,
    })
}

/// Which elements extensionality is asked of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtScope {
    All,
    /// Only elements that can carry members under the flavor: `dom(f)` for
    /// `memf` and `mem'`, the code set for `mem*`, everything for `mem`.
    SetsOnly,
}

/// Checks `∀x ∀y ((∀z (z R x ↔ z R y)) → x = y)` with `R` the flavor.
pub fn check_extensionality(
    m: &MembershipStructure,
    flavor: RelSym,
    scope: ExtScope,
) -> Result<AxiomReport, EvalError> {
    let phi = recode_translate(&extensionality_formula(), RelSym::Mem, flavor, None)
        .expect("pure membership formula");
    let (universals, body) = split_universals(&phi);
    let compiled = Compiled::new(m, body, &universals, &EvalOptions::default())?;
    let candidates: Vec<Elem> = match (scope, flavor) {
        (ExtScope::All, _) | (ExtScope::SetsOnly, RelSym::Mem | RelSym::Eq) => m.domain().collect(),
        (ExtScope::SetsOnly, RelSym::MemStar) => m
            .code_set()
            .map(|s| s.into_iter().collect())
            .unwrap_or_default(),
        (ExtScope::SetsOnly, RelSym::MemPrime | RelSym::MemF) => m.dom_f().into_iter().collect(),
    };
    let mut env = vec![0; compiled.slots().len()];
    let mut counterexample = None;
    for_each_tuple(&candidates, 2, |tuple| {
        env[..2].copy_from_slice(tuple);
        if compiled.eval(&mut env)? {
            Ok(true)
        } else {
            counterexample = Some(tuple.to_vec());
            Ok(false)
        }
    })?;
    Ok(AxiomReport {
        axiom: AxiomId::Extensionality,
        flavor,
        verdict: if counterexample.is_some() {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        universals,
        existential: None,
        witnesses: Vec::new(),
        counterexample,
    })
}
