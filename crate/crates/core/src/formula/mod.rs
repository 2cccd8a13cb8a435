//! First-order formulas over the membership language.
//!
//! Atoms are binary (`x mem y`, `x = y`, and the recoded flavors) plus unary
//! guard predicates `D(x)` introduced by [`recode_translate`] when quantifiers
//! are relativized. Parsed formulas are normalized so that every quantifier
//! binds a name used nowhere else in the formula.

mod axioms;
mod parser;
mod translate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use axioms::{builtin_axiom, builtin_axioms, extensionality_formula, AxiomId};
pub use parser::{parse_closed, parse_formula, ParseError};
pub use translate::{recode_translate, TranslateError};

/// A variable name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_owned())
    }
}

/// Binary relation symbols of the object language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelSym {
    /// `=`
    Eq,
    /// `mem`, the base membership (edge relation) of a structure.
    Mem,
    /// `mem*`, membership read through `j⁻¹` and the code set.
    MemStar,
    /// `mem'`, membership read through `j⁻¹ ∘ f`.
    MemPrime,
    /// `memf`, membership read through a set-valued `f`.
    MemF,
}

impl RelSym {
    pub const ALL: [RelSym; 5] = [
        RelSym::Eq,
        RelSym::Mem,
        RelSym::MemStar,
        RelSym::MemPrime,
        RelSym::MemF,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            RelSym::Eq => "=",
            RelSym::Mem => "mem",
            RelSym::MemStar => "mem*",
            RelSym::MemPrime => "mem'",
            RelSym::MemF => "memf",
        }
    }

    pub fn from_keyword(s: &str) -> Option<RelSym> {
        RelSym::ALL.into_iter().find(|r| r.keyword() == s)
    }

    /// True for the four membership flavors (everything except `=`).
    pub fn is_membership(self) -> bool {
        self != RelSym::Eq
    }
}

impl fmt::Display for RelSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(RelSym, Var, Var),
    /// Unary guard predicate, `name(var)`.
    Guard(String, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// Counts of the syntactic pieces of a formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Shape {
    pub atoms: usize,
    pub guards: usize,
    pub quantifiers: usize,
    pub connectives: usize,
}

impl Formula {
    pub fn atom(rel: RelSym, left: impl Into<Var>, right: impl Into<Var>) -> Formula {
        Formula::Atom(rel, left.into(), right.into())
    }

    pub fn mem(left: impl Into<Var>, right: impl Into<Var>) -> Formula {
        Formula::atom(RelSym::Mem, left, right)
    }

    pub fn eq(left: impl Into<Var>, right: impl Into<Var>) -> Formula {
        Formula::atom(RelSym::Eq, left, right)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(phi: Formula) -> Formula {
        Formula::Not(Box::new(phi))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<Var>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<Var>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    /// Variables with at least one free occurrence.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        fn walk(phi: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
            let mut note = |v: &Var, bound: &Vec<Var>| {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            };
            match phi {
                Formula::Atom(_, l, r) => {
                    note(l, bound);
                    note(r, bound);
                }
                Formula::Guard(_, v) => note(v, bound),
                Formula::Not(a) => walk(a, bound, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    bound.push(v.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |phi| match phi {
            Formula::Atom(_, l, r) => {
                out.insert(l.clone());
                out.insert(r.clone());
            }
            Formula::Guard(_, v) | Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Relation symbols used by atoms.
    pub fn relations(&self) -> BTreeSet<RelSym> {
        let mut out = BTreeSet::new();
        self.visit(&mut |phi| {
            if let Formula::Atom(r, _, _) = phi {
                out.insert(*r);
            }
        });
        out
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<(RelSym, &Var, &Var)> {
        fn walk<'a>(phi: &'a Formula, out: &mut Vec<(RelSym, &'a Var, &'a Var)>) {
            match phi {
                Formula::Atom(r, l, rt) => out.push((*r, l, rt)),
                Formula::Guard(..) => {}
                Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => walk(a, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn shape(&self) -> Shape {
        let mut s = Shape::default();
        self.visit(&mut |phi| match phi {
            Formula::Atom(..) => s.atoms += 1,
            Formula::Guard(..) => s.guards += 1,
            Formula::Forall(..) | Formula::Exists(..) => s.quantifiers += 1,
            _ => s.connectives += 1,
        });
        s
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Atom(..) | Formula::Guard(..) => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Renames bound variables apart.
    ///
    /// After normalization no two quantifiers bind the same name and no bound
    /// name coincides with a free variable. Quantifiers that already satisfy
    /// this keep their names, so normalization is idempotent.
    pub fn normalized(&self) -> Formula {
        let free = self.free_vars();
        let mut taken: BTreeSet<Var> = self.all_vars();
        let mut used: BTreeSet<Var> = free;
        let mut scope: Vec<(Var, Var)> = Vec::new();
        normalize_rec(self, &mut scope, &mut used, &mut taken)
    }

    /// True when no quantifier rebinds a name bound elsewhere or free.
    pub fn is_normalized(&self) -> bool {
        let mut seen = self.free_vars();
        let mut ok = true;
        self.visit(&mut |phi| {
            if let Formula::Forall(v, _) | Formula::Exists(v, _) = phi {
                ok &= seen.insert(v.clone());
            }
        });
        ok
    }

    /// Substitutes variables according to `map` at free occurrences.
    pub fn rename_free(&self, map: &BTreeMap<Var, Var>) -> Formula {
        let mut scope: Vec<(Var, Var)> = map.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        rename_rec(self, &mut scope)
    }
}

fn lookup(scope: &[(Var, Var)], v: &Var) -> Var {
    scope
        .iter()
        .rev()
        .find(|(from, _)| from == v)
        .map(|(_, to)| to.clone())
        .unwrap_or_else(|| v.clone())
}

fn rename_rec(phi: &Formula, scope: &mut Vec<(Var, Var)>) -> Formula {
    match phi {
        Formula::Atom(r, l, rt) => Formula::Atom(*r, lookup(scope, l), lookup(scope, rt)),
        Formula::Guard(g, v) => Formula::Guard(g.clone(), lookup(scope, v)),
        Formula::Not(a) => Formula::not(rename_rec(a, scope)),
        Formula::And(a, b) => Formula::and(rename_rec(a, scope), rename_rec(b, scope)),
        Formula::Or(a, b) => Formula::or(rename_rec(a, scope), rename_rec(b, scope)),
        Formula::Implies(a, b) => Formula::implies(rename_rec(a, scope), rename_rec(b, scope)),
        Formula::Iff(a, b) => Formula::iff(rename_rec(a, scope), rename_rec(b, scope)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            scope.push((v.clone(), v.clone()));
            let body = rename_rec(body, scope);
            scope.pop();
            requantify(phi, v.clone(), body)
        }
    }
}

fn requantify(original: &Formula, v: Var, body: Formula) -> Formula {
    match original {
        Formula::Forall(..) => Formula::Forall(v, Box::new(body)),
        _ => Formula::Exists(v, Box::new(body)),
    }
}

fn fresh(base: &Var, taken: &BTreeSet<Var>) -> Var {
    (1..)
        .map(|k| Var(format!("{}_{}", base.0, k)))
        .find(|cand| !taken.contains(cand))
        .expect("unbounded suffix search")
}

fn normalize_rec(
    phi: &Formula,
    scope: &mut Vec<(Var, Var)>,
    used: &mut BTreeSet<Var>,
    taken: &mut BTreeSet<Var>,
) -> Formula {
    match phi {
        Formula::Atom(r, l, rt) => Formula::Atom(*r, lookup(scope, l), lookup(scope, rt)),
        Formula::Guard(g, v) => Formula::Guard(g.clone(), lookup(scope, v)),
        Formula::Not(a) => Formula::not(normalize_rec(a, scope, used, taken)),
        Formula::And(a, b) => {
            let a = normalize_rec(a, scope, used, taken);
            Formula::and(a, normalize_rec(b, scope, used, taken))
        }
        Formula::Or(a, b) => {
            let a = normalize_rec(a, scope, used, taken);
            Formula::or(a, normalize_rec(b, scope, used, taken))
        }
        Formula::Implies(a, b) => {
            let a = normalize_rec(a, scope, used, taken);
            Formula::implies(a, normalize_rec(b, scope, used, taken))
        }
        Formula::Iff(a, b) => {
            let a = normalize_rec(a, scope, used, taken);
            Formula::iff(a, normalize_rec(b, scope, used, taken))
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let name = if used.contains(v) {
                let f = fresh(v, taken);
                taken.insert(f.clone());
                f
            } else {
                v.clone()
            };
            used.insert(name.clone());
            scope.push((v.clone(), name.clone()));
            let body = normalize_rec(body, scope, used, taken);
            scope.pop();
            requantify(phi, name, body)
        }
    }
}

// Canonical printing: binary operands are parenthesized when they are
// binary themselves, or quantifiers in left position. Negation always
// parenthesizes its operand.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(r, l, rt) => write!(f, "{l} {r} {rt}"),
            Formula::Guard(g, v) => write!(f, "{g}({v})"),
            Formula::Not(a) => write!(f, "~({a})"),
            Formula::And(a, b) => write_binary(f, a, "/\\", b),
            Formula::Or(a, b) => write_binary(f, a, "\\/", b),
            Formula::Implies(a, b) => write_binary(f, a, "->", b),
            Formula::Iff(a, b) => write_binary(f, a, "<->", b),
            Formula::Forall(v, body) => write_quant(f, "forall", v, body),
            Formula::Exists(v, body) => write_quant(f, "exists", v, body),
        }
    }
}

fn is_binary(phi: &Formula) -> bool {
    matches!(
        phi,
        Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..)
    )
}

fn is_quant(phi: &Formula) -> bool {
    matches!(phi, Formula::Forall(..) | Formula::Exists(..))
}

fn write_binary(f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula) -> fmt::Result {
    if is_binary(a) || is_quant(a) {
        write!(f, "({a})")?;
    } else {
        write!(f, "{a}")?;
    }
    write!(f, " {op} ")?;
    if is_binary(b) {
        write!(f, "({b})")
    } else {
        write!(f, "{b}")
    }
}

fn write_quant(f: &mut fmt::Formatter<'_>, q: &str, v: &Var, body: &Formula) -> fmt::Result {
    if is_binary(body) {
        write!(f, "{q} {v}. ({body})")
    } else {
        write!(f, "{q} {v}. {body}")
    }
}

/// Canonical source text for a formula.
pub fn print_formula(phi: &Formula) -> String {
    phi.to_string()
}
