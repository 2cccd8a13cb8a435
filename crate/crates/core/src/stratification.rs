//! Stratification: integer type levels for variables such that `u mem v`
//! forces `t(v) = t(u) + 1` and `u = v` forces `t(u) = t(v)`.
//!
//! Every membership flavor imposes the same `+1` constraint. Constraints form
//! a weighted graph over variables; a depth-first walk per connected
//! component assigns levels, and the first edge that disagrees with the
//! levels already assigned closes a cycle of nonzero total weight.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, RelSym, Var};

/// A level assignment normalized so that each connected component of the
/// constraint graph has minimum level 0.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Typing {
    pub levels: BTreeMap<Var, i64>,
}

impl Typing {
    pub fn level(&self, v: &str) -> Option<i64> {
        self.levels.get(&Var::from(v)).copied()
    }

    /// Shifts every level by `delta`.
    pub fn shifted(&self, delta: i64) -> Typing {
        Typing {
            levels: self
                .levels
                .iter()
                .map(|(v, l)| (v.clone(), l + delta))
                .collect(),
        }
    }
}

impl<const N: usize> From<[(&str, i64); N]> for Typing {
    fn from(pairs: [(&str, i64); N]) -> Self {
        Typing {
            levels: pairs.into_iter().map(|(v, l)| (Var::from(v), l)).collect(),
        }
    }
}

impl fmt::Display for Typing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .levels
            .iter()
            .map(|(v, l)| format!("{v}:{l}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// One atom of a failure cycle, traversed forwards (left to right
/// variable) or backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleStep {
    pub rel: RelSym,
    pub left: Var,
    pub right: Var,
    pub forward: bool,
}

impl CycleStep {
    pub fn weight(&self) -> i64 {
        let w = i64::from(self.rel.is_membership());
        if self.forward {
            w
        } else {
            -w
        }
    }

    pub fn from_var(&self) -> &Var {
        if self.forward {
            &self.left
        } else {
            &self.right
        }
    }

    pub fn to_var(&self) -> &Var {
        if self.forward {
            &self.right
        } else {
            &self.left
        }
    }
}

/// A closed walk through the constraint graph whose weights sum to a
/// nonzero offset: replaying it yields `t(v) = t(v) + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratFailure {
    pub cycle: Vec<CycleStep>,
}

impl StratFailure {
    pub fn offset(&self) -> i64 {
        self.cycle.iter().map(CycleStep::weight).sum()
    }

    /// Checks the walk is closed and connected, and returns its offset.
    pub fn replay(&self) -> Option<i64> {
        let first = self.cycle.first()?;
        let start = first.from_var();
        let mut at = start;
        for step in &self.cycle {
            if step.from_var() != at {
                return None;
            }
            at = step.to_var();
        }
        (at == start).then(|| self.offset())
    }
}

impl fmt::Display for StratFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cycle
            .iter()
            .map(|s| {
                let dir = if s.forward { "" } else { " (reversed)" };
                format!("{} {} {}{dir}", s.left, s.rel, s.right)
            })
            .collect();
        write!(f, "[{}] offset {}", parts.join("; "), self.offset())
    }
}

#[derive(Clone, Copy)]
struct Edge {
    to: usize,
    atom: usize,
    forward: bool,
    weight: i64,
}

/// Decides stratifiability, returning a normalized typing or a failure cycle.
pub fn stratify(phi: &Formula) -> Result<Typing, StratFailure> {
    let vars: Vec<Var> = phi.all_vars().into_iter().collect();
    let index: BTreeMap<&Var, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let atoms = phi.atoms();

    let mut adj: Vec<Vec<Edge>> = vec![Vec::new(); vars.len()];
    for (k, (rel, l, r)) in atoms.iter().enumerate() {
        let (li, ri) = (index[l], index[r]);
        let w = i64::from(rel.is_membership());
        adj[li].push(Edge {
            to: ri,
            atom: k,
            forward: true,
            weight: w,
        });
        adj[ri].push(Edge {
            to: li,
            atom: k,
            forward: false,
            weight: -w,
        });
    }

    let step_of = |e: &Edge| {
        let (rel, l, r) = atoms[e.atom];
        CycleStep {
            rel,
            left: l.clone(),
            right: r.clone(),
            forward: e.forward,
        }
    };

    let mut level: Vec<Option<i64>> = vec![None; vars.len()];
    // Tree edge used to reach each vertex (parent vertex, edge).
    let mut parent: Vec<Option<(usize, Edge)>> = vec![None; vars.len()];
    let mut component: Vec<usize> = vec![usize::MAX; vars.len()];

    for root in 0..vars.len() {
        if level[root].is_some() {
            continue;
        }
        level[root] = Some(0);
        component[root] = root;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let lu = level[u].expect("visited");
            for e in &adj[u] {
                let expected = lu + e.weight;
                match level[e.to] {
                    None => {
                        level[e.to] = Some(expected);
                        parent[e.to] = Some((u, *e));
                        component[e.to] = root;
                        stack.push(e.to);
                    }
                    Some(lv) if lv != expected => {
                        // root ~> u, then e, then v ~> root backwards.
                        let path_u = tree_path(&parent, u);
                        let path_v = tree_path(&parent, e.to);
                        let common = path_u
                            .iter()
                            .zip(&path_v)
                            .take_while(|(a, b)| a.atom == b.atom && a.forward == b.forward)
                            .count();
                        let mut cycle: Vec<CycleStep> =
                            path_u[common..].iter().map(step_of).collect();
                        cycle.push(step_of(e));
                        cycle.extend(path_v[common..].iter().rev().map(|pe| {
                            let mut s = step_of(pe);
                            s.forward = !s.forward;
                            s
                        }));
                        return Err(StratFailure { cycle });
                    }
                    Some(_) => {}
                }
            }
        }
    }

    let mut min_of: BTreeMap<usize, i64> = BTreeMap::new();
    for (i, l) in level.iter().enumerate() {
        let l = l.expect("all assigned");
        let m = min_of.entry(component[i]).or_insert(l);
        *m = (*m).min(l);
    }
    let levels = vars
        .iter()
        .enumerate()
        .map(|(i, v)| {
            (
                v.clone(),
                level[i].expect("all assigned") - min_of[&component[i]],
            )
        })
        .collect();
    Ok(Typing { levels })
}

fn tree_path(parent: &[Option<(usize, Edge)>], mut v: usize) -> Vec<Edge> {
    let mut path = Vec::new();
    while let Some((p, e)) = parent[v] {
        path.push(e);
        v = p;
    }
    path.reverse();
    path
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypingError {
    #[error("typing assigns no level to: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))]
    MissingVariables(Vec<Var>),
}

/// True iff every atom constraint of `phi` holds under `t`.
pub fn check_typing(phi: &Formula, t: &Typing) -> Result<bool, TypingError> {
    let missing: Vec<Var> = phi
        .all_vars()
        .into_iter()
        .filter(|v| !t.levels.contains_key(v))
        .collect();
    if !missing.is_empty() {
        return Err(TypingError::MissingVariables(missing));
    }
    Ok(phi.atoms().into_iter().all(|(rel, l, r)| {
        let (tl, tr) = (t.levels[l], t.levels[r]);
        if rel.is_membership() {
            tr == tl + 1
        } else {
            tr == tl
        }
    }))
}

/// Variables mentioned by the failure cycle.
pub fn cycle_vars(failure: &StratFailure) -> BTreeSet<Var> {
    failure
        .cycle
        .iter()
        .flat_map(|s| [s.left.clone(), s.right.clone()])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{builtin_axiom, builtin_axioms, parse_formula, recode_translate, AxiomId};

    fn parse(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn complement_body_typing() {
        let phi = parse("forall z. (z mem y <-> ~(z mem x))");
        let t = stratify(&phi).unwrap();
        assert_eq!(t, Typing::from([("x", 1), ("y", 1), ("z", 0)]));
        assert!(check_typing(&phi, &t).unwrap());
    }

    #[test]
    fn self_membership_fails_with_single_step_cycle() {
        let phi = parse("x mem x");
        let fail = stratify(&phi).unwrap_err();
        assert_eq!(
            fail.cycle,
            vec![CycleStep {
                rel: RelSym::Mem,
                left: "x".into(),
                right: "x".into(),
                forward: true
            }]
        );
        assert_eq!(fail.replay(), Some(1));
    }

    #[test]
    fn equality_only() {
        assert_eq!(
            stratify(&parse("x = y")).unwrap(),
            Typing::from([("x", 0), ("y", 0)])
        );
    }

    #[test]
    fn composition_axiom_levels() {
        let phi = builtin_axiom(AxiomId::UComposition);
        let t = stratify(&phi).unwrap();
        assert!(check_typing(&phi, &t).unwrap());
        let l = |v: &str| t.level(v).unwrap();
        // components u, v, m at the bottom; pairs p, q, q2 one level up;
        // relation sets c, d and the result y two levels up.
        for comp in ["u", "v", "m", "w", "w1", "w2"] {
            assert_eq!(l(comp), 0, "{comp}");
        }
        for pair in ["p", "q", "q2"] {
            assert_eq!(l(pair), 1, "{pair}");
        }
        for rel in ["c", "d", "y"] {
            assert_eq!(l(rel), 2, "{rel}");
        }
    }

    #[test]
    fn check_typing_verdicts() {
        let phi = builtin_axiom(AxiomId::Complements);
        let good = Typing::from([("x", 1), ("y", 1), ("z", 0)]);
        let bad = Typing::from([("x", 0), ("y", 1), ("z", 0)]);
        assert!(check_typing(&phi, &good).unwrap());
        assert!(!check_typing(&phi, &bad).unwrap());
        assert!(check_typing(&parse("x = y"), &Typing::from([("x", 2), ("y", 2)])).unwrap());
        assert_eq!(
            check_typing(&phi, &Typing::from([("x", 1)])).unwrap_err(),
            TypingError::MissingVariables(vec!["y".into(), "z".into()])
        );
    }

    #[test]
    fn russell_body_fails_and_axioms_stratify() {
        let fail = stratify(&parse("x mem y <-> ~(x mem x)")).unwrap_err();
        assert_ne!(fail.replay(), None);
        assert_ne!(fail.offset(), 0);
        for (id, phi) in builtin_axioms() {
            let t = stratify(&phi).unwrap_or_else(|f| panic!("{id}: {f}"));
            assert!(check_typing(&phi, &t).unwrap(), "{id}");
        }
    }

    #[test]
    fn longer_cycle_is_closed_walk() {
        // x mem y, y mem z, x = z: the walk x -> y -> z -> x has weight 2.
        let phi = parse("x mem y /\\ y mem z /\\ x = z");
        let fail = stratify(&phi).unwrap_err();
        assert_eq!(fail.replay(), Some(fail.offset()));
        assert_eq!(fail.offset().abs(), 2);
        assert_eq!(cycle_vars(&fail).len(), 3);
    }

    #[test]
    fn disjoint_components_normalized_separately() {
        let t = stratify(&parse("x mem y /\\ u mem v /\\ v mem w")).unwrap();
        assert_eq!(
            t,
            Typing::from([("u", 0), ("v", 1), ("w", 2), ("x", 0), ("y", 1)])
        );
    }

    #[test]
    fn recoding_preserves_typing() {
        for (_, phi) in builtin_axioms() {
            for to in [RelSym::MemStar, RelSym::MemPrime, RelSym::MemF] {
                let psi = recode_translate(&phi, RelSym::Mem, to, None).unwrap();
                assert_eq!(stratify(&psi), stratify(&phi));
            }
        }
    }
}
