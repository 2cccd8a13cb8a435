use thiserror::Error;

use super::{Formula, RelSym};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("formula uses `{found}`; only `=` and `{from}` may be translated")]
    ForeignRelation { found: RelSym, from: RelSym },
}

/// Replaces every `from` atom by a `to` atom and, when a guard predicate is
/// named, relativizes every quantifier to it.
///
/// Atoms themselves are never guarded: `forall v. ψ` becomes
/// `forall v. (G(v) -> ψ')` and `exists v. ψ` becomes `exists v. (G(v) /\ ψ')`.
pub fn recode_translate(
    phi: &Formula,
    from: RelSym,
    to: RelSym,
    guard: Option<&str>,
) -> Result<Formula, TranslateError> {
    if let Some(found) = phi
        .relations()
        .into_iter()
        .find(|r| *r != RelSym::Eq && *r != from)
    {
        return Err(TranslateError::ForeignRelation { found, from });
    }
    Ok(translate(phi, from, to, guard))
}

fn translate(phi: &Formula, from: RelSym, to: RelSym, guard: Option<&str>) -> Formula {
    let go = |a: &Formula| translate(a, from, to, guard);
    match phi {
        Formula::Atom(r, l, rt) => {
            let r = if *r == from { to } else { *r };
            Formula::Atom(r, l.clone(), rt.clone())
        }
        Formula::Guard(..) => phi.clone(),
        Formula::Not(a) => Formula::not(go(a)),
        Formula::And(a, b) => Formula::and(go(a), go(b)),
        Formula::Or(a, b) => Formula::or(go(a), go(b)),
        Formula::Implies(a, b) => Formula::implies(go(a), go(b)),
        Formula::Iff(a, b) => Formula::iff(go(a), go(b)),
        Formula::Forall(v, body) => {
            let body = go(body);
            match guard {
                Some(g) => Formula::forall(
                    v.clone(),
                    Formula::implies(Formula::Guard(g.to_owned(), v.clone()), body),
                ),
                None => Formula::forall(v.clone(), body),
            }
        }
        Formula::Exists(v, body) => {
            let body = go(body);
            match guard {
                Some(g) => Formula::exists(
                    v.clone(),
                    Formula::and(Formula::Guard(g.to_owned(), v.clone()), body),
                ),
                None => Formula::exists(v.clone(), body),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{builtin_axiom, parse_formula, AxiomId};

    #[test]
    fn complements_recoded_without_guard() {
        let phi = builtin_axiom(AxiomId::Complements);
        let out = recode_translate(&phi, RelSym::Mem, RelSym::MemPrime, None).unwrap();
        assert_eq!(
            out.to_string(),
            "forall x. exists y. forall z. (z mem' y <-> ~(z mem' x))"
        );
        assert_eq!(out.shape(), phi.shape());
    }

    #[test]
    fn atoms_are_not_guarded() {
        let phi = parse_formula("x mem y").unwrap();
        let out = recode_translate(&phi, RelSym::Mem, RelSym::MemPrime, Some("D")).unwrap();
        assert_eq!(out.to_string(), "x mem' y");
    }

    #[test]
    fn pairing_quantifiers_relativized() {
        let phi = builtin_axiom(AxiomId::Pairing);
        let out = recode_translate(&phi, RelSym::Mem, RelSym::MemPrime, Some("D")).unwrap();
        assert_eq!(
            out.to_string(),
            "forall a. (D(a) -> forall b. (D(b) -> exists y. (D(y) /\\ \
             forall z. (D(z) -> (z mem' y <-> (z = a \\/ z = b))))))"
        );
        let (before, after) = (phi.shape(), out.shape());
        assert_eq!(after.guards, before.quantifiers);
        assert_eq!(after.atoms, before.atoms);
    }

    #[test]
    fn rejects_foreign_relations() {
        let phi = parse_formula("x mem* y /\\ x mem y").unwrap();
        assert_eq!(
            recode_translate(&phi, RelSym::Mem, RelSym::MemF, None).unwrap_err(),
            TranslateError::ForeignRelation {
                found: RelSym::MemStar,
                from: RelSym::Mem
            }
        );
    }
}
