use std::collections::BTreeSet;

use thiserror::Error;

use super::{Elem, FMode, MembershipStructure, UPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("operation needs an element-valued f")]
    NeedsElementF,
}

fn require_element_f(m: &MembershipStructure) -> Result<(), ClosureError> {
    match m.f_mode() {
        Some(FMode::Element) => Ok(()),
        _ => Err(ClosureError::NeedsElementF),
    }
}

/// `{{z, u} : {f(z), f(u)} ∈ x}`, with `z, u` ranging over `dom(f)`.
pub fn upward_set(
    m: &MembershipStructure,
    x: &BTreeSet<UPair>,
) -> Result<BTreeSet<UPair>, ClosureError> {
    require_element_f(m)?;
    Ok(x.iter()
        .filter_map(|p| Some(UPair::new(m.f_inv(p.low())?, m.f_inv(p.high())?)))
        .collect())
}

/// `{{f(z), f(u)} : {z, u} ∈ x}`; pairs leaving `dom(f)` are skipped.
pub fn downward_set(
    m: &MembershipStructure,
    x: &BTreeSet<UPair>,
) -> Result<BTreeSet<UPair>, ClosureError> {
    require_element_f(m)?;
    Ok(x.iter()
        .filter_map(|p| Some(UPair::new(m.f_elem(p.low())?, m.f_elem(p.high())?)))
        .collect())
}

fn singletons(x: &BTreeSet<Elem>) -> BTreeSet<UPair> {
    x.iter().map(|&e| UPair::singleton(e)).collect()
}

fn union(pairs: &BTreeSet<UPair>) -> BTreeSet<Elem> {
    pairs.iter().flat_map(|p| p.members()).collect()
}

/// `f⁻¹``x`, computed as the union of the upward closure of the singletons of `x`.
pub fn lemma1_preimage(
    m: &MembershipStructure,
    x: &BTreeSet<Elem>,
) -> Result<BTreeSet<Elem>, ClosureError> {
    Ok(union(&upward_set(m, &singletons(x))?))
}

/// `f``x`, computed as the union of the downward image of the singletons of `x`.
pub fn lemma2_image(
    m: &MembershipStructure,
    x: &BTreeSet<Elem>,
) -> Result<BTreeSet<Elem>, ClosureError> {
    Ok(union(&downward_set(m, &singletons(x))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::StructureBuilder;

    fn abcd() -> MembershipStructure {
        StructureBuilder::new(["a", "b", "c", "d"])
            .f(0, 1)
            .f(2, 3)
            .build()
            .unwrap()
    }

    fn pairs(ps: &[(Elem, Elem)]) -> BTreeSet<UPair> {
        ps.iter().map(|&(a, b)| UPair::new(a, b)).collect()
    }

    fn set(es: &[Elem]) -> BTreeSet<Elem> {
        es.iter().copied().collect()
    }

    #[test]
    fn upward_and_downward() {
        let m = abcd();
        assert_eq!(upward_set(&m, &BTreeSet::new()).unwrap(), BTreeSet::new());
        assert_eq!(upward_set(&m, &pairs(&[(1, 3)])).unwrap(), pairs(&[(0, 2)]));
        assert_eq!(
            downward_set(&m, &pairs(&[(0, 2)])).unwrap(),
            pairs(&[(1, 3)])
        );
        // b is outside dom(f)
        assert_eq!(
            downward_set(&m, &pairs(&[(0, 1), (0, 2)])).unwrap(),
            pairs(&[(1, 3)])
        );
    }

    #[test]
    fn identity_f_fixes_pairs() {
        let m = StructureBuilder::with_size(3).identity_f().build().unwrap();
        let x = pairs(&[(0, 1), (2, 2)]);
        assert_eq!(upward_set(&m, &x).unwrap(), x);
        assert_eq!(downward_set(&m, &x).unwrap(), x);
        assert_eq!(lemma2_image(&m, &set(&[0, 2])).unwrap(), set(&[0, 2]));
    }

    #[test]
    fn lemmas() {
        let m = abcd();
        assert_eq!(lemma1_preimage(&m, &set(&[1])).unwrap(), set(&[0]));
        assert_eq!(lemma1_preimage(&m, &set(&[])).unwrap(), set(&[]));
        assert_eq!(lemma1_preimage(&m, &set(&[0, 2])).unwrap(), set(&[]));
        assert_eq!(lemma2_image(&m, &set(&[0])).unwrap(), set(&[1]));
        assert_eq!(lemma2_image(&m, &set(&[])).unwrap(), set(&[]));
    }

    #[test]
    fn needs_element_f() {
        let m = StructureBuilder::new(["a"]).fset(0, [0]).build().unwrap();
        assert_eq!(
            upward_set(&m, &BTreeSet::new()),
            Err(ClosureError::NeedsElementF)
        );
        let m = StructureBuilder::new(["a"]).build().unwrap();
        assert_eq!(
            lemma2_image(&m, &set(&[0])),
            Err(ClosureError::NeedsElementF)
        );
    }
}
