//! Finds small models of single axioms by exhaustive and random search.

use nfbench::formula::{AxiomId, RelSym};
use nfbench::search::{find_model, Requirement, SearchMode, SearchSpec};
use nfbench::structure::{ExtScope, FMode};

fn main() {
    let spec = SearchSpec::new(2, FMode::SetValued)
        .total(true)
        .require(Requirement::Axiom(AxiomId::Complements), RelSym::MemF)
        .require(
            Requirement::Extensionality(ExtScope::SetsOnly),
            RelSym::MemF,
        );
    print!("{}", find_model(&spec).unwrap().to_text());

    let spec = SearchSpec::new(3, FMode::Element)
        .require(Requirement::Axiom(AxiomId::SetUnion), RelSym::MemPrime)
        .mode(SearchMode::Random {
            seed: 7,
            samples: 2000,
        });
    print!("{}", find_model(&spec).unwrap().to_text());
}
