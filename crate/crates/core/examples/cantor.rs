//! No map from a finite domain onto its power set, and no small model of the
//! full axiom list with extensionality.

use nfbench::formula::{AxiomId, RelSym};
use nfbench::search::{cantor_check, find_model, Requirement, SearchOutcome, SearchSpec};
use nfbench::structure::{ExtScope, FMode};

fn main() {
    for row in cantor_check(3) {
        println!(
            "n={}: {} maps, {} surjections, diagonal missed by every map: {}",
            row.n, row.maps, row.surjections, row.diagonal_missed
        );
    }
    for size in 0..=3 {
        let mut spec = SearchSpec::new(size, FMode::SetValued)
            .total(true)
            .injective(true);
        for id in AxiomId::FIN_SF {
            spec = spec.require(Requirement::Axiom(id), RelSym::MemF);
        }
        spec = spec.require(
            Requirement::Extensionality(ExtScope::SetsOnly),
            RelSym::MemF,
        );
        match find_model(&spec).unwrap() {
            SearchOutcome::Exhausted { examined } => println!("size {size}: none among {examined}"),
            SearchOutcome::Found { model, .. } => println!("size {size}:\n{}", model.to_text()),
        }
    }
}
