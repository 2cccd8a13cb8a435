//! Rewrites membership atoms into a recoded relation, with and without a
//! guard predicate on the quantifiers.

use nfbench::formula::{builtin_axiom, print_formula, recode_translate, AxiomId, RelSym};
use nfbench::stratification::stratify;

fn main() {
    let phi = builtin_axiom(AxiomId::Pairing);
    println!("{}", print_formula(&phi));
    for to in [RelSym::MemStar, RelSym::MemPrime, RelSym::MemF] {
        let plain = recode_translate(&phi, RelSym::Mem, to, None).unwrap();
        let guarded = recode_translate(&phi, RelSym::Mem, to, Some("G")).unwrap();
        println!("{to}: {}", print_formula(&plain));
        println!("{to} guarded: {}", print_formula(&guarded));
        assert_eq!(stratify(&plain).ok(), stratify(&phi).ok());
    }
}
