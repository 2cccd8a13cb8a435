//! Loads a small structure and evaluates one formula under each membership
//! relation, plus the axiom report for the recoded relation.

use std::collections::BTreeMap;

use nfbench::formula::{builtin_axiom, parse_formula, AxiomId, RelSym};
use nfbench::structure::{check_axiom, eval_with, load_structure, EvalOptions};

const TWO_CYCLE: &str = "\
domain: a b
fset: a -> {b}
fset: b -> {a}
";

fn main() {
    let m = load_structure(TWO_CYCLE).unwrap();
    let phi = parse_formula("x mem y").unwrap();
    let assignment: BTreeMap<_, _> = [("x".into(), 1), ("y".into(), 0)].into_iter().collect();
    for rel in [RelSym::Mem, RelSym::MemF] {
        let opts = EvalOptions {
            mem_as: rel,
            ..EvalOptions::default()
        };
        println!("b {} a: {:?}", rel, eval_with(&m, &phi, &assignment, &opts));
    }

    for id in AxiomId::FIN_SF {
        let report = check_axiom(&m, id, RelSym::MemF).unwrap();
        println!("{id} under memf: {}", report.verdict);
    }
    println!("complement axiom: {}", builtin_axiom(AxiomId::Complements));
}
