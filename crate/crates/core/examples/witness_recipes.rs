//! Builds witnesses on V_4 with the identity recoding and prints the trace of
//! each construction.

use nfbench::boffa::{Family, PiReading, Recipes};
use nfbench::hfset::v_stage;
use nfbench::structure::StructureBuilder;

fn main() {
    let stage = v_stage(4).unwrap();
    let m = StructureBuilder::hf_domain(stage.elems())
        .identity_f()
        .build()
        .unwrap();
    let auto = Recipes::new(&m, Family::Automorphism).unwrap();
    let inj = Recipes::new(&m, Family::Injection).unwrap();
    let id = |name: &str| m.lookup(name).unwrap();

    let pair = auto.pair(id("1"), id("2")).unwrap();
    println!("pair of 1 and 2:\n{}", pair.report(&m));

    let union = inj.union(id("11")).unwrap();
    println!("union of 11:\n{}", union.report(&m));

    let compose = auto.compose(id("8"), id("4")).unwrap();
    println!("composition of 8 and 4:\n{}", compose.report(&m));

    match auto.pi(PiReading::Pairwise) {
        Ok(out) => println!("{}", out.report(&m)),
        Err(failure) => println!("intersection witness: {failure}"),
    }
}
