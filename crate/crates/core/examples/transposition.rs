//! The transposition of the two smallest codes is not an automorphism of the
//! membership digraph, but the pair-set operations still commute with it.

use nfbench::boffa::transposition_example;

fn main() {
    let report = transposition_example(3).unwrap();
    println!("{report}");
    assert!(report.agrees());
}
