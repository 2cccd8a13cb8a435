//! Hereditarily finite sets: Ackermann codes, the stages V_n, and the two
//! pair-set operations.

use nfbench::hfset::{ack_decode, ack_encode, pi_star, ustar_compose, v_stage, HfSet};
use num_bigint::BigUint;

fn main() {
    for code in [0u64, 1, 2, 3, 11, 2048] {
        let s = ack_decode(&BigUint::from(code));
        println!("{code:>5} = {s}  (rank {})", s.rank());
        assert_eq!(ack_encode(&s).unwrap(), BigUint::from(code));
    }
    for n in 0..=5 {
        println!("|V_{n}| = {}", v_stage(n).unwrap().len());
    }

    let [e, one, two] = [0u64, 1, 2].map(HfSet::from_code);
    let c = HfSet::from_elems([HfSet::pair(&e, &one)]);
    let d = HfSet::from_elems([HfSet::pair(&one, &two), HfSet::pair(&e, &e)]);
    println!("C = {c}\nD = {d}");
    println!("C ; D = {}", ustar_compose(&c, &d));
    let three = HfSet::from_code(3);
    let x = HfSet::from_elems([HfSet::pair(&one, &two), HfSet::pair(&one, &three)]);
    println!("intersecting pairs of {x}: {}", pi_star(&x));
}
