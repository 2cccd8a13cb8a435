#![allow(dead_code)]

use std::collections::BTreeSet;

use nfbench::formula::{Formula, RelSym, Var};
use nfbench::structure::{Elem, FMode, MembershipStructure, StructureBuilder};
use rand::seq::SliceRandom;
use rand::Rng;

pub const VARS: [&str; 4] = ["x", "y", "z", "w"];

/// A random formula over `VARS` built from `mem` and `=` atoms.
pub fn random_formula(rng: &mut impl Rng, depth: u32) -> Formula {
    let var = |rng: &mut dyn rand::RngCore| Var::new(*VARS.choose(rng).unwrap());
    if depth == 0 || rng.gen_bool(0.25) {
        let rel = if rng.gen_bool(0.75) {
            RelSym::Mem
        } else {
            RelSym::Eq
        };
        return Formula::Atom(rel, var(rng), var(rng));
    }
    match rng.gen_range(0..7) {
        0 => Formula::not(random_formula(rng, depth - 1)),
        1 => Formula::and(
            random_formula(rng, depth - 1),
            random_formula(rng, depth - 1),
        ),
        2 => Formula::or(
            random_formula(rng, depth - 1),
            random_formula(rng, depth - 1),
        ),
        3 => Formula::implies(
            random_formula(rng, depth - 1),
            random_formula(rng, depth - 1),
        ),
        4 => Formula::iff(
            random_formula(rng, depth - 1),
            random_formula(rng, depth - 1),
        ),
        5 => Formula::forall(var(rng), random_formula(rng, depth - 1)),
        _ => Formula::exists(var(rng), random_formula(rng, depth - 1)),
    }
}

/// A random structure supporting `mem`, `mem*` and `mem'` (element mode
/// with a total injective `f` and `S = range(f)`), or `mem` and `memf`
/// (set-valued mode), together with a nonempty guard predicate `G`.
pub fn random_structure(rng: &mut impl Rng, set_valued: bool) -> MembershipStructure {
    let n = rng.gen_range(1..=4usize);
    let names: Vec<String> = (0..n).map(|i| format!("d{i}")).collect();
    let mut b = StructureBuilder::new(names);
    for y in 0..n {
        for x in 0..n {
            if rng.gen_bool(0.4) {
                b = b.edge(y, x);
            }
        }
    }
    if set_valued {
        for x in 0..n {
            if rng.gen_bool(0.8) {
                let ys: Vec<Elem> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                b = b.fset(x, ys);
            }
        }
    } else {
        let mut perm: Vec<Elem> = (0..n).collect();
        perm.shuffle(rng);
        for (x, &y) in perm.iter().enumerate() {
            b = b.f(x, y);
        }
        b = b.code_set(perm.iter().copied().filter(|_| rng.gen_bool(0.7)));
    }
    let mut guard: BTreeSet<Elem> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
    if guard.is_empty() {
        guard.insert(rng.gen_range(0..n));
    }
    b.predicate("G", guard)
        .build()
        .expect("valid random structure")
}

/// All partial injections on `0..n`, as `f[x] = Some(y)`.
pub fn partial_injections(n: usize) -> Vec<Vec<Option<Elem>>> {
    fn rec(
        x: usize,
        n: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<Option<Elem>>,
        out: &mut Vec<Vec<Option<Elem>>>,
    ) {
        if x == n {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        rec(x + 1, n, used, cur, out);
        cur.pop();
        for y in 0..n {
            if !used[y] {
                used[y] = true;
                cur.push(Some(y));
                rec(x + 1, n, used, cur, out);
                cur.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

pub fn with_f(n: usize, f: &[Option<Elem>]) -> MembershipStructure {
    let mut b = StructureBuilder::with_size(n).f_mode(FMode::Element);
    for (x, y) in f.iter().enumerate() {
        if let Some(y) = y {
            b = b.f(x, *y);
        }
    }
    b.build().expect("injective")
}
