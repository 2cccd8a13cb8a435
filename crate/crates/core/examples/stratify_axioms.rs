//! Types the built-in axioms and shows the cycle behind an unstratified formula.

use nfbench::formula::{builtin_axioms, parse_formula, print_formula};
use nfbench::stratification::{check_typing, stratify};

fn main() {
    for (id, phi) in builtin_axioms() {
        let typing = stratify(&phi).expect("built-in axioms are stratified");
        assert_eq!(check_typing(&phi, &typing), Ok(true));
        println!("{id}: {typing}");
    }

    let russell = parse_formula("exists y. forall x. (x mem y <-> ~(x mem x))").unwrap();
    match stratify(&russell) {
        Ok(t) => println!("unexpected typing {t}"),
        Err(failure) => {
            println!("{}", print_formula(&russell));
            println!("  unstratified: {failure}");
            println!(
                "  replaying the cycle accumulates offset {:?}",
                failure.replay()
            );
        }
    }
}
