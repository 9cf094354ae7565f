#![no_main]

use dhp_unify::frontend::{parse_problem, parse_substitution, print};
use libfuzzer_sys::fuzz_target;

const SIG: &str = "sort a.\nfun c : a.\nfun f : a -> a.\nfun g : (a, a) -> a.\nvar M : (a, a) -> a.\nvar F : a -> a.\nvar K : (a -> a) -> a.\n";

// Accepted substitutions print to text that parses back to themselves.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let sig = parse_problem(SIG).unwrap().signature;
    if let Ok(theta) = parse_substitution(text, &sig) {
        let printed = print::substitution(&theta);
        assert_eq!(parse_substitution(&printed, &sig).unwrap(), theta, "{printed}");
    }
});
