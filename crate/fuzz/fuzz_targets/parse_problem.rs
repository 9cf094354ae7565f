#![no_main]

use dhp_unify::dhp::check_dhp;
use dhp_unify::dhp::CheckMode;
use dhp_unify::frontend::{parse_problem, QueryKind};
use libfuzzer_sys::fuzz_target;

// Elaboration must either fail cleanly or yield well-typed terms.
fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(problem) = parse_problem(src) else { return };
    for q in &problem.queries {
        match &q.kind {
            QueryKind::Unify(l, r) | QueryKind::Match(l, r) => {
                assert_eq!(l.type_in(&[]).unwrap(), r.type_in(&[]).unwrap());
            }
            QueryKind::Dhp(t) => {
                t.type_in(&[]).unwrap();
                let _ = check_dhp(t, CheckMode::Strict);
            }
        }
    }
});
