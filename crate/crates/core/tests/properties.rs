mod common;

use std::collections::BTreeSet;

use common::*;
use dhp_unify::dhp::{check_dhp, is_dhp, CheckMode};
use dhp_unify::frontend::{parse_substitution, print, ProblemFile};
use dhp_unify::matching::{match_term, MatchResult};
use dhp_unify::oracle::random::{self, Palette};
use dhp_unify::oracle::{check_orthogonality, enumerate_terms, EnumBudget, Orthogonality};
use dhp_unify::unify::{enumerate, EngineConfig, Equation, Status};
use dhp_unify::{Type, Var};
use proptest::prelude::*;

struct Fixture {
    sig: ProblemFile,
    pal: Palette,
    tys: Vec<Type>,
}

fn fixture() -> Fixture {
    let sig = signature_with("var F : a -> a.\nvar M : (a, a) -> a.\nvar K : (a -> a) -> a.\nvar X : a.\n");
    let a = base(&sig);
    let aa = arrow(vec![a.clone()], a.clone());
    let tys = vec![
        a.clone(),
        aa.clone(),
        arrow(vec![a.clone(), a.clone()], a.clone()),
        arrow(vec![aa.clone(), a.clone()], a.clone()),
    ];
    let pal = palette(&sig, 0.7);
    Fixture { sig, pal, tys }
}

fn small_config() -> EngineConfig {
    EngineConfig {
        max_steps: 12,
        max_solutions: Some(6),
        ..EngineConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_terms_are_well_typed(seed: u64, k in 0usize..4) {
        let fx = fixture();
        let mut rng = random::rng(seed);
        let ty = &fx.tys[k];
        if let Some(t) = random::term_where(&mut rng, ty, &[], &fx.pal, 3, 10, |_| true) {
            prop_assert_eq!(t.type_in(&[]).unwrap(), ty.clone());
        }
    }

    #[test]
    fn substitution_print_parse_round_trip(seed: u64) {
        let fx = fixture();
        let mut rng = random::rng(seed);
        let vars: Vec<Var> = fx.sig.signature.vars().cloned().collect();
        if let Some(theta) = random::substitution(&mut rng, &vars, &fx.pal, 2) {
            let text = print::substitution(&theta);
            let back = parse_substitution(&text, &fx.sig.signature).unwrap();
            prop_assert_eq!(back, theta, "{}", text);
        }
    }

    #[test]
    fn strict_acceptance_implies_lenient(seed: u64, k in 1usize..4) {
        let fx = fixture();
        let mut rng = random::rng(seed);
        if let Some(t) = random::term_where(&mut rng, &fx.tys[k], &[], &fx.pal, 3, 10, |_| true) {
            let strict = check_dhp(&t, CheckMode::Strict);
            prop_assert_eq!(strict.accepted, is_dhp(&t));
            prop_assert_eq!(strict.accepted, strict.violations.is_empty());
            if strict.accepted {
                prop_assert!(check_dhp(&t, CheckMode::Lenient).accepted);
            }
            prop_assert!(check_dhp(&t, CheckMode::Off).accepted);
        }
    }

    #[test]
    fn unifiers_are_sound_and_deterministic(seed: u64, k in 1usize..4) {
        let fx = fixture();
        let mut rng = random::rng(seed);
        let Some(s) = random::dhp(&mut rng, &fx.tys[k], &fx.pal, 2) else { return Ok(()) };
        let Some(t) = random::dhp(&mut rng, &fx.tys[k], &fx.pal, 2) else { return Ok(()) };
        let eqs = vec![Equation::new(s, t)];
        let first = enumerate(eqs.clone(), small_config());
        let second = enumerate(eqs.clone(), small_config());
        prop_assert_eq!(format!("{first:?}"), format!("{second:?}"));
        if let Ok(out) = first {
            for u in out.unifiers() {
                prop_assert!(eqs.iter().all(|e| e.is_solved_by(&u)));
                prop_assert!(u.iter().all(|(_, img)| is_dhp(img)));
            }
        }
    }

    #[test]
    fn complete_unifiers_are_pairwise_orthogonal(seed: u64, k in 1usize..4) {
        let fx = fixture();
        let mut rng = random::rng(seed);
        let Some(s) = random::dhp(&mut rng, &fx.tys[k], &fx.pal, 2) else { return Ok(()) };
        let vs: Vec<Var> = s.free_vars().into_iter().collect();
        let Some(sigma) = random::dhp_substitution(&mut rng, &vs, &fx.pal, 1) else { return Ok(()) };
        let t = sigma.apply(&s);
        let Ok(out) = enumerate(vec![Equation::new(s, t)], small_config()) else { return Ok(()) };
        if out.status != Status::Complete {
            return Ok(());
        }
        let us = out.unifiers();
        for i in 0..us.len() {
            for j in i + 1..us.len() {
                let a = check_orthogonality(&us[i], &us[j], 24);
                let b = check_orthogonality(&us[j], &us[i], 24);
                prop_assert_eq!(&a, &Orthogonality::Orthogonal);
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn matching_instances_of_patterns(seed: u64, k in 1usize..4) {
        let fx = fixture();
        let mut rng = random::rng(seed);
        let Some(p) = random::dhp(&mut rng, &fx.tys[k], &fx.pal, 3) else { return Ok(()) };
        let vs: Vec<Var> = p.free_vars().into_iter().collect();
        let closed = Palette { vars: Vec::new(), ..fx.pal.clone() };
        let Some(sigma) = random::substitution(&mut rng, &vs, &closed, 2) else { return Ok(()) };
        let t = sigma.apply(&p);
        match match_term(&p, &t, CheckMode::Strict).unwrap() {
            MatchResult::Unique(found) => {
                prop_assert_eq!(found.apply(&p), t);
                let w: BTreeSet<Var> = vs.into_iter().collect();
                prop_assert_eq!(found, sigma.restrict(&w));
            }
            other => prop_assert!(false, "expected a unique match, got {:?}", other),
        }
    }
}

#[test]
fn enumeration_is_duplicate_free_and_bounded() {
    let fx = fixture();
    for size in 0..=3 {
        let budget = EnumBudget::new(fx.sig.signature.clone(), size, 1);
        for ty in &fx.tys {
            let terms = enumerate_terms(ty, &[], &budget);
            let distinct: BTreeSet<String> = terms.iter().map(print::term).collect();
            assert_eq!(distinct.len(), terms.len(), "{ty:?} size {size}");
            for t in &terms {
                assert!(t.size() <= size);
                assert_eq!(t.type_in(&[]).unwrap(), ty.clone());
            }
        }
    }
}
