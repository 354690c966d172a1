mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polygym::eval::{
    check_legality, export_schedule, export_schedule_json, import_schedule, import_schedule_json, parse_schedule_any,
    DimCarry, EvalError, LegalityOptions,
};
use polygym::schedule::{Schedule, ScheduleError};
use polygym::scop::{AffineExpr, ParamBinding, Scop};

fn random_schedule(scop: &Scop, rng: &mut impl Rng, k: usize, range: i64) -> Schedule {
    let np = scop.params.len();
    let rows = scop
        .statements
        .iter()
        .map(|s| {
            (0..k)
                .map(|_| {
                    let coeffs = (0..s.depth() + np).map(|_| rng.random_range(-range..=range)).collect();
                    AffineExpr::new(coeffs, rng.random_range(-range..=range))
                })
                .collect()
        })
        .collect();
    Schedule::from_rows(scop, rows).unwrap()
}

/// Oracle per-dimension carry for the pairs of one (source, target) group.
fn oracle_per_dim(schedule: &Schedule, pairs: &[common::Pair], params: &[i64], k: usize) -> Vec<DimCarry> {
    let (mut tied, mut reversed, mut strict) = (vec![false; k], vec![false; k], vec![false; k]);
    for p in pairs {
        let (ts, tt) = common::pair_times(schedule, p, params);
        for d in 0..k {
            if tt[d] == ts[d] {
                tied[d] = true;
                continue;
            }
            if tt[d] > ts[d] {
                strict[d] = true;
            } else {
                reversed[d] = true;
            }
            break;
        }
    }
    (0..k)
        .map(|d| {
            if reversed[d] {
                DimCarry::Violated
            } else if tied[d] {
                DimCarry::Weak
            } else if strict[d] {
                DimCarry::Strong
            } else {
                DimCarry::Done
            }
        })
        .collect()
}

#[test]
fn identity_is_legal_and_certified() {
    let scop = common::matvec();
    let deps = scop.dependences_or_computed();
    let r = check_legality(&scop.identity_schedule(), &scop, &deps, &LegalityOptions::new(ParamBinding::uniform(&scop, 5)))
        .unwrap();
    assert!(r.legal);
    assert!(r.dependences.iter().all(|v| v.symbolic_certified));
    assert_eq!(r.verdict(1).unwrap().carried_at, Some(1));
    assert_eq!(r.verdict(2).unwrap().carried_at, Some(4));
    assert_eq!(r.verdict(1).unwrap().pairs, 25);
    assert_eq!(r.verdict(2).unwrap().pairs, 50);
}

#[test]
fn violations_are_reported() {
    let scop = common::matvec();
    let deps = scop.dependences_or_computed();
    let s = import_schedule("S[i] -> [0]; T[i,j] -> [0]", &scop).unwrap();
    let r = check_legality(&s, &scop, &deps, &LegalityOptions::new(ParamBinding::uniform(&scop, 2))).unwrap();
    assert!(!r.legal);
    let (dep, v) = r.first_violation().unwrap();
    assert_eq!(dep, 1);
    assert_eq!(v.dim, None);
    assert_eq!((v.source_iters.clone(), v.target_iters.clone()), (vec![0], vec![0, 0]));
    assert!(r.dependences.iter().all(|v| !v.symbolic_certified && v.carried_at.is_none()));
}

#[test]
fn unbound_parameter_is_an_error() {
    let scop = common::matvec();
    let deps = scop.dependences_or_computed();
    let r = check_legality(&scop.identity_schedule(), &scop, &deps, &LegalityOptions::new(ParamBinding::default()));
    assert!(matches!(r, Err(EvalError::Scop(_))));
}

#[test]
fn schedule_text_errors() {
    let scop = common::matvec();
    for bad in [
        "S[i] -> [i]",
        "S[i] -> [i]; T[i,j] -> [i, j]",
        "S[j] -> [j]; T[i,j] -> [i]",
        "S[i] -> [k]; T[i,j] -> [i]",
        "U[i] -> [i]; T[i,j] -> [i]",
        "S[i] -> i; T[i,j] -> [i]",
        "S[i] -> [i]; S[i] -> [i]; T[i,j] -> [i]",
        "S[i] -> [2**i]; T[i,j] -> [i]",
    ] {
        assert!(import_schedule(bad, &scop).is_err(), "{bad}");
    }
    let s = import_schedule("S[i] -> [2*i - N + 3]\nT[i,j] -> [ -j+i ]", &scop).unwrap();
    assert_eq!(export_schedule(&s, &scop).unwrap(), "S[i] -> [2*i-N+3]\nT[i,j] -> [i-j]\n");
    assert!(matches!(
        Schedule::from_rows(&scop, vec![vec![]]),
        Err(ScheduleError::StatementCount { expected: 2, found: 1 })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matvec_verdicts_match_brute_force(seed in any::<u64>(), k in 1usize..=3, n in 1i64..=5) {
        let scop = common::matvec();
        let deps = scop.dependences_or_computed();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_schedule(&scop, &mut rng, k, 2);
        let r = check_legality(&s, &scop, &deps, &LegalityOptions::new(ParamBinding::uniform(&scop, n))).unwrap();
        let pairs = common::brute_force_dependences(&scop, &[n]);
        prop_assert_eq!(r.legal, common::check_pairs(&s, &pairs, &[n]).is_ok());
        for v in &r.dependences {
            let group: Vec<common::Pair> = pairs.iter().filter(|p| p.0 == v.source && p.2 == v.target).cloned().collect();
            prop_assert_eq!(v.pairs, group.len());
            prop_assert_eq!(&v.per_dim, &oracle_per_dim(&s, &group, &[n], k));
        }
    }

    #[test]
    fn certified_schedules_are_legal_for_every_size(seed in any::<u64>(), k in 1usize..=3) {
        let scop = common::matvec();
        let deps = scop.dependences_or_computed();
        let s = random_schedule(&scop, &mut ChaCha8Rng::seed_from_u64(seed), k, 1);
        let r = check_legality(&s, &scop, &deps, &LegalityOptions::new(ParamBinding::uniform(&scop, 3))).unwrap();
        if r.dependences.iter().all(|v| v.symbolic_certified) {
            for n in 0..=6 {
                let pairs = common::brute_force_dependences(&scop, &[n]);
                prop_assert!(common::check_pairs(&s, &pairs, &[n]).is_ok());
            }
        }
    }

    #[test]
    fn random_scop_verdicts_match_brute_force(seed in any::<u64>(), k in 1usize..=3, n in 0i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scop = common::random_scop(&mut rng);
        let deps = scop.dependences_or_computed();
        let s = random_schedule(&scop, &mut rng, k, 1);
        let params = vec![n; scop.params.len()];
        let r = check_legality(&s, &scop, &deps, &LegalityOptions::new(ParamBinding::uniform(&scop, n))).unwrap();
        let pairs = common::brute_force_dependences(&scop, &params);
        prop_assert_eq!(r.legal, common::check_pairs(&s, &pairs, &params).is_ok());
    }

    #[test]
    fn schedule_text_and_json_round_trip(seed in any::<u64>(), k in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scop = common::random_scop(&mut rng);
        let s = random_schedule(&scop, &mut rng, k, 5);
        let text = export_schedule(&s, &scop).unwrap();
        prop_assert_eq!(&import_schedule(&text, &scop).unwrap(), &s);
        prop_assert_eq!(&parse_schedule_any(&text, &scop).unwrap(), &s);
        let json = export_schedule_json(&s, &scop).unwrap();
        prop_assert_eq!(&import_schedule_json(&json, &scop).unwrap(), &s);
        prop_assert_eq!(&parse_schedule_any(&json, &scop).unwrap(), &s);
    }
}
