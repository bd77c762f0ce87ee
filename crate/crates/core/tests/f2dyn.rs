mod common;

use confbraid::acceptance::{lemma_word, trial_rng, PRODUCT_COUNTEREXAMPLE};
use confbraid::f2dyn::*;
use confbraid::words::{enumerate_reduced, random_reduced};
use confbraid::ReducedWord;
use proptest::prelude::*;
use rand::Rng;

fn w(s: &str) -> ReducedWord {
    ReducedWord::parse(2, s).unwrap()
}

#[test]
fn f_and_inverse_match_oracle() {
    for i in 0..10_000u64 {
        let mut rng = trial_rng(21, i);
        let len = rng.gen_range(0..=25);
        let word = random_reduced(&mut rng, 2, len);
        let s = word.to_string();
        assert_eq!(apply_f(&word).unwrap().to_string(), common::f(&s));
        assert_eq!(apply_f_inverse(&word).unwrap().to_string(), common::f_inv(&s));
        assert_eq!(common::f(&common::f_inv(&s)), s);
    }
}

#[test]
fn f_power_agrees_with_iteration_up_to_24() {
    for i in 0..10_000u64 {
        let mut rng = trial_rng(22, i);
        let len = rng.gen_range(0..=12);
        let word = random_reduced(&mut rng, 2, len);
        let n = rng.gen_range(-24..=24);
        let s = word.to_string();
        assert_eq!(
            f_power(&word, n).unwrap().to_string(),
            common::f_pow(&s, n),
            "n = {n}, w = {s}"
        );
    }
}

#[test]
fn sixth_power_is_conjugation_by_c() {
    for i in 0..2_000u64 {
        let mut rng = trial_rng(23, i);
        let len = rng.gen_range(0..=20);
        let s = random_reduced(&mut rng, 2, len).to_string();
        let expected = common::mul(&common::mul(common::C, &s), &common::inverse(common::C));
        assert_eq!(common::f_pow(&s, 6), expected);
        assert_eq!(f_power(&w(&s), 6).unwrap().to_string(), expected);
    }
}

fn oracle_solves(s: &str, k: i64) -> bool {
    common::mul(&common::f_pow(s, 6 * k + 1), &common::f_pow(s, -6 * k - 1)) == s
}

#[test]
fn solver_matches_brute_force_oracle() {
    for (k, max_len) in [(0i64, 7usize), (1, 6), (-1, 6)] {
        let mut oracle: Vec<String> = (0..=max_len)
            .flat_map(common::all_words)
            .filter(|s| oracle_solves(s, k))
            .collect();
        oracle.sort();
        let mut found: Vec<String> = solve_equation(k, max_len)
            .solutions
            .iter()
            .map(|w| w.to_string())
            .collect();
        found.sort();
        assert_eq!(found, oracle, "k = {k}");
    }
}

#[test]
fn solutions_at_length_ten_pass_independent_check() {
    let report = solve_equation(0, 10);
    assert!(report.in_orbit_of_x);
    assert_eq!(report.solutions[0], ReducedWord::identity(2));
    for sol in &report.solutions {
        assert!(oracle_solves(&sol.to_string(), 0), "{sol}");
    }
    let orbit: Vec<ReducedWord> = orbit_of_x_up_to(10).into_iter().map(|(_, w)| w).collect();
    assert_eq!(report.solutions.len(), orbit.len() + 1);
    for o in orbit {
        assert!(report.solutions.contains(&o));
    }
}

#[test]
fn decomposition_matches_oracle() {
    for i in 0..10_000u64 {
        let word = lemma_word(&mut trial_rng(24, i));
        let s = word.to_string();
        match (c_decompose(&word), common::l_r(&s)) {
            (Ok(d), Some((l, r))) => {
                assert_eq!((d.left, d.right), (l, r), "{s}");
                assert_eq!(d.reassemble(), word);
            }
            (Err(_), None) => assert!(in_c_subgroup(&word)),
            (got, want) => panic!("{s}: {got:?} vs {want:?}"),
        }
    }
}

#[test]
fn product_lemma_counterexample_holds_under_oracle() {
    let (w1, w2) = PRODUCT_COUNTEREXAMPLE;
    let p = common::mul(w1, w2);
    let (l1, _) = common::l_r(w1).unwrap();
    let (_, r2) = common::l_r(w2).unwrap();
    let (l12, r12) = common::l_r(&p).unwrap();
    assert_eq!(w1, common::mul(common::C, "x"));
    assert_eq!(p, common::mul("x", &common::inverse(common::C)));
    assert!(l12 != l1 && r12 != r2);
    assert_eq!(lemmas::product_keeps_an_end(&w(w1), &w(w2)), Some(false));
}

#[test]
fn fixed_points_exhaustive_against_oracle() {
    for word in enumerate_reduced(2, 9) {
        let s = word.to_string();
        let fixed = common::f(&s) == s;
        assert_eq!(is_fixed_by_f(&word).unwrap(), fixed, "{s}");
        assert_eq!(fixed, common::l_r(&s).is_none() || s.is_empty());
    }
}

#[test]
fn orbit_windows() {
    assert_eq!(f_orbit_window(&x(), 0, 1).unwrap(), vec![w("x"), w("xy")]);
    assert_eq!(f_orbit_window(&x(), -1, -1).unwrap(), vec![w("Y")]);
    assert_eq!(f_orbit_window(&c(), -3, 3).unwrap(), vec![c(); 7]);
    assert!(f_orbit_window(&x(), 2, 1).is_err());
}

#[test]
fn consecutive_witness_holds_in_window() {
    for i in 0..500u64 {
        let word = lemma_word(&mut trial_rng(25, i));
        if in_c_subgroup(&word) {
            assert_eq!(lemmas::consecutive_witness(&word), None);
            continue;
        }
        let n = lemmas::consecutive_witness(&word).expect("witness");
        let s = word.to_string();
        for m in [n - 1, n, n + 1] {
            let v = common::f_pow(&s, m);
            let c_inv = common::inverse(common::C);
            assert!(!v.ends_with(common::C) && !v.ends_with(&c_inv), "{s} at {m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn start_end_lemma(s in "[xXyY]{0,30}") {
        prop_assert!(lemmas::start_end_correspondence(&w(&s)));
    }

    #[test]
    fn non_decreasing_lemma(s in "[xXyY]{0,30}", l in -3i64..=3, r in -3i64..=3) {
        let word = &(&c().pow(l) * &w(&s)) * &c().pow(r);
        prop_assert_ne!(lemmas::left_right_non_decreasing(&word), Some(false));
    }

    #[test]
    fn shared_ends_lemma(s in "[xXyY]{0,30}") {
        prop_assert!(lemmas::shared_ends_are_c(&w(&s)));
    }

    #[test]
    fn equation_check_agrees_with_oracle(s in "[xXyY]{0,10}", k in -2i64..=2) {
        let word = w(&s);
        prop_assert_eq!(satisfies_equation(&word, k).unwrap(), oracle_solves(&word.to_string(), k));
    }
}
