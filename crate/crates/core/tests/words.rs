mod common;

use confbraid::acceptance::trial_rng;
use confbraid::words::{enumerate_reduced, random_reduced, reduced_count};
use confbraid::ReducedWord;
use rand::Rng;

fn w(s: &str) -> ReducedWord {
    ReducedWord::parse(2, s).unwrap()
}

#[test]
fn identity_substitution_fixes_random_words() {
    for rank in [2usize, 3] {
        let ids: Vec<ReducedWord> = (0..rank).map(|j| ReducedWord::generator(rank, j)).collect();
        for i in 0..100_000u64 {
            let mut rng = trial_rng(11, i);
            let len = rng.gen_range(0..=30);
            let word = random_reduced(&mut rng, rank, len);
            assert_eq!(word.substitute(&ids).unwrap(), word);
        }
    }
}

#[test]
fn operations_match_string_oracle() {
    for i in 0..10_000u64 {
        let mut rng = trial_rng(12, i);
        let raw: String = (0..rng.gen_range(0..30))
            .map(|_| ['x', 'X', 'y', 'Y'][rng.gen_range(0..4)])
            .collect();
        let other: String = (0..rng.gen_range(0..30))
            .map(|_| ['x', 'X', 'y', 'Y'][rng.gen_range(0..4)])
            .collect();
        let (a, b) = (w(&raw), w(&other));
        assert_eq!(a.to_string(), common::reduce(&raw));
        assert_eq!((&a * &b).to_string(), common::mul(&raw, &other));
        assert_eq!(a.inverse().to_string(), common::reduce(&common::inverse(&raw)));
        let img = a.substitute(&[w("xy"), w("X")]).unwrap();
        assert_eq!(img.to_string(), common::f(&raw));
    }
}

#[test]
fn enumeration_matches_closed_form_and_oracle() {
    let mut per_len = [0u64; 13];
    for word in enumerate_reduced(2, 12) {
        per_len[word.len()] += 1;
    }
    for (len, &n) in per_len.iter().enumerate() {
        let expected = if len == 0 { 1 } else { 4 * 3u64.pow(len as u32 - 1) };
        assert_eq!(n, expected);
        assert_eq!(reduced_count(2, len), expected);
    }
    let listed: Vec<String> = enumerate_reduced(2, 7).map(|w| w.to_string()).collect();
    let mut oracle: Vec<String> = (0..=7).flat_map(common::all_words).collect();
    let mut sorted = listed.clone();
    sorted.sort();
    oracle.sort();
    assert_eq!(sorted, oracle);
}

#[test]
fn worked_examples() {
    assert!((&w("x") * &w("X")).is_identity());
    assert_eq!(&w("xy") * &w("Yx"), w("xx"));
    let cx = &w("xyXY") * &w("x");
    assert_eq!(cx.to_string(), "xyXYx");
    assert_eq!(cx.len(), 5);
    assert_eq!(w("xyXY").inverse().to_string(), "yxYX");
    assert_eq!(w("xyXY").substitute(&[w("xy"), w("X")]).unwrap(), w("xyXY"));
}
