//! The acceptance suite: one [`Criterion`] per headline claim, each made
//! of named checks with pinned tolerances.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::braid::{
    alpha, artin_equal, beta, braid_eq, double_coset_eq_b3, kernel_x, kernel_y, psi3_star, psi3_star_hom,
    r_star_hom, random_braid, rewrite_with_relators, z, BraidWord,
};
use crate::confmaps::{
    cross_ratio, depressed_cubic, j_invariant, j_of_lambda, psi_k, random_configuration, resolve_quartic,
    shape_invariant, shapes_agree, Configuration,
};
use crate::exec::Exec;
use crate::f2dyn::{
    self, c_decompose, in_c_subgroup, is_fixed_by_f, lemmas, orbit_of_x_up_to, satisfies_equation,
    solve_equation_with, SolveOptions,
};
use crate::modgroup::{braid_related_parabolic_pairs, normalize_parabolic_pair, psl_equal, UnimodularMatrix};
use crate::monodromy::{induced_hom, map_psi3, map_psi3_r, map_r, InducedHom};
use crate::report::Check;
use crate::words::{enumerate_reduced, random_reduced, ReducedWord};

/// Sizes and tolerances of the suite. [`Default`] is the full suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcceptanceConfig {
    pub seed: u64,
    #[serde(skip)]
    pub exec: Exec,
    pub trials: usize,
    pub orbit_trials: usize,
    pub oracle_pairs: usize,
    pub oracle_max_len: usize,
    pub exhaustive_len: usize,
    pub solve_len_k0: usize,
    pub solve_len_k: usize,
    pub unpruned_len: usize,
    pub coset_range: usize,
    pub parabolic_bound: i64,
    pub numeric_samples: usize,
    pub shape_samples: usize,
    pub steps: usize,
    pub conjugator_len: usize,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            seed: 0x5eed,
            exec: Exec::default(),
            trials: 100_000,
            orbit_trials: 10_000,
            oracle_pairs: 10_000,
            oracle_max_len: 40,
            exhaustive_len: 12,
            solve_len_k0: 16,
            solve_len_k: 12,
            unpruned_len: 10,
            coset_range: 50,
            parabolic_bound: 50,
            numeric_samples: 1000,
            shape_samples: 100,
            steps: 2000,
            conjugator_len: 8,
        }
    }
}

impl AcceptanceConfig {
    /// A reduced suite for smoke runs; sizes shrink, tolerances do not.
    pub fn quick() -> Self {
        AcceptanceConfig {
            trials: 2_000,
            orbit_trials: 300,
            oracle_pairs: 300,
            oracle_max_len: 20,
            exhaustive_len: 8,
            solve_len_k0: 10,
            solve_len_k: 8,
            unpruned_len: 8,
            coset_range: 12,
            parabolic_bound: 12,
            numeric_samples: 100,
            shape_samples: 20,
            steps: 500,
            ..Default::default()
        }
    }
}

pub const J_TOLERANCE: f64 = 1e-9;
pub const CROSS_RATIO_TOLERANCE: f64 = 1e-9;
pub const DUPLICATION_TOLERANCE: f64 = 1e-8;
pub const SHAPE_SPREAD_TOLERANCE: f64 = 1e-6;
pub const SOLVE_K0_SHORT_LIMIT_MS: u128 = 1_000;
pub const SOLVE_LIMIT_MS: u128 = 600_000;
pub const COSET_LIMIT_MS: u128 = 5_000;
pub const MONODROMY_LIMIT_MS: u128 = 30_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub elapsed_ms: u64,
    pub checks: Vec<Check>,
}

impl Criterion {
    fn new(id: u8, title: &str, checks: Vec<Check>, start: Instant) -> Self {
        Criterion {
            id,
            title: title.to_string(),
            passed: checks.iter().all(|c| c.passed),
            elapsed_ms: start.elapsed().as_millis() as u64,
            checks,
        }
    }

    /// `PASS`/`FAIL` line with the failing check names.
    pub fn summary_line(&self) -> String {
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {} {}: {} ({} checks, {} ms)",
            self.id,
            verdict,
            self.title,
            self.checks.len(),
            self.elapsed_ms
        );
        if !failed.is_empty() {
            line.push_str(&format!(" failing: {}", failed.join(", ")));
        }
        line
    }
}

/// Independent per-trial generator, so results do not depend on the
/// schedule.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn word_strings(ws: &[ReducedWord]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

fn orbit_set(max_len: usize) -> BTreeSet<String> {
    let mut s: BTreeSet<String> = orbit_of_x_up_to(max_len)
        .into_iter()
        .map(|(_, w)| w.to_string())
        .collect();
    s.insert(ReducedWord::identity(2).to_string());
    s
}

fn solution_set(ws: &[ReducedWord]) -> BTreeSet<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

pub fn criterion_1(cfg: &AcceptanceConfig) -> Criterion {
    let start = Instant::now();
    let t = Instant::now();
    let opts = SolveOptions {
        pruned: true,
        exec: cfg.exec,
    };
    let report = solve_equation_with(0, 6, opts);
    let ms = t.elapsed().as_millis();
    // brute force through the public API, independent of the solver's scratch path
    let brute: Vec<ReducedWord> = enumerate_reduced(2, 6)
        .filter(|w| satisfies_equation(w, 0).expect("rank 2"))
        .collect();
    let expected = orbit_set(6);
    let checks = vec![
        Check::new(
            "eleven_solutions",
            report.solutions.len() == 11,
            json!({"solutions": word_strings(&report.solutions)}),
        ),
        Check::new(
            "identity_included",
            report.solutions.first().is_some_and(|w| w.is_identity()),
            Value::Null,
        ),
        Check::new(
            "non_identity_candidates_examined",
            report.examined == 1456 + 1,
            json!({"examined_including_identity": report.examined}),
        ),
        Check::new(
            "equals_orbit_of_x",
            solution_set(&report.solutions) == expected,
            json!({"orbit": expected}),
        ),
        Check::new(
            "equals_brute_force",
            brute == report.solutions,
            json!({"brute_force": brute.len()}),
        ),
        Check::new(
            "runtime_under_1s",
            ms < SOLVE_K0_SHORT_LIMIT_MS,
            json!({"elapsed_ms": ms as u64}),
        ),
    ];
    Criterion::new(
        1,
        "solutions of length at most 6 are the orbit of x",
        checks,
        start,
    )
}

pub fn criterion_2(cfg: &AcceptanceConfig) -> Criterion {
    let start = Instant::now();
    let pruned = SolveOptions {
        pruned: true,
        exec: cfg.exec,
    };
    let unpruned = SolveOptions {
        pruned: false,
        exec: cfg.exec,
    };
    let mut checks = Vec::new();

    let t = Instant::now();
    let r0 = solve_equation_with(0, cfg.solve_len_k0, pruned);
    let expected = orbit_set(cfg.solve_len_k0);
    checks.push(Check::new(
        format!("k0_len{}_orbit_only", cfg.solve_len_k0),
        r0.in_orbit_of_x && solution_set(&r0.solutions) == expected,
        json!({
            "solutions": word_strings(&r0.solutions),
            "examined": r0.examined,
            "pruned": r0.pruned,
            "elapsed_ms": t.elapsed().as_millis() as u64,
        }),
    ));
    for k in [1i64, -1, 2, -2, 3, -3] {
        let t = Instant::now();
        let r = solve_equation_with(k, cfg.solve_len_k, pruned);
        checks.push(Check::new(
            format!("k{k}_len{}_identity_only", cfg.solve_len_k),
            r.solutions.len() == 1 && r.solutions[0].is_identity(),
            json!({
                "solutions": word_strings(&r.solutions),
                "pruned": r.pruned,
                "elapsed_ms": t.elapsed().as_millis() as u64,
            }),
        ));
    }
    for k in [0i64, 1, -1, 2, -2, 3, -3] {
        let a = solve_equation_with(k, cfg.unpruned_len, pruned);
        let b = solve_equation_with(k, cfg.unpruned_len, unpruned);
        checks.push(Check::new(
            format!("k{k}_len{}_pruned_matches_unpruned", cfg.unpruned_len),
            a.solutions == b.solutions && b.pruned == 0,
            json!({"pruned_away": a.pruned, "solutions": a.solutions.len()}),
        ));
    }
    let ms = start.elapsed().as_millis();
    checks.push(Check::new(
        "runtime_under_10min",
        ms < SOLVE_LIMIT_MS,
        json!({"elapsed_ms": ms as u64}),
    ));
    Criterion::new(
        2,
        "extended search finds only the orbit of x, and k = 0",
        checks,
        start,
    )
}

/// Mixes uniform words with words carrying powers of `c` at both ends, so
/// that the `c`-decomposition is exercised.
pub fn lemma_word<R: Rng>(rng: &mut R) -> ReducedWord {
    if rng.gen_bool(0.5) {
        let len = rng.gen_range(1..=24);
        random_reduced(rng, 2, len)
    } else {
        let c = f2dyn::c();
        let core_len = rng.gen_range(0..=8);
        let core = random_reduced(rng, 2, core_len);
        let l = c.pow(rng.gen_range(-3..=3));
        let r = c.pow(rng.gen_range(-3..=3));
        &(&l * &core) * &r
    }
}

/// Shortest pair, by total length, with `L(w1w2) ≠ L(w1)` and
/// `R(w1w2) ≠ R(w2)` although no factor lies in `⟨c⟩`: `w1 = cx`,
/// `w2 = x⁻¹c⁻¹xc⁻¹`, `w1w2 = xc⁻¹`. Found by exhaustive search over
/// pairs of length at most 9.
pub const PRODUCT_COUNTEREXAMPLE: (&str, &str) = ("xyXYx", "XyxxYX");

fn count_check(name: &str, failures: usize, trials: usize) -> Check {
    Check::new(
        name,
        failures == 0,
        json!({"trials": trials, "counterexamples": failures}),
    )
}

pub fn criterion_3(cfg: &AcceptanceConfig) -> Criterion {
    let start = Instant::now();
    let exec = cfg.exec;
    let seed = cfg.seed;
    let mut checks = Vec::new();

    let words: Vec<ReducedWord> = enumerate_reduced(2, cfg.exhaustive_len).collect();
    let n_words = words.len();
    let fixed_fail = exec
        .map(&words, |w| is_fixed_by_f(w).expect("rank 2") == in_c_subgroup(w))
        .into_iter()
        .filter(|ok| !ok)
        .count();
    checks.push(count_check(
        "fixed_points_are_powers_of_c_exhaustive",
        fixed_fail,
        n_words,
    ));
    let ends_fail = exec
        .map(&words, lemmas::shared_ends_are_c)
        .into_iter()
        .filter(|ok| !ok)
        .count();
    checks.push(count_check(
        "shared_length4_ends_are_c_exhaustive",
        ends_fail,
        n_words,
    ));
    drop(words);

    let t = cfg.trials;
    let fail = exec.count_failures(t, |i| {
        let w = lemma_word(&mut trial_rng(seed, i as u64));
        lemmas::start_end_correspondence(&w)
    });
    checks.push(count_check("start_end_correspondence", fail, t));

    let fail = exec.count_failures(t, |i| {
        let w = lemma_word(&mut trial_rng(seed ^ 1, i as u64));
        match c_decompose(&w) {
            Ok(d) => {
                let c_len = 4 * (d.left.unsigned_abs() + d.right.unsigned_abs()) as usize;
                d.reassemble() == w && d.core.len() + c_len == w.len()
            }
            Err(_) => in_c_subgroup(&w),
        }
    });
    checks.push(count_check("c_decomposition_without_cancellation", fail, t));

    let failures: Vec<(String, String)> = exec
        .map_range(t, |i| {
            let mut rng = trial_rng(seed ^ 2, i as u64);
            let (w1, w2) = (lemma_word(&mut rng), lemma_word(&mut rng));
            match lemmas::product_keeps_an_end(&w1, &w2) {
                Some(false) => Some((w1.to_string(), w2.to_string())),
                _ => None,
            }
        })
        .into_iter()
        .flatten()
        .collect();
    let (w1, w2) = PRODUCT_COUNTEREXAMPLE;
    let smallest = lemmas::product_keeps_an_end(
        &ReducedWord::parse(2, w1).expect("word"),
        &ReducedWord::parse(2, w2).expect("word"),
    );
    checks.push(Check::new(
        "product_keeps_an_end",
        failures.is_empty() && smallest != Some(false),
        json!({
            "trials": t,
            "counterexamples": failures.len(),
            "found": failures,
            "smallest_known": [w1, w2],
            "smallest_known_fails": smallest == Some(false),
        }),
    ));

    let fail = exec.count_failures(t, |i| {
        let w = lemma_word(&mut trial_rng(seed ^ 3, i as u64));
        lemmas::left_right_non_decreasing(&w).unwrap_or(true)
    });
    checks.push(count_check("left_right_non_decreasing", fail, t));

    let fail = exec.count_failures(t, |i| {
        let mut rng = trial_rng(seed ^ 4, i as u64);
        let w = lemma_word(&mut rng);
        let k = [1i64, -1, 2, -2, 3, -3][rng.gen_range(0..6)];
        w.is_identity() || !satisfies_equation(&w, k).expect("rank 2")
    });
    checks.push(count_check("nonzero_k_has_no_solution", fail, t));

    let t = cfg.orbit_trials;
    let witnesses = exec.map_range(t, |i| {
        let w = lemma_word(&mut trial_rng(seed ^ 5, i as u64));
        (in_c_subgroup(&w), lemmas::consecutive_witness(&w))
    });
    let missing = witnesses
        .iter()
        .filter(|(in_c, wit)| !in_c && wit.is_none())
        .count();
    let beyond = witnesses
        .iter()
        .filter(|(_, wit)| wit.is_some_and(|n| n.abs() > 12))
        .count();
    let furthest = witnesses.iter().filter_map(|(_, wit)| wit.map(i64::abs)).max();
    checks.push(Check::new(
        "consecutive_witness_exists",
        missing == 0,
        json!({
            "trials": t,
            "counterexamples": missing,
            "beyond_12_steps": beyond,
            "furthest": furthest,
        }),
    ));
    Criterion::new(3, "structural lemmas about f", checks, start)
}

fn perturb<R: Rng>(rng: &mut R, w: &BraidWord, max_len: usize) -> BraidWord {
    let n = w.strands() as i32;
    let mut letters = w.letters().to_vec();
    let g = rng.gen_range(1..n);
    let s = if rng.gen_bool(0.5) { g } else { -g };
    if letters.is_empty() || (letters.len() < max_len && rng.gen_bool(0.3)) {
        let pos = rng.gen_range(0..=letters.len());
        letters.insert(pos, s);
    } else {
        let pos = rng.gen_range(0..letters.len());
        letters[pos] = s;
    }
    BraidWord::new(w.strands(), letters).expect("valid generators")
}

/// `(agreements, disagreements, equal pairs)` of `braid_eq` against the
/// Artin oracle.
pub fn oracle_agreement(
    strands: usize,
    pairs: usize,
    max_len: usize,
    seed: u64,
    exec: Exec,
) -> (usize, usize, usize) {
    let verdicts = exec.map_range(pairs, |i| {
        let mut rng = trial_rng(seed, i as u64);
        // both sides stay within max_len: relators add at most 6 letters each
        let (u, v) = if i % 2 == 0 {
            let k = rng.gen_range(1..=3usize).min(max_len / 7).max(1);
            let len = rng.gen_range(1..=max_len.saturating_sub(6 * k).max(1));
            let u = random_braid(&mut rng, strands, len);
            (u.clone(), rewrite_with_relators(&mut rng, &u, k))
        } else {
            let len = rng.gen_range(1..=max_len);
            let u = random_braid(&mut rng, strands, len);
            let v = perturb(&mut rng, &u, max_len);
            (u, v)
        };
        let fast = braid_eq(&u, &v).expect("same strands");
        let oracle = artin_equal(&u, &v).expect("same strands");
        (fast == oracle, oracle)
    });
    let agree = verdicts.iter().filter(|(a, _)| *a).count();
    let equal = verdicts.iter().filter(|(_, e)| *e).count();
    (agree, verdicts.len() - agree, equal)
}

fn both_oracles(u: &BraidWord, v: &BraidWord) -> (bool, bool) {
    (
        braid_eq(u, v).expect("same strands"),
        artin_equal(u, v).expect("same strands"),
    )
}

pub fn criterion_4(cfg: &AcceptanceConfig) -> Criterion {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (strands, salt) in [(3usize, 30u64), (4, 40)] {
        let (agree, disagree, equal) = oracle_agreement(
            strands,
            cfg.oracle_pairs,
            cfg.oracle_max_len,
            cfg.seed ^ salt,
            cfg.exec,
        );
        checks.push(Check::new(
            format!("b{strands}_normal_form_matches_artin_oracle"),
            disagree == 0,
            json!({"pairs": agree + disagree, "disagreements": disagree, "equal_pairs": equal}),
        ));
    }

    let s = |i: i32| BraidWord::sigma(4, i);
    let (x, y) = (kernel_x(), kernel_y());
    let conj = |w: &BraidWord, g: &BraidWord| w.conjugate_by(&g.inverse());
    let table = [
        ("s1_fixes_x", conj(&x, &s(1)), x.clone()),
        ("s2_sends_x_to_xy", conj(&x, &s(2)), x.concat(&y).expect("B4")),
        (
            "s1_sends_y_to_yX",
            conj(&y, &s(1)),
            y.concat(&x.inverse()).expect("B4"),
        ),
        ("s2_fixes_y", conj(&y, &s(2)), y.clone()),
    ];
    for (name, lhs, rhs) in table {
        let (nf, oracle) = both_oracles(&lhs, &rhs);
        checks.push(Check::new(
            format!("kernel_action_{name}"),
            nf && oracle,
            json!({"normal_form": nf, "artin": oracle}),
        ));
    }

    let z3 = psi3_star(&z(3)).expect("B3");
    let (nf, oracle) = both_oracles(&z3, &z(4));
    checks.push(Check::new(
        "psi3_preserves_center_generator",
        nf && oracle,
        json!({"normal_form": nf, "artin": oracle}),
    ));

    let image = psi3_star(&beta(3)).expect("B3");
    let a2 = alpha(4).pow(2);
    let (nf, oracle) = both_oracles(&image, &a2);
    let s3 = s(3);
    let (cnf, coracle) = both_oracles(&image, &a2.conjugate_by(&s3));
    checks.push(Check::new(
        "psi3_beta_equals_alpha4_squared",
        nf && oracle,
        json!({
            "image": image.letters(),
            "alpha4_squared": a2.letters(),
            "normal_form": nf,
            "artin": oracle,
            "conjugate_by_sigma3_equal": cnf && coracle,
        }),
    ));
    Criterion::new(4, "word problem cross-validation", checks, start)
}

pub fn criterion_5(cfg: &AcceptanceConfig) -> Criterion {
    let start = Instant::now();
    let ab = alpha(3).concat(&beta(3)).expect("B3");
    let gs: Vec<BraidWord> = (1..=cfg.coset_range as i64).map(|n| ab.pow(n)).collect();
    let pairs: Vec<(usize, usize)> = (0..gs.len())
        .flat_map(|i| (0..gs.len()).map(move |j| (i, j)))
        .collect();
    let verdicts = cfg.exec.map(&pairs, |&(i, j)| {
        (i, j, double_coset_eq_b3(&gs[i], &gs[j]).expect("B3"))
    });
    let collisions: Vec<(usize, usize)> = verdicts
        .iter()
        .filter(|(i, j, eq)| i != j && *eq)
        .map(|(i, j, _)| (i + 1, j + 1))
        .collect();
    let reflexive = verdicts.iter().filter(|(i, j, _)| i == j).all(|(_, _, eq)| *eq);
    let ordered = pairs.iter().filter(|(i, j)| i != j).count();
    let ms = start.elapsed().as_millis();
    let checks = vec![
        Check::new(
            "pairwise_distinct",
            collisions.is_empty(),
            json!({"ordered_comparisons": ordered, "collisions": collisions}),
        ),
        Check::new("reflexive", reflexive, Value::Null),
        Check::new(
            "runtime_under_5s",
            ms < COSET_LIMIT_MS,
            json!({"elapsed_ms": ms as u64}),
        ),
    ];
    Criterion::new(
        5,
        "double cosets of powers of alpha beta are distinct",
        checks,
        start,
    )
}

pub fn criterion_6(cfg: &AcceptanceConfig) -> Criterion {
    let start = Instant::now();
    let pairs = braid_related_parabolic_pairs(cfg.parabolic_bound);
    let (t, u) = (UnimodularMatrix::t(), UnimodularMatrix::u());
    let outcomes = cfg.exec.map(&pairs, |(p, q)| {
        let p = UnimodularMatrix::from_i64(p[0], p[1], p[2], p[3]).expect("bounded");
        let q = UnimodularMatrix::from_i64(q[0], q[1], q[2], q[3]).expect("bounded");
        match normalize_parabolic_pair(&p, &q) {
            Ok(norm) => {
                let e = if norm.inverted { -1 } else { 1 };
                let gi = norm.conjugator.inverse();
                let ok =
                    psl_equal(&p.conjugate_by(&gi), &t.pow(e)) && psl_equal(&q.conjugate_by(&gi), &u.pow(e));
                (ok, norm.inverted)
            }
            Err(_) => (false, false),
        }
    });
    let exceptions = outcomes.iter().filter(|(ok, _)| !ok).count();
    let inverted = outcomes.iter().filter(|(ok, inv)| *ok && *inv).count();
    let checks = vec![Check::new(
        "every_pair_is_standard",
        exceptions == 0 && !pairs.is_empty(),
        json!({
            "bound": cfg.parabolic_bound,
            "pairs": pairs.len(),
            "inverted": inverted,
            "exceptions": exceptions,
        }),
    )];
    Criterion::new(
        6,
        "braid-related parabolic pairs are conjugate to the standard pair",
        checks,
        start,
    )
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// Largest `|x(2P) - x(P)|`, relative, over the outputs of `Ψ₃(c)`.
pub fn duplication_residual(c: &Configuration) -> f64 {
    let out = psi_k(c, 3).expect("generic configuration");
    let (s, p, q) = depressed_cubic(c).expect("3 points");
    out.points()
        .iter()
        .map(|&z| {
            let x = z - s;
            let num = (x * x - p).powu(2) - 8.0 * q * x;
            let den = 4.0 * (x * x * x + p * x + q);
            rel_err(num / den, x)
        })
        .fold(0.0, f64::max)
}

pub fn criterion_7(cfg: &AcceptanceConfig) -> Criterion {
    let start = Instant::now();
    let mut checks = Vec::new();
    let j = j_invariant(&Configuration::from_real(&[0.0, 1.0, 2.0]).expect("distinct")).expect("3 points");
    checks.push(Check::new(
        "j_of_0_1_2_is_1728",
        rel_err(j, Complex64::new(1728.0, 0.0)) < J_TOLERANCE,
        json!({"j": [j.re, j.im]}),
    ));

    let seed = cfg.seed;
    let transfer = cfg.exec.map_range(cfg.numeric_samples, |i| {
        let c = random_configuration(&mut trial_rng(seed ^ 70, i as u64), 4, 1e-3);
        let x = c.points();
        let lam = cross_ratio([x[0].into(), x[1].into(), x[2].into(), x[3].into()]).expect("distinct");
        let jr = j_invariant(&resolve_quartic(&c).expect("distinct output")).expect("3 points");
        rel_err(j_of_lambda(lam), jr)
    });
    let worst = transfer.iter().copied().fold(0.0, f64::max);
    checks.push(Check::new(
        "cross_ratio_transfer_for_r",
        worst < CROSS_RATIO_TOLERANCE,
        json!({"samples": transfer.len(), "max_relative_error": worst}),
    ));

    let residuals = cfg.exec.map_range(cfg.numeric_samples, |i| {
        duplication_residual(&random_configuration(
            &mut trial_rng(seed ^ 71, i as u64),
            3,
            1e-3,
        ))
    });
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    checks.push(Check::new(
        "psi3_duplication_residual",
        worst < DUPLICATION_TOLERANCE,
        json!({"samples": residuals.len(), "max_residual": worst}),
    ));

    let shapes = cfg.exec.map_range(cfg.shape_samples, |i| {
        let c = random_configuration(&mut trial_rng(seed ^ 72, i as u64), 3, 1e-2);
        let out = resolve_quartic(&psi_k(&c, 3).expect("generic")).expect("distinct");
        shape_invariant(&out).expect("3 points")
    });
    let j0 = shapes[0];
    let spread = shapes
        .iter()
        .map(|&j| (j - j0).norm() / j0.norm().max(1.0))
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "shape_of_r_after_psi3_is_constant",
        shapes
            .iter()
            .all(|&j| shapes_agree(j, j0, SHAPE_SPREAD_TOLERANCE)),
        json!({"samples": shapes.len(), "j": [j0.re, j0.im], "spread": spread}),
    ));
    Criterion::new(7, "numerical identities of the configuration maps", checks, start)
}

fn induced_json(ih: &InducedHom) -> Value {
    json!({
        "images": ih.hom.images.iter().map(|w| w.letters().to_vec()).collect::<Vec<_>>(),
        "relations_hold": ih.relations.is_hom,
        "permutations_consistent": ih.permutations_consistent,
        "frames": ih.frames_per_loop,
    })
}

fn is_three_cycle(p: &[usize]) -> bool {
    let moved = p.iter().enumerate().filter(|(i, &j)| *i != j).count();
    moved == 3 && p.iter().all(|&j| p[p[p[j]]] == j)
}

pub fn criterion_8(cfg: &AcceptanceConfig) -> Criterion {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut extracted = Vec::new();
    type MapFn = fn(&Configuration) -> Result<Configuration, crate::confmaps::ConfError>;
    let maps: [(&str, MapFn, usize, usize); 3] = [
        ("r", map_r, 4, 3),
        ("psi3", map_psi3, 3, 4),
        ("psi3_after_r", map_psi3_r, 4, 4),
    ];
    for (name, f, n, m) in maps {
        let t = Instant::now();
        let result = induced_hom(&f, n, m, cfg.steps, cfg.exec);
        let ms = t.elapsed().as_millis();
        match result {
            Ok(ih) => {
                checks.push(Check::new(
                    format!("{name}_extracted_within_30s"),
                    ms < MONODROMY_LIMIT_MS && ih.relations.is_hom && ih.permutations_consistent,
                    json!({"elapsed_ms": ms as u64, "extracted": induced_json(&ih)}),
                ));
                extracted.push(Some(ih));
            }
            Err(e) => {
                checks.push(Check::new(
                    format!("{name}_extracted_within_30s"),
                    false,
                    json!(e.to_string()),
                ));
                extracted.push(None);
            }
        }
    }
    let conj_check = |name: &str, found: Option<&InducedHom>, expected: &crate::braid::BraidHom| {
        let h = found.and_then(|ih| ih.conjugator_to(expected, cfg.conjugator_len).ok().flatten());
        Check::new(
            name,
            h.is_some(),
            json!({
                "expected": expected.images.iter().map(|w| w.letters().to_vec()).collect::<Vec<_>>(),
                "conjugator": h.map(|w| w.letters().to_vec()),
            }),
        )
    };
    checks.push(conj_check(
        "r_matches_s1_s2_s1",
        extracted[0].as_ref(),
        &r_star_hom(),
    ));
    checks.push(conj_check(
        "psi3_matches_s1s2_s3s2",
        extracted[1].as_ref(),
        &psi3_star_hom(),
    ));
    if let Some(psi) = &extracted[1] {
        let p = psi.hom.images[0].permutation();
        checks.push(Check::new(
            "psi3_sigma1_is_three_cycle",
            is_three_cycle(&p),
            json!({"permutation": p}),
        ));
    }
    let composed = match (&extracted[0], &extracted[1]) {
        (Some(r), Some(psi)) => psi.hom.after(&r.hom).ok(),
        _ => None,
    };
    match composed {
        Some(c) => checks.push(conj_check(
            "functoriality_psi3_after_r",
            extracted[2].as_ref(),
            &c,
        )),
        None => checks.push(Check::new(
            "functoriality_psi3_after_r",
            false,
            json!("missing extraction"),
        )),
    }
    Criterion::new(8, "braid monodromy of R, psi3 and their composite", checks, start)
}

pub fn run_criterion(id: u8, cfg: &AcceptanceConfig) -> Option<Criterion> {
    Some(match id {
        1 => criterion_1(cfg),
        2 => criterion_2(cfg),
        3 => criterion_3(cfg),
        4 => criterion_4(cfg),
        5 => criterion_5(cfg),
        6 => criterion_6(cfg),
        7 => criterion_7(cfg),
        8 => criterion_8(cfg),
        _ => return None,
    })
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<Criterion> {
    (1..=8).filter_map(|id| run_criterion(id, cfg)).collect()
}
