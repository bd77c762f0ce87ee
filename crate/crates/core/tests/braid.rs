use confbraid::acceptance::{oracle_agreement, trial_rng};
use confbraid::braid::*;
use confbraid::f2dyn::{f_power, orbit_of_x_up_to, x};
use confbraid::words::random_reduced;
use confbraid::{Exec, ReducedWord};
use proptest::prelude::*;
use rand::Rng;

fn b(n: usize, letters: &[i32]) -> BraidWord {
    BraidWord::new(n, letters.to_vec()).unwrap()
}

fn arb_braid(n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    let g = n as i32 - 1;
    prop::collection::vec(prop_oneof![1..=g, -g..=-1], 0..max_len)
        .prop_map(move |l| BraidWord::new(n, l).unwrap())
}

/// `w ∈ F₂` as a braid through `x = σ1⁻¹σ3`, `y = x⁻¹σ2⁻¹xσ2`.
fn kernel_braid(w: &ReducedWord) -> BraidWord {
    B4NormalForm {
        kernel_part: w.clone(),
        b3_part: B3NormalForm::identity(),
    }
    .to_braid()
}

#[test]
fn oracle_agreement_in_b3_and_b4() {
    for n in [3usize, 4] {
        let (_, disagree, equal) = oracle_agreement(n, 2_000, 40, 31, Exec::default());
        assert_eq!(disagree, 0);
        assert!(equal > 500 && equal < 1_900, "equal pairs {equal}");
    }
}

#[test]
fn artin_relations_and_examples() {
    let (a, c) = (artin_action(&b(3, &[1, 2, 1])), artin_action(&b(3, &[2, 1, 2])));
    assert_eq!(a, c);
    assert_eq!(artin_action(&b(4, &[1, 3])), artin_action(&b(4, &[3, 1])));
    let s1 = artin_action(&b(2, &[1]));
    assert_eq!(s1[0].letters().len(), 3);
    assert_eq!(s1[1], ReducedWord::generator(2, 0));
    assert!(!braid_eq(&b(3, &[1, 2]), &b(3, &[2, 1])).unwrap());
    assert!(braid_eq(&b(5, &[1, 2, 1, 4]), &b(5, &[4, 2, 1, 2])).unwrap());
}

#[test]
fn normal_form_examples() {
    let z3 = b3_normal_form(&z(3)).unwrap();
    assert!(z3.psl_part.is_empty());
    assert_eq!(z3.exponent_sum, 6);
    let rel = b3_normal_form(&b(3, &[1, 2, 1, -2, -1, -2])).unwrap();
    assert_eq!(rel, B3NormalForm::identity());
    let x = gassner_split(&b(4, &[-1, 3])).unwrap();
    assert_eq!(x.kernel_part.to_string(), "x");
    assert_eq!(x.b3_part, B3NormalForm::identity());
    let s3 = gassner_split(&b(4, &[3])).unwrap();
    assert_eq!(s3.kernel_part.to_string(), "x");
    assert_eq!(s3.b3_part, b3_normal_form(&b(3, &[1])).unwrap());
}

#[test]
fn r_star_and_psi3_star() {
    assert_eq!(r_star(&b(4, &[3])).unwrap().letters(), &[1]);
    assert!(braid_eq(&r_star(&kernel_x()).unwrap(), &BraidWord::identity(3)).unwrap());
    assert!(braid_eq(&r_star(&kernel_y()).unwrap(), &BraidWord::identity(3)).unwrap());
    assert!(braid_eq(&r_star(&z(4)).unwrap(), &z(3).pow(2)).unwrap());
    assert!(braid_eq(&psi3_star(&z(3)).unwrap(), &z(4)).unwrap());
    assert!(
        check_braid_homomorphism(&psi3_star_hom().images, false)
            .unwrap()
            .is_hom
    );
    assert!(
        check_braid_homomorphism(&r_star_hom().images, false)
            .unwrap()
            .is_hom
    );
}

#[test]
fn homomorphism_checks() {
    let cyc = check_braid_homomorphism(&[b(3, &[1]), b(3, &[1])], false).unwrap();
    assert!(cyc.is_hom && cyc.cyclic);
    assert!(
        !check_braid_homomorphism(&[b(3, &[1]), b(3, &[-2])], false)
            .unwrap()
            .is_hom
    );
    assert!(check_braid_homomorphism(&[b(5, &[1]), b(5, &[2])], false).is_err());
    assert!(
        check_braid_homomorphism(&[b(5, &[1]), b(5, &[2])], true)
            .unwrap()
            .is_hom
    );
}

#[test]
fn transvections() {
    let id = [b(3, &[1]), b(3, &[2])];
    assert_eq!(transvect(&id, &z(3), 0).unwrap(), id.to_vec());
    let twisted = transvect(&id, &z(3), 1).unwrap();
    for (t, o) in twisted.iter().zip(&id) {
        assert_eq!(t.exponent_sum(), o.exponent_sum() + 6);
    }
    assert!(check_braid_homomorphism(&twisted, false).unwrap().is_hom);
    let psi = transvect(&psi3_star_hom().images, &z(4), 1).unwrap();
    assert!(check_braid_homomorphism(&psi, false).unwrap().is_hom);
    assert!(transvect(&id, &b(3, &[1]), 1).is_err());
}

#[test]
fn inversion_automorphism() {
    assert_eq!(invert_generators(&b(3, &[1, 2])).letters(), &[-1, -2]);
    assert!(braid_eq(&invert_generators(&z(3)), &z(3).inverse()).unwrap());
    let inv = invert_hom(&psi3_star_hom());
    assert!(check_braid_homomorphism(&inv.images, false).unwrap().is_hom);
}

#[test]
fn double_cosets_and_rho() {
    let (a, be) = (alpha(3), beta(3));
    for i in 0..200u64 {
        let mut rng = trial_rng(32, i);
        let len = rng.gen_range(0..=20);
        let g = random_braid(&mut rng, 3, len);
        let moved = be
            .pow(rng.gen_range(-3..=3))
            .concat(&g)
            .unwrap()
            .concat(&a.pow(rng.gen_range(-4..=4)))
            .unwrap();
        assert!(double_coset_eq_b3(&g, &moved).unwrap());
        assert!(double_coset_eq_b3(&g, &z(3).concat(&g).unwrap()).unwrap());
        let rho = rho_g(&g).unwrap();
        assert!(check_braid_homomorphism(&rho.images, false).unwrap().is_hom);
    }
    let id = rho_g(&BraidWord::identity(3)).unwrap();
    assert!(braid_eq(&id.images[0], &b(3, &[1])).unwrap());
    assert!(braid_eq(&id.images[1], &b(3, &[2])).unwrap());
    let ab = a.concat(&be).unwrap();
    assert!(!double_coset_eq_b3(&ab, &ab.pow(2)).unwrap());
}

#[test]
fn kernel_action_table() {
    let (kx, ky) = (kernel_x(), kernel_y());
    let s = |i| BraidWord::sigma(4, i);
    let conj = |w: &BraidWord, g: &BraidWord| w.conjugate_by(&g.inverse());
    assert!(artin_equal(&conj(&kx, &s(1)), &kx).unwrap());
    assert!(artin_equal(&conj(&kx, &s(2)), &kx.concat(&ky).unwrap()).unwrap());
    assert!(artin_equal(&conj(&ky, &s(1)), &ky.concat(&kx.inverse()).unwrap()).unwrap());
    assert!(artin_equal(&conj(&ky, &s(2)), &ky).unwrap());
}

/// Images `σ1 ↦ σ1σ2`, `σ2 ↦ w·σ1σ2` in `B₄` for `w ∈ F₂`.
fn bridge_images(w: &ReducedWord) -> [BraidWord; 2] {
    let s12 = b(4, &[1, 2]);
    [s12.clone(), kernel_braid(w).concat(&s12).unwrap()]
}

#[test]
fn equation_bridge_orbit_words_give_homomorphisms() {
    for n in -6..=6 {
        let w = f_power(&x(), n).unwrap();
        let imgs = bridge_images(&w);
        assert!(check_braid_homomorphism(&imgs, false).unwrap().is_hom, "n = {n}");
    }
}

#[test]
fn equation_bridge_other_words_fail() {
    let orbit: Vec<ReducedWord> = orbit_of_x_up_to(8).into_iter().map(|(_, w)| w).collect();
    let mut tested = 0;
    let mut i = 0u64;
    while tested < 100 {
        let mut rng = trial_rng(33, i);
        i += 1;
        let len = rng.gen_range(1..=8);
        let w = random_reduced(&mut rng, 2, len);
        if orbit.contains(&w) {
            continue;
        }
        tested += 1;
        let imgs = bridge_images(&w);
        assert!(!check_braid_homomorphism(&imgs, false).unwrap().is_hom, "w = {w}");
    }
}

#[test]
fn conjugator_search() {
    let psi = psi3_star_hom();
    let moved = psi.conjugate_by(&b(4, &[2, -3]));
    let h = find_conjugator(&psi, &moved, 3).unwrap().expect("conjugator");
    assert!(psi.conjugate_by(&h).equals(&moved).unwrap());
    assert!(find_conjugator(&psi, &r_star_hom(), 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn b3_normal_form_is_multiplicative(u in arb_braid(3, 25), v in arb_braid(3, 25)) {
        let uv = u.concat(&v).unwrap();
        let prod = b3_normal_form(&u).unwrap().mul(&b3_normal_form(&v).unwrap());
        prop_assert_eq!(b3_normal_form(&uv).unwrap(), prod.clone());
        prop_assert!(artin_equal(&prod.to_braid(), &uv).unwrap());
    }

    #[test]
    fn b4_normal_form_is_multiplicative(u in arb_braid(4, 14), v in arb_braid(4, 14)) {
        let uv = u.concat(&v).unwrap();
        let prod = gassner_split(&u).unwrap().mul(&gassner_split(&v).unwrap());
        prop_assert_eq!(gassner_split(&uv).unwrap(), prod.clone());
        prop_assert!(artin_equal(&prod.to_braid(), &uv).unwrap());
    }

    #[test]
    fn exponent_sum_is_additive(u in arb_braid(5, 30), v in arb_braid(5, 30)) {
        prop_assert_eq!(u.concat(&v).unwrap().exponent_sum(), u.exponent_sum() + v.exponent_sum());
    }

    #[test]
    fn inversion_is_an_involution(u in arb_braid(4, 30)) {
        prop_assert_eq!(invert_generators(&invert_generators(&u)), u);
    }

    #[test]
    fn relator_rewrites_are_equal(u in arb_braid(4, 15), seed in any::<u64>()) {
        let v = rewrite_with_relators(&mut trial_rng(seed, 0), &u, 2);
        prop_assert!(braid_eq(&u, &v).unwrap());
    }
}
