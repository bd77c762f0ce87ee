use confbraid::acceptance::trial_rng;
use confbraid::confmaps::*;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn shuffled<R: Rng>(rng: &mut R, c: &Configuration) -> Configuration {
    let mut pts = c.points().to_vec();
    pts.shuffle(rng);
    Configuration::new(pts).unwrap()
}

/// `x(2P)` on `y² = x³ + px + q`.
fn doubled_x(x: Complex64, p: Complex64, q: Complex64) -> Complex64 {
    ((x * x - p).powu(2) - 8.0 * q * x) / (4.0 * (x * x * x + p * x + q))
}

fn near_some(z: Complex64, set: &[Complex64], tol: f64) -> bool {
    set.iter().any(|&w| rel(z, w) < tol)
}

#[test]
fn torsion_outputs_pass_duplication_oracle() {
    for i in 0..300u64 {
        let c = random_configuration(&mut trial_rng(51, i), 3, 1e-2);
        // depressed form computed here, independently of the library
        let s = (c.points()[0] + c.points()[1] + c.points()[2]) / 3.0;
        let r: Vec<Complex64> = c.points().iter().map(|z| z - s).collect();
        let p = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        let q = -r[0] * r[1] * r[2];
        let out3 = psi_k(&c, 3).unwrap();
        let out4 = psi_k(&c, 4).unwrap();
        let out5 = psi_k(&c, 5).unwrap();
        assert_eq!((out3.len(), out4.len(), out5.len()), (4, 6, 12));
        assert_eq!(psi_k(&c, 2).unwrap(), c);
        let shift = |o: &Configuration| o.points().iter().map(|z| z - s).collect::<Vec<_>>();
        let (o3, o4, o5) = (shift(&out3), shift(&out4), shift(&out5));
        for &x in &o3 {
            assert!(rel(doubled_x(x, p, q), x) < 1e-8);
        }
        for &x in &o4 {
            assert!(near_some(doubled_x(x, p, q), &r, 1e-8));
        }
        for &x in &o5 {
            assert!(near_some(doubled_x(x, p, q), &o5, 1e-8));
        }
    }
}

#[test]
fn psi3_of_symmetric_triple() {
    let out = psi_k(&Configuration::from_real(&[-1.0, 0.0, 1.0]).unwrap(), 3).unwrap();
    // roots of 3x⁴ − 6x² − 1: x² = 1 ± 2/√3
    let a = (1.0 + 2.0 / 3f64.sqrt()).sqrt();
    let b = (2.0 / 3f64.sqrt() - 1.0).sqrt();
    let expected = Configuration::new(vec![cx(a, 0.0), cx(-a, 0.0), cx(0.0, b), cx(0.0, -b)]).unwrap();
    assert!(out.approx_eq_set(&expected, 1e-12));
}

#[test]
fn resolving_quartic_is_symmetric_and_separated() {
    let ex = resolve_quartic(&Configuration::from_real(&[0.0, 1.0, 2.0, 3.0]).unwrap()).unwrap();
    assert!(ex.approx_eq_set(&Configuration::from_real(&[2.0, 3.0, 6.0]).unwrap(), 0.0));
    let mut worst_sep = f64::INFINITY;
    for i in 0..1_000u64 {
        let mut rng = trial_rng(52, i);
        let c = random_configuration(&mut rng, 4, 1e-3);
        let out = resolve_quartic(&c).unwrap();
        worst_sep = worst_sep.min(out.separation());
        let again = resolve_quartic(&shuffled(&mut rng, &c)).unwrap();
        assert!(out.approx_eq_set(&again, 1e-14));
    }
    assert!(worst_sep > 1e-9, "{worst_sep}");
}

#[test]
fn discriminant_values_and_symmetry() {
    let d = |xs: &[f64]| discriminant(&Configuration::from_real(xs).unwrap());
    assert_eq!(d(&[0.0, 1.0]), cx(-1.0, 0.0));
    assert_eq!(d(&[0.0, 1.0, 2.0]), cx(-4.0, 0.0));
    for i in 0..200u64 {
        let mut rng = trial_rng(53, i);
        let n = rng.gen_range(2..=6);
        let c = random_configuration(&mut rng, n, 1e-2);
        assert!(rel(discriminant(&c), discriminant(&shuffled(&mut rng, &c))) < 1e-12);
    }
}

#[test]
fn cross_ratio_conventions() {
    let l = cx(0.3, 1.7);
    let z0 = cx(0.0, 0.0);
    let one = cx(1.0, 0.0);
    let v = cross_ratio([z0.into(), one.into(), l.into(), ExtPoint::Infinity]).unwrap();
    assert!(rel(v, l) < 1e-15);
    let pts = [cx(0.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0), cx(3.0, 0.0)];
    let base = cross_ratio(pts.map(ExtPoint::from)).unwrap();
    let orbit = [
        base,
        one - base,
        one / base,
        one / (one - base),
        (base - one) / base,
        base / (base - one),
    ];
    let mut rng = trial_rng(54, 0);
    for _ in 0..24 {
        let mut p = pts;
        p.shuffle(&mut rng);
        let v = cross_ratio(p.map(ExtPoint::from)).unwrap();
        assert!(near_some(v, &orbit, 1e-14));
    }
    let a = AffineMap::new(cx(0.4, -2.0), cx(3.0, 1.0)).unwrap();
    let moved = cross_ratio(pts.map(|z| ExtPoint::from(a.apply(z)))).unwrap();
    assert!(rel(moved, base) < 1e-13);
    assert!(cross_ratio([z0.into(), z0.into(), one.into(), ExtPoint::Infinity]).is_err());
}

#[test]
fn j_invariant_values_and_invariance() {
    let j = |c: &Configuration| j_invariant(c).unwrap();
    assert!(
        rel(
            j(&Configuration::from_real(&[0.0, 1.0, 2.0]).unwrap()),
            cx(1728.0, 0.0)
        ) < 1e-12
    );
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let roots = Configuration::new(vec![cx(1.0, 0.0), w, w * w]).unwrap();
    assert!(j(&roots).norm() < 1e-9);
    for i in 0..300u64 {
        let mut rng = trial_rng(55, i);
        let c = random_configuration(&mut rng, 3, 1e-2);
        let a = AffineMap::new(
            cx(rng.gen_range(0.1..3.0), rng.gen_range(-3.0..3.0)),
            cx(rng.gen_range(-5.0..5.0), 0.7),
        )
        .unwrap();
        assert!(rel(j(&a.apply_config(&c)), j(&c)) < 1e-8);
        assert!(rel(j(&shuffled(&mut rng, &c)), j(&c)) < 1e-8);
        assert!(rel(j(&identity_twisted_by_discriminant(&c).unwrap()), j(&c)) < 1e-8);
    }
}

#[test]
fn shapes() {
    let sh = |xs: &[f64]| shape_invariant(&Configuration::from_real(xs).unwrap()).unwrap();
    assert!(shapes_agree(sh(&[0.0, 1.0, 2.0]), sh(&[5.0, 7.0, 9.0]), 1e-12));
    assert!(!shapes_agree(sh(&[0.0, 1.0, 2.0]), sh(&[0.0, 1.0, 4.0]), 1e-6));
}

#[test]
fn psi_is_affine_equivariant() {
    for i in 0..200u64 {
        let mut rng = trial_rng(56, i);
        let c = random_configuration(&mut rng, 3, 1e-1);
        let a = AffineMap::new(
            Complex64::from_polar(rng.gen_range(0.2..3.0), rng.gen_range(0.0..std::f64::consts::TAU)),
            cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        )
        .unwrap();
        for k in [3, 4, 5] {
            let lhs = psi_k(&a.apply_config(&c), k).unwrap();
            let rhs = a.apply_config(&psi_k(&c, k).unwrap());
            assert!(
                lhs.set_distance(&rhs) < 1e-9 * rhs.max_modulus().max(1.0),
                "k = {k}"
            );
        }
    }
}

#[test]
fn root_maps_and_twists() {
    let c = Configuration::from_real(&[1.0]).unwrap();
    assert!(root_map(&c, 2, false)
        .unwrap()
        .approx_eq_set(&Configuration::from_real(&[1.0, -1.0]).unwrap(), 1e-15));
    let four = Configuration::from_real(&[4.0]).unwrap();
    assert!(root_map(&four, 2, true)
        .unwrap()
        .approx_eq_set(&Configuration::from_real(&[2.0, -2.0, 0.0]).unwrap(), 1e-15));
    let tri = Configuration::from_real(&[1.0, 2.0, 3.0]).unwrap();
    assert!(root_map(&tri, 1, false).unwrap().approx_eq_set(&tri, 0.0));
    assert!(root_map(&Configuration::from_real(&[0.0, 1.0]).unwrap(), 2, false).is_err());
    let twisted =
        identity_twisted_by_discriminant(&Configuration::from_real(&[0.0, 1.0, 2.0]).unwrap()).unwrap();
    assert!(twisted.approx_eq_set(&Configuration::from_real(&[0.0, -4.0, -8.0]).unwrap(), 1e-15));
    let unchanged = affine_twist(resolve_quartic, |_: &Configuration| AffineMap::identity());
    let q = Configuration::from_real(&[0.0, 1.0, 2.0, 3.0]).unwrap();
    assert_eq!(unchanged(&q).unwrap(), resolve_quartic(&q).unwrap());
}

#[test]
fn root_finder_residuals() {
    let p = ComplexPolynomial::from_real(&[-1.0, 0.0, -6.0, 0.0, 3.0]);
    let roots = poly_roots(&p).unwrap();
    assert_eq!(roots.len(), 4);
    for i in 0..300u64 {
        let mut rng = trial_rng(57, i);
        let deg = rng.gen_range(1..=12);
        let coeffs: Vec<Complex64> = (0..=deg)
            .map(|_| cx(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
            .collect();
        let p = ComplexPolynomial::new(coeffs);
        let roots = poly_roots(&p).unwrap();
        assert_eq!(roots.len(), p.degree());
        let rebuilt = ComplexPolynomial::from_roots(&roots).scale(p.leading());
        for (a, b) in rebuilt.coeffs().iter().zip(p.coeffs()) {
            assert!((a - b).norm() < 1e-8 * p.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max));
        }
    }
}
