//! Maps between configuration spaces of points in ℂ.
//!
//! A configuration is an unordered set of distinct points, stored in an
//! arbitrary order. Every map here is invariant under reordering of its input.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfError {
    #[error("points {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("expected {expected} points, got {found}")]
    WrongSize { expected: usize, found: usize },
    #[error("output points collide (separation {0:e})")]
    OutputCollision(f64),
    #[error("k = {0} is outside 2..=5")]
    UnsupportedK(u32),
    #[error("root map input contains 0")]
    ZeroInput,
    #[error("root p must be at least 1")]
    BadRoot,
    #[error("degenerate cross ratio")]
    Degenerate,
    #[error("affine scale must be nonzero")]
    ZeroScale,
    #[error("root finding did not converge (max residual {0:e})")]
    NoConvergence(f64),
    #[error("polynomial has degree 0 or a zero leading coefficient")]
    BadPolynomial,
}

/// Finitely many distinct points of ℂ.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<Complex64>,
}

impl Configuration {
    pub fn new(points: Vec<Complex64>) -> Result<Self, ConfError> {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(ConfError::Coincident(i, j));
                }
            }
        }
        Ok(Configuration { points })
    }

    pub fn from_real(xs: &[f64]) -> Result<Self, ConfError> {
        Self::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub(crate) fn from_trusted(points: Vec<Complex64>) -> Self {
        Configuration { points }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Minimum pairwise distance, `∞` for fewer than two points.
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                best = best.min((self.points[i] - self.points[j]).norm());
            }
        }
        best
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn expect_len(&self, n: usize) -> Result<(), ConfError> {
        if self.points.len() == n {
            Ok(())
        } else {
            Err(ConfError::WrongSize {
                expected: n,
                found: self.points.len(),
            })
        }
    }

    /// Hausdorff distance between the two point sets.
    pub fn set_distance(&self, other: &Configuration) -> f64 {
        let one_way = |a: &[Complex64], b: &[Complex64]| {
            a.iter()
                .map(|p| b.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        one_way(&self.points, &other.points).max(one_way(&other.points, &self.points))
    }

    /// Equality as sets, up to `tol` relative to the larger point modulus.
    pub fn approx_eq_set(&self, other: &Configuration, tol: f64) -> bool {
        let scale = self.max_modulus().max(other.max_modulus()).max(1.0);
        self.points.len() == other.points.len() && self.set_distance(other) <= tol * scale
    }
}

/// `[[re, im], ...]`.
impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.points.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

/// `z ↦ scale·z + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap {
    pub scale: Complex64,
    pub offset: Complex64,
}

impl AffineMap {
    pub fn new(scale: Complex64, offset: Complex64) -> Result<Self, ConfError> {
        if scale == Complex64::new(0.0, 0.0) {
            return Err(ConfError::ZeroScale);
        }
        Ok(AffineMap { scale, offset })
    }

    pub fn identity() -> Self {
        AffineMap {
            scale: Complex64::new(1.0, 0.0),
            offset: Complex64::new(0.0, 0.0),
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.scale * z + self.offset
    }

    pub fn apply_config(&self, c: &Configuration) -> Configuration {
        Configuration::from_trusted(c.points.iter().map(|&z| self.apply(z)).collect())
    }
}

/// A polynomial with coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        ComplexPolynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `∏ (x - rᵢ)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots
            .iter()
            .fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, &r| {
                acc.mul(&Self::new(vec![-r, Complex64::new(1.0, 0.0)]))
            })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Complex64::new(1.0, 0.0)
    }

    pub fn monic(&self) -> Self {
        let lead = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / lead).collect())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(zero) + other.coeffs.get(i).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// `Σ |cᵢ| |z|^i`, the natural scale for the residual at `z`.
    pub fn magnitude_at(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }
}

/// Relative residual tolerance accepted by [`poly_roots`].
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// All roots with multiplicity: companion-matrix eigenvalues, then Newton
/// polish while it improves the residual.
pub fn poly_roots(p: &ComplexPolynomial) -> Result<Vec<Complex64>, ConfError> {
    let n = p.degree();
    if n == 0 || p.leading() == Complex64::new(0.0, 0.0) {
        return Err(ConfError::BadPolynomial);
    }
    let m = p.monic();
    let eig = companion_eigenvalues(&m).ok_or(ConfError::NoConvergence(f64::NAN))?;
    let dp = m.derivative();
    let rel = |z: Complex64| m.eval(z).norm() / m.magnitude_at(z).max(f64::MIN_POSITIVE);
    let mut roots = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    for &z0 in eig.iter() {
        let mut z = z0;
        let mut r = rel(z);
        for _ in 0..8 {
            let d = dp.eval(z);
            if d == Complex64::new(0.0, 0.0) {
                break;
            }
            let cand = z - m.eval(z) / d;
            let rc = rel(cand);
            if !(rc < r) {
                break;
            }
            z = cand;
            r = rc;
        }
        worst = worst.max(r);
        roots.push(z);
    }
    if worst > ROOT_TOLERANCE {
        return Err(ConfError::NoConvergence(worst));
    }
    Ok(roots)
}

/// Eigenvalues of the companion matrix of the monic `m`. The QR iteration
/// can stall on real-symmetric spectra, so on failure the variable is
/// rotated by a fixed generic angle and the roots rotated back.
fn companion_eigenvalues(m: &ComplexPolynomial) -> Option<Vec<Complex64>> {
    let n = m.degree();
    for angle in [0.0, 0.377, 1.163] {
        let rot = Complex64::from_polar(1.0, angle);
        // roots of m(rot·w) are the roots of m divided by rot
        let mut companion = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..n {
            companion[(i, n - 1)] = -m.coeffs[i] / rot.powu((n - i) as u32);
        }
        if let Some(schur) = Schur::try_new(companion, 1e-15, 10_000) {
            return Some(
                block_eigenvalues(&schur.unpack().1)
                    .into_iter()
                    .map(|w| w * rot)
                    .collect(),
            );
        }
    }
    None
}

/// Eigenvalues of a block upper-triangular Schur factor with 1×1 and 2×2
/// diagonal blocks.
fn block_eigenvalues(t: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != Complex64::new(0.0, 0.0) {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half_tr = (a + d) / 2.0;
            let disc = (half_tr * half_tr - (a * d - b * c)).sqrt();
            out.push(half_tr + disc);
            out.push(half_tr - disc);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    out
}

/// `∏_{i≠j} (xᵢ - xⱼ)`.
pub fn discriminant(c: &Configuration) -> Complex64 {
    let mut d = Complex64::new(1.0, 0.0);
    for (i, a) in c.points.iter().enumerate() {
        for (j, b) in c.points.iter().enumerate() {
            if i != j {
                d *= a - b;
            }
        }
    }
    d
}

/// Relative separation below which an output is rejected as a collision.
pub const COLLISION_TOLERANCE: f64 = 1e-12;

fn checked_output(points: Vec<Complex64>) -> Result<Configuration, ConfError> {
    let c = Configuration::from_trusted(points);
    let sep = c.separation();
    if !(sep > COLLISION_TOLERANCE * c.max_modulus().max(1.0)) {
        return Err(ConfError::OutputCollision(sep));
    }
    Ok(c)
}

/// `n` points uniform in the square `[-2, 2]²`, resampled until their
/// separation is at least `min_sep`.
pub fn random_configuration<R: rand::Rng>(rng: &mut R, n: usize, min_sep: f64) -> Configuration {
    loop {
        let pts: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let c = Configuration::from_trusted(pts);
        if c.separation() >= min_sep {
            return c;
        }
    }
}

/// `{x1x4 + x2x3, x1x3 + x2x4, x1x2 + x3x4}`.
pub fn resolve_quartic(c: &Configuration) -> Result<Configuration, ConfError> {
    c.expect_len(4)?;
    let x = &c.points;
    checked_output(vec![
        x[0] * x[3] + x[1] * x[2],
        x[0] * x[2] + x[1] * x[3],
        x[0] * x[1] + x[2] * x[3],
    ])
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtPoint {
    Finite(Complex64),
    Infinity,
}

impl From<Complex64> for ExtPoint {
    fn from(z: Complex64) -> Self {
        ExtPoint::Finite(z)
    }
}

/// `(z3 - z1)(z2 - z4) / ((z2 - z1)(z3 - z4))`, so `(0, 1, λ, ∞) ↦ λ`.
/// A point at infinity drops the two factors that contain it.
pub fn cross_ratio(z: [ExtPoint; 4]) -> Result<Complex64, ConfError> {
    let diff = |i: usize, j: usize| -> Result<Option<Complex64>, ConfError> {
        match (z[i], z[j]) {
            (ExtPoint::Finite(a), ExtPoint::Finite(b)) => Ok(Some(a - b)),
            (ExtPoint::Infinity, ExtPoint::Infinity) => Err(ConfError::Degenerate),
            _ => Ok(None),
        }
    };
    for i in 0..4 {
        for j in i + 1..4 {
            if diff(i, j)? == Some(Complex64::new(0.0, 0.0)) {
                return Err(ConfError::Degenerate);
            }
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let num = diff(2, 0)?.unwrap_or(one) * diff(1, 3)?.unwrap_or(one);
    let den = diff(1, 0)?.unwrap_or(one) * diff(2, 3)?.unwrap_or(one);
    if den == Complex64::new(0.0, 0.0) || num == Complex64::new(0.0, 0.0) {
        return Err(ConfError::Degenerate);
    }
    Ok(num / den)
}

/// `256(λ² - λ + 1)³ / (λ²(λ - 1)²)`.
pub fn j_of_lambda(l: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let s = l * l - l + one;
    256.0 * s * s * s / (l * l * (l - one) * (l - one))
}

/// j-invariant of `y² = (x - x1)(x - x2)(x - x3)`.
pub fn j_invariant(c: &Configuration) -> Result<Complex64, ConfError> {
    c.expect_len(3)?;
    let x = &c.points;
    let l = cross_ratio([x[0].into(), x[1].into(), x[2].into(), ExtPoint::Infinity])?;
    Ok(j_of_lambda(l))
}

/// Complete invariant of a 3-point configuration up to affine maps and
/// relabeling.
pub fn shape_invariant(c: &Configuration) -> Result<Complex64, ConfError> {
    j_invariant(c)
}

/// Whether two shape invariants agree, relatively to `tol`, with an
/// absolute floor of `tol` near `j = 0`.
pub fn shapes_agree(j1: Complex64, j2: Complex64, tol: f64) -> bool {
    (j1 - j2).norm() <= tol * j1.norm().max(j2.norm()).max(1.0)
}

/// Number of x-coordinates of points of exact order `k`.
pub fn torsion_count(k: u32) -> Result<usize, ConfError> {
    match k {
        2 => Ok(3),
        3 => Ok(4),
        4 => Ok(6),
        5 => Ok(12),
        _ => Err(ConfError::UnsupportedK(k)),
    }
}

/// `(p, q)` with `∏(x - (xᵢ - s)) = x³ + px + q` for the centroid `s`.
pub fn depressed_cubic(c: &Configuration) -> Result<(Complex64, Complex64, Complex64), ConfError> {
    c.expect_len(3)?;
    let s = (c.points[0] + c.points[1] + c.points[2]) / 3.0;
    let r: Vec<Complex64> = c.points.iter().map(|z| z - s).collect();
    let p = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
    let q = -r[0] * r[1] * r[2];
    Ok((s, p, q))
}

/// Polynomial in `x` whose roots are the x-coordinates of the points of
/// exact order `k` on `y² = x³ + px + q`.
pub fn torsion_polynomial(p: Complex64, q: Complex64, k: u32) -> Result<ComplexPolynomial, ConfError> {
    let c = |re: f64| Complex64::new(re, 0.0);
    let poly = |cs: Vec<Complex64>| ComplexPolynomial::new(cs);
    // ψ_odd in x; ψ_even = y · h
    let f = poly(vec![q, p, c(0.0), c(1.0)]);
    let h2 = poly(vec![c(2.0)]);
    let h3 = poly(vec![-p * p, 12.0 * q, 6.0 * p, c(0.0), c(3.0)]);
    let h4 = poly(vec![
        -8.0 * q * q - p * p * p,
        -4.0 * p * q,
        -5.0 * p * p,
        20.0 * q,
        5.0 * p,
        c(0.0),
        c(1.0),
    ])
    .scale(c(4.0));
    match k {
        2 => Ok(f),
        3 => Ok(h3),
        // the factor y carries the 2-torsion
        4 => Ok(h4),
        5 => Ok(f.pow(2).mul(&h4).mul(&h2.pow(3)).sub(&h3.pow(3))),
        _ => Err(ConfError::UnsupportedK(k)),
    }
}

/// `Ψ_k`: x-coordinates of the points of exact order `k` on
/// `y² = (x - x1)(x - x2)(x - x3)`.
pub fn psi_k(c: &Configuration, k: u32) -> Result<Configuration, ConfError> {
    torsion_count(k)?;
    c.expect_len(3)?;
    if k == 2 {
        return Ok(c.clone());
    }
    let (s, p, q) = depressed_cubic(c)?;
    let roots = poly_roots(&torsion_polynomial(p, q, k)?)?;
    checked_output(roots.into_iter().map(|z| z + s).collect())
}

/// All `p`-th roots of every point, with 0 added when `with_zero`.
pub fn root_map(c: &Configuration, p: u32, with_zero: bool) -> Result<Configuration, ConfError> {
    if p == 0 {
        return Err(ConfError::BadRoot);
    }
    let mut out = Vec::with_capacity(c.len() * p as usize + with_zero as usize);
    for &z in &c.points {
        if z == Complex64::new(0.0, 0.0) {
            return Err(ConfError::ZeroInput);
        }
        let (r, theta) = z.to_polar();
        let rr = r.powf(1.0 / p as f64);
        for k in 0..p {
            out.push(Complex64::from_polar(
                rr,
                (theta + 2.0 * PI * k as f64) / p as f64,
            ));
        }
    }
    if with_zero {
        out.push(Complex64::new(0.0, 0.0));
    }
    checked_output(out)
}

/// `c ↦ A(c) · F(c)`.
pub fn affine_twist<F, A>(f: F, a: A) -> impl Fn(&Configuration) -> Result<Configuration, ConfError>
where
    F: Fn(&Configuration) -> Result<Configuration, ConfError>,
    A: Fn(&Configuration) -> AffineMap,
{
    move |c| Ok(a(c).apply_config(&f(c)?))
}

/// `id^Δ`: scaling by the discriminant.
pub fn identity_twisted_by_discriminant(c: &Configuration) -> Result<Configuration, ConfError> {
    affine_twist(
        |c: &Configuration| Ok(c.clone()),
        |c: &Configuration| AffineMap {
            scale: discriminant(c),
            offset: Complex64::new(0.0, 0.0),
        },
    )(c)
}
