//! Braid words and exact word problems in `Bₙ`.
//!
//! Conventions:
//! * A word is read left to right. `σᵢ` is written `i` and `σᵢ⁻¹` is written `-i`.
//! * The Artin action is the left action `σᵢ: xᵢ ↦ xᵢxᵢ₊₁xᵢ⁻¹, xᵢ₊₁ ↦ xᵢ`, and
//!   `φ_{uv} = φ_u ∘ φ_v`. It is faithful and serves as the ground-truth oracle.
//! * `B₃` uses the pair (PSL₂ℤ normal form, exponent sum). The kernel of
//!   `B₃ → PSL₂ℤ` is `⟨z₃⟩` and `z₃` has exponent sum 6.
//! * `B₄` uses the split extension `1 → F₂ → B₄ → B₃ → 1`. Here
//!   `F₂ = ⟨x = σ1⁻¹σ3, y = x⁻¹σ2⁻¹xσ2⟩` and the section is `σ1 ↦ σ1, σ2 ↦ σ2`.
//!   `B₃` acts on `F₂` by left conjugation `κ_b(v) = b v b⁻¹`.

use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::modgroup::{h_star, normal_form, psl_equal, ModLetter, ModularWord, UnimodularMatrix};
use crate::words::{Letter, ReducedWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("strand mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("generator {generator} out of range for {strands} strands")]
    GeneratorOutOfRange { generator: i32, strands: usize },
    #[error("need a braid on {expected} strands, got {found}")]
    WrongStrands { expected: usize, found: usize },
    #[error("expected {expected} images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("twist element {0} is not central")]
    NonCentral(String),
    #[error("no exact word problem for B{0} without the Artin oracle")]
    Undecidable(usize),
    #[error("cannot parse braid word {0:?}")]
    Parse(String),
}

/// A word in `σ1, …, σ(n-1)`, freely reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

fn push_braid(buf: &mut Vec<i32>, s: i32) {
    if buf.last() == Some(&-s) {
        buf.pop();
    } else {
        buf.push(s);
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        let mut buf = Vec::with_capacity(letters.len());
        for s in letters {
            if s == 0 || s.unsigned_abs() as usize >= strands {
                return Err(BraidError::GeneratorOutOfRange {
                    generator: s,
                    strands,
                });
            }
            push_braid(&mut buf, s);
        }
        Ok(BraidWord {
            strands,
            letters: buf,
        })
    }

    pub(crate) fn from_trusted(strands: usize, letters: &[i32]) -> Self {
        let mut buf = Vec::with_capacity(letters.len());
        for &s in letters {
            push_braid(&mut buf, s);
        }
        BraidWord {
            strands,
            letters: buf,
        }
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    /// `σᵢ^sign`.
    pub fn sigma(strands: usize, i: i32) -> Self {
        Self::new(strands, vec![i]).expect("generator in range")
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        same_strands(self, other)?;
        let mut buf = self.letters.clone();
        for &s in &other.letters {
            push_braid(&mut buf, s);
        }
        Ok(BraidWord {
            strands: self.strands,
            letters: buf,
        })
    }

    fn cat(&self, other: &BraidWord) -> BraidWord {
        self.concat(other).expect("same strand count")
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|s| -s).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> BraidWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(BraidWord::identity(self.strands), |acc, _| acc.cat(&base))
    }

    pub fn conjugate_by(&self, h: &BraidWord) -> BraidWord {
        h.cat(self).cat(&h.inverse())
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|s| s.signum() as i64).sum()
    }

    /// `perm[p]` is the final position of the strand starting at position
    /// `p` (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        // at[pos] = strand currently at pos
        for &s in &self.letters {
            let i = s.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    /// Same word on more strands.
    pub fn widen(&self, strands: usize) -> BraidWord {
        assert!(strands >= self.strands);
        BraidWord {
            strands,
            letters: self.letters.clone(),
        }
    }

    /// Integers separated by spaces or commas; `""` is the identity.
    pub fn parse(strands: usize, text: &str) -> Result<Self, BraidError> {
        let letters = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| BraidError::Parse(text.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(strands, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for BraidWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

fn same_strands(u: &BraidWord, v: &BraidWord) -> Result<(), BraidError> {
    if u.strands == v.strands {
        Ok(())
    } else {
        Err(BraidError::StrandMismatch {
            left: u.strands,
            right: v.strands,
        })
    }
}

fn expect_strands(w: &BraidWord, n: usize) -> Result<(), BraidError> {
    if w.strands == n {
        Ok(())
    } else {
        Err(BraidError::WrongStrands {
            expected: n,
            found: w.strands,
        })
    }
}

/// `α_n = σ1⋯σ(n-1)`.
pub fn alpha(n: usize) -> BraidWord {
    BraidWord::from_trusted(n, &(1..n as i32).collect::<Vec<_>>())
}

/// `β_n = α_n σ1`.
pub fn beta(n: usize) -> BraidWord {
    alpha(n).cat(&BraidWord::sigma(n, 1))
}

/// The generator `z_n = α_n^n` of the center.
pub fn z(n: usize) -> BraidWord {
    alpha(n).pow(n as i64)
}

/// Uniform random freely reduced word of the given length.
pub fn random_braid<R: Rng>(rng: &mut R, strands: usize, len: usize) -> BraidWord {
    let k = strands as i32 - 1;
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    while letters.len() < len {
        let g = rng.gen_range(1..=k);
        let s = if rng.gen_bool(0.5) { g } else { -g };
        if letters.last() != Some(&-s) {
            letters.push(s);
        }
    }
    BraidWord::from_trusted(strands, &letters)
}

/// Inserts `relators` random conjugates of defining relators into `w`,
/// giving a different word for the same braid.
pub fn rewrite_with_relators<R: Rng>(rng: &mut R, w: &BraidWord, relators: usize) -> BraidWord {
    let n = w.strands as i32;
    let mut letters = w.letters.clone();
    for _ in 0..relators {
        let i = rng.gen_range(1..n);
        let j = rng.gen_range(1..n);
        let rel: Vec<i32> = if (i - j).abs() == 1 {
            vec![i, j, i, -j, -i, -j]
        } else {
            vec![i, j, -i, -j]
        };
        let rel: Vec<i32> = if rng.gen_bool(0.5) {
            rel.iter().rev().map(|s| -s).collect()
        } else {
            rel
        };
        let pos = rng.gen_range(0..=letters.len());
        letters.splice(pos..pos, rel);
    }
    BraidWord::from_trusted(w.strands, &letters)
}

/// Images `φ_w(x₁), …, φ_w(xₙ)` in the free group of rank `n`.
pub fn artin_action(w: &BraidWord) -> Vec<ReducedWord> {
    let n = w.strands;
    let mut images: Vec<ReducedWord> = (0..n).map(|j| ReducedWord::generator(n, j)).collect();
    for &s in &w.letters {
        let i = s.unsigned_abs() as usize - 1;
        let (xi, xj) = (&images[i], &images[i + 1]);
        let (ni, nj) = if s > 0 {
            (xi * &(xj * &xi.inverse()), xi.clone())
        } else {
            (xj.clone(), &(&xj.inverse() * xi) * xj)
        };
        images[i] = ni;
        images[i + 1] = nj;
    }
    images
}

/// Braid equality through the Artin action alone.
pub fn artin_equal(u: &BraidWord, v: &BraidWord) -> Result<bool, BraidError> {
    same_strands(u, v)?;
    // comparing images keeps intermediate words no longer than either
    // side needs; acting by u·v⁻¹ can blow up in the middle
    Ok(artin_action(u) == artin_action(v))
}

/// Complete invariant of a 3-strand braid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct B3NormalForm {
    pub psl_part: ModularWord,
    pub exponent_sum: i64,
}

impl B3NormalForm {
    pub fn identity() -> Self {
        B3NormalForm {
            psl_part: ModularWord::identity(),
            exponent_sum: 0,
        }
    }

    pub fn mul(&self, other: &B3NormalForm) -> B3NormalForm {
        B3NormalForm {
            psl_part: self.psl_part.concat(&other.psl_part),
            exponent_sum: self.exponent_sum + other.exponent_sum,
        }
    }

    pub fn inverse(&self) -> B3NormalForm {
        B3NormalForm {
            psl_part: self.psl_part.inverse(),
            exponent_sum: -self.exponent_sum,
        }
    }

    /// A braid word with this normal form. Uses `a ↦ σ1σ2` and
    /// `b ↦ σ1σ2σ1`, corrected by a power of `z₃`.
    pub fn to_braid(&self) -> BraidWord {
        let mut letters = Vec::new();
        for l in self.psl_part.letters() {
            let block: &[i32] = match l {
                ModLetter::A => &[1, 2],
                ModLetter::AInv => &[-2, -1],
                ModLetter::B => &[1, 2, 1],
            };
            for &s in block {
                push_braid(&mut letters, s);
            }
        }
        let w = BraidWord::from_trusted(3, &letters);
        let gap = self.exponent_sum - w.exponent_sum();
        debug_assert_eq!(gap.rem_euclid(6), 0);
        w.cat(&z(3).pow(gap.div_euclid(6)))
    }
}

pub fn b3_normal_form(w: &BraidWord) -> Result<B3NormalForm, BraidError> {
    expect_strands(w, 3)?;
    let m = h_star(w).expect("three strands");
    Ok(B3NormalForm {
        psl_part: normal_form(&m),
        exponent_sum: w.exponent_sum(),
    })
}

const KX: Letter = Letter::new(0, false);
const KXI: Letter = Letter::new(0, true);
const KY: Letter = Letter::new(1, false);
const KYI: Letter = Letter::new(1, true);

/// `κ_g(x), κ_g(y)` for `g = σ1^{±1}, σ2^{±1}`.
fn kappa_generator(s: i32) -> [ReducedWord; 2] {
    let w = |ls: &[Letter]| ReducedWord::from_letters(2, ls.iter().copied()).expect("rank 2");
    match s {
        1 => [w(&[KX]), w(&[KY, KX])],
        -1 => [w(&[KX]), w(&[KY, KXI])],
        2 => [w(&[KX, KYI]), w(&[KY])],
        -2 => [w(&[KX, KY]), w(&[KY])],
        _ => unreachable!("kappa is defined on σ1, σ2"),
    }
}

/// Images of `x`, `y` under `κ_b` for a 3-strand braid `b`.
pub fn kappa(b: &BraidWord) -> [ReducedWord; 2] {
    let mut images = [crate::f2dyn::x(), crate::f2dyn::y()];
    for &s in &b.letters {
        let g = kappa_generator(s);
        images = [
            g[0].substitute(&images).expect("rank 2"),
            g[1].substitute(&images).expect("rank 2"),
        ];
    }
    images
}

/// `w = u · s(b)` with `u` in the free kernel `⟨x, y⟩` of `R_*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct B4NormalForm {
    pub kernel_part: ReducedWord,
    pub b3_part: B3NormalForm,
}

impl B4NormalForm {
    /// `(u₁, b₁)(u₂, b₂) = (u₁ κ_{b₁}(u₂), b₁b₂)`.
    pub fn mul(&self, other: &B4NormalForm) -> B4NormalForm {
        let k = kappa(&self.b3_part.to_braid());
        let moved = other.kernel_part.substitute(&k).expect("rank 2");
        B4NormalForm {
            kernel_part: self.kernel_part.concat(&moved).expect("rank 2"),
            b3_part: self.b3_part.mul(&other.b3_part),
        }
    }

    /// `kernel_part` written through `x = σ1⁻¹σ3`, `y = x⁻¹σ2⁻¹xσ2`,
    /// followed by the included `B₃` part.
    pub fn to_braid(&self) -> BraidWord {
        let x = kernel_x();
        let y = kernel_y();
        let mut out = BraidWord::identity(4);
        for l in self.kernel_part.letters() {
            let g = if l.generator() == 0 { &x } else { &y };
            let g = if l.is_inverse() { g.inverse() } else { g.clone() };
            out = out.cat(&g);
        }
        out.cat(&self.b3_part.to_braid().widen(4))
    }
}

/// `x = σ1⁻¹σ3` in `B₄`.
pub fn kernel_x() -> BraidWord {
    BraidWord::from_trusted(4, &[-1, 3])
}

/// `y = x⁻¹σ2⁻¹xσ2` in `B₄`.
pub fn kernel_y() -> BraidWord {
    BraidWord::from_trusted(4, &[-3, 1, -2, -1, 3, 2])
}

pub fn gassner_split(w: &BraidWord) -> Result<B4NormalForm, BraidError> {
    expect_strands(w, 4)?;
    let mut u: Vec<Letter> = Vec::new();
    let mut b: Vec<i32> = Vec::new();
    let mut k = [crate::f2dyn::x(), crate::f2dyn::y()];
    for &s in &w.letters {
        match s.abs() {
            3 => {
                // σ3^{±1} = x^{±1} σ1^{±1}, and x commutes with σ1
                let image = if s > 0 { k[0].clone() } else { k[0].inverse() };
                for &l in image.letters() {
                    crate::words::push_reduced(&mut u, l);
                }
                let s1 = s.signum();
                push_braid(&mut b, s1);
                let g = kappa_generator(s1);
                k = [
                    g[0].substitute(&k).expect("rank 2"),
                    g[1].substitute(&k).expect("rank 2"),
                ];
            }
            _ => {
                push_braid(&mut b, s);
                let g = kappa_generator(s);
                k = [
                    g[0].substitute(&k).expect("rank 2"),
                    g[1].substitute(&k).expect("rank 2"),
                ];
            }
        }
    }
    let b = BraidWord::from_trusted(3, &b);
    Ok(B4NormalForm {
        kernel_part: ReducedWord::from_letters(2, u).expect("rank 2"),
        b3_part: b3_normal_form(&b)?,
    })
}

/// Equality in `Bₙ`: normal forms for `n ≤ 4`, the Artin action beyond.
pub fn braid_eq(u: &BraidWord, v: &BraidWord) -> Result<bool, BraidError> {
    same_strands(u, v)?;
    match u.strands {
        0..=1 => Ok(true),
        2 => Ok(u.exponent_sum() == v.exponent_sum()),
        3 => Ok(b3_normal_form(u)? == b3_normal_form(v)?),
        4 => Ok(gassner_split(u)? == gassner_split(v)?),
        _ => artin_equal(u, v),
    }
}

/// A homomorphism out of `Bₙ`, given by the images of `σ1, …, σ(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidHom {
    pub source: usize,
    pub images: Vec<BraidWord>,
}

impl BraidHom {
    pub fn new(source: usize, images: Vec<BraidWord>) -> Result<Self, BraidError> {
        if images.len() + 1 != source {
            return Err(BraidError::ImageCount {
                expected: source - 1,
                found: images.len(),
            });
        }
        if let Some(first) = images.first() {
            for im in &images {
                same_strands(first, im)?;
            }
        }
        Ok(BraidHom { source, images })
    }

    pub fn target(&self) -> usize {
        self.images.first().map_or(0, |w| w.strands)
    }

    pub fn apply(&self, w: &BraidWord) -> Result<BraidWord, BraidError> {
        expect_strands(w, self.source)?;
        let mut out = BraidWord::identity(self.target());
        for &s in &w.letters {
            let im = &self.images[s.unsigned_abs() as usize - 1];
            out = out.cat(&if s > 0 { im.clone() } else { im.inverse() });
        }
        Ok(out)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BraidHom) -> Result<BraidHom, BraidError> {
        let images = first
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        BraidHom::new(first.source, images)
    }

    pub fn conjugate_by(&self, h: &BraidWord) -> BraidHom {
        BraidHom {
            source: self.source,
            images: self.images.iter().map(|w| w.conjugate_by(h)).collect(),
        }
    }

    /// Image-wise equality in the target.
    pub fn equals(&self, other: &BraidHom) -> Result<bool, BraidError> {
        if self.images.len() != other.images.len() {
            return Ok(false);
        }
        for (a, b) in self.images.iter().zip(&other.images) {
            if !braid_eq(a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `R_*: B₄ → B₃`, `σ1, σ3 ↦ σ1`, `σ2 ↦ σ2`.
pub fn r_star_hom() -> BraidHom {
    BraidHom {
        source: 4,
        images: vec![
            BraidWord::sigma(3, 1),
            BraidWord::sigma(3, 2),
            BraidWord::sigma(3, 1),
        ],
    }
}

/// `Ψ₃*: B₃ → B₄`, `σ1 ↦ σ1σ2`, `σ2 ↦ σ3σ2`.
pub fn psi3_star_hom() -> BraidHom {
    BraidHom {
        source: 3,
        images: vec![
            BraidWord::from_trusted(4, &[1, 2]),
            BraidWord::from_trusted(4, &[3, 2]),
        ],
    }
}

pub fn r_star(w: &BraidWord) -> Result<BraidWord, BraidError> {
    r_star_hom().apply(w)
}

pub fn psi3_star(w: &BraidWord) -> Result<BraidWord, BraidError> {
    psi3_star_hom().apply(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomCheck {
    pub is_hom: bool,
    /// Some pair of adjacent images commutes, which for a homomorphism
    /// forces a cyclic image.
    pub cyclic: bool,
    pub failed_relations: Vec<String>,
}

fn check_relations<T>(
    images: &[T],
    braid_rel: impl Fn(&T, &T) -> bool,
    commute: impl Fn(&T, &T) -> bool,
) -> HomCheck {
    let mut failed = Vec::new();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let (a, b) = (&images[i], &images[j]);
            if j == i + 1 {
                if !braid_rel(a, b) {
                    failed.push(format!("braid({},{})", i + 1, j + 1));
                }
            } else if !commute(a, b) {
                failed.push(format!("commute({},{})", i + 1, j + 1));
            }
        }
    }
    let cyclic = images.windows(2).any(|p| commute(&p[0], &p[1]));
    HomCheck {
        is_hom: failed.is_empty(),
        cyclic,
        failed_relations: failed,
    }
}

/// Checks the Artin relations on braid images. Targets beyond `B₄` need
/// `oracle_fallback`.
pub fn check_braid_homomorphism(images: &[BraidWord], oracle_fallback: bool) -> Result<HomCheck, BraidError> {
    if let Some(first) = images.first() {
        for im in images {
            same_strands(first, im)?;
        }
        if first.strands > 4 && !oracle_fallback {
            return Err(BraidError::Undecidable(first.strands));
        }
    }
    let eq = |l: &BraidWord, r: &BraidWord| braid_eq(l, r).expect("same strands");
    Ok(check_relations(
        images,
        |a, b| eq(&a.cat(b).cat(a), &b.cat(a).cat(b)),
        |a, b| eq(&a.cat(b), &b.cat(a)),
    ))
}

/// Checks the Artin relations on matrix images, in PSL₂ℤ when `psl` is set
/// and in SL₂ℤ otherwise.
pub fn check_matrix_homomorphism(images: &[UnimodularMatrix], psl: bool) -> HomCheck {
    let eq = |l: &UnimodularMatrix, r: &UnimodularMatrix| if psl { psl_equal(l, r) } else { l == r };
    check_relations(
        images,
        |a, b| eq(&(&(a * b) * a), &(&(b * a) * b)),
        |a, b| eq(&(a * b), &(b * a)),
    )
}

/// `σᵢ ↦ φ(σᵢ) · t^power` for a central `t`.
pub fn transvect(
    images: &[BraidWord],
    central: &BraidWord,
    power: i64,
) -> Result<Vec<BraidWord>, BraidError> {
    let n = central.strands;
    for i in 1..n as i32 {
        let s = BraidWord::sigma(n, i);
        if !braid_eq(&central.cat(&s), &s.cat(central))? {
            return Err(BraidError::NonCentral(central.to_string()));
        }
    }
    let t = central.pow(power);
    images.iter().map(|im| im.concat(&t)).collect()
}

/// Matrix transvection; the twist must be `±I`.
pub fn transvect_matrices(
    images: &[UnimodularMatrix],
    central: &UnimodularMatrix,
    power: i64,
) -> Result<Vec<UnimodularMatrix>, BraidError> {
    if !central.is_psl_identity() {
        return Err(BraidError::NonCentral(central.to_string()));
    }
    let t = central.pow(power);
    Ok(images.iter().map(|im| im * &t).collect())
}

/// Whether `g2 ∈ ⟨β⟩ g ⟨α⟩` in `B₃`.
pub fn double_coset_eq_b3(g: &BraidWord, g2: &BraidWord) -> Result<bool, BraidError> {
    let n1 = b3_normal_form(g)?;
    let n2 = b3_normal_form(g2)?;
    let b = ModularWord::from_letters([ModLetter::B]);
    let a = ModularWord::from_letters([ModLetter::A]);
    for i0 in 0..2i64 {
        let mut cur = if i0 == 1 {
            b.concat(&n1.psl_part)
        } else {
            n1.psl_part.clone()
        };
        for j0 in 0..3i64 {
            let gap = n2.exponent_sum - n1.exponent_sum - 3 * i0 - 2 * j0;
            if cur == n2.psl_part && gap.rem_euclid(6) == 0 {
                return Ok(true);
            }
            cur = cur.concat(&a);
        }
    }
    Ok(false)
}

/// The endomorphism `α ↦ gαg⁻¹`, `β ↦ β` of `B₃`, through
/// `σ1 = α⁻¹β` and `σ2 = β⁻¹α²`.
pub fn rho_g(g: &BraidWord) -> Result<BraidHom, BraidError> {
    expect_strands(g, 3)?;
    let a = alpha(3).conjugate_by(g);
    let b = beta(3);
    BraidHom::new(3, vec![a.inverse().cat(&b), b.inverse().cat(&a).cat(&a)])
}

/// `σᵢ ↦ σᵢ⁻¹`.
pub fn invert_generators(w: &BraidWord) -> BraidWord {
    BraidWord {
        strands: w.strands,
        letters: w.letters.iter().map(|s| -s).collect(),
    }
}

pub fn invert_hom(h: &BraidHom) -> BraidHom {
    BraidHom {
        source: h.source,
        images: h.images.iter().map(invert_generators).collect(),
    }
}

fn compose_perm(first: &[usize], then: &[usize]) -> Vec<usize> {
    first.iter().map(|&p| then[p]).collect()
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Every freely reduced braid word on `strands` strands of length at most
/// `max_len`, shortest first.
pub fn enumerate_braids(strands: usize, max_len: usize) -> Vec<BraidWord> {
    let k = strands as i32 - 1;
    let alphabet: Vec<i32> = (1..=k).flat_map(|i| [i, -i]).collect();
    let mut out = vec![BraidWord::identity(strands)];
    let mut frontier = vec![Vec::<i32>::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * alphabet.len());
        for w in &frontier {
            for &s in &alphabet {
                if w.last() != Some(&-s) {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().map(|v| BraidWord {
            strands,
            letters: v.clone(),
        }));
        frontier = next;
    }
    out
}

/// A shortest `h` with `|h| ≤ max_len` such that `h·φ(σᵢ)·h⁻¹ = ψ(σᵢ)` for
/// all `i`. Candidates are filtered by their permutation first.
pub fn find_conjugator(
    found: &BraidHom,
    expected: &BraidHom,
    max_len: usize,
) -> Result<Option<BraidWord>, BraidError> {
    if found.images.len() != expected.images.len() {
        return Err(BraidError::ImageCount {
            expected: expected.images.len(),
            found: found.images.len(),
        });
    }
    let m = expected.target();
    if found.target() != m {
        return Err(BraidError::StrandMismatch {
            left: found.target(),
            right: m,
        });
    }
    let fp: Vec<Vec<usize>> = found.images.iter().map(|w| w.permutation()).collect();
    let ep: Vec<Vec<usize>> = expected.images.iter().map(|w| w.permutation()).collect();
    let en: Vec<_> = expected
        .images
        .iter()
        .map(normal_form_key)
        .collect::<Result<_, _>>()?;
    for h in enumerate_braids(m, max_len) {
        let hp = h.permutation();
        let hinv = invert_perm(&hp);
        // strands of h w h⁻¹ follow h, then w, then h⁻¹
        let perm_ok = fp
            .iter()
            .zip(&ep)
            .all(|(f, e)| compose_perm(&compose_perm(&hp, f), &hinv) == *e);
        if !perm_ok {
            continue;
        }
        let mut ok = true;
        for (w, e) in found.images.iter().zip(&en) {
            if normal_form_key(&w.conjugate_by(&h))? != *e {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum NormalKey {
    Exponent(i64),
    B3(B3NormalForm),
    B4(B4NormalForm),
    Artin(Vec<ReducedWord>),
}

fn normal_form_key(w: &BraidWord) -> Result<NormalKey, BraidError> {
    Ok(match w.strands {
        0..=2 => NormalKey::Exponent(w.exponent_sum()),
        3 => NormalKey::B3(b3_normal_form(w)?),
        4 => NormalKey::B4(gassner_split(w)?),
        _ => NormalKey::Artin(artin_action(w)),
    })
}
