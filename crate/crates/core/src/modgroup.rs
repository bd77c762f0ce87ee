//! Exact arithmetic in SL₂ℤ and PSL₂ℤ.
//!
//! PSL₂ℤ is the free product `⟨a⟩ * ⟨b⟩` of cyclic groups of orders 3 and
//! 2, with `a = [[0,1],[-1,1]]` and `b = [[0,1],[-1,0]]`. Every element has
//! a unique alternating word in `a`, `a⁻¹`, `b`, computed here by a
//! Euclidean reduction of the matrix.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::braid::BraidWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModError {
    #[error("determinant is {0}, expected 1")]
    NotUnimodular(BigInt),
    #[error("matrix {0} is not parabolic")]
    NotParabolic(String),
    #[error("the two parabolics commute")]
    CommutingPair,
    #[error("the pair does not satisfy the braid relation")]
    BraidRelationFails,
    #[error("h_star needs a 3-strand braid, got {0} strands")]
    WrongStrands(usize),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// A 2×2 integer matrix of determinant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl UnimodularMatrix {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self, ModError> {
        let det = &a * &d - &b * &c;
        if det.is_one() {
            Ok(UnimodularMatrix { a, b, c, d })
        } else {
            Err(ModError::NotUnimodular(det))
        }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self, ModError> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    fn raw(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::from_i64(a, b, c, d).expect("unimodular constant")
    }

    pub fn identity() -> Self {
        Self::raw(1, 0, 0, 1)
    }

    /// `[[1,1],[0,1]]`.
    pub fn t() -> Self {
        Self::raw(1, 1, 0, 1)
    }

    /// `[[1,0],[-1,1]]`.
    pub fn u() -> Self {
        Self::raw(1, 0, -1, 1)
    }

    /// The order-3 generator `[[0,1],[-1,1]]`.
    pub fn gen_a() -> Self {
        Self::raw(0, 1, -1, 1)
    }

    /// The order-2 generator `[[0,1],[-1,0]]`.
    pub fn gen_b() -> Self {
        Self::raw(0, 1, -1, 0)
    }

    /// `T^k`.
    pub fn translation(k: &BigInt) -> Self {
        UnimodularMatrix {
            a: BigInt::one(),
            b: k.clone(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn to_i64(&self) -> Option<[i64; 4]> {
        Some([
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ])
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Self {
        UnimodularMatrix {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn negate(&self) -> Self {
        UnimodularMatrix {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn conjugate_by(&self, g: &UnimodularMatrix) -> Self {
        &(g * self) * &g.inverse()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `±I`.
    pub fn is_psl_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    /// Representative with first nonzero entry of `(c, d)` positive.
    pub fn psl_canonical(&self) -> Self {
        let flip = if self.c.is_zero() {
            self.d.is_negative()
        } else {
            self.c.is_negative()
        };
        if flip {
            self.negate()
        } else {
            self.clone()
        }
    }

    pub fn commutes_psl(&self, other: &UnimodularMatrix) -> bool {
        psl_equal(&(self * other), &(other * self))
    }
}

impl Mul for &UnimodularMatrix {
    type Output = UnimodularMatrix;

    fn mul(self, r: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            a: &self.a * &r.a + &self.b * &r.c,
            b: &self.a * &r.b + &self.b * &r.d,
            c: &self.c * &r.a + &self.d * &r.c,
            d: &self.c * &r.b + &self.d * &r.d,
        }
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for UnimodularMatrix {
    type Err = ModError;

    /// Accepts `[[a,b],[c,d]]`, or just four integers.
    fn from_str(s: &str) -> Result<Self, ModError> {
        let cleaned: String = s
            .chars()
            .map(|ch| if matches!(ch, '[' | ']' | ',') { ' ' } else { ch })
            .collect();
        let nums: Vec<BigInt> = cleaned
            .split_whitespace()
            .map(|t| t.parse::<BigInt>().map_err(|_| ModError::Parse(s.to_string())))
            .collect::<Result<_, _>>()?;
        let [a, b, c, d]: [BigInt; 4] = nums.try_into().map_err(|_| ModError::Parse(s.to_string()))?;
        Self::new(a, b, c, d)
    }
}

fn serialize_entry<S: serde::ser::SerializeSeq>(seq: &mut S, v: &BigInt) -> Result<(), S::Error> {
    match v.to_i64() {
        Some(small) => seq.serialize_element(&small),
        None => seq.serialize_element(&v.to_string()),
    }
}

struct Row<'a>(&'a BigInt, &'a BigInt);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        serialize_entry(&mut seq, self.0)?;
        serialize_entry(&mut seq, self.1)?;
        seq.end()
    }
}

/// `[[a,b],[c,d]]`; entries beyond `i64` are written as decimal strings.
impl Serialize for UnimodularMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&Row(&self.a, &self.b))?;
        seq.serialize_element(&Row(&self.c, &self.d))?;
        seq.end()
    }
}

/// Equality in PSL₂ℤ.
pub fn psl_equal(m: &UnimodularMatrix, n: &UnimodularMatrix) -> bool {
    m == n || (m.a == -&n.a && m.b == -&n.b && m.c == -&n.c && m.d == -&n.d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModLetter {
    A,
    AInv,
    B,
}

impl ModLetter {
    fn a_power(self) -> u8 {
        match self {
            ModLetter::A => 1,
            ModLetter::AInv => 2,
            ModLetter::B => 0,
        }
    }

    fn from_a_power(p: u8) -> Option<ModLetter> {
        match p % 3 {
            1 => Some(ModLetter::A),
            2 => Some(ModLetter::AInv),
            _ => None,
        }
    }

    pub fn matrix(self) -> UnimodularMatrix {
        match self {
            ModLetter::A => UnimodularMatrix::gen_a(),
            ModLetter::AInv => UnimodularMatrix::gen_a().inverse(),
            ModLetter::B => UnimodularMatrix::gen_b(),
        }
    }

    pub fn inverse(self) -> ModLetter {
        match self {
            ModLetter::A => ModLetter::AInv,
            ModLetter::AInv => ModLetter::A,
            ModLetter::B => ModLetter::B,
        }
    }

    fn symbol(self) -> char {
        match self {
            ModLetter::A => 'a',
            ModLetter::AInv => 'A',
            ModLetter::B => 'b',
        }
    }
}

fn push_mod(buf: &mut Vec<ModLetter>, l: ModLetter) {
    match (buf.last().copied(), l) {
        (Some(ModLetter::B), ModLetter::B) => {
            buf.pop();
        }
        (Some(prev), _) if prev != ModLetter::B && l != ModLetter::B => {
            buf.pop();
            if let Some(m) = ModLetter::from_a_power(prev.a_power() + l.a_power()) {
                buf.push(m);
            }
        }
        _ => buf.push(l),
    }
}

/// An element of PSL₂ℤ as its alternating normal form in `a`, `a⁻¹`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ModularWord {
    letters: Vec<ModLetter>,
}

impl ModularWord {
    pub fn identity() -> Self {
        ModularWord::default()
    }

    /// Reduces an arbitrary product of the letters using `a³ = b² = 1`.
    pub fn from_letters<I: IntoIterator<Item = ModLetter>>(letters: I) -> Self {
        let mut buf = Vec::new();
        for l in letters {
            push_mod(&mut buf, l);
        }
        ModularWord { letters: buf }
    }

    pub fn letters(&self) -> &[ModLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &ModularWord) -> ModularWord {
        let mut buf = self.letters.clone();
        for &l in &other.letters {
            push_mod(&mut buf, l);
        }
        ModularWord { letters: buf }
    }

    pub fn inverse(&self) -> ModularWord {
        ModularWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn evaluate(&self) -> UnimodularMatrix {
        self.letters
            .iter()
            .fold(UnimodularMatrix::identity(), |acc, l| &acc * &l.matrix())
    }

    pub fn parse(text: &str) -> Result<Self, ModError> {
        let t = text.trim();
        if t.is_empty() || t == "1" || t == "e" {
            return Ok(Self::identity());
        }
        let letters = t
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'a' => Ok(ModLetter::A),
                'A' => Ok(ModLetter::AInv),
                'b' | 'B' => Ok(ModLetter::B),
                _ => Err(ModError::Parse(text.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_letters(letters))
    }

    /// Every normal-form word of length at most `max_len`, shortest first.
    pub fn enumerate(max_len: usize) -> Vec<ModularWord> {
        let mut out = vec![ModularWord::identity()];
        let mut frontier = vec![ModularWord::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                let choices: &[ModLetter] = match w.letters.last() {
                    None => &[ModLetter::A, ModLetter::AInv, ModLetter::B],
                    Some(ModLetter::B) => &[ModLetter::A, ModLetter::AInv],
                    Some(_) => &[ModLetter::B],
                };
                for &l in choices {
                    let mut letters = w.letters.clone();
                    letters.push(l);
                    next.push(ModularWord { letters });
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl fmt::Display for ModularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl Serialize for ModularWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Normal form of the PSL₂ℤ image of `m`.
///
/// Left-multiplies by powers of `T` and by `S` until the lower-left entry
/// vanishes, leaving `±T^k`. The recorded inverses are rewritten with
/// `T = a⁻¹b`, `T⁻¹ = ba` and `S = b` and reduced in `Z/3 * Z/2`.
pub fn normal_form(m: &UnimodularMatrix) -> ModularWord {
    let mut cur = m.clone();
    let mut prefix: Vec<ModLetter> = Vec::new();
    let push_t_power = |out: &mut Vec<ModLetter>, k: &BigInt| {
        let block: &[ModLetter] = if k.is_positive() {
            &[ModLetter::AInv, ModLetter::B]
        } else {
            &[ModLetter::B, ModLetter::A]
        };
        let mut n = k.abs();
        while n.is_positive() {
            out.extend_from_slice(block);
            n -= 1;
        }
    };
    while !cur.c.is_zero() {
        if cur.a.abs() >= cur.c.abs() {
            // a ← a − kc, with |a − kc| ≤ |c|/2
            let k = nearest_quotient(&cur.a, &cur.c);
            cur = &UnimodularMatrix::translation(&-&k) * &cur;
            push_t_power(&mut prefix, &k);
        } else {
            // S·M = [[-c,-d],[a,b]], and S⁻¹ ≡ b
            cur = UnimodularMatrix {
                a: -&cur.c,
                b: -&cur.d,
                c: cur.a.clone(),
                d: cur.b.clone(),
            };
            prefix.push(ModLetter::B);
        }
    }
    // cur = ±T^k with k = ±b
    let k = if cur.a.is_positive() {
        cur.b.clone()
    } else {
        -&cur.b
    };
    push_t_power(&mut prefix, &k);
    ModularWord::from_letters(prefix)
}

fn nearest_quotient(a: &BigInt, c: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = a.div_mod_floor(c);
    if (&r * &two).abs() > c.abs() {
        q + c.signum() * r.signum()
    } else {
        q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

pub fn trace_class(m: &UnimodularMatrix) -> TraceClass {
    if m.is_psl_identity() {
        return TraceClass::Identity;
    }
    let t = m.trace().abs();
    match t.cmp(&BigInt::from(2)) {
        std::cmp::Ordering::Less => TraceClass::Elliptic,
        std::cmp::Ordering::Equal => TraceClass::Parabolic,
        std::cmp::Ordering::Greater => TraceClass::Hyperbolic,
    }
}

/// `g` with `g⁻¹Pg ≡ T^ε` and `g⁻¹Qg ≡ U^ε` up to sign, where `T`, `U` is
/// the standard pair and `ε = -1` exactly when `inverted` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicNormalization {
    pub conjugator: UnimodularMatrix,
    pub inverted: bool,
}

fn with_trace_two(m: &UnimodularMatrix) -> UnimodularMatrix {
    if m.trace().is_negative() {
        m.negate()
    } else {
        m.clone()
    }
}

/// Primitive `(p, q)` with `Pv = v`, for `P` of trace 2 and `P ≠ I`.
fn fixed_vector(p: &UnimodularMatrix) -> (BigInt, BigInt) {
    // the rows of P − I are orthogonal to the fixed vector
    let (x, y) = if !(&p.a - 1u32).is_zero() || !p.b.is_zero() {
        (-&p.b, &p.a - 1u32)
    } else {
        (BigInt::one() - &p.d, p.c.clone())
    };
    let g = x.gcd(&y);
    let (x, y) = (x / &g, y / &g);
    if y.is_negative() || (y.is_zero() && x.is_negative()) {
        (-x, -y)
    } else {
        (x, y)
    }
}

/// Unimodular `[[p, r],[q, s]]` sending `e₁` to `(p, q)`.
fn completion(p: &BigInt, q: &BigInt) -> UnimodularMatrix {
    let e = p.extended_gcd(q);
    // e.x·p + e.y·q = 1
    UnimodularMatrix::new(p.clone(), -e.y, q.clone(), e.x).expect("primitive column")
}

pub fn satisfies_braid_relation(p: &UnimodularMatrix, q: &UnimodularMatrix) -> bool {
    psl_equal(&(&(p * q) * p), &(&(q * p) * q))
}

/// Conjugates a non-commuting braid-related pair of parabolics to the
/// standard pair, following the fixed points: `P`'s to `∞`, then `Q`'s to 0.
pub fn normalize_parabolic_pair(
    p: &UnimodularMatrix,
    q: &UnimodularMatrix,
) -> Result<ParabolicNormalization, ModError> {
    for m in [p, q] {
        if trace_class(m) != TraceClass::Parabolic {
            return Err(ModError::NotParabolic(m.to_string()));
        }
    }
    if p.commutes_psl(q) {
        return Err(ModError::CommutingPair);
    }
    if !satisfies_braid_relation(p, q) {
        return Err(ModError::BraidRelationFails);
    }
    let p2 = with_trace_two(p);
    let (fp, fq) = fixed_vector(&p2);
    let g1 = completion(&fp, &fq);
    let q1 = with_trace_two(&q.conjugate_by(&g1.inverse()));
    let (ep, eq) = fixed_vector(&q1);
    if eq.is_zero() {
        return Err(ModError::CommutingPair);
    }
    let eta = BigRational::new(ep, eq);
    if !eta.is_integer() {
        return Err(ModError::BraidRelationFails);
    }
    let g = &g1 * &UnimodularMatrix::translation(&eta.to_integer());
    let ginv = g.inverse();
    let pn = with_trace_two(&p.conjugate_by(&ginv));
    let qn = with_trace_two(&q.conjugate_by(&ginv));
    let (t, u) = (UnimodularMatrix::t(), UnimodularMatrix::u());
    if pn == t && qn == u {
        Ok(ParabolicNormalization {
            conjugator: g,
            inverted: false,
        })
    } else if pn == t.inverse() && qn == u.inverse() {
        Ok(ParabolicNormalization {
            conjugator: g,
            inverted: true,
        })
    } else {
        Err(ModError::BraidRelationFails)
    }
}

/// Every PSL₂ℤ parabolic with entries bounded by `bound`, as its trace-2
/// representative.
pub fn parabolics_bounded(bound: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        let d = 2 - a;
        if d.abs() > bound {
            continue;
        }
        for b in -bound..=bound {
            for c in -bound..=bound {
                if a * d - b * c == 1 && (b, c) != (0, 0) {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

fn mul_i64(x: &[i64; 4], y: &[i64; 4]) -> [i64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn psl_eq_i64(x: &[i64; 4], y: &[i64; 4]) -> bool {
    x == y || x.iter().zip(y).all(|(u, v)| *u == -*v)
}

/// Ordered pairs `(P, Q)` of bounded parabolics that satisfy the braid
/// relation and do not commute.
pub fn braid_related_parabolic_pairs(bound: i64) -> Vec<([i64; 4], [i64; 4])> {
    let ps = parabolics_bounded(bound);
    let mut out = Vec::new();
    for p in &ps {
        for q in &ps {
            let pq = mul_i64(p, q);
            let qp = mul_i64(q, p);
            if psl_eq_i64(&pq, &qp) {
                continue;
            }
            if psl_eq_i64(&mul_i64(&pq, p), &mul_i64(&qp, q)) {
                out.push((*p, *q));
            }
        }
    }
    out
}

/// The endomorphism `a ↦ g a^ε g⁻¹`, `b ↦ h b h⁻¹` of PSL₂ℤ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PslEndomorphism {
    pub image_a: UnimodularMatrix,
    pub image_b: UnimodularMatrix,
}

impl PslEndomorphism {
    pub fn apply(&self, w: &ModularWord) -> UnimodularMatrix {
        w.letters().iter().fold(UnimodularMatrix::identity(), |acc, l| {
            let image = match l {
                ModLetter::A => self.image_a.clone(),
                ModLetter::AInv => self.image_a.inverse(),
                ModLetter::B => self.image_b.clone(),
            };
            &acc * &image
        })
    }

    pub fn apply_matrix(&self, m: &UnimodularMatrix) -> UnimodularMatrix {
        self.apply(&normal_form(m))
    }

    /// `φ(a)³ ≡ I` and `φ(b)² ≡ I`.
    pub fn orders_hold(&self) -> bool {
        self.image_a.pow(3).is_psl_identity() && self.image_b.pow(2).is_psl_identity()
    }
}

pub fn endo_psl2z(g: &UnimodularMatrix, h: &UnimodularMatrix, inverted: bool) -> PslEndomorphism {
    let a = UnimodularMatrix::gen_a();
    let a = if inverted { a.inverse() } else { a };
    PslEndomorphism {
        image_a: a.conjugate_by(g),
        image_b: UnimodularMatrix::gen_b().conjugate_by(h),
    }
}

/// Whether `g2 ∈ ⟨b⟩ g ⟨a⟩` in PSL₂ℤ.
pub fn double_coset_eq_psl(g: &UnimodularMatrix, g2: &UnimodularMatrix) -> bool {
    double_coset_witness_psl(g, g2).is_some()
}

/// `(i, j)` with `g2 ≡ b^i g a^j`.
pub fn double_coset_witness_psl(g: &UnimodularMatrix, g2: &UnimodularMatrix) -> Option<(u8, u8)> {
    let a = UnimodularMatrix::gen_a();
    let b = UnimodularMatrix::gen_b();
    for i in 0..2u8 {
        let left = if i == 1 { &b * g } else { g.clone() };
        let mut cur = left;
        for j in 0..3u8 {
            if psl_equal(&cur, g2) {
                return Some((i, j));
            }
            cur = &cur * &a;
        }
    }
    None
}

/// The SL₂ℤ image of a 3-strand braid under `σ1 ↦ [[1,1],[0,1]]`,
/// `σ2 ↦ [[1,0],[-1,1]]`.
pub fn h_star(w: &BraidWord) -> Result<UnimodularMatrix, ModError> {
    if w.strands() != 3 {
        return Err(ModError::WrongStrands(w.strands()));
    }
    let gens = [UnimodularMatrix::t(), UnimodularMatrix::u()];
    let invs = [gens[0].inverse(), gens[1].inverse()];
    Ok(w.letters().iter().fold(UnimodularMatrix::identity(), |acc, &s| {
        let idx = s.unsigned_abs() as usize - 1;
        let m = if s > 0 { &gens[idx] } else { &invs[idx] };
        &acc * m
    }))
}
