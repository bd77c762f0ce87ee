//! Dynamics of the automorphism `f: x ↦ xy, y ↦ x⁻¹` of the free group on
//! `x`, `y`.
//!
//! `f` is conjugation by `(σ1σ2)⁻¹` on the kernel of the resolving-quartic
//! map `B4 → B3`. Its sixth power is conjugation by the commutator
//! `c = xyx⁻¹y⁻¹`, which fixes `c`, and every word outside `⟨c⟩` splits as
//! `c^L · m · c^(-R)` with no cancellation. This module provides `f` and its
//! powers, that splitting, the bounded solver for
//! `f^(6k+1)(w) · f^(-6k-1)(w) = w`, and executable checks of the
//! structural facts about `f` that the solution set rests on.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::words::{enumerate_reduced, extend_reduced, substitute_into, Letter, ReducedWord, WordError};

const GX: Letter = Letter::new(0, false);
const GXI: Letter = Letter::new(0, true);
const GY: Letter = Letter::new(1, false);
const GYI: Letter = Letter::new(1, true);

const F_X: [Letter; 2] = [GX, GY];
const F_Y: [Letter; 1] = [GXI];
const FINV_X: [Letter; 1] = [GYI];
const FINV_Y: [Letter; 2] = [GY, GX];
const C: [Letter; 4] = [GX, GY, GXI, GYI];
const C_INV: [Letter; 4] = [GY, GX, GYI, GXI];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F2Error {
    #[error("expected a rank-2 word, got rank {0}")]
    WrongRank(usize),
    #[error("word {0} is a power of c")]
    CentralPower(String),
    #[error("empty orbit window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },
    #[error(transparent)]
    Word(#[from] WordError),
}

pub fn x() -> ReducedWord {
    ReducedWord::generator(2, 0)
}

pub fn y() -> ReducedWord {
    ReducedWord::generator(2, 1)
}

/// The commutator `c = xyx⁻¹y⁻¹`.
pub fn c() -> ReducedWord {
    ReducedWord::from_reduced_unchecked(2, C.to_vec())
}

fn check_rank(w: &ReducedWord) -> Result<(), F2Error> {
    if w.rank() == 2 {
        Ok(())
    } else {
        Err(F2Error::WrongRank(w.rank()))
    }
}

fn f_into(buf: &mut Vec<Letter>, w: &[Letter]) {
    substitute_into(buf, w, &[&F_X, &F_Y]);
}

fn f_inv_into(buf: &mut Vec<Letter>, w: &[Letter]) {
    substitute_into(buf, w, &[&FINV_X, &FINV_Y]);
}

fn push_c_power(buf: &mut Vec<Letter>, q: i64) {
    let block: &[Letter] = if q >= 0 { &C } else { &C_INV };
    for _ in 0..q.unsigned_abs() {
        extend_reduced(buf, block);
    }
}

fn apply_f_raw(w: &ReducedWord) -> ReducedWord {
    let mut buf = Vec::with_capacity(2 * w.len());
    f_into(&mut buf, w.letters());
    ReducedWord::from_reduced_unchecked(2, buf)
}

fn apply_f_inverse_raw(w: &ReducedWord) -> ReducedWord {
    let mut buf = Vec::with_capacity(2 * w.len());
    f_inv_into(&mut buf, w.letters());
    ReducedWord::from_reduced_unchecked(2, buf)
}

/// `f(w)`.
pub fn apply_f(w: &ReducedWord) -> Result<ReducedWord, F2Error> {
    check_rank(w)?;
    Ok(apply_f_raw(w))
}

/// `f⁻¹(w)`, using `f⁻¹(x) = y⁻¹`, `f⁻¹(y) = yx`.
pub fn apply_f_inverse(w: &ReducedWord) -> Result<ReducedWord, F2Error> {
    check_rank(w)?;
    Ok(apply_f_inverse_raw(w))
}

/// `f^n(w)` by applying `f` or `f⁻¹` one step at a time.
pub fn iterate_f(w: &ReducedWord, n: i64) -> Result<ReducedWord, F2Error> {
    check_rank(w)?;
    let mut cur = w.clone();
    for _ in 0..n.unsigned_abs() {
        cur = if n > 0 {
            apply_f_raw(&cur)
        } else {
            apply_f_inverse_raw(&cur)
        };
    }
    Ok(cur)
}

fn conjugate_by_c_power(w: &[Letter], q: i64) -> Vec<Letter> {
    let mut buf = Vec::with_capacity(w.len() + 8 * q.unsigned_abs() as usize);
    push_c_power(&mut buf, q);
    extend_reduced(&mut buf, w);
    push_c_power(&mut buf, -q);
    buf
}

/// `f^n(w)`. Writes `n = 6q + r` with `|r| < 6` and uses
/// `f^(6q)(v) = c^q v c^(-q)`.
pub fn f_power(w: &ReducedWord, n: i64) -> Result<ReducedWord, F2Error> {
    let (q, r) = (n / 6, n % 6);
    let inner = iterate_f(w, r)?;
    if q == 0 {
        return Ok(inner);
    }
    Ok(ReducedWord::from_reduced_unchecked(
        2,
        conjugate_by_c_power(inner.letters(), q),
    ))
}

/// `Some(m)` when `w = c^m`.
pub fn central_power(w: &ReducedWord) -> Option<i64> {
    if w.rank() != 2 || !w.len().is_multiple_of(4) {
        return None;
    }
    let Some(first) = w.first() else {
        return Some(0);
    };
    let (block, sign) = if first == GX { (&C, 1) } else { (&C_INV, -1) };
    w.letters()
        .chunks(4)
        .all(|chunk| chunk == block)
        .then_some(sign * (w.len() / 4) as i64)
}

pub fn in_c_subgroup(w: &ReducedWord) -> bool {
    central_power(w).is_some()
}

/// `w = c^left · core · c^(-right)` with no cancellation and `|left|`,
/// `|right|` maximal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CDecomposition {
    pub left: i64,
    pub right: i64,
    pub core: ReducedWord,
}

impl CDecomposition {
    pub fn reassemble(&self) -> ReducedWord {
        let mut buf = Vec::new();
        push_c_power(&mut buf, self.left);
        extend_reduced(&mut buf, self.core.letters());
        push_c_power(&mut buf, -self.right);
        ReducedWord::from_reduced_unchecked(2, buf)
    }
}

fn leading_c_power(letters: &[Letter]) -> i64 {
    let block = match letters.first() {
        Some(&l) if l == GX => &C,
        Some(&l) if l == GY => &C_INV,
        _ => return 0,
    };
    let count = letters
        .chunks_exact(4)
        .take_while(|chunk| *chunk == block)
        .count() as i64;
    if block == &C {
        count
    } else {
        -count
    }
}

fn trailing_c_power(letters: &[Letter]) -> i64 {
    // w ends with c^(-R): c⁻¹ blocks give positive R
    let block = match letters.last() {
        Some(&l) if l == GXI => &C_INV,
        Some(&l) if l == GYI => &C,
        _ => return 0,
    };
    let count = letters
        .rchunks_exact(4)
        .take_while(|chunk| *chunk == block)
        .count() as i64;
    if block == &C_INV {
        count
    } else {
        -count
    }
}

/// Splits `w ∉ ⟨c⟩` as `c^L · m · c^(-R)`.
pub fn c_decompose(w: &ReducedWord) -> Result<CDecomposition, F2Error> {
    check_rank(w)?;
    if in_c_subgroup(w) {
        return Err(F2Error::CentralPower(w.to_string()));
    }
    let letters = w.letters();
    let left = leading_c_power(letters);
    let right = trailing_c_power(letters);
    let start = 4 * left.unsigned_abs() as usize;
    let end = letters.len() - 4 * right.unsigned_abs() as usize;
    // the c-powers at the two ends never overlap outside ⟨c⟩
    assert!(start < end, "c-power prefix and suffix overlap in {w}");
    Ok(CDecomposition {
        left,
        right,
        core: ReducedWord::from_reduced_unchecked(2, letters[start..end].to_vec()),
    })
}

pub fn is_fixed_by_f(w: &ReducedWord) -> Result<bool, F2Error> {
    Ok(apply_f(w)? == *w)
}

/// `(f^n(w))` for `n` in `lo..=hi`.
pub fn f_orbit_window(w: &ReducedWord, lo: i64, hi: i64) -> Result<Vec<ReducedWord>, F2Error> {
    if lo > hi {
        return Err(F2Error::InvalidWindow { lo, hi });
    }
    let mut cur = f_power(w, lo)?;
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for _ in lo..hi {
        let next = apply_f_raw(&cur);
        out.push(cur);
        cur = next;
    }
    out.push(cur);
    Ok(out)
}

/// Slides along the `f`-orbit of `x` in both directions until twelve
/// consecutive elements are longer than `max_len`, returning every
/// `(n, f^n(x))` of length at most `max_len`.
pub fn orbit_of_x_up_to(max_len: usize) -> Vec<(i64, ReducedWord)> {
    const CLEAR_RUN: usize = 12;
    let mut found = Vec::new();
    for step in [1i64, -1] {
        let mut n = if step > 0 { 0 } else { -1 };
        let mut cur = f_power(&x(), n).expect("rank 2");
        let mut run = 0;
        while run < CLEAR_RUN {
            if cur.len() <= max_len {
                found.push((n, cur.clone()));
                run = 0;
            } else {
                run += 1;
            }
            n += step;
            cur = if step > 0 {
                apply_f_raw(&cur)
            } else {
                apply_f_inverse_raw(&cur)
            };
        }
    }
    found.sort_by_key(|(n, _)| *n);
    found
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Reject candidates by a length/parity test before forming the product.
    pub pruned: bool,
    pub exec: Exec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            pruned: true,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub k: i64,
    pub max_len: usize,
    /// Solutions in length-lexicographic order, identity first.
    pub solutions: Vec<ReducedWord>,
    pub examined: u64,
    /// Candidates discarded by the length test without forming the product.
    pub pruned: u64,
    /// Every non-identity solution lies in the `f`-orbit of `x`.
    pub in_orbit_of_x: bool,
}

#[derive(Default)]
struct Scratch {
    image: Vec<Letter>,
    a: Vec<Letter>,
    b: Vec<Letter>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    examined: u64,
    pruned: u64,
}

enum Verdict {
    Solution,
    Pruned,
    Rejected,
}

/// Decides `A · B = w` for `A = c^k f(w) c^(-k)`, `B = c^(-k) f⁻¹(w) c^k`.
fn check_candidate(w: &[Letter], k: i64, pruned: bool, s: &mut Scratch) -> Verdict {
    s.image.clear();
    f_into(&mut s.image, w);
    s.a.clear();
    push_c_power(&mut s.a, k);
    extend_reduced(&mut s.a, &s.image);
    push_c_power(&mut s.a, -k);

    s.image.clear();
    f_inv_into(&mut s.image, w);
    s.b.clear();
    push_c_power(&mut s.b, -k);
    extend_reduced(&mut s.b, &s.image);
    push_c_power(&mut s.b, k);

    let (la, lb, lw) = (s.a.len(), s.b.len(), w.len());
    if pruned && (la > lw + lb || lb > la + lw || (la + lb + lw) % 2 == 1) {
        return Verdict::Pruned;
    }
    if la + lb < lw || (la + lb - lw) % 2 == 1 {
        return Verdict::Rejected;
    }
    let t = (la + lb - lw) / 2;
    if t > la || t > lb {
        return Verdict::Rejected;
    }
    // exactly t letters cancel, no more
    let cancels = (0..t).all(|i| s.a[la - 1 - i] == s.b[i].inverse());
    let stops = t == la || t == lb || s.a[la - 1 - t] != s.b[t].inverse();
    if cancels && stops && s.a[..la - t] == w[..la - t] && s.b[t..] == w[la - t..] {
        Verdict::Solution
    } else {
        Verdict::Rejected
    }
}

fn search_subtree(
    buf: &mut Vec<Letter>,
    max_len: usize,
    k: i64,
    pruned: bool,
    scratch: &mut Scratch,
    tally: &mut Tally,
    out: &mut Vec<Vec<Letter>>,
) {
    tally.examined += 1;
    match check_candidate(buf, k, pruned, scratch) {
        Verdict::Solution => out.push(buf.clone()),
        Verdict::Pruned => tally.pruned += 1,
        Verdict::Rejected => {}
    }
    if buf.len() == max_len {
        return;
    }
    for idx in 0..4 {
        let l = Letter::from_index(idx);
        if buf.last() == Some(&l.inverse()) {
            continue;
        }
        buf.push(l);
        search_subtree(buf, max_len, k, pruned, scratch, tally, out);
        buf.pop();
    }
}

/// All `w` with `ℓ(w) ≤ max_len` solving `f^(6k+1)(w) · f^(-6k-1)(w) = w`.
pub fn solve_equation(k: i64, max_len: usize) -> SolveReport {
    solve_equation_with(k, max_len, SolveOptions::default())
}

pub fn solve_equation_with(k: i64, max_len: usize, opts: SolveOptions) -> SolveReport {
    // short words directly, the rest split by two-letter prefix
    let roots: Vec<Vec<Letter>> = if max_len < 2 {
        vec![Vec::new()]
    } else {
        enumerate_reduced(2, 2)
            .filter(|w| w.len() == 2)
            .map(|w| w.letters().to_vec())
            .collect()
    };
    let mut tally = Tally::default();
    let mut found: Vec<Vec<Letter>> = Vec::new();
    if max_len >= 2 {
        let mut scratch = Scratch::default();
        for w in enumerate_reduced(2, 1) {
            tally.examined += 1;
            match check_candidate(w.letters(), k, opts.pruned, &mut scratch) {
                Verdict::Solution => found.push(w.letters().to_vec()),
                Verdict::Pruned => tally.pruned += 1,
                Verdict::Rejected => {}
            }
        }
    }
    let parts = opts.exec.map(&roots, |root| {
        let mut buf = root.clone();
        let mut scratch = Scratch::default();
        let mut t = Tally::default();
        let mut out = Vec::new();
        search_subtree(&mut buf, max_len, k, opts.pruned, &mut scratch, &mut t, &mut out);
        (t, out)
    });
    for (t, out) in parts {
        tally.examined += t.examined;
        tally.pruned += t.pruned;
        found.extend(out);
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let solutions: Vec<ReducedWord> = found
        .into_iter()
        .map(|ls| ReducedWord::from_reduced_unchecked(2, ls))
        .collect();
    let orbit: HashSet<ReducedWord> = orbit_of_x_up_to(max_len).into_iter().map(|(_, w)| w).collect();
    let in_orbit_of_x = solutions.iter().all(|w| w.is_identity() || orbit.contains(w));
    SolveReport {
        k,
        max_len,
        solutions,
        examined: tally.examined,
        pruned: tally.pruned,
        in_orbit_of_x,
    }
}

/// Whether `w` solves the equation, through the public word API only.
pub fn satisfies_equation(w: &ReducedWord, k: i64) -> Result<bool, F2Error> {
    let lhs = f_power(w, 6 * k + 1)?.concat(&f_power(w, -6 * k - 1)?)?;
    Ok(lhs == *w)
}

/// Executable forms of the structural facts about `f`.
pub mod lemmas {
    use super::*;

    /// Signed exponent of the maximal leading run of `generator`, and the
    /// letter after it.
    fn leading_run(w: &[Letter], generator: usize) -> (i64, Option<Letter>) {
        let mut e = 0i64;
        let mut i = 0;
        while i < w.len() && w[i].generator() == generator {
            e += w[i].sign() as i64;
            i += 1;
        }
        (e, w.get(i).copied())
    }

    fn trailing_run(w: &[Letter], generator: usize) -> (i64, Option<Letter>) {
        let mut e = 0i64;
        let mut i = w.len();
        while i > 0 && w[i - 1].generator() == generator {
            e += w[i - 1].sign() as i64;
            i -= 1;
        }
        (e, i.checked_sub(1).map(|j| w[j]))
    }

    /// `(lhs holds ⇔ rhs holds)`, with matching exponents when they hold.
    fn equivalent(lhs: Option<i64>, rhs: Option<i64>) -> bool {
        lhs == rhs
    }

    /// The four start/end correspondences between `w` and `f(w)`:
    ///
    /// * `w = yⁿx…  ⇔ f(w) = x^(1-n)y…`
    /// * `w = yⁿx⁻¹… ⇔ f(w) = x^(-n)y⁻¹…`
    /// * `w = …xyⁿ  ⇔ f(w) = …yx^(-n)`
    /// * `w = …x⁻¹yⁿ ⇔ f(w) = …y⁻¹x^(-n-1)`
    pub fn start_end_correspondence(w: &ReducedWord) -> bool {
        let fw = apply_f_raw(w);
        let (wl, fl) = (w.letters(), fw.letters());
        let (ny, after_y) = leading_run(wl, 1);
        let (ex, after_x) = leading_run(fl, 0);
        let (ty, before_y) = trailing_run(wl, 1);
        let (tx, before_x) = trailing_run(fl, 0);

        let start_pos = equivalent(
            (after_y == Some(GX)).then_some(ny),
            (after_x == Some(GY)).then_some(1 - ex),
        );
        let start_neg = equivalent(
            (after_y == Some(GXI)).then_some(ny),
            (after_x == Some(GYI)).then_some(-ex),
        );
        let end_pos = equivalent(
            (before_y == Some(GX)).then_some(ty),
            (before_x == Some(GY)).then_some(-tx),
        );
        let end_neg = equivalent(
            (before_y == Some(GXI)).then_some(ty),
            (before_x == Some(GYI)).then_some(-tx - 1),
        );
        start_pos && start_neg && end_pos && end_neg
    }

    /// `L(w) ≤ L(f(w))` and `R(w) ≤ R(f(w))`; `None` for `w ∈ ⟨c⟩`.
    pub fn left_right_non_decreasing(w: &ReducedWord) -> Option<bool> {
        let d = c_decompose(w).ok()?;
        let fd = c_decompose(&apply_f_raw(w)).ok()?;
        Some(d.left <= fd.left && d.right <= fd.right)
    }

    /// `L(w1w2) = L(w1)` or `R(w1w2) = R(w2)`; `None` unless all three
    /// words lie outside `⟨c⟩`.
    pub fn product_keeps_an_end(w1: &ReducedWord, w2: &ReducedWord) -> Option<bool> {
        let d1 = c_decompose(w1).ok()?;
        let d2 = c_decompose(w2).ok()?;
        let d12 = c_decompose(&(w1 * w2)).ok()?;
        Some(d12.left == d1.left || d12.right == d2.right)
    }

    /// When `w` and `f(w)` share a length-4 prefix it is `c` or `c⁻¹`, and
    /// likewise for suffixes. Vacuously true for short words.
    pub fn shared_ends_are_c(w: &ReducedWord) -> bool {
        let fw = apply_f_raw(w);
        if w.len() < 4 || fw.len() < 4 {
            return true;
        }
        let (a, b) = (w.letters(), fw.letters());
        let is_c = |s: &[Letter]| s == C || s == C_INV;
        let head_ok = a[..4] != b[..4] || is_c(&a[..4]);
        let tail_ok = a[a.len() - 4..] != b[b.len() - 4..] || is_c(&a[a.len() - 4..]);
        head_ok && tail_ok
    }

    fn ends_with_c_or_inverse(w: &ReducedWord) -> bool {
        let l = w.letters();
        l.len() >= 4 && (l[l.len() - 4..] == C || l[l.len() - 4..] == C_INV)
    }

    /// The `n` closest to zero such that none of `f^(n-1)(w)`, `f^n(w)`,
    /// `f^(n+1)(w)` ends with `c` or `c⁻¹`. The scan covers the whole range
    /// in which the orbit's suffixes change from `c` to `c⁻¹`; `None` for
    /// `w ∈ ⟨c⟩` or if no witness exists there.
    pub fn consecutive_witness(w: &ReducedWord) -> Option<i64> {
        if w.rank() != 2 || in_c_subgroup(w) {
            return None;
        }
        let reach = 6 * (w.len() as i64 + 2);
        let orbit = f_orbit_window(w, -reach - 1, reach + 1).ok()?;
        let ends: Vec<bool> = orbit.iter().map(ends_with_c_or_inverse).collect();
        let mut best: Option<i64> = None;
        for i in 1..ends.len() - 1 {
            if !ends[i - 1] && !ends[i] && !ends[i + 1] {
                let n = i as i64 - reach - 1;
                if best.is_none_or(|b| n.abs() < b.abs()) {
                    best = Some(n);
                }
            }
        }
        best
    }
}
