//! Freely reduced words in a free group of finite rank.
//!
//! Words are stored fully reduced at all times, so equality of group
//! elements is equality of letter sequences. In rank 2 the generators are
//! written `x`, `y` and their inverses `X`, `Y`; in other ranks `g0`, `G0`,
//! `g1`, ... are used.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("expected {expected} generator images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("cannot parse word {0:?}")]
    Parse(String),
}

/// A generator or its inverse.
///
/// The derived order is `x < X < y < Y` (generator first, then sign), which
/// is the letter order used by enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: u16,
    inverse: bool,
}

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Letter {
            generator: generator as u16,
            inverse,
        }
    }

    pub fn generator(self) -> usize {
        self.generator as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// +1 for a generator, -1 for an inverse generator.
    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Position in the alphabet `x, X, y, Y, ...`.
    pub fn index(self) -> usize {
        2 * self.generator as usize + self.inverse as usize
    }

    pub fn from_index(index: usize) -> Self {
        Letter::new(index / 2, index % 2 == 1)
    }
}

pub(crate) fn push_reduced(buf: &mut Vec<Letter>, letter: Letter) {
    if buf.last() == Some(&letter.inverse()) {
        buf.pop();
    } else {
        buf.push(letter);
    }
}

pub(crate) fn extend_reduced(buf: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters {
        push_reduced(buf, l);
    }
}

pub(crate) fn extend_inverse_reduced(buf: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters.iter().rev() {
        push_reduced(buf, l.inverse());
    }
}

/// Appends the image of `word` under the endomorphism given on generators.
pub(crate) fn substitute_into(buf: &mut Vec<Letter>, word: &[Letter], images: &[&[Letter]]) {
    for &l in word {
        let image = images[l.generator()];
        if l.is_inverse() {
            extend_inverse_reduced(buf, image);
        } else {
            extend_reduced(buf, image);
        }
    }
}

/// An element of the free group of rank `rank`, as a freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity(rank: usize) -> Self {
        ReducedWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, index: usize) -> Self {
        assert!(index < rank, "generator {index} out of range for rank {rank}");
        ReducedWord {
            rank,
            letters: vec![Letter::new(index, false)],
        }
    }

    /// Builds a word from arbitrary letters, reducing as it goes.
    pub fn from_letters<I>(rank: usize, letters: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut buf = Vec::new();
        for l in letters {
            if l.generator() >= rank {
                return Err(WordError::GeneratorOutOfRange {
                    index: l.generator(),
                    rank,
                });
            }
            push_reduced(&mut buf, l);
        }
        Ok(ReducedWord { rank, letters: buf })
    }

    /// Caller guarantees the letters are reduced and in range.
    pub(crate) fn from_reduced_unchecked(rank: usize, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        ReducedWord { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word length ℓ(w).
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &ReducedWord) -> Result<ReducedWord, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut buf = Vec::with_capacity(self.len() + other.len());
        buf.extend_from_slice(&self.letters);
        extend_reduced(&mut buf, &other.letters);
        Ok(ReducedWord {
            rank: self.rank,
            letters: buf,
        })
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> ReducedWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut buf = Vec::new();
        for _ in 0..n.unsigned_abs() {
            extend_reduced(&mut buf, &base.letters);
        }
        ReducedWord {
            rank: self.rank,
            letters: buf,
        }
    }

    /// Applies the endomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[ReducedWord]) -> Result<ReducedWord, WordError> {
        if images.len() != self.rank {
            return Err(WordError::ImageCount {
                expected: self.rank,
                found: images.len(),
            });
        }
        let target = images.first().map_or(0, |w| w.rank);
        if let Some(bad) = images.iter().find(|w| w.rank != target) {
            return Err(WordError::RankMismatch {
                left: target,
                right: bad.rank,
            });
        }
        let slices: Vec<&[Letter]> = images.iter().map(|w| w.letters.as_slice()).collect();
        let mut buf = Vec::new();
        substitute_into(&mut buf, &self.letters, &slices);
        Ok(ReducedWord {
            rank: target,
            letters: buf,
        })
    }

    /// `self` starts with `prefix` with no cancellation.
    pub fn starts_with(&self, prefix: &ReducedWord) -> bool {
        self.letters.starts_with(&prefix.letters)
    }

    /// `self` ends with `suffix` with no cancellation.
    pub fn ends_with(&self, suffix: &ReducedWord) -> bool {
        self.letters.ends_with(&suffix.letters)
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator() == generator)
            .map(|l| l.sign() as i64)
            .sum()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn prefix(&self, len: usize) -> ReducedWord {
        ReducedWord::from_reduced_unchecked(self.rank, self.letters[..len].to_vec())
    }

    pub fn suffix(&self, len: usize) -> ReducedWord {
        let n = self.letters.len();
        ReducedWord::from_reduced_unchecked(self.rank, self.letters[n - len..].to_vec())
    }

    /// Parses `x`, `X`, `y`, `Y` (rank 2) or `g0`, `G0`, `g1`, ... tokens.
    /// The empty string (or `1`) is the identity.
    pub fn parse(rank: usize, text: &str) -> Result<Self, WordError> {
        let text = text.trim();
        let mut letters = Vec::new();
        if text.is_empty() || text == "1" || text == "e" {
            return Ok(ReducedWord::identity(rank));
        }
        let mut chars = text.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(ch) = chars.next() {
            let letter = match ch {
                'x' => Letter::new(0, false),
                'X' => Letter::new(0, true),
                'y' => Letter::new(1, false),
                'Y' => Letter::new(1, true),
                'g' | 'G' => {
                    let mut digits = String::new();
                    while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                        digits.push(*d);
                        chars.next();
                    }
                    let index: usize = digits.parse().map_err(|_| WordError::Parse(text.to_string()))?;
                    Letter::new(index, ch == 'G')
                }
                _ => return Err(WordError::Parse(text.to_string())),
            };
            letters.push(letter);
        }
        ReducedWord::from_letters(rank, letters)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            if self.rank == 2 {
                let ch = match (l.generator(), l.is_inverse()) {
                    (0, false) => 'x',
                    (0, true) => 'X',
                    (1, false) => 'y',
                    _ => 'Y',
                };
                write!(f, "{ch}")?;
            } else {
                let g = if l.is_inverse() { 'G' } else { 'g' };
                write!(f, "{g}{}", l.generator())?;
            }
        }
        Ok(())
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl std::ops::Mul for &ReducedWord {
    type Output = ReducedWord;

    /// Panics on rank mismatch; use [`ReducedWord::concat`] to handle it.
    fn mul(self, rhs: &ReducedWord) -> ReducedWord {
        self.concat(rhs).expect("rank mismatch in word product")
    }
}

/// Uniform random reduced word of exactly `len` letters.
pub fn random_reduced<R: rand::Rng>(rng: &mut R, rank: usize, len: usize) -> ReducedWord {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_index(rng.gen_range(0..2 * rank));
        if letters.last() != Some(&l.inverse()) {
            letters.push(l);
        }
    }
    ReducedWord::from_reduced_unchecked(rank, letters)
}

/// Number of reduced words of length exactly `len` in the given rank.
pub fn reduced_count(rank: usize, len: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    let r = rank as u64;
    2 * r * (2 * r - 1).pow(len as u32 - 1)
}

/// Every reduced word of length at most `max_len`, each once, in
/// length-lexicographic order with `x < X < y < Y < ...`.
pub fn enumerate_reduced(rank: usize, max_len: usize) -> ReducedWords {
    ReducedWords::new(rank, Vec::new(), max_len)
}

/// Reduced words of length at most `max_len` that start with `prefix`
/// (including `prefix` itself when it fits). Used to split enumeration
/// across workers.
pub fn enumerate_with_prefix(prefix: &ReducedWord, max_len: usize) -> ReducedWords {
    ReducedWords::new(prefix.rank, prefix.letters.clone(), max_len)
}

/// Iterator returned by [`enumerate_reduced`].
#[derive(Debug, Clone)]
pub struct ReducedWords {
    rank: usize,
    prefix_len: usize,
    max_len: usize,
    current: Option<Vec<Letter>>,
}

impl ReducedWords {
    fn new(rank: usize, prefix: Vec<Letter>, max_len: usize) -> Self {
        let current = (prefix.len() <= max_len).then_some(prefix);
        let prefix_len = current.as_ref().map_or(0, |p| p.len());
        ReducedWords {
            rank,
            prefix_len,
            max_len,
            current,
        }
    }

    fn alphabet(&self) -> usize {
        2 * self.rank
    }

    /// Smallest letter index `>= from` that may follow `prev`.
    fn next_allowed(&self, prev: Option<Letter>, from: usize) -> Option<usize> {
        (from..self.alphabet()).find(|&i| prev.is_none_or(|p| Letter::from_index(i) != p.inverse()))
    }

    fn fill_minimal(&self, buf: &mut Vec<Letter>, len: usize) -> bool {
        while buf.len() < len {
            match self.next_allowed(buf.last().copied(), 0) {
                Some(i) => buf.push(Letter::from_index(i)),
                None => return false,
            }
        }
        true
    }

    fn successor(&self, word: &[Letter]) -> Option<Vec<Letter>> {
        let mut buf = word.to_vec();
        // odometer over the free positions
        while buf.len() > self.prefix_len {
            let last = buf.pop().unwrap();
            if let Some(i) = self.next_allowed(buf.last().copied(), last.index() + 1) {
                buf.push(Letter::from_index(i));
                if self.fill_minimal(&mut buf, word.len()) {
                    return Some(buf);
                }
                return None;
            }
        }
        let longer = word.len() + 1;
        if longer > self.max_len || self.rank == 0 {
            return None;
        }
        let mut buf = word[..self.prefix_len].to_vec();
        self.fill_minimal(&mut buf, longer).then_some(buf)
    }
}

impl Iterator for ReducedWords {
    type Item = ReducedWord;

    fn next(&mut self) -> Option<ReducedWord> {
        let word = self.current.take()?;
        self.current = self.successor(&word);
        Some(ReducedWord::from_reduced_unchecked(self.rank, word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(2, s).unwrap()
    }

    #[test]
    fn concat_examples() {
        assert!(w("x").concat(&w("X")).unwrap().is_identity());
        assert_eq!(w("xy").concat(&w("Yx")).unwrap(), w("xx"));
        let cx = w("xyXY").concat(&w("x")).unwrap();
        assert_eq!(cx, w("xyXYx"));
        assert_eq!(cx.len(), 5);
    }

    #[test]
    fn concat_rank_mismatch() {
        let e = ReducedWord::identity(3).concat(&w("x")).unwrap_err();
        assert_eq!(e, WordError::RankMismatch { left: 3, right: 2 });
    }

    #[test]
    fn invert_examples() {
        assert!(ReducedWord::identity(2).inverse().is_identity());
        assert_eq!(w("xy").inverse(), w("YX"));
        assert_eq!(w("xyXY").inverse(), w("yxYX"));
    }

    #[test]
    fn substitute_examples() {
        let f = [w("xy"), w("X")];
        assert_eq!(w("x").substitute(&f).unwrap(), w("xy"));
        assert!(w("").substitute(&f).unwrap().is_identity());
        assert_eq!(w("xyXY").substitute(&f).unwrap(), w("xyXY"));
        assert!(matches!(
            w("x").substitute(&f[..1]),
            Err(WordError::ImageCount {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("xXyY").to_string(), "");
        assert_eq!(w("xyXY").to_string(), "xyXY");
        let g = ReducedWord::parse(3, "g0g2G1").unwrap();
        assert_eq!(g.to_string(), "g0g2G1");
        assert!(ReducedWord::parse(2, "xz").is_err());
        assert!(ReducedWord::parse(2, "g5").is_err());
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_reduced(2, 0).count(), 1);
        let one: Vec<String> = enumerate_reduced(2, 1).map(|w| w.to_string()).collect();
        assert_eq!(one, ["", "x", "X", "y", "Y"]);
        assert_eq!(enumerate_reduced(2, 6).filter(|w| !w.is_identity()).count(), 1456);
    }

    #[test]
    fn enumeration_counts_through_twelve() {
        let mut counts = [0u64; 13];
        for word in enumerate_reduced(2, 12) {
            counts[word.len()] += 1;
        }
        for (len, &count) in counts.iter().enumerate().skip(1) {
            assert_eq!(count, 4 * 3u64.pow(len as u32 - 1), "length {len}");
        }
    }

    #[test]
    fn enumeration_is_length_lex_and_reduced() {
        let all: Vec<ReducedWord> = enumerate_reduced(2, 5).collect();
        for pair in all.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!(a.len() < b.len() || (a.len() == b.len() && a.letters() < b.letters()));
        }
        for word in &all {
            assert!(word.letters().windows(2).all(|p| p[0] != p[1].inverse()));
        }
    }

    #[test]
    fn prefix_partition_covers_everything_once() {
        let mut parts: Vec<ReducedWord> = enumerate_reduced(2, 1).collect();
        for p in enumerate_reduced(2, 2).filter(|w| w.len() == 2) {
            parts.extend(enumerate_with_prefix(&p, 7));
        }
        parts.sort();
        let mut all: Vec<ReducedWord> = enumerate_reduced(2, 7).collect();
        all.sort();
        assert_eq!(parts, all);
    }

    #[test]
    fn rank_three_counts() {
        assert_eq!(enumerate_reduced(3, 3).count() as u64, 1 + 6 + 30 + 150);
        assert_eq!(reduced_count(3, 3), 150);
    }

    fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = ReducedWord> {
        prop::collection::vec((0..rank, any::<bool>()), 0..max_len).prop_map(move |ls| {
            ReducedWord::from_letters(rank, ls.into_iter().map(|(g, i)| Letter::new(g, i))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn reduction_is_confluent(a in arb_word(2, 20), b in arb_word(2, 20), c in arb_word(2, 20)) {
            let left = a.concat(&b).unwrap().concat(&c).unwrap();
            let right = a.concat(&b.concat(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn reduction_independent_of_split(raw in prop::collection::vec((0..2usize, any::<bool>()), 0..40), cut in 0usize..40) {
            let letters: Vec<Letter> = raw.into_iter().map(|(g, i)| Letter::new(g, i)).collect();
            let cut = cut.min(letters.len());
            let whole = ReducedWord::from_letters(2, letters.clone()).unwrap();
            let l = ReducedWord::from_letters(2, letters[..cut].to_vec()).unwrap();
            let r = ReducedWord::from_letters(2, letters[cut..].to_vec()).unwrap();
            prop_assert_eq!(l.concat(&r).unwrap(), whole);
        }

        #[test]
        fn inverse_is_involution(a in arb_word(3, 30)) {
            prop_assert_eq!(a.inverse().inverse(), a.clone());
            prop_assert_eq!(a.inverse().len(), a.len());
            prop_assert!(a.concat(&a.inverse()).unwrap().is_identity());
        }

        #[test]
        fn substitute_is_homomorphic(a in arb_word(2, 15), b in arb_word(2, 15),
                                     i0 in arb_word(3, 6), i1 in arb_word(3, 6)) {
            let images = [i0, i1];
            let ab = a.concat(&b).unwrap().substitute(&images).unwrap();
            let split = a.substitute(&images).unwrap().concat(&b.substitute(&images).unwrap()).unwrap();
            prop_assert_eq!(ab, split);
        }

        #[test]
        fn concat_length_bound(a in arb_word(2, 20), b in arb_word(2, 20)) {
            let ab = a.concat(&b).unwrap();
            prop_assert!(ab.len() <= a.len() + b.len());
            prop_assert_eq!((a.len() + b.len() - ab.len()) % 2, 0);
        }

        #[test]
        fn display_parse_roundtrip(a in arb_word(2, 25)) {
            prop_assert_eq!(ReducedWord::parse(2, &a.to_string()).unwrap(), a);
        }
    }
}
