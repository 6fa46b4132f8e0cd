//! Reduced words in the free group on `d` generators.
//!
//! Text format: generators are `a`, `b`, `c`, … in index order, an inverse is
//! the uppercase letter (`A` is `a⁻¹`) and the identity is `1`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{parse_err, Error, Result};

/// Largest supported rank; the text format has 26 letters.
pub const MAX_RANK: usize = 26;

pub(crate) fn check_rank(rank: usize) -> Result<()> {
    if (2..=MAX_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(Error::InvalidRank(rank))
    }
}

/// A generator or its inverse. `index` is zero-based (`a` is 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    index: u8,
    inverted: bool,
}

impl Letter {
    pub fn new(index: usize, inverted: bool) -> Letter {
        assert!(index < MAX_RANK, "generator index out of range");
        Letter {
            index: index as u8,
            inverted,
        }
    }

    pub fn generator(index: usize) -> Letter {
        Letter::new(index, false)
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_inverted(self) -> bool {
        self.inverted
    }

    pub fn inverse(self) -> Letter {
        Letter {
            index: self.index,
            inverted: !self.inverted,
        }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.index == other.index && self.inverted != other.inverted
    }

    /// Position in the letter order `a < A < b < B < …`.
    pub fn code(self) -> usize {
        2 * self.index as usize + self.inverted as usize
    }

    pub fn from_code(code: usize) -> Letter {
        Letter::new(code / 2, code % 2 == 1)
    }

    /// The uninverted generator underlying this letter.
    pub fn positive(self) -> Letter {
        Letter::generator(self.index())
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.index) as char;
        if self.inverted {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        if c.is_ascii_lowercase() {
            Some(Letter::new((c as u8 - b'a') as usize, false))
        } else if c.is_ascii_uppercase() {
            Some(Letter::new((c as u8 - b'A') as usize, true))
        } else {
            None
        }
    }

    /// All `2d` letters of rank `d` in letter order.
    pub fn all(rank: usize) -> impl Iterator<Item = Letter> {
        (0..2 * rank).map(Letter::from_code)
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code().cmp(&other.code())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// An element of `F_d` in reduced form.
///
/// Ordering is length-lexicographic in the letter order, which is also the
/// key order of level functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    rank: usize,
    letters: Vec<Letter>,
}

/// Number of reduced words of length `n` in rank `d`.
pub fn level_count(rank: usize, n: usize) -> usize {
    if n == 0 {
        1
    } else {
        2 * rank * (2 * rank - 1).pow(n as u32 - 1)
    }
}

impl ReducedWord {
    pub fn identity(rank: usize) -> ReducedWord {
        ReducedWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn letter(rank: usize, letter: Letter) -> ReducedWord {
        assert!(letter.index() < rank, "letter outside rank");
        ReducedWord {
            rank,
            letters: vec![letter],
        }
    }

    pub fn generator(rank: usize, index: usize) -> ReducedWord {
        ReducedWord::letter(rank, Letter::generator(index))
    }

    /// Checked constructor: letters must be in range and already reduced.
    pub fn from_letters(rank: usize, letters: Vec<Letter>) -> Result<ReducedWord> {
        check_rank(rank)?;
        if let Some(l) = letters.iter().find(|l| l.index() >= rank) {
            return Err(Error::Precondition(format!(
                "letter {l} outside rank {rank}"
            )));
        }
        if let Some(i) = letters.windows(2).position(|p| p[0].is_inverse_of(p[1])) {
            return Err(Error::Precondition(format!(
                "letters {}{} at position {i} cancel",
                letters[i],
                letters[i + 1]
            )));
        }
        Ok(ReducedWord { rank, letters })
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(rank: usize, letters: impl IntoIterator<Item = Letter>) -> ReducedWord {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            debug_assert!(l.index() < rank);
            if out.last().is_some_and(|last| last.is_inverse_of(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        ReducedWord { rank, letters: out }
    }

    pub(crate) fn from_reduced_unchecked(rank: usize, letters: Vec<Letter>) -> ReducedWord {
        debug_assert!(letters.windows(2).all(|p| !p[0].is_inverse_of(p[1])));
        ReducedWord { rank, letters }
    }

    /// Parses the text format, rejecting non-reduced input.
    pub fn parse(rank: usize, s: &str) -> Result<ReducedWord> {
        check_rank(rank)?;
        let s = s.trim();
        if s == "1" {
            return Ok(ReducedWord::identity(rank));
        }
        if s.is_empty() {
            return Err(parse_err(s, "empty word (use \"1\" for the identity)"));
        }
        let mut letters = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            let l = Letter::from_char(c)
                .ok_or_else(|| parse_err(s, format!("invalid character {c:?} at {i}")))?;
            if l.index() >= rank {
                return Err(parse_err(
                    s,
                    format!("letter {c:?} at {i} exceeds rank {rank}"),
                ));
            }
            if letters.last().is_some_and(|p: &Letter| p.is_inverse_of(l)) {
                return Err(parse_err(
                    s,
                    format!("not reduced: {}{} cancels at position {}", letters[i - 1], l, i - 1),
                ));
            }
            letters.push(l);
        }
        Ok(ReducedWord { rank, letters })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    fn same_rank(&self, other: &ReducedWord) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch(self.rank, other.rank))
        }
    }

    pub fn multiply(&self, other: &ReducedWord) -> Result<ReducedWord> {
        self.same_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &ReducedWord) -> ReducedWord {
        let cancel = self
            .letters
            .iter()
            .rev()
            .zip(other.letters.iter())
            .take_while(|(a, b)| a.is_inverse_of(**b))
            .count();
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * cancel);
        letters.extend_from_slice(&self.letters[..self.len() - cancel]);
        letters.extend_from_slice(&other.letters[cancel..]);
        ReducedWord {
            rank: self.rank,
            letters,
        }
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> ReducedWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = ReducedWord::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul_unchecked(&base);
        }
        acc
    }

    /// The first `n` letters (all of them if `n >= len`).
    pub fn prefix(&self, n: usize) -> ReducedWord {
        ReducedWord {
            rank: self.rank,
            letters: self.letters[..n.min(self.len())].to_vec(),
        }
    }

    pub fn starts_with(&self, other: &ReducedWord) -> bool {
        self.letters.starts_with(&other.letters)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || !f.is_inverse_of(l),
            _ => true,
        }
    }

    /// Rotation moving the first `k` letters to the end.
    pub fn rotate_left(&self, k: usize) -> ReducedWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(k % self.len());
        }
        ReducedWord {
            rank: self.rank,
            letters,
        }
    }

    /// Gromov product `(y·z)_base = (|base⁻¹y| + |base⁻¹z| − |y⁻¹z|) / 2`.
    pub fn gromov_product(y: &ReducedWord, z: &ReducedWord, base: &ReducedWord) -> Result<HalfInt> {
        y.same_rank(z)?;
        y.same_rank(base)?;
        let bi = base.inverse();
        let twice = bi.mul_unchecked(y).len() + bi.mul_unchecked(z).len()
            - y.inverse().mul_unchecked(z).len();
        Ok(HalfInt::from_twice(twice as i64))
    }

    /// Whether `x·w·y⁻¹` is a geodesic concatenation: `|xwy⁻¹| = |x|+|w|+|y|`.
    pub fn is_geodesic_concat(x: &ReducedWord, w: &ReducedWord, y: &ReducedWord) -> Result<bool> {
        x.same_rank(w)?;
        x.same_rank(y)?;
        let prod = x.mul_unchecked(w).mul_unchecked(&y.inverse());
        Ok(prod.len() == x.len() + w.len() + y.len())
    }

    /// Writes `self = a·c·a⁻¹` with `c` cyclically reduced and `a` maximal.
    pub fn cyclic_reduce(&self) -> Result<(ReducedWord, ReducedWord)> {
        if self.is_identity() {
            return Err(Error::IdentityNotAllowed);
        }
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k].is_inverse_of(self.letters[n - 1 - k]) {
            k += 1;
        }
        let a = ReducedWord::from_reduced_unchecked(self.rank, self.letters[..k].to_vec());
        let c = ReducedWord::from_reduced_unchecked(self.rank, self.letters[k..n - k].to_vec());
        Ok((a, c))
    }

    /// Writes a cyclically reduced word as `u^k` with `k` maximal.
    pub fn primitive_root(&self) -> Result<(ReducedWord, usize)> {
        if self.is_identity() {
            return Err(Error::IdentityNotAllowed);
        }
        if !self.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced(self.to_string()));
        }
        let n = self.len();
        for p in (1..=n).filter(|p| n.is_multiple_of(*p)) {
            let base = &self.letters[..p];
            if self.letters.chunks(p).all(|c| c == base) {
                return Ok((
                    ReducedWord::from_reduced_unchecked(self.rank, base.to_vec()),
                    n / p,
                ));
            }
        }
        unreachable!("p = n always divides")
    }

    /// Lexicographically least rotation, the canonical representative of the
    /// conjugacy class of a cyclically reduced word.
    pub fn conjugacy_key(&self) -> Result<ConjugacyKey> {
        if self.is_identity() {
            return Err(Error::IdentityNotAllowed);
        }
        if !self.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced(self.to_string()));
        }
        let codes: Vec<usize> = self.letters.iter().map(|l| l.code()).collect();
        Ok(ConjugacyKey(self.rotate_left(least_rotation(&codes))))
    }

    /// All reduced words of length `n`, in key order.
    pub fn all_of_length(rank: usize, n: usize) -> Vec<ReducedWord> {
        let mut out = vec![ReducedWord::identity(rank)];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * (2 * rank));
            for w in &out {
                for l in Letter::all(rank) {
                    if w.last().is_some_and(|p| p.is_inverse_of(l)) {
                        continue;
                    }
                    let mut letters = w.letters.clone();
                    letters.push(l);
                    next.push(ReducedWord { rank, letters });
                }
            }
            out = next;
        }
        out
    }

    /// All reduced words of length at most `n`, in key order.
    pub fn all_up_to_length(rank: usize, n: usize) -> Vec<ReducedWord> {
        (0..=n).flat_map(|k| ReducedWord::all_of_length(rank, k)).collect()
    }

    /// Position of this word among `all_of_length(rank, len)`.
    pub fn level_index(&self) -> usize {
        let mut idx = 0usize;
        let mut prev: Option<Letter> = None;
        for &l in &self.letters {
            idx = match prev {
                None => l.code(),
                Some(p) => {
                    let forbidden = p.inverse().code();
                    let c = l.code();
                    idx * (2 * self.rank - 1) + if c > forbidden { c - 1 } else { c }
                }
            };
            prev = Some(l);
        }
        idx
    }

    /// Inverse of [`level_index`](Self::level_index).
    pub fn from_level_index(rank: usize, n: usize, mut idx: usize) -> ReducedWord {
        debug_assert!(idx < level_count(rank, n));
        if n == 0 {
            return ReducedWord::identity(rank);
        }
        let mut digits = Vec::with_capacity(n);
        for _ in 1..n {
            digits.push(idx % (2 * rank - 1));
            idx /= 2 * rank - 1;
        }
        let mut letters = Vec::with_capacity(n);
        let mut prev = Letter::from_code(idx);
        letters.push(prev);
        for &r in digits.iter().rev() {
            let forbidden = prev.inverse().code();
            let c = if r >= forbidden { r + 1 } else { r };
            prev = Letter::from_code(c);
            letters.push(prev);
        }
        ReducedWord { rank, letters }
    }
}

/// Start index of the least rotation (two-pointer minimum expression).
fn least_rotation(s: &[usize]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Canonical cyclic word: the least rotation of a cyclically reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjugacyKey(ReducedWord);

impl ConjugacyKey {
    pub fn word(&self) -> &ReducedWord {
        &self.0
    }
}

impl fmt::Display for ConjugacyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0)
    }
}

/// A value in `½ℤ`, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub fn from_twice(twice: i64) -> HalfInt {
        HalfInt { twice }
    }

    pub fn from_int(v: i64) -> HalfInt {
        HalfInt { twice: 2 * v }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}
