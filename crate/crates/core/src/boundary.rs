//! Eventually periodic points of the boundary of `F_d`.
//!
//! A point is stored as `u·v^∞` in canonical form: `v` is a primitive,
//! cyclically reduced period, `u·v·v⋯` is reduced, and `u` is either empty or
//! ends in a letter different from the last letter of `v`. Each point has
//! exactly one such representation, so derived equality is point equality.
//!
//! Text format: `u|v`, e.g. `a|b` is `a·b^∞` and `1|A` is `(a⁻¹)^∞`.

use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::words::ReducedWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryPoint {
    preperiod: ReducedWord,
    period: ReducedWord,
}

impl BoundaryPoint {
    /// Canonicalizes `u·v^∞`. The concatenation must already be reduced.
    pub fn new(u: ReducedWord, v: ReducedWord) -> Result<BoundaryPoint> {
        if u.rank() != v.rank() {
            return Err(Error::RankMismatch(u.rank(), v.rank()));
        }
        if v.is_identity() {
            return Err(Error::Precondition("period must not be the identity".into()));
        }
        if !v.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced(v.to_string()));
        }
        if let (Some(l), Some(f)) = (u.last(), v.first()) {
            if l.is_inverse_of(f) {
                return Err(Error::Precondition(format!(
                    "{u}·{v}^∞ is not reduced"
                )));
            }
        }
        Ok(Self::canonicalize(u, v))
    }

    fn canonicalize(u: ReducedWord, v: ReducedWord) -> BoundaryPoint {
        let (mut period, _) = v.primitive_root().expect("checked by caller");
        let mut pre = u.letters().to_vec();
        while !pre.is_empty() && pre.last() == period.last().as_ref() {
            pre.pop();
            period = period.rotate_left(period.len() - 1);
        }
        BoundaryPoint {
            preperiod: ReducedWord::from_reduced_unchecked(u.rank(), pre),
            period,
        }
    }

    pub fn parse(rank: usize, s: &str) -> Result<BoundaryPoint> {
        let s = s.trim();
        let (u, v) = s
            .split_once('|')
            .ok_or_else(|| parse_err(s, "expected \"u|v\""))?;
        let u = ReducedWord::parse(rank, u)?;
        let v = ReducedWord::parse(rank, v)?;
        BoundaryPoint::new(u, v).map_err(|e| parse_err(s, e.to_string()))
    }

    pub fn rank(&self) -> usize {
        self.period.rank()
    }

    pub fn preperiod(&self) -> &ReducedWord {
        &self.preperiod
    }

    pub fn period(&self) -> &ReducedWord {
        &self.period
    }

    /// `w^{+∞}` or `w^{−∞}`: the attracting or repelling fixed point of `w`.
    pub fn limit_point(w: &ReducedWord, sign: Sign) -> Result<BoundaryPoint> {
        if w.is_identity() {
            return Err(Error::IdentityNotAllowed);
        }
        let (a, c) = w.cyclic_reduce()?;
        let c = match sign {
            Sign::Plus => c,
            Sign::Minus => c.inverse(),
        };
        // w = a·c·a⁻¹ reduced forces last(a) ∉ {first(c)⁻¹, last(c)}, so a·c^∞
        // is reduced for either orientation of c.
        Ok(Self::canonicalize(a, c))
    }

    /// The fixed points `(g^{+∞}, g^{−∞})` of a nontrivial element.
    pub fn fixed_points(g: &ReducedWord) -> Result<(BoundaryPoint, BoundaryPoint)> {
        Ok((
            Self::limit_point(g, Sign::Plus)?,
            Self::limit_point(g, Sign::Minus)?,
        ))
    }

    /// Left translation `g·x`.
    pub fn act(&self, g: &ReducedWord) -> Result<BoundaryPoint> {
        if g.rank() != self.rank() {
            return Err(Error::RankMismatch(g.rank(), self.rank()));
        }
        Ok(self.act_unchecked(g))
    }

    pub(crate) fn act_unchecked(&self, g: &ReducedWord) -> BoundaryPoint {
        if g.is_identity() {
            return self.clone();
        }
        // Cancellation against g eats at most |g| letters; with this many
        // periods unrolled at least one full period survives at the tail.
        let periods = g.len().div_ceil(self.period.len()) + 1;
        let head = self.unrolled(periods);
        let moved = g.mul_unchecked(&head);
        Self::canonicalize(moved, self.period.clone())
    }

    /// `u·v^k` as a finite word.
    fn unrolled(&self, k: usize) -> ReducedWord {
        let mut letters = self.preperiod.letters().to_vec();
        for _ in 0..k {
            letters.extend_from_slice(self.period.letters());
        }
        ReducedWord::from_reduced_unchecked(self.rank(), letters)
    }

    /// The first `n` letters of the infinite word.
    pub fn prefix(&self, n: usize) -> ReducedWord {
        let u = self.preperiod.letters();
        let v = self.period.letters();
        let letters = u.iter().chain(v.iter().cycle()).take(n).copied().collect();
        ReducedWord::from_reduced_unchecked(self.rank(), letters)
    }

    pub fn is_fixed_by(&self, g: &ReducedWord) -> Result<bool> {
        if g.is_identity() {
            return Err(Error::IdentityNotAllowed);
        }
        Ok(&self.act(g)? == self)
    }

    /// A nontrivial element fixing this point: `u·v·u⁻¹`.
    pub fn stabilizer_generator(&self) -> ReducedWord {
        self.preperiod
            .mul_unchecked(&self.period)
            .mul_unchecked(&self.preperiod.inverse())
    }
}

/// Whether `g` fixes `x`; errors for `g = e`.
pub fn is_fixed(g: &ReducedWord, x: &BoundaryPoint) -> Result<bool> {
    x.is_fixed_by(g)
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.preperiod, self.period)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Letter;

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(2, s).unwrap()
    }

    fn p(s: &str) -> BoundaryPoint {
        BoundaryPoint::parse(2, s).unwrap()
    }

    #[test]
    fn limit_point_examples() {
        assert_eq!(BoundaryPoint::limit_point(&w("abA"), Sign::Plus).unwrap(), p("a|b"));
        assert_eq!(BoundaryPoint::limit_point(&w("a"), Sign::Minus).unwrap(), p("1|A"));
        let x = BoundaryPoint::limit_point(&w("abab"), Sign::Plus).unwrap();
        assert_eq!(x.preperiod(), &w("1"));
        assert_eq!(x.period(), &w("ab"));
        // prefixes of (abab)^n stabilize onto the limit
        for n in 1..=5 {
            let pw = w("abab").pow(n);
            assert_eq!(x.prefix(pw.len()), pw);
        }
        assert!(BoundaryPoint::limit_point(&w("1"), Sign::Plus).is_err());
    }

    #[test]
    fn act_examples() {
        assert_eq!(p("A|b").act(&w("a")).unwrap(), p("1|b"));
        let ab = w("ab");
        let plus = BoundaryPoint::limit_point(&ab, Sign::Plus).unwrap();
        assert_eq!(plus.act(&ab).unwrap(), plus);
        let moved = p("1|a").act(&w("b")).unwrap();
        assert_eq!(moved.preperiod(), &w("b"));
        assert_eq!(moved.period(), &w("a"));
    }

    #[test]
    fn act_cancels_into_period() {
        // a·(A)^∞ = A^∞ after head cancellation
        assert_eq!(p("1|A").act(&w("a")).unwrap(), p("1|A"));
        // A·(ab)^∞ = b(ab)^∞ = (ba)^∞
        assert_eq!(p("1|ab").act(&w("A")).unwrap(), p("1|ba"));
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(p("a|b").prefix(3), w("abb"));
        assert_eq!(p("a|b").prefix(0), w("1"));
        let x = BoundaryPoint::limit_point(&w("ab"), Sign::Plus).unwrap();
        assert_eq!(x.prefix(5), w("ababa"));
    }

    #[test]
    fn fixed_points_examples() {
        assert_eq!(BoundaryPoint::fixed_points(&w("a")).unwrap(), (p("1|a"), p("1|A")));
        assert_eq!(
            BoundaryPoint::fixed_points(&w("abA")).unwrap(),
            (p("a|b"), p("a|B"))
        );
        let (plus, minus) = BoundaryPoint::fixed_points(&w("ab")).unwrap();
        assert_eq!(plus, p("1|ab"));
        assert_eq!(minus, p("1|BA"));
        assert_ne!(plus, minus);
    }

    #[test]
    fn is_fixed_examples() {
        assert!(is_fixed(&w("a"), &p("1|a")).unwrap());
        assert!(!is_fixed(&w("a"), &p("1|b")).unwrap());
        assert!(!is_fixed(&w("ab"), &p("a|b")).unwrap());
        assert!(is_fixed(&w("1"), &p("1|a")).is_err());
    }

    #[test]
    fn parse_rejects_and_canonicalizes() {
        assert!(BoundaryPoint::parse(2, "a|A").is_err());
        assert!(BoundaryPoint::parse(2, "1|abA").is_err());
        assert!(BoundaryPoint::parse(2, "1|1").is_err());
        assert!(BoundaryPoint::parse(2, "ab").is_err());
        // b·(ab)^∞ = (ba)^∞; (abab) has primitive root ab
        assert_eq!(p("b|ab"), p("1|ba"));
        assert_eq!(p("1|abab"), p("1|ab"));
        assert_eq!(p("ab|ab").to_string(), "1|ab");
    }

    /// Enumerates all valid (u, v) with |u| ≤ 3, |v| ≤ 3 in rank 2: canonical
    /// representatives of distinct points must differ, and every raw pair must
    /// canonicalize to a representative of the same infinite word.
    #[test]
    fn canonical_form_is_unique_on_small_cases() {
        let words = ReducedWord::all_up_to_length(2, 3);
        let mut seen: std::collections::HashMap<BoundaryPoint, ReducedWord> = Default::default();
        let horizon = 3 + 2 * 6;
        for u in &words {
            for v in words.iter().filter(|v| !v.is_empty()) {
                let Ok(x) = BoundaryPoint::new(u.clone(), v.clone()) else {
                    continue;
                };
                let raw: Vec<Letter> = u
                    .letters()
                    .iter()
                    .chain(v.letters().iter().cycle())
                    .take(horizon)
                    .copied()
                    .collect();
                assert_eq!(x.prefix(horizon).letters(), &raw[..]);
                let is_canonical = x.preperiod() == u && x.period() == v;
                if let Some(prev) = seen.get(&x) {
                    assert_eq!(prev.letters(), &raw[..]);
                }
                seen.insert(x.clone(), x.prefix(horizon));
                if is_canonical {
                    assert!(u.last() != v.last() || u.is_empty());
                }
            }
        }
        // distinct canonical forms are distinct infinite words
        let mut prefixes: Vec<&ReducedWord> = seen.values().collect();
        let before = prefixes.len();
        prefixes.sort();
        prefixes.dedup();
        assert_eq!(prefixes.len(), before);
    }
}
