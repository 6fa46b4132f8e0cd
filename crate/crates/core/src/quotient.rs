//! The gluing relations `R_W` on `∂F_d`.
//!
//! `R_W` identifies `g·w^{+∞}` with `g·w^{−∞}` for every `g ∈ F_d` and
//! `w ∈ W`; each class has one or two points.

use std::fmt;

use crate::boundary::{BoundaryPoint, Sign};
use crate::clopen::LevelFunction;
use crate::error::{parse_err, Error, Result};
use crate::int::Int;
use crate::words::{check_rank, Letter, ReducedWord};

/// A finite set `W ⊂ F_d ∖ {e}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationSpec {
    rank: usize,
    words: Vec<ReducedWord>,
}

impl RelationSpec {
    pub fn new(rank: usize, words: Vec<ReducedWord>) -> Result<RelationSpec> {
        check_rank(rank)?;
        let mut words = words;
        for w in &words {
            if w.rank() != rank {
                return Err(Error::RankMismatch(w.rank(), rank));
            }
            if w.is_identity() {
                return Err(Error::IdentityNotAllowed);
            }
        }
        words.sort();
        words.dedup();
        Ok(RelationSpec { rank, words })
    }

    /// `W = S`.
    pub fn generators(rank: usize) -> Result<RelationSpec> {
        check_rank(rank)?;
        let words = (0..rank).map(|i| ReducedWord::generator(rank, i)).collect();
        RelationSpec::new(rank, words)
    }

    pub fn empty(rank: usize) -> Result<RelationSpec> {
        RelationSpec::new(rank, Vec::new())
    }

    /// Comma-separated words; `S` expands to all generators, `none` (or an
    /// empty string) is `W = ∅`.
    pub fn parse(rank: usize, s: &str) -> Result<RelationSpec> {
        check_rank(rank)?;
        let s = s.trim();
        if s.is_empty() || s == "none" {
            return RelationSpec::empty(rank);
        }
        let mut words = Vec::new();
        for tok in s.split(',').map(str::trim) {
            if tok == "S" {
                words.extend((0..rank).map(|i| ReducedWord::generator(rank, i)));
            } else {
                let w = ReducedWord::parse(rank, tok)?;
                if w.is_identity() {
                    return Err(parse_err(s, "W must not contain the identity"));
                }
                words.push(w);
            }
        }
        RelationSpec::new(rank, words)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn words(&self) -> &[ReducedWord] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `W ∪ W⁻¹`, sorted.
    pub fn symmetric(&self) -> Vec<ReducedWord> {
        let mut out: Vec<ReducedWord> = self
            .words
            .iter()
            .flat_map(|w| [w.clone(), w.inverse()])
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Generator indices when every word of `W` is a single letter.
    pub fn letter_subset(&self) -> Option<Vec<usize>> {
        let mut out: Vec<usize> = Vec::new();
        for w in &self.words {
            if w.len() != 1 {
                return None;
            }
            out.push(w.letters()[0].index());
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    pub fn is_all_generators(&self) -> bool {
        self.letter_subset().is_some_and(|s| s.len() == self.rank)
    }
}

impl fmt::Display for RelationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return write!(f, "none");
        }
        if self.is_all_generators() && self.words.len() == self.rank {
            return write!(f, "S");
        }
        let parts: Vec<String> = self.words.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An `R_W` class: one point, or a glued pair (sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassRep {
    points: Vec<BoundaryPoint>,
}

impl ClassRep {
    pub fn singleton(x: BoundaryPoint) -> ClassRep {
        ClassRep { points: vec![x] }
    }

    pub fn pair(x: BoundaryPoint, y: BoundaryPoint) -> ClassRep {
        let mut points = vec![x, y];
        points.sort();
        points.dedup();
        ClassRep { points }
    }

    pub fn points(&self) -> &[BoundaryPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &BoundaryPoint) -> bool {
        self.points.contains(x)
    }
}

impl fmt::Display for ClassRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn check_spec_rank(x: &BoundaryPoint, spec: &RelationSpec) -> Result<()> {
    if x.rank() != spec.rank() {
        return Err(Error::RankMismatch(x.rank(), spec.rank()));
    }
    Ok(())
}

/// The point glued to `x`, if any.
fn partner(x: &BoundaryPoint, spec: &RelationSpec) -> Result<Option<BoundaryPoint>> {
    let key = x.period().conjugacy_key()?;
    for w in spec.symmetric() {
        let (a, c) = w.cyclic_reduce()?;
        let (root, _) = c.primitive_root()?;
        if root.conjugacy_key()? != key {
            continue;
        }
        let r = (0..root.len())
            .find(|&r| root.rotate_left(r) == *x.period())
            .ok_or_else(|| Error::Internal(format!("no rotation of {root} gives {}", x.period())))?;
        // w^{+∞} = a·root^∞ = (a·α)·period^∞ with root = α·β, period = β·α
        let head = a.mul_unchecked(&root.prefix(r));
        let g = x.preperiod().mul_unchecked(&head.inverse());
        let plus = BoundaryPoint::limit_point(&w, Sign::Plus)?;
        if plus.act_unchecked(&g) != *x {
            return Err(Error::Internal(format!(
                "decomposition of {x} via {w} failed to verify"
            )));
        }
        let minus = BoundaryPoint::limit_point(&w, Sign::Minus)?;
        return Ok(Some(minus.act_unchecked(&g)));
    }
    Ok(None)
}

/// `x R_W y`.
pub fn related(x: &BoundaryPoint, y: &BoundaryPoint, spec: &RelationSpec) -> Result<bool> {
    check_spec_rank(x, spec)?;
    check_spec_rank(y, spec)?;
    if x == y {
        return Ok(true);
    }
    Ok(partner(x, spec)?.as_ref() == Some(y))
}

pub fn class_of(x: &BoundaryPoint, spec: &RelationSpec) -> Result<ClassRep> {
    check_spec_rank(x, spec)?;
    Ok(match partner(x, spec)? {
        Some(y) => ClassRep::pair(x.clone(), y),
        None => ClassRep::singleton(x.clone()),
    })
}

/// `|g| ≤ |g·w^k|` for every `k`; `|k| ≤ 2|g|` suffices since `|w^k| ≥ |k|`.
fn is_normalized(g: &ReducedWord, w: &ReducedWord) -> bool {
    let n = g.len();
    for step in [w.clone(), w.inverse()] {
        let mut h = g.clone();
        for _ in 0..2 * n {
            h = h.mul_unchecked(&step);
            if h.len() < n {
                return false;
            }
        }
    }
    true
}

/// Every two-point class whose points differ within their first `n` letters,
/// sorted and deduplicated.
pub fn classes_meeting_level(n: usize, spec: &RelationSpec) -> Result<Vec<ClassRep>> {
    if n == 0 {
        return Err(Error::InvalidLevel { min: 1, got: 0 });
    }
    let mut out = Vec::new();
    for w in spec.symmetric() {
        let (plus, minus) = BoundaryPoint::fixed_points(&w)?;
        for g in ReducedWord::all_up_to_length(spec.rank(), n + w.len() - 1) {
            if !is_normalized(&g, &w) {
                continue;
            }
            let x = plus.act_unchecked(&g);
            let y = minus.act_unchecked(&g);
            if x.prefix(n) != y.prefix(n) {
                out.push(ClassRep::pair(x, y));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `w` and `h = x·w·y⁻¹` from the density construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityWitness {
    pub w: ReducedWord,
    pub h: ReducedWord,
}

/// `h = x·w·y⁻¹` with `|h| = |x| + |w| + |y|`, so that `h^{+∞}` starts with
/// `x` and `h^{−∞}` starts with `y`. `w` is the least admissible word of
/// length 1, else of length 2.
pub fn density_witness(x: &ReducedWord, y: &ReducedWord) -> Result<DensityWitness> {
    if x.rank() != y.rank() {
        return Err(Error::RankMismatch(x.rank(), y.rank()));
    }
    if x.is_identity() || y.is_identity() {
        return Err(Error::IdentityNotAllowed);
    }
    if x.len() != y.len() {
        return Err(Error::Precondition(format!("|{x}| ≠ |{y}|")));
    }
    if x == y {
        return Err(Error::Precondition(format!("{x} = {y}")));
    }
    let rank = x.rank();
    let yi = y.inverse();
    for len in 1..=2 {
        for w in ReducedWord::all_of_length(rank, len) {
            if !ReducedWord::is_geodesic_concat(x, &w, y)? {
                continue;
            }
            let h = x.mul_unchecked(&w).mul_unchecked(&yi);
            let (plus, minus) = BoundaryPoint::fixed_points(&h)?;
            if plus.prefix(x.len()) == *x && minus.prefix(y.len()) == *y {
                return Ok(DensityWitness { w, h });
            }
        }
    }
    Err(Error::Internal(format!("no density witness for ({x}, {y})")))
}

/// `(g, s)` with `g·q[s]` taking different values at `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub g: ReducedWord,
    pub s: Letter,
}

impl Separator {
    pub fn function(&self) -> LevelFunction {
        let s = ReducedWord::letter(self.g.rank(), self.s);
        LevelFunction::cylinder_q(&s)
            .and_then(|q| q.translate(&self.g))
            .expect("letter is not the identity")
    }
}

/// Separates two points that are not `R_S`-related by some `g·q[s]`.
///
/// If one point is not of the form `z·s^{±∞}`, with `n` the first index where
/// the points differ and `m > n` the first index with `x_m ≠ x_n`, the
/// separator is `(x₁⋯x_{m−1})·q[x_m]`. Otherwise `x = z·s^∞`, `y = w·t^∞`
/// with `|z| ≥ |w|` after swapping, and `z·q[s]` works.
pub fn separating_element(x: &BoundaryPoint, y: &BoundaryPoint) -> Result<Separator> {
    if x.rank() != y.rank() {
        return Err(Error::RankMismatch(x.rank(), y.rank()));
    }
    let s_rel = RelationSpec::generators(x.rank())?;
    if related(x, y, &s_rel)? {
        return Err(Error::Related(x.to_string(), y.to_string()));
    }
    let sep = if x.period().len() > 1 {
        first_disagreement_separator(x, y)
    } else if y.period().len() > 1 {
        first_disagreement_separator(y, x)
    } else {
        let (z, s) = if x.preperiod().len() >= y.preperiod().len() {
            (x.preperiod(), x.period().letters()[0])
        } else {
            (y.preperiod(), y.period().letters()[0])
        };
        Separator {
            g: z.clone(),
            s: s.positive(),
        }
    };
    let f = sep.function();
    if f.evaluate(x)? == f.evaluate(y)? {
        return Err(Error::Internal(format!(
            "{}·q[{}] does not separate {x} and {y}",
            sep.g, sep.s
        )));
    }
    Ok(sep)
}

/// Case where `x` is not eventually constant.
fn first_disagreement_separator(x: &BoundaryPoint, y: &BoundaryPoint) -> Separator {
    // Distinct eventually periodic words differ before this horizon.
    let horizon = x.preperiod().len().max(y.preperiod().len())
        + x.period().len()
        + y.period().len();
    let xs = x.prefix(horizon + 2 * x.period().len() + 1);
    let ys = y.prefix(horizon);
    let xl = xs.letters();
    let n = (0..horizon)
        .find(|&i| xl[i] != ys.letters()[i])
        .expect("distinct points");
    let m = (n + 1..xl.len())
        .find(|&i| xl[i] != xl[n])
        .expect("x is not eventually constant");
    Separator {
        g: xs.prefix(m),
        s: xl[m].positive(),
    }
}

/// Evaluates `g·q[s]` at `x` directly through `q[s](g⁻¹·x)`.
pub fn separator_value(sep: &Separator, x: &BoundaryPoint) -> Result<Int> {
    let moved = x.act(&sep.g.inverse())?;
    let first = moved.prefix(1).letters()[0];
    Ok(Int::from(i64::from(first.positive() == sep.s.positive())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(2, s).unwrap()
    }

    fn pt(s: &str) -> BoundaryPoint {
        BoundaryPoint::parse(2, s).unwrap()
    }

    fn rel(s: &str) -> RelationSpec {
        RelationSpec::parse(2, s).unwrap()
    }

    #[test]
    fn parse_relation() {
        assert_eq!(rel("S"), rel("a,b"));
        assert_eq!(rel("b, a ,a").words(), &[w("a"), w("b")]);
        assert!(rel("none").is_empty());
        assert!(RelationSpec::parse(2, "a,1").is_err());
        assert!(RelationSpec::parse(2, "c").is_err());
        assert_eq!(rel("S").to_string(), "S");
        assert_eq!(rel("ab,a").to_string(), "a,ab");
        assert_eq!(rel("a").symmetric(), vec![w("a"), w("A")]);
    }

    #[test]
    fn related_examples() {
        assert!(related(&pt("1|a"), &pt("1|A"), &rel("a")).unwrap());
        assert!(!related(&pt("1|a"), &pt("1|b"), &rel("a")).unwrap());
        assert!(related(&pt("b|a"), &pt("b|A"), &rel("a")).unwrap());
        assert!(related(&pt("b|a"), &pt("b|a"), &rel("none")).unwrap());
        assert!(related(&pt("1|a"), &pt("1|b"), &RelationSpec::parse(3, "a").unwrap()).is_err());
    }

    #[test]
    fn related_non_letter_words() {
        // abA fixes a·b^{±∞}
        assert!(related(&pt("a|b"), &pt("a|B"), &rel("abA")).unwrap());
        // (ab)^{±∞} = (ab)^∞, (BA)^∞; shifted by b: (ba)^∞, b(BA)^∞ = (AB)^∞
        assert!(related(&pt("1|ab"), &pt("1|BA"), &rel("ab")).unwrap());
        assert!(related(&pt("1|ba"), &pt("1|AB"), &rel("ab")).unwrap());
        assert!(!related(&pt("1|ab"), &pt("1|AB"), &rel("ab")).unwrap());
        // W = {aa} glues the same pairs as W = {a}
        assert!(related(&pt("b|a"), &pt("b|A"), &rel("aa")).unwrap());
    }

    #[test]
    fn class_of_examples() {
        assert_eq!(class_of(&pt("1|b"), &rel("a")).unwrap().len(), 1);
        assert_eq!(
            class_of(&pt("1|a"), &rel("a")).unwrap(),
            ClassRep::pair(pt("1|a"), pt("1|A"))
        );
        assert_eq!(
            class_of(&pt("a|b"), &rel("b")).unwrap(),
            ClassRep::pair(pt("a|b"), pt("a|B"))
        );
        assert_eq!(class_of(&pt("a|b"), &rel("b")).unwrap().to_string(), "{a|b, a|B}");
    }

    #[test]
    fn classes_meeting_level_examples() {
        let c = classes_meeting_level(1, &rel("a")).unwrap();
        assert!(c.contains(&ClassRep::pair(pt("1|a"), pt("1|A"))));
        let c = classes_meeting_level(1, &rel("S")).unwrap();
        assert_eq!(
            c,
            vec![
                ClassRep::pair(pt("1|a"), pt("1|A")),
                ClassRep::pair(pt("1|b"), pt("1|B")),
            ]
        );
        // a·a^{±∞} = a^{±∞}: no duplicate from g = a
        let c = classes_meeting_level(2, &rel("a")).unwrap();
        let n = c.iter().filter(|k| k.contains(&pt("1|a"))).count();
        assert_eq!(n, 1);
        assert!(classes_meeting_level(0, &rel("a")).is_err());
    }

    /// Brute force: act with every `g` up to a generous length, no
    /// normalization, and keep pairs differing within `n` letters.
    #[test]
    fn classes_meeting_level_is_complete() {
        for spec in ["a", "S", "ab", "abA", "aab"] {
            let spec = rel(spec);
            for n in 1..=3 {
                let got = classes_meeting_level(n, &spec).unwrap();
                let mut want = Vec::new();
                for w in spec.symmetric() {
                    let (p, m) = BoundaryPoint::fixed_points(&w).unwrap();
                    for g in ReducedWord::all_up_to_length(2, n + 2 * w.len() + 1) {
                        let (x, y) = (p.act(&g).unwrap(), m.act(&g).unwrap());
                        if x.prefix(n) != y.prefix(n) {
                            want.push(ClassRep::pair(x, y));
                        }
                    }
                }
                want.sort();
                want.dedup();
                assert_eq!(got, want, "spec {spec}, n {n}");
            }
        }
    }

    #[test]
    fn density_witness_examples() {
        let d = density_witness(&w("a"), &w("b")).unwrap();
        assert_eq!(d.w, w("a"));
        assert_eq!(d.h, w("aaB"));
        let d = density_witness(&w("a"), &w("A")).unwrap();
        let (p, m) = BoundaryPoint::fixed_points(&d.h).unwrap();
        assert_eq!(p.prefix(1), w("a"));
        assert_eq!(m.prefix(1), w("A"));
        let d = density_witness(&w("ab"), &w("aB")).unwrap();
        assert!(ReducedWord::is_geodesic_concat(&w("ab"), &d.w, &w("aB")).unwrap());
        let (p, m) = BoundaryPoint::fixed_points(&d.h).unwrap();
        assert_eq!(p.prefix(2), w("ab"));
        assert_eq!(m.prefix(2), w("aB"));
        assert!(density_witness(&w("a"), &w("a")).is_err());
        assert!(density_witness(&w("a"), &w("ab")).is_err());
        assert!(density_witness(&w("1"), &w("1")).is_err());
    }

    #[test]
    fn separating_element_examples() {
        let s = separating_element(&pt("1|a"), &pt("1|b")).unwrap();
        assert_eq!((s.g.clone(), s.s), (w("1"), Letter::generator(0)));
        assert!(matches!(
            separating_element(&pt("a|b"), &pt("a|B")),
            Err(Error::Related(_, _))
        ));
        let s = separating_element(&pt("a|b"), &pt("A|b")).unwrap();
        assert_ne!(s.g, w("1"));
        let f = s.function();
        assert_ne!(f.evaluate(&pt("a|b")).unwrap(), f.evaluate(&pt("A|b")).unwrap());
        // not eventually constant
        let (x, y) = (pt("1|ab"), pt("a|B"));
        let s = separating_element(&x, &y).unwrap();
        assert_eq!(separator_value(&s, &x).unwrap(), s.function().evaluate(&x).unwrap());
        assert_ne!(separator_value(&s, &x).unwrap(), separator_value(&s, &y).unwrap());
    }
}
