#![allow(dead_code)]

use freeboundary::{BoundaryPoint, Letter, LevelFunction, ReducedWord, RelationSpec, Sign};
use proptest::prelude::*;

pub fn word(rank: usize, max_len: usize) -> impl Strategy<Value = ReducedWord> {
    prop::collection::vec(0..2 * rank, 0..=max_len)
        .prop_map(move |codes| ReducedWord::reduce(rank, codes.into_iter().map(Letter::from_code)))
}

pub fn nontrivial_word(rank: usize, max_len: usize) -> impl Strategy<Value = ReducedWord> {
    word(rank, max_len).prop_filter("nontrivial", |w| !w.is_identity())
}

/// Every eventually periodic point `u·v^∞` is `(u·v·u⁻¹)^{+∞}`.
pub fn point(rank: usize, max_len: usize) -> impl Strategy<Value = BoundaryPoint> {
    nontrivial_word(rank, max_len).prop_map(|h| BoundaryPoint::limit_point(&h, Sign::Plus).unwrap())
}

pub fn parse(rank: usize, s: &str) -> ReducedWord {
    ReducedWord::parse(rank, s).unwrap()
}

/// Pairs `(g·w^{+∞}, g·w^{−∞})` for every `w` in `W ∪ W⁻¹` and every `g` up to
/// the given length, with no normalization.
pub fn sampled_class_pairs(spec: &RelationSpec, max_g: usize) -> Vec<(BoundaryPoint, BoundaryPoint)> {
    let mut out = Vec::new();
    for w in spec.symmetric() {
        let plus = BoundaryPoint::limit_point(&w, Sign::Plus).unwrap();
        let minus = BoundaryPoint::limit_point(&w, Sign::Minus).unwrap();
        for g in ReducedWord::all_up_to_length(spec.rank(), max_g) {
            out.push((plus.act(&g).unwrap(), minus.act(&g).unwrap()));
        }
    }
    out
}

/// Brute-force invariance: `f` agrees on every sampled pair.
pub fn invariant_on_samples(f: &LevelFunction, pairs: &[(BoundaryPoint, BoundaryPoint)]) -> bool {
    pairs
        .iter()
        .all(|(x, y)| f.evaluate(x).unwrap() == f.evaluate(y).unwrap())
}
