mod common;

use common::{nontrivial_word, point, word};
use freeboundary::boundary::is_fixed;
use freeboundary::{BoundaryPoint, ReducedWord};
use proptest::prelude::*;

proptest! {
    #[test]
    fn action_law(g in word(2, 6), h in word(2, 6), x in point(2, 6)) {
        let gh = g.multiply(&h).unwrap();
        prop_assert_eq!(x.act(&h).unwrap().act(&g).unwrap(), x.act(&gh).unwrap());
        prop_assert_eq!(x.act(&ReducedWord::identity(2)).unwrap(), x.clone());
    }

    /// Prefixes of g·x agree with reducing g against a long expansion of x.
    #[test]
    fn action_matches_expansion(g in word(3, 6), x in point(3, 6)) {
        let n = 8;
        let long = x.prefix(n + 2 * g.len() + 2);
        let moved = g.multiply(&long).unwrap();
        prop_assert_eq!(x.act(&g).unwrap().prefix(n), moved.prefix(n));
    }

    #[test]
    fn limit_points_are_fixed(w in nontrivial_word(2, 6)) {
        let (p, m) = BoundaryPoint::fixed_points(&w).unwrap();
        prop_assert!(is_fixed(&w, &p).unwrap());
        prop_assert!(is_fixed(&w, &m).unwrap());
        prop_assert_ne!(p.clone(), m);
        // w^k converges to w^{+∞}
        let wk = w.pow(6);
        let k = wk.len() / 2;
        prop_assert_eq!(p.prefix(k), wk.prefix(k));
    }

    #[test]
    fn parse_display_roundtrip(x in point(3, 7)) {
        prop_assert_eq!(BoundaryPoint::parse(3, &x.to_string()).unwrap(), x);
    }
}
