mod common;

use common::{point, sampled_class_pairs, word};
use freeboundary::quotient::{class_of, density_witness, related, separating_element, separator_value};
use freeboundary::words::level_count;
use freeboundary::{BoundaryPoint, ReducedWord, RelationSpec};
use proptest::prelude::*;

fn spec(rank: usize) -> impl Strategy<Value = RelationSpec> {
    let names: Vec<&'static str> = if rank == 2 {
        vec!["S", "a", "b", "ab", "aab", "none"]
    } else {
        vec!["S", "a", "a,c", "abc"]
    };
    prop::sample::select(names).prop_map(move |s| RelationSpec::parse(rank, s).unwrap())
}

/// Distinct reduced words of a common length in `1..=max_len`.
fn same_length_pair(rank: usize, max_len: usize) -> impl Strategy<Value = (ReducedWord, ReducedWord)> {
    (1..=max_len)
        .prop_flat_map(move |n| {
            let m = level_count(rank, n);
            (Just(n), 0..m, 0..m)
        })
        .prop_filter("distinct", |(_, i, j)| i != j)
        .prop_map(move |(n, i, j)| {
            (ReducedWord::from_level_index(rank, n, i), ReducedWord::from_level_index(rank, n, j))
        })
}

proptest! {
    #[test]
    fn relation_is_an_equivalence(x in point(2, 4), y in point(2, 4), z in point(2, 4), f in spec(2)) {
        prop_assert!(related(&x, &x, &f).unwrap());
        prop_assert_eq!(related(&x, &y, &f).unwrap(), related(&y, &x, &f).unwrap());
        if related(&x, &y, &f).unwrap() && related(&y, &z, &f).unwrap() {
            prop_assert!(related(&x, &z, &f).unwrap());
        }
    }

    #[test]
    fn classes_are_consistent(x in point(3, 5), f in spec(3)) {
        let c = class_of(&x, &f).unwrap();
        prop_assert!(c.contains(&x));
        prop_assert!(c.len() <= 2);
        for y in c.points() {
            prop_assert!(related(&x, y, &f).unwrap());
            prop_assert_eq!(&class_of(y, &f).unwrap(), &c);
        }
    }

    #[test]
    fn relation_is_invariant(x in point(2, 4), g in word(2, 5), f in spec(2)) {
        let c = class_of(&x, &f).unwrap();
        let moved = class_of(&x.act(&g).unwrap(), &f).unwrap();
        prop_assert_eq!(moved.len(), c.len());
        for y in c.points() {
            prop_assert!(moved.contains(&y.act(&g).unwrap()));
        }
    }

    #[test]
    fn density_witness_is_geodesic((x, y) in same_length_pair(3, 6)) {
        let dw = density_witness(&x, &y).unwrap();
        prop_assert!(dw.w.len() <= 2);
        prop_assert!(ReducedWord::is_geodesic_concat(&x, &dw.w, &y).unwrap());
        prop_assert_eq!(&dw.h, &x.multiply(&dw.w).unwrap().multiply(&y.inverse()).unwrap());
        let (plus, minus) = BoundaryPoint::fixed_points(&dw.h).unwrap();
        prop_assert_eq!(plus.prefix(x.len()), x);
        prop_assert_eq!(minus.prefix(y.len()), y);
    }

    #[test]
    fn separator_separates(x in point(2, 5), y in point(2, 5)) {
        let s = RelationSpec::generators(2).unwrap();
        if related(&x, &y, &s).unwrap() {
            prop_assert!(separating_element(&x, &y).is_err());
        } else {
            let sep = separating_element(&x, &y).unwrap();
            let f = sep.function();
            let (fx, fy) = (f.evaluate(&x).unwrap(), f.evaluate(&y).unwrap());
            prop_assert_ne!(&fx, &fy);
            prop_assert_eq!(separator_value(&sep, &x).unwrap(), fx);
            prop_assert_eq!(separator_value(&sep, &y).unwrap(), fy);
        }
    }
}

/// Every sampled pair `g·w^{±∞}` is related, with no normalization of `g`.
#[test]
fn sampled_pairs_are_related() {
    for (rank, names) in [(2, vec!["S", "ab", "aab"]), (3, vec!["a,c"])] {
        for n in names {
            let f = RelationSpec::parse(rank, n).unwrap();
            for (x, y) in sampled_class_pairs(&f, 4) {
                assert!(related(&x, &y, &f).unwrap(), "{x} {y} {f}");
                assert_eq!(class_of(&x, &f).unwrap().len(), 2);
            }
        }
    }
}

/// Points outside every sampled class stay singletons.
#[test]
fn unsampled_points_are_singletons() {
    let f = RelationSpec::parse(2, "a").unwrap();
    let pairs = sampled_class_pairs(&f, 6);
    for h in ReducedWord::all_up_to_length(2, 3).into_iter().skip(1) {
        let x = BoundaryPoint::limit_point(&h, freeboundary::Sign::Plus).unwrap();
        let sampled = pairs.iter().any(|(p, q)| p == &x || q == &x);
        assert_eq!(class_of(&x, &f).unwrap().len() == 2, sampled, "{x}");
    }
}
