//! The orbit invariant separating the systems `F_d ↷ ∂F_d/R_F`.
//!
//! `X` is the set of classes fixed by some `g ≠ e`; `Y ⊂ X` is the set of
//! glued classes `[g·s^{±∞}]`, `s ∈ F`. The number of `F_d`-orbits in `Y` is
//! `♯F`.

use std::fmt;

use crate::boundary::{BoundaryPoint, Sign};
use crate::error::{Error, Result};
use crate::quotient::{related, RelationSpec};
use crate::words::{ConjugacyKey, ReducedWord};

/// Conjugacy class of the primitive period, up to inversion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitKey(ConjugacyKey);

impl OrbitKey {
    pub fn of(x: &BoundaryPoint) -> OrbitKey {
        let v = x.period();
        let a = v.conjugacy_key().expect("period is nontrivial");
        let b = v.inverse().conjugacy_key().expect("period is nontrivial");
        OrbitKey(a.min(b))
    }

    pub fn word(&self) -> &ReducedWord {
        self.0.word()
    }
}

impl fmt::Display for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Generator indices of `F`; errors unless `F` is a nonempty set of letters.
fn letter_set(f: &RelationSpec) -> Result<Vec<usize>> {
    match f.letter_subset() {
        Some(s) if !s.is_empty() => Ok(s),
        _ => Err(Error::Precondition(format!(
            "relation must be a nonempty set of generators, got {f}"
        ))),
    }
}

fn check_rank(x: &BoundaryPoint, f: &RelationSpec) -> Result<()> {
    if x.rank() != f.rank() {
        return Err(Error::RankMismatch(x.rank(), f.rank()));
    }
    Ok(())
}

/// A nontrivial `g` fixing `[x]`: `u·v·u⁻¹` for `x = u·v^∞`. Every eventually
/// periodic point has one.
pub fn in_x(x: &BoundaryPoint, f: &RelationSpec) -> Result<Option<ReducedWord>> {
    check_rank(x, f)?;
    letter_set(f)?;
    let g = x.stabilizer_generator();
    if !x.is_fixed_by(&g)? {
        return Err(Error::Internal(format!("{g} does not fix {x}")));
    }
    Ok(Some(g))
}

/// Whether `[x] = [g·s^{±∞}]` for some `g` and `s ∈ F`.
pub fn in_y(x: &BoundaryPoint, f: &RelationSpec) -> Result<bool> {
    check_rank(x, f)?;
    let key = OrbitKey::of(x);
    Ok(letter_set(f)?.into_iter().any(|i| {
        let s = BoundaryPoint::limit_point(&ReducedWord::generator(f.rank(), i), Sign::Plus)
            .expect("generator");
        OrbitKey::of(&s) == key
    }))
}

/// Some `g` with `g·[x] = [y]`, or `None` when the orbits differ. Both points
/// must lie in `Y`.
pub fn same_orbit(x: &BoundaryPoint, y: &BoundaryPoint, f: &RelationSpec) -> Result<Option<ReducedWord>> {
    for p in [x, y] {
        if !in_y(p, f)? {
            return Err(Error::Precondition(format!("{p} is not in Y for {f}")));
        }
    }
    if OrbitKey::of(x) != OrbitKey::of(y) {
        return Ok(None);
    }
    // x = u·s^{±∞}, y = u'·s^{±∞}; u'·u⁻¹ carries the class of x to that of y.
    let g = y.preperiod().mul_unchecked(&x.preperiod().inverse());
    if !related(&x.act(&g)?, y, f)? {
        return Err(Error::Internal(format!("{g} does not carry [{x}] to [{y}]")));
    }
    Ok(Some(g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCount {
    pub count: usize,
    /// One `s^{+∞}` per orbit.
    pub representatives: Vec<BoundaryPoint>,
    /// Points `g·s^{+∞}` checked against the representatives.
    pub checked: usize,
}

/// Orbits of `F_d` on `Y` among `{[s^{+∞}] : s ∈ F}`, then a check that every
/// `g·s^{+∞}` with `|g| ≤ check_bound` lands in a counted orbit.
pub fn orbit_count(f: &RelationSpec, check_bound: usize) -> Result<OrbitCount> {
    let rank = f.rank();
    let seeds: Vec<BoundaryPoint> = letter_set(f)?
        .into_iter()
        .map(|i| BoundaryPoint::limit_point(&ReducedWord::generator(rank, i), Sign::Plus))
        .collect::<Result<_>>()?;
    let mut reps: Vec<BoundaryPoint> = Vec::new();
    for s in &seeds {
        let mut found = false;
        for r in &reps {
            if same_orbit(s, r, f)?.is_some() {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(s.clone());
        }
    }
    let mut checked = 0;
    for g in ReducedWord::all_up_to_length(rank, check_bound) {
        for s in &seeds {
            let x = s.act(&g)?;
            let mut hit = false;
            for r in &reps {
                if same_orbit(&x, r, f)?.is_some() {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return Err(Error::Internal(format!("{x} lies in no counted orbit")));
            }
            checked += 1;
        }
    }
    Ok(OrbitCount {
        count: reps.len(),
        representatives: reps,
        checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::class_of;

    fn pt(s: &str) -> BoundaryPoint {
        BoundaryPoint::parse(2, s).unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(2, s).unwrap()
    }

    fn rel(d: usize, s: &str) -> RelationSpec {
        RelationSpec::parse(d, s).unwrap()
    }

    #[test]
    fn in_x_examples() {
        let f = rel(2, "a");
        assert_eq!(in_x(&pt("1|a"), &f).unwrap(), Some(w("a")));
        assert_eq!(in_x(&pt("a|b"), &f).unwrap(), Some(w("abA")));
        // b·(ab)^∞ = (ba)^∞
        let g = in_x(&pt("b|ab"), &f).unwrap().unwrap();
        let conj = w("b").multiply(&w("ab")).unwrap().multiply(&w("B")).unwrap();
        assert_eq!(g, conj);
        assert!(pt("b|ab").is_fixed_by(&conj).unwrap());
        assert!(in_x(&pt("1|a"), &rel(2, "none")).is_err());
    }

    #[test]
    fn in_y_examples() {
        let f = rel(2, "a");
        assert!(in_y(&pt("1|a"), &f).unwrap());
        assert!(!in_y(&pt("1|b"), &f).unwrap());
        assert!(in_y(&pt("b|A"), &f).unwrap());
        for x in ["1|a", "1|b", "b|A", "ab|a", "1|ab", "B|ab"] {
            let x = pt(x);
            assert_eq!(in_y(&x, &f).unwrap(), class_of(&x, &f).unwrap().len() == 2, "{x}");
        }
    }

    #[test]
    fn same_orbit_examples() {
        let f = rel(2, "a");
        assert_eq!(same_orbit(&pt("1|a"), &pt("b|a"), &f).unwrap(), Some(w("b")));
        assert_eq!(same_orbit(&pt("1|a"), &pt("1|A"), &f).unwrap(), Some(w("1")));
        let s = rel(2, "S");
        assert_eq!(same_orbit(&pt("1|a"), &pt("1|b"), &s).unwrap(), None);
        assert!(same_orbit(&pt("1|a"), &pt("1|b"), &f).is_err());
    }

    /// No `g` with `|g| ≤ 4` carries `[a^∞]` to `[b^∞]` under `R_S`.
    #[test]
    fn distinct_orbits_by_exhaustion() {
        let s = rel(2, "S");
        let (x, y) = (pt("1|a"), pt("1|b"));
        for g in ReducedWord::all_up_to_length(2, 4) {
            assert!(!related(&x.act(&g).unwrap(), &y, &s).unwrap());
        }
    }

    #[test]
    fn orbit_count_examples() {
        assert_eq!(orbit_count(&rel(2, "a"), 3).unwrap().count, 1);
        assert_eq!(orbit_count(&rel(2, "S"), 3).unwrap().count, 2);
        let c = orbit_count(&rel(3, "a,b"), 4).unwrap();
        assert_eq!(c.count, 2);
        assert_eq!(c.checked, 2 * ReducedWord::all_up_to_length(3, 4).len());
        assert!(orbit_count(&rel(2, "none"), 2).is_err());
        assert!(orbit_count(&rel(2, "ab"), 2).is_err());
    }
}
