//! The map `η((f_s)) = Σ_s (f_s − s·f_s)` and the identities around it.

use crate::clopen::{InvariantLattice, LevelFunction};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::quotient::RelationSpec;
use crate::words::{check_rank, level_count, Letter, ReducedWord};

use super::hermite::solve_integer;
use super::matrix::IntMatrix;

fn generator_words(rank: usize) -> Vec<ReducedWord> {
    (0..rank).map(|i| ReducedWord::generator(rank, i)).collect()
}

/// Matrix of `η` from `(level-n functions)^d` to level-`(n+1)` functions.
/// Column `s·N_n + i` is the tuple with `p[wᵢ]` in slot `s`.
pub fn eta_matrix(rank: usize, n: usize) -> Result<IntMatrix> {
    check_rank(rank)?;
    if n == 0 {
        return Err(Error::InvalidLevel { min: 1, got: 0 });
    }
    let (rows, dom) = (level_count(rank, n + 1), level_count(rank, n));
    let mut m = IntMatrix::zeros(rows, rank * dom);
    for (s, g) in generator_words(rank).iter().enumerate() {
        for (i, w) in ReducedWord::all_of_length(rank, n).iter().enumerate() {
            let p = LevelFunction::cylinder_p(w)?;
            let col = p.refine(n + 1)?.checked_sub(&p.translate_raw(g))?;
            for (r, c) in col.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    m.set(r, s * dom + i, c.clone());
                }
            }
        }
    }
    Ok(m)
}

/// `Σ_s (f_s − s·f_s)` computed directly.
pub fn eta_apply(tuple: &[LevelFunction]) -> Result<LevelFunction> {
    let rank = tuple.first().map(LevelFunction::rank).ok_or(Error::DimensionMismatch {
        expected: 1,
        got: 0,
    })?;
    if tuple.len() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            got: tuple.len(),
        });
    }
    let mut acc = LevelFunction::zero(rank);
    for (f, g) in tuple.iter().zip(generator_words(rank)) {
        acc = acc.checked_add(&f.checked_sub(&f.translate(&g)?)?)?;
    }
    Ok(acc)
}

/// `η` restricted to `R_W`-invariant tuples, in invariant-basis coordinates:
/// domain `L_n^d`, codomain `L_{n+1}`. `W = ∅` gives `η` itself.
pub fn tau_matrix(n: usize, spec: &RelationSpec) -> Result<IntMatrix> {
    let dom = InvariantLattice::new(n, spec)?;
    let cod = InvariantLattice::new(n + 1, spec)?;
    tau_between(&dom, &cod)
}

pub(crate) fn tau_between(dom: &InvariantLattice, cod: &InvariantLattice) -> Result<IntMatrix> {
    let rank = dom.rank();
    let k = dom.dim();
    let mut m = IntMatrix::zeros(cod.dim(), rank * k);
    for (j, b) in dom.basis().iter().enumerate() {
        let fine = b.refine(cod.level())?;
        for (s, g) in generator_words(rank).iter().enumerate() {
            let img = fine.checked_sub(&b.translate_raw(g))?;
            let y = cod.coords(&img).map_err(|e| {
                Error::Internal(format!("η of an invariant tuple is not invariant: {e}"))
            })?;
            for (r, c) in y.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(r, s * k + j, c);
                }
            }
        }
    }
    Ok(m)
}

/// Splits a coordinate vector of `(level-n functions)^d` into its slots.
pub fn split_tuple(rank: usize, n: usize, x: &[Int]) -> Result<Vec<LevelFunction>> {
    let k = level_count(rank, n);
    if x.len() != rank * k {
        return Err(Error::DimensionMismatch {
            expected: rank * k,
            got: x.len(),
        });
    }
    x.chunks(k)
        .map(|c| LevelFunction::from_coeffs(rank, n, c.to_vec()))
        .collect()
}

/// Exact membership of `f` in the column span of `a` over ℤ, with a preimage.
/// `f` is refined to the level whose cylinder count matches `a`'s rows.
pub fn membership_in_image(f: &LevelFunction, a: &IntMatrix) -> Result<Option<Vec<Int>>> {
    let mut level = f.level();
    while level_count(f.rank(), level) < a.rows() {
        level += 1;
    }
    if level_count(f.rank(), level) != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: f.coeffs().len(),
        });
    }
    solve_integer(a, f.refine(level)?.coeffs())
}

/// A tuple `(g_s)` at level `n` with `η((g_s)) = f`, if one exists.
pub fn eta_preimage(f: &LevelFunction, n: usize) -> Result<Option<Vec<LevelFunction>>> {
    let a = eta_matrix(f.rank(), n)?;
    if f.level() > n + 1 {
        let m = f.minimize();
        if m.level() > n + 1 {
            return Err(Error::InvalidLevel {
                min: m.level() - 1,
                got: n,
            });
        }
        return eta_preimage(&m, n);
    }
    match membership_in_image(f, &a)? {
        Some(x) => Ok(Some(split_tuple(f.rank(), n, &x)?)),
        None => Ok(None),
    }
}

/// Total coefficient sum mod `d − 1`; refinement multiplies each value's
/// weight by `2d − 1 ≡ 1`. Always `0` for `d = 2`.
pub fn sigma_residue(f: &LevelFunction) -> Int {
    let m = Int::from(f.rank() - 1);
    f.coefficient_sum().mod_floor(&m)
}

/// `Σ n(s)·q[s]`.
pub fn q_combination(rank: usize, n: &[Int]) -> Result<LevelFunction> {
    if n.len() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            got: n.len(),
        });
    }
    let mut acc = LevelFunction::zero(rank);
    for (c, g) in n.iter().zip(generator_words(rank)) {
        acc = acc.checked_add(&LevelFunction::cylinder_q(&g)?.scale(c))?;
    }
    Ok(acc)
}

/// `g_s = (n(s) − m)·p[s⁻¹]` where `Σ n(s) = (d − 1)·m`; `None` when the sum
/// is not divisible by `d − 1`.
pub fn explicit_preimage(rank: usize, n: &[Int]) -> Result<Option<Vec<LevelFunction>>> {
    if n.len() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            got: n.len(),
        });
    }
    let total: Int = n.iter().sum();
    let Some(m) = total.checked_div_exact(&Int::from(rank - 1)) else {
        return Ok(None);
    };
    let out = n
        .iter()
        .zip(generator_words(rank))
        .map(|(c, g)| Ok(LevelFunction::cylinder_p(&g.inverse())?.scale(&(c - &m))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(out))
}

/// Checks `q[s²] = s·q[s] + s⁻¹·q[s] + q[s] − 2` for `k = 2`, and
/// `q[s^k] = s·q[s^{k−1}] + s⁻¹·q[s^{k−1}] − q[s^{k−2}]` for `k > 2`, as
/// equalities of functions.
pub fn verify_recurrence(rank: usize, s: Letter, k: usize) -> Result<bool> {
    check_rank(rank)?;
    if s.index() >= rank {
        return Err(Error::Precondition(format!("letter {s} outside rank {rank}")));
    }
    if k < 2 {
        return Err(Error::Precondition(format!("k must be at least 2, got {k}")));
    }
    let (lhs, rhs) = recurrence_sides(rank, s, k)?;
    Ok(lhs == rhs)
}

/// Left and right sides of the recurrence at `k`.
pub fn recurrence_sides(rank: usize, s: Letter, k: usize) -> Result<(LevelFunction, LevelFunction)> {
    let sw = ReducedWord::letter(rank, s);
    let si = sw.inverse();
    let q = |j: usize| LevelFunction::cylinder_q(&sw.pow(j as i64));
    let prev = q(k - 1)?;
    let moved = prev.translate(&sw)?.checked_add(&prev.translate(&si)?)?;
    let rhs = if k == 2 {
        moved
            .checked_add(&prev)?
            .checked_sub(&LevelFunction::constant(rank, 2))?
    } else {
        moved.checked_sub(&q(k - 2)?)?
    };
    Ok((q(k)?, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryPoint;
    use crate::ktheory::hermite::kernel_lattice;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn eta_shape_and_constants() {
        let a = eta_matrix(2, 1).unwrap();
        assert_eq!((a.rows(), a.cols()), (12, 8));
        let mut x = vec![Int::ZERO; 8];
        for v in x.iter_mut().take(4) {
            *v = Int::ONE;
        }
        assert!(a.mul_vec(&x).unwrap().iter().all(Int::is_zero));
    }

    #[test]
    fn eta_matrix_matches_direct_formula() {
        for (rank, n) in [(2, 1), (2, 2), (3, 1)] {
            let a = eta_matrix(rank, n).unwrap();
            let cols = a.cols();
            for j in (0..cols).step_by(3) {
                let mut x = vec![Int::ZERO; cols];
                x[j] = Int::from(j as i64 - 2);
                x[(j * 7 + 1) % cols] += Int::ONE;
                let tuple = split_tuple(rank, n, &x).unwrap();
                let direct = eta_apply(&tuple).unwrap();
                let via = LevelFunction::from_coeffs(rank, n + 1, a.mul_vec(&x).unwrap()).unwrap();
                assert_eq!(direct, via);
            }
        }
    }

    #[test]
    fn eta_kernel_is_constant_tuples() {
        for (rank, n) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            let k = kernel_lattice(&eta_matrix(rank, n).unwrap());
            assert_eq!(k.cols(), rank);
            for c in k.columns() {
                for f in split_tuple(rank, n, &c).unwrap() {
                    assert_eq!(f.minimize().level(), 1);
                    assert!(f.minimize().coeffs().iter().all(|x| x == &f.coeffs()[0]));
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        let s = RelationSpec::generators(2).unwrap();
        let t = tau_matrix(1, &s).unwrap();
        assert_eq!(t.cols(), 4);
        // τ(q[a], 0) = q[a] − a·q[a]
        let cod = InvariantLattice::new(2, &s).unwrap();
        let qa = LevelFunction::cylinder_q(&ReducedWord::parse(2, "a").unwrap()).unwrap();
        let want = qa.checked_sub(&qa.translate(&ReducedWord::parse(2, "a").unwrap()).unwrap()).unwrap();
        assert_eq!(t.column(0), cod.coords(&want).unwrap());
        // constant tuples vanish
        let x = ints(&[1, 1, 2, 2]);
        assert!(t.mul_vec(&x).unwrap().iter().all(Int::is_zero));
    }

    #[test]
    fn obstruction_examples() {
        let q = |v: &[i64]| q_combination(3, &ints(v)).unwrap();
        for n in 1..=2 {
            let a = eta_matrix(3, n).unwrap();
            assert_eq!(membership_in_image(&q(&[1, 0, 0]), &a).unwrap(), None);
            let pre = membership_in_image(&q(&[1, 1, 0]), &a).unwrap().unwrap();
            let back = LevelFunction::from_coeffs(3, n + 1, a.mul_vec(&pre).unwrap()).unwrap();
            assert_eq!(back, q(&[1, 1, 0]));
            let zero = membership_in_image(&LevelFunction::zero(3), &a).unwrap().unwrap();
            assert!(zero.iter().all(Int::is_zero));
        }
        let g = explicit_preimage(3, &ints(&[1, 1, 0])).unwrap().unwrap();
        assert_eq!(eta_apply(&g).unwrap(), q(&[1, 1, 0]));
        assert!(explicit_preimage(3, &ints(&[1, 0, 0])).unwrap().is_none());
    }

    #[test]
    fn sigma_examples() {
        let a = ReducedWord::parse(3, "a").unwrap();
        assert_eq!(sigma_residue(&LevelFunction::cylinder_q(&a).unwrap()), Int::ZERO);
        let pa = LevelFunction::cylinder_p(&a).unwrap();
        assert_eq!(sigma_residue(&pa), Int::ONE);
        assert_eq!(sigma_residue(&pa.refine(3).unwrap()), Int::ONE);
        let e = eta_matrix(3, 1).unwrap();
        for c in e.columns() {
            let f = LevelFunction::from_coeffs(3, 2, c).unwrap();
            assert_eq!(sigma_residue(&f), Int::ZERO);
        }
        assert_eq!(sigma_residue(&LevelFunction::cylinder_p(&ReducedWord::parse(2, "a").unwrap()).unwrap()), Int::ZERO);
    }

    #[test]
    fn recurrence_examples() {
        let a = Letter::generator(0);
        assert!(verify_recurrence(2, a, 2).unwrap());
        assert!(verify_recurrence(2, a, 3).unwrap());
        let (lhs, rhs) = recurrence_sides(2, a, 2).unwrap();
        let x = BoundaryPoint::parse(2, "1|a").unwrap();
        assert_eq!((lhs.evaluate(&x).unwrap(), rhs.evaluate(&x).unwrap()), (Int::ONE, Int::ONE));
        let y = BoundaryPoint::parse(2, "1|b").unwrap();
        assert_eq!((lhs.evaluate(&y).unwrap(), rhs.evaluate(&y).unwrap()), (Int::ZERO, Int::ZERO));
        assert!(verify_recurrence(2, a, 1).is_err());
    }
}
