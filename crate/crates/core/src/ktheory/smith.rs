//! Smith normal form with both transforms and their inverses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::Int;

use super::matrix::IntMatrix;

/// `U·A·V = D`, `U·U⁻¹ = I`, `V·V⁻¹ = I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Diagonal of `D`, nonnegative, each dividing the next.
    pub invariant_factors: Vec<Int>,
}

impl SmithForm {
    pub fn verify(&self, a: &IntMatrix) -> Result<()> {
        let fail = |what: &str| Err(Error::Internal(format!("Smith form: {what}")));
        let (m, n) = (a.rows(), a.cols());
        if (self.u.rows(), self.u.cols(), self.v.rows(), self.v.cols()) != (m, m, n, n) {
            return fail("transform shapes");
        }
        if !(&self.u * &self.u_inv).is_identity() || !(&self.v * &self.v_inv).is_identity() {
            return fail("transforms are not unimodular");
        }
        if &(&self.u * a) * &self.v != self.d {
            return fail("U·A·V ≠ D");
        }
        if IntMatrix::diagonal(m, n, &self.invariant_factors) != self.d {
            return fail("D is not diagonal");
        }
        for (i, x) in self.invariant_factors.iter().enumerate() {
            if x.is_negative() {
                return fail("negative invariant factor");
            }
            if let Some(next) = self.invariant_factors.get(i + 1) {
                if !next.is_multiple_of(x) {
                    return fail("divisibility chain");
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smallest-magnitude pivot, ties broken by row then column.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    // Row op `row_i += q·row_t` on D is mirrored as `col_t −= q·col_i` on U⁻¹.
    let row_add = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, i, t, q: &Int| {
        d.add_row_multiple(i, t, q);
        u.add_row_multiple(i, t, q);
        ui.add_col_multiple(t, i, &-q);
    };
    let col_add = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, j, t, q: &Int| {
        d.add_col_multiple(j, t, q);
        v.add_col_multiple(j, t, q);
        vi.add_row_multiple(t, j, &-q);
    };

    let mut t = 0;
    while t < m.min(n) {
        let mut done = false;
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.cmp_abs(d.get(bi, bj)).is_lt()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                done = true;
                break;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let p = d.get(t, t).clone();
            let mut left = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(&p);
                row_add(&mut d, &mut u, &mut u_inv, i, t, &-&q);
                left |= !d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(&p);
                col_add(&mut d, &mut v, &mut v_inv, j, t, &-&q);
                left |= !d.get(t, j).is_zero();
            }
            if left {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => row_add(&mut d, &mut u, &mut u_inv, t, i, &Int::ONE),
                None => break,
            }
        }
        if done {
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }
    let invariant_factors = (0..m.min(n)).map(|i| d.get(i, i).clone()).collect();
    let snf = SmithForm {
        u,
        u_inv,
        d,
        v,
        v_inv,
        invariant_factors,
    };
    if cfg!(debug_assertions) {
        snf.verify(a).expect("Smith form postconditions");
    }
    snf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(smith_normal_form(&a).invariant_factors, ints(&[1, 6]));
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(smith_normal_form(&z).invariant_factors, ints(&[0, 0]));
        let a = m(&[&[0, -1, -1], &[-1, 0, -1], &[-1, -1, 0]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariant_factors, ints(&[1, 1, 2]));
        s.verify(&a).unwrap();
    }

    #[test]
    fn snf_rectangular_and_empty() {
        let a = m(&[&[6, 4, 2], &[4, 8, 0]]);
        let s = smith_normal_form(&a);
        s.verify(&a).unwrap();
        assert_eq!(s.invariant_factors, ints(&[2, 4]));
        let e = IntMatrix::zeros(0, 3);
        smith_normal_form(&e).verify(&e).unwrap();
        let e = IntMatrix::zeros(3, 0);
        smith_normal_form(&e).verify(&e).unwrap();
    }

    #[test]
    fn snf_deterministic() {
        let a = m(&[&[3, 5, 7], &[2, 4, 6], &[1, 1, 9]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
    }
}
