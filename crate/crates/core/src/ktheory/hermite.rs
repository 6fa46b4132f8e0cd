//! Column echelon form over ℤ: kernels and exact solving.

use crate::error::{Error, Result};
use crate::int::Int;

use super::matrix::IntMatrix;

/// `A·T = H` with `T` unimodular and `H` in column echelon form: the pivot of
/// column `k` sits in row `pivots[k]`, rows increase with `k`, every entry
/// above a pivot is zero and the columns after the last pivot are zero.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    h: Vec<Vec<Int>>,
    t: Vec<Vec<Int>>,
    rows: usize,
    pivots: Vec<usize>,
}

impl ColumnEchelon {
    pub fn new(a: &IntMatrix) -> ColumnEchelon {
        let (m, n) = (a.rows(), a.cols());
        let mut h = a.columns();
        let mut t: Vec<Vec<Int>> = (0..n)
            .map(|j| {
                let mut c = vec![Int::ZERO; n];
                c[j] = Int::ONE;
                c
            })
            .collect();
        let mut pivots = Vec::new();
        let mut c = 0;
        for r in 0..m {
            if c == n {
                break;
            }
            loop {
                let best = (c..n)
                    .filter(|&j| !h[j][r].is_zero())
                    .min_by(|&i, &j| h[i][r].cmp_abs(&h[j][r]).then(i.cmp(&j)));
                let Some(best) = best else { break };
                h.swap(best, c);
                t.swap(best, c);
                let mut left = false;
                for j in c + 1..n {
                    if h[j][r].is_zero() {
                        continue;
                    }
                    let q = h[j][r].div_floor(&h[c][r]);
                    let (lo, hi) = h.split_at_mut(j);
                    axpy(&mut hi[0], &q, &lo[c]);
                    let (lo, hi) = t.split_at_mut(j);
                    axpy(&mut hi[0], &q, &lo[c]);
                    left |= !h[j][r].is_zero();
                }
                if !left {
                    if h[c][r].is_negative() {
                        negate(&mut h[c]);
                        negate(&mut t[c]);
                    }
                    pivots.push(r);
                    c += 1;
                    break;
                }
            }
        }
        ColumnEchelon {
            h,
            t,
            rows: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivots
    }

    pub fn h(&self) -> IntMatrix {
        IntMatrix::from_columns(self.rows, &self.h).expect("consistent shape")
    }

    pub fn t(&self) -> IntMatrix {
        IntMatrix::from_columns(self.t.len(), &self.t).expect("consistent shape")
    }

    /// Columns form a ℤ-basis of `{x : A·x = 0}`.
    pub fn kernel(&self) -> IntMatrix {
        IntMatrix::from_columns(self.t.len(), &self.t[self.rank()..]).expect("consistent shape")
    }

    /// Some `x` with `A·x = b`, if one exists.
    pub fn solve(&self, b: &[Int]) -> Result<Option<Vec<Int>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut res = b.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        for (k, &r) in self.pivots.iter().enumerate() {
            let Some(q) = res[r].checked_div_exact(&self.h[k][r]) else {
                return Ok(None);
            };
            axpy(&mut res, &q, &self.h[k]);
            y.push(q);
        }
        if res.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let n = self.t.len();
        let mut x = vec![Int::ZERO; n];
        for (k, yk) in y.iter().enumerate() {
            if yk.is_zero() {
                continue;
            }
            for (xi, ti) in x.iter_mut().zip(&self.t[k]) {
                if !ti.is_zero() {
                    xi.add_mul(yk, ti);
                }
            }
        }
        Ok(Some(x))
    }
}

/// `dst -= q·src`.
fn axpy(dst: &mut [Int], q: &Int, src: &[Int]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            d.sub_mul(q, s);
        }
    }
}

fn negate(v: &mut [Int]) {
    for x in v {
        *x = -&*x;
    }
}

/// A ℤ-basis of `{v : A·v = 0}`, as the columns of the result.
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    ColumnEchelon::new(a).kernel()
}

/// Exact solution of `A·x = b` over ℤ.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>> {
    ColumnEchelon::new(a).solve(b)
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
    fn kernel_examples() {
        assert_eq!(kernel_lattice(&IntMatrix::identity(3)).cols(), 0);
        let k = kernel_lattice(&m(&[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == ints(&[1, -1]) || v == ints(&[-1, 1]));
    }

    #[test]
    fn echelon_shape_and_transform() {
        let a = m(&[&[2, 4, 6], &[1, 3, 5], &[0, 0, 1]]);
        let e = ColumnEchelon::new(&a);
        assert_eq!(&a * &e.t(), e.h());
        assert_eq!(e.t().determinant().unwrap().abs(), Int::ONE);
        assert_eq!(e.rank(), 3);
        let h = e.h();
        for (k, &r) in e.pivot_rows().iter().enumerate() {
            for i in 0..r {
                assert!(h.get(i, k).is_zero());
            }
        }
    }

    #[test]
    fn solve_examples() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve_integer(&a, &ints(&[4, 9])).unwrap(), Some(ints(&[2, 3])));
        assert_eq!(solve_integer(&a, &ints(&[1, 0])).unwrap(), None);
        let a = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve_integer(&a, &ints(&[1, 2])).unwrap(), None);
        let x = solve_integer(&a, &ints(&[3, 3])).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), ints(&[3, 3]));
        assert!(solve_integer(&a, &ints(&[1])).is_err());
    }
}
