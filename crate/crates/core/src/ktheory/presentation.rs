//! Finitely generated abelian groups `ℤ^m / col(R)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::int::Int;

use super::matrix::IntMatrix;
use super::smith::{smith_normal_form, SmithForm};

/// `ℤ^m / col(R)` with normal-form coordinates read off a Smith form.
///
/// A vector `x ∈ ℤ^m` has coordinates `(U·x)_i` for the rows with
/// `d_i ≠ 1`: torsion coordinates first (reduced mod `d_i`), then free ones.
#[derive(Clone, Debug)]
pub struct AbelianPresentation {
    relations: IntMatrix,
    smith: SmithForm,
    nf_rows: Vec<usize>,
    moduli: Vec<Int>,
    marked: BTreeMap<String, Vec<Int>>,
}

impl AbelianPresentation {
    pub fn new(relations: IntMatrix) -> AbelianPresentation {
        let smith = smith_normal_form(&relations);
        AbelianPresentation::from_smith(relations, smith)
    }

    pub fn from_smith(relations: IntMatrix, smith: SmithForm) -> AbelianPresentation {
        let m = relations.rows();
        let mut nf_rows = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..m {
            let d = smith.invariant_factors.get(i).cloned().unwrap_or(Int::ZERO);
            if !d.is_one() {
                nf_rows.push(i);
                moduli.push(d);
            }
        }
        AbelianPresentation {
            relations,
            smith,
            nf_rows,
            moduli,
            marked: BTreeMap::new(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|d| d.is_zero()).count()
    }

    /// Nontrivial invariant factors, ascending.
    pub fn torsion(&self) -> Vec<Int> {
        self.moduli.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    /// `d_i` per normal-form coordinate; `0` marks a free coordinate.
    pub fn moduli(&self) -> &[Int] {
        &self.moduli
    }

    pub fn nf_dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn normal_form(&self, x: &[Int]) -> Result<Vec<Int>> {
        if x.len() != self.ambient_rank() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_rank(),
                got: x.len(),
            });
        }
        Ok(self
            .nf_rows
            .iter()
            .zip(&self.moduli)
            .map(|(&i, d)| {
                let mut acc = Int::ZERO;
                for (a, b) in self.smith.u.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_mul(a, b);
                    }
                }
                reduce(&acc, d)
            })
            .collect())
    }

    /// Reduces normal-form coordinates into their canonical range.
    pub fn reduce_nf(&self, y: &[Int]) -> Vec<Int> {
        y.iter().zip(&self.moduli).map(|(v, d)| reduce(v, d)).collect()
    }

    /// Ambient vector representing the `k`-th normal-form generator.
    pub fn generator(&self, k: usize) -> Vec<Int> {
        self.smith.u_inv.column(self.nf_rows[k])
    }

    /// Order of the class with normal-form coordinates `y`; `None` if infinite.
    pub fn order(&self, y: &[Int]) -> Option<Int> {
        let mut order = Int::ONE;
        for (v, d) in y.iter().zip(&self.moduli) {
            if v.is_zero() {
                continue;
            }
            if d.is_zero() {
                return None;
            }
            order = order.lcm(&d.div_floor(&d.gcd(v)));
        }
        Some(order)
    }

    pub fn set_marked(&mut self, name: impl Into<String>, x: &[Int]) -> Result<()> {
        let y = self.normal_form(x)?;
        self.marked.insert(name.into(), y);
        Ok(())
    }

    /// Marked classes in normal-form coordinates, keyed by name.
    pub fn marked(&self) -> &BTreeMap<String, Vec<Int>> {
        &self.marked
    }

    /// Whether the homomorphism with normal-form matrix `phi` (columns are the
    /// images of this group's generators in `target`) is an isomorphism.
    ///
    /// Equal invariants plus surjectivity suffice: a surjective endomorphism
    /// of a finitely generated abelian group is injective.
    pub fn is_isomorphism_onto(&self, phi: &IntMatrix, target: &AbelianPresentation) -> bool {
        if self.free_rank() != target.free_rank() || self.torsion() != target.torsion() {
            return false;
        }
        let k = target.nf_dim();
        let mut cols = phi.columns();
        for (i, d) in target.moduli.iter().enumerate() {
            if !d.is_zero() {
                let mut c = vec![Int::ZERO; k];
                c[i] = d.clone();
                cols.push(c);
            }
        }
        let Ok(m) = IntMatrix::from_columns(k, &cols) else {
            return false;
        };
        let s = smith_normal_form(&m);
        s.invariant_factors.len() == k && s.invariant_factors.iter().all(Int::is_one)
    }
}

fn reduce(v: &Int, d: &Int) -> Int {
    if d.is_zero() {
        v.clone()
    } else {
        v.mod_floor(d)
    }
}
