//! Locally constant integer-valued functions on `∂F_d`.
//!
//! A [`LevelFunction`] of level `n` assigns an integer to each of the
//! `2d(2d−1)^{n−1}` cylinders `{x : x₁⋯xₙ = w}`, stored in key order
//! (length-lexicographic in the letter order `a < A < b < B < …`).

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde_json::{Map, Number, Value};

use crate::boundary::BoundaryPoint;
use crate::error::{parse_err, Error, Result};
use crate::int::Int;
use crate::quotient::{classes_meeting_level, RelationSpec};
use crate::words::{check_rank, level_count, ReducedWord};

#[derive(Clone, Debug)]
pub struct LevelFunction {
    rank: usize,
    level: usize,
    coeffs: Vec<Int>,
}

impl LevelFunction {
    pub fn from_coeffs(rank: usize, level: usize, coeffs: Vec<Int>) -> Result<LevelFunction> {
        check_rank(rank)?;
        if level == 0 {
            return Err(Error::InvalidLevel { min: 1, got: 0 });
        }
        let expected = level_count(rank, level);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(LevelFunction {
            rank,
            level,
            coeffs,
        })
    }

    /// The constant function, stored at level 1.
    pub fn constant(rank: usize, c: impl Into<Int>) -> LevelFunction {
        let c = c.into();
        LevelFunction {
            rank,
            level: 1,
            coeffs: vec![c; 2 * rank],
        }
    }

    pub fn zero(rank: usize) -> LevelFunction {
        LevelFunction::constant(rank, 0)
    }

    /// `p[w]`, the indicator of the cylinder of infinite words starting with `w`.
    pub fn cylinder_p(w: &ReducedWord) -> Result<LevelFunction> {
        if w.is_identity() {
            return Err(Error::IdentityNotAllowed);
        }
        let mut coeffs = vec![Int::ZERO; level_count(w.rank(), w.len())];
        coeffs[w.level_index()] = Int::ONE;
        Ok(LevelFunction {
            rank: w.rank(),
            level: w.len(),
            coeffs,
        })
    }

    /// `q[w] = p[w] + p[w⁻¹]`.
    pub fn cylinder_q(w: &ReducedWord) -> Result<LevelFunction> {
        let mut f = LevelFunction::cylinder_p(w)?;
        f.coeffs[w.inverse().level_index()] += Int::ONE;
        Ok(f)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, w: &ReducedWord) -> Option<&Int> {
        if w.rank() != self.rank || w.len() != self.level {
            return None;
        }
        self.coeffs.get(w.level_index())
    }

    /// `(cylinder word, value)` pairs in key order.
    pub fn entries(&self) -> impl Iterator<Item = (ReducedWord, &Int)> + '_ {
        ReducedWord::all_of_length(self.rank, self.level)
            .into_iter()
            .zip(self.coeffs.iter())
    }

    /// The same function written on level-`m` cylinders.
    pub fn refine(&self, m: usize) -> Result<LevelFunction> {
        if m < self.level {
            return Err(Error::InvalidLevel {
                min: self.level,
                got: m,
            });
        }
        let block = (2 * self.rank - 1).pow((m - self.level) as u32);
        let coeffs = self
            .coeffs
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.clone(), block))
            .collect();
        Ok(LevelFunction {
            rank: self.rank,
            level: m,
            coeffs,
        })
    }

    /// Lowers the level while every family of sibling cylinders shares a value.
    pub fn minimize(&self) -> LevelFunction {
        let mut f = self.clone();
        let q = 2 * self.rank - 1;
        while f.level > 1 && f.coeffs.chunks(q).all(|c| c.iter().all(|x| x == &c[0])) {
            f.coeffs = f.coeffs.chunks(q).map(|c| c[0].clone()).collect();
            f.level -= 1;
        }
        f
    }

    /// `(g·f)(x) = f(g⁻¹·x)`, minimized.
    pub fn translate(&self, g: &ReducedWord) -> Result<LevelFunction> {
        if g.rank() != self.rank {
            return Err(Error::RankMismatch(g.rank(), self.rank));
        }
        Ok(self.translate_raw(g).minimize())
    }

    /// `g·f` at level `level + |g|`, where it is always representable.
    pub(crate) fn translate_raw(&self, g: &ReducedWord) -> LevelFunction {
        let level = self.level + g.len();
        let gi = g.inverse();
        let coeffs = ReducedWord::all_of_length(self.rank, level)
            .iter()
            .map(|v| {
                // g⁻¹ cancels at most |g| letters of v, so the first `level`
                // letters of g⁻¹·x are determined by v.
                let moved = gi.mul_unchecked(v);
                self.coeffs[moved.prefix(self.level).level_index()].clone()
            })
            .collect();
        LevelFunction {
            rank: self.rank,
            level,
            coeffs,
        }
    }

    pub fn evaluate(&self, x: &BoundaryPoint) -> Result<Int> {
        if x.rank() != self.rank {
            return Err(Error::RankMismatch(x.rank(), self.rank));
        }
        Ok(self.coeffs[x.prefix(self.level).level_index()].clone())
    }

    pub fn scale(&self, c: &Int) -> LevelFunction {
        LevelFunction {
            rank: self.rank,
            level: self.level,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn checked_add(&self, other: &LevelFunction) -> Result<LevelFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &LevelFunction) -> Result<LevelFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &LevelFunction,
        op: impl Fn(&Int, &Int) -> Int,
    ) -> Result<LevelFunction> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let level = self.level.max(other.level);
        let a = self.refine(level)?;
        let b = other.refine(level)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| op(x, y)).collect();
        Ok(LevelFunction {
            rank: self.rank,
            level,
            coeffs,
        })
    }

    /// Sum of all coefficients at the stored level.
    pub fn coefficient_sum(&self) -> Int {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Int::is_zero)
    }

    /// JSON object `{"d", "level", "coeffs"}` with keys in key order.
    pub fn to_json(&self) -> Value {
        let mut coeffs = Map::new();
        for (w, c) in self.entries() {
            coeffs.insert(w.to_string(), int_to_json(c));
        }
        let mut obj = Map::new();
        obj.insert("d".into(), Value::from(self.rank));
        obj.insert("level".into(), Value::from(self.level));
        obj.insert("coeffs".into(), Value::Object(coeffs));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<LevelFunction> {
        let text = v.to_string();
        let field = |k: &str| v.get(k).ok_or_else(|| parse_err(&text, format!("missing {k:?}")));
        let rank = field("d")?
            .as_u64()
            .ok_or_else(|| parse_err(&text, "\"d\" must be an integer"))? as usize;
        let level = field("level")?
            .as_u64()
            .ok_or_else(|| parse_err(&text, "\"level\" must be an integer"))?
            as usize;
        check_rank(rank)?;
        if level == 0 {
            return Err(Error::InvalidLevel { min: 1, got: 0 });
        }
        let obj = field("coeffs")?
            .as_object()
            .ok_or_else(|| parse_err(&text, "\"coeffs\" must be an object"))?;
        let expected = level_count(rank, level);
        if obj.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: obj.len(),
            });
        }
        let mut coeffs = vec![None; expected];
        for (k, c) in obj {
            let w = ReducedWord::parse(rank, k)?;
            if w.len() != level {
                return Err(parse_err(k, format!("key is not a level-{level} word")));
            }
            let c = match c {
                Value::Number(n) => n
                    .to_string()
                    .parse::<Int>()
                    .map_err(|e| parse_err(&n.to_string(), e.to_string()))?,
                _ => return Err(parse_err(k, "coefficient must be an integer")),
            };
            coeffs[w.level_index()] = Some(c);
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.ok_or_else(|| parse_err(&text, "duplicate or missing key")))
            .collect::<Result<Vec<_>>>()?;
        LevelFunction::from_coeffs(rank, level, coeffs)
    }
}

pub(crate) fn int_to_json(c: &Int) -> Value {
    // arbitrary_precision keeps every digit
    Value::Number(c.to_string().parse::<Number>().expect("integer literal"))
}

/// Function equality: both sides are compared at a common level.
impl PartialEq for LevelFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.rank != other.rank {
            return false;
        }
        let level = self.level.max(other.level);
        self.refine(level).map(|f| f.coeffs) == other.refine(level).map(|f| f.coeffs)
    }
}

impl Eq for LevelFunction {}

impl Add for &LevelFunction {
    type Output = LevelFunction;
    /// Panics on rank mismatch; use [`LevelFunction::checked_add`] otherwise.
    fn add(self, rhs: &LevelFunction) -> LevelFunction {
        self.checked_add(rhs).expect("rank mismatch")
    }
}

impl Sub for &LevelFunction {
    type Output = LevelFunction;
    fn sub(self, rhs: &LevelFunction) -> LevelFunction {
        self.checked_sub(rhs).expect("rank mismatch")
    }
}

impl Neg for &LevelFunction {
    type Output = LevelFunction;
    fn neg(self) -> LevelFunction {
        self.scale(&Int::from(-1))
    }
}

impl fmt::Display for LevelFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.minimize();
        let terms: Vec<String> = m
            .entries()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| format!("{c}·p[{w}]"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// The lattice of level-`n` functions constant on every `R_W` class.
///
/// Invariance constraints are equalities between pairs of cylinder values, so
/// the solution lattice has the indicator functions of the connected
/// components of the constraint graph as a ℤ-basis. Components are ordered by
/// their least cylinder.
#[derive(Clone, Debug)]
pub struct InvariantLattice {
    rank: usize,
    level: usize,
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl InvariantLattice {
    pub fn new(level: usize, relation: &RelationSpec) -> Result<InvariantLattice> {
        if level == 0 {
            return Err(Error::InvalidLevel { min: 1, got: 0 });
        }
        let rank = relation.rank();
        let n = level_count(rank, level);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, j) in constraint_pairs(level, relation)? {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                // the smaller index stays the root
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut root_to_comp = vec![usize::MAX; n];
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut component_of = vec![0; n];
        for (i, slot) in component_of.iter_mut().enumerate() {
            let r = find(&mut parent, i);
            if root_to_comp[r] == usize::MAX {
                root_to_comp[r] = components.len();
                components.push(Vec::new());
            }
            *slot = root_to_comp[r];
            components[root_to_comp[r]].push(i);
        }
        Ok(InvariantLattice {
            rank,
            level,
            component_of,
            components,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Component containing the cylinder with the given key index.
    pub fn component_of(&self, index: usize) -> usize {
        self.component_of[index]
    }

    pub fn basis(&self) -> Vec<LevelFunction> {
        (0..self.dim()).map(|k| self.basis_function(k)).collect()
    }

    pub fn basis_function(&self, k: usize) -> LevelFunction {
        let mut coeffs = vec![Int::ZERO; self.component_of.len()];
        for &i in &self.components[k] {
            coeffs[i] = Int::ONE;
        }
        LevelFunction {
            rank: self.rank,
            level: self.level,
            coeffs,
        }
    }

    /// Coordinates of an invariant function in the component basis.
    pub fn coords(&self, f: &LevelFunction) -> Result<Vec<Int>> {
        if f.rank != self.rank {
            return Err(Error::RankMismatch(f.rank, self.rank));
        }
        let f = if f.level > self.level {
            let m = f.minimize();
            if m.level > self.level {
                return Err(Error::InvalidLevel {
                    min: m.level,
                    got: self.level,
                });
            }
            m.refine(self.level)?
        } else {
            f.refine(self.level)?
        };
        let mut out = Vec::with_capacity(self.dim());
        for comp in &self.components {
            let v = &f.coeffs[comp[0]];
            if comp.iter().any(|&i| &f.coeffs[i] != v) {
                let w = ReducedWord::from_level_index(self.rank, self.level, comp[0]);
                return Err(Error::NotInvariant(format!(
                    "values differ on the class of cylinder {w}"
                )));
            }
            out.push(v.clone());
        }
        Ok(out)
    }

    pub fn function(&self, coords: &[Int]) -> Result<LevelFunction> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        let coeffs = self
            .component_of
            .iter()
            .map(|&k| coords[k].clone())
            .collect();
        Ok(LevelFunction {
            rank: self.rank,
            level: self.level,
            coeffs,
        })
    }
}

/// Pairs of level-`n` cylinder indices whose values an `R_W`-invariant
/// function must share.
fn constraint_pairs(level: usize, relation: &RelationSpec) -> Result<Vec<(usize, usize)>> {
    Ok(classes_meeting_level(level, relation)?
        .iter()
        .map(|c| {
            let [x, y] = c.points() else {
                unreachable!("classes_meeting_level yields pairs")
            };
            (x.prefix(level).level_index(), y.prefix(level).level_index())
        })
        .collect())
}

/// The constraint pairs of one level and relation, reusable across many
/// functions.
///
/// Only classes `{g·w^{+∞}, g·w^{−∞}}` with `g` normalized (`|g| ≤ |g·w^k|`
/// for all `k`) and `|g| < level + |w|` need checking: for longer normalized
/// `g` both points share their first `|g| − |w|` letters.
#[derive(Clone, Debug)]
pub struct InvariantChecker {
    rank: usize,
    level: usize,
    pairs: Vec<(usize, usize)>,
}

impl InvariantChecker {
    pub fn new(level: usize, relation: &RelationSpec) -> Result<InvariantChecker> {
        Ok(InvariantChecker {
            rank: relation.rank(),
            level,
            pairs: constraint_pairs(level, relation)?,
        })
    }

    /// Whether `f`, written at this checker's level, is constant on every class.
    pub fn check(&self, f: &LevelFunction) -> Result<bool> {
        if f.rank != self.rank {
            return Err(Error::RankMismatch(f.rank, self.rank));
        }
        if f.level != self.level {
            return Err(Error::InvalidLevel {
                min: self.level,
                got: f.level,
            });
        }
        Ok(self.pairs.iter().all(|&(i, j)| f.coeffs[i] == f.coeffs[j]))
    }
}

/// Whether `f` is constant on every `R_W` class.
pub fn is_r_invariant(f: &LevelFunction, relation: &RelationSpec) -> Result<bool> {
    if f.rank != relation.rank() {
        return Err(Error::RankMismatch(f.rank, relation.rank()));
    }
    InvariantChecker::new(f.level, relation)?.check(f)
}

/// A ℤ-basis of the level-`n` functions constant on every `R_W` class.
pub fn invariant_basis(level: usize, relation: &RelationSpec) -> Result<Vec<LevelFunction>> {
    Ok(InvariantLattice::new(level, relation)?.basis())
}
