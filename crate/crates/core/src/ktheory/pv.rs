//! K-groups of `C(∂F_d/R_W) ⋊ F_d` from the Pimsner–Voiculescu sequence:
//! `K₀ = coker τ`, `K₁ = ker τ`, with `τ` the map `η` on invariant tuples.
//!
//! Level `N` contributes the group
//! `P_N = L_N / (τ(L_N^d) ∩ L_N)`, where `L_N` is the lattice of invariant
//! level-`N` functions. Refinement induces maps `P_N → P_{N+1}` whose direct
//! limit is `coker τ`; the computation stops once two consecutive maps are
//! isomorphisms carrying marked classes to marked classes.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use serde_json::{Map, Value};

use crate::clopen::{int_to_json, is_r_invariant, InvariantLattice, LevelFunction};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::quotient::RelationSpec;
use crate::words::ReducedWord;

use super::cache::{CacheKey, MatrixCache};
use super::eta::tau_between;
use super::hermite::{kernel_lattice, solve_integer};
use super::matrix::IntMatrix;
use super::presentation::AbelianPresentation;
use super::smith::{smith_normal_form, SmithForm};

#[derive(Clone, Copy, Default)]
pub struct PvOptions<'a> {
    pub cache: Option<&'a dyn MatrixCache>,
    /// Checked between levels.
    pub cancel: Option<&'a AtomicBool>,
}

/// How `unit` and `marked` coordinates are expressed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinates {
    /// In the listed marked classes, which form a basis of `K₀`.
    MarkedBasis(Vec<String>),
    /// Smith normal-form coordinates: torsion coordinates first, then free.
    NormalForm,
}

#[derive(Clone, Debug)]
pub struct LevelSummary {
    pub level: usize,
    pub lattice_rank: usize,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    /// Whether the map from the previous level is an isomorphism preserving marks.
    pub iso_from_previous: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct KGroups {
    pub rank: usize,
    pub relation: RelationSpec,
    pub level_used: usize,
    pub stabilized: bool,
    pub k0: AbelianPresentation,
    pub coordinates: Coordinates,
    pub unit: Vec<Int>,
    /// `None` when the unit has infinite order.
    pub unit_order: Option<Int>,
    /// Marked classes other than the unit, in `coordinates`.
    pub marked: BTreeMap<String, Vec<Int>>,
    pub k1_rank: usize,
    /// `ker τ` at `level_used`, one `d`-tuple per basis vector.
    pub k1_basis: Vec<Vec<LevelFunction>>,
    pub levels: Vec<LevelSummary>,
}

struct Level {
    lattice: InvariantLattice,
    tau: IntMatrix,
    /// Component of `L_N` containing each component of `L_{N+1}`.
    parent: Vec<usize>,
    group: AbelianPresentation,
}

struct Ctx<'a> {
    relation: &'a RelationSpec,
    relation_text: String,
    opts: PvOptions<'a>,
}

impl Ctx<'_> {
    fn cached(
        &self,
        level: usize,
        role: &'static str,
        matrix: &IntMatrix,
        valid: impl Fn(&[IntMatrix]) -> bool,
        compute: impl FnOnce() -> Vec<IntMatrix>,
    ) -> Vec<IntMatrix> {
        let key = CacheKey {
            rank: self.relation.rank(),
            relation: &self.relation_text,
            level,
            role,
            matrix,
        };
        if let Some(c) = self.opts.cache {
            if let Some(v) = c.load(&key) {
                if valid(&v) {
                    return v;
                }
            }
        }
        let v = compute();
        if let Some(c) = self.opts.cache {
            c.store(&key, &v);
        }
        v
    }

    fn kernel(&self, level: usize, role: &'static str, a: &IntMatrix) -> IntMatrix {
        let valid = |v: &[IntMatrix]| {
            v.len() == 1
                && v[0].rows() == a.cols()
                && a.checked_mul(&v[0]).is_ok_and(|p| p.is_zero())
        };
        self.cached(level, role, a, valid, || vec![kernel_lattice(a)])
            .pop()
            .expect("one matrix")
    }

    fn smith(&self, level: usize, a: &IntMatrix) -> SmithForm {
        let valid = |v: &[IntMatrix]| v.len() == 5 && from_parts(v.to_vec()).verify(a).is_ok();
        let parts = self.cached(level, "presentation", a, valid, || {
            let s = smith_normal_form(a);
            vec![s.u, s.u_inv, s.d, s.v, s.v_inv]
        });
        from_parts(parts)
    }

    fn check_cancel(&self) -> Result<()> {
        match self.opts.cancel {
            Some(c) if c.load(Ordering::Relaxed) => Err(Error::Interrupted),
            _ => Ok(()),
        }
    }

    fn build_level(&self, lattice: InvariantLattice, next: &InvariantLattice) -> Result<Level> {
        let n = lattice.level();
        let tau = tau_between(&lattice, next)?;
        let parent = parents(&lattice, next)?;

        // τ(t) lies in L_N iff its coordinates agree across each fiber of
        // the refinement L_N → L_{N+1}.
        let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); lattice.dim()];
        for (c, &p) in parent.iter().enumerate() {
            fibers[p].push(c);
        }
        let mut diff_rows = Vec::new();
        for f in &fibers {
            for &c in &f[1..] {
                let r: Vec<Int> = tau.row(c).iter().zip(tau.row(f[0])).map(|(a, b)| a - b).collect();
                diff_rows.push(r);
            }
        }
        let diff = if diff_rows.is_empty() {
            IntMatrix::zeros(0, tau.cols())
        } else {
            IntMatrix::from_rows(diff_rows)?
        };
        let k = self.kernel(n, "fiber-kernel", &diff);
        let heads: Vec<usize> = fibers.iter().map(|f| f[0]).collect();
        let relations = &tau.select_rows(&heads) * &k;
        let smith = self.smith(n, &relations);
        let group = AbelianPresentation::from_smith(relations, smith);
        Ok(Level {
            lattice,
            tau,
            parent,
            group,
        })
    }
}

fn from_parts(mut v: Vec<IntMatrix>) -> SmithForm {
    let v_inv = v.pop().expect("five parts");
    let vv = v.pop().expect("five parts");
    let d = v.pop().expect("five parts");
    let u_inv = v.pop().expect("five parts");
    let u = v.pop().expect("five parts");
    let k = d.rows().min(d.cols());
    let invariant_factors = (0..k).map(|i| d.get(i, i).clone()).collect();
    SmithForm {
        u,
        u_inv,
        d,
        v: vv,
        v_inv,
        invariant_factors,
    }
}

fn parents(coarse: &InvariantLattice, fine: &InvariantLattice) -> Result<Vec<usize>> {
    let rank = coarse.rank();
    let mut parent = Vec::with_capacity(fine.dim());
    for comp in fine.components() {
        let mut p = None;
        for &i in comp {
            let w = ReducedWord::from_level_index(rank, fine.level(), i);
            let c = coarse.component_of(w.prefix(coarse.level()).level_index());
            if p.is_some_and(|q| q != c) {
                return Err(Error::Internal(format!(
                    "level-{} class of {w} meets two level-{} classes",
                    fine.level(),
                    coarse.level()
                )));
            }
            p = Some(c);
        }
        parent.push(p.expect("nonempty component"));
    }
    Ok(parent)
}

/// Named level-1 functions tracked through the computation.
fn mark_candidates(relation: &RelationSpec) -> Result<Vec<(String, LevelFunction)>> {
    let rank = relation.rank();
    let mut out = vec![("unit".to_string(), LevelFunction::constant(rank, 1))];
    for i in 0..rank {
        let s = ReducedWord::generator(rank, i);
        out.push((format!("q[{s}]"), LevelFunction::cylinder_q(&s)?));
    }
    if let Some(sub) = relation.letter_subset() {
        if sub.len() < rank {
            for i in (0..rank).filter(|i| !sub.contains(i)) {
                let s = ReducedWord::generator(rank, i);
                out.push((format!("p[{s}]"), LevelFunction::cylinder_p(&s)?));
            }
        }
    }
    out.retain(|(_, f)| is_r_invariant(f, relation).unwrap_or(false));
    Ok(out)
}

/// `{[1], [p[s]] (s ∉ W), [q[t]] (t ∈ W′)}` with `W′` = `W` minus its largest
/// letter, or `{[q[s]]}` for `W = S`.
fn marked_basis_names(relation: &RelationSpec) -> Option<Vec<String>> {
    let rank = relation.rank();
    let sub = relation.letter_subset()?;
    let name = |i: usize| ReducedWord::generator(rank, i).to_string();
    if sub.len() == rank {
        return Some((0..rank).map(|i| format!("q[{}]", name(i))).collect());
    }
    if sub.is_empty() {
        return None;
    }
    let mut out = vec!["unit".to_string()];
    out.extend((0..rank).filter(|i| !sub.contains(i)).map(|i| format!("p[{}]", name(i))));
    out.extend(sub[..sub.len() - 1].iter().map(|&i| format!("q[{}]", name(i))));
    Some(out)
}

/// Matrix of `P_N → P_{N+1}` in normal-form coordinates.
fn induced_map(from: &Level, to: &Level) -> Result<IntMatrix> {
    let cols = (0..from.group.nf_dim())
        .map(|k| {
            let g = from.group.generator(k);
            let fine: Vec<Int> = from.parent.iter().map(|&p| g[p].clone()).collect();
            to.group.normal_form(&fine)
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_columns(to.group.nf_dim(), &cols)
}

fn marks_preserved(phi: &IntMatrix, from: &Level, to: &Level) -> Result<bool> {
    for (name, y) in from.group.marked() {
        let Some(z) = to.group.marked().get(name) else {
            return Ok(false);
        };
        if &to.group.reduce_nf(&phi.mul_vec(y)?) != z {
            return Ok(false);
        }
    }
    Ok(from.group.marked().len() == to.group.marked().len())
}

/// Computes `K₀` (with marked classes) and `K₁` for `R_W`, levels `1..=max_level`.
pub fn pv_k_groups(relation: &RelationSpec, max_level: usize, opts: PvOptions<'_>) -> Result<KGroups> {
    if max_level < 2 {
        return Err(Error::InvalidLevel {
            min: 2,
            got: max_level,
        });
    }
    let ctx = Ctx {
        relation,
        relation_text: relation.to_string(),
        opts,
    };
    let marks = mark_candidates(relation)?;
    let mut levels: Vec<Level> = Vec::new();
    let mut summaries: Vec<LevelSummary> = Vec::new();
    let mut lattice = InvariantLattice::new(1, relation)?;
    let mut stabilized = false;
    for n in 1..=max_level {
        ctx.check_cancel()?;
        let next = InvariantLattice::new(n + 1, relation)?;
        let mut level = ctx.build_level(lattice, &next)?;
        for (name, f) in &marks {
            let x = level.lattice.coords(f)?;
            level.group.set_marked(name.clone(), &x)?;
        }
        let iso = match levels.last() {
            Some(prev) => {
                let phi = induced_map(prev, &level)?;
                Some(prev.group.is_isomorphism_onto(&phi, &level.group) && marks_preserved(&phi, prev, &level)?)
            }
            None => None,
        };
        summaries.push(LevelSummary {
            level: n,
            lattice_rank: level.lattice.dim(),
            free_rank: level.group.free_rank(),
            torsion: level.group.torsion(),
            iso_from_previous: iso,
        });
        levels.push(level);
        lattice = next;
        let k = summaries.len();
        if k >= 3 && summaries[k - 1].iso_from_previous == Some(true) && summaries[k - 2].iso_from_previous == Some(true) {
            stabilized = true;
            break;
        }
    }
    let top = levels.pop().expect("at least two levels");
    finish(&ctx, top, stabilized, summaries)
}

type Convert = Box<dyn Fn(&[Int]) -> Result<Vec<Int>>>;

fn finish(ctx: &Ctx<'_>, top: Level, stabilized: bool, levels: Vec<LevelSummary>) -> Result<KGroups> {
    let relation = ctx.relation;
    let rank = relation.rank();
    let n = top.lattice.level();
    let group = top.group;
    let nf = group.marked().clone();

    let mut coordinates = Coordinates::NormalForm;
    let mut convert: Convert = Box::new(|y| Ok(y.to_vec()));
    if let Some(names) = marked_basis_names(relation) {
        if group.torsion().is_empty() && names.len() == group.nf_dim() && names.iter().all(|s| nf.contains_key(s)) {
            let cols: Vec<Vec<Int>> = names.iter().map(|s| nf[s].clone()).collect();
            let b = IntMatrix::from_columns(group.nf_dim(), &cols)?;
            if b.determinant()?.abs().is_one() {
                coordinates = Coordinates::MarkedBasis(names);
                convert = Box::new(move |y| {
                    solve_integer(&b, y)?
                        .ok_or_else(|| Error::Internal("unimodular system without solution".into()))
                });
            }
        }
    }
    let unit_nf = nf.get("unit").cloned().ok_or_else(|| Error::Internal("unit not marked".into()))?;
    let unit_order = group.order(&unit_nf);
    let unit = convert(&unit_nf)?;
    let marked = nf
        .iter()
        .filter(|(k, _)| k.as_str() != "unit")
        .map(|(k, y)| Ok((k.clone(), convert(y)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;

    let ker = ctx.kernel(n, "tau-kernel", &top.tau);
    let dim = top.lattice.dim();
    let k1_basis = ker
        .columns()
        .iter()
        .map(|c| c.chunks(dim).map(|x| top.lattice.function(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    Ok(KGroups {
        rank,
        relation: relation.clone(),
        level_used: n,
        stabilized,
        k0: group,
        coordinates,
        unit,
        unit_order,
        marked,
        k1_rank: ker.cols(),
        k1_basis,
        levels,
    })
}

impl KGroups {
    /// The K-group report; key order is fixed.
    pub fn to_json(&self) -> Value {
        let ints = |v: &[Int]| Value::Array(v.iter().map(int_to_json).collect());
        let mut o = Map::new();
        o.insert("d".into(), Value::from(self.rank));
        let relation = if self.relation.is_empty() {
            Value::from("none")
        } else {
            Value::Array(self.relation.words().iter().map(|w| Value::from(w.to_string())).collect())
        };
        o.insert("relation".into(), relation);
        o.insert("level_used".into(), Value::from(self.level_used));
        o.insert("stabilized".into(), Value::from(self.stabilized));
        let mut k0 = Map::new();
        k0.insert("free_rank".into(), Value::from(self.k0.free_rank()));
        k0.insert("torsion".into(), ints(&self.k0.torsion()));
        o.insert("K0".into(), Value::Object(k0));
        o.insert("unit".into(), ints(&self.unit));
        let marked = self.marked.iter().map(|(k, v)| (k.clone(), ints(v))).collect();
        o.insert("marked".into(), Value::Object(marked));
        let mut k1 = Map::new();
        k1.insert("free_rank".into(), Value::from(self.k1_rank));
        o.insert("K1".into(), Value::Object(k1));
        Value::Object(o)
    }

    /// Class of `Σ c_i·x_i` for marked names `x_i`, in `coordinates`; reduced
    /// modulo torsion when coordinates are normal-form.
    pub fn combine(&self, terms: &[(&str, Int)]) -> Result<Vec<Int>> {
        let dim = self.unit.len();
        let mut acc = vec![Int::ZERO; dim];
        for (name, c) in terms {
            let v = if *name == "unit" {
                &self.unit
            } else {
                self.marked
                    .get(*name)
                    .ok_or_else(|| Error::Precondition(format!("{name} is not marked")))?
            };
            for (a, x) in acc.iter_mut().zip(v) {
                a.add_mul(c, x);
            }
        }
        Ok(match self.coordinates {
            Coordinates::NormalForm => self.k0.reduce_nf(&acc),
            Coordinates::MarkedBasis(_) => acc,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktheory::cache::MemoryCache;

    fn run(d: usize, w: &str) -> KGroups {
        let spec = RelationSpec::parse(d, w).unwrap();
        pv_k_groups(&spec, 5, PvOptions::default()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn full_relation_rank_two() {
        let k = run(2, "S");
        assert!(k.stabilized);
        assert_eq!(k.k0.free_rank(), 2);
        assert!(k.k0.torsion().is_empty());
        assert_eq!(k.coordinates, Coordinates::MarkedBasis(vec!["q[a]".into(), "q[b]".into()]));
        assert_eq!(k.unit, ints(&[1, 1]));
        assert_eq!(k.k1_rank, 2);
    }

    #[test]
    fn single_letter_rank_two() {
        let k = run(2, "a");
        assert!(k.stabilized);
        assert_eq!(k.k0.free_rank(), 2);
        assert_eq!(k.unit, ints(&[1, 0]));
        assert_eq!(k.k1_rank, 2);
        // (d − ♯W − 1)[1] = −Σ_{s∈W} [q[s]]
        assert_eq!(k.combine(&[("unit", Int::ZERO), ("q[a]", Int::ONE)]).unwrap(), ints(&[0, 0]));
    }

    #[test]
    fn empty_relation_unit_has_finite_order() {
        let k = run(2, "none");
        assert!(k.stabilized);
        assert!(k.unit_order.is_some());
        let k = run(3, "none");
        assert!(k.stabilized);
        assert!(k.unit_order.is_some());
    }

    #[test]
    fn report_schema() {
        let j = run(2, "S").to_json();
        let keys: Vec<&String> = j.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["d", "relation", "level_used", "stabilized", "K0", "unit", "marked", "K1"]);
        assert_eq!(j["relation"], serde_json::json!(["a", "b"]));
        assert_eq!(run(2, "none").to_json()["relation"], "none");
    }

    #[test]
    fn cache_reproduces_report() {
        let spec = RelationSpec::parse(2, "a").unwrap();
        let cache = MemoryCache::new();
        let opts = PvOptions {
            cache: Some(&cache),
            cancel: None,
        };
        let first = pv_k_groups(&spec, 4, opts).unwrap().to_json();
        assert!(!cache.is_empty());
        let second = pv_k_groups(&spec, 4, opts).unwrap().to_json();
        assert_eq!(first, second);
    }

    #[test]
    fn cancel_and_level_errors() {
        let spec = RelationSpec::parse(2, "S").unwrap();
        let flag = AtomicBool::new(true);
        let opts = PvOptions {
            cache: None,
            cancel: Some(&flag),
        };
        assert_eq!(pv_k_groups(&spec, 4, opts).unwrap_err(), Error::Interrupted);
        assert!(matches!(
            pv_k_groups(&spec, 1, PvOptions::default()),
            Err(Error::InvalidLevel { .. })
        ));
        let k = pv_k_groups(&spec, 2, PvOptions::default()).unwrap();
        assert!(!k.stabilized);
        assert_eq!(k.level_used, 2);
    }
}
