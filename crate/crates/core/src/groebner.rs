//! Homogeneous Buchberger for submodules of twisted free modules, with
//! normal forms, syzygies, lifting and minimal generators built on top.
//!
//! Everything is homogeneous, so pairs and input generators are processed
//! degree by degree. At the moment a generator of degree `d` is examined the
//! current basis is a Gröbner basis up to degree `d` of what has been kept so
//! far, which is what makes the graded Nakayama pruning exact.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{FreeModule, GradedMatrix};
use crate::ring::{Mono, Ring};
use crate::vector::{term_cmp, Term, Vector};

/// Generators of a submodule of `ambient`, optionally flagged as a Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleBasis {
    pub ambient: FreeModule,
    pub gens: Vec<Vector>,
    pub groebner: bool,
}

impl SubmoduleBasis {
    pub fn new(ambient: FreeModule, gens: Vec<Vector>) -> SubmoduleBasis {
        SubmoduleBasis { ambient, gens, groebner: false }
    }

    pub fn from_matrix(m: &GradedMatrix) -> SubmoduleBasis {
        SubmoduleBasis::new(m.target().clone(), m.cols().to_vec())
    }

    fn check(&self) -> Result<()> {
        for (i, g) in self.gens.iter().enumerate() {
            if let Some(p) = g.max_pos() {
                if p >= self.ambient.rank() {
                    return Err(Error::AmbientMismatch(format!("generator {i} lies outside the ambient module")));
                }
            }
            if !g.is_homogeneous(self.ambient.degrees()) {
                return Err(Error::validation("submodule", format!("generator {i} is not homogeneous")));
            }
        }
        Ok(())
    }

    /// The generators as columns of a matrix into the ambient module.
    pub fn to_matrix(&self) -> GradedMatrix {
        let degs = self
            .gens
            .iter()
            .map(|g| g.homogeneous_degree(self.ambient.degrees()).unwrap_or(0))
            .collect();
        GradedMatrix::new_unchecked(FreeModule::new(degs), self.ambient.clone(), self.gens.clone())
    }
}

/// A reduced, monic Gröbner basis in position-over-term order.
#[derive(Clone, Debug)]
pub(crate) struct Gb {
    basis: Vec<Vector>,
    leads: Vec<(usize, Mono)>,
}

impl Gb {
    fn divisor(&self, t: &Term) -> Option<usize> {
        self.leads.iter().position(|(p, m)| *p == t.pos && m.divides(&t.mono))
    }

    /// Fully reduced remainder of `v`.
    pub(crate) fn reduce(&self, ring: &Ring, v: &Vector) -> Vector {
        reduce_with(ring, &self.basis, &self.leads, v.clone())
    }

    /// Reduces leading terms until the lead sits at a position `>= stop`
    /// (or the vector vanishes). Returns `None` when an irreducible lead at a
    /// position `< stop` is met.
    fn top_reduce_until(&self, ring: &Ring, v: &Vector, stop: usize) -> Option<Vector> {
        let mut cur = v.clone();
        while let Some(lt) = cur.lead().cloned() {
            if lt.pos >= stop {
                break;
            }
            let i = self.divisor(&lt)?;
            let q = self.leads[i].1.quotient_of(&lt.mono);
            cur = cur.add_scaled(ring, ring.neg(lt.coef), &q, &self.basis[i]);
        }
        Some(cur)
    }

    pub(crate) fn basis(&self) -> &[Vector] {
        &self.basis
    }
}

fn reduce_with(ring: &Ring, basis: &[Vector], leads: &[(usize, Mono)], v: Vector) -> Vector {
    let mut cur = v;
    let mut rem: Vec<Term> = Vec::new();
    while let Some(lt) = cur.lead().cloned() {
        match leads.iter().position(|(p, m)| *p == lt.pos && m.divides(&lt.mono)) {
            Some(i) => {
                let q = leads[i].1.quotient_of(&lt.mono);
                cur = cur.add_scaled(ring, ring.neg(lt.coef), &q, &basis[i]);
            }
            None => rem.push(cur.pop_lead().unwrap()),
        }
    }
    rem.reverse();
    Vector::from_sorted(rem)
}

#[derive(Default)]
struct Batch {
    pairs: Vec<(usize, usize)>,
    forced: Vec<usize>,
    optional: Vec<usize>,
}

/// Runs Buchberger on `gens` (each flagged forced or optional) and reports
/// which generators were kept: forced ones always, optional ones only when
/// they were not already in the span of everything kept before them.
pub(crate) fn buchberger(ring: &Ring, degrees: &[i64], gens: &[(Vector, bool)]) -> (Gb, Vec<bool>) {
    let mut queue: BTreeMap<i64, Batch> = BTreeMap::new();
    let mut kept = vec![false; gens.len()];
    for (i, (g, forced)) in gens.iter().enumerate() {
        match g.homogeneous_degree(degrees) {
            Some(d) => {
                let b = queue.entry(d).or_default();
                if *forced {
                    b.forced.push(i)
                } else {
                    b.optional.push(i)
                }
            }
            None => {
                assert!(g.is_zero(), "buchberger called with an inhomogeneous generator");
                kept[i] = *forced;
            }
        }
    }

    let mut basis: Vec<Vector> = Vec::new();
    let mut leads: Vec<(usize, Mono)> = Vec::new();

    let insert = |v: Vector, basis: &mut Vec<Vector>, leads: &mut Vec<(usize, Mono)>, queue: &mut BTreeMap<i64, Batch>| {
        let v = v.make_monic(ring);
        let lt = v.lead().unwrap().clone();
        let k = basis.len();
        for (i, (p, m)) in leads.iter().enumerate() {
            if *p == lt.pos {
                let l = ring.lcm(m, &lt.mono);
                queue.entry(l.degree() + degrees[lt.pos]).or_default().pairs.push((i, k));
            }
        }
        leads.push((lt.pos, lt.mono));
        basis.push(v);
    };

    while let Some((_, batch)) = queue.pop_first() {
        for (i, j) in batch.pairs {
            let (pi, mi) = leads[i].clone();
            let (_, mj) = leads[j].clone();
            let l = ring.lcm(&mi, &mj);
            let s = Vector::zero()
                .add_scaled(ring, 1, &mi.quotient_of(&l), &basis[i])
                .add_scaled(ring, ring.neg(1), &mj.quotient_of(&l), &basis[j]);
            debug_assert!(s.lead().is_none_or(|t| t.pos >= pi));
            let r = reduce_with(ring, &basis, &leads, s);
            if !r.is_zero() {
                insert(r, &mut basis, &mut leads, &mut queue);
            }
        }
        for i in batch.forced.into_iter().chain(batch.optional) {
            let r = reduce_with(ring, &basis, &leads, gens[i].0.clone());
            if !r.is_zero() {
                kept[i] = true;
                insert(r, &mut basis, &mut leads, &mut queue);
            } else if gens[i].1 {
                kept[i] = true;
            }
        }
    }

    // reduced basis: drop redundant leads, tail-reduce, sort by lead term
    let mut keep: Vec<usize> = (0..basis.len())
        .filter(|&i| {
            !(0..basis.len()).any(|j| j != i && leads[j].0 == leads[i].0 && leads[j].1.divides(&leads[i].1) && (leads[j].1 != leads[i].1 || j < i))
        })
        .collect();
    keep.sort_by(|&a, &b| term_cmp(leads[a].0, &leads[a].1, leads[b].0, &leads[b].1));
    let min_basis: Vec<Vector> = keep.iter().map(|&i| basis[i].clone()).collect();
    let min_leads: Vec<(usize, Mono)> = keep.iter().map(|&i| leads[i].clone()).collect();
    let mut reduced = Vec::with_capacity(min_basis.len());
    for (idx, g) in min_basis.iter().enumerate() {
        let mut g = g.clone();
        let lt = g.pop_lead().unwrap();
        let others: Vec<Vector> = min_basis.iter().enumerate().filter(|(j, _)| *j != idx).map(|(_, v)| v.clone()).collect();
        let other_leads: Vec<(usize, Mono)> =
            min_leads.iter().enumerate().filter(|(j, _)| *j != idx).map(|(_, v)| v.clone()).collect();
        let mut tail = reduce_with(ring, &others, &other_leads, g).terms().to_vec();
        tail.push(lt);
        reduced.push(Vector::from_sorted(tail));
    }
    (Gb { basis: reduced, leads: min_leads }, kept)
}

pub(crate) fn gb_of(ring: &Ring, degrees: &[i64], gens: &[Vector]) -> Gb {
    let flagged: Vec<(Vector, bool)> = gens.iter().map(|g| (g.clone(), false)).collect();
    buchberger(ring, degrees, &flagged).0
}

pub fn groebner_basis(ring: &Ring, gens: &SubmoduleBasis) -> Result<SubmoduleBasis> {
    gens.check()?;
    let gb = gb_of(ring, gens.ambient.degrees(), &gens.gens);
    Ok(SubmoduleBasis { ambient: gens.ambient.clone(), gens: gb.basis, groebner: true })
}

/// Unique fully reduced remainder of `e` modulo a Gröbner basis.
pub fn normal_form(ring: &Ring, e: &Vector, gb: &SubmoduleBasis) -> Result<Vector> {
    if !gb.groebner {
        return Err(Error::Precondition("normal_form needs a basis flagged Gröbner".into()));
    }
    if e.max_pos().is_some_and(|p| p >= gb.ambient.rank()) {
        return Err(Error::AmbientMismatch("element lies outside the ambient module of the basis".into()));
    }
    let leads = gb.gens.iter().map(|g| {
        let t = g.lead().expect("zero element in Gröbner basis");
        (t.pos, t.mono.clone())
    });
    let leads: Vec<(usize, Mono)> = leads.collect();
    Ok(reduce_with(ring, &gb.gens, &leads, e.clone()))
}

/// A minimal generating subset, chosen greedily in ascending degree (input
/// order within a degree).
pub fn minimal_generators(ring: &Ring, b: &SubmoduleBasis) -> Result<SubmoduleBasis> {
    b.check()?;
    Ok(SubmoduleBasis::new(b.ambient.clone(), prune(ring, b.ambient.degrees(), &b.gens)))
}

pub(crate) fn prune(ring: &Ring, degrees: &[i64], gens: &[Vector]) -> Vec<Vector> {
    let flagged: Vec<(Vector, bool)> = gens.iter().map(|g| (g.clone(), false)).collect();
    let (_, kept) = buchberger(ring, degrees, &flagged);
    order_kept(degrees, gens, &kept)
}

/// Kept generators in the order they were examined (degree, then input order).
pub(crate) fn order_kept(degrees: &[i64], gens: &[Vector], kept: &[bool]) -> Vec<Vector> {
    let mut idx: Vec<usize> = (0..gens.len()).filter(|&i| kept[i] && !gens[i].is_zero()).collect();
    idx.sort_by_key(|&i| (gens[i].homogeneous_degree(degrees).unwrap_or(i64::MIN), i));
    idx.into_iter().map(|i| gens[i].clone()).collect()
}

/// Solves `A x ≡ b (mod im N)` through a Gröbner basis of the graph
/// `{(A c + N d, c)}` in an elimination (position-over-term) order.
#[derive(Clone, Debug)]
pub struct Lifter {
    target_rank: usize,
    source: FreeModule,
    gb: Gb,
}

impl Lifter {
    pub fn new(ring: &Ring, a: &GradedMatrix, modulo: Option<&GradedMatrix>) -> Lifter {
        let r = a.nrows();
        let mut degrees = a.target().degrees().to_vec();
        degrees.extend_from_slice(a.source().degrees());
        let mut gens: Vec<Vector> = a
            .cols()
            .iter()
            .enumerate()
            .map(|(j, c)| c.concat(r, &Vector::basis(ring, j)))
            .collect();
        if let Some(n) = modulo {
            debug_assert_eq!(n.target(), a.target());
            gens.extend(n.cols().iter().cloned());
        }
        Lifter { target_rank: r, source: a.source().clone(), gb: gb_of(ring, &degrees, &gens) }
    }

    /// Some `x` with `A x ≡ b`, or `None` if `b` is not in the image.
    pub fn solve(&self, ring: &Ring, b: &Vector) -> Option<Vector> {
        let rem = self.gb.top_reduce_until(ring, b, self.target_rank)?;
        Some(rem.slice(self.target_rank, self.target_rank + self.source.rank()).neg(ring))
    }

    pub fn contains(&self, ring: &Ring, b: &Vector) -> bool {
        self.gb.top_reduce_until(ring, b, self.target_rank).is_some()
    }

    /// Gröbner generators of `{x : A x ∈ im N}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let r = self.target_rank;
        self.gb
            .basis()
            .iter()
            .filter(|g| g.lead().is_some_and(|t| t.pos >= r))
            .map(|g| g.slice(r, r + self.source.rank()))
            .collect()
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }
}

/// Matrix whose columns minimally generate `{x : A x ∈ im N}` (plain kernel when `N` is absent).
pub fn kernel_mod(ring: &Ring, a: &GradedMatrix, modulo: Option<&GradedMatrix>) -> GradedMatrix {
    let lifter = Lifter::new(ring, a, modulo);
    let gens = prune(ring, a.source().degrees(), &lifter.kernel());
    columns_matrix(a.source(), gens)
}

/// Generators of `ker(m)`; the column degrees make the inclusion degree zero.
pub fn syzygies(ring: &Ring, m: &GradedMatrix) -> GradedMatrix {
    kernel_mod(ring, m, None)
}

/// Wraps homogeneous vectors of `ambient` as the columns of a degree-zero matrix.
pub fn columns_matrix(ambient: &FreeModule, gens: Vec<Vector>) -> GradedMatrix {
    let gens: Vec<Vector> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    let degs = gens.iter().map(|g| g.homogeneous_degree(ambient.degrees()).expect("inhomogeneous column")).collect();
    GradedMatrix::new_unchecked(FreeModule::new(degs), ambient.clone(), gens)
}

/// Solves `A X ≡ B (mod im N)` column by column.
pub fn solve_matrix(ring: &Ring, a: &GradedMatrix, modulo: Option<&GradedMatrix>, b: &GradedMatrix) -> Option<GradedMatrix> {
    let lifter = Lifter::new(ring, a, modulo);
    let cols = b.cols().iter().map(|c| lifter.solve(ring, c)).collect::<Option<Vec<_>>>()?;
    Some(GradedMatrix::new_unchecked(b.source().clone(), a.source().clone(), cols))
}

/// Whether every column of `b` lies in `im a + im modulo`.
pub fn image_contains(ring: &Ring, a: &GradedMatrix, modulo: Option<&GradedMatrix>, b: &GradedMatrix) -> bool {
    let mut gens = a.cols().to_vec();
    if let Some(n) = modulo {
        gens.extend(n.cols().iter().cloned());
    }
    let gb = gb_of(ring, a.target().degrees(), &gens);
    b.cols().iter().all(|c| gb.reduce(ring, c).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn vec_of(r: &Ring, coords: &[&str]) -> Vector {
        let ps: Vec<Poly> = coords.iter().map(|s| Poly::parse(r, s).unwrap()).collect();
        Vector::from_coords(r, &ps)
    }

    #[test]
    fn monomial_generators_are_groebner() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let b = SubmoduleBasis::new(FreeModule::new(vec![0]), vec![vec_of(&r, &["x"]), vec_of(&r, &["y"])]);
        let gb = groebner_basis(&r, &b).unwrap();
        assert!(gb.groebner);
        let mut got: Vec<Vector> = gb.gens.clone();
        got.sort_by_key(|v| v.lead().unwrap().mono.clone());
        assert_eq!(got, vec![vec_of(&r, &["y"]), vec_of(&r, &["x"])]);
    }

    #[test]
    fn empty_submodule() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let gb = groebner_basis(&r, &SubmoduleBasis::new(FreeModule::new(vec![0]), vec![])).unwrap();
        assert!(gb.gens.is_empty());
        let e = vec_of(&r, &["x"]);
        assert_eq!(normal_form(&r, &e, &gb).unwrap(), e);
    }

    #[test]
    fn normal_form_examples() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let amb = FreeModule::new(vec![0]);
        let gx = groebner_basis(&r, &SubmoduleBasis::new(amb.clone(), vec![vec_of(&r, &["x"])])).unwrap();
        assert!(normal_form(&r, &vec_of(&r, &["x*y"]), &gx).unwrap().is_zero());
        assert_eq!(normal_form(&r, &vec_of(&r, &["y"]), &gx).unwrap(), vec_of(&r, &["y"]));
        let gxy = groebner_basis(&r, &SubmoduleBasis::new(amb.clone(), vec![vec_of(&r, &["x+y"])])).unwrap();
        assert!(normal_form(&r, &vec_of(&r, &["x^2+y^2"]), &gxy).unwrap().is_zero());
        assert!(normal_form(&r, &vec_of(&r, &["x", "y"]), &gxy).is_err());
        let unflagged = SubmoduleBasis::new(amb, vec![vec_of(&r, &["x"])]);
        assert!(normal_form(&r, &vec_of(&r, &["x"]), &unflagged).is_err());
    }

    #[test]
    fn syzygy_examples() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let p = |s: &str| Poly::parse(&r, s).unwrap();
        let m = GradedMatrix::from_rows(&r, FreeModule::new(vec![1, 1]), FreeModule::new(vec![0]), &[vec![p("x"), p("y")]]).unwrap();
        let s = syzygies(&r, &m);
        assert_eq!(s.source().degrees(), &[2]);
        assert_eq!(s.col(0), &vec_of(&r, &["y", "x"])); // (-y, x) in char 2
        assert!(m.compose(&r, &s).is_zero());

        let m = GradedMatrix::from_rows(&r, FreeModule::new(vec![1]), FreeModule::new(vec![0]), &[vec![p("x")]]).unwrap();
        assert_eq!(syzygies(&r, &m).ncols(), 0);

        let m = GradedMatrix::from_rows(&r, FreeModule::new(vec![1, 2]), FreeModule::new(vec![0]), &[vec![p("x"), p("x*y")]]).unwrap();
        let s = syzygies(&r, &m);
        assert_eq!(s.source().degrees(), &[2]);
        assert_eq!(s.col(0), &vec_of(&r, &["y", "1"]));
    }

    #[test]
    fn minimal_generator_examples() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let amb = FreeModule::new(vec![0]);
        let b = SubmoduleBasis::new(amb.clone(), vec![vec_of(&r, &["x"]), vec_of(&r, &["x^2"]), vec_of(&r, &["y"])]);
        assert_eq!(minimal_generators(&r, &b).unwrap().gens, vec![vec_of(&r, &["x"]), vec_of(&r, &["y"])]);
        let b = SubmoduleBasis::new(amb, vec![vec_of(&r, &["x+y"])]);
        assert_eq!(minimal_generators(&r, &b).unwrap().gens, vec![vec_of(&r, &["x+y"])]);
        let amb2 = FreeModule::new(vec![1, 2]);
        let b = SubmoduleBasis::new(amb2, vec![vec_of(&r, &["y", "1"]), vec_of(&r, &["x*y", "x"])]);
        assert_eq!(minimal_generators(&r, &b).unwrap().gens, vec![vec_of(&r, &["y", "1"])]);
    }

    #[test]
    fn lifter_solves_and_rejects() {
        let r = Ring::standard(3, &["x", "y"]).unwrap();
        let p = |s: &str| Poly::parse(&r, s).unwrap();
        let a = GradedMatrix::from_rows(&r, FreeModule::new(vec![1, 1]), FreeModule::new(vec![0]), &[vec![p("x"), p("y")]]).unwrap();
        let l = Lifter::new(&r, &a, None);
        let b = vec_of(&r, &["x^2 + 2*x*y + y^2"]);
        let x = l.solve(&r, &b).unwrap();
        assert_eq!(a.apply(&r, &x), b);
        assert!(l.solve(&r, &vec_of(&r, &["1"])).is_none());
        // modulo N
        let n = GradedMatrix::from_rows(&r, FreeModule::new(vec![0]), FreeModule::new(vec![0]), &[vec![p("1")]]).unwrap();
        let l = Lifter::new(&r, &a, Some(&n));
        assert!(l.solve(&r, &vec_of(&r, &["1"])).is_some());
    }
}
