//! Finitely presented graded modules and complexes of them.

use std::collections::BTreeSet;

use crate::complex::ComplexStats;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, columns_matrix, gb_of, image_contains, kernel_mod};
use crate::linalg::{piece_matrix, Dense};
use crate::matrix::{FreeModule, GradedMatrix};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::vector::{Term, Vector};

/// `coker(R: F_1 -> F_0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    relations: GradedMatrix,
}

impl PresentedModule {
    pub fn new(relations: GradedMatrix) -> Result<PresentedModule> {
        relations.validate()?;
        Ok(PresentedModule { relations })
    }

    pub(crate) fn new_unchecked(relations: GradedMatrix) -> PresentedModule {
        PresentedModule { relations }
    }

    pub fn free(f: FreeModule) -> PresentedModule {
        PresentedModule { relations: GradedMatrix::zero(FreeModule::zero(), f) }
    }

    pub fn zero() -> PresentedModule {
        PresentedModule::free(FreeModule::zero())
    }

    /// `S/I` for homogeneous generators of `I`.
    pub fn quotient_ring(ring: &Ring, ideal: &[Poly]) -> Result<PresentedModule> {
        let mut degs = Vec::with_capacity(ideal.len());
        for (i, f) in ideal.iter().enumerate() {
            if f.is_zero() {
                degs.push(0);
                continue;
            }
            degs.push(f.homogeneous_degree().ok_or_else(|| Error::validation(format!("generator {i}"), "not homogeneous"))?);
        }
        let gens: Vec<(usize, &Poly)> = ideal.iter().enumerate().filter(|(_, f)| !f.is_zero()).collect();
        let source = FreeModule::new(gens.iter().map(|(i, _)| degs[*i]).collect());
        let cols = gens.iter().map(|(_, f)| Vector::from_coords(ring, std::slice::from_ref(*f))).collect();
        PresentedModule::new(GradedMatrix::new(source, FreeModule::new(vec![0]), cols)?)
    }

    pub fn relations(&self) -> &GradedMatrix {
        &self.relations
    }

    pub fn generators(&self) -> &FreeModule {
        self.relations.target()
    }

    pub fn direct_sum(&self, other: &PresentedModule) -> PresentedModule {
        PresentedModule { relations: self.relations.direct_sum(&other.relations) }
    }

    /// `M(-k)`.
    pub fn shifted(&self, k: i64) -> PresentedModule {
        PresentedModule { relations: self.relations.shifted(k) }
    }

    /// `M ⊗ F` for a free module `F`.
    pub fn tensor_free(&self, ring: &Ring, f: &FreeModule) -> PresentedModule {
        PresentedModule { relations: self.relations.tensor_identity(ring, f) }
    }

    /// `dim M_t`.
    pub fn hilbert(&self, ring: &Ring, t: i64) -> usize {
        self.generators().piece_dim(ring, t) - piece_matrix(ring, &self.relations, t).rank(ring)
    }

    /// Exact: every generator lies in the image of the relations.
    pub fn is_zero(&self, ring: &Ring) -> bool {
        let gb = gb_of(ring, self.generators().degrees(), self.relations.cols());
        (0..self.generators().rank()).all(|i| gb.reduce(ring, &Vector::basis(ring, i)).is_zero())
    }

    /// Whether a vector of the generator module maps to zero in `M`.
    pub fn contains_zero(&self, ring: &Ring, v: &Vector) -> bool {
        gb_of(ring, self.generators().degrees(), self.relations.cols()).reduce(ring, v).is_zero()
    }

    /// Graded-Nakayama minimal generators, as the matrix `F -> F_0` sending
    /// each new generator to its representative.
    pub fn minimal_generator_map(&self, ring: &Ring) -> GradedMatrix {
        let mut flagged: Vec<(Vector, bool)> = self.relations.cols().iter().map(|c| (c.clone(), true)).collect();
        let basis: Vec<Vector> = (0..self.generators().rank()).map(|i| Vector::basis(ring, i)).collect();
        flagged.extend(basis.iter().map(|b| (b.clone(), false)));
        let (_, kept) = buchberger(ring, self.generators().degrees(), &flagged);
        let r = self.relations.ncols();
        let chosen: Vec<Vector> = basis.into_iter().enumerate().filter(|(i, _)| kept[r + i]).map(|(_, b)| b).collect();
        columns_matrix(self.generators(), chosen)
    }

    /// An isomorphic presentation on minimal generators with minimal relations.
    pub fn minimized(&self, ring: &Ring) -> PresentedModule {
        let gens = self.minimal_generator_map(ring);
        let rel = kernel_mod(ring, &gens, Some(&self.relations));
        PresentedModule { relations: rel }
    }

    /// Whether `g` (on generators) descends to a map `self -> other`.
    pub fn map_descends(&self, ring: &Ring, g: &GradedMatrix, other: &PresentedModule) -> bool {
        let moved = g.compose(ring, &self.relations);
        moved.ncols() == 0 || image_contains(ring, &other.relations, None, &moved)
    }

    /// Degree-`t` piece as a quotient space: basis of generators piece and the
    /// span of relations in it.
    pub(crate) fn relation_piece(&self, ring: &Ring, t: i64) -> Dense {
        piece_matrix(ring, &self.relations, t)
    }
}

/// A bounded complex of presented modules with differentials given on
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedComplex {
    lo: i64,
    terms: Vec<PresentedModule>,
    /// `diffs[k]` acts on generators, `G_{lo+k+1} -> G_{lo+k}`.
    diffs: Vec<GradedMatrix>,
    zero: PresentedModule,
}

impl PresentedComplex {
    pub fn new(ring: &Ring, lo: i64, terms: Vec<PresentedModule>, diffs: Vec<GradedMatrix>) -> Result<PresentedComplex> {
        let c = PresentedComplex::new_unchecked(lo, terms, diffs);
        c.validate(ring)?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(lo: i64, terms: Vec<PresentedModule>, diffs: Vec<GradedMatrix>) -> PresentedComplex {
        PresentedComplex { lo, terms, diffs, zero: PresentedModule::zero() }
    }

    /// One module in degree `n`.
    pub fn concentrated(n: i64, m: PresentedModule) -> PresentedComplex {
        PresentedComplex::new_unchecked(n, vec![m], Vec::new())
    }

    /// Checks that differentials carry relations into relations and that
    /// consecutive composites vanish on the cokernels.
    pub fn validate(&self, ring: &Ring) -> Result<()> {
        if self.terms.is_empty() {
            return Ok(());
        }
        if self.diffs.len() + 1 != self.terms.len() {
            return Err(Error::validation("presented complex", "differential count does not match term count"));
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let n = self.lo + k as i64 + 1;
            let src = &self.terms[k + 1];
            let tgt = &self.terms[k];
            if d.source() != src.generators() || d.target() != tgt.generators() {
                return Err(Error::validation(format!("d_{n}"), "twists do not match the generators"));
            }
            d.validate()?;
            if !src.map_descends(ring, d, tgt) {
                return Err(Error::validation(format!("d_{n}"), "does not descend to the cokernels"));
            }
        }
        for k in 1..self.diffs.len() {
            let n = self.lo + k as i64 + 1;
            let comp = self.diffs[k - 1].compose(ring, &self.diffs[k]);
            if !comp.is_zero() && !image_contains(ring, self.terms[k - 1].relations(), None, &comp) {
                return Err(Error::validation(format!("d_{}∘d_{n}", n - 1), "composite is nonzero on the cokernels"));
            }
        }
        Ok(())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn term(&self, n: i64) -> &PresentedModule {
        if n < self.lo || n > self.hi() {
            return &self.zero;
        }
        &self.terms[(n - self.lo) as usize]
    }

    pub fn generators(&self, n: i64) -> &FreeModule {
        self.term(n).generators()
    }

    pub fn diff(&self, n: i64) -> GradedMatrix {
        if n > self.lo && n <= self.hi() {
            return self.diffs[(n - self.lo - 1) as usize].clone();
        }
        GradedMatrix::zero(self.generators(n).clone(), self.generators(n - 1).clone())
    }

    pub fn min_c(&self, ring: &Ring) -> Option<i64> {
        self.degrees().find(|&n| !self.term(n).is_zero(ring))
    }

    pub fn max_c(&self, ring: &Ring) -> Option<i64> {
        self.degrees().rev().find(|&n| !self.term(n).is_zero(ring))
    }

    /// `Z_n`: generators of `{v : ∂v ∈ im R_{n-1}}` inside `G_n`.
    pub fn cycles(&self, ring: &Ring, n: i64) -> GradedMatrix {
        kernel_mod(ring, &self.diff(n), Some(self.term(n - 1).relations()))
    }

    /// `B_n + im R_n` inside `G_n`.
    pub fn boundaries(&self, n: i64) -> GradedMatrix {
        self.diff(n + 1).hstack(self.term(n).relations())
    }

    pub fn homology_vanishes(&self, ring: &Ring, n: i64) -> bool {
        let z = self.cycles(ring, n);
        z.ncols() == 0 || image_contains(ring, &self.boundaries(n), None, &z)
    }

    /// `H_n = Z_n / (B_n + im R_n)` presented on the generators of `Z_n`.
    pub fn homology_presentation(&self, ring: &Ring, n: i64) -> PresentedModule {
        let z = self.cycles(ring, n);
        let rel = kernel_mod(ring, &z, Some(&self.boundaries(n)));
        PresentedModule::new_unchecked(rel).minimized(ring)
    }

    /// Dense bases of cycles and of boundaries-plus-relations in `(G_n)_t`.
    pub(crate) fn cycle_boundary_pieces(&self, ring: &Ring, n: i64, t: i64) -> (Dense, Dense) {
        let gn = self.generators(n).piece_dim(ring, t);
        let d = piece_matrix(ring, &self.diff(n), t);
        let rel_below = self.term(n - 1).relation_piece(ring, t);
        let z = Dense::from_columns(gn, &d.preimage(ring, &rel_below));
        let b = piece_matrix(ring, &self.diff(n + 1), t).hstack(&self.term(n).relation_piece(ring, t));
        (z, b)
    }

    /// `dim H_n(X)_t`.
    pub fn homology_dim(&self, ring: &Ring, n: i64, t: i64) -> usize {
        let (z, b) = self.cycle_boundary_pieces(ring, n, t);
        z.cols - b.rank(ring)
    }

    pub fn stats(&self, ring: &Ring) -> ComplexStats {
        let supph: BTreeSet<i64> = self.degrees().filter(|&n| !self.homology_vanishes(ring, n)).collect();
        let min = supph.first().copied();
        let width = match (supph.first(), supph.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        };
        ComplexStats { min_c: self.min_c(ring), max_c: self.max_c(ring), min, supph, width }
    }
}

/// Builds `id_F ⊗ R` with `F` index major, matching [`FreeModule::tensor`].
pub(crate) fn identity_tensor(ring: &Ring, f: &FreeModule, r: &GradedMatrix) -> GradedMatrix {
    let k = r.nrows();
    let mut cols = Vec::with_capacity(f.rank() * r.ncols());
    for j in 0..f.rank() {
        for c in r.cols() {
            cols.push(Vector::from_terms(
                ring,
                c.terms().iter().map(|t| Term { pos: j * k + t.pos, mono: t.mono.clone(), coef: t.coef }),
            ));
        }
    }
    GradedMatrix::new_unchecked(f.tensor(r.source()), f.tensor(r.target()), cols)
}

/// `Hom(X, M)` for a free complex `X`, reindexed homologically:
/// degree `-i` holds `Hom(X_i, M) = X_i^* ⊗ M`.
pub fn hom_into(ring: &Ring, x: &crate::complex::FreeComplex, m: &PresentedModule) -> PresentedComplex {
    if x.is_zero() {
        return PresentedComplex::new_unchecked(0, Vec::new(), Vec::new());
    }
    let g0 = m.generators();
    let terms = (x.lo()..=x.hi())
        .rev()
        .map(|i| PresentedModule::new_unchecked(identity_tensor(ring, &x.module(i).dual(), m.relations())))
        .collect();
    let diffs = (x.lo()..x.hi())
        .rev()
        .map(|i| x.diff(i + 1).transpose(ring).tensor_identity(ring, g0))
        .collect();
    PresentedComplex::new_unchecked(-x.hi(), terms, diffs)
}

/// `Hom(g, M)` in homological degree `-i`: `Hom(Y_i, M) -> Hom(X_i, M)` on generators.
pub fn hom_map_component(ring: &Ring, g: &GradedMatrix, m: &PresentedModule) -> GradedMatrix {
    g.transpose(ring).tensor_identity(ring, m.generators())
}
