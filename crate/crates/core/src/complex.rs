//! Bounded chain complexes of twisted free modules and chain maps between them.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{piece_matrix, Dense};
use crate::matrix::{FreeModule, GradedMatrix};
use crate::presented::{PresentedComplex, PresentedModule};
use crate::ring::Ring;

/// `X_lo <- X_{lo+1} <- ... <- X_hi` with degree-zero differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    lo: i64,
    modules: Vec<FreeModule>,
    /// `diffs[k]` is `∂_{lo+k+1}: X_{lo+k+1} -> X_{lo+k}`.
    diffs: Vec<GradedMatrix>,
    zero: FreeModule,
}

impl FreeComplex {
    /// Validates shapes, homogeneity and `∂∂ = 0`.
    pub fn new(ring: &Ring, lo: i64, modules: Vec<FreeModule>, diffs: Vec<GradedMatrix>) -> Result<FreeComplex> {
        let c = FreeComplex::new_unchecked(lo, modules, diffs);
        c.validate(ring)?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(lo: i64, modules: Vec<FreeModule>, diffs: Vec<GradedMatrix>) -> FreeComplex {
        debug_assert!(modules.is_empty() && diffs.is_empty() || diffs.len() + 1 == modules.len());
        FreeComplex { lo, modules, diffs, zero: FreeModule::zero() }
    }

    /// Builds from differentials `∂_{lo+1}, ∂_{lo+2}, ...`.
    pub fn from_diffs(ring: &Ring, lo: i64, diffs: Vec<GradedMatrix>) -> Result<FreeComplex> {
        let Some(first) = diffs.first() else {
            return Err(Error::validation("complex", "no differentials given"));
        };
        let mut modules = vec![first.target().clone()];
        modules.extend(diffs.iter().map(|d| d.source().clone()));
        FreeComplex::new(ring, lo, modules, diffs)
    }

    /// The free module `f` placed in homological degree `n`.
    pub fn concentrated(n: i64, f: FreeModule) -> FreeComplex {
        FreeComplex::new_unchecked(n, vec![f], Vec::new())
    }

    pub fn zero() -> FreeComplex {
        FreeComplex::new_unchecked(0, Vec::new(), Vec::new())
    }

    pub fn validate(&self, ring: &Ring) -> Result<()> {
        if self.modules.is_empty() {
            return if self.diffs.is_empty() { Ok(()) } else { Err(Error::validation("complex", "differentials without terms")) };
        }
        if self.diffs.len() + 1 != self.modules.len() {
            return Err(Error::validation("complex", "differential count does not match term count"));
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let n = self.lo + k as i64 + 1;
            if d.source() != &self.modules[k + 1] || d.target() != &self.modules[k] {
                return Err(Error::validation(format!("d_{n}"), "source/target twists do not match the terms"));
            }
            d.validate().map_err(|e| relocate(e, &format!("d_{n}")))?;
        }
        for k in 1..self.diffs.len() {
            let n = self.lo + k as i64 + 1;
            if !self.diffs[k - 1].compose(ring, &self.diffs[k]).is_zero() {
                return Err(Error::validation(format!("d_{}∘d_{n}", n - 1), "composite of consecutive differentials is nonzero"));
            }
        }
        Ok(())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored degree (`lo - 1` for the empty complex).
    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn module(&self, n: i64) -> &FreeModule {
        if n < self.lo || n > self.hi() {
            return &self.zero;
        }
        &self.modules[(n - self.lo) as usize]
    }

    /// `∂_n: X_n -> X_{n-1}` (a zero matrix outside the stored range).
    pub fn diff(&self, n: i64) -> GradedMatrix {
        if n > self.lo && n <= self.hi() {
            return self.diffs[(n - self.lo - 1) as usize].clone();
        }
        GradedMatrix::zero(self.module(n).clone(), self.module(n - 1).clone())
    }

    pub fn diff_ref(&self, n: i64) -> Option<&GradedMatrix> {
        (n > self.lo && n <= self.hi()).then(|| &self.diffs[(n - self.lo - 1) as usize])
    }

    /// Lowest degree with a nonzero term.
    pub fn min_c(&self) -> Option<i64> {
        self.degrees().find(|&n| !self.module(n).is_zero())
    }

    pub fn max_c(&self) -> Option<i64> {
        self.degrees().rev().find(|&n| !self.module(n).is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.min_c().is_none()
    }

    /// Same complex with zero terms stripped from both ends.
    pub fn trimmed(&self) -> FreeComplex {
        let (Some(a), Some(b)) = (self.min_c(), self.max_c()) else { return FreeComplex::zero() };
        self.restrict(a, b)
    }

    /// Terms in `[a, b]` only (brutal truncation, extended by zeros if needed).
    pub fn restrict(&self, a: i64, b: i64) -> FreeComplex {
        if b < a {
            return FreeComplex::zero();
        }
        let modules = (a..=b).map(|n| self.module(n).clone()).collect();
        let diffs = (a + 1..=b).map(|n| self.diff(n)).collect();
        FreeComplex::new_unchecked(a, modules, diffs)
    }

    /// `(Σ^k X)_n = X_{n+k}` with differentials multiplied by `(-1)^k`.
    pub fn shift(&self, ring: &Ring, k: i64) -> FreeComplex {
        let sign = if k.rem_euclid(2) == 1 { ring.neg(1) } else { 1 };
        FreeComplex::new_unchecked(
            self.lo - k,
            self.modules.clone(),
            self.diffs.iter().map(|d| d.scale(ring, sign)).collect(),
        )
    }

    /// `X'_n = X_{n+k}` with the differentials untouched.
    pub fn relabeled(&self, k: i64) -> FreeComplex {
        FreeComplex::new_unchecked(self.lo - k, self.modules.clone(), self.diffs.clone())
    }

    /// Internal-degree twist: every generator degree raised by `k`.
    pub fn twisted(&self, k: i64) -> FreeComplex {
        FreeComplex::new_unchecked(
            self.lo,
            self.modules.iter().map(|m| m.shifted(k)).collect(),
            self.diffs.iter().map(|d| d.shifted(k)).collect(),
        )
    }

    /// `X ⊗ F` for a free module `F` (termwise, `X` index major).
    pub fn tensor_free(&self, ring: &Ring, f: &FreeModule) -> FreeComplex {
        FreeComplex::new_unchecked(
            self.lo,
            self.modules.iter().map(|m| m.tensor(f)).collect(),
            self.diffs.iter().map(|d| d.tensor_identity(ring, f)).collect(),
        )
    }

    /// `Hom(X, S)` reindexed homologically: `(X^*)_n = Hom(X_{-n}, S)`, so
    /// `H_{-i}(X^*)` is the `i`-th cohomology.
    pub fn dual(&self, ring: &Ring) -> FreeComplex {
        if self.modules.is_empty() {
            return FreeComplex::zero();
        }
        let modules = self.modules.iter().rev().map(|m| m.dual()).collect();
        let diffs = self.diffs.iter().rev().map(|d| d.transpose(ring)).collect();
        FreeComplex::new_unchecked(-self.hi(), modules, diffs)
    }

    /// Every generator degree appearing anywhere in the complex.
    pub fn generator_degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.modules.iter().flat_map(|m| m.degrees().iter().copied())
    }

    /// `dim H_n(X)_t`.
    pub fn homology_dim(&self, ring: &Ring, n: i64, t: i64) -> usize {
        let dn = piece_matrix(ring, &self.diff(n), t);
        let dn1 = piece_matrix(ring, &self.diff(n + 1), t);
        let ker = dn.cols - dn.rank(ring);
        ker - dn1.rank(ring)
    }

    /// Whether `H_n(X) = 0`, decided exactly by a Gröbner membership test.
    pub fn homology_vanishes(&self, ring: &Ring, n: i64) -> bool {
        self.as_presented().homology_vanishes(ring, n)
    }

    /// `H_n(X)` as `coker` of a graded matrix.
    pub fn homology_presentation(&self, ring: &Ring, n: i64) -> PresentedModule {
        self.as_presented().homology_presentation(ring, n)
    }

    pub fn as_presented(&self) -> PresentedComplex {
        PresentedComplex::new_unchecked(
            self.lo,
            self.modules.iter().map(|m| PresentedModule::free(m.clone())).collect(),
            self.diffs.clone(),
        )
    }

    pub fn stats(&self, ring: &Ring) -> ComplexStats {
        self.as_presented().stats(ring)
    }

    /// `Σ (-1)^n dim (X_n)_t`.
    pub fn euler_characteristic(&self, ring: &Ring, t: i64) -> i64 {
        self.degrees()
            .map(|n| {
                let d = self.module(n).piece_dim(ring, t) as i64;
                if n.rem_euclid(2) == 0 { d } else { -d }
            })
            .sum()
    }

    /// Internal degrees in which some term has a generator, widened by `pad`.
    pub fn twist_window(&self, pad: i64) -> Option<(i64, i64)> {
        let lo = self.generator_degrees().min()?;
        let hi = self.generator_degrees().max()?;
        Some((lo, hi + pad))
    }

    /// Whether no differential has an entry with a nonzero constant term.
    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(|d| !d.has_unit_entry())
    }
}

fn relocate(e: Error, location: &str) -> Error {
    match e {
        Error::Validation { reason, .. } => Error::Validation { location: location.to_string(), reason },
        other => other,
    }
}

/// Homological bookkeeping for a bounded complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexStats {
    pub min_c: Option<i64>,
    pub max_c: Option<i64>,
    /// Lowest degree with nonzero homology.
    pub min: Option<i64>,
    pub supph: BTreeSet<i64>,
    /// `max - min` over `supph`, zero for an acyclic complex.
    pub width: i64,
}

/// A degree-zero chain map `source -> target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: FreeComplex,
    target: FreeComplex,
    /// `maps[k]` acts on `source.module(source.lo() + k)`.
    maps: Vec<GradedMatrix>,
}

impl ChainMap {
    /// `maps[k]` is the component in degree `source.lo() + k`. Checks every square.
    pub fn new(ring: &Ring, source: FreeComplex, target: FreeComplex, maps: Vec<GradedMatrix>) -> Result<ChainMap> {
        let f = ChainMap::new_unchecked(source, target, maps);
        f.validate(ring)?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: FreeComplex, target: FreeComplex, maps: Vec<GradedMatrix>) -> ChainMap {
        ChainMap { source, target, maps }
    }

    /// Builds from a closure giving the component in each degree of the source.
    pub fn from_fn(ring: &Ring, source: FreeComplex, target: FreeComplex, f: impl FnMut(i64) -> GradedMatrix) -> Result<ChainMap> {
        let maps = source.degrees().map(f).collect();
        ChainMap::new(ring, source, target, maps)
    }

    pub fn identity(ring: &Ring, x: &FreeComplex) -> ChainMap {
        let maps = x.degrees().map(|n| GradedMatrix::identity(ring, x.module(n))).collect();
        ChainMap::new_unchecked(x.clone(), x.clone(), maps)
    }

    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> ChainMap {
        let maps = source
            .degrees()
            .map(|n| GradedMatrix::zero(source.module(n).clone(), target.module(n).clone()))
            .collect();
        ChainMap::new_unchecked(source.clone(), target.clone(), maps)
    }

    pub fn validate(&self, ring: &Ring) -> Result<()> {
        let s = &self.source;
        let t = &self.target;
        if self.maps.len() != s.modules.len() {
            return Err(Error::validation("chain map", "component count does not match the source"));
        }
        for n in s.degrees() {
            let f = self.map(n);
            if f.source() != s.module(n) || f.target() != t.module(n) {
                return Err(Error::validation(format!("f_{n}"), "component does not match the terms"));
            }
            f.validate().map_err(|e| relocate(e, &format!("f_{n}")))?;
        }
        for n in s.lo()..=s.hi() + 1 {
            let left = t.diff(n).compose(ring, &self.map(n));
            let right = self.map(n - 1).compose(ring, &s.diff(n));
            if left != right {
                return Err(Error::validation(format!("square at degree {n}"), "chain map does not commute with the differentials"));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &FreeComplex {
        &self.source
    }

    pub fn target(&self) -> &FreeComplex {
        &self.target
    }

    /// Component `source_n -> target_n` (zero outside the source range).
    pub fn map(&self, n: i64) -> GradedMatrix {
        if n >= self.source.lo() && n <= self.source.hi() {
            return self.maps[(n - self.source.lo()) as usize].clone();
        }
        GradedMatrix::zero(self.source.module(n).clone(), self.target.module(n).clone())
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, ring: &Ring, rhs: &ChainMap) -> ChainMap {
        let maps = rhs.source.degrees().map(|n| self.map(n).compose(ring, &rhs.map(n))).collect();
        ChainMap::new_unchecked(rhs.source.clone(), self.target.clone(), maps)
    }

    pub fn sub(&self, ring: &Ring, other: &ChainMap) -> ChainMap {
        let maps = self.source.degrees().map(|n| self.map(n).sub(ring, &other.map(n))).collect();
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    /// `f ⊗ id_F` between `source ⊗ F` and `target ⊗ F`.
    pub fn tensor_free(&self, ring: &Ring, f: &FreeModule) -> ChainMap {
        ChainMap::new_unchecked(
            self.source.tensor_free(ring, f),
            self.target.tensor_free(ring, f),
            self.maps.iter().map(|m| m.tensor_identity(ring, f)).collect(),
        )
    }

    /// Same components between `Σ^k` of both complexes.
    pub fn shift(&self, ring: &Ring, k: i64) -> ChainMap {
        ChainMap::new_unchecked(self.source.shift(ring, k), self.target.shift(ring, k), self.maps.clone())
    }

    /// Mapping cone: `C_n = X_{n-1} ⊕ Y_n`, `∂(x, y) = (-∂x, f(x) + ∂y)`.
    /// Relabels source and target by the same `k`, see [`FreeComplex::relabeled`].
    pub fn relabeled(&self, k: i64) -> ChainMap {
        ChainMap::new_unchecked(self.source.relabeled(k), self.target.relabeled(k), self.maps.clone())
    }

    pub fn cone(&self, ring: &Ring) -> FreeComplex {
        let x = &self.source;
        let y = &self.target;
        let (lo, hi) = match (x.is_zero(), y.is_zero()) {
            (true, true) => return FreeComplex::zero(),
            (false, true) => (x.lo() + 1, x.hi() + 1),
            (true, false) => (y.lo(), y.hi()),
            (false, false) => ((x.lo() + 1).min(y.lo()), (x.hi() + 1).max(y.hi())),
        };
        let modules: Vec<FreeModule> = (lo..=hi).map(|n| x.module(n - 1).direct_sum(y.module(n))).collect();
        let diffs = (lo + 1..=hi)
            .map(|n| {
                GradedMatrix::block(
                    &x.diff(n - 1).neg(ring),
                    &GradedMatrix::zero(y.module(n).clone(), x.module(n - 2).clone()),
                    &self.map(n - 1),
                    &y.diff(n),
                )
            })
            .collect();
        FreeComplex::new_unchecked(lo, modules, diffs)
    }

    /// Exact quasi-isomorphism test: the cone has no homology at all.
    pub fn quasi_iso_report(&self, ring: &Ring) -> QuasiIsoReport {
        let cone = self.cone(ring);
        let nonzero: Vec<i64> = cone.degrees().filter(|&n| !cone.homology_vanishes(ring, n)).collect();
        QuasiIsoReport { quasi_iso: nonzero.is_empty(), cone_homology_degrees: nonzero }
    }

    pub fn is_quasi_iso(&self, ring: &Ring) -> bool {
        self.quasi_iso_report(ring).quasi_iso
    }

    /// Dense matrix of the induced map `H_n(source)_t -> H_n(target)_t`
    /// has this rank.
    pub fn homology_rank(&self, ring: &Ring, n: i64, t: i64) -> usize {
        let s = &self.source;
        let y = &self.target;
        let zs = Dense::from_columns(
            s.module(n).piece_dim(ring, t),
            &piece_matrix(ring, &s.diff(n), t).nullspace(ring),
        );
        let by = piece_matrix(ring, &y.diff(n + 1), t);
        let img = piece_matrix(ring, &self.map(n), t).mul(ring, &zs);
        img.hstack(&by).rank(ring) - by.rank(ring)
    }
}

/// Witness for [`ChainMap::is_quasi_iso`]: degrees where the cone has homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub quasi_iso: bool,
    pub cone_homology_degrees: Vec<i64>,
}
