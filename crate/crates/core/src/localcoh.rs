//! Local cohomology on a finite window, as a colimit of cohomology of
//! `Hom(X_k, M)` along a directed system of free complexes `X_k`.
//!
//! Two systems are provided: Koszul complexes `K(f^n)` with the maps `κ`,
//! and Tate resolutions `T(f^n)` with the lifted maps. The colimit is read
//! off cell by cell: a cell `(i, t)` is stable at stage `k` once the
//! transitions `k -> k+1` and `k+1 -> k+2` are both bijective on it and
//! stage `k` witnesses it: its cochain piece is nonzero, or `M` vanishes in
//! every degree that piece can reach at this or any later stage.

use std::collections::BTreeMap;

use crate::complex::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::koszul::{kappa, koszul, powers};
use crate::linalg::{piece_matrix, Dense};
use crate::poly::Poly;
use crate::presented::{hom_into, hom_map_component, PresentedComplex, PresentedModule};
use crate::resolution::free_resolution;
use crate::ring::Ring;
use crate::tate::{tate_directed_system, tate_to_koszul_lift, DirectedStep};

/// Stabilized value of one `(i, t)` cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    /// Exponent `n` of the stage at which the cell stabilized (or the last
    /// stage examined when it did not).
    pub stage: u64,
    pub stable: bool,
}

/// `(i, t) -> Cell`, together with the exponents of the stages used.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedDimTable {
    pub cells: BTreeMap<(i64, i64), Cell>,
    pub exponents: Vec<u64>,
}

impl GradedDimTable {
    pub fn dim(&self, i: i64, t: i64) -> Option<usize> {
        self.cells.get(&(i, t)).map(|c| c.dim)
    }

    pub fn all_stable(&self) -> bool {
        self.cells.values().all(|c| c.stable)
    }
}

/// Cohomological degrees and internal degrees to tabulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub i_min: i64,
    pub i_max: i64,
    pub t_min: i64,
    pub t_max: i64,
}

impl Window {
    pub fn new(i_min: i64, i_max: i64, t_min: i64, t_max: i64) -> Window {
        Window { i_min, i_max, t_min, t_max }
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.i_min..=self.i_max).flat_map(move |i| (self.t_min..=self.t_max).map(move |t| (i, t)))
    }
}

/// A directed system `X_0 <- X_1 <- ...` of free complexes, extended lazily.
trait System {
    fn ensure(&mut self, ring: &Ring, k: usize) -> Result<bool>;
    fn stage(&self, k: usize) -> &FreeComplex;
    fn exponent(&self, k: usize) -> u64;
    /// `X_{k+1} -> X_k`.
    fn map(&self, k: usize) -> &ChainMap;
}

struct KoszulSystem {
    seq: Vec<Poly>,
    n_cap: u64,
    stages: Vec<FreeComplex>,
    maps: Vec<ChainMap>,
}

impl System for KoszulSystem {
    fn ensure(&mut self, ring: &Ring, k: usize) -> Result<bool> {
        while self.stages.len() <= k {
            let n = self.stages.len() as u64 + 1;
            if n > self.n_cap {
                return Ok(false);
            }
            self.stages.push(koszul(ring, &powers(ring, &self.seq, n))?.complex);
            if n > 1 {
                self.maps.push(kappa(ring, n, n - 1, &self.seq)?);
            }
        }
        Ok(true)
    }
    fn stage(&self, k: usize) -> &FreeComplex {
        &self.stages[k]
    }
    fn exponent(&self, k: usize) -> u64 {
        k as u64 + 1
    }
    fn map(&self, k: usize) -> &ChainMap {
        &self.maps[k]
    }
}

struct TateSystem {
    seq: Vec<Poly>,
    depth: usize,
    u_cap_factor: u64,
    steps: Vec<DirectedStep>,
}

impl System for TateSystem {
    fn ensure(&mut self, ring: &Ring, k: usize) -> Result<bool> {
        if k >= self.depth {
            return Ok(false);
        }
        if self.steps.is_empty() {
            self.steps = tate_directed_system(ring, &self.seq, 1, 1, 1, self.u_cap_factor)?;
        }
        while self.steps.len() <= k {
            let last = self.steps.last().unwrap();
            let n = last.exponent;
            let lift = tate_to_koszul_lift(ring, &self.seq, n, n + 1, (self.u_cap_factor * n).max(n + 1))?;
            let map = last.tate.inclusion(ring).compose(ring, &lift.map);
            self.steps.last_mut().unwrap().map = Some(map);
            self.steps.push(DirectedStep { exponent: lift.u, tate: lift.tate, map: None });
        }
        Ok(true)
    }
    fn stage(&self, k: usize) -> &FreeComplex {
        &self.steps[k].tate.complex
    }
    fn exponent(&self, k: usize) -> u64 {
        self.steps[k].exponent
    }
    fn map(&self, k: usize) -> &ChainMap {
        self.steps[k].map.as_ref().expect("map to the next stage")
    }
}

/// Per-stage data for one cell: cycles and boundaries in generator coordinates.
struct Piece {
    z: Dense,
    b: Dense,
    dim: usize,
}

struct Colimit<'a, S: System> {
    ring: &'a Ring,
    module: &'a PresentedModule,
    system: S,
    /// Least degree of an element of the sequence.
    seq_degree: i64,
    homs: Vec<PresentedComplex>,
    pieces: BTreeMap<(usize, i64, i64), Piece>,
}

impl<'a, S: System> Colimit<'a, S> {
    fn new(ring: &'a Ring, module: &'a PresentedModule, seq: &[Poly], system: S) -> Self {
        let seq_degree = seq.iter().filter_map(|f| f.homogeneous_degree()).min().unwrap_or(0).max(0);
        Colimit { ring, module, system, seq_degree, homs: Vec::new(), pieces: BTreeMap::new() }
    }

    /// `M_d = 0` for every `d ≥ lo`. Past the top generator degree `G`, a
    /// run of `max weight` zero degrees forces all higher degrees to vanish.
    fn vanishes_from(&self, lo: i64) -> bool {
        let gens = self.module.generators().degrees();
        let Some(&top) = gens.iter().max() else { return true };
        let w = *self.ring.weights().iter().max().unwrap_or(&1) as i64;
        (lo..lo.max(top) + w.max(1)).all(|d| self.module.hilbert(self.ring, d) == 0)
    }

    fn ensure(&mut self, k: usize) -> Result<bool> {
        if !self.system.ensure(self.ring, k)? {
            return Ok(false);
        }
        while self.homs.len() <= k {
            let x = self.system.stage(self.homs.len());
            self.homs.push(hom_into(self.ring, x, self.module));
        }
        Ok(true)
    }

    fn piece(&mut self, k: usize, i: i64, t: i64) -> &Piece {
        let ring = self.ring;
        let homs = &self.homs;
        self.pieces.entry((k, i, t)).or_insert_with(|| {
            let (z, b) = homs[k].cycle_boundary_pieces(ring, -i, t);
            let dim = z.cols - b.rank(ring);
            Piece { z, b, dim }
        })
    }

    /// Rank of the induced map `H^i(stage k)_t -> H^i(stage k+1)_t`.
    fn transition_rank(&mut self, k: usize, i: i64, t: i64) -> usize {
        let g = hom_map_component(self.ring, &self.system.map(k).map(i), self.module);
        let gm = piece_matrix(self.ring, &g, t);
        let z = self.piece(k, i, t).z.clone();
        let b1 = self.piece(k + 1, i, t).b.clone();
        let img = gm.mul(self.ring, &z);
        img.hstack(&b1).rank(self.ring) - b1.rank(self.ring)
    }

    /// Whether stage `k` can witness the cell. For `i ≥ 1` every generator
    /// of `X_i` at stage `k` or later has degree at least `n_k · deg`, so
    /// `Hom(X_i, M)_t` stays zero once `M` vanishes from `t + n_k · deg`.
    fn witnesses(&mut self, k: usize, i: i64, t: i64) -> bool {
        if i <= 0 || self.homs[k].term(-i).hilbert(self.ring, t) > 0 {
            return true;
        }
        self.vanishes_from(t + self.system.exponent(k) as i64 * self.seq_degree)
    }

    fn cell(&mut self, i: i64, t: i64) -> Result<Cell> {
        let mut k = 0;
        if !self.ensure(0)? {
            return Err(Error::cap("local cohomology", "the directed system has no stages"));
        }
        loop {
            if !self.ensure(k + 2)? {
                let last = if self.ensure(k + 1)? { k + 1 } else { k };
                let dim = self.piece(last, i, t).dim;
                return Ok(Cell { dim, stage: self.system.exponent(last), stable: false });
            }
            if !self.witnesses(k, i, t) {
                k += 1;
                continue;
            }
            let d0 = self.piece(k, i, t).dim;
            let d1 = self.piece(k + 1, i, t).dim;
            let d2 = self.piece(k + 2, i, t).dim;
            if d0 == d1 && d1 == d2 && self.transition_rank(k, i, t) == d0 && self.transition_rank(k + 1, i, t) == d1 {
                return Ok(Cell { dim: d0, stage: self.system.exponent(k), stable: true });
            }
            k += 1;
        }
    }

    fn table(&mut self, window: &Window) -> Result<GradedDimTable> {
        let mut cells = BTreeMap::new();
        for (i, t) in window.cells() {
            cells.insert((i, t), self.cell(i, t)?);
        }
        let mut exponents = Vec::new();
        let mut k = 0;
        while k < self.homs.len() {
            exponents.push(self.system.exponent(k));
            k += 1;
        }
        Ok(GradedDimTable { cells, exponents })
    }
}

/// Graded dimensions of `H^i(f^n; M)` on the `t` window together with the
/// ranks of the transition maps to stage `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulCohomology {
    pub dims: BTreeMap<i64, usize>,
    pub transition_ranks: BTreeMap<i64, usize>,
}

pub fn koszul_cohomology(ring: &Ring, seq: &[Poly], n: u64, m: &PresentedModule, i: i64, t_min: i64, t_max: i64) -> Result<KoszulCohomology> {
    if n < 1 {
        return Err(Error::validation("n", "must be at least 1"));
    }
    let sys = KoszulSystem { seq: seq.to_vec(), n_cap: n + 1, stages: Vec::new(), maps: Vec::new() };
    let mut c = Colimit::new(ring, m, seq, sys);
    let k = (n - 1) as usize;
    c.ensure(k + 1)?;
    let mut dims = BTreeMap::new();
    let mut transition_ranks = BTreeMap::new();
    for t in t_min..=t_max {
        dims.insert(t, c.piece(k, i, t).dim);
        transition_ranks.insert(t, c.transition_rank(k, i, t));
    }
    Ok(KoszulCohomology { dims, transition_ranks })
}

/// `lim H^i(f^n; M)` read off on the window, using stages `n = 1..=n_cap`.
pub fn local_cohomology_koszul(ring: &Ring, seq: &[Poly], m: &PresentedModule, window: &Window, n_cap: u64) -> Result<GradedDimTable> {
    let sys = KoszulSystem { seq: seq.to_vec(), n_cap, stages: Vec::new(), maps: Vec::new() };
    Colimit::new(ring, m, seq, sys).table(window)
}

/// `lim Ext^i(S/(f^n), M)` along the Tate directed system, at most `depth` stages.
pub fn local_cohomology_ext_tate(ring: &Ring, seq: &[Poly], m: &PresentedModule, window: &Window, depth: usize, u_cap_factor: u64) -> Result<GradedDimTable> {
    let sys = TateSystem { seq: seq.to_vec(), depth, u_cap_factor, steps: Vec::new() };
    Colimit::new(ring, m, seq, sys).table(window)
}

/// `Ext^i(S/(f^n), M)` from a minimal free resolution of `S/(f^n)`.
pub fn ext_module(ring: &Ring, seq: &[Poly], n: u64, m: &PresentedModule, i: i64) -> Result<PresentedModule> {
    let q = PresentedModule::quotient_ring(ring, &powers(ring, seq, n))?;
    let res = free_resolution(ring, &q, ring.nvars() + 1);
    Ok(hom_into(ring, &res.complex, m).homology_presentation(ring, -i))
}

/// Caps for [`compare_pipelines`].
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub n_cap: u64,
    pub depth: usize,
    pub u_cap_factor: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { n_cap: 32, depth: 12, u_cap_factor: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub koszul: GradedDimTable,
    pub ext: GradedDimTable,
    /// Cells where both stabilized with different dimensions.
    pub mismatches: Vec<(i64, i64)>,
    /// Cells where at least one pipeline did not stabilize.
    pub unstable: Vec<(i64, i64)>,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty() && self.unstable.is_empty()
    }
}

pub fn compare_pipelines(ring: &Ring, seq: &[Poly], m: &PresentedModule, window: &Window, caps: &Caps) -> Result<Agreement> {
    let koszul = local_cohomology_koszul(ring, seq, m, window, caps.n_cap)?;
    let ext = local_cohomology_ext_tate(ring, seq, m, window, caps.depth, caps.u_cap_factor)?;
    let mut mismatches = Vec::new();
    let mut unstable = Vec::new();
    for (key, a) in &koszul.cells {
        let b = &ext.cells[key];
        if !a.stable || !b.stable {
            unstable.push(*key);
        } else if a.dim != b.dim {
            mismatches.push(*key);
        }
    }
    Ok(Agreement { koszul, ext, mismatches, unstable })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| Poly::parse(r, t).unwrap()).collect()
    }

    #[test]
    fn top_local_cohomology_of_the_plane() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let s = PresentedModule::free(crate::FreeModule::new(vec![0]));
        let seq = polys(&r, &["x", "y"]);
        let w = Window::new(0, 2, -5, 0);
        let cmp = compare_pipelines(&r, &seq, &s, &w, &Caps::default()).unwrap();
        assert!(cmp.agrees(), "{cmp:?}");
        for (t, d) in [(-2, 1), (-3, 2), (-4, 3), (-5, 4), (-1, 0), (0, 0)] {
            assert_eq!(cmp.koszul.dim(2, t), Some(d));
        }
        eprintln!("{:?}", cmp.ext.exponents);
    }
}
