//! Minimal free resolutions, projective dimension, grade, resolutions of
//! complexes and the horseshoe construction.

use crate::complex::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, columns_matrix, image_contains, kernel_mod, syzygies, Lifter};
use crate::matrix::{FreeModule, GradedMatrix};
use crate::poly::Poly;
use crate::presented::{PresentedComplex, PresentedModule};
use crate::ring::Ring;
use crate::vector::Vector;

/// A free resolution `F -> M` with the augmentation on generators.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: FreeComplex,
    /// `F_0 -> G_0`, the generators of the presentation.
    pub augmentation: GradedMatrix,
    pub finished: bool,
}

impl Resolution {
    /// Length of the built complex (`None` for the zero module).
    pub fn length(&self) -> Option<usize> {
        self.complex.max_c().map(|n| n as usize)
    }
}

/// Minimal graded free resolution, at most `max_len` differentials long.
pub fn free_resolution(ring: &Ring, m: &PresentedModule, max_len: usize) -> Resolution {
    let aug = m.minimal_generator_map(ring);
    let f0 = aug.source().clone();
    if f0.is_zero() {
        return Resolution { complex: FreeComplex::concentrated(0, f0), augmentation: aug, finished: true };
    }
    let mut diffs: Vec<GradedMatrix> = Vec::new();
    let mut finished = false;
    let mut next = kernel_mod(ring, &aug, Some(m.relations()));
    for _ in 0..=max_len {
        if next.ncols() == 0 {
            finished = true;
            break;
        }
        if diffs.len() == max_len {
            break;
        }
        let d = next;
        next = syzygies(ring, &d);
        diffs.push(d);
    }
    let complex = if diffs.is_empty() {
        FreeComplex::concentrated(0, f0)
    } else {
        FreeComplex::new_unchecked(0, std::iter::once(f0).chain(diffs.iter().map(|d| d.source().clone())).collect(), diffs)
    };
    Resolution { complex, augmentation: aug, finished }
}

/// Enough steps to finish over a polynomial ring (Hilbert's syzygy theorem).
fn full_length(ring: &Ring) -> usize {
    ring.nvars() + 1
}

/// Projective dimension; `None` for the zero module.
pub fn pd(ring: &Ring, m: &PresentedModule) -> Option<usize> {
    let r = free_resolution(ring, m, full_length(ring));
    debug_assert!(r.finished);
    r.length()
}

/// Least `i` with `Ext^i(S/I, S) ≠ 0`.
pub fn grade(ring: &Ring, ideal: &[Poly]) -> Result<usize> {
    let q = PresentedModule::quotient_ring(ring, ideal)?;
    let res = free_resolution(ring, &q, full_length(ring));
    if res.complex.is_zero() {
        return Err(Error::Precondition("grade of the unit ideal is undefined".into()));
    }
    let dual = res.complex.dual(ring);
    (0..=res.complex.hi())
        .find(|&i| !dual.homology_vanishes(ring, -i))
        .map(|i| i as usize)
        .ok_or_else(|| Error::Precondition("dual resolution has no cohomology".into()))
}

/// `grade(I) == pd(S/I)`.
pub fn is_perfect(ring: &Ring, ideal: &[Poly]) -> Result<bool> {
    let g = grade(ring, ideal)?;
    let p = pd(ring, &PresentedModule::quotient_ring(ring, ideal)?);
    Ok(Some(g) == p)
}

/// A free complex `P` with a degreewise map `π: P -> X` on generators that is
/// a quasi-isomorphism.
#[derive(Clone, Debug)]
pub struct ComplexResolution {
    pub complex: FreeComplex,
    /// `π_n: P_n -> G_n(X)` for `n` in the range of `complex`.
    pub maps: Vec<GradedMatrix>,
}

impl ComplexResolution {
    pub fn map(&self, n: i64) -> GradedMatrix {
        let p = &self.complex;
        if n >= p.lo() && n <= p.hi() {
            return self.maps[(n - p.lo()) as usize].clone();
        }
        panic!("no component in degree {n}");
    }

    /// Mapping cone of `π` as a presented complex.
    pub fn cone(&self, ring: &Ring, x: &PresentedComplex) -> PresentedComplex {
        presented_cone(ring, &self.complex, x, |n| self.component(n, x))
    }

    fn component(&self, n: i64, x: &PresentedComplex) -> GradedMatrix {
        let p = &self.complex;
        if n >= p.lo() && n <= p.hi() {
            self.maps[(n - p.lo()) as usize].clone()
        } else {
            GradedMatrix::zero(p.module(n).clone(), x.generators(n).clone())
        }
    }

    /// Exact check that the cone of `π` has no homology.
    pub fn is_quasi_iso(&self, ring: &Ring, x: &PresentedComplex) -> bool {
        let c = self.cone(ring, x);
        c.degrees().all(|n| c.homology_vanishes(ring, n))
    }

    /// Commuting squares modulo the relations of `X`.
    pub fn is_chain_map(&self, ring: &Ring, x: &PresentedComplex) -> bool {
        let p = &self.complex;
        let lo = p.lo().min(x.lo());
        let hi = p.hi().max(x.hi()) + 1;
        (lo..=hi).all(|n| {
            let left = x.diff(n).compose(ring, &self.component(n, x));
            let right = self.component(n - 1, x).compose(ring, &p.diff(n));
            let diff = left.sub(ring, &right);
            diff.is_zero() || image_contains(ring, x.term(n - 1).relations(), None, &diff)
        })
    }
}

/// `cone(π)_n = P_{n-1} ⊕ X_n` with relations only on the `X` part.
fn presented_cone(ring: &Ring, p: &FreeComplex, x: &PresentedComplex, pi: impl Fn(i64) -> GradedMatrix) -> PresentedComplex {
    let lo = (p.lo() + 1).min(x.lo());
    let hi = (p.hi() + 1).max(x.hi());
    let terms = (lo..=hi)
        .map(|n| {
            let pm = p.module(n - 1);
            let rel = x.term(n).relations();
            let rel = GradedMatrix::zero(FreeModule::zero(), pm.clone()).direct_sum(rel);
            PresentedModule::new_unchecked(rel)
        })
        .collect();
    let diffs = (lo + 1..=hi).map(|n| cone_diff(ring, p, x, &pi, n)).collect();
    PresentedComplex::new_unchecked(lo, terms, diffs)
}

fn cone_diff(ring: &Ring, p: &FreeComplex, x: &PresentedComplex, pi: &impl Fn(i64) -> GradedMatrix, n: i64) -> GradedMatrix {
    GradedMatrix::block(
        &p.diff(n - 1).neg(ring),
        &GradedMatrix::zero(x.generators(n).clone(), p.module(n - 2).clone()),
        &pi(n - 1),
        &x.diff(n),
    )
}

/// Resolves a bounded complex of presented modules by free modules.
///
/// Degrees are built from the bottom: `P_m` maps onto the generators of the
/// lowest nonzero term, and every later `P_n` kills the cycles of the
/// partial cone in degree `n` modulo what the `X` part already bounds.
pub fn resolve_complex(ring: &Ring, x: &PresentedComplex, max_extra: usize) -> Result<ComplexResolution> {
    let free = x.degrees().all(|n| x.term(n).relations().ncols() == 0);
    if free {
        let modules: Vec<FreeModule> = x.degrees().map(|n| x.generators(n).clone()).collect();
        let diffs = (x.lo() + 1..=x.hi()).map(|n| x.diff(n)).collect();
        let p = if modules.is_empty() { FreeComplex::zero() } else { FreeComplex::new(ring, x.lo(), modules, diffs)? };
        let maps = p.degrees().map(|n| GradedMatrix::identity(ring, p.module(n))).collect();
        return Ok(ComplexResolution { complex: p, maps });
    }
    let Some(m) = x.min_c(ring) else {
        return Ok(ComplexResolution { complex: FreeComplex::zero(), maps: Vec::new() });
    };
    let first = x.term(m).minimal_generator_map(ring);
    let mut modules = vec![first.source().clone()];
    let mut diffs: Vec<GradedMatrix> = Vec::new();
    let mut maps = vec![first];
    let limit = x.hi() + 1 + max_extra as i64;
    let mut n = m + 1;
    loop {
        if n > limit {
            return Err(Error::cap("resolve_complex", format!("cycles remain in degree {n} after {max_extra} extra steps")));
        }
        let pm = &modules[(n - 1 - m) as usize];
        let pbelow = if n - 2 >= m { modules[(n - 2 - m) as usize].clone() } else { FreeModule::zero() };
        let dp = if n - 1 > m { diffs[(n - 2 - m) as usize].clone() } else { GradedMatrix::zero(pm.clone(), pbelow.clone()) };
        let pi_prev = maps[(n - 1 - m) as usize].clone();
        // partial cone differential C_n -> C_{n-1}, C_n = P_{n-1} ⊕ G_n
        let dc = GradedMatrix::block(
            &dp.neg(ring),
            &GradedMatrix::zero(x.generators(n).clone(), pbelow.clone()),
            &pi_prev,
            &x.diff(n),
        );
        let rel_below = GradedMatrix::zero(FreeModule::zero(), pbelow.clone()).direct_sum(x.term(n - 1).relations());
        let cycles = kernel_mod(ring, &dc, Some(&rel_below));
        // already bounded: the X part of C_{n+1} plus the relations of X_n
        let cn = pm.direct_sum(x.generators(n));
        let bound_x = GradedMatrix::zero(x.generators(n + 1).clone(), pm.clone()).row_stack(&x.diff(n + 1));
        let rel_here = GradedMatrix::zero(FreeModule::zero(), pm.clone()).direct_sum(x.term(n).relations());
        let mut flagged: Vec<(Vector, bool)> = bound_x.cols().iter().chain(rel_here.cols()).map(|c| (c.clone(), true)).collect();
        let nb = flagged.len();
        flagged.extend(cycles.cols().iter().map(|c| (c.clone(), false)));
        let (_, kept) = buchberger(ring, cn.degrees(), &flagged);
        let chosen: Vec<Vector> = cycles.cols().iter().enumerate().filter(|(i, _)| kept[nb + i]).map(|(_, c)| c.clone()).collect();
        let chosen = columns_matrix(&cn, chosen);
        if chosen.ncols() == 0 && n > x.hi() {
            break;
        }
        let r = pm.rank();
        // generator g with cone image -z: ∂g = p', π g = -x'
        let new_d = chosen.row_block(0, r);
        let new_pi = chosen.row_block(r, cn.rank()).neg(ring);
        modules.push(chosen.source().clone());
        diffs.push(new_d);
        maps.push(new_pi);
        n += 1;
    }
    // drop trailing zero terms
    while modules.len() > 1 && modules.last().is_some_and(|f| f.is_zero()) {
        modules.pop();
        diffs.pop();
        maps.pop();
    }
    let complex = FreeComplex::new(ring, m, modules, diffs)?;
    Ok(ComplexResolution { complex, maps })
}

/// A short exact sequence `0 -> A -> B -> C -> 0` of presented modules, the
/// maps given on generators.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub left: PresentedModule,
    pub middle: PresentedModule,
    pub right: PresentedModule,
    pub inclusion: GradedMatrix,
    pub projection: GradedMatrix,
}

impl ShortExact {
    /// Exact Gröbner certificate of well-definedness and exactness at all three spots.
    pub fn check(&self, ring: &Ring) -> Result<()> {
        let (a, b, c) = (&self.left, &self.middle, &self.right);
        let (i, p) = (&self.inclusion, &self.projection);
        if i.source() != a.generators() || i.target() != b.generators() {
            return Err(Error::validation("inclusion", "shape does not match the modules"));
        }
        if p.source() != b.generators() || p.target() != c.generators() {
            return Err(Error::validation("projection", "shape does not match the modules"));
        }
        if !a.map_descends(ring, i, b) || !b.map_descends(ring, p, c) {
            return Err(Error::validation("short exact sequence", "a map does not descend to the cokernels"));
        }
        let pi = p.compose(ring, i);
        if !pi.is_zero() && !image_contains(ring, c.relations(), None, &pi) {
            return Err(Error::validation("short exact sequence", "composite is nonzero"));
        }
        let id_c = GradedMatrix::identity(ring, c.generators());
        if !image_contains(ring, p, Some(c.relations()), &id_c) {
            return Err(Error::validation("short exact sequence", "projection is not surjective"));
        }
        let ker_i = kernel_mod(ring, i, Some(b.relations()));
        if ker_i.ncols() > 0 && !image_contains(ring, a.relations(), None, &ker_i) {
            return Err(Error::validation("short exact sequence", "inclusion is not injective"));
        }
        let ker_p = kernel_mod(ring, p, Some(c.relations()));
        if ker_p.ncols() > 0 && !image_contains(ring, i, Some(b.relations()), &ker_p) {
            return Err(Error::validation("short exact sequence", "not exact in the middle"));
        }
        Ok(())
    }
}

/// Resolutions of the three terms with the middle one termwise `F_A ⊕ F_C`.
#[derive(Clone, Debug)]
pub struct Horseshoe {
    pub left: Resolution,
    pub middle: Resolution,
    pub right: Resolution,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

pub fn horseshoe(ring: &Ring, ses: &ShortExact) -> Result<Horseshoe> {
    ses.check(ring)?;
    let len = full_length(ring);
    let ra = free_resolution(ring, &ses.left, len);
    let rc = free_resolution(ring, &ses.right, len);
    let fa = &ra.complex;
    let fc = &rc.complex;
    let b = &ses.middle;
    let top = fa.hi().max(fc.hi()).max(0);

    // σ_0: F_C,0 -> G_B lifting ε_C through the projection
    let sigma0 = Lifter::new(ring, &ses.projection, Some(ses.right.relations()));
    let sigma_cols = rc
        .augmentation
        .cols()
        .iter()
        .map(|c| sigma0.solve(ring, c))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::validation("horseshoe", "projection does not lift the right augmentation"))?;
    let sigma = GradedMatrix::new_unchecked(fc.module(0).clone(), b.generators().clone(), sigma_cols);
    let i_eps = ses.inclusion.compose(ring, &ra.augmentation);
    let aug_b = i_eps.hstack(&sigma);

    // λ_n: F_C,n -> F_A,n-1 filling the off-diagonal block
    let mut lambdas: Vec<GradedMatrix> = vec![GradedMatrix::zero(fc.module(0).clone(), FreeModule::zero())];
    for n in 1..=top {
        let rhs = if n == 1 {
            sigma.compose(ring, &fc.diff(1)).neg(ring)
        } else {
            lambdas[(n - 1) as usize].compose(ring, &fc.diff(n)).neg(ring)
        };
        let (a_map, modulo) = if n == 1 {
            (i_eps.clone(), Some(b.relations().clone()))
        } else {
            (fa.diff(n - 1), None)
        };
        let lifter = Lifter::new(ring, &a_map, modulo.as_ref());
        let cols = rhs
            .cols()
            .iter()
            .map(|c| lifter.solve(ring, c))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::validation(format!("horseshoe degree {n}"), "obstruction: sequence is not exact"))?;
        lambdas.push(GradedMatrix::new_unchecked(fc.module(n).clone(), fa.module(n - 1).clone(), cols));
    }
    let modules: Vec<FreeModule> = (0..=top).map(|n| fa.module(n).direct_sum(fc.module(n))).collect();
    let diffs: Vec<GradedMatrix> = (1..=top)
        .map(|n| {
            GradedMatrix::block(
                &fa.diff(n),
                &lambdas[n as usize],
                &GradedMatrix::zero(fa.module(n).clone(), fc.module(n - 1).clone()),
                &fc.diff(n),
            )
        })
        .collect();
    let fb = FreeComplex::new(ring, 0, modules, diffs)?;
    let inc = ChainMap::from_fn(ring, fa.restrict(0, top), fb.clone(), |n| {
        GradedMatrix::identity(ring, fa.module(n)).row_stack(&GradedMatrix::zero(fa.module(n).clone(), fc.module(n).clone()))
    })?;
    let proj = ChainMap::from_fn(ring, fb.clone(), fc.restrict(0, top), |n| {
        GradedMatrix::zero(fa.module(n).clone(), fc.module(n).clone()).hstack(&GradedMatrix::identity(ring, fc.module(n)))
    })?;
    let middle = Resolution { complex: fb, augmentation: aug_b, finished: ra.finished && rc.finished };
    Ok(Horseshoe { left: ra, middle, right: rc, inclusion: inc, projection: proj })
}

/// Projective dimensions of the three terms and the three inequalities.
/// `None` stands for the zero module (dimension `-∞`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimInequalityReport {
    pub pd_left: Option<usize>,
    pub pd_middle: Option<usize>,
    pub pd_right: Option<usize>,
    /// `pd A ≤ max(pd B, pd C - 1)`
    pub left_bound: bool,
    /// `pd B ≤ max(pd A, pd C)`
    pub middle_bound: bool,
    /// `pd C ≤ max(pd B, pd A + 1)`
    pub right_bound: bool,
}

impl DimInequalityReport {
    pub fn holds(&self) -> bool {
        self.left_bound && self.middle_bound && self.right_bound
    }
}

pub fn dim_inequality_check(ring: &Ring, ses: &ShortExact) -> Result<DimInequalityReport> {
    horseshoe(ring, ses)?;
    let a = pd(ring, &ses.left).map(|d| d as i64);
    let b = pd(ring, &ses.middle).map(|d| d as i64);
    let c = pd(ring, &ses.right).map(|d| d as i64);
    let minus1 = |v: Option<i64>| v.map(|d| d - 1);
    let plus1 = |v: Option<i64>| v.map(|d| d + 1);
    Ok(DimInequalityReport {
        pd_left: a.map(|d| d as usize),
        pd_middle: b.map(|d| d as usize),
        pd_right: c.map(|d| d as usize),
        left_bound: a <= b.max(minus1(c)),
        middle_bound: b <= a.max(c),
        right_bound: c <= b.max(plus1(a)),
    })
}

/// Random short exact sequence `0 -> A -> B -> B/A -> 0` with `B = coker R`
/// and `A` generated by the images of random vectors.
pub fn random_short_exact(ring: &Ring, rng: &mut impl rand::Rng) -> ShortExact {
    use crate::vector::Term;
    let rank = rng.gen_range(1..=2usize);
    let g = FreeModule::new((0..rank).map(|_| rng.gen_range(0..=1i64)).collect());
    let random_vec = |rng: &mut dyn rand::RngCore, deg: i64| -> Vector {
        let mut terms = Vec::new();
        for (pos, a) in g.degrees().iter().enumerate() {
            let monos = ring.monomials_of_degree(deg - a);
            for m in monos {
                if rng.next_u32().is_multiple_of(3) {
                    terms.push(Term { pos, mono: m, coef: 1 + rng.next_u32() % (ring.characteristic() - 1).max(1) });
                }
            }
        }
        Vector::from_terms(ring, terms)
    };
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let d = rng.gen_range(1..=3);
        let v = random_vec(rng, d);
        if !v.is_zero() {
            rels.push(v);
        }
    }
    let mut subs = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let d = rng.gen_range(1..=3);
        let v = random_vec(rng, d);
        if !v.is_zero() {
            subs.push(v);
        }
    }
    let r = columns_matrix(&g, rels);
    let sub = columns_matrix(&g, subs);
    let middle = PresentedModule::new_unchecked(r.clone());
    // A = image of sub in B: generated by sub, relations {c : sub c ∈ im R}
    let left = PresentedModule::new_unchecked(kernel_mod(ring, &sub, Some(&r)));
    let right = PresentedModule::new_unchecked(r.hstack(&sub));
    ShortExact {
        left,
        middle,
        right,
        inclusion: sub,
        projection: GradedMatrix::identity(ring, &g),
    }
}
