//! Support tests, strong reducers and their verifier, and the Frobenius
//! filtration witnesses in characteristic `p`.
//!
//! A strong reducer of `(X, f: X_m -> Q)` is a pair `(T, α: T -> X)` with
//! `min_c(T) = m`, homology of `T` only in degree `m`, `H_m(α)` onto, and
//! `f α_m` vanishing on the boundaries of `T_m`.

use crate::complex::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::groebner::{image_contains, kernel_mod, solve_matrix, syzygies};
use crate::koszul::powers;
use crate::lift::lift_augmentation;
use crate::matrix::{FreeModule, GradedMatrix};
use crate::poly::Poly;
use crate::presented::{PresentedComplex, PresentedModule};
use crate::resolution::{free_resolution, pd, resolve_complex};
use crate::ring::Ring;
use crate::tate::{foxby_map, tate_to_koszul_lift, TateLift};
use crate::vector::Vector;

/// Search caps for the reducer pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SrCaps {
    /// Bound on annihilator and Foxby exponents.
    pub n_cap: u64,
    /// Lift exponents are searched up to `u_cap_factor · r`.
    pub u_cap_factor: u64,
    pub e_max: u32,
}

impl Default for SrCaps {
    fn default() -> Self {
        SrCaps { n_cap: 32, u_cap_factor: 16, e_max: 5 }
    }
}

fn scalar_times(ring: &Ring, m: &FreeModule, s: &Poly) -> Result<GradedMatrix> {
    let cols = (0..m.rank()).map(|i| Vector::basis(ring, i).mul_poly(ring, s)).collect();
    let deg = s.homogeneous_degree().ok_or_else(|| Error::validation("element", "not homogeneous"))?;
    Ok(GradedMatrix::new_unchecked(m.shifted(deg), m.clone(), cols))
}

/// Smallest `n ≤ cap` with `s^n Q = 0`.
pub fn annihilates_power(ring: &Ring, s: &Poly, q: &PresentedModule, cap: u64) -> Result<Option<u64>> {
    if cap < 1 {
        return Err(Error::validation("cap", "must be at least 1"));
    }
    if s.is_zero() {
        return Ok(q.is_zero(ring).then_some(1));
    }
    let g = q.generators();
    if g.is_zero() {
        return Ok(Some(1));
    }
    for n in 1..=cap {
        let m = scalar_times(ring, g, &s.pow(ring, n))?;
        if image_contains(ring, q.relations(), None, &m) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Whether `s` acts nilpotently on `Q`, decided exactly: the colon chain
/// `(R : s^n)` either reaches every generator or stops growing.
fn nilpotent_on(ring: &Ring, s: &Poly, q: &PresentedModule, cap: u64) -> Result<bool> {
    let g = q.generators();
    if g.is_zero() {
        return Ok(true);
    }
    let id = GradedMatrix::identity(ring, g);
    let mut prev: Option<GradedMatrix> = None;
    for n in 1..=cap {
        let colon = kernel_mod(ring, &scalar_times(ring, g, &s.pow(ring, n))?, Some(q.relations()));
        if image_contains(ring, &colon, None, &id) {
            return Ok(true);
        }
        if let Some(p) = &prev {
            if image_contains(ring, p, None, &colon) {
                return Ok(false);
            }
        }
        prev = Some(colon);
    }
    Err(Error::cap("support_in", format!("colon chain still growing at exponent {cap}")))
}

/// `Supp(Q) ⊆ V(f)`.
pub fn support_in(ring: &Ring, q: &PresentedModule, seq: &[Poly], cap: u64) -> Result<bool> {
    for f in seq {
        if !f.is_homogeneous() {
            return Err(Error::validation("support", "generators must be homogeneous"));
        }
        if !nilpotent_on(ring, f, q, cap)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every homology module of `X` is supported in `V(f)`.
pub fn complex_supported_in(ring: &Ring, x: &FreeComplex, seq: &[Poly], cap: u64) -> Result<bool> {
    for n in x.degrees() {
        if x.homology_vanishes(ring, n) {
            continue;
        }
        if !support_in(ring, &x.homology_presentation(ring, n), seq, cap)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators raised to the `p^e`-th power.
pub fn frobenius_power(ring: &Ring, gens: &[Poly], e: u32) -> Vec<Poly> {
    let q = (ring.characteristic() as u64).pow(e);
    powers(ring, gens, q)
}

/// `U = T(f^u) ⊗ P_0` with `ψ: U -> P`.
#[derive(Clone, Debug)]
pub struct BuiltU {
    pub u: u64,
    /// Exponent of the Foxby map `K(f^n; P_0) -> P`.
    pub foxby_exponent: u64,
    pub lift: TateLift,
    pub complex: FreeComplex,
    pub psi: ChainMap,
}

/// Composes a Foxby map with a Tate lift, searching the lift from `u_start`.
pub fn build_u(ring: &Ring, seq: &[Poly], u_start: u64, p: &FreeComplex, caps: &SrCaps) -> Result<BuiltU> {
    let fox = foxby_map(ring, seq, p, 1, caps.n_cap)?;
    let r = fox.n;
    let start = u_start.max(r);
    let lift = tate_to_koszul_lift(ring, seq, r, start, (caps.u_cap_factor * r).max(start))?;
    let p0 = p.module(0);
    let complex = lift.tate.complex.tensor_free(ring, p0);
    let phi = lift.map.tensor_free(ring, p0);
    let psi = fox.map.compose(ring, &phi);
    psi.validate(ring)?;
    Ok(BuiltU { u: lift.u, foxby_exponent: r, lift, complex, psi })
}

/// `(X, f: X_m -> Q)` with `V = V(f̃)`.
#[derive(Clone, Debug)]
pub struct SupportedComplexInput {
    pub complex: FreeComplex,
    pub support: Vec<Poly>,
    pub target: PresentedModule,
    /// `X_m -> G_0(Q)` on generators, `m = min(X)`.
    pub map: GradedMatrix,
}

/// The four clauses of the strong-reducer definition, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducerReport {
    pub m: Option<i64>,
    pub min_c: Option<i64>,
    pub supph: Vec<i64>,
    pub min_c_ok: bool,
    pub supph_ok: bool,
    pub epimorphism: bool,
    pub factors: bool,
    /// `pd H_m(T)`; `None` when `H_m(T) = 0`.
    pub pd: Option<usize>,
}

impl ReducerReport {
    pub fn holds(&self) -> bool {
        self.min_c_ok && self.supph_ok && self.epimorphism && self.factors
    }
}

/// Pipeline parameters chosen by [`strong_reducer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducerStages {
    pub m: i64,
    pub annihilator_exponent: u64,
    pub foxby_exponent: u64,
    pub u: u64,
    pub e: u32,
}

#[derive(Clone, Debug)]
pub struct StrongReducer {
    pub complex: FreeComplex,
    pub alpha: ChainMap,
    pub report: ReducerReport,
    pub stages: ReducerStages,
}

fn lowest_homology(ring: &Ring, x: &FreeComplex) -> Option<i64> {
    x.degrees().find(|&n| !x.homology_vanishes(ring, n))
}

/// `γ: P -> X` quasi-isomorphism with `P_n = 0` below `m`.
fn resolve_truncation(ring: &Ring, x: &FreeComplex, m: i64) -> Result<ChainMap> {
    let dm = x.diff(m);
    // Z_m presented on generators of ker ∂_m
    let (zgens, zrel) = if dm.is_zero() {
        (GradedMatrix::identity(ring, x.module(m)), GradedMatrix::zero(FreeModule::zero(), x.module(m).clone()))
    } else {
        let z = syzygies(ring, &dm);
        let rel = syzygies(ring, &z);
        (z, rel)
    };
    let up = solve_matrix(ring, &zgens, None, &x.diff(m + 1)).expect("boundaries are cycles");
    let mut terms = vec![PresentedModule::new_unchecked(zrel)];
    let mut diffs = vec![];
    if x.hi() > m {
        terms.extend((m + 1..=x.hi()).map(|n| PresentedModule::free(x.module(n).clone())));
        diffs.push(up);
        diffs.extend((m + 2..=x.hi()).map(|n| x.diff(n)));
    }
    let tau = PresentedComplex::new_unchecked(m, terms, diffs);
    let res = resolve_complex(ring, &tau, ring.nvars() + 2)?;
    let p = res.complex;
    let maps = p
        .degrees()
        .map(|n| {
            let pi = res.maps[(n - p.lo()) as usize].clone();
            if n == m {
                zgens.compose(ring, &pi)
            } else if n > x.hi() {
                GradedMatrix::zero(p.module(n).clone(), FreeModule::zero())
            } else {
                pi
            }
        })
        .collect();
    ChainMap::new(ring, p, x.clone(), maps)
}

/// Builds a strong reducer of `(X, f)` and checks it before returning.
pub fn strong_reducer(ring: &Ring, input: &SupportedComplexInput, caps: &SrCaps) -> Result<StrongReducer> {
    let x = &input.complex;
    let seq = &input.support;
    let q = &input.target;
    x.validate(ring)?;
    if seq.is_empty() {
        return Err(Error::validation("support", "need at least one generator"));
    }
    let Some(m) = lowest_homology(ring, x) else {
        return Err(Error::Precondition("the complex is exact".into()));
    };
    check_map(input, m)?;
    if !complex_supported_in(ring, x, seq, caps.n_cap)? {
        return Err(Error::Precondition("the homology of the complex is not supported in V(f)".into()));
    }
    if !support_in(ring, q, seq, caps.n_cap)? {
        return Err(Error::Precondition("the target module is not supported in V(f)".into()));
    }

    let gamma = resolve_truncation(ring, x, m)?;
    let p = gamma.source().relabeled(m);

    let mut n = 1;
    for s in seq {
        let k = annihilates_power(ring, s, q, caps.n_cap)?
            .ok_or_else(|| Error::cap("annihilator", format!("no power ≤ {} of {} kills the target", caps.n_cap, s.to_string(ring))))?;
        n = n.max(k);
    }
    let built = build_u(ring, seq, n, &p, caps)?;

    let pchar = ring.characteristic() as u64;
    let e = (0..=caps.e_max)
        .find(|&e| pchar.pow(e) >= built.u)
        .ok_or_else(|| Error::cap("frobenius", format!("p^e < u = {} for every e ≤ {}", built.u, caps.e_max)))?;
    let ideal = frobenius_power(ring, seq, e);
    let quotient = PresentedModule::quotient_ring(ring, &ideal)?;
    let res = free_resolution(ring, &quotient, ring.nvars() + 1);
    let p0 = p.module(0);
    let t = res.complex.tensor_free(ring, p0);
    let beta = lift_augmentation(ring, &t, &built.complex, &GradedMatrix::identity(ring, p0))?
        .ok_or_else(|| Error::Precondition("the surjection onto S/(f^u) ⊗ P_0 does not lift".into()))?;

    let alpha = built.psi.compose(ring, &beta).relabeled(-m);
    let alpha = gamma.compose(ring, &alpha);
    alpha.validate(ring)?;
    let t = alpha.source().clone();
    let report = verify_strong_reducer(ring, &t, &alpha, x, &input.map, q)?;
    if !report.holds() {
        return Err(Error::Precondition(format!("constructed pair fails verification: {report:?}")));
    }
    let stages = ReducerStages { m, annihilator_exponent: n, foxby_exponent: built.foxby_exponent, u: built.u, e };
    Ok(StrongReducer { complex: t, alpha, report, stages })
}

fn check_map(input: &SupportedComplexInput, m: i64) -> Result<()> {
    let f = &input.map;
    if f.source() != input.complex.module(m) {
        return Err(Error::validation("map", format!("source must be the term in degree {m}")));
    }
    if f.target() != input.target.generators() {
        return Err(Error::validation("map", "target must be the generators of Q"));
    }
    f.validate()
}

/// Checks the four clauses for `α: T -> X` and `f: X_m -> Q`, `m = min(X)`.
pub fn verify_strong_reducer(ring: &Ring, t: &FreeComplex, alpha: &ChainMap, x: &FreeComplex, f: &GradedMatrix, q: &PresentedModule) -> Result<ReducerReport> {
    if alpha.source() != t || alpha.target() != x {
        return Err(Error::validation("alpha", "must map the given T to the given X"));
    }
    alpha.validate(ring)?;
    let m = lowest_homology(ring, x);
    let stats = t.stats(ring);
    let supph: Vec<i64> = stats.supph.iter().copied().collect();
    let Some(m) = m else {
        return Ok(ReducerReport { m: None, min_c: stats.min_c, supph, min_c_ok: false, supph_ok: false, epimorphism: false, factors: false, pd: None });
    };
    if f.source() != x.module(m) || f.target() != q.generators() {
        return Err(Error::validation("map", format!("must go from the term in degree {m} to the generators of Q")));
    }
    let min_c_ok = stats.min_c == Some(m);
    let supph_ok = supph == [m];

    // Z_m(X) ⊆ α_m(Z_m(T)) + B_m(X)
    let zt = syzygies(ring, &t.diff(m));
    let image = alpha.map(m).compose(ring, &zt);
    let zx = syzygies(ring, &x.diff(m));
    let epimorphism = zx.ncols() == 0 || image_contains(ring, &image, Some(&x.diff(m + 1)), &zx);

    let composite = f.compose(ring, &alpha.map(m)).compose(ring, &t.diff(m + 1));
    let factors = composite.is_zero() || image_contains(ring, q.relations(), None, &composite);

    let hm = t.homology_presentation(ring, m);
    let pd = pd(ring, &hm);
    Ok(ReducerReport { m: Some(m), min_c: stats.min_c, supph, min_c_ok, supph_ok, epimorphism, factors, pd })
}

/// `pd(S/I^{[p^e]})` for `e = 0..=e_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub pds: Vec<Option<usize>>,
}

impl FrobeniusReport {
    pub fn invariant(&self) -> bool {
        self.pds.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn frobenius_pd_invariance(ring: &Ring, gens: &[Poly], e_max: u32) -> Result<FrobeniusReport> {
    let pds = (0..=e_max)
        .map(|e| Ok(pd(ring, &PresentedModule::quotient_ring(ring, &frobenius_power(ring, gens, e))?)))
        .collect::<Result<_>>()?;
    Ok(FrobeniusReport { pds })
}

/// `I^{[p^e]} ⊆ I^{power}`, `power` the largest such exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationStep {
    pub e: u32,
    pub q: u64,
    pub power: u64,
    pub pd: Option<usize>,
    /// The resolution of `S/I^{[q]}` terminated within the syzygy bound.
    pub pd_finite: bool,
}

fn ideal_matrix(ring: &Ring, gens: &[Poly]) -> Result<GradedMatrix> {
    Ok(PresentedModule::quotient_ring(ring, gens)?.relations().clone())
}

/// Minimal generators of `I^k`.
fn ideal_power(ring: &Ring, gens: &[Poly], k: u64) -> Result<Vec<Poly>> {
    let mut cur = vec![Poly::one(ring)];
    for _ in 0..k {
        let mut next = Vec::with_capacity(cur.len() * gens.len());
        for a in &cur {
            for g in gens {
                next.push(a.mul(ring, g));
            }
        }
        let m = ideal_matrix(ring, &next)?;
        let min = crate::groebner::prune(ring, m.source().degrees(), m.cols());
        cur = min.iter().map(|v| v.coord(ring, 0)).collect();
    }
    Ok(cur)
}

/// The Frobenius filtration compared with ordinary powers, `e = 0..=e_max`.
pub fn efd_witness(ring: &Ring, gens: &[Poly], e_max: u32) -> Result<Vec<FiltrationStep>> {
    let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Err(Error::validation("ideal", "need a nonzero generator"));
    }
    let degs: Vec<i64> = gens.iter().map(|g| g.homogeneous_degree().ok_or_else(|| Error::validation("ideal", "not homogeneous"))).collect::<Result<_>>()?;
    let dmin = *degs.iter().min().unwrap();
    if dmin == 0 {
        return Err(Error::Precondition("the unit ideal has no Frobenius filtration".into()));
    }
    let mut out = Vec::new();
    for e in 0..=e_max {
        let q = (ring.characteristic() as u64).pow(e);
        let frob = frobenius_power(ring, &gens, e);
        let fm = ideal_matrix(ring, &frob)?;
        // I^k lives in degrees ≥ k·dmin, so k is bounded by the top generator
        let bound = (q as i64 * degs.iter().max().unwrap() / dmin) as u64;
        let mut power = 0;
        for k in 1..=bound {
            let pk = ideal_matrix(ring, &ideal_power(ring, &gens, k)?)?;
            if !image_contains(ring, &pk, None, &fm) {
                break;
            }
            power = k;
        }
        let res = free_resolution(ring, &PresentedModule::quotient_ring(ring, &frob)?, ring.nvars() + 1);
        out.push(FiltrationStep { e, q, power, pd: res.length(), pd_finite: res.finished });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::koszul;

    fn ring() -> Ring {
        Ring::standard(2, &["x", "y"]).unwrap()
    }

    fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| Poly::parse(r, t).unwrap()).collect()
    }

    fn quotient(r: &Ring, s: &[&str]) -> PresentedModule {
        PresentedModule::quotient_ring(r, &polys(r, s)).unwrap()
    }

    #[test]
    fn annihilator_exponents() {
        let r = ring();
        let x = Poly::parse(&r, "x").unwrap();
        assert_eq!(annihilates_power(&r, &x, &quotient(&r, &["x^2"]), 10).unwrap(), Some(2));
        let sum = quotient(&r, &["x"]).direct_sum(&quotient(&r, &["x^3"]));
        assert_eq!(annihilates_power(&r, &x, &sum, 10).unwrap(), Some(3));
        assert_eq!(annihilates_power(&r, &x, &quotient(&r, &["y"]), 10).unwrap(), None);
        assert!(annihilates_power(&r, &x, &quotient(&r, &["y"]), 0).is_err());
    }

    #[test]
    fn supports() {
        let r = ring();
        assert!(support_in(&r, &quotient(&r, &["x^2", "y"]), &polys(&r, &["x", "y"]), 32).unwrap());
        assert!(!support_in(&r, &quotient(&r, &["x"]), &polys(&r, &["y"]), 32).unwrap());
        let k = koszul(&r, &polys(&r, &["x", "x*y"])).unwrap().complex;
        assert!(complex_supported_in(&r, &k, &polys(&r, &["x"]), 32).unwrap());
        let s = FreeComplex::concentrated(0, FreeModule::new(vec![0]));
        assert!(!complex_supported_in(&r, &s, &polys(&r, &["x"]), 32).unwrap());
    }

    #[test]
    fn build_u_on_koszul_complexes() {
        let r = ring();
        let p = koszul(&r, &polys(&r, &["x^2"])).unwrap().complex;
        let b = build_u(&r, &polys(&r, &["x"]), 2, &p, &SrCaps::default()).unwrap();
        assert_eq!(b.complex, p);
        assert_eq!(b.psi, ChainMap::identity(&r, &p));
        let p = koszul(&r, &polys(&r, &["x", "y"])).unwrap().complex;
        let b = build_u(&r, &polys(&r, &["x", "y"]), 1, &p, &SrCaps::default()).unwrap();
        assert_eq!(b.psi, ChainMap::identity(&r, &p));
    }

    #[test]
    fn reducer_for_the_principal_complex() {
        let r = ring();
        let x = koszul(&r, &polys(&r, &["x"])).unwrap().complex;
        let input = SupportedComplexInput {
            complex: x.clone(),
            support: polys(&r, &["x"]),
            target: quotient(&r, &["x"]),
            map: GradedMatrix::identity(&r, x.module(0)),
        };
        let red = strong_reducer(&r, &input, &SrCaps::default()).unwrap();
        assert!(red.report.holds());
        let shifted = red.complex.relabeled(-1);
        let up = ChainMap::zero(&shifted, &x);
        let rep = verify_strong_reducer(&r, &shifted, &up, &x, &input.map, &input.target).unwrap();
        assert!(!rep.min_c_ok);
        let zero = ChainMap::zero(&red.complex, &x);
        let rep = verify_strong_reducer(&r, &red.complex, &zero, &x, &input.map, &input.target).unwrap();
        assert!(!rep.epimorphism);
    }

    #[test]
    fn exact_input_is_rejected() {
        let r = ring();
        let f = FreeModule::new(vec![0]);
        let id = GradedMatrix::identity(&r, &f);
        let x = FreeComplex::new(&r, 0, vec![f.clone(), f.clone()], vec![id]).unwrap();
        let input = SupportedComplexInput { complex: x, support: polys(&r, &["x"]), target: PresentedModule::zero(), map: GradedMatrix::zero(f, FreeModule::zero()) };
        assert!(matches!(strong_reducer(&r, &input, &SrCaps::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn koszul_of_x_xy_with_zero_target() {
        let r = ring();
        let x = koszul(&r, &polys(&r, &["x", "x*y"])).unwrap().complex;
        let input = SupportedComplexInput {
            complex: x.clone(),
            support: polys(&r, &["x"]),
            target: PresentedModule::zero(),
            map: GradedMatrix::zero(x.module(0).clone(), FreeModule::zero()),
        };
        let red = strong_reducer(&r, &input, &SrCaps::default()).unwrap();
        assert!(red.report.holds());
    }

    #[test]
    fn frobenius() {
        let r = ring();
        let g = polys(&r, &["x+y"]);
        assert_eq!(frobenius_power(&r, &g, 1), polys(&r, &["x^2+y^2"]));
        let rep = frobenius_pd_invariance(&r, &polys(&r, &["x", "y"]), 2).unwrap();
        assert_eq!(rep.pds, vec![Some(2); 3]);
        let w = efd_witness(&r, &polys(&r, &["x", "y"]), 1).unwrap();
        assert_eq!(w[1].power, 2);
        let w = efd_witness(&r, &polys(&r, &["x"]), 2).unwrap();
        assert_eq!(w.iter().map(|s| s.power).collect::<Vec<_>>(), vec![1, 2, 4]);
    }
}
