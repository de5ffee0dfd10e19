//! Graded Tate resolutions of `S/(f)`, lifts of Tate complexes to Koszul
//! complexes, the directed system they form, and Foxby maps.

use crate::complex::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, columns_matrix, syzygies};
use crate::koszul::{kappa_between, koszul, powers, KoszulComplex};
use crate::lift::{extend_chain_map, PartialMap};
use crate::matrix::GradedMatrix;
use crate::poly::Poly;
use crate::ring::Ring;
use crate::vector::Vector;

/// `T(f)`: the Koszul complex `K(f)` with extra generators adjoined in degrees
/// `≥ 2` until every cycle bounds. In degree `r` the first `C(d, r)` generators
/// are the Koszul ones.
#[derive(Clone, Debug)]
pub struct TateResolution {
    pub complex: FreeComplex,
    pub koszul: KoszulComplex,
    /// `extras[r]` are the cycles of `T_{r-1}` hit by the extra generators of `T_r`.
    pub extras: Vec<Vec<Vector>>,
    pub finished: bool,
}

impl TateResolution {
    pub fn koszul_rank(&self, r: i64) -> usize {
        self.koszul.complex.module(r).rank()
    }

    /// Twists (`S(n)` shifts) of the extra generators in degree `r`.
    pub fn extra_twists(&self, r: i64) -> Vec<i64> {
        let k = self.koszul_rank(r);
        self.complex.module(r).twists()[k..].to_vec()
    }

    /// Inclusion `K(f) -> T(f)`.
    pub fn inclusion(&self, ring: &Ring) -> ChainMap {
        let k = &self.koszul.complex;
        let maps = k
            .degrees()
            .map(|n| {
                let cols = (0..k.module(n).rank()).map(|i| Vector::basis(ring, i)).collect();
                GradedMatrix::new_unchecked(k.module(n).clone(), self.complex.module(n).clone(), cols)
            })
            .collect();
        ChainMap::new_unchecked(k.clone(), self.complex.clone(), maps)
    }
}

/// Builds `T(f)` with at most `max_len` differentials.
///
/// The extra generators in degree `r` are minimal generators of `Z_{r-1}`
/// modulo the image of the Koszul part of `T_r`.
pub fn tate(ring: &Ring, seq: &[Poly], max_len: usize) -> Result<TateResolution> {
    let kz = koszul(ring, seq)?;
    let k = &kz.complex;
    let d = seq.len() as i64;
    let mut modules = vec![k.module(0).clone(), k.module(1).clone()];
    let mut diffs = vec![k.diff(1)];
    let mut extras = vec![Vec::new(), Vec::new()];
    let mut finished = false;
    let mut r: i64 = 2;
    loop {
        let prev = modules[(r - 1) as usize].clone();
        let d_prev = diffs[(r - 2) as usize].clone();
        let z = syzygies(ring, &d_prev);
        // Koszul part of ∂_r, padded by zeros on the extras of T_{r-1}
        let kr = k.module(r).clone();
        let kd = k.diff(r);
        let kcols: Vec<Vector> = kd.cols().to_vec();
        let mut flagged: Vec<(Vector, bool)> = kcols.iter().map(|c| (c.clone(), true)).collect();
        let nk = flagged.len();
        flagged.extend(z.cols().iter().map(|c| (c.clone(), false)));
        let (_, kept) = buchberger(ring, prev.degrees(), &flagged);
        let new_cycles: Vec<Vector> = z.cols().iter().enumerate().filter(|(i, _)| kept[nk + i]).map(|(_, c)| c.clone()).collect();
        if r > d && new_cycles.is_empty() {
            finished = true;
            break;
        }
        if r as usize > max_len {
            break;
        }
        let extra = columns_matrix(&prev, new_cycles.clone());
        let module = kr.direct_sum(extra.source());
        let mut cols = kcols;
        cols.extend(new_cycles.iter().cloned());
        let dr = GradedMatrix::new_unchecked(module.clone(), prev, cols);
        modules.push(module);
        diffs.push(dr);
        extras.push(new_cycles);
        r += 1;
    }
    let bound = (ring.nvars() + seq.len()) as i64;
    if finished {
        assert!(r - 1 <= bound, "Tate construction exceeded the expected length bound");
    }
    let complex = FreeComplex::new(ring, 0, modules, diffs)?;
    Ok(TateResolution { complex, koszul: kz, extras, finished })
}

fn tate_full(ring: &Ring, seq: &[Poly]) -> Result<TateResolution> {
    let t = tate(ring, seq, ring.nvars() + seq.len() + 1)?;
    if !t.finished {
        return Err(Error::cap("tate", "construction did not finish within #variables + length steps"));
    }
    Ok(t)
}

/// A chain map `φ: T(f^u) -> K(f^r)` restricting to `κ^{u,r}` on the Koszul part.
#[derive(Clone, Debug)]
pub struct TateLift {
    pub u: u64,
    pub tate: TateResolution,
    pub target: KoszulComplex,
    pub map: ChainMap,
}

fn try_lift(ring: &Ring, seq: &[Poly], r: u64, u: u64) -> Result<Option<TateLift>> {
    let t = tate_full(ring, &powers(ring, seq, u))?;
    let target = koszul(ring, &powers(ring, seq, r))?;
    let kap = kappa_between(ring, &t.koszul, &target, seq, u - r)?;
    let fixed: PartialMap = t
        .complex
        .degrees()
        .map(|n| {
            let kr = t.koszul_rank(n);
            let k = kap.map(n);
            (0..t.complex.module(n).rank()).map(|c| if c < kr { Some(k.col(c).clone()) } else { None }).collect()
        })
        .collect();
    Ok(extend_chain_map(ring, &t.complex, &target.complex, &fixed)?.map(|map| TateLift { u, tate: t, target, map }))
}

/// First `u` in `[u_start, u_cap]` for which `κ^{u,r}` extends over `T(f^u)`.
pub fn tate_to_koszul_lift(ring: &Ring, seq: &[Poly], r: u64, u_start: u64, u_cap: u64) -> Result<TateLift> {
    if r < 1 {
        return Err(Error::validation("r", "must be at least 1"));
    }
    if u_start < r {
        return Err(Error::validation("u_start", format!("must be at least r = {r}")));
    }
    for u in u_start..=u_cap {
        if let Some(l) = try_lift(ring, seq, r, u)? {
            return Ok(l);
        }
    }
    Err(Error::cap(
        "tate_to_koszul_lift",
        format!("no lift of κ^(u,{r}) over T(f^u) for u in [{u_start}, {u_cap}]; the last obstruction was at u = {u_cap}"),
    ))
}

/// One step of the directed system: `T(f^{n_{k+1}}) -> T(f^{n_k})`.
#[derive(Clone, Debug)]
pub struct DirectedStep {
    pub exponent: u64,
    pub tate: TateResolution,
    /// Map from the next stage into this one (`None` on the last stage).
    pub map: Option<ChainMap>,
}

/// Stages `T(f^{n_1}) <- T(f^{n_2}) <- ...` with `n_1 = u_start` and
/// `n_{k+1}` the lift exponent found from `n_k + min_step`.
pub fn tate_directed_system(ring: &Ring, seq: &[Poly], depth: usize, u_start: u64, min_step: u64, u_cap_factor: u64) -> Result<Vec<DirectedStep>> {
    if depth < 1 {
        return Err(Error::validation("depth", "must be at least 1"));
    }
    let mut steps = vec![DirectedStep { exponent: u_start, tate: tate_full(ring, &powers(ring, seq, u_start))?, map: None }];
    while steps.len() < depth {
        let last = steps.last().unwrap();
        let n = last.exponent;
        let lift = tate_to_koszul_lift(ring, seq, n, n + min_step, (u_cap_factor * n).max(n + min_step))?;
        let map = last.tate.inclusion(ring).compose(ring, &lift.map);
        map.validate(ring)?;
        steps.last_mut().unwrap().map = Some(map);
        steps.push(DirectedStep { exponent: lift.u, tate: lift.tate, map: None });
    }
    Ok(steps)
}

/// A chain map `δ: K(f^n; P_0) -> P` that is the identity in degree 0.
#[derive(Clone, Debug)]
pub struct FoxbyMap {
    pub n: u64,
    pub source: FreeComplex,
    pub map: ChainMap,
}

/// Searches `n` in `[n_start, n_cap]` for a Foxby map into `P`, where
/// `P` starts in degree 0.
pub fn foxby_map(ring: &Ring, seq: &[Poly], p: &FreeComplex, n_start: u64, n_cap: u64) -> Result<FoxbyMap> {
    if p.lo() != 0 || p.min_c() != Some(0) {
        return Err(Error::Precondition("the complex must start with a nonzero term in degree 0".into()));
    }
    let p0 = p.module(0).clone();
    for n in n_start.max(1)..=n_cap {
        let k = koszul(ring, &powers(ring, seq, n))?.complex.tensor_free(ring, &p0);
        let mut fixed: PartialMap = k.degrees().map(|j| vec![None; k.module(j).rank()]).collect();
        fixed[0] = (0..p0.rank()).map(|i| Some(Vector::basis(ring, i))).collect();
        if let Some(map) = extend_chain_map(ring, &k, p, &fixed)? {
            return Ok(FoxbyMap { n, source: k, map });
        }
    }
    Err(Error::cap("foxby_map", format!("no Foxby map for n in [{n_start}, {n_cap}]")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| Poly::parse(r, t).unwrap()).collect()
    }

    #[test]
    fn regular_sequence_adds_nothing() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let seq = polys(&r, &["x", "y"]);
        let t = tate(&r, &seq, 5).unwrap();
        assert!(t.finished);
        assert_eq!(t.complex, koszul(&r, &seq).unwrap().complex);
    }

    #[test]
    fn tate_of_x_xy() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let t = tate(&r, &polys(&r, &["x", "x*y"]), 6).unwrap();
        assert!(t.finished);
        assert_eq!(t.complex.hi(), 3);
        assert_eq!(t.complex.module(2).twists(), vec![-3, -2]);
        assert_eq!(t.complex.module(3).twists(), vec![-3]);
        let d3 = t.complex.diff(3).rows(&r);
        assert_eq!(d3[0][0].to_string(&r), "1");
        assert_eq!(d3[1][0].to_string(&r), "x");
        for n in 1..=3 {
            assert!(t.complex.homology_vanishes(&r, n));
        }
    }

    #[test]
    fn lifts() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let seq = polys(&r, &["x", "x*y"]);
        for rr in 1..=2 {
            let l = tate_to_koszul_lift(&r, &seq, rr, rr, 16 * rr).unwrap();
            l.map.validate(&r).unwrap();
            eprintln!("r={rr} u={}", l.u);
        }
        let reg = polys(&r, &["x", "y"]);
        let l = tate_to_koszul_lift(&r, &reg, 2, 2, 32).unwrap();
        assert_eq!(l.u, 2);
        assert_eq!(l.map, ChainMap::identity(&r, &l.tate.complex));
    }

    #[test]
    fn foxby_examples() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let p = koszul(&r, &polys(&r, &["x^2"])).unwrap().complex;
        let f = foxby_map(&r, &polys(&r, &["x"]), &p, 1, 8).unwrap();
        assert_eq!(f.n, 2);
        assert_eq!(f.map.map(1).entry(&r, 0, 0).to_string(&r), "1");
    }
}
