//! Gröbner results checked against a brute-force dense model.
//!
//! The model here never calls into the engine's linear algebra: polynomials
//! become maps from exponent vectors to coefficients, graded pieces are
//! enumerated directly, and ranks come from a local Gaussian elimination.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kt_core::groebner::{groebner_basis, image_contains, minimal_generators, normal_form, syzygies, SubmoduleBasis};
use kt_core::koszul::{kappa, koszul};
use kt_core::sr::{frobenius_power, support_in};
use kt_core::{FreeComplex, FreeModule, GradedMatrix, Poly, PresentedModule, Ring, Vector};

type Exps = Vec<u32>;
type Sparse = BTreeMap<(usize, Exps), u32>;

/// Exponent vectors of weighted degree `t`.
fn monomials(weights: &[u32], t: i64) -> Vec<Exps> {
    if t < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; weights.len()];
    fn go(w: &[u32], i: usize, left: i64, cur: &mut Exps, out: &mut Vec<Exps>) {
        if i == w.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e as i64 * w[i] as i64 <= left {
            cur[i] = e;
            go(w, i + 1, left - e as i64 * w[i] as i64, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    go(weights, 0, t, &mut cur, &mut out);
    out
}

fn rank_mod(p: u32, mut rows: Vec<Vec<u32>>) -> usize {
    let p = p as u64;
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c] as u64, p - 2, p);
        for v in rows[rank].iter_mut() {
            *v = (*v as u64 * inv % p) as u32;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c] as u64;
                for (v, w) in row.iter_mut().zip(&pivot) {
                    *v = ((*v as u64 + (p - f) * *w as u64) % p) as u32;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// `mono * v` as a sparse map.
fn times(ring: &Ring, v: &Vector, mono: &[u32]) -> Sparse {
    let p = ring.characteristic();
    let mut out = Sparse::new();
    for t in v.terms() {
        let e: Exps = t.mono.exps().iter().zip(mono).map(|(a, b)| a + b).collect();
        let c = out.entry((t.pos, e)).or_insert(0);
        *c = (*c + t.coef) % p;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// The degree-`t` basis `(i, m)` of a free module, `deg m = t - a_i`.
fn piece_basis(ring: &Ring, f: &FreeModule, t: i64) -> Vec<(usize, Exps)> {
    f.degrees().iter().enumerate().flat_map(|(i, a)| monomials(ring.weights(), t - a).into_iter().map(move |m| (i, m))).collect()
}

/// Columns of `A` in degree `t` as dense rows over the target basis.
fn image_rows(ring: &Ring, a: &GradedMatrix, t: i64) -> Vec<Vec<u32>> {
    let tgt = piece_basis(ring, a.target(), t);
    let index: BTreeMap<&(usize, Exps), usize> = tgt.iter().enumerate().map(|(k, b)| (b, k)).collect();
    piece_basis(ring, a.source(), t)
        .iter()
        .map(|(i, m)| {
            let mut row = vec![0; tgt.len()];
            for (key, c) in times(ring, a.col(*i), m) {
                row[index[&key]] = c;
            }
            row
        })
        .collect()
}

fn span_dim(ring: &Ring, a: &GradedMatrix, t: i64) -> usize {
    let rows = image_rows(ring, a, t);
    if rows.is_empty() {
        0
    } else {
        rank_mod(ring.characteristic(), rows)
    }
}

fn kernel_dim(ring: &Ring, a: &GradedMatrix, t: i64) -> usize {
    piece_basis(ring, a.source(), t).len() - span_dim(ring, a, t)
}

fn homology_dim(ring: &Ring, x: &FreeComplex, n: i64, t: i64) -> usize {
    let z = kernel_dim(ring, &x.diff(n), t);
    let b = span_dim(ring, &x.diff(n + 1), t);
    z - b
}

fn random_poly(ring: &Ring, rng: &mut ChaCha8Rng, d: i64) -> Poly {
    let p = ring.characteristic();
    let mut terms = Vec::new();
    for e in monomials(ring.weights(), d) {
        if rng.gen_bool(0.5) {
            terms.push((ring.mono(&e), rng.gen_range(1..p)));
        }
    }
    let f = Poly::from_terms(ring, terms);
    if f.is_zero() {
        Poly::from_terms(ring, [(ring.mono(&monomials(ring.weights(), d)[0]), 1)])
    } else {
        f
    }
}

fn ring_for(p: u32) -> Ring {
    Ring::standard(p, &["x", "y", "z"]).unwrap()
}

/// A row of `k` random forms, as a map `S(-d_1) ⊕ ... -> S`.
fn random_row(ring: &Ring, rng: &mut ChaCha8Rng, k: usize) -> (Vec<Poly>, GradedMatrix) {
    let polys: Vec<Poly> = (0..k)
        .map(|_| {
            let d = rng.gen_range(1..=3);
            random_poly(ring, rng, d)
        })
        .collect();
    let m = PresentedModule::quotient_ring(ring, &polys).unwrap().relations().clone();
    (polys, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn syzygies_are_sound_and_complete(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5]), k in 1usize..4) {
        let ring = ring_for(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a) = random_row(&ring, &mut rng, k);
        let z = syzygies(&ring, &a);
        prop_assert!(a.compose(&ring, &z).is_zero());
        for t in 0..=6 {
            prop_assert_eq!(span_dim(&ring, &z, t), kernel_dim(&ring, &a, t), "t = {}", t);
        }
    }

    #[test]
    fn koszul_homology_matches_the_dense_model(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3]), k in 1usize..4) {
        let ring = ring_for(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (seq, _) = random_row(&ring, &mut rng, k);
        let x = koszul(&ring, &seq).unwrap().complex;
        for n in x.degrees() {
            for t in 0..=6 {
                prop_assert_eq!(x.homology_dim(&ring, n, t), homology_dim(&ring, &x, n, t), "H_{} in degree {}", n, t);
            }
        }
    }

    #[test]
    fn euler_characteristic_of_homology(seed in any::<u64>(), k in 1usize..4) {
        let ring = ring_for(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (seq, _) = random_row(&ring, &mut rng, k);
        let x = koszul(&ring, &seq).unwrap().complex;
        for t in 0..=6 {
            let h: i64 = x.degrees().map(|n| {
                let d = x.homology_dim(&ring, n, t) as i64;
                if n % 2 == 0 { d } else { -d }
            }).sum();
            prop_assert_eq!(x.euler_characteristic(&ring, t), h);
        }
    }

    #[test]
    fn quotient_hilbert_function(seed in any::<u64>(), k in 1usize..4) {
        let ring = ring_for(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (seq, a) = random_row(&ring, &mut rng, k);
        let q = PresentedModule::quotient_ring(&ring, &seq).unwrap();
        for t in 0..=6 {
            prop_assert_eq!(q.hilbert(&ring, t), monomials(ring.weights(), t).len() - span_dim(&ring, &a, t));
        }
    }

    #[test]
    fn normal_forms(seed in any::<u64>(), k in 1usize..4) {
        let ring = ring_for(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a) = random_row(&ring, &mut rng, k);
        let gb = groebner_basis(&ring, &SubmoduleBasis::from_matrix(&a)).unwrap();
        for _ in 0..4 {
            let d = rng.gen_range(1..=4);
            let f = Vector::from_coords(&ring, &[random_poly(&ring, &mut rng, d)]);
            let nf = normal_form(&ring, &f, &gb).unwrap();
            prop_assert_eq!(normal_form(&ring, &nf, &gb).unwrap(), nf.clone());
            let diff = GradedMatrix::new(FreeModule::new(vec![d]), FreeModule::new(vec![0]), vec![f.sub(&ring, &nf)]).unwrap();
            prop_assert!(diff.is_zero() || image_contains(&ring, &a, None, &diff));
            // no term of the remainder is divisible by a lead term
            for t in nf.terms() {
                prop_assert!(gb.gens.iter().all(|g| !g.lead().unwrap().mono.divides(&t.mono)));
            }
        }
        for g in a.cols() {
            prop_assert!(normal_form(&ring, g, &gb).unwrap().is_zero());
        }
    }

    #[test]
    fn minimal_generators_are_idempotent_and_span(seed in any::<u64>(), k in 1usize..5) {
        let ring = ring_for(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut seq, _) = random_row(&ring, &mut rng, k);
        // a redundant generator
        seq.push(seq[0].mul(&ring, &random_poly(&ring, &mut rng, 1)));
        let a = PresentedModule::quotient_ring(&ring, &seq).unwrap().relations().clone();
        let b = SubmoduleBasis::from_matrix(&a);
        let m = minimal_generators(&ring, &b).unwrap();
        prop_assert!(m.gens.len() < seq.len());
        prop_assert_eq!(minimal_generators(&ring, &m).unwrap().gens, m.gens.clone());
        let mm = m.to_matrix();
        for t in 0..=6 {
            prop_assert_eq!(span_dim(&ring, &mm, t), span_dim(&ring, &a, t));
        }
    }

    #[test]
    fn frobenius_powers_compose(seed in any::<u64>(), a in 0u32..3, b in 0u32..3) {
        let ring = ring_for(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (seq, _) = random_row(&ring, &mut rng, 2);
        let lhs = frobenius_power(&ring, &frobenius_power(&ring, &seq, a), b);
        prop_assert_eq!(lhs, frobenius_power(&ring, &seq, a + b));
    }

    #[test]
    fn support_depends_only_on_the_radical(seed in any::<u64>()) {
        let ring = ring_for(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (gens, _) = random_row(&ring, &mut rng, 2);
        let q = PresentedModule::quotient_ring(&ring, &gens).unwrap();
        let x = Poly::parse(&ring, "x").unwrap();
        let xy = Poly::parse(&ring, "x*y").unwrap();
        let x2 = Poly::parse(&ring, "x^2").unwrap();
        let a = support_in(&ring, &q, &[x.clone(), xy.clone()], 32).unwrap();
        let b = support_in(&ring, &q, &[x.clone(), xy, x2], 32).unwrap();
        let c = support_in(&ring, &q, &[x], 32).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a, c);
    }
}

#[test]
fn kappa_maps_compose() {
    let ring = ring_for(3);
    let seq: Vec<Poly> = ["x", "x*y", "z^2"].iter().map(|s| Poly::parse(&ring, s).unwrap()).collect();
    for (n, m, l) in [(3, 2, 1), (4, 2, 1), (4, 3, 3), (5, 3, 2)] {
        let direct = kappa(&ring, n, l, &seq).unwrap();
        let composite = kappa(&ring, m, l, &seq).unwrap().compose(&ring, &kappa(&ring, n, m, &seq).unwrap());
        assert_eq!(composite, direct, "κ^({m},{l}) κ^({n},{m})");
    }
}

#[test]
fn regular_sequence_koszul_is_a_resolution() {
    let ring = ring_for(2);
    let seq: Vec<Poly> = ["x", "y", "z"].iter().map(|s| Poly::parse(&ring, s).unwrap()).collect();
    let x = koszul(&ring, &seq).unwrap().complex;
    for t in 0..=6 {
        assert_eq!(homology_dim(&ring, &x, 0, t), usize::from(t == 0));
        for n in 1..=3 {
            assert_eq!(homology_dim(&ring, &x, n, t), 0);
        }
    }
}
