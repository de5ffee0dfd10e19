//! Koszul complexes on homogeneous sequences and the power maps between them.

use crate::complex::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::matrix::{FreeModule, GradedMatrix};
use crate::poly::Poly;
use crate::presented::{identity_tensor, PresentedComplex, PresentedModule};
use crate::ring::Ring;
use crate::vector::Vector;

/// `K(f; S)` with exterior basis `e_I`, `I` running over index tuples in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulComplex {
    pub complex: FreeComplex,
    pub sequence: Vec<Poly>,
    /// `labels[j]` lists the index tuples of the basis of `K_j`.
    pub labels: Vec<Vec<Vec<usize>>>,
}

impl KoszulComplex {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }
}

/// All `j`-subsets of `0..d` in lexicographic order.
pub fn subsets(d: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, j, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn sequence_degrees(seq: &[Poly]) -> Result<Vec<i64>> {
    seq.iter()
        .enumerate()
        .map(|(i, f)| {
            if f.is_zero() {
                return Err(Error::validation(format!("element {i}"), "zero element in sequence"));
            }
            f.homogeneous_degree().ok_or_else(|| Error::validation(format!("element {i}"), "not homogeneous"))
        })
        .collect()
}

/// Which polynomial multiplies the face obtained by deleting the `k`-th index
/// of `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceCoefficient {
    /// `f_{i_k}`: the element indexed by the deleted entry.
    DeletedIndex,
    /// `f_k`: the element indexed by the position. Not a differential in general.
    Position,
}

fn build(ring: &Ring, seq: &[Poly], rule: FaceCoefficient) -> Result<KoszulComplex> {
    if seq.is_empty() {
        return Err(Error::validation("sequence", "need at least one element"));
    }
    let degs = sequence_degrees(seq)?;
    let d = seq.len();
    let labels: Vec<Vec<Vec<usize>>> = (0..=d).map(|j| subsets(d, j)).collect();
    let modules: Vec<FreeModule> = labels
        .iter()
        .map(|ls| FreeModule::new(ls.iter().map(|s| s.iter().map(|&i| degs[i]).sum()).collect()))
        .collect();
    let mut diffs = Vec::with_capacity(d);
    for j in 1..=d {
        let lower = &labels[j - 1];
        let cols = labels[j]
            .iter()
            .map(|s| {
                let mut v = Vector::zero();
                for k in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(k);
                    let row = lower.binary_search(&face).expect("face is a subset");
                    let coef = match rule {
                        FaceCoefficient::DeletedIndex => &seq[s[k]],
                        FaceCoefficient::Position => &seq[k],
                    };
                    let signed = if k % 2 == 0 { coef.clone() } else { coef.neg(ring) };
                    v = v.add_poly_times(ring, &signed, &Vector::basis(ring, row));
                }
                v
            })
            .collect();
        diffs.push(GradedMatrix::new_unchecked(modules[j].clone(), modules[j - 1].clone(), cols));
    }
    let complex = FreeComplex::new(ring, 0, modules, diffs)?;
    Ok(KoszulComplex { complex, sequence: seq.to_vec(), labels })
}

/// `K(f; S)`, `∂ e_I = Σ_k (-1)^k f_{i_k} e_{I \ i_k}` (0-based `k`).
pub fn koszul(ring: &Ring, seq: &[Poly]) -> Result<KoszulComplex> {
    build(ring, seq, FaceCoefficient::DeletedIndex)
}

/// Builds the complex with the chosen face coefficient, running the
/// `∂∂ = 0` validator on the result.
pub fn koszul_with_rule(ring: &Ring, seq: &[Poly], rule: FaceCoefficient) -> Result<KoszulComplex> {
    build(ring, seq, rule)
}

/// `K(f; F) = K(f; S) ⊗ F` for a free module `F`.
pub fn koszul_free_coeffs(ring: &Ring, seq: &[Poly], f: &FreeModule) -> Result<FreeComplex> {
    Ok(koszul(ring, seq)?.complex.tensor_free(ring, f))
}

/// `K(f; M) = K(f; S) ⊗ M` for a presented module.
pub fn koszul_with_coeffs(ring: &Ring, seq: &[Poly], m: &PresentedModule) -> Result<PresentedComplex> {
    let k = koszul(ring, seq)?.complex;
    let g0 = m.generators();
    let terms = k
        .degrees()
        .map(|j| PresentedModule::new_unchecked(identity_tensor(ring, k.module(j), m.relations())))
        .collect();
    let diffs = (1..=k.hi()).map(|j| k.diff(j).tensor_identity(ring, g0)).collect();
    Ok(PresentedComplex::new_unchecked(0, terms, diffs))
}

/// Sequence of `n`-th powers.
pub fn powers(ring: &Ring, seq: &[Poly], n: u64) -> Vec<Poly> {
    seq.iter().map(|f| f.pow(ring, n)).collect()
}

/// `κ^{n,m}: K(f^n) -> K(f^m)`, `e_I ↦ (Π_{i∈I} f_i)^{n-m} e_I`.
pub fn kappa(ring: &Ring, n: u64, m: u64, seq: &[Poly]) -> Result<ChainMap> {
    if n < m || m < 1 {
        return Err(Error::validation("kappa", format!("need n ≥ m ≥ 1, got n={n}, m={m}")));
    }
    let src = koszul(ring, &powers(ring, seq, n))?;
    let tgt = koszul(ring, &powers(ring, seq, m))?;
    kappa_between(ring, &src, &tgt, seq, n - m)
}

pub(crate) fn kappa_between(ring: &Ring, src: &KoszulComplex, tgt: &KoszulComplex, seq: &[Poly], e: u64) -> Result<ChainMap> {
    let maps = src
        .labels
        .iter()
        .enumerate()
        .map(|(j, ls)| {
            let cols = ls
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    let mut prod = Poly::one(ring);
                    for &i in s {
                        prod = prod.mul(ring, &seq[i]);
                    }
                    Vector::basis(ring, c).mul_poly(ring, &prod.pow(ring, e))
                })
                .collect();
            GradedMatrix::new_unchecked(src.complex.module(j as i64).clone(), tgt.complex.module(j as i64).clone(), cols)
        })
        .collect();
    ChainMap::new(ring, src.complex.clone(), tgt.complex.clone(), maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::standard(2, &["x", "y", "z"]).unwrap()
    }

    fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| Poly::parse(r, t).unwrap()).collect()
    }

    #[test]
    fn twists_of_koszul_on_two_variables() {
        let r = ring();
        let k = koszul(&r, &polys(&r, &["x", "y"])).unwrap();
        let tw: Vec<Vec<i64>> = (0..=2).map(|j| k.complex.module(j).twists()).collect();
        assert_eq!(tw, vec![vec![0], vec![-1, -1], vec![-2]]);
        let d2 = k.complex.diff(2).rows(&r);
        assert_eq!(d2[0][0].to_string(&r), "y");
        assert_eq!(d2[1][0].to_string(&r), "x");
    }

    #[test]
    fn positional_rule_is_rejected() {
        let r = Ring::standard(3, &["x", "y", "z"]).unwrap();
        let seq = polys(&r, &["x", "y", "z"]);
        assert!(koszul_with_rule(&r, &seq, FaceCoefficient::DeletedIndex).is_ok());
        let err = koszul_with_rule(&r, &seq, FaceCoefficient::Position).unwrap_err();
        assert!(matches!(err, Error::Validation { .. }));
    }

    #[test]
    fn kappa_identity_and_composition() {
        let r = Ring::standard(5, &["x", "y"]).unwrap();
        let seq = polys(&r, &["x", "x*y"]);
        let id = kappa(&r, 2, 2, &seq).unwrap();
        assert_eq!(id, ChainMap::identity(&r, id.source()));
        let k41 = kappa(&r, 4, 1, &seq).unwrap();
        let k42 = kappa(&r, 4, 2, &seq).unwrap();
        let k21 = kappa(&r, 2, 1, &seq).unwrap();
        assert_eq!(k21.compose(&r, &k42), k41);
        assert!(kappa(&r, 1, 2, &seq).is_err());
    }

    #[test]
    fn kappa_top_entry() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let k = kappa(&r, 2, 1, &polys(&r, &["x", "y"])).unwrap();
        assert_eq!(k.map(2).entry(&r, 0, 0).to_string(&r), "x*y");
        assert_eq!(k.map(0).entry(&r, 0, 0).to_string(&r), "1");
    }

    #[test]
    fn inhomogeneous_rejected() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        assert!(koszul(&r, &polys(&r, &["x + y^2"])).is_err());
    }
}
