//! Twisted graded free modules and degree-zero matrices between them.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::vector::{Term, Vector};

/// `⊕ S(-a_i)`: generator `i` sits in internal degree `a_i`.
///
/// The conventional "twist" of summand `i` is `-a_i`; see [`FreeModule::twists`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FreeModule {
    degrees: Vec<i64>,
}

impl FreeModule {
    pub fn new(degrees: Vec<i64>) -> FreeModule {
        FreeModule { degrees }
    }

    pub fn zero() -> FreeModule {
        FreeModule { degrees: Vec::new() }
    }

    /// Builds from twists `n_i` meaning `⊕ S(n_i)`.
    pub fn from_twists(twists: &[i64]) -> FreeModule {
        FreeModule { degrees: twists.iter().map(|t| -t).collect() }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn twists(&self) -> Vec<i64> {
        self.degrees.iter().map(|d| -d).collect()
    }

    pub fn direct_sum(&self, other: &FreeModule) -> FreeModule {
        let mut d = self.degrees.clone();
        d.extend_from_slice(&other.degrees);
        FreeModule { degrees: d }
    }

    /// `M(-k)`: every generator degree raised by `k`.
    pub fn shifted(&self, k: i64) -> FreeModule {
        FreeModule { degrees: self.degrees.iter().map(|d| d + k).collect() }
    }

    /// `Hom(M, S)`.
    pub fn dual(&self) -> FreeModule {
        FreeModule { degrees: self.degrees.iter().map(|d| -d).collect() }
    }

    /// `self ⊗ other`, generators ordered with `self`'s index major.
    pub fn tensor(&self, other: &FreeModule) -> FreeModule {
        let mut d = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.degrees {
            for b in &other.degrees {
                d.push(a + b);
            }
        }
        FreeModule { degrees: d }
    }

    /// Dimension of the internal-degree-`t` piece.
    pub fn piece_dim(&self, ring: &Ring, t: i64) -> usize {
        self.degrees.iter().map(|a| ring.hilbert_function(t - a)).sum()
    }
}

/// A degree-zero map `source -> target`, stored by columns (one column per
/// source generator). Entry `(i, j)` is homogeneous of degree
/// `source.degrees[j] - target.degrees[i]` or zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedMatrix {
    source: FreeModule,
    target: FreeModule,
    cols: Vec<Vector>,
}

impl GradedMatrix {
    pub fn new(source: FreeModule, target: FreeModule, cols: Vec<Vector>) -> Result<GradedMatrix> {
        let m = GradedMatrix { source, target, cols };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: FreeModule, target: FreeModule, cols: Vec<Vector>) -> GradedMatrix {
        debug_assert_eq!(source.rank(), cols.len());
        GradedMatrix { source, target, cols }
    }

    /// Row-major constructor: `rows[i][j]` is the entry for target `i`, source `j`.
    pub fn from_rows(ring: &Ring, source: FreeModule, target: FreeModule, rows: &[Vec<Poly>]) -> Result<GradedMatrix> {
        if rows.len() != target.rank() {
            return Err(Error::validation("matrix", format!("{} rows for target of rank {}", rows.len(), target.rank())));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != source.rank() {
                return Err(Error::validation("matrix", format!("row {i} has {} entries, expected {}", r.len(), source.rank())));
            }
        }
        let cols = (0..source.rank())
            .map(|j| {
                let coords: Vec<Poly> = rows.iter().map(|r| r[j].clone()).collect();
                Vector::from_coords(ring, &coords)
            })
            .collect();
        GradedMatrix::new(source, target, cols)
    }

    pub fn zero(source: FreeModule, target: FreeModule) -> GradedMatrix {
        let n = source.rank();
        GradedMatrix { source, target, cols: vec![Vector::zero(); n] }
    }

    pub fn identity(ring: &Ring, m: &FreeModule) -> GradedMatrix {
        let cols = (0..m.rank()).map(|i| Vector::basis(ring, i)).collect();
        GradedMatrix { source: m.clone(), target: m.clone(), cols }
    }

    /// Scalar multiple of the identity.
    pub fn scalar(ring: &Ring, m: &FreeModule, c: u32) -> GradedMatrix {
        let cols = (0..m.rank()).map(|i| Vector::basis(ring, i).scale(ring, c)).collect();
        GradedMatrix { source: m.clone(), target: m.clone(), cols }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cols.len() != self.source.rank() {
            return Err(Error::validation("matrix", "column count differs from source rank"));
        }
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(p) = c.max_pos() {
                if p >= self.target.rank() {
                    return Err(Error::validation("matrix", format!("column {j} exceeds target rank")));
                }
            }
            if c.is_zero() {
                continue;
            }
            match c.homogeneous_degree(self.target.degrees()) {
                Some(d) if d == self.source.degrees()[j] => {}
                Some(d) => {
                    return Err(Error::validation(
                        "matrix",
                        format!("column {j} has degree {d}, expected {} (not a degree-zero map)", self.source.degrees()[j]),
                    ))
                }
                None => return Err(Error::validation("matrix", format!("column {j} is not homogeneous"))),
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn cols(&self) -> &[Vector] {
        &self.cols
    }

    pub fn col(&self, j: usize) -> &Vector {
        &self.cols[j]
    }

    pub fn nrows(&self) -> usize {
        self.target.rank()
    }

    pub fn ncols(&self) -> usize {
        self.source.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn entry(&self, ring: &Ring, i: usize, j: usize) -> Poly {
        self.cols[j].coord(ring, i)
    }

    pub fn rows(&self, ring: &Ring) -> Vec<Vec<Poly>> {
        let by_col: Vec<Vec<Poly>> = self.cols.iter().map(|c| c.coords(ring, self.nrows())).collect();
        (0..self.nrows()).map(|i| by_col.iter().map(|c| c[i].clone()).collect()).collect()
    }

    /// Image of a source vector.
    pub fn apply(&self, ring: &Ring, v: &Vector) -> Vector {
        let mut acc = Vector::zero();
        for t in v.terms() {
            acc = acc.add_scaled(ring, t.coef, &t.mono, &self.cols[t.pos]);
        }
        acc
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, ring: &Ring, rhs: &GradedMatrix) -> GradedMatrix {
        debug_assert_eq!(rhs.target.rank(), self.source.rank());
        let cols = rhs.cols.iter().map(|c| self.apply(ring, c)).collect();
        GradedMatrix { source: rhs.source.clone(), target: self.target.clone(), cols }
    }

    pub fn add(&self, ring: &Ring, other: &GradedMatrix) -> GradedMatrix {
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| a.add(ring, b)).collect();
        GradedMatrix { source: self.source.clone(), target: self.target.clone(), cols }
    }

    pub fn sub(&self, ring: &Ring, other: &GradedMatrix) -> GradedMatrix {
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| a.sub(ring, b)).collect();
        GradedMatrix { source: self.source.clone(), target: self.target.clone(), cols }
    }

    pub fn neg(&self, ring: &Ring) -> GradedMatrix {
        let cols = self.cols.iter().map(|a| a.neg(ring)).collect();
        GradedMatrix { source: self.source.clone(), target: self.target.clone(), cols }
    }

    /// `[self | other]` over a common target.
    pub fn hstack(&self, other: &GradedMatrix) -> GradedMatrix {
        debug_assert_eq!(self.target, other.target);
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        GradedMatrix { source: self.source.direct_sum(&other.source), target: self.target.clone(), cols }
    }

    /// Block matrix `[[a, b], [c, d]]` with `a: s1 -> t1`, `b: s2 -> t1`,
    /// `c: s1 -> t2`, `d: s2 -> t2`.
    pub fn block(a: &GradedMatrix, b: &GradedMatrix, c: &GradedMatrix, d: &GradedMatrix) -> GradedMatrix {
        let t1 = a.target.rank();
        let mut cols = Vec::with_capacity(a.ncols() + b.ncols());
        for j in 0..a.ncols() {
            cols.push(a.cols[j].concat(t1, &c.cols[j]));
        }
        for j in 0..b.ncols() {
            cols.push(b.cols[j].concat(t1, &d.cols[j]));
        }
        GradedMatrix {
            source: a.source.direct_sum(&b.source),
            target: a.target.direct_sum(&c.target),
            cols,
        }
    }

    pub fn direct_sum(&self, other: &GradedMatrix) -> GradedMatrix {
        GradedMatrix::block(
            self,
            &GradedMatrix::zero(other.source.clone(), self.target.clone()),
            &GradedMatrix::zero(self.source.clone(), other.target.clone()),
            other,
        )
    }

    /// Keeps only the given columns.
    pub fn select_cols(&self, idx: &[usize]) -> GradedMatrix {
        GradedMatrix {
            source: FreeModule::new(idx.iter().map(|&j| self.source.degrees()[j]).collect()),
            target: self.target.clone(),
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    /// Rows `[lo, hi)` as a map into the corresponding summand of the target.
    pub fn row_block(&self, lo: usize, hi: usize) -> GradedMatrix {
        GradedMatrix {
            source: self.source.clone(),
            target: FreeModule::new(self.target.degrees()[lo..hi].to_vec()),
            cols: self.cols.iter().map(|c| c.slice(lo, hi)).collect(),
        }
    }

    /// Transpose, viewed as the dual map `Hom(target, S) -> Hom(source, S)`.
    pub fn transpose(&self, ring: &Ring) -> GradedMatrix {
        let mut new_cols: Vec<Vec<Term>> = vec![Vec::new(); self.nrows()];
        for (j, c) in self.cols.iter().enumerate() {
            for t in c.terms() {
                new_cols[t.pos].push(Term { pos: j, mono: t.mono.clone(), coef: t.coef });
            }
        }
        GradedMatrix {
            source: self.target.dual(),
            target: self.source.dual(),
            cols: new_cols.into_iter().map(|ts| Vector::from_terms(ring, ts)).collect(),
        }
    }

    /// `self ⊗ id_F`, with basis ordering matching [`FreeModule::tensor`].
    pub fn tensor_identity(&self, ring: &Ring, f: &FreeModule) -> GradedMatrix {
        let k = f.rank();
        let mut cols = Vec::with_capacity(self.ncols() * k);
        for c in &self.cols {
            for l in 0..k {
                cols.push(Vector::from_terms(
                    ring,
                    c.terms().iter().map(|t| Term { pos: t.pos * k + l, mono: t.mono.clone(), coef: t.coef }),
                ));
            }
        }
        GradedMatrix { source: self.source.tensor(f), target: self.target.tensor(f), cols }
    }

    /// Same entries, source and target degrees both raised by `k`.
    pub fn shifted(&self, k: i64) -> GradedMatrix {
        GradedMatrix { source: self.source.shifted(k), target: self.target.shifted(k), cols: self.cols.clone() }
    }

    pub fn scale(&self, ring: &Ring, c: u32) -> GradedMatrix {
        let cols = self.cols.iter().map(|a| a.scale(ring, c)).collect();
        GradedMatrix { source: self.source.clone(), target: self.target.clone(), cols }
    }

    /// Whether any entry has a nonzero constant term.
    pub fn has_unit_entry(&self) -> bool {
        self.cols.iter().any(|c| c.has_unit_entry())
    }

    pub fn with_modules(&self, source: FreeModule, target: FreeModule) -> Result<GradedMatrix> {
        GradedMatrix::new(source, target, self.cols.clone())
    }

    /// `[self; other]` over a common source.
    pub fn row_stack(&self, other: &GradedMatrix) -> GradedMatrix {
        let r = self.nrows();
        let cols = self.cols().iter().zip(other.cols()).map(|(a, b)| a.concat(r, b)).collect();
        GradedMatrix::new_unchecked(self.source().clone(), self.target().direct_sum(other.target()), cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: &Ring, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    #[test]
    fn degree_zero_check() {
        let r = Ring::standard(2, &["x", "y"]).unwrap();
        let ok = GradedMatrix::from_rows(&r, FreeModule::new(vec![1, 1]), FreeModule::new(vec![0]), &[vec![p(&r, "x"), p(&r, "y")]]);
        assert!(ok.is_ok());
        let bad = GradedMatrix::from_rows(&r, FreeModule::new(vec![1, 2]), FreeModule::new(vec![0]), &[vec![p(&r, "x"), p(&r, "y")]]);
        assert!(bad.is_err());
        let inhom = GradedMatrix::from_rows(&r, FreeModule::new(vec![1]), FreeModule::new(vec![0]), &[vec![p(&r, "x+1")]]);
        assert!(inhom.is_err());
    }

    #[test]
    fn transpose_is_dual() {
        let r = Ring::standard(3, &["x", "y"]).unwrap();
        let m = GradedMatrix::from_rows(&r, FreeModule::new(vec![1, 2]), FreeModule::new(vec![0]), &[vec![p(&r, "x"), p(&r, "x*y")]]).unwrap();
        let t = m.transpose(&r);
        t.validate().unwrap();
        assert_eq!(t.transpose(&r), m);
        assert_eq!(t.rows(&r), vec![vec![p(&r, "x")], vec![p(&r, "x*y")]]);
    }

    #[test]
    fn tensor_identity_block_structure() {
        let r = Ring::standard(3, &["x", "y"]).unwrap();
        let m = GradedMatrix::from_rows(&r, FreeModule::new(vec![1]), FreeModule::new(vec![0]), &[vec![p(&r, "x")]]).unwrap();
        let f = FreeModule::new(vec![0, 3]);
        let t = m.tensor_identity(&r, &f);
        t.validate().unwrap();
        assert_eq!(t.rows(&r), vec![vec![p(&r, "x"), Poly::zero()], vec![Poly::zero(), p(&r, "x")]]);
        assert_eq!(t.source().degrees(), &[1, 4]);
    }
}
