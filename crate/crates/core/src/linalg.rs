//! Dense linear algebra over `F_p` and graded pieces of free modules.
//!
//! This is the degree-by-degree route: every statement about a graded module
//! in a fixed internal degree becomes a finite matrix computation here.

use std::collections::HashMap;

use crate::matrix::{FreeModule, GradedMatrix};
use crate::ring::{Mono, Ring};
use crate::vector::Vector;

/// Row-major dense matrix; columns are the images of source basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Dense {
        Dense { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<u32>]) -> Dense {
        let mut d = Dense::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                d.set(i, j, *v);
            }
        }
        d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn hstack(&self, other: &Dense) -> Dense {
        assert_eq!(self.rows, other.rows);
        let mut d = Dense::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                d.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                d.set(i, self.cols + j, other.get(i, j));
            }
        }
        d
    }

    pub fn mul(&self, ring: &Ring, rhs: &Dense) -> Dense {
        assert_eq!(self.cols, rhs.rows);
        let mut d = Dense::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = ring.add(d.get(i, j), ring.mul(a, rhs.get(k, j)));
                    d.set(i, j, v);
                }
            }
        }
        d
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self, ring: &Ring) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else { continue };
            if pr != row {
                for j in 0..self.cols {
                    let a = self.get(pr, j);
                    let b = self.get(row, j);
                    self.set(pr, j, b);
                    self.set(row, j, a);
                }
            }
            let inv = ring.inv(self.get(row, col));
            for j in col..self.cols {
                let v = ring.mul(self.get(row, j), inv);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col);
                if f == 0 {
                    continue;
                }
                for j in col..self.cols {
                    let v = ring.sub(self.get(r, j), ring.mul(f, self.get(row, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, ring: &Ring) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.clone().rref(ring).len()
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn nullspace(&self, ring: &Ring) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref(ring);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = ring.neg(m.get(r, free));
            }
            out.push(v);
        }
        out
    }

    /// Basis of `{v : self * v ∈ span(w)}` where `w` has the same row count.
    pub fn preimage(&self, ring: &Ring, w: &Dense) -> Vec<Vec<u32>> {
        let joint = self.hstack(w);
        let ns = joint.nullspace(ring);
        let cols: Vec<Vec<u32>> = ns.into_iter().map(|v| v[..self.cols].to_vec()).collect();
        independent(ring, self.cols, cols)
    }
}

/// A maximal independent subset of `vectors` (all of length `dim`).
pub fn independent(ring: &Ring, dim: usize, vectors: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut rank = 0;
    for v in vectors {
        let mut trial = out.clone();
        trial.push(v.clone());
        let r = Dense::from_columns(dim, &trial).rank(ring);
        if r > rank {
            rank = r;
            out.push(v);
        }
    }
    out
}

/// Monomial basis of the degree-`t` piece of a free module.
#[derive(Clone, Debug)]
pub struct PieceBasis {
    elems: Vec<(usize, Mono)>,
    index: HashMap<(usize, Mono), usize>,
}

impl PieceBasis {
    pub fn new(ring: &Ring, module: &FreeModule, t: i64) -> PieceBasis {
        let mut elems = Vec::new();
        for (pos, a) in module.degrees().iter().enumerate() {
            for m in ring.monomials_of_degree(t - a) {
                elems.push((pos, m));
            }
        }
        let index = elems.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        PieceBasis { elems, index }
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[(usize, Mono)] {
        &self.elems
    }

    /// Coordinates of a homogeneous vector of degree `t`.
    pub fn coords(&self, v: &Vector) -> Vec<u32> {
        let mut out = vec![0u32; self.dim()];
        for term in v.terms() {
            let i = self.index[&(term.pos, term.mono.clone())];
            out[i] = term.coef;
        }
        out
    }

    pub fn vector(&self, ring: &Ring, coords: &[u32]) -> Vector {
        use crate::vector::Term;
        Vector::from_terms(
            ring,
            coords
                .iter()
                .zip(&self.elems)
                .filter(|(c, _)| **c != 0)
                .map(|(c, (pos, m))| Term { pos: *pos, mono: m.clone(), coef: *c }),
        )
    }
}

/// The degree-`t` piece of a degree-zero matrix, as a dense matrix
/// `dim(target_t) x dim(source_t)`.
pub fn piece_matrix(ring: &Ring, m: &GradedMatrix, t: i64) -> Dense {
    let src = PieceBasis::new(ring, m.source(), t);
    let tgt = PieceBasis::new(ring, m.target(), t);
    piece_matrix_with(ring, m, &src, &tgt)
}

pub fn piece_matrix_with(ring: &Ring, m: &GradedMatrix, src: &PieceBasis, tgt: &PieceBasis) -> Dense {
    let mut d = Dense::zeros(tgt.dim(), src.dim());
    for (j, (pos, mono)) in src.elems().iter().enumerate() {
        let col = &m.cols()[*pos];
        for term in col.terms() {
            let key = (term.pos, term.mono.mul(mono));
            let i = tgt.index[&key];
            d.set(i, j, ring.add(d.get(i, j), term.coef));
        }
    }
    d
}

/// Dimension of the degree-`t` piece of the column span of `m` (inside `m.target()`).
pub fn span_dim(ring: &Ring, m: &GradedMatrix, t: i64) -> usize {
    piece_matrix(ring, m, t).rank(ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace() {
        let r = Ring::standard(5, &["x"]).unwrap();
        let m = Dense::from_columns(2, &[vec![1, 2], vec![2, 4], vec![0, 1]]);
        assert_eq!(m.rank(&r), 2);
        let ns = m.nullspace(&r);
        assert_eq!(ns.len(), 1);
        let v = Dense::from_columns(3, &ns);
        let prod = m.mul(&r, &v);
        assert!((0..2).all(|i| prod.get(i, 0) == 0));
    }

    #[test]
    fn preimage_of_subspace() {
        let r = Ring::standard(3, &["x"]).unwrap();
        // A = identity on F^2, W = span(e1): preimage = span(e1)
        let a = Dense::from_columns(2, &[vec![1, 0], vec![0, 1]]);
        let w = Dense::from_columns(2, &[vec![1, 0]]);
        assert_eq!(a.preimage(&r, &w).len(), 1);
    }
}
