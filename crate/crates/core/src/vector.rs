//! Elements of twisted graded free modules.

use std::cmp::Ordering;

use crate::poly::Poly;
use crate::ring::{Mono, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub pos: usize,
    pub mono: Mono,
    pub coef: u32,
}

/// Position-over-term: a smaller generator index dominates, ties are broken by
/// the monomial order.
#[inline]
pub fn term_cmp(a_pos: usize, a: &Mono, b_pos: usize, b: &Mono) -> Ordering {
    b_pos.cmp(&a_pos).then_with(|| a.cmp(b))
}

/// A vector `sum_i c_i m_i e_{pos_i}` in a free module, with terms kept sorted
/// ascending in the module order (leading term last).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    terms: Vec<Term>,
}

impl Vector {
    pub fn zero() -> Vector {
        Vector { terms: Vec::new() }
    }

    pub fn basis(ring: &Ring, pos: usize) -> Vector {
        Vector { terms: vec![Term { pos, mono: ring.one_mono(), coef: 1 }] }
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = Term>) -> Vector {
        let mut v: Vec<Term> = terms.into_iter().filter(|t| t.coef % ring.characteristic() != 0).collect();
        v.sort_by(|a, b| term_cmp(a.pos, &a.mono, b.pos, &b.mono));
        let mut out: Vec<Term> = Vec::with_capacity(v.len());
        for t in v {
            match out.last_mut() {
                Some(l) if l.pos == t.pos && l.mono == t.mono => l.coef = ring.add(l.coef, t.coef),
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coef != 0);
        Vector { terms: out }
    }

    /// Builds `sum_i coords[i] e_i`.
    pub fn from_coords(ring: &Ring, coords: &[Poly]) -> Vector {
        let mut terms = Vec::new();
        for (pos, p) in coords.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term { pos, mono: m.clone(), coef: *c });
            }
        }
        Vector::from_terms(ring, terms)
    }

    pub fn coords(&self, ring: &Ring, rank: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Mono, u32)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.pos].push((t.mono.clone(), t.coef));
        }
        buckets.into_iter().map(|b| Poly::from_terms(ring, b)).collect()
    }

    pub fn coord(&self, ring: &Ring, pos: usize) -> Poly {
        Poly::from_terms(ring, self.terms.iter().filter(|t| t.pos == pos).map(|t| (t.mono.clone(), t.coef)))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.last()
    }

    pub(crate) fn pop_lead(&mut self) -> Option<Term> {
        self.terms.pop()
    }

    /// Wraps terms already sorted ascending with nonzero reduced coefficients.
    pub(crate) fn from_sorted(terms: Vec<Term>) -> Vector {
        Vector { terms }
    }

    pub fn max_pos(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.pos).max()
    }

    /// Common degree of all terms given generator degrees, or `None` if
    /// the vector is zero or inhomogeneous.
    pub fn homogeneous_degree(&self, degrees: &[i64]) -> Option<i64> {
        let first = self.terms.first()?;
        let d = first.mono.degree() + degrees[first.pos];
        self.terms.iter().all(|t| t.mono.degree() + degrees[t.pos] == d).then_some(d)
    }

    pub fn is_homogeneous(&self, degrees: &[i64]) -> bool {
        self.is_zero() || self.homogeneous_degree(degrees).is_some()
    }

    pub fn neg(&self, ring: &Ring) -> Vector {
        self.scale(ring, ring.neg(1))
    }

    pub fn scale(&self, ring: &Ring, c: u32) -> Vector {
        if c.is_multiple_of(ring.characteristic()) {
            return Vector::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { pos: t.pos, mono: t.mono.clone(), coef: ring.mul(t.coef, c) })
                .collect(),
        }
    }

    /// `self + c * m * other`.
    pub fn add_scaled(&self, ring: &Ring, c: u32, m: &Mono, other: &Vector) -> Vector {
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other
            .terms
            .iter()
            .map(|t| Term { pos: t.pos, mono: t.mono.mul(m), coef: ring.mul(t.coef, c) })
            .peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match term_cmp(x.pos, &x.mono, y.pos, &y.mono) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let x = a.next().unwrap();
                        let y = b.next().unwrap();
                        let s = ring.add(x.coef, y.coef);
                        if s != 0 {
                            out.push(Term { pos: x.pos, mono: x.mono.clone(), coef: s });
                        }
                    }
                },
            }
        }
        Vector { terms: out }
    }

    pub fn add(&self, ring: &Ring, other: &Vector) -> Vector {
        self.add_scaled(ring, 1, &ring.one_mono(), other)
    }

    pub fn sub(&self, ring: &Ring, other: &Vector) -> Vector {
        self.add_scaled(ring, ring.neg(1), &ring.one_mono(), other)
    }

    /// `self + f * other` for a polynomial `f`.
    pub fn add_poly_times(&self, ring: &Ring, f: &Poly, other: &Vector) -> Vector {
        let mut acc = self.clone();
        for (m, c) in f.terms() {
            acc = acc.add_scaled(ring, *c, m, other);
        }
        acc
    }

    pub fn mul_poly(&self, ring: &Ring, f: &Poly) -> Vector {
        Vector::zero().add_poly_times(ring, f, self)
    }

    /// Renumbers positions through `map` (must be strictly order preserving
    /// or the result is re-sorted).
    pub fn reindex(&self, ring: &Ring, map: impl Fn(usize) -> usize) -> Vector {
        Vector::from_terms(
            ring,
            self.terms.iter().map(|t| Term { pos: map(t.pos), mono: t.mono.clone(), coef: t.coef }),
        )
    }

    /// Keeps only positions in `[lo, hi)`, shifted down by `lo`.
    pub fn slice(&self, lo: usize, hi: usize) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|t| t.pos >= lo && t.pos < hi)
                .map(|t| Term { pos: t.pos - lo, mono: t.mono.clone(), coef: t.coef })
                .collect(),
        }
    }

    /// Shifts every position up by `off` (order preserving).
    pub fn offset(&self, off: usize) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { pos: t.pos + off, mono: t.mono.clone(), coef: t.coef })
                .collect(),
        }
    }

    /// Concatenation `(self, other)` where `self` lives in a module of rank `rank`.
    pub fn concat(&self, rank: usize, other: &Vector) -> Vector {
        // positions of `other` are larger, so its terms sort below ours
        let mut terms = other.offset(rank).terms;
        terms.extend(self.terms.iter().cloned());
        Vector { terms }
    }

    pub fn make_monic(&self, ring: &Ring) -> Vector {
        match self.lead() {
            Some(t) => self.scale(ring, ring.inv(t.coef)),
            None => Vector::zero(),
        }
    }

    /// Whether some coordinate has a nonzero constant term.
    pub fn has_unit_entry(&self) -> bool {
        self.terms.iter().any(|t| t.mono.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pot_lead_term() {
        let r = Ring::standard(3, &["x", "y"]).unwrap();
        let v = Vector::from_coords(&r, &[Poly::parse(&r, "y").unwrap(), Poly::parse(&r, "x^5").unwrap()]);
        let lt = v.lead().unwrap();
        assert_eq!(lt.pos, 0);
        assert_eq!(lt.mono, r.mono(&[0, 1]));
        assert_eq!(v.homogeneous_degree(&[1, -3]), Some(2));
    }

    #[test]
    fn concat_and_slice() {
        let r = Ring::standard(3, &["x", "y"]).unwrap();
        let a = Vector::from_coords(&r, &[Poly::parse(&r, "x").unwrap()]);
        let b = Vector::from_coords(&r, &[Poly::zero(), Poly::parse(&r, "y").unwrap()]);
        let c = a.concat(1, &b);
        assert_eq!(c.slice(0, 1), a);
        assert_eq!(c.slice(1, 3), b);
        assert_eq!(c, Vector::from_terms(&r, c.terms().iter().cloned()));
    }
}
