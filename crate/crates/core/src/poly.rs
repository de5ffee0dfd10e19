//! Sparse polynomials over `F_p`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::ring::{Mono, Ring};

/// Terms are kept sorted ascending in the monomial order, so the leading
/// term is the last one. Coefficients are nonzero and reduced mod p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, u32)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn constant(ring: &Ring, c: i64) -> Poly {
        Poly::term(ring.one_mono(), ring.reduce_int(c))
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, 1)
    }

    pub fn term(m: Mono, c: u32) -> Poly {
        if c == 0 {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(ring: &Ring, i: usize) -> Poly {
        Poly::term(ring.var_mono(i), 1)
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Mono, u32)>) -> Poly {
        let mut v: Vec<(Mono, u32)> = terms.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Mono, u32)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = ring.add(*lc, c),
                _ => out.push((m, c % ring.characteristic())),
            }
        }
        out.retain(|(_, c)| *c != 0);
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Mono, u32)] {
        &self.terms
    }

    pub fn lead(&self) -> Option<&(Mono, u32)> {
        self.terms.last()
    }

    /// Coefficient of the constant monomial.
    pub fn constant_coeff(&self) -> u32 {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    /// The common weighted degree of all terms, or `None` for zero or
    /// inhomogeneous polynomials.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn neg(&self, ring: &Ring) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), ring.neg(*c))).collect() }
    }

    pub fn scale(&self, ring: &Ring, c: u32) -> Poly {
        if c.is_multiple_of(ring.characteristic()) {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), ring.mul(*a, c))).collect() }
    }

    pub fn mul_term(&self, ring: &Ring, m: &Mono, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, a)| (n.mul(m), ring.mul(*a, c))).collect() }
    }

    /// `self + c * m * other`.
    pub fn add_scaled(&self, ring: &Ring, c: u32, m: &Mono, other: &Poly) -> Poly {
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(n, x)| (n.mul(m), ring.mul(*x, c))).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some((ma, _)), Some((mb, _))) => match ma.cmp(mb) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (m1, c1) = a.next().unwrap();
                        let (_, c2) = b.next().unwrap();
                        let s = ring.add(*c1, c2);
                        if s != 0 {
                            out.push((m1.clone(), s));
                        }
                    }
                },
            }
        }
        Poly { terms: out }
    }

    pub fn add(&self, ring: &Ring, other: &Poly) -> Poly {
        self.add_scaled(ring, 1, &ring.one_mono(), other)
    }

    pub fn sub(&self, ring: &Ring, other: &Poly) -> Poly {
        self.add_scaled(ring, ring.neg(1), &ring.one_mono(), other)
    }

    pub fn mul(&self, ring: &Ring, other: &Poly) -> Poly {
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc = Poly::zero();
        for (m, c) in &small.terms {
            acc = acc.add_scaled(ring, *c, m, big);
        }
        acc
    }

    pub fn pow(&self, ring: &Ring, mut k: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(ring, &base);
            }
        }
        acc
    }

    /// Canonical text: terms from the leading one down, coefficients in `[0, p)`.
    pub fn to_string(&self, ring: &Ring) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| match (m.is_one(), *c) {
                (true, c) => c.to_string(),
                (false, 1) => ring.fmt_mono(m),
                (false, c) => format!("{}*{}", c, ring.fmt_mono(m)),
            })
            .collect();
        parts.join(" + ")
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<Poly> {
        let tokens = tokenize(text)?;
        let mut p = Parser { ring, tokens, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in polynomial {text:?}")));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let v = lit.parse::<i128>().map_err(|_| Error::Parse(format!("integer too large: {lit}")))?;
                out.push(Tok::Num(v));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in polynomial"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = acc.add(self.ring, &t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = acc.sub(self.ring, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.unary()?;
            acc = acc.mul(self.ring, &f);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg(self.ring));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Num(k)) if k >= 0 => {
                    self.pos += 1;
                    return Ok(base.pow(self.ring, k as u64));
                }
                _ => return Err(Error::Parse("exponent must be a nonnegative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                let p = self.ring.characteristic() as i128;
                Ok(Poly::constant(self.ring, v.rem_euclid(p) as i64))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .ring
                    .var_index(&name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                Ok(Poly::var(self.ring, i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            None => Err(Error::Parse("unexpected end of input".into())),
            Some(other) => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::standard(2, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn parse_print_roundtrip() {
        let r = Ring::standard(5, &["x", "y", "z"]).unwrap();
        let p = Poly::parse(&r, "x^2*y + 3*z - 7").unwrap();
        assert_eq!(p.to_string(&r), "x^2*y + 3*z + 3");
        assert_eq!(Poly::parse(&r, &p.to_string(&r)).unwrap(), p);
        assert_eq!(Poly::parse(&r, "0").unwrap(), Poly::zero());
    }

    #[test]
    fn char_two_square() {
        let r = ring();
        let s = Poly::parse(&r, "(x+y)^2").unwrap();
        assert_eq!(s, Poly::parse(&r, "x^2+y^2").unwrap());
    }

    #[test]
    fn homogeneity() {
        let r = ring();
        assert_eq!(Poly::parse(&r, "x*y + z^2").unwrap().homogeneous_degree(), Some(2));
        assert!(!Poly::parse(&r, "x*y + z").unwrap().is_homogeneous());
        assert!(Poly::zero().is_homogeneous());
    }

    #[test]
    fn rejects_garbage() {
        let r = ring();
        assert!(Poly::parse(&r, "x +* y").is_err());
        assert!(Poly::parse(&r, "w").is_err());
        assert!(Poly::parse(&r, "(x").is_err());
    }
}
