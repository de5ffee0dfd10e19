//! Weighted polynomial rings over a prime field.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// `F_p[x_1, ..., x_k]` with a positive integer weight on every variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    p: u32,
    names: Vec<String>,
    weights: Vec<u32>,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn new<S: Into<String>>(p: u32, vars: impl IntoIterator<Item = (S, u32)>) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::validation("ring", format!("characteristic {p} is not prime")));
        }
        if p > (1 << 31) {
            return Err(Error::validation("ring", "characteristic must fit in 31 bits"));
        }
        let mut names = Vec::new();
        let mut weights = Vec::new();
        for (name, w) in vars {
            let name = name.into();
            if name.is_empty() || !name.chars().next().unwrap().is_ascii_alphabetic() {
                return Err(Error::validation("ring", format!("bad variable name {name:?}")));
            }
            if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::validation("ring", format!("bad variable name {name:?}")));
            }
            if names.contains(&name) {
                return Err(Error::validation("ring", format!("duplicate variable {name}")));
            }
            if w == 0 {
                return Err(Error::validation("ring", format!("variable {name} has weight 0")));
            }
            names.push(name);
            weights.push(w);
        }
        Ok(Ring { p, names, weights })
    }

    /// Standard-graded ring with the given variable names.
    pub fn standard(p: u32, names: &[&str]) -> Result<Ring> {
        Ring::new(p, names.iter().map(|n| (n.to_string(), 1)))
    }

    /// Parses `p=<prime>; vars <name>:<weight> ...;`.
    pub fn parse(desc: &str) -> Result<Ring> {
        let mut p = None;
        let mut vars = Vec::new();
        let mut saw_vars = false;
        for stmt in desc.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("p") {
                let rest = rest.trim_start();
                if let Some(v) = rest.strip_prefix('=') {
                    let v = v.trim();
                    p = Some(v.parse::<u32>().map_err(|_| Error::Parse(format!("bad characteristic {v:?}")))?);
                    continue;
                }
            }
            if let Some(rest) = stmt.strip_prefix("vars") {
                saw_vars = true;
                for tok in rest.split_whitespace() {
                    let (name, w) = match tok.split_once(':') {
                        Some((n, w)) => {
                            let w = w.parse::<u32>().map_err(|_| Error::Parse(format!("bad weight in {tok:?}")))?;
                            (n.to_string(), w)
                        }
                        None => (tok.to_string(), 1),
                    };
                    vars.push((name, w));
                }
                continue;
            }
            return Err(Error::Parse(format!("unrecognised ring statement {stmt:?}")));
        }
        let p = p.ok_or_else(|| Error::Parse("ring description lacks p=<prime>".into()))?;
        if !saw_vars {
            return Err(Error::Parse("ring description lacks vars".into()));
        }
        Ring::new(p, vars)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    // field arithmetic

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    // monomials

    pub fn one_mono(&self) -> Mono {
        Mono { deg: 0, exps: vec![0; self.nvars()].into_boxed_slice() }
    }

    pub fn mono(&self, exps: &[u32]) -> Mono {
        assert_eq!(exps.len(), self.nvars());
        let deg = exps.iter().zip(&self.weights).map(|(e, w)| *e as i64 * *w as i64).sum();
        Mono { deg, exps: exps.into() }
    }

    pub fn var_mono(&self, i: usize) -> Mono {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.mono(&e)
    }

    pub fn lcm(&self, a: &Mono, b: &Mono) -> Mono {
        let e: Vec<u32> = a.exps.iter().zip(b.exps.iter()).map(|(x, y)| *x.max(y)).collect();
        self.mono(&e)
    }

    /// All monomials of weighted degree `t`, sorted descending in the monomial order.
    pub fn monomials_of_degree(&self, t: i64) -> Vec<Mono> {
        let mut out = Vec::new();
        if t < 0 {
            return out;
        }
        let n = self.nvars();
        let mut exps = vec![0u32; n];
        fn rec(ring: &Ring, i: usize, left: i64, exps: &mut Vec<u32>, out: &mut Vec<Mono>) {
            if i == ring.nvars() {
                if left == 0 {
                    out.push(ring.mono(exps));
                }
                return;
            }
            let w = ring.weights[i] as i64;
            let mut e = 0;
            while e * w <= left {
                exps[i] = e as u32;
                rec(ring, i + 1, left - e * w, exps, out);
                e += 1;
            }
            exps[i] = 0;
        }
        if n == 0 {
            if t == 0 {
                out.push(self.one_mono());
            }
            return out;
        }
        rec(self, 0, t, &mut exps, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    pub fn hilbert_function(&self, t: i64) -> usize {
        self.monomials_of_degree(t).len()
    }

    pub fn fmt_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}; vars", self.p)?;
        for (n, w) in self.names.iter().zip(&self.weights) {
            write!(f, " {n}:{w}")?;
        }
        write!(f, ";")
    }
}

/// Exponent vector with its cached weighted degree.
///
/// Ordered by weighted degree first, then reverse-lexicographically: among
/// monomials of equal degree, the one with the smaller exponent in the last
/// differing variable is larger.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    deg: i64,
    exps: Box<[u32]>,
}

impl Mono {
    pub fn degree(&self) -> i64 {
        self.deg
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|e| *e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let exps = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Mono { deg: self.deg + other.deg, exps }
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        let exps = other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect();
        Mono { deg: other.deg - self.deg, exps }
    }

    pub fn pow(&self, k: u32) -> Mono {
        Mono { deg: self.deg * k as i64, exps: self.exps.iter().map(|e| e * k).collect() }
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for i in (0..self.exps.len()).rev() {
                if self.exps[i] != other.exps[i] {
                    return other.exps[i].cmp(&self.exps[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let r = Ring::parse("p=7; vars x:1 y:2 z:1;").unwrap();
        assert_eq!(r.characteristic(), 7);
        assert_eq!(r.weights(), &[1, 2, 1]);
        assert_eq!(Ring::parse(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(Ring::parse("p=4; vars x:1;").is_err());
        assert!(Ring::parse("p=5; vars x:0;").is_err());
        assert!(Ring::parse("p=5; vars x:1 x:1;").is_err());
        assert!(Ring::parse("vars x:1;").is_err());
    }

    #[test]
    fn grevlex_order() {
        let r = Ring::standard(2, &["x", "y", "z"]).unwrap();
        let m = |e: &[u32]| r.mono(e);
        // x^2 > xy > y^2 > xz > yz > z^2
        let seq = [m(&[2, 0, 0]), m(&[1, 1, 0]), m(&[0, 2, 0]), m(&[1, 0, 1]), m(&[0, 1, 1]), m(&[0, 0, 2])];
        for w in seq.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert_eq!(r.monomials_of_degree(2), seq.to_vec());
        assert!(m(&[0, 0, 1]) > m(&[0, 0, 0]));
    }

    #[test]
    fn weighted_degree_pieces() {
        let r = Ring::new(3, [("x", 1), ("y", 2)]).unwrap();
        assert_eq!(r.hilbert_function(0), 1);
        assert_eq!(r.hilbert_function(3), 2); // x^3, xy
        assert_eq!(r.hilbert_function(4), 3); // x^4, x^2y, y^2
        assert_eq!(r.hilbert_function(-1), 0);
    }

    #[test]
    fn field_ops() {
        let r = Ring::standard(7, &["x"]).unwrap();
        for a in 1..7 {
            assert_eq!(r.mul(a, r.inv(a)), 1);
        }
        assert_eq!(r.reduce_int(-3), 4);
    }
}
