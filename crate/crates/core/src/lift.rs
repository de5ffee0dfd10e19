//! Extending partially specified chain maps between free complexes.
//!
//! Some columns of the map are prescribed, the rest are unknown. All
//! commuting-square conditions that touch an unknown become one degree-zero
//! linear system over `S`: the unknown column for a source generator of
//! degree `a` lives in a copy of the target term twisted by `-a`, so every
//! unknown and every equation is homogeneous of degree zero and a single
//! Gröbner lift solves the whole system at once.

use std::collections::HashMap;

use crate::complex::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::groebner::Lifter;
use crate::matrix::{FreeModule, GradedMatrix};
use crate::ring::Ring;
use crate::vector::{Term, Vector};

/// Per source degree, one entry per source generator: `Some(image)` when
/// prescribed, `None` when it is to be solved for.
pub type PartialMap = Vec<Vec<Option<Vector>>>;

/// Finds a chain map `source -> target` agreeing with `fixed`, or `None` when
/// the prescribed columns admit no extension.
pub fn extend_chain_map(ring: &Ring, source: &FreeComplex, target: &FreeComplex, fixed: &PartialMap) -> Result<Option<ChainMap>> {
    let lo = source.lo();
    if fixed.len() != source.degrees().count() {
        return Err(Error::validation("partial chain map", "one entry per source degree is required"));
    }
    for n in source.degrees() {
        if fixed[(n - lo) as usize].len() != source.module(n).rank() {
            return Err(Error::validation(format!("partial chain map degree {n}"), "one entry per generator is required"));
        }
    }
    let col_deg = |n: i64, c: usize| source.module(n).degrees()[c];

    // unknown (n, c) -> offset in the stacked unknown module
    let mut unknown_at: HashMap<(i64, usize), usize> = HashMap::new();
    let mut unknown_list: Vec<(i64, usize)> = Vec::new();
    let mut u_degrees: Vec<i64> = Vec::new();
    for n in source.degrees() {
        for (c, entry) in fixed[(n - lo) as usize].iter().enumerate() {
            if entry.is_none() && !target.module(n).is_zero() {
                unknown_at.insert((n, c), u_degrees.len());
                unknown_list.push((n, c));
                u_degrees.extend(target.module(n).degrees().iter().map(|b| b - col_deg(n, c)));
            }
        }
    }
    let image = |n: i64, c: usize| -> Option<&Vector> { fixed[(n - lo) as usize][c].as_ref() };

    // one equation block per source generator whose square involves an unknown
    let mut eq_at: HashMap<(i64, usize), usize> = HashMap::new();
    let mut v_degrees: Vec<i64> = Vec::new();
    let mut rhs_terms: Vec<Term> = Vec::new();
    for n in source.degrees() {
        let d_src = source.diff(n);
        let d_tgt = target.diff(n);
        let below = target.module(n - 1);
        for c in 0..source.module(n).rank() {
            let boundary = d_src.col(c);
            let involves = unknown_at.contains_key(&(n, c)) || boundary.terms().iter().any(|t| unknown_at.contains_key(&(n - 1, t.pos)));
            // known part: ∂ φ(c) - φ(∂c) over prescribed columns
            let mut known = match image(n, c) {
                Some(v) => d_tgt.apply(ring, v),
                None => Vector::zero(),
            };
            for t in boundary.terms() {
                if let Some(v) = fixed.get((n - 1 - lo) as usize).and_then(|row| row.get(t.pos)).and_then(|e| e.as_ref()) {
                    if n > lo {
                        known = known.add_scaled(ring, ring.neg(t.coef), &t.mono, v);
                    }
                }
            }
            if !involves {
                if !known.is_zero() {
                    return Ok(None);
                }
                continue;
            }
            if below.is_zero() {
                continue;
            }
            let off = v_degrees.len();
            eq_at.insert((n, c), off);
            v_degrees.extend(below.degrees().iter().map(|b| b - col_deg(n, c)));
            rhs_terms.extend(known.neg(ring).terms().iter().map(|t| Term { pos: t.pos + off, mono: t.mono.clone(), coef: t.coef }));
        }
    }

    let mut solution: HashMap<(i64, usize), Vector> = HashMap::new();
    if !unknown_list.is_empty() {
        let u_mod = FreeModule::new(u_degrees);
        let v_mod = FreeModule::new(v_degrees);
        let mut cols = Vec::with_capacity(u_mod.rank());
        for &(n, c) in &unknown_list {
            let d_tgt = target.diff(n);
            for y in 0..target.module(n).rank() {
                let mut terms: Vec<Term> = Vec::new();
                if let Some(&off) = eq_at.get(&(n, c)) {
                    terms.extend(d_tgt.col(y).terms().iter().map(|t| Term { pos: t.pos + off, mono: t.mono.clone(), coef: t.coef }));
                }
                // every generator one degree up whose boundary meets c
                let d_up = source.diff(n + 1);
                for (c2, col) in d_up.cols().iter().enumerate() {
                    let Some(&off) = eq_at.get(&(n + 1, c2)) else { continue };
                    for t in col.terms().iter().filter(|t| t.pos == c) {
                        terms.push(Term { pos: off + y, mono: t.mono.clone(), coef: ring.neg(t.coef) });
                    }
                }
                cols.push(Vector::from_terms(ring, terms));
            }
        }
        let system = GradedMatrix::new_unchecked(u_mod, v_mod, cols);
        let rhs = Vector::from_terms(ring, rhs_terms);
        let Some(u) = Lifter::new(ring, &system, None).solve(ring, &rhs) else {
            return Ok(None);
        };
        let mut off = 0;
        for &(n, c) in &unknown_list {
            let r = target.module(n).rank();
            solution.insert((n, c), u.slice(off, off + r));
            off += r;
        }
    } else if !rhs_terms.is_empty() {
        return Ok(None);
    }

    let maps = source
        .degrees()
        .map(|n| {
            let cols = (0..source.module(n).rank())
                .map(|c| match image(n, c) {
                    Some(v) => v.clone(),
                    None => solution.remove(&(n, c)).unwrap_or_default(),
                })
                .collect();
            GradedMatrix::new_unchecked(source.module(n).clone(), target.module(n).clone(), cols)
        })
        .collect();
    let f = ChainMap::new_unchecked(source.clone(), target.clone(), maps);
    f.validate(ring)?;
    Ok(Some(f))
}

/// Lifts a map of modules `H_0(source) -> H_0(target)` (given on degree-0
/// generators) to a chain map, assuming `target` is acyclic in positive degrees.
pub fn lift_augmentation(ring: &Ring, source: &FreeComplex, target: &FreeComplex, degree_zero: &GradedMatrix) -> Result<Option<ChainMap>> {
    let mut fixed: PartialMap = source.degrees().map(|n| vec![None; source.module(n).rank()]).collect();
    if source.lo() <= 0 && source.hi() >= 0 {
        fixed[(-source.lo()) as usize] = degree_zero.cols().iter().cloned().map(Some).collect();
    }
    extend_chain_map(ring, source, target, &fixed)
}
