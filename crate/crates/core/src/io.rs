//! JSON forms of complexes, maps, modules and tables.
//!
//! Matrices are row-major lists of polynomial strings. Free modules are lists
//! of twists, so `S(-1)^2` is `[-1, -1]`. Object keys come out sorted, which
//! makes every writer here canonical.

use serde_json::{json, Map, Value};

use crate::complex::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::localcoh::GradedDimTable;
use crate::matrix::{FreeModule, GradedMatrix};
use crate::poly::Poly;
use crate::presented::{PresentedComplex, PresentedModule};
use crate::ring::Ring;
use crate::vector::Vector;

fn parse_err(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {detail}"))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err("json", e))
}

/// Two-space indented JSON with a trailing newline.
pub fn to_canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

/// Parses a comma-separated list of polynomials.
pub fn parse_poly_list(ring: &Ring, text: &str) -> Result<Vec<Poly>> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| Poly::parse(ring, s)).collect()
}

fn twists_value(m: &FreeModule) -> Value {
    json!(m.twists())
}

fn twists_of(v: &Value, what: &str) -> Result<FreeModule> {
    let arr = v.as_array().ok_or_else(|| parse_err(what, "expected a list of twists"))?;
    let tw = arr.iter().map(|x| x.as_i64().ok_or_else(|| parse_err(what, "twists are integers"))).collect::<Result<Vec<_>>>()?;
    Ok(FreeModule::from_twists(&tw))
}

fn rows_value(ring: &Ring, m: &GradedMatrix) -> Value {
    Value::Array(m.rows(ring).iter().map(|r| Value::Array(r.iter().map(|p| Value::String(p.to_string(ring))).collect())).collect())
}

fn rows_of(ring: &Ring, v: &Value, what: &str) -> Result<Vec<Vec<Poly>>> {
    let arr = v.as_array().ok_or_else(|| parse_err(what, "expected a list of rows"))?;
    arr.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| parse_err(what, "each row is a list"))?
                .iter()
                .map(|e| match e {
                    Value::String(s) => Poly::parse(ring, s),
                    Value::Number(n) => Poly::parse(ring, &n.to_string()),
                    _ => Err(parse_err(what, "entries are polynomial strings")),
                })
                .collect()
        })
        .collect()
}

fn matrix_of(ring: &Ring, v: &Value, source: FreeModule, target: FreeModule, what: &str) -> Result<GradedMatrix> {
    let rows = rows_of(ring, v, what)?;
    if target.rank() == 0 {
        return Ok(GradedMatrix::zero(source, target));
    }
    GradedMatrix::from_rows(ring, source, target, &rows).map_err(|e| relabel(e, what))
}

fn relabel(e: Error, what: &str) -> Error {
    match e {
        Error::Validation { location, reason } => Error::Validation { location: format!("{what}: {location}"), reason },
        other => other,
    }
}

fn get<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(what, format!("missing key {key:?}")))
}

fn int_keyed(v: &Value, what: &str) -> Result<Vec<(i64, Value)>> {
    let obj = v.as_object().ok_or_else(|| parse_err(what, "expected an object keyed by degree"))?;
    let mut out = obj
        .iter()
        .map(|(k, x)| k.trim().parse::<i64>().map(|n| (n, x.clone())).map_err(|_| parse_err(what, format!("bad degree key {k:?}"))))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|(n, _)| *n);
    Ok(out)
}

/// `{"twists": {"n": [...]}, "maps": {"n": rows of ∂_n}}`.
pub fn complex_to_json(ring: &Ring, x: &FreeComplex) -> Value {
    let mut twists = Map::new();
    let mut maps = Map::new();
    for n in x.degrees() {
        twists.insert(n.to_string(), twists_value(x.module(n)));
        if n > x.lo() {
            maps.insert(n.to_string(), rows_value(ring, &x.diff(n)));
        }
    }
    json!({ "twists": twists, "maps": maps })
}

pub fn complex_from_json(ring: &Ring, v: &Value) -> Result<FreeComplex> {
    let twists = int_keyed(get(v, "twists", "complex")?, "complex twists")?;
    if twists.is_empty() {
        return Ok(FreeComplex::zero());
    }
    let lo = twists[0].0;
    let hi = twists.last().unwrap().0;
    let mut modules = vec![FreeModule::zero(); (hi - lo + 1) as usize];
    for (n, t) in &twists {
        modules[(n - lo) as usize] = twists_of(t, &format!("twists of degree {n}"))?;
    }
    let maps = match v.get("maps") {
        Some(m) => int_keyed(m, "complex maps")?,
        None => Vec::new(),
    };
    let mut diffs: Vec<GradedMatrix> = (lo + 1..=hi)
        .map(|n| GradedMatrix::zero(modules[(n - lo) as usize].clone(), modules[(n - lo - 1) as usize].clone()))
        .collect();
    for (n, rows) in maps {
        if n <= lo || n > hi {
            return Err(Error::validation(format!("map {n}"), "degree outside the range of the twists"));
        }
        let what = format!("map {n}");
        diffs[(n - lo - 1) as usize] = matrix_of(ring, &rows, modules[(n - lo) as usize].clone(), modules[(n - lo - 1) as usize].clone(), &what)?;
    }
    FreeComplex::new(ring, lo, modules, diffs)
}

/// `{"terms": {"n": module}, "maps": {"n": rows on generators}}`.
pub fn presented_complex_to_json(ring: &Ring, x: &PresentedComplex) -> Value {
    let mut terms = Map::new();
    let mut maps = Map::new();
    for n in x.degrees() {
        terms.insert(n.to_string(), module_to_json(ring, x.term(n)));
        if n > x.lo() {
            maps.insert(n.to_string(), rows_value(ring, &x.diff(n)));
        }
    }
    json!({ "terms": terms, "maps": maps })
}

pub fn presented_complex_from_json(ring: &Ring, v: &Value) -> Result<PresentedComplex> {
    let given = int_keyed(get(v, "terms", "presented complex")?, "presented complex terms")?;
    let Some(&(lo, _)) = given.first() else {
        return PresentedComplex::new(ring, 0, Vec::new(), Vec::new());
    };
    let hi = given.last().unwrap().0;
    let mut terms = vec![PresentedModule::zero(); (hi - lo + 1) as usize];
    for (n, t) in &given {
        terms[(n - lo) as usize] = module_from_json(ring, t).map_err(|e| relabel(e, &format!("term {n}")))?;
    }
    let gens = |n: i64| terms[(n - lo) as usize].generators().clone();
    let mut diffs: Vec<GradedMatrix> = (lo + 1..=hi).map(|n| GradedMatrix::zero(gens(n), gens(n - 1))).collect();
    if let Some(m) = v.get("maps") {
        for (n, rows) in int_keyed(m, "presented complex maps")? {
            if n <= lo || n > hi {
                return Err(Error::validation(format!("map {n}"), "degree outside the range of the terms"));
            }
            diffs[(n - lo - 1) as usize] = matrix_of(ring, &rows, gens(n), gens(n - 1), &format!("map {n}"))?;
        }
    }
    PresentedComplex::new(ring, lo, terms, diffs)
}

/// `{"source": twists, "target": twists, "matrix": rows}`.
pub fn matrix_to_json(ring: &Ring, m: &GradedMatrix) -> Value {
    json!({ "source": twists_value(m.source()), "target": twists_value(m.target()), "matrix": rows_value(ring, m) })
}

pub fn matrix_from_json(ring: &Ring, v: &Value) -> Result<GradedMatrix> {
    let source = twists_of(get(v, "source", "matrix")?, "matrix source")?;
    let target = twists_of(get(v, "target", "matrix")?, "matrix target")?;
    matrix_of(ring, get(v, "matrix", "matrix")?, source, target, "matrix")
}

/// `{"twists": generators, "relations": {"twists": .., "matrix": ..}}`, or
/// `{"quotient": ["f", ...]}` for `S/I`.
pub fn module_to_json(ring: &Ring, m: &PresentedModule) -> Value {
    json!({
        "twists": twists_value(m.generators()),
        "relations": { "twists": twists_value(m.relations().source()), "matrix": rows_value(ring, m.relations()) },
    })
}

pub fn module_from_json(ring: &Ring, v: &Value) -> Result<PresentedModule> {
    if let Some(q) = v.get("quotient") {
        let gens = q
            .as_array()
            .ok_or_else(|| parse_err("module", "quotient is a list of polynomials"))?
            .iter()
            .map(|e| e.as_str().ok_or_else(|| parse_err("module", "quotient entries are strings")).and_then(|s| Poly::parse(ring, s)))
            .collect::<Result<Vec<_>>>()?;
        return PresentedModule::quotient_ring(ring, &gens);
    }
    let gens = twists_of(get(v, "twists", "module")?, "module twists")?;
    let rel = match v.get("relations") {
        None => GradedMatrix::zero(FreeModule::zero(), gens),
        Some(r) => {
            let source = twists_of(get(r, "twists", "relations")?, "relation twists")?;
            matrix_of(ring, get(r, "matrix", "relations")?, source, gens, "relations")?
        }
    };
    PresentedModule::new(rel)
}

/// `{"source": complex, "target": complex, "maps": {"n": rows}}`.
pub fn chain_map_to_json(ring: &Ring, f: &ChainMap) -> Value {
    let maps: Map<String, Value> = f.source().degrees().map(|n| (n.to_string(), rows_value(ring, &f.map(n)))).collect();
    json!({ "source": complex_to_json(ring, f.source()), "target": complex_to_json(ring, f.target()), "maps": maps })
}

pub fn chain_map_from_json(ring: &Ring, v: &Value) -> Result<ChainMap> {
    let source = complex_from_json(ring, get(v, "source", "chain map")?)?;
    let target = complex_from_json(ring, get(v, "target", "chain map")?)?;
    let given = int_keyed(get(v, "maps", "chain map")?, "chain map components")?;
    let mut maps: Vec<GradedMatrix> = source.degrees().map(|n| GradedMatrix::zero(source.module(n).clone(), target.module(n).clone())).collect();
    for (n, rows) in given {
        if n < source.lo() || n > source.hi() {
            return Err(Error::validation(format!("component {n}"), "degree outside the source"));
        }
        let what = format!("component {n}");
        maps[(n - source.lo()) as usize] = matrix_of(ring, &rows, source.module(n).clone(), target.module(n).clone(), &what)?;
    }
    ChainMap::new(ring, source, target, maps)
}

/// One record `{n, t, dim}` per cell.
pub fn homology_table(ring: &Ring, x: &FreeComplex, t_min: i64, t_max: i64) -> Value {
    let mut out = Vec::new();
    for n in x.degrees() {
        for t in t_min..=t_max {
            out.push(json!({ "n": n, "t": t, "dim": x.homology_dim(ring, n, t) }));
        }
    }
    Value::Array(out)
}

/// One record `{i, t, dim, stage, stable}` per cell.
pub fn local_cohomology_table(table: &GradedDimTable) -> Value {
    Value::Array(
        table
            .cells
            .iter()
            .map(|((i, t), c)| json!({ "i": i, "t": t, "dim": c.dim, "stage": c.stage, "stable": c.stable }))
            .collect(),
    )
}

pub fn polys_to_json(ring: &Ring, ps: &[Poly]) -> Value {
    Value::Array(ps.iter().map(|p| Value::String(p.to_string(ring))).collect())
}

/// A vector as its coordinate strings.
pub fn vector_to_json(ring: &Ring, v: &Vector, rank: usize) -> Value {
    polys_to_json(ring, &v.coords(ring, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::koszul;

    #[test]
    fn koszul_twists_and_round_trip() {
        let r = Ring::parse("p=2; vars x:1 y:1;").unwrap();
        let k = koszul(&r, &parse_poly_list(&r, "x, y").unwrap()).unwrap().complex;
        let v = complex_to_json(&r, &k);
        assert_eq!(v["twists"]["1"], json!([-1, -1]));
        assert_eq!(v["maps"]["2"], json!([["y"], ["x"]]));
        let text = to_canonical(&v);
        let back = complex_from_json(&r, &parse_json(&text).unwrap()).unwrap();
        assert_eq!(back, k);
        assert_eq!(to_canonical(&complex_to_json(&r, &back)), text);
    }

    #[test]
    fn bad_square_is_a_validation_error() {
        let r = Ring::parse("p=2; vars x:1 y:1;").unwrap();
        let v = json!({"twists": {"0": [0], "1": [-1], "2": [-2]}, "maps": {"1": [["x"]], "2": [["x"]]}});
        assert!(matches!(complex_from_json(&r, &v), Err(Error::Validation { .. })));
    }

    #[test]
    fn modules() {
        let r = Ring::parse("p=3; vars x:1 y:2;").unwrap();
        let q = module_from_json(&r, &json!({"quotient": ["x^2", "y"]})).unwrap();
        let back = module_from_json(&r, &module_to_json(&r, &q)).unwrap();
        assert_eq!(back, q);
        assert_eq!(q.hilbert(&r, 1), 1);
        assert_eq!(q.hilbert(&r, 2), 0);
    }

    #[test]
    fn presented_complex_round_trip() {
        let r = Ring::parse("p=2; vars x:1 y:1;").unwrap();
        let v = json!({
            "terms": {"0": {"quotient": ["x"]}, "1": {"twists": [-1]}},
            "maps": {"1": [["y"]]},
        });
        let x = presented_complex_from_json(&r, &v).unwrap();
        assert_eq!(x.homology_dim(&r, 0, 1), 0);
        assert_eq!(x.homology_dim(&r, 0, 0), 1);
        let back = presented_complex_from_json(&r, &presented_complex_to_json(&r, &x)).unwrap();
        assert_eq!(back, x);
    }
}
