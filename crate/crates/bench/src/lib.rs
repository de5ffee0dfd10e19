//! Inputs shared by the benchmarks.

use kt_core::{Poly, PresentedModule, Ring};

pub fn ring(p: u32, vars: &[&str]) -> Ring {
    Ring::standard(p, vars).expect("valid ring")
}

pub fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
    s.iter().map(|t| Poly::parse(r, t).expect("valid polynomial")).collect()
}

/// `S/(x^a, y^b, z^c, xyz)` over `F_p[x,y,z]`.
pub fn artinian(r: &Ring, a: u32, b: u32, c: u32) -> PresentedModule {
    let gens = polys(r, &[&format!("x^{a}"), &format!("y^{b}"), &format!("z^{c}"), "x*y*z"]);
    PresentedModule::quotient_ring(r, &gens).expect("homogeneous ideal")
}
