use kt_core::groebner::image_contains;
use kt_core::resolution::free_resolution;
use kt_core::sr::{build_u, efd_witness, strong_reducer, verify_strong_reducer, SrCaps, SupportedComplexInput};
use kt_core::{ChainMap, FreeComplex, GradedMatrix, Poly, PresentedModule, Ring};

fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
    s.iter().map(|t| Poly::parse(r, t).unwrap()).collect()
}

#[test]
fn build_u_over_the_resolution_of_s_mod_x_squared() {
    let r = Ring::standard(2, &["x", "y"]).unwrap();
    let q = PresentedModule::quotient_ring(&r, &polys(&r, &["x^2"])).unwrap();
    let p = free_resolution(&r, &q, 3).complex;
    let built = build_u(&r, &polys(&r, &["x", "x*y"]), 1, &p, &SrCaps::default()).unwrap();
    built.psi.validate(&r).unwrap();
    assert_eq!(built.psi.target(), &p);
    assert_eq!(built.psi.map(0), GradedMatrix::identity(&r, p.module(0)));
    assert!(built.u >= built.foxby_exponent);
    assert_eq!(built.foxby_exponent, 2);
}

#[test]
fn frobenius_filtration_of_a_non_monomial_ideal() {
    let r = Ring::standard(2, &["x", "y"]).unwrap();
    let steps = efd_witness(&r, &polys(&r, &["x+y", "y^2"]), 1).unwrap();
    assert_eq!(steps[0].power, 1);
    // (x+y)^2 = x^2 + y^2 in characteristic 2, and y^4 = (y^2)^2
    assert_eq!(steps[1].q, 2);
    assert_eq!(steps[1].power, 2);
    let frob = PresentedModule::quotient_ring(&r, &polys(&r, &["x^2+y^2", "y^4"])).unwrap();
    let square = PresentedModule::quotient_ring(&r, &polys(&r, &["x^2+y^2", "x*y^2+y^3", "y^4"])).unwrap();
    assert!(image_contains(&r, square.relations(), None, frob.relations()));
    assert!(steps.iter().all(|s| s.pd_finite && s.pd == Some(2)));
}

#[test]
fn reducer_of_a_shifted_koszul_complex_round_trips_through_verification() {
    let r = Ring::standard(3, &["x", "y"]).unwrap();
    let seq = polys(&r, &["x", "y"]);
    let k = kt_core::koszul::koszul(&r, &seq).unwrap().complex.shift(&r, -2);
    let q = PresentedModule::quotient_ring(&r, &seq).unwrap();
    let map = GradedMatrix::identity(&r, k.module(2));
    let input = SupportedComplexInput { complex: k.clone(), support: seq.clone(), target: q.clone(), map: map.clone() };
    let sr = strong_reducer(&r, &input, &SrCaps::default()).unwrap();
    assert_eq!(sr.stages.m, 2);
    let report = verify_strong_reducer(&r, &sr.complex, &sr.alpha, &k, &map, &q).unwrap();
    assert!(report.holds());
    // the zero map is not an epimorphism on Z_2
    let zero = ChainMap::zero(&sr.complex, &k);
    assert!(!verify_strong_reducer(&r, &sr.complex, &zero, &k, &map, &q).unwrap().epimorphism);
}

#[test]
fn unsupported_target_is_rejected() {
    let r = Ring::standard(2, &["x", "y"]).unwrap();
    let x = FreeComplex::from_diffs(&r, 0, vec![PresentedModule::quotient_ring(&r, &polys(&r, &["x"])).unwrap().relations().clone()]).unwrap();
    let input = SupportedComplexInput {
        complex: x.clone(),
        support: polys(&r, &["x"]),
        target: PresentedModule::quotient_ring(&r, &polys(&r, &["y"])).unwrap(),
        map: GradedMatrix::identity(&r, x.module(0)),
    };
    assert!(strong_reducer(&r, &input, &SrCaps::default()).is_err());
}
