//! Local cohomology tables against Laurent-monomial counts.

use kt_core::localcoh::{compare_pipelines, local_cohomology_koszul, Caps, Window};
use kt_core::{FreeModule, Poly, PresentedModule, Ring};

fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
    s.iter().map(|t| Poly::parse(r, t).unwrap()).collect()
}

fn unit() -> PresentedModule {
    PresentedModule::free(FreeModule::new(vec![0]))
}

/// `#{x^a : a ≤ -1, a = t}` in `F[x, x^-1] / F[x]`.
fn line_oracle(t: i64) -> usize {
    (t..=t).filter(|&a| a <= -1).count()
}

#[test]
fn radical_invariance_on_the_line() {
    let r = Ring::standard(2, &["x"]).unwrap();
    let w = Window::new(0, 1, -4, 0);
    let a = compare_pipelines(&r, &polys(&r, &["x"]), &unit(), &w, &Caps::default()).unwrap();
    let b = compare_pipelines(&r, &polys(&r, &["x", "x^2"]), &unit(), &w, &Caps::default()).unwrap();
    assert!(a.agrees() && b.agrees());
    assert_eq!(a.koszul.cells.values().map(|c| c.dim).collect::<Vec<_>>(), b.koszul.cells.values().map(|c| c.dim).collect::<Vec<_>>());
    for t in -4..=0 {
        assert_eq!(a.koszul.dim(0, t), Some(0));
        assert_eq!(a.koszul.dim(1, t), Some(line_oracle(t)));
        assert_eq!(b.ext.dim(1, t), Some(line_oracle(t)));
    }
}

#[test]
fn first_local_cohomology_of_the_plane_along_a_line_grows() {
    // Stage n sees x^-a y^b with 1 ≤ a ≤ n, so the dimensions climb with n
    // and no cell may be reported stable.
    let r = Ring::standard(2, &["x", "y"]).unwrap();
    let table = local_cohomology_koszul(&r, &polys(&r, &["x"]), &unit(), &Window::new(1, 1, -2, 0), 12).unwrap();
    for t in -2..=0 {
        let c = table.cells[&(1, t)];
        assert!(!c.stable);
        assert_eq!(c.dim as i64, 12 - (-t).max(1) + 1);
    }
}

#[test]
fn torsion_module_has_only_zeroth_local_cohomology() {
    let r = Ring::standard(3, &["x", "y"]).unwrap();
    let m = PresentedModule::quotient_ring(&r, &polys(&r, &["x^2", "y"])).unwrap();
    let a = compare_pipelines(&r, &polys(&r, &["x", "y"]), &m, &Window::new(0, 2, -2, 3), &Caps::default()).unwrap();
    assert!(a.agrees(), "{a:?}");
    for t in -2..=3 {
        assert_eq!(a.koszul.dim(0, t), Some(m.hilbert(&r, t)));
        assert_eq!(a.koszul.dim(1, t), Some(0));
        assert_eq!(a.koszul.dim(2, t), Some(0));
    }
}
