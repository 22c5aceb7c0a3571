use std::sync::Arc;

use qsphere::basis::{BasisLabel, Chirality, Family, TruncatedSpace};
use qsphere::shift::word_diagonal;
use qsphere::sphere::{
    check_all, crossed_relations, defining_relations, radius_relation, simple_generator, sphere_generator,
    sphere_shift, spinor_generator, standard_registry, Gen,
};
use qsphere::{Half, QContext};

fn ctx(q: f64) -> QContext {
    QContext::new(q).unwrap()
}

#[test]
fn scalar_x2_on_vacuum() {
    let c = ctx(0.5);
    let sp = Arc::new(TruncatedSpace::scalar(Half::int(2)).unwrap());
    let x2 = sphere_generator(Gen::X2, &sp, &c).unwrap();
    let src = sp.index_of(&BasisLabel::doubled(0, 0, 0, 0, Chirality::None)).unwrap();
    let col = x2.column(src);
    assert_eq!(col.len(), 1);
    assert_eq!(*sp.label(col[0].0), BasisLabel::doubled(2, 0, 2, 0, Chirality::None));
    let expected = c.pow(-1.5) * (c.num(2.0) / c.num(5.0)).sqrt();
    assert!((col[0].1.re - expected).abs() < 1e-14);
}

#[test]
fn simple_generators_on_ground_state() {
    let c = ctx(0.5);
    let x0 = simple_generator(Gen::X0, Chirality::Plus, 3, &c).unwrap();
    assert_eq!(x0.get(0, 0).re, 1.0);
    let x0m = simple_generator(Gen::X0, Chirality::Minus, 3, &c).unwrap();
    assert_eq!(x0m.get(0, 0).re, -1.0);
    let x2 = simple_generator(Gen::X2, Chirality::Plus, 3, &c).unwrap();
    let sp = x2.space().clone();
    let t = sp.index_of(&BasisLabel::simple(0, 1, Chirality::Plus)).unwrap();
    assert!((x2.get(t, 0).re - (1.0 - 0.0625f64).sqrt()).abs() < 1e-15);
    assert!(simple_generator(Gen::X0, Chirality::Plus, 0, &c).is_err());
}

#[test]
fn spinor_radius_on_lowest_state() {
    for q in [0.3, 0.5, 0.8] {
        let c = ctx(q);
        let s = |g| sphere_shift(g, Family::Spinor, &c).unwrap();
        let (x0, x1, x1s, x2, x2s) = (s(Gen::X0), s(Gen::X1), s(Gen::X1Star), s(Gen::X2), s(Gen::X2Star));
        for chi in [Chirality::Plus, Chirality::Minus] {
            let xi = BasisLabel::doubled(1, 1, 1, 1, chi);
            let r = q.powi(8) * word_diagonal(&[&x0, &x0], &xi)
                + q.powi(4) * word_diagonal(&[&x1s, &x1], &xi)
                + word_diagonal(&[&x2s, &x2], &xi);
            assert!((r - 1.0).abs() <= 1e-12, "{q} {chi:?} {r}");
        }
    }
}

#[test]
fn spinor_d0_sign_follows_chirality() {
    let c = ctx(0.5);
    let sp = Arc::new(TruncatedSpace::spinor(Half::from_doubled(3)).unwrap());
    let x2 = sphere_generator(Gen::X2, &sp, &c).unwrap();
    let amp = |chi| {
        let s = sp.index_of(&BasisLabel::doubled(1, 1, -1, 1, chi)).unwrap();
        let t = sp.index_of(&BasisLabel::doubled(1, 1, 1, 1, chi)).unwrap();
        x2.get(t, s).re
    };
    let (p, m) = (amp(Chirality::Plus), amp(Chirality::Minus));
    assert!(p != 0.0);
    assert_eq!(p, -m);
}

#[test]
fn spinor_component_counts() {
    let c = ctx(0.5);
    let sp = Arc::new(TruncatedSpace::spinor_chiral(Half::from_doubled(9), Chirality::Plus).unwrap());
    let dl = |g| {
        let op = spinor_generator(g, Chirality::Plus, &sp, &c).unwrap();
        let mut v: Vec<i32> = op.components().iter().map(|k| k.displacement().d2l).collect();
        v.sort();
        v.dedup();
        v
    };
    assert_eq!(dl(Gen::X0), vec![-2, 0, 2]);
    assert_eq!(dl(Gen::X2), vec![-2, 0, 2]);
    let x0 = spinor_generator(Gen::X0, Chirality::Plus, &sp, &c).unwrap();
    assert_eq!(x0.components().len(), 9);
    let x1 = spinor_generator(Gen::X1, Chirality::Plus, &sp, &c).unwrap();
    assert_eq!(x1.components().len(), 9);
    let x2 = spinor_generator(Gen::X2, Chirality::Plus, &sp, &c).unwrap();
    assert_eq!(x2.components().len(), 3);
}

#[test]
fn adjoint_generators_are_matrix_adjoints() {
    let c = ctx(0.5);
    let spaces = [
        Arc::new(TruncatedSpace::scalar(Half::int(5)).unwrap()),
        Arc::new(TruncatedSpace::spinor(Half::from_doubled(7)).unwrap()),
        Arc::new(TruncatedSpace::simple(6, Chirality::Plus)),
    ];
    for sp in spaces {
        for (g, gs) in [(Gen::X1, Gen::X1Star), (Gen::X2, Gen::X2Star), (Gen::X0, Gen::X0)] {
            let a = sphere_generator(g, &sp, &c).unwrap().adjoint();
            let b = sphere_generator(gs, &sp, &c).unwrap();
            assert!(a.approx_eq(&b, 0.0), "{:?} {}", sp.family(), g.name());
            // The symbolic adjoint agrees with the matrix adjoint.
            if sp.family() != Family::Simple {
                let s = sphere_shift(g, sp.family(), &c).unwrap().adjoint().materialize(&sp);
                assert!(s.approx_eq(&a, 0.0));
            }
        }
    }
}

#[test]
fn relations_at_moderate_cutoff() {
    for q in [0.3, 0.8] {
        let c = ctx(q);
        let mut rels = defining_relations(&c);
        rels.push(radius_relation(&c));
        rels.extend(crossed_relations(&c));
        let sp = Arc::new(TruncatedSpace::spinor_chiral(Half::from_doubled(15), Chirality::Minus).unwrap());
        for r in check_all(&rels, &standard_registry(&sp, &c).unwrap()).unwrap() {
            assert!(r.residual <= 1e-9, "{q} {} {}", r.name, r.residual);
            assert!(r.columns > 0);
        }
    }
}
