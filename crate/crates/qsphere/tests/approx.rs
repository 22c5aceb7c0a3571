//! The approximate representation through A(SU_q(2)) ⊗ A(S²_q).

use std::sync::Arc;

use qsphere::approx_rep::{
    coefficient_approximations, deviation_check, hat_registry, hat_space, intermediate_deviation,
    multiplicativity_defect, pi_tilde, podles_relations, pq_maps, suq2_relations, HatModel,
};
use qsphere::basis::{BasisLabel, Chirality, Family, TruncatedSpace};
use qsphere::sphere::{check_all, defining_relations, Gen};
use qsphere::{Half, QContext};

fn spinor(two_l: i32) -> Arc<TruncatedSpace> {
    Arc::new(TruncatedSpace::spinor(Half::from_doubled(two_l)).unwrap())
}

#[test]
fn hat_relations_hold() {
    for q in [0.3, 0.5, 0.8] {
        let ctx = QContext::new(q).unwrap();
        let hat = hat_space(&spinor(7)).unwrap();
        let reg = hat_registry(&hat, &ctx).unwrap();
        let mut rels = suq2_relations(&ctx);
        rels.extend(podles_relations(&ctx));
        rels.extend(defining_relations(&ctx));
        for r in check_all(&rels, &reg).unwrap() {
            assert!(r.residual <= 1e-10, "q={q} {}: {:e}", r.name, r.residual);
        }
    }
}

#[test]
fn p_and_q() {
    let sp = spinor(7);
    let hat = hat_space(&sp).unwrap();
    let pq = pq_maps(&hat, &sp).unwrap();
    assert_eq!(pq.pq_residual(), 0.0);
    let proj = pq.qp();
    assert!((&(&proj * &proj) - &proj).max_abs() == 0.0);
    assert!((&proj.adjoint() - &proj).max_abs() == 0.0);
    let outside = BasisLabel::doubled(3, 3, 1, 1, Chirality::Plus);
    assert!(outside.is_admissible(Family::Hat) && !outside.is_admissible(Family::Spinor));
    assert!(pq.project(&outside).is_none());
}

#[test]
fn compressed_generators() {
    let ctx = QContext::new(0.5).unwrap();
    let sp = spinor(9);
    let model = HatModel::new(&sp, &ctx).unwrap();
    let x1 = pi_tilde(Gen::X1, &model).unwrap();
    let x1s = pi_tilde(Gen::X1Star, &model).unwrap();
    assert!((&x1.adjoint() - &x1s).max_abs() <= 1e-15);
    let x0 = pi_tilde(Gen::X0, &model).unwrap();
    let mut disps: Vec<_> = x0.components().iter().map(|c| (c.displacement().d2l, c.displacement().d2j)).collect();
    disps.sort();
    assert_eq!(disps, vec![(-2, -2), (2, 2)]);
}

#[test]
fn generators_are_approximated_up_to_q_to_the_j() {
    for q in [0.3, 0.5, 0.8] {
        let ctx = QContext::new(q).unwrap();
        let sp = spinor(15);
        let model = HatModel::new(&sp, &ctx).unwrap();
        for g in Gen::ALL {
            let p = deviation_check(g, &model, &ctx).unwrap();
            assert!(p.constant(1.0, &ctx) <= 10.0, "q={q} {}: C={}", g.name(), p.constant(1.0, &ctx));
            if q == 0.3 && g == Gen::X0 {
                assert!(p.rate >= 0.95, "rate {}", p.rate);
            }
        }
    }
}

#[test]
fn smoothing_level_approximation() {
    for q in [0.3, 0.5, 0.8] {
        let ctx = QContext::new(q).unwrap();
        let sp = spinor(15);
        for (name, c) in coefficient_approximations(&sp, &ctx) {
            assert!(c <= 10.0, "q={q} {name}: {c}");
        }
        for g in [Gen::X0, Gen::X1, Gen::X2] {
            let p = intermediate_deviation(g, &sp, &ctx).unwrap();
            assert!(p.constant(1.0, &ctx) <= 10.0, "q={q} {}: {}", g.name(), p.constant(1.0, &ctx));
        }
    }
}

#[test]
fn compression_is_multiplicative_up_to_q_to_the_j() {
    let ctx = QContext::new(0.5).unwrap();
    let sp = spinor(13);
    let model = HatModel::new(&sp, &ctx).unwrap();
    for a in Gen::ALL {
        for b in Gen::ALL {
            let p = multiplicativity_defect(a, b, &model, &ctx).unwrap();
            assert!(p.constant(1.0, &ctx) <= 10.0, "{}{}: {}", a.name(), b.name(), p.constant(1.0, &ctx));
        }
    }
}
