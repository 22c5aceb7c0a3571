//! U_q(so(5)): the representations σ_l on V_l, the Casimir 𝒞₁, the real
//! structure C and the Hopf tables on generators.

use std::sync::Arc;

use crate::basis::{eps_sign, BasisLabel, Displacement, Family, TruncatedSpace};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::operator::{AntilinearOperator, SparseOperator, C64};
use crate::qnum::QContext;
use crate::shift::{ShiftTerm, WeightedShift};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UqGen {
    K1,
    K2,
    K1Inv,
    K2Inv,
    E1,
    E2,
    F1,
    F2,
}

impl UqGen {
    pub const ALL: [UqGen; 8] =
        [UqGen::K1, UqGen::K2, UqGen::K1Inv, UqGen::K2Inv, UqGen::E1, UqGen::E2, UqGen::F1, UqGen::F2];

    pub fn name(self) -> &'static str {
        match self {
            UqGen::K1 => "K1",
            UqGen::K2 => "K2",
            UqGen::K1Inv => "K1^-1",
            UqGen::K2Inv => "K2^-1",
            UqGen::E1 => "E1",
            UqGen::E2 => "E2",
            UqGen::F1 => "F1",
            UqGen::F2 => "F2",
        }
    }

    pub fn star(self) -> UqGen {
        match self {
            UqGen::E1 => UqGen::F1,
            UqGen::E2 => UqGen::F2,
            UqGen::F1 => UqGen::E1,
            UqGen::F2 => UqGen::E2,
            k => k,
        }
    }

    /// The index i of E_i, F_i, K_i^{±1}.
    pub fn index(self) -> i32 {
        match self {
            UqGen::K1 | UqGen::K1Inv | UqGen::E1 | UqGen::F1 => 1,
            _ => 2,
        }
    }
}

/// Hopf structure on one generator. Tensor legs are (coefficient, left, right).
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorHopfData {
    pub generator: UqGen,
    pub coproduct: Vec<(f64, UqGen, UqGen)>,
    pub counit: f64,
    pub antipode: (f64, UqGen),
    pub star: UqGen,
}

pub fn hopf_data(h: UqGen, ctx: &QContext) -> GeneratorHopfData {
    let i = h.index();
    let (k, kinv) = if i == 1 { (UqGen::K1, UqGen::K1Inv) } else { (UqGen::K2, UqGen::K2Inv) };
    let qi = ctx.q.powi(i);
    let (coproduct, counit, antipode) = match h {
        UqGen::K1 | UqGen::K2 => (vec![(1.0, h, h)], 1.0, (1.0, kinv)),
        UqGen::K1Inv | UqGen::K2Inv => (vec![(1.0, h, h)], 1.0, (1.0, k)),
        UqGen::E1 | UqGen::E2 => (vec![(1.0, h, k), (1.0, kinv, h)], 0.0, (-qi, h)),
        UqGen::F1 | UqGen::F2 => (vec![(1.0, h, k), (1.0, kinv, h)], 0.0, (-1.0 / qi, h)),
    };
    GeneratorHopfData { generator: h, coproduct, counit, antipode, star: h.star() }
}

/// S(h)* as (coefficient, generator).
pub fn antipode_star(h: UqGen, ctx: &QContext) -> (f64, UqGen) {
    let (c, g) = hopf_data(h, ctx).antipode;
    (c, g.star())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaKind {
    A,
    B,
    C,
}

pub(crate) fn sqrt_nn(x: f64) -> f64 {
    debug_assert!(x > -1e-9 * (1.0 + x.abs()), "negative radicand {x}");
    x.max(0.0).sqrt()
}

fn eps_of(two_l: i32, two_j: i32, two_m2: i32) -> f64 {
    if two_l % 2 == 0 {
        0.0
    } else {
        eps_sign(two_l, two_j, two_m2)
    }
}

/// a_l(j,m₂), b_l(j,m₂), c_l(j,m₂) in doubled arguments.
pub fn sigma_coefficient(kind: SigmaKind, two_l: i32, two_j: i32, two_m2: i32, ctx: &QContext) -> f64 {
    let e = eps_of(two_l, two_j, two_m2);
    let (l, j, m2) = (two_l as f64 / 2.0, two_j as f64 / 2.0, two_m2 as f64 / 2.0);
    let n = |z: f64| ctx.num(z);
    let ae = e.abs();
    match kind {
        SigmaKind::A => {
            sqrt_nn(n(l - j - m2 + e) * n(l + j + m2 + 3.0 + e) / (n(2.0 * (j + ae) + 1.0) * n(2.0 * (j - ae) + 3.0)))
                / n(2.0)
        }
        SigmaKind::B => {
            if e == 0.0 {
                return 0.0;
            }
            let s = e * (2.0 * j + 1.0);
            2.0 * ae * sqrt_nn(n(l - s - m2 + 1.0) * n(l - s + m2 + 2.0)) / (n(2.0 * j) * n(2.0 * j + 2.0))
        }
        SigmaKind::C => {
            let sign = if e == 0.0 { 1.0 } else { -1.0 };
            sign * sqrt_nn(n(l - j + m2 + 2.0 - e) * n(l + j - m2 + 1.0 - e) / (n(2.0 * (j + ae) - 1.0) * n(2.0 * (j - ae) + 1.0)))
                / n(2.0)
        }
    }
}

/// Public form taking half-integers.
pub fn sigma_coefficients(kind: SigmaKind, l: Half, j: Half, m2: Half, ctx: &QContext) -> f64 {
    sigma_coefficient(kind, l.doubled(), j.doubled(), m2.doubled(), ctx)
}

fn check_family(space: &TruncatedSpace) -> Result<Family> {
    match space.family() {
        f @ (Family::Scalar | Family::Spinor) => Ok(f),
        f => Err(Error::UnsupportedFamily(f.name())),
    }
}

/// σ_l(h) as a symbolic shift on the given family. F_i is the adjoint of E_i.
pub fn uq_shift(h: UqGen, family: Family, ctx: &QContext) -> WeightedShift {
    let c = *ctx;
    let diag = |f: fn(&BasisLabel) -> f64| {
        WeightedShift::new(family, vec![ShiftTerm::new(Displacement::IDENTITY, move |x| c.pow(f(x)))])
    };
    match h {
        UqGen::K1 => diag(|x| x.m1()),
        UqGen::K2 => diag(|x| x.m2() - x.m1()),
        UqGen::K1Inv => diag(|x| -x.m1()),
        UqGen::K2Inv => diag(|x| x.m1() - x.m2()),
        UqGen::E1 => WeightedShift::new(
            family,
            vec![ShiftTerm::new(Displacement::shift(0, 2, 0, 0), move |x| {
                sqrt_nn(c.num(x.j() - x.m1()) * c.num(x.j() + x.m1() + 1.0))
            })],
        ),
        UqGen::E2 => {
            let term = |dj: i32, kind: SigmaKind| {
                ShiftTerm::new(Displacement::shift(0, -2, 2, 2 * dj), move |x| {
                    let (j, m1) = (x.j(), x.m1());
                    let pre = match dj {
                        1 => c.num(j - m1 + 1.0) * c.num(j - m1 + 2.0),
                        0 => c.num(j + m1) * c.num(j - m1 + 1.0),
                        _ => c.num(j + m1) * c.num(j + m1 - 1.0),
                    };
                    if pre == 0.0 {
                        return 0.0;
                    }
                    sqrt_nn(pre) * sigma_coefficient(kind, x.two_l, x.two_j, x.two_m2, &c)
                })
            };
            WeightedShift::new(family, vec![term(1, SigmaKind::A), term(0, SigmaKind::B), term(-1, SigmaKind::C)])
        }
        UqGen::F1 => uq_shift(UqGen::E1, family, ctx).adjoint(),
        UqGen::F2 => uq_shift(UqGen::E2, family, ctx).adjoint(),
    }
}

pub fn rep_generator(h: UqGen, space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<SparseOperator> {
    let family = check_family(space)?;
    Ok(match h {
        UqGen::F1 => rep_generator(UqGen::E1, space, ctx)?.adjoint(),
        UqGen::F2 => rep_generator(UqGen::E2, space, ctx)?.adjoint(),
        _ => uq_shift(h, family, ctx).materialize(space),
    })
}

/// q⁻¹K₁² + qK₁⁻² + (q−q⁻¹)²E₁F₁.
pub fn casimir_c1(space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<SparseOperator> {
    let q = ctx.q;
    let k = rep_generator(UqGen::K1, space, ctx)?;
    let ki = rep_generator(UqGen::K1Inv, space, ctx)?;
    let e = rep_generator(UqGen::E1, space, ctx)?;
    let f = rep_generator(UqGen::F1, space, ctx)?;
    let a = (&k * &k).scale_real(1.0 / q);
    let b = (&ki * &ki).scale_real(q);
    let c = (&e * &f).scale_real((q - 1.0 / q).powi(2));
    Ok(&(&a + &b) + &c)
}

/// C|l,m₁,m₂;j⟩ = (−q)^{m₁} q^{3m₂} |l,−m₁,−m₂;j⟩, antilinear.
pub fn real_structure_c(space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<AntilinearOperator> {
    if space.family() != Family::Scalar {
        return Err(Error::UnsupportedFamily(space.family().name()));
    }
    let c = *ctx;
    let m = SparseOperator::from_map(space.clone(), Displacement::reflection(), move |x| {
        let m1 = x.two_m1 / 2;
        let sign = if m1.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        C64::new(sign * c.pow(x.m1() + 3.0 * x.m2()), 0.0)
    });
    Ok(AntilinearOperator::new(m))
}
