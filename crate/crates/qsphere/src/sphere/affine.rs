//! Degree ≤ 1 elements of A(S⁴_q), the Hopf action on them, and the
//! idempotent e with its covariance.

use std::ops::{Add, Mul, Sub};

use crate::operator::C64;
use crate::qnum::QContext;
use crate::uqso5::{antipode_star, UqGen};

/// Coordinates of an [`AffineElement`] in this order.
pub const AFFINE_BASIS: [&str; 6] = ["1", "x0", "x1", "x1*", "x2", "x2*"];

const ONE: usize = 0;
const X0: usize = 1;
const X1: usize = 2;
const X1S: usize = 3;
const X2: usize = 4;
const X2S: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct AffineElement(pub [C64; 6]);

impl AffineElement {
    pub fn zero() -> Self {
        Self::default()
    }

    fn unit(i: usize, k: f64) -> Self {
        let mut v = Self::zero();
        v.0[i] = C64::new(k, 0.0);
        v
    }

    pub fn one(k: f64) -> Self {
        Self::unit(ONE, k)
    }
    pub fn x0(k: f64) -> Self {
        Self::unit(X0, k)
    }
    pub fn x1(k: f64) -> Self {
        Self::unit(X1, k)
    }
    pub fn x1s(k: f64) -> Self {
        Self::unit(X1S, k)
    }
    pub fn x2(k: f64) -> Self {
        Self::unit(X2, k)
    }
    pub fn x2s(k: f64) -> Self {
        Self::unit(X2S, k)
    }

    pub fn star(&self) -> Self {
        let v = &self.0;
        AffineElement([v[ONE].conj(), v[X0].conj(), v[X1S].conj(), v[X1].conj(), v[X2S].conj(), v[X2].conj()])
    }

    pub fn scale(&self, k: C64) -> Self {
        AffineElement(self.0.map(|z| z * k))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Add for AffineElement {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..6 {
            self.0[i] += rhs.0[i];
        }
        self
    }
}

impl Sub for AffineElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<AffineElement> for f64 {
    type Output = AffineElement;
    fn mul(self, rhs: AffineElement) -> AffineElement {
        rhs.scale(C64::new(self, 0.0))
    }
}

/// h ▷ x for the three generators x₀, x₁, x₂.
fn act_on_generator(h: UqGen, g: usize, ctx: &QContext) -> AffineElement {
    let q = ctx.q;
    let z = AffineElement::zero();
    match (h, g) {
        (UqGen::K1, X1) => AffineElement::x1(q),
        (UqGen::K1Inv, X1) => AffineElement::x1(1.0 / q),
        (UqGen::K2, X1) => AffineElement::x1(1.0 / q),
        (UqGen::K2Inv, X1) => AffineElement::x1(q),
        (UqGen::K2, X2) => AffineElement::x2(q),
        (UqGen::K2Inv, X2) => AffineElement::x2(1.0 / q),
        (UqGen::K1 | UqGen::K1Inv | UqGen::K2 | UqGen::K2Inv, _) => AffineElement::unit(g, 1.0),
        (UqGen::E1, X0) => AffineElement::x1(q.powf(-0.5)),
        (UqGen::E2, X1) => AffineElement::x2(1.0),
        (UqGen::F1, X1) => AffineElement::x0(q.sqrt() * ctx.num(2.0)),
        (UqGen::F1, X0) => AffineElement::x1s(-q.powf(-1.5)),
        (UqGen::F2, X2) => AffineElement::x1(1.0),
        _ => z,
    }
}

/// h ▷ a, extended to adjoints by h ▷ a* = (S(h)* ▷ a)*.
pub fn hopf_action(h: UqGen, a: &AffineElement, ctx: &QContext) -> AffineElement {
    let mut out = AffineElement::zero();
    if matches!(h, UqGen::K1 | UqGen::K2 | UqGen::K1Inv | UqGen::K2Inv) {
        out.0[ONE] = a.0[ONE];
    }
    for g in [X0, X1, X2] {
        out = out + act_on_generator(h, g, ctx).scale(a.0[g]);
    }
    let (k, hs) = antipode_star(h, ctx);
    for (slot, g) in [(X1S, X1), (X2S, X2)] {
        let inner = act_on_generator(hs, g, ctx).scale(C64::new(k, 0.0));
        out = out + inner.star().scale(a.0[slot]);
    }
    out
}

/// κ(a) = K₁⁸K₂⁶ ▷ a.
pub fn kappa(a: &AffineElement, ctx: &QContext) -> AffineElement {
    let mut v = *a;
    for _ in 0..6 {
        v = hopf_action(UqGen::K2, &v, ctx);
    }
    for _ in 0..8 {
        v = hopf_action(UqGen::K1, &v, ctx);
    }
    v
}

pub type IdempotentMatrix = [[AffineElement; 4]; 4];
pub type Mat4 = [[f64; 4]; 4];

pub fn idempotent_e(ctx: &QContext) -> IdempotentMatrix {
    let q = ctx.q;
    let z = AffineElement::zero;
    let (q2, q3, q4) = (q * q, q.powi(3), q.powi(4));
    let half = |a: AffineElement| 0.5 * a;
    [
        [half(AffineElement::one(1.0) + AffineElement::x0(1.0)), half(AffineElement::x2(q3)), half(AffineElement::x1(-q)), z()],
        [
            half(AffineElement::x2s(1.0 / q3)),
            half(AffineElement::one(1.0) + AffineElement::x0(-q2)),
            z(),
            half(AffineElement::x1(q3)),
        ],
        [
            half(AffineElement::x1s(-1.0 / q)),
            z(),
            half(AffineElement::one(1.0) + AffineElement::x0(-q2)),
            half(AffineElement::x2(q3)),
        ],
        [z(), half(AffineElement::x1s(q)), half(AffineElement::x2s(1.0 / q3)), half(AffineElement::one(1.0) + AffineElement::x0(q4))],
    ]
}

/// The 4×4 spin matrices σ(h).
pub fn sigma_matrix(h: UqGen, ctx: &QContext) -> Mat4 {
    let q = ctx.q;
    let diag = |d: [f64; 4]| {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        m
    };
    let r = q.sqrt();
    match h {
        UqGen::K1 => diag([r, r, 1.0 / r, 1.0 / r]),
        UqGen::K1Inv => diag([1.0 / r, 1.0 / r, r, r]),
        UqGen::K2 => diag([1.0, 1.0 / q, q, 1.0]),
        UqGen::K2Inv => diag([1.0, q, 1.0 / q, 1.0]),
        UqGen::E1 => {
            let mut m = [[0.0; 4]; 4];
            m[0][2] = 1.0;
            m[1][3] = 1.0;
            m
        }
        UqGen::E2 => {
            let mut m = [[0.0; 4]; 4];
            m[2][1] = 1.0;
            m
        }
        UqGen::F1 | UqGen::F2 => {
            let e = sigma_matrix(h.star(), ctx);
            let mut m = [[0.0; 4]; 4];
            for i in 0..4 {
                for k in 0..4 {
                    m[i][k] = e[k][i];
                }
            }
            m
        }
    }
}

fn left(m: &Mat4, e: &IdempotentMatrix) -> IdempotentMatrix {
    let mut out = [[AffineElement::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if m[i][k] != 0.0 {
                    out[i][j] = out[i][j] + m[i][k] * e[k][j];
                }
            }
        }
    }
    out
}

fn right(e: &IdempotentMatrix, m: &Mat4) -> IdempotentMatrix {
    let mut out = [[AffineElement::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if m[k][j] != 0.0 {
                    out[i][j] = out[i][j] + m[k][j] * e[i][k];
                }
            }
        }
    }
    out
}

fn max_diff(a: &IdempotentMatrix, b: &IdempotentMatrix) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max(a[i][j].max_abs_diff(&b[i][j]));
        }
    }
    m
}

/// Coefficient residuals of K_i ▷ e = σ(K_i) e σ(K_i)⁻¹,
/// E_i ▷ e = σ(F_i) e σ(K_i)⁻¹ − q^{−i} σ(K_i)⁻¹ e σ(F_i), and κ(e*) = e.
pub fn covariance_check_e(ctx: &QContext) -> Vec<(&'static str, f64)> {
    let e = idempotent_e(ctx);
    let act = |h: UqGen| {
        let mut out = e;
        for row in out.iter_mut() {
            for a in row.iter_mut() {
                *a = hopf_action(h, a, ctx);
            }
        }
        out
    };
    let mut report = Vec::new();
    for (k, kinv, eg, fg, name_k, name_e) in [
        (UqGen::K1, UqGen::K1Inv, UqGen::E1, UqGen::F1, "K1", "E1"),
        (UqGen::K2, UqGen::K2Inv, UqGen::E2, UqGen::F2, "K2", "E2"),
    ] {
        let (sk, ski, sf) = (sigma_matrix(k, ctx), sigma_matrix(kinv, ctx), sigma_matrix(fg, ctx));
        let rhs = right(&left(&sk, &e), &ski);
        report.push((name_k, max_diff(&act(k), &rhs)));
        let a = right(&left(&sf, &e), &ski);
        let b = right(&left(&ski, &e), &sf);
        let qi = ctx.q.powi(eg.index());
        let mut rhs = a;
        for i in 0..4 {
            for j in 0..4 {
                rhs[i][j] = a[i][j] - (1.0 / qi) * b[i][j];
            }
        }
        report.push((name_e, max_diff(&act(eg), &rhs)));
    }
    let mut kes = e;
    for i in 0..4 {
        for j in 0..4 {
            kes[i][j] = kappa(&e[j][i].star(), ctx);
        }
    }
    report.push(("kappa", max_diff(&kes, &e)));
    report
}
