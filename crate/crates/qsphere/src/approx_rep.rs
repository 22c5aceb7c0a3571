//! The approximate representation: the hat space ℋ̂ carrying
//! A(SU_q(2)) ⊗ A(S²_q), the embedding of A(S⁴_q) into it, and the
//! compression π̃(a) = Pπ(a)Q back to the spinor space.
//!
//! The difference a − π̃(a) is not zero; it decays like q^j. A finer
//! approximation with coefficients Ĉ±, Ĥ⁺, D̂± is good up to q^l.

use std::sync::Arc;

use crate::basis::{BasisLabel, Chirality, Displacement, Family, TruncatedSpace};
use crate::error::{Error, Result};
use crate::operator::{OperatorBuilder, SparseOperator, C64};
use crate::qnum::QContext;
use crate::real_structure::{decay_profile, Axis, DecayProfile};
use crate::shift::{ShiftTerm, WeightedShift};
use crate::sphere::{sphere_generator, spinor, Expr, Gen, Registry, Relation};
use crate::uqso5::sqrt_nn;

/// Hat steps a word may take beyond the spinor labels: two generators of
/// A(S⁴_q), each of cost at most 2.
pub const HAT_RADIUS: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HatGen {
    Alpha,
    AlphaStar,
    Beta,
    BetaStar,
    A,
    B,
    BStar,
}

impl HatGen {
    pub const ALL: [HatGen; 7] =
        [HatGen::Alpha, HatGen::AlphaStar, HatGen::Beta, HatGen::BetaStar, HatGen::A, HatGen::B, HatGen::BStar];

    pub fn name(self) -> &'static str {
        match self {
            HatGen::Alpha => "alpha",
            HatGen::AlphaStar => "alpha*",
            HatGen::Beta => "beta",
            HatGen::BetaStar => "beta*",
            HatGen::A => "A",
            HatGen::B => "B",
            HatGen::BStar => "B*",
        }
    }
}

fn eps(x: &BasisLabel) -> f64 {
    spinor::eps(x.l(), x.j(), x.m2())
}

pub fn hat_shift(g: HatGen, ctx: &QContext) -> WeightedShift {
    let c = *ctx;
    let one = |d: Displacement, f: fn(&QContext, &BasisLabel) -> f64| {
        WeightedShift::new(Family::Hat, vec![ShiftTerm::new(d, move |x| f(&c, x))])
    };
    match g {
        HatGen::Alpha => one(Displacement::shift(1, 1, 0, 1), |c, x| sqrt_nn(1.0 - c.pow(2.0 * (x.j() + x.m1() + 1.0)))),
        HatGen::Beta => one(Displacement::shift(1, -1, 0, 1), |c, x| c.pow(x.j() + x.m1())),
        HatGen::A => one(Displacement::IDENTITY, |c, x| c.pow(x.l() - x.j() + x.m2() - eps(x))),
        HatGen::B => one(Displacement::shift(2, 0, 2, 0), |c, x| {
            sqrt_nn(1.0 - c.pow(2.0 * (x.l() - x.j() + x.m2() + 2.0 - eps(x))))
        }),
        HatGen::AlphaStar => hat_shift(HatGen::Alpha, ctx).adjoint(),
        HatGen::BetaStar => hat_shift(HatGen::Beta, ctx).adjoint(),
        HatGen::BStar => hat_shift(HatGen::B, ctx).adjoint(),
    }
}

pub fn hat_generator(g: HatGen, space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<SparseOperator> {
    if space.family() != Family::Hat {
        return Err(Error::UnsupportedFamily(space.family().name()));
    }
    Ok(match g {
        HatGen::AlphaStar => hat_generator(HatGen::Alpha, space, ctx)?.adjoint(),
        HatGen::BetaStar => hat_generator(HatGen::Beta, space, ctx)?.adjoint(),
        HatGen::BStar => hat_generator(HatGen::B, space, ctx)?.adjoint(),
        g => hat_shift(g, ctx).materialize(space),
    })
}

/// The hat space seeded by a spinor truncation, `HAT_RADIUS` steps deep.
pub fn hat_space(spinor_space: &TruncatedSpace) -> Result<Arc<TruncatedSpace>> {
    if spinor_space.family() != Family::Spinor {
        return Err(Error::UnsupportedFamily(spinor_space.family().name()));
    }
    Ok(Arc::new(TruncatedSpace::hat(spinor_space.cutoff(), HAT_RADIUS, &[Chirality::Plus, Chirality::Minus])?))
}

/// φ(x) as a sum of words in the hat generators.
pub fn embedding(x: Gen, ctx: &QContext) -> Expr {
    let q = ctx.q;
    match x {
        Gen::X0 => Expr::default().plus(-1.0, "alpha beta A").plus(-1.0, "beta* alpha* A"),
        Gen::X1 => Expr::default().plus(-1.0, "alpha alpha A").plus(q, "beta* beta* A"),
        Gen::X1Star => Expr::default().plus(-1.0, "A alpha* alpha*").plus(q, "A beta beta"),
        Gen::X2 => Expr::word("B"),
        Gen::X2Star => Expr::word("B*"),
    }
}

/// Hat generators plus π(x) = φ(x) for every generator of A(S⁴_q)
/// (and "x0*" as the matrix adjoint of π(x₀)).
pub fn hat_registry(space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<Registry> {
    let mut reg = Registry::new(space.clone());
    for g in HatGen::ALL {
        reg.insert(g.name(), hat_generator(g, space, ctx)?)?;
    }
    for x in Gen::ALL {
        let op = reg.evaluate(&embedding(x, ctx))?;
        reg.insert(x.name(), op)?;
    }
    let x0s = reg.get("x0")?.adjoint();
    reg.insert("x0*", x0s)?;
    Ok(reg)
}

fn rel(name: &str, lhs: Expr, rhs: Expr) -> Relation {
    Relation::new(name, lhs, rhs)
}

pub fn suq2_relations(ctx: &QContext) -> Vec<Relation> {
    let q = ctx.q;
    vec![
        rel("beta alpha = q alpha beta", Expr::word("beta alpha"), Expr::default().plus(q, "alpha beta")),
        rel("beta* alpha = q alpha beta*", Expr::word("beta* alpha"), Expr::default().plus(q, "alpha beta*")),
        rel("[beta,beta*]=0", Expr::word("beta beta*").plus(-1.0, "beta* beta"), Expr::default()),
        rel("alpha alpha* + beta beta* = 1", Expr::word("alpha alpha*").plus(1.0, "beta beta*"), Expr::word("1")),
        rel("alpha* alpha + q2 beta* beta = 1", Expr::word("alpha* alpha").plus(q * q, "beta* beta"), Expr::word("1")),
    ]
}

pub fn podles_relations(ctx: &QContext) -> Vec<Relation> {
    let q2 = ctx.q * ctx.q;
    vec![
        rel("A B = q2 B A", Expr::word("A B"), Expr::default().plus(q2, "B A")),
        rel("B B* + A2 = 1", Expr::word("B B*").plus(1.0, "A A"), Expr::word("1")),
        rel("B* B + q4 A2 = 1", Expr::word("B* B").plus(q2 * q2, "A A"), Expr::word("1")),
    ]
}

/// The inclusion Q: ℋ → ℋ̂ as an index map, and its adjoint P.
#[derive(Clone, Debug)]
pub struct Compression {
    pub spinor: Arc<TruncatedSpace>,
    pub hat: Arc<TruncatedSpace>,
    q_index: Vec<usize>,
}

pub fn pq_maps(hat: &Arc<TruncatedSpace>, spinor_space: &Arc<TruncatedSpace>) -> Result<Compression> {
    if hat.family() != Family::Hat || spinor_space.family() != Family::Spinor || hat.cutoff() != spinor_space.cutoff()
    {
        return Err(Error::SpaceMismatch);
    }
    let q_index = spinor_space.labels().iter().map(|x| hat.index_of(x).ok_or(Error::SpaceMismatch)).collect::<Result<_>>()?;
    Ok(Compression { spinor: spinor_space.clone(), hat: hat.clone(), q_index })
}

impl Compression {
    /// P on a single hat label: its spinor index, or None outside I.
    pub fn project(&self, x: &BasisLabel) -> Option<usize> {
        if x.is_admissible(Family::Spinor) {
            self.spinor.index_of(x)
        } else {
            None
        }
    }

    /// max over spinor basis vectors of ‖PQξ − ξ‖.
    pub fn pq_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &h) in self.q_index.iter().enumerate() {
            if self.project(self.hat.label(h)) != Some(i) {
                worst = 1.0;
            }
        }
        worst
    }

    /// QP as a diagonal operator on ℋ̂.
    pub fn qp(&self) -> SparseOperator {
        SparseOperator::diagonal(self.hat.clone(), |x| C64::new(if self.project(x).is_some() { 1.0 } else { 0.0 }, 0.0))
    }

    /// P·t·Q as an operator on ℋ.
    pub fn compress(&self, t: &SparseOperator) -> Result<SparseOperator> {
        if !Arc::ptr_eq(t.space(), &self.hat) && **t.space() != *self.hat {
            return Err(Error::SpaceMismatch);
        }
        let mut b = OperatorBuilder::new(self.spinor.clone());
        for (s, &h) in self.q_index.iter().enumerate() {
            let src = self.spinor.label(s);
            for (th, a) in t.column(h) {
                if let Some(k) = self.project(self.hat.label(th)) {
                    b.push_indexed(s, k, Displacement::between(src, self.spinor.label(k)), a);
                }
            }
        }
        Ok(b.build())
    }
}

/// The compression maps together with π on the hat space.
pub struct HatModel {
    pub pq: Compression,
    pub reg: Registry,
}

impl HatModel {
    pub fn new(spinor_space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<Self> {
        let hat = hat_space(spinor_space)?;
        Ok(Self { pq: pq_maps(&hat, spinor_space)?, reg: hat_registry(&hat, ctx)? })
    }
}

/// π̃(x) = Pφ(x)Q.
pub fn pi_tilde(x: Gen, model: &HatModel) -> Result<SparseOperator> {
    model.pq.compress(model.reg.get(x.name())?)
}

fn interior(space: &TruncatedSpace, depth: u32) -> Result<Vec<usize>> {
    let cols = space.interior(depth);
    if cols.is_empty() {
        return Err(Error::EmptyInterior { depth });
    }
    Ok(cols)
}

/// Per-j maxima of the entries of x − π̃(x) on columns of margin ≥ 1.
pub fn deviation_check(x: Gen, model: &HatModel, ctx: &QContext) -> Result<DecayProfile> {
    let sp = &model.pq.spinor;
    let cols = interior(sp, 1)?;
    let d = &sphere_generator(x, sp, ctx)? - &pi_tilde(x, model)?;
    Ok(decay_profile(&d, Axis::J, &cols, ctx))
}

/// Per-j maxima of π̃(ab) − π̃(a)π̃(b) on columns of margin ≥ 2.
pub fn multiplicativity_defect(a: Gen, b: Gen, model: &HatModel, ctx: &QContext) -> Result<DecayProfile> {
    let (pq, reg) = (&model.pq, &model.reg);
    let cols = interior(&pq.spinor, 2)?;
    let joint = pq.compress(&(reg.get(a.name())? * reg.get(b.name())?))?;
    let split = &pq.compress(reg.get(a.name())?)? * &pq.compress(reg.get(b.name())?)?;
    Ok(decay_profile(&(&joint - &split), Axis::J, &cols, ctx))
}

/// Smoothing-level coefficients; ε is taken at each coefficient's own
/// subscript, as for the exact coefficients.
pub mod hat_coefficients {
    use super::spinor::eps;
    use crate::qnum::QContext;
    use crate::uqso5::sqrt_nn;

    pub fn c_plus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        -c.pow(l - j + m2 - e) * sqrt_nn(1.0 - c.pow(2.0 * (l + j + m2 + 3.0 + e)))
    }

    pub fn c_minus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        -c.pow(l + j + m2 + 1.0 + e) * sqrt_nn(1.0 - c.pow(2.0 * (l - j + m2 - e)))
    }

    /// The approximation of H⁺ itself. It is only good up to q^l after
    /// multiplication by q^{2j}; see [`h_hat`].
    pub fn h_plus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        c.pow(l + m2 + 1.0) * sqrt_nn(c.pow(2.0 * e * (2.0 * j + 1.0)) - c.pow(2.0 * (l + m2 + 2.0)))
    }

    /// Ĥ⁺ = q^{2j}·(approximate H⁺), the form paired with q^{−2j}A⁰, q^{−2j}B⁰.
    pub fn h_hat(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        c.pow(2.0 * j) * h_plus(c, l, j, m2)
    }

    pub fn d_plus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        sqrt_nn(1.0 - c.pow(2.0 * (l + j + m2 + 3.0 + e))) * sqrt_nn(1.0 - c.pow(2.0 * (l - j + m2 + 2.0 - e)))
    }

    pub fn d_minus(c: &QContext, l: f64, _j: f64, m2: f64) -> f64 {
        -c.pow(2.0 * (l + m2) + 3.0)
    }
}

type Coef = fn(&QContext, f64, f64, f64) -> f64;

fn q2j_h_plus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
    c.pow(2.0 * j) * spinor::h_plus(c, l, j, m2)
}

/// max over spinor labels of |X − X̂|/q^l for X ∈ {C⁺, C⁻, q^{2j}H⁺, D⁺, D⁻}.
/// H⁺ alone is not within q^l of its approximation at j ≈ l (the error
/// there is of order q²); it only ever appears multiplied by q^{2j}.
pub fn coefficient_approximations(space: &TruncatedSpace, ctx: &QContext) -> Vec<(&'static str, f64)> {
    let pairs: [(&'static str, Coef, Coef); 5] = [
        ("C+", spinor::c_plus, hat_coefficients::c_plus),
        ("C-", spinor::c_minus, hat_coefficients::c_minus),
        ("q2j H+", q2j_h_plus, hat_coefficients::h_hat),
        ("D+", spinor::d_plus, hat_coefficients::d_plus),
        ("D-", spinor::d_minus, hat_coefficients::d_minus),
    ];
    pairs
        .iter()
        .map(|&(name, exact, approx)| {
            let worst = space
                .labels()
                .iter()
                .filter(|x| x.chirality == Chirality::Plus)
                .map(|x| (exact(ctx, x.l(), x.j(), x.m2()) - approx(ctx, x.l(), x.j(), x.m2())).abs() / ctx.pow(x.l()))
                .fold(0.0, f64::max);
            (name, worst)
        })
        .collect()
}

/// x₀, x₁, x₂ with the C⁰, H⁰, D⁰ terms dropped and C±, H⁺, D± replaced by
/// their smoothing-level approximations.
pub fn smoothing_approximation(x: Gen, ctx: &QContext) -> Result<WeightedShift> {
    use hat_coefficients as h;
    let c = *ctx;
    if x == Gen::X2 {
        return Ok(WeightedShift::new(
            Family::Spinor,
            vec![
                ShiftTerm::new(Displacement::shift(2, 0, 2, 0), move |x| h::d_plus(&c, x.l(), x.j(), x.m2())),
                ShiftTerm::new(Displacement::shift(-2, 0, 2, 0), move |x| h::d_minus(&c, x.l(), x.j(), x.m2())),
            ],
        ));
    }
    type Pre = fn(&QContext, f64, f64) -> f64;
    let (dm, p, z, m): (i32, Pre, Pre, Pre) = match x {
        Gen::X0 => (0, spinor::a_plus, spinor::a_zero, |c, j, m1| spinor::a_plus(c, j - 1.0, m1)),
        Gen::X1 => (2, spinor::b_plus, spinor::b_zero, spinor::b_minus),
        _ => return Err(Error::UnknownSymbol(x.name().to_owned())),
    };
    let t = |dl: i32, dj: i32, f: Box<dyn Fn(&BasisLabel) -> f64 + Send + Sync>| {
        ShiftTerm::new(Displacement::shift(2 * dl, dm, 0, 2 * dj), f)
    };
    Ok(WeightedShift::new(
        Family::Spinor,
        vec![
            t(1, 1, Box::new(move |x| p(&c, x.j(), x.m1()) * h::c_plus(&c, x.l(), x.j(), x.m2()))),
            t(-1, 1, Box::new(move |x| p(&c, x.j(), x.m1()) * h::c_minus(&c, x.l(), x.j(), x.m2()))),
            t(1, 0, Box::new(move |x| z(&c, x.j(), x.m1()) * h::h_plus(&c, x.l(), x.j(), x.m2()))),
            t(-1, 0, Box::new(move |x| z(&c, x.j(), x.m1()) * h::h_plus(&c, x.l() - 1.0, x.j(), x.m2()))),
            t(1, -1, Box::new(move |x| m(&c, x.j(), x.m1()) * h::c_minus(&c, x.l() + 1.0, x.j() - 1.0, x.m2()))),
            t(-1, -1, Box::new(move |x| m(&c, x.j(), x.m1()) * h::c_plus(&c, x.l() - 1.0, x.j() - 1.0, x.m2()))),
        ],
    ))
}

/// Per-l maxima of x − (smoothing-level approximation of x).
pub fn intermediate_deviation(x: Gen, space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<DecayProfile> {
    let cols = interior(space, 1)?;
    let approx = smoothing_approximation(x, ctx)?.materialize(space);
    let d = &sphere_generator(x, space, ctx)? - &approx;
    Ok(decay_profile(&d, Axis::L, &cols, ctx))
}
