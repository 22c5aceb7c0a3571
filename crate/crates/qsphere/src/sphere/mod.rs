//! Representations of A(S⁴_q), the idempotent e and the relation harness.

mod affine;
mod coefficients;
mod highest;
mod relations;

use std::sync::Arc;

pub use affine::{
    covariance_check_e, hopf_action, idempotent_e, kappa, sigma_matrix, AffineElement, IdempotentMatrix, Mat4,
    AFFINE_BASIS,
};
pub use coefficients::{scalar, spinor};
pub use highest::{
    highest_weight_checks, idempotent_residual, represent_affine, represent_e, vacuum, HighestWeightReport, OpMatrix,
};
pub use relations::{
    check_all, check_relation, crossed_relations, defining_relations, radius_relation, relation_scale, standard_registry, Expr, Registry,
    Relation, RelationReport,
};

use crate::basis::{Chirality, Displacement, Family, TruncatedSpace};
use crate::error::{Error, Result};
use crate::operator::SparseOperator;
use crate::qnum::QContext;
use crate::shift::{ShiftTerm, WeightedShift};
use crate::uqso5::sqrt_nn;

/// Generators of A(S⁴_q) and the adjoints of the non-selfadjoint ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    X0,
    X1,
    X1Star,
    X2,
    X2Star,
}

impl Gen {
    pub const ALL: [Gen; 5] = [Gen::X0, Gen::X1, Gen::X1Star, Gen::X2, Gen::X2Star];

    pub fn name(self) -> &'static str {
        match self {
            Gen::X0 => "x0",
            Gen::X1 => "x1",
            Gen::X1Star => "x1*",
            Gen::X2 => "x2",
            Gen::X2Star => "x2*",
        }
    }

    pub fn star(self) -> Gen {
        match self {
            Gen::X1 => Gen::X1Star,
            Gen::X1Star => Gen::X1,
            Gen::X2 => Gen::X2Star,
            Gen::X2Star => Gen::X2,
            Gen::X0 => Gen::X0,
        }
    }
}

/// The generator as a symbolic shift on the given family (simple, scalar or
/// spinor; on the spinor family the chirality of each source label picks the
/// sign pattern, upper signs for `Plus`).
pub fn sphere_shift(g: Gen, family: Family, ctx: &QContext) -> Result<WeightedShift> {
    let c = *ctx;
    let base = match g {
        Gen::X1Star => return Ok(sphere_shift(Gen::X1, family, ctx)?.adjoint()),
        Gen::X2Star => return Ok(sphere_shift(Gen::X2, family, ctx)?.adjoint()),
        g => g,
    };
    let terms = match family {
        Family::Simple => simple_terms(base, c),
        Family::Scalar => scalar::terms(base, c),
        Family::Spinor => spinor::terms(base, c),
        Family::Hat => return Err(Error::UnsupportedFamily("hat")),
    };
    Ok(WeightedShift::new(family, terms))
}

fn simple_terms(g: Gen, c: QContext) -> Vec<ShiftTerm> {
    match g {
        Gen::X0 => vec![ShiftTerm::new(Displacement::IDENTITY, move |x| {
            x.chirality.sign() * c.pow(2.0 * (x.k1() + x.k2()) as f64)
        })],
        Gen::X1 => vec![ShiftTerm::new(Displacement::shift(0, 1, 0, 0), move |x| {
            c.pow(2.0 * x.k2() as f64) * sqrt_nn(1.0 - c.pow(4.0 * (x.k1() + 1) as f64))
        })],
        _ => vec![ShiftTerm::new(Displacement::shift(0, 0, 1, 0), move |x| {
            sqrt_nn(1.0 - c.pow(4.0 * (x.k2() + 1) as f64))
        })],
    }
}

/// The represented generator on `space`; x₁*, x₂* are matrix adjoints.
pub fn sphere_generator(g: Gen, space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<SparseOperator> {
    match g {
        Gen::X1Star => Ok(sphere_generator(Gen::X1, space, ctx)?.adjoint()),
        Gen::X2Star => Ok(sphere_generator(Gen::X2, space, ctx)?.adjoint()),
        g => Ok(sphere_shift(g, space.family(), ctx)?.materialize(space)),
    }
}

/// x₀, x₁, x₂ on ℓ²(ℕ²) truncated to k₁,k₂ ≤ K, sign `±` selecting the irrep.
pub fn simple_generator(g: Gen, sign: Chirality, k: u32, ctx: &QContext) -> Result<SparseOperator> {
    if k < 1 || sign == Chirality::None {
        return Err(Error::InvalidCutoff { family: "simple", cutoff: crate::Half::int(k as i32) });
    }
    let sp = Arc::new(TruncatedSpace::simple(k, sign));
    sphere_generator(g, &sp, ctx)
}

/// The scalar (left regular) representation.
pub fn scalar_generator(g: Gen, space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<SparseOperator> {
    if space.family() != Family::Scalar {
        return Err(Error::UnsupportedFamily(space.family().name()));
    }
    sphere_generator(g, space, ctx)
}

/// The chiral spinor representation of one chirality; columns of the other
/// chirality (if the space carries both) are left zero.
pub fn spinor_generator(
    g: Gen,
    chirality: Chirality,
    space: &Arc<TruncatedSpace>,
    ctx: &QContext,
) -> Result<SparseOperator> {
    if space.family() != Family::Spinor || chirality == Chirality::None {
        return Err(Error::UnsupportedFamily(space.family().name()));
    }
    let full = sphere_generator(g, space, ctx)?;
    let keep = SparseOperator::diagonal(space.clone(), move |x| {
        let on = if x.chirality == chirality { 1.0 } else { 0.0 };
        crate::operator::C64::new(on, 0.0)
    });
    Ok(&full * &keep)
}
