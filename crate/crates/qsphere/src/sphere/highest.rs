//! The idempotent e and the highest-weight rows v^± as represented
//! operators, with the checks built from them.

use std::sync::Arc;

use serde::Serialize;

use super::affine::{idempotent_e, AffineElement, AFFINE_BASIS};
use super::relations::{Registry, RelationReport};
use crate::basis::{BasisLabel, Chirality, Family, TruncatedSpace};
use crate::error::{Error, Result};
use crate::operator::{SparseOperator, C64};
use crate::qnum::QContext;
use crate::sum::compensated_sum;

/// Square matrix of operators on one space.
pub type OpMatrix = Vec<Vec<SparseOperator>>;

/// Substitutes the registry's x₀, x₁, x₁*, x₂, x₂* into `a`.
pub fn represent_affine(a: &AffineElement, reg: &Registry) -> Result<SparseOperator> {
    let mut acc = SparseOperator::zero(reg.space().clone());
    for (k, sym) in a.0.iter().zip(AFFINE_BASIS) {
        if *k != C64::new(0.0, 0.0) {
            acc = acc.combine(reg.get(sym)?, C64::new(1.0, 0.0), *k)?;
        }
    }
    Ok(acc)
}

/// e with every entry represented through `reg`.
pub fn represent_e(reg: &Registry, ctx: &QContext) -> Result<OpMatrix> {
    idempotent_e(ctx).iter().map(|row| row.iter().map(|a| represent_affine(a, reg)).collect()).collect()
}

// Column index j addresses both b and the output row.
#[allow(clippy::needless_range_loop)]
fn mat_mul(a: &OpMatrix, b: &OpMatrix) -> Result<OpMatrix> {
    let space = a[0][0].space().clone();
    let mut out = Vec::with_capacity(a.len());
    for row in a {
        let mut out_row = Vec::with_capacity(b[0].len());
        for j in 0..b[0].len() {
            let mut acc = SparseOperator::zero(space.clone());
            for (k, x) in row.iter().enumerate() {
                if !x.is_zero() && !b[k][j].is_zero() {
                    acc = &acc + &x.compose(&b[k][j])?;
                }
            }
            out_row.push(acc);
        }
        out.push(out_row);
    }
    Ok(out)
}

fn mat_sub(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect()).collect()
}

/// Max over block columns (block j, basis column s) of the Euclidean norm
/// of the stacked column, restricted to `cols`.
fn block_residual(m: &OpMatrix, cols: &[usize]) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..m[0].len() {
        for &s in cols {
            let sq = compensated_sum(m.iter().map(|row| row[j].column_norm(s).powi(2)));
            worst = worst.max(sq.sqrt());
        }
    }
    worst
}

fn interior(reg: &Registry, depth: u32) -> Result<Vec<usize>> {
    let cols = reg.space().interior(depth);
    if cols.is_empty() {
        Err(Error::EmptyInterior { depth })
    } else {
        Ok(cols)
    }
}

/// e² = e as a 4×4 operator identity on the interior of `reg`'s space.
pub fn idempotent_residual(reg: &Registry, ctx: &QContext) -> Result<RelationReport> {
    let e = represent_e(reg, ctx)?;
    let depth = 2 * reg.get("x1")?.step_radius().max(reg.get("x2")?.step_radius()).max(reg.get("x0")?.step_radius());
    let cols = interior(reg, depth)?;
    let d = mat_sub(&mat_mul(&e, &e)?, &e);
    Ok(RelationReport { name: "e^2=e".to_owned(), residual: block_residual(&d, &cols), depth, columns: cols.len() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HighestWeightReport {
    pub checks: Vec<RelationReport>,
}

impl HighestWeightReport {
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// On the scalar tower: E₁ and E₂ annihilate |l,0,l;0⟩ for every l ≤ L, and
/// for n = 0..=`max_power` the rows v^± = x₂ⁿ(1±x₀, ±q³x₂, ∓qx₁, 0) satisfy
/// v⁺(1−e) = 0 and v⁻e = 0 on the interior.
pub fn highest_weight_checks(reg: &Registry, max_power: u32, ctx: &QContext) -> Result<HighestWeightReport> {
    let space = reg.space().clone();
    if space.family() != Family::Scalar {
        return Err(Error::UnsupportedFamily(space.family().name()));
    }
    let mut checks = Vec::new();
    for h in ["E1", "E2"] {
        let op = reg.get(h)?;
        let cols: Vec<usize> = (0..=space.cutoff().doubled() / 2)
            .filter_map(|l| space.index_of(&BasisLabel::doubled(2 * l, 0, 2 * l, 0, Chirality::None)))
            .collect();
        checks.push(RelationReport {
            name: format!("{h}|l,0,l;0>=0"),
            residual: op.max_column_norm(&cols),
            depth: 0,
            columns: cols.len(),
        });
    }
    let q = ctx.q;
    let e = represent_e(reg, ctx)?;
    let id = reg.get("1")?.clone();
    let one_minus_e: OpMatrix = e
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, x)| if i == j { &id - x } else { -x }).collect())
        .collect();
    let x2 = reg.get("x2")?;
    let mut power = id.clone();
    for n in 0..=max_power {
        for (sign, target, label) in [(1.0, &one_minus_e, "v+(1-e)"), (-1.0, &e, "v-e")] {
            let row = [
                AffineElement::one(1.0) + AffineElement::x0(sign),
                AffineElement::x2(sign * q.powi(3)),
                AffineElement::x1(-sign * q),
                AffineElement::zero(),
            ];
            let v: Vec<SparseOperator> =
                row.iter().map(|a| power.compose(&represent_affine(a, reg)?)).collect::<Result<_>>()?;
            let prod = mat_mul(&vec![v], target)?;
            let depth = n * x2.step_radius() + 2 * reg.get("x1")?.step_radius();
            let cols = interior(reg, depth)?;
            checks.push(RelationReport {
                name: format!("{label} l={}", crate::Half::from_doubled(2 * n as i32 + 1)),
                residual: block_residual(&prod, &cols),
                depth,
                columns: cols.len(),
            });
        }
        power = power.compose(x2)?;
    }
    Ok(HighestWeightReport { checks })
}

/// The vacuum column index of a scalar space.
pub fn vacuum(space: &Arc<TruncatedSpace>) -> Option<usize> {
    space.index_of(&BasisLabel::doubled(0, 0, 0, 0, Chirality::None))
}
