//! Relation harness: symbolic sums of words in registered operators,
//! evaluated on the columns a word cannot push past the truncation.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{sphere_generator, Gen};
use crate::basis::{Family, TruncatedSpace};
use crate::error::{Error, Result};
use crate::operator::{SparseOperator, C64};
use crate::qnum::QContext;
use crate::uqso5::{rep_generator, UqGen};

/// Σ coef · (s₁ s₂ ⋯ sₙ), words written left to right as operator products.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expr {
    terms: Vec<(C64, Vec<String>)>,
}

impl Expr {
    /// A single word, symbols separated by spaces; `"1"` is the identity.
    pub fn word(w: &str) -> Self {
        Self::default().plus(1.0, w)
    }

    pub fn plus(mut self, k: f64, w: &str) -> Self {
        self.terms.push((C64::new(k, 0.0), w.split_whitespace().map(str::to_owned).collect()));
        self
    }

    pub fn terms(&self) -> &[(C64, Vec<String>)] {
        &self.terms
    }

    fn minus_expr(&self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out.terms.extend(rhs.terms.iter().map(|(k, w)| (-k, w.clone())));
        out
    }
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Relation {
    pub fn new(name: impl Into<String>, lhs: Expr, rhs: Expr) -> Self {
        Self { name: name.into(), lhs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub name: String,
    /// Max Euclidean column norm of lhs − rhs over the checked columns.
    pub residual: f64,
    pub depth: u32,
    pub columns: usize,
}

/// Named operators on one space.
#[derive(Clone, Debug)]
pub struct Registry {
    space: Arc<TruncatedSpace>,
    ops: BTreeMap<String, SparseOperator>,
}

impl Registry {
    pub fn new(space: Arc<TruncatedSpace>) -> Self {
        let mut ops = BTreeMap::new();
        ops.insert("1".to_owned(), SparseOperator::identity(space.clone()));
        Self { space, ops }
    }

    pub fn space(&self) -> &Arc<TruncatedSpace> {
        &self.space
    }

    pub fn insert(&mut self, name: impl Into<String>, op: SparseOperator) -> Result<()> {
        if !Arc::ptr_eq(op.space(), &self.space) && **op.space() != *self.space {
            return Err(Error::SpaceMismatch);
        }
        self.ops.insert(name.into(), op);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&SparseOperator> {
        self.ops.get(name).ok_or_else(|| Error::UnknownSymbol(name.to_owned()))
    }

    /// Boundary depth consumed by the most expensive word.
    pub fn depth(&self, e: &Expr) -> Result<u32> {
        let mut depth = 0;
        for (_, w) in &e.terms {
            let mut d = 0;
            for s in w {
                d += self.get(s)?.step_radius();
            }
            depth = depth.max(d);
        }
        Ok(depth)
    }

    pub fn evaluate(&self, e: &Expr) -> Result<SparseOperator> {
        let mut acc = SparseOperator::zero(self.space.clone());
        for (k, w) in &e.terms {
            let mut op = self.get(w.first().map_or("1", |s| s.as_str()))?.clone();
            for s in w.iter().skip(1) {
                op = op.compose(self.get(s)?)?;
            }
            acc = acc.combine(&op, C64::new(1.0, 0.0), *k)?;
        }
        Ok(acc)
    }
}

/// Residual of lhs − rhs on the columns deep enough for every word.
pub fn check_relation(rel: &Relation, reg: &Registry) -> Result<RelationReport> {
    let diff = rel.lhs.minus_expr(&rel.rhs);
    let depth = reg.depth(&diff)?;
    let cols = reg.space.interior(depth);
    if cols.is_empty() {
        return Err(Error::EmptyInterior { depth });
    }
    let op = reg.evaluate(&diff)?;
    Ok(RelationReport { name: rel.name.clone(), residual: op.max_column_norm(&cols), depth, columns: cols.len() })
}

/// Larger of the lhs and rhs column norms on the columns `check_relation`
/// uses; the size rounding errors in the residual are relative to.
pub fn relation_scale(rel: &Relation, reg: &Registry) -> Result<f64> {
    let depth = reg.depth(&rel.lhs.minus_expr(&rel.rhs))?;
    let cols = reg.space.interior(depth);
    let side = |e: &Expr| reg.evaluate(e).map(|op| op.max_column_norm(&cols));
    Ok(side(&rel.lhs)?.max(side(&rel.rhs)?))
}

/// Checks every relation, in parallel, reporting in input order.
pub fn check_all(rels: &[Relation], reg: &Registry) -> Result<Vec<RelationReport>> {
    rels.par_iter().map(|r| check_relation(r, reg)).collect()
}

fn rel(name: &str, lhs: Expr, rhs: Expr) -> Relation {
    Relation::new(name, lhs, rhs)
}

/// The defining relations of A(S⁴_q), one entry per commutation rule.
pub fn defining_relations(ctx: &QContext) -> Vec<Relation> {
    let q = ctx.q;
    let q2 = q * q;
    let q4 = q2 * q2;
    let mut out = Vec::new();
    for (a, b) in [("x0", "x1"), ("x0", "x2"), ("x1", "x2")] {
        out.push(rel(&format!("{a}{b}=q2 {b}{a}"), Expr::word(&format!("{a} {b}")), Expr::default().plus(q2, &format!("{b} {a}"))));
    }
    for (a, b) in [("x1*", "x0"), ("x1*", "x2"), ("x2*", "x0"), ("x2*", "x1")] {
        out.push(rel(&format!("{a}{b}=q2 {b}{a}"), Expr::word(&format!("{a} {b}")), Expr::default().plus(q2, &format!("{b} {a}"))));
    }
    out.push(rel("[x1*,x1]=(1-q4)x0^2", Expr::word("x1* x1").plus(-1.0, "x1 x1*"), Expr::default().plus(1.0 - q4, "x0 x0")));
    out.push(rel("[x2*,x2]=x1*x1-q4 x1x1*", Expr::word("x2* x2").plus(-1.0, "x2 x2*"), Expr::word("x1* x1").plus(-q4, "x1 x1*")));
    out.push(rel("sphere", Expr::word("x0 x0").plus(1.0, "x1 x1*").plus(1.0, "x2 x2*"), Expr::word("1")));
    out.push(rel("x0=x0*", Expr::word("x0"), Expr::word("x0*")));
    out
}

pub fn radius_relation(ctx: &QContext) -> Relation {
    let q = ctx.q;
    rel("radius", Expr::default().plus(q.powi(8), "x0 x0").plus(q.powi(4), "x1* x1").plus(1.0, "x2* x2"), Expr::word("1"))
}

/// The relations between U_q(so(5)) and A(S⁴_q) in the crossed product.
pub fn crossed_relations(ctx: &QContext) -> Vec<Relation> {
    let q = ctx.q;
    let (qh, q2) = (q.sqrt(), ctx.num(2.0));
    let w = Expr::word;
    let e = Expr::default;
    vec![
        rel("K1x0", w("K1 x0"), w("x0 K1")),
        rel("K1x1", w("K1 x1"), e().plus(q, "x1 K1")),
        rel("K1x2", w("K1 x2"), w("x2 K1")),
        rel("K2x0", w("K2 x0"), w("x0 K2")),
        rel("K2x1", w("K2 x1"), e().plus(1.0 / q, "x1 K2")),
        rel("K2x2", w("K2 x2"), e().plus(q, "x2 K2")),
        rel("E1x0", w("E1 x0"), w("x0 E1").plus(1.0 / qh, "x1 K1")),
        rel("E1x1", w("E1 x1"), e().plus(1.0 / q, "x1 E1")),
        rel("E1x2", w("E1 x2"), w("x2 E1")),
        rel("F1x0", w("F1 x0"), w("x0 F1").plus(-1.0 / qh, "K1 x1*")),
        rel("F1x1", w("F1 x1"), e().plus(1.0 / q, "x1 F1").plus(qh * q2, "x0 K1")),
        rel("F1x2", w("F1 x2"), w("x2 F1")),
        rel("E2x0", w("E2 x0"), w("x0 E2")),
        rel("E2x1", w("E2 x1"), e().plus(q, "x1 E2").plus(1.0, "x2 K2")),
        rel("E2x2", w("E2 x2"), e().plus(1.0 / q, "x2 E2")),
        rel("F2x0", w("F2 x0"), w("x0 F2")),
        rel("F2x1", w("F2 x1"), e().plus(q, "x1 F2")),
        rel("F2x2", w("F2 x2"), e().plus(1.0 / q, "x2 F2").plus(1.0, "x1 K2")),
    ]
}

/// x₀, x₁, x₁*, x₂, x₂* and x₀* (the matrix adjoint of x₀) on `space`, plus
/// K₁, K₂, E₁, E₂, F₁, F₂ where U_q(so(5)) acts (scalar, spinor).
pub fn standard_registry(space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<Registry> {
    let mut reg = Registry::new(space.clone());
    for g in Gen::ALL {
        reg.insert(g.name(), sphere_generator(g, space, ctx)?)?;
    }
    let x0 = reg.get("x0")?.adjoint();
    reg.insert("x0*", x0)?;
    if matches!(space.family(), Family::Scalar | Family::Spinor) {
        for h in [UqGen::K1, UqGen::K2, UqGen::E1, UqGen::E2, UqGen::F1, UqGen::F2] {
            reg.insert(h.name(), rep_generator(h, space, ctx)?)?;
        }
    }
    Ok(reg)
}
