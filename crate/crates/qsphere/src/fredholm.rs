//! Grading, the chirality-swap symmetry F, and the index pairing of the
//! idempotent e computed three independent ways.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{spinor_level, BasisLabel, Chirality, Displacement, Family, TruncatedSpace};
use crate::error::{Error, Result};
use crate::operator::{SparseOperator, C64};
use crate::qnum::QContext;
use crate::shift::word_diagonal;
use crate::sphere::{idempotent_e, spinor, represent_affine, sphere_shift, standard_registry, AffineElement, Gen, Registry};
use crate::sum::{compensated_sum, Compensated};

/// Level budget for series that must certify their tail.
pub const MAX_LEVELS: u32 = 400;

fn has_both_chiralities(space: &TruncatedSpace) -> bool {
    let has = |c| space.labels().iter().any(|x| x.chirality == c);
    space.family() == Family::Spinor && has(Chirality::Plus) && has(Chirality::Minus)
}

/// γ = ±1 by chirality and F swapping the two chiralities.
pub fn grading_and_f(space: &Arc<TruncatedSpace>) -> Result<(SparseOperator, SparseOperator)> {
    if !has_both_chiralities(space) {
        return Err(Error::UnsupportedFamily(space.family().name()));
    }
    let gamma = SparseOperator::diagonal(space.clone(), |x| C64::new(x.chirality.sign(), 0.0));
    let f = SparseOperator::from_map(space.clone(), Displacement::IDENTITY.flipping(), |_| C64::new(1.0, 0.0));
    Ok((gamma, f))
}

/// Σ over components of Σ|amplitudes|. Each component is a weighted partial
/// permutation, so its singular values are the moduli of its weights.
pub fn trace_norm_upper(t: &SparseOperator) -> f64 {
    compensated_sum(t.entries().map(|(_, _, a)| a.norm()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingMethod {
    Simple,
    Series,
    Direct,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingResult {
    pub value: f64,
    pub method: PairingMethod,
    /// Cutoff K for the simple method, number of l-levels summed otherwise.
    pub levels: u32,
    /// Certified bound on everything left out (0 when the tail is exact).
    pub tail_bound: f64,
}

impl PairingResult {
    pub fn distance_to_integer(&self) -> f64 {
        (self.value - self.value.round()).abs()
    }
}

/// ch(e) = Tr(π₊(tr e) − π₋(tr e)) on the two simple representations
/// truncated at K, plus the exact geometric remainder.
pub fn pairing_simple(k: u32, ctx: &QContext) -> Result<PairingResult> {
    let trace_e = idempotent_e(ctx).iter().enumerate().fold(AffineElement::zero(), |acc, (i, row)| acc + row[i]);
    let mut total = Compensated::default();
    for (sign, chi) in [(1.0, Chirality::Plus), (-1.0, Chirality::Minus)] {
        let sp = Arc::new(TruncatedSpace::simple(k, chi));
        let reg = standard_registry(&sp, ctx)?;
        let t = represent_affine(&trace_e, &reg)?;
        for d in t.diag() {
            total.add(sign * d.re);
        }
    }
    // Missing part of (1−q²)² Σ q^{2(k₁+k₂)} beyond k₁,k₂ ≤ K.
    let r = ctx.pow(2.0 * (k as f64 + 1.0));
    let tail = r * (2.0 - r);
    total.add(tail);
    Ok(PairingResult { value: total.value(), method: PairingMethod::Simple, levels: k, tail_bound: 0.0 })
}

/// The generic term f_lj(q) of the pairing series (doubled l, j).
pub fn f_lj(two_l: i32, two_j: i32, ctx: &QContext) -> f64 {
    let (l, j) = (two_l as f64 / 2.0, two_j as f64 / 2.0);
    let p = |z: f64| ctx.pow(z);
    let q2 = ctx.q * ctx.q;
    let r = (1.0 + q2) / (1.0 - q2);
    let a = (2.0 * j + 1.0) * (1.0 + p(4.0 * j + 2.0)) - r * (1.0 - p(4.0 * j + 2.0));
    let d = (1.0 - p(4.0 * l + 4.0)) * (1.0 - p(4.0 * l + 8.0)) * (1.0 - p(4.0 * j)) * (1.0 - p(4.0 * j + 4.0));
    let b = (l - j + 1.0) * (1.0 + p(4.0 * l + 6.0)) * (1.0 + p(4.0 * j + 2.0)) - r * q2 * (p(4.0 * j) - p(4.0 * l + 4.0));
    (1.0 - q2).powi(4) * a / d * p(2.0 * l - 1.0) * b
}

/// Upper bound for f_lj: 8(2j+1)(l−j+1)q^{2l−1}.
pub fn f_lj_bound(two_l: i32, two_j: i32, ctx: &QContext) -> f64 {
    let (l, j) = (two_l as f64 / 2.0, two_j as f64 / 2.0);
    8.0 * (2.0 * j + 1.0) * (l - j + 1.0) * ctx.pow(2.0 * l - 1.0)
}

/// Certified bound on Σ_{l' > l} Σ_j f_l'j. Summing the per-term bound over
/// j gives (8/3)n(n+1)(n+2)q^{2n−2} with n = l+½, whose consecutive ratio
/// q²(n+3)/n decreases in n.
pub fn series_tail_after(two_l: i32, ctx: &QContext) -> f64 {
    let n = ((two_l + 1) / 2 + 1) as f64;
    let x = ctx.q * ctx.q;
    let first = 8.0 / 3.0 * n * (n + 1.0) * (n + 2.0) * ctx.pow(2.0 * n - 2.0);
    let ratio = x * (n + 3.0) / n;
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        first / (1.0 - ratio)
    }
}

/// Σ_{l,j} f_lj(q), level by level until the certified tail is ≤ `tail_tol`.
pub fn pairing_series(tail_tol: f64, ctx: &QContext) -> Result<PairingResult> {
    let mut total = Compensated::default();
    let mut tail = f64::INFINITY;
    for level in 0..MAX_LEVELS {
        let two_l = 2 * level as i32 + 1;
        for two_j in (1..=two_l).step_by(2) {
            total.add(f_lj(two_l, two_j, ctx));
        }
        tail = series_tail_after(two_l, ctx);
        if tail <= tail_tol {
            return Ok(PairingResult {
                value: total.value(),
                method: PairingMethod::Series,
                levels: level + 1,
                tail_bound: tail,
            });
        }
    }
    Err(Error::TailBudget { bound: tail, budget: tail_tol, levels: MAX_LEVELS })
}

/// ½ Σᵢ Tr(γF[F, pᵢᵢ]) on a truncation (exact level by level, since γ and F
/// keep l and only diagonal entries enter the trace).
pub fn chern_trace(p: &[[AffineElement; 4]; 4], reg: &Registry) -> Result<f64> {
    let (gamma, f) = grading_and_f(reg.space())?;
    let gf = &gamma * &f;
    let mut total = Compensated::default();
    for (i, row) in p.iter().enumerate() {
        let a = represent_affine(&row[i], reg)?;
        let c = f.commutator(&a)?;
        for d in (&gf * &c).diag() {
            total.add(d.re);
        }
    }
    Ok(0.5 * total.value())
}

/// Diagonal of γF[F,x₀] summed over one spinor level, both chiralities.
fn reduced_level(two_l: i32, x0: &crate::shift::WeightedShift) -> f64 {
    let labels: Vec<BasisLabel> =
        [Chirality::Plus, Chirality::Minus].iter().flat_map(|&c| spinor_level(two_l, c)).collect();
    let parts: Vec<f64> = labels
        .par_iter()
        .map(|x| {
            let mut y = *x;
            y.chirality = x.chirality.flipped();
            x.chirality.sign() * (word_diagonal(&[x0], x) - word_diagonal(&[x0], &y))
        })
        .collect();
    compensated_sum(parts)
}

/// The same level sum using the factorization of the x₀ diagonal: on a
/// label of chirality ± it is ±A⁰(j,m₁)H⁰(l,j,m₂), so each label of either
/// chirality contributes 2A⁰H⁰ and the m₁ and m₂ sums separate.
fn reduced_level_factored(two_l: i32, ctx: &QContext) -> f64 {
    let l = two_l as f64 / 2.0;
    let mut total = Compensated::default();
    for c in [Chirality::Plus, Chirality::Minus] {
        let top: Vec<BasisLabel> = spinor_level(two_l, c).into_iter().filter(|x| x.two_m1 == x.two_j).collect();
        let mut two_j = -1;
        let mut sa = 0.0;
        for x in &top {
            if x.two_j != two_j {
                two_j = x.two_j;
                let j = x.j();
                sa = compensated_sum((0..=two_j).map(|k| spinor::a_zero(ctx, j, j - k as f64)));
            }
            total.add(2.0 * sa * spinor::h_zero(ctx, l, x.j(), x.m2()));
        }
    }
    total.value()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectPairing {
    /// ½Tr(γF[F,p]) over ℋ⊗ℂ⁴ restricted to the truncation.
    pub full_truncated: f64,
    /// The reduced form c·Tr(γF[F,x₀]) on the same truncation.
    pub reduced_truncated: f64,
    /// Truncated value continued level by level until the certified tail fits.
    pub result: PairingResult,
}

/// The pairing of an idempotent `p` whose trace involves only 1 and x₀
/// (e and 1−e), computed from the represented operators on `space` and
/// continued past the cutoff with the symbolic x₀ diagonal.
pub fn pairing_direct_of(p: &[[AffineElement; 4]; 4], space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<DirectPairing> {
    let reg = standard_registry(space, ctx)?;
    let full = chern_trace(p, &reg)?;
    let trace = p.iter().enumerate().fold(AffineElement::zero(), |acc, (i, row)| acc + row[i]);
    let coef = trace.0[1].re;
    if trace.0.iter().skip(2).any(|z| z.norm() != 0.0) {
        return Err(Error::UnsupportedFamily("idempotent whose trace is not in span{1, x0}"));
    }
    let x0 = sphere_shift(Gen::X0, Family::Spinor, ctx)?;
    let top = space.cutoff().doubled();
    let mut reduced = Compensated::default();
    for two_l in (1..=top).step_by(2) {
        reduced.add(0.5 * coef * reduced_level(two_l, &x0));
    }
    let reduced_truncated = reduced.value();
    let mut total = reduced;
    let mut two_l = top;
    let mut tail = coef.abs() / (0.5 * (1.0 - ctx.q * ctx.q).powi(2)) * series_tail_after(two_l, ctx);
    while tail > ctx.tol_series {
        two_l += 2;
        if (two_l as u32).div_ceil(2) > MAX_LEVELS {
            return Err(Error::TailBudget { bound: tail, budget: ctx.tol_series, levels: MAX_LEVELS });
        }
        total.add(0.5 * coef * reduced_level_factored(two_l, ctx));
        tail = coef.abs() / (0.5 * (1.0 - ctx.q * ctx.q).powi(2)) * series_tail_after(two_l, ctx);
    }
    let continued = total.value() - reduced_truncated + full;
    Ok(DirectPairing {
        full_truncated: full,
        reduced_truncated,
        result: PairingResult {
            value: continued,
            method: PairingMethod::Direct,
            levels: ((two_l + 1) / 2) as u32,
            tail_bound: tail,
        },
    })
}

pub fn pairing_direct(space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<DirectPairing> {
    pairing_direct_of(&idempotent_e(ctx), space, ctx)
}

/// 1 − e as a matrix of affine elements.
pub fn complement(p: &[[AffineElement; 4]; 4]) -> [[AffineElement; 4]; 4] {
    let mut out = *p;
    for (i, row) in out.iter_mut().enumerate() {
        for (j, a) in row.iter_mut().enumerate() {
            let one = if i == j { AffineElement::one(1.0) } else { AffineElement::zero() };
            *a = one - *a;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::half::Half;

    fn ctx(q: f64) -> QContext {
        QContext::new(q).unwrap()
    }

    #[test]
    fn factored_level_sum_matches_label_sum() {
        for q in [0.3, 0.8] {
            let c = ctx(q);
            let x0 = sphere_shift(Gen::X0, Family::Spinor, &c).unwrap();
            for two_l in (1..=13).step_by(2) {
                let (a, b) = (reduced_level(two_l, &x0), reduced_level_factored(two_l, &c));
                assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0), "{two_l}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn grading_and_symmetry_are_exact() {
        let sp = Arc::new(TruncatedSpace::spinor(Half::from_doubled(5)).unwrap());
        let (g, f) = grading_and_f(&sp).unwrap();
        let id = SparseOperator::identity(sp.clone());
        assert!((&f * &f).approx_eq(&id, 0.0));
        assert!(f.adjoint().approx_eq(&f, 0.0));
        assert!((&(&g * &f) + &(&f * &g)).is_zero());
        let chiral = Arc::new(TruncatedSpace::spinor_chiral(Half::from_doubled(5), Chirality::Plus).unwrap());
        assert!(grading_and_f(&chiral).is_err());
    }

    #[test]
    fn trace_norm_of_simple_operators() {
        let sp = Arc::new(TruncatedSpace::simple(1, Chirality::Plus));
        assert_eq!(trace_norm_upper(&SparseOperator::zero(sp.clone())), 0.0);
        let t = SparseOperator::diagonal(sp, |x| C64::new(if x.k1() == 0 && x.k2() < 2 { 1.0 - 0.5 * x.k2() as f64 } else { 0.0 }, 0.0));
        assert_eq!(trace_norm_upper(&t), 1.5);
    }

    #[test]
    fn generic_term_limits() {
        let c = ctx(1e-3);
        assert!((f_lj(1, 1, &c) - 1.0).abs() < 1e-2);
        assert!(f_lj(3, 1, &c).abs() < 1e-2);
        // Leading behaviour 2j(l−j+1)q^{2l−1}.
        let lead = 2.0 * 0.5 * 2.0 * c.pow(2.0);
        assert!((f_lj(3, 1, &c) / lead - 1.0).abs() < 1e-2);
    }

    #[test]
    fn printed_term_bound_fails_at_large_l() {
        // 4(2j+1)q^{2l−1} misses the (l−j+1) growth.
        let c = ctx(0.5);
        let (tl, tj) = (299, 21);
        assert!(f_lj(tl, tj, &c) > 4.0 * 22.0 * c.pow(298.0));
        assert!(f_lj(tl, tj, &c) <= f_lj_bound(tl, tj, &c));
    }

    #[test]
    fn tail_bound_dominates_remaining_sum() {
        for q in [0.3, 0.5, 0.8] {
            let c = ctx(q);
            for two_l in [1, 5, 11, 21] {
                let mut rest = Compensated::default();
                for tl in (two_l + 2..two_l + 800).step_by(2) {
                    for tj in (1..=tl).step_by(2) {
                        rest.add(f_lj(tl, tj, &c));
                    }
                }
                assert!(rest.value() <= series_tail_after(two_l, &c), "{q} {two_l}");
            }
        }
    }

    #[test]
    fn simple_pairing_is_one() {
        for (q, k) in [(0.5, 50), (0.8, 200), (0.3, 10)] {
            let r = pairing_simple(k, &ctx(q)).unwrap();
            assert!((r.value - 1.0).abs() <= 1e-12, "{q} {}", r.value);
        }
    }

    #[test]
    fn series_pairing_is_one() {
        for q in [0.3, 0.5, 0.8] {
            let r = pairing_series(1e-10, &ctx(q)).unwrap();
            assert!((r.value - 1.0).abs() <= 1e-8, "{q} {}", r.value);
            assert!(r.tail_bound <= 1e-10);
        }
        assert!(matches!(pairing_series(1e-10, &ctx(0.97)), Err(Error::TailBudget { .. })));
    }

    #[test]
    fn direct_pairing_small_cutoff() {
        let c = ctx(0.5);
        let sp = Arc::new(TruncatedSpace::spinor(Half::from_doubled(5)).unwrap());
        let d = pairing_direct(&sp, &c).unwrap();
        assert!((d.full_truncated - d.reduced_truncated).abs() <= 1e-10);
        assert!((d.result.value - 1.0).abs() <= 1e-8, "{}", d.result.value);
        let m = pairing_direct_of(&complement(&idempotent_e(&c)), &sp, &c).unwrap();
        assert!((m.result.value + 1.0).abs() <= 1e-8, "{}", m.result.value);
    }
}
