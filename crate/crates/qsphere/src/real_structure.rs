//! The antiunitary J on the spinor tower, the equivariant antilinear T, and
//! finite-cutoff diagnostics for the first-order condition.
//!
//! [a, JbJ⁻¹] does not vanish; it is small in the sense of fast decay along
//! j and l. Ideal membership is replaced by fitted decay profiles and by
//! cutoff-uniform norm bounds.

use std::sync::Arc;

use serde::Serialize;

use crate::basis::{BasisLabel, Chirality, Displacement, Family, TruncatedSpace};
use crate::dirac_zeta::{delta_commutator, dirac};
use crate::error::{Error, Result};
use crate::fredholm::grading_and_f;
use crate::half::Half;
use crate::operator::{AntilinearOperator, SparseOperator, C64};
use crate::qnum::QContext;
use crate::sphere::{sphere_generator, spinor, Gen};
use crate::uqso5::{antipode_star, rep_generator, UqGen};

fn check_spinor(space: &TruncatedSpace) -> Result<()> {
    let has = |c| space.labels().iter().any(|x: &BasisLabel| x.chirality == c);
    if space.family() != Family::Spinor || !has(Chirality::Plus) || !has(Chirality::Minus) {
        return Err(Error::UnsupportedFamily(space.family().name()));
    }
    Ok(())
}

/// i^{2l+1}(−1)^{j+m₁}; both exponents are integers on spinor labels.
fn j_phase(x: &BasisLabel) -> C64 {
    let i_pow = (x.two_l + 1).rem_euclid(4);
    let base = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][i_pow as usize];
    if ((x.two_j + x.two_m1) / 2).rem_euclid(2) == 0 {
        base
    } else {
        -base
    }
}

/// J|l,m₁,m₂;j⟩± = i^{2l+1}(−1)^{j+m₁}|l,−m₁,−m₂;j⟩±.
pub fn j_operator(space: &Arc<TruncatedSpace>) -> Result<AntilinearOperator> {
    check_spinor(space)?;
    Ok(AntilinearOperator::new(SparseOperator::from_map(space.clone(), Displacement::reflection(), j_phase)))
}

/// J with the extra weight q^{m₁+3m₂}.
pub fn t_operator(space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<AntilinearOperator> {
    check_spinor(space)?;
    let c = *ctx;
    let m = SparseOperator::from_map(space.clone(), Displacement::reflection(), move |x| {
        j_phase(x) * c.pow(x.m1() + 3.0 * x.m2())
    });
    Ok(AntilinearOperator::new(m))
}

fn max_entry(t: &SparseOperator) -> f64 {
    t.max_abs()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructuralResiduals {
    pub j_square: f64,
    pub j_dirac: f64,
    pub j_grading: f64,
}

/// J² + 1, JD − DJ and Jγ − γJ as max-entry residuals.
pub fn structural_residuals(space: &Arc<TruncatedSpace>, _ctx: &QContext) -> Result<StructuralResiduals> {
    let j = j_operator(space)?;
    let id = SparseOperator::identity(space.clone());
    let (d, _) = dirac(space)?;
    let (gamma, _) = grading_and_f(space)?;
    let j2 = j.then_antilinear(&j);
    let jd = j.after_linear(&d).matrix;
    let dj = j.before_linear(&d).matrix;
    let jg = j.after_linear(&gamma).matrix;
    let gj = j.before_linear(&gamma).matrix;
    Ok(StructuralResiduals {
        j_square: max_entry(&(&j2 + &id)),
        j_dirac: max_entry(&(&jd - &dj)),
        j_grading: max_entry(&(&jg - &gj)),
    })
}

/// ‖T·h − S(h)*·T‖ (max entry) for h ∈ {K₁, K₂, E₁, E₂}, relative to the
/// largest entry of T·h, since the weight q^{m₁+3m₂} spans many decades.
pub fn t_equivariance(space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<Vec<(&'static str, f64)>> {
    let t = t_operator(space, ctx)?;
    [UqGen::K1, UqGen::K2, UqGen::E1, UqGen::E2]
        .into_iter()
        .map(|h| {
            let (k, g) = antipode_star(h, ctx);
            let lhs = t.after_linear(&rep_generator(h, space, ctx)?).matrix;
            let rhs = t.before_linear(&rep_generator(g, space, ctx)?.scale_real(k)).matrix;
            Ok((h.name(), max_entry(&(&lhs - &rhs)) / max_entry(&lhs).max(f64::MIN_POSITIVE)))
        })
        .collect()
}

/// [T², h] for every generator of U_q(so(5)) (T² is linear).
pub fn t_square_commutators(space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<Vec<(&'static str, f64)>> {
    let t = t_operator(space, ctx)?;
    let t2 = t.then_antilinear(&t);
    UqGen::ALL.into_iter().map(|h| Ok((h.name(), max_entry(&t2.commutator(&rep_generator(h, space, ctx)?)?)))).collect()
}

/// ([a, JbJ⁻¹], [[D,a], JbJ⁻¹]). Exact on columns of margin ≥ 2.
pub fn commutant_ops(
    a: Gen,
    b: Gen,
    space: &Arc<TruncatedSpace>,
    ctx: &QContext,
) -> Result<(SparseOperator, SparseOperator)> {
    let j = j_operator(space)?;
    let (d, _) = dirac(space)?;
    let pa = sphere_generator(a, space, ctx)?;
    let jbj = j.conjugate(&sphere_generator(b, space, ctx)?)?;
    let da = d.commutator(&pa)?;
    Ok((pa.commutator(&jbj)?, da.commutator(&jbj)?))
}

/// ‖[D,a] − (δ(a)F + |D|[F,a])‖ on columns of margin ≥ 1.
pub fn dirac_commutator_identity(a: Gen, space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<f64> {
    let (d, abs) = dirac(space)?;
    let (_, f) = grading_and_f(space)?;
    let pa = sphere_generator(a, space, ctx)?;
    let direct = d.commutator(&pa)?;
    let rebuilt = &(&delta_commutator(&pa) * &f) + &(&abs * &f.commutator(&pa)?);
    Ok((&direct - &rebuilt).max_column_norm(&space.interior(1)))
}

/// [b, JaJ⁻¹] + J[a, JbJ⁻¹]J⁻¹, [a*, Jb*J⁻¹] + [a, JbJ⁻¹]*, and
/// [a, JbJ] + [a, JbJ⁻¹] (J⁻¹ = −J), max column norms on margin ≥ 4.
pub fn symmetry_residuals(
    a: Gen,
    b: Gen,
    space: &Arc<TruncatedSpace>,
    ctx: &QContext,
) -> Result<Vec<(&'static str, f64)>> {
    let j = j_operator(space)?;
    let cols = space.interior(4);
    if cols.is_empty() {
        return Err(Error::EmptyInterior { depth: 4 });
    }
    let (ab, _) = commutant_ops(a, b, space, ctx)?;
    let (ba, _) = commutant_ops(b, a, space, ctx)?;
    let (ab_star, _) = commutant_ops(a.star(), b.star(), space, ctx)?;
    // J[a, JbJ⁻¹]J⁻¹ = [JaJ⁻¹, b], hence the plus sign.
    let swap = &ba + &j.conjugate(&ab)?;
    let star = &ab_star + &ab.adjoint();
    let pa = sphere_generator(a, space, ctx)?;
    let pb = sphere_generator(b, space, ctx)?;
    let jbj = &(&j.matrix * &pb.conj()) * &j.matrix.conj();
    let plain = &pa.commutator(&jbj)? + &ab;
    Ok(vec![
        ("swap", swap.max_column_norm(&cols)),
        ("star", star.max_column_norm(&cols)),
        ("inverse-sign", plain.max_column_norm(&cols)),
    ])
}

/// The displayed closed form for f(l,½,l).
pub fn f_closed_form(l: f64, ctx: &QContext) -> f64 {
    let n = |z| ctx.num(z);
    let q = ctx.q;
    -ctx.pow(-l - 4.0)
        * (1.0 - q * q).powi(2)
        * n(2.0)
        * (ctx.pow(l - 1.0) + ctx.pow(-l + 1.0))
        * n(2.0 * l + 3.0).sqrt()
        * n(l + 1.0)
        * n(l + 2.0)
        * n(l + 3.0)
        / (n(2.0 * l + 2.0) * n(2.0 * l + 4.0).powi(2) * n(2.0 * l + 6.0))
}

/// f(l,j,m₂) as the four-term combination of D⁰ and D⁺ coefficients.
pub fn f_intermediate(l: f64, j: f64, m2: f64, ctx: &QContext) -> f64 {
    let dp = |l, m| spinor::d_plus(ctx, l, j, m);
    let d0 = |l, m| spinor::d_zero(ctx, l, j, m);
    d0(l + 1.0, m2 - 1.0) * dp(l, -m2) - dp(l, m2 - 1.0) * d0(l, -m2) + d0(l + 1.0, -m2 - 1.0) * dp(l, m2)
        - dp(l, -m2 - 1.0) * d0(l, m2)
}

/// ⟨l+1,½,l;½|[x₂, Jx₂J]|l,½,l;½⟩₊ read off the represented operators.
pub fn f_numeric(two_l: i32, space: &Arc<TruncatedSpace>, ctx: &QContext) -> Result<f64> {
    let src = BasisLabel::doubled(two_l, 1, two_l, 1, Chirality::Plus);
    let tgt = BasisLabel::doubled(two_l + 2, 1, two_l, 1, Chirality::Plus);
    let (s, t) = match (space.index_of(&src), space.index_of(&tgt)) {
        (Some(s), Some(t)) if space.margin(s) >= 2 => (s, t),
        _ => return Err(Error::EmptyInterior { depth: 2 }),
    };
    let (c, _) = commutant_ops(Gen::X2, Gen::X2, space, ctx)?;
    // JbJ = −JbJ⁻¹.
    Ok(-c.get(t, s).re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    J,
    L,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayProfile {
    pub axis: Axis,
    /// (level, max |entry| over source columns at that level).
    pub levels: Vec<(f64, f64)>,
    /// Fitted exponent r in max ≈ C·q^{r·level}; +∞ for the zero operator.
    pub rate: f64,
    /// Coefficient of determination of the fit.
    pub goodness: f64,
}

impl DecayProfile {
    /// Smallest C with max ≤ C·q^{exponent·level} at every level.
    pub fn constant(&self, exponent: f64, ctx: &QContext) -> f64 {
        self.levels.iter().map(|&(k, m)| m / ctx.pow(exponent * k)).fold(0.0, f64::max)
    }
}

/// Per-level maxima of the column entries of `t` over `cols`, with a
/// least-squares fit of ln(max) against level on the upper half of levels.
pub fn decay_profile(t: &SparseOperator, axis: Axis, cols: &[usize], ctx: &QContext) -> DecayProfile {
    let space = t.space();
    let mut per: std::collections::BTreeMap<i32, f64> = std::collections::BTreeMap::new();
    for &s in cols {
        let x = space.label(s);
        let key = match axis {
            Axis::J => x.two_j,
            Axis::L => x.two_l,
        };
        let m = t.column(s).iter().map(|(_, a)| a.norm()).fold(0.0, f64::max);
        let e = per.entry(key).or_insert(0.0);
        *e = e.max(m);
    }
    let levels: Vec<(f64, f64)> = per.into_iter().map(|(k, m)| (k as f64 / 2.0, m)).collect();
    let upper: Vec<(f64, f64)> =
        levels[levels.len() / 2..].iter().filter(|p| p.1 > 0.0).map(|&(k, m)| (k, m.ln())).collect();
    if upper.len() < 2 {
        return DecayProfile { axis, levels, rate: f64::INFINITY, goodness: 1.0 };
    }
    let n = upper.len() as f64;
    let mx = upper.iter().map(|p| p.0).sum::<f64>() / n;
    let my = upper.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = upper.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = upper.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = upper.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let goodness = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    DecayProfile { axis, levels, rate: slope / ctx.q.ln(), goodness }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic start vector entry in [−1, 1) from the label.
fn seed(x: &BasisLabel) -> f64 {
    let pack = |v: i32| (v as u16) as u64;
    let c = match x.chirality {
        Chirality::Plus => 1,
        Chirality::Minus => 2,
        Chirality::None => 0,
    };
    let key = pack(x.two_l) | pack(x.two_m1) << 16 | pack(x.two_m2) << 32 | (pack(x.two_j) & 0x3fff) << 48 | c << 62;
    (splitmix(key) >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

pub const POWER_ITERATIONS: usize = 200;
pub const POWER_RTOL: f64 = 1e-12;

/// ‖t restricted to `cols`‖ by power iteration on (tP)*(tP).
pub fn restricted_norm(t: &SparseOperator, cols: &[usize]) -> f64 {
    let n = t.dim();
    let mut mask = vec![false; n];
    for &c in cols {
        mask[c] = true;
    }
    let restrict = |v: &mut Vec<C64>| {
        for (z, &m) in v.iter_mut().zip(&mask) {
            if !m {
                *z = C64::new(0.0, 0.0);
            }
        }
    };
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let adj = t.adjoint();
    let mut v: Vec<C64> = t.space().labels().iter().map(|x| C64::new(seed(x), 0.0)).collect();
    restrict(&mut v);
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let nv = norm(&v);
        if nv == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        let mut w = adj.apply(&t.apply(&v));
        restrict(&mut w);
        let next = norm(&w);
        let done = (next - lambda).abs() <= POWER_RTOL * next;
        lambda = next;
        v = w;
        if done {
            break;
        }
    }
    lambda.sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothingReport {
    pub cutoffs: Vec<Half>,
    /// norms[c][k] = ‖|D|ᵏT‖ at cutoff c, on columns of margin ≥ 2.
    pub norms: Vec<Vec<f64>>,
    /// Largest relative change between consecutive cutoffs over all k.
    pub max_increment: f64,
}

/// ‖|D|ᵏT‖ for k = 0..=k_max at each spinor cutoff; `build` constructs T on
/// the given space.
pub fn smoothing_check(
    build: impl Fn(&Arc<TruncatedSpace>) -> Result<SparseOperator>,
    k_max: u32,
    cutoffs: &[Half],
) -> Result<SmoothingReport> {
    if k_max > 8 {
        return Err(Error::InvalidTolerance(k_max as f64));
    }
    let mut norms = Vec::new();
    for &l in cutoffs {
        let sp = Arc::new(TruncatedSpace::spinor(l)?);
        let cols = sp.interior(2);
        if cols.is_empty() {
            return Err(Error::EmptyInterior { depth: 2 });
        }
        let t = build(&sp)?;
        let (_, abs) = dirac(&sp)?;
        let mut row = Vec::new();
        let mut cur = t;
        for k in 0..=k_max {
            if k > 0 {
                cur = &abs * &cur;
            }
            row.push(restricted_norm(&cur, &cols));
        }
        norms.push(row);
    }
    let mut max_increment: f64 = 0.0;
    for w in norms.windows(2) {
        for (a, b) in w[0].iter().zip(&w[1]) {
            let scale = a.abs().max(b.abs());
            if scale > 0.0 {
                max_increment = max_increment.max((b - a).abs() / scale);
            }
        }
    }
    Ok(SmoothingReport { cutoffs: cutoffs.to_vec(), norms, max_increment })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(two_l: i32) -> Arc<TruncatedSpace> {
        Arc::new(TruncatedSpace::spinor(Half::from_doubled(two_l)).unwrap())
    }

    #[test]
    fn j_is_isometric_and_squares_to_minus_one() {
        let s = sp(7);
        let j = j_operator(&s).unwrap();
        let v: Vec<C64> = s.labels().iter().map(|x| C64::new(seed(x), -0.5 * seed(x))).collect();
        let n = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((n(&j.apply(&v)) - n(&v)).abs() <= 1e-12);
        let jj = j.apply(&j.apply(&v));
        assert!(jj.iter().zip(&v).all(|(a, b)| (a + b).norm() == 0.0));
    }

    #[test]
    fn t_is_j_on_zero_weights_and_polar() {
        let ctx = QContext::new(0.5).unwrap();
        let s = sp(7);
        let j = j_operator(&s).unwrap().matrix;
        let t = t_operator(&s, &ctx).unwrap().matrix;
        for (i, x) in s.labels().iter().enumerate() {
            let k = s.index_of(&Displacement::reflection().apply(x)).unwrap();
            let w = ctx.pow(x.m1() + 3.0 * x.m2());
            assert!((t.get(k, i) - j.get(k, i) * w).norm() <= 1e-15);
        }
    }

    #[test]
    fn t_square_is_equivariant() {
        let ctx = QContext::new(0.5).unwrap();
        for (h, r) in t_square_commutators(&sp(7), &ctx).unwrap() {
            assert!(r <= 1e-9, "{h}: {r:e}");
        }
    }

    #[test]
    fn commutator_vanishes_classically() {
        let ctx = QContext::new(0.999).unwrap();
        let s = sp(7);
        let (c, _) = commutant_ops(Gen::X0, Gen::X0, &s, &ctx).unwrap();
        assert!(c.max_column_norm(&s.interior(2)) <= 1e-2);
    }

    #[test]
    fn dirac_commutator_rebuilds() {
        let ctx = QContext::new(0.5).unwrap();
        let s = sp(9);
        for g in Gen::ALL {
            assert!(dirac_commutator_identity(g, &s, &ctx).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn generator_itself_does_not_decay() {
        let ctx = QContext::new(0.5).unwrap();
        let s = sp(13);
        let x2 = sphere_generator(Gen::X2, &s, &ctx).unwrap();
        let p = decay_profile(&x2, Axis::L, &s.interior(1), &ctx);
        assert!(p.rate.abs() < 0.3, "{}", p.rate);
        let z = SparseOperator::zero(s.clone());
        assert_eq!(decay_profile(&z, Axis::L, &s.interior(1), &ctx).rate, f64::INFINITY);
    }

    #[test]
    fn smoothing_separates_generator_from_zero() {
        let ctx = QContext::new(0.5).unwrap();
        let cutoffs = [Half::from_doubled(7), Half::from_doubled(9), Half::from_doubled(11)];
        let zero = smoothing_check(|s| Ok(SparseOperator::zero(s.clone())), 2, &cutoffs).unwrap();
        assert!(zero.norms.iter().flatten().all(|&n| n == 0.0));
        let x2 = smoothing_check(|s| sphere_generator(Gen::X2, s, &ctx), 1, &cutoffs).unwrap();
        assert!(x2.norms[2][1] > x2.norms[0][1] * 1.1);
    }
}
