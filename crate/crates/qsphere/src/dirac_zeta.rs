//! The Dirac operator, zeta traces and residues at s = 3, 4.
//!
//! Residues are read off the exact asymptotics of level sums: with
//! g(n) = Σ_{|D| = n} w(ξ) = a₃n³ + a₂n² + a₁n + a₀ + (exponentially small),
//! ζ_w(s) = Σₖ aₖ ζ(s−k) + (entire), so the pole at s = k+1 has residue aₖ.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{dim_spinor_level, epsilon, spinor_level, BasisLabel, Chirality, Displacement, Family, TruncatedSpace};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::operator::{SparseOperator, C64};
use crate::qnum::QContext;
use crate::shift::{word_diagonal, WeightedShift};
use crate::sphere::{sphere_shift, Gen};
use crate::sum::{compensated_sum, Compensated};

/// D (chirality swap weighted by l+3/2) and |D|.
pub fn dirac(space: &Arc<TruncatedSpace>) -> Result<(SparseOperator, SparseOperator)> {
    let has = |c| space.labels().iter().any(|x: &BasisLabel| x.chirality == c);
    if space.family() != Family::Spinor || !has(Chirality::Plus) || !has(Chirality::Minus) {
        return Err(Error::UnsupportedFamily(space.family().name()));
    }
    let w = |x: &BasisLabel| C64::new(x.l() + 1.5, 0.0);
    let d = SparseOperator::from_map(space.clone(), Displacement::IDENTITY.flipping(), w);
    let abs = SparseOperator::diagonal(space.clone(), w);
    Ok((d, abs))
}

/// δ(a) = [|D|, a]: each component scaled by its Δl.
pub fn delta_commutator(a: &SparseOperator) -> SparseOperator {
    a.map_amplitudes(|d, z| z * (d.d2l as f64 / 2.0))
}

/// Riemann ζ(s) for real s > 1 by direct summation, with a rigorous error
/// bound from the integral test: the tail after N lies between
/// (N+1)^{1−s}/(s−1) and N^{1−s}/(s−1); the midpoint is returned.
pub fn riemann_zeta(s: f64, terms: u64) -> Result<(f64, f64)> {
    if s <= 1.0 {
        return Err(Error::ZetaDomain(s));
    }
    let mut acc = Compensated::default();
    for n in (1..=terms).rev() {
        acc.add((n as f64).powf(-s));
    }
    let n = terms as f64;
    let hi = n.powf(1.0 - s) / (s - 1.0);
    let lo = (n + 1.0).powf(1.0 - s) / (s - 1.0);
    acc.add(0.5 * (hi + lo));
    Ok((acc.value(), 0.5 * (hi - lo)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaTrace {
    pub re: f64,
    pub im: f64,
    /// Bound on the modulus of the omitted tail.
    pub tail_bound: f64,
}

/// Tr|D|^{−s} truncated at l ≤ L, using the multiplicities counted from the
/// basis, plus the integral bound for the tail. Requires Re s > 4.
pub fn zeta_trace(s: Complex64, cutoff: Half) -> Result<ZetaTrace> {
    if s.re <= 4.0 {
        return Err(Error::ZetaDomain(s.re));
    }
    if cutoff.is_integer() || cutoff.doubled() < 1 {
        return Err(Error::InvalidCutoff { family: "spinor", cutoff });
    }
    let (mut re, mut im) = (Compensated::default(), Compensated::default());
    let top = (cutoff.doubled() + 3) / 2;
    for n in (2..=top).rev() {
        let mult = 2 * dim_spinor_level(Half::from_doubled(2 * n - 3))?;
        let z = (mult as f64) * Complex64::new(n as f64, 0.0).powc(-s);
        re.add(z.re);
        im.add(z.im);
    }
    let tail_bound = 4.0 / 3.0 * (top as f64).powf(4.0 - s.re) / (s.re - 4.0);
    Ok(ZetaTrace { re: re.value(), im: im.value(), tail_bound })
}

/// (4/3)(ζ(s−3) − ζ(s−1)) from the direct-summation oracle, with its bound.
pub fn zeta_trace_closed_form(s: f64, terms: u64) -> Result<(f64, f64)> {
    let (a, ea) = riemann_zeta(s - 3.0, terms)?;
    let (b, eb) = riemann_zeta(s - 1.0, terms)?;
    Ok((4.0 / 3.0 * (a - b), 4.0 / 3.0 * (ea + eb)))
}

pub type WeightFn = Arc<dyn Fn(&BasisLabel) -> f64 + Send + Sync>;

/// A diagonal weight on spinor labels.
#[derive(Clone)]
pub struct DiagonalWeight {
    pub name: String,
    eval: WeightFn,
}

impl DiagonalWeight {
    pub fn new(name: impl Into<String>, f: impl Fn(&BasisLabel) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), eval: Arc::new(f) }
    }

    pub fn eval(&self, x: &BasisLabel) -> f64 {
        (self.eval)(x)
    }

    pub fn one() -> Self {
        Self::new("1", |_| 1.0)
    }

    /// The chirality sign, a γ-odd weight.
    pub fn grading() -> Self {
        Self::new("gamma", |x| x.chirality.sign())
    }

    /// q^{j+½}, the diagonal of L_q, on one chirality sheet: the series
    /// ζ_{L_q} runs over (l, j, m₁, m₂) once, not over both chiralities.
    pub fn lq(ctx: &QContext) -> Self {
        let c = *ctx;
        Self::new("L_q", move |x| if x.chirality == Chirality::Plus { c.pow(x.j() + 0.5) } else { 0.0 })
    }

    /// q^{j+½} on both chiralities, i.e. the trace of L_q|D|^{−s} over ℋ.
    pub fn lq_full(ctx: &QContext) -> Self {
        let c = *ctx;
        Self::new("L_q on H", move |x| c.pow(x.j() + 0.5))
    }

    /// ⟨ξ|a|ξ⟩ for a word a = w₁⋯wₙ in the spinor representation.
    pub fn word(word: &[Gen], ctx: &QContext) -> Result<Self> {
        let shifts: Vec<WeightedShift> =
            word.iter().map(|&g| sphere_shift(g, Family::Spinor, ctx)).collect::<Result<_>>()?;
        let name = if word.is_empty() { "1".to_owned() } else { word.iter().map(|g| g.name()).collect::<Vec<_>>().join(" ") };
        Ok(Self::new(name, move |x| {
            let refs: Vec<&WeightedShift> = shifts.iter().collect();
            word_diagonal(&refs, x)
        }))
    }

    /// Diagonal of P(ββ*)ᵏAⁿQ: q^{n(l−j+m₂−ε) + 2k(j+m₁)}.
    pub fn hat_mixed(k: u32, n: u32, ctx: &QContext) -> Self {
        let c = *ctx;
        Self::new(format!("P(bb*)^{k}A^{n}Q"), move |x| {
            let e = n as f64 * (x.l() - x.j() + x.m2() - epsilon(x)) + 2.0 * k as f64 * (x.j() + x.m1());
            c.pow(e)
        })
    }
}

/// g(n): the weight summed over every label with l = n − 3/2, both
/// chiralities, in canonical order.
pub fn level_sum(w: &DiagonalWeight, n: u32) -> f64 {
    assert!(n >= 2, "levels start at n = 2");
    let two_l = 2 * n as i32 - 3;
    let labels: Vec<BasisLabel> =
        [Chirality::Plus, Chirality::Minus].iter().flat_map(|&c| spinor_level(two_l, c)).collect();
    let vals: Vec<f64> = labels.par_iter().map(|x| w.eval(x)).collect();
    compensated_sum(vals)
}

/// Relative held-out residual the scan must reach before a fit is accepted.
pub const FIT_THRESHOLD: f64 = 1e-13;
/// Largest starting level tried.
pub const FIT_MAX_N: u32 = 240;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueFit {
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
    pub fit_levels: [u32; 4],
    pub held_out: [u32; 2],
    /// Worst relative |g(h) − cubic(h)| over the held-out levels h.
    pub certificate: f64,
    /// |g(h)| at that level, the scale the certificate is relative to.
    pub scale: f64,
}

impl ResidueFit {
    pub fn relative_certificate(&self) -> f64 {
        if self.scale == 0.0 {
            self.certificate
        } else {
            self.certificate / self.scale
        }
    }

    /// Residue of ζ_w at s = 4.
    pub fn residue4(&self) -> f64 {
        self.a3
    }

    /// Residue of ζ_w at s = 3.
    pub fn residue3(&self) -> f64 {
        self.a2
    }
}

/// Monomial coefficients [a₀, a₁, a₂, a₃] of the cubic through
/// (N, g₀), …, (N+3, g₃), via Newton forward differences.
fn cubic_through(n0: u32, g: [f64; 4]) -> [f64; 4] {
    let d1 = [g[1] - g[0], g[2] - g[1], g[3] - g[2]];
    let d2 = [d1[1] - d1[0], d1[2] - d1[1]];
    let d3 = d2[1] - d2[0];
    // g(n) = g₀ + d1·t + d2·t(t−1)/2 + d3·t(t−1)(t−2)/6 with t = n − N.
    let newton = [g[0], d1[0], d2[0] / 2.0, d3 / 6.0];
    // Basis polynomials in t: 1, t, t(t−1), t(t−1)(t−2), in powers of t.
    let basis: [[f64; 4]; 4] = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, -1.0, 1.0, 0.0], [0.0, 2.0, -3.0, 1.0]];
    let mut in_t = [0.0; 4];
    for (c, b) in newton.iter().zip(&basis) {
        for k in 0..4 {
            in_t[k] += c * b[k];
        }
    }
    // Substitute t = n − N.
    let s = n0 as f64;
    let binom = [[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0], [1.0, 3.0, 3.0, 1.0]];
    let mut out = [0.0; 4];
    for (p, c) in in_t.iter().enumerate() {
        // (n − s)^p = Σ_k binom(p,k) n^k (−s)^{p−k}
        for k in 0..=p {
            out[k] += c * binom[p][k] * (-s).powi((p - k) as i32);
        }
    }
    out
}

fn eval_cubic(a: &[f64; 4], n: f64) -> f64 {
    ((a[3] * n + a[2]) * n + a[1]) * n + a[0]
}

/// Fits the cubic asymptotics of g, scanning the starting level upward until
/// both held-out levels N+4 and N+5 agree to [`FIT_THRESHOLD`] relative.
pub fn residue_fit(w: &DiagonalWeight) -> Result<ResidueFit> {
    residue_fit_with(w, FIT_THRESHOLD)
}

pub fn residue_fit_with(w: &DiagonalWeight, threshold: f64) -> Result<ResidueFit> {
    let mut cache: HashMap<u32, f64> = HashMap::new();
    let mut g = |n: u32| *cache.entry(n).or_insert_with(|| level_sum(w, n));
    let mut n0 = 2u32;
    let mut last = f64::INFINITY;
    while n0 <= FIT_MAX_N {
        let vals = [g(n0), g(n0 + 1), g(n0 + 2), g(n0 + 3)];
        let a = cubic_through(n0, vals);
        let (mut cert, mut scale, mut rel) = (0.0f64, 0.0f64, 0.0f64);
        for h in [n0 + 4, n0 + 5] {
            let held = g(h);
            let c = (held - eval_cubic(&a, h as f64)).abs();
            let r = if held == 0.0 { c } else { c / held.abs() };
            if r >= rel {
                (cert, scale, rel) = (c, held.abs(), r);
            }
        }
        if rel <= threshold {
            return Ok(ResidueFit {
                a3: a[3],
                a2: a[2],
                a1: a[1],
                a0: a[0],
                fit_levels: [n0, n0 + 1, n0 + 2, n0 + 3],
                held_out: [n0 + 4, n0 + 5],
                certificate: cert,
                scale,
            });
        }
        last = rel;
        n0 += (n0 / 8).max(1);
    }
    Err(Error::Certificate { certificate: last, threshold, max_n: FIT_MAX_N })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TopResidue {
    pub word: String,
    pub fit: ResidueFit,
    /// (2/3π)∫σ(a)dθ with σ(x₀) = σ(x₁) = 0, σ(x₂) = u.
    pub expected: f64,
}

/// (2/3π)∫₀^{2π} σ(a) dθ for a word a. Only words made of x₂, x₂* survive
/// σ, giving u^p ū^r whose integral is 2π iff p = r.
pub fn classical_integral(word: &[Gen]) -> f64 {
    let mut balance = 0i32;
    for g in word {
        match g {
            Gen::X2 => balance += 1,
            Gen::X2Star => balance -= 1,
            _ => return 0.0,
        }
    }
    if balance == 0 {
        2.0 / (3.0 * PI) * 2.0 * PI
    } else {
        0.0
    }
}

pub fn top_residue(word: &[Gen], ctx: &QContext) -> Result<TopResidue> {
    let w = DiagonalWeight::word(word, ctx)?;
    let fit = residue_fit(&w)?;
    Ok(TopResidue { word: w.name.clone(), fit, expected: classical_integral(word) })
}

/// Expected (a₂, a₁) for P(ββ*)ᵏAⁿQ with (k, n) ≠ (0, 0).
pub fn hat_mixed_expected(k: u32, n: u32, ctx: &QContext) -> (f64, f64) {
    let p = |z: f64| ctx.pow(z);
    let (k, n) = (k as f64, n as f64);
    if k > 0.0 && n > 0.0 {
        (0.0, 4.0 / ((1.0 - p(2.0 * k)) * (1.0 - p(2.0 * n))))
    } else if n == 0.0 {
        let pre = 4.0 / (1.0 - p(2.0 * k));
        (pre / 2.0, -pre * (0.5 + p(4.0 * k) / (1.0 - p(4.0 * k))))
    } else {
        let pre = 4.0 / (1.0 - p(2.0 * n));
        (pre, -pre * (1.0 + 2.0 * p(2.0 * n) / (1.0 - p(2.0 * n))))
    }
}

/// The same coefficients as printed; they differ from the level-sum
/// asymptotics in a₁ whenever k ≠ 0.
pub fn hat_mixed_printed(k: u32, n: u32, ctx: &QContext) -> (f64, f64) {
    if k > 0 && n > 0 {
        (0.0, 4.0)
    } else if n == 0 {
        let pre = 4.0 / (1.0 - ctx.pow(2.0 * k as f64));
        (pre / 2.0, -pre * (0.5 + 1.0 / (1.0 - ctx.pow(4.0 * k as f64))))
    } else {
        hat_mixed_expected(0, n, ctx)
    }
}

/// (4/3)(n³ − n), the |D| multiplicity at eigenvalue n.
pub fn multiplicity(n: u32) -> u64 {
    let n = n as u64;
    4 * (n * n * n - n) / 3
}

/// Multiplicities of |D| counted from the basis of a spinor truncation.
pub fn counted_multiplicities(space: &TruncatedSpace) -> Vec<(u32, u64)> {
    let mut counts: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
    for x in space.labels() {
        *counts.entry(((x.two_l + 3) / 2) as u32).or_default() += 1;
    }
    counts.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64) -> QContext {
        QContext::new(q).unwrap()
    }

    #[test]
    fn dirac_structure() {
        let sp = Arc::new(TruncatedSpace::spinor(Half::from_doubled(5)).unwrap());
        let (d, abs) = dirac(&sp).unwrap();
        assert!(d.adjoint().approx_eq(&d, 0.0));
        assert!((&d * &d).approx_eq(&(&abs * &abs), 0.0));
        let (g, _) = crate::fredholm::grading_and_f(&sp).unwrap();
        assert!((&(&d * &g) + &(&g * &d)).is_zero());
        assert_eq!(abs.diag()[0].re, 2.0);
    }

    #[test]
    fn delta_scales_by_level_shift() {
        let c = ctx(0.5);
        let sp = Arc::new(TruncatedSpace::spinor(Half::from_doubled(7)).unwrap());
        let x2 = crate::sphere::sphere_generator(Gen::X2, &sp, &c).unwrap();
        let dx = delta_commutator(&x2);
        let (_, abs) = dirac(&sp).unwrap();
        let direct = abs.commutator(&x2).unwrap();
        let cols = sp.interior(1);
        assert!((&dx - &direct).max_column_norm(&cols) < 1e-12);
        let diag = SparseOperator::diagonal(sp.clone(), |x| C64::new(x.j(), 0.0));
        assert!(delta_commutator(&diag).is_zero());
    }

    #[test]
    fn zeta_oracle_known_values() {
        let (z2, e2) = riemann_zeta(2.0, 100_000).unwrap();
        assert!((z2 - PI * PI / 6.0).abs() <= e2 + 1e-15);
        let (z4, _) = riemann_zeta(4.0, 10_000).unwrap();
        assert!((z4 - PI.powi(4) / 90.0).abs() < 1e-13);
        assert!(riemann_zeta(1.0, 10).is_err());
    }

    #[test]
    fn zeta_trace_matches_closed_form() {
        for s in [5.0, 6.0, 7.0] {
            let t = zeta_trace(Complex64::new(s, 0.0), Half::from_doubled(2 * 20000 - 3)).unwrap();
            let (cf, err) = zeta_trace_closed_form(s, 200_000).unwrap();
            assert!((t.re - cf).abs() <= t.tail_bound + err + 1e-12, "{s}: {} vs {cf}", t.re);
        }
        let t5 = zeta_trace_closed_form(5.0, 400_000).unwrap().0;
        let exact = 4.0 / 3.0 * (PI * PI / 6.0 - PI.powi(4) / 90.0);
        assert!((t5 - exact).abs() < 1e-9);
        assert!(zeta_trace(Complex64::new(4.0, 1.0), Half::from_doubled(5)).is_err());
    }

    #[test]
    fn multiplicities_from_basis() {
        let sp = TruncatedSpace::spinor(Half::from_doubled(9)).unwrap();
        for (n, m) in counted_multiplicities(&sp) {
            assert_eq!(m, multiplicity(n));
        }
        assert_eq!(multiplicity(2), 8);
    }

    #[test]
    fn level_sums() {
        let c = ctx(0.5);
        assert_eq!(level_sum(&DiagonalWeight::one(), 2), 8.0);
        assert_eq!(level_sum(&DiagonalWeight::grading(), 5), 0.0);
        for n in 2..9u32 {
            let expected: f64 = (1..n).map(|k| 4.0 * (k * (n - k)) as f64 * c.pow(k as f64)).sum();
            assert!((level_sum(&DiagonalWeight::lq(&c), n) - expected).abs() < 1e-12);
            assert!((level_sum(&DiagonalWeight::lq_full(&c), n) - 2.0 * expected).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_through_recovers_polynomials() {
        let p = [0.5, -2.0, 0.25, 4.0 / 3.0];
        let g = |n: f64| eval_cubic(&p, n);
        let a = cubic_through(7, [g(7.0), g(8.0), g(9.0), g(10.0)]);
        for k in 0..4 {
            assert!((a[k] - p[k]).abs() < 1e-9, "{k}");
        }
    }

    #[test]
    fn fit_of_constant_weight_is_exact() {
        let f = residue_fit(&DiagonalWeight::one()).unwrap();
        assert!((f.a3 - 4.0 / 3.0).abs() < 1e-12);
        assert!(f.a2.abs() < 1e-12 && f.a0.abs() < 1e-12);
        assert!((f.a1 + 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn classical_integral_rules() {
        assert_eq!(classical_integral(&[]), 4.0 / 3.0);
        assert_eq!(classical_integral(&[Gen::X0, Gen::X0]), 0.0);
        assert_eq!(classical_integral(&[Gen::X2, Gen::X2Star]), 4.0 / 3.0);
        assert_eq!(classical_integral(&[Gen::X2, Gen::X2]), 0.0);
    }
}
