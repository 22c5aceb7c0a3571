//! Sparse operators stored as weighted label translations.
//!
//! Each component is a partial injection of basis labels (a [`Displacement`])
//! with one amplitude per source. Singular values of a component are just
//! the moduli of its amplitudes, which is what makes cheap trace-norm and
//! operator-norm bounds available.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{BasisLabel, Displacement, TruncatedSpace};
use crate::error::{Error, Result};
use crate::sum::compensated_sum;

pub type C64 = Complex64;

const NONE: u32 = u32::MAX;

/// One label translation with its weights, indexed by source position.
#[derive(Clone, Debug)]
pub struct Component {
    disp: Displacement,
    target: Vec<u32>,
    amp: Vec<C64>,
}

impl Component {
    fn empty(disp: Displacement, dim: usize) -> Self {
        Self { disp, target: vec![NONE; dim], amp: vec![C64::new(0.0, 0.0); dim] }
    }

    pub fn displacement(&self) -> &Displacement {
        &self.disp
    }

    /// (source, target, amplitude) for every stored entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.target
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != NONE)
            .map(move |(s, &t)| (s, t as usize, self.amp[s]))
    }

    pub fn at(&self, src: usize) -> Option<(usize, C64)> {
        let t = self.target[src];
        (t != NONE).then(|| (t as usize, self.amp[src]))
    }

    fn add_at(&mut self, src: usize, tgt: usize, a: C64) {
        debug_assert!(self.target[src] == NONE || self.target[src] as usize == tgt);
        self.target[src] = tgt as u32;
        self.amp[src] += a;
    }

    fn prune(&mut self) -> bool {
        let mut any = false;
        for s in 0..self.target.len() {
            if self.target[s] != NONE {
                if self.amp[s] == C64::new(0.0, 0.0) {
                    self.target[s] = NONE;
                } else {
                    any = true;
                }
            }
        }
        any
    }
}

/// Accumulates entries by displacement, then freezes into an operator.
pub struct OperatorBuilder {
    space: Arc<TruncatedSpace>,
    parts: BTreeMap<Displacement, Component>,
}

impl OperatorBuilder {
    pub fn new(space: Arc<TruncatedSpace>) -> Self {
        Self { space, parts: BTreeMap::new() }
    }

    /// Adds `a` at the image of `src` under `disp`; silently drops targets
    /// that fall outside the truncation.
    pub fn push(&mut self, src: usize, disp: Displacement, a: C64) {
        let tgt = disp.apply(self.space.label(src));
        if let Some(t) = self.space.index_of(&tgt) {
            self.push_indexed(src, t, disp, a);
        }
    }

    pub fn push_indexed(&mut self, src: usize, tgt: usize, disp: Displacement, a: C64) {
        let dim = self.space.dim();
        self.parts.entry(disp).or_insert_with(|| Component::empty(disp, dim)).add_at(src, tgt, a);
    }

    pub fn build(self) -> SparseOperator {
        let components = self.parts.into_values().filter_map(|mut c| c.prune().then_some(c)).collect();
        SparseOperator { space: self.space, components }
    }
}

#[derive(Clone, Debug)]
pub struct SparseOperator {
    space: Arc<TruncatedSpace>,
    components: Vec<Component>,
}

impl SparseOperator {
    pub fn zero(space: Arc<TruncatedSpace>) -> Self {
        Self { space, components: Vec::new() }
    }

    pub fn identity(space: Arc<TruncatedSpace>) -> Self {
        Self::diagonal(space, |_| C64::new(1.0, 0.0))
    }

    pub fn diagonal(space: Arc<TruncatedSpace>, f: impl Fn(&BasisLabel) -> C64) -> Self {
        Self::from_map(space, Displacement::IDENTITY, f)
    }

    /// A single component: `ξ ↦ f(ξ)·disp(ξ)` wherever `disp(ξ)` is in the space.
    pub fn from_map(space: Arc<TruncatedSpace>, disp: Displacement, f: impl Fn(&BasisLabel) -> C64) -> Self {
        let mut b = OperatorBuilder::new(space.clone());
        for (i, x) in space.labels().iter().enumerate() {
            let tgt = disp.apply(x);
            if let Some(t) = space.index_of(&tgt) {
                b.push_indexed(i, t, disp, f(x));
            }
        }
        b.build()
    }

    pub fn space(&self) -> &Arc<TruncatedSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, disp: &Displacement) -> Option<&Component> {
        self.components.iter().find(|c| &c.disp == disp)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.components.iter().map(|c| c.entries().count()).sum()
    }

    /// max |Δl| over components.
    pub fn shift_radius(&self) -> f64 {
        self.components.iter().map(|c| c.disp.d2l.abs()).max().unwrap_or(0) as f64 / 2.0
    }

    /// Boundary depth consumed by one application, in the space's margin unit.
    pub fn step_radius(&self) -> u32 {
        self.components.iter().map(|c| self.space.step_cost(&c.disp)).max().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.components.iter().flat_map(|c| c.entries())
    }

    /// ⟨tgt| T |src⟩.
    pub fn get(&self, tgt: usize, src: usize) -> C64 {
        self.components
            .iter()
            .filter_map(|c| c.at(src))
            .filter(|(t, _)| *t == tgt)
            .map(|(_, a)| a)
            .sum()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for c in &self.components {
            for (s, t, a) in c.entries() {
                out[t] += a * v[s];
            }
        }
        out
    }

    /// T applied to the basis vector at `src`, as (target, amplitude) pairs.
    pub fn column(&self, src: usize) -> Vec<(usize, C64)> {
        let mut col: Vec<(usize, C64)> = self.components.iter().filter_map(|c| c.at(src)).collect();
        col.sort_by_key(|p| p.0);
        col
    }

    pub fn column_norm(&self, src: usize) -> f64 {
        compensated_sum(self.components.iter().filter_map(|c| c.at(src)).map(|(_, a)| a.norm_sqr())).sqrt()
    }

    /// Largest Euclidean column norm over `cols`.
    pub fn max_column_norm(&self, cols: &[usize]) -> f64 {
        cols.iter().map(|&s| self.column_norm(s)).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, a)| a.norm()).fold(0.0, f64::max)
    }

    /// The Δ = identity component as a dense diagonal.
    pub fn diag(&self) -> Vec<C64> {
        let mut d = vec![C64::new(0.0, 0.0); self.dim()];
        if let Some(c) = self.component(&Displacement::IDENTITY) {
            for (s, _, a) in c.entries() {
                d[s] = a;
            }
        }
        d
    }

    pub fn scale(&self, k: C64) -> Self {
        self.map_amplitudes(|_, a| a * k)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    /// Rewrites amplitudes component by component; zeros are dropped.
    pub fn map_amplitudes(&self, f: impl Fn(&Displacement, C64) -> C64) -> Self {
        let mut out = self.clone();
        for c in &mut out.components {
            let d = c.disp;
            for s in 0..c.amp.len() {
                if c.target[s] != NONE {
                    c.amp[s] = f(&d, c.amp[s]);
                }
            }
        }
        out.components.retain_mut(|c| c.prune());
        out
    }

    pub fn conj(&self) -> Self {
        self.map_amplitudes(|_, a| a.conj())
    }

    pub fn adjoint(&self) -> Self {
        let mut b = OperatorBuilder::new(self.space.clone());
        for c in &self.components {
            let inv = c.disp.inverse();
            for (s, t, a) in c.entries() {
                b.push_indexed(t, s, inv, a.conj());
            }
        }
        b.build()
    }

    /// Inverse of an operator that is a single bijective translation.
    pub fn monomial_inverse(&self) -> Result<Self> {
        let [c] = self.components.as_slice() else {
            return Err(Error::NotInvertible("more than one component"));
        };
        if c.entries().count() != self.dim() {
            return Err(Error::NotInvertible("component is not onto"));
        }
        let inv = c.disp.inverse();
        let mut b = OperatorBuilder::new(self.space.clone());
        for (s, t, a) in c.entries() {
            b.push_indexed(t, s, inv, C64::new(1.0, 0.0) / a);
        }
        Ok(b.build())
    }

    pub fn compose(&self, rhs: &SparseOperator) -> Result<Self> {
        self.check_space(rhs)?;
        let mut b = OperatorBuilder::new(self.space.clone());
        for cb in &rhs.components {
            for ca in &self.components {
                let d = cb.disp.then(&ca.disp);
                for (s, t, x) in cb.entries() {
                    if let Some((u, y)) = ca.at(t) {
                        b.push_indexed(s, u, d, y * x);
                    }
                }
            }
        }
        Ok(b.build())
    }

    pub fn combine(&self, rhs: &SparseOperator, ka: C64, kb: C64) -> Result<Self> {
        self.check_space(rhs)?;
        let mut b = OperatorBuilder::new(self.space.clone());
        for (op, k) in [(self, ka), (rhs, kb)] {
            for c in &op.components {
                for (s, t, a) in c.entries() {
                    b.push_indexed(s, t, c.disp, k * a);
                }
            }
        }
        Ok(b.build())
    }

    pub fn commutator(&self, rhs: &SparseOperator) -> Result<Self> {
        let ab = self.compose(rhs)?;
        let ba = rhs.compose(self)?;
        ab.combine(&ba, C64::new(1.0, 0.0), C64::new(-1.0, 0.0))
    }

    /// Same components and entries, amplitudes equal within `tol`.
    pub fn approx_eq(&self, other: &SparseOperator, tol: f64) -> bool {
        self.space == other.space
            && self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(a, b)| {
                a.disp == b.disp
                    && a.target == b.target
                    && a.amp.iter().zip(&b.amp).all(|(x, y)| (x - y).norm() <= tol)
            })
    }

    fn check_space(&self, rhs: &SparseOperator) -> Result<()> {
        if Arc::ptr_eq(&self.space, &rhs.space) || *self.space == *rhs.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl Mul for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: &SparseOperator) -> SparseOperator {
        self.compose(rhs).expect("operators on different spaces")
    }
}

impl Add for &SparseOperator {
    type Output = SparseOperator;
    fn add(self, rhs: &SparseOperator) -> SparseOperator {
        self.combine(rhs, C64::new(1.0, 0.0), C64::new(1.0, 0.0)).expect("operators on different spaces")
    }
}

impl Sub for &SparseOperator {
    type Output = SparseOperator;
    fn sub(self, rhs: &SparseOperator) -> SparseOperator {
        self.combine(rhs, C64::new(1.0, 0.0), C64::new(-1.0, 0.0)).expect("operators on different spaces")
    }
}

impl Neg for &SparseOperator {
    type Output = SparseOperator;
    fn neg(self) -> SparseOperator {
        self.scale_real(-1.0)
    }
}

/// ξ ↦ M·conj(ξ) in the canonical basis.
#[derive(Clone, Debug)]
pub struct AntilinearOperator {
    pub matrix: SparseOperator,
}

impl AntilinearOperator {
    pub fn new(matrix: SparseOperator) -> Self {
        Self { matrix }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let cv: Vec<C64> = v.iter().map(|z| z.conj()).collect();
        self.matrix.apply(&cv)
    }

    /// `self ∘ other` is linear with matrix M₁·conj(M₂).
    pub fn then_antilinear(&self, other: &AntilinearOperator) -> SparseOperator {
        &self.matrix * &other.matrix.conj()
    }

    /// `self ∘ b` for linear `b`.
    pub fn after_linear(&self, b: &SparseOperator) -> AntilinearOperator {
        AntilinearOperator::new(&self.matrix * &b.conj())
    }

    /// `b ∘ self` for linear `b`.
    pub fn before_linear(&self, b: &SparseOperator) -> AntilinearOperator {
        AntilinearOperator::new(b * &self.matrix)
    }

    pub fn inverse(&self) -> Result<AntilinearOperator> {
        Ok(AntilinearOperator::new(self.matrix.monomial_inverse()?.conj()))
    }

    /// `self ∘ b ∘ self⁻¹` = M·conj(b)·M⁻¹.
    pub fn conjugate(&self, b: &SparseOperator) -> Result<SparseOperator> {
        let minv = self.matrix.monomial_inverse()?;
        Ok(&(&self.matrix * &b.conj()) * &minv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Chirality;
    use crate::half::Half;

    fn space() -> Arc<TruncatedSpace> {
        Arc::new(TruncatedSpace::spinor(Half::from_doubled(5)).unwrap())
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    // A deterministic, non-symmetric test operator with three components.
    fn sample(sp: &Arc<TruncatedSpace>) -> SparseOperator {
        let up = SparseOperator::from_map(sp.clone(), Displacement::shift(2, 0, 2, 0), |x| {
            c(1.0 + x.two_m1 as f64 * 0.1, 0.3 * x.two_j as f64)
        });
        let flip = SparseOperator::from_map(sp.clone(), Displacement::IDENTITY.flipping(), |x| c(0.5, -(x.two_l as f64)));
        let refl = SparseOperator::from_map(sp.clone(), Displacement::reflection(), |x| c(x.two_m2 as f64, 1.0));
        &(&up + &flip) + &refl
    }

    fn dense(op: &SparseOperator) -> Vec<Vec<C64>> {
        let n = op.dim();
        let mut m = vec![vec![c(0.0, 0.0); n]; n];
        for (s, t, a) in op.entries() {
            m[t][s] += a;
        }
        m
    }

    #[test]
    fn product_matches_dense_product() {
        let sp = space();
        let a = sample(&sp);
        let b = sample(&sp).adjoint();
        let (da, db, dab) = (dense(&a), dense(&b), dense(&(&a * &b)));
        let n = sp.dim();
        for i in 0..n {
            for k in 0..n {
                let want: C64 = (0..n).map(|j| da[i][j] * db[j][k]).sum();
                assert!((want - dab[i][k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let sp = space();
        let a = sample(&sp);
        let (d, da) = (dense(&a), dense(&a.adjoint()));
        for i in 0..sp.dim() {
            for k in 0..sp.dim() {
                assert_eq!(da[i][k], d[k][i].conj());
            }
        }
        assert!(a.adjoint().adjoint().approx_eq(&a, 0.0));
    }

    #[test]
    fn components_are_injective() {
        let sp = space();
        let a = &sample(&sp) * &sample(&sp);
        for comp in a.components() {
            let mut seen = std::collections::HashSet::new();
            for (_, t, _) in comp.entries() {
                assert!(seen.insert(t));
            }
        }
    }

    #[test]
    fn zero_and_identity() {
        let sp = space();
        let a = sample(&sp);
        let z = &a - &a;
        assert!(z.is_zero());
        let id = SparseOperator::identity(sp.clone());
        assert!((&id * &a).approx_eq(&a, 1e-15));
        assert!((&a * &id).approx_eq(&a, 1e-15));
    }

    #[test]
    fn monomial_inverse_round_trip() {
        let sp = space();
        let m = SparseOperator::from_map(sp.clone(), Displacement::reflection().flipping(), |x| {
            c(1.0 + x.two_m1 as f64 * 0.25, 0.5)
        });
        let inv = m.monomial_inverse().unwrap();
        assert!((&m * &inv).approx_eq(&SparseOperator::identity(sp.clone()), 1e-14));
        let up = SparseOperator::from_map(sp, Displacement::shift(2, 0, 0, 0), |_| c(1.0, 0.0));
        assert!(up.monomial_inverse().is_err());
    }

    #[test]
    fn antilinear_rules() {
        let sp = space();
        let j = AntilinearOperator::new(SparseOperator::from_map(sp.clone(), Displacement::reflection(), |x| {
            c(0.0, if x.chirality == Chirality::Plus { 1.0 } else { -1.0 })
        }));
        let b = sample(&sp);
        let v: Vec<C64> = (0..sp.dim()).map(|i| c((i as f64).sin(), (i as f64 * 0.7).cos())).collect();
        // J b J⁻¹ v computed step by step.
        let jinv = j.inverse().unwrap();
        let step = j.apply(&b.apply(&jinv.apply(&v)));
        let direct = j.conjugate(&b).unwrap().apply(&v);
        for (x, y) in step.iter().zip(&direct) {
            assert!((x - y).norm() < 1e-12);
        }
        let jj = j.then_antilinear(&j).apply(&v);
        let twice = j.apply(&j.apply(&v));
        for (x, y) in jj.iter().zip(&twice) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
