//! Generators as symbolic weighted shifts.
//!
//! A [`WeightedShift`] is a list of (displacement, coefficient rule) pairs.
//! It can be materialised on any truncation, or evaluated label by label,
//! which is how level sums far beyond a stored cutoff are computed.

use std::sync::Arc;

use crate::basis::{BasisLabel, Displacement, Family, TruncatedSpace};
use crate::operator::{OperatorBuilder, SparseOperator, C64};

pub type Coefficient = Arc<dyn Fn(&BasisLabel) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct ShiftTerm {
    pub disp: Displacement,
    /// Evaluated at the source label, only when the target is admissible.
    pub coef: Coefficient,
}

impl ShiftTerm {
    pub fn new(disp: Displacement, coef: impl Fn(&BasisLabel) -> f64 + Send + Sync + 'static) -> Self {
        Self { disp, coef: Arc::new(coef) }
    }
}

#[derive(Clone)]
pub struct WeightedShift {
    family: Family,
    terms: Vec<ShiftTerm>,
    adjoint: bool,
}

impl WeightedShift {
    pub fn new(family: Family, terms: Vec<ShiftTerm>) -> Self {
        Self { family, terms, adjoint: false }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_adjoint(&self) -> bool {
        self.adjoint
    }

    pub fn adjoint(&self) -> Self {
        Self { family: self.family, terms: self.terms.clone(), adjoint: !self.adjoint }
    }

    /// Calls `visit(target, amplitude)` for every admissible image of `src`.
    pub fn for_each_image(&self, src: &BasisLabel, mut visit: impl FnMut(BasisLabel, f64)) {
        for t in &self.terms {
            if !self.adjoint {
                let y = t.disp.apply(src);
                if y.is_admissible(self.family) {
                    visit(y, (t.coef)(src));
                }
            } else {
                // ⟨η|T*|ξ⟩ = ⟨ξ|T|η⟩ with η the preimage of ξ.
                let y = t.disp.inverse().apply(src);
                if y.is_admissible(self.family) {
                    visit(y, (t.coef)(&y));
                }
            }
        }
    }

    /// ⟨tgt|T|src⟩, evaluating only the terms that map `src` to `tgt`.
    pub fn amplitude_to(&self, src: &BasisLabel, tgt: &BasisLabel) -> f64 {
        if !tgt.is_admissible(self.family) {
            return 0.0;
        }
        let mut a = 0.0;
        for t in &self.terms {
            if !self.adjoint {
                if t.disp.apply(src) == *tgt {
                    a += (t.coef)(src);
                }
            } else if t.disp.apply(tgt) == *src {
                a += (t.coef)(tgt);
            }
        }
        a
    }

    pub fn materialize(&self, space: &Arc<TruncatedSpace>) -> SparseOperator {
        let mut b = OperatorBuilder::new(space.clone());
        for (i, x) in space.labels().iter().enumerate() {
            for t in &self.terms {
                let d = if self.adjoint { t.disp.inverse() } else { t.disp };
                let y = d.apply(x);
                if let Some(k) = space.index_of(&y) {
                    let a = if self.adjoint { (t.coef)(&y) } else { (t.coef)(x) };
                    if a != 0.0 {
                        b.push_indexed(i, k, d, C64::new(a, 0.0));
                    }
                }
            }
        }
        b.build()
    }
}

/// ⟨ξ| w₁w₂⋯wₙ |ξ⟩ by enumerating label paths (wₙ acts first). Paths only
/// visit admissible labels, so no truncation is involved.
pub fn word_diagonal(word: &[&WeightedShift], x: &BasisLabel) -> f64 {
    fn walk(word: &[&WeightedShift], at: BasisLabel, acc: f64, home: &BasisLabel, out: &mut f64) {
        match word.split_last() {
            None => {
                if at == *home {
                    *out += acc;
                }
            }
            // The final factor only needs the terms that land back home.
            Some((last, [])) => *out += acc * last.amplitude_to(&at, home),
            Some((last, rest)) => last.for_each_image(&at, |y, a| {
                if a != 0.0 {
                    walk(rest, y, acc * a, home, out);
                }
            }),
        }
    }
    let mut out = 0.0;
    walk(word, *x, 1.0, x, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Chirality;
    use crate::half::Half;

    fn toy() -> WeightedShift {
        WeightedShift::new(
            Family::Spinor,
            vec![
                ShiftTerm::new(Displacement::shift(2, 0, 2, 0), |x| 1.0 + 0.1 * x.two_m2 as f64),
                ShiftTerm::new(Displacement::shift(0, 2, 0, 0), |x| 0.5 - 0.05 * x.two_m1 as f64),
            ],
        )
    }

    #[test]
    fn adjoint_materialises_as_matrix_adjoint() {
        let sp = Arc::new(TruncatedSpace::spinor(Half::from_doubled(7)).unwrap());
        let w = toy();
        let a = w.materialize(&sp);
        assert!(w.adjoint().materialize(&sp).approx_eq(&a.adjoint(), 0.0));
    }

    #[test]
    fn word_diagonal_matches_materialised_product_inside() {
        let sp = Arc::new(TruncatedSpace::spinor(Half::from_doubled(9)).unwrap());
        let w = toy();
        let ws = w.adjoint();
        let prod = &ws.materialize(&sp) * &w.materialize(&sp);
        let d = prod.diag();
        for (i, x) in sp.labels().iter().enumerate() {
            if sp.margin(i) >= 1 {
                assert!((word_diagonal(&[&ws, &w], x) - d[i].re).abs() < 1e-14, "{x}");
            }
        }
        let x = BasisLabel::doubled(1, 1, 1, 1, Chirality::Plus);
        assert_eq!(word_diagonal(&[&w], &x), 0.0);
    }
}
