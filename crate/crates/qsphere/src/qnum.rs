//! q-analogue arithmetic.

use crate::error::{Error, Result};

/// Deformation parameter with the tolerances every check reads from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QContext {
    pub q: f64,
    pub tol_relation: f64,
    pub tol_series: f64,
}

impl QContext {
    pub fn new(q: f64) -> Result<Self> {
        Self::with_tolerances(q, 1e-9, 1e-10)
    }

    pub fn with_tolerances(q: f64, tol_relation: f64, tol_series: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidQ(q));
        }
        for t in [tol_relation, tol_series] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidTolerance(t));
            }
        }
        Ok(Self { q, tol_relation, tol_series })
    }

    /// q^z.
    #[inline]
    pub fn pow(&self, z: f64) -> f64 {
        self.q.powf(z)
    }

    /// [z].
    #[inline]
    pub fn num(&self, z: f64) -> f64 {
        q_number(z, self)
    }
}

/// [z] = (q^z − q^{−z})/(q − q^{−1}), evaluated as sinh(zh)/sinh(h) with
/// h = −ln q, which keeps full relative accuracy as q → 1.
pub fn q_number(z: f64, ctx: &QContext) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let h = -ctx.q.ln();
    let v = (z.abs() * h).sinh() / h.sinh();
    if z < 0.0 {
        -v
    } else {
        v
    }
}

/// Π [z_i], multiplying large and small factors alternately so that long
/// products of q-numbers stay inside the binary64 range.
pub fn q_number_product(zs: &[f64], ctx: &QContext) -> f64 {
    let mut vals: Vec<f64> = Vec::with_capacity(zs.len());
    for &z in zs {
        let v = q_number(z, ctx);
        if v == 0.0 {
            return 0.0;
        }
        vals.push(v);
    }
    vals.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let (mut lo, mut hi) = (0usize, vals.len());
    let mut acc = 1.0f64;
    while lo < hi {
        if acc.abs() >= 1.0 {
            acc *= vals[lo];
            lo += 1;
        } else {
            hi -= 1;
            acc *= vals[hi];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(q: f64) -> QContext {
        QContext::new(q).unwrap()
    }

    // Straight from the defining quotient, as an independent reference.
    fn quotient(z: f64, q: f64) -> f64 {
        (q.powf(z) - q.powf(-z)) / (q - 1.0 / q)
    }

    #[test]
    fn defining_values() {
        let c = ctx(0.5);
        assert_eq!(q_number(0.0, &c), 0.0);
        assert!((q_number(1.0, &c) - 1.0).abs() < 1e-15);
        assert!((q_number(2.0, &c) - 2.5).abs() < 1e-14);
        assert!((q_number(2.0, &c) - quotient(2.0, 0.5)).abs() < 1e-14);
    }

    #[test]
    fn products() {
        let c = ctx(0.5);
        assert_eq!(q_number_product(&[0.0, 5.0], &c), 0.0);
        assert!((q_number_product(&[1.0, 1.0, 1.0], &c) - 1.0).abs() < 1e-15);
        assert!((q_number_product(&[2.0, 3.0], &c) - 13.125).abs() < 1e-12);
        assert_eq!(q_number_product(&[], &c), 1.0);
    }

    #[test]
    fn balanced_product_avoids_intermediate_overflow() {
        let c = ctx(0.1);
        let mut zs = vec![150.0; 3];
        zs.extend(std::iter::repeat_n(0.5, 300));
        let naive: f64 = zs.iter().map(|&z| q_number(z, &c)).product();
        assert!(!naive.is_finite());
        let p = q_number_product(&zs, &c);
        let logp: f64 = zs.iter().map(|&z| q_number(z, &c).ln()).sum();
        assert!(p.is_finite());
        assert!((p.ln() - logp).abs() < 1e-9 * logp.abs());
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(QContext::new(1.0).is_err());
        assert!(QContext::new(0.0).is_err());
        assert!(QContext::new(f64::NAN).is_err());
        assert!(QContext::with_tolerances(0.5, 0.0, 1e-10).is_err());
    }

    #[test]
    fn antisymmetric_on_half_integers() {
        for q in [0.3, 0.5, 0.8] {
            let c = ctx(q);
            for t in 1..=80 {
                let z = t as f64 / 2.0;
                assert_eq!(q_number(-z, &c), -q_number(z, &c));
                assert!(q_number(z, &c) > 0.0);
            }
        }
    }

    proptest! {
        #[test]
        fn classical_limit(q in 0.999f64..0.99999, t in 1u32..=20) {
            let z = t as f64 / 2.0;
            let c = ctx(q);
            prop_assert!((q_number(z, &c) - z).abs() <= 10.0 * (1.0 - q) * z * z);
        }

        #[test]
        fn three_term_recursion(qi in 0usize..3, t in 2u32..=80) {
            let q = [0.3, 0.5, 0.8][qi];
            let c = ctx(q);
            let z = t as f64 / 2.0;
            let lhs = q_number(z + 1.0, &c);
            let rhs = (q + 1.0 / q) * q_number(z, &c) - q_number(z - 1.0, &c);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
        }

        #[test]
        fn matches_quotient(q in 0.05f64..0.95, z in -30.0f64..30.0) {
            let c = ctx(q);
            let a = q_number(z, &c);
            let b = quotient(z, q);
            prop_assert!((a - b).abs() <= 1e-11 * b.abs().max(1.0));
        }
    }
}
