//! Matrix coefficients of the left regular and chiral spinor representations.

/// Coefficients of the left regular representation on ⊕_{l∈ℕ} V_l.
pub mod scalar {
    use crate::basis::Displacement;
    use crate::qnum::QContext;
    use crate::shift::ShiftTerm;
    use crate::sphere::Gen;
    use crate::uqso5::sqrt_nn;

    pub fn a(c: &QContext, j: f64, m1: f64) -> f64 {
        let n = |z| c.num(z);
        c.pow(m1 - 1.0) * sqrt_nn(n(j + m1 + 1.0) * n(j - m1 + 1.0) / (n(2.0 * j + 1.0) * n(2.0 * j + 3.0)))
    }

    pub fn b_plus(c: &QContext, j: f64, m1: f64) -> f64 {
        let n = |z| c.num(z);
        c.pow(-j + m1 - 0.5) * sqrt_nn(n(j + m1 + 1.0) * n(j + m1 + 2.0) / (n(2.0 * j + 1.0) * n(2.0 * j + 3.0)))
    }

    pub fn b_minus(c: &QContext, j: f64, m1: f64) -> f64 {
        let n = |z| c.num(z);
        let r = n(j - m1) * n(j - m1 - 1.0);
        if r == 0.0 {
            return 0.0;
        }
        -c.pow(j + m1 + 0.5) * sqrt_nn(r / (n(2.0 * j - 1.0) * n(2.0 * j + 1.0)))
    }

    pub fn c_plus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let n = |z| c.num(z);
        c.pow(m2 - 1.0) * sqrt_nn(n(l + j + m2 + 3.0) * n(l + j - m2 + 3.0) / (n(2.0 * l + 3.0) * n(2.0 * l + 5.0)))
    }

    pub fn c_minus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let n = |z| c.num(z);
        -c.pow(m2 - 1.0) * sqrt_nn(n(l - j + m2) * n(l - j - m2) / (n(2.0 * l + 1.0) * n(2.0 * l + 3.0)))
    }

    pub fn d_plus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let n = |z| c.num(z);
        c.pow(-l + m2 - 1.5) * sqrt_nn(n(l + j + m2 + 3.0) * n(l - j + m2 + 2.0) / (n(2.0 * l + 3.0) * n(2.0 * l + 5.0)))
    }

    pub fn d_minus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let n = |z| c.num(z);
        c.pow(l + m2 + 1.5) * sqrt_nn(n(l - j - m2) * n(l + j - m2 + 1.0) / (n(2.0 * l + 1.0) * n(2.0 * l + 3.0)))
    }

    pub(crate) fn terms(g: Gen, c: QContext) -> Vec<ShiftTerm> {
        if g == Gen::X2 {
            return vec![
                ShiftTerm::new(Displacement::shift(2, 0, 2, 0), move |x| d_plus(&c, x.l(), x.j(), x.m2())),
                ShiftTerm::new(Displacement::shift(-2, 0, 2, 0), move |x| d_minus(&c, x.l(), x.j(), x.m2())),
            ];
        }
        let (dm, x1) = if g == Gen::X1 { (2, true) } else { (0, false) };
        let up = move |x: &crate::basis::BasisLabel| if x1 { b_plus(&c, x.j(), x.m1()) } else { a(&c, x.j(), x.m1()) };
        let down =
            move |x: &crate::basis::BasisLabel| if x1 { b_minus(&c, x.j(), x.m1()) } else { a(&c, x.j() - 1.0, x.m1()) };
        vec![
            ShiftTerm::new(Displacement::shift(2, dm, 0, 2), move |x| up(x) * c_plus(&c, x.l(), x.j(), x.m2())),
            ShiftTerm::new(Displacement::shift(-2, dm, 0, 2), move |x| up(x) * c_minus(&c, x.l(), x.j(), x.m2())),
            ShiftTerm::new(Displacement::shift(2, dm, 0, -2), move |x| {
                down(x) * c_minus(&c, x.l() + 1.0, x.j() - 1.0, x.m2())
            }),
            ShiftTerm::new(Displacement::shift(-2, dm, 0, -2), move |x| {
                down(x) * c_plus(&c, x.l() - 1.0, x.j() - 1.0, x.m2())
            }),
        ]
    }
}

/// Coefficients of the chiral spinor representations on ⊕_{l∈ℕ+½} V_l.
///
/// Every C, H, D coefficient evaluates ε at its own subscript (l, j, m₂).
pub mod spinor {
    use crate::basis::{eps_sign, BasisLabel, Displacement};
    use crate::qnum::QContext;
    use crate::shift::ShiftTerm;
    use crate::sphere::Gen;
    use crate::uqso5::sqrt_nn;

    pub fn eps(l: f64, j: f64, m2: f64) -> f64 {
        eps_sign((2.0 * l).round() as i32, (2.0 * j).round() as i32, (2.0 * m2).round() as i32)
    }

    pub fn a_plus(c: &QContext, j: f64, m1: f64) -> f64 {
        let n = |z| c.num(z);
        c.pow(m1 - 1.0) * sqrt_nn(n(j + m1 + 1.0) * n(j - m1 + 1.0)) / n(2.0 * j + 2.0)
    }

    pub fn a_zero(c: &QContext, j: f64, m1: f64) -> f64 {
        let n = |z| c.num(z);
        c.pow(-2.0) * (c.pow(j + m1 + 1.0) * n(2.0) * n(j - m1) - n(2.0 * j)) / (n(2.0 * j) * n(2.0 * j + 2.0))
    }

    pub fn b_plus(c: &QContext, j: f64, m1: f64) -> f64 {
        let n = |z| c.num(z);
        c.pow(-j + m1 - 0.5) * sqrt_nn(n(j + m1 + 1.0) * n(j + m1 + 2.0)) / n(2.0 * j + 2.0)
    }

    pub fn b_zero(c: &QContext, j: f64, m1: f64) -> f64 {
        let n = |z| c.num(z);
        (1.0 + c.q * c.q) * c.pow(m1 - 0.5) * sqrt_nn(n(j - m1) * n(j + m1 + 1.0)) / (n(2.0 * j) * n(2.0 * j + 2.0))
    }

    pub fn b_minus(c: &QContext, j: f64, m1: f64) -> f64 {
        let n = |z| c.num(z);
        -c.pow(j + m1 + 0.5) * sqrt_nn(n(j - m1) * n(j - m1 - 1.0)) / n(2.0 * j)
    }

    pub fn c_plus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        let n = |z| c.num(z);
        -c.pow(m2 - 1.0 - e) * sqrt_nn(n(l + j + m2 + 3.0 + e) * n(l + j - m2 + 3.0 - e)) / n(2.0 * l + 4.0)
    }

    pub fn c_zero(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        let n = |z| c.num(z);
        n(4.0 * e)
            * c.pow(2.0 * e * l + m2 - 1.0 + 3.0 * e)
            * sqrt_nn(n(l + 0.5 + j - 2.0 * e * m2 + 2.0) * n(l + 0.5 - j - 2.0 * e * m2))
            / (n(2.0 * l + 2.0) * n(2.0 * l + 4.0))
    }

    pub fn c_minus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        let n = |z| c.num(z);
        -c.pow(m2 - 1.0 + e) * sqrt_nn(n(l - j + m2 - e) * n(l - j - m2 + e)) / n(2.0 * l + 2.0)
    }

    pub fn h_plus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        let n = |z| c.num(z);
        c.pow(m2 - 1.0 + e * (2.0 * j + 1.0))
            * sqrt_nn(n(l + 2.0 * e * j - m2 + 2.0 + e) * n(l - 2.0 * e * j + m2 + 2.0 - e))
            / n(2.0 * l + 4.0)
    }

    pub fn h_zero(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        let n = |z| c.num(z);
        let s = e * (2.0 * j + 1.0);
        (n(l - s - m2 + 1.0) * n(l - s + m2 + 2.0) - c.pow(-2.0) * n(l + s - m2 + 2.0) * n(l + s + m2 + 1.0))
            / (n(2.0 * l + 2.0) * n(2.0 * l + 4.0))
    }

    pub fn d_plus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        let n = |z| c.num(z);
        c.pow(-l + m2 - 1.5) * sqrt_nn(n(l + j + m2 + 3.0 + e) * n(l - j + m2 + 2.0 - e)) / n(2.0 * l + 4.0)
    }

    pub fn d_zero(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        let n = |z| c.num(z);
        n(2.0) * c.pow(m2 + 0.5) * sqrt_nn(n(l - 2.0 * e * j - m2 + 1.0 - e) * n(l - 2.0 * e * j + m2 + 2.0 - e))
            / (n(2.0 * l + 2.0) * n(2.0 * l + 4.0))
    }

    pub fn d_minus(c: &QContext, l: f64, j: f64, m2: f64) -> f64 {
        let e = eps(l, j, m2);
        let n = |z| c.num(z);
        -c.pow(l + m2 + 1.5) * sqrt_nn(n(l - j - m2 + e) * n(l + j - m2 + 1.0 - e)) / n(2.0 * l + 2.0)
    }

    type Prefactor = fn(&QContext, f64, f64) -> f64;

    pub(crate) fn terms(g: Gen, c: QContext) -> Vec<ShiftTerm> {
        if g == Gen::X2 {
            return vec![
                ShiftTerm::new(Displacement::shift(2, 0, 2, 0), move |x| d_plus(&c, x.l(), x.j(), x.m2())),
                ShiftTerm::new(Displacement::shift(0, 0, 2, 0), move |x| {
                    x.chirality.sign() * d_zero(&c, x.l(), x.j(), x.m2())
                }),
                ShiftTerm::new(Displacement::shift(-2, 0, 2, 0), move |x| d_minus(&c, x.l(), x.j(), x.m2())),
            ];
        }
        // P, Z, M prefactors on the j+1, j, j−1 rows.
        let (dm, p, z, m): (i32, Prefactor, Prefactor, Prefactor) = if g == Gen::X1 {
            (2, b_plus, b_zero, b_minus)
        } else {
            (0, a_plus, a_zero, |c, j, m1| a_plus(c, j - 1.0, m1))
        };
        let t = |dl: i32, dj: i32, f: Box<dyn Fn(&BasisLabel) -> f64 + Send + Sync>| {
            ShiftTerm::new(Displacement::shift(2 * dl, dm, 0, 2 * dj), f)
        };
        let s = |x: &BasisLabel| x.chirality.sign();
        vec![
            t(1, 1, Box::new(move |x| p(&c, x.j(), x.m1()) * c_plus(&c, x.l(), x.j(), x.m2()))),
            t(0, 1, Box::new(move |x| -s(x) * p(&c, x.j(), x.m1()) * c_zero(&c, x.l(), x.j(), x.m2()))),
            t(-1, 1, Box::new(move |x| p(&c, x.j(), x.m1()) * c_minus(&c, x.l(), x.j(), x.m2()))),
            t(1, 0, Box::new(move |x| z(&c, x.j(), x.m1()) * h_plus(&c, x.l(), x.j(), x.m2()))),
            t(0, 0, Box::new(move |x| s(x) * z(&c, x.j(), x.m1()) * h_zero(&c, x.l(), x.j(), x.m2()))),
            t(-1, 0, Box::new(move |x| z(&c, x.j(), x.m1()) * h_plus(&c, x.l() - 1.0, x.j(), x.m2()))),
            t(1, -1, Box::new(move |x| m(&c, x.j(), x.m1()) * c_minus(&c, x.l() + 1.0, x.j() - 1.0, x.m2()))),
            t(0, -1, Box::new(move |x| -s(x) * m(&c, x.j(), x.m1()) * c_zero(&c, x.l(), x.j() - 1.0, x.m2()))),
            t(-1, -1, Box::new(move |x| m(&c, x.j(), x.m1()) * c_plus(&c, x.l() - 1.0, x.j() - 1.0, x.m2()))),
        ]
    }
}
