//! Compensated summation.

use std::iter::Sum;

/// Neumaier's variant of Kahan summation. Order of `add` calls is the
/// caller's responsibility; results are reproducible for a fixed order.
#[derive(Clone, Copy, Debug, Default)]
pub struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl Sum<f64> for Compensated {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Compensated::new();
        iter.for_each(|x| acc.add(x));
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().sum::<Compensated>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn harmonic_tail_matches_pairwise_reference() {
        let n = 100_000;
        let c = compensated_sum((1..=n).map(|k| 1.0 / k as f64));
        let r = compensated_sum((1..=n).rev().map(|k| 1.0 / k as f64));
        assert!((c - r).abs() <= 1e-15 * c);
    }
}
