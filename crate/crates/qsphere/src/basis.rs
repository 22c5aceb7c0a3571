//! Basis labels, label displacements and truncated label spaces.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::half::Half;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// ℓ²(ℕ²) for one of the two irreducible representations.
    Simple,
    /// ⊕ V_l, l ∈ ℕ.
    Scalar,
    /// ⊕ V_l, l ∈ ℕ+½, both or one chirality.
    Spinor,
    /// The enlarged label set carrying the SU_q(2) ⊗ S²_q representation.
    Hat,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Simple => "simple",
            Family::Scalar => "scalar",
            Family::Spinor => "spinor",
            Family::Hat => "hat",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chirality {
    None,
    Plus,
    Minus,
}

impl Chirality {
    /// +1 for `Plus` (and `None`), −1 for `Minus`.
    pub fn sign(self) -> f64 {
        match self {
            Chirality::Minus => -1.0,
            _ => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
            Chirality::None => Chirality::None,
        }
    }
}

/// |l, m₁, m₂; j⟩ with every half-integer stored doubled.
///
/// Simple-family labels |k₁, k₂⟩± reuse the slots: `two_m1 = k₁`,
/// `two_m2 = k₂` (not doubled), `two_l = two_j = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub two_l: i32,
    pub two_m1: i32,
    pub two_m2: i32,
    pub two_j: i32,
    pub chirality: Chirality,
}

impl BasisLabel {
    pub fn new(l: Half, m1: Half, m2: Half, j: Half, chirality: Chirality) -> Self {
        Self {
            two_l: l.doubled(),
            two_m1: m1.doubled(),
            two_m2: m2.doubled(),
            two_j: j.doubled(),
            chirality,
        }
    }

    pub const fn doubled(two_l: i32, two_m1: i32, two_m2: i32, two_j: i32, chirality: Chirality) -> Self {
        Self { two_l, two_m1, two_m2, two_j, chirality }
    }

    pub const fn simple(k1: i32, k2: i32, sign: Chirality) -> Self {
        Self { two_l: 0, two_m1: k1, two_m2: k2, two_j: 0, chirality: sign }
    }

    pub fn l(&self) -> f64 {
        self.two_l as f64 / 2.0
    }
    pub fn m1(&self) -> f64 {
        self.two_m1 as f64 / 2.0
    }
    pub fn m2(&self) -> f64 {
        self.two_m2 as f64 / 2.0
    }
    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }
    pub fn k1(&self) -> i32 {
        self.two_m1
    }
    pub fn k2(&self) -> i32 {
        self.two_m2
    }

    fn sort_key(&self) -> (i32, Chirality, i32, i32, i32) {
        (self.two_l, self.chirality, self.two_j, self.two_m1, self.two_m2)
    }

    pub fn is_admissible(&self, family: Family) -> bool {
        let (l, m1, m2, j) = (self.two_l, self.two_m1, self.two_m2, self.two_j);
        match family {
            Family::Simple => {
                l == 0 && j == 0 && m1 >= 0 && m2 >= 0 && self.chirality != Chirality::None
            }
            Family::Scalar => {
                self.chirality == Chirality::None
                    && l >= 0
                    && l % 2 == 0
                    && j % 2 == 0
                    && (0..=l).contains(&j)
                    && natural(j - m1.abs())
                    && (l - j - m2.abs()) % 4 == 0
                    && l - j - m2.abs() >= 0
            }
            Family::Spinor => {
                self.chirality != Chirality::None
                    && l >= 1
                    && l % 2 == 1
                    && j % 2 != 0
                    && (1..=l).contains(&j)
                    && natural(j - m1.abs())
                    && natural(l + 1 - j - m2.abs())
            }
            Family::Hat => {
                self.chirality != Chirality::None
                    && (l + j) % 2 == 0
                    && natural(j + m1)
                    && natural(l + 1 - j + m2)
            }
        }
    }
}

/// `t/2 ∈ ℕ` for a doubled value `t`.
fn natural(t: i32) -> bool {
    t >= 0 && t % 2 == 0
}

impl Ord for BasisLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for BasisLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = Half::from_doubled;
        let c = match self.chirality {
            Chirality::None => "",
            Chirality::Plus => "+",
            Chirality::Minus => "-",
        };
        write!(f, "|{},{},{};{}>{}", h(self.two_l), h(self.two_m1), h(self.two_m2), h(self.two_j), c)
    }
}

/// ½(−1)^{l+½−j−m₂}, the sign rule for ε on half-integer levels and on
/// hat labels, in doubled arguments.
pub fn eps_sign(two_l: i32, two_j: i32, two_m2: i32) -> f64 {
    let e = (two_l + 1 - two_j - two_m2) / 2;
    if e.rem_euclid(2) == 0 {
        0.5
    } else {
        -0.5
    }
}

/// ε of a label: 0 on the scalar tower, the sign rule otherwise.
pub fn epsilon(label: &BasisLabel) -> f64 {
    match label.chirality {
        Chirality::None => 0.0,
        _ => eps_sign(label.two_l, label.two_j, label.two_m2),
    }
}

/// A partial bijection of labels: optional reflection (m₁, m₂) ↦ (−m₁, −m₂),
/// then a translation, with an optional chirality flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Displacement {
    pub d2l: i32,
    pub d2m1: i32,
    pub d2m2: i32,
    pub d2j: i32,
    pub flip: bool,
    pub reflect: bool,
}

impl Displacement {
    pub const IDENTITY: Displacement = Displacement::shift(0, 0, 0, 0);

    pub const fn shift(d2l: i32, d2m1: i32, d2m2: i32, d2j: i32) -> Self {
        Self { d2l, d2m1, d2m2, d2j, flip: false, reflect: false }
    }

    pub const fn flipping(mut self) -> Self {
        self.flip = !self.flip;
        self
    }

    pub const fn reflection() -> Self {
        Self { d2l: 0, d2m1: 0, d2m2: 0, d2j: 0, flip: false, reflect: true }
    }

    pub fn apply(&self, x: &BasisLabel) -> BasisLabel {
        let r = if self.reflect { -1 } else { 1 };
        BasisLabel {
            two_l: x.two_l + self.d2l,
            two_m1: r * x.two_m1 + self.d2m1,
            two_m2: r * x.two_m2 + self.d2m2,
            two_j: x.two_j + self.d2j,
            chirality: if self.flip { x.chirality.flipped() } else { x.chirality },
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Displacement) -> Displacement {
        let r = if next.reflect { -1 } else { 1 };
        Displacement {
            d2l: self.d2l + next.d2l,
            d2m1: r * self.d2m1 + next.d2m1,
            d2m2: r * self.d2m2 + next.d2m2,
            d2j: self.d2j + next.d2j,
            flip: self.flip ^ next.flip,
            reflect: self.reflect ^ next.reflect,
        }
    }

    pub fn inverse(&self) -> Displacement {
        let r = if self.reflect { -1 } else { 1 };
        Displacement {
            d2l: -self.d2l,
            d2m1: -r * self.d2m1,
            d2m2: -r * self.d2m2,
            d2j: -self.d2j,
            flip: self.flip,
            reflect: self.reflect,
        }
    }

    /// The pure translation taking `src` to `tgt`.
    pub fn between(src: &BasisLabel, tgt: &BasisLabel) -> Displacement {
        Displacement {
            d2l: tgt.two_l - src.two_l,
            d2m1: tgt.two_m1 - src.two_m1,
            d2m2: tgt.two_m2 - src.two_m2,
            d2j: tgt.two_j - src.two_j,
            flip: tgt.chirality != src.chirality,
            reflect: false,
        }
    }
}

/// Canonically ordered finite label set with its inverse index.
#[derive(Clone, Debug)]
pub struct TruncatedSpace {
    family: Family,
    cutoff: Half,
    labels: Vec<BasisLabel>,
    index: HashMap<BasisLabel, usize>,
    /// Steps left before the boundary, per label (see [`TruncatedSpace::step_cost`]).
    margins: Vec<u32>,
}

impl TruncatedSpace {
    fn from_labels(family: Family, cutoff: Half, mut pairs: Vec<(BasisLabel, u32)>) -> Self {
        pairs.sort_by_key(|a| a.0);
        pairs.dedup_by(|a, b| a.0 == b.0);
        let labels: Vec<BasisLabel> = pairs.iter().map(|p| p.0).collect();
        let margins = pairs.iter().map(|p| p.1).collect();
        let index = labels.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        Self { family, cutoff, labels, index, margins }
    }

    /// Scalar (integer L) or spinor (L ∈ ℕ+½, both chiralities) tower up to L.
    pub fn enumerate(family: Family, cutoff: Half) -> Result<Self> {
        match family {
            Family::Scalar => Self::scalar(cutoff),
            Family::Spinor => Self::spinor(cutoff),
            Family::Simple => {
                let k = if cutoff.is_integer() && cutoff.doubled() >= 2 { cutoff.doubled() / 2 } else { -1 };
                if k < 1 {
                    return Err(Error::InvalidCutoff { family: "simple", cutoff });
                }
                Ok(Self::simple(k as u32, Chirality::Plus))
            }
            Family::Hat => Self::hat(cutoff, 4, &[Chirality::Plus, Chirality::Minus]),
        }
    }

    pub fn scalar(cutoff: Half) -> Result<Self> {
        if !cutoff.is_integer() || cutoff.doubled() < 0 {
            return Err(Error::InvalidCutoff { family: "scalar", cutoff });
        }
        let top = cutoff.doubled();
        let mut out = Vec::new();
        for tl in (0..=top).step_by(2) {
            for x in scalar_level(tl) {
                out.push((x, ((top - tl) / 2) as u32));
            }
        }
        Ok(Self::from_labels(Family::Scalar, cutoff, out))
    }

    pub fn spinor(cutoff: Half) -> Result<Self> {
        Self::spinor_with(cutoff, &[Chirality::Plus, Chirality::Minus])
    }

    pub fn spinor_chiral(cutoff: Half, chirality: Chirality) -> Result<Self> {
        Self::spinor_with(cutoff, &[chirality])
    }

    fn spinor_with(cutoff: Half, chiralities: &[Chirality]) -> Result<Self> {
        if cutoff.is_integer() || cutoff.doubled() < 1 || chiralities.contains(&Chirality::None) {
            return Err(Error::InvalidCutoff { family: "spinor", cutoff });
        }
        let top = cutoff.doubled();
        let mut out = Vec::new();
        for tl in (1..=top).step_by(2) {
            for &c in chiralities {
                for x in spinor_level(tl, c) {
                    out.push((x, ((top - tl) / 2) as u32));
                }
            }
        }
        Ok(Self::from_labels(Family::Spinor, cutoff, out))
    }

    /// |k₁,k₂⟩ with 0 ≤ k₁,k₂ ≤ K for one of the two simple representations.
    pub fn simple(k: u32, sign: Chirality) -> Self {
        let k = k as i32;
        let mut out = Vec::new();
        for k1 in 0..=k {
            for k2 in 0..=k {
                out.push((BasisLabel::simple(k1, k2, sign), (k - k1.max(k2)) as u32));
            }
        }
        Self::from_labels(Family::Simple, Half::int(k), out)
    }

    /// Hat labels reachable from the spinor labels at level ≤ L within total
    /// step cost `radius` (α^±, β^± cost 1, B^± cost 2).
    pub fn hat(cutoff: Half, radius: u32, chiralities: &[Chirality]) -> Result<Self> {
        let seed = Self::spinor_with(cutoff, chiralities)?;
        let steps = [
            Displacement::shift(1, 1, 0, 1),
            Displacement::shift(-1, -1, 0, -1),
            Displacement::shift(1, -1, 0, 1),
            Displacement::shift(-1, 1, 0, -1),
            Displacement::shift(2, 0, 2, 0),
            Displacement::shift(-2, 0, -2, 0),
        ];
        let mut depth: HashMap<BasisLabel, u32> = seed.labels.iter().map(|x| (*x, 0)).collect();
        // Costs are 1 or 2, so a bucket queue gives exact shortest distances.
        let mut buckets: Vec<VecDeque<BasisLabel>> = vec![VecDeque::new(); radius as usize + 3];
        buckets[0].extend(seed.labels.iter().copied());
        for d in 0..=radius as usize {
            while let Some(x) = buckets[d].pop_front() {
                if depth[&x] as usize != d {
                    continue;
                }
                for s in &steps {
                    let cost = s.d2l.unsigned_abs();
                    let nd = d as u32 + cost;
                    if nd > radius {
                        continue;
                    }
                    let y = s.apply(&x);
                    if !y.is_admissible(Family::Hat) {
                        continue;
                    }
                    let better = depth.get(&y).is_none_or(|&old| nd < old);
                    if better {
                        depth.insert(y, nd);
                        buckets[nd as usize].push_back(y);
                    }
                }
            }
        }
        let out = depth.into_iter().map(|(x, d)| (x, radius - d)).collect();
        Ok(Self::from_labels(Family::Hat, cutoff, out))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn cutoff(&self) -> Half {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &BasisLabel {
        &self.labels[i]
    }

    pub fn index_of(&self, x: &BasisLabel) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &BasisLabel) -> bool {
        self.index.contains_key(x)
    }

    pub fn margin(&self, i: usize) -> u32 {
        self.margins[i]
    }

    /// Boundary distance a displacement consumes, in the unit the margins
    /// are measured in: levels of l (scalar, spinor), max(|Δk₁|,|Δk₂|)
    /// (simple), half-levels of l (hat).
    pub fn step_cost(&self, d: &Displacement) -> u32 {
        match self.family {
            Family::Scalar | Family::Spinor => d.d2l.unsigned_abs().div_ceil(2),
            Family::Simple => d.d2m1.unsigned_abs().max(d.d2m2.unsigned_abs()),
            Family::Hat => d.d2l.unsigned_abs(),
        }
    }

    /// Indices whose margin is at least `depth`.
    pub fn interior(&self, depth: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.margins[i] >= depth).collect()
    }
}

impl PartialEq for TruncatedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.cutoff == other.cutoff && self.labels == other.labels
    }
}

/// Labels of the scalar V_l (doubled l).
pub fn scalar_level(two_l: i32) -> Vec<BasisLabel> {
    let mut out = Vec::new();
    for tj in (0..=two_l).step_by(2) {
        for tm1 in (-tj..=tj).step_by(2) {
            let r = two_l - tj;
            for tm2 in (-r..=r).step_by(2) {
                let x = BasisLabel::doubled(two_l, tm1, tm2, tj, Chirality::None);
                if x.is_admissible(Family::Scalar) {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Labels of the spinor V_l of one chirality (doubled l, odd).
pub fn spinor_level(two_l: i32, chirality: Chirality) -> Vec<BasisLabel> {
    let mut out = Vec::new();
    for tj in (1..=two_l).step_by(2) {
        for tm1 in (-tj..=tj).step_by(2) {
            let r = two_l + 1 - tj;
            for tm2 in (-r..=r).step_by(2) {
                out.push(BasisLabel::doubled(two_l, tm1, tm2, tj, chirality));
            }
        }
    }
    out
}

/// dim V_l = (2/3)(l+5/2)(l+3/2)(l+½) for l ∈ ℕ+½.
pub fn dim_spinor_level(l: Half) -> Result<u64> {
    let t = l.doubled();
    if l.is_integer() || t < 1 {
        return Err(Error::InvalidCutoff { family: "spinor", cutoff: l });
    }
    // In doubled units: (2/3)·(t+5)(t+3)(t+1)/8.
    let p = ((t + 5) as u64) * ((t + 3) as u64) * ((t + 1) as u64);
    Ok(p / 12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(t: i32) -> Half {
        Half::from_doubled(t)
    }

    // Brute force over a box, independent of the level generators.
    fn brute(family: Family, top: i32, chis: &[Chirality]) -> usize {
        let mut n = 0;
        for tl in 0..=top {
            for tj in 0..=top {
                for tm1 in -top..=top {
                    for tm2 in -top - 1..=top + 1 {
                        for &c in chis {
                            if BasisLabel::doubled(tl, tm1, tm2, tj, c).is_admissible(family) {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn scalar_counts() {
        assert_eq!(TruncatedSpace::scalar(Half::int(1)).unwrap().dim(), 6);
        assert_eq!(scalar_level(2).len(), 5);
        for top in [0, 2, 4, 6] {
            let sp = TruncatedSpace::scalar(h(top)).unwrap();
            assert_eq!(sp.dim(), brute(Family::Scalar, top, &[Chirality::None]));
        }
    }

    #[test]
    fn spinor_counts() {
        assert_eq!(TruncatedSpace::spinor(h(1)).unwrap().dim(), 8);
        let s = TruncatedSpace::spinor(h(3)).unwrap();
        assert_eq!(s.dim(), 40);
        assert_eq!(TruncatedSpace::spinor_chiral(h(3), Chirality::Minus).unwrap().dim(), 20);
        for top in [1, 3, 5, 7] {
            let sp = TruncatedSpace::spinor(h(top)).unwrap();
            assert_eq!(sp.dim(), brute(Family::Spinor, top, &[Chirality::Plus, Chirality::Minus]));
        }
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(dim_spinor_level(h(1)).unwrap(), 4);
        assert_eq!(dim_spinor_level(h(3)).unwrap(), 16);
        assert_eq!(dim_spinor_level(h(5)).unwrap(), 40);
        assert!(dim_spinor_level(Half::int(1)).is_err());
        for tl in (1..=25).step_by(2) {
            assert_eq!(spinor_level(tl, Chirality::Plus).len() as u64, dim_spinor_level(h(tl)).unwrap());
        }
    }

    #[test]
    fn rejects_wrong_cutoffs() {
        assert!(TruncatedSpace::scalar(h(3)).is_err());
        assert!(TruncatedSpace::spinor(h(4)).is_err());
        assert!(TruncatedSpace::enumerate(Family::Simple, h(1)).is_err());
    }

    #[test]
    fn epsilon_examples() {
        let x = BasisLabel::new(h(2), h(0), h(2), h(0), Chirality::None);
        assert_eq!(epsilon(&x), 0.0);
        let x = BasisLabel::new(h(1), h(1), h(1), h(1), Chirality::Plus);
        assert_eq!(epsilon(&x), 0.5);
        // l+½−j−m₂ = 2 at (3/2, ½, −½, ½): even exponent, so +½.
        let x = BasisLabel::new(h(3), h(1), h(-1), h(1), Chirality::Plus);
        assert_eq!(epsilon(&x), 0.5);
    }

    #[test]
    fn epsilon_is_the_unique_parity_fix() {
        let sp = TruncatedSpace::spinor(h(13)).unwrap();
        for x in sp.labels() {
            let e2 = (2.0 * epsilon(x)) as i32;
            // l + ε − j − m₂ ∈ 2ℕ, in doubled units: divisible by 4 and ≥ 0.
            let t = x.two_l + e2 - x.two_j - x.two_m2;
            assert!(t >= 0 && t % 4 == 0, "{x}");
            let other = x.two_l - e2 - x.two_j - x.two_m2;
            assert!(!(other >= 0 && other % 4 == 0), "{x}");
        }
    }

    #[test]
    fn canonical_order_and_index() {
        let sp = TruncatedSpace::spinor(h(7)).unwrap();
        assert!(sp.labels().windows(2).all(|w| w[0] < w[1]));
        for (i, x) in sp.labels().iter().enumerate() {
            assert_eq!(sp.index_of(x), Some(i));
            assert!(x.is_admissible(Family::Spinor));
        }
        let first = sp.label(0);
        assert_eq!((first.two_l, first.chirality), (1, Chirality::Plus));
    }

    #[test]
    fn hat_closure_contains_seed_and_is_admissible() {
        let sp = TruncatedSpace::spinor_chiral(h(5), Chirality::Plus).unwrap();
        let hat = TruncatedSpace::hat(h(5), 3, &[Chirality::Plus]).unwrap();
        assert!(hat.dim() > sp.dim());
        for x in sp.labels() {
            let i = hat.index_of(x).unwrap();
            assert_eq!(hat.margin(i), 3);
        }
        assert!(hat.labels().iter().all(|x| x.is_admissible(Family::Hat)));
    }

    #[test]
    fn margins_track_levels() {
        let sp = TruncatedSpace::spinor(h(9)).unwrap();
        for (i, x) in sp.labels().iter().enumerate() {
            assert_eq!(sp.margin(i) as i32, (9 - x.two_l) / 2);
        }
        assert_eq!(sp.interior(5).len(), 0);
        assert_eq!(sp.interior(4).len(), 8);
    }

    proptest! {
        #[test]
        fn displacement_group_laws(
            a in (-3i32..=3, -3i32..=3, -3i32..=3, -3i32..=3, any::<bool>(), any::<bool>()),
            b in (-3i32..=3, -3i32..=3, -3i32..=3, -3i32..=3, any::<bool>(), any::<bool>()),
            x in (-5i32..=5, -5i32..=5, -5i32..=5, -5i32..=5),
        ) {
            let mk = |t: (i32, i32, i32, i32, bool, bool)| Displacement {
                d2l: t.0, d2m1: t.1, d2m2: t.2, d2j: t.3, flip: t.4, reflect: t.5,
            };
            let (da, db) = (mk(a), mk(b));
            let lab = BasisLabel::doubled(x.0, x.1, x.2, x.3, Chirality::Plus);
            prop_assert_eq!(da.then(&db).apply(&lab), db.apply(&da.apply(&lab)));
            prop_assert_eq!(da.inverse().apply(&da.apply(&lab)), lab);
            prop_assert_eq!(da.then(&da.inverse()), Displacement::IDENTITY);
        }
    }
}
