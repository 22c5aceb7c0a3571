//! Verification suites as flat, sortable report records.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::approx_rep::{
    coefficient_approximations, deviation_check, intermediate_deviation, multiplicativity_defect,
    podles_relations, suq2_relations, HatModel,
};
use crate::basis::{Chirality, TruncatedSpace};
use crate::dirac_zeta::{
    counted_multiplicities, multiplicity, residue_fit, top_residue, zeta_trace, zeta_trace_closed_form,
    DiagonalWeight,
};
use crate::error::{Error, Result};
use crate::fredholm::{
    complement, pairing_direct, pairing_direct_of, pairing_series, pairing_simple, series_tail_after, MAX_LEVELS,
};
use crate::half::Half;
use crate::qnum::QContext;
use crate::real_structure::{
    commutant_ops, decay_profile, dirac_commutator_identity, f_closed_form, f_intermediate, f_numeric,
    restricted_norm, smoothing_check, structural_residuals, symmetry_residuals, t_equivariance, Axis,
};
use crate::sphere::{
    check_all, covariance_check_e, crossed_relations, defining_relations, highest_weight_checks, idempotent_e,
    idempotent_residual, radius_relation, standard_registry, Gen, Registry, RelationReport,
};

/// Smallest spinor cutoff whose margin-4 interior is nonempty.
pub const MIN_SPINOR_CUTOFF: Half = Half::from_doubled(9);
/// Largest l for which f(l,½,l) is compared.
pub const F_MAX_TWO_L: i32 = 21;
/// Cutoffs of the smoothing comparison.
pub const SMOOTHING_CUTOFFS: [Half; 3] = [Half::from_doubled(17), Half::from_doubled(21), Half::from_doubled(25)];
pub const SMOOTHING_K: u32 = 4;
/// Bound on fitted decay constants C in |entry| ≤ C·q^{rate·level}.
pub const DECAY_CONSTANT: f64 = 10.0;
/// Fitted rates must reach 2 − RATE_SLACK.
pub const RATE_SLACK: f64 = 0.1;
pub const WITNESS_FLOOR: f64 = 1e-6;
/// Truncation of the zeta oracle and of the traced spectrum.
const ZETA_TERMS: u64 = 400_000;
const ZETA_CUTOFF: Half = Half::from_doubled(2 * 40_000 - 3);
const MULTIPLICITY_CUTOFF: Half = Half::from_doubled(25);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Relations,
    Idempotent,
    Pairing,
    Zeta,
    Real,
    Approx,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Relations, Suite::Idempotent, Suite::Pairing, Suite::Zeta, Suite::Real, Suite::Approx];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Idempotent => "idempotent",
            Suite::Pairing => "pairing",
            Suite::Zeta => "zeta",
            Suite::Real => "real",
            Suite::Approx => "approx",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_owned()))
    }
}

/// One checked quantity. `pass` is `residual <= tolerance`; a NaN residual
/// never passes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub check_id: String,
    pub paper_anchor: &'static str,
    pub q: f64,
    pub cutoff: Option<String>,
    pub value: f64,
    pub expected: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Parameters shared by every suite at one q.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub q: f64,
    pub spinor_cutoff: Half,
    pub scalar_cutoff: Half,
    pub simple_k: u32,
    /// Tolerance for operator identities.
    pub tol: f64,
    /// Budget for certified series tails.
    pub tail_budget: f64,
}

impl SuiteConfig {
    pub fn new(q: f64) -> Self {
        Self {
            q,
            spinor_cutoff: Half::from_doubled(25),
            scalar_cutoff: Half::from_doubled(24),
            simple_k: 40,
            tol: 1e-9,
            tail_budget: 1e-10,
        }
    }

    /// A half-odd cutoff sets the spinor tower and the scalar tower one half
    /// below; an integer cutoff sets the scalar tower and the spinor one half
    /// above.
    pub fn with_cutoff(mut self, l: Half) -> Self {
        if l.is_integer() {
            self.scalar_cutoff = l;
            self.spinor_cutoff = Half::from_doubled(l.doubled() + 1);
        } else {
            self.spinor_cutoff = l;
            self.scalar_cutoff = Half::from_doubled(l.doubled() - 1);
        }
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// The tail budget is checked first: it does not depend on the cutoff.
    pub fn validate(&self) -> Result<QContext> {
        let ctx = QContext::with_tolerances(self.q, self.tol, self.tail_budget)?;
        let top = 2 * MAX_LEVELS as i32 - 1;
        let bound = series_tail_after(top, &ctx);
        if bound.is_nan() || bound > ctx.tol_series {
            return Err(Error::TailBudget { bound, budget: ctx.tol_series, levels: MAX_LEVELS });
        }
        if self.spinor_cutoff < MIN_SPINOR_CUTOFF {
            return Err(Error::CutoffBelowMinimum { cutoff: self.spinor_cutoff, minimum: MIN_SPINOR_CUTOFF });
        }
        Ok(ctx)
    }
}

struct Sink {
    suite: Suite,
    q: f64,
    out: Vec<Record>,
}

impl Sink {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        check_id: impl Into<String>,
        anchor: &'static str,
        cutoff: Option<Half>,
        value: f64,
        expected: f64,
        residual: f64,
        tolerance: f64,
    ) {
        self.out.push(Record {
            suite: self.suite,
            check_id: check_id.into(),
            paper_anchor: anchor,
            q: self.q,
            cutoff: cutoff.map(|c| c.to_string()),
            value,
            expected,
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    }

    fn close(&mut self, id: impl Into<String>, anchor: &'static str, cutoff: Option<Half>, value: f64, expected: f64, tol: f64) {
        self.push(id, anchor, cutoff, value, expected, (value - expected).abs(), tol);
    }

    fn relative(&mut self, id: impl Into<String>, anchor: &'static str, cutoff: Option<Half>, value: f64, expected: f64, tol: f64) {
        let scale = expected.abs().max(f64::MIN_POSITIVE);
        self.push(id, anchor, cutoff, value, expected, (value - expected).abs() / scale, tol);
    }

    /// A quantity that should vanish.
    fn zero(&mut self, id: impl Into<String>, anchor: &'static str, cutoff: Option<Half>, value: f64, tol: f64) {
        self.push(id, anchor, cutoff, value, 0.0, value.abs(), tol);
    }

    fn relations(&mut self, prefix: &str, anchor: &'static str, reports: Vec<RelationReport>, tol: f64, cutoff: Half) {
        for r in reports {
            self.zero(format!("{prefix}/{}", r.name), anchor, Some(cutoff), r.residual, tol);
        }
    }

    fn decay_constant(&mut self, id: impl Into<String>, anchor: &'static str, cutoff: Half, c: f64) {
        self.push(id, anchor, Some(cutoff), c, 0.0, c, DECAY_CONSTANT);
    }

    fn rate(&mut self, id: impl Into<String>, anchor: &'static str, cutoff: Half, rate: f64) {
        self.push(id, anchor, Some(cutoff), rate, 2.0, (2.0 - rate).max(0.0), RATE_SLACK);
    }
}

fn chirality_tag(c: Chirality) -> &'static str {
    match c {
        Chirality::Plus => "+",
        Chirality::Minus => "-",
        Chirality::None => "",
    }
}

fn simple_registry(cfg: &SuiteConfig, c: Chirality, ctx: &QContext) -> Result<Registry> {
    standard_registry(&Arc::new(TruncatedSpace::simple(cfg.simple_k, c)), ctx)
}

fn simple_cutoff(cfg: &SuiteConfig) -> Half {
    Half::from_doubled(2 * cfg.simple_k as i32)
}

fn run_relations(cfg: &SuiteConfig, ctx: &QContext, sink: &mut Sink) -> Result<()> {
    let mut base = defining_relations(ctx);
    base.push(radius_relation(ctx));
    let mut full = base.clone();
    full.extend(crossed_relations(ctx));
    for c in [Chirality::Plus, Chirality::Minus] {
        let reg = simple_registry(cfg, c, ctx)?;
        let reports = check_all(&base, &reg)?;
        sink.relations(&format!("simple{}", chirality_tag(c)), "sphere-relations", reports, cfg.tol, simple_cutoff(cfg));
    }
    let scalar = Arc::new(TruncatedSpace::scalar(cfg.scalar_cutoff)?);
    let reports = check_all(&full, &standard_registry(&scalar, ctx)?)?;
    sink.relations("scalar", "sphere-relations", reports, cfg.tol, cfg.scalar_cutoff);
    for c in [Chirality::Plus, Chirality::Minus] {
        let sp = Arc::new(TruncatedSpace::spinor_chiral(cfg.spinor_cutoff, c)?);
        let reports = check_all(&full, &standard_registry(&sp, ctx)?)?;
        sink.relations(&format!("spinor{}", chirality_tag(c)), "sphere-relations", reports, cfg.tol, cfg.spinor_cutoff);
    }
    Ok(())
}

fn run_idempotent(cfg: &SuiteConfig, ctx: &QContext, sink: &mut Sink) -> Result<()> {
    for c in [Chirality::Plus, Chirality::Minus] {
        let r = idempotent_residual(&simple_registry(cfg, c, ctx)?, ctx)?;
        let id = format!("simple{}/{}", chirality_tag(c), r.name);
        sink.zero(id, "projection-e", Some(simple_cutoff(cfg)), r.residual, cfg.tol);
    }
    for (name, r) in covariance_check_e(ctx) {
        sink.zero(format!("affine/{name}"), "covariance-of-e", None, r, 1e-12);
    }
    let scalar = Arc::new(TruncatedSpace::scalar(cfg.scalar_cutoff)?);
    let hw = highest_weight_checks(&standard_registry(&scalar, ctx)?, 2, ctx)?;
    sink.relations("scalar", "highest-weight-vectors", hw.checks, cfg.tol, cfg.scalar_cutoff);
    Ok(())
}

fn run_pairing(cfg: &SuiteConfig, ctx: &QContext, sink: &mut Sink) -> Result<()> {
    const ANCHOR: &str = "chern-character-pairing";
    let simple = pairing_simple(cfg.simple_k, ctx)?;
    sink.close("simple", ANCHOR, Some(simple_cutoff(cfg)), simple.value, 1.0, 1e-12);
    let series = pairing_series(ctx.tol_series, ctx)?;
    sink.close("series", ANCHOR, None, series.value, 1.0, 1e-8);
    sink.zero("series/tail-bound", ANCHOR, None, series.tail_bound, ctx.tol_series);
    let sp = Arc::new(TruncatedSpace::spinor(cfg.spinor_cutoff)?);
    let direct = pairing_direct(&sp, ctx)?;
    let l = Some(cfg.spinor_cutoff);
    sink.close("direct", ANCHOR, l, direct.result.value, 1.0, 1e-6);
    sink.zero("direct/tail-bound", ANCHOR, l, direct.result.tail_bound, ctx.tol_series);
    let full_vs_reduced = direct.full_truncated - direct.reduced_truncated;
    sink.zero("direct/full-vs-reduced", ANCHOR, l, full_vs_reduced, 1e-10);
    let (a, b, c) = (simple.value, series.value, direct.result.value);
    sink.zero("pairwise/simple-series", ANCHOR, l, a - b, 1e-6);
    sink.zero("pairwise/simple-direct", ANCHOR, l, a - c, 1e-6);
    sink.zero("pairwise/series-direct", ANCHOR, l, b - c, 1e-6);
    let comp = pairing_direct_of(&complement(&idempotent_e(ctx)), &sp, ctx)?;
    sink.close("complement", ANCHOR, l, comp.result.value, -1.0, 1e-6);
    Ok(())
}

fn run_zeta(_cfg: &SuiteConfig, ctx: &QContext, sink: &mut Sink) -> Result<()> {
    let space = TruncatedSpace::spinor(MULTIPLICITY_CUTOFF)?;
    for (n, count) in counted_multiplicities(&space) {
        let expected = multiplicity(n) as f64;
        sink.close(format!("multiplicity/n={n:02}"), "dirac-spectrum", Some(MULTIPLICITY_CUTOFF), count as f64, expected, 0.0);
    }
    let trace = zeta_trace(Complex64::new(6.0, 0.0), ZETA_CUTOFF)?;
    let (oracle, oracle_err) = zeta_trace_closed_form(6.0, ZETA_TERMS)?;
    sink.close("trace/s=6", "spectral-zeta", Some(ZETA_CUTOFF), trace.re, oracle, 1e-8);
    sink.zero("trace/s=6/error-budget", "spectral-zeta", Some(ZETA_CUTOFF), trace.tail_bound + oracle_err, 1e-8);

    let one = residue_fit(&DiagonalWeight::one())?;
    let coefficients = [("a3", one.a3, 4.0 / 3.0), ("a2", one.a2, 0.0), ("a1", one.a1, -4.0 / 3.0), ("a0", one.a0, 0.0)];
    for (name, v, e) in coefficients {
        sink.close(format!("residues/one/{name}"), "spectral-zeta-poles", None, v, e, 1e-10);
    }
    let lq = residue_fit(&DiagonalWeight::lq(ctx))?;
    let q = ctx.q;
    sink.close("residues/lq/a1", "lq-zeta-residue", None, lq.a1, 4.0 * q / (1.0 - q).powi(2), 1e-8);
    let x2 = top_residue(&[Gen::X2, Gen::X2Star], ctx)?;
    sink.close("residues/x2x2*/a3", "top-residue-trace", None, x2.fit.a3, x2.expected, 1e-6);
    sink.close("residues/x2x2*/a2", "top-residue-trace", None, x2.fit.a2, -4.0 / (1.0 - q.powi(4)), 1e-6);
    let x0 = top_residue(&[Gen::X0, Gen::X0], ctx)?;
    sink.close("residues/x0x0/a3", "top-residue-trace", None, x0.fit.a3, x0.expected, 1e-6);
    for (name, fit) in [("one", &one), ("lq", &lq), ("x2x2*", &x2.fit), ("x0x0", &x0.fit)] {
        sink.zero(format!("residues/{name}/certificate"), "spectral-zeta-poles", None, fit.relative_certificate(), 1e-8);
    }
    Ok(())
}

fn run_real(cfg: &SuiteConfig, ctx: &QContext, sink: &mut Sink) -> Result<()> {
    let l = cfg.spinor_cutoff;
    let sp = Arc::new(TruncatedSpace::spinor(l)?);
    let s = structural_residuals(&sp, ctx)?;
    for (name, r) in [("J^2=-1", s.j_square), ("JD=DJ", s.j_dirac), ("Jgamma=gammaJ", s.j_grading)] {
        sink.zero(format!("structure/{name}"), "real-structure-signs", Some(l), r, 0.0);
    }
    for (h, r) in t_equivariance(&sp, ctx)? {
        sink.zero(format!("T-equivariance/{h}"), "antilinear-equivariance", Some(l), r, 1e-9);
    }
    let top = F_MAX_TWO_L.min(l.doubled() - 4);
    for two_l in (1..=top).step_by(2) {
        let num = f_numeric(two_l, &sp, ctx)?;
        let lv = two_l as f64 / 2.0;
        let id = format!("f(l,1/2,l)/2l={two_l:02}");
        sink.relative(format!("{id}/closed-form"), "first-order-matrix-element", Some(l), num, f_closed_form(lv, ctx), 1e-10);
        let mid = f_intermediate(lv, 0.5, lv, ctx);
        sink.relative(format!("{id}/intermediate"), "first-order-matrix-element", Some(l), num, mid, 1e-10);
    }
    let cols = sp.interior(2);
    for a in Gen::ALL {
        for b in Gen::ALL {
            let (c, _) = commutant_ops(a, b, &sp, ctx)?;
            let p = decay_profile(&c, Axis::J, &cols, ctx);
            let id = format!("decay-j/[{},J{}J^-1]", a.name(), b.name());
            sink.decay_constant(id, "first-order-ideal", l, p.constant(2.0, ctx));
        }
    }
    for a in [Gen::X2, Gen::X2Star] {
        let (c, _) = commutant_ops(a, Gen::X2, &sp, ctx)?;
        let p = decay_profile(&c, Axis::L, &cols, ctx);
        sink.rate(format!("decay-l/[{},Jx2J^-1]/rate", a.name()), "first-order-ideal", l, p.rate);
    }
    let (witness, _) = commutant_ops(Gen::X2, Gen::X2, &sp, ctx)?;
    let norm = restricted_norm(&witness, &cols);
    sink.push("witness/[x2,Jx2J^-1]", "first-order-ideal", Some(l), norm, WITNESS_FLOOR, WITNESS_FLOOR / norm, 1.0);
    let rep = smoothing_check(|s| Ok(commutant_ops(Gen::X2, Gen::X2, s, ctx)?.1), SMOOTHING_K, &SMOOTHING_CUTOFFS)?;
    let last = SMOOTHING_CUTOFFS[SMOOTHING_CUTOFFS.len() - 1];
    sink.zero("smoothing/[[D,x2],Jx2J^-1]/k<=4", "smoothing-operators", Some(last), rep.max_increment, 1e-4);
    for (a, b) in [(Gen::X1, Gen::X2), (Gen::X2, Gen::X2), (Gen::X0, Gen::X1Star)] {
        for (name, r) in symmetry_residuals(a, b, &sp, ctx)? {
            sink.zero(format!("symmetry/{}{}/{name}", a.name(), b.name()), "first-order-ideal", Some(l), r, cfg.tol);
        }
    }
    for a in Gen::ALL {
        let r = dirac_commutator_identity(a, &sp, ctx)?;
        sink.zero(format!("dirac-commutator/{}", a.name()), "dirac-commutator-split", Some(l), r, cfg.tol);
    }
    Ok(())
}

fn run_approx(cfg: &SuiteConfig, ctx: &QContext, sink: &mut Sink) -> Result<()> {
    let l = cfg.spinor_cutoff;
    let sp = Arc::new(TruncatedSpace::spinor(l)?);
    let model = HatModel::new(&sp, ctx)?;
    let mut rels = suq2_relations(ctx);
    rels.extend(podles_relations(ctx));
    rels.extend(defining_relations(ctx));
    sink.relations("hat", "approximate-representation", check_all(&rels, &model.reg)?, cfg.tol, l);
    sink.zero("PQ=id", "approximate-representation", Some(l), model.pq.pq_residual(), 0.0);
    let qp = model.pq.qp();
    sink.zero("QP-idempotent", "approximate-representation", Some(l), (&(&qp * &qp) - &qp).max_abs(), 0.0);
    for g in Gen::ALL {
        let c = deviation_check(g, &model, ctx)?.constant(1.0, ctx);
        sink.decay_constant(format!("deviation/{}", g.name()), "approximate-representation", l, c);
    }
    for (name, c) in coefficient_approximations(&sp, ctx) {
        sink.decay_constant(format!("coefficient/{name}"), "smoothing-level-approximation", l, c);
    }
    for g in [Gen::X0, Gen::X1, Gen::X2] {
        let c = intermediate_deviation(g, &sp, ctx)?.constant(1.0, ctx);
        sink.decay_constant(format!("intermediate/{}", g.name()), "smoothing-level-approximation", l, c);
    }
    for a in Gen::ALL {
        for b in Gen::ALL {
            let c = multiplicativity_defect(a, b, &model, ctx)?.constant(1.0, ctx);
            sink.decay_constant(format!("multiplicativity/{}{}", a.name(), b.name()), "approximate-representation", l, c);
        }
    }
    Ok(())
}

/// Runs one suite at one configuration. Records come out in a fixed order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Record>> {
    let ctx = cfg.validate()?;
    let mut sink = Sink { suite, q: cfg.q, out: Vec::new() };
    match suite {
        Suite::Relations => run_relations(cfg, &ctx, &mut sink)?,
        Suite::Idempotent => run_idempotent(cfg, &ctx, &mut sink)?,
        Suite::Pairing => run_pairing(cfg, &ctx, &mut sink)?,
        Suite::Zeta => run_zeta(cfg, &ctx, &mut sink)?,
        Suite::Real => run_real(cfg, &ctx, &mut sink)?,
        Suite::Approx => run_approx(cfg, &ctx, &mut sink)?,
    }
    Ok(sink.out)
}

/// Validates every configuration, runs every (suite, configuration) pair in
/// parallel and sorts by suite, then q. Within one run the generation order
/// is kept, so the output does not depend on scheduling.
pub fn run_all(suites: &[Suite], cfgs: &[SuiteConfig]) -> Result<Vec<Record>> {
    for cfg in cfgs {
        cfg.validate()?;
    }
    let jobs: Vec<(Suite, &SuiteConfig)> = suites.iter().flat_map(|&s| cfgs.iter().map(move |c| (s, c))).collect();
    let runs = jobs.into_par_iter().map(|(s, c)| run_suite(s, c)).collect::<Result<Vec<_>>>()?;
    let mut records: Vec<Record> = runs.into_iter().flatten().collect();
    records.sort_by(|a, b| a.suite.cmp(&b.suite).then(a.q.total_cmp(&b.q)));
    Ok(records)
}
