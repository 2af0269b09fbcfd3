//! Normed semigroups, flows, trajectories and the entropy estimator.
//!
//! A flow `(S, φ)` is evaluated on a finite list of witnesses.  For each
//! witness the engine computes `c_n = v(T_n(φ, x))` for `n = 1..n_max`, the
//! estimator classifies the growth of `c_n`, and the report keeps the whole
//! sequence.  Results are sups over the supplied witnesses; a module that can
//! prove its witnesses cofinal upgrades the scope explicitly.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{cap, Error, Result};
use crate::logvalue::LogValue;

pub mod carriers;
pub mod laws;

/// Structural properties of a carrier's norm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CarrierFlags {
    pub subadditive: bool,
    pub arithmetic: bool,
    pub monotone_norm: bool,
    pub d_monotone: bool,
    pub commutative: bool,
    pub has_identity: bool,
    /// Growth of `c_n` is provably eventually arithmetic (or affine-recurrent
    /// in the underlying integer), so slope detection is a proof.
    pub structured: bool,
}

pub trait Carrier {
    type Elem: Clone + Ord + Debug;

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn norm(&self, a: &Self::Elem) -> Result<LogValue>;
    fn flags(&self) -> CarrierFlags;

    /// Preorder used by monotonicity and cofinality checks.
    fn leq(&self, _a: &Self::Elem, _b: &Self::Elem) -> Option<bool> {
        None
    }

    /// Size of an element in bits, checked against [`Budget::max_elem_bits`].
    fn size_bits(&self, _a: &Self::Elem) -> u64 {
        0
    }
}

pub type ElemOf<F> = <<F as Flow>::C as Carrier>::Elem;

pub trait Flow {
    type C: Carrier;

    fn carrier(&self) -> &Self::C;
    fn apply(&self, x: &ElemOf<Self>) -> Result<ElemOf<Self>>;
    fn contractive(&self) -> bool;
}

/// Hard resource ceilings.  Exceeding any of them is an error, never a
/// silent downgrade to floating point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_elem_bits: u64,
    pub max_cardinality: usize,
    pub max_cover: usize,
    pub max_words: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_elem_bits: 1 << 20,
            max_cardinality: 1 << 20,
            max_cover: 24,
            max_words: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyConfig {
    pub n_max: usize,
    pub window: usize,
    pub budget: Budget,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig { n_max: 64, window: 5, budget: Budget::default() }
    }
}

impl EntropyConfig {
    pub fn with_n_max(mut self, n: usize) -> Self {
        self.n_max = n;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// `T_1, …, T_{n_max}` for the witness `x`.
pub fn trajectory_elements<F: Flow>(
    flow: &F,
    x: &ElemOf<F>,
    n_max: usize,
    side: Side,
    budget: &Budget,
) -> Result<Vec<ElemOf<F>>> {
    let mut out = Vec::with_capacity(n_max);
    walk(flow, x, n_max, side, budget, |t| {
        out.push(t.clone());
        Ok(())
    })?;
    Ok(out)
}

/// `c_n = v(T_n(φ, x))` for `n = 1..=n_max`.
pub fn trajectory_norms<F: Flow>(
    flow: &F,
    x: &ElemOf<F>,
    n_max: usize,
    side: Side,
    budget: &Budget,
) -> Result<Vec<LogValue>> {
    let c = flow.carrier();
    let mut out = Vec::with_capacity(n_max);
    walk(flow, x, n_max, side, budget, |t| {
        out.push(c.norm(t)?);
        Ok(())
    })?;
    Ok(out)
}

fn walk<F: Flow>(
    flow: &F,
    x: &ElemOf<F>,
    n_max: usize,
    side: Side,
    budget: &Budget,
    mut visit: impl FnMut(&ElemOf<F>) -> Result<()>,
) -> Result<()> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let c = flow.carrier();
    let check_contraction = flow.contractive();
    let mut last_norm = if check_contraction { Some(c.norm(x)?) } else { None };
    let mut t = x.clone();
    let mut p = x.clone();
    visit(&t)?;
    for n in 1..n_max {
        p = flow.apply(&p)?;
        if let Some(prev) = last_norm.take() {
            let now = c.norm(&p)?;
            if now > prev {
                return Err(Error::NotContractive(n));
            }
            last_norm = Some(now);
        }
        t = match side {
            Side::Right => c.op(&t, &p)?,
            Side::Left => c.op(&p, &t)?,
        };
        if c.size_bits(&t) > budget.max_elem_bits {
            return Err(cap(format!("trajectory element exceeds {} bits at n = {}", budget.max_elem_bits, n + 1)));
        }
        visit(&t)?;
    }
    Ok(())
}

/// Reason an estimate is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactRule {
    /// `c_{n+1} − c_n` identical from index `from` to the end.
    ConstantDifference { from: usize },
    /// The sequence is constant from index `from` on.
    EventuallyConstant { from: usize },
    /// `c_n = ln M_n` with `M_{n+1} = a·M_n + b`, `a > 1`, from index `from`.
    AffineRecurrence { a: BigRational, b: BigRational, from: usize },
    /// `φ^k(x) = φ^m(x)` with `k > m`.
    QuasiPeriodic { k: usize, m: usize },
    /// The last computed norm is infinite.
    InfiniteNorm,
    /// Closed form supplied by the owning module.
    Certified(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    Exact { value: LogValue, rule: ExactRule },
    /// Same detection on a carrier without a growth proof.
    ExactHeuristic { value: LogValue, rule: ExactRule },
    FeketeUpperBound { value: LogValue, at: usize },
    Numeric { value: f64, window_slope: f64, residual: f64 },
}

impl Classification {
    pub fn value(&self) -> LogValue {
        match self {
            Classification::Exact { value, .. }
            | Classification::ExactHeuristic { value, .. }
            | Classification::FeketeUpperBound { value, .. } => value.clone(),
            Classification::Numeric { value, .. } => LogValue::approx(value.max(0.0)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Classification::Exact { .. })
    }

    /// Exact or exact (heuristic).
    pub fn is_exactish(&self) -> bool {
        matches!(self, Classification::Exact { .. } | Classification::ExactHeuristic { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Classification::Exact { .. } => "exact",
            Classification::ExactHeuristic { .. } => "exact_heuristic",
            Classification::FeketeUpperBound { .. } => "fekete_upper_bound",
            Classification::Numeric { .. } => "numeric",
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Classification::Exact { .. } => 0,
            Classification::ExactHeuristic { .. } => 1,
            Classification::FeketeUpperBound { .. } => 2,
            Classification::Numeric { .. } => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    pub c: Vec<LogValue>,
    pub classification: Classification,
    pub witness: Option<String>,
}

impl EntropyEstimate {
    pub fn value(&self) -> LogValue {
        self.classification.value()
    }

    /// Promote a heuristic exact result using a closed form the caller has
    /// proved; the value must match what the detector found.
    pub fn certify(&mut self, reason: &str, expected: &LogValue) -> bool {
        let ok = match &self.classification {
            Classification::Exact { value, .. } | Classification::ExactHeuristic { value, .. } => value == expected,
            _ => false,
        };
        if ok {
            self.classification = Classification::Exact { value: expected.clone(), rule: ExactRule::Certified(reason.into()) };
        }
        ok
    }

    pub fn exact_value(&self) -> Option<&LogValue> {
        match &self.classification {
            Classification::Exact { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Flags the estimator needs besides the sequence itself.
#[derive(Clone, Copy, Debug, Default)]
pub struct EstimatorFlags {
    pub carrier: CarrierFlags,
    pub contractive: bool,
}

/// Classifies `c_1, …, c_N`.
///
/// Order of rules: constant difference over the last `window` steps, then
/// affine recurrence of `M_n = e^{c_n}` with ratio > 1, then the Fekete bound
/// (subadditive carrier and contractive flow, so `c_n` is subadditive), then
/// a least-squares slope over the last half.
pub fn estimate_entropy(c: &[LogValue], flags: EstimatorFlags, window: usize) -> EntropyEstimate {
    assert!(!c.is_empty(), "empty norm sequence");
    let classification = classify(c, flags, window.max(1));
    EntropyEstimate { c: c.to_vec(), classification, witness: None }
}

fn classify(c: &[LogValue], flags: EstimatorFlags, w: usize) -> Classification {
    let n = c.len();
    let wrap = |value: LogValue, rule: ExactRule| {
        if flags.carrier.structured {
            Classification::Exact { value, rule }
        } else {
            Classification::ExactHeuristic { value, rule }
        }
    };
    if c[n - 1].is_infinite() {
        return wrap(LogValue::Infinite, ExactRule::InfiniteNorm);
    }
    if n > w {
        if let Some((d, from)) = constant_difference(c, w) {
            let rule = if d.is_zero() {
                ExactRule::EventuallyConstant { from }
            } else {
                ExactRule::ConstantDifference { from }
            };
            return wrap(d, rule);
        }
    }
    if n > w + 1 {
        if let Some((a, b, from)) = affine_recurrence(c, w) {
            let value = LogValue::ln_ratio(&a);
            return wrap(value, ExactRule::AffineRecurrence { a, b, from });
        }
    }
    if n == 1 {
        let v = c[0].to_f64();
        return Classification::Numeric { value: v, window_slope: v, residual: f64::INFINITY };
    }
    if flags.carrier.subadditive && flags.contractive {
        let (value, at) = fekete_bound(c);
        return Classification::FeketeUpperBound { value, at };
    }
    let (slope, residual) = least_squares_tail(c);
    let k = w.min(n - 1);
    let window_slope = (c[n - 1].to_f64() - c[n - 1 - k].to_f64()) / k as f64;
    Classification::Numeric { value: slope, window_slope, residual }
}

fn constant_difference(c: &[LogValue], w: usize) -> Option<(LogValue, usize)> {
    let n = c.len();
    let d = c[n - 1].sub(&c[n - 2])?;
    if !d.is_exact() {
        return None;
    }
    let mut from = n - 2;
    // extend backwards as far as the difference persists
    while from > 0 {
        match c[from].sub(&c[from - 1]) {
            Some(e) if e == d => from -= 1,
            _ => break,
        }
    }
    if n - 1 - from >= w {
        Some((d, from + 1))
    } else {
        None
    }
}

fn affine_recurrence(c: &[LogValue], w: usize) -> Option<(BigRational, BigRational, usize)> {
    let n = c.len();
    let start = n - (w + 2);
    let m: Vec<BigRational> = c[start..].iter().map(|v| v.exact()?.exp_rational()).collect::<Option<_>>()?;
    let d0 = &m[1] - &m[0];
    if d0.is_zero() {
        return None;
    }
    let a = (&m[2] - &m[1]) / &d0;
    if a <= BigRational::one() {
        return None;
    }
    let b = &m[1] - &a * &m[0];
    for i in 0..m.len() - 1 {
        if m[i + 1] != &a * &m[i] + &b {
            return None;
        }
    }
    // positive leading coefficient: M_n − b/(1−a) must be positive
    let fixed = &b / (BigRational::one() - &a);
    if (&m[0] - fixed).is_positive() {
        Some((a, b, start + 1))
    } else {
        None
    }
}

/// `min_{n ≤ N} c_n / n` and the index attaining it.
pub fn fekete_bound(c: &[LogValue]) -> (LogValue, usize) {
    let mut best = c[0].clone();
    let mut at = 1;
    for (i, v) in c.iter().enumerate().skip(1) {
        let q = v.div_int(i as u64 + 1);
        if q < best {
            best = q;
            at = i + 1;
        }
    }
    (best, at)
}

fn least_squares_tail(c: &[LogValue]) -> (f64, f64) {
    let n = c.len();
    let start = n / 2;
    let pts: Vec<(f64, f64)> = (start..n).map(|i| ((i + 1) as f64, c[i].to_f64())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| { let r = p.1 - slope * p.0 - icpt; r * r }).sum();
    (slope, libm::sqrt(rss / k))
}

/// First `(k, m)`, `k > m ≥ 0`, with `φ^k(x) = φ^m(x)`, searching `k ≤ limit`.
pub fn quasi_periodic_certificate<F: Flow>(flow: &F, x: &ElemOf<F>, limit: usize) -> Result<Option<(usize, usize)>> {
    let mut seen: alloc::collections::BTreeMap<ElemOf<F>, usize> = alloc::collections::BTreeMap::new();
    let mut p = x.clone();
    seen.insert(p.clone(), 0);
    for k in 1..=limit {
        p = flow.apply(&p)?;
        if let Some(&m) = seen.get(&p) {
            return Ok(Some((k, m)));
        }
        seen.insert(p.clone(), k);
    }
    Ok(None)
}

/// How far a reported sup can be trusted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Sup over the supplied witnesses only.
    WitnessRestricted,
    /// The witnesses are cofinal for the stated reason, so the value is the
    /// entropy of the flow.
    Certified(String),
    /// Per-witness values are unbounded for the stated reason; the entropy is ∞.
    Unbounded(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    pub estimate: EntropyEstimate,
    pub per_witness: Vec<EntropyEstimate>,
    pub scope: Scope,
}

impl EntropyReport {
    pub fn value(&self) -> LogValue {
        match self.scope {
            Scope::Unbounded(_) => LogValue::Infinite,
            _ => self.estimate.value(),
        }
    }

    pub fn witness_restricted(&self) -> bool {
        self.scope == Scope::WitnessRestricted
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.scope, Scope::Unbounded(_)) || self.estimate.classification.is_exact()
    }

    pub fn certify(mut self, reason: &str) -> Self {
        self.scope = Scope::Certified(reason.into());
        self
    }

    pub fn unbounded(mut self, reason: &str) -> Self {
        self.scope = Scope::Unbounded(reason.into());
        self
    }

    /// Apply [`EntropyEstimate::certify`] to every witness and re-aggregate.
    pub fn certify_witnesses(mut self, reason: &str, expected: impl Fn(usize) -> LogValue) -> Result<Self> {
        for (i, e) in self.per_witness.iter_mut().enumerate() {
            let want = expected(i);
            if !e.certify(reason, &want) {
                return Err(Error::Invalid(format!(
                    "closed form {} disagrees with detected growth for witness {}",
                    want,
                    e.witness.clone().unwrap_or_default()
                )));
            }
        }
        self.estimate = aggregate(&self.per_witness);
        Ok(self)
    }
}

/// Sup of per-witness estimates; the weakest classification wins the tag.
pub fn aggregate(per: &[EntropyEstimate]) -> EntropyEstimate {
    let mut best = per[0].clone();
    for e in &per[1..] {
        let rank = e.classification.rank().max(best.classification.rank());
        let pick_e = e.value() > best.value();
        let mut chosen = if pick_e { e.clone() } else { best.clone() };
        if chosen.classification.rank() < rank {
            let value = chosen.value();
            chosen.classification = match rank {
                1 => Classification::ExactHeuristic { value, rule: rule_of(&chosen.classification) },
                2 => Classification::FeketeUpperBound { value, at: 0 },
                _ => Classification::Numeric { value: value.to_f64(), window_slope: f64::NAN, residual: f64::NAN },
            };
        }
        best = chosen;
    }
    best
}

fn rule_of(c: &Classification) -> ExactRule {
    match c {
        Classification::Exact { rule, .. } | Classification::ExactHeuristic { rule, .. } => rule.clone(),
        _ => ExactRule::Certified("aggregate".into()),
    }
}

fn estimator_flags<F: Flow>(flow: &F) -> EstimatorFlags {
    EstimatorFlags { carrier: flow.carrier().flags(), contractive: flow.contractive() }
}

fn per_witness<F: Flow>(flow: &F, x: &ElemOf<F>, cfg: &EntropyConfig, side: Side) -> Result<EntropyEstimate> {
    let c = trajectory_norms(flow, x, cfg.n_max, side, &cfg.budget)?;
    let flags = estimator_flags(flow);
    let mut e = estimate_entropy(&c, flags, cfg.window);
    e.witness = Some(format!("{:?}", x));
    if flags.carrier.subadditive && flags.carrier.arithmetic {
        if let Some((k, m)) = quasi_periodic_certificate(flow, x, cfg.n_max)? {
            e.classification = Classification::Exact { value: LogValue::zero(), rule: ExactRule::QuasiPeriodic { k, m } };
        }
    }
    Ok(e)
}

/// `h_S(φ)` restricted to `witnesses` (right trajectories).
pub fn semigroup_entropy<F: Flow>(flow: &F, witnesses: &[ElemOf<F>], cfg: &EntropyConfig) -> Result<EntropyReport> {
    entropy_on_side(flow, witnesses, cfg, Side::Right)
}

/// `h_S^#(φ)` restricted to `witnesses` (left trajectories).
pub fn left_entropy<F: Flow>(flow: &F, witnesses: &[ElemOf<F>], cfg: &EntropyConfig) -> Result<EntropyReport> {
    entropy_on_side(flow, witnesses, cfg, Side::Left)
}

pub fn entropy_on_side<F: Flow>(flow: &F, witnesses: &[ElemOf<F>], cfg: &EntropyConfig, side: Side) -> Result<EntropyReport> {
    if witnesses.is_empty() {
        return Err(Error::Invalid("witness set is empty".into()));
    }
    let per = witnesses.iter().map(|x| per_witness(flow, x, cfg, side)).collect::<Result<Vec<_>>>()?;
    Ok(EntropyReport { estimate: aggregate(&per), per_witness: per, scope: Scope::WitnessRestricted })
}

/// `φ^k` as a flow on the same carrier.
pub struct Power<'a, F: Flow> {
    pub base: &'a F,
    pub k: usize,
}

impl<F: Flow> Flow for Power<'_, F> {
    type C = F::C;

    fn carrier(&self) -> &F::C {
        self.base.carrier()
    }

    fn apply(&self, x: &ElemOf<F>) -> Result<ElemOf<F>> {
        let mut y = x.clone();
        for _ in 0..self.k {
            y = self.base.apply(&y)?;
        }
        Ok(y)
    }

    fn contractive(&self) -> bool {
        self.base.contractive()
    }
}

/// Rational from a small integer pair.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer part of a non-negative rational, for display.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
