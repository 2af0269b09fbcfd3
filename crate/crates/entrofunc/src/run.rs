//! Evaluation of flow specs, law checks and bridge cases.

use std::collections::BTreeSet;

use entrofunc_core::abelian::{ent_dim, ent_finite, ent_star_finite, CoSubFlow, SubFlow};
use entrofunc_core::bridge::{run_bridge, BridgeVerdict};
use entrofunc_core::logvalue::LogValue;
use entrofunc_core::measure::h_mes;
use entrofunc_core::semigroup::carriers::{
    bernoulli_entropy, index_shift_entropy, rho_entropy, BernoulliShift, DirectSum, FreeSemigroup, IndexShift, NatNorm,
    Naturals, Rho, WordNorm,
};
use entrofunc_core::semigroup::laws::{coproduct_sum, log_law, product_max, LawStatus, LawVerdict};
use entrofunc_core::semigroup::{
    entropy_on_side, fekete_bound, quasi_periodic_certificate, semigroup_entropy, trajectory_norms, Classification,
    ElemOf, EntropyConfig, EntropyEstimate, EntropyReport, Flow, Carrier, Scope, Side,
};
use entrofunc_core::sets::{
    contravariant_entropy, covariant_entropy, subset, ContraVariant, CovariantMode, FiniteSubset, ImageFlow, PreimageFlow,
    SelfmapGraph,
};
use entrofunc_core::shift::{h_alg_sigma_oplus, h_alg_tau, h_top_sigma, sigma_oplus_witness, Direction, ShiftFlow};
use entrofunc_core::topo::{h_fin_top, h_fr, CoverFlow, FrameEndo, FrameFlow, Mask};

use crate::load;
use crate::spec::{
    AbelianFunctor, AbelianSpec, FlowSpec, FrameSpec, NatNormSpec, PartitionSpec, SelfmapSpec, SemigroupFlow,
    SemigroupSpec, SetMode, SetVariant, ShiftDirection, ShiftSide, ShiftSpec, SpaceSpec, SymbolicSpec, TrajectorySide,
    WordNormSpec,
};
use crate::CliError;

type R<T> = Result<T, CliError>;

/// An entropy report together with what was computed and readable witness
/// labels, in the order of `report.per_witness`.
#[derive(Clone, Debug)]
pub struct Computed {
    pub quantity: &'static str,
    pub report: EntropyReport,
    pub labels: Vec<String>,
}

fn labelled(quantity: &'static str, report: EntropyReport, labels: Vec<String>) -> Computed {
    let labels = if labels.len() == report.per_witness.len() {
        labels
    } else {
        report.per_witness.iter().map(|e| e.witness.clone().unwrap_or_default()).collect()
    };
    Computed { quantity, report, labels }
}

/// Evaluates a flow spec.  With `trajectories` set, closed-form modes are
/// replaced by their trajectory counterparts so every witness has a `c_n`
/// table.
pub fn entropy(spec: &FlowSpec, cfg: &EntropyConfig, trajectories: bool) -> R<Computed> {
    match spec {
        FlowSpec::Semigroup(s) => semigroup(s, cfg),
        FlowSpec::Selfmap(s) => selfmap(s, cfg, trajectories),
        FlowSpec::FiniteAbelian(s) => abelian(s, cfg, trajectories),
        FlowSpec::Shift(s) => shift(s, cfg),
        FlowSpec::Space(s) => space(s, cfg),
        FlowSpec::Frame(s) => frame(s, cfg),
        FlowSpec::Symbolic(s) => symbolic(s, cfg),
    }
}

fn nat_norm(n: &NatNormSpec) -> R<NatNorm> {
    Ok(match n {
        NatNormSpec::Identity => NatNorm::Identity,
        NatNormSpec::Log => NatNorm::Log,
        NatNormSpec::Power(p) => NatNorm::Power(p.0.clone()),
        NatNormSpec::Periodic(0) => return Err(CliError::spec("periodic norm needs a positive modulus")),
        NatNormSpec::Periodic(a) => NatNorm::Periodic(*a),
    })
}

fn word_norm(n: WordNormSpec) -> WordNorm {
    match n {
        WordNormSpec::Ascents => WordNorm::Ascents,
        WordNormSpec::Runs => WordNorm::Runs,
    }
}

fn side(s: TrajectorySide) -> Side {
    match s {
        TrajectorySide::Right => Side::Right,
        TrajectorySide::Left => Side::Left,
    }
}

fn json_witnesses<T: serde::de::DeserializeOwned>(ws: &[serde_json::Value]) -> R<Vec<T>> {
    ws.iter()
        .map(|w| serde_json::from_value(w.clone()).map_err(|e| CliError::spec(format!("witness {w}: {e}"))))
        .collect()
}

fn rho(a: u64, norm: &NatNormSpec) -> R<Rho> {
    Ok(Rho { carrier: Naturals::new(nat_norm(norm)?), a })
}

fn nat_witnesses(ws: &[serde_json::Value]) -> R<Vec<num_bigint::BigUint>> {
    if ws.is_empty() {
        return Ok(vec![1u32.into()]);
    }
    ws.iter().map(load::natural).collect()
}

fn word_witnesses(ws: &[serde_json::Value]) -> R<Vec<Vec<i64>>> {
    if ws.is_empty() {
        return Ok(vec![vec![0]]);
    }
    let v: Vec<Vec<i64>> = json_witnesses(ws)?;
    if v.iter().any(Vec::is_empty) {
        return Err(CliError::spec("words must be non-empty"));
    }
    Ok(v)
}

fn bernoulli_shift(monoid: &crate::spec::MonoidSpec, dir: ShiftSide) -> R<BernoulliShift> {
    Ok(BernoulliShift { carrier: DirectSum::new(load::monoid(monoid)?), right: dir == ShiftSide::Right })
}

fn coordinate_witnesses(b: &BernoulliShift, ws: &[serde_json::Value]) -> R<Vec<Vec<usize>>> {
    let m = &b.carrier.monoid;
    if ws.is_empty() {
        return Ok((0..m.len()).map(|x| b.carrier.single(x)).collect());
    }
    let v: Vec<Vec<usize>> = json_witnesses(ws)?;
    if v.iter().flatten().any(|&x| x >= m.len()) {
        return Err(CliError::spec("coordinate outside the monoid"));
    }
    Ok(v.into_iter()
        .map(|mut w| {
            while w.last() == Some(&m.identity) {
                w.pop();
            }
            w
        })
        .collect())
}

fn semigroup(s: &SemigroupSpec, cfg: &EntropyConfig) -> R<Computed> {
    let sd = side(s.side);
    match &s.flow {
        SemigroupFlow::Rho { a, norm } => {
            let f = rho(*a, norm)?;
            let ws = nat_witnesses(&s.witnesses)?;
            let labels = ws.iter().map(|w| w.to_string()).collect();
            let r = if sd == Side::Right { rho_entropy(&f, &ws, cfg)? } else { entropy_on_side(&f, &ws, cfg, sd)? };
            Ok(labelled("h_S", r, labels))
        }
        SemigroupFlow::IndexShift { step, norm } => {
            let f = IndexShift { carrier: FreeSemigroup { norm: word_norm(*norm) }, step: *step };
            let ws = word_witnesses(&s.witnesses)?;
            let labels = ws.iter().map(|w| format!("{w:?}")).collect();
            let q = if sd == Side::Right { "h_S" } else { "h_S_left" };
            Ok(labelled(q, index_shift_entropy(&f, &ws, sd, cfg)?, labels))
        }
        SemigroupFlow::Bernoulli { monoid, direction } => {
            let f = bernoulli_shift(monoid, *direction)?;
            let names = f.carrier.monoid.names.clone();
            if s.witnesses.is_empty() && sd == Side::Right {
                let labels = names.iter().map(|n| format!("({n})")).collect();
                return Ok(labelled("h_S", bernoulli_entropy(&f, cfg)?, labels));
            }
            let ws = coordinate_witnesses(&f, &s.witnesses)?;
            let labels = ws.iter().map(|w| format!("({})", w.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(", "))).collect();
            Ok(labelled("h_S", entropy_on_side(&f, &ws, cfg, sd)?, labels))
        }
    }
}

fn set_witnesses(g: &SelfmapGraph, ws: &[Vec<String>], default: FiniteSubset) -> R<Vec<FiniteSubset>> {
    if ws.is_empty() {
        return Ok(vec![default]);
    }
    ws.iter().map(|w| load::vertex_set(g, w)).collect()
}

fn selfmap(s: &SelfmapSpec, cfg: &EntropyConfig, trajectories: bool) -> R<Computed> {
    let g = load::graph(&s.graph)?;
    let ws = set_witnesses(&g, &s.witnesses, g.canonical_witness())?;
    let labels: Vec<String> = ws.iter().map(|w| load::render_set(&g, w)).collect();
    let structural = s.mode == SetMode::Structural && !trajectories;
    Ok(match s.variant {
        SetVariant::H => {
            let mode = if structural { CovariantMode::ExactStructural } else { CovariantMode::Trajectory };
            let r = covariant_entropy(&g, &ws, mode, cfg)?;
            labelled("h_set", r, if structural { vec!["forward rays".into()] } else { labels })
        }
        SetVariant::Star | SetVariant::StarP => {
            let variant = if s.variant == SetVariant::Star { ContraVariant::Star } else { ContraVariant::StarP };
            let q = if variant == ContraVariant::Star { "h_set_star" } else { "h_set_star_p" };
            if structural {
                if !g.finite_to_one() {
                    return Err(CliError::spec("the contravariant entropy needs a finite-to-one map"));
                }
                let v = entrofunc_core::sets::structural_star(&g);
                return Ok(labelled(q, closed_form(v, "anti-rays"), vec!["anti-rays".into()]));
            }
            labelled(q, contravariant_entropy(&g, &ws, variant, cfg)?, labels)
        }
    })
}

fn closed_form(v: LogValue, why: &str) -> EntropyReport {
    let e = EntropyEstimate {
        c: Vec::new(),
        classification: Classification::Exact {
            value: v,
            rule: entrofunc_core::semigroup::ExactRule::Certified(why.into()),
        },
        witness: Some(why.into()),
    };
    EntropyReport { estimate: e.clone(), per_witness: vec![e], scope: Scope::Certified(why.into()) }
}

fn estimate_report(mut e: EntropyEstimate, why: &str) -> EntropyReport {
    e.witness = Some(why.into());
    EntropyReport { estimate: e.clone(), per_witness: vec![e], scope: Scope::Certified(why.into()) }
}

fn abelian(s: &AbelianSpec, cfg: &EntropyConfig, trajectories: bool) -> R<Computed> {
    let g = load::group(&s.group)?;
    let phi = load::endomorphism(&g, &s.matrix)?;
    let functor = match s.functor {
        AbelianFunctor::Ent if trajectories => AbelianFunctor::Sub,
        AbelianFunctor::EntStar if trajectories => AbelianFunctor::CoSub,
        f => f,
    };
    let subgroups = |default| -> R<Vec<_>> {
        if s.witnesses.is_empty() {
            return Ok(vec![default]);
        }
        s.witnesses.iter().map(|w| load::subgroup(&g, w)).collect()
    };
    Ok(match functor {
        AbelianFunctor::Sub => {
            let ws = subgroups(g.whole())?;
            let labels = ws.iter().map(|n| n.to_string()).collect();
            labelled("h_sub", semigroup_entropy(&SubFlow::new(phi), &ws, cfg)?, labels)
        }
        AbelianFunctor::CoSub => {
            let ws = subgroups(g.trivial_subgroup())?;
            let labels = ws.iter().map(|n| n.to_string()).collect();
            labelled("h_sub_star", semigroup_entropy(&CoSubFlow::new(phi), &ws, cfg)?, labels)
        }
        AbelianFunctor::Ent => labelled("ent", estimate_report(ent_finite(&phi)?, "finite group"), vec!["finite group".into()]),
        AbelianFunctor::EntStar => {
            labelled("ent_star", estimate_report(ent_star_finite(&phi)?, "finite group"), vec!["finite group".into()])
        }
        AbelianFunctor::EntDim => labelled("ent_dim", estimate_report(ent_dim(&phi)?, "finite group"), vec!["finite group".into()]),
    })
}

fn shift(s: &ShiftSpec, cfg: &EntropyConfig) -> R<Computed> {
    let g = load::graph(&s.graph)?;
    let k = load::group(&s.group)?;
    let (dir, default) = match s.direction {
        ShiftDirection::Forward => (Direction::Forward, g.canonical_witness()),
        ShiftDirection::Backward => (Direction::Backward, g.canonical_witness()),
        ShiftDirection::BackwardRestricted => (Direction::BackwardRestricted, sigma_oplus_witness(&g)),
    };
    let ws = set_witnesses(&g, &s.witnesses, default)?;
    let labels: Vec<String> = ws.iter().map(|w| load::render_set(&g, w)).collect();
    let flow = ShiftFlow::new(k, g, dir)?;
    Ok(match dir {
        Direction::Forward => labelled("h_alg_tau", h_alg_tau(&flow, &ws, cfg)?, labels),
        Direction::Backward => labelled("h_top_sigma", h_top_sigma(&flow, &ws, cfg)?, labels),
        Direction::BackwardRestricted => labelled("h_alg_sigma_oplus", h_alg_sigma_oplus(&flow, &ws, cfg)?, labels),
    })
}

fn space(s: &SpaceSpec, cfg: &EntropyConfig) -> R<Computed> {
    let sp = load::space(&s.points, &s.order_pairs)?;
    let phi = load::map(&sp, &s.map)?;
    let covers = if s.witnesses.is_empty() {
        vec![load::cover(&sp, &[])?]
    } else {
        s.witnesses.iter().map(|c| load::cover(&sp, c)).collect::<R<Vec<_>>>()?
    };
    let labels = covers.iter().map(|c| load::render_cover(sp.names(), c.members())).collect();
    Ok(labelled("h_fin_top", h_fin_top(&sp, &phi, &covers, cfg)?, labels))
}

fn frame_endo(s: &FrameSpec) -> R<(FrameEndo, Vec<Vec<Mask>>)> {
    let fr = load::frame(&s.irreducibles, &s.order_pairs)?;
    if s.images.len() != s.irreducibles.len() {
        return Err(CliError::spec("one image per irreducible is required"));
    }
    let images = s.images.iter().map(|im| load::frame_element(&fr, &s.irreducibles, im)).collect::<R<Vec<_>>>()?;
    let covers = if s.witnesses.is_empty() {
        vec![(0..fr.irreducibles()).map(|j| fr.irreducible(j)).collect::<BTreeSet<_>>().into_iter().collect()]
    } else {
        s.witnesses
            .iter()
            .map(|c| {
                let set = c.iter().map(|m| load::frame_element(&fr, &s.irreducibles, m)).collect::<R<BTreeSet<_>>>()?;
                Ok(set.into_iter().collect())
            })
            .collect::<R<Vec<Vec<Mask>>>>()?
    };
    Ok((FrameEndo::new(fr, images)?, covers))
}

fn frame(s: &FrameSpec, cfg: &EntropyConfig) -> R<Computed> {
    let (endo, covers) = frame_endo(s)?;
    let labels = covers.iter().map(|c| load::render_cover(&s.irreducibles, c)).collect();
    Ok(labelled("h_fr", h_fr(&endo, &covers, cfg)?, labels))
}

fn partitions(s: &SymbolicSpec, alphabet: usize) -> R<Vec<entrofunc_core::measure::Partition>> {
    if s.witnesses.is_empty() {
        return Ok(vec![load::partition(alphabet, &PartitionSpec::Cylinders(1))?]);
    }
    s.witnesses.iter().map(|p| load::partition(alphabet, p)).collect()
}

fn symbolic(s: &SymbolicSpec, cfg: &EntropyConfig) -> R<Computed> {
    let sys = load::system(&s.system)?;
    let ps = partitions(s, sys.alphabet())?;
    let labels = s
        .witnesses
        .iter()
        .map(|p| match p {
            PartitionSpec::Cylinders(d) => format!("cylinders of length {d}"),
            PartitionSpec::Labeled(l) => format!("labeled partition of depth {}", l.depth),
        })
        .collect::<Vec<_>>();
    let labels = if labels.is_empty() { vec!["cylinders of length 1".into()] } else { labels };
    Ok(labelled("h_mes", h_mes(&sys, &ps, cfg)?, labels))
}

// ---- law checks ----

/// Generic code run on the concrete flow behind a spec.
pub trait Visit {
    type Out;
    fn visit<F: Flow>(self, flow: &F, witnesses: &[ElemOf<F>]) -> R<Self::Out>;
}

/// Builds the normed-semigroup flow of `spec` and hands it to `v`.  Kinds
/// whose entropy is computed from closed formulas have no flow object.
pub fn with_flow<V: Visit>(spec: &FlowSpec, v: V) -> R<V::Out> {
    match spec {
        FlowSpec::Semigroup(s) => {
            if s.side == TrajectorySide::Left {
                return Err(CliError::spec("law checks use right trajectories"));
            }
            match &s.flow {
                SemigroupFlow::Rho { a, norm } => v.visit(&rho(*a, norm)?, &nat_witnesses(&s.witnesses)?),
                SemigroupFlow::IndexShift { step, norm } => {
                    let f = IndexShift { carrier: FreeSemigroup { norm: word_norm(*norm) }, step: *step };
                    v.visit(&f, &word_witnesses(&s.witnesses)?)
                }
                SemigroupFlow::Bernoulli { monoid, direction } => {
                    let f = bernoulli_shift(monoid, *direction)?;
                    let ws = coordinate_witnesses(&f, &s.witnesses)?;
                    v.visit(&f, &ws)
                }
            }
        }
        FlowSpec::Selfmap(s) => {
            let g = load::graph(&s.graph)?;
            let ws = set_witnesses(&g, &s.witnesses, g.canonical_witness())?;
            match s.variant {
                SetVariant::H => v.visit(&ImageFlow { graph: &g }, &ws),
                SetVariant::Star => {
                    if !g.finite_to_one() {
                        return Err(CliError::spec("the contravariant entropy needs a finite-to-one map"));
                    }
                    v.visit(&PreimageFlow { graph: &g }, &ws)
                }
                SetVariant::StarP => {
                    if !g.finite_to_one() {
                        return Err(CliError::spec("the contravariant entropy needs a finite-to-one map"));
                    }
                    let sc = g.surjective_core();
                    let ws: Vec<FiniteSubset> = ws.iter().map(|w| subset(w.iter().filter_map(|&x| sc.from_old(x)))).collect();
                    v.visit(&PreimageFlow { graph: &sc.graph }, &ws)
                }
            }
        }
        FlowSpec::FiniteAbelian(s) => {
            let g = load::group(&s.group)?;
            let phi = load::endomorphism(&g, &s.matrix)?;
            let ws = |default| -> R<Vec<_>> {
                if s.witnesses.is_empty() {
                    return Ok(vec![default]);
                }
                s.witnesses.iter().map(|w| load::subgroup(&g, w)).collect()
            };
            match s.functor {
                AbelianFunctor::Sub | AbelianFunctor::Ent | AbelianFunctor::EntDim => {
                    let w = ws(g.whole())?;
                    v.visit(&SubFlow::new(phi), &w)
                }
                AbelianFunctor::CoSub | AbelianFunctor::EntStar => {
                    let w = ws(g.trivial_subgroup())?;
                    v.visit(&CoSubFlow::new(phi), &w)
                }
            }
        }
        FlowSpec::Space(s) => {
            let sp = load::space(&s.points, &s.order_pairs)?;
            let phi = load::map(&sp, &s.map)?;
            let covers = if s.witnesses.is_empty() {
                vec![load::cover(&sp, &[])?]
            } else {
                s.witnesses.iter().map(|c| load::cover(&sp, c)).collect::<R<Vec<_>>>()?
            };
            let ws: Vec<Vec<Mask>> = covers.iter().map(|c| c.reduced().members().to_vec()).collect();
            v.visit(&CoverFlow::new(sp, phi)?, &ws)
        }
        FlowSpec::Frame(s) => {
            let (endo, covers) = frame_endo(s)?;
            v.visit(&FrameFlow::new(endo), &covers)
        }
        FlowSpec::Shift(_) | FlowSpec::Symbolic(_) => {
            Err(CliError::spec(format!("law checks are not available for {} specs", spec.kind())))
        }
    }
}

#[derive(Clone, Debug)]
pub enum Law {
    LogLaw(usize),
    ProductMax,
    CoproductSum,
    Fekete,
    QuasiPeriodic,
}

impl Law {
    pub fn parse(name: &str, k: usize) -> R<Law> {
        Ok(match name {
            "log_law" => Law::LogLaw(k),
            "product_max" => Law::ProductMax,
            "coproduct_sum" => Law::CoproductSum,
            "fekete" => Law::Fekete,
            "quasi_periodic" => Law::QuasiPeriodic,
            other => return Err(CliError::spec(format!("unknown law {other:?}"))),
        })
    }

    pub fn needs_partner(&self) -> bool {
        matches!(self, Law::ProductMax | Law::CoproductSum)
    }
}

/// Result of one law check.
#[derive(Clone, Debug)]
pub struct LawOutcome {
    pub law: String,
    pub status: LawStatus,
    pub lhs: Option<LogValue>,
    pub rhs: Option<LogValue>,
    /// Per-witness evidence, such as `(k, m)` certificates or Fekete bounds.
    pub details: Vec<serde_json::Value>,
}

impl LawOutcome {
    fn from_verdict(v: LawVerdict) -> Self {
        LawOutcome { law: v.law.clone(), status: v.status.clone(), lhs: v.lhs.as_ref().map(|r| r.value()), rhs: v.rhs.clone(), details: vec![] }
    }

    pub fn holds(&self) -> bool {
        self.status == LawStatus::Holds
    }
}

struct Single<'c> {
    law: Law,
    cfg: &'c EntropyConfig,
}

impl Visit for Single<'_> {
    type Out = LawOutcome;

    fn visit<F: Flow>(self, flow: &F, ws: &[ElemOf<F>]) -> R<LawOutcome> {
        match self.law {
            Law::LogLaw(k) => Ok(LawOutcome::from_verdict(log_law(flow, k, ws, self.cfg)?)),
            Law::Fekete => fekete_check(flow, ws, self.cfg),
            Law::QuasiPeriodic => qp_check(flow, ws, self.cfg),
            Law::ProductMax | Law::CoproductSum => Err(CliError::spec("this law needs a second spec (--with)")),
        }
    }
}

struct First<'a> {
    law: Law,
    cfg: &'a EntropyConfig,
    other: &'a FlowSpec,
}

struct Second<'a, F1: Flow> {
    law: Law,
    cfg: &'a EntropyConfig,
    f1: &'a F1,
    w1: &'a [ElemOf<F1>],
}

impl Visit for First<'_> {
    type Out = LawOutcome;

    fn visit<F: Flow>(self, flow: &F, ws: &[ElemOf<F>]) -> R<LawOutcome> {
        with_flow(self.other, Second { law: self.law, cfg: self.cfg, f1: flow, w1: ws })
    }
}

impl<F1: Flow> Visit for Second<'_, F1> {
    type Out = LawOutcome;

    fn visit<F: Flow>(self, flow: &F, ws: &[ElemOf<F>]) -> R<LawOutcome> {
        let v = match self.law {
            Law::ProductMax => product_max(self.f1, self.w1, flow, ws, self.cfg)?,
            _ => coproduct_sum(self.f1, self.w1, flow, ws, self.cfg)?,
        };
        Ok(LawOutcome::from_verdict(v))
    }
}

/// Running Fekete bound `min_{m ≤ n} c_m/m` against the exact value.
fn fekete_check<F: Flow>(flow: &F, ws: &[ElemOf<F>], cfg: &EntropyConfig) -> R<LawOutcome> {
    let law = String::from("fekete");
    if !(flow.carrier().flags().subadditive && flow.contractive()) {
        return Ok(LawOutcome {
            law,
            status: LawStatus::Inapplicable("needs a subadditive carrier and a contractive flow".into()),
            lhs: None,
            rhs: None,
            details: vec![],
        });
    }
    let report = semigroup_entropy(flow, ws, cfg)?;
    let mut ok = true;
    let mut details = Vec::new();
    for (x, e) in ws.iter().zip(&report.per_witness) {
        let c = trajectory_norms(flow, x, cfg.n_max, Side::Right, &cfg.budget)?;
        let bounds: Vec<LogValue> = (1..=c.len()).map(|n| fekete_bound(&c[..n]).0).collect();
        let monotone = bounds.windows(2).all(|p| p[1] <= p[0]);
        let above = match e.exact_value() {
            Some(h) => bounds.iter().all(|b| b >= h),
            None => true,
        };
        ok &= monotone && above;
        let (last, at) = fekete_bound(&c);
        details.push(serde_json::json!({
            "witness": e.witness.clone().unwrap_or_default(),
            "bound": crate::report::value_json(&last),
            "at": at,
            "monotone": monotone,
            "above_exact": above,
        }));
    }
    let rhs = report.estimate.exact_value().cloned();
    let bound = report.per_witness.iter().map(|e| fekete_bound(&e.c).0).max();
    let status = if !ok {
        LawStatus::Fails
    } else if rhs.is_some() {
        LawStatus::Holds
    } else {
        LawStatus::Inconclusive
    };
    Ok(LawOutcome { law, status, lhs: bound, rhs, details })
}

/// Quasi-periodicity certificates `φ^k(x) = φ^m(x)` and the exact-zero
/// classification they imply.
fn qp_check<F: Flow>(flow: &F, ws: &[ElemOf<F>], cfg: &EntropyConfig) -> R<LawOutcome> {
    let law = String::from("quasi_periodic");
    let flags = flow.carrier().flags();
    if !(flags.subadditive && flags.arithmetic) {
        return Ok(LawOutcome {
            law,
            status: LawStatus::Inapplicable("needs an arithmetic subadditive carrier".into()),
            lhs: None,
            rhs: None,
            details: vec![],
        });
    }
    let report = semigroup_entropy(flow, ws, cfg)?;
    let mut all = true;
    let mut details = Vec::new();
    for x in ws {
        match quasi_periodic_certificate(flow, x, cfg.n_max)? {
            Some((k, m)) => details.push(serde_json::json!({ "k": k, "m": m })),
            None => {
                all = false;
                details.push(serde_json::Value::Null);
            }
        }
    }
    let value = report.value();
    let status = if !all {
        LawStatus::Inconclusive
    } else if report.estimate.classification.is_exact() && value.is_zero() {
        LawStatus::Holds
    } else {
        LawStatus::Fails
    };
    Ok(LawOutcome { law, status, lhs: Some(value), rhs: Some(LogValue::zero()), details })
}

pub fn check_law(spec: &FlowSpec, law: Law, partner: Option<&FlowSpec>, cfg: &EntropyConfig) -> R<LawOutcome> {
    match (law.needs_partner(), partner) {
        (true, Some(other)) => with_flow(spec, First { law, cfg, other }),
        (true, None) => Err(CliError::spec("this law needs a second spec (--with)")),
        (false, _) => with_flow(spec, Single { law, cfg }),
    }
}

/// Runs a bridge case; `n_max` replaces the case's own step count.
pub fn bridge(case: &crate::spec::CaseSpec, n_max: Option<usize>, cfg: &EntropyConfig) -> R<BridgeVerdict> {
    let mut c = load::case(case)?;
    if let Some(n) = n_max {
        c.n_max = n;
    }
    Ok(run_bridge(&c, cfg)?)
}
