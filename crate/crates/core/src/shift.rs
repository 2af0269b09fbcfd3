//! Generalized shifts over a finite abelian group `K`, indexed by a
//! [`SelfmapGraph`] `λ: X → X`.
//!
//! * `τ_λ` on `K^(X)`: `(τf)(y) = Σ_{λ(x) = y} f(x)`;
//! * `σ_λ` on `K^X`: `σf = f∘λ`;
//! * `σ_λ^⊕`, the restriction of `σ_λ` to `K^(X)` (finite-to-one `λ`).
//!
//! Groups over an infinite `X` are never materialized.  Entropies use the
//! identities `T_n(τ_λ, K^(D)) = K^(𝔗_n(λ, D))` and
//! `C_n(σ_λ, η(F)) = η(𝔗_n(λ, F))`; the functions ending in `_orders` and
//! `_indices` recompute the same groups from the dynamics, so callers can
//! check the identities on any instance.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Pow;

use crate::abelian::{Element, Endomorphism, FiniteAbelianGroup};
use crate::error::{invalid, Error, Result};
use crate::logvalue::LogValue;
use crate::semigroup::{
    aggregate, estimate_entropy, CarrierFlags, EntropyConfig, EntropyEstimate, EntropyReport, EstimatorFlags, Scope,
};
use crate::sets::{cotrajectory_sizes, subset, trajectory_sizes, FiniteSubset, SelfmapGraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `σ_λ` on `K^X`.
    Backward,
    /// `τ_λ` on `K^(X)`.
    Forward,
    /// `σ_λ^⊕` on `K^(X)`.
    BackwardRestricted,
}

/// Finitely supported `f: X → K`; zero values are never stored.
pub type Config = BTreeMap<Vertex, Element>;

#[derive(Clone, Debug)]
pub struct ShiftFlow {
    pub base: FiniteAbelianGroup,
    pub graph: SelfmapGraph,
    pub direction: Direction,
}

impl ShiftFlow {
    pub fn new(base: FiniteAbelianGroup, graph: SelfmapGraph, direction: Direction) -> Result<Self> {
        if direction == Direction::BackwardRestricted && !graph.finite_to_one() {
            return Err(Error::NotFiniteToOne("K^(X) is σ-invariant only for finite-to-one λ".into()));
        }
        Ok(ShiftFlow { base, graph, direction })
    }

    fn expect(&self, d: Direction) -> Result<()> {
        if self.direction != d {
            return Err(invalid(format!("operation needs a {:?} shift, got {:?}", d, self.direction)));
        }
        Ok(())
    }

    fn ln_k(&self) -> LogValue {
        LogValue::ln_big(&self.base.order())
    }
}

/// Unit vectors of `K`, one per cyclic factor.
pub fn unit_elements(k: &FiniteAbelianGroup) -> Vec<Element> {
    (0..k.rank())
        .map(|j| {
            let mut e = k.zero();
            e[j] = 1;
            e
        })
        .collect()
}

fn insert_sum(k: &FiniteAbelianGroup, out: &mut Config, at: Vertex, v: &[u64]) {
    let cur = out.remove(&at).unwrap_or_else(|| k.zero());
    let s = k.add(&cur, v);
    if s.iter().any(|&x| x != 0) {
        out.insert(at, s);
    }
}

/// `τ` for an arbitrary map of points.
pub fn tau_apply_by(k: &FiniteAbelianGroup, lam: impl Fn(Vertex) -> Vertex, f: &Config) -> Config {
    let mut out = Config::new();
    for (&x, v) in f {
        insert_sum(k, &mut out, lam(x), v);
    }
    out
}

pub fn tau_apply(flow: &ShiftFlow, f: &Config) -> Result<Config> {
    flow.expect(Direction::Forward)?;
    Ok(tau_apply_by(&flow.base, |x| flow.graph.succ(x), f))
}

/// `f∘λ` on finitely supported `f`.  Defined for the restricted shift, and
/// for `σ_λ` itself whenever the result is again finitely supported.
pub fn sigma_oplus_apply(flow: &ShiftFlow, f: &Config) -> Result<Config> {
    if flow.direction == Direction::Forward {
        return Err(invalid("σ is not defined on a forward shift"));
    }
    let mut out = Config::new();
    for (&y, v) in f {
        for x in flow.graph.preimage(y)? {
            out.insert(x, v.clone());
        }
    }
    Ok(out)
}

fn check_subset(g: &SelfmapGraph, d: &FiniteSubset) -> Result<()> {
    if d.iter().any(|&v| !g.contains(v)) || d.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("witness must be a sorted subset of X"));
    }
    Ok(())
}

fn shift_flags() -> EstimatorFlags {
    EstimatorFlags {
        carrier: CarrierFlags {
            subadditive: true,
            arithmetic: true,
            monotone_norm: true,
            d_monotone: true,
            commutative: true,
            has_identity: true,
            structured: true,
        },
        contractive: true,
    }
}

fn report(per: Vec<EntropyEstimate>, certified: Option<&str>) -> EntropyReport {
    let scope = match certified {
        Some(r) => Scope::Certified(r.into()),
        None => Scope::WitnessRestricted,
    };
    EntropyReport { estimate: aggregate(&per), per_witness: per, scope }
}

fn scaled_estimate(sizes: &[u64], unit: &LogValue, cfg: &EntropyConfig, name: &str) -> EntropyEstimate {
    let c: Vec<LogValue> = sizes.iter().map(|&s| unit.scale(&crate::semigroup::ratio(s as i64, 1))).collect();
    let mut e = estimate_entropy(&c, shift_flags(), cfg.window);
    e.witness = Some(name.into());
    e
}

fn covers(ws: &[FiniteSubset], canon: &FiniteSubset) -> bool {
    ws.iter().any(|w| canon.iter().all(|v| w.binary_search(v).is_ok()))
}

/// `h_alg(τ_λ)` over `K^(D)` for each witness `D`:
/// `c_n = |𝔗_n(λ, D)|·log|K|`.
pub fn h_alg_tau(flow: &ShiftFlow, witnesses: &[FiniteSubset], cfg: &EntropyConfig) -> Result<EntropyReport> {
    flow.expect(Direction::Forward)?;
    set_scaled(flow, witnesses, cfg, "K^(D)")
}

/// `h_top(σ_λ)` over the basic open subgroups `η(F)`:
/// `c_n = log[K^X : C_n] = |𝔗_n(λ, F)|·log|K|`.
pub fn h_top_sigma(flow: &ShiftFlow, witnesses: &[FiniteSubset], cfg: &EntropyConfig) -> Result<EntropyReport> {
    flow.expect(Direction::Backward)?;
    set_scaled(flow, witnesses, cfg, "eta(F)")
}

fn set_scaled(flow: &ShiftFlow, witnesses: &[FiniteSubset], cfg: &EntropyConfig, what: &str) -> Result<EntropyReport> {
    if witnesses.is_empty() {
        return Err(invalid("witness set is empty"));
    }
    let unit = flow.ln_k();
    let mut per = Vec::new();
    for d in witnesses {
        check_subset(&flow.graph, d)?;
        let sizes = trajectory_sizes(&flow.graph, d, cfg.n_max);
        per.push(scaled_estimate(&sizes, &unit, cfg, &format!("{what}, |D| = {}", d.len())));
    }
    let canon = flow.graph.canonical_witness();
    Ok(report(per, covers(witnesses, &canon).then_some("witness contains core and every ray base")))
}

/// Subgroup generated by `gens` inside `K^S`, `S` the union of supports.
fn config_group_order(k: &FiniteAbelianGroup, gens: &[Config]) -> Result<BigUint> {
    let support: Vec<Vertex> = gens.iter().flat_map(|f| f.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    if support.is_empty() {
        return Ok(BigUint::from(1u32));
    }
    let ks = k.power(support.len())?;
    let zero = k.zero();
    let rows: Vec<Element> = gens
        .iter()
        .map(|f| support.iter().flat_map(|v| f.get(v).unwrap_or(&zero).iter().copied()).collect())
        .collect();
    Ok(ks.subgroup(&rows)?.order())
}

/// `|T_n(τ_λ, K^(D))|` from `τ` itself: the subgroup generated by
/// `τ^i(k·e_d)`, `i < n`, inside `K^S` for the finite support `S`.
pub fn tau_trajectory_orders(flow: &ShiftFlow, d: &FiniteSubset, n_max: usize) -> Result<Vec<BigUint>> {
    flow.expect(Direction::Forward)?;
    let mut layer: Vec<Config> =
        d.iter().flat_map(|&v| unit_elements(&flow.base).into_iter().map(move |e| Config::from([(v, e)]))).collect();
    let mut gens = Vec::new();
    let mut out = Vec::new();
    for _ in 0..n_max {
        gens.extend(layer.iter().cloned());
        out.push(config_group_order(&flow.base, &gens)?);
        layer = layer.iter().map(|f| tau_apply(flow, f)).collect::<Result<_>>()?;
    }
    Ok(out)
}

/// `[K^X : C_n(σ_λ, η(F))]` from the evaluation map
/// `f ↦ ((σ^i f)(x))_{i < n, x ∈ F}`: its kernel is `C_n`, so the index is
/// the order of its image, generated by the images of `k·e_v`.
pub fn sigma_cotrajectory_indices(flow: &ShiftFlow, f: &FiniteSubset, n_max: usize) -> Result<Vec<BigUint>> {
    flow.expect(Direction::Backward)?;
    let k = &flow.base;
    let r = k.rank();
    let mut out = Vec::new();
    for n in 1..=n_max {
        // orbit points λ^i(x) for the evaluation coordinates (i, x)
        let mut coords: Vec<Vertex> = Vec::with_capacity(n * f.len());
        for &x in f {
            let mut y = x;
            for _ in 0..n {
                coords.push(y);
                y = flow.graph.succ(y);
            }
        }
        let points: BTreeSet<Vertex> = coords.iter().copied().collect();
        let target = k.power(coords.len())?;
        let mut rows = Vec::new();
        for &v in &points {
            for j in 0..r {
                let mut row = target.zero();
                for (c, &y) in coords.iter().enumerate() {
                    if y == v {
                        row[c * r + j] = 1;
                    }
                }
                rows.push(row);
            }
        }
        out.push(if rows.is_empty() { BigUint::from(1u32) } else { target.subgroup(&rows)?.order() });
    }
    Ok(out)
}

/// `|T_n(σ_λ^⊕, K^(D))|`, `n = 1..=n_max`, by subgroup generation.
pub fn sigma_oplus_trajectory_orders(flow: &ShiftFlow, d: &FiniteSubset, n_max: usize) -> Result<Vec<BigUint>> {
    flow.expect(Direction::BackwardRestricted)?;
    let mut layer: Vec<Config> =
        d.iter().flat_map(|&v| unit_elements(&flow.base).into_iter().map(move |e| Config::from([(v, e)]))).collect();
    let mut gens = Vec::new();
    let mut out = Vec::new();
    for _ in 0..n_max {
        gens.extend(layer.iter().cloned());
        out.push(config_group_order(&flow.base, &gens)?);
        layer = layer.iter().map(|f| sigma_oplus_apply(flow, f)).collect::<Result<_>>()?;
    }
    Ok(out)
}

/// `h_alg(σ_λ^⊕)` over `K^(D)`, from explicit subgroup orders.  When a
/// witness contains the canonical witness of `sc(λ)` the value is checked
/// against `𝔥ₚ*(λ)·log|K|` and certified.
pub fn h_alg_sigma_oplus(flow: &ShiftFlow, witnesses: &[FiniteSubset], cfg: &EntropyConfig) -> Result<EntropyReport> {
    flow.expect(Direction::BackwardRestricted)?;
    if witnesses.is_empty() {
        return Err(invalid("witness set is empty"));
    }
    let mut per = Vec::new();
    for d in witnesses {
        check_subset(&flow.graph, d)?;
        let orders = sigma_oplus_trajectory_orders(flow, d, cfg.n_max)?;
        let c: Vec<LogValue> = orders.iter().map(LogValue::ln_big).collect();
        let mut e = estimate_entropy(&c, shift_flags(), cfg.window);
        e.witness = Some(format!("K^(D), |D| = {}", d.len()));
        per.push(e);
    }
    let sc = flow.graph.surjective_core();
    let canon: FiniteSubset = subset(sc.graph.canonical_witness().into_iter().map(|v| sc.to_old(v)));
    let r = report(per, None);
    if covers(witnesses, &canon) {
        let expected = crate::sets::structural_star(&sc.graph).mul_count(&flow.ln_k()).expect("count times log");
        if r.value() == expected && r.is_exact() {
            return Ok(r.certify("witness contains the canonical witness of sc; value equals h*_p(λ)·log|K|"));
        }
    }
    Ok(r)
}

/// Canonical witness of `λ` together with the canonical witness of `sc(λ)`.
pub fn sigma_oplus_witness(graph: &SelfmapGraph) -> FiniteSubset {
    let sc = graph.surjective_core();
    let mut w = graph.canonical_witness();
    w.extend(sc.graph.canonical_witness().into_iter().map(|v| sc.to_old(v)));
    subset(w)
}

/// `ent_dim(τ_λ) = h_alg(τ_λ)/log p` for elementary abelian `K = (ℤ_p)^r`.
pub fn ent_dim_tau(flow: &ShiftFlow, witnesses: &[FiniteSubset], cfg: &EntropyConfig) -> Result<EntropyReport> {
    flow.expect(Direction::Forward)?;
    let r = flow.base.rank() as i64;
    if flow.base.elementary_prime().is_none() {
        return Err(invalid(format!("{} is not elementary abelian", flow.base)));
    }
    let mut per = Vec::new();
    for d in witnesses {
        check_subset(&flow.graph, d)?;
        let sizes = trajectory_sizes(&flow.graph, d, cfg.n_max);
        per.push(scaled_estimate(&sizes, &LogValue::count(r), cfg, "dimension"));
    }
    if per.is_empty() {
        return Err(invalid("witness set is empty"));
    }
    let canon = flow.graph.canonical_witness();
    Ok(report(per, covers(witnesses, &canon).then_some("witness contains core and every ray base")))
}

/// `|𝔗_n*(λ, D)|·log|K|`, the set-side prediction for `σ^⊕` on `sc(λ)`.
pub fn star_p_scaled_sizes(flow: &ShiftFlow, d: &FiniteSubset, n_max: usize) -> Result<Vec<LogValue>> {
    let sc = flow.graph.surjective_core();
    let dd = subset(d.iter().filter_map(|&v| sc.from_old(v)));
    let unit = flow.ln_k();
    Ok(cotrajectory_sizes(&sc.graph, &dd, n_max)?.into_iter().map(|s| unit.scale(&crate::semigroup::ratio(s as i64, 1))).collect())
}

/// Result of comparing `σ̂_λ` with `τ_λ` on a finite `X`.
#[derive(Clone, Debug)]
pub struct SigmaTauVerdict {
    pub sigma: Endomorphism,
    pub sigma_hat: Endomorphism,
    pub tau: Endomorphism,
}

impl SigmaTauVerdict {
    pub fn equal(&self) -> bool {
        self.sigma_hat == self.tau
    }
}

/// Builds `σ_λ` and `τ_λ` as endomorphisms of `K^X` (coordinates `(x, j)`
/// at `x·rank(K) + j`) by applying the shifts to unit configurations, then
/// dualizes `σ_λ`.
pub fn sigma_hat_equals_tau(graph: &SelfmapGraph, k: &FiniteAbelianGroup) -> Result<SigmaTauVerdict> {
    if graph.ray_count() + graph.anti_count() + graph.fan_count() > 0 {
        return Err(invalid("σ̂ = τ is checked on finite X only"));
    }
    let n = graph.core_len();
    let r = k.rank();
    let kx = k.power(n)?;
    let sigma_flow = ShiftFlow { base: k.clone(), graph: graph.clone(), direction: Direction::Backward };
    let tau_flow = ShiftFlow { base: k.clone(), graph: graph.clone(), direction: Direction::Forward };
    let dim = n * r;
    let mut sa = alloc::vec![alloc::vec![0i64; dim]; dim];
    let mut ta = alloc::vec![alloc::vec![0i64; dim]; dim];
    for x in 0..n {
        for (j, e) in unit_elements(k).into_iter().enumerate() {
            let f = Config::from([(Vertex::Core(x), e)]);
            let col = x * r + j;
            for (v, val) in sigma_oplus_apply(&sigma_flow, &f)? {
                let Vertex::Core(y) = v else { unreachable!("finite X") };
                for (jj, &c) in val.iter().enumerate() {
                    sa[y * r + jj][col] = c as i64;
                }
            }
            for (v, val) in tau_apply(&tau_flow, &f)? {
                let Vertex::Core(y) = v else { unreachable!("finite X") };
                for (jj, &c) in val.iter().enumerate() {
                    ta[y * r + jj][col] = c as i64;
                }
            }
        }
    }
    let sigma = Endomorphism::new(&kx, &sa)?;
    let tau = Endomorphism::new(&kx, &ta)?;
    Ok(SigmaTauVerdict { sigma_hat: sigma.dual(), sigma, tau })
}

/// `|K|^m` as a log, for comparisons with the structural identities.
pub fn ln_power(k: &FiniteAbelianGroup, m: u64) -> LogValue {
    LogValue::ln_big(&Pow::pow(k.order(), m))
}
