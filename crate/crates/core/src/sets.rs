//! Selfmaps of countable sets given by a finite description, and the
//! set-theoretic entropies obtained from images and preimages of finite
//! subsets.
//!
//! A [`SelfmapGraph`] has a finite core, forward rays `r(0) → r(1) → …`,
//! anti-rays `… → a(1) → a(0) → exit`, and fans: infinitely many points
//! `f(0), f(1), …` all sent to one target.  Fans are the only source of
//! infinite fibers, so a graph is finite-to-one exactly when it has none.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::logvalue::LogValue;
use crate::semigroup::{semigroup_entropy, Carrier, CarrierFlags, EntropyConfig, EntropyReport, Flow};

/// A point of `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Core(usize),
    Ray(usize, u64),
    Anti(usize, u64),
    Fan(usize, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfmapGraph {
    core_names: Vec<String>,
    core_succ: Vec<Vertex>,
    ray_names: Vec<String>,
    anti_names: Vec<String>,
    anti_exit: Vec<Vertex>,
    fan_names: Vec<String>,
    fan_target: Vec<Vertex>,
}

/// Sorted, duplicate-free finite subset.
pub type FiniteSubset = Vec<Vertex>;

pub fn subset(vs: impl IntoIterator<Item = Vertex>) -> FiniteSubset {
    let s: BTreeSet<Vertex> = vs.into_iter().collect();
    s.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovariantMode {
    ExactStructural,
    Trajectory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContraVariant {
    Star,
    StarP,
}

impl SelfmapGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn core_len(&self) -> usize {
        self.core_names.len()
    }

    pub fn ray_count(&self) -> usize {
        self.ray_names.len()
    }

    pub fn anti_count(&self) -> usize {
        self.anti_names.len()
    }

    pub fn fan_count(&self) -> usize {
        self.fan_names.len()
    }

    pub fn core_names(&self) -> &[String] {
        &self.core_names
    }

    pub fn core_succ(&self) -> &[Vertex] {
        &self.core_succ
    }

    pub fn ray_names(&self) -> &[String] {
        &self.ray_names
    }

    pub fn anti_names(&self) -> &[String] {
        &self.anti_names
    }

    pub fn anti_exits(&self) -> &[Vertex] {
        &self.anti_exit
    }

    pub fn fan_names(&self) -> &[String] {
        &self.fan_names
    }

    pub fn fan_targets(&self) -> &[Vertex] {
        &self.fan_target
    }

    pub fn finite_to_one(&self) -> bool {
        self.fan_names.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match v {
            Vertex::Core(i) => i < self.core_len(),
            Vertex::Ray(i, _) => i < self.ray_count(),
            Vertex::Anti(i, _) => i < self.anti_count(),
            Vertex::Fan(i, _) => i < self.fan_count(),
        }
    }

    pub fn succ(&self, v: Vertex) -> Vertex {
        match v {
            Vertex::Core(i) => self.core_succ[i],
            Vertex::Ray(i, n) => Vertex::Ray(i, n + 1),
            Vertex::Anti(i, 0) => self.anti_exit[i],
            Vertex::Anti(i, n) => Vertex::Anti(i, n - 1),
            Vertex::Fan(i, _) => self.fan_target[i],
        }
    }

    /// `λ^{-1}(v)`; an error if a fan points at `v`.
    pub fn preimage(&self, v: Vertex) -> Result<Vec<Vertex>> {
        if let Some(i) = self.fan_target.iter().position(|&t| t == v) {
            return Err(Error::NotFiniteToOne(format!("fan {} maps onto {}", self.fan_names[i], self.name(v))));
        }
        let mut out = Vec::new();
        for (i, &s) in self.core_succ.iter().enumerate() {
            if s == v {
                out.push(Vertex::Core(i));
            }
        }
        for (i, &e) in self.anti_exit.iter().enumerate() {
            if e == v {
                out.push(Vertex::Anti(i, 0));
            }
        }
        match v {
            Vertex::Ray(i, n) if n > 0 => out.push(Vertex::Ray(i, n - 1)),
            Vertex::Anti(i, n) => out.push(Vertex::Anti(i, n + 1)),
            _ => {}
        }
        out.sort();
        Ok(out)
    }

    pub fn image_step(&self, d: &[Vertex]) -> FiniteSubset {
        subset(d.iter().map(|&v| self.succ(v)))
    }

    pub fn preimage_step(&self, d: &[Vertex]) -> Result<FiniteSubset> {
        let mut s = BTreeSet::new();
        for &v in d {
            s.extend(self.preimage(v)?);
        }
        Ok(s.into_iter().collect())
    }

    pub fn name(&self, v: Vertex) -> String {
        match v {
            Vertex::Core(i) => self.core_names[i].clone(),
            Vertex::Ray(i, n) => format!("{}[{}]", self.ray_names[i], n),
            Vertex::Anti(i, n) => format!("{}[{}]", self.anti_names[i], n),
            Vertex::Fan(i, n) => format!("{}[{}]", self.fan_names[i], n),
        }
    }

    /// Core together with the base point of every ray and anti-ray.  Any
    /// finite subset's image and preimage trajectories are eventually
    /// dominated by shifts of this one's, so it is a sufficient witness.
    pub fn canonical_witness(&self) -> FiniteSubset {
        let mut v: Vec<Vertex> = (0..self.core_len()).map(Vertex::Core).collect();
        v.extend((0..self.ray_count()).map(|i| Vertex::Ray(i, 0)));
        v.extend((0..self.anti_count()).map(|i| Vertex::Anti(i, 0)));
        subset(v)
    }

    /// `sc(λ) = ⋂ λ^n(X)`.  With finitely many non-fan preimages per point a
    /// point lies in every `λ^n(X)` iff it has an infinite backward chain;
    /// fan points have no preimage at all and never take part.
    pub fn surjective_core(&self) -> SurjectiveCore {
        let k = self.core_len();
        // greatest fixed point on the core: alive iff some alive preimage
        let mut alive = alloc::vec![true; k];
        loop {
            let mut changed = false;
            for c in 0..k {
                if !alive[c] {
                    continue;
                }
                let fed = self.anti_exit.iter().any(|&e| e == Vertex::Core(c))
                    || (0..k).any(|p| alive[p] && self.core_succ[p] == Vertex::Core(c));
                if !fed {
                    alive[c] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut ray_start: Vec<Option<u64>> = alloc::vec![None; self.ray_count()];
        let mut hit = |v: Vertex| {
            if let Vertex::Ray(i, d) = v {
                ray_start[i] = Some(ray_start[i].map_or(d, |e| e.min(d)));
            }
        };
        for c in 0..k {
            if alive[c] {
                hit(self.core_succ[c]);
            }
        }
        for &e in &self.anti_exit {
            hit(e);
        }
        let core_old: Vec<usize> = (0..k).filter(|&c| alive[c]).collect();
        let rays_old: Vec<(usize, u64)> =
            ray_start.iter().enumerate().filter_map(|(i, s)| s.map(|e| (i, e))).collect();
        let sc = SurjectiveCore { core_old, rays_old, anti: self.anti_count(), graph: SelfmapGraph::empty() };
        let graph = SelfmapGraph {
            core_names: sc.core_old.iter().map(|&c| self.core_names[c].clone()).collect(),
            core_succ: sc.core_old.iter().map(|&c| sc.from_old(self.core_succ[c]).expect("sc is λ-invariant")).collect(),
            ray_names: sc.rays_old.iter().map(|&(i, _)| self.ray_names[i].clone()).collect(),
            anti_names: self.anti_names.clone(),
            anti_exit: self.anti_exit.iter().map(|&e| sc.from_old(e).expect("anti-ray exits lie in sc")).collect(),
            fan_names: Vec::new(),
            fan_target: Vec::new(),
        };
        SurjectiveCore { graph, ..sc }
    }

    fn empty() -> Self {
        SelfmapGraph {
            core_names: Vec::new(),
            core_succ: Vec::new(),
            ray_names: Vec::new(),
            anti_names: Vec::new(),
            anti_exit: Vec::new(),
            fan_names: Vec::new(),
            fan_target: Vec::new(),
        }
    }

    /// The restriction of `λ` to a subset closed under `λ`, given by the
    /// core vertices, rays (whole) and anti-rays (whole) it keeps.
    pub fn restrict(&self, core: &[usize], rays: &[usize], antis: &[usize]) -> Result<SelfmapGraph> {
        let cmap = |v: Vertex| -> Option<Vertex> {
            match v {
                Vertex::Core(i) => core.iter().position(|&c| c == i).map(Vertex::Core),
                Vertex::Ray(i, d) => rays.iter().position(|&r| r == i).map(|j| Vertex::Ray(j, d)),
                Vertex::Anti(i, d) => antis.iter().position(|&a| a == i).map(|j| Vertex::Anti(j, d)),
                Vertex::Fan(..) => None,
            }
        };
        let closed = |v: Vertex| cmap(v).ok_or_else(|| invalid("restriction is not invariant"));
        Ok(SelfmapGraph {
            core_names: core.iter().map(|&c| self.core_names[c].clone()).collect(),
            core_succ: core.iter().map(|&c| closed(self.core_succ[c])).collect::<Result<_>>()?,
            ray_names: rays.iter().map(|&r| self.ray_names[r].clone()).collect(),
            anti_names: antis.iter().map(|&a| self.anti_names[a].clone()).collect(),
            anti_exit: antis.iter().map(|&a| closed(self.anti_exit[a])).collect::<Result<_>>()?,
            fan_names: Vec::new(),
            fan_target: Vec::new(),
        })
    }
}

/// `sc(λ)` as a graph of its own, with the correspondence of points.
#[derive(Clone, Debug)]
pub struct SurjectiveCore {
    pub graph: SelfmapGraph,
    core_old: Vec<usize>,
    /// Kept rays with the first depth that lies in `sc`.
    rays_old: Vec<(usize, u64)>,
    anti: usize,
}

impl SurjectiveCore {
    pub fn from_old(&self, v: Vertex) -> Option<Vertex> {
        match v {
            Vertex::Core(i) => self.core_old.iter().position(|&c| c == i).map(Vertex::Core),
            Vertex::Ray(i, d) => self
                .rays_old
                .iter()
                .position(|&(r, e)| r == i && d >= e)
                .map(|j| Vertex::Ray(j, d - self.rays_old[j].1)),
            Vertex::Anti(i, d) if i < self.anti => Some(Vertex::Anti(i, d)),
            _ => None,
        }
    }

    pub fn to_old(&self, v: Vertex) -> Vertex {
        match v {
            Vertex::Core(i) => Vertex::Core(self.core_old[i]),
            Vertex::Ray(j, d) => Vertex::Ray(self.rays_old[j].0, d + self.rays_old[j].1),
            other => other,
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.from_old(v).is_some()
    }
}

#[derive(Default)]
pub struct GraphBuilder {
    core: Vec<(String, Target)>,
    rays: Vec<String>,
    antis: Vec<(String, Target)>,
    fans: Vec<(String, Target)>,
}

/// Successor reference by name, used while building.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Core(String),
    Ray(String, u64),
    Anti(String, u64),
}

impl GraphBuilder {
    pub fn core(mut self, name: &str, succ: Target) -> Self {
        self.core.push((name.into(), succ));
        self
    }

    pub fn ray(mut self, name: &str) -> Self {
        self.rays.push(name.into());
        self
    }

    pub fn antiray(mut self, name: &str, exit: Target) -> Self {
        self.antis.push((name.into(), exit));
        self
    }

    pub fn fan(mut self, name: &str, target: Target) -> Self {
        self.fans.push((name.into(), target));
        self
    }

    pub fn build(self) -> Result<SelfmapGraph> {
        let mut names = BTreeSet::new();
        let all = self.core.iter().map(|c| &c.0).chain(&self.rays).chain(self.antis.iter().map(|a| &a.0)).chain(self.fans.iter().map(|f| &f.0));
        for n in all {
            if !names.insert(n.clone()) {
                return Err(invalid(format!("duplicate component name {n}")));
            }
        }
        let core_names: Vec<String> = self.core.iter().map(|c| c.0.clone()).collect();
        let anti_names: Vec<String> = self.antis.iter().map(|a| a.0.clone()).collect();
        let resolve = |t: &Target| -> Result<Vertex> {
            let find = |list: &[String], n: &str| list.iter().position(|x| x == n).ok_or_else(|| invalid(format!("unknown vertex {n}")));
            Ok(match t {
                Target::Core(n) => Vertex::Core(find(&core_names, n)?),
                Target::Ray(n, d) => Vertex::Ray(find(&self.rays, n)?, *d),
                Target::Anti(n, d) => Vertex::Anti(find(&anti_names, n)?, *d),
            })
        };
        let core_succ = self.core.iter().map(|c| resolve(&c.1)).collect::<Result<Vec<_>>>()?;
        let anti_exit = self.antis.iter().map(|a| resolve(&a.1)).collect::<Result<Vec<_>>>()?;
        if anti_exit.iter().any(|e| matches!(e, Vertex::Anti(..))) {
            return Err(invalid("an anti-ray must exit into the core or a ray"));
        }
        let fan_target = self.fans.iter().map(|f| resolve(&f.1)).collect::<Result<Vec<_>>>()?;
        Ok(SelfmapGraph {
            core_names,
            core_succ,
            ray_names: self.rays,
            anti_names,
            anti_exit,
            fan_names: self.fans.iter().map(|f| f.0.clone()).collect(),
            fan_target,
        })
    }
}

/// `(S(X), ∪)` with `v(A) = |A|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Subsets;

impl Carrier for Subsets {
    type Elem = FiniteSubset;

    fn op(&self, a: &FiniteSubset, b: &FiniteSubset) -> Result<FiniteSubset> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(out)
    }

    fn norm(&self, a: &FiniteSubset) -> Result<LogValue> {
        Ok(LogValue::count(a.len() as i64))
    }

    fn flags(&self) -> CarrierFlags {
        CarrierFlags {
            subadditive: true,
            arithmetic: true,
            monotone_norm: true,
            d_monotone: true,
            commutative: true,
            has_identity: true,
            structured: true,
        }
    }

    fn leq(&self, a: &FiniteSubset, b: &FiniteSubset) -> Option<bool> {
        Some(a.iter().all(|v| b.binary_search(v).is_ok()))
    }

    fn size_bits(&self, a: &FiniteSubset) -> u64 {
        a.len() as u64
    }
}

/// `𝔦𝔪(λ)`: `A ↦ λ(A)`.
pub struct ImageFlow<'a> {
    pub graph: &'a SelfmapGraph,
}

impl Flow for ImageFlow<'_> {
    type C = Subsets;

    fn carrier(&self) -> &Subsets {
        &Subsets
    }

    fn apply(&self, x: &FiniteSubset) -> Result<FiniteSubset> {
        Ok(self.graph.image_step(x))
    }

    fn contractive(&self) -> bool {
        true
    }
}

/// `𝔠𝔦𝔪(λ)`: `A ↦ λ^{-1}(A)`; needs a finite-to-one map.
pub struct PreimageFlow<'a> {
    pub graph: &'a SelfmapGraph,
}

impl Flow for PreimageFlow<'_> {
    type C = Subsets;

    fn carrier(&self) -> &Subsets {
        &Subsets
    }

    fn apply(&self, x: &FiniteSubset) -> Result<FiniteSubset> {
        self.graph.preimage_step(x)
    }

    fn contractive(&self) -> bool {
        false
    }
}

fn check_witnesses(g: &SelfmapGraph, ws: &[FiniteSubset]) -> Result<()> {
    for w in ws {
        if w.windows(2).any(|p| p[0] >= p[1]) {
            return Err(invalid("witness subsets must be sorted and duplicate-free"));
        }
        if let Some(v) = w.iter().find(|&&v| !g.contains(v)) {
            return Err(invalid(format!("witness vertex {:?} is not in the graph", v)));
        }
    }
    Ok(())
}

fn covers_canonical(ws: &[FiniteSubset], canon: &FiniteSubset) -> bool {
    ws.iter().any(|w| Subsets.leq(canon, w) == Some(true))
}

/// `𝔥(λ)`.  Structural mode returns the number of forward rays; trajectory
/// mode runs the engine and certifies the sup when a witness contains the
/// canonical one.
pub fn covariant_entropy(
    g: &SelfmapGraph,
    witnesses: &[FiniteSubset],
    mode: CovariantMode,
    cfg: &EntropyConfig,
) -> Result<EntropyReport> {
    match mode {
        CovariantMode::ExactStructural => Ok(structural_report(LogValue::count(g.ray_count() as i64), "forward rays")),
        CovariantMode::Trajectory => {
            check_witnesses(g, witnesses)?;
            let r = semigroup_entropy(&ImageFlow { graph: g }, witnesses, cfg)?;
            Ok(if covers_canonical(witnesses, &g.canonical_witness()) {
                r.certify("witness contains core and every ray base")
            } else {
                r
            })
        }
    }
}

fn structural_report(v: LogValue, why: &str) -> EntropyReport {
    use crate::semigroup::{Classification, EntropyEstimate, ExactRule, Scope};
    let e = EntropyEstimate {
        c: Vec::new(),
        classification: Classification::Exact { value: v, rule: ExactRule::Certified(why.into()) },
        witness: None,
    };
    EntropyReport { estimate: e.clone(), per_witness: alloc::vec![e], scope: Scope::Certified(why.into()) }
}

/// Number of anti-rays: the structural value of `𝔥*` (and of `𝔥ₚ*`, since
/// anti-rays always lie in the surjective core).
pub fn structural_star(g: &SelfmapGraph) -> LogValue {
    LogValue::count(g.anti_count() as i64)
}

/// `𝔥*(λ)` or `𝔥ₚ*(λ)` over the witnesses.  For `StarP` the map is first
/// restricted to `sc(λ)` and each witness intersected with it.
pub fn contravariant_entropy(
    g: &SelfmapGraph,
    witnesses: &[FiniteSubset],
    variant: ContraVariant,
    cfg: &EntropyConfig,
) -> Result<EntropyReport> {
    if !g.finite_to_one() {
        return Err(Error::NotFiniteToOne(format!("{} fan(s) present", g.fan_count())));
    }
    check_witnesses(g, witnesses)?;
    match variant {
        ContraVariant::Star => {
            let r = semigroup_entropy(&PreimageFlow { graph: g }, witnesses, cfg)?;
            let canon = g.canonical_witness();
            Ok(if covers_canonical(witnesses, &canon) { r.certify("witness contains core and every ray and anti-ray base") } else { r })
        }
        ContraVariant::StarP => {
            let sc = g.surjective_core();
            let ws: Vec<FiniteSubset> =
                witnesses.iter().map(|w| subset(w.iter().filter_map(|&v| sc.from_old(v)))).collect();
            let r = semigroup_entropy(&PreimageFlow { graph: &sc.graph }, &ws, cfg)?;
            let canon = sc.graph.canonical_witness();
            Ok(if covers_canonical(&ws, &canon) { r.certify("witness contains the canonical witness of sc") } else { r })
        }
    }
}

/// `|𝔗_n(λ, D)|` for `n = 1..=n_max`.
pub fn trajectory_sizes(g: &SelfmapGraph, d: &FiniteSubset, n_max: usize) -> Vec<u64> {
    let mut t = d.clone();
    let mut p = d.clone();
    let mut out = alloc::vec![t.len() as u64];
    for _ in 1..n_max {
        p = g.image_step(&p);
        t = Subsets.op(&t, &p).expect("union");
        out.push(t.len() as u64);
    }
    out
}

/// `|𝔗_n*(λ, D)|` for `n = 1..=n_max`.
pub fn cotrajectory_sizes(g: &SelfmapGraph, d: &FiniteSubset, n_max: usize) -> Result<Vec<u64>> {
    let mut t = d.clone();
    let mut p = d.clone();
    let mut out = alloc::vec![t.len() as u64];
    for _ in 1..n_max {
        p = g.preimage_step(&p)?;
        t = Subsets.op(&t, &p)?;
        out.push(t.len() as u64);
    }
    Ok(out)
}

/// `𝔗_n(λ, D)` itself.
pub fn trajectory_set(g: &SelfmapGraph, d: &FiniteSubset, n: usize) -> FiniteSubset {
    let mut t = d.clone();
    let mut p = d.clone();
    for _ in 1..n {
        p = g.image_step(&p);
        t = Subsets.op(&t, &p).expect("union");
    }
    t
}

/// The pakex map on `ℕ`: `0, 1 ↦ 0`, `2n+2 ↦ 2n`, `2n+3 ↦ 2n+1`.  Point
/// `m` is `Core(m)` for `m < 2`, and `Anti(m % 2, m/2 − 1)` otherwise.
pub fn pakex() -> SelfmapGraph {
    SelfmapGraph::builder()
        .core("0", Target::Core("0".into()))
        .core("1", Target::Core("0".into()))
        .antiray("even", Target::Core("0".into()))
        .antiray("odd", Target::Core("1".into()))
        .build()
        .expect("well-formed")
}

pub fn pakex_vertex(m: u64) -> Vertex {
    if m < 2 {
        Vertex::Core(m as usize)
    } else {
        Vertex::Anti((m % 2) as usize, m / 2 - 1)
    }
}

/// One forward ray `0 ↦ 1 ↦ 2 ↦ …`.
pub fn successor_ray() -> SelfmapGraph {
    SelfmapGraph::builder().ray("n").build().expect("well-formed")
}
