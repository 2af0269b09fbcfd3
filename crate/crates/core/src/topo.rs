//! Finite Alexandrov spaces, their open covers, and finite frames.
//!
//! A finite space is a preorder on at most 64 points; the opens are the
//! up-sets, stored as bitmasks.  Covers keep duplicates and the empty set.
//! For trajectories only the distinct maximal members matter to `N`, so the
//! cover flow works on that reduced form.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{cap, invalid, Error, Result};
use crate::logvalue::LogValue;
use crate::semigroup::{
    quasi_periodic_certificate, semigroup_entropy, Carrier, CarrierFlags, Classification, EntropyConfig, EntropyReport,
    ExactRule, Flow,
};

/// Largest cover, after dropping duplicates and non-maximal members, that
/// [`min_subcover`] will search.
pub const MAX_COVER: usize = 24;

/// Upper bound on enumerated opens or frame elements.
pub const MAX_LATTICE: usize = 1 << 16;

const QP_LIMIT: usize = 1 << 14;

pub type Mask = u64;

fn bits(m: Mask) -> impl Iterator<Item = usize> {
    let mut m = m;
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn full(n: usize) -> Mask {
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    names: Vec<String>,
    /// `up[x]` is the minimal open set `U_x = {y : x ≤ y}`.
    up: Vec<Mask>,
}

impl FiniteSpace {
    /// Preorder generated by `pairs`, each `(a, b)` meaning `a ≤ b`.
    pub fn new(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n > 64 {
            return Err(cap(format!("{n} points, at most 64 supported")));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(invalid("duplicate point names"));
        }
        let mut up: Vec<Mask> = (0..n).map(|i| 1u64 << i).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(invalid(format!("order pair ({a}, {b}) out of range")));
            }
            up[a] |= 1 << b;
        }
        // transitive closure
        loop {
            let mut changed = false;
            for x in 0..n {
                let mut m = up[x];
                for y in bits(up[x]) {
                    m |= up[y];
                }
                if m != up[x] {
                    up[x] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(FiniteSpace { names, up })
    }

    /// Points `0..n` with names `"0"`, `"1"`, ….
    pub fn anonymous(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new((0..n).map(|i| format!("{i}")).collect(), pairs)
    }

    pub fn discrete(n: usize) -> Self {
        Self::anonymous(n, &[]).expect("small discrete space")
    }

    pub fn indiscrete(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        Self::anonymous(n, &pairs).expect("small indiscrete space")
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn whole(&self) -> Mask {
        full(self.len())
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    pub fn minimal_open(&self, x: usize) -> Mask {
        self.up[x]
    }

    /// Pairs `(a, b)` with `a ≤ b`, `a ≠ b`.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|a| bits(self.up[a]).filter(move |&b| b != a).map(move |b| (a, b))).collect()
    }

    pub fn up_closure(&self, m: Mask) -> Mask {
        bits(m).fold(0, |acc, x| acc | self.up[x])
    }

    pub fn down_closure(&self, m: Mask) -> Mask {
        (0..self.len()).filter(|&x| self.up[x] & m != 0).fold(0, |acc, x| acc | 1 << x)
    }

    pub fn is_open(&self, m: Mask) -> bool {
        m & !self.whole() == 0 && self.up_closure(m) == m
    }

    pub fn is_closed(&self, m: Mask) -> bool {
        m & !self.whole() == 0 && self.down_closure(m) == m
    }

    pub fn is_t0(&self) -> bool {
        (0..self.len()).all(|x| (0..x).all(|y| self.up[x] != self.up[y]))
    }

    /// All opens in increasing mask order.
    pub fn opens(&self) -> Result<Vec<Mask>> {
        // up-sets are unions of minimal opens; grow the family point by point
        let mut fam: BTreeSet<Mask> = [0].into_iter().collect();
        for x in 0..self.len() {
            let add: Vec<Mask> = fam.iter().map(|&m| m | self.up[x]).collect();
            fam.extend(add);
            if fam.len() > MAX_LATTICE {
                return Err(cap(format!("more than {MAX_LATTICE} open sets")));
            }
        }
        Ok(fam.into_iter().collect())
    }

    /// Product preorder on pairs `(x, y)`, indexed `x·|Y| + y`.
    pub fn product(&self, other: &FiniteSpace) -> Result<FiniteSpace> {
        let (n, m) = (self.len(), other.len());
        if n * m > 64 {
            return Err(cap("product has more than 64 points"));
        }
        let names = (0..n).flat_map(|x| (0..m).map(move |y| (x, y))).map(|(x, y)| format!("({},{})", self.names[x], other.names[y])).collect();
        let mut pairs = Vec::new();
        for (a, b) in self.order_pairs() {
            pairs.extend((0..m).map(|y| (a * m + y, b * m + y)));
        }
        for (a, b) in other.order_pairs() {
            pairs.extend((0..n).map(|x| (x * m + a, x * m + b)));
        }
        FiniteSpace::new(names, &pairs)
    }

    /// Subspace on the points of `m`, renumbered in increasing order.
    pub fn subspace(&self, m: Mask) -> Result<(FiniteSpace, Vec<usize>)> {
        let pts: Vec<usize> = bits(m & self.whole()).collect();
        let names = pts.iter().map(|&p| self.names[p].clone()).collect();
        let mut pairs = Vec::new();
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate() {
                if self.leq(a, b) {
                    pairs.push((i, j));
                }
            }
        }
        Ok((FiniteSpace::new(names, &pairs)?, pts))
    }
}

/// A selfmap of a finite space, checked to preserve the preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuousMap {
    images: Vec<usize>,
}

impl ContinuousMap {
    pub fn new(space: &FiniteSpace, images: Vec<usize>) -> Result<Self> {
        if images.len() != space.len() || images.iter().any(|&y| y >= space.len()) {
            return Err(invalid("map does not fit the space"));
        }
        for x in 0..space.len() {
            for y in bits(space.up[x]) {
                if !space.leq(images[x], images[y]) {
                    return Err(Error::Discontinuous(format!(
                        "{} ≤ {} but their images are not ordered",
                        space.names[x], space.names[y]
                    )));
                }
            }
        }
        Ok(ContinuousMap { images })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        ContinuousMap { images: (0..space.len()).collect() }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn preimage(&self, m: Mask) -> Mask {
        self.images.iter().enumerate().filter(|(_, &y)| m >> y & 1 == 1).fold(0, |acc, (x, _)| acc | 1 << x)
    }

    pub fn is_surjective(&self) -> bool {
        let hit: BTreeSet<usize> = self.images.iter().copied().collect();
        hit.len() == self.images.len()
    }
}

/// A finite family of opens whose union is the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenCover {
    points: usize,
    members: Vec<Mask>,
}

impl OpenCover {
    pub fn new(space: &FiniteSpace, members: Vec<Mask>) -> Result<Self> {
        if let Some(m) = members.iter().find(|&&m| !space.is_open(m)) {
            return Err(invalid(format!("member {m:#b} is not open")));
        }
        if members.iter().fold(0, |a, m| a | m) != space.whole() {
            return Err(Error::NotACover);
        }
        Ok(OpenCover { points: space.len(), members })
    }

    pub fn trivial(space: &FiniteSpace) -> Self {
        OpenCover { points: space.len(), members: vec![space.whole()] }
    }

    /// The minimal opens `U_x`, one per point.
    pub fn minimal_opens(space: &FiniteSpace) -> Self {
        OpenCover { points: space.len(), members: space.up.clone() }
    }

    pub fn members(&self) -> &[Mask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn same_space(&self, other: &OpenCover) -> Result<()> {
        if self.points != other.points {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// Distinct maximal members, sorted.  Same `N`, equivalent cover.
    pub fn reduced(&self) -> OpenCover {
        OpenCover { points: self.points, members: maximal(&self.members) }
    }

    pub fn preimage(&self, phi: &ContinuousMap) -> OpenCover {
        OpenCover { points: self.points, members: self.members.iter().map(|&m| phi.preimage(m)).collect() }
    }

    /// Every member of `other` lies inside some member of `self`
    /// (`self ≺ other`).
    pub fn refined_by(&self, other: &OpenCover) -> Result<bool> {
        self.same_space(other)?;
        Ok(other.members.iter().all(|&v| self.members.iter().any(|&u| v & !u == 0)))
    }

    pub fn equivalent(&self, other: &OpenCover) -> Result<bool> {
        Ok(self.refined_by(other)? && other.refined_by(self)?)
    }
}

fn maximal(members: &[Mask]) -> Vec<Mask> {
    let distinct: BTreeSet<Mask> = members.iter().copied().collect();
    let v: Vec<Mask> = distinct.into_iter().collect();
    v.iter().copied().filter(|&a| !v.iter().any(|&b| b != a && a & !b == 0)).collect()
}

/// `𝒰 ∨ 𝒱 = {U ∩ V}`, all `|𝒰|·|𝒱|` members kept.
pub fn cover_join(u: &OpenCover, v: &OpenCover) -> Result<OpenCover> {
    u.same_space(v)?;
    let members = u.members.iter().flat_map(|&a| v.members.iter().map(move |&b| a & b)).collect();
    Ok(OpenCover { points: u.points, members })
}

/// `𝒰 ≺ 𝒱`: `v` refines `u`.
pub fn refines(u: &OpenCover, v: &OpenCover) -> Result<bool> {
    u.refined_by(v)
}

/// `N(𝒰)`, the least size of a subcover.
pub fn min_subcover(cover: &OpenCover) -> Result<usize> {
    let universe = full(cover.points);
    if cover.members.iter().fold(0, |a, m| a | m) != universe {
        return Err(Error::NotACover);
    }
    set_cover_min(universe, &maximal(&cover.members))
}

/// Exact minimum set cover of `universe` by members of `fam`, by branch and
/// bound seeded with the greedy solution.
pub fn set_cover_min(universe: Mask, fam: &[Mask]) -> Result<usize> {
    if universe == 0 {
        return Ok(0);
    }
    let fam: Vec<Mask> = fam.iter().map(|m| m & universe).filter(|&m| m != 0).collect();
    if fam.len() > MAX_COVER {
        return Err(cap(format!("cover has {} maximal members, at most {MAX_COVER} searched", fam.len())));
    }
    if fam.iter().fold(0, |a, m| a | m) != universe {
        return Err(Error::NotACover);
    }
    let mut best = greedy(universe, &fam);
    let widest = fam.iter().map(|m| m.count_ones()).max().unwrap_or(1);
    branch(universe, &fam, 0, widest, &mut best);
    Ok(best)
}

fn greedy(universe: Mask, fam: &[Mask]) -> usize {
    let mut left = universe;
    let mut k = 0;
    while left != 0 {
        let m = fam.iter().max_by_key(|&&m| (m & left).count_ones()).expect("nonempty family");
        left &= !m;
        k += 1;
    }
    k
}

fn branch(left: Mask, fam: &[Mask], used: usize, widest: u32, best: &mut usize) {
    if left == 0 {
        *best = (*best).min(used);
        return;
    }
    let lower = used + left.count_ones().div_ceil(widest) as usize;
    if lower >= *best {
        return;
    }
    // the uncovered point with the fewest candidates
    let mut pick = 0;
    let mut fewest = usize::MAX;
    for p in bits(left) {
        let k = fam.iter().filter(|&&m| m >> p & 1 == 1).count();
        if k < fewest {
            fewest = k;
            pick = p;
        }
    }
    for &m in fam.iter().filter(|&&m| m >> pick & 1 == 1) {
        branch(left & !m, fam, used + 1, widest, best);
    }
}

/// Covers of a fixed space under `∨`, normed by `log N`.  Elements are
/// reduced covers.
#[derive(Clone, Debug)]
pub struct Covers {
    space: FiniteSpace,
}

impl Covers {
    pub fn new(space: FiniteSpace) -> Self {
        Covers { space }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }
}

fn finite_flags() -> CarrierFlags {
    CarrierFlags {
        subadditive: true,
        arithmetic: true,
        monotone_norm: true,
        d_monotone: true,
        commutative: true,
        has_identity: true,
        structured: false,
    }
}

impl Carrier for Covers {
    type Elem = Vec<Mask>;

    fn op(&self, a: &Vec<Mask>, b: &Vec<Mask>) -> Result<Vec<Mask>> {
        let j: Vec<Mask> = a.iter().flat_map(|&x| b.iter().map(move |&y| x & y)).collect();
        Ok(maximal(&j))
    }

    fn norm(&self, a: &Vec<Mask>) -> Result<LogValue> {
        Ok(LogValue::ln_int(set_cover_min(self.space.whole(), a)? as u64))
    }

    fn flags(&self) -> CarrierFlags {
        finite_flags()
    }

    fn leq(&self, a: &Vec<Mask>, b: &Vec<Mask>) -> Option<bool> {
        Some(b.iter().all(|&v| a.iter().any(|&u| v & !u == 0)))
    }
}

/// `fin-cov(φ)`: `𝒰 ↦ φ⁻¹(𝒰)`.
#[derive(Clone, Debug)]
pub struct CoverFlow {
    carrier: Covers,
    map: ContinuousMap,
}

impl CoverFlow {
    pub fn new(space: FiniteSpace, map: ContinuousMap) -> Result<Self> {
        ContinuousMap::new(&space, map.images.clone())?;
        Ok(CoverFlow { carrier: Covers::new(space), map })
    }
}

impl Flow for CoverFlow {
    type C = Covers;

    fn carrier(&self) -> &Covers {
        &self.carrier
    }

    fn apply(&self, x: &Vec<Mask>) -> Result<Vec<Mask>> {
        Ok(maximal(&x.iter().map(|&m| self.map.preimage(m)).collect::<Vec<_>>()))
    }

    fn contractive(&self) -> bool {
        true
    }
}

/// `N(T_n(φ, 𝒰))` for `n = 1..=n_max`.
pub fn cover_trajectory_norms(space: &FiniteSpace, phi: &ContinuousMap, u: &OpenCover, n_max: usize) -> Result<Vec<usize>> {
    if u.points != space.len() {
        return Err(Error::AmbientMismatch);
    }
    let u = u.reduced();
    let mut out = Vec::with_capacity(n_max);
    let mut t = u.members.clone();
    for n in 0..n_max {
        if n > 0 {
            let pulled: Vec<Mask> = t.iter().map(|&m| phi.preimage(m)).collect();
            t = maximal(&u.members.iter().flat_map(|&a| pulled.iter().map(move |&b| a & b)).collect::<Vec<_>>());
        }
        out.push(set_cover_min(space.whole(), &t)?);
    }
    Ok(out)
}

/// Upgrade every witness to exact 0 through a quasi-periodicity certificate,
/// then certify the scope: on a finite carrier `c_n ≤ log` of the carrier's
/// width for every cover.
fn finish_finite<F: Flow>(flow: &F, mut r: EntropyReport, witnesses: &[<F::C as Carrier>::Elem], what: &str) -> Result<EntropyReport> {
    for (e, x) in r.per_witness.iter_mut().zip(witnesses) {
        if !e.classification.is_exact() {
            let (k, m) = quasi_periodic_certificate(flow, x, QP_LIMIT)?
                .ok_or_else(|| cap(format!("no quasi-period within {QP_LIMIT} steps")))?;
            e.classification = Classification::Exact { value: LogValue::zero(), rule: ExactRule::QuasiPeriodic { k, m } };
        }
    }
    r.estimate = crate::semigroup::aggregate(&r.per_witness);
    Ok(r.certify(what))
}

/// `h_fin-top(φ)` with the given witness covers; the report keeps the
/// `c_n = log N(T_n)` table of every witness.
pub fn h_fin_top(space: &FiniteSpace, phi: &ContinuousMap, witnesses: &[OpenCover], cfg: &EntropyConfig) -> Result<EntropyReport> {
    let flow = CoverFlow::new(space.clone(), phi.clone())?;
    if witnesses.iter().any(|w| w.points != space.len()) {
        return Err(Error::AmbientMismatch);
    }
    let ws: Vec<Vec<Mask>> = witnesses.iter().map(|w| w.reduced().members).collect();
    let r = semigroup_entropy(&flow, &ws, cfg)?;
    finish_finite(&flow, r, &ws, "finite space: every cover norm is at most log|X|")
}

/// Finite distributive lattice presented by its poset of join-irreducibles.
/// Elements are down-sets of that poset, stored as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFrame {
    /// `below[j]`: join-irreducibles `≤ j`, including `j`.
    below: Vec<Mask>,
    elements: Vec<Mask>,
}

impl FiniteFrame {
    /// Frame from the join-irreducible poset, `(a, b)` meaning `a ≤ b`.
    pub fn from_poset(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        // reuse the preorder closure; reversed pairs so `up` computes `below`
        let rev: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (b, a)).collect();
        let sp = FiniteSpace::anonymous(n, &rev)?;
        if !sp.is_t0() {
            return Err(invalid("join-irreducibles must form a partial order"));
        }
        let below = sp.up.clone();
        let mut fam: BTreeSet<Mask> = [0].into_iter().collect();
        for j in 0..n {
            let add: Vec<Mask> = fam.iter().map(|&m| m | below[j]).collect();
            fam.extend(add);
            if fam.len() > MAX_LATTICE {
                return Err(cap(format!("more than {MAX_LATTICE} frame elements")));
            }
        }
        Ok(FiniteFrame { below, elements: fam.into_iter().collect() })
    }

    pub fn irreducibles(&self) -> usize {
        self.below.len()
    }

    pub fn elements(&self) -> &[Mask] {
        &self.elements
    }

    pub fn top(&self) -> Mask {
        full(self.below.len())
    }

    pub fn bottom(&self) -> Mask {
        0
    }

    pub fn contains(&self, a: Mask) -> bool {
        a & !self.top() == 0 && bits(a).all(|j| self.below[j] & !a == 0)
    }

    pub fn join(&self, a: Mask, b: Mask) -> Mask {
        a | b
    }

    pub fn meet(&self, a: Mask, b: Mask) -> Mask {
        a & b
    }

    pub fn leq(&self, a: Mask, b: Mask) -> bool {
        a & !b == 0
    }

    /// The element generated by irreducible `j`.
    pub fn irreducible(&self, j: usize) -> Mask {
        self.below[j]
    }

    /// `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` on every triple, computed from the
    /// order alone (least upper and greatest lower bounds by search).
    pub fn check_distributive(&self) -> bool {
        let lub = |a: Mask, b: Mask| self.bound(a, b, true);
        let glb = |a: Mask, b: Mask| self.bound(a, b, false);
        self.elements.iter().all(|&a| {
            self.elements.iter().all(|&b| self.elements.iter().all(|&c| glb(a, lub(b, c)) == lub(glb(a, b), glb(a, c))))
        })
    }

    fn bound(&self, a: Mask, b: Mask, upper: bool) -> Mask {
        let cands = self.elements.iter().copied().filter(|&x| if upper { self.leq(a, x) && self.leq(b, x) } else { self.leq(x, a) && self.leq(x, b) });
        let v: Vec<Mask> = cands.collect();
        *v.iter()
            .find(|&&x| v.iter().all(|&y| if upper { self.leq(x, y) } else { self.leq(y, x) }))
            .expect("lattice bound exists")
    }
}

/// Open-set frame `𝒪(X)`.  Irreducibles are the distinct minimal opens,
/// ordered by inclusion; the second component maps each point to its
/// irreducible.
pub fn to_frame(space: &FiniteSpace) -> Result<(FiniteFrame, Vec<usize>)> {
    let mut opens: Vec<Mask> = Vec::new();
    let mut of_point = Vec::with_capacity(space.len());
    for x in 0..space.len() {
        let u = space.up[x];
        let j = match opens.iter().position(|&o| o == u) {
            Some(j) => j,
            None => {
                opens.push(u);
                opens.len() - 1
            }
        };
        of_point.push(j);
    }
    let mut pairs = Vec::new();
    for (a, &ua) in opens.iter().enumerate() {
        for (b, &ub) in opens.iter().enumerate() {
            if a != b && ua & !ub == 0 {
                pairs.push((a, b));
            }
        }
    }
    Ok((FiniteFrame::from_poset(opens.len(), &pairs)?, of_point))
}

/// Frame element of an open set of `space`, in the coordinates of
/// [`to_frame`].
pub fn open_to_frame(space: &FiniteSpace, of_point: &[usize], u: Mask) -> Mask {
    (0..space.len()).filter(|&x| u >> x & 1 == 1).fold(0, |acc, x| acc | 1 << of_point[x])
}

/// Endomorphism of a finite frame, given on join-irreducibles and extended
/// by joins.  Meets, top and bottom are checked on all elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameEndo {
    frame: FiniteFrame,
    images: Vec<Mask>,
}

impl FrameEndo {
    pub fn new(frame: FiniteFrame, images: Vec<Mask>) -> Result<Self> {
        if images.len() != frame.irreducibles() || images.iter().any(|&m| !frame.contains(m)) {
            return Err(invalid("images must be frame elements, one per irreducible"));
        }
        let f = FrameEndo { frame, images };
        let els = f.frame.elements.clone();
        if f.apply(f.frame.top()) != f.frame.top() {
            return Err(invalid("top is not preserved"));
        }
        for &a in &els {
            for &b in &els {
                if f.apply(a & b) != f.apply(a) & f.apply(b) {
                    return Err(invalid(format!("meet of {a:#b} and {b:#b} is not preserved")));
                }
            }
        }
        Ok(f)
    }

    /// `𝒪(φ) = φ⁻¹` on `𝒪(X)`.
    pub fn from_map(space: &FiniteSpace, phi: &ContinuousMap) -> Result<(Self, Vec<usize>)> {
        let (frame, of_point) = to_frame(space)?;
        let mut images = vec![0; frame.irreducibles()];
        for x in 0..space.len() {
            images[of_point[x]] = open_to_frame(space, &of_point, phi.preimage(space.up[x]));
        }
        Ok((FrameEndo::new(frame, images)?, of_point))
    }

    pub fn frame(&self) -> &FiniteFrame {
        &self.frame
    }

    pub fn images(&self) -> &[Mask] {
        &self.images
    }

    pub fn apply(&self, a: Mask) -> Mask {
        bits(a).fold(0, |acc, j| acc | self.images[j])
    }
}

/// Finite frame covers: families joining to top, with meets pairwise.
#[derive(Clone, Debug)]
pub struct FrameCovers {
    frame: FiniteFrame,
}

impl FrameCovers {
    pub fn new(frame: FiniteFrame) -> Self {
        FrameCovers { frame }
    }
}

/// Least number of members of `u` whose join is top, by breadth-first
/// search over reachable joins.
pub fn frame_cover_min(frame: &FiniteFrame, u: &[Mask]) -> Result<usize> {
    let top = frame.top();
    if u.iter().fold(0, |a, m| a | m) != top {
        return Err(Error::NotACover);
    }
    let mut seen: BTreeSet<Mask> = [0].into_iter().collect();
    let mut layer = vec![0];
    let mut k = 0;
    while !seen.contains(&top) {
        k += 1;
        let mut next = Vec::new();
        for &a in &layer {
            for &m in u {
                let b = frame.join(a, m);
                if seen.insert(b) {
                    next.push(b);
                }
            }
        }
        layer = next;
    }
    Ok(k)
}

impl Carrier for FrameCovers {
    type Elem = Vec<Mask>;

    fn op(&self, a: &Vec<Mask>, b: &Vec<Mask>) -> Result<Vec<Mask>> {
        let s: BTreeSet<Mask> = a.iter().flat_map(|&x| b.iter().map(move |&y| self.frame.meet(x, y))).collect();
        Ok(s.into_iter().collect())
    }

    fn norm(&self, a: &Vec<Mask>) -> Result<LogValue> {
        Ok(LogValue::ln_int(frame_cover_min(&self.frame, a)? as u64))
    }

    fn flags(&self) -> CarrierFlags {
        finite_flags()
    }
}

/// `fin-cov_fr(f)`: `𝒰 ↦ f(𝒰)`.
pub struct FrameFlow {
    carrier: FrameCovers,
    endo: FrameEndo,
}

impl FrameFlow {
    pub fn new(endo: FrameEndo) -> Self {
        FrameFlow { carrier: FrameCovers::new(endo.frame.clone()), endo }
    }
}

impl Flow for FrameFlow {
    type C = FrameCovers;

    fn carrier(&self) -> &FrameCovers {
        &self.carrier
    }

    fn apply(&self, x: &Vec<Mask>) -> Result<Vec<Mask>> {
        let s: BTreeSet<Mask> = x.iter().map(|&m| self.endo.apply(m)).collect();
        Ok(s.into_iter().collect())
    }

    fn contractive(&self) -> bool {
        true
    }
}

fn frame_cover(frame: &FiniteFrame, u: &[Mask]) -> Result<Vec<Mask>> {
    if let Some(m) = u.iter().find(|&&m| !frame.contains(m)) {
        return Err(invalid(format!("{m:#b} is not a frame element")));
    }
    if u.iter().fold(0, |a, m| a | m) != frame.top() {
        return Err(Error::NotACover);
    }
    let s: BTreeSet<Mask> = u.iter().copied().collect();
    Ok(s.into_iter().collect())
}

/// `N_fr(T_n(f, 𝒰))` for `n = 1..=n_max`.
pub fn frame_trajectory_norms(endo: &FrameEndo, u: &[Mask], n_max: usize) -> Result<Vec<usize>> {
    let flow = FrameFlow::new(endo.clone());
    let u = frame_cover(&endo.frame, u)?;
    let mut out = Vec::with_capacity(n_max);
    let mut t = u.clone();
    for n in 0..n_max {
        if n > 0 {
            t = flow.carrier.op(&u, &flow.apply(&t)?)?;
        }
        out.push(frame_cover_min(&endo.frame, &t)?);
    }
    Ok(out)
}

/// `h_fr(f)` over the given frame covers.
pub fn h_fr(endo: &FrameEndo, witnesses: &[Vec<Mask>], cfg: &EntropyConfig) -> Result<EntropyReport> {
    let flow = FrameFlow::new(endo.clone());
    let ws = witnesses.iter().map(|w| frame_cover(&endo.frame, w)).collect::<Result<Vec<_>>>()?;
    let r = semigroup_entropy(&flow, &ws, cfg)?;
    finish_finite(&flow, r, &ws, "finite frame: every cover norm is at most log of the irreducible count")
}

/// Two per-step norm sequences that a bridge asserts equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepVerdict {
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

impl StepVerdict {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn first_mismatch(&self) -> Option<usize> {
        self.lhs.iter().zip(&self.rhs).position(|(a, b)| a != b).map(|i| i + 1)
    }
}

/// Space side `N(T_n(φ, 𝒰))` against frame side `N_fr(T_n(𝒪φ, 𝒪𝒰))`.
pub fn o_functor_check(space: &FiniteSpace, phi: &ContinuousMap, u: &OpenCover, n_max: usize) -> Result<StepVerdict> {
    let lhs = cover_trajectory_norms(space, phi, u, n_max)?;
    let (endo, of_point) = FrameEndo::from_map(space, phi)?;
    let fu: Vec<Mask> = u.members.iter().map(|&m| open_to_frame(space, &of_point, m)).collect();
    let rhs = frame_trajectory_norms(&endo, &fu, n_max)?;
    Ok(StepVerdict { lhs, rhs })
}

/// Quotient by `x ∼ y ⇔ x ≤ y ≤ x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct T0Reflection {
    pub space: FiniteSpace,
    /// Class of each original point.
    pub quotient: Vec<usize>,
}

impl T0Reflection {
    pub fn image(&self, m: Mask) -> Mask {
        bits(m).fold(0, |acc, x| acc | 1 << self.quotient[x])
    }

    pub fn induced(&self, phi: &ContinuousMap) -> Result<ContinuousMap> {
        let mut images = vec![usize::MAX; self.space.len()];
        for (x, &c) in self.quotient.iter().enumerate() {
            let y = self.quotient[phi.apply(x)];
            if images[c] != usize::MAX && images[c] != y {
                return Err(Error::Discontinuous("map does not respect the specialization equivalence".into()));
            }
            images[c] = y;
        }
        ContinuousMap::new(&self.space, images)
    }

    pub fn cover(&self, u: &OpenCover) -> OpenCover {
        OpenCover { points: self.space.len(), members: u.members.iter().map(|&m| self.image(m)).collect() }
    }
}

pub fn t0_reflection(space: &FiniteSpace) -> Result<T0Reflection> {
    let mut class_of: BTreeMap<Mask, usize> = BTreeMap::new();
    let mut quotient = Vec::with_capacity(space.len());
    let mut reps = Vec::new();
    for x in 0..space.len() {
        let next = class_of.len();
        let c = *class_of.entry(space.up[x]).or_insert(next);
        if c == reps.len() {
            reps.push(x);
        }
        quotient.push(c);
    }
    let names: Vec<String> = reps
        .iter()
        .map(|&r| {
            let members: Vec<&str> = (0..space.len()).filter(|&x| quotient[x] == quotient[r]).map(|x| space.names[x].as_str()).collect();
            members.join("~")
        })
        .collect();
    let mut pairs = Vec::new();
    for (a, &ra) in reps.iter().enumerate() {
        for (b, &rb) in reps.iter().enumerate() {
            if a != b && space.leq(ra, rb) {
                pairs.push((a, b));
            }
        }
    }
    Ok(T0Reflection { space: FiniteSpace::new(names, &pairs)?, quotient })
}

/// `N(T_n(φ, 𝒰))` against `N(T_n(φ_r, q(𝒰)))` on the T₀ reflection.
pub fn reflection_bridge_check(space: &FiniteSpace, phi: &ContinuousMap, u: &OpenCover, n_max: usize) -> Result<StepVerdict> {
    let r = t0_reflection(space)?;
    let lhs = cover_trajectory_norms(space, phi, u, n_max)?;
    let rhs = cover_trajectory_norms(&r.space, &r.induced(phi)?, &r.cover(u), n_max)?;
    Ok(StepVerdict { lhs, rhs })
}

/// For a closed `C ⊆ X` and a cover `𝒱` of the subspace `C`, the cover
/// `𝒰* = {↑V} ∪ {X ∖ C}` of `X`, whose trace on `C` is `𝒱 ∪ {∅}`.
pub fn extend_from_closed(space: &FiniteSpace, closed: Mask, v: &OpenCover) -> Result<OpenCover> {
    if !space.is_closed(closed) {
        return Err(invalid("subspace is not closed"));
    }
    let (sub, pts) = space.subspace(closed)?;
    if v.points != sub.len() {
        return Err(Error::AmbientMismatch);
    }
    let lift = |m: Mask| bits(m).fold(0, |acc, i| acc | 1u64 << pts[i]);
    let mut members: Vec<Mask> = v.members.iter().map(|&m| space.up_closure(lift(m))).collect();
    members.push(space.whole() & !closed);
    OpenCover::new(space, members)
}

/// Trace of a cover of `X` on the subspace on `m`, in subspace coordinates.
pub fn restrict_cover(space: &FiniteSpace, m: Mask, u: &OpenCover) -> Result<OpenCover> {
    let (sub, pts) = space.subspace(m)?;
    let members = u
        .members
        .iter()
        .map(|&w| pts.iter().enumerate().filter(|(_, &p)| w >> p & 1 == 1).fold(0, |acc, (i, _)| acc | 1u64 << i))
        .collect();
    OpenCover::new(&sub, members)
}
