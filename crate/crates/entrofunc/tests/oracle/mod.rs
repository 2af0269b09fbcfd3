//! Brute-force oracles and random instances shared by the integration tests.
//! Nothing here calls the engine except to build the objects under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use entrofunc_core::abelian::FiniteAbelianGroup;
use entrofunc_core::logvalue::{Base, LogSum};
use entrofunc_core::sets::{SelfmapGraph, Target, Vertex};
use entrofunc_core::LogValue;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------- selfmaps

/// A tame selfmap written out by hand: successors of the core points, the
/// number of forward rays and the exits of the anti-rays.
#[derive(Clone, Debug)]
pub struct Tame {
    pub core: Vec<Vertex>,
    pub rays: usize,
    pub exits: Vec<Vertex>,
}

impl Tame {
    /// At most 3 core points, 2 rays and 2 anti-rays.
    pub fn random(rng: &mut impl Rng) -> Tame {
        loop {
            let c = rng.gen_range(0..=3usize);
            let r = rng.gen_range(0..=2usize);
            let a = if c + r == 0 { 0 } else { rng.gen_range(0..=2usize) };
            if c + r + a == 0 {
                continue;
            }
            let core = (0..c)
                .map(|_| match rng.gen_range(0..c + r + a) {
                    k if k < c => Vertex::Core(k),
                    k if k < c + r => Vertex::Ray(k - c, rng.gen_range(0..=1)),
                    k => Vertex::Anti(k - c - r, rng.gen_range(0..=1)),
                })
                .collect();
            let exits = (0..a)
                .map(|_| match rng.gen_range(0..c + r) {
                    k if k < c => Vertex::Core(k),
                    k => Vertex::Ray(k - c, rng.gen_range(0..=1)),
                })
                .collect();
            return Tame { core, rays: r, exits };
        }
    }

    /// A selfmap of the finite set `0..n`.
    pub fn finite(images: &[usize]) -> Tame {
        Tame { core: images.iter().map(|&y| Vertex::Core(y)).collect(), rays: 0, exits: Vec::new() }
    }

    pub fn antis(&self) -> usize {
        self.exits.len()
    }

    fn target(v: Vertex) -> Target {
        match v {
            Vertex::Core(i) => Target::Core(format!("c{i}")),
            Vertex::Ray(i, k) => Target::Ray(format!("r{i}"), k),
            Vertex::Anti(i, k) => Target::Anti(format!("a{i}"), k),
            Vertex::Fan(..) => unreachable!("no fans here"),
        }
    }

    pub fn build(&self) -> SelfmapGraph {
        let mut b = SelfmapGraph::builder();
        for (i, &s) in self.core.iter().enumerate() {
            b = b.core(&format!("c{i}"), Self::target(s));
        }
        for i in 0..self.rays {
            b = b.ray(&format!("r{i}"));
        }
        for (i, &e) in self.exits.iter().enumerate() {
            b = b.antiray(&format!("a{i}"), Self::target(e));
        }
        b.build().expect("tame graph builds")
    }

    pub fn succ(&self, v: Vertex) -> Vertex {
        match v {
            Vertex::Core(i) => self.core[i],
            Vertex::Ray(i, k) => Vertex::Ray(i, k + 1),
            Vertex::Anti(i, 0) => self.exits[i],
            Vertex::Anti(i, k) => Vertex::Anti(i, k - 1),
            Vertex::Fan(..) => unreachable!(),
        }
    }

    pub fn preimage(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = (0..self.core.len()).filter(|&j| self.core[j] == v).map(Vertex::Core).collect();
        out.extend((0..self.exits.len()).filter(|&j| self.exits[j] == v).map(|j| Vertex::Anti(j, 0)));
        match v {
            Vertex::Ray(i, k) if k > 0 => out.push(Vertex::Ray(i, k - 1)),
            Vertex::Anti(i, k) => out.push(Vertex::Anti(i, k + 1)),
            _ => {}
        }
        out
    }

    /// Core points, ray bases and anti-ray bases.
    pub fn canonical(&self) -> Vec<Vertex> {
        let mut s: BTreeSet<Vertex> = (0..self.core.len()).map(Vertex::Core).collect();
        s.extend((0..self.rays).map(|i| Vertex::Ray(i, 0)));
        s.extend((0..self.antis()).map(|i| Vertex::Anti(i, 0)));
        s.into_iter().collect()
    }

    /// `|D ∪ λ(D) ∪ … ∪ λ^{n−1}(D)|`.
    pub fn image_sizes(&self, d: &[Vertex], n_max: usize) -> Vec<usize> {
        let mut seen: BTreeSet<Vertex> = d.iter().copied().collect();
        let mut layer = seen.clone();
        let mut out = vec![seen.len()];
        for _ in 1..n_max {
            layer = layer.iter().map(|&v| self.succ(v)).collect();
            seen.extend(layer.iter().copied());
            out.push(seen.len());
        }
        out
    }

    /// `λ^{−i}(D)` for `i < n`.
    pub fn preimage_layers(&self, d: &[Vertex], n: usize) -> Vec<BTreeSet<Vertex>> {
        let mut layer: BTreeSet<Vertex> = d.iter().copied().collect();
        let mut out = Vec::new();
        for _ in 0..n {
            out.push(layer.clone());
            layer = layer.iter().flat_map(|&v| self.preimage(v)).collect();
        }
        out
    }

    pub fn preimage_sizes(&self, d: &[Vertex], n_max: usize) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        self.preimage_layers(d, n_max)
            .into_iter()
            .map(|l| {
                seen.extend(l);
                seen.len()
            })
            .collect()
    }
}

// ---------------------------------------------------------- abelian groups

/// `∏ ℤ_{d_i}` handled coordinate by coordinate.
#[derive(Clone, Debug)]
pub struct Ab {
    pub d: Vec<u64>,
}

impl Ab {
    pub fn of(g: &FiniteAbelianGroup) -> Ab {
        Ab { d: g.moduli().to_vec() }
    }

    pub fn order(&self) -> u64 {
        self.d.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.d.iter().fold(1, |e, &m| e / gcd(e, m) * m)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.d.len()]
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.d).map(|((a, b), m)| (a + b) % m).collect()
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &m in &self.d {
            out = out.into_iter().flat_map(|p| (0..m).map(move |x| [p.clone(), vec![x]].concat())).collect();
        }
        out
    }

    /// `χ_y(x)` in `ℤ_e`: `Σ x_i y_i (e/d_i) mod e`.
    pub fn pairing(&self, x: &[u64], y: &[u64]) -> u64 {
        let e = self.exponent();
        x.iter().zip(y).zip(&self.d).map(|((a, b), m)| a * b % m * (e / m)).sum::<u64>() % e
    }

    /// Subgroup generated by `gens`, listed element by element.
    pub fn closure(&self, gens: &[Vec<u64>]) -> HashSet<Vec<u64>> {
        let mut s: HashSet<Vec<u64>> = HashSet::from([self.zero()]);
        for g in gens {
            self.extend(&mut s, g);
        }
        s
    }

    /// `S ← S + ⟨g⟩`, as the union of the cosets `S + k·g`.
    pub fn extend(&self, s: &mut HashSet<Vec<u64>>, g: &[u64]) {
        let mut kg = g.to_vec();
        let mut shifts = Vec::new();
        while !s.contains(&kg) {
            shifts.push(kg.clone());
            kg = self.add(&kg, g);
        }
        let base: Vec<Vec<u64>> = s.iter().cloned().collect();
        for t in shifts {
            for x in &base {
                s.insert(self.add(x, &t));
            }
        }
    }

    /// `x ↦ A·x`.
    pub fn apply(&self, a: &[Vec<i64>], x: &[u64]) -> Vec<u64> {
        (0..self.d.len())
            .map(|i| {
                let m = self.d[i] as i128;
                let s: i128 = (0..self.d.len()).map(|j| a[i][j] as i128 * x[j] as i128).sum();
                s.rem_euclid(m) as u64
            })
            .collect()
    }

    /// `φ̂(y) = χ_y∘φ`, read off on the unit vectors.
    pub fn dual_apply(&self, a: &[Vec<i64>], y: &[u64]) -> Vec<u64> {
        let e = self.exponent();
        (0..self.d.len())
            .map(|j| {
                let mut unit = self.zero();
                unit[j] = 1;
                let v = self.pairing(&self.apply(a, &unit), y);
                let step = e / self.d[j];
                assert_eq!(v % step, 0, "χ_y∘φ is a character");
                v / step
            })
            .collect()
    }

    pub fn annihilator(&self, n: &HashSet<Vec<u64>>) -> HashSet<Vec<u64>> {
        self.elements().into_iter().filter(|y| n.iter().all(|x| self.pairing(x, y) == 0)).collect()
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> Vec<u64> {
        self.d.iter().map(|&m| rng.gen_range(0..m)).collect()
    }

    /// A random matrix that defines an endomorphism: entry `(i, j)` is a
    /// multiple of `d_i / gcd(d_i, d_j)`.
    pub fn random_endo(&self, rng: &mut impl Rng) -> Vec<Vec<i64>> {
        let k = self.d.len();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let need = self.d[i] / gcd(self.d[i], self.d[j]);
                        (rng.gen_range(0..self.d[i]) * need % self.d[i]) as i64
                    })
                    .collect()
            })
            .collect()
    }
}

/// Random group of order at most `max_order`, in invariant-factor form.
pub fn random_group(rng: &mut impl Rng, max_order: u64) -> FiniteAbelianGroup {
    loop {
        let rank = rng.gen_range(1..=4);
        let m: Vec<u64> = (0..rank).map(|_| rng.gen_range(2..=16)).collect();
        if m.iter().product::<u64>() <= max_order {
            return FiniteAbelianGroup::normalized(&m).expect("small group");
        }
    }
}

/// Every group of order `2..=max` up to isomorphism, as invariant factors.
pub fn groups_up_to(max: u64) -> Vec<FiniteAbelianGroup> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    fn rec(rest: u64, from: u64, acc: &mut Vec<u64>, all: &mut Vec<Vec<u64>>) {
        if !acc.is_empty() {
            all.push(acc.clone());
        }
        for m in from..=rest {
            if m >= 2 && acc.iter().product::<u64>() * m <= rest {
                acc.push(m);
                rec(rest, m, acc, all);
                acc.pop();
            }
        }
    }
    let mut all = Vec::new();
    rec(max, 2, &mut Vec::new(), &mut all);
    for m in all {
        let g = FiniteAbelianGroup::normalized(&m).expect("small group");
        if seen.insert(g.moduli().to_vec()) {
            out.push(g);
        }
    }
    out
}

// ------------------------------------------------------------ finite spaces

/// A preorder on `0..n` closed by hand; `up[x]` is the minimal open set of `x`.
#[derive(Clone, Debug)]
pub struct Space {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
    pub up: Vec<u64>,
}

impl Space {
    pub fn random(n: usize, rng: &mut impl Rng) -> Space {
        let k = rng.gen_range(0..=n * n / 2);
        let pairs: Vec<(usize, usize)> = (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let mut up: Vec<u64> = (0..n).map(|x| 1 << x).collect();
        for &(a, b) in &pairs {
            up[a] |= 1 << b;
        }
        for _ in 0..n {
            for x in 0..n {
                for y in 0..n {
                    if up[x] >> y & 1 == 1 {
                        up[x] |= up[y];
                    }
                }
            }
        }
        Space { n, pairs, up }
    }

    pub fn full(&self) -> u64 {
        (1 << self.n) - 1
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    pub fn up_closure(&self, m: u64) -> u64 {
        (0..self.n).filter(|&x| m >> x & 1 == 1).fold(0, |a, x| a | self.up[x])
    }

    /// A random monotone selfmap, found by backtracking.
    pub fn random_map(&self, rng: &mut impl Rng) -> Vec<usize> {
        fn fill(s: &Space, img: &mut Vec<usize>, rng: &mut impl Rng) -> bool {
            let x = img.len();
            if x == s.n {
                return true;
            }
            let mut cand: Vec<usize> = (0..s.n).collect();
            for i in (1..cand.len()).rev() {
                cand.swap(i, rng.gen_range(0..=i));
            }
            for y in cand {
                let ok = (0..x).all(|z| (!s.leq(z, x) || s.leq(img[z], y)) && (!s.leq(x, z) || s.leq(y, img[z])));
                if ok {
                    img.push(y);
                    if fill(s, img, rng) {
                        return true;
                    }
                    img.pop();
                }
            }
            false
        }
        let mut img = Vec::new();
        assert!(fill(self, &mut img, rng), "the identity is always monotone");
        img
    }

    /// Up to `max_members` random opens, topped up with minimal opens
    /// until they cover.
    pub fn random_cover(&self, max_members: usize, rng: &mut impl Rng) -> Vec<u64> {
        let k = rng.gen_range(1..=max_members);
        let mut members: Vec<u64> = (0..k).map(|_| self.up_closure(rng.gen::<u64>() & self.full())).collect();
        let mut union = members.iter().fold(0, |a, m| a | m);
        for x in 0..self.n {
            if union >> x & 1 == 0 {
                members.push(self.up[x]);
                union |= self.up[x];
            }
        }
        members
    }
}

pub fn preimage(images: &[usize], m: u64) -> u64 {
    images.iter().enumerate().filter(|(_, &y)| m >> y & 1 == 1).fold(0, |a, (x, _)| a | 1 << x)
}

/// Least number of members covering `0..n`, by a shortest-path search over
/// covered sets.
pub fn min_cover_dp(n: usize, fam: &[u64]) -> Option<usize> {
    let full = (1u64 << n) - 1;
    let mut dist = vec![usize::MAX; 1 << n];
    dist[0] = 0;
    let mut frontier = vec![0u64];
    let mut steps = 0;
    while !frontier.is_empty() {
        if frontier.contains(&full) {
            return Some(steps);
        }
        steps += 1;
        let mut next = Vec::new();
        for s in frontier {
            for &m in fam {
                let t = s | m;
                if dist[t as usize] == usize::MAX {
                    dist[t as usize] = steps;
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    None
}

/// Least size of a covering subfamily, over all `2^|fam|` subfamilies.
pub fn min_cover_exhaustive(full: u64, fam: &[u64]) -> Option<usize> {
    (0u32..1 << fam.len())
        .filter(|s| (0..fam.len()).filter(|&i| s >> i & 1 == 1).fold(0, |a, i| a | fam[i]) == full)
        .map(|s| s.count_ones() as usize)
        .min()
}

/// `N(𝒰 ∨ φ^{−1}𝒰 ∨ … ∨ φ^{−(n−1)}𝒰)` for `n = 1..=n_max`.
pub fn cover_norms(n: usize, images: &[usize], u: &[u64], n_max: usize) -> Vec<usize> {
    let mut t: BTreeSet<u64> = u.iter().copied().collect();
    let mut pulled: Vec<u64> = u.to_vec();
    let mut out = Vec::new();
    for step in 0..n_max {
        if step > 0 {
            pulled = pulled.iter().map(|&m| preimage(images, m)).collect();
            t = t.iter().flat_map(|&a| pulled.iter().map(move |&b| a & b)).collect();
        }
        let fam: Vec<u64> = t.iter().copied().collect();
        out.push(min_cover_dp(n, &fam).expect("joins of covers cover"));
    }
    out
}

// --------------------------------------------------------------- measures

pub fn factor(mut n: u64) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// `Σ_i c_i·ln(p_i)` from a prime-indexed coefficient table.
pub fn log_value(coeffs: &BTreeMap<u64, BigRational>) -> LogValue {
    let raw = coeffs.iter().map(|(&p, c)| (Base::Log(BigUint::from(p)), c.clone())).collect();
    LogValue::from_sum(LogSum::from_raw(raw))
}

/// `v_p` of a positive rational as a prime table.
pub fn valuation(r: &BigRational) -> BTreeMap<u64, i64> {
    let to_u64 = |b: &BigInt| -> u64 { b.to_string().parse().expect("small probability") };
    let mut v = factor(to_u64(r.numer()));
    for (p, e) in factor(to_u64(r.denom())) {
        *v.entry(p).or_insert(0) -= e;
    }
    v
}

/// `−Σ μ(w) ln μ(w)` over all words of length `n`, for the product measure
/// with weights `p`.
pub fn block_entropy(p: &[BigRational], n: usize) -> LogValue {
    // words grouped by letter counts: n!/(k_1!…k_a!) words of mass ∏ p_i^{k_i}
    let vals: Vec<BTreeMap<u64, i64>> = p.iter().map(valuation).collect();
    let fact = |m: usize| (1..=m).fold(BigInt::one(), |a, i| a * BigInt::from(i));
    let mut acc: BTreeMap<u64, BigRational> = BTreeMap::new();
    let mut counts = vec![0usize; p.len()];
    fn compositions(counts: &mut Vec<usize>, i: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if i + 1 == counts.len() {
            counts[i] = left;
            out.push(counts.clone());
            return;
        }
        for k in 0..=left {
            counts[i] = k;
            compositions(counts, i + 1, left - k, out);
        }
    }
    let mut all = Vec::new();
    compositions(&mut counts, 0, n, &mut all);
    for ks in all {
        let words = ks.iter().fold(fact(n), |a, &k| a / fact(k));
        let mut mu = BigRational::from_integer(words);
        let mut v: BTreeMap<u64, i64> = BTreeMap::new();
        for ((pi, vi), &k) in p.iter().zip(&vals).zip(&ks) {
            for _ in 0..k {
                mu *= pi;
            }
            for (&q, &e) in vi {
                *v.entry(q).or_insert(0) += e * k as i64;
            }
        }
        for (q, e) in v {
            *acc.entry(q).or_insert_with(BigRational::zero) -= &mu * BigRational::from_integer(BigInt::from(e));
        }
    }
    acc.retain(|_, c| !c.is_zero());
    log_value(&acc)
}

/// Random probability vector with 2 or 3 entries and denominators up to 12.
pub fn random_probabilities(rng: &mut impl Rng) -> Vec<BigRational> {
    let k = rng.gen_range(2..=3usize);
    let den = rng.gen_range(k as i64..=12);
    let mut parts = vec![1i64; k];
    for _ in 0..den - k as i64 {
        parts[rng.gen_range(0..k)] += 1;
    }
    let p: Vec<BigRational> = parts.iter().map(|&a| BigRational::new(a.into(), den.into())).collect();
    assert!(p.iter().all(|x| x.is_positive()));
    p
}
