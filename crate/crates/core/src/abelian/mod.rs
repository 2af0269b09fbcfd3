//! Finite abelian groups `ℤ_{d_1} × … × ℤ_{d_k}`, their subgroup lattices,
//! Pontryagin duality and compatible endomorphisms.
//!
//! The dual group is identified with `G` through the pairing
//! `⟨x, y⟩ = Σ x_i·y_i / d_i mod 1`.  Groups parsed from a spec string are
//! brought to invariant-factor form `d_1 | d_2 | … | d_k`; groups built for
//! internal use (powers `K^X`) may carry any list of moduli, since nothing
//! below depends on the divisibility chain.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{cap, invalid, Error, Result};
use crate::logvalue::LogValue;
use crate::semigroup::{Carrier, CarrierFlags, Classification, EntropyEstimate, ExactRule, Flow};

mod zmod;

use zmod::{congruences, hnf, kernel_mod, Mat};

/// Largest admissible `lcm(d_1, …, d_k)`.
pub const MAX_EXPONENT: u64 = 1 << 31;

pub type Element = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteAbelianGroup {
    d: Vec<u64>,
    exponent: u64,
}

fn gcd_u(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u(b, a % b)
    }
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl FiniteAbelianGroup {
    /// `∏ ℤ_{d_i}` with the moduli in the given order.
    pub fn from_moduli(d: Vec<u64>) -> Result<Self> {
        if d.iter().any(|&x| x < 2) {
            return Err(invalid("every modulus must be at least 2"));
        }
        let mut exponent: u64 = 1;
        for &x in &d {
            let l = (exponent / gcd_u(exponent, x)) as u128 * x as u128;
            if l > MAX_EXPONENT as u128 {
                return Err(cap(format!("group exponent exceeds {}", MAX_EXPONENT)));
            }
            exponent = l as u64;
        }
        Ok(FiniteAbelianGroup { d, exponent })
    }

    /// Invariant-factor form of `∏ ℤ_{m_i}`.
    pub fn normalized(moduli: &[u64]) -> Result<Self> {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &m in moduli {
            if m == 0 {
                return Err(invalid("modulus 0 names an infinite group"));
            }
            for (p, e) in prime_powers(m) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let k = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut d = vec![1u64; k];
        for (p, mut es) in by_prime {
            es.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, e) in es.into_iter().enumerate() {
                let f = p.checked_pow(e).ok_or_else(|| cap("modulus overflow"))?;
                d[k - 1 - slot] = d[k - 1 - slot].checked_mul(f).ok_or_else(|| cap("modulus overflow"))?;
            }
        }
        Self::from_moduli(d)
    }

    /// Parses `"Z4xZ2"`, `"Z6"`, or `"0"` for the trivial group.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s == "1" || s.is_empty() {
            return Self::from_moduli(Vec::new());
        }
        let mut mods = Vec::new();
        for part in s.split(['x', '×', '*']) {
            let part = part.trim();
            let n = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('ℤ'))
                .ok_or_else(|| invalid(format!("bad cyclic factor {part:?}")))?;
            let m: u64 = n.parse().map_err(|_| invalid(format!("bad modulus {n:?}")))?;
            if m == 1 {
                continue;
            }
            mods.push(m);
        }
        Self::normalized(&mods)
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { d: Vec::new(), exponent: 1 }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.d
    }

    pub fn rank(&self) -> usize {
        self.d.len()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_invariant_form(&self) -> bool {
        self.d.windows(2).all(|w| w[1] % w[0] == 0)
    }

    pub fn order(&self) -> BigUint {
        self.d.iter().fold(BigUint::one(), |a, &x| a * x)
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.d.iter().try_fold(1u64, |a, &x| a.checked_mul(x))
    }

    /// `K^n` as moduli repeated `n` times.
    pub fn power(&self, n: usize) -> Result<Self> {
        let mut d = Vec::with_capacity(self.d.len() * n);
        for _ in 0..n {
            d.extend_from_slice(&self.d);
        }
        Self::from_moduli(d)
    }

    /// The prime `p` if every modulus equals `p`.
    pub fn elementary_prime(&self) -> Option<u64> {
        let p = *self.d.first()?;
        (self.d.iter().all(|&x| x == p) && prime_powers(p).len() == 1 && prime_powers(p)[0].1 == 1).then_some(p)
    }

    pub fn reduce(&self, x: &[i128]) -> Element {
        x.iter().zip(&self.d).map(|(&v, &m)| v.rem_euclid(m as i128) as u64).collect()
    }

    pub fn contains_element(&self, x: &[u64]) -> bool {
        x.len() == self.d.len() && x.iter().zip(&self.d).all(|(v, m)| v < m)
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Element {
        x.iter().zip(y).zip(&self.d).map(|((a, b), m)| (a + b) % m).collect()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.d.len()]
    }

    /// `⟨x, y⟩·exp(G) mod exp(G)`: zero iff the pairing vanishes.
    pub fn pairing(&self, x: &[u64], y: &[u64]) -> u64 {
        let e = self.exponent as u128;
        let s: u128 = x.iter().zip(y).zip(&self.d).map(|((&a, &b), &m)| (a as u128 * b as u128 % m as u128) * (e / m as u128)).sum();
        (s % e) as u64
    }

    /// All elements in lexicographic order; capped.
    pub fn elements(&self, limit: usize) -> Result<Vec<Element>> {
        let n = self.order_u64().filter(|&n| n as usize <= limit).ok_or_else(|| cap("too many elements to enumerate"))?;
        let mut out = Vec::with_capacity(n as usize);
        let mut x = self.zero();
        loop {
            out.push(x.clone());
            let mut i = self.d.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                x[i] += 1;
                if x[i] < self.d[i] {
                    break;
                }
                x[i] = 0;
            }
        }
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup(&[]).expect("empty generator list").with_unit_basis()
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup(&[]).expect("empty generator list")
    }

    /// `⟨gens⟩` in canonical form.
    pub fn subgroup(&self, gens: &[Element]) -> Result<Subgroup> {
        for g in gens {
            if g.len() != self.rank() {
                return Err(invalid(format!("generator {:?} has the wrong length for {}", g, self)));
            }
        }
        let gi: Mat = gens.iter().map(|g| g.iter().map(|&x| x as i128).collect()).collect();
        Ok(self.from_lattice_gens(&gi))
    }

    fn from_lattice_gens(&self, gens: &Mat) -> Subgroup {
        let h = hnf(gens, &self.d);
        Subgroup { group: self.clone(), hnf: h.into_iter().map(|r| r.into_iter().map(|x| x as u64).collect()).collect() }
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.d.iter().map(|m| format!("Z{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// A subgroup, stored as the Hermite basis of its preimage lattice in
/// `ℤ^k`.  Row `i` has its pivot in column `i`; the pivot divides `d_i` and
/// entries above it are reduced.  Equal subgroups have equal rows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    group: FiniteAbelianGroup,
    hnf: Vec<Vec<u64>>,
}

impl Subgroup {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn hnf(&self) -> &[Vec<u64>] {
        &self.hnf
    }

    /// Canonical byte layout: rank, then each row as little-endian `u64`s.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = (self.hnf.len() as u64).to_le_bytes().to_vec();
        for &m in self.group.moduli() {
            out.extend_from_slice(&m.to_le_bytes());
        }
        for r in &self.hnf {
            for &x in r {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    fn with_unit_basis(mut self) -> Self {
        let k = self.hnf.len();
        self.hnf = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
        self
    }

    /// `[G : N] = ∏ pivots`.
    pub fn index(&self) -> BigUint {
        self.hnf.iter().enumerate().fold(BigUint::one(), |a, (i, r)| a * r[i])
    }

    pub fn order(&self) -> BigUint {
        self.group.order() / self.index()
    }

    /// Generators: the basis rows reduced into `G`, zero rows dropped.
    pub fn generators(&self) -> Vec<Element> {
        self.hnf
            .iter()
            .map(|r| r.iter().zip(self.group.moduli()).map(|(&x, &m)| x % m).collect::<Element>())
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect()
    }

    fn lattice(&self) -> Mat {
        self.hnf.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        let mut v: Vec<i128> = x.iter().map(|&a| a as i128).collect();
        for (i, r) in self.hnf.iter().enumerate() {
            let p = r[i] as i128;
            if v[i].rem_euclid(p) != 0 {
                return false;
            }
            let q = v[i].div_euclid(p);
            for j in i..v.len() {
                v[j] -= q * r[j] as i128;
            }
        }
        true
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self.generators().iter().all(|g| other.contains(g)))
    }

    fn same_ambient(&self, other: &Subgroup) -> Result<()> {
        if self.group != other.group {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(other)?;
        let mut gens = self.lattice();
        gens.extend(other.lattice());
        Ok(self.group.from_lattice_gens(&gens))
    }

    /// `N^⊥ ≤ Ĝ ≅ G`: the `y` with `Σ h_i·y_i·(e/d_i) ≡ 0 (mod e)` for every
    /// basis row `h`, `e` the exponent.
    pub fn annihilator(&self) -> Subgroup {
        let g = &self.group;
        let e = g.exponent() as i128;
        let c: Mat = self
            .hnf
            .iter()
            .map(|r| r.iter().zip(g.moduli()).map(|(&h, &m)| h as i128 * (e / m as i128)).collect())
            .collect();
        let ker = kernel_mod(c, g.rank(), e);
        g.from_lattice_gens(&ker)
    }

    /// `B^⊤ ≤ G` for `B ≤ Ĝ`.  The pairing is symmetric, so this is the same
    /// computation read in the other direction.
    pub fn co_annihilator(&self) -> Subgroup {
        self.annihilator()
    }

    /// `N₁ ∩ N₂ = (N₁^⊥ + N₂^⊥)^⊤`.
    pub fn meet(&self, other: &Subgroup) -> Result<Subgroup> {
        Ok(self.annihilator().sum(&other.annihilator())?.co_annihilator())
    }

    /// `x ∈ N ⇔ (x·W)_t ≡ 0 (mod g_t)`, rows scaled to the exponent:
    /// `Σ_j x_j·c_{tj} ≡ 0 (mod e)`.
    fn congruence_rows(&self) -> Mat {
        let e = self.group.exponent() as i128;
        let (w, g) = congruences(&self.lattice(), e);
        let k = self.group.rank();
        (0..k).map(|t| (0..k).map(|j| (w[j][t] * (e / g[t])).rem_euclid(e)).collect()).collect()
    }

    /// `N₁ ∩ N₂` by stacking the congruence systems of both, without duality.
    pub fn meet_direct(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(other)?;
        let mut c = self.congruence_rows();
        c.extend(other.congruence_rows());
        let g = &self.group;
        Ok(g.from_lattice_gens(&kernel_mod(c, g.rank(), g.exponent() as i128)))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|g| format!("{:?}", g)).collect();
        write!(f, "<{}> in {}", gens.join(", "), self.group)
    }
}

/// `x ↦ A·x` with `A_{ij}` a multiple of `d_i / gcd(d_i, d_j)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endomorphism {
    group: FiniteAbelianGroup,
    a: Vec<Vec<u64>>,
}

impl Endomorphism {
    /// Validates compatibility and reduces row `i` modulo `d_i`.
    pub fn new(group: &FiniteAbelianGroup, a: &[Vec<i64>]) -> Result<Self> {
        let d = group.moduli();
        let k = d.len();
        if a.len() != k || a.iter().any(|r| r.len() != k) {
            return Err(invalid(format!("matrix must be {k}x{k} for {group}")));
        }
        let mut m = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let v = (a[i][j] as i128).rem_euclid(d[i] as i128) as u64;
                let need = d[i] / gcd_u(d[i], d[j]);
                if v % need != 0 {
                    return Err(invalid(format!(
                        "entry ({i},{j}) = {} is not a multiple of {need}, so Z{} -> Z{} is not well defined",
                        a[i][j], d[j], d[i]
                    )));
                }
                m[i][j] = v;
            }
        }
        Ok(Endomorphism { group: group.clone(), a: m })
    }

    pub fn identity(group: &FiniteAbelianGroup) -> Self {
        let k = group.rank();
        let a = (0..k).map(|i| (0..k).map(|j| u64::from(i == j) % group.moduli()[i]).collect()).collect();
        Endomorphism { group: group.clone(), a }
    }

    pub fn scalar(group: &FiniteAbelianGroup, m: i64) -> Result<Self> {
        let k = group.rank();
        let a: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| if i == j { m } else { 0 }).collect()).collect();
        Self::new(group, &a)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.a
    }

    pub fn apply(&self, x: &[u64]) -> Element {
        let d = self.group.moduli();
        (0..d.len())
            .map(|i| {
                let m = d[i] as u128;
                (self.a[i].iter().zip(x).map(|(&a, &b)| a as u128 * b as u128 % m).sum::<u128>() % m) as u64
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.group != other.group {
            return Err(Error::AmbientMismatch);
        }
        let d = self.group.moduli();
        let k = d.len();
        let a = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let m = d[i] as u128;
                        ((0..k).map(|l| self.a[i][l] as u128 * other.a[l][j] as u128 % m).sum::<u128>() % m) as u64
                    })
                    .collect()
            })
            .collect();
        Ok(Endomorphism { group: self.group.clone(), a })
    }

    /// `φ̂(χ) = χ∘φ` on `Ĝ ≅ G`: `B_{ji} = A_{ij}·d_j / d_i`.
    pub fn dual(&self) -> Endomorphism {
        let d = self.group.moduli();
        let k = d.len();
        let mut b = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let v = self.a[i][j] as u128 * d[j] as u128;
                debug_assert_eq!(v % d[i] as u128, 0);
                b[j][i] = ((v / d[i] as u128) % d[j] as u128) as u64;
            }
        }
        Endomorphism { group: self.group.clone(), a: b }
    }

    pub fn image(&self, n: &Subgroup) -> Result<Subgroup> {
        if n.group != self.group {
            return Err(Error::AmbientMismatch);
        }
        let gens: Vec<Element> = n.generators().iter().map(|g| self.apply(g)).collect();
        self.group.subgroup(&gens)
    }

    /// `φ^{-1}(N)` through duality: `(φ̂(N^⊥))^⊤`.
    pub fn preimage(&self, n: &Subgroup) -> Result<Subgroup> {
        Ok(self.dual().image(&n.annihilator())?.co_annihilator())
    }

    /// `φ^{-1}(N)` from the congruence system of `N`: `A·x ∈ N` is linear in
    /// `x`.
    pub fn preimage_direct(&self, n: &Subgroup) -> Result<Subgroup> {
        if n.group != self.group {
            return Err(Error::AmbientMismatch);
        }
        let g = &self.group;
        let e = g.exponent() as i128;
        let k = g.rank();
        let rows = n.congruence_rows();
        // a lift of A to Z with rows scaled so A·(x + d_j e_j) ≡ A·x mod the lattice
        let c: Mat = rows
            .iter()
            .map(|w| (0..k).map(|j| (0..k).map(|l| w[l] * self.a[l][j] as i128).sum::<i128>().rem_euclid(e)).collect())
            .collect();
        Ok(g.from_lattice_gens(&kernel_mod(c, k, e)))
    }

    /// First `(k, m)`, `k > m ≥ 1`, with `φ^k = φ^m`.
    pub fn quasi_period(&self, limit: usize) -> Result<(usize, usize)> {
        let mut seen: BTreeMap<Vec<Vec<u64>>, usize> = BTreeMap::new();
        let mut p = self.clone();
        for k in 1..=limit {
            if let Some(&m) = seen.get(&p.a) {
                return Ok((k, m));
            }
            seen.insert(p.a.clone(), k);
            p = p.compose(self)?;
        }
        Err(cap(format!("no repetition among the first {limit} powers")))
    }
}

/// `(𝓕(G), +)` with `v(N) = log|N|`.
#[derive(Clone, Debug)]
pub struct SubgroupSums(pub FiniteAbelianGroup);

/// `(𝓒(G), ∩)` with `v(N) = log[G : N]`.
#[derive(Clone, Debug)]
pub struct SubgroupMeets(pub FiniteAbelianGroup);

fn lattice_flags() -> CarrierFlags {
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

impl Carrier for SubgroupSums {
    type Elem = Subgroup;

    fn op(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        a.sum(b)
    }

    fn norm(&self, a: &Subgroup) -> Result<LogValue> {
        Ok(LogValue::ln_big(&a.order()))
    }

    fn flags(&self) -> CarrierFlags {
        lattice_flags()
    }

    fn leq(&self, a: &Subgroup, b: &Subgroup) -> Option<bool> {
        a.is_subgroup_of(b).ok()
    }
}

impl Carrier for SubgroupMeets {
    type Elem = Subgroup;

    fn op(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        a.meet(b)
    }

    fn norm(&self, a: &Subgroup) -> Result<LogValue> {
        Ok(LogValue::ln_big(&a.index()))
    }

    fn flags(&self) -> CarrierFlags {
        lattice_flags()
    }

    fn leq(&self, a: &Subgroup, b: &Subgroup) -> Option<bool> {
        b.is_subgroup_of(a).ok()
    }
}

/// `𝔰𝔲𝔟(φ)`: `N ↦ φ(N)` on `(𝓕(G), +)`.
pub struct SubFlow {
    carrier: SubgroupSums,
    pub phi: Endomorphism,
}

impl SubFlow {
    pub fn new(phi: Endomorphism) -> Self {
        SubFlow { carrier: SubgroupSums(phi.group().clone()), phi }
    }
}

impl Flow for SubFlow {
    type C = SubgroupSums;

    fn carrier(&self) -> &SubgroupSums {
        &self.carrier
    }

    fn apply(&self, x: &Subgroup) -> Result<Subgroup> {
        self.phi.image(x)
    }

    fn contractive(&self) -> bool {
        true
    }
}

/// `𝔰𝔲𝔟*(φ)`: `N ↦ φ^{-1}(N)` on `(𝓒(G), ∩)`.
pub struct CoSubFlow {
    carrier: SubgroupMeets,
    pub phi: Endomorphism,
}

impl CoSubFlow {
    pub fn new(phi: Endomorphism) -> Self {
        CoSubFlow { carrier: SubgroupMeets(phi.group().clone()), phi }
    }
}

impl Flow for CoSubFlow {
    type C = SubgroupMeets;

    fn carrier(&self) -> &SubgroupMeets {
        &self.carrier
    }

    fn apply(&self, x: &Subgroup) -> Result<Subgroup> {
        self.phi.preimage(x)
    }

    fn contractive(&self) -> bool {
        true
    }
}

const POWER_LIMIT: usize = 1 << 16;

fn quasi_periodic_zero(phi: &Endomorphism) -> Result<EntropyEstimate> {
    let (k, m) = phi.quasi_period(POWER_LIMIT)?;
    Ok(EntropyEstimate {
        c: Vec::new(),
        classification: Classification::Exact { value: LogValue::zero(), rule: ExactRule::QuasiPeriodic { k, m } },
        witness: None,
    })
}

/// `ent(φ)` on a finite group: zero, certified by `φ^k = φ^m`.
pub fn ent_finite(phi: &Endomorphism) -> Result<EntropyEstimate> {
    quasi_periodic_zero(phi)
}

/// `ent*(φ)` on a finite group; the certificate is the same power relation.
pub fn ent_star_finite(phi: &Endomorphism) -> Result<EntropyEstimate> {
    quasi_periodic_zero(phi)
}

/// `log_p |N|` for `N` in an elementary abelian `p`-group.
pub fn dim_norm(n: &Subgroup) -> Result<u32> {
    let p = n.group().elementary_prime().ok_or_else(|| invalid("not an elementary abelian p-group"))?;
    let mut o = n.order();
    let mut k = 0;
    while o > BigUint::one() {
        o /= p;
        k += 1;
    }
    Ok(k)
}

/// `ent_dim(φ) = ent(φ)/log p`, in dimension units (a count).
pub fn ent_dim(phi: &Endomorphism) -> Result<EntropyEstimate> {
    if phi.group().elementary_prime().is_none() {
        return Err(invalid(format!("{} is not elementary abelian", phi.group())));
    }
    let mut e = quasi_periodic_zero(phi)?;
    if let Classification::Exact { value, .. } = &mut e.classification {
        *value = LogValue::count(0);
    }
    Ok(e)
}

/// Per-step data of the bridge `N ↦ N^⊥` between cotrajectories of `φ` and
/// trajectories of `φ̂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeissVerdict {
    /// `[G : C_n(φ, N)]`, `n = 1..=n_max`.
    pub index: Vec<BigUint>,
    /// `|T_n(φ̂, N^⊥)|`.
    pub dual_order: Vec<BigUint>,
    pub first_mismatch: Option<usize>,
}

impl WeissVerdict {
    pub fn pass(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Computes `C_n` with direct congruence arithmetic and `T_n` with Hermite
/// sums, then compares.
pub fn bridge_check_weiss(phi: &Endomorphism, n: &Subgroup, n_max: usize) -> Result<WeissVerdict> {
    if n.group() != phi.group() {
        return Err(Error::AmbientMismatch);
    }
    let dual = phi.dual();
    let mut index = Vec::with_capacity(n_max);
    let mut dual_order = Vec::with_capacity(n_max);
    let (mut c, mut pre) = (n.clone(), n.clone());
    let perp = n.annihilator();
    let (mut t, mut img) = (perp.clone(), perp);
    for step in 1..=n_max {
        if step > 1 {
            pre = phi.preimage_direct(&pre)?;
            c = c.meet_direct(&pre)?;
            img = dual.image(&img)?;
            t = t.sum(&img)?;
        }
        index.push(c.index());
        dual_order.push(t.order());
    }
    let first_mismatch = index.iter().zip(&dual_order).position(|(a, b)| a != b).map(|i| i + 1);
    Ok(WeissVerdict { index, dual_order, first_mismatch })
}
