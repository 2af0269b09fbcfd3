//! Concrete carriers: `(ℕ, +)` with its usual norms, free semigroups over a
//! ℤ-indexed alphabet, direct sums of a finite normed monoid with Bernoulli
//! shifts, and binary products.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{
    semigroup_entropy, entropy_on_side, Carrier, CarrierFlags, ElemOf, EntropyConfig, EntropyReport, Flow, Side,
};
use crate::error::{invalid, Result};
use crate::logvalue::LogValue;

/// Norms on `(ℕ, +)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatNorm {
    /// `v(x) = x`, carried as a count.
    Identity,
    /// `v_l(x) = ln(x + 1)`.
    Log,
    /// `v_p(x) = x^p`; irrational in general, so values are approximate.
    Power(BigRational),
    /// `v_a(x) = 0` if `a | x`, else `x`.
    Periodic(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Naturals {
    pub norm: NatNorm,
}

impl Naturals {
    pub fn new(norm: NatNorm) -> Self {
        Naturals { norm }
    }
}

impl Carrier for Naturals {
    type Elem = BigUint;

    fn op(&self, a: &BigUint, b: &BigUint) -> Result<BigUint> {
        Ok(a + b)
    }

    fn norm(&self, a: &BigUint) -> Result<LogValue> {
        Ok(match &self.norm {
            NatNorm::Identity => LogValue::count_ratio(BigRational::from_integer(a.clone().into())),
            NatNorm::Log => LogValue::ln_big(&(a + 1u32)),
            NatNorm::Power(p) => {
                let x = a.to_f64().unwrap_or(f64::INFINITY);
                LogValue::approx(libm::pow(x, p.to_f64().unwrap_or(1.0)))
            }
            NatNorm::Periodic(m) => {
                if (a % *m).is_zero() {
                    LogValue::zero()
                } else {
                    LogValue::count_ratio(BigRational::from_integer(a.clone().into()))
                }
            }
        })
    }

    fn flags(&self) -> CarrierFlags {
        let (subadditive, arithmetic, monotone) = match &self.norm {
            NatNorm::Identity => (true, false, true),
            NatNorm::Log => (true, true, true),
            NatNorm::Power(p) => {
                let sub = *p <= BigRational::from_integer(1.into());
                let arith = p.is_zero();
                (sub, arith, true)
            }
            NatNorm::Periodic(_) => (false, false, false),
        };
        CarrierFlags {
            subadditive,
            arithmetic,
            monotone_norm: monotone,
            d_monotone: monotone,
            commutative: true,
            has_identity: true,
            structured: matches!(self.norm, NatNorm::Identity | NatNorm::Log),
        }
    }

    fn leq(&self, a: &BigUint, b: &BigUint) -> Option<bool> {
        Some(a <= b)
    }

    fn size_bits(&self, a: &BigUint) -> u64 {
        a.bits()
    }
}

/// `ρ_a: x ↦ a·x`; every endomorphism of `(ℕ, +)` has this form.
#[derive(Clone, Debug)]
pub struct Rho {
    pub carrier: Naturals,
    pub a: u64,
}

impl Flow for Rho {
    type C = Naturals;

    fn carrier(&self) -> &Naturals {
        &self.carrier
    }

    fn apply(&self, x: &BigUint) -> Result<BigUint> {
        Ok(x * self.a)
    }

    fn contractive(&self) -> bool {
        self.a <= 1
    }
}

/// Entropy of `ρ_a`, with the upgrades that hold for every witness:
/// under `v_l` the value is `ln a` for each `x > 0`, and under `v(x) = x`
/// the identity has `h(id, x) = x`, which is unbounded.
pub fn rho_entropy(rho: &Rho, witnesses: &[BigUint], cfg: &EntropyConfig) -> Result<EntropyReport> {
    let report = semigroup_entropy(rho, witnesses, cfg)?;
    let nonzero = witnesses.iter().any(|w| !w.is_zero());
    Ok(match (&rho.carrier.norm, rho.a) {
        (NatNorm::Log, a) if a >= 2 && nonzero && report.estimate.classification.is_exact() => {
            report.certify("T_{n+1} = x + a·T_n for every witness x > 0, so ln(T_n + 1) grows like n·ln a")
        }
        (NatNorm::Identity, 1) if nonzero => report.unbounded("h(id, x) = x for every x"),
        _ => report,
    })
}

/// Norms on the free semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordNorm {
    /// Number of ascending adjacent index pairs, plus one.
    Ascents,
    /// Length of the longest run of consecutive indices `i, i+1, …`.
    Runs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeSemigroup {
    pub norm: WordNorm,
}

impl Carrier for FreeSemigroup {
    type Elem = Vec<i64>;

    fn op(&self, a: &Vec<i64>, b: &Vec<i64>) -> Result<Vec<i64>> {
        let mut w = a.clone();
        w.extend_from_slice(b);
        Ok(w)
    }

    fn norm(&self, w: &Vec<i64>) -> Result<LogValue> {
        if w.is_empty() {
            return Err(invalid("the free semigroup has no empty word"));
        }
        let v = match self.norm {
            WordNorm::Ascents => 1 + w.windows(2).filter(|p| p[0] < p[1]).count(),
            WordNorm::Runs => {
                let mut best = 1;
                let mut run = 1;
                for p in w.windows(2) {
                    run = if p[1] == p[0] + 1 { run + 1 } else { 1 };
                    best = best.max(run);
                }
                best
            }
        };
        Ok(LogValue::count(v as i64))
    }

    fn flags(&self) -> CarrierFlags {
        CarrierFlags { subadditive: true, ..CarrierFlags::default() }
    }

    fn size_bits(&self, w: &Vec<i64>) -> u64 {
        64 * w.len() as u64
    }
}

/// The index shift `x_i ↦ x_{i+step}`.
#[derive(Clone, Debug)]
pub struct IndexShift {
    pub carrier: FreeSemigroup,
    pub step: i64,
}

impl Flow for IndexShift {
    type C = FreeSemigroup;

    fn carrier(&self) -> &FreeSemigroup {
        &self.carrier
    }

    fn apply(&self, w: &Vec<i64>) -> Result<Vec<i64>> {
        Ok(w.iter().map(|i| i + self.step).collect())
    }

    fn contractive(&self) -> bool {
        true
    }
}

/// Entropy of the index shift with the closed form for one-letter witnesses:
/// the right trajectory of `x_i` under `x ↦ x_{+1}` is `x_i x_{i+1} … `,
/// so both norms grow by one per step, while the left trajectory is strictly
/// descending and both norms stay at one.  For the run norm, words of length
/// `k > 1` have trajectory norms below `2k`, so one-letter witnesses attain
/// the sup.
pub fn index_shift_entropy(
    shift: &IndexShift,
    witnesses: &[Vec<i64>],
    side: Side,
    cfg: &EntropyConfig,
) -> Result<EntropyReport> {
    let report = entropy_on_side(shift, witnesses, cfg, side)?;
    if shift.step.abs() != 1 || witnesses.iter().any(|w| w.len() != 1) {
        return Ok(report);
    }
    let forward = (shift.step == 1) == (side == Side::Right);
    let value = if forward { LogValue::count(1) } else { LogValue::zero() };
    let report = report.certify_witnesses("one-letter trajectory closed form", |_| value.clone())?;
    Ok(if shift.carrier.norm == WordNorm::Runs {
        report.certify("one-letter words attain the sup; longer words have bounded run norms")
    } else {
        report
    })
}

/// A finite monoid given by its multiplication table, with a norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub norm: Vec<LogValue>,
}

impl FiniteMonoid {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>, norm: Vec<LogValue>) -> Result<Self> {
        let n = table.len();
        if n == 0 || names.len() != n || norm.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(invalid("monoid table must be square over the named elements"));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(invalid(format!("multiplication is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| invalid("monoid has no identity"))?;
        if !norm[identity].is_zero() {
            return Err(invalid("norm of the identity must be 0"));
        }
        if norm.iter().any(|v| *v < LogValue::zero()) {
            return Err(invalid("norm values must be non-negative"));
        }
        Ok(FiniteMonoid { names, table, identity, norm })
    }

    /// `(ℤ_d, +)` with `v(x) = ln |⟨x⟩|`.
    pub fn cyclic_order_norm(d: usize) -> Self {
        let names = (0..d).map(|i| format!("{i}")).collect();
        let table = (0..d).map(|a| (0..d).map(|b| (a + b) % d).collect()).collect();
        let norm = (0..d).map(|x| LogValue::ln_int((d / num_integer::gcd(x, d)) as u64)).collect();
        FiniteMonoid::new(names, table, norm).expect("cyclic group")
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn is_subadditive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| self.norm[self.table[a][b]] <= self.norm[a].add(&self.norm[b])))
    }

    pub fn max_norm(&self) -> LogValue {
        self.norm.iter().cloned().fold(LogValue::zero(), LogValue::max)
    }
}

/// `B(M) = M^(ℕ)` with the sum norm.  Elements carry no trailing identities.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub monoid: FiniteMonoid,
    flags: CarrierFlags,
}

impl DirectSum {
    pub fn new(monoid: FiniteMonoid) -> Self {
        let flags = CarrierFlags {
            subadditive: monoid.is_subadditive(),
            arithmetic: false,
            monotone_norm: false,
            d_monotone: false,
            commutative: monoid.is_commutative(),
            has_identity: true,
            structured: false,
        };
        DirectSum { monoid, flags }
    }

    fn trim(&self, mut v: Vec<usize>) -> Vec<usize> {
        while v.last() == Some(&self.monoid.identity) {
            v.pop();
        }
        v
    }

    pub fn single(&self, m: usize) -> Vec<usize> {
        self.trim(vec![m])
    }
}

impl Carrier for DirectSum {
    type Elem = Vec<usize>;

    fn op(&self, a: &Vec<usize>, b: &Vec<usize>) -> Result<Vec<usize>> {
        let e = self.monoid.identity;
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| self.monoid.mul(*a.get(i).unwrap_or(&e), *b.get(i).unwrap_or(&e)))
            .collect();
        Ok(self.trim(v))
    }

    fn norm(&self, a: &Vec<usize>) -> Result<LogValue> {
        Ok(a.iter().fold(LogValue::zero(), |s, &x| s.add(&self.monoid.norm[x])))
    }

    fn flags(&self) -> CarrierFlags {
        self.flags
    }

    fn size_bits(&self, a: &Vec<usize>) -> u64 {
        8 * a.len() as u64
    }
}

/// Right Bernoulli shift `(x_0, x_1, …) ↦ (1, x_0, x_1, …)` or the left one
/// `(x_0, x_1, …) ↦ (x_1, x_2, …)`.
#[derive(Clone, Debug)]
pub struct BernoulliShift {
    pub carrier: DirectSum,
    pub right: bool,
}

impl Flow for BernoulliShift {
    type C = DirectSum;

    fn carrier(&self) -> &DirectSum {
        &self.carrier
    }

    fn apply(&self, x: &Vec<usize>) -> Result<Vec<usize>> {
        if self.right {
            if x.is_empty() {
                return Ok(Vec::new());
            }
            let mut v = Vec::with_capacity(x.len() + 1);
            v.push(self.carrier.monoid.identity);
            v.extend_from_slice(x);
            Ok(v)
        } else {
            Ok(x.iter().skip(1).copied().collect())
        }
    }

    fn contractive(&self) -> bool {
        self.right
    }
}

/// `h(β_M)` over the one-coordinate witnesses, certified equal to
/// `max_{x∈M} v(x)`: such a witness has `T_n = (x, …, x)`, and any finitely
/// supported `x` has limit `v(x_k ⋯ x_0) ≤ max v`.
pub fn bernoulli_entropy(shift: &BernoulliShift, cfg: &EntropyConfig) -> Result<EntropyReport> {
    let m = &shift.carrier.monoid;
    let witnesses: Vec<Vec<usize>> = (0..m.len()).map(|x| vec![x]).collect();
    let trimmed: Vec<Vec<usize>> = witnesses.iter().map(|w| shift.carrier.trim(w.clone())).collect();
    let report = semigroup_entropy(shift, &trimmed, cfg)?;
    if !shift.right {
        return Ok(report);
    }
    let report = report.certify_witnesses("one-coordinate witness has T_n = (x, …, x)", |i| m.norm[i].clone())?;
    Ok(report.certify("witness limits are v(x_k ⋯ x_0) ≤ max v, attained on one coordinate"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductNorm {
    Max,
    Sum,
}

/// Binary product with the max norm, or coproduct with the sum norm.
pub struct Product<'a, C1: Carrier, C2: Carrier> {
    pub left: &'a C1,
    pub right: &'a C2,
    pub mode: ProductNorm,
}

impl<C1: Carrier, C2: Carrier> Carrier for Product<'_, C1, C2> {
    type Elem = (C1::Elem, C2::Elem);

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok((self.left.op(&a.0, &b.0)?, self.right.op(&a.1, &b.1)?))
    }

    fn norm(&self, a: &Self::Elem) -> Result<LogValue> {
        let x = self.left.norm(&a.0)?;
        let y = self.right.norm(&a.1)?;
        Ok(match self.mode {
            ProductNorm::Max => x.max(y),
            ProductNorm::Sum => x.add(&y),
        })
    }

    fn flags(&self) -> CarrierFlags {
        let a = self.left.flags();
        let b = self.right.flags();
        CarrierFlags {
            subadditive: a.subadditive && b.subadditive,
            arithmetic: a.arithmetic && b.arithmetic,
            monotone_norm: a.monotone_norm && b.monotone_norm,
            d_monotone: a.d_monotone && b.d_monotone,
            commutative: a.commutative && b.commutative,
            has_identity: a.has_identity && b.has_identity,
            structured: a.structured && b.structured,
        }
    }

    fn size_bits(&self, a: &Self::Elem) -> u64 {
        self.left.size_bits(&a.0) + self.right.size_bits(&a.1)
    }
}

pub struct ProductFlow<'a, F1: Flow, F2: Flow> {
    pub carrier: Product<'a, F1::C, F2::C>,
    pub left: &'a F1,
    pub right: &'a F2,
}

impl<'a, F1: Flow, F2: Flow> ProductFlow<'a, F1, F2> {
    pub fn new(left: &'a F1, right: &'a F2, mode: ProductNorm) -> Self {
        ProductFlow { carrier: Product { left: left.carrier(), right: right.carrier(), mode }, left, right }
    }

    pub fn witnesses(w1: &[ElemOf<F1>], w2: &[ElemOf<F2>]) -> Vec<(ElemOf<F1>, ElemOf<F2>)> {
        w1.iter().flat_map(|a| w2.iter().map(move |b| (a.clone(), b.clone()))).collect()
    }
}

impl<'a, F1: Flow, F2: Flow> Flow for ProductFlow<'a, F1, F2> {
    type C = Product<'a, F1::C, F2::C>;

    fn carrier(&self) -> &Self::C {
        &self.carrier
    }

    fn apply(&self, x: &(ElemOf<F1>, ElemOf<F2>)) -> Result<(ElemOf<F1>, ElemOf<F2>)> {
        Ok((self.left.apply(&x.0)?, self.right.apply(&x.1)?))
    }

    fn contractive(&self) -> bool {
        self.left.contractive() && self.right.contractive()
    }
}
