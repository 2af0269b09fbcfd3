//! Exact logarithmic quantities.
//!
//! An exact value is a finite sum `u + Σ e_b·ln b` where `u` is a rational
//! count (the "unit" base used by set-theoretic cardinalities) and each `b`
//! is an integer > 1.  Bases are kept pairwise coprime and free of perfect
//! powers, which makes the logarithms linearly independent over ℚ: two exact
//! values are equal iff their normalized term lists agree.  Ordering of
//! distinct values is decided by an f64 fast path and, when that is too close
//! to call, by fixed-point evaluation with escalating precision.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Starting precision (bits) for exact comparisons.
pub const DEFAULT_PRECISION: u32 = 128;
/// Precision ceiling for the escalation in [`LogValue::cmp`].
pub const MAX_PRECISION: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    /// The count unit: contributes its coefficient verbatim.
    Unit,
    /// `ln b` for an integer `b > 1`.
    Log(BigUint),
}

/// A normalized exact sum of logarithms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LogSum {
    terms: Vec<(Base, BigRational)>,
}

#[derive(Clone, Debug)]
pub enum LogValue {
    Exact(LogSum),
    Infinite,
    Approx(f64),
}

fn coprime_insert(list: &mut Vec<BigUint>, x: BigUint) {
    if x.is_one() || x.is_zero() {
        return;
    }
    for i in 0..list.len() {
        if list[i] == x {
            return;
        }
        let g = list[i].gcd(&x);
        if !g.is_one() {
            let y = list.swap_remove(i);
            let yg = &y / &g;
            let xg = &x / &g;
            coprime_insert(list, g);
            coprime_insert(list, yg);
            coprime_insert(list, xg);
            return;
        }
    }
    list.push(x);
}

const SMALL_PRIMES: [u32; 25] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn is_prime_u32(k: u32) -> bool {
    k >= 2 && (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)
}

/// Largest `k` with `n = r^k`, together with `r`.
fn perfect_root(n: &BigUint) -> (BigUint, u32) {
    let bits = n.bits() as u32;
    for k in (2..=bits).filter(|&k| is_prime_u32(k)) {
        let r = n.nth_root(k);
        if r > BigUint::one() && num_traits::pow(r.clone(), k as usize) == *n {
            let (rr, kk) = perfect_root(&r);
            return (rr, kk * k);
        }
    }
    (n.clone(), 1)
}

fn small_prime_split(n: BigUint, out: &mut Vec<BigUint>) -> BigUint {
    // strip small prime factors so most inputs never need gcd refinement
    if let Some(mut m) = n.to_u64() {
        for &p in SMALL_PRIMES.iter() {
            let p = p as u64;
            if m % p == 0 {
                out.push(BigUint::from(p));
                while m % p == 0 {
                    m /= p;
                }
            }
        }
        return BigUint::from(m);
    }
    let mut n = n;
    for &p in SMALL_PRIMES.iter() {
        if (&n % p).is_zero() {
            out.push(BigUint::from(p));
            while (&n % p).is_zero() {
                n /= p;
            }
        }
    }
    n
}

impl LogSum {
    pub fn zero() -> Self {
        LogSum { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(Base, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Builds a normalized sum from arbitrary `(base, coefficient)` pairs.
    /// `Log` bases equal to one are dropped; zero is rejected by panicking
    /// since `ln 0` has no value.
    pub fn from_raw(raw: Vec<(Base, BigRational)>) -> Self {
        let mut unit = BigRational::zero();
        let mut ints: Vec<(BigUint, BigRational)> = Vec::new();
        for (b, c) in raw {
            if c.is_zero() {
                continue;
            }
            match b {
                Base::Unit => unit += c,
                Base::Log(n) => {
                    assert!(!n.is_zero(), "logarithm of zero");
                    if !n.is_one() {
                        ints.push((n, c));
                    }
                }
            }
        }
        let mut basis: Vec<BigUint> = Vec::new();
        let mut seeds = Vec::new();
        for (n, _) in &ints {
            let rest = small_prime_split(n.clone(), &mut seeds);
            seeds.push(rest);
        }
        for s in seeds {
            coprime_insert(&mut basis, s);
        }
        let mut roots: Vec<(BigUint, BigUint, u32)> = basis
            .into_iter()
            .map(|b| {
                let (r, k) = perfect_root(&b);
                (b, r, k)
            })
            .collect();
        roots.sort_by(|a, b| a.1.cmp(&b.1));
        roots.dedup_by(|a, b| a.1 == b.1);
        let mut coef: Vec<BigRational> = alloc::vec![BigRational::zero(); roots.len()];
        for (n, c) in ints {
            let mut rest = n;
            for (i, (_, r, _)) in roots.iter().enumerate() {
                let mut e = 0i64;
                loop {
                    let (q, rem) = rest.div_rem(r);
                    if !rem.is_zero() {
                        break;
                    }
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    coef[i] += &c * BigRational::from_integer(BigInt::from(e));
                }
            }
            debug_assert!(rest.is_one(), "coprime basis failed to cover input");
        }
        let mut terms = Vec::new();
        if !unit.is_zero() {
            terms.push((Base::Unit, unit));
        }
        for ((_, r, _), c) in roots.into_iter().zip(coef) {
            if !c.is_zero() {
                terms.push((Base::Log(r), c));
            }
        }
        LogSum { terms }
    }

    fn merged(&self, other: &LogSum, sign: i32) -> LogSum {
        let flip = |c: &BigRational| if sign < 0 { -c.clone() } else { c.clone() };
        // both sides are normalized; if their bases are equal or coprime the
        // union is normalized too and a keyed merge suffices
        let compatible = other.terms.iter().all(|(b, _)| match b {
            Base::Unit => true,
            Base::Log(y) => self.terms.iter().all(|(a, _)| match a {
                Base::Unit => true,
                Base::Log(x) => x == y || x.gcd(y).is_one(),
            }),
        });
        if !compatible {
            let mut raw = self.terms.clone();
            raw.extend(other.terms.iter().map(|(b, c)| (b.clone(), flip(c))));
            return LogSum::from_raw(raw);
        }
        let mut terms: Vec<(Base, BigRational)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let pick = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match pick {
                Ordering::Less => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push((other.terms[j].0.clone(), flip(&other.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + flip(&other.terms[j].1);
                    if !c.is_zero() {
                        terms.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        LogSum { terms }
    }

    pub fn scaled(&self, r: &BigRational) -> LogSum {
        if r.is_zero() {
            return LogSum::zero();
        }
        LogSum {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * r)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut s = 0.0;
        for (b, c) in &self.terms {
            let cf = ratio_f64(c);
            s += match b {
                Base::Unit => cf,
                Base::Log(n) => cf * ln_big_f64(n),
            };
        }
        s
    }

    fn abs_f64(&self) -> f64 {
        let mut s = 0.0;
        for (b, c) in &self.terms {
            let cf = libm::fabs(ratio_f64(c));
            s += match b {
                Base::Unit => cf,
                Base::Log(n) => cf * ln_big_f64(n),
            };
        }
        s
    }

    /// Sign of the value: exact when all coefficients agree in sign, else by
    /// interval evaluation with precision doubling from `prec` up to `max`.
    pub fn signum(&self, prec: u32, max: u32) -> Option<Ordering> {
        if self.terms.is_empty() {
            return Some(Ordering::Equal);
        }
        if self.terms.iter().all(|(_, c)| c.is_positive()) {
            return Some(Ordering::Greater);
        }
        if self.terms.iter().all(|(_, c)| c.is_negative()) {
            return Some(Ordering::Less);
        }
        let f = self.to_f64();
        let mag = self.abs_f64();
        if libm::fabs(f) > 1e-9 * mag.max(1.0) {
            return Some(if f > 0.0 { Ordering::Greater } else { Ordering::Less });
        }
        let mut w = prec.max(64);
        while w <= max {
            let (approx, err) = self.fixed_point(w);
            if approx.abs() > err {
                return Some(if approx.is_positive() { Ordering::Greater } else { Ordering::Less });
            }
            w = w.saturating_mul(2);
        }
        None
    }

    /// Value scaled by `2^w` and an upper bound on the absolute error.
    fn fixed_point(&self, w: u32) -> (BigInt, BigInt) {
        let mut acc = BigInt::zero();
        let mut err = BigInt::zero();
        for (b, c) in &self.terms {
            let num = c.numer();
            let den = c.denom();
            match b {
                Base::Unit => {
                    let scaled = (num << w as usize).div_floor(den);
                    acc += scaled;
                    err += 1;
                }
                Base::Log(n) => {
                    let (l, e) = ln_fixed(n, w);
                    acc += (num * &l).div_floor(den);
                    err += (num.abs() * e).div_ceil(den) + 1;
                }
            }
        }
        (acc, err)
    }

    /// If `self = r·other` for a rational `r`, returns it.
    pub fn ratio_to(&self, other: &LogSum) -> Option<BigRational> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let (b0, c0) = &other.terms[0];
        let mine = self.terms.iter().find(|(b, _)| b == b0)?;
        let r = &mine.1 / c0;
        if other.scaled(&r) == *self {
            Some(r)
        } else {
            // bases may differ only by refinement; compare via difference
            let diff = self.merged(&other.scaled(&r), -1);
            if diff.is_zero() {
                Some(r)
            } else {
                None
            }
        }
    }

    /// When the value is `q·ln m` with `m` rational, returns `(q, m)` with
    /// `q > 0` maximal such that `m` is not a perfect power.  Values with a
    /// count component return `None`.
    pub fn as_q_log_m(&self) -> Option<(BigRational, BigRational)> {
        if self.terms.iter().any(|(b, _)| *b == Base::Unit) {
            return None;
        }
        if self.terms.is_empty() {
            return Some((BigRational::zero(), BigRational::one()));
        }
        let mut g_num = BigInt::zero();
        let mut l_den = BigInt::one();
        for (_, c) in &self.terms {
            g_num = g_num.gcd(c.numer());
            l_den = l_den.lcm(c.denom());
        }
        let mut q = BigRational::new(g_num, l_den);
        let lead_neg = self.terms.iter().all(|(_, c)| c.is_negative());
        if lead_neg {
            q = -q;
        }
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (b, c) in &self.terms {
            let Base::Log(n) = b else { unreachable!() };
            let e = c / &q;
            debug_assert!(e.is_integer());
            let e = e.to_integer();
            let k = e.abs().to_usize().expect("exponent fits usize");
            let p = num_traits::pow(n.clone(), k);
            if e.is_positive() {
                num *= p;
            } else {
                den *= p;
            }
        }
        Some((
            q,
            BigRational::new(BigInt::from_biguint(Sign::Plus, num), BigInt::from_biguint(Sign::Plus, den)),
        ))
    }

    /// Coefficient of the count unit when the value is a pure count.
    pub fn as_count(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(Base::Unit, c)] => Some(c.clone()),
            _ => None,
        }
    }

    /// `e^{self}` when the value is the log of a rational number.
    pub fn exp_rational(&self) -> Option<BigRational> {
        let mut r = BigRational::one();
        for (b, c) in &self.terms {
            let Base::Log(n) = b else { return None };
            if !c.is_integer() {
                return None;
            }
            let e = c.to_integer();
            let k = e.abs().to_usize()?;
            let p = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, num_traits::pow(n.clone(), k)));
            if e.is_positive() {
                r *= p;
            } else {
                r /= p;
            }
        }
        Some(r)
    }
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().bits() as i64 - r.denom().bits() as i64;
        if n > 0 {
            f64::INFINITY
        } else {
            0.0
        }
    })
}

fn ln_big_f64(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        if let Some(f) = n.to_f64() {
            return libm::log(f);
        }
    }
    let shift = bits - 64;
    let top = (n >> shift as usize).to_f64().unwrap();
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// `2·atanh(a/b)` scaled by `2^s`, with an error bound in ulps.
fn two_atanh_fixed(a: &BigUint, b: &BigUint, s: u32) -> (BigInt, u64) {
    let a = BigInt::from_biguint(Sign::Plus, a.clone());
    let b = BigInt::from_biguint(Sign::Plus, b.clone());
    let a2 = &a * &a;
    let b2 = &b * &b;
    let mut power: BigInt = (&a << s as usize) / &b;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * j + 1);
        power = (&power * &a2) / &b2;
        j += 1;
    }
    // power errors stay below 1.2 ulp (t² ≤ 1/9), each term adds < 2.2 ulps
    (sum << 1usize, 6 * (j + 1))
}

/// `ln n` scaled by `2^w` together with an error bound (in units of `2^-w`).
fn ln_fixed(n: &BigUint, w: u32) -> (BigInt, BigInt) {
    const GUARD: u32 = 40;
    let s = w + GUARD;
    let k = n.bits() - 1;
    let pk = BigUint::one() << k as usize;
    let (ln2, e2) = two_atanh_fixed(&BigUint::one(), &BigUint::from(3u32), s);
    let (lm, em) = two_atanh_fixed(&(n - &pk), &(n + &pk), s);
    let total = ln2 * BigInt::from(k) + lm;
    let err_ulps = e2 * k + em + 2;
    // drop the guard bits; floor adds one more ulp
    let v = total >> GUARD as usize;
    let err = BigInt::from(err_ulps >> GUARD) + 2;
    (v, err)
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue::Exact(LogSum::zero())
    }

    /// A pure count `n` (set cardinalities, ray numbers).
    pub fn count(n: i64) -> Self {
        LogValue::count_ratio(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn count_ratio(r: BigRational) -> Self {
        LogValue::Exact(LogSum::from_raw(alloc::vec![(Base::Unit, r)]))
    }

    /// `ln n` for an integer `n ≥ 1`.
    pub fn ln_int(n: u64) -> Self {
        LogValue::ln_big(&BigUint::from(n))
    }

    pub fn ln_big(n: &BigUint) -> Self {
        LogValue::Exact(LogSum::from_raw(alloc::vec![(Base::Log(n.clone()), BigRational::one())]))
    }

    /// `ln r` for a positive rational `r`.
    pub fn ln_ratio(r: &BigRational) -> Self {
        assert!(r.is_positive(), "logarithm of non-positive rational");
        let n = r.numer().to_biguint().unwrap();
        let d = r.denom().to_biguint().unwrap();
        LogValue::Exact(LogSum::from_raw(alloc::vec![
            (Base::Log(n), BigRational::one()),
            (Base::Log(d), -BigRational::one()),
        ]))
    }

    /// `q·ln m`.
    pub fn q_log(q: BigRational, m: u64) -> Self {
        LogValue::Exact(LogSum::from_raw(alloc::vec![(Base::Log(BigUint::from(m)), q)]))
    }

    pub fn from_sum(s: LogSum) -> Self {
        LogValue::Exact(s)
    }

    pub fn approx(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN log value");
        if x.is_infinite() {
            LogValue::Infinite
        } else {
            LogValue::Approx(x)
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LogValue::Exact(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LogValue::Infinite)
    }

    pub fn exact(&self) -> Option<&LogSum> {
        match self {
            LogValue::Exact(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LogValue::Exact(s) => s.is_zero(),
            LogValue::Approx(x) => *x == 0.0,
            LogValue::Infinite => false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            LogValue::Exact(s) => s.to_f64(),
            LogValue::Infinite => f64::INFINITY,
            LogValue::Approx(x) => *x,
        }
    }

    pub fn add(&self, other: &LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Infinite, _) | (_, LogValue::Infinite) => LogValue::Infinite,
            (LogValue::Exact(a), LogValue::Exact(b)) => LogValue::Exact(a.merged(b, 1)),
            _ => LogValue::approx(self.to_f64() + other.to_f64()),
        }
    }

    /// Difference; `∞ − ∞` is not defined and yields `None`.
    pub fn sub(&self, other: &LogValue) -> Option<LogValue> {
        match (self, other) {
            (LogValue::Infinite, LogValue::Infinite) => None,
            (LogValue::Infinite, _) => Some(LogValue::Infinite),
            (_, LogValue::Infinite) => None,
            (LogValue::Exact(a), LogValue::Exact(b)) => Some(LogValue::Exact(a.merged(b, -1))),
            _ => Some(LogValue::Approx(self.to_f64() - other.to_f64())),
        }
    }

    /// Multiplication by a rational; `0·∞ = 0`.
    pub fn scale(&self, r: &BigRational) -> LogValue {
        match self {
            LogValue::Exact(s) => LogValue::Exact(s.scaled(r)),
            LogValue::Infinite => {
                if r.is_zero() {
                    LogValue::zero()
                } else {
                    LogValue::Infinite
                }
            }
            LogValue::Approx(x) => LogValue::Approx(x * ratio_f64(r)),
        }
    }

    pub fn div_int(&self, n: u64) -> LogValue {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(n)))
    }

    /// Product of a count with another value (`𝔥 · log|K|`).  Exactly one
    /// side must be a pure count when both are exact.
    pub fn mul_count(&self, other: &LogValue) -> Option<LogValue> {
        match (self, other) {
            (LogValue::Exact(a), LogValue::Exact(b)) => {
                if let Some(c) = a.as_count() {
                    Some(LogValue::Exact(b.scaled(&c)))
                } else {
                    b.as_count().map(|c| LogValue::Exact(a.scaled(&c)))
                }
            }
            (LogValue::Infinite, x) | (x, LogValue::Infinite) => Some(if x.is_zero() {
                LogValue::zero()
            } else {
                LogValue::Infinite
            }),
            _ => Some(LogValue::approx(self.to_f64() * other.to_f64())),
        }
    }

    /// Rational `r` with `self = r·other`, when both are exact.
    pub fn ratio_to(&self, other: &LogValue) -> Option<BigRational> {
        match (self, other) {
            (LogValue::Exact(a), LogValue::Exact(b)) => a.ratio_to(b),
            _ => None,
        }
    }

    /// Ordering with explicit precision control; `None` if the interval
    /// evaluation could not separate the values within `max_bits`.
    pub fn try_cmp(&self, other: &LogValue, prec: u32, max_bits: u32) -> Option<Ordering> {
        match (self, other) {
            (LogValue::Infinite, LogValue::Infinite) => Some(Ordering::Equal),
            (LogValue::Infinite, _) => Some(Ordering::Greater),
            (_, LogValue::Infinite) => Some(Ordering::Less),
            (LogValue::Exact(a), LogValue::Exact(b)) => a.merged(b, -1).signum(prec, max_bits),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }

    pub fn max(self, other: LogValue) -> LogValue {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: LogValue) -> LogValue {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Human-oriented rendering: `count n`, `q·ln m`, `∞` or a float.
    pub fn render(&self) -> String {
        alloc::format!("{}", self)
    }
}

impl PartialEq for LogValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (LogValue::Exact(a), LogValue::Exact(b)) => a == b,
            (LogValue::Infinite, LogValue::Infinite) => true,
            (LogValue::Approx(a), LogValue::Approx(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for LogValue {}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogValue {
    /// # Panics
    /// If two distinct exact values cannot be separated at
    /// [`MAX_PRECISION`] bits.
    fn cmp(&self, other: &Self) -> Ordering {
        if let (LogValue::Approx(_), LogValue::Approx(_))
        | (LogValue::Approx(_), LogValue::Exact(_))
        | (LogValue::Exact(_), LogValue::Approx(_)) = (self, other)
        {
            return self.to_f64().total_cmp(&other.to_f64());
        }
        self.try_cmp(other, DEFAULT_PRECISION, MAX_PRECISION)
            .expect("log values too close to separate")
    }
}

fn fmt_ratio(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for LogSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if let Some(c) = self.as_count() {
            return fmt_ratio(f, &c);
        }
        if let Some((q, m)) = self.as_q_log_m() {
            if !q.is_one() {
                fmt_ratio(f, &q)?;
                write!(f, "*")?;
            }
            write!(f, "ln(")?;
            fmt_ratio(f, &m)?;
            return write!(f, ")");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            fmt_ratio(f, c)?;
            if let Base::Log(n) = b {
                write!(f, "*ln({})", n)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogValue::Exact(s) => write!(f, "{}", s),
            LogValue::Infinite => write!(f, "inf"),
            LogValue::Approx(x) => write!(f, "~{:.12}", x),
        }
    }
}
