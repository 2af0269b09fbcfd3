//! Measure entropy of the left shift on finite-alphabet sequence spaces
//! carrying a Bernoulli or stationary Markov measure.
//!
//! Partitions are cylinder partitions of some depth `d`, optionally
//! coarsened by a labeling of the length-`d` words.  All measures are exact
//! rationals and Boltzmann entropies are exact [`LogValue`] sums.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{cap, invalid, Result};
use crate::logvalue::LogValue;
use crate::semigroup::{
    estimate_entropy, CarrierFlags, Classification, EntropyConfig, EntropyEstimate, EntropyReport, EstimatorFlags, ExactRule, Scope,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Measure {
    Bernoulli(Vec<BigRational>),
    Markov { pi: Vec<BigRational>, p: Vec<Vec<BigRational>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicSystem {
    alphabet: usize,
    measure: Measure,
}

fn check_distribution(p: &[BigRational], what: &str) -> Result<()> {
    if p.iter().any(|x| x.is_negative()) {
        return Err(invalid(format!("{what} has a negative entry")));
    }
    if p.iter().fold(BigRational::zero(), |a, x| a + x) != BigRational::one() {
        return Err(invalid(format!("{what} does not sum to 1")));
    }
    Ok(())
}

impl SymbolicSystem {
    pub fn bernoulli(p: Vec<BigRational>) -> Result<Self> {
        if p.is_empty() {
            return Err(invalid("empty alphabet"));
        }
        check_distribution(&p, "probability vector")?;
        Ok(SymbolicSystem { alphabet: p.len(), measure: Measure::Bernoulli(p) })
    }

    /// Markov measure with initial law `pi` and transitions `p`; `pi` must be
    /// exactly stationary.
    pub fn markov(pi: Vec<BigRational>, p: Vec<Vec<BigRational>>) -> Result<Self> {
        let a = pi.len();
        if a == 0 || p.len() != a || p.iter().any(|r| r.len() != a) {
            return Err(invalid("transition matrix must be square and match the initial law"));
        }
        check_distribution(&pi, "initial law")?;
        for (i, r) in p.iter().enumerate() {
            check_distribution(r, &format!("transition row {i}"))?;
        }
        for j in 0..a {
            let s = (0..a).fold(BigRational::zero(), |acc, i| acc + &pi[i] * &p[i][j]);
            if s != pi[j] {
                return Err(invalid(format!("initial law is not stationary at state {j}")));
            }
        }
        Ok(SymbolicSystem { alphabet: a, measure: Measure::Markov { pi, p } })
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    fn initial(&self, s: usize) -> &BigRational {
        match &self.measure {
            Measure::Bernoulli(p) => &p[s],
            Measure::Markov { pi, .. } => &pi[s],
        }
    }

    fn step(&self, s: usize, t: usize) -> &BigRational {
        match &self.measure {
            Measure::Bernoulli(p) => &p[t],
            Measure::Markov { p, .. } => &p[s][t],
        }
    }

    /// `μ[w]` of the cylinder fixed by `w` at coordinates `0..|w|`.
    pub fn cylinder(&self, w: &[usize]) -> BigRational {
        match w.split_first() {
            None => BigRational::one(),
            Some((&s, rest)) => {
                let mut m = self.initial(s).clone();
                let mut prev = s;
                for &t in rest {
                    m *= self.step(prev, t);
                    prev = t;
                }
                m
            }
        }
    }

    /// Product system on the alphabet of pairs `(x, y)`, coded `x·|B| + y`.
    pub fn product(&self, other: &SymbolicSystem) -> Result<SymbolicSystem> {
        let (a, b) = (self.alphabet, other.alphabet);
        let pair = |x: usize| (x / b, x % b);
        let pi: Vec<BigRational> = (0..a * b).map(|x| self.initial(pair(x).0) * other.initial(pair(x).1)).collect();
        match (&self.measure, &other.measure) {
            (Measure::Bernoulli(_), Measure::Bernoulli(_)) => SymbolicSystem::bernoulli(pi),
            _ => {
                let p = (0..a * b)
                    .map(|x| (0..a * b).map(|y| self.step(pair(x).0, pair(y).0) * other.step(pair(x).1, pair(y).1)).collect())
                    .collect();
                SymbolicSystem::markov(pi, p)
            }
        }
    }

    /// `−Σ_i π_i Σ_j P_ij log P_ij`.
    pub fn entropy_rate(&self) -> LogValue {
        let a = self.alphabet;
        let mut w: BTreeMap<BigRational, BigRational> = BTreeMap::new();
        for i in 0..a {
            let pi = self.initial(i);
            if pi.is_zero() {
                continue;
            }
            for j in 0..a {
                let p = self.step(i, j);
                if !p.is_zero() {
                    *w.entry(p.clone()).or_insert_with(BigRational::zero) += pi * p;
                }
            }
        }
        weighted_neg_log(&w)
    }
}

/// `Σ weight·log(1/μ)` over a map `μ ↦ weight`.
fn weighted_neg_log(w: &BTreeMap<BigRational, BigRational>) -> LogValue {
    w.iter().fold(LogValue::zero(), |acc, (mu, wt)| acc.add(&LogValue::ln_ratio(&mu.recip()).scale(wt)))
}

/// Depth-`d` partition: length-`d` words (coded base `a`, first symbol most
/// significant) mapped to block labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    alphabet: usize,
    depth: usize,
    labels: Vec<u32>,
}

impl Partition {
    /// Cylinders of length `d`, one block per word.
    pub fn cylinders(alphabet: usize, depth: usize) -> Result<Self> {
        let n = word_count(alphabet, depth, usize::MAX)?;
        Ok(Partition { alphabet, depth, labels: (0..n as u32).collect() })
    }

    /// The time-zero coordinate partition.
    pub fn coordinate(alphabet: usize) -> Self {
        Partition::cylinders(alphabet, 1).expect("one letter per block")
    }

    pub fn trivial(alphabet: usize) -> Self {
        Partition { alphabet, depth: 0, labels: vec![0] }
    }

    pub fn labeled(alphabet: usize, depth: usize, labels: Vec<u32>) -> Result<Self> {
        let n = word_count(alphabet, depth, usize::MAX)?;
        if labels.len() != n {
            return Err(invalid(format!("expected {n} labels, got {}", labels.len())));
        }
        Ok(Partition { alphabet, depth, labels })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// Whether every word is its own block.
    pub fn is_cylinder(&self) -> bool {
        let mut seen = vec![false; self.labels.len()];
        self.labels.iter().all(|&l| (l as usize) < seen.len() && !core::mem::replace(&mut seen[l as usize], true))
    }

    /// `ξ ∨ η` at the larger depth; labels are renumbered densely.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        if self.alphabet != other.alphabet {
            return Err(invalid("partitions on different alphabets"));
        }
        let depth = self.depth.max(other.depth);
        let n = word_count(self.alphabet, depth, usize::MAX)?;
        let mut ids: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        let mut labels = Vec::with_capacity(n);
        let mut w = vec![0usize; depth];
        for code in 0..n {
            let mut c = code;
            for k in (0..depth).rev() {
                w[k] = c % self.alphabet;
                c /= self.alphabet;
            }
            let key = (self.label(&w[..self.depth]), other.label(&w[..other.depth]));
            let next = ids.len() as u32;
            labels.push(*ids.entry(key).or_insert(next));
        }
        Ok(Partition { alphabet: self.alphabet, depth, labels })
    }

    pub fn label(&self, w: &[usize]) -> u32 {
        self.labels[w.iter().fold(0, |acc, &s| acc * self.alphabet + s)]
    }
}

fn word_count(alphabet: usize, depth: usize, limit: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..depth {
        n = n.checked_mul(alphabet).filter(|&n| n <= limit).ok_or_else(|| cap(format!("{alphabet}^{depth} words exceed the cap")))?;
    }
    Ok(n)
}

/// Blocks of `ξ ∨ ψ⁻¹ξ ∨ … ∨ ψ^{−(n−1)}ξ`, keyed by their label sequences.
/// Blocks of measure zero are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderPartition {
    pub depth: usize,
    pub blocks: BTreeMap<Vec<u32>, BigRational>,
}

impl CylinderPartition {
    pub fn total(&self) -> BigRational {
        self.blocks.values().fold(BigRational::zero(), |a, m| a + m)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// `H(ξ) = −Σ μ(A) log μ(A)`.
pub fn boltzmann(xi: &CylinderPartition) -> LogValue {
    let mut w: BTreeMap<BigRational, BigRational> = BTreeMap::new();
    for m in xi.blocks.values().filter(|m| m.is_positive()) {
        *w.entry(m.clone()).or_insert_with(BigRational::zero) += m;
    }
    weighted_neg_log(&w)
}

/// Exact measures of the blocks of `⋁_{j<n} ψ^{−j}(ξ)`.  At most
/// `max_words` words of positive measure are visited.
pub fn join_pullback(sys: &SymbolicSystem, xi: &Partition, n: usize, max_words: usize) -> Result<CylinderPartition> {
    if xi.alphabet != sys.alphabet {
        return Err(invalid("partition and system have different alphabets"));
    }
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let len = xi.depth + n - 1;
    let d = xi.depth;
    let mut blocks: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    let mut visited = 0usize;
    // depth-first over words of positive measure
    let mut stack: Vec<(Vec<usize>, BigRational)> = vec![(Vec::new(), BigRational::one())];
    while let Some((w, m)) = stack.pop() {
        if w.len() == len {
            visited += 1;
            if visited > max_words {
                return Err(cap(format!("more than {max_words} cylinders of length {len}")));
            }
            let key: Vec<u32> = (0..n).map(|j| xi.label(&w[j..j + d])).collect();
            *blocks.entry(key).or_insert_with(BigRational::zero) += m;
            continue;
        }
        for s in (0..sys.alphabet).rev() {
            let p = match w.last() {
                None => sys.initial(s),
                Some(&t) => sys.step(t, s),
            };
            if p.is_positive() {
                let mut w2 = w.clone();
                w2.push(s);
                stack.push((w2, &m * p));
            }
        }
    }
    Ok(CylinderPartition { depth: len, blocks })
}

fn measure_flags(structured: bool) -> EstimatorFlags {
    EstimatorFlags {
        carrier: CarrierFlags {
            subadditive: true,
            arithmetic: true,
            monotone_norm: true,
            d_monotone: true,
            commutative: true,
            has_identity: true,
            structured,
        },
        contractive: true,
    }
}

/// `c_n = H(⋁_{j<n} ψ^{−j}ξ)` for `n = 1..=n_max`.
pub fn mes_norms(sys: &SymbolicSystem, xi: &Partition, n_max: usize, max_words: usize) -> Result<Vec<LogValue>> {
    (1..=n_max).map(|n| Ok(boltzmann(&join_pullback(sys, xi, n, max_words)?))).collect()
}

/// `h_mes(ψ, ξ)` for each witness partition.  For cylinder partitions
/// `c_{n+1} − c_n` is the entropy rate for every `n`, so the slope is exact
/// and is certified against the closed form.
pub fn h_mes(sys: &SymbolicSystem, witnesses: &[Partition], cfg: &EntropyConfig) -> Result<EntropyReport> {
    if witnesses.is_empty() {
        return Err(invalid("witness set is empty"));
    }
    let mut per: Vec<EntropyEstimate> = Vec::new();
    for xi in witnesses {
        let c = mes_norms(sys, xi, cfg.n_max, cfg.budget.max_words)?;
        let cyl = xi.is_cylinder();
        let mut e = estimate_entropy(&c, measure_flags(cyl), cfg.window);
        e.witness = Some(format!("depth {} {}", xi.depth, if cyl { "cylinders" } else { "labeled" }));
        if cyl && xi.depth > 0 {
            let rate = sys.entropy_rate();
            if c.windows(2).any(|w| w[1].sub(&w[0]).as_ref() != Some(&rate)) {
                return Err(invalid("cylinder slope disagrees with the entropy rate"));
            }
            e.classification = Classification::Exact {
                value: rate,
                rule: ExactRule::Certified("cylinder partition: c_n = H(first symbol block) + (n−1)·rate".into()),
            };
        }
        per.push(e);
    }
    Ok(EntropyReport { estimate: crate::semigroup::aggregate(&per), per_witness: per, scope: Scope::WitnessRestricted })
}

/// Rational `n/d` for probability vectors.
pub fn prob(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests;
