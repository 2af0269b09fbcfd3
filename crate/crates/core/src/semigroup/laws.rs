//! Executable versions of the general entropy laws.  Each check computes both
//! sides independently and only asserts equality when both are exact.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::format;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::carriers::{ProductFlow, ProductNorm};
use super::{
    semigroup_entropy, trajectory_elements, trajectory_norms, Carrier, ElemOf, EntropyConfig, EntropyReport, Flow,
    Power, Side,
};
use crate::error::{Error, Result};
use crate::logvalue::LogValue;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawStatus {
    Holds,
    Fails,
    /// At least one side is not exactly classified.
    Inconclusive,
    Inapplicable(String),
}

#[derive(Clone, Debug)]
pub struct LawVerdict {
    pub law: String,
    pub status: LawStatus,
    pub lhs: Option<EntropyReport>,
    pub rhs: Option<LogValue>,
}

impl LawVerdict {
    fn inapplicable(law: String, why: &str) -> Self {
        LawVerdict { law, status: LawStatus::Inapplicable(why.into()), lhs: None, rhs: None }
    }

    fn compare(law: String, lhs: EntropyReport, rhs: LogValue, rhs_exact: bool) -> Self {
        let status = if !(lhs.is_exact() && rhs_exact) {
            LawStatus::Inconclusive
        } else if lhs.value() == rhs {
            LawStatus::Holds
        } else {
            LawStatus::Fails
        };
        LawVerdict { law, status, lhs: Some(lhs), rhs: Some(rhs) }
    }

    pub fn holds(&self) -> bool {
        self.status == LawStatus::Holds
    }
}

/// `h(φ^k) = k·h(φ)`.  The witnesses for `φ^k` are the given ones together
/// with `T_k(φ, x)`, whose `φ^k`-trajectory is `T_{nk}(φ, x)`.
pub fn log_law<F: Flow>(flow: &F, k: usize, witnesses: &[ElemOf<F>], cfg: &EntropyConfig) -> Result<LawVerdict> {
    let law = format!("log_law(k = {k})");
    let flags = flow.carrier().flags();
    if !(flags.commutative && flags.d_monotone) {
        return Ok(LawVerdict::inapplicable(law, "needs a commutative d-monotone carrier"));
    }
    if k == 0 {
        return Ok(LawVerdict::inapplicable(law, "k must be positive"));
    }
    let base = semigroup_entropy(flow, witnesses, cfg)?;
    let power = Power { base: flow, k };
    let mut ws: Vec<ElemOf<F>> = witnesses.to_vec();
    for x in witnesses {
        let t = trajectory_elements(flow, x, k, Side::Right, &cfg.budget)?;
        ws.push(t[k - 1].clone());
    }
    let lhs = semigroup_entropy(&power, &ws, cfg)?;
    let rhs = base.value().scale(&BigRational::from_integer(BigInt::from(k)));
    Ok(LawVerdict::compare(law, lhs, rhs, base.is_exact()))
}

/// Conjugation by a norm-preserving isomorphism `α: S → T`: the conjugate
/// flow `α∘φ∘α⁻¹` must have identical norm sequences on `α(x)`.
pub struct Conjugate<'a, F: Flow, T: Carrier> {
    pub base: &'a F,
    pub target: &'a T,
    pub fwd: Box<dyn Fn(&ElemOf<F>) -> T::Elem + 'a>,
    pub back: Box<dyn Fn(&T::Elem) -> ElemOf<F> + 'a>,
}

impl<F: Flow, T: Carrier> Flow for Conjugate<'_, F, T> {
    type C = T;

    fn carrier(&self) -> &T {
        self.target
    }

    fn apply(&self, y: &T::Elem) -> Result<T::Elem> {
        Ok((self.fwd)(&self.base.apply(&(self.back)(y))?))
    }

    fn contractive(&self) -> bool {
        self.base.contractive()
    }
}

pub fn conjugation<F: Flow, T: Carrier>(
    conj: &Conjugate<'_, F, T>,
    witnesses: &[ElemOf<F>],
    cfg: &EntropyConfig,
) -> Result<LawVerdict> {
    let law = String::from("conjugation");
    for x in witnesses {
        let a = trajectory_norms(conj.base, x, cfg.n_max, Side::Right, &cfg.budget)?;
        let b = trajectory_norms(conj, &(conj.fwd)(x), cfg.n_max, Side::Right, &cfg.budget)?;
        if a != b {
            return Ok(LawVerdict { law, status: LawStatus::Fails, lhs: None, rhs: None });
        }
    }
    let base = semigroup_entropy(conj.base, witnesses, cfg)?;
    let mapped: Vec<T::Elem> = witnesses.iter().map(|x| (conj.fwd)(x)).collect();
    let lhs = semigroup_entropy(conj, &mapped, cfg)?;
    Ok(LawVerdict::compare(law, lhs, base.value(), base.is_exact()))
}

fn binary<F1: Flow, F2: Flow>(
    f1: &F1,
    w1: &[ElemOf<F1>],
    f2: &F2,
    w2: &[ElemOf<F2>],
    mode: ProductNorm,
    cfg: &EntropyConfig,
) -> Result<LawVerdict> {
    let law = String::from(match mode {
        ProductNorm::Max => "product_max",
        ProductNorm::Sum => "coproduct_sum",
    });
    let prod = ProductFlow::new(f1, f2, mode);
    if mode == ProductNorm::Sum && !prod.carrier().flags().subadditive {
        return Ok(LawVerdict::inapplicable(law, "the sum formula needs subadditive norms"));
    }
    let h1 = semigroup_entropy(f1, w1, cfg)?;
    let h2 = semigroup_entropy(f2, w2, cfg)?;
    let lhs = semigroup_entropy(&prod, &ProductFlow::<F1, F2>::witnesses(w1, w2), cfg)?;
    let rhs = match mode {
        ProductNorm::Max => h1.value().max(h2.value()),
        ProductNorm::Sum => h1.value().add(&h2.value()),
    };
    Ok(LawVerdict::compare(law, lhs, rhs, h1.is_exact() && h2.is_exact()))
}

/// `h(φ₁ × φ₂) = max{h(φ₁), h(φ₂)}` under the max norm.
pub fn product_max<F1: Flow, F2: Flow>(
    f1: &F1,
    w1: &[ElemOf<F1>],
    f2: &F2,
    w2: &[ElemOf<F2>],
    cfg: &EntropyConfig,
) -> Result<LawVerdict> {
    binary(f1, w1, f2, w2, ProductNorm::Max, cfg)
}

/// `h(φ₁ ⊕ φ₂) = h(φ₁) + h(φ₂)` under the sum norm.
pub fn coproduct_sum<F1: Flow, F2: Flow>(
    f1: &F1,
    w1: &[ElemOf<F1>],
    f2: &F2,
    w2: &[ElemOf<F2>],
    cfg: &EntropyConfig,
) -> Result<LawVerdict> {
    binary(f1, w1, f2, w2, ProductNorm::Sum, cfg)
}

/// `h(φ⁻¹) = h(φ)` for an automorphism of a commutative carrier.  The caller
/// supplies the inverse flow; it is checked on the witnesses' orbits.
pub fn inversion<F: Flow, G: Flow<C = F::C>>(
    flow: &F,
    inverse: &G,
    witnesses: &[ElemOf<F>],
    cfg: &EntropyConfig,
) -> Result<LawVerdict> {
    let law = String::from("inversion");
    if !flow.carrier().flags().commutative {
        return Ok(LawVerdict::inapplicable(law, "needs a commutative carrier"));
    }
    for x in witnesses {
        let y = flow.apply(x)?;
        if inverse.apply(&y)? != *x || flow.apply(&inverse.apply(x)?)? != *x {
            return Err(Error::Inapplicable("supplied inverse does not invert the flow".into()));
        }
    }
    let base = semigroup_entropy(flow, witnesses, cfg)?;
    let lhs = semigroup_entropy(inverse, witnesses, cfg)?;
    Ok(LawVerdict::compare(law, lhs, base.value(), base.is_exact()))
}
