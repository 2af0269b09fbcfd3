//! JSON descriptions of flows and bridge cases.
//!
//! Every struct rejects unknown fields.  Optional fields are omitted on
//! output, so a spec written in canonical form re-serializes byte for byte.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Rational number: a JSON integer or a string `"n/d"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratio(pub BigRational);

impl Ratio {
    pub fn int(n: i64) -> Self {
        Ratio(BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Ratio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| format!("bad rational {s:?}"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad rational {s:?}"))?;
        if d == BigInt::from(0) {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Ratio(BigRational::new(n, d)))
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_integer().to_i64() {
            Some(n) if self.0.is_integer() => s.serialize_i64(n),
            _ => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Ratio::int(n)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_elem_bits: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cardinality: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cover: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_words: Option<usize>,
}

impl Caps {
    pub fn is_empty(&self) -> bool {
        *self == Caps::default()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Caps::is_empty")]
    pub caps: Caps,
}

impl Params {
    pub fn is_default(&self) -> bool {
        *self == Params::default()
    }
}

fn is_default<T: Default + PartialEq>(t: &T) -> bool {
    *t == T::default()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowSpec {
    Semigroup(SemigroupSpec),
    Selfmap(SelfmapSpec),
    FiniteAbelian(AbelianSpec),
    Shift(ShiftSpec),
    Space(SpaceSpec),
    Frame(FrameSpec),
    Symbolic(SymbolicSpec),
}

impl FlowSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            FlowSpec::Semigroup(_) => "semigroup",
            FlowSpec::Selfmap(_) => "selfmap",
            FlowSpec::FiniteAbelian(_) => "finite_abelian",
            FlowSpec::Shift(_) => "shift",
            FlowSpec::Space(_) => "space",
            FlowSpec::Frame(_) => "frame",
            FlowSpec::Symbolic(_) => "symbolic",
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            FlowSpec::Semigroup(s) => s.name.as_deref(),
            FlowSpec::Selfmap(s) => s.name.as_deref(),
            FlowSpec::FiniteAbelian(s) => s.name.as_deref(),
            FlowSpec::Shift(s) => s.name.as_deref(),
            FlowSpec::Space(s) => s.name.as_deref(),
            FlowSpec::Frame(s) => s.name.as_deref(),
            FlowSpec::Symbolic(s) => s.name.as_deref(),
        }
    }

    pub fn params(&self) -> &Params {
        match self {
            FlowSpec::Semigroup(s) => &s.params,
            FlowSpec::Selfmap(s) => &s.params,
            FlowSpec::FiniteAbelian(s) => &s.params,
            FlowSpec::Shift(s) => &s.params,
            FlowSpec::Space(s) => &s.params,
            FlowSpec::Frame(s) => &s.params,
            FlowSpec::Symbolic(s) => &s.params,
        }
    }
}

// ---- semigroup ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NatNormSpec {
    Identity,
    Log,
    Power(Ratio),
    Periodic(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordNormSpec {
    Ascents,
    Runs,
}

/// A norm value `count + q·ln m`; omitted parts are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<Ratio>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Ratio>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidTable {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub norm: Vec<ValueSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonoidSpec {
    /// `ℤ_d` with `v(x) = ln |⟨x⟩|`.
    Cyclic(usize),
    Table(MonoidTable),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftSide {
    #[default]
    Right,
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SemigroupFlow {
    /// `x ↦ a·x` on `(ℕ, +)`.
    Rho { a: u64, norm: NatNormSpec },
    /// `x_i ↦ x_{i+step}` on the free semigroup.
    IndexShift { step: i64, norm: WordNormSpec },
    /// Bernoulli shift on `M^(ℕ)`.
    Bernoulli {
        monoid: MonoidSpec,
        #[serde(default, skip_serializing_if = "is_default")]
        direction: ShiftSide,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectorySide {
    #[default]
    Right,
    Left,
}

/// Witnesses depend on the flow type: integers for `rho`, words (lists of
/// integers) for `index_shift`, coordinate lists for `bernoulli`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub flow: SemigroupFlow,
    #[serde(default, skip_serializing_if = "is_default")]
    pub side: TrajectorySide,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Params::is_default")]
    pub params: Params,
}

// ---- selfmaps ----

/// Vertex references are `"name"` or `"name@k"`: a core point, or the point
/// at depth `k` of a ray, anti-ray or fan.
/// Serialized as the pair `[name, succ]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(String, String)", into = "(String, String)")]
pub struct CoreSpec {
    pub name: String,
    pub succ: String,
}

impl From<(String, String)> for CoreSpec {
    fn from((name, succ): (String, String)) -> Self {
        CoreSpec { name, succ }
    }
}

impl From<CoreSpec> for (String, String) {
    fn from(c: CoreSpec) -> Self {
        (c.name, c.succ)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntiSpec {
    pub name: String,
    pub exit: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub name: String,
    pub target: String,
}

/// Either a preset (`"pakex"`, `"successor"`) or an explicit graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub core: Vec<CoreSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rays: Vec<String>,
    #[serde(default, rename = "antirays", skip_serializing_if = "Vec::is_empty")]
    pub anti_rays: Vec<AntiSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fans: Vec<FanSpec>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetVariant {
    /// `𝔥`, image trajectories.
    #[default]
    H,
    /// `𝔥*`, preimage trajectories.
    Star,
    /// `𝔥ₚ*`, preimage trajectories on the surjective core.
    StarP,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetMode {
    #[default]
    Trajectory,
    Structural,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfmapSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub graph: GraphSpec,
    #[serde(default, skip_serializing_if = "is_default")]
    pub variant: SetVariant,
    #[serde(default, skip_serializing_if = "is_default")]
    pub mode: SetMode,
    /// Finite subsets; empty means the canonical witness.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Params::is_default")]
    pub params: Params,
}

// ---- finite abelian groups ----

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbelianFunctor {
    /// `N ↦ φ(N)` on subgroups under `+`.
    #[default]
    Sub,
    /// `N ↦ φ⁻¹(N)` on subgroups under `∩`.
    CoSub,
    Ent,
    EntStar,
    EntDim,
}

/// `group` is written like `"Z4xZ2"` and normalized to invariant factors in
/// ascending divisibility order; matrices and elements use those coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group: String,
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub functor: AbelianFunctor,
    /// Subgroups, each given by a list of generators.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Params::is_default")]
    pub params: Params,
}

// ---- generalized shifts ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftDirection {
    /// `τ_λ` on `K^(X)`, algebraic entropy.
    #[serde(rename = "tau")]
    Forward,
    /// `σ_λ` on `K^X`, topological entropy.
    #[serde(rename = "sigma")]
    Backward,
    /// `σ_λ^⊕` on `K^(X)`, algebraic entropy.
    #[serde(rename = "sigma_oplus")]
    BackwardRestricted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Group spec such as `"Z2"`.
    #[serde(rename = "base")]
    pub group: String,
    #[serde(rename = "map")]
    pub graph: GraphSpec,
    pub direction: ShiftDirection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Params::is_default")]
    pub params: Params,
}

// ---- finite spaces and frames ----

/// Finite space as a preorder; each pair `[a, b]` means `a ≤ b`, so the
/// minimal open set of `a` contains `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order_pairs: Vec<[String; 2]>,
    /// Image of each point, in the order of `points`.
    pub map: Vec<String>,
    /// Open covers, each a list of open sets given as point lists; empty
    /// means the cover by minimal open sets.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Params::is_default")]
    pub params: Params,
}

/// Finite frame presented by its poset of join-irreducibles.  Elements are
/// written as lists of irreducibles and stand for their join.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub irreducibles: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order_pairs: Vec<[String; 2]>,
    /// Image of each irreducible.
    pub images: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Params::is_default")]
    pub params: Params,
}

// ---- symbolic systems ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovSpec {
    pub pi: Vec<Ratio>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<Ratio>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemSpec {
    Bernoulli(Vec<Ratio>),
    Markov(MarkovSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledSpec {
    pub depth: usize,
    pub labels: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionSpec {
    Cylinders(usize),
    Labeled(LabeledSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub system: SystemSpec,
    /// Partitions; empty means the time-zero coordinate partition.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<PartitionSpec>,
    #[serde(default, skip_serializing_if = "Params::is_default")]
    pub params: Params,
}

// ---- bridge cases ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeissCase {
    pub name: String,
    pub group: String,
    pub matrix: Vec<Vec<i64>>,
    pub subgroup: Vec<Vec<u64>>,
    pub n_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftCase {
    pub name: String,
    pub graph: GraphSpec,
    /// A group such as `"Z2"`, or `"infinite"` (not for `sigma_tau`).
    pub group: String,
    pub n_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceCase {
    pub name: String,
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order_pairs: Vec<[String; 2]>,
    pub map: Vec<String>,
    /// Empty means the cover by minimal open sets.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cover: Vec<Vec<String>>,
    pub n_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenCase {
    pub name: String,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum CaseSpec {
    #[serde(rename = "weiss_finite")]
    WeissFinite(WeissCase),
    #[serde(rename = "sigma_tau")]
    SigmaTau(ShiftCase),
    #[serde(rename = "set_to_top")]
    SetToTop(ShiftCase),
    #[serde(rename = "set_to_alg")]
    SetToAlg(ShiftCase),
    #[serde(rename = "set_to_alg_oplus")]
    SetToAlgOplus(ShiftCase),
    #[serde(rename = "frame_O")]
    FrameO(SpaceCase),
    #[serde(rename = "t0_reflection")]
    T0Reflection(SpaceCase),
    #[serde(rename = "open")]
    Open(OpenCase),
}

pub fn parse_flow(text: &str) -> Result<FlowSpec, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

pub fn parse_case(text: &str) -> Result<CaseSpec, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

/// Canonical pretty form, with a trailing newline.
pub fn to_canonical<T: Serialize>(spec: &T) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("specs always serialize");
    s.push('\n');
    s
}
