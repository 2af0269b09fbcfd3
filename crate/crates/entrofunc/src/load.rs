//! Spec structs to core objects.  Every consistency check the core performs
//! (continuity, associativity, stationarity, ...) surfaces here as a spec
//! error.

use std::collections::BTreeMap;

use entrofunc_core::abelian::{Endomorphism, FiniteAbelianGroup, Subgroup};
use entrofunc_core::bridge::{BridgeCase, CaseKind, KSpec};
use entrofunc_core::logvalue::LogValue;
use entrofunc_core::measure::{Partition, SymbolicSystem};
use entrofunc_core::semigroup::carriers::FiniteMonoid;
use entrofunc_core::sets::{pakex, subset, successor_ray, FiniteSubset, SelfmapGraph, Target, Vertex};
use entrofunc_core::topo::{ContinuousMap, FiniteFrame, FiniteSpace, Mask, OpenCover};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::spec::{CaseSpec, GraphSpec, MonoidSpec, PartitionSpec, SpaceCase, SystemSpec, ValueSpec};
use crate::CliError;

type R<T> = Result<T, CliError>;

fn split_ref(r: &str) -> R<(&str, u64)> {
    match r.split_once('@') {
        None => Ok((r, 0)),
        Some((n, k)) => Ok((n, k.parse().map_err(|_| CliError::spec(format!("bad depth in vertex {r:?}")))?)),
    }
}

pub fn graph(spec: &GraphSpec) -> R<SelfmapGraph> {
    if let Some(p) = &spec.preset {
        if !(spec.core.is_empty() && spec.rays.is_empty() && spec.anti_rays.is_empty() && spec.fans.is_empty()) {
            return Err(CliError::spec("a preset graph takes no explicit components"));
        }
        return match p.as_str() {
            "pakex" => Ok(pakex()),
            "successor" => Ok(successor_ray()),
            other => Err(CliError::spec(format!("unknown graph preset {other:?}"))),
        };
    }
    let core: Vec<&str> = spec.core.iter().map(|c| c.name.as_str()).collect();
    let antis: Vec<&str> = spec.anti_rays.iter().map(|a| a.name.as_str()).collect();
    let target = |r: &str| -> R<Target> {
        let (n, k) = split_ref(r)?;
        if core.contains(&n) {
            if k != 0 {
                return Err(CliError::spec(format!("core point {n} has no depth")));
            }
            Ok(Target::Core(n.into()))
        } else if spec.rays.iter().any(|x| x == n) {
            Ok(Target::Ray(n.into(), k))
        } else if antis.contains(&n) {
            Ok(Target::Anti(n.into(), k))
        } else {
            Err(CliError::spec(format!("unknown vertex {r:?}")))
        }
    };
    let mut b = SelfmapGraph::builder();
    for c in &spec.core {
        b = b.core(&c.name, target(&c.succ)?);
    }
    for r in &spec.rays {
        b = b.ray(r);
    }
    for a in &spec.anti_rays {
        b = b.antiray(&a.name, target(&a.exit)?);
    }
    for f in &spec.fans {
        b = b.fan(&f.name, target(&f.target)?);
    }
    Ok(b.build()?)
}

pub fn vertex(g: &SelfmapGraph, r: &str) -> R<Vertex> {
    let (n, k) = split_ref(r)?;
    let pos = |list: &[String]| list.iter().position(|x| x == n);
    if let Some(i) = pos(g.core_names()) {
        if k == 0 {
            return Ok(Vertex::Core(i));
        }
    } else if let Some(i) = pos(g.ray_names()) {
        return Ok(Vertex::Ray(i, k));
    } else if let Some(i) = pos(g.anti_names()) {
        return Ok(Vertex::Anti(i, k));
    } else if let Some(i) = pos(g.fan_names()) {
        return Ok(Vertex::Fan(i, k));
    }
    Err(CliError::spec(format!("unknown vertex {r:?}")))
}

pub fn vertex_set(g: &SelfmapGraph, refs: &[String]) -> R<FiniteSubset> {
    Ok(subset(refs.iter().map(|r| vertex(g, r)).collect::<R<Vec<_>>>()?))
}

pub fn render_set(g: &SelfmapGraph, s: &[Vertex]) -> String {
    let names: Vec<String> = s.iter().map(|&v| g.name(v)).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn group(s: &str) -> R<FiniteAbelianGroup> {
    Ok(FiniteAbelianGroup::parse(s)?)
}

pub fn kspec(s: &str) -> R<KSpec> {
    if s.trim() == "infinite" {
        Ok(KSpec::Infinite)
    } else {
        Ok(KSpec::Finite(group(s)?))
    }
}

pub fn endomorphism(g: &FiniteAbelianGroup, m: &[Vec<i64>]) -> R<Endomorphism> {
    Ok(Endomorphism::new(g, m)?)
}

pub fn subgroup(g: &FiniteAbelianGroup, gens: &[Vec<u64>]) -> R<Subgroup> {
    if let Some(x) = gens.iter().find(|x| x.len() != g.rank()) {
        return Err(CliError::spec(format!("generator {x:?} has the wrong length for {g}")));
    }
    Ok(g.subgroup(gens)?)
}

pub fn space(points: &[String], pairs: &[[String; 2]]) -> R<FiniteSpace> {
    let idx = index_of(points)?;
    let ps = pairs.iter().map(|[a, b]| Ok((lookup(&idx, a)?, lookup(&idx, b)?))).collect::<R<Vec<_>>>()?;
    Ok(FiniteSpace::new(points.to_vec(), &ps)?)
}

fn index_of(names: &[String]) -> R<BTreeMap<&str, usize>> {
    let mut m = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        if m.insert(n.as_str(), i).is_some() {
            return Err(CliError::spec(format!("duplicate name {n:?}")));
        }
    }
    Ok(m)
}

fn lookup(idx: &BTreeMap<&str, usize>, n: &str) -> R<usize> {
    idx.get(n).copied().ok_or_else(|| CliError::spec(format!("unknown point {n:?}")))
}

pub fn point_mask(sp: &FiniteSpace, names: &[String]) -> R<Mask> {
    let idx = index_of(sp.names())?;
    names.iter().try_fold(0, |acc, n| Ok(acc | 1 << lookup(&idx, n)?))
}

pub fn map(sp: &FiniteSpace, images: &[String]) -> R<ContinuousMap> {
    if images.len() != sp.len() {
        return Err(CliError::spec(format!("map lists {} images for {} points", images.len(), sp.len())));
    }
    let idx = index_of(sp.names())?;
    let im = images.iter().map(|n| lookup(&idx, n)).collect::<R<Vec<_>>>()?;
    Ok(ContinuousMap::new(sp, im)?)
}

pub fn cover(sp: &FiniteSpace, members: &[Vec<String>]) -> R<OpenCover> {
    if members.is_empty() {
        return Ok(OpenCover::minimal_opens(sp));
    }
    let ms = members.iter().map(|m| point_mask(sp, m)).collect::<R<Vec<_>>>()?;
    Ok(OpenCover::new(sp, ms)?)
}

pub fn render_mask(names: &[String], m: Mask) -> String {
    let v: Vec<&str> = (0..names.len()).filter(|&i| m >> i & 1 == 1).map(|i| names[i].as_str()).collect();
    format!("{{{}}}", v.join(", "))
}

pub fn render_cover(names: &[String], ms: &[Mask]) -> String {
    let v: Vec<String> = ms.iter().map(|&m| render_mask(names, m)).collect();
    format!("[{}]", v.join(", "))
}

/// Frame on named irreducibles, plus the index of each name.
pub fn frame(irr: &[String], pairs: &[[String; 2]]) -> R<FiniteFrame> {
    let idx = index_of(irr)?;
    let ps = pairs.iter().map(|[a, b]| Ok((lookup(&idx, a)?, lookup(&idx, b)?))).collect::<R<Vec<_>>>()?;
    Ok(FiniteFrame::from_poset(irr.len(), &ps)?)
}

/// Join of the named irreducibles.
pub fn frame_element(fr: &FiniteFrame, irr: &[String], names: &[String]) -> R<Mask> {
    let idx = index_of(irr)?;
    names.iter().try_fold(0, |acc, n| Ok(acc | fr.irreducible(lookup(&idx, n)?)))
}

pub fn ratio(r: &crate::spec::Ratio) -> BigRational {
    r.0.clone()
}

pub fn system(spec: &SystemSpec) -> R<SymbolicSystem> {
    Ok(match spec {
        SystemSpec::Bernoulli(p) => SymbolicSystem::bernoulli(p.iter().map(ratio).collect())?,
        SystemSpec::Markov(m) => {
            SymbolicSystem::markov(m.pi.iter().map(ratio).collect(), m.p.iter().map(|r| r.iter().map(ratio).collect()).collect())?
        }
    })
}

pub fn partition(alphabet: usize, spec: &PartitionSpec) -> R<Partition> {
    Ok(match spec {
        PartitionSpec::Cylinders(0) => Partition::trivial(alphabet),
        PartitionSpec::Cylinders(d) => Partition::cylinders(alphabet, *d)?,
        PartitionSpec::Labeled(l) => Partition::labeled(alphabet, l.depth, l.labels.clone())?,
    })
}

pub fn value(v: &ValueSpec) -> R<LogValue> {
    let mut out = LogValue::zero();
    if let Some(c) = &v.count {
        out = out.add(&LogValue::count_ratio(ratio(c)));
    }
    match (&v.q, v.m) {
        (Some(q), Some(m)) if m >= 1 => out = out.add(&LogValue::q_log(ratio(q), m)),
        (None, None) => {}
        _ => return Err(CliError::spec("a logarithmic value needs both q and m ≥ 1")),
    }
    if out < LogValue::zero() {
        return Err(CliError::spec("norm values must be non-negative"));
    }
    Ok(out)
}

pub fn monoid(spec: &MonoidSpec) -> R<FiniteMonoid> {
    match spec {
        MonoidSpec::Cyclic(d) if *d >= 1 => Ok(FiniteMonoid::cyclic_order_norm(*d)),
        MonoidSpec::Cyclic(_) => Err(CliError::spec("cyclic order must be positive")),
        MonoidSpec::Table(t) => {
            let norm = t.norm.iter().map(value).collect::<R<Vec<_>>>()?;
            Ok(FiniteMonoid::new(t.names.clone(), t.table.clone(), norm)?)
        }
    }
}

fn space_case(c: &SpaceCase) -> R<(FiniteSpace, ContinuousMap, OpenCover)> {
    let sp = space(&c.points, &c.order_pairs)?;
    let phi = map(&sp, &c.map)?;
    let u = cover(&sp, &c.cover)?;
    Ok((sp, phi, u))
}

pub fn case(spec: &CaseSpec) -> R<BridgeCase> {
    let (name, kind, n_max) = match spec {
        CaseSpec::WeissFinite(c) => {
            let g = group(&c.group)?;
            let phi = endomorphism(&g, &c.matrix)?;
            let n = subgroup(&g, &c.subgroup)?;
            (&c.name, CaseKind::WeissFinite { phi, n }, c.n_max)
        }
        CaseSpec::SigmaTau(c) => (&c.name, CaseKind::SigmaTau { graph: graph(&c.graph)?, k: group(&c.group)? }, c.n_max),
        CaseSpec::SetToTop(c) => (&c.name, CaseKind::SetToTop { graph: graph(&c.graph)?, k: kspec(&c.group)? }, c.n_max),
        CaseSpec::SetToAlg(c) => (&c.name, CaseKind::SetToAlg { graph: graph(&c.graph)?, k: kspec(&c.group)? }, c.n_max),
        CaseSpec::SetToAlgOplus(c) => (&c.name, CaseKind::SetToAlgOplus { graph: graph(&c.graph)?, k: kspec(&c.group)? }, c.n_max),
        CaseSpec::FrameO(c) => {
            let (space, map, cover) = space_case(c)?;
            (&c.name, CaseKind::FrameO { space, map, cover }, c.n_max)
        }
        CaseSpec::T0Reflection(c) => {
            let (space, map, cover) = space_case(c)?;
            (&c.name, CaseKind::T0Reflection { space, map, cover }, c.n_max)
        }
        CaseSpec::Open(c) => (&c.name, CaseKind::Open { statement: c.statement.clone() }, 1),
    };
    Ok(BridgeCase { name: name.clone(), kind, n_max })
}

/// Witness integer for `(ℕ, +)`: a JSON number or a decimal string.
pub fn natural(v: &serde_json::Value) -> R<num_bigint::BigUint> {
    let bad = || CliError::spec(format!("witness {v} is not a natural number"));
    match v {
        serde_json::Value::Number(n) => n.as_u64().map(Into::into).ok_or_else(bad),
        serde_json::Value::String(s) => s.parse::<BigInt>().ok().and_then(|b| b.to_biguint()).ok_or_else(bad),
        _ => Err(bad()),
    }
}
