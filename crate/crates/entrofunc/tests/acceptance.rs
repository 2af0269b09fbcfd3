//! Acceptance criteria.  Prints one PASS/FAIL line per criterion with its
//! wall time against the time limit, and exits non-zero if any fails.

mod oracle;

use std::collections::{BTreeSet, HashSet};
use std::error::Error;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use entrofunc::run::{self, Law};
use entrofunc::spec::{self, FlowSpec};
use entrofunc::{config, Overrides};
use entrofunc_core::abelian::{bridge_check_weiss, Endomorphism, FiniteAbelianGroup};
use entrofunc_core::measure::{h_mes, Partition, SymbolicSystem};
use entrofunc_core::semigroup::carriers::{
    bernoulli_entropy, index_shift_entropy, rho_entropy, BernoulliShift, DirectSum, FiniteMonoid, FreeSemigroup,
    IndexShift, NatNorm, Naturals, Rho, WordNorm,
};
use entrofunc_core::semigroup::laws::LawStatus;
use entrofunc_core::semigroup::{Classification, EntropyConfig, ExactRule, Scope, Side};
use entrofunc_core::sets::{
    contravariant_entropy, cotrajectory_sizes, covariant_entropy, pakex, pakex_vertex, structural_star, subset,
    ContraVariant, CovariantMode, Vertex,
};
use entrofunc_core::shift::{
    h_alg_sigma_oplus, h_alg_tau, h_top_sigma, sigma_cotrajectory_indices, sigma_hat_equals_tau, sigma_oplus_trajectory_orders,
    sigma_oplus_witness, tau_trajectory_orders, Direction, ShiftFlow,
};
use entrofunc_core::topo::{min_subcover, o_functor_check, reflection_bridge_check, ContinuousMap, FiniteSpace, OpenCover};
use entrofunc_core::LogValue;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oracle::{block_entropy, groups_up_to, min_cover_exhaustive, random_group, random_probabilities, Ab, Space, Tame};

type Outcome = Result<String, Box<dyn Error>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn cfg(n_max: usize) -> EntropyConfig {
    EntropyConfig::default().with_n_max(n_max)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ------------------------------------------------------------------ 1

fn rho_log() -> Outcome {
    for a in [2u64, 3, 5] {
        let rho = Rho { carrier: Naturals::new(NatNorm::Log), a };
        let r = rho_entropy(&rho, &[BigUint::from(1u32)], &cfg(32))?;
        let c = &r.per_witness[0].c;
        ensure!(c.len() == 32, "rho_{a}: {} steps", c.len());
        // T_n(ρ_a, 1) = 1 + a + … + a^{n−1}
        let (mut t, mut p) = (BigUint::from(0u32), BigUint::from(1u32));
        for (n, cn) in c.iter().enumerate() {
            t += &p;
            p *= a;
            ensure!(*cn == LogValue::ln_big(&(&t + 1u32)), "rho_{a}: c_{} = {cn}", n + 1);
        }
        ensure!(r.is_exact() && r.value() == LogValue::ln_int(a), "rho_{a}: h = {}", r.value());
    }
    Ok("h(rho_a) = ln a for a = 2, 3, 5".into())
}

fn bernoulli_monoids() -> Outcome {
    let names = |k: usize| (0..k).map(|i| format!("m{i}")).collect::<Vec<_>>();
    let monoids = vec![
        FiniteMonoid::cyclic_order_norm(4),
        // semilattice 1 > a > 0
        FiniteMonoid::new(
            names(3),
            vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 2, 2]],
            vec![LogValue::zero(), LogValue::count(1), LogValue::ln_int(3)],
        )?,
        // left-zero band with an identity, not commutative
        FiniteMonoid::new(
            names(3),
            vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
            vec![LogValue::zero(), LogValue::ln_int(2), LogValue::count(1)],
        )?,
    ];
    let mut maxima = Vec::new();
    for m in monoids {
        let norms = m.norm.clone();
        let shift = BernoulliShift { carrier: DirectSum::new(m), right: true };
        let r = bernoulli_entropy(&shift, &cfg(32))?;
        for (x, e) in r.per_witness.iter().enumerate() {
            for (n, cn) in e.c.iter().enumerate() {
                ensure!(*cn == norms[x].scale(&int(n + 1)), "witness {x}: c_{} = {cn}", n + 1);
            }
        }
        let max = norms.iter().cloned().max_by(|a, b| a.to_f64().total_cmp(&b.to_f64())).expect("non-empty");
        ensure!(r.is_exact() && r.value() == max, "h = {} but max v = {max}", r.value());
        maxima.push(max.to_string());
    }
    Ok(format!("h(beta_M) = max v on 3 monoids: {}", maxima.join(", ")))
}

fn runs(w: &[i64]) -> i64 {
    let (mut best, mut run) = (1, 1);
    for p in w.windows(2) {
        run = if p[1] == p[0] + 1 { run + 1 } else { 1 };
        best = best.max(run);
    }
    best
}

fn free_shift() -> Outcome {
    let shift = IndexShift { carrier: FreeSemigroup { norm: WordNorm::Runs }, step: 1 };
    let ws: Vec<Vec<i64>> = vec![vec![0], vec![1], vec![-3], vec![7]];
    let right = index_shift_entropy(&shift, &ws, Side::Right, &cfg(32))?;
    let left = index_shift_entropy(&shift, &ws, Side::Left, &cfg(32))?;
    for (w, (er, el)) in ws.iter().zip(right.per_witness.iter().zip(&left.per_witness)) {
        for n in 1..=32usize {
            let word: Vec<i64> = (0..n as i64).map(|k| w[0] + k).collect();
            let back: Vec<i64> = word.iter().rev().copied().collect();
            ensure!(er.c[n - 1] == LogValue::count(runs(&word)), "right c_{n} for x_{}", w[0]);
            ensure!(el.c[n - 1] == LogValue::count(runs(&back)), "left c_{n} for x_{}", w[0]);
        }
    }
    ensure!(right.is_exact() && right.value() == LogValue::count(1), "h = {}", right.value());
    ensure!(left.is_exact() && left.value().is_zero(), "h# = {}", left.value());
    Ok("h = 1 and h# = 0 on one-letter words".into())
}

fn selfmap_entropies() -> Outcome {
    let mut rng = rng(101);
    let (mut rays, mut antis) = (0, 0);
    for i in 0..100 {
        let t = Tame::random(&mut rng);
        let g = t.build();
        let d = subset(t.canonical());
        let want = LogValue::count(t.rays as i64);
        let traj = covariant_entropy(&g, &[d.clone()], CovariantMode::Trajectory, &cfg(32))?;
        let st = covariant_entropy(&g, &[], CovariantMode::ExactStructural, &cfg(32))?;
        ensure!(traj.is_exact() && traj.value() == want && st.value() == want, "graph {i}: h = {} / {}", traj.value(), st.value());
        let sizes: Vec<LogValue> = t.image_sizes(&d, 32).into_iter().map(|s| LogValue::count(s as i64)).collect();
        ensure!(traj.per_witness[0].c == sizes, "graph {i}: image trajectory sizes");

        let want = LogValue::count(t.antis() as i64);
        let star = contravariant_entropy(&g, &[d.clone()], ContraVariant::Star, &cfg(32))?;
        ensure!(star.is_exact() && star.value() == want && structural_star(&g) == want, "graph {i}: h* = {}", star.value());
        let sizes: Vec<LogValue> = t.preimage_sizes(&d, 32).into_iter().map(|s| LogValue::count(s as i64)).collect();
        ensure!(star.per_witness[0].c == sizes, "graph {i}: preimage trajectory sizes");
        rays += t.rays;
        antis += t.antis();
    }
    Ok(format!("100 graphs, {rays} rays and {antis} anti-rays in total"))
}

fn shift_entropies() -> Outcome {
    let mut rng = rng(202);
    for i in 0..50 {
        let t = Tame::random(&mut rng);
        let g = t.build();
        let k = random_group(&mut rng, 16);
        let ab = Ab::of(&k);
        let d = subset(t.canonical());
        let want = LogValue::ln_int(ab.order()).scale(&int(t.rays));
        let fwd = ShiftFlow::new(k.clone(), g.clone(), Direction::Forward)?;
        let bwd = ShiftFlow::new(k.clone(), g.clone(), Direction::Backward)?;
        let tau = h_alg_tau(&fwd, &[d.clone()], &cfg(32))?;
        let sigma = h_top_sigma(&bwd, &[d.clone()], &cfg(32))?;
        ensure!(tau.is_exact() && tau.value() == want, "instance {i}: h_alg(tau) = {}", tau.value());
        ensure!(sigma.is_exact() && sigma.value() == want, "instance {i}: h_top(sigma) = {}", sigma.value());
        // subgroup generation against |K|^{|T_n|}
        let sizes = t.image_sizes(&d, 8);
        let orders = tau_trajectory_orders(&fwd, &d, 8)?;
        let index = sigma_cotrajectory_indices(&bwd, &d, 8)?;
        for n in 0..8 {
            let e = BigUint::from(ab.order()).pow(sizes[n] as u32);
            ensure!(orders[n] == e && index[n] == e, "instance {i}, n = {}: {} / {} vs {e}", n + 1, orders[n], index[n]);
        }
    }
    Ok("50 pairs with |K| <= 16".into())
}

fn sigma_oplus() -> Outcome {
    let mut rng = rng(303);
    let ks: Vec<FiniteAbelianGroup> = ["Z2", "Z3", "Z4", "Z2xZ2"].iter().map(|s| FiniteAbelianGroup::parse(s)).collect::<Result<_, _>>()?;
    let (mut done, mut positive) = (0, 0);
    while done < 20 {
        let t = Tame::random(&mut rng);
        let k = ks[rng.gen_range(0..ks.len())].clone();
        let ab = Ab::of(&k);
        let g = t.build();
        let d = sigma_oplus_witness(&g);
        let fibers: Vec<Vec<BTreeSet<Vertex>>> = d.iter().map(|&x| t.preimage_layers(&[x], 8)).collect();
        let points: Vec<Vertex> = fibers.iter().flatten().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if points.len() as f64 * (ab.order() as f64).log2() > 16.0 {
            continue;
        }
        if t.antis() == 0 && done >= positive + 6 {
            continue;
        }
        done += 1;
        // K^(points), coordinate (point, j) at point·r + j
        let r = ab.d.len();
        let big = Ab { d: ab.d.repeat(points.len()) };
        let mut s: HashSet<Vec<u64>> = HashSet::from([big.zero()]);
        let mut oracle = Vec::new();
        for i in 0..8 {
            for fib in &fibers {
                for j in 0..r {
                    let mut gen = big.zero();
                    for v in &fib[i] {
                        gen[points.binary_search(v).expect("listed") * r + j] = 1;
                    }
                    big.extend(&mut s, &gen);
                }
            }
            oracle.push(BigUint::from(s.len()));
        }
        let flow = ShiftFlow::new(k.clone(), g.clone(), Direction::BackwardRestricted)?;
        let orders = sigma_oplus_trajectory_orders(&flow, &d, 8)?;
        ensure!(orders == oracle, "instance {done}: {orders:?} vs {oracle:?}");
        let want = LogValue::ln_int(ab.order()).scale(&int(t.antis()));
        let slope = LogValue::ln_big(&oracle[7]).sub(&LogValue::ln_big(&oracle[6])).expect("exact");
        ensure!(slope == want, "instance {done}: oracle slope {slope} vs {want}");
        let rep = h_alg_sigma_oplus(&flow, &[d.clone()], &cfg(16))?;
        ensure!(rep.is_exact() && rep.value() == want, "instance {done}: h = {} vs {want}", rep.value());
        ensure!(matches!(rep.scope, Scope::Certified(_)), "instance {done}: not certified");
        positive += usize::from(t.antis() > 0);
    }
    Ok(format!("20 instances ({positive} with anti-rays), subgroup orders enumerated for n <= 8"))
}

fn bernoulli_measures() -> Outcome {
    let mut rng = rng(404);
    let mut shown = Vec::new();
    for _ in 0..10 {
        let p = random_probabilities(&mut rng);
        let sys = SymbolicSystem::bernoulli(p.clone())?;
        let rep = h_mes(&sys, &[Partition::cylinders(p.len(), 1)?], &cfg(10))?;
        let rate = block_entropy(&p, 1);
        ensure!(rep.is_exact() && rep.value() == rate, "h_mes = {} vs {rate}", rep.value());
        let certified = matches!(rep.per_witness[0].classification, Classification::Exact { rule: ExactRule::Certified(_), .. });
        ensure!(certified, "no slope certificate");
        for n in 1..=10 {
            let h = block_entropy(&p, n);
            ensure!(rep.per_witness[0].c[n - 1] == h, "c_{n} = {} vs {h}", rep.per_witness[0].c[n - 1]);
            ensure!(h == rate.scale(&int(n)), "block entropy of length {n} is not n times the rate");
        }
        shown.push(p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("/"));
    }
    Ok(format!("10 vectors: {}", shown.join(" ")))
}

// ------------------------------------------------------------------ 2

fn weiss() -> Outcome {
    let mut rng = rng(505);
    let mut max_order = 0;
    for i in 0..500 {
        let g = random_group(&mut rng, 512);
        let ab = Ab::of(&g);
        max_order = max_order.max(ab.order());
        let a = ab.random_endo(&mut rng);
        let phi = Endomorphism::new(&g, &a)?;
        let gens: Vec<Vec<u64>> = (0..rng.gen_range(1..=2)).map(|_| ab.random_element(&mut rng)).collect();
        let v = bridge_check_weiss(&phi, &g.subgroup(&gens)?, 8)?;

        let nset = ab.closure(&gens);
        // C_n: x with φ^j x ∈ N for j < n
        let depth: Vec<usize> = ab
            .elements()
            .iter()
            .map(|x| {
                let mut y = x.clone();
                let mut j = 0;
                while j < 8 && nset.contains(&y) {
                    y = ab.apply(&a, &y);
                    j += 1;
                }
                j
            })
            .collect();
        // generators of N^⊥, then T_n = Σ_{j<n} φ̂^j(N^⊥)
        let perp = ab.annihilator(&nset);
        let mut span: HashSet<Vec<u64>> = HashSet::from([ab.zero()]);
        let mut layer = Vec::new();
        let mut sorted: Vec<&Vec<u64>> = perp.iter().collect();
        sorted.sort();
        for y in sorted {
            if !span.contains(y) {
                ab.extend(&mut span, y);
                layer.push(y.clone());
            }
        }
        let mut t: HashSet<Vec<u64>> = HashSet::from([ab.zero()]);
        for n in 1..=8 {
            let c = depth.iter().filter(|&&j| j >= n).count() as u64;
            for y in &layer {
                ab.extend(&mut t, y);
            }
            layer = layer.iter().map(|y| ab.dual_apply(&a, y)).collect();
            let index = ab.order() / c;
            ensure!(index == t.len() as u64, "instance {i}, n = {n}: oracle index {index} vs oracle dual order {}", t.len());
            ensure!(v.index[n - 1] == BigUint::from(index), "instance {i}, n = {n}: index {} vs {index}", v.index[n - 1]);
            ensure!(v.dual_order[n - 1] == BigUint::from(index), "instance {i}, n = {n}: dual order {}", v.dual_order[n - 1]);
        }
        ensure!(v.pass(), "instance {i}: mismatch at {:?}", v.first_mismatch);
    }
    Ok(format!("500 instances, |G| up to {max_order}, n <= 8"))
}

fn sigma_tau() -> Outcome {
    let groups = groups_up_to(8);
    let mut count = 0;
    for size in 1..=4usize {
        for code in 0..size.pow(size as u32) {
            let images: Vec<usize> = (0..size).map(|x| code / size.pow(x as u32) % size).collect();
            let g = Tame::finite(&images).build();
            for k in &groups {
                let v = sigma_hat_equals_tau(&g, k)?;
                ensure!(v.equal(), "lambda = {images:?}, K = {k}: dual of sigma differs from tau");
                let r = k.rank();
                let dim = size * r;
                let mut tau = vec![vec![0u64; dim]; dim];
                let mut sigma = vec![vec![0u64; dim]; dim];
                for x in 0..size {
                    for j in 0..r {
                        // τ(e_{x,j}) = e_{λx,j};  σ(e_{y,j}) = Σ_{λx=y} e_{x,j}
                        tau[images[x] * r + j][x * r + j] = 1;
                        sigma[x * r + j][images[x] * r + j] = 1;
                    }
                }
                ensure!(v.tau.matrix() == tau.as_slice(), "lambda = {images:?}, K = {k}: tau matrix");
                ensure!(v.sigma.matrix() == sigma.as_slice(), "lambda = {images:?}, K = {k}: sigma matrix");
                count += 1;
            }
        }
    }
    Ok(format!("{count} pairs: every selfmap of |X| <= 4 against {} groups of order <= 8", groups.len()))
}

fn frames() -> Outcome {
    let mut rng = rng(606);
    let mut non_t0 = 0;
    for i in 0..100 {
        let n = rng.gen_range(1..=6);
        let s = Space::random(n, &mut rng);
        let images = s.random_map(&mut rng);
        let u = s.random_cover(4, &mut rng);
        let sp = FiniteSpace::anonymous(n, &s.pairs)?;
        let phi = ContinuousMap::new(&sp, images.clone())?;
        let cover = OpenCover::new(&sp, u.clone())?;
        let o = o_functor_check(&sp, &phi, &cover, 6)?;
        let t0 = reflection_bridge_check(&sp, &phi, &cover, 6)?;
        let want = oracle::cover_norms(n, &images, &u, 6);
        ensure!(o.lhs == want, "flow {i}: space side {:?} vs oracle {want:?}", o.lhs);
        ensure!(o.pass(), "flow {i}: frame side {:?} vs {:?}", o.rhs, o.lhs);
        ensure!(t0.pass(), "flow {i}: T0 side {:?} vs {:?}", t0.rhs, t0.lhs);
        non_t0 += usize::from(!sp.is_t0());
    }
    Ok(format!("100 flows ({non_t0} not T0), n <= 6"))
}

// ------------------------------------------------------------------ 3

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs")
}

fn json_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("specs directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

fn corpus() -> Vec<(String, FlowSpec)> {
    json_files(&specs_dir())
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).expect("readable spec");
            let name = p.file_stem().expect("file name").to_string_lossy().into_owned();
            (name, spec::parse_flow(&text).expect("corpus specs parse"))
        })
        .collect()
}

fn spec_cfg(s: &FlowSpec) -> EntropyConfig {
    config(s.params(), &Overrides::default())
}

/// Corpus flows the law checks accept: everything with a semigroup flow and
/// right trajectories.
fn law_corpus() -> Vec<(String, FlowSpec)> {
    corpus()
        .into_iter()
        .filter(|(_, s)| run::check_law(s, Law::LogLaw(1), None, &spec_cfg(s)).is_ok())
        .collect()
}

fn fekete() -> Outcome {
    let (mut checked, mut skipped) = (0, 0);
    for (name, s) in corpus() {
        let cfg = spec_cfg(&s);
        let subadditive = match s.kind() {
            "shift" | "symbolic" => true,
            _ => match run::check_law(&s, Law::Fekete, None, &cfg) {
                Ok(o) => {
                    ensure!(o.status != LawStatus::Fails, "{name}: {:?}", o.details);
                    !matches!(o.status, LawStatus::Inapplicable(_))
                }
                Err(_) => false,
            },
        };
        if !subadditive {
            skipped += 1;
            continue;
        }
        let c = run::entropy(&s, &cfg, true)?;
        for e in &c.report.per_witness {
            let mut bound: Option<LogValue> = None;
            for (n, cn) in e.c.iter().enumerate() {
                let q = cn.div_int(n as u64 + 1);
                let next = match bound {
                    Some(b) => b.min(q),
                    None => q,
                };
                if let Some(h) = e.exact_value() {
                    ensure!(next >= *h, "{name}: bound {next} below {h} at n = {}", n + 1);
                }
                bound = Some(next);
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} subadditive corpus flows, {skipped} not subadditive or not contractive"))
}

fn log_law() -> Outcome {
    let (mut holds, mut outside) = (0, Vec::new());
    let all = corpus();
    let total = all.len();
    let laws = law_corpus();
    for (name, s) in &laws {
        let cfg = spec_cfg(s);
        let exact = run::entropy(s, &cfg, false)?.report.is_exact();
        for k in [2, 3] {
            let o = run::check_law(s, Law::LogLaw(k), None, &cfg)?;
            match &o.status {
                LawStatus::Holds => holds += 1,
                LawStatus::Fails => return Err(format!("{name}, k = {k}: {:?} vs {:?}", o.lhs, o.rhs).into()),
                LawStatus::Inconclusive => ensure!(!exact, "{name}, k = {k}: exact flow but inconclusive"),
                LawStatus::Inapplicable(_) => {
                    if k == 2 {
                        outside.push(name.clone());
                    }
                }
            }
        }
    }
    Ok(format!(
        "{holds} checks hold; hypotheses unmet for {}; {} shift/symbolic/left specs have no flow",
        outside.join(", "),
        total - laws.len()
    ))
}

fn weak_addition() -> Outcome {
    let flows: Vec<(String, FlowSpec)> = law_corpus()
        .into_iter()
        .filter(|(_, s)| run::entropy(s, &spec_cfg(s), false).map(|c| c.report.is_exact()).unwrap_or(false))
        .collect();
    let (mut both, mut inconclusive) = (0, 0);
    for i in 0..flows.len() {
        for j in i + 1..flows.len() {
            let (a, b) = (&flows[i], &flows[j]);
            let cfg = spec_cfg(&a.1);
            let mut ok = true;
            for law in [Law::ProductMax, Law::CoproductSum] {
                let o = run::check_law(&a.1, law, Some(&b.1), &cfg)?;
                ensure!(o.status != LawStatus::Fails, "{} with {}: {:?} vs {:?}", a.0, b.0, o.lhs, o.rhs);
                ok &= o.holds();
            }
            if ok {
                both += 1;
            } else {
                inconclusive += 1;
            }
        }
    }
    ensure!(both >= 20, "only {both} pairs with both sides exact");
    Ok(format!("{both} pairs hold for product and coproduct, {inconclusive} pairs not exactly classified, no failures"))
}

fn annihilators() -> Outcome {
    let mut rng = rng(707);
    for i in 0..1000 {
        let g = random_group(&mut rng, 512);
        let ab = Ab::of(&g);
        let gn: Vec<Vec<u64>> = (0..rng.gen_range(1..=2)).map(|_| ab.random_element(&mut rng)).collect();
        let gm: Vec<Vec<u64>> = (0..rng.gen_range(1..=2)).map(|_| ab.random_element(&mut rng)).collect();
        let (n, m) = (g.subgroup(&gn)?, g.subgroup(&gm)?);
        let (np, mp) = (n.annihilator(), m.annihilator());
        ensure!(np.co_annihilator() == n, "instance {i}: (N^perp)^top != N");
        ensure!(n.order() * np.order() == g.order(), "instance {i}: |N||N^perp| != |G|");
        let sum_perp = n.sum(&m)?.annihilator();
        ensure!(sum_perp == np.meet_direct(&mp)? && sum_perp == np.meet(&mp)?, "instance {i}: (N+M)^perp");
        ensure!(n.meet_direct(&m)?.annihilator() == np.sum(&mp)?, "instance {i}: (N meet M)^perp");
        // element-wise: y ∈ N^⊥ iff χ_y vanishes on the generators of N
        let nset = ab.closure(&gn);
        let mut count = 0u64;
        for y in ab.elements() {
            let brute = gn.iter().all(|x| ab.pairing(x, &y) == 0);
            ensure!(brute == np.contains(&y), "instance {i}: membership of {y:?}");
            count += u64::from(brute);
        }
        ensure!(count * nset.len() as u64 == ab.order(), "instance {i}: counted |N||N^perp| != |G|");
    }
    Ok("1000 random subgroup pairs, |G| <= 512".into())
}

fn subcovers() -> Outcome {
    let mut rng = rng(808);
    let (mut done, mut hard) = (0, 0);
    while done < 200 {
        let n = rng.gen_range(1..=10);
        let s = Space::random(n, &mut rng);
        let k = rng.gen_range(1..=15);
        let mut fam: Vec<u64> = (0..k)
            .map(|_| {
                let seed = if rng.gen_bool(0.6) { 1u64 << rng.gen_range(0..n) | 1u64 << rng.gen_range(0..n) } else { rng.gen::<u64>() };
                s.up_closure(seed & s.full())
            })
            .collect();
        let mut union = fam.iter().fold(0, |a, m| a | m);
        for x in 0..n {
            if union >> x & 1 == 0 {
                fam.push(s.up[x]);
                union |= s.up[x];
            }
        }
        if fam.len() > 15 {
            continue;
        }
        done += 1;
        let sp = FiniteSpace::anonymous(n, &s.pairs)?;
        let got = min_subcover(&OpenCover::new(&sp, fam.clone())?)?;
        let want = min_cover_exhaustive(s.full(), &fam).expect("family covers");
        ensure!(got == want, "cover {fam:?} on {n} points: {got} vs {want}");
        hard += usize::from(want >= 3);
    }
    Ok(format!("200 covers ({hard} need at least 3 members)"))
}

fn quasi_periodic() -> Outcome {
    let mut shown = Vec::new();
    for (name, s) in corpus() {
        if !matches!(s.kind(), "finite_abelian" | "space" | "frame") {
            continue;
        }
        let cfg = spec_cfg(&s);
        let c = run::entropy(&s, &cfg, false)?;
        ensure!(c.report.is_exact() && c.report.value().is_zero(), "{name}: h = {}", c.report.value());
        let o = run::check_law(&s, Law::QuasiPeriodic, None, &cfg)?;
        ensure!(o.holds(), "{name}: {:?}", o.status);
        let mut certs = Vec::new();
        for d in &o.details {
            let (k, m) = (d["k"].as_u64(), d["m"].as_u64());
            ensure!(matches!((k, m), (Some(k), Some(m)) if k > m), "{name}: certificate {d}");
            certs.push(format!("({},{})", d["k"], d["m"]));
        }
        shown.push(format!("{name} {}", certs.join("")));
    }
    ensure!(!shown.is_empty(), "no finite-carrier flows in the corpus");
    Ok(shown.join("; "))
}

fn pakex_counts() -> Outcome {
    let sizes = cotrajectory_sizes(&pakex(), &subset([pakex_vertex(0)]), 6)?;
    // 0, 1 ↦ 0 and m ↦ m − 2 otherwise, on an initial segment of ℕ
    let lam = |m: u64| if m < 2 { 0 } else { m - 2 };
    let mut want = Vec::new();
    for n in 1..=6u64 {
        let t = (0..64u64).filter(|&m| {
            let mut y = m;
            (0..n).any(|_| {
                let hit = y == 0;
                y = lam(y);
                hit
            })
        });
        want.push(t.count() as u64);
    }
    ensure!(sizes == want, "{sizes:?} vs {want:?}");
    ensure!(sizes[0] == 1 && sizes[1] == 3, "|T_1*| = {}, |T_2*| = {}", sizes[0], sizes[1]);
    Ok(format!("|T_n*| = {sizes:?}; |T_2*| = 3 > 2|T_1*|"))
}

// ------------------------------------------------------------------ 4

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_entrofunc");
    let mut runs = 0;
    let mut slowest = 0.0f64;
    let mut skipped = 0;
    let mut jobs: Vec<Vec<String>> = Vec::new();
    for p in json_files(&specs_dir()) {
        let p = p.to_string_lossy().into_owned();
        for cmd in ["entropy", "trace", "validate"] {
            jobs.push(vec![cmd.into(), p.clone()]);
        }
        jobs.push(vec!["entropy".into(), p.clone(), "--format".into(), "tsv".into()]);
    }
    for p in json_files(&specs_dir().join("bridge")) {
        let p = p.to_string_lossy().into_owned();
        jobs.push(vec!["bridge".into(), "run".into(), p.clone()]);
        jobs.push(vec!["validate".into(), p]);
    }
    for args in &jobs {
        let mut outs = Vec::new();
        for _ in 0..2 {
            let t = Instant::now();
            let out = Command::new(bin).args(args).output()?;
            let secs = t.elapsed().as_secs_f64();
            slowest = slowest.max(secs);
            ensure!(secs < 60.0, "{args:?} took {secs:.1}s");
            let code = out.status.code();
            // trace has nothing to print for structurally computed values
            let no_rows = args[0] == "trace" && code == Some(2) && String::from_utf8_lossy(&out.stderr).contains("no trajectory data");
            ensure!(code == Some(0) || no_rows, "{args:?}: exit {code:?}: {}", String::from_utf8_lossy(&out.stderr));
            skipped += usize::from(no_rows);
            outs.push((out.stdout, out.stderr));
            runs += 1;
        }
        ensure!(outs[0] == outs[1], "{args:?}: reports differ between runs");
        if args[0] == "validate" {
            let original = std::fs::read(&args[1])?;
            ensure!(outs[0].0 == original, "{}: canonical form differs from the file", args[1]);
        }
    }
    Ok(format!(
        "{} commands run twice ({runs} runs), byte-identical; {} traces without rows; slowest {slowest:.2}s",
        jobs.len(),
        skipped / 2
    ))
}

// ------------------------------------------------------------------ driver

struct Criterion {
    id: &'static str,
    what: &'static str,
    limit: Option<f64>,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: "1.1", what: "rho_a on (N, v_l)", limit: Some(1.0), run: rho_log },
    Criterion { id: "1.2", what: "Bernoulli shifts on normed monoids", limit: Some(1.0), run: bernoulli_monoids },
    Criterion { id: "1.3", what: "free-semigroup shift, h and h#", limit: None, run: free_shift },
    Criterion { id: "1.4", what: "h and h* on random selfmaps", limit: Some(10.0), run: selfmap_entropies },
    Criterion { id: "1.5", what: "h_alg(tau) = h_top(sigma) = h log|K|", limit: Some(30.0), run: shift_entropies },
    Criterion { id: "1.6", what: "h_alg(sigma_oplus) = h_p* log|K|", limit: Some(60.0), run: sigma_oplus },
    Criterion { id: "1.7", what: "h_mes of Bernoulli measures", limit: Some(10.0), run: bernoulli_measures },
    Criterion { id: "2.1", what: "Weiss bridge per step", limit: Some(60.0), run: weiss },
    Criterion { id: "2.2", what: "dual of sigma equals tau", limit: Some(30.0), run: sigma_tau },
    Criterion { id: "2.3", what: "frame and T0 bridges per step", limit: Some(30.0), run: frames },
    Criterion { id: "3.1", what: "Fekete bound", limit: None, run: fekete },
    Criterion { id: "3.2", what: "logarithmic law, k = 2, 3", limit: None, run: log_law },
    Criterion { id: "3.3", what: "weak addition", limit: None, run: weak_addition },
    Criterion { id: "3.4", what: "annihilator laws", limit: None, run: annihilators },
    Criterion { id: "3.5", what: "min_subcover", limit: None, run: subcovers },
    Criterion { id: "3.6", what: "quasi-periodic certificates", limit: None, run: quasi_periodic },
    Criterion { id: "3.7", what: "pakex cotrajectories", limit: None, run: pakex_counts },
    Criterion { id: "4", what: "CLI determinism", limit: Some(300.0), run: cli_determinism },
];

fn main() {
    let mut failed = 0;
    for c in CRITERIA {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run));
        let secs = t.elapsed().as_secs_f64();
        let (mut ok, mut detail) = match result {
            Ok(Ok(d)) => (true, d),
            Ok(Err(e)) => (false, e.to_string()),
            Err(p) => (false, format!("panic: {}", p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())),
        };
        let limit = match c.limit {
            Some(l) => {
                if secs > l {
                    ok = false;
                    detail = format!("over the {l}s limit; {detail}");
                }
                format!("{secs:.2}s of {l}s")
            }
            None => format!("{secs:.2}s"),
        };
        failed += usize::from(!ok);
        println!("{} {:<4} {} [{limit}] {detail}", if ok { "PASS" } else { "FAIL" }, c.id, c.what);
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
