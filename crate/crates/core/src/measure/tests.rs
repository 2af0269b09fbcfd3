use proptest::prelude::*;

use super::*;

fn cfg(n: usize) -> EntropyConfig {
    EntropyConfig::default().with_n_max(n)
}

fn ps(v: &[(i64, i64)]) -> Vec<BigRational> {
    v.iter().map(|&(n, d)| prob(n, d)).collect()
}

fn f(r: &BigRational) -> f64 {
    crate::semigroup::ratio_to_f64(r)
}

/// Entropy of all length-`n` words, enumerated by counting in base `a`.
fn cylinder_oracle(sys: &SymbolicSystem, n: usize) -> (LogValue, f64) {
    let a = sys.alphabet();
    let mut exact = LogValue::zero();
    let mut float = 0.0;
    let mut w = vec![0usize; n];
    for code in 0..a.pow(n as u32) {
        let mut c = code;
        for k in (0..n).rev() {
            w[k] = c % a;
            c /= a;
        }
        let mut m = BigRational::one();
        for (i, &s) in w.iter().enumerate() {
            m *= match (sys.measure(), i) {
                (Measure::Bernoulli(p), _) => p[s].clone(),
                (Measure::Markov { pi, .. }, 0) => pi[s].clone(),
                (Measure::Markov { p, .. }, _) => p[w[i - 1]][s].clone(),
            };
        }
        if m.is_positive() {
            exact = exact.add(&LogValue::ln_ratio(&m).scale(&-m.clone()));
            float -= f(&m) * libm::log(f(&m));
        }
    }
    (exact, float)
}

fn shannon(p: &[BigRational]) -> f64 {
    p.iter().filter(|x| x.is_positive()).map(|x| -f(x) * libm::log(f(x))).sum()
}

#[test]
fn boltzmann_examples() {
    let sys = SymbolicSystem::bernoulli(ps(&[(1, 2), (1, 2)])).unwrap();
    let xi = join_pullback(&sys, &Partition::coordinate(2), 1, 1 << 10).unwrap();
    assert_eq!(boltzmann(&xi), LogValue::ln_int(2));
    let t = join_pullback(&sys, &Partition::trivial(2), 3, 1 << 10).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(boltzmann(&t), LogValue::zero());

    let sys = SymbolicSystem::bernoulli(ps(&[(1, 4), (3, 4)])).unwrap();
    let h = boltzmann(&join_pullback(&sys, &Partition::coordinate(2), 1, 1 << 10).unwrap());
    let want = LogValue::ln_int(4).scale(&prob(1, 4)).add(&LogValue::ln_ratio(&prob(4, 3)).scale(&prob(3, 4)));
    assert_eq!(h, want);
    assert!((h.to_f64() - (0.25 * libm::log(4.0) + 0.75 * libm::log(4.0 / 3.0))).abs() < 1e-12);
}

#[test]
fn join_pullback_examples() {
    let sys = SymbolicSystem::bernoulli(ps(&[(1, 2), (1, 2)])).unwrap();
    let j = join_pullback(&sys, &Partition::coordinate(2), 3, 1 << 10).unwrap();
    assert_eq!(j.len(), 8);
    assert!(j.blocks.values().all(|m| *m == prob(1, 8)));
    assert_eq!(j.depth, 3);

    let frozen = SymbolicSystem::markov(ps(&[(1, 2), (1, 2)]), vec![ps(&[(1, 1), (0, 1)]), ps(&[(0, 1), (1, 1)])]).unwrap();
    let j = join_pullback(&frozen, &Partition::coordinate(2), 2, 1 << 10).unwrap();
    assert_eq!(j.blocks, BTreeMap::from([(vec![0, 0], prob(1, 2)), (vec![1, 1], prob(1, 2))]));
    let r = h_mes(&frozen, &[Partition::coordinate(2)], &cfg(12)).unwrap();
    assert_eq!(r.value(), LogValue::zero());

    let sys = SymbolicSystem::bernoulli(ps(&[(1, 3), (2, 3)])).unwrap();
    let j = join_pullback(&sys, &Partition::coordinate(2), 2, 1 << 10).unwrap();
    let mut m: Vec<BigRational> = j.blocks.values().cloned().collect();
    m.sort();
    assert_eq!(m, ps(&[(1, 9), (2, 9), (2, 9), (4, 9)]));
    assert_eq!(j.total(), BigRational::one());

    assert!(matches!(join_pullback(&sys, &Partition::coordinate(2), 12, 1 << 10), Err(crate::Error::Cap(_))));
}

#[test]
fn bernoulli_entropy_matches_enumeration() {
    for p in [vec![(1, 2), (1, 2)], vec![(1, 4), (3, 4)], vec![(1, 3), (1, 6), (1, 2)]] {
        let p = ps(&p);
        let sys = SymbolicSystem::bernoulli(p.clone()).unwrap();
        let r = h_mes(&sys, &[Partition::coordinate(sys.alphabet())], &cfg(10)).unwrap();
        assert!(r.is_exact());
        let c = &r.estimate.c;
        for n in 1..=c.len().min(8) {
            let (exact, float) = cylinder_oracle(&sys, n);
            assert_eq!(c[n - 1], exact);
            assert!((c[n - 1].to_f64() - float).abs() < 1e-9);
        }
        assert!((r.value().to_f64() - shannon(&p)).abs() < 1e-12);
    }
    let one = SymbolicSystem::bernoulli(ps(&[(1, 1)])).unwrap();
    assert_eq!(h_mes(&one, &[Partition::coordinate(1)], &cfg(8)).unwrap().value(), LogValue::zero());
}

#[test]
fn markov_entropy_matches_enumeration() {
    let sys = SymbolicSystem::markov(ps(&[(2, 5), (3, 5)]), vec![ps(&[(1, 2), (1, 2)]), ps(&[(1, 3), (2, 3)])]).unwrap();
    let want = 0.4 * shannon(&ps(&[(1, 2), (1, 2)])) + 0.6 * shannon(&ps(&[(1, 3), (2, 3)]));
    for xi in [Partition::coordinate(2), Partition::cylinders(2, 2).unwrap()] {
        let r = h_mes(&sys, &[xi.clone()], &cfg(9)).unwrap();
        assert!(r.is_exact());
        assert!((r.value().to_f64() - want).abs() < 1e-12);
        for n in 1..=6 {
            assert_eq!(r.estimate.c[n - 1], cylinder_oracle(&sys, n + xi.depth() - 1).0);
        }
    }
    assert!(SymbolicSystem::markov(ps(&[(1, 2), (1, 2)]), vec![ps(&[(1, 2), (1, 2)]), ps(&[(1, 3), (2, 3)])]).is_err());
    assert!(SymbolicSystem::bernoulli(ps(&[(1, 2), (1, 3)])).is_err());
}

#[test]
fn products_add_entropy() {
    // weak addition, evidence only
    let a = SymbolicSystem::bernoulli(ps(&[(1, 4), (3, 4)])).unwrap();
    let b = SymbolicSystem::bernoulli(ps(&[(1, 3), (2, 3)])).unwrap();
    let p = a.product(&b).unwrap();
    let h = |s: &SymbolicSystem| h_mes(s, &[Partition::coordinate(s.alphabet())], &cfg(8)).unwrap().value();
    assert_eq!(h(&p), h(&a).add(&h(&b)));
}

fn arb_system() -> impl Strategy<Value = SymbolicSystem> {
    prop_oneof![
        proptest::collection::vec(1i64..5, 1..4).prop_map(|w| {
            let t: i64 = w.iter().sum();
            SymbolicSystem::bernoulli(w.iter().map(|&x| prob(x, t)).collect()).unwrap()
        }),
        // two-state chains with stationary law (b, a)/(a+b)
        (1i64..4, 1i64..4, 1i64..4).prop_map(|(a, b, d)| {
            let d = d.max(a).max(b);
            let p = vec![vec![prob(d - a, d), prob(a, d)], vec![prob(b, d), prob(d - b, d)]];
            SymbolicSystem::markov(vec![prob(b, a + b), prob(a, a + b)], p).unwrap()
        }),
    ]
}

fn arb_partition(alphabet: usize) -> impl Strategy<Value = Partition> {
    (0usize..3).prop_flat_map(move |d| {
        let n = alphabet.pow(d as u32);
        proptest::collection::vec(0u32..3, n).prop_map(move |l| Partition::labeled(alphabet, d, l).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boltzmann_is_subadditive_and_monotone(
        (sys, x, y) in arb_system().prop_flat_map(|s| { let a = s.alphabet(); (Just(s), arb_partition(a), arb_partition(a)) })
    ) {
        let h = |p: &Partition| boltzmann(&join_pullback(&sys, p, 1, 1 << 12).unwrap());
        let j = x.join(&y).unwrap();
        prop_assert!(h(&j) <= h(&x).add(&h(&y)));
        prop_assert!(h(&x) <= h(&j));
        prop_assert!(h(&y) <= h(&j));
    }

    #[test]
    fn cylinder_slopes_equal_the_rate(sys in arb_system(), d in 1usize..3) {
        let r = h_mes(&sys, &[Partition::cylinders(sys.alphabet(), d).unwrap()], &cfg(8)).unwrap();
        prop_assert!(r.is_exact());
        let c = &r.estimate.c;
        for w in c.windows(2) {
            prop_assert_eq!(w[1].sub(&w[0]).unwrap(), sys.entropy_rate());
        }
        let rate: f64 = match sys.measure() {
            Measure::Bernoulli(p) => shannon(p),
            Measure::Markov { pi, p } => pi.iter().zip(p).map(|(x, row)| f(x) * shannon(row)).sum(),
        };
        prop_assert!((r.value().to_f64() - rate).abs() < 1e-12);
    }
}
