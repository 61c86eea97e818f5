use ekac_core::additive::{builtin_omega, ClassRule, PrimeWindow, StronglyAdditive};
use ekac_core::fit::{phi, Ecdf, FitCollector};
use ekac_core::input::{empirical_remainder, DensityModel, InputSet};
use ekac_core::moments::MomentAccumulator;
use ekac_core::oracle::{f_r, h_of, j_of};
use ekac_core::sieve::{distinct_prime_factors, factor_stream, is_prime, primes_up_to};
use ekac_core::stats::{covariance_kappa, frak_bounds, mean_mu};
use ekac_core::sum::NeumaierSum;
use ekac_core::PolyQ;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn trial_primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn poly_strategy() -> impl Strategy<Value = PolyQ> {
    (1usize..=3)
        .prop_flat_map(|vars| {
            prop::collection::vec((prop::collection::vec(0u32..=3, vars), 1i64..=9, 1i64..=4), 1..=4)
                .prop_map(move |terms| (vars, terms))
        })
        .prop_filter_map("constant polynomial", |(vars, terms)| {
            PolyQ::new(vars, terms.into_iter().map(|(e, n, d)| (e, rat(n, d)))).ok()
        })
}

fn table_function() -> impl Strategy<Value = StronglyAdditive> {
    (prop::collection::btree_map(prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), 0.0..=2.0f64, 0..4), 0.0..=2.0f64, 0.0..=2.0f64)
        .prop_map(|(explicit, class_value, default)| {
            let classes = vec![ClassRule { modulus: 4, residues: vec![3], value: class_value }];
            StronglyAdditive::table("t", 2.0, explicit, classes, default).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stream_matches_trial_division(lo in 1u64..1_000_000, len in 1u64..2_000, seg in 1usize..700) {
        let hi = lo + len;
        for segment in factor_stream(lo, hi, seg).unwrap() {
            for (n, factors) in segment.records() {
                prop_assert_eq!(factors, &trial_primes(n)[..], "n = {}", n);
            }
        }
    }

    #[test]
    fn distinct_factors_match_trial_division(n in 1u64..1_000_000_000) {
        let t = primes_up_to(40_000).unwrap();
        prop_assert_eq!(distinct_prime_factors(n, &t).unwrap(), trial_primes(n));
    }

    #[test]
    fn miller_rabin_agrees(n in 0u64..5_000_000) {
        prop_assert_eq!(is_prime(n), n >= 2 && trial_primes(n) == vec![n]);
    }

    #[test]
    fn neumaier_merge_matches_single_pass(xs in prop::collection::vec(-1e12..1e12f64, 0..200), cut in 0usize..200) {
        let cut = cut.min(xs.len());
        let mut whole = NeumaierSum::new();
        xs.iter().for_each(|&x| whole.add(x));
        let (mut a, mut b) = (NeumaierSum::new(), NeumaierSum::new());
        xs[..cut].iter().for_each(|&x| a.add(x));
        xs[cut..].iter().for_each(|&x| b.add(x));
        a.merge(&b);
        prop_assert!((a.value() - whole.value()).abs() <= 1e-9 * whole.value().abs().max(1.0));
    }

    #[test]
    fn table_function_is_strongly_additive(g in table_function(), m in 1u64..5_000, n in 1u64..5_000) {
        let gcd = num_integer_gcd(m, n);
        prop_assume!(gcd == 1);
        let split = g.eval_full(&trial_primes(m)) + g.eval_full(&trial_primes(n));
        prop_assert!((g.eval_full(&trial_primes(m * n)) - split).abs() < 1e-12);
        // g(p^a) = g(p)
        prop_assert_eq!(g.eval_full(&trial_primes(8)), g.value(2));
    }

    #[test]
    fn partials_match_finite_differences(q in poly_strategy(), seed in prop::collection::vec(0.2..2.0f64, 3)) {
        let point = &seed[..q.vars()];
        let h = 1e-6;
        for j in 1..=q.vars() {
            let mut up = point.to_vec();
            let mut down = point.to_vec();
            up[j - 1] += h;
            down[j - 1] -= h;
            let fd = (q.eval(&up).unwrap() - q.eval(&down).unwrap()) / (2.0 * h);
            let exact = q.partial(j).unwrap().eval(point).unwrap();
            prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{} vs {}", fd, exact);
        }
    }

    #[test]
    fn polynomial_display_round_trips(
        vars in 1usize..=3,
        terms in prop::collection::vec((prop::collection::vec(0u32..=3, 3), 1i64..=99, prop::sample::select(vec![1i64, 2, 4, 5, 8, 20])), 1..=4),
    ) {
        // decimal coefficients print exactly
        let q = PolyQ::new(vars, terms.into_iter().map(|(e, n, d)| (e[..vars].to_vec(), rat(n, d))));
        prop_assume!(q.is_ok());
        let q = q.unwrap();
        let text = q.to_string();
        let back = PolyQ::parse_with_vars(&text, q.vars()).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn expansion_reevaluates_exactly(q in poly_strategy(), m in 1u32..=3, xs in prop::collection::vec((-6i64..=6, 1i64..=5), 6)) {
        let e = q.expand_r_m(m).unwrap();
        prop_assert!(e.check_structure().is_ok());
        let l = q.vars();
        let x: Vec<BigRational> = xs[..l].iter().map(|&(a, b)| rat(a, b)).collect();
        let y: Vec<BigRational> = xs[3..3 + l].iter().map(|&(a, b)| rat(a, b)).collect();
        let shifted: Vec<BigRational> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let direct = num_traits::pow(q.eval_exact(&shifted).unwrap() - q.eval_exact(&y).unwrap(), m as usize);
        prop_assert_eq!(e.eval_exact(&x, &y).unwrap(), direct);
    }

    #[test]
    fn phi_symmetric_and_monotone(u in -30.0..30.0f64, d in 0.0..5.0f64) {
        prop_assert!((phi(u) + phi(-u) - 1.0).abs() <= 1e-12);
        prop_assert!(phi(u + d) >= phi(u));
    }

    #[test]
    fn ks_ignores_order(mut xs in prop::collection::vec(-4.0..4.0f64, 1..100), rot in 0usize..100) {
        let a = Ecdf::new(xs.clone()).unwrap().ks_distance();
        let k = rot % xs.len();
        xs.rotate_left(k);
        xs.reverse();
        prop_assert_eq!(Ecdf::new(xs).unwrap().ks_distance(), a);
    }

    #[test]
    fn histogram_counts_sum_to_n(xs in prop::collection::vec(-50.0..50.0f64, 1..300)) {
        let mut c = FitCollector::new();
        xs.iter().for_each(|&v| c.push(v));
        let r = c.finish().unwrap();
        prop_assert_eq!(r.histogram.total(), xs.len() as u64);
        prop_assert!(r.ks >= 0.0 && r.ks <= 1.0);
    }

    #[test]
    fn accumulator_merge_is_symmetric(a in prop::collection::vec(-3.0..3.0f64, 0..50), b in prop::collection::vec(-3.0..3.0f64, 0..50)) {
        let w = PrimeWindow::from_primes(&[2, 3]);
        let fill = |xs: &[f64]| {
            let mut acc = MomentAccumulator::new(8, 0.5, &w, 1).unwrap();
            xs.iter().for_each(|&v| acc.push(v));
            acc
        };
        let (mut ab, mut ba) = (fill(&a), fill(&b));
        ab.merge(&fill(&b)).unwrap();
        ba.merge(&fill(&a)).unwrap();
        for (x, y) in ab.moments().iter().zip(ba.moments()) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
        prop_assert_eq!(ab.moment(0).unwrap(), (a.len() + b.len()) as f64);
        for m in (2..=8).step_by(2) {
            prop_assert!(ab.moment(m).unwrap() >= 0.0);
        }
    }

    #[test]
    fn window_statistics(z1 in 2u64..3_000, dz in 0u64..3_000, g1 in table_function(), g2 in table_function()) {
        let t = primes_up_to(6_000).unwrap();
        let model = DensityModel::Unit { x: 6_000 };
        let w1 = PrimeWindow::new(&t, z1 as f64).unwrap();
        let w2 = PrimeWindow::new(&t, (z1 + dz) as f64).unwrap();
        // monotone in z, and splitting the window is additive
        let (m1, m2) = (mean_mu(&g1, &w1, &model), mean_mu(&g1, &w2, &model));
        prop_assert!(m2 >= m1);
        let tail: f64 = w2.primes()[w1.len()..].iter().map(|&p| g1.value(p) / p as f64).sum();
        prop_assert!((m2 - m1 - tail).abs() <= 1e-12 * m2.max(1.0));
        prop_assert!(covariance_kappa(&g1, &g1, &w2, &model) >= covariance_kappa(&g1, &g1, &w1, &model));
        // Cauchy–Schwarz and 𝔎 <= G 𝔐
        let k12 = covariance_kappa(&g1, &g2, &w2, &model);
        let (s1, s2) = (covariance_kappa(&g1, &g1, &w2, &model), covariance_kappa(&g2, &g2, &w2, &model));
        prop_assert!(k12.abs() <= s1.max(s2) + 1e-15);
        let (fm, fk) = frak_bounds(&[g1, g2], &w2, &model);
        prop_assert!(fk <= 2.0 * fm + 1e-12);
    }

    #[test]
    fn weights_are_multiplicative(r1 in 1u64..2_000, r2 in 1u64..2_000, a in 1u64..10_000, shifted in any::<bool>()) {
        let model = if shifted {
            DensityModel::ShiftedPrimes { shift: 1, scale: 100.0 }
        } else {
            DensityModel::Unit { x: 100 }
        };
        prop_assert_eq!(f_r(r1 * r2, a, &model).unwrap(), f_r(r1, a, &model).unwrap() * f_r(r2, a, &model).unwrap());
        if num_integer_gcd(r1, r2) == 1 {
            prop_assert_eq!(h_of(r1 * r2, &model).unwrap(), h_of(r1, &model).unwrap() * h_of(r2, &model).unwrap());
            let s = a;
            prop_assert_eq!(j_of(r1 * r2, s, &model).unwrap(), j_of(r1, s, &model).unwrap() * j_of(r2, s, &model).unwrap());
        }
    }

    #[test]
    fn remainders_are_small_for_integers(x in 16u64..5_000, d in prop::sample::select(vec![1u64, 2, 3, 5, 6, 10, 15, 30, 77])) {
        let t = primes_up_to(100).unwrap();
        let set = InputSet::AllIntegers { x };
        let r = empirical_remainder(&set, &t, &set.model(), d).unwrap();
        prop_assert!(r.value.to_f64().abs() < 1.0);
    }
}

fn num_integer_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[test]
fn omega_window_means_are_exact_rationals() {
    let w = PrimeWindow::from_primes(&[2, 3, 5, 7]);
    let model = DensityModel::Unit { x: 10 };
    let exact: BigRational = [2i64, 3, 5, 7].iter().fold(BigRational::zero(), |acc, &p| acc + rat(1, p));
    assert_eq!(exact, rat(247, 210));
    assert!((mean_mu(&builtin_omega(), &w, &model) - 247.0 / 210.0).abs() < 1e-15);
}
