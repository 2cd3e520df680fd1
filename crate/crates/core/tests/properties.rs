use monkey_zipf::analysis::median;
use monkey_zipf::scalar::compensated_sum;
use monkey_zipf::{
    alphas, keyboard_from_spacings, miller_exponent, miller_keyboard, mu_bar, sample_spacings,
    shao_hahn_statistic, solve_root, verify_proposition1, DistributionSpec, Keyboard,
};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = DistributionSpec> {
    prop_oneof![
        Just(DistributionSpec::Uniform),
        Just(DistributionSpec::BetaThreeTwo)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn spacing_keyboards_are_valid(spec in spec_strategy(), k in 2usize..400, seed: u64, c in 0.05f64..0.99) {
        let sample = sample_spacings(&spec, k, seed).unwrap();
        prop_assert!((compensated_sum(sample.spacings.iter().copied()) - 1.0).abs() <= 1e-12);
        prop_assert!(sample.spacings.iter().all(|&d| d > 0.0));
        let mut resorted = sample.spacings.clone();
        resorted.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(&resorted, &sample.sorted_spacings);
        prop_assert_eq!(&sample, &sample_spacings(&spec, k, seed).unwrap());

        let kb: Keyboard = keyboard_from_spacings(&sample, c).unwrap();
        prop_assert!((compensated_sum(kb.q().iter().copied()) + kb.s() - 1.0).abs() <= 1e-12);
        prop_assert!(kb.q().windows(2).all(|w| w[0] >= w[1]));
        let a = alphas(&kb);
        prop_assert_eq!(a[0], 1.0);
        prop_assert!(a.windows(2).all(|w| w[0] <= w[1]));
        for (ai, qi) in a.iter().zip(kb.q()) {
            prop_assert!((kb.q1().powf(*ai) - qi).abs() / qi <= 1e-12);
        }
    }

    #[test]
    fn exponent_characterizations_agree(spec in spec_strategy(), k in 2usize..300, seed: u64, c in 0.05f64..0.99) {
        let kb: Keyboard = keyboard_from_spacings(&sample_spacings(&spec, k, seed).unwrap(), c).unwrap();
        let rep = solve_root(&kb).unwrap();
        prop_assert!(rep.beta > 1.0);
        prop_assert!((rep.u * rep.beta - 1.0).abs() <= 1e-12);
        prop_assert!(rep.residual <= 1e-13);
        prop_assert!(rep.root_defect().abs() <= 1e-10);
        let bl: f64 = kb.q().iter().map(|q| q.powf(1.0 / rep.beta)).sum();
        prop_assert!((bl - 1.0).abs() <= 1e-10);
        prop_assert!((rep.beta - (-kb.q1().ln() / rep.r0.ln())).abs() <= 1e-12 * rep.beta);
        prop_assert!(rep.b > 0.0 && rep.b < 1.0);
        prop_assert!(rep.c1 < rep.c2 && rep.c1 > 0.0);
    }

    #[test]
    fn mu_bar_never_exceeds_minus_beta(spec in spec_strategy(), k in 2usize..300, seed: u64, c in 0.05f64..0.99) {
        let sample = sample_spacings(&spec, k, seed).unwrap();
        let kb: Keyboard = keyboard_from_spacings(&sample, c).unwrap();
        let p = verify_proposition1(&kb).unwrap();
        prop_assert!(p.holds);
        prop_assert!(p.mu_bar <= p.minus_beta + 1e-12);
        prop_assert!(p.minus_beta < -1.0);

        let sh = shao_hahn_statistic(&sample).with_letter_mass(&sample, c);
        let log_k = (k as f64).ln();
        prop_assert!((sh.radix_k_mean - (sh.statistic / log_k - 1.0)).abs() <= 1e-12);
        prop_assert!((sh.mu_bar.unwrap() - (c.ln() / log_k + sh.radix_k_mean)).abs() <= 1e-12);
        prop_assert!((sh.mu_bar.unwrap() - mu_bar(&kb)).abs() <= 1e-12);
    }

    #[test]
    fn equal_probabilities(k in 2usize..2000, s in 0.001f64..0.999) {
        let kb: Keyboard = miller_keyboard(k, s).unwrap();
        prop_assert!(alphas(&kb).iter().all(|&a| a == 1.0));
        let rep = solve_root(&kb).unwrap();
        prop_assert!((rep.slope() - miller_exponent(k, s).unwrap()).abs() <= 1e-12);
        let p = verify_proposition1(&kb).unwrap();
        prop_assert!((p.mu_bar - p.minus_beta).abs() <= 1e-12);
    }
}

#[test]
fn letter_mass_matters_less_at_large_k() {
    // same spacings, two letter masses: the β gap shrinks as K grows
    let gap = |k: usize| {
        let mut gaps: Vec<f64> = (0..20)
            .map(|seed| {
                let sample = sample_spacings(&DistributionSpec::Uniform, k, seed).unwrap();
                let lo: Keyboard = keyboard_from_spacings(&sample, 0.5).unwrap();
                let hi: Keyboard = keyboard_from_spacings(&sample, 0.9).unwrap();
                (solve_root(&lo).unwrap().beta - solve_root(&hi).unwrap().beta).abs()
            })
            .collect();
        median(&mut gaps).unwrap()
    };
    let (g10, g100, g1000) = (gap(10), gap(100), gap(1000));
    assert!(g10 > g100 && g100 > g1000, "{g10} {g100} {g1000}");
}

#[test]
fn shuffling_spacings_leaves_statistic_unchanged() {
    let sample = sample_spacings(&DistributionSpec::Uniform, 5000, 8).unwrap();
    let mut shuffled = sample.clone();
    shuffled.spacings = sample.sorted_spacings.clone();
    let a = shao_hahn_statistic(&sample).statistic;
    let b = shao_hahn_statistic(&shuffled).statistic;
    assert!((a - b).abs() < 1e-13);
}

#[test]
fn f32_and_f64_agree_on_beta() {
    let sample = sample_spacings(&DistributionSpec::BetaThreeTwo, 26, 17).unwrap();
    let kb64: Keyboard = keyboard_from_spacings(&sample, 0.82).unwrap();
    let kb32: monkey_zipf::Keyboard32 = keyboard_from_spacings(&sample, 0.82f32).unwrap();
    let b64 = solve_root(&kb64).unwrap().beta;
    let b32 = solve_root(&kb32).unwrap().beta;
    assert!((b64 - b32 as f64).abs() < 1e-4);
}
