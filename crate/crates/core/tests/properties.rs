use besselexp::validation::quadrature_cdf;
use besselexp::validation::verify::envelope_excess;
use besselexp::{
    approx_tune, bessel_eval, expected_acceptance, lambert_w0, wrap_angle, KappaSampler, Method, PosteriorParams,
    RngStream, SampleStats, WMode,
};
use proptest::prelude::*;

fn w_mode() -> impl Strategy<Value = WMode> {
    prop_oneof![Just(WMode::Exact), Just(WMode::Winitzki)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tuned_envelope_dominates(eta in 0.2f64..500.0, b0 in -0.999f64..20.0, w in w_mode()) {
        let post = PosteriorParams::new(eta, b0).unwrap();
        let env = approx_tune(&post, w);
        prop_assert!(envelope_excess(&post, &env).unwrap() <= 1e-9);
        let eff = expected_acceptance(&post, &env).unwrap();
        prop_assert!(eff > 0.0 && eff <= 1.0 + 1e-9);
    }

    #[test]
    fn efficiency_floor_holds_off_grid(eta in 1.0f64..100.0, b0 in -0.995f64..0.995) {
        let post = PosteriorParams::new(eta, b0).unwrap();
        let eff = expected_acceptance(&post, &approx_tune(&post, WMode::Winitzki)).unwrap();
        prop_assert!(eff >= 0.7, "{eff}");
    }

    #[test]
    fn loops_agree_and_conserve(eta in 0.5f64..200.0, b0 in -0.99f64..5.0, seed in any::<u64>()) {
        let post = PosteriorParams::new(eta, b0).unwrap();
        let env = approx_tune(&post, WMode::Winitzki);
        let (plain, squeezed) = (KappaSampler::new(&post, &env, Method::Plain), KappaSampler::new(&post, &env, Method::Squeezed));
        let (mut ra, mut rb) = (RngStream::new(seed), RngStream::new(seed));
        let (mut sa, mut sb) = (SampleStats::default(), SampleStats::default());
        for _ in 0..200 {
            let x = plain.sample(&mut ra, &mut sa).unwrap();
            let y = squeezed.sample(&mut rb, &mut sb).unwrap();
            prop_assert!(x >= 0.0 && x.is_finite());
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
        prop_assert!(sa.is_conserved() && sb.is_conserved());
        prop_assert_eq!(sa.proposals, sb.proposals);
        prop_assert!(sb.bessel_evals <= sb.proposals - sb.truncation_rejects - sb.squeeze_accepts - sb.squeeze_rejects);
    }

    #[test]
    fn lambert_round_trip(t in -0.36787944117144233f64..1e3) {
        let w = lambert_w0(t).unwrap();
        prop_assert!(w >= -1.0);
        prop_assert!((w * w.exp() - t).abs() <= 1e-12 * (1.0 + t.abs()));
    }

    #[test]
    fn bessel_ratio_in_unit_interval(kappa in 0.0f64..1e6) {
        let be = bessel_eval(kappa).unwrap();
        prop_assert!(be.ratio >= 0.0 && be.ratio < 1.0);
        prop_assert!(be.log_i0 >= 0.0 && be.log_i0 <= kappa);
    }

    #[test]
    fn wrapped_angles_are_principal(theta in -1e4f64..1e4) {
        let w = wrap_angle(theta);
        prop_assert!(w > -std::f64::consts::PI && w <= std::f64::consts::PI);
        prop_assert!((w.sin() - theta.sin()).abs() < 1e-9 && (w.cos() - theta.cos()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cdf_table_is_a_distribution(eta in 0.5f64..100.0, b0 in -0.99f64..5.0) {
        let post = PosteriorParams::new(eta, b0).unwrap();
        let t = quadrature_cdf(&post, 1e-8).unwrap();
        let mut prev = 0.0;
        for i in 0..=200 {
            let c = t.cdf(t.kappa_max() * i as f64 / 200.0);
            prop_assert!((0.0..=1.0).contains(&c) && c >= prev - 2e-16);
            prev = c;
        }
        prop_assert_eq!(t.cdf(t.kappa_max()), 1.0);
        prop_assert!(t.mean() > 0.0 && t.variance() > 0.0);
    }
}
