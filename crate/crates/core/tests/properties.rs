use bw_core::dist::{cdf, hazard, log_pdf, pdf, survival};
use bw_core::quantile::quantile;
use bw_core::BwParams;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = BwParams> {
    (0.2f64..6.0, 0.1f64..8.0, 0.2f64..3.0, 0.3f64..4.0)
        .prop_map(|(c, k, l, b)| BwParams::new(c, k, l, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quantile_inverts_cdf(p in params(), u in 0.001f64..0.999) {
        let q = quantile(&p, u).unwrap();
        prop_assert!((cdf(&p, q).unwrap() - u).abs() <= 1e-10);
    }

    #[test]
    fn cdf_and_survival_are_complementary(p in params(), x in 1e-3f64..20.0) {
        let (f, s) = (cdf(&p, x).unwrap(), survival(&p, x).unwrap());
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((f + s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cdf_is_monotone(p in params(), x in 1e-3f64..20.0, dx in 1e-6f64..1.0) {
        prop_assert!(cdf(&p, x).unwrap() <= cdf(&p, x + dx).unwrap());
    }

    #[test]
    fn hazard_is_density_over_survival(p in params(), x in 1e-2f64..5.0) {
        let s = survival(&p, x).unwrap();
        prop_assume!(s > 1e-200);
        let h = hazard(&p, x).unwrap();
        let ratio = pdf(&p, x).unwrap() / s;
        prop_assert!((h - ratio).abs() <= 1e-9 * ratio.max(1e-300));
        prop_assert!((log_pdf(&p, x).unwrap().exp() - pdf(&p, x).unwrap()).abs() <= 1e-12 * pdf(&p, x).unwrap().max(1.0));
    }

    #[test]
    fn invalid_parameters_are_rejected(v in prop::sample::select(vec![0.0, -1.0, f64::NAN, f64::INFINITY]), slot in 0usize..4) {
        let mut raw = [1.0; 4];
        raw[slot] = v;
        prop_assert!(BwParams::from_slice(&raw).is_err());
    }
}
