use fsec::fading::{cdf, pdf, survival, FadingParams, WiretapScenario};
use fsec::secrecy::pnsc_closed;
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = f64> {
    0.5f64..6.0
}

fn params() -> impl Strategy<Value = FadingParams> {
    (shape(), shape(), -10.0f64..30.0)
        .prop_map(|(m, ms, db)| FadingParams::from_db(m, ms, db).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cdf_is_monotone_and_bounded(p in params(), x in 1e-4f64..1e3, k in 1.0f64..10.0) {
        let lo = cdf(&p, x).unwrap();
        let hi = cdf(&p, x * k).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo);
        prop_assert!((lo + survival(&p, x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pdf_is_nonnegative(p in params(), x in 1e-6f64..1e4) {
        let f = pdf(&p, x).unwrap();
        prop_assert!(f >= 0.0 && f.is_finite());
    }

    #[test]
    fn pnsc_swap_sums_to_one(d in params(), e in params()) {
        let s = WiretapScenario::new(d, e);
        let p = pnsc_closed(&s).unwrap().value;
        let q = pnsc_closed(&s.swapped()).unwrap().value;
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((p + q - 1.0).abs() < 1e-6, "{} + {}", p, q);
    }
}
