use ihat::algebra::{self, FactorList, InversionSettings};
use ihat::gengamma::{self, GenGammaParams};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = GenGammaParams> {
    (0.5f64..3.0, 0.3f64..3.0, 0.5f64..2.5, 0.0f64..3.0).prop_map(|(a, b, g, m)| GenGammaParams::new(a, b, g, m).unwrap())
}

fn inv() -> InversionSettings {
    InversionSettings::with_tolerance(1e-9)
}

// Inversions cost milliseconds each, so the expensive properties run few cases.
fn few() -> ProptestConfig {
    ProptestConfig::with_cases(12)
}

proptest! {
    #[test]
    fn nothing_below_the_support(p in params(), d in 1e-6f64..5.0) {
        prop_assert_eq!(gengamma::pdf(&p, p.mu - d), 0.0);
        prop_assert_eq!(gengamma::cdf(&p, p.mu - d), 0.0);
    }

    #[test]
    fn closed_form_integrates_to_one(p in params()) {
        let mass = algebra::mass_of_excess(|y| Ok(gengamma::pdf_excess(&p, y)), f64::INFINITY, 1e-11).unwrap();
        prop_assert!((mass - 1.0).abs() < 1e-8, "{:?}: {}", p, mass);
    }

    #[test]
    fn scaling_is_exact(p in params(), a in 0.01f64..100.0, u in 0.01f64..5.0) {
        let q = gengamma::scale(&p, a).unwrap();
        let x = a * (p.mu + u);
        let (lhs, rhs) = (gengamma::pdf(&q, x) * a, gengamma::pdf(&p, x / a));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0), "{} vs {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(few())]

    #[test]
    fn combinations_vanish_below_their_support(p in params(), q in params(), d in 1e-3f64..2.0) {
        let fs = FactorList::new(vec![p, q]).unwrap();
        let below_sum = p.mu + q.mu - d;
        prop_assert_eq!(algebra::sum_pdf(&fs, below_sum, &inv()).unwrap(), 0.0);
        let below_product = p.mu * q.mu - d;
        if below_product > 0.0 {
            prop_assert_eq!(algebra::product_pdf(&fs, below_product, &inv()).unwrap(), 0.0);
        }
    }

    #[test]
    fn factor_order_does_not_matter(p in params(), q in params(), u in 0.1f64..4.0) {
        let (pq, qp) = (FactorList::new(vec![p, q]).unwrap(), FactorList::new(vec![q, p]).unwrap());
        let x = p.mu + q.mu + u;
        let (a, b) = (algebra::sum_pdf(&pq, x, &inv()).unwrap(), algebra::sum_pdf(&qp, x, &inv()).unwrap());
        prop_assert!((a - b).abs() < 1e-8, "sum {} vs {}", a, b);
        let x = p.mu * q.mu + u;
        let (a, b) = (algebra::product_pdf(&pq, x, &inv()).unwrap(), algebra::product_pdf(&qp, x, &inv()).unwrap());
        prop_assert!((a - b).abs() < 1e-8, "product {} vs {}", a, b);
    }

    #[test]
    fn sums_follow_a_shift(p in params(), q in params(), d in 0.1f64..3.0, u in 0.1f64..4.0) {
        let moved = GenGammaParams::new(p.alpha, p.beta, p.gamma, p.mu + d).unwrap();
        let x = p.mu + q.mu + u;
        let a = algebra::sum_pdf(&FactorList::new(vec![p, q]).unwrap(), x, &inv()).unwrap();
        let b = algebra::sum_pdf(&FactorList::new(vec![moved, q]).unwrap(), x + d, &inv()).unwrap();
        prop_assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
    }

    #[test]
    fn linear_combination_is_a_scaled_sum(p in params(), q in params(), a in 0.2f64..5.0, b in 0.2f64..5.0, u in 0.1f64..4.0) {
        let fs = FactorList::new(vec![p, q]).unwrap();
        let scaled = FactorList::new(vec![gengamma::scale(&p, a).unwrap(), gengamma::scale(&q, b).unwrap()]).unwrap();
        let x = a * p.mu + b * q.mu + u;
        let lc = algebra::linear_combination_pdf(&[a, b], &fs, x, &inv()).unwrap();
        let sum = algebra::sum_pdf(&scaled, x, &inv()).unwrap();
        prop_assert_eq!(lc.to_bits(), sum.to_bits());
    }
}
