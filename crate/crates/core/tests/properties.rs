use proptest::prelude::*;

use trimdist::{
    best_lipschitz_box, best_monotone_box, compose_gamma, empirical_cdf, gamma_envelopes, pasch_hausdorff,
    sup_norm_distance, trim_gamma, trimmed_distance, uniform_nodes, BoxBounds, DistributionSpec, GridFunction,
    TrimParams,
};

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0_f64, 1..80)
}

fn wiggly() -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(-1.0..1.0_f64, 2..40).prop_map(|v| GridFunction::linear(uniform_nodes(v.len()), v).unwrap())
}

/// Nondecreasing into `[0, 1]`, linear or step.
fn cdf_like() -> impl Strategy<Value = GridFunction> {
    (prop::collection::vec(0.0..1.0_f64, 2..40), any::<bool>()).prop_map(|(mut v, step)| {
        v.sort_by(f64::total_cmp);
        if step {
            v[0] = 0.0;
            GridFunction::step_left(uniform_nodes(v.len()), v).unwrap()
        } else {
            GridFunction::linear(uniform_nodes(v.len()), v).unwrap()
        }
    })
}

proptest! {
    #[test]
    fn empirical_quantile_is_the_left_inverse(s in sample(), t in 0.001..1.0_f64) {
        let f = empirical_cdf(&s).unwrap();
        let q = f.quantile(t);
        prop_assert!(f.cdf(q) >= t);
        let mut sorted = s.clone();
        sorted.sort_by(f64::total_cmp);
        for &x in sorted.iter().filter(|&&x| x < q) {
            prop_assert!(f.cdf(x) < t);
        }
    }

    #[test]
    fn gamma_is_a_nondecreasing_map_into_the_unit_interval(s in sample(), mu in -2.0..2.0_f64) {
        let f0 = DistributionSpec::normal(mu, 1.0).unwrap();
        let g = compose_gamma(&f0, &empirical_cdf(&s).unwrap(), 0).unwrap();
        prop_assert!(g.is_nondecreasing());
        prop_assert!(g.min_value() >= 0.0 && g.max_value() <= 1.0);
    }

    #[test]
    fn sup_norm_is_a_metric(f in wiggly(), g in wiggly(), h in wiggly()) {
        let fg = sup_norm_distance(&f, &g);
        prop_assert_eq!(fg, sup_norm_distance(&g, &f));
        prop_assert_eq!(sup_norm_distance(&f, &f), 0.0);
        prop_assert!(fg <= sup_norm_distance(&f, &h) + sup_norm_distance(&h, &g) + 1e-15);
    }

    #[test]
    fn sup_norm_dominates_dense_sampling(f in wiggly(), g in wiggly()) {
        let d = sup_norm_distance(&f, &g);
        for k in 0..=1000 {
            let t = k as f64 / 1000.0;
            prop_assert!((f.eval(t) - g.eval(t)).abs() <= d + 1e-15);
        }
    }

    #[test]
    fn trimmed_optimum_is_in_the_trimming_class(g in cdf_like(), alpha in 0.0..0.95_f64) {
        let params = TrimParams::new(alpha).unwrap();
        let r = trim_gamma(&g, params).unwrap();
        prop_assert_eq!(r.h_opt.eval(0.0), 0.0);
        prop_assert_eq!(r.h_opt.eval(1.0), 1.0);
        prop_assert!(r.h_opt.is_nondecreasing());
        prop_assert!(r.h_opt.is_lipschitz(params.lip(), 1e-14));
        prop_assert!((sup_norm_distance(&r.h_opt, &g) - r.distance).abs() <= 1e-12);
    }

    #[test]
    fn distance_is_nonincreasing_in_alpha(s in sample(), a in 0.0..0.9_f64, b in 0.0..0.9_f64) {
        let f0 = DistributionSpec::normal(0.0, 1.0).unwrap();
        let f = empirical_cdf(&s).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let d_lo = trimmed_distance(&f0, &f, TrimParams::new(lo).unwrap(), 0).unwrap().distance;
        let d_hi = trimmed_distance(&f0, &f, TrimParams::new(hi).unwrap(), 0).unwrap().distance;
        prop_assert!(d_hi <= d_lo + 1e-15);
        prop_assert!(d_lo <= 1.0);
    }

    #[test]
    fn envelopes_sandwich_and_stay_monotone(f in cdf_like(), lip in 0.5..4.0_f64) {
        let e = pasch_hausdorff(&f, lip).unwrap();
        for (t, v) in f.samples() {
            prop_assert!(e.lower.eval(t) <= v + 1e-12 && v <= e.upper.eval(t) + 1e-12);
        }
        prop_assert!(e.lower.is_nondecreasing() && e.upper.is_nondecreasing());
        let (g1, g2) = gamma_envelopes(&f, lip).unwrap();
        prop_assert!(g1.is_nonincreasing() && g2.is_nonincreasing());
    }

    #[test]
    fn monotone_box_reduction_reproduces_lipschitz_box(f in cdf_like(), lip in 1.0..4.0_f64) {
        let lipbox = best_lipschitz_box(&f, lip).unwrap();
        let mono = best_monotone_box(&f.add_linear(-lip), BoxBounds::lipschitz(lip));
        prop_assert!((lipbox.distance - mono.distance).abs() <= 1e-12);
        prop_assert!(sup_norm_distance(&lipbox.approximant, &mono.approximant.add_linear(lip)) <= 1e-12);
    }

    #[test]
    fn monotone_box_approximant_is_feasible(g in wiggly(), a in -1.0..0.0_f64, w in 0.0..1.5_f64) {
        let bounds = BoxBounds::new(a, a + w).unwrap();
        let r = best_monotone_box(&g, bounds);
        prop_assert!(r.approximant.is_nonincreasing());
        prop_assert!(r.approximant.min_value() >= bounds.a && r.approximant.max_value() <= bounds.b);
    }
}
