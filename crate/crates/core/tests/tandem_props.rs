use proptest::prelude::*;
use tandem_sdt::{
    approx_d_eff, contingent_optimal_criteria, continuous_fusion_bound, d_eff_of, default_alpha_grid,
    default_trust_ratios, make_aid, maximize_d_eff, optimal_shift, tandem_performance, trust_scaled_criteria,
    trust_sweep, AidCharacteristics, ContingentCriteria, PayoffContext, SearchConfig,
};

fn fig1() -> (PayoffContext, AidCharacteristics) {
    (
        PayoffContext::from_ratio(0.5, 0.5).unwrap(),
        make_aid(1.0, -0.3).unwrap(),
    )
}

fn payoff_of(d_h: f64, criteria: &ContingentCriteria, aid: &AidCharacteristics, ctx: &PayoffContext) -> f64 {
    tandem_performance(d_h, criteria, aid, ctx).unwrap().expected_payoff
}

/// Every ±0.05 nudge of one contingent log-criterion must cost payoff.
fn assert_locally_optimal(d_h: f64, aid: &AidCharacteristics, ctx: &PayoffContext) {
    let best = contingent_optimal_criteria(aid, ctx).unwrap();
    let base = payoff_of(d_h, &best, aid, ctx);
    for delta in [-0.05, 0.05] {
        let alert = ContingentCriteria {
            ln_beta_alert: best.ln_beta_alert + delta,
            ..best
        };
        let silent = ContingentCriteria {
            ln_beta_no_alert: best.ln_beta_no_alert + delta,
            ..best
        };
        for nudged in [alert, silent] {
            let v = payoff_of(d_h, &nudged, aid, ctx);
            assert!(v < base, "{nudged:?}: {v} >= {base}");
        }
    }
}

/// Beyond a few units on the observation axis the rates sit in the clamped
/// tails and payoff is flat to machine precision.
fn on_axis_within(criteria: &ContingentCriteria, d_h: f64, limit: f64) -> bool {
    let (alert, silent) = criteria.on_axis(d_h).unwrap();
    alert.abs() <= limit && silent.abs() <= limit
}

fn context() -> impl Strategy<Value = PayoffContext> {
    (0.05f64..0.95, 0.05f64..20.0).prop_map(|(p, u)| PayoffContext::from_ratio(p, u).unwrap())
}

fn aid() -> impl Strategy<Value = AidCharacteristics> {
    (0.05f64..3.0, -2.0f64..2.0).prop_map(|(d, c)| make_aid(d, c).unwrap())
}

#[test]
fn sandwich_bound() {
    let axis = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
    let ctx = PayoffContext::symmetric();
    for d_h in axis {
        for d_a in axis {
            let star = maximize_d_eff(d_h, d_a, &ctx, &SearchConfig::default())
                .unwrap()
                .d_eff_star;
            let bound = continuous_fusion_bound(d_h, d_a).unwrap();
            assert!(d_h.max(d_a) - 1e-6 <= star, "({d_h}, {d_a}): {star}");
            assert!(star < bound, "({d_h}, {d_a}): {star} >= {bound}");
        }
    }
}

#[test]
fn worked_example_criteria_are_locally_optimal() {
    let (ctx, aid) = fig1();
    assert_locally_optimal(1.0, &aid, &ctx);
}

#[test]
fn over_trust_falls_below_the_human_alone() {
    let ctx = PayoffContext::symmetric();
    let ratios: Vec<f64> = default_trust_ratios::<f64>()
        .into_iter()
        .filter(|&k| k >= 10.0)
        .collect();
    assert!(!ratios.is_empty());
    for point in trust_sweep(1.0, 0.5, &ctx, &ratios, &SearchConfig::default()).unwrap() {
        assert!(point.d_eff_over_d_h < 1.0, "{point:?}");
    }
}

#[test]
fn trust_aid_alone_limit() {
    let ctx = PayoffContext::symmetric();
    for d_a in [0.5, 1.0, 3.0] {
        let sweep = trust_sweep(1.0, d_a, &ctx, &[100.0], &SearchConfig::default()).unwrap();
        assert!((sweep[0].d_eff - d_a).abs() <= 1e-3, "d_a = {d_a}: {:?}", sweep[0]);
    }
}

#[test]
fn approximation_within_005_on_default_grid() {
    let ctx = PayoffContext::symmetric();
    let mut worst = (0.0, 0.0, 0.0);
    for (d_h, d_a) in default_alpha_grid::<f64>() {
        let star = maximize_d_eff(d_h, d_a, &ctx, &SearchConfig::default())
            .unwrap()
            .d_eff_star;
        let err = (approx_d_eff(d_h, d_a, 0.3).unwrap() - star).abs();
        if err > worst.2 {
            worst = (d_h, d_a, err);
        }
    }
    assert!(
        worst.2 <= 0.05,
        "largest deviation {:.4} at (d_h, d_a) = ({}, {})",
        worst.2,
        worst.0,
        worst.1
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_ignores_payoffs(aid in aid(), a in context(), b in context()) {
        let ca = contingent_optimal_criteria(&aid, &a).unwrap();
        let cb = contingent_optimal_criteria(&aid, &b).unwrap();
        prop_assert!((ca.shift() - cb.shift()).abs() <= 1e-12);
        prop_assert!((ca.shift() - optimal_shift(&aid).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn criteria_follow_cue_likelihood_ratios(aid in aid(), ctx in context()) {
        let c = contingent_optimal_criteria(&aid, &ctx).unwrap();
        let (s1, s0) = (aid.p_alert_given_s1, aid.p_alert_given_s0);
        let expected = (s0.value() / s1.value()) / (s0.complement() / s1.complement());
        let got = (c.ln_beta_alert - c.ln_beta_no_alert).exp();
        prop_assert!((got - expected).abs() <= 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn alert_lowers_the_criterion(aid in aid(), ctx in context()) {
        let c = contingent_optimal_criteria(&aid, &ctx).unwrap();
        prop_assert!(c.ln_beta_alert < c.ln_beta_no_alert);
    }

    #[test]
    fn zero_trust_is_the_human_alone(d_h in 0.1f64..4.0, aid in aid(), ctx in context()) {
        let optimal = contingent_optimal_criteria(&aid, &ctx).unwrap();
        let ignored = trust_scaled_criteria(&optimal, 0.0).unwrap();
        prop_assume!(on_axis_within(&ignored, d_h, 4.0));
        prop_assert!((d_eff_of(d_h, &ignored, &aid).unwrap() - d_h).abs() <= 1e-9);
    }

    #[test]
    fn contingent_criteria_are_locally_optimal(
        d_h in 0.25f64..3.0,
        d_a in 0.25f64..3.0,
        c_a in -1.5f64..1.5,
        ctx in context(),
    ) {
        let aid = make_aid(d_a, c_a).unwrap();
        prop_assume!(on_axis_within(&contingent_optimal_criteria(&aid, &ctx).unwrap(), d_h, 4.0));
        assert_locally_optimal(d_h, &aid, &ctx);
    }

    #[test]
    fn maximum_beats_any_single_cutoff(d_h in 0.25f64..3.0, d_a in 0.25f64..3.0, c_a in -2.0f64..2.0) {
        let ctx = PayoffContext::symmetric();
        let star = maximize_d_eff(d_h, d_a, &ctx, &SearchConfig::default()).unwrap().d_eff_star;
        let aid = make_aid(d_a, c_a).unwrap();
        let here = d_eff_of(d_h, &contingent_optimal_criteria(&aid, &ctx).unwrap(), &aid).unwrap();
        prop_assert!(here <= star + 1e-9);
    }
}
