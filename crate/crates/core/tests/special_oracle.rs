//! ln Γ against statrs, including the reflection region.

use horolab::special::{gamma, ln_gamma, ln_gamma_signed};
use proptest::prelude::*;

proptest! {
    #[test]
    fn ln_gamma_matches_statrs(x in 0.01f64..170.0) {
        let ours = ln_gamma(x).unwrap();
        let theirs = statrs::function::gamma::ln_gamma(x);
        prop_assert!((ours - theirs).abs() <= 1e-13 * theirs.abs().max(1.0), "{x}: {ours} vs {theirs}");
    }

    #[test]
    fn negative_arguments_follow_reflection(x in -30.0f64..-0.01) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let (lg, sign) = ln_gamma_signed(x).unwrap();
        let g = statrs::function::gamma::gamma(x);
        prop_assert_eq!(sign, g.signum());
        prop_assert!((lg - g.abs().ln()).abs() <= 1e-11 * lg.abs().max(1.0));
    }
}

#[test]
fn poles_are_errors() {
    assert!(gamma(0.0).is_err());
    assert!(gamma(-3.0).is_err());
    assert!((gamma(0.5).unwrap() / std::f64::consts::PI.sqrt() - 1.0).abs() < 1e-14);
}
