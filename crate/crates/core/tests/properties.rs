//! Property tests over randomized inputs for the structural invariants.

use proptest::collection::vec;
use proptest::prelude::*;

use charlier_core::charlier::charlier_eval;
use charlier_core::measures::{signed_measure_pmf, Approximant};
use charlier_core::metrics::{distance, DistanceKind};
use charlier_core::params::BernoulliParams;
use charlier_core::pmf::{poisson_binomial_pmf, poisson_pmf, psi, tail_split};

fn probs_strategy() -> impl Strategy<Value = Vec<f64>> {
    vec(0.0..0.95f64, 1..40)
}

proptest! {
    #[test]
    fn pb_pmf_is_a_probability(probs in probs_strategy()) {
        let params = BernoulliParams::from_probs(probs).unwrap();
        let pmf = poisson_binomial_pmf(&params).unwrap();
        prop_assert!(pmf.masses().iter().all(|&m| m >= 0.0));
        let total = pmf.total();
        // upper allowance is f64 rounding of the untruncated convolution
        prop_assert!((1.0 - 1e-12..=1.0 + 1e-12).contains(&total));
        prop_assert!((pmf.mean() - params.lambda()).abs() < 1e-10);
    }

    #[test]
    fn tv_is_symmetric_and_bounded(probs in probs_strategy(), lambda in 0.01..20.0f64) {
        let params = BernoulliParams::from_probs(probs).unwrap();
        let pb = poisson_binomial_pmf(&params).unwrap();
        let pois = poisson_pmf(lambda, Some((0, pb.support().1))).unwrap();
        let ab = distance(DistanceKind::Tv, &pb, &pois, None).unwrap().value;
        let ba = distance(DistanceKind::Tv, &pois, &pb, None).unwrap().value;
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
    }

    #[test]
    fn kolmogorov_tv_sandwich(probs in probs_strategy()) {
        let params = BernoulliParams::from_probs(probs).unwrap();
        prop_assume!(params.lambda() > 0.0);
        let pb = poisson_binomial_pmf(&params).unwrap();
        let hi = pb.support().1.max((params.lambda() + 20.0 * params.lambda().sqrt() + 20.0) as usize);
        let pois = poisson_pmf(params.lambda(), Some((0, hi))).unwrap();
        let tv = distance(DistanceKind::Tv, &pb, &pois, None).unwrap().value;
        let dk = distance(DistanceKind::Kolmogorov, &pb, &pois, None).unwrap().value;
        prop_assert!(dk <= tv + 1e-12);
        prop_assert!(tv <= 2.0 * dk + 1e-12);
    }

    #[test]
    fn charlier_symmetry(k in 0usize..12, n in 0usize..12, lambda in 0.2..15.0f64) {
        let a = charlier_eval(k, lambda, n).unwrap();
        let b = charlier_eval(n, lambda, k).unwrap();
        let sign = if (n + k) % 2 == 0 { 1.0 } else { -1.0 };
        let norm = |d: usize| {
            ((1..=d).map(|i| i as f64).product::<f64>() / lambda.powi(d as i32)).sqrt()
        };
        let scale = a.abs().max(b.abs()).max(norm(k)).max(norm(n));
        prop_assert!(((a - sign * b) / scale).abs() < 1e-9);
    }

    #[test]
    fn tail_split_invariants(lambda in 0.0..50.0f64, frac in 0.0..2.0f64) {
        let m = ((lambda + 1.0) * frac) as usize;
        let t = tail_split(lambda, m).unwrap();
        prop_assert!(t.z_value <= 0.5 + 1e-15);
        prop_assert!(t.z_value <= t.z_bound + 1e-15);
        prop_assert!((t.lower_mass + t.upper_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psi_dominates_its_quadratic_minorant(x in 1e-6..50.0f64) {
        prop_assert!(psi(x) >= (1.0 - x).powi(2) / (2.0 * (1.0 + x)) - 1e-12);
    }

    #[test]
    fn signed_measures_carry_unit_mass(probs in vec(0.01..0.6f64, 1..30)) {
        let params = BernoulliParams::from_probs(probs).unwrap();
        for variant in [Approximant::P1, Approximant::P2] {
            let sm = signed_measure_pmf(&params, variant, None).unwrap();
            prop_assert!((sm.total() - 1.0).abs() < 1e-9);
        }
        let p1 = signed_measure_pmf(&params, Approximant::P1, None).unwrap();
        prop_assert!((p1.mean() - params.lambda()).abs() < 1e-8);
    }
}
