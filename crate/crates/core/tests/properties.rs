mod common;

use microgrid_resilience::oracle::{expected_scenario_risk, expected_threat_risks};
use microgrid_resilience::{
    apply_patch, builtin_new_england, parse_scenario, serialize_scenario, Aggregation, Dimension, Distribution,
    InterventionPatch, PatchOp,
};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn any_scenario() -> impl Strategy<Value = microgrid_resilience::Scenario> {
    any::<u64>().prop_map(|seed| common::scenario(&mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialize_then_parse_is_identity(s in any_scenario()) {
        let bytes = serialize_scenario(&s);
        let back = parse_scenario(&bytes).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize_scenario(&back), bytes);
    }

    #[test]
    fn importance_scales_threat_risk(s in any_scenario(), c in 0.0f64..=1.0, pick in any::<prop::sample::Index>()) {
        let t = pick.index(s.threats.len());
        let mut scaled = s.clone();
        scaled.threats[t].importance *= c;
        for dim in Dimension::BOTH {
            for dist in [Distribution::Uniform, Distribution::TriangularLowMode] {
                let before = expected_threat_risks(&s, dim, dist)[t];
                let after = expected_threat_risks(&scaled, dim, dist)[t];
                prop_assert!((after - c * before).abs() <= 1e-12 * before.max(f64::MIN_POSITIVE));
            }
        }
    }

    #[test]
    fn caps_never_raise_expected_risk(s in any_scenario(), max_hi in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::below(&mut rng, s.threats.len() as u64) as usize;
        let threat = &s.threats[t];
        let v = &threat.vulnerabilities[common::below(&mut rng, threat.vulnerabilities.len() as u64) as usize];
        let op = if common::below(&mut rng, 2) == 0 {
            PatchOp::CapVulnerabilityProbability {
                threat: threat.name.clone(),
                vulnerability: v.name.clone(),
                max_hi,
            }
        } else {
            PatchOp::CapImpact {
                threat: threat.name.clone(),
                vulnerability: v.name.clone(),
                dimension: Dimension::Operational,
                max_hi,
            }
        };
        let patch = InterventionPatch { name: "cap".into(), description: String::new(), ops: vec![op] };
        let before = s.clone();
        let once = apply_patch(&s, &patch).unwrap();
        prop_assert_eq!(&s, &before);
        prop_assert_eq!(&apply_patch(&once, &patch).unwrap(), &once);
        for dim in Dimension::BOTH {
            for agg in [Aggregation::ThreatMeanOfMeans, Aggregation::PairMean, Aggregation::PairSum] {
                let d = Distribution::Uniform;
                prop_assert!(expected_scenario_risk(&once, dim, agg, d) <= expected_scenario_risk(&s, dim, agg, d));
            }
        }
    }
}

#[test]
fn builtin_serialization_is_stable() {
    let a = serialize_scenario(&builtin_new_england());
    let b = serialize_scenario(&builtin_new_england());
    assert_eq!(a, b);
}
