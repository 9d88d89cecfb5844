mod common;

use sumlab_core::synthetic::{synthetic_table, SyntheticKind};
use sumlab_core::verdict::{ConditionName, MixingSource};
use sumlab_core::{
    check_sufficient_conditions, sieve_table, sieve_table_with, ArithmeticFunctionSpec, FunctionId,
    SieveConfig, Thresholds, Verdict,
};

fn table(id: FunctionId, n: usize) -> sumlab_core::FunctionTable {
    sieve_table(&ArithmeticFunctionSpec::builtin(id).unwrap(), 1, n).unwrap()
}

#[test]
fn sieve_matches_independent_counts_at_offsets() {
    let counts = common::omega_counts(300_000);
    let expect = |id: &FunctionId, k: usize| -> i8 {
        let (distinct, total) = counts[k];
        let squarefree = distinct == total;
        match id {
            FunctionId::Mobius if !squarefree => 0,
            FunctionId::Mobius | FunctionId::Liouville => if total % 2 == 0 { 1 } else { -1 },
            FunctionId::Squarefree => i8::from(squarefree),
            _ => i8::from(total == 1),
        }
    };
    for id in FunctionId::BUILTINS {
        let spec = ArithmeticFunctionSpec::builtin(id.clone()).unwrap();
        for (start, len, block) in [(1u64, 300_000usize, 1 << 16), (123_457, 99_999, 1000), (299_000, 1000, 7)] {
            let config = SieveConfig { block_size: block, parallel: true };
            let t = sieve_table_with(&spec, start, len, config).unwrap();
            for (k, v) in t.iter() {
                assert_eq!(v, expect(&id, k as usize), "{id} at {k}");
            }
        }
    }
}

#[test]
fn verdict_is_reproducible() {
    let t = table(FunctionId::Liouville, 50_000);
    let thresholds = Thresholds::default();
    let a = serde_json::to_string(&check_sufficient_conditions(&t, &thresholds).unwrap()).unwrap();
    let b = serde_json::to_string(&check_sufficient_conditions(&t, &thresholds).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn raising_zero_threshold_never_restores_mean_condition() {
    let t = table(FunctionId::Squarefree, 20_000);
    let mut previous = true;
    for eps in [1e-4, 1e-2, 0.3, 0.6, 0.61, 0.7, 1.0] {
        let thresholds = Thresholds { zero_threshold: eps, ..Thresholds::default() };
        let flag = check_sufficient_conditions(&t, &thresholds).unwrap().conditions.mean_limit_nonzero.flag;
        assert!(previous || !flag, "flag came back at ε = {eps}");
        previous = flag;
    }
    assert!(!previous);
}

#[test]
fn iid_signs_fail_the_mean_condition() {
    let t = synthetic_table(SyntheticKind::IidSign, 100_000, 3).unwrap();
    let report = check_sufficient_conditions(&t, &Thresholds::default()).unwrap();
    assert_eq!(report.mixing.source, "empirical_profile");
    assert!(report.verdict.conditions().contains(&ConditionName::MeanLimitNonzero));
    // The profile is a flat sampling-noise floor of order W^(-1/2); its
    // log-log slope carries no decay information.
    assert!(report.mixing.empirical.max_alpha() < 0.02);
    assert!(matches!(report.verdict, Verdict::FailsConditions(_)));
}

#[test]
fn constant_function_is_degenerate() {
    let t = synthetic_table(SyntheticKind::Constant, 20_000, 0).unwrap();
    let report = check_sufficient_conditions(&t, &Thresholds::default()).unwrap();
    assert!(!report.conditions.variance_nonzero.flag);
    assert!(report.normality.is_none() && report.normality_note.is_some());
    assert!(report.verdict.conditions().contains(&ConditionName::VarianceNonzero));
}

#[test]
fn empirical_source_changes_only_the_evidence() {
    let t = table(FunctionId::Squarefree, 50_000);
    let thresholds = Thresholds { mixing_source: MixingSource::Empirical, ..Thresholds::default() };
    let report = check_sufficient_conditions(&t, &thresholds).unwrap();
    assert_eq!(report.mixing.source, "empirical_profile");
    assert!(report.mixing.model.is_none());
    assert!(report.conditions.mean_limit_nonzero.flag);
}
