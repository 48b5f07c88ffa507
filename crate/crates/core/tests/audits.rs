use entcert::audit::{evaluate, run_audit, sweep_example1, AuditSpec, Axis, ParamRange};
use entcert::bounds::TheoremId;
use entcert::Execution;

#[test]
fn thm2_audit_is_clean() {
    let r = run_audit(&AuditSpec::new(TheoremId::Thm2, 3, 1000, 1)).unwrap();
    assert_eq!(r.trials_total, 1000);
    assert!(r.trials_hypothesis_ok > 500);
    assert_eq!(r.violations, 0, "{r:?}");
    assert!(r.violations <= r.trials_hypothesis_ok && r.trials_hypothesis_ok <= r.trials_total);
}

#[test]
fn thm4_audit_finds_violations() {
    let r = run_audit(&AuditSpec::new(TheoremId::Thm4, 3, 1000, 1)).unwrap();
    assert!(r.violations > 0, "{r:?}");
    assert_eq!(r.violations, r.violations_under_proof_conditions);
    let w = r.witness.unwrap();
    assert!(w.report.margin < -1e-9);
    assert!(w.seed >= 1 && w.seed < 1001);
}

#[test]
fn witness_can_be_replayed() {
    let r = run_audit(&AuditSpec::new(TheoremId::Thm4, 3, 200, 9)).unwrap();
    let w = r.witness.unwrap();
    let psi = entcert::qstate::haar_random_pure(3, w.seed).unwrap();
    let again = evaluate(TheoremId::Thm4, Some(&psi), &w.report.params, &[]).unwrap();
    assert_eq!(again, w.report);
}

#[test]
fn thm1_violations_all_break_peeling() {
    let r = run_audit(&AuditSpec::new(TheoremId::Thm1, 3, 3000, 20240601)).unwrap();
    assert_eq!(r.violations_under_proof_conditions, 0, "{r:?}");
}

#[test]
fn polygamy_audits_are_clean() {
    for (thm, n) in [(TheoremId::Thm5, 3), (TheoremId::Thm6, 4), (TheoremId::Eq35, 4), (TheoremId::Thm3, 4)] {
        let r = run_audit(&AuditSpec::new(thm, n, 1000, 3)).unwrap();
        assert_eq!(r.violations, 0, "{thm}: {r:?}");
        assert!(r.trials_hypothesis_ok > 0, "{thm}");
    }
}

#[test]
fn baseline_audits_are_clean() {
    for (thm, n) in [(TheoremId::Eq8, 4), (TheoremId::Eq14, 5), (TheoremId::Eq21, 4), (TheoremId::Eq28, 3)] {
        let r = run_audit(&AuditSpec::new(thm, n, 500, 2)).unwrap();
        assert_eq!(r.violations, 0, "{thm}: {r:?}");
        assert_eq!(r.trials_hypothesis_ok, 500);
    }
}

#[test]
fn fixed_parameters_are_respected() {
    let spec = AuditSpec::new(TheoremId::Thm2, 3, 20, 4)
        .with_range("k", ParamRange::Fixed(1.0))
        .with_range("r", ParamRange::Fixed(2.0));
    let r = run_audit(&spec).unwrap();
    let w = r.witness.unwrap();
    assert_eq!(w.report.params["k"], 1.0);
    assert_eq!(w.report.params["r"], 2.0);
    assert!(w.report.params["alpha"] <= 1.0);
}

#[test]
fn spec_round_trips_through_json() {
    let spec = AuditSpec::new(TheoremId::Thm1, 4, 10, 7).with_range("alpha", ParamRange::Range([0.1, 0.4]));
    let text = serde_json::to_string(&spec).unwrap();
    assert_eq!(serde_json::from_str::<AuditSpec>(&text).unwrap(), spec);
    let minimal: AuditSpec = serde_json::from_str(r#"{"theorem":"thm2","n_qubits":3,"trials":5,"base_seed":1}"#).unwrap();
    assert_eq!(minimal.tolerance, 1e-9);
}

#[test]
fn example1_sweep_is_nonnegative_for_r_at_least_two() {
    let g = sweep_example1(
        Axis::range("alpha", 0.0, 1.0, 0.02).unwrap(),
        Axis::range("r", std::f64::consts::SQRT_2, 3.0, 0.02).unwrap(),
        1.71,
        Execution::Sequential,
    )
    .unwrap();
    assert_eq!(g.rows.len(), g.axes[0].values.len() * g.axes[1].values.len());
    assert!(g.min_diff(|r| r.axis2 >= 2.0).unwrap() >= -1e-12);
    assert!(g.rows.iter().any(|r| !r.in_envelope));
}
