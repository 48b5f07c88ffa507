//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::time::{Duration, Instant};

use entcert::audit::{
    example1_state, run_audit, run_audit_with, sweep_example1, sweep_example2, AuditSpec, Axis,
    ParamRange,
};
use entcert::bounds::{baseline_eq28, baseline_eq8, solve_s0, thm5_bound, TheoremId};
use entcert::entropy::{shannon, unified_entropy, UnifiedParams};
use entcert::measures::{concurrence_2q, concurrence_pure, eof_2q, unified_f};
use entcert::qstate::{haar_random_pure, w_state, Bipartition, DensityMatrix, PureState};
use entcert::{Complex64, Execution};

const SEED: u64 = 20240601;

fn h2(p: f64) -> f64 {
    let t = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    t(p) + t(1.0 - p)
}

fn criterion(id: u32, budget: Duration, f: impl FnOnce() -> (bool, String)) -> bool {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    let pass = ok && elapsed <= budget;
    println!(
        "criterion {id} {} ({:.2}s of {}s) {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn example1() -> (bool, String) {
    let psi = example1_state();
    let e1 = shannon(&psi.reduced(&[0]).unwrap().spectrum().unwrap());
    let e12 = eof_2q(&psi.reduced(&[0, 1]).unwrap()).unwrap().value;
    let e13 = eof_2q(&psi.reduced(&[0, 2]).unwrap()).unwrap().value;
    let want1 = 2.0 - 0.75 * 3f64.log2();
    // C_{A1A2} = 1/2 and C_{A1A3} = 1/√2 under the |A1A2A3⟩ ket ordering
    let want12 = h2((2.0 + 3f64.sqrt()) / 4.0);
    let want13 = h2((2.0 + SQRT_2) / 4.0);
    let errs = [(e1 - want1).abs(), (e12 - want12).abs(), (e13 - want13).abs()];
    let rounded = [(e1 - 0.81).abs(), (e13 - 0.60).abs(), (e12 - 0.35).abs()];
    let ok = errs.iter().all(|&e| e < 1e-9) && rounded.iter().all(|&e| e < 5e-3);
    (
        ok,
        format!(
            "E(A1|A2A3) = {e1:.9}, E(A1A2) = {e12:.9}, E(A1A3) = {e13:.9}; max closed-form error {:.1e}; max rounding gap {:.1e}",
            errs.iter().cloned().fold(0.0, f64::max),
            rounded.iter().cloned().fold(0.0, f64::max)
        ),
    )
}

fn remark2_surface() -> (bool, String) {
    let alpha = Axis::range("alpha", 0.0, 1.0, 0.02).unwrap();
    let grid = sweep_example1(alpha.clone(), Axis::range("r", 2.0, 3.0, 0.02).unwrap(), 1.71, Execution::Parallel)
        .unwrap();
    let min = grid.min_diff(|_| true).unwrap();
    let band = sweep_example1(alpha, Axis::range("r", SQRT_2, 1.999, 0.02).unwrap(), 1.71, Execution::Parallel)
        .unwrap();
    let band_min = band.min_diff(|_| true).unwrap();
    (
        min >= -1e-12 && grid.rows.len() == 51 * 51,
        format!(
            "{} points with r in [2, 3], min z = {min:.3e}; reported band r in [√2, 2): min z = {band_min:.3e}",
            grid.rows.len()
        ),
    )
}

fn example2() -> (bool, String) {
    let w = w_state(3).unwrap();
    let e1 = shannon(&w.reduced(&[0]).unwrap().spectrum().unwrap());
    let e12 = eof_2q(&w.reduced(&[0, 1]).unwrap()).unwrap().value;
    let closed = h2((1.0 + 5f64.sqrt() / 3.0) / 2.0);
    let s0 = solve_s0(&[e12, e12]).unwrap();
    let bounds: Vec<_> = [0.9, 1.0, 1.1]
        .iter()
        .map(|&s| thm5_bound(&w, 1.5, s, 1.0).unwrap())
        .collect();
    let closed_rhs_ok = bounds
        .iter()
        .zip([0.9, 1.0, 1.1])
        .all(|(b, s)| (b.rhs - 2f64.powf(1.5 / s) * e12.powf(1.5)).abs() < 1e-12);
    let all_hold = bounds.iter().all(|b| b.hypothesis_ok && b.margin > 0.0);
    let ordered = bounds[2].rhs < bounds[1].rhs && bounds[1].rhs < bounds[0].rhs;
    let ok = (e1 - (3f64.log2() - 2.0 / 3.0)).abs() < 1e-9
        && (e12 - closed).abs() < 1e-6
        && (s0 - 1.15965).abs() < 1e-4
        && closed_rhs_ok
        && all_hold
        && ordered;
    (
        ok,
        format!(
            "E(A1|A2A3) = {e1:.9}, pairwise EoF = {e12:.9} (quoted 0.550043, gap {:.1e}), s0 = {s0:.6}, \
             rhs at beta 1.5 for s = 0.9/1/1.1: {:.5}/{:.5}/{:.5} over lhs {:.5}",
            (e12 - 0.550043).abs(),
            bounds[0].rhs,
            bounds[1].rhs,
            bounds[2].rhs,
            bounds[0].lhs
        ),
    )
}

fn oracle_equivalence() -> (bool, String) {
    let mut grid = Vec::new();
    for q in [1.2, 1.6, 2.0, 2.5, 3.0] {
        for s in [0.2, 0.5, 0.8, 1.0] {
            if q * s <= 3.0 {
                grid.push(UnifiedParams::new(q, s).unwrap());
            }
        }
    }
    let cut = Bipartition::split_at(1, 2).unwrap();
    let mut worst = 0.0f64;
    for seed in 0..10_000 {
        let psi = haar_random_pure(2, SEED + seed).unwrap();
        let rho = psi.reduced(&[0]).unwrap();
        let c = concurrence_pure(&psi, &cut).unwrap().value;
        for &p in &grid {
            let err = (unified_entropy(&rho, p).unwrap() - unified_f(c * c, p).unwrap()).abs();
            worst = worst.max(err);
        }
    }
    (worst < 1e-10, format!("10000 states x {} (q, s) points, max error {worst:.2e}", grid.len()))
}

fn lemma_fuzz() -> (bool, String) {
    let audit = |theorem, x: Option<[f64; 2]>| {
        let mut spec = AuditSpec::new(theorem, 0, 100_000, SEED);
        spec.tolerance = 1e-12;
        if let Some(r) = x {
            spec = spec.with_range("x", ParamRange::Range(r));
        }
        run_audit(&spec).unwrap()
    };
    let runs = [
        ("lemma 1 low", audit(TheoremId::Lemma1, None)),
        ("lemma 1 high", audit(TheoremId::Lemma1, Some([1.0, 4.0]))),
        ("lemma 2 low", audit(TheoremId::Lemma2, None)),
        ("lemma 2 high under peeling", audit(TheoremId::Lemma2, Some([1.0, 4.0]))),
    ];
    let ok = runs.iter().all(|(_, r)| r.violations == 0 && r.trials_skipped == 0);
    let detail = runs
        .iter()
        .map(|(name, r)| {
            format!(
                "{name}: {} violations in {} trials (min margin {:.3e}, {} among peeling-satisfying)",
                r.violations,
                r.trials_hypothesis_ok,
                r.min_margin.unwrap_or(f64::NAN),
                r.violations_under_proof_conditions
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    (ok, detail)
}

fn theorem_audits() -> (bool, String) {
    use TheoremId::*;
    let runs = [
        (Thm1, 3),
        (Thm2, 3),
        (Thm3, 3),
        (Thm4, 3),
        (Thm5, 3),
        (Thm6, 3),
        (Thm1, 4),
        (Thm3, 4),
        (Thm4, 4),
        (Thm6, 4),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (thm, n) in runs {
        let r = run_audit(&AuditSpec::new(thm, n, 10_000, SEED)).unwrap();
        ok &= r.violations == 0;
        let mut part = format!("{thm}/{n}q {} of {} applicable", r.violations, r.trials_hypothesis_ok);
        if r.violations > 0 {
            let w = r.witness.as_ref().unwrap();
            part += &format!(
                " (worst margin {:.3e} at seed {}; {} with proof conditions met)",
                w.report.margin, w.seed, r.violations_under_proof_conditions
            );
        }
        parts.push(part);
    }
    (ok, format!("violations: {}", parts.join(", ")))
}

fn baselines() -> (bool, String) {
    let p = UnifiedParams::new(2.0, 1.0).unwrap();
    let eq8 = baseline_eq8(&w_state(3).unwrap(), 1.0, p).unwrap();
    let eq28 = baseline_eq28(&example1_state()).unwrap();
    let ok = eq8.margin.abs() < 1e-10
        && eq28.margin.abs() < 1e-10
        && (eq28.lhs - 0.75).abs() < 1e-10;
    (
        ok,
        format!(
            "W3 margin {:.1e}; example 1: {:.12} vs {:.12} (margin {:.1e})",
            eq8.margin, eq28.lhs, eq28.rhs, eq28.margin
        ),
    )
}

fn wootters_kernel() -> (bool, String) {
    let h = FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let singlet = PureState::new(vec![2, 2], vec![z, h.into(), (-h).into(), z]).unwrap();
    let noise = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
    let mut werner = 0.0f64;
    for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let rho = singlet.to_density().mix(p, &noise).unwrap();
        let c = concurrence_2q(&rho).unwrap().value;
        werner = werner.max((c - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs());
    }
    let cut = Bipartition::split_at(1, 2).unwrap();
    let mut rank1 = 0.0f64;
    for seed in 0..10_000 {
        let psi = haar_random_pure(2, SEED + seed).unwrap();
        let a = concurrence_2q(&psi.to_density()).unwrap().value;
        let b = concurrence_pure(&psi, &cut).unwrap().value;
        rank1 = rank1.max((a - b).abs());
    }
    (
        werner < 1e-10 && rank1 < 1e-10,
        format!("Werner max error {werner:.2e}; rank-1 max gap over 10000 states {rank1:.2e}"),
    )
}

fn determinism() -> (bool, String) {
    let spec = AuditSpec::new(TheoremId::Thm3, 4, 2_000, SEED);
    let runs: Vec<String> = [Execution::Parallel, Execution::Parallel, Execution::Sequential]
        .into_iter()
        .map(|e| serde_json::to_string(&run_audit_with(&spec, e).unwrap()).unwrap())
        .collect();
    let audit_same = runs.windows(2).all(|w| w[0] == w[1]);
    let sweep = |e| {
        let a = sweep_example1(
            Axis::range("alpha", 0.0, 1.0, 0.02).unwrap(),
            Axis::range("r", SQRT_2, 3.0, 0.02).unwrap(),
            1.71,
            e,
        )
        .unwrap()
        .to_csv();
        let b = sweep_example2(
            Axis::range("beta", 1.0, 3.0, 0.05).unwrap(),
            Axis::list("s", vec![0.9, 1.0, 1.1]).unwrap(),
            e,
        )
        .unwrap()
        .to_csv();
        a + &b
    };
    let sweeps: Vec<String> = [Execution::Parallel, Execution::Parallel, Execution::Sequential]
        .into_iter()
        .map(sweep)
        .collect();
    let sweep_same = sweeps.windows(2).all(|w| w[0] == w[1]);
    (
        audit_same && sweep_same,
        format!(
            "audit reports identical: {audit_same} ({} bytes); sweep CSVs identical: {sweep_same} ({} bytes)",
            runs[0].len(),
            sweeps[0].len()
        ),
    )
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, secs(1), example1),
        criterion(2, secs(5), remark2_surface),
        criterion(3, secs(1), example2),
        criterion(4, secs(10), oracle_equivalence),
        criterion(5, secs(5), lemma_fuzz),
        criterion(6, secs(600), theorem_audits),
        criterion(7, secs(1), baselines),
        criterion(8, secs(10), wootters_kernel),
        criterion(9, secs(60), determinism),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
