//! Seeded audits of the bounds over Haar-random ensembles, and the parameter
//! sweeps behind the worked examples.
//!
//! Trial `i` draws its state from `haar_random_pure(n, base_seed + i)` and its
//! parameters from stream 1 of the same seed, so results do not depend on the
//! schedule. Parameters that a bound rejects are redrawn up to
//! [`MAX_RESAMPLES`] times before the trial is marked skipped.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundReport, Regime, TheoremId};
use crate::entropy::{shannon, UnifiedParams};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::qstate::{haar_random_pure, schmidt_state, seeded_rng, w_state, Bipartition, PureState};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const MAX_RESAMPLES: usize = 100;
const MAX_GRID_POINTS: usize = 10_000_000;

/// A parameter held fixed or drawn uniformly from `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamRange {
    Fixed(f64),
    Range([f64; 2]),
}

impl ParamRange {
    fn bounds(self) -> (f64, f64) {
        match self {
            ParamRange::Fixed(v) => (v, v),
            ParamRange::Range([lo, hi]) => (lo, hi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSpec {
    pub theorem: TheoremId,
    pub n_qubits: usize,
    pub trials: usize,
    pub base_seed: u64,
    /// Overrides of the per-theorem defaults from [`default_ranges`].
    #[serde(default)]
    pub parameter_ranges: BTreeMap<String, ParamRange>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl AuditSpec {
    pub fn new(theorem: TheoremId, n_qubits: usize, trials: usize, base_seed: u64) -> Self {
        Self {
            theorem,
            n_qubits,
            trials,
            base_seed,
            parameter_ranges: BTreeMap::new(),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_range(mut self, name: &str, range: ParamRange) -> Self {
        self.parameter_ranges.insert(name.to_string(), range);
        self
    }

    /// Defaults merged with the overrides, in sampling order.
    fn resolved_ranges(&self) -> Result<Vec<(&'static str, ParamRange, bool)>> {
        if self.trials == 0 {
            return Err(Error::BadSpec("trials must be >= 1".into()));
        }
        if !(self.tolerance >= 0.0) || !self.tolerance.is_finite() {
            return Err(Error::BadSpec(format!("tolerance {} must be finite and >= 0", self.tolerance)));
        }
        let n = self.n_qubits;
        let (min_n, max_n) = qubit_limits(self.theorem);
        if !(min_n..=max_n).contains(&n) {
            return Err(Error::BadSpec(format!(
                "{} needs {min_n}..={max_n} qubits, got {n}",
                self.theorem
            )));
        }
        let mut ranges = default_ranges(self.theorem, n);
        for (name, range) in &self.parameter_ranges {
            let slot = ranges
                .iter_mut()
                .find(|(k, _, _)| k == name)
                .ok_or_else(|| Error::BadSpec(format!("{} has no parameter '{name}'", self.theorem)))?;
            let (lo, hi) = range.bounds();
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::BadSpec(format!("range for '{name}' must satisfy lo <= hi, both finite")));
            }
            if slot.2 && (lo.fract() != 0.0 || hi.fract() != 0.0) {
                return Err(Error::BadSpec(format!("'{name}' takes integer values")));
            }
            slot.1 = *range;
        }
        Ok(ranges)
    }
}

fn qubit_limits(theorem: TheoremId) -> (usize, usize) {
    use TheoremId::*;
    match theorem {
        Lemma1 | Lemma2 | Lemma3 => (0, usize::MAX),
        Eq8 | Eq14 | Eq21 | Thm1 => (2, 6),
        Eq28 | Thm2 | Thm5 => (3, 3),
        Thm3 | Thm4 | Eq35 | Thm6 => (3, 6),
    }
}

/// Sampling order, default range and integer flag of each parameter.
pub fn default_ranges(theorem: TheoremId, n_qubits: usize) -> Vec<(&'static str, ParamRange, bool)> {
    use ParamRange::{Fixed, Range};
    use TheoremId::*;
    let n = n_qubits as f64;
    let f = |name, lo: f64, hi: f64| (name, Range([lo, hi]), false);
    let int = |name, lo: f64, hi: f64| (name, if lo == hi { Fixed(lo) } else { Range([lo, hi]) }, true);
    match theorem {
        Lemma1 => vec![f("k", 1.0, 10.0), f("t_over_k", 1.0, 10.0), f("x", 0.0, 0.5)],
        Lemma2 => vec![int("len", 1.0, 6.0), f("x", 0.0, 0.5), f("k", 1.0, 5.0)],
        Lemma3 => vec![
            f("x", 0.0, 1.0),
            f("y", 0.0, 1.0),
            f("k", 1.0, 3.0),
            f("r", SQRT_2, 3.0),
            f("alpha", 0.0, 1.5),
        ],
        Eq8 => vec![f("alpha", 1.0, 3.0), f("q", 2.0, 3.0), f("s_entropy", 0.0, 1.0)],
        Eq14 => vec![
            int("m", 1.0, n - 1.0),
            f("alpha", 1.0, 3.0),
            f("q", 2.0, 3.0),
            f("s_entropy", 0.0, 1.0),
        ],
        Eq21 => vec![f("alpha", 2.0, 4.0)],
        Eq28 => vec![],
        Thm1 => vec![
            int("m", 1.0, n - 1.0),
            f("r", 1.0, 3.0),
            f("alpha", 0.0, 1.5),
            f("k", 1.0, 3.0),
            f("q", 2.0, 3.0),
            f("s_entropy", 0.0, 1.0),
        ],
        Thm2 | Thm3 => vec![f("r", SQRT_2, 3.0), f("alpha", 0.0, 1.5), f("k", 1.0, 3.0)],
        Thm4 => vec![
            int("m", 2.0, n - 1.0),
            f("beta", 1.0, 3.0),
            f("k", 1.0, 3.0),
            f("q", 1.1, 3.0),
            f("s_entropy", 0.0, 1.0),
        ],
        Eq35 => vec![f("s", 0.1, SQRT_2)],
        Thm5 | Thm6 => vec![f("s", 0.1, SQRT_2), f("beta", 1.0, 3.0), f("k", 1.0, 3.0)],
    }
}

fn draw(rng: &mut impl Rng, range: ParamRange, integer: bool) -> f64 {
    let (lo, hi) = range.bounds();
    if lo == hi {
        return lo;
    }
    let u: f64 = rng.random();
    if integer {
        (lo + (u * (hi - lo + 1.0)).floor()).min(hi)
    } else {
        lo + u * (hi - lo)
    }
}

/// Evaluates one bound on a sampled state and parameter set.
pub fn evaluate(
    theorem: TheoremId,
    psi: Option<&PureState>,
    params: &BTreeMap<String, f64>,
    extra: &[f64],
) -> Result<BoundReport> {
    use TheoremId::*;
    let p = |name: &str| params[name];
    let state = || psi.ok_or_else(|| Error::BadSpec(format!("{theorem} needs a state")));
    let unified = || UnifiedParams::new(p("q"), p("s_entropy"));
    match theorem {
        Lemma1 => {
            let x = p("x");
            let regime = if x <= 0.5 { Regime::Low } else { Regime::High };
            bounds::lemma1_check(p("k") * p("t_over_k"), p("k"), x, regime)
        }
        Lemma2 => {
            let x = p("x");
            let regime = if x <= 0.5 { Regime::Low } else { Regime::High };
            bounds::lemma2_check(extra, x, p("k"), regime)
        }
        Lemma3 => bounds::lemma3_check(p("x"), p("y"), p("k"), p("alpha"), p("r")),
        Eq8 => bounds::baseline_eq8(state()?, p("alpha"), unified()?),
        Eq14 => {
            let psi = state()?;
            let part = Bipartition::split_at(p("m") as usize, psi.num_subsystems())?;
            bounds::baseline_eq14(psi, &part, p("alpha"), unified()?)
        }
        Eq21 => bounds::baseline_eq21(state()?, p("alpha")),
        Eq28 => bounds::baseline_eq28(state()?),
        Thm1 => bounds::thm1_bound(state()?, p("m") as usize, p("alpha"), p("r"), p("k"), unified()?),
        Thm2 => bounds::thm2_bound(state()?, p("alpha"), p("r"), p("k")),
        Thm3 => bounds::thm3_bound(state()?, p("alpha"), p("r"), p("k")),
        Thm4 => bounds::thm4_bound(state()?, p("m") as usize, p("beta"), p("k"), unified()?),
        Eq35 => bounds::eq35_check(state()?, p("s")),
        Thm5 => bounds::thm5_bound(state()?, p("beta"), p("s"), p("k")),
        Thm6 => bounds::thm6_bound(state()?, p("beta"), p("s"), p("k")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub seed: u64,
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub theorem: TheoremId,
    pub n_qubits: usize,
    pub base_seed: u64,
    pub tolerance: f64,
    pub trials_total: usize,
    pub trials_hypothesis_ok: usize,
    /// Trials whose parameters could not be brought into the envelope.
    pub trials_skipped: usize,
    /// Hypothesis-ok trials with `margin < −tolerance`.
    pub violations: usize,
    /// Hypothesis-ok trials where an unstated proof condition fails.
    pub proof_condition_failures: usize,
    /// Violations among trials whose proof conditions all hold.
    pub violations_under_proof_conditions: usize,
    pub min_margin: Option<f64>,
    /// The hypothesis-ok trial with the smallest margin.
    pub witness: Option<Witness>,
}

enum Trial {
    Skipped,
    Failed,
    Evaluated(BoundReport),
}

fn run_trial(spec: &AuditSpec, ranges: &[(&'static str, ParamRange, bool)], seed: u64) -> Result<Trial> {
    let scalar = matches!(spec.theorem, TheoremId::Lemma1 | TheoremId::Lemma2 | TheoremId::Lemma3);
    let psi = if scalar { None } else { Some(haar_random_pure(spec.n_qubits, seed)?) };
    let mut rng = seeded_rng(seed, 1);
    for _ in 0..MAX_RESAMPLES {
        let params: BTreeMap<String, f64> = ranges
            .iter()
            .map(|&(name, range, integer)| (name.to_string(), draw(&mut rng, range, integer)))
            .collect();
        let mut extra = Vec::new();
        if spec.theorem == TheoremId::Lemma2 {
            extra = (0..params["len"] as usize).map(|_| rng.random::<f64>()).collect();
            extra.sort_by(|a, b| b.total_cmp(a));
        }
        match evaluate(spec.theorem, psi.as_ref(), &params, &extra) {
            Ok(report) => return Ok(Trial::Evaluated(report)),
            Err(e) if e.is_state_precondition() => return Ok(Trial::Failed),
            Err(Error::Domain(_) | Error::BadPartition(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(Trial::Skipped)
}

pub fn run_audit(spec: &AuditSpec) -> Result<AuditReport> {
    run_audit_with(spec, Execution::default())
}

pub fn run_audit_with(spec: &AuditSpec, exec: Execution) -> Result<AuditReport> {
    let ranges = spec.resolved_ranges()?;
    let outcomes = map_indexed(spec.trials, exec, |i| {
        let seed = spec.base_seed.wrapping_add(i as u64);
        run_trial(spec, &ranges, seed).map(|t| (seed, t))
    });

    let mut report = AuditReport {
        theorem: spec.theorem,
        n_qubits: spec.n_qubits,
        base_seed: spec.base_seed,
        tolerance: spec.tolerance,
        trials_total: spec.trials,
        trials_hypothesis_ok: 0,
        trials_skipped: 0,
        violations: 0,
        proof_condition_failures: 0,
        violations_under_proof_conditions: 0,
        min_margin: None,
        witness: None,
    };
    for outcome in outcomes {
        let (seed, trial) = outcome?;
        let r = match trial {
            Trial::Skipped => {
                report.trials_skipped += 1;
                continue;
            }
            Trial::Failed => continue,
            Trial::Evaluated(r) if !r.hypothesis_ok => continue,
            Trial::Evaluated(r) => r,
        };
        report.trials_hypothesis_ok += 1;
        let conditions_ok = r.proof_conditions_ok();
        if !conditions_ok {
            report.proof_condition_failures += 1;
        }
        if r.margin < -spec.tolerance {
            report.violations += 1;
            if conditions_ok {
                report.violations_under_proof_conditions += 1;
            }
        }
        // strict comparison keeps the earliest trial among ties
        if report.min_margin.is_none_or(|m| r.margin < m) {
            report.min_margin = Some(r.margin);
            report.witness = Some(Witness { seed, report: r });
        }
    }
    Ok(report)
}

/// A named grid axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// `lo, lo + step, …` up to `hi`, with `hi` included when it lies on the grid
    /// within round-off.
    pub fn range(name: &str, lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 || hi < lo {
            return Err(Error::BadGrid(format!("{name} = {lo}:{hi}:{step}")));
        }
        let count = ((hi - lo) / step + 1e-9).floor() + 1.0;
        if count > MAX_GRID_POINTS as f64 {
            return Err(Error::BadGrid(format!("{name} has {count} points")));
        }
        let values = (0..count as usize).map(|i| lo + i as f64 * step).collect();
        Ok(Self { name: name.into(), values })
    }

    pub fn list(name: &str, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadGrid(format!("{name} needs finite values")));
        }
        Ok(Self { name: name.into(), values })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis1: f64,
    pub axis2: f64,
    pub lhs: f64,
    pub rhs_new: f64,
    pub rhs_prior: f64,
    pub diff: f64,
    /// False when the row lies outside the bound's parameter envelope.
    pub in_envelope: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub axes: [Axis; 2],
    pub rows: Vec<SweepRow>,
}

pub const CSV_HEADER: &str = "axis1,axis2,lhs,rhs_new,rhs_prior,diff";

impl SweepGrid {
    fn build(axes: [Axis; 2], exec: Execution, row: impl Fn(f64, f64) -> Result<SweepRow> + Send + Sync) -> Result<Self> {
        let cols = axes[1].values.len();
        let total = axes[0].values.len() * cols;
        if total > MAX_GRID_POINTS {
            return Err(Error::BadGrid(format!("{total} grid points")));
        }
        let rows = map_indexed(total, exec, |i| row(axes[0].values[i / cols], axes[1].values[i % cols]))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { axes, rows })
    }

    /// Smallest `diff` over rows that are in the envelope and satisfy `keep`.
    pub fn min_diff(&self, keep: impl Fn(&SweepRow) -> bool) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.in_envelope && keep(r))
            .map(|r| r.diff)
            .min_by(f64::total_cmp)
    }

    /// CSV with shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.axis1, r.axis2, r.lhs, r.rhs_new, r.rhs_prior, r.diff
            );
        }
        out
    }
}

/// The three-qubit state of the first worked example.
pub fn example1_state() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    schmidt_state([0.5, 0.0, h, 0.5, 0.0], 0.0).expect("normalized by construction")
}

/// Over `α × r`: `lhs = E^α(ρ_{A_1|A_2A_3})`, `rhs_new` the l-factor bound,
/// `rhs_prior` the `((1+k)^{α/r} − 1)/k^{α/r}` bound, `diff = rhs_new − rhs_prior`.
/// Rows with `α > r/2` or `r < √2` are flagged out of envelope.
pub fn sweep_example1(alpha: Axis, r: Axis, k: f64, exec: Execution) -> Result<SweepGrid> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::BadGrid(format!("k = {k} must be >= 1")));
    }
    if alpha.values.iter().any(|&a| a < 0.0) || r.values.iter().any(|&v| v <= 0.0) {
        return Err(Error::BadGrid("alpha must be >= 0 and r > 0".into()));
    }
    let psi = example1_state();
    let pairs = bounds::pairs_with_first(&psi)?;
    let (ex, ey) = (pairs.eof[0], pairs.eof[1]);
    let e = shannon(&psi.reduced(&[0])?.spectrum()?);
    SweepGrid::build([alpha, r], exec, |a, rv| {
        let x = a / rv;
        let l = bounds::l_factor(x, k)?.value;
        let new = 0.5f64.powf(x) * ex.powf(a) + l * ey.powf(a);
        let prior = ex.powf(a) + ((1.0 + k).powf(x) - 1.0) / k.powf(x) * ey.powf(a);
        Ok(SweepRow {
            axis1: a,
            axis2: rv,
            lhs: e.powf(a),
            rhs_new: new,
            rhs_prior: prior,
            diff: new - prior,
            in_envelope: rv >= SQRT_2 && a <= rv / 2.0,
        })
    })
}

/// Over `β × s` on the W state: `lhs = E^β(ρ_{A_1|A_2A_3})`, `rhs_new` the
/// l-factor bound, `rhs_prior = (Σ_j E^s_{A_1A_j})^{β/s}` (the bound before the
/// l-factor step), `diff = rhs_new − lhs`. Rows with `β < max(1, s)` or
/// `s > s0` are flagged out of envelope.
pub fn sweep_example2(beta: Axis, s: Axis, exec: Execution) -> Result<SweepGrid> {
    if beta.values.iter().any(|&b| b <= 0.0) || s.values.iter().any(|&v| v <= 0.0) {
        return Err(Error::BadGrid("beta and s must be > 0".into()));
    }
    let psi = w_state(3)?;
    let pairs = bounds::pairs_with_first(&psi)?;
    let (e12, e13) = (pairs.eof[0], pairs.eof[1]);
    let s0 = bounds::solve_s0(&[e12, e13])?;
    let e = shannon(&psi.reduced(&[0])?.spectrum()?);
    SweepGrid::build([beta, s], exec, |b, sv| {
        let x = b / sv;
        let l = bounds::l_factor(x, 1.0)?.value;
        let (small, large) = if e13 >= e12 { (e12, e13) } else { (e13, e12) };
        let new = 0.5f64.powf(x) * small.powf(b) + l * large.powf(b);
        let prior = (e12.powf(sv) + e13.powf(sv)).powf(x);
        let lhs = e.powf(b);
        Ok(SweepRow {
            axis1: b,
            axis2: sv,
            lhs,
            rhs_new: new,
            rhs_prior: prior,
            diff: new - lhs,
            in_envelope: b >= sv.max(1.0) && sv <= s0,
        })
    })
}
