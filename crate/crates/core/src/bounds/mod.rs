//! Inequality engine: the l-factor, the scalar lemmas, monogamy and polygamy
//! bounds, the prior-work baselines and the tightness comparisons.
//!
//! Every evaluator returns a [`BoundReport`]. Hypotheses that depend on the
//! state are data (`hypothesis_ok`), never errors; parameter choices outside a
//! bound's envelope are errors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::measures;
use crate::qstate::PureState;

mod baselines;
mod lemmas;
mod monogamy;
mod polygamy;

pub use baselines::{baseline_eq14, baseline_eq21, baseline_eq28, baseline_eq8};
pub use lemmas::{lemma1_check, lemma2_check, lemma2_peeled_sum, lemma2_weighted_sum, lemma3_check, Regime};
pub use monogamy::{remark2_compare, remark3_chain, thm1_bound, thm2_bound, thm3_bound, Remark2, Remark3};
pub use polygamy::{eq35_check, solve_s0, thm4_bound, thm5_bound, thm6_bound};

/// Tolerance for inequalities between entanglement measures.
pub const MEASURE_TOL: f64 = 1e-9;
/// Tolerance for identities between plain scalars.
pub const SCALAR_TOL: f64 = 1e-12;
/// Pairwise concurrences at or below this count as zero.
pub const ZERO_CONCURRENCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    Lemma1,
    Lemma2,
    Lemma3,
    Eq8,
    Eq14,
    Eq21,
    Eq28,
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Eq35,
    Thm5,
    Thm6,
}

impl TheoremId {
    pub const ALL: [TheoremId; 14] = [
        TheoremId::Lemma1,
        TheoremId::Lemma2,
        TheoremId::Lemma3,
        TheoremId::Eq8,
        TheoremId::Eq14,
        TheoremId::Eq21,
        TheoremId::Eq28,
        TheoremId::Thm1,
        TheoremId::Thm2,
        TheoremId::Thm3,
        TheoremId::Thm4,
        TheoremId::Eq35,
        TheoremId::Thm5,
        TheoremId::Thm6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Lemma1 => "lemma1",
            TheoremId::Lemma2 => "lemma2",
            TheoremId::Lemma3 => "lemma3",
            TheoremId::Eq8 => "eq8",
            TheoremId::Eq14 => "eq14",
            TheoremId::Eq21 => "eq21",
            TheoremId::Eq28 => "eq28",
            TheoremId::Thm1 => "thm1",
            TheoremId::Thm2 => "thm2",
            TheoremId::Thm3 => "thm3",
            TheoremId::Thm4 => "thm4",
            TheoremId::Eq35 => "eq35",
            TheoremId::Thm5 => "thm5",
            TheoremId::Thm6 => "thm6",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::BadSpec(format!("unknown theorem '{s}'")))
    }
}

/// Which side is asserted to be larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `lhs ≥ rhs`; margin `lhs − rhs`.
    LowerBound,
    /// `lhs ≤ rhs`; margin `rhs − lhs`.
    UpperBound,
}

/// A named condition with the quantities it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub holds: bool,
    pub values: BTreeMap<String, f64>,
}

impl Condition {
    pub fn new(holds: bool, values: &[(&str, f64)]) -> Self {
        Self {
            holds,
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// One inequality evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub case_label: String,
    pub direction: Direction,
    pub hypothesis_ok: bool,
    pub hypothesis_details: BTreeMap<String, Condition>,
    /// Conditions the published argument relies on without stating them.
    /// They never affect `hypothesis_ok`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub proof_conditions: BTreeMap<String, Condition>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub params: BTreeMap<String, f64>,
    /// Labels of the summed terms in the order their weights were assigned.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ordering: Vec<String>,
}

impl BoundReport {
    pub(crate) fn new(theorem: TheoremId, direction: Direction, lhs: f64, rhs: f64) -> Self {
        let margin = match direction {
            Direction::LowerBound => lhs - rhs,
            Direction::UpperBound => rhs - lhs,
        };
        Self {
            theorem,
            case_label: String::new(),
            direction,
            hypothesis_ok: true,
            hypothesis_details: BTreeMap::new(),
            proof_conditions: BTreeMap::new(),
            lhs,
            rhs,
            margin,
            params: BTreeMap::new(),
            ordering: Vec::new(),
        }
    }

    pub(crate) fn case(mut self, label: impl Into<String>) -> Self {
        self.case_label = label.into();
        self
    }

    pub(crate) fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    /// Records a hypothesis; `hypothesis_ok` is the conjunction of all of them.
    pub(crate) fn hypothesis(mut self, name: &str, cond: Condition) -> Self {
        self.hypothesis_ok &= cond.holds;
        self.hypothesis_details.insert(name.to_string(), cond);
        self
    }

    pub(crate) fn proof_condition(mut self, name: &str, cond: Condition) -> Self {
        self.proof_conditions.insert(name.to_string(), cond);
        self
    }

    pub(crate) fn ordered(mut self, labels: Vec<String>) -> Self {
        self.ordering = labels;
        self
    }

    /// Hypotheses hold and the inequality holds within `tol`.
    pub fn certifies(&self, tol: f64) -> bool {
        self.hypothesis_ok && self.margin >= -tol
    }

    /// True when every recorded proof condition holds.
    pub fn proof_conditions_ok(&self) -> bool {
        self.proof_conditions.values().all(|c| c.holds)
    }
}

/// `l = ((1+k)^x − (1/2)^x) / k^x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LFactor {
    pub x: f64,
    pub k: f64,
    pub value: f64,
}

pub fn l_factor(x: f64, k: f64) -> Result<LFactor> {
    if !(x >= 0.0) || x.is_nan() {
        return Err(domain(format!("l-factor exponent x = {x} must be >= 0")));
    }
    if !(k >= 1.0) || !k.is_finite() {
        return Err(domain(format!("l-factor k = {k} must be finite and >= 1")));
    }
    // the quotient form overflows only when the value itself does
    let value = ((1.0 + k) / k).powf(x) - (0.5 / k).powf(x);
    Ok(LFactor { x, k, value })
}

/// `w · v` with `0 · ∞ = 0`, for weights that overflow at extreme exponents.
pub(crate) fn weighted(w: f64, v: f64) -> f64 {
    if v == 0.0 || w == 0.0 {
        0.0
    } else {
        w * v
    }
}

/// `Σ_i l^{n−1−i} v_i`: the first value carries the largest power.
pub(crate) fn descending_weighted_sum(l: f64, values: &[f64]) -> f64 {
    let n = values.len();
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| weighted(l.powi((n - 1 - i) as i32), v))
        .sum()
}

/// Checks `p_1 + … + p_j ≥ k·p_{j+1}` for every `j`; returns the smallest slack.
pub(crate) fn peeling_slack(sorted: &[f64], k: f64) -> f64 {
    let mut prefix = 0.0;
    let mut slack = f64::INFINITY;
    for w in sorted.windows(2) {
        prefix += w[0];
        slack = slack.min(prefix - k * w[1]);
    }
    slack
}

/// Which pattern of peeling conditions holds along `A_2, …, A_{n−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ChainCase {
    /// Low condition for `i ≤ m`, high condition above.
    Mixed(usize),
    /// Low condition at every index.
    AllLow,
    /// High condition at every index.
    AllHigh,
}

impl ChainCase {
    pub(crate) fn label(self) -> String {
        match self {
            ChainCase::Mixed(m) => format!("case 1 (m = {m})"),
            ChainCase::AllLow => "case 2".into(),
            ChainCase::AllHigh => "case 3".into(),
        }
    }
}

/// Classifies index conditions for `i = 2..n−1` (position 0 is `A_2`).
/// All-low is preferred, then all-high, then the mixed split with the smallest `m`.
pub(crate) fn classify_chain(low: &[bool], high: &[bool]) -> Option<ChainCase> {
    if low.iter().all(|&b| b) {
        return Some(ChainCase::AllLow);
    }
    if high.iter().all(|&b| b) {
        return Some(ChainCase::AllHigh);
    }
    let n = low.len() + 2;
    (2..=n.saturating_sub(2))
        .find(|&m| low[..m - 1].iter().all(|&b| b) && high[m - 1..].iter().all(|&b| b))
        .map(ChainCase::Mixed)
}

/// Right-hand side of the chained bound over `v = (v_2, …, v_n)` (already
/// powered), with peeling weight `l` and halving weight `h`.
pub(crate) fn chain_rhs(case: ChainCase, v: &[f64], l: f64, h: f64) -> f64 {
    let last = v.len() - 1;
    let term = |w: f64, x: f64| weighted(w, x);
    match case {
        ChainCase::AllLow => {
            (0..last).map(|t| term(h * l.powi(t as i32), v[t])).sum::<f64>()
                + term(l.powi(last as i32), v[last])
        }
        ChainCase::AllHigh => {
            (0..last).map(|t| term(l * h.powi(t as i32), v[t])).sum::<f64>()
                + term(h.powi(last as i32), v[last])
        }
        ChainCase::Mixed(m) => {
            let head: f64 = (0..m - 1).map(|t| term(h * l.powi(t as i32), v[t])).sum();
            let middle: f64 = (m - 1..last)
                .map(|t| term(l.powi(m as i32) * h.powi((t + 1 - m) as i32), v[t]))
                .sum();
            head + middle + term(l.powi(m as i32 - 1) * h.powi((last + 1 - m) as i32), v[last])
        }
    }
}

pub(crate) fn check_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(value >= lo && value <= hi) {
        return Err(domain(format!("{name} = {value} outside [{lo}, {hi}]")));
    }
    Ok(())
}

pub(crate) fn check_k(k: f64) -> Result<()> {
    check_range("k", k, 1.0, f64::MAX)
}

/// `0 ≤ α ≤ r/2` with `r ≥ r_min`.
pub(crate) fn check_alpha_r(alpha: f64, r: f64, r_min: f64) -> Result<()> {
    check_range("r", r, r_min, f64::MAX)?;
    check_range("alpha", alpha, 0.0, r / 2.0)
}

pub(crate) fn require_qubits(psi: &PureState, min: usize) -> Result<usize> {
    if !psi.is_all_qubits() {
        return Err(Error::UnsupportedDomain(format!(
            "bounds need an all-qubit register, got dims {:?}",
            psi.dims()
        )));
    }
    let n = psi.num_subsystems();
    if n < min {
        return Err(Error::BadArity(format!("{n} qubits, need at least {min}")));
    }
    Ok(n)
}

/// Concurrence and EoF of every `ρ_{A_1 A_j}`, `j = 2..n`.
pub(crate) struct PairData {
    pub concurrence: Vec<f64>,
    pub eof: Vec<f64>,
}

pub(crate) fn pairs_with_first(psi: &PureState) -> Result<PairData> {
    let n = psi.num_subsystems();
    let concurrence = (1..n)
        .map(|j| measures::pair_concurrence(psi, 0, j))
        .collect::<Result<Vec<_>>>()?;
    let eof = concurrence
        .iter()
        .map(|c| measures::wootters_f(c * c))
        .collect::<Result<Vec<_>>>()?;
    Ok(PairData { concurrence, eof })
}

pub(crate) fn pair_label(i: usize, j: usize) -> String {
    format!("A{}A{}", i + 1, j + 1)
}
