//! Lower bounds on `E^α` across a cut and the tightness comparisons.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{
    chain_rhs, check_alpha_r, check_k, check_range, classify_chain, descending_weighted_sum,
    l_factor, pair_label, pairs_with_first, peeling_slack, require_qubits, BoundReport,
    ChainCase, Condition, Direction, TheoremId,
};
use crate::entropy::{shannon, unified_entropy_of_spectrum, UnifiedParams};
use crate::error::{domain, Error, Result};
use crate::measures::{pair_concurrence, unified_f, wootters_f};
use crate::qstate::PureState;

/// `E_{q,s}^α(ρ_{A_1⋯A_m|A_{m+1}⋯A_n}) ≥ (1/2)^{α/r} Σ l^{e} E_{q,s}^α(ρ_{A_iA_j})`
/// with the pairwise terms sorted so the largest carries exponent `m(n−m)−1`.
pub fn thm1_bound(
    psi: &PureState,
    m: usize,
    alpha: f64,
    r: f64,
    k: f64,
    p: UnifiedParams,
) -> Result<BoundReport> {
    let n = require_qubits(psi, 2)?;
    if m == 0 || m >= n {
        return Err(Error::BadPartition(format!("left block size {m} of {n} qubits")));
    }
    check_alpha_r(alpha, r, 1.0)?;
    check_k(k)?;
    if !p.in_monogamy_envelope() {
        return Err(domain(format!(
            "(q, s) = ({}, {}) outside q >= 2, 0 <= s <= 1, qs <= 3",
            p.q, p.s
        )));
    }
    let left: Vec<usize> = (0..m).collect();
    let lhs = unified_entropy_of_spectrum(&psi.reduced(&left)?.spectrum()?, p)?.powf(alpha);

    let mut terms = Vec::with_capacity(m * (n - m));
    for i in 0..m {
        for j in m..n {
            let c = pair_concurrence(psi, i, j)?;
            terms.push((pair_label(i, j), unified_f(c * c, p)?));
        }
    }
    // stable sort keeps index order among ties
    terms.sort_by(|a, b| b.1.total_cmp(&a.1));

    let x = alpha / r;
    let l = l_factor(x, k)?.value;
    let powered: Vec<f64> = terms.iter().map(|t| t.1.powf(alpha)).collect();
    let rhs = 0.5f64.powf(x) * descending_weighted_sum(l, &powered);
    let by_r: Vec<f64> = terms.iter().map(|t| t.1.powf(r)).collect();
    let slack = peeling_slack(&by_r, k);

    Ok(BoundReport::new(TheoremId::Thm1, Direction::LowerBound, lhs, rhs)
        .case(format!("{}|{}", m, n - m))
        .hypothesis(
            "envelope",
            Condition::new(true, &[("q", p.q), ("s", p.s), ("qs", p.q * p.s)]),
        )
        .proof_condition(
            "peeling",
            Condition::new(slack >= 0.0, &[("min_slack", slack.min(f64::MAX))]),
        )
        .ordered(terms.into_iter().map(|t| t.0).collect())
        .param("alpha", alpha)
        .param("r", r)
        .param("k", k)
        .param("q", p.q)
        .param("s_entropy", p.s)
        .param("m", m as f64))
}

fn one_vs_rest_eof(psi: &PureState) -> Result<f64> {
    Ok(shannon(&psi.reduced(&[0])?.spectrum()?))
}

/// Three-qubit EoF bound: the larger pairwise term (by the `k` ratio) carries `l`,
/// the smaller one `(1/2)^{α/r}`.
pub fn thm2_bound(psi: &PureState, alpha: f64, r: f64, k: f64) -> Result<BoundReport> {
    let n = require_qubits(psi, 3)?;
    if n != 3 {
        return Err(Error::BadArity(format!("{n} qubits; this bound is tripartite")));
    }
    check_alpha_r(alpha, r, SQRT_2)?;
    check_k(k)?;
    let pairs = pairs_with_first(psi)?;
    let (e12, e13) = (pairs.eof[0], pairs.eof[1]);
    let lhs = one_vs_rest_eof(psi)?.powf(alpha);
    let x = alpha / r;
    let l = l_factor(x, k)?.value;
    let h = 0.5f64.powf(x);
    let case1 = e13.powf(r) >= k * e12.powf(r);
    let case2 = e12.powf(r) >= k * e13.powf(r);
    let (label, small, large) = if case1 {
        ("case 1", e12, e13)
    } else if case2 {
        ("case 2", e13, e12)
    } else if e13 >= e12 {
        ("no applicable case", e12, e13)
    } else {
        ("no applicable case", e13, e12)
    };
    let rhs = h * small.powf(alpha) + l * large.powf(alpha);
    Ok(BoundReport::new(TheoremId::Thm2, Direction::LowerBound, lhs, rhs)
        .case(label)
        .hypothesis(
            "case",
            Condition::new(
                case1 || case2,
                &[("e12_r", e12.powf(r)), ("e13_r", e13.powf(r)), ("k", k)],
            ),
        )
        .ordered(vec![pair_label(0, 1), pair_label(0, 2)])
        .param("alpha", alpha)
        .param("r", r)
        .param("k", k))
}

/// n-qubit EoF bound. The one-vs-rest term `E_{A_1|A_{i+1}⋯A_n}` in the case
/// conditions is taken as `f(Σ_{j>i} C²_{A_1A_j})`, the quantity the chained
/// argument actually peels; it is exact for three qubits.
pub fn thm3_bound(psi: &PureState, alpha: f64, r: f64, k: f64) -> Result<BoundReport> {
    let n = require_qubits(psi, 3)?;
    check_alpha_r(alpha, r, SQRT_2)?;
    check_k(k)?;
    let pairs = pairs_with_first(psi)?;
    let e = &pairs.eof;
    let c2: Vec<f64> = pairs.concurrence.iter().map(|c| c * c).collect();
    let lhs = one_vs_rest_eof(psi)?.powf(alpha);

    let mut report = BoundReport::new(TheoremId::Thm3, Direction::LowerBound, lhs, 0.0);
    let mut low = Vec::with_capacity(n - 2);
    let mut high = Vec::with_capacity(n - 2);
    for t in 0..n - 2 {
        let tail: f64 = c2[t + 1..].iter().sum();
        let rest = wootters_f(tail.min(1.0))?;
        let (er, rr) = (e[t].powf(r), rest.powf(r));
        low.push(k * er <= rr);
        high.push(er >= k * rr);
        report = report.proof_condition(
            &format!("i={}", t + 2),
            Condition::new(low[t] || high[t], &[("e_pair_r", er), ("e_rest_r", rr)]),
        );
    }
    let case = classify_chain(&low, &high);
    let x = alpha / r;
    let l = l_factor(x, k)?.value;
    let powered: Vec<f64> = e.iter().map(|v| v.powf(alpha)).collect();
    let rhs = chain_rhs(case.unwrap_or(ChainCase::AllLow), &powered, l, 0.5f64.powf(x));
    report.rhs = rhs;
    report.margin = lhs - rhs;
    Ok(report
        .case(case.map_or("no applicable case".into(), ChainCase::label))
        .hypothesis("case", Condition::new(case.is_some(), &[("k", k)]))
        .ordered((1..n).map(|j| pair_label(0, j)).collect())
        .param("alpha", alpha)
        .param("r", r)
        .param("k", k))
}

/// Gap between the new three-qubit bound and the earlier `(1+k)^{α/r} − 1` form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Remark2 {
    pub mu1: f64,
    pub mu2: f64,
    pub mu: f64,
    pub hypothesis_ok: bool,
}

/// `μ1 = E_x^α + ((1+k)^{α/r} − 1)/k^{α/r}·E_y^α`,
/// `μ2 = (1/2)^{α/r} E_x^α + l·E_y^α`, `μ = μ2 − μ1`, given `E_y^r ≥ k E_x^r`.
pub fn remark2_compare(ex: f64, ey: f64, alpha: f64, r: f64, k: f64) -> Result<Remark2> {
    check_range("E_x", ex, 0.0, f64::MAX)?;
    check_range("E_y", ey, 0.0, f64::MAX)?;
    check_alpha_r(alpha, r, f64::MIN_POSITIVE)?;
    check_k(k)?;
    let x = alpha / r;
    let prior = ((1.0 + k).powf(x) - 1.0) / k.powf(x);
    let mu1 = ex.powf(alpha) + prior * ey.powf(alpha);
    let mu2 = 0.5f64.powf(x) * ex.powf(alpha) + l_factor(x, k)?.value * ey.powf(alpha);
    Ok(Remark2 {
        mu1,
        mu2,
        mu: mu2 - mu1,
        hypothesis_ok: ey.powf(r) >= k * ex.powf(r),
    })
}

/// The concurrence chain `b1 ≥ b2 ≥ b3` comparing three successive bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Remark3 {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub hypothesis_ok: bool,
}

pub fn remark3_chain(cx: f64, cy: f64, alpha: f64, r: f64, k: f64) -> Result<Remark3> {
    check_range("C_x", cx, 0.0, 1.0)?;
    check_range("C_y", cy, 0.0, 1.0)?;
    check_alpha_r(alpha, r, 2.0)?;
    if !(k > 1.0) || !k.is_finite() {
        return Err(domain(format!("k = {k} must be > 1")));
    }
    let x = alpha / r;
    let (ax, ay) = (cx.powf(alpha), cy.powf(alpha));
    Ok(Remark3 {
        b1: 0.5f64.powf(x) * ax + l_factor(x, k)?.value * ay,
        b2: ax + ((1.0 + k).powf(x) - 1.0) / k.powf(x) * ay,
        b3: ax + (2f64.powf(x) - 1.0) * ay,
        hypothesis_ok: cy.powf(r) >= k * cx.powf(r),
    })
}
