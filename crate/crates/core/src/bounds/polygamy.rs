//! Upper bounds: the unified-entropy polygamy bound and the EoF bounds below
//! the exponent `s0` where `Σ E^{s0} = 1`.

use std::f64::consts::SQRT_2;

use super::{
    chain_rhs, check_k, check_range, classify_chain, descending_weighted_sum, l_factor,
    pair_label, pairs_with_first, require_qubits, BoundReport, ChainCase, Condition, Direction,
    TheoremId, ZERO_CONCURRENCE,
};
use crate::entropy::{shannon, unified_entropy_of_spectrum, UnifiedParams};
use crate::error::{domain, Error, Result};
use crate::qstate::PureState;

const ROOT_TOL: f64 = 1e-12;

/// The `s0 ∈ (0, √2]` with `Σ vᵢ^{s0} = 1`, by bisection.
pub fn solve_s0(values: &[f64]) -> Result<f64> {
    if let Some(&v) = values.iter().find(|&&v| !(v > 0.0 && v < 1.0)) {
        return Err(Error::DegenerateValue(v));
    }
    let g = |s: f64| values.iter().map(|v| v.powf(s)).sum::<f64>() - 1.0;
    if values.len() < 2 {
        return Err(Error::NoRoot(format!("{} value(s); the sum never reaches 1", values.len())));
    }
    if g(SQRT_2) > ROOT_TOL {
        return Err(Error::NoRoot(format!("Σ v^√2 = {} > 1", g(SQRT_2) + 1.0)));
    }
    // g decreases strictly from g(0) = n − 1 > 0
    let (mut lo, mut hi) = (0.0, SQRT_2);
    let mut mid = hi;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm.abs() < ROOT_TOL {
            break;
        }
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// EoF of each `ρ_{A_1A_j}` with nonzero concurrence, labelled.
fn positive_pairs(psi: &PureState) -> Result<Vec<(String, f64)>> {
    let pairs = pairs_with_first(psi)?;
    Ok(pairs
        .concurrence
        .iter()
        .zip(&pairs.eof)
        .enumerate()
        .filter(|(_, (&c, _))| c > ZERO_CONCURRENCE)
        .map(|(j, (_, &e))| (pair_label(0, j + 1), e))
        .collect())
}

fn check_s_exp(s_exp: f64) -> Result<()> {
    if !(s_exp > 0.0) || !s_exp.is_finite() {
        return Err(domain(format!("s = {s_exp} must be finite and > 0")));
    }
    Ok(())
}

fn s0_condition(s_exp: f64, s0: f64) -> Condition {
    Condition::new(s_exp <= s0, &[("s", s_exp), ("s0", s0)])
}

/// `E^s(ρ_{A_1|A_2⋯A_n}) ≤ Σ_j E^s(ρ_{A_1A_j})` over the pairs with nonzero
/// concurrence, for `0 < s ≤ s0`. `s0` is solved from the state's own EoFs.
pub fn eq35_check(psi: &PureState, s_exp: f64) -> Result<BoundReport> {
    require_qubits(psi, 3)?;
    check_s_exp(s_exp)?;
    let pairs = positive_pairs(psi)?;
    if pairs.len() < 2 {
        return Err(Error::PreconditionFailed(format!(
            "{} pairwise concurrence(s) above {ZERO_CONCURRENCE:e}, need two",
            pairs.len()
        )));
    }
    let eofs: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let s0 = solve_s0(&eofs)?;
    let lhs = shannon(&psi.reduced(&[0])?.spectrum()?).powf(s_exp);
    let rhs = eofs.iter().map(|e| e.powf(s_exp)).sum();
    Ok(BoundReport::new(TheoremId::Eq35, Direction::UpperBound, lhs, rhs)
        .hypothesis("s0", s0_condition(s_exp, s0))
        .ordered(pairs.into_iter().map(|p| p.0).collect())
        .param("s", s_exp)
        .param("s0", s0))
}

/// `E_{q,s}^β(ρ_{A_1⋯A_m|rest}) ≤ (1/2)^β Σ l^{e} E_{q,s}(ρ_{A_i|Ā_i})` with the
/// one-vs-rest entropies sorted so the largest carries `l^{m−1}`.
pub fn thm4_bound(psi: &PureState, m: usize, beta: f64, k: f64, p: UnifiedParams) -> Result<BoundReport> {
    let n = require_qubits(psi, 3)?;
    if m < 2 || m >= n {
        return Err(Error::BadPartition(format!(
            "left block size {m} of {n} qubits; need 2 <= m <= n - 1"
        )));
    }
    check_range("beta", beta, 1.0, f64::MAX)?;
    check_k(k)?;
    if !(p.q > 1.0 && p.q * p.s >= 1.0) {
        return Err(domain(format!("(q, s) = ({}, {}) needs q > 1 and qs >= 1", p.q, p.s)));
    }
    let left: Vec<usize> = (0..m).collect();
    let lhs = unified_entropy_of_spectrum(&psi.reduced(&left)?.spectrum()?, p)?.powf(beta);
    let mut singles = (0..m)
        .map(|i| {
            let e = unified_entropy_of_spectrum(&psi.reduced(&[i])?.spectrum()?, p)?;
            Ok((format!("A{}", i + 1), e))
        })
        .collect::<Result<Vec<_>>>()?;
    singles.sort_by(|a, b| b.1.total_cmp(&a.1));
    let l = l_factor(beta, k)?.value;
    let values: Vec<f64> = singles.iter().map(|t| t.1).collect();
    let rhs = 0.5f64.powf(beta) * descending_weighted_sum(l, &values);
    Ok(BoundReport::new(TheoremId::Thm4, Direction::UpperBound, lhs, rhs)
        .case(format!("{}|{}", m, n - m))
        .ordered(singles.into_iter().map(|t| t.0).collect())
        .param("beta", beta)
        .param("k", k)
        .param("q", p.q)
        .param("s_entropy", p.s)
        .param("m", m as f64))
}

/// Three-qubit EoF upper bound for `0 < s ≤ s0`, `β ≥ max(1, s)`.
pub fn thm5_bound(psi: &PureState, beta: f64, s_exp: f64, k: f64) -> Result<BoundReport> {
    let n = require_qubits(psi, 3)?;
    if n != 3 {
        return Err(Error::BadArity(format!("{n} qubits; this bound is tripartite")));
    }
    check_s_exp(s_exp)?;
    check_range("beta", beta, s_exp.max(1.0), f64::MAX)?;
    check_k(k)?;
    let pairs = pairs_with_first(psi)?;
    let (e12, e13) = (pairs.eof[0], pairs.eof[1]);
    let s0 = solve_s0(&[e12, e13])?;
    let lhs = shannon(&psi.reduced(&[0])?.spectrum()?).powf(beta);
    let x = beta / s_exp;
    let l = l_factor(x, k)?.value;
    let h = 0.5f64.powf(x);
    let case1 = e13.powf(s_exp) >= k * e12.powf(s_exp);
    let case2 = e12.powf(s_exp) >= k * e13.powf(s_exp);
    let (label, small, large) = if case1 {
        ("case 1", e12, e13)
    } else if case2 {
        ("case 2", e13, e12)
    } else if e13 >= e12 {
        ("no applicable case", e12, e13)
    } else {
        ("no applicable case", e13, e12)
    };
    let rhs = h * small.powf(beta) + l * large.powf(beta);
    Ok(BoundReport::new(TheoremId::Thm5, Direction::UpperBound, lhs, rhs)
        .case(label)
        .hypothesis("s0", s0_condition(s_exp, s0))
        .hypothesis(
            "case",
            Condition::new(
                case1 || case2,
                &[("e12_s", e12.powf(s_exp)), ("e13_s", e13.powf(s_exp)), ("k", k)],
            ),
        )
        .ordered(vec![pair_label(0, 1), pair_label(0, 2)])
        .param("beta", beta)
        .param("s", s_exp)
        .param("s0", s0)
        .param("k", k))
}

/// n-qubit EoF upper bound. Index `i` is low when `k E_i^s ≤ Σ_{j>i} E_j^s`
/// and high when `E_i^s ≥ k Σ_{j>i} E_j^s`.
pub fn thm6_bound(psi: &PureState, beta: f64, s_exp: f64, k: f64) -> Result<BoundReport> {
    let n = require_qubits(psi, 3)?;
    check_s_exp(s_exp)?;
    check_range("beta", beta, s_exp, f64::MAX)?;
    check_k(k)?;
    let e = pairs_with_first(psi)?.eof;
    let positive: Vec<f64> = e.iter().copied().filter(|&v| v > 0.0).collect();
    if positive.len() < 2 {
        let v = e.iter().copied().fold(0.0, f64::max);
        return Err(Error::DegenerateValue(v));
    }
    let s0 = solve_s0(&positive)?;
    let lhs = shannon(&psi.reduced(&[0])?.spectrum()?).powf(beta);

    let es: Vec<f64> = e.iter().map(|v| v.powf(s_exp)).collect();
    let mut report = BoundReport::new(TheoremId::Thm6, Direction::UpperBound, lhs, 0.0)
        .hypothesis("s0", s0_condition(s_exp, s0));
    let mut low = Vec::with_capacity(n - 2);
    let mut high = Vec::with_capacity(n - 2);
    for t in 0..n - 2 {
        let tail: f64 = es[t + 1..].iter().sum();
        low.push(k * es[t] <= tail);
        high.push(es[t] >= k * tail);
        report = report.proof_condition(
            &format!("i={}", t + 2),
            Condition::new(low[t] || high[t], &[("e_pair_s", es[t]), ("tail_s", tail)]),
        );
    }
    let case = classify_chain(&low, &high);
    let x = beta / s_exp;
    let powered: Vec<f64> = e.iter().map(|v| v.powf(beta)).collect();
    let rhs = chain_rhs(
        case.unwrap_or(ChainCase::AllLow),
        &powered,
        l_factor(x, k)?.value,
        0.5f64.powf(x),
    );
    report.rhs = rhs;
    report.margin = rhs - lhs;
    Ok(report
        .case(case.map_or("no applicable case".into(), ChainCase::label))
        .hypothesis("case", Condition::new(case.is_some(), &[("k", k)]))
        .ordered((1..n).map(|j| pair_label(0, j)).collect())
        .param("beta", beta)
        .param("s", s_exp)
        .param("s0", s0)
        .param("k", k))
}
