//! Prior monogamy inequalities the new bounds are measured against.

use super::{check_range, pair_label, pairs_with_first, require_qubits, BoundReport, Direction, TheoremId};
use crate::entropy::{unified_entropy_of_spectrum, UnifiedParams};
use crate::error::{domain, Error, Result};
use crate::measures::{concurrence_pure, pair_concurrence, unified_f};
use crate::qstate::{Bipartition, PureState};

fn check_monogamy_envelope(alpha: f64, p: UnifiedParams) -> Result<()> {
    check_range("alpha", alpha, 1.0, f64::MAX)?;
    if !p.in_monogamy_envelope() {
        return Err(domain(format!(
            "(q, s) = ({}, {}) outside q >= 2, 0 <= s <= 1, qs <= 3",
            p.q, p.s
        )));
    }
    Ok(())
}

/// `E_{q,s}^α(ρ_{A_1|A_2⋯A_n}) ≥ Σ_j E_{q,s}^α(ρ_{A_1A_j})` for `α ≥ 1`.
pub fn baseline_eq8(psi: &PureState, alpha: f64, p: UnifiedParams) -> Result<BoundReport> {
    let n = require_qubits(psi, 2)?;
    baseline_eq14(psi, &Bipartition::split_at(1, n)?, alpha, p).map(|mut r| {
        r.theorem = TheoremId::Eq8;
        r
    })
}

/// `E_{q,s}^α(ρ_{L|R}) ≥ Σ_{i∈L, j∈R} E_{q,s}^α(ρ_{A_iA_j})` for `α ≥ 1`.
pub fn baseline_eq14(psi: &PureState, part: &Bipartition, alpha: f64, p: UnifiedParams) -> Result<BoundReport> {
    let n = require_qubits(psi, 2)?;
    check_monogamy_envelope(alpha, p)?;
    if !part.covers(n) {
        return Err(Error::BadPartition(format!("{part} does not cover all {n} qubits")));
    }
    let lhs = unified_entropy_of_spectrum(&psi.reduced(part.left())?.spectrum()?, p)?.powf(alpha);
    let mut rhs = 0.0;
    let mut labels = Vec::new();
    for &i in part.left() {
        for &j in part.right() {
            let c = pair_concurrence(psi, i, j)?;
            rhs += unified_f(c * c, p)?.powf(alpha);
            labels.push(pair_label(i, j));
        }
    }
    Ok(BoundReport::new(TheoremId::Eq14, Direction::LowerBound, lhs, rhs)
        .case(part.to_string())
        .ordered(labels)
        .param("alpha", alpha)
        .param("q", p.q)
        .param("s_entropy", p.s))
}

/// `C^α(ρ_{A_1|A_2⋯A_n}) ≥ Σ_j C^α(ρ_{A_1A_j})` for `α ≥ 2`.
pub fn baseline_eq21(psi: &PureState, alpha: f64) -> Result<BoundReport> {
    let n = require_qubits(psi, 2)?;
    check_range("alpha", alpha, 2.0, f64::MAX)?;
    let lhs = concurrence_pure(psi, &Bipartition::split_at(1, n)?)?.value.powf(alpha);
    let pairs = pairs_with_first(psi)?;
    let rhs = pairs.concurrence.iter().map(|c| c.powf(alpha)).sum();
    Ok(BoundReport::new(TheoremId::Eq21, Direction::LowerBound, lhs, rhs)
        .ordered((1..n).map(|j| pair_label(0, j)).collect())
        .param("alpha", alpha))
}

/// `C²_{A_1|A_2A_3} ≥ C²_{A_1A_2} + C²_{A_1A_3}` on three qubits.
pub fn baseline_eq28(psi: &PureState) -> Result<BoundReport> {
    let n = require_qubits(psi, 3)?;
    if n != 3 {
        return Err(Error::BadArity(format!("{n} qubits; this baseline is tripartite")));
    }
    let lhs = concurrence_pure(psi, &Bipartition::split_at(1, 3)?)?.value.powi(2);
    let pairs = pairs_with_first(psi)?;
    let rhs = pairs.concurrence.iter().map(|c| c * c).sum();
    Ok(BoundReport::new(TheoremId::Eq28, Direction::LowerBound, lhs, rhs)
        .ordered(vec![pair_label(0, 1), pair_label(0, 2)]))
}
