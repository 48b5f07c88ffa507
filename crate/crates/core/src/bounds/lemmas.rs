use serde::{Deserialize, Serialize};

use super::{
    check_alpha_r, check_k, check_range, descending_weighted_sum, l_factor, peeling_slack,
    weighted, BoundReport, Condition, Direction, TheoremId,
};
use crate::error::{domain, Error, Result};
use crate::measures::wootters_f;

/// Exponent regime of the scalar lemmas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `0 ≤ x ≤ 1/2`: the bound is a lower bound.
    Low,
    /// `x ≥ 1`: the bound is an upper bound.
    High,
}

impl Regime {
    fn check(self, x: f64) -> Result<()> {
        match self {
            Regime::Low => check_range("x", x, 0.0, 0.5),
            Regime::High => check_range("x", x, 1.0, f64::INFINITY),
        }
    }

    fn direction(self) -> Direction {
        match self {
            Regime::Low => Direction::LowerBound,
            Regime::High => Direction::UpperBound,
        }
    }
}

/// `(1+t)^x` against `(1/2)^x + l·t^x` for `t ≥ k ≥ 1`.
pub fn lemma1_check(t: f64, k: f64, x: f64, regime: Regime) -> Result<BoundReport> {
    check_k(k)?;
    if !(t >= k) || !t.is_finite() {
        return Err(domain(format!("t = {t} must be finite and >= k = {k}")));
    }
    regime.check(x)?;
    let l = l_factor(x, k)?.value;
    let lhs = (1.0 + t).powf(x);
    let rhs = 0.5f64.powf(x) + weighted(l, t.powf(x));
    Ok(BoundReport::new(TheoremId::Lemma1, regime.direction(), lhs, rhs)
        .case(format!("{regime:?} regime").to_lowercase())
        .param("t", t)
        .param("k", k)
        .param("x", x))
}

fn check_sequence(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::BadArity("empty sequence".into()));
    }
    if p.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(domain("sequence entries must be finite and >= 0"));
    }
    if p.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotSorted);
    }
    Ok(())
}

/// `((Σ pᵢ)^x, (1/2)^x Σ l^{n−i} pᵢ^x)` for `p` sorted nonincreasing.
pub fn lemma2_weighted_sum(p: &[f64], x: f64, k: f64, regime: Regime) -> Result<(f64, f64)> {
    check_sequence(p)?;
    check_k(k)?;
    regime.check(x)?;
    let l = l_factor(x, k)?.value;
    let combined = p.iter().sum::<f64>().powf(x);
    let powered: Vec<f64> = p.iter().map(|v| v.powf(x)).collect();
    let weighted = weighted(0.5f64.powf(x), descending_weighted_sum(l, &powered));
    Ok((combined, weighted))
}

/// `l^{n−1} p₁^x + (1/2)^x Σ_{i≥2} l^{n−i} pᵢ^x`: the sum the peeling
/// induction produces, with the largest term carrying no `(1/2)^x`.
pub fn lemma2_peeled_sum(p: &[f64], x: f64, k: f64) -> Result<f64> {
    check_sequence(p)?;
    check_k(k)?;
    let l = l_factor(x, k)?.value;
    let n = p.len();
    let head = weighted(l.powi((n - 1) as i32), p[0].powf(x));
    let tail: Vec<f64> = p[1..].iter().map(|v| v.powf(x)).collect();
    Ok(head + weighted(0.5f64.powf(x), descending_weighted_sum(l, &tail)))
}

/// The weighted power-sum inequality as a report. The high regime is only
/// claimed under the peeling condition `p₁ + … + pⱼ ≥ k·p_{j+1}`; in the low
/// regime peeling is recorded as a proof condition.
pub fn lemma2_check(p: &[f64], x: f64, k: f64, regime: Regime) -> Result<BoundReport> {
    let (combined, weighted) = lemma2_weighted_sum(p, x, k, regime)?;
    let slack = peeling_slack(p, k);
    let peeling = Condition::new(slack >= 0.0, &[("min_slack", slack.min(f64::MAX))]);
    let report = BoundReport::new(TheoremId::Lemma2, regime.direction(), combined, weighted)
        .case(format!("{regime:?} regime").to_lowercase())
        .param("x", x)
        .param("k", k)
        .param("n", p.len() as f64);
    Ok(match regime {
        Regime::Low => report.proof_condition("peeling", peeling),
        Regime::High => report.hypothesis("peeling", peeling),
    })
}

/// `f^α(x² + y²)` against `(1/2)^{α/r} f^α(x²) + l·f^α(y²)` given `f^r(y²) ≥ k f^r(x²)`.
pub fn lemma3_check(x: f64, y: f64, k: f64, alpha: f64, r: f64) -> Result<BoundReport> {
    check_range("x", x, 0.0, 1.0)?;
    check_range("y", y, 0.0, 1.0)?;
    if x * x + y * y > 1.0 + super::SCALAR_TOL {
        return Err(domain(format!("x² + y² = {} exceeds 1", x * x + y * y)));
    }
    check_k(k)?;
    check_alpha_r(alpha, r, std::f64::consts::SQRT_2)?;
    let fx = wootters_f(x * x)?;
    let fy = wootters_f(y * y)?;
    let fxy = wootters_f((x * x + y * y).min(1.0))?;
    let u = alpha / r;
    let l = l_factor(u, k)?.value;
    let lhs = fxy.powf(alpha);
    let rhs = 0.5f64.powf(u) * fx.powf(alpha) + l * fy.powf(alpha);
    let hyp = Condition::new(
        fy.powf(r) >= k * fx.powf(r),
        &[("f_r_y", fy.powf(r)), ("k_f_r_x", k * fx.powf(r))],
    );
    Ok(BoundReport::new(TheoremId::Lemma3, Direction::LowerBound, lhs, rhs)
        .hypothesis("ratio", hyp)
        .param("x", x)
        .param("y", y)
        .param("k", k)
        .param("alpha", alpha)
        .param("r", r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma1_examples() {
        let eq = lemma1_check(1.0, 1.0, 0.5, Regime::Low).unwrap();
        assert!(eq.margin.abs() < 1e-12);
        let low = lemma1_check(2.0, 1.0, 0.5, Regime::Low).unwrap();
        assert!((low.lhs - 3f64.sqrt()).abs() < 1e-12);
        assert!((low.rhs - 1.70711).abs() < 1e-5);
        assert!(low.margin > 0.0);
        let high = lemma1_check(2.0, 1.0, 1.0, Regime::High).unwrap();
        assert!((high.lhs - 3.0).abs() < 1e-12);
        assert!((high.rhs - 3.5).abs() < 1e-12);
        assert!((high.margin - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lemma1_domain() {
        assert!(lemma1_check(0.5, 1.0, 0.5, Regime::Low).is_err());
        assert!(lemma1_check(2.0, 1.0, 0.7, Regime::Low).is_err());
        assert!(lemma1_check(2.0, 1.0, 0.7, Regime::High).is_err());
        assert!(lemma1_check(2.0, 0.5, 0.2, Regime::Low).is_err());
    }

    #[test]
    fn lemma2_examples() {
        let (c, w) = lemma2_weighted_sum(&[1.0], 0.3, 2.0, Regime::Low).unwrap();
        assert_eq!(c, 1.0);
        assert!((w - 0.5f64.powf(0.3)).abs() < 1e-15);
        let (c, w) = lemma2_weighted_sum(&[2.0 / 9.0, 2.0 / 9.0], 0.5, 1.0, Regime::Low).unwrap();
        assert!((c - 2.0 / 3.0).abs() < 1e-12);
        let l = 2f64.sqrt() - std::f64::consts::FRAC_1_SQRT_2;
        let expect = std::f64::consts::FRAC_1_SQRT_2 * (l + 1.0) * (2.0f64 / 9.0).sqrt();
        assert!((w - expect).abs() < 1e-12);
        assert!((w - 0.56904).abs() < 1e-5);
        let (c, w) = lemma2_weighted_sum(&[3.0, 2.0, 1.0], 2.0, 1.0, Regime::High).unwrap();
        assert_eq!(c, 36.0);
        // l = 3.75 at x = 2, k = 1
        assert!((w - 0.25 * (3.75f64.powi(2) * 9.0 + 3.75 * 4.0 + 1.0)).abs() < 1e-12);
        assert!(matches!(
            lemma2_weighted_sum(&[1.0, 2.0], 0.5, 1.0, Regime::Low),
            Err(Error::NotSorted)
        ));
    }

    #[test]
    fn lemma2_high_regime_probe() {
        // the high-regime sum undercounts two equal terms even though they peel
        let r = lemma2_check(&[1.0, 1.0], 1.0, 1.0, Regime::High).unwrap();
        assert!(r.hypothesis_ok);
        assert_eq!(r.lhs, 2.0);
        assert!((r.rhs - 1.25).abs() < 1e-15);
        assert!(r.margin < 0.0);
        let peeled = lemma2_peeled_sum(&[1.0, 1.0], 1.0, 1.0).unwrap();
        assert!((peeled - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lemma2_low_regime_records_peeling() {
        let r = lemma2_check(&[0.3, 0.3, 0.3], 0.4, 3.0, Regime::Low).unwrap();
        assert!(r.hypothesis_ok);
        assert!(!r.proof_conditions_ok());
    }

    #[test]
    fn lemma3_examples() {
        let r = lemma3_check(0.0, 0.6, 1.0, 0.5, 2.0).unwrap();
        assert!(r.hypothesis_ok && r.margin >= 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = lemma3_check(h, h, 1.0, 0.7, std::f64::consts::SQRT_2).unwrap();
        assert!(r.hypothesis_ok && r.margin >= -1e-12);
        let r = lemma3_check(0.3, 0.8, 1.5, 0.5, 2.0).unwrap();
        assert!(r.hypothesis_ok);
        assert!(r.margin >= 0.0);
        assert!(lemma3_check(0.8, 0.8, 1.0, 0.5, 2.0).is_err());
        assert!(lemma3_check(0.3, 0.4, 1.0, 0.5, 1.2).is_err());
        assert!(lemma3_check(0.3, 0.4, 1.0, 1.5, 2.0).is_err());
    }
}
