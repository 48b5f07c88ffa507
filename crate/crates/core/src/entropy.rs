//! Unified-(q,s) entropy and its Rényi, Tsallis and von Neumann limits.
//!
//! `S_{q,s}(ρ) = [(tr ρ^q)^s − 1] / [(1 − q) s]`. The limit branches use base-2
//! logarithms. The generic formula carries no logarithm and approaches those
//! limits in natural units, so near a limit point it differs from the branch
//! value by a factor `ln 2`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qstate::DensityMatrix;
use crate::spectral::power_sum;

/// Distance from a limit point at which the limit branch is taken.
pub const LIMIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnifiedParams {
    pub q: f64,
    pub s: f64,
}

impl UnifiedParams {
    pub fn new(q: f64, s: f64) -> Result<Self> {
        if !q.is_finite() || q < 0.0 {
            return Err(domain(format!("q = {q} must be finite and >= 0")));
        }
        if !s.is_finite() || s < 0.0 {
            return Err(domain(format!("s = {s} must be finite and >= 0")));
        }
        Ok(Self { q, s })
    }

    pub fn von_neumann() -> Self {
        Self { q: 1.0, s: 1.0 }
    }

    pub fn is_von_neumann(&self) -> bool {
        (self.q - 1.0).abs() < LIMIT_TOL
    }

    pub fn is_renyi(&self) -> bool {
        self.s < LIMIT_TOL
    }

    pub fn is_tsallis(&self) -> bool {
        (self.s - 1.0).abs() < LIMIT_TOL
    }

    /// `q ≥ 1, 0 ≤ s ≤ 1, qs ≤ 3`: where `E_{q,s} = f_{q,s}(C²)` is used on two-qubit mixed states.
    pub fn in_two_qubit_envelope(&self) -> bool {
        self.q >= 1.0 && self.s <= 1.0 && self.q * self.s <= 3.0
    }

    /// `q ≥ 2, 0 ≤ s ≤ 1, qs ≤ 3`: the monogamy envelope.
    pub fn in_monogamy_envelope(&self) -> bool {
        self.q >= 2.0 && self.s <= 1.0 && self.q * self.s <= 3.0
    }

    fn check(&self) -> Result<()> {
        Self::new(self.q, self.s).map(|_| ())
    }
}

/// `−Σ λ log₂ λ` with `0 log 0 = 0`.
pub fn shannon(spectrum: &[f64]) -> f64 {
    -spectrum
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

/// `S_{q,s}` of a probability vector (eigenvalues of a density matrix).
pub fn unified_entropy_of_spectrum(spectrum: &[f64], p: UnifiedParams) -> Result<f64> {
    p.check()?;
    let value = if p.is_von_neumann() {
        shannon(spectrum)
    } else if p.is_renyi() {
        power_sum(spectrum, p.q).log2() / (1.0 - p.q)
    } else {
        // expm1 keeps the small-s approach to the Rényi limit accurate
        let log_trace = power_sum(spectrum, p.q).ln();
        (p.s * log_trace).exp_m1() / ((1.0 - p.q) * p.s)
    };
    // round-off on pure spectra can leave ~1e-16 below zero
    Ok(value.max(0.0))
}

pub fn unified_entropy(rho: &DensityMatrix, p: UnifiedParams) -> Result<f64> {
    p.check()?;
    unified_entropy_of_spectrum(&rho.spectrum()?, p)
}

pub fn von_neumann(rho: &DensityMatrix) -> Result<f64> {
    unified_entropy(rho, UnifiedParams::von_neumann())
}

pub fn renyi(rho: &DensityMatrix, q: f64) -> Result<f64> {
    unified_entropy(rho, UnifiedParams::new(q, 0.0)?)
}

pub fn tsallis(rho: &DensityMatrix, q: f64) -> Result<f64> {
    unified_entropy(rho, UnifiedParams::new(q, 1.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{ghz_state, haar_random_pure, w_state};
    use crate::spectral::ComplexMatrix;
    use crate::Error;
    use proptest::prelude::*;

    fn diag(d: &[f64]) -> DensityMatrix {
        DensityMatrix::new(vec![d.len()], ComplexMatrix::from_real_diagonal(d)).unwrap()
    }

    fn params(q: f64, s: f64) -> UnifiedParams {
        UnifiedParams::new(q, s).unwrap()
    }

    #[test]
    fn pure_states_have_zero_entropy() {
        let rho = w_state(3).unwrap().to_density();
        for (q, s) in [(2.0, 1.0), (0.5, 0.3), (1.0, 1.0), (3.0, 0.0), (0.0, 2.0)] {
            assert!(unified_entropy(&rho, params(q, s)).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_qubit() {
        let rho = diag(&[0.5, 0.5]);
        assert!((unified_entropy(&rho, params(2.0, 1.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((tsallis(&rho, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((renyi(&rho, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((von_neumann(&rho).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn w_marginal_von_neumann() {
        let expect = 3f64.log2() - 2.0 / 3.0;
        let rho = diag(&[1.0 / 3.0, 2.0 / 3.0]);
        assert!((von_neumann(&rho).unwrap() - expect).abs() < 1e-14);
        assert!((von_neumann(&rho).unwrap() - 0.918296).abs() < 1e-6);
        let near = unified_entropy(&rho, params(1.0 + 1e-10, 0.7)).unwrap();
        assert!((near - expect).abs() < 1e-14);
    }

    #[test]
    fn von_neumann_wins_over_renyi() {
        let rho = diag(&[0.25, 0.75]);
        let both = unified_entropy(&rho, params(1.0, 0.0)).unwrap();
        assert_eq!(both, von_neumann(&rho).unwrap());
    }

    #[test]
    fn negative_parameters_are_rejected() {
        let rho = diag(&[0.5, 0.5]);
        assert!(matches!(unified_entropy(&rho, UnifiedParams { q: -1.0, s: 1.0 }), Err(Error::Domain(_))));
        assert!(matches!(UnifiedParams::new(2.0, -0.1), Err(Error::Domain(_))));
        assert!(UnifiedParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn wrappers_match_direct_formulas() {
        let spectrum = [0.1, 0.2, 0.3, 0.4];
        let rho = diag(&spectrum);
        let tr = |q: f64| spectrum.iter().map(|l: &f64| l.powf(q)).sum::<f64>();
        for q in [0.5, 2.0, 3.5] {
            assert!((tsallis(&rho, q).unwrap() - (tr(q) - 1.0) / (1.0 - q)).abs() < 1e-10);
            assert!((renyi(&rho, q).unwrap() - tr(q).log2() / (1.0 - q)).abs() < 1e-10);
        }
        let vn: f64 = -spectrum.iter().map(|l| l * l.log2()).sum::<f64>();
        assert!((von_neumann(&rho).unwrap() - vn).abs() < 1e-10);
    }

    #[test]
    fn renyi_order_zero_counts_support() {
        let rho = ghz_state(3).unwrap().to_density().partial_trace(&[0, 1]).unwrap();
        assert!((renyi(&rho, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classification_flags() {
        let p = params(1.0, 1.0);
        assert!(p.is_von_neumann() && p.is_tsallis() && !p.is_renyi());
        assert!(params(2.0, 0.0).is_renyi());
        assert!(params(2.0, 1.0).in_monogamy_envelope());
        assert!(!params(4.0, 1.0).in_two_qubit_envelope());
        assert!(params(1.5, 0.5).in_two_qubit_envelope());
        assert!(!params(1.5, 0.5).in_monogamy_envelope());
    }

    fn random_marginal(seed: u64, keep: &[usize]) -> DensityMatrix {
        haar_random_pure(3, seed).unwrap().reduced(keep).unwrap()
    }

    proptest! {
        #[test]
        fn limits_are_continuous(seed in any::<u64>(), q in 0.2f64..4.0, s in 0.1f64..2.0) {
            // the generic formula approaches the limits in natural units,
            // while the limit branches report bits
            let rho = random_marginal(seed, &[0, 1]);
            let ln2 = std::f64::consts::LN_2;
            if (q - 1.0).abs() > 1e-3 {
                let near = unified_entropy(&rho, params(q, 1e-8)).unwrap();
                prop_assert!((near - ln2 * renyi(&rho, q).unwrap()).abs() < 1e-6);
            }
            let vn = von_neumann(&rho).unwrap();
            for q1 in [1.0 + 1e-8, 1.0 - 1e-8] {
                let near = unified_entropy(&rho, params(q1, s)).unwrap();
                prop_assert!((near - ln2 * vn).abs() < 1e-6);
            }
        }

        #[test]
        fn entropy_is_nonnegative(seed in any::<u64>(), q in 0.0f64..5.0, s in 0.0f64..3.0) {
            let rho = random_marginal(seed, &[2]);
            prop_assert!(unified_entropy(&rho, params(q, s)).unwrap() >= -1e-12);
        }

        #[test]
        fn subadditivity(seed in any::<u64>(), q in 1.01f64..4.0, s_frac in 0.0f64..=1.0) {
            // qs >= 1 with s drawn up to 3/q
            let s = (1.0 + s_frac * 2.0) / q;
            let p = params(q, s);
            let psi = haar_random_pure(3, seed).unwrap();
            let ab = unified_entropy(&psi.reduced(&[0, 1]).unwrap(), p).unwrap();
            let a = unified_entropy(&psi.reduced(&[0]).unwrap(), p).unwrap();
            let b = unified_entropy(&psi.reduced(&[1]).unwrap(), p).unwrap();
            prop_assert!(ab <= a + b + 1e-9, "{} > {} + {}", ab, a, b);
        }
    }
}
