//! Concurrence, entanglement of formation and unified-(q,s) entanglement on
//! the domains where they have closed forms: pure bipartite states and
//! two-qubit mixed states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::{shannon, unified_entropy_of_spectrum, UnifiedParams};
use crate::error::{domain, Error, Result};
use crate::qstate::{Bipartition, DensityMatrix, PureState};
use crate::spectral;

/// Slack allowed outside `[0, 1]` before an f-function argument is rejected.
pub const CLAMP_BAND: f64 = 1e-12;

/// Eigenvalues of ρ below this are dropped in the Wootters kernel.
const RANK_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PureBipartite,
    #[serde(rename = "wootters_2qubit")]
    Wootters2Qubit,
    FOfCSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    pub method: Method,
}

impl MeasureValue {
    fn new(value: f64, method: Method) -> Self {
        Self {
            value: value.max(0.0),
            method,
        }
    }
}

/// How a (state, partition) pair is evaluated.
enum Route {
    /// The partition covers every subsystem: reduce to the left block.
    Pure(DensityMatrix),
    /// A single pair of qubits: their two-qubit marginal.
    TwoQubit(DensityMatrix),
}

fn route(psi: &PureState, part: &Bipartition) -> Result<Route> {
    let n = psi.num_subsystems();
    part.check_within(n)?;
    if part.covers(n) {
        return Ok(Route::Pure(psi.reduced(part.left())?));
    }
    if let ([a], [b]) = (part.left(), part.right()) {
        let rho = psi.reduced(&[*a, *b])?;
        if rho.is_two_qubit() {
            return Ok(Route::TwoQubit(rho));
        }
    }
    Err(Error::UnsupportedDomain(format!(
        "partition {part} leaves a mixed marginal that is not two-qubit"
    )))
}

fn clamp_unit(x: f64) -> Result<f64> {
    if !(x >= -CLAMP_BAND && x <= 1.0 + CLAMP_BAND) {
        return Err(domain(format!("argument {x} outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

/// `√(2[1 − tr ρ_L²])` for a pure state across a bipartition covering all subsystems.
///
/// Evaluated through the 2×2 minors of the reshaped amplitude matrix,
/// `1 − tr ρ_L² = 2 Σ |ψ_ik ψ_jl − ψ_il ψ_jk|²`, which stays accurate near
/// product states where the direct form cancels.
pub fn concurrence_pure(psi: &PureState, part: &Bipartition) -> Result<MeasureValue> {
    if !part.covers(psi.num_subsystems()) {
        return Err(Error::BadPartition(format!(
            "{part} does not cover all {} subsystems",
            psi.num_subsystems()
        )));
    }
    let (rows, cols, m) = psi.bipartite_matrix(part.left())?;
    let at = |i: usize, k: usize| m[i * cols + k];
    let mut sum = 0.0;
    for i in 0..rows {
        for j in i + 1..rows {
            for k in 0..cols {
                for l in k + 1..cols {
                    sum += (at(i, k) * at(j, l) - at(i, l) * at(j, k)).norm_sqr();
                }
            }
        }
    }
    Ok(MeasureValue::new((4.0 * sum).sqrt(), Method::PureBipartite))
}

/// Wootters concurrence `max{λ₁ − λ₂ − λ₃ − λ₄, 0}` of a two-qubit state.
///
/// The `λᵢ` are the singular values of `τ = Wᵀ(σ_y⊗σ_y)W` where `ρ = WW†`,
/// since `ρρ̃` and `ττ†` share their nonzero spectrum.
pub fn concurrence_2q(rho: &DensityMatrix) -> Result<MeasureValue> {
    if !rho.is_two_qubit() {
        return Err(Error::BadDims(format!("{:?} is not a two-qubit state", rho.dims())));
    }
    let eig = spectral::eig_psd(rho.matrix())?;
    let w: Vec<Vec<Complex64>> = (0..4)
        .filter(|&k| eig.eigenvalues[k] > RANK_CUTOFF)
        .map(|k| {
            let root = eig.eigenvalues[k].sqrt();
            eig.vector(k).into_iter().map(|z| z * root).collect()
        })
        .collect();
    // σ_y⊗σ_y maps (a, b, c, d) to (−d, c, b, −a)
    let flip = |v: &[Complex64]| [-v[3], v[2], v[1], -v[0]];
    let tau: Vec<Vec<Complex64>> = w
        .iter()
        .map(|wj| {
            let fj = flip(wj);
            w.iter()
                .map(|wi| wi.iter().zip(&fj).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    let mut lambda = spectral::singular_values(&tau)?;
    lambda.resize(4, 0.0);
    let c = lambda[0] - lambda[1] - lambda[2] - lambda[3];
    Ok(MeasureValue::new(c, Method::Wootters2Qubit))
}

/// Concurrence of a pure state across `part`, or of the two-qubit marginal
/// when `part` names one qubit on each side and leaves others out.
pub fn concurrence(psi: &PureState, part: &Bipartition) -> Result<MeasureValue> {
    match route(psi, part)? {
        Route::Pure(_) => concurrence_pure(psi, part),
        Route::TwoQubit(rho) => concurrence_2q(&rho),
    }
}

/// The two eigenvalues `(1 ± √(1−x))/2`, the smaller one computed without cancellation.
fn qubit_spectrum(x: f64) -> [f64; 2] {
    let u = (1.0 - x).sqrt();
    [(1.0 + u) / 2.0, x / (2.0 * (1.0 + u))]
}

/// `f(x) = h((1 + √(1−x))/2)`, the EoF as a function of `C²`.
pub fn wootters_f(x: f64) -> Result<f64> {
    Ok(shannon(&qubit_spectrum(clamp_unit(x)?)))
}

/// `f_{q,s}(x) = [((1+√(1−x))^q + (1−√(1−x))^q)^s − 2^{qs}] / [(1−q) s 2^{qs}]`.
///
/// This is `S_{q,s}` of the spectrum `(1 ± √(1−x))/2`, so the Rényi and von
/// Neumann limits follow the entropy's branches.
pub fn unified_f(x: f64, p: UnifiedParams) -> Result<f64> {
    unified_entropy_of_spectrum(&qubit_spectrum(clamp_unit(x)?), p)
}

/// EoF of a pure bipartite state (`S(ρ_L)`) or of a two-qubit marginal (`f(C²)`).
pub fn eof(psi: &PureState, part: &Bipartition) -> Result<MeasureValue> {
    match route(psi, part)? {
        Route::Pure(left) => Ok(MeasureValue::new(shannon(&left.spectrum()?), Method::PureBipartite)),
        Route::TwoQubit(rho) => eof_2q(&rho),
    }
}

/// `f(C²(ρ))` for a two-qubit density matrix.
pub fn eof_2q(rho: &DensityMatrix) -> Result<MeasureValue> {
    let c = concurrence_mixed(rho)?;
    Ok(MeasureValue::new(wootters_f(c * c)?, Method::FOfCSquared))
}

/// Unified-(q,s) entanglement: `S_{q,s}(ρ_L)` for pure bipartite states,
/// `f_{q,s}(C²)` for a two-qubit marginal inside the envelope `q ≥ 1, 0 ≤ s ≤ 1, qs ≤ 3`.
pub fn unified_ent(psi: &PureState, part: &Bipartition, p: UnifiedParams) -> Result<MeasureValue> {
    match route(psi, part)? {
        Route::Pure(left) => Ok(MeasureValue::new(
            unified_entropy_of_spectrum(&left.spectrum()?, p)?,
            Method::PureBipartite,
        )),
        Route::TwoQubit(rho) => unified_ent_2q(&rho, p),
    }
}

pub fn unified_ent_2q(rho: &DensityMatrix, p: UnifiedParams) -> Result<MeasureValue> {
    if !p.in_two_qubit_envelope() {
        return Err(Error::UnsupportedDomain(format!(
            "(q, s) = ({}, {}) is outside q >= 1, 0 <= s <= 1, qs <= 3",
            p.q, p.s
        )));
    }
    let c = concurrence_mixed(rho)?;
    Ok(MeasureValue::new(unified_f(c * c, p)?, Method::FOfCSquared))
}

fn concurrence_mixed(rho: &DensityMatrix) -> Result<f64> {
    if !rho.is_two_qubit() {
        return Err(Error::UnsupportedDomain(format!(
            "mixed state with dims {:?}: only two-qubit states have a closed form",
            rho.dims()
        )));
    }
    Ok(concurrence_2q(rho)?.value)
}

/// `C(ρ_{A_i A_j})` of the two-qubit marginal of a pure state (0-based indices).
pub fn pair_concurrence(psi: &PureState, i: usize, j: usize) -> Result<f64> {
    Ok(concurrence_2q(&psi.reduced(&[i, j])?)?.value)
}
