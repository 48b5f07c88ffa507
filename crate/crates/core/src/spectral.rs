//! Dense Hermitian linear algebra for matrices up to dimension 64.
//!
//! The eigensolver is a cyclic complex Jacobi iteration. Each rotation first
//! removes the phase of the pivot `a_pq` and then applies the real symmetric
//! Jacobi rotation, so the accumulated transform stays unitary.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest matrix dimension accepted by the kernel.
pub const MAX_DIM: usize = 64;
/// Max-norm tolerance on `|m - m†|`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero; anything lower is an error.
pub const PSD_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius threshold, relative to `max(1, ||m||_F)`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |i, j| {
            self.get(i / m, j / m) * other.get(i % m, j % m)
        })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-norm of the entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m_ij - conj(m_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v.get(i, k) * self.eigenvalues[k] * v.get(j, k).conj())
                .sum()
        })
    }

    /// Eigenvector `k` as a column.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|i| self.eigenvectors.get(i, k)).collect()
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if m.dim() > MAX_DIM {
        return Err(Error::InvalidMatrix(format!(
            "dimension {} exceeds {MAX_DIM}",
            m.dim()
        )));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL || !defect.is_finite() {
        return Err(Error::NonHermitian(defect));
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut a = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0)).data;
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n).data;
    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let eigenvalues = order.iter().map(|&k| a[k * n + k].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[i * n + order[j]]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation annihilating `a[p][q]`; accumulates into `v`.
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let theta = (a[q * n + q].re - a[p * n + p].re) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let unphase = phase.conj();

    for k in 0..n {
        let x = a[k * n + p];
        let y = a[k * n + q] * unphase;
        a[k * n + p] = x * c - y * s;
        a[k * n + q] = x * s + y * c;
    }
    for k in 0..n {
        let x = a[p * n + k];
        let y = a[q * n + k] * phase;
        a[p * n + k] = x * c - y * s;
        a[q * n + k] = x * s + y * c;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
    for k in 0..n {
        let x = v[k * n + p];
        let y = v[k * n + q] * unphase;
        v[k * n + p] = x * c - y * s;
        v[k * n + q] = x * s + y * c;
    }
}

/// Eigendecomposition of a PSD matrix with eigenvalues in `[-PSD_TOL, 0)` clamped to 0.
pub fn eig_psd(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let mut eig = eig_hermitian(m)?;
    if let Some(&min) = eig.eigenvalues.last() {
        if min < -PSD_TOL {
            return Err(Error::NegativeEigenvalue(min));
        }
    }
    for l in &mut eig.eigenvalues {
        *l = l.max(0.0);
    }
    Ok(eig)
}

/// Clamped spectrum of a PSD matrix, descending.
pub fn psd_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eig_psd(m)?.eigenvalues)
}

/// `tr m^q` over the clamped spectrum. Only strictly positive eigenvalues
/// contribute, so `0^0` counts as 0.
pub fn matrix_power_trace(m: &ComplexMatrix, q: f64) -> Result<f64> {
    if !(q >= 0.0) || !q.is_finite() {
        return Err(crate::error::domain(format!("power q = {q} must be finite and >= 0")));
    }
    Ok(power_sum(&psd_spectrum(m)?, q))
}

pub(crate) fn power_sum(spectrum: &[f64], q: f64) -> f64 {
    spectrum
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| if q == 1.0 { l } else { l.powf(q) })
        .sum()
}

/// Principal square root of a PSD matrix.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_psd(m)?;
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|l| l.sqrt()).collect();
    Ok(EigenDecomposition {
        eigenvalues: roots,
        eigenvectors: eig.eigenvectors,
    }
    .reconstruct())
}

/// Singular values (descending) of a column set, by one-sided Jacobi.
///
/// `columns[j]` is column `j`; all columns must have the same length. Small
/// singular values are resolved to high relative accuracy, which the Wootters
/// kernel relies on for rank-deficient inputs.
pub fn singular_values(columns: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    let mut cols: Vec<Vec<Complex64>> = columns.to_vec();
    let ncols = cols.len();
    if ncols == 0 {
        return Ok(Vec::new());
    }
    let rows = cols[0].len();
    if cols.iter().any(|c| c.len() != rows) {
        return Err(Error::InvalidMatrix("ragged column set".into()));
    }
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..ncols {
            for q in (p + 1)..ncols {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let unphase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    // phase-align column q so that ⟨a_p, a_q⟩ is real before rotating
                    let yq = *y * unphase;
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}
